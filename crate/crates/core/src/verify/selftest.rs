//! A compact run of every oracle suite with fixed seeds.

use crate::builder::Builder;
use crate::queries::{knn, radius_query};
use crate::random::{alphabet_points, distinct_points};
use crate::tree::SplitMode;
use crate::tree_math::{num_levels, segment_begin, subtree_size};
use crate::verify::fixture::WalkthroughFixture;
use crate::verify::invariants::InvariantChecker;
use crate::verify::oracles::{
    brute_knn, brute_radius, brute_segment_begins, brute_subtree_sizes, check_valid,
    is_permutation_of, reference_build, widest_dim_mismatch,
};

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub fixture: WalkthroughFixture,
    pub seed: u64,
    /// Random instances per suite configuration.
    pub trials: usize,
    /// Largest tree size for the index-formula sweep.
    pub max_formula_n: u32,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            fixture: WalkthroughFixture::reference(),
            seed: 0x6b64_7472_6565,
            trials: 10,
            max_formula_n: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub cases: Vec<CaseResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CaseResult> {
        self.cases.iter().find(|c| !c.passed)
    }
}

type Outcome = Result<String, String>;
type Suite<'a> = (&'a str, &'a dyn Fn(&SelftestConfig) -> Outcome);

pub fn run_selftest(config: &SelftestConfig) -> SelftestReport {
    let suites: [Suite; 7] = [
        ("walkthrough", &walkthrough),
        ("index formulas", &formulas),
        ("oracle build equivalence", &oracle_equivalence),
        ("validity under duplicates", &duplicates),
        ("widest split dimensions", &widest_dims),
        ("query equivalence", &queries),
        ("phase invariants", &invariants),
    ];
    let cases = suites
        .iter()
        .map(|(name, suite)| {
            let (passed, detail) = match suite(config) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CaseResult {
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect();
    SelftestReport { cases }
}

fn walkthrough(config: &SelftestConfig) -> Outcome {
    config.fixture.check().map_err(|e| e.to_string())?;
    Ok(format!("{} states reproduced", config.fixture.tables.len()))
}

fn formulas(config: &SelftestConfig) -> Outcome {
    let mut checks = 0u64;
    for n in 1..=config.max_formula_n {
        let sizes = brute_subtree_sizes(n);
        let begins = brute_segment_begins(n);
        for s in 0..n {
            let (ss, sb) = (subtree_size(s, n), segment_begin(s, n));
            if ss != sizes[s as usize] || sb != begins[s as usize] {
                return Err(format!(
                    "n={n} s={s}: subtree_size {ss} vs {}, segment_begin {sb} vs {}",
                    sizes[s as usize], begins[s as usize]
                ));
            }
            checks += 2;
        }
    }
    Ok(format!("{checks} checks"))
}

fn oracle_equivalence(config: &SelftestConfig) -> Outcome {
    let mut builds = 0;
    for n in [1usize, 2, 3, 7, 10, 31, 64, 255, 256, 257] {
        for dims in 1..=4 {
            for trial in 0..config.trials {
                let seed = config.seed ^ ((n as u64) << 32 | (dims as u64) << 16 | trial as u64);
                let points = distinct_points(n, dims, seed);
                for mode in [SplitMode::RoundRobin, SplitMode::Widest] {
                    let built = Builder::new(mode)
                        .build(points.clone())
                        .map_err(|e| e.to_string())?;
                    let reference = reference_build(&points, mode).map_err(|e| e.to_string())?;
                    if built != reference {
                        return Err(format!(
                            "{mode} n={n} k={dims} seed={seed:#x}: arrays differ"
                        ));
                    }
                    builds += 1;
                }
            }
        }
    }
    Ok(format!("{builds} builds"))
}

fn duplicates(config: &SelftestConfig) -> Outcome {
    for trial in 0..config.trials as u64 {
        let n = 1 + (trial as usize * 37) % 300;
        let dims = 1 + trial as usize % 4;
        let seed = config.seed.wrapping_add(trial);
        let points = alphabet_points(n, dims, &[0.0, 1.0, 2.0], seed);
        for mode in [SplitMode::RoundRobin, SplitMode::Widest] {
            let tree = Builder::new(mode)
                .build(points.clone())
                .map_err(|e| e.to_string())?;
            if let Some(v) = check_valid(&tree).violation {
                return Err(format!("{mode} n={n} k={dims} seed={seed:#x}: {v:?}"));
            }
            if !is_permutation_of(&tree, &points) {
                return Err(format!("{mode} n={n} k={dims} seed={seed:#x}: points lost"));
            }
        }
    }
    Ok(format!("{} instances", config.trials))
}

fn widest_dims(config: &SelftestConfig) -> Outcome {
    for trial in 0..config.trials as u64 {
        let dims = 2 + trial as usize % 3;
        let n = 1 + (trial as usize * 97) % 512;
        let seed = config.seed.wrapping_mul(31).wrapping_add(trial);
        let points = crate::random::uniform_points(n, dims, seed);
        let tree = Builder::new(SplitMode::Widest)
            .build(points)
            .map_err(|e| e.to_string())?;
        if let Some((s, got, expected)) = widest_dim_mismatch(&tree) {
            return Err(format!(
                "n={n} k={dims} seed={seed:#x}: node {s} split {got}, widest {expected}"
            ));
        }
    }
    Ok(format!("{} instances", config.trials))
}

fn queries(config: &SelftestConfig) -> Outcome {
    for trial in 0..config.trials as u64 {
        let dims = 1 + trial as usize % 4;
        let n = 1 + (trial as usize * 53) % 512;
        let seed = config.seed.wrapping_add(1000 + trial);
        let points = crate::random::uniform_points(n, dims, seed);
        let probes = crate::random::uniform_points(4, dims, seed ^ 1);
        let tree = Builder::new(SplitMode::RoundRobin)
            .build(points.clone())
            .map_err(|e| e.to_string())?;
        let oracle_points = tree.points();
        for (q, _) in probes.iter() {
            for m in [1, 5, 17] {
                let got = knn(&tree, q, m).map_err(|e| e.to_string())?;
                if got != brute_knn(oracle_points, q, m) {
                    return Err(format!("knn n={n} k={dims} m={m} seed={seed:#x}"));
                }
            }
            let got = radius_query(&tree, q, 0.3).map_err(|e| e.to_string())?;
            if got != brute_radius(oracle_points, q, 0.3) {
                return Err(format!("radius n={n} k={dims} seed={seed:#x}"));
            }
        }
    }
    Ok(format!("{} instances", config.trials))
}

fn invariants(config: &SelftestConfig) -> Outcome {
    for (i, n) in [2usize, 10, 100, 1000].into_iter().enumerate() {
        let points = crate::random::uniform_points(n, 3, config.seed.wrapping_add(i as u64));
        for mode in [SplitMode::RoundRobin, SplitMode::Widest] {
            let mut checker = match mode {
                SplitMode::RoundRobin => InvariantChecker::round_robin(n, 3),
                SplitMode::Widest => InvariantChecker::widest(n, 3),
            };
            let (_, stats) = Builder::new(mode)
                .skip_placed_prefix(false)
                .build_observed(points.clone(), &mut checker)
                .map_err(|e| e.to_string())?;
            if let Some(f) = checker.failures.first() {
                return Err(format!("{mode} n={n}: {f}"));
            }
            let levels = num_levels(n as u32);
            if stats.sort_phases != levels
                || stats.update_phases != levels - 1
                || stats.tag_entries != n
            {
                return Err(format!("{mode} n={n}: unexpected accounting {stats:?}"));
            }
        }
    }
    Ok("4 sizes, both modes".into())
}
