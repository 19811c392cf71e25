use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use lbkd::random::try_uniform_points;
use lbkd::verify::{run_selftest, SelftestConfig, SelftestReport, WalkthroughFixture};
use lbkd::{knn, radius_query, Builder, KdTree, SplitMode};
use serde::{Deserialize, Serialize};

use crate::csv_io::{parse_points, parse_tuple, read_tree, write_tree};

pub struct BuildArgs<'a> {
    pub input: &'a Path,
    pub dims: usize,
    pub mode: SplitMode,
    pub output: &'a Path,
    pub with_payload: bool,
}

pub fn build(args: &BuildArgs<'_>) -> Result<KdTree> {
    let text = fs::read_to_string(args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let points = parse_points(&text, args.dims, args.with_payload)
        .with_context(|| format!("parsing {}", args.input.display()))?;
    let tree = Builder::new(args.mode).build(points)?;
    fs::write(args.output, write_tree(&tree))
        .with_context(|| format!("writing {}", args.output.display()))?;
    Ok(tree)
}

#[derive(Debug, Clone, Copy)]
pub enum QueryKind {
    Knn(usize),
    Radius(f64),
}

/// Runs one query against a tree file and renders `index,dist2` lines.
pub fn query(tree_path: &Path, point: &str, kind: QueryKind) -> Result<String> {
    let text = fs::read_to_string(tree_path)
        .with_context(|| format!("reading {}", tree_path.display()))?;
    let tree = read_tree(&text).with_context(|| format!("loading {}", tree_path.display()))?;
    let q = parse_tuple(point).context("parsing query point")?;
    if q.len() != tree.dims() {
        bail!(
            "query point has {} coordinates, tree has {} dimensions",
            q.len(),
            tree.dims()
        );
    }
    render_query(&tree, &q, kind)
}

pub fn render_query(tree: &KdTree, q: &[f64], kind: QueryKind) -> Result<String> {
    let mut out = String::new();
    match kind {
        QueryKind::Knn(m) => {
            if m == 0 {
                bail!("--knn must be at least 1");
            }
            for hit in knn(tree, q, m)? {
                writeln!(out, "{},{}", hit.index, hit.dist2).unwrap();
            }
        }
        QueryKind::Radius(r) => {
            if r.is_nan() || r < 0.0 {
                bail!("--radius must be a non-negative number");
            }
            let points = tree.points();
            for index in radius_query(tree, q, r)? {
                let dist2 = lbkd::queries::squared_distance(points.point(index as usize), q);
                writeln!(out, "{index},{dist2}").unwrap();
            }
        }
    }
    Ok(out)
}

/// One benchmark result, printed as a JSON line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub k: usize,
    pub mode: String,
    pub seed: u64,
    pub reps: u32,
    /// Mean wall time of one build, excluding point generation and copies.
    pub millis: f64,
}

pub struct BenchArgs<'a> {
    pub n: usize,
    pub dims: usize,
    pub mode: SplitMode,
    pub seed: u64,
    pub reps: u32,
    pub dump: Option<&'a Path>,
}

pub fn bench(args: &BenchArgs<'_>) -> Result<BenchRecord> {
    if args.dims == 0 {
        bail!("--dims must be at least 1");
    }
    if args.reps == 0 {
        bail!("--reps must be at least 1");
    }
    let points = try_uniform_points(args.n, args.dims, args.seed).map_err(|e| {
        anyhow::anyhow!(
            "cannot allocate {} points of {} dimensions: {e}",
            args.n,
            args.dims
        )
    })?;
    let builder = Builder::new(args.mode);
    let mut total = Duration::ZERO;
    let mut last = None;
    for _ in 0..args.reps {
        let input = points.clone();
        let start = Instant::now();
        let tree = builder.build(input)?;
        total += start.elapsed();
        last = Some(tree);
    }
    if let (Some(path), Some(tree)) = (args.dump, last) {
        fs::write(path, write_tree(&tree))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(BenchRecord {
        n: args.n,
        k: args.dims,
        mode: args.mode.name().to_string(),
        seed: args.seed,
        reps: args.reps,
        millis: total.as_secs_f64() * 1e3 / f64::from(args.reps),
    })
}

pub struct SelftestArgs {
    pub fixtures: Option<PathBuf>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

pub fn selftest(args: &SelftestArgs) -> Result<SelftestReport> {
    let mut config = SelftestConfig::default();
    if let Some(path) = &args.fixtures {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        config.fixture = serde_json::from_str::<WalkthroughFixture>(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    Ok(run_selftest(&config))
}

pub fn render_selftest(report: &SelftestReport) -> String {
    let mut out = String::new();
    for case in &report.cases {
        let status = if case.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {}: {}", case.name, case.detail).unwrap();
    }
    out
}
