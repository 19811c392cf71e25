//! The ten-point, two-dimensional build traced phase by phase.

use serde::{Deserialize, Serialize};

use crate::builder::{Builder, PhaseRecorder};
use crate::error::Result;
use crate::points::Points;
use crate::tree::SplitMode;

/// One printed state: tags plus the x and y rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateTable {
    pub name: String,
    pub tags: Vec<u32>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkthroughFixture {
    pub input: Vec<[f64; 2]>,
    pub tables: Vec<StateTable>,
}

fn table(name: &str, tags: [u32; 10], x: [u32; 10], y: [u32; 10]) -> StateTable {
    StateTable {
        name: name.to_string(),
        tags: tags.to_vec(),
        x: x.iter().map(|&v| f64::from(v)).collect(),
        y: y.iter().map(|&v| f64::from(v)).collect(),
    }
}

pub const WALKTHROUGH_INPUT: [[f64; 2]; 10] = [
    [10.0, 15.0],
    [46.0, 63.0],
    [68.0, 21.0],
    [40.0, 33.0],
    [25.0, 54.0],
    [15.0, 43.0],
    [44.0, 58.0],
    [45.0, 40.0],
    [62.0, 69.0],
    [53.0, 67.0],
];

pub fn walkthrough_input() -> Points {
    Points::from_rows(2, &WALKTHROUGH_INPUT).expect("two columns")
}

impl WalkthroughFixture {
    /// The eight states of the trace, initial through final.
    pub fn reference() -> Self {
        let tables = vec![
            table(
                "initial",
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                [10, 46, 68, 40, 25, 15, 44, 45, 62, 53],
                [15, 63, 21, 33, 54, 43, 58, 40, 69, 67],
            ),
            table(
                "after step 0 sort",
                [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                [10, 15, 25, 40, 44, 45, 46, 53, 62, 68],
                [15, 43, 54, 33, 58, 40, 63, 67, 69, 21],
            ),
            table(
                "after step 0 tags updated",
                [1, 1, 1, 1, 1, 1, 0, 2, 2, 2],
                [10, 15, 25, 40, 44, 45, 46, 53, 62, 68],
                [15, 43, 54, 33, 58, 40, 63, 67, 69, 21],
            ),
            table(
                "after step 1 sort",
                [0, 1, 1, 1, 1, 1, 1, 2, 2, 2],
                [46, 10, 40, 45, 15, 25, 44, 68, 53, 62],
                [63, 15, 33, 40, 43, 54, 58, 21, 67, 69],
            ),
            table(
                "after step 1 tags updated",
                [0, 3, 3, 3, 1, 4, 4, 5, 2, 6],
                [46, 10, 40, 45, 15, 25, 44, 68, 53, 62],
                [63, 15, 33, 40, 43, 54, 58, 21, 67, 69],
            ),
            table(
                "after step 2 sort",
                [0, 1, 2, 3, 3, 3, 4, 4, 5, 6],
                [46, 15, 53, 10, 40, 45, 25, 44, 68, 62],
                [63, 43, 67, 15, 33, 40, 54, 58, 21, 69],
            ),
            table(
                "after step 2 tags updated",
                [0, 1, 2, 7, 3, 8, 9, 4, 5, 6],
                [46, 15, 53, 10, 40, 45, 25, 44, 68, 62],
                [63, 43, 67, 15, 33, 40, 54, 58, 21, 69],
            ),
            table(
                "after final sort",
                [0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
                [46, 15, 53, 40, 44, 68, 62, 10, 45, 25],
                [63, 43, 67, 33, 58, 21, 69, 15, 40, 54],
            ),
        ];
        Self {
            input: WALKTHROUGH_INPUT.to_vec(),
            tables,
        }
    }

    pub fn input_points(&self) -> Result<Points> {
        Points::from_rows(2, &self.input)
    }

    /// Runs an instrumented round-robin build on the fixture's input and
    /// compares every recorded state with the expected tables. The prefix
    /// is sorted too so that every printed state is reproduced as-is.
    pub fn check(&self) -> std::result::Result<(), FixtureMismatch> {
        let points = self.input_points().map_err(|e| FixtureMismatch {
            table: "input".into(),
            detail: e.to_string(),
        })?;
        let mut recorder = PhaseRecorder::default();
        Builder::new(SplitMode::RoundRobin)
            .skip_placed_prefix(false)
            .parallel(false)
            .build_observed(points, &mut recorder)
            .map_err(|e| FixtureMismatch {
                table: "build".into(),
                detail: e.to_string(),
            })?;
        if recorder.snapshots.len() != self.tables.len() {
            return Err(FixtureMismatch {
                table: "trace".into(),
                detail: format!(
                    "{} recorded states, {} expected",
                    recorder.snapshots.len(),
                    self.tables.len()
                ),
            });
        }
        for (snapshot, expected) in recorder.snapshots.iter().zip(&self.tables) {
            let got = StateTable {
                name: expected.name.clone(),
                tags: snapshot.tags.clone(),
                x: snapshot.points.column(0),
                y: snapshot.points.column(1),
            };
            if &got != expected {
                return Err(FixtureMismatch {
                    table: expected.name.clone(),
                    detail: format!(
                        "expected tags {:?} x {:?} y {:?}, got tags {:?} x {:?} y {:?}",
                        expected.tags, expected.x, expected.y, got.tags, got.x, got.y
                    ),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureMismatch {
    pub table: String,
    pub detail: String,
}

impl std::fmt::Display for FixtureMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "fixture `{}` mismatch: {}", self.table, self.detail)
    }
}
