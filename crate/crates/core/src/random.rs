//! Seeded point generators. All of them draw from ChaCha8, so a given seed
//! yields the same points on every platform.

use std::collections::TryReserveError;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::points::Points;

pub type Prng = ChaCha8Rng;

pub fn rng(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points uniform in `[0, 1)^dims`; payload is the generation index.
pub fn uniform_points(n: usize, dims: usize, seed: u64) -> Points {
    try_uniform_points(n, dims, seed).expect("allocation failed")
}

/// [`uniform_points`] reporting allocation failure instead of aborting.
pub fn try_uniform_points(n: usize, dims: usize, seed: u64) -> Result<Points, TryReserveError> {
    let len = n.saturating_mul(dims);
    let mut coords: Vec<f64> = Vec::new();
    coords.try_reserve_exact(len)?;
    let mut payloads: Vec<u64> = Vec::new();
    payloads.try_reserve_exact(n)?;
    let mut rng = rng(seed);
    coords.extend((0..len).map(|_| rng.random::<f64>()));
    payloads.extend(0..n as u64);
    Ok(Points::from_flat(dims, coords, payloads).expect("dims >= 1"))
}

/// `n` points whose values in every dimension are a shuffle of `0..n`, so no two
/// points share a coordinate in any dimension.
pub fn distinct_points(n: usize, dims: usize, seed: u64) -> Points {
    let mut rng = rng(seed);
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(dims);
    for _ in 0..dims {
        let mut column: Vec<f64> = (0..n).map(|v| v as f64).collect();
        column.shuffle(&mut rng);
        columns.push(column);
    }
    let mut coords = Vec::with_capacity(n * dims);
    for i in 0..n {
        coords.extend(columns.iter().map(|c| c[i]));
    }
    Points::from_flat(dims, coords, (0..n as u64).collect()).expect("dims >= 1")
}

/// `n` points with every coordinate drawn from `alphabet`, producing heavy
/// duplication.
pub fn alphabet_points(n: usize, dims: usize, alphabet: &[f64], seed: u64) -> Points {
    let mut rng = rng(seed);
    let coords: Vec<f64> = (0..n * dims)
        .map(|_| alphabet[rng.random_range(0..alphabet.len())])
        .collect();
    Points::from_flat(dims, coords, (0..n as u64).collect()).expect("dims >= 1")
}
