#![allow(dead_code)]

use alsat_core::cnf::CnfFormula;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5eed_2024;

/// Random width-`width` formula with `clauses` clauses over at most
/// `max_vars` variables, renumbered so every declared variable occurs.
pub fn random_formula(
    rng: &mut ChaCha8Rng,
    width: usize,
    clauses: usize,
    max_vars: usize,
) -> CnfFormula {
    let raw: Vec<Vec<i64>> = (0..clauses)
        .map(|_| {
            (0..width)
                .map(|_| {
                    let v = rng.gen_range(1..=max_vars as i64);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    let mut seen: Vec<i64> = raw.iter().flatten().map(|l| l.abs()).collect();
    seen.sort_unstable();
    seen.dedup();
    let rename = |l: i64| {
        let idx = seen.iter().position(|&v| v == l.abs()).unwrap() as i64 + 1;
        idx * l.signum()
    };
    let compact: Vec<Vec<i64>> = raw
        .iter()
        .map(|c| c.iter().map(|&l| rename(l)).collect())
        .collect();
    let refs: Vec<&[i64]> = compact.iter().map(Vec::as_slice).collect();
    CnfFormula::from_signed(seen.len(), &refs).unwrap()
}

/// 100 3-SAT instances with 1..=3 clauses and 100 2-SAT instances with
/// 1..=4 clauses.
pub fn corpus() -> Vec<CnfFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut out = Vec::with_capacity(200);
    for i in 0..100 {
        out.push(random_formula(&mut rng, 3, 1 + i % 3, 4));
    }
    for i in 0..100 {
        out.push(random_formula(&mut rng, 2, 1 + i % 4, 4));
    }
    out
}

pub fn two_sat_pair() -> CnfFormula {
    CnfFormula::from_signed(2, &[&[1, 2], &[-1, 2]]).unwrap()
}

pub fn xyz_pair() -> CnfFormula {
    CnfFormula::from_signed(3, &[&[1, 2, 3], &[1, 2, -3]]).unwrap()
}

/// All eight sign patterns over three variables.
pub fn all_patterns() -> CnfFormula {
    let clauses: Vec<Vec<i64>> = (0..8i64)
        .map(|mask| {
            (0..3)
                .map(|b| if mask >> b & 1 == 1 { -(b + 1) } else { b + 1 })
                .collect()
        })
        .collect();
    let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
    CnfFormula::from_signed(3, &refs).unwrap()
}
