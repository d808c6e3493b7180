//! Lattice-sum model counter.
//!
//! Each fresh variable `x_j` is replaced by `omega^(sum_ax z_{j,ax} m_ax)`
//! with `omega = exp(2 pi i / l)` and the inverse-relaxed formula is summed
//! over all `(m_1, ..., m_d)` in `0..l`. A monomial `prod x_j^{e_j}` then
//! contributes `l^d` if every integer axis sum `sum_j e_j z_{j,ax}` is
//! divisible by `l`, and nothing otherwise. When no nonzero `e` has all its
//! axis sums zero and `l` exceeds every `|axis sum|`, only the constant term
//! survives: `S = l^d C`.

pub mod pipeline;
pub mod sum;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::AlgebraicFormula;
use crate::report::{sig12, Report};
use crate::spectrum::{choose_modulus, integerize, FrequencyMatrix, SignVector};

pub use pipeline::{count, Overrides, PipelineError, Stage, StageError};
pub use sum::ComplexSum;

pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_MAX_POINTS: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConfig {
    /// Bound on both the imaginary residual and the distance of `C` from the
    /// nearest attainable constant.
    pub tolerance: f64,
    /// Largest `l^d` accepted without `force`.
    pub max_points: u64,
    pub force: bool,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig {
            tolerance: DEFAULT_TOLERANCE,
            max_points: DEFAULT_MAX_POINTS,
            force: false,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CounterError {
    #[error("the lattice sum needs the inverse-relaxed formula")]
    NotInverseRelaxed,
    #[error("frequency matrix has {found} rows but the formula has {expected} variables")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("lattice has {points} points, over the budget of {limit} (use force to override)")]
    BudgetExceeded { points: u128, limit: u64 },
    #[error(
        "constant term {constant_term} is not a valid count: imaginary residual \
         {imaginary_residual:e}, distance to nearest count {lattice_distance:e}, tolerance {tolerance:e}"
    )]
    ResidualTooLarge {
        constant_term: f64,
        imaginary_residual: f64,
        lattice_distance: f64,
        tolerance: f64,
    },
}

/// Real frequencies, their integerization and the lattice modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyAssignment {
    pub real_freqs: FrequencyMatrix<f64>,
    pub integer_freqs: FrequencyMatrix<i64>,
    pub multiplier: u64,
    pub modulus: u64,
}

impl FrequencyAssignment {
    /// Integerizes with `multiplier` and takes the certified modulus.
    pub fn new(real_freqs: FrequencyMatrix<f64>, multiplier: u64) -> Self {
        let integer_freqs = integerize(&real_freqs, multiplier);
        let modulus = choose_modulus(&integer_freqs);
        FrequencyAssignment {
            real_freqs,
            integer_freqs,
            multiplier,
            modulus,
        }
    }

    pub fn with_modulus(mut self, modulus: u64) -> Self {
        self.modulus = modulus;
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.integer_freqs.n()
    }

    #[inline]
    pub fn axes(&self) -> usize {
        self.integer_freqs.axes()
    }

    /// `l` exceeds `max_ax sum_j |z_{j,ax}|`, so no axis sum can alias.
    pub fn modulus_certified(&self) -> bool {
        self.modulus + 1 >= choose_modulus(&self.integer_freqs)
    }
}

/// Intermediate artifacts of a count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Fresh variables.
    pub n: usize,
    pub num_clauses: usize,
    pub num_variables: usize,
    pub occurring_variables: usize,
    #[serde(serialize_with = "sig12::serialize_option")]
    pub min_max_frequency: Option<f64>,
    pub argmin: Option<SignVector>,
    pub integer_min_max: Option<i64>,
    pub multiplier: u64,
    pub modulus: u64,
    pub modulus_certified: bool,
    pub num_points: u128,
    #[serde(serialize_with = "serialize_rows_f64")]
    pub real_freqs: Vec<Vec<f64>>,
    pub integer_freqs: Vec<Vec<i64>>,
}

fn serialize_rows_f64<S: serde::Serializer>(rows: &[Vec<f64>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        rows.iter()
            .map(|r| r.iter().map(|&x| sig12::round(x)).collect::<Vec<_>>()),
    )
}

fn rows<T: Copy>(m: &FrequencyMatrix<T>) -> Vec<Vec<T>> {
    (0..m.n()).map(|j| m.row(j).to_vec()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountResult {
    /// `k` over all `2^N` assignments of the declared variables.
    pub count: u64,
    pub satisfiable: bool,
    #[serde(serialize_with = "sig12::serialize")]
    pub constant_term: f64,
    /// `k` over the occurring variables only.
    pub relaxed_count: u64,
    #[serde(serialize_with = "sig12::serialize_complex")]
    pub raw_sum: Complex64,
    pub lattice_size: u64,
    pub axes: usize,
    #[serde(serialize_with = "sig12::serialize")]
    pub imaginary_residual: f64,
    #[serde(serialize_with = "sig12::serialize")]
    pub lattice_distance: f64,
    #[serde(serialize_with = "sig12::serialize")]
    pub tolerance: f64,
    pub diagnostics: Diagnostics,
}

impl Report for CountResult {
    fn csv_header() -> &'static str {
        "count,satisfiable,constant_term,relaxed_count,raw_sum_re,raw_sum_im,lattice_size,axes,\
         imaginary_residual,lattice_distance,multiplier"
    }

    fn csv_rows(&self) -> Vec<String> {
        vec![format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.count,
            self.satisfiable,
            sig12::format(self.constant_term),
            self.relaxed_count,
            sig12::format(self.raw_sum.re),
            sig12::format(self.raw_sum.im),
            self.lattice_size,
            self.axes,
            sig12::format(self.imaginary_residual),
            sig12::format(self.lattice_distance),
            self.diagnostics.multiplier,
        )]
    }
}

/// `sum_{m=1..l} exp(2 pi i t m / l)`, one term at a time.
pub fn roots_of_unity_sum_check(t: i64, l: u64) -> Complex64 {
    assert!(l >= 1, "l must be positive");
    let l_i = l as i128;
    (1..=l as i128)
        .map(|m| {
            let k = (t as i128 * m).rem_euclid(l_i);
            Complex64::from_polar(1.0, TAU * k as f64 / l as f64)
        })
        .collect::<ComplexSum>()
        .value()
}

/// Sums the inverse-relaxed formula over the `l^d` lattice and recovers the
/// constant term and the count over the occurring variables.
///
/// The returned diagnostics cover only what the formula and `fa` know; the
/// pipeline fills in the spectrum and the declared variable count.
pub fn lattice_count(
    af: &AlgebraicFormula,
    fa: &FrequencyAssignment,
    config: &LatticeConfig,
) -> Result<CountResult, CounterError> {
    if !af.is_inverse_relaxed() {
        return Err(CounterError::NotInverseRelaxed);
    }
    let n = af.num_variables();
    if fa.n() != n {
        return Err(CounterError::DimensionMismatch {
            expected: n,
            found: fa.n(),
        });
    }
    if fa.modulus == 0 {
        return Err(CounterError::ZeroModulus);
    }
    let d = fa.axes();
    let points = (fa.modulus as u128).pow(d as u32);
    if points > config.max_points as u128 && !config.force {
        return Err(CounterError::BudgetExceeded {
            points,
            limit: config.max_points,
        });
    }

    let l = fa.modulus as usize;
    let roots: Vec<Complex64> = (0..l)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / l as f64))
        .collect();
    let step: Vec<usize> = (0..n * d)
        .map(|i| fa.integer_freqs.get(i / d, i % d).rem_euclid(l as i64) as usize)
        .collect();
    let inner_points = (l as u128).pow(d as u32 - 1) as u64;

    // One task per value of the first coordinate; the remaining axes run as
    // an odometer where every tick of axis `ax` adds `z_{j,ax}` mod l to each
    // phase (including the wrap from l-1 to 0, since -(l-1) z = z mod l).
    let partials: Vec<Complex64> = (0..l)
        .into_par_iter()
        .map(|m0| {
            let mut phase: Vec<usize> = (0..n)
                .map(|j| (step[j * d] as u128 * m0 as u128 % l as u128) as usize)
                .collect();
            let mut values = vec![Complex64::new(1.0, 0.0); n];
            let mut inverses = values.clone();
            let mut counters = vec![0usize; d];
            let mut sum = ComplexSum::new();
            for _ in 0..inner_points {
                for j in 0..n {
                    values[j] = roots[phase[j]];
                    inverses[j] = values[j].conj();
                }
                sum.add(af.evaluate_with_inverses(&values, &inverses));
                for ax in (1..d).rev() {
                    for j in 0..n {
                        phase[j] += step[j * d + ax];
                        if phase[j] >= l {
                            phase[j] -= l;
                        }
                    }
                    counters[ax] += 1;
                    if counters[ax] < l {
                        break;
                    }
                    counters[ax] = 0;
                }
            }
            sum.value()
        })
        .collect();
    let raw_sum = partials.into_iter().collect::<ComplexSum>().value();

    let volume = points as f64;
    let constant_term = raw_sum.re / volume;
    let imaginary_residual = raw_sum.im.abs() / volume;
    let occurring = af.ior_factors().len();
    let max_count = 1u64 << occurring;
    let half_cube = 2f64.powi(n as i32 - 1);
    let nearest = ((constant_term + 1.0) * half_cube).round();
    let relaxed_count = nearest.clamp(0.0, max_count as f64) as u64;
    let lattice_value = (2.0 * relaxed_count as f64 - 2.0 * half_cube) / (2.0 * half_cube);
    let lattice_distance = (constant_term - lattice_value).abs();
    if !(imaginary_residual <= config.tolerance && lattice_distance <= config.tolerance) {
        return Err(CounterError::ResidualTooLarge {
            constant_term,
            imaginary_residual,
            lattice_distance,
            tolerance: config.tolerance,
        });
    }

    Ok(CountResult {
        count: relaxed_count,
        satisfiable: relaxed_count >= 1,
        constant_term,
        relaxed_count,
        raw_sum,
        lattice_size: fa.modulus,
        axes: d,
        imaginary_residual,
        lattice_distance,
        tolerance: config.tolerance,
        diagnostics: Diagnostics {
            n,
            num_clauses: af.clause_factors().len(),
            num_variables: occurring,
            occurring_variables: occurring,
            min_max_frequency: None,
            argmin: None,
            integer_min_max: None,
            multiplier: fa.multiplier,
            modulus: fa.modulus,
            modulus_certified: fa.modulus_certified(),
            num_points: points,
            real_freqs: rows(&fa.real_freqs),
            integer_freqs: rows(&fa.integer_freqs),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{apply_inverse_relaxation, encode};
    use crate::cnf::CnfFormula;
    use crate::relaxation::relax;
    use crate::spectrum::{build_frequencies, FrequencyScheme};

    fn inverse(cnf: &CnfFormula) -> AlgebraicFormula {
        apply_inverse_relaxation(&encode(&relax(cnf))).unwrap()
    }

    #[test]
    fn roots_of_unity() {
        assert!(roots_of_unity_sum_check(3, 7).norm() < 1e-12);
        assert!((roots_of_unity_sum_check(0, 7) - Complex64::new(7.0, 0.0)).norm() < 1e-12);
        assert!((roots_of_unity_sum_check(7, 7) - Complex64::new(7.0, 0.0)).norm() < 1e-12);
        assert!(roots_of_unity_sum_check(-5, 12).norm() < 1e-12);
    }

    #[test]
    fn two_sat_four_axes() {
        let cnf = CnfFormula::from_signed(2, &[&[1, 2], &[-1, 2]]).unwrap();
        let fa = FrequencyAssignment::new(build_frequencies(4, &FrequencyScheme::exp1()), 7);
        let r = lattice_count(&inverse(&cnf), &fa, &LatticeConfig::default()).unwrap();
        assert!((r.constant_term + 0.75).abs() < 1e-6, "{}", r.constant_term);
        assert_eq!(r.count, 2);
        assert!(r.satisfiable);
    }

    #[test]
    fn single_axis_unsat() {
        let cnf = CnfFormula::from_signed(2, &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]).unwrap();
        let fa =
            FrequencyAssignment::new(build_frequencies(8, &FrequencyScheme::onevar()), 200_000);
        let r = lattice_count(&inverse(&cnf), &fa, &LatticeConfig::default()).unwrap();
        assert_eq!(r.count, 0);
        assert!(!r.satisfiable);
        assert!((r.constant_term + 1.0).abs() < 1e-6);
    }

    #[test]
    fn guards() {
        let cnf = CnfFormula::from_signed(2, &[&[1, 2], &[-1, 2]]).unwrap();
        let fa = FrequencyAssignment::new(build_frequencies(4, &FrequencyScheme::exp1()), 40);
        assert_eq!(
            lattice_count(&encode(&relax(&cnf)), &fa, &LatticeConfig::default()),
            Err(CounterError::NotInverseRelaxed)
        );
        let small = LatticeConfig {
            max_points: 1000,
            ..LatticeConfig::default()
        };
        assert!(matches!(
            lattice_count(&inverse(&cnf), &fa, &small),
            Err(CounterError::BudgetExceeded { .. })
        ));
        let wrong = FrequencyAssignment::new(build_frequencies(3, &FrequencyScheme::exp1()), 40);
        assert!(matches!(
            lattice_count(&inverse(&cnf), &wrong, &LatticeConfig::default()),
            Err(CounterError::DimensionMismatch {
                expected: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn degenerate_modulus_is_caught() {
        // With l = 1 every X_j is 1, so the sum is f(1, ..., 1) = 1. Six fresh
        // variables over three originals cannot reach C = 1.
        let cnf = CnfFormula::from_signed(3, &[&[1, 2, 3], &[1, 2, 3]]).unwrap();
        let fa = FrequencyAssignment::new(build_frequencies(6, &FrequencyScheme::exp1()), 40)
            .with_modulus(1);
        assert!(!fa.modulus_certified());
        assert!(matches!(
            lattice_count(&inverse(&cnf), &fa, &LatticeConfig::default()),
            Err(CounterError::ResidualTooLarge { .. })
        ));
    }
}
