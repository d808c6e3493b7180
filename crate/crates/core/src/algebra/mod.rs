//! Elementary-algebraic (true = 1, false = -1) product form of a relaxed
//! formula.
//!
//! With `w` the clause width, a formula with `M` clauses and IOR groups of
//! sizes `r_i` is encoded as
//!
//! ```text
//! f = 2^-(2wM - 1) * prod_c (s * prod_{x in c} (x - 1) + 2^w)
//!                  * prod_i (prod_j (e_ij x_ij + 1) + prod_j (-e_ij x_ij + 1))
//!     - 1
//! ```
//!
//! where `s = (-1)^(w-1)`. For `w = 3` the clause factor is
//! `(x-1)(y-1)(z-1) + 8` with prefactor `2^-(6M-1)`; for `w = 2` it is
//! `4 - (x-1)(y-1)` with prefactor `2^-(4M-1)`. Both come from folding the
//! constants of the n-ary conjunction/disjunction rules into one power of two.
//!
//! The product is never expanded here. Evaluation costs `O(M + sum r_i)`
//! complex multiplications per point.

pub mod axioms;

use num_complex::Complex64;
use thiserror::Error;

use crate::cnf::ClauseWidth;
use crate::relaxation::RelaxedFormula;

pub use axioms::{boolean_axiom_suite, AxiomCheck, AxiomReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("formula is already inverse-relaxed")]
    AlreadyRelaxed,
    #[error("point has {found} coordinates but the formula has {expected} variables")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {index} has magnitude {magnitude}, expected 1")]
    NotUnitMagnitude { index: usize, magnitude: f64 },
}

/// `s * prod (x_v - 1) + 2^w` over the clause's fresh variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseFactor {
    /// 0-based fresh-variable indices.
    pub variables: Vec<usize>,
}

impl ClauseFactor {
    /// `(-1)^(w-1)`.
    #[inline]
    pub fn product_sign(&self) -> i64 {
        if self.variables.len() % 2 == 1 {
            1
        } else {
            -1
        }
    }

    /// `2^w`.
    #[inline]
    pub fn additive_constant(&self) -> i64 {
        1 << self.variables.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IorTerm {
    /// 0-based fresh-variable index.
    pub variable: usize,
    /// Occurrence polarity `e_ij`, `+1` or `-1`.
    pub sign: i8,
    /// The variable enters as `1 / x` instead of `x`.
    pub inverted: bool,
}

/// `prod (e x + 1) + prod (-e x + 1)` over one group's occurrences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IorFactor {
    pub original_variable: usize,
    pub terms: Vec<IorTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicFormula {
    num_variables: usize,
    clause_width: ClauseWidth,
    prefactor_exponent: u32,
    clause_factors: Vec<ClauseFactor>,
    ior_factors: Vec<IorFactor>,
    constant_offset: i64,
}

impl AlgebraicFormula {
    #[inline]
    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    #[inline]
    pub fn clause_width(&self) -> ClauseWidth {
        self.clause_width
    }

    /// `E` in the global `2^-E`.
    #[inline]
    pub fn prefactor_exponent(&self) -> u32 {
        self.prefactor_exponent
    }

    #[inline]
    pub fn prefactor(&self) -> f64 {
        0.5f64.powi(self.prefactor_exponent as i32)
    }

    #[inline]
    pub fn clause_factors(&self) -> &[ClauseFactor] {
        &self.clause_factors
    }

    #[inline]
    pub fn ior_factors(&self) -> &[IorFactor] {
        &self.ior_factors
    }

    /// Always `-1`.
    #[inline]
    pub fn constant_offset(&self) -> i64 {
        self.constant_offset
    }

    pub fn num_factors(&self) -> usize {
        self.clause_factors.len() + self.ior_factors.len()
    }

    /// True once [`apply_inverse_relaxation`] has run.
    pub fn is_inverse_relaxed(&self) -> bool {
        self.ior_factors
            .iter()
            .flat_map(|f| f.terms.iter())
            .any(|t| t.inverted)
    }

    /// `2^(M + N + 1) + 1`, a bound on `|f|` at unit-magnitude points.
    pub fn magnitude_bound(&self) -> f64 {
        let exp = self.clause_factors.len() + self.ior_factors.len() + 1;
        2f64.powi(exp as i32) + 1.0
    }

    /// Evaluates the product form given each variable's value and the value
    /// used wherever the variable appears inverted.
    #[inline]
    pub fn evaluate_with_inverses(
        &self,
        values: &[Complex64],
        inverses: &[Complex64],
    ) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut product = Complex64::new(self.prefactor(), 0.0);
        for clause in &self.clause_factors {
            let mut p = one;
            for &v in &clause.variables {
                p *= values[v] - one;
            }
            product *= p * clause.product_sign() as f64 + clause.additive_constant() as f64;
        }
        for ior in &self.ior_factors {
            let mut plus = one;
            let mut minus = one;
            for t in &ior.terms {
                let x = if t.inverted {
                    inverses[t.variable]
                } else {
                    values[t.variable]
                };
                let ex = x * t.sign as f64;
                plus *= one + ex;
                minus *= one - ex;
            }
            product *= plus + minus;
        }
        product + self.constant_offset as f64
    }
}

/// Unit-magnitude substitution values `X_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoint {
    values: Vec<Complex64>,
}

impl ComplexPoint {
    pub const UNIT_TOLERANCE: f64 = 1e-12;

    pub fn new(values: Vec<Complex64>) -> Result<Self, AlgebraError> {
        for (index, v) in values.iter().enumerate() {
            let magnitude = v.norm();
            if (magnitude - 1.0).abs() > Self::UNIT_TOLERANCE {
                return Err(AlgebraError::NotUnitMagnitude { index, magnitude });
            }
        }
        Ok(ComplexPoint { values })
    }

    /// A point of the Boolean cube `{-1, 1}^n`.
    pub fn from_spins(spins: &[i8]) -> Self {
        ComplexPoint {
            values: spins
                .iter()
                .map(|&s| Complex64::new(s as f64, 0.0))
                .collect(),
        }
    }

    /// `exp(i * theta_j)` for every angle.
    pub fn from_angles(angles: &[f64]) -> Self {
        ComplexPoint {
            values: angles
                .iter()
                .map(|&t| Complex64::from_polar(1.0, t))
                .collect(),
        }
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn encode(rf: &RelaxedFormula) -> AlgebraicFormula {
    let width = rf.clause_width.get() as u32;
    let clause_factors = rf
        .clauses
        .iter()
        .map(|c| ClauseFactor {
            variables: c.iter().map(|&v| v - 1).collect(),
        })
        .collect();
    let ior_factors = rf
        .ior_groups
        .iter()
        .map(|g| IorFactor {
            original_variable: g.original_variable,
            terms: g
                .occurrences
                .iter()
                .map(|o| IorTerm {
                    variable: o.variable - 1,
                    sign: o.sign(),
                    inverted: false,
                })
                .collect(),
        })
        .collect();
    AlgebraicFormula {
        num_variables: rf.num_new_variables(),
        clause_width: rf.clause_width,
        prefactor_exponent: 2 * width * rf.num_clauses() as u32 - 1,
        clause_factors,
        ior_factors,
        constant_offset: -1,
    }
}

/// Replaces every IOR-part variable `x` by `1 / x`; clause factors are left
/// untouched. On `{-1, 1}^n` the value of the formula does not change.
pub fn apply_inverse_relaxation(af: &AlgebraicFormula) -> Result<AlgebraicFormula, AlgebraError> {
    if af.is_inverse_relaxed() {
        return Err(AlgebraError::AlreadyRelaxed);
    }
    let mut out = af.clone();
    for t in out.ior_factors.iter_mut().flat_map(|f| f.terms.iter_mut()) {
        t.inverted = true;
    }
    Ok(out)
}

/// Point-wise product-form evaluation. Inverted variables use the complex
/// reciprocal, which is the conjugate at unit-magnitude points.
pub fn evaluate(af: &AlgebraicFormula, point: &ComplexPoint) -> Result<Complex64, AlgebraError> {
    if point.len() != af.num_variables() {
        return Err(AlgebraError::DimensionMismatch {
            expected: af.num_variables(),
            found: point.len(),
        });
    }
    let inverses: Vec<Complex64> = point.values().iter().map(|v| v.inv()).collect();
    Ok(af.evaluate_with_inverses(point.values(), &inverses))
}
