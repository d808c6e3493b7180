//! Ground-truth engines.
//!
//! * [`count_by_enumeration`] walks all `2^N` assignments of the CNF.
//! * [`expand`] multiplies the product form out in exact rationals, after
//!   which the constant term can be read off either by idempotent reduction
//!   (`x^2 -> 1`) of the plain form or directly from the inverse-relaxed form.
//!
//! All three routes must give `C = (2k - 2^n) / 2^n` where `k` counts the
//! satisfying assignments of the occurring variables and `n` is the number of
//! literal occurrences.

pub mod polynomial;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraicFormula, IorTerm};
use crate::cnf::CnfFormula;
use crate::relaxation::relax;
use crate::report::{sig12, Report};

pub use polynomial::{Monomial, PolynomialError, SparsePolynomial, MAX_VARIABLES};

/// Largest `N` accepted by [`count_by_enumeration`].
pub const ENUMERATION_LIMIT: usize = 25;
/// Largest `n` accepted by [`expand`].
pub const EXPANSION_LIMIT: usize = MAX_VARIABLES;
/// Largest `n` accepted by [`interpolation_identity_check`].
pub const INTERPOLATION_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what}: {found} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        found: usize,
        limit: usize,
    },
    #[error(transparent)]
    Polynomial(#[from] PolynomialError),
}

/// Result of the brute-force count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Satisfying assignments over all `2^N` declared-variable assignments.
    pub count: u64,
    /// `(2k - 2^n) / 2^n` with `k` restricted to occurring variables.
    pub constant_term: BigRational,
    pub total_assignments: u64,
    /// Literal occurrences `n`.
    pub relaxed_variables: usize,
}

impl Serialize for OracleResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("OracleResult", 5)?;
        st.serialize_field("count", &self.count)?;
        st.serialize_field(
            "constant_term",
            &sig12::round(polynomial::rational_to_f64(&self.constant_term)),
        )?;
        st.serialize_field("constant_term_exact", &self.constant_term.to_string())?;
        st.serialize_field("total_assignments", &self.total_assignments)?;
        st.serialize_field("relaxed_variables", &self.relaxed_variables)?;
        st.end()
    }
}

impl Report for OracleResult {
    fn csv_header() -> &'static str {
        "count,constant_term,constant_term_exact,total_assignments,relaxed_variables"
    }

    fn csv_rows(&self) -> Vec<String> {
        vec![format!(
            "{},{},{},{},{}",
            self.count,
            sig12::format(polynomial::rational_to_f64(&self.constant_term)),
            self.constant_term,
            self.total_assignments,
            self.relaxed_variables
        )]
    }
}

/// `(2k - 2^n) / 2^n`.
pub fn constant_from_count(relaxed_count: u64, n: usize) -> BigRational {
    let total = BigInt::one() << n;
    BigRational::new(BigInt::from(relaxed_count) * 2 - &total, total)
}

/// Inverse of [`constant_from_count`]: `k = (C + 1) 2^(n-1)` when that is an
/// integer in `0..=max_count`.
pub fn count_from_constant(constant: &BigRational, n: usize, max_count: u64) -> Option<u64> {
    let scaled = (constant + BigRational::one()) * BigRational::from_integer(BigInt::one() << n)
        / BigRational::from_integer(BigInt::from(2));
    if !scaled.is_integer() {
        return None;
    }
    scaled.to_integer().to_u64().filter(|&k| k <= max_count)
}

/// Counts satisfying assignments by walking all `2^N` of them in parallel.
pub fn count_by_enumeration(cnf: &CnfFormula) -> Result<OracleResult, OracleError> {
    let big_n = cnf.num_variables();
    if big_n > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge {
            what: "variables to enumerate",
            found: big_n,
            limit: ENUMERATION_LIMIT,
        });
    }
    // Clause satisfied iff (a & pos) != 0 or (!a & neg) != 0.
    let masks: Vec<(u64, u64)> = cnf
        .clauses()
        .iter()
        .map(|c| {
            c.iter().fold((0u64, 0u64), |(pos, neg), lit| {
                let bit = 1u64 << (lit.variable() - 1);
                if lit.is_positive() {
                    (pos | bit, neg)
                } else {
                    (pos, neg | bit)
                }
            })
        })
        .collect();
    let total = 1u64 << big_n;
    const CHUNK: u64 = 1 << 14;
    let chunks = total.div_ceil(CHUNK);
    let count: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(total);
            (start..end)
                .filter(|&a| {
                    masks
                        .iter()
                        .all(|&(pos, neg)| a & pos != 0 || !a & neg != 0)
                })
                .count() as u64
        })
        .sum();

    let n = cnf.num_occurrences();
    let absent = big_n - cnf.occurring_variables().len();
    Ok(OracleResult {
        count,
        constant_term: constant_from_count(count >> absent, n),
        total_assignments: total,
        relaxed_variables: n,
    })
}

type IntTerms = HashMap<Monomial, i128>;

fn multiply(acc: &IntTerms, factor: &[(Monomial, i128)]) -> IntTerms {
    let mut out = HashMap::with_capacity(acc.len() * factor.len().min(8));
    for (ma, &ca) in acc {
        for (mb, cb) in factor {
            *out.entry(ma.mul(mb)).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `s * prod (x - 1) + 2^w`.
fn clause_terms(vars: &[usize], sign: i64, constant: i64) -> Vec<(Monomial, i128)> {
    let w = vars.len();
    let mut terms = Vec::with_capacity(1 << w);
    for subset in 0u32..(1 << w) {
        let mut exps = [0i8; MAX_VARIABLES];
        let mut chosen = 0;
        for (bit, &v) in vars.iter().enumerate() {
            if subset >> bit & 1 == 1 {
                exps[v] = 1;
                chosen += 1;
            }
        }
        // Unchosen factors contribute -1 each.
        let mut c = sign as i128
            * if (w - chosen).is_multiple_of(2) {
                1
            } else {
                -1
            };
        if subset == 0 {
            c += constant as i128;
        }
        terms.push((Monomial::from_exponents(&exps), c));
    }
    terms.retain(|(_, c)| *c != 0);
    terms
}

/// `prod (e x + 1) + prod (-e x + 1)`: odd subsets cancel, even ones double.
fn ior_terms(terms_in: &[IorTerm]) -> Vec<(Monomial, i128)> {
    let r = terms_in.len();
    let mut terms = Vec::with_capacity(1 << r.saturating_sub(1));
    for subset in 0u32..(1 << r) {
        if subset.count_ones() % 2 == 1 {
            continue;
        }
        let mut exps = [0i8; MAX_VARIABLES];
        let mut c: i128 = 2;
        for (bit, t) in terms_in.iter().enumerate() {
            if subset >> bit & 1 == 1 {
                exps[t.variable] += if t.inverted { -1 } else { 1 };
                c *= t.sign as i128;
            }
        }
        terms.push((Monomial::from_exponents(&exps), c));
    }
    terms
}

/// Full distributive expansion of the product form.
///
/// The integer-coefficient product is accumulated first; its coefficients
/// are bounded by the product of the factors' L1 norms, at most `2^64` under
/// the variable limit, so `i128` cannot overflow. The global `2^-E` and the
/// `-1` offset are applied exactly at the end.
pub fn expand(af: &AlgebraicFormula) -> Result<SparsePolynomial, OracleError> {
    let n = af.num_variables();
    if n > EXPANSION_LIMIT {
        return Err(OracleError::TooLarge {
            what: "variables to expand",
            found: n,
            limit: EXPANSION_LIMIT,
        });
    }
    let mut acc: IntTerms = HashMap::from([(Monomial::ONE, 1i128)]);
    for c in af.clause_factors() {
        acc = multiply(
            &acc,
            &clause_terms(&c.variables, c.product_sign(), c.additive_constant()),
        );
    }
    for g in af.ior_factors() {
        acc = multiply(&acc, &ior_terms(&g.terms));
    }
    let denom = BigInt::one() << af.prefactor_exponent();
    let mut p = SparsePolynomial::from_terms(
        n,
        acc.into_iter()
            .map(|(m, c)| (m, BigRational::new(BigInt::from(c), denom.clone()))),
    );
    p.add_term(
        Monomial::ONE,
        BigRational::from_integer(BigInt::from(af.constant_offset())),
    );
    Ok(p)
}

fn reduce_where(
    p: &SparsePolynomial,
    mut touches: impl FnMut(usize) -> bool,
) -> Result<SparsePolynomial, OracleError> {
    let n = p.num_variables();
    let mut out = SparsePolynomial::zero(n);
    for (m, c) in p.terms() {
        let mut e = *m.exponents();
        for (j, slot) in e.iter_mut().enumerate().take(n) {
            if !touches(j) {
                continue;
            }
            if *slot < 0 {
                return Err(PolynomialError::NegativeExponent {
                    variable: j + 1,
                    exponent: *slot,
                }
                .into());
            }
            *slot %= 2;
        }
        out.add_term(Monomial::from_exponents(&e[..n]), c.clone());
    }
    Ok(out)
}

/// Applies `x_j^2 = 1` to every variable: exponents become `e mod 2` and
/// colliding terms are merged.
pub fn idempotent_reduce(p: &SparsePolynomial) -> Result<SparsePolynomial, OracleError> {
    reduce_where(p, |_| true)
}

/// Applies `x_j^2 = 1` to one variable (0-based index) only.
pub fn idempotent_reduce_variable(
    p: &SparsePolynomial,
    variable: usize,
) -> Result<SparsePolynomial, OracleError> {
    reduce_where(p, |j| j == variable)
}

/// Sending numerator variables to 0 and denominator variables to infinity
/// deletes every non-constant term, leaving the zero-exponent coefficient.
pub fn constant_of_inverse_expansion(p: &SparsePolynomial) -> BigRational {
    p.constant_term()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationReport {
    pub points: usize,
    #[serde(serialize_with = "sig12::serialize")]
    pub max_error: f64,
    pub constant_identity: bool,
    pub passed: bool,
}

pub const INTERPOLATION_POINTS: usize = 100;
pub const INTERPOLATION_TOLERANCE: f64 = 1e-9;

/// Values of a multilinear polynomial on all of `{-1, 1}^n`, indexed by a
/// mask whose bit `j` set means `e_j = -1` (fast Walsh-Hadamard transform).
fn cube_values(p: &SparsePolynomial) -> Vec<BigRational> {
    let n = p.num_variables();
    let mut values = vec![BigRational::zero(); 1 << n];
    for (m, c) in p.terms() {
        let mask = (0..n)
            .filter(|&j| m.exponent(j) == 1)
            .fold(0usize, |a, j| a | 1 << j);
        values[mask] = c.clone();
    }
    let mut half = 1;
    while half < values.len() {
        for block in (0..values.len()).step_by(2 * half) {
            for i in block..block + half {
                let u = values[i].clone();
                let v = values[i + half].clone();
                values[i] = &u + &v;
                values[i + half] = u - v;
            }
        }
        half *= 2;
    }
    values
}

/// Checks `p(x) = 2^-n sum_e p(e) prod_j (1 + e_j x_j)` at random points of
/// `[-1, 1]^n`, and `p(0) = 2^-n sum_e p(e)` exactly.
pub fn interpolation_identity_check(
    p: &SparsePolynomial,
    seed: u64,
) -> Result<InterpolationReport, OracleError> {
    let n = p.num_variables();
    if n > INTERPOLATION_LIMIT {
        return Err(OracleError::TooLarge {
            what: "variables to interpolate",
            found: n,
            limit: INTERPOLATION_LIMIT,
        });
    }
    for (m, _) in p.terms() {
        if let Some(j) = (0..n).find(|&j| !matches!(m.exponent(j), 0 | 1)) {
            return Err(PolynomialError::NotMultilinear {
                variable: j + 1,
                exponent: m.exponent(j),
            }
            .into());
        }
    }
    let cube = cube_values(p);
    let scale = BigRational::new(BigInt::one(), BigInt::one() << n);
    let sum: BigRational = cube.iter().fold(BigRational::zero(), |a, v| a + v);
    let constant_identity = p.constant_term() == sum * &scale;

    let cube_f64: Vec<f64> = cube.iter().map(polynomial::rational_to_f64).collect();
    let weight = 0.5f64.powi(n as i32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error: f64 = 0.0;
    for _ in 0..INTERPOLATION_POINTS {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let lhs = p.evaluate_f64(&x);
        let rhs: f64 = cube_f64
            .iter()
            .enumerate()
            .map(|(mask, &value)| {
                let atom: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(j, &xj)| {
                        if mask >> j & 1 == 1 {
                            1.0 - xj
                        } else {
                            1.0 + xj
                        }
                    })
                    .product();
                value * atom
            })
            .sum::<f64>()
            * weight;
        max_error = max_error.max((lhs - rhs).abs());
    }
    Ok(InterpolationReport {
        points: INTERPOLATION_POINTS,
        max_error,
        constant_identity,
        passed: constant_identity && max_error <= INTERPOLATION_TOLERANCE,
    })
}

/// Exact constant term of a CNF through both symbolic routes:
/// `(idempotent route on the plain form, inverse-relaxation route)`.
pub fn symbolic_constants(cnf: &CnfFormula) -> Result<(BigRational, BigRational), OracleError> {
    let f = crate::algebra::encode(&relax(cnf));
    let g = crate::algebra::apply_inverse_relaxation(&f).expect("fresh encoding is not relaxed");
    let plain = idempotent_reduce(&expand(&f)?)?.constant_term();
    let inverse = constant_of_inverse_expansion(&expand(&g)?);
    Ok((plain, inverse))
}
