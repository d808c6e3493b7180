//! Sparse Laurent polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest supported number of variables; exponent vectors are fixed arrays.
pub const MAX_VARIABLES: usize = 16;

/// Exponent vector. Slots past the polynomial's variable count stay zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial([i8; MAX_VARIABLES]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARIABLES]);

    /// `x_{index+1}^exponent` (0-based index).
    pub fn variable(index: usize, exponent: i8) -> Self {
        let mut e = [0; MAX_VARIABLES];
        e[index] = exponent;
        Monomial(e)
    }

    pub fn from_exponents(exponents: &[i8]) -> Self {
        assert!(exponents.len() <= MAX_VARIABLES);
        let mut e = [0; MAX_VARIABLES];
        e[..exponents.len()].copy_from_slice(exponents);
        Monomial(e)
    }

    #[inline]
    pub fn exponents(&self) -> &[i8; MAX_VARIABLES] {
        &self.0
    }

    #[inline]
    pub fn exponent(&self, index: usize) -> i8 {
        self.0[index]
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.0 == [0; MAX_VARIABLES]
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Monomial(e)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolynomialError {
    #[error("variable x{variable} has negative exponent {exponent}")]
    NegativeExponent { variable: usize, exponent: i8 },
    #[error("variable x{variable} has exponent {exponent}; polynomial is not multilinear")]
    NotMultilinear { variable: usize, exponent: i8 },
    #[error("{found} variables exceed the limit of {limit}")]
    TooLarge { found: usize, limit: usize },
    #[error("cannot parse polynomial dump line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// `sum q_k prod_j x_j^{e_kj}` over at most [`MAX_VARIABLES`] variables.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    num_variables: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl SparsePolynomial {
    pub fn zero(num_variables: usize) -> Self {
        assert!(num_variables <= MAX_VARIABLES);
        SparsePolynomial {
            num_variables,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_variables: usize, value: BigRational) -> Self {
        let mut p = Self::zero(num_variables);
        p.add_term(Monomial::ONE, value);
        p
    }

    pub fn from_terms(
        num_variables: usize,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Self {
        let mut p = Self::zero(num_variables);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    #[inline]
    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent-vector order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of the all-zero exponent vector.
    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&Monomial::ONE)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Per-variable largest and smallest exponent over all terms.
    pub fn exponent_range(&self, variable: usize) -> Option<(i8, i8)> {
        let mut it = self.terms.keys().map(|m| m.exponent(variable));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Largest exponent of any variable in any term (0 for constants).
    pub fn max_exponent(&self) -> i8 {
        self.terms
            .keys()
            .flat_map(|m| m.exponents()[..self.num_variables].iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn min_exponent(&self) -> i8 {
        self.terms
            .keys()
            .flat_map(|m| m.exponents()[..self.num_variables].iter().copied())
            .min()
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &SparsePolynomial) -> SparsePolynomial {
        let n = self.num_variables.max(other.num_variables);
        let mut out = SparsePolynomial::zero(n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn add(&self, other: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        out.num_variables = self.num_variables.max(other.num_variables);
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &BigRational) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero(self.num_variables);
        for (m, c) in &self.terms {
            out.add_term(*m, c * factor);
        }
        out
    }

    /// Exact value at a rational point (no zero coordinates may carry a
    /// negative exponent).
    pub fn evaluate_exact(&self, point: &[BigRational]) -> BigRational {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (j, x) in point.iter().enumerate().take(self.num_variables) {
                let e = m.exponent(j);
                if e != 0 {
                    term *= pow_rational(x, e);
                }
            }
            total += term;
        }
        total
    }

    /// Floating-point value; exact rationals converted once per term.
    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut term = rational_to_f64(c);
                for (j, x) in point.iter().enumerate().take(self.num_variables) {
                    let e = m.exponent(j);
                    if e != 0 {
                        term *= x.powi(e as i32);
                    }
                }
                term
            })
            .sum()
    }

    /// One term per line: `num/den x1^e1 x3^e3`, exponent vectors ascending.
    /// A zero polynomial dumps as `0/1`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        if self.terms.is_empty() {
            out.push_str("0/1\n");
        }
        for (m, c) in &self.terms {
            out.push_str(&format!("{}/{}", c.numer(), c.denom()));
            for j in 0..self.num_variables {
                let e = m.exponent(j);
                if e != 0 {
                    out.push_str(&format!(" x{}^{}", j + 1, e));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`SparsePolynomial::dump`]. Blank lines are ignored.
    pub fn parse_dump(num_variables: usize, text: &str) -> Result<Self, PolynomialError> {
        if num_variables > MAX_VARIABLES {
            return Err(PolynomialError::TooLarge {
                found: num_variables,
                limit: MAX_VARIABLES,
            });
        }
        let mut p = SparsePolynomial::zero(num_variables);
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |reason: &str| PolynomialError::Parse {
                line: line_no,
                reason: reason.to_string(),
            };
            let mut fields = line.split_whitespace();
            let Some(coeff) = fields.next() else { continue };
            let (num, den) = coeff
                .split_once('/')
                .ok_or_else(|| err("coefficient needs num/den"))?;
            let num: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
            let den: BigInt = den.parse().map_err(|_| err("bad denominator"))?;
            if den.is_zero() {
                return Err(err("zero denominator"));
            }
            let mut exps = [0i8; MAX_VARIABLES];
            for f in fields {
                let (var, e) = f
                    .strip_prefix('x')
                    .and_then(|r| r.split_once('^'))
                    .ok_or_else(|| err("factor must look like x<j>^<e>"))?;
                let var: usize = var.parse().map_err(|_| err("bad variable index"))?;
                let e: i8 = e.parse().map_err(|_| err("bad exponent"))?;
                if var == 0 || var > num_variables {
                    return Err(err("variable index out of range"));
                }
                exps[var - 1] += e;
            }
            p.add_term(Monomial(exps), BigRational::new(num, den));
        }
        Ok(p)
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

fn pow_rational(x: &BigRational, e: i8) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        r *= x;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let sign = if q.is_negative() { -1.0 } else { 1.0 };
        sign * f64::INFINITY
    })
}

pub fn dyadic(numer: i64, log2_denom: u32) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::one() << log2_denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut p = SparsePolynomial::zero(2);
        p.add_term(Monomial::variable(0, 1), q(1, 2));
        p.add_term(Monomial::variable(0, 1), q(-1, 2));
        assert!(p.is_empty());
        p.add_term(Monomial::ONE, q(0, 1));
        assert!(p.is_empty());
    }

    #[test]
    fn multiplication_adds_exponents() {
        // (x1 + 1)(1/x1 + 1) = 2 + x1 + 1/x1
        let a = SparsePolynomial::from_terms(
            1,
            [
                (Monomial::variable(0, 1), q(1, 1)),
                (Monomial::ONE, q(1, 1)),
            ],
        );
        let b = SparsePolynomial::from_terms(
            1,
            [
                (Monomial::variable(0, -1), q(1, 1)),
                (Monomial::ONE, q(1, 1)),
            ],
        );
        let p = a.mul(&b);
        assert_eq!(p.len(), 3);
        assert_eq!(p.constant_term(), q(2, 1));
        assert_eq!(p.min_exponent(), -1);
        assert_eq!(p.max_exponent(), 1);
    }

    #[test]
    fn dump_format() {
        let p = SparsePolynomial::from_terms(
            3,
            [
                (Monomial::ONE, q(-3, 4)),
                (Monomial::from_exponents(&[1, 0, 2]), q(3, 32)),
                (Monomial::variable(1, -1), q(1, 1)),
            ],
        );
        assert_eq!(p.dump(), "1/1 x2^-1\n-3/4\n3/32 x1^1 x3^2\n");
        assert_eq!(SparsePolynomial::parse_dump(3, &p.dump()).unwrap(), p);
        assert_eq!(SparsePolynomial::zero(2).dump(), "0/1\n");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            SparsePolynomial::parse_dump(2, "3 x1^1"),
            Err(PolynomialError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            SparsePolynomial::parse_dump(2, "1/1\n1/2 x3^1"),
            Err(PolynomialError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn exact_evaluation_with_inverse_powers() {
        // 1/x1 + x2^2 at (2, 3) = 1/2 + 9
        let p = SparsePolynomial::from_terms(
            2,
            [
                (Monomial::variable(0, -1), q(1, 1)),
                (Monomial::variable(1, 2), q(1, 1)),
            ],
        );
        assert_eq!(p.evaluate_exact(&[q(2, 1), q(3, 1)]), q(19, 2));
        assert_eq!(p.evaluate_f64(&[2.0, 3.0]), 9.5);
    }
}
