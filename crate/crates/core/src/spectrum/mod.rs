//! Multi-axis trigonometric frequencies and their spectra.
//!
//! Variable `j` (1-based) gets the real frequencies
//!
//! ```text
//! a_j = sin((u + j) p)        b_j = sin((u + j)(p + h))
//! c_j = sin((u + j)(p + v))   d_j = sin((u + j)(p + v + h))
//! ```
//!
//! keeping the first `d` of them. For a sign vector `e` the axis sums are
//! `A = sum e_j a_j` and so on; the *minimal maximum frequency* is the
//! smallest `max(|A|, |B|, ...)` over all nonzero `e`. The counter needs it
//! bounded away from zero after scaling to integers, otherwise distinct
//! monomials would collide on the lattice.

pub mod scan;

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::report::{sig12, Report};

pub use scan::Extremes;

/// Default bound on `n` for the `3^n` sign-vector scan.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("{found} variables exceed the enumeration limit of {limit}")]
    TooLarge { found: usize, limit: usize },
    #[error("a spectrum needs at least one variable")]
    NoVariables,
    #[error("minimal maximum frequency is zero; no multiplier separates the monomials")]
    DegenerateSpectrum,
    #[error("integerized minimal maximum frequency is {min_max} at {argmin}; need at least 1")]
    IntegerizationUnsafe { min_max: i64, argmin: SignVector },
    #[error("invalid sign vector: {0}")]
    InvalidSignVector(String),
    #[error("invalid frequency scheme: {0}")]
    InvalidScheme(String),
    #[error("a profile needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("multiplier must be at least 1")]
    ZeroMultiplier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axes {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "4")]
    Four,
}

impl Axes {
    pub fn count(self) -> usize {
        match self {
            Axes::One => 1,
            Axes::Two => 2,
            Axes::Four => 4,
        }
    }

    pub fn from_count(d: usize) -> Result<Self, SpectrumError> {
        match d {
            1 => Ok(Axes::One),
            2 => Ok(Axes::Two),
            4 => Ok(Axes::Four),
            other => Err(SpectrumError::InvalidScheme(format!(
                "axes must be 1, 2 or 4, got {other}"
            ))),
        }
    }
}

/// The bias `u` added to each variable index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bias {
    /// `u = n^2`
    N2,
    /// `u = n^3`
    N3,
    Explicit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyScheme {
    pub axes: Axes,
    pub bias: Bias,
    pub p: f64,
    /// Defaults to `3 pi / (u + 1)`.
    pub v: Option<f64>,
    /// Defaults to `(pi / 2) / (u + 1)`.
    pub h: Option<f64>,
}

impl FrequencyScheme {
    pub fn new(axes: Axes, bias: Bias) -> Self {
        FrequencyScheme {
            axes,
            bias,
            p: 1.0,
            v: None,
            h: None,
        }
    }

    /// One complex trigonometric axis, `u = n^2`.
    pub fn onevar() -> Self {
        Self::new(Axes::One, Bias::N2)
    }

    /// Two axes at `p` and `p + h`, `u = n^2`.
    pub fn twovar() -> Self {
        Self::new(Axes::Two, Bias::N2)
    }

    /// Four axes, `u = n^2`.
    pub fn exp1() -> Self {
        Self::new(Axes::Four, Bias::N2)
    }

    /// Four axes, `u = n^3`.
    pub fn exp2() -> Self {
        Self::new(Axes::Four, Bias::N3)
    }

    pub fn preset(name: &str) -> Result<Self, SpectrumError> {
        match name {
            "onevar" => Ok(Self::onevar()),
            "twovar" => Ok(Self::twovar()),
            "exp1" => Ok(Self::exp1()),
            "exp2" => Ok(Self::exp2()),
            other => Err(SpectrumError::InvalidScheme(format!(
                "unknown preset '{other}' (expected onevar, twovar, exp1 or exp2)"
            ))),
        }
    }

    pub fn u(&self, n: usize) -> f64 {
        match self.bias {
            Bias::N2 => (n * n) as f64,
            Bias::N3 => (n * n * n) as f64,
            Bias::Explicit(u) => u,
        }
    }

    pub fn v(&self, n: usize) -> f64 {
        self.v.unwrap_or(3.0 * PI / (self.u(n) + 1.0))
    }

    pub fn h(&self, n: usize) -> f64 {
        self.h.unwrap_or(0.5 * PI / (self.u(n) + 1.0))
    }

    pub fn validate(&self) -> Result<(), SpectrumError> {
        if let Bias::Explicit(u) = self.bias {
            if !(u >= 1.0 && u.is_finite()) {
                return Err(SpectrumError::InvalidScheme(format!(
                    "u must be >= 1, got {u}"
                )));
            }
        }
        for (name, x) in [("p", Some(self.p)), ("v", self.v), ("h", self.h)] {
            if x.is_some_and(|x| !x.is_finite()) {
                return Err(SpectrumError::InvalidScheme(format!(
                    "{name} must be finite"
                )));
            }
        }
        Ok(())
    }

    /// Evaluation points, one per axis.
    fn points(&self, n: usize) -> Vec<f64> {
        let (p, v, h) = (self.p, self.v(n), self.h(n));
        let all = [p, p + h, p + v, p + v + h];
        all[..self.axes.count()].to_vec()
    }
}

/// Row-major `n x d` matrix; row `j` holds variable `j + 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyMatrix<T> {
    n: usize,
    axes: usize,
    data: Vec<T>,
}

impl<T: Copy> FrequencyMatrix<T> {
    pub fn new(n: usize, axes: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), n * axes, "matrix data must be n * d entries");
        FrequencyMatrix { n, axes, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let axes = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == axes), "ragged rows");
        FrequencyMatrix {
            n: rows.len(),
            axes,
            data: rows.concat(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn axes(&self) -> usize {
        self.axes
    }

    #[inline]
    pub fn row(&self, j: usize) -> &[T] {
        &self.data[j * self.axes..(j + 1) * self.axes]
    }

    #[inline]
    pub fn get(&self, j: usize, ax: usize) -> T {
        self.data[j * self.axes + ax]
    }

    pub fn column(&self, ax: usize) -> Vec<T> {
        (0..self.n).map(|j| self.get(j, ax)).collect()
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> FrequencyMatrix<U> {
        FrequencyMatrix {
            n: self.n,
            axes: self.axes,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

/// Nonzero vector over `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self, SpectrumError> {
        if let Some(bad) = entries.iter().find(|e| !matches!(e, -1..=1)) {
            return Err(SpectrumError::InvalidSignVector(format!(
                "entry {bad} not in {{-1, 0, 1}}"
            )));
        }
        if entries.iter().all(|&e| e == 0) {
            return Err(SpectrumError::InvalidSignVector(
                "all entries are zero".into(),
            ));
        }
        Ok(SignVector(entries))
    }

    #[inline]
    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for SignVector {
    /// `-1;1;0;...`
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i8::to_string).collect();
        f.write_str(&parts.join(";"))
    }
}

impl std::str::FromStr for SignVector {
    type Err = SpectrumError;

    /// Accepts `;` or `,` separators.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries = s
            .split([';', ','])
            .map(|t| {
                t.trim()
                    .parse::<i8>()
                    .map_err(|_| SpectrumError::InvalidSignVector(format!("bad entry '{t}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        SignVector::new(entries)
    }
}

/// Per-axis sums `A_k, B_k, ...` for one sign vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyTuple {
    pub sums: Vec<f64>,
    pub integer_sums: Option<Vec<i64>>,
}

impl FrequencyTuple {
    pub fn max_abs(&self) -> f64 {
        self.sums.iter().fold(0.0, |m, s| m.max(s.abs()))
    }
}

pub fn frequency_tuple(
    freqs: &FrequencyMatrix<f64>,
    integer: Option<&FrequencyMatrix<i64>>,
    signs: &SignVector,
) -> FrequencyTuple {
    fn sums<T: Copy + Default + std::ops::Add<Output = T> + std::ops::Sub<Output = T>>(
        m: &FrequencyMatrix<T>,
        e: &[i8],
    ) -> Vec<T> {
        (0..m.axes())
            .map(|ax| {
                e.iter()
                    .enumerate()
                    .fold(T::default(), |acc, (j, &s)| match s {
                        1 => acc + m.get(j, ax),
                        -1 => acc - m.get(j, ax),
                        _ => acc,
                    })
            })
            .collect()
    }
    FrequencyTuple {
        sums: sums(freqs, signs.entries()),
        integer_sums: integer.map(|z| sums(z, signs.entries())),
    }
}

/// Real frequency matrix; `n >= 1` rows, `scheme.axes` columns.
pub fn build_frequencies(n: usize, scheme: &FrequencyScheme) -> FrequencyMatrix<f64> {
    let u = scheme.u(n);
    let points = scheme.points(n);
    let mut data = Vec::with_capacity(n * points.len());
    for j in 1..=n {
        let w = u + j as f64;
        data.extend(points.iter().map(|&t| (w * t).sin()));
    }
    FrequencyMatrix::new(n, points.len(), data)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub axes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<FrequencyScheme>,
    #[serde(serialize_with = "sig12::serialize")]
    pub min_max_frequency: f64,
    pub argmin: SignVector,
    #[serde(serialize_with = "sig12::serialize")]
    pub max_max_frequency: f64,
}

impl Report for SpectrumReport {
    fn csv_header() -> &'static str {
        "n,min_max_frequency,max_max_frequency,argmin_signs"
    }

    fn csv_rows(&self) -> Vec<String> {
        vec![format!(
            "{},{},{},{}",
            self.n,
            sig12::format(self.min_max_frequency),
            sig12::format(self.max_max_frequency),
            self.argmin
        )]
    }
}

fn check_size(n: usize, limit: usize) -> Result<(), SpectrumError> {
    if n == 0 {
        return Err(SpectrumError::NoVariables);
    }
    if n > limit {
        return Err(SpectrumError::TooLarge { found: n, limit });
    }
    Ok(())
}

/// Exhaustive minimal and maximal maximum frequency with the default limit.
pub fn min_max_frequency(freqs: &FrequencyMatrix<f64>) -> Result<SpectrumReport, SpectrumError> {
    min_max_frequency_with_limit(freqs, DEFAULT_ENUMERATION_LIMIT)
}

pub fn min_max_frequency_with_limit(
    freqs: &FrequencyMatrix<f64>,
    limit: usize,
) -> Result<SpectrumReport, SpectrumError> {
    check_size(freqs.n(), limit)?;
    let ex = scan::scan(freqs);
    Ok(SpectrumReport {
        n: freqs.n(),
        axes: freqs.axes(),
        scheme: None,
        min_max_frequency: ex.min_max,
        argmin: ex.argmin,
        max_max_frequency: ex.max_max,
    })
}

/// `sign(x) * ceil(|m x|)`; zero stays zero.
pub fn integerize(freqs: &FrequencyMatrix<f64>, multiplier: u64) -> FrequencyMatrix<i64> {
    let m = multiplier as f64;
    freqs.map(|x| {
        let scaled = (m * x.abs()).ceil() as i64;
        if x < 0.0 {
            -scaled
        } else {
            scaled
        }
    })
}

/// `ceil((n + 1) / mmf)`. Since every axis sum moves by less than `n` under
/// rounding, this keeps every integerized per-vector maximum at least 1.
pub fn choose_multiplier(report: &SpectrumReport, n: usize) -> Result<u64, SpectrumError> {
    let mmf = report.min_max_frequency;
    // NaN counts as degenerate too.
    if mmf.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(SpectrumError::DegenerateSpectrum);
    }
    Ok(((n as f64 + 1.0) / mmf).ceil() as u64)
}

/// `2 + max_ax sum_j |z_{j,ax}|`, which exceeds every `|axis sum|`.
pub fn choose_modulus(int_freqs: &FrequencyMatrix<i64>) -> u64 {
    let widest = (0..int_freqs.axes())
        .map(|ax| {
            int_freqs
                .column(ax)
                .iter()
                .map(|z| z.unsigned_abs())
                .sum::<u64>()
        })
        .max()
        .unwrap_or(0);
    widest + 2
}

/// Exhaustive check that no nonzero sign vector has all integer axis sums
/// zero. Returns the integer extremes on success.
pub fn check_integerization(
    int_freqs: &FrequencyMatrix<i64>,
    limit: usize,
) -> Result<Extremes<i64>, SpectrumError> {
    check_size(int_freqs.n(), limit)?;
    let ex = scan::scan(int_freqs);
    if ex.min_max < 1 {
        return Err(SpectrumError::IntegerizationUnsafe {
            min_max: ex.min_max,
            argmin: ex.argmin,
        });
    }
    Ok(ex)
}

/// One report per `n` in the range.
pub fn spectrum_table(
    scheme: &FrequencyScheme,
    n_range: RangeInclusive<usize>,
    limit: usize,
) -> Result<Vec<SpectrumReport>, SpectrumError> {
    scheme.validate()?;
    n_range
        .map(|n| {
            let mut r = min_max_frequency_with_limit(&build_frequencies(n, scheme), limit)?;
            r.scheme = Some(*scheme);
            Ok(r)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    #[serde(serialize_with = "sig12::serialize")]
    pub t: f64,
    #[serde(serialize_with = "sig12::serialize")]
    pub g: f64,
}

impl Report for ProfileSample {
    fn csv_header() -> &'static str {
        "t,g"
    }

    fn csv_rows(&self) -> Vec<String> {
        vec![format!(
            "{},{}",
            sig12::format(self.t),
            sig12::format(self.g)
        )]
    }
}

/// `g(t) = sum_j e_j sin((u + j) t)` at `u` from the scheme.
pub fn profile_value(scheme: &FrequencyScheme, signs: &SignVector, t: f64) -> f64 {
    let u = scheme.u(signs.len());
    signs
        .entries()
        .iter()
        .enumerate()
        .map(|(j, &e)| e as f64 * ((u + (j + 1) as f64) * t).sin())
        .sum()
}

/// `samples` uniform points from `t_start` to `t_end` inclusive.
pub fn axis_profile(
    scheme: &FrequencyScheme,
    signs: &SignVector,
    t_range: (f64, f64),
    samples: usize,
) -> Result<Vec<ProfileSample>, SpectrumError> {
    if samples < 2 {
        return Err(SpectrumError::TooFewSamples(samples));
    }
    let (t0, t1) = t_range;
    let step = (t1 - t0) / (samples - 1) as f64;
    Ok((0..samples)
        .into_par_iter()
        .map(|i| {
            let t = if i == samples - 1 {
                t1
            } else {
                t0 + step * i as f64
            };
            ProfileSample {
                t,
                g: profile_value(scheme, signs, t),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round3(x: f64) -> f64 {
        (x * 1000.0).round() / 1000.0
    }

    #[test]
    fn six_variable_rows() {
        let f = build_frequencies(6, &FrequencyScheme::exp1());
        let a: Vec<f64> = f.column(0).into_iter().map(round3).collect();
        assert_eq!(a, [-0.644, 0.296, 0.964, 0.745, -0.159, -0.917]);
        // d_4 = sin(40 (1 + v + h)) is positive, and so is its integerization.
        let d: Vec<f64> = f.column(3).into_iter().map(round3).collect();
        assert_eq!(d, [-0.765, -0.826, 0.319, 0.999, 0.221, -0.879]);
    }

    #[test]
    fn one_axis_two_variables() {
        let f = build_frequencies(2, &FrequencyScheme::onevar());
        assert_eq!(f.row(0), &[5f64.sin()]);
        assert_eq!(f.row(1), &[6f64.sin()]);
        let r = min_max_frequency(&f).unwrap();
        assert!((r.min_max_frequency - 6f64.sin().abs()).abs() < 1e-15);
        assert!((r.min_max_frequency - 0.279).abs() < 5e-4);
    }

    #[test]
    fn six_variable_spectrum() {
        let f = build_frequencies(6, &FrequencyScheme::exp1());
        let r = min_max_frequency(&f).unwrap();
        assert!((r.min_max_frequency - 0.278).abs() < 5e-4);
        assert_eq!(r.argmin.entries(), &[-1, 1, -1, -1, 1, -1]);
        assert!(r.min_max_frequency <= r.max_max_frequency && r.max_max_frequency <= 6.0);
        let tuple = frequency_tuple(&f, None, &r.argmin);
        assert_eq!(tuple.max_abs(), r.min_max_frequency);
    }

    #[test]
    fn integerize_rows() {
        let f = build_frequencies(6, &FrequencyScheme::exp1());
        let z = integerize(&f, 20);
        assert_eq!(z.column(0), [-13, 6, 20, 15, -4, -19]);
        assert_eq!(z.column(1), [16, 19, 4, -16, -19, -4]);
        let edge = FrequencyMatrix::new(3, 1, vec![0.0, 1.0, -1.0]);
        assert_eq!(integerize(&edge, 7).column(0), [0, 7, -7]);
        assert_eq!(choose_modulus(&z), 85);
    }

    #[test]
    fn multiplier_and_modulus() {
        let f = build_frequencies(6, &FrequencyScheme::exp1());
        let r = min_max_frequency(&f).unwrap();
        assert_eq!(choose_multiplier(&r, 6).unwrap(), 26);
        let unit = SpectrumReport {
            min_max_frequency: 1.0,
            ..r.clone()
        };
        assert_eq!(choose_multiplier(&unit, 6).unwrap(), 7);
        let zero = SpectrumReport {
            min_max_frequency: 0.0,
            ..r
        };
        assert_eq!(
            choose_multiplier(&zero, 6),
            Err(SpectrumError::DegenerateSpectrum)
        );
        assert_eq!(
            choose_modulus(&FrequencyMatrix::new(2, 2, vec![0i64; 4])),
            2
        );
        assert_eq!(choose_modulus(&FrequencyMatrix::new(1, 1, vec![-9i64])), 11);
    }

    #[test]
    fn integerization_safety() {
        let f = build_frequencies(6, &FrequencyScheme::exp1());
        let ex = check_integerization(&integerize(&f, 20), 16).unwrap();
        assert!(ex.min_max >= 1);
        // Two equal columns cancel under e = (-1, 1).
        let bad = FrequencyMatrix::new(2, 1, vec![3i64, 3]);
        assert!(matches!(
            check_integerization(&bad, 16),
            Err(SpectrumError::IntegerizationUnsafe { min_max: 0, .. })
        ));
    }

    #[test]
    fn six_variable_table() {
        let rows = spectrum_table(&FrequencyScheme::onevar(), 3..=3, 16).unwrap();
        assert!((rows[0].min_max_frequency - 7.45e-3).abs() < 5e-6);
        let rows = spectrum_table(&FrequencyScheme::twovar(), 5..=5, 16).unwrap();
        assert!((rows[0].min_max_frequency - 0.0227).abs() < 5e-5);
        let rows = spectrum_table(&FrequencyScheme::exp2(), 5..=5, 16).unwrap();
        assert!((rows[0].min_max_frequency - 0.0581).abs() < 5e-5);
    }

    #[test]
    fn size_guard() {
        let f = build_frequencies(17, &FrequencyScheme::onevar());
        assert_eq!(
            min_max_frequency(&f),
            Err(SpectrumError::TooLarge {
                found: 17,
                limit: 16
            })
        );
    }

    #[test]
    fn profile_anchors() {
        let signs: SignVector = "-1;1;-1;-1;1;-1".parse().unwrap();
        let s = FrequencyScheme::exp1();
        assert!((profile_value(&s, &signs, 1.0) + 0.0111).abs() < 5e-5);
        assert!((profile_value(&s, &signs, 1.04245) - 3.85e-5).abs() < 5e-7);
        let samples = axis_profile(&s, &signs, (0.0, 2.0), 5).unwrap();
        assert_eq!(samples.len(), 5);
        assert_eq!(samples[4].t, 2.0);
        assert_eq!(
            axis_profile(&s, &signs, (0.0, 1.0), 1),
            Err(SpectrumError::TooFewSamples(1))
        );
    }

    #[test]
    fn sign_vector_rules() {
        assert!(SignVector::new(vec![0, 0]).is_err());
        assert!(SignVector::new(vec![2]).is_err());
        assert_eq!(
            SignVector::new(vec![-1, 0, 1]).unwrap().to_string(),
            "-1;0;1"
        );
        assert_eq!("1,-1".parse::<SignVector>().unwrap().entries(), &[1, -1]);
    }

    #[test]
    fn csv_row() {
        let rows = spectrum_table(&FrequencyScheme::onevar(), 2..=2, 16).unwrap();
        let line = &rows[0].csv_rows()[0];
        assert!(line.starts_with("2,0.279"), "{line}");
        // The single-variable vector (0, -1) isolates |sin 6|.
        assert!(line.ends_with(",0;-1"), "{line}");
    }

    #[test]
    fn scheme_validation() {
        let mut s = FrequencyScheme::exp1();
        s.bias = Bias::Explicit(0.5);
        assert!(s.validate().is_err());
        assert!(FrequencyScheme::preset("nope").is_err());
        assert_eq!(
            FrequencyScheme::preset("exp2").unwrap(),
            FrequencyScheme::exp2()
        );
    }
}
