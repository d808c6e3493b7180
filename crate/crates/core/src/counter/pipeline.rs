//! End-to-end count: relax, encode, invert, choose frequencies, sum.

use std::fmt;

use thiserror::Error;

use super::{lattice_count, CountResult, CounterError, FrequencyAssignment, LatticeConfig};
use crate::algebra::{apply_inverse_relaxation, encode, AlgebraError};
use crate::cnf::CnfFormula;
use crate::relaxation::relax;
use crate::spectrum::{
    build_frequencies, check_integerization, choose_multiplier, min_max_frequency_with_limit,
    FrequencyScheme, SpectrumError, DEFAULT_ENUMERATION_LIMIT,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overrides {
    pub multiplier: Option<u64>,
    pub modulus: Option<u64>,
    /// Largest `n` for the sign-vector scans.
    pub enumeration_limit: usize,
}

impl Default for Overrides {
    fn default() -> Self {
        Overrides {
            multiplier: None,
            modulus: None,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    InverseRelaxation,
    Scheme,
    MinMaxFrequency,
    ChooseMultiplier,
    Integerize,
    LatticeCount,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::InverseRelaxation => "inverse_relaxation",
            Stage::Scheme => "scheme",
            Stage::MinMaxFrequency => "min_max_frequency",
            Stage::ChooseMultiplier => "choose_multiplier",
            Stage::Integerize => "integerize",
            Stage::LatticeCount => "lattice_count",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StageError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Counter(#[from] CounterError),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{stage}: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: StageError,
}

fn at<E: Into<StageError>>(stage: Stage) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError {
        stage,
        source: e.into(),
    }
}

/// Counts the models of `cnf` over all `2^N` declared-variable assignments.
pub fn count(
    cnf: &CnfFormula,
    scheme: &FrequencyScheme,
    overrides: &Overrides,
    config: &LatticeConfig,
) -> Result<CountResult, PipelineError> {
    let relaxed = relax(cnf);
    let g = apply_inverse_relaxation(&encode(&relaxed)).map_err(at(Stage::InverseRelaxation))?;
    scheme.validate().map_err(at(Stage::Scheme))?;

    let n = relaxed.num_new_variables();
    let real = build_frequencies(n, scheme);
    let spectrum = min_max_frequency_with_limit(&real, overrides.enumeration_limit)
        .map_err(at(Stage::MinMaxFrequency))?;
    let multiplier = match overrides.multiplier {
        Some(0) => return Err(at(Stage::ChooseMultiplier)(SpectrumError::ZeroMultiplier)),
        Some(m) => m,
        None => choose_multiplier(&spectrum, n).map_err(at(Stage::ChooseMultiplier))?,
    };
    let mut fa = FrequencyAssignment::new(real, multiplier);
    let integer = check_integerization(&fa.integer_freqs, overrides.enumeration_limit)
        .map_err(at(Stage::Integerize))?;
    if let Some(l) = overrides.modulus {
        fa = fa.with_modulus(l);
    }

    let mut result = lattice_count(&g, &fa, config).map_err(at(Stage::LatticeCount))?;
    let absent = relaxed.num_absent_variables();
    result.count = result.relaxed_count << absent;
    let diag = &mut result.diagnostics;
    diag.num_variables = cnf.num_variables();
    diag.min_max_frequency = Some(spectrum.min_max_frequency);
    diag.argmin = Some(spectrum.argmin);
    diag.integer_min_max = Some(integer.min_max);
    Ok(result)
}
