//! CNF instances and the DIMACS reader/writer.
//!
//! Only pure 2-SAT or pure 3-SAT instances are accepted: every clause must
//! have width 2 or 3 and all clauses must share that width. Repeated literals
//! and tautological clauses are kept as written.

use std::fmt;

use thiserror::Error;

/// Sign of a literal occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    /// `+1` for a positive occurrence, `-1` for a negated one.
    #[inline]
    pub fn sign(self) -> i8 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => -1,
        }
    }
}

/// A variable (1-based) together with its polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    variable: usize,
    polarity: Polarity,
}

impl Literal {
    /// # Panics
    ///
    /// If `variable` is zero.
    pub fn new(variable: usize, polarity: Polarity) -> Self {
        assert!(variable >= 1, "variables are 1-based");
        Literal { variable, polarity }
    }

    pub fn positive(variable: usize) -> Self {
        Self::new(variable, Polarity::Positive)
    }

    pub fn negative(variable: usize) -> Self {
        Self::new(variable, Polarity::Negative)
    }

    /// Builds a literal from its signed DIMACS encoding. Returns `None` for 0.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 {
            return None;
        }
        let polarity = if value > 0 {
            Polarity::Positive
        } else {
            Polarity::Negative
        };
        Some(Literal {
            variable: value.unsigned_abs() as usize,
            polarity,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        self.variable as i64 * self.polarity.sign() as i64
    }

    #[inline]
    pub fn variable(self) -> usize {
        self.variable
    }

    #[inline]
    pub fn polarity(self) -> Polarity {
        self.polarity
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.polarity == Polarity::Positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Common clause width of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ClauseWidth {
    Two,
    Three,
}

impl ClauseWidth {
    pub fn from_len(len: usize) -> Option<Self> {
        match len {
            2 => Some(ClauseWidth::Two),
            3 => Some(ClauseWidth::Three),
            _ => None,
        }
    }

    #[inline]
    pub fn get(self) -> usize {
        match self {
            ClauseWidth::Two => 2,
            ClauseWidth::Three => 3,
        }
    }
}

pub type Clause = Vec<Literal>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("missing `p cnf <vars> <clauses>` header")]
    MissingHeader,
    #[error("malformed header on line {line}: {text:?}")]
    MalformedHeader { line: usize, text: String },
    #[error("invalid token {token:?} on line {line}")]
    InvalidToken { line: usize, token: String },
    #[error("clause {clause} has width {width}; only widths 2 and 3 are supported")]
    ClauseWidthUnsupported { clause: usize, width: usize },
    #[error("variable {variable} in clause {clause} exceeds the declared {declared} variables")]
    VariableOutOfRange {
        clause: usize,
        variable: usize,
        declared: usize,
    },
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("clause {clause} has width {found} but the instance width is {expected}")]
    MixedWidths {
        clause: usize,
        expected: usize,
        found: usize,
    },
    #[error("instance has no clauses")]
    EmptyFormula,
}

/// A validated CNF instance: `num_variables` declared variables and a
/// non-empty list of clauses of one common width (2 or 3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_variables: usize,
    clauses: Vec<Clause>,
    width: ClauseWidth,
}

impl CnfFormula {
    pub fn new(num_variables: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        let first = clauses.first().ok_or(CnfError::EmptyFormula)?;
        let width = ClauseWidth::from_len(first.len()).ok_or(CnfError::ClauseWidthUnsupported {
            clause: 1,
            width: first.len(),
        })?;
        for (idx, clause) in clauses.iter().enumerate() {
            let clause_no = idx + 1;
            if ClauseWidth::from_len(clause.len()).is_none() {
                return Err(CnfError::ClauseWidthUnsupported {
                    clause: clause_no,
                    width: clause.len(),
                });
            }
            if clause.len() != width.get() {
                return Err(CnfError::MixedWidths {
                    clause: clause_no,
                    expected: width.get(),
                    found: clause.len(),
                });
            }
            if let Some(lit) = clause.iter().find(|l| l.variable() > num_variables) {
                return Err(CnfError::VariableOutOfRange {
                    clause: clause_no,
                    variable: lit.variable(),
                    declared: num_variables,
                });
            }
        }
        Ok(CnfFormula {
            num_variables,
            clauses,
            width,
        })
    }

    /// Convenience constructor from signed DIMACS integers.
    ///
    /// # Panics
    ///
    /// If any literal is 0.
    pub fn from_signed(num_variables: usize, clauses: &[&[i64]]) -> Result<Self, CnfError> {
        let clauses = clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&v| Literal::from_dimacs(v).expect("literal 0 is a terminator"))
                    .collect()
            })
            .collect();
        Self::new(num_variables, clauses)
    }

    #[inline]
    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    #[inline]
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    #[inline]
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    #[inline]
    pub fn width(&self) -> ClauseWidth {
        self.width
    }

    /// Total number of literal occurrences, `width * M`.
    pub fn num_occurrences(&self) -> usize {
        self.width.get() * self.clauses.len()
    }

    /// Sorted list of variables that occur in at least one clause.
    pub fn occurring_variables(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_variables + 1];
        for lit in self.clauses.iter().flatten() {
            seen[lit.variable()] = true;
        }
        (1..=self.num_variables).filter(|&v| seen[v]).collect()
    }

    /// Truth value under an assignment where bit `v - 1` of `assignment`
    /// holds variable `v`.
    pub fn is_satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|lit| {
                let bit = (assignment >> (lit.variable() - 1)) & 1 == 1;
                bit == lit.is_positive()
            })
        })
    }
}

/// Parses DIMACS CNF text.
///
/// Comment lines start with `c`; a `%` line ends the clause section (as in
/// the SATLIB benchmark files). Clauses may span several lines and are
/// terminated by `0`; a trailing clause without terminator is accepted.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Clause = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let malformed = || CnfError::MalformedHeader {
                line: line_no,
                text: line.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(malformed());
            }
            let vars = fields[2].parse().map_err(|_| malformed())?;
            let count = fields[3].parse().map_err(|_| malformed())?;
            header = Some((vars, count));
            continue;
        }
        if header.is_none() {
            return Err(CnfError::MissingHeader);
        }
        for token in line.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| CnfError::InvalidToken {
                line: line_no,
                token: token.to_string(),
            })?;
            match Literal::from_dimacs(value) {
                Some(lit) => current.push(lit),
                None => clauses.push(std::mem::take(&mut current)),
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }

    let (num_variables, declared) = header.ok_or(CnfError::MissingHeader)?;
    // Width problems are reported before the count so that a `1 0` clause
    // reads as a width error rather than a count error.
    if let Some((idx, c)) = clauses
        .iter()
        .enumerate()
        .find(|(_, c)| ClauseWidth::from_len(c.len()).is_none())
    {
        return Err(CnfError::ClauseWidthUnsupported {
            clause: idx + 1,
            width: c.len(),
        });
    }
    if clauses.len() != declared {
        return Err(CnfError::ClauseCountMismatch {
            declared,
            found: clauses.len(),
        });
    }
    CnfFormula::new(num_variables, clauses)
}

/// Writes the instance back as DIMACS, one clause per line.
pub fn to_dimacs(cnf: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_variables(), cnf.num_clauses());
    for clause in cnf.clauses() {
        for lit in clause {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}
