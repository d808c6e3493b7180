//! Identity relaxation.
//!
//! Every literal occurrence gets its own fresh variable, numbered left to
//! right clause by clause, so clause `j` (1-based) position `t` becomes
//! variable `width * (j - 1) + t`. The fact that all copies of one original
//! variable must agree is restored by an identical-OR group per original
//! variable: the group holds iff `e_1 x_1 = e_2 x_2 = ... = e_r x_r`, where
//! `e_i` is the polarity of the `i`-th occurrence.

use crate::cnf::{ClauseWidth, CnfFormula, Polarity};

/// One renamed occurrence of an original variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Occurrence {
    /// 1-based index of the fresh variable.
    pub variable: usize,
    pub polarity: Polarity,
}

impl Occurrence {
    #[inline]
    pub fn sign(&self) -> i8 {
        self.polarity.sign()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IorGroup {
    pub original_variable: usize,
    /// Occurrences in increasing fresh-variable order; never empty.
    pub occurrences: Vec<Occurrence>,
}

impl IorGroup {
    /// Number of occurrences `r`.
    #[inline]
    pub fn len(&self) -> usize {
        self.occurrences.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.occurrences.is_empty()
    }

    /// True iff all `e_i * x_i` agree under `assignment` (indexed by fresh
    /// variable, 0-based slot `variable - 1`).
    pub fn is_consistent(&self, assignment: &[i8]) -> bool {
        let mut it = self
            .occurrences
            .iter()
            .map(|o| o.sign() * assignment[o.variable - 1]);
        let first = it.next().expect("IOR groups are never empty");
        it.all(|v| v == first)
    }
}

/// A CNF formula after identity relaxation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelaxedFormula {
    pub clause_width: ClauseWidth,
    /// Declared variables of the source CNF (`N`), including absent ones.
    pub num_original_variables: usize,
    /// Fresh variables per clause (1-based), each of length `clause_width`.
    pub clauses: Vec<Vec<usize>>,
    /// One group per occurring original variable, in variable order.
    pub ior_groups: Vec<IorGroup>,
}

impl RelaxedFormula {
    /// Number of fresh variables `n = width * M`.
    #[inline]
    pub fn num_new_variables(&self) -> usize {
        self.clause_width.get() * self.clauses.len()
    }

    #[inline]
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Number of original variables that occur (the number of IOR groups).
    #[inline]
    pub fn num_occurring_variables(&self) -> usize {
        self.ior_groups.len()
    }

    /// Declared variables that never occur; each doubles the CNF count.
    #[inline]
    pub fn num_absent_variables(&self) -> usize {
        self.num_original_variables - self.ior_groups.len()
    }

    /// `+1` iff every clause has a true fresh variable and every IOR group
    /// is internally consistent; `-1` otherwise.
    ///
    /// # Panics
    ///
    /// If `assignment.len() != n`.
    pub fn evaluate(&self, assignment: &[i8]) -> i8 {
        assert_eq!(
            assignment.len(),
            self.num_new_variables(),
            "assignment must cover every fresh variable"
        );
        let clauses_hold = self
            .clauses
            .iter()
            .all(|c| c.iter().any(|&v| assignment[v - 1] == 1));
        if clauses_hold && self.ior_groups.iter().all(|g| g.is_consistent(assignment)) {
            1
        } else {
            -1
        }
    }
}

pub fn relax(cnf: &CnfFormula) -> RelaxedFormula {
    let width = cnf.width();
    let mut per_variable: Vec<Vec<Occurrence>> = vec![Vec::new(); cnf.num_variables() + 1];
    let mut clauses = Vec::with_capacity(cnf.num_clauses());
    for (j, clause) in cnf.clauses().iter().enumerate() {
        let mut fresh = Vec::with_capacity(width.get());
        for (t, lit) in clause.iter().enumerate() {
            let variable = width.get() * j + t + 1;
            fresh.push(variable);
            per_variable[lit.variable()].push(Occurrence {
                variable,
                polarity: lit.polarity(),
            });
        }
        clauses.push(fresh);
    }
    let ior_groups = per_variable
        .into_iter()
        .enumerate()
        .filter(|(_, occ)| !occ.is_empty())
        .map(|(original_variable, occurrences)| IorGroup {
            original_variable,
            occurrences,
        })
        .collect();
    RelaxedFormula {
        clause_width: width,
        num_original_variables: cnf.num_variables(),
        clauses,
        ior_groups,
    }
}

/// Calls `f` with every point of `{-1, 1}^n`, in binary order where bit
/// `j` set means `x_{j+1} = +1`.
pub fn for_each_spin_assignment(n: usize, mut f: impl FnMut(&[i8])) {
    assert!(n < 63, "too many variables to enumerate");
    let mut point = vec![-1i8; n];
    for bits in 0u64..(1u64 << n) {
        for (j, x) in point.iter_mut().enumerate() {
            *x = if (bits >> j) & 1 == 1 { 1 } else { -1 };
        }
        f(&point);
    }
}

/// Number of fresh-variable assignments accepted by [`RelaxedFormula::evaluate`].
pub fn count_relaxed_models(rf: &RelaxedFormula) -> u64 {
    let mut count = 0;
    for_each_spin_assignment(rf.num_new_variables(), |a| {
        if rf.evaluate(a) == 1 {
            count += 1;
        }
    });
    count
}
