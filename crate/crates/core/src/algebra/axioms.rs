//! Point-wise check that the `+-1` encodings of AND, OR and NOT satisfy the
//! Boolean-algebra axioms, together with `f^2 = 1` and its equivalence to
//! idempotence.

/// `F and G -> (f + 1)(g + 1) / 2 - 1`
#[inline]
pub fn and(f: i32, g: i32) -> i32 {
    (f + 1) * (g + 1) / 2 - 1
}

/// `F or G -> -(f - 1)(g - 1) / 2 + 1`
#[inline]
pub fn or(f: i32, g: i32) -> i32 {
    -(f - 1) * (g - 1) / 2 + 1
}

/// `not F -> -f`
#[inline]
pub fn not(f: i32) -> i32 {
    -f
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }
}

type Law = (&'static str, fn(i32, i32, i32) -> bool);

const LAWS: &[Law] = &[
    ("commutative or", |f, g, _| or(f, g) == or(g, f)),
    ("commutative and", |f, g, _| and(f, g) == and(g, f)),
    ("associative or", |f, g, h| {
        or(f, or(g, h)) == or(or(f, g), h)
    }),
    ("associative and", |f, g, h| {
        and(f, and(g, h)) == and(and(f, g), h)
    }),
    ("absorption (f and g) or g", |f, g, _| or(and(f, g), g) == g),
    ("absorption (f or g) and g", |f, g, _| and(or(f, g), g) == g),
    ("distributive and over or", |f, g, h| {
        and(f, or(g, h)) == or(and(f, g), and(f, h))
    }),
    ("distributive or over and", |f, g, h| {
        or(f, and(g, h)) == and(or(f, g), or(f, h))
    }),
    ("complement (f and not f) or g", |f, g, _| {
        or(and(f, not(f)), g) == g
    }),
    ("complement (f or not f) and g", |f, g, _| {
        and(or(f, not(f)), g) == g
    }),
    ("square is one", |f, g, h| {
        [f, and(f, g), or(g, h), not(h)].iter().all(|v| v * v == 1)
    }),
    ("square one iff idempotent", |f, _, _| {
        (f * f == 1) == (and(f, f) == f && or(f, f) == f)
    }),
];

/// Runs every law over all of `{-1, 1}^3`.
pub fn boolean_axiom_suite() -> AxiomReport {
    let values = [-1, 1];
    let checks = LAWS
        .iter()
        .map(|&(name, law)| {
            let mut cases = 0;
            let mut failures = 0;
            for &f in &values {
                for &g in &values {
                    for &h in &values {
                        cases += 1;
                        if !law(f, g, h) {
                            failures += 1;
                        }
                    }
                }
            }
            AxiomCheck {
                name,
                cases,
                failures,
            }
        })
        .collect();
    AxiomReport { checks }
}
