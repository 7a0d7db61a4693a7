//! Certificates: exactness at every element and minimality of every term.

use std::fmt;

use super::Resolution;
use crate::field::Field;
use crate::linalg::{SparseVec, SpanBasis};
use crate::poset::Element;

/// Where a resolution stops being exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// The augmentation is not injective at `element`.
    NotInjective { element: String },
    /// `eta^degree` composed with the map before it is nonzero at `element`.
    NotComplex { degree: usize, element: String },
    /// `ker eta^degree` is bigger than the image of the map before it.
    NotExact { degree: usize, element: String },
    /// A term is paired with a map of the wrong shape.
    Malformed { degree: usize },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::NotInjective { element } => write!(f, "augmentation not injective at `{element}`"),
            Failure::NotComplex { degree, element } => {
                write!(f, "composite through degree {degree} is nonzero at `{element}`")
            }
            Failure::NotExact { degree, element } => write!(f, "not exact in degree {degree} at `{element}`"),
            Failure::Malformed { degree } => write!(f, "malformed map in degree {degree}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExactnessReport {
    pub failures: Vec<Failure>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `0 -> F -> I^0 -> I^1 -> ... -> 0` element by element using
/// ranks: injectivity of the augmentation, the chain condition, and
/// `rank prev + rank eta = dim I^k`.
pub fn verify_exactness<F: Field>(res: &Resolution<F>) -> ExactnessReport {
    let mut failures = Vec::new();
    let sheaf = res.sheaf();
    let p = sheaf.poset();
    for d in 0..res.differentials().len().saturating_sub(1) {
        let a = &res.differentials()[d];
        let b = &res.differentials()[d + 1];
        if a.codomain() != b.domain() {
            failures.push(Failure::Malformed { degree: d + 1 });
        }
    }
    if !failures.is_empty() {
        return ExactnessReport { failures };
    }
    for x in p.elements() {
        let name = p.name(x).to_string();
        let mut prev = res.augmentation_at(x);
        if prev.rank() != sheaf.dim(x) {
            failures.push(Failure::NotInjective { element: name.clone() });
        }
        if res.is_empty() {
            continue;
        }
        for (k, eta) in res.differentials().iter().enumerate() {
            let cur = eta.eval_at(x);
            let dim = res.stalk_dim(k, x);
            if prev.nrows() != dim || cur.ncols() != dim {
                failures.push(Failure::Malformed { degree: k });
                break;
            }
            let composite = cur.mul(&prev).expect("shapes checked");
            if !composite.is_zero() {
                failures.push(Failure::NotComplex {
                    degree: k,
                    element: name.clone(),
                });
            } else if prev.rank() + cur.rank() != dim {
                failures.push(Failure::NotExact {
                    degree: k,
                    element: name.clone(),
                });
            }
            prev = cur;
        }
    }
    ExactnessReport { failures }
}

/// No differential has a nonzero entry between two generators with the same
/// label, and every generator of `I^0` labeled `x` is hit by the
/// augmentation at `x`.
pub fn verify_minimality<F: Field>(res: &Resolution<F>) -> bool {
    for eta in res.differentials() {
        let rows = eta.codomain().generators();
        let cols = eta.domain().generators();
        if eta.matrix().triplets().any(|(i, j, _)| rows[i] == cols[j]) {
            return false;
        }
    }
    let Some(first) = res.terms().first() else {
        return true;
    };
    let p = res.sheaf().poset();
    for x in p.elements() {
        if first.multiplicity(x) == 0 {
            continue;
        }
        let over = first.generators_over(x);
        let alpha = res.augmentation_at(x);
        let span = SpanBasis::from_vectors(over.len(), alpha.transpose().rows().iter());
        for (i, &g) in over.iter().enumerate() {
            if first.generators()[g] == x && !span.contains(&SparseVec::unit(i)) {
                return false;
            }
        }
    }
    true
}

/// Alternating sum of stalk dimensions at `x`.
pub fn euler_characteristic<F: Field>(res: &Resolution<F>, x: Element) -> i64 {
    (0..res.len())
        .map(|k| {
            let d = res.stalk_dim(k, x) as i64;
            if k % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .sum()
}
