//! One step of the minimal resolution, and the driver that iterates it.

use super::hull::{constant_hull, minimal_hull};
use super::{Augmentation, Method, Resolution};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::injective::{InjectiveSheaf, LabeledMatrix};
use crate::linalg::{SparseMatrix, SparseVec, SpanBasis};
use crate::poset::Element;
use crate::sheaf::Sheaf;

/// The map into the term being extended.
#[derive(Debug, Clone, Copy)]
pub enum Previous<'a, F> {
    /// The augmentation `F -> I^0`.
    Hull(&'a Augmentation<F>),
    /// `eta^(k-1): I^(k-1) -> I^k`.
    Map(&'a LabeledMatrix<F>),
}

impl<F: Field> Previous<'_, F> {
    fn at(&self, term: &InjectiveSheaf, x: Element) -> SparseMatrix<F> {
        match self {
            Previous::Hull(a) => a.at(term, x),
            Previous::Map(m) => m.eval_at(x),
        }
    }
}

/// Builds `I^(k+1)` and `eta^k` so that `ker eta^k(s) = im prev(s)` at every
/// element, adding only the rows that are needed.
pub fn resolution_step<F: Field>(
    term: &InjectiveSheaf,
    prev: Previous<'_, F>,
) -> Result<(InjectiveSheaf, LabeledMatrix<F>)> {
    if let Previous::Map(m) = prev {
        if m.codomain() != term {
            return Err(Error::InvalidResolution(
                "previous map does not land in the term being extended".into(),
            ));
        }
    }
    let p = term.poset();
    let mut next = InjectiveSheaf::empty(p.clone());
    let mut rows: Vec<SparseVec<F>> = Vec::new();
    let mut local = vec![usize::MAX; term.len()];
    for &sigma in p.linear_extension().iter().rev() {
        let over = term.generators_over(sigma);
        if over.is_empty() {
            continue;
        }
        for (i, &g) in over.iter().enumerate() {
            local[g] = i;
        }
        let complement = prev.at(term, sigma).left_null_basis();
        let mut span = SpanBasis::new(over.len());
        for (row, &label) in rows.iter().zip(next.generators()) {
            if p.leq(sigma, label) {
                // support condition keeps this row inside the star
                span.insert(&row.remap(|g| Some(local[g])));
            }
        }
        for b in complement {
            if span.insert(&b) {
                next.push(sigma);
                rows.push(b.remap(|i| Some(over[i])));
            }
        }
        for &g in &over {
            local[g] = usize::MAX;
        }
    }
    let matrix = SparseMatrix::from_rows(term.len(), rows)?;
    let eta = LabeledMatrix::new(term.clone(), next.clone(), matrix)?;
    Ok((next, eta))
}

/// Minimal injective resolution. Fails with an invariant error if more than
/// `max_len` nonzero terms appear (default: height + 2).
pub fn minimal_resolution<F: Field>(sheaf: &Sheaf<F>, max_len: Option<usize>) -> Result<Resolution<F>> {
    sheaf.validate()?;
    let p = sheaf.poset();
    let max_len = max_len.unwrap_or(p.height() + 2);
    let hull = if sheaf.is_constant() {
        constant_hull(sheaf)
    } else {
        minimal_hull(sheaf)?
    };
    let mut terms: Vec<InjectiveSheaf> = Vec::new();
    let mut differentials: Vec<LabeledMatrix<F>> = Vec::new();
    if !hull.term.is_empty() {
        let (mut next, eta) = resolution_step(&hull.term, Previous::Hull(&hull.augmentation))?;
        terms.push(hull.term.clone());
        differentials.push(eta);
        while !next.is_empty() {
            if terms.len() >= max_len {
                return Err(Error::Invariant(format!(
                    "minimal resolution exceeded {max_len} terms"
                )));
            }
            let (after, eta) = resolution_step(&next, Previous::Map(differentials.last().expect("nonempty")))?;
            terms.push(std::mem::replace(&mut next, after));
            differentials.push(eta);
        }
    }
    Resolution::from_parts(sheaf.clone(), hull.augmentation, terms, differentials, Method::Minimal)
}
