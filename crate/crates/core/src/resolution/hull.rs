//! Minimal injective hull `F -> I^0`.

use std::collections::HashMap;

use super::Augmentation;
use crate::error::Result;
use crate::field::Field;
use crate::injective::InjectiveSheaf;
use crate::linalg::{SparseMatrix, SparseVec, SpanBasis};
use crate::poset::Element;
use crate::sheaf::Sheaf;

/// `I^0` together with the augmentation into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hull<F> {
    pub term: InjectiveSheaf,
    pub augmentation: Augmentation<F>,
}

/// Basis of `F(x)` adapted to the maximal vectors: complement first,
/// maximal vectors last.
struct Adapted<F> {
    /// Columns are the adapted basis.
    basis: SparseMatrix<F>,
    /// Inverse of `basis`.
    inverse: SparseMatrix<F>,
    /// Number of complement vectors.
    complement: usize,
}

impl<F: Field> Adapted<F> {
    fn new(dim: usize, maximal: &[SparseVec<F>]) -> Self {
        let mut span = SpanBasis::from_vectors(dim, maximal.iter());
        let mut cols: Vec<SparseVec<F>> = Vec::with_capacity(dim);
        for i in 0..dim {
            let e = SparseVec::unit(i);
            if span.insert(&e) {
                cols.push(e);
            }
        }
        let complement = cols.len();
        cols.extend(maximal.iter().cloned());
        let basis = SparseMatrix::from_columns(dim, &cols).expect("basis vectors have length dim");
        let inverse = basis.inverse().expect("adapted basis is a basis");
        Adapted {
            basis,
            inverse,
            complement,
        }
    }

    /// Coordinates along the maximal part, from standard coordinates.
    fn project(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let full = self.inverse.mul_vec(v);
        full.remap(|i| i.checked_sub(self.complement))
    }
}

/// The minimal injective hull: `dim M_F(x)` generators labeled `x` for every
/// `x`, listed in element order.
pub fn minimal_hull<F: Field>(sheaf: &Sheaf<F>) -> Result<Hull<F>> {
    let p = sheaf.poset();
    let adapted: Vec<Adapted<F>> = p
        .elements()
        .map(|x| Adapted::new(sheaf.dim(x), &sheaf.maximal_vectors(x)))
        .collect();
    let mut term = InjectiveSheaf::empty(p.clone());
    for x in p.elements() {
        let k = sheaf.dim(x) - adapted[x].complement;
        for _ in 0..k {
            term.push(x);
        }
    }
    let maps = p
        .elements()
        .map(|x| augmentation_at(sheaf, &adapted, &term, x))
        .collect();
    Ok(Hull {
        term,
        augmentation: Augmentation::PerElement(maps),
    })
}

/// `alpha(pi)` by propagating each complement vector up the star once.
fn augmentation_at<F: Field>(
    sheaf: &Sheaf<F>,
    adapted: &[Adapted<F>],
    term: &InjectiveSheaf,
    pi: Element,
) -> SparseMatrix<F> {
    let p = sheaf.poset();
    let a = &adapted[pi];
    let dim = sheaf.dim(pi);
    // rows of alpha(pi) are the generators over pi; (label, index in block)
    let over = term.generators_over(pi);
    let mut block_start: HashMap<Element, usize> = HashMap::new();
    for (row, &g) in over.iter().enumerate() {
        block_start.entry(term.generators()[g]).or_insert(row);
    }

    let mut adapted_alpha = SparseMatrix::zeros(over.len(), dim);
    let basis_cols = a.basis.transpose();
    for i in 0..a.complement {
        let mut seen: HashMap<Element, SparseVec<F>> = HashMap::new();
        seen.insert(pi, basis_cols.row(i).clone());
        for &sigma in p.star(pi) {
            let Some(w) = seen.get(&sigma).cloned() else {
                continue;
            };
            if w.is_zero() {
                continue;
            }
            for &tau in p.coboundary(sigma) {
                if seen.contains_key(&tau) {
                    continue;
                }
                let image = sheaf.cover_map(sigma, tau).expect("cover").mul_vec(&w);
                for (r, x) in adapted[tau].project(&image).iter() {
                    let row = block_start[&tau] + r;
                    adapted_alpha.set(row, i, x.clone());
                }
                seen.insert(tau, image);
            }
        }
    }
    if let Some(&start) = block_start.get(&pi) {
        for r in 0..dim - a.complement {
            adapted_alpha.set(start + r, a.complement + r, F::one());
        }
    }
    adapted_alpha.mul(&a.inverse).expect("shapes agree")
}

/// Hull of the constant sheaf: one generator per maximal element and the
/// column of ones.
pub fn constant_hull<F: Field>(sheaf: &Sheaf<F>) -> Hull<F> {
    debug_assert!(sheaf.is_constant());
    let p = sheaf.poset();
    let term = InjectiveSheaf::new(p.clone(), p.maximal_elements()).expect("maximal elements belong to the poset");
    Hull {
        term,
        augmentation: Augmentation::Diagonal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::poset::Poset;
    use std::sync::Arc;

    type Q = Rational;

    /// Stack of `P_tau F(pi <= tau)` over generators, the closed form of
    /// what the propagation computes.
    fn closed_form(sheaf: &Sheaf<Q>, hull: &Hull<Q>, pi: Element) -> SparseMatrix<Q> {
        let adapted: Vec<Adapted<Q>> = sheaf
            .poset()
            .elements()
            .map(|x| Adapted::new(sheaf.dim(x), &sheaf.maximal_vectors(x)))
            .collect();
        let mut out = SparseMatrix::zeros(0, sheaf.dim(pi));
        let mut done = Vec::new();
        for g in hull.term.generators_over(pi) {
            let tau = hull.term.generators()[g];
            if done.contains(&tau) {
                continue;
            }
            done.push(tau);
            let proj = adapted[tau].inverse.select(
                &(adapted[tau].complement..sheaf.dim(tau)).collect::<Vec<_>>(),
                &(0..sheaf.dim(tau)).collect::<Vec<_>>(),
            );
            let block = proj.mul(&sheaf.composite_map(pi, tau).unwrap()).unwrap();
            out = out.vstack(&block).unwrap();
        }
        out
    }

    fn two_chain_sheaf(lower: usize, upper: usize, map: &[&[i64]]) -> Sheaf<Q> {
        let p = Arc::new(Poset::chain(2));
        let m = SparseMatrix::from_i64(lower, map).unwrap();
        Sheaf::new(p, vec![lower, upper], vec![m]).unwrap()
    }

    #[test]
    fn zero_below_w_above() {
        let f = two_chain_sheaf(0, 2, &[&[], &[]]);
        let h = minimal_hull(&f).unwrap();
        assert_eq!(h.term.generators(), &[1, 1]);
        let Augmentation::PerElement(maps) = &h.augmentation else {
            panic!("expected per-element maps");
        };
        assert_eq!(maps[0].shape(), (2, 0));
        assert_eq!(maps[1], SparseMatrix::identity(2));
    }

    #[test]
    fn propagation_matches_closed_form() {
        // F(0) = k^2 -> F(1) = k, kernel spanned by (1,-1)
        let f = two_chain_sheaf(2, 1, &[&[1, 1]]);
        let h = minimal_hull(&f).unwrap();
        assert_eq!(h.term.generators(), &[0, 1]);
        for x in 0..2 {
            let a = h.augmentation.at(&h.term, x);
            assert_eq!(a, closed_form(&f, &h, x));
            assert_eq!(a.rank(), f.dim(x));
        }
    }

    #[test]
    fn constant_matches_general() {
        let fp = crate::catalog::tetrahedron_boundary();
        let f = Sheaf::<Q>::constant(fp.poset.clone());
        let general = minimal_hull(&f).unwrap();
        let special = constant_hull(&f);
        assert_eq!(general.term, special.term);
        for x in fp.poset.elements() {
            assert_eq!(general.augmentation.at(&general.term, x), special.augmentation.at(&special.term, x));
        }
    }

    #[test]
    fn injective_input_is_its_own_hull() {
        let fp = crate::catalog::example_star_poset();
        let p = fp.poset.clone();
        let gens = vec![p.element("23").unwrap(), p.element("2").unwrap(), p.element("23").unwrap()];
        let i = InjectiveSheaf::new(p.clone(), gens.clone()).unwrap();
        let f = i.as_sheaf::<Q>();
        let h = minimal_hull(&f).unwrap();
        let mut a = h.term.generators().to_vec();
        let mut b = gens;
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
        for x in p.elements() {
            let m = h.augmentation.at(&h.term, x);
            assert_eq!(m.nrows(), m.ncols());
            assert_eq!(m.rank(), f.dim(x));
            assert_eq!(m, closed_form(&f, &h, x));
        }
    }
}
