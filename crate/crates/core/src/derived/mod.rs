//! Derived pushforwards `R^j f_*` and `R^j f_!` computed from injective
//! resolutions, and the independent cohomology oracles used to check them.

mod oracle;

use std::collections::HashMap;
use std::sync::Arc;

use crate::complex::SimplicialMap;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{SparseMatrix, SparseVec, SpanBasis};
use crate::poset::{Element, Poset, PosetMap};
use crate::resolution::{minimal_resolution, Resolution};
use crate::sheaf::Sheaf;

pub use oracle::{
    multiplicity_table, oracle_cohomology_c, oracle_order_complex_cohomology, oracle_relative_cohomology,
    oracle_star_cohomology_c, verify_multiplicity_theorem, MultiplicityRow,
};

/// `ker eta^j / im eta^(j-1)` over one open set, with a basis of coset
/// representatives.
struct Cohomology<F> {
    /// Generators of `I^j` labeled in the open set, in tuple order.
    coords: Vec<usize>,
    /// Image columns first, then representatives.
    span: SpanBasis<F>,
    image_count: usize,
    reps: Vec<SparseVec<F>>,
}

impl<F: Field> Cohomology<F> {
    fn new(res: &Resolution<F>, j: usize, member: &[bool]) -> Self {
        let Some(term) = res.term(j) else {
            return Cohomology {
                coords: Vec::new(),
                span: SpanBasis::new(0),
                image_count: 0,
                reps: Vec::new(),
            };
        };
        let coords = term.generators_in(member);
        let kernel = res.differentials()[j].restrict_to(member).kernel_basis();
        let image: Vec<SparseVec<F>> = if j == 0 {
            Vec::new()
        } else {
            res.differentials()[j - 1].restrict_to(member).transpose().into_rows()
        };
        let mut span = SpanBasis::new(coords.len());
        for v in &image {
            span.insert(v);
        }
        let image_count = span.inserted();
        let mut reps = Vec::new();
        for v in kernel {
            if span.insert(&v) {
                reps.push(v);
            }
        }
        // rebuild so that representative i sits at insertion index
        // image_count + i
        let mut clean = SpanBasis::new(coords.len());
        for v in image.iter().chain(&reps) {
            clean.insert(v);
        }
        Cohomology {
            coords,
            span: clean,
            image_count,
            reps,
        }
    }

    fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Class of a cocycle given in global generator coordinates.
    fn class_of(&self, global: &SparseVec<F>, position: &HashMap<usize, usize>) -> Result<SparseVec<F>> {
        let local = global.remap(|g| position.get(&g).copied());
        let coeffs = self
            .span
            .express(&local)
            .ok_or_else(|| Error::Invariant("restricted cocycle is not a cocycle".into()))?;
        Ok(coeffs.remap(|i| i.checked_sub(self.image_count)))
    }

    fn rep_global(&self, i: usize) -> SparseVec<F> {
        self.reps[i].remap(|k| Some(self.coords[k]))
    }
}

/// `R^j f_* F` as a sheaf on the target of `f`, from any resolution of `F`.
/// The map for `kappa < lambda` restricts cocycles from the preimage of the
/// star of `kappa` to the smaller preimage of the star of `lambda`.
pub fn pushforward<F: Field>(res: &Resolution<F>, f: &PosetMap, j: usize) -> Result<Sheaf<F>> {
    if f.source().as_ref() != res.sheaf().poset().as_ref() {
        return Err(Error::InvalidPoset("map does not start at the resolved sheaf's poset".into()));
    }
    let target = f.target();
    let mut groups = Vec::with_capacity(target.len());
    for lambda in target.elements() {
        let mut member = vec![false; f.source().len()];
        for s in f.preimage_star(lambda)? {
            member[s] = true;
        }
        groups.push(Cohomology::new(res, j, &member));
    }
    let mut maps = Vec::with_capacity(target.covers().len());
    for &(kappa, lambda) in target.covers() {
        let (lo, hi) = (&groups[kappa], &groups[lambda]);
        let position: HashMap<usize, usize> = hi.coords.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut cols = Vec::with_capacity(lo.dim());
        for i in 0..lo.dim() {
            cols.push(hi.class_of(&lo.rep_global(i), &position)?);
        }
        maps.push(SparseMatrix::from_columns(hi.dim(), &cols)?);
    }
    let dims = groups.iter().map(Cohomology::dim).collect();
    let sheaf = Sheaf::new(target.clone(), dims, maps)?;
    sheaf.validate()?;
    Ok(sheaf)
}

/// `R^j f_* F` for every degree in which the resolution is nonzero.
pub fn pushforwards<F: Field>(res: &Resolution<F>, f: &PosetMap) -> Result<Vec<Sheaf<F>>> {
    (0..res.len().max(1)).map(|j| pushforward(res, f, j)).collect()
}

/// `R^j f_! F` for a sheaf on an open set of the source complex: extend by
/// zero, resolve minimally, push forward along the induced poset map.
/// `embedding[i]` is the source face (no empty simplex) for element `i` of
/// `sheaf`'s poset.
pub fn compact_pushforward<F: Field>(
    sheaf: &Sheaf<F>,
    embedding: &[Element],
    map: &SimplicialMap,
    j: usize,
) -> Result<Sheaf<F>> {
    let (res, f) = compact_setup(sheaf, embedding, map)?;
    pushforward(&res, &f, j)
}

/// All degrees of [`compact_pushforward`], sharing one resolution.
pub fn compact_pushforwards<F: Field>(
    sheaf: &Sheaf<F>,
    embedding: &[Element],
    map: &SimplicialMap,
) -> Result<Vec<Sheaf<F>>> {
    let (res, f) = compact_setup(sheaf, embedding, map)?;
    pushforwards(&res, &f)
}

fn compact_setup<F: Field>(
    sheaf: &Sheaf<F>,
    embedding: &[Element],
    map: &SimplicialMap,
) -> Result<(Resolution<F>, PosetMap)> {
    let (_, _, f) = map.poset_map();
    let extended = sheaf.extend_by_zero(f.source().clone(), embedding)?;
    let res = minimal_resolution(&extended, None)?;
    Ok((res, f))
}

/// The open set `U` as an embedding of its induced subposet, together with
/// the constant sheaf on it.
pub fn constant_on_open<F: Field>(ambient: &Poset, open: &[Element]) -> Result<(Sheaf<F>, Vec<Element>)> {
    ambient.check_up_closed(open)?;
    let sub = Arc::new(ambient.induced(open)?);
    Ok((Sheaf::constant(sub), open.to_vec()))
}

/// Dimension vector of a list of sheaves at element `x`.
pub fn dims_at<F: Field>(sheaves: &[Sheaf<F>], x: Element) -> Vec<usize> {
    sheaves.iter().map(|s| s.dim(x)).collect()
}
