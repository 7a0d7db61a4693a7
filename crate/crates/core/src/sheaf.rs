//! Sheaves of finite-dimensional vector spaces on finite posets.
//!
//! Linear maps are stored on cover relations only. Composites along longer
//! relations are derived once, at construction, along the first cover path
//! found in linear-extension order; [`Sheaf::validate`] then checks that
//! every one-step extension of such a path agrees, which by induction on
//! chain length makes every path agree.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{SparseMatrix, SparseVec};
use crate::poset::{Element, Poset};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sheaf<F> {
    poset: Arc<Poset>,
    dims: Vec<usize>,
    maps: Vec<SparseMatrix<F>>,
    composites: HashMap<(Element, Element), SparseMatrix<F>>,
}

impl<F: Field> Sheaf<F> {
    /// `maps[i]` is the map on `poset.covers()[i]`, of shape
    /// `dims[upper] x dims[lower]`.
    pub fn new(poset: Arc<Poset>, dims: Vec<usize>, maps: Vec<SparseMatrix<F>>) -> Result<Self> {
        if dims.len() != poset.len() {
            return Err(Error::DimensionMismatch {
                expected: poset.len(),
                found: dims.len(),
            });
        }
        if maps.len() != poset.covers().len() {
            return Err(Error::DimensionMismatch {
                expected: poset.covers().len(),
                found: maps.len(),
            });
        }
        for (&(a, b), m) in poset.covers().iter().zip(&maps) {
            if m.shape() != (dims[b], dims[a]) {
                return Err(Error::ShapeMismatch {
                    context: format!("{} < {}", poset.name(a), poset.name(b)),
                    expected_rows: dims[b],
                    expected_cols: dims[a],
                    rows: m.nrows(),
                    cols: m.ncols(),
                });
            }
        }
        let composites = compose_along_first_paths(&poset, &maps);
        Ok(Sheaf {
            poset,
            dims,
            maps,
            composites,
        })
    }

    /// Like [`Sheaf::new`] but from a table keyed by cover; covers missing
    /// from the table get the zero map, which is only allowed when one of
    /// the two stalks is zero.
    pub fn from_cover_table(
        poset: Arc<Poset>,
        dims: Vec<usize>,
        mut table: HashMap<(Element, Element), SparseMatrix<F>>,
    ) -> Result<Self> {
        if dims.len() != poset.len() {
            return Err(Error::DimensionMismatch {
                expected: poset.len(),
                found: dims.len(),
            });
        }
        let mut maps = Vec::with_capacity(poset.covers().len());
        for &(a, b) in poset.covers() {
            match table.remove(&(a, b)) {
                Some(m) => maps.push(m),
                None if dims[a] == 0 || dims[b] == 0 => maps.push(SparseMatrix::zeros(dims[b], dims[a])),
                None => {
                    return Err(Error::ShapeMismatch {
                        context: format!("missing map {} < {}", poset.name(a), poset.name(b)),
                        expected_rows: dims[b],
                        expected_cols: dims[a],
                        rows: 0,
                        cols: 0,
                    })
                }
            }
        }
        if let Some(&(a, b)) = table.keys().next() {
            return Err(Error::InvalidPoset(format!(
                "`{}` < `{}` is not a cover relation",
                poset.name(a),
                poset.name(b)
            )));
        }
        Self::new(poset, dims, maps)
    }

    /// One-dimensional stalks and identity maps.
    pub fn constant(poset: Arc<Poset>) -> Self {
        let dims = vec![1; poset.len()];
        let maps = vec![SparseMatrix::identity(1); poset.covers().len()];
        Self::new(poset, dims, maps).expect("constant sheaf is well formed")
    }

    pub fn zero(poset: Arc<Poset>) -> Self {
        let dims = vec![0; poset.len()];
        let maps = vec![SparseMatrix::zeros(0, 0); poset.covers().len()];
        Self::new(poset, dims, maps).expect("zero sheaf is well formed")
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn dim(&self, x: Element) -> usize {
        self.dims[x]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Whether every stalk is one-dimensional with identity maps.
    pub fn is_constant(&self) -> bool {
        self.dims.iter().all(|&d| d == 1) && self.maps.iter().all(|m| m.get(0, 0).is_one())
    }

    /// Map on a cover relation.
    pub fn cover_map(&self, lower: Element, upper: Element) -> Option<&SparseMatrix<F>> {
        self.poset.cover_index(lower, upper).map(|i| &self.maps[i])
    }

    pub fn cover_maps(&self) -> &[SparseMatrix<F>] {
        &self.maps
    }

    /// `F(lower <= upper)`; the identity when the two agree.
    pub fn composite_map(&self, lower: Element, upper: Element) -> Result<SparseMatrix<F>> {
        self.poset.check(lower)?;
        self.poset.check(upper)?;
        if lower == upper {
            return Ok(SparseMatrix::identity(self.dims[lower]));
        }
        self.composites
            .get(&(lower, upper))
            .cloned()
            .ok_or_else(|| Error::Incomparable(self.poset.name(lower).into(), self.poset.name(upper).into()))
    }

    /// Applies `F(lower <= upper)` to a vector without cloning the matrix.
    pub fn apply(&self, lower: Element, upper: Element, v: &SparseVec<F>) -> SparseVec<F> {
        if lower == upper {
            return v.clone();
        }
        self.composites[&(lower, upper)].mul_vec(v)
    }

    /// Checks that `F(t <= g) F(s <= t) = F(s <= g)` for every `s <= t` and
    /// every cover `t < g`.
    pub fn validate(&self) -> Result<()> {
        let p = &self.poset;
        for s in p.elements() {
            for &t in p.star(s) {
                for &g in p.coboundary(t) {
                    let step = self.cover_map(t, g).expect("cover");
                    let lhs = if s == t {
                        step.clone()
                    } else {
                        step.mul(&self.composites[&(s, t)])?
                    };
                    if lhs != self.composites[&(s, g)] {
                        return Err(Error::NotFunctorial {
                            lower: p.name(s).into(),
                            middle: p.name(t).into(),
                            upper: p.name(g).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Basis of the maximal vectors at `x`: the common kernel of the maps to
    /// every element covering `x`.
    pub fn maximal_vectors(&self, x: Element) -> Vec<SparseVec<F>> {
        let d = self.dims[x];
        let mut stacked = SparseMatrix::zeros(0, d);
        for &y in self.poset.coboundary(x) {
            stacked = stacked
                .vstack(self.cover_map(x, y).expect("cover"))
                .expect("all maps out of x have dim F(x) columns");
        }
        stacked.kernel_basis()
    }

    /// The same data over `poset`, which must have the same elements and
    /// covers (typically a different linear extension).
    pub fn with_poset(&self, poset: Arc<Poset>) -> Result<Sheaf<F>> {
        if poset.names() != self.poset.names() || poset.covers() != self.poset.covers() {
            return Err(Error::InvalidPoset("posets differ".into()));
        }
        Sheaf::new(poset, self.dims.clone(), self.maps.clone())
    }

    /// Restriction to an up-closed set. Element `i` of the result's poset is
    /// `open[i]`.
    pub fn restrict(&self, open: &[Element]) -> Result<Sheaf<F>> {
        self.poset.check_up_closed(open)?;
        let sub = Arc::new(self.poset.induced(open)?);
        let dims = open.iter().map(|&x| self.dims[x]).collect();
        let maps = sub
            .covers()
            .iter()
            .map(|&(a, b)| self.cover_map(open[a], open[b]).cloned().expect("covers of an open set are covers"))
            .collect();
        Sheaf::new(sub, dims, maps)
    }

    /// Extension by zero from an open set. `embedding[i]` is the element of
    /// `ambient` corresponding to element `i` of this sheaf's poset.
    pub fn extend_by_zero(&self, ambient: Arc<Poset>, embedding: &[Element]) -> Result<Sheaf<F>> {
        if embedding.len() != self.poset.len() {
            return Err(Error::DimensionMismatch {
                expected: self.poset.len(),
                found: embedding.len(),
            });
        }
        ambient.check_up_closed(embedding)?;
        let mut local = vec![None; ambient.len()];
        for (i, &x) in embedding.iter().enumerate() {
            if local[x].replace(i).is_some() {
                return Err(Error::InvalidPoset(format!("`{}` is embedded twice", ambient.name(x))));
            }
        }
        let mut dims = vec![0; ambient.len()];
        for (i, &x) in embedding.iter().enumerate() {
            dims[x] = self.dims[i];
        }
        let mut maps = Vec::with_capacity(ambient.covers().len());
        for &(a, b) in ambient.covers() {
            match (local[a], local[b]) {
                (Some(i), Some(j)) => {
                    let m = self.cover_map(i, j).ok_or_else(|| {
                        Error::InvalidPoset(format!(
                            "`{}` < `{}` is a cover of the ambient poset but not of the open set",
                            ambient.name(a),
                            ambient.name(b)
                        ))
                    })?;
                    maps.push(m.clone());
                }
                _ => maps.push(SparseMatrix::zeros(dims[b], dims[a])),
            }
        }
        if self.poset.covers().len() != ambient.covers().iter().filter(|&&(a, b)| local[a].is_some() && local[b].is_some()).count() {
            return Err(Error::InvalidPoset("embedding does not preserve cover relations".into()));
        }
        Sheaf::new(ambient, dims, maps)
    }
}

fn compose_along_first_paths<F: Field>(
    poset: &Poset,
    maps: &[SparseMatrix<F>],
) -> HashMap<(Element, Element), SparseMatrix<F>> {
    let mut out: HashMap<(Element, Element), SparseMatrix<F>> = HashMap::new();
    for s in poset.elements() {
        // star(s) is in linear-extension order, so every predecessor on a
        // path from s is done before its successor
        for &t in &poset.star(s)[1..] {
            let via = poset
                .boundary(t)
                .iter()
                .copied()
                .filter(|&r| poset.leq(s, r))
                .min_by_key(|&r| poset.position(r))
                .expect("some cover of t lies above s");
            let step = &maps[poset.cover_index(via, t).expect("cover")];
            let m = if via == s {
                step.clone()
            } else {
                step.mul(&out[&(s, via)]).expect("shapes checked")
            };
            out.insert((s, t), m);
        }
    }
    out
}

/// A natural transformation between two sheaves on the same poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans<F> {
    source: Sheaf<F>,
    target: Sheaf<F>,
    components: Vec<SparseMatrix<F>>,
}

impl<F: Field> NatTrans<F> {
    pub fn new(source: Sheaf<F>, target: Sheaf<F>, components: Vec<SparseMatrix<F>>) -> Result<Self> {
        if source.poset() != target.poset() {
            return Err(Error::InvalidPoset("source and target live on different posets".into()));
        }
        let p = source.poset().clone();
        if components.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: p.len(),
                found: components.len(),
            });
        }
        for x in p.elements() {
            let c = &components[x];
            if c.shape() != (target.dim(x), source.dim(x)) {
                return Err(Error::ShapeMismatch {
                    context: format!("component at {}", p.name(x)),
                    expected_rows: target.dim(x),
                    expected_cols: source.dim(x),
                    rows: c.nrows(),
                    cols: c.ncols(),
                });
            }
        }
        for &(a, b) in p.covers() {
            let lhs = target.cover_map(a, b).expect("cover").mul(&components[a])?;
            let rhs = components[b].mul(source.cover_map(a, b).expect("cover"))?;
            if lhs != rhs {
                return Err(Error::NotNatural {
                    lower: p.name(a).into(),
                    upper: p.name(b).into(),
                });
            }
        }
        Ok(NatTrans {
            source,
            target,
            components,
        })
    }

    pub fn source(&self) -> &Sheaf<F> {
        &self.source
    }

    pub fn target(&self) -> &Sheaf<F> {
        &self.target
    }

    pub fn component(&self, x: Element) -> &SparseMatrix<F> {
        &self.components[x]
    }
}
