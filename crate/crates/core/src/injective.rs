//! Injective sheaves as tuples of generators, and natural transformations
//! between them as labeled matrices.
//!
//! A generator labeled `p` stands for one indecomposable summand `[p]`: the
//! sheaf that is one-dimensional on the down-set of `p` with identity maps
//! and zero elsewhere. A map `[p] -> [q]` can only be nonzero when `q <= p`,
//! so a labeled matrix may only have a nonzero entry at (row `g'`, column
//! `g`) when `label(g') <= label(g)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::SparseMatrix;
use crate::poset::{Element, Poset};
use crate::sheaf::{NatTrans, Sheaf};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectiveSheaf {
    poset: Arc<Poset>,
    generators: Vec<Element>,
}

impl InjectiveSheaf {
    pub fn new(poset: Arc<Poset>, generators: Vec<Element>) -> Result<Self> {
        for &g in &generators {
            poset.check(g)?;
        }
        Ok(InjectiveSheaf { poset, generators })
    }

    pub fn empty(poset: Arc<Poset>) -> Self {
        InjectiveSheaf {
            poset,
            generators: Vec::new(),
        }
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub(crate) fn push(&mut self, label: Element) {
        self.generators.push(label);
    }

    /// Positions of generators whose label is `>= x`, in tuple order. These
    /// index the coordinates of the stalk at `x`.
    pub fn generators_over(&self, x: Element) -> Vec<usize> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, &g)| self.poset.leq(x, g))
            .map(|(i, _)| i)
            .collect()
    }

    /// Positions of generators with label in `set` (a membership mask).
    pub fn generators_in(&self, member: &[bool]) -> Vec<usize> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, &g)| member[g])
            .map(|(i, _)| i)
            .collect()
    }

    pub fn stalk_dim(&self, x: Element) -> usize {
        self.generators.iter().filter(|&&g| self.poset.leq(x, g)).count()
    }

    /// Number of generators labeled exactly `x`.
    pub fn multiplicity(&self, x: Element) -> usize {
        self.generators.iter().filter(|&&g| g == x).count()
    }

    /// The coordinate projection `I(lower) -> I(upper)`.
    pub fn restriction_matrix<F: Field>(&self, lower: Element, upper: Element) -> Result<SparseMatrix<F>> {
        self.poset.check(lower)?;
        self.poset.check(upper)?;
        if !self.poset.leq(lower, upper) {
            return Err(Error::Incomparable(
                self.poset.name(lower).into(),
                self.poset.name(upper).into(),
            ));
        }
        let src = self.generators_over(lower);
        let dst = self.generators_over(upper);
        let mut m = SparseMatrix::zeros(dst.len(), src.len());
        // dst is a subsequence of src
        let mut j = 0;
        for (i, &g) in dst.iter().enumerate() {
            while src[j] != g {
                j += 1;
            }
            m.set(i, j, F::one());
        }
        Ok(m)
    }

    /// The explicit sheaf this tuple stands for.
    pub fn as_sheaf<F: Field>(&self) -> Sheaf<F> {
        let dims = self.poset.elements().map(|x| self.stalk_dim(x)).collect();
        let maps = self
            .poset
            .covers()
            .iter()
            .map(|&(a, b)| self.restriction_matrix(a, b).expect("covers are comparable"))
            .collect();
        Sheaf::new(self.poset.clone(), dims, maps).expect("injective sheaf is well formed")
    }

    /// Generator counts by label.
    pub fn label_counts(&self) -> BTreeMap<Element, usize> {
        let mut out = BTreeMap::new();
        for &g in &self.generators {
            *out.entry(g).or_insert(0) += 1;
        }
        out
    }
}

/// A natural transformation between injective sheaves. Columns follow the
/// domain's generator tuple, rows the codomain's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledMatrix<F> {
    domain: InjectiveSheaf,
    codomain: InjectiveSheaf,
    matrix: SparseMatrix<F>,
}

impl<F: Field> LabeledMatrix<F> {
    /// Rejects entries that violate the support condition.
    pub fn new(domain: InjectiveSheaf, codomain: InjectiveSheaf, matrix: SparseMatrix<F>) -> Result<Self> {
        if domain.poset() != codomain.poset() {
            return Err(Error::InvalidPoset("domain and codomain live on different posets".into()));
        }
        if matrix.shape() != (codomain.len(), domain.len()) {
            return Err(Error::ShapeMismatch {
                context: "labeled matrix".into(),
                expected_rows: codomain.len(),
                expected_cols: domain.len(),
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let p = domain.poset();
        for (i, j, _) in matrix.triplets() {
            let (r, c) = (codomain.generators[i], domain.generators[j]);
            if !p.leq(r, c) {
                return Err(Error::SupportViolation {
                    row: i,
                    col: j,
                    row_label: p.name(r).into(),
                    col_label: p.name(c).into(),
                });
            }
        }
        Ok(LabeledMatrix {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn zero(domain: InjectiveSheaf, codomain: InjectiveSheaf) -> Self {
        let matrix = SparseMatrix::zeros(codomain.len(), domain.len());
        LabeledMatrix {
            domain,
            codomain,
            matrix,
        }
    }

    pub fn domain(&self) -> &InjectiveSheaf {
        &self.domain
    }

    pub fn codomain(&self) -> &InjectiveSheaf {
        &self.codomain
    }

    pub fn matrix(&self) -> &SparseMatrix<F> {
        &self.matrix
    }

    /// The component at `x`: rows and columns labeled in the star of `x`.
    pub fn eval_at(&self, x: Element) -> SparseMatrix<F> {
        self.matrix
            .select(&self.codomain.generators_over(x), &self.domain.generators_over(x))
    }

    /// Rows and columns labeled in an arbitrary membership mask.
    pub fn restrict_to(&self, member: &[bool]) -> SparseMatrix<F> {
        self.matrix
            .select(&self.codomain.generators_in(member), &self.domain.generators_in(member))
    }

    pub fn nat_trans(&self) -> Result<NatTrans<F>> {
        let comps = self.domain.poset().elements().map(|x| self.eval_at(x)).collect();
        NatTrans::new(self.domain.as_sheaf(), self.codomain.as_sheaf(), comps)
    }

    /// Composite `next * self` as labeled matrices.
    pub fn then(&self, next: &LabeledMatrix<F>) -> Result<LabeledMatrix<F>> {
        if next.domain != self.codomain {
            return Err(Error::InvalidResolution("composing maps with mismatched generators".into()));
        }
        Ok(LabeledMatrix {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            matrix: next.matrix.mul(&self.matrix)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;
    use crate::field::Rational;

    type Q = Rational;

    fn example_poset() -> Arc<Poset> {
        crate::catalog::example_star_poset().poset
    }

    fn el(p: &Poset, name: &str) -> Element {
        p.element(name).unwrap()
    }

    #[test]
    fn single_generator_stalks() {
        let p = Arc::new(Poset::chain(3));
        let i = InjectiveSheaf::new(p.clone(), vec![1]).unwrap();
        assert_eq!(i.stalk_dim(1), 1);
        assert_eq!(i.stalk_dim(0), 1);
        assert_eq!(i.stalk_dim(2), 0);
        assert_eq!(i.restriction_matrix::<Q>(0, 1).unwrap(), SparseMatrix::identity(1));
        assert_eq!(i.restriction_matrix::<Q>(2, 2).unwrap().shape(), (0, 0));
    }

    #[test]
    fn example_hull_stalks() {
        let p = example_poset();
        let gens = ["234", "235", "245", "345", "6", "7"].iter().map(|n| el(&p, n)).collect();
        let i0 = InjectiveSheaf::new(p.clone(), gens).unwrap();
        assert_eq!(i0.stalk_dim(el(&p, "∅")), 6);
        assert_eq!(i0.stalk_dim(el(&p, "2")), 3);
        assert_eq!(i0.stalk_dim(el(&p, "23")), 2);
        let proj = i0.restriction_matrix::<Q>(el(&p, "∅"), el(&p, "2")).unwrap();
        assert_eq!(proj.shape(), (3, 6));
        let expected = SparseMatrix::<Q>::from_i64(6, &[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0]]).unwrap();
        assert_eq!(proj, expected);
        let sheaf = i0.as_sheaf::<Q>();
        sheaf.validate().unwrap();
        assert_eq!(sheaf.dim(el(&p, "6")), 1);
        assert_eq!(sheaf.dim(el(&p, "34")), 2);
    }

    #[test]
    fn tetrahedron_edges_stalks() {
        let fp = SimplicialComplex::skeleton(3, 2).face_poset(false);
        let edges: Vec<Element> = fp.poset.elements().filter(|&x| fp.dim_of(x) == 1).collect();
        let i1 = InjectiveSheaf::new(fp.poset.clone(), edges).unwrap();
        for v in fp.poset.elements().filter(|&x| fp.dim_of(x) == 0) {
            assert_eq!(i1.stalk_dim(v), 3);
        }
    }

    #[test]
    fn support_condition_enforced() {
        let p = Arc::new(Poset::chain(2));
        let top = InjectiveSheaf::new(p.clone(), vec![1]).unwrap();
        let bottom = InjectiveSheaf::new(p.clone(), vec![0]).unwrap();
        // [1] -> [0] is allowed, [0] -> [1] is not
        assert!(LabeledMatrix::new(top.clone(), bottom.clone(), SparseMatrix::<Q>::identity(1)).is_ok());
        assert!(matches!(
            LabeledMatrix::new(bottom, top, SparseMatrix::<Q>::identity(1)),
            Err(Error::SupportViolation { .. })
        ));
    }

    #[test]
    fn eval_and_naturality() {
        let p = Arc::new(Poset::chain(2));
        let i = InjectiveSheaf::new(p.clone(), vec![1, 0]).unwrap();
        let id = LabeledMatrix::new(i.clone(), i.clone(), SparseMatrix::<Q>::identity(2)).unwrap();
        assert_eq!(id.eval_at(1), SparseMatrix::identity(1));
        assert_eq!(id.eval_at(0), SparseMatrix::identity(2));
        let nt = id.nat_trans().unwrap();
        assert_eq!(nt.component(0), &SparseMatrix::identity(2));
        let z = LabeledMatrix::<Q>::zero(i.clone(), InjectiveSheaf::new(p, vec![0]).unwrap());
        assert!(z.nat_trans().unwrap().component(1).shape() == (0, 1));
    }

    #[test]
    fn multiplicities_match_maximal_vectors() {
        let p = example_poset();
        let gens = vec![el(&p, "2"), el(&p, "2"), el(&p, "∅"), el(&p, "345")];
        let i = InjectiveSheaf::new(p.clone(), gens).unwrap();
        let s = i.as_sheaf::<Q>();
        for x in p.elements() {
            assert_eq!(s.maximal_vectors(x).len(), i.multiplicity(x), "at {}", p.name(x));
        }
    }
}
