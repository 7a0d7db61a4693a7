//! Injective resolutions: the minimal one built degree by degree, and the
//! (generally non-minimal) one read off the order complex.

mod hull;
mod order_complex;
mod step;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::injective::{InjectiveSheaf, LabeledMatrix};
use crate::linalg::SparseMatrix;
use crate::poset::Element;
use crate::sheaf::Sheaf;

pub use hull::{constant_hull, minimal_hull, Hull};
pub use order_complex::order_complex_resolution;
pub use step::{minimal_resolution, resolution_step, Previous};
pub use verify::{euler_characteristic, verify_exactness, verify_minimality, ExactnessReport, Failure};

/// Which construction produced a resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Minimal,
    OrderComplex,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Minimal => "minimal",
            Method::OrderComplex => "order-complex",
        })
    }
}

/// The injection `F -> I^0`.
///
/// It cannot be stored as a labeled matrix since `F` need not be injective,
/// so it is kept per element. The constant sheaf gets the column of ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Augmentation<F> {
    /// `maps[x]` has rows indexed by the generators of `I^0` over `x`, in
    /// tuple order, and `dim F(x)` columns.
    PerElement(Vec<SparseMatrix<F>>),
    /// Column of ones at every element.
    Diagonal,
}

impl<F: Field> Augmentation<F> {
    pub fn at(&self, term: &InjectiveSheaf, x: Element) -> SparseMatrix<F> {
        match self {
            Augmentation::PerElement(maps) => maps[x].clone(),
            Augmentation::Diagonal => {
                let n = term.stalk_dim(x);
                let ones: Vec<Vec<F>> = vec![vec![F::one()]; n];
                SparseMatrix::from_dense(1, &ones).expect("column")
            }
        }
    }

    /// Per-element matrices, materializing the diagonal case.
    pub fn to_per_element(&self, term: &InjectiveSheaf) -> Vec<SparseMatrix<F>> {
        term.poset().elements().map(|x| self.at(term, x)).collect()
    }
}

/// `0 -> F -> I^0 -> I^1 -> ...`, with every term decomposed into
/// generators. `differentials[k]` maps `terms[k]` to `terms[k + 1]`, the
/// last one into the empty sheaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution<F> {
    sheaf: Sheaf<F>,
    augmentation: Augmentation<F>,
    terms: Vec<InjectiveSheaf>,
    differentials: Vec<LabeledMatrix<F>>,
    method: Method,
}

impl<F: Field> Resolution<F> {
    /// Assembles a resolution from stored parts, checking that the pieces
    /// fit together. Exactness is not checked; see [`verify_exactness`].
    pub fn from_parts(
        sheaf: Sheaf<F>,
        augmentation: Augmentation<F>,
        terms: Vec<InjectiveSheaf>,
        differentials: Vec<LabeledMatrix<F>>,
        method: Method,
    ) -> Result<Self> {
        let poset = sheaf.poset();
        if terms.len() != differentials.len() {
            return Err(Error::InvalidResolution(format!(
                "{} terms but {} differentials",
                terms.len(),
                differentials.len()
            )));
        }
        for (k, t) in terms.iter().enumerate() {
            if t.poset() != poset {
                return Err(Error::InvalidResolution(format!("term {k} lives on another poset")));
            }
            if t.is_empty() {
                return Err(Error::InvalidResolution(format!("term {k} is empty")));
            }
            let d = &differentials[k];
            if d.domain() != t {
                return Err(Error::InvalidResolution(format!("differential {k} has the wrong domain")));
            }
            let expected_codomain = terms.get(k + 1);
            match expected_codomain {
                Some(next) if d.codomain() != next => {
                    return Err(Error::InvalidResolution(format!("differential {k} has the wrong codomain")))
                }
                None if !d.codomain().is_empty() => {
                    return Err(Error::InvalidResolution("last differential must map to zero".into()))
                }
                _ => {}
            }
        }
        if let Augmentation::PerElement(maps) = &augmentation {
            if maps.len() != poset.len() {
                return Err(Error::InvalidResolution("augmentation needs one map per element".into()));
            }
            let empty = InjectiveSheaf::empty(poset.clone());
            let first = terms.first().unwrap_or(&empty);
            for x in poset.elements() {
                let want = (first.stalk_dim(x), sheaf.dim(x));
                if maps[x].shape() != want {
                    return Err(Error::ShapeMismatch {
                        context: format!("augmentation at {}", poset.name(x)),
                        expected_rows: want.0,
                        expected_cols: want.1,
                        rows: maps[x].nrows(),
                        cols: maps[x].ncols(),
                    });
                }
            }
        } else if !sheaf.is_constant() {
            return Err(Error::InvalidResolution("diagonal augmentation needs the constant sheaf".into()));
        }
        Ok(Resolution {
            sheaf,
            augmentation,
            terms,
            differentials,
            method,
        })
    }

    pub fn sheaf(&self) -> &Sheaf<F> {
        &self.sheaf
    }

    pub fn augmentation(&self) -> &Augmentation<F> {
        &self.augmentation
    }

    /// Augmentation at `x`: `F(x) -> I^0(x)`.
    pub fn augmentation_at(&self, x: Element) -> SparseMatrix<F> {
        match self.terms.first() {
            Some(t) => self.augmentation.at(t, x),
            None => SparseMatrix::zeros(0, self.sheaf.dim(x)),
        }
    }

    /// Nonzero terms `I^0, I^1, ...`.
    pub fn terms(&self) -> &[InjectiveSheaf] {
        &self.terms
    }

    pub fn term(&self, k: usize) -> Option<&InjectiveSheaf> {
        self.terms.get(k)
    }

    pub fn differentials(&self) -> &[LabeledMatrix<F>] {
        &self.differentials
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Whether this was produced by the minimal construction.
    pub fn is_minimal(&self) -> bool {
        self.method == Method::Minimal
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `dim I^k(x)`, zero past the end.
    pub fn stalk_dim(&self, k: usize, x: Element) -> usize {
        self.terms.get(k).map_or(0, |t| t.stalk_dim(x))
    }

    /// Generator count per degree.
    pub fn generator_counts(&self) -> Vec<usize> {
        self.terms.iter().map(InjectiveSheaf::len).collect()
    }

    pub fn multiplicities(&self) -> Multiplicities {
        let mut table = BTreeMap::new();
        for (j, t) in self.terms.iter().enumerate() {
            for (x, n) in t.label_counts() {
                table.insert((j, x), n);
            }
        }
        Multiplicities { table }
    }

    /// Generators over the star of `x` in degree `j`, divided by the size of
    /// the star.
    pub fn star_complexity(&self, x: Element, j: usize) -> Ratio<u64> {
        let p = self.sheaf.poset();
        let star = p.star(x);
        let count = self
            .terms
            .get(j)
            .map_or(0, |t| t.generators().iter().filter(|&&g| p.leq(x, g)).count());
        Ratio::new(count as u64, star.len() as u64)
    }
}

/// Multiplicity `m^j(x)` of `[x]` in degree `j`. Zero entries are absent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multiplicities {
    table: BTreeMap<(usize, Element), usize>,
}

impl Multiplicities {
    pub fn get(&self, degree: usize, x: Element) -> usize {
        self.table.get(&(degree, x)).copied().unwrap_or(0)
    }

    /// `((degree, element), multiplicity)` in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, Element), usize)> + '_ {
        self.table.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    /// Sum of `m^degree(y)` over `y` in `set`.
    pub fn total_over(&self, degree: usize, set: &[Element]) -> usize {
        set.iter().map(|&y| self.get(degree, y)).sum()
    }
}
