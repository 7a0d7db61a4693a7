//! Exact injective resolutions of sheaves on finite posets.
//!
//! Sheaves of finite-dimensional vector spaces live on the elements of a
//! poset with maps along cover relations. This crate computes their minimal
//! injective resolutions (and the larger one coming from the order complex),
//! reads off the multiplicities of the indecomposable injectives, and pushes
//! resolutions forward along monotone maps to get derived pushforwards.
//!
//! All arithmetic is exact: [`Rational`] or a prime field [`Fp`].
//!
//! ```
//! use injres::{catalog, minimal_resolution, Rational, Sheaf};
//!
//! let sphere = catalog::tetrahedron_boundary();
//! let k = Sheaf::<Rational>::constant(sphere.poset.clone());
//! let res = minimal_resolution(&k, None).unwrap();
//! assert_eq!(res.generator_counts(), vec![4, 6, 4]);
//! ```

pub mod catalog;
pub mod complex;
pub mod derived;
pub mod error;
pub mod field;
pub mod generate;
pub mod injective;
pub mod linalg;
pub mod order_complex;
pub mod poset;
pub mod resolution;
pub mod sheaf;

pub use complex::{FacePoset, SimplicialComplex, SimplicialMap};
pub use derived::{compact_pushforward, compact_pushforwards, pushforward, pushforwards};
pub use error::{Error, Result};
pub use field::{Field, Fp, Rational, ScalarParseError, F2, F3};
pub use injective::{InjectiveSheaf, LabeledMatrix};
pub use linalg::{SparseMatrix, SparseVec, SpanBasis};
pub use order_complex::OrderComplex;
pub use poset::{Element, Poset, PosetMap};
pub use resolution::{
    minimal_resolution, order_complex_resolution, verify_exactness, verify_minimality, Augmentation, Method,
    Multiplicities, Resolution,
};
pub use sheaf::{NatTrans, Sheaf};
