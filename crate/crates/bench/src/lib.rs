//! Inputs shared by the benchmarks.

use injres::{Rational, Sheaf, SimplicialComplex};

/// The constant sheaf on the face poset of the `k`-skeleton of the
/// `n`-simplex.
pub fn skeleton_constant(n: usize, k: usize) -> Sheaf<Rational> {
    let fp = SimplicialComplex::skeleton(n, k).face_poset(false);
    Sheaf::constant(fp.poset)
}
