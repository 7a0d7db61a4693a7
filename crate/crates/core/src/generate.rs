//! Seeded random inputs for property tests and benchmarks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::{FacePoset, SimplicialComplex};
use crate::field::Field;
use crate::injective::InjectiveSheaf;
use crate::linalg::{SparseMatrix, SparseVec, SpanBasis};
use crate::poset::{Element, Poset, PosetMap};
use crate::sheaf::Sheaf;

/// A poset on `1..=max_elements` elements. Relations only go from lower to
/// higher ids, each present with probability `density`.
pub fn random_poset<R: Rng>(rng: &mut R, max_elements: usize, density: f64) -> Poset {
    let n = rng.gen_range(1..=max_elements.max(1));
    let mut relations = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                relations.push((a, b));
            }
        }
    }
    let names = (0..n).map(|i| format!("p{i}")).collect();
    Poset::from_relations(names, &relations).expect("relations along increasing ids are acyclic")
}

/// A complex on `1..=max_vertices` vertices: every vertex plus a few random
/// facets of dimension up to 3.
pub fn random_complex<R: Rng>(rng: &mut R, max_vertices: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut facets: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut verts: Vec<usize> = (0..n).collect();
    for _ in 0..rng.gen_range(0..=n + 1) {
        verts.shuffle(rng);
        let size = rng.gen_range(1..=n.min(4));
        facets.push(verts[..size].to_vec());
    }
    let names = (1..=n).map(|i| i.to_string()).collect();
    SimplicialComplex::from_facets(names, facets).expect("random facets are valid")
}

fn random_scalar<F: Field, R: Rng>(rng: &mut R) -> F {
    F::from_i64(rng.gen_range(-2..=2))
}

/// A random sheaf with stalks of dimension at most `max_dim`, built as the
/// subsheaf of a random injective sheaf generated by random sections. Every
/// sheaf arises this way (it sits inside its injective hull), so nothing is
/// excluded in principle.
pub fn random_sheaf<F: Field, R: Rng>(rng: &mut R, poset: Arc<Poset>, max_dim: usize) -> Sheaf<F> {
    loop {
        if let Some(s) = try_random_sheaf(rng, poset.clone(), max_dim) {
            return s;
        }
    }
}

fn try_random_sheaf<F: Field, R: Rng>(rng: &mut R, poset: Arc<Poset>, max_dim: usize) -> Option<Sheaf<F>> {
    let n = poset.len();
    let gens: Vec<Element> = (0..rng.gen_range(1..=n + 2)).map(|_| rng.gen_range(0..n)).collect();
    let j = InjectiveSheaf::new(poset.clone(), gens).expect("labels are elements");
    let mut sections: Vec<(Element, SparseVec<F>)> = Vec::new();
    for _ in 0..rng.gen_range(1..=n + 1) {
        let x = rng.gen_range(0..n);
        let d = j.stalk_dim(x);
        if d == 0 {
            continue;
        }
        let v: SparseVec<F> = (0..d).map(|i| (i, random_scalar(rng))).collect();
        if !v.is_zero() {
            sections.push((x, v));
        }
    }
    // basis of the generated subspace at each element, in J(y) coordinates
    let mut bases: Vec<Vec<SparseVec<F>>> = Vec::with_capacity(n);
    for y in poset.elements() {
        let mut span = SpanBasis::new(j.stalk_dim(y));
        let mut basis = Vec::new();
        for (x, v) in &sections {
            if poset.leq(*x, y) {
                let r = j.restriction_matrix::<F>(*x, y).expect("comparable").mul_vec(v);
                if span.insert(&r) {
                    basis.push(r);
                }
            }
        }
        if basis.len() > max_dim {
            return None;
        }
        bases.push(basis);
    }
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    let mut maps = Vec::with_capacity(poset.covers().len());
    for &(a, b) in poset.covers() {
        let restrict = j.restriction_matrix::<F>(a, b).expect("cover");
        let target = SpanBasis::from_vectors(j.stalk_dim(b), bases[b].iter());
        let cols: Vec<SparseVec<F>> = bases[a]
            .iter()
            .map(|v| target.express(&restrict.mul_vec(v)).expect("subsheaf is closed under restriction"))
            .collect();
        maps.push(SparseMatrix::from_columns(dims[b], &cols).expect("shapes"));
    }
    Some(Sheaf::new(poset, dims, maps).expect("well formed"))
}

/// A random linear extension: repeatedly pick a random minimal element of
/// what is left.
pub fn random_linear_extension<R: Rng>(rng: &mut R, poset: &Poset) -> Vec<Element> {
    let n = poset.len();
    let mut remaining_below: Vec<usize> = poset.elements().map(|x| poset.boundary(x).len()).collect();
    let mut ready: Vec<Element> = poset.elements().filter(|&x| remaining_below[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !ready.is_empty() {
        let i = rng.gen_range(0..ready.len());
        let x = ready.swap_remove(i);
        order.push(x);
        for &y in poset.coboundary(x) {
            remaining_below[y] -= 1;
            if remaining_below[y] == 0 {
                ready.push(y);
            }
        }
    }
    order
}

/// The chain `0 < 1 < ... < levels - 1`, named by level.
pub fn level_chain(levels: usize) -> Arc<Poset> {
    let names = (0..levels).map(|i| i.to_string()).collect();
    let covers = (1..levels).map(|i| (i - 1, i)).collect();
    Arc::new(Poset::new(names, covers).expect("chain"))
}

/// Each simplex goes to the dimension of the simplex.
pub fn dimension_map(fp: &FacePoset) -> PosetMap {
    let top = fp.poset.elements().map(|x| fp.dim_of(x).max(0) as usize).max().unwrap_or(0);
    let images = fp.poset.elements().map(|x| fp.dim_of(x).max(0) as usize).collect();
    PosetMap::new(fp.poset.clone(), level_chain(top + 1), images).expect("dimension is monotone")
}

/// Each simplex goes to the largest height among its vertices, for random
/// vertex heights in `0..levels`.
pub fn random_height_map<R: Rng>(rng: &mut R, fp: &FacePoset, levels: usize) -> PosetMap {
    let heights: Vec<usize> = (0..fp.complex.num_vertices()).map(|_| rng.gen_range(0..levels)).collect();
    let images = fp
        .poset
        .elements()
        .map(|x| fp.simplex_of(x).iter().map(|&v| heights[v]).max().unwrap_or(0))
        .collect();
    PosetMap::new(fp.poset.clone(), level_chain(levels), images).expect("max over vertices is monotone")
}
