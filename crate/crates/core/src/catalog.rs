//! Standard inputs: skeleta of simplices and the worked examples used
//! throughout the tests.

use crate::complex::{FacePoset, SimplicialComplex};

/// Boundary of the tetrahedron (a 2-sphere), without the empty simplex.
pub fn tetrahedron_boundary() -> FacePoset {
    SimplicialComplex::skeleton(3, 2).face_poset(false)
}

/// The 3-skeleton of the 4-simplex on vertices `1..=5` with two extra
/// edges `16` and `17`.
pub fn example_complex() -> SimplicialComplex {
    let names: Vec<String> = (1..=7).map(|i| i.to_string()).collect();
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for skip in 0..5 {
        facets.push((0..5).filter(|&v| v != skip).collect());
    }
    facets.push(vec![0, 5]);
    facets.push(vec![0, 6]);
    SimplicialComplex::from_facets(names, facets).expect("valid complex")
}

/// The star of vertex `1` in [`example_complex`], written with vertex `1`
/// omitted from every label: the face poset of the link of `1` with the
/// empty simplex standing for vertex `1` itself. 17 elements.
pub fn example_star_poset() -> FacePoset {
    let names: Vec<String> = (2..=7).map(|i| i.to_string()).collect();
    let facets = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3], vec![4], vec![5]];
    SimplicialComplex::from_facets(names, facets)
        .expect("valid complex")
        .face_poset(true)
}
