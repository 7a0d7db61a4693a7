use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use injres::generate::{random_linear_extension, random_poset, random_sheaf};
use injres::resolution::euler_characteristic;
use injres::{
    minimal_resolution, order_complex_resolution, verify_exactness, verify_minimality, Field, OrderComplex, Rational,
    Sheaf, SparseMatrix, SparseVec, F3,
};

type Q = Rational;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = SparseMatrix<Q>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, cols), rows).prop_map(move |m| {
        let refs: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
        SparseMatrix::from_i64(cols, &refs).unwrap()
    })
}

proptest! {
    #[test]
    fn rref_reproduces_input(m in (0usize..7, 0usize..7).prop_flat_map(|(r, c)| matrix(r, c))) {
        let red = m.rref_with_transform();
        prop_assert_eq!(red.transform.mul(&m).unwrap(), red.reduced.clone());
        prop_assert_eq!(red.transform.rank(), m.nrows());
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(red.rank(), m.rank());
    }

    #[test]
    fn left_null_basis_is_orthogonal(m in (0usize..7, 0usize..7).prop_flat_map(|(r, c)| matrix(r, c))) {
        let basis = m.left_null_basis();
        prop_assert_eq!(basis.len(), m.nrows() - m.rank());
        for v in &basis {
            prop_assert!(m.vec_mul(v).is_zero());
        }
        let kernel = m.kernel_basis();
        prop_assert_eq!(kernel.len(), m.ncols() - m.rank());
        for u in &kernel {
            prop_assert!(m.mul_vec(u).is_zero());
        }
    }

    #[test]
    fn deterministic(m in matrix(5, 4)) {
        prop_assert_eq!(m.rref_with_transform(), m.clone().rref_with_transform());
    }
}

#[test]
fn random_corpus_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..100 {
        let p = Arc::new(random_poset(&mut rng, 10, 0.3));
        let f = random_sheaf::<Q, _>(&mut rng, p.clone(), 3);
        let min = minimal_resolution(&f, None).unwrap();
        let oc = order_complex_resolution(&f).unwrap();
        assert!(verify_exactness(&min).is_exact());
        assert!(verify_exactness(&oc).is_exact());
        assert!(verify_minimality(&min));
        assert!(min.len() <= p.height() + 1);
        for x in p.elements() {
            assert_eq!(euler_characteristic(&min, x), f.dim(x) as i64);
            assert_eq!(euler_characteristic(&oc, x), f.dim(x) as i64);
        }
        let (a, b) = (min.generator_counts(), oc.generator_counts());
        for (k, &n) in a.iter().enumerate() {
            assert!(n <= b.get(k).copied().unwrap_or(0));
        }

        let order = random_linear_extension(&mut rng, &p);
        let q = Arc::new(p.with_linear_extension(order).unwrap());
        let g = f.with_poset(q).unwrap();
        assert_eq!(minimal_resolution(&g, None).unwrap().multiplicities(), min.multiplicities());
    }
}

#[test]
fn random_corpus_mod_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let p = Arc::new(random_poset(&mut rng, 7, 0.4));
        let f = random_sheaf::<F3, _>(&mut rng, p.clone(), 2);
        let min = minimal_resolution(&f, None).unwrap();
        assert!(verify_exactness(&min).is_exact());
        assert!(verify_minimality(&min));
    }
}

#[test]
fn maximal_vectors_die_everywhere_above() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let p = Arc::new(random_poset(&mut rng, 8, 0.35));
        let f = random_sheaf::<Q, _>(&mut rng, p.clone(), 3);
        for x in p.elements() {
            let m = f.maximal_vectors(x);
            for &y in &p.star(x)[1..] {
                for v in &m {
                    assert!(f.apply(x, y, v).is_zero());
                }
            }
        }
    }
}

#[test]
fn incidence_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let p = random_poset(&mut rng, 8, 0.4);
        let k = OrderComplex::new(&p, None);
        for d in 0..k.num_degrees() {
            let a = k.coboundary::<Q>(&p, d);
            let b = k.coboundary::<Q>(&p, d + 1);
            assert!(b.mul(&a).unwrap().is_zero());
        }
    }
}

#[test]
fn injective_sheaves_are_sheaves() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let p = Arc::new(random_poset(&mut rng, 8, 0.35));
        let gens: Vec<usize> = (0..4).map(|i| (i * 7 + 3) % p.len()).collect();
        let i = injres::InjectiveSheaf::new(p.clone(), gens.clone()).unwrap();
        let s = i.as_sheaf::<Q>();
        s.validate().unwrap();
        for x in p.elements() {
            assert_eq!(s.maximal_vectors(x).len(), i.multiplicity(x));
        }
        let id = injres::LabeledMatrix::<Q>::new(i.clone(), i.clone(), SparseMatrix::identity(i.len())).unwrap();
        id.nat_trans().unwrap();
    }
}

#[test]
fn restrict_extend_restrict() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let p = Arc::new(random_poset(&mut rng, 8, 0.35));
        let f = random_sheaf::<Q, _>(&mut rng, p.clone(), 3);
        let x = p.len() / 2;
        let open = p.star(x).to_vec();
        let mut sorted = open.clone();
        sorted.sort_unstable();
        let g = f.restrict(&sorted).unwrap();
        g.validate().unwrap();
        let h = g.extend_by_zero(p.clone(), &sorted).unwrap();
        h.validate().unwrap();
        assert_eq!(h.restrict(&sorted).unwrap(), g);
    }
}

#[test]
fn scalars_never_overflow() {
    let big = Q::from_i64(i64::MAX);
    let sq = big.mul(&big).mul(&big);
    assert_eq!(sq.div(&big).div(&big), big);
    let v = SparseVec::from_dense(&[big.clone(), big]);
    assert_eq!(v.nnz(), 2);
    let _ = Sheaf::<Q>::zero(Arc::new(injres::Poset::antichain(0)));
}
