use std::collections::BTreeMap;

use injres::catalog::{example_star_poset, tetrahedron_boundary};
use injres::resolution::euler_characteristic;
use injres::{
    minimal_resolution, order_complex_resolution, verify_exactness, verify_minimality, Field, Poset, Rational,
    Sheaf, SparseVec,
};

type Q = Rational;

fn label_multiset(p: &Poset, gens: &[usize]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for &g in gens {
        *out.entry(p.name(g).to_string()).or_insert(0) += 1;
    }
    out
}

fn multiset(names: &[&str]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for n in names {
        *out.entry(n.to_string()).or_insert(0) += 1;
    }
    out
}

#[test]
fn example_star_resolution() {
    let fp = example_star_poset();
    let p = fp.poset.clone();
    assert_eq!(p.len(), 17);
    assert_eq!(p.height(), 3);
    let k = Sheaf::<Q>::constant(p.clone());
    let r = minimal_resolution(&k, None).unwrap();

    let expected = [
        multiset(&["234", "235", "245", "345", "6", "7"]),
        multiset(&["23", "24", "25", "34", "35", "45", "∅", "∅"]),
        multiset(&["2", "3", "4", "5"]),
        multiset(&["∅"]),
    ];
    assert_eq!(r.len(), 4);
    for (term, want) in r.terms().iter().zip(&expected) {
        assert_eq!(&label_multiset(&p, term.generators()), want);
    }
    assert_eq!(r.generator_counts(), vec![6, 8, 4, 1]);

    // stalk dimensions, degree by degree
    let table: [(&str, [usize; 4]); 6] = [
        ("234", [1, 0, 0, 0]),
        ("23", [2, 1, 0, 0]),
        ("2", [3, 3, 1, 0]),
        ("6", [1, 0, 0, 0]),
        ("7", [1, 0, 0, 0]),
        ("∅", [6, 8, 4, 1]),
    ];
    for (name, dims) in table {
        let x = p.element(name).unwrap();
        for (k, &d) in dims.iter().enumerate() {
            assert_eq!(r.stalk_dim(k, x), d, "dim I^{k}({name})");
        }
    }
    for name in ["235", "245", "345"] {
        assert_eq!(r.stalk_dim(0, p.element(name).unwrap()), 1);
    }
    for name in ["24", "25", "34", "35", "45"] {
        let x = p.element(name).unwrap();
        assert_eq!([r.stalk_dim(0, x), r.stalk_dim(1, x), r.stalk_dim(2, x)], [2, 1, 0]);
    }
    for name in ["3", "4", "5"] {
        let x = p.element(name).unwrap();
        assert_eq!([r.stalk_dim(0, x), r.stalk_dim(1, x), r.stalk_dim(2, x)], [3, 3, 1]);
    }

    let two = p.element("2").unwrap();
    let eta0 = r.differentials()[0].eval_at(two);
    assert_eq!(eta0.shape(), (3, 3));
    assert_eq!(eta0.rank(), 2);
    let kernel = eta0.kernel_basis();
    assert_eq!(kernel.len(), 1);
    let ones = SparseVec::<Q>::from_i64(&[1, 1, 1]);
    let c = kernel[0].get(0);
    assert_eq!(kernel[0], ones.scaled(&c));

    assert!(verify_exactness(&r).is_exact());
    assert!(verify_minimality(&r));
    let m = r.multiplicities();
    let empty = p.element("∅").unwrap();
    assert_eq!(m.get(1, empty), 2);
    assert_eq!(m.get(3, empty), 1);
    for x in p.elements() {
        assert_eq!(euler_characteristic(&r, x), 1);
    }
}

#[test]
fn example_star_order_complex_is_larger() {
    let p = example_star_poset().poset;
    let k = Sheaf::<Q>::constant(p.clone());
    let oc = order_complex_resolution(&k).unwrap();
    assert_eq!(oc.generator_counts()[0], 17);
    assert!(verify_exactness(&oc).is_exact());
    assert!(!verify_minimality(&oc));
}

#[test]
fn tetrahedron_resolution() {
    let fp = tetrahedron_boundary();
    let p = fp.poset.clone();
    let k = Sheaf::<Q>::constant(p.clone());
    let r = minimal_resolution(&k, None).unwrap();
    assert_eq!(r.generator_counts(), vec![4, 6, 4]);
    for (deg, term) in r.terms().iter().enumerate() {
        let mut seen: Vec<usize> = term.generators().to_vec();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), term.len());
        for &g in term.generators() {
            assert_eq!(fp.dim_of(g), 2 - deg as isize);
        }
    }
    assert!(verify_exactness(&r).is_exact());
    assert!(verify_minimality(&r));
    let v = p.element("1").unwrap();
    assert_eq!([r.stalk_dim(0, v), r.stalk_dim(1, v), r.stalk_dim(2, v)], [3, 3, 1]);
    assert_eq!(r.star_complexity(v, 1), num_rational::Ratio::new(3, 7));
    assert_eq!(r.star_complexity(v, 5), num_rational::Ratio::new(0, 1));

    // every row of eta^0 is orthogonal to the ones vector it must kill
    for row in r.differentials()[0].matrix().rows() {
        assert!(row.dot(&SparseVec::from_i64(&[1, 1, 1, 1])).is_zero());
    }

    let oc = order_complex_resolution(&k).unwrap();
    assert_eq!(oc.stalk_dim(0, v), 7);
    assert!(verify_exactness(&oc).is_exact());
    assert!(!verify_minimality(&oc));
}

#[test]
fn prime_field_tetrahedron() {
    let p = tetrahedron_boundary().poset;
    let r = minimal_resolution(&Sheaf::<injres::F2>::constant(p), None).unwrap();
    assert_eq!(r.generator_counts(), vec![4, 6, 4]);
    assert!(verify_exactness(&r).is_exact());
    assert!(verify_minimality(&r));
}
