//! Cochain-level cohomology computed directly from simplices or chains,
//! with a dense elimination of its own. Nothing here touches the
//! resolution code or the sparse matrices.

use std::collections::HashMap;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::order_complex::OrderComplex;
use crate::poset::{Element, Poset};
use crate::resolution::minimal_resolution;
use crate::sheaf::Sheaf;

fn dense_rank<F: Field>(mut rows: Vec<Vec<F>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv();
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let c = row[col].mul(&inv);
                for (x, y) in row[col..ncols].iter_mut().zip(&pivot[col..ncols]) {
                    *x = x.sub(&c.mul(y));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Cohomology dimensions of a cochain complex given by its group sizes and
/// dense coboundaries `d[i]: C^i -> C^(i+1)` (rows index `C^(i+1)`).
fn cohomology_dims<F: Field>(sizes: &[usize], coboundaries: Vec<Vec<Vec<F>>>) -> Vec<usize> {
    let ranks: Vec<usize> = coboundaries.into_iter().map(dense_rank).collect();
    (0..sizes.len())
        .map(|i| {
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i == 0 { 0 } else { ranks.get(i - 1).copied().unwrap_or(0) };
            sizes[i] - out - inc
        })
        .collect()
}

/// `H_c^d` of a union of open simplices: cochains on the simplices listed
/// (which must be up-closed under the face relation), oriented by the
/// global vertex order. Entry `d` is degree `d`, up to `dim S`.
pub fn oracle_cohomology_c<F: Field>(complex: &SimplicialComplex, open: &[Vec<usize>]) -> Result<Vec<usize>> {
    let top = complex.dim().max(0) as usize;
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 1];
    for s in open {
        let mut s = s.clone();
        s.sort_unstable();
        if s.is_empty() {
            return Err(Error::InvalidComplex("the empty simplex has no open cell".into()));
        }
        if complex.index_of(&s).is_none() {
            return Err(Error::UnknownElement(complex.simplex_name(&s)));
        }
        by_dim[s.len() - 1].push(s);
    }
    for level in &mut by_dim {
        level.sort_unstable();
        level.dedup();
    }
    // up-closed: every simplex of the complex containing a listed simplex
    // is listed
    for s in complex.simplices() {
        if by_dim[s.len() - 1].binary_search(s).is_ok() {
            continue;
        }
        let face = by_dim[..s.len() - 1].iter().flatten().find(|t| t.iter().all(|v| s.contains(v)));
        if let Some(t) = face {
            return Err(Error::NotUpClosed {
                below: complex.simplex_name(t),
                above: complex.simplex_name(s),
            });
        }
    }
    let sizes: Vec<usize> = by_dim.iter().map(Vec::len).collect();
    let mut cobs = Vec::new();
    for d in 0..top {
        let mut m = vec![vec![F::zero(); sizes[d]]; sizes[d + 1]];
        for (r, upper) in by_dim[d + 1].iter().enumerate() {
            for omit in 0..upper.len() {
                let mut face = upper.clone();
                face.remove(omit);
                if let Ok(c) = by_dim[d].binary_search(&face) {
                    m[r][c] = F::from_i64(if omit % 2 == 0 { 1 } else { -1 });
                }
            }
        }
        cobs.push(m);
    }
    Ok(cohomology_dims(&sizes, cobs))
}

/// `H_c^d(St sigma)` for a simplex `sigma`; the empty simplex stands for the
/// whole complex.
pub fn oracle_star_cohomology_c<F: Field>(complex: &SimplicialComplex, sigma: &[usize]) -> Result<Vec<usize>> {
    let mut sigma = sigma.to_vec();
    sigma.sort_unstable();
    if !sigma.is_empty() && complex.index_of(&sigma).is_none() {
        return Err(Error::UnknownElement(complex.simplex_name(&sigma)));
    }
    let star: Vec<Vec<usize>> = complex
        .simplices()
        .iter()
        .filter(|s| sigma.iter().all(|v| s.contains(v)))
        .cloned()
        .collect();
    oracle_cohomology_c::<F>(complex, &star)
}

/// Cohomology of the order complex of an up-closed set `V`, entry `d` for
/// degree `d`.
pub fn oracle_order_complex_cohomology<F: Field>(poset: &Poset, open: &[Element]) -> Result<Vec<usize>> {
    oracle_relative_cohomology::<F>(poset, open, open)
}

/// Relative cohomology `H(K(V), K(V \ U))` for up-closed `U` and `V`:
/// cochains on the chains of `V` whose top lies in `U`.
pub fn oracle_relative_cohomology<F: Field>(poset: &Poset, open: &[Element], support: &[Element]) -> Result<Vec<usize>> {
    poset.check_up_closed(open)?;
    poset.check_up_closed(support)?;
    let sub = poset.induced(open)?;
    let in_support: Vec<bool> = open.iter().map(|x| support.contains(x)).collect();
    let k = OrderComplex::new(&sub, None);
    let keep: Vec<Vec<usize>> = (0..k.num_degrees())
        .map(|d| {
            k.chains(d)
                .iter()
                .enumerate()
                .filter(|(_, c)| in_support[*c.last().expect("nonempty chain")])
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = keep.iter().map(Vec::len).collect();
    let mut cobs = Vec::new();
    for d in 0..k.num_degrees().saturating_sub(1) {
        let mut m = vec![vec![F::zero(); sizes[d]]; sizes[d + 1]];
        let row_of: HashMap<usize, usize> = keep[d + 1].iter().enumerate().map(|(r, &i)| (i, r)).collect();
        for (c, &i) in keep[d].iter().enumerate() {
            for (j, sign) in k.cofaces(&sub, d, i) {
                if let Some(&r) = row_of.get(&j) {
                    m[r][c] = F::from_i64(sign);
                }
            }
        }
        cobs.push(m);
    }
    Ok(cohomology_dims(&sizes, cobs))
}

/// One line of the multiplicity table: computed `m^j(sigma)` against the
/// oracle's `dim H_c^(j + dim sigma)(St sigma)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityRow {
    pub element: Element,
    pub degree: usize,
    pub computed: usize,
    pub oracle: usize,
}

impl MultiplicityRow {
    pub fn agrees(&self) -> bool {
        self.computed == self.oracle
    }
}

/// Rows for every simplex and degree where either side is nonzero, for the
/// constant sheaf on the face poset without the empty simplex.
pub fn multiplicity_table<F: Field>(complex: &SimplicialComplex) -> Result<Vec<MultiplicityRow>> {
    let fp = complex.face_poset(false);
    let res = minimal_resolution(&Sheaf::<F>::constant(fp.poset.clone()), None)?;
    let mult = res.multiplicities();
    let mut rows = Vec::new();
    for x in fp.poset.elements() {
        let sigma = fp.simplex_of(x);
        let dim = sigma.len() - 1;
        let oracle = oracle_star_cohomology_c::<F>(complex, sigma)?;
        let top = oracle.len().max(dim + res.len());
        for d in dim..top {
            let j = d - dim;
            let computed = mult.get(j, x);
            let expected = oracle.get(d).copied().unwrap_or(0);
            if computed != 0 || expected != 0 {
                rows.push(MultiplicityRow {
                    element: x,
                    degree: j,
                    computed,
                    oracle: expected,
                });
            }
        }
    }
    Ok(rows)
}

/// `m^j(sigma) = dim H_c^(j + dim sigma)(St sigma)` for every simplex and
/// degree.
pub fn verify_multiplicity_theorem<F: Field>(complex: &SimplicialComplex) -> Result<bool> {
    Ok(multiplicity_table::<F>(complex)?.iter().all(MultiplicityRow::agrees))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type Q = Rational;

    #[test]
    fn dense_rank_basics() {
        let m: Vec<Vec<Q>> = vec![
            vec![Q::from_i64(1), Q::from_i64(2)],
            vec![Q::from_i64(2), Q::from_i64(4)],
        ];
        assert_eq!(dense_rank(m), 1);
        assert_eq!(dense_rank::<Q>(Vec::new()), 0);
    }

    #[test]
    fn open_disk_and_sphere() {
        let s = SimplicialComplex::skeleton(3, 2);
        assert_eq!(oracle_star_cohomology_c::<Q>(&s, &[0]).unwrap(), vec![0, 0, 1]);
        assert_eq!(oracle_star_cohomology_c::<Q>(&s, &[]).unwrap(), vec![1, 0, 1]);
        assert_eq!(oracle_star_cohomology_c::<Q>(&s, &[0, 1, 2]).unwrap(), vec![0, 0, 1]);
    }

    #[test]
    fn order_complex_oracle() {
        let fp = crate::catalog::tetrahedron_boundary();
        let all: Vec<Element> = fp.poset.elements().collect();
        assert_eq!(oracle_order_complex_cohomology::<Q>(&fp.poset, &all).unwrap(), vec![1, 0, 1]);
        let star = fp.poset.star(0).to_vec();
        let h = oracle_order_complex_cohomology::<Q>(&fp.poset, &star).unwrap();
        assert_eq!(h[0], 1);
        assert!(h[1..].iter().all(|&d| d == 0));
        let two = Poset::antichain(2);
        assert_eq!(oracle_order_complex_cohomology::<Q>(&two, &[0, 1]).unwrap(), vec![2]);
    }

    #[test]
    fn relative_matches_compact_on_closed_complex() {
        let fp = crate::catalog::tetrahedron_boundary();
        let all: Vec<Element> = fp.poset.elements().collect();
        let star = fp.poset.star(0).to_vec();
        let h = oracle_relative_cohomology::<Q>(&fp.poset, &all, &star).unwrap();
        assert_eq!(h, vec![0, 0, 1]);
    }

    #[test]
    fn rejects_sets_that_are_not_open() {
        let s = SimplicialComplex::skeleton(2, 1);
        assert!(oracle_cohomology_c::<Q>(&s, &[vec![0]]).is_err());
        let fp = crate::catalog::tetrahedron_boundary();
        assert!(oracle_order_complex_cohomology::<Q>(&fp.poset, &[0]).is_err());
    }

    #[test]
    fn tetrahedron_theorem() {
        let s = SimplicialComplex::skeleton(3, 2);
        let rows = multiplicity_table::<Q>(&s).unwrap();
        assert_eq!(rows.len(), 14);
        assert!(rows.iter().all(|r| r.agrees() && r.computed == 1));
    }
}
