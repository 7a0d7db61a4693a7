//! The resolution read off the order complex. Degree `k` has one summand
//! `[c_0]^F(c_k)` per chain `c_0 < ... < c_k`; it is exact but rarely
//! minimal.

use super::{Augmentation, Method, Resolution};
use crate::error::Result;
use crate::field::Field;
use crate::injective::{InjectiveSheaf, LabeledMatrix};
use crate::linalg::SparseMatrix;
use crate::order_complex::OrderComplex;
use crate::sheaf::Sheaf;

pub fn order_complex_resolution<F: Field>(sheaf: &Sheaf<F>) -> Result<Resolution<F>> {
    sheaf.validate()?;
    let p = sheaf.poset();
    let k = OrderComplex::new(p, None);

    // offsets[d][i]: first generator of chain i in degree d
    let mut terms: Vec<InjectiveSheaf> = Vec::new();
    let mut offsets: Vec<Vec<usize>> = Vec::new();
    for d in 0..k.num_degrees() {
        let mut term = InjectiveSheaf::empty(p.clone());
        let mut offs = Vec::with_capacity(k.chains(d).len());
        for c in k.chains(d) {
            offs.push(term.len());
            for _ in 0..sheaf.dim(*c.last().expect("nonempty chain")) {
                term.push(c[0]);
            }
        }
        terms.push(term);
        offsets.push(offs);
    }
    // chains whose top has a zero stalk contribute nothing, so trailing
    // degrees may be empty; a nonempty degree always has a nonempty
    // predecessor (drop the bottom of a chain)
    while terms.last().is_some_and(InjectiveSheaf::is_empty) {
        terms.pop();
    }

    let mut differentials = Vec::with_capacity(terms.len());
    for d in 0..terms.len() {
        let codomain = terms
            .get(d + 1)
            .cloned()
            .unwrap_or_else(|| InjectiveSheaf::empty(p.clone()));
        let mut m = SparseMatrix::zeros(codomain.len(), terms[d].len());
        if !codomain.is_empty() {
            for (i, c) in k.chains(d).iter().enumerate() {
                let top = *c.last().expect("nonempty chain");
                for (j, sign) in k.cofaces(p, d, i) {
                    let upper = &k.chains(d + 1)[j];
                    let block = sheaf.composite_map(top, *upper.last().expect("nonempty chain"))?;
                    let s = F::from_i64(sign);
                    for (r, col, x) in block.triplets() {
                        m.set(offsets[d + 1][j] + r, offsets[d][i] + col, s.mul(x));
                    }
                }
            }
        }
        differentials.push(LabeledMatrix::new(terms[d].clone(), codomain, m)?);
    }

    let augmentation = match terms.first() {
        Some(first) => {
            let maps = p
                .elements()
                .map(|s| {
                    let mut a = SparseMatrix::zeros(0, sheaf.dim(s));
                    // generators over s follow chain (= element id) order
                    for g in p.elements().filter(|&g| p.leq(s, g)) {
                        a = a.vstack(&sheaf.composite_map(s, g).expect("comparable")).expect("same width");
                    }
                    debug_assert_eq!(a.nrows(), first.stalk_dim(s));
                    a
                })
                .collect();
            Augmentation::PerElement(maps)
        }
        None => Augmentation::PerElement(p.elements().map(|s| SparseMatrix::zeros(0, sheaf.dim(s))).collect()),
    };
    Resolution::from_parts(sheaf.clone(), augmentation, terms, differentials, Method::OrderComplex)
}
