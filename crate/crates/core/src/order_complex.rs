//! The order complex of a poset: strict chains with the alternating signed
//! incidence `[c : c with x inserted at position i] = (-1)^i`.

use std::collections::HashMap;

use crate::field::Field;
use crate::linalg::SparseMatrix;
use crate::poset::{Element, Poset};

/// A strict chain, listed bottom to top.
pub type Chain = Vec<Element>;

#[derive(Debug, Clone)]
pub struct OrderComplex {
    chains: Vec<Vec<Chain>>,
    index: HashMap<Chain, usize>,
}

impl OrderComplex {
    /// All chains of degree `<= max_degree` (degree = length - 1); every
    /// degree when `max_degree` is `None`.
    pub fn new(poset: &Poset, max_degree: Option<usize>) -> OrderComplex {
        let mut chains: Vec<Vec<Chain>> = Vec::new();
        let mut level: Vec<Chain> = poset.elements().map(|x| vec![x]).collect();
        let mut degree = 0;
        while !level.is_empty() && max_degree.is_none_or(|d| degree <= d) {
            let mut next = Vec::new();
            for c in &level {
                let top = *c.last().expect("chains are nonempty");
                for y in poset.elements().filter(|&y| poset.lt(top, y)) {
                    let mut d = c.clone();
                    d.push(y);
                    next.push(d);
                }
            }
            chains.push(std::mem::replace(&mut level, next));
            degree += 1;
        }
        let index = chains
            .iter()
            .flat_map(|lvl| lvl.iter().enumerate().map(|(i, c)| (c.clone(), i)))
            .collect();
        OrderComplex { chains, index }
    }

    /// Number of nonempty degrees.
    pub fn num_degrees(&self) -> usize {
        self.chains.len()
    }

    pub fn chains(&self, degree: usize) -> &[Chain] {
        self.chains.get(degree).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, chain: &[Element]) -> Option<usize> {
        self.index.get(chain).copied()
    }

    /// Signed incidence `[lower : upper]`.
    pub fn incidence(lower: &[Element], upper: &[Element]) -> i64 {
        if upper.len() != lower.len() + 1 {
            return 0;
        }
        let Some(i) = (0..upper.len()).find(|&i| upper[..i] == lower[..i] && upper[i + 1..] == lower[i..])
        else {
            return 0;
        };
        if i % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Chains of degree `degree + 1` extending chain `idx`, with signs.
    pub fn cofaces(&self, poset: &Poset, degree: usize, idx: usize) -> Vec<(usize, i64)> {
        let c = &self.chains[degree][idx];
        let mut out = Vec::new();
        for pos in 0..=c.len() {
            for x in poset.elements() {
                let fits = (pos == 0 || poset.lt(c[pos - 1], x)) && (pos == c.len() || poset.lt(x, c[pos]));
                if !fits {
                    continue;
                }
                let mut d = c.clone();
                d.insert(pos, x);
                if let Some(j) = self.index_of(&d) {
                    out.push((j, if pos % 2 == 0 { 1 } else { -1 }));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Simplicial coboundary `C^degree -> C^(degree+1)`; rows are indexed by
    /// chains of degree `degree + 1`, columns by chains of degree `degree`.
    pub fn coboundary<F: Field>(&self, poset: &Poset, degree: usize) -> SparseMatrix<F> {
        let mut m = SparseMatrix::zeros(self.chains(degree + 1).len(), self.chains(degree).len());
        for j in 0..self.chains(degree).len() {
            for (i, s) in self.cofaces(poset, degree, j) {
                m.set(i, j, F::from_i64(s));
            }
        }
        m
    }
}
