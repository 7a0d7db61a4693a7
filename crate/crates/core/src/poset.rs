//! Finite posets stored by their cover relations.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Dense element identifier.
pub type Element = usize;

/// A finite poset. Immutable once built; reachability, stars and a linear
/// extension are computed at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, Element>,
    covers: Vec<(Element, Element)>,
    cover_index: HashMap<(Element, Element), usize>,
    up: Vec<Vec<Element>>,
    down: Vec<Vec<Element>>,
    leq: Vec<bool>,
    order: Vec<Element>,
    position: Vec<usize>,
    stars: Vec<Vec<Element>>,
}

fn check_names(names: &[String]) -> Result<HashMap<String, Element>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(Error::InvalidPoset(format!("duplicate element name `{n}`")));
        }
    }
    Ok(index)
}

/// Kahn's algorithm, smallest id first among available elements.
fn topological_order(n: usize, up: &[Vec<Element>], names: &[String]) -> Result<Vec<Element>> {
    let mut indegree = vec![0usize; n];
    for targets in up {
        for &t in targets {
            indegree[t] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<Element>> =
        (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(x)) = heap.pop() {
        order.push(x);
        for &t in &up[x] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                heap.push(Reverse(t));
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&i| indegree[i] > 0).expect("some element is stuck");
        return Err(Error::Cycle(names[stuck].clone()));
    }
    Ok(order)
}

impl Poset {
    /// Builds a poset from its cover relations. Rejects cycles and covers
    /// implied by transitivity.
    pub fn new(names: Vec<String>, covers: Vec<(Element, Element)>) -> Result<Poset> {
        let n = names.len();
        let index = check_names(&names)?;
        let mut up = vec![Vec::new(); n];
        for &(a, b) in &covers {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(format!("#{}", a.max(b))));
            }
            if a == b {
                return Err(Error::Cycle(names[a].clone()));
            }
            if up[a].contains(&b) {
                return Err(Error::InvalidPoset(format!(
                    "duplicate cover `{}` < `{}`",
                    names[a], names[b]
                )));
            }
            up[a].push(b);
        }
        let order = topological_order(n, &up, &names)?;
        let leq = closure(n, &up, &order);
        for &(a, b) in &covers {
            if up[a].iter().any(|&c| c != b && leq[c * n + b]) {
                return Err(Error::InvalidPoset(format!(
                    "`{}` < `{}` is not a cover relation",
                    names[a], names[b]
                )));
            }
        }
        Ok(Self::assemble(names, index, covers, leq, order))
    }

    /// Builds a poset from any generating set of relations `a < b`; the cover
    /// relations are computed as the transitive reduction.
    pub fn from_relations(names: Vec<String>, relations: &[(Element, Element)]) -> Result<Poset> {
        let n = names.len();
        let index = check_names(&names)?;
        let mut up = vec![Vec::new(); n];
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(format!("#{}", a.max(b))));
            }
            if a == b {
                return Err(Error::Cycle(names[a].clone()));
            }
            if !up[a].contains(&b) {
                up[a].push(b);
            }
        }
        let order = topological_order(n, &up, &names)?;
        let leq = closure(n, &up, &order);
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !leq[a * n + b] {
                    continue;
                }
                let between = (0..n).any(|c| c != a && c != b && leq[a * n + c] && leq[c * n + b]);
                if !between {
                    covers.push((a, b));
                }
            }
        }
        Ok(Self::assemble(names, index, covers, leq, order))
    }

    /// Poset whose elements are named by their ids.
    pub fn with_ids(n: usize, covers: Vec<(Element, Element)>) -> Result<Poset> {
        Self::new((0..n).map(|i| i.to_string()).collect(), covers)
    }

    pub fn chain(n: usize) -> Poset {
        Self::with_ids(n, (1..n).map(|i| (i - 1, i)).collect()).expect("a chain is a poset")
    }

    pub fn antichain(n: usize) -> Poset {
        Self::with_ids(n, Vec::new()).expect("an antichain is a poset")
    }

    fn assemble(
        names: Vec<String>,
        index: HashMap<String, Element>,
        mut covers: Vec<(Element, Element)>,
        leq: Vec<bool>,
        order: Vec<Element>,
    ) -> Poset {
        let n = names.len();
        covers.sort_unstable();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in &covers {
            up[a].push(b);
            down[b].push(a);
        }
        let cover_index = covers.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut position = vec![0; n];
        for (p, &x) in order.iter().enumerate() {
            position[x] = p;
        }
        let stars = (0..n)
            .map(|s| order.iter().copied().filter(|&t| leq[s * n + t]).collect())
            .collect();
        Poset {
            names,
            index,
            covers,
            cover_index,
            up,
            down,
            leq,
            order,
            position,
            stars,
        }
    }

    /// Same poset with a caller-chosen linear extension.
    pub fn with_linear_extension(&self, order: Vec<Element>) -> Result<Poset> {
        let n = self.len();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::InvalidPoset(format!(
                "linear extension has {} entries, poset has {n}",
                order.len()
            )));
        }
        for &x in &order {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPoset("linear extension is not a permutation".into()));
            }
        }
        let mut position = vec![0; n];
        for (p, &x) in order.iter().enumerate() {
            position[x] = p;
        }
        if let Some(&(a, b)) = self.covers.iter().find(|&&(a, b)| position[a] > position[b]) {
            return Err(Error::InvalidPoset(format!(
                "order lists `{}` after `{}`",
                self.names[a], self.names[b]
            )));
        }
        Ok(Self::assemble(
            self.names.clone(),
            self.index.clone(),
            self.covers.clone(),
            self.leq.clone(),
            order,
        ))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.len()
    }

    pub fn name(&self, x: Element) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Result<Element> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn check(&self, x: Element) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownElement(format!("#{x}")))
        }
    }

    pub fn covers(&self) -> &[(Element, Element)] {
        &self.covers
    }

    pub fn cover_index(&self, lower: Element, upper: Element) -> Option<usize> {
        self.cover_index.get(&(lower, upper)).copied()
    }

    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn lt(&self, a: Element, b: Element) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: Element, b: Element) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// `{ t : x <= t }`, listed in linear-extension order (so `x` first).
    pub fn star(&self, x: Element) -> &[Element] {
        &self.stars[x]
    }

    /// Elements covered by `x`, by ascending id.
    pub fn boundary(&self, x: Element) -> &[Element] {
        &self.down[x]
    }

    /// Elements covering `x`, by ascending id.
    pub fn coboundary(&self, x: Element) -> &[Element] {
        &self.up[x]
    }

    pub fn is_maximal(&self, x: Element) -> bool {
        self.up[x].is_empty()
    }

    pub fn maximal_elements(&self) -> Vec<Element> {
        self.elements().filter(|&x| self.is_maximal(x)).collect()
    }

    /// Deterministic linear extension, ties broken by ascending id unless
    /// another order was installed with [`Poset::with_linear_extension`].
    pub fn linear_extension(&self) -> &[Element] {
        &self.order
    }

    pub fn position(&self, x: Element) -> usize {
        self.position[x]
    }

    /// Length of the longest chain minus one; 0 for the empty poset.
    pub fn height(&self) -> usize {
        let mut depth = vec![0usize; self.len()];
        for &x in &self.order {
            for &y in &self.up[x] {
                depth[y] = depth[y].max(depth[x] + 1);
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// Checks that `set` is closed upwards, i.e. open in the Alexandrov topology.
    pub fn check_up_closed(&self, set: &[Element]) -> Result<()> {
        let mut member = vec![false; self.len()];
        for &x in set {
            self.check(x)?;
            member[x] = true;
        }
        for &x in set {
            if let Some(&y) = self.up[x].iter().find(|&&y| !member[y]) {
                return Err(Error::NotUpClosed {
                    below: self.names[x].clone(),
                    above: self.names[y].clone(),
                });
            }
        }
        Ok(())
    }

    /// Subposet on `elements` (in the given order, which becomes the id
    /// order). Returns the subposet; element `i` of it is `elements[i]`.
    pub fn induced(&self, elements: &[Element]) -> Result<Poset> {
        let names = elements
            .iter()
            .map(|&x| self.check(x).map(|_| self.names[x].clone()))
            .collect::<Result<Vec<_>>>()?;
        let local: HashMap<Element, usize> =
            elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut relations = Vec::new();
        for (i, &a) in elements.iter().enumerate() {
            for &b in &self.stars[a] {
                if let Some(&j) = local.get(&b) {
                    if i != j {
                        relations.push((i, j));
                    }
                }
            }
        }
        Poset::from_relations(names, &relations)
    }
}

fn closure(n: usize, up: &[Vec<Element>], order: &[Element]) -> Vec<bool> {
    let mut leq = vec![false; n * n];
    for &x in order.iter().rev() {
        leq[x * n + x] = true;
        for &y in &up[x] {
            for z in 0..n {
                if leq[y * n + z] {
                    leq[x * n + z] = true;
                }
            }
        }
    }
    leq
}

/// A monotone map of posets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetMap {
    source: Arc<Poset>,
    target: Arc<Poset>,
    images: Vec<Element>,
}

impl PosetMap {
    pub fn new(source: Arc<Poset>, target: Arc<Poset>, images: Vec<Element>) -> Result<PosetMap> {
        if images.len() != source.len() {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                found: images.len(),
            });
        }
        for &y in &images {
            target.check(y)?;
        }
        for &(a, b) in source.covers() {
            if !target.leq(images[a], images[b]) {
                return Err(Error::NotMonotone {
                    lower: source.name(a).to_string(),
                    upper: source.name(b).to_string(),
                });
            }
        }
        Ok(PosetMap {
            source,
            target,
            images,
        })
    }

    pub fn identity(poset: Arc<Poset>) -> PosetMap {
        let images = poset.elements().collect();
        PosetMap {
            source: poset.clone(),
            target: poset,
            images,
        }
    }

    /// Map to the one-point poset.
    pub fn to_point(source: Arc<Poset>) -> PosetMap {
        let target = Arc::new(Poset::new(vec!["pt".into()], Vec::new()).expect("point"));
        PosetMap {
            images: vec![0; source.len()],
            source,
            target,
        }
    }

    pub fn source(&self) -> &Arc<Poset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Poset> {
        &self.target
    }

    pub fn image(&self, x: Element) -> Element {
        self.images[x]
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// `{ s : f(s) >= lambda }`, by ascending id. Always up-closed.
    pub fn preimage_star(&self, lambda: Element) -> Result<Vec<Element>> {
        self.target.check(lambda)?;
        Ok(self
            .source
            .elements()
            .filter(|&s| self.target.leq(lambda, self.images[s]))
            .collect())
    }
}
