//! Abstract simplicial complexes, their face posets, and simplicial maps.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poset::{Element, Poset, PosetMap};

/// Name of the empty simplex in face posets.
pub const EMPTY_SIMPLEX: &str = "∅";

/// A finite abstract simplicial complex. Simplices are sorted vertex index
/// lists; the global vertex order orients every simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_names: Vec<String>,
    simplices: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl SimplicialComplex {
    /// Validates downward closure of an explicit simplex list.
    pub fn new(vertex_names: Vec<String>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for s in simplices {
            set.insert(normalize(&vertex_names, s)?);
        }
        for s in &set {
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(i);
                    if !set.contains(&face) {
                        return Err(Error::InvalidComplex(format!(
                            "face {} of {} is missing",
                            simplex_name(&vertex_names, &face),
                            simplex_name(&vertex_names, s)
                        )));
                    }
                }
            }
        }
        Ok(Self::assemble(vertex_names, set))
    }

    /// Downward closure of the given facets.
    pub fn from_facets(vertex_names: Vec<String>, facets: Vec<Vec<usize>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for f in facets {
            let f = normalize(&vertex_names, f)?;
            if f.len() > 24 {
                return Err(Error::InvalidComplex("facet too large to close".into()));
            }
            for mask in 1u32..(1 << f.len()) {
                let face: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &v)| v)
                    .collect();
                set.insert(face);
            }
        }
        Ok(Self::assemble(vertex_names, set))
    }

    fn assemble(vertex_names: Vec<String>, set: BTreeSet<Vec<usize>>) -> Self {
        let mut simplices: Vec<Vec<usize>> = set.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        SimplicialComplex {
            vertex_names,
            simplices,
            index,
        }
    }

    /// The full `n`-simplex on vertices named `1..=n+1`.
    pub fn simplex(n: usize) -> Self {
        Self::skeleton(n, n)
    }

    /// The `k`-skeleton of the `n`-simplex, vertices named `1..=n+1`.
    pub fn skeleton(n: usize, k: usize) -> Self {
        let names = (1..=n + 1).map(|i| i.to_string()).collect();
        let mut set = BTreeSet::new();
        let mut stack = vec![Vec::new()];
        while let Some(s) = stack.pop() {
            let next = s.last().map_or(0, |&v| v + 1);
            for v in next..=n {
                let mut t = s.clone();
                t.push(v);
                if t.len() <= k + 1 {
                    stack.push(t.clone());
                    set.insert(t);
                }
            }
        }
        Self::assemble(names, set)
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// Simplices sorted by dimension, then lexicographically.
    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let mut s = simplex.to_vec();
        s.sort_unstable();
        self.index.get(&s).copied()
    }

    pub fn dim(&self) -> isize {
        self.simplices.last().map_or(-1, |s| s.len() as isize - 1)
    }

    pub fn simplex_name(&self, simplex: &[usize]) -> String {
        simplex_name(&self.vertex_names, simplex)
    }

    /// Face poset, optionally with the empty simplex as a bottom element.
    pub fn face_poset(&self, include_empty: bool) -> FacePoset {
        let offset = usize::from(include_empty);
        let mut names = Vec::with_capacity(self.len() + offset);
        if include_empty {
            names.push(EMPTY_SIMPLEX.to_string());
        }
        names.extend(self.simplices.iter().map(|s| self.simplex_name(s)));
        let mut covers = Vec::new();
        for (i, s) in self.simplices.iter().enumerate() {
            if s.len() == 1 && include_empty {
                covers.push((0, i + offset));
            }
            if s.len() > 1 {
                for drop in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(drop);
                    covers.push((self.index[&face] + offset, i + offset));
                }
            }
        }
        let poset = Poset::new(names, covers).expect("face relation of a complex is a poset");
        FacePoset {
            poset: Arc::new(poset),
            complex: Arc::new(self.clone()),
            include_empty,
        }
    }
}

fn normalize(vertex_names: &[String], mut s: Vec<usize>) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(Error::InvalidComplex("empty simplex listed".into()));
    }
    s.sort_unstable();
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidComplex("repeated vertex in simplex".into()));
    }
    if let Some(&v) = s.iter().find(|&&v| v >= vertex_names.len()) {
        return Err(Error::UnknownElement(format!("vertex #{v}")));
    }
    Ok(s)
}

/// Vertex names concatenated when all are single characters, otherwise
/// comma separated.
pub fn simplex_name(vertex_names: &[String], simplex: &[usize]) -> String {
    if simplex.is_empty() {
        return EMPTY_SIMPLEX.to_string();
    }
    let short = simplex.iter().all(|&v| vertex_names[v].chars().count() == 1);
    let parts: Vec<&str> = simplex.iter().map(|&v| vertex_names[v].as_str()).collect();
    if short {
        parts.concat()
    } else {
        parts.join(",")
    }
}

/// A face poset together with the complex it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePoset {
    pub poset: Arc<Poset>,
    pub complex: Arc<SimplicialComplex>,
    pub include_empty: bool,
}

impl FacePoset {
    /// Vertices of the simplex at poset element `x` (empty for the bottom).
    pub fn simplex_of(&self, x: Element) -> &[usize] {
        if self.include_empty {
            if x == 0 {
                &[]
            } else {
                &self.complex.simplices()[x - 1]
            }
        } else {
            &self.complex.simplices()[x]
        }
    }

    /// Dimension of the simplex at `x`; -1 for the empty simplex.
    pub fn dim_of(&self, x: Element) -> isize {
        self.simplex_of(x).len() as isize - 1
    }

    pub fn element_of(&self, simplex: &[usize]) -> Option<Element> {
        if simplex.is_empty() {
            return self.include_empty.then_some(0);
        }
        self.complex
            .index_of(simplex)
            .map(|i| i + usize::from(self.include_empty))
    }
}

/// A vertex map sending simplices to simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    source: Arc<SimplicialComplex>,
    target: Arc<SimplicialComplex>,
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(
        source: Arc<SimplicialComplex>,
        target: Arc<SimplicialComplex>,
        vertex_map: Vec<usize>,
    ) -> Result<Self> {
        if vertex_map.len() != source.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: source.num_vertices(),
                found: vertex_map.len(),
            });
        }
        let map = SimplicialMap {
            source,
            target,
            vertex_map,
        };
        for s in map.source.simplices() {
            if map.target.index_of(&map.image_vertices(s)).is_none() {
                return Err(Error::NotSimplicial(format!(
                    "image of {} is not a simplex",
                    map.source.simplex_name(s)
                )));
            }
        }
        Ok(map)
    }

    /// Recovers the vertex map behind a map of face posets (without empty
    /// simplices), checking that every simplex goes to the join of its
    /// vertex images.
    pub fn from_poset_map(map: &PosetMap, source: &FacePoset, target: &FacePoset) -> Result<Self> {
        if source.include_empty || target.include_empty {
            return Err(Error::NotSimplicial("face posets must not contain the empty simplex".into()));
        }
        if map.source().as_ref() != source.poset.as_ref() || map.target().as_ref() != target.poset.as_ref() {
            return Err(Error::NotSimplicial("map does not act on the given face posets".into()));
        }
        let mut vertex_map = vec![0; source.complex.num_vertices()];
        for (v, slot) in vertex_map.iter_mut().enumerate() {
            let x = source.element_of(&[v]).ok_or_else(|| {
                Error::NotSimplicial(format!("vertex {} is not a simplex", source.complex.vertex_names()[v]))
            })?;
            let img = target.simplex_of(map.image(x));
            if img.len() != 1 {
                return Err(Error::NotSimplicial(format!(
                    "vertex {} maps to a simplex of dimension {}",
                    source.poset.name(x),
                    img.len() as isize - 1
                )));
            }
            *slot = img[0];
        }
        let smap = SimplicialMap::new(source.complex.clone(), target.complex.clone(), vertex_map)?;
        for x in source.poset.elements() {
            let expected = target.element_of(&smap.image_vertices(source.simplex_of(x)));
            if expected != Some(map.image(x)) {
                return Err(Error::NotSimplicial(format!(
                    "{} does not map to the simplex spanned by its vertex images",
                    source.poset.name(x)
                )));
            }
        }
        Ok(smap)
    }

    pub fn source(&self) -> &Arc<SimplicialComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialComplex> {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    fn image_vertices(&self, simplex: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = simplex.iter().map(|&v| self.vertex_map[v]).collect();
        set.into_iter().collect()
    }

    /// Induced monotone map between face posets without empty simplices.
    pub fn poset_map(&self) -> (FacePoset, FacePoset, PosetMap) {
        let src = self.source.face_poset(false);
        let tgt = self.target.face_poset(false);
        let images = self
            .source
            .simplices()
            .iter()
            .map(|s| {
                tgt.element_of(&self.image_vertices(s))
                    .expect("validated at construction")
            })
            .collect();
        let map = PosetMap::new(src.poset.clone(), tgt.poset.clone(), images)
            .expect("simplicial maps are monotone");
        (src, tgt, map)
    }
}
