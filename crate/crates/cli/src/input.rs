//! TOML input documents.
//!
//! Every document has a `kind` (`poset`, `simplicial_complex`, `sheaf` or
//! `poset_map`) and an optional `field`. Sheaves and maps refer to their
//! posets either by a path relative to the referring file or by an inline
//! table that is itself a poset or complex document.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use injres::{Element, FacePoset, Field, Poset, PosetMap, Sheaf, SimplicialComplex, SimplicialMap, SparseMatrix};

use crate::error::{CliError, CliResult};
use crate::field::FieldChoice;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Name {
    Text(String),
    Int(i64),
}

impl Name {
    fn text(&self) -> String {
        match self {
            Name::Text(s) => s.clone(),
            Name::Int(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Int(n) => n.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct RawPoset {
    kind: String,
    field: Option<String>,
    elements: Vec<Name>,
    #[serde(default)]
    covers: Vec<(Name, Name)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct RawComplex {
    kind: String,
    field: Option<String>,
    vertices: Option<Vec<Name>>,
    facets: Vec<Vec<Name>>,
    #[serde(default)]
    include_empty: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct RawSheaf {
    kind: String,
    field: Option<String>,
    base: toml::Value,
    open: Option<Vec<Name>>,
    #[serde(default)]
    constant: bool,
    #[serde(default)]
    dims: BTreeMap<String, usize>,
    #[serde(default)]
    maps: Vec<RawMap>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    from: Name,
    to: Name,
    matrix: Vec<Vec<Scalar>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct RawPosetMap {
    kind: String,
    field: Option<String>,
    source: toml::Value,
    target: toml::Value,
    #[serde(default)]
    images: BTreeMap<String, Name>,
}

/// A poset, or the face poset of a complex.
#[derive(Debug, Clone, PartialEq)]
pub enum Space {
    Poset(Arc<Poset>),
    Complex(FacePoset),
}

impl Space {
    pub fn poset(&self) -> &Arc<Poset> {
        match self {
            Space::Poset(p) => p,
            Space::Complex(fp) => &fp.poset,
        }
    }

    pub fn face_poset(&self) -> Option<&FacePoset> {
        match self {
            Space::Complex(fp) => Some(fp),
            Space::Poset(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
enum Payload {
    Constant,
    Explicit {
        dims: Vec<usize>,
        maps: Vec<(Element, Element, Vec<Vec<String>>)>,
    },
}

/// A sheaf document, kept field-agnostic until [`SheafDoc::build`].
#[derive(Debug, Clone)]
pub struct SheafDoc {
    pub space: Space,
    /// Ids in `space` of the open set the sheaf lives on, when given.
    pub open: Option<Vec<Element>>,
    /// The poset the sheaf lives on: `space`, or the open set in it.
    pub domain: Arc<Poset>,
    payload: Payload,
}

#[derive(Debug, Clone)]
pub struct MapDoc {
    pub source: Space,
    pub target: Space,
    pub map: PosetMap,
    /// Present when both sides are complexes without the empty simplex and
    /// the map comes from a vertex map.
    pub simplicial: Option<SimplicialMap>,
}

#[derive(Debug, Clone)]
pub enum Body {
    Space(Space),
    Sheaf(SheafDoc),
    Map(MapDoc),
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Space(Space::Poset(_)) => "poset",
            Body::Space(Space::Complex(_)) => "simplicial_complex",
            Body::Sheaf(_) => "sheaf",
            Body::Map(_) => "poset_map",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Document {
    pub path: PathBuf,
    pub field: Option<FieldChoice>,
    pub body: Body,
}

impl Document {
    /// The sheaf a command should work on: the document's own sheaf, or the
    /// constant sheaf on a poset or complex.
    pub fn sheaf_doc(&self) -> CliResult<SheafDoc> {
        match &self.body {
            Body::Sheaf(s) => Ok(s.clone()),
            Body::Space(space) => Ok(SheafDoc {
                domain: space.poset().clone(),
                space: space.clone(),
                open: None,
                payload: Payload::Constant,
            }),
            Body::Map(_) => Err(CliError::Usage(format!(
                "{} is a poset map, not a sheaf, poset or complex",
                self.path.display()
            ))),
        }
    }
}

enum Source<'a> {
    Text(&'a str),
    Value(&'a toml::Value),
}

impl Source<'_> {
    fn decode<T: DeserializeOwned>(&self, path: &Path) -> CliResult<T> {
        match self {
            Source::Text(t) => toml::from_str(t).map_err(|e| CliError::parse(path, e)),
            Source::Value(v) => (*v).clone().try_into().map_err(|e| CliError::parse(path, e)),
        }
    }

    fn table_field(&self, path: &Path, key: &str) -> CliResult<Option<String>> {
        let table: toml::Table = self.decode(path)?;
        match table.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(CliError::parse(path, format!("`{key}` must be a string"))),
        }
    }
}

fn invalid(path: &Path) -> impl Fn(injres::Error) -> CliError + '_ {
    move |source| CliError::Invalid {
        path: path.to_path_buf(),
        source,
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads and checks a document of any kind.
pub fn load(path: &Path) -> CliResult<Document> {
    let text = read(path)?;
    let src = Source::Text(&text);
    let kind = src
        .table_field(path, "kind")?
        .ok_or_else(|| CliError::parse(path, "missing `kind`"))?;
    let field = src
        .table_field(path, "field")?
        .map(|f| f.parse::<FieldChoice>().map_err(|e| CliError::parse(path, e)))
        .transpose()?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let body = match kind.as_str() {
        "poset" | "simplicial_complex" => Body::Space(space_from(&src, &kind, path)?),
        "sheaf" => Body::Sheaf(sheaf_from(&src, path, dir)?),
        "poset_map" => Body::Map(map_from(&src, path, dir)?),
        other => {
            return Err(CliError::parse(
                path,
                format!("unknown kind `{other}`; expected poset, simplicial_complex, sheaf or poset_map"),
            ))
        }
    };
    Ok(Document {
        path: path.to_path_buf(),
        field,
        body,
    })
}

fn space_from(src: &Source, kind: &str, path: &Path) -> CliResult<Space> {
    match kind {
        "poset" => {
            let raw: RawPoset = src.decode(path)?;
            let names: Vec<String> = raw.elements.iter().map(Name::text).collect();
            let index: HashMap<&str, Element> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
            let look = |n: &Name| {
                let t = n.text();
                index
                    .get(t.as_str())
                    .copied()
                    .ok_or_else(|| invalid(path)(injres::Error::UnknownElement(t)))
            };
            let covers = raw
                .covers
                .iter()
                .map(|(a, b)| Ok((look(a)?, look(b)?)))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(Space::Poset(Arc::new(Poset::new(names, covers).map_err(invalid(path))?)))
        }
        "simplicial_complex" => {
            let raw: RawComplex = src.decode(path)?;
            let mut names: Vec<String> = match &raw.vertices {
                Some(v) => v.iter().map(Name::text).collect(),
                None => Vec::new(),
            };
            let declared = raw.vertices.is_some();
            let mut facets = Vec::with_capacity(raw.facets.len());
            for f in &raw.facets {
                let mut ids = Vec::with_capacity(f.len());
                for v in f {
                    let t = v.text();
                    let id = match names.iter().position(|n| *n == t) {
                        Some(i) => i,
                        None if !declared => {
                            names.push(t);
                            names.len() - 1
                        }
                        None => return Err(invalid(path)(injres::Error::UnknownElement(t))),
                    };
                    ids.push(id);
                }
                facets.push(ids);
            }
            // declared vertices that lie in no facet are still vertices
            for v in 0..names.len() {
                if !facets.iter().any(|f| f.contains(&v)) {
                    facets.push(vec![v]);
                }
            }
            let complex = SimplicialComplex::from_facets(names, facets).map_err(invalid(path))?;
            Ok(Space::Complex(complex.face_poset(raw.include_empty)))
        }
        other => Err(CliError::parse(
            path,
            format!("expected a poset or simplicial_complex, found `{other}`"),
        )),
    }
}

/// A poset or complex given by path or inline table.
fn space_ref(value: &toml::Value, path: &Path, dir: &Path) -> CliResult<Space> {
    match value {
        toml::Value::String(rel) => {
            let target = dir.join(rel);
            let text = read(&target)?;
            let src = Source::Text(&text);
            let kind = src
                .table_field(&target, "kind")?
                .ok_or_else(|| CliError::parse(&target, "missing `kind`"))?;
            space_from(&src, &kind, &target)
        }
        toml::Value::Table(_) => {
            let src = Source::Value(value);
            let kind = src
                .table_field(path, "kind")?
                .ok_or_else(|| CliError::parse(path, "inline poset or complex needs a `kind`"))?;
            space_from(&src, &kind, path)
        }
        _ => Err(CliError::parse(path, "expected a file path or an inline table")),
    }
}

fn lookup(poset: &Poset, name: &str, path: &Path) -> CliResult<Element> {
    poset.element(name).map_err(invalid(path))
}

fn sheaf_from(src: &Source, path: &Path, dir: &Path) -> CliResult<SheafDoc> {
    let raw: RawSheaf = src.decode(path)?;
    let space = space_ref(&raw.base, path, dir)?;
    let base = space.poset().clone();
    let (open, domain) = match &raw.open {
        None => (None, base.clone()),
        Some(names) => {
            let mut ids = names
                .iter()
                .map(|n| lookup(&base, &n.text(), path))
                .collect::<CliResult<Vec<_>>>()?;
            ids.sort_unstable();
            ids.dedup();
            base.check_up_closed(&ids).map_err(invalid(path))?;
            let sub = Arc::new(base.induced(&ids).map_err(invalid(path))?);
            (Some(ids), sub)
        }
    };
    let payload = if raw.constant {
        if !raw.dims.is_empty() || !raw.maps.is_empty() {
            return Err(CliError::parse(path, "a constant sheaf takes no `dims` or `maps`"));
        }
        Payload::Constant
    } else {
        let mut dims = vec![0; domain.len()];
        for (name, &d) in &raw.dims {
            dims[lookup(&domain, name, path)?] = d;
        }
        let mut maps = Vec::with_capacity(raw.maps.len());
        for m in &raw.maps {
            let a = lookup(&domain, &m.from.text(), path)?;
            let b = lookup(&domain, &m.to.text(), path)?;
            if maps.iter().any(|&(x, y, _)| (x, y) == (a, b)) {
                return Err(CliError::parse(
                    path,
                    format!("map {} -> {} given twice", domain.name(a), domain.name(b)),
                ));
            }
            let rows = m.matrix.iter().map(|r| r.iter().map(Scalar::text).collect()).collect();
            maps.push((a, b, rows));
        }
        Payload::Explicit { dims, maps }
    };
    Ok(SheafDoc {
        space,
        open,
        domain,
        payload,
    })
}

impl SheafDoc {
    /// The sheaf over `F`, checked for functoriality.
    pub fn build<F: Field>(&self, path: &Path) -> CliResult<Sheaf<F>> {
        let p = self.domain.clone();
        let sheaf = match &self.payload {
            Payload::Constant => Sheaf::constant(p),
            Payload::Explicit { dims, maps } => {
                let mut table = HashMap::with_capacity(maps.len());
                for (a, b, rows) in maps {
                    let (a, b) = (*a, *b);
                    let (nr, nc) = (dims[b], dims[a]);
                    let context = format!("map {} -> {}", p.name(a), p.name(b));
                    if rows.len() != nr || rows.iter().any(|r| r.len() != nc) {
                        return Err(invalid(path)(injres::Error::ShapeMismatch {
                            context,
                            expected_rows: nr,
                            expected_cols: nc,
                            rows: rows.len(),
                            cols: rows.first().map_or(nc, Vec::len),
                        }));
                    }
                    let dense = rows
                        .iter()
                        .map(|r| {
                            r.iter()
                                .map(|s| F::parse_literal(s).map_err(|e| CliError::parse(path, format!("{context}: {e}"))))
                                .collect::<CliResult<Vec<F>>>()
                        })
                        .collect::<CliResult<Vec<_>>>()?;
                    let m = SparseMatrix::from_dense(nc, &dense).map_err(invalid(path))?;
                    table.insert((a, b), m);
                }
                Sheaf::from_cover_table(p, dims.clone(), table).map_err(invalid(path))?
            }
        };
        sheaf.validate().map_err(invalid(path))?;
        Ok(sheaf)
    }
}

fn map_from(src: &Source, path: &Path, dir: &Path) -> CliResult<MapDoc> {
    let raw: RawPosetMap = src.decode(path)?;
    let source = space_ref(&raw.source, path, dir)?;
    let target = space_ref(&raw.target, path, dir)?;
    let (sp, tp) = (source.poset().clone(), target.poset().clone());
    let mut images: Vec<Option<Element>> = vec![None; sp.len()];
    for (name, img) in &raw.images {
        images[lookup(&sp, name, path)?] = Some(lookup(&tp, &img.text(), path)?);
    }
    let simplicial_pair = match (source.face_poset(), target.face_poset()) {
        (Some(s), Some(t)) if !s.include_empty && !t.include_empty => Some((s, t)),
        _ => None,
    };

    let full: Option<Vec<Element>> = if images.iter().all(Option::is_some) {
        Some(images.iter().map(|i| i.expect("checked")).collect())
    } else if raw.images.is_empty() && tp.len() == 1 {
        Some(vec![0; sp.len()])
    } else {
        None
    };

    let (map, simplicial) = match (full, simplicial_pair) {
        (Some(imgs), pair) => {
            let map = PosetMap::new(sp.clone(), tp.clone(), imgs).map_err(invalid(path))?;
            let simplicial = pair.and_then(|(s, t)| SimplicialMap::from_poset_map(&map, s, t).ok());
            (map, simplicial)
        }
        (None, Some((s, t))) => {
            // only vertices given: extend along the vertex map
            let mut vertex_map = Vec::with_capacity(s.complex.num_vertices());
            for v in 0..s.complex.num_vertices() {
                let x = s.element_of(&[v]).expect("vertices are simplices");
                let img = images[x].ok_or_else(|| {
                    CliError::parse(path, format!("no image for element `{}`", sp.name(x)))
                })?;
                match t.simplex_of(img) {
                    [w] => vertex_map.push(*w),
                    _ => {
                        return Err(invalid(path)(injres::Error::NotSimplicial(format!(
                            "vertex {} must go to a vertex",
                            sp.name(x)
                        ))))
                    }
                }
            }
            let smap =
                SimplicialMap::new(s.complex.clone(), t.complex.clone(), vertex_map).map_err(invalid(path))?;
            let (_, _, map) = smap.poset_map();
            for (x, img) in images.iter().enumerate() {
                if let Some(img) = img {
                    if map.image(x) != *img {
                        return Err(invalid(path)(injres::Error::NotSimplicial(format!(
                            "{} is listed with image {} but its vertices span {}",
                            sp.name(x),
                            tp.name(*img),
                            tp.name(map.image(x))
                        ))));
                    }
                }
            }
            (map, Some(smap))
        }
        (None, None) => {
            let x = images.iter().position(Option::is_none).expect("some image missing");
            return Err(CliError::parse(path, format!("no image for element `{}`", sp.name(x))));
        }
    };
    Ok(MapDoc {
        source,
        target,
        map,
        simplicial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use injres::Rational;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn poset_and_inline_sheaf() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "v.toml",
            r#"
kind = "sheaf"
field = "mod 3"
base = { kind = "poset", elements = ["a", "b", "c"], covers = [["a", "b"], ["a", "c"]] }
dims = { a = 1, b = 2, c = 1 }
[[maps]]
from = "a"
to = "b"
matrix = [[1], ["1/2"]]
[[maps]]
from = "a"
to = "c"
matrix = [[-1]]
"#,
        );
        let doc = load(&p).unwrap();
        assert_eq!(doc.field, Some(FieldChoice::Prime(3)));
        let s = doc.sheaf_doc().unwrap().build::<Rational>(&p).unwrap();
        assert_eq!(s.dims(), &[1, 2, 1]);
        assert_eq!(s.cover_maps()[0].get(1, 0), Rational::new(1, 2));
    }

    #[test]
    fn complex_by_reference_with_open_set() {
        let dir = tempfile::tempdir().unwrap();
        write(
            dir.path(),
            "s.toml",
            "kind = \"simplicial_complex\"\nfacets = [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]\n",
        );
        let p = write(
            dir.path(),
            "u.toml",
            "kind = \"sheaf\"\nbase = \"s.toml\"\nopen = [\"1\", \"12\", \"13\", \"14\", \"123\", \"124\", \"134\"]\nconstant = true\n",
        );
        let doc = load(&p).unwrap();
        let s = doc.sheaf_doc().unwrap();
        assert_eq!(s.domain.len(), 7);
        assert_eq!(s.open.as_ref().unwrap().len(), 7);
        assert_eq!(s.space.poset().len(), 14);
    }

    #[test]
    fn map_from_vertex_images() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "s.toml", "kind = \"simplicial_complex\"\nfacets = [[1, 2], [2, 3]]\n");
        write(dir.path(), "t.toml", "kind = \"simplicial_complex\"\nfacets = [[\"a\", \"b\"]]\n");
        let p = write(
            dir.path(),
            "f.toml",
            "kind = \"poset_map\"\nsource = \"s.toml\"\ntarget = \"t.toml\"\nimages = { 1 = \"a\", 2 = \"b\", 3 = \"a\" }\n",
        );
        let Body::Map(m) = load(&p).unwrap().body else { panic!() };
        assert!(m.simplicial.is_some());
        let sp = m.source.poset();
        assert_eq!(m.target.poset().name(m.map.image(sp.element("12").unwrap())), "ab");
    }

    #[test]
    fn diagnostics() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "c.toml", "kind = \"poset\"\nelements = [\"a\", \"b\"]\ncovers = [[\"a\", \"b\"], [\"b\", \"a\"]]\n");
        let e = load(&p).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().contains("cycle"), "{e}");

        let p = write(dir.path(), "bad.toml", "kind = \"poset\"\nelements = [\"a\"\n");
        let e = load(&p).unwrap_err();
        assert!(matches!(e, CliError::Parse { .. }));
        assert!(e.to_string().contains("line"), "{e}");

        let p = write(dir.path(), "x.toml", "kind = \"poset\"\nelements = []\nextra = 1\n");
        assert!(load(&p).unwrap_err().to_string().contains("extra"));

        let e = load(&dir.path().join("missing.toml")).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
