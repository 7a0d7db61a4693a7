//! JSON output documents. Scalars are always exact strings.

use std::collections::HashMap;
use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use injres::{
    Augmentation, Element, Field, InjectiveSheaf, LabeledMatrix, Method, Poset, Resolution, Sheaf, SparseMatrix,
};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetOut {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl PosetOut {
    pub fn new(p: &Poset) -> Self {
        PosetOut {
            elements: p.names().to_vec(),
            covers: p
                .covers()
                .iter()
                .map(|&(a, b)| (p.name(a).to_string(), p.name(b).to_string()))
                .collect(),
        }
    }

    pub fn parse(&self) -> CliResult<Poset> {
        let index = name_index(&self.elements);
        let covers = self
            .covers
            .iter()
            .map(|(a, b)| Ok((find(&index, a)?, find(&index, b)?)))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Poset::new(self.elements.clone(), covers)?)
    }
}

fn name_index(names: &[String]) -> HashMap<&str, Element> {
    names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
}

fn find(index: &HashMap<&str, Element>, name: &str) -> CliResult<Element> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| injres::Error::UnknownElement(name.to_string()).into())
}

/// A matrix as `(row, col, scalar)` triplets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixOut {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl MatrixOut {
    pub fn new<F: Field>(m: &SparseMatrix<F>) -> Self {
        MatrixOut {
            rows: m.nrows(),
            cols: m.ncols(),
            entries: m.triplets().map(|(i, j, v)| (i, j, v.to_string())).collect(),
        }
    }

    pub fn parse<F: Field>(&self) -> CliResult<SparseMatrix<F>> {
        let mut m = SparseMatrix::zeros(self.rows, self.cols);
        for (i, j, s) in &self.entries {
            if *i >= self.rows || *j >= self.cols {
                return Err(CliError::Rejected(format!(
                    "entry ({i}, {j}) outside a {}x{} matrix",
                    self.rows, self.cols
                )));
            }
            let v = F::parse_literal(s).map_err(|e| CliError::Rejected(e.to_string()))?;
            if v.is_zero() {
                return Err(CliError::Rejected(format!("explicit zero at ({i}, {j})")));
            }
            m.set(*i, *j, v);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverMapOut {
    pub from: String,
    pub to: String,
    pub matrix: MatrixOut,
}

/// Stalk dimensions and cover maps, in the poset's cover order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafOut {
    pub dims: Vec<usize>,
    pub maps: Vec<CoverMapOut>,
}

impl SheafOut {
    pub fn new<F: Field>(s: &Sheaf<F>) -> Self {
        let p = s.poset();
        SheafOut {
            dims: s.dims().to_vec(),
            maps: p
                .covers()
                .iter()
                .zip(s.cover_maps())
                .map(|(&(a, b), m)| CoverMapOut {
                    from: p.name(a).to_string(),
                    to: p.name(b).to_string(),
                    matrix: MatrixOut::new(m),
                })
                .collect(),
        }
    }

    pub fn parse<F: Field>(&self, poset: Arc<Poset>) -> CliResult<Sheaf<F>> {
        let index = name_index(poset.names());
        let mut table = HashMap::new();
        for m in &self.maps {
            let key = (find(&index, &m.from)?, find(&index, &m.to)?);
            if table.insert(key, m.matrix.parse()?).is_some() {
                return Err(CliError::Rejected(format!("map {} -> {} given twice", m.from, m.to)));
            }
        }
        Ok(Sheaf::from_cover_table(poset, self.dims.clone(), table)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AugmentationOut {
    Diagonal,
    PerElement { blocks: Vec<MatrixOut> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermOut {
    pub degree: usize,
    pub generators: Vec<String>,
    pub differential: MatrixOut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub exact: bool,
    pub minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionSummary {
    pub generator_counts: Vec<usize>,
    pub certificates: Certificates,
}

/// The whole resolution document as read back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionDoc {
    pub kind: String,
    pub field: String,
    pub method: String,
    pub poset: PosetOut,
    pub sheaf: SheafOut,
    pub augmentation: AugmentationOut,
    pub terms: Vec<TermOut>,
    pub summary: ResolutionSummary,
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("output types serialize")
}

/// Writes a resolution document, one term per line.
pub fn write_resolution<F: Field>(
    out: &mut dyn Write,
    res: &Resolution<F>,
    certificates: &Certificates,
) -> std::io::Result<()> {
    let p = res.sheaf().poset();
    let augmentation = match res.augmentation() {
        Augmentation::Diagonal => AugmentationOut::Diagonal,
        Augmentation::PerElement(maps) => AugmentationOut::PerElement {
            blocks: maps.iter().map(MatrixOut::new).collect(),
        },
    };
    write!(
        out,
        "{{\"kind\":\"resolution\",\"field\":{},\"method\":{},\n\"poset\":{},\n\"sheaf\":{},\n\"augmentation\":{},\n\"terms\":[",
        json(&F::name()),
        json(&res.method().to_string()),
        json(&PosetOut::new(p)),
        json(&SheafOut::new(res.sheaf())),
        json(&augmentation),
    )?;
    for (k, (term, d)) in res.terms().iter().zip(res.differentials()).enumerate() {
        let t = TermOut {
            degree: k,
            generators: term.generators().iter().map(|&g| p.name(g).to_string()).collect(),
            differential: MatrixOut::new(d.matrix()),
        };
        let sep = if k == 0 { "\n" } else { ",\n" };
        write!(out, "{sep}{}", json(&t))?;
    }
    let summary = ResolutionSummary {
        generator_counts: res.generator_counts(),
        certificates: certificates.clone(),
    };
    writeln!(out, "],\n\"summary\":{}}}", json(&summary))
}

fn parse_method(s: &str) -> CliResult<Method> {
    match s {
        "minimal" => Ok(Method::Minimal),
        "order-complex" => Ok(Method::OrderComplex),
        other => Err(CliError::Rejected(format!("unknown method `{other}`"))),
    }
}

impl ResolutionDoc {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let doc: ResolutionDoc = serde_json::from_str(text).map_err(|e| CliError::Rejected(e.to_string()))?;
        if doc.kind != "resolution" {
            return Err(CliError::Rejected(format!("expected a resolution document, found `{}`", doc.kind)));
        }
        Ok(doc)
    }

    /// Rebuilds the in-memory resolution. The stored field must be `F`.
    pub fn parse<F: Field>(&self) -> CliResult<Resolution<F>> {
        if self.field != F::name() {
            return Err(CliError::Rejected(format!(
                "document is over {}, not {}",
                self.field,
                F::name()
            )));
        }
        let poset = Arc::new(self.poset.parse()?);
        let sheaf = self.sheaf.parse::<F>(poset.clone())?;
        let index = name_index(poset.names());
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, t) in self.terms.iter().enumerate() {
            if t.degree != k {
                return Err(CliError::Rejected(format!("term {k} is labeled degree {}", t.degree)));
            }
            let gens = t.generators.iter().map(|g| find(&index, g)).collect::<CliResult<Vec<_>>>()?;
            terms.push(InjectiveSheaf::new(poset.clone(), gens)?);
        }
        let empty = InjectiveSheaf::empty(poset.clone());
        let mut differentials = Vec::with_capacity(terms.len());
        for (k, t) in self.terms.iter().enumerate() {
            let next = terms.get(k + 1).unwrap_or(&empty).clone();
            differentials.push(LabeledMatrix::new(terms[k].clone(), next, t.differential.parse()?)?);
        }
        let augmentation = match &self.augmentation {
            AugmentationOut::Diagonal => Augmentation::Diagonal,
            AugmentationOut::PerElement { blocks } => {
                Augmentation::PerElement(blocks.iter().map(MatrixOut::parse).collect::<CliResult<_>>()?)
            }
        };
        Ok(Resolution::from_parts(
            sheaf,
            augmentation,
            terms,
            differentials,
            parse_method(&self.method)?,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeOut {
    pub degree: usize,
    #[serde(flatten)]
    pub sheaf: SheafOut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PushforwardDoc {
    pub kind: String,
    pub field: String,
    pub compact: bool,
    pub target: PosetOut,
    pub degrees: Vec<DegreeOut>,
}

/// Streams a pushforward document, one degree per line.
pub fn write_pushforward<F: Field>(
    out: &mut dyn Write,
    target: &Poset,
    compact: bool,
    degrees: impl IntoIterator<Item = CliResult<(usize, Sheaf<F>)>>,
) -> CliResult<()> {
    write!(
        out,
        "{{\"kind\":\"pushforward\",\"field\":{},\"compact\":{compact},\n\"target\":{},\n\"degrees\":[",
        json(&F::name()),
        json(&PosetOut::new(target)),
    )?;
    for (i, item) in degrees.into_iter().enumerate() {
        let (degree, sheaf) = item?;
        let d = DegreeOut {
            degree,
            sheaf: SheafOut::new(&sheaf),
        };
        let sep = if i == 0 { "\n" } else { ",\n" };
        write!(out, "{sep}{}", json(&d))?;
    }
    writeln!(out, "]}}")?;
    Ok(())
}

impl PushforwardDoc {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Rejected(e.to_string()))
    }

    pub fn parse<F: Field>(&self) -> CliResult<Vec<(usize, Sheaf<F>)>> {
        let target = Arc::new(self.target.parse()?);
        self.degrees
            .iter()
            .map(|d| Ok((d.degree, d.sheaf.parse::<F>(target.clone())?)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityOut {
    pub element: String,
    pub degree: usize,
    pub multiplicity: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicitiesDoc {
    pub kind: String,
    pub field: String,
    pub rows: Vec<MultiplicityOut>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub all_pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyDoc {
    pub kind: String,
    pub field: String,
    /// `compactly supported` for complexes, `order complex` for posets.
    pub theory: String,
    pub over: String,
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationDoc {
    pub kind: String,
    pub document: String,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elements: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificates: Option<Certificates>,
}

/// One line of JSON plus newline.
pub fn write_doc<T: Serialize>(out: &mut dyn Write, doc: &T) -> std::io::Result<()> {
    writeln!(out, "{}", json(doc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use injres::catalog::{example_star_poset, tetrahedron_boundary};
    use injres::{minimal_resolution, order_complex_resolution, Rational, F3};

    fn round_trip<F: Field>(res: &Resolution<F>) {
        let cert = Certificates {
            exact: true,
            minimal: true,
        };
        let mut buf = Vec::new();
        write_resolution(&mut buf, res, &cert).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let doc = ResolutionDoc::from_json(&text).unwrap();
        let back = doc.parse::<F>().unwrap();
        assert_eq!(&back, res);
        let mut again = Vec::new();
        write_resolution(&mut again, &back, &cert).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn resolutions_round_trip() {
        for fp in [tetrahedron_boundary(), example_star_poset()] {
            let k = Sheaf::<Rational>::constant(fp.poset.clone());
            round_trip(&minimal_resolution(&k, None).unwrap());
            round_trip(&order_complex_resolution(&k).unwrap());
            round_trip(&minimal_resolution(&Sheaf::<F3>::constant(fp.poset.clone()), None).unwrap());
        }
    }

    #[test]
    fn field_mismatch_is_rejected() {
        let k = Sheaf::<Rational>::constant(tetrahedron_boundary().poset);
        let mut buf = Vec::new();
        let cert = Certificates {
            exact: true,
            minimal: true,
        };
        write_resolution(&mut buf, &minimal_resolution(&k, None).unwrap(), &cert).unwrap();
        let doc = ResolutionDoc::from_json(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert!(doc.parse::<F3>().is_err());
    }

    #[test]
    fn matrices_reject_bad_triplets() {
        let m = MatrixOut {
            rows: 1,
            cols: 1,
            entries: vec![(0, 1, "1".into())],
        };
        assert!(m.parse::<Rational>().is_err());
        let m = MatrixOut {
            rows: 1,
            cols: 1,
            entries: vec![(0, 0, "2/4".into())],
        };
        assert_eq!(m.parse::<Rational>().unwrap().get(0, 0), Rational::new(1, 2));
    }
}
