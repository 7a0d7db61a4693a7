use std::io::Write;
use std::path::Path;

use injres::derived::{multiplicity_table, oracle_cohomology_c, oracle_order_complex_cohomology, oracle_star_cohomology_c};
use injres::{
    compact_pushforward, compact_pushforwards, minimal_resolution, order_complex_resolution, pushforward,
    verify_exactness, verify_minimality, Element, Field, Method, Resolution, Sheaf,
};

use crate::error::{CliError, CliResult};
use crate::field::FieldChoice;
use crate::input::{self, Body, Document, Space};
use crate::output::{
    self, Certificates, CohomologyDoc, MultiplicitiesDoc, MultiplicityOut, PushforwardDoc, ResolutionDoc,
    ValidationDoc,
};
use crate::with_field;

/// Field precedence: command line, then documents, then the environment
/// default, then the rationals.
#[derive(Debug, Clone, Copy, Default)]
pub struct FieldFlags {
    pub explicit: Option<FieldChoice>,
    pub fallback: Option<FieldChoice>,
}

impl FieldFlags {
    fn pick(&self, docs: &[&Document]) -> CliResult<FieldChoice> {
        if let Some(f) = self.explicit {
            return Ok(f);
        }
        let mut chosen: Option<(FieldChoice, &Path)> = None;
        for d in docs {
            if let Some(f) = d.field {
                match chosen {
                    Some((g, p)) if g != f => {
                        return Err(CliError::Usage(format!(
                            "{} is over {g} but {} is over {f}; pass --field to choose",
                            p.display(),
                            d.path.display()
                        )))
                    }
                    _ => chosen = Some((f, &d.path)),
                }
            }
        }
        Ok(chosen.map(|c| c.0).or(self.fallback).unwrap_or_default())
    }
}

pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

fn looks_like_json(path: &Path) -> CliResult<Option<String>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    Ok(is_json.then_some(text))
}

pub fn validate(path: &Path, fields: FieldFlags, io: Io) -> CliResult<()> {
    if let Some(text) = looks_like_json(path)? {
        return validate_output(path, &text, io);
    }
    let checked = input::load(path).and_then(|doc| {
        let field = fields.pick(&[&doc])?;
        if let Body::Sheaf(s) = &doc.body {
            with_field!(field, F => s.build::<F>(path).map(|_| ()))?;
        }
        Ok(doc)
    });
    match checked {
        Ok(doc) => {
            let elements = match &doc.body {
                Body::Space(s) => s.poset().len(),
                Body::Sheaf(s) => s.domain.len(),
                Body::Map(m) => m.source.poset().len(),
            };
            output::write_doc(
                io.out,
                &ValidationDoc {
                    kind: "validation".into(),
                    document: doc.body.kind().into(),
                    valid: true,
                    error: None,
                    elements: Some(elements),
                    certificates: None,
                },
            )?;
            Ok(())
        }
        Err(e) if e.exit_code() == 1 => {
            output::write_doc(
                io.out,
                &ValidationDoc {
                    kind: "validation".into(),
                    document: "input".into(),
                    valid: false,
                    error: Some(e.to_string()),
                    elements: None,
                    certificates: None,
                },
            )?;
            Err(e)
        }
        Err(e) => Err(e),
    }
}

/// Re-checks a resolution or pushforward document produced by this tool.
fn validate_output(path: &Path, text: &str, io: Io) -> CliResult<()> {
    let kind = serde_json::from_str::<serde_json::Value>(text)
        .map_err(|e| CliError::parse(path, e))?
        .get("kind")
        .and_then(|k| k.as_str().map(str::to_string))
        .ok_or_else(|| CliError::parse(path, "missing `kind`"))?;
    let (document, certificates, elements, failed) = match kind.as_str() {
        "resolution" => {
            let doc = ResolutionDoc::from_json(text)?;
            let field: FieldChoice = doc.field.parse().map_err(|e| CliError::parse(path, e))?;
            let (cert, n, minimal) = with_field!(field, F => {
                let res = doc.parse::<F>()?;
                Ok::<_, CliError>((certify(&res), res.sheaf().poset().len(), res.is_minimal()))
            })?;
            let failed = !cert.exact || (minimal && !cert.minimal);
            (kind, Some(cert), n, failed)
        }
        "pushforward" => {
            let doc = PushforwardDoc::from_json(text)?;
            let field: FieldChoice = doc.field.parse().map_err(|e| CliError::parse(path, e))?;
            with_field!(field, F => {
                for (_, s) in doc.parse::<F>()? {
                    s.validate()?;
                }
                Ok::<_, CliError>(())
            })?;
            (kind, None, doc.target.elements.len(), false)
        }
        other => return Err(CliError::parse(path, format!("cannot validate `{other}` documents"))),
    };
    output::write_doc(
        io.out,
        &ValidationDoc {
            kind: "validation".into(),
            document,
            valid: !failed,
            error: failed.then(|| "certificates do not hold".to_string()),
            elements: Some(elements),
            certificates,
        },
    )?;
    if failed {
        return Err(CliError::Rejected(format!("{}: certificates do not hold", path.display())));
    }
    Ok(())
}

fn certify<F: Field>(res: &Resolution<F>) -> Certificates {
    Certificates {
        exact: verify_exactness(res).is_exact(),
        minimal: verify_minimality(res),
    }
}

fn counts_line(counts: &[usize]) -> String {
    if counts.is_empty() {
        return "0".into();
    }
    counts.iter().map(usize::to_string).collect::<Vec<_>>().join(" / ")
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

pub fn resolve(path: &Path, method: Method, max_degree: Option<usize>, fields: FieldFlags, io: Io) -> CliResult<()> {
    let doc = input::load(path)?;
    let sd = doc.sheaf_doc()?;
    let field = fields.pick(&[&doc])?;
    with_field!(field, F => {
        let sheaf = sd.build::<F>(path)?;
        resolve_sheaf(&sheaf, method, max_degree, io)
    })
}

fn resolve_sheaf<F: Field>(sheaf: &Sheaf<F>, method: Method, max_degree: Option<usize>, io: Io) -> CliResult<()> {
    let too_long = |d: usize| CliError::Rejected(format!("the resolution does not stop by degree {d}"));
    let res = match method {
        Method::Minimal => match minimal_resolution(sheaf, max_degree.map(|d| d + 1)) {
            Err(injres::Error::Invariant(_)) if max_degree.is_some() => return Err(too_long(max_degree.unwrap())),
            r => r?,
        },
        Method::OrderComplex => order_complex_resolution(sheaf)?,
    };
    if let Some(d) = max_degree {
        if res.len() > d + 1 {
            return Err(too_long(d));
        }
    }
    let cert = certify(&res);
    output::write_resolution(io.out, &res, &cert)?;
    writeln!(io.err, "generators: {}", counts_line(&res.generator_counts()))?;
    writeln!(io.err, "exactness certificate: {}", pass(cert.exact))?;
    writeln!(io.err, "minimality certificate: {}", pass(cert.minimal))?;
    if !cert.exact || (method == Method::Minimal && !cert.minimal) {
        return Err(CliError::Internal(format!("{method} resolution failed its certificates")));
    }
    Ok(())
}

pub fn multiplicities(path: &Path, verify: bool, fields: FieldFlags, io: Io) -> CliResult<()> {
    let doc = input::load(path)?;
    let field = fields.pick(&[&doc])?;
    if verify {
        let fp = match &doc.body {
            Body::Space(Space::Complex(fp)) if !fp.include_empty => fp.clone(),
            Body::Space(Space::Complex(_)) => {
                return Err(CliError::Usage("--verify works on complexes without the empty simplex".into()))
            }
            _ => return Err(CliError::Usage("--verify needs a simplicial_complex document".into())),
        };
        let rows = with_field!(field, F => Ok::<_, CliError>(multiplicity_table::<F>(&fp.complex)?))?;
        let all = rows.iter().all(|r| r.agrees());
        let out = MultiplicitiesDoc {
            kind: "multiplicities".into(),
            field: field.to_string(),
            rows: rows
                .iter()
                .map(|r| MultiplicityOut {
                    element: fp.poset.name(r.element).into(),
                    degree: r.degree,
                    multiplicity: r.computed,
                    oracle: Some(r.oracle),
                    pass: Some(r.agrees()),
                })
                .collect(),
            all_pass: Some(all),
        };
        output::write_doc(io.out, &out)?;
        writeln!(io.err, "{} rows, oracle agreement: {}", out.rows.len(), pass(all))?;
        if !all {
            let bad = rows.iter().filter(|r| !r.agrees()).count();
            return Err(CliError::Rejected(format!("multiplicities disagree with the oracle on {bad} rows")));
        }
        return Ok(());
    }
    let sd = doc.sheaf_doc()?;
    let rows = with_field!(field, F => {
        let res = minimal_resolution(&sd.build::<F>(path)?, None)?;
        Ok::<_, CliError>(res.multiplicities().iter().collect::<Vec<_>>())
    })?;
    let out = MultiplicitiesDoc {
        kind: "multiplicities".into(),
        field: field.to_string(),
        rows: rows
            .into_iter()
            .map(|((degree, x), m)| MultiplicityOut {
                element: sd.domain.name(x).into(),
                degree,
                multiplicity: m,
                oracle: None,
                pass: None,
            })
            .collect(),
        all_pass: None,
    };
    output::write_doc(io.out, &out)?;
    writeln!(io.err, "{} nonzero rows", out.rows.len())?;
    Ok(())
}

pub fn pushforward_cmd(
    sheaf_path: &Path,
    map_path: &Path,
    compact: bool,
    degree: Option<usize>,
    fields: FieldFlags,
    io: Io,
) -> CliResult<()> {
    let sheaf_doc = input::load(sheaf_path)?;
    let map_doc = input::load(map_path)?;
    let field = fields.pick(&[&sheaf_doc, &map_doc])?;
    let sd = sheaf_doc.sheaf_doc()?;
    let Body::Map(md) = &map_doc.body else {
        return Err(CliError::Usage(format!("{} is not a poset_map document", map_path.display())));
    };
    let target = md.target.poset().clone();

    if compact {
        let smap = md.simplicial.as_ref().ok_or_else(|| {
            CliError::Usage("--compact needs a simplicial map between complexes without the empty simplex".into())
        })?;
        if sd.space.face_poset().is_none() || sd.space.poset() != md.source.poset() {
            return Err(CliError::Usage(
                "--compact needs a sheaf on an open set of the map's source complex".into(),
            ));
        }
        let embedding: Vec<Element> = sd.open.clone().unwrap_or_else(|| sd.space.poset().elements().collect());
        return with_field!(field, F => {
            let sheaf = sd.build::<F>(sheaf_path)?;
            let degrees: Vec<(usize, Sheaf<F>)> = match degree {
                Some(j) => vec![(j, compact_pushforward(&sheaf, &embedding, smap, j)?)],
                None => compact_pushforwards(&sheaf, &embedding, smap)?.into_iter().enumerate().collect(),
            };
            report_dims(io.err, &degrees)?;
            output::write_pushforward(io.out, &target, true, degrees.into_iter().map(Ok))
        });
    }

    if sd.domain.as_ref() != md.map.source().as_ref() {
        return Err(CliError::Usage("the sheaf does not live on the map's source poset".into()));
    }
    with_field!(field, F => {
        let sheaf = sd.build::<F>(sheaf_path)?;
        let res = minimal_resolution(&sheaf, None)?;
        let range: Vec<usize> = match degree {
            Some(j) => vec![j],
            None => (0..res.len().max(1)).collect(),
        };
        let mut dims = Vec::new();
        let items = range.into_iter().map(|j| {
            let s = pushforward(&res, &md.map, j)?;
            dims.push((j, s.dims().to_vec()));
            Ok((j, s))
        });
        output::write_pushforward(io.out, &target, false, items)?;
        for (j, d) in dims {
            writeln!(io.err, "degree {j}: dims {d:?}")?;
        }
        Ok(())
    })
}

fn report_dims<F: Field>(err: &mut dyn Write, degrees: &[(usize, Sheaf<F>)]) -> std::io::Result<()> {
    for (j, s) in degrees {
        writeln!(err, "degree {j}: dims {:?}", s.dims())?;
    }
    Ok(())
}

pub fn cohomology(path: &Path, star: Option<&str>, open: Option<&[String]>, fields: FieldFlags, io: Io) -> CliResult<()> {
    if star.is_some() && open.is_some() {
        return Err(CliError::Usage("pass at most one of --star and --open".into()));
    }
    let doc = input::load(path)?;
    let field = fields.pick(&[&doc])?;
    let Body::Space(space) = &doc.body else {
        return Err(CliError::Usage("cohomology needs a poset or simplicial_complex document".into()));
    };
    let p = space.poset();
    let lookup = |n: &str| {
        p.element(n).map_err(|source| CliError::Invalid {
            path: path.to_path_buf(),
            source,
        })
    };
    let (theory, over, dims) = match space {
        Space::Complex(fp) => {
            let (over, dims) = match (star, open) {
                (Some(s), _) => {
                    let sigma = fp.simplex_of(lookup(s)?).to_vec();
                    let d = with_field!(field, F => Ok::<_, CliError>(oracle_star_cohomology_c::<F>(&fp.complex, &sigma)?))?;
                    (format!("star of {s}"), d)
                }
                (None, Some(names)) => {
                    let mut simplices = Vec::new();
                    for n in names {
                        let x = lookup(n)?;
                        if fp.dim_of(x) < 0 {
                            return Err(CliError::Usage("the empty simplex has no open cell".into()));
                        }
                        simplices.push(fp.simplex_of(x).to_vec());
                    }
                    let d = with_field!(field, F => Ok::<_, CliError>(oracle_cohomology_c::<F>(&fp.complex, &simplices)?))?;
                    (format!("open set {{{}}}", names.join(", ")), d)
                }
                (None, None) => {
                    let d = with_field!(field, F => Ok::<_, CliError>(oracle_star_cohomology_c::<F>(&fp.complex, &[])?))?;
                    ("whole complex".to_string(), d)
                }
            };
            ("compactly supported", over, dims)
        }
        Space::Poset(p) => {
            let (over, set): (String, Vec<Element>) = match (star, open) {
                (Some(s), _) => (format!("star of {s}"), p.star(lookup(s)?).to_vec()),
                (None, Some(names)) => {
                    let mut ids = names.iter().map(|n| lookup(n)).collect::<CliResult<Vec<_>>>()?;
                    ids.sort_unstable();
                    ids.dedup();
                    (format!("open set {{{}}}", names.join(", ")), ids)
                }
                (None, None) => ("whole poset".to_string(), p.elements().collect()),
            };
            let dims = if set.is_empty() {
                Vec::new()
            } else {
                with_field!(field, F => Ok::<_, CliError>(oracle_order_complex_cohomology::<F>(p, &set)?))?
            };
            ("order complex", over, dims)
        }
    };
    writeln!(io.err, "{over}: {dims:?}")?;
    output::write_doc(
        io.out,
        &CohomologyDoc {
            kind: "cohomology".into(),
            field: field.to_string(),
            theory: theory.into(),
            over,
            dims,
        },
    )?;
    Ok(())
}
