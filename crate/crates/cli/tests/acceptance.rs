//! Acceptance checks, one PASS/FAIL line each. Exits nonzero if any fail.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use injres::catalog::{example_complex, example_star_poset, tetrahedron_boundary};
use injres::derived::{
    constant_on_open, dims_at, multiplicity_table, oracle_order_complex_cohomology, oracle_relative_cohomology,
};
use injres::generate::{
    dimension_map, random_complex, random_height_map, random_linear_extension, random_poset, random_sheaf,
};
use injres::resolution::euler_characteristic;
use injres::{
    compact_pushforwards, minimal_resolution, order_complex_resolution, pushforwards, verify_exactness,
    verify_minimality, Field, Poset, PosetMap, Rational, Resolution, Sheaf, SimplicialComplex, SimplicialMap,
    SparseVec, F2,
};
use injres_cli::output::{write_resolution, Certificates, ResolutionDoc};

type Q = Rational;
type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:.2?}, limit {limit:?}");
    Ok(t)
}

fn binom(n: i64, k: i64) -> usize {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as usize
}

fn multiset(p: &Poset, gens: &[usize]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for &g in gens {
        *out.entry(p.name(g).to_string()).or_insert(0) += 1;
    }
    out
}

fn names(list: &[&str]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for n in list {
        *out.entry(n.to_string()).or_insert(0) += 1;
    }
    out
}

fn padded(mut v: Vec<usize>, n: usize) -> Vec<usize> {
    v.resize(n.max(v.len()), 0);
    while v.len() > n && v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn example_star() -> Outcome {
    let start = Instant::now();
    let p = example_star_poset().poset;
    let r = minimal_resolution(&Sheaf::<Q>::constant(p.clone()), None).map_err(|e| e.to_string())?;
    let want = [
        names(&["234", "235", "245", "345", "6", "7"]),
        names(&["23", "24", "25", "34", "35", "45", "∅", "∅"]),
        names(&["2", "3", "4", "5"]),
        names(&["∅"]),
    ];
    ensure!(r.len() == 4, "{} terms", r.len());
    for (k, (t, w)) in r.terms().iter().zip(&want).enumerate() {
        ensure!(&multiset(&p, t.generators()) == w, "I^{k} generators {:?}", multiset(&p, t.generators()));
    }
    let table: [(&[&str], [usize; 4]); 5] = [
        (&["234", "235", "245", "345"], [1, 0, 0, 0]),
        (&["23", "24", "25", "34", "35", "45"], [2, 1, 0, 0]),
        (&["2", "3", "4", "5"], [3, 3, 1, 0]),
        (&["6", "7"], [1, 0, 0, 0]),
        (&["∅"], [6, 8, 4, 1]),
    ];
    for (group, dims) in table {
        for name in group {
            let x = p.element(name).map_err(|e| e.to_string())?;
            let got: Vec<usize> = (0..4).map(|k| r.stalk_dim(k, x)).collect();
            ensure!(got == dims, "stalks at {name}: {got:?}, want {dims:?}");
        }
    }
    let two = p.element("2").map_err(|e| e.to_string())?;
    let eta = r.differentials()[0].eval_at(two);
    ensure!(eta.shape() == (3, 3) && eta.rank() == 2, "eta0(2) is {:?} of rank {}", eta.shape(), eta.rank());
    let ker = eta.kernel_basis();
    let ones = SparseVec::<Q>::from_i64(&[1, 1, 1]);
    ensure!(ker.len() == 1 && ker[0] == ones.scaled(&ker[0].get(0)), "kernel of eta0(2) is {ker:?}");
    ensure!(verify_exactness(&r).is_exact() && verify_minimality(&r), "certificates fail");
    let t = within(Duration::from_secs(1), start)?;
    Ok(format!("6 / 8 / 4 / 1, dim I^1(∅) = 8, dim I^3(∅) = 1 in {t:.2?}"))
}

fn tetrahedron() -> Outcome {
    let start = Instant::now();
    let fp = tetrahedron_boundary();
    let r = minimal_resolution(&Sheaf::<Q>::constant(fp.poset.clone()), None).map_err(|e| e.to_string())?;
    ensure!(r.generator_counts() == vec![4, 6, 4], "counts {:?}", r.generator_counts());
    for (k, t) in r.terms().iter().enumerate() {
        let mut g = t.generators().to_vec();
        g.sort_unstable();
        g.dedup();
        ensure!(g.len() == t.len(), "repeated label in I^{k}");
        ensure!(
            g.iter().all(|&x| fp.dim_of(x) == 2 - k as isize),
            "I^{k} is not labeled by the {}-simplices",
            2 - k as isize
        );
    }
    ensure!(verify_exactness(&r).is_exact(), "not exact");
    ensure!(verify_minimality(&r), "not minimal");
    let t = within(Duration::from_secs(1), start)?;
    Ok(format!("triangles / edges / vertices = 4 / 6 / 4 in {t:.2?}"))
}

fn theorem_rows(c: &SimplicialComplex) -> Result<usize, String> {
    let rows = multiplicity_table::<Q>(c).map_err(|e| e.to_string())?;
    if let Some(r) = rows.iter().find(|r| !r.agrees()) {
        return Err(format!(
            "m^{}(#{}) = {} but the oracle gives {} on {c:?}",
            r.degree, r.element, r.computed, r.oracle
        ));
    }
    Ok(rows.len())
}

fn multiplicity_oracle() -> Outcome {
    let start = Instant::now();
    let mut rows = theorem_rows(&SimplicialComplex::skeleton(3, 2))?;
    rows += theorem_rows(&example_complex())?;
    let mut complexes = 2;
    for n in 0..=5 {
        for k in 0..=n {
            rows += theorem_rows(&SimplicialComplex::skeleton(n, k))?;
            complexes += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(39);
    for _ in 0..60 {
        rows += theorem_rows(&random_complex(&mut rng, 7))?;
        complexes += 1;
    }
    let t = within(Duration::from_secs(60), start)?;
    Ok(format!("{complexes} complexes, {rows} nonzero rows agree, {t:.2?}"))
}

fn closed_forms() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for n in 1..=6usize {
        for k in 0..n {
            let fp = SimplicialComplex::skeleton(n, k).face_poset(false);
            let r = minimal_resolution(&Sheaf::<Q>::constant(fp.poset.clone()), None).map_err(|e| e.to_string())?;
            let m = r.multiplicities();
            for x in fp.poset.elements() {
                let d = fp.dim_of(x) as i64;
                for j in 0..=k + 1 {
                    let want = if j as i64 == k as i64 - d { binom(n as i64 - d - 1, k as i64 - d) } else { 0 };
                    ensure!(m.get(j, x) == want, "n={n} k={k}: m^{j}({}) = {}, want {want}", fp.poset.name(x), m.get(j, x));
                    let bound = binom(k as i64 - d, j as i64) as u64;
                    ensure!(
                        r.star_complexity(x, j) <= Ratio::from_integer(bound),
                        "n={n} k={k}: stcplx^{j}({}) above {bound}",
                        fp.poset.name(x)
                    );
                }
            }
            let v = fp.element_of(&[0]).ok_or("no vertex")?;
            for j in 0..=k {
                let want = binom(n as i64, (k - j) as i64) * binom((n - k + j) as i64 - 1, j as i64);
                let got = m.total_over(j, fp.poset.star(v));
                ensure!(got == want, "n={n} k={k}: m^{j}(St v) = {got}, want {want}");
            }
            cases += 1;
        }
    }
    let t = within(Duration::from_secs(60), start)?;
    Ok(format!("{cases} skeleta up to n = 6, {t:.2?}"))
}

fn structural() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut total = [0usize; 2];
    for i in 0..120 {
        let p = Arc::new(random_poset(&mut rng, 10, 0.3));
        let f = random_sheaf::<Q, _>(&mut rng, p.clone(), 3);
        f.validate().map_err(|e| e.to_string())?;
        let min = minimal_resolution(&f, None).map_err(|e| e.to_string())?;
        let oc = order_complex_resolution(&f).map_err(|e| e.to_string())?;
        ensure!(verify_exactness(&min).is_exact(), "sheaf {i}: minimal resolution not exact");
        ensure!(verify_exactness(&oc).is_exact(), "sheaf {i}: order-complex resolution not exact");
        ensure!(verify_minimality(&min), "sheaf {i}: not minimal");
        ensure!(min.len() <= p.height() + 1, "sheaf {i}: {} terms, height {}", min.len(), p.height());
        for x in p.elements() {
            for r in [&min, &oc] {
                ensure!(
                    euler_characteristic(r, x) == f.dim(x) as i64,
                    "sheaf {i}: Euler characteristic at {}",
                    p.name(x)
                );
            }
        }
        let (a, b) = (min.generator_counts(), oc.generator_counts());
        for (k, &n) in a.iter().enumerate() {
            ensure!(n <= b.get(k).copied().unwrap_or(0), "sheaf {i}: degree {k} has {n} > {:?}", b.get(k));
        }
        total[0] += a.iter().sum::<usize>();
        total[1] += b.iter().sum::<usize>();
        for _ in 0..2 {
            let order = random_linear_extension(&mut rng, &p);
            let q = Arc::new(p.with_linear_extension(order).map_err(|e| e.to_string())?);
            let g = f.with_poset(q).map_err(|e| e.to_string())?;
            let other = minimal_resolution(&g, None).map_err(|e| e.to_string())?;
            ensure!(other.multiplicities() == min.multiplicities(), "sheaf {i}: multiplicities depend on the order");
        }
    }
    let t = within(Duration::from_secs(120), start)?;
    Ok(format!("120 sheaves, {} vs {} generators, {t:.2?}", total[0], total[1]))
}

fn pushforward_matches(map: &PosetMap) -> Result<(), String> {
    let k = Sheaf::<Q>::constant(map.source().clone());
    let res = minimal_resolution(&k, None).map_err(|e| e.to_string())?;
    let push = pushforwards(&res, map).map_err(|e| e.to_string())?;
    for lambda in map.target().elements() {
        let v = map.preimage_star(lambda).map_err(|e| e.to_string())?;
        let want = if v.is_empty() {
            Vec::new()
        } else {
            oracle_order_complex_cohomology::<Q>(map.source(), &v).map_err(|e| e.to_string())?
        };
        let n = want.len().max(push.len());
        let got = padded(dims_at(&push, lambda), n);
        ensure!(got == padded(want.clone(), n), "at {}: {got:?} vs oracle {want:?}", map.target().name(lambda));
    }
    Ok(())
}

fn derived_oracle() -> Outcome {
    let start = Instant::now();
    let fp = tetrahedron_boundary();
    let res = minimal_resolution(&Sheaf::<Q>::constant(fp.poset.clone()), None).map_err(|e| e.to_string())?;
    let to_point = PosetMap::to_point(fp.poset.clone());
    let dims = dims_at(&pushforwards(&res, &to_point).map_err(|e| e.to_string())?, 0);
    ensure!(dims == vec![1, 0, 1], "sphere to point gives {dims:?}");

    let mut maps = vec![to_point, dimension_map(&fp), dimension_map(&example_complex().face_poset(false))];
    for (n, k) in [(4, 2), (5, 3)] {
        maps.push(dimension_map(&SimplicialComplex::skeleton(n, k).face_poset(false)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    while maps.len() < 24 {
        let fp = random_complex(&mut rng, 6).face_poset(false);
        maps.push(dimension_map(&fp));
        let levels = rng.gen_range(2..=4);
        maps.push(random_height_map(&mut rng, &fp, levels));
    }
    for (i, m) in maps.iter().enumerate() {
        pushforward_matches(m).map_err(|e| format!("map {i}: {e}"))?;
    }

    let point = Arc::new(SimplicialComplex::simplex(0));
    let smap = SimplicialMap::new(fp.complex.clone(), point, vec![0; 4]).map_err(|e| e.to_string())?;
    let star = fp.poset.star(fp.element_of(&[0]).ok_or("no vertex")?).to_vec();
    let (sheaf, embedding) = constant_on_open::<Q>(&fp.poset, &star).map_err(|e| e.to_string())?;
    let push = compact_pushforwards(&sheaf, &embedding, &smap).map_err(|e| e.to_string())?;
    let got = padded(dims_at(&push, 0), 3);
    ensure!(got == vec![0, 0, 1], "compact vertex star gives {got:?}");
    let all: Vec<usize> = fp.poset.elements().collect();
    let rel = oracle_relative_cohomology::<Q>(&fp.poset, &all, &star).map_err(|e| e.to_string())?;
    ensure!(rel == got, "relative oracle gives {rel:?}");
    let t = within(Duration::from_secs(60), start)?;
    Ok(format!("{} maps agree with the oracle; compact star (0, 0, 1); {t:.2?}", maps.len()))
}

fn performance() -> Outcome {
    let mut lines = Vec::new();
    let mut last = Duration::ZERO;
    for n in 5..=7 {
        let fp = SimplicialComplex::skeleton(n, 3).face_poset(false);
        let s = fp.poset.len();
        let k = Sheaf::<Q>::constant(fp.poset.clone());
        let start = Instant::now();
        let r = minimal_resolution(&k, None).map_err(|e| e.to_string())?;
        let t = start.elapsed();
        // degree j is labeled by the (3 - j)-faces, each C(n - d - 1, 3 - d) times
        let want: Vec<usize> = (0..=3i64)
            .map(|j| binom(n as i64 + 1, 4 - j) * binom(n as i64 - (3 - j) - 1, j))
            .collect();
        ensure!(r.generator_counts() == want, "Δ^{n}_3 counts {:?}, want {want:?}", r.generator_counts());
        let per = t.as_secs_f64() / (n as f64 * (s as f64).powi(3));
        lines.push(format!("n={n} faces={s} {t:.2?} t/(n s^3)={per:.2e}"));
        last = t;
        if n == 7 {
            ensure!(s == 162, "Δ^7_3 has {s} faces");
            ensure!(t < Duration::from_secs(10), "Δ^7_3 took {t:.2?}");
        }
    }
    println!("    trend: {}", lines.join("; "));
    Ok(format!("Δ^7_3 (162 faces) in {last:.2?}"))
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = injres_cli::run(std::iter::once("injres").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&err).into_owned())
}

fn round_trip_one<F: Field>(
    input: &Path,
    method: &str,
    field: &str,
    expected: &Resolution<F>,
    dir: &Path,
) -> Result<(), String> {
    let out = dir.join(format!(
        "{}-{method}-{}.json",
        input.file_stem().unwrap().to_string_lossy(),
        field.replace(' ', "")
    ));
    let (code, err) = cli(&[
        "resolve",
        input.to_str().unwrap(),
        "--method",
        method,
        "--field",
        field,
        "--output",
        out.to_str().unwrap(),
    ]);
    ensure!(code == 0, "resolve {} exited {code}: {err}", input.display());
    let bytes = std::fs::read(&out).map_err(|e| e.to_string())?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| e.to_string())?;
    let back = ResolutionDoc::from_json(&text)
        .and_then(|d| d.parse::<F>())
        .map_err(|e| e.to_string())?;
    ensure!(&back == expected, "{}: parsed resolution differs from the engine's", out.display());
    let exact = verify_exactness(&back).is_exact();
    let minimal = verify_minimality(&back);
    ensure!(exact, "{}: parsed resolution is not exact", out.display());
    ensure!(!back.is_minimal() || minimal, "{}: parsed resolution is not minimal", out.display());
    let mut again = Vec::new();
    write_resolution(&mut again, &back, &Certificates { exact, minimal }).map_err(|e| e.to_string())?;
    ensure!(again == bytes, "{}: re-serialized bytes differ", out.display());
    let (code, err) = cli(&["validate", out.to_str().unwrap()]);
    ensure!(code == 0, "validate {} exited {code}: {err}", out.display());
    Ok(())
}

fn cli_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = data_dir();
    let spaces = [
        ("tetrahedron.toml", tetrahedron_boundary().poset),
        ("example_star.toml", example_star_poset().poset),
    ];
    let mut n = 0;
    for (file, poset) in &spaces {
        let input = data.join(file);
        let kq = Sheaf::<Q>::constant(poset.clone());
        let k2 = Sheaf::<F2>::constant(poset.clone());
        let cases_q = [
            ("minimal", minimal_resolution(&kq, None).map_err(|e| e.to_string())?),
            ("order-complex", order_complex_resolution(&kq).map_err(|e| e.to_string())?),
        ];
        for (method, expected) in &cases_q {
            round_trip_one(&input, method, "rational", expected, dir.path())?;
            n += 1;
        }
        let expected = minimal_resolution(&k2, None).map_err(|e| e.to_string())?;
        round_trip_one(&input, "minimal", "mod 2", &expected, dir.path())?;
        n += 1;
    }
    let vee = data.join("vee.toml");
    let sheaf = injres_cli::input::load(&vee)
        .and_then(|d| d.sheaf_doc())
        .and_then(|s| s.build::<Q>(&vee))
        .map_err(|e| e.to_string())?;
    for (method, expected) in [
        ("minimal", minimal_resolution(&sheaf, None).map_err(|e| e.to_string())?),
        ("order-complex", order_complex_resolution(&sheaf).map_err(|e| e.to_string())?),
    ] {
        round_trip_one(&vee, method, "rational", &expected, dir.path())?;
        n += 1;
    }
    Ok(format!("{n} documents reproduce identical resolutions and bytes"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("golden example star resolution", example_star),
        ("golden tetrahedron resolution", tetrahedron),
        ("multiplicities equal star cohomology", multiplicity_oracle),
        ("closed forms on skeleta", closed_forms),
        ("structural properties on random sheaves", structural),
        ("pushforwards equal preimage cohomology", derived_oracle),
        ("desk-scale performance", performance),
        ("CLI round trip", cli_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
