use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use sonc_core::circuits::{enumerate_circuits, integer_row, reznick_cone, Circuit};
use sonc_core::discriminant::{
    boundary_sample, build_chart, cell_truncations_vanish, check_arrangement, coefficient_slice, hk_sample,
    random_sample, verify_vanishing, ImplicitPolynomial, LambdaChart,
};
use sonc_core::equality::{check_equality, Verdict};
use sonc_core::expsum::{check_nonneg_numeric, eval, Locus, MinimizeConfig, Scalar};
use sonc_core::io::{self, ChartSpec};
use sonc_core::poly::nonneg_on_positive_halfline;
use sonc_core::rat::{fmt_rat, parse_rat, rat, Rat};
use sonc_core::subdivision::{
    check_duality, enumerate_regular_subdivisions, subdivide, tropical_complex, WeightVector,
};
use sonc_core::univariate::{
    build_poset, codim1_count, enumerate_labels, quartic_boundary_test, quartic_pair, slice_dim, sturm_nonneg_halfline,
};
use sonc_core::{SoncError, SupportSet};

use crate::report::{join, Report};
use crate::{BoundaryArgs, Cli, Command, HkArgs};

pub enum CliError {
    /// Bad flag values: exit code 2.
    Usage(String),
    /// Unreadable input or a failed computation: exit code 1.
    Domain(String),
}

impl From<SoncError> for CliError {
    fn from(e: SoncError) -> Self {
        CliError::Domain(e.to_string())
    }
}

type Out = Result<Report, CliError>;

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    io::parse_json(&text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn read_support(path: &Path) -> Result<SupportSet, CliError> {
    Ok(io::support_from_json(read_json(path)?)?)
}

fn read_weights(path: &Path, a: &SupportSet) -> Result<WeightVector, CliError> {
    let w = io::weights_from_json(read_json(path)?)?;
    if w.len() != a.len() {
        return Err(SoncError::LengthMismatch { expected: a.len(), got: w.len() }.into());
    }
    Ok(w)
}

fn rats(v: &[Rat]) -> String {
    format!("[{}]", v.iter().map(fmt_rat).collect::<Vec<_>>().join(","))
}

fn usage_rat(flag: &str, s: &str) -> Result<Rat, CliError> {
    parse_rat(s).map_err(|_| CliError::Usage(format!("invalid value {s:?} for --{flag}: expected a rational p/q")))
}

fn named_poly(flag: &str, name: &str) -> Result<ImplicitPolynomial, CliError> {
    ImplicitPolynomial::named(name)
        .ok_or_else(|| CliError::Usage(format!("invalid value {name:?} for --{flag}: expected one of D0..D5")))
}

pub fn run(cli: &Cli) -> Out {
    match &cli.command {
        Command::Circuits { support, edges_only } => circuits(support, *edges_only),
        Command::Subdivide { support, weights } => subdivide_cmd(support, weights),
        Command::Census { support, sonc_complexes } => census(support, *sonc_complexes),
        Command::Tropical { support, weights } => tropical(support, weights),
        Command::HkSample(args) => hk(args, cli.seed),
        Command::VerifyDisc { chart, poly, samples } => verify_disc(chart, poly, *samples, cli.seed),
        Command::BoundarySample(args) => boundary(args, cli.seed, cli.tol),
        Command::Strata { d, slice, poset, dot, codim1 } => strata(*d, *slice, *poset, *dot, *codim1),
        Command::QuarticTest { w1, w3 } => quartic(w1, w3),
        Command::CheckEquality { support, census } => equality(support, *census),
        Command::Eval { sum, at } => eval_cmd(sum, at),
        Command::Minimize { sum, grid } => minimize(sum, *grid, cli.tol),
    }
}

fn circuits(path: &Path, edges_only: bool) -> Out {
    let a = read_support(path)?;
    let cone = reznick_cone(&a);
    let list: Vec<Circuit> = if edges_only { cone.edge_generators.clone() } else { enumerate_circuits(&a) };
    let mut r = Report::new(serde_json::to_value(&list).expect("circuits serialize"))
        .columns(&["support", "vector", "signature", "simplicial", "interior", "dim", "edge"]);
    for c in &list {
        let vector = if c.integer_vec.is_some() { join(&integer_row(c, a.len())) } else { rats(&c.full_vector(a.len())) };
        r.row(vec![
            join(&c.support),
            vector,
            format!("({},{})", c.signature.0, c.signature.1),
            if c.simplicial { "yes" } else { "no" }.into(),
            c.interior_index.map_or("-".into(), |i| i.to_string()),
            c.dim.to_string(),
            if cone.edge_generators.contains(c) { "yes" } else { "no" }.into(),
        ]);
    }
    r.note(format!("{} circuits, {} edge generators", list.len(), cone.edge_generators.len()));
    Ok(r)
}

fn subdivide_cmd(path: &Path, weights: &Path) -> Out {
    let a = read_support(path)?;
    let w = read_weights(weights, &a)?;
    let sub = subdivide(&a, &w)?;
    let mut r = Report::new(serde_json::to_value(&sub).expect("subdivisions serialize")).columns(&["cell", "points", "dim"]);
    for (i, c) in sub.cells.iter().enumerate() {
        r.row(vec![i.to_string(), join(c), a.affine_dim(c).to_string()]);
    }
    Ok(r)
}

fn census(path: &Path, complexes: bool) -> Out {
    let a = read_support(path)?;
    if complexes {
        let (entries, subs) = sonc_core::equality::complex_census(&a)?;
        let mut r = Report::new(json!({
            "subdivisions": subs,
            "count": entries.len(),
            "complexes": entries,
        }))
        .columns(&["complex", "maximal", "witness"]);
        for (i, e) in entries.iter().enumerate() {
            let witness = e.witness.cells.iter().map(|c| join(c)).collect::<Vec<_>>().join(" ");
            let maximal = e.maximal.iter().map(|c| join(c)).collect::<Vec<_>>().join(" ");
            r.row(vec![i.to_string(), if maximal.is_empty() { "(empty)".into() } else { maximal }, witness]);
        }
        r.note(format!("{} distinct sonc-complexes over {subs} regular subdivisions", entries.len()));
        return Ok(r);
    }
    let subs = enumerate_regular_subdivisions(&a)?;
    let mut r = Report::new(json!({ "count": subs.len(), "subdivisions": subs })).columns(&["subdivision", "cells", "weights"]);
    for (i, s) in subs.iter().enumerate() {
        let cells = s.cells.iter().map(|c| join(c)).collect::<Vec<_>>().join(" ");
        r.row(vec![i.to_string(), cells, s.witness.as_ref().map_or("-".into(), |w| rats(&w.0))]);
    }
    r.note(format!("{} regular subdivisions", subs.len()));
    Ok(r)
}

fn tropical(path: &Path, weights: &Path) -> Out {
    let a = read_support(path)?;
    let w = read_weights(weights, &a)?;
    let sub = subdivide(&a, &w)?;
    let m = tropical_complex(&a, &w)?;
    let dual = check_duality(&a, &sub, &m);
    let mut r = Report::new(json!({ "complex": m, "duality": dual }))
        .columns(&["dim", "dual face", "indicator", "vertices", "rays"]);
    for c in &m.cells {
        let vs = c.vertices.iter().map(|v| rats(v)).collect::<Vec<_>>().join(" ");
        let rs = c.rays.iter().map(|v| rats(v)).collect::<Vec<_>>().join(" ");
        r.row(vec![c.dim.to_string(), join(&c.dual_face), join(&c.indicator), vs, if rs.is_empty() { "-".into() } else { rs }]);
    }
    r.note(format!("duality with the subdivision: {}", if dual { "holds" } else { "fails" }));
    r.ok = dual;
    Ok(r)
}

fn chart_json(chart: &LambdaChart) -> Value {
    json!({
        "cells": chart.subdivision.cells,
        "circuits": chart.circuits.iter().map(|c| json!({"support": c.circuit.support, "cell": c.cell})).collect::<Vec<_>>(),
        "complement": chart.complement,
        "relations": chart.relations,
    })
}

fn random_scales(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rat> {
    (0..k).map(|_| rat(rng.gen_range(1..=9), rng.gen_range(1..=9))).collect()
}

fn hk(args: &HkArgs, seed: u64) -> Out {
    let a = Arc::new(read_support(&args.support)?);
    let w = read_weights(&args.weights, &a)?;
    let chart = build_chart(&a, &subdivide(&a, &w)?);
    let t = args.t.as_deref().map(|p| io::rats_from_json(read_json(p)?).map_err(CliError::from)).transpose()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::new();
    for _ in 0..args.samples {
        let s = random_sample(&chart, &mut rng);
        let s = match &t {
            Some(t) => hk_sample(&chart, t, &s.z_cells, &s.monomials)?,
            None => s,
        };
        samples.push(s);
    }
    let sample_json: Vec<Value> = samples
        .iter()
        .map(|s| {
            json!({
                "t": io::rats_to_json(&s.t),
                "z": s.z_cells.iter().map(|z| io::rats_to_json(&z.z)).collect::<Vec<_>>(),
                "monomials": io::rats_to_json(&s.monomials),
                "a": io::rats_to_json(&s.a),
            })
        })
        .collect();
    let mut r = Report::new(json!({ "chart": chart_json(&chart), "samples": sample_json })).columns(&["sample", "t", "a"]);
    for (i, s) in samples.iter().enumerate() {
        r.row(vec![i.to_string(), rats(&s.t), rats(&s.a)]);
    }
    let sup: Vec<String> = chart.circuits.iter().map(|c| join(&c.circuit.support)).collect();
    r.note(format!("chart circuits: {}", if sup.is_empty() { "none".into() } else { sup.join(" ") }));
    r.note(format!("free monomials: {}", join(&chart.complement)));
    Ok(r)
}

fn verify_disc(chart_path: &Path, poly: &str, samples: usize, seed: u64) -> Out {
    let d = named_poly("poly", poly)?;
    let spec = ChartSpec::from_json(read_json(chart_path)?)?;
    let a = Arc::new(spec.support);
    let chart = build_chart(&a, &subdivide(&a, &spec.weights)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::new(Value::Null).columns(&["sample", "a", "value"]);
    let mut zeros = 0;
    let mut values = Vec::new();
    for i in 0..samples {
        let s = random_sample(&chart, &mut rng);
        let v = verify_vanishing(&d, &s);
        if v == Rat::from_integer(0.into()) {
            zeros += 1;
        }
        r.row(vec![i.to_string(), rats(&s.a), fmt_rat(&v)]);
        values.push(json!({ "a": io::rats_to_json(&s.a), "value": fmt_rat(&v) }));
    }
    r.json = json!({ "poly": d.name, "equation": d.to_string(), "samples": values, "vanishing": zeros });
    r.note(format!("{}: {zeros} of {samples} samples vanish exactly", d.name));
    r.ok = zeros == samples;
    Ok(r)
}

fn parse_axes(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("invalid value {s:?} for --axes: expected two indices i,j"));
    let (i, j) = s.split_once(',').ok_or_else(bad)?;
    Ok((i.trim().parse().map_err(|_| bad())?, j.trim().parse().map_err(|_| bad())?))
}

fn boundary(args: &BoundaryArgs, seed: u64, tol: f64) -> Out {
    let poly = args.poly.as_deref().map(|p| named_poly("poly", p)).transpose()?;
    let axes = parse_axes(&args.axes)?;
    let a = Arc::new(read_support(&args.support)?);
    let w = read_weights(&args.weights, &a)?;
    let chart = build_chart(&a, &subdivide(&a, &w)?);
    let t = match &args.t {
        Some(p) => io::rats_from_json(read_json(p)?)?,
        None => random_scales(&mut ChaCha8Rng::seed_from_u64(seed), chart.circuits.len()),
    };
    let bs = boundary_sample(&a, &w, &t)?;
    let arranged = check_arrangement(&a, &bs);
    let truncations = cell_truncations_vanish(&a, &bs)?;
    let cfg = MinimizeConfig::default();
    let (nonneg, how) = match bs.sum.to_univariate_poly() {
        Some(p) => (nonneg_on_positive_halfline(&p), "exact".to_string()),
        None => {
            let m = check_nonneg_numeric(&bs.sum, &cfg)?.min_found;
            (m >= -tol, format!("numeric minimum {m:.3e}"))
        }
    };
    let mut r = Report::new(json!({
        "decomposition": io::decomposition_to_json(&bs.decomposition),
        "sum": io::sum_to_json(&bs.sum),
        "term_cells": bs.term_cells,
        "arrangement": arranged,
        "truncations_vanish": truncations.iter().map(|(c, z)| json!({"cell": c, "vanishes": z})).collect::<Vec<_>>(),
        "nonnegative": nonneg,
    }))
    .columns(&["term", "circuit", "cell", "t", "z"]);
    for (i, (g, cell)) in bs.decomposition.agiform_terms.iter().zip(&bs.term_cells).enumerate() {
        let z = match &g.locus {
            Locus::Toric(p) => rats(&p.z),
            Locus::Log(w) => format!("{w:?}"),
        };
        r.row(vec![i.to_string(), join(&g.circuit.support), join(&bs.subdivision.cells[*cell]), fmt_rat(&g.t), z]);
    }
    let coeffs = bs.sum.exact_coeffs().map(rats).unwrap_or_default();
    r.note(format!("coefficients: {coeffs}"));
    r.note(format!("singular loci on the tropical complex: {}", if arranged { "yes" } else { "no" }));
    r.note(format!("nonnegative: {} ({how})", if nonneg { "yes" } else { "no" }));
    let vanish = truncations.iter().all(|(_, z)| *z);
    r.note(format!("cell truncations vanish at their vertices: {}", if vanish { "yes" } else { "no" }));
    r.ok = arranged && nonneg && vanish;

    if let Some(path) = &args.emit_grid {
        let grid_cfg = MinimizeConfig { points_per_axis: 15, descent_steps: 40, ..Default::default() };
        let rows = coefficient_slice(&bs.sum, axes, args.half_width, args.steps, poly.as_ref(), &grid_cfg)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = [format!("a{}", axes.0), format!("a{}", axes.1), "d_value".into(), "f_min".into()];
        let fail = |e: csv::Error| CliError::Domain(e.to_string());
        w.write_record(&header).map_err(fail)?;
        for row in &rows {
            let d = row.d_value.map_or(String::new(), |d| format!("{d:.12e}"));
            w.write_record([
                format!("{:.12}", row.a[axes.0]),
                format!("{:.12}", row.a[axes.1]),
                d,
                format!("{:.12e}", row.f_min),
            ])
            .map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Domain(e.to_string()))?;
        std::fs::write(path, bytes).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
        r.note(format!("wrote {} grid rows to {}", rows.len(), path.display()));
    }
    Ok(r)
}

fn strata(d: usize, slice: bool, poset: bool, dot: bool, codim1: bool) -> Out {
    if d < 2 {
        return Err(CliError::Usage(format!("invalid value {d} for --d: need d >= 2")));
    }
    if d > 20 {
        return Err(CliError::Usage(format!("invalid value {d} for --d: at most 20 supported")));
    }
    let labels = enumerate_labels(d, slice);
    let mut r = Report::new(Value::Null).columns(&["label", "dim", "slice dim"]);
    for l in &labels {
        r.row(vec![l.to_string(), l.dim().to_string(), slice_dim(l).to_string()]);
    }
    let mut out = json!({
        "d": d,
        "labels": labels.iter().map(|l| json!({"label": l.to_string(), "groups": l, "dim": l.dim(), "slice_dim": slice_dim(l)})).collect::<Vec<_>>(),
    });
    if poset || dot {
        let p = build_poset(&labels);
        out["poset"] = json!({
            "nodes": labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "edges": p.covers,
        });
        for (u, v) in &p.covers {
            r.note(format!("{} > {}", labels[*u], labels[*v]));
        }
        if dot {
            r.raw = Some(p.to_dot());
        }
    }
    if codim1 {
        if d < 3 {
            return Err(CliError::Usage(format!("invalid value {d} for --d: --codim1 needs d >= 3")));
        }
        let (n, total) = codim1_count(d);
        out["codim1"] = json!({ "labels": n, "with_coordinate_hyperplanes": total });
        r.note(format!("codimension-one strata: {n} labels, {total} with a_0 = 0 and a_d = 0"));
    }
    r.json = out;
    Ok(r)
}

fn quartic(w1: &str, w3: &str) -> Out {
    let w1 = usage_rat("w1", w1)?;
    let w3 = usage_rat("w3", w3)?;
    let verdict = quartic_boundary_test(&w1, &w3)?;
    let p = quartic_pair(&w1, &w3);
    let nonneg = sturm_nonneg_halfline(&p);
    let product = &w1 * &w3;
    let name = serde_json::to_value(verdict).expect("verdicts serialize");
    let mut r = Report::new(json!({
        "w1": fmt_rat(&w1), "w3": fmt_rat(&w3), "product": fmt_rat(&product),
        "verdict": name, "polynomial": p.to_string(), "nonnegative": nonneg,
    }))
    .columns(&["w1", "w3", "w1*w3", "verdict"]);
    r.row(vec![fmt_rat(&w1), fmt_rat(&w3), fmt_rat(&product), name.as_str().unwrap_or_default().to_string()]);
    r.note(format!("f(z) = {p}"));
    Ok(r)
}

fn equality(path: &Path, list: bool) -> Out {
    let a = read_support(path)?;
    let rep = check_equality(&a)?;
    let verdict = match rep.verdict {
        Verdict::Equal => "equal",
        Verdict::NotEqual => "not-equal",
        Verdict::PreconditionViolated => "precondition-violated",
    };
    let mut r = Report::new(serde_json::to_value(&rep).expect("reports serialize")).columns(&["complex", "maximal cells"]);
    if list {
        for (i, e) in rep.complexes.iter().enumerate() {
            let m = e.maximal.iter().map(|c| join(c)).collect::<Vec<_>>().join(" ");
            r.row(vec![i.to_string(), if m.is_empty() { "(empty)".into() } else { m }]);
        }
    } else {
        r.header.clear();
    }
    r.note(format!("generic: {}", if rep.generic { "yes" } else { "no" }));
    r.note(format!(
        "{} sonc-complexes over {} regular subdivisions, {} nonempty up to {} symmetries",
        rep.complexes.len(),
        rep.subdivisions,
        rep.nonempty_up_to_symmetry,
        rep.symmetries
    ));
    r.note(format!("verdict: {verdict}"));
    Ok(r)
}

fn eval_cmd(sum: &Path, at: &Path) -> Out {
    let f = io::sum_from_json(read_json(sum)?)?;
    let z = io::toric_point_from_json(read_json(at)?)?;
    let (value, shown) = match eval(&f, &z)? {
        Scalar::Exact(v) => (json!(fmt_rat(&v)), fmt_rat(&v)),
        Scalar::Float(v) => (json!({"mode": "float", "value": v}), format!("{v}")),
    };
    let mut r = Report::new(json!({ "z": io::rats_to_json(&z.z), "value": value })).columns(&["z", "value"]);
    r.row(vec![rats(&z.z), shown]);
    Ok(r)
}

fn minimize(sum: &Path, grid: usize, tol: f64) -> Out {
    if grid < 2 {
        return Err(CliError::Usage(format!("invalid value {grid} for --grid: need at least 2 points")));
    }
    let f = io::sum_from_json(read_json(sum)?)?;
    let cfg = MinimizeConfig { points_per_axis: grid, ..Default::default() };
    let rep = check_nonneg_numeric(&f, &cfg)?;
    let nonneg = rep.min_found >= -tol;
    let mut r = Report::new(json!({
        "mode": "float", "min_found": rep.min_found, "argmin_log": rep.argmin, "nonnegative_within_tol": nonneg,
    }))
    .columns(&["min found", "argmin (log)"]);
    r.row(vec![format!("{:.12e}", rep.min_found), format!("{:?}", rep.argmin)]);
    r.note(format!("nonnegative within {tol:e}: {}", if nonneg { "yes" } else { "no" }));
    Ok(r)
}
