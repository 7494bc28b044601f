use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use toric_chow::builtins::Builtin;
use toric_chow::cohomology::{self, orbit_class_table, OrbitClassTable};
use toric_chow::series::{
    equivariant_series, euler_from_classes, find_positive_functional, orbit_weights, pushforward_j,
};
use toric_chow::{
    fan, ClassVector, CohomologyError, CohomologyPresentation, Fan, MonoidElement, TruncatedSeries,
    WeightFunctional,
};

use crate::{FanSource, Format};

/// What a command prints on stdout and the exit code it asks for.
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

/// A mathematical failure: exit code 1 rather than 2.
#[derive(Debug)]
pub struct Mismatch(pub String);

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Mismatch {}

pub fn load_fan(source: &FanSource) -> Result<Fan> {
    if let Some(path) = &source.fan {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        fan::parse_fan(&text).with_context(|| format!("parsing {}", path.display()))
    } else {
        let spec = source.builtin.as_deref().expect("clap enforces one fan source");
        let b: Builtin = spec.parse()?;
        Ok(b.build()?)
    }
}

fn projectivity_notice() {
    eprintln!("note: the toric variety is assumed projective; this is not checked");
}

pub fn presentation(fan: &Fan) -> Result<CohomologyPresentation> {
    match cohomology::build_presentation(fan) {
        Ok(pres) => Ok(pres),
        Err(CohomologyError::InvalidFan(report)) => {
            for v in &report.violations {
                eprintln!("violation: {v}");
            }
            Err(Mismatch("fan is not smooth and complete".into()).into())
        }
        Err(e) => Err(e.into()),
    }
}

fn load(source: &FanSource, p: usize) -> Result<(CohomologyPresentation, OrbitClassTable)> {
    let fan = load_fan(source)?;
    projectivity_notice();
    let pres = presentation(&fan)?;
    let table = orbit_class_table(&pres, p)?;
    Ok((pres, table))
}

/// Basis labels: `t` in codimension 0, `t1..tr` otherwise.
pub fn label(p: usize) -> impl Fn(usize) -> String {
    move |i| if p == 0 { "t".to_string() } else { format!("t{}", i + 1) }
}

fn class_json(c: &ClassVector) -> Value {
    json!(c.coords)
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn series_rows(s: &TruncatedSeries) -> Vec<(Vec<i64>, String)> {
    s.terms().map(|(k, c)| (k.coords().to_vec(), c.to_string())).collect()
}

fn tuple(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn validate(source: &FanSource, format: Format) -> Result<Outcome> {
    let fan = load_fan(source)?;
    projectivity_notice();
    let report = fan::validate_fan(&fan);
    let ok = report.is_smooth_complete();
    let stdout = match format {
        Format::Json => render_json(&serde_json::to_value(&report)?),
        Format::Text => {
            let yes = |b: bool| if b { "yes" } else { "no" };
            let mut s = String::new();
            writeln!(s, "simplicial: {}", yes(report.simplicial))?;
            writeln!(s, "smooth: {}", yes(report.smooth))?;
            writeln!(s, "complete: {}", yes(report.complete))?;
            writeln!(s, "face property: {}", yes(report.face_property))?;
            for v in &report.violations {
                writeln!(s, "violation: {v}")?;
            }
            writeln!(s, "{}", if ok { "valid" } else { "invalid" })?;
            s
        }
    };
    Ok(Outcome {
        stdout,
        code: if ok { 0 } else { 1 },
    })
}

pub fn orbits(source: &FanSource, p: usize, format: Format) -> Result<Outcome> {
    let (pres, table) = load(source, p)?;
    let stdout = match format {
        Format::Json => render_json(&json!({
            "p": p,
            "dim": pres.dim(),
            "orbits": table.rows.iter().map(|r| json!({
                "cone": r.cone.rays(),
                "monomial": r.monomial.to_string(),
                "class": class_json(&r.class),
            })).collect::<Vec<_>>(),
            "grouped": grouped_json(&table),
        })),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "codimension {p}: {} orbits", table.num_orbits())?;
            for r in &table.rows {
                writeln!(s, "  {}  {}  {}", r.cone, r.monomial, r.class)?;
            }
            writeln!(s, "grouped:")?;
            for (c, m) in &table.grouped {
                writeln!(s, "  {c} x{m}")?;
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

fn grouped_json(table: &OrbitClassTable) -> Vec<Value> {
    table
        .grouped
        .iter()
        .map(|(c, m)| json!({"class": class_json(c), "multiplicity": m}))
        .collect()
}

pub fn euler(
    source: &FanSource,
    p: usize,
    max_weight: Option<u64>,
    weights: Option<Vec<i64>>,
    format: Format,
    show_basis: bool,
) -> Result<Outcome> {
    let (pres, table) = load(source, p)?;
    let expr = euler_from_classes(&table.grouped)?;
    let generators = expr.generators();
    let ell = match weights {
        Some(w) => {
            if w.len() != expr.dim() {
                bail!("--weights has {} entries, the class lattice has rank {}", w.len(), expr.dim());
            }
            let ell = WeightFunctional::new(w);
            ell.check_positive(&generators)?;
            ell
        }
        None => find_positive_functional(&generators)?,
    };
    let expansion = max_weight.map(|d| expr.expand(&ell, d)).transpose()?;
    let closed = expr.closed_form(label(p));
    let basis: Vec<(String, String)> = pres
        .class_basis(p)?
        .iter()
        .enumerate()
        .map(|(i, poly)| (label(p)(i), poly.to_string()))
        .collect();

    let stdout = match format {
        Format::Json => {
            let mut v = json!({
                "p": p,
                "dim": pres.dim(),
                "rank": expr.dim(),
                "closed_form": closed,
                "factors": grouped_json(&table),
                "num_factors": expr.num_factors(),
                "weight": ell.coeffs(),
                "basis": basis.iter().map(|(l, b)| json!({"label": l, "class": b})).collect::<Vec<_>>(),
            });
            if let Some(s) = &expansion {
                v["max_weight"] = json!(s.bound());
                v["expansion"] = series_rows(s)
                    .into_iter()
                    .map(|(lambda, chi)| json!({"lambda": lambda, "chi": chi}))
                    .collect();
            }
            render_json(&v)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "E_{p} = {closed}")?;
            if show_basis {
                writeln!(s, "basis:")?;
                for (l, b) in &basis {
                    writeln!(s, "  {l} = {b}")?;
                }
            }
            writeln!(s, "factors:")?;
            for (c, m) in &table.grouped {
                writeln!(s, "  {c} x{m}")?;
            }
            writeln!(s, "weight: {}", tuple(ell.coeffs()))?;
            if let Some(series) = &expansion {
                writeln!(s, "max weight: {}", series.bound())?;
                writeln!(s, "expansion:")?;
                for (lambda, chi) in series_rows(series) {
                    writeln!(s, "  {}  {chi}", tuple(&lambda))?;
                }
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}

pub fn equivariant(source: &FanSource, p: usize, max_weight: Option<u64>, format: Format) -> Result<Outcome> {
    let (pres, table) = load(source, p)?;
    let classes: Vec<MonoidElement> = table.classes().iter().map(MonoidElement::from).collect();
    let eq = equivariant_series(classes.len());
    let closed = eq.closed_form(|i| format!("u{}", i + 1));

    // Expansion of E^T and the check J(E^T) = E at the requested weight.
    let mut check = None;
    if let Some(d) = max_weight {
        let expr = euler_from_classes(&table.grouped)?;
        let ell = find_positive_functional(&expr.generators())?;
        let w = orbit_weights(&classes, &ell)?;
        let e_t = eq.expand(&w, d)?;
        let zero_one = e_t.terms().all(|(_, c)| *c == 1.into());
        let j = pushforward_j(&e_t, &classes, &ell, d)?;
        let agrees = j == expr.expand(&ell, d)?;
        check = Some((d, e_t.len(), zero_one, agrees));
    }

    let stdout = match format {
        Format::Json => {
            let mut v = json!({
                "p": p,
                "dim": pres.dim(),
                "closed_form": closed,
                "num_factors": classes.len(),
                "orbits": table.rows.iter().enumerate().map(|(i, r)| json!({
                    "generator": format!("u{}", i + 1),
                    "cone": r.cone.rays(),
                    "monomial": r.monomial.to_string(),
                    "class": class_json(&r.class),
                })).collect::<Vec<_>>(),
            });
            if let Some((d, terms, zero_one, agrees)) = check {
                v["max_weight"] = json!(d);
                v["equivariant_terms"] = json!(terms);
                v["coefficients_zero_one"] = json!(zero_one);
                v["pushforward_matches"] = json!(agrees);
            }
            render_json(&v)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "E_{p}^T = {closed}")?;
            writeln!(s, "factors: {}", classes.len())?;
            writeln!(s, "orbits:")?;
            for (i, r) in table.rows.iter().enumerate() {
                writeln!(s, "  u{}  {}  {}  {}", i + 1, r.cone, r.monomial, r.class)?;
            }
            if let Some((d, terms, zero_one, agrees)) = check {
                writeln!(s, "max weight: {d}")?;
                writeln!(s, "equivariant terms: {terms}")?;
                writeln!(s, "coefficients in {{0,1}}: {}", if zero_one { "yes" } else { "no" })?;
                writeln!(s, "J(E^T) = E: {}", if agrees { "yes" } else { "no" })?;
            }
            s
        }
    };
    let failed = matches!(check, Some((_, _, zo, ag)) if !(zo && ag));
    Ok(Outcome {
        stdout,
        code: if failed { 1 } else { 0 },
    })
}

pub fn gen(spec: &str, output: Option<&Path>) -> Result<Outcome> {
    let b: Builtin = spec.parse()?;
    let mut json = b.build()?.to_json();
    json.push('\n');
    match output {
        Some(path) => {
            fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(json)),
    }
}
