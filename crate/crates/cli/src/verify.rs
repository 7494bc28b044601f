//! Recomputes the worked examples: projective spaces, products of two
//! projective spaces, the blow-up of P^n at a point and Hirzebruch surfaces,
//! plus the pushforward identity and the zero-cycle series on every builtin.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{bail, Result};
use num_bigint::BigInt;
use serde::Serialize;
use toric_chow::builtins::Builtin;
use toric_chow::cohomology::{class_of, orbit_class_table};
use toric_chow::series::{equivariant_series, euler_from_classes, find_positive_functional, orbit_weights, pushforward_j};
use toric_chow::{ClassVector, CohomologyPresentation, MonoidElement, Monomial, Polynomial};

use crate::commands::{presentation, Outcome};
use crate::Format;

const EXAMPLES: [&str; 6] = ["pn", "product", "blowup", "hirzebruch", "equivariant", "zero-cycles"];

#[derive(Serialize)]
struct Check {
    example: &'static str,
    name: String,
    expected: String,
    actual: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

type Grouping = BTreeMap<ClassVector, usize>;

fn render(g: &Grouping) -> String {
    let parts: Vec<String> = g.iter().map(|(c, m)| format!("{c}^{m}")).collect();
    parts.join(" ")
}

fn binom(n: i64, k: i64) -> usize {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1i64, |r, i| r * (n - i) / (i + 1)) as usize
}

fn pres(b: Builtin) -> Result<CohomologyPresentation> {
    presentation(&b.build()?)
}

fn grouped(pres: &CohomologyPresentation, p: usize) -> Result<Grouping> {
    Ok(orbit_class_table(pres, p)?.grouped)
}

fn single(p: usize, m: usize) -> Grouping {
    BTreeMap::from([(ClassVector::new(p, vec![1]), m)])
}

fn monomial_class(pres: &CohomologyPresentation, exps: Vec<u32>, p: usize) -> Result<ClassVector> {
    Ok(class_of(pres, &Polynomial::monomial(Monomial::new(exps)), p)?)
}

struct Run {
    checks: Vec<Check>,
}

impl Run {
    fn grouping(&mut self, example: &'static str, name: String, expected: &Grouping, actual: &Grouping) {
        self.checks.push(Check {
            example,
            name,
            expected: render(expected),
            actual: render(actual),
            pass: expected == actual,
            note: None,
        });
    }

    fn pn(&mut self) -> Result<()> {
        for n in 1..=5i64 {
            let pr = pres(Builtin::Pn(n))?;
            let nu = n as usize;
            for p in 0..=nu {
                let want = single(p, binom(n + 1, p as i64));
                self.grouping("pn", format!("P^{n} p={p}"), &want, &grouped(&pr, p)?);
            }
            // dimension q lives in codimension n-q
            for q in 0..=nu {
                let want = single(nu - q, binom(n + 1, q as i64 + 1));
                self.grouping("pn", format!("P^{n} dimension {q}"), &want, &grouped(&pr, nu - q)?);
            }
        }
        Ok(())
    }

    fn product(&mut self) -> Result<()> {
        for (n, m) in [(1i64, 1i64), (2, 1), (1, 2), (2, 2)] {
            let pr = pres(Builtin::Product(n, m))?;
            let k = (n + m + 2) as usize;
            let (a, b) = ((n + m) as usize, (n + m + 1) as usize);
            for p in 0..=(n + m) as usize {
                let mut want = Grouping::new();
                for kk in 0..=n.min(p as i64) {
                    let l = p as i64 - kk;
                    if l > m {
                        continue;
                    }
                    let mut e = vec![0u32; k];
                    e[a] = kk as u32;
                    e[b] = l as u32;
                    *want.entry(monomial_class(&pr, e, p)?).or_insert(0) += binom(n + 1, kk) * binom(m + 1, l);
                }
                self.grouping("product", format!("P^{n}xP^{m} p={p}"), &want, &grouped(&pr, p)?);
            }
        }
        Ok(())
    }

    fn blowup(&mut self) -> Result<()> {
        for n in [2i64, 3] {
            let pr = pres(Builtin::BlowupPn(n))?;
            let nu = n as usize;
            let k = nu + 2;
            for p in 0..nu {
                let mut t1 = vec![0u32; k];
                t1[nu] = p as u32;
                let c1 = monomial_class(&pr, t1, p)?;
                let mut want = Grouping::from([(c1.clone(), binom(n, p as i64))]);
                if p >= 1 {
                    let mut t2 = vec![0u32; k];
                    t2[nu] = p as u32 - 1;
                    t2[nu + 1] = 1;
                    let c2 = monomial_class(&pr, t2, p)?;
                    let sum = ClassVector::new(p, c1.coords.iter().zip(&c2.coords).map(|(x, y)| x + y).collect());
                    *want.entry(c2).or_insert(0) += binom(n, p as i64 - 1);
                    *want.entry(sum).or_insert(0) += binom(n, p as i64 - 1);
                }
                self.grouping("blowup", format!("blow-up of P^{n} p={p}"), &want, &grouped(&pr, p)?);
            }
            let cones = pr.fan().max_cones().len();
            self.grouping("blowup", format!("blow-up of P^{n} p={n}"), &single(nu, 2 * nu), &grouped(&pr, nu)?);
            let last = self.checks.last_mut().expect("just pushed");
            last.note = Some(format!(
                "orbit count {cones}; the published exponent C(n+2,p) = {} is not asserted",
                binom(n + 2, n)
            ));
        }
        Ok(())
    }

    fn hirzebruch(&mut self) -> Result<()> {
        for a in 1..=3i64 {
            let pr = pres(Builtin::Hirzebruch(a))?;
            self.grouping("hirzebruch", format!("H_{a} p=2"), &single(2, 4), &grouped(&pr, 2)?);
            let want = Grouping::from([
                (ClassVector::new(1, vec![1, 0]), 2),
                (ClassVector::new(1, vec![0, 1]), 1),
                (ClassVector::new(1, vec![-a, 1]), 1),
            ]);
            self.grouping("hirzebruch", format!("H_{a} p=1"), &want, &grouped(&pr, 1)?);
            self.grouping("hirzebruch", format!("H_{a} p=0"), &single(0, 1), &grouped(&pr, 0)?);
        }
        Ok(())
    }

    fn equivariant(&mut self) -> Result<()> {
        let bound = 4;
        for b in Builtin::small() {
            let pr = pres(b)?;
            for p in 0..=pr.dim() {
                let table = orbit_class_table(&pr, p)?;
                let classes: Vec<MonoidElement> = table.classes().iter().map(MonoidElement::from).collect();
                let expr = euler_from_classes(&table.grouped)?;
                let ell = find_positive_functional(&expr.generators())?;
                let e_p = expr.expand(&ell, bound)?;
                let e_t = equivariant_series(classes.len()).expand(&orbit_weights(&classes, &ell)?, bound)?;
                let zero_one = e_t.terms().all(|(_, c)| *c == BigInt::from(1));
                let j = pushforward_j(&e_t, &classes, &ell, bound)?;
                let agrees = j == e_p;
                self.checks.push(Check {
                    example: "equivariant",
                    name: format!("{b} p={p} D={bound}"),
                    expected: "J(E^T) = E, coefficients in {0,1}".into(),
                    actual: format!(
                        "J(E^T) {} E, coefficients {}",
                        if agrees { "=" } else { "!=" },
                        if zero_one { "in {0,1}" } else { "outside {0,1}" }
                    ),
                    pass: agrees && zero_one,
                    note: None,
                });
            }
        }
        Ok(())
    }

    fn zero_cycles(&mut self) -> Result<()> {
        for b in Builtin::small() {
            let pr = pres(b)?;
            let n = pr.dim();
            let chi = pr.fan().max_cones().len();
            self.grouping("zero-cycles", format!("{b} p={n}"), &single(n, chi), &grouped(&pr, n)?);
        }
        Ok(())
    }
}

fn normalize(name: &str) -> Option<&'static str> {
    let lower = name.to_ascii_lowercase();
    let key = match lower.as_str() {
        "i" | "1" => "pn",
        "ii" | "2" => "product",
        "iii" | "3" | "blowup-pn" | "blow-up" => "blowup",
        "iv" | "4" => "hirzebruch",
        "zero" | "zerocycles" => "zero-cycles",
        other => other,
    };
    EXAMPLES.iter().copied().find(|e| *e == key)
}

pub fn run(only: Option<&str>, format: Format) -> Result<Outcome> {
    let selected: Vec<&str> = match only {
        Some(name) => match normalize(name) {
            Some(e) => vec![e],
            None => bail!("unknown example {name:?}; expected one of {}", EXAMPLES.join(", ")),
        },
        None => EXAMPLES.to_vec(),
    };
    let mut run = Run { checks: Vec::new() };
    for e in &selected {
        match *e {
            "pn" => run.pn()?,
            "product" => run.product()?,
            "blowup" => run.blowup()?,
            "hirzebruch" => run.hirzebruch()?,
            "equivariant" => run.equivariant()?,
            _ => run.zero_cycles()?,
        }
    }
    let failed = run.checks.iter().filter(|c| !c.pass).count();
    let stdout = match format {
        Format::Json => {
            let v = serde_json::json!({
                "checks": run.checks,
                "passed": run.checks.len() - failed,
                "failed": failed,
            });
            let mut s = serde_json::to_string_pretty(&v)?;
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &run.checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                write!(s, "[{status}] {} {}: expected {}, got {}", c.example, c.name, c.expected, c.actual)?;
                if let Some(note) = &c.note {
                    write!(s, " ({note})")?;
                }
                s.push('\n');
            }
            writeln!(s, "{} passed, {failed} failed", run.checks.len() - failed)?;
            s
        }
    };
    Ok(Outcome {
        stdout,
        code: if failed > 0 { 1 } else { 0 },
    })
}
