//! The `gvf` command line: argument parsing and JSON reports.
//!
//! Exit codes: 0 on success, 1 for a negative verdict, a failed check or a
//! computation that could not be certified, 2 for usage, parse and input
//! errors.

mod json;

use std::ffi::OsString;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::logreal::{ExtLogReal, LogReal, Quantity};
use crate::arith::rational::{fmt_rational, parse_rational, Rational};
use crate::error::{GvfError, Result};
use crate::field::{FieldElem, FieldKind};
use crate::places::{arch_places, support};
use crate::positivity::{
    is_positive, search_neg_certificate, verify_neg_certificate, NegCertificate, SearchBounds,
};
use crate::structure::{
    gauge_inequalities, gvf_fpt, gvf_q, gvf_qz, gvf_quad, height_axioms,
    renormalization_invariance, uniqueness_witness, BatteryReport, DiscreteGvf,
};
use crate::tropical::{divisor_from_term, parse_tropical};

pub use json::SCHEMA_VERSION;

#[derive(Parser, Debug)]
#[command(name = "gvf", version, about = "Heights, places and positivity over globally valued fields")]
struct Cli {
    /// Base field: Q, Fp, Qsqrt or Qz.
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// Characteristic for `--field Fp`.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Squarefree `d` for `--field Qsqrt`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    d: Option<i64>,
    /// Structure parameters, `r=<rational>`.
    #[arg(long, global = true, default_value = "r=1")]
    structure: String,
    /// Report the height of the zero tuple as -1.
    #[arg(long, global = true)]
    logic: bool,
    /// Seed for randomized batteries.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Height of a tuple of elements.
    Height {
        #[arg(required = true, allow_hyphen_values = true)]
        elements: Vec<String>,
    },
    /// Local term of a tropical term at a tuple.
    Localterm {
        term: String,
        #[arg(required = true, allow_hyphen_values = true)]
        elements: Vec<String>,
    },
    /// Product-formula sum of one element.
    Prodcheck {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Positivity of the divisor of a tropical term at a tuple.
    Positivity {
        term: String,
        #[arg(required = true, allow_hyphen_values = true)]
        elements: Vec<String>,
    },
    /// Negativity certificates.
    Certificate {
        #[command(subcommand)]
        action: CertificateAction,
    },
    /// Galois-invariant extension to a quadratic field.
    Extend {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Local measure of `a` and the Radon-Nikodym check against `b`.
    Measures {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// Tropical term in x1 = a, x2 = b to integrate against the measure of `a`.
        #[arg(long)]
        beta: Option<String>,
    },
    /// Random renormalizations leave heights and local terms unchanged.
    RenormTest {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Kernel dimension of the place/element matrix over Q(i) or Q(sqrt 2).
    Uniqueness {
        #[arg(long, default_value_t = 20)]
        bound: u64,
    },
    /// Randomized height-axiom and gauge-inequality batteries.
    Axioms {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CertificateAction {
    /// Cheapest certificate within the bounds.
    Search {
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        #[arg(long, default_value_t = 8)]
        coeff: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(required = true, allow_hyphen_values = true)]
        elements: Vec<String>,
    },
    /// Checks a certificate given as JSON text or a path to a JSON file.
    Verify { certificate: String },
}

/// Certificate file format.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CertificateJson {
    pub a: Vec<String>,
    pub epsilon: String,
    pub coefficients: Vec<CoefficientJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CoefficientJson {
    pub s: Vec<u32>,
    pub m: i64,
}

/// Exit code and text produced by one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Context {
    kind: FieldKind,
    r: Rational,
    logic: bool,
    seed: u64,
}

fn usage(msg: impl Into<String>) -> GvfError {
    GvfError::Domain(msg.into())
}

fn parse_kind(cli: &Cli) -> Result<FieldKind> {
    match cli.field.to_ascii_lowercase().as_str() {
        "q" => Ok(FieldKind::Q),
        "fp" | "f_p" | "fpt" => FieldKind::fp(cli.p.ok_or_else(|| usage("--field Fp needs --p"))?),
        "qsqrt" | "quad" => FieldKind::quad(cli.d.ok_or_else(|| usage("--field Qsqrt needs --d"))?),
        "qz" => Ok(FieldKind::Qz),
        other => Err(usage(format!("unknown field {other:?}; expected Q, Fp, Qsqrt or Qz"))),
    }
}

fn parse_structure(text: &str) -> Result<Rational> {
    let mut r = Rational::one();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part.split_once('=') {
            Some(("r", v)) => r = parse_rational(v.trim())?,
            _ => return Err(usage(format!("unknown structure parameter {part:?}; expected r=<rational>"))),
        }
    }
    Ok(r)
}

impl Context {
    fn gvf(&self) -> Result<DiscreteGvf> {
        match self.kind {
            FieldKind::Q => gvf_q(self.r.clone()),
            FieldKind::Fp(p) => gvf_fpt(p, self.r.clone()),
            FieldKind::Quad(d) => {
                if !self.r.is_one() {
                    return Err(usage("quadratic structures extend r = 1"));
                }
                gvf_quad(d)
            }
            FieldKind::Qz => {
                if !self.r.is_one() {
                    return Err(usage("the Q(z) structure has no r parameter"));
                }
                Ok(gvf_qz())
            }
        }
    }

    fn elem(&self, s: &str) -> Result<FieldElem> {
        FieldElem::parse(self.kind, s)
    }

    fn elems(&self, v: &[String]) -> Result<Vec<FieldElem>> {
        v.iter().map(|s| self.elem(s)).collect()
    }

    fn report(&self, command: &str, body: Value) -> Value {
        let mut out = json!({
            "schemaVersion": SCHEMA_VERSION,
            "command": command,
            "field": self.kind.to_string(),
        });
        if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
            o.extend(b);
        }
        out
    }
}

fn battery(r: &BatteryReport) -> Value {
    let checks: serde_json::Map<String, Value> = r
        .checks
        .iter()
        .map(|(k, (p, f))| (k.clone(), json!({ "passed": p, "failed": f })))
        .collect();
    json!({ "checks": checks, "failures": r.failures, "passed": r.passed(), "failed": r.failed() })
}

fn exact_zero(q: &Quantity) -> Result<bool> {
    Ok(match q {
        Quantity::Exact(ExtLogReal::Finite(x)) => x.sign()? == 0,
        Quantity::Exact(_) => false,
        Quantity::Approx(i) => i.contains(0.0) && i.width() <= crate::arith::circle::DEFAULT_CIRCLE_TOL,
    })
}

fn certificate_json(a: &[FieldElem], c: &NegCertificate) -> CertificateJson {
    CertificateJson {
        a: a.iter().map(|x| x.to_string()).collect(),
        epsilon: fmt_rational(&c.epsilon),
        coefficients: c
            .coefficients
            .iter()
            .map(|(s, m)| CoefficientJson {
                s: s.clone(),
                m: m.try_into().unwrap_or(i64::MAX),
            })
            .collect(),
    }
}

fn read_certificate(text: &str) -> Result<CertificateJson> {
    let raw = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        std::fs::read_to_string(text).map_err(|e| usage(format!("cannot read {text}: {e}")))?
    };
    serde_json::from_str(&raw).map_err(|e| GvfError::Parse {
        offset: e.column(),
        message: format!("certificate JSON: {e}"),
    })
}

fn execute(cli: &Cli) -> Result<(i32, Value)> {
    let ctx = Context {
        kind: parse_kind(cli)?,
        r: parse_structure(&cli.structure)?,
        logic: cli.logic,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Height { elements } => {
            let g = ctx.gvf()?;
            let a = ctx.elems(elements)?;
            let h = g.height(&a)?;
            let value = match (&h, ctx.logic) {
                (Quantity::Exact(ExtLogReal::NegInf), true) => {
                    let mut v = json::logreal(&LogReal::units(Rational::from_integer((-1).into())));
                    v["convention"] = json!("logic");
                    v
                }
                _ => json::quantity(&h),
            };
            Ok((0, ctx.report("height", json!({
                "structure": g.to_string(),
                "elements": json::elems(&a),
                "height": value,
            }))))
        }
        Command::Localterm { term, elements } => {
            let g = ctx.gvf()?;
            let t = parse_tropical(term)?;
            let a = ctx.elems(elements)?;
            let v = g.local_term(&t, &a)?;
            Ok((0, ctx.report("localterm", json!({
                "structure": g.to_string(),
                "term": t.to_string(),
                "elements": json::elems(&a),
                "value": json::quantity(&v),
            }))))
        }
        Command::Prodcheck { element } => {
            let g = ctx.gvf()?;
            let a = ctx.elem(element)?;
            let parts = g.product_formula_parts(&a)?;
            let holds = exact_zero(&parts.total)?;
            Ok((if holds { 0 } else { 1 }, ctx.report("prodcheck", json!({
                "structure": g.to_string(),
                "element": json::elem(&a),
                "finite": json::quantity(&parts.finite),
                "archimedean": json::quantity(&parts.arch),
                "points": json::quantity(&parts.points),
                "total": json::quantity(&parts.total),
                "holds": holds,
            }))))
        }
        Command::Positivity { term, elements } => {
            let t = parse_tropical(term)?;
            let a = ctx.elems(elements)?;
            let alpha = divisor_from_term(&t, &a)?;
            let v = is_positive(&alpha)?;
            let witness = v.witness.as_ref().map(|(p, x)| json!({ "place": json::place(p), "value": json::logreal(x) }));
            Ok((if v.is_positive { 0 } else { 1 }, ctx.report("positivity", json!({
                "term": t.to_string(),
                "elements": json::elems(&a),
                "divisor": alpha.to_string(),
                "isPositive": v.is_positive,
                "isZero": v.is_zero,
                "witness": witness,
                "checkedPlaces": v.checked_places.iter().map(json::place).collect::<Vec<_>>(),
            }))))
        }
        Command::Certificate { action } => match action {
            CertificateAction::Search { epsilon, degree, coeff, budget, elements } => {
                let a = ctx.elems(elements)?;
                let eps = parse_rational(epsilon)?;
                let mut bounds = SearchBounds::new(*degree, *coeff);
                if let Some(b) = budget {
                    bounds.node_budget = *b;
                }
                let base = json!({
                    "elements": json::elems(&a),
                    "epsilon": fmt_rational(&eps),
                    "degreeBound": degree,
                    "coeffBound": coeff,
                });
                let (code, extra) = match search_neg_certificate(&a, &eps, bounds) {
                    Ok(Some(c)) => (0, json!({
                        "found": true,
                        "certificate": certificate_json(&a, &c),
                        "cost": c.cost_approx(),
                        "verified": verify_neg_certificate(&a, &c)?,
                    })),
                    Ok(None) => (1, json!({ "found": false, "exhaustive": true })),
                    Err(GvfError::BudgetExceeded { nodes }) => {
                        (1, json!({ "found": false, "exhaustive": false, "budgetExceeded": nodes }))
                    }
                    Err(e) => return Err(e),
                };
                let mut body = base;
                if let (Value::Object(o), Value::Object(x)) = (&mut body, extra) {
                    o.extend(x);
                }
                Ok((code, ctx.report("certificate search", body)))
            }
            CertificateAction::Verify { certificate } => {
                let c = read_certificate(certificate)?;
                let a = ctx.elems(&c.a)?;
                let cert = NegCertificate {
                    coefficients: c.coefficients.iter().map(|x| (x.s.clone(), BigInt::from(x.m))).collect(),
                    epsilon: parse_rational(&c.epsilon)?,
                };
                let ok = verify_neg_certificate(&a, &cert)?;
                Ok((if ok { 0 } else { 1 }, ctx.report("certificate verify", json!({
                    "elements": json::elems(&a),
                    "epsilon": fmt_rational(&cert.epsilon),
                    "cost": cert.cost_approx(),
                    "valid": ok,
                }))))
            }
        },
        Command::Extend { element } => {
            if !matches!(ctx.kind, FieldKind::Quad(_)) {
                return Err(usage("extend works over --field Qsqrt"));
            }
            let g = ctx.gvf()?;
            let a = ctx.elem(element)?;
            let ht = g.ht(&a)?;
            let ht_conj = g.ht(&a.conj())?;
            let invariant = g.check_galois_invariance(&a)?;
            let pf = if a.is_zero() { None } else { Some(g.product_formula_sum(&a)?) };
            let pf_ok = pf.as_ref().map_or(Ok(true), exact_zero)?;
            let mut restricted = Value::Null;
            let mut restrict_ok = true;
            if let Some(q) = a.as_rational() {
                let h = gvf_q(Rational::one())?.ht(&FieldElem::Q(q.clone()))?;
                restrict_ok = h == ht;
                restricted = json::quantity(&h);
            }
            let mut places = arch_places(ctx.kind);
            if !a.is_zero() {
                places.extend(support(&a)?);
            }
            places.sort();
            places.dedup();
            let values = places
                .iter()
                .map(|p| Ok(json!({ "place": json::place(p), "value": json::ext(&g.value(p, &a)?) })))
                .collect::<Result<Vec<_>>>()?;
            let ok = invariant && pf_ok && restrict_ok;
            Ok((if ok { 0 } else { 1 }, ctx.report("extend", json!({
                "element": json::elem(&a),
                "conjugate": json::elem(&a.conj()),
                "ht": json::quantity(&ht),
                "htConjugate": json::quantity(&ht_conj),
                "galoisInvariant": invariant,
                "productFormula": pf.as_ref().map(json::quantity),
                "restrictedHeight": restricted,
                "restrictionAgrees": restrict_ok,
                "places": values,
            }))))
        }
        Command::Measures { a, b, beta } => {
            let g = ctx.gvf()?;
            let (a, b) = (ctx.elem(a)?, ctx.elem(b)?);
            let m = g.local_measure(&a)?;
            let beta = match beta {
                Some(t) => Some(divisor_from_term(&parse_tropical(t)?, &[a.clone(), b.clone()])?),
                None => None,
            };
            let rn = g.rn_check(&a, &b, beta.as_ref())?;
            let balance = g.mass_balance(&a)?;
            let ok = rn.holds() && balance;
            let atoms: Vec<Value> = m
                .atoms
                .iter()
                .map(|x| json!({ "place": json::place(&x.place), "value": json::logreal(&x.value), "mass": json::logreal(&x.mass) }))
                .collect();
            let shared: Vec<Value> = rn
                .shared
                .iter()
                .map(|(p, q)| json!({ "place": json::place(p), "ratio": q.as_ref().map(json::rational) }))
                .collect();
            Ok((if ok { 0 } else { 1 }, ctx.report("measures", json!({
                "structure": g.to_string(),
                "anchor": json::elem(&a),
                "atoms": atoms,
                "totalMass": json::logreal(&m.total_mass()),
                "rn": { "shared": shared, "ratiosHold": rn.ratios_hold, "integralHolds": rn.integral_holds },
                "massBalance": balance,
                "holds": ok,
            }))))
        }
        Command::RenormTest { trials } => {
            let g = ctx.gvf()?;
            let r = renormalization_invariance(&g, *trials, ctx.seed)?;
            Ok((if r.failed() == 0 { 0 } else { 1 }, ctx.report("renorm-test", json!({
                "structure": g.to_string(),
                "seed": ctx.seed,
                "trials": trials,
                "report": battery(&r),
            }))))
        }
        Command::Uniqueness { bound } => {
            let d = match ctx.kind {
                FieldKind::Quad(d) => d,
                _ => cli.d.ok_or_else(|| usage("uniqueness needs --d -1 or --d 2"))?,
            };
            let r = uniqueness_witness(d, *bound)?;
            Ok((if r.kernel_dim == 1 { 0 } else { 1 }, json!({
                "schemaVersion": SCHEMA_VERSION,
                "command": "uniqueness",
                "d": d,
                "bound": bound,
                "places": r.places.iter().map(json::place).collect::<Vec<_>>(),
                "elements": json::elems(&r.elements),
                "rank": r.rank,
                "kernelDimension": r.kernel_dim,
                "productFormulaInKernel": r.ones_in_kernel,
            })))
        }
        Command::Axioms { trials } => {
            let g = ctx.gvf()?;
            let h = height_axioms(&g, *trials, ctx.seed)?;
            let gauge = gauge_inequalities(&g, *trials, ctx.seed.wrapping_add(1))?;
            let ok = h.failed() == 0 && gauge.failed() == 0;
            Ok((if ok { 0 } else { 1 }, ctx.report("axioms", json!({
                "structure": g.to_string(),
                "seed": ctx.seed,
                "trials": trials,
                "heightAxioms": battery(&h),
                "gauge": battery(&gauge),
            }))))
        }
    }
}

fn error_code(e: &GvfError) -> i32 {
    match e {
        GvfError::NonConvergence(_) | GvfError::BudgetExceeded { .. } | GvfError::NonExact(_) => 1,
        _ => 2,
    }
}

const VALUE_FLAGS: &[&str] = &[
    "--field", "--p", "--d", "--structure", "--seed", "--trials", "--bound", "--beta", "--epsilon",
    "--degree", "--coeff", "--budget",
];

/// Moves options in front of the positional arguments, so that elements such
/// as `-1/2` can be followed by options without being read as flags.
fn hoist_options(args: Vec<OsString>) -> Vec<OsString> {
    let mut it = args.into_iter();
    let mut out: Vec<OsString> = it.next().into_iter().collect();
    let (mut options, mut path, mut positional) = (Vec::new(), Vec::new(), Vec::new());
    let mut rest = it.peekable();
    while let Some(a) = rest.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--" {
            positional.extend(rest.by_ref());
            break;
        }
        if s.starts_with("--") {
            let takes_value = VALUE_FLAGS.contains(&s.as_str());
            options.push(a);
            if takes_value {
                options.extend(rest.next());
            }
        } else if s == "-h" || s == "-V" {
            options.push(a);
        } else if path.is_empty() || (matches!(path.as_slice(), [p] if p == "certificate" || p == "help") && positional.is_empty()) {
            path.push(s);
        } else {
            positional.push(a);
        }
    }
    out.extend(path.into_iter().map(OsString::from));
    out.extend(options);
    if !positional.is_empty() {
        out.push("--".into());
        out.extend(positional);
    }
    out
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = hoist_options(args.into_iter().map(Into::into).collect());
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((code, v)) => CliOutput {
            code,
            stdout: serde_json::to_string_pretty(&v).expect("serializable") + "\n",
            stderr: String::new(),
        },
        Err(e) => {
            let v = json!({ "schemaVersion": SCHEMA_VERSION, "error": json::error(&e) });
            CliOutput {
                code: error_code(&e),
                stdout: serde_json::to_string_pretty(&v).expect("serializable") + "\n",
                stderr: format!("gvf: {e}\n"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> CliOutput {
        run(std::iter::once("gvf").chain(args.iter().copied()))
    }

    fn parse(o: &CliOutput) -> Value {
        serde_json::from_str(&o.stdout).unwrap()
    }

    #[test]
    fn known_height() {
        let o = go(&["height", "--field", "Q", "--structure", "r=1", "2", "3"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v = parse(&o);
        assert_eq!(v["schemaVersion"], 1);
        assert_eq!(v["height"]["logTerms"][0]["p"], 3);
        assert_eq!(v["height"]["logTerms"][0]["q"], "1/1");
        assert!((v["height"]["approx"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn known_prodcheck_qz() {
        let o = go(&["prodcheck", "--field", "Qz", "z-2"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        let v = parse(&o);
        let (lo, hi) = (v["total"]["lo"].as_f64().unwrap(), v["total"]["hi"].as_f64().unwrap());
        assert!(lo <= 0.0 && 0.0 <= hi && hi - lo <= 1e-6);
    }

    #[test]
    fn known_positivity_zero() {
        let o = go(&["positivity", "--field", "Q", "max(x1,0) - max(x1,x2,0)", "6", "2", "3"]);
        let v = parse(&o);
        assert_eq!(o.code, 0, "{}", o.stdout);
        assert_eq!(v["isPositive"], true);
        assert_eq!(v["isZero"], true);
    }

    #[test]
    fn negative_numbers_and_errors() {
        let o = go(&["height", "-1/2", "3"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let o = go(&["localterm", "max(x1,", "2"]);
        assert_eq!(o.code, 2);
        assert_eq!(parse(&o)["error"]["column"], 8);
        let o = go(&["height", "--field", "Zz", "1"]);
        assert_eq!(o.code, 2);
        assert_eq!(go(&["bogus"]).code, 2);
        let o = go(&["height", "--logic", "0", "0"]);
        assert_eq!(parse(&o)["height"]["units"], "-1/1");
        let o = go(&["height", "0", "0"]);
        assert_eq!(parse(&o)["height"]["infinite"], "-inf");
    }

    #[test]
    fn certificate_round_trip() {
        let o = go(&["certificate", "search", "--epsilon", "2", "--degree", "2", "--coeff", "4", "1/2"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        let v = parse(&o);
        let cert = serde_json::to_string(&v["certificate"]).unwrap();
        let o = go(&["certificate", "verify", &cert]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        let o = go(&["certificate", "search", "--epsilon", "1", "2"]);
        assert_eq!(o.code, 1);
        assert_eq!(parse(&o)["exhaustive"], true);
    }

    #[test]
    fn other_commands() {
        assert_eq!(go(&["extend", "--field", "Qsqrt", "--d", "-1", "1+i"]).code, 0);
        assert_eq!(go(&["measures", "2", "4", "--beta", "max(x1, 0)"]).code, 0);
        assert_eq!(go(&["renorm-test", "--trials", "5"]).code, 0);
        assert_eq!(go(&["uniqueness", "--d", "2"]).code, 0);
        assert_eq!(go(&["axioms", "--trials", "10", "--field", "Fp", "--p", "3"]).code, 0);
    }
}
