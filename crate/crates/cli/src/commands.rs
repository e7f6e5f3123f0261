//! The work behind each subcommand, shared by single runs and sweeps.

use chowlab::constructions::{blowup_transfer_check, bundle_model, product_model, BlowupData};
use chowlab::lefschetz::{
    check_c0_injectivity, check_conj1, check_conj2, check_hl_cohomology, check_hl_target, check_kunnemann,
    check_triangular_descent, two_imply_one,
};
use chowlab::ring::parse_rational;
use chowlab::sympow::{extract_system, pbig_det, pbig_matrix, strong_stability_check, SymPowMode, SymPowRing};
use chowlab::{Element, LefschetzReport, Model, ModelKind};
use clap::ValueEnum;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::report::Outcome;
use crate::spec::{self, ModelSpecFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Conj1,
    Conj2,
    Hl,
    Kunnemann,
    Descent,
    C0,
    TwoImplyOne,
}

impl CheckName {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Conj1 => "conj1",
            CheckName::Conj2 => "conj2",
            CheckName::Hl => "hl",
            CheckName::Kunnemann => "kunnemann",
            CheckName::Descent => "descent",
            CheckName::C0 => "c0",
            CheckName::TwoImplyOne => "two-imply-one",
        }
    }
}

/// Parameters of one check; which ones are required depends on the check.
#[derive(Clone, Debug, Default)]
pub struct CheckParams {
    pub p: Option<u32>,
    pub s: Option<i64>,
    pub divisor: Option<String>,
}

fn verdict_line(passed: bool, summary: &str) -> String {
    format!("{} {summary}", if passed { "PASS" } else { "FAIL" })
}

fn lefschetz_outcome(command: &str, r: &LefschetzReport) -> Outcome {
    let mut o = Outcome::new(command, &r.model, r.passed(), r.verdict.as_str())
        .param("p", r.p)
        .param("divisor", &r.divisor)
        .line(verdict_line(r.passed(), &r.summary()))
        .result(r);
    if let Some(s) = r.s {
        o = o.param("s", s);
    }
    for k in &r.kernel {
        o = o.line(format!("  kernel: {k}"));
    }
    for n in &r.notes {
        o = o.line(format!("  note: {n}"));
    }
    o.dims = Some((r.domain_dim, r.codomain_dim, r.rank));
    o
}

fn require<T>(value: Option<T>, flag: &str, check: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("`{check}` needs --{flag}")))
}

/// `--divisor` parsed in the model's ring, or the model's ample class.
pub fn divisor(model: &Model, expr: Option<&str>) -> CliResult<Element> {
    match expr {
        Some(e) => Ok(model.ring().parse(e)?),
        None => model.ample().cloned().ok_or_else(|| {
            CliError::Usage(format!("model `{}` has no ample class; pass --divisor", model.id()))
        }),
    }
}

pub fn run_check(check: CheckName, model: &Model, params: &CheckParams) -> CliResult<Outcome> {
    let name = check.as_str();
    let command = format!("check {name}");
    let div = || divisor(model, params.divisor.as_deref());
    let p = || require(params.p, "p", name);
    let outcome = match check {
        CheckName::Conj1 => lefschetz_outcome(&command, &check_conj1(model, &div()?, p()?)?),
        CheckName::Conj2 => lefschetz_outcome(&command, &check_conj2(model, &div()?, p()?)?),
        CheckName::Hl if model.kind() == ModelKind::Cohomology => {
            let k = require(params.p, "k", name)?;
            lefschetz_outcome(&command, &check_hl_cohomology(model, k)?)
        }
        CheckName::Hl => lefschetz_outcome(&command, &check_hl_target(model, &div()?, p()?)?),
        CheckName::Kunnemann => {
            let s = require(params.s, "s", name)?;
            lefschetz_outcome(&command, &check_kunnemann(model, p()?, s)?)
        }
        CheckName::C0 => lefschetz_outcome(&command, &check_c0_injectivity(model, p()?)?),
        CheckName::Descent => {
            let d = match &params.divisor {
                Some(e) => Some(model.ring().parse(e)?),
                None => None,
            };
            let r = check_triangular_descent(model, d.as_ref(), p()?)?;
            let mut o = lefschetz_outcome(&command, &r.report).result(&r);
            o.passed = r.passed();
            o.lines[0] = verdict_line(r.passed(), &r.report.summary());
            o
        }
        CheckName::TwoImplyOne => {
            let d = div()?;
            let p = p()?;
            let r = two_imply_one(model, &d, p)?;
            let verdict = if r.holds() { "holds" } else { "counterexample" };
            let summary = format!(
                "two-imply-one {} p={p} D={}: {verdict} (conj2 {}, hl {}, conj1 {})",
                r.model, r.divisor, r.conj2, r.hl, r.conj1
            );
            Outcome::new(&command, &r.model, r.holds(), verdict)
                .param("p", p)
                .param("divisor", &r.divisor)
                .line(verdict_line(r.holds(), &summary))
                .result(&r)
        }
    };
    Ok(outcome)
}

pub fn minimal_equation(g: u32, mode: SymPowMode) -> CliResult<Outcome> {
    let s = SymPowRing::new(g, mode)?;
    let ring = s.ring();
    let eq = s.minimal_equation()?;
    let nf = ring.normal_form(&eq);
    let passed = nf.is_zero();
    let text = format!("{} = 0", ring.format(&eq));
    Ok(Outcome::new("sympow minimal-eq", &s.id(), passed, if passed { "reduces-to-zero" } else { "nonzero" })
        .param("g", g)
        .param("mode", mode.as_str())
        .line(verdict_line(passed, &format!("minimal-eq {}: {text}", s.id())))
        .line(format!("  normal form: {}", ring.format(&nf)))
        .result(json!({ "equation": text, "normal_form": ring.format(&nf) })))
}

pub fn system(g: u32, p: u32) -> CliResult<Outcome> {
    let r = extract_system(g, p)?;
    let ring = r.ring();
    let coefficients: Vec<String> = r
        .coefficients
        .iter()
        .map(|(j, c)| format!("z^{j}: {}", ring.format(c)))
        .collect();
    let mut o = Outcome::new("sympow extract-system", &format!("extract:g={g},p={p}"), true, "extracted")
        .param("g", g)
        .param("p", p)
        .line(format!("extract-system g={g} p={p} k={}", r.k));
    for s in r.substitution_strings() {
        o = o.line(format!("  substitute: {s}"));
    }
    for e in r.expression_strings() {
        o = o.line(format!("  solve: {e}"));
    }
    for e in r.equation_strings() {
        o = o.line(format!("  equation: {e} = 0"));
    }
    Ok(o.result(json!({
        "k": r.k,
        "coefficients": coefficients,
        "substitutions": r.substitution_strings(),
        "expressions": r.expression_strings(),
        "equations": r.equation_strings(),
    })))
}

pub fn pbig(g: u32, p: u32) -> CliResult<Outcome> {
    let m = pbig_matrix(g, p)?;
    let det = pbig_det(g, p)?;
    let passed = !det.is_zero();
    let rows: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect();
    let mut o = Outcome::new("sympow pbig", &format!("pbig:g={g},p={p}"), passed, if passed { "nonzero" } else { "zero" })
        .param("g", g)
        .param("p", p)
        .line(verdict_line(passed, &format!("pbig g={g} p={p}: det = {det}")));
    for row in &rows {
        o = o.line(format!("  [{}]", row.join(", ")));
    }
    o.dims = Some((m.cols(), m.rows(), if passed { m.cols() } else { 0 }));
    Ok(o.result(json!({ "matrix": rows, "det": det.to_string() })))
}

pub fn stability(g: u32, n: u32, p: u32) -> CliResult<Outcome> {
    let r = strong_stability_check(g, n, p)?;
    Ok(lefschetz_outcome("sympow stability", &r).param("n", n).param("g", g))
}

/// `projective:n=N` as used by the blow-up command.
fn projective_dim(spec: &str, flag: &str) -> CliResult<u32> {
    let model = spec::resolve(spec)?;
    if model.kind() != ModelKind::Projective {
        return Err(CliError::Usage(format!(
            "--{flag}: only projective:n=N is supported, got `{spec}`"
        )));
    }
    Ok(model.dim())
}

pub struct BlowupArgs<'a> {
    pub x: &'a str,
    pub center: &'a str,
    pub r: Option<u32>,
    pub l: &'a str,
    pub m: &'a str,
    pub p: u32,
}

pub fn blowup_check(args: &BlowupArgs) -> CliResult<Outcome> {
    let n = projective_dim(args.x, "x")?;
    let d = projective_dim(args.center, "center")?;
    let data = BlowupData::linear(n, d)?;
    if let Some(r) = args.r {
        if r != data.r() {
            return Err(CliError::Usage(format!(
                "--r {r} does not match the center: a P^{d} in P^{n} has r = {}",
                data.r()
            )));
        }
    }
    let l = data.x().parse(args.l)?;
    let m = parse_rational(args.m)?;
    let report = blowup_transfer_check(&data, &l, &m, args.p)?;
    Ok(lefschetz_outcome("blowup check", &report).param("m", m))
}

fn model_outcome(command: &str, model: &Model) -> Outcome {
    let ring = model.ring();
    let dims: Vec<String> = ring.dimensions().iter().map(ToString::to_string).collect();
    let mut o = Outcome::new(command, model.id(), true, "built")
        .line(format!("{} (dimension {}): ranks [{}]", model.id(), model.dim(), dims.join(", ")));
    let gens: Vec<String> = ring
        .generators()
        .iter()
        .map(|g| format!("{}(codim {}, weight {}{})", g.name, g.codim, g.kweight, if g.is_odd() { ", odd" } else { "" }))
        .collect();
    o = o.line(format!("  generators: {}", gens.join(" ")));
    for (lead, rhs) in ring.relation_strings() {
        o = o.line(format!("  {lead} = {rhs}"));
    }
    if let Some(a) = ring.ample() {
        o = o.line(format!("  ample: {}", ring.format(a)));
    }
    if let Some(cl) = model.cycle_class() {
        o = o.line(format!("  cycle class into {} (grade x{})", cl.target.label(), cl.map.scale()));
    }
    o.result(ModelSpecFile::from_model(model))
}

pub fn show(model: &Model) -> Outcome {
    model_outcome("model show", model)
}

pub fn bundle(base: &Model, chern: &[String], r: u32, ample: Option<&str>) -> CliResult<Outcome> {
    let chern = chern
        .iter()
        .map(|c| base.ring().parse(c))
        .collect::<chowlab::Result<Vec<_>>>()?;
    let model = bundle_model(base, &chern, r, ample)?;
    Ok(model_outcome("bundle build", &model).param("r", r))
}

pub fn product(base: &Model, m: u32) -> CliResult<Outcome> {
    let model = product_model(base, m)?;
    Ok(model_outcome("product", &model).param("pm", m))
}
