//! Injectivity and isomorphism checks for multiplication by powers of a divisor.
//!
//! Every check assembles one exact matrix, computes its rank and kernel, and records the
//! outcome in a [`LefschetzReport`] scoped to the model it ran on.

use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::abelian;
use crate::error::{Error, Result};
use crate::linalg::{rank, rank_and_kernel, Matrix, Rational};
use crate::model::{Model, ModelKind};
use crate::ring::{Element, GradedRing, LinearMapMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Conj1,
    Conj2,
    HardLefschetz,
    Kunnemann,
    Descent,
    StrongStability,
    BlowupTransfer,
    CycleClassInjectivity,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Conj1 => "conj1",
            CheckKind::Conj2 => "conj2",
            CheckKind::HardLefschetz => "hl",
            CheckKind::Kunnemann => "kunnemann",
            CheckKind::Descent => "descent",
            CheckKind::StrongStability => "stability",
            CheckKind::BlowupTransfer => "blowup-transfer",
            CheckKind::CycleClassInjectivity => "c0",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Injective,
    NotInjective,
    Iso,
    NotIso,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Injective => "injective",
            Verdict::NotInjective => "not-injective",
            Verdict::Iso => "iso",
            Verdict::NotIso => "not-iso",
        }
    }
}

/// Outcome of one check. `elapsed` is not serialized so that report files depend only on
/// the inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LefschetzReport {
    pub model: String,
    pub check: CheckKind,
    pub p: u32,
    pub s: Option<i64>,
    pub exponent: u32,
    pub divisor: String,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub rank: usize,
    pub verdict: Verdict,
    pub surjective: bool,
    pub kernel: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Isomorphism checks use the same record; `verdict` is `Iso`/`NotIso` and `surjective`
/// is meaningful.
pub type IsoReport = LefschetzReport;

impl LefschetzReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Injective | Verdict::Iso)
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let s = self.s.map(|s| format!(" s={s}")).unwrap_or_default();
        format!(
            "{} {} p={}{s} exp={} D={}: {} ({}x{}, rank {})",
            self.check.as_str(),
            self.model,
            self.p,
            self.exponent,
            self.divisor,
            self.verdict.as_str(),
            self.codomain_dim,
            self.domain_dim,
            self.rank
        )
    }
}

/// Metadata for a report; the numbers come from the matrix.
#[derive(Clone, Debug)]
pub struct ReportInput {
    pub model: String,
    pub check: CheckKind,
    pub p: u32,
    pub s: Option<i64>,
    pub exponent: u32,
    pub divisor: String,
    pub iso: bool,
}

fn build_report(input: ReportInput, matrix: &Matrix, render: &dyn Fn(&[Rational]) -> String, start: Instant) -> LefschetzReport {
    let (rk, kernel) = rank_and_kernel(matrix);
    let (dom, cod) = (matrix.cols(), matrix.rows());
    let injective = rk == dom;
    let surjective = rk == cod;
    let verdict = match (input.iso, injective && surjective, injective) {
        (true, true, _) => Verdict::Iso,
        (true, false, _) => Verdict::NotIso,
        (false, _, true) => Verdict::Injective,
        (false, _, false) => Verdict::NotInjective,
    };
    LefschetzReport {
        model: input.model,
        check: input.check,
        p: input.p,
        s: input.s,
        exponent: input.exponent,
        divisor: input.divisor,
        domain_dim: dom,
        codomain_dim: cod,
        rank: rk,
        verdict,
        surjective,
        kernel: kernel.iter().map(|v| render(v)).collect(),
        notes: Vec::new(),
        elapsed: start.elapsed(),
    }
}

/// Report for a matrix whose domain basis vectors carry the given labels.
pub fn report_from_matrix(input: ReportInput, matrix: &Matrix, labels: &[String], start: Instant) -> LefschetzReport {
    let render = |v: &[Rational]| {
        let parts: Vec<String> = v
            .iter()
            .zip(labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| format!("({c})*{l}"))
            .collect();
        parts.join(" + ")
    };
    build_report(input, matrix, &render, start)
}

/// Report for a multiplication operator on a ring; kernel vectors are rendered as elements.
pub fn injectivity_report(input: ReportInput, ring: &GradedRing, lm: &LinearMapMatrix, start: Instant) -> LefschetzReport {
    let render = |v: &[Rational]| ring.format(&ring.combination(&lm.domain_basis, v));
    build_report(input, &lm.matrix, &render, start)
}

fn require_divisor(ring: &GradedRing, d: &Element) -> Result<()> {
    if d.ring_id() != ring.id() {
        return Err(Error::MixedPresentations);
    }
    match ring.degree(d)? {
        Some(1) => Ok(()),
        _ => Err(Error::Hypothesis(
            "the divisor must be a nonzero codimension-1 class".into(),
        )),
    }
}

/// Conjecture-1 check: `·D^{n-2p}: CH^p -> CH^{n-p}` is injective.
pub fn check_conj1(model: &Model, d: &Element, p: u32) -> Result<LefschetzReport> {
    let start = Instant::now();
    let ring = model.ring();
    require_divisor(ring, d)?;
    let n = model.dim();
    if 2 * p > n {
        return Err(Error::Hypothesis(format!("n = {n} < 2p = {}", 2 * p)));
    }
    let e = n - 2 * p;
    let lm = ring.operator_matrix(&ring.pow(d, e)?, e, p)?;
    Ok(injectivity_report(
        ReportInput {
            model: model.id().to_string(),
            check: CheckKind::Conj1,
            p,
            s: None,
            exponent: e,
            divisor: ring.format(d),
            iso: false,
        },
        ring,
        &lm,
        start,
    ))
}

/// Conjecture-2 check: `·D^{n-2p+1}` is injective on `CH^p_hom = ker(cl)`.
pub fn check_conj2(model: &Model, d: &Element, p: u32) -> Result<LefschetzReport> {
    let start = Instant::now();
    let ring = model.ring();
    require_divisor(ring, d)?;
    let n = model.dim();
    if 2 * p > n + 1 {
        return Err(Error::Hypothesis(format!("n = {n} < 2p - 1 = {}", 2 * p - 1)));
    }
    let e = n + 1 - 2 * p;
    let hom = model.hom_basis(p)?;
    let lm = ring.operator_matrix(&ring.pow(d, e)?, e, p)?;
    let dom = lm.domain_basis.len();
    let hom_matrix = Matrix::from_columns(dom, &hom)?;
    let restricted = lm.matrix.mul(&hom_matrix)?;
    let render = |v: &[Rational]| {
        let coords = hom_matrix.mul_vec(v).expect("kernel vector length matches");
        ring.format(&ring.combination(&lm.domain_basis, &coords))
    };
    let mut report = build_report(
        ReportInput {
            model: model.id().to_string(),
            check: CheckKind::Conj2,
            p,
            s: None,
            exponent: e,
            divisor: ring.format(d),
            iso: false,
        },
        &restricted,
        &render,
        start,
    );
    report.notes.push(format!("dim CH^{p}_hom = {}", hom.len()));
    Ok(report)
}

/// Hard Lefschetz on the exterior cohomology model: `∪ω^{g-k}: H^k -> H^{2g-k}` for
/// `k <= g`. For `k > g` the map `H^{2g-k} -> H^k` is checked instead.
pub fn check_hl_cohomology(model: &Model, k: u32) -> Result<IsoReport> {
    let start = Instant::now();
    let g = match (model.kind(), model.g()) {
        (ModelKind::Cohomology, Some(g)) => g,
        _ => {
            return Err(Error::WrongModel {
                expected: "cohomology",
                got: model.id().to_string(),
            })
        }
    };
    if k > 2 * g {
        return Err(Error::CodimOutOfRange {
            codim: k as i64,
            max: 2 * g,
        });
    }
    let ring = model.ring();
    let lo = k.min(2 * g - k);
    let e = g - lo;
    let omega = abelian::omega(ring, g)?;
    let lm = ring.operator_matrix(&ring.pow(&omega, e)?, 2 * e, lo)?;
    let mut report = injectivity_report(
        ReportInput {
            model: model.id().to_string(),
            check: CheckKind::HardLefschetz,
            p: k,
            s: None,
            exponent: e,
            divisor: "omega".into(),
            iso: true,
        },
        ring,
        &lm,
        start,
    );
    report.notes.push(format!("degree {lo} -> {}", 2 * g - lo));
    Ok(report)
}

/// Hard Lefschetz on the cycle class target: `∪cl(D)^{n-2p}` from grade `σp` to
/// `σ(n-p)`, `σ` the grade scale of the cycle class map.
pub fn check_hl_target(model: &Model, d: &Element, p: u32) -> Result<IsoReport> {
    let start = Instant::now();
    require_divisor(model.ring(), d)?;
    let cl = model
        .cycle_class()
        .ok_or_else(|| Error::NoCycleClass(model.id().to_string()))?;
    let n = model.dim();
    if 2 * p > n {
        return Err(Error::Hypothesis(format!("n = {n} < 2p = {}", 2 * p)));
    }
    let e = n - 2 * p;
    let sigma = cl.map.scale();
    let t = &cl.target;
    let c = model.cl(d)?;
    let lm = t.operator_matrix(&t.pow(&c, e)?, sigma * e, sigma * p)?;
    Ok(injectivity_report(
        ReportInput {
            model: format!("cl({})", model.id()),
            check: CheckKind::HardLefschetz,
            p,
            s: None,
            exponent: e,
            divisor: t.format(&c),
            iso: true,
        },
        t,
        &lm,
        start,
    ))
}

fn require_divisor_model(model: &Model) -> Result<u32> {
    match (model.kind(), model.g()) {
        (ModelKind::Divisor, Some(g)) => Ok(g),
        _ => Err(Error::WrongModel {
            expected: "divisor",
            got: model.id().to_string(),
        }),
    }
}

/// Positions of basis monomials with Beauville index `s`.
fn slice(ring: &GradedRing, basis: &[crate::ring::Monomial], s: i64) -> Vec<usize> {
    (0..basis.len())
        .filter(|&i| ring.beauville_index(&basis[i]) == s)
        .collect()
}

/// `·D0^{g+s-2p}: CH^p_(s) -> CH^{g+s-p}_(s)` is an isomorphism.
pub fn check_kunnemann(model: &Model, p: u32, s: i64) -> Result<IsoReport> {
    let start = Instant::now();
    let g = require_divisor_model(model)?;
    let (pi, gi) = (p as i64, g as i64);
    if p > g || s < pi - gi || s > pi || 2 * pi - s > gi {
        return Err(Error::Hypothesis(format!(
            "need 0 <= p <= g, p-g <= s <= p and 0 <= 2p-s <= g, got g={g}, p={p}, s={s}"
        )));
    }
    let e = (gi + s - 2 * pi) as u32;
    let ring = model.ring();
    let d0 = ring.gen("D0")?;
    let lm = ring.operator_matrix(&ring.pow(&d0, e)?, e, p)?;
    let cols = slice(ring, &lm.domain_basis, s);
    let rows = slice(ring, &lm.codomain_basis, s);
    let others: Vec<usize> = (0..lm.codomain_basis.len()).filter(|i| !rows.contains(i)).collect();
    if !lm.matrix.select(&others, &cols).is_zero() {
        return Err(Error::Consistency(
            "multiplication by D0 does not preserve the Beauville index".into(),
        ));
    }
    let sub = LinearMapMatrix {
        domain_basis: cols.iter().map(|&i| lm.domain_basis[i].clone()).collect(),
        codomain_basis: rows.iter().map(|&i| lm.codomain_basis[i].clone()).collect(),
        matrix: lm.matrix.select(&rows, &cols),
    };
    Ok(injectivity_report(
        ReportInput {
            model: model.id().to_string(),
            check: CheckKind::Kunnemann,
            p,
            s: Some(s),
            exponent: e,
            divisor: "D0".into(),
            iso: true,
        },
        ring,
        &sub,
        start,
    ))
}

/// Admissible `(p, s)` pairs of [`check_kunnemann`] for a given `g`.
pub fn kunnemann_range(g: u32) -> Vec<(u32, i64)> {
    let gi = g as i64;
    let mut out = Vec::new();
    for p in 0..=g {
        let pi = p as i64;
        for s in (pi - gi)..=pi {
            if (0..=gi).contains(&(2 * pi - s)) {
                out.push((p, s));
            }
        }
    }
    out
}

/// Result of the triangular descent check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentReport {
    pub report: LefschetzReport,
    /// With bases ordered by Beauville index, the matrix of `·D^{g-2p}` is block lower
    /// triangular.
    pub block_triangular: bool,
    /// Its diagonal blocks are the matrices of `·D0^{g-2p}` on each index slice.
    pub diagonal_matches: bool,
    /// Every diagonal block is injective.
    pub diagonal_injective: bool,
}

impl DescentReport {
    /// The structure holds, and diagonal injectivity agrees with the full rank computation.
    pub fn passed(&self) -> bool {
        self.block_triangular
            && self.diagonal_matches
            && (!self.diagonal_injective || self.report.passed())
            && self.report.passed()
    }
}

/// `D = π_0(D) + (higher index terms)`: injectivity of `·D^{g-2p}` on `CH^p` follows from
/// injectivity of `·D0^{g-2p}` on each index slice once the matrix is block triangular.
/// `d` defaults to the model's ample class.
pub fn check_triangular_descent(model: &Model, d: Option<&Element>, p: u32) -> Result<DescentReport> {
    let start = Instant::now();
    let g = require_divisor_model(model)?;
    let ring = model.ring();
    let d = match d {
        Some(d) => d.clone(),
        None => model
            .ample()
            .cloned()
            .ok_or_else(|| Error::InvalidModel("no divisor given and no ample class".into()))?,
    };
    require_divisor(ring, &d)?;
    if 2 * p > g {
        return Err(Error::Hypothesis(format!("g = {g} < 2p = {}", 2 * p)));
    }
    let e = g - 2 * p;
    let d0 = abelian::beauville_project(ring, &d, 0)?;
    let full = ring.operator_matrix(&ring.pow(&d, e)?, e, p)?;
    let diag = ring.operator_matrix(&ring.pow(&d0, e)?, e, p)?;

    let order = |basis: &[crate::ring::Monomial]| {
        let mut idx: Vec<usize> = (0..basis.len()).collect();
        idx.sort_by_key(|&i| ring.beauville_index(&basis[i]));
        idx
    };
    let cols = order(&full.domain_basis);
    let rows = order(&full.codomain_basis);
    let m = full.matrix.select(&rows, &cols);
    let m0 = diag.matrix.select(&rows, &cols);
    let col_s: Vec<i64> = cols.iter().map(|&i| ring.beauville_index(&full.domain_basis[i])).collect();
    let row_s: Vec<i64> = rows.iter().map(|&i| ring.beauville_index(&full.codomain_basis[i])).collect();

    let mut block_triangular = true;
    let mut diagonal_matches = true;
    for (j, &sj) in col_s.iter().enumerate() {
        for (i, &si) in row_s.iter().enumerate() {
            if si < sj && !m[(i, j)].is_zero() {
                block_triangular = false;
            }
            if si == sj && m[(i, j)] != m0[(i, j)] {
                diagonal_matches = false;
            }
        }
    }
    let mut indices: Vec<i64> = col_s.clone();
    indices.dedup();
    let diagonal_injective = indices.iter().all(|&s| {
        let c: Vec<usize> = (0..col_s.len()).filter(|&j| col_s[j] == s).collect();
        let r: Vec<usize> = (0..row_s.len()).filter(|&i| row_s[i] == s).collect();
        rank(&m0.select(&r, &c)) == c.len()
    });

    let mut report = injectivity_report(
        ReportInput {
            model: model.id().to_string(),
            check: CheckKind::Descent,
            p,
            s: None,
            exponent: e,
            divisor: ring.format(&d),
            iso: false,
        },
        ring,
        &full,
        start,
    );
    report.notes.push(format!("D0 = {}", ring.format(&d0)));
    report.notes.push(format!("block triangular: {block_triangular}"));
    report.notes.push(format!("diagonal blocks equal D0 slices: {diagonal_matches}"));
    report.notes.push(format!("diagonal blocks injective: {diagonal_injective}"));
    Ok(DescentReport {
        report,
        block_triangular,
        diagonal_matches,
        diagonal_injective,
    })
}

/// The cycle class map is injective on codimension `p`.
pub fn check_c0_injectivity(model: &Model, p: u32) -> Result<LefschetzReport> {
    let start = Instant::now();
    let lm = model.cl_matrix(p)?;
    Ok(injectivity_report(
        ReportInput {
            model: model.id().to_string(),
            check: CheckKind::CycleClassInjectivity,
            p,
            s: None,
            exponent: 0,
            divisor: "cl".into(),
            iso: false,
        },
        model.ring(),
        &lm,
        start,
    ))
}

/// Outcome of checking "Conjecture 2 and cohomological Hard Lefschetz imply Conjecture 1"
/// on one `(model, D, p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImplicationOutcome {
    pub model: String,
    pub divisor: String,
    pub p: u32,
    pub conj2: bool,
    pub hl: bool,
    pub conj1: bool,
}

impl ImplicationOutcome {
    pub fn holds(&self) -> bool {
        !(self.conj2 && self.hl) || self.conj1
    }
}

pub fn two_imply_one(model: &Model, d: &Element, p: u32) -> Result<ImplicationOutcome> {
    let conj2 = check_conj2(model, d, p)?.passed();
    let hl = check_hl_target(model, d, p)?.passed();
    let conj1 = check_conj1(model, d, p)?.passed();
    Ok(ImplicationOutcome {
        model: model.id().to_string(),
        divisor: model.ring().format(d),
        p,
        conj2,
        hl,
        conj1,
    })
}
