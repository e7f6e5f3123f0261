//! The symmetric product `C^{(2g-1)}` of a genus-`g` curve as a projective bundle over its
//! Jacobian: `CH(J)[z]` modulo the monic relation `Σ_{k=0}^g v_k z^{g-k} = 0`.
//!
//! Two coefficient conventions are supported:
//! - formal: `v1..vg` are free generators (codim `k`), with coefficient codimension at most `g`;
//! - theta: `v_k = (-1)^k Θ^k / k!` inside the theta model.
//!
//! Smaller symmetric products `C^{(n)}` are handled through their images under the
//! embedding pushforward `(i_n)_*(z_n^e) = z^{2g-1-n+e}`.

use std::time::Instant;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian;
use crate::constructions::bundle;
use crate::error::{Error, Result};
use crate::lefschetz::{self, CheckKind, LefschetzReport};
use crate::linalg::{determinant, factorial, rat, Matrix, Rational};
use crate::model::{Model, ModelKind};
use crate::ring::{Element, GeneratorSpec, GradedRing, Monomial, Terms};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymPowMode {
    Formal,
    Theta,
}

impl std::str::FromStr for SymPowMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formal" => Ok(SymPowMode::Formal),
            "theta" => Ok(SymPowMode::Theta),
            other => Err(Error::InvalidModel(format!(
                "unknown symmetric-product mode `{other}` (expected formal or theta)"
            ))),
        }
    }
}

impl SymPowMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SymPowMode::Formal => "formal",
            SymPowMode::Theta => "theta",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SymPowRing {
    g: u32,
    mode: SymPowMode,
    ring: GradedRing,
}

/// `z^g -> -Σ_{k>=1} v_k z^{g-k}` where `v_k` is given by `v(k)` as terms over `ngens`
/// generators; `z` is the last generator.
fn minimal_rule_rhs(g: u32, ngens: usize, v: impl Fn(u32) -> Terms) -> Terms {
    let z = ngens - 1;
    let mut rhs = Terms::new();
    for k in 1..=g {
        for (m, c) in v(k) {
            let m = m.padded(ngens);
            let mut e = m.exponents().to_vec();
            e[z] = g - k;
            *rhs.entry(Monomial::new(e)).or_insert_with(Rational::zero) -= c;
        }
    }
    rhs.retain(|_, c| !c.is_zero());
    rhs
}

impl SymPowRing {
    pub fn new(g: u32, mode: SymPowMode) -> Result<Self> {
        if g < 1 {
            return Err(Error::InvalidModel("symmetric products need g >= 1".into()));
        }
        let label = format!("sympow:g={g},mode={}", mode.as_str());
        let ring = match mode {
            SymPowMode::Theta => {
                let rhs = minimal_rule_rhs(g, 2, |k| {
                    [(Monomial::new(vec![k, 0]), abelian::theta_v_coefficient(k))].into()
                });
                GradedRing::builder(label, 2 * g - 1)
                    .generator(GeneratorSpec::even("theta", 1, 2))
                    .generator(GeneratorSpec::even("z", 1, 2))
                    .relation(&format!("theta^{}", g + 1), "0")
                    .power_rule("z", g, rhs)
                    .ample("z")
                    .build()?
            }
            SymPowMode::Formal => {
                let n = g as usize + 1;
                let rhs = minimal_rule_rhs(g, n, |k| {
                    [(Monomial::generator(n, k as usize - 1, 1), Rational::one())].into()
                });
                let mut b = GradedRing::builder(label, 2 * g - 1);
                let names: Vec<String> = (1..=g).map(|k| format!("v{k}")).collect();
                for (k, name) in (1..=g).zip(&names) {
                    b = b.generator(GeneratorSpec::even(name, k, 2 * k));
                }
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                b.generator(GeneratorSpec::even("z", 1, 2))
                    .bound(&refs, Some(g), None)
                    .power_rule("z", g, rhs)
                    .ample("z")
                    .build()?
            }
        };
        Ok(SymPowRing { g, mode, ring })
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn mode(&self) -> SymPowMode {
        self.mode
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn id(&self) -> String {
        format!("sympow:g={},mode={}", self.g, self.mode.as_str())
    }

    /// `v_k` in this ring's coefficient convention; `v_0 = 1`.
    pub fn v(&self, k: u32) -> Result<Element> {
        if k > self.g {
            return Err(Error::CodimOutOfRange {
                codim: k as i64,
                max: self.g,
            });
        }
        if k == 0 {
            return Ok(self.ring.one());
        }
        match self.mode {
            SymPowMode::Theta => Ok(self.ring.monomial(
                Monomial::new(vec![k, 0]),
                abelian::theta_v_coefficient(k),
            )),
            SymPowMode::Formal => self.ring.gen(&format!("v{k}")),
        }
    }

    /// `Σ_{k=0}^g v_k z^{g-k}`, returned unreduced. Its normal form is zero.
    pub fn minimal_equation(&self) -> Result<Element> {
        let n = self.ring.ngens();
        let z = n - 1;
        let mut terms = Terms::new();
        for k in 0..=self.g {
            for (m, c) in self.v(k)?.terms() {
                let mut e = m.exponents().to_vec();
                e[z] += self.g - k;
                *terms.entry(Monomial::new(e)).or_insert_with(Rational::zero) += c;
            }
        }
        Ok(self.ring.raw(terms))
    }

    /// `(i_n)_* Σ_j a_j z_n^{e_j} = Σ_j a_j z^{2g-1-n+e_j}`, in normal form.
    pub fn i_pushforward(&self, n: u32, x: &[(Element, u32)]) -> Result<Element> {
        let top = 2 * self.g - 1;
        if n < 1 || n > top {
            return Err(Error::Hypothesis(format!("n = {n} must lie in 1..={top}")));
        }
        let z = self.ring.gen("z")?;
        let mut acc = self.ring.zero();
        for (a, e) in x {
            if *e > n {
                return Err(Error::Hypothesis(format!(
                    "z_n^{e} vanishes on a variety of dimension {n}"
                )));
            }
            let zp = self.ring.pow(&z, top - n + e)?;
            acc = &acc + &self.ring.multiply(a, &zp)?;
        }
        Ok(acc)
    }

    /// The theta-mode ring as a model, with cycle class into `H^*(J)[ξ]` sending
    /// `Θ ↦ ω`, `z ↦ ξ`, where `ξ` satisfies the cohomological minimal equation.
    pub fn model(&self) -> Result<Model> {
        if self.mode != SymPowMode::Theta {
            return Err(Error::WrongModel {
                expected: "theta-mode symmetric product",
                got: self.id(),
            });
        }
        let g = self.g;
        let h = abelian::cohomology_ring(g)?;
        let w = abelian::omega(&h, g)?;
        let chern = (1..=g)
            .map(|k| {
                let wk = h.pow(&w, k)?;
                Ok(wk.scale(&abelian::theta_v_coefficient(k)))
            })
            .collect::<Result<Vec<_>>>()?;
        let target = bundle::adjoin_bundle(&h, "xi", 2, &chern, g - 1)?;
        let images = vec![
            target.parse(&h.format(&w))?,
            target.gen("xi")?,
        ];
        Model::new(self.id(), ModelKind::Sympow, Some(g), self.ring.clone()).with_cycle_class(target, images, 2)
    }
}

/// Injectivity of `·z^{2g-n}` on codimension `p` of the theta-mode ring, the concrete form
/// of `φ_n^*` being an isomorphism on `CH^p(C^{(n)})`.
pub fn strong_stability_check(g: u32, n: u32, p: u32) -> Result<LefschetzReport> {
    let start = Instant::now();
    if 2 * p + 1 > n || n + 1 > 2 * g {
        return Err(Error::Hypothesis(format!(
            "need 2p+1 <= n <= 2g-1, got g={g}, n={n}, p={p}"
        )));
    }
    let s = SymPowRing::new(g, SymPowMode::Theta)?;
    let ring = s.ring();
    let e = 2 * g - n;
    let z = ring.gen("z")?;
    let ze = ring.pow(&z, e)?;
    let lm = ring.operator_matrix(&ze, e, p)?;
    let divisor = format!("z^{e}");
    Ok(lefschetz::injectivity_report(
        lefschetz::ReportInput {
            model: s.id(),
            check: CheckKind::StrongStability,
            p,
            s: None,
            exponent: e,
            divisor,
            iso: false,
        },
        ring,
        &lm,
        start,
    ))
}

/// Linear system extracted from `(i_n)_* (α z_n) = 0` for `α = Σ_{i=0}^p y_i z_n^{p-i}`.
#[derive(Clone, Debug)]
pub struct SystemReport {
    pub g: u32,
    pub p: u32,
    pub k: u32,
    ring: GradedRing,
    /// Coefficient of `z^j` in the reduced pushforward, before any substitution.
    pub coefficients: Vec<(u32, Element)>,
    /// `y_i = Σ_{j<=i} a_j v_{i-j}` for `i = 1..=k`.
    pub substitutions: Vec<(u32, Element)>,
    /// Equations in the `a`'s that must vanish.
    pub equations: Vec<Element>,
    /// `y_m` solved in terms of the `a`'s and `v`'s, for `m = k+1..=p`.
    pub expressions: Vec<(u32, Element)>,
}

impl SystemReport {
    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn equation_strings(&self) -> Vec<String> {
        self.equations.iter().map(|e| self.ring.format(e)).collect()
    }

    pub fn expression_strings(&self) -> Vec<String> {
        self.expressions
            .iter()
            .map(|(m, e)| format!("y{m} = {}", self.ring.format(e)))
            .collect()
    }

    pub fn substitution_strings(&self) -> Vec<String> {
        self.substitutions
            .iter()
            .map(|(i, e)| format!("y{i} = {}", self.ring.format(e)))
            .collect()
    }
}

/// Ring with generators `a1..ak, y1..yp, v1..vg, z` used for system extraction.
pub fn extraction_ring(g: u32, p: u32, k: u32) -> Result<GradedRing> {
    let mut names: Vec<(String, u32)> = Vec::new();
    names.extend((1..=k).map(|i| (format!("a{i}"), i)));
    names.extend((1..=p).map(|i| (format!("y{i}"), i)));
    names.extend((1..=g).map(|i| (format!("v{i}"), i)));
    let n = names.len() + 1;
    let v_offset = (k + p) as usize;
    let rhs = minimal_rule_rhs(g, n, |j| {
        [(Monomial::generator(n, v_offset + j as usize - 1, 1), Rational::one())].into()
    });
    let mut b = GradedRing::builder(format!("extract:g={g},p={p}"), 2 * g - 1);
    for (name, codim) in &names {
        b = b.generator(GeneratorSpec::even(name, *codim, 2 * codim));
    }
    let coeff: Vec<&str> = names.iter().map(|(s, _)| s.as_str()).collect();
    let linear: Vec<&str> = coeff[..v_offset].to_vec();
    b = b
        .generator(GeneratorSpec::even("z", 1, 2))
        .bound(&coeff, Some(g), None)
        .power_rule("z", g, rhs);
    if !linear.is_empty() {
        b = b.bound(&linear, None, Some(1));
    }
    b.build()
}

/// Replaces every occurrence of generator `gen` (at most linearly) by `value`.
fn substitute(ring: &GradedRing, x: &Element, gen: usize, value: &Element) -> Result<Element> {
    let mut acc = ring.zero();
    for (m, c) in x.terms() {
        let e = m.exponent(gen);
        if e == 0 {
            acc = &acc + &ring.raw([(m.clone(), c.clone())].into());
            continue;
        }
        let mut rest = m.exponents().to_vec();
        rest[gen] = 0;
        let rest = ring.monomial(Monomial::new(rest), c.clone());
        let vpow = ring.pow(value, e)?;
        acc = &acc + &ring.multiply(&vpow, &rest)?;
    }
    Ok(acc)
}

/// Reduces `Σ_{i=1}^p y_i z^{g+k-i}` (the `y_0` term vanishes), collects the coefficients of
/// `1, z, ..., z^{g-1}`, substitutes `y_i` for `i <= k`, and solves each coefficient that
/// isolates a remaining `y_m` for it. What is left are the equations on the `a`'s.
pub fn extract_system(g: u32, p: u32) -> Result<SystemReport> {
    if p < 1 || 2 * p + 1 > 2 * g - 1 {
        return Err(Error::Hypothesis(format!(
            "need p >= 1 and 2p+1 <= 2g-1, got g={g}, p={p}"
        )));
    }
    let k = g - p - 1;
    if k > p {
        return Err(Error::OutsideCaseSplit(format!(
            "k = g-p-1 = {k} exceeds p = {p}; only k <= p is handled"
        )));
    }
    let ring = extraction_ring(g, p, k)?;
    let n = ring.ngens();
    let z = n - 1;
    let y_index = |i: u32| (k + i - 1) as usize;
    let v_elem = |j: u32| -> Result<Element> {
        if j == 0 {
            Ok(ring.one())
        } else {
            ring.gen(&format!("v{j}"))
        }
    };

    let mut total = ring.zero();
    for i in 1..=p {
        let mono = Monomial::generator(n, y_index(i), 1).with_exponent(z, g + k - i);
        total = &total + &ring.monomial(mono, Rational::one());
    }

    let mut coefficients: Vec<(u32, Element)> = Vec::new();
    for j in 0..g {
        let c = total.filter(|m| m.exponent(z) == j);
        let stripped: Terms = c
            .terms()
            .iter()
            .map(|(m, c)| (m.with_exponent(z, 0), c.clone()))
            .collect();
        coefficients.push((j, ring.raw(stripped)));
    }

    let mut substitutions = Vec::new();
    for i in 1..=k {
        let mut e = ring.zero();
        for j in 1..=i {
            let aj = ring.gen(&format!("a{j}"))?;
            e = &e + &ring.multiply(&aj, &v_elem(i - j)?)?;
        }
        substitutions.push((i, e));
    }
    let mut pending: Vec<Element> = Vec::new();
    for (_, c) in &coefficients {
        let mut c = c.clone();
        for (i, e) in &substitutions {
            c = substitute(&ring, &c, y_index(*i), e)?;
        }
        pending.push(c);
    }

    let is_y = |idx: usize| idx >= k as usize && idx < (k + p) as usize;
    let mut expressions: Vec<(u32, Element)> = Vec::new();
    loop {
        let found = pending.iter().enumerate().find_map(|(pos, c)| {
            let ys: Vec<&Monomial> = c
                .terms()
                .keys()
                .filter(|m| (0..n).any(|i| is_y(i) && m.exponent(i) > 0))
                .collect();
            match ys.as_slice() {
                [m] if m.total_degree() == 1 => {
                    let idx = (0..n).find(|&i| m.exponent(i) == 1)?;
                    Some((pos, idx, (*m).clone()))
                }
                _ => None,
            }
        });
        let Some((pos, idx, mono)) = found else {
            break;
        };
        let c = pending.remove(pos);
        let lead = c.coefficient(&mono);
        let rest = c.filter(|m| *m != mono);
        let value = rest.scale(&(-lead.recip()));
        for other in pending.iter_mut() {
            *other = substitute(&ring, other, idx, &value)?;
        }
        for (_, e) in expressions.iter_mut() {
            *e = substitute(&ring, e, idx, &value)?;
        }
        let m = (idx - k as usize + 1) as u32;
        expressions.push((m, value));
    }
    expressions.sort_by_key(|(m, _)| *m);

    // Lowest codimension first, leading coefficient positive.
    let mut equations: Vec<Element> = pending
        .into_iter()
        .filter(|e| !e.is_zero())
        .map(|e| match e.terms().iter().next_back() {
            Some((_, c)) if c.is_negative() => -e,
            _ => e,
        })
        .collect();
    equations.sort_by_key(|e| ring.degree(e).ok().flatten());

    Ok(SystemReport {
        g,
        p,
        k,
        ring,
        coefficients,
        substitutions,
        equations,
        expressions,
    })
}

fn pbig_check(g: u32, p: u32) -> Result<u32> {
    if 2 * p + 1 < g {
        return Err(Error::Hypothesis(format!("need 2p+1 >= g, got g={g}, p={p}")));
    }
    if p + 2 > g {
        return Err(Error::Hypothesis(format!(
            "need k = g-p-1 >= 1, got g={g}, p={p}"
        )));
    }
    Ok(g - p - 1)
}

/// The `(k+1) x k` system obtained from the theta-specialised equations
/// `Σ_i a_i v_{m-i} = 0`, `m = p+1..=g`, after writing `a_i = b_i Θ^{k+1-i}` up to sign:
/// row `r` (from 0), column `i` (from 1) holds `(-1)^{i-1} / (p+1+r-i)!`.
pub fn pbig_system(g: u32, p: u32) -> Result<Matrix> {
    let k = pbig_check(g, p)?;
    let rows = (0..=k)
        .map(|r| {
            (1..=k)
                .map(|i| {
                    let sign = if i % 2 == 1 { rat(1) } else { rat(-1) };
                    sign / factorial(p + 1 + r - i)
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows)
}

/// The square part (rows `1..=k`) of [`pbig_system`]: entry `(j, i)` is
/// `(-1)^{i-1} / (g-k+j-i)!`.
pub fn pbig_matrix(g: u32, p: u32) -> Result<Matrix> {
    let sys = pbig_system(g, p)?;
    let k = sys.cols();
    let rows: Vec<usize> = (1..=k).collect();
    let cols: Vec<usize> = (0..k).collect();
    Ok(sys.select(&rows, &cols))
}

pub fn pbig_det(g: u32, p: u32) -> Result<Rational> {
    determinant(&pbig_matrix(g, p)?)
}

/// Largest exponent of `z` among the terms of `x`.
pub fn z_degree(ring: &GradedRing, x: &Element) -> u32 {
    let z = ring.ngens() - 1;
    x.terms().keys().map(|m| m.exponent(z)).max().unwrap_or(0)
}
