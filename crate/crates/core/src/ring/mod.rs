//! Finite graded-commutative rings given by generators and triangular rewrite rules.
//!
//! A presentation consists of
//! - generators, each with a codimension, a k-weight (`k^* x = k^w x`) and a parity;
//! - a truncation dimension `n`: every monomial of codimension `> n` is zero;
//! - at most one rewrite rule per even generator, of the form `g^d -> rhs` where every
//!   monomial of `rhs` has `g`-degree `< d` and involves no generator declared after `g`;
//! - optional monomial bounds on blocks of generators (a block's codimension or total
//!   degree may not exceed a limit), used for coefficient subrings such as `CH(J)` inside a
//!   projective bundle over it.
//!
//! Odd generators square to zero. Rule leads are pure powers of distinct generators, so
//! together with the monomial ideals above they form a Gröbner basis and normal forms are
//! unique. Rewriting terminates because every step decreases the exponent vector in the
//! lexicographic order that reads generators from last to first.

mod element;
mod monomial;
pub mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use element::Element;
pub use monomial::{Monomial, Terms};
pub use parse::{parse_rational, parse_terms};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational};

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub codim: u32,
    pub kweight: u32,
    pub parity: Parity,
}

impl GeneratorSpec {
    pub fn even(name: &str, codim: u32, kweight: u32) -> Self {
        GeneratorSpec {
            name: name.to_string(),
            codim,
            kweight,
            parity: Parity::Even,
        }
    }

    pub fn odd(name: &str, codim: u32, kweight: u32) -> Self {
        GeneratorSpec {
            name: name.to_string(),
            codim,
            kweight,
            parity: Parity::Odd,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity == Parity::Odd
    }
}

/// `generator^power -> rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub generator: usize,
    pub power: u32,
    pub rhs: Terms,
}

/// Monomials whose restriction to `generators` exceeds a codimension or degree bound vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub generators: Vec<usize>,
    pub max_codim: Option<u32>,
    pub max_degree: Option<u32>,
}

#[derive(Clone, Debug)]
enum RhsSource {
    Terms(Terms),
    Expr(String),
}

#[derive(Clone, Debug)]
enum LeadSource {
    Power(String, u32),
    Expr(String),
}

/// Collects generators, relations and bounds, then validates them in [`build`](Self::build).
#[derive(Clone, Debug)]
pub struct PresentationBuilder {
    label: String,
    truncation: u32,
    generators: Vec<GeneratorSpec>,
    rules: Vec<(LeadSource, RhsSource)>,
    bounds: Vec<(Vec<String>, Option<u32>, Option<u32>)>,
    ample: Option<RhsSource>,
}

impl PresentationBuilder {
    pub fn new(label: impl Into<String>, truncation: u32) -> Self {
        PresentationBuilder {
            label: label.into(),
            truncation,
            generators: Vec::new(),
            rules: Vec::new(),
            bounds: Vec::new(),
            ample: None,
        }
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn truncation(mut self, n: u32) -> Self {
        self.truncation = n;
        self
    }

    pub fn generator(mut self, spec: GeneratorSpec) -> Self {
        self.generators.push(spec);
        self
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    /// `lead -> rhs` given as expressions, e.g. `("z^2", "theta*z - 1/2*theta^2")`.
    pub fn relation(mut self, lead: &str, rhs: &str) -> Self {
        self.rules.push((
            LeadSource::Expr(lead.to_string()),
            RhsSource::Expr(rhs.to_string()),
        ));
        self
    }

    /// `name^power -> rhs` with `rhs` as raw terms; shorter exponent vectors are padded.
    pub fn power_rule(mut self, name: &str, power: u32, rhs: Terms) -> Self {
        self.rules.push((
            LeadSource::Power(name.to_string(), power),
            RhsSource::Terms(rhs),
        ));
        self
    }

    pub fn bound(mut self, generators: &[&str], max_codim: Option<u32>, max_degree: Option<u32>) -> Self {
        self.bounds.push((
            generators.iter().map(|s| s.to_string()).collect(),
            max_codim,
            max_degree,
        ));
        self
    }

    pub fn ample(mut self, expr: &str) -> Self {
        self.ample = Some(RhsSource::Expr(expr.to_string()));
        self
    }

    pub fn ample_terms(mut self, terms: Terms) -> Self {
        self.ample = Some(RhsSource::Terms(terms));
        self
    }

    pub fn build(self) -> Result<GradedRing> {
        let n = self.generators.len();
        for (i, g) in self.generators.iter().enumerate() {
            let valid_name = g
                .name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && g.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid_name {
                return Err(Error::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "names must be ASCII identifiers".into(),
                });
            }
            if g.codim == 0 {
                return Err(Error::InvalidGenerator {
                    name: g.name.clone(),
                    reason: "codimension must be positive".into(),
                });
            }
            if self.generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        let index = |name: &str| -> Result<usize> {
            self.generators
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
        };
        let to_terms = |src: &RhsSource| -> Result<Terms> {
            Ok(match src {
                RhsSource::Terms(t) => t
                    .iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m.padded(n), c.clone()))
                    .collect(),
                RhsSource::Expr(e) => parse_terms(e, &self.generators)?,
            })
        };

        let mut rules: Vec<Rule> = Vec::new();
        let mut rule_for = vec![None; n];
        for (lead, rhs) in &self.rules {
            let (generator, power, lead_text) = match lead {
                LeadSource::Power(name, p) => (index(name)?, *p, format!("{name}^{p}")),
                LeadSource::Expr(e) => {
                    let t = parse_terms(e, &self.generators)?;
                    let odd_square = t.is_empty() && {
                        // `e^2` for odd e parses to zero; accept it when the rhs is zero too.
                        let g = e.split('^').next().unwrap_or("").trim();
                        index(g).map(|i| self.generators[i].is_odd()).unwrap_or(false)
                    };
                    if odd_square {
                        if !to_terms(rhs)?.is_empty() {
                            return Err(Error::NotTriangular {
                                lead: e.clone(),
                                reason: "odd squares are always zero".into(),
                            });
                        }
                        continue;
                    }
                    let (m, c) = match t.iter().next() {
                        Some((m, c)) if t.len() == 1 && c.is_one() => (m.clone(), c.clone()),
                        _ => {
                            return Err(Error::NotTriangular {
                                lead: e.clone(),
                                reason: "lead must be a single monic monomial".into(),
                            })
                        }
                    };
                    debug_assert!(c.is_one());
                    let support: Vec<usize> =
                        (0..n).filter(|&i| m.exponent(i) > 0).collect();
                    if support.len() != 1 {
                        return Err(Error::NotTriangular {
                            lead: e.clone(),
                            reason: "lead must be a pure power of one generator".into(),
                        });
                    }
                    (support[0], m.exponent(support[0]), e.clone())
                }
            };
            let spec = &self.generators[generator];
            if spec.is_odd() {
                return Err(Error::NotTriangular {
                    lead: lead_text,
                    reason: "rules on odd generators are limited to the implicit square".into(),
                });
            }
            if power == 0 {
                return Err(Error::NotTriangular {
                    lead: lead_text,
                    reason: "lead power must be positive".into(),
                });
            }
            if rule_for[generator].is_some() {
                return Err(Error::NotTriangular {
                    lead: lead_text,
                    reason: format!("second rule for generator `{}`", spec.name),
                });
            }
            let rhs = to_terms(rhs)?;
            let lead_codim = power * spec.codim;
            for m in rhs.keys() {
                let c = codim_of(&self.generators, m);
                if c != lead_codim {
                    return Err(Error::NonHomogeneousRelation {
                        lead: lead_text,
                        reason: format!("rhs term of codimension {c}, lead has {lead_codim}"),
                    });
                }
                if m.exponent(generator) >= power {
                    return Err(Error::NotTriangular {
                        lead: lead_text,
                        reason: "rhs must have strictly smaller degree in the lead generator"
                            .into(),
                    });
                }
                if let Some(later) = (generator + 1..n).find(|&j| m.exponent(j) > 0) {
                    return Err(Error::NotTriangular {
                        lead: lead_text,
                        reason: format!(
                            "rhs involves `{}`, declared after `{}`",
                            self.generators[later].name, spec.name
                        ),
                    });
                }
            }
            rule_for[generator] = Some(rules.len());
            rules.push(Rule {
                generator,
                power,
                rhs,
            });
        }

        let mut bounds = Vec::new();
        for (names, max_codim, max_degree) in &self.bounds {
            let generators = names.iter().map(|s| index(s)).collect::<Result<Vec<_>>>()?;
            bounds.push(Bound {
                generators,
                max_codim: *max_codim,
                max_degree: *max_degree,
            });
        }

        let mut ring = GradedRing {
            id: NEXT_RING_ID.fetch_add(1, Ordering::Relaxed),
            label: self.label,
            odd: self.generators.iter().map(GeneratorSpec::is_odd).collect(),
            generators: self.generators.clone(),
            truncation: self.truncation,
            rules,
            rule_for,
            bounds,
            ample: None,
        };
        if let Some(src) = &self.ample {
            let terms = to_terms(src)?;
            let raw = Element::from_terms(ring.id, terms);
            let a = ring.normal_form(&raw);
            match ring.degree(&a)? {
                Some(1) => ring.ample = Some(a),
                _ => {
                    return Err(Error::InvalidModel(
                        "ample class must be a nonzero codimension-1 element".into(),
                    ))
                }
            }
        }
        Ok(ring)
    }
}

fn codim_of(generators: &[GeneratorSpec], m: &Monomial) -> u32 {
    m.exponents()
        .iter()
        .zip(generators)
        .map(|(e, g)| e * g.codim)
        .sum()
}

/// Matrix of a linear map between two graded pieces, with its bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMapMatrix {
    pub domain_basis: Vec<Monomial>,
    pub codomain_basis: Vec<Monomial>,
    pub matrix: Matrix,
}

/// A validated presentation. Immutable once built.
#[derive(Clone, Debug)]
pub struct GradedRing {
    id: u64,
    label: String,
    generators: Vec<GeneratorSpec>,
    odd: Vec<bool>,
    truncation: u32,
    rules: Vec<Rule>,
    rule_for: Vec<Option<usize>>,
    bounds: Vec<Bound>,
    ample: Option<Element>,
}

type Cache = HashMap<Monomial, Terms>;

impl GradedRing {
    pub fn builder(label: impl Into<String>, truncation: u32) -> PresentationBuilder {
        PresentationBuilder::new(label, truncation)
    }

    /// A builder pre-filled with this presentation, for adjoining generators. The ample
    /// class is not carried over.
    pub fn to_builder(&self) -> PresentationBuilder {
        let mut b = PresentationBuilder::new(self.label.clone(), self.truncation);
        for g in &self.generators {
            b = b.generator(g.clone());
        }
        for r in &self.rules {
            b = b.power_rule(&self.generators[r.generator].name, r.power, r.rhs.clone());
        }
        for bd in &self.bounds {
            let names: Vec<&str> = bd
                .generators
                .iter()
                .map(|&i| self.generators[i].name.as_str())
                .collect();
            b = b.bound(&names, bd.max_codim, bd.max_degree);
        }
        b
    }

    /// Reinterprets an element of `from`, whose generators must be a prefix of this ring's
    /// generators, and reduces it here.
    pub fn lift_from(&self, from: &GradedRing, x: &Element) -> Result<Element> {
        from.check(x)?;
        let prefix = from.generators.len() <= self.generators.len()
            && from.generators.iter().zip(&self.generators).all(|(a, b)| a == b);
        if !prefix {
            return Err(Error::MixedPresentations);
        }
        Ok(self.normal_form(&self.raw(x.terms.clone())))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn bounds(&self) -> &[Bound] {
        &self.bounds
    }

    pub fn truncation_dim(&self) -> u32 {
        self.truncation
    }

    pub fn ample(&self) -> Option<&Element> {
        self.ample.as_ref()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn kweights(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.kweight).collect()
    }

    pub fn odd_mask(&self) -> &[bool] {
        &self.odd
    }

    pub fn codim(&self, m: &Monomial) -> u32 {
        codim_of(&self.generators, m)
    }

    pub fn kweight(&self, m: &Monomial) -> u32 {
        m.exponents()
            .iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.kweight)
            .sum()
    }

    /// Beauville index `s = 2p - w` of a monomial of codimension `p` and k-weight `w`.
    pub fn beauville_index(&self, m: &Monomial) -> i64 {
        2 * self.codim(m) as i64 - self.kweight(m) as i64
    }

    // -- construction of elements ------------------------------------------------------

    pub fn zero(&self) -> Element {
        Element::from_terms(self.id, Terms::new())
    }

    pub fn scalar(&self, c: Rational) -> Element {
        self.monomial(Monomial::one(self.ngens()), c)
    }

    pub fn one(&self) -> Element {
        self.scalar(Rational::one())
    }

    /// `c * m`, reduced to normal form.
    pub fn monomial(&self, m: Monomial, c: Rational) -> Element {
        let mut t = Terms::new();
        t.insert(m.padded(self.ngens()), c);
        self.normal_form(&Element::from_terms(self.id, t))
    }

    pub fn gen(&self, name: &str) -> Result<Element> {
        let i = self.generator_index(name)?;
        Ok(self.monomial(Monomial::generator(self.ngens(), i, 1), Rational::one()))
    }

    /// Wraps raw terms without reducing them.
    pub fn raw(&self, terms: Terms) -> Element {
        Element::from_terms(
            self.id,
            terms.into_iter().map(|(m, c)| (m.padded(self.ngens()), c)).collect(),
        )
    }

    /// Parses an expression and reduces it to normal form.
    pub fn parse(&self, expr: &str) -> Result<Element> {
        Ok(self.normal_form(&self.parse_raw(expr)?))
    }

    /// Parses an expression without reducing it.
    pub fn parse_raw(&self, expr: &str) -> Result<Element> {
        Ok(Element::from_terms(self.id, parse_terms(expr, &self.generators)?))
    }

    fn check(&self, x: &Element) -> Result<()> {
        if x.ring != self.id {
            return Err(Error::MixedPresentations);
        }
        Ok(())
    }

    // -- reduction -----------------------------------------------------------------------

    fn vanishes(&self, m: &Monomial) -> bool {
        if self.codim(m) > self.truncation {
            return true;
        }
        if m
            .exponents()
            .iter()
            .zip(&self.odd)
            .any(|(&e, &o)| o && e > 1)
        {
            return true;
        }
        self.bounds.iter().any(|b| {
            let codim: u32 = b
                .generators
                .iter()
                .map(|&i| m.exponent(i) * self.generators[i].codim)
                .sum();
            let degree: u32 = b.generators.iter().map(|&i| m.exponent(i)).sum();
            b.max_codim.is_some_and(|c| codim > c) || b.max_degree.is_some_and(|d| degree > d)
        })
    }

    fn reduce_monomial(&self, m: &Monomial, cache: &mut Cache) -> Terms {
        if self.vanishes(m) {
            return Terms::new();
        }
        if let Some(t) = cache.get(m) {
            return t.clone();
        }
        let applicable = self
            .rules
            .iter()
            .find(|r| m.exponent(r.generator) >= r.power);
        let out = match applicable {
            None => {
                let mut t = Terms::new();
                t.insert(m.clone(), Rational::one());
                t
            }
            Some(rule) => {
                let rest = m.with_exponent(rule.generator, m.exponent(rule.generator) - rule.power);
                let mut acc = Terms::new();
                for (rm, rc) in &rule.rhs {
                    let Some((pm, negative)) = rm.mul_signed(&rest, &self.odd) else {
                        continue;
                    };
                    let c = if negative { -rc } else { rc.clone() };
                    for (mm, cc) in self.reduce_monomial(&pm, cache) {
                        *acc.entry(mm).or_insert_with(Rational::zero) += &c * cc;
                    }
                }
                acc.retain(|_, c| !c.is_zero());
                acc
            }
        };
        cache.insert(m.clone(), out.clone());
        out
    }

    fn reduce_terms(&self, terms: &Terms, cache: &mut Cache) -> Terms {
        let mut acc = Terms::new();
        for (m, c) in terms {
            for (mm, cc) in self.reduce_monomial(m, cache) {
                *acc.entry(mm).or_insert_with(Rational::zero) += c * cc;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    }

    /// Fully reduced form of `x`: no rule lead divides a surviving monomial, no odd
    /// generator is repeated, and nothing above the truncation dimension or a block bound
    /// survives.
    pub fn normal_form(&self, x: &Element) -> Element {
        assert_eq!(x.ring, self.id, "normal_form on a foreign element");
        Element::from_terms(self.id, self.reduce_terms(&x.terms, &mut Cache::new()))
    }

    pub fn is_normal(&self, x: &Element) -> bool {
        x.terms.keys().all(|m| {
            !self.vanishes(m) && !self.rules.iter().any(|r| m.exponent(r.generator) >= r.power)
        })
    }

    fn multiply_cached(&self, a: &Element, b: &Element, cache: &mut Cache) -> Element {
        let mut raw = Terms::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((m, negative)) = ma.mul_signed(mb, &self.odd) {
                    let c = ca * cb;
                    let e = raw.entry(m).or_insert_with(Rational::zero);
                    if negative {
                        *e -= c;
                    } else {
                        *e += c;
                    }
                }
            }
        }
        Element::from_terms(self.id, self.reduce_terms(&raw, cache))
    }

    /// Graded-commutative product in normal form.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.multiply_cached(a, b, &mut Cache::new()))
    }

    pub fn product(&self, factors: &[&Element]) -> Result<Element> {
        let mut acc = self.one();
        let mut cache = Cache::new();
        for f in factors {
            self.check(f)?;
            acc = self.multiply_cached(&acc, f, &mut cache);
        }
        Ok(acc)
    }

    pub fn pow(&self, x: &Element, e: u32) -> Result<Element> {
        self.check(x)?;
        let mut cache = Cache::new();
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.multiply_cached(&acc, x, &mut cache);
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// `k^*`: scales each monomial by `k` to the power of its k-weight.
    pub fn kstar(&self, x: &Element, k: i64) -> Element {
        let kq = Rational::from_integer(k.into());
        Element::from_terms(
            x.ring,
            x.terms
                .iter()
                .map(|(m, c)| {
                    let w = self.kweight(m);
                    (m.clone(), c * num_traits::pow(kq.clone(), w as usize))
                })
                .collect(),
        )
    }

    // -- grading -----------------------------------------------------------------------

    /// `Ok(None)` for zero, `Ok(Some(p))` for a nonzero element homogeneous of codim `p`.
    pub fn degree(&self, x: &Element) -> Result<Option<u32>> {
        let mut it = x.terms.keys().map(|m| self.codim(m));
        let Some(first) = it.next() else {
            return Ok(None);
        };
        if it.all(|c| c == first) {
            Ok(Some(first))
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    pub fn component(&self, x: &Element, p: u32) -> Element {
        x.filter(|m| self.codim(m) == p)
    }

    /// Normal-form monomials of codimension `p`, in descending lexicographic order.
    pub fn graded_basis(&self, p: u32) -> Result<Vec<Monomial>> {
        if p > self.truncation {
            return Err(Error::CodimOutOfRange {
                codim: p as i64,
                max: self.truncation,
            });
        }
        let n = self.ngens();
        let caps: Vec<u32> = (0..n)
            .map(|i| {
                let g = &self.generators[i];
                let by_codim = p / g.codim;
                if g.is_odd() {
                    by_codim.min(1)
                } else if let Some(r) = self.rule_for[i] {
                    by_codim.min(self.rules[r].power - 1)
                } else {
                    by_codim
                }
            })
            .collect();
        let mut out = Vec::new();
        let mut current = vec![0u32; n];
        self.enumerate(0, p, &caps, &mut current, &mut out);
        out.retain(|m| !self.vanishes(m));
        out.sort_unstable_by(|a, b| b.cmp(a));
        Ok(out)
    }

    fn enumerate(&self, i: usize, remaining: u32, caps: &[u32], current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == current.len() {
            if remaining == 0 {
                out.push(Monomial::new(current.clone()));
            }
            return;
        }
        let c = self.generators[i].codim;
        let max = caps[i].min(remaining / c);
        for e in 0..=max {
            current[i] = e;
            self.enumerate(i + 1, remaining - e * c, caps, current, out);
        }
        current[i] = 0;
    }

    pub fn dimensions(&self) -> Vec<usize> {
        (0..=self.truncation)
            .map(|p| self.graded_basis(p).map(|b| b.len()).unwrap_or(0))
            .collect()
    }

    /// Coordinates of `x` in `basis`. Fails if `x` has a term outside the basis.
    pub fn coordinates(&self, x: &Element, basis: &[Monomial]) -> Result<Vec<Rational>> {
        self.check(x)?;
        let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut v = vec![Rational::zero(); basis.len()];
        for (m, c) in &x.terms {
            let i = index.get(m).ok_or_else(|| {
                Error::Consistency(format!(
                    "term {} lies outside the requested basis",
                    self.format_monomial(m)
                ))
            })?;
            v[*i] = c.clone();
        }
        Ok(v)
    }

    pub fn combination(&self, basis: &[Monomial], coeffs: &[Rational]) -> Element {
        Element::from_terms(
            self.id,
            basis
                .iter()
                .zip(coeffs)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        )
    }

    /// Matrix of `x -> c * x` from codimension `p` to `p + deg(c)`.
    pub fn mult_operator_matrix(&self, c: &Element, p: u32) -> Result<LinearMapMatrix> {
        let d = self.degree(c)?.ok_or(Error::NotHomogeneous)?;
        self.operator_matrix(c, d, p)
    }

    /// As [`mult_operator_matrix`](Self::mult_operator_matrix) with an explicit codimension
    /// shift, so that a zero multiplier still yields a correctly shaped zero map. The
    /// codomain basis is empty when `p + shift` exceeds the truncation dimension.
    pub fn operator_matrix(&self, c: &Element, shift: u32, p: u32) -> Result<LinearMapMatrix> {
        self.check(c)?;
        if let Some(d) = self.degree(c)? {
            if d != shift {
                return Err(Error::NotHomogeneous);
            }
        }
        let domain = self.graded_basis(p)?;
        let codomain = if p + shift <= self.truncation {
            self.graded_basis(p + shift)?
        } else {
            Vec::new()
        };
        let mut cache = Cache::new();
        let columns = domain
            .iter()
            .map(|m| {
                let x = Element::from_terms(self.id, [(m.clone(), Rational::one())].into());
                let y = self.multiply_cached(c, &x, &mut cache);
                self.coordinates(&y, &codomain)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearMapMatrix {
            matrix: Matrix::from_columns(codomain.len(), &columns)?,
            domain_basis: domain,
            codomain_basis: codomain,
        })
    }

    // -- formatting ------------------------------------------------------------------------

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = &self.generators[i].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Renders `x` in the expression grammar accepted by [`parse`](Self::parse), terms in
    /// descending monomial order.
    pub fn format(&self, x: &Element) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in x.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if m.is_one() {
                let _ = write!(s, "{abs}");
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                let _ = write!(s, "{abs}*{mono}");
            }
        }
        s
    }

    /// Expressions for each rule, as `(lead, rhs)` strings.
    pub fn relation_strings(&self) -> Vec<(String, String)> {
        self.rules
            .iter()
            .map(|r| {
                let lead = self.format_monomial(&Monomial::generator(self.ngens(), r.generator, r.power));
                (lead, self.format(&Element::from_terms(self.id, r.rhs.clone())))
            })
            .collect()
    }
}

/// A ring homomorphism given by generator images, optionally rescaling the grading
/// (`codim p -> scale * p` in the target).
#[derive(Clone, Debug)]
pub struct RingMap {
    source: u64,
    target: u64,
    images: Vec<Element>,
    scale: u32,
}

impl RingMap {
    /// Validates that images are homogeneous of the right degree and parity and that every
    /// rewrite rule of the source maps to zero.
    pub fn new(source: &GradedRing, target: &GradedRing, images: Vec<Element>, scale: u32) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::Shape(format!(
                "{} images for {} generators",
                images.len(),
                source.ngens()
            )));
        }
        for (g, img) in source.generators.iter().zip(&images) {
            target.check(img)?;
            let img = &target.normal_form(img);
            if let Some(d) = target.degree(img)? {
                if d != scale * g.codim {
                    return Err(Error::InvalidModel(format!(
                        "image of `{}` has degree {d}, expected {}",
                        g.name,
                        scale * g.codim
                    )));
                }
            }
            if g.is_odd() && !target.multiply(img, img)?.is_zero() {
                return Err(Error::InvalidModel(format!(
                    "image of odd generator `{}` does not square to zero",
                    g.name
                )));
            }
        }
        let map = RingMap {
            source: source.id,
            target: target.id,
            images: images.iter().map(|x| target.normal_form(x)).collect(),
            scale,
        };
        for r in &source.rules {
            let lead = source.raw([(Monomial::generator(source.ngens(), r.generator, r.power), Rational::one())].into());
            let rhs = source.raw(r.rhs.clone());
            let diff = &map.apply_raw(source, target, &lead)? - &map.apply_raw(source, target, &rhs)?;
            if !diff.is_zero() {
                return Err(Error::InvalidModel(format!(
                    "relation for `{}` is not respected",
                    source.generators[r.generator].name
                )));
            }
        }
        Ok(map)
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    fn apply_raw(&self, source: &GradedRing, target: &GradedRing, x: &Element) -> Result<Element> {
        if x.ring != self.source || target.id != self.target || source.id != self.source {
            return Err(Error::MixedPresentations);
        }
        let mut acc = target.zero();
        let mut powers: BTreeMap<(usize, u32), Element> = BTreeMap::new();
        let mut cache = Cache::new();
        for (m, c) in &x.terms {
            let mut term = target.scalar(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !powers.contains_key(&(i, e)) {
                    let p = target.pow(&self.images[i], e)?;
                    powers.insert((i, e), p);
                }
                term = target.multiply_cached(&term, &powers[&(i, e)], &mut cache);
                if term.is_zero() {
                    break;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    pub fn apply(&self, source: &GradedRing, target: &GradedRing, x: &Element) -> Result<Element> {
        self.apply_raw(source, target, x)
    }

    /// Matrix of the map from codimension `p` of the source to grade `scale * p` of the target.
    pub fn matrix(&self, source: &GradedRing, target: &GradedRing, p: u32) -> Result<LinearMapMatrix> {
        let domain = source.graded_basis(p)?;
        let q = self.scale * p;
        let codomain = if q <= target.truncation {
            target.graded_basis(q)?
        } else {
            Vec::new()
        };
        let columns = domain
            .iter()
            .map(|m| {
                let x = source.raw([(m.clone(), Rational::one())].into());
                let y = self.apply(source, target, &x)?;
                target.coordinates(&y, &codomain)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearMapMatrix {
            matrix: Matrix::from_columns(codomain.len(), &columns)?,
            domain_basis: domain,
            codomain_basis: codomain,
        })
    }
}

/// Checks that two presentations describe the same ring under a renaming of generators:
/// equal graded dimensions and equal multiplication-by-generator matrices in every
/// codimension, with bases matched through the renaming.
pub fn isomorphic_under_renaming(a: &GradedRing, b: &GradedRing, renaming: &[(&str, &str)]) -> Result<bool> {
    if a.ngens() != b.ngens() || a.truncation != b.truncation {
        return Ok(false);
    }
    let mut perm = vec![usize::MAX; a.ngens()];
    for (i, g) in a.generators.iter().enumerate() {
        let target_name = renaming
            .iter()
            .find(|(from, _)| *from == g.name)
            .map_or(g.name.as_str(), |(_, to)| to);
        let j = b.generator_index(target_name)?;
        let h = &b.generators[j];
        if h.codim != g.codim || h.parity != g.parity {
            return Ok(false);
        }
        perm[i] = j;
    }
    let map_mono = |m: &Monomial| {
        let mut e = vec![0; b.ngens()];
        for (i, &x) in m.exponents().iter().enumerate() {
            e[perm[i]] = x;
        }
        Monomial::new(e)
    };
    for p in 0..=a.truncation {
        let ba = a.graded_basis(p)?;
        let mut mapped: Vec<Monomial> = ba.iter().map(map_mono).collect();
        let mut bb = b.graded_basis(p)?;
        mapped.sort();
        bb.sort();
        if mapped != bb {
            return Ok(false);
        }
    }
    for (i, g) in a.generators.iter().enumerate() {
        let ga = a.gen(&g.name)?;
        let gb = b.gen(&b.generators[perm[i]].name)?;
        for p in 0..=a.truncation {
            let ma = a.operator_matrix(&ga, g.codim, p)?;
            let mb = b.operator_matrix(&gb, g.codim, p)?;
            // Reorder b's matrix into a's bases.
            let dom: Vec<usize> = ma
                .domain_basis
                .iter()
                .map(|m| mb.domain_basis.iter().position(|x| *x == map_mono(m)).unwrap())
                .collect();
            let cod: Vec<usize> = ma
                .codomain_basis
                .iter()
                .map(|m| mb.codomain_basis.iter().position(|x| *x == map_mono(m)).unwrap())
                .collect();
            if mb.matrix.select(&cod, &dom) != ma.matrix {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, rat};

    pub(crate) fn p3() -> GradedRing {
        GradedRing::builder("P3", 3)
            .generator(GeneratorSpec::even("H", 1, 2))
            .relation("H^4", "0")
            .ample("H")
            .build()
            .unwrap()
    }

    fn sympow2() -> GradedRing {
        GradedRing::builder("sympow2", 3)
            .generator(GeneratorSpec::even("theta", 1, 2))
            .generator(GeneratorSpec::even("z", 1, 2))
            .relation("theta^3", "0")
            .relation("z^2", "theta*z - 1/2*theta^2")
            .build()
            .unwrap()
    }

    fn exterior(k: usize) -> GradedRing {
        let mut b = GradedRing::builder("ext", k as u32);
        for i in 1..=k {
            b = b.generator(GeneratorSpec::odd(&format!("e{i}"), 1, 1));
        }
        b.build().unwrap()
    }

    #[test]
    fn projective_space_basis() {
        let r = p3();
        assert_eq!(r.dimensions(), vec![1, 1, 1, 1]);
        assert_eq!(r.graded_basis(2).unwrap(), vec![Monomial::new(vec![2])]);
        let h = r.gen("H").unwrap();
        let h2 = r.pow(&h, 2).unwrap();
        assert_eq!(r.multiply(&h, &h2).unwrap(), r.parse("H^3").unwrap());
        assert!(r.parse("H^4").unwrap().is_zero());
    }

    #[test]
    fn exterior_basis_and_sign() {
        let r = exterior(2);
        assert_eq!(r.dimensions(), vec![1, 2, 1]);
        let e1 = r.gen("e1").unwrap();
        let e2 = r.gen("e2").unwrap();
        assert_eq!(r.multiply(&e2, &e1).unwrap(), r.parse("-e1*e2").unwrap());
        assert!(r.multiply(&e1, &e1).unwrap().is_zero());
        let four = exterior(4);
        let names: Vec<String> = four
            .graded_basis(1)
            .unwrap()
            .iter()
            .map(|m| four.format_monomial(m))
            .collect();
        assert_eq!(names, ["e1", "e2", "e3", "e4"]);
    }

    #[test]
    fn sympow_rewrites() {
        let r = sympow2();
        let z2 = r.normal_form(&r.parse_raw("z^2").unwrap());
        assert_eq!(z2, r.parse_raw("theta*z - 1/2*theta^2").unwrap());
        let z3 = r.normal_form(&r.parse_raw("z^3").unwrap());
        assert_eq!(z3, r.parse_raw("1/2*theta^2*z").unwrap());
        assert_eq!(r.format(&z2), "-1/2*theta^2 + theta*z");
    }

    #[test]
    fn sympow_operator_matrix() {
        let r = sympow2();
        let z = r.gen("z").unwrap();
        let lm = r.mult_operator_matrix(&z, 1).unwrap();
        let names: Vec<String> = lm.domain_basis.iter().map(|m| r.format_monomial(m)).collect();
        assert_eq!(names, ["theta", "z"]);
        let names: Vec<String> = lm.codomain_basis.iter().map(|m| r.format_monomial(m)).collect();
        assert_eq!(names, ["theta^2", "theta*z"]);
        let expected = Matrix::from_rows(vec![vec![rat(0), frac(-1, 2)], vec![rat(1), rat(1)]]).unwrap();
        assert_eq!(lm.matrix, expected);
    }

    #[test]
    fn exterior_omega_operator() {
        let r = exterior(2);
        let omega = r.parse("e1*e2").unwrap();
        let lm = r.mult_operator_matrix(&omega, 0).unwrap();
        assert_eq!(lm.matrix, Matrix::identity(1));
    }

    #[test]
    fn divisor_basis_order() {
        let r = GradedRing::builder("div", 3)
            .generator(GeneratorSpec::even("D0", 1, 2))
            .generator(GeneratorSpec::even("D1", 1, 1))
            .build()
            .unwrap();
        let names: Vec<String> = r
            .graded_basis(2)
            .unwrap()
            .iter()
            .map(|m| r.format_monomial(m))
            .collect();
        assert_eq!(names, ["D0^2", "D0*D1", "D1^2"]);
    }

    #[test]
    fn build_errors() {
        let dup = GradedRing::builder("x", 2)
            .generator(GeneratorSpec::even("a", 1, 2))
            .generator(GeneratorSpec::even("a", 1, 2))
            .build();
        assert!(matches!(dup, Err(Error::DuplicateGenerator(_))));

        let inhomog = GradedRing::builder("x", 2)
            .generator(GeneratorSpec::even("a", 1, 2))
            .generator(GeneratorSpec::even("b", 2, 2))
            .relation("b^2", "a")
            .build();
        assert!(matches!(inhomog, Err(Error::NonHomogeneousRelation { .. })));

        let not_tri = GradedRing::builder("x", 4)
            .generator(GeneratorSpec::even("a", 1, 2))
            .generator(GeneratorSpec::even("b", 1, 2))
            .relation("a^2", "a*b")
            .build();
        assert!(matches!(not_tri, Err(Error::NotTriangular { .. })));

        let not_pure = GradedRing::builder("x", 4)
            .generator(GeneratorSpec::even("a", 1, 2))
            .generator(GeneratorSpec::even("b", 1, 2))
            .relation("a*b", "0")
            .build();
        assert!(matches!(not_pure, Err(Error::NotTriangular { .. })));
    }

    #[test]
    fn odd_square_relation_is_accepted() {
        let r = GradedRing::builder("x", 2)
            .generator(GeneratorSpec::odd("e", 1, 1))
            .relation("e^2", "0")
            .build()
            .unwrap();
        assert!(r.rules().is_empty());
    }

    #[test]
    fn mixed_presentations_rejected() {
        let a = p3();
        let b = p3();
        let x = a.gen("H").unwrap();
        let y = b.gen("H").unwrap();
        assert_eq!(a.multiply(&x, &y), Err(Error::MixedPresentations));
    }

    #[test]
    fn block_bounds() {
        let r = GradedRing::builder("x", 4)
            .generator(GeneratorSpec::even("v1", 1, 2))
            .generator(GeneratorSpec::even("v2", 2, 4))
            .generator(GeneratorSpec::even("y1", 1, 2))
            .generator(GeneratorSpec::even("y2", 2, 2))
            .generator(GeneratorSpec::even("z", 1, 2))
            .bound(&["v1", "v2", "y1", "y2"], Some(2), None)
            .bound(&["y1", "y2"], None, Some(1))
            .build()
            .unwrap();
        assert!(r.parse("v1*v2").unwrap().is_zero());
        assert!(r.parse("y1^2").unwrap().is_zero());
        assert!(!r.parse("y1*v1*z^2").unwrap().is_zero());
    }

    #[test]
    fn ring_map_respects_relations() {
        let src = p3();
        let tgt = exterior(6);
        let omega = tgt.parse("e1*e2 + e3*e4 + e5*e6").unwrap();
        let map = RingMap::new(&src, &tgt, vec![omega.clone()], 2).unwrap();
        let h2 = src.parse("H^2").unwrap();
        assert_eq!(map.apply(&src, &tgt, &h2).unwrap(), tgt.multiply(&omega, &omega).unwrap());
        // H -> e1 has the wrong degree.
        let bad = RingMap::new(&src, &tgt, vec![tgt.gen("e1").unwrap()], 2);
        assert!(bad.is_err());
    }

    #[test]
    fn renaming_isomorphism() {
        let a = sympow2();
        let b = GradedRing::builder("other", 3)
            .generator(GeneratorSpec::even("theta", 1, 2))
            .generator(GeneratorSpec::even("xi", 1, 2))
            .bound(&["theta"], Some(2), None)
            .relation("xi^2", "theta*xi - 1/2*theta^2")
            .build()
            .unwrap();
        assert!(isomorphic_under_renaming(&a, &b, &[("z", "xi")]).unwrap());
        let c = GradedRing::builder("other", 3)
            .generator(GeneratorSpec::even("theta", 1, 2))
            .generator(GeneratorSpec::even("xi", 1, 2))
            .bound(&["theta"], Some(2), None)
            .relation("xi^2", "theta*xi + 1/2*theta^2")
            .build()
            .unwrap();
        assert!(!isomorphic_under_renaming(&a, &c, &[("z", "xi")]).unwrap());
    }
}
