//! Projective spaces, products with projective space, projective bundles and a small curve
//! model to build bundles over.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::model::{Model, ModelKind};
use crate::ring::{Element, GeneratorSpec, GradedRing, Monomial, Terms};

/// `Q[H]/(H^{n+1})`, ample `H`.
pub fn projective_space(n: u32) -> Result<GradedRing> {
    projective_space_named(n, "H")
}

pub(crate) fn projective_space_named(n: u32, name: &str) -> Result<GradedRing> {
    let b = GradedRing::builder(format!("projective:n={n}"), n)
        .generator(GeneratorSpec::even(name, 1, 2))
        .relation(&format!("{name}^{}", n + 1), "0");
    if n == 0 {
        b.build()
    } else {
        b.ample(name).build()
    }
}

pub fn projective_model(n: u32) -> Result<Model> {
    Ok(Model::new(
        format!("projective:n={n}"),
        ModelKind::Projective,
        None,
        projective_space(n)?,
    ))
}

/// Adjoins `name` of codimension `gen_codim` with the Grothendieck relation
/// `ξ^{r+1} = -Σ_{i>=1} c_i ξ^{r+1-i}`. `chern` lists `c_1, c_2, ...` (at most `r+1`
/// entries, missing ones are zero), each homogeneous of codimension `gen_codim * i`.
/// The base generators keep their codimension bound, and the dimension grows by
/// `gen_codim * r`.
pub fn adjoin_bundle(base: &GradedRing, name: &str, gen_codim: u32, chern: &[Element], r: u32) -> Result<GradedRing> {
    if chern.len() > r as usize + 1 {
        return Err(Error::InvalidModel(format!(
            "{} Chern classes given for a rank-{} bundle",
            chern.len(),
            r + 1
        )));
    }
    for (i, c) in chern.iter().enumerate() {
        let i = i as u32 + 1;
        if c.ring_id() != base.id() {
            return Err(Error::MixedPresentations);
        }
        match base.degree(c) {
            Ok(None) => {}
            Ok(Some(d)) if d == gen_codim * i => {}
            _ => {
                return Err(Error::InvalidModel(format!(
                    "Chern class c{i} must be homogeneous of codimension {}",
                    gen_codim * i
                )))
            }
        }
    }
    let n = base.ngens() + 1;
    let mut rhs = Terms::new();
    for (i, c) in chern.iter().enumerate() {
        let i = i as u32 + 1;
        for (m, coeff) in c.terms() {
            let mono = m.padded(n).with_exponent(n - 1, r + 1 - i);
            *rhs.entry(mono).or_insert_with(Rational::zero) -= coeff;
        }
    }
    let base_names: Vec<&str> = base.generators().iter().map(|g| g.name.as_str()).collect();
    let mut b = base
        .to_builder()
        .label(format!("{}[{name}]", base.label()))
        .truncation(base.truncation_dim() + gen_codim * r)
        .generator(GeneratorSpec::even(name, gen_codim, 2 * gen_codim))
        .power_rule(name, r + 1, rhs);
    if !base_names.is_empty() {
        b = b.bound(&base_names, Some(base.truncation_dim()), None);
    }
    b.build()
}

/// `P(E)` over `base` for a rank-`r+1` bundle with Chern classes `chern = [c_1, ...]`,
/// relative hyperplane class `xi`.
pub fn projective_bundle(base: &GradedRing, chern: &[Element], r: u32) -> Result<GradedRing> {
    adjoin_bundle(base, "xi", 1, chern, r)
}

/// `X x P^m`, with `t` the hyperplane class of the second factor. If `X` has an ample class
/// `A`, the product gets `A + t`.
pub fn product_with_projective_space(base: &GradedRing, m: u32) -> Result<GradedRing> {
    if m < 1 {
        return Err(Error::InvalidModel("product needs m >= 1".into()));
    }
    let ring = adjoin_bundle(base, "t", 1, &[], m)?;
    match base.ample() {
        None => Ok(ring),
        Some(a) => {
            let n = ring.ngens();
            let mut terms: Terms = a.terms().iter().map(|(m, c)| (m.padded(n), c.clone())).collect();
            terms.insert(Monomial::generator(n, n - 1, 1), Rational::one());
            ring.to_builder().ample_terms(terms).build()
        }
    }
}

/// A curve: `pt` (the point class) and `u1..uq` spanning a homologically trivial part of
/// `CH^1`; every product vanishes since the dimension is 1. Cycle class `pt ↦ η`, `u_i ↦ 0`.
pub fn curve_model(q: u32) -> Result<Model> {
    let mut b = GradedRing::builder(format!("curve:q={q}"), 1).generator(GeneratorSpec::even("pt", 1, 2));
    for i in 1..=q {
        b = b.generator(GeneratorSpec::even(&format!("u{i}"), 1, 1));
    }
    let ring = b.ample("pt").build()?;
    let target = GradedRing::builder("H(curve)", 1)
        .generator(GeneratorSpec::even("eta", 1, 2))
        .build()?;
    let mut images = vec![target.gen("eta")?];
    images.extend((0..q).map(|_| target.zero()));
    Model::new(format!("curve:q={q}"), ModelKind::Curve, None, ring).with_cycle_class(target, images, 1)
}

/// Lifts a model's cycle class through a bundle construction: the target gets the same
/// Grothendieck relation with `cl(c_i)`, and `name ↦ name`.
fn extend_cycle_class(model: &Model, ring: GradedRing, id: String, kind: ModelKind, name: &str, chern: &[Element], r: u32) -> Result<Model> {
    let out = Model::new(id, kind, model.g(), ring);
    let Some(cl) = model.cycle_class() else {
        return Ok(out);
    };
    let scale = cl.map.scale();
    let cl_chern = chern.iter().map(|c| model.cl(c)).collect::<Result<Vec<_>>>()?;
    let target = adjoin_bundle(&cl.target, name, scale, &cl_chern, r)?;
    let mut images = cl
        .map
        .images()
        .iter()
        .map(|x| target.lift_from(&cl.target, x))
        .collect::<Result<Vec<_>>>()?;
    images.push(target.gen(name)?);
    out.with_cycle_class(target, images, scale)
}

/// Model-level projective bundle; the ample class, if given, is parsed in the new ring.
pub fn bundle_model(model: &Model, chern: &[Element], r: u32, ample: Option<&str>) -> Result<Model> {
    let mut ring = projective_bundle(model.ring(), chern, r)?;
    if let Some(a) = ample {
        ring = ring.to_builder().ample(a).build()?;
    }
    let id = format!("bundle({},r={r})", model.id());
    extend_cycle_class(model, ring, id, ModelKind::Bundle, "xi", chern, r)
}

pub fn product_model(model: &Model, m: u32) -> Result<Model> {
    let ring = product_with_projective_space(model.ring(), m)?;
    let id = format!("{}xP{m}", model.id());
    extend_cycle_class(model, ring, id, ModelKind::Product, "t", &[], m)
}
