//! Finite models of the Chow ring and cohomology ring of a `g`-dimensional abelian variety.
//!
//! - theta model: `Q[Θ]/(Θ^{g+1})`, the subring generated by a symmetric theta divisor;
//! - divisor model: the free truncated ring on `D0` (Beauville index 0) and `D1` (index 1);
//! - cohomology model: the exterior algebra on `e1..e_{2g}` graded by cohomological degree,
//!   with symplectic class `ω = Σ e_{2i-1} e_{2i}`.
//!
//! Multiplication by `k` acts on a monomial by `k^w`, `w` its k-weight, and the Beauville
//! component of index `s` in codimension `p` is the `k^{2p-s}` eigenspace.

use std::collections::BTreeSet;

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{factorial, rat, Rational};
use crate::model::{Model, ModelKind};
use crate::ring::{Element, GeneratorSpec, GradedRing, Monomial};

fn check_g(g: u32) -> Result<()> {
    if g < 1 {
        return Err(Error::InvalidModel("abelian models need g >= 1".into()));
    }
    Ok(())
}

/// The exterior algebra `H^*(A, Q)` with generators `e1..e_{2g}`.
pub fn cohomology_ring(g: u32) -> Result<GradedRing> {
    check_g(g)?;
    let mut b = GradedRing::builder(format!("cohomology:g={g}"), 2 * g);
    for i in 1..=2 * g {
        b = b.generator(GeneratorSpec::odd(&format!("e{i}"), 1, 1));
    }
    b.build()
}

/// `ω = Σ_{i=1}^g e_{2i-1} e_{2i}` in a ring containing those generators.
pub fn omega(ring: &GradedRing, g: u32) -> Result<Element> {
    let expr: Vec<String> = (1..=g).map(|i| format!("e{}*e{}", 2 * i - 1, 2 * i)).collect();
    ring.parse(&expr.join(" + "))
}

pub fn cohomology_model(g: u32) -> Result<Model> {
    Ok(Model::new(
        format!("cohomology:g={g}"),
        ModelKind::Cohomology,
        Some(g),
        cohomology_ring(g)?,
    ))
}

pub fn theta_ring(g: u32) -> Result<GradedRing> {
    check_g(g)?;
    GradedRing::builder(format!("theta:g={g}"), g)
        .generator(GeneratorSpec::even("theta", 1, 2))
        .relation(&format!("theta^{}", g + 1), "0")
        .ample("theta")
        .build()
}

/// Theta model with cycle class `Θ ↦ ω`.
pub fn theta_model(g: u32) -> Result<Model> {
    let ring = theta_ring(g)?;
    let target = cohomology_ring(g)?;
    let w = omega(&target, g)?;
    Model::new(format!("theta:g={g}"), ModelKind::Theta, Some(g), ring).with_cycle_class(target, vec![w], 2)
}

pub fn divisor_ring(g: u32) -> Result<GradedRing> {
    check_g(g)?;
    GradedRing::builder(format!("divisor:g={g}"), g)
        .generator(GeneratorSpec::even("D0", 1, 2))
        .generator(GeneratorSpec::even("D1", 1, 1))
        .ample("D0 + D1")
        .build()
}

/// Divisor model with cycle class `D0 ↦ ω`, `D1 ↦ 0`.
pub fn divisor_model(g: u32) -> Result<Model> {
    let ring = divisor_ring(g)?;
    let target = cohomology_ring(g)?;
    let w = omega(&target, g)?;
    let zero = target.zero();
    Model::new(format!("divisor:g={g}"), ModelKind::Divisor, Some(g), ring).with_cycle_class(target, vec![w, zero], 2)
}

/// Beauville indices occurring in codimension `p` of `ring`.
fn indices_in_codim(ring: &GradedRing, p: u32) -> Result<BTreeSet<i64>> {
    Ok(ring
        .graded_basis(p)?
        .iter()
        .map(|m| ring.beauville_index(m))
        .collect())
}

fn pow_rat(base: i64, e: i64) -> Rational {
    let b = rat(base);
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b.recip(), (-e) as usize)
    }
}

/// The index-`s` Beauville component of a codimension-homogeneous `x`.
///
/// Computed as a polynomial in the operator `2^*` (Lagrange interpolation over the
/// eigenvalues `2^{2p-t}` of the indices occurring in codimension `p`), then checked to be
/// an eigenvector of both `2^*` and `3^*`.
pub fn beauville_project(ring: &GradedRing, x: &Element, s: i64) -> Result<Element> {
    let Some(p) = ring.degree(x)? else {
        return Ok(ring.zero());
    };
    let mut indices = indices_in_codim(ring, p)?;
    indices.insert(s);
    let lambda = |t: i64| pow_rat(2, 2 * p as i64 - t);
    let mut y = x.clone();
    for &t in indices.iter().filter(|&&t| t != s) {
        let numerator = &ring.kstar(&y, 2) - &y.scale(&lambda(t));
        y = numerator.scale(&(lambda(s) - lambda(t)).recip());
    }
    for k in [2, 3] {
        let expected = y.scale(&pow_rat(k, 2 * p as i64 - s));
        if ring.kstar(&y, k) != expected {
            return Err(Error::Consistency(format!(
                "Beauville component s={s} is not a {k}^* eigenvector"
            )));
        }
    }
    Ok(y)
}

/// All nonzero Beauville components of a codimension-homogeneous `x`, by index.
pub fn beauville_components(ring: &GradedRing, x: &Element) -> Result<Vec<(i64, Element)>> {
    let Some(p) = ring.degree(x)? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for s in indices_in_codim(ring, p)? {
        let c = beauville_project(ring, x, s)?;
        if !c.is_zero() {
            out.push((s, c));
        }
    }
    Ok(out)
}

fn require_theta(model: &Model) -> Result<u32> {
    match (model.kind(), model.g()) {
        (ModelKind::Theta, Some(g)) => Ok(g),
        _ => Err(Error::WrongModel {
            expected: "theta",
            got: model.id().to_string(),
        }),
    }
}

fn theta_power(model: &Model, b: u32) -> Element {
    let ring = model.ring();
    ring.monomial(Monomial::generator(1, 0, b), Rational::one())
}

/// Fourier transform on the theta model: `F(Θ^b/b!) = (-1)^{g-b} Θ^{g-b}/(g-b)!`.
pub fn fourier(model: &Model, x: &Element) -> Result<Element> {
    let g = require_theta(model)?;
    let ring = model.ring();
    if x.ring_id() != ring.id() {
        return Err(Error::MixedPresentations);
    }
    let mut acc = ring.zero();
    for (m, c) in x.terms() {
        let b = m.exponent(0);
        let sign = if (g - b) % 2 == 0 { rat(1) } else { rat(-1) };
        let coeff = c * factorial(b) * sign / factorial(g - b);
        acc = &acc + &theta_power(model, g - b).scale(&coeff);
    }
    Ok(acc)
}

/// Pontryagin product `x * y = (-1)^g F(F(x) F(y))` on the theta model.
pub fn pontryagin(model: &Model, x: &Element, y: &Element) -> Result<Element> {
    let g = require_theta(model)?;
    let ring = model.ring();
    let prod = ring.multiply(&fourier(model, x)?, &fourier(model, y)?)?;
    let f = fourier(model, &prod)?;
    Ok(if g % 2 == 0 { f } else { -f })
}

/// `r`-fold Pontryagin power. `r = 0` gives the identity, the point class `Θ^g/g!`.
pub fn pontryagin_power(model: &Model, x: &Element, r: u32) -> Result<Element> {
    let g = require_theta(model)?;
    let mut acc = theta_power(model, g).scale(&factorial(g).recip());
    for _ in 0..r {
        acc = pontryagin(model, &acc, x)?;
    }
    Ok(acc)
}

/// The curve class `C_(0) = Θ^{g-1}/(g-1)!` in the theta model.
pub fn curve_class(model: &Model) -> Result<Element> {
    let g = require_theta(model)?;
    Ok(theta_power(model, g - 1).scale(&factorial(g - 1).recip()))
}

/// `(w_k, v_k) = (Θ^k/k!, (-1)^k Θ^k/k!)` in the theta model.
pub fn w_and_v_classes(model: &Model, k: u32) -> Result<(Element, Element)> {
    let g = require_theta(model)?;
    if k > g {
        return Err(Error::CodimOutOfRange {
            codim: k as i64,
            max: g,
        });
    }
    let w = theta_power(model, k).scale(&factorial(k).recip());
    let v = if k % 2 == 0 { w.clone() } else { -&w };
    Ok((w, v))
}

/// Theta specialisation `v_k = (-1)^k Θ^k / k!` as raw coefficients, `k = 0..=g`.
pub(crate) fn theta_v_coefficient(k: u32) -> Rational {
    let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
    sign / factorial(k)
}
