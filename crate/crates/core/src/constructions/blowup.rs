//! Chow rings of blow-ups `f: Z = Bl_Y X -> X` along a smooth center `ι: Y -> X` of
//! codimension `r + 1 >= 2`.
//!
//! With `E = P(N) --g--> Y` the exceptional divisor, `j: E -> Z` and `h = c_1(O_E(1))`
//! (so that `j^* E = -h`), every class on `Z` is uniquely
//!
//! ```text
//! f^* x + Σ_{i=0}^{r-1} j_*(h^i g^* y_i).
//! ```
//!
//! Products use `f^*x · j_*β = j_*(g^*ι^*x · β)` and `j_*β · j_*β' = -j_*(h β β')`; powers of
//! `h` beyond `r - 1` are removed with the Grothendieck relation
//! `h^{r+1} = -Σ_{i=1}^{r+1} c_i(N) h^{r+1-i}` and the key formula
//! `j_*(h^r g^* y) = f^* ι_* y - Σ_{i=1}^r j_*(h^{r-i} g^*(c_i(N) y))`.

use std::fmt::Write as _;
use std::time::Instant;

use num_integer::binomial;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::lefschetz::{self, CheckKind, LefschetzReport, ReportInput};
use crate::linalg::{rank, rat, Matrix, Rational};
use crate::ring::{Element, GradedRing, Monomial, RingMap};

use super::bundle::projective_space_named;

/// Ring data of the pair `(X, Y)`.
#[derive(Clone, Debug)]
pub struct BlowupData {
    label: String,
    x: GradedRing,
    y: GradedRing,
    r: u32,
    pullback: RingMap,
    /// Images under `ι_*` of `graded_basis(q)` of `Y`, indexed by `q`.
    pushforward: Vec<Vec<Element>>,
    /// `c_1(N) .. c_{r+1}(N)` in `Y`.
    chern: Vec<Element>,
}

impl BlowupData {
    /// Validates degrees and the projection formula `ι_*(ι^*x · y) = x · ι_*y` on every
    /// generator `x` of `X` and every basis monomial `y` of `Y`.
    pub fn new(
        label: impl Into<String>,
        x: GradedRing,
        y: GradedRing,
        r: u32,
        pullback_images: Vec<Element>,
        pushforward: Vec<Vec<Element>>,
        chern: Vec<Element>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::MalformedBlowup(msg));
        if r < 1 {
            return bad("the center must have codimension at least 2".into());
        }
        let (n, d) = (x.truncation_dim(), y.truncation_dim());
        if d + r + 1 != n {
            return bad(format!("dim Y + r + 1 = {} but dim X = {n}", d + r + 1));
        }
        let pullback = RingMap::new(&x, &y, pullback_images, 1)
            .map_err(|e| Error::MalformedBlowup(format!("pullback: {e}")))?;
        if pushforward.len() != d as usize + 1 {
            return bad(format!(
                "pushforward given in {} codimensions, Y has {}",
                pushforward.len(),
                d + 1
            ));
        }
        for (q, images) in pushforward.iter().enumerate() {
            let basis = y.graded_basis(q as u32)?;
            if images.len() != basis.len() {
                return bad(format!("pushforward of codimension {q}: wrong number of images"));
            }
            for img in images {
                if img.ring_id() != x.id() {
                    return Err(Error::MixedPresentations);
                }
                if let Some(c) = x.degree(img)? {
                    if c != q as u32 + r + 1 {
                        return bad(format!("pushforward of a codimension-{q} class has codimension {c}"));
                    }
                }
            }
        }
        if chern.len() != r as usize + 1 {
            return bad(format!("expected {} Chern classes of N", r + 1));
        }
        for (i, c) in chern.iter().enumerate() {
            if c.ring_id() != y.id() {
                return Err(Error::MixedPresentations);
            }
            if let Some(deg) = y.degree(c)? {
                if deg != i as u32 + 1 {
                    return bad(format!("c{} has codimension {deg}", i + 1));
                }
            }
        }
        let data = BlowupData {
            label: label.into(),
            x,
            y,
            r,
            pullback,
            pushforward,
            chern,
        };
        data.check_projection_formula()?;
        Ok(data)
    }

    /// `P^d ⊂ P^n` linear, with hyperplane classes `H` and `K`: `ι^*H = K`,
    /// `ι_*(K^a) = H^{a+r+1}`, `c(N) = (1 + K)^{r+1}`.
    pub fn linear(n: u32, d: u32) -> Result<Self> {
        if d + 2 > n {
            return Err(Error::MalformedBlowup(format!(
                "a linear P^{d} in P^{n} has codimension below 2"
            )));
        }
        let r = n - d - 1;
        let x = projective_space_named(n, "H")?;
        let y = projective_space_named(d, "K")?;
        let pullback = vec![y.gen("K")?];
        let pushforward = (0..=d)
            .map(|a| Ok(vec![x.parse(&format!("H^{}", a + r + 1))?]))
            .collect::<Result<Vec<_>>>()?;
        let chern = (1..=r + 1)
            .map(|i| {
                let c = rat(binomial(r as i64 + 1, i as i64));
                Ok(y.monomial(Monomial::new(vec![i]), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(format!("Bl(P{d},P{n})"), x, y, r, pullback, pushforward, chern)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn x(&self) -> &GradedRing {
        &self.x
    }

    pub fn y(&self) -> &GradedRing {
        &self.y
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `n = dim X`.
    pub fn n(&self) -> u32 {
        self.x.truncation_dim()
    }

    /// `d = dim Y`.
    pub fn d(&self) -> u32 {
        self.y.truncation_dim()
    }

    pub fn iota_pullback(&self, x: &Element) -> Result<Element> {
        self.pullback.apply(&self.x, &self.y, x)
    }

    pub fn iota_pushforward(&self, y: &Element) -> Result<Element> {
        if y.ring_id() != self.y.id() {
            return Err(Error::MixedPresentations);
        }
        let mut acc = self.x.zero();
        for (q, images) in self.pushforward.iter().enumerate() {
            let basis = self.y.graded_basis(q as u32)?;
            let part = self.y.component(y, q as u32);
            let coords = self.y.coordinates(&part, &basis)?;
            for (c, img) in coords.iter().zip(images) {
                acc = &acc + &img.scale(c);
            }
        }
        Ok(acc)
    }

    fn check_projection_formula(&self) -> Result<()> {
        for g in self.x.generators() {
            let xg = self.x.gen(&g.name)?;
            let pulled = self.iota_pullback(&xg)?;
            for q in 0..=self.d() {
                for m in self.y.graded_basis(q)? {
                    let y = self.y.monomial(m, Rational::one());
                    let lhs = self.iota_pushforward(&self.y.multiply(&pulled, &y)?)?;
                    let rhs = self.x.multiply(&xg, &self.iota_pushforward(&y)?)?;
                    if lhs != rhs {
                        return Err(Error::MalformedBlowup(format!(
                            "projection formula fails for x = {} and y = {}",
                            g.name,
                            self.y.format(&y)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `f^* base + Σ_{i<r} j_*(h^i g^* exc[i])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupElement {
    pub base: Element,
    pub exc: Vec<Element>,
}

/// One labelled basis vector of a graded piece of the blow-up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlowupBasis {
    Pullback(Monomial),
    Exceptional { h_power: u32, y: Monomial },
}

/// Arithmetic on `CH(Bl_Y X)` in decomposed form.
#[derive(Clone, Debug)]
pub struct BlowupRing {
    data: BlowupData,
}

impl BlowupRing {
    pub fn new(data: BlowupData) -> Self {
        BlowupRing { data }
    }

    pub fn data(&self) -> &BlowupData {
        &self.data
    }

    pub fn dim(&self) -> u32 {
        self.data.n()
    }

    pub fn zero(&self) -> BlowupElement {
        BlowupElement {
            base: self.data.x.zero(),
            exc: vec![self.data.y.zero(); self.data.r as usize],
        }
    }

    pub fn one(&self) -> BlowupElement {
        self.pullback(&self.data.x.one())
    }

    /// `f^* x`.
    pub fn pullback(&self, x: &Element) -> BlowupElement {
        BlowupElement {
            base: x.clone(),
            ..self.zero()
        }
    }

    /// `j_*(h^i g^* y)` for any `i >= 0`, in decomposed form.
    pub fn exceptional(&self, i: u32, y: &Element) -> Result<BlowupElement> {
        let mut poly = vec![self.data.y.zero(); i as usize + 1];
        poly[i as usize] = y.clone();
        self.reduce(self.data.x.zero(), poly)
    }

    /// The exceptional divisor `E = j_*(1)`.
    pub fn exceptional_divisor(&self) -> Result<BlowupElement> {
        self.exceptional(0, &self.data.y.one())
    }

    pub fn add(&self, a: &BlowupElement, b: &BlowupElement) -> BlowupElement {
        BlowupElement {
            base: &a.base + &b.base,
            exc: a.exc.iter().zip(&b.exc).map(|(u, v)| u + v).collect(),
        }
    }

    pub fn scale(&self, a: &BlowupElement, c: &Rational) -> BlowupElement {
        BlowupElement {
            base: a.base.scale(c),
            exc: a.exc.iter().map(|u| u.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self, a: &BlowupElement) -> bool {
        a.base.is_zero() && a.exc.iter().all(Element::is_zero)
    }

    /// Reduces Grothendieck relation on an `h`-polynomial with `CH(Y)` coefficients to
    /// degree `<= r`.
    fn grothendieck(&self, mut poly: Vec<Element>) -> Result<Vec<Element>> {
        let y = &self.data.y;
        let r = self.data.r as usize;
        for e in (r + 1..poly.len()).rev() {
            let top = std::mem::replace(&mut poly[e], y.zero());
            if top.is_zero() {
                continue;
            }
            for (i, c) in self.data.chern.iter().enumerate() {
                let i = i + 1;
                let t = y.multiply(c, &top)?;
                poly[e - i] = &poly[e - i] - &t;
            }
        }
        poly.truncate(r + 1);
        poly.resize(r + 1, y.zero());
        Ok(poly)
    }

    /// Brings `f^* base + Σ_i j_*(h^i poly[i])` into decomposed form.
    fn reduce(&self, mut base: Element, poly: Vec<Element>) -> Result<BlowupElement> {
        let y = &self.data.y;
        let r = self.data.r as usize;
        let mut poly = self.grothendieck(poly)?;
        let top = std::mem::replace(&mut poly[r], y.zero());
        if !top.is_zero() {
            base = &base + &self.data.iota_pushforward(&top)?;
            for (i, c) in self.data.chern.iter().take(r).enumerate() {
                let i = i + 1;
                let t = y.multiply(c, &top)?;
                poly[r - i] = &poly[r - i] - &t;
            }
        }
        poly.truncate(r);
        Ok(BlowupElement { base, exc: poly })
    }

    pub fn multiply(&self, a: &BlowupElement, b: &BlowupElement) -> Result<BlowupElement> {
        let (x, y) = (&self.data.x, &self.data.y);
        let r = self.data.r as usize;
        let base = x.multiply(&a.base, &b.base)?;
        let mut poly = vec![y.zero(); 2 * r + 1];
        let pa = self.data.iota_pullback(&a.base)?;
        let pb = self.data.iota_pullback(&b.base)?;
        for i in 0..r {
            poly[i] = &poly[i] + &y.multiply(&pa, &b.exc[i])?;
            poly[i] = &poly[i] + &y.multiply(&pb, &a.exc[i])?;
            for l in 0..r {
                let t = y.multiply(&a.exc[i], &b.exc[l])?;
                poly[i + l + 1] = &poly[i + l + 1] - &t;
            }
        }
        self.reduce(base, poly)
    }

    pub fn pow(&self, a: &BlowupElement, e: u32) -> Result<BlowupElement> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// `f_*`: the pullback part, since `f_* j_*(h^i g^* y) = ι_* g_*(h^i y) = 0` for `i < r`.
    pub fn pushforward(&self, a: &BlowupElement) -> Element {
        a.base.clone()
    }

    /// `g_*(h^i g^* y)`: the `h^r` coefficient after the Grothendieck reduction.
    pub fn g_pushforward(&self, i: u32, y: &Element) -> Result<Element> {
        let mut poly = vec![self.data.y.zero(); i as usize + 1];
        poly[i as usize] = y.clone();
        let poly = self.grothendieck(poly)?;
        Ok(poly[self.data.r as usize].clone())
    }

    /// Basis of codimension `p`: `f^* X_p`, then `j_*(h^i g^* Y_{p-1-i})` for `i = 0..r-1`.
    pub fn basis(&self, p: u32) -> Result<Vec<BlowupBasis>> {
        let n = self.dim();
        if p > n {
            return Err(Error::CodimOutOfRange {
                codim: p as i64,
                max: n,
            });
        }
        let mut out: Vec<BlowupBasis> = self
            .data
            .x
            .graded_basis(p)?
            .into_iter()
            .map(BlowupBasis::Pullback)
            .collect();
        for i in 0..self.data.r {
            if p < i + 1 || p - 1 - i > self.data.d() {
                continue;
            }
            for m in self.data.y.graded_basis(p - 1 - i)? {
                out.push(BlowupBasis::Exceptional { h_power: i, y: m });
            }
        }
        Ok(out)
    }

    pub fn basis_element(&self, b: &BlowupBasis) -> BlowupElement {
        match b {
            BlowupBasis::Pullback(m) => self.pullback(&self.data.x.monomial(m.clone(), Rational::one())),
            BlowupBasis::Exceptional { h_power, y } => {
                let mut e = self.zero();
                e.exc[*h_power as usize] = self.data.y.monomial(y.clone(), Rational::one());
                e
            }
        }
    }

    pub fn basis_label(&self, b: &BlowupBasis) -> String {
        match b {
            BlowupBasis::Pullback(m) => format!("f^*({})", self.data.x.format_monomial(m)),
            BlowupBasis::Exceptional { h_power, y } => {
                let hpart = match h_power {
                    0 => String::new(),
                    1 => "h*".to_string(),
                    k => format!("h^{k}*"),
                };
                format!("j_*({hpart}g^*({}))", self.data.y.format_monomial(y))
            }
        }
    }

    /// Coordinates of a codimension-`p` element in [`basis`](Self::basis).
    pub fn compose(&self, a: &BlowupElement, p: u32) -> Result<Vec<Rational>> {
        let mut out = Vec::new();
        for b in self.basis(p)? {
            let c = match &b {
                BlowupBasis::Pullback(m) => a.base.coefficient(m),
                BlowupBasis::Exceptional { h_power, y } => a.exc[*h_power as usize].coefficient(y),
            };
            out.push(c);
        }
        let back = self.decompose(p, &out)?;
        if &back != a {
            return Err(Error::Consistency(format!(
                "element is not homogeneous of codimension {p}"
            )));
        }
        Ok(out)
    }

    /// The element with the given coordinates in [`basis`](Self::basis).
    pub fn decompose(&self, p: u32, coords: &[Rational]) -> Result<BlowupElement> {
        let basis = self.basis(p)?;
        if coords.len() != basis.len() {
            return Err(Error::Shape(format!(
                "{} coordinates for a basis of size {}",
                coords.len(),
                basis.len()
            )));
        }
        let mut acc = self.zero();
        for (b, c) in basis.iter().zip(coords) {
            acc = self.add(&acc, &self.scale(&self.basis_element(b), c));
        }
        Ok(acc)
    }

    /// Matrix of `·c` from codimension `p` to `p + shift`.
    pub fn operator_matrix(&self, c: &BlowupElement, shift: u32, p: u32) -> Result<(Matrix, Vec<BlowupBasis>, Vec<BlowupBasis>)> {
        let domain = self.basis(p)?;
        let q = p + shift;
        let codomain = if q <= self.dim() { self.basis(q)? } else { Vec::new() };
        let columns = domain
            .iter()
            .map(|b| {
                let prod = self.multiply(c, &self.basis_element(b))?;
                if q <= self.dim() {
                    self.compose(&prod, q)
                } else if self.is_zero(&prod) {
                    Ok(Vec::new())
                } else {
                    Err(Error::Consistency("product beyond the dimension is nonzero".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((Matrix::from_columns(codomain.len(), &columns)?, domain, codomain))
    }

    pub fn format(&self, a: &BlowupElement) -> String {
        let mut parts = Vec::new();
        if !a.base.is_zero() {
            parts.push(format!("f^*({})", self.data.x.format(&a.base)));
        }
        for (i, e) in a.exc.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let mut s = String::from("j_*(");
            match i {
                0 => {}
                1 => s.push_str("h*"),
                k => {
                    let _ = write!(s, "h^{k}*");
                }
            }
            let _ = write!(s, "g^*({}))", self.data.y.format(e));
            parts.push(s);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Checks injectivity of `·D'^{n-2p}` on `CH^p(Bl_Y X)` for `D' = f^*L + mE`, `m < 0`.
/// `D'` is first multiplied by the denominator of `m`, which does not change the kernel.
/// The report's notes record whether the same statement holds on `X` for `L` and whether
/// `p >= dim Y`.
pub fn blowup_transfer_check(data: &BlowupData, l: &Element, m: &Rational, p: u32) -> Result<LefschetzReport> {
    let start = Instant::now();
    if !m.is_negative() {
        return Err(Error::Hypothesis(format!("m = {m} must be negative")));
    }
    let n = data.n();
    if 2 * p > n {
        return Err(Error::NoLefschetzExponent(n as i64 - 2 * p as i64));
    }
    let x = data.x();
    if x.degree(l)? != Some(1) {
        return Err(Error::Hypothesis("L must be a nonzero divisor class".into()));
    }
    let ring = BlowupRing::new(data.clone());
    let q = Rational::from_integer(m.denom().clone());
    let e_class = ring.exceptional_divisor()?;
    let d = ring.add(
        &ring.scale(&ring.pullback(l), &q),
        &ring.scale(&e_class, &(m * &q)),
    );
    let e = n - 2 * p;
    let de = ring.pow(&d, e)?;
    let (matrix, domain, _) = ring.operator_matrix(&de, e, p)?;

    let base_lm = x.operator_matrix(&x.pow(l, e)?, e, p)?;
    let base_ok = rank(&base_lm.matrix) == base_lm.domain_basis.len();
    let labels: Vec<String> = domain.iter().map(|b| ring.basis_label(b)).collect();
    let divisor = format!("f^*({}) + ({m})*E", x.format(l));
    let mut report = lefschetz::report_from_matrix(
        ReportInput {
            model: data.label().to_string(),
            check: CheckKind::BlowupTransfer,
            p,
            s: None,
            exponent: e,
            divisor,
            iso: false,
        },
        &matrix,
        &labels,
        start,
    );
    let mq = m * &q;
    report.notes.push(format!("scaled divisor: {q}*f^*(L) - {}*E", -mq));
    report.notes.push(format!(
        "base check for L on X: {}",
        if base_ok { "injective" } else { "not injective" }
    ));
    report.notes.push(format!("p >= dim Y: {}", p >= data.d()));
    Ok(report)
}
