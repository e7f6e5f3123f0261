//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for each, and exits
//! nonzero if any fails. Expected values come from small oracles written here, not from
//! the library code under test.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use chowlab::abelian::{
    beauville_project, cohomology_model, curve_class, divisor_model, pontryagin_power, theta_model, w_and_v_classes,
};
use chowlab::constructions::{
    blowup_transfer_check, bundle_model, curve_model, product_model, projective_bundle, BlowupData, BlowupRing,
};
use chowlab::lefschetz::{check_conj1, check_hl_cohomology, check_kunnemann, two_imply_one};
use chowlab::linalg::{factorial, frac, rank, rat};
use chowlab::ring::isomorphic_under_renaming;
use chowlab::sympow::{extract_system, pbig_det, pbig_matrix, SymPowMode, SymPowRing};
use chowlab::{Element, GradedRing, Matrix, Model, Monomial, Rational};
use num_traits::{One, Zero};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: chowlab::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Coefficient of `Θ^b` in an element of a one-generator ring.
fn theta_coefficient(x: &Element, b: u32) -> Rational {
    x.coefficient(&Monomial::new(vec![b]))
}

fn binomial(n: u32, k: u32) -> usize {
    (factorial(n) / (factorial(k) * factorial(n - k)))
        .to_integer()
        .try_into()
        .unwrap()
}

fn pontryagin_identity() -> Outcome {
    let mut count = 0;
    for g in 1..=8 {
        let model = lib(theta_model(g))?;
        let c = lib(curve_class(&model))?;
        for r in 1..=g {
            let power = lib(pontryagin_power(&model, &c, r))?;
            let lhs = power.scale(&factorial(g - r));
            // r! Θ^{g-r}, and nothing else.
            let expected = factorial(r);
            ensure(theta_coefficient(&lhs, g - r) == expected, || {
                format!("g={g} r={r}: coefficient {} != {expected}", theta_coefficient(&lhs, g - r))
            })?;
            ensure(lhs.terms().len() == 1, || format!("g={g} r={r}: extra terms"))?;
            count += 1;
        }
    }
    Ok(format!("{count} pairs (g, r)"))
}

/// Determinant by cofactor expansion along the first row.
fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut acc = Rational::zero();
    for j in 0..n {
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn pbig_determinants() -> Outcome {
    let mut count = 0;
    for g in 2..=12u32 {
        for p in 1..g {
            // Admissible: 2p+1 >= g and k = g-p-1 >= 1.
            if 2 * p + 1 < g || p + 2 > g {
                continue;
            }
            let k = g - p - 1;
            let oracle: Vec<Vec<Rational>> = (1..=k)
                .map(|j| {
                    (1..=k)
                        .map(|i| {
                            let sign = if i % 2 == 1 { rat(1) } else { rat(-1) };
                            sign / factorial(g - k + j - i)
                        })
                        .collect()
                })
                .collect();
            let m = lib(pbig_matrix(g, p))?;
            ensure(m == lib(Matrix::from_rows(oracle.clone()))?, || {
                format!("({g},{p}): matrix differs from the entry formula")
            })?;
            let det = lib(pbig_det(g, p))?;
            ensure(!det.is_zero(), || format!("({g},{p}): zero determinant"))?;
            if k <= 6 {
                ensure(det == cofactor_det(&oracle), || format!("({g},{p}): det {det} disagrees with cofactor expansion"))?;
            }
            count += 1;
        }
    }
    let d = lib(pbig_det(5, 2))?;
    ensure(d == frac(-1, 144), || format!("det(5,2) = {d}"))?;
    Ok(format!("{count} admissible pairs nonzero, det(5,2) = -1/144"))
}

fn minimal_equations() -> Outcome {
    for g in 1..=8 {
        for mode in [SymPowMode::Formal, SymPowMode::Theta] {
            let s = lib(SymPowRing::new(g, mode))?;
            let eq = lib(s.minimal_equation())?;
            ensure(!eq.is_zero(), || format!("g={g}: minimal equation is empty"))?;
            ensure(s.ring().normal_form(&eq).is_zero(), || {
                format!("g={g} {}: normal form nonzero", mode.as_str())
            })?;
        }
    }
    let s1 = lib(SymPowRing::new(1, SymPowMode::Theta))?;
    let r1 = s1.ring();
    ensure(lib(r1.parse("z"))? == lib(r1.parse("theta"))?, || "g=1: z != theta".into())?;
    let s2 = lib(SymPowRing::new(2, SymPowMode::Theta))?;
    let r2 = s2.ring();
    ensure(lib(r2.parse("z^3"))? == lib(r2.parse("1/2*theta^2*z"))?, || {
        format!("g=2: z^3 = {}", r2.format(&r2.parse("z^3").unwrap()))
    })?;
    Ok("g <= 8 in both modes; z = theta (g=1), z^3 = theta^2*z/2 (g=2)".into())
}

/// Polynomial over `a1..ak, y1..yp, v1..vg` keyed by exponent vectors in that order.
type Poly = BTreeMap<Vec<u32>, Rational>;

struct Vars {
    k: usize,
    p: usize,
    g: usize,
}

impl Vars {
    fn len(&self) -> usize {
        self.k + self.p + self.g
    }
    fn a(&self, i: u32) -> usize {
        i as usize - 1
    }
    fn y(&self, i: u32) -> usize {
        self.k + i as usize - 1
    }
    fn v(&self, j: u32) -> usize {
        self.k + self.p + j as usize - 1
    }
    fn var(&self, idx: usize) -> Poly {
        let mut e = vec![0; self.len()];
        e[idx] = 1;
        [(e, Rational::one())].into()
    }
    /// `v_j` with `v_0 = 1`.
    fn vj(&self, j: u32) -> Poly {
        if j == 0 {
            [(vec![0; self.len()], Rational::one())].into()
        } else {
            self.var(self.v(j))
        }
    }
    /// Codimension in `CH(J)`: `a_i`, `y_i` and `v_i` all have codimension `i`.
    fn codim(&self, e: &[u32]) -> u32 {
        let a = (1..=self.k as u32).map(|i| i * e[self.a(i)]);
        let y = (1..=self.p as u32).map(|i| i * e[self.y(i)]);
        let v = (1..=self.g as u32).map(|j| j * e[self.v(j)]);
        a.chain(y).chain(v).sum()
    }
}

fn padd(a: &mut Poly, b: &Poly, c: &Rational) {
    for (m, x) in b {
        let slot = a.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += x * c;
        if slot.is_zero() {
            a.remove(m);
        }
    }
}

fn pmul(vars: &Vars, a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            if vars.codim(&m) > vars.g as u32 {
                continue;
            }
            padd(&mut out, &[(m, Rational::one())].into(), &(ca * cb));
        }
    }
    out
}

/// Substitutes `value` for the (linearly occurring) variable `idx`.
fn psubst(vars: &Vars, x: &Poly, idx: usize, value: &Poly) -> Poly {
    let mut out = Poly::new();
    for (m, c) in x {
        if m[idx] == 0 {
            padd(&mut out, &[(m.clone(), c.clone())].into(), &Rational::one());
        } else {
            assert_eq!(m[idx], 1);
            let mut rest = m.clone();
            rest[idx] = 0;
            let rest: Poly = [(rest, c.clone())].into();
            padd(&mut out, &pmul(vars, &rest, value), &Rational::one());
        }
    }
    out
}

/// `z^N` modulo `z^g + Σ v_j z^{g-j}`, as coefficients of `1, z, ..., z^{g-1}`.
fn z_power(vars: &Vars, n: u32) -> Vec<Poly> {
    let g = vars.g;
    let mut cur = vec![Poly::new(); g];
    cur[0] = vars.vj(0);
    for _ in 0..n {
        let top = cur[g - 1].clone();
        let mut next = vec![Poly::new(); g];
        next[1..g].clone_from_slice(&cur[..(g - 1)]);
        for j in 1..=g as u32 {
            padd(&mut next[g - j as usize], &pmul(vars, &vars.vj(j), &top), &rat(-1));
        }
        cur = next;
    }
    cur
}

/// `Σ_{i=1}^k a_i v_{m-i}`.
fn displayed(vars: &Vars, m: u32) -> Poly {
    let mut out = Poly::new();
    for i in 1..=vars.k as u32 {
        if m >= i && m - i <= vars.g as u32 {
            padd(&mut out, &pmul(vars, &vars.var(vars.a(i)), &vars.vj(m - i)), &Rational::one());
        }
    }
    out
}

fn to_element(ring: &GradedRing, x: &Poly) -> Element {
    let n = ring.ngens();
    let mut acc = ring.zero();
    for (m, c) in x {
        let mut e = m.clone();
        e.resize(n, 0);
        acc = &acc + &ring.monomial(Monomial::new(e), c.clone());
    }
    acc
}

fn extraction_case(g: u32, p: u32) -> Result<(), String> {
    let k = g - p - 1;
    let vars = Vars {
        k: k as usize,
        p: p as usize,
        g: g as usize,
    };
    // Reduce Σ y_i z^{g+k-i} by the recurrence.
    let mut coeffs = vec![Poly::new(); g as usize];
    for i in 1..=p {
        let zp = z_power(&vars, g + k - i);
        let y = vars.var(vars.y(i));
        for (j, c) in zp.iter().enumerate() {
            padd(&mut coeffs[j], &pmul(&vars, &y, c), &Rational::one());
        }
    }
    // y_i = Σ_{j<=i} a_j v_{i-j} for i <= k, then the displayed y_m for m = k+1..=p.
    for i in 1..=k {
        let mut value = Poly::new();
        for j in 1..=i {
            padd(&mut value, &pmul(&vars, &vars.var(vars.a(j)), &vars.vj(i - j)), &Rational::one());
        }
        coeffs = coeffs.iter().map(|c| psubst(&vars, c, vars.y(i), &value)).collect();
    }
    for m in (k + 1..=p).rev() {
        let value = displayed(&vars, m);
        coeffs = coeffs.iter().map(|c| psubst(&vars, c, vars.y(m), &value)).collect();
    }
    let mut residual: Vec<Poly> = coeffs.into_iter().filter(|c| !c.is_empty()).collect();
    for m in p + 1..=g {
        let e = displayed(&vars, m);
        let neg: Poly = e.iter().map(|(k, c)| (k.clone(), -c)).collect();
        let pos = residual.iter().position(|c| *c == e || *c == neg);
        let pos = pos.ok_or_else(|| format!("({g},{p}): equation for m={m} missing from the oracle reduction"))?;
        residual.remove(pos);
    }
    ensure(residual.is_empty(), || format!("({g},{p}): {} unexplained coefficients", residual.len()))?;

    let report = lib(extract_system(g, p))?;
    let ring = report.ring();
    let want_eqs: Vec<Element> = (p + 1..=g).map(|m| to_element(ring, &displayed(&vars, m))).collect();
    ensure(report.equations == want_eqs, || {
        format!("({g},{p}): equations {:?}", report.equation_strings())
    })?;
    let want_expr: Vec<(u32, Element)> = (k + 1..=p).map(|m| (m, to_element(ring, &displayed(&vars, m)))).collect();
    ensure(report.expressions == want_expr, || {
        format!("({g},{p}): expressions {:?}", report.expression_strings())
    })?;
    Ok(())
}

fn system_extraction() -> Outcome {
    for (g, p) in [(4, 2), (5, 2), (6, 3)] {
        extraction_case(g, p)?;
    }
    Ok("(4,2), (5,2), (6,3) match the recurrence oracle".into())
}

fn hard_lefschetz() -> Outcome {
    let mut count = 0;
    for g in 1..=4 {
        let model = lib(cohomology_model(g))?;
        for k in 0..=2 * g {
            let r = lib(check_hl_cohomology(&model, k))?;
            let lo = k.min(2 * g - k);
            let dim = binomial(2 * g, lo);
            ensure(r.passed(), || format!("g={g} k={k}: {}", r.summary()))?;
            ensure(r.domain_dim == dim && r.codomain_dim == dim && r.rank == dim, || {
                format!("g={g} k={k}: expected C({},{lo}) = {dim}, got {}", 2 * g, r.summary())
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} degrees iso"))
}

fn kunnemann() -> Outcome {
    let mut count = 0;
    for g in 1..=6u32 {
        let model = lib(divisor_model(g))?;
        let gi = g as i64;
        for p in 0..=g {
            let pi = p as i64;
            for s in -gi..=gi {
                if s < pi - gi || s > pi || 2 * pi - s < 0 || 2 * pi - s > gi {
                    continue;
                }
                let r = lib(check_kunnemann(&model, p, s))?;
                // The index-s slice of codimension q is spanned by D0^{q-s} D1^s.
                let expected = usize::from(s >= 0 && s <= pi);
                ensure(r.passed() && r.domain_dim == expected && r.codomain_dim == expected, || {
                    format!("g={g} p={p} s={s}: {}", r.summary())
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} admissible (g, p, s) iso"))
}

/// The matrix of `·z^e` on `CH^p` of the theta-mode ring, computed with the companion
/// recurrence on coefficient vectors in `Θ`, over the library's basis ordering.
fn sympow_oracle_matrix(g: u32, e: u32, dom: &[Monomial], cod: &[Monomial]) -> Matrix {
    let theta_v = |k: u32| {
        let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
        sign / factorial(k)
    };
    let mut cols = Vec::new();
    for m in dom {
        let (a, b) = (m.exponent(0), m.exponent(1));
        // state[j][t] = coefficient of Θ^t z^j.
        let mut state = vec![vec![Rational::zero(); g as usize + 1]; g as usize];
        state[b as usize][a as usize] = Rational::one();
        for _ in 0..e {
            let top = state[g as usize - 1].clone();
            let mut next = vec![vec![Rational::zero(); g as usize + 1]; g as usize];
            next[1..].clone_from_slice(&state[..g as usize - 1]);
            for k in 1..=g {
                for t in 0..=g {
                    if t + k <= g {
                        next[(g - k) as usize][(t + k) as usize] -= &top[t as usize] * theta_v(k);
                    }
                }
            }
            state = next;
        }
        cols.push(
            cod.iter()
                .map(|c| state[c.exponent(1) as usize][c.exponent(0) as usize].clone())
                .collect::<Vec<_>>(),
        );
    }
    Matrix::from_columns(cod.len(), &cols).unwrap()
}

fn conj1_sympow() -> Outcome {
    let mut count = 0;
    for g in 1..=6 {
        let model = lib(lib(SymPowRing::new(g, SymPowMode::Theta))?.model())?;
        let ring = model.ring();
        let z = lib(ring.gen("z"))?;
        let n = 2 * g - 1;
        for p in 0..=n / 2 {
            let r = lib(check_conj1(&model, &z, p))?;
            ensure(r.passed(), || format!("g={g} p={p}: {}", r.summary()))?;
            let e = n - 2 * p;
            let lm = lib(ring.operator_matrix(&lib(ring.pow(&z, e))?, e, p))?;
            let oracle = sympow_oracle_matrix(g, e, &lm.domain_basis, &lm.codomain_basis);
            ensure(oracle == lm.matrix, || format!("g={g} p={p}: matrix differs from the recurrence"))?;
            ensure(rank(&oracle) == lm.domain_basis.len(), || format!("g={g} p={p}: oracle rank deficient"))?;
            count += 1;
        }
    }
    Ok(format!("{count} pairs (g, p) injective"))
}

fn blowup_oracle() -> Outcome {
    let data = lib(BlowupData::linear(3, 0))?;
    let b = BlowupRing::new(data.clone());
    let x = data.x().clone();
    let y = data.y().clone();
    let e = lib(b.exceptional_divisor())?;
    let e2 = lib(b.multiply(&e, &e))?;
    let e3 = lib(b.multiply(&e2, &e))?;
    let jh = lib(b.exceptional(1, &y.one()))?;
    let jh2 = lib(b.exceptional(2, &y.one()))?;
    ensure(e2 == b.scale(&jh, &rat(-1)), || format!("E^2 = {}", b.format(&e2)))?;
    ensure(e3 == jh2, || format!("E^3 = {}", b.format(&e3)))?;
    ensure(b.pushforward(&e3) == lib(x.parse("H^3"))?, || "f_*E^3 != [pt]".into())?;
    ensure(b.pushforward(&e2).is_zero(), || "f_*E^2 != 0".into())?;

    let h = lib(x.gen("H"))?;
    let report = lib(blowup_transfer_check(&data, &h, &frac(-1, 2), 1))?;
    ensure(report.passed(), || report.summary())?;
    // 2 f^*H - E sends f^*H to 2 f^*H^2 and E to j_*h.
    let d = b.add(&b.scale(&b.pullback(&h), &rat(2)), &b.scale(&e, &rat(-1)));
    let (m, _, _) = lib(b.operator_matrix(&d, 1, 1))?;
    ensure(m == Matrix::from_i64(&[&[2, 0], &[0, 1]]), || format!("matrix {m:?}"))?;
    Ok("E^2, E^3, f_*E^3, f_*E^2 and diag(2,1) transfer matrix".into())
}

fn beauville_projectors() -> Outcome {
    let mut count = 0;
    for g in 1..=5 {
        let ring = lib(divisor_model(g))?.ring().clone();
        for p in 0..=g {
            let basis = lib(ring.graded_basis(p))?;
            let coeffs: Vec<Rational> = (0..basis.len()).map(|i| frac(2 * i as i64 + 1, i as i64 + 2)).collect();
            let x = ring.combination(&basis, &coeffs);
            let mut sum = ring.zero();
            for s in 0..=p as i64 {
                let ps = lib(beauville_project(&ring, &x, s))?;
                // D1 has index 1, D0 index 0: the component is the D1^s part.
                let oracle = x.filter(|m| m.exponent(1) as i64 == s);
                ensure(ps == oracle, || format!("g={g} p={p} s={s}: component differs"))?;
                ensure(lib(beauville_project(&ring, &ps, s))? == ps, || format!("g={g} p={p} s={s}: not idempotent"))?;
                for t in 0..=p as i64 {
                    if t != s {
                        ensure(lib(beauville_project(&ring, &ps, t))?.is_zero(), || {
                            format!("g={g} p={p}: projectors {s}, {t} not orthogonal")
                        })?;
                    }
                }
                for k in [2, 3] {
                    let lambda = num_traits::pow(rat(k), (2 * p as i64 - s) as usize);
                    ensure(ring.kstar(&ps, k) == ps.scale(&lambda), || {
                        format!("g={g} p={p} s={s}: not a {k}^* eigenvector")
                    })?;
                }
                sum = &sum + &ps;
                count += 1;
            }
            ensure(sum == x, || format!("g={g} p={p}: components do not sum to x"))?;
        }
    }
    Ok(format!("{count} components checked"))
}

fn bundle_cross_check() -> Outcome {
    for g in 1..=6 {
        let t = lib(theta_model(g))?;
        let chern = (1..=g).map(|k| Ok(lib(w_and_v_classes(&t, k))?.1)).collect::<Result<Vec<_>, String>>()?;
        let bundle = lib(projective_bundle(t.ring(), &chern, g - 1))?;
        let s = lib(SymPowRing::new(g, SymPowMode::Theta))?;
        // Θ^a z^b with a <= g, b <= g-1.
        let dims: Vec<usize> = (0..=2 * g - 1)
            .map(|p| (0..=p).filter(|&b| b < g && p - b <= g).count())
            .collect();
        ensure(bundle.dimensions() == dims && s.ring().dimensions() == dims, || format!("g={g}: dimensions"))?;
        ensure(lib(isomorphic_under_renaming(&bundle, s.ring(), &[("xi", "z")]))?, || {
            format!("g={g}: not isomorphic")
        })?;
    }
    Ok("g <= 6 isomorphic".into())
}

fn sweep_models() -> Result<Vec<(Model, Vec<Element>)>, String> {
    let mut out: Vec<(Model, Vec<Element>)> = Vec::new();
    let divisors = |m: &Model, exprs: &[&str]| -> Result<Vec<Element>, String> {
        exprs.iter().map(|e| lib(m.ring().parse(e))).collect()
    };
    for g in 1..=4 {
        let t = lib(theta_model(g))?;
        let d = divisors(&t, &["theta", "2*theta"])?;
        out.push((t, d));
        let dm = lib(divisor_model(g))?;
        let d = divisors(&dm, &["D0", "D0 + D1", "D0 - 3*D1", "D1"])?;
        out.push((dm, d));
    }
    for g in 1..=3 {
        let s = lib(lib(SymPowRing::new(g, SymPowMode::Theta))?.model())?;
        let d = divisors(&s, &["z", "theta", "z + theta"])?;
        out.push((s, d));
    }
    for q in 1..=2 {
        let c = lib(curve_model(q))?;
        let pt = lib(c.ring().gen("pt"))?;
        for r in 1..=2 {
            for deg in [0, 1, 3] {
                let chern = vec![pt.scale(&rat(deg))];
                let b = lib(bundle_model(&c, &chern, r, Some("xi + 4*pt")))?;
                let d = divisors(&b, &["xi + 4*pt", "xi", "xi + u1"])?;
                out.push((b, d));
            }
        }
        out.push((c.clone(), divisors(&c, &["pt", "u1"])?));
        for m in 1..=2 {
            let prod = lib(product_model(&c, m))?;
            let d = divisors(&prod, &["pt + t", "u1 + t"])?;
            out.push((prod, d));
        }
    }
    for g in 1..=2 {
        for m in 1..=2 {
            let prod = lib(product_model(&lib(divisor_model(g))?, m))?;
            let d = divisors(&prod, &["D0 + t", "D0 + D1 + t"])?;
            out.push((prod, d));
        }
    }
    Ok(out)
}

fn two_imply_one_sweep() -> Outcome {
    let mut total = 0;
    let mut premises = 0;
    for (model, divisors) in sweep_models()? {
        for d in &divisors {
            for p in 0..=model.dim() / 2 {
                let o = lib(two_imply_one(&model, d, p))?;
                ensure(o.holds(), || {
                    format!("counterexample: {} D={} p={p}", model.id(), model.ring().format(d))
                })?;
                total += 1;
                premises += usize::from(o.conj2 && o.hl);
            }
        }
    }
    Ok(format!("{total} triples, {premises} with both premises, no counterexample"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome, Option<u64>); 11] = [
        (1, "Pontryagin identity", pontryagin_identity, Some(5)),
        (2, "pbig determinants", pbig_determinants, Some(5)),
        (3, "minimal equations", minimal_equations, Some(5)),
        (4, "system extraction", system_extraction, Some(10)),
        (5, "cohomological Hard Lefschetz", hard_lefschetz, Some(30)),
        (6, "Kunnemann isomorphisms", kunnemann, Some(30)),
        (7, "conj1 on symmetric products", conj1_sympow, Some(30)),
        (8, "blow-up calculus", blowup_oracle, Some(5)),
        (9, "Beauville projectors", beauville_projectors, Some(10)),
        (10, "projective bundle vs symmetric product", bundle_cross_check, Some(10)),
        (11, "2Imply1 sweep", two_imply_one_sweep, None),
    ];
    let mut failed = 0;
    for (n, name, run, limit) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(secs)) = (&outcome, limit) {
            if elapsed > Duration::from_secs(secs) {
                outcome = Err(format!("took {elapsed:.2?}, limit {secs}s"));
            }
        }
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {why} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
