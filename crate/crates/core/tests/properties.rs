use chowlab::abelian::{cohomology_model, divisor_model, fourier, pontryagin, theta_model};
use chowlab::constructions::{blowup_transfer_check, bundle_model, curve_model, BlowupData, BlowupRing};
use chowlab::lefschetz::check_c0_injectivity;
use chowlab::linalg::{determinant, frac, rank, rank_and_kernel};
use chowlab::sympow::{z_degree, SymPowMode, SymPowRing};
use chowlab::{Element, GradedRing, Matrix, Model, Monomial, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| frac(n, d))
}

fn rational_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(small_rational(), cols), rows)
        .prop_map(|rows| Matrix::from_rows(rows).unwrap())
}

/// Models whose rings together exercise every rewriting feature: power rules, bounds,
/// odd generators and bundle relations.
fn models() -> Vec<Model> {
    let c = curve_model(2).unwrap();
    let pt = c.ring().gen("pt").unwrap();
    vec![
        theta_model(3).unwrap(),
        divisor_model(3).unwrap(),
        cohomology_model(2).unwrap(),
        SymPowRing::new(3, SymPowMode::Theta).unwrap().model().unwrap(),
        bundle_model(&c, &[pt.scale(&frac(2, 1))], 2, Some("xi + 3*pt")).unwrap(),
    ]
}

fn rings() -> Vec<GradedRing> {
    let mut out: Vec<GradedRing> = models().iter().map(|m| m.ring().clone()).collect();
    out.push(SymPowRing::new(3, SymPowMode::Formal).unwrap().ring().clone());
    out
}

/// A homogeneous element of codimension `p` (clamped to the ring) with the given seed
/// coefficients cycled over the basis.
fn homogeneous(ring: &GradedRing, p: u32, coeffs: &[Rational]) -> (u32, Element) {
    let p = p % (ring.truncation_dim() + 1);
    let basis = ring.graded_basis(p).unwrap();
    let c: Vec<Rational> = (0..basis.len()).map(|i| coeffs[i % coeffs.len()].clone()).collect();
    (p, ring.combination(&basis, &c))
}

/// An arbitrary (not necessarily normal) element built from raw exponent vectors.
fn raw_element(ring: &GradedRing, exps: &[(Vec<u32>, Rational)]) -> Element {
    let n = ring.ngens();
    let terms = exps
        .iter()
        .map(|(e, c)| {
            let mut e = e.clone();
            e.resize(n, 0);
            (Monomial::new(e), c.clone())
        })
        .collect();
    ring.raw(terms)
}

fn raw_terms() -> impl Strategy<Value = Vec<(Vec<u32>, Rational)>> {
    prop::collection::vec((prop::collection::vec(0u32..=4, 4), small_rational()), 1..5)
}

fn odd_sign(ring: &GradedRing, p: u32, q: u32) -> Rational {
    let any_odd = ring.odd_mask().iter().any(|&b| b);
    if any_odd && p % 2 == 1 && q % 2 == 1 {
        frac(-1, 1)
    } else {
        frac(1, 1)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_plus_nullity(m in (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| rational_matrix(r, c))) {
        let (rk, kernel) = rank_and_kernel(&m);
        prop_assert_eq!(rk + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn determinant_is_multiplicative(a in rational_matrix(3, 3), b in rational_matrix(3, 3)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(determinant(&ab).unwrap(), determinant(&a).unwrap() * determinant(&b).unwrap());
    }

    #[test]
    fn normal_form_idempotent_and_truncating(which in 0usize..6, exps in raw_terms()) {
        let ring = &rings()[which];
        let x = raw_element(ring, &exps);
        let nf = ring.normal_form(&x);
        prop_assert!(ring.is_normal(&nf));
        prop_assert_eq!(ring.normal_form(&nf), nf.clone());
        for (e, _) in &exps {
            let mut e = e.clone();
            e.resize(ring.ngens(), 0);
            let m = Monomial::new(e);
            if ring.codim(&m) > ring.truncation_dim() {
                prop_assert!(ring.normal_form(&ring.raw([(m, frac(1, 1))].into())).is_zero());
            }
        }
    }

    #[test]
    fn associative_and_graded_commutative(
        which in 0usize..6,
        ps in (0u32..6, 0u32..6, 0u32..6),
        ca in prop::collection::vec(small_rational(), 1..4),
        cb in prop::collection::vec(small_rational(), 1..4),
        cc in prop::collection::vec(small_rational(), 1..4),
    ) {
        let ring = &rings()[which];
        let (p, a) = homogeneous(ring, ps.0, &ca);
        let (q, b) = homogeneous(ring, ps.1, &cb);
        let (_, c) = homogeneous(ring, ps.2, &cc);
        let ab = ring.multiply(&a, &b).unwrap();
        let ba = ring.multiply(&b, &a).unwrap();
        prop_assert_eq!(ab.clone(), ba.scale(&odd_sign(ring, p, q)));
        let left = ring.multiply(&ab, &c).unwrap();
        let right = ring.multiply(&a, &ring.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        if !ab.is_zero() {
            prop_assert_eq!(ring.degree(&ab).unwrap(), Some(p + q));
        }
    }

    #[test]
    fn cycle_class_is_multiplicative(
        which in 0usize..5,
        ps in (0u32..6, 0u32..6),
        ca in prop::collection::vec(small_rational(), 1..4),
        cb in prop::collection::vec(small_rational(), 1..4),
    ) {
        let model = &models()[which];
        if model.cycle_class().is_none() {
            return Ok(());
        }
        let ring = model.ring();
        let (_, a) = homogeneous(ring, ps.0, &ca);
        let (_, b) = homogeneous(ring, ps.1, &cb);
        let target = &model.cycle_class().unwrap().target;
        let lhs = model.cl(&ring.multiply(&a, &b).unwrap()).unwrap();
        let rhs = target.multiply(&model.cl(&a).unwrap(), &model.cl(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fourier_exchanges_products(g in 1u32..=5, cx in prop::collection::vec(small_rational(), 6), cy in prop::collection::vec(small_rational(), 6)) {
        let model = theta_model(g).unwrap();
        let ring = model.ring();
        let elem = |c: &[Rational]| {
            (0..=g).fold(ring.zero(), |acc, b| &acc + &ring.monomial(Monomial::new(vec![b]), c[b as usize].clone()))
        };
        let (x, y) = (elem(&cx), elem(&cy));
        let f = |e: &Element| fourier(&model, e).unwrap();
        let conv = pontryagin(&model, &x, &y).unwrap();
        prop_assert_eq!(f(&conv), ring.multiply(&f(&x), &f(&y)).unwrap());
        let prod = ring.multiply(&x, &y).unwrap();
        let sign = if g % 2 == 0 { frac(1, 1) } else { frac(-1, 1) };
        prop_assert_eq!(f(&prod), pontryagin(&model, &f(&x), &f(&y)).unwrap().scale(&sign));
    }

    #[test]
    fn sympow_normal_forms_have_small_z_degree(g in 1u32..=4, theta in any::<bool>(), exps in raw_terms()) {
        let mode = if theta { SymPowMode::Theta } else { SymPowMode::Formal };
        let s = SymPowRing::new(g, mode).unwrap();
        let nf = s.ring().normal_form(&raw_element(s.ring(), &exps));
        prop_assert!(nf.is_zero() || z_degree(s.ring(), &nf) < g);
    }

    #[test]
    fn blowup_coordinates_round_trip(
        nd in (3u32..=6).prop_flat_map(|n| (Just(n), 0u32..=(n - 2).min(2))),
        p in 0u32..=6,
        coeffs in prop::collection::vec(small_rational(), 1..6),
    ) {
        let b = BlowupRing::new(BlowupData::linear(nd.0, nd.1).unwrap());
        let p = p % (b.dim() + 1);
        let size = b.basis(p).unwrap().len();
        let coords: Vec<Rational> = (0..size).map(|i| coeffs[i % coeffs.len()].clone()).collect();
        let a = b.decompose(p, &coords).unwrap();
        prop_assert_eq!(b.compose(&a, p).unwrap(), coords.clone());
        prop_assert_eq!(b.decompose(p, &b.compose(&a, p).unwrap()).unwrap(), a);
    }

    #[test]
    fn blowup_pushforward_identities(
        nd in (3u32..=6).prop_flat_map(|n| (Just(n), 0u32..=(n - 2).min(2))),
        ps in (0u32..=6, 0u32..=6),
        coeffs in prop::collection::vec(small_rational(), 1..6),
    ) {
        let b = BlowupRing::new(BlowupData::linear(nd.0, nd.1).unwrap());
        let x_ring = b.data().x().clone();
        let (_, x) = homogeneous(&x_ring, ps.0, &coeffs);
        prop_assert_eq!(b.pushforward(&b.pullback(&x)), x.clone());
        let q = ps.1 % (b.dim() + 1);
        let size = b.basis(q).unwrap().len();
        let coords: Vec<Rational> = (0..size).map(|i| coeffs[(i + 1) % coeffs.len()].clone()).collect();
        let alpha = b.decompose(q, &coords).unwrap();
        let lhs = b.pushforward(&b.multiply(&b.pullback(&x), &alpha).unwrap());
        let rhs = x_ring.multiply(&x, &b.pushforward(&alpha)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn g_pushforward_is_a_delta() {
    for n in 3..=6 {
        for d in 0..=(n - 2).min(2) {
            let b = BlowupRing::new(BlowupData::linear(n, d).unwrap());
            let y = b.data().y().clone();
            let r = b.data().r();
            for q in 0..=d {
                for m in y.graded_basis(q).unwrap() {
                    let yy = y.monomial(m, frac(1, 1));
                    for i in 0..=r {
                        let expected = if i == r { yy.clone() } else { y.zero() };
                        assert_eq!(b.g_pushforward(i, &yy).unwrap(), expected, "n={n} d={d} i={i}");
                    }
                    // h^{r+1} = -c_1(N) h^r - ..., and c_1(N) = (r+1) K for a linear center.
                    let k = y.gen("K").unwrap();
                    let expected = y.multiply(&k, &yy).unwrap().scale(&frac(-(r as i64 + 1), 1));
                    assert_eq!(b.g_pushforward(r + 1, &yy).unwrap(), expected, "n={n} d={d} i=r+1");
                }
            }
        }
    }
}

#[test]
fn transfer_sweep_over_linear_centers() {
    // f^*H + mE is ample exactly for -1 < m < 0.
    let ms = [frac(-1, 2), frac(-1, 3), frac(-2, 3), frac(-1, 7), frac(-5, 6)];
    for n in 3..=6u32 {
        for d in 0..=(n - 2).min(2) {
            let data = BlowupData::linear(n, d).unwrap();
            let h = data.x().gen("H").unwrap();
            for p in d..=n / 2 {
                for m in &ms {
                    let report = blowup_transfer_check(&data, &h, m, p).unwrap();
                    assert!(report.passed(), "{}", report.summary());
                }
            }
        }
    }
}

#[test]
fn theta_cycle_class_is_injective() {
    for g in 1..=5 {
        let model = theta_model(g).unwrap();
        for p in 0..=g {
            assert!(check_c0_injectivity(&model, p).unwrap().passed(), "g={g} p={p}");
        }
    }
}

#[test]
fn embedding_pushforward_is_injective_in_the_stable_range() {
    for g in 1..=5u32 {
        let s = SymPowRing::new(g, SymPowMode::Theta).unwrap();
        let ring = s.ring();
        let theta = ring.gen("theta").unwrap();
        for n in 1..=2 * g - 1 {
            for q in 0..=n / 2 {
                // CH^q(C^(n)) spanned by Θ^a z_n^e with a + e = q.
                let mut columns = Vec::new();
                for e in 0..=q.min(n) {
                    let a = q - e;
                    if a > g {
                        continue;
                    }
                    let coeff = ring.pow(&theta, a).unwrap();
                    columns.push(s.i_pushforward(n, &[(coeff, e)]).unwrap());
                }
                let target = q + 2 * g - 1 - n;
                let basis = ring.graded_basis(target).unwrap();
                let cols: Vec<Vec<Rational>> = columns.iter().map(|c| ring.coordinates(c, &basis).unwrap()).collect();
                let m = Matrix::from_columns(basis.len(), &cols).unwrap();
                assert_eq!(rank(&m), cols.len(), "g={g} n={n} q={q}");
            }
        }
    }
}
