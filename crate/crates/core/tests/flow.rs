use g2cone_core::analysis::{closed_form, lapse, ClosedFormKind};
use g2cone_core::flow::{
    apply_symmetry, chart_to_sphere, first_integral, from_sphere, modified_field, monitors, radial_log_derivative, rhs,
    s_infinity, s_one, sphere_to_chart, tangential_field, to_sphere, ChartPoint, SphereState, Symmetry,
};
use g2cone_core::ShapeState;
use proptest::prelude::*;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn positive_state() -> impl Strategy<Value = ShapeState> {
    (0.2..5.0_f64, 0.2..5.0_f64, 0.2..5.0_f64, 0.2..5.0_f64).prop_map(|(a, b, c, d)| ShapeState::new(a, b, c, d))
}

/// Random points of the open pyramid α₄ > α₂ > 0, α₁ > 0, α₃ > 0.
fn pyramid_point() -> impl Strategy<Value = SphereState> {
    (0.05..1.0_f64, 0.05..1.0_f64, 0.05..1.0_f64, 0.01..1.0_f64)
        .prop_map(|(a1, a2, a3, gap)| SphereState::normalized([a1, a2, a3, a2 + gap]).unwrap())
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Value and directional derivative, for exact derivatives along the flow.
#[derive(Clone, Copy)]
struct Dual(f64, f64);

impl std::ops::Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual(self.0 + o.0, self.1 + o.1)
    }
}

impl std::ops::Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual(self.0 - o.0, self.1 - o.1)
    }
}

impl std::ops::Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual(self.0 * o.0, self.1 * o.0 + self.0 * o.1)
    }
}

impl std::ops::Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual(self.0 / o.0, (self.1 * o.0 - self.0 * o.1) / (o.0 * o.0))
    }
}

impl Dual {
    fn c(v: f64) -> Dual {
        Dual(v, 0.0)
    }

    fn ln(self) -> Dual {
        Dual(self.0.ln(), self.1 / self.0)
    }
}

/// Derivative of g along the sphere flow at S.
fn along_flow(g: impl Fn([Dual; 4]) -> Dual, s: &SphereState) -> f64 {
    let w = tangential_field(s).unwrap();
    g(core::array::from_fn(|i| Dual(s.alpha[i], w[i]))).1
}

fn d_dual(b: [Dual; 4]) -> Dual {
    Dual::c(2.0) * b[0] * b[1] * b[3] - b[2] * (b[3] * b[3] - b[1] * b[1])
}

/// Exact derivative along the flow of a quadratic form a·(x_i x_j) − b·(x_k x_l).
fn quadratic_rate(s: &SphereState, (i, j): (usize, usize), (k, l): (usize, usize)) -> f64 {
    let w = tangential_field(s).unwrap();
    let a = s.alpha;
    w[i] * a[j] + a[i] * w[j] - (w[k] * a[l] + a[k] * w[l])
}

fn d_form(a: [f64; 4]) -> f64 {
    2.0 * a[0] * a[1] * a[3] - a[2] * (a[3] * a[3] - a[1] * a[1])
}

proptest! {
    #[test]
    fn field_is_homogeneous_of_degree_zero(s in positive_state(), c in 0.1..10.0_f64) {
        let a = rhs(&s).unwrap().to_array();
        let b = rhs(&s.scaled(c)).unwrap().to_array();
        for i in 0..4 {
            prop_assert!((a[i] - b[i]).abs() <= 1e-12 * a[i].abs().max(1.0));
        }
    }

    #[test]
    fn tangential_field_is_tangent(s in pyramid_point()) {
        let w = tangential_field(&s).unwrap();
        prop_assert!(dot(&w, &s.alpha).abs() <= 1e-13);
    }

    #[test]
    fn beta_is_homogeneous(s in pyramid_point(), c in 0.1..10.0_f64) {
        let v = rhs(&s.as_shape()).unwrap().to_array();
        let vc = rhs(&s.as_shape().scaled(c)).unwrap().to_array();
        let b = radial_log_derivative(&s).unwrap();
        prop_assert!((dot(&vc, &s.alpha) - b).abs() <= 1e-12);
        prop_assert!((dot(&v, &s.alpha) - b).abs() <= 1e-12);
    }

    #[test]
    fn sphere_round_trip(s in positive_state()) {
        let (sp, f) = to_sphere(&s).unwrap();
        let back = from_sphere(&sp, f).unwrap().to_array();
        for (x, y) in back.iter().zip(s.to_array()) {
            prop_assert!((x - y).abs() <= 1e-15 * y.abs().max(1.0) * 4.0);
        }
    }

    #[test]
    fn chart_round_trip(x in 0.0..0.35_f64, y in -0.35..0.35_f64, z in 0.0..0.9_f64) {
        let p = ChartPoint::new(x, y, z);
        prop_assume!(p.radicand() >= 0.05);
        let q = sphere_to_chart(&chart_to_sphere(&p).unwrap());
        prop_assert!((q.x - x).abs() <= 1e-14 && (q.y - y).abs() <= 1e-14 && (q.z - z).abs() <= 1e-14);
    }

    #[test]
    fn tangential_field_is_equivariant(s in pyramid_point(), k in 1usize..=5) {
        let sym = Symmetry::new(k).unwrap();
        let w = tangential_field(&s).unwrap();
        let ws = tangential_field(&apply_symmetry(&s, k).unwrap()).unwrap();
        let sign = if sym.reverses_time() { -1.0 } else { 1.0 };
        let mapped = sym.map(w);
        for i in 0..4 {
            prop_assert!((ws[i] - sign * mapped[i]).abs() <= 1e-12 * w.iter().fold(1.0_f64, |m, x| m.max(x.abs())));
        }
    }

    #[test]
    fn relation_two(s in pyramid_point()) {
        let a = s.alpha;
        let lhs = along_flow(|b| b[0] * b[1] * b[3] / d_dual(b), &s);
        let rhs = a[0] * a[2] / d_form(a);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn relation_three_with_unit_factor(s in pyramid_point()) {
        let a = s.alpha;
        let d24 = a[3] * a[3] - a[1] * a[1];
        let lhs = along_flow(|b| (b[2] * (b[3] * b[3] - b[1] * b[1]) / (b[3] * b[1] * b[0])).ln(), &s);
        let rhs = d_form(a) / (a[3] * a[1] * d24);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn relation_four_on_the_face(a2 in 0.05..1.0_f64, a3 in 0.05..1.0_f64, a4 in 0.05..1.0_f64) {
        let s = SphereState::normalized([0.0, a2, a3, a4]).unwrap();
        let a = s.alpha;
        let lhs = along_flow(|b| (b[1] / b[3]).ln(), &s);
        let rhs = (a[3] * a[3] - a[1] * a[1]) / (a[1] * a[2] * a[3]);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn relation_five_on_the_arc(a2 in 0.05..1.0_f64, a3 in 0.05..1.0_f64) {
        let s = SphereState::normalized([0.0, a2, a3, a2]).unwrap();
        let a = s.alpha;
        let q = a[2] / a[3];
        let c = 2.0 / SQRT3;
        let lhs = along_flow(|b| b[2] / b[3], &s);
        let rhs = 1.5 / a[3] * (c + q) * (c - q);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn wall_g1(a2 in 0.05..1.0_f64, a3 in 0.05..1.0_f64, a4 in 0.05..1.0_f64) {
        // G₁ = α₂α₄ − α₁α₃ = 0
        let s = SphereState::normalized([a2 * a4 / a3, a2, a3, a4]).unwrap();
        let m = monitors(&s, 1.0);
        prop_assert!(m.g1.unwrap().abs() <= 1e-15);
        let rate = quadratic_rate(&s, (1, 3), (0, 2));
        let expect = -2.0 / s.alpha[1] * m.g2.unwrap();
        prop_assert!((rate - expect).abs() <= 1e-8 * expect.abs().max(1.0), "{rate} vs {expect}");
    }

    #[test]
    fn wall_g2(a2 in 0.05..1.0_f64, a3 in 0.05..1.0_f64, a4 in 0.05..1.0_f64) {
        // G₂ = α₁α₄ − α₂α₃ = 0
        let s = SphereState::normalized([a2 * a3 / a4, a2, a3, a4]).unwrap();
        let m = monitors(&s, 1.0);
        prop_assert!(m.g2.unwrap().abs() <= 1e-15);
        let rate = quadratic_rate(&s, (0, 3), (1, 2));
        let expect = -2.0 / s.alpha[1] * m.g1.unwrap();
        prop_assert!((rate - expect).abs() <= 1e-8 * expect.abs().max(1.0), "{rate} vs {expect}");
    }
}

/// Eighth-order central derivative of `g` at `x`.
fn d8(g: impl Fn(f64) -> [f64; 4], x: f64, h: f64) -> [f64; 4] {
    const W: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    core::array::from_fn(|i| {
        (0..4).map(|k| W[k] * (g(x + (k + 1) as f64 * h)[i] - g(x - (k + 1) as f64 * h)[i])).sum::<f64>() / h
    })
}

#[test]
fn unit_state() {
    assert_eq!(rhs(&ShapeState::new(1.0, 1.0, 1.0, 1.0)).unwrap().to_array(), [0.0, 0.0, 1.0, 1.0]);
    assert!(rhs(&ShapeState::new(1.0, 0.0, 1.0, 1.0)).is_err());
}

#[test]
fn field_matches_bgg_curve_at_r3() {
    let kind = ClosedFormKind::Bgg;
    let dr = d8(|r| closed_form(kind, r).unwrap().to_array(), 3.0, 1e-3);
    let dt_dr = lapse(kind, 3.0).unwrap();
    let v = rhs(&closed_form(kind, 3.0).unwrap()).unwrap().to_array();
    for i in 0..4 {
        assert!((dr[i] / dt_dr - v[i]).abs() <= 1e-10, "component {i}: {} vs {}", dr[i] / dt_dr, v[i]);
    }
}

#[test]
fn first_integral_values() {
    for mu in [0.1, 0.5, 0.9] {
        let lam = ((1.0 - mu * mu) / 2.0_f64).sqrt();
        let f = first_integral(&ShapeState::new(mu, lam, 0.0, lam));
        assert!((f - 2.0 * mu * lam * lam).abs() < 1e-15);
    }
    for r in [1.5, 2.0, 7.0, 40.0] {
        let f = first_integral(&closed_form(ClosedFormKind::Bs, r).unwrap());
        // The two terms of F grow like r³ and cancel.
        assert!((f + 1.0 / (3.0 * SQRT3)).abs() < 1e-15 * r * r * r, "{f}");
    }
    for r in [2.3, 3.0, 10.0] {
        let f = first_integral(&closed_form(ClosedFormKind::Bgg, r).unwrap());
        assert!((f + 27.0 / 8.0).abs() < 1e-15 * r * r * r, "{f}");
    }
}

#[test]
fn stationary_points_and_their_monitors() {
    for s in [s_one(), s_infinity()] {
        let w = tangential_field(&s).unwrap();
        assert!(dot(&w, &w).sqrt() <= 1e-12);
    }
    let m = monitors(&s_infinity(), 1.0);
    assert!((m.f4.unwrap() - 2.0 / SQRT3).abs() < 1e-15);
    assert_eq!(m.f2, None);
    let c = chart_to_sphere(&ChartPoint::new(0.0, 0.0, 0.0)).unwrap();
    let h = 1.0 / 2.0_f64.sqrt();
    assert!(c.distance(&SphereState::new(0.0, h, 0.0, h)) < 1e-15);
}

#[test]
fn modified_field_vanishes_on_the_arc() {
    for mu in [0.1, 0.5, 0.9] {
        assert_eq!(modified_field(&ChartPoint::new(0.0, 0.0, mu)).unwrap(), [0.0; 3]);
    }
}
