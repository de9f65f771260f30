use g2cone_core::analysis::{closed_form, lapse, ClosedFormKind};
use g2cone_core::exterior::{
    coframe_differentials, exterior_derivative, g2_form, solve_torsion_free_derivs, torsion_residual, wrong_sign_form,
    Blade, G2Structure, KForm,
};
use g2cone_core::flow::rhs;
use g2cone_core::linalg::rank;
use g2cone_core::shoot::integrate_shape;
use g2cone_core::{DerivVector, ShapeState};
use proptest::prelude::*;

fn form_strategy(degree: usize) -> impl Strategy<Value = KForm> {
    let blades = Blade::all_of_degree(degree);
    let n = blades.len();
    proptest::collection::vec(-2.0..2.0_f64, n).prop_map(move |cs| {
        let mut f = KForm::zero(degree);
        for (b, c) in blades.iter().zip(cs) {
            let idx: Vec<usize> = b.indices().collect();
            f = &f + &KForm::monomial(&idx, c);
        }
        f
    })
}

fn positive_state() -> impl Strategy<Value = ShapeState> {
    (0.2..5.0_f64, 0.2..5.0_f64, 0.2..5.0_f64, 0.2..5.0_f64).prop_map(|(a, b, c, d)| ShapeState::new(a, b, c, d))
}

fn rel_close(a: [f64; 4], b: [f64; 4], tol: f64) -> bool {
    let scale = b.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

proptest! {
    #[test]
    fn wedge_is_associative((a, b, c) in (0usize..3, 0usize..3, 0usize..2)
        .prop_flat_map(|(p, q, r)| (form_strategy(p), form_strategy(q), form_strategy(r))))
    {
        let left = a.wedge(&b).wedge(&c);
        let right = a.wedge(&b.wedge(&c));
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn wedge_is_graded_commutative(a in form_strategy(2), b in form_strategy(3), c in form_strategy(1), d in form_strategy(3)) {
        // even · odd commutes, odd · odd anticommutes
        prop_assert!(a.wedge(&b).approx_eq(&b.wedge(&a), 1e-13));
        prop_assert!(c.wedge(&d).approx_eq(&(-&d.wedge(&c)), 1e-13));
        prop_assert_eq!(c.wedge(&c).max_abs_coefficient(), 0.0);
    }

    #[test]
    fn double_star_is_identity(a in (0usize..=7).prop_flat_map(form_strategy)) {
        prop_assert_eq!(a.hodge_star().hodge_star(), a);
    }

    #[test]
    fn torsion_free_derivs_match_rhs(s in positive_state()) {
        let solved = solve_torsion_free_derivs(&s).unwrap().to_array();
        let analytic = rhs(&s).unwrap().to_array();
        prop_assert!(rel_close(solved, analytic, 1e-9), "{solved:?} vs {analytic:?}");
        let res = torsion_residual(&s, &rhs(&s).unwrap()).unwrap();
        prop_assert!(res.max() <= 1e-10, "{res:?}");
    }

    #[test]
    fn torsion_system_has_rank_four(s in positive_state()) {
        let (m, _) = G2Structure::default().linear_system(&s).unwrap();
        prop_assert_eq!(rank(&m, 1e-10), 4);
    }
}

#[test]
fn g2_form_support() {
    let psi = g2_form();
    let mut tuples: Vec<Vec<usize>> = psi.terms().map(|(b, _)| b.indices().collect()).collect();
    tuples.sort();
    let mut expect =
        vec![vec![4, 5, 6], vec![2, 5, 7], vec![1, 3, 5], vec![1, 2, 6], vec![3, 6, 7], vec![2, 3, 4], vec![1, 4, 7]];
    expect.sort();
    assert_eq!(tuples, expect);
    assert!(psi.terms().all(|(_, c)| c.abs() == 1.0));
    assert_eq!(psi.coefficient(&[4, 5, 6]), 1.0);
}

/// 1-forms as coefficient arrays over e¹…e⁷; a 2-form as the antisymmetric
/// matrix of its coefficients.
fn wedge11(a: &[f64; 7], b: &[f64; 7]) -> [[f64; 7]; 7] {
    let mut m = [[0.0; 7]; 7];
    for i in 0..7 {
        for j in 0..7 {
            m[i][j] = a[i] * b[j] - a[j] * b[i];
        }
    }
    m
}

#[test]
fn de1_at_unit_state_by_substitution() {
    let e = |i: usize| {
        let mut v = [0.0; 7];
        v[i - 1] = 1.0;
        v
    };
    let half =
        |a: [f64; 7], b: [f64; 7], sign: f64| -> [f64; 7] { core::array::from_fn(|i| 0.5 * (a[i] + sign * b[i])) };
    let (eta2, eta3) = (half(e(2), e(5), 1.0), half(e(3), e(6), 1.0));
    let (et2, et3) = (half(e(2), e(5), -1.0), half(e(3), e(6), -1.0));
    let (p, q) = (wedge11(&eta2, &eta3), wedge11(&et2, &et3));
    let de1 = coframe_differentials(&ShapeState::new(1.0, 1.0, 1.0, 1.0), &DerivVector::default()).unwrap()[0].clone();
    let mut nonzero = 0;
    for i in 0..7 {
        for j in (i + 1)..7 {
            let expect = -2.0 * (p[i][j] + q[i][j]);
            assert!((de1.coefficient(&[i + 1, j + 1]) - expect).abs() < 1e-15, "({}, {})", i + 1, j + 1);
            if expect != 0.0 {
                nonzero += 1;
            }
        }
    }
    // The e²⁶ and e³⁵ cross terms cancel between η and η̃.
    assert_eq!(nonzero, 2);
    assert_eq!(de1.coefficient(&[2, 3]), -1.0);
    assert_eq!(de1.coefficient(&[5, 6]), -1.0);
}

#[test]
fn de7_vanishes_and_dt_parts_are_linear() {
    let s = ShapeState::new(0.7, 1.3, 0.9, 2.1);
    let d = DerivVector::new(0.3, -0.2, 1.1, 0.4);
    let d2 = DerivVector::from_array(d.to_array().map(|x| 2.0 * x));
    let zero = coframe_differentials(&s, &DerivVector::default()).unwrap();
    let one = coframe_differentials(&s, &d).unwrap();
    let two = coframe_differentials(&s, &d2).unwrap();
    assert_eq!(one[6].max_abs_coefficient(), 0.0);
    for i in 0..7 {
        let lhs = &two[i] - &one[i];
        let rhs = &one[i] - &zero[i];
        assert!(lhs.approx_eq(&rhs, 1e-14));
        // dt-parts only: every term of the difference contains e⁷.
        assert!(rhs.terms().all(|(b, _)| b.indices().any(|k| k == 7)));
    }
}

#[test]
fn constant_forms_and_dt_are_closed() {
    let s = ShapeState::new(0.7, 1.3, 0.9, 2.1);
    let diffs = coframe_differentials(&s, &rhs(&s).unwrap()).unwrap();
    assert_eq!(exterior_derivative(&KForm::scalar(3.0), &diffs).max_abs_coefficient(), 0.0);
    assert_eq!(exterior_derivative(&KForm::basis(7), &diffs).max_abs_coefficient(), 0.0);
}

/// Central first derivative of order 8 from nine equally spaced values.
fn d8(values: &[f64; 9], h: f64) -> f64 {
    const W: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    (0..4).map(|k| W[k] * (values[5 + k] - values[3 - k])).sum::<f64>() / h
}

#[test]
fn d_squared_vanishes_along_a_solution() {
    // d(deⁱ) = e⁷ ∧ ∂ₜ(deⁱ) + (spatial d of deⁱ with frozen coefficients).
    let start = ShapeState::new(0.8, 1.1, 1.4, 1.6);
    let h = 0.02;
    let traj = integrate_shape(start, 0.0, 0.2, 1e-13).unwrap();
    let at = |t: f64| {
        let s = traj.samples.iter().find(|x| (x.t - t).abs() < 1e-9).expect("grid sample").shape;
        coframe_differentials(&s, &rhs(&s).unwrap()).unwrap()
    };
    let stencil: Vec<_> = (0..9).map(|k| at(k as f64 * h)).collect();
    let centre = &stencil[4];
    let e7 = KForm::basis(7);
    for i in 0..7 {
        let mut dt_part = KForm::zero(2);
        for b in Blade::all_of_degree(2) {
            let idx: Vec<usize> = b.indices().collect();
            let vals: [f64; 9] = core::array::from_fn(|k| stencil[k][i].coefficient(&idx));
            dt_part = &dt_part + &KForm::monomial(&idx, d8(&vals, h));
        }
        let dd = &e7.wedge(&dt_part) + &exterior_derivative(&centre[i], centre);
        assert!(dd.max_abs_coefficient() < 1e-10, "d²e{} = {}", i + 1, dd.max_abs_coefficient());
    }
}

#[test]
fn unit_state_torsion() {
    let s = ShapeState::new(1.0, 1.0, 1.0, 1.0);
    let good = torsion_residual(&s, &DerivVector::new(0.0, 0.0, 1.0, 1.0)).unwrap();
    assert!(good.max() <= 1e-12);
    let bad = torsion_residual(&s, &DerivVector::default()).unwrap();
    assert!(bad.max() > 0.1);
    let solved = solve_torsion_free_derivs(&s).unwrap().to_array();
    assert!(rel_close(solved, [0.0, 0.0, 1.0, 1.0], 1e-10));
}

#[test]
fn solver_matches_chain_rule_on_the_bs_curve() {
    let kind = ClosedFormKind::Bs;
    let r = 2.0;
    let h = 1e-3;
    let vals: Vec<[f64; 4]> = (-4..=4).map(|k| closed_form(kind, r + k as f64 * h).unwrap().to_array()).collect();
    let dt_dr = lapse(kind, r).unwrap();
    let expect: [f64; 4] = core::array::from_fn(|i| {
        let v: [f64; 9] = core::array::from_fn(|k| vals[k][i]);
        d8(&v, h) / dt_dr
    });
    let solved = solve_torsion_free_derivs(&closed_form(kind, r).unwrap()).unwrap().to_array();
    assert!(rel_close(solved, expect, 1e-8), "{solved:?} vs {expect:?}");
}

#[test]
fn wrong_sign_form_has_no_torsion_free_direction() {
    let g = G2Structure::from_form(wrong_sign_form());
    for s in [ShapeState::new(1.0, 1.0, 1.0, 1.0), ShapeState::new(0.7, 1.3, 0.9, 2.1)] {
        assert!(g.solve_torsion_free_derivs(&s).is_err());
    }
}

#[test]
fn non_positive_states_rejected() {
    let d = DerivVector::default();
    assert!(torsion_residual(&ShapeState::new(1.0, 0.0, 1.0, 1.0), &d).is_err());
    assert!(solve_torsion_free_derivs(&ShapeState::new(1.0, 1.0, -1.0, 1.0)).is_err());
}
