//! Exterior algebra on the 7-dimensional orthonormal coframe e¹…e⁷.
//!
//! The coframe is
//!
//! ```text
//! e^i     = A_i (η_i + η̃_i),   e^{i+3} = B_i (η_i − η̃_i),   i = 1,2,3,
//! e^7     = dt,
//! ```
//!
//! where η, η̃ are the left-invariant coframes of the two SU(2) factors with
//! dη_i = −2 η_{i+1} ∧ η_{i+2} (indices mod 3). Forms are stored sparsely as
//! maps from basis monomials to coefficients; every form we differentiate
//! (Ψ, ★Ψ, the e^i themselves) has constant coefficients in this basis, so
//! d only acts through the structure equations of the coframe.
//!
//! The torsion-free condition dΨ = 0, d★Ψ = 0 is affine in the derivatives
//! (A₁', A₂', B₁', B₂'), which gives an ODE right-hand side that is
//! independent of the closed-form one in [`crate::flow::rhs`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::math::abs;
use crate::state::{DerivVector, ShapeState};

pub const DIM: usize = 7;

/// A basis monomial e^{i₁…i_k}, stored as a bit set over {1..7}
/// (bit `i − 1` for index `i`). Iterating the bits in order yields the
/// strictly increasing index tuple.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(u8);

impl Blade {
    pub const SCALAR: Blade = Blade(0);
    pub const VOLUME: Blade = Blade(0b111_1111);

    /// Sorts `indices` into a blade; returns the permutation sign, or `None`
    /// when an index repeats (the monomial vanishes).
    ///
    /// # Panics
    /// If an index is outside 1..=7.
    pub fn from_indices(indices: &[usize]) -> Option<(Blade, f64)> {
        let mut mask = 0u8;
        let mut sign = 1.0;
        for &i in indices {
            assert!((1..=DIM).contains(&i), "coframe index {i} outside 1..=7");
            let bit = 1u8 << (i - 1);
            if mask & bit != 0 {
                return None;
            }
            // Moving e^i to its sorted slot passes every already-placed larger index.
            if (mask >> i).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        Some((Blade(mask), sign))
    }

    pub fn single(i: usize) -> Blade {
        assert!((1..=DIM).contains(&i));
        Blade(1 << (i - 1))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (1..=DIM).filter(move |i| self.0 & (1 << (i - 1)) != 0)
    }

    pub fn complement(self) -> Blade {
        Blade(!self.0 & Self::VOLUME.0)
    }

    /// All blades of the given degree, in increasing lexicographic order of
    /// their index tuples.
    pub fn all_of_degree(k: usize) -> Vec<Blade> {
        let mut out: Vec<Blade> = (0u8..=Self::VOLUME.0).filter(|m| m.count_ones() as usize == k).map(Blade).collect();
        out.sort_by(|a, b| a.indices().cmp(b.indices()));
        out
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^")?;
        if self.0 == 0 {
            return write!(f, "∅");
        }
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Sign of e^a ∧ e^b relative to the sorted monomial, zero if they overlap.
fn wedge_sign(a: Blade, b: Blade) -> f64 {
    if a.0 & b.0 != 0 {
        return 0.0;
    }
    let mut inversions = 0u32;
    for j in b.indices() {
        inversions += (a.0 >> j).count_ones();
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Exterior form of fixed degree with constant coefficients on the coframe.
#[derive(Clone, Debug)]
pub struct KForm {
    degree: usize,
    terms: BTreeMap<Blade, f64>,
}

impl KForm {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn scalar(c: f64) -> Self {
        Self::zero(0).with_term(Blade::SCALAR, c)
    }

    /// The coframe 1-form e^i.
    pub fn basis(i: usize) -> Self {
        Self::zero(1).with_term(Blade::single(i), 1.0)
    }

    /// `c · e^{i₁} ∧ … ∧ e^{i_k}` for an arbitrary (unsorted) index list.
    pub fn monomial(indices: &[usize], c: f64) -> Self {
        let mut f = Self::zero(indices.len());
        if let Some((blade, sign)) = Blade::from_indices(indices) {
            f.add_term(blade, sign * c);
        }
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn with_term(mut self, blade: Blade, c: f64) -> Self {
        self.add_term(blade, c);
        self
    }

    fn add_term(&mut self, blade: Blade, c: f64) {
        debug_assert_eq!(blade.degree(), self.degree);
        if c != 0.0 {
            *self.terms.entry(blade).or_insert(0.0) += c;
        }
    }

    /// Coefficient of the monomial with the given (possibly unsorted) indices,
    /// including the permutation sign.
    pub fn coefficient(&self, indices: &[usize]) -> f64 {
        match Blade::from_indices(indices) {
            Some((b, s)) => s * self.terms.get(&b).copied().unwrap_or(0.0),
            None => 0.0,
        }
    }

    /// Nonzero terms in blade order.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, f64)> + '_ {
        self.terms.iter().filter(|(_, c)| **c != 0.0).map(|(b, c)| (*b, *c))
    }

    /// Number of stored coefficients that are exactly nonzero.
    pub fn nonzero_count(&self) -> usize {
        self.terms.values().filter(|c| **c != 0.0).count()
    }

    /// ∞-norm of the coefficient vector.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(abs(*c)))
    }

    pub fn approx_eq(&self, other: &KForm, tol: f64) -> bool {
        self.degree == other.degree && (self - other).max_abs_coefficient() <= tol
    }

    /// Coefficients in the order of [`Blade::all_of_degree`].
    pub fn dense(&self) -> Vec<f64> {
        Blade::all_of_degree(self.degree).into_iter().map(|b| self.terms.get(&b).copied().unwrap_or(0.0)).collect()
    }

    pub fn wedge(&self, other: &KForm) -> KForm {
        // Degrees past 7 only admit the zero form.
        let mut out = KForm::zero(self.degree + other.degree);
        if out.degree > DIM {
            return out;
        }
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let s = wedge_sign(a, b);
                if s != 0.0 {
                    out.add_term(Blade(a.0 | b.0), s * ca * cb);
                }
            }
        }
        out
    }

    /// Hodge star for the Euclidean metric on the coframe with orientation
    /// e^{1234567}: ★e^I = sign(I, Iᶜ) e^{Iᶜ}.
    pub fn hodge_star(&self) -> KForm {
        let mut out = KForm::zero(DIM - self.degree.min(DIM));
        for (b, c) in self.terms() {
            let comp = b.complement();
            out.add_term(comp, wedge_sign(b, comp) * c);
        }
        out
    }
}

impl PartialEq for KForm {
    fn eq(&self, other: &Self) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let get = |f: &KForm, b: &Blade| f.terms.get(b).copied().unwrap_or(0.0);
        self.terms.keys().chain(other.terms.keys()).all(|b| get(self, b) == get(other, b))
    }
}

impl Add for &KForm {
    type Output = KForm;
    fn add(self, rhs: &KForm) -> KForm {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (b, c) in rhs.terms() {
            out.add_term(b, c);
        }
        out
    }
}

impl Sub for &KForm {
    type Output = KForm;
    fn sub(self, rhs: &KForm) -> KForm {
        self + &(-rhs)
    }
}

impl Neg for &KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self * -1.0
    }
}

impl Mul<f64> for &KForm {
    type Output = KForm;
    fn mul(self, c: f64) -> KForm {
        let mut out = KForm::zero(self.degree);
        for (b, v) in self.terms() {
            out.add_term(b, c * v);
        }
        out
    }
}

/// Ψ = e^{564}+e^{527}+e^{513}+e^{621}+e^{637}+e^{432}+e^{417}.
pub fn g2_form() -> KForm {
    const TRIPLES: [[usize; 3]; 7] = [[5, 6, 4], [5, 2, 7], [5, 1, 3], [6, 2, 1], [6, 3, 7], [4, 3, 2], [4, 1, 7]];
    TRIPLES.iter().fold(KForm::zero(3), |acc, t| &acc + &KForm::monomial(t, 1.0))
}

/// Metric functions of the general (A₁,A₂,A₃,B₁,B₂,B₃) ansatz with derivatives.
#[derive(Debug, Clone, Copy)]
struct Coframe {
    a: [f64; 3],
    b: [f64; 3],
    da: [f64; 3],
    db: [f64; 3],
}

impl Coframe {
    fn from_shape(state: &ShapeState, derivs: &DerivVector) -> Self {
        Self {
            a: [state.a1, state.a2, state.a2],
            b: [state.b1, state.b2, state.b2],
            da: [derivs.da1, derivs.da2, derivs.da2],
            db: [derivs.db1, derivs.db2, derivs.db2],
        }
    }

    /// η_i and η̃_i expressed in the e-basis.
    fn invariant_forms(&self) -> ([KForm; 3], [KForm; 3]) {
        let eta = core::array::from_fn(|i| {
            &(&KForm::basis(i + 1) * (0.5 / self.a[i])) + &(&KForm::basis(i + 4) * (0.5 / self.b[i]))
        });
        let eta_t = core::array::from_fn(|i| {
            &(&KForm::basis(i + 1) * (0.5 / self.a[i])) - &(&KForm::basis(i + 4) * (0.5 / self.b[i]))
        });
        (eta, eta_t)
    }

    fn differentials(&self) -> [KForm; DIM] {
        let (eta, eta_t) = self.invariant_forms();
        let dt = KForm::basis(7);
        let mut out: [KForm; DIM] = core::array::from_fn(|_| KForm::zero(2));
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let plus = &eta[j].wedge(&eta[k]) + &eta_t[j].wedge(&eta_t[k]);
            let minus = &eta[j].wedge(&eta[k]) - &eta_t[j].wedge(&eta_t[k]);
            out[i] = &(&dt.wedge(&KForm::basis(i + 1)) * (self.da[i] / self.a[i])) + &(&plus * (-2.0 * self.a[i]));
            out[i + 3] = &(&dt.wedge(&KForm::basis(i + 4)) * (self.db[i] / self.b[i])) + &(&minus * (-2.0 * self.b[i]));
        }
        out
    }
}

/// de¹ … de⁷ in the e-basis at the given state and t-derivatives.
pub fn coframe_differentials(state: &ShapeState, derivs: &DerivVector) -> Result<[KForm; DIM]> {
    let state = state.require_positive()?;
    Ok(Coframe::from_shape(&state, derivs).differentials())
}

/// d of a form with constant coefficients, by the graded Leibniz rule.
pub fn exterior_derivative(form: &KForm, diffs: &[KForm; DIM]) -> KForm {
    let mut out = KForm::zero(form.degree() + 1);
    for (blade, c) in form.terms() {
        let idx: Vec<usize> = blade.indices().collect();
        for (pos, _) in idx.iter().enumerate() {
            let mut term = KForm::scalar(if pos % 2 == 0 { c } else { -c });
            for (q, &i) in idx.iter().enumerate() {
                term = if q == pos { term.wedge(&diffs[i - 1]) } else { term.wedge(&KForm::basis(i)) };
            }
            out = &out + &term;
        }
    }
    out
}

/// A G2 3-form together with its Hodge dual.
#[derive(Debug, Clone)]
pub struct G2Structure {
    psi: KForm,
    star_psi: KForm,
}

/// (‖dΨ‖∞, ‖d★Ψ‖∞) at a state/derivative pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionResidual {
    pub d_psi: f64,
    pub d_star_psi: f64,
}

impl TorsionResidual {
    pub fn max(&self) -> f64 {
        self.d_psi.max(self.d_star_psi)
    }
}

impl Default for G2Structure {
    fn default() -> Self {
        Self::from_form(g2_form())
    }
}

impl G2Structure {
    pub fn from_form(psi: KForm) -> Self {
        let star_psi = psi.hodge_star();
        Self { psi, star_psi }
    }

    pub fn psi(&self) -> &KForm {
        &self.psi
    }

    pub fn star_psi(&self) -> &KForm {
        &self.star_psi
    }

    /// dΨ and d★Ψ as forms.
    pub fn torsion_forms(&self, state: &ShapeState, derivs: &DerivVector) -> Result<(KForm, KForm)> {
        let diffs = coframe_differentials(state, derivs)?;
        Ok((exterior_derivative(&self.psi, &diffs), exterior_derivative(&self.star_psi, &diffs)))
    }

    pub fn torsion_residual(&self, state: &ShapeState, derivs: &DerivVector) -> Result<TorsionResidual> {
        let (d_psi, d_star) = self.torsion_forms(state, derivs)?;
        Ok(TorsionResidual { d_psi: d_psi.max_abs_coefficient(), d_star_psi: d_star.max_abs_coefficient() })
    }

    /// Concatenated dense coefficients of dΨ (degree 4) and d★Ψ (degree 5).
    fn residual_vector(&self, state: &ShapeState, derivs: &DerivVector) -> Result<Vec<f64>> {
        let (a, b) = self.torsion_forms(state, derivs)?;
        let mut v = a.dense();
        v.extend(b.dense());
        Ok(v)
    }

    /// The affine map derivs ↦ residual coefficients as `(M, r₀)` with
    /// residual = M·derivs + r₀.
    pub fn linear_system(&self, state: &ShapeState) -> Result<(Matrix, Vec<f64>)> {
        let r0 = self.residual_vector(state, &DerivVector::default())?;
        let mut m = Matrix::zeros(r0.len(), 4);
        for j in 0..4 {
            let mut unit = [0.0; 4];
            unit[j] = 1.0;
            let rj = self.residual_vector(state, &DerivVector::from_array(unit))?;
            let col: Vec<f64> = rj.iter().zip(&r0).map(|(x, y)| x - y).collect();
            m.set_column(j, &col);
        }
        Ok((m, r0))
    }

    /// Derivatives that make Ψ closed and coclosed, by least squares over
    /// all residual coefficients.
    pub fn solve_torsion_free_derivs(&self, state: &ShapeState) -> Result<DerivVector> {
        let (m, r0) = self.linear_system(state)?;
        let rhs: Vec<f64> = r0.iter().map(|x| -x).collect();
        let (x, residual) = linalg::lstsq(&m, &rhs)?;
        if !(residual <= 1e-8) {
            return Err(Error::Inconsistent { residual });
        }
        Ok(DerivVector::new(x[0], x[1], x[2], x[3]))
    }
}

/// Ψ with the sign of the e^{527} term reversed; no derivative vector makes
/// it closed and coclosed. Used as a negative control.
pub fn wrong_sign_form() -> KForm {
    &g2_form() - &KForm::monomial(&[5, 2, 7], 2.0)
}

/// Torsion residual of the standard Ψ.
pub fn torsion_residual(state: &ShapeState, derivs: &DerivVector) -> Result<TorsionResidual> {
    G2Structure::default().torsion_residual(state, derivs)
}

/// Torsion-free derivatives for the standard Ψ.
pub fn solve_torsion_free_derivs(state: &ShapeState) -> Result<DerivVector> {
    G2Structure::default().solve_torsion_free_derivs(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_of_basis_vectors() {
        let e12 = KForm::basis(1).wedge(&KForm::basis(2));
        assert_eq!(e12.coefficient(&[1, 2]), 1.0);
        let e21 = KForm::basis(2).wedge(&KForm::basis(1));
        assert_eq!(e21.coefficient(&[1, 2]), -1.0);
        let e11 = KForm::basis(1).wedge(&KForm::basis(1));
        assert_eq!(e11, KForm::zero(2));
        assert_eq!(e11.nonzero_count(), 0);
    }

    #[test]
    fn wedge_past_top_degree_is_zero() {
        let vol = KForm::scalar(1.0).hodge_star();
        let w = vol.wedge(&KForm::basis(3));
        assert_eq!(w.degree(), 8);
        assert_eq!(w.nonzero_count(), 0);
    }

    #[test]
    fn star_of_scalar_and_volume() {
        let vol = KForm::scalar(1.0).hodge_star();
        assert_eq!(vol.degree(), 7);
        assert_eq!(vol.coefficient(&[1, 2, 3, 4, 5, 6, 7]), 1.0);
        assert_eq!(vol.hodge_star(), KForm::scalar(1.0));
    }

    #[test]
    fn g2_form_monomials() {
        let psi = g2_form();
        assert_eq!(psi.nonzero_count(), 7);
        assert_eq!(psi.coefficient(&[4, 5, 6]), 1.0);
        assert_eq!(psi.coefficient(&[5, 6, 4]), 1.0);
        // parity of each listed triple decides the sorted sign
        for (t, s) in [
            ([5, 2, 7], -1.0),
            ([5, 1, 3], 1.0),
            ([6, 2, 1], -1.0),
            ([6, 3, 7], -1.0),
            ([4, 3, 2], -1.0),
            ([4, 1, 7], -1.0),
        ] {
            let mut sorted = t;
            sorted.sort();
            assert_eq!(psi.coefficient(&sorted), s, "{t:?}");
        }
        assert_eq!(psi.coefficient(&[1, 2, 3]), 0.0);
        assert_eq!(psi.hodge_star().hodge_star(), psi);
    }

    #[test]
    fn de7_vanishes_and_zero_form_has_zero_derivative() {
        let s = ShapeState::new(0.7, 1.3, 0.4, 2.1);
        let d = DerivVector::new(0.1, -0.2, 0.3, 0.4);
        let diffs = coframe_differentials(&s, &d).unwrap();
        assert_eq!(diffs[6].nonzero_count(), 0);
        assert_eq!(exterior_derivative(&KForm::scalar(3.0), &diffs), KForm::zero(1));
        assert_eq!(exterior_derivative(&KForm::basis(7), &diffs), KForm::zero(2));
    }

    #[test]
    fn dt_parts_are_linear_in_derivatives() {
        let s = ShapeState::new(0.9, 1.1, 0.6, 1.4);
        let d = DerivVector::new(0.3, -0.7, 1.2, 0.5);
        let d2 = DerivVector::from_array(d.to_array().map(|x| 2.0 * x));
        let one = coframe_differentials(&s, &d).unwrap();
        let two = coframe_differentials(&s, &d2).unwrap();
        let zero = coframe_differentials(&s, &DerivVector::default()).unwrap();
        for i in 0..7 {
            let dt_one = &one[i] - &zero[i];
            let diff = &two[i] - &one[i];
            assert!(diff.approx_eq(&dt_one, 1e-14));
            for (b, _) in dt_one.terms() {
                assert!(b.indices().any(|k| k == 7));
            }
        }
    }

    #[test]
    fn rejects_non_positive_state() {
        let s = ShapeState::new(1.0, 0.0, 1.0, 1.0);
        assert!(matches!(torsion_residual(&s, &DerivVector::default()), Err(Error::NonPositiveState(_))));
    }

    #[test]
    fn unit_state_torsion() {
        let s = ShapeState::new(1.0, 1.0, 1.0, 1.0);
        let r = torsion_residual(&s, &DerivVector::new(0.0, 0.0, 1.0, 1.0)).unwrap();
        assert!(r.d_psi <= 1e-12 && r.d_star_psi <= 1e-12, "{r:?}");
        let off = torsion_residual(&s, &DerivVector::default()).unwrap();
        assert!(off.max() > 0.1);
        let d = solve_torsion_free_derivs(&s).unwrap();
        for (x, e) in d.to_array().iter().zip([0.0, 0.0, 1.0, 1.0]) {
            assert!((x - e).abs() < 1e-10);
        }
    }

    #[test]
    fn wrong_sign_form_is_inconsistent() {
        let psi = wrong_sign_form();
        let g = G2Structure::from_form(psi);
        let s = ShapeState::new(0.8, 1.2, 0.5, 1.7);
        assert!(matches!(g.solve_torsion_free_derivs(&s), Err(Error::Inconsistent { .. })));
    }
}
