//! Complex effective potentials for the transverse beam profile.
//!
//! A potential is a pure function of the transverse coordinate. Sampling it
//! yields the value and the first two derivatives of both the real (guiding)
//! and imaginary (gain/loss) parts, all from closed-form expressions.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::PotentialError;

/// Value and first/second derivatives of a complex potential at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PotentialSample {
    pub v_real: f64,
    pub v_imag: f64,
    pub dv_real: f64,
    pub dv_imag: f64,
    pub d2v_real: f64,
    pub d2v_imag: f64,
}

impl PotentialSample {
    pub fn is_finite(&self) -> bool {
        [
            self.v_real,
            self.v_imag,
            self.dv_real,
            self.dv_imag,
            self.d2v_real,
            self.d2v_imag,
        ]
        .iter()
        .all(|v| v.is_finite())
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.v_real, self.v_imag)
    }

    fn real_part_only(self) -> Self {
        Self {
            v_imag: 0.0,
            dv_imag: 0.0,
            d2v_imag: 0.0,
            ..self
        }
    }
}

/// Effective wavelength scale and substrate index. Both default to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub n_zero: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            n_zero: 1.0,
        }
    }
}

impl PhysicalConstants {
    pub fn new(hbar: f64, n_zero: f64) -> Result<Self, PotentialError> {
        let constants = Self { hbar, n_zero };
        constants.validate()?;
        Ok(constants)
    }

    pub fn validate(&self) -> Result<(), PotentialError> {
        positive("hbar", self.hbar)?;
        positive("n_zero", self.n_zero)
    }
}

/// Parameters of the PT-symmetric tanh-Gaussian waveguide
/// `V(x) = -(1 - i (gamma/eta) tanh(x/eta)) eta^2 exp(-omega^2 x^2 / (2 eta^2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtPotentialParams {
    pub gamma: f64,
    pub omega: f64,
    pub eta: f64,
}

impl PtPotentialParams {
    pub fn new(gamma: f64, omega: f64, eta: f64) -> Result<Self, PotentialError> {
        let params = Self { gamma, omega, eta };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), PotentialError> {
        finite("gamma", self.gamma)?;
        positive("omega", self.omega)?;
        positive("eta", self.eta)
    }
}

/// Parameters of `V(x) = omega^2 x^2 / 2 + i gamma x`, the local expansion of
/// the tanh-Gaussian well around its center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticLinearParams {
    pub omega: f64,
    pub gamma: f64,
}

impl QuadraticLinearParams {
    pub fn new(omega: f64, gamma: f64) -> Result<Self, PotentialError> {
        let params = Self { omega, gamma };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), PotentialError> {
        positive("omega", self.omega)?;
        finite("gamma", self.gamma)
    }
}

/// A complex refractive index profile `n(x)`.
///
/// Implementors may supply exact first and second derivatives; when they
/// don't, central differences are used.
pub trait IndexProfile: Send + Sync {
    fn index(&self, x: f64) -> Complex64;

    /// `(n'(x), n''(x))`, if known analytically.
    fn derivatives(&self, _x: f64) -> Option<(Complex64, Complex64)> {
        None
    }
}

impl<F> IndexProfile for F
where
    F: Fn(f64) -> Complex64 + Send + Sync,
{
    fn index(&self, x: f64) -> Complex64 {
        self(x)
    }
}

/// Potential derived from a refractive index profile, `V = (n0^2 - n^2) / (2 n0)`.
#[derive(Clone)]
pub struct IndexPotential {
    profile: Arc<dyn IndexProfile>,
    n_zero: f64,
    real_only: bool,
}

impl fmt::Debug for IndexPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndexPotential")
            .field("n_zero", &self.n_zero)
            .field("real_only", &self.real_only)
            .finish_non_exhaustive()
    }
}

impl IndexPotential {
    fn value_at(&self, x: f64) -> Complex64 {
        let n = self.profile.index(x);
        (self.n_zero * self.n_zero - n * n) / (2.0 * self.n_zero)
    }

    fn sample(&self, x: f64) -> PotentialSample {
        let n = self.profile.index(x);
        let v = (self.n_zero * self.n_zero - n * n) / (2.0 * self.n_zero);
        let (dv, d2v) = match self.profile.derivatives(x) {
            Some((dn, d2n)) => (
                -n * dn / self.n_zero,
                -(dn * dn + n * d2n) / self.n_zero,
            ),
            None => {
                let h = 1e-6 * x.abs().max(1.0);
                let plus = self.value_at(x + h);
                let minus = self.value_at(x - h);
                ((plus - minus) / (2.0 * h), (plus - 2.0 * v + minus) / (h * h))
            }
        };
        let sample = PotentialSample {
            v_real: v.re,
            v_imag: v.im,
            dv_real: dv.re,
            dv_imag: dv.im,
            d2v_real: d2v.re,
            d2v_imag: d2v.im,
        };
        if self.real_only {
            sample.real_part_only()
        } else {
            sample
        }
    }
}

/// The concrete potentials understood by the propagators.
#[derive(Debug, Clone)]
pub enum Potential {
    PtTanhGaussian(PtPotentialParams),
    QuadraticLinear(QuadraticLinearParams),
    Index(IndexPotential),
}

impl PartialEq for Potential {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::PtTanhGaussian(a), Self::PtTanhGaussian(b)) => a == b,
            (Self::QuadraticLinear(a), Self::QuadraticLinear(b)) => a == b,
            (Self::Index(a), Self::Index(b)) => {
                Arc::ptr_eq(&a.profile, &b.profile)
                    && a.n_zero == b.n_zero
                    && a.real_only == b.real_only
            }
            _ => false,
        }
    }
}

pub fn pt_tanh_gaussian(params: PtPotentialParams) -> Result<Potential, PotentialError> {
    params.validate()?;
    Ok(Potential::PtTanhGaussian(params))
}

pub fn quadratic_linear(params: QuadraticLinearParams) -> Result<Potential, PotentialError> {
    params.validate()?;
    Ok(Potential::QuadraticLinear(params))
}

/// Same real part, imaginary part identically zero.
pub fn hermitian_variant(potential: &Potential) -> Potential {
    match potential {
        Potential::PtTanhGaussian(p) => Potential::PtTanhGaussian(PtPotentialParams {
            gamma: 0.0,
            ..*p
        }),
        Potential::QuadraticLinear(p) => Potential::QuadraticLinear(QuadraticLinearParams {
            gamma: 0.0,
            ..*p
        }),
        Potential::Index(p) => Potential::Index(IndexPotential {
            real_only: true,
            ..p.clone()
        }),
    }
}

pub fn potential_from_index<P>(
    profile: P,
    constants: PhysicalConstants,
) -> Result<Potential, PotentialError>
where
    P: IndexProfile + 'static,
{
    constants.validate()?;
    Ok(Potential::Index(IndexPotential {
        profile: Arc::new(profile),
        n_zero: constants.n_zero,
        real_only: false,
    }))
}

impl Potential {
    /// Analytic value and derivatives at `x`.
    pub fn sample(&self, x: f64) -> PotentialSample {
        match self {
            Self::PtTanhGaussian(p) => sample_pt(p, x),
            Self::QuadraticLinear(p) => {
                let w2 = p.omega * p.omega;
                PotentialSample {
                    v_real: 0.5 * w2 * x * x,
                    v_imag: p.gamma * x,
                    dv_real: w2 * x,
                    dv_imag: p.gamma,
                    d2v_real: w2,
                    d2v_imag: 0.0,
                }
            }
            Self::Index(p) => p.sample(x),
        }
    }

    /// Like [`Potential::sample`] but rejects non-finite values.
    pub fn try_sample(&self, x: f64) -> Result<PotentialSample, PotentialError> {
        let sample = self.sample(x);
        if sample.is_finite() {
            Ok(sample)
        } else {
            Err(PotentialError::NonFinite { x })
        }
    }

    /// Complex value only; cheaper than a full sample.
    pub fn value(&self, x: f64) -> Complex64 {
        match self {
            Self::PtTanhGaussian(p) => {
                let envelope = gaussian_envelope(p, x);
                let eta2 = p.eta * p.eta;
                Complex64::new(
                    -eta2 * envelope,
                    p.gamma * p.eta * (x / p.eta).tanh() * envelope,
                )
            }
            Self::Index(p) if p.real_only => Complex64::new(p.value_at(x).re, 0.0),
            Self::Index(p) => p.value_at(x),
            Self::QuadraticLinear(_) => self.sample(x).value(),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        match self {
            Self::PtTanhGaussian(p) => p.gamma == 0.0,
            Self::QuadraticLinear(p) => p.gamma == 0.0,
            Self::Index(p) => p.real_only,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::PtTanhGaussian(p) => format!(
                "pt_tanh_gaussian(gamma={}, omega={}, eta={})",
                p.gamma, p.omega, p.eta
            ),
            Self::QuadraticLinear(p) => {
                format!("quadratic_linear(omega={}, gamma={})", p.omega, p.gamma)
            }
            Self::Index(p) => format!(
                "refractive_index(n_zero={}, real_only={})",
                p.n_zero, p.real_only
            ),
        }
    }
}

fn gaussian_envelope(p: &PtPotentialParams, x: f64) -> f64 {
    let s = p.omega * x / p.eta;
    (-0.5 * s * s).exp()
}

fn sample_pt(p: &PtPotentialParams, x: f64) -> PotentialSample {
    let PtPotentialParams { gamma, omega, eta } = *p;
    let w2 = omega * omega;
    let eta2 = eta * eta;
    let e = gaussian_envelope(p, x);
    let t = (x / eta).tanh();
    let sech2 = 1.0 - t * t;
    // E' = -(w^2 x / eta^2) E
    let de_over_e = -w2 * x / eta2;

    // V_R = -eta^2 E
    let v_real = -eta2 * e;
    let dv_real = w2 * x * e;
    let d2v_real = w2 * e * (1.0 - w2 * x * x / eta2);

    // V_I = gamma eta T E, with T' = sech^2 / eta
    let v_imag = gamma * eta * t * e;
    let g = sech2 - w2 * x * t / eta;
    let dv_imag = gamma * e * g;
    let dg = -2.0 * t * sech2 / eta - w2 * t / eta - w2 * x * sech2 / eta2;
    let d2v_imag = gamma * e * (de_over_e * g + dg);

    PotentialSample {
        v_real,
        v_imag,
        dv_real,
        dv_imag,
        d2v_real,
        d2v_imag,
    }
}

fn finite(name: &'static str, value: f64) -> Result<(), PotentialError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(PotentialError::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

fn positive(name: &'static str, value: f64) -> Result<(), PotentialError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(PotentialError::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(gamma: f64, omega: f64, eta: f64) -> Potential {
        pt_tanh_gaussian(PtPotentialParams::new(gamma, omega, eta).unwrap()).unwrap()
    }

    fn ql(omega: f64, gamma: f64) -> Potential {
        quadratic_linear(QuadraticLinearParams::new(omega, gamma).unwrap()).unwrap()
    }

    #[test]
    fn pt_at_origin() {
        let s = pt(1.0, 1.0, 10.0).sample(0.0);
        assert_eq!(
            s,
            PotentialSample {
                v_real: -100.0,
                v_imag: 0.0,
                dv_real: 0.0,
                dv_imag: 1.0,
                d2v_real: 1.0,
                d2v_imag: 0.0,
            }
        );
    }

    #[test]
    fn pt_depth_independent_of_gamma_and_omega() {
        for &(g, w) in &[(0.0, 1.0), (2.5, 0.3), (-1.0, 4.0)] {
            assert_eq!(pt(g, w, 5.0).sample(0.0).v_real, -25.0);
        }
    }

    #[test]
    fn pt_curvature_at_origin_is_omega_squared() {
        for &eta in &[0.5, 5.0, 10.0, 123.0] {
            let s = pt(1.0, 1.7, eta).sample(0.0);
            assert_eq!(s.d2v_real, 1.7 * 1.7);
        }
    }

    #[test]
    fn quadratic_linear_values() {
        let s = ql(1.0, 1.0).sample(2.0);
        assert_eq!(
            (s.v_real, s.v_imag, s.dv_real, s.dv_imag, s.d2v_real, s.d2v_imag),
            (2.0, 2.0, 2.0, 1.0, 1.0, 0.0)
        );
        let s = ql(1.0, 1.0).sample(-4.0);
        assert_eq!((s.v_real, s.v_imag), (8.0, -4.0));
        let s = ql(2.0, 0.0).sample(1.5);
        assert_eq!((s.v_imag, s.dv_imag, s.dv_real), (0.0, 0.0, 4.0 * 1.5));
    }

    #[test]
    fn hermitian_variant_behaviour() {
        let original = pt(1.0, 1.0, 10.0);
        let herm = hermitian_variant(&original);
        let (a, b) = (original.sample(3.0), herm.sample(3.0));
        assert_eq!(b.v_imag, 0.0);
        assert_eq!(b.dv_imag, 0.0);
        assert_eq!(b.d2v_imag, 0.0);
        assert_eq!(a.v_real, b.v_real);
        assert_eq!(hermitian_variant(&herm), herm);
        assert!(herm.is_hermitian());

        assert_eq!(hermitian_variant(&ql(1.3, 0.7)), ql(1.3, 0.0));
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(PtPotentialParams::new(1.0, 1.0, 0.0).is_err());
        assert!(PtPotentialParams::new(1.0, -1.0, 1.0).is_err());
        assert!(PtPotentialParams::new(f64::NAN, 1.0, 1.0).is_err());
        assert!(QuadraticLinearParams::new(0.0, 1.0).is_err());
        assert!(PhysicalConstants::new(0.0, 1.0).is_err());
        assert!(pt_tanh_gaussian(PtPotentialParams {
            gamma: 1.0,
            omega: 1.0,
            eta: -2.0
        })
        .is_err());
    }

    #[test]
    fn index_profile_constant_is_zero() {
        let v = potential_from_index(|_x: f64| Complex64::new(1.0, 0.0), PhysicalConstants::default())
            .unwrap();
        let s = v.sample(0.7);
        assert_eq!(s.v_real, 0.0);
        assert_eq!(s.v_imag, 0.0);
        assert!(s.dv_real.abs() < 1e-9);
    }

    #[test]
    fn index_profile_exact_arithmetic() {
        let v = potential_from_index(|_x: f64| Complex64::new(1.01, 0.0), PhysicalConstants::default())
            .unwrap();
        assert!((v.sample(0.0).v_real - (-0.01005)).abs() < 1e-15);
    }

    #[test]
    fn index_profile_small_perturbation() {
        let delta = |x: f64| 1e-4 * (-x * x).exp();
        let v = potential_from_index(
            move |x: f64| Complex64::new(1.0 + delta(x), 1e-5 * x.sin()),
            PhysicalConstants::default(),
        )
        .unwrap();
        for &x in &[-1.0, 0.0, 0.4] {
            let s = v.sample(x);
            assert!((s.v_real + delta(x)).abs() < 1e-7);
            assert!((s.v_imag + 1e-5 * x.sin()).abs() < 1e-8);
        }
    }

    struct Linear;
    impl IndexProfile for Linear {
        fn index(&self, x: f64) -> Complex64 {
            Complex64::new(1.0 + 0.01 * x, 0.002 * x)
        }
        fn derivatives(&self, _x: f64) -> Option<(Complex64, Complex64)> {
            Some((Complex64::new(0.01, 0.002), Complex64::new(0.0, 0.0)))
        }
    }

    #[test]
    fn index_profile_supplied_derivatives_match_fallback() {
        let exact = potential_from_index(Linear, PhysicalConstants::default()).unwrap();
        let fd = potential_from_index(
            |x: f64| Linear.index(x),
            PhysicalConstants::default(),
        )
        .unwrap();
        for &x in &[-2.0, 0.5, 3.0] {
            let (a, b) = (exact.sample(x), fd.sample(x));
            assert!((a.dv_real - b.dv_real).abs() < 1e-8);
            assert!((a.dv_imag - b.dv_imag).abs() < 1e-8);
            // second differences at h = 1e-6 are only good to ~1e-4
            assert!((a.d2v_real - b.d2v_real).abs() < 1e-3);
        }
        let herm = hermitian_variant(&exact);
        assert_eq!(herm.sample(1.0).v_imag, 0.0);
        assert_eq!(herm.value(1.0).im, 0.0);
    }

    #[test]
    fn non_finite_profile_detected() {
        let v = potential_from_index(
            |x: f64| Complex64::new(1.0 / x, 0.0),
            PhysicalConstants::default(),
        )
        .unwrap();
        assert!(matches!(
            v.try_sample(0.0),
            Err(PotentialError::NonFinite { .. })
        ));
    }

    #[test]
    fn value_matches_sample() {
        for v in [pt(1.0, 1.3, 5.0), ql(0.8, 1.1)] {
            for &x in &[-7.0, -0.3, 0.0, 2.2, 11.0] {
                let s = v.sample(x);
                assert_eq!(v.value(x), s.value());
            }
        }
    }

    fn check_derivatives(v: &Potential, x: f64) {
        let h = 1e-5;
        let (m, c, p) = (v.sample(x - h), v.sample(x), v.sample(x + h));
        // wider step for the second difference; 1e-5 drowns in roundoff for deep wells
        let h2 = 1e-3;
        let (m2, p2) = (v.sample(x - h2), v.sample(x + h2));
        let close = |analytic: f64, numeric: f64, rel: f64| {
            let scale = analytic.abs().max(numeric.abs()).max(1.0);
            (analytic - numeric).abs() <= rel * scale
        };
        assert!(close(c.dv_real, (p.v_real - m.v_real) / (2.0 * h), 1e-6), "dv_real at {x}");
        assert!(close(c.dv_imag, (p.v_imag - m.v_imag) / (2.0 * h), 1e-6), "dv_imag at {x}");
        assert!(
            close(c.d2v_real, (p2.v_real - 2.0 * c.v_real + m2.v_real) / (h2 * h2), 1e-4),
            "d2v_real at {x}"
        );
        assert!(
            close(c.d2v_imag, (p2.v_imag - 2.0 * c.v_imag + m2.v_imag) / (h2 * h2), 1e-4),
            "d2v_imag at {x}"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn pt_derivatives_match_finite_differences(
            u in -3.0f64..3.0,
            gamma in -2.0f64..2.0,
            omega in 0.3f64..2.0,
            eta in 2.0f64..15.0,
        ) {
            check_derivatives(&pt(gamma, omega, eta), u * eta);
        }

        #[test]
        fn quadratic_linear_derivatives_match_finite_differences(
            x in -10.0f64..10.0,
            omega in 0.3f64..2.0,
            gamma in -2.0f64..2.0,
        ) {
            check_derivatives(&ql(omega, gamma), x);
        }

        #[test]
        fn pt_symmetry(x in -50.0f64..50.0, gamma in -2.0f64..2.0, eta in 1.0f64..20.0) {
            let v = pt(gamma, 1.0, eta);
            let (a, b) = (v.sample(x), v.sample(-x));
            prop_assert_eq!(a.v_real, b.v_real);
            prop_assert_eq!(a.v_imag, -b.v_imag);
        }

        #[test]
        fn hermitian_variant_has_no_imaginary_part(x in -30.0f64..30.0) {
            for v in [pt(1.0, 1.0, 10.0), ql(1.0, 1.0)] {
                let s = hermitian_variant(&v).sample(x);
                prop_assert_eq!((s.v_imag, s.dv_imag, s.d2v_imag), (0.0, 0.0, 0.0));
                prop_assert_eq!(s.v_real, v.sample(x).v_real);
            }
        }
    }
}
