//! Test problems: initial data, exact solutions and analytic invariants.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

fn sech(x: f64) -> f64 {
    // 1/cosh overflows to 0 gracefully for large |x|.
    1.0 / x.cosh()
}

/// Amplitude, speed and initial centre of one soliton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonParams {
    pub alpha: f64,
    pub speed: f64,
    pub center: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemSpec {
    /// Travelling `sech` soliton, known in closed form for all `t`.
    SingleSoliton { q: f64, alpha: f64, speed: f64 },
    /// Two solitons launched towards each other.
    Collision { q: f64, first: SolitonParams, second: SolitonParams },
    /// `A exp(-x²)`.
    MaxwellianStanding { q: f64, amplitude: f64 },
    /// `A exp(-x² + 2ix)`.
    MaxwellianMobile { q: f64, amplitude: f64 },
    /// `sech(x)` with `q = 2M²`.
    BoundState { m: u32 },
}

impl ProblemSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ProblemSpec::SingleSoliton { .. } => "single_soliton",
            ProblemSpec::Collision { .. } => "collision",
            ProblemSpec::MaxwellianStanding { .. } => "maxwellian_standing",
            ProblemSpec::MaxwellianMobile { .. } => "maxwellian_mobile",
            ProblemSpec::BoundState { .. } => "bound_state",
        }
    }

    pub fn q(&self) -> f64 {
        match *self {
            ProblemSpec::SingleSoliton { q, .. }
            | ProblemSpec::Collision { q, .. }
            | ProblemSpec::MaxwellianStanding { q, .. }
            | ProblemSpec::MaxwellianMobile { q, .. } => q,
            ProblemSpec::BoundState { m } => bound_state_q(m),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.q();
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::InvalidParameter(format!("q must be positive, got {q}")));
        }
        match *self {
            ProblemSpec::BoundState { m: 0 } => Err(Error::InvalidParameter("bound state needs M >= 1".into())),
            ProblemSpec::MaxwellianStanding { amplitude, .. } | ProblemSpec::MaxwellianMobile { amplitude, .. }
                if !(amplitude >= 0.0) =>
            {
                Err(Error::InvalidParameter(format!("amplitude must be non-negative, got {amplitude}")))
            }
            _ => Ok(()),
        }
    }

    /// `U(x, 0)`.
    pub fn initial_condition(&self, x: f64) -> Complex64 {
        match *self {
            ProblemSpec::SingleSoliton { q, alpha, speed } => exact_soliton(x, 0.0, alpha, speed, q),
            ProblemSpec::Collision { q, first, second } => collision_term(x, q, &first) + collision_term(x, q, &second),
            ProblemSpec::MaxwellianStanding { amplitude, .. } => Complex64::new(amplitude * (-x * x).exp(), 0.0),
            ProblemSpec::MaxwellianMobile { amplitude, .. } => {
                Complex64::from_polar(amplitude * (-x * x).exp(), 2.0 * x)
            }
            ProblemSpec::BoundState { .. } => Complex64::new(sech(x), 0.0),
        }
    }

    /// `dU/dx (x, 0)`.
    pub fn initial_derivative(&self, x: f64) -> Complex64 {
        match *self {
            ProblemSpec::SingleSoliton { q, alpha, speed } => {
                let p = SolitonParams { alpha, speed, center: 0.0 };
                collision_term_dx(x, q, &p)
            }
            ProblemSpec::Collision { q, first, second } => {
                collision_term_dx(x, q, &first) + collision_term_dx(x, q, &second)
            }
            ProblemSpec::MaxwellianStanding { amplitude, .. } => {
                Complex64::new(-2.0 * x * amplitude * (-x * x).exp(), 0.0)
            }
            ProblemSpec::MaxwellianMobile { amplitude, .. } => {
                Complex64::from_polar(amplitude * (-x * x).exp(), 2.0 * x) * Complex64::new(-2.0 * x, 2.0)
            }
            ProblemSpec::BoundState { .. } => Complex64::new(-sech(x) * x.tanh(), 0.0),
        }
    }

    /// Closed-form solution where one exists.
    pub fn exact(&self, x: f64, t: f64) -> Option<Complex64> {
        match *self {
            ProblemSpec::SingleSoliton { q, alpha, speed } => Some(exact_soliton(x, t, alpha, speed, q)),
            _ => None,
        }
    }

    pub fn has_exact(&self) -> bool {
        matches!(self, ProblemSpec::SingleSoliton { .. })
    }

    /// `(C1, C2)` of the initial data on the whole line, for the Maxwellian
    /// problems.
    pub fn analytic_invariants(&self) -> Option<(f64, f64)> {
        let half_pi_sqrt = (PI / 2.0).sqrt();
        match *self {
            ProblemSpec::MaxwellianStanding { q, amplitude: a } => {
                let a2 = a * a;
                Some((a2 * half_pi_sqrt, 0.25 * a2 * (2.0 * 2f64.sqrt() - q * a2) * PI.sqrt()))
            }
            ProblemSpec::MaxwellianMobile { q, amplitude: a } => {
                let a2 = a * a;
                Some((a2 * half_pi_sqrt, 5.0 * half_pi_sqrt * a2 - 0.25 * PI.sqrt() * q * a2 * a2))
            }
            _ => None,
        }
    }
}

/// `q = 2M²`.
pub fn bound_state_q(m: u32) -> f64 {
    2.0 * f64::from(m) * f64::from(m)
}

/// Recovers `M` from `q = 2M²`, if `q` has that form.
pub fn bound_state_m(q: f64) -> Option<u32> {
    let m = (q / 2.0).sqrt().round();
    (m >= 1.0 && bound_state_q(m as u32) == q).then_some(m as u32)
}

fn collision_term(x: f64, q: f64, p: &SolitonParams) -> Complex64 {
    let y = x - p.center;
    Complex64::from_polar(p.alpha * (2.0 / q).sqrt() * sech(p.alpha * y), 0.5 * p.speed * y)
}

fn collision_term_dx(x: f64, q: f64, p: &SolitonParams) -> Complex64 {
    let y = x - p.center;
    let env = p.alpha * (2.0 / q).sqrt() * sech(p.alpha * y);
    Complex64::from_polar(1.0, 0.5 * p.speed * y)
        * Complex64::new(-p.alpha * env * (p.alpha * y).tanh(), 0.5 * p.speed * env)
}

/// Travelling soliton
/// `α sqrt(2/q) exp(i(Sx/2 - (S²/4 - α²)t)) sech(α(x - St))`.
pub fn exact_single_soliton(x: f64, t: f64, alpha: f64, speed: f64, q: f64) -> Result<Complex64> {
    if !(q > 0.0) {
        return Err(Error::InvalidParameter(format!("q must be positive, got {q}")));
    }
    Ok(exact_soliton(x, t, alpha, speed, q))
}

fn exact_soliton(x: f64, t: f64, alpha: f64, speed: f64, q: f64) -> Complex64 {
    let phase = 0.5 * speed * x - (0.25 * speed * speed - alpha * alpha) * t;
    Complex64::from_polar(alpha * (2.0 / q).sqrt() * sech(alpha * (x - speed * t)), phase)
}

/// Whether `A exp(-x²)` carries enough area (`sqrt(π) A >= π`) to form a
/// soliton.
pub fn soliton_birth_threshold(amplitude: f64) -> bool {
    amplitude >= PI.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn single() -> ProblemSpec {
        ProblemSpec::SingleSoliton { q: 2.0, alpha: 1.0, speed: 4.0 }
    }

    #[test]
    fn soliton_values() {
        let u = exact_single_soliton(0.0, 0.0, 1.0, 4.0, 2.0).unwrap();
        assert_eq!(u, Complex64::new(1.0, 0.0));
        let u = exact_single_soliton(4.0, 1.0, 1.0, 4.0, 2.0).unwrap();
        assert_relative_eq!(u.norm(), 1.0, epsilon = 1e-15);
        let want = (8.0f64 - 3.0).rem_euclid(2.0 * PI);
        assert_relative_eq!(u.arg().rem_euclid(2.0 * PI), want, epsilon = 1e-12);
        assert!(exact_single_soliton(0.0, 0.0, 1.0, 4.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn soliton_modulus(x in -30.0f64..30.0, t in 0.0f64..3.0, alpha in 0.2f64..2.0, q in 0.5f64..8.0) {
            let u = exact_single_soliton(x, t, alpha, 4.0, q).unwrap();
            let want = (2.0 / q).sqrt() * alpha / (alpha * (x - 4.0 * t)).cosh();
            prop_assert!((u.norm() - want).abs() <= 1e-14 * (1.0 + want));
        }
    }

    /// `i U_t + U_xx + q|U|²U` by centred differences.
    fn nls_residual(x: f64, t: f64, d: f64) -> f64 {
        let u = |x: f64, t: f64| exact_single_soliton(x, t, 1.0, 4.0, 2.0).unwrap();
        let ut = (u(x, t + d) - u(x, t - d)) / (2.0 * d);
        let uxx = (u(x + d, t) - 2.0 * u(x, t) + u(x - d, t)) / (d * d);
        let c = u(x, t);
        (Complex64::i() * ut + uxx + 2.0 * c.norm_sqr() * c).norm()
    }

    #[test]
    fn soliton_solves_nls() {
        for (x, t) in [(0.3, 0.1), (4.4, 1.0), (-1.0, 0.2), (2.2, 0.5)] {
            let r1 = nls_residual(x, t, 1e-2);
            let r2 = nls_residual(x, t, 5e-3);
            assert!(r2 < 1e-3, "residual {r2}");
            // second-order stencil
            assert!(r1 / r2 > 3.5, "ratio {}", r1 / r2);
        }
    }

    #[test]
    fn initial_values() {
        let st = ProblemSpec::MaxwellianStanding { q: 2.0, amplitude: 1.78 };
        assert_eq!(st.initial_condition(0.0), Complex64::new(1.78, 0.0));
        assert_eq!(st.initial_derivative(0.0), Complex64::new(0.0, 0.0));
        let bs = ProblemSpec::BoundState { m: 4 };
        assert_eq!(bs.initial_condition(0.0), Complex64::new(1.0, 0.0));
        assert_eq!(bs.initial_derivative(0.0).norm(), 0.0);
        assert_eq!(bs.q(), 32.0);
        assert_eq!(ProblemSpec::BoundState { m: 5 }.q(), 50.0);
        assert_eq!(bound_state_m(50.0), Some(5));
        assert_eq!(bound_state_m(49.0), None);
        let d = single().initial_derivative(0.0);
        assert_relative_eq!(d.re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(d.im, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn derivatives_match_differences() {
        let specs = [
            single(),
            presets_collision(),
            ProblemSpec::MaxwellianStanding { q: 2.0, amplitude: 1.3 },
            ProblemSpec::MaxwellianMobile { q: 2.0, amplitude: 1.78 },
            ProblemSpec::BoundState { m: 4 },
        ];
        let d = 1e-5;
        for spec in specs {
            for x in [-9.7, -1.2, 0.0, 0.4, 3.3, 10.5] {
                let fd = (spec.initial_condition(x + d) - spec.initial_condition(x - d)) / (2.0 * d);
                assert!((fd - spec.initial_derivative(x)).norm() < 1e-8, "{} at {x}", spec.kind());
            }
        }
    }

    fn presets_collision() -> ProblemSpec {
        ProblemSpec::Collision {
            q: 2.0,
            first: SolitonParams { alpha: 1.0, speed: -4.0, center: 10.0 },
            second: SolitonParams { alpha: 1.0, speed: 4.0, center: -10.0 },
        }
    }

    #[test]
    fn collision_profile() {
        let c = presets_collision();
        for x in [10.0, -10.0] {
            assert_relative_eq!(c.initial_condition(x).norm(), 1.0, epsilon = 1e-8);
        }
        for x in [0.3, 2.0, 7.5, 11.0, 20.0] {
            assert_relative_eq!(c.initial_condition(x).norm(), c.initial_condition(-x).norm(), epsilon = 1e-14);
        }
    }

    #[test]
    fn analytic_invariant_values() {
        let (c1, c2) = ProblemSpec::MaxwellianStanding { q: 2.0, amplitude: 1.78 }.analytic_invariants().unwrap();
        assert!((c1 - 3.9710).abs() < 5e-5);
        assert!((c2 - (-4.9256)).abs() < 5e-4);
        let (c1, c2) = ProblemSpec::MaxwellianMobile { q: 2.0, amplitude: 1.78 }.analytic_invariants().unwrap();
        assert!((c1 - 3.97100).abs() < 5e-5);
        assert!((c2 - 10.95838).abs() < 5e-4);
        assert!(single().analytic_invariants().is_none());
    }

    #[test]
    fn birth_threshold() {
        assert!(soliton_birth_threshold(1.78));
        assert!(!soliton_birth_threshold(1.0));
        assert!(soliton_birth_threshold(PI.sqrt()));
    }

    #[test]
    fn validation() {
        assert!(ProblemSpec::BoundState { m: 0 }.validate().is_err());
        assert!(ProblemSpec::SingleSoliton { q: -1.0, alpha: 1.0, speed: 1.0 }.validate().is_err());
        assert!(single().validate().is_ok());
    }
}
