//! Exponential cubic B-splines on a uniform mesh.
//!
//! `B_i` is supported on `[x_{i-2}, x_{i+2}]`, is C² there, equals 1 at its
//! own knot and is built from `sinh`/`cosh` pieces controlled by the tension
//! parameter `p`. As `p -> 0` it tends to the cubic B-spline normalised to a
//! unit centre value.
//!
//! Every quantity is evaluated through the scaled helpers below
//! (`sinh(z)/z`, `(cosh z - 1)/z²`, `(sinh z - z)/z³`, `(z cosh z - sinh z)/z³`)
//! so that the tiny `p` values used in parameter sweeps (`ph ~ 1e-8`) keep full
//! precision instead of cancelling to noise.

use crate::error::{Error, Result};

/// Below this argument the odd-power series are used instead of `sinh`/`cosh`.
const SERIES_CUTOFF: f64 = 1.0;

/// `sinh(z)/z`, continuous at 0.
pub(crate) fn sinhc(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        z.sinh() / z
    }
}

/// `(cosh z - 1)/z²` via the half-angle identity `cosh z - 1 = 2 sinh²(z/2)`.
pub(crate) fn cosh_m1_z2(z: f64) -> f64 {
    let half = sinhc(0.5 * z);
    0.5 * half * half
}

/// `(sinh z - z)/z³`.
pub(crate) fn sinh_m_id_z3(z: f64) -> f64 {
    if z.abs() < SERIES_CUTOFF {
        // sum_{k>=1} z^{2k-2} / (2k+1)!
        let z2 = z * z;
        let mut term = 1.0 / 6.0;
        let mut sum = term;
        for k in 2..30 {
            let k = k as f64;
            term *= z2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
            if term < f64::EPSILON * sum {
                break;
            }
        }
        sum
    } else {
        (z.sinh() - z) / (z * z * z)
    }
}

/// `(z cosh z - sinh z)/z³`.
pub(crate) fn zcosh_m_sinh_z3(z: f64) -> f64 {
    if z.abs() < SERIES_CUTOFF {
        // sum_{k>=1} 2k z^{2k-2} / (2k+1)!
        let z2 = z * z;
        let mut fact_term = 1.0 / 6.0;
        let mut sum = 2.0 * fact_term;
        for k in 2..30 {
            let kf = k as f64;
            fact_term *= z2 / ((2.0 * kf) * (2.0 * kf + 1.0));
            let term = 2.0 * kf * fact_term;
            sum += term;
            if term < f64::EPSILON * sum {
                break;
            }
        }
        sum
    } else {
        (z * z.cosh() - z.sinh()) / (z * z * z)
    }
}

/// Tension parameter, mesh spacing and the hyperbolic quantities derived from
/// them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineShape {
    pub p: f64,
    pub h: f64,
    /// `sinh(ph)`
    pub s: f64,
    /// `cosh(ph)`
    pub c: f64,
    /// `ph cosh(ph) - sinh(ph)`; may underflow for extremely small `ph`, the
    /// scaled copies below never do.
    pub denom: f64,
    sinhc: f64,
    cosh_m1: f64,
    sinh_m_id: f64,
    denom_z3: f64,
}

impl SplineShape {
    pub fn new(p: f64, h: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("tension p must be positive and finite, got {p}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(format!("mesh spacing h must be positive and finite, got {h}")));
        }
        let z = p * h;
        let (s, c) = (z.sinh(), z.cosh());
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!("ph = {z} overflows the hyperbolic functions")));
        }
        let denom_z3 = zcosh_m_sinh_z3(z);
        Ok(Self {
            p,
            h,
            s,
            c,
            denom: denom_z3 * z * z * z,
            sinhc: sinhc(z),
            cosh_m1: cosh_m1_z2(z),
            sinh_m_id: sinh_m_id_z3(z),
            denom_z3,
        })
    }

    /// `ph`
    pub fn ph(&self) -> f64 {
        self.p * self.h
    }

    /// Coefficients of the piecewise definition exactly as they are usually
    /// printed. Direct evaluation; loses precision once `ph` drops below about
    /// `1e-3`. The solver itself never uses these.
    pub fn coefficients(&self) -> BasisCoefficients {
        let (p, s, c) = (self.p, self.s, self.c);
        let z = self.ph();
        let d = z * c - s;
        BasisCoefficients {
            a1: z * c / d,
            b1: 0.5 * p * ((c * (c - 1.0) + s * s) / (d * (1.0 - c))),
            b2: p / (2.0 * d),
            c1: 0.25 * (((-z).exp() * (1.0 - c) + s * ((-z).exp() - 1.0)) / (d * (1.0 - c))),
            d1: 0.25 * ((z.exp() * (c - 1.0) + s * (z.exp() - 1.0)) / (d * (1.0 - c))),
        }
    }

    /// Values of `B_i`, `B_i'`, `B_i''` at the knots of its support.
    pub fn nodal_weights(&self) -> NodalWeights {
        let h = self.h;
        let gamma1 = self.sinhc / (2.0 * h * h * self.denom_z3);
        NodalWeights {
            alpha0: 1.0,
            alpha1: self.sinh_m_id / (2.0 * self.denom_z3),
            beta1: -self.cosh_m1 / (2.0 * h * self.denom_z3),
            gamma1,
            gamma0: -2.0 * gamma1,
        }
    }

    /// Inner piece on `[x_{i-1}, x_{i+1}]`, `t = |x - x_i| / h` in `[0, 1]`.
    /// Returns `(g, dg/dw, d²g/dw²)` with `w = |x - x_i|`.
    pub(crate) fn inner_piece(&self, t: f64) -> [f64; 3] {
        let (h, z) = (self.h, self.ph());
        let zt = z * t;
        let d3 = self.denom_z3;
        let shape_c = self.c * self.cosh_m1 + self.sinhc * self.sinhc;
        let cubic = shape_c / (2.0 * d3 * self.cosh_m1);
        let value = 1.0 - t * t * self.sinhc * cosh_m1_z2(zt) / d3 + t * t * t * sinh_m_id_z3(zt) * cubic;
        let first = -t * self.sinhc * sinhc(zt) / d3 + t * t * cosh_m1_z2(zt) * cubic;
        let second = -self.sinhc * zt.cosh() / d3 + t * sinhc(zt) * cubic;
        [value, first / h, second / (h * h)]
    }

    /// Outer piece on `[x_{i-2}, x_{i-1}]` (mirrored on the right),
    /// `t = distance to the support end / h` in `[0, 1]`.
    /// Returns `(g, dg/dt', d²g/dt'²)` with `t' = t h` measured inward.
    pub(crate) fn outer_piece(&self, t: f64) -> [f64; 3] {
        let (h, z) = (self.h, self.ph());
        let zt = z * t;
        let d3 = self.denom_z3;
        [
            t * t * t * sinh_m_id_z3(zt) / (2.0 * d3),
            t * t * cosh_m1_z2(zt) / (2.0 * h * d3),
            t * sinhc(zt) / (2.0 * h * h * d3),
        ]
    }
}

/// Closed-form coefficients `a1, b1, b2, c1, d1` of the piecewise definition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisCoefficients {
    pub a1: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub d1: f64,
}

/// Knot values of `B_i` and its first two derivatives.
///
/// `B_i(x_{i±1}) = alpha1`, `B_i''(x_{i±1}) = gamma1`, `B_i''(x_i) = gamma0`.
/// `beta1 = p(1-c)/(2(phc-s))` is negative: it is the slope of `B_i` at its
/// right neighbour `x_{i+1}`, so the slope at `x_{i-1}` is `-beta1`. In the
/// three-term knot formula this reads `u'(x_m) = beta1 δ_{m-1} - beta1 δ_{m+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodalWeights {
    pub alpha0: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub gamma1: f64,
    pub gamma0: f64,
}

impl NodalWeights {
    /// Value weights for offsets `-1, 0, +1`.
    pub fn alpha(&self) -> [f64; 3] {
        [self.alpha1, self.alpha0, self.alpha1]
    }

    /// Second-derivative weights for offsets `-1, 0, +1`.
    pub fn gamma(&self) -> [f64; 3] {
        [self.gamma1, self.gamma0, self.gamma1]
    }

    /// First-derivative weights for offsets `-1, 0, +1`.
    pub fn beta(&self) -> [f64; 3] {
        [self.beta1, 0.0, -self.beta1]
    }
}

/// Validated constructor, free-function form.
pub fn shape(p: f64, h: f64) -> Result<SplineShape> {
    SplineShape::new(p, h)
}

pub fn nodal_weights(shape: &SplineShape) -> NodalWeights {
    shape.nodal_weights()
}

/// Derivative order accepted by the evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Value,
    First,
    Second,
}

impl Order {
    pub fn index(self) -> usize {
        match self {
            Order::Value => 0,
            Order::First => 1,
            Order::Second => 2,
        }
    }
}

impl TryFrom<u8> for Order {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Order::Value),
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            _ => Err(Error::InvalidParameter(format!("derivative order must be 0, 1 or 2, got {v}"))),
        }
    }
}

/// Evaluates `B_i` (or a derivative) at `x`, the mesh starting at `origin`.
/// Zero outside `[x_{i-2}, x_{i+2}]`.
pub fn eval_basis(i: i64, x: f64, shape: &SplineShape, origin: f64, order: Order) -> f64 {
    let knot = origin + i as f64 * shape.h;
    eval_basis_offset((x - knot) / shape.h, shape, order)
}

/// Same as [`eval_basis`] with the position given in units of `h` relative to
/// the basis centre.
pub(crate) fn eval_basis_offset(u: f64, shape: &SplineShape, order: Order) -> f64 {
    let tau = u.abs();
    if !(tau < 2.0) {
        return 0.0;
    }
    let side = if u < 0.0 { -1.0 } else { 1.0 };
    if tau <= 1.0 {
        let g = shape.inner_piece(tau);
        match order {
            Order::Value => g[0],
            Order::First => side * g[1],
            Order::Second => g[2],
        }
    } else {
        let g = shape.outer_piece(2.0 - tau);
        match order {
            Order::Value => g[0],
            Order::First => -side * g[1],
            Order::Second => g[2],
        }
    }
}
