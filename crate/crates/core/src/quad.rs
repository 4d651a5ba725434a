//! Tanh-sinh (double exponential) quadrature at arbitrary precision.
//!
//! Each level halves the step and only evaluates the new odd nodes. Node
//! values are computed in parallel and summed in a fixed order, so results
//! are bit-identical from run to run.

use rayon::prelude::*;
use rug::Float;

use crate::complex::Complex;
use crate::precision::pi_float;

/// Values that can be accumulated by the quadrature.
pub trait QuadValue: Clone + Send + Sync {
    fn zero(bits: u32) -> Self;
    fn add_scaled(&mut self, other: &Self, w: &Float);
    fn scaled(&self, w: &Float) -> Self;
    /// Size of `self - other`, used for error estimates.
    fn distance(&self, other: &Self) -> Float;
}

impl QuadValue for Float {
    fn zero(bits: u32) -> Self {
        Float::new(bits)
    }
    fn add_scaled(&mut self, other: &Self, w: &Float) {
        *self += Float::with_val(self.prec(), other * w);
    }
    fn scaled(&self, w: &Float) -> Self {
        Float::with_val(self.prec(), self * w)
    }
    fn distance(&self, other: &Self) -> Float {
        Float::with_val(self.prec(), self - other).abs()
    }
}

impl QuadValue for Complex {
    fn zero(bits: u32) -> Self {
        Complex::zero(bits)
    }
    fn add_scaled(&mut self, other: &Self, w: &Float) {
        self.re += Float::with_val(self.re.prec(), &other.re * w);
        self.im += Float::with_val(self.im.prec(), &other.im * w);
    }
    fn scaled(&self, w: &Float) -> Self {
        self.scale(w)
    }
    fn distance(&self, other: &Self) -> Float {
        (self - other).abs()
    }
}

/// Abscissa of one node, with both endpoint distances computed without
/// cancellation so integrands can handle endpoint singularities.
#[derive(Debug, Clone)]
pub struct Node {
    pub x: Float,
    /// `x - a`
    pub from_left: Float,
    /// `b - x`
    pub from_right: Float,
}

#[derive(Debug, Clone)]
pub struct QuadResult<V> {
    pub value: V,
    /// Difference between the last two levels; an overestimate once the
    /// rule has started converging.
    pub error: Float,
    pub evaluations: usize,
    pub levels: u32,
}

#[derive(Debug, Clone)]
pub struct TanhSinh {
    bits: u32,
    max_level: u32,
    min_level: u32,
    t_max: f64,
}

impl TanhSinh {
    /// Rule for `bits`-bit integrands whose endpoint singularities are no
    /// worse than `(x - a)^{-1/2}`.
    pub fn new(bits: u32) -> Self {
        let u_max = f64::from(bits) * std::f64::consts::LN_2 + 8.0;
        let t_max = (2.0 * u_max / std::f64::consts::PI).asinh();
        TanhSinh {
            bits,
            max_level: 11,
            min_level: 4,
            t_max,
        }
    }

    pub fn with_max_level(mut self, level: u32) -> Self {
        self.max_level = level;
        self
    }

    pub fn with_min_level(mut self, level: u32) -> Self {
        self.min_level = level;
        self
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    fn node(&self, t: &Float, a: &Float, half: &Float) -> (Node, Float) {
        let p = self.bits;
        let pi_2 = pi_float(p) / 2u32;
        let u = Float::with_val(p, t.sinh_ref()) * &pi_2;
        let cosh_u = Float::with_val(p, u.cosh_ref());
        let w = Float::with_val(p, t.cosh_ref()) * &pi_2 / Float::with_val(p, cosh_u.square_ref())
            * half;
        // 1 - tanh|u| = 2 / (e^{2|u|} + 1)
        let e2u = Float::with_val(p, Float::with_val(p, u.abs_ref()) * 2u32).exp();
        let near = Float::with_val(p, half * 2u32) / (e2u + 1u32);
        let width = Float::with_val(p, half * 2u32);
        let far = Float::with_val(p, &width - &near);
        let (from_left, from_right) = if u.is_sign_negative() {
            (near, far)
        } else {
            (far, near)
        };
        let x = Float::with_val(p, a + &from_left);
        (
            Node {
                x,
                from_left,
                from_right,
            },
            w,
        )
    }

    /// `int_a^b f`, stopping once two successive levels agree to `tol`.
    pub fn integrate<V, F>(&self, f: F, a: &Float, b: &Float, tol: &Float) -> QuadResult<V>
    where
        V: QuadValue,
        F: Fn(&Node) -> V + Sync,
    {
        let p = self.bits;
        let half = Float::with_val(p, b - a) / 2u32;
        let mut raw = V::zero(p);
        let mut evaluations = 0usize;
        let mut previous: Option<V> = None;
        let mut error = Float::with_val(64, rug::float::Special::Infinity);
        let mut result = V::zero(p);

        for level in 0..=self.max_level {
            let h = Float::with_val(p, Float::i_exp(1, -(level as i32)));
            let count = (self.t_max * f64::from(1u32 << level)).ceil() as i64;
            let ks: Vec<i64> = (-count..=count)
                .filter(|k| level == 0 || k.rem_euclid(2) == 1)
                .collect();
            let terms: Vec<V> = ks
                .par_iter()
                .map(|&k| {
                    let t = Float::with_val(p, &h * k);
                    let (node, w) = self.node(&t, a, &half);
                    f(&node).scaled(&w)
                })
                .collect();
            evaluations += terms.len();
            let one = Float::with_val(p, 1);
            for term in &terms {
                raw.add_scaled(term, &one);
            }
            result = raw.scaled(&h);
            if let Some(prev) = &previous {
                error = result.distance(prev);
                if level >= self.min_level && error <= *tol {
                    return QuadResult {
                        value: result,
                        error,
                        evaluations,
                        levels: level,
                    };
                }
            }
            previous = Some(result.clone());
        }
        QuadResult {
            value: result,
            error,
            evaluations,
            levels: self.max_level,
        }
    }

    /// Sum of [`integrate`](Self::integrate) over consecutive panels
    /// `[points[i], points[i+1]]`, in order.
    pub fn integrate_panels<V, F>(&self, f: F, points: &[Float], tol: &Float) -> QuadResult<V>
    where
        V: QuadValue,
        F: Fn(&Node) -> V + Sync,
    {
        let p = self.bits;
        let mut value = V::zero(p);
        let mut error = Float::new(64);
        let mut evaluations = 0;
        let mut levels = 0;
        let one = Float::with_val(p, 1);
        let per_panel = Float::with_val(64, tol / points.len().max(1) as u32);
        for pair in points.windows(2) {
            let r = self.integrate(&f, &pair[0], &pair[1], &per_panel);
            value.add_scaled(&r.value, &one);
            error += r.error;
            evaluations += r.evaluations;
            levels = levels.max(r.levels);
        }
        QuadResult {
            value,
            error,
            evaluations,
            levels,
        }
    }
}
