//! Minimal multiprecision complex arithmetic on top of MPFR floats.
//!
//! Only what the contour integrands and complex Gamma need: field operations,
//! `exp`, the principal `ln`, and real powers with an explicit argument.

use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::Float;

#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        Complex::new(Float::new(bits), Float::new(bits))
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Complex { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().min(self.im.prec())
    }

    /// `r e^{i theta}`
    pub fn from_polar(r: &Float, theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        Complex::new(c * r, s * r)
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec(), self.re.square_ref()) + Float::with_val(self.prec(), self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn scale(&self, k: &Float) -> Self {
        Complex::new(
            Float::with_val(self.prec(), &self.re * k),
            Float::with_val(self.prec(), &self.im * k),
        )
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex::new(
            Float::with_val(self.prec(), &self.re / &d),
            -Float::with_val(self.prec(), &self.im / &d),
        )
    }

    pub fn div(&self, rhs: &Complex) -> Self {
        self * &rhs.recip()
    }

    pub fn exp(&self) -> Self {
        let r = self.re.clone().exp();
        Complex::from_polar(&r, &self.im)
    }

    /// `e^z - 1` without cancellation for small `|z|`.
    pub fn exp_m1(&self) -> Self {
        // e^{x+iy} - 1 = (e^x - 1) cos y - 2 sin^2(y/2) + i e^x sin y
        let p = self.prec();
        let em1 = self.re.clone().exp_m1();
        let (sin_y, cos_y) = self.im.clone().sin_cos(Float::new(p));
        let half = Float::with_val(p, &self.im / 2u32).sin();
        let two_sin_sq = Float::with_val(p, half.square_ref()) * 2u32;
        let re = Float::with_val(p, &em1 * &cos_y) - two_sin_sq;
        let ex = em1 + 1u32;
        Complex::new(re, ex * sin_y)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Complex::new(self.abs().ln(), self.arg())
    }

    /// `|z|^p e^{i p theta}` where `theta` is the caller's chosen argument of `z`.
    pub fn pow_real_with_arg(modulus: &Float, theta: &Float, p: &Float) -> Self {
        let prec = modulus.prec();
        let r = Float::with_val(prec, modulus.pow(p));
        let angle = Float::with_val(prec, theta * p);
        Complex::from_polar(&r, &angle)
    }

    /// Principal branch of `z^p` for real `p`.
    pub fn pow_real(&self, p: &Float) -> Self {
        Complex::pow_real_with_arg(&self.abs(), &self.arg(), p)
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re + &rhs.re),
            Float::with_val(p, &self.im + &rhs.im),
        )
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re - &rhs.re),
            Float::with_val(p, &self.im - &rhs.im),
        )
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        Complex::new(ac - bd, ad + bc)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}
