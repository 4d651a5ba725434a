//! Multiprecision real and complex values and the classical functions built
//! on them: Gamma, log-Gamma, digamma, zeta, zeta', and Euler's constant.
//!
//! Every function takes a working precision in decimal digits and guarantees
//! `digits - GUARD_DIGITS` correct digits. Internally it runs at
//! [`bits_for_digits`] bits, which already carries a few spare bits.
//!
//! Algorithms:
//! - zeta and zeta' share one Euler-Maclaurin kernel ([`power_tail`]), with
//!   the derivative obtained term by term rather than by differencing.
//! - digamma and log-Gamma use their asymptotic Bernoulli series after the
//!   argument is raised above a precision-dependent threshold.
//! - Euler's constant comes from the Brent-McMillan Bessel-function sum, so
//!   it is independent of the digamma code it is checked against.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::rational::bernoulli;

pub const GUARD_DIGITS: u32 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const SPARE_BITS: u32 = 24;

pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * LOG2_10).ceil() as u32 + SPARE_BITS
}

/// `10^{-exponent}` at the given bit precision.
pub fn ten_pow_neg(exponent: i64, bits: u32) -> Float {
    let ten = Float::with_val(bits, 10);
    ten.pow(-exponent as i32)
}

/// A real number together with the decimal working precision it was
/// computed at.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecReal {
    value: Float,
    digits: u32,
}

impl PrecReal {
    pub fn new(value: Float, digits: u32) -> Self {
        let mut value = value;
        value.set_prec_round(bits_for_digits(digits), Round::Nearest);
        PrecReal { value, digits }
    }

    pub fn from_f64(x: f64, digits: u32) -> Self {
        PrecReal::new(Float::with_val(bits_for_digits(digits), x), digits)
    }

    pub fn from_int(n: i64, digits: u32) -> Self {
        PrecReal::new(Float::with_val(bits_for_digits(digits), n), digits)
    }

    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        PrecReal::new(Float::with_val(bits_for_digits(digits), q), digits)
    }

    /// Parses a decimal literal such as `"2.5"`, `"-1e-3"` or a rational
    /// `"7/24"`, rounding once at the target precision.
    pub fn parse(text: &str, digits: u32) -> Result<Self> {
        let bits = bits_for_digits(digits);
        let text = text.trim();
        if text.contains('/') {
            let q = crate::rational::parse_rational(text)
                .ok_or_else(|| Error::InvalidInput(format!("not a rational: {text:?}")))?;
            return Ok(PrecReal::from_rational(&q, digits));
        }
        let parsed = Float::parse(text)
            .map_err(|e| Error::InvalidInput(format!("not a number: {text:?} ({e})")))?;
        Ok(PrecReal {
            value: Float::with_val(bits, parsed),
            digits,
        })
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn into_inner(self) -> Float {
        self.value
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        self.value.prec()
    }

    /// Number of leading digits this value is guaranteed to carry.
    pub fn guaranteed_digits(&self) -> u32 {
        self.digits.saturating_sub(GUARD_DIGITS)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn is_integer(&self) -> bool {
        self.value.is_integer()
    }

    pub fn abs(&self) -> PrecReal {
        PrecReal {
            value: self.value.clone().abs(),
            digits: self.digits,
        }
    }

    pub fn abs_diff(&self, other: &PrecReal) -> PrecReal {
        (self - other).abs()
    }

    /// Same value, recorded at a different precision (rounded if lower).
    pub fn with_digits(&self, digits: u32) -> PrecReal {
        PrecReal::new(self.value.clone(), digits)
    }

    /// Scientific decimal string with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        format_float(&self.value, sig)
    }
}

/// Deterministic scientific formatting, e.g. `-1.25e-3` or `0`.
pub fn format_float(x: &Float, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let (negative, mut digits, exp) = x.to_sign_string_exp(10, Some(sig));
    // exp is the position of the radix point in front of `digits`
    let exp = exp.unwrap_or(0) - 1;
    while digits.len() > 1 && digits.ends_with('0') {
        digits.pop();
    }
    let (head, tail) = digits.split_at(1);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    if exp != 0 {
        out.push_str(&format!("e{exp}"));
    }
    out
}

impl fmt::Display for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(self.guaranteed_digits().max(1) as usize))
    }
}

impl PartialOrd for PrecReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&PrecReal> for &PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: &PrecReal) -> PrecReal {
                let digits = self.digits.min(rhs.digits);
                let bits = bits_for_digits(digits);
                PrecReal {
                    value: Float::with_val(bits, (&self.value).$method(&rhs.value)),
                    digits,
                }
            }
        }
        impl $trait<PrecReal> for PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: PrecReal) -> PrecReal {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        PrecReal {
            value: -self.value,
            digits: self.digits,
        }
    }
}

/// Complex value with a shared decimal precision for both parts.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecComplex {
    value: Complex,
    digits: u32,
}

impl PrecComplex {
    pub fn new(re: &PrecReal, im: &PrecReal) -> Self {
        let digits = re.digits.min(im.digits);
        let bits = bits_for_digits(digits);
        PrecComplex {
            value: Complex::new(
                Float::with_val(bits, &re.value),
                Float::with_val(bits, &im.value),
            ),
            digits,
        }
    }

    pub fn from_complex(value: Complex, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        PrecComplex {
            value: Complex::new(
                Float::with_val(bits, &value.re),
                Float::with_val(bits, &value.im),
            ),
            digits,
        }
    }

    pub fn re(&self) -> PrecReal {
        PrecReal::new(self.value.re.clone(), self.digits)
    }

    pub fn im(&self) -> PrecReal {
        PrecReal::new(self.value.im.clone(), self.digits)
    }

    pub fn value(&self) -> &Complex {
        &self.value
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }
}

pub fn pi_float(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

pub fn pi(digits: u32) -> PrecReal {
    PrecReal::new(pi_float(bits_for_digits(digits)), digits)
}

fn bits_ln2() -> f64 {
    std::f64::consts::LN_2
}

/// Argument threshold above which the asymptotic Bernoulli series of
/// digamma / log-Gamma reaches `bits` bits within a modest number of terms.
fn asymptotic_threshold(bits: u32) -> f64 {
    f64::from(bits) * bits_ln2() / std::f64::consts::PI + 10.0
}

/// True when `x` lies within `10^{-digits/2}` of a nonpositive integer.
fn near_nonpositive_integer(x: &Float, digits: u32) -> bool {
    let r = Float::with_val(x.prec(), x.round_ref());
    if r > 0 {
        return false;
    }
    let gap = Float::with_val(x.prec(), x - &r).abs();
    gap < ten_pow_neg(i64::from(digits / 2), 64)
}

// ---------------------------------------------------------------------------
// Euler-Maclaurin kernel
// ---------------------------------------------------------------------------

/// `sum_{n >= n0} n^{-s}` and its `s`-derivative, by Euler-Maclaurin:
///
/// `N^{1-s}/(s-1) + N^{-s}/2 + sum_k B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}`
///
/// Valid for every real `s != 1` as long as `n0` is large compared with
/// `|s|` and the target precision. Returns `Err` if the correction series
/// starts growing before reaching `2^{-bits}`, so callers can raise `n0`.
pub fn power_tail(s: &Float, n0: u32, bits: u32) -> Result<(Float, Float)> {
    let p = bits;
    let n = Float::with_val(p, n0);
    let ln_n = Float::with_val(p, n.ln_ref());
    let sm1 = Float::with_val(p, s - 1u32);
    if sm1.is_zero() {
        return Err(Error::Pole {
            what: "sum of n^-s",
            at: "1".into(),
        });
    }
    let n_pow = Float::with_val(p, -(Float::with_val(p, s * &ln_n))).exp(); // N^{-s}
    let lead = Float::with_val(p, &n_pow * &n) / &sm1; // N^{1-s}/(s-1)
    let half = Float::with_val(p, &n_pow / 2u32);

    let mut value = Float::with_val(p, &lead + &half);
    let mut deriv = -Float::with_val(p, &lead * &ln_n) - Float::with_val(p, &lead / &sm1)
        - Float::with_val(p, &half * &ln_n);
    let scale = Float::with_val(64, lead.abs_ref()).max(&Float::with_val(64, half.abs_ref()));
    let dscale = Float::with_val(64, deriv.abs_ref()).max(&scale);
    let eps = Float::with_val(64, Float::i_exp(1, -(p as i32)));

    let inv_n2 = Float::with_val(p, n.square_ref()).recip();
    let mut power = Float::with_val(p, &n_pow / &n); // N^{-s-1}
    let mut poly = s.clone(); // s(s+1)...(s+2k-2)
    let mut poly_d = Float::with_val(p, 1); // its derivative
    let mut fact = Integer::from(2); // (2k)!
    let mut prev: Option<Float> = None;
    let max_terms = 4 * n0 as usize + 64;
    for k in 1..=max_terms {
        let b = bernoulli(2 * k);
        let coeff = Float::with_val(p, &b / Rational::from(fact.clone()));
        let cp = Float::with_val(p, &coeff * &power);
        let term = Float::with_val(p, &cp * &poly);
        let lp = Float::with_val(p, &ln_n * &poly);
        let dterm = Float::with_val(p, &poly_d - &lp) * &cp;
        value += &term;
        deriv += &dterm;

        let size = Float::with_val(64, term.abs_ref()).max(&Float::with_val(64, dterm.abs_ref()));
        let small = Float::with_val(64, term.abs_ref()) <= Float::with_val(64, &eps * &scale)
            && Float::with_val(64, dterm.abs_ref()) <= Float::with_val(64, &eps * &dscale);
        if small {
            return Ok((value, deriv));
        }
        if let Some(prev) = &prev {
            if k > 3 && size > *prev {
                return Err(Error::Precision(format!(
                    "Euler-Maclaurin series for n^-s diverging at N = {n0}"
                )));
            }
        }
        prev = Some(size);

        for shift in [2 * k - 1, 2 * k] {
            let factor = Float::with_val(p, s + shift as u32);
            poly_d = Float::with_val(p, &poly_d * &factor) + &poly;
            poly *= &factor;
        }
        fact *= (2 * k + 1) as u64 * (2 * k + 2) as u64;
        power *= &inv_n2;
    }
    Err(Error::Precision(format!(
        "Euler-Maclaurin series for n^-s did not settle at N = {n0}"
    )))
}

/// Starting cutoff for the direct part of the Euler-Maclaurin sums.
pub fn em_cutoff(s: &Float, bits: u32) -> u32 {
    let s_abs = s.to_f64().abs();
    (f64::from(bits) * bits_ln2() / std::f64::consts::PI + s_abs).ceil() as u32 + 8
}

/// zeta(s) and zeta'(s) at `bits` bits.
pub fn zeta_and_derivative_float(s: &Float, bits: u32) -> Result<(Float, Float)> {
    if *s == 1 {
        return Err(Error::Pole {
            what: "zeta",
            at: "1".into(),
        });
    }
    let mut cutoff = em_cutoff(s, bits);
    loop {
        // left of the critical strip the direct sum is far larger than the result
        let sf = s.to_f64();
        let extra = if sf < 1.0 {
            ((1.0 - sf) * f64::from(cutoff).log2()).ceil() as u32
        } else {
            0
        };
        let w = bits + 16 + extra;
        let sw = Float::with_val(w, s);
        let mut sum = Float::new(w);
        let mut dsum = Float::new(w);
        for n in 1..cutoff {
            let ln_n = Float::with_val(w, n).ln();
            let term = Float::with_val(w, -Float::with_val(w, &sw * &ln_n)).exp();
            dsum -= Float::with_val(w, &term * &ln_n);
            sum += term;
        }
        match power_tail(&sw, cutoff, w) {
            Ok((tail, dtail)) => {
                sum += tail;
                dsum += dtail;
                return Ok((Float::with_val(bits, sum), Float::with_val(bits, dsum)));
            }
            Err(Error::Precision(_)) if cutoff < 1 << 16 => cutoff *= 2,
            Err(e) => return Err(e),
        }
    }
}

pub fn zeta_float(s: &Float, bits: u32) -> Result<Float> {
    zeta_and_derivative_float(s, bits).map(|(z, _)| z)
}

pub fn zeta_prime_float(s: &Float, bits: u32) -> Result<Float> {
    zeta_and_derivative_float(s, bits).map(|(_, d)| d)
}

/// Riemann zeta for real `s != 1`.
pub fn zeta(s: &PrecReal) -> Result<PrecReal> {
    let z = zeta_float(&s.value, s.bits())?;
    Ok(PrecReal::new(z, s.digits))
}

/// Derivative of Riemann zeta for real `s != 1`.
pub fn zeta_prime(s: &PrecReal) -> Result<PrecReal> {
    let d = zeta_prime_float(&s.value, s.bits())?;
    Ok(PrecReal::new(d, s.digits))
}

// ---------------------------------------------------------------------------
// digamma, Gamma
// ---------------------------------------------------------------------------

fn bernoulli_float(n: usize, bits: u32) -> Float {
    Float::with_val(bits, &bernoulli(n))
}

/// `psi(y) = ln y - 1/(2y) - sum_k B_{2k} / (2k y^{2k})` for large `y`.
fn digamma_asymptotic(y: &Float, bits: u32) -> Float {
    let p = bits;
    let mut out = Float::with_val(p, y.ln_ref()) - Float::with_val(p, y.recip_ref()) / 2u32;
    let inv_y2 = Float::with_val(p, y.square_ref()).recip();
    let mut power = inv_y2.clone();
    let eps = Float::with_val(64, Float::i_exp(1, -(p as i32)));
    for k in 1..(4 * p as usize) {
        let term = bernoulli_float(2 * k, p) * &power / (2 * k) as u32;
        out -= &term;
        if Float::with_val(64, term.abs_ref()) < eps {
            break;
        }
        power *= &inv_y2;
    }
    out
}

pub fn digamma_float(x: &Float, bits: u32) -> Float {
    let p = bits + 16;
    let threshold = asymptotic_threshold(p);
    let xf = x.to_f64();
    let shift = if xf < threshold {
        (threshold - xf).ceil() as u32
    } else {
        0
    };
    let xw = Float::with_val(p, x);
    let mut recips = Float::new(p);
    for j in 0..shift {
        recips += Float::with_val(p, &xw + j).recip();
    }
    let y = Float::with_val(p, &xw + shift);
    Float::with_val(bits, digamma_asymptotic(&y, p) - recips)
}

/// Digamma for real `s`, rejecting arguments at or near its poles.
pub fn digamma(s: &PrecReal) -> Result<PrecReal> {
    if near_nonpositive_integer(&s.value, s.digits) {
        return Err(Error::Pole {
            what: "digamma",
            at: s.to_decimal(20),
        });
    }
    Ok(PrecReal::new(digamma_float(&s.value, s.bits()), s.digits))
}

/// Stirling series for log Gamma at large real `y`.
fn ln_gamma_asymptotic(y: &Float, bits: u32) -> Float {
    let p = bits;
    let half = Float::with_val(p, y - 0.5f64);
    let mut out = half * Float::with_val(p, y.ln_ref()) - y;
    let two_pi = pi_float(p) * 2u32;
    out += two_pi.ln() / 2u32;
    let inv_y = Float::with_val(p, y.recip_ref());
    let inv_y2 = Float::with_val(p, inv_y.square_ref());
    let mut power = inv_y;
    let eps = Float::with_val(64, Float::i_exp(1, -(p as i32)));
    for k in 1..(4 * p as usize) {
        let denom = (2 * k * (2 * k - 1)) as u32;
        let term = bernoulli_float(2 * k, p) * &power / denom;
        out += &term;
        if Float::with_val(64, term.abs_ref()) < eps {
            break;
        }
        power *= &inv_y2;
    }
    out
}

pub fn gamma_float(x: &Float, bits: u32) -> Float {
    let p = bits + 24;
    let threshold = asymptotic_threshold(p);
    let xf = x.to_f64();
    let shift = if xf < threshold {
        (threshold - xf).ceil() as u32
    } else {
        0
    };
    let xw = Float::with_val(p, x);
    let mut prod = Float::with_val(p, 1);
    for j in 0..shift {
        prod *= Float::with_val(p, &xw + j);
    }
    let y = Float::with_val(p, &xw + shift);
    let g = ln_gamma_asymptotic(&y, p).exp();
    Float::with_val(bits, g / prod)
}

/// log Gamma for real `x > 0`.
pub fn ln_gamma_float(x: &Float, bits: u32) -> Float {
    let p = bits + 16;
    let threshold = asymptotic_threshold(p);
    let xf = x.to_f64();
    let shift = if xf < threshold {
        (threshold - xf).ceil() as u32
    } else {
        0
    };
    let xw = Float::with_val(p, x);
    let mut log_prod = Float::new(p);
    for j in 0..shift {
        log_prod += Float::with_val(p, &xw + j).ln();
    }
    let y = Float::with_val(p, &xw + shift);
    Float::with_val(bits, ln_gamma_asymptotic(&y, p) - log_prod)
}

/// Gamma for real `s`.
pub fn gamma(s: &PrecReal) -> Result<PrecReal> {
    if near_nonpositive_integer(&s.value, s.digits) {
        return Err(Error::Pole {
            what: "Gamma",
            at: s.to_decimal(20),
        });
    }
    Ok(PrecReal::new(gamma_float(&s.value, s.bits()), s.digits))
}

/// log Gamma for real `s > 0`.
pub fn ln_gamma(s: &PrecReal) -> Result<PrecReal> {
    if *s.value() <= 0 {
        return Err(Error::Domain(format!(
            "ln_gamma needs s > 0, got {}",
            s.to_decimal(20)
        )));
    }
    Ok(PrecReal::new(ln_gamma_float(&s.value, s.bits()), s.digits))
}

fn ln_gamma_asymptotic_complex(y: &Complex, bits: u32) -> Complex {
    let p = bits;
    let ln_y = y.ln();
    let half = Complex::new(Float::with_val(p, &y.re - 0.5f64), y.im.clone());
    let mut out = &(&half * &ln_y) - y;
    let two_pi = pi_float(p) * 2u32;
    out.re += two_pi.ln() / 2u32;
    let inv_y = y.recip();
    let inv_y2 = &inv_y * &inv_y;
    let mut power = inv_y;
    let eps = Float::with_val(64, Float::i_exp(1, -(p as i32)));
    for k in 1..(4 * p as usize) {
        let denom = Float::with_val(p, (2 * k * (2 * k - 1)) as u32);
        let coeff = bernoulli_float(2 * k, p) / denom;
        let term = power.scale(&coeff);
        out = &out + &term;
        if Float::with_val(64, term.abs()) < eps {
            break;
        }
        power = &power * &inv_y2;
    }
    out
}

pub fn gamma_complex_float(z: &Complex, bits: u32) -> Complex {
    let p = bits + 24;
    let threshold = asymptotic_threshold(p);
    let xf = z.re.to_f64();
    let shift = if xf < threshold {
        (threshold - xf).ceil() as u32
    } else {
        0
    };
    let zw = Complex::new(Float::with_val(p, &z.re), Float::with_val(p, &z.im));
    let mut prod = Complex::from_real(Float::with_val(p, 1));
    for j in 0..shift {
        let factor = Complex::new(Float::with_val(p, &zw.re + j), zw.im.clone());
        prod = &prod * &factor;
    }
    let y = Complex::new(Float::with_val(p, &zw.re + shift), zw.im.clone());
    let g = ln_gamma_asymptotic_complex(&y, p).exp().div(&prod);
    Complex::new(Float::with_val(bits, &g.re), Float::with_val(bits, &g.im))
}

/// Gamma for complex `z`, principal branch of the Stirling logarithm.
pub fn gamma_complex(z: &PrecComplex) -> Result<PrecComplex> {
    if z.value.im.is_zero() && near_nonpositive_integer(&z.value.re, z.digits) {
        return Err(Error::Pole {
            what: "Gamma",
            at: format_float(&z.value.re, 20),
        });
    }
    let bits = bits_for_digits(z.digits);
    Ok(PrecComplex::from_complex(
        gamma_complex_float(&z.value, bits),
        z.digits,
    ))
}

// ---------------------------------------------------------------------------
// Euler's constant
// ---------------------------------------------------------------------------

/// Brent-McMillan: with `U = sum (n^k/k!)^2 (H_k - ln n)` and
/// `V = sum (n^k/k!)^2`, `gamma = U/V + O(e^{-4n})`.
pub fn euler_gamma_float(bits: u32) -> Float {
    let n = (f64::from(bits) * bits_ln2() / 4.0).ceil() as u32 + 2;
    // terms peak near e^{2n}; carry enough bits above that
    let p = bits + 32 + (2.0 * f64::from(n) / bits_ln2()).ceil() as u32;
    let n2 = Float::with_val(p, n).square();
    let mut a = -Float::with_val(p, n).ln();
    let mut b = Float::with_val(p, 1);
    let mut u = a.clone();
    let mut v = b.clone();
    let eps = Float::with_val(64, Float::i_exp(1, -(p as i32)));
    let mut k: u32 = 1;
    loop {
        b = Float::with_val(p, &b * &n2) / (k * k);
        a = (Float::with_val(p, &a * &n2) / k + &b) / k;
        u += &a;
        v += &b;
        let small_b = Float::with_val(64, &b / &v) < eps;
        let small_a = Float::with_val(64, Float::with_val(64, a.abs_ref()) / &v) < eps;
        if small_a && small_b && k > n {
            break;
        }
        k += 1;
    }
    Float::with_val(bits, u / v)
}

/// Euler's constant.
pub fn euler_gamma(digits: u32) -> PrecReal {
    assert!(digits >= 1);
    PrecReal::new(euler_gamma_float(bits_for_digits(digits)), digits)
}

/// `pi cot(pi s)`.
pub fn pi_cot_pi(s: &Float, bits: u32) -> Float {
    let pi = pi_float(bits);
    let x = Float::with_val(bits, s * &pi);
    pi * x.cot()
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: u32 = 50;

    fn pr(x: f64) -> PrecReal {
        PrecReal::from_f64(x, D)
    }

    fn assert_close(a: &Float, b: &Float, tol_exp: i64, what: &str) {
        let diff = Float::with_val(a.prec(), a - b).abs();
        assert!(
            diff < ten_pow_neg(tol_exp, 64),
            "{what}: {} vs {} (diff {})",
            format_float(a, 30),
            format_float(b, 30),
            format_float(&diff, 5)
        );
    }

    fn mpfr_zeta(x: f64, bits: u32) -> Float {
        Float::with_val(bits, x).zeta()
    }

    #[test]
    fn formatting_is_scientific_and_trimmed() {
        let b = 256;
        assert_eq!(format_float(&Float::with_val(b, 0), 10), "0");
        assert_eq!(format_float(&Float::with_val(b, -0.00125), 10), "-1.25e-3");
        assert_eq!(format_float(&Float::with_val(b, 2.5), 10), "2.5");
        assert_eq!(format_float(&Float::with_val(b, 1200), 10), "1.2e3");
    }

    #[test]
    fn parse_accepts_decimals_and_rationals() {
        let a = PrecReal::parse("2.5", D).unwrap();
        assert_eq!(a.to_f64(), 2.5);
        let q = PrecReal::parse("7/24", D).unwrap();
        assert!((q.to_f64() - 7.0 / 24.0).abs() < 1e-16);
        assert!(PrecReal::parse("x", D).is_err());
    }

    #[test]
    fn precision_propagates_as_minimum() {
        let a = PrecReal::from_f64(1.0, 40);
        let b = PrecReal::from_f64(2.0, 60);
        assert_eq!((&a + &b).digits(), 40);
        assert_eq!((&b * &a).digits(), 40);
    }

    #[test]
    fn gamma_special_values() {
        let one = gamma(&pr(1.0)).unwrap();
        assert_close(one.value(), &Float::with_val(256, 1), 45, "Gamma(1)");
        let half = gamma(&pr(0.5)).unwrap();
        let sqrt_pi = pi_float(256).sqrt();
        assert_close(half.value(), &sqrt_pi, 45, "Gamma(1/2)");
        assert!(matches!(gamma(&pr(-3.0)), Err(Error::Pole { .. })));
        assert!(matches!(gamma(&pr(0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn gamma_reflection_at_two_and_a_half() {
        let bits = bits_for_digits(D);
        let lhs = gamma(&pr(2.5)).unwrap().into_inner() * gamma(&pr(-1.5)).unwrap().into_inner();
        let pi = pi_float(bits);
        let rhs = Float::with_val(bits, &pi / Float::with_val(bits, &pi * 2.5f64).sin());
        assert_close(&lhs, &rhs, 40, "reflection");
    }

    #[test]
    fn gamma_matches_mpfr() {
        for &x in &[0.1, 1.7, 3.25, 9.5, -0.3, -2.75, 20.0] {
            let mine = gamma(&pr(x)).unwrap();
            let theirs = Float::with_val(256, x).gamma();
            let rel = Float::with_val(256, mine.value() - &theirs) / &theirs;
            assert!(rel.abs() < 1e-40, "Gamma({x})");
        }
        let lg = ln_gamma(&pr(30.5)).unwrap();
        assert_close(lg.value(), &Float::with_val(256, 30.5).ln_gamma(), 40, "lnGamma");
    }

    #[test]
    fn complex_gamma_reduces_to_real_and_conjugates() {
        let bits = bits_for_digits(D);
        let z = Complex::new(Float::with_val(bits, 2.5), Float::new(bits));
        let g = gamma_complex_float(&z, bits);
        assert_close(&g.re, &Float::with_val(bits, 2.5).gamma(), 40, "Gamma(2.5)");
        assert!(g.im.clone().abs() < 1e-45);

        // |Gamma(1/2 + i t)|^2 = pi / cosh(pi t)
        let t = 1.25;
        let z = Complex::new(Float::with_val(bits, 0.5), Float::with_val(bits, t));
        let g = gamma_complex_float(&z, bits);
        let pi = pi_float(bits);
        let expect = Float::with_val(bits, &pi / Float::with_val(bits, &pi * t).cosh());
        assert_close(&g.norm_sqr(), &expect, 40, "|Gamma(1/2+it)|^2");
        let gc = gamma_complex_float(&z.conj(), bits);
        assert_close(&gc.im, &-g.im.clone(), 40, "conjugate symmetry");
    }

    #[test]
    fn digamma_special_values() {
        let g = euler_gamma(D);
        let psi1 = digamma(&pr(1.0)).unwrap();
        assert_close(psi1.value(), &-g.value().clone(), 45, "psi(1)");
        let psi2 = digamma(&pr(2.0)).unwrap();
        let expect = Float::with_val(256, 1) - g.value();
        assert_close(psi2.value(), &expect, 45, "psi(2)");
        assert!(matches!(digamma(&pr(-2.0)), Err(Error::Pole { .. })));
        // within 10^{-digits/2} of a pole is rejected too
        let close = PrecReal::parse("-3.0000000000000000000000000000001", D).unwrap();
        assert!(digamma(&close).is_err());
    }

    #[test]
    fn digamma_reflection_at_point_three() {
        let bits = bits_for_digits(D);
        let s = PrecReal::parse("0.3", D).unwrap();
        let one_minus = &PrecReal::from_int(1, D) - &s;
        let lhs = digamma(&s).unwrap().into_inner() - digamma(&one_minus).unwrap().into_inner()
            + pi_cot_pi(s.value(), bits);
        assert!(lhs.abs() < 1e-40);
    }

    #[test]
    fn digamma_matches_mpfr() {
        for &x in &[0.05, 0.5, 3.0, 7.25, -0.5, -4.3] {
            let mine = digamma(&pr(x)).unwrap();
            let theirs = Float::with_val(256, x).digamma();
            assert_close(mine.value(), &theirs, 40, &format!("psi({x})"));
        }
    }

    #[test]
    fn euler_constant_digits() {
        let g = euler_gamma(30);
        assert!(g.to_decimal(30).starts_with("5.77215664901532860606512090082"));
        let mpfr = Float::with_val(256, Constant::Euler);
        let g = euler_gamma(D);
        assert_close(g.value(), &mpfr, 45, "gamma");
        let g = euler_gamma(200);
        let mpfr = Float::with_val(800, Constant::Euler);
        assert_close(g.value(), &mpfr, 195, "gamma 200 digits");
    }

    #[test]
    fn zeta_special_values() {
        let z0 = zeta(&pr(0.0)).unwrap();
        assert_close(z0.value(), &Float::with_val(256, -0.5), 45, "zeta(0)");
        let zm1 = zeta(&pr(-1.0)).unwrap();
        let expect = Float::with_val(256, &Rational::from((-1, 12)));
        assert_close(zm1.value(), &expect, 45, "zeta(-1)");
        let zm2 = zeta(&pr(-2.0)).unwrap();
        assert!(zm2.value().clone().abs() < 1e-45);
        let zm3 = zeta(&pr(-3.0)).unwrap();
        let exact = Float::with_val(256, &crate::rational::zeta_neg_odd_exact(2));
        assert_close(zm3.value(), &exact, 45, "zeta(-3)");
        assert!(matches!(zeta(&pr(1.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn zeta_matches_mpfr_across_the_line() {
        for &x in &[-11.5, -6.25, -0.5, 0.5, 0.999, 1.001, 1.5, 2.0, 3.0, 6.0, 30.0] {
            let mine = zeta(&pr(x)).unwrap();
            let theirs = mpfr_zeta(x, 256);
            let rel = Float::with_val(256, mine.value() - &theirs) / &theirs;
            assert!(rel.abs() < 1e-40, "zeta({x})");
        }
    }

    #[test]
    fn zeta_functional_equation_for_negative_s() {
        let bits = bits_for_digits(D);
        let pi = pi_float(bits);
        for &s in &[-2.5, -7.75, -14.5] {
            let lhs = zeta(&pr(s)).unwrap().into_inner();
            let one_minus = Float::with_val(bits, 1.0 - s);
            let rhs = Float::with_val(bits, 2).pow(s)
                * Float::with_val(bits, pi.clone().pow(s - 1.0))
                * Float::with_val(bits, Float::with_val(bits, &pi * s) / 2u32).sin()
                * gamma_float(&one_minus, bits)
                * zeta_float(&one_minus, bits).unwrap();
            let rel = Float::with_val(bits, &lhs - &rhs) / &rhs;
            assert!(rel.abs() < 1e-40, "s = {s}");
        }
    }

    #[test]
    fn zeta_prime_closed_forms() {
        let bits = bits_for_digits(D);
        let pi = pi_float(bits);
        let d0 = zeta_prime(&pr(0.0)).unwrap();
        let expect = -(Float::with_val(bits, &pi * 2u32).ln() / 2u32);
        assert_close(d0.value(), &expect, 45, "zeta'(0)");
        let dm2 = zeta_prime(&pr(-2.0)).unwrap();
        let z3 = mpfr_zeta(3.0, bits);
        let expect = -(z3 / (Float::with_val(bits, pi.square_ref()) * 4u32));
        assert_close(dm2.value(), &expect, 45, "zeta'(-2)");
    }

    /// Central differences with exact offsets, Richardson-extrapolated once
    /// so the error is O(h^4).
    fn central_difference(s: f64, h: f64) -> Float {
        let bits = 400;
        let f = |x: Float| zeta_float(&x, bits).unwrap();
        let d = |h: f64| {
            let s = Float::with_val(bits, s);
            let up = f(Float::with_val(bits, &s + h));
            let down = f(Float::with_val(bits, &s - h));
            (up - down) / (2.0 * h)
        };
        (d(h / 2.0) * 4u32 - d(h)) / 3u32
    }

    #[test]
    fn zeta_prime_against_central_difference() {
        for &s in &[2.0, 3.5, 6.0, 0.0, -2.0] {
            let exact = zeta_prime(&pr(s)).unwrap().into_inner();
            let approx = central_difference(s, 1e-6);
            assert_close(&exact, &approx, 20, &format!("zeta'({s})"));
        }
        // plain central difference converges like h^2
        let s = 4.0;
        let exact = zeta_prime(&pr(s)).unwrap().into_inner();
        let bits = 400;
        let err = |h: f64| {
            let sf = Float::with_val(bits, s);
            let up = zeta_float(&Float::with_val(bits, &sf + h), bits).unwrap();
            let down = zeta_float(&Float::with_val(bits, &sf - h), bits).unwrap();
            let d = (up - down) / (2.0 * h);
            Float::with_val(bits, d - &exact).abs().to_f64()
        };
        let ratio = err(1e-3) / err(5e-4);
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn corollary_two_lemma_converges_linearly() {
        // zeta(s+1) - psi(s) zeta(s) - 1/(2s) -> gamma/2 + zeta'(0) as s -> 0
        let bits = bits_for_digits(D);
        let g = euler_gamma(D).into_inner();
        let limit = Float::with_val(bits, &g / 2u32)
            + zeta_prime(&pr(0.0)).unwrap().into_inner();
        let mut prev_err: Option<f64> = None;
        for k in 5..=10 {
            let s = Float::with_val(bits, 10f64.powi(-k));
            let sp1 = Float::with_val(bits, &s + 1u32);
            let val = zeta_float(&sp1, bits).unwrap()
                - digamma_float(&s, bits) * zeta_float(&s, bits).unwrap()
                - Float::with_val(bits, s.recip_ref()) / 2u32;
            let err = Float::with_val(bits, val - &limit).abs().to_f64();
            assert!(err < 10f64.powi(-k + 1), "k = {k}: {err}");
            if let Some(prev) = prev_err {
                let ratio = prev / err;
                assert!((ratio - 10.0).abs() < 0.5, "rate at k = {k}: {ratio}");
            }
            prev_err = Some(err);
        }
    }

    #[test]
    fn doubling_precision_keeps_guaranteed_digits() {
        let agree = |lo: &PrecReal, hi: &PrecReal| {
            let g = lo.guaranteed_digits() as i64;
            let diff = Float::with_val(hi.bits(), lo.value() - hi.value()).abs();
            let scale = Float::with_val(64, hi.value().abs_ref()).max(&Float::with_val(64, 1));
            diff < ten_pow_neg(g, 64) * scale
        };
        for &s in &[2.5, -3.5, 0.25] {
            let lo = zeta(&PrecReal::from_f64(s, 40)).unwrap();
            let hi = zeta(&PrecReal::from_f64(s, 80)).unwrap();
            assert!(agree(&lo, &hi), "zeta({s})");
            let lo = digamma(&PrecReal::from_f64(s, 40)).unwrap();
            let hi = digamma(&PrecReal::from_f64(s, 80)).unwrap();
            assert!(agree(&lo, &hi), "psi({s})");
            let lo = gamma(&PrecReal::from_f64(s, 40)).unwrap();
            let hi = gamma(&PrecReal::from_f64(s, 80)).unwrap();
            assert!(agree(&lo, &hi), "Gamma({s})");
        }
    }
}
