//! The Euler sum `h(s) = sum_{n>=1} H_n n^{-s}`: by direct summation for
//! `s > 1`, by analytic continuation through the contour integral `F`
//! elsewhere, and Laurent expansions at its poles `s = 0, -1, -3, ...`.

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::contour::{f_at_nonpositive_integer, f_hankel, f_real_axis};
use crate::error::{Error, Result};
use crate::precision::{
    bits_for_digits, digamma_float, em_cutoff, euler_gamma_float, pi_float, power_tail,
    ten_pow_neg, zeta_and_derivative_float, zeta_float, PrecReal, GUARD_DIGITS,
};
use crate::rational::{bernoulli, BigRat};

/// Exact harmonic numbers `H_0 = 0, H_1 = 1, ..., H_n`.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    values: Vec<BigRat>,
}

impl HarmonicTable {
    pub fn new(n: usize) -> Self {
        let mut table = HarmonicTable {
            values: vec![Rational::new()],
        };
        table.extend_to(n);
        table
    }

    pub fn extend_to(&mut self, n: usize) {
        while self.values.len() <= n {
            let k = self.values.len() as u64;
            let next = Rational::from(self.values.last().unwrap() + Rational::from((1, k)));
            self.values.push(next);
        }
    }

    /// Largest stored index.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// `H_n`; panics past [`max_index`](Self::max_index).
    pub fn get(&self, n: usize) -> &BigRat {
        &self.values[n]
    }
}

// ---------------------------------------------------------------------------
// direct series
// ---------------------------------------------------------------------------

/// `h(s)` for real `s > 1`.
///
/// Sums `H_n n^{-s}` for `n < N` and replaces the rest by the asymptotic
/// expansion `H_n = ln n + gamma + 1/(2n) - sum_j B_{2j}/(2j) n^{-2j}`,
/// each piece summed by Euler-Maclaurin.
pub fn h_series(s: &PrecReal, precision: u32) -> Result<PrecReal> {
    if *s.value() <= 1 {
        return Err(Error::Domain(format!(
            "the series for h(s) needs s > 1, got {}",
            s.to_decimal(20)
        )));
    }
    let bits = bits_for_digits(precision + GUARD_DIGITS) + 16;
    let sw = Float::with_val(bits, s.value());
    let mut cutoff = em_cutoff(&sw, bits);
    loop {
        match h_series_float(&sw, cutoff, bits) {
            Ok(v) => return Ok(PrecReal::new(v, precision)),
            Err(Error::Precision(_)) if cutoff < 1 << 14 => cutoff *= 2,
            Err(e) => return Err(e),
        }
    }
}

fn h_series_float(s: &Float, n0: u32, bits: u32) -> Result<Float> {
    let mut harmonic = Float::new(bits);
    let mut head = Float::new(bits);
    for n in 1..n0 {
        harmonic += Float::with_val(bits, n).recip();
        let ln_n = Float::with_val(bits, n).ln();
        let pow = Float::with_val(bits, -Float::with_val(bits, s * &ln_n)).exp();
        head += Float::with_val(bits, &harmonic * &pow);
    }

    let (t0, dt0) = power_tail(s, n0, bits)?;
    let (t1, _) = power_tail(&Float::with_val(bits, s + 1u32), n0, bits)?;
    let gamma = euler_gamma_float(bits);
    let mut tail = -dt0 + gamma * t0 + t1 / 2u32;

    let scale = Float::with_val(64, tail.abs_ref()).max(&Float::with_val(64, 1));
    let eps = Float::with_val(64, Float::i_exp(1, -(bits as i32))) * scale;
    let mut prev: Option<Float> = None;
    for j in 1..=(4 * n0 as usize + 64) {
        let b = Float::with_val(bits, &bernoulli(2 * j)) / (2 * j) as u32;
        let (tj, _) = power_tail(&Float::with_val(bits, s + (2 * j) as u32), n0, bits)?;
        let term = b * tj;
        let size = Float::with_val(64, term.abs_ref());
        tail -= term;
        if size <= eps {
            return Ok(head + tail);
        }
        if let Some(p) = &prev {
            if j > 3 && size > *p {
                return Err(Error::Precision(format!(
                    "harmonic-number expansion diverging at N = {n0}"
                )));
            }
        }
        prev = Some(size);
    }
    Err(Error::Precision(format!(
        "harmonic-number expansion did not settle at N = {n0}"
    )))
}

// ---------------------------------------------------------------------------
// continuation
// ---------------------------------------------------------------------------

/// `h(s) = F(s) + zeta(s+1) - psi(s) zeta(s) - zeta'(s)` for real `s`.
///
/// `F` is taken on the real axis for `s > 1` and on the Hankel loop
/// otherwise. At `s = -2m` the product `psi(s) zeta(s)` tends to
/// `-zeta'(-2m)`, which cancels the last term, and `F(-2m)` comes from the
/// circle alone.
pub fn h_continued(s: &PrecReal, precision: u32) -> Result<PrecReal> {
    let work = precision + GUARD_DIGITS;
    let bits = bits_for_digits(work) + 16;
    let sw = Float::with_val(bits, s.value());
    let s_work = PrecReal::new(sw.clone(), work);

    if s.is_integer() {
        let k = s.to_f64() as i64;
        let pole = |what| Error::Pole {
            what,
            at: k.to_string(),
        };
        if k == 1 {
            return Err(pole("h at s = 1"));
        }
        if k == 0 || (k < 0 && k % 2 != 0) {
            return Err(pole("h"));
        }
        if k < 0 {
            let f = f_at_nonpositive_integer((1 - k) as usize, work)?;
            let zeta_next = zeta_float(&Float::with_val(bits, k + 1), bits)?;
            let h = f.value.into_inner() + zeta_next;
            return Ok(PrecReal::new(h, precision));
        }
    }

    let f = if sw > 1 {
        f_real_axis(&s_work, work)?
    } else {
        f_hankel(&s_work, work)?
    };
    let (zeta, zeta_d) = zeta_and_derivative_float(&sw, bits)?;
    let zeta_next = zeta_float(&Float::with_val(bits, &sw + 1u32), bits)?;
    let psi = digamma_float(&sw, bits);
    let h = f.value.into_inner() + zeta_next - psi * zeta - zeta_d;
    Ok(PrecReal::new(h, precision))
}

/// `h_series` for `s > 1`, `h_continued` otherwise.
pub fn h_auto(s: &PrecReal, precision: u32) -> Result<PrecReal> {
    if *s.value() > 1 {
        h_series(s, precision)
    } else {
        h_continued(s, precision)
    }
}

// ---------------------------------------------------------------------------
// Laurent expansions
// ---------------------------------------------------------------------------

/// `h(s) = sum_{k >= -pole_order} c_k (s - center)^k`, truncated.
#[derive(Debug, Clone)]
pub struct LaurentExpansion {
    pub center: PrecReal,
    pub pole_order: u32,
    /// `c_{-pole_order}, c_{-pole_order+1}, ...`
    pub coefficients: Vec<PrecReal>,
    /// Error bound for each coefficient.
    pub errors: Vec<Float>,
}

impl LaurentExpansion {
    /// `c_k`, if it was computed.
    pub fn coefficient(&self, k: i32) -> Option<&PrecReal> {
        let idx = k + self.pole_order as i32;
        usize::try_from(idx)
            .ok()
            .and_then(|i| self.coefficients.get(i))
    }

    pub fn error(&self, k: i32) -> Option<&Float> {
        let idx = k + self.pole_order as i32;
        usize::try_from(idx).ok().and_then(|i| self.errors.get(i))
    }
}

const LAURENT_NODES: usize = 8;
const MAX_LAURENT_COEFFS: usize = 4;

fn pole_center(center: &BigRat) -> Result<i64> {
    let bad = || {
        Error::InvalidInput(format!(
            "Laurent centers are 0 and the negative odd integers, got {center}"
        ))
    };
    if *center.denom() != 1 {
        return Err(bad());
    }
    let c = center.numer().to_i64().ok_or_else(bad)?;
    if c == 0 || (c < 0 && c % 2 != 0) {
        Ok(c)
    } else {
        Err(bad())
    }
}

/// Default sampling radius `10^{-floor(precision/4)}`.
pub fn default_delta_exponent(precision: u32) -> u32 {
    (precision / 4).max(2)
}

/// First `n_coeffs` Laurent coefficients of `h` at a pole.
pub fn laurent_at(center: &BigRat, n_coeffs: usize, precision: u32) -> Result<LaurentExpansion> {
    laurent_at_radius(center, n_coeffs, precision, default_delta_exponent(precision))
}

/// [`laurent_at`] with sampling radius `delta = 10^{-delta_exp}`.
///
/// `r(t) = t h(center + t)` is analytic at `t = 0`. It is sampled at the
/// Chebyshev points of `[-delta, delta]` and interpolated by a polynomial
/// of degree 7, whose coefficient of `t^{k+1}` is `c_k`. The fit is
/// repeated at `delta/2`; the reported values come from the smaller radius
/// and the error bound is twice the change plus a rounding allowance.
pub fn laurent_at_radius(
    center: &BigRat,
    n_coeffs: usize,
    precision: u32,
    delta_exp: u32,
) -> Result<LaurentExpansion> {
    let c = pole_center(center)?;
    if n_coeffs == 0 || n_coeffs > MAX_LAURENT_COEFFS {
        return Err(Error::InvalidInput(format!(
            "n_coeffs must be in 1..={MAX_LAURENT_COEFFS}, got {n_coeffs}"
        )));
    }
    let highest = n_coeffs as u32 - 1;
    let work = precision + GUARD_DIGITS + highest * (delta_exp + 1) + 5;
    let bits = bits_for_digits(work) + 16;
    let delta = ten_pow_neg(i64::from(delta_exp), bits);
    let coarse = fit_coefficients(c, &delta, work, bits)?;
    let half = Float::with_val(bits, &delta / 2u32);
    let fine = fit_coefficients(c, &half, work, bits)?;

    let rounding_base = ten_pow_neg(i64::from(work) - 5, 64);
    let allowed = ten_pow_neg(i64::from(precision.saturating_sub(GUARD_DIGITS)), 64);
    let mut coefficients = Vec::with_capacity(n_coeffs);
    let mut errors = Vec::with_capacity(n_coeffs);
    for k in 0..n_coeffs {
        let change = Float::with_val(64, &fine.coeffs[k] - &coarse.coeffs[k]).abs();
        let half_pow = Float::with_val(64, half.pow_ref_i(k as i32));
        let rounding = Float::with_val(64, &rounding_base * &fine.scale) / half_pow;
        let err = change * 2u32 + rounding;
        if err > allowed {
            return Err(Error::Precision(format!(
                "Laurent coefficient c_{} at {c} unstable under radius halving (bound {})",
                k as i64 - 1,
                crate::precision::format_float(&err, 4)
            )));
        }
        coefficients.push(PrecReal::new(fine.coeffs[k].clone(), precision));
        errors.push(err);
    }
    Ok(LaurentExpansion {
        center: PrecReal::from_int(c, precision),
        pole_order: 1,
        coefficients,
        errors,
    })
}

trait PowI {
    fn pow_ref_i(&self, k: i32) -> Float;
}

impl PowI for Float {
    fn pow_ref_i(&self, k: i32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(k))
    }
}

struct Fit {
    /// Monomial coefficients of `r(t)` in `t`.
    coeffs: Vec<Float>,
    /// Largest sampled `|r|`, at least 1.
    scale: Float,
}

fn fit_coefficients(center: i64, delta: &Float, work: u32, bits: u32) -> Result<Fit> {
    let pi = pi_float(bits);
    let nodes: Vec<Float> = (0..LAURENT_NODES)
        .map(|j| {
            let angle = Float::with_val(bits, &pi * (2 * j + 1) as u32) / (2 * LAURENT_NODES) as u32;
            angle.cos()
        })
        .collect();
    let samples: Vec<Result<Float>> = nodes
        .par_iter()
        .map(|u| {
            let t = Float::with_val(bits, u * delta);
            let s = Float::with_val(bits, &t + center);
            let h = h_continued(&PrecReal::new(s, work), work)?;
            Ok(t * h.into_inner())
        })
        .collect();
    let values = samples.into_iter().collect::<Result<Vec<_>>>()?;
    let mut scale = Float::with_val(64, 1);
    for v in &values {
        scale = scale.max(&Float::with_val(64, v.abs_ref()));
    }

    // Vandermonde system in u = t/delta, well conditioned on Chebyshev points
    let n = LAURENT_NODES;
    let mut rows: Vec<Vec<Float>> = nodes
        .iter()
        .zip(&values)
        .map(|(u, v)| {
            let mut row = Vec::with_capacity(n + 1);
            let mut p = Float::with_val(bits, 1);
            for _ in 0..n {
                row.push(p.clone());
                p *= u;
            }
            row.push(v.clone());
            row
        })
        .collect();
    let scaled = solve_augmented(&mut rows, bits)?;
    let mut coeffs = Vec::with_capacity(n);
    let mut dpow = Float::with_val(bits, 1);
    for a in scaled {
        coeffs.push(a / &dpow);
        dpow *= delta;
    }
    Ok(Fit { coeffs, scale })
}

/// Gaussian elimination with partial pivoting on `[A | b]`.
fn solve_augmented(rows: &mut [Vec<Float>], bits: u32) -> Result<Vec<Float>> {
    let n = rows.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| {
                rows[a][col]
                    .clone()
                    .abs()
                    .partial_cmp(&rows[b][col].clone().abs())
                    .unwrap()
            })
            .unwrap();
        if rows[pivot][col].is_zero() {
            return Err(Error::Precision("singular interpolation system".into()));
        }
        rows.swap(col, pivot);
        for r in col + 1..n {
            let factor = Float::with_val(bits, &rows[r][col] / &rows[col][col]);
            for k in col..=n {
                let sub = Float::with_val(bits, &factor * &rows[col][k]);
                rows[r][k] -= sub;
            }
        }
    }
    let mut x = vec![Float::new(bits); n];
    for i in (0..n).rev() {
        let mut acc = rows[i][n].clone();
        for k in i + 1..n {
            acc -= Float::with_val(bits, &rows[i][k] * &x[k]);
        }
        x[i] = acc / &rows[i][i];
    }
    Ok(x)
}

/// Residue of `h` at a pole: `c_{-1}` of [`laurent_at`].
pub fn residue_at(center: &BigRat, precision: u32) -> Result<PrecReal> {
    let lx = laurent_at(center, 1, precision)?;
    Ok(lx.coefficients[0].clone())
}
