//! Truncated power series over exact rationals.
//!
//! Used to build the generating functions of `A_n` a second way, without
//! going through the Bernoulli recurrence at all: `z e^z/(e^z - 1)` is the
//! reciprocal of `(1 - e^{-z})/z`, and `log((e^z - 1)/z)` is a formal
//! logarithm of a series with constant term 1.

use std::ops::{Add, Mul, Sub};

use rug::{Integer, Rational};

use crate::rational::{b_modified, factorials, BigRat};

/// `sum_{k=0}^{order} c_k z^k`; nothing beyond `z^order` is ever stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatSeries {
    coeffs: Vec<BigRat>,
}

impl RatSeries {
    pub fn zero(order: usize) -> Self {
        RatSeries {
            coeffs: vec![Rational::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::from(1);
        s
    }

    /// Takes the first `order + 1` coefficients, padding with zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigRat>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::new());
        RatSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRat {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    /// `e^z`
    pub fn exp_z(order: usize) -> Self {
        let fact = factorials(order);
        let coeffs = fact.into_iter().map(|f| Rational::from((1, f))).collect();
        RatSeries { coeffs }
    }

    /// `(e^z - 1)/z = sum z^k / (k+1)!`
    pub fn expm1_over_z(order: usize) -> Self {
        let fact = factorials(order + 1);
        let coeffs = fact[1..]
            .iter()
            .map(|f| Rational::from((Integer::from(1), f.clone())))
            .collect();
        RatSeries { coeffs }
    }

    /// `(1 - e^{-z})/z = sum (-1)^k z^k / (k+1)!`
    pub fn one_minus_exp_neg_over_z(order: usize) -> Self {
        let fact = factorials(order + 1);
        let coeffs = fact[1..]
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                Rational::from((Integer::from(sign), f.clone()))
            })
            .collect();
        RatSeries { coeffs }
    }

    /// `z e^z/(e^z - 1)` built from the modified Bernoulli numbers `B(n)/n!`.
    pub fn z_exp_over_expm1_from_bernoulli(order: usize) -> Self {
        let fact = factorials(order);
        let coeffs = (0..=order).map(|n| b_modified(n) / &fact[n]).collect();
        RatSeries { coeffs }
    }

    /// `log((e^z - 1)/z)` built from the coefficients `B(n)/(n! n)`.
    pub fn log_expm1_over_z_from_bernoulli(order: usize) -> Self {
        let fact = factorials(order);
        let mut coeffs = vec![Rational::new()];
        for n in 1..=order {
            coeffs.push(b_modified(n) / Integer::from(&fact[n] * n as u64));
        }
        RatSeries { coeffs }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Option<Self> {
        if *self.coeffs[0].numer() == 0 {
            return None;
        }
        let n = self.order();
        let inv0 = Rational::from(self.coeffs[0].recip_ref());
        let mut out: Vec<BigRat> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Rational::new();
            for j in 1..=k {
                if *self.coeffs[j].numer() != 0 {
                    acc += Rational::from(&self.coeffs[j] * &out[k - j]);
                }
            }
            out.push(-(acc * &inv0));
        }
        Some(RatSeries { coeffs: out })
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut coeffs: Vec<BigRat> = (1..=n)
            .map(|k| Rational::from(&self.coeffs[k] * k as u64))
            .collect();
        coeffs.push(Rational::new());
        RatSeries { coeffs }
    }

    /// Antiderivative with zero constant term; the top coefficient drops out.
    pub fn integral(&self) -> Self {
        let n = self.order();
        let mut coeffs = vec![Rational::new()];
        for k in 0..n {
            coeffs.push(Rational::from(&self.coeffs[k] / (k + 1) as u64));
        }
        RatSeries { coeffs }
    }

    /// Formal logarithm `log f = integral(f'/f)`; requires `f(0) = 1`.
    pub fn ln(&self) -> Option<Self> {
        if self.coeffs[0] != 1 {
            return None;
        }
        let quotient = &self.derivative() * &self.recip()?;
        Some(quotient.integral())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }
}

impl Mul for &RatSeries {
    type Output = RatSeries;

    fn mul(self, rhs: &RatSeries) -> RatSeries {
        let n = self.order().min(rhs.order());
        let mut out = vec![Rational::new(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if *a.numer() == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if *b.numer() != 0 {
                    out[i + j] += Rational::from(a * b);
                }
            }
        }
        RatSeries { coeffs: out }
    }
}

impl Add for &RatSeries {
    type Output = RatSeries;

    fn add(self, rhs: &RatSeries) -> RatSeries {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| Rational::from(&self.coeffs[k] + &rhs.coeffs[k]))
            .collect();
        RatSeries { coeffs }
    }
}

impl Sub for &RatSeries {
    type Output = RatSeries;

    fn sub(self, rhs: &RatSeries) -> RatSeries {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| Rational::from(&self.coeffs[k] - &rhs.coeffs[k]))
            .collect();
        RatSeries { coeffs }
    }
}

/// `A_1..=A_n` as the coefficients of `[z e^z/(e^z-1)] * log((e^z-1)/z)`,
/// with both factors built without Bernoulli numbers.
pub fn a_numbers_via_series(n: usize) -> Vec<BigRat> {
    assert!(n >= 1);
    let product = &z_exp_over_expm1(n) * &log_expm1_over_z(n);
    product.coeffs[1..].to_vec()
}

/// `z e^z/(e^z - 1)` as `1 / [(1 - e^{-z})/z]`.
pub fn z_exp_over_expm1(order: usize) -> RatSeries {
    RatSeries::one_minus_exp_neg_over_z(order)
        .recip()
        .expect("constant term is 1")
}

/// `log((e^z - 1)/z)` as a formal logarithm.
pub fn log_expm1_over_z(order: usize) -> RatSeries {
    RatSeries::expm1_over_z(order)
        .ln()
        .expect("constant term is 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::a_number;
    use proptest::prelude::*;

    fn q(n: i64, d: u64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn series_oracle_small() {
        assert_eq!(a_numbers_via_series(1), vec![q(1, 2)]);
        assert_eq!(a_numbers_via_series(2), vec![q(1, 2), q(7, 24)]);
        assert_eq!(a_numbers_via_series(3), vec![q(1, 2), q(7, 24), q(1, 16)]);
    }

    #[test]
    fn both_constructions_of_each_factor_agree() {
        let order = 60;
        assert_eq!(
            z_exp_over_expm1(order),
            RatSeries::z_exp_over_expm1_from_bernoulli(order)
        );
        assert_eq!(
            log_expm1_over_z(order),
            RatSeries::log_expm1_over_z_from_bernoulli(order)
        );
    }

    #[test]
    fn series_matches_convolution() {
        let via_series = a_numbers_via_series(50);
        for (i, a) in via_series.iter().enumerate() {
            assert_eq!(*a, a_number(i + 1), "n = {}", i + 1);
        }
    }

    #[test]
    fn exp_times_exp_neg_is_one() {
        let order = 25;
        let e = RatSeries::exp_z(order);
        let recip = e.recip().unwrap();
        assert_eq!(&e * &recip, RatSeries::one(order));
        assert!(RatSeries::zero(order).recip().is_none());
        assert!(RatSeries::zero(order).ln().is_none());
    }

    #[test]
    fn ln_of_exp_is_z() {
        let order = 20;
        let log = RatSeries::exp_z(order).ln().unwrap();
        let mut z = RatSeries::zero(order);
        z.coeffs[1] = Rational::from(1);
        assert_eq!(log, z);
    }

    #[test]
    fn product_is_truncated_to_order() {
        let a = RatSeries::from_coeffs(vec![q(1, 1), q(1, 1)], 3);
        let b = RatSeries::from_coeffs(vec![q(0, 1), q(0, 1), q(1, 1), q(5, 1)], 3);
        let p = &a * &b;
        assert_eq!(p.order(), 3);
        assert_eq!(p.coeffs(), &[q(0, 1), q(0, 1), q(1, 1), q(6, 1)]);
    }

    fn small_series(order: usize) -> impl Strategy<Value = RatSeries> {
        prop::collection::vec((-20i64..20, 1u64..9), order + 1).prop_map(move |v| {
            let coeffs = v.into_iter().map(|(n, d)| q(n, d)).collect();
            RatSeries::from_coeffs(coeffs, order)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn multiplication_commutes(a in small_series(6), b in small_series(6)) {
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn multiplication_associates(
            a in small_series(5), b in small_series(5), c in small_series(5)
        ) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn multiplication_distributes(
            a in small_series(5), b in small_series(5), c in small_series(5)
        ) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a);
        }
    }
}
