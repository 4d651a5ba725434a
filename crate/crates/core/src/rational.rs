//! Exact rational values: Bernoulli numbers, the convolution numbers `A_n`
//! and the closed forms they satisfy at negative integers.
//!
//! All arithmetic is on GMP rationals, which are always kept in lowest terms
//! with a positive denominator. Their `Display` impl already prints `p/q`
//! (or `p` when `q = 1`) with the sign on the numerator, which is the wire
//! format used by the report emitters.

use std::sync::{OnceLock, RwLock};

use rug::{Integer, Rational};

pub type BigRat = Rational;

/// Append-only table of Bernoulli numbers `B_0, B_1, ...` with `B_1 = -1/2`.
///
/// Filled with the recurrence `sum_{k=0}^{n} C(n+1, k) B_k = 0`. Readers take
/// a shared lock; extending the table takes the write lock once per fill.
#[derive(Debug)]
pub struct BernoulliCache {
    values: RwLock<Vec<BigRat>>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache {
            values: RwLock::new(vec![Rational::from(1)]),
        }
    }

    /// Process-wide cache shared by every function in the crate.
    pub fn global() -> &'static BernoulliCache {
        static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
        CACHE.get_or_init(BernoulliCache::new)
    }

    /// Highest index currently stored.
    pub fn high_water(&self) -> usize {
        self.values.read().expect("bernoulli cache poisoned").len() - 1
    }

    /// Make sure `B_0..=B_n` are present.
    pub fn fill_to(&self, n: usize) {
        if self.high_water() >= n {
            return;
        }
        let mut values = self.values.write().expect("bernoulli cache poisoned");
        while values.len() <= n {
            let m = values.len();
            // B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k
            let mut binom = Integer::from(1);
            let mut acc = Rational::new();
            for (k, b) in values.iter().enumerate() {
                if *b.numer() != 0 {
                    acc += Rational::from(&binom * b.numer()) / b.denom();
                }
                binom *= (m + 1 - k) as u64;
                binom /= (k + 1) as u64;
            }
            acc /= (m + 1) as u64;
            values.push(-acc);
        }
    }

    pub fn get(&self, n: usize) -> BigRat {
        self.fill_to(n);
        self.values.read().expect("bernoulli cache poisoned")[n].clone()
    }

    /// Copy of `B_0..=B_n`.
    pub fn prefix(&self, n: usize) -> Vec<BigRat> {
        self.fill_to(n);
        self.values.read().expect("bernoulli cache poisoned")[..=n].to_vec()
    }
}

/// Bernoulli number `B_n` (classical convention, `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> BigRat {
    BernoulliCache::global().get(n)
}

/// `B(n)`: the Taylor coefficients `n! [z^n]` of `z e^z / (e^z - 1)`.
/// Same as `B_n` except `B(1) = +1/2`.
pub fn b_modified(n: usize) -> BigRat {
    if n == 1 {
        Rational::from((1, 2))
    } else {
        bernoulli(n)
    }
}

/// `0!, 1!, ..., n!`
pub fn factorials(n: usize) -> Vec<Integer> {
    let mut out = Vec::with_capacity(n + 1);
    let mut f = Integer::from(1);
    out.push(f.clone());
    for k in 1..=n {
        f *= k as u64;
        out.push(f.clone());
    }
    out
}

pub fn factorial(n: usize) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

/// `A_n = sum_{k=1}^{n} [B(k) / (k! k)] [B(n-k) / (n-k)!]` by direct convolution.
///
/// # Panics
/// If `n == 0`; the sequence starts at `A_1`.
pub fn a_number(n: usize) -> BigRat {
    assert!(n >= 1, "A_n is defined for n >= 1");
    let bern = BernoulliCache::global().prefix(n);
    let modified = |k: usize| -> &BigRat {
        static HALF: OnceLock<Rational> = OnceLock::new();
        if k == 1 {
            HALF.get_or_init(|| Rational::from((1, 2)))
        } else {
            &bern[k]
        }
    };

    let mut sum = Rational::new();
    // k! grows upward while (n-k)! is peeled off from n! downward.
    let mut k_fact = Integer::from(1);
    let mut rest_fact = factorial(n - 1);
    for k in 1..=n {
        k_fact *= k as u64;
        let (bk, bj) = (modified(k), modified(n - k));
        if *bk.numer() != 0 && *bj.numer() != 0 {
            let denom = Integer::from(&k_fact * k as u64) * &rest_fact;
            sum += Rational::from(bk * bj) / denom;
        }
        if k < n {
            rest_fact /= (n - k) as u64;
        }
    }
    sum
}

/// `A_1..=A_n` by direct convolution.
pub fn a_numbers(n: usize) -> Vec<BigRat> {
    (1..=n).map(a_number).collect()
}

/// `A_{2m+1} = [B_{2m} (1 + 1/(2m)) / 2] / (2m)!`
pub fn a_odd_closed_form(m: usize) -> BigRat {
    assert!(m >= 1, "closed form holds for m >= 1");
    let two_m = 2 * m;
    let b = bernoulli(two_m);
    let bracket = Rational::from(1) + Rational::from((1, two_m as u64));
    let numer = b * bracket / 2u32;
    numer / factorial(two_m)
}

/// `zeta(1 - 2m) = -B_{2m} / (2m)`
pub fn zeta_neg_odd_exact(m: usize) -> BigRat {
    assert!(m >= 1);
    -bernoulli(2 * m) / (2 * m) as u64
}

/// `h(-2m) = -B_{2m}/(4m) + B_{2m}/2`
pub fn h_neg_even_exact(m: usize) -> BigRat {
    assert!(m >= 1);
    let b = bernoulli(2 * m);
    let first = -Rational::from(&b / (4 * m) as u64);
    first + b / 2u32
}

/// Parse the `p/q` (or `p`) wire format back into a rational.
pub fn parse_rational(text: &str) -> Option<BigRat> {
    let text = text.trim();
    let r = Rational::from_str_radix(text, 10).ok()?;
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: u64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn small_bernoulli_values() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(3), q(0, 1));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn modified_sequence_flips_b1_only() {
        assert_eq!(b_modified(0), q(1, 1));
        assert_eq!(b_modified(1), q(1, 2));
        assert_eq!(b_modified(2), q(1, 6));
        assert_eq!(b_modified(7), q(0, 1));
    }

    #[test]
    fn odd_bernoulli_vanish_and_even_signs_alternate() {
        let cache = BernoulliCache::new();
        let values = cache.prefix(120);
        for (n, b) in values.iter().enumerate().skip(3).step_by(2) {
            assert_eq!(*b.numer(), 0, "B_{n} should vanish");
        }
        for m in 1..=60 {
            let b = &values[2 * m];
            let expected = if m % 2 == 1 { 1 } else { -1 };
            assert_eq!(b.numer().cmp0() as i32, expected, "sign of B_{}", 2 * m);
        }
        assert!(cache.high_water() >= 120);
    }

    #[test]
    fn convolution_spot_values() {
        assert_eq!(a_number(1), q(1, 2));
        assert_eq!(a_number(2), q(7, 24));
        assert_eq!(a_number(3), q(1, 16));
        assert_eq!(a_number(5), q(-1, 1152));
    }

    #[test]
    fn closed_forms_small_m() {
        assert_eq!(a_odd_closed_form(1), q(1, 16));
        assert_eq!(a_odd_closed_form(2), q(-1, 1152));
        assert_eq!(zeta_neg_odd_exact(1), q(-1, 12));
        assert_eq!(zeta_neg_odd_exact(2), q(1, 120));
        assert_eq!(zeta_neg_odd_exact(3), q(-1, 252));
        assert_eq!(h_neg_even_exact(1), q(1, 24));
        assert_eq!(h_neg_even_exact(2), q(-1, 80));
    }

    #[test]
    fn odd_convolution_matches_closed_form() {
        for m in 1..=40 {
            assert_eq!(a_number(2 * m + 1), a_odd_closed_form(m), "m = {m}");
        }
    }

    #[test]
    fn h_minus_zeta_equals_scaled_a() {
        for m in 1..=40 {
            let lhs = h_neg_even_exact(m) - zeta_neg_odd_exact(m);
            let rhs = a_number(2 * m + 1) * factorial(2 * m);
            assert_eq!(lhs, rhs, "m = {m}");
        }
    }

    #[test]
    fn wire_format() {
        assert_eq!(q(-1, 80).to_string(), "-1/80");
        assert_eq!(q(3, 1).to_string(), "3");
        assert_eq!(parse_rational("-691/2730"), Some(q(-691, 2730)));
        assert_eq!(parse_rational("nope"), None);
    }

    #[test]
    fn factorial_table() {
        let f = factorials(6);
        assert_eq!(f[0], 1);
        assert_eq!(f[6], 720);
        assert_eq!(factorial(10), 3_628_800);
    }
}
