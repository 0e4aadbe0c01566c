//! Exact integer and rational arithmetic plus the combinatorial primitives
//! the sums are built from.
//!
//! Integers are `num_bigint::BigInt`; rationals are `num_rational::BigRational`,
//! which reduces to lowest terms with a positive denominator on every
//! construction and arithmetic operation, so `==` is value equality.
//!
//! Counts and indices are unsigned; negative arguments are unrepresentable
//! here and are rejected at the FFI and CLI boundaries.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type ExactInt = BigInt;
pub type ExactRational = BigRational;

/// `n!`.
pub fn factorial(n: u64) -> ExactInt {
    falling_factorial(n, n)
}

/// `n (n-1) ... (n-len+1)`, i.e. `n! / (n-len)!`. Empty product is 1.
///
/// Panics if `len > n`.
pub fn falling_factorial(n: u64, len: u64) -> ExactInt {
    assert!(len <= n, "falling factorial of length {len} from {n}");
    let mut acc = ExactInt::one();
    for j in (n - len + 1)..=n {
        acc *= j;
    }
    acc
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> ExactInt {
    if k < 0 || k as u64 > n {
        return ExactInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = ExactInt::one();
    for i in 0..k {
        // acc = C(n, i) here, and C(n, i) * (n - i) is divisible by i + 1
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `(sum parts)! / prod(parts_i!)`.
pub fn multinomial(parts: &[u64]) -> ExactInt {
    // Product of binomials C(k_1 + ... + k_i, k_i) keeps intermediates small.
    let mut total = 0u64;
    let mut acc = ExactInt::one();
    for &k in parts {
        total += k;
        acc *= binomial(total, k as i64);
    }
    acc
}

/// `base^exp` with the convention `0^0 = 1`.
pub fn ipow00(base: &ExactInt, exp: u64) -> ExactInt {
    if exp == 0 {
        return ExactInt::one();
    }
    num_traits::pow::pow(base.clone(), exp as usize)
}

/// `k^k` for small machine integers, `0^0 = 1`.
pub fn self_power(k: u64) -> ExactInt {
    ipow00(&ExactInt::from(k), k)
}

/// Build a rational from integer parts. Panics on a zero denominator.
pub fn ratio(numer: impl Into<ExactInt>, denom: impl Into<ExactInt>) -> ExactRational {
    ExactRational::new(numer.into(), denom.into())
}

pub fn int_to_rational(value: ExactInt) -> ExactRational {
    ExactRational::from_integer(value)
}

/// Lookup tables of `k!` and `k^k` for `0 <= k <= max`, shared by the
/// enumeration oracles so that no term recomputes them.
#[derive(Debug, Clone)]
pub struct CombinatorialTables {
    factorials: Vec<ExactInt>,
    self_powers: Vec<ExactInt>,
}

impl CombinatorialTables {
    pub fn new(max: u64) -> Self {
        let mut factorials = Vec::with_capacity(max as usize + 1);
        factorials.push(ExactInt::one());
        for k in 1..=max {
            let next = factorials.last().unwrap() * k;
            factorials.push(next);
        }
        let self_powers = (0..=max).map(self_power).collect();
        Self {
            factorials,
            self_powers,
        }
    }

    pub fn max(&self) -> u64 {
        self.factorials.len() as u64 - 1
    }

    pub fn factorial(&self, k: u64) -> &ExactInt {
        &self.factorials[k as usize]
    }

    pub fn self_power(&self, k: u64) -> &ExactInt {
        &self.self_powers[k as usize]
    }
}
