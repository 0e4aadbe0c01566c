//! Truncated formal power series over the rationals.
//!
//! A [`TruncatedSeries`] of order `N` holds the coefficients of
//! `z^0 .. z^N` exactly; everything above `z^N` is unknown. Binary
//! operations between series of different orders produce a result of the
//! smaller order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, int_to_rational, self_power, ExactInt, ExactRational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    // Always non-empty; `coeffs.len() == order + 1`.
    coeffs: Vec<ExactRational>,
}

impl TruncatedSeries {
    /// Panics if `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<ExactRational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        Self { coeffs }
    }

    /// Series from integer coefficients.
    pub fn from_ints<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<ExactInt>,
    {
        Self::from_coeffs(coeffs.into_iter().map(|c| int_to_rational(c.into())).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::from_coeffs(vec![ExactRational::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ExactRational::one(), order)
    }

    pub fn constant(value: ExactRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    /// The monomial `z^power`, which is the zero series when `power > order`.
    pub fn monomial(power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = ExactRational::one();
        }
        s
    }

    /// The series `z`.
    pub fn z(order: usize) -> Self {
        Self::monomial(1, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Coefficient of `z^index`.
    pub fn coeff(&self, index: usize) -> Result<&ExactRational> {
        self.coeffs.get(index).ok_or(Error::IndexBeyondOrder {
            index,
            order: self.order(),
        })
    }

    pub fn constant_term(&self) -> &ExactRational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Drop coefficients above `order`. Panics when asked to extend.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a series of order {} to {order}", self.order());
        Self::from_coeffs(self.coeffs[..=order].to_vec())
    }

    /// `n! [z^n] self`. The result is a rational; callers that expect an
    /// integer must check the denominator.
    pub fn egf_coeff(&self, n: usize) -> Result<ExactRational> {
        let c = self.coeff(n)?;
        Ok(c * int_to_rational(factorial(n as u64)))
    }

    /// `exp(self)` truncated at `self.order()`, i.e. `sum_{j=0}^{N} a^j / j!`.
    ///
    /// Evaluated with the recurrence `n e_n = sum_{k=1}^{n} k a_k e_{n-k}`
    /// from `E' = a' E`, which gives the same truncation in O(N^2).
    pub fn exp_trunc(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm("exp"));
        }
        let weights: Vec<ExactRational> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a * ExactInt::from(k))
            .collect();
        Ok(Self::from_coeffs(convolution_recurrence(&weights, |n, sum| {
            sum / ExactInt::from(n)
        })))
    }

    /// `1 / (1 - self)` truncated at `self.order()`.
    pub fn one_minus_inverse(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm("1/(1 - y)"));
        }
        // b = 1 + y b
        Ok(Self::from_coeffs(convolution_recurrence(&self.coeffs, |_, sum| sum)))
    }

    /// `z * self`, one order higher than `self`: the product is known
    /// exactly through `z^(order+1)`.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ExactRational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(coeffs)
    }

    /// `self^exp` by binary powering; `self^0` is `1`.
    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&ExactRational, &ExactRational) -> ExactRational) -> Self {
        let order = self.order().min(other.order());
        Self::from_coeffs(
            self.coeffs[..=order]
                .iter()
                .zip(&other.coeffs[..=order])
                .map(|(a, b)| f(a, b))
                .collect(),
        )
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Cauchy product truncated at the smaller order.
impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: Self) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let lhs = ScaledCoeffs::new(&self.coeffs[..=order]);
        let rhs = ScaledCoeffs::new(&rhs.coeffs[..=order]);
        let denom = &lhs.denom * &rhs.denom;
        let coeffs = (0..=order)
            .map(|n| ExactRational::new(lhs.dot_reversed(&rhs.numers, n, 0), denom.clone()))
            .collect();
        TruncatedSeries::from_coeffs(coeffs)
    }
}

/// Rationals written over one common denominator. Sums of products then
/// run on integers and are reduced once at the end instead of per term.
struct ScaledCoeffs {
    denom: ExactInt,
    numers: Vec<ExactInt>,
}

impl ScaledCoeffs {
    fn new(values: &[ExactRational]) -> Self {
        let denom = values
            .iter()
            .filter(|v| !v.is_zero())
            .fold(ExactInt::one(), |l, v| l.lcm(v.denom()));
        let numers = values
            .iter()
            .map(|v| v.numer() * (&denom / v.denom()))
            .collect();
        Self { denom, numers }
    }

    /// `sum_{k=start}^{n} self[k] * other[n - k]` on the numerators.
    fn dot_reversed(&self, other: &[ExactInt], n: usize, start: usize) -> ExactInt {
        let mut acc = ExactInt::zero();
        for k in start..=n {
            let a = &self.numers[k];
            let b = &other[n - k];
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }
}

/// `out_0 = 1`, `out_n = finish(n, sum_{k=1}^{n} weights_k out_{n-k})` for
/// `n` up to `weights.len() - 1`.
///
/// The outputs seen so far are kept over a running common denominator so
/// each step is an integer dot product.
fn convolution_recurrence(
    weights: &[ExactRational],
    finish: impl Fn(usize, ExactRational) -> ExactRational,
) -> Vec<ExactRational> {
    let weights = ScaledCoeffs::new(weights);
    let mut out = vec![ExactRational::one()];
    let mut out_denom = ExactInt::one();
    let mut out_numers = vec![ExactInt::one()];
    for n in 1..weights.numers.len() {
        let sum = weights.dot_reversed(&out_numers, n, 1);
        let value = finish(n, ExactRational::new(sum, &weights.denom * &out_denom));
        let grow = value.denom() / value.denom().gcd(&out_denom);
        if !grow.is_one() {
            for v in &mut out_numers {
                *v *= &grow;
            }
            out_denom *= &grow;
        }
        out_numers.push(value.numer() * (&out_denom / value.denom()));
        out.push(value);
    }
    out
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                f.write_str(" + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

/// `y(z) = sum_{n>=1} n^{n-1} z^n / n!` from the coefficient formula alone.
pub fn tree_series_by_formula(order: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(ExactRational::zero());
    let mut fact = ExactInt::one();
    for n in 1..=order as u64 {
        fact *= n;
        // n^{n-1} = n^n / n
        coeffs.push(ExactRational::new(self_power(n) / n, fact.clone()));
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// `y(z)` as the fixed point of `y <- z exp(y)` started from `0`.
///
/// If `y` is known through `z^k` then `z exp(y)` is known through
/// `z^(k+1)`, so each pass raises the order by one until it reaches
/// `order`; pass `order + 1` must then return its input unchanged.
pub fn tree_series_by_fixed_point(order: usize) -> Result<TruncatedSeries> {
    let mut y = TruncatedSeries::zero(0);
    if order == 0 {
        // z exp(y) has no constant term
        return Ok(y);
    }
    for _ in 0..order {
        y = y.exp_trunc()?.shift_up();
    }
    let again = y.truncate(order - 1).exp_trunc()?.shift_up();
    if again != y {
        return Err(Error::Inconsistency(format!(
            "tree series of order {order} is not a fixed point of y = z exp(y)"
        )));
    }
    Ok(y)
}

/// The tree function to the given order, built twice (coefficient formula
/// and fixed-point iteration); the two must agree exactly.
pub fn tree_series(order: usize) -> Result<TruncatedSeries> {
    let by_formula = tree_series_by_formula(order);
    let by_fixed_point = tree_series_by_fixed_point(order)?;
    if by_formula != by_fixed_point {
        return Err(Error::Inconsistency(format!(
            "tree series of order {order}: coefficient formula and fixed point differ"
        )));
    }
    Ok(by_formula)
}

/// `(1 / (1 - y))^d` truncated at `min(order, y.order())`.
pub fn geom_power(y: &TruncatedSeries, d: u32, order: usize) -> Result<TruncatedSeries> {
    if d == 0 {
        return Err(Error::Domain("geom_power needs d >= 1".into()));
    }
    if !y.constant_term().is_zero() {
        return Err(Error::NonzeroConstantTerm("1/(1 - y)"));
    }
    let y = y.truncate(order.min(y.order()));
    Ok(y.one_minus_inverse()?.pow(d))
}
