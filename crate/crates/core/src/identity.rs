//! The scaled sums `alpha(n) = n^n xi(n)` and `beta(n) = n^n xi_2(n)`,
//! their general `d`-part analogue `s_d(n) = n! [z^n] (1/(1-y))^d`, and the
//! identity `beta(n) - alpha(n) = n^(n+1)`.
//!
//! Every quantity is available through at least two independent routes:
//!
//! * closed form: `s_d(n) = sum_{j=0}^{n} (n!/j!) C(n-j+d-2, d-2) n^j`,
//!   evaluated by Horner's rule in `n` with falling factorials, no division;
//! * brute force: the multinomial sum over weak compositions of `n` into
//!   `d` parts, `sum n!/(k_1!...k_d!) k_1^k_1 ... k_d^k_d`;
//! * series: `n!` times the `z^n` coefficient of `(1/(1-y))^d`, where `y`
//!   is the tree function built in [`crate::series`].
//!
//! The binomial in the closed form is `C(k+d-2, d-2)`, the coefficient of
//! `y^k` in `(1-y)^{-(d-1)}`; for `d = 1` the factor is `[k = 0]` and
//! `s_1(n) = n^n`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    binomial, int_to_rational, ipow00, CombinatorialTables, ExactInt, ExactRational,
};
use crate::series::{geom_power, tree_series, TruncatedSeries};

/// Largest number of composition terms the brute-force route will sum.
pub const DEFAULT_BRUTE_CUTOFF: u64 = 2_000_000;

/// An independent way of computing `alpha`, `beta` or `s_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Route {
    Closed,
    Brute,
    Series,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::Closed, Route::Brute, Route::Series];

    pub fn label(self) -> &'static str {
        match self {
            Route::Closed => "closed",
            Route::Brute => "brute",
            Route::Series => "series",
        }
    }

    fn bit(self) -> u8 {
        match self {
            Route::Closed => 1,
            Route::Brute => 2,
            Route::Series => 4,
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "closed" => Ok(Route::Closed),
            "brute" => Ok(Route::Brute),
            "series" => Ok(Route::Series),
            other => Err(Error::Domain(format!("unknown route '{other}'"))),
        }
    }
}

/// A set of [`Route`]s, iterated in the fixed order closed, brute, series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RouteSet(u8);

impl RouteSet {
    pub const fn empty() -> Self {
        RouteSet(0)
    }

    pub fn all() -> Self {
        Route::ALL.into_iter().collect()
    }

    /// Closed form plus brute force; the brute force is still subject to
    /// the admission cutoff.
    pub fn default_oracles() -> Self {
        [Route::Closed, Route::Brute].into_iter().collect()
    }

    /// Bit 0 closed, bit 1 brute, bit 2 series; higher bits are ignored.
    pub fn from_bits(bits: u8) -> Self {
        RouteSet(bits & 0b111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, route: Route) -> bool {
        self.0 & route.bit() != 0
    }

    pub fn insert(&mut self, route: Route) {
        self.0 |= route.bit();
    }

    pub fn remove(&mut self, route: Route) {
        self.0 &= !route.bit();
    }

    pub fn iter(self) -> impl Iterator<Item = Route> {
        Route::ALL.into_iter().filter(move |r| self.contains(*r))
    }
}

impl FromIterator<Route> for RouteSet {
    fn from_iter<I: IntoIterator<Item = Route>>(iter: I) -> Self {
        let mut set = RouteSet::empty();
        for r in iter {
            set.insert(r);
        }
        set
    }
}

impl FromStr for RouteSet {
    type Err = Error;

    /// Comma-separated labels, e.g. `closed,brute`.
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .filter(|part| !part.trim().is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for RouteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<_> = self.iter().map(Route::label).collect();
        f.write_str(&labels.join(","))
    }
}

/// Odometer over the weak compositions of `n` into `d` parts, in
/// colexicographic order starting from `(n, 0, ..., 0)` and ending at
/// `(0, ..., 0, n)`.
#[derive(Debug, Clone)]
pub struct CompositionCursor {
    n: u64,
    current: Vec<u64>,
    started: bool,
    exhausted: bool,
}

impl CompositionCursor {
    /// Panics if `d == 0`.
    pub fn new(n: u64, d: usize) -> Self {
        assert!(d >= 1, "compositions need at least one part");
        let mut current = vec![0; d];
        current[0] = n;
        Self {
            n,
            current,
            started: false,
            exhausted: false,
        }
    }

    pub fn total(&self) -> u64 {
        self.n
    }

    pub fn parts(&self) -> usize {
        self.current.len()
    }

    /// Step to the next composition and return it, or `None` once every
    /// composition has been visited.
    pub fn advance(&mut self) -> Option<&[u64]> {
        if self.exhausted {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let last = self.current.len() - 1;
        match self.current[..last].iter().position(|&k| k > 0) {
            Some(i) => {
                let v = self.current[i];
                self.current[i] = 0;
                self.current[0] = v - 1;
                self.current[i + 1] += 1;
                Some(&self.current)
            }
            None => {
                self.exhausted = true;
                None
            }
        }
    }
}

impl Iterator for CompositionCursor {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        self.advance().map(<[u64]>::to_vec)
    }
}

/// Number of weak compositions of `n` into `d` parts, `C(n+d-1, d-1)`,
/// saturating at `u64::MAX`.
pub fn composition_count(n: u64, d: u64) -> u64 {
    if d == 0 {
        return u64::from(n == 0);
    }
    u64::try_from(binomial(n + d - 1, (d - 1) as i64)).unwrap_or(u64::MAX)
}

/// `alpha(n) = sum_{k=0}^{n} C(n,k) k^k (n-k)^(n-k)`.
pub fn alpha_direct(n: u64) -> ExactInt {
    (0..=n)
        .map(|k| {
            binomial(n, k as i64)
                * ipow00(&ExactInt::from(k), k)
                * ipow00(&ExactInt::from(n - k), n - k)
        })
        .sum()
}

/// `sum_{i=0}^{n} (n!/(n-i)!) coef(i) n^(n-i)` by Horner's rule in `n`.
fn horner_falling(n: u64, coef: impl Fn(u64) -> ExactInt) -> ExactInt {
    let base = ExactInt::from(n);
    let mut falling = ExactInt::one();
    let mut acc = ExactInt::zero();
    for i in 0..=n {
        if i > 0 {
            falling *= n - i + 1;
        }
        acc = acc * &base + &falling * coef(i);
    }
    acc
}

/// `alpha(n) = sum_{k=0}^{n} (n!/k!) n^k`.
pub fn alpha_closed(n: u64) -> ExactInt {
    horner_falling(n, |_| ExactInt::one())
}

/// `beta(n)` by enumerating all weak compositions of `n` into three parts.
pub fn beta_direct(n: u64) -> ExactInt {
    xi_scaled_brute_with(&CombinatorialTables::new(n), n, 3)
}

/// `beta(n) = sum_{k=0}^{n} (n!/k!) (n+1-k) n^k`.
pub fn beta_closed(n: u64) -> ExactInt {
    // With i = n - k the factor n + 1 - k is i + 1.
    horner_falling(n, |i| ExactInt::from(i + 1))
}

/// `s_d(n) = n! [z^n] (1/(1-y))^d` from the finite binomial sum.
pub fn s_d_closed(n: u64, d: u32) -> Result<ExactInt> {
    match d {
        0 => Err(Error::Domain("s_d needs d >= 1".into())),
        // (1-y)^0 = 1 leaves only the k = 0 term.
        1 => Ok(ipow00(&ExactInt::from(n), n)),
        _ => {
            let m = u64::from(d) - 2;
            Ok(horner_falling(n, |i| binomial(i + m, m as i64)))
        }
    }
}

/// `sum over weak compositions (k_1..k_d) of n` of
/// `n!/(k_1!...k_d!) k_1^k_1 ... k_d^k_d`.
pub fn xi_scaled_brute(n: u64, d: u32) -> Result<ExactInt> {
    if d == 0 {
        return Err(Error::Domain("compositions need d >= 1".into()));
    }
    let tables = CombinatorialTables::new(n);
    Ok(xi_scaled_brute_with(&tables, n, d as usize))
}

fn xi_scaled_brute_with(tables: &CombinatorialTables, n: u64, d: usize) -> ExactInt {
    let mut cursor = CompositionCursor::new(n, d);
    let mut acc = ExactInt::zero();
    while let Some(parts) = cursor.advance() {
        // multinomial(parts) * prod k_i^k_i; parts of 0 or 1 contribute 1
        let mut weight = ExactInt::one();
        let mut denom = ExactInt::one();
        for &k in parts.iter().filter(|&&k| k > 1) {
            weight *= tables.self_power(k);
            denom *= tables.factorial(k);
        }
        acc += tables.factorial(n) / denom * weight;
    }
    acc
}

/// `s_d(n)` through the series route, building the tree function to order `n`.
pub fn s_d_series(n: u64, d: u32) -> Result<ExactInt> {
    let order = n as usize;
    let y = tree_series(order)?;
    let g = geom_power(&y, d, order)?;
    integral_egf_coeff(&g, order)
}

fn integral_egf_coeff(series: &TruncatedSeries, n: usize) -> Result<ExactInt> {
    let c = series.egf_coeff(n)?;
    if !c.is_integer() {
        return Err(Error::Inconsistency(format!("n! [z^{n}] is not an integer: {c}")));
    }
    Ok(c.to_integer())
}

fn require_positive(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain(format!("{what}(0) is undefined; n must be >= 1")));
    }
    Ok(())
}

/// `xi(n) = alpha(n) / n^n`.
pub fn xi(n: u64) -> Result<ExactRational> {
    require_positive(n, "xi")?;
    Ok(ExactRational::new(alpha_closed(n), ipow00(&ExactInt::from(n), n)))
}

/// `xi_2(n) = beta(n) / n^n`.
pub fn xi2(n: u64) -> Result<ExactRational> {
    require_positive(n, "xi2")?;
    Ok(ExactRational::new(beta_closed(n), ipow00(&ExactInt::from(n), n)))
}

/// `beta(n) - alpha(n) = sum_{k=0}^{n} (n!/k!) (n-k) n^k`, evaluated term by
/// term and checked against its telescoped form
/// `sum_{k=0}^{n} (n!/k!) n^(k+1) - sum_{k=1}^{n} (n!/(k-1)!) n^k = n^(n+1)`.
pub fn telescoping_difference(n: u64) -> Result<ExactInt> {
    let base = ExactInt::from(n);
    // falling[k] = n!/k!, powers[k] = n^k
    let mut falling = vec![ExactInt::one(); n as usize + 1];
    for k in (0..n as usize).rev() {
        falling[k] = &falling[k + 1] * (k as u64 + 1);
    }
    let mut powers = Vec::with_capacity(n as usize + 2);
    powers.push(ExactInt::one());
    for k in 1..=n as usize + 1 {
        let next = &powers[k - 1] * &base;
        powers.push(next);
    }

    let term_sum: ExactInt = (0..=n as usize)
        .map(|k| &falling[k] * (n - k as u64) * &powers[k])
        .sum();
    let upper: ExactInt = (0..=n as usize).map(|k| &falling[k] * &powers[k + 1]).sum();
    // n!/(k-1)! = k * n!/k!
    let lower: ExactInt = (1..=n as usize)
        .map(|k| &falling[k] * k as u64 * &powers[k])
        .sum();
    // The lower sum reindexed by j = k - 1 is the upper sum without its
    // j = n term.
    let lower_reindexed: ExactInt = (0..n as usize)
        .map(|j| &falling[j] * &powers[j + 1])
        .sum();

    let expected = &powers[n as usize + 1];
    if lower != lower_reindexed {
        return Err(Error::Inconsistency(format!("telescoping reindex at n = {n}")));
    }
    if &(upper - lower) != expected || &term_sum != expected {
        return Err(Error::Inconsistency(format!("telescoping sum at n = {n}")));
    }
    Ok(term_sum)
}

/// Ramanujan's `Q(n) = sum_{k=1}^{n} n!/((n-k)! n^k)`, accumulated as the
/// running product `1 * (n-1)/n * (n-2)/n * ...`.
pub fn ramanujan_q(n: u64) -> Result<ExactRational> {
    require_positive(n, "Q")?;
    let mut term = ExactRational::one();
    let mut sum = ExactRational::one();
    for k in 2..=n {
        term *= ExactRational::new(ExactInt::from(n - k + 1), ExactInt::from(n));
        sum += &term;
    }
    Ok(sum)
}

/// Outcome of checking `beta(n) - alpha(n) = n^(n+1)` at one `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub n: u64,
    pub alpha: ExactInt,
    pub beta: ExactInt,
    pub difference: ExactInt,
    pub expected: ExactInt,
    pub routes_compared: Vec<Route>,
    pub passed: bool,
}

/// Range verifier. Holds the series for the series route once, at the
/// largest order it will be asked for.
#[derive(Debug, Clone)]
pub struct Verifier {
    routes: RouteSet,
    brute_cutoff: u64,
    // (1/(1-y))^2 and (1/(1-y))^3
    series: Option<(TruncatedSeries, TruncatedSeries)>,
}

impl Verifier {
    /// `max_n` bounds the `n` passed to [`Verifier::verify`] when the series
    /// route is requested.
    pub fn new(routes: RouteSet, max_n: u64) -> Result<Self> {
        Self::with_cutoff(routes, max_n, DEFAULT_BRUTE_CUTOFF)
    }

    pub fn with_cutoff(routes: RouteSet, max_n: u64, brute_cutoff: u64) -> Result<Self> {
        let series = if routes.contains(Route::Series) {
            let order = max_n as usize;
            let y = tree_series(order)?;
            Some((geom_power(&y, 2, order)?, geom_power(&y, 3, order)?))
        } else {
            None
        };
        Ok(Self {
            routes,
            brute_cutoff,
            series,
        })
    }

    pub fn brute_cutoff(&self) -> u64 {
        self.brute_cutoff
    }

    /// Whether the brute-force route is admitted at `n` (beta's three-part
    /// enumeration is the larger of the two).
    pub fn admits_brute(&self, n: u64) -> bool {
        composition_count(n, 3) <= self.brute_cutoff
    }

    pub fn verify(&self, n: u64) -> Result<VerificationReport> {
        require_positive(n, "verification at n")?;

        let mut routes = vec![Route::Closed];
        let alpha = alpha_closed(n);
        let beta = beta_closed(n);

        if self.routes.contains(Route::Brute) && self.admits_brute(n) {
            routes.push(Route::Brute);
            check_agree("alpha", n, &alpha, &alpha_direct(n), Route::Brute)?;
            check_agree("beta", n, &beta, &beta_direct(n), Route::Brute)?;
        }

        if self.routes.contains(Route::Series) {
            let (g2, g3) = self
                .series
                .as_ref()
                .expect("series route requested without precomputed series");
            let order = n as usize;
            if order > g2.order() {
                return Err(Error::Domain(format!(
                    "n = {n} exceeds the verifier's series order {}",
                    g2.order()
                )));
            }
            routes.push(Route::Series);
            check_agree("alpha", n, &alpha, &integral_egf_coeff(g2, order)?, Route::Series)?;
            check_agree("beta", n, &beta, &integral_egf_coeff(g3, order)?, Route::Series)?;
        }

        let difference = &beta - &alpha;
        let expected = ipow00(&ExactInt::from(n), n + 1);
        if difference != expected {
            return Err(Error::IdentityFailure { n });
        }
        Ok(VerificationReport {
            n,
            alpha,
            beta,
            difference,
            expected,
            routes_compared: routes,
            passed: true,
        })
    }
}

fn check_agree(
    quantity: &'static str,
    n: u64,
    closed: &ExactInt,
    other: &ExactInt,
    route: Route,
) -> Result<()> {
    if closed == other {
        Ok(())
    } else {
        Err(Error::RouteDisagreement {
            quantity,
            n,
            first: Route::Closed,
            second: route,
        })
    }
}

/// Verify the identity at a single `n` with the default brute-force cutoff.
pub fn verify_lacasse(n: u64, routes: RouteSet) -> Result<VerificationReport> {
    Verifier::new(routes, n)?.verify(n)
}

/// `xi_2(n) - xi(n)` as an exact rational; equals `n`.
pub fn xi_gap(n: u64) -> Result<ExactRational> {
    Ok(xi2(n)? - xi(n)?)
}

/// Convenience: `n^n (1 + Q(n))`, which equals `alpha(n)`.
pub fn alpha_from_q(n: u64) -> Result<ExactRational> {
    let q = ramanujan_q(n)?;
    Ok(int_to_rational(ipow00(&ExactInt::from(n), n)) * (ExactRational::one() + q))
}
