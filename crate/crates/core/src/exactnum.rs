//! Exact integer/rational arithmetic and rational-endpoint interval arithmetic.
//!
//! Intervals never round: every endpoint is an exact [`Rational`], so an
//! enclosure produced here is valid as long as the inputs were.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Number of partial-sum terms used by [`zeta3_enclosure`] when callers pass no precision.
pub const DEFAULT_PARTIAL_SUM_TERMS: u64 = 10_000;

/// Number of central-binomial series terms used for the linear-form enclosures
/// when callers pass no precision. Width is below 1e-160.
pub const DEFAULT_SERIES_TERMS: u64 = 256;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// Binomial coefficient C(n, k) by the multiplicative formula; zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc = C(n, i) here, and C(n, i+1) = C(n, i) * (n - i) / (i + 1) exactly
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Natural logarithm of a positive big integer, accurate to f64 rounding.
pub fn big_ln(v: &BigInt) -> f64 {
    assert!(v.sign() == Sign::Plus, "big_ln of non-positive integer");
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top: BigInt = v >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratio<BigInt>::to_f64 only fails on overflow; fall back to log-space.
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        let ln = big_ln(&r.numer().abs()) - big_ln(r.denom());
        sign * ln.exp()
    })
}

/// Formats a rational as `num/den`, or just `num` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => Ok(rat_int(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

/// Binary interval operations understood by [`interval_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Raise the left operand to a non-negative integer power given by a point interval.
    Pow,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return domain(format!(
                "interval endpoints out of order: [{}, {}]",
                format_rational(&lo),
                format_rational(&hi)
            ));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(v: Rational) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Whether this interval lies inside `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        Self::hull(products)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.contains_zero() {
            return domain("division by an interval containing zero");
        }
        let recip = Self {
            lo: other.hi.recip(),
            hi: other.lo.recip(),
        };
        Ok(self.mul(&recip))
    }

    pub fn powi(&self, exp: u32) -> Self {
        if exp == 0 {
            return Self::point(Rational::one());
        }
        let lo = num_traits::pow(self.lo.clone(), exp as usize);
        let hi = num_traits::pow(self.hi.clone(), exp as usize);
        if exp % 2 == 1 || !self.lo.is_negative() {
            // monotone on the whole interval
            Self::hull([lo, hi])
        } else if !self.hi.is_positive() {
            Self { lo: hi, hi: lo }
        } else {
            Self {
                lo: Rational::zero(),
                hi: lo.max(hi),
            }
        }
    }

    /// Multiplies by an exact scalar.
    pub fn scale(&self, k: &Rational) -> Self {
        Self::hull([&self.lo * k, &self.hi * k])
    }

    /// Translates by an exact scalar.
    pub fn shift(&self, k: &Rational) -> Self {
        Self {
            lo: &self.lo + k,
            hi: &self.hi + k,
        }
    }

    /// Three-way comparison that only answers when the intervals are disjoint.
    pub fn certainly_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    fn hull<const N: usize>(vals: [Rational; N]) -> Self {
        let mut it = vals.into_iter();
        let first = it.next().expect("non-empty");
        let (lo, hi) = it.fold((first.clone(), first), |(lo, hi), v| {
            if v < lo {
                (v, hi)
            } else if v > hi {
                (lo, v)
            } else {
                (lo, hi)
            }
        });
        Self { lo, hi }
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

/// Applies `op` to two intervals. `Pow` requires `b` to be a point interval
/// holding a non-negative integer.
pub fn interval_arith(
    op: IntervalOp,
    a: &RationalInterval,
    b: &RationalInterval,
) -> Result<RationalInterval> {
    match op {
        IntervalOp::Add => Ok(a.add(b)),
        IntervalOp::Sub => Ok(a.sub(b)),
        IntervalOp::Mul => Ok(a.mul(b)),
        IntervalOp::Div => a.div(b),
        IntervalOp::Pow => {
            if b.lo != b.hi || !b.lo.is_integer() || b.lo.is_negative() {
                return domain("exponent must be a non-negative integer point interval");
            }
            let exp = b
                .lo
                .to_integer()
                .to_u32()
                .ok_or_else(|| Error::Domain("exponent too large".into()))?;
            Ok(a.powi(exp))
        }
    }
}

/// Σ_{m=1}^{terms} 1/m³, exactly.
pub fn sum_inverse_cubes(terms: u64) -> Rational {
    sum_inverse_powers(terms, 3)
}

/// Σ_{m=1}^{terms} 1/m^power, exactly. Summed over a common denominator
/// lcm(1..terms)^power and reduced once.
pub fn sum_inverse_powers(terms: u64, power: u32) -> Rational {
    if terms == 0 {
        return Rational::zero();
    }
    let mut lcm = BigInt::one();
    for m in 2..=terms {
        let m = BigInt::from(m);
        if !(&lcm % &m).is_zero() {
            lcm = lcm.lcm(&m);
        }
    }
    let common = num_traits::pow(lcm, power as usize);
    let mut numer = BigInt::zero();
    for m in 1..=terms {
        let mp = num_traits::pow(BigInt::from(m), power as usize);
        numer += &common / mp;
    }
    Rational::new(numer, common)
}

/// Enclosure of ζ(3) from the partial sum S_N = Σ_{m≤N} 1/m³ and the integral
/// comparison ∫_{N+1}^∞ x⁻³ dx ≤ Σ_{m>N} m⁻³ ≤ ∫_N^∞ x⁻³ dx.
pub fn zeta3_enclosure(terms: u64) -> Result<RationalInterval> {
    if terms == 0 {
        return domain("zeta3_enclosure needs at least one term");
    }
    let s = sum_inverse_cubes(terms);
    let n = BigInt::from(terms);
    let np1: BigInt = &n + 1;
    let lo = &s + Rational::new(BigInt::one(), BigInt::from(2) * &np1 * &np1);
    let hi = &s + Rational::new(BigInt::one(), BigInt::from(2) * &n * &n);
    RationalInterval::new(lo, hi)
}

/// Enclosure of ζ(3) from the alternating central-binomial series
///
/// ζ(3) = 5/2 · Σ_{k≥1} (−1)^{k+1} / (k³ C(2k,k)).
///
/// The terms decrease strictly to zero, so ζ(3) lies between 5/2·S_K and
/// 5/2·S_{K+1}. Each term shrinks the width by roughly a factor of four, which
/// is what makes the large-n linear forms checkable with exact intervals.
/// Terms are accumulated on a dyadic grid fine enough to be invisible next to
/// the truncation error, rounding every term outward.
pub fn zeta3_series_enclosure(terms: u64) -> Result<RationalInterval> {
    if terms == 0 {
        return domain("zeta3_series_enclosure needs at least one term");
    }
    let log2_terms = 64 - (terms + 1).leading_zeros() as u64;
    let frac_bits = 2 * terms + 3 * log2_terms + 64;
    let scale = BigInt::one() << frac_bits;

    // running lower/upper bounds on scale·S_k
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    let (mut prev_lo, mut prev_hi) = (BigInt::zero(), BigInt::zero());
    let mut central = BigInt::one(); // C(2k, k), starting at k = 0
    for k in 1..=terms + 1 {
        // C(2k, k) = C(2k-2, k-1) * (2k)(2k-1) / k²
        central = central * (2 * k) * (2 * k - 1) / (k * k);
        let den = &central * (k * k) * k;
        let (floor, rem) = scale.div_rem(&den);
        let ceil = if rem.is_zero() { floor.clone() } else { &floor + 1 };
        prev_lo.clone_from(&lo);
        prev_hi.clone_from(&hi);
        if k % 2 == 1 {
            lo += floor;
            hi += ceil;
        } else {
            lo -= ceil;
            hi -= floor;
        }
    }
    // prev bounds S_K, current bounds S_{K+1}
    let lo = Rational::new(lo.min(prev_lo) * 5, &scale * 2);
    let hi = Rational::new(hi.max(prev_hi) * 5, scale * 2);
    RationalInterval::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(a: (i64, i64), b: (i64, i64)) -> RationalInterval {
        RationalInterval::new(rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    const ZETA3_50: &str = "1.20205690315959428539973816151144999076498629234049";

    fn zeta3_decimal_bracket() -> (Rational, Rational) {
        let digits = ZETA3_50.replace('.', "");
        let den = num_traits::pow(BigInt::from(10), ZETA3_50.len() - 2);
        let num: BigInt = digits.parse().unwrap();
        (
            Rational::new(num.clone(), den.clone()),
            Rational::new(num + 1, den),
        )
    }

    #[test]
    fn interval_examples() {
        assert_eq!(iv((1, 1), (2, 1)).add(&iv((3, 1), (4, 1))), iv((4, 1), (6, 1)));
        assert_eq!(iv((-1, 1), (2, 1)).mul(&iv((3, 1), (4, 1))), iv((-4, 1), (8, 1)));
        assert_eq!(
            iv((1, 1), (1, 1)).div(&iv((2, 1), (4, 1))).unwrap(),
            iv((1, 4), (1, 2))
        );
    }

    #[test]
    fn division_by_zero_interval_is_domain_error() {
        let err = interval_arith(IntervalOp::Div, &iv((1, 1), (2, 1)), &iv((-1, 1), (1, 1)));
        assert!(matches!(err, Err(Error::Domain(_))));
        let err = iv((1, 1), (2, 1)).div(&iv((0, 1), (1, 1)));
        assert!(err.is_err());
    }

    #[test]
    fn pow_cases() {
        let two = RationalInterval::point(rat_int(2));
        assert_eq!(
            interval_arith(IntervalOp::Pow, &iv((-1, 1), (2, 1)), &two).unwrap(),
            iv((0, 1), (4, 1))
        );
        assert_eq!(iv((-3, 1), (-2, 1)).powi(2), iv((4, 1), (9, 1)));
        assert_eq!(iv((-3, 1), (2, 1)).powi(3), iv((-27, 1), (8, 1)));
        assert!(interval_arith(IntervalOp::Pow, &two, &iv((1, 2), (1, 2))).is_err());
    }

    #[test]
    fn reversed_endpoints_rejected() {
        assert!(RationalInterval::new(rat(1, 1), rat(0, 1)).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(10, 0), int(1));
        assert_eq!(binomial(3, 4), int(0));
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }

    #[test]
    fn rational_text_roundtrip() {
        for s in ["-351/2", "0", "17", "1/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn zeta3_enclosure_small_cases() {
        assert_eq!(zeta3_enclosure(1).unwrap(), iv((9, 8), (3, 2)));
        assert_eq!(zeta3_enclosure(2).unwrap(), iv((85, 72), (5, 4)));
        assert!(matches!(zeta3_enclosure(0), Err(Error::Domain(_))));
    }

    #[test]
    fn zeta3_enclosure_contains_reference_value() {
        // Independent oracle: 10^6-term partial sum in f64 plus the midpoint tail.
        let mut s = 0.0f64;
        for m in (1..=1_000_000u64).rev() {
            let m = m as f64;
            s += 1.0 / (m * m * m);
        }
        let oracle = s + 0.5 / 1e12;
        assert!((oracle - 1.2020569031595942).abs() < 1e-14);
        let oracle = Rational::from_float(oracle).unwrap();
        for n in [1, 2, 3, 10, 100, 1000] {
            let e = zeta3_enclosure(n).unwrap();
            assert!(e.contains(&oracle), "N={n}");
            // the 8-digit truncation sits 3e-9 below ζ(3), so it only fits coarse enclosures
            if n <= 100 {
                assert!(e.contains(&rat(12020569, 10_000_000)));
            }
        }
    }

    #[test]
    fn zeta3_enclosures_nest_and_shrink() {
        let mut prev = zeta3_enclosure(1).unwrap();
        for n in 2..60 {
            let cur = zeta3_enclosure(n).unwrap();
            assert!(cur.is_subset_of(&prev), "N={n}");
            assert!(cur.width() < prev.width());
            let bound = rat(1, 2) / rat_int((n * n) as i64) - rat(1, 2) / rat_int(((n + 1) * (n + 1)) as i64);
            assert!(cur.width() <= bound);
            prev = cur;
        }
    }

    #[test]
    fn series_enclosure_brackets_reference_digits() {
        let (lo, hi) = zeta3_decimal_bracket();
        let reference = RationalInterval::new(lo, hi).unwrap();
        for k in [1, 2, 5, 20, 60] {
            let e = zeta3_series_enclosure(k).unwrap();
            assert!(e.intersect(&reference).is_some(), "K={k}");
        }
        // 120 terms is far below 1e-50 width, so the reference bracket must overlap tightly
        let e = zeta3_series_enclosure(120).unwrap();
        assert!(e.width() < rat(1, 1) / rat_int(BigInt::from(10).pow(70)));
        assert!(e.is_subset_of(&reference));
        // agrees with the elementary partial-sum enclosure
        assert!(e.is_subset_of(&zeta3_enclosure(500).unwrap()));
    }

    #[test]
    fn series_enclosures_nest() {
        let mut prev = zeta3_series_enclosure(1).unwrap();
        for k in 2..40 {
            let cur = zeta3_series_enclosure(k).unwrap();
            assert!(cur.is_subset_of(&prev), "K={k}");
            prev = cur;
        }
    }

    #[test]
    fn big_ln_matches_small_ln() {
        assert!((big_ln(&int(2520)) - 2520f64.ln()).abs() < 1e-12);
        let big = BigInt::from(3).pow(2000);
        assert!((big_ln(&big) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| rat(n, d))
    }

    fn small_interval() -> impl Strategy<Value = (RationalInterval, Rational)> {
        (small_rat(), small_rat(), 0u32..=16).prop_map(|(a, b, t)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let x = &lo + (&hi - &lo) * rat(t as i64, 16);
            (RationalInterval::new(lo, hi).unwrap(), x)
        })
    }

    proptest! {
        #[test]
        fn field_laws(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        }

        #[test]
        fn interval_containment((a, x) in small_interval(), (b, y) in small_interval(), e in 0u32..5) {
            prop_assert!(a.add(&b).contains(&(&x + &y)));
            prop_assert!(a.sub(&b).contains(&(&x - &y)));
            prop_assert!(a.mul(&b).contains(&(&x * &y)));
            if !b.contains_zero() {
                prop_assert!(a.div(&b).unwrap().contains(&(&x / &y)));
            }
            prop_assert!(a.powi(e).contains(&num_traits::pow(x.clone(), e as usize)));
        }
    }
}
