//! Closed forms for J_rs, the lcm d_n, and the integer linear forms
//! u_n = d_n³·𝔍_n = A_n + B_n·d_n³·ζ(3).
//!
//! Everything here is exact. The series for J_rs is only used as a check of
//! the closed forms; 𝔍_n itself is assembled from the closed forms.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::exactnum::{
    format_rational, rat_int, sum_inverse_powers, zeta3_series_enclosure, Rational,
    RationalInterval,
};
use crate::legendre::shifted_legendre;

/// lcm{1, …, n}; the empty lcm d_0 is 1.
pub fn lcm_range(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, m| acc.lcm(&BigInt::from(m)))
}

/// Exact value `beta·ζ(3) + alpha` whose rational part has denominator dividing `dcube`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFormZ3 {
    beta: BigInt,
    alpha: Rational,
    dcube: BigInt,
}

impl LinearFormZ3 {
    pub fn new(beta: BigInt, alpha: Rational, dcube: BigInt) -> Result<Self> {
        if !dcube.is_positive() {
            return domain("denominator bound must be positive");
        }
        if !(&dcube % alpha.denom()).is_zero() {
            return Err(Error::Invariant(format!(
                "denominator of {} does not divide {}",
                format_rational(&alpha),
                dcube
            )));
        }
        Ok(Self { beta, alpha, dcube })
    }

    pub fn beta(&self) -> &BigInt {
        &self.beta
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn dcube(&self) -> &BigInt {
        &self.dcube
    }

    /// `alpha · dcube`, an integer by construction.
    pub fn scaled_alpha(&self) -> BigInt {
        (&self.alpha * rat_int(self.dcube.clone())).to_integer()
    }

    /// Encloses the value given an enclosure of ζ(3).
    pub fn enclose(&self, zeta: &RationalInterval) -> RationalInterval {
        zeta.scale(&rat_int(self.beta.clone())).shift(&self.alpha)
    }
}

/// Σ_{m≤k} 1/m^power for k = 0..=n, exact.
fn partial_sums(n: u64, power: u32) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = Rational::zero();
    out.push(acc.clone());
    for m in 1..=n {
        let m = BigInt::from(m);
        acc += Rational::new(BigInt::one(), num_traits::pow(m, power as usize));
        out.push(acc.clone());
    }
    out
}

/// J_rr = 2ζ(3) − 2·Σ_{m≤r} 1/m³.
pub fn j_diag(r: u64) -> LinearFormZ3 {
    let h3 = sum_inverse_powers(r, 3);
    let dcube = num_traits::pow(lcm_range(r), 3);
    LinearFormZ3::new(BigInt::from(2), -h3 * rat_int(2), dcube)
        .expect("d_r³ clears Σ 1/m³ for m ≤ r")
}

/// J_rs for r ≠ s: (Σ_{m≤r} 1/m² − Σ_{m≤s} 1/m²)/(r − s), a rational.
pub fn j_offdiag(r: u64, s: u64) -> Result<Rational> {
    if r == s {
        return domain(format!("j_offdiag needs r != s (got r = s = {r}); use j_diag"));
    }
    let hr = sum_inverse_powers(r, 2);
    let hs = sum_inverse_powers(s, 2);
    Ok((hr - hs) / rat_int(r as i64 - s as i64))
}

/// Fractional bits kept by the outward-rounded series summation.
const SERIES_FRACTION_BITS: u64 = 192;

/// Encloses J_rs through its series
///
/// Σ_{k≥0} 1/((k+r+1)²(k+s+1)) + 1/((k+r+1)(k+s+1)²).
///
/// The first `terms` summands are accumulated on a dyadic grid with floor for
/// the lower and ceiling for the upper endpoint, so the result still contains
/// the exact partial sum; the tail is bounded by [0, 1/terms²] since every
/// summand is at most 2/(k+1)³.
pub fn j_series(r: u64, s: u64, terms: u64) -> Result<RationalInterval> {
    if terms == 0 {
        return domain("j_series needs at least one term");
    }
    let scale = BigInt::one() << SERIES_FRACTION_BITS;
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for k in 0..terms {
        let a = (k + r + 1) as u128;
        let b = (k + s + 1) as u128;
        // 1/(a²b) + 1/(ab²) = (a + b)/(a²b²)
        let num = BigInt::from(a + b) * &scale;
        let den = BigInt::from(a * a) * BigInt::from(b * b);
        let (q, rem) = num.div_rem(&den);
        if !rem.is_zero() {
            hi += 1;
        }
        lo += &q;
        hi += q;
    }
    let t = BigInt::from(terms);
    let tail = Rational::new(BigInt::one(), &t * &t);
    let lo = Rational::new(lo, scale.clone());
    let hi = Rational::new(hi, scale) + tail;
    RationalInterval::new(lo, hi)
}

/// Exact record of the n-th linear form and its enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceRecord {
    pub n: u64,
    /// Integer part A_n of u_n = A_n + B_n·d_n³·ζ(3).
    pub a: BigInt,
    /// Coefficient B_n of ζ(3) in 𝔍_n.
    pub b: BigInt,
    /// d_n = lcm{1, …, n}.
    pub d: BigInt,
    /// Enclosure of u_n.
    pub u_enclosure: RationalInterval,
}

impl SequenceRecord {
    /// Builds the record from its integers and a ζ(3) enclosure.
    pub fn from_parts(n: u64, a: BigInt, b: BigInt, d: BigInt, zeta: &RationalInterval) -> Self {
        let u_enclosure = u_from_parts(&a, &b, &d, zeta);
        Self {
            n,
            a,
            b,
            d,
            u_enclosure,
        }
    }

    pub fn dcube(&self) -> BigInt {
        num_traits::pow(self.d.clone(), 3)
    }

    /// 𝔍_n as a linear form in ζ(3).
    pub fn form(&self) -> LinearFormZ3 {
        let dcube = self.dcube();
        LinearFormZ3::new(
            self.b.clone(),
            Rational::new(self.a.clone(), dcube.clone()),
            dcube,
        )
        .expect("A/d³ has denominator dividing d³")
    }

    /// Enclosure of 𝔍_n = u_n / d_n³.
    pub fn jj_enclosure(&self) -> RationalInterval {
        self.u_enclosure
            .scale(&Rational::new(BigInt::one(), self.dcube()))
    }
}

fn u_from_parts(a: &BigInt, b: &BigInt, d: &BigInt, zeta: &RationalInterval) -> RationalInterval {
    let coeff = b * num_traits::pow(d.clone(), 3);
    zeta.scale(&rat_int(coeff)).shift(&rat_int(a.clone()))
}

/// Exact 𝔍_n = Σ_k Σ_l a_k a_l J_kl as a linear form, with a_k the
/// coefficients of P_n.
///
/// Works with d_n³·J_kl directly: d_n³·Σ_{m≤k} 1/m² and d_n³·Σ_{m≤k} 1/m³ are
/// integers for k ≤ n, and every off-diagonal difference quotient must divide
/// exactly. A remainder anywhere is reported as [`Error::Invariant`].
pub fn jj_form(n: u64) -> Result<LinearFormZ3> {
    let coeffs = shifted_legendre(n).coeffs().to_vec();
    let d = lcm_range(n);
    let dcube = num_traits::pow(d, 3);
    let dc = rat_int(dcube.clone());
    let scaled = |sums: Vec<Rational>| -> Result<Vec<BigInt>> {
        sums.into_iter()
            .map(|h| {
                let v = h * &dc;
                if v.is_integer() {
                    Ok(v.to_integer())
                } else {
                    Err(Error::Invariant(format!("d_{n}^3 does not clear a harmonic sum")))
                }
            })
            .collect()
    };
    let h2 = scaled(partial_sums(n, 2))?;
    let h3 = scaled(partial_sums(n, 3))?;

    let mut beta = BigInt::zero();
    let mut a_total = BigInt::zero();
    for (k, ak) in coeffs.iter().enumerate() {
        let sq = ak * ak;
        beta += &sq * 2;
        a_total -= &sq * &h3[k] * 2;
        for (l, al) in coeffs.iter().enumerate().skip(k + 1) {
            // J_kl = J_lk, so each unordered pair counts twice
            let (j_kl, rem) = (&h2[l] - &h2[k]).div_rem(&BigInt::from(l - k));
            if !rem.is_zero() {
                return Err(Error::Invariant(format!(
                    "d_{n}^3 * J_({k},{l}) is not an integer"
                )));
            }
            a_total += ak * al * j_kl * 2;
        }
    }
    LinearFormZ3::new(beta, Rational::new(a_total, dcube.clone()), dcube)
}

/// The record (A_n, B_n, d_n) with u_n enclosed at the default precision.
pub fn jj_linear_form(n: u64) -> Result<SequenceRecord> {
    jj_linear_form_with(n, crate::exactnum::DEFAULT_SERIES_TERMS)
}

/// As [`jj_linear_form`], enclosing ζ(3) with `precision` series terms.
pub fn jj_linear_form_with(n: u64, precision: u64) -> Result<SequenceRecord> {
    let form = jj_form(n)?;
    let zeta = zeta3_at(precision)?;
    Ok(SequenceRecord::from_parts(
        n,
        form.scaled_alpha(),
        form.beta().clone(),
        lcm_range(n),
        &zeta,
    ))
}

/// Enclosure of u_n = A_n + B_n·d_n³·ζ(3) with ζ(3) enclosed by
/// `precision` terms of the central-binomial series.
pub fn sequence_u(n: u64, precision: u64) -> Result<RationalInterval> {
    Ok(jj_linear_form_with(n, precision)?.u_enclosure)
}

/// Encloses u_n for a known record under a caller-supplied ζ(3) enclosure.
pub fn sequence_u_in(record: &SequenceRecord, zeta: &RationalInterval) -> RationalInterval {
    u_from_parts(&record.a, &record.b, &record.d, zeta)
}

/// Memoized [`zeta3_series_enclosure`]; safe to call from several threads.
pub fn zeta3_at(precision: u64) -> Result<RationalInterval> {
    static CACHE: OnceLock<Mutex<HashMap<u64, RationalInterval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("zeta cache poisoned").get(&precision) {
        return Ok(hit.clone());
    }
    let fresh = zeta3_series_enclosure(precision)?;
    cache
        .lock()
        .expect("zeta cache poisoned")
        .insert(precision, fresh.clone());
    Ok(fresh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{binomial, int, rat, to_f64, zeta3_enclosure};

    fn lcm_by_folding(n: u64) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        (1..=n).fold(1, |acc, m| acc / gcd(acc, m) * m)
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_range(0), int(1));
        assert_eq!(lcm_range(1), int(1));
        assert_eq!(lcm_range(5), int(60));
        assert_eq!(lcm_range(10), int(2520));
        for n in 0..=40 {
            assert_eq!(lcm_range(n), BigInt::from(lcm_by_folding(n)));
        }
    }

    #[test]
    fn diagonal_examples() {
        let j0 = j_diag(0);
        assert_eq!((j0.beta(), j0.alpha()), (&int(2), &rat(0, 1)));
        let j1 = j_diag(1);
        assert_eq!((j1.beta(), j1.alpha()), (&int(2), &rat(-2, 1)));
        let j2 = j_diag(2);
        assert_eq!((j2.beta(), j2.alpha()), (&int(2), &rat(-9, 4)));
        assert_eq!(j2.dcube(), &int(8));
    }

    #[test]
    fn offdiagonal_examples() {
        assert_eq!(j_offdiag(1, 0).unwrap(), rat(1, 1));
        assert_eq!(j_offdiag(0, 1).unwrap(), rat(1, 1));
        assert_eq!(j_offdiag(2, 0).unwrap(), rat(5, 8));
        assert!(matches!(j_offdiag(3, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn offdiagonal_is_symmetric() {
        for r in 0..=10 {
            for s in 0..=10 {
                if r != s {
                    assert_eq!(j_offdiag(r, s).unwrap(), j_offdiag(s, r).unwrap());
                }
            }
        }
    }

    #[test]
    fn denominators_divide_lcm_cubes() {
        for r in 0..=12u64 {
            let j = j_diag(r);
            let dc = rat_int(num_traits::pow(lcm_range(r), 3));
            assert!((j.alpha() * &dc).is_integer());
            for s in 0..=12u64 {
                if r != s {
                    let dc = rat_int(num_traits::pow(lcm_range(r.max(s)), 3));
                    assert!((j_offdiag(r, s).unwrap() * dc).is_integer(), "({r},{s})");
                }
            }
        }
    }

    #[test]
    fn linear_form_rejects_bad_denominator() {
        assert!(matches!(
            LinearFormZ3::new(int(1), rat(1, 3), int(8)),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn series_contains_closed_forms() {
        let zeta = zeta3_enclosure(10_000).unwrap();
        let k = 20_000;
        let s00 = j_series(0, 0, k).unwrap();
        assert!(j_diag(0).enclose(&zeta).intersect(&s00).is_some());
        assert!(j_series(1, 0, k).unwrap().contains(&rat(1, 1)));
        for r in 0..=3 {
            let s = j_series(r, r, k).unwrap();
            assert!(j_diag(r).enclose(&zeta).intersect(&s).is_some());
        }
        assert!(j_series(2, 2, 0).is_err());
    }

    #[test]
    fn small_records() {
        let r0 = jj_linear_form(0).unwrap();
        assert_eq!((r0.b.clone(), r0.a.clone(), r0.d.clone()), (int(2), int(0), int(1)));
        let r1 = jj_linear_form(1).unwrap();
        assert_eq!((r1.b.clone(), r1.a.clone(), r1.d.clone()), (int(10), int(-12), int(1)));
        let r2 = jj_linear_form(2).unwrap();
        assert_eq!((r2.b.clone(), r2.a.clone(), r2.d.clone()), (int(146), int(-1404), int(2)));
        assert_eq!(r2.form().alpha(), &rat(-351, 2));
    }

    #[test]
    fn apery_numbers_cross_check() {
        for n in 0..=50u64 {
            let oracle: BigInt = (0..=n)
                .map(|k| {
                    let t = binomial(n, k) * binomial(n + k, k);
                    &t * &t
                })
                .sum::<BigInt>()
                * 2;
            assert_eq!(jj_form(n).unwrap().beta(), &oracle, "n={n}");
        }
    }

    #[test]
    fn sequence_examples() {
        let u0 = sequence_u(0, 40).unwrap();
        assert!((to_f64(&u0.midpoint()) - 2.4041138063).abs() < 1e-9);
        let u1 = sequence_u(1, 2_000).unwrap();
        assert!(rat(2, 100) < *u1.lo() && *u1.hi() < rat(21, 1000));
        // 8·(146ζ(3) − 351/2) = 0.00246289...
        let u2 = sequence_u(2, 60).unwrap();
        assert!((to_f64(&u2.midpoint()) - 0.002462890).abs() < 1e-8);
    }

    #[test]
    fn width_scales_with_coefficient() {
        for n in [1, 5, 9] {
            let p = 80;
            let rec = jj_linear_form_with(n, p).unwrap();
            let zeta = zeta3_at(p).unwrap();
            let bound = zeta.width() * rat_int(&rec.b * rec.dcube());
            assert!(rec.u_enclosure.width() <= bound);
        }
    }

    #[test]
    fn positive_and_below_envelope() {
        let zeta = zeta3_at(crate::exactnum::DEFAULT_SERIES_TERMS).unwrap();
        for n in 0..=30u64 {
            let rec = jj_linear_form(n).unwrap();
            assert!(rec.u_enclosure.lo().is_positive(), "n={n}");
            let envelope = zeta
                .scale(&(rat_int(2) * num_traits::pow(rat(1, 24), n as usize)))
                .scale(&rat_int(rec.dcube()));
            assert!(rec.u_enclosure.hi() <= envelope.hi(), "n={n}");
        }
    }
}
