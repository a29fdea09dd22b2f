//! Denominator certificates: an index n with 0 < u_n < 1/q_max,
//! plus the decay table for 𝔍_n.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::exactnum::{rat_int, to_f64, zeta3_series_enclosure, Rational, RationalInterval};
use crate::linearforms::{jj_form, lcm_range, zeta3_at, LinearFormZ3, SequenceRecord};

/// Largest index the search visits.
pub const MAX_SEARCH_N: u64 = 200;
/// Precision escalation stops here.
pub const MAX_ZETA_TERMS: u64 = 1 << 16;

/// Evidence that 0 < u_n < 1/q_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub q_max: BigInt,
    pub n: u64,
    pub a: BigInt,
    pub b: BigInt,
    pub d: BigInt,
    /// Series terms used for the ζ(3) enclosure.
    pub zeta_terms: u64,
    pub u_lo: Rational,
    pub u_hi: Rational,
}

impl Certificate {
    pub fn record(&self) -> Result<SequenceRecord> {
        Ok(SequenceRecord {
            n: self.n,
            a: self.a.clone(),
            b: self.b.clone(),
            d: self.d.clone(),
            u_enclosure: RationalInterval::new(self.u_lo.clone(), self.u_hi.clone())?,
        })
    }
}

/// One index visited by the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchStep {
    pub n: u64,
    pub zeta_terms: u64,
    pub u: RationalInterval,
}

/// Smallest n ≤ [`MAX_SEARCH_N`] whose enclosure of u_n lies in (0, 1/q_max).
pub fn denominator_certificate(q_max: &BigInt, precision: u64) -> Result<Certificate> {
    Ok(search_certificate(q_max, precision, jj_form)?.0)
}

/// As [`denominator_certificate`], drawing linear forms from `forms` and
/// returning every visited index.
///
/// The ζ(3) enclosure starts at `precision` terms and doubles while the
/// enclosure of u_n is wider than 1/(2·q_max) or fails to exclude zero.
pub fn search_certificate(
    q_max: &BigInt,
    precision: u64,
    mut forms: impl FnMut(u64) -> Result<LinearFormZ3>,
) -> Result<(Certificate, Vec<SearchStep>)> {
    if q_max < &BigInt::one() {
        return domain("q_max must be at least 1");
    }
    if precision == 0 {
        return domain("precision must be at least 1");
    }
    let target = Rational::new(BigInt::one(), q_max.clone());
    let half = &target / rat_int(2);
    let mut steps = Vec::new();
    for n in 0..=MAX_SEARCH_N {
        let form = forms(n)?;
        let mut terms = precision;
        let u = loop {
            let u = scaled_enclosure(&form, &zeta3_at(terms)?);
            if u.width() <= half && u.lo().is_positive() {
                break u;
            }
            if terms >= MAX_ZETA_TERMS {
                return Err(Error::SearchExhausted(format!(
                    "u_{n} not resolved with {terms} series terms"
                )));
            }
            terms = (terms * 2).min(MAX_ZETA_TERMS);
        };
        let done = u.hi() < &target;
        steps.push(SearchStep {
            n,
            zeta_terms: terms,
            u: u.clone(),
        });
        if done {
            let cert = Certificate {
                q_max: q_max.clone(),
                n,
                a: form.scaled_alpha(),
                b: form.beta().clone(),
                d: lcm_range(n),
                zeta_terms: terms,
                u_lo: u.lo().clone(),
                u_hi: u.hi().clone(),
            };
            return Ok((cert, steps));
        }
    }
    Err(Error::SearchExhausted(format!(
        "no n <= {MAX_SEARCH_N} gives u_n < 1/{q_max}"
    )))
}

/// d³·(β·ζ + α) = A + B·d³·ζ.
fn scaled_enclosure(form: &LinearFormZ3, zeta: &RationalInterval) -> RationalInterval {
    zeta.scale(&rat_int(form.beta() * form.dcube()))
        .shift(&rat_int(form.scaled_alpha()))
}

/// Recomputes the certificate from scratch and checks every field.
pub fn verify_certificate(c: &Certificate) -> bool {
    if c.q_max < BigInt::one() || c.zeta_terms == 0 || c.n > MAX_SEARCH_N {
        return false;
    }
    let Ok(form) = jj_form(c.n) else {
        return false;
    };
    if form.scaled_alpha() != c.a || form.beta() != &c.b || lcm_range(c.n) != c.d {
        return false;
    }
    // bypass the memoized enclosure
    let Ok(zeta) = zeta3_series_enclosure(c.zeta_terms) else {
        return false;
    };
    let u = scaled_enclosure(&form, &zeta);
    u.lo() == &c.u_lo
        && u.hi() == &c.u_hi
        && c.u_lo.is_positive()
        && (&c.u_hi * rat_int(c.q_max.clone())) < Rational::one()
}

/// One row of the decay table.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayRow {
    pub n: u64,
    pub u_mid: Rational,
    pub jj_mid: Rational,
    /// 𝔍_n/𝔍_{n−1} from midpoints; `None` at n = 0.
    pub ratio: Option<f64>,
}

/// u_n and 𝔍_n midpoints for 0 ≤ n ≤ n_max.
pub fn decay_table(n_max: u64, precision: u64) -> Result<Vec<DecayRow>> {
    decay_table_with(n_max, precision, jj_form)
}

pub fn decay_table_with(
    n_max: u64,
    precision: u64,
    mut forms: impl FnMut(u64) -> Result<LinearFormZ3>,
) -> Result<Vec<DecayRow>> {
    if n_max < 2 {
        return domain("n_max must be at least 2");
    }
    let zeta = zeta3_at(precision)?;
    let mut rows: Vec<DecayRow> = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let form = forms(n)?;
        let u = scaled_enclosure(&form, &zeta);
        let jj = form.enclose(&zeta);
        let jj_mid = jj.midpoint();
        let ratio = rows.last().and_then(|prev| {
            if prev.jj_mid.is_zero() {
                None
            } else {
                Some(to_f64(&(&jj_mid / &prev.jj_mid)))
            }
        });
        rows.push(DecayRow {
            n,
            u_mid: u.midpoint(),
            jj_mid,
            ratio,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, DEFAULT_SERIES_TERMS};

    #[test]
    fn small_q_examples() {
        for (q, n) in [(1, 1), (10, 1), (100, 2)] {
            let c = denominator_certificate(&int(q), DEFAULT_SERIES_TERMS).unwrap();
            assert_eq!(c.n, n, "q={q}");
            assert!(verify_certificate(&c));
        }
    }

    #[test]
    fn index_grows_with_q() {
        let mut last = 0;
        for q in [1i64, 10, 100, 1_000, 10_000, 1_000_000] {
            let c = denominator_certificate(&int(q), DEFAULT_SERIES_TERMS).unwrap();
            assert!(verify_certificate(&c), "q={q}");
            assert!(c.n >= last, "q={q}");
            assert!(&c.u_hi * rat_int(int(q)) < Rational::one());
            last = c.n;
        }
    }

    #[test]
    fn search_visits_positive_enclosures() {
        let q: BigInt = "1000000000000000000000000000000".parse().unwrap();
        let (c, steps) = search_certificate(&q, 16, jj_form).unwrap();
        assert_eq!(steps.len() as u64, c.n + 1);
        assert!(steps.iter().all(|s| s.u.lo().is_positive()));
        assert!(steps[..steps.len() - 1]
            .iter()
            .all(|s| s.u.hi() >= &Rational::new(BigInt::one(), q.clone())));
        assert!(verify_certificate(&c));
    }

    #[test]
    fn tampering_is_detected() {
        let c = denominator_certificate(&int(1000), DEFAULT_SERIES_TERMS).unwrap();
        let mut t = c.clone();
        t.u_hi = rat(1, 1);
        assert!(!verify_certificate(&t));
        let mut t = c.clone();
        t.a += 1;
        assert!(!verify_certificate(&t));
        let mut t = c.clone();
        t.q_max = int(1_000_000_000);
        assert!(!verify_certificate(&t));
        let mut t = c;
        t.zeta_terms += 1;
        assert!(!verify_certificate(&t));
    }

    #[test]
    fn bad_inputs() {
        assert!(denominator_certificate(&int(0), 10).is_err());
        assert!(denominator_certificate(&int(5), 0).is_err());
        assert!(decay_table(1, 10).is_err());
    }

    #[test]
    fn decay_rows_shrink() {
        let rows = decay_table(12, DEFAULT_SERIES_TERMS).unwrap();
        assert_eq!(rows.len(), 13);
        assert!(rows[0].ratio.is_none());
        for w in rows.windows(2) {
            assert!(w[1].jj_mid < w[0].jj_mid);
            let r = w[1].ratio.unwrap();
            assert!(r > 0.0 && r < 1.0 / 24.0, "n={} ratio={r}", w[1].n);
        }
    }
}
