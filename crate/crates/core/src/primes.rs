//! Prime sieve, the counting and Chebyshev functions, li(x), and the growth
//! of d_n = lcm{1, …, n}.

use bitvec::prelude::*;
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::exactnum::big_ln;
use crate::quadrature::{tanh_sinh_1d, CompensatedSum};

/// Below this n the report compares d_n with n^π(n) exactly.
pub const EXACT_PI_POWER_LIMIT: u64 = 2000;
/// Below this n the report takes ln d_n from the exact lcm.
pub const EXACT_LCM_LIMIT: u64 = 3000;
/// Slack allowed in 3ψ(n) ≤ n·ln 21.
pub const GROWTH_GUARD: f64 = 1e-9;

/// Primality table for 0..=limit.
#[derive(Clone, Debug)]
pub struct SieveTable {
    limit: u64,
    composite: BitVec,
    primes: Vec<u64>,
}

impl SieveTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && !self.composite[n as usize]
    }

    /// Primes up to the limit, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    fn check(&self, x: u64) -> Result<()> {
        if x > self.limit {
            return domain(format!("{x} exceeds the sieve limit {}", self.limit));
        }
        Ok(())
    }
}

/// Sieve of Eratosthenes up to `limit` (at least 2).
pub fn sieve(limit: u64) -> Result<SieveTable> {
    if limit < 2 {
        return domain("sieve limit must be at least 2");
    }
    let len = usize::try_from(limit).map_err(|_| crate::Error::Domain("sieve limit too large".into()))? + 1;
    let mut composite = bitvec![0; len];
    composite.set(0, true);
    composite.set(1, true);
    let mut p = 2usize;
    while p * p < len {
        if !composite[p] {
            let mut m = p * p;
            while m < len {
                composite.set(m, true);
                m += p;
            }
        }
        p += 1;
    }
    let primes = composite.iter_zeros().map(|i| i as u64).collect();
    Ok(SieveTable {
        limit,
        composite,
        primes,
    })
}

/// π(x), the number of primes ≤ x.
pub fn pi_counting(t: &SieveTable, x: u64) -> Result<u64> {
    t.check(x)?;
    Ok(t.primes.partition_point(|&p| p <= x) as u64)
}

/// Largest e with p^e ≤ n, for p ≥ 2 and n ≥ p.
fn max_exponent(p: u64, n: u64) -> u32 {
    let mut e = 0;
    let mut q = 1u64;
    while let Some(next) = q.checked_mul(p).filter(|&v| v <= n) {
        q = next;
        e += 1;
    }
    e
}

/// ψ(n) = Σ_{p ≤ n} ⌊log_p n⌋·ln p = ln d_n.
pub fn chebyshev_psi(t: &SieveTable, n: u64) -> Result<f64> {
    t.check(n)?;
    let sum: CompensatedSum = t
        .primes
        .iter()
        .take_while(|&&p| p <= n)
        .map(|&p| max_exponent(p, n) as f64 * (p as f64).ln())
        .collect();
    Ok(sum.value())
}

/// li(x) = ∫_2^x dt/ln t by tanh-sinh quadrature; zero at x = 2.
pub fn li(x: f64, tol: f64) -> Result<f64> {
    if x.is_nan() || x < 2.0 || x.is_infinite() {
        return domain(format!("li needs finite x >= 2, got {x}"));
    }
    if x == 2.0 {
        return Ok(0.0);
    }
    Ok(tanh_sinh_1d(|t| 1.0 / t.ln(), 2.0, x, tol)?.value)
}

/// One row of the prime-counting comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct PntReportRow {
    pub x: u64,
    pub pi: u64,
    pub li: f64,
    pub x_over_ln_x: f64,
    /// π(x)/li(x).
    pub ratio_li: f64,
    /// π(x)/(x/ln x).
    pub ratio_x_ln_x: f64,
}

/// Compares π(x) with li(x) and x/ln x at each requested x.
pub fn pnt_report(t: &SieveTable, xs: &[u64], tol: f64) -> Result<Vec<PntReportRow>> {
    xs.par_iter()
        .map(|&x| {
            if x < 2 {
                return domain(format!("x must be at least 2, got {x}"));
            }
            let pi = pi_counting(t, x)?;
            let xf = x as f64;
            let li = li(xf, tol)?;
            let x_over_ln_x = xf / xf.ln();
            Ok(PntReportRow {
                x,
                pi,
                li,
                x_over_ln_x,
                ratio_li: pi as f64 / li,
                ratio_x_ln_x: pi as f64 / x_over_ln_x,
            })
        })
        .collect()
}

/// One row of the d_n growth report.
#[derive(Clone, Debug, PartialEq)]
pub struct DnGrowthRow {
    pub n: u64,
    pub ln_dn: f64,
    /// ln d_n / n.
    pub ratio: f64,
    /// d_n ≤ n^π(n).
    pub dn_le_n_pow_pi: bool,
    /// d_n³ ≤ 21^n, checked as 3ψ(n) ≤ n·ln 21 + [`GROWTH_GUARD`].
    pub cube_le_21_pow_n: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DnGrowthReport {
    pub rows: Vec<DnGrowthRow>,
    /// Smallest n₀ such that d_n³ ≤ 21^n holds for every n₀ ≤ n ≤ n_max,
    /// or `None` if it fails at n_max.
    pub threshold: Option<u64>,
}

impl DnGrowthReport {
    /// The n at which d_n³ ≤ 21^n fails.
    pub fn cube_failures(&self) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| !r.cube_le_21_pow_n)
            .map(|r| r.n)
            .collect()
    }
}

/// Tabulates ln d_n for 1 ≤ n ≤ n_max.
///
/// Up to [`EXACT_LCM_LIMIT`] the logarithm comes from the exact lcm, beyond
/// it from ψ(n) accumulated one prime power at a time.
pub fn dn_growth_report(n_max: u64) -> Result<DnGrowthReport> {
    if n_max < 1 {
        return domain("n_max must be at least 1");
    }
    let table = sieve(n_max.max(2))?;
    let ln21 = 21f64.ln();
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut d = BigInt::one();
    let mut psi = CompensatedSum::default();
    let mut pi = 0u64;
    for n in 1..=n_max {
        if table.is_prime(n) {
            pi += 1;
        }
        if let Some(p) = prime_power_base(&table, n) {
            psi.add((p as f64).ln());
            if n <= EXACT_LCM_LIMIT {
                d *= p;
            }
        }
        let ln_dn = if n <= EXACT_LCM_LIMIT { big_ln(&d) } else { psi.value() };
        let dn_le_n_pow_pi = if n <= EXACT_PI_POWER_LIMIT {
            d <= num_traits::pow(BigInt::from(n), pi as usize)
        } else {
            ln_dn <= pi as f64 * (n as f64).ln()
        };
        rows.push(DnGrowthRow {
            n,
            ln_dn,
            ratio: ln_dn / n as f64,
            dn_le_n_pow_pi,
            cube_le_21_pow_n: 3.0 * ln_dn <= n as f64 * ln21 + GROWTH_GUARD,
        });
    }
    let threshold = match rows.iter().rposition(|r| !r.cube_le_21_pow_n) {
        None => Some(1),
        Some(i) if i + 1 < rows.len() => Some(rows[i + 1].n),
        Some(_) => None,
    };
    Ok(DnGrowthReport { rows, threshold })
}

/// p when n = p^m for a prime p and m ≥ 1.
fn prime_power_base(t: &SieveTable, n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let p = t.primes.iter().copied().find(|&p| n.is_multiple_of(p))?;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    (m == 1).then_some(p)
}
