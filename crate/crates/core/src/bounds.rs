//! The kernel bound x(1−x)y(1−y)z(1−z)/(1 − (1 − xy)z) < 1/24 and the
//! geometric envelopes it induces on 𝔍_n and u_n.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::exactnum::{rat, rat_int, Rational, RationalInterval, DEFAULT_SERIES_TERMS};
use crate::linearforms::zeta3_at;

/// Largest lattice resolution accepted by [`scan_kernel_max`]; keeps every
/// cross-multiplication inside u128.
pub const MAX_RESOLUTION: u64 = 10_000;

/// A point of the open unit cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelPoint {
    x: Rational,
    y: Rational,
    z: Rational,
}

impl KernelPoint {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Result<Self> {
        for (name, v) in [("x", &x), ("y", &y), ("z", &z)] {
            if !v.is_positive() || *v >= Rational::one() {
                return domain(format!("{name} must lie strictly inside (0, 1)"));
            }
        }
        Ok(Self { x, y, z })
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn z(&self) -> &Rational {
        &self.z
    }

    /// 1 − (1 − xy)z = (1 − z) + xyz, positive on the open cube.
    pub fn denominator(&self) -> Rational {
        let one = Rational::one();
        (&one - &self.z) + &self.x * &self.y * &self.z
    }
}

/// x(1−x)y(1−y)z(1−z)/(1 − (1 − xy)z), exactly.
pub fn kernel_ratio(p: &KernelPoint) -> Rational {
    let one = Rational::one();
    let num = &p.x * (&one - &p.x) * &p.y * (&one - &p.y) * &p.z * (&one - &p.z);
    num / p.denominator()
}

/// Whether (1 − (1 − xy)z)² ≥ 4(1 − z)xyz, the squared form of the AM–GM step.
pub fn amgm_holds(p: &KernelPoint) -> bool {
    let one = Rational::one();
    let d = p.denominator();
    &d * &d >= rat_int(4) * (&one - &p.z) * &p.x * &p.y * &p.z
}

/// Outcome of a lattice scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelScan {
    pub resolution: u64,
    pub max: Rational,
    /// Lexicographically smallest lattice point attaining `max`.
    pub argmax: KernelPoint,
    pub points: u64,
    /// Lattice points where the squared AM–GM inequality fails.
    pub amgm_violations: u64,
}

impl KernelScan {
    pub fn below_one_24th(&self) -> bool {
        self.max < rat(1, 24)
    }

    pub fn at_most_one_25th(&self) -> bool {
        self.max <= rat(1, 25)
    }
}

/// Exact maximum of the kernel over the interior lattice {i/R : 1 ≤ i ≤ R−1}³.
///
/// With x = i/R, y = j/R, z = k/R the kernel is N/(R³·D) where
/// N = i(R−i)·j(R−j)·k(R−k) and D = R²(R−k) + ijk, so the scan compares
/// integer fractions N/D and never builds a rational until the end.
pub fn scan_kernel_max(resolution: u64) -> Result<KernelScan> {
    if resolution < 2 {
        return domain("resolution must be at least 2");
    }
    if resolution > MAX_RESOLUTION {
        return domain(format!("resolution above {MAX_RESOLUTION} is not supported"));
    }
    let r = resolution as u128;

    #[derive(Clone, Copy)]
    struct Best {
        num: u128,
        den: u128,
        ijk: (u128, u128, u128),
        violations: u64,
    }

    let per_i: Vec<Best> = (1..r)
        .into_par_iter()
        .map(|i| {
            let mut best = Best {
                num: 0,
                den: 1,
                ijk: (0, 0, 0),
                violations: 0,
            };
            for j in 1..r {
                let nij = i * (r - i) * j * (r - j);
                for k in 1..r {
                    let num = nij * k * (r - k);
                    let den = r * r * (r - k) + i * j * k;
                    // (D/R³)² ≥ 4·(R−k)/R·ijk/R³  ⇔  D² ≥ 4R²(R−k)·ijk
                    if den * den < 4 * r * r * (r - k) * i * j * k {
                        best.violations += 1;
                    }
                    if num * best.den > best.num * den {
                        best.num = num;
                        best.den = den;
                        best.ijk = (i, j, k);
                    }
                }
            }
            best
        })
        .collect();

    // strict improvement only, in increasing i, keeps the smallest argmax
    let mut best = per_i[0];
    let mut violations = 0;
    for b in &per_i {
        violations += b.violations;
        if b.num * best.den > best.num * b.den {
            best = *b;
        }
    }
    let rr = BigInt::from(r);
    let max = Rational::new(BigInt::from(best.num), &rr * &rr * &rr * BigInt::from(best.den));
    let coord = |v: u128| Rational::new(BigInt::from(v), rr.clone());
    let argmax = KernelPoint::new(coord(best.ijk.0), coord(best.ijk.1), coord(best.ijk.2))?;
    Ok(KernelScan {
        resolution,
        max,
        argmax,
        points: (resolution - 1).pow(3),
        amgm_violations: violations,
    })
}

/// Envelopes for the decay of 𝔍_n and u_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecayBound {
    /// 2·(1/24)^n·ζ(3), the bound on 𝔍_n.
    pub tight: RationalInterval,
    /// 2·(21/24)^n·ζ(3), the bound on u_n once d_n³ ≤ 21^n.
    pub loose: RationalInterval,
}

pub fn decay_bound(n: u64) -> Result<DecayBound> {
    Ok(decay_bound_with(n, &zeta3_at(DEFAULT_SERIES_TERMS)?))
}

pub fn decay_bound_with(n: u64, zeta: &RationalInterval) -> DecayBound {
    let two = rat_int(2);
    let tight = zeta.scale(&(&two * num_traits::pow(rat(1, 24), n as usize)));
    let loose = zeta.scale(&(&two * num_traits::pow(rat(21, 24), n as usize)));
    DecayBound { tight, loose }
}
