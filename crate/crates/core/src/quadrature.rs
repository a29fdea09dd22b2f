//! Tanh-sinh quadrature on the open unit interval, square and cube.
//!
//! This is the floating-point cross-check for the exact linear forms. Nodes
//! carry both `x` and `1 − x`, so integrands can form quantities such as
//! `1 − xy = (1 − x) + x(1 − y)` without cancellation near the corner and
//! never see an argument on the boundary.
//!
//! The transform is x = (1 + tanh(π/2·sinh t))/2 with step h = 2^-level.
//! Levels are refined until two successive levels agree within the
//! tolerance; the last difference is reported as the error estimate.

use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::exactnum::{to_f64, Rational};
use crate::legendre::shifted_legendre;

/// Finest level tried in one and two dimensions.
pub const MAX_LEVEL_2D: u32 = 12;
/// Finest level tried in three dimensions.
pub const MAX_LEVEL_3D: u32 = 8;
/// Default tolerance for the three-dimensional integrals.
pub const DEFAULT_TOL_3D: f64 = 1e-4;

/// Work cap per integral; refinement stops (unconverged) before exceeding it.
const MAX_EVALUATIONS: u64 = 400_000_000;
const MIN_LEVEL: u32 = 2;

/// Closest a node may approach the boundary, by dimension. Dropped nodes
/// carry weight below the cutoff, far under every tolerance used here even
/// for the log and 1/(1 − x + xyz) type singularities.
const CUTOFF_1D: f64 = 1e-300;
const CUTOFF_2D: f64 = 1e-40;
const CUTOFF_3D: f64 = 1e-20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Difference between the last two levels; always non-negative.
    pub error_estimate: f64,
    pub evaluations: u64,
    /// Finest level evaluated.
    pub level: u32,
}

impl QuadratureResult {
    pub fn converged(&self, tol: f64) -> bool {
        self.error_estimate <= tol
    }
}

impl fmt::Display for QuadratureResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.15e} ± {:.1e} ({} evaluations, level {})",
            self.value, self.error_estimate, self.evaluations, self.level
        )
    }
}

/// A point of (0, 1) together with its exact complement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitCoord {
    pub x: f64,
    /// 1 − x, carried separately so it keeps full relative precision near 1.
    pub xc: f64,
}

impl UnitCoord {
    pub fn new(x: f64) -> Self {
        Self { x, xc: 1.0 - x }
    }

    /// ln x, accurate at both ends of the interval.
    pub fn ln(self) -> f64 {
        if self.x < 0.5 {
            self.x.ln()
        } else {
            (-self.xc).ln_1p()
        }
    }
}

/// Integrand on the open unit square.
pub trait Integrand2D: Sync {
    fn eval(&self, x: UnitCoord, y: UnitCoord) -> f64;
}

impl<F: Fn(UnitCoord, UnitCoord) -> f64 + Sync> Integrand2D for F {
    fn eval(&self, x: UnitCoord, y: UnitCoord) -> f64 {
        self(x, y)
    }
}

/// Integrand on the open unit cube.
pub trait Integrand3D: Sync {
    fn eval(&self, x: UnitCoord, y: UnitCoord, z: UnitCoord) -> f64;
}

impl<F: Fn(UnitCoord, UnitCoord, UnitCoord) -> f64 + Sync> Integrand3D for F {
    fn eval(&self, x: UnitCoord, y: UnitCoord, z: UnitCoord) -> f64 {
        self(x, y, z)
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Nodes and weights (step included) of one tanh-sinh level on (0, 1).
fn unit_rule(level: u32, cutoff: f64) -> Vec<(UnitCoord, f64)> {
    let h = 0.5f64.powi(level as i32);
    let mut nodes = vec![(UnitCoord { x: 0.5, xc: 0.5 }, h * PI / 4.0)];
    for j in 1.. {
        let t = j as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let e = (-2.0 * u).exp();
        let xc = e / (1.0 + e);
        if xc < cutoff {
            break;
        }
        let x = 1.0 / (1.0 + e);
        // dx/dt = π cosh t · x(1 − x)
        let w = h * PI * t.cosh() * x * xc;
        nodes.push((UnitCoord { x, xc }, w));
        nodes.push((UnitCoord { x: xc, xc: x }, w));
    }
    nodes
}

/// Drives level refinement. `level_sum` returns the quadrature sum and the
/// number of evaluations for one level.
fn refine(
    tol: f64,
    max_level: u32,
    per_level_cost: impl Fn(u32) -> u64,
    level_sum: impl Fn(u32) -> (f64, u64),
) -> QuadratureResult {
    let mut evaluations = 0u64;
    let mut prev: Option<f64> = None;
    let mut result = QuadratureResult {
        value: 0.0,
        error_estimate: f64::INFINITY,
        evaluations: 0,
        level: 0,
    };
    for level in 0..=max_level {
        if level > MIN_LEVEL && evaluations + per_level_cost(level) > MAX_EVALUATIONS {
            break;
        }
        let (value, evals) = level_sum(level);
        evaluations += evals;
        let err = prev.map_or(f64::INFINITY, |p| (value - p).abs());
        result = QuadratureResult {
            value,
            error_estimate: err,
            evaluations,
            level,
        };
        if level >= MIN_LEVEL && err <= tol {
            break;
        }
        prev = Some(value);
    }
    result
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return domain(format!("tolerance must be positive and finite, got {tol}"));
    }
    Ok(())
}

fn rule_len(level: u32, cutoff: f64) -> u64 {
    unit_rule(level, cutoff).len() as u64
}

/// ∫_a^b f over the open interval. Nodes that round onto an endpoint are skipped.
pub fn tanh_sinh_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    check_tol(tol)?;
    if !a.is_finite() || !b.is_finite() || a >= b {
        return domain(format!("need finite a < b, got [{a}, {b}]"));
    }
    let width = b - a;
    Ok(refine(
        tol,
        MAX_LEVEL_2D,
        |level| rule_len(level, CUTOFF_1D),
        |level| {
            let rule = unit_rule(level, CUTOFF_1D);
            let mut sum = CompensatedSum::default();
            let mut evals = 0;
            for (u, w) in &rule {
                let x = if u.x <= 0.5 { a + width * u.x } else { b - width * u.xc };
                if x <= a || x >= b {
                    continue;
                }
                sum.add(w * f(x));
                evals += 1;
            }
            (width * sum.value(), evals.max(1))
        },
    ))
}

/// ∫_0^1 f with the complement-carrying node representation.
pub fn integrate_unit(f: impl Fn(UnitCoord) -> f64, tol: f64) -> Result<QuadratureResult> {
    check_tol(tol)?;
    Ok(refine(
        tol,
        MAX_LEVEL_2D,
        |level| rule_len(level, CUTOFF_1D),
        |level| {
            let rule = unit_rule(level, CUTOFF_1D);
            let sum: CompensatedSum = rule.iter().map(|(u, w)| w * f(*u)).collect();
            (sum.value(), rule.len() as u64)
        },
    ))
}

/// Tensor-product tanh-sinh over the open unit square.
pub fn integrate_2d(f: &impl Integrand2D, tol: f64) -> Result<QuadratureResult> {
    check_tol(tol)?;
    Ok(refine(
        tol,
        MAX_LEVEL_2D,
        |level| rule_len(level, CUTOFF_2D).pow(2),
        |level| {
            let rule = unit_rule(level, CUTOFF_2D);
            // rows in parallel, reduced in index order for reproducibility
            let rows: Vec<f64> = rule
                .par_iter()
                .map(|(x, wx)| {
                    let row: CompensatedSum = rule.iter().map(|(y, wy)| wy * f.eval(*x, *y)).collect();
                    wx * row.value()
                })
                .collect();
            let total: CompensatedSum = rows.into_iter().collect();
            (total.value(), (rule.len() as u64).pow(2))
        },
    ))
}

/// Tensor-product tanh-sinh over the open unit cube.
pub fn integrate_3d(f: &impl Integrand3D, tol: f64) -> Result<QuadratureResult> {
    check_tol(tol)?;
    Ok(refine(
        tol,
        MAX_LEVEL_3D,
        |level| rule_len(level, CUTOFF_3D).pow(3),
        |level| {
            let rule = unit_rule(level, CUTOFF_3D);
            let slabs: Vec<f64> = rule
                .par_iter()
                .map(|(x, wx)| {
                    let mut slab = CompensatedSum::default();
                    for (y, wy) in &rule {
                        let row: CompensatedSum =
                            rule.iter().map(|(z, wz)| wz * f.eval(*x, *y, *z)).collect();
                        slab.add(wy * row.value());
                    }
                    wx * slab.value()
                })
                .collect();
            let total: CompensatedSum = slabs.into_iter().collect();
            (total.value(), (rule.len() as u64).pow(3))
        },
    ))
}

/// The weight −log(xy)/(1 − xy), continuous up to the corner (1, 1).
pub fn log_kernel(x: UnitCoord, y: UnitCoord) -> f64 {
    let one_minus = x.xc + x.x * y.xc;
    if one_minus == 0.0 {
        return 1.0;
    }
    -(x.ln() + y.ln()) / one_minus
}

/// J_rs = ∫∫ −log(xy)/(1 − xy)·x^r·y^s over the unit square.
pub fn j_quadrature(r: u32, s: u32, tol: f64) -> Result<QuadratureResult> {
    let f = move |x: UnitCoord, y: UnitCoord| log_kernel(x, y) * x.x.powi(r as i32) * y.x.powi(s as i32);
    integrate_2d(&f, tol)
}

fn legendre_f64(n: u64) -> Vec<f64> {
    shifted_legendre(n).coeffs().iter().map(|c| to_f64(&Rational::from_integer(c.clone()))).collect()
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// 𝔍_n = ∫∫ −log(xy)/(1 − xy)·P_n(x)·P_n(y) over the unit square.
pub fn jj_quadrature(n: u64, tol: f64) -> Result<QuadratureResult> {
    let p = legendre_f64(n);
    let f = move |x: UnitCoord, y: UnitCoord| log_kernel(x, y) * horner(&p, x.x) * horner(&p, y.x);
    integrate_2d(&f, tol)
}

/// 𝔍′_n = ∫∫∫ (x(1−x)y(1−y)z(1−z)/(1 − (1 − yz)x))^n / (1 − (1 − yz)x).
pub fn jj_triple_quadrature(n: u64, tol: f64) -> Result<QuadratureResult> {
    let n = n as i32;
    let f = move |x: UnitCoord, y: UnitCoord, z: UnitCoord| {
        // 1 − (1 − yz)x = (1 − x) + xyz, no cancellation
        let den = x.xc + x.x * y.x * z.x;
        let ratio = x.x * x.xc * y.x * y.xc * z.x * z.xc / den;
        ratio.powi(n) / den
    };
    integrate_3d(&f, tol)
}

/// Both sides of an integral identity and whether they agree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityCheck {
    pub lhs: QuadratureResult,
    pub rhs: QuadratureResult,
    pub agree: bool,
}

impl IdentityCheck {
    fn compare(lhs: QuadratureResult, rhs: QuadratureResult, tol: f64) -> Self {
        let agree = (lhs.value - rhs.value).abs() <= tol + lhs.error_estimate + rhs.error_estimate;
        Self { lhs, rhs, agree }
    }

    pub fn difference(&self) -> f64 {
        (self.lhs.value - self.rhs.value).abs()
    }
}

fn interior(name: &str, v: &Rational) -> Result<(f64, f64)> {
    if !v.is_positive() || *v >= Rational::one() {
        return domain(format!("{name} must lie strictly inside (0, 1)"));
    }
    Ok((to_f64(v), to_f64(&(Rational::one() - v))))
}

/// ∫_0^1 P_n(y)/(1 − (1 − xy)z) dy against ∫_0^1 (xyz)^n (1 − y)^n/(1 − (1 − xy)z)^(n+1) dy.
pub fn verify_kernel_identity(n: u64, x: &Rational, z: &Rational, tol: f64) -> Result<IdentityCheck> {
    let (x, _) = interior("x", x)?;
    let (z, zc) = interior("z", z)?;
    let p = legendre_f64(n);
    let k = n as i32;
    let lhs = integrate_unit(|y| horner(&p, y.x) / (zc + x * y.x * z), tol)?;
    let rhs = integrate_unit(
        |y| {
            let den = zc + x * y.x * z;
            (x * y.x * z * y.xc).powi(k) / den.powi(k + 1)
        },
        tol,
    )?;
    Ok(IdentityCheck::compare(lhs, rhs, tol))
}

/// ∫_0^1 (xyz)^n/(1 − (1 − xy)z)^(n+1) dz against ∫_0^1 (1 − z)^n/(1 − (1 − xy)z) dz.
pub fn verify_substitution_identity(n: u64, x: &Rational, y: &Rational, tol: f64) -> Result<IdentityCheck> {
    let (x, _) = interior("x", x)?;
    let (y, _) = interior("y", y)?;
    let k = n as i32;
    let xy = x * y;
    let lhs = integrate_unit(
        |z| {
            let den = z.xc + xy * z.x;
            (xy * z.x).powi(k) / den.powi(k + 1)
        },
        tol,
    )?;
    let rhs = integrate_unit(|z| z.xc.powi(k) / (z.xc + xy * z.x), tol)?;
    Ok(IdentityCheck::compare(lhs, rhs, tol))
}
