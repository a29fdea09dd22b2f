//! Command-line front end: one subcommand per computation, each emitting a
//! [`ReportEnvelope`] as JSON or CSV.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors.

mod cache;
mod certfile;
mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

pub use cache::{CachedRecord, SequenceCache};
pub use certfile::{certificate_from_json, certificate_from_str, certificate_to_json};
pub use report::{render, Format, ReportEnvelope};

use crate::bounds::scan_kernel_max;
use crate::certificate::{decay_table_with, search_certificate, verify_certificate};
use crate::error::Error;
use crate::exactnum::{format_rational, rat, to_f64, Rational, DEFAULT_SERIES_TERMS};
use crate::legendre::{coeff_bound_c, shifted_legendre};
use crate::linearforms::{j_diag, j_offdiag, jj_form, lcm_range, zeta3_at, LinearFormZ3};
use crate::primes::{dn_growth_report, pnt_report, sieve};
use crate::quadrature::{
    j_quadrature, jj_quadrature, jj_triple_quadrature, verify_kernel_identity, verify_substitution_identity,
    DEFAULT_TOL_3D,
};

/// Environment variable overriding the default ζ(3) series terms.
pub const PRECISION_ENV: &str = "ZETA3_PRECISION";

/// Largest n for which `verify-integrals` runs the triple integral.
const TRIPLE_N_MAX: u64 = 4;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "zeta3", version, about = "Exact linear forms and certificates for zeta(3)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Series terms for the ζ(3) enclosure.
    #[arg(long, global = true)]
    precision: Option<u64>,
    /// JSONL cache of (A_n, B_n, d_n) records.
    #[arg(long, global = true, value_name = "FILE")]
    cache: Option<PathBuf>,
    /// Recompute every cache entry on load.
    #[arg(long, global = true, requires = "cache")]
    verify_cache: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of the shifted Legendre polynomial P_n.
    Legendre {
        #[arg(long)]
        n: u64,
    },
    /// J_rs in closed form against quadrature.
    Jrs {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// The record (A_n, B_n, d_n) and the enclosure of u_n.
    LinearForm {
        #[arg(long)]
        n: u64,
    },
    /// Records for 0 ≤ n ≤ n-max.
    Sequence {
        #[arg(long, default_value_t = 10)]
        n_max: u64,
    },
    /// Quadrature checks of the integral identities.
    VerifyIntegrals {
        #[arg(long, default_value_t = 4)]
        n_max: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Exact kernel maximum over a rational lattice.
    BoundScan {
        #[arg(long, default_value_t = 200)]
        grid: u64,
    },
    /// π(x) against li(x) and x/ln x at powers of ten up to n-max.
    Pnt {
        #[arg(long, default_value_t = 1_000_000)]
        n_max: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Growth of d_n = lcm(1..n).
    DnGrowth {
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
    },
    /// Produce a certificate for q_max, or check one.
    Certificate {
        #[arg(long, conflicts_with = "check")]
        qmax: Option<String>,
        #[arg(long, value_name = "FILE")]
        check: Option<PathBuf>,
    },
    /// Decay of 𝔍_n.
    Decay {
        #[arg(long, default_value_t = 25)]
        n_max: u64,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Usage(e.to_string()),
            Error::Invariant(_) => Failure::Verification(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

struct Outcome {
    envelope: ReportEnvelope,
    passed: bool,
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli).and_then(|o| emit(&cli, o)) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFICATION,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            EXIT_VERIFICATION
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            EXIT_VERIFICATION
        }
    }
}

fn emit(cli: &Cli, outcome: Outcome) -> Result<bool, Failure> {
    let text = render(&outcome.envelope, cli.format).map_err(|e| Failure::Runtime(e.to_string()))?;
    report::write_report(&text, cli.out.as_deref()).map_err(|e| Failure::Runtime(e.to_string()))?;
    if !outcome.passed {
        eprintln!("{}: one or more checks failed", outcome.envelope.command);
    }
    Ok(outcome.passed)
}

fn precision(cli: &Cli) -> Result<u64, Failure> {
    let p = match cli.precision {
        Some(p) => p,
        None => match std::env::var(PRECISION_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("{PRECISION_ENV} must be a positive integer, got {v:?}")))?,
            Err(_) => DEFAULT_SERIES_TERMS,
        },
    };
    if p == 0 {
        return Err(Failure::Usage("precision must be at least 1".into()));
    }
    Ok(p)
}

/// Linear forms, through the cache when one is configured.
struct Forms(Option<SequenceCache>);

impl Forms {
    fn open(cli: &Cli) -> Result<Self, Failure> {
        match &cli.cache {
            None => Ok(Self(None)),
            Some(path) => {
                let c = SequenceCache::load(path, cli.verify_cache)?;
                if c.skipped_lines > 0 {
                    eprintln!("warning: skipped {} malformed cache line(s)", c.skipped_lines);
                }
                Ok(Self(Some(c)))
            }
        }
    }

    fn get(&mut self, n: u64) -> crate::Result<LinearFormZ3> {
        match &mut self.0 {
            Some(c) => c.form(n),
            None => jj_form(n),
        }
    }
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn ok(command: &str, parameters: Map<String, Value>, rows: Vec<Value>) -> Result<Outcome, Failure> {
    Ok(Outcome {
        envelope: ReportEnvelope::new(command, parameters, rows),
        passed: true,
    })
}

fn record_row(n: u64, form: &LinearFormZ3, zeta: &crate::RationalInterval) -> Value {
    let jj = form.enclose(zeta);
    let u = jj.scale(&Rational::from_integer(form.dcube().clone()));
    json!({
        "n": n,
        "A": form.scaled_alpha().to_string(),
        "B": form.beta().to_string(),
        "d": lcm_range(n).to_string(),
        "u_lo": format_rational(u.lo()),
        "u_hi": format_rational(u.hi()),
        "u_approx": to_f64(&u.midpoint()),
        "jj_approx": to_f64(&jj.midpoint()),
    })
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Legendre { n } => {
            let p = shifted_legendre(*n);
            ok(
                "legendre",
                params(&[("n", json!(n))]),
                vec![json!({
                    "n": n,
                    "coefficients": p.to_string(),
                    "coefficient_bound": coeff_bound_c(*n).to_string(),
                })],
            )
        }
        Command::Jrs { r, s, tol } => {
            let zeta = zeta3_at(precision(cli)?)?;
            let (coef, constant) = if r == s {
                let f = j_diag(*r as u64);
                (f.beta().clone(), f.alpha().clone())
            } else {
                (BigInt::from(0), j_offdiag(*r as u64, *s as u64)?)
            };
            let exact = zeta.scale(&Rational::from_integer(coef.clone())).shift(&constant);
            let exact_f = to_f64(&exact.midpoint());
            let q = j_quadrature(*r, *s, *tol)?;
            let diff = (q.value - exact_f).abs();
            let pass = diff <= *tol;
            Ok(Outcome {
                envelope: ReportEnvelope::new(
                    "jrs",
                    params(&[("r", json!(r)), ("s", json!(s)), ("tol", json!(tol))]),
                    vec![json!({
                        "r": r,
                        "s": s,
                        "zeta3_coefficient": coef.to_string(),
                        "constant": format_rational(&constant),
                        "exact_approx": exact_f,
                        "quadrature": q.value,
                        "error_estimate": q.error_estimate,
                        "difference": diff,
                        "pass": pass,
                    })],
                ),
                passed: pass,
            })
        }
        Command::LinearForm { n } => {
            let p = precision(cli)?;
            let zeta = zeta3_at(p)?;
            let form = Forms::open(cli)?.get(*n)?;
            ok(
                "linear-form",
                params(&[("n", json!(n)), ("precision", json!(p))]),
                vec![record_row(*n, &form, &zeta)],
            )
        }
        Command::Sequence { n_max } => {
            let p = precision(cli)?;
            let zeta = zeta3_at(p)?;
            let mut forms = Forms::open(cli)?;
            let rows = (0..=*n_max)
                .map(|n| Ok(record_row(n, &forms.get(n)?, &zeta)))
                .collect::<crate::Result<Vec<_>>>()?;
            ok("sequence", params(&[("n_max", json!(n_max)), ("precision", json!(p))]), rows)
        }
        Command::VerifyIntegrals { n_max, tol } => verify_integrals(cli, *n_max, *tol),
        Command::BoundScan { grid } => {
            let s = scan_kernel_max(*grid)?;
            let passed = s.below_one_24th() && s.at_most_one_25th() && s.amgm_violations == 0;
            Ok(Outcome {
                envelope: ReportEnvelope::new(
                    "bound-scan",
                    params(&[("grid", json!(grid))]),
                    vec![json!({
                        "resolution": s.resolution,
                        "max": format_rational(&s.max),
                        "max_approx": to_f64(&s.max),
                        "argmax_x": format_rational(s.argmax.x()),
                        "argmax_y": format_rational(s.argmax.y()),
                        "argmax_z": format_rational(s.argmax.z()),
                        "points": s.points,
                        "below_1_24": s.below_one_24th(),
                        "at_most_1_25": s.at_most_one_25th(),
                        "amgm_violations": s.amgm_violations,
                    })],
                ),
                passed,
            })
        }
        Command::Pnt { n_max, tol } => {
            let table = sieve(*n_max)?;
            let mut xs: Vec<u64> = std::iter::successors(Some(10u64), |x| x.checked_mul(10))
                .take_while(|x| x <= n_max)
                .collect();
            if xs.last() != Some(n_max) {
                xs.push(*n_max);
            }
            let rows = pnt_report(&table, &xs, *tol)?
                .into_iter()
                .map(|r| {
                    json!({
                        "x": r.x,
                        "pi": r.pi,
                        "li": r.li,
                        "x_over_ln_x": r.x_over_ln_x,
                        "ratio_li": r.ratio_li,
                        "ratio_x_ln_x": r.ratio_x_ln_x,
                    })
                })
                .collect();
            ok("pnt", params(&[("n_max", json!(n_max)), ("tol", json!(tol))]), rows)
        }
        Command::DnGrowth { n_max } => {
            let rep = dn_growth_report(*n_max)?;
            let rows = rep
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "ln_dn": r.ln_dn,
                        "ln_dn_over_n": r.ratio,
                        "dn_le_n_pow_pi": r.dn_le_n_pow_pi,
                        "dn_cube_le_21_pow_n": r.cube_le_21_pow_n,
                    })
                })
                .collect();
            ok(
                "dn-growth",
                params(&[("n_max", json!(n_max)), ("threshold_21n", json!(rep.threshold))]),
                rows,
            )
        }
        Command::Certificate { qmax, check } => match (qmax, check) {
            (_, Some(path)) => check_certificate(path),
            (Some(q), None) => {
                let q: BigInt = q
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Usage(format!("--qmax must be an integer, got {q:?}")))?;
                let p = precision(cli)?;
                let mut forms = Forms::open(cli)?;
                let (cert, _) = search_certificate(&q, p, |n| forms.get(n))?;
                let passed = verify_certificate(&cert);
                Ok(Outcome {
                    envelope: ReportEnvelope::new(
                        "certificate",
                        params(&[("qmax", json!(q.to_string())), ("precision", json!(p))]),
                        vec![certificate_to_json(&cert)],
                    ),
                    passed,
                })
            }
            (None, None) => Err(Failure::Usage("certificate needs --qmax or --check".into())),
        },
        Command::Decay { n_max } => {
            let p = precision(cli)?;
            let mut forms = Forms::open(cli)?;
            let rows = decay_table_with(*n_max, p, |n| forms.get(n))?
                .into_iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "u_mid": format_rational(&r.u_mid),
                        "jj_mid": format_rational(&r.jj_mid),
                        "jj_approx": to_f64(&r.jj_mid),
                        "ratio": r.ratio,
                    })
                })
                .collect();
            ok("decay", params(&[("n_max", json!(n_max)), ("precision", json!(p))]), rows)
        }
    }
}

fn check_certificate(path: &Path) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let (row, passed) = match certificate_from_str(&text) {
        Ok(c) => {
            let valid = verify_certificate(&c);
            (
                json!({"q_max": c.q_max.to_string(), "n": c.n, "valid": valid, "reason": if valid { "" } else { "recomputation mismatch" }}),
                valid,
            )
        }
        Err(e) => (
            json!({"q_max": null, "n": null, "valid": false, "reason": e.to_string()}),
            false,
        ),
    };
    Ok(Outcome {
        envelope: ReportEnvelope::new(
            "certificate-check",
            params(&[("check", json!(path.display().to_string()))]),
            vec![row],
        ),
        passed,
    })
}

fn identity_row(identity: &str, case: String, lhs: f64, rhs: f64, tol: f64, pass: bool) -> Value {
    json!({
        "identity": identity,
        "case": case,
        "lhs": lhs,
        "rhs": rhs,
        "difference": (lhs - rhs).abs(),
        "tolerance": tol,
        "pass": pass,
    })
}

fn verify_integrals(cli: &Cli, n_max: u64, tol: f64) -> Result<Outcome, Failure> {
    let p = precision(cli)?;
    let zeta = zeta3_at(p)?;
    let mid = |f: &LinearFormZ3| to_f64(&f.enclose(&zeta).midpoint());
    let mut rows = Vec::new();

    for r in 0..=n_max {
        for s in 0..=n_max {
            let exact = if r == s {
                mid(&j_diag(r))
            } else {
                to_f64(&j_offdiag(r, s)?)
            };
            let q = j_quadrature(r as u32, s as u32, tol)?.value;
            let pass = (q - exact).abs() <= tol;
            rows.push(identity_row("J_rs closed form", format!("r={r} s={s}"), q, exact, tol, pass));
        }
    }
    let mut forms = Forms::open(cli)?;
    for n in 0..=n_max {
        let exact = mid(&forms.get(n)?);
        let q = jj_quadrature(n, tol)?.value;
        rows.push(identity_row("double integral linear form", format!("n={n}"), q, exact, tol, (q - exact).abs() <= tol));
        if n <= TRIPLE_N_MAX {
            let tol3 = tol.max(DEFAULT_TOL_3D);
            let q3 = jj_triple_quadrature(n, tol3)?.value;
            rows.push(identity_row("triple integral linear form", format!("n={n}"), q3, exact, tol3, (q3 - exact).abs() <= tol3));
        }
    }
    let points = [(rat(1, 2), rat(1, 2)), (rat(1, 4), rat(3, 4)), (rat(2, 3), rat(1, 3))];
    for n in 1..=n_max {
        for (a, b) in &points {
            let (fa, fb) = (format_rational(a), format_rational(b));
            let k = verify_kernel_identity(n, a, b, tol)?;
            let case = format!("n={n} x={fa} z={fb}");
            rows.push(identity_row("kernel integral", case, k.lhs.value, k.rhs.value, tol, k.agree));
            let s = verify_substitution_identity(n, a, b, tol)?;
            let case = format!("n={n} x={fa} y={fb}");
            rows.push(identity_row("substitution", case, s.lhs.value, s.rhs.value, tol, s.agree));
        }
    }
    let passed = rows.iter().all(|r| r["pass"] == json!(true));
    Ok(Outcome {
        envelope: ReportEnvelope::new(
            "verify-integrals",
            params(&[("n_max", json!(n_max)), ("tol", json!(tol)), ("precision", json!(p))]),
            rows,
        ),
        passed,
    })
}
