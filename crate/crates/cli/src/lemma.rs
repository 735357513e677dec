//! `lemma` subcommands: exact line dynamics, circle and monomial checks.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde_json::{json, Value};

use semijulia_core::lemma::{
    circle_lemma_check, commutator_value, d_n_value, density_march, format_rational, line_apply_stepwise,
    monomial_rigidity_check, parse_rational, reversed_commutator_value, BigRational, LineWord, LogDynParams, Rigidity,
};
use semijulia_core::parse_poly;

use crate::error::{CliError, CliResult};
use crate::report::{complex, real, Report, Reproducibility, Stopwatch};

/// A rational flag value: `p`, `p/q` or a finite decimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub BigRational);

impl std::str::FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_rational(s).map(Rational).map_err(|e| e.to_string())
    }
}

#[derive(Args, Debug)]
pub struct LineArgs {
    #[arg(long)]
    pub j: u32,
    #[arg(long)]
    pub m: u32,
    /// Translation of s(r) = m r + c; must be negative.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Rational,
    /// Right end of the working interval, log r* < 0.
    #[arg(long, allow_hyphen_values = true, default_value = "-1")]
    pub rstar_log: Rational,
}

impl LineArgs {
    fn params(&self) -> CliResult<LogDynParams> {
        LogDynParams::new(self.j, self.m, self.c.0.clone(), self.rstar_log.0.clone())
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

fn params_json(p: &LogDynParams) -> Value {
    json!({
        "j": p.j(),
        "m": p.m(),
        "c": format_rational(p.c()),
        "r0": format_rational(p.r0()),
        "rstar_log": format_rational(p.rstar_log()),
    })
}

#[derive(Subcommand, Debug)]
pub enum LemmaCommand {
    /// Evaluate t^-n s^-n t^n s^n at r, explicitly and in closed form.
    Commutator {
        #[command(flatten)]
        line: LineArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        r: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the two-stage commutator march towards a seed point.
    Density {
        #[command(flatten)]
        line: LineArgs,
        #[arg(long, allow_hyphen_values = true)]
        r_prime: Rational,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map an arc of |z| = radius through z -> z^(j^n) until it covers the circle.
    Circles {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0.9)]
        radius: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test whether a polynomial with L(0) = 0 maps circles about 0 to circles.
    Monomial {
        /// The polynomial L, e.g. "0.5*z^2".
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn usage(e: semijulia_core::Error) -> CliError {
    match e {
        semijulia_core::Error::GuardViolation { .. } => CliError::Core(e),
        other => CliError::Usage(other.to_string()),
    }
}

pub fn run(command: &LemmaCommand, argv: Vec<String>) -> CliResult<()> {
    let clock = Stopwatch::start();
    let (name, config, results, out) = match command {
        LemmaCommand::Commutator { line, n, r, out } => {
            let p = line.params()?;
            let value = commutator_value(&p, *n, &r.0).map_err(usage)?;
            let explicit = line_apply_stepwise(&p, &LineWord::commutator(*n), &r.0);
            let back = reversed_commutator_value(&p, *n, &value).map_err(usage)?;
            let config = json!({ "params": params_json(&p), "n": n, "r": format_rational(&r.0) });
            let results = json!({
                "word": LineWord::commutator(*n).to_string(),
                "d_n": format_rational(&d_n_value(&p, *n).map_err(usage)?),
                "value": format_rational(&value),
                "explicit_value": format_rational(&explicit),
                "identity_holds": explicit == value,
                "reversed_value": format_rational(&back),
                "round_trip_holds": back == r.0,
            });
            ("lemma commutator", config, results, out)
        }
        LemmaCommand::Density { line, r_prime, n_max, out } => {
            let p = line.params()?;
            let march = density_march(&p, &r_prime.0, *n_max).map_err(usage)?;
            let d_max = d_n_value(&p, *n_max).map_err(usage)?;
            let gap = march.gap_around_seed();
            let config = json!({
                "params": params_json(&p),
                "r_prime": format_rational(&r_prime.0),
                "n_max": n_max,
            });
            let first: Vec<Value> = march
                .first_stage
                .iter()
                .map(|(n, v)| json!({ "n": n, "value": format_rational(v) }))
                .collect();
            let opt = |v: Option<BigRational>| v.map(|g| format_rational(&g));
            let results = json!({
                "first_stage": first,
                "first_limit": format_rational(&march.first_limit),
                "second_stage_points": march.second_stage.len(),
                "distinct_points": march.points.len(),
                "guarded_steps": march.guarded_steps,
                "guard_violations": 0,
                "gap_around_seed": opt(gap.clone()),
                "left_gap": opt(march.left_gap()),
                "right_gap": opt(march.right_gap()),
                "d_n_max": format_rational(&d_max),
                "gap_within_d_n_max": gap.is_some_and(|g| g <= d_max),
            });
            ("lemma density", config, results, out)
        }
        LemmaCommand::Circles {
            j,
            delta,
            radius,
            theta,
            samples,
            out,
        } => {
            let rep = circle_lemma_check(*j, *radius, *theta, *delta, *samples).map_err(usage)?;
            let config = json!({
                "j": j,
                "radius": radius,
                "theta": theta,
                "delta": delta,
                "samples": samples,
            });
            let results = json!({
                "n": rep.n,
                "power": rep.power,
                "expected_radius": real(rep.expected_radius),
                "max_radius_rel_error": real(rep.max_radius_rel_error),
                "radius_ok": rep.radius_ok,
                "max_angular_gap": real(rep.max_angular_gap),
                "gap_bound": real(rep.gap_bound),
                "covers_circle": rep.covers_circle,
            });
            ("lemma circles", config, results, out)
        }
        LemmaCommand::Monomial {
            poly,
            radii,
            samples,
            out,
        } => {
            let l = parse_poly(poly).map_err(|source| CliError::Generator {
                index: 0,
                text: poly.clone(),
                source,
            })?;
            let outcome = monomial_rigidity_check(&l, radii, *samples).map_err(usage)?;
            let config = json!({ "poly": poly, "radii": radii, "samples": samples });
            let results = match outcome {
                Rigidity::Consistent { a, j } => json!({ "outcome": "consistent", "a": complex(a), "j": j }),
                Rigidity::Violation {
                    witness_radius,
                    modulus_spread,
                } => json!({
                    "outcome": "violation",
                    "witness_radius": witness_radius,
                    "modulus_spread": real(modulus_spread),
                }),
            };
            ("lemma monomial", config, results, out)
        }
    };
    Report {
        command: name.to_string(),
        argv,
        config,
        results,
        reproducibility: Reproducibility {
            package: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            seed: None,
        },
        timings: clock.finish(),
    }
    .emit(out.as_deref())
}
