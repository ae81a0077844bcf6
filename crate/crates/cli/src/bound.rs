//! `gamma-hat`, `tmax` and `verify-paper`.

use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use ucsb::optimizer::{
    check_reference_point, default_alpha_grid, find_tmax_with, gamma_hat, inner_inf,
    ReferenceCheck, ReferenceTolerances, SearchConfig, TmaxReport, TmaxSettings, GOLDEN_THRESHOLD,
    REFERENCE_ALPHA,
};
use ucsb::{GammaHatCertificate, Probability};

use crate::output::Run;
use crate::{usage, CliError, Outcome};

/// A fixed `alpha` or `auto` for a sweep over `[0, 0.2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum AlphaChoice {
    Fixed(f64),
    #[serde(serialize_with = "auto_str")]
    Auto,
}

fn auto_str<S: serde::Serializer>(s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str("auto")
}

impl std::str::FromStr for AlphaChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(AlphaChoice::Auto);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| format!("expected a number in [0, 1] or \"auto\", got {s:?}"))?;
        if (0.0..=1.0).contains(&v) {
            Ok(AlphaChoice::Fixed(v))
        } else {
            Err(format!("alpha = {v} must lie in [0, 1]"))
        }
    }
}

/// Search resolution shared by the optimizer subcommands.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SearchArgs {
    /// Grid points per coordinate in the coarse phase.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Coordinate-refinement rounds after the grid phase (0 disables).
    #[arg(long, default_value_t = 6)]
    pub refine: usize,
    /// Number of grid candidates refined.
    #[arg(long, default_value_t = 16)]
    pub starts: usize,
    /// Restrict the second block to b2 = 1.
    #[arg(long)]
    pub pin_b2: bool,
}

impl SearchArgs {
    fn config(&self) -> Result<SearchConfig, CliError> {
        let cfg = SearchConfig {
            grid_points_per_axis: self.grid,
            refine_rounds: self.refine,
            multistart_count: self.starts,
            b2_pinned_to_one: self.pin_b2,
            ..SearchConfig::default()
        };
        cfg.validate().map_err(|e| usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GammaHatArgs {
    /// Target frequency t in (0, 1/2).
    #[arg(long)]
    pub t: f64,
    /// Mixing weight of the fully correlated part, or "auto".
    #[arg(long, default_value = "auto")]
    pub alpha: AlphaChoice,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value = "gamma_hat.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaHatOutput {
    #[serde(flatten)]
    pub certificate: GammaHatCertificate,
    pub certified: bool,
    /// With `--alpha auto`: inner infimum at the reference `alpha` and its
    /// shortfall from the optimum found.
    pub reference_alpha: Option<ReferenceAlpha>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceAlpha {
    pub alpha: f64,
    pub min_ratio: f64,
    pub gap: f64,
}

/// Shortfalls below this count as "nearly optimal".
const NEARLY_OPTIMAL_GAP: f64 = 1e-5;

fn check_t(t: f64) -> Result<Probability, CliError> {
    if t > 0.0 && t < 0.5 {
        Ok(Probability::saturating(t))
    } else {
        Err(usage("t must lie in (0, 1/2)".to_string()))
    }
}

pub fn run_gamma_hat(args: &GammaHatArgs, mut run: Run) -> Outcome {
    let t = check_t(args.t)?;
    let cfg = args.search.config()?;
    let alphas = match args.alpha {
        AlphaChoice::Fixed(a) => vec![Probability::saturating(a)],
        AlphaChoice::Auto => default_alpha_grid(),
    };
    let mut certificate = gamma_hat(t, &alphas, &cfg)?;
    let reference_alpha = match args.alpha {
        AlphaChoice::Fixed(_) => None,
        AlphaChoice::Auto => {
            let r = inner_inf(Probability::saturating(REFERENCE_ALPHA), t, &cfg)?;
            Some(ReferenceAlpha {
                alpha: REFERENCE_ALPHA,
                min_ratio: r.min_ratio,
                gap: certificate.gamma_hat_lower - r.min_ratio,
            })
        }
    };
    if !run.timestamps() {
        certificate.wall_time_ms = 0;
    }
    let report = GammaHatOutput {
        certified: certificate.certifies(0.0),
        certificate,
        reference_alpha,
    };
    run.write_json(&args.out, &report)?;
    run.finish(&args.out)?;

    let c = &report.certificate;
    println!(
        "t = {}  alpha* = {:.6}  gamma_hat >= {:.10}  ({})",
        c.t,
        c.alpha_star,
        c.gamma_hat_lower,
        if report.certified {
            "certifies p_A >= t"
        } else {
            "does not certify"
        }
    );
    if let Some(r) = report.reference_alpha {
        let verdict = if r.gap.abs() <= NEARLY_OPTIMAL_GAP {
            "nearly optimal"
        } else {
            "suboptimal"
        };
        println!(
            "alpha = {} gives {:.10}, {:.2e} below alpha*: {verdict}",
            r.alpha, r.min_ratio, r.gap
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TmaxArgs {
    /// Certify t when the bound exceeds 1 + margin.
    #[arg(long, default_value_t = 1e-7)]
    pub margin: f64,
    #[arg(long, default_value_t = 0.37)]
    pub lo: f64,
    #[arg(long, default_value_t = 0.40)]
    pub hi: f64,
    /// Bisection stops at this bracket width.
    #[arg(long, default_value_t = 1e-7)]
    pub t_tol: f64,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value = "tmax.json")]
    pub out: PathBuf,
}

pub fn run_tmax(args: &TmaxArgs, mut run: Run) -> Outcome {
    if !(args.margin.is_finite() && args.margin > 0.0) {
        return Err(usage(format!("margin = {} must be > 0", args.margin)));
    }
    check_t(args.lo)?;
    check_t(args.hi)?;
    if !(args.lo < args.hi && args.t_tol > 0.0) {
        return Err(usage("need lo < hi and t_tol > 0".to_string()));
    }
    let cfg = args.search.config()?;
    let settings = TmaxSettings {
        lo: args.lo,
        hi: args.hi,
        margin: args.margin,
        t_tol: args.t_tol,
        ..TmaxSettings::default()
    };
    let mut report: TmaxReport = find_tmax_with(&cfg, &settings)?;
    if !run.timestamps() {
        report.wall_time_ms = 0;
        report.certificate.wall_time_ms = 0;
    }
    run.write_json(&args.out, &report)?;
    run.finish(&args.out)?;

    println!(
        "certified t >= {:.7}  (fails at {:.7}; alpha* = {:.6}, gamma_hat = {:.10})",
        report.t_certified,
        report.t_failed,
        report.certificate.alpha_star,
        report.certificate.gamma_hat_lower
    );
    println!(
        "bracket: gamma_hat({}) = {:.10}, gamma_hat({}) = {:.10}, threshold 1 + {:e}",
        report.lo, report.lo_gamma_hat, report.hi, report.hi_gamma_hat, report.margin
    );
    println!(
        "improvement over (3 - sqrt 5)/2 = {:.7}: {:+.3e}",
        GOLDEN_THRESHOLD,
        report.t_certified - GOLDEN_THRESHOLD
    );
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Tighten the min-ratio tolerance to 1e-6.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value = "verify_paper.json")]
    pub out: PathBuf,
}

pub fn run_verify(args: &VerifyArgs, mut run: Run) -> Outcome {
    let cfg = args.search.config()?;
    let mut tol = ReferenceTolerances::default();
    if args.strict {
        tol.ratio = 1e-6;
    }
    let mut check: ReferenceCheck = check_reference_point(&cfg, &tol)?;
    if !run.timestamps() {
        check.certificate.wall_time_ms = 0;
    }
    run.write_json(&args.out, &check)?;
    run.finish(&args.out)?;

    println!(
        "{:<10} {:>16} {:>20} {:>10} {:>8}  status",
        "quantity", "expected", "measured", "|diff|", "tol"
    );
    for r in &check.rows {
        println!(
            "{:<10} {:>16} {:>20.12} {:>10.2e} {:>8.0e}  {}",
            r.quantity,
            r.expected,
            r.measured,
            (r.measured - r.expected).abs(),
            r.tolerance,
            if r.pass { "ok" } else { "FAIL" }
        );
    }
    let branch = check.certificate.inner_report.branch;
    println!("branch: {branch:?}");
    if check.passed {
        println!("reference point reproduced");
        Ok(())
    } else {
        Err(CliError::Failed("reference point not reproduced".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_choice_parses() {
        assert_eq!("auto".parse::<AlphaChoice>(), Ok(AlphaChoice::Auto));
        assert_eq!(
            "0.035".parse::<AlphaChoice>(),
            Ok(AlphaChoice::Fixed(0.035))
        );
        assert!("1.5".parse::<AlphaChoice>().is_err());
        assert!("x".parse::<AlphaChoice>().is_err());
        assert_eq!(
            serde_json::to_string(&AlphaChoice::Auto).unwrap(),
            "\"auto\""
        );
    }
}
