//! `enumerate` and `maxcorr`.

use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use ucsb::lab::{
    check_entropy_over, collect_or_closed, element_frequencies, min_pa_over, sample_or_closed,
    write_family_csv, EntropyViolation, FamilyRow, MAX_ENUM_N, MAX_N,
};
use ucsb::maxcorr::binary_correlation_formula;
use ucsb::{coupling_from_pq, maximal_correlation, pearson, Error, JointDist, Probability};

use crate::output::Run;
use crate::{usage, CliError, Outcome};

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnumerateArgs {
    /// Dimension of the cube, 1 to 5.
    #[arg(long)]
    pub n: usize,
    /// Random OR-closures to draw; required (and only allowed) at n = 5.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Flag families with p_A below this value.
    #[arg(long)]
    pub check_threshold: Option<f64>,
    /// Per-family CSV output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Check H* <= log2 |A| on every family with 2 <= |A| <= 16.
    #[arg(long)]
    pub check_entropy: bool,
    /// Tolerance for the entropy check.
    #[arg(long, default_value_t = 1e-6)]
    pub entropy_tol: f64,
    #[arg(long, default_value = "enumerate.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerateSummary {
    pub n: usize,
    /// Exhaustive, or the number of distinct sampled families.
    pub sampled: bool,
    pub family_count: usize,
    /// Minimum over all families except `{0^n}`.
    #[serde(rename = "min_pA")]
    pub min_pa: f64,
    pub witness_mask: String,
    pub witness_members: Vec<String>,
    pub threshold: Option<f64>,
    /// Masks of families with `p_A` below the threshold.
    pub flagged: Vec<String>,
    pub entropy_checked: Option<usize>,
    pub entropy_skipped: Option<usize>,
    pub violations: Vec<EntropyViolation>,
}

pub fn run_enumerate(args: &EnumerateArgs, mut run: Run) -> Outcome {
    if !(1..=MAX_N).contains(&args.n) {
        return Err(usage(format!("--n {} is outside 1..={MAX_N}", args.n)));
    }
    let mut families = match (args.n, args.samples) {
        (n, None) if n > MAX_ENUM_N => {
            return Err(usage(format!("--samples is required for n = {n}")));
        }
        (n, Some(_)) if n <= MAX_ENUM_N => {
            return Err(usage(format!("--samples applies only to n = {MAX_N}")));
        }
        (n, None) => collect_or_closed(n)?,
        (n, Some(s)) => sample_or_closed(n, s, args.seed)?,
    };
    let sampled = args.samples.is_some();
    if sampled {
        families.sort_by_key(|a| a.mask());
        families.dedup();
    }
    if let Some(th) = args.check_threshold {
        if !(0.0..=1.0).contains(&th) {
            return Err(usage(format!("--check-threshold {th} must lie in [0, 1]")));
        }
    }

    let min = min_pa_over(&families)
        .ok_or_else(|| CliError::Failed("no family other than {0^n}".into()))?;
    let mut flagged = Vec::new();
    if let Some(th) = args.check_threshold {
        for a in families.iter().filter(|a| !a.is_empty_set_only()) {
            if element_frequencies(a)?.p_a < th {
                flagged.push(format!("{:#x}", a.mask()));
            }
        }
    }

    let entropy = if args.check_entropy {
        Some(check_entropy_over(args.n, &families, args.entropy_tol)?)
    } else {
        None
    };

    if let Some(path) = &args.csv {
        let h_star = |mask: u32| {
            entropy
                .as_ref()
                .and_then(|r| r.rows.iter().find(|row| row.0 == mask).map(|row| row.1))
        };
        let rows = families
            .iter()
            .map(|a| FamilyRow::new(a, h_star(a.mask())))
            .collect::<Result<Vec<_>, Error>>()?;
        let mut buf = Vec::new();
        write_family_csv(&rows, &mut buf)?;
        run.write_bytes(path, &buf)?;
    }

    let summary = EnumerateSummary {
        n: args.n,
        sampled,
        family_count: families.len(),
        min_pa: min.min_value,
        witness_mask: format!("{:#x}", min.witness.mask()),
        witness_members: min.witness.member_strings(),
        threshold: args.check_threshold,
        flagged,
        entropy_checked: entropy.as_ref().map(|r| r.checked),
        entropy_skipped: entropy.as_ref().map(|r| r.skipped),
        violations: entropy.map(|r| r.violations).unwrap_or_default(),
    };
    run.write_json(&args.out, &summary)?;
    run.finish(&args.out)?;

    println!(
        "n = {}: {} {}families, min p_A = {} (witness {} = {{{}}})",
        summary.n,
        summary.family_count,
        if sampled { "sampled " } else { "" },
        summary.min_pa,
        summary.witness_mask,
        summary.witness_members.join(", ")
    );
    if let Some(th) = summary.threshold {
        println!("{} families with p_A < {th}", summary.flagged.len());
    }
    if let (Some(c), Some(s)) = (summary.entropy_checked, summary.entropy_skipped) {
        println!(
            "entropy check: {c} families, {s} skipped (|A| > 16), {} violations",
            summary.violations.len()
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MaxcorrArgs {
    /// JSON file with a joint distribution {"matrix": [[...]], ...}.
    #[arg(long, conflicts_with = "pq", required_unless_present = "pq")]
    pub joint: Option<PathBuf>,
    /// Binary pair as p,q,r with r = P(X = 1, Y = 1).
    #[arg(long)]
    pub pq: Option<String>,
    #[arg(long, default_value = "maxcorr.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxcorrReport {
    pub rows: usize,
    pub cols: usize,
    pub rho_m: f64,
    pub singular_values: Vec<f64>,
    /// Only for 2x2 joints.
    pub abs_pearson: Option<f64>,
    pub agrees: Option<bool>,
    /// Closed form `|r - pq| / sqrt(p(1-p)q(1-q))`, for `--pq`.
    pub formula: Option<f64>,
}

const AGREEMENT_TOL: f64 = 1e-9;

fn parse_pq(s: &str) -> Result<(Probability, Probability, Probability), CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(usage(format!("--pq expects p,q,r, got {s:?}")));
    }
    let mut v = [Probability::ZERO; 3];
    for (slot, (name, text)) in v.iter_mut().zip(["p", "q", "r"].into_iter().zip(parts)) {
        let x: f64 = text
            .parse()
            .map_err(|_| usage(format!("{name} = {text:?} is not a number")))?;
        *slot = Probability::named(name, x).map_err(|e| usage(e.to_string()))?;
    }
    Ok((v[0], v[1], v[2]))
}

pub fn run_maxcorr(args: &MaxcorrArgs, mut run: Run) -> Outcome {
    let (joint, formula) = match (&args.joint, &args.pq) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
            let joint: JointDist = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            (joint, None)
        }
        (None, Some(s)) => {
            let (p, q, r) = parse_pq(s)?;
            let joint = coupling_from_pq(p, q, r)?;
            (
                joint,
                Some(binary_correlation_formula(p.get(), q.get(), r.get())),
            )
        }
        (None, None) => return Err(usage("one of --joint or --pq is required".into())),
    };

    let rho_m = maximal_correlation(&joint)?;
    let singular_values = joint.normalized_singular_values()?;
    let abs_pearson = if joint.rows() == 2 && joint.cols() == 2 {
        let labelled = match joint.x_labels() {
            Some(_) => joint.clone(),
            None => joint.clone().with_labels(vec![0.0, 1.0], vec![0.0, 1.0])?,
        };
        Some(pearson(&labelled)?.abs())
    } else {
        None
    };
    let report = MaxcorrReport {
        rows: joint.rows(),
        cols: joint.cols(),
        rho_m,
        singular_values,
        abs_pearson,
        agrees: abs_pearson.map(|p| (p - rho_m).abs() <= AGREEMENT_TOL),
        formula,
    };
    run.write_json(&args.out, &report)?;
    run.finish(&args.out)?;

    println!("rho_m = {}", report.rho_m);
    if let (Some(p), Some(ok)) = (report.abs_pearson, report.agrees) {
        println!(
            "|pearson| = {p}  ({} to {AGREEMENT_TOL:e})",
            if ok { "agrees" } else { "DISAGREES" }
        );
    }
    Ok(())
}
