//! Evaluation of the sup-inf bound: for a mean budget `t` and correlation
//! weight `alpha`, minimize `g(P_pq, alpha) / E h(p)` over the two-block
//! extreme points, then maximize over `alpha`, then locate the largest `t`
//! whose bound still exceeds 1.
//!
//! The inner minimization is a uniform grid over `(a1, a2, b1, b2)`
//! followed by multistart cyclic coordinate golden-section refinement. The
//! objective is only piecewise smooth (the median in `phi` switches
//! branches), so no derivatives are used.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{extreme_parts, ratio_objective, Branch, ExtremeFamily};
use crate::error::{Error, Result};
use crate::scalar::Probability;
use crate::search::{bisect_boundary, golden_max, golden_min};

/// Correlation weight of the published certificate.
pub const REFERENCE_ALPHA: f64 = 0.035;
/// Mean budget of the published certificate.
pub const REFERENCE_T: f64 = 0.382_34;
/// Published value of the inner infimum at the reference point.
pub const REFERENCE_RATIO: f64 = 1.000_008_89;
/// Published minimizer: `a1 = a2 = b1 = a`, `b2 = 1`.
pub const REFERENCE_A: f64 = 0.330_062_2;
pub const REFERENCE_BETA: f64 = 0.156_067_6;
/// `(3 - sqrt 5) / 2`, the threshold reached without correlation.
pub const GOLDEN_THRESHOLD: f64 = 0.381_966_011_250_105_1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub grid_points_per_axis: usize,
    pub refine_rounds: usize,
    pub multistart_count: usize,
    pub param_tol: f64,
    pub objective_tol: f64,
    /// Restrict the second block to `b2 = 1`.
    pub b2_pinned_to_one: bool,
    /// Minimum gap `b - t` on the two-block branch.
    pub epsilon_boundary: f64,
    /// Bracket width at which the search over `alpha` stops.
    pub alpha_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_points_per_axis: 64,
            refine_rounds: 6,
            multistart_count: 16,
            param_tol: 1e-10,
            objective_tol: 1e-12,
            b2_pinned_to_one: false,
            epsilon_boundary: 1e-9,
            alpha_tol: 1e-4,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points_per_axis < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid_points_per_axis = {} (need >= 2)",
                self.grid_points_per_axis
            )));
        }
        if self.multistart_count < 1 {
            return Err(Error::InvalidConfig("multistart_count must be >= 1".into()));
        }
        for (name, v) in [
            ("param_tol", self.param_tol),
            ("objective_tol", self.objective_tol),
            ("epsilon_boundary", self.epsilon_boundary),
            ("alpha_tol", self.alpha_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} = {v} must be > 0")));
            }
        }
        Ok(())
    }

    fn spacing(&self) -> f64 {
        1.0 / (self.grid_points_per_axis - 1) as f64
    }
}

/// Flat view of an extreme point for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArgminRecord {
    pub a1: f64,
    pub a2: f64,
    pub b1: Option<f64>,
    pub b2: Option<f64>,
    pub beta: f64,
}

impl From<&ExtremeFamily> for ArgminRecord {
    fn from(f: &ExtremeFamily) -> Self {
        ArgminRecord {
            a1: f.a1.get(),
            a2: f.a2.get(),
            b1: f.b.map(|b| b.0.get()),
            b2: f.b.map(|b| b.1.get()),
            beta: f.beta(),
        }
    }
}

impl ArgminRecord {
    pub fn to_family(&self, t: f64) -> Result<ExtremeFamily> {
        let b = match (self.b1, self.b2) {
            (Some(b1), Some(b2)) => Some((b1, b2)),
            _ => None,
        };
        ExtremeFamily::from_raw(self.a1, self.a2, b, t)
    }

    pub fn a(&self) -> f64 {
        (self.a1 + self.a2) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerInfReport {
    pub alpha: f64,
    pub t: f64,
    pub min_ratio: f64,
    pub argmin: ArgminRecord,
    pub branch: Branch,
    pub evaluations: u64,
    pub refined: bool,
    /// The minimizer sits within `1e-6` of the open constraint `b > t`.
    pub near_boundary: bool,
}

impl InnerInfReport {
    pub fn family(&self) -> Result<ExtremeFamily> {
        self.argmin.to_family(self.t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSample {
    pub alpha: f64,
    pub min_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaHatCertificate {
    pub t: f64,
    pub alpha_star: f64,
    /// Inner infimum at `alpha_star`: a lower bound on the sup-inf value,
    /// up to the inner minimizer's search error.
    pub gamma_hat_lower: f64,
    pub inner_report: InnerInfReport,
    /// Every `alpha` evaluated, in evaluation order.
    pub alpha_samples: Vec<AlphaSample>,
    pub wall_time_ms: u64,
}

impl GammaHatCertificate {
    /// True when the bound certifies an element of frequency at least `t`.
    pub fn certifies(&self, margin: f64) -> bool {
        self.gamma_hat_lower > 1.0 + margin
    }
}

/// A candidate `(a1, a2, b1, b2)`; `b` is `None` on the single-block branch.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    a1: f64,
    a2: f64,
    b: Option<(f64, f64)>,
}

impl Point {
    fn key(&self) -> [f64; 4] {
        let (b1, b2) = self.b.unwrap_or((-1.0, -1.0));
        [self.a1, self.a2, b1, b2]
    }

    fn dims(&self) -> usize {
        if self.b.is_some() {
            4
        } else {
            2
        }
    }

    fn get(&self, i: usize) -> f64 {
        match i {
            0 => self.a1,
            1 => self.a2,
            2 => self.b.unwrap().0,
            _ => self.b.unwrap().1,
        }
    }

    fn with(&self, i: usize, v: f64) -> Point {
        let mut p = *self;
        match i {
            0 => p.a1 = v,
            1 => p.a2 = v,
            2 => p.b = p.b.map(|(_, b2)| (v, b2)),
            _ => p.b = p.b.map(|(b1, _)| (b1, v)),
        }
        p
    }
}

#[derive(Debug, Clone, Copy)]
struct Scored {
    value: f64,
    point: Point,
}

fn cmp_scored(x: &Scored, y: &Scored) -> Ordering {
    x.value.total_cmp(&y.value).then_with(|| {
        let (kx, ky) = (x.point.key(), y.point.key());
        kx.iter()
            .zip(ky.iter())
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// The ratio on a fixed `(alpha, t)` slice.
struct Objective {
    alpha: f64,
    t: f64,
    eps: f64,
    pinned: bool,
}

impl Objective {
    /// `None` for infeasible or degenerate points.
    #[inline]
    fn eval(&self, p: &Point) -> Option<f64> {
        let a = 0.5 * (p.a1 + p.a2);
        if a > self.t {
            return None;
        }
        let beta = match p.b {
            None => 0.0,
            Some((b1, b2)) => {
                let b = 0.5 * (b1 + b2);
                if b < self.t + self.eps || b > 1.0 {
                    return None;
                }
                (self.t - a) / (b - a)
            }
        };
        let (indep, corr, eh) = extreme_parts(p.a1, p.a2, p.b, beta);
        if eh <= 0.0 {
            return None;
        }
        Some(((1.0 - self.alpha) * indep + self.alpha * corr) / eh)
    }

    /// Feasible interval of coordinate `i` with the others held fixed.
    fn interval(&self, p: &Point, i: usize) -> (f64, f64) {
        let two_t = 2.0 * self.t;
        let two_b_min = 2.0 * (self.t + self.eps);
        match i {
            0 => (0.0, (two_t - p.a2).min(1.0)),
            1 => (0.0, (two_t - p.a1).min(1.0)),
            2 => {
                let b2 = p.b.unwrap().1;
                ((two_b_min - b2).max(0.0), 1.0)
            }
            _ => {
                if self.pinned {
                    (1.0, 1.0)
                } else {
                    let b1 = p.b.unwrap().0;
                    ((two_b_min - b1).max(0.0), 1.0)
                }
            }
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t < 0.5 {
        Ok(())
    } else {
        Err(Error::EmptyFeasible(t))
    }
}

/// Keeps the `cap` smallest entries under [`cmp_scored`].
fn push_bounded(best: &mut Vec<Scored>, s: Scored, cap: usize) {
    if best.len() == cap {
        if cmp_scored(&s, best.last().unwrap()) != Ordering::Less {
            return;
        }
        best.pop();
    }
    let pos = best
        .binary_search_by(|x| cmp_scored(x, &s))
        .unwrap_or_else(|e| e);
    best.insert(pos, s);
}

/// Grid phase: returns the best `cap` grid points over both branches and
/// the number of objective evaluations.
fn grid_phase(obj: &Objective, cfg: &SearchConfig, cap: usize) -> (Vec<Scored>, u64) {
    let n = cfg.grid_points_per_axis;
    let h = cfg.spacing();
    let axis: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    // canonical a1 <= a2 with (a1 + a2) / 2 <= t
    let a_pairs: Vec<(f64, f64)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| (axis[i], axis[j]))
        .filter(|(x, y)| 0.5 * (x + y) <= obj.t)
        .collect();
    let b_pairs: Vec<(f64, f64)> = if cfg.b2_pinned_to_one {
        axis.iter().map(|&b1| (b1, 1.0)).collect()
    } else {
        (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .map(|(i, j)| (axis[i], axis[j]))
            .collect()
    };
    let b_pairs: Vec<(f64, f64)> = b_pairs
        .into_iter()
        .filter(|(x, y)| 0.5 * (x + y) >= obj.t + obj.eps)
        .collect();

    let partials: Vec<(Vec<Scored>, u64)> = a_pairs
        .par_iter()
        .map(|&(a1, a2)| {
            let mut best = Vec::with_capacity(cap + 1);
            let mut evals = 0u64;
            let single = Point { a1, a2, b: None };
            evals += 1;
            if let Some(v) = obj.eval(&single) {
                push_bounded(
                    &mut best,
                    Scored {
                        value: v,
                        point: single,
                    },
                    cap,
                );
            }
            for &b in &b_pairs {
                let p = Point { a1, a2, b: Some(b) };
                evals += 1;
                if let Some(v) = obj.eval(&p) {
                    push_bounded(&mut best, Scored { value: v, point: p }, cap);
                }
            }
            (best, evals)
        })
        .collect();

    let mut best = Vec::with_capacity(cap + 1);
    let mut evals = 0;
    for (part, e) in partials {
        evals += e;
        for s in part {
            push_bounded(&mut best, s, cap);
        }
    }
    (best, evals)
}

/// Picks up to `k` starts from sorted grid candidates, at least two grid
/// steps apart, always including the best point of each branch.
fn select_starts(candidates: &[Scored], k: usize, h: f64) -> Vec<Scored> {
    let mut starts: Vec<Scored> = Vec::new();
    for want_single in [false, true] {
        if let Some(s) = candidates
            .iter()
            .find(|s| s.point.b.is_none() == want_single)
        {
            starts.push(*s);
        }
    }
    let far = |x: &Point, y: &Point| {
        if x.b.is_some() != y.b.is_some() {
            return true;
        }
        (0..x.dims())
            .map(|i| (x.get(i) - y.get(i)).abs())
            .fold(0.0, f64::max)
            > 1.5 * h
    };
    for c in candidates {
        if starts.len() >= k {
            break;
        }
        if starts.iter().all(|s| far(&s.point, &c.point)) {
            starts.push(*c);
        }
    }
    starts.truncate(k.max(1));
    starts.sort_by(cmp_scored);
    starts
}

/// Cyclic coordinate golden-section descent from `start`. Round `r` uses
/// brackets of half-width `2h / 2^r` around the current coordinate.
fn refine(obj: &Objective, cfg: &SearchConfig, start: Scored) -> (Scored, u64) {
    const MAX_CYCLES: usize = 200;
    let mut cur = start;
    let mut evals = 0u64;
    let h = cfg.spacing();
    for round in 0..cfg.refine_rounds {
        let width = 2.0 * h / (1u64 << round.min(60)) as f64;
        for _ in 0..MAX_CYCLES {
            let before = cur.value;
            for i in 0..cur.point.dims() {
                let (lo, hi) = obj.interval(&cur.point, i);
                let x = cur.point.get(i);
                let (l, u) = ((x - width).max(lo), (x + width).min(hi));
                if u < l {
                    continue;
                }
                let base = cur.point;
                let line = golden_min(
                    |v| obj.eval(&base.with(i, v)).unwrap_or(f64::INFINITY),
                    l,
                    u,
                    cfg.param_tol,
                );
                evals += line.evaluations as u64;
                if line.value < cur.value {
                    cur = Scored {
                        value: line.value,
                        point: base.with(i, line.x),
                    };
                }
            }
            if before - cur.value <= cfg.objective_tol {
                break;
            }
        }
    }
    (cur, evals)
}

/// Inner infimum of the ratio over the extreme-point family at fixed
/// `(alpha, t)`.
pub fn inner_inf(alpha: Probability, t: Probability, cfg: &SearchConfig) -> Result<InnerInfReport> {
    check_t(t.get())?;
    cfg.validate()?;
    let obj = Objective {
        alpha: alpha.get(),
        t: t.get(),
        eps: cfg.epsilon_boundary,
        pinned: cfg.b2_pinned_to_one,
    };
    let pool = (cfg.multistart_count * 32).max(64);
    let (candidates, mut evaluations) = grid_phase(&obj, cfg, pool);
    let starts = select_starts(&candidates, cfg.multistart_count, cfg.spacing());
    if starts.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "no feasible grid point at t = {} with {} points per axis",
            t.get(),
            cfg.grid_points_per_axis
        )));
    }

    let refined: Vec<(Scored, u64)> = if cfg.refine_rounds == 0 {
        starts.iter().map(|s| (*s, 0)).collect()
    } else {
        starts.par_iter().map(|s| refine(&obj, cfg, *s)).collect()
    };
    let mut best = refined[0].0;
    for (s, e) in &refined {
        evaluations += e;
        if cmp_scored(s, &best) == Ordering::Less {
            best = *s;
        }
    }

    let p = best.point;
    let family = ExtremeFamily::from_raw(p.a1, p.a2, p.b, t.get())?;
    let min_ratio = ratio_objective(&family, alpha)?;
    let near_boundary = family.b_mean().is_some_and(|b| b - t.get() < 1e-6);
    Ok(InnerInfReport {
        alpha: alpha.get(),
        t: t.get(),
        min_ratio,
        argmin: ArgminRecord::from(&family),
        branch: family.branch(),
        evaluations,
        refined: cfg.refine_rounds > 0,
        near_boundary,
    })
}

/// Maximizes the inner infimum over `alpha`: evaluates every grid value,
/// then golden-section refines between the best value's neighbours. The
/// inner infimum is a pointwise minimum of affine functions of `alpha`,
/// hence concave, so the refinement bracket is unimodal.
///
/// A single-value grid is evaluated as is.
pub fn gamma_hat(
    t: Probability,
    alpha_grid: &[Probability],
    cfg: &SearchConfig,
) -> Result<GammaHatCertificate> {
    check_t(t.get())?;
    if alpha_grid.is_empty() {
        return Err(Error::InvalidConfig("alpha grid is empty".into()));
    }
    let started = clock::now();
    let mut grid: Vec<f64> = alpha_grid.iter().map(|a| a.get()).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut samples = Vec::new();
    let mut reports = Vec::new();
    for &a in &grid {
        let r = inner_inf(Probability::saturating(a), t, cfg)?;
        samples.push(AlphaSample {
            alpha: a,
            min_ratio: r.min_ratio,
        });
        reports.push(r);
    }
    let (mut best_idx, _) = reports
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.min_ratio.total_cmp(&y.1.min_ratio).then(y.0.cmp(&x.0)))
        .unwrap();
    let mut best = reports.swap_remove(best_idx);

    if grid.len() >= 2 {
        best_idx = grid.iter().position(|&a| a == best.alpha).unwrap();
        let left = if best_idx > 0 {
            grid[best_idx - 1]
        } else {
            grid[0]
        };
        let right = grid.get(best_idx + 1).copied().unwrap_or(grid[best_idx]);
        let step = (best.alpha - left).max(right - best.alpha);
        let (lo, hi) = ((best.alpha - step).max(0.0), (best.alpha + step).min(1.0));
        let mut err = None;
        let mut extra = Vec::new();
        golden_max(
            |a| match inner_inf(Probability::saturating(a), t, cfg) {
                Ok(r) => {
                    let v = r.min_ratio;
                    extra.push(r);
                    v
                }
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NEG_INFINITY
                }
            },
            lo,
            hi,
            cfg.alpha_tol,
        );
        if let Some(e) = err {
            return Err(e);
        }
        for r in extra {
            samples.push(AlphaSample {
                alpha: r.alpha,
                min_ratio: r.min_ratio,
            });
            if r.min_ratio > best.min_ratio {
                best = r;
            }
        }
    }

    Ok(GammaHatCertificate {
        t: t.get(),
        alpha_star: best.alpha,
        gamma_hat_lower: best.min_ratio,
        inner_report: best,
        alpha_samples: samples,
        wall_time_ms: clock::elapsed_ms(started),
    })
}

/// `[0, 0.02, ..., 0.2]`: the default `alpha` sweep.
pub fn default_alpha_grid() -> Vec<Probability> {
    (0..=10)
        .map(|i| Probability::saturating(i as f64 * 0.02))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TmaxSettings {
    pub lo: f64,
    pub hi: f64,
    pub margin: f64,
    /// Bisection stops when the bracket is narrower than this.
    pub t_tol: f64,
    pub alpha_grid: Vec<f64>,
}

impl Default for TmaxSettings {
    fn default() -> Self {
        TmaxSettings {
            lo: 0.37,
            hi: 0.40,
            margin: 1e-7,
            t_tol: 1e-7,
            alpha_grid: (0..=8).map(|i| i as f64 * 0.01).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TmaxReport {
    /// Largest `t` at which the bound was certified above `1 + margin`.
    pub t_certified: f64,
    /// Smallest `t` at which it was not.
    pub t_failed: f64,
    pub margin: f64,
    pub lo: f64,
    pub hi: f64,
    pub lo_gamma_hat: f64,
    pub hi_gamma_hat: f64,
    pub bisection_steps: usize,
    pub certificate: GammaHatCertificate,
    pub wall_time_ms: u64,
}

pub fn find_tmax(cfg: &SearchConfig, margin: f64) -> Result<TmaxReport> {
    find_tmax_with(
        cfg,
        &TmaxSettings {
            margin,
            ..TmaxSettings::default()
        },
    )
}

/// Bisection on `t` for the predicate `gamma_hat(t) > 1 + margin`,
/// assuming it holds below the threshold and fails above it.
pub fn find_tmax_with(cfg: &SearchConfig, s: &TmaxSettings) -> Result<TmaxReport> {
    if !(s.margin.is_finite() && s.margin > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "margin = {} must be > 0",
            s.margin
        )));
    }
    if !(s.lo < s.hi && s.t_tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "bad bracket [{}, {}]",
            s.lo, s.hi
        )));
    }
    let started = clock::now();
    let alphas: Vec<Probability> = s
        .alpha_grid
        .iter()
        .map(|&a| Probability::named("alpha", a))
        .collect::<Result<_>>()?;
    let eval = |t: f64| gamma_hat(Probability::named("t", t)?, &alphas, cfg);

    let lo_cert = eval(s.lo)?;
    let hi_cert = eval(s.hi)?;
    if !lo_cert.certifies(s.margin) || hi_cert.certifies(s.margin) {
        return Err(Error::BracketFailure {
            lo: s.lo,
            hi: s.hi,
            lo_value: lo_cert.gamma_hat_lower,
            hi_value: hi_cert.gamma_hat_lower,
            threshold: 1.0 + s.margin,
        });
    }

    let mut best = lo_cert.clone();
    let mut steps = 0;
    let mut err = None;
    let (t_lo, t_hi) = bisect_boundary(
        |t| {
            steps += 1;
            match eval(t) {
                Ok(c) if c.certifies(s.margin) => {
                    best = c;
                    true
                }
                Ok(_) => false,
                Err(e) => {
                    err.get_or_insert(e);
                    false
                }
            }
        },
        s.lo,
        s.hi,
        s.t_tol,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(TmaxReport {
        t_certified: t_lo,
        t_failed: t_hi,
        margin: s.margin,
        lo: s.lo,
        hi: s.hi,
        lo_gamma_hat: lo_cert.gamma_hat_lower,
        hi_gamma_hat: hi_cert.gamma_hat_lower,
        bisection_steps: steps,
        certificate: best,
        wall_time_ms: clock::elapsed_ms(started),
    })
}

/// Locates where `inner_inf(0, t) - 1` changes sign on `[lo, hi]`.
pub fn zero_alpha_crossing(cfg: &SearchConfig, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let above = |t: f64| -> Result<bool> {
        Ok(inner_inf(Probability::ZERO, Probability::named("t", t)?, cfg)?.min_ratio > 1.0)
    };
    if !above(lo)? || above(hi)? {
        return Err(Error::BracketFailure {
            lo,
            hi,
            lo_value: f64::NAN,
            hi_value: f64::NAN,
            threshold: 1.0,
        });
    }
    let mut err = None;
    let (l, h) = bisect_boundary(
        |t| match above(t) {
            Ok(b) => b,
            Err(e) => {
                err.get_or_insert(e);
                false
            }
        },
        lo,
        hi,
        tol,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(0.5 * (l + h)),
    }
}

/// Tolerances for [`verify_reference_point`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTolerances {
    pub ratio: f64,
    pub a: f64,
    pub beta: f64,
}

impl Default for ReferenceTolerances {
    fn default() -> Self {
        ReferenceTolerances {
            ratio: 2e-5,
            a: 1e-3,
            beta: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub quantity: String,
    pub expected: f64,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    pub passed: bool,
    pub rows: Vec<CheckRow>,
    pub certificate: GammaHatCertificate,
}

/// Runs the inner infimum at the published `(alpha, t)` and compares the
/// minimum and minimizer against the published values.
pub fn check_reference_point(
    cfg: &SearchConfig,
    tol: &ReferenceTolerances,
) -> Result<ReferenceCheck> {
    let started = clock::now();
    let report = inner_inf(
        Probability::saturating(REFERENCE_ALPHA),
        Probability::saturating(REFERENCE_T),
        cfg,
    )?;
    let a = report.argmin.a();
    let beta = report.argmin.beta;
    let row = |quantity: &str, expected: f64, measured: f64, tolerance: f64| CheckRow {
        quantity: quantity.to_string(),
        expected,
        measured,
        tolerance,
        pass: (measured - expected).abs() <= tolerance,
    };
    let rows = vec![
        row("min_ratio", REFERENCE_RATIO, report.min_ratio, tol.ratio),
        row("a", REFERENCE_A, a, tol.a),
        row("beta", REFERENCE_BETA, beta, tol.beta),
    ];
    let passed = report.branch == Branch::BetaPositive && rows.iter().all(|r| r.pass);
    Ok(ReferenceCheck {
        passed,
        rows,
        certificate: GammaHatCertificate {
            t: REFERENCE_T,
            alpha_star: REFERENCE_ALPHA,
            gamma_hat_lower: report.min_ratio,
            alpha_samples: vec![AlphaSample {
                alpha: REFERENCE_ALPHA,
                min_ratio: report.min_ratio,
            }],
            inner_report: report,
            wall_time_ms: clock::elapsed_ms(started),
        },
    })
}

/// [`check_reference_point`] with default tolerances, as a `Result`.
pub fn verify_reference_point(cfg: &SearchConfig) -> Result<GammaHatCertificate> {
    let check = check_reference_point(cfg, &ReferenceTolerances::default())?;
    if check.passed {
        Ok(check.certificate)
    } else {
        let r = &check.certificate.inner_report;
        Err(Error::VerificationFailed {
            min_ratio: r.min_ratio,
            a: r.argmin.a(),
            beta: r.argmin.beta,
        })
    }
}

mod clock {
    #[cfg(not(target_arch = "wasm32"))]
    pub fn now() -> Option<std::time::Instant> {
        Some(std::time::Instant::now())
    }

    #[cfg(target_arch = "wasm32")]
    pub fn now() -> Option<()> {
        None
    }

    #[cfg(not(target_arch = "wasm32"))]
    pub fn elapsed_ms(start: Option<std::time::Instant>) -> u64 {
        start.map_or(0, |s| s.elapsed().as_millis() as u64)
    }

    #[cfg(target_arch = "wasm32")]
    pub fn elapsed_ms(_start: Option<()>) -> u64 {
        0
    }
}
