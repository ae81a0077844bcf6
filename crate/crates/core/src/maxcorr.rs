//! Pearson and maximal correlation of finite joint distributions.
//!
//! The maximal correlation is the second largest singular value of
//! `P(x, y) / sqrt(P_X(x) P_Y(y))`, restricted to symbols of positive
//! marginal mass. The largest singular value is always 1 and is checked.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Probability;

/// Total-mass tolerance for [`JointDist`].
pub const JOINT_MASS_TOL: f64 = 1e-12;
/// Allowed deviation of the top singular value from 1.
pub const TOP_SINGULAR_TOL: f64 = 1e-9;

/// A joint pmf on a finite `X x Y` grid, optionally with real labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDist {
    #[serde(skip_serializing_if = "Option::is_none")]
    x_labels: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y_labels: Option<Vec<f64>>,
    matrix: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct JointRepr {
    #[serde(default)]
    x_labels: Option<Vec<f64>>,
    #[serde(default)]
    y_labels: Option<Vec<f64>>,
    matrix: Vec<Vec<f64>>,
}

impl<'de> Deserialize<'de> for JointDist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = JointRepr::deserialize(d)?;
        let mut j = JointDist::new(r.matrix).map_err(serde::de::Error::custom)?;
        if let (Some(x), Some(y)) = (r.x_labels.clone(), r.y_labels.clone()) {
            j = j.with_labels(x, y).map_err(serde::de::Error::custom)?;
        } else if r.x_labels.is_some() || r.y_labels.is_some() {
            return Err(serde::de::Error::custom(
                "x_labels and y_labels must be given together",
            ));
        }
        Ok(j)
    }
}

impl JointDist {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDistribution("empty joint matrix".into()));
        }
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidDistribution("ragged joint matrix".into()));
        }
        if let Some(v) = matrix
            .iter()
            .flatten()
            .find(|v| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidDistribution(format!(
                "entry {v} is not a mass"
            )));
        }
        let total: f64 = matrix.iter().flatten().sum();
        if (total - 1.0).abs() > JOINT_MASS_TOL {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        Ok(JointDist {
            x_labels: None,
            y_labels: None,
            matrix,
        })
    }

    pub fn with_labels(mut self, x_labels: Vec<f64>, y_labels: Vec<f64>) -> Result<Self> {
        if x_labels.len() != self.rows() || y_labels.len() != self.cols() {
            return Err(Error::InvalidDistribution(format!(
                "labels {}x{} for a {}x{} joint",
                x_labels.len(),
                y_labels.len(),
                self.rows(),
                self.cols()
            )));
        }
        self.x_labels = Some(x_labels);
        self.y_labels = Some(y_labels);
        Ok(self)
    }

    /// Independent coupling `P_X x P_Y`.
    pub fn product(px: &[f64], py: &[f64]) -> Result<Self> {
        JointDist::new(
            px.iter()
                .map(|&a| py.iter().map(|&b| a * b).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn x_labels(&self) -> Option<&[f64]> {
        self.x_labels.as_deref()
    }

    pub fn y_labels(&self) -> Option<&[f64]> {
        self.y_labels.as_deref()
    }

    pub fn x_marginal(&self) -> Vec<f64> {
        self.matrix.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn y_marginal(&self) -> Vec<f64> {
        (0..self.cols())
            .map(|j| self.matrix.iter().map(|r| r[j]).sum())
            .collect()
    }

    /// Singular values of the normalized matrix over the support, in
    /// decreasing order.
    pub fn normalized_singular_values(&self) -> Result<Vec<f64>> {
        let px = self.x_marginal();
        let py = self.y_marginal();
        let xs: Vec<usize> = (0..px.len()).filter(|&i| px[i] > 0.0).collect();
        let ys: Vec<usize> = (0..py.len()).filter(|&j| py[j] > 0.0).collect();
        let m = DMatrix::from_fn(xs.len(), ys.len(), |i, j| {
            let (x, y) = (xs[i], ys[j]);
            self.matrix[x][y] / (px[x] * py[y]).sqrt()
        });
        let svd = m
            .try_svd(false, false, f64::EPSILON, 10_000)
            .ok_or(Error::RankDeficient {
                rows: xs.len(),
                cols: ys.len(),
            })?;
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        Ok(sv)
    }
}

/// Pearson correlation of the labelled joint; 0 when either variance is 0.
pub fn pearson(d: &JointDist) -> Result<f64> {
    let (xl, yl) = match (d.x_labels(), d.y_labels()) {
        (Some(x), Some(y)) => (x, y),
        _ => {
            return Err(Error::InvalidDistribution(
                "pearson needs x and y labels".into(),
            ))
        }
    };
    let px = d.x_marginal();
    let py = d.y_marginal();
    let mean = |p: &[f64], l: &[f64]| p.iter().zip(l).map(|(a, b)| a * b).sum::<f64>();
    let (mx, my) = (mean(&px, xl), mean(&py, yl));
    let var = |p: &[f64], l: &[f64], m: f64| {
        p.iter()
            .zip(l)
            .map(|(a, b)| a * (b - m) * (b - m))
            .sum::<f64>()
    };
    let (vx, vy) = (var(&px, xl, mx), var(&py, yl, my));
    if vx <= 0.0 || vy <= 0.0 {
        return Ok(0.0);
    }
    let mut cov = 0.0;
    for (i, row) in d.matrix().iter().enumerate() {
        for (j, &m) in row.iter().enumerate() {
            cov += m * (xl[i] - mx) * (yl[j] - my);
        }
    }
    Ok((cov / (vx * vy).sqrt()).clamp(-1.0, 1.0))
}

pub fn maximal_correlation(d: &JointDist) -> Result<f64> {
    let sv = d.normalized_singular_values()?;
    let top = sv[0];
    if (top - 1.0).abs() > TOP_SINGULAR_TOL {
        return Err(Error::NormalizationCheck(top));
    }
    Ok(sv.get(1).copied().unwrap_or(0.0).clamp(0.0, 1.0))
}

/// A joint distribution of `(X, Y)` conditioned on a finite symbol `U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalJoint {
    components: Vec<(f64, JointDist)>,
}

impl ConditionalJoint {
    pub fn new(components: Vec<(f64, JointDist)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDistribution("no conditioning symbols".into()));
        }
        if let Some((w, _)) = components
            .iter()
            .find(|(w, _)| !(w.is_finite() && *w > 0.0))
        {
            return Err(Error::InvalidDistribution(format!(
                "conditioning mass {w} must be positive"
            )));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > JOINT_MASS_TOL {
            return Err(Error::InvalidDistribution(format!(
                "conditioning masses sum to {total}"
            )));
        }
        Ok(ConditionalJoint { components })
    }

    pub fn components(&self) -> &[(f64, JointDist)] {
        &self.components
    }
}

/// Supremum over conditioning symbols of the conditional maximal
/// correlation.
pub fn conditional_maximal_correlation(c: &ConditionalJoint) -> Result<f64> {
    c.components()
        .iter()
        .map(|(_, d)| maximal_correlation(d))
        .try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
}

/// Tensor product of two couplings: `(X1, X2)` against `(Y1, Y2)` with the
/// pairs drawn independently. Row index is `x1 * |X2| + x2`.
pub fn product_coupling(d1: &JointDist, d2: &JointDist) -> JointDist {
    let (r1, c1, r2, c2) = (d1.rows(), d1.cols(), d2.rows(), d2.cols());
    let mut m = vec![vec![0.0; c1 * c2]; r1 * r2];
    for x1 in 0..r1 {
        for x2 in 0..r2 {
            for y1 in 0..c1 {
                for y2 in 0..c2 {
                    m[x1 * r2 + x2][y1 * c2 + y2] = d1.matrix[x1][y1] * d2.matrix[x2][y2];
                }
            }
        }
    }
    JointDist {
        x_labels: None,
        y_labels: None,
        matrix: m,
    }
}

/// The 2x2 coupling of Bernoulli(p) and Bernoulli(q) with `P(1, 1) = r`,
/// labelled by `{0, 1}`.
pub fn coupling_from_pq(p: Probability, q: Probability, r: Probability) -> Result<JointDist> {
    let (p, q, r) = (p.get(), q.get(), r.get());
    let lo = (p + q - 1.0).max(0.0);
    let hi = p.min(q);
    if r < lo || r > hi {
        return Err(Error::InfeasibleCorrelation { p, q, r, lo, hi });
    }
    let matrix = vec![vec![(1.0 + r - p - q).max(0.0), q - r], vec![p - r, r]];
    let total: f64 = matrix.iter().flatten().sum();
    let matrix = matrix
        .into_iter()
        .map(|row| row.into_iter().map(|v| v / total).collect())
        .collect();
    JointDist::new(matrix)?.with_labels(vec![0.0, 1.0], vec![0.0, 1.0])
}

/// `|r - pq| / sqrt(p(1-p)q(1-q))`, or 0 when a variance vanishes.
pub fn binary_correlation_formula(p: f64, q: f64, r: f64) -> f64 {
    let v = p * (1.0 - p) * q * (1.0 - q);
    if v <= 0.0 {
        0.0
    } else {
        (r - p * q).abs() / v.sqrt()
    }
}
