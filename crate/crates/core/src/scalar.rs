//! Closed-form scalar building blocks: binary entropy, the correlation
//! window `[z1, z2]` and the median formula `phi` that gives the entropy
//! maximizing value of `P(X OR Y = 1)` under a maximal-correlation budget.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real number in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const HALF: Probability = Probability(0.5);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        Self::named("value", value)
    }

    /// Like [`Probability::new`] but reports `name` in the error.
    pub fn named(name: &'static str, value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::InvalidProbability { name, value })
        }
    }

    /// Clamps into `[0, 1]`. NaN maps to 0.
    pub fn saturating(value: f64) -> Self {
        if value.is_nan() {
            Probability(0.0)
        } else {
            Probability(value.clamp(0.0, 1.0))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn complement(self) -> Self {
        Probability(1.0 - self.0)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Entropy in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Entropy(f64);

impl Entropy {
    pub const ZERO: Entropy = Entropy(0.0);

    /// Negative inputs (rounding residue) are clamped to zero.
    pub fn from_bits(bits: f64) -> Self {
        Entropy(bits.max(0.0))
    }

    #[inline]
    pub fn bits(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Entropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// `-x log2 x` with `0 log 0 = 0`.
#[inline]
pub fn xlog2x_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy in bits, as a raw `f64`. Inputs outside `[0, 1]` are
/// clamped; this is the hot path used by the optimizer.
#[inline]
pub fn h2(a: f64) -> f64 {
    if a <= 0.0 || a >= 1.0 {
        0.0
    } else {
        -a * a.log2() - (1.0 - a) * (1.0 - a).log2()
    }
}

pub fn binary_entropy(a: Probability) -> Entropy {
    Entropy::from_bits(h2(a.get()))
}

/// Shannon entropy in bits of a (not necessarily normalized) mass vector.
/// Zero masses contribute nothing.
pub fn shannon_entropy(masses: &[f64]) -> Entropy {
    Entropy::from_bits(masses.iter().map(|&m| xlog2x_neg(m)).sum())
}

/// The window `z1 <= r <= z2` of joint masses `P(X=1, Y=1)` for which a
/// pair of Bernoulli(p), Bernoulli(q) bits has maximal correlation at most
/// `rho`.
#[inline]
pub fn z_bounds(rho: Probability, p: Probability, q: Probability) -> (f64, f64) {
    z_bounds_raw(rho.get(), p.get(), q.get())
}

#[inline]
fn z_bounds_raw(rho: f64, p: f64, q: f64) -> (f64, f64) {
    let pq = p * q;
    let spread = rho * ((p * (1.0 - p)) * (q * (1.0 - q))).sqrt();
    (pq - spread, pq + spread)
}

/// Middle element of the multiset `{x, y, z}`.
#[inline]
pub fn median3(x: f64, y: f64, z: f64) -> f64 {
    x.max(y).min(x.min(y).max(z))
}

/// Entropy-maximizing `P(X OR Y = 1)` over couplings of Bernoulli(p) and
/// Bernoulli(q) with maximal correlation at most `rho`.
///
/// The median can exceed 1 only through the `p + q` branch, which is not a
/// probability; the result is clamped to `[0, 1]`.
pub fn phi(rho: Probability, p: Probability, q: Probability) -> Probability {
    Probability::saturating(phi_raw(rho.get(), p.get(), q.get()))
}

#[inline]
pub(crate) fn phi_raw(rho: f64, p: f64, q: f64) -> f64 {
    let (z1, z2) = z_bounds_raw(rho, p, q);
    let s = p + q;
    median3(p.max(q).max(s - z2), 0.5, s.min(s - z1))
}

/// `phi` at `rho = 1`: `median{max(p, q), 1/2, min(p + q, 1)}`.
pub fn phi_rho1(p: Probability, q: Probability) -> Probability {
    Probability(phi_rho1_raw(p.get(), q.get()))
}

#[inline]
pub(crate) fn phi_rho1_raw(p: f64, q: f64) -> f64 {
    median3(p.max(q), 0.5, (p + q).min(1.0))
}
