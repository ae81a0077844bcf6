//! Finite distributions on `[0, 1]` and symmetric distributions on
//! `[0, 1]^2`, the two-block extreme-point family, and the objective
//! `g(P_pq, alpha)` whose ratio to `E h(p)` lower-bounds the entropy gain
//! of an OR of two symmetric-coupled coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{h2, phi_rho1_raw, Entropy, Probability};

/// Atoms closer than this are merged.
pub const MERGE_TOL: f64 = 1e-12;
/// Allowed deviation of the total mass from 1.
pub const MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub value: Probability,
    pub mass: f64,
}

/// A finitely supported distribution on `[0, 1]`, atoms sorted by value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomDist {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct AtomDistRepr {
    atoms: Vec<Atom>,
}

impl<'de> Deserialize<'de> for AtomDist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = AtomDistRepr::deserialize(d)?;
        AtomDist::new(repr.atoms.into_iter().map(|a| (a.value, a.mass)))
            .map_err(serde::de::Error::custom)
    }
}

impl AtomDist {
    pub fn new(atoms: impl IntoIterator<Item = (Probability, f64)>) -> Result<Self> {
        let mut raw: Vec<(f64, f64)> = Vec::new();
        for (v, m) in atoms {
            if !(m.is_finite() && m >= 0.0) {
                return Err(Error::InvalidDistribution(format!("mass {m} at {v}")));
            }
            if m > 0.0 {
                raw.push((v.get(), m));
            }
        }
        raw.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<Atom> = Vec::with_capacity(raw.len());
        for (v, m) in raw {
            match merged.last_mut() {
                Some(last) if (v - last.value.get()).abs() <= MERGE_TOL => last.mass += m,
                _ => merged.push(Atom {
                    value: Probability::saturating(v),
                    mass: m,
                }),
            }
        }
        check_total(merged.iter().map(|a| a.mass))?;
        Ok(AtomDist { atoms: merged })
    }

    pub fn point(value: Probability) -> Self {
        AtomDist {
            atoms: vec![Atom { value, mass: 1.0 }],
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass * a.value.get()).sum()
    }

    /// Mass at `value` (after merging tolerance), 0 if absent.
    pub fn mass_at(&self, value: f64) -> f64 {
        self.atoms
            .iter()
            .find(|a| (a.value.get() - value).abs() <= MERGE_TOL)
            .map_or(0.0, |a| a.mass)
    }
}

fn check_total(masses: impl Iterator<Item = f64>) -> Result<()> {
    let total: f64 = masses.sum();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidDistribution(format!(
            "total mass {total} differs from 1"
        )));
    }
    Ok(())
}

/// One atom `(x, y)` of a joint distribution on `[0, 1]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairAtom {
    pub x: Probability,
    pub y: Probability,
    pub mass: f64,
}

/// A symmetric distribution on `[0, 1]^2`.
///
/// Stored as unordered pairs `x <= y` carrying the combined mass of `(x, y)`
/// and `(y, x)`; [`SymmetricPairDist::atoms`] expands back to ordered atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPairDist {
    pairs: Vec<PairAtom>,
}

impl SymmetricPairDist {
    /// Builds from unordered pairs; `(x, y)` and `(y, x)` are the same key.
    pub fn from_unordered(
        pairs: impl IntoIterator<Item = (Probability, Probability, f64)>,
    ) -> Result<Self> {
        let mut raw: Vec<(f64, f64, f64)> = Vec::new();
        for (x, y, m) in pairs {
            if !(m.is_finite() && m >= 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "mass {m} at ({x}, {y})"
                )));
            }
            if m > 0.0 {
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                raw.push((lo.get(), hi.get(), m));
            }
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut merged: Vec<PairAtom> = Vec::with_capacity(raw.len());
        for (x, y, m) in raw {
            if let Some(p) = merged
                .iter_mut()
                .find(|p| (p.x.get() - x).abs() <= MERGE_TOL && (p.y.get() - y).abs() <= MERGE_TOL)
            {
                p.mass += m;
            } else {
                merged.push(PairAtom {
                    x: Probability::saturating(x),
                    y: Probability::saturating(y),
                    mass: m,
                });
            }
        }
        check_total(merged.iter().map(|p| p.mass))?;
        Ok(SymmetricPairDist { pairs: merged })
    }

    /// Builds from ordered atoms, rejecting asymmetric input.
    pub fn from_ordered(atoms: impl IntoIterator<Item = PairAtom>) -> Result<Self> {
        let atoms: Vec<PairAtom> = atoms.into_iter().collect();
        for a in &atoms {
            let forward = ordered_mass(&atoms, a.x.get(), a.y.get());
            let backward = ordered_mass(&atoms, a.y.get(), a.x.get());
            if (forward - backward).abs() > MASS_TOL {
                return Err(Error::InvalidDistribution(format!(
                    "asymmetric: mass({}, {}) = {forward} but mass({}, {}) = {backward}",
                    a.x, a.y, a.y, a.x
                )));
            }
        }
        Self::from_unordered(atoms.into_iter().map(|a| (a.x, a.y, a.mass)))
    }

    /// The symmetrized pair `Q_{x,y} = (delta_(x,y) + delta_(y,x)) / 2`.
    pub fn q(x: Probability, y: Probability) -> Self {
        SymmetricPairDist {
            pairs: vec![PairAtom {
                x: if x <= y { x } else { y },
                y: if x <= y { y } else { x },
                mass: 1.0,
            }],
        }
    }

    /// Unordered storage: `x <= y`, mass combined over both orders.
    pub fn unordered(&self) -> &[PairAtom] {
        &self.pairs
    }

    /// Ordered atoms; off-diagonal pairs appear twice with half the mass.
    pub fn atoms(&self) -> Vec<PairAtom> {
        let mut out = Vec::with_capacity(2 * self.pairs.len());
        for p in &self.pairs {
            if p.x == p.y {
                out.push(*p);
            } else {
                let half = p.mass / 2.0;
                out.push(PairAtom {
                    x: p.x,
                    y: p.y,
                    mass: half,
                });
                out.push(PairAtom {
                    x: p.y,
                    y: p.x,
                    mass: half,
                });
            }
        }
        out
    }

    /// Mass of the ordered atom `(x, y)`.
    pub fn mass(&self, x: f64, y: f64) -> f64 {
        ordered_mass(&self.atoms(), x, y)
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        let lhs = self.pairs.iter().map(|p| (p.x, p.y, lambda * p.mass));
        let rhs = other
            .pairs
            .iter()
            .map(|p| (p.x, p.y, (1.0 - lambda) * p.mass));
        Self::from_unordered(lhs.chain(rhs))
    }

    /// First-coordinate marginal; equal to the second by symmetry.
    pub fn marginal(&self) -> AtomDist {
        let atoms = self.pairs.iter().flat_map(|p| {
            let half = p.mass / 2.0;
            [(p.x, half), (p.y, half)]
        });
        AtomDist::new(atoms).expect("marginal of a normalized joint is normalized")
    }

    /// Second-coordinate marginal, computed from the ordered atoms.
    pub fn second_marginal(&self) -> AtomDist {
        AtomDist::new(self.atoms().into_iter().map(|a| (a.y, a.mass)))
            .expect("marginal of a normalized joint is normalized")
    }
}

fn ordered_mass(atoms: &[PairAtom], x: f64, y: f64) -> f64 {
    atoms
        .iter()
        .filter(|a| (a.x.get() - x).abs() <= MERGE_TOL && (a.y.get() - y).abs() <= MERGE_TOL)
        .map(|a| a.mass)
        .sum()
}

#[derive(Serialize, Deserialize)]
struct PairDistRepr {
    atoms: Vec<PairAtom>,
}

impl Serialize for SymmetricPairDist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PairDistRepr {
            atoms: self.atoms(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymmetricPairDist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PairDistRepr::deserialize(d)?;
        SymmetricPairDist::from_ordered(repr.atoms).map_err(serde::de::Error::custom)
    }
}

/// Which block structure an extreme point has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// A single symmetrized pair `Q_{a1,a2}` with mean `a <= t`.
    BetaZero,
    /// `(1 - beta) Q_{a1,a2} + beta Q_{b1,b2}` with mean exactly `t`.
    BetaPositive,
}

/// An extreme point `(1 - beta) Q_{a1,a2} + beta Q_{b1,b2}` of the
/// symmetric distributions with mean at most `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremeFamily {
    pub a1: Probability,
    pub a2: Probability,
    /// `None` on the `beta = 0` branch.
    pub b: Option<(Probability, Probability)>,
    pub t: Probability,
    beta: f64,
}

impl ExtremeFamily {
    /// The `beta = 0` branch: a single block with `(a1 + a2) / 2 <= t`.
    pub fn single(a1: Probability, a2: Probability, t: Probability) -> Result<Self> {
        let a = (a1.get() + a2.get()) / 2.0;
        if a > t.get() {
            return Err(Error::InvalidExtreme(format!("a = {a} exceeds t = {t}")));
        }
        Ok(ExtremeFamily {
            a1,
            a2,
            b: None,
            t,
            beta: 0.0,
        })
    }

    /// Two blocks with `a <= t < b`; `beta = (t - a) / (b - a)` puts the
    /// mean exactly at `t`.
    pub fn two_block(
        a1: Probability,
        a2: Probability,
        b1: Probability,
        b2: Probability,
        t: Probability,
    ) -> Result<Self> {
        let a = (a1.get() + a2.get()) / 2.0;
        let b = (b1.get() + b2.get()) / 2.0;
        let t_ = t.get();
        if a > t_ {
            return Err(Error::InvalidExtreme(format!("a = {a} exceeds t = {t}")));
        }
        if b <= t_ {
            return Err(Error::InvalidExtreme(format!(
                "b = {b} must exceed t = {t}"
            )));
        }
        Ok(ExtremeFamily {
            a1,
            a2,
            b: Some((b1, b2)),
            t,
            beta: (t_ - a) / (b - a),
        })
    }

    /// From raw coordinates; `b = None` selects the single-block branch.
    pub fn from_raw(a1: f64, a2: f64, b: Option<(f64, f64)>, t: f64) -> Result<Self> {
        let a1 = Probability::named("a1", a1)?;
        let a2 = Probability::named("a2", a2)?;
        let t = Probability::named("t", t)?;
        match b {
            None => Self::single(a1, a2, t),
            Some((b1, b2)) => Self::two_block(
                a1,
                a2,
                Probability::named("b1", b1)?,
                Probability::named("b2", b2)?,
                t,
            ),
        }
    }

    pub fn a(&self) -> f64 {
        (self.a1.get() + self.a2.get()) / 2.0
    }

    pub fn b_mean(&self) -> Option<f64> {
        self.b.map(|(b1, b2)| (b1.get() + b2.get()) / 2.0)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn branch(&self) -> Branch {
        if self.b.is_some() {
            Branch::BetaPositive
        } else {
            Branch::BetaZero
        }
    }

    /// `(a1, a2, b1, b2)`; the `b` coordinates are NaN on the single-block
    /// branch.
    pub fn coords(&self) -> [f64; 4] {
        let (b1, b2) = self
            .b
            .map_or((f64::NAN, f64::NAN), |(x, y)| (x.get(), y.get()));
        [self.a1.get(), self.a2.get(), b1, b2]
    }
}

pub fn extreme_to_dist(f: &ExtremeFamily) -> SymmetricPairDist {
    let beta = f.beta();
    let mut pairs = vec![(f.a1, f.a2, 1.0 - beta)];
    if let Some((b1, b2)) = f.b {
        pairs.push((b1, b2, beta));
    }
    SymmetricPairDist::from_unordered(pairs).expect("extreme point masses sum to 1")
}

pub fn marginal(d: &SymmetricPairDist) -> AtomDist {
    d.marginal()
}

/// `E h(p)` under `d`.
pub fn mean_entropy(d: &AtomDist) -> Entropy {
    Entropy::from_bits(d.atoms().iter().map(|a| a.mass * h2(a.value.get())).sum())
}

/// The two-point correlation mixture `(1 - alpha) delta_0 + alpha delta_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoMixture {
    pub alpha: Probability,
}

impl RhoMixture {
    pub fn new(alpha: Probability) -> Self {
        RhoMixture { alpha }
    }

    /// `(1 - alpha) f(0) + alpha f(1)`.
    pub fn expect(&self, mut f: impl FnMut(Probability) -> f64) -> f64 {
        let a = self.alpha.get();
        (1.0 - a) * f(Probability::ZERO) + a * f(Probability::ONE)
    }
}

/// Entropy of `p OR q` for independent draws from the marginal.
pub fn independent_term(d: &SymmetricPairDist) -> f64 {
    let m = d.marginal();
    let atoms = m.atoms();
    let mut total = 0.0;
    for x in atoms {
        for y in atoms {
            let (p, q) = (x.value.get(), y.value.get());
            total += x.mass * y.mass * h2(p + q - p * q);
        }
    }
    total
}

/// `E h(phi(1, p, q))` under the joint `d`.
pub fn correlated_term(d: &SymmetricPairDist) -> f64 {
    d.unordered()
        .iter()
        .map(|a| a.mass * h2(phi_rho1_raw(a.x.get(), a.y.get())))
        .sum()
}

/// `g(P_pq, alpha)`: a correlation-free term over the product of marginals
/// plus a fully correlated term over the joint itself.
pub fn g_objective(d: &SymmetricPairDist, alpha: Probability) -> f64 {
    RhoMixture::new(alpha).expect(|rho| {
        if rho == Probability::ZERO {
            independent_term(d)
        } else {
            correlated_term(d)
        }
    })
}

pub fn ratio_objective(f: &ExtremeFamily, alpha: Probability) -> Result<f64> {
    let d = extreme_to_dist(f);
    let denom = mean_entropy(&d.marginal()).bits();
    if denom <= 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(g_objective(&d, alpha) / denom)
}

/// Allocation-free evaluation of the pieces of the ratio on an extreme
/// point: `(independent term, correlated term, E h(p))`. `b = None` is the
/// single-block branch.
#[inline]
pub(crate) fn extreme_parts(a1: f64, a2: f64, b: Option<(f64, f64)>, beta: f64) -> (f64, f64, f64) {
    let (b1, b2) = b.unwrap_or((0.0, 0.0));
    let wa = (1.0 - beta) / 2.0;
    let wb = beta / 2.0;
    let p = [a1, a2, b1, b2];
    let w = [wa, wa, wb, wb];
    let k = if b.is_some() { 4 } else { 2 };

    let or_h = |x: f64, y: f64| h2(x + y - x * y);
    let mut indep = 0.0;
    let mut eh = 0.0;
    for i in 0..k {
        eh += w[i] * h2(p[i]);
        indep += w[i] * w[i] * or_h(p[i], p[i]);
        for j in (i + 1)..k {
            indep += 2.0 * w[i] * w[j] * or_h(p[i], p[j]);
        }
    }
    let mut corr = (1.0 - beta) * h2(phi_rho1_raw(a1, a2));
    if b.is_some() {
        corr += beta * h2(phi_rho1_raw(b1, b2));
    }
    (indep, corr, eh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pr(x: f64) -> Probability {
        Probability::new(x).unwrap()
    }

    const A: f64 = 0.330_062_2;
    const T: f64 = 0.382_34;

    fn reference_family() -> ExtremeFamily {
        ExtremeFamily::two_block(pr(A), pr(A), pr(A), pr(1.0), pr(T)).unwrap()
    }

    #[test]
    fn extreme_single_block() {
        let f = ExtremeFamily::single(pr(0.3), pr(0.3), pr(0.38)).unwrap();
        let d = extreme_to_dist(&f);
        assert_eq!(
            d.atoms(),
            vec![PairAtom {
                x: pr(0.3),
                y: pr(0.3),
                mass: 1.0
            }]
        );
        let d0 = extreme_to_dist(&ExtremeFamily::single(pr(0.0), pr(0.0), pr(0.38)).unwrap());
        assert_eq!(d0.mass(0.0, 0.0), 1.0);
    }

    #[test]
    fn extreme_reference_point_masses() {
        let f = reference_family();
        assert!((f.beta() - 0.156_067_6).abs() < 1e-7);
        let d = extreme_to_dist(&f);
        assert_eq!(d.atoms().len(), 3);
        assert!((d.mass(A, A) - 0.843_932_4).abs() < 1e-7);
        assert!((d.mass(A, 1.0) - 0.078_033_8).abs() < 1e-7);
        assert!((d.mass(1.0, A) - 0.078_033_8).abs() < 1e-7);
        assert!((d.marginal().mean() - T).abs() < 1e-12);
    }

    #[test]
    fn extreme_rejects_bad_parameters() {
        assert!(ExtremeFamily::single(pr(0.5), pr(0.5), pr(0.4)).is_err());
        assert!(ExtremeFamily::two_block(pr(0.3), pr(0.3), pr(0.3), pr(0.4), pr(0.38)).is_err());
        assert!(ExtremeFamily::from_raw(0.3, 1.2, None, 0.38).is_err());
    }

    #[test]
    fn marginal_examples() {
        let m = SymmetricPairDist::q(pr(0.3), pr(0.5)).marginal();
        assert_eq!(m.atoms().len(), 2);
        assert_eq!(m.mass_at(0.3), 0.5);
        assert_eq!(m.mass_at(0.5), 0.5);

        let m = SymmetricPairDist::q(pr(0.4), pr(0.4)).marginal();
        assert_eq!(
            m.atoms(),
            &[Atom {
                value: pr(0.4),
                mass: 1.0
            }]
        );

        let m = extreme_to_dist(&reference_family()).marginal();
        // 1 - beta/2 and beta/2 with beta = 0.1560676
        assert!((m.mass_at(A) - 0.921_966_2).abs() < 1e-7);
        assert!((m.mass_at(1.0) - 0.078_033_8).abs() < 1e-7);
    }

    #[test]
    fn mean_entropy_examples() {
        assert_eq!(mean_entropy(&AtomDist::point(pr(0.5))).bits(), 1.0);
        let d = AtomDist::new([(pr(0.0), 0.5), (pr(1.0), 0.5)]).unwrap();
        assert_eq!(mean_entropy(&d).bits(), 0.0);
        assert!(
            (mean_entropy(&AtomDist::point(pr(0.3))).bits() - 0.881_290_899_230_693).abs() < 1e-12
        );
    }

    #[test]
    fn g_objective_examples() {
        let d = SymmetricPairDist::q(pr(0.0), pr(0.0));
        assert_eq!(g_objective(&d, pr(0.3)), 0.0);
        let d = SymmetricPairDist::q(pr(0.3), pr(0.3));
        assert!((g_objective(&d, pr(0.0)) - 0.999_711_441_752_810).abs() < 1e-12);
        let d = extreme_to_dist(&reference_family());
        let ratio = g_objective(&d, pr(0.035)) / mean_entropy(&d.marginal()).bits();
        assert!((ratio - 1.000_008_89).abs() < 1e-5, "{ratio}");
    }

    #[test]
    fn ratio_objective_examples() {
        let f = ExtremeFamily::single(pr(0.3), pr(0.3), pr(0.38)).unwrap();
        let r = ratio_objective(&f, pr(0.0)).unwrap();
        assert!((r - 1.134_371_684_338_838).abs() < 1e-10);

        let r = ratio_objective(&reference_family(), pr(0.035)).unwrap();
        assert!((r - 1.000_008_89).abs() < 1e-5);

        // a-block at (0, 0), b-block at (0, 1): every atom is 0 or 1
        let f = ExtremeFamily::two_block(pr(0.0), pr(0.0), pr(0.0), pr(1.0), pr(T)).unwrap();
        assert!((f.beta() - 2.0 * T).abs() < 1e-15);
        assert_eq!(
            ratio_objective(&f, pr(0.2)),
            Err(Error::DegenerateDenominator)
        );
    }

    #[test]
    fn fast_parts_match_general_path() {
        let fams = [
            reference_family(),
            ExtremeFamily::single(pr(0.1), pr(0.6), pr(0.38)).unwrap(),
            ExtremeFamily::two_block(pr(0.05), pr(0.2), pr(0.7), pr(0.9), pr(0.3)).unwrap(),
        ];
        for f in fams {
            let b = f.b.map(|(x, y)| (x.get(), y.get()));
            let (i, c, e) = extreme_parts(f.a1.get(), f.a2.get(), b, f.beta());
            let d = extreme_to_dist(&f);
            assert!((i - independent_term(&d)).abs() < 1e-14);
            assert!((c - correlated_term(&d)).abs() < 1e-14);
            assert!((e - mean_entropy(&d.marginal()).bits()).abs() < 1e-14);
        }
    }

    #[test]
    fn json_roundtrip_and_asymmetry_rejected() {
        let d = extreme_to_dist(&reference_family());
        let s = serde_json::to_string(&d).unwrap();
        let back: SymmetricPairDist = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);

        let bad = r#"{"atoms":[{"x":0.1,"y":0.2,"mass":0.7},{"x":0.2,"y":0.1,"mass":0.3}]}"#;
        assert!(serde_json::from_str::<SymmetricPairDist>(bad).is_err());

        let m = d.marginal();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with(r#"{"atoms":[{"value":"#));
        assert_eq!(serde_json::from_str::<AtomDist>(&s).unwrap(), m);
    }

    #[test]
    fn g_not_concave_in_the_distribution() {
        // Along the segment from delta_(x,x) to delta_(y,y) the independent
        // term is a quadratic in lambda whose curvature has the sign of
        // h(x|x) + h(y|y) - 2 h(x|y).
        let (x, y, lambda) = (0.938, 0.561, 0.627);
        let d1 = SymmetricPairDist::q(pr(x), pr(x));
        let d2 = SymmetricPairDist::q(pr(y), pr(y));
        let mixed = d1.mix(&d2, lambda).unwrap();
        let lhs = g_objective(&mixed, Probability::ZERO);
        let rhs = lambda * g_objective(&d1, Probability::ZERO)
            + (1.0 - lambda) * g_objective(&d2, Probability::ZERO);
        assert!(lhs < rhs - 0.05, "{lhs} vs {rhs}");
    }

    fn arb_pair_dist(values: Vec<f64>) -> impl Strategy<Value = SymmetricPairDist> {
        let n = values.len();
        prop::collection::vec(0.0..1.0f64, n * (n + 1) / 2).prop_filter_map(
            "zero total",
            move |w| {
                let total: f64 = w.iter().sum();
                if total < 1e-6 {
                    return None;
                }
                let mut pairs = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in i..n {
                        pairs.push((pr(values[i]), pr(values[j]), w[k] / total));
                        k += 1;
                    }
                }
                SymmetricPairDist::from_unordered(pairs).ok()
            },
        )
    }

    fn arb_two() -> impl Strategy<Value = (SymmetricPairDist, SymmetricPairDist)> {
        prop::collection::vec(0.0..=1.0f64, 2..5)
            .prop_flat_map(|vals| (arb_pair_dist(vals.clone()), arb_pair_dist(vals)))
    }

    proptest! {
        #[test]
        fn marginals_agree((d, _) in arb_two()) {
            let m1 = d.marginal();
            let m2 = d.second_marginal();
            prop_assert_eq!(m1.atoms().len(), m2.atoms().len());
            for (x, y) in m1.atoms().iter().zip(m2.atoms()) {
                prop_assert_eq!(x.value, y.value);
                prop_assert!((x.mass - y.mass).abs() < 1e-15);
            }
        }

        #[test]
        fn g_is_affine_in_alpha(d in arb_two().prop_map(|p| p.0), a in 0.0..=1.0f64) {
            let lhs = g_objective(&d, pr(a));
            let rhs = (1.0 - a) * g_objective(&d, Probability::ZERO) + a * g_objective(&d, Probability::ONE);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn g_at_alpha_zero_depends_only_on_marginal(x in 0.0..=1.0f64, y in 0.0..=1.0f64) {
            // Q_{x,y} and (delta_(x,x) + delta_(y,y)) / 2 share the marginal
            let coupled = SymmetricPairDist::q(pr(x), pr(y));
            let diag = SymmetricPairDist::from_unordered([(pr(x), pr(x), 0.5), (pr(y), pr(y), 0.5)]).unwrap();
            let a = g_objective(&coupled, Probability::ZERO);
            let b = g_objective(&diag, Probability::ZERO);
            prop_assert!((a - b).abs() < 1e-14);
        }

        #[test]
        fn extreme_mean_constraint(
            a1 in 0.0..=0.4f64, a2 in 0.0..=0.4f64, b1 in 0.5..=1.0f64, b2 in 0.5..=1.0f64, t in 0.4..0.5f64,
        ) {
            let f = ExtremeFamily::from_raw(a1, a2, Some((b1, b2)), t).unwrap();
            let d = extreme_to_dist(&f);
            prop_assert!((d.marginal().mean() - t).abs() < 1e-12);
            let single = ExtremeFamily::from_raw(a1, a2, None, t).unwrap();
            let mean = extreme_to_dist(&single).marginal().mean();
            prop_assert!((mean - (a1 + a2) / 2.0).abs() < 1e-15);
        }
    }
}
