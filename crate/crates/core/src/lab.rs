//! Small-dimension laboratory for OR-closed families `A` of `{0,1}^n`.
//!
//! A vector `x` in `{0,1}^n` is the integer whose bit `i` is `x_i`; a family
//! is a `2^n`-bit mask with bit `x` set when `x` is a member. With `n <= 5`
//! the mask fits in a `u32`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::max_weight_assignment;
use crate::error::{Error, Result};
use crate::scalar::{shannon_entropy, Entropy, Probability};
use crate::search::golden_max;

pub const MAX_N: usize = 5;
/// Largest `n` for exhaustive enumeration.
pub const MAX_ENUM_N: usize = 4;
/// Largest family handed to the coupling maximizer.
pub const MAX_COUPLING_SIZE: usize = 64;
/// Family-size cap for [`check_entropy_inequality`].
pub const ENTROPY_CHECK_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySet {
    n: usize,
    mask: u32,
}

impl FamilySet {
    pub fn new(n: usize, mask: u32) -> Result<Self> {
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::DimensionTooLarge(n));
        }
        let width = 1u32 << n;
        if width < 32 && mask >> width != 0 {
            return Err(Error::InvalidFamily(format!(
                "mask {mask:#x} has bits beyond 2^{n} points"
            )));
        }
        Ok(FamilySet { n, mask })
    }

    pub fn from_members(n: usize, members: &[u32]) -> Result<Self> {
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::DimensionTooLarge(n));
        }
        let mut mask = 0u32;
        for &x in members {
            if (x as u64) >= (1u64 << n) {
                return Err(Error::InvalidFamily(format!("{x} is not in {{0,1}}^{n}")));
            }
            mask |= 1 << x;
        }
        Self::new(n, mask)
    }

    /// The whole cube `{0,1}^n`.
    pub fn cube(n: usize) -> Result<Self> {
        let points = 1u64 << n;
        Self::new(n, ((1u64 << points) - 1) as u32)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, x: u32) -> bool {
        x < 32 && self.mask >> x & 1 == 1
    }

    pub fn members(&self) -> Vec<u32> {
        (0..32).filter(|&x| self.contains(x)).collect()
    }

    /// The family `{0^n}`, i.e. `{emptyset}`.
    pub fn is_empty_set_only(&self) -> bool {
        self.mask == 1
    }

    pub fn is_or_closed(&self) -> bool {
        is_or_closed(self)
    }

    /// Members as bit strings, element 1 first (e.g. `x = 0b01` is `"10"`).
    pub fn member_strings(&self) -> Vec<String> {
        self.members()
            .iter()
            .map(|&x| {
                (0..self.n)
                    .map(|i| if x >> i & 1 == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }
}

pub fn is_or_closed(a: &FamilySet) -> bool {
    let members = a.members();
    members
        .iter()
        .all(|&x| members.iter().all(|&y| a.contains(x | y)))
}

/// Smallest OR-closed superset.
pub fn or_closure(generators: &FamilySet) -> FamilySet {
    let mut mask = generators.mask;
    loop {
        let current = FamilySet {
            n: generators.n,
            mask,
        };
        let members = current.members();
        let mut next = mask;
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                next |= 1 << (x | y);
            }
        }
        if next == mask {
            return current;
        }
        mask = next;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frequencies {
    /// `freqs[i]` is the fraction of members containing element `i + 1`.
    pub freqs: Vec<f64>,
    pub p_a: f64,
}

pub fn element_frequencies(a: &FamilySet) -> Result<Frequencies> {
    if a.is_empty() {
        return Err(Error::InvalidFamily("empty family".into()));
    }
    let members = a.members();
    let size = members.len() as f64;
    let freqs: Vec<f64> = (0..a.n)
        .map(|i| members.iter().filter(|&&x| x >> i & 1 == 1).count() as f64 / size)
        .collect();
    let p_a = freqs.iter().copied().fold(0.0, f64::max);
    Ok(Frequencies { freqs, p_a })
}

/// Every nonempty OR-closed family in `{0,1}^n`, by increasing mask.
pub fn enumerate_or_closed(n: usize) -> Result<impl Iterator<Item = FamilySet>> {
    if !(1..=MAX_ENUM_N).contains(&n) {
        return Err(Error::DimensionTooLarge(n));
    }
    let last: u64 = (1u64 << (1u32 << n)) - 1;
    Ok((1..=last)
        .map(move |m| FamilySet { n, mask: m as u32 })
        .filter(is_or_closed))
}

/// [`enumerate_or_closed`] collected, checking disjoint chunks of the mask
/// space in parallel. Output order is by increasing mask.
pub fn collect_or_closed(n: usize) -> Result<Vec<FamilySet>> {
    if !(1..=MAX_ENUM_N).contains(&n) {
        return Err(Error::DimensionTooLarge(n));
    }
    let last: u64 = (1u64 << (1u32 << n)) - 1;
    let chunk = 4096u64;
    let chunks: Vec<u64> = (0..=last / chunk).collect();
    let parts: Vec<Vec<FamilySet>> = chunks
        .par_iter()
        .map(|&c| {
            let lo = (c * chunk).max(1);
            let hi = ((c + 1) * chunk - 1).min(last);
            (lo..=hi)
                .map(|m| FamilySet { n, mask: m as u32 })
                .filter(is_or_closed)
                .collect()
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinPa {
    pub min_value: f64,
    pub witness: FamilySet,
    pub family_count: usize,
}

/// Minimum of `p_A` over the OR-closed families of `{0,1}^n`, leaving out
/// `{0^n}` (the family `{emptyset}`, whose `p_A` is 0).
pub fn min_pa(n: usize) -> Result<MinPa> {
    let families = collect_or_closed(n)?;
    min_pa_over(&families).ok_or_else(|| Error::InvalidFamily("no families".into()))
}

/// See [`min_pa`]; ties go to the smallest mask.
pub fn min_pa_over(families: &[FamilySet]) -> Option<MinPa> {
    let mut best: Option<(f64, FamilySet)> = None;
    for a in families.iter().filter(|a| !a.is_empty_set_only()) {
        let p = element_frequencies(a).ok()?.p_a;
        if best.is_none_or(|(b, _)| p < b) {
            best = Some((p, *a));
        }
    }
    best.map(|(min_value, witness)| MinPa {
        min_value,
        witness,
        family_count: families.len(),
    })
}

/// OR-closures of `samples` random generator sets in `{0,1}^n`. Each
/// generator set has 1 to `n` distinct members drawn uniformly.
pub fn sample_or_closed(n: usize, samples: usize, seed: u64) -> Result<Vec<FamilySet>> {
    if !(1..=MAX_N).contains(&n) {
        return Err(Error::DimensionTooLarge(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = 1u32 << n;
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let k = rng.gen_range(1..=n);
        let mut mask = 0u32;
        while mask.count_ones() < k as u32 {
            mask |= 1 << rng.gen_range(0..points);
        }
        out.push(or_closure(&FamilySet { n, mask }));
    }
    Ok(out)
}

/// A symmetric coupling of `Unif(A)` with itself, indexed by the members
/// of `A` in increasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingMatrix {
    pub members: Vec<u32>,
    /// Row-major `|A| x |A|`.
    pub mass: Vec<f64>,
}

impl CouplingMatrix {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mass[i * self.size() + j]
    }

    /// Largest deviation from symmetry and from uniform row/column sums.
    pub fn constraint_violation(&self) -> f64 {
        let m = self.size();
        let target = 1.0 / m as f64;
        let mut worst = 0.0f64;
        for i in 0..m {
            let row: f64 = (0..m).map(|j| self.get(i, j)).sum();
            let col: f64 = (0..m).map(|j| self.get(j, i)).sum();
            worst = worst.max((row - target).abs()).max((col - target).abs());
            for j in 0..m {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
                if self.get(i, j) < 0.0 {
                    worst = worst.max(-self.get(i, j));
                }
            }
        }
        worst
    }

    /// Distribution of `X OR Y` over the members.
    pub fn or_distribution(&self) -> Vec<f64> {
        let index = member_index(&self.members);
        let m = self.size();
        let mut pz = vec![0.0; m];
        for i in 0..m {
            for j in 0..m {
                pz[index[(self.members[i] | self.members[j]) as usize]] += self.get(i, j);
            }
        }
        pz
    }
}

fn member_index(members: &[u32]) -> Vec<usize> {
    let mut index = vec![usize::MAX; 32];
    for (k, &x) in members.iter().enumerate() {
        index[x as usize] = k;
    }
    index
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingEntropy {
    pub h_star: Entropy,
    pub coupling: CouplingMatrix,
    pub iterations: usize,
    /// Last Frank-Wolfe duality gap, an upper bound on `max H - h_star`.
    pub gap: f64,
    pub converged: bool,
    /// Objective after each iteration, starting from the independent
    /// coupling.
    pub trace: Vec<f64>,
}

/// Maximizes `H(X OR Y)` over symmetric couplings of `Unif(A)` with itself
/// by conditional gradient.
///
/// Each iteration solves the linear subproblem over the transportation
/// polytope as an assignment problem, symmetrizes the resulting vertex,
/// and steps toward it. `H(Z)` is linear-then-concave along the segment, so
/// the step is the better of `2/(k+2)` and a golden-section line search;
/// the objective never decreases.
pub fn max_symmetric_coupling_entropy(
    a: &FamilySet,
    tol: f64,
    max_iters: usize,
) -> Result<CouplingEntropy> {
    if a.is_empty() {
        return Err(Error::InvalidFamily("empty family".into()));
    }
    if !a.is_or_closed() {
        return Err(Error::NotClosed);
    }
    let members = a.members();
    let m = members.len();
    if m > MAX_COUPLING_SIZE {
        return Err(Error::InvalidFamily(format!(
            "|A| = {m} exceeds {MAX_COUPLING_SIZE}"
        )));
    }
    let index = member_index(&members);
    let or_idx: Vec<usize> = (0..m * m)
        .map(|k| index[(members[k / m] | members[k % m]) as usize])
        .collect();
    let push = |c: &[f64]| {
        let mut pz = vec![0.0; m];
        for (k, &v) in c.iter().enumerate() {
            pz[or_idx[k]] += v;
        }
        pz
    };
    let entropy = |pz: &[f64]| shannon_entropy(pz).bits();

    let mut c = vec![1.0 / (m * m) as f64; m * m];
    let mut pz = push(&c);
    let mut value = entropy(&pz);
    let mut trace = vec![value];
    let mut gap = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = m == 1;

    while !converged && iterations < max_iters {
        iterations += 1;
        // d H / d C[i][j] = -log2 pz[z(i, j)] - 1 / ln 2; the constant is
        // irrelevant on the polytope
        let grad_z: Vec<f64> = pz.iter().map(|&p| -(p.max(1e-300)).log2()).collect();
        let grad: Vec<f64> = or_idx.iter().map(|&z| grad_z[z]).collect();
        let perm = max_weight_assignment(&grad, m);
        let mut s = vec![0.0; m * m];
        let w = 0.5 / m as f64;
        for (i, &j) in perm.iter().enumerate() {
            s[i * m + j] += w;
            s[j * m + i] += w;
        }
        gap = grad
            .iter()
            .zip(s.iter().zip(&c))
            .map(|(g, (si, ci))| g * (si - ci))
            .sum();
        if gap <= tol {
            converged = true;
            break;
        }
        let pz_s = push(&s);
        let along = |g: f64| {
            let mixed: Vec<f64> = pz
                .iter()
                .zip(&pz_s)
                .map(|(x, y)| (1.0 - g) * x + g * y)
                .collect();
            entropy(&mixed)
        };
        let default_step = 2.0 / (iterations as f64 + 2.0);
        let searched = golden_max(along, 0.0, 1.0, 1e-12);
        let (step, next) = {
            let d = along(default_step);
            if d >= searched.value {
                (default_step, d)
            } else {
                (searched.x, searched.value)
            }
        };
        if next < value {
            break;
        }
        for (ci, si) in c.iter_mut().zip(&s) {
            *ci = (1.0 - step) * *ci + step * si;
        }
        // exact symmetry despite rounding
        for i in 0..m {
            for j in (i + 1)..m {
                let v = 0.5 * (c[i * m + j] + c[j * m + i]);
                c[i * m + j] = v;
                c[j * m + i] = v;
            }
        }
        pz = push(&c);
        value = entropy(&pz);
        trace.push(value);
    }

    Ok(CouplingEntropy {
        h_star: Entropy::from_bits(value),
        coupling: CouplingMatrix { members, mass: c },
        iterations,
        gap,
        converged,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyViolation {
    pub mask: u32,
    pub size: usize,
    pub h_star: f64,
    pub log_size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyCheckReport {
    pub n: usize,
    pub tol: f64,
    pub checked: usize,
    /// Families with more than [`ENTROPY_CHECK_CAP`] members.
    pub skipped: usize,
    pub violations: Vec<EntropyViolation>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Families whose ratio `H* / log2 |A|` reached `1 - 1e-6`.
    pub attained: usize,
    /// Per-family `(mask, H*, ratio)`.
    pub rows: Vec<(u32, f64, f64)>,
}

/// Runs the coupling maximizer on every OR-closed family of `{0,1}^n`
/// with `2 <= |A| <= 16` and checks `H* <= log2 |A| + tol`.
pub fn check_entropy_inequality(n: usize, tol: f64) -> Result<EntropyCheckReport> {
    let families = collect_or_closed(n)?;
    check_entropy_over(n, &families, tol)
}

pub fn check_entropy_over(
    n: usize,
    families: &[FamilySet],
    tol: f64,
) -> Result<EntropyCheckReport> {
    let eligible: Vec<&FamilySet> = families
        .iter()
        .filter(|a| a.len() >= 2 && a.len() <= ENTROPY_CHECK_CAP)
        .collect();
    let skipped = families
        .iter()
        .filter(|a| a.len() > ENTROPY_CHECK_CAP)
        .count();
    let results: Vec<Result<(u32, usize, f64)>> = eligible
        .par_iter()
        .map(|a| {
            let r = max_symmetric_coupling_entropy(a, tol.min(1e-9), 20_000)?;
            Ok((a.mask(), a.len(), r.h_star.bits()))
        })
        .collect();
    let mut report = EntropyCheckReport {
        n,
        tol,
        checked: 0,
        skipped,
        violations: Vec::new(),
        min_ratio: f64::INFINITY,
        max_ratio: f64::NEG_INFINITY,
        attained: 0,
        rows: Vec::new(),
    };
    for r in results {
        let (mask, size, h) = r?;
        let log_size = (size as f64).log2();
        let ratio = h / log_size;
        report.checked += 1;
        report.min_ratio = report.min_ratio.min(ratio);
        report.max_ratio = report.max_ratio.max(ratio);
        if ratio >= 1.0 - 1e-6 {
            report.attained += 1;
        }
        if h > log_size + tol {
            report.violations.push(EntropyViolation {
                mask,
                size,
                h_star: h,
                log_size,
            });
        }
        report.rows.push((mask, h, ratio));
    }
    Ok(report)
}

/// One CSV row per family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub n: usize,
    pub size: usize,
    pub mask: String,
    pub p_a: f64,
    /// Element frequencies joined with `;`.
    pub freqs: String,
    pub h_x: f64,
    pub h_star: Option<f64>,
    pub ratio: Option<f64>,
}

impl FamilyRow {
    pub fn new(a: &FamilySet, h_star: Option<f64>) -> Result<Self> {
        let f = element_frequencies(a)?;
        let h_x = (a.len() as f64).log2();
        Ok(FamilyRow {
            n: a.n(),
            size: a.len(),
            mask: format!("{:#x}", a.mask()),
            p_a: f.p_a,
            freqs: f
                .freqs
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(";"),
            h_x,
            h_star,
            ratio: h_star.and_then(|h| (h_x > 0.0).then(|| h / h_x)),
        })
    }
}

/// Writes the rows as CSV with a header.
pub fn write_family_csv<W: std::io::Write>(rows: &[FamilyRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)
            .map_err(|e| Error::InvalidFamily(format!("csv: {e}")))?;
    }
    w.flush()
        .map_err(|e| Error::InvalidFamily(format!("csv: {e}")))?;
    Ok(())
}

/// `p_A` as a [`Probability`].
pub fn p_a(a: &FamilySet) -> Result<Probability> {
    Ok(Probability::saturating(element_frequencies(a)?.p_a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fam(n: usize, members: &[u32]) -> FamilySet {
        FamilySet::from_members(n, members).unwrap()
    }

    /// Independent oracle: closure checked through explicit subsets of
    /// `{1..n}` as sorted vectors, no bit tricks.
    fn naive_count(n: usize) -> usize {
        let points: Vec<Vec<usize>> = (0..1usize << n)
            .map(|x| (0..n).filter(|i| x & (1 << i) != 0).collect())
            .collect();
        let union = |a: &Vec<usize>, b: &Vec<usize>| {
            let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
            u.sort_unstable();
            u.dedup();
            u
        };
        let mut count = 0;
        for family in 1usize..(1 << points.len()) {
            let sets: Vec<&Vec<usize>> = (0..points.len())
                .filter(|k| family & (1 << k) != 0)
                .map(|k| &points[k])
                .collect();
            if sets
                .iter()
                .all(|a| sets.iter().all(|b| sets.contains(&&union(a, b))))
            {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn closure_examples() {
        assert!(fam(2, &[0b11]).is_or_closed());
        assert!(!fam(2, &[0b01, 0b10]).is_or_closed());
        for n in 1..=5 {
            assert!(FamilySet::cube(n).unwrap().is_or_closed());
        }
    }

    #[test]
    fn or_closure_examples() {
        assert_eq!(
            or_closure(&fam(2, &[0b01, 0b10])),
            fam(2, &[0b01, 0b10, 0b11])
        );
        let closed = fam(3, &[0b001, 0b011, 0b111]);
        assert_eq!(or_closure(&closed), closed);
        let c = or_closure(&fam(3, &[0b001, 0b010, 0b100]));
        assert_eq!(c.members(), (1..8).collect::<Vec<u32>>());
    }

    #[test]
    fn frequencies_examples() {
        let f = element_frequencies(&fam(1, &[0, 1])).unwrap();
        assert_eq!((f.freqs, f.p_a), (vec![0.5], 0.5));
        for n in 1..=5 {
            assert_eq!(
                element_frequencies(&FamilySet::cube(n).unwrap())
                    .unwrap()
                    .p_a,
                0.5
            );
        }
        let f = element_frequencies(&fam(2, &[0b01, 0b10, 0b11])).unwrap();
        assert_eq!(f.freqs, vec![2.0 / 3.0, 2.0 / 3.0]);
        assert!(element_frequencies(&FamilySet::new(2, 0).unwrap()).is_err());
    }

    #[test]
    fn enumeration_counts_match_naive_oracle() {
        assert_eq!(enumerate_or_closed(1).unwrap().count(), 3);
        assert_eq!(naive_count(1), 3);
        let two: Vec<FamilySet> = enumerate_or_closed(2).unwrap().collect();
        assert_eq!(two.len(), 13);
        assert_eq!(naive_count(2), 13);
        for n in 1..=3 {
            assert_eq!(
                collect_or_closed(n).unwrap().len(),
                naive_count(n),
                "n = {n}"
            );
        }
        let via_iter: Vec<FamilySet> = enumerate_or_closed(4).unwrap().collect();
        assert_eq!(via_iter, collect_or_closed(4).unwrap());
        assert!(via_iter.iter().all(FamilySet::is_or_closed));
        assert!(matches!(
            enumerate_or_closed(5),
            Err(Error::DimensionTooLarge(5))
        ));
    }

    #[test]
    fn n2_excluded_masks() {
        let closed: Vec<u32> = enumerate_or_closed(2).unwrap().map(|a| a.mask()).collect();
        let missing: Vec<u32> = (1..16).filter(|m| !closed.contains(m)).collect();
        // {01, 10} and {00, 01, 10}
        assert_eq!(missing, vec![0b0110, 0b0111]);
    }

    #[test]
    fn min_pa_examples() {
        let r = min_pa(1).unwrap();
        assert_eq!((r.min_value, r.witness), (0.5, fam(1, &[0, 1])));
        assert_eq!(min_pa(2).unwrap().min_value, 0.5);
        let r = min_pa(4).unwrap();
        assert_eq!(r.min_value, 0.5);
        assert!(r.min_value >= 0.38234);
    }

    #[test]
    fn coupling_entropy_examples() {
        let r = max_symmetric_coupling_entropy(&fam(1, &[1]), 1e-9, 100).unwrap();
        assert_eq!(r.h_star.bits(), 0.0);

        let r = max_symmetric_coupling_entropy(&fam(1, &[0, 1]), 1e-10, 10_000).unwrap();
        assert!((r.h_star.bits() - 1.0).abs() < 1e-8);
        // P(1,1) = 1/2 at the optimum: the diagonal coupling
        assert!((r.coupling.get(1, 1) - 0.5).abs() < 1e-6);

        let r = max_symmetric_coupling_entropy(&fam(2, &[0b01, 0b11]), 1e-10, 10_000).unwrap();
        assert!((r.h_star.bits() - 1.0).abs() < 1e-8);

        assert_eq!(
            max_symmetric_coupling_entropy(&fam(2, &[0b01, 0b10]), 1e-9, 10).unwrap_err(),
            Error::NotClosed
        );
    }

    #[test]
    fn coupling_invariants_and_monotone_trace() {
        for a in collect_or_closed(3)
            .unwrap()
            .iter()
            .filter(|a| a.len() >= 2)
        {
            let r = max_symmetric_coupling_entropy(a, 1e-9, 5_000).unwrap();
            assert!(r.coupling.constraint_violation() < 1e-10, "{:#x}", a.mask());
            assert!(r.h_star.bits() <= (a.len() as f64).log2() + 1e-9);
            for w in r.trace.windows(2) {
                assert!(w[1] >= w[0] - 1e-12);
            }
            let pz = r.coupling.or_distribution();
            assert!((shannon_entropy(&pz).bits() - r.h_star.bits()).abs() < 1e-12);
        }
    }

    #[test]
    fn full_cube_attains_log_size() {
        let cube = FamilySet::cube(3).unwrap();
        let r = max_symmetric_coupling_entropy(&cube, 1e-10, 20_000).unwrap();
        assert!(r.h_star.bits() >= 3.0 * (1.0 - 1e-6), "{}", r.h_star);
    }

    #[test]
    fn entropy_check_small_n() {
        for n in 1..=2 {
            let rep = check_entropy_inequality(n, 1e-6).unwrap();
            assert!(rep.violations.is_empty());
            assert!(rep.max_ratio <= 1.0 + 1e-6);
        }
    }

    #[test]
    fn sampling_is_deterministic_and_closed() {
        let a = sample_or_closed(5, 50, 7).unwrap();
        let b = sample_or_closed(5, 50, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(FamilySet::is_or_closed));
        assert!(sample_or_closed(6, 1, 0).is_err());
    }

    #[test]
    fn csv_row_layout() {
        let row = FamilyRow::new(&fam(2, &[0b01, 0b10, 0b11]), Some(1.0)).unwrap();
        let mut buf = Vec::new();
        write_family_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,size,mask,p_a,freqs,h_x,h_star,ratio"
        );
        assert!(lines
            .next()
            .unwrap()
            .starts_with("2,3,0xe,0.6666666666666666,"));
    }

    proptest! {
        #[test]
        fn closure_is_idempotent_and_extensive(mask in 1u32..=u32::MAX) {
            let s = FamilySet::new(5, mask).unwrap();
            let c = or_closure(&s);
            prop_assert!(c.is_or_closed());
            prop_assert_eq!(c.mask() & s.mask(), s.mask());
            prop_assert_eq!(or_closure(&c), c);
        }
    }
}
