//! Dense Hungarian algorithm. The vertices of the transportation polytope
//! with uniform marginals are scaled permutation matrices, so a linear
//! objective over it is maximized by a maximum-weight assignment.

/// Maximum-weight perfect matching on a square `n x n` weight matrix given
/// row-major. Returns `perm` with row `i` matched to column `perm[i]`.
pub fn max_weight_assignment(weights: &[f64], n: usize) -> Vec<usize> {
    assert_eq!(weights.len(), n * n, "weight matrix must be n x n");
    if n == 0 {
        return Vec::new();
    }
    // minimize the negated weights; potentials u (rows), v (cols), 1-based
    let cost = |i: usize, j: usize| -weights[(i - 1) * n + (j - 1)];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut matched_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[matched_row[j] - 1] = j - 1;
    }
    perm
}
