//! One-dimensional derivative-free search primitives.

/// `(1 + sqrt 5) / 2 - 1`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineMin {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section minimization of `f` on `[lo, hi]` until the bracket is
/// narrower than `tol`. The endpoints are evaluated too, so a minimum on
/// the boundary of the interval is found exactly.
pub fn golden_min(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> LineMin {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut best = LineMin {
        x: a,
        value: f(a),
        evaluations: 1,
    };
    let consider = |x: f64, v: f64, best: &mut LineMin| {
        best.evaluations += 1;
        if v < best.value {
            best.x = x;
            best.value = v;
        }
    };
    let fb = f(b);
    consider(b, fb, &mut best);
    if b - a <= tol {
        return best;
    }

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    consider(c, fc, &mut best);
    consider(d, fd, &mut best);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            consider(c, fc, &mut best);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            consider(d, fd, &mut best);
        }
    }
    best
}

/// Golden-section maximization; see [`golden_min`].
pub fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> LineMin {
    let r = golden_min(|x| -f(x), lo, hi, tol);
    LineMin {
        value: -r.value,
        ..r
    }
}

/// Bisection for the boundary of a predicate that holds at `lo` and fails
/// at `hi`. Returns the final `(lo, hi)` with `hi - lo <= tol`; the
/// predicate holds at the returned `lo` and fails at the returned `hi`.
pub fn bisect_boundary(
    mut holds: impl FnMut(f64) -> bool,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
