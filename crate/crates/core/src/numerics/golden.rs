//! Golden-section minimization of a scalar function on a bracket.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (√5 - 1) / 2

/// Golden-section search for a minimum of `f` on [a, b].
///
/// Assumes unimodality on the bracket; callers that cannot guarantee it
/// should localize with a grid scan first. Stops when the bracket width
/// drops below `xtol` or after `max_iter` shrink steps.
pub fn golden_min<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    xtol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let mut lo = a.min(b);
    let mut hi = a.max(b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if hi - lo <= xtol {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
