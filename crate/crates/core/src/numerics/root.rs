//! Bracketed scalar root finding (Brent's method).

/// Outcome of a successful Brent solve.
#[derive(Debug, Clone, Copy)]
pub struct BrentResult {
    pub root: f64,
    pub f_root: f64,
    pub iterations: usize,
}

/// Brent's method on a sign-changing bracket [a, b].
///
/// Combines bisection, secant, and inverse quadratic steps; converges
/// superlinearly for smooth f while never leaving the bracket. Stops when
/// the bracket shrinks below `2 eps |b| + xtol` or |f| drops below `ftol`.
///
/// Returns `None` if f(a) and f(b) do not straddle zero.
pub fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    xtol: f64,
    ftol: f64,
    max_iter: usize,
) -> Option<BrentResult> {
    let mut a = a;
    let mut b = b;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(BrentResult {
            root: a,
            f_root: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Some(BrentResult {
            root: b,
            f_root: 0.0,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 || fb.abs() <= ftol {
            return Some(BrentResult {
                root: b,
                f_root: fb,
                iterations: iter,
            });
        }
        if e.abs() < tol || fa.abs() <= fb.abs() {
            d = m;
            e = m;
        } else {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                // secant
                (2.0 * m * s, 1.0 - s)
            } else {
                // inverse quadratic
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol {
            d
        } else if m > 0.0 {
            tol
        } else {
            -tol
        };
        fb = f(b);
    }
    Some(BrentResult {
        root: b,
        f_root: fb,
        iterations: max_iter,
    })
}
