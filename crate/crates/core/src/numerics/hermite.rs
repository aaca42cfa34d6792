//! Gauss-Hermite nodes and weights for the weight function e^{-x²}.
//!
//! Nodes are the roots of the degree-n Hermite polynomial, located by a
//! sign-change scan of the orthonormal recurrence followed by Newton
//! polishing; weights come from the Christoffel sum 1/Σ h̃_k(x)². This keeps
//! every intermediate O(1) and is accurate to near machine precision for
//! the orders used here (n ≤ ~200).

/// Value of the orthonormal Hermite functions (h̃_n, h̃_{n-1}) at x.
///
/// Orthonormal with respect to e^{-x²} dx:
///   h̃_0 = π^{-1/4},  h̃_{k+1} = (x √(2/(k+1))) h̃_k - √(k/(k+1)) h̃_{k-1}.
fn hermite_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0f64;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    for k in 0..n {
        let next = x * (2.0 / (k as f64 + 1.0)).sqrt() * cur
            - ((k as f64) / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Gauss-Hermite rule of order `n`: (nodes, weights), nodes ascending,
/// weights summing to √π.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "Gauss-Hermite order must be at least 2");
    let bound = (2.0 * n as f64 + 1.0).sqrt() + 1.0;
    let scan = 50 * n;
    let mut roots = Vec::with_capacity(n);
    let mut x_prev = -bound;
    let mut f_prev = hermite_pair(n, x_prev).0;
    for i in 1..=scan {
        let x = -bound + 2.0 * bound * (i as f64) / (scan as f64);
        let fx = hermite_pair(n, x).0;
        if fx == 0.0 {
            // grid point landed exactly on a root (x = 0 for odd n)
            roots.push(x);
        } else if f_prev != 0.0 && f_prev.signum() != fx.signum() {
            roots.push(refine_root(n, x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    assert_eq!(roots.len(), n, "sign-change scan missed Hermite roots");
    // enforce exact ± symmetry of the node set
    for i in 0..n / 2 {
        let m = 0.5 * (roots[n - 1 - i] - roots[i]);
        roots[i] = -m;
        roots[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        roots[n / 2] = 0.0;
    }
    let weights = roots.iter().map(|&x| christoffel_weight(n, x)).collect();
    (roots, weights)
}

/// Newton iterations bracketed by bisection fallback.
fn refine_root(n: usize, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = hermite_pair(n, lo).0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (f, f_prev) = hermite_pair(n, x);
        // ladder identity: h̃_n'(x) = √(2n) h̃_{n-1}(x)
        let deriv = (2.0 * n as f64).sqrt() * f_prev;
        if f == 0.0 {
            return x;
        }
        if f.signum() == f_lo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let step = f / deriv;
        let mut next = x - step;
        if !(lo..=hi).contains(&next) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-16 * x.abs().max(1.0) {
            return next;
        }
        x = next;
    }
    x
}

fn christoffel_weight(n: usize, x: f64) -> f64 {
    let mut prev = 0.0f64;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    let mut sum_sq = cur * cur;
    for k in 0..n - 1 {
        let next = x * (2.0 / (k as f64 + 1.0)).sqrt() * cur
            - ((k as f64) / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        sum_sq += cur * cur;
    }
    1.0 / sum_sq
}
