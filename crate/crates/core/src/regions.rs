//! Bounded support regions and their Gaussian-tilt integrals.
//!
//! A [`Region`] is a bounded subset of the complex plane containing the
//! origin: a square of half-side A, a disk of radius R, or a simple
//! counterclockwise polygon. The module supplies the integrals every
//! downstream computation needs:
//!
//!   z0(λ) = ∫_S e^{-λ|x|²} dx      m2(λ) = ∫_S e^{-λ|x|²} |x|² dx
//!
//! plus the inflated-region integral ∫_{S_ε} e^{-λ|y|²} dy used by the
//! finite-noise bound. Squares and disks use closed forms; polygons reduce
//! the area integrals to smooth 1-D boundary integrals via the divergence
//! theorem, which adaptive Gauss-Kronrod then evaluates to near machine
//! precision.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::quad::{integrate, QuadOptions};
use crate::numerics::special::{
    gauss_segment, gauss_sym_second_moment, tilt_kernel_mass, tilt_kernel_power,
};

/// Geometry of a support region.
#[derive(Debug, Clone)]
pub enum Shape {
    /// {x : |Re x| ≤ A, |Im x| ≤ A}
    Square { half_side: f64 },
    /// {x : |x| ≤ R}
    Disk { radius: f64 },
    /// Simple counterclockwise polygon given by its vertices.
    Polygon { vertices: Vec<Complex64> },
}

/// A bounded support region containing the origin.
#[derive(Debug, Clone)]
pub struct Region {
    shape: Shape,
}

/// The tilt integrals of a region at a fixed λ ≥ 0.
#[derive(Debug, Clone, Copy)]
pub struct RegionMoments {
    /// Exponential tilt parameter.
    pub lambda: f64,
    /// ∫_S e^{-λ|x|²} dx
    pub z0: f64,
    /// ∫_S e^{-λ|x|²} |x|² dx
    pub m2: f64,
}

impl RegionMoments {
    /// Mean power of the tilted law, m2 / z0.
    pub fn tilted_power(&self) -> f64 {
        self.m2 / self.z0
    }
}

impl Region {
    pub fn square(half_side: f64) -> Result<Self> {
        if !half_side.is_finite() || half_side <= 0.0 {
            return Err(Error::InvalidRegion(format!(
                "square half-side must be positive and finite, got {half_side}"
            )));
        }
        Ok(Self {
            shape: Shape::Square { half_side },
        })
    }

    pub fn disk(radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidRegion(format!(
                "disk radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self {
            shape: Shape::Disk { radius },
        })
    }

    /// Build a polygon region. Vertices must be finite, form a simple
    /// (non-self-intersecting) counterclockwise loop with positive area,
    /// and the enclosed set must contain the origin.
    pub fn polygon(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidRegion(
                "polygon needs at least 3 vertices".into(),
            ));
        }
        if vertices.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidRegion("polygon vertex not finite".into()));
        }
        let n = vertices.len();
        for i in 0..n {
            if (vertices[i] - vertices[(i + 1) % n]).norm_sqr() == 0.0 {
                return Err(Error::InvalidRegion(
                    "polygon has repeated consecutive vertices".into(),
                ));
            }
        }
        let area = shoelace_area(&vertices);
        if area <= 0.0 {
            return Err(Error::InvalidRegion(
                "polygon must be counterclockwise with positive area".into(),
            ));
        }
        if !polygon_is_simple(&vertices) {
            return Err(Error::InvalidRegion("polygon is self-intersecting".into()));
        }
        if !polygon_contains(&vertices, Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidRegion(
                "region must contain the origin".into(),
            ));
        }
        Ok(Self {
            shape: Shape::Polygon { vertices },
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Lebesgue measure of S. Exact closed forms throughout (shoelace for
    /// polygons).
    pub fn area(&self) -> f64 {
        match &self.shape {
            Shape::Square { half_side } => 4.0 * half_side * half_side,
            Shape::Disk { radius } => PI * radius * radius,
            Shape::Polygon { vertices } => shoelace_area(vertices),
        }
    }

    /// Mean power of the uniform law on S: ∫_S |x|² dx / ∫_S dx.
    pub fn uniform_power(&self) -> f64 {
        match &self.shape {
            Shape::Square { half_side } => 2.0 * half_side * half_side / 3.0,
            Shape::Disk { radius } => radius * radius / 2.0,
            Shape::Polygon { vertices } => polygon_second_moment(vertices) / shoelace_area(vertices),
        }
    }

    /// Largest |x|² over S.
    pub fn sup_abs_sq(&self) -> f64 {
        match &self.shape {
            Shape::Square { half_side } => 2.0 * half_side * half_side,
            Shape::Disk { radius } => radius * radius,
            Shape::Polygon { vertices } => vertices
                .iter()
                .map(|v| v.norm_sqr())
                .fold(0.0f64, f64::max),
        }
    }

    /// Diameter of S (largest pairwise distance).
    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Square { half_side } => 2.0 * std::f64::consts::SQRT_2 * half_side,
            Shape::Disk { radius } => 2.0 * radius,
            Shape::Polygon { vertices } => {
                let mut best = 0.0f64;
                for i in 0..vertices.len() {
                    for j in i + 1..vertices.len() {
                        best = best.max((vertices[i] - vertices[j]).norm());
                    }
                }
                best
            }
        }
    }

    /// Axis-aligned bounding box (re_min, re_max, im_min, im_max).
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match &self.shape {
            Shape::Square { half_side } => (-half_side, *half_side, -half_side, *half_side),
            Shape::Disk { radius } => (-radius, *radius, -radius, *radius),
            Shape::Polygon { vertices } => {
                let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
                for v in vertices {
                    b.0 = b.0.min(v.re);
                    b.1 = b.1.max(v.re);
                    b.2 = b.2.min(v.im);
                    b.3 = b.3.max(v.im);
                }
                b
            }
        }
    }

    /// Membership test; boundary points count as inside.
    pub fn contains(&self, p: Complex64) -> bool {
        match &self.shape {
            Shape::Square { half_side } => p.re.abs() <= *half_side && p.im.abs() <= *half_side,
            Shape::Disk { radius } => p.norm_sqr() <= radius * radius,
            Shape::Polygon { vertices } => polygon_contains(vertices, p),
        }
    }

    /// The region scaled by c > 0 about the origin.
    pub fn scale(&self, c: f64) -> Region {
        assert!(c > 0.0 && c.is_finite(), "scale factor must be positive");
        let shape = match &self.shape {
            Shape::Square { half_side } => Shape::Square {
                half_side: c * half_side,
            },
            Shape::Disk { radius } => Shape::Disk { radius: c * radius },
            Shape::Polygon { vertices } => Shape::Polygon {
                vertices: vertices.iter().map(|v| v * c).collect(),
            },
        };
        Region { shape }
    }

    /// z0(λ) and m2(λ). Closed forms for squares and disks (with series
    /// branches as λ → 0 to dodge cancellation); boundary-reduced adaptive
    /// quadrature for polygons.
    pub fn moments(&self, lambda: f64) -> Result<RegionMoments> {
        assert!(lambda >= 0.0, "tilt must be nonnegative");
        let (z0, m2) = match &self.shape {
            Shape::Square { half_side } => {
                let a = *half_side;
                let g0 = gauss_segment(-a, a, lambda);
                let g2 = gauss_sym_second_moment(a, lambda);
                (g0 * g0, 2.0 * g2 * g0)
            }
            Shape::Disk { radius } => {
                let r2 = radius * radius;
                let s = lambda * r2;
                (
                    2.0 * PI * r2 * tilt_kernel_mass(s),
                    2.0 * PI * r2 * r2 * tilt_kernel_power(s),
                )
            }
            Shape::Polygon { vertices } => {
                let z0 = polygon_radial_integral(vertices, |u| tilt_kernel_mass(lambda * u))?;
                let m2 =
                    polygon_radial_integral(vertices, |u| u * tilt_kernel_power(lambda * u))?;
                (z0, m2)
            }
        };
        debug_assert!(z0 > 0.0 && m2 > 0.0, "tilt integrals must be positive");
        Ok(RegionMoments { lambda, z0, m2 })
    }

    /// Upper bound on ∫_{S_ε} e^{-λ|y|²} dy over the ε-neighborhood of S.
    ///
    /// Exact Minkowski-sum geometry for squares (inflated square plus four
    /// quarter-disk corners) and disks (disk of radius R + ε). Polygons use
    /// the ε-inflated bounding box: a safe over-estimate that only weakens
    /// the downstream bound, so the value exceeds the tight neighborhood
    /// integral and its ε → 0 limit is the bounding-box integral rather
    /// than z0.
    pub fn epsilon_neighborhood_integral(&self, eps: f64, lambda: f64) -> Result<f64> {
        assert!(eps > 0.0, "neighborhood width must be positive");
        assert!(lambda >= 0.0, "tilt must be nonnegative");
        match &self.shape {
            Shape::Square { half_side } => {
                let a = *half_side;
                let g0 = gauss_segment(-a, a, lambda);
                let side = gauss_segment(a, a + eps, lambda);
                let corner = square_corner_patch(a, eps, lambda)?;
                Ok(g0 * g0 + 4.0 * side * g0 + 4.0 * corner)
            }
            Shape::Disk { radius } => {
                let r = radius + eps;
                let s = lambda * r * r;
                Ok(2.0 * PI * r * r * tilt_kernel_mass(s))
            }
            Shape::Polygon { .. } => {
                let (x0, x1, y0, y1) = self.bounding_box();
                Ok(gauss_segment(x0 - eps, x1 + eps, lambda)
                    * gauss_segment(y0 - eps, y1 + eps, lambda))
            }
        }
    }

    /// Pull a point outside S radially toward the origin until it lands in
    /// S (on the boundary, nudged inward). Returns the point itself when it
    /// is already a member; `None` when the ray never re-enters (cannot
    /// happen for points whose cell intersects S, kept as a guard).
    pub fn project_inward(&self, p: Complex64) -> Option<Complex64> {
        if self.contains(p) {
            return Some(p);
        }
        let boundary_scale = match &self.shape {
            Shape::Square { half_side } => half_side / p.re.abs().max(p.im.abs()),
            Shape::Disk { radius } => radius / p.norm(),
            Shape::Polygon { vertices } => ray_exit_parameter(vertices, p)?,
        };
        // the exact boundary point can round to one ulp outside; back off
        for shrink in [1.0 - 1e-14, 1.0 - 1e-12, 1.0 - 1e-9, 1.0 - 1e-6] {
            let q = p * (boundary_scale * shrink);
            if self.contains(q) {
                return Some(q);
            }
        }
        None
    }
}

/// JSON form of a region:
/// `{"shape":"square","half_side":1.0}` | `{"shape":"disk","radius":1.0}` |
/// `{"shape":"polygon","vertices":[[re,im],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum RegionSpec {
    Square { half_side: f64 },
    Disk { radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
}

impl TryFrom<RegionSpec> for Region {
    type Error = Error;

    fn try_from(spec: RegionSpec) -> Result<Region> {
        match spec {
            RegionSpec::Square { half_side } => Region::square(half_side),
            RegionSpec::Disk { radius } => Region::disk(radius),
            RegionSpec::Polygon { vertices } => Region::polygon(
                vertices
                    .into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect(),
            ),
        }
    }
}

impl From<&Region> for RegionSpec {
    fn from(region: &Region) -> RegionSpec {
        match region.shape() {
            Shape::Square { half_side } => RegionSpec::Square {
                half_side: *half_side,
            },
            Shape::Disk { radius } => RegionSpec::Disk { radius: *radius },
            Shape::Polygon { vertices } => RegionSpec::Polygon {
                vertices: vertices.iter().map(|v| [v.re, v.im]).collect(),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// polygon geometry
// ---------------------------------------------------------------------------

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

fn shoelace_area(vs: &[Complex64]) -> f64 {
    let n = vs.len();
    0.5 * (0..n).map(|i| cross(vs[i], vs[(i + 1) % n])).sum::<f64>()
}

/// ∫_S |x|² dx via the exact per-edge closed form.
fn polygon_second_moment(vs: &[Complex64]) -> f64 {
    let n = vs.len();
    (0..n)
        .map(|i| {
            let a = vs[i];
            let e = vs[(i + 1) % n] - a;
            cross(a, e) * (a.norm_sqr() + dot(a, e) + e.norm_sqr() / 3.0) / 4.0
        })
        .sum()
}

/// ∫∫_S f(|x|²) dA reduced to the boundary: with φ(u) = (1/2u) ∫_0^u f,
/// the divergence theorem gives Σ_edges cross(a, e) ∫_0^1 φ(|a + t e|²) dt.
/// `kernel` is φ; it must be smooth on [0, max |x|²].
fn polygon_radial_integral<F: Fn(f64) -> f64>(vs: &[Complex64], kernel: F) -> Result<f64> {
    let opt = QuadOptions {
        rel_tol: 1e-13,
        abs_tol: 0.0,
        max_evals: 400_000,
    };
    let n = vs.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = vs[i];
        let e = vs[(i + 1) % n] - a;
        let c = cross(a, e);
        if c == 0.0 {
            continue;
        }
        let aa = a.norm_sqr();
        let ae = dot(a, e);
        let ee = e.norm_sqr();
        let edge = integrate(
            |t| kernel(aa + t * (2.0 * ae + t * ee)),
            0.0,
            1.0,
            &opt,
        )
        .map_err(|f| {
            Error::QuadratureFailure(format!(
                "polygon edge integral stalled after {} evaluations",
                f.evals
            ))
        })?;
        total += c * edge;
    }
    Ok(total)
}

fn polygon_is_simple(vs: &[Complex64]) -> bool {
    let n = vs.len();
    for i in 0..n {
        let (p1, p2) = (vs[i], vs[(i + 1) % n]);
        for j in i + 1..n {
            let (p3, p4) = (vs[j], vs[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_intersect(p1, p2, p3, p4) {
                return false;
            }
        }
        // adjacent edges must not fold back onto each other
        let prev = vs[(i + n - 1) % n];
        let next = vs[(i + 1) % n];
        let v = vs[i];
        if cross(v - prev, next - v) == 0.0 && dot(v - prev, next - v) < 0.0 {
            return false;
        }
    }
    true
}

fn orient(p: Complex64, q: Complex64, r: Complex64) -> f64 {
    cross(q - p, r - p)
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    let e = b - a;
    let len_sq = e.norm_sqr();
    if len_sq == 0.0 {
        return (p - a).norm_sqr() == 0.0;
    }
    let c = cross(e, p - a);
    // relative tolerance for collinearity: exact for points produced by
    // intersection arithmetic, forgiving of last-ulp noise
    if c * c > 1e-24 * len_sq * (p - a).norm_sqr().max(f64::MIN_POSITIVE) {
        return false;
    }
    let t = dot(p - a, e) / len_sq;
    (-1e-12..=1.0 + 1e-12).contains(&t)
}

fn segments_intersect(p1: Complex64, p2: Complex64, p3: Complex64, p4: Complex64) -> bool {
    let d1 = orient(p3, p4, p1);
    let d2 = orient(p3, p4, p2);
    let d3 = orient(p1, p2, p3);
    let d4 = orient(p1, p2, p4);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(p3, p4, p1))
        || (d2 == 0.0 && on_segment(p3, p4, p2))
        || (d3 == 0.0 && on_segment(p1, p2, p3))
        || (d4 == 0.0 && on_segment(p1, p2, p4))
}

/// Even-odd point-in-polygon test with boundary counted as inside.
fn polygon_contains(vs: &[Complex64], p: Complex64) -> bool {
    let n = vs.len();
    for i in 0..n {
        if on_segment(vs[i], vs[(i + 1) % n], p) {
            return true;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let a = vs[i];
        let b = vs[(i + 1) % n];
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if x > p.re {
                inside = !inside;
            }
        }
    }
    inside
}

/// Largest t in (0, 1] where the segment from the origin to p crosses the
/// polygon boundary. Solves t·p = a + s·e per edge by Cramer's rule.
fn ray_exit_parameter(vs: &[Complex64], p: Complex64) -> Option<f64> {
    let n = vs.len();
    let mut best: Option<f64> = None;
    for i in 0..n {
        let a = vs[i];
        let e = vs[(i + 1) % n] - a;
        let det = cross(e, p);
        if det == 0.0 {
            continue; // edge parallel to the ray
        }
        let t = cross(e, a) / det;
        let s = cross(p, a) / det;
        if (0.0..=1.0).contains(&s) && t > 0.0 && t <= 1.0 {
            best = Some(best.map_or(t, |b: f64| b.max(t)));
        }
    }
    best
}

// ---------------------------------------------------------------------------
// square corner patches
// ---------------------------------------------------------------------------

/// ∫ over one quarter-disk corner of the inflated square:
/// {y = (A, A) + ρ e^{iθ}, ρ ∈ [0, ε], θ ∈ [0, π/2]} of e^{-λ|y|²}.
///
/// Outer adaptive quadrature in θ; the ρ integral uses the erfcx closed
/// form when the exponent swing is large and direct quadrature when it is
/// small (where the closed form cancels).
fn square_corner_patch(a: f64, eps: f64, lambda: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(PI * eps * eps / 4.0);
    }
    let lead = 2.0 * lambda * a * a;
    if lead > 745.0 {
        return Ok(0.0); // e^{-λ|corner|²} underflows; patch is below f64 tiny
    }
    let opt_outer = QuadOptions {
        rel_tol: 1e-11,
        abs_tol: 0.0,
        max_evals: 20_000,
    };
    let inner_failed = std::cell::Cell::new(false);
    let outer = integrate(
        |theta| {
            let b = a * (theta.cos() + theta.sin());
            match corner_rho_integral(b, eps, lambda) {
                Ok(v) => v,
                Err(_) => {
                    inner_failed.set(true);
                    0.0
                }
            }
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        &opt_outer,
    )
    .map_err(|f| {
        Error::QuadratureFailure(format!(
            "corner patch angular integral stalled after {} evaluations",
            f.evals
        ))
    })?;
    if inner_failed.get() {
        return Err(Error::QuadratureFailure(
            "corner patch radial integral stalled".into(),
        ));
    }
    Ok((-lead).exp() * outer)
}

/// ∫_0^ε ρ e^{-λ(ρ² + 2bρ)} dρ for b > 0, λ > 0.
fn corner_rho_integral(b: f64, eps: f64, lambda: f64) -> std::result::Result<f64, ()> {
    use crate::numerics::special::erfcx;
    let x = lambda * eps * (eps + 2.0 * b);
    if x < 0.5 {
        // gentle exponent: integrate directly, the closed form cancels here
        let opt = QuadOptions {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            max_evals: 20_000,
        };
        return integrate(
            |rho| rho * (-lambda * rho * (rho + 2.0 * b)).exp(),
            0.0,
            eps,
            &opt,
        )
        .map_err(|_| ());
    }
    let s = lambda.sqrt();
    let first = -libm::expm1(-x) / (2.0 * lambda);
    let second = b * 0.5 * (PI / lambda).sqrt()
        * (erfcx(s * b) - erfcx(s * (eps + b)) * (-x).exp());
    Ok(first - second)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_square_polygon() -> Region {
        Region::polygon(vec![c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0), c(-1.0, -1.0)]).unwrap()
    }

    #[test]
    fn areas() {
        assert_eq!(Region::square(1.0).unwrap().area(), 4.0);
        assert!((Region::disk(1.0).unwrap().area() - PI).abs() < 1e-15);
        assert!((unit_square_polygon().area() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_powers() {
        assert!((Region::square(1.0).unwrap().uniform_power() - 2.0 / 3.0).abs() < 1e-15);
        assert!((Region::disk(1.0).unwrap().uniform_power() - 0.5).abs() < 1e-15);
        for &cc in &[0.5, 2.0, 10.0] {
            let p = Region::square(cc).unwrap().uniform_power();
            assert!(
                (p - cc * cc * 2.0 / 3.0).abs() < 1e-13 * p,
                "half-side {cc}"
            );
        }
        // polygon matches the square closed form
        let p = unit_square_polygon().uniform_power();
        assert!((p - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn constructor_rejections() {
        assert!(Region::square(0.0).is_err());
        assert!(Region::disk(-1.0).is_err());
        // clockwise orientation
        assert!(Region::polygon(vec![c(1.0, -1.0), c(-1.0, -1.0), c(-1.0, 1.0), c(1.0, 1.0)])
            .is_err());
        // bowtie self-intersection
        assert!(Region::polygon(vec![c(-1.0, -1.0), c(1.0, 1.0), c(1.0, -1.0), c(-1.0, 1.0)])
            .is_err());
        // origin outside
        assert!(Region::polygon(vec![c(2.0, 2.0), c(3.0, 2.0), c(3.0, 3.0), c(2.0, 3.0)])
            .is_err());
        // too few vertices
        assert!(Region::polygon(vec![c(0.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn moments_at_zero_tilt() {
        let m = Region::disk(1.0).unwrap().moments(0.0).unwrap();
        assert!((m.z0 - PI).abs() < 1e-14);
        assert!((m.m2 - PI / 2.0).abs() < 1e-14);
        let m = Region::square(1.0).unwrap().moments(0.0).unwrap();
        assert!((m.z0 - 4.0).abs() < 1e-14);
        assert!((m.m2 - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn disk_moments_closed_form_at_unit_tilt() {
        let m = Region::disk(1.0).unwrap().moments(1.0).unwrap();
        let e1 = (-1.0f64).exp();
        assert!((m.z0 - PI * (1.0 - e1)).abs() < 1e-14);
        assert!((m.m2 - PI * (1.0 - 2.0 * e1)).abs() < 1e-14);
    }

    #[test]
    fn disk_moments_match_radial_quadrature() {
        // independent oracle: 1-D radial integrals 2πr e^{-λr²}, 2πr³ e^{-λr²}
        let opt = QuadOptions::default();
        for &lambda in &[0.3, 1.0, 7.5] {
            let m = Region::disk(1.3).unwrap().moments(lambda).unwrap();
            let z0 = integrate(
                |r| 2.0 * PI * r * (-lambda * r * r).exp(),
                0.0,
                1.3,
                &opt,
            )
            .unwrap();
            let m2 = integrate(
                |r| 2.0 * PI * r * r * r * (-lambda * r * r).exp(),
                0.0,
                1.3,
                &opt,
            )
            .unwrap();
            assert!((m.z0 - z0).abs() < 1e-12 * z0, "λ={lambda}");
            assert!((m.m2 - m2).abs() < 1e-12 * m2, "λ={lambda}");
        }
    }

    #[test]
    fn polygon_square_agreement() {
        // quadrature route must match the closed forms to 1e-8 relative
        for &a in &[0.7, 1.0, 3.0] {
            let square = Region::square(a).unwrap();
            let poly = Region::polygon(vec![c(a, -a), c(a, a), c(-a, a), c(-a, -a)]).unwrap();
            for &lambda in &[0.0, 0.1, 1.0, 10.0] {
                let ms = square.moments(lambda).unwrap();
                let mp = poly.moments(lambda).unwrap();
                assert!(
                    (ms.z0 - mp.z0).abs() <= 1e-8 * ms.z0,
                    "z0 a={a} λ={lambda}: {} vs {}",
                    ms.z0,
                    mp.z0
                );
                assert!(
                    (ms.m2 - mp.m2).abs() <= 1e-8 * ms.m2,
                    "m2 a={a} λ={lambda}: {} vs {}",
                    ms.m2,
                    mp.m2
                );
            }
        }
    }

    #[test]
    fn tilted_power_bounded_by_sup_radius() {
        for region in [
            Region::square(1.5).unwrap(),
            Region::disk(0.9).unwrap(),
            unit_square_polygon(),
        ] {
            let cap = region.sup_abs_sq();
            for &lambda in &[0.0, 0.5, 5.0] {
                let m = region.moments(lambda).unwrap();
                assert!(m.tilted_power() <= cap, "λ={lambda}");
                assert!(m.z0 > 0.0 && m.m2 > 0.0);
            }
        }
    }

    #[test]
    fn tilted_power_decreases_with_lambda() {
        let regions = [
            Region::square(1.0).unwrap(),
            Region::disk(1.0).unwrap(),
            Region::polygon(vec![c(1.5, -0.5), c(0.8, 1.2), c(-1.1, 0.9), c(-0.7, -1.3)])
                .unwrap(),
        ];
        for region in &regions {
            let mut prev = f64::INFINITY;
            for &lambda in &[0.0, 0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 50.0] {
                let r = region.moments(lambda).unwrap().tilted_power();
                assert!(r < prev, "ratio not strictly decreasing at λ={lambda}");
                prev = r;
            }
        }
    }

    #[test]
    fn epsilon_integral_examples() {
        // inflated disk, flat weight
        let v = Region::disk(1.0)
            .unwrap()
            .epsilon_neighborhood_integral(0.5, 0.0)
            .unwrap();
        assert!((v - PI * 2.25).abs() < 1e-13);
        // square: area + perimeter ε + π ε²
        let v = Region::square(1.0)
            .unwrap()
            .epsilon_neighborhood_integral(0.1, 0.0)
            .unwrap();
        assert!((v - (4.0 + 0.8 + PI * 0.01)).abs() < 1e-13, "got {v}");
        // ε → 0 recovers the disk tilt integral
        let v = Region::disk(1.0)
            .unwrap()
            .epsilon_neighborhood_integral(1e-10, 1.0)
            .unwrap();
        assert!((v - PI * (1.0 - (-1.0f64).exp())).abs() < 1e-8);
    }

    #[test]
    fn epsilon_integral_monotone_and_converges() {
        for region in [Region::square(1.2).unwrap(), Region::disk(0.8).unwrap()] {
            for &lambda in &[0.0, 1.0, 5.0] {
                let z0 = region.moments(lambda).unwrap().z0;
                let mut prev = f64::INFINITY;
                for &eps in &[1e-1, 1e-2, 1e-3, 1e-4, 1e-10] {
                    let v = region.epsilon_neighborhood_integral(eps, lambda).unwrap();
                    assert!(v <= prev, "not nonincreasing at ε={eps}");
                    assert!(v >= z0, "must dominate the core integral");
                    prev = v;
                }
                assert!((prev - z0).abs() < 1e-8 * z0.max(1.0), "λ={lambda}");
            }
        }
    }

    #[test]
    fn polygon_epsilon_integral_is_bbox_overestimate() {
        let poly = unit_square_polygon();
        let square = Region::square(1.0).unwrap();
        for &(eps, lambda) in &[(0.3, 0.0), (0.3, 1.0), (0.05, 4.0)] {
            let vb = poly.epsilon_neighborhood_integral(eps, lambda).unwrap();
            let vm = square.epsilon_neighborhood_integral(eps, lambda).unwrap();
            assert!(
                vb >= vm - 1e-12,
                "bbox version must dominate the Minkowski version"
            );
        }
        // at λ = 0 the gap is exactly the corner deficit (4 - π) ε²
        let eps = 0.3;
        let vb = poly.epsilon_neighborhood_integral(eps, 0.0).unwrap();
        let vm = square.epsilon_neighborhood_integral(eps, 0.0).unwrap();
        assert!((vb - vm - (4.0 - PI) * eps * eps).abs() < 1e-12);
    }

    #[test]
    fn corner_patch_matches_polar_midpoint_oracle() {
        // dense tensor midpoint rule in (θ, ρ), an independent route
        let (a, eps, lambda) = (1.0, 0.5, 1.0);
        let n = 1500;
        let dt = std::f64::consts::FRAC_PI_2 / n as f64;
        let dr = eps / n as f64;
        let mut oracle = 0.0;
        for i in 0..n {
            let theta = (i as f64 + 0.5) * dt;
            let (sin, cos) = theta.sin_cos();
            for j in 0..n {
                let rho = (j as f64 + 0.5) * dr;
                let y_re = a + rho * cos;
                let y_im = a + rho * sin;
                oracle += rho * (-lambda * (y_re * y_re + y_im * y_im)).exp();
            }
        }
        oracle *= dt * dr;
        let v = square_corner_patch(a, eps, lambda).unwrap();
        assert!(
            (v - oracle).abs() < 1e-6 * oracle,
            "{v} vs oracle {oracle}"
        );
    }

    #[test]
    fn corner_patch_branch_consistency() {
        // same (b, ε, λ) evaluated by both inner routes where both are valid
        let (b, eps) = (1.4, 0.8);
        let lambda = 0.5 / (eps * (eps + 2.0 * b)); // x = 0.5 exactly at the switch
        let closed = corner_rho_integral(b, eps, lambda * 1.000001).unwrap();
        let quad = corner_rho_integral(b, eps, lambda * 0.999999).unwrap();
        assert!((closed - quad).abs() < 1e-6 * closed.abs());
    }

    #[test]
    fn containment_and_projection() {
        let disk = Region::disk(1.0).unwrap();
        assert!(disk.contains(c(0.6, 0.6)));
        assert!(!disk.contains(c(0.8, 0.8)));
        let p = disk.project_inward(c(3.0, 4.0)).unwrap();
        assert!((p.norm() - 1.0).abs() < 1e-12);
        assert!(disk.contains(p));

        let sq = Region::square(1.0).unwrap();
        let p = sq.project_inward(c(2.0, 0.5)).unwrap();
        assert!((p.re - 1.0).abs() < 1e-12 && (p.im - 0.25).abs() < 1e-12);

        let poly = unit_square_polygon();
        assert!(poly.contains(c(0.0, 0.0)));
        assert!(poly.contains(c(1.0, 1.0))); // vertex counts as inside
        assert!(!poly.contains(c(1.5, 0.0)));
        let p = poly.project_inward(c(2.0, 0.0)).unwrap();
        assert!(poly.contains(p));
        assert!((p.re - 1.0).abs() < 1e-6 && p.im.abs() < 1e-12);
    }

    #[test]
    fn scale_covariance() {
        let poly = Region::polygon(vec![c(1.5, -0.5), c(0.8, 1.2), c(-1.1, 0.9), c(-0.7, -1.3)])
            .unwrap();
        for &cc in &[0.1, 1.0, 7.0] {
            let scaled = poly.scale(cc);
            assert!(
                (scaled.area() - cc * cc * poly.area()).abs() < 1e-12 * scaled.area()
            );
            assert!(
                (scaled.uniform_power() - cc * cc * poly.uniform_power()).abs()
                    < 1e-12 * scaled.uniform_power()
            );
        }
    }

    #[test]
    fn region_spec_round_trip() {
        let json = r#"{"shape":"square","half_side":1.0}"#;
        let spec: RegionSpec = serde_json::from_str(json).unwrap();
        let region = Region::try_from(spec).unwrap();
        assert_eq!(region.area(), 4.0);

        let json = r#"{"shape":"polygon","vertices":[[1,-1],[1,1],[-1,1],[-1,-1]]}"#;
        let spec: RegionSpec = serde_json::from_str(json).unwrap();
        let region = Region::try_from(spec).unwrap();
        assert!((region.area() - 4.0).abs() < 1e-14);

        let back = serde_json::to_string(&RegionSpec::from(&region)).unwrap();
        assert!(back.contains("polygon"));
    }
}
