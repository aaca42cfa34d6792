//! Finite channel-input ensembles: square QAM grids and step-function
//! discretizations of the max-entropy density.

use num_complex::Complex64;
use std::io::Write;

use crate::error::{Error, Result};
use crate::maxent::{fstar_density, MaxEntSolution};
use crate::numerics::sum::pairwise_sum;
use crate::regions::{Region, Shape};

/// Separable structure of a grid constellation: the point set is the
/// product of two independent real grids. Mutual information over the
/// complex Gaussian channel then splits into two 1-D problems, which is
/// what makes the 2^16- and 2^22-point sweeps tractable.
#[derive(Debug, Clone)]
pub struct ProductGrid {
    pub re_points: Vec<f64>,
    pub re_probs: Vec<f64>,
    pub im_points: Vec<f64>,
    pub im_probs: Vec<f64>,
}

/// A finite set of complex channel inputs with probabilities.
#[derive(Debug, Clone)]
pub struct Constellation {
    points: Vec<Complex64>,
    probs: Vec<f64>,
    power: f64,
    product: Option<ProductGrid>,
    region: Option<Region>,
}

impl Constellation {
    /// Build from explicit points and probabilities.
    pub fn new(points: Vec<Complex64>, probs: Vec<f64>) -> Result<Self> {
        Self::build(points, probs, None, None)
    }

    fn build(
        points: Vec<Complex64>,
        probs: Vec<f64>,
        product: Option<ProductGrid>,
        region: Option<Region>,
    ) -> Result<Self> {
        if points.is_empty() || points.len() != probs.len() {
            return Err(Error::InvalidConstellation(format!(
                "constellation needs matching nonempty point/probability lists \
                 (got {} points, {} probabilities)",
                points.len(),
                probs.len()
            )));
        }
        if probs.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidConstellation(
                "probabilities must be nonnegative and finite".into(),
            ));
        }
        let total = pairwise_sum(&probs);
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConstellation(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        if let Some(region) = &region {
            if let Some(bad) = points.iter().find(|x| !region.contains(**x)) {
                return Err(Error::InvalidConstellation(format!(
                    "point {bad} falls outside the attached region"
                )));
            }
        }
        let weighted: Vec<f64> = points
            .iter()
            .zip(&probs)
            .map(|(x, p)| p * x.norm_sqr())
            .collect();
        let power = pairwise_sum(&weighted);
        Ok(Self {
            points,
            probs,
            power,
            product,
            region,
        })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Mean power Σ pᵢ |xᵢ|².
    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn product_grid(&self) -> Option<&ProductGrid> {
        self.product.as_ref()
    }

    pub fn region(&self) -> Option<&Region> {
        self.region.as_ref()
    }

    /// CSV rows `re,im,prob` with a `# power=` header comment.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# power={}", self.power)?;
        writeln!(out, "re,im,prob")?;
        for (x, p) in self.points.iter().zip(&self.probs) {
            writeln!(out, "{},{},{}", x.re, x.im, p)?;
        }
        Ok(())
    }
}

/// Square 2^m-ary QAM scaled to the requested mean power.
///
/// Points live on the odd-integer grid {±1, ±3, ...}² with equal
/// probabilities, scaled so Σ p|x|² equals `target_power` to rounding.
pub fn qam(m: u32, target_power: f64) -> Result<Constellation> {
    if !m.is_multiple_of(2) || !(2..=24).contains(&m) {
        return Err(Error::InvalidOrder(m));
    }
    assert!(
        target_power > 0.0 && target_power.is_finite(),
        "QAM target power must be positive"
    );
    let per_axis = 1usize << (m / 2);
    let n = per_axis as f64;
    // mean square of {±1, ±3, ..., ±(n-1)} is (n² - 1)/3, per axis
    let unscaled_power = 2.0 * (n * n - 1.0) / 3.0;
    let scale = (target_power / unscaled_power).sqrt();
    let axis: Vec<f64> = (0..per_axis)
        .map(|k| scale * (2.0 * k as f64 - n + 1.0))
        .collect();
    let axis_probs = vec![1.0 / n; per_axis];
    from_product_grid(axis.clone(), axis_probs.clone(), axis, axis_probs, None)
}

/// Step-function discretization of f★: the bounding box of S is cut into
/// n_per_axis² cells; every cell that meets S contributes one point (the
/// cell center, pulled radially onto S when the center falls outside) with
/// probability proportional to f★ at that point times the cell area.
pub fn discretize_fstar(
    region: &Region,
    sol: &MaxEntSolution,
    n_per_axis: usize,
) -> Result<Constellation> {
    assert!(n_per_axis >= 2, "need at least 2 cells per axis");
    let (x0, x1, y0, y1) = region.bounding_box();
    let nx = n_per_axis;
    let dx = (x1 - x0) / nx as f64;
    let dy = (y1 - y0) / nx as f64;
    let cell_area = dx * dy;

    // squares keep the exact product structure: the bounding box is the
    // region, every center is interior, and the tilt factorizes
    if let Shape::Square { .. } = region.shape() {
        let centers: Vec<f64> = (0..nx).map(|i| x0 + (i as f64 + 0.5) * dx).collect();
        let weights: Vec<f64> = centers
            .iter()
            .map(|&u| (-sol.lambda * u * u).exp())
            .collect();
        let total = pairwise_sum(&weights);
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        return from_product_grid(
            centers.clone(),
            probs.clone(),
            centers,
            probs,
            Some(region.clone()),
        );
    }

    let mut points = Vec::new();
    let mut weights = Vec::new();
    for j in 0..nx {
        for i in 0..nx {
            let center = Complex64::new(x0 + (i as f64 + 0.5) * dx, y0 + (j as f64 + 0.5) * dy);
            let point = if region.contains(center) {
                center
            } else {
                let (cx0, cx1) = (x0 + i as f64 * dx, x0 + (i as f64 + 1.0) * dx);
                let (cy0, cy1) = (y0 + j as f64 * dy, y0 + (j as f64 + 1.0) * dy);
                if !cell_meets_region(region, cx0, cx1, cy0, cy1) {
                    continue;
                }
                match region.project_inward(center) {
                    Some(p) => p,
                    None => continue,
                }
            };
            let w = fstar_density(region, sol, point) * cell_area;
            if w > 0.0 {
                points.push(point);
                weights.push(w);
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    let total = pairwise_sum(&weights);
    let probs = weights.iter().map(|w| w / total).collect();
    Constellation::build(points, probs, None, Some(region.clone()))
}

fn from_product_grid(
    re_points: Vec<f64>,
    re_probs: Vec<f64>,
    im_points: Vec<f64>,
    im_probs: Vec<f64>,
    region: Option<Region>,
) -> Result<Constellation> {
    let mut points = Vec::with_capacity(re_points.len() * im_points.len());
    let mut probs = Vec::with_capacity(points.capacity());
    for (v, pv) in im_points.iter().zip(&im_probs) {
        for (u, pu) in re_points.iter().zip(&re_probs) {
            points.push(Complex64::new(*u, *v));
            probs.push(pu * pv);
        }
    }
    let product = ProductGrid {
        re_points,
        re_probs,
        im_points,
        im_probs,
    };
    Constellation::build(points, probs, Some(product), region)
}

/// Conservative rectangle-vs-region intersection test for boundary cells.
fn cell_meets_region(region: &Region, x0: f64, x1: f64, y0: f64, y1: f64) -> bool {
    match region.shape() {
        Shape::Square { .. } => true, // bounding box equals the region
        Shape::Disk { radius } => {
            // nearest point of the rectangle to the origin
            let nx = 0.0f64.clamp(x0, x1);
            let ny = 0.0f64.clamp(y0, y1);
            nx * nx + ny * ny <= radius * radius
        }
        Shape::Polygon { vertices } => {
            let corners = [
                Complex64::new(x0, y0),
                Complex64::new(x1, y0),
                Complex64::new(x1, y1),
                Complex64::new(x0, y1),
            ];
            if corners.iter().any(|&p| region.contains(p)) {
                return true;
            }
            if vertices
                .iter()
                .any(|v| v.re >= x0 && v.re <= x1 && v.im >= y0 && v.im <= y1)
            {
                return true;
            }
            // edge crossings
            let n = vertices.len();
            for i in 0..n {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                for k in 0..4 {
                    let (p, q) = (corners[k], corners[(k + 1) % 4]);
                    if segments_cross(a, b, p, q) {
                        return true;
                    }
                }
            }
            false
        }
    }
}

fn segments_cross(p1: Complex64, p2: Complex64, p3: Complex64, p4: Complex64) -> bool {
    let orient = |p: Complex64, q: Complex64, r: Complex64| {
        (q.re - p.re) * (r.im - p.im) - (q.im - p.im) * (r.re - p.re)
    };
    let d1 = orient(p3, p4, p1);
    let d2 = orient(p3, p4, p2);
    let d3 = orient(p1, p2, p3);
    let d4 = orient(p1, p2, p4);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}
