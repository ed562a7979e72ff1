//! Curvature of `log det H` on one-quasihole slices, by five-point
//! Laplacians over common-random-number Gram fields.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::gram::{adjoint, matmul, sample_field, Budget, GramField};
use super::model::{Chart, GramModel, SphereModel, TorusModel};
use crate::chern::{ch_filled, slice_pullback, SingleLayerConfig};
use crate::error::BerryError;
use crate::laughlin::{quasihole_shift_factors, SphereData, TorusData};
use crate::ring::Rational;

#[derive(Debug, Clone)]
pub enum Surface {
    Sphere(SphereData),
    Torus(TorusData),
}

impl Surface {
    fn counts(&self) -> (u32, usize, usize, u32) {
        match self {
            Surface::Sphere(d) => (d.b, d.n, d.m, 0),
            Surface::Torus(d) => (d.b, d.n, d.m, 1),
        }
    }
}

/// Grid size per direction, sphere stencil arm, and sampling budget. On the
/// torus the arm is the grid spacing.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SliceSpec {
    pub grid: usize,
    pub step: f64,
    pub budget: Budget,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityPoint {
    pub chart: &'static str,
    pub w: [f64; 2],
    pub logdet: f64,
    pub density: f64,
    pub area: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FluxEstimate {
    pub value: f64,
    pub stat_error: f64,
    pub discretization_error_estimate: f64,
    /// Floating-point bound on the summed stencil.
    pub rounding_error: f64,
}

impl FluxEstimate {
    pub fn combined(&self) -> f64 {
        3.0 * self.stat_error + self.discretization_error_estimate + self.rounding_error
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChartIntegrals {
    pub plane: f64,
    pub inverted: f64,
    pub difference_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SliceChernResult {
    pub measured: f64,
    pub predicted: String,
    pub predicted_value: f64,
    pub stat_error: f64,
    pub discretization_error_estimate: f64,
    pub combined_error: f64,
    pub periodic_flux: Option<FluxEstimate>,
    pub analytic_flux: Option<f64>,
    pub direct_integral: Option<f64>,
    pub charts: Option<ChartIntegrals>,
    pub inconclusive: bool,
    pub passed: bool,
    pub density: Vec<DensityPoint>,
}

/// Generic fixed positions for the quasiholes that stay put.
pub fn default_frozen(m: usize) -> Vec<Complex64> {
    (1..m)
        .map(|g| Complex64::new(0.61 - 0.17 * g as f64, 0.43 + 0.11 * g as f64))
        .collect()
}

/// Trace of the first Chern class on the slice, from the closed form.
pub fn predicted_slice(surface: &Surface) -> Result<Rational, BerryError> {
    let (b, n, m, g) = surface.counts();
    let cfg = SingleLayerConfig::with_p(b as i64, 1, g, n as i64, m as i64, 0)?;
    Ok(slice_pullback(&ch_filled(&cfg)?)?)
}

/// `-(i/2π) ∂∂̄ F` per unit area from a five-point cross with arms `hx`, `hy`.
pub fn five_point_density(centre: f64, xs: [f64; 2], ys: [f64; 2], hx: f64, hy: f64) -> f64 {
    let lap = (xs[0] + xs[1] - 2.0 * centre) / (hx * hx) + (ys[0] + ys[1] - 2.0 * centre) / (hy * hy);
    -lap / (4.0 * PI)
}

pub fn slice_chern_number(
    surface: &Surface,
    frozen: &[Complex64],
    spec: &SliceSpec,
) -> Result<SliceChernResult, BerryError> {
    let predicted = predicted_slice(surface)?;
    let mut result = match surface {
        Surface::Sphere(data) => sphere_slice(data, frozen, spec)?,
        Surface::Torus(data) => torus_slice(data, frozen, spec)?,
    };
    let target = predicted.to_f64();
    result.predicted = predicted.to_string();
    result.predicted_value = target;
    let tolerance = (0.1 * target.abs()).max(result.combined_error);
    result.inconclusive = result.combined_error > 0.5;
    let flux_ok = result.periodic_flux.map_or(true, |f| f.value.abs() <= f.combined());
    let charts_ok = result
        .charts
        .map_or(true, |c| (c.plane - c.inverted).abs() <= c.difference_error);
    result.passed = (result.measured - target).abs() <= tolerance && flux_ok && charts_ok;
    Ok(result)
}

fn check_spec(spec: &SliceSpec, m: usize, frozen: &[Complex64]) -> Result<(), BerryError> {
    if spec.grid < 4 || !(spec.step > 0.0) {
        return Err(BerryError::Setup("grid must be at least 4 and step positive".into()));
    }
    if frozen.len() + 1 != m {
        return Err(BerryError::Setup(format!(
            "{} frozen quasiholes given, expected {}",
            frozen.len(),
            m - 1
        )));
    }
    Ok(())
}

const CROSS: [(f64, f64); 9] = [
    (0.0, 0.0),
    (1.0, 0.0),
    (-1.0, 0.0),
    (0.0, 1.0),
    (0.0, -1.0),
    (2.0, 0.0),
    (-2.0, 0.0),
    (0.0, 2.0),
    (0.0, -2.0),
];

struct SphereGrid {
    dtheta: f64,
    dphi: f64,
    centres: Vec<(f64, f64)>,
}

impl SphereGrid {
    fn new(n: usize) -> Self {
        let dtheta = PI / n as f64;
        let dphi = 2.0 * PI / n as f64;
        let centres = (0..n)
            .flat_map(|j| (0..n).map(move |k| ((j as f64 + 0.5) * dtheta, (k as f64 + 0.5) * dphi)))
            .collect();
        SphereGrid {
            dtheta,
            dphi,
            centres,
        }
    }

    /// Chart coordinate and area element `dA / (dθ dφ)`.
    fn point(chart: Chart, theta: f64, phi: f64) -> (Complex64, f64) {
        let half = theta / 2.0;
        match chart {
            Chart::Plane => {
                let r = half.tan();
                (Complex64::from_polar(r, phi), r * 0.5 / half.cos().powi(2))
            }
            Chart::Inverted => {
                let r = 1.0 / half.tan();
                (Complex64::from_polar(r, -phi), r * 0.5 / half.sin().powi(2))
            }
        }
    }

    fn nodes(&self, chart: Chart, h: f64) -> Vec<Complex64> {
        self.centres
            .iter()
            .flat_map(|&(t, p)| {
                let (c, _) = Self::point(chart, t, p);
                CROSS.iter().map(move |&(dx, dy)| c + Complex64::new(dx * h, dy * h))
            })
            .collect()
    }

    /// Integral of the density using arm `scale·h`, over centres selected by
    /// `keep(θ)`.
    fn integral(&self, chart: Chart, f: &[f64], h: f64, scale: usize, keep: impl Fn(f64) -> bool) -> f64 {
        let o = if scale == 1 { 1 } else { 5 };
        let arm = h * scale as f64;
        let mut acc = 0.0;
        for (c, &(t, p)) in self.centres.iter().enumerate() {
            if !keep(t) {
                continue;
            }
            let v = &f[c * 9..c * 9 + 9];
            let rho = five_point_density(v[0], [v[o], v[o + 1]], [v[o + 2], v[o + 3]], arm, arm);
            let (_, area) = Self::point(chart, t, p);
            acc += rho * area * self.dtheta * self.dphi;
        }
        acc
    }
}

fn north(t: f64) -> bool {
    t <= PI / 2.0
}

fn sphere_slice(data: &SphereData, frozen: &[Complex64], spec: &SliceSpec) -> Result<SliceChernResult, BerryError> {
    check_spec(spec, data.m, frozen)?;
    let grid = SphereGrid::new(spec.grid);
    let h = spec.step;
    let model = |chart| SphereModel {
        data: *data,
        frozen: frozen.to_vec(),
        chart,
    };
    let plane = sample_field(&model(Chart::Plane), &grid.nodes(Chart::Plane, h), spec.budget)?;
    let inverted = sample_field(&model(Chart::Inverted), &grid.nodes(Chart::Inverted, h), spec.budget)?;

    let integrals = |skip: Option<usize>, scale: usize| -> Result<(f64, f64, f64), BerryError> {
        let fp = plane.logdets(skip)?;
        let fi = inverted.logdets(skip)?;
        let hybrid = grid.integral(Chart::Plane, &fp, h, scale, north)
            + grid.integral(Chart::Inverted, &fi, h, scale, |t| !north(t));
        let whole_p = grid.integral(Chart::Plane, &fp, h, scale, |_| true);
        let whole_i = grid.integral(Chart::Inverted, &fi, h, scale, |_| true);
        Ok((hybrid, whole_p, whole_i))
    };
    let (measured, stat) = plane.jackknife(|skip| Ok(integrals(skip, 1)?.0))?;
    let (_, diff_stat) = plane.jackknife(|skip| {
        let (_, p, i) = integrals(skip, 1)?;
        Ok(p - i)
    })?;
    let (hyb, p1, i1) = integrals(None, 1)?;
    let (hyb2, p2, i2) = integrals(None, 2)?;
    let disc = (hyb - hyb2).abs() / 3.0;
    let disc_charts = ((p1 - p2).abs() + (i1 - i2).abs()) / 3.0;

    let fp = plane.logdets(None)?;
    let fi = inverted.logdets(None)?;
    let mut density = Vec::with_capacity(grid.centres.len());
    for (c, &(t, p)) in grid.centres.iter().enumerate() {
        let (chart, f, label) = if north(t) {
            (Chart::Plane, &fp, "plane")
        } else {
            (Chart::Inverted, &fi, "inverted")
        };
        let v = &f[c * 9..c * 9 + 9];
        let (w, area) = SphereGrid::point(chart, t, p);
        density.push(DensityPoint {
            chart: label,
            w: [w.re, w.im],
            logdet: v[0],
            density: five_point_density(v[0], [v[1], v[2]], [v[3], v[4]], h, h),
            area: area * grid.dtheta * grid.dphi,
        });
    }
    Ok(SliceChernResult {
        measured,
        predicted: String::new(),
        predicted_value: 0.0,
        stat_error: stat,
        discretization_error_estimate: disc,
        combined_error: 3.0 * stat + disc,
        periodic_flux: None,
        analytic_flux: None,
        direct_integral: None,
        charts: Some(ChartIntegrals {
            plane: p1,
            inverted: i1,
            difference_error: 3.0 * diff_stat + disc_charts,
        }),
        inconclusive: false,
        passed: false,
        density,
    })
}

/// Rectangle `[0,1) × [0, Im τ)` in `w₁`, a fundamental domain for the
/// lattice. Node `(i, j)` for `i, j ∈ -2..N+2` sits at the cell centre, so
/// both the `h` and `2h` crosses of every interior node are grid nodes.
pub struct TorusGrid {
    pub n: usize,
    pub hx: f64,
    pub hy: f64,
}

impl TorusGrid {
    pub fn new(n: usize, tau_im: f64) -> Self {
        TorusGrid {
            n,
            hx: 1.0 / n as f64,
            hy: tau_im / n as f64,
        }
    }

    fn side(&self) -> usize {
        self.n + 4
    }

    fn index(&self, i: isize, j: isize) -> usize {
        (i + 2) as usize * self.side() + (j + 2) as usize
    }

    pub fn nodes(&self) -> Vec<Complex64> {
        let s = self.side() as isize;
        (0..s)
            .flat_map(|i| {
                (0..s).map(move |j| {
                    Complex64::new((i as f64 - 1.5) * self.hx, (j as f64 - 1.5) * self.hy)
                })
            })
            .collect()
    }

    pub fn density(&self, f: &[f64], i: isize, j: isize, scale: isize) -> f64 {
        let at = |a, b| f[self.index(a, b)];
        let c = at(i, j);
        five_point_density(
            c,
            [at(i + scale, j), at(i - scale, j)],
            [at(i, j + scale), at(i, j - scale)],
            self.hx * scale as f64,
            self.hy * scale as f64,
        )
    }

    /// `ε · Σ |stencil terms|` over the summed densities.
    pub fn rounding(&self, f: &[f64]) -> f64 {
        let n = self.n as isize;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let at = |a, b| f[self.index(a, b)].abs();
                let xs = at(i + 1, j) + at(i - 1, j) + 2.0 * at(i, j);
                let ys = at(i, j + 1) + at(i, j - 1) + 2.0 * at(i, j);
                acc += xs / (self.hx * self.hx) + ys / (self.hy * self.hy);
            }
        }
        8.0 * f64::EPSILON * acc * self.hx * self.hy / (4.0 * PI)
    }

    pub fn flux(&self, f: &[f64], scale: isize) -> f64 {
        let n = self.n as isize;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += self.density(f, i, j, scale);
            }
        }
        acc * self.hx * self.hy
    }
}

/// Flux of `-(i/2π)∂∂̄ (log det H + extra(w))` over the torus grid.
pub fn grid_flux(
    field: &GramField,
    grid: &TorusGrid,
    extra: impl Fn(Complex64) -> f64,
) -> Result<FluxEstimate, BerryError> {
    let values = |skip| -> Result<Vec<f64>, BerryError> {
        let mut f = field.logdets(skip)?;
        for (x, &w) in f.iter_mut().zip(&field.nodes) {
            *x += extra(w);
        }
        Ok(f)
    };
    let (value, stat) = field.jackknife(|skip| Ok(grid.flux(&values(skip)?, 1)))?;
    let full = values(None)?;
    let coarse = grid.flux(&full, 2);
    Ok(FluxEstimate {
        value,
        stat_error: stat,
        discretization_error_estimate: (value - coarse).abs() / 3.0,
        rounding_error: grid.rounding(&full),
    })
}

fn torus_field(data: &TorusData, frozen: &[Complex64], spec: &SliceSpec) -> Result<(TorusGrid, GramField), BerryError> {
    check_spec(spec, data.m, frozen)?;
    let grid = TorusGrid::new(spec.grid, data.tau.im());
    let model = TorusModel {
        data: data.clone(),
        frozen: frozen.to_vec(),
    };
    let field = sample_field(&model, &grid.nodes(), spec.budget)?;
    Ok((grid, field))
}

fn ln_h_with(data: &TorusData, frozen: &[Complex64], w1: Complex64) -> f64 {
    let mut w = vec![w1];
    w.extend_from_slice(frozen);
    data.ln_h(&w)
}

/// Flux of `log det H'` with `H' = H·h(w)`; doubly periodic, so zero.
pub fn periodic_part_flux(data: &TorusData, frozen: &[Complex64], spec: &SliceSpec) -> Result<FluxEstimate, BerryError> {
    let (grid, field) = torus_field(data, frozen, spec)?;
    let b = data.b as f64;
    grid_flux(&field, &grid, |w| b * ln_h_with(data, frozen, w))
}

/// Flux of `-b log h` over the slice: `∂∂̄ (Im w)² = 1/2` on each term.
pub fn analytic_h_flux(data: &TorusData) -> f64 {
    let (b, n, im) = (data.b as f64, data.n as f64, data.tau.im());
    let ddbar_ln_h = -(2.0 * PI / im) * (1.0 / b + n) * 0.5;
    -(1.0 / PI) * (-b * ddbar_ln_h) * im
}

fn torus_slice(data: &TorusData, frozen: &[Complex64], spec: &SliceSpec) -> Result<SliceChernResult, BerryError> {
    let (grid, field) = torus_field(data, frozen, spec)?;
    let b = data.b as f64;
    let periodic = grid_flux(&field, &grid, |w| b * ln_h_with(data, frozen, w))?;
    let analytic = analytic_h_flux(data);
    let f = field.logdets(None)?;
    let direct = grid.flux(&f, 1);
    let n = grid.n as isize;
    let mut density = Vec::with_capacity(grid.n * grid.n);
    for i in 0..n {
        for j in 0..n {
            let w = field.nodes[grid.index(i, j)];
            density.push(DensityPoint {
                chart: "torus",
                w: [w.re, w.im],
                logdet: f[grid.index(i, j)],
                density: grid.density(&f, i, j, 1),
                area: grid.hx * grid.hy,
            });
        }
    }
    Ok(SliceChernResult {
        measured: periodic.value + analytic,
        predicted: String::new(),
        predicted_value: 0.0,
        stat_error: periodic.stat_error,
        discretization_error_estimate: periodic.discretization_error_estimate + periodic.rounding_error,
        combined_error: periodic.combined(),
        periodic_flux: Some(periodic),
        analytic_flux: Some(analytic),
        direct_integral: Some(direct),
        charts: None,
        inconclusive: false,
        passed: false,
        density,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugationPoint {
    pub w: [f64; 2],
    /// Largest entrywise deviation in units of the combined standard error.
    pub sigmas_one: f64,
    pub sigmas_tau: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugationReport {
    pub points: Vec<ConjugationPoint>,
    pub violations: Vec<String>,
    pub samples: usize,
}

impl ConjugationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `H'(w+1) = P H'(w) P⁻¹` and `H'(w+τ) = Q⁻¹ H'(w) Q`, the latter being the
/// index shift `H'_{lk} ↦ H'_{l+1,k+1}`. Entries must agree within 4
/// combined standard errors.
pub fn conjugation_check(
    data: &TorusData,
    frozen: &[Complex64],
    ws: &[Complex64],
    budget: Budget,
) -> Result<ConjugationReport, BerryError> {
    if frozen.len() + 1 != data.m {
        return Err(BerryError::Setup("frozen quasihole count must be m - 1".into()));
    }
    let tau = data.tau.tau();
    let nodes: Vec<Complex64> = ws.iter().flat_map(|&w| [w, w + 1.0, w + tau]).collect();
    let model = TorusModel {
        data: data.clone(),
        frozen: frozen.to_vec(),
    };
    let field = sample_field(&model, &nodes, budget)?;
    let (p, q) = quasihole_shift_factors(data.b);
    let b = data.b as usize;
    let mut report = ConjugationReport {
        points: Vec::new(),
        violations: Vec::new(),
        samples: budget.samples,
    };
    let scaled = |node: usize| {
        let est = field.estimate(node);
        let h = ln_h_with(data, frozen, nodes[node]).exp();
        let m: Vec<Vec<Complex64>> = est.h.iter().map(|r| r.iter().map(|x| x * h).collect()).collect();
        let s: Vec<Vec<f64>> = est.stderr.iter().map(|r| r.iter().map(|x| x * h).collect()).collect();
        (m, s)
    };
    for (i, &w) in ws.iter().enumerate() {
        let (h0, s0) = scaled(3 * i);
        let (h1, s1) = scaled(3 * i + 1);
        let (ht, st) = scaled(3 * i + 2);
        let via_p = matmul(&matmul(&p, &h0), &adjoint(&p));
        let via_q = matmul(&matmul(&adjoint(&q), &h0), &q);
        let mut worst = [0.0f64; 2];
        for l in 0..b {
            for k in 0..b {
                let e1 = (s1[l][k].powi(2) + s0[l][k].powi(2)).sqrt();
                let et = (st[l][k].powi(2) + s0[(l + 1) % b][(k + 1) % b].powi(2)).sqrt();
                worst[0] = worst[0].max((h1[l][k] - via_p[l][k]).norm() / e1);
                worst[1] = worst[1].max((ht[l][k] - via_q[l][k]).norm() / et);
            }
        }
        if !(worst[0] <= 4.0) {
            report.violations.push(format!("w={w}: +1 shift off by {:.2} sigma", worst[0]));
        }
        if !(worst[1] <= 4.0) {
            report.violations.push(format!("w={w}: +tau shift off by {:.2} sigma", worst[1]));
        }
        report.points.push(ConjugationPoint {
            w: [w.re, w.im],
            sigmas_one: worst[0],
            sigmas_tau: worst[1],
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioPoint {
    pub w: [f64; 2],
    pub ratio: f64,
    pub stderr: f64,
    pub expected: f64,
}

impl RatioPoint {
    pub fn within(&self, sigmas: f64) -> bool {
        (self.ratio - self.expected).abs() <= sigmas * self.stderr
    }
}

/// One particle, one quasihole, `b = 1` on the sphere: `H(w)/H(0)` against
/// `1 + |w|²`.
pub fn sphere_ratio_check(points: &[Complex64], budget: Budget) -> Result<Vec<RatioPoint>, BerryError> {
    let model = SphereModel {
        data: SphereData::new(1, 1, 1)?,
        frozen: Vec::new(),
        chart: Chart::Plane,
    };
    let mut nodes = vec![Complex64::new(0.0, 0.0)];
    nodes.extend_from_slice(points);
    let field = sample_field(&model, &nodes, budget)?;
    points
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let (ratio, stderr) =
                field.jackknife(|skip| Ok(field.mean(i + 1, skip)[0][0].re / field.mean(0, skip)[0][0].re))?;
            Ok(RatioPoint {
                w: [w.re, w.im],
                ratio,
                stderr,
                expected: 1.0 + w.norm_sqr(),
            })
        })
        .collect()
}

/// Exposed so tests and the frozen mode can drive the grid machinery with any
/// model.
pub fn torus_grid_field<M: GramModel>(model: &M, grid: &TorusGrid, budget: Budget) -> Result<GramField, BerryError> {
    sample_field(model, &grid.nodes(), budget)
}
