//! Grid sweeps and Nelder–Mead refinement for the QAOA and classical
//! objectives. Everything here maximizes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::classical::{exact_prob_d2, exact_prob_d3, ClassicalParams};
use crate::error::{LmcError, Result};
use crate::qaoa::{closed_form_f2, closed_form_f3, QaoaAngles};

/// One search axis. Periodic axes are sampled half-open, `[lo, hi)`;
/// closed axes include both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub name: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
}

impl Axis {
    pub const fn periodic(name: &'static str, lo: f64, hi: f64) -> Self {
        Axis { name, lo, hi, periodic: true }
    }

    pub const fn closed(name: &'static str, lo: f64, hi: f64) -> Self {
        Axis { name, lo, hi, periodic: false }
    }

    /// Grid coordinate `i` of `resolution`, offset by `shift` cells.
    pub fn point(&self, i: usize, resolution: usize, shift: f64) -> f64 {
        let width = self.hi - self.lo;
        if self.periodic {
            self.lo + (i as f64 + shift) * width / resolution as f64
        } else {
            (self.lo + (i as f64 + shift) * width / (resolution - 1) as f64).min(self.hi)
        }
    }

    fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridResult {
    pub axes: Vec<Axis>,
    pub resolution: usize,
    pub shift: f64,
    /// Row-major: the first axis varies slowest.
    pub values: Vec<f64>,
    pub best_index: usize,
    pub best_point: Vec<f64>,
    pub best_value: f64,
}

impl GridResult {
    pub fn point(&self, index: usize) -> Vec<f64> {
        grid_point(&self.axes, self.resolution, self.shift, index)
    }

    /// Indices of the `k` largest cells, ties broken by lower index.
    pub fn top_k(&self, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.values.len())
            .filter(|&i| !self.values[i].is_nan())
            .collect();
        idx.sort_by(|&a, &b| self.values[b].total_cmp(&self.values[a]).then(a.cmp(&b)));
        idx.truncate(k);
        idx
    }

    /// CSV with one column per axis and a final `value` column.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for a in &self.axes {
            out.push_str(a.name);
            out.push(',');
        }
        out.push_str("value\n");
        for (i, v) in self.values.iter().enumerate() {
            for x in self.point(i) {
                let _ = write!(out, "{x},");
            }
            let _ = writeln!(out, "{v}");
        }
        out
    }
}

fn grid_point(axes: &[Axis], resolution: usize, shift: f64, mut index: usize) -> Vec<f64> {
    let mut coords = vec![0.0; axes.len()];
    for (k, axis) in axes.iter().enumerate().rev() {
        coords[k] = axis.point(index % resolution, resolution, shift);
        index /= resolution;
    }
    coords
}

/// Evaluate `objective` on the regular grid. The best cell is the largest
/// value, lowest linear index on ties; NaN cells never win.
pub fn grid_sweep<F>(objective: F, axes: &[Axis], resolution: usize, shift: f64) -> Result<GridResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if resolution < 2 {
        return Err(LmcError::InvalidParams("grid resolution must be at least 2".into()));
    }
    if axes.is_empty() || axes.iter().any(|a| !(a.lo.is_finite() && a.hi.is_finite() && a.lo < a.hi)) {
        return Err(LmcError::InvalidParams("grid bounds must be finite and nonempty".into()));
    }
    let cells = resolution
        .checked_pow(axes.len() as u32)
        .filter(|&c| c <= 1 << 28)
        .ok_or(LmcError::Capacity {
            what: "grid cells",
            got: usize::MAX,
            max: 1 << 28,
        })?;
    let values: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|i| objective(&grid_point(axes, resolution, shift, i)))
        .collect();
    let mut best_index = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v > best_value {
            best_value = v;
            best_index = i;
        }
    }
    Ok(GridResult {
        axes: axes.to_vec(),
        resolution,
        shift,
        best_point: grid_point(axes, resolution, shift, best_index),
        values,
        best_index,
        best_value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadOptions {
    /// Stop once the simplex fits in a cube of this side.
    pub xtol: f64,
    /// Or once the vertex values are this close.
    pub ftol: f64,
    pub max_iters: usize,
    pub initial_step: f64,
    /// Fresh simplices built around the incumbent after convergence.
    pub restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            xtol: 1e-9,
            ftol: 1e-14,
            max_iters: 2000,
            initial_step: 0.05,
            restarts: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadResult {
    pub start: Vec<f64>,
    pub start_value: f64,
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub diameter: f64,
    pub spread: f64,
}

fn clamp_into(axes: &[Axis], x: &mut [f64]) {
    for (v, a) in x.iter_mut().zip(axes) {
        *v = a.clamp(*v);
    }
}

struct Simplex {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl Simplex {
    fn sort(&mut self) {
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        order.sort_by(|&a, &b| self.values[b].total_cmp(&self.values[a]));
        self.points = order.iter().map(|&i| self.points[i].clone()).collect();
        self.values = order.iter().map(|&i| self.values[i]).collect();
    }

    fn diameter(&self) -> f64 {
        let best = &self.points[0];
        self.points[1..]
            .iter()
            .flat_map(|p| p.iter().zip(best).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }

    fn spread(&self) -> f64 {
        self.values[0] - self.values[self.values.len() - 1]
    }
}

fn initial_simplex<F: Fn(&[f64]) -> f64>(f: &F, axes: &[Axis], x0: &[f64], step: f64) -> Simplex {
    let mut points = vec![x0.to_vec()];
    for k in 0..x0.len() {
        let mut p = x0.to_vec();
        let width = axes[k].hi - axes[k].lo;
        let h = step * width;
        p[k] = if x0[k] + h <= axes[k].hi { x0[k] + h } else { x0[k] - h };
        clamp_into(axes, &mut p);
        points.push(p);
    }
    let values = points.iter().map(|p| f(p)).collect();
    Simplex { points, values }
}

fn blend(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

fn run_simplex<F: Fn(&[f64]) -> f64>(
    f: &F,
    axes: &[Axis],
    s: &mut Simplex,
    opts: &NelderMeadOptions,
    budget: usize,
) -> (usize, bool) {
    let n = axes.len();
    let mut iters = 0;
    loop {
        s.sort();
        if s.diameter() < opts.xtol || s.spread() < opts.ftol {
            return (iters, true);
        }
        if iters >= budget {
            return (iters, false);
        }
        iters += 1;
        let worst = s.points[n].clone();
        let centroid: Vec<f64> = (0..n)
            .map(|k| s.points[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64)
            .collect();
        let project = |mut x: Vec<f64>| {
            clamp_into(axes, &mut x);
            let v = f(&x);
            (x, v)
        };
        let (xr, fr) = project(blend(&centroid, &worst, -1.0));
        if fr > s.values[0] {
            let (xe, fe) = project(blend(&centroid, &worst, -2.0));
            if fe > fr {
                s.points[n] = xe;
                s.values[n] = fe;
            } else {
                s.points[n] = xr;
                s.values[n] = fr;
            }
            continue;
        }
        if fr > s.values[n - 1] {
            s.points[n] = xr;
            s.values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr > s.values[n] {
            project(blend(&centroid, &xr, 0.5))
        } else {
            project(blend(&centroid, &worst, 0.5))
        };
        if fc > s.values[n].max(fr) {
            s.points[n] = xc;
            s.values[n] = fc;
            continue;
        }
        let best = s.points[0].clone();
        for i in 1..=n {
            let (x, v) = project(blend(&best, &s.points[i], 0.5));
            s.points[i] = x;
            s.values[i] = v;
        }
    }
}

/// Maximize `f` from `start`, clamping every trial point into the axes'
/// box. Running out of iterations is reported through `converged`.
pub fn nelder_mead<F>(f: F, axes: &[Axis], start: &[f64], opts: &NelderMeadOptions) -> Result<NelderMeadResult>
where
    F: Fn(&[f64]) -> f64,
{
    if start.len() != axes.len() {
        return Err(LmcError::DimensionMismatch {
            expected: axes.len(),
            got: start.len(),
        });
    }
    let mut x0 = start.to_vec();
    clamp_into(axes, &mut x0);
    let start_value = f(&x0);
    let mut best = (x0.clone(), start_value);
    let mut iterations = 0;
    let mut converged = false;
    let mut step = opts.initial_step;
    let mut last = Simplex {
        points: vec![x0.clone()],
        values: vec![start_value],
    };
    for _ in 0..=opts.restarts {
        let mut s = initial_simplex(&f, axes, &best.0, step);
        let budget = opts.max_iters.saturating_sub(iterations);
        let (used, ok) = run_simplex(&f, axes, &mut s, opts, budget);
        iterations += used;
        converged = ok;
        let improved = s.values[0] - best.1;
        if s.values[0] > best.1 {
            best = (s.points[0].clone(), s.values[0]);
        }
        last = s;
        if !ok || improved <= opts.ftol {
            break;
        }
        step *= 0.5;
    }
    Ok(NelderMeadResult {
        start: x0,
        start_value,
        value: best.1,
        point: best.0,
        iterations,
        converged,
        diameter: if last.points.len() > 1 { last.diameter() } else { 0.0 },
        spread: if last.values.len() > 1 { last.spread() } else { 0.0 },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOptions {
    pub resolution: usize,
    /// Grid offset in cells.
    pub shift: f64,
    pub top_k: usize,
    pub nelder_mead: NelderMeadOptions,
    /// Refined points closer than this (max-norm) count as one maximum.
    pub distinct: f64,
}

impl OptimizeOptions {
    pub fn qaoa() -> Self {
        OptimizeOptions {
            resolution: 256,
            shift: 0.0,
            top_k: 8,
            nelder_mead: NelderMeadOptions {
                initial_step: 0.01,
                ..NelderMeadOptions::default()
            },
            distinct: 1e-3,
        }
    }

    pub fn classical(d: usize) -> Self {
        OptimizeOptions {
            resolution: if d <= 2 { 21 } else { 11 },
            shift: 0.0,
            top_k: 8,
            nelder_mead: NelderMeadOptions::default(),
            distinct: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMaximum {
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub objective: String,
    pub parameters: Vec<String>,
    pub argmax: Vec<f64>,
    pub value: f64,
    pub grid_resolution: usize,
    pub grid_shift: f64,
    pub grid_best_point: Vec<f64>,
    pub grid_best_value: f64,
    pub options: OptimizeOptions,
    pub refinements: Vec<NelderMeadResult>,
    /// Distinct refined maxima, best first.
    pub maxima: Vec<LocalMaximum>,
}

fn distinct_maxima(results: &[NelderMeadResult], eps: f64) -> Vec<LocalMaximum> {
    let mut sorted: Vec<&NelderMeadResult> = results.iter().collect();
    sorted.sort_by(|a, b| b.value.total_cmp(&a.value));
    let mut out: Vec<LocalMaximum> = Vec::new();
    for r in sorted {
        let seen = out.iter().any(|m| {
            m.point
                .iter()
                .zip(&r.point)
                .all(|(a, b)| (a - b).abs() <= eps)
        });
        if !seen {
            out.push(LocalMaximum {
                point: r.point.clone(),
                value: r.value,
            });
        }
    }
    out
}

/// Coarse grid, then Nelder–Mead from each of the `top_k` best cells.
pub fn grid_then_refine<F>(
    name: &str,
    objective: F,
    axes: &[Axis],
    opts: &OptimizeOptions,
) -> Result<OptimizationReport>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let grid = grid_sweep(&objective, axes, opts.resolution, opts.shift)?;
    let refinements = grid
        .top_k(opts.top_k)
        .into_par_iter()
        .map(|i| nelder_mead(&objective, axes, &grid.point(i), &opts.nelder_mead))
        .collect::<Result<Vec<_>>>()?;
    let maxima = distinct_maxima(&refinements, opts.distinct);
    let best = maxima
        .first()
        .cloned()
        .unwrap_or_else(|| LocalMaximum {
            point: grid.best_point.clone(),
            value: grid.best_value,
        });
    Ok(OptimizationReport {
        objective: name.to_string(),
        parameters: axes.iter().map(|a| a.name.to_string()).collect(),
        value: objective(&best.point),
        argmax: best.point,
        grid_resolution: opts.resolution,
        grid_shift: opts.shift,
        grid_best_point: grid.best_point,
        grid_best_value: grid.best_value,
        options: *opts,
        refinements,
        maxima,
    })
}

pub fn qaoa_axes() -> [Axis; 2] {
    [
        Axis::periodic("gamma", 0.0, 2.0 * PI),
        Axis::periodic("beta", 0.0, PI),
    ]
}

/// Per-vertex closed-form `F/n` for `d ∈ {2, 3}`.
pub fn qaoa_objective(d: usize) -> Result<fn(QaoaAngles) -> f64> {
    match d {
        2 => Ok(|a| closed_form_f2(1.0, a)),
        3 => Ok(|a| closed_form_f3(1.0, a)),
        _ => Err(LmcError::UnsupportedDegree(d)),
    }
}

pub fn optimize_qaoa(d: usize) -> Result<OptimizationReport> {
    optimize_qaoa_with(d, &OptimizeOptions::qaoa())
}

pub fn optimize_qaoa_with(d: usize, opts: &OptimizeOptions) -> Result<OptimizationReport> {
    let f = qaoa_objective(d)?;
    grid_then_refine(
        &format!("qaoa_f{d}_per_vertex"),
        |x: &[f64]| f(QaoaAngles::new(x[0], x[1])),
        &qaoa_axes(),
        opts,
    )
}

const CLASSICAL_NAMES: [&str; 7] = ["p", "q0", "q1", "q2", "q3", "q4", "q5"];

pub fn classical_axes(d: usize) -> Vec<Axis> {
    CLASSICAL_NAMES[..d + 2]
        .iter()
        .map(|&n| Axis::closed(n, 0.0, 1.0))
        .collect()
}

/// Exact per-vertex success probability for `d ∈ {2, 3}`.
pub fn classical_objective(d: usize, params: &ClassicalParams) -> Result<f64> {
    match d {
        2 => exact_prob_d2(params),
        3 => exact_prob_d3(params),
        _ => Err(LmcError::UnsupportedDegree(d)),
    }
}

fn params_from(x: &[f64]) -> ClassicalParams {
    ClassicalParams {
        p: x[0],
        q: x[1..].to_vec(),
    }
}

/// Representative of `x` under `p ↦ 1−p` and `q ↦ 1−q` with `p ≤ 1/2` and
/// `q_d ≥ 1/2`. Both maps leave the success probability unchanged.
pub fn canonical_classical(x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    if y[0] > 0.5 {
        y[0] = 1.0 - y[0];
    }
    if y[y.len() - 1] < 0.5 {
        for q in &mut y[1..] {
            *q = 1.0 - *q;
        }
    }
    y
}

pub fn optimize_classical(d: usize) -> Result<OptimizationReport> {
    optimize_classical_with(d, &OptimizeOptions::classical(d))
}

/// Maximize over `(p, q_0..q_d) ∈ [0,1]^{d+2}`. The returned argmax is
/// canonicalized; `maxima` keeps the raw refined points.
pub fn optimize_classical_with(d: usize, opts: &OptimizeOptions) -> Result<OptimizationReport> {
    if !(2..=3).contains(&d) {
        return Err(LmcError::UnsupportedDegree(d));
    }
    let f = move |x: &[f64]| classical_objective(d, &params_from(x)).unwrap_or(f64::NAN);
    let mut report = grid_then_refine(&format!("classical_d{d}"), f, &classical_axes(d), opts)?;
    report.argmax = canonical_classical(&report.argmax);
    report.value = f(&report.argmax);
    Ok(report)
}

/// `(p, value)` along `p ∈ [0,1]`: for `d = 2` the reduced objective at
/// `q = (0, 0, q_2*(p, 0))`, for `d = 3` the maximum over `q` at fixed `p`.
pub fn classical_curve(d: usize, points: usize) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(LmcError::InvalidParams("curve needs at least 2 points".into()));
    }
    let ps: Vec<f64> = (0..points).map(|i| i as f64 / (points - 1) as f64).collect();
    match d {
        2 => ps
            .into_iter()
            .map(|p| crate::classical::reduced_objective_d2(p).map(|v| (p, v)))
            .collect(),
        3 => {
            let axes: Vec<Axis> = classical_axes(3)[1..].to_vec();
            let opts = OptimizeOptions {
                resolution: 6,
                top_k: 3,
                ..OptimizeOptions::classical(3)
            };
            ps.into_par_iter()
                .map(|p| {
                    let f = |q: &[f64]| {
                        exact_prob_d3(&ClassicalParams { p, q: q.to_vec() }).unwrap_or(f64::NAN)
                    };
                    grid_then_refine("classical_d3_fixed_p", f, &axes, &opts).map(|r| (p, r.value))
                })
                .collect()
        }
        _ => Err(LmcError::UnsupportedDegree(d)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub claim: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub degree: usize,
    pub quantum_value: f64,
    pub classical_value: f64,
    pub winner: String,
    pub checks: Vec<InequalityCheck>,
    pub holds: bool,
    pub quantum: OptimizationReport,
    pub classical: OptimizationReport,
}

/// Optimize both algorithms at degree `d` and test the separation:
/// `d = 2`: classical ≥ 0.95 > quantum, quantum < 0.94;
/// `d = 3`: quantum > 0.81, classical ≤ 0.8.
pub fn separation(d: usize) -> Result<SeparationReport> {
    let quantum = optimize_qaoa(d)?;
    let classical = optimize_classical(d)?;
    let (qv, cv) = (quantum.value, classical.value);
    let check = |claim: &str, holds: bool| InequalityCheck {
        claim: claim.to_string(),
        holds,
    };
    let (winner, checks) = if d == 2 {
        (
            "classical",
            vec![
                check("classical > quantum", cv > qv),
                check("classical >= 0.95 - 1e-6", cv >= 0.95 - 1e-6),
                check("quantum < 0.94", qv < 0.94),
            ],
        )
    } else {
        (
            "quantum",
            vec![
                check("quantum > classical", qv > cv),
                check("quantum > 0.81", qv > 0.81),
                check("classical <= 0.8", cv <= 0.8),
            ],
        )
    };
    Ok(SeparationReport {
        degree: d,
        quantum_value: qv,
        classical_value: cv,
        winner: winner.to_string(),
        holds: checks.iter().all(|c| c.holds),
        checks,
        quantum,
        classical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_points() {
        let a = Axis::periodic("x", 0.0, 1.0);
        assert_eq!(a.point(0, 4, 0.0), 0.0);
        assert_eq!(a.point(3, 4, 0.0), 0.75);
        assert_eq!(a.point(0, 4, 0.5), 0.125);
        let c = Axis::closed("y", 0.0, 1.0);
        assert_eq!(c.point(4, 5, 0.0), 1.0);
        assert_eq!(c.point(4, 5, 0.5), 1.0);
    }

    #[test]
    fn constant_grid_tie_break() {
        let axes = [Axis::closed("x", 0.0, 1.0), Axis::closed("y", 0.0, 1.0)];
        let g = grid_sweep(|_| 1.0, &axes, 5, 0.0).unwrap();
        assert_eq!(g.best_index, 0);
        assert_eq!(g.best_point, vec![0.0, 0.0]);
        assert_eq!(g.top_k(3), vec![0, 1, 2]);
        assert!(grid_sweep(|_| 1.0, &axes, 1, 0.0).is_err());
    }

    #[test]
    fn grid_csv_shape() {
        let g = grid_sweep(|x| x[0] + x[1], &qaoa_axes(), 2, 0.0).unwrap();
        let csv = g.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "gamma,beta,value");
        assert_eq!(lines.len(), 5);
        assert!(lines[2].starts_with("0,"));
    }

    #[test]
    fn quadratic_fixture() {
        let axes = [Axis::closed("x", -1.0, 1.0), Axis::closed("y", -1.0, 1.0)];
        let f = |x: &[f64]| -(x[0] - 0.3).powi(2) - (x[1] - 0.6).powi(2);
        let r = nelder_mead(f, &axes, &[0.0, 0.0], &NelderMeadOptions::default()).unwrap();
        assert!((r.point[0] - 0.3).abs() < 1e-6 && (r.point[1] - 0.6).abs() < 1e-6);
        assert!(r.converged);
        assert!(r.value >= r.start_value);
    }

    #[test]
    fn clamps_to_box() {
        let axes = [Axis::closed("x", 0.0, 1.0)];
        let r = nelder_mead(|x| x[0], &axes, &[0.5], &NelderMeadOptions::default()).unwrap();
        assert_eq!(r.point, vec![1.0]);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let axes = [Axis::closed("x", -1.0, 1.0), Axis::closed("y", -1.0, 1.0)];
        let opts = NelderMeadOptions {
            max_iters: 3,
            ..NelderMeadOptions::default()
        };
        let r = nelder_mead(|x| -(x[0] - 0.3).powi(2) - x[1].powi(2), &axes, &[0.9, 0.9], &opts).unwrap();
        assert!(!r.converged);
        assert!(r.iterations <= 3);
    }

    #[test]
    fn canonical_form() {
        assert_eq!(canonical_classical(&[0.75, 1.0, 1.0, 0.25]), vec![0.25, 0.0, 0.0, 0.75]);
        assert_eq!(canonical_classical(&[0.25, 0.0, 0.0, 0.75]), vec![0.25, 0.0, 0.0, 0.75]);
    }

    #[test]
    fn curve_d2_peaks_at_half() {
        let c = classical_curve(2, 101).unwrap();
        let best = c.iter().cloned().fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
        assert_eq!(best.0, 0.5);
        assert!((best.1 - 0.95).abs() < 1e-12);
    }
}
