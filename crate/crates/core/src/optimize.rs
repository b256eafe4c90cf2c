//! Search over qubit measurement axes: a half-sphere grid followed by a
//! Nelder–Mead polish in `(θ, φ)`.
//!
//! A projector pair is unchanged by `n → −n`, so the grid only covers
//! `θ ∈ (0, π/2)`. Grid rows sit at cell midpoints, which keeps the pole from
//! being sampled `grid_phi` times over. The polish is unconstrained; angles
//! are canonicalised when the axis is built.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::density::MeasurementAxis;
use crate::error::{Error, Result};

/// Settings for the axis search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Polar grid rows over `(0, π/2)`.
    pub grid_theta: usize,
    /// Azimuthal grid columns over `[0, 2π)`.
    pub grid_phi: usize,
    /// Maximum Nelder–Mead iterations; zero disables the polish.
    pub refine_iters: usize,
    /// The polish stops once the simplex values span less than this.
    pub tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            grid_theta: 64,
            grid_phi: 128,
            refine_iters: 200,
            tol: 1e-9,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_theta == 0 || self.grid_phi == 0 {
            return Err(Error::InvalidParameter("optimizer grid sizes must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("optimizer tol must be > 0, got {}", self.tol)));
        }
        Ok(())
    }

    fn theta_step(&self) -> f64 {
        0.5 * PI / self.grid_theta as f64
    }

    fn phi_step(&self) -> f64 {
        2.0 * PI / self.grid_phi as f64
    }

    fn grid_point(&self, k: usize) -> (f64, f64) {
        let (i, j) = (k / self.grid_phi, k % self.grid_phi);
        ((i as f64 + 0.5) * self.theta_step(), j as f64 * self.phi_step())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    Minimize,
    Maximize,
}

impl Goal {
    fn sign(self) -> f64 {
        match self {
            Goal::Minimize => 1.0,
            Goal::Maximize => -1.0,
        }
    }
}

/// Optimum found by an axis search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub axis: MeasurementAxis,
    /// Best value on the grid, before the polish.
    pub grid_value: f64,
    /// Objective calls, grid included.
    pub evaluations: usize,
}

fn finite_or_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Optimises `objective` over measurement axes.
///
/// Grid points are evaluated in parallel; the best one is picked in grid
/// order, so ties go to the smallest `θ` and then the smallest `φ` and the
/// result does not depend on scheduling.
pub fn optimize_axis<F>(objective: F, cfg: &OptimizerConfig, goal: Goal) -> OracleResult
where
    F: Fn(&MeasurementAxis) -> f64 + Sync,
{
    let sign = goal.sign();
    let scaled = |theta: f64, phi: f64| finite_or_inf(sign * objective(&MeasurementAxis::from_angles(theta, phi)));

    let n = cfg.grid_theta * cfg.grid_phi;
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let (t, p) = cfg.grid_point(k);
            scaled(t, p)
        })
        .collect();
    let (best_k, best_grid) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bk, bv), (k, &v)| if v < bv { (k, v) } else { (bk, bv) });
    let start = cfg.grid_point(best_k);

    let mut evaluations = n;
    let (mut best_x, mut best_v) = (start, best_grid);
    if cfg.refine_iters > 0 {
        let (x, v, calls) = nelder_mead(
            |x: [f64; 2]| scaled(x[0], x[1]),
            [start.0, start.1],
            [0.5 * cfg.theta_step(), 0.5 * cfg.phi_step()],
            cfg.refine_iters,
            cfg.tol,
        );
        evaluations += calls;
        if v < best_v {
            best_x = (x[0], x[1]);
            best_v = v;
        }
    }

    OracleResult {
        value: sign * best_v,
        axis: MeasurementAxis::from_angles(best_x.0, best_x.1),
        grid_value: sign * best_grid,
        evaluations,
    }
}

fn nelder_mead<F: Fn([f64; 2]) -> f64>(f: F, x0: [f64; 2], step: [f64; 2], max_iter: usize, tol: f64) -> ([f64; 2], f64, usize) {
    let mut calls = 0usize;
    let mut eval = |x: [f64; 2]| {
        calls += 1;
        f(x)
    };
    let mut simplex = [x0, [x0[0] + step[0], x0[1]], [x0[0], x0[1] + step[1]]];
    let mut fv = [0.0; 3];
    for (v, x) in fv.iter_mut().zip(&simplex) {
        *v = eval(*x);
    }

    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    for _ in 0..max_iter {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| fv[i].total_cmp(&fv[j]));
        simplex = order.map(|i| simplex[i]);
        fv = order.map(|i| fv[i]);
        if (fv[2] - fv[0]).abs() <= tol {
            break;
        }

        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(centroid, simplex[2], -1.0);
        let fr = eval(reflected);
        if fr < fv[0] {
            let expanded = lerp(centroid, simplex[2], -2.0);
            let fe = eval(expanded);
            if fe < fr {
                simplex[2] = expanded;
                fv[2] = fe;
            } else {
                simplex[2] = reflected;
                fv[2] = fr;
            }
        } else if fr < fv[1] {
            simplex[2] = reflected;
            fv[2] = fr;
        } else {
            let contracted = if fr < fv[2] {
                lerp(centroid, reflected, 0.5)
            } else {
                lerp(centroid, simplex[2], 0.5)
            };
            let fc = eval(contracted);
            if fc < fv[2].min(fr) {
                simplex[2] = contracted;
                fv[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = lerp(simplex[0], simplex[k], 0.5);
                    fv[k] = eval(simplex[k]);
                }
            }
        }
    }

    let k = (0..3).min_by(|&i, &j| fv[i].total_cmp(&fv[j])).unwrap_or(0);
    (simplex[k], fv[k], calls)
}
