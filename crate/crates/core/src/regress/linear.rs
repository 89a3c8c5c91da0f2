//! Penalized least squares: OLS, ridge, lasso and elastic net.
//!
//! All four minimize the same objective
//!
//! ```text
//! (1/(2n)) Σ wᵢ (yᵢ − b − xᵢ·β)² + α (l1_ratio ‖β‖₁ + (1 − l1_ratio)/2 ‖β‖²)
//! ```
//!
//! with the intercept `b` unpenalized and weights rescaled to sum to `n`.
//! OLS and ridge use a QR solve of the augmented system; lasso and elastic net
//! use cyclic coordinate descent.

use nalgebra::{DMatrix, DVector};

use super::{RegressorKind, RegressorSpec};
use crate::error::{Error, Result};

pub const CD_TOLERANCE: f64 = 1e-6;
pub const CD_MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub coef: Vec<f64>,
    pub intercept: f64,
}

impl LinearModel {
    pub fn predict(&self, x: &DMatrix<f64>) -> Vec<f64> {
        (0..x.nrows())
            .map(|i| {
                self.intercept
                    + (0..x.ncols())
                        .map(|j| x[(i, j)] * self.coef[j])
                        .sum::<f64>()
            })
            .collect()
    }
}

/// `sign(z) · max(|z| − gamma, 0)`.
pub fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

/// Weighted-centered problem shared by every solver.
struct Centered {
    x: DMatrix<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
    x_mean: Vec<f64>,
    y_mean: f64,
}

fn center(x: &DMatrix<f64>, y: &[f64], w: Option<&[f64]>) -> Centered {
    let (n, p) = x.shape();
    let w: Vec<f64> = match w {
        Some(w) => {
            let s: f64 = w.iter().sum();
            w.iter().map(|v| v * n as f64 / s).collect()
        }
        None => vec![1.0; n],
    };
    let nf = n as f64;
    let y_mean = y.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / nf;
    let x_mean: Vec<f64> = (0..p)
        .map(|j| (0..n).map(|i| w[i] * x[(i, j)]).sum::<f64>() / nf)
        .collect();
    let xc = DMatrix::from_fn(n, p, |i, j| x[(i, j)] - x_mean[j]);
    Centered {
        x: xc,
        y: y.iter().map(|v| v - y_mean).collect(),
        w,
        x_mean,
        y_mean,
    }
}

/// Minimizer of `(1/(2n)) Σ wᵢ rᵢ² + (α/2) ‖β‖²` on centered data, via QR of
/// the stacked system `[√(w/n) X; √α I] β = [√(w/n) y; 0]`.
fn closed_form(c: &Centered, alpha: f64) -> Result<Vec<f64>> {
    let (n, p) = c.x.shape();
    if p == 0 {
        return Ok(Vec::new());
    }
    let extra = if alpha > 0.0 { p } else { 0 };
    if n + extra < p {
        return Err(Error::SingularSystem);
    }
    let mut a = DMatrix::zeros(n + extra, p);
    let mut b = DVector::zeros(n + extra);
    for i in 0..n {
        let s = (c.w[i] / n as f64).sqrt();
        for j in 0..p {
            a[(i, j)] = s * c.x[(i, j)];
        }
        b[i] = s * c.y[i];
    }
    let sa = alpha.sqrt();
    for j in 0..extra {
        a[(n + j, j)] = sa;
    }
    let col_scale = (0..p).map(|j| a.column(j).norm()).fold(0.0, f64::max);
    let qr = a.qr();
    let r = qr.r();
    qr.q_tr_mul(&mut b);
    let tiny = col_scale * 1e-10 * (n + extra) as f64;
    if col_scale == 0.0 || (0..p).any(|j| r[(j, j)].abs() <= tiny) {
        return Err(Error::SingularSystem);
    }
    let r_top = r.rows(0, p).into_owned();
    let rhs = b.rows(0, p).into_owned();
    let beta = r_top
        .solve_upper_triangular(&rhs)
        .ok_or(Error::SingularSystem)?;
    Ok(beta.iter().copied().collect())
}

/// Outcome of [`coordinate_descent`]: coefficients on centered data plus the
/// objective value after each sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CdFit {
    pub coef: Vec<f64>,
    pub sweeps: usize,
    pub objective: Vec<f64>,
}

fn objective(c: &Centered, resid: &[f64], beta: &[f64], alpha: f64, l1: f64) -> f64 {
    let n = resid.len() as f64;
    let loss = resid.iter().zip(&c.w).map(|(r, w)| w * r * r).sum::<f64>() / (2.0 * n);
    let l1n: f64 = beta.iter().map(|b| b.abs()).sum();
    let l2n: f64 = beta.iter().map(|b| b * b).sum();
    loss + alpha * (l1 * l1n + 0.5 * (1.0 - l1) * l2n)
}

fn cd_centered(c: &Centered, alpha: f64, l1: f64, tol: f64, max_sweeps: usize) -> Result<CdFit> {
    let (n, p) = c.x.shape();
    let nf = n as f64;
    let col_sq: Vec<f64> = (0..p)
        .map(|j| (0..n).map(|i| c.w[i] * c.x[(i, j)].powi(2)).sum::<f64>() / nf)
        .collect();
    let mut beta = vec![0.0; p];
    let mut resid = c.y.clone();
    let mut history = Vec::new();
    let mut last_change = f64::INFINITY;
    for sweep in 1..=max_sweeps {
        let mut max_change: f64 = 0.0;
        for j in 0..p {
            let denom = col_sq[j] + alpha * (1.0 - l1);
            let old = beta[j];
            let new = if denom > 0.0 {
                let rho = (0..n).map(|i| c.w[i] * c.x[(i, j)] * resid[i]).sum::<f64>() / nf
                    + col_sq[j] * old;
                soft_threshold(rho, alpha * l1) / denom
            } else {
                0.0
            };
            let delta = new - old;
            if delta != 0.0 {
                for (i, r) in resid.iter_mut().enumerate() {
                    *r -= c.x[(i, j)] * delta;
                }
                beta[j] = new;
            }
            max_change = max_change.max(delta.abs());
        }
        history.push(objective(c, &resid, &beta, alpha, l1));
        last_change = max_change;
        if max_change <= tol {
            return Ok(CdFit {
                coef: beta,
                sweeps: sweep,
                objective: history,
            });
        }
    }
    Err(Error::NonConvergence {
        sweeps: max_sweeps,
        last_change,
    })
}

/// Cyclic coordinate descent for the elastic-net objective. Returns the
/// slope coefficients (the intercept is recovered from weighted means by
/// [`super::fit`]); stops when no coefficient moves more than `tol` in a sweep.
pub fn coordinate_descent(
    x: &DMatrix<f64>,
    y: &[f64],
    w: Option<&[f64]>,
    alpha: f64,
    l1_ratio: f64,
    tol: f64,
    max_sweeps: usize,
) -> Result<CdFit> {
    cd_centered(&center(x, y, w), alpha, l1_ratio, tol, max_sweeps)
}

pub(super) fn fit_linear(
    spec: &RegressorSpec,
    x: &DMatrix<f64>,
    y: &[f64],
    w: Option<&[f64]>,
) -> Result<LinearModel> {
    let c = center(x, y, w);
    let coef = match spec.kind {
        RegressorKind::Ols => closed_form(&c, 0.0)?,
        RegressorKind::Ridge => closed_form(&c, spec.alpha())?,
        RegressorKind::Lasso | RegressorKind::ElasticNet => {
            cd_centered(
                &c,
                spec.alpha(),
                spec.l1_ratio(),
                CD_TOLERANCE,
                CD_MAX_SWEEPS,
            )?
            .coef
        }
        other => unreachable!("{other:?} is not a linear model"),
    };
    let intercept = c.y_mean - c.x_mean.iter().zip(&coef).map(|(m, b)| m * b).sum::<f64>();
    Ok(LinearModel { coef, intercept })
}
