//! Classical RK4 integration of the master equation.
//!
//! After every accepted step the state is Hermitized, `(rho + rho^H)/2`, and
//! rescaled to unit trace. The adaptive mode uses step doubling: one step of
//! size `h` is compared with two steps of size `h/2`, and the difference
//! divided by 15 estimates the local error of the finer result.

use serde::{Deserialize, Serialize};

use crate::generator::Generator;
use crate::states::DensityMatrix;
use crate::{CMatrix, Error, Result, C64};

/// Norm growth beyond this factor aborts the integration.
const BLOWUP_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepControl {
    /// Fixed step; `None` picks [`Generator::default_step`].
    Fixed { h: Option<f64> },
    /// Step doubling with a max-entry local error tolerance.
    Adaptive { tol: f64 },
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl::Fixed { h: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    pub t_final: f64,
    #[serde(default)]
    pub control: StepControl,
    /// Record every `stride`-th accepted step (the final state is always kept).
    #[serde(default = "default_stride")]
    pub stride: usize,
}

fn default_stride() -> usize {
    1
}

impl EvolveOptions {
    pub fn fixed(t_final: f64, h: f64) -> Self {
        Self {
            t_final,
            control: StepControl::Fixed { h: Some(h) },
            stride: 1,
        }
    }

    /// Fixed step chosen from the generator stiffness.
    pub fn default_fixed(t_final: f64) -> Self {
        Self {
            t_final,
            control: StepControl::Fixed { h: None },
            stride: 1,
        }
    }

    pub fn adaptive(t_final: f64, tol: f64) -> Self {
        Self {
            t_final,
            control: StepControl::Adaptive { tol },
            stride: 1,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub t: f64,
    pub rho: DensityMatrix,
    pub s_lin: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub step_stats: StepStats,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always holds the initial sample")
    }
}

fn rk4_step(g: &Generator, rho: &CMatrix, h: f64) -> Result<CMatrix> {
    let half = C64::new(0.5 * h, 0.0);
    let full = C64::new(h, 0.0);
    let k1 = g.apply(rho)?;
    let k2 = g.apply(&(rho + &k1 * half))?;
    let k3 = g.apply(&(rho + &k2 * half))?;
    let k4 = g.apply(&(rho + &k3 * full))?;
    let sum = k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4;
    Ok(rho + sum * C64::new(h / 6.0, 0.0))
}

fn project(rho: CMatrix) -> CMatrix {
    let herm = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    let tr = herm.trace().re;
    // Rescaling a trace that is already 1 to within a few ulps only adds noise.
    if (tr - 1.0).abs() <= 1e-14 || tr == 0.0 {
        herm
    } else {
        herm / C64::new(tr, 0.0)
    }
}

fn purity_deficit(rho: &CMatrix) -> f64 {
    1.0 - rho.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

fn sample(t: f64, rho: &CMatrix, dims: &[usize]) -> Result<Sample> {
    Ok(Sample {
        t,
        s_lin: purity_deficit(rho),
        rho: DensityMatrix::from_parts_unchecked(rho.clone(), dims.to_vec())?,
    })
}

/// Integrates `d rho/dt = L rho` from `t = 0` to `opts.t_final`.
pub fn evolve(g: &Generator, rho0: &DensityMatrix, opts: &EvolveOptions) -> Result<Trajectory> {
    if rho0.side() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: rho0.side(),
        });
    }
    if !(opts.t_final.is_finite() && opts.t_final >= 0.0) {
        return Err(Error::InvalidArgument(format!("t_final = {}", opts.t_final)));
    }
    if opts.stride == 0 {
        return Err(Error::InvalidArgument("sample stride must be positive".into()));
    }
    let dims = rho0.dims().to_vec();
    let mut rho = rho0.matrix().clone();
    let initial_norm = rho.norm();
    let mut samples = vec![sample(0.0, &rho, &dims)?];
    let mut stats = StepStats::default();
    if opts.t_final == 0.0 {
        return Ok(Trajectory {
            samples,
            step_stats: stats,
        });
    }

    let guard = |t: f64, m: &CMatrix| -> Result<()> {
        let n = m.norm();
        if !n.is_finite() || n > BLOWUP_FACTOR * initial_norm {
            Err(Error::IntegratorAbort {
                last_good_time: t,
                reason: format!("|rho| grew from {initial_norm:.3e} to {n:.3e}"),
            })
        } else {
            Ok(())
        }
    };

    match opts.control {
        StepControl::Fixed { h } => {
            let h = h.unwrap_or_else(|| g.default_step());
            if h.is_nan() || h <= 0.0 {
                return Err(Error::InvalidArgument(format!("step h = {h}")));
            }
            let steps = if h.is_infinite() {
                1
            } else {
                ((opts.t_final / h - 1e-9).ceil() as usize).max(1)
            };
            let h = opts.t_final / steps as f64;
            for n in 1..=steps {
                let next = project(rk4_step(g, &rho, h)?);
                guard((n - 1) as f64 * h, &next)?;
                rho = next;
                stats.accepted += 1;
                let t = if n == steps { opts.t_final } else { n as f64 * h };
                if n % opts.stride == 0 || n == steps {
                    samples.push(sample(t, &rho, &dims)?);
                }
            }
        }
        StepControl::Adaptive { tol } => {
            if tol.is_nan() || tol <= 0.0 {
                return Err(Error::InvalidArgument(format!("tolerance {tol}")));
            }
            // RK4 is stable for h * |eigenvalue| up to about 2.78; the
            // generator spectrum is bounded by 2 * stiffness.
            let h_max = (10.0 * g.default_step()).min(opts.t_final);
            let mut h = g.default_step().min(opts.t_final);
            let mut t = 0.0;
            while t < opts.t_final {
                let step = h.min(opts.t_final - t);
                let coarse = rk4_step(g, &rho, step)?;
                let mid = rk4_step(g, &rho, 0.5 * step)?;
                let fine = rk4_step(g, &mid, 0.5 * step)?;
                let err = (&fine - &coarse).iter().fold(0.0f64, |acc, z| acc.max(z.norm())) / 15.0;
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0)
                };
                if err <= tol || step <= 1e-14 * opts.t_final {
                    let next = project(fine);
                    guard(t, &next)?;
                    rho = next;
                    let remaining = opts.t_final - (t + step);
                    t = if remaining <= 1e-12 * opts.t_final { opts.t_final } else { t + step };
                    stats.accepted += 1;
                    if stats.accepted % opts.stride == 0 || t == opts.t_final {
                        samples.push(sample(t, &rho, &dims)?);
                    }
                } else {
                    stats.rejected += 1;
                }
                h = (step * factor).min(h_max);
            }
        }
    }
    Ok(Trajectory {
        samples,
        step_stats: stats,
    })
}
