//! Exact solutions used for initial data, history seeding, forcing and error
//! measurement: traveling waves for all three model problems and a
//! manufactured solution for the viscous problems.

mod mms;
mod traveling;
mod viscous;

pub use mms::MmsSolution;
pub use traveling::{mp_i1_dispersion, InviscidWave};
pub use viscous::{
    assemble_dispersion_matrix, dispersion_function, find_omega, find_omega_from, tw_coefficients,
    TwCoefficients, ViscousWave, ROOT_TOLERANCE,
};

use std::fmt::Debug;
use std::sync::Arc;

use crate::error::Result;
use crate::params::{ModelProblem, PhysicalParams, RunConfig, SolutionSource};

/// Fluid values and derivatives at one point. Vector entries are `[x, y]` components.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FluidJet {
    pub v: [f64; 2],
    pub v_t: [f64; 2],
    pub v_x: [f64; 2],
    pub v_y: [f64; 2],
    pub lap_v: [f64; 2],
    pub p: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub lap_p: f64,
}

/// Shell displacement and derivatives at one interface point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ShellJet {
    pub u: [f64; 2],
    pub u_t: [f64; 2],
    pub u_tt: [f64; 2],
    pub u_ss: [f64; 2],
    pub u_ssss: [f64; 2],
}

pub trait ExactSolution: Send + Sync + Debug {
    fn fluid(&self, x: f64, y: f64, t: f64) -> FluidJet;
    fn shell(&self, s: f64, t: f64) -> ShellJet;
    /// Whether the solution needs forcing terms (manufactured solutions do).
    fn forced(&self) -> bool;
}

/// Continuous shell operator applied to an exact shell jet.
pub fn shell_operator_exact(params: &PhysicalParams, jet: &ShellJet, c: usize) -> f64 {
    -params.kbar * jet.u[c] + params.tbar * jet.u_ss[c] - params.bbar * jet.u_ssss[c]
}

/// Fluid traction `sigma n` on `y = 0` with `n = (0, 1)`.
pub fn traction(params: &PhysicalParams, f: &FluidJet) -> [f64; 2] {
    [
        params.mu * (f.v_y[0] + f.v_x[1]),
        -f.p + 2.0 * params.mu * f.v_y[1],
    ]
}

/// Forcing functions derived from an exact solution. All of them vanish
/// identically for unforced solutions.
#[derive(Debug, Clone)]
pub struct Forcing {
    pub exact: Arc<dyn ExactSolution>,
    pub params: PhysicalParams,
    pub problem: ModelProblem,
}

impl Forcing {
    pub fn new(exact: Arc<dyn ExactSolution>, params: PhysicalParams, problem: ModelProblem) -> Self {
        Forcing {
            exact,
            params,
            problem,
        }
    }

    pub fn active(&self) -> bool {
        self.exact.forced()
    }

    fn beta(&self) -> f64 {
        self.params.robin_coefficient()
    }

    /// `rho v_t + grad p - mu lap v`.
    pub fn momentum(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        if !self.active() {
            return [0.0; 2];
        }
        let f = self.exact.fluid(x, y, t);
        let (rho, mu) = (self.params.rho, self.params.mu);
        [
            rho * f.v_t[0] + f.p_x - mu * f.lap_v[0],
            rho * f.v_t[1] + f.p_y - mu * f.lap_v[1],
        ]
    }

    /// Right side of the pressure Poisson equation.
    pub fn poisson(&self, x: f64, y: f64, t: f64) -> f64 {
        if !self.active() {
            return 0.0;
        }
        self.exact.fluid(x, y, t).lap_p
    }

    /// `rhosh u_tt - L(u) + sigma n` on the shell-controlled components.
    pub fn shell(&self, s: f64, t: f64) -> [f64; 2] {
        if !self.active() {
            return [0.0; 2];
        }
        let sj = self.exact.shell(s, t);
        let sigma = traction(&self.params, &self.exact.fluid(s, 0.0, t));
        let mut out = [0.0; 2];
        for c in self.shell_components() {
            out[c] = self.params.rhosh * sj.u_tt[c] - shell_operator_exact(&self.params, &sj, c)
                + sigma[c];
        }
        out
    }

    fn shell_components(&self) -> std::ops::RangeInclusive<usize> {
        if self.problem.horizontal_shell() {
            0..=1
        } else {
            1..=1
        }
    }

    /// Kinematic mismatch `v - u_t` on the interface.
    pub fn kinematic(&self, s: f64, t: f64) -> [f64; 2] {
        if !self.active() {
            return [0.0; 2];
        }
        let f = self.exact.fluid(s, 0.0, t);
        let sj = self.exact.shell(s, t);
        [f.v[0] - sj.u_t[0], f.v[1] - sj.u_t[1]]
    }

    /// Time derivative of the kinematic mismatch.
    pub fn kinematic_rate(&self, s: f64, t: f64) -> [f64; 2] {
        if !self.active() {
            return [0.0; 2];
        }
        let f = self.exact.fluid(s, 0.0, t);
        let sj = self.exact.shell(s, t);
        [f.v_t[0] - sj.u_tt[0], f.v_t[1] - sj.u_tt[1]]
    }

    /// Offset in `p + beta p_y = 2 mu v2_y + mu beta lap v2 - L(u2) + offset`.
    pub fn robin_offset(&self, s: f64, t: f64) -> f64 {
        if !self.active() {
            return 0.0;
        }
        let f = self.exact.fluid(s, 0.0, t);
        let sj = self.exact.shell(s, t);
        let (mu, b) = (self.params.mu, self.beta());
        f.p + b * f.p_y
            - (2.0 * mu * f.v_y[1] + mu * b * f.lap_v[1] - shell_operator_exact(&self.params, &sj, 1))
    }

    /// Offset in `mu (v1_y + v2_x) + mu beta lap v1 = beta p_x + L(u1) + offset`.
    pub fn tangential_offset(&self, s: f64, t: f64) -> f64 {
        if !self.active() {
            return 0.0;
        }
        let f = self.exact.fluid(s, 0.0, t);
        let sj = self.exact.shell(s, t);
        let (mu, b) = (self.params.mu, self.beta());
        mu * (f.v_y[0] + f.v_x[1]) + mu * b * f.lap_v[0]
            - (b * f.p_x + shell_operator_exact(&self.params, &sj, 0))
    }

    /// Offset in the interface Neumann condition of the traditional scheme,
    /// `p_y = -rho u2_tt + mu lap v2 + offset`.
    pub fn neumann_offset(&self, s: f64, t: f64) -> f64 {
        if !self.active() {
            return 0.0;
        }
        let f = self.exact.fluid(s, 0.0, t);
        let sj = self.exact.shell(s, t);
        f.p_y - (-self.params.rho * sj.u_tt[1] + self.params.mu * f.lap_v[1])
    }

    /// Offset in the bottom-wall condition `p_y = mu lap v2 + offset`.
    pub fn bottom_pressure_offset(&self, x: f64, t: f64) -> f64 {
        if !self.active() {
            return 0.0;
        }
        let f = self.exact.fluid(x, -self.params.depth, t);
        f.p_y - self.params.mu * f.lap_v[1]
    }

    /// Velocity on the bottom wall.
    pub fn wall_velocity(&self, x: f64, t: f64) -> [f64; 2] {
        if !self.active() {
            return [0.0; 2];
        }
        self.exact.fluid(x, -self.params.depth, t).v
    }
}

/// Builds the exact solution selected by a run configuration.
pub fn build(config: &RunConfig) -> Result<Arc<dyn ExactSolution>> {
    let p = config.params;
    Ok(match config.solution {
        SolutionSource::TravelingWave { k, branch, umax } => match config.problem {
            ModelProblem::MpI1 => Arc::new(InviscidWave::new(k, &p, branch, umax)?),
            problem => Arc::new(ViscousWave::new(k, &p, problem.theta(), branch, umax)?),
        },
        SolutionSource::Mms { fx, ft, abar, bbar } => {
            let abar = if config.problem.horizontal_shell() { abar } else { 0.0 };
            Arc::new(MmsSolution::new(fx, ft, abar, bbar, &p))
        }
    })
}

#[cfg(test)]
pub(crate) mod fd {
    //! Sixth-order finite differences of pointwise evaluators, used as
    //! independent residual oracles.

    pub fn d1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        let c = [-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
        (0..7).map(|i| c[i] * f(x + (i as f64 - 3.0) * h)).sum::<f64>() / h
    }

    pub fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        let c = [
            1.0 / 90.0,
            -3.0 / 20.0,
            3.0 / 2.0,
            -49.0 / 18.0,
            3.0 / 2.0,
            -3.0 / 20.0,
            1.0 / 90.0,
        ];
        (0..7).map(|i| c[i] * f(x + (i as f64 - 3.0) * h)).sum::<f64>() / (h * h)
    }
}
