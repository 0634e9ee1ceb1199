//! Velocity boundary conditions: boundary values and ghost rows.

use super::{dx, Velocity};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid2D};
use crate::params::PhysicalParams;

#[derive(Debug, Clone, PartialEq)]
pub enum InterfaceVelocityBc {
    /// AMP tangential condition
    /// `mu (D_y v1 + D_x v2) + nu beta lap_h v1 = h` solved for the v1 ghost,
    /// where `nu` is the viscosity of the discrete momentum equation.
    AmpTangential { h: Vec<f64>, nu: f64 },
    /// Prescribed interface values on the listed components; the others are
    /// left to the momentum update.
    Dirichlet {
        v1: Option<Vec<f64>>,
        v2: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum WallVelocityBc {
    /// Prescribed wall velocity (zero for a fixed wall).
    NoSlip { v1: Vec<f64>, v2: Vec<f64> },
    /// `v2 = 0`, `v1` updated by the momentum equation with even reflection.
    Slip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VelocityBcSpec {
    pub top: InterfaceVelocityBc,
    pub bottom: WallVelocityBc,
}

/// Third-order extrapolation of the ghost at `j + s` from `j, j - s, j - 2s`.
fn extrapolate(f: &mut Field, nx: usize, j: isize, s: isize) {
    for i in 0..nx as isize {
        let g = 3.0 * f.at(i, j) - 3.0 * f.at(i, j - s) + f.at(i, j - 2 * s);
        f.set(i, j + s, g);
    }
}

/// Sets boundary values and fills both ghost rows at the interface and the
/// bottom wall. The discrete divergence vanishes exactly on the interface
/// row and on a no-slip wall through the v2 ghosts.
pub fn apply_velocity_bcs(
    grid: &Grid2D,
    v: &mut Velocity,
    spec: &VelocityBcSpec,
    params: &PhysicalParams,
) -> Result<()> {
    let nx = grid.nx();
    let n = grid.top();
    let (hx, hy) = (grid.hx, grid.hy);

    // Interface.
    match &spec.top {
        InterfaceVelocityBc::Dirichlet { v1, v2 } => {
            if let Some(d) = v1 {
                v[0].set_row(n, d);
            }
            if let Some(d) = v2 {
                v[1].set_row(n, d);
            }
            extrapolate(&mut v[0], nx, n, 1);
        }
        InterfaceVelocityBc::AmpTangential { h, nu } => {
            let (mu, nu) = (params.mu, *nu);
            let beta = params.robin_coefficient();
            let coef = mu / (2.0 * hy) + nu * beta / (hy * hy);
            if mu == 0.0 || coef == 0.0 {
                return Err(Error::InvalidConfig(
                    "tangential interface condition needs mu > 0".into(),
                ));
            }
            for i in 0..nx as isize {
                let below = v[0].at(i, n - 1);
                let here = v[0].at(i, n);
                let xx = (v[0].at(i + 1, n) - 2.0 * here + v[0].at(i - 1, n)) / (hx * hx);
                let rest = mu * (-below / (2.0 * hy) + dx(grid, &v[1], i, n))
                    + nu * beta * (xx + (below - 2.0 * here) / (hy * hy));
                v[0].set(i, n + 1, (h[i as usize] - rest) / coef);
            }
        }
    }
    for i in 0..nx as isize {
        let g = v[1].at(i, n - 1) - 2.0 * hy * dx(grid, &v[0], i, n);
        v[1].set(i, n + 1, g);
    }
    for c in 0..2 {
        extrapolate(&mut v[c], nx, n + 1, 1);
    }

    // Bottom wall.
    match &spec.bottom {
        WallVelocityBc::NoSlip { v1, v2 } => {
            v[0].set_row(0, v1);
            v[1].set_row(0, v2);
            extrapolate(&mut v[0], nx, 0, -1);
            for i in 0..nx as isize {
                let g = v[1].at(i, 1) + 2.0 * hy * dx(grid, &v[0], i, 0);
                v[1].set(i, -1, g);
            }
            for c in 0..2 {
                extrapolate(&mut v[c], nx, -1, -1);
            }
        }
        WallVelocityBc::Slip => {
            v[1].row_mut(0).fill(0.0);
            for i in 0..nx as isize {
                for s in 1..=2 {
                    v[0].set(i, -s, v[0].at(i, s));
                    v[1].set(i, -s, -v[1].at(i, s));
                }
            }
        }
    }
    Ok(())
}
