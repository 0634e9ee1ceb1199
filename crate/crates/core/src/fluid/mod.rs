//! Velocity-pressure Stokes solver on the channel grid: centered difference
//! operators, the Adams-Bashforth predictor and Adams-Moulton corrector for
//! the momentum equation, velocity boundary conditions and the pressure
//! Poisson solve.

mod bc;
mod dump;
mod pressure;

pub use bc::{apply_velocity_bcs, InterfaceVelocityBc, VelocityBcSpec, WallVelocityBc};
pub use dump::{read_field, write_field, FieldDump};
pub use pressure::{
    InterfacePressureBc, PressureBcSpec, PressureGauge, PressureSolver, PressureStructure,
    WallPressureBc, RESIDUAL_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grid::{Field, Grid2D};
use crate::params::PhysicalParams;

/// Velocity components as a pair of fields.
pub type Velocity = [Field; 2];

#[inline]
pub fn dx(g: &Grid2D, f: &Field, i: isize, j: isize) -> f64 {
    (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * g.hx)
}

#[inline]
pub fn dy(g: &Grid2D, f: &Field, i: isize, j: isize) -> f64 {
    (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * g.hy)
}

#[inline]
pub fn dxx(g: &Grid2D, f: &Field, i: isize, j: isize) -> f64 {
    (f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j)) / (g.hx * g.hx)
}

#[inline]
pub fn dyy(g: &Grid2D, f: &Field, i: isize, j: isize) -> f64 {
    (f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1)) / (g.hy * g.hy)
}

/// Five-point Laplacian.
#[inline]
pub fn lap(g: &Grid2D, f: &Field, i: isize, j: isize) -> f64 {
    dxx(g, f, i, j) + dyy(g, f, i, j)
}

#[inline]
pub fn div(g: &Grid2D, v: &Velocity, i: isize, j: isize) -> f64 {
    dx(g, &v[0], i, j) + dy(g, &v[1], i, j)
}

/// Fills rows `0..=n` of `out` with `f(j, row)`; ghost rows are left as they are.
pub fn fill_rows<F>(grid: &Grid2D, exec: Exec, out: &mut Field, f: F)
where
    F: Fn(isize, &mut [f64]) + Sync + Send,
{
    let nx = out.nx();
    let top = grid.top();
    exec.for_each_row(out.as_mut_slice(), nx, |r, row| {
        let j = Field::storage_row_to_j(r);
        if (0..=top).contains(&j) {
            f(j, row);
        }
    });
}

/// Applies a pointwise stencil on rows `0..=n`.
pub fn apply_stencil<F>(grid: &Grid2D, exec: Exec, f: F) -> Field
where
    F: Fn(isize, isize) -> f64 + Sync + Send,
{
    let mut out = Field::zeros(grid);
    fill_rows(grid, exec, &mut out, |j, row| {
        for (i, v) in row.iter_mut().enumerate() {
            *v = f(i as isize, j);
        }
    });
    out
}

pub fn laplacian(grid: &Grid2D, f: &Field, exec: Exec) -> Field {
    apply_stencil(grid, exec, |i, j| lap(grid, f, i, j))
}

pub fn divergence(grid: &Grid2D, v: &Velocity, exec: Exec) -> Field {
    apply_stencil(grid, exec, |i, j| div(grid, v, i, j))
}

pub fn gradient(grid: &Grid2D, p: &Field, exec: Exec) -> Velocity {
    [
        apply_stencil(grid, exec, |i, j| dx(grid, p, i, j)),
        apply_stencil(grid, exec, |i, j| dy(grid, p, i, j)),
    ]
}

/// Max-norm of the discrete divergence over rows `0..=n`.
pub fn divergence_norm(grid: &Grid2D, v: &Velocity) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..=grid.top() {
        for i in 0..grid.nx() as isize {
            m = m.max(div(grid, v, i, j).abs());
        }
    }
    m
}

/// Options for the momentum right side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumOptions {
    /// Artificial viscosity coefficient: adds `rho d2 h^2 lap_h v`.
    pub d2: f64,
    pub exec: Exec,
}

/// `F = -grad_h p + mu lap_h v (+ rho d2 h^2 lap_h v) (+ forcing)` on rows `0..=n`.
pub fn momentum_rhs(
    grid: &Grid2D,
    v: &Velocity,
    p: &Field,
    params: &PhysicalParams,
    opts: MomentumOptions,
    forcing: Option<&Velocity>,
) -> Velocity {
    let h = grid.h();
    let nu = params.mu + params.rho * opts.d2 * h * h;
    let comp = |c: usize| {
        apply_stencil(grid, opts.exec, |i, j| {
            let grad = if c == 0 { dx(grid, p, i, j) } else { dy(grid, p, i, j) };
            let mut out = -grad;
            if nu != 0.0 {
                out += nu * lap(grid, &v[c], i, j);
            }
            if let Some(f) = forcing {
                out += f[c].at(i, j);
            }
            out
        })
    };
    [comp(0), comp(1)]
}

/// Fluid unknowns with the history needed by the multistep updates.
#[derive(Debug, Clone, PartialEq)]
pub struct FluidState {
    pub v: Velocity,
    pub p: Field,
    /// Momentum right side at level n-1.
    pub f_prev: Option<Velocity>,
    /// Pressure at levels n-1 and n-2.
    pub p_hist: [Option<Field>; 2],
    pub t: f64,
}

impl FluidState {
    pub fn zeros(grid: &Grid2D) -> Self {
        FluidState {
            v: [Field::zeros(grid), Field::zeros(grid)],
            p: Field::zeros(grid),
            f_prev: None,
            p_hist: [None, None],
            t: 0.0,
        }
    }

    /// Pressure extrapolated to the next level: `3 p^n - 3 p^{n-1} + p^{n-2}`.
    pub fn extrapolated_pressure(&self) -> Result<Field> {
        match (&self.p_hist[0], &self.p_hist[1]) {
            (Some(p1), Some(p2)) => {
                let mut out = self.p.clone();
                for ((o, a), b) in out
                    .as_mut_slice()
                    .iter_mut()
                    .zip(p1.as_slice())
                    .zip(p2.as_slice())
                {
                    *o = 3.0 * *o - 3.0 * a + b;
                }
                Ok(out)
            }
            _ => Err(Error::StartupRequired("pressure extrapolation needs levels n-1 and n-2")),
        }
    }

    pub fn max_abs_velocity(&self) -> f64 {
        self.v[0].max_abs().max(self.v[1].max_abs())
    }

    pub fn is_finite(&self) -> bool {
        self.v[0].is_finite() && self.v[1].is_finite() && self.p.is_finite()
    }
}

fn combine_rows(
    grid: &Grid2D,
    exec: Exec,
    base: &Field,
    terms: &[(f64, &Field)],
) -> Field {
    let mut out = base.clone();
    fill_rows(grid, exec, &mut out, |j, row| {
        let b = base.row(j);
        for (i, o) in row.iter_mut().enumerate() {
            *o = b[i] + terms.iter().map(|(c, f)| c * f.row(j)[i]).sum::<f64>();
        }
    });
    out
}

/// Adams-Bashforth predictor `v^p = v^n + dt/rho (3/2 F^n - 1/2 F^{n-1})` on rows `0..=n`.
pub fn velocity_predict(
    grid: &Grid2D,
    state: &FluidState,
    f_now: &Velocity,
    dt: f64,
    params: &PhysicalParams,
    exec: Exec,
) -> Result<Velocity> {
    let f_prev = state
        .f_prev
        .as_ref()
        .ok_or(Error::StartupRequired("Adams-Bashforth needs the level n-1 right side"))?;
    let s = dt / params.rho;
    let comp = |c: usize| {
        combine_rows(grid, exec, &state.v[c], &[(1.5 * s, &f_now[c]), (-0.5 * s, &f_prev[c])])
    };
    Ok([comp(0), comp(1)])
}

/// Adams-Moulton corrector `v^{n+1} = v^n + dt/(2 rho) (F^p + F^n)` on rows `0..=n`.
pub fn velocity_correct(
    grid: &Grid2D,
    v_now: &Velocity,
    f_pred: &Velocity,
    f_now: &Velocity,
    dt: f64,
    params: &PhysicalParams,
    exec: Exec,
) -> Velocity {
    let s = 0.5 * dt / params.rho;
    let comp = |c: usize| combine_rows(grid, exec, &v_now[c], &[(s, &f_pred[c]), (s, &f_now[c])]);
    [comp(0), comp(1)]
}

#[cfg(test)]
mod tests;
