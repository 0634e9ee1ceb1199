//! Coupled time stepping: the AMP predictor-corrector (stages I to VII), the
//! traditional partitioned scheme, interface right sides and the interface
//! velocity projection.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::exact::{self, ExactSolution, Forcing};
use crate::exec::Exec;
use crate::fluid::{
    self, apply_velocity_bcs, dx, dy, lap, momentum_rhs, velocity_correct, velocity_predict,
    FluidState, InterfacePressureBc, InterfaceVelocityBc, MomentumOptions, PressureBcSpec,
    PressureGauge, PressureSolver, Velocity, VelocityBcSpec, WallPressureBc, WallVelocityBc,
};
use crate::grid::{Field, Grid2D};
use crate::params::{ModelProblem, PhysicalParams, RunConfig, Scheme};
use crate::shell::{
    shell_correct, shell_operator, shell_predict, zero_components, Components, ShellState,
};

/// Fluid traction `sigma n = (mu (D_y v1 + D_x v2), -p + 2 mu D_y v2)` on the interface row.
pub fn compute_traction(grid: &Grid2D, v: &Velocity, p: &Field, params: &PhysicalParams) -> Components {
    let n = grid.top();
    let mu = params.mu;
    let mut out = zero_components(grid.nx());
    for i in 0..grid.nx() {
        let ii = i as isize;
        out[0][i] = mu * (dy(grid, &v[0], ii, n) + dx(grid, &v[1], ii, n));
        out[1][i] = -p.at(ii, n) + 2.0 * mu * dy(grid, &v[1], ii, n);
    }
    out
}

/// Right side of the AMP pressure condition `p + beta p_y = r`:
/// `r = 2 mu D_y v2 + nu beta lap_h v2 - L_h(u)_2 + offset`.
///
/// `nu` is the viscosity of the discrete momentum equation, which includes
/// any artificial dissipation.
pub fn amp_pressure_rhs(
    grid: &Grid2D,
    v: &Velocity,
    u: &Components,
    params: &PhysicalParams,
    nu: f64,
    offset: &[f64],
) -> Vec<f64> {
    let n = grid.top();
    let beta = params.robin_coefficient();
    let lu = shell_operator(&u[1], params, grid.hx);
    (0..grid.nx())
        .map(|i| {
            let ii = i as isize;
            2.0 * params.mu * dy(grid, &v[1], ii, n) + nu * beta * lap(grid, &v[1], ii, n) - lu[i]
                + offset[i]
        })
        .collect()
}

/// Right side of the AMP tangential condition: `beta D_x p + L_h(u)_1 + offset`.
pub fn amp_tangential_rhs(
    grid: &Grid2D,
    p: &Field,
    u: &Components,
    params: &PhysicalParams,
    offset: &[f64],
) -> Vec<f64> {
    let n = grid.top();
    let beta = params.robin_coefficient();
    let lu = shell_operator(&u[0], params, grid.hx);
    (0..grid.nx())
        .map(|i| beta * dx(grid, p, i as isize, n) + lu[i] + offset[i])
        .collect()
}

/// Projection weight `gamma = 1 / (1 + rhosh / (rho hf))`.
pub fn projection_weight(params: &PhysicalParams) -> f64 {
    1.0 / (1.0 + params.rhosh / (params.rho * params.hf))
}

/// Replaces the fluid and shell interface velocities of the listed components
/// by `gamma v + (1 - gamma)(vbar + g)`, where `g` is the prescribed
/// mismatch (zero without forcing). Returns the largest `|v - vbar - g|`
/// before projection.
pub fn project_interface_velocity(
    grid: &Grid2D,
    v: &mut Velocity,
    vbar: &mut Components,
    offset: &Components,
    components: &[usize],
    params: &PhysicalParams,
) -> f64 {
    let gamma = projection_weight(params);
    let n = grid.top();
    let mut mismatch: f64 = 0.0;
    for &c in components {
        for i in 0..grid.nx() {
            let ii = i as isize;
            let vf = v[c].at(ii, n);
            let vs = vbar[c][i] + offset[c][i];
            mismatch = mismatch.max((vf - vs).abs());
            let vi = gamma * vf + (1.0 - gamma) * vs;
            v[c].set(ii, n, vi);
            vbar[c][i] = vi - offset[c][i];
        }
    }
    mismatch
}

/// Largest `|v - vbar - g|` over the interface nodes and listed components.
pub fn interface_mismatch(
    grid: &Grid2D,
    v: &Velocity,
    vbar: &Components,
    offset: &Components,
    components: &[usize],
) -> f64 {
    let n = grid.top();
    let mut m: f64 = 0.0;
    for &c in components {
        for i in 0..grid.nx() {
            m = m.max((v[c].at(i as isize, n) - vbar[c][i] - offset[c][i]).abs());
        }
    }
    m
}

/// Interface quantities from the last pressure solve of a step.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceData {
    pub traction: Components,
    /// Tangential right side (empty when the shell has no horizontal motion).
    pub tangential: Vec<f64>,
    /// Pressure boundary right side: Robin data (AMP) or normal derivative (traditional).
    pub pressure: Vec<f64>,
    /// Prescribed velocity mismatch `g`.
    pub mismatch_offset: Components,
}

/// Summary of one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub step: usize,
    pub t: f64,
    pub v_max: f64,
    pub p_max: f64,
    pub u_max: f64,
    pub vbar_max: f64,
    /// Interface velocity mismatch before the projection.
    pub mismatch: f64,
    /// Interface velocity mismatch at the end of the step.
    pub mismatch_after: f64,
    pub divergence: f64,
    /// Largest relative residual of the pressure solves.
    pub residual: f64,
    pub blowup: bool,
}

impl StepReport {
    pub const CSV_HEADER: &'static str =
        "step,t,v_max,p_max,u_max,vbar_max,mismatch,mismatch_after,divergence,residual,blowup";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.6e},{:.6e},{:.6e},{:.6e},{}",
            self.step,
            self.t,
            self.v_max,
            self.p_max,
            self.u_max,
            self.vbar_max,
            self.mismatch,
            self.mismatch_after,
            self.divergence,
            self.residual,
            u8::from(self.blowup)
        )
    }
}

/// Exact fluid fields at time `t`, ghost rows included.
pub fn exact_fluid(grid: &Grid2D, exact: &dyn ExactSolution, t: f64) -> (Velocity, Field) {
    let mut v = [Field::zeros(grid), Field::zeros(grid)];
    let mut p = Field::zeros(grid);
    for j in p.row_range() {
        for i in 0..grid.nx() as isize {
            let jet = exact.fluid(grid.x(i), grid.y(j), t);
            v[0].set(i, j, jet.v[0]);
            v[1].set(i, j, jet.v[1]);
            p.set(i, j, jet.p);
        }
    }
    (v, p)
}

/// Exact shell displacement and velocity at time `t`.
pub fn exact_shell(grid: &Grid2D, exact: &dyn ExactSolution, t: f64) -> (Components, Components) {
    let nx = grid.nx();
    let (mut u, mut v) = (zero_components(nx), zero_components(nx));
    for i in 0..nx {
        let jet = exact.shell(grid.x(i as isize), t);
        for c in 0..2 {
            u[c][i] = jet.u[c];
            v[c][i] = jet.u_t[c];
        }
    }
    (u, v)
}

/// Owns the coupled state of one run and advances it by fixed steps.
pub struct Stepper {
    config: RunConfig,
    grid: Grid2D,
    dt: f64,
    exec: Exec,
    exact: Option<Arc<dyn ExactSolution>>,
    forcing: Option<Forcing>,
    solver: PressureSolver,
    xs: Vec<f64>,
    pub fluid: FluidState,
    pub shell: ShellState,
    step_index: usize,
    last_interface: Option<InterfaceData>,
}

impl fmt::Debug for Stepper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Stepper")
            .field("problem", &self.config.problem)
            .field("scheme", &self.config.scheme)
            .field("n", &self.grid.n)
            .field("dt", &self.dt)
            .field("t", &self.fluid.t)
            .finish()
    }
}

impl Stepper {
    /// Initializes from the configured exact solution at `t = 0` and seeds all
    /// history levels from it.
    pub fn new(config: &RunConfig, dt: f64, exec: Exec) -> Result<Self> {
        config.validate()?;
        let exact = exact::build(config)?;
        let grid = Grid2D::new(&config.params, config.n)?;
        let (v, p) = exact_fluid(&grid, exact.as_ref(), 0.0);
        let (u, vbar) = exact_shell(&grid, exact.as_ref(), 0.0);
        let mut fluid = FluidState::zeros(&grid);
        fluid.v = v;
        fluid.p = p;
        let shell = ShellState::new(u, vbar, 0.0, config.problem.horizontal_shell());
        let mut stepper = Self::assemble(config, grid, dt, exec, Some(exact), fluid, shell)?;
        stepper.seed_exact_history()?;
        Ok(stepper)
    }

    /// Starts from given states. Missing history levels are filled by a
    /// Taylor expansion backwards in time using the current right sides.
    pub fn from_states(
        config: &RunConfig,
        dt: f64,
        exec: Exec,
        exact: Option<Arc<dyn ExactSolution>>,
        fluid: FluidState,
        shell: ShellState,
    ) -> Result<Self> {
        config.validate()?;
        let grid = Grid2D::new(&config.params, config.n)?;
        let mut stepper = Self::assemble(config, grid, dt, exec, exact, fluid, shell)?;
        stepper.seed_taylor_history()?;
        Ok(stepper)
    }

    fn assemble(
        config: &RunConfig,
        grid: Grid2D,
        dt: f64,
        exec: Exec,
        exact: Option<Arc<dyn ExactSolution>>,
        fluid: FluidState,
        shell: ShellState,
    ) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(crate::Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        if shell.len() != grid.nx() {
            return Err(crate::Error::InvalidArgument("shell arrays do not match the grid".into()));
        }
        let spec = pressure_structure(config);
        let solver = PressureSolver::new(&grid, spec)?;
        let forcing = exact
            .as_ref()
            .map(|e| Forcing::new(e.clone(), config.params, config.problem))
            .filter(Forcing::active);
        let xs = (0..grid.nx() as isize).map(|i| grid.x(i)).collect();
        Ok(Stepper {
            config: config.clone(),
            grid,
            dt,
            exec,
            exact,
            forcing,
            solver,
            xs,
            fluid,
            shell,
            step_index: 0,
            last_interface: None,
        })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn time(&self) -> f64 {
        self.fluid.t
    }

    pub fn steps_taken(&self) -> usize {
        self.step_index
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn exact(&self) -> Option<&Arc<dyn ExactSolution>> {
        self.exact.as_ref()
    }

    pub fn last_interface(&self) -> Option<&InterfaceData> {
        self.last_interface.as_ref()
    }

    fn params(&self) -> &PhysicalParams {
        &self.config.params
    }

    /// Viscosity of the discrete momentum equation.
    pub fn effective_viscosity(&self) -> f64 {
        let h = self.grid.h();
        self.config.params.mu + self.config.params.rho * self.config.d2 * h * h
    }

    fn momentum_options(&self) -> MomentumOptions {
        MomentumOptions {
            d2: self.config.d2,
            exec: self.exec,
        }
    }

    fn momentum_forcing(&self, t: f64) -> Option<Velocity> {
        let f = self.forcing.as_ref()?;
        let g = &self.grid;
        let mut out = [Field::zeros(g), Field::zeros(g)];
        for j in 0..=g.top() {
            for i in 0..g.nx() as isize {
                let m = f.momentum(g.x(i), g.y(j), t);
                out[0].set(i, j, m[0]);
                out[1].set(i, j, m[1]);
            }
        }
        Some(out)
    }

    fn shell_load(&self, t: f64) -> Option<Components> {
        let f = self.forcing.as_ref()?;
        let mut out = zero_components(self.grid.nx());
        for (i, &x) in self.xs.iter().enumerate() {
            let s = f.shell(x, t);
            out[0][i] = s[0];
            out[1][i] = s[1];
        }
        Some(out)
    }

    fn interface_values(&self, f: impl Fn(&Forcing, f64) -> f64) -> Vec<f64> {
        match &self.forcing {
            Some(fc) => self.xs.iter().map(|&x| f(fc, x)).collect(),
            None => vec![0.0; self.xs.len()],
        }
    }

    fn kinematic_offset(&self, t: f64) -> Components {
        let a = self.interface_values(|f, x| f.kinematic(x, t)[0]);
        let b = self.interface_values(|f, x| f.kinematic(x, t)[1]);
        [a, b]
    }

    fn wall_bc(&self, t: f64) -> WallVelocityBc {
        match self.config.problem {
            ModelProblem::MpI1 => WallVelocityBc::Slip,
            _ => WallVelocityBc::NoSlip {
                v1: self.interface_values(|f, x| f.wall_velocity(x, t)[0]),
                v2: self.interface_values(|f, x| f.wall_velocity(x, t)[1]),
            },
        }
    }

    fn wall_pressure_bc(&self, v: &Velocity, t: f64) -> WallPressureBc {
        let nu = self.effective_viscosity();
        let g = &self.grid;
        let off = self.interface_values(|f, x| f.bottom_pressure_offset(x, t));
        WallPressureBc::Neumann {
            g: (0..g.nx())
                .map(|i| nu * lap(g, &v[1], i as isize, 0) + off[i])
                .collect(),
        }
    }

    fn pressure_source(&self, v: &Velocity, t: f64) -> Field {
        let g = &self.grid;
        let damping = self.config.cd * self.config.params.rho / self.dt;
        let forcing = self.forcing.as_ref();
        fluid::apply_stencil(g, self.exec, |i, j| {
            let mut s = damping * fluid::div(g, v, i, j);
            if let Some(f) = forcing {
                s += f.poisson(g.x(i), g.y(j), t);
            }
            s
        })
    }

    fn seed_exact_history(&mut self) -> Result<()> {
        let exact = self.exact.clone().expect("exact solution present");
        let (g, dt) = (self.grid, self.dt);
        let t = self.fluid.t;
        let (v1, p1) = exact_fluid(&g, exact.as_ref(), t - dt);
        let (_, p2) = exact_fluid(&g, exact.as_ref(), t - 2.0 * dt);
        let forcing = self.momentum_forcing(t - dt);
        self.fluid.f_prev = Some(momentum_rhs(
            &g,
            &v1,
            &p1,
            self.params(),
            self.momentum_options(),
            forcing.as_ref(),
        ));
        self.fluid.p_hist = [Some(p1), Some(p2)];
        let (u_prev, v_prev) = exact_shell(&g, exact.as_ref(), t - dt);
        self.shell.u_prev = Some(u_prev);
        self.shell.v_prev = Some(v_prev);
        Ok(())
    }

    fn seed_taylor_history(&mut self) -> Result<()> {
        let (g, dt) = (self.grid, self.dt);
        let t = self.fluid.t;
        if self.fluid.f_prev.is_none() {
            let forcing = self.momentum_forcing(t);
            self.fluid.f_prev = Some(momentum_rhs(
                &g,
                &self.fluid.v,
                &self.fluid.p,
                self.params(),
                self.momentum_options(),
                forcing.as_ref(),
            ));
        }
        if self.fluid.p_hist[0].is_none() {
            self.fluid.p_hist[0] = Some(self.fluid.p.clone());
        }
        if self.fluid.p_hist[1].is_none() {
            self.fluid.p_hist[1] = self.fluid.p_hist[0].clone();
        }
        if self.shell.u_prev.is_none() || self.shell.v_prev.is_none() {
            let params = *self.params();
            let sigma = compute_traction(&g, &self.fluid.v, &self.fluid.p, &params);
            let load = self.shell_load(t);
            let nx = g.nx();
            let (mut u_prev, mut v_prev) = (zero_components(nx), zero_components(nx));
            for &c in self.shell.components() {
                let lu = shell_operator(&self.shell.u[c], &params, g.hx);
                for i in 0..nx {
                    let f = load.as_ref().map_or(0.0, |l| l[c][i]);
                    let a = (lu[i] - sigma[c][i] + f) / params.rhosh;
                    u_prev[c][i] = self.shell.u[c][i] - dt * self.shell.v[c][i] + 0.5 * dt * dt * a;
                    v_prev[c][i] = self.shell.v[c][i] - dt * a;
                }
            }
            self.shell.u_prev = Some(u_prev);
            self.shell.v_prev = Some(v_prev);
        }
        Ok(())
    }

    /// Advances one time step with the configured scheme.
    pub fn step(&mut self) -> Result<StepReport> {
        match self.config.scheme {
            Scheme::Amp => self.amp_step(),
            Scheme::Traditional => self.traditional_step(),
        }
    }

    fn amp_velocity_spec(&self, p_guess: &Field, u: &Components, t: f64) -> VelocityBcSpec {
        let top = match self.config.problem {
            ModelProblem::MpI1 => InterfaceVelocityBc::Dirichlet { v1: None, v2: None },
            ModelProblem::MpV1 => InterfaceVelocityBc::Dirichlet {
                v1: Some(self.interface_values(|f, x| f.kinematic(x, t)[0])),
                v2: None,
            },
            ModelProblem::MpV2 => {
                let off = self.interface_values(|f, x| f.tangential_offset(x, t));
                InterfaceVelocityBc::AmpTangential {
                    h: amp_tangential_rhs(&self.grid, p_guess, u, self.params(), &off),
                    nu: self.effective_viscosity(),
                }
            }
        };
        VelocityBcSpec {
            top,
            bottom: self.wall_bc(t),
        }
    }

    fn amp_pressure(&self, v: &Velocity, u: &Components, t: f64) -> Result<(Field, f64, Vec<f64>)> {
        let off = self.interface_values(|f, x| f.robin_offset(x, t));
        let rhs = amp_pressure_rhs(&self.grid, v, u, self.params(), self.effective_viscosity(), &off);
        let spec = PressureBcSpec {
            top: InterfacePressureBc::Robin {
                beta: self.params().robin_coefficient(),
                rhs: rhs.clone(),
            },
            bottom: self.wall_pressure_bc(v, t),
        };
        let (p, res) = self
            .solver
            .solve(&self.pressure_source(v, t), &spec, PressureGauge::None)?;
        Ok((p, res, rhs))
    }

    fn amp_step(&mut self) -> Result<StepReport> {
        let g = self.grid;
        let params = *self.params();
        let (dt, exec) = (self.dt, self.exec);
        let (t0, t1) = (self.fluid.t, self.fluid.t + self.dt);

        // Stage I: shell leap-frog.
        let sigma_n = compute_traction(&g, &self.fluid.v, &self.fluid.p, &params);
        let load_n = self.shell_load(t0);
        let pred = shell_predict(&self.shell, &sigma_n, load_n.as_ref(), dt, &params, g.hx)?;

        // Stage II: fluid velocity, Adams-Bashforth.
        let mom_n = self.momentum_forcing(t0);
        let f_now = momentum_rhs(&g, &self.fluid.v, &self.fluid.p, &params, self.momentum_options(), mom_n.as_ref());
        let mut vp = velocity_predict(&g, &self.fluid, &f_now, dt, &params, exec)?;
        let p_guess = self.fluid.extrapolated_pressure()?;
        let spec = self.amp_velocity_spec(&p_guess, &pred.u, t1);
        apply_velocity_bcs(&g, &mut vp, &spec, &params)?;

        // Stage III: pressure with the Robin condition.
        let (pp, res_p, robin_p) = self.amp_pressure(&vp, &pred.u, t1)?;

        let (mut v_new, p_new, u_new, mut vbar_new, spec, residual, robin) = if self.config.corrector {
            // Stage IV: shell trapezoidal corrector.
            let sigma_p = compute_traction(&g, &vp, &pp, &params);
            let load_mid = match (&load_n, self.shell_load(t1)) {
                (Some(a), Some(b)) => Some(average(a, &b)),
                _ => None,
            };
            let (u1, vb1) = shell_correct(&self.shell, &pred, &sigma_p, &sigma_n, load_mid.as_ref(), dt, &params, g.hx);

            // Stage V: fluid velocity, Adams-Moulton.
            let mom_1 = self.momentum_forcing(t1);
            let f_pred = momentum_rhs(&g, &vp, &pp, &params, self.momentum_options(), mom_1.as_ref());
            let mut v1 = velocity_correct(&g, &self.fluid.v, &f_pred, &f_now, dt, &params, exec);
            let spec = self.amp_velocity_spec(&pp, &u1, t1);
            apply_velocity_bcs(&g, &mut v1, &spec, &params)?;

            // Stage VI: corrected pressure.
            let (p1, res_c, robin_c) = self.amp_pressure(&v1, &u1, t1)?;
            (v1, p1, u1, vb1, spec, res_p.max(res_c), robin_c)
        } else {
            (vp, pp, pred.u, pred.v, spec, res_p, robin_p)
        };

        // Stage VII: interface velocity projection.
        let offset = self.kinematic_offset(t1);
        let comps = self.shell.components();
        let mismatch = project_interface_velocity(&g, &mut v_new, &mut vbar_new, &offset, comps, &params);
        apply_velocity_bcs(&g, &mut v_new, &spec, &params)?;

        let tangential = match &spec.top {
            InterfaceVelocityBc::AmpTangential { h, .. } => h.clone(),
            _ => Vec::new(),
        };
        self.last_interface = Some(InterfaceData {
            traction: compute_traction(&g, &v_new, &p_new, &params),
            tangential,
            pressure: robin,
            mismatch_offset: offset,
        });
        Ok(self.finish_step(f_now, v_new, p_new, u_new, vbar_new, mismatch, residual))
    }

    /// Shell acceleration from the shell equation with the lagged traction.
    fn lagged_acceleration(&self, u: &Components, sigma: &Components, t: f64) -> Vec<f64> {
        let params = self.params();
        let lu = shell_operator(&u[1], params, self.grid.hx);
        let load = self.shell_load(t);
        (0..self.grid.nx())
            .map(|i| {
                let f = load.as_ref().map_or(0.0, |l| l[1][i]);
                (lu[i] - sigma[1][i] + f) / params.rhosh
            })
            .collect()
    }

    fn traditional_velocity_spec(&self, vbar: &Components, t: f64) -> VelocityBcSpec {
        let off = self.kinematic_offset(t);
        let value = |c: usize| -> Vec<f64> { (0..self.grid.nx()).map(|i| vbar[c][i] + off[c][i]).collect() };
        let v1 = match self.config.problem {
            ModelProblem::MpI1 => None,
            _ => Some(value(0)),
        };
        VelocityBcSpec {
            top: InterfaceVelocityBc::Dirichlet { v1, v2: Some(value(1)) },
            bottom: self.wall_bc(t),
        }
    }

    fn traditional_pressure(&self, v: &Velocity, accel: &[f64], t: f64) -> Result<(Field, f64, Vec<f64>)> {
        let g = &self.grid;
        let nu = self.effective_viscosity();
        let rho = self.params().rho;
        let off = self.interface_values(|f, x| f.neumann_offset(x, t));
        let gn: Vec<f64> = (0..g.nx())
            .map(|i| -rho * accel[i] + nu * lap(g, &v[1], i as isize, g.top()) + off[i])
            .collect();
        let spec = PressureBcSpec {
            top: InterfacePressureBc::Neumann { g: gn.clone() },
            bottom: self.wall_pressure_bc(v, t),
        };
        let gauge = match &self.exact {
            Some(e) => {
                let mean = self.xs.iter().map(|&x| e.fluid(x, 0.0, t).p).sum::<f64>() / self.xs.len() as f64;
                PressureGauge::InterfaceMean(mean)
            }
            None => PressureGauge::InterfaceMean(0.0),
        };
        let (p, res) = self.solver.solve(&self.pressure_source(v, t), &spec, gauge)?;
        Ok((p, res, gn))
    }

    fn traditional_step(&mut self) -> Result<StepReport> {
        let g = self.grid;
        let params = *self.params();
        let (dt, exec) = (self.dt, self.exec);
        let (t0, t1) = (self.fluid.t, self.fluid.t + self.dt);

        // Shell leap-frog driven by the current (lagged) traction.
        let sigma_n = compute_traction(&g, &self.fluid.v, &self.fluid.p, &params);
        let load_n = self.shell_load(t0);
        let pred = shell_predict(&self.shell, &sigma_n, load_n.as_ref(), dt, &params, g.hx)?;
        let accel = self.lagged_acceleration(&pred.u, &sigma_n, t1);

        // Fluid with the shell velocity as interface data.
        let mom_n = self.momentum_forcing(t0);
        let f_now = momentum_rhs(&g, &self.fluid.v, &self.fluid.p, &params, self.momentum_options(), mom_n.as_ref());
        let mut vp = velocity_predict(&g, &self.fluid, &f_now, dt, &params, exec)?;
        let spec = self.traditional_velocity_spec(&pred.v, t1);
        apply_velocity_bcs(&g, &mut vp, &spec, &params)?;
        let (pp, res_p, gn_p) = self.traditional_pressure(&vp, &accel, t1)?;

        let (v_new, p_new, residual, gn) = if self.config.corrector {
            let mom_1 = self.momentum_forcing(t1);
            let f_pred = momentum_rhs(&g, &vp, &pp, &params, self.momentum_options(), mom_1.as_ref());
            let mut v1 = velocity_correct(&g, &self.fluid.v, &f_pred, &f_now, dt, &params, exec);
            apply_velocity_bcs(&g, &mut v1, &spec, &params)?;
            let (p1, res_c, gn_c) = self.traditional_pressure(&v1, &accel, t1)?;
            (v1, p1, res_p.max(res_c), gn_c)
        } else {
            (vp, pp, res_p, gn_p)
        };
        let offset = self.kinematic_offset(t1);
        let mismatch = interface_mismatch(&g, &v_new, &pred.v, &offset, self.shell.components());
        self.last_interface = Some(InterfaceData {
            traction: compute_traction(&g, &v_new, &p_new, &params),
            tangential: Vec::new(),
            pressure: gn,
            mismatch_offset: offset,
        });
        Ok(self.finish_step(f_now, v_new, p_new, pred.u, pred.v, mismatch, residual))
    }

    #[allow(clippy::too_many_arguments)]
    fn finish_step(
        &mut self,
        f_now: Velocity,
        v_new: Velocity,
        p_new: Field,
        u_new: Components,
        vbar_new: Components,
        mismatch: f64,
        residual: f64,
    ) -> StepReport {
        let dt = self.dt;
        let p_old = std::mem::replace(&mut self.fluid.p, p_new);
        let p_older = self.fluid.p_hist[0].take();
        self.fluid.p_hist = [Some(p_old), p_older];
        self.fluid.v = v_new;
        self.fluid.f_prev = Some(f_now);
        self.fluid.t += dt;
        self.shell.advance(u_new, vbar_new, dt);
        self.step_index += 1;

        let g = &self.grid;
        let offset = self
            .last_interface
            .as_ref()
            .map(|d| d.mismatch_offset.clone())
            .unwrap_or_else(|| zero_components(g.nx()));
        let mismatch_after =
            interface_mismatch(g, &self.fluid.v, &self.shell.v, &offset, self.shell.components());
        let v_max = physical_max(g, &self.fluid.v[0]).max(physical_max(g, &self.fluid.v[1]));
        let p_max = physical_max(g, &self.fluid.p);
        let u_max = self.shell.max_abs_u();
        let vbar_max = self.shell.max_abs_v();
        let finite = [v_max, p_max, u_max, vbar_max].iter().all(|x| x.is_finite());
        let bound = self.config.blowup;
        StepReport {
            step: self.step_index,
            t: self.fluid.t,
            v_max,
            p_max,
            u_max,
            vbar_max,
            mismatch,
            mismatch_after,
            divergence: fluid::divergence_norm(g, &self.fluid.v),
            residual,
            blowup: !finite || v_max > bound || p_max > bound || u_max > bound || vbar_max > bound,
        }
    }
}

fn physical_max(g: &Grid2D, f: &Field) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..=g.top() {
        for &x in f.row(j) {
            if x.is_nan() {
                return f64::NAN;
            }
            m = m.max(x.abs());
        }
    }
    m
}

fn average(a: &Components, b: &Components) -> Components {
    let mix = |x: &Vec<f64>, y: &Vec<f64>| x.iter().zip(y).map(|(p, q)| 0.5 * (p + q)).collect();
    [mix(&a[0], &b[0]), mix(&a[1], &b[1])]
}

/// Boundary structure of the pressure system for a configuration.
pub fn pressure_structure(config: &RunConfig) -> fluid::PressureStructure {
    fluid::PressureStructure {
        robin: match config.scheme {
            Scheme::Amp => Some(config.params.robin_coefficient()),
            Scheme::Traditional => None,
        },
        top_dirichlet: false,
        bottom_dirichlet: false,
    }
}

/// Residual of the discrete AMP interface identity obtained from the
/// trapezoidal shell and fluid updates with matching interface velocities:
/// `sigma^{n+1} n + beta div sigma^{n+1} - L_h(u^{n+1}) - L_h(u^n) + sigma^n n + beta div sigma^n`,
/// where `div sigma` is the fluid stress divergence on the interface.
#[allow(clippy::too_many_arguments)]
pub fn discrete_amp_residual(
    traction_new: &[f64],
    div_new: &[f64],
    traction_old: &[f64],
    div_old: &[f64],
    u_new: &[f64],
    u_old: &[f64],
    params: &PhysicalParams,
    h: f64,
) -> Vec<f64> {
    let beta = params.robin_coefficient();
    let (l1, l0) = (shell_operator(u_new, params, h), shell_operator(u_old, params, h));
    (0..u_new.len())
        .map(|i| {
            traction_new[i] + beta * div_new[i] - l1[i] - l0[i] + traction_old[i] + beta * div_old[i]
        })
        .collect()
}
