//! Physical constants, model-problem presets and run configuration.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::modes;

/// Fluid and shell constants.
///
/// The shell density and thickness only ever appear as the product
/// `rhosh` (mass per unit length of interface).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub rho: f64,
    pub mu: f64,
    /// Channel length `L` (x-period).
    pub length: f64,
    /// Channel depth `H`.
    pub depth: f64,
    pub rhosh: f64,
    pub kbar: f64,
    pub tbar: f64,
    pub bbar: f64,
    /// Length scale used by the interface velocity projection weight.
    pub hf: f64,
}

impl PhysicalParams {
    /// Shell-to-fluid density ratio `rhosh / (rho H)`.
    pub fn delta(&self) -> f64 {
        self.rhosh / (self.rho * self.depth)
    }

    /// Robin coefficient `rhosh / rho` of the AMP interface conditions.
    pub fn robin_coefficient(&self) -> f64 {
        self.rhosh / self.rho
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{what} (params: {self:?})")))
            }
        };
        check(self.rho > 0.0, "rho must be positive")?;
        check(self.mu >= 0.0, "mu must be non-negative")?;
        check(self.length > 0.0, "L must be positive")?;
        check(self.depth > 0.0, "H must be positive")?;
        check(self.rhosh > 0.0, "rhosh must be positive")?;
        check(
            self.kbar >= 0.0 && self.tbar >= 0.0 && self.bbar >= 0.0,
            "Kbar, Tbar, Bbar must be non-negative",
        )?;
        check(self.hf > 0.0, "hf must be positive")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelProblem {
    /// Inviscid fluid, shell with vertical motion only, slip bottom wall.
    MpI1,
    /// Viscous fluid, shell with vertical motion only, no-slip bottom wall.
    MpV1,
    /// Viscous fluid, shell with horizontal and vertical motion.
    MpV2,
}

impl ModelProblem {
    pub const ALL: [ModelProblem; 3] = [ModelProblem::MpI1, ModelProblem::MpV1, ModelProblem::MpV2];

    /// Horizontal shell motion switch (0 or 1).
    pub fn theta(self) -> u8 {
        match self {
            ModelProblem::MpV2 => 1,
            _ => 0,
        }
    }

    pub fn is_viscous(self) -> bool {
        self != ModelProblem::MpI1
    }

    pub fn horizontal_shell(self) -> bool {
        self.theta() == 1
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelProblem::MpI1 => "MP-I1",
            ModelProblem::MpV1 => "MP-V1",
            ModelProblem::MpV2 => "MP-V2",
        }
    }
}

impl fmt::Display for ModelProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelProblem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_uppercase();
        match key.as_str() {
            "MPI1" | "I1" => Ok(ModelProblem::MpI1),
            "MPV1" | "V1" => Ok(ModelProblem::MpV1),
            "MPV2" | "V2" => Ok(ModelProblem::MpV2),
            _ => Err(Error::InvalidConfig(format!("unknown model problem '{s}'"))),
        }
    }
}

/// Viscosity used by the viscous traveling-wave and manufactured-solution runs.
pub const DEFAULT_VISCOSITY: f64 = 0.05;

/// Standard parameter set for a density ratio: `rho = H = L = 1`,
/// `rhosh = Tbar = delta`, `Kbar = Bbar = 0`, `hf = 10`.
///
/// `mu` is zero for MP-I1 and [`DEFAULT_VISCOSITY`] otherwise.
pub fn make_preset(delta: f64, problem: ModelProblem) -> Result<PhysicalParams> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "density ratio must be positive, got {delta}"
        )));
    }
    let rho = 1.0;
    let depth = 1.0;
    Ok(PhysicalParams {
        rho,
        mu: if problem.is_viscous() { DEFAULT_VISCOSITY } else { 0.0 },
        length: 1.0,
        depth,
        rhosh: delta * rho * depth,
        kbar: 0.0,
        tbar: delta * rho * depth,
        bbar: 0.0,
        hf: 10.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Amp,
    Traditional,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AMP" => Ok(Scheme::Amp),
            "TRADITIONAL" | "TP" => Ok(Scheme::Traditional),
            _ => Err(Error::InvalidConfig(format!("unknown scheme '{s}'"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Amp => "AMP",
            Scheme::Traditional => "TRADITIONAL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtRule {
    Fixed(f64),
    /// `dt = ct * h * min(1, rho h / (4 mu))`, capped by the AMP mode bound.
    Proportional(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolutionSource {
    /// `k` is the wavenumber (1/length); `branch` picks the sign of `Re(omega)`.
    TravelingWave { k: f64, branch: i8, umax: f64 },
    Mms { fx: f64, ft: f64, abar: f64, bbar: f64 },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputControls {
    pub dir: Option<PathBuf>,
    pub fields: bool,
    pub steps: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: PhysicalParams,
    pub problem: ModelProblem,
    pub n: usize,
    pub dt_rule: DtRule,
    pub t_final: f64,
    pub scheme: Scheme,
    pub corrector: bool,
    /// Artificial dissipation coefficient (multiplies `h^2`).
    pub d2: f64,
    /// Divergence-damping coefficient.
    pub cd: f64,
    pub solution: SolutionSource,
    pub output: OutputControls,
    /// Max-norm above which a run is flagged as blown up.
    pub blowup: f64,
}

pub const DEFAULT_BLOWUP: f64 = 1e6;
pub const DEFAULT_CT: f64 = 0.25;
pub const DEFAULT_CD: f64 = 1.0;
pub const DEFAULT_UMAX: f64 = 0.1;

/// Default artificial dissipation: only the inviscid problem uses it.
pub fn default_d2(problem: ModelProblem) -> f64 {
    match problem {
        ModelProblem::MpI1 => 0.25,
        _ => 0.0,
    }
}

impl RunConfig {
    /// Traveling-wave run with the standard parameters for `delta`.
    pub fn traveling_wave(problem: ModelProblem, delta: f64, n: usize) -> Result<Self> {
        let params = make_preset(delta, problem)?;
        Ok(Self::with_defaults(
            params,
            problem,
            n,
            SolutionSource::TravelingWave {
                k: 2.0 * PI / params.length,
                branch: 1,
                umax: DEFAULT_UMAX,
            },
        ))
    }

    /// Manufactured-solution run (`fx = ft = 2`, amplitudes 0.1).
    pub fn mms(problem: ModelProblem, delta: f64, n: usize) -> Result<Self> {
        let params = make_preset(delta, problem)?;
        Ok(Self::with_defaults(
            params,
            problem,
            n,
            SolutionSource::Mms {
                fx: 2.0,
                ft: 2.0,
                abar: 0.1,
                bbar: 0.1,
            },
        ))
    }

    fn with_defaults(
        params: PhysicalParams,
        problem: ModelProblem,
        n: usize,
        solution: SolutionSource,
    ) -> Self {
        RunConfig {
            params,
            problem,
            n,
            dt_rule: DtRule::Proportional(DEFAULT_CT),
            t_final: 0.5,
            scheme: Scheme::Amp,
            corrector: true,
            d2: default_d2(problem),
            cd: DEFAULT_CD,
            solution,
            output: OutputControls::default(),
            blowup: DEFAULT_BLOWUP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.n < Grid2D::MIN_CELLS {
            return Err(Error::InvalidConfig(format!(
                "N = {} is below the minimum of {}",
                self.n,
                Grid2D::MIN_CELLS
            )));
        }
        if !(self.t_final > 0.0) {
            return Err(Error::InvalidConfig("t_final must be positive".into()));
        }
        match self.dt_rule {
            DtRule::Fixed(dt) | DtRule::Proportional(dt) if !(dt > 0.0) => {
                return Err(Error::InvalidConfig("time step parameter must be positive".into()))
            }
            _ => {}
        }
        if self.d2 < 0.0 || self.cd < 0.0 {
            return Err(Error::InvalidConfig("d2 and Cd must be non-negative".into()));
        }
        if self.problem == ModelProblem::MpI1 && self.params.mu != 0.0 {
            return Err(Error::InvalidConfig("MP-I1 is inviscid: mu must be 0".into()));
        }
        if self.problem.is_viscous() && self.params.mu == 0.0 {
            return Err(Error::InvalidConfig(format!(
                "{} requires mu > 0 (use MP-I1 for inviscid runs)",
                self.problem
            )));
        }
        if let SolutionSource::Mms { .. } = self.solution {
            if self.problem == ModelProblem::MpI1 {
                return Err(Error::InvalidConfig(
                    "manufactured solutions are supported for the viscous problems only".into(),
                ));
            }
        }
        Ok(())
    }

    /// Resolves the time step and step count for the run's grid.
    pub fn time_step(&self, grid: &Grid2D) -> (f64, usize) {
        match self.dt_rule {
            DtRule::Fixed(dt) => {
                let steps = ((self.t_final / dt) - 1e-9).ceil().max(1.0) as usize;
                (dt, steps)
            }
            DtRule::Proportional(ct) => {
                let dt_max = stable_time_step(&self.params, grid, ct);
                let steps = (self.t_final / dt_max).ceil().max(1.0) as usize;
                (self.t_final / steps as f64, steps)
            }
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text)?;
        file.resolve()
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }
}

/// Fraction of the AMP mode bound allowed at the grid Nyquist wavenumber. The
/// two-level leap-frog predictor is neutral only up to half that bound.
const SHELL_CAP: f64 = 0.45;

/// Largest step allowed by the proportional rule on `grid`.
pub fn stable_time_step(params: &PhysicalParams, grid: &Grid2D, ct: f64) -> f64 {
    let h = grid.hx.min(grid.hy);
    let viscous = if params.mu > 0.0 {
        (params.rho * h / (4.0 * params.mu)).min(1.0)
    } else {
        1.0
    };
    let dt = ct * h * viscous;
    let kx = PI / grid.hx;
    let lc = modes::shell_symbol(params, kx);
    match modes::added_mass(kx, params.depth, params.rho) {
        Ok(ma) => dt.min(SHELL_CAP * modes::amp_dt_max(params.rhosh, lc, ma)),
        Err(_) => dt,
    }
}

// ---- configuration file layout ----

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    physics: PhysicsSection,
    grid: GridSection,
    #[serde(default)]
    time: TimeSection,
    #[serde(default)]
    scheme: SchemeSection,
    #[serde(default)]
    solution: SolutionSection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhysicsSection {
    problem: String,
    delta: Option<f64>,
    rho: Option<f64>,
    mu: Option<f64>,
    #[serde(rename = "L")]
    length: Option<f64>,
    #[serde(rename = "H")]
    depth: Option<f64>,
    rhosh: Option<f64>,
    #[serde(rename = "Kbar")]
    kbar: Option<f64>,
    #[serde(rename = "Tbar")]
    tbar: Option<f64>,
    #[serde(rename = "Bbar")]
    bbar: Option<f64>,
    hf: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    #[serde(rename = "N")]
    n: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TimeSection {
    t_final: Option<f64>,
    dt: Option<f64>,
    #[serde(rename = "Ct")]
    ct: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeSection {
    scheme: Option<String>,
    corrector: Option<bool>,
    d2: Option<f64>,
    #[serde(rename = "Cd")]
    cd: Option<f64>,
    blowup: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolutionSection {
    kind: Option<String>,
    k: Option<f64>,
    branch: Option<i8>,
    umax: Option<f64>,
    fx: Option<f64>,
    ft: Option<f64>,
    abar: Option<f64>,
    bbar: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    dir: Option<PathBuf>,
    fields: Option<bool>,
    steps: Option<bool>,
}

impl ConfigFile {
    fn resolve(self) -> Result<RunConfig> {
        let problem: ModelProblem = self.physics.problem.parse()?;
        let ph = &self.physics;
        let mut params = match ph.delta {
            Some(delta) => make_preset(delta, problem)?,
            None => make_preset(1.0, problem)?,
        };
        params.rho = ph.rho.unwrap_or(params.rho);
        params.mu = ph.mu.unwrap_or(params.mu);
        params.length = ph.length.unwrap_or(params.length);
        params.depth = ph.depth.unwrap_or(params.depth);
        if let Some(delta) = ph.delta {
            // Keep the preset relation rhosh = Tbar = delta rho H under overrides.
            params.rhosh = delta * params.rho * params.depth;
            params.tbar = params.rhosh;
        }
        params.rhosh = ph.rhosh.unwrap_or(params.rhosh);
        params.kbar = ph.kbar.unwrap_or(params.kbar);
        params.tbar = ph.tbar.unwrap_or(params.tbar);
        params.bbar = ph.bbar.unwrap_or(params.bbar);
        params.hf = ph.hf.unwrap_or(params.hf);

        let dt_rule = match (self.time.dt, self.time.ct) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig("give either [time] dt or Ct, not both".into()))
            }
            (Some(dt), None) => DtRule::Fixed(dt),
            (None, ct) => DtRule::Proportional(ct.unwrap_or(DEFAULT_CT)),
        };

        let sol = &self.solution;
        let kind = sol
            .kind
            .as_deref()
            .unwrap_or("TravelingWave")
            .to_ascii_lowercase()
            .replace(['-', '_', ' '], "");
        let solution = match kind.as_str() {
            "travelingwave" | "tw" => SolutionSource::TravelingWave {
                k: sol.k.unwrap_or(2.0 * PI / params.length),
                branch: sol.branch.unwrap_or(1),
                umax: sol.umax.unwrap_or(DEFAULT_UMAX),
            },
            "mms" => SolutionSource::Mms {
                fx: sol.fx.unwrap_or(2.0),
                ft: sol.ft.unwrap_or(2.0),
                abar: sol.abar.unwrap_or(0.1),
                bbar: sol.bbar.unwrap_or(0.1),
            },
            other => {
                return Err(Error::InvalidConfig(format!("unknown solution kind '{other}'")))
            }
        };

        let sc = &self.scheme;
        let config = RunConfig {
            params,
            problem,
            n: self.grid.n,
            dt_rule,
            t_final: self.time.t_final.unwrap_or(0.5),
            scheme: sc.scheme.as_deref().unwrap_or("AMP").parse()?,
            corrector: sc.corrector.unwrap_or(true),
            d2: sc.d2.unwrap_or_else(|| default_d2(problem)),
            cd: sc.cd.unwrap_or(DEFAULT_CD),
            solution,
            output: OutputControls {
                dir: self.output.dir,
                fields: self.output.fields.unwrap_or(true),
                steps: self.output.steps.unwrap_or(true),
            },
            blowup: sc.blowup.unwrap_or(DEFAULT_BLOWUP),
        };
        config.validate()?;
        Ok(config)
    }
}
