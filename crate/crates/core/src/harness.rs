//! Runs against exact solutions, error measurement, convergence studies,
//! scheme comparisons and run-directory output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::coupling::{exact_fluid, exact_shell, StepReport, Stepper};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fluid::write_field;
use crate::grid::{Field, Grid2D};
use crate::params::{DtRule, RunConfig, Scheme};

/// Default grid sequence of convergence studies.
pub const DEFAULT_GRIDS: [usize; 3] = [20, 40, 80];

/// Max-norm errors over all non-ghost nodes; vector variables take the max over components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub v: f64,
    pub p: f64,
    pub u: f64,
    pub vbar: f64,
}

impl ErrorNorms {
    pub const NAMES: [&'static str; 4] = ["v", "p", "u", "vbar"];

    pub fn values(&self) -> [f64; 4] {
        [self.v, self.p, self.u, self.vbar]
    }
}

fn field_error(g: &Grid2D, a: &Field, b: &Field) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..=g.top() {
        for (x, y) in a.row(j).iter().zip(b.row(j)) {
            let d = (x - y).abs();
            if d.is_nan() {
                return f64::NAN;
            }
            m = m.max(d);
        }
    }
    m
}

/// Errors of the stepper's current state against its exact solution.
pub fn measure_errors(stepper: &Stepper) -> Result<ErrorNorms> {
    let exact = stepper
        .exact()
        .ok_or_else(|| Error::InvalidArgument("error measurement needs an exact solution".into()))?;
    let g = stepper.grid();
    let t = stepper.time();
    let (v, p) = exact_fluid(g, exact.as_ref(), t);
    let (u, vbar) = exact_shell(g, exact.as_ref(), t);
    let f = &stepper.fluid;
    let s = &stepper.shell;
    let shell_err = |a: &[Vec<f64>; 2], b: &[Vec<f64>; 2]| {
        let mut m: f64 = 0.0;
        for &c in s.components() {
            for (x, y) in a[c].iter().zip(&b[c]) {
                let d = (x - y).abs();
                if d.is_nan() {
                    return f64::NAN;
                }
                m = m.max(d);
            }
        }
        m
    };
    Ok(ErrorNorms {
        v: field_error(g, &f.v[0], &v[0]).max(field_error(g, &f.v[1], &v[1])),
        p: field_error(g, &f.p, &p),
        u: shell_err(&s.u, &u),
        vbar: shell_err(&s.v, &vbar),
    })
}

/// Result of advancing one configuration to its final time (or to blow-up).
#[derive(Debug)]
pub struct RunOutcome {
    pub n: usize,
    pub dt: f64,
    pub steps_planned: usize,
    pub errors: ErrorNorms,
    /// Step index at which the blow-up bound was first exceeded.
    pub blowup_step: Option<usize>,
    pub reports: Vec<StepReport>,
    pub stepper: Stepper,
}

impl RunOutcome {
    pub fn blew_up(&self) -> bool {
        self.blowup_step.is_some()
    }

    /// Largest interface mismatch remaining at the end of any step.
    pub fn max_mismatch_after(&self) -> f64 {
        self.reports.iter().map(|r| r.mismatch_after).fold(0.0, f64::max)
    }
}

/// Advances `config` from the exact initial data to `t_final`, stopping early on blow-up.
pub fn run(config: &RunConfig, exec: Exec) -> Result<RunOutcome> {
    config.validate()?;
    let grid = Grid2D::new(&config.params, config.n)?;
    let (dt, steps) = config.time_step(&grid);
    let mut stepper = Stepper::new(config, dt, exec)?;
    let mut reports = Vec::with_capacity(steps);
    let mut blowup_step = None;
    for _ in 0..steps {
        let report = stepper.step()?;
        let blown = report.blowup;
        reports.push(report);
        if blown {
            blowup_step = Some(stepper.steps_taken());
            break;
        }
    }
    let errors = measure_errors(&stepper)?;
    Ok(RunOutcome {
        n: config.n,
        dt,
        steps_planned: steps,
        errors,
        blowup_step,
        reports,
        stepper,
    })
}

/// Configuration with a fixed step `dt` taken `steps` times.
pub fn fixed_steps(config: &RunConfig, dt: f64, steps: usize) -> RunConfig {
    let mut c = config.clone();
    c.dt_rule = DtRule::Fixed(dt);
    c.t_final = dt * steps as f64;
    c
}

/// Least-squares slope of `log e` against `log h`.
pub fn fit_rate(h: &[f64], e: &[f64]) -> f64 {
    let n = h.len() as f64;
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Errors, refinement ratios and fitted rates over a grid sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub label: String,
    pub grids: Vec<usize>,
    pub h: Vec<f64>,
    pub errors: Vec<ErrorNorms>,
    /// `ratios[j][q] = E_{j-1} / E_j` for `j >= 1`; entry 0 is unused (NaN).
    pub ratios: Vec<[f64; 4]>,
    pub rates: [f64; 4],
    pub blowup: Vec<bool>,
}

impl ErrorReport {
    pub fn from_errors(label: impl Into<String>, grids: Vec<usize>, h: Vec<f64>, errors: Vec<ErrorNorms>, blowup: Vec<bool>) -> Self {
        let mut ratios = vec![[f64::NAN; 4]; errors.len()];
        for j in 1..errors.len() {
            let (a, b) = (errors[j - 1].values(), errors[j].values());
            for q in 0..4 {
                ratios[j][q] = a[q] / b[q];
            }
        }
        let mut rates = [f64::NAN; 4];
        if errors.len() >= 2 {
            for (q, r) in rates.iter_mut().enumerate() {
                let e: Vec<f64> = errors.iter().map(|x| x.values()[q]).collect();
                *r = fit_rate(&h, &e);
            }
        }
        ErrorReport {
            label: label.into(),
            grids,
            h,
            errors,
            ratios,
            rates,
            blowup,
        }
    }

    pub fn any_blowup(&self) -> bool {
        self.blowup.iter().any(|&b| b)
    }

    pub fn rate(&self, name: &str) -> Option<f64> {
        ErrorNorms::NAMES.iter().position(|&n| n == name).map(|q| self.rates[q])
    }

    /// Ratios of one variable across refinements.
    pub fn ratios_of(&self, name: &str) -> Vec<f64> {
        match ErrorNorms::NAMES.iter().position(|&n| n == name) {
            Some(q) => self.ratios.iter().skip(1).map(|r| r[q]).collect(),
            None => Vec::new(),
        }
    }

    fn check_ratios(&self) {
        for j in 1..self.errors.len() {
            let (a, b) = (self.errors[j - 1].values(), self.errors[j].values());
            for q in 0..4 {
                let r = a[q] / b[q];
                assert!(r == self.ratios[j][q] || (r.is_nan() && self.ratios[j][q].is_nan()));
            }
        }
    }

    pub const CSV_HEADER: &'static str = "N,h,E_v,r_v,E_p,r_p,E_u,r_u,E_vbar,r_vbar,blowup";

    pub fn to_csv(&self) -> String {
        self.check_ratios();
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for (j, e) in self.errors.iter().enumerate() {
            write!(s, "{},{:.6e}", self.grids[j], self.h[j]).unwrap();
            for (q, v) in e.values().iter().enumerate() {
                write!(s, ",{:.6e},{:.4}", v, self.ratios[j][q]).unwrap();
            }
            writeln!(s, ",{}", u8::from(self.blowup[j])).unwrap();
        }
        write!(s, "rate,").unwrap();
        for r in self.rates {
            write!(s, ",,{r:.4}").unwrap();
        }
        s.push_str(",\n");
        s
    }

    pub fn to_table(&self) -> String {
        self.check_ratios();
        let mut s = String::new();
        writeln!(s, "{}", self.label).unwrap();
        write!(s, "{:>6} {:>10}", "N", "h").unwrap();
        for name in ErrorNorms::NAMES {
            write!(s, " {:>11} {:>6}", format!("E_{name}"), "r").unwrap();
        }
        s.push('\n');
        for (j, e) in self.errors.iter().enumerate() {
            write!(s, "{:>6} {:>10.4e}", self.grids[j], self.h[j]).unwrap();
            for (q, v) in e.values().iter().enumerate() {
                let r = self.ratios[j][q];
                let rs = if r.is_nan() { String::new() } else { format!("{r:.2}") };
                write!(s, " {:>11.3e} {:>6}", v, rs).unwrap();
            }
            if self.blowup[j] {
                s.push_str("  blow-up");
            }
            s.push('\n');
        }
        write!(s, "{:>6} {:>10}", "rate", "").unwrap();
        for r in self.rates {
            write!(s, " {:>11.2} {:>6}", r, "").unwrap();
        }
        s.push('\n');
        s
    }
}

fn label(config: &RunConfig) -> String {
    format!(
        "{} {} delta={} t={}",
        config.problem,
        config.scheme,
        config.params.delta(),
        config.t_final
    )
}

/// Runs `base` on each grid and collects errors. Grid cases run concurrently
/// under [`Exec::Parallel`]; stencils inside each case run sequentially.
pub fn converge_runs(base: &RunConfig, grids: &[usize], exec: Exec) -> Result<(ErrorReport, Vec<RunOutcome>)> {
    if grids.len() < 2 {
        return Err(Error::InvalidArgument("a convergence study needs at least two grids".into()));
    }
    if grids.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("grid sequence must be strictly increasing".into()));
    }
    let outcomes = exec.map(grids, |&n| {
        let mut c = base.clone();
        c.n = n;
        run(&c, Exec::Sequential)
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let h = outcomes.iter().map(|o| o.stepper.grid().h()).collect();
    let errors = outcomes.iter().map(|o| o.errors).collect();
    let blowup = outcomes.iter().map(|o| o.blew_up()).collect();
    Ok((
        ErrorReport::from_errors(label(base), grids.to_vec(), h, errors, blowup),
        outcomes,
    ))
}

pub fn converge(base: &RunConfig, grids: &[usize], exec: Exec) -> Result<ErrorReport> {
    converge_runs(base, grids, exec).map(|(r, _)| r)
}

/// Side-by-side outcome of the two schemes for one density ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeComparison {
    pub delta: f64,
    pub amp_error: f64,
    pub amp_blowup_step: Option<usize>,
    pub traditional_error: f64,
    pub traditional_blowup_step: Option<usize>,
}

impl SchemeComparison {
    pub const CSV_HEADER: &'static str = "delta,amp_error_v,amp_blowup_step,traditional_error_v,traditional_blowup_step";

    pub fn to_csv(&self) -> String {
        let step = |s: Option<usize>| s.map_or(String::from("-"), |v| v.to_string());
        format!(
            "{},{:.6e},{},{:.6e},{}",
            self.delta,
            self.amp_error,
            step(self.amp_blowup_step),
            self.traditional_error,
            step(self.traditional_blowup_step)
        )
    }
}

/// Runs both schemes on `base` rescaled to each density ratio.
pub fn compare_schemes(base: &RunConfig, deltas: &[f64], exec: Exec) -> Result<Vec<SchemeComparison>> {
    let rows = exec.map(deltas, |&delta| -> Result<SchemeComparison> {
        let mut c = base.clone();
        c.params.rhosh = delta * c.params.rho * c.params.depth;
        c.params.tbar = c.params.rhosh;
        c.scheme = Scheme::Amp;
        let amp = run(&c, Exec::Sequential)?;
        c.scheme = Scheme::Traditional;
        let trad = run(&c, Exec::Sequential)?;
        Ok(SchemeComparison {
            delta,
            amp_error: amp.errors.v,
            amp_blowup_step: amp.blowup_step,
            traditional_error: trad.errors.v,
            traditional_blowup_step: trad.blowup_step,
        })
    });
    rows.into_iter().collect()
}

/// Writes `fields/{v1,v2,p}_<n>.csv` for the stepper's current state.
pub fn write_fields(dir: &Path, stepper: &Stepper) -> Result<()> {
    let fields = dir.join("fields");
    fs::create_dir_all(&fields)?;
    let g = stepper.grid();
    let n = g.n;
    let f = &stepper.fluid;
    for (name, field) in [("v1", &f.v[0]), ("v2", &f.v[1]), ("p", &f.p)] {
        let mut file = fs::File::create(fields.join(format!("{name}_{n}.csv")))?;
        write_field(&mut file, g, field, stepper.time())?;
    }
    Ok(())
}

pub fn write_steps(path: &Path, reports: &[StepReport]) -> Result<()> {
    let mut s = String::from(StepReport::CSV_HEADER);
    s.push('\n');
    for r in reports {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    fs::write(path, s)?;
    Ok(())
}

/// Writes the standard run directory for a set of runs on increasing grids.
pub fn write_run_directory(dir: &Path, config: &RunConfig, report: &ErrorReport, outcomes: &[RunOutcome]) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.csv"), report.to_csv())?;
    fs::write(dir.join("table.txt"), report.to_table())?;
    if config.output.steps {
        // The step log of the finest grid.
        if let Some(last) = outcomes.last() {
            write_steps(&dir.join("steps.csv"), &last.reports)?;
        }
    }
    if config.output.fields {
        for o in outcomes {
            write_fields(dir, &o.stepper)?;
        }
    }
    let mut f = fs::OpenOptions::new().create(true).append(true).open(dir.join("table.txt"))?;
    for o in outcomes {
        if let Some(step) = o.blowup_step {
            writeln!(f, "N={}: blow-up at step {step}", o.n)?;
        }
    }
    Ok(())
}

/// Single-grid report for a run.
pub fn single_report(config: &RunConfig, outcome: &RunOutcome) -> ErrorReport {
    ErrorReport::from_errors(
        label(config),
        vec![outcome.n],
        vec![outcome.stepper.grid().h()],
        vec![outcome.errors],
        vec![outcome.blew_up()],
    )
}

/// Rate and ratio windows used by manufactured-solution checks.
pub const RATE_WINDOW: (f64, f64) = (1.5, 2.5);
pub const RATIO_WINDOW: (f64, f64) = (2.5, 6.0);

/// Outcome of a manufactured-solution convergence check.
#[derive(Debug, Clone, PartialEq)]
pub struct MmsCheck {
    pub report: ErrorReport,
    /// Variables whose rate or ratios fall outside the windows.
    pub failures: Vec<String>,
}

impl MmsCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && !self.report.any_blowup()
    }
}

/// Checks rates and ratios of `v`, `p`, `u` against the windows.
pub fn check_rates(report: &ErrorReport, with_ratios: bool) -> Vec<String> {
    let mut failures = Vec::new();
    for name in ["v", "p", "u"] {
        let rate = report.rate(name).unwrap_or(f64::NAN);
        if !(RATE_WINDOW.0..=RATE_WINDOW.1).contains(&rate) {
            failures.push(format!("{name}: rate {rate:.3}"));
        }
        if with_ratios {
            for r in report.ratios_of(name) {
                if !(RATIO_WINDOW.0..=RATIO_WINDOW.1).contains(&r) {
                    failures.push(format!("{name}: ratio {r:.3}"));
                }
            }
        }
    }
    failures
}

pub fn mms_check(config: &RunConfig, grids: &[usize], exec: Exec) -> Result<MmsCheck> {
    require_mms(config)?;
    mms_check_report(config, converge(config, grids, exec)?)
}

/// Checks an existing manufactured-solution report.
pub fn mms_check_report(config: &RunConfig, report: ErrorReport) -> Result<MmsCheck> {
    require_mms(config)?;
    let failures = check_rates(&report, true);
    Ok(MmsCheck { report, failures })
}

pub fn require_mms(config: &RunConfig) -> Result<()> {
    if matches!(config.solution, crate::params::SolutionSource::Mms { .. }) {
        Ok(())
    } else {
        Err(Error::InvalidConfig("mms-check needs a manufactured-solution configuration".into()))
    }
}
