//! Fourier mode stability of the interface coupling for the inviscid problem:
//! added mass, amplification polynomials of the traditional and AMP schemes,
//! their closed-form stability bounds and the scalar mode recursions.

use std::fmt;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::params::{make_preset, ModelProblem, PhysicalParams, Scheme};

/// Shell symbol `Kbar + Tbar kx^2 + Bbar kx^4`.
pub fn shell_symbol(params: &PhysicalParams, kx: f64) -> f64 {
    params.kbar + params.tbar * kx * kx + params.bbar * kx.powi(4)
}

/// Added-mass coefficient `rho / (kx tanh(kx H))`.
pub fn added_mass(kx: f64, depth: f64, rho: f64) -> Result<f64> {
    if kx == 0.0 {
        return Err(Error::DivergentMode);
    }
    if !(depth > 0.0) {
        return Err(Error::InvalidArgument(format!("depth must be positive, got {depth}")));
    }
    let kx = kx.abs();
    Ok(rho / (kx * (kx * depth).tanh()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub kx: f64,
    pub lc: f64,
    pub ma: f64,
    pub rhosh: f64,
    pub dt: f64,
}

impl ModeParams {
    pub fn from_physical(params: &PhysicalParams, kx: f64, dt: f64) -> Result<Self> {
        Ok(ModeParams {
            kx,
            lc: shell_symbol(params, kx),
            ma: added_mass(kx, params.depth, params.rho)?,
            rhosh: params.rhosh,
            dt,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    WeaklyStable,
    Unstable,
    UnconditionallyUnstable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::WeaklyStable => "weakly-stable",
            Verdict::Unstable => "unstable",
            Verdict::UnconditionallyUnstable => "unconditionally-unstable",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeStabilityResult {
    pub roots: Vec<Complex64>,
    pub max_modulus: f64,
    pub verdict: Verdict,
    /// Largest stable step; `None` when no step is stable, infinite when all are.
    pub dt_max: Option<f64>,
}

/// Closed-form stability statement for the traditional scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraditionalBound {
    UnconditionallyUnstable,
    StableBelow(f64),
}

impl TraditionalBound {
    pub fn dt_max(self) -> Option<f64> {
        match self {
            TraditionalBound::UnconditionallyUnstable => None,
            TraditionalBound::StableBelow(dt) => Some(dt),
        }
    }

    pub fn is_stable(self, dt: f64) -> bool {
        matches!(self, TraditionalBound::StableBelow(b) if dt < b)
    }
}

const UNIT_TOL: f64 = 1e-12;
const CIRCLE_BAND: f64 = 1e-10;
const SEPARATION: f64 = 1e-8;

/// Weak stability: all roots in the closed unit disc, those on the circle simple.
pub fn von_neumann_check(roots: &[Complex64]) -> bool {
    if roots.iter().any(|r| r.norm() > 1.0 + UNIT_TOL) {
        return false;
    }
    for (i, a) in roots.iter().enumerate() {
        if (a.norm() - 1.0).abs() > CIRCLE_BAND {
            continue;
        }
        if roots
            .iter()
            .enumerate()
            .any(|(j, b)| j != i && (a - b).norm() <= SEPARATION)
        {
            return false;
        }
    }
    true
}

pub fn max_modulus(roots: &[Complex64]) -> f64 {
    roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
}

/// Coefficients `[c3, c2, c1, c0]` of the traditional cubic, scaled by `dt^2`.
pub fn traditional_coefficients(mode: &ModeParams) -> [f64; 4] {
    let (m, a, l) = (mode.rhosh, mode.ma, mode.lc * mode.dt * mode.dt);
    [m, -2.0 * m + l + a, m - 2.0 * a, a]
}

fn eval_poly(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ci in c {
        dp = dp * z + p;
        p = p * z + ci;
    }
    (p, dp)
}

/// Roots of the traditional amplification cubic.
pub fn traditional_roots(mode: &ModeParams) -> Result<Vec<Complex64>> {
    if !(mode.dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {}", mode.dt)));
    }
    let c = traditional_coefficients(mode);
    if c[0] == 0.0 {
        return Err(Error::InvalidArgument("shell mass rhosh must be non-zero".into()));
    }
    let (c2, c1, c0) = (c[1] / c[0], c[2] / c[0], c[3] / c[0]);
    let companion = Matrix3::new(-c2, -c1, -c0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
    let mut roots: Vec<Complex64> = companion.complex_eigenvalues().iter().copied().collect();
    let monic = [1.0, c2, c1, c0];
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_poly(&monic, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() || step.norm() > 1e-3 * (1.0 + r.norm()) {
                break;
            }
            *r -= step;
        }
    }
    Ok(roots)
}

/// Closed-form verdict for the traditional scheme.
pub fn traditional_stability(rhosh: f64, lc: f64, ma: f64) -> Result<TraditionalBound> {
    if !(lc > 0.0) {
        return Err(Error::OutsideHypotheses(format!(
            "traditional bound requires Lc > 0, got {lc}"
        )));
    }
    if !(rhosh > 0.0) || !(ma > 0.0) {
        return Err(Error::OutsideHypotheses(format!(
            "traditional bound requires rhosh > 0 and Ma > 0 (got {rhosh}, {ma})"
        )));
    }
    if ma >= rhosh {
        return Ok(TraditionalBound::UnconditionallyUnstable);
    }
    Ok(TraditionalBound::StableBelow(2.0 * ((rhosh - ma) / lc).sqrt()))
}

/// Explicit AMP factor `rhosh kx sinh / (rho cosh + rhosh kx sinh)`, evaluated
/// through `tanh` to avoid overflow.
pub fn amp_factor(kx: f64, depth: f64, rho: f64, rhosh: f64) -> f64 {
    let kx = kx.abs();
    let s = rhosh * kx * (kx * depth).tanh();
    s / (rho + s)
}

/// Roots of `A^2 - 2(1 - b dt^2) A + 1 = 0`, `b = Lc B / (2 rhosh)`.
pub fn amp_roots(mode: &ModeParams, depth: f64, rho: f64) -> [Complex64; 2] {
    let b = mode.lc * amp_factor(mode.kx, depth, rho, mode.rhosh) / (2.0 * mode.rhosh);
    let c = 1.0 - b * mode.dt * mode.dt;
    if c.abs() < 1.0 {
        let s = (1.0 - c * c).sqrt();
        [Complex64::new(c, s), Complex64::new(c, -s)]
    } else {
        let s = (c * c - 1.0).sqrt();
        // The smaller-magnitude root from the product, which is exactly 1.
        let big = c + c.signum() * s;
        [Complex64::new(big, 0.0), Complex64::new(1.0 / big, 0.0)]
    }
}

/// AMP bound `2 sqrt((rhosh + Ma) / Lc)`; unbounded for `Lc = 0`.
pub fn amp_dt_max(rhosh: f64, lc: f64, ma: f64) -> f64 {
    if lc <= 0.0 {
        f64::INFINITY
    } else {
        2.0 * ((rhosh + ma) / lc).sqrt()
    }
}

/// Roots and verdict for one mode and step size.
pub fn analyze(scheme: Scheme, mode: &ModeParams, depth: f64, rho: f64) -> Result<ModeStabilityResult> {
    let (roots, dt_max, uncond) = match scheme {
        Scheme::Traditional => {
            let roots = traditional_roots(mode)?;
            let bound = if mode.lc > 0.0 {
                traditional_stability(mode.rhosh, mode.lc, mode.ma)?
            } else if mode.ma >= mode.rhosh {
                TraditionalBound::UnconditionallyUnstable
            } else {
                TraditionalBound::StableBelow(f64::INFINITY)
            };
            let uncond = bound == TraditionalBound::UnconditionallyUnstable;
            (roots, bound.dt_max(), uncond)
        }
        Scheme::Amp => {
            let roots = amp_roots(mode, depth, rho).to_vec();
            (roots, Some(amp_dt_max(mode.rhosh, mode.lc, mode.ma)), false)
        }
    };
    let max_modulus = max_modulus(&roots);
    let verdict = if von_neumann_check(&roots) {
        Verdict::WeaklyStable
    } else if uncond {
        Verdict::UnconditionallyUnstable
    } else {
        Verdict::Unstable
    };
    Ok(ModeStabilityResult {
        roots,
        max_modulus,
        verdict,
        dt_max,
    })
}

/// Iterates the scalar mode recursion of `scheme`.
///
/// Traditional: `rhosh D+D- e^n = -Lc e^n - Ma D+D- e^{n-1}` with seeds
/// `[e^0, e^1, e^2]`. AMP: `rhosh D+D- e^n = -Lc B e^n` with seeds
/// `[e^0, e^1]`. The returned series starts with the seeds.
pub fn mode_evolve(scheme: Scheme, mode: &ModeParams, steps: usize, seeds: &[f64]) -> Result<Vec<f64>> {
    let need = match scheme {
        Scheme::Traditional => 3,
        Scheme::Amp => 2,
    };
    if seeds.len() != need {
        return Err(Error::StartupRequired(match scheme {
            Scheme::Traditional => "traditional mode recursion needs three seed levels",
            Scheme::Amp => "AMP mode recursion needs two seed levels",
        }));
    }
    let dt2 = mode.dt * mode.dt;
    let mut e = seeds.to_vec();
    e.reserve(steps);
    for _ in 0..steps {
        let n = e.len() - 1;
        let next = match scheme {
            Scheme::Traditional => {
                let lag = e[n] - 2.0 * e[n - 1] + e[n - 2];
                2.0 * e[n] - e[n - 1] - (dt2 * mode.lc * e[n] + mode.ma * lag) / mode.rhosh
            }
            Scheme::Amp => {
                let b = mode.rhosh / (mode.rhosh + mode.ma);
                2.0 * e[n] - e[n - 1] - dt2 * mode.lc * b * e[n] / mode.rhosh
            }
        };
        e.push(next);
    }
    Ok(e)
}

/// One row of a stability map.
#[derive(Debug, Clone, PartialEq)]
pub struct MapRow {
    pub delta: f64,
    pub kx: f64,
    pub dt: f64,
    pub scheme: Scheme,
    pub max_modulus: f64,
    pub verdict: Verdict,
}

impl MapRow {
    pub const CSV_HEADER: &'static str = "delta,kx,dt,scheme,maxmod,verdict";

    pub fn to_csv(&self) -> String {
        format!(
            "{:e},{:.12e},{:.12e},{},{:.15e},{}",
            self.delta, self.kx, self.dt, self.scheme, self.max_modulus, self.verdict
        )
    }
}

/// Stability map over the Cartesian product of inputs for the MP-I1 preset.
pub fn stability_map(
    deltas: &[f64],
    kxs: &[f64],
    dts: &[f64],
    schemes: &[Scheme],
    exec: Exec,
) -> Result<Vec<MapRow>> {
    let mut cases = Vec::new();
    for &delta in deltas {
        for &kx in kxs {
            for &dt in dts {
                for &scheme in schemes {
                    cases.push((delta, kx, dt, scheme));
                }
            }
        }
    }
    exec.map(&cases, |&(delta, kx, dt, scheme)| {
        let params = make_preset(delta, ModelProblem::MpI1)?;
        let mode = ModeParams::from_physical(&params, kx, dt)?;
        let res = analyze(scheme, &mode, params.depth, params.rho)?;
        Ok(MapRow {
            delta,
            kx,
            dt,
            scheme,
            max_modulus: res.max_modulus,
            verdict: res.verdict,
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn added_mass_values() {
        let ma = added_mass(2.0 * PI, 1.0, 1.0).unwrap();
        let oracle = (2.0 * PI).cosh() / (2.0 * PI * (2.0 * PI).sinh());
        assert_relative_eq!(ma, oracle, max_relative = 1e-14);
        assert!((ma - 0.159156).abs() < 1e-6);
        assert_relative_eq!(added_mass(400.0, 1.0, 1.0).unwrap(), 1.0 / 400.0, max_relative = 1e-14);
        let small = added_mass(1e-3, 1.0, 1.0).unwrap();
        assert_relative_eq!(small, 1.0 / 1e-6, max_relative = 1e-6);
        assert!(matches!(added_mass(0.0, 1.0, 1.0), Err(Error::DivergentMode)));
    }

    #[test]
    fn thin_layer_increases_added_mass() {
        let thick = added_mass(2.0 * PI, 1.0, 1.0).unwrap();
        let thin = added_mass(2.0 * PI, 0.01, 1.0).unwrap();
        assert!(thin > 10.0 * thick);
        assert_relative_eq!(thin, 1.0 / ((2.0 * PI).powi(2) * 0.01), max_relative = 2e-3);
    }

    fn mode(rhosh: f64, lc: f64, ma: f64, dt: f64) -> ModeParams {
        ModeParams { kx: 2.0 * PI, lc, ma, rhosh, dt }
    }

    #[test]
    fn traditional_trivial_roots() {
        let mut r = traditional_roots(&mode(1.0, 0.0, 0.0, 0.1)).unwrap();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!(r[0].norm() < 1e-12);
        assert!((r[1] - 1.0).norm() < 1e-6 && (r[2] - 1.0).norm() < 1e-6);
    }

    #[test]
    fn traditional_roots_solve_the_cubic() {
        let m = mode(0.7, 12.0, 0.3, 0.05);
        let coeffs = traditional_coefficients(&m);
        let scale = coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
        for r in traditional_roots(&m).unwrap() {
            let (p, _) = eval_poly(&coeffs, r);
            assert!(p.norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn fluid_free_boundary_is_leapfrog() {
        let lc = 4.0 * PI * PI;
        let bound = 2.0 * (1.0 / lc).sqrt();
        let below = traditional_roots(&mode(1.0, lc, 0.0, 0.99 * bound)).unwrap();
        let above = traditional_roots(&mode(1.0, lc, 0.0, 1.01 * bound)).unwrap();
        assert!(max_modulus(&below) <= 1.0 + 1e-10);
        assert!(max_modulus(&above) > 1.0 + 1e-3);
    }

    #[test]
    fn closed_form_bound_example() {
        let lc = 4.0 * PI * PI;
        let ma = added_mass(2.0 * PI, 1.0, 1.0).unwrap();
        let b = traditional_stability(1.0, lc, ma).unwrap();
        let dt_max = b.dt_max().unwrap();
        assert!((dt_max - 0.29189).abs() < 1e-5);
        let roots = traditional_roots(&mode(1.0, lc, ma, 0.2)).unwrap();
        assert!(von_neumann_check(&roots));
        // Root bisection oracle for the boundary.
        let (mut lo, mut hi) = (0.2, 0.4);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if von_neumann_check(&traditional_roots(&mode(1.0, lc, ma, mid)).unwrap()) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_relative_eq!(lo, dt_max, max_relative = 1e-6);

        assert_eq!(
            traditional_stability(0.01, 0.01 * lc, ma).unwrap(),
            TraditionalBound::UnconditionallyUnstable
        );
        assert_relative_eq!(
            traditional_stability(2.0, 3.0, 1e-300).unwrap().dt_max().unwrap(),
            2.0 * (2.0f64 / 3.0).sqrt(),
            max_relative = 1e-14
        );
        assert!(matches!(
            traditional_stability(1.0, 0.0, 0.1),
            Err(Error::OutsideHypotheses(_))
        ));
    }

    #[test]
    fn traditional_bound_matches_root_finder() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        for _ in 0..1000 {
            let mut draw = || 10f64.powf(rng.gen_range(-3.0..3.0));
            let (rhosh, lc, ma, dt) = (draw(), draw(), draw(), draw());
            let bound = traditional_stability(rhosh, lc, ma).unwrap();
            if let TraditionalBound::StableBelow(b) = bound {
                if ((dt - b) / b).abs() < 1e-8 {
                    continue;
                }
            }
            let roots = traditional_roots(&mode(rhosh, lc, ma, dt)).unwrap();
            assert_eq!(
                von_neumann_check(&roots),
                bound.is_stable(dt),
                "rhosh={rhosh} lc={lc} ma={ma} dt={dt} roots={roots:?}"
            );
            checked += 1;
        }
        assert!(checked > 990);
    }

    #[test]
    fn amp_roots_cases() {
        let params = make_preset(1.0, ModelProblem::MpI1).unwrap();
        let m = ModeParams::from_physical(&params, 2.0 * PI, 0.3).unwrap();
        let dt_max = amp_dt_max(m.rhosh, m.lc, m.ma);
        assert!((dt_max - 0.34271).abs() < 1e-5);
        for r in amp_roots(&m, 1.0, 1.0) {
            assert!((r.norm() - 1.0).abs() <= 1e-12);
        }

        // b dt^2 = 2 gives the double root -1.
        let b = m.lc * amp_factor(m.kx, 1.0, 1.0, m.rhosh) / (2.0 * m.rhosh);
        let edge = ModeParams { dt: (2.0 / b).sqrt(), ..m };
        let r = amp_roots(&edge, 1.0, 1.0);
        assert!((r[0] + 1.0).norm() < 1e-7 && (r[1] + 1.0).norm() < 1e-7);
        assert!(!von_neumann_check(&[c(-1.0, 0.0), c(-1.0, 0.0)]));
        assert_relative_eq!(edge.dt, dt_max, max_relative = 1e-12);
    }

    #[test]
    fn amp_factor_matches_explicit_hyperbolic_form() {
        for &(kx, h, rho, rhosh) in &[(2.0 * PI, 1.0, 1.0, 1.0), (3.0, 0.5, 2.0, 0.01), (20.0, 1.0, 1.0, 1e3)] {
            let (s, ch) = ((kx * h).sinh(), (kx * h).cosh());
            let explicit = rhosh * kx * s / (rho * ch + rhosh * kx * s);
            assert_relative_eq!(amp_factor(kx, h, rho, rhosh), explicit, max_relative = 1e-13);
            let ma = added_mass(kx, h, rho).unwrap();
            assert_relative_eq!(explicit, rhosh / (rhosh + ma), max_relative = 1e-13);
        }
    }

    #[test]
    fn amp_root_product_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let mut draw = || 10f64.powf(rng.gen_range(-3.0..3.0));
            let m = ModeParams { kx: draw(), lc: draw(), ma: 0.0, rhosh: draw(), dt: draw() };
            let r = amp_roots(&m, draw(), draw());
            assert!((r[0] * r[1] - 1.0).norm() <= 1e-12, "{r:?}");
        }
    }

    #[test]
    fn amp_bound_values_and_monotonicity() {
        for (delta, omega) in [(1.0, 5.8359), (1e-2, 1.5277)] {
            let p = make_preset(delta, ModelProblem::MpI1).unwrap();
            let m = ModeParams::from_physical(&p, 2.0 * PI, 0.1).unwrap();
            let dt = amp_dt_max(m.rhosh, m.lc, m.ma);
            assert_relative_eq!(dt, 2.0 / omega, max_relative = 1e-4);
        }
        let (rhosh, lc) = (0.5, 7.0);
        assert_relative_eq!(amp_dt_max(rhosh, lc, 0.0), 2.0 * (rhosh / lc).sqrt());
        assert!(amp_dt_max(rhosh, lc, 0.3) > amp_dt_max(rhosh, lc, 0.0));
        assert!(amp_dt_max(rhosh, 0.0, 0.3).is_infinite());
    }

    #[test]
    fn von_neumann_cases() {
        assert!(von_neumann_check(&[c(1.0, 0.0), c(0.5, 0.0)]));
        assert!(!von_neumann_check(&[c(-1.0, 0.0), c(-1.0, 0.0)]));
        assert!(!von_neumann_check(&[c(1.0 + 1e-9, 0.0)]));
        assert!(von_neumann_check(&[c(0.3, 0.0), c(0.3, 0.0)]));
    }

    #[test]
    fn amp_evolution_is_non_dissipative() {
        let p = make_preset(1.0, ModelProblem::MpI1).unwrap();
        let m = ModeParams::from_physical(&p, 2.0 * PI, 0.3).unwrap();
        let roots = amp_roots(&m, 1.0, 1.0);
        let theta = roots[0].arg();
        // Start on the exact discrete mode cos(n theta) so the envelope is 1.
        let series = mode_evolve(Scheme::Amp, &m, 1000, &[1.0, theta.cos()]).unwrap();
        for (n, e) in series.iter().enumerate() {
            assert!((e - (n as f64 * theta).cos()).abs() < 1e-10 * (1.0 + n as f64 / 100.0));
        }
        // Quadratic invariant of the two-level recursion stays fixed.
        let cc = theta.cos();
        let inv = |a: f64, b: f64| a * a - 2.0 * cc * a * b + b * b;
        let i0 = inv(series[0], series[1]);
        for w in series.windows(2) {
            assert_relative_eq!(inv(w[0], w[1]), i0, max_relative = 1e-10);
        }
    }

    #[test]
    fn traditional_light_shell_blows_up() {
        let p = make_preset(1e-2, ModelProblem::MpI1).unwrap();
        let m = ModeParams::from_physical(&p, 2.0 * PI, 0.01).unwrap();
        let series = mode_evolve(Scheme::Traditional, &m, 200, &[1.0, 1.0, 1.0]).unwrap();
        assert!(series.iter().any(|e| e.abs() > 1e6));
        let rho_max = max_modulus(&traditional_roots(&m).unwrap());
        let n = series.len();
        let rate = (series[n - 1].abs() / series[n - 51].abs()).powf(1.0 / 50.0);
        assert_relative_eq!(rate, rho_max, max_relative = 1e-8);
    }

    #[test]
    fn zero_seed_stays_zero() {
        let m = mode(1.0, 3.0, 0.2, 0.1);
        for (s, seeds) in [(Scheme::Amp, vec![0.0; 2]), (Scheme::Traditional, vec![0.0; 3])] {
            assert!(mode_evolve(s, &m, 50, &seeds).unwrap().iter().all(|&e| e == 0.0));
        }
        assert!(matches!(
            mode_evolve(Scheme::Traditional, &m, 5, &[1.0, 2.0]),
            Err(Error::StartupRequired(_))
        ));
    }

    #[test]
    fn stability_map_policies_agree() {
        let deltas = [1e-2, 1.0];
        let kxs = [2.0 * PI, 4.0 * PI];
        let dts = [0.01, 0.2];
        let schemes = [Scheme::Amp, Scheme::Traditional];
        let a = stability_map(&deltas, &kxs, &dts, &schemes, Exec::Sequential).unwrap();
        let b = stability_map(&deltas, &kxs, &dts, &schemes, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 16);
        assert!(a
            .iter()
            .filter(|r| r.delta == 1e-2 && r.scheme == Scheme::Traditional)
            .all(|r| r.verdict == Verdict::UnconditionallyUnstable));
        assert!(a
            .iter()
            .filter(|r| r.scheme == Scheme::Amp && r.dt == 0.01)
            .all(|r| r.verdict == Verdict::WeaklyStable));
    }
}
