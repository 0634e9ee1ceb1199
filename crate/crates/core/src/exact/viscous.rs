//! Viscous traveling waves: the 4x4 dispersion matrix, complex root finding
//! for the frequency, and the field coefficients.

use nalgebra::{Matrix3, Matrix4, Vector3};
use num_complex::Complex64;

use super::traveling::{assemble_fluid, assemble_shell, mp_i1_dispersion, phase, Profile};
use super::{ExactSolution, FluidJet, ShellJet};
use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// Acceptance threshold on `|det M| / prod(row norms)` at a root.
pub const ROOT_TOLERANCE: f64 = 1e-10;
const MAX_ITER: usize = 100;
const STEP_TOL: f64 = 1e-14;
const GUESS_LADDER: [f64; 5] = [0.01, 0.05, 0.1, 0.2, 0.3];

fn alpha(omega: Complex64, k: f64, params: &PhysicalParams) -> Complex64 {
    (Complex64::new(k * k, 0.0) - Complex64::i() * params.rho * omega / params.mu).sqrt()
}

fn shell_g(omega: Complex64, k: f64, params: &PhysicalParams) -> Result<Complex64> {
    let stiff = params.kbar + params.tbar * k * k;
    let g = stiff - params.rhosh * omega * omega;
    if g.norm() <= 1e-13 * (stiff + params.rhosh * omega.norm_sqr()) {
        return Err(Error::ShellResonance(omega));
    }
    Ok(g)
}

/// Coefficient matrix of the wall and interface conditions for the
/// constants `(A, B, C, D)` of the viscous wave.
pub fn assemble_dispersion_matrix(
    omega: Complex64,
    k: f64,
    params: &PhysicalParams,
    theta: u8,
) -> Result<Matrix4<Complex64>> {
    if !(params.mu > 0.0) {
        return Err(Error::InvalidArgument("viscous dispersion needs mu > 0".into()));
    }
    let i = Complex64::i();
    let h = params.depth;
    let mu = params.mu;
    let th = f64::from(theta);
    let a = alpha(omega, k, params);
    let g = shell_g(omega, k, params)?;
    let (ck, sk) = (Complex64::from((k * h).cosh()), Complex64::from((k * h).sinh()));
    let (ca, sa) = ((a * h).cosh(), (a * h).sinh());
    let xi = params.rho * omega * omega + 2.0 * i * omega * mu * k * k;
    let kc = Complex64::from(k);
    let z = Complex64::from(0.0);
    let wmk = 2.0 * i * omega * mu * k;
    Ok(Matrix4::new(
        -sk, z, -sa, z,
        kc * ck, kc, a * ca, a,
        xi, -sk * g * k + xi * ck, wmk * a, -sa * g * k + wmk * a * ca,
        kc,
        kc * ck - 2.0 * i * omega * mu * th * k * k * sk / g,
        a,
        a * ca - i * omega * mu * th * (a * a + k * k) * sa / g,
    ))
}

/// `det M / prod(row norms)`, the scaled dispersion function.
pub fn dispersion_function(omega: Complex64, k: f64, params: &PhysicalParams, theta: u8) -> Result<Complex64> {
    let m = assemble_dispersion_matrix(omega, k, params, theta)?;
    let scale: f64 = (0..4).map(|r| m.row(r).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).product();
    Ok(m.determinant() / scale)
}

fn secant(
    f: &dyn Fn(Complex64) -> Result<Complex64>,
    w0: Complex64,
    trace: &mut Vec<Complex64>,
) -> Option<Complex64> {
    let mut x0 = w0;
    let mut x1 = w0 * (1.0 + 1e-3);
    let mut f0 = f(x0).ok()?;
    let mut f1 = f(x1).ok()?;
    for _ in 0..MAX_ITER {
        let denom = f1 - f0;
        if denom.norm() == 0.0 {
            return None;
        }
        let x2 = x1 - f1 * (x1 - x0) / denom;
        if !x2.is_finite() {
            return None;
        }
        trace.push(x2);
        if (x2 - x1).norm() <= STEP_TOL * x2.norm() {
            return Some(x2);
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1).ok()?;
        if f1.norm() == 0.0 {
            return Some(x1);
        }
    }
    None
}

fn muller(
    f: &dyn Fn(Complex64) -> Result<Complex64>,
    w0: Complex64,
    trace: &mut Vec<Complex64>,
) -> Option<Complex64> {
    let (mut x0, mut x1, mut x2) = (w0 * (1.0 - 1e-3), w0, w0 * (1.0 + 1e-3));
    let (mut f0, mut f1, mut f2) = (f(x0).ok()?, f(x1).ok()?, f(x2).ok()?);
    for _ in 0..MAX_ITER {
        let (h1, h2) = (x1 - x0, x2 - x1);
        let (d1, d2) = ((f1 - f0) / h1, (f2 - f1) / h2);
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - 4.0 * f2 * a).sqrt();
        let e = if (b + disc).norm() > (b - disc).norm() { b + disc } else { b - disc };
        if e.norm() == 0.0 {
            return None;
        }
        let x3 = x2 - 2.0 * f2 / e;
        if !x3.is_finite() {
            return None;
        }
        trace.push(x3);
        if (x3 - x2).norm() <= STEP_TOL * x3.norm() {
            return Some(x3);
        }
        (x0, x1, x2) = (x1, x2, x3);
        (f0, f1) = (f1, f2);
        f2 = f(x2).ok()?;
        if f2.norm() == 0.0 {
            return Some(x2);
        }
    }
    None
}

/// Checks and normalizes a converged iterate to the decaying, right-moving branch.
fn accept(omega: Complex64, k: f64, params: &PhysicalParams, theta: u8) -> Result<Complex64> {
    let omega = if omega.re < 0.0 { -omega.conj() } else { omega };
    if omega.re.abs() <= 1e-8 * omega.norm() {
        return Err(Error::DegenerateRoot(format!("purely imaginary frequency {omega}")));
    }
    if alpha(omega, k, params).norm() <= 1e-6 * k.abs() {
        return Err(Error::DegenerateRoot(format!("alpha vanishes at {omega}")));
    }
    if omega.im > 1e-12 * omega.norm() {
        return Err(Error::DegenerateRoot(format!("growing mode {omega}")));
    }
    let r = dispersion_function(omega, k, params, theta)?;
    if r.norm() > ROOT_TOLERANCE {
        return Err(Error::DegenerateRoot(format!("residual {:.3e} at {omega}", r.norm())));
    }
    Ok(omega)
}

/// Root of the dispersion relation near `guess` (secant, then Muller).
pub fn find_omega_from(k: f64, params: &PhysicalParams, theta: u8, guess: Complex64) -> Result<Complex64> {
    let f = |w: Complex64| dispersion_function(w, k, params, theta);
    let mut trace = Vec::new();
    let mut last_err = None;
    for method in [secant, muller] {
        if let Some(w) = method(&f, guess, &mut trace) {
            match accept(w, k, params, theta) {
                Ok(w) => return Ok(w),
                Err(e) => last_err = Some(e),
            }
        }
    }
    match last_err {
        Some(e) => Err(e),
        None => {
            let n = trace.len();
            Err(Error::RootFailure {
                iterations: n,
                trace: trace.split_off(n.saturating_sub(8)),
            })
        }
    }
}

/// Frequency of the viscous wave. Without a guess, starts from the inviscid
/// frequency shifted into the lower half plane by an increasing fraction.
pub fn find_omega(k: f64, params: &PhysicalParams, theta: u8, guess: Option<Complex64>) -> Result<Complex64> {
    if let Some(g) = guess {
        return find_omega_from(k, params, theta, g);
    }
    let (w0, _) = mp_i1_dispersion(k, params)?;
    let mut err = None;
    for s in GUESS_LADDER {
        match find_omega_from(k, params, theta, Complex64::new(w0, -w0 * s)) {
            Ok(w) => return Ok(w),
            Err(e) => err = Some(e),
        }
    }
    Err(err.unwrap_or(Error::RootFailure { iterations: 0, trace: Vec::new() }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    /// Complex shell amplitudes (horizontal, vertical).
    pub u_hat: [Complex64; 2],
}

impl TwCoefficients {
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

fn shell_amplitudes(
    abcd: [Complex64; 4],
    omega: Complex64,
    k: f64,
    params: &PhysicalParams,
    theta: u8,
) -> Result<[Complex64; 2]> {
    let [a, b, c, d] = abcd;
    let i = Complex64::i();
    let h = params.depth;
    let mu = params.mu;
    let al = alpha(omega, k, params);
    let g = shell_g(omega, k, params)?;
    let (ck, sk) = ((k * h).cosh(), (k * h).sinh());
    let (ca, sa) = ((al * h).cosh(), (al * h).sinh());
    let u1 = -mu * f64::from(theta) / g
        * (i / k * (b * k * k * sk + d * al * al * sa) + i * k * (b * sk + d * sa));
    let u2 = (i * params.rho * omega / k * (a + b * ck) - 2.0 * mu * (a * k + b * k * ck + c * al + d * al * ca)) / g;
    Ok([u1, u2])
}

/// Solves for `(A, B, C)` in terms of `D`, then scales so that the shell
/// displacement at the origin has magnitude `umax` with the vertical
/// amplitude real and positive.
pub fn tw_coefficients(
    omega: Complex64,
    k: f64,
    params: &PhysicalParams,
    theta: u8,
    umax: f64,
) -> Result<TwCoefficients> {
    let m = assemble_dispersion_matrix(omega, k, params, theta)?;
    let block = Matrix3::from_fn(|r, c| m[(r, c)]);
    let rhs = Vector3::from_fn(|r, _| -m[(r, 3)]);
    let sol = block
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|z| z.is_finite()))
        .ok_or_else(|| Error::DegenerateRoot(format!("singular 3x3 block at {omega}")))?;
    let mut abcd = [sol[0], sol[1], sol[2], Complex64::from(1.0)];
    let u = shell_amplitudes(abcd, omega, k, params, theta)?;
    let rot = if u[1].norm() > 0.0 { u[1].conj() / u[1].norm() } else { Complex64::from(1.0) };
    let u_rot = [u[0] * rot, u[1] * rot];
    let mag = (u_rot[0].re.powi(2) + u_rot[1].re.powi(2)).sqrt();
    if !(mag > 0.0) || !mag.is_finite() {
        return Err(Error::DegenerateRoot(format!("zero shell displacement at {omega}")));
    }
    let factor = rot * (umax / mag);
    for z in abcd.iter_mut() {
        *z *= factor;
    }
    let u_hat = shell_amplitudes(abcd, omega, k, params, theta)?;
    let [a, b, c, d] = abcd;
    Ok(TwCoefficients { a, b, c, d, u_hat })
}

/// Viscous traveling wave for MP-V1 (`theta = 0`) or MP-V2 (`theta = 1`).
#[derive(Debug, Clone)]
pub struct ViscousWave {
    pub k: f64,
    pub omega: Complex64,
    pub alpha: Complex64,
    pub theta: u8,
    pub coeffs: TwCoefficients,
    rho: f64,
    depth: f64,
}

impl ViscousWave {
    /// `branch < 0` selects the mirrored, left-moving wave.
    pub fn new(k: f64, params: &PhysicalParams, theta: u8, branch: i8, umax: f64) -> Result<Self> {
        let w = find_omega(k, params, theta, None)?;
        let w = if branch < 0 { -w.conj() } else { w };
        Self::with_omega(k, w, params, theta, umax)
    }

    pub fn with_omega(k: f64, omega: Complex64, params: &PhysicalParams, theta: u8, umax: f64) -> Result<Self> {
        let coeffs = tw_coefficients(omega, k, params, theta, umax)?;
        Ok(ViscousWave {
            k,
            omega,
            alpha: alpha(omega, k, params),
            theta,
            coeffs,
            rho: params.rho,
            depth: params.depth,
        })
    }

    fn profiles(&self, y: f64) -> (Profile, Profile, Profile) {
        let TwCoefficients { a, b, c, d, .. } = self.coeffs;
        let (k, al) = (Complex64::from(self.k), self.alpha);
        let yh = y + self.depth;
        let (s1, c1) = ((k * y).sinh(), (k * y).cosh());
        let (s2, c2) = ((k * yh).sinh(), (k * yh).cosh());
        let (s3, c3) = ((al * y).sinh(), (al * y).cosh());
        let (s4, c4) = ((al * yh).sinh(), (al * yh).cosh());
        let f0 = a * s1 + b * s2 + c * s3 + d * s4;
        let f1 = k * (a * c1 + b * c2) + al * (c * c3 + d * c4);
        let f2 = k * k * (a * s1 + b * s2) + al * al * (c * s3 + d * s4);
        let f3 = k * k * k * (a * c1 + b * c2) + al * al * al * (c * c3 + d * c4);
        let ik = Complex64::i() / k;
        let v1 = Profile { f: ik * f1, fy: ik * f2, fyy: ik * f3 };
        let v2 = Profile { f: f0, fy: f1, fyy: f2 };
        let pc = Complex64::i() * self.rho * self.omega / k;
        let p = Profile {
            f: pc * (a * c1 + b * c2),
            fy: pc * k * (a * s1 + b * s2),
            fyy: pc * k * k * (a * c1 + b * c2),
        };
        (v1, v2, p)
    }
}

impl ExactSolution for ViscousWave {
    fn fluid(&self, x: f64, y: f64, t: f64) -> FluidJet {
        let (v1, v2, p) = self.profiles(y);
        assemble_fluid(v1, v2, p, self.k, self.omega, phase(self.k, self.omega, x, t))
    }

    fn shell(&self, s: f64, t: f64) -> ShellJet {
        assemble_shell(self.coeffs.u_hat, self.k, self.omega, phase(self.k, self.omega, s, t))
    }

    fn forced(&self) -> bool {
        false
    }
}
