//! Inviscid traveling wave and the complex-profile machinery shared with the
//! viscous waves. Fields are real parts of `F(y) exp(i(k x - omega t))`.

use num_complex::Complex64;

use super::{ExactSolution, FluidJet, ShellJet};
use crate::error::{Error, Result};
use crate::modes::added_mass;
use crate::params::PhysicalParams;

/// A complex y-profile with its first two derivatives.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Profile {
    pub f: Complex64,
    pub fy: Complex64,
    pub fyy: Complex64,
}

/// Real values of one traveling-wave field: `(value, d_t, d_x, d_y, laplacian)`.
pub(crate) fn wave_values(p: Profile, k: f64, omega: Complex64, phase: Complex64) -> [f64; 5] {
    let i = Complex64::i();
    [
        (p.f * phase).re,
        (-i * omega * p.f * phase).re,
        (i * k * p.f * phase).re,
        (p.fy * phase).re,
        ((p.fyy - k * k * p.f) * phase).re,
    ]
}

pub(crate) fn phase(k: f64, omega: Complex64, x: f64, t: f64) -> Complex64 {
    (Complex64::i() * (k * x - omega * t)).exp()
}

pub(crate) fn assemble_fluid(
    v1: Profile,
    v2: Profile,
    p: Profile,
    k: f64,
    omega: Complex64,
    e: Complex64,
) -> FluidJet {
    let a = wave_values(v1, k, omega, e);
    let b = wave_values(v2, k, omega, e);
    let q = wave_values(p, k, omega, e);
    FluidJet {
        v: [a[0], b[0]],
        v_t: [a[1], b[1]],
        v_x: [a[2], b[2]],
        v_y: [a[3], b[3]],
        lap_v: [a[4], b[4]],
        p: q[0],
        p_x: q[2],
        p_y: q[3],
        lap_p: q[4],
    }
}

pub(crate) fn assemble_shell(amp: [Complex64; 2], k: f64, omega: Complex64, e: Complex64) -> ShellJet {
    let i = Complex64::i();
    let mut jet = ShellJet::default();
    for c in 0..2 {
        let z = amp[c] * e;
        jet.u[c] = z.re;
        jet.u_t[c] = (-i * omega * z).re;
        jet.u_tt[c] = (-omega * omega * z).re;
        jet.u_ss[c] = (-k * k * z).re;
        jet.u_ssss[c] = (k.powi(4) * z).re;
    }
    jet
}

/// Both frequencies `+-sqrt((Kbar + k^2 Tbar) / (rhosh + Ma))` of the inviscid wave.
pub fn mp_i1_dispersion(k: f64, params: &PhysicalParams) -> Result<(f64, f64)> {
    if k == 0.0 {
        return Err(Error::InvalidArgument("wavenumber must be non-zero".into()));
    }
    let ma = added_mass(k, params.depth, params.rho)?;
    let w = ((params.kbar + k * k * params.tbar) / (params.rhosh + ma)).sqrt();
    Ok((w, -w))
}

/// Inviscid traveling wave with vertical shell motion.
#[derive(Debug, Clone)]
pub struct InviscidWave {
    pub k: f64,
    pub omega: f64,
    pub umax: f64,
    rho: f64,
    depth: f64,
}

impl InviscidWave {
    /// `branch` selects the sign of the frequency.
    pub fn new(k: f64, params: &PhysicalParams, branch: i8, umax: f64) -> Result<Self> {
        let (wp, wm) = mp_i1_dispersion(k, params)?;
        Ok(InviscidWave {
            k,
            omega: if branch >= 0 { wp } else { wm },
            umax,
            rho: params.rho,
            depth: params.depth,
        })
    }

    fn profiles(&self, y: f64) -> (Profile, Profile, Profile) {
        let (k, w, u) = (self.k, self.omega, self.umax);
        let sk = (k * self.depth).sinh();
        let (ch, sh) = ((k * (y + self.depth)).cosh(), (k * (y + self.depth)).sinh());
        let i = Complex64::i();
        let re = |r: f64| Complex64::new(r, 0.0);
        let v1 = Profile {
            f: re(u * w * ch / sk),
            fy: re(u * w * k * sh / sk),
            fyy: re(u * w * k * k * ch / sk),
        };
        let v2 = Profile {
            f: -i * u * w * sh / sk,
            fy: -i * u * w * k * ch / sk,
            fyy: -i * u * w * k * k * sh / sk,
        };
        let p = Profile {
            f: re(u * self.rho * w * w * ch / (k * sk)),
            fy: re(u * self.rho * w * w * sh / sk),
            fyy: re(u * self.rho * w * w * k * ch / sk),
        };
        (v1, v2, p)
    }
}

impl ExactSolution for InviscidWave {
    fn fluid(&self, x: f64, y: f64, t: f64) -> FluidJet {
        let w = Complex64::new(self.omega, 0.0);
        let (v1, v2, p) = self.profiles(y);
        assemble_fluid(v1, v2, p, self.k, w, phase(self.k, w, x, t))
    }

    fn shell(&self, s: f64, t: f64) -> ShellJet {
        let w = Complex64::new(self.omega, 0.0);
        let amp = [Complex64::new(0.0, 0.0), Complex64::new(self.umax, 0.0)];
        assemble_shell(amp, self.k, w, phase(self.k, w, s, t))
    }

    fn forced(&self) -> bool {
        false
    }
}
