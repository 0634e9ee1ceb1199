//! Discrete shell: the operator `L_h(u) = -K u + (T u_s)_s - (B u_ss)_ss` on the
//! periodic interface grid, the leap-frog predictor and the trapezoidal
//! (Adams-Moulton) corrector.
//!
//! Component 0 is the horizontal displacement, component 1 the vertical one.
//! Shells without horizontal motion keep component 0 identically zero.

use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// A pair of interface arrays (horizontal, vertical).
pub type Components = [Vec<f64>; 2];

pub fn zero_components(n: usize) -> Components {
    [vec![0.0; n], vec![0.0; n]]
}

/// Node-wise shell coefficients. The constant case is what the presets use.
#[derive(Debug, Clone)]
pub struct ShellCoefficients {
    pub k: Vec<f64>,
    pub t: Vec<f64>,
    pub b: Vec<f64>,
}

impl ShellCoefficients {
    pub fn uniform(params: &PhysicalParams, n: usize) -> Self {
        ShellCoefficients {
            k: vec![params.kbar; n],
            t: vec![params.tbar; n],
            b: vec![params.bbar; n],
        }
    }
}

/// `-K u + D+( T_{i-1/2} D- u ) - D+D-( B D+D- u )` with periodic wrap.
///
/// Tension sits at half nodes (arithmetic mean); the beam term is the
/// composition of two centered second differences.
pub fn shell_operator_with(u: &[f64], coeffs: &ShellCoefficients, h: f64) -> Vec<f64> {
    let n = u.len();
    let at = |a: &[f64], i: isize| a[i.rem_euclid(n as isize) as usize];
    let h2 = h * h;
    let needs_beam = coeffs.b.iter().any(|&b| b != 0.0);
    let beam_inner: Vec<f64> = if needs_beam {
        (0..n as isize)
            .map(|i| at(&coeffs.b, i) * (at(u, i + 1) - 2.0 * at(u, i) + at(u, i - 1)) / h2)
            .collect()
    } else {
        Vec::new()
    };
    (0..n as isize)
        .map(|i| {
            let tp = 0.5 * (at(&coeffs.t, i) + at(&coeffs.t, i + 1));
            let tm = 0.5 * (at(&coeffs.t, i) + at(&coeffs.t, i - 1));
            let ui = at(u, i);
            let mut out = -at(&coeffs.k, i) * ui
                + (tp * (at(u, i + 1) - ui) - tm * (ui - at(u, i - 1))) / h2;
            if needs_beam {
                out -= (at(&beam_inner, i + 1) - 2.0 * at(&beam_inner, i)
                    + at(&beam_inner, i - 1))
                    / h2;
            }
            out
        })
        .collect()
}

/// Constant-coefficient shell operator for `params`.
pub fn shell_operator(u: &[f64], params: &PhysicalParams, h: f64) -> Vec<f64> {
    shell_operator_with(u, &ShellCoefficients::uniform(params, u.len()), h)
}

/// Discrete symbol `-L_h` of the constant-coefficient operator for `sin(kx s)`.
pub fn discrete_symbol(params: &PhysicalParams, kx: f64, h: f64) -> f64 {
    let s = 4.0 * (0.5 * kx * h).sin().powi(2) / (h * h);
    params.kbar + params.tbar * s + params.bbar * s * s
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShellState {
    pub u: Components,
    pub v: Components,
    pub u_prev: Option<Components>,
    pub v_prev: Option<Components>,
    pub t: f64,
    pub horizontal: bool,
}

impl ShellState {
    pub fn new(u: Components, v: Components, t: f64, horizontal: bool) -> Self {
        ShellState {
            u,
            v,
            u_prev: None,
            v_prev: None,
            t,
            horizontal,
        }
    }

    pub fn len(&self) -> usize {
        self.u[1].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn with_history(mut self, u_prev: Components, v_prev: Components) -> Self {
        self.u_prev = Some(u_prev);
        self.v_prev = Some(v_prev);
        self
    }

    /// Active component indices.
    pub fn components(&self) -> &'static [usize] {
        if self.horizontal {
            &[0, 1]
        } else {
            &[1]
        }
    }

    /// Moves the current level into history and installs the new one.
    pub fn advance(&mut self, u_new: Components, v_new: Components, dt: f64) {
        let u_old = std::mem::replace(&mut self.u, u_new);
        let v_old = std::mem::replace(&mut self.v, v_new);
        self.u_prev = Some(u_old);
        self.v_prev = Some(v_old);
        self.t += dt;
    }

    pub fn max_abs_u(&self) -> f64 {
        max_abs(&self.u)
    }

    pub fn max_abs_v(&self) -> f64 {
        max_abs(&self.v)
    }
}

pub fn max_abs(c: &Components) -> f64 {
    c.iter()
        .flat_map(|a| a.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Predicted {
    pub u: Components,
    pub v: Components,
}

/// Leap-frog predictor:
/// `u_p = u^{n-1} + 2 dt v^n`,
/// `v_p = v^{n-1} + (2 dt / rhosh) (L_h(u^n) - sigma^n n + f^n)`.
///
/// `traction` is the fluid traction `sigma n` on the interface; `forcing` an
/// optional extra shell load.
pub fn shell_predict(
    state: &ShellState,
    traction: &Components,
    forcing: Option<&Components>,
    dt: f64,
    params: &PhysicalParams,
    h: f64,
) -> Result<Predicted> {
    let (u_prev, v_prev) = match (&state.u_prev, &state.v_prev) {
        (Some(u), Some(v)) => (u, v),
        _ => return Err(Error::StartupRequired("shell leap-frog needs level n-1")),
    };
    let n = state.len();
    let mut out = Predicted {
        u: zero_components(n),
        v: zero_components(n),
    };
    let scale = 2.0 * dt / params.rhosh;
    for &c in state.components() {
        let lu = shell_operator(&state.u[c], params, h);
        for i in 0..n {
            let f = forcing.map_or(0.0, |f| f[c][i]);
            out.u[c][i] = u_prev[c][i] + 2.0 * dt * state.v[c][i];
            out.v[c][i] = v_prev[c][i] + scale * (lu[i] - traction[c][i] + f);
        }
    }
    Ok(out)
}

/// Trapezoidal corrector using midpoint averages of the predicted and current
/// levels. The traction enters with the same sign as in the predictor.
pub fn shell_correct(
    state: &ShellState,
    predicted: &Predicted,
    traction_pred: &Components,
    traction_now: &Components,
    forcing_mid: Option<&Components>,
    dt: f64,
    params: &PhysicalParams,
    h: f64,
) -> (Components, Components) {
    let n = state.len();
    let mut u_new = zero_components(n);
    let mut v_new = zero_components(n);
    let scale = dt / params.rhosh;
    for &c in state.components() {
        let u_mid: Vec<f64> = predicted.u[c]
            .iter()
            .zip(&state.u[c])
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        let lu = shell_operator(&u_mid, params, h);
        for i in 0..n {
            let v_mid = 0.5 * (predicted.v[c][i] + state.v[c][i]);
            let sigma_mid = 0.5 * (traction_pred[c][i] + traction_now[c][i]);
            let f = forcing_mid.map_or(0.0, |f| f[c][i]);
            u_new[c][i] = state.u[c][i] + dt * v_mid;
            v_new[c][i] = state.v[c][i] + scale * (lu[i] - sigma_mid + f);
        }
    }
    (u_new, v_new)
}
