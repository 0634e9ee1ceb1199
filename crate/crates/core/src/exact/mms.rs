//! Manufactured trigonometric solution.

use std::f64::consts::PI;

use super::{ExactSolution, FluidJet, ShellJet};
use crate::params::PhysicalParams;

/// Divergence-free fluid fields with frequencies `fx pi` (space) and `ft pi`
/// (time), and shell waves `sin(fx pi s) cos(fx pi c t)` of speed
/// `c = sqrt(Tbar / rhosh)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmsSolution {
    pub fx: f64,
    pub ft: f64,
    pub abar: f64,
    pub bbar: f64,
    pub c: f64,
}

impl MmsSolution {
    pub fn new(fx: f64, ft: f64, abar: f64, bbar: f64, params: &PhysicalParams) -> Self {
        MmsSolution {
            fx,
            ft,
            abar,
            bbar,
            c: (params.tbar / params.rhosh).sqrt(),
        }
    }
}

impl ExactSolution for MmsSolution {
    fn fluid(&self, x: f64, y: f64, t: f64) -> FluidJet {
        let a = self.fx * PI;
        let w = self.ft * PI;
        let (sx, cx) = (a * x).sin_cos();
        let (sy, cy) = (a * y).sin_cos();
        let (st, ct) = (w * t).sin_cos();
        let v1 = 0.5 * cx * cy * ct;
        let v2 = 0.5 * sx * sy * ct;
        let p = cx * cy * ct;
        FluidJet {
            v: [v1, v2],
            v_t: [-0.5 * w * cx * cy * st, -0.5 * w * sx * sy * st],
            v_x: [-0.5 * a * sx * cy * ct, 0.5 * a * cx * sy * ct],
            v_y: [-0.5 * a * cx * sy * ct, 0.5 * a * sx * cy * ct],
            lap_v: [-2.0 * a * a * v1, -2.0 * a * a * v2],
            p,
            p_x: -a * sx * cy * ct,
            p_y: -a * cx * sy * ct,
            lap_p: -2.0 * a * a * p,
        }
    }

    fn shell(&self, s: f64, t: f64) -> ShellJet {
        let a = self.fx * PI;
        let wc = a * self.c;
        let sx = (a * s).sin();
        let (st, ct) = (wc * t).sin_cos();
        let mut jet = ShellJet::default();
        for (c, amp) in [self.abar, self.bbar].into_iter().enumerate() {
            let u = amp * sx * ct;
            jet.u[c] = u;
            jet.u_t[c] = -amp * wc * sx * st;
            jet.u_tt[c] = -wc * wc * u;
            jet.u_ss[c] = -a * a * u;
            jet.u_ssss[c] = a.powi(4) * u;
        }
        jet
    }

    fn forced(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{fd, shell_operator_exact, traction, Forcing};
    use crate::params::{make_preset, ModelProblem};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn setup() -> (MmsSolution, PhysicalParams) {
        let p = make_preset(1.0, ModelProblem::MpV2).unwrap();
        (MmsSolution::new(2.0, 2.0, 0.1, 0.1, &p), p)
    }

    #[test]
    fn reference_point_values() {
        let (m, _) = setup();
        let f = m.fluid(0.0, 0.0, 0.0);
        assert_eq!((f.v[0], f.v[1], f.p), (0.5, 0.0, 1.0));
        assert_eq!(m.c, 1.0);
    }

    #[test]
    fn divergence_free_identically() {
        let (m, _) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (x, y, t) = (rng.gen_range(0.0..1.0), rng.gen_range(-1.0..0.0), rng.gen_range(0.0..1.0));
            let f = m.fluid(x, y, t);
            assert!((f.v_x[0] + f.v_y[1]).abs() <= 1e-15);
        }
    }

    #[test]
    fn jets_match_finite_differences() {
        let (m, _) = setup();
        let h = 1e-3;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (x, y, t) = (rng.gen_range(0.0..1.0), rng.gen_range(-1.0..0.0), rng.gen_range(0.0..1.0));
            let f = m.fluid(x, y, t);
            for c in 0..2 {
                let v = |x: f64, y: f64, t: f64| m.fluid(x, y, t).v[c];
                assert!((fd::d1(|s| v(s, y, t), x, h) - f.v_x[c]).abs() < 1e-8);
                assert!((fd::d1(|s| v(x, s, t), y, h) - f.v_y[c]).abs() < 1e-8);
                assert!((fd::d1(|s| v(x, y, s), t, h) - f.v_t[c]).abs() < 1e-8);
                let lap = fd::d2(|s| v(s, y, t), x, h) + fd::d2(|s| v(x, s, t), y, h);
                assert!((lap - f.lap_v[c]).abs() < 1e-6);
            }
            let sj = m.shell(x, t);
            for c in 0..2 {
                let u = |s: f64, t: f64| m.shell(s, t).u[c];
                assert!((fd::d1(|r| u(x, r), t, h) - sj.u_t[c]).abs() < 1e-8);
                assert!((fd::d2(|r| u(x, r), t, h) - sj.u_tt[c]).abs() < 1e-6);
                assert!((fd::d2(|r| u(r, t), x, h) - sj.u_ss[c]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn forced_relations_vanish() {
        let (m, p) = setup();
        let forcing = Forcing::new(Arc::new(m), p, ModelProblem::MpV2);
        let beta = p.robin_coefficient();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let (x, y, t) = (rng.gen_range(0.0..1.0), rng.gen_range(-1.0..0.0), rng.gen_range(0.0..1.0));
            let f = m.fluid(x, y, t);
            let g = forcing.momentum(x, y, t);
            for c in 0..2 {
                let grad = if c == 0 { f.p_x } else { f.p_y };
                let r = p.rho * f.v_t[c] - (-grad + p.mu * f.lap_v[c] + g[c]);
                assert!(r.abs() <= 1e-13);
            }
            assert!((f.lap_p - forcing.poisson(x, y, t)).abs() <= 1e-13);

            let top = m.fluid(x, 0.0, t);
            let sj = m.shell(x, t);
            let fs = forcing.shell(x, t);
            let sigma = traction(&p, &top);
            for c in 0..2 {
                let r = p.rhosh * sj.u_tt[c] - (shell_operator_exact(&p, &sj, c) - sigma[c] + fs[c]);
                assert!(r.abs() <= 1e-13);
            }
            let k = forcing.kinematic(x, t);
            for c in 0..2 {
                assert!((top.v[c] - (sj.u_t[c] + k[c])).abs() <= 1e-15);
            }
            let robin = top.p + beta * top.p_y
                - (2.0 * p.mu * top.v_y[1] + p.mu * beta * top.lap_v[1] - shell_operator_exact(&p, &sj, 1)
                    + forcing.robin_offset(x, t));
            assert!(robin.abs() <= 1e-13);
            let tang = p.mu * (top.v_y[0] + top.v_x[1]) + p.mu * beta * top.lap_v[0]
                - (beta * top.p_x + shell_operator_exact(&p, &sj, 0) + forcing.tangential_offset(x, t));
            assert!(tang.abs() <= 1e-13);
            let bot = m.fluid(x, -1.0, t);
            let r = bot.p_y - (p.mu * bot.lap_v[1] + forcing.bottom_pressure_offset(x, t));
            assert!(r.abs() <= 1e-13);
        }
    }
}
