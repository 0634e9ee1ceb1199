use std::f64::consts::PI;

use approx::assert_abs_diff_eq;

use super::*;
use crate::params::{make_preset, ModelProblem};

fn setup(n: usize, problem: ModelProblem) -> (PhysicalParams, Grid2D) {
    let params = make_preset(1.0, problem).unwrap();
    let grid = Grid2D::new(&params, n).unwrap();
    (params, grid)
}

fn max_rows(g: &Grid2D, f: &Field, rows: std::ops::RangeInclusive<isize>) -> f64 {
    rows.flat_map(|j| (0..g.nx() as isize).map(move |i| (i, j)))
        .map(|(i, j)| f.at(i, j).abs())
        .fold(0.0, f64::max)
}

#[test]
fn laplacian_exact_on_quadratics_in_y() {
    let (_, g) = setup(16, ModelProblem::MpV1);
    let f = Field::from_fn(&g, |_, y| 3.0 * y * y - y + 2.0);
    let l = laplacian(&g, &f, Exec::default());
    for j in 0..=g.top() {
        for i in 0..g.nx() as isize {
            assert_abs_diff_eq!(l.at(i, j), 6.0, epsilon = 1e-9);
        }
    }
}

#[test]
fn laplacian_symbol_on_fourier_mode() {
    let (_, g) = setup(20, ModelProblem::MpV1);
    let k = 2.0 * PI;
    let f = Field::from_fn(&g, |x, _| (k * x).cos());
    let l = laplacian(&g, &f, Exec::Sequential);
    let sym = -4.0 / (g.hx * g.hx) * (0.5 * k * g.hx).sin().powi(2);
    for i in 0..g.nx() as isize {
        assert_abs_diff_eq!(l.at(i, 3), sym * f.at(i, 3), epsilon = 1e-10);
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let (params, g) = setup(24, ModelProblem::MpV2);
    let v = [
        Field::from_fn(&g, |x, y| (2.0 * PI * x).sin() * y.exp()),
        Field::from_fn(&g, |x, y| (4.0 * PI * x).cos() * y * y),
    ];
    let p = Field::from_fn(&g, |x, y| (2.0 * PI * x).cos() * (1.0 + y));
    let run = |exec| {
        momentum_rhs(&g, &v, &p, &params, MomentumOptions { d2: 0.1, exec }, None)
    };
    let a = run(Exec::Sequential);
    let b = run(Exec::Parallel);
    assert_eq!(a, b);
}

#[test]
fn momentum_rhs_constant_pressure_linear_velocity_vanishes() {
    let (params, g) = setup(12, ModelProblem::MpV1);
    let v = [Field::from_fn(&g, |_, y| 2.0 * y + 1.0), Field::from_fn(&g, |_, y| -y)];
    let p = Field::from_fn(&g, |_, _| 4.0);
    let f = momentum_rhs(&g, &v, &p, &params, MomentumOptions { d2: 0.5, exec: Exec::default() }, None);
    assert!(max_rows(&g, &f[0], 0..=g.top()) < 1e-10);
    assert!(max_rows(&g, &f[1], 0..=g.top()) < 1e-10);
}

#[test]
fn momentum_rhs_pressure_gradient_in_y() {
    let (params, g) = setup(12, ModelProblem::MpI1);
    let v = [Field::zeros(&g), Field::zeros(&g)];
    let p = Field::from_fn(&g, |_, y| 3.0 * y);
    let f = momentum_rhs(&g, &v, &p, &params, MomentumOptions { d2: 0.0, exec: Exec::default() }, None);
    for j in 0..=g.top() {
        assert_abs_diff_eq!(f[1].at(2, j), -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f[0].at(2, j), 0.0, epsilon = 1e-12);
    }
}

#[test]
fn adams_bashforth_needs_history() {
    let (params, g) = setup(8, ModelProblem::MpV1);
    let state = FluidState::zeros(&g);
    let f = [Field::zeros(&g), Field::zeros(&g)];
    assert!(matches!(
        velocity_predict(&g, &state, &f, 0.1, &params, Exec::default()),
        Err(Error::StartupRequired(_))
    ));
    assert!(matches!(state.extrapolated_pressure(), Err(Error::StartupRequired(_))));
}

#[test]
fn ab2_am2_match_scalar_formulas() {
    let (params, g) = setup(8, ModelProblem::MpV1);
    let dt = 0.1;
    let mut state = FluidState::zeros(&g);
    state.v[0] = Field::from_fn(&g, |_, _| 1.0);
    state.f_prev = Some([Field::from_fn(&g, |_, _| 2.0), Field::zeros(&g)]);
    let f_now = [Field::from_fn(&g, |_, _| 4.0), Field::zeros(&g)];
    let vp = velocity_predict(&g, &state, &f_now, dt, &params, Exec::default()).unwrap();
    let expect = 1.0 + dt / params.rho * (1.5 * 4.0 - 0.5 * 2.0);
    assert_abs_diff_eq!(vp[0].at(3, 4), expect, epsilon = 1e-15);
    let f_pred = [Field::from_fn(&g, |_, _| -1.0), Field::zeros(&g)];
    let vc = velocity_correct(&g, &state.v, &f_pred, &f_now, dt, &params, Exec::default());
    assert_abs_diff_eq!(vc[0].at(3, 4), 1.0 + 0.5 * dt * 3.0, epsilon = 1e-15);
}

#[test]
fn ab2_am2_integrate_linear_decay_to_second_order() {
    // dv/dt = -v: predictor-corrector error at t = 1 scales like dt^2.
    let err = |steps: usize| {
        let dt = 1.0 / steps as f64;
        let (mut v, mut f_prev) = ((-dt).exp(), -1.0f64);
        let mut t = dt;
        for _ in 1..steps {
            let f_now = -v;
            let vp = v + dt * (1.5 * f_now - 0.5 * f_prev);
            let vn = v + 0.5 * dt * (-vp + f_now);
            f_prev = f_now;
            v = vn;
            t += dt;
        }
        (v - (-t).exp()).abs()
    };
    let rate = (err(40) / err(80)).log2();
    assert!((rate - 2.0).abs() < 0.2, "rate {rate}");
}

fn robin_spec(g: &Grid2D, beta: f64, rhs: impl Fn(f64) -> f64, wall: impl Fn(f64) -> f64) -> PressureBcSpec {
    let xs: Vec<f64> = (0..g.nx() as isize).map(|i| g.x(i)).collect();
    PressureBcSpec {
        top: InterfacePressureBc::Robin { beta, rhs: xs.iter().map(|&x| rhs(x)).collect() },
        bottom: WallPressureBc::Neumann { g: xs.iter().map(|&x| wall(x)).collect() },
    }
}

#[test]
fn zero_data_gives_zero_pressure() {
    let (params, g) = setup(10, ModelProblem::MpV1);
    let spec = robin_spec(&g, params.robin_coefficient(), |_| 0.0, |_| 0.0);
    let solver = PressureSolver::new(&g, spec.structure()).unwrap();
    let (p, res) = solver.solve(&Field::zeros(&g), &spec, PressureGauge::None).unwrap();
    assert_eq!(p.max_abs(), 0.0);
    assert_eq!(res, 0.0);
}

#[test]
fn folded_ordering_keeps_band_narrow() {
    let (params, g) = setup(32, ModelProblem::MpV1);
    let spec = robin_spec(&g, params.robin_coefficient(), |_| 0.0, |_| 0.0);
    let solver = PressureSolver::new(&g, spec.structure()).unwrap();
    let (lo, hi) = solver.matrix().bandwidths();
    assert!(lo <= g.nx() + 2 && hi <= g.nx() + 2, "bandwidths {lo} {hi}");
}

/// `p = cos(kx) cosh(k(y+H))` is harmonic with `p_y = 0` at the wall.
fn robin_error(n: usize, beta: f64) -> f64 {
    let (params, g) = setup(n, ModelProblem::MpV1);
    let k = 2.0 * PI / params.length;
    let hd = params.depth;
    let exact = |x: f64, y: f64| (k * x).cos() * (k * (y + hd)).cosh();
    let rhs = |x: f64| (k * x).cos() * ((k * hd).cosh() + beta * k * (k * hd).sinh());
    let spec = robin_spec(&g, beta, rhs, |_| 0.0);
    let solver = PressureSolver::new(&g, spec.structure()).unwrap();
    let (p, res) = solver.solve(&Field::zeros(&g), &spec, PressureGauge::None).unwrap();
    assert!(res <= RESIDUAL_TOLERANCE);
    let ex = Field::from_fn(&g, exact);
    let mut e: f64 = 0.0;
    for j in 0..=g.top() {
        for i in 0..g.nx() as isize {
            e = e.max((p.at(i, j) - ex.at(i, j)).abs());
        }
    }
    e
}

#[test]
fn robin_problem_converges_at_second_order() {
    for beta in [1e-2, 1.0, 1e3] {
        let (e1, e2) = (robin_error(16, beta), robin_error(32, beta));
        let rate = (e1 / e2).log2();
        assert!((1.8..2.3).contains(&rate), "beta {beta}: rate {rate} ({e1}, {e2})");
    }
}

#[test]
fn robin_ghosts_satisfy_boundary_relation() {
    let (params, g) = setup(12, ModelProblem::MpV1);
    let beta = params.robin_coefficient();
    let spec = robin_spec(&g, beta, |x| (2.0 * PI * x).sin(), |x| 0.3 * (2.0 * PI * x).cos());
    let solver = PressureSolver::new(&g, spec.structure()).unwrap();
    let src = Field::from_fn(&g, |x, y| x * (1.0 - x) * y);
    let (p, _) = solver.solve(&src, &spec, PressureGauge::None).unwrap();
    let n = g.top();
    for i in 0..g.nx() as isize {
        let r = p.at(i, n) + beta * dy(&g, &p, i, n);
        assert_abs_diff_eq!(r, (2.0 * PI * g.x(i)).sin(), epsilon = 1e-10);
        assert_abs_diff_eq!(dy(&g, &p, i, 0), 0.3 * (2.0 * PI * g.x(i)).cos(), epsilon = 1e-10);
        // Discrete Poisson equation holds on the boundary rows.
        assert_abs_diff_eq!(lap(&g, &p, i, n), src.at(i, n), epsilon = 1e-8);
        assert_abs_diff_eq!(lap(&g, &p, i, 0), src.at(i, 0), epsilon = 1e-8);
    }
}

#[test]
fn pure_neumann_requires_gauge_and_honours_it() {
    let (_, g) = setup(16, ModelProblem::MpV1);
    let k = 2.0 * PI;
    let xs: Vec<f64> = (0..g.nx() as isize).map(|i| g.x(i)).collect();
    // p = cos(kx) cosh(k(y+1)) + 5
    let spec = PressureBcSpec {
        top: InterfacePressureBc::Neumann { g: xs.iter().map(|&x| k * (k * x).cos() * k.sinh()).collect() },
        bottom: WallPressureBc::Neumann { g: vec![0.0; xs.len()] },
    };
    let solver = PressureSolver::new(&g, spec.structure()).unwrap();
    assert!(matches!(
        solver.solve(&Field::zeros(&g), &spec, PressureGauge::None),
        Err(Error::SolverSingular(_))
    ));
    let (p, _) = solver.solve(&Field::zeros(&g), &spec, PressureGauge::InterfaceMean(5.0)).unwrap();
    let mean: f64 = (0..g.nx() as isize).map(|i| p.at(i, g.top())).sum::<f64>() / g.nx() as f64;
    assert_abs_diff_eq!(mean, 5.0, epsilon = 1e-12);
    let err = (0..g.nx() as isize)
        .map(|i| (p.at(i, 3) - ((k * g.x(i)).cos() * (k * (g.y(3) + 1.0)).cosh() + 5.0)).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-3 * k.cosh(), "err {err}");
}

#[test]
fn dirichlet_rows_reproduce_data() {
    let (_, g) = setup(10, ModelProblem::MpV1);
    let nx = g.nx();
    let spec = PressureBcSpec {
        top: InterfacePressureBc::Dirichlet { values: vec![2.0; nx] },
        bottom: WallPressureBc::Dirichlet { values: vec![-1.0; nx] },
    };
    let solver = PressureSolver::new(&g, spec.structure()).unwrap();
    let (p, _) = solver.solve(&Field::zeros(&g), &spec, PressureGauge::None).unwrap();
    // Linear in y between the two walls.
    for j in 0..=g.top() {
        assert_abs_diff_eq!(p.at(4, j), -1.0 + 3.0 * (g.y(j) + 1.0), epsilon = 1e-11);
    }
}

#[test]
fn mismatched_structure_rejected() {
    let (params, g) = setup(8, ModelProblem::MpV1);
    let spec = robin_spec(&g, params.robin_coefficient(), |_| 0.0, |_| 0.0);
    let solver = PressureSolver::new(&g, spec.structure()).unwrap();
    let other = robin_spec(&g, 2.0 * params.robin_coefficient(), |_| 0.0, |_| 0.0);
    assert!(solver.solve(&Field::zeros(&g), &other, PressureGauge::None).is_err());
}

fn zero_spec(g: &Grid2D) -> VelocityBcSpec {
    VelocityBcSpec {
        top: InterfaceVelocityBc::Dirichlet { v1: Some(vec![0.0; g.nx()]), v2: Some(vec![0.0; g.nx()]) },
        bottom: WallVelocityBc::NoSlip { v1: vec![0.0; g.nx()], v2: vec![0.0; g.nx()] },
    }
}

#[test]
fn zero_velocity_bcs_keep_zero_field() {
    let (params, g) = setup(8, ModelProblem::MpV1);
    let mut v = [Field::zeros(&g), Field::zeros(&g)];
    apply_velocity_bcs(&g, &mut v, &zero_spec(&g), &params).unwrap();
    assert_eq!(v[0].max_abs() + v[1].max_abs(), 0.0);
}

#[test]
fn boundary_divergence_vanishes() {
    let (params, g) = setup(16, ModelProblem::MpV1);
    let k = 2.0 * PI;
    let mut v = [
        Field::from_fn(&g, |x, y| (k * x).sin() * (y + 0.3).powi(3)),
        Field::from_fn(&g, |x, y| (k * x).cos() * y.exp()),
    ];
    let xs: Vec<f64> = (0..g.nx() as isize).map(|i| g.x(i)).collect();
    let spec = VelocityBcSpec {
        top: InterfaceVelocityBc::AmpTangential { h: xs.iter().map(|&x| (k * x).sin()).collect(), nu: params.mu },
        bottom: WallVelocityBc::NoSlip {
            v1: xs.iter().map(|&x| 0.1 * x).collect(),
            v2: xs.iter().map(|&x| (k * x).cos()).collect(),
        },
    };
    apply_velocity_bcs(&g, &mut v, &spec, &params).unwrap();
    for i in 0..g.nx() as isize {
        assert!(div(&g, &v, i, g.top()).abs() < 1e-12);
        assert!(div(&g, &v, i, 0).abs() < 1e-12);
    }
}

#[test]
fn tangential_ghost_satisfies_condition() {
    let (params, g) = setup(12, ModelProblem::MpV2);
    let beta = params.robin_coefficient();
    let mu = params.mu;
    let mut v = [
        Field::from_fn(&g, |x, y| (2.0 * PI * x).cos() * (1.0 + y)),
        Field::from_fn(&g, |x, _| (2.0 * PI * x).sin()),
    ];
    let h: Vec<f64> = (0..g.nx()).map(|i| 0.2 * i as f64).collect();
    let spec = VelocityBcSpec {
        top: InterfaceVelocityBc::AmpTangential { h: h.clone(), nu: mu },
        bottom: WallVelocityBc::NoSlip { v1: vec![0.0; g.nx()], v2: vec![0.0; g.nx()] },
    };
    apply_velocity_bcs(&g, &mut v, &spec, &params).unwrap();
    let n = g.top();
    for i in 0..g.nx() as isize {
        let lhs = mu * (dy(&g, &v[0], i, n) + dx(&g, &v[1], i, n)) + mu * beta * lap(&g, &v[0], i, n);
        assert_abs_diff_eq!(lhs, h[i as usize], epsilon = 1e-11);
    }
}

#[test]
fn tangential_condition_rejects_inviscid() {
    let (params, g) = setup(8, ModelProblem::MpI1);
    let mut v = [Field::zeros(&g), Field::zeros(&g)];
    let spec = VelocityBcSpec {
        top: InterfaceVelocityBc::AmpTangential { h: vec![0.0; g.nx()], nu: 0.1 },
        bottom: WallVelocityBc::Slip,
    };
    assert!(matches!(apply_velocity_bcs(&g, &mut v, &spec, &params), Err(Error::InvalidConfig(_))));
}

#[test]
fn slip_wall_reflects() {
    let (params, g) = setup(8, ModelProblem::MpI1);
    let mut v = [Field::from_fn(&g, |x, y| x + y * y), Field::from_fn(&g, |x, y| x * y + 1.0)];
    let spec = VelocityBcSpec {
        top: InterfaceVelocityBc::Dirichlet { v1: None, v2: None },
        bottom: WallVelocityBc::Slip,
    };
    apply_velocity_bcs(&g, &mut v, &spec, &params).unwrap();
    for i in 0..g.nx() as isize {
        assert_eq!(v[1].at(i, 0), 0.0);
        assert_eq!(v[0].at(i, -1), v[0].at(i, 1));
        assert_eq!(v[1].at(i, -2), -v[1].at(i, 2));
    }
}

#[test]
fn dump_roundtrip() {
    let (_, g) = setup(6, ModelProblem::MpV1);
    let f = Field::from_fn(&g, |x, y| x - 2.0 * y + 0.125);
    let mut buf = Vec::new();
    write_field(&mut buf, &g, &f, 0.5).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("7 7 "));
    let d = read_field(buf.as_slice()).unwrap();
    assert_eq!((d.nx, d.ny, d.t), (7, 7, 0.5));
    for j in 0..=g.top() {
        for i in 0..g.nx() {
            assert_eq!(d.values[j as usize][i], f.at(i as isize, j));
        }
        assert_eq!(d.values[j as usize][g.nx()], f.at(0, j));
    }
    assert!(read_field("1 2 3\n".as_bytes()).is_err());
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn pressure_solve_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, s in 0.0f64..1.0) {
            let (params, g) = setup(8, ModelProblem::MpV1);
            let beta = params.robin_coefficient();
            let spec1 = robin_spec(&g, beta, |x| (2.0 * PI * x).sin(), |_| s);
            let spec2 = robin_spec(&g, beta, |x| x, |x| x * x);
            let comb = robin_spec(&g, beta, |x| a * (2.0 * PI * x).sin() + b * x, |x| a * s + b * x * x);
            let solver = PressureSolver::new(&g, spec1.structure()).unwrap();
            let z = Field::zeros(&g);
            let (p1, _) = solver.solve(&z, &spec1, PressureGauge::None).unwrap();
            let (p2, _) = solver.solve(&z, &spec2, PressureGauge::None).unwrap();
            let (pc, _) = solver.solve(&z, &comb, PressureGauge::None).unwrap();
            let mut lin = p1.clone();
            lin.assign_combination(a, &p1, b, &p2);
            prop_assert!(pc.max_abs_diff(&lin) < 1e-10 * (1.0 + pc.max_abs()));
        }

        #[test]
        fn laplacian_commutes_with_shift(shift in 0isize..8) {
            let (_, g) = setup(8, ModelProblem::MpV1);
            let f = Field::from_fn(&g, |x, y| (x * 7.3).sin() * (1.0 + y * y) + x * x * (1.0 - x) * (1.0 - x));
            let mut fs = Field::zeros(&g);
            for j in fs.row_range() {
                for i in 0..g.nx() as isize {
                    fs.set(i, j, f.at(i + shift, j));
                }
            }
            let (l, ls) = (laplacian(&g, &f, Exec::default()), laplacian(&g, &fs, Exec::default()));
            for i in 0..g.nx() as isize {
                prop_assert!((ls.at(i, 3) - l.at(i + shift, 3)).abs() < 1e-9);
            }
        }
    }
}
