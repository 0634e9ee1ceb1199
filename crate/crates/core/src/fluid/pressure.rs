//! Pressure Poisson solve with Robin, Neumann or Dirichlet rows at the
//! interface and bottom wall. Ghost values are eliminated from the boundary
//! rows; the factorization depends only on the boundary structure and is
//! reused across time steps.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid2D};
use crate::linalg::{BandedLu, CsrMatrix};

/// Relative residual bound checked after every solve.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum InterfacePressureBc {
    /// `p + beta p_y = rhs`.
    Robin { beta: f64, rhs: Vec<f64> },
    /// `p_y = g`.
    Neumann { g: Vec<f64> },
    Dirichlet { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum WallPressureBc {
    /// `p_y = g`.
    Neumann { g: Vec<f64> },
    Dirichlet { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureBcSpec {
    pub top: InterfacePressureBc,
    pub bottom: WallPressureBc,
}

/// Boundary-condition kinds, which alone determine the matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureStructure {
    /// `Some(beta)` for a Robin interface, `None` otherwise.
    pub robin: Option<f64>,
    pub top_dirichlet: bool,
    pub bottom_dirichlet: bool,
}

impl PressureStructure {
    pub fn is_pure_neumann(&self) -> bool {
        self.robin.is_none() && !self.top_dirichlet && !self.bottom_dirichlet
    }
}

impl PressureBcSpec {
    pub fn structure(&self) -> PressureStructure {
        PressureStructure {
            robin: match self.top {
                InterfacePressureBc::Robin { beta, .. } => Some(beta),
                _ => None,
            },
            top_dirichlet: matches!(self.top, InterfacePressureBc::Dirichlet { .. }),
            bottom_dirichlet: matches!(self.bottom, WallPressureBc::Dirichlet { .. }),
        }
    }
}

/// Fixes the free constant of a pure-Neumann problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PressureGauge {
    None,
    /// Shift so that the interface-row mean equals the given value.
    InterfaceMean(f64),
}

#[derive(Debug, Clone)]
pub struct PressureSolver {
    grid: Grid2D,
    structure: PressureStructure,
    /// Unknown index of column `i` within a row (folded periodic ordering).
    pos: Vec<usize>,
    matrix: Arc<CsrMatrix>,
    lu: Arc<BandedLu>,
}

impl PressureSolver {
    pub fn new(grid: &Grid2D, structure: PressureStructure) -> Result<Self> {
        if let Some(beta) = structure.robin {
            if !(beta > 0.0) {
                return Err(Error::InvalidArgument(format!("Robin coefficient must be positive, got {beta}")));
            }
        }
        let nx = grid.nx();
        // Order columns 0, nx-1, 1, nx-2, ... so periodic neighbours stay
        // within two positions and the bandwidth is about nx.
        let mut pos = vec![0; nx];
        let (mut lo, mut hi, mut m) = (0usize, nx - 1, 0usize);
        while lo <= hi {
            pos[lo] = m;
            m += 1;
            if hi != lo {
                pos[hi] = m;
                m += 1;
            }
            lo += 1;
            if hi == 0 {
                break;
            }
            hi -= 1;
        }
        let matrix = assemble(grid, structure, &pos);
        let lu = BandedLu::factor(&matrix)?;
        Ok(PressureSolver {
            grid: *grid,
            structure,
            pos,
            matrix: Arc::new(matrix),
            lu: Arc::new(lu),
        })
    }

    pub fn structure(&self) -> PressureStructure {
        self.structure
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    fn index(&self, i: isize, j: isize) -> usize {
        folded_index(&self.grid, &self.pos, i, j)
    }

    fn pinned(&self) -> Option<usize> {
        self.structure.is_pure_neumann().then(|| self.index(0, 0))
    }

    /// Solves `lap_h p = source` on rows `0..=n` with boundary data `bc`,
    /// returning the pressure with ghost rows filled and the relative residual.
    pub fn solve(&self, source: &Field, bc: &PressureBcSpec, gauge: PressureGauge) -> Result<(Field, f64)> {
        if bc.structure() != self.structure {
            return Err(Error::InvalidArgument(
                "boundary data does not match the factored pressure structure".into(),
            ));
        }
        let g = &self.grid;
        let (nx, n) = (g.nx() as isize, g.top());
        let mut b = vec![0.0; (nx * (n + 1)) as usize];
        for j in 0..=n {
            for i in 0..nx {
                let iu = i as usize;
                let s = source.at(i, j);
                b[self.index(i, j)] = if j == n {
                    match &bc.top {
                        InterfacePressureBc::Robin { beta, rhs } => s - 2.0 * rhs[iu] / (beta * g.hy),
                        InterfacePressureBc::Neumann { g: gv } => s - 2.0 * gv[iu] / g.hy,
                        InterfacePressureBc::Dirichlet { values } => values[iu],
                    }
                } else if j == 0 {
                    match &bc.bottom {
                        WallPressureBc::Neumann { g: gv } => s + 2.0 * gv[iu] / g.hy,
                        WallPressureBc::Dirichlet { values } => values[iu],
                    }
                } else {
                    s
                };
            }
        }
        if let Some(pin) = self.pinned() {
            if gauge == PressureGauge::None {
                return Err(Error::SolverSingular(
                    "pure Neumann pressure problem needs a gauge".into(),
                ));
            }
            // Project onto the range: the left null vector weighs boundary rows by 1/2.
            let w = |j: isize| if j == 0 || j == n { 0.5 } else { 1.0 };
            let (mut num, mut den) = (0.0, 0.0);
            for j in 0..=n {
                for i in 0..nx {
                    num += w(j) * b[self.index(i, j)];
                    den += w(j);
                }
            }
            let shift = num / den;
            b.iter_mut().for_each(|v| *v -= shift);
            b[pin] = 0.0;
        }
        let mut x = self.lu.solve(&b);
        let ax = self.matrix.matvec(&x);
        let res = ax.iter().zip(&b).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max);
        let xn = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let bn = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let denom = self.matrix.norm_inf() * xn + bn;
        let rel = if denom > 0.0 { res / denom } else { 0.0 };
        if !(rel <= RESIDUAL_TOLERANCE) {
            return Err(Error::SolverFailure {
                residual: rel,
                tolerance: RESIDUAL_TOLERANCE,
            });
        }
        if let (Some(_), PressureGauge::InterfaceMean(target)) = (self.pinned(), gauge) {
            let mean = (0..nx).map(|i| x[self.index(i, n)]).sum::<f64>() / nx as f64;
            x.iter_mut().for_each(|v| *v += target - mean);
        }

        let mut p = Field::zeros(g);
        for j in 0..=n {
            for i in 0..nx {
                p.set(i, j, x[self.index(i, j)]);
            }
        }
        fill_pressure_ghosts(g, &mut p, bc);
        Ok((p, rel))
    }
}

fn folded_index(g: &Grid2D, pos: &[usize], i: isize, j: isize) -> usize {
    j as usize * g.nx() + pos[g.wrap(i)]
}

fn assemble(g: &Grid2D, structure: PressureStructure, pos: &[usize]) -> CsrMatrix {
    let index = |i: isize, j: isize| folded_index(g, pos, i, j);
    let pinned = structure.is_pure_neumann().then(|| index(0, 0));
    let (nx, n) = (g.nx() as isize, g.top());
    let (ax, ay) = (1.0 / (g.hx * g.hx), 1.0 / (g.hy * g.hy));
    let mut rows = vec![Vec::new(); (nx * (n + 1)) as usize];
    for j in 0..=n {
        for i in 0..nx {
            let r = index(i, j);
            let row = &mut rows[r];
            let dirichlet = (j == n && structure.top_dirichlet)
                || (j == 0 && structure.bottom_dirichlet)
                || Some(r) == pinned;
            if dirichlet {
                row.push((r, 1.0));
                continue;
            }
            row.push((index(i - 1, j), ax));
            row.push((index(i + 1, j), ax));
            let mut diag = -2.0 * ax - 2.0 * ay;
            if j == n {
                row.push((index(i, n - 1), 2.0 * ay));
                if let Some(beta) = structure.robin {
                    diag -= 2.0 / (beta * g.hy);
                }
            } else if j == 0 {
                row.push((index(i, 1), 2.0 * ay));
            } else {
                row.push((index(i, j - 1), ay));
                row.push((index(i, j + 1), ay));
            }
            row.push((r, diag));
        }
    }
    CsrMatrix::from_rows(rows)
}

/// Fills pressure ghosts from the boundary relations.
pub(crate) fn fill_pressure_ghosts(g: &Grid2D, p: &mut Field, bc: &PressureBcSpec) {
    let (nx, n) = (g.nx() as isize, g.top());
    for i in 0..nx {
        let iu = i as usize;
        let below = p.at(i, n - 1);
        let here = p.at(i, n);
        let ghost = match &bc.top {
            InterfacePressureBc::Robin { beta, rhs } => below + 2.0 * g.hy * (rhs[iu] - here) / beta,
            InterfacePressureBc::Neumann { g: gv } => below + 2.0 * g.hy * gv[iu],
            InterfacePressureBc::Dirichlet { .. } => 3.0 * here - 3.0 * below + p.at(i, n - 2),
        };
        p.set(i, n + 1, ghost);
        p.set(i, n + 2, 3.0 * ghost - 3.0 * here + below);

        let above = p.at(i, 1);
        let wall = p.at(i, 0);
        let ghost = match &bc.bottom {
            WallPressureBc::Neumann { g: gv } => above - 2.0 * g.hy * gv[iu],
            WallPressureBc::Dirichlet { .. } => 3.0 * wall - 3.0 * above + p.at(i, 2),
        };
        p.set(i, -1, ghost);
        p.set(i, -2, 3.0 * ghost - 3.0 * wall + above);
    }
}
