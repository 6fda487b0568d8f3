use alloc::vec;
use alloc::vec::Vec;

use crate::euler::{Conserved, GasModel, Primitive};
use crate::quadrature;
use crate::{Error, Result};

/// Uniform Cartesian mesh with a ghost band of width `ghost` on every side
/// (only in x for 1D meshes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    pub dim: usize,
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub ghost: usize,
}

impl Mesh {
    pub fn new_1d(x: (f64, f64), nx: usize) -> Result<Self> {
        Self::build(1, x, (0.0, 1.0), nx, 1)
    }

    pub fn new_2d(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        Self::build(2, x, y, nx, ny)
    }

    fn build(dim: usize, x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::config("mesh needs at least one cell per direction"));
        }
        if !(x.1 > x.0) || !(y.1 > y.0) {
            return Err(Error::config("empty domain"));
        }
        Ok(Mesh {
            dim,
            x,
            y,
            nx,
            ny,
            dx: (x.1 - x.0) / nx as f64,
            dy: (y.1 - y.0) / ny as f64,
            ghost: 0,
        })
    }

    pub fn with_ghost(self, ghost: usize) -> Self {
        Mesh { ghost, ..self }
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn padded_nx(&self) -> usize {
        self.nx + 2 * self.ghost
    }

    pub fn padded_ny(&self) -> usize {
        if self.dim == 2 {
            self.ny + 2 * self.ghost
        } else {
            1
        }
    }

    pub fn padded_len(&self) -> usize {
        self.padded_nx() * self.padded_ny()
    }

    /// Index into the padded array of cell `(i, j)`, interior cells being
    /// `0..nx × 0..ny`.
    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let g = self.ghost as isize;
        let jj = if self.dim == 2 { j + g } else { 0 };
        (jj as usize) * self.padded_nx() + (i + g) as usize
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.x.0 + (i as f64 + 0.5) * self.dx,
            if self.dim == 2 {
                self.y.0 + (j as f64 + 0.5) * self.dy
            } else {
                0.0
            },
        )
    }

    /// Volume of a cell (length in 1D).
    pub fn cell_volume(&self) -> f64 {
        if self.dim == 2 {
            self.dx * self.dy
        } else {
            self.dx
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Periodic,
    /// Zeroth-order extrapolation of the adjacent interior cell.
    Transmissive,
    /// Fixed external state.
    Inflow(Primitive),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryRule {
    pub left: Boundary,
    pub right: Boundary,
    pub bottom: Boundary,
    pub top: Boundary,
}

impl BoundaryRule {
    pub const fn uniform(b: Boundary) -> Self {
        BoundaryRule {
            left: b,
            right: b,
            bottom: b,
            top: b,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let periodic = |b: &Boundary| matches!(b, Boundary::Periodic);
        if periodic(&self.left) != periodic(&self.right) || periodic(&self.bottom) != periodic(&self.top) {
            return Err(Error::config("periodic boundaries must be paired on opposite sides"));
        }
        Ok(())
    }
}

fn ghost_value<const N: usize>(b: &Boundary, gas: &GasModel) -> Result<Option<[f64; N]>> {
    match b {
        Boundary::Inflow(p) => Ok(Some(gas.primitive_to_conserved::<N>(*p)?.0)),
        _ => Ok(None),
    }
}

/// Populate the ghost band. In 2D the x rule is applied on interior rows
/// first and the y rule on full padded columns afterwards, which fills the
/// corner blocks.
pub fn fill_ghosts<const N: usize>(
    mesh: &Mesh,
    rule: &BoundaryRule,
    gas: &GasModel,
    data: &mut [[f64; N]],
) -> Result<()> {
    let g = mesh.ghost as isize;
    let (nx, ny) = (mesh.nx as isize, mesh.ny as isize);
    let left = ghost_value::<N>(&rule.left, gas)?;
    let right = ghost_value::<N>(&rule.right, gas)?;
    let rows = if mesh.dim == 2 { ny } else { 1 };
    for j in 0..rows {
        for k in 1..=g {
            data[mesh.idx(-k, j)] = match (&rule.left, left) {
                (_, Some(v)) => v,
                (Boundary::Periodic, _) => data[mesh.idx((-k).rem_euclid(nx), j)],
                _ => data[mesh.idx(0, j)],
            };
            data[mesh.idx(nx - 1 + k, j)] = match (&rule.right, right) {
                (_, Some(v)) => v,
                (Boundary::Periodic, _) => data[mesh.idx((nx - 1 + k).rem_euclid(nx), j)],
                _ => data[mesh.idx(nx - 1, j)],
            };
        }
    }
    if mesh.dim == 2 {
        let bottom = ghost_value::<N>(&rule.bottom, gas)?;
        let top = ghost_value::<N>(&rule.top, gas)?;
        for i in -g..nx + g {
            for k in 1..=g {
                data[mesh.idx(i, -k)] = match (&rule.bottom, bottom) {
                    (_, Some(v)) => v,
                    (Boundary::Periodic, _) => data[mesh.idx(i, (-k).rem_euclid(ny))],
                    _ => data[mesh.idx(i, 0)],
                };
                data[mesh.idx(i, ny - 1 + k)] = match (&rule.top, top) {
                    (_, Some(v)) => v,
                    (Boundary::Periodic, _) => data[mesh.idx(i, (ny - 1 + k).rem_euclid(ny))],
                    _ => data[mesh.idx(i, ny - 1)],
                };
            }
        }
    }
    Ok(())
}

/// Tensor Gauss–Legendre cell averages of `f` over every interior cell.
pub fn cell_averages<const N: usize, F>(mesh: &Mesh, points: usize, mut f: F) -> Result<Vec<[f64; N]>>
where
    F: FnMut(f64, f64) -> Result<[f64; N]>,
{
    let rule = quadrature::gauss_legendre(points, -0.5, 0.5);
    let mut out = vec![[0.0; N]; mesh.cells()];
    for j in 0..mesh.ny {
        for i in 0..mesh.nx {
            let (xc, yc) = mesh.center(i, j);
            let mut acc = [0.0; N];
            let ny_pts = if mesh.dim == 2 { points } else { 1 };
            for qy in 0..ny_pts {
                let (y, wy) = if mesh.dim == 2 {
                    (yc + rule.nodes[qy] * mesh.dy, rule.weights[qy])
                } else {
                    (0.0, 1.0)
                };
                for qx in 0..points {
                    let x = xc + rule.nodes[qx] * mesh.dx;
                    let v = f(x, y)?;
                    let w = wy * rule.weights[qx];
                    for k in 0..N {
                        acc[k] += w * v[k];
                    }
                }
            }
            out[j * mesh.nx + i] = acc;
        }
    }
    Ok(out)
}

/// Conserved cell averages of a primitive initial condition.
pub fn initialize<const N: usize, F>(mesh: &Mesh, points: usize, gas: &GasModel, initial: F) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64, f64) -> Primitive,
{
    cell_averages(mesh, points, |x, y| {
        gas.primitive_to_conserved::<N>(initial(x, y))
            .map(|c| c.0)
            .map_err(|e| Error::config(alloc::format!("initial condition at ({x}, {y}): {e}")))
    })
}

/// Copy interior cells into a padded array.
pub fn pad<const N: usize>(mesh: &Mesh, interior: &[[f64; N]]) -> Vec<[f64; N]> {
    let mut out = vec![[0.0; N]; mesh.padded_len()];
    for j in 0..mesh.ny {
        for i in 0..mesh.nx {
            out[mesh.idx(i as isize, j as isize)] = interior[j * mesh.nx + i];
        }
    }
    out
}

/// Interior cells of a padded array, row-major.
pub fn unpad<const N: usize>(mesh: &Mesh, padded: &[[f64; N]]) -> Vec<[f64; N]> {
    let mut out = Vec::with_capacity(mesh.cells());
    for j in 0..mesh.ny {
        for i in 0..mesh.nx {
            out.push(padded[mesh.idx(i as isize, j as isize)]);
        }
    }
    out
}

/// First interior cell that is not a valid state, in row-major order.
pub fn first_invalid<const N: usize>(
    mesh: &Mesh,
    gas: &GasModel,
    padded: &[[f64; N]],
) -> Option<(usize, usize, Error)> {
    for j in 0..mesh.ny {
        for i in 0..mesh.nx {
            let u = Conserved(padded[mesh.idx(i as isize, j as isize)]);
            let bad = if !u.is_finite() {
                Some(Error::InvalidState {
                    rho: u.rho(),
                    pressure: gas.pressure(&u),
                })
            } else {
                gas.conserved_to_primitive(&u).err()
            };
            if let Some(e) = bad {
                return Some((i, j, e));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{pow, sin};
    use core::f64::consts::PI;

    const GAS: GasModel = GasModel { gamma: 1.4 };

    #[test]
    fn periodic_1d_ghosts() {
        let mesh = Mesh::new_1d((0.0, 1.0), 4).unwrap().with_ghost(2);
        let mut data = pad(&mesh, &[[1.0], [2.0], [3.0], [4.0]]);
        fill_ghosts(&mesh, &BoundaryRule::uniform(Boundary::Periodic), &GAS, &mut data).unwrap();
        let all: Vec<f64> = data.iter().map(|v| v[0]).collect();
        assert_eq!(all, [3.0, 4.0, 1.0, 2.0, 3.0, 4.0, 1.0, 2.0]);
    }

    #[test]
    fn transmissive_and_inflow() {
        let mesh = Mesh::new_1d((0.0, 1.0), 3).unwrap().with_ghost(3);
        let u = [1.0, 0.2, 2.6];
        let mut data = pad(&mesh, &[u, u, u]);
        let inflow = Primitive::new_1d(1.515695, 0.523346, 1.805);
        let rule = BoundaryRule {
            left: Boundary::Inflow(inflow),
            right: Boundary::Transmissive,
            bottom: Boundary::Transmissive,
            top: Boundary::Transmissive,
        };
        fill_ghosts(&mesh, &rule, &GAS, &mut data).unwrap();
        let expected = GAS.primitive_to_conserved::<3>(inflow).unwrap().0;
        for k in 0..3 {
            assert_eq!(data[k], expected);
            assert_eq!(data[6 + k], u);
        }
        // ρu = 1.515695·0.523346, E = 1.805/0.4 + ρu²/2
        assert!((expected[1] - 1.515695 * 0.523346).abs() < 1e-15);
        assert!((expected[2] - (1.805 / 0.4 + 0.5 * 1.515695 * 0.523346 * 0.523346)).abs() < 1e-14);
    }

    #[test]
    fn corners_follow_x_then_y() {
        let mesh = Mesh::new_2d((0.0, 1.0), (0.0, 1.0), 3, 3).unwrap().with_ghost(2);
        let interior: Vec<[f64; 1]> = (0..9).map(|k| [k as f64]).collect();
        let mut data = pad(&mesh, &interior);
        fill_ghosts(&mesh, &BoundaryRule::uniform(Boundary::Periodic), &GAS, &mut data).unwrap();
        // corner (-1, -1) wraps to (2, 2)
        assert_eq!(data[mesh.idx(-1, -1)], [8.0]);
        assert_eq!(data[mesh.idx(-2, 3)], [1.0]);
        fill_ghosts(&mesh, &BoundaryRule::uniform(Boundary::Transmissive), &GAS, &mut data).unwrap();
        assert_eq!(data[mesh.idx(-2, -2)], [0.0]);
        assert_eq!(data[mesh.idx(4, 4)], [8.0]);
    }

    #[test]
    fn unpaired_periodic_rejected() {
        let rule = BoundaryRule {
            left: Boundary::Periodic,
            right: Boundary::Transmissive,
            bottom: Boundary::Periodic,
            top: Boundary::Periodic,
        };
        assert!(rule.validate().is_err());
    }

    #[test]
    fn constant_initial_state() {
        let mesh = Mesh::new_2d((0.0, 1.0), (0.0, 2.0), 5, 4).unwrap();
        let avg = initialize::<4, _>(&mesh, 3, &GAS, |_, _| Primitive::new(1.0, 0.0, 0.0, 1.0)).unwrap();
        for a in &avg {
            assert!((a[0] - 1.0).abs() < 1e-15 && (a[3] - 2.5).abs() < 1e-14);
        }
        assert!(initialize::<4, _>(&mesh, 3, &GAS, |_, _| Primitive::new(-1.0, 0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn sin4_averages_converge() {
        // closed-form primitive of sin⁴(πx)
        let prim = |x: f64| 3.0 / 8.0 * x - sin(2.0 * PI * x) / (4.0 * PI) + sin(4.0 * PI * x) / (32.0 * PI);
        for points in [2usize, 3, 4] {
            let mut errs = Vec::new();
            let n0 = 160usize >> points;
            for n in [n0, 2 * n0] {
                let mesh = Mesh::new_1d((-1.0, 1.0), n).unwrap();
                let avg = cell_averages::<1, _>(&mesh, points, |x, _| Ok([2.0 + pow(sin(PI * x), 4.0)])).unwrap();
                let mut e = 0.0f64;
                for (i, a) in avg.iter().enumerate() {
                    let (xa, xb) = (-1.0 + i as f64 * mesh.dx, -1.0 + (i + 1) as f64 * mesh.dx);
                    let exact = 2.0 + (prim(xb) - prim(xa)) / mesh.dx;
                    e = e.max((a[0] - exact).abs());
                }
                errs.push(e);
            }
            let slope = crate::math::log2(errs[0] / errs[1]);
            assert!(slope > 2.0 * points as f64 - 0.3, "{points}: {errs:?}");
        }
    }

    #[test]
    fn jump_on_face_gives_pure_states() {
        let mesh = Mesh::new_1d((0.0, 1.0), 100).unwrap();
        let avg = initialize::<3, _>(&mesh, 3, &GAS, |x, _| {
            if x < 0.3 {
                Primitive::new_1d(1.0, 0.75, 1.0)
            } else {
                Primitive::new_1d(0.125, 0.0, 0.1)
            }
        })
        .unwrap();
        let left = GAS
            .primitive_to_conserved::<3>(Primitive::new_1d(1.0, 0.75, 1.0))
            .unwrap()
            .0;
        for k in 0..3 {
            assert!((avg[29][k] - left[k]).abs() < 1e-15);
        }
        assert!((avg[30][0] - 0.125).abs() < 1e-15);
    }
}
