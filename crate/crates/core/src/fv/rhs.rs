use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::mesh::{fill_ghosts, BoundaryRule, Mesh};
use crate::euler::{Conserved, Direction, GasModel};
use crate::flux::{numerical_flux, FluxContext, FluxScheme};
use crate::math::minmod;
use crate::weno::{Reconstructor, VariableMode, MAX_WINDOW};
use crate::{Error, Result};

/// Spatial reconstruction of face traces.
#[derive(Debug, Clone)]
pub enum Spatial {
    Weno(Reconstructor),
    /// Second-order minmod slopes in characteristic variables, face midpoints.
    Muscl,
}

impl Spatial {
    pub fn ghost_width(&self) -> usize {
        match self {
            Spatial::Weno(rec) => rec.config.r.max(1),
            Spatial::Muscl => 2,
        }
    }

    fn half_window(&self) -> usize {
        match self {
            Spatial::Weno(rec) => rec.config.r - 1,
            Spatial::Muscl => 1,
        }
    }

    pub fn face_points(&self) -> usize {
        match self {
            Spatial::Weno(rec) => rec.face_points(),
            Spatial::Muscl => 1,
        }
    }

    fn face_weights(&self) -> &[f64] {
        match self {
            Spatial::Weno(rec) => &rec.face_weights,
            Spatial::Muscl => &[1.0],
        }
    }
}

fn muscl_traces<const N: usize>(window: &[[f64; N]], dir: Direction, gas: &GasModel) -> Result<([f64; N], [f64; N])> {
    let es = gas.eigensystem(&Conserved(window[1]), dir)?;
    let w: [[f64; N]; 3] = [es.project(&window[0]), es.project(&window[1]), es.project(&window[2])];
    let mut half = [0.0; N];
    for k in 0..N {
        half[k] = 0.5 * minmod(w[2][k] - w[1][k], w[1][k] - w[0][k]);
    }
    let delta = es.unproject(&half);
    let mut minus = window[1];
    let mut plus = window[1];
    for k in 0..N {
        minus[k] -= delta[k];
        plus[k] += delta[k];
    }
    Ok((minus, plus))
}

fn located(i: isize, j: isize, cause: Error) -> Error {
    match cause {
        e @ Error::Crash { .. } => e,
        cause => Error::Crash {
            step: 0,
            time: 0.0,
            i,
            j,
            cause: Box::new(cause),
        },
    }
}

/// Face traces of every cell touching an interior face.
///
/// For 1D meshes entry `i + 1` (cells `−1..=nx`) holds the traces of cell
/// `i`. For 2D meshes [`SemiDiscrete::traces_x`] and
/// [`SemiDiscrete::traces_y`] use the layouts documented there.
#[derive(Debug, Clone, Default)]
pub struct FaceTraces<const N: usize> {
    pub minus: Vec<[f64; N]>,
    pub plus: Vec<[f64; N]>,
}

/// Semidiscrete right-hand side `−div F` on a padded field.
#[derive(Debug, Clone)]
pub struct SemiDiscrete<const N: usize> {
    pub mesh: Mesh,
    pub boundary: BoundaryRule,
    pub gas: GasModel,
    pub scheme: FluxScheme,
    pub spatial: Spatial,
    /// `(Δx/Δt, Δy/Δt)` of the current step for centred fluxes.
    pub mesh_ratio: Option<(f64, f64)>,
    scratch: Vec<[f64; N]>,
    traces: FaceTraces<N>,
    fluxes: Vec<[f64; N]>,
}

impl<const N: usize> SemiDiscrete<N> {
    pub fn new(
        mesh: Mesh,
        boundary: BoundaryRule,
        gas: GasModel,
        scheme: FluxScheme,
        spatial: Spatial,
    ) -> Result<Self> {
        if (N == 3) != (mesh.dim == 1) || !(N == 3 || N == 4) {
            return Err(Error::config("state size does not match the mesh dimension"));
        }
        boundary.validate()?;
        let g = spatial.ghost_width();
        if mesh.ghost < g {
            return Err(Error::config(alloc::format!("mesh needs {g} ghost layers")));
        }
        if mesh.nx < g || (mesh.dim == 2 && mesh.ny < g) {
            return Err(Error::config("mesh too small for the stencil"));
        }
        Ok(SemiDiscrete {
            mesh,
            boundary,
            gas,
            scheme,
            spatial,
            mesh_ratio: None,
            scratch: vec![[0.0; N]; mesh.padded_len()],
            traces: FaceTraces::default(),
            fluxes: Vec::new(),
        })
    }

    fn context(&self, dir: Direction) -> FluxContext {
        let ctx = FluxContext::new(self.gas, dir);
        match self.mesh_ratio {
            Some((rx, ry)) => ctx.with_mesh_ratio(if dir == Direction::X { rx } else { ry }),
            None => ctx,
        }
    }

    /// Copy `u` into the internal buffer and populate its ghosts.
    fn load(&mut self, u: &[[f64; N]]) -> Result<()> {
        self.scratch.copy_from_slice(u);
        fill_ghosts(&self.mesh, &self.boundary, &self.gas, &mut self.scratch)?;
        if let Some((i, j, e)) = super::mesh::first_invalid(&self.mesh, &self.gas, &self.scratch) {
            return Err(located(i as isize, j as isize, e));
        }
        Ok(())
    }

    /// Evaluate `out = −div F(u)` with zero rate in the ghost band.
    pub fn eval(&mut self, u: &[f64], out: &mut [f64]) -> Result<()> {
        let (u, _) = u.as_chunks::<N>();
        let (out, _) = out.as_chunks_mut::<N>();
        self.load(u)?;
        out.fill([0.0; N]);
        if self.mesh.dim == 1 {
            self.rhs_1d(out)
        } else {
            self.rhs_2d(out)
        }
    }

    #[inline]
    fn cell_traces_1d(&self, i: isize) -> Result<([f64; N], [f64; N])> {
        let h = self.spatial.half_window() as isize;
        let mut window = [[0.0; N]; MAX_WINDOW];
        for (a, w) in window.iter_mut().enumerate().take((2 * h + 1) as usize) {
            *w = self.scratch[self.mesh.idx(i - h + a as isize, 0)];
        }
        let w = &window[..(2 * h + 1) as usize];
        match &self.spatial {
            Spatial::Weno(rec) => rec.traces_1d(w, &self.gas),
            Spatial::Muscl => muscl_traces(w, Direction::X, &self.gas),
        }
        .map_err(|e| located(i, 0, e))
    }

    /// Traces of cells `−1..=nx` of a 1D mesh at their left and right faces.
    pub fn traces_1d(&mut self, u: &[[f64; N]]) -> Result<FaceTraces<N>> {
        self.load(u)?;
        let nx = self.mesh.nx as isize;
        let mut t = FaceTraces::default();
        for i in -1..=nx {
            let (m, p) = self.cell_traces_1d(i)?;
            t.minus.push(m);
            t.plus.push(p);
        }
        Ok(t)
    }

    fn rhs_1d(&mut self, out: &mut [[f64; N]]) -> Result<()> {
        let nx = self.mesh.nx;
        let mut traces = core::mem::take(&mut self.traces);
        traces.minus.resize(nx + 2, [0.0; N]);
        traces.plus.resize(nx + 2, [0.0; N]);
        for c in 0..nx + 2 {
            let (m, p) = self.cell_traces_1d(c as isize - 1)?;
            traces.minus[c] = m;
            traces.plus[c] = p;
        }
        let ctx = self.context(Direction::X);
        let mut fluxes = core::mem::take(&mut self.fluxes);
        fluxes.resize(nx + 1, [0.0; N]);
        for (f, flux) in fluxes.iter_mut().enumerate() {
            *flux = numerical_flux(
                self.scheme,
                &Conserved(traces.plus[f]),
                &Conserved(traces.minus[f + 1]),
                &ctx,
            )
            .map_err(|e| located(f as isize - 1, 0, e))?;
        }
        let inv = 1.0 / self.mesh.dx;
        for i in 0..nx {
            let o = &mut out[self.mesh.idx(i as isize, 0)];
            for k in 0..N {
                o[k] = -(fluxes[i + 1][k] - fluxes[i][k]) * inv;
            }
        }
        self.traces = traces;
        self.fluxes = fluxes;
        Ok(())
    }

    /// Gather the window normal to `dir` around cell `(i, j)`.
    #[inline]
    fn window_2d(&self, i: isize, j: isize, dir: Direction, window: &mut [[f64; N]]) -> usize {
        let h = self.spatial.half_window() as isize;
        let w = (2 * h + 1) as usize;
        for b in 0..w {
            for a in 0..w {
                let (da, db) = (a as isize - h, b as isize - h);
                let (ci, cj) = if dir == Direction::X {
                    (i + da, j + db)
                } else {
                    (i + db, j + da)
                };
                window[b * w + a] = self.scratch[self.mesh.idx(ci, cj)];
            }
        }
        w
    }

    fn cell_traces_2d(
        &self,
        i: isize,
        j: isize,
        dir: Direction,
        minus: &mut [[f64; N]],
        plus: &mut [[f64; N]],
    ) -> Result<()> {
        let mut window = [[0.0; N]; MAX_WINDOW * MAX_WINDOW];
        let w = self.window_2d(i, j, dir, &mut window);
        let res = match &self.spatial {
            Spatial::Weno(rec) => {
                // N is 4 whenever the mesh is 2D
                let win4: &[[f64; 4]] = as_four(&window[..w * w]);
                let (m4, p4) = (as_four_mut(minus), as_four_mut(plus));
                rec.traces_2d(win4, dir, &self.gas, m4, p4)
            }
            Spatial::Muscl => {
                let row = &window[w..2 * w];
                muscl_traces(row, dir, &self.gas).map(|(m, p)| {
                    minus[0] = m;
                    plus[0] = p;
                })
            }
        };
        res.map_err(|e| located(i, j, e))
    }

    /// Traces on x-faces: entry `(j·(nx+2) + i + 1)·nq + q` for cells
    /// `i = −1..=nx` of interior rows `j`.
    pub fn traces_x(&mut self, u: &[[f64; N]]) -> Result<FaceTraces<N>> {
        self.load(u)?;
        self.sweep_traces(Direction::X)
    }

    /// Traces on y-faces: entry `(i·(ny+2) + j + 1)·nq + q` for cells
    /// `j = −1..=ny` of interior columns `i`.
    pub fn traces_y(&mut self, u: &[[f64; N]]) -> Result<FaceTraces<N>> {
        self.load(u)?;
        self.sweep_traces(Direction::Y)
    }

    fn sweep_traces(&self, dir: Direction) -> Result<FaceTraces<N>> {
        let nq = self.spatial.face_points();
        let (n_line, n_along) = if dir == Direction::X {
            (self.mesh.ny, self.mesh.nx)
        } else {
            (self.mesh.nx, self.mesh.ny)
        };
        let mut t = FaceTraces {
            minus: vec![[0.0; N]; n_line * (n_along + 2) * nq],
            plus: vec![[0.0; N]; n_line * (n_along + 2) * nq],
        };
        for line in 0..n_line {
            for c in 0..n_along + 2 {
                let along = c as isize - 1;
                let (i, j) = if dir == Direction::X {
                    (along, line as isize)
                } else {
                    (line as isize, along)
                };
                let base = (line * (n_along + 2) + c) * nq;
                let (m, p) = (&mut t.minus[base..base + nq], &mut t.plus[base..base + nq]);
                self.cell_traces_2d(i, j, dir, m, p)?;
            }
        }
        Ok(t)
    }

    fn rhs_2d(&mut self, out: &mut [[f64; N]]) -> Result<()> {
        let nq = self.spatial.face_points();
        let weights: Vec<f64> = self.spatial.face_weights().to_vec();
        for dir in [Direction::X, Direction::Y] {
            let traces = self.sweep_traces(dir)?;
            let ctx = self.context(dir);
            let (n_line, n_along, h) = if dir == Direction::X {
                (self.mesh.ny, self.mesh.nx, self.mesh.dx)
            } else {
                (self.mesh.nx, self.mesh.ny, self.mesh.dy)
            };
            let inv = 1.0 / h;
            let mut face = vec![[0.0; N]; n_along + 1];
            for line in 0..n_line {
                for (f, avg) in face.iter_mut().enumerate() {
                    // face between along-cells f − 1 and f
                    let left = (line * (n_along + 2) + f) * nq;
                    let right = (line * (n_along + 2) + f + 1) * nq;
                    let mut acc = [0.0; N];
                    for q in 0..nq {
                        let fl = numerical_flux(
                            self.scheme,
                            &Conserved(traces.plus[left + q]),
                            &Conserved(traces.minus[right + q]),
                            &ctx,
                        )
                        .map_err(|e| {
                            let along = f as isize - 1;
                            if dir == Direction::X {
                                located(along, line as isize, e)
                            } else {
                                located(line as isize, along, e)
                            }
                        })?;
                        for k in 0..N {
                            acc[k] += weights[q] * fl[k];
                        }
                    }
                    *avg = acc;
                }
                for c in 0..n_along {
                    let (i, j) = if dir == Direction::X { (c, line) } else { (line, c) };
                    let o = &mut out[self.mesh.idx(i as isize, j as isize)];
                    for k in 0..N {
                        o[k] -= (face[c + 1][k] - face[c][k]) * inv;
                    }
                }
            }
        }
        Ok(())
    }
}

fn as_four<const N: usize>(s: &[[f64; N]]) -> &[[f64; 4]] {
    assert_eq!(N, 4);
    // SAFETY: N == 4, so both element types have identical layout
    unsafe { core::slice::from_raw_parts(s.as_ptr() as *const [f64; 4], s.len()) }
}

fn as_four_mut<const N: usize>(s: &mut [[f64; N]]) -> &mut [[f64; 4]] {
    assert_eq!(N, 4);
    // SAFETY: N == 4, so both element types have identical layout
    unsafe { core::slice::from_raw_parts_mut(s.as_mut_ptr() as *mut [f64; 4], s.len()) }
}

impl Spatial {
    pub fn weno(order: usize, mode: VariableMode) -> Result<Self> {
        let cfg = crate::weno::WenoConfig::for_order(order, mode)?;
        Ok(Spatial::Weno(Reconstructor::new(cfg)?))
    }
}
