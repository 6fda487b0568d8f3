//! Semidiscrete finite-volume solver on uniform Cartesian meshes.

mod mesh;
mod rhs;

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::dec::{DecIntegrator, Ssprk2};
use crate::euler::{Conserved, GasModel, Primitive};
use crate::flux::FluxScheme;
use crate::weno::VariableMode;
use crate::{Error, Result};

pub use mesh::{cell_averages, fill_ghosts, first_invalid, initialize, pad, unpad, Boundary, BoundaryRule, Mesh};
pub use rhs::{FaceTraces, SemiDiscrete, Spatial};

/// Space-time discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// WENO of order `P` with bDeC of order `P`.
    WenoDec,
    /// Minmod-limited MUSCL with SSPRK2; `order` is ignored.
    MusclSsprk2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub order: usize,
    pub method: Method,
    pub scheme: FluxScheme,
    pub mode: VariableMode,
    pub cfl: f64,
    pub t_final: f64,
    pub gas: GasModel,
}

impl SolverConfig {
    pub fn weno_dec(order: usize, scheme: FluxScheme, cfl: f64, t_final: f64) -> Self {
        SolverConfig {
            order,
            method: Method::WenoDec,
            scheme,
            mode: VariableMode::Characteristic,
            cfl,
            t_final,
            gas: GasModel::default(),
        }
    }

    pub fn muscl(cfl: f64, t_final: f64) -> Self {
        SolverConfig {
            order: 2,
            method: Method::MusclSsprk2,
            scheme: FluxScheme::Exact,
            mode: VariableMode::Characteristic,
            cfl,
            t_final,
            gas: GasModel::default(),
        }
    }

    pub fn spatial(&self) -> Result<Spatial> {
        match self.method {
            Method::WenoDec => Spatial::weno(self.order, self.mode),
            Method::MusclSsprk2 => Ok(Spatial::Muscl),
        }
    }

    /// Gauss–Legendre points per direction used for initial cell averages.
    pub fn init_points(&self) -> usize {
        match self.method {
            Method::WenoDec => self.order.div_ceil(2).max(1),
            Method::MusclSsprk2 => 2,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0) || !self.cfl.is_finite() {
            return Err(Error::config("CFL number must be positive"));
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::config("final time must be nonnegative"));
        }
        Ok(())
    }
}

/// Final interior field of a run, row-major `j * nx + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput<const N: usize> {
    pub mesh: Mesh,
    pub field: Vec<[f64; N]>,
    pub steps: usize,
    pub time: f64,
}

impl<const N: usize> RunOutput<N> {
    pub fn primitives(&self, gas: &GasModel) -> Result<Vec<Primitive>> {
        self.field
            .iter()
            .map(|u| gas.conserved_to_primitive(&Conserved(*u)))
            .collect()
    }
}

/// Time step `C min(Δx / max sˣ, Δy / max sʸ)` clamped so that `t + Δt ≤ T_f`.
pub fn compute_dt<const N: usize>(
    mesh: &Mesh,
    gas: &GasModel,
    interior: &[[f64; N]],
    cfl: f64,
    t: f64,
    t_final: f64,
) -> Result<f64> {
    let (mut sx, mut sy) = (0.0f64, 0.0f64);
    for (c, u) in interior.iter().enumerate() {
        let (a, b) = gas.max_signal_speed(&Conserved(*u)).map_err(|e| Error::Crash {
            step: 0,
            time: t,
            i: (c % mesh.nx) as isize,
            j: (c / mesh.nx) as isize,
            cause: Box::new(e),
        })?;
        sx = sx.max(a);
        sy = sy.max(b);
    }
    let mut dt = if sx > 0.0 { mesh.dx / sx } else { f64::INFINITY };
    if mesh.dim == 2 && sy > 0.0 {
        dt = dt.min(mesh.dy / sy);
    }
    dt *= cfl;
    let remaining = t_final - t;
    if !(dt < remaining) {
        dt = remaining;
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Crash {
            step: 0,
            time: t,
            i: -1,
            j: -1,
            cause: Box::new(Error::Internal(alloc::format!("nonpositive time step {dt}"))),
        });
    }
    Ok(dt)
}

enum Stepper {
    Dec(DecIntegrator),
    Ssprk2(Ssprk2),
}

fn stamp(e: Error, step: usize, time: f64) -> Error {
    match e {
        Error::Crash { i, j, cause, .. } => Error::Crash {
            step,
            time,
            i,
            j,
            cause,
        },
        other if other.is_crash() => Error::Crash {
            step,
            time,
            i: -1,
            j: -1,
            cause: Box::new(other),
        },
        other => other,
    }
}

/// Initialize cell averages from a primitive initial condition and run.
pub fn run<const N: usize, F>(
    mesh: Mesh,
    boundary: BoundaryRule,
    config: &SolverConfig,
    initial: F,
) -> Result<RunOutput<N>>
where
    F: Fn(f64, f64) -> Primitive,
{
    let field = initialize::<N, _>(&mesh, config.init_points(), &config.gas, initial)?;
    run_from(mesh, boundary, config, field)
}

/// Advance given interior cell averages from `t = 0` to `T_f`.
///
/// Crashes are returned as [`Error::Crash`] with the failing step and time.
pub fn run_from<const N: usize>(
    mesh: Mesh,
    boundary: BoundaryRule,
    config: &SolverConfig,
    field: Vec<[f64; N]>,
) -> Result<RunOutput<N>> {
    config.validate()?;
    let spatial = config.spatial()?;
    let mesh = mesh.with_ghost(spatial.ghost_width());
    if field.len() != mesh.cells() {
        return Err(Error::config("initial field does not match the mesh"));
    }
    let mut sd = SemiDiscrete::<N>::new(mesh, boundary, config.gas, config.scheme, spatial)?;
    let mut stepper = match config.method {
        Method::WenoDec => Stepper::Dec(DecIntegrator::new(config.order)?),
        Method::MusclSsprk2 => Stepper::Ssprk2(Ssprk2::new()),
    };
    let mut u = pad(&mesh, &field);
    let mut interior = field;
    let mut t = 0.0;
    let mut steps = 0;
    while t < config.t_final {
        let dt =
            compute_dt(&mesh, &config.gas, &interior, config.cfl, t, config.t_final).map_err(|e| stamp(e, steps, t))?;
        sd.mesh_ratio = Some((mesh.dx / dt, mesh.dy / dt));
        let rhs = |_t: f64, x: &[f64], out: &mut [f64]| sd.eval(x, out);
        let flat = u.as_flattened_mut();
        match &mut stepper {
            Stepper::Dec(d) => d.step(t, dt, flat, rhs),
            Stepper::Ssprk2(s) => s.step(t, dt, flat, rhs),
        }
        .map_err(|e| stamp(e, steps, t))?;
        steps += 1;
        t = if t + dt >= config.t_final {
            config.t_final
        } else {
            t + dt
        };
        interior = unpad(&mesh, &u);
        if let Some((i, j, e)) = first_invalid(&mesh, &config.gas, &u) {
            return Err(Error::Crash {
                step: steps,
                time: t,
                i: i as isize,
                j: j as isize,
                cause: Box::new(e),
            });
        }
    }
    Ok(RunOutput {
        mesh,
        field: interior,
        steps,
        time: t,
    })
}
