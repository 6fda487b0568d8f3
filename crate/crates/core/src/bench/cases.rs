use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::euler::{GasModel, Primitive};
use crate::fv::{Boundary, BoundaryRule, Mesh};
use crate::math::{exp, floor, pow, sin};
use crate::riemann::{exact_state, RiemannStates};
use crate::{Error, Result};

/// How a case's error is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactKind {
    Analytic,
    RiemannExact,
    ReferenceRun,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Initial {
    Advection,
    Riemann {
        left: Primitive,
        right: Primitive,
        x_d: f64,
    },
    ShockTurbulence,
    Vortex {
        beta: f64,
    },
    Explosion,
}

/// A benchmark problem with its default parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec {
    pub id: &'static str,
    pub dim: usize,
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub boundary: BoundaryRule,
    pub t_final: f64,
    pub cfl: f64,
    pub default_n: usize,
    pub exact: ExactKind,
    initial: Initial,
}

/// Identifiers of the catalog, `rp6-long` being the long-time variant of `rp6`.
pub const CASE_IDS: [&str; 10] = [
    "advection",
    "rp1",
    "rp5",
    "rp6",
    "rp6-long",
    "rp7",
    "shock-turbulence",
    "vortex",
    "long-vortex",
    "explosion",
];

const SHOCK_TURBULENCE_LEFT: Primitive = Primitive::new_1d(1.515695, 0.523346, 1.805);

fn riemann_case(id: &'static str, left: (f64, f64, f64), right: (f64, f64, f64), x_d: f64, t_final: f64) -> CaseSpec {
    CaseSpec {
        id,
        dim: 1,
        x: (0.0, 1.0),
        y: (0.0, 1.0),
        boundary: BoundaryRule::uniform(Boundary::Transmissive),
        t_final,
        cfl: 0.95,
        default_n: 100,
        exact: ExactKind::RiemannExact,
        initial: Initial::Riemann {
            left: Primitive::new_1d(left.0, left.1, left.2),
            right: Primitive::new_1d(right.0, right.1, right.2),
            x_d,
        },
    }
}

fn vortex_case(id: &'static str, half: f64, t_final: f64, default_n: usize) -> CaseSpec {
    CaseSpec {
        id,
        dim: 2,
        x: (-half, half),
        y: (-half, half),
        boundary: BoundaryRule::uniform(Boundary::Periodic),
        t_final,
        cfl: 0.45,
        default_n,
        exact: ExactKind::Analytic,
        initial: Initial::Vortex { beta: 5.0 },
    }
}

/// Look a case up by identifier.
pub fn case(id: &str) -> Result<CaseSpec> {
    let spec = match id {
        "advection" => CaseSpec {
            id: "advection",
            dim: 1,
            x: (-1.0, 1.0),
            y: (0.0, 1.0),
            boundary: BoundaryRule::uniform(Boundary::Periodic),
            t_final: 2.0,
            cfl: 0.95,
            default_n: 160,
            exact: ExactKind::Analytic,
            initial: Initial::Advection,
        },
        "rp1" => riemann_case("rp1", (1.0, 0.75, 1.0), (0.125, 0.0, 0.1), 0.3, 0.2),
        "rp5" => riemann_case("rp5", (1.0, -19.59745, 1000.0), (1.0, -19.59745, 0.01), 0.8, 0.012),
        "rp6" => riemann_case("rp6", (1.4, 0.0, 1.0), (1.0, 0.0, 1.0), 0.5, 2.0),
        "rp6-long" => CaseSpec {
            id: "rp6-long",
            t_final: 5000.0,
            ..riemann_case("rp6", (1.4, 0.0, 1.0), (1.0, 0.0, 1.0), 0.5, 2.0)
        },
        "rp7" => riemann_case("rp7", (1.4, 0.1, 1.0), (1.0, 0.1, 1.0), 0.5, 2.0),
        "shock-turbulence" => CaseSpec {
            id: "shock-turbulence",
            dim: 1,
            x: (-5.0, 5.0),
            y: (0.0, 1.0),
            boundary: BoundaryRule {
                left: Boundary::Inflow(SHOCK_TURBULENCE_LEFT),
                ..BoundaryRule::uniform(Boundary::Transmissive)
            },
            t_final: 5.0,
            cfl: 0.95,
            default_n: 1000,
            exact: ExactKind::ReferenceRun,
            initial: Initial::ShockTurbulence,
        },
        "vortex" => vortex_case("vortex", 10.0, 0.1, 160),
        "long-vortex" => vortex_case("long-vortex", 5.0, 100.0, 50),
        "explosion" => CaseSpec {
            id: "explosion",
            dim: 2,
            x: (-1.0, 1.0),
            y: (-1.0, 1.0),
            boundary: BoundaryRule::uniform(Boundary::Transmissive),
            t_final: 0.25,
            cfl: 0.45,
            default_n: 50,
            exact: ExactKind::ReferenceRun,
            initial: Initial::Explosion,
        },
        other => {
            return Err(Error::config(format!(
                "unknown case '{other}' (expected one of {})",
                CASE_IDS.join(", ")
            )))
        }
    };
    Ok(spec)
}

/// Every case of the catalog.
pub fn case_catalog() -> Vec<CaseSpec> {
    CASE_IDS
        .iter()
        .map(|id| case(id).expect("catalog ids resolve"))
        .collect()
}

impl CaseSpec {
    /// Default final time for a given order; only the long-time vortex
    /// depends on it.
    pub fn default_t_final(&self, order: usize) -> f64 {
        match (self.id, order) {
            ("long-vortex", 5) => 400.0,
            ("long-vortex", 7) => 1600.0,
            _ => self.t_final,
        }
    }

    /// Riemann data and discontinuity position for Riemann problems.
    pub fn riemann_data(&self) -> Option<(RiemannStates, f64)> {
        match self.initial {
            Initial::Riemann { left, right, x_d } => Some((RiemannStates::new(left, right), x_d)),
            _ => None,
        }
    }

    /// Uniform mesh with `n` cells per direction.
    pub fn mesh(&self, n: usize) -> Result<Mesh> {
        if self.dim == 1 {
            Mesh::new_1d(self.x, n)
        } else {
            Mesh::new_2d(self.x, self.y, n, n)
        }
    }

    pub fn initial(&self, x: f64, y: f64) -> Primitive {
        match self.initial {
            Initial::Advection => Primitive::new_1d(2.0 + pow(sin(PI * x), 4.0), 1.0, 1.0),
            Initial::Riemann { left, right, x_d } => {
                if x < x_d {
                    left
                } else {
                    right
                }
            }
            Initial::ShockTurbulence => {
                if x < -4.5 {
                    SHOCK_TURBULENCE_LEFT
                } else {
                    Primitive::new_1d(1.0 + 0.1 * sin(20.0 * PI * x), 0.0, 1.0)
                }
            }
            Initial::Vortex { beta } => vortex(x, y, beta, &GasModel::default()),
            Initial::Explosion => {
                if x * x + y * y < 0.16 {
                    Primitive::new(1.0, 0.0, 0.0, 1.0)
                } else {
                    Primitive::new(0.125, 0.0, 0.0, 0.1)
                }
            }
        }
    }

    /// Pointwise exact solution.
    pub fn exact_solution(&self, x: f64, y: f64, t: f64) -> Result<Primitive> {
        match self.initial {
            Initial::Advection => {
                let x0 = wrap(x - t, self.x);
                Ok(self.initial(x0, y))
            }
            Initial::Riemann { left, right, x_d } => {
                if t <= 0.0 {
                    return Ok(self.initial(x, y));
                }
                exact_state(&RiemannStates::new(left, right), (x - x_d) / t, &GasModel::default())
            }
            Initial::Vortex { .. } => Ok(self.initial(wrap(x - t, self.x), wrap(y - t, self.y))),
            Initial::ShockTurbulence | Initial::Explosion => Err(Error::Unavailable(format!(
                "case '{}' has no exact solution; compare against a reference run",
                self.id
            ))),
        }
    }
}

fn wrap(x: f64, (a, b): (f64, f64)) -> f64 {
    let l = b - a;
    let s = x - a;
    a + (s - l * floor(s / l))
}

fn vortex(x: f64, y: f64, beta: f64, gas: &GasModel) -> Primitive {
    let g = gas.gamma;
    let r2 = x * x + y * y;
    let dt = -(g - 1.0) * beta * beta / (8.0 * g * PI * PI) * exp(1.0 - r2);
    let temp = 1.0 + dt;
    let rho = pow(temp, 1.0 / (g - 1.0));
    let p = pow(temp, g / (g - 1.0));
    let amp = beta / (2.0 * PI) * exp(0.5 * (1.0 - r2));
    Primitive::new(rho, 1.0 - amp * y, 1.0 + amp * x, p)
}
