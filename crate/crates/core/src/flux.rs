//! Interface fluxes.
//!
//! Every scheme evaluates the flux in the frame of the face normal and
//! rotates the result back, so x- and y-faces share one code path.

use core::fmt;
use core::str::FromStr;

use crate::euler::{Conserved, Direction, GasModel, Primitive};
use crate::math::{minmod, sqrt};
use crate::riemann::{self, RiemannStates};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FluxScheme {
    LaxFriedrichs,
    Force,
    Rusanov,
    Hll,
    CentralUpwind,
    LowDissipationCentralUpwind,
    Hllc,
    Exact,
}

impl FluxScheme {
    pub const ALL: [FluxScheme; 8] = [
        FluxScheme::LaxFriedrichs,
        FluxScheme::Force,
        FluxScheme::Rusanov,
        FluxScheme::Hll,
        FluxScheme::CentralUpwind,
        FluxScheme::LowDissipationCentralUpwind,
        FluxScheme::Hllc,
        FluxScheme::Exact,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            FluxScheme::LaxFriedrichs => "lxf",
            FluxScheme::Force => "force",
            FluxScheme::Rusanov => "rus",
            FluxScheme::Hll => "hll",
            FluxScheme::CentralUpwind => "cu",
            FluxScheme::LowDissipationCentralUpwind => "ldcu",
            FluxScheme::Hllc => "hllc",
            FluxScheme::Exact => "exact",
        }
    }

    /// Centred schemes need the mesh ratio Δx/Δt.
    pub const fn needs_mesh_ratio(self) -> bool {
        matches!(self, FluxScheme::LaxFriedrichs | FluxScheme::Force)
    }
}

impl fmt::Display for FluxScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FluxScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FluxScheme::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::config(alloc::format!(
                    "unknown flux '{s}' (expected one of lxf, force, rus, hll, cu, ldcu, hllc, exact)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxContext {
    /// Δx/Δt for x-faces, Δy/Δt for y-faces.
    pub dx_over_dt: Option<f64>,
    pub gas: GasModel,
    pub direction: Direction,
}

impl FluxContext {
    pub fn new(gas: GasModel, direction: Direction) -> Self {
        FluxContext {
            dx_over_dt: None,
            gas,
            direction,
        }
    }

    pub fn with_mesh_ratio(self, dx_over_dt: f64) -> Self {
        FluxContext {
            dx_over_dt: Some(dx_over_dt),
            ..self
        }
    }

    fn ratio(&self) -> Result<f64> {
        match self.dx_over_dt {
            Some(r) if r > 0.0 && r.is_finite() => Ok(r),
            Some(_) => Err(Error::config("mesh ratio must be positive")),
            None => Err(Error::config("centred flux requires the mesh ratio dx/dt")),
        }
    }
}

/// A state rotated into the face frame together with what every scheme needs.
struct Side<const N: usize> {
    w: [f64; N],
    prim: Primitive,
    f: [f64; N],
}

impl<const N: usize> Side<N> {
    #[inline]
    fn new(u: &Conserved<N>, ctx: &FluxContext) -> Result<Self> {
        let w = ctx.direction.to_normal(&u.0);
        let prim = ctx.gas.conserved_to_primitive(&Conserved(w))?;
        let f = ctx.gas.flux_x(&w, &prim);
        Ok(Side { w, prim, f })
    }
}

#[inline]
fn combine<const N: usize>(a: &[f64; N], b: &[f64; N], op: impl Fn(f64, f64) -> f64) -> [f64; N] {
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = op(a[k], b[k]);
    }
    out
}

/// Numerical flux across a face with normal `ctx.direction`.
pub fn numerical_flux<const N: usize>(
    scheme: FluxScheme,
    ul: &Conserved<N>,
    ur: &Conserved<N>,
    ctx: &FluxContext,
) -> Result<[f64; N]> {
    let l = Side::new(ul, ctx)?;
    let r = Side::new(ur, ctx)?;
    let fx = match scheme {
        FluxScheme::LaxFriedrichs => lxf(&l, &r, ctx.ratio()?),
        FluxScheme::Force => force(&l, &r, ctx.ratio()?, &ctx.gas)?,
        FluxScheme::Rusanov => rusanov(&l, &r, &ctx.gas),
        FluxScheme::Hll => {
            let b = riemann::speed_bounds_rigorous(&states(&l, &r), &ctx.gas)?;
            hll(&l, &r, b.s_left, b.s_right)
        }
        FluxScheme::CentralUpwind => {
            let b = riemann::speed_bounds_davis(&states(&l, &r), &ctx.gas)?;
            central_upwind(&l, &r, b.s_left, b.s_right, false)
        }
        FluxScheme::LowDissipationCentralUpwind => {
            let b = riemann::speed_bounds_davis(&states(&l, &r), &ctx.gas)?;
            central_upwind(&l, &r, b.s_left, b.s_right, true)
        }
        FluxScheme::Hllc => {
            let b = riemann::speed_bounds_rigorous(&states(&l, &r), &ctx.gas)?;
            hllc(&l, &r, b.s_left, b.s_right)
        }
        FluxScheme::Exact => {
            let s = states(&l, &r);
            let prim = riemann::exact_state(&s, 0.0, &ctx.gas)?;
            let w: Conserved<N> = ctx.gas.primitive_to_conserved(prim)?;
            ctx.gas.flux_x(&w.0, &prim)
        }
    };
    Ok(ctx.direction.from_normal(&fx))
}

/// HLL with caller-supplied speed estimates.
pub fn hll_with_bounds<const N: usize>(
    ul: &Conserved<N>,
    ur: &Conserved<N>,
    ctx: &FluxContext,
    s_left: f64,
    s_right: f64,
) -> Result<[f64; N]> {
    let l = Side::new(ul, ctx)?;
    let r = Side::new(ur, ctx)?;
    Ok(ctx.direction.from_normal(&hll(&l, &r, s_left, s_right)))
}

fn states<const N: usize>(l: &Side<N>, r: &Side<N>) -> RiemannStates {
    RiemannStates::new(l.prim, r.prim)
}

fn lxf<const N: usize>(l: &Side<N>, r: &Side<N>, ratio: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = 0.5 * (l.f[k] + r.f[k]) - 0.5 * ratio * (r.w[k] - l.w[k]);
    }
    out
}

fn force<const N: usize>(l: &Side<N>, r: &Side<N>, ratio: f64, gas: &GasModel) -> Result<[f64; N]> {
    let mut star = [0.0; N];
    for k in 0..N {
        star[k] = 0.5 * (l.w[k] + r.w[k]) - 0.5 / ratio * (r.f[k] - l.f[k]);
    }
    let prim = gas.conserved_to_primitive(&Conserved(star))?;
    let richtmyer = gas.flux_x(&star, &prim);
    let lf = lxf(l, r, ratio);
    Ok(combine(&lf, &richtmyer, |a, b| 0.5 * (a + b)))
}

fn rusanov<const N: usize>(l: &Side<N>, r: &Side<N>, gas: &GasModel) -> [f64; N] {
    let cl = sqrt(gas.gamma * l.prim.p / l.prim.rho);
    let cr = sqrt(gas.gamma * r.prim.p / r.prim.rho);
    let s = (l.prim.u.abs() + cl).max(r.prim.u.abs() + cr);
    lxf(l, r, s)
}

fn hll<const N: usize>(l: &Side<N>, r: &Side<N>, sl: f64, sr: f64) -> [f64; N] {
    if 0.0 <= sl {
        l.f
    } else if sr <= 0.0 {
        r.f
    } else {
        let inv = 1.0 / (sr - sl);
        let mut out = [0.0; N];
        for k in 0..N {
            out[k] = (sr * l.f[k] - sl * r.f[k] + sl * sr * (r.w[k] - l.w[k])) * inv;
        }
        out
    }
}

fn central_upwind<const N: usize>(l: &Side<N>, r: &Side<N>, sl: f64, sr: f64, low_dissipation: bool) -> [f64; N] {
    let al = sl.min(0.0);
    let ar = sr.max(0.0);
    let width = ar - al;
    if !(width > 0.0) {
        return combine(&l.f, &r.f, |a, b| 0.5 * (a + b));
    }
    let inv = 1.0 / width;
    let mut jump = combine(&r.w, &l.w, |a, b| a - b);
    if low_dissipation {
        for k in 0..N {
            let star = (ar * r.w[k] - al * l.w[k] - (r.f[k] - l.f[k])) * inv;
            jump[k] -= minmod(r.w[k] - star, star - l.w[k]);
        }
    }
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = (ar * l.f[k] - al * r.f[k] + al * ar * jump[k]) * inv;
    }
    out
}

fn hllc<const N: usize>(l: &Side<N>, r: &Side<N>, sl: f64, sr: f64) -> [f64; N] {
    if 0.0 <= sl {
        return l.f;
    }
    if sr <= 0.0 {
        return r.f;
    }
    let (pl, pr) = (&l.prim, &r.prim);
    let ml = pl.rho * (sl - pl.u);
    let mr = pr.rho * (sr - pr.u);
    let den = ml - mr;
    if !(den.abs() > 1e-300) {
        return hll(l, r, sl, sr);
    }
    let s_star = (pr.p - pl.p + pl.u * ml - pr.u * mr) / den;
    let (side, s) = if s_star >= 0.0 { (l, sl) } else { (r, sr) };
    let prim = &side.prim;
    let factor = (s - prim.u) / (s - s_star);
    let e = side.w[N - 1];
    let mut star = [0.0; N];
    star[0] = prim.rho * factor;
    star[1] = prim.rho * factor * s_star;
    if N == 4 {
        star[2] = prim.rho * factor * prim.v;
    }
    star[N - 1] = factor * (e + prim.rho * (s_star - prim.u) * (s_star + prim.p / (prim.rho * (s - prim.u))));
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = side.f[k] + s * (star[k] - side.w[k]);
    }
    out
}
