//! Ideal-gas Euler physics.
//!
//! Conserved vectors are `[f64; N]` with `N = 3` in one space dimension
//! (`ρ, ρu, E`) and `N = 4` in two (`ρ, ρu, ρv, E`). The y-momentum slot does
//! not exist in 1D; accessors return zero for it.

use crate::math::sqrt;
use crate::{Error, Result};

/// Conserved cell state. `N` must be 3 (1D) or 4 (2D).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conserved<const N: usize>(pub [f64; N]);

pub type Conserved1 = Conserved<3>;
pub type Conserved2 = Conserved<4>;

impl<const N: usize> Conserved<N> {
    pub const ENERGY: usize = N - 1;

    #[inline]
    pub fn rho(&self) -> f64 {
        self.0[0]
    }

    #[inline]
    pub fn mx(&self) -> f64 {
        self.0[1]
    }

    #[inline]
    pub fn my(&self) -> f64 {
        if N == 4 {
            self.0[2]
        } else {
            0.0
        }
    }

    #[inline]
    pub fn energy(&self) -> f64 {
        self.0[N - 1]
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

/// Primitive state. `v` is ignored (and reported as zero) in 1D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl Primitive {
    pub const fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Primitive { rho, u, v, p }
    }

    /// 1D state, transverse velocity zero.
    pub const fn new_1d(rho: f64, u: f64, p: f64) -> Self {
        Primitive { rho, u, v: 0.0, p }
    }

    #[inline]
    pub fn is_valid(&self) -> bool {
        self.rho > 0.0 && self.p > 0.0 && self.rho.is_finite() && self.p.is_finite()
    }

    #[inline]
    pub(crate) fn check(self) -> Result<Self> {
        if self.is_valid() && self.u.is_finite() && self.v.is_finite() {
            Ok(self)
        } else {
            Err(Error::InvalidState {
                rho: self.rho,
                pressure: self.p,
            })
        }
    }
}

/// Unit direction `n = (n1, n2)`. In 1D only `n2 = 0` is meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub n1: f64,
    pub n2: f64,
}

impl Direction {
    pub const X: Direction = Direction { n1: 1.0, n2: 0.0 };
    pub const Y: Direction = Direction { n1: 0.0, n2: 1.0 };

    pub fn new(n1: f64, n2: f64) -> Result<Self> {
        let norm = sqrt(n1 * n1 + n2 * n2);
        if !((norm - 1.0).abs() <= 1e-12) {
            return Err(Error::config("direction must be a unit vector"));
        }
        Ok(Direction { n1, n2 })
    }

    pub fn reversed(self) -> Self {
        Direction {
            n1: -self.n1,
            n2: -self.n2,
        }
    }

    /// Express a conserved vector in the (normal, tangential) frame.
    #[inline]
    pub fn to_normal<const N: usize>(self, u: &[f64; N]) -> [f64; N] {
        let mut out = *u;
        if N == 4 {
            out[1] = self.n1 * u[1] + self.n2 * u[2];
            out[2] = -self.n2 * u[1] + self.n1 * u[2];
        } else {
            out[1] = self.n1 * u[1];
        }
        out
    }

    /// Inverse of [`Direction::to_normal`].
    #[inline]
    pub fn from_normal<const N: usize>(self, w: &[f64; N]) -> [f64; N] {
        let mut out = *w;
        if N == 4 {
            out[1] = self.n1 * w[1] - self.n2 * w[2];
            out[2] = self.n2 * w[1] + self.n1 * w[2];
        } else {
            out[1] = self.n1 * w[1];
        }
        out
    }
}

/// Eigenvalues and eigenvector matrices of the normal flux Jacobian.
///
/// Columns of `right` are ordered `(v_n − c, v_n entropy, [v_n shear], v_n + c)`
/// and `left` is its inverse.
#[derive(Debug, Clone, Copy)]
pub struct Eigensystem<const N: usize> {
    pub eigenvalues: [f64; N],
    pub right: [[f64; N]; N],
    pub left: [[f64; N]; N],
}

impl<const N: usize> Eigensystem<N> {
    /// `L · u`
    #[inline]
    pub fn project(&self, u: &[f64; N]) -> [f64; N] {
        mat_vec(&self.left, u)
    }

    /// `R · w`
    #[inline]
    pub fn unproject(&self, w: &[f64; N]) -> [f64; N] {
        mat_vec(&self.right, w)
    }
}

#[inline]
pub(crate) fn mat_vec<const N: usize>(m: &[[f64; N]; N], x: &[f64; N]) -> [f64; N] {
    let mut out = [0.0; N];
    for (o, row) in out.iter_mut().zip(m) {
        let mut acc = 0.0;
        for (a, b) in row.iter().zip(x) {
            acc += a * b;
        }
        *o = acc;
    }
    out
}

/// Ideal gas with adiabatic index `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    pub gamma: f64,
}

impl Default for GasModel {
    fn default() -> Self {
        GasModel { gamma: 1.4 }
    }
}

impl GasModel {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma > 1.0 && gamma.is_finite() {
            Ok(GasModel { gamma })
        } else {
            Err(Error::config("gamma must exceed 1"))
        }
    }

    pub fn primitive_to_conserved<const N: usize>(&self, prim: Primitive) -> Result<Conserved<N>> {
        let prim = prim.check()?;
        let mut out = [0.0; N];
        out[0] = prim.rho;
        out[1] = prim.rho * prim.u;
        let kinetic = if N == 4 {
            out[2] = prim.rho * prim.v;
            prim.u * prim.u + prim.v * prim.v
        } else {
            prim.u * prim.u
        };
        out[N - 1] = prim.p / (self.gamma - 1.0) + 0.5 * prim.rho * kinetic;
        Ok(Conserved(out))
    }

    pub fn conserved_to_primitive<const N: usize>(&self, cons: &Conserved<N>) -> Result<Primitive> {
        let rho = cons.rho();
        let u = cons.mx() / rho;
        let v = cons.my() / rho;
        let p = (self.gamma - 1.0) * (cons.energy() - 0.5 * rho * (u * u + v * v));
        Primitive { rho, u, v, p }.check()
    }

    /// Pressure without the positivity check.
    #[inline]
    pub fn pressure<const N: usize>(&self, cons: &Conserved<N>) -> f64 {
        let rho = cons.rho();
        let m2 = cons.mx() * cons.mx() + cons.my() * cons.my();
        (self.gamma - 1.0) * (cons.energy() - 0.5 * m2 / rho)
    }

    #[inline]
    pub fn sound_speed(&self, prim: &Primitive) -> Result<f64> {
        let prim = prim.check()?;
        Ok(sqrt(self.gamma * prim.p / prim.rho))
    }

    /// x-direction flux of an already validated state in the normal frame.
    #[inline]
    pub(crate) fn flux_x<const N: usize>(&self, u: &[f64; N], prim: &Primitive) -> [f64; N] {
        let mut f = [0.0; N];
        f[0] = u[1];
        f[1] = u[1] * prim.u + prim.p;
        if N == 4 {
            f[2] = u[2] * prim.u;
        }
        f[N - 1] = (u[N - 1] + prim.p) * prim.u;
        f
    }

    /// `n1·f(u) + n2·g(u)`.
    pub fn physical_flux<const N: usize>(&self, cons: &Conserved<N>, dir: Direction) -> Result<[f64; N]> {
        let w = dir.to_normal(&cons.0);
        let prim = self.conserved_to_primitive(&Conserved(w))?;
        Ok(dir.from_normal(&self.flux_x(&w, &prim)))
    }

    /// Direct per-axis signal speeds `|u| + c`, `|v| + c`.
    pub fn max_signal_speed<const N: usize>(&self, cons: &Conserved<N>) -> Result<(f64, f64)> {
        let prim = self.conserved_to_primitive(cons)?;
        let c = sqrt(self.gamma * prim.p / prim.rho);
        Ok((prim.u.abs() + c, prim.v.abs() + c))
    }

    pub fn eigensystem<const N: usize>(&self, cons: &Conserved<N>, dir: Direction) -> Result<Eigensystem<N>> {
        let w = dir.to_normal(&cons.0);
        let prim = self.conserved_to_primitive(&Conserved(w))?;
        let mut es = self.eigensystem_x::<N>(&prim);
        if dir != Direction::X {
            // R_n = T⁻¹ R_x and L_n = L_x T, T being the frame rotation.
            for col in 0..N {
                let mut c = [0.0; N];
                for row in 0..N {
                    c[row] = es.right[row][col];
                }
                let c = dir.from_normal(&c);
                for row in 0..N {
                    es.right[row][col] = c[row];
                }
            }
            for row in es.left.iter_mut() {
                // (L T)_{r,·} = T^T applied to the row, which is `to_normal` transposed.
                *row = rotate_row(dir, row);
            }
        }
        Ok(es)
    }

    /// Eigenstructure of the x-flux Jacobian at a valid primitive state.
    pub(crate) fn eigensystem_x<const N: usize>(&self, prim: &Primitive) -> Eigensystem<N> {
        let g1 = self.gamma - 1.0;
        let c = sqrt(self.gamma * prim.p / prim.rho);
        let u = prim.u;
        let v = if N == 4 { prim.v } else { 0.0 };
        let q2 = u * u + v * v;
        let h = c * c / g1 + 0.5 * q2;
        let b1 = g1 / (c * c);
        let b2 = 0.5 * b1 * q2;
        let mut right = [[0.0; N]; N];
        let mut left = [[0.0; N]; N];
        let mut lam = [0.0; N];
        let e = N - 1;
        // acoustic (u - c)
        lam[0] = u - c;
        right[0][0] = 1.0;
        right[1][0] = u - c;
        right[e][0] = h - u * c;
        left[0][0] = 0.5 * (b2 + u / c);
        left[0][1] = -0.5 * (b1 * u + 1.0 / c);
        left[0][e] = 0.5 * b1;
        // entropy
        lam[1] = u;
        right[0][1] = 1.0;
        right[1][1] = u;
        right[e][1] = 0.5 * q2;
        left[1][0] = 1.0 - b2;
        left[1][1] = b1 * u;
        left[1][e] = -b1;
        // acoustic (u + c)
        lam[e] = u + c;
        right[0][e] = 1.0;
        right[1][e] = u + c;
        right[e][e] = h + u * c;
        left[e][0] = 0.5 * (b2 - u / c);
        left[e][1] = -0.5 * (b1 * u - 1.0 / c);
        left[e][e] = 0.5 * b1;
        if N == 4 {
            right[2][0] = v;
            right[2][1] = v;
            right[2][3] = v;
            left[0][2] = -0.5 * b1 * v;
            left[1][2] = b1 * v;
            left[3][2] = -0.5 * b1 * v;
            // shear
            lam[2] = u;
            right[2][2] = 1.0;
            right[3][2] = v;
            left[2][0] = -v;
            left[2][2] = 1.0;
        }
        Eigensystem {
            eigenvalues: lam,
            right,
            left,
        }
    }
}

/// Row vector times the frame rotation `T` (`to_normal` as a matrix).
#[inline]
fn rotate_row<const N: usize>(dir: Direction, row: &[f64; N]) -> [f64; N] {
    let mut out = *row;
    if N == 4 {
        out[1] = row[1] * dir.n1 - row[2] * dir.n2;
        out[2] = row[1] * dir.n2 + row[2] * dir.n1;
    } else {
        out[1] = row[1] * dir.n1;
    }
    out
}
