//! WENO reconstruction of orders `2r − 1` from cell averages.
//!
//! Tables are generated at start-up from the primitive-function
//! interpolation: on unit cells, the reconstruction at `ξ` from a stencil is
//! the derivative at `ξ` of the polynomial interpolating the running sum of
//! the averages at the stencil interfaces. Stencil `ℓ = 0` is the most
//! left-biased one.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::euler::{Conserved, Direction, Eigensystem, GasModel};
use crate::linalg::{self, Matrix};
use crate::quadrature;
use crate::{Error, Result};

pub const MAX_R: usize = 4;
pub const MAX_WINDOW: usize = 2 * MAX_R - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariableMode {
    Characteristic,
    Conserved,
}

impl VariableMode {
    pub const fn name(self) -> &'static str {
        match self {
            VariableMode::Characteristic => "characteristic",
            VariableMode::Conserved => "conserved",
        }
    }
}

impl fmt::Display for VariableMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VariableMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "characteristic" | "char" => Ok(VariableMode::Characteristic),
            "conserved" | "cons" => Ok(VariableMode::Conserved),
            _ => Err(Error::config(alloc::format!(
                "unknown variable mode '{s}' (expected characteristic or conserved)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoConfig {
    pub r: usize,
    pub epsilon: f64,
    pub mode: VariableMode,
}

impl WenoConfig {
    /// Configuration for odd order `2r − 1`; order 1 is the piecewise-constant
    /// reconstruction.
    pub fn for_order(order: usize, mode: VariableMode) -> Result<Self> {
        if !matches!(order, 1 | 3 | 5 | 7) {
            return Err(Error::config(alloc::format!(
                "unsupported reconstruction order {order} (expected 1, 3, 5 or 7)"
            )));
        }
        Ok(WenoConfig {
            r: (order + 1) / 2,
            epsilon: 1e-6,
            mode,
        })
    }

    pub fn order(&self) -> usize {
        2 * self.r - 1
    }

    pub fn window(&self) -> usize {
        2 * self.r - 1
    }

    /// Transverse Gauss–Legendre points per face in 2D.
    pub fn face_points(&self) -> usize {
        match self.r {
            1 => 1,
            2 => 2,
            _ => 4,
        }
    }
}

/// Coefficients for one evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointTable {
    pub xi: f64,
    /// Linear weights `d_ℓ`.
    pub linear_weights: [f64; MAX_R],
    /// `coefficients[ℓ][k]` multiplies the average of cell `ℓ + k − (r − 1)`.
    pub coefficients: [[f64; MAX_R]; MAX_R],
    /// Big-stencil row over the full window.
    pub big: [f64; MAX_WINDOW],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionTable {
    pub r: usize,
    pub points: Vec<PointTable>,
    /// `smoothness[ℓ]` is the quadratic form giving `β_ℓ` from the stencil data.
    pub smoothness: [[[f64; MAX_R]; MAX_R]; MAX_R],
}

/// Reconstruction coefficients at `xi` for the cells at `offsets`.
///
/// Cell `s + i` gets `Σ_{j > i} φ_j'(ξ)` where `φ_j` are the Lagrange basis
/// polynomials on the interfaces `s − 1/2 + j`.
fn stencil_row(first: isize, len: usize, xi: f64) -> Vec<f64> {
    let nodes: Vec<f64> = (0..=len).map(|j| first as f64 - 0.5 + j as f64).collect();
    let dphi: Vec<f64> = (0..=len)
        .map(|j| {
            let mut sum = 0.0;
            for m in 0..=len {
                if m == j {
                    continue;
                }
                let mut prod = 1.0 / (nodes[j] - nodes[m]);
                for l in 0..=len {
                    if l != j && l != m {
                        prod *= (xi - nodes[l]) / (nodes[j] - nodes[l]);
                    }
                }
                sum += prod;
            }
            sum
        })
        .collect();
    (0..len).map(|i| dphi[i + 1..].iter().sum()).collect()
}

/// Smoothness quadratic form of a stencil of `r` unit cells starting at `first`.
fn smoothness_form(first: isize, r: usize) -> Result<[[f64; MAX_R]; MAX_R]> {
    let mut out = [[0.0; MAX_R]; MAX_R];
    if r < 2 {
        return Ok(out);
    }
    // V maps monomial coefficients to cell averages
    let mut v = Matrix::zeros(r, r);
    for i in 0..r {
        let o = (first + i as isize) as f64;
        for m in 0..r {
            let e = (m + 1) as i32;
            let val = (crate::math::powi(o + 0.5, e) - crate::math::powi(o - 0.5, e)) / e as f64;
            v.set(i, m, val);
        }
    }
    let a = v.inverse()?;
    let moment = |p: usize| {
        let e = (p + 1) as i32;
        (crate::math::powi(0.5, e) - crate::math::powi(-0.5, e)) / e as f64
    };
    let falling = |m: usize, k: usize| -> f64 { ((m - k + 1)..=m).map(|x| x as f64).product() };
    let mut b = Matrix::zeros(r, r);
    for m in 0..r {
        for n in 0..r {
            let mut acc = 0.0;
            for k in 1..r {
                if k <= m && k <= n {
                    acc += falling(m, k) * falling(n, k) * moment(m + n - 2 * k);
                }
            }
            b.set(m, n, acc);
        }
    }
    let s = a.transpose().mul(&b).mul(&a);
    for i in 0..r {
        for j in 0..r {
            out[i][j] = 0.5 * (s.get(i, j) + s.get(j, i));
        }
    }
    Ok(out)
}

/// Build coefficient, linear-weight and smoothness tables for `r` at the
/// given points of the reference cell `[−1/2, 1/2]`.
pub fn build_table(r: usize, points: &[f64]) -> Result<ReconstructionTable> {
    if !(1..=MAX_R).contains(&r) {
        return Err(Error::config(alloc::format!("stencil width r = {r} not in 1..=4")));
    }
    let w = 2 * r - 1;
    let left = -(r as isize - 1);
    let mut smoothness = [[[0.0; MAX_R]; MAX_R]; MAX_R];
    for (l, form) in smoothness.iter_mut().enumerate().take(r) {
        *form = smoothness_form(left + l as isize, r)?;
    }
    let mut tables = Vec::with_capacity(points.len());
    for &xi in points {
        if !(-0.5..=0.5).contains(&xi) {
            return Err(Error::config("evaluation point outside the reference cell"));
        }
        let big_row = stencil_row(left, w, xi);
        let mut coefficients = [[0.0; MAX_R]; MAX_R];
        for (l, row) in coefficients.iter_mut().enumerate().take(r) {
            let c = stencil_row(left + l as isize, r, xi);
            row[..r].copy_from_slice(&c);
        }
        let mut sys = Matrix::zeros(w, r);
        for l in 0..r {
            for k in 0..r {
                sys.set(l + k, l, coefficients[l][k]);
            }
        }
        let d = linalg::solve(&sys, &big_row)?;
        let mut linear_weights = [0.0; MAX_R];
        for (l, dl) in d.iter().enumerate() {
            if *dl < 0.0 {
                return Err(Error::Internal(alloc::format!(
                    "negative linear weight {dl} for r = {r} at point {xi}"
                )));
            }
            linear_weights[l] = *dl;
        }
        let mut big = [0.0; MAX_WINDOW];
        big[..w].copy_from_slice(&big_row);
        tables.push(PointTable {
            xi,
            linear_weights,
            coefficients,
            big,
        });
    }
    Ok(ReconstructionTable {
        r,
        points: tables,
        smoothness,
    })
}

impl ReconstructionTable {
    pub fn window(&self) -> usize {
        2 * self.r - 1
    }

    pub fn smoothness_indicators(&self, window: &[f64]) -> [f64; MAX_R] {
        debug_assert_eq!(window.len(), self.window());
        let r = self.r;
        let mut beta = [0.0; MAX_R];
        for (l, b) in beta.iter_mut().enumerate().take(r) {
            let form = &self.smoothness[l];
            let data = &window[l..l + r];
            let mut acc = 0.0;
            for i in 0..r {
                let mut row = 0.0;
                for j in 0..r {
                    row += form[i][j] * data[j];
                }
                acc += data[i] * row;
            }
            *b = acc.max(0.0);
        }
        beta
    }

    pub fn nonlinear_weights(&self, beta: &[f64; MAX_R], point: usize, epsilon: f64) -> [f64; MAX_R] {
        let d = &self.points[point].linear_weights;
        let mut alpha = [0.0; MAX_R];
        let mut total = 0.0;
        for l in 0..self.r {
            let t = beta[l] + epsilon;
            alpha[l] = d[l] / (t * t);
            total += alpha[l];
        }
        for a in alpha.iter_mut().take(self.r) {
            *a /= total;
        }
        alpha
    }

    /// Low-order values `q_ℓ(ξ)` of each small stencil.
    #[inline]
    pub fn stencil_values(&self, window: &[f64], point: usize) -> [f64; MAX_R] {
        let r = self.r;
        let c = &self.points[point].coefficients;
        let mut out = [0.0; MAX_R];
        for l in 0..r {
            let mut acc = 0.0;
            for k in 0..r {
                acc += c[l][k] * window[l + k];
            }
            out[l] = acc;
        }
        out
    }

    pub fn reconstruct_point(&self, window: &[f64], point: usize, epsilon: f64) -> f64 {
        let beta = self.smoothness_indicators(window);
        self.reconstruct_with(window, &beta, point, epsilon)
    }

    #[inline]
    fn reconstruct_with(&self, window: &[f64], beta: &[f64; MAX_R], point: usize, epsilon: f64) -> f64 {
        if self.r == 1 {
            return window[0];
        }
        let omega = self.nonlinear_weights(beta, point, epsilon);
        let q = self.stencil_values(window, point);
        let mut acc = 0.0;
        for l in 0..self.r {
            acc += omega[l] * q[l];
        }
        acc
    }

    /// Reconstruct at every table point, sharing the smoothness indicators.
    pub fn reconstruct_all(&self, window: &[f64], epsilon: f64, out: &mut [f64]) {
        let beta = self.smoothness_indicators(window);
        for (p, o) in out.iter_mut().enumerate().take(self.points.len()) {
            *o = self.reconstruct_with(window, &beta, p, epsilon);
        }
    }
}

/// Per-cell reconstruction of face traces for systems.
#[derive(Debug, Clone)]
pub struct Reconstructor {
    pub config: WenoConfig,
    /// Points `−1/2` and `+1/2`.
    pub edges: ReconstructionTable,
    /// Gauss–Legendre points on the reference face.
    pub transverse: ReconstructionTable,
    pub face_weights: Vec<f64>,
}

impl Reconstructor {
    pub fn new(config: WenoConfig) -> Result<Self> {
        if !(config.epsilon > 0.0) {
            return Err(Error::config("WENO epsilon must be positive"));
        }
        let edges = build_table(config.r, &[-0.5, 0.5])?;
        let rule = quadrature::gauss_legendre(config.face_points(), -0.5, 0.5);
        let transverse = build_table(config.r, &rule.nodes)?;
        Ok(Reconstructor {
            config,
            edges,
            transverse,
            face_weights: rule.weights,
        })
    }

    pub fn window(&self) -> usize {
        self.config.window()
    }

    pub fn face_points(&self) -> usize {
        self.face_weights.len()
    }

    /// Face-normal traces `(at −1/2, at +1/2)` of the centre cell of a 1D window.
    pub fn traces_1d<const N: usize>(&self, window: &[[f64; N]], gas: &GasModel) -> Result<([f64; N], [f64; N])> {
        let w = self.window();
        debug_assert_eq!(window.len(), w);
        let centre = window[self.config.r - 1];
        let es = match self.config.mode {
            VariableMode::Characteristic if self.config.r > 1 => {
                Some(gas.eigensystem(&Conserved(centre), Direction::X)?)
            }
            _ => None,
        };
        let mut scalar = [0.0; MAX_WINDOW];
        let mut minus = [0.0; N];
        let mut plus = [0.0; N];
        let mut projected = [[0.0; N]; MAX_WINDOW];
        for (p, u) in projected.iter_mut().zip(window) {
            *p = match &es {
                Some(es) => es.project(u),
                None => *u,
            };
        }
        let mut out = [0.0; 2];
        for k in 0..N {
            for i in 0..w {
                scalar[i] = projected[i][k];
            }
            self.edges.reconstruct_all(&scalar[..w], self.config.epsilon, &mut out);
            minus[k] = out[0];
            plus[k] = out[1];
        }
        if let Some(es) = &es {
            minus = es.unproject(&minus);
            plus = es.unproject(&plus);
        }
        Ok((minus, plus))
    }

    /// Traces at the face quadrature points of the two faces normal to `dir`.
    ///
    /// `window[b * w + a]` holds the cell at offset `a − (r−1)` along `dir`
    /// and `b − (r−1)` along the transverse axis, with the transverse axis
    /// oriented like the remaining coordinate. Outputs are ordered by
    /// ascending transverse coordinate.
    pub fn traces_2d(
        &self,
        window: &[[f64; 4]],
        dir: Direction,
        gas: &GasModel,
        minus: &mut [[f64; 4]],
        plus: &mut [[f64; 4]],
    ) -> Result<()> {
        let w = self.window();
        let r = self.config.r;
        let nq = self.face_points();
        debug_assert_eq!(window.len(), w * w);
        let centre = Conserved(window[(r - 1) * w + r - 1]);
        let transverse_dir = if dir == Direction::X {
            Direction::Y
        } else {
            Direction::X
        };
        let (es1, es2): (Option<Eigensystem<4>>, Option<Eigensystem<4>>) = match self.config.mode {
            VariableMode::Characteristic if r > 1 => (
                Some(gas.eigensystem(&centre, dir)?),
                Some(gas.eigensystem(&centre, transverse_dir)?),
            ),
            _ => (None, None),
        };
        let eps = self.config.epsilon;
        let mut projected = [[0.0; 4]; MAX_WINDOW * MAX_WINDOW];
        for (p, u) in projected.iter_mut().zip(window) {
            *p = match &es1 {
                Some(es) => es.project(u),
                None => *u,
            };
        }
        // first sweep: line averages on both faces for every transverse row
        let mut line_minus = [[0.0; 4]; MAX_WINDOW];
        let mut line_plus = [[0.0; 4]; MAX_WINDOW];
        let mut scalar = [0.0; MAX_WINDOW];
        let mut out = [0.0; 4];
        for b in 0..w {
            for k in 0..4 {
                for a in 0..w {
                    scalar[a] = projected[b * w + a][k];
                }
                self.edges.reconstruct_all(&scalar[..w], eps, &mut out[..2]);
                line_minus[b][k] = out[0];
                line_plus[b][k] = out[1];
            }
        }
        if let (Some(e1), Some(e2)) = (&es1, &es2) {
            for b in 0..w {
                line_minus[b] = e2.project(&e1.unproject(&line_minus[b]));
                line_plus[b] = e2.project(&e1.unproject(&line_plus[b]));
            }
        }
        // second sweep: point values along the face
        for (lines, dest) in [(&line_minus, &mut *minus), (&line_plus, &mut *plus)] {
            for k in 0..4 {
                for b in 0..w {
                    scalar[b] = lines[b][k];
                }
                self.transverse.reconstruct_all(&scalar[..w], eps, &mut out[..nq]);
                for q in 0..nq {
                    dest[q][k] = out[q];
                }
            }
            if let Some(e2) = &es2 {
                for d in dest.iter_mut().take(nq) {
                    *d = e2.unproject(d);
                }
            }
        }
        Ok(())
    }
}

/// Convenience for tests and tools: coefficient rows as nested vectors.
pub fn coefficient_rows(table: &ReconstructionTable, point: usize) -> Vec<Vec<f64>> {
    let r = table.r;
    (0..r)
        .map(|l| table.points[point].coefficients[l][..r].to_vec())
        .collect()
}
