//! Deferred-correction time integration on Gauss–Lobatto subtimenodes.

use alloc::vec;
use alloc::vec::Vec;

use crate::quadrature;
use crate::{Error, Result};

/// Subtimenodes and integration weights for order `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecTableau {
    pub order: usize,
    /// `β^m` for `m = 0..=M`.
    pub beta: Vec<f64>,
    /// `theta[m − 1][ℓ] = ∫₀^{β^m} φ_ℓ` for `m = 1..=M`.
    pub theta: Vec<Vec<f64>>,
}

impl DecTableau {
    pub fn new(order: usize) -> Result<Self> {
        if !(1..=8).contains(&order) {
            return Err(Error::config(alloc::format!(
                "unsupported DeC order {order} (expected 1..=8)"
            )));
        }
        let m = order.div_ceil(2);
        let beta = quadrature::gauss_lobatto(m + 1, 0.0, 1.0).nodes;
        // Gauss–Legendre with M+1 points integrates the degree-M basis exactly
        let mut theta = Vec::with_capacity(m);
        for &b in &beta[1..] {
            let rule = quadrature::gauss_legendre(m + 1, 0.0, b);
            let row: Vec<f64> = (0..=m).map(|l| rule.integrate(|t| lagrange(&beta, l, t))).collect();
            theta.push(row);
        }
        Ok(DecTableau { order, beta, theta })
    }

    pub fn subintervals(&self) -> usize {
        self.beta.len() - 1
    }

    /// Right-hand-side evaluations per step.
    pub fn stages(&self) -> usize {
        self.subintervals() * (self.order - 1) + 1
    }
}

fn lagrange(nodes: &[f64], l: usize, t: f64) -> f64 {
    let mut p = 1.0;
    for (j, &x) in nodes.iter().enumerate() {
        if j != l {
            p *= (t - x) / (nodes[l] - x);
        }
    }
    p
}

/// Scratch storage for [`DecIntegrator::step`].
#[derive(Debug, Clone)]
pub struct DecIntegrator {
    pub tableau: DecTableau,
    states: Vec<Vec<f64>>,
    rates: Vec<Vec<f64>>,
}

impl DecIntegrator {
    pub fn new(order: usize) -> Result<Self> {
        Ok(DecIntegrator {
            tableau: DecTableau::new(order)?,
            states: Vec::new(),
            rates: Vec::new(),
        })
    }

    /// Advance `u` by `dt` with `P` correction sweeps.
    ///
    /// The first sweep evaluates the right-hand side once, at `(t, u_n)`, and
    /// uses it for every subtimenode; later sweeps evaluate at each node's
    /// own time.
    pub fn step<F>(&mut self, t: f64, dt: f64, u: &mut [f64], mut rhs: F) -> Result<()>
    where
        F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    {
        let tab = &self.tableau;
        let m = tab.subintervals();
        let n = u.len();
        if self.states.len() != m + 1 || self.states[0].len() != n {
            self.states = vec![vec![0.0; n]; m + 1];
            self.rates = vec![vec![0.0; n]; m + 1];
        }
        rhs(t, u, &mut self.rates[0])?;
        for l in 1..=m {
            let (head, tail) = self.rates.split_at_mut(l);
            tail[0].copy_from_slice(&head[0]);
        }
        for p in 1..=tab.order {
            let last = p == tab.order;
            let first_node = if last { m } else { 1 };
            for node in first_node..=m {
                let th = &tab.theta[node - 1];
                let dest = &mut self.states[node];
                dest.copy_from_slice(u);
                for (l, rate) in self.rates.iter().enumerate() {
                    let w = dt * th[l];
                    if w != 0.0 {
                        for (d, r) in dest.iter_mut().zip(rate) {
                            *d += w * r;
                        }
                    }
                }
            }
            if !last {
                for node in 1..=m {
                    rhs(t + tab.beta[node] * dt, &self.states[node], &mut self.rates[node])?;
                }
            }
        }
        u.copy_from_slice(&self.states[m]);
        Ok(())
    }
}

/// Two-stage strong-stability-preserving Runge–Kutta (Heun form).
#[derive(Debug, Clone, Default)]
pub struct Ssprk2 {
    stage: Vec<f64>,
    rate: Vec<f64>,
}

impl Ssprk2 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn step<F>(&mut self, t: f64, dt: f64, u: &mut [f64], mut rhs: F) -> Result<()>
    where
        F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    {
        let n = u.len();
        self.stage.resize(n, 0.0);
        self.rate.resize(n, 0.0);
        rhs(t, u, &mut self.rate)?;
        for ((s, x), r) in self.stage.iter_mut().zip(u.iter()).zip(&self.rate) {
            *s = x + dt * r;
        }
        rhs(t + dt, &self.stage, &mut self.rate)?;
        for ((x, s), r) in u.iter_mut().zip(&self.stage).zip(&self.rate) {
            *x = 0.5 * *x + 0.5 * (s + dt * r);
        }
        Ok(())
    }
}

/// One bDeC step of order `order` from scratch.
pub fn bdec_step<F>(tableau: &DecTableau, t: f64, dt: f64, u: &mut [f64], rhs: F) -> Result<()>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let mut integ = DecIntegrator {
        tableau: tableau.clone(),
        states: Vec::new(),
        rates: Vec::new(),
    };
    integ.step(t, dt, u, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{exp, log2, powi, sqrt};
    use proptest::prelude::*;

    #[test]
    fn small_tableaux() {
        let t = DecTableau::new(2).unwrap();
        assert_eq!(t.beta, [0.0, 1.0]);
        assert!((t.theta[0][0] - 0.5).abs() < 1e-15 && (t.theta[0][1] - 0.5).abs() < 1e-15);

        let t = DecTableau::new(3).unwrap();
        assert_eq!(t.beta, [0.0, 0.5, 1.0]);
        let want = [[5.0 / 24.0, 1.0 / 3.0, -1.0 / 24.0], [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]];
        for m in 0..2 {
            for l in 0..3 {
                assert!((t.theta[m][l] - want[m][l]).abs() < 1e-15);
            }
        }

        let t = DecTableau::new(7).unwrap();
        let s = sqrt(21.0);
        let want = [0.0, (7.0 - s) / 14.0, 0.5, (7.0 + s) / 14.0, 1.0];
        for (b, w) in t.beta.iter().zip(want) {
            assert!((b - w).abs() < 1e-15);
        }
        assert_eq!(t.stages(), 4 * 6 + 1);
        assert!(DecTableau::new(0).is_err() && DecTableau::new(9).is_err());
    }

    #[test]
    fn tableau_exactness() {
        for p in 1..=8 {
            let t = DecTableau::new(p).unwrap();
            let m = t.subintervals();
            for (row, &b) in t.theta.iter().zip(&t.beta[1..]) {
                let s: f64 = row.iter().sum();
                assert!((s - b).abs() <= 1e-14);
                for k in 0..=m as i32 {
                    let q: f64 = row.iter().zip(&t.beta).map(|(w, x)| w * powi(*x, k)).sum();
                    let exact = powi(b, k + 1) / (k + 1) as f64;
                    assert!((q - exact).abs() <= 1e-14, "P={p} k={k}");
                }
            }
        }
    }

    fn decay(p: usize, iterations: usize, steps: usize) -> f64 {
        let mut t = DecTableau::new(p).unwrap();
        t.order = iterations;
        let mut integ = DecIntegrator {
            tableau: t,
            states: Vec::new(),
            rates: Vec::new(),
        };
        let dt = 1.0 / steps as f64;
        let mut u = [1.0];
        for n in 0..steps {
            integ
                .step(n as f64 * dt, dt, &mut u, |_, x, out| {
                    out[0] = -x[0];
                    Ok(())
                })
                .unwrap();
        }
        (u[0] - exp(-1.0)).abs()
    }

    #[test]
    fn global_order() {
        for p in [3, 5, 7] {
            let errs: Vec<f64> = (0..4).map(|k| decay(p, p, 4 << k)).collect();
            for w in errs.windows(2) {
                let slope = log2(w[0] / w[1]);
                assert!(slope >= p as f64 - 0.2, "P={p}: {errs:?}");
            }
        }
    }

    #[test]
    fn truncated_iterations_lose_order() {
        // M = 4 for P = 7, so p sweeps reach order min(p, 8)
        for p in 1..=4 {
            let errs: Vec<f64> = (0..4).map(|k| decay(7, p, 8 << k)).collect();
            let slope = log2(errs[2] / errs[3]);
            assert!((slope - p as f64).abs() < 0.3, "p={p}: slope {slope}");
        }
    }

    #[test]
    fn local_order_on_growth() {
        let one = |dt: f64| {
            let tab = DecTableau::new(3).unwrap();
            let mut u = [1.0];
            bdec_step(&tab, 0.0, dt, &mut u, |_, x, o| {
                o[0] = x[0];
                Ok(())
            })
            .unwrap();
            (u[0] - exp(dt)).abs()
        };
        let slope = log2(one(0.1) / one(0.05));
        assert!((slope - 4.0).abs() < 0.2, "{slope}");
    }

    #[test]
    fn stage_count() {
        for p in [3, 5, 7] {
            let tab = DecTableau::new(p).unwrap();
            let mut calls = 0;
            let mut u = [1.0, 2.0];
            bdec_step(&tab, 0.0, 0.1, &mut u, |_, _, o| {
                calls += 1;
                o.fill(0.0);
                Ok(())
            })
            .unwrap();
            assert_eq!(calls, tab.stages());
        }
    }

    #[test]
    fn ssprk2_order() {
        let run = |steps: usize| {
            let mut s = Ssprk2::new();
            let dt = 1.0 / steps as f64;
            let mut u = [1.0];
            for n in 0..steps {
                s.step(n as f64 * dt, dt, &mut u, |_, x, o| {
                    o[0] = x[0];
                    Ok(())
                })
                .unwrap();
            }
            (u[0] - exp(1.0)).abs()
        };
        let slope = log2(run(40) / run(80));
        assert!((slope - 2.0).abs() < 0.1, "{slope}");
    }

    #[test]
    fn rhs_errors_propagate() {
        let tab = DecTableau::new(5).unwrap();
        let mut u = [1.0];
        let err = bdec_step(&tab, 0.0, 0.1, &mut u, |_, _, _| Err(Error::Internal("boom".into())));
        assert!(err.is_err());
    }

    proptest! {
        #[test]
        fn zero_and_constant_rhs(p in 1usize..=8, u0 in -10.0f64..10.0, c in -5.0f64..5.0, dt in 1e-3f64..1.0) {
            let tab = DecTableau::new(p).unwrap();
            let mut u = [u0];
            bdec_step(&tab, 0.0, dt, &mut u, |_, _, o| { o[0] = 0.0; Ok(()) }).unwrap();
            prop_assert_eq!(u[0], u0);
            bdec_step(&tab, 0.0, dt, &mut u, |_, _, o| { o[0] = c; Ok(()) }).unwrap();
            prop_assert!((u[0] - (u0 + c * dt)).abs() <= 1e-13 * (1.0 + u0.abs() + c.abs()));
            let mut s = Ssprk2::new();
            let mut v = [u0];
            s.step(0.0, dt, &mut v, |_, _, o| { o[0] = c; Ok(()) }).unwrap();
            prop_assert!((v[0] - (u0 + c * dt)).abs() <= 1e-13 * (1.0 + u0.abs() + c.abs()));
        }

        #[test]
        fn linear_change_of_variables(p in prop::sample::select(vec![3usize, 5, 7]),
                                      a in prop::array::uniform4(-1.0f64..1.0),
                                      t in prop::array::uniform4(-1.0f64..1.0),
                                      x0 in prop::array::uniform2(-1.0f64..1.0)) {
            let tmat = [[2.0 + t[0], t[1]], [t[2], 2.0 + t[3]]];
            let det = tmat[0][0] * tmat[1][1] - tmat[0][1] * tmat[1][0];
            let tinv = [[tmat[1][1] / det, -tmat[0][1] / det], [-tmat[1][0] / det, tmat[0][0] / det]];
            let mv = |m: &[[f64; 2]; 2], v: &[f64]| [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
            let amat = [[a[0], a[1]], [a[2], a[3]]];
            // B = T A T⁻¹
            let at = [mv(&amat, &[tinv[0][0], tinv[1][0]]), mv(&amat, &[tinv[0][1], tinv[1][1]])];
            let bcols = [mv(&tmat, &at[0]), mv(&tmat, &at[1])];
            let bmat = [[bcols[0][0], bcols[1][0]], [bcols[0][1], bcols[1][1]]];
            let tab = DecTableau::new(p).unwrap();
            let mut x = x0;
            bdec_step(&tab, 0.0, 0.3, &mut x, |_, v, o| { o.copy_from_slice(&mv(&amat, v)); Ok(()) }).unwrap();
            let mut y = mv(&tmat, &x0);
            bdec_step(&tab, 0.0, 0.3, &mut y, |_, v, o| { o.copy_from_slice(&mv(&bmat, v)); Ok(()) }).unwrap();
            let tx = mv(&tmat, &x);
            for k in 0..2 {
                prop_assert!((tx[k] - y[k]).abs() <= 1e-13);
            }
        }
    }
}
