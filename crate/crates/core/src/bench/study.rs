use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::cases::{CaseSpec, ExactKind};
use crate::euler::{Conserved, GasModel, Primitive};
use crate::fv::{cell_averages, run, Mesh, RunOutput, SolverConfig};
use crate::math::{log2, sqrt};
use crate::riemann::{sample, solve_star};
use crate::{Error, Result};

/// Final field of a 1D or 2D run.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    D1(RunOutput<3>),
    D2(RunOutput<4>),
}

impl Solution {
    pub fn mesh(&self) -> &Mesh {
        match self {
            Solution::D1(o) => &o.mesh,
            Solution::D2(o) => &o.mesh,
        }
    }

    pub fn steps(&self) -> usize {
        match self {
            Solution::D1(o) => o.steps,
            Solution::D2(o) => o.steps,
        }
    }

    pub fn time(&self) -> f64 {
        match self {
            Solution::D1(o) => o.time,
            Solution::D2(o) => o.time,
        }
    }

    pub fn density(&self) -> Vec<f64> {
        match self {
            Solution::D1(o) => o.field.iter().map(|u| u[0]).collect(),
            Solution::D2(o) => o.field.iter().map(|u| u[0]).collect(),
        }
    }

    pub fn primitives(&self, gas: &GasModel) -> Result<Vec<Primitive>> {
        match self {
            Solution::D1(o) => o.primitives(gas),
            Solution::D2(o) => o.primitives(gas),
        }
    }

    /// Sum of `ū · |C|` per conserved component.
    pub fn totals(&self) -> Vec<f64> {
        fn sum<const N: usize>(o: &RunOutput<N>) -> Vec<f64> {
            let v = o.mesh.cell_volume();
            (0..N).map(|k| o.field.iter().map(|u| u[k] * v).sum()).collect()
        }
        match self {
            Solution::D1(o) => sum(o),
            Solution::D2(o) => sum(o),
        }
    }
}

/// Run a case on an `n` (or `n × n`) mesh.
pub fn run_case(case: &CaseSpec, config: &SolverConfig, n: usize) -> Result<Solution> {
    let mesh = case.mesh(n)?;
    let ic = |x: f64, y: f64| case.initial(x, y);
    if case.dim == 1 {
        run::<3, _>(mesh, case.boundary, config, ic).map(Solution::D1)
    } else {
        run::<4, _>(mesh, case.boundary, config, ic).map(Solution::D2)
    }
}

/// Second-order MUSCL, exact-flux, SSPRK2 solution on a fine mesh.
pub fn reference_run(case: &CaseSpec, n: usize) -> Result<Solution> {
    let cfl = if case.dim == 1 { 0.5 } else { 0.25 };
    run_case(case, &SolverConfig::muscl(cfl, case.t_final), n)
}

/// Exact cell averages at time `t` by tensor Gauss–Legendre quadrature.
pub fn exact_averages<const N: usize>(
    case: &CaseSpec,
    mesh: &Mesh,
    points: usize,
    t: f64,
    gas: &GasModel,
) -> Result<Vec<[f64; N]>> {
    let to_cons = |p: Primitive| gas.primitive_to_conserved::<N>(p).map(|c| c.0);
    match case.riemann_data() {
        Some((states, x_d)) if t > 0.0 => {
            let star = solve_star(&states, gas)?;
            cell_averages(mesh, points, |x, _| to_cons(sample(&states, &star, (x - x_d) / t, gas)))
        }
        _ => cell_averages(mesh, points, |x, y| to_cons(case.exact_solution(x, y, t)?)),
    }
}

/// Discrete norms of the cell-average error, one entry per conserved component.
#[derive(Debug, Clone, PartialEq)]
pub struct Norms {
    pub l1: Vec<f64>,
    pub l2: Vec<f64>,
    pub linf: Vec<f64>,
}

impl Norms {
    /// `(L1, L2, L∞)` of component `k`.
    pub fn component(&self, k: usize) -> [f64; 3] {
        [self.l1[k], self.l2[k], self.linf[k]]
    }
}

/// `L1 = Σ|C||e|`, `L2 = √(Σ|C|e²)`, `L∞ = max|e|`.
pub fn error_norms<const N: usize>(mesh: &Mesh, field: &[[f64; N]], exact: &[[f64; N]]) -> Result<Norms> {
    if field.len() != exact.len() || field.len() != mesh.cells() {
        return Err(Error::Internal(format!(
            "field sizes {} and {} do not match {} cells",
            field.len(),
            exact.len(),
            mesh.cells()
        )));
    }
    let vol = mesh.cell_volume();
    let mut n = Norms {
        l1: alloc::vec![0.0; N],
        l2: alloc::vec![0.0; N],
        linf: alloc::vec![0.0; N],
    };
    for (u, v) in field.iter().zip(exact) {
        for k in 0..N {
            let e = (u[k] - v[k]).abs();
            n.l1[k] += vol * e;
            n.l2[k] += vol * e * e;
            n.linf[k] = n.linf[k].max(e);
        }
    }
    for x in &mut n.l2 {
        *x = sqrt(*x);
    }
    Ok(n)
}

/// One refinement level of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub n: usize,
    /// `None` when the run crashed.
    pub norms: Option<Norms>,
    pub crash: Option<String>,
    /// Wall time in seconds, filled in by callers that measure it.
    pub runtime: Option<f64>,
    pub steps: usize,
}

impl ErrorReport {
    pub fn crashed(&self) -> bool {
        self.crash.is_some()
    }
}

/// Run a case at one resolution and measure its error against the exact
/// solution. Crashes become data; configuration errors are returned.
pub fn measure(case: &CaseSpec, config: &SolverConfig, n: usize) -> Result<ErrorReport> {
    if case.exact == ExactKind::ReferenceRun {
        return Err(Error::Unavailable(format!(
            "case '{}' has no exact solution for error measurement",
            case.id
        )));
    }
    let solution = match run_case(case, config, n) {
        Ok(s) => s,
        Err(e) if e.is_crash() => {
            return Ok(ErrorReport {
                n,
                norms: None,
                crash: Some(e.to_string()),
                runtime: None,
                steps: 0,
            })
        }
        Err(e) => return Err(e),
    };
    let points = config.init_points();
    let norms = match &solution {
        Solution::D1(o) => error_norms(
            &o.mesh,
            &o.field,
            &exact_averages::<3>(case, &o.mesh, points, o.time, &config.gas)?,
        )?,
        Solution::D2(o) => error_norms(
            &o.mesh,
            &o.field,
            &exact_averages::<4>(case, &o.mesh, points, o.time, &config.gas)?,
        )?,
    };
    Ok(ErrorReport {
        n,
        norms: Some(norms),
        crash: None,
        runtime: None,
        steps: solution.steps(),
    })
}

/// `log(e_coarse / e_fine) / log(n_fine / n_coarse)`, i.e. `log₂` of the
/// error ratio under doubling.
pub fn observed_order(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> f64 {
    log2(e_coarse / e_fine) / log2(n_fine as f64 / n_coarse as f64)
}

/// Error reports with observed density orders `(L1, L2, L∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub reports: Vec<ErrorReport>,
    /// `orders[k]` relates level `k` to level `k − 1`; `None` for the
    /// first level and next to crashed levels.
    pub orders: Vec<Option<[f64; 3]>>,
}

impl ConvergenceTable {
    pub fn from_reports(reports: Vec<ErrorReport>) -> Self {
        let mut orders = Vec::with_capacity(reports.len());
        for k in 0..reports.len() {
            let o = if k == 0 {
                None
            } else {
                match (&reports[k - 1].norms, &reports[k].norms) {
                    (Some(a), Some(b)) => {
                        let (ea, eb) = (a.component(0), b.component(0));
                        let (na, nb) = (reports[k - 1].n, reports[k].n);
                        Some([0, 1, 2].map(|m| observed_order(ea[m], eb[m], na, nb)))
                    }
                    _ => None,
                }
            };
            orders.push(o);
        }
        ConvergenceTable { reports, orders }
    }

    /// Density L1 order between the two finest levels.
    pub fn finest_l1_order(&self) -> Option<f64> {
        self.orders.last().copied().flatten().map(|o| o[0])
    }
}

/// Sequential convergence study over the listed resolutions.
pub fn convergence_study(case: &CaseSpec, config: &SolverConfig, ns: &[usize]) -> Result<ConvergenceTable> {
    let reports = ns
        .iter()
        .map(|&n| measure(case, config, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable::from_reports(reports))
}

/// Sample of a 2D field on the diagonal `y = x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicePoint {
    pub x: f64,
    pub y: f64,
    pub state: Primitive,
}

/// The `2N − 1` samples of a square `N × N` field along `y = x`: the
/// centres of the diagonal cells and the shared vertices between
/// consecutive diagonal cells, the latter averaging the four cells that
/// meet there.
pub fn diagonal_slice(mesh: &Mesh, field: &[[f64; 4]], gas: &GasModel) -> Result<Vec<SlicePoint>> {
    if mesh.dim != 2 || mesh.nx != mesh.ny || field.len() != mesh.cells() {
        return Err(Error::config("diagonal slices need a square 2D field"));
    }
    let n = mesh.nx;
    let at = |i: usize, j: usize| field[j * n + i];
    let mut out = Vec::with_capacity(2 * n - 1);
    for i in 0..n {
        let (x, y) = mesh.center(i, i);
        out.push(SlicePoint {
            x,
            y,
            state: gas.conserved_to_primitive(&Conserved(at(i, i)))?,
        });
        if i + 1 < n {
            let mut avg = [0.0; 4];
            for c in [at(i, i), at(i + 1, i), at(i, i + 1), at(i + 1, i + 1)] {
                for k in 0..4 {
                    avg[k] += 0.25 * c[k];
                }
            }
            out.push(SlicePoint {
                x: mesh.x.0 + (i + 1) as f64 * mesh.dx,
                y: mesh.y.0 + (i + 1) as f64 * mesh.dy,
                state: gas.conserved_to_primitive(&Conserved(avg))?,
            });
        }
    }
    Ok(out)
}

/// `∫ |ρ_a − ρ_b| dx` over the samples of `a`, with `b` linearly
/// interpolated in `x` and the integral taken by the trapezoidal rule.
pub fn slice_l1_distance(a: &[SlicePoint], b: &[SlicePoint]) -> f64 {
    let interp = |x: f64| -> f64 {
        let k = b.partition_point(|p| p.x < x);
        if k == 0 {
            return b[0].state.rho;
        }
        if k == b.len() {
            return b[b.len() - 1].state.rho;
        }
        let (p, q) = (&b[k - 1], &b[k]);
        let s = (x - p.x) / (q.x - p.x);
        p.state.rho + s * (q.state.rho - p.state.rho)
    };
    let diff: Vec<f64> = a.iter().map(|p| (p.state.rho - interp(p.x)).abs()).collect();
    a.windows(2)
        .zip(diff.windows(2))
        .map(|(p, d)| 0.5 * (p[1].x - p[0].x) * (d[0] + d[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::case;
    use crate::flux::FluxScheme;
    use crate::fv::initialize;
    use alloc::vec;

    const GAS: GasModel = GasModel { gamma: 1.4 };

    #[test]
    fn norms_of_exact_and_offset_fields() {
        let mesh = Mesh::new_1d((0.0, 1.0), 8).unwrap();
        let exact = vec![[1.0, 2.0, 3.0]; 8];
        let z = error_norms(&mesh, &exact, &exact).unwrap();
        assert_eq!(z.component(0), [0.0; 3]);
        let shifted: Vec<_> = exact.iter().map(|u| [u[0] + 0.01, u[1], u[2]]).collect();
        let n = error_norms(&mesh, &shifted, &exact).unwrap();
        for v in n.component(0) {
            assert!((v - 0.01).abs() < 1e-15);
        }
        assert!(error_norms(&mesh, &shifted[..7], &exact).is_err());
    }

    #[test]
    fn order_from_ratio() {
        assert!((observed_order(4e-2, 5e-3, 40, 80) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn table_orders_skip_crashes() {
        let ok = |n, e: f64| ErrorReport {
            n,
            norms: Some(Norms {
                l1: vec![e],
                l2: vec![e],
                linf: vec![e],
            }),
            crash: None,
            runtime: None,
            steps: 1,
        };
        let bad = ErrorReport {
            n: 40,
            norms: None,
            crash: Some("boom".into()),
            runtime: None,
            steps: 0,
        };
        let t = ConvergenceTable::from_reports(vec![ok(10, 1.0), ok(20, 0.25), bad, ok(80, 0.01)]);
        assert_eq!(t.orders[0], None);
        assert!((t.orders[1].unwrap()[0] - 2.0).abs() < 1e-12);
        assert_eq!(t.orders[2], None);
        assert_eq!(t.orders[3], None);
    }

    #[test]
    fn riemann_initial_field_is_exact_at_zero() {
        for id in ["rp1", "rp5", "rp6", "rp7"] {
            let c = case(id).unwrap();
            let mesh = c.mesh(100).unwrap();
            let init = initialize::<3, _>(&mesh, 3, &GAS, |x, y| c.initial(x, y)).unwrap();
            let ex = exact_averages::<3>(&c, &mesh, 3, 0.0, &GAS).unwrap();
            let n = error_norms(&mesh, &init, &ex).unwrap();
            assert_eq!(n.component(0), [0.0; 3], "{id}");
        }
    }

    #[test]
    fn uniform_reference_run_is_unchanged() {
        let mut c = case("explosion").unwrap();
        c.t_final = 0.05;
        let cfg = SolverConfig::muscl(0.25, c.t_final);
        let mesh = c.mesh(10).unwrap();
        let state = Primitive::new(1.0, 0.2, -0.1, 1.0);
        let out = run::<4, _>(mesh, c.boundary, &cfg, |_, _| state).unwrap();
        let u0 = GAS.primitive_to_conserved::<4>(state).unwrap().0;
        for u in &out.field {
            for k in 0..4 {
                assert!((u[k] - u0[k]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn explosion_has_no_error_measurement() {
        let c = case("explosion").unwrap();
        let cfg = SolverConfig::weno_dec(3, FluxScheme::Hll, 0.45, 0.25);
        assert!(matches!(measure(&c, &cfg, 10), Err(Error::Unavailable(_))));
    }

    #[test]
    fn slice_geometry() {
        let mesh = Mesh::new_2d((-1.0, 1.0), (-1.0, 1.0), 6, 6).unwrap();
        let u = GAS
            .primitive_to_conserved::<4>(Primitive::new(1.0, 0.0, 0.0, 1.0))
            .unwrap()
            .0;
        let s = diagonal_slice(&mesh, &vec![u; 36], &GAS).unwrap();
        assert_eq!(s.len(), 11);
        assert!(s.windows(2).all(|w| w[1].x > w[0].x && w[0].x == w[0].y));
        assert_eq!(slice_l1_distance(&s, &s), 0.0);
    }
}
