//! CSV emitters for profiles, field dumps and convergence tables.
//!
//! All numbers are written with 17 significant digits and every file uses
//! LF line endings, so identical runs produce identical bytes.

use std::fs::{self, File};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use csv::{Terminator, Writer, WriterBuilder};
use wenodec_core::bench::{diagonal_slice, CaseSpec, ConvergenceTable, SlicePoint, Solution};
use wenodec_core::GasModel;

pub const CONVERGENCE_HEADER: [&str; 9] = [
    "N", "L1", "order1", "L2", "order2", "Linf", "orderInf", "runtime", "crashed",
];

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn writer(path: &Path) -> Result<Writer<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).with_context(|| format!("cannot create directory {}", dir.display()))?;
        }
    }
    WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_path(path)
        .with_context(|| format!("cannot write {}", path.display()))
}

/// Write the final state of a run.
///
/// 1D runs produce `<stem>.csv` with `x, rho, u, p` and, when the case has
/// a pointwise exact solution, `rho_exact, u_exact, p_exact`. 2D runs
/// produce `<stem>_field.csv` (one row per cell, `j` outer) and
/// `<stem>_slice.csv` along `y = x`.
pub fn emit_profile(
    solution: &Solution,
    case: &CaseSpec,
    gas: &GasModel,
    dir: &Path,
    stem: &str,
) -> Result<Vec<PathBuf>> {
    let mesh = solution.mesh();
    let prims = solution.primitives(gas)?;
    match solution {
        Solution::D1(o) => {
            let path = dir.join(format!("{stem}.csv"));
            let exact: Option<Vec<_>> = (0..mesh.nx)
                .map(|i| case.exact_solution(mesh.center(i, 0).0, 0.0, o.time).ok())
                .collect();
            let mut w = writer(&path)?;
            let mut header = vec!["x", "rho", "u", "p"];
            if exact.is_some() {
                header.extend(["rho_exact", "u_exact", "p_exact"]);
            }
            w.write_record(&header)?;
            for (i, p) in prims.iter().enumerate() {
                let mut row = vec![num(mesh.center(i, 0).0), num(p.rho), num(p.u), num(p.p)];
                if let Some(e) = &exact {
                    row.extend([num(e[i].rho), num(e[i].u), num(e[i].p)]);
                }
                w.write_record(&row)?;
            }
            w.flush()?;
            Ok(vec![path])
        }
        Solution::D2(o) => {
            let field = dir.join(format!("{stem}_field.csv"));
            let mut w = writer(&field)?;
            w.write_record(["x", "y", "rho", "u", "v", "p"])?;
            for j in 0..mesh.ny {
                for i in 0..mesh.nx {
                    let (x, y) = mesh.center(i, j);
                    let p = &prims[j * mesh.nx + i];
                    w.write_record([num(x), num(y), num(p.rho), num(p.u), num(p.v), num(p.p)])?;
                }
            }
            w.flush()?;
            let slice = dir.join(format!("{stem}_slice.csv"));
            emit_slice(&diagonal_slice(mesh, &o.field, gas)?, &slice)?;
            Ok(vec![field, slice])
        }
    }
}

pub fn emit_slice(points: &[SlicePoint], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["x", "y", "rho", "u", "v", "p"])?;
    for s in points {
        w.write_record([
            num(s.x),
            num(s.y),
            num(s.state.rho),
            num(s.state.u),
            num(s.state.v),
            num(s.state.p),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Write one convergence table. Crashed levels keep their `N` and get
/// empty error and order fields; `runtime` is empty unless measured.
pub fn emit_convergence(table: &ConvergenceTable, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(CONVERGENCE_HEADER)?;
    for (report, order) in table.reports.iter().zip(&table.orders) {
        let errors = report.norms.as_ref().map(|n| n.component(0));
        let cell = |k: usize| errors.map(|e| num(e[k])).unwrap_or_default();
        let ord = |k: usize| order.map(|o| num(o[k])).unwrap_or_default();
        w.write_record([
            report.n.to_string(),
            cell(0),
            ord(0),
            cell(1),
            ord(1),
            cell(2),
            ord(2),
            report.runtime.map(num).unwrap_or_default(),
            report.crashed().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use wenodec_core::bench::{ErrorReport, Norms};

    fn report(n: usize, l1: Option<f64>) -> ErrorReport {
        ErrorReport {
            n,
            norms: l1.map(|e| Norms {
                l1: vec![e],
                l2: vec![e / 2.0],
                linf: vec![e * 2.0],
            }),
            crash: l1.is_none().then(|| "boom".to_string()),
            runtime: None,
            steps: 0,
        }
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(num(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn convergence_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let table =
            ConvergenceTable::from_reports(vec![report(10, Some(8e-3)), report(20, Some(1e-3)), report(40, None)]);
        emit_convergence(&table, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(!text.contains('\r'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "N,L1,order1,L2,order2,Linf,orderInf,runtime,crashed");
        assert_eq!(lines.len(), 4);
        let second: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(second[2].parse::<f64>().unwrap(), 3.0);
        assert_eq!(second[4].parse::<f64>().unwrap(), 3.0);
        assert_eq!(second[6].parse::<f64>().unwrap(), 3.0);
        assert_eq!(second[7], "");
        assert!(lines[1].split(',').nth(2).unwrap().is_empty());
        assert_eq!(lines[3], "40,,,,,,,,true");
    }
}
