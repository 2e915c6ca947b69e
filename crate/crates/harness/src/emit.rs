use std::io::Write;
use std::path::Path;

use bcow_core::bcow::BcowParams;
use bcow_core::bounds::KappaV;

use crate::config::{Cell, Mode};
use crate::run::{CellRecord, Row, RunRecord};

/// Columns shared by every mode. `cell` leads, `status` trails.
pub const SOLVE_COLUMNS: [&str; 11] = [
    "m",
    "k",
    "p",
    "h",
    "delta",
    "state_error",
    "success_probability",
    "g_measured",
    "oracle_deviation",
    "kappa_empirical",
    "leading_query_factor",
];

pub const BOUNDS_COLUMNS: [&str; 18] = [
    "family",
    "N",
    "k",
    "m",
    "p",
    "C_A",
    "kappa_V",
    "norm_C",
    "bound_norm_C",
    "kappa",
    "bound_kappa",
    "inv_norm",
    "bound_inv",
    "I1",
    "I1_bound",
    "I2",
    "I2_bound",
    "pass_all",
];

pub const AUTONOMIZE_COLUMNS: [&str; 11] = [
    "problem",
    "Ns",
    "m",
    "k",
    "p",
    "err_final",
    "err_reference_budget",
    "Pr",
    "C_A",
    "normA_m",
    "g",
];

pub const NA: &str = "NA";
pub const NON_DIAGONALIZABLE: &str = "non-diagonalizable";

/// Twelve significant digits; non-finite values print as `NA`.
pub fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        NA.to_string()
    }
}

pub fn header(mode: Mode) -> Vec<&'static str> {
    let body: &[&str] = match mode {
        Mode::Solve => &SOLVE_COLUMNS,
        Mode::Autonomize => &AUTONOMIZE_COLUMNS,
        _ => &BOUNDS_COLUMNS,
    };
    let mut h = vec!["cell"];
    h.extend_from_slice(body);
    h.push("status");
    h
}

fn grid(p: &BcowParams) -> [String; 3] {
    [p.m.to_string(), p.k.to_string(), p.p.to_string()]
}

fn row_fields(row: &Row) -> Vec<String> {
    match row {
        Row::Solve(r) => {
            let mut v = grid(&r.params).to_vec();
            v.extend([
                real(r.params.h),
                real(r.params.delta),
                real(r.state_error),
                real(r.success_probability),
                real(r.g_measured),
                real(r.oracle_deviation),
                r.kappa_empirical.map_or(NA.to_string(), real),
                real(r.leading_query_factor),
            ]);
            v
        }
        Row::Bounds(r) => {
            let [m, k, p] = grid(&r.params);
            vec![
                r.family.clone(),
                r.n.to_string(),
                k,
                m,
                p,
                real(r.c_a),
                match r.kappa_v {
                    KappaV::Finite(x) => real(x),
                    KappaV::NonDiagonalizable => NON_DIAGONALIZABLE.to_string(),
                },
                real(r.norm_c),
                real(r.bound_norm_c),
                real(r.kappa),
                real(r.bound_kappa),
                real(r.inv_norm),
                real(r.bound_inv),
                real(r.i1),
                real(r.i1_bound),
                real(r.i2),
                real(r.i2_bound),
                r.pass_all.to_string(),
            ]
        }
        Row::Autonomize(r) => {
            let mut v = vec![r.problem.clone(), r.n_s.to_string()];
            v.extend(grid(&r.params));
            v.extend([
                real(r.err_final),
                real(r.err_reference_budget),
                real(r.pr),
                real(r.c_a),
                real(r.norm_a_m),
                real(r.g),
            ]);
            v
        }
    }
}

/// Row for a cell that errored: its identifying columns, `NA` elsewhere.
fn error_fields(mode: Mode, cell: &Cell) -> Vec<String> {
    let width = header(mode).len() - 2;
    let mut v = vec![NA.to_string(); width];
    match cell {
        Cell::Bounds { family, k, m, .. } => {
            v[0] = family.clone();
            v[2] = k.to_string();
            if let Some(m) = m {
                v[3] = m.to_string();
            }
        }
        Cell::Autonomize { problem, n_s, .. } => {
            v[0] = problem.clone();
            v[1] = n_s.to_string();
        }
        Cell::Solve { problem } => {
            if let Some(m) = problem.m {
                v[0] = m.to_string();
            }
            if let Some(k) = problem.k {
                v[1] = k.to_string();
            }
        }
    }
    v
}

fn status(c: &CellRecord) -> String {
    match &c.outcome {
        Ok(row) => {
            let failed = row.failed_checks();
            if failed.is_empty() {
                "ok".into()
            } else {
                format!("fail:{}", failed.join("|"))
            }
        }
        Err(e) => format!("error:{e}"),
    }
}

/// Writes the record as CSV. Wall-clock times are deliberately left out so
/// the output is reproducible byte for byte.
pub fn write_csv<W: Write>(record: &RunRecord, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(record.mode))?;
    for c in &record.cells {
        let mut fields = vec![c.index.to_string()];
        fields.extend(match &c.outcome {
            Ok(row) => row_fields(row),
            Err(_) => error_fields(record.mode, &c.cell),
        });
        fields.push(status(c));
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(record: &RunRecord, path: &Path) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let f = std::fs::File::create(path)?;
    write_csv(record, std::io::BufWriter::new(f))?;
    Ok(())
}

pub fn to_csv_string(record: &RunRecord) -> String {
    let mut buf = Vec::new();
    write_csv(record, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Human summary, one line per cell plus a total.
pub fn summary(record: &RunRecord) -> String {
    let mut s = String::new();
    for c in &record.cells {
        s.push_str(&format!(
            "cell {:>3}  {:>8.3}s  {}\n",
            c.index,
            c.elapsed.as_secs_f64(),
            status(c)
        ));
    }
    s.push_str(&format!(
        "{} cells, {} failed checks, {} errors (bcow {})\n",
        record.cells.len(),
        record.failed_checks(),
        record.errors(),
        record.version
    ));
    s
}
