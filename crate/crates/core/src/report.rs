//! CSV and aligned-table output.
//!
//! CSV columns: `problem,level,mode,r1,r2,majorant_semi,majorant_norm,exact_error,eff_index,e_n`.
//! One row per level and mode, then a row with mode `all` for the space-time
//! bound. `exact_error` is the seminorm error the efficiency index divides by;
//! it and `eff_index` are empty without an exact solution, `e_n` is empty on
//! per-mode rows.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::Error;
use crate::majorant::MajorantReport;

pub const CSV_HEADER: &str =
    "problem,level,mode,r1,r2,majorant_semi,majorant_norm,exact_error,eff_index,e_n";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Table,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "table" => Ok(OutputFormat::Table),
            other => Err(Error::config(
                "format",
                format!("expected csv or table, got `{other}`"),
            )),
        }
    }
}

fn sci(v: f64) -> String {
    format!("{v:.9e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

pub fn csv_rows(report: &MajorantReport) -> Vec<String> {
    let mut rows = Vec::with_capacity(report.modes.len() + 1);
    for m in &report.modes {
        rows.push(format!(
            "{},{},{},{},{},{},{},{},{},",
            report.problem,
            report.level,
            m.k,
            sci(m.r1),
            sci(m.r2),
            sci(m.majorant_semi),
            sci(m.majorant_norm),
            opt(m.exact.map(|e| e.seminorm())),
            opt(m.eff_index),
        ));
    }
    let g = &report.global;
    rows.push(format!(
        "{},{},all,{},{},{},{},{},{},{}",
        report.problem,
        report.level,
        sci(g.r1),
        sci(g.r2),
        sci(g.majorant_semi),
        sci(g.majorant_norm),
        opt(g.exact_semi),
        opt(g.eff_index),
        sci(g.e_n),
    ));
    rows
}

pub fn render_csv(reports: &[MajorantReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        for row in csv_rows(r) {
            out.push_str(&row);
            out.push('\n');
        }
    }
    out
}

fn cell(v: Option<f64>, prec: usize) -> String {
    match v {
        Some(v) => format!("{v:.prec$e}"),
        None => "-".into(),
    }
}

/// Human-readable layout, one block per level. Times are printed only when asked for.
pub fn render_table(reports: &[MajorantReport], timings: bool) -> String {
    let mut out = String::new();
    for r in reports {
        let c = &r.constants;
        let _ = writeln!(
            out,
            "{} | {}x{} cells | {} unknowns per block | omega = {} | T = {:.6}",
            r.problem, r.level, r.level, r.dofs, r.omega, r.period
        );
        let ck: Vec<String> = c.c_k.iter().map(|v| format!("{v:.4}")).collect();
        let _ = writeln!(
            out,
            "C_F = {:.6}  mu1 = {:.6}  mu1~ = {:.6}  c0 = {:.6}/{:.6}  c_k = [{}]",
            c.c_f,
            c.mu1,
            c.mu1_tilde,
            c.c0_semi,
            c.c0_norm,
            ck.join(", ")
        );
        let time_head = if timings {
            format!(" {:>9}", "t [s]")
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            "{:>5} {:>5}{} {:>12} {:>12} {:>12} {:>12} {:>12} {:>7}",
            "mode", "iter", time_head, "|R1|", "|R2|", "M_semi", "M_norm", "error", "I_eff"
        );
        for m in &r.modes {
            let t = if timings {
                format!(" {:>9.3}", m.solve_seconds)
            } else {
                String::new()
            };
            let _ = writeln!(
                out,
                "{:>5} {:>5}{} {:>12} {:>12} {:>12} {:>12} {:>12} {:>7}",
                m.k,
                m.iterations,
                t,
                cell(Some(m.r1), 4),
                cell(Some(m.r2), 4),
                cell(Some(m.majorant_semi), 4),
                cell(Some(m.majorant_norm), 4),
                cell(m.exact.map(|e| e.seminorm()), 4),
                m.eff_index
                    .map(|v| format!("{v:.3}"))
                    .unwrap_or_else(|| "-".into()),
            );
        }
        let g = &r.global;
        let blank = if timings {
            format!(" {:>9}", "-")
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            "{:>5} {:>5}{} {:>12} {:>12} {:>12} {:>12} {:>12} {:>7}",
            "all",
            "-",
            blank,
            cell(Some(g.r1), 4),
            cell(Some(g.r2), 4),
            cell(Some(g.majorant_semi), 4),
            cell(Some(g.majorant_norm), 4),
            cell(g.exact_semi, 4),
            g.eff_index
                .map(|v| format!("{v:.3}"))
                .unwrap_or_else(|| "-".into()),
        );
        let _ = writeln!(out, "E_N = {}", cell(Some(g.e_n), 4));
        out.push('\n');
    }
    out.push_str(
        "note: iteration counts (and times) reflect the sparse-Cholesky block preconditioner \
         on this machine; they are not comparable with other solver setups.\n",
    );
    out
}

pub fn render(reports: &[MajorantReport], format: OutputFormat, timings: bool) -> String {
    match format {
        OutputFormat::Csv => render_csv(reports),
        OutputFormat::Table => render_table(reports, timings),
    }
}
