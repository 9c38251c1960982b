//! Machine-readable report writers: summary JSON and per-iteration CSV.
//! Reports carry no timestamps, so identical runs produce byte-identical
//! files.

use std::path::Path;

use serde::Serialize;

use multisplit_core::IterationReport;

use crate::CliError;

#[derive(Serialize)]
pub struct SolveSummary<'a> {
    pub engine: &'a str,
    pub converged: bool,
    pub iterates_used: usize,
    pub final_residual: f64,
    pub rho_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_exact: Option<f64>,
    pub tol: f64,
    pub omega: f64,
    pub workers: usize,
    pub final_x_re: Vec<f64>,
    pub final_x_im: Vec<f64>,
}

impl<'a> SolveSummary<'a> {
    pub fn new(
        engine: &'a str,
        report: &IterationReport,
        tol: f64,
        omega: f64,
        workers: usize,
    ) -> Self {
        Self {
            engine,
            converged: report.converged,
            iterates_used: report.iterates_used,
            final_residual: *report
                .residual_history
                .last()
                .expect("history holds at least the initial residual"),
            rho_estimate: report.rho_estimate,
            rho_exact: report.rho_exact,
            tol,
            omega,
            workers,
            final_x_re: report.final_x.iter().map(|z| z.re).collect(),
            final_x_im: report.final_x.iter().map(|z| z.im).collect(),
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("serializing report: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))
}

/// Residual history CSV: `iter,residual,ratio` with an empty ratio on the
/// initial row.
pub fn write_residual_csv(path: &Path, history: &[f64]) -> Result<(), CliError> {
    let mut out = String::from("iter,residual,ratio\n");
    for (i, r) in history.iter().enumerate() {
        if i == 0 {
            out.push_str(&format!("0,{r:e},\n"));
        } else {
            let prev = history[i - 1];
            let ratio = if prev > 0.0 { r / prev } else { f64::NAN };
            out.push_str(&format!("{i},{r:e},{ratio:e}\n"));
        }
    }
    std::fs::write(path, out).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))
}

/// Shift sweep CSV: `alpha,rho_M,norm_M,norm_V,is_alpha_star`.
pub fn write_sweep_csv(
    path: &Path,
    rows: &[multisplit_core::pss_params::SweepRow],
) -> Result<(), CliError> {
    let mut out = String::from("alpha,rho_M,norm_M,norm_V,is_alpha_star\n");
    for row in rows {
        out.push_str(&format!(
            "{:e},{:e},{:e},{:e},{}\n",
            row.alpha, row.rho_m, row.norm_m, row.norm_v, row.is_alpha_star
        ));
    }
    std::fs::write(path, out).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))
}
