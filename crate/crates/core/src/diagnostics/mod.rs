//! Efficiency and accuracy diagnostics for chain output.

mod acf;
mod jumps;
mod qq;
mod report;

pub use acf::{act_window, autocorrelation, cpu_adjusted_act, ess, ActEstimate, ACT_CUTOFF, MIN_ACT_LEN};
pub use jumps::{msejd, msjd};
pub use qq::{qq_compare, quantile_sorted, QqRow, MIN_QQ_LEN};
pub use report::{qq_csv, read_report_csv, DiagnosticsReport, ParamDiagnostics};
