//! Plain-text convergence histories for log-log plots.
//!
//! Two blank-line separated blocks, `ndof lambda-lambda_ref` and `ndof eta^2`,
//! then a `# slope` line with the fitted rate of the eigenvalue error.

use std::fmt::Write as _;

use crate::afem::{rate_estimate, LevelRecord};
use crate::error::{Error, Result};

/// Levels used for the slope annotation.
pub const SLOPE_WINDOW: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub text: String,
    /// Levels left out of the error block because `lambda <= lambda_ref`.
    pub skipped: usize,
    pub slope: Option<f64>,
}

pub fn emit_plotdata(records: &[LevelRecord], lambda_ref: f64) -> Result<PlotData> {
    if records.is_empty() {
        return Err(Error::InsufficientData("no levels to plot".into()));
    }
    let mut text = String::from("# ndof lambda_error\n");
    let mut skipped = 0;
    for r in records {
        let e = r.lambda - lambda_ref;
        if e > 0.0 {
            writeln!(text, "{} {:.6e}", r.ndof, e).unwrap();
        } else {
            skipped += 1;
        }
    }
    text.push_str("\n\n# ndof eta2\n");
    for r in records {
        writeln!(text, "{} {:.6e}", r.ndof, r.eta * r.eta).unwrap();
    }
    let slope = rate_estimate(records, lambda_ref, SLOPE_WINDOW).ok().map(|f| f.rate);
    match slope {
        Some(s) => writeln!(text, "# slope {s:.4} over last {} levels", SLOPE_WINDOW.min(records.len())).unwrap(),
        None => text.push_str("# slope nan\n"),
    }
    if skipped > 0 {
        writeln!(text, "# skipped {skipped} levels with lambda <= lambda_ref").unwrap();
    }
    Ok(PlotData { text, skipped, slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(level: usize, ndof: usize, lambda: f64) -> LevelRecord {
        LevelRecord { level, ndof, ntri: 0, lambda, eta: 0.5, marked: 0, seconds: 0.0, lambdas: vec![lambda] }
    }

    fn data_lines(block: &str) -> usize {
        block.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count()
    }

    #[test]
    fn three_records() {
        let recs: Vec<_> = (0..3).map(|l| rec(l, 10 << l, 2.0 + ((10 << l) as f64).powi(-3))).collect();
        let p = emit_plotdata(&recs, 2.0).unwrap();
        let blocks: Vec<&str> = p.text.split("\n\n\n").collect();
        assert_eq!(data_lines(blocks[0]), 3);
        assert_eq!(data_lines(blocks[1]), 3);
        assert!((p.slope.unwrap() - 3.0).abs() < 1e-6);
        assert!(p.text.contains("# slope 3.0000"));
    }

    #[test]
    fn exact_level_is_skipped() {
        let recs = vec![rec(0, 10, 3.0), rec(1, 20, 2.0), rec(2, 40, 2.5)];
        let p = emit_plotdata(&recs, 2.0).unwrap();
        assert_eq!(p.skipped, 1);
        assert!(p.slope.is_none());
        assert!(emit_plotdata(&[], 1.0).is_err());
    }
}
