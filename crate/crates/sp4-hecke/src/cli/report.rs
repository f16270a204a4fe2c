//! Report rows, summaries and their JSON and CSV encodings.

use std::fmt::Display;

use num_complex::Complex64;
use serde::Serialize;

use crate::Error;

/// One checked identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub anchor: String,
    pub computed: String,
    pub expected: String,
    /// `None` for identities without a numeric distance.
    pub abs_error: Option<f64>,
    pub pass: bool,
}

impl Row {
    pub fn count(anchor: impl Into<String>, computed: u128, expected: u128) -> Self {
        Row {
            anchor: anchor.into(),
            computed: computed.to_string(),
            expected: expected.to_string(),
            abs_error: Some(computed.abs_diff(expected) as f64),
            pass: computed == expected,
        }
    }

    pub fn complex(
        anchor: impl Into<String>,
        computed: Complex64,
        expected: Complex64,
        tol: f64,
    ) -> Self {
        let err = (computed - expected).norm();
        Row {
            anchor: anchor.into(),
            computed: format_complex(computed),
            expected: format_complex(expected),
            abs_error: Some(err),
            pass: err <= tol,
        }
    }

    pub fn distance(anchor: impl Into<String>, distance: f64, tol: f64) -> Self {
        Row {
            anchor: anchor.into(),
            computed: format!("{distance:.3e}"),
            expected: "0".into(),
            abs_error: Some(distance),
            pass: distance <= tol,
        }
    }

    pub fn holds(
        anchor: impl Into<String>,
        computed: impl Display,
        expected: impl Display,
        pass: bool,
    ) -> Self {
        Row {
            anchor: anchor.into(),
            computed: computed.to_string(),
            expected: expected.to_string(),
            abs_error: None,
            pass,
        }
    }
}

/// `a+bi` with small components rounded to zero.
pub fn format_complex(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re:.6}"),
        (true, false) => format!("{im:.6}i"),
        _ => format!("{re:.6}{im:+.6}i"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    SizeBound,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
            Status::SizeBound => 3,
        }
    }

    /// Status of an aborted suite.
    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::Inconclusive(_) => Status::Inconclusive,
            Error::SizeBound(_) => Status::SizeBound,
            _ => Status::Fail,
        }
    }

    /// The more severe of two statuses; resource and witness aborts outrank failures.
    pub fn worst(self, other: Self) -> Self {
        let rank = |s: Status| match s {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
            Status::SizeBound => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub status: Status,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<C> {
    pub config: C,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl<C: Serialize> Report<C> {
    /// Rows of the suites that ran and the errors of those that aborted.
    pub fn new(config: C, rows: Vec<Row>, errors: Vec<Error>) -> Self {
        let passed = rows.iter().filter(|r| r.pass).count();
        let mut status = if passed == rows.len() {
            Status::Pass
        } else {
            Status::Fail
        };
        for e in &errors {
            status = status.worst(Status::of_error(e));
        }
        Report {
            config,
            summary: Summary {
                total: rows.len(),
                passed,
                failed: rows.len() - passed,
                status,
                errors: errors.iter().map(|e| e.to_string()).collect(),
            },
            rows,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Rows only, one line each.
    pub fn to_csv(&self) -> Result<String, Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| Error::Invalid(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_ordering() {
        assert_eq!(Status::Pass.worst(Status::Fail), Status::Fail);
        assert_eq!(Status::SizeBound.worst(Status::Fail), Status::SizeBound);
        assert_eq!(Status::of_error(&Error::SizeBound(3)).exit_code(), 3);
        assert_eq!(
            Status::of_error(&Error::Inconclusive("x".into())).exit_code(),
            2
        );
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(format_complex(Complex64::new(-9.0, 0.0)), "-9.000000");
        assert_eq!(
            format_complex(Complex64::new(0.0, 3f64.sqrt())),
            "1.732051i"
        );
        assert_eq!(
            format_complex(Complex64::new(1.0, -2.0)),
            "1.000000-2.000000i"
        );
    }

    #[test]
    fn rows_decide_pass() {
        assert!(Row::count("x", 729, 729).pass);
        assert!(!Row::count("x", 728, 729).pass);
        let r = Row::complex(
            "z",
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 1e-9),
            1e-6,
        );
        assert!(r.pass);
    }
}
