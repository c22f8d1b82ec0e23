//! Plain-text report assembly with stable number formatting.

use std::fmt::Write;

use deepwater_evans::evans::CMatrix;
use num_complex::Complex64;

/// Values below this print as zero, so `-0` never leaks into a report.
const PRINT_FLOOR: f64 = 5e-13;

fn clean(x: f64) -> f64 {
    if x.abs() < PRINT_FLOOR {
        0.0
    } else {
        x
    }
}

pub fn real(x: f64) -> String {
    format!("{:.12}", clean(x))
}

pub fn complex(z: Complex64) -> String {
    let (re, im) = (clean(z.re), clean(z.im));
    format!("{re:.12}{}{:.12}i", if im < 0.0 { '-' } else { '+' }, im.abs())
}

#[derive(Debug, Default)]
pub struct Report {
    pub text: String,
    /// `(file name, contents)` written under the output directory.
    pub files: Vec<(String, String)>,
    /// Names of consistency checks that failed.
    pub failed: Vec<String>,
}

impl Report {
    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn matrix(&mut self, label: &str, m: &CMatrix) {
        self.line(format!("{label} ="));
        for i in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols()).map(|j| complex(m[(i, j)])).collect();
            self.line(format!("  [{}]", row.join(", ")));
        }
    }

    /// Record a named check; failures are collected for the exit status.
    pub fn check(&mut self, name: &str, pass: bool, detail: &str) {
        self.line(format!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" }));
        if !pass {
            self.failed.push(name.to_string());
        }
    }

    pub fn file(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }
}

/// CSV text from a header and rows of numbers.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{:.15e}", clean(*v))).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}
