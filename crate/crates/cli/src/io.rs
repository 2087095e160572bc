//! File formats: vector and coefficient files (JSON), tables (CSV) and
//! matrix files. Floats are written with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use oscillator_core::spectral::BasisLabel;

use crate::CliError;

/// `{"p": .., "re": [..], "im": [..]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFile {
    pub p: u64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl VectorFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = read_text(path)?;
        let v: VectorFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        v.validate(path)?;
        Ok(v)
    }

    fn validate(&self, path: &Path) -> Result<(), CliError> {
        if !oscillator_core::field::is_prime(self.p) || self.p == 2 {
            return Err(CliError::Parse(format!(
                "{}: field `p`: {} is not an odd prime",
                path.display(),
                self.p
            )));
        }
        for (name, values) in [("re", &self.re), ("im", &self.im)] {
            if values.len() as u64 != self.p {
                return Err(CliError::Parse(format!(
                    "{}: field `{name}`: expected {} values, found {}",
                    path.display(),
                    self.p,
                    values.len()
                )));
            }
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect()
    }
}

/// A deserialized coefficient file.
#[derive(Debug, Deserialize)]
pub struct CoefficientFile {
    pub p: u64,
    pub torus: String,
    pub mode: String,
    pub characters: Vec<usize>,
    pub slots: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl CoefficientFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = read_text(path)?;
        let c: CoefficientFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let n = c.characters.len();
        for (name, len) in [("slots", c.slots.len()), ("re", c.re.len()), ("im", c.im.len())] {
            if len != n {
                return Err(CliError::Parse(format!(
                    "{}: field `{name}`: expected {n} entries, found {len}",
                    path.display()
                )));
            }
        }
        Ok(c)
    }

    pub fn labels(&self) -> Vec<BasisLabel> {
        self.characters
            .iter()
            .zip(&self.slots)
            .map(|(&character, &slot)| BasisLabel { character, slot })
            .collect()
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect()
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// A float with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn num_list(xs: impl IntoIterator<Item = f64>) -> String {
    let items: Vec<String> = xs.into_iter().map(num).collect();
    format!("[{}]", items.join(", "))
}

fn int_list(xs: impl IntoIterator<Item = usize>) -> String {
    let items: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

pub fn vector_json(p: u64, values: &[Complex64]) -> String {
    format!(
        "{{\n  \"p\": {p},\n  \"re\": {},\n  \"im\": {}\n}}\n",
        num_list(values.iter().map(|z| z.re)),
        num_list(values.iter().map(|z| z.im))
    )
}

pub struct CoefficientOutput<'a> {
    pub p: u64,
    pub torus: &'a str,
    pub mode: &'a str,
    pub generator: String,
    pub labels: &'a [BasisLabel],
    pub values: &'a [Complex64],
}

pub fn coefficient_json(c: &CoefficientOutput<'_>) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    let _ = writeln!(s, "  \"p\": {},", c.p);
    let _ = writeln!(s, "  \"torus\": \"{}\",", c.torus);
    let _ = writeln!(s, "  \"mode\": \"{}\",", c.mode);
    let _ = writeln!(s, "  \"generator\": \"{}\",", c.generator);
    let _ = writeln!(s, "  \"characters\": {},", int_list(c.labels.iter().map(|l| l.character)));
    let _ = writeln!(s, "  \"slots\": {},", int_list(c.labels.iter().map(|l| l.slot)));
    let _ = writeln!(s, "  \"re\": {},", num_list(c.values.iter().map(|z| z.re)));
    let _ = writeln!(s, "  \"im\": {}", num_list(c.values.iter().map(|z| z.im)));
    s.push_str("}\n");
    s
}

/// Rows of a `p x p` matrix whose columns are basis vectors.
pub fn matrix_json(p: u64, columns: &[Vec<Complex64>]) -> String {
    let rows = |part: fn(&Complex64) -> f64| -> String {
        let lines: Vec<String> = (0..p as usize)
            .map(|x| format!("    {}", num_list(columns.iter().map(|c| part(&c[x])))))
            .collect();
        format!("[\n{}\n  ]", lines.join(",\n"))
    };
    format!(
        "{{\n  \"p\": {p},\n  \"columns\": {},\n  \"re\": {},\n  \"im\": {}\n}}\n",
        columns.len(),
        rows(|z| z.re),
        rows(|z| z.im)
    )
}
