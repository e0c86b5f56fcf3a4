//! CSV helpers. Floats are written with 17 significant digits so that a
//! value read back is bit-identical and reruns compare byte-for-byte.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// Round-trip formatting of a float (17 significant digits, scientific).
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Accumulates CSV text in memory so a failed run leaves no partial file.
#[derive(Debug, Default, Clone)]
pub struct CsvBuffer {
    text: String,
}

impl CsvBuffer {
    pub fn with_header(header: &str) -> Self {
        let mut b = Self::default();
        b.line(header);
        b
    }

    pub fn line(&mut self, line: &str) {
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for f in fields {
            if !first {
                self.text.push(',');
            }
            first = false;
            self.text.push_str(f.as_ref());
        }
        self.text.push('\n');
    }

    pub fn append(&mut self, other: &CsvBuffer) {
        self.text.push_str(&other.text);
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Number of lines, header included.
    pub fn lines(&self) -> usize {
        self.text.lines().count()
    }

    /// Writes to `path` (via a sibling temp file, renamed into place) or to stdout.
    pub fn emit(&self, path: Option<&Path>) -> io::Result<()> {
        match path {
            Some(p) => write_atomic(p, self.text.as_bytes()),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(self.text.as_bytes())?;
                out.flush()
            }
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = std::path::PathBuf::from(tmp);
    let res = fs::write(&tmp, bytes).and_then(|_| fs::rename(&tmp, path));
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    res
}
