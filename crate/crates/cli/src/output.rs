use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cascade_lab::inviscid::InitialProfile;

use crate::{HarnessError, VERSION};

/// A CSV file assembled in memory and written in one go.
#[derive(Debug, Clone)]
pub struct CsvTable {
    comments: Vec<String>,
    columns: Vec<String>,
    body: String,
}

impl CsvTable {
    pub fn new(config_lines: &[String], columns: &[&str]) -> Self {
        let mut comments = vec![format!("cascade-lab {VERSION}")];
        comments.extend(config_lines.iter().cloned());
        Self { comments, columns: columns.iter().map(|c| c.to_string()).collect(), body: String::new() }
    }

    /// Adds a `# key = value` result line after the configuration.
    pub fn note(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn row(&mut self, values: &[f64]) -> &mut Self {
        debug_assert_eq!(values.len(), self.columns.len());
        let mut first = true;
        for v in values {
            if !first {
                self.body.push(',');
            }
            first = false;
            let _ = write!(self.body, "{v}");
        }
        self.body.push('\n');
        self
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        s.push_str(&self.body);
        s
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf, HarnessError> {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        let path = dir.join(name);
        fs::write(&path, self.render()).map_err(|e| HarnessError::io(&path, e))?;
        Ok(path)
    }
}

/// Reads a two-column `(xi, w0)` CSV. Lines starting with `#` and a
/// non-numeric first line are skipped.
pub fn read_profile(path: &Path) -> Result<InitialProfile, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_profile(&text, path)
}

pub fn parse_profile(text: &str, path: &Path) -> Result<InitialProfile, HarnessError> {
    let parse_err = |line: usize, message: String| HarnessError::Parse { path: path.to_path_buf(), line, message };
    let (mut xs, mut ws) = (Vec::new(), Vec::new());
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 2 {
            return Err(parse_err(k + 1, format!("expected 2 columns, found {}", cols.len())));
        }
        match (cols[0].parse::<f64>(), cols[1].parse::<f64>()) {
            (Ok(x), Ok(w)) => {
                xs.push(x);
                ws.push(w);
            }
            _ if xs.is_empty() => continue,
            _ => return Err(parse_err(k + 1, format!("cannot parse `{line}`"))),
        }
    }
    InitialProfile::new(xs, ws).map_err(|e| parse_err(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_renders_header_then_rows() {
        let mut t = CsvTable::new(&["alpha = 2".to_string()], &["x", "y"]);
        t.note("fit = 1").row(&[0.5, 1.0]).row(&[1.0, 0.25]);
        let s = t.render();
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# cascade-lab "));
        assert_eq!(&lines[1..], &["# alpha = 2", "# fit = 1", "x,y", "0.5,1", "1,0.25"]);
    }

    #[test]
    fn profile_parsing() {
        let p = parse_profile("xi,w0\n0,0\n0.5,2\n1,1\n", Path::new("p.csv")).unwrap();
        assert_eq!(p.sample(0.25), 1.0);
        assert_eq!(p.sample(0.75), 1.5);
        assert!(parse_profile("0,0\n0.5\n", Path::new("p.csv")).is_err());
        assert!(parse_profile("0,0\n0.5,x\n", Path::new("p.csv")).is_err());
        assert!(parse_profile("0,0\n0.5,-1\n1,1\n", Path::new("p.csv")).is_err());
        assert!(parse_profile("", Path::new("p.csv")).is_err());
    }
}
