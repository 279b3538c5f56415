//! Suite reports: text, JSON lines and replayable failure artifacts.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::json;

/// One counterexample, with everything needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    /// Stable identifier used for ordering.
    pub key: String,
    pub message: String,
    /// Named structures in `.str` syntax.
    pub structures: Vec<(String, String)>,
    /// The formula involved, in `.fml` syntax.
    pub formula: Option<String>,
    /// CLI invocation reproducing the check, with artifact file names.
    pub command: Option<String>,
}

impl Failure {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Failure { key: key.into(), message: message.into(), structures: Vec::new(), formula: None, command: None }
    }

    pub fn structure(mut self, name: &str, text: String) -> Self {
        self.structures.push((name.to_string(), text));
        self
    }

    pub fn formula(mut self, text: String) -> Self {
        self.formula = Some(text);
        self
    }

    pub fn command(mut self, cmd: String) -> Self {
        self.command = Some(cmd);
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    /// Sorted by key.
    pub failures: Vec<Failure>,
    /// Informational lines, such as empirical rank tables.
    pub notes: Vec<String>,
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn new(name: &str) -> Self {
        SuiteReport { name: name.to_string(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn finish(mut self) -> Self {
        self.failures.sort_by(|a, b| a.key.cmp(&b.key));
        self
    }

    /// Summary line first, then one line per failure and per note. Wall time
    /// is left out so the output is byte-stable.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        let mut push = |v: serde_json::Value| {
            out.push_str(&v.to_string());
            out.push('\n');
        };
        push(json!({
            "suite": self.name,
            "cases": self.cases,
            "failures": self.failures.len(),
            "passed": self.passed(),
        }));
        for f in &self.failures {
            push(json!({
                "suite": self.name,
                "key": f.key,
                "message": f.message,
                "structures": f.structures.iter().map(|(n, s)| json!({"name": n, "text": s})).collect::<Vec<_>>(),
                "formula": f.formula,
                "command": f.command,
            }));
        }
        for n in &self.notes {
            push(json!({"suite": self.name, "note": n}));
        }
        out
    }

    /// Writes each failure's structures and formula under
    /// `dir/<suite>/<index>/`, with the reproducing command in `repro.sh`.
    pub fn write_artifacts(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        for (i, f) in self.failures.iter().enumerate() {
            let case = dir.join(&self.name).join(format!("{i:04}"));
            fs::create_dir_all(&case)?;
            for (name, text) in &f.structures {
                let p = case.join(format!("{name}.str"));
                fs::write(&p, text)?;
                written.push(p);
            }
            if let Some(fml) = &f.formula {
                let p = case.join("formula.fml");
                fs::write(&p, fml)?;
                written.push(p);
            }
            let p = case.join("repro.sh");
            let cmd = f.command.clone().unwrap_or_else(|| format!("splitgame verify --suite {}", self.name));
            fs::write(&p, format!("# {}\n# {}\ncd \"$(dirname \"$0\")\"\n{cmd}\n", f.key, f.message))?;
            written.push(p);
        }
        Ok(written)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {}: {} cases, {} failures ({}) in {:.2}s",
            self.name,
            self.cases,
            self.failures.len(),
            if self.passed() { "PASS" } else { "FAIL" },
            self.wall_time.as_secs_f64()
        )?;
        for fail in &self.failures {
            writeln!(f, "  failure [{}]: {}", fail.key, fail.message)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_stable_and_complete() {
        let mut r = SuiteReport::new("demo");
        r.cases = 2;
        r.failures.push(Failure::new("b", "second").formula("true".into()));
        r.failures.push(Failure::new("a", "first").structure("left", "structure { universe 1; }".into()));
        r.wall_time = Duration::from_millis(5);
        let r = r.finish();
        assert_eq!(r.failures[0].key, "a");
        let mut again = r.clone();
        again.wall_time = Duration::from_secs(9);
        assert_eq!(r.to_json_lines(), again.to_json_lines());
        let json = r.to_json_lines();
        let lines: Vec<&str> = json.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].contains("\"passed\":false"));
        let dir = tempfile::tempdir().unwrap();
        let files = r.write_artifacts(dir.path()).unwrap();
        assert_eq!(files.len(), 4);
        assert!(files.iter().all(|p| p.exists()));
    }
}
