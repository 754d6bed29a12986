use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use regex::Regex;
use serde::Deserialize;
use thiserror::Error;

use super::{Component, RunStatus};

/// A timing pattern with one numeric capture, in seconds.
#[derive(Debug, Clone)]
pub struct TimingExtractor {
    pub component: Component,
    pub pattern: Regex,
}

/// A third-party solver run through `sh -c`.
#[derive(Debug, Clone)]
pub struct ExternalSolver {
    pub name: String,
    /// Command template; `{lpfile}` and `{timelimit}` are substituted.
    pub command: String,
    pub timing: Vec<TimingExtractor>,
    pub status_pattern: Regex,
    /// Captured status strings (case-insensitive) that mean optimal.
    pub optimal_status: Vec<String>,
    /// Captured status strings (case-insensitive) that mean a time limit hit.
    pub time_limit_status: Vec<String>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read solver config: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("solver config has no status_pattern")]
    MissingStatus,
    #[error("solver config has no timing extractor for the total component")]
    MissingTotal,
    #[error("solver config: pattern {pattern:?}: {reason}")]
    Pattern { pattern: String, reason: String },
    #[error("solver config: {0}")]
    Invalid(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTiming {
    component: String,
    pattern: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: String,
    command: String,
    status_pattern: Option<String>,
    #[serde(default)]
    optimal_status: Option<Vec<String>>,
    #[serde(default)]
    time_limit_status: Option<Vec<String>>,
    #[serde(default)]
    timing: Vec<RawTiming>,
}

fn one_capture(pattern: &str) -> Result<Regex, ConfigError> {
    let err = |reason: String| ConfigError::Pattern {
        pattern: pattern.to_string(),
        reason,
    };
    let re = Regex::new(pattern).map_err(|e| err(e.to_string()))?;
    if re.captures_len() != 2 {
        return Err(err(format!(
            "needs exactly one capture group, has {}",
            re.captures_len() - 1
        )));
    }
    Ok(re)
}

impl ExternalSolver {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        if raw.name.trim().is_empty() || raw.name.contains(char::is_whitespace) {
            return Err(ConfigError::Invalid(format!(
                "bad solver name {:?}",
                raw.name
            )));
        }
        if !raw.command.contains("{lpfile}") {
            return Err(ConfigError::Invalid("command lacks {lpfile}".into()));
        }
        let status_pattern = one_capture(&raw.status_pattern.ok_or(ConfigError::MissingStatus)?)?;
        let mut timing = Vec::new();
        for t in raw.timing {
            let component = t.component.parse().map_err(ConfigError::Invalid)?;
            timing.push(TimingExtractor {
                component,
                pattern: one_capture(&t.pattern)?,
            });
        }
        if !timing.iter().any(|t| t.component == Component::Total) {
            return Err(ConfigError::MissingTotal);
        }
        let lower = |v: Vec<String>| v.into_iter().map(|s| s.to_lowercase()).collect();
        Ok(Self {
            name: raw.name,
            command: raw.command,
            timing,
            status_pattern,
            optimal_status: lower(raw.optimal_status.unwrap_or_else(|| vec!["optimal".into()])),
            time_limit_status: lower(
                raw.time_limit_status
                    .unwrap_or_else(|| vec!["timelimit".into(), "time_limit".into()]),
            ),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// The shell command for one run.
    pub fn render_command(&self, lpfile: &Path, time_limit_seconds: f64) -> String {
        self.command
            .replace("{lpfile}", &shell_quote(&lpfile.to_string_lossy()))
            .replace("{timelimit}", &format!("{time_limit_seconds}"))
    }

    /// Runs the solver and interprets its output. A run exceeding the time
    /// limit by 10% plus one second is killed.
    pub(crate) fn run(&self, lpfile: &Path, time_limit_seconds: f64) -> ExternalOutcome {
        let cmd = self.render_command(lpfile, time_limit_seconds);
        let child = Command::new("sh")
            .arg("-c")
            .arg(&cmd)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn();
        let mut child = match child {
            Ok(c) => c,
            Err(e) => return ExternalOutcome::error(format!("cannot start sh: {e}")),
        };
        let out = spawn_reader(child.stdout.take());
        let err = spawn_reader(child.stderr.take());
        let deadline = Duration::from_secs_f64(1.1 * time_limit_seconds.max(0.0) + 1.0);
        let start = Instant::now();
        let status = loop {
            match child.try_wait() {
                Ok(Some(s)) => break s,
                Ok(None) if start.elapsed() > deadline => {
                    let _ = child.kill();
                    let _ = child.wait();
                    return ExternalOutcome {
                        status: RunStatus::TimeLimit,
                        detail: Some(format!(
                            "killed after {:.1}s",
                            start.elapsed().as_secs_f64()
                        )),
                        components: BTreeMap::new(),
                    };
                }
                Ok(None) => std::thread::sleep(Duration::from_millis(5)),
                Err(e) => return ExternalOutcome::error(format!("wait failed: {e}")),
            }
        };
        let mut text = out.join().unwrap_or_default();
        text.push_str(&err.join().unwrap_or_default());
        if !status.success() {
            return ExternalOutcome::error(format!("solver exited with {status}"));
        }
        self.interpret(&text)
    }

    /// Applies the extractors to captured solver output.
    pub(crate) fn interpret(&self, text: &str) -> ExternalOutcome {
        let Some(raw_status) = self.status_pattern.captures(text).map(|c| c[1].to_string()) else {
            return ExternalOutcome::error("status pattern did not match".into());
        };
        let s = raw_status.to_lowercase();
        let status = if self.optimal_status.contains(&s) {
            RunStatus::Optimal
        } else if self.time_limit_status.contains(&s) {
            RunStatus::TimeLimit
        } else {
            RunStatus::Error
        };
        let mut components = BTreeMap::new();
        for t in &self.timing {
            if let Some(c) = t.pattern.captures(text) {
                match c[1].parse::<f64>() {
                    Ok(v) if v.is_finite() && v >= 0.0 => {
                        components.insert(t.component, v);
                    }
                    _ => {
                        return ExternalOutcome::error(format!(
                            "{} time {:?} is not a number",
                            t.component, &c[1]
                        ))
                    }
                }
            }
        }
        if !components.contains_key(&Component::Total) {
            return ExternalOutcome::error("total time pattern did not match".into());
        }
        ExternalOutcome {
            status,
            detail: (status == RunStatus::Error).then(|| format!("solver status {raw_status:?}")),
            components,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ExternalOutcome {
    pub status: RunStatus,
    pub detail: Option<String>,
    pub components: BTreeMap<Component, f64>,
}

impl ExternalOutcome {
    fn error(detail: String) -> Self {
        Self {
            status: RunStatus::Error,
            detail: Some(detail),
            components: BTreeMap::new(),
        }
    }
}

fn spawn_reader<R: Read + Send + 'static>(src: Option<R>) -> std::thread::JoinHandle<String> {
    std::thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut r) = src {
            let _ = r.read_to_end(&mut buf);
        }
        String::from_utf8_lossy(&buf).into_owned()
    })
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}
