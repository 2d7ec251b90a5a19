use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use tffilter_core::{Error as CoreError, SampledAxis};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 1;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// `x` must be positive and finite.
pub fn positive(name: &str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(usage(format!("--{name} must be positive")))
    }
}

pub fn non_negative(name: &str, x: f64) -> CliResult<f64> {
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(usage(format!("--{name} must be non-negative")))
    }
}

/// Shortest round-trip scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct AxisInfo {
    pub domain: &'static str,
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl From<&SampledAxis> for AxisInfo {
    fn from(a: &SampledAxis) -> Self {
        let domain = match a.domain() {
            tffilter_core::Domain::Time => "time",
            tffilter_core::Domain::AngularFrequency => "angular_frequency",
        };
        AxisInfo { domain, start: a.start(), step: a.step(), count: a.count() }
    }
}

/// Everything needed to reproduce an output. The timestamp lives only in the
/// sidecar so that reruns stay byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: &'static str,
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<&'static str>,
    pub grid: Vec<AxisInfo>,
    pub artifact_version: &'static str,
}

impl Manifest {
    pub fn new(command: &'static str) -> Self {
        Manifest {
            command,
            parameters: BTreeMap::new(),
            seed: None,
            rng: None,
            grid: Vec::new(),
            artifact_version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    manifest: &'a Manifest,
    output: String,
    timestamp: String,
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Write `bytes` to `out` (or standard output) and the manifest sidecar.
pub fn emit(out: Option<&Path>, bytes: &[u8], manifest: &Manifest) -> CliResult<()> {
    match out {
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
        Some(path) => {
            fs::write(path, bytes)?;
            let side = Sidecar {
                manifest,
                output: path.display().to_string(),
                timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            };
            let mut text = serde_json::to_string_pretty(&side)?;
            text.push('\n');
            fs::write(sidecar_path(path), text)?;
        }
    }
    Ok(())
}

/// RFC-4180 table with LF line endings.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> CliResult<Self> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Table { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> CliResult<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn into_bytes(self) -> CliResult<Vec<u8>> {
        self.writer.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}
