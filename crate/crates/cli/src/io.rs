use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// A failed command, carrying the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad or unreadable input data: exit 2.
    Data(anyhow::Error),
    /// Everything else that went wrong while running: exit 3.
    Runtime(anyhow::Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Data(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }

    pub fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Data(e) | Failure::Runtime(e) => e,
        }
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub fn data_err(msg: impl Display) -> Failure {
    Failure::Data(anyhow::anyhow!("{msg}"))
}

pub fn runtime_err(msg: impl Display) -> Failure {
    Failure::Runtime(anyhow::anyhow!("{msg}"))
}

/// Attaches a context message and an exit class to any error.
pub trait Classify<T> {
    fn data(self, context: impl Display) -> Outcome<T>;
    fn runtime(self, context: impl Display) -> Outcome<T>;
}

impl<T, E> Classify<T> for Result<T, E>
where
    E: std::error::Error + Send + Sync + 'static,
{
    fn data(self, context: impl Display) -> Outcome<T> {
        self.map_err(|e| Failure::Data(anyhow::Error::new(e).context(context.to_string())))
    }

    fn runtime(self, context: impl Display) -> Outcome<T> {
        self.map_err(|e| Failure::Runtime(anyhow::Error::new(e).context(context.to_string())))
    }
}

pub fn check_inputs(paths: &[&Path]) -> Outcome {
    for p in paths {
        if !p.is_file() {
            return Err(data_err(format!("input {} does not exist or is not a file", p.display())));
        }
    }
    Ok(())
}

pub fn check_outputs(paths: &[&Path]) -> Outcome {
    for p in paths {
        if p.is_dir() {
            return Err(data_err(format!("output {} is a directory", p.display())));
        }
        let parent = parent_dir(p);
        if !parent.is_dir() {
            return Err(data_err(format!(
                "output directory {} does not exist",
                parent.display()
            )));
        }
    }
    Ok(())
}

fn parent_dir(p: &Path) -> PathBuf {
    match p.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

/// Writes through a temporary file in the target directory, then renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Outcome {
    let name = path
        .file_name()
        .ok_or_else(|| data_err(format!("output {} has no file name", path.display())))?;
    let tmp = parent_dir(path).join(format!(
        ".{}.tmp-{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents)?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.runtime(format!("writing {}", path.display()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Tool version, command, seed and input digests stamped on every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
}

impl Provenance {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            tool: "scidetect".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            inputs: Vec::new(),
        }
    }

    /// Reads an input file and records its digest.
    pub fn read(&mut self, path: &Path) -> Outcome<Vec<u8>> {
        let bytes = fs::read(path).data(format!("reading {}", path.display()))?;
        self.record_bytes(&path.display().to_string(), &bytes);
        Ok(bytes)
    }

    pub fn read_text(&mut self, path: &Path) -> Outcome<String> {
        String::from_utf8(self.read(path)?).data(format!("{} is not UTF-8", path.display()))
    }

    /// Records an input file without keeping its contents.
    pub fn record(&mut self, path: &Path) -> Outcome {
        self.read(path).map(drop)
    }

    pub fn record_bytes(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            path: name.to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    /// `key: value` lines for text and CSV headers.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("tool: {} {}", self.tool, self.version),
            format!("command: {}", self.command),
            format!("seed: {}", self.seed),
        ];
        out.extend(
            self.inputs
                .iter()
                .map(|i| format!("input: {} sha256={}", i.path, i.sha256)),
        );
        out
    }

    /// Adds a `provenance` member to a JSON object.
    pub fn stamp(&self, mut value: Value) -> Value {
        if let Value::Object(map) = &mut value {
            map.insert(
                "provenance".into(),
                serde_json::to_value(self).expect("provenance serializes"),
            );
        }
        value
    }

    pub fn stamp_json(&self, json: &str, pretty: bool) -> String {
        let value = self.stamp(serde_json::from_str(json).expect("library emits valid JSON"));
        let mut out = if pretty {
            serde_json::to_string_pretty(&value)
        } else {
            serde_json::to_string(&value)
        }
        .expect("JSON value serializes");
        out.push('\n');
        out
    }

    pub fn stamp_serialize<T: Serialize>(&self, value: &T) -> String {
        let value = serde_json::to_value(value).expect("output serializes");
        let mut out = serde_json::to_string_pretty(&self.stamp(value)).expect("JSON value serializes");
        out.push('\n');
        out
    }

    /// Sidecar written next to JSONL outputs, which have no room for a
    /// header.
    pub fn write_sidecar(&self, artifact: &Path) -> Outcome {
        let mut name = artifact.as_os_str().to_owned();
        name.push(".provenance.json");
        let mut text = serde_json::to_string_pretty(self).expect("provenance serializes");
        text.push('\n');
        write_atomic(Path::new(&name), text.as_bytes())
    }
}
