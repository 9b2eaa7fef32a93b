use std::collections::hash_map::DefaultHasher;
use std::fs;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

/// What a command persists with `--report`. Everything except
/// `duration_ms` is a function of the command and its inputs.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub tool_version: &'static str,
    pub payload: Value,
    pub duration_ms: u128,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, payload: Value, duration_ms: u128) -> RunReport {
        RunReport {
            command: command.to_string(),
            inputs,
            tool_version: env!("CARGO_PKG_VERSION"),
            payload,
            duration_ms,
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        fs::write(path, text + "\n")
    }
}

/// Writes `repro` to `dir/mgs-repro-<hash>.json` and returns the path. The
/// name depends only on the contents.
pub fn dump_repro(dir: &Path, command: &str, message: &str, repro: &Value) -> std::io::Result<PathBuf> {
    let doc = json!({
        "command": command,
        "error": message,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "inputs": repro,
    });
    let text = serde_json::to_string_pretty(&doc).expect("repro serialization cannot fail");
    let mut h = DefaultHasher::new();
    text.hash(&mut h);
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("mgs-repro-{:016x}.json", h.finish()));
    fs::write(&path, text + "\n")?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repro_name_is_content_addressed() {
        let dir = tempfile::tempdir().unwrap();
        let a = dump_repro(dir.path(), "tsystem", "boom", &json!({"x": 1})).unwrap();
        let b = dump_repro(dir.path(), "tsystem", "boom", &json!({"x": 1})).unwrap();
        let c = dump_repro(dir.path(), "tsystem", "boom", &json!({"x": 2})).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let doc: Value = serde_json::from_str(&fs::read_to_string(&a).unwrap()).unwrap();
        assert_eq!(doc["inputs"]["x"], 1);
        assert_eq!(doc["error"], "boom");
    }

    #[test]
    fn report_fields() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        RunReport::new("paths", json!({"n": 3}), json!(["1 2 1"]), 7).write(&p).unwrap();
        let doc: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(doc["command"], "paths");
        assert_eq!(doc["payload"][0], "1 2 1");
        assert_eq!(doc["duration_ms"], 7);
        assert_eq!(doc["tool_version"], env!("CARGO_PKG_VERSION"));
    }
}
