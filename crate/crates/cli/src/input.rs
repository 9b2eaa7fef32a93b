//! Loading of the JSON input documents.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use mgs_core::{to_quiver, ExchangeMatrix, Layering, LayeringMode, MutationSequence, ValuedIceQuiver, VertexId};
use serde_json::Value;

use crate::error::{CliError, CliResult};

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn decode<T: serde::de::DeserializeOwned>(path: &Path, doc: Value) -> CliResult<T> {
    serde_json::from_value(doc).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn load_matrix(path: &Path) -> CliResult<ExchangeMatrix> {
    decode(path, read_json(path)?)
}

/// A matrix document (`rows`) or a quiver document (`arrows`), as a quiver.
pub fn load_quiver(path: &Path) -> CliResult<ValuedIceQuiver> {
    let doc = read_json(path)?;
    if doc.get("arrows").is_some() {
        decode(path, doc)
    } else {
        let b: ExchangeMatrix = decode(path, doc)?;
        Ok(to_quiver(&b))
    }
}

/// Either a layering document `{"mode": …, "eta": {…}}` or a bare map from
/// labels to levels, which is read in `default_mode`.
pub fn load_eta(path: &Path, default_mode: LayeringMode) -> CliResult<Layering> {
    let doc = read_json(path)?;
    if doc.get("mode").is_some() {
        return decode(path, doc);
    }
    let raw: BTreeMap<String, i64> = decode(path, doc)?;
    let mut eta = BTreeMap::new();
    for (k, t) in raw {
        let v: VertexId = k
            .parse()
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        eta.insert(v, t);
    }
    Layering::from_map(default_mode, eta).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// `"1,2,1"`, `"1 2 1"` or a JSON array of labels.
pub fn parse_seq(s: &str) -> CliResult<MutationSequence> {
    let t = s.trim();
    if t.starts_with('[') {
        let steps: Vec<VertexId> =
            serde_json::from_str(t).map_err(|e| CliError::Parse(format!("sequence {s:?}: {e}")))?;
        return Ok(MutationSequence::new(steps));
    }
    MutationSequence::parse(t).map_err(|e| CliError::Parse(format!("sequence {s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequences() {
        assert_eq!(parse_seq("1,2, 3").unwrap(), MutationSequence::from_labels(&[1, 2, 3]));
        assert_eq!(parse_seq("[2,1]").unwrap(), MutationSequence::from_labels(&[2, 1]));
        assert!(parse_seq("").unwrap().is_empty());
        assert!(parse_seq("1,x").is_err());
    }

    #[test]
    fn bare_eta_map() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("eta.json");
        fs::write(&p, r#"{"1": 0, "2": 0, "3": 1}"#).unwrap();
        let eta = load_eta(&p, LayeringMode::Full).unwrap();
        assert_eq!(eta.mode(), LayeringMode::Full);
        assert_eq!(eta.levels(), vec![0, 1]);
        fs::write(&p, r#"{"mode":"exchange","eta":{"1":4}}"#).unwrap();
        assert_eq!(load_eta(&p, LayeringMode::Full).unwrap().mode(), LayeringMode::ExchangeOnly);
        fs::write(&p, r#"{"1": "a"}"#).unwrap();
        assert!(matches!(load_eta(&p, LayeringMode::Full), Err(CliError::Parse(_))));
    }
}
