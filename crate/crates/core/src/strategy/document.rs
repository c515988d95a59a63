//! Strategy documents: nested JSON objects with a `guess` string and an
//! optional `children` object keyed by response ("2B2C", "0C", ...).
//! Children are written in class order and leaves omit `children`, so a
//! tree has exactly one serialized form.

use std::fmt::Write;

use serde_json::Value;
use thiserror::Error;

use crate::code::{Code, Response};
use crate::strategy::StrategyTree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("at {path}: {message}")]
    Structure { path: String, message: String },
}

pub fn to_document(tree: &StrategyTree) -> String {
    let mut out = String::new();
    write_node(tree, &mut out);
    out.push('\n');
    out
}

fn write_node(tree: &StrategyTree, out: &mut String) {
    write!(out, "{{\"guess\":\"{}\"", tree.guess).unwrap();
    if !tree.is_leaf() {
        out.push_str(",\"children\":{");
        for (i, (r, child)) in tree.children.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "\"{r}\":").unwrap();
            write_node(child, out);
        }
        out.push('}');
    }
    out.push('}');
}

pub fn from_document(text: &str) -> Result<StrategyTree, DocumentError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut path = String::from("$");
    read_node(&value, &mut path)
}

fn structure(path: &str, message: impl Into<String>) -> DocumentError {
    DocumentError::Structure {
        path: path.to_string(),
        message: message.into(),
    }
}

fn read_node(value: &Value, path: &mut String) -> Result<StrategyTree, DocumentError> {
    let obj = value
        .as_object()
        .ok_or_else(|| structure(path, "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| *k != "guess" && *k != "children") {
        return Err(structure(path, format!("unknown field '{k}'")));
    }
    let text = obj
        .get("guess")
        .and_then(Value::as_str)
        .ok_or_else(|| structure(path, "missing string field 'guess'"))?;
    let digits: Option<Vec<u8>> = text.chars().map(|c| c.to_digit(10).map(|d| d as u8)).collect();
    let guess = digits
        .ok_or_else(|| structure(path, format!("guess '{text}' is not a digit string")))
        .and_then(|d| {
            Code::from_digits(&d).map_err(|e| structure(path, format!("guess '{text}': {e}")))
        })?;
    let mut tree = StrategyTree::leaf(guess);
    if let Some(children) = obj.get("children") {
        let children = children
            .as_object()
            .ok_or_else(|| structure(path, "'children' must be an object"))?;
        for (key, child) in children {
            let response: Response = key
                .parse()
                .map_err(|e| structure(path, format!("bad response key: {e}")))?;
            if response.is_solved(guess.len()) {
                return Err(structure(path, format!("'{key}' ends the game and takes no child")));
            }
            let len = path.len();
            write!(path, ".children.{key}").unwrap();
            let sub = read_node(child, path)?;
            path.truncate(len);
            tree.children.insert(response, sub);
        }
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> StrategyTree {
        let mut t = StrategyTree::leaf("0123".parse().unwrap());
        let mut c = StrategyTree::leaf("0132".parse().unwrap());
        c.children
            .insert("2B2C".parse().unwrap(), StrategyTree::leaf("1023".parse().unwrap()));
        t.children.insert("2B2C".parse().unwrap(), c);
        t.children
            .insert("0C".parse().unwrap(), StrategyTree::leaf("4567".parse().unwrap()));
        t.children
            .insert("3B".parse().unwrap(), StrategyTree::leaf("0124".parse().unwrap()));
        t
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let doc = to_document(&sample());
        assert_eq!(
            doc,
            "{\"guess\":\"0123\",\"children\":{\"3B\":{\"guess\":\"0124\"},\"2B2C\":{\"guess\":\"0132\",\"children\":{\"2B2C\":{\"guess\":\"1023\"}}},\"0C\":{\"guess\":\"4567\"}}}\n"
        );
        let back = from_document(&doc).unwrap();
        assert_eq!(back, sample());
        assert_eq!(to_document(&back), doc);
    }

    #[test]
    fn leaf_only() {
        let t = from_document("{\"guess\":\"0123\"}").unwrap();
        assert!(t.is_leaf());
        assert_eq!(t.guess.to_string(), "0123");
    }

    #[test]
    fn impossible_key_is_located() {
        let err = from_document(
            r#"{"guess":"0123","children":{"0C":{"guess":"4567","children":{"3B1C":{"guess":"4576"}}}}}"#,
        )
        .unwrap_err();
        match err {
            DocumentError::Structure { path, message } => {
                assert_eq!(path, "$.children.0C");
                assert!(message.contains("3B1C"), "{message}");
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn other_errors() {
        assert!(matches!(
            from_document("{\"guess\":"),
            Err(DocumentError::Syntax { line: 1, .. })
        ));
        assert!(from_document(r#"{"guess":"0113"}"#).is_err());
        assert!(from_document(r#"{"guess":"01x3"}"#).is_err());
        assert!(from_document(r#"{"guess":"0123","children":{"4B":{"guess":"0123"}}}"#).is_err());
        assert!(from_document(r#"{"guess":"0123","kids":{}}"#).is_err());
    }
}
