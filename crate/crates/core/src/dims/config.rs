//! Line-oriented operad definitions:
//!
//! ```text
//! # comments run to end of line
//! pois-like = [1, 2, 6]            # dim O(2), dim O(3), dim O(4)
//! lie2 = builtin:lie
//! mixed = [1, 2], builtin:lie      # explicit prefix, closed-form tail
//! ```

use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::{Builtin, OperadDims};
use crate::error::DimsError;

pub type OperadConfig = BTreeMap<String, OperadDims>;

pub fn parse_operad_config(text: &str) -> Result<OperadConfig, DimsError> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| DimsError::Config { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (name, value) = content
            .split_once('=')
            .ok_or_else(|| err("expected `name = value`".into()))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '-' || c == '_') {
            return Err(err(format!("invalid operad name `{name}`")));
        }
        let value = value.trim();
        let dims = if let Some(rest) = value.strip_prefix('[') {
            let (list, after) = rest
                .split_once(']')
                .ok_or_else(|| err("unterminated `[`".into()))?;
            let mut values = Vec::new();
            for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let v: BigUint = item
                    .parse()
                    .map_err(|_| err(format!("`{item}` is not a nonnegative integer")))?;
                values.push(v);
            }
            let after = after.trim();
            let tail = if after.is_empty() {
                None
            } else {
                let id = after
                    .strip_prefix(',')
                    .map(str::trim)
                    .and_then(|s| s.strip_prefix("builtin:"))
                    .ok_or_else(|| err(format!("unexpected `{after}` after sequence")))?;
                Some(id.trim().parse::<Builtin>().map_err(|e| err(e.to_string()))?)
            };
            OperadDims::explicit(name, values, tail)
        } else if let Some(id) = value.strip_prefix("builtin:") {
            let b: Builtin = id.trim().parse().map_err(|e: DimsError| err(e.to_string()))?;
            OperadDims { name: name.to_string(), ..OperadDims::builtin(b) }
        } else {
            return Err(err(format!("expected `[...]` or `builtin:<id>`, got `{value}`")));
        };
        if out.insert(name.to_string(), dims).is_some() {
            return Err(err(format!("operad `{name}` defined twice")));
        }
    }
    Ok(out)
}

/// Resolves an operad spec: a name from `config` first, then a built-in id.
pub fn resolve_operad(spec: &str, config: Option<&OperadConfig>) -> Result<OperadDims, DimsError> {
    if let Some(d) = config.and_then(|c| c.get(spec)) {
        return Ok(d.clone());
    }
    OperadDims::named(spec.strip_prefix("builtin:").unwrap_or(spec))
}
