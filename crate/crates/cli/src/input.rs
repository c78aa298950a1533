//! Loading JSON arguments that are given inline or as file paths.

use std::fs;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;

use crate::Failure;

/// Reads `arg` as JSON text when it starts with `{` or `[`, otherwise as a path.
pub fn load<T: DeserializeOwned>(what: &str, arg: &str) -> Result<T, Failure> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::input(format!("cannot read {what} file {arg:?}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("bad {what}: {e}")))
}

/// `1,2,3` as exact integers.
pub fn integer_list(flag: &str, text: &str) -> Result<Vec<BigInt>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| BigInt::from_str(t).map_err(|_| Failure::input(format!("bad integer {t:?} in --{flag}"))))
        .collect()
}

pub fn write_file(path: &str, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::input(format!("cannot write {path:?}: {e}")))
}
