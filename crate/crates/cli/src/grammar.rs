//! `pow:beta=<f>`, `logpow:gamma=<f>`, `exppow:gamma=<f>`, `table:<path>`.

use std::fs;
use std::path::Path;

use harmsum_core::weights::{Table, WeightFunction};

use crate::{CliError, Result};

fn param(rest: &str, name: &str) -> Result<f64> {
    let value = rest
        .strip_prefix(name)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| CliError::Parse(format!("expected `{name}=<float>`, got `{rest}`")))?;
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Parse(format!("bad number `{value}`")))
}

pub fn parse_weight(spec: &str) -> Result<WeightFunction> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Parse(format!("weight `{spec}` has no `kind:` prefix")))?;
    let w = match kind {
        "pow" => WeightFunction::power(param(rest, "beta")?)?,
        "logpow" => WeightFunction::log_power(param(rest, "gamma")?)?,
        "exppow" => WeightFunction::exp_power(param(rest, "gamma")?)?,
        "table" => WeightFunction::tabulated(load_table(Path::new(rest))?),
        _ => return Err(CliError::Parse(format!("unknown weight kind `{kind}`"))),
    };
    Ok(w)
}

/// One `s logw` pair per line; blank lines and `#` comments are skipped.
pub fn parse_table(text: &str) -> Result<Table> {
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(s), Some(lw), None) = (it.next(), it.next(), it.next()) else {
            return Err(CliError::Parse(format!("table line {}: expected `s logw`", i + 1)));
        };
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| CliError::Parse(format!("table line {}: bad number `{t}`", i + 1)))
        };
        samples.push((num(s)?, num(lw)?));
    }
    Ok(Table::new(&samples)?)
}

pub fn load_table(path: &Path) -> Result<Table> {
    parse_table(&fs::read_to_string(path)?)
}
