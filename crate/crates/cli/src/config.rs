//! Rate-experiment configuration: file, then flags, then validation.

use rbf_lp::approx::{KernelSpec, LpNorm, RateConfig};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::run::CliError;
use crate::RatesArgs;

const DEFAULT_LEVELS: usize = 5;
const DEFAULT_H0: f64 = 0.125;

pub fn kernel_spec(family: &str, k: Option<usize>, gamma: Option<usize>) -> Result<KernelSpec, CliError> {
    match family {
        "wendland" => match (k, gamma) {
            (Some(k), None) => Ok(KernelSpec::Wendland { k }),
            (None, _) => Err(CliError::Config("wendland needs --k".into())),
            (Some(_), Some(_)) => Err(CliError::Config("--gamma does not apply to wendland".into())),
        },
        "sobolev" => match (gamma, k) {
            (Some(gamma), None) => Ok(KernelSpec::Sobolev { gamma }),
            (None, _) => Err(CliError::Config("sobolev needs --gamma".into())),
            (Some(_), Some(_)) => Err(CliError::Config("--k does not apply to sobolev".into())),
        },
        other => Err(CliError::Config(format!("unknown kernel family {other:?}"))),
    }
}

/// sha256 of the compact JSON; `serde_json` maps keep keys sorted.
pub fn config_hash(v: &Value) -> String {
    let text = serde_json::to_string(v).expect("json values always serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn halving(h0: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|i| h0 * 0.5f64.powi(i as i32)).collect()
}

/// Merges the optional file with the flags. The kernel (family and order)
/// and `d` must come from one of the two; everything else defaults to
/// [`RateConfig::one_dimensional`].
pub fn resolve_rates(a: &RatesArgs) -> Result<(RateConfig, String), CliError> {
    let mut file: Map<String, Value> = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
            match serde_json::from_str(&text) {
                Ok(Value::Object(m)) => m,
                Ok(_) => return Err(CliError::Config("config file must hold a JSON object".into())),
                Err(e) => return Err(CliError::Config(format!("parsing {}: {e}", path.display()))),
            }
        }
        None => Map::new(),
    };

    let kernel = match a.kernel {
        Some(f) => kernel_spec(f.name(), a.k, a.gamma)?,
        None => {
            if a.k.is_some() || a.gamma.is_some() {
                return Err(CliError::Config("--k/--gamma need --kernel".into()));
            }
            let v = file
                .get("kernel")
                .cloned()
                .ok_or_else(|| CliError::Config("no kernel given (use --kernel or a config file)".into()))?;
            serde_json::from_value(v).map_err(|e| CliError::Config(format!("kernel: {e}")))?
        }
    };
    let d = match a.d {
        Some(d) => d,
        None => file
            .get("d")
            .and_then(Value::as_u64)
            .ok_or_else(|| CliError::Config("no dimension given (use --d or a config file)".into()))?
            as usize,
    };

    // levels/h0 are shorthands for the spacing schedule
    let file_levels = file.remove("levels").and_then(|v| v.as_u64()).map(|v| v as usize);
    let file_h0 = file.remove("h0").and_then(|v| v.as_f64());

    let mut merged = match serde_json::to_value(RateConfig::one_dimensional(kernel)) {
        Ok(Value::Object(m)) => m,
        _ => unreachable!("RateConfig serializes to an object"),
    };
    for (key, v) in file {
        if !merged.contains_key(&key) {
            return Err(CliError::Config(format!("unknown config key {key:?}")));
        }
        merged.insert(key, v);
    }
    merged.insert("kernel".into(), serde_json::to_value(kernel)?);
    merged.insert("d".into(), json!(d));

    let levels = a.levels.or(file_levels);
    let h0 = a.h0.or(file_h0);
    if levels.is_some() || h0.is_some() {
        let n = levels.unwrap_or(DEFAULT_LEVELS);
        merged.insert("spacings".into(), json!(halving(h0.unwrap_or(DEFAULT_H0), n)));
    }
    if let Some(ps) = &a.p {
        let parsed = ps
            .iter()
            .map(|s| s.parse::<LpNorm>())
            .collect::<Result<Vec<_>, _>>()?;
        merged.insert("p".into(), serde_json::to_value(parsed)?);
    }
    if let Some(w) = &a.witness {
        let kind = if w == "qi" { "quasi_interpolant" } else { "least_squares" };
        merged.insert("witness".into(), json!(kind));
    }
    let mut set = |key: &str, v: Value| {
        merged.insert(key.into(), v);
    };
    if let Some(v) = a.jitter {
        set("jitter", json!(v));
    }
    if let Some(v) = a.seed {
        set("seed", json!(v));
    }
    if let Some(v) = a.c3 {
        set("c3", json!(v));
    }
    if let Some(v) = a.c2_cap {
        set("c2_cap", json!(v));
    }
    if let Some(v) = a.rho_max {
        set("rho_max", json!(v));
    }

    let value = Value::Object(merged);
    let cfg: RateConfig = serde_json::from_value(value).map_err(|e| CliError::Config(format!("config: {e}")))?;
    cfg.validate()?;
    // hash the round-tripped config so equivalent spellings agree
    let hash = config_hash(&serde_json::to_value(&cfg)?);
    Ok((cfg, hash))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_key_order() {
        let a: Value = serde_json::from_str(r#"{"a":1,"b":[1,2]}"#).unwrap();
        let b: Value = serde_json::from_str(r#"{"b":[1,2],"a":1}"#).unwrap();
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
    }

    #[test]
    fn halving_schedule() {
        assert_eq!(halving(0.5, 3), vec![0.5, 0.25, 0.125]);
    }

    #[test]
    fn kernel_order_must_match_family() {
        assert!(kernel_spec("wendland", None, Some(3)).is_err());
        assert!(kernel_spec("sobolev", Some(1), Some(2)).is_err());
        assert_eq!(kernel_spec("sobolev", None, Some(2)).unwrap(), KernelSpec::Sobolev { gamma: 2 });
    }
}
