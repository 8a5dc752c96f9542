//! Run configuration: `key=value` file, then `VLAB_*` environment
//! variables, then command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use vlab_core::criteria::Criterion;
use vlab_core::mc::DEFAULT_SEED;
use vlab_core::potential::PairPotential;
use vlab_core::report::tables::Format;
use vlab_core::series::Route;
use vlab_core::trees::Subset;

use crate::CliError;

pub const KEYS: [&str; 15] = [
    "n",
    "n-max",
    "criterion",
    "subset",
    "route",
    "potential",
    "dim",
    "sigma",
    "lambda",
    "beta-eps",
    "samples",
    "seed",
    "format",
    "out",
    "quantity",
];

pub const DEFAULT_SAMPLES: u64 = 1_000_000;

/// Normalizes `N_MAX`, `n_max` and `n-max` to one key.
pub fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

fn known(key: &str) -> Result<(), CliError> {
    if KEYS.contains(&key) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("unknown configuration key `{key}`")))
    }
}

pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
        let key = normalize_key(k);
        known(&key)?;
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

/// Layers the sources; later ones win.
pub fn merge(
    file: Option<&Path>,
    env: impl IntoIterator<Item = (String, String)>,
    flags: &BTreeMap<String, String>,
) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = match file {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
            parse_file(&text)?
        }
        None => BTreeMap::new(),
    };
    for (k, v) in env {
        if let Some(rest) = k.strip_prefix("VLAB_") {
            let key = normalize_key(rest);
            if key != "config" {
                known(&key)?;
                map.insert(key, v);
            }
        }
    }
    for (k, v) in flags {
        map.insert(k.clone(), v.clone());
    }
    Ok(map)
}

/// Typed accessors over the merged map. Every value read, including
/// defaults, is recorded so the effective configuration can be echoed.
pub struct RunConfig {
    raw: BTreeMap<String, String>,
    effective: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(raw: BTreeMap<String, String>) -> Self {
        RunConfig {
            raw,
            effective: BTreeMap::new(),
        }
    }

    pub fn effective(&self) -> &BTreeMap<String, String> {
        &self.effective
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.raw.contains_key(key)
    }

    fn get(&mut self, key: &str, default: Option<&str>) -> Result<String, CliError> {
        let v = match (self.raw.get(key), default) {
            (Some(v), _) => v.clone(),
            (None, Some(d)) => d.to_string(),
            (None, None) => return Err(CliError::Usage(format!("missing required option --{key}"))),
        };
        self.effective.insert(key.to_string(), v.clone());
        Ok(v)
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str, default: Option<&str>) -> Result<T, CliError> {
        let v = self.get(key, default)?;
        v.parse()
            .map_err(|_| CliError::Usage(format!("invalid value `{v}` for {key}")))
    }

    pub fn n(&mut self) -> Result<usize, CliError> {
        self.parsed("n", None)
    }

    pub fn n_max(&mut self, default: usize) -> Result<usize, CliError> {
        self.parsed("n-max", Some(&default.to_string()))
    }

    pub fn seed(&mut self) -> Result<u64, CliError> {
        self.parsed("seed", Some(&DEFAULT_SEED.to_string()))
    }

    pub fn samples(&mut self) -> Result<u64, CliError> {
        self.parsed("samples", Some(&DEFAULT_SAMPLES.to_string()))
    }

    pub fn out(&mut self) -> Option<String> {
        self.raw.get("out").cloned().inspect(|v| {
            self.effective.insert("out".into(), v.clone());
        })
    }

    pub fn quantity(&mut self) -> Result<String, CliError> {
        let q = self.get("quantity", Some("B"))?;
        match q.as_str() {
            "b" | "a" | "B" => Ok(q),
            _ => Err(CliError::Usage(format!("quantity `{q}` is not one of b, a, B"))),
        }
    }

    pub fn subset(&mut self) -> Result<Subset, CliError> {
        match self.get("subset", Some("full"))?.as_str() {
            "full" => Ok(Subset::Full),
            "a" => Ok(Subset::ASubset),
            other => Err(CliError::Usage(format!("subset `{other}` is not one of full, a"))),
        }
    }

    pub fn route(&mut self) -> Result<Route, CliError> {
        match self.get("route", Some("a"))?.as_str() {
            "b" => Ok(Route::B),
            "a" => Ok(Route::A),
            other => Err(CliError::Usage(format!("route `{other}` is not one of b, a"))),
        }
    }

    /// Criterion and whether it is the primed (base-set) variant.
    pub fn criterion(&mut self) -> Result<(Criterion, bool), CliError> {
        let v = self.get("criterion", Some("cr1"))?;
        let c = match v.as_str() {
            "cr1" | "cr1p" => Criterion::Cr1,
            "cr2" | "cr2p" => Criterion::Cr2,
            "cr3" | "cr3p" => Criterion::Cr3,
            other => {
                return Err(CliError::Usage(format!(
                    "criterion `{other}` is not one of cr1, cr2, cr3, cr1p, cr2p, cr3p"
                )))
            }
        };
        Ok((c, v.ends_with('p')))
    }

    pub fn format(&mut self, default: &str) -> Result<Format, CliError> {
        match self.get("format", Some(default))?.as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "md" => Ok(Format::Md),
            other => Err(CliError::Usage(format!("format `{other}` is not one of csv, json, md"))),
        }
    }

    pub fn potential(&mut self) -> Result<PairPotential, CliError> {
        let kind = self.get("potential", Some("hard-sphere"))?;
        let dim: usize = self.parsed("dim", Some("3"))?;
        let sigma: f64 = self.parsed("sigma", Some("1"))?;
        let p = match kind.as_str() {
            "hard-sphere" => PairPotential::hard_sphere(sigma, dim),
            "square-well" => {
                let lambda: f64 = self.parsed("lambda", Some("1.5"))?;
                let beta_eps: f64 = self.parsed("beta-eps", Some("1"))?;
                PairPotential::square_well(sigma, dim, lambda, beta_eps)
            }
            other => {
                return Err(CliError::Usage(format!(
                    "potential `{other}` is not one of hard-sphere, square-well"
                )))
            }
        };
        p.map_err(CliError::Core)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "# comment\nn = 3\nseed=5\nN_MAX=4\n").unwrap();
        let env = vec![("VLAB_SEED".to_string(), "6".to_string()), ("HOME".into(), "/".into())];
        let flags = BTreeMap::from([("n".to_string(), "4".to_string())]);
        let m = merge(Some(&path), env, &flags).unwrap();
        assert_eq!(m["n"], "4");
        assert_eq!(m["seed"], "6");
        assert_eq!(m["n-max"], "4");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_file("nope").is_err());
        assert!(parse_file("colour=red").is_err());
        let mut c = RunConfig::new(BTreeMap::from([("route".to_string(), "c".to_string())]));
        assert!(matches!(c.route(), Err(CliError::Usage(_))));
    }

    #[test]
    fn defaults_are_recorded() {
        let mut c = RunConfig::new(BTreeMap::new());
        assert_eq!(c.seed().unwrap(), DEFAULT_SEED);
        c.potential().unwrap();
        let e = c.effective();
        assert_eq!(e["seed"], "1729");
        assert_eq!(e["potential"], "hard-sphere");
        assert_eq!(e["sigma"], "1");
        assert!(!e.contains_key("lambda"));
    }
}
