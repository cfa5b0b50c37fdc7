//! Flat `key=value` run configuration.
//!
//! Precedence, lowest first: built-in defaults, config file, `SQG_*`
//! environment variables, explicit overrides.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::gevrey::GevreyParams;
use crate::littlewood_paley::BesovParams;
use crate::solver::{Dealias, DiagnosticsSpec, InitialData, SolverConfig};
use crate::spectral::Grid;
use crate::{Error, Result};

/// Environment variables `SQG_<KEY>` (key upper-cased) override file values.
pub const ENV_PREFIX: &str = "SQG_";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyKind {
    Float,
    Int,
    Text,
    Choice(&'static [&'static str]),
}

impl KeyKind {
    fn describe(&self) -> &'static str {
        match self {
            KeyKind::Float => "number",
            KeyKind::Int => "non-negative integer",
            KeyKind::Text => "text",
            KeyKind::Choice(_) => "one of the listed choices",
        }
    }

    fn accepts(&self, v: &str) -> bool {
        match self {
            KeyKind::Float => v.parse::<f64>().is_ok(),
            KeyKind::Int => v.parse::<u64>().is_ok(),
            KeyKind::Text => true,
            KeyKind::Choice(opts) => opts.contains(&v),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub key: &'static str,
    pub kind: KeyKind,
    pub default: &'static str,
    pub doc: &'static str,
}

const INIT_KINDS: &[&str] = &[
    "zero",
    "mode",
    "vortex-pair",
    "random-band",
    "ring",
    "snapshot",
];

macro_rules! keys {
    ($($key:literal : $kind:expr, $default:literal, $doc:literal;)*) => {
        /// Every recognized key with its type and default.
        pub const KEYS: &[KeySpec] = &[$(KeySpec { key: $key, kind: $kind, default: $default, doc: $doc }),*];
    };
}

keys! {
    "n": KeyKind::Int, "128", "grid points per axis (power of two)";
    "box_length": KeyKind::Float, "6.283185307179586", "period L of the box";
    "kappa": KeyKind::Float, "0.8", "dissipation order";
    "dt": KeyKind::Float, "0.01", "time step";
    "t_end": KeyKind::Float, "0.5", "final time";
    "dealias": KeyKind::Choice(&["two-thirds", "none"]), "two-thirds", "dealiasing rule";
    "picard_depth": KeyKind::Int, "6", "number of Picard iterates beyond the heat flow";
    "record_every": KeyKind::Int, "5", "steps between snapshots";
    "init": KeyKind::Choice(INIT_KINDS), "random-band", "initial data profile";
    "amplitude": KeyKind::Float, "0.1", "profile amplitude (Besov norm for random-band)";
    "init_mode_1": KeyKind::Float, "1", "first frequency of the mode profile";
    "init_mode_2": KeyKind::Float, "0", "second frequency of the mode profile";
    "init_width": KeyKind::Float, "0.5", "vortex width";
    "init_separation": KeyKind::Float, "1.5", "vortex separation";
    "init_ring": KeyKind::Int, "4", "ring radius in lattice units";
    "init_seed": KeyKind::Int, "1", "seed of the random-band profile";
    "init_path": KeyKind::Text, "", "snapshot file for the snapshot profile";
    "sigma": KeyKind::Float, "1.2", "base Besov regularity";
    "p": KeyKind::Float, "2", "Besov integrability";
    "q": KeyKind::Float, "2", "Besov summation index";
    "alpha": KeyKind::Float, "0.4", "Gevrey exponent";
    "lambda": KeyKind::Float, "1", "radius growth rate";
    "beta": KeyKind::Float, "0.3", "time-weight exponent";
    "sharpness": KeyKind::Float, "1", "transition sharpness of the dyadic bump";
    "seed": KeyKind::Int, "1", "seed for verification trials";
    "trials": KeyKind::Int, "0", "trial count for checks (0 keeps each check's default)";
    "slope_slack": KeyKind::Float, "0.2", "allowed slope excess in log2 units";
    "constant_cap": KeyKind::Float, "50", "largest accepted fitted constant";
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<&'static str, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            values: KEYS
                .iter()
                .map(|k| (k.key, k.default.to_string()))
                .collect(),
        }
    }
}

fn spec(key: &str) -> Result<&'static KeySpec> {
    KEYS.iter()
        .find(|k| k.key == key)
        .ok_or_else(|| Error::UnknownKey {
            key: key.to_string(),
            valid: KEYS.iter().map(|k| k.key.to_string()).collect(),
        })
}

impl RunConfig {
    /// Sets one key after checking its name and type.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let s = spec(key)?;
        let value = value.trim();
        if !s.kind.accepts(value) {
            return Err(Error::TypeMismatch {
                key: key.to_string(),
                expected: s.kind.describe(),
                value: value.to_string(),
            });
        }
        self.values.insert(s.key, value.to_string());
        Ok(())
    }

    /// Applies `key=value` lines; `#` starts a comment line.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected key=value, got `{line}`"),
            })?;
            self.set(k.trim(), v).map_err(|e| match e {
                Error::UnknownKey { .. } | Error::TypeMismatch { .. } => Error::Parse {
                    line: i + 1,
                    message: e.to_string(),
                },
                other => other,
            })?;
        }
        Ok(())
    }

    /// Applies `SQG_<KEY>` variables; other variables are ignored.
    pub fn apply_env<I: IntoIterator<Item = (String, String)>>(&mut self, vars: I) -> Result<()> {
        for (name, value) in vars {
            if let Some(rest) = name.strip_prefix(ENV_PREFIX) {
                let key = rest.to_ascii_lowercase();
                if KEYS.iter().any(|k| k.key == key) {
                    self.set(&key, &value)?;
                }
            }
        }
        Ok(())
    }

    /// Applies `key=value` override strings.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<()> {
        for o in overrides {
            let o = o.as_ref();
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override `{o}` is not key=value")))?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    /// Defaults, then the file text, then environment, then overrides.
    pub fn load<S: AsRef<str>>(
        text: Option<&str>,
        env: impl IntoIterator<Item = (String, String)>,
        overrides: &[S],
    ) -> Result<Self> {
        let mut c = RunConfig::default();
        if let Some(t) = text {
            c.apply_text(t)?;
        }
        c.apply_env(env)?;
        c.apply_overrides(overrides)?;
        Ok(c)
    }

    pub fn get(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    pub fn float(&self, key: &str) -> f64 {
        self.get(key).parse().expect("validated on insert")
    }

    pub fn int(&self, key: &str) -> u64 {
        self.get(key).parse().expect("validated on insert")
    }

    /// `config.key=value` pairs for every key, in key order.
    pub fn echo(&self) -> Vec<(String, String)> {
        self.values
            .iter()
            .map(|(k, v)| (format!("config.{k}"), v.clone()))
            .collect()
    }

    /// The effective config as `key=value` text, readable by [`RunConfig::apply_text`].
    pub fn to_text(&self) -> String {
        self.values
            .iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.int("n") as usize, self.float("box_length"))
    }

    pub fn besov(&self) -> Result<BesovParams> {
        BesovParams::new(self.float("sigma"), self.float("p"), self.float("q"))
    }

    pub fn gevrey(&self) -> Result<GevreyParams> {
        let gp = GevreyParams {
            alpha: self.float("alpha"),
            gamma: 0.0,
            lambda: self.float("lambda"),
            kappa: self.float("kappa"),
            beta: self.float("beta"),
        };
        gp.validate()?;
        Ok(gp)
    }

    pub fn initial_data(&self) -> Result<InitialData> {
        let amplitude = self.float("amplitude");
        let freq = |key: &str| -> Result<i64> {
            let v = self.float(key);
            if v.fract() != 0.0 {
                return Err(Error::TypeMismatch {
                    key: key.to_string(),
                    expected: "integer",
                    value: self.get(key).to_string(),
                });
            }
            Ok(v as i64)
        };
        Ok(match self.get("init") {
            "zero" => InitialData::Zero,
            "mode" => InitialData::Mode {
                m: (freq("init_mode_1")?, freq("init_mode_2")?),
                amplitude,
            },
            "vortex-pair" => InitialData::VortexPair {
                amplitude,
                width: self.float("init_width"),
                separation: self.float("init_separation"),
            },
            "random-band" => InitialData::RandomBand {
                norm: amplitude,
                besov: self.besov()?,
                seed: self.int("init_seed"),
            },
            "ring" => InitialData::Ring {
                radius: self.int("init_ring") as usize,
                amplitude,
            },
            "snapshot" => {
                let path = self.get("init_path");
                if path.is_empty() {
                    return Err(Error::Config("init=snapshot needs init_path".into()));
                }
                InitialData::Snapshot {
                    path: PathBuf::from(path),
                }
            }
            other => unreachable!("choice `{other}` validated on insert"),
        })
    }

    pub fn solver(&self) -> Result<SolverConfig> {
        let c = SolverConfig {
            grid: self.grid()?,
            kappa: self.float("kappa"),
            dt: self.float("dt"),
            t_end: self.float("t_end"),
            dealias: self.get("dealias").parse::<Dealias>()?,
            picard_depth: self.int("picard_depth") as usize,
            initial_data: self.initial_data()?,
            record_every: self.int("record_every") as usize,
            diagnostics: DiagnosticsSpec {
                p: self.float("p"),
                besov: self.besov()?,
                alpha: self.float("alpha"),
            },
        };
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NO_ENV: [(String, String); 0] = [];

    #[test]
    fn empty_text_gives_defaults() {
        let c = RunConfig::load(Some(""), NO_ENV, &[] as &[&str]).unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.solver().unwrap(), SolverConfig::default());
    }

    #[test]
    fn overrides_win_and_reach_the_echo() {
        let env = vec![
            ("SQG_KAPPA".to_string(), "0.6".to_string()),
            ("HOME".into(), "/x".into()),
        ];
        let c =
            RunConfig::load(Some("kappa = 0.5\n# note\n\ndt=0.02"), env, &["kappa=0.8"]).unwrap();
        assert_eq!(c.float("kappa"), 0.8);
        assert_eq!(c.float("dt"), 0.02);
        assert!(c
            .echo()
            .contains(&("config.kappa".to_string(), "0.8".to_string())));
        let env = vec![("SQG_KAPPA".to_string(), "0.6".to_string())];
        let c = RunConfig::load(Some("kappa = 0.5"), env, &[] as &[&str]).unwrap();
        assert_eq!(c.float("kappa"), 0.6);
    }

    #[test]
    fn errors_carry_line_numbers_and_key_lists() {
        match RunConfig::load(Some("n=64\nthis is not a pair\n"), NO_ENV, &[] as &[&str]) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match RunConfig::default().set("kapa", "1") {
            Err(Error::UnknownKey { valid, .. }) => assert!(valid.contains(&"kappa".to_string())),
            other => panic!("{other:?}"),
        }
        match RunConfig::default().set("n", "big") {
            Err(Error::TypeMismatch { expected, .. }) => {
                assert_eq!(expected, "non-negative integer")
            }
            other => panic!("{other:?}"),
        }
        assert!(RunConfig::default().set("dealias", "half").is_err());
        assert!(RunConfig::default().apply_overrides(&["kappa"]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::default();
        c.set("init", "vortex-pair").unwrap();
        c.set("amplitude", "2.5").unwrap();
        let mut back = RunConfig::default();
        back.apply_text(&c.to_text()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.initial_data().unwrap().name(), "vortex-pair");
    }
}
