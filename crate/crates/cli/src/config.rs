//! Run configuration: a flat `key = value` text file, one entry per line,
//! `#` starts a comment. See the README for the list of keys.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use alphaflow::flow::{StopCriteria, DEFAULT_SAFETY, DEFAULT_V_MIN_FRACTION};
use alphaflow::sphere::MIN_RESOLUTION;
use alphaflow::{BodySpec, Mode, Resolution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

const KEYS: &[&str] = &[
    "dim",
    "alpha",
    "resolution",
    "body",
    "radius",
    "radii",
    "modes",
    "random_modes",
    "random_amplitude",
    "mode",
    "dt_safety",
    "v_min",
    "t_max",
    "tau_end",
    "max_steps",
    "sample_interval",
    "snapshot_interval",
    "output_dir",
    "seed",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunMode {
    Physical,
    Rescaled,
    Both,
}

impl RunMode {
    pub fn physical(self) -> bool {
        matches!(self, RunMode::Physical | RunMode::Both)
    }

    pub fn rescaled(self) -> bool {
        matches!(self, RunMode::Rescaled | RunMode::Both)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub alpha: f64,
    pub resolution: Resolution,
    pub body: BodySpec,
    pub mode: RunMode,
    pub dt_safety: f64,
    pub stop: StopCriteria,
    pub sample_interval: usize,
    /// Snapshot every this many steps (default: `sample_interval`); 0 writes
    /// only the first and last.
    pub snapshot_interval: usize,
    pub output_dir: PathBuf,
    pub seed: u64,
}

fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(ConfigError::Syntax { line: i + 1 });
        }
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey(key));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(ConfigError::Duplicate { line: i + 1, key });
        }
    }
    Ok(map)
}

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn raw(&self, key: &'static str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parse<T: std::str::FromStr>(&self, key: &'static str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>().map_err(|e| ConfigError::Invalid {
                    key,
                    reason: format!("`{v}`: {e}"),
                })
            })
            .transpose()
    }

    fn positive(&self, key: &'static str, default: Option<f64>) -> Result<f64, ConfigError> {
        let value = match self.parse::<f64>(key)? {
            Some(v) => v,
            None => default.ok_or(ConfigError::Missing(key))?,
        };
        if value > 0.0 && !value.is_nan() {
            Ok(value)
        } else {
            Err(ConfigError::Invalid {
                key,
                reason: format!("must be positive, got {value}"),
            })
        }
    }
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        reason: reason.into(),
    }
}

fn parse_modes(text: &str) -> Result<Vec<Mode>, ConfigError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let parts: Vec<&str> = item.split(':').map(str::trim).collect();
            let [degree, order, amplitude] = parts[..] else {
                return Err(invalid("modes", format!("`{item}` is not `degree:order:amplitude`")));
            };
            Ok(Mode {
                degree: degree.parse().map_err(|_| invalid("modes", format!("bad degree in `{item}`")))?,
                order: order.parse().map_err(|_| invalid("modes", format!("bad order in `{item}`")))?,
                amplitude: amplitude
                    .parse()
                    .map_err(|_| invalid("modes", format!("bad amplitude in `{item}`")))?,
            })
        })
        .collect()
}

/// `count` modes with degrees 2–4, uniformly random orders and amplitudes in
/// `[−max_amplitude, max_amplitude]`, drawn from a ChaCha8 stream seeded by
/// `seed`.
pub fn random_modes(dim: usize, count: usize, max_amplitude: f64, seed: u64) -> Vec<Mode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let degree: u32 = rng.random_range(2..=4);
            let order = if dim == 1 {
                if rng.random_bool(0.5) { 0 } else { -1 }
            } else {
                rng.random_range(-(degree as i32)..=degree as i32)
            };
            Mode {
                degree,
                order,
                amplitude: rng.random_range(-max_amplitude..=max_amplitude),
            }
        })
        .collect()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let e = Entries(parse_pairs(text)?);

        let dim = e.parse::<usize>("dim")?.ok_or(ConfigError::Missing("dim"))?;
        if dim != 1 && dim != 2 {
            return Err(invalid("dim", format!("must be 1 or 2, got {dim}")));
        }
        let alpha = e.positive("alpha", None)?;
        let counts: Vec<usize> = e
            .raw("resolution")
            .ok_or(ConfigError::Missing("resolution"))?
            .split('x')
            .map(|c| c.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|err| invalid("resolution", err.to_string()))?;
        if let Some(bad) = counts.iter().find(|&&c| c < MIN_RESOLUTION || c % 2 != 0) {
            return Err(invalid(
                "resolution",
                format!("node counts must be even and at least {MIN_RESOLUTION}, got {bad}"),
            ));
        }
        let resolution =
            Resolution::from_counts(dim, &counts).map_err(|err| invalid("resolution", err.to_string()))?;
        let seed = e.parse::<u64>("seed")?.unwrap_or(0);

        let body = match e.raw("body").unwrap_or("sphere") {
            "sphere" => BodySpec::Sphere {
                radius: e.positive("radius", Some(1.0))?,
            },
            "ellipsoid" => {
                let radii = e
                    .raw("radii")
                    .ok_or(ConfigError::Missing("radii"))?
                    .split(',')
                    .map(|r| r.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|err| invalid("radii", err.to_string()))?;
                BodySpec::Ellipsoid { radii }
            }
            "perturbed" => {
                let mut modes = e.raw("modes").map(parse_modes).transpose()?.unwrap_or_default();
                let extra = e.parse::<usize>("random_modes")?.unwrap_or(0);
                if extra > 0 {
                    let amplitude = e.positive("random_amplitude", Some(0.01))?;
                    modes.extend(random_modes(dim, extra, amplitude, seed));
                }
                BodySpec::PerturbedSphere {
                    radius: e.positive("radius", Some(1.0))?,
                    modes,
                }
            }
            other => return Err(invalid("body", format!("unknown body `{other}`"))),
        };
        body.validate(dim).map_err(|err| invalid("body", err.to_string()))?;

        let mode = match e.raw("mode").unwrap_or("physical") {
            "physical" => RunMode::Physical,
            "rescaled" => RunMode::Rescaled,
            "both" => RunMode::Both,
            other => return Err(invalid("mode", format!("unknown mode `{other}`"))),
        };
        let dt_safety = e.positive("dt_safety", Some(DEFAULT_SAFETY))?;
        if dt_safety > 1.0 {
            return Err(invalid("dt_safety", "must not exceed 1"));
        }
        let v_min_fraction = e.positive("v_min", Some(DEFAULT_V_MIN_FRACTION))?;
        if v_min_fraction >= 1.0 {
            return Err(invalid("v_min", "is a fraction of the initial volume and must be below 1"));
        }
        let tau_end = e.positive("tau_end", Some(f64::INFINITY))?;
        if mode.rescaled() && !tau_end.is_finite() {
            return Err(ConfigError::Missing("tau_end"));
        }
        let max_steps = e.parse::<usize>("max_steps")?.unwrap_or(10_000_000);
        if max_steps == 0 {
            return Err(invalid("max_steps", "must be positive"));
        }
        let sample_interval = e.parse::<usize>("sample_interval")?.unwrap_or(100);
        if sample_interval == 0 {
            return Err(invalid("sample_interval", "must be positive"));
        }

        Ok(RunConfig {
            dim,
            alpha,
            resolution,
            body,
            mode,
            dt_safety,
            stop: StopCriteria {
                v_min_fraction,
                t_max: e.positive("t_max", Some(f64::INFINITY))?,
                tau_end,
                max_steps,
            },
            sample_interval,
            snapshot_interval: e.parse::<usize>("snapshot_interval")?.unwrap_or(sample_interval),
            output_dir: PathBuf::from(e.raw("output_dir").unwrap_or("out")),
            seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPHERE: &str = "
        # unit sphere
        dim = 2
        alpha = 1
        resolution = 16x32
        body = sphere
        output_dir = /tmp/x
    ";

    #[test]
    fn parses_minimal_config() {
        let c = RunConfig::parse(SPHERE).unwrap();
        assert_eq!(c.dim, 2);
        assert_eq!(c.resolution, Resolution::Sphere { n_theta: 16, n_phi: 32 });
        assert_eq!(c.body, BodySpec::Sphere { radius: 1.0 });
        assert_eq!(c.mode, RunMode::Physical);
        assert_eq!(c.stop.v_min_fraction, 1e-4);
        assert_eq!(c.output_dir, PathBuf::from("/tmp/x"));
    }

    #[test]
    fn perturbed_modes_and_random_modes() {
        let text = "dim = 1\nalpha = 0.5\nresolution = 128\nbody = perturbed\nmodes = 2:0:0.05, 3:-1:0.01\nrandom_modes = 2\nrandom_amplitude = 0.01\nseed = 7\n";
        let c = RunConfig::parse(text).unwrap();
        let BodySpec::PerturbedSphere { modes, .. } = &c.body else {
            panic!("wrong body");
        };
        assert_eq!(modes.len(), 4);
        assert_eq!(modes[1], Mode { degree: 3, order: -1, amplitude: 0.01 });
        assert_eq!(RunConfig::parse(text).unwrap(), c);
        assert!(modes[2..].iter().all(|m| m.amplitude.abs() <= 0.01 && (2..=4).contains(&m.degree)));
    }

    #[test]
    fn rejects_bad_configs() {
        let cases = [
            "dim = 2\nalpha = 1\nresolution = 16x32\ncolour = red\n",
            "dim = 3\nalpha = 1\nresolution = 16\n",
            "dim = 2\nalpha = -1\nresolution = 16x32\n",
            "dim = 2\nalpha = 1\nresolution = 15x32\n",
            "dim = 2\nalpha = 1\nresolution = 16x32\nmode = rescaled\n",
            "dim = 2\nalpha = 1\n",
            "dim = 2\nalpha = 1\nresolution = 16x32\nbody = ellipsoid\nradii = 1,2\n",
            "dim = 2\nalpha 1\n",
            "dim = 2\ndim = 2\n",
        ];
        for text in cases {
            assert!(RunConfig::parse(text).is_err(), "{text}");
        }
    }
}
