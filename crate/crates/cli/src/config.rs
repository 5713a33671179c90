//! Run configuration: complex-point parsing, `key = value` config files,
//! and the defaults/file/flags precedence (flags win, then file, then
//! defaults).

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

/// Parse "0.5+14.1347i", "0.5", "-1.25-3i", "2i".
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // split off the imaginary coefficient: the sign that starts it is
        // the last +/- not operating as an exponent sign
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re: f64 = body[..i].parse().map_err(|_| format!("bad real part in {text:?}"))?;
                let im_text = &body[i..];
                let im: f64 = if im_text == "+" {
                    1.0
                } else if im_text == "-" {
                    -1.0
                } else {
                    im_text.parse().map_err(|_| format!("bad imaginary part in {text:?}"))?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else {
                    body.parse().map_err(|_| format!("bad imaginary part in {text:?}"))?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t.parse().map_err(|_| format!("bad complex literal {text:?}"))?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Canonical form that `parse_complex` round-trips.
pub fn canonical_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parse a limit like "100000" or "1e8".
pub fn parse_limit(text: &str) -> Result<u64, String> {
    let t = text.trim();
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = t.parse().map_err(|_| format!("bad limit {text:?}"))?;
    if !f.is_finite() || f < 0.0 || f > 2f64.powi(53) {
        return Err(format!("limit {text:?} out of range"));
    }
    Ok(f.round() as u64)
}

/// `key = value` configuration file; '#' starts a comment.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", lineno + 1))?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| format!("config key {key}: bad value {v:?}")),
        }
    }
}

/// Settings resolved from flags > config file > environment > defaults.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub checkpoints: usize,
    pub tolerance: f64,
}

pub fn resolve(
    file: &ConfigFile,
    threads_flag: Option<usize>,
    cache_flag: Option<PathBuf>,
    checkpoints_flag: Option<usize>,
    tolerance_flag: Option<f64>,
) -> Result<Resolved, String> {
    let threads = match threads_flag {
        Some(t) => Some(t),
        None => match file.get_parsed::<usize>("threads")? {
            Some(t) => Some(t),
            None => std::env::var("DRH_THREADS").ok().and_then(|v| v.parse().ok()),
        },
    };
    let cache_dir = cache_flag
        .or_else(|| file.get("cache_dir").map(PathBuf::from))
        .or_else(drh_core::cache::cache_dir_from_env);
    let checkpoints = match checkpoints_flag {
        Some(c) => c,
        None => file.get_parsed::<usize>("checkpoints")?.unwrap_or(64),
    };
    let tolerance = match tolerance_flag {
        Some(t) => t,
        None => file.get_parsed::<f64>("tolerance")?.unwrap_or(0.15),
    };
    Ok(Resolved { threads, cache_dir, checkpoints, tolerance })
}
