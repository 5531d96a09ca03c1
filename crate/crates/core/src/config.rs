//! Flat `key = value` configuration files.
//!
//! ```text
//! # lattice
//! a_angstrom = 1000
//! e_a_ev = 1.0
//! theta_rad = 0.7853981634
//! ```
//!
//! Omitted keys take the defaults of [`LatticeConfig`] and [`DipoleOrientation`].

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::units::{validate_config, DipoleOrientation, LatticeConfig};

pub const KEYS: [&str; 8] = [
    "a_angstrom",
    "n_x",
    "n_y",
    "e_a_ev",
    "j_ev",
    "mu_e_angstrom",
    "theta_rad",
    "phi_rad",
];

pub fn parse_config(path: impl AsRef<Path>) -> Result<(LatticeConfig, DipoleOrientation)> {
    let text = fs::read_to_string(path)?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<(LatticeConfig, DipoleOrientation)> {
    let mut cfg = LatticeConfig::default();
    let mut dip = DipoleOrientation::default();
    // line on which each key was set, for diagnostics
    let mut origin = [0usize; KEYS.len()];

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::ConfigSyntax { line, message };

        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| syntax(format!("expected `key = value`, found `{content}`")))?;
        let key = key.trim();
        let value = value.trim();

        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| syntax(format!("unknown key `{key}`")))?;
        if origin[slot] != 0 {
            return Err(syntax(format!(
                "duplicate key `{key}` (first set on line {})",
                origin[slot]
            )));
        }
        origin[slot] = line;

        match key {
            "n_x" | "n_y" => {
                let n: usize = value
                    .parse()
                    .map_err(|_| syntax(format!("`{key}` expects a positive integer, found `{value}`")))?;
                if key == "n_x" {
                    cfg.n_x = n;
                } else {
                    cfg.n_y = n;
                }
            }
            _ => {
                let x: f64 = value
                    .parse()
                    .map_err(|_| syntax(format!("`{key}` expects a number, found `{value}`")))?;
                match key {
                    "a_angstrom" => cfg.a = x,
                    "e_a_ev" => cfg.e_a = x,
                    "j_ev" => cfg.j = x,
                    "mu_e_angstrom" => dip.mu = x,
                    "theta_rad" => dip.theta = x,
                    "phi_rad" => dip.phi = x,
                    _ => unreachable!(),
                }
            }
        }
    }

    validate_config(cfg, dip).map_err(|err| match err {
        Error::InvalidConfig(violations) => {
            // report against the line that set the first offending key
            let first = &violations[0];
            let line = KEYS
                .iter()
                .position(|k| *k == first.field)
                .map(|i| origin[i])
                .unwrap_or(0);
            let message = violations
                .iter()
                .map(|v| {
                    let at = KEYS
                        .iter()
                        .position(|k| *k == v.field)
                        .map(|i| origin[i])
                        .unwrap_or(0);
                    if at == 0 {
                        format!("{v} (default)")
                    } else {
                        format!("{v} (line {at})")
                    }
                })
                .collect::<Vec<_>>()
                .join("; ");
            Error::ConfigSyntax { line, message }
        }
        other => other,
    })
}
