//! Plain-text `key = value` configuration for [`PipelineParams`].
//!
//! Recognized keys: `sigma`, `radius`, `epsilon`, `k`, `w1`, `thb`, `tharea`,
//! `thr`, `margin`. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pipeline::PipelineParams;

pub const KEYS: &[&str] = &[
    "sigma", "radius", "epsilon", "k", "w1", "thb", "tharea", "thr", "margin",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

/// Sets one parameter by key. Range checks happen in [`PipelineParams::validate`].
pub fn set_param(params: &mut PipelineParams, key: &str, value: &str) -> Result<()> {
    let f = &mut params.filter;
    match key.trim() {
        "sigma" => f.tree.sigma = parse(key, value)?,
        "radius" => f.guided.radius = parse(key, value)?,
        "epsilon" => f.guided.epsilon = parse(key, value)?,
        "k" => f.k = parse(key, value)?,
        "w1" => f.w1 = parse(key, value)?,
        "thb" => f.threshold = parse(key, value)?,
        "tharea" => params.area_threshold = parse(key, value)?,
        "thr" => params.match_radius = parse(key, value)?,
        "margin" => params.margin = parse(key, value)?,
        other => return Err(Error::Config(format!("unknown key {other:?}"))),
    }
    Ok(())
}

/// Applies every line of `text` on top of `params`, then validates.
pub fn apply_config(params: &mut PipelineParams, text: &str) -> Result<()> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "line {}: expected key=value, got {raw:?}",
                lineno + 1
            ))
        })?;
        set_param(params, key, value)
            .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
    }
    params.validate()
}

pub fn load_config(path: &Path) -> Result<PipelineParams> {
    let mut params = PipelineParams::default();
    apply_config(&mut params, &std::fs::read_to_string(path)?)?;
    Ok(params)
}

pub fn to_config_string(params: &PipelineParams) -> String {
    let f = &params.filter;
    let mut out = String::new();
    let _ = writeln!(out, "sigma = {}", f.tree.sigma);
    let _ = writeln!(out, "radius = {}", f.guided.radius);
    let _ = writeln!(out, "epsilon = {}", f.guided.epsilon);
    let _ = writeln!(out, "k = {}", f.k);
    let _ = writeln!(out, "w1 = {}", f.w1);
    let _ = writeln!(out, "thb = {}", f.threshold);
    let _ = writeln!(out, "tharea = {}", params.area_threshold);
    let _ = writeln!(out, "thr = {}", params.match_radius);
    let _ = writeln!(out, "margin = {}", params.margin);
    out
}
