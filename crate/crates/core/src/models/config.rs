//! Flat `key = value` configuration files.
//!
//! ```text
//! # comment
//! problem = sin
//! model = atan
//! elements = 8
//! source = const:1
//! ```

use std::path::Path;
use std::sync::Arc;

use super::coefficient::builtin_model;
use super::problems::{builtin_problem, ProblemSpec, ScalarFn};
use crate::error::{Error, Result};
use crate::geometry::read_mesh;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyValue {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Split a config text into entries. Blank lines and `#` comments are
/// skipped; a key given twice is an error.
pub fn parse_key_values(text: &str) -> Result<Vec<KeyValue>> {
    let mut out: Vec<KeyValue> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            message: format!("expected `key = value`, got `{content}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty key or value".into(),
            });
        }
        if let Some(prev) = out.iter().find(|e| e.key == k) {
            return Err(Error::Parse {
                line,
                message: format!("key `{k}` already set on line {}", prev.line),
            });
        }
        out.push(KeyValue {
            line,
            key: k.to_owned(),
            value: v.to_owned(),
        });
    }
    Ok(out)
}

/// Named scalar functions: `zero`, `one`, `const:<value>`.
pub fn parse_named_function(name: &str) -> Option<ScalarFn> {
    match name {
        "zero" => Some(Arc::new(|_| 0.0)),
        "one" => Some(Arc::new(|_| 1.0)),
        _ => {
            let c: f64 = name.strip_prefix("const:")?.trim().parse().ok()?;
            c.is_finite().then(|| Arc::new(move |_| c) as ScalarFn)
        }
    }
}

/// Keys understood by [`ProblemConfig`].
pub const PROBLEM_KEYS: &[&str] = &[
    "problem",
    "model",
    "mesh",
    "elements",
    "levels",
    "source",
    "neumann",
    "dirichlet",
    "stiffness_order",
    "load_order",
];

/// Problem selection: a builtin problem, optionally with its model, mesh,
/// data or quadrature replaced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProblemConfig {
    pub problem: Option<String>,
    pub model: Option<String>,
    pub mesh: Option<String>,
    pub elements: Option<usize>,
    pub levels: Option<usize>,
    pub source: Option<String>,
    pub neumann: Option<String>,
    pub dirichlet: Option<String>,
    pub stiffness_order: Option<usize>,
    pub load_order: Option<usize>,
}

fn parse_usize(kv: &KeyValue) -> Result<usize> {
    kv.value.parse().map_err(|_| Error::Parse {
        line: kv.line,
        message: format!("`{}` must be a non-negative integer, got `{}`", kv.key, kv.value),
    })
}

impl ProblemConfig {
    /// Take the problem keys out of `entries`, leaving the rest.
    pub fn extract(entries: &mut Vec<KeyValue>) -> Result<Self> {
        let mut cfg = Self::default();
        let mut rest = Vec::new();
        for kv in entries.drain(..) {
            match kv.key.as_str() {
                "problem" => cfg.problem = Some(kv.value.clone()),
                "model" => cfg.model = Some(kv.value.clone()),
                "mesh" => cfg.mesh = Some(kv.value.clone()),
                "elements" => cfg.elements = Some(parse_usize(&kv)?),
                "levels" => cfg.levels = Some(parse_usize(&kv)?),
                "source" | "neumann" | "dirichlet" => {
                    if parse_named_function(&kv.value).is_none() {
                        return Err(Error::Parse {
                            line: kv.line,
                            message: format!(
                                "`{}`: unknown function `{}` (use zero, one or const:<v>)",
                                kv.key, kv.value
                            ),
                        });
                    }
                    let slot = match kv.key.as_str() {
                        "source" => &mut cfg.source,
                        "neumann" => &mut cfg.neumann,
                        _ => &mut cfg.dirichlet,
                    };
                    *slot = Some(kv.value.clone());
                }
                "stiffness_order" => cfg.stiffness_order = Some(parse_usize(&kv)?),
                "load_order" => cfg.load_order = Some(parse_usize(&kv)?),
                _ => rest.push(kv),
            }
        }
        *entries = rest;
        Ok(cfg)
    }

    /// Build the problem. A relative `mesh` path is resolved against `base_dir`.
    pub fn build(&self, base_dir: Option<&Path>) -> Result<ProblemSpec> {
        let id = self.problem.as_deref().unwrap_or("sin");
        let mut p = builtin_problem(id)?;
        if let Some(m) = &self.model {
            p = p.with_model(builtin_model(m)?);
        }
        match (self.elements, self.levels) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidOptions(
                    "give either `elements` (1D) or `levels` (2D), not both".into(),
                ))
            }
            (Some(n), None) if p.dim() == 1 => p = p.remesh(n)?,
            (None, Some(l)) if p.dim() == 2 => p = p.remesh(l)?,
            (None, None) => {}
            _ => {
                return Err(Error::InvalidOptions(format!(
                    "`elements` applies to 1D and `levels` to 2D problems; `{id}` is {}D",
                    p.dim()
                )))
            }
        }
        if let Some(path) = &self.mesh {
            let mut full = std::path::PathBuf::from(path);
            if full.is_relative() {
                if let Some(dir) = base_dir {
                    full = dir.join(full);
                }
            }
            let file = std::fs::File::open(&full)?;
            let mesh = read_mesh(std::io::BufReader::new(file))?;
            p = p.with_mesh(mesh);
            p.generator = None;
        }
        // Data overrides replace the builtin data; any exact solution no
        // longer applies.
        if let Some(s) = &self.source {
            p.source = parse_named_function(s).unwrap();
            p.exact = None;
        }
        if let Some(s) = &self.neumann {
            p.neumann = parse_named_function(s).unwrap();
            p.exact = None;
        }
        if let Some(s) = &self.dirichlet {
            p.dirichlet = parse_named_function(s).unwrap();
            p.exact = None;
        }
        if let Some(o) = self.stiffness_order {
            p.assembly.stiffness_order = o;
        }
        if let Some(o) = self.load_order {
            p.assembly.load_order = o;
        }
        Ok(p)
    }
}
