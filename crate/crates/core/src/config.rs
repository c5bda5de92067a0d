//! Flat `key = value` run configuration.
//!
//! ```text
//! # comment
//! name = heat
//! omega = 1
//! truncation = 2
//! sigma = 1
//! nu = 0.5
//! levels = 9, 27
//! tol = 1e-6
//! quadrature_degree = 5
//! format = csv
//! output = out.csv
//! exact.0.space = bubble
//! exact.0.time = cos(1)
//! exact.0.coef = 1
//! source = derive
//! ```
//!
//! Sources are either `source = derive` (built from the exact solution) or a
//! list of `source.<i>.space`, `source.<i>.time`, `source.<i>.coef` terms.
//! Spatial factors: `one`, `bubble`, `monomial(a,b)`, `sinsin(m,n)`,
//! `neg_laplacian(...)`. Time factors: `one`, `cos(k)`, `sin(k)`, `exp_sin3`,
//! `exp_sin2(a,b)`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::assembly::CoefficientField;
use crate::error::{Error, Result};
use crate::fourier::{ProblemSpec, SeparableSource, SeparableTerm, SpatialFn, TimeFn};
use crate::pipeline::SolveOptions;
use crate::report::OutputFormat;

pub const DEFAULT_LEVELS: [usize; 4] = [9, 27, 81, 243];

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    /// Cells per side, strictly ascending.
    pub levels: Vec<usize>,
    pub options: SolveOptions,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(problem: ProblemSpec, levels: Vec<usize>) -> Result<Self> {
        let cfg = RunConfig {
            problem,
            levels,
            options: SolveOptions::default(),
            format: OutputFormat::Csv,
            output: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        validate_levels(&self.levels)?;
        let tol = self.options.solver.rel_tol;
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::config(
                "tol",
                format!("must lie in (0, 1), got {tol}"),
            ));
        }
        if self.options.quadrature_degree == 0 {
            return Err(Error::config("quadrature_degree", "must be at least 1"));
        }
        self.problem.validate()
    }
}

pub fn validate_levels(levels: &[usize]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::config("levels", "at least one level is required"));
    }
    if levels.contains(&0) {
        return Err(Error::config("levels", "levels must be positive"));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("levels", "levels must be strictly ascending"));
    }
    Ok(())
}

/// Parses `9,27,81`.
pub fn parse_levels(s: &str) -> Result<Vec<usize>> {
    let levels = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|e| Error::config("levels", format!("`{}`: {e}", p.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    validate_levels(&levels)?;
    Ok(levels)
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>()
        .map_err(|e| Error::config(key, format!("`{v}`: {e}")))
}

#[derive(Default)]
struct TermDraft {
    space: Option<SpatialFn>,
    time: Option<TimeFn>,
    coef: Option<f64>,
}

fn term_key(key: &str) -> Option<(&str, usize, &str)> {
    let mut parts = key.splitn(3, '.');
    let group = parts.next()?;
    let index = parts.next()?.parse().ok()?;
    Some((group, index, parts.next()?))
}

fn build_terms(group: &str, drafts: BTreeMap<usize, TermDraft>) -> Result<SeparableSource> {
    let mut terms = Vec::new();
    for (i, d) in drafts {
        let space = d
            .space
            .ok_or_else(|| Error::config(format!("{group}.{i}.space"), "missing"))?;
        let time = d
            .time
            .ok_or_else(|| Error::config(format!("{group}.{i}.time"), "missing"))?;
        let coef = d.coef.unwrap_or(1.0);
        terms.push(SeparableTerm {
            space: space.scale(coef),
            time,
        });
    }
    Ok(SeparableSource::new(terms))
}

fn positive(key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(
            key,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {}", lineno + 1), "expected `key = value`")
            })?;
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            if seen.insert(key.clone(), value).is_some() {
                return Err(Error::config(key, "given more than once"));
            }
        }

        let mut name = "custom".to_string();
        let mut omega = None;
        let mut truncation = None;
        let (mut sigma, mut nu) = (1.0, 1.0);
        let mut levels = DEFAULT_LEVELS.to_vec();
        let mut options = SolveOptions::default();
        let mut format = OutputFormat::Csv;
        let mut output = None;
        let mut derive = false;
        let mut source: BTreeMap<usize, TermDraft> = BTreeMap::new();
        let mut exact: BTreeMap<usize, TermDraft> = BTreeMap::new();

        for (key, v) in &seen {
            let k = key.as_str();
            match k {
                "name" => name = v.clone(),
                "omega" => omega = Some(positive(k, parse_num(k, v)?)?),
                "truncation" => truncation = Some(parse_num::<usize>(k, v)?),
                "sigma" => sigma = positive(k, parse_num(k, v)?)?,
                "nu" => nu = positive(k, parse_num(k, v)?)?,
                "levels" => levels = parse_levels(v)?,
                "tol" => options.solver.rel_tol = parse_num(k, v)?,
                "max_iter" => options.solver.max_iter = parse_num(k, v)?,
                "quadrature_degree" => options.quadrature_degree = parse_num(k, v)?,
                "format" => format = v.parse()?,
                "output" => output = Some(PathBuf::from(v)),
                "source" if v == "derive" => derive = true,
                "source" => return Err(Error::config(k, "only `derive` is accepted here")),
                _ => {
                    let (group, i, field) = term_key(k)
                        .filter(|(g, _, _)| *g == "source" || *g == "exact")
                        .ok_or_else(|| Error::config(k, "unknown key"))?;
                    let draft = if group == "source" {
                        &mut source
                    } else {
                        &mut exact
                    }
                    .entry(i)
                    .or_default();
                    let wrap = |e: Error| Error::config(k, e.to_string());
                    match field {
                        "space" => draft.space = Some(v.parse().map_err(wrap)?),
                        "time" => draft.time = Some(v.parse().map_err(wrap)?),
                        "coef" => draft.coef = Some(parse_num(k, v)?),
                        _ => return Err(Error::config(k, "unknown key")),
                    }
                }
            }
        }

        let omega = omega.ok_or_else(|| Error::config("omega", "missing"))?;
        let truncation = truncation.ok_or_else(|| Error::config("truncation", "missing"))?;
        let exact = if exact.is_empty() {
            None
        } else {
            Some(build_terms("exact", exact)?)
        };
        let source = match (derive, source.is_empty()) {
            (true, false) => {
                return Err(Error::config(
                    "source",
                    "`derive` cannot be combined with explicit source terms",
                ))
            }
            (true, true) => {
                let u = exact
                    .as_ref()
                    .ok_or_else(|| Error::config("source", "`derive` needs exact.<i> terms"))?;
                SeparableSource::derive_from_solution(u, sigma, nu, omega)
                    .map_err(|e| Error::config("source", e.to_string()))?
            }
            (false, _) => build_terms("source", source)?,
        };
        let cfg = RunConfig {
            problem: ProblemSpec {
                name,
                omega,
                truncation,
                sigma: CoefficientField::constant(sigma)?,
                nu: CoefficientField::constant(nu)?,
                source,
                exact,
            },
            levels,
            options,
            format,
            output,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
