//! Loading weight specs, tuples, symbols and points from flags and files.

use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Args;
use fockshift::hardy::{Symbol, SymbolJson};
use fockshift::linalg::{parse_complex_list, CMat};
use fockshift::model::TupleJson;
use fockshift::weights::{make_family, WeightSpec};
use fockshift::{OperatorTuple, WeightSequence, C64};

/// Reads `arg` as inline JSON when it starts with `{`, else as a file path.
pub fn read_json_arg(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(Path::new(arg)).with_context(|| format!("reading {arg}"))
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct WeightArgs {
    /// Registered weight family (see `families`).
    #[arg(long)]
    pub family: Option<String>,
    /// Weight spec as a JSON file or inline JSON; overrides the family flags.
    #[arg(long)]
    pub weights: Option<String>,
    /// Number of generators.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    /// Comma-separated sequence for `interpolated` and `levels`.
    #[arg(long)]
    pub sequence: Option<String>,
    #[arg(long)]
    pub level_cap: Option<usize>,
}

impl WeightArgs {
    pub fn spec(&self) -> Result<WeightSpec> {
        if let Some(w) = &self.weights {
            let spec: WeightSpec =
                serde_json::from_str(&read_json_arg(w)?).context("parsing weight spec")?;
            return Ok(spec);
        }
        let Some(kind) = &self.family else {
            bail!(fockshift::Error::InvalidParameter(
                "pass --family or --weights".into()
            ));
        };
        let n = self.n.unwrap_or(2);
        let mut spec = WeightSpec::family(n, kind);
        spec.s = self.s;
        spec.p = self.p;
        spec.rho = self.rho;
        spec.level_cap = self.level_cap;
        if let Some(seq) = &self.sequence {
            spec.sequence = Some(parse_reals(seq)?);
        }
        Ok(spec)
    }

    pub fn build(&self) -> Result<(WeightSpec, WeightSequence)> {
        let spec = self.spec()?;
        let w = make_family(&spec)?;
        Ok((spec, w))
    }
}

pub fn parse_reals(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| fockshift::Error::Parse(format!("bad number {p:?}")).into())
        })
        .collect()
}

/// `0.6,0` or `0.3+0.4i,-i`.
pub fn parse_point(s: &str) -> Result<Vec<C64>> {
    Ok(parse_complex_list(s)?)
}

/// Points separated by `;`.
pub fn parse_points(s: &str) -> Result<Vec<Vec<C64>>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(parse_point)
        .collect()
}

pub fn load_tuple(arg: &str) -> Result<OperatorTuple> {
    let j: TupleJson = serde_json::from_str(&read_json_arg(arg)?).context("parsing tuple")?;
    Ok(OperatorTuple::from_json(&j)?)
}

pub fn load_symbol(arg: &str) -> Result<Symbol> {
    let j: SymbolJson = serde_json::from_str(&read_json_arg(arg)?).context("parsing symbol")?;
    Ok(Symbol::from_json(&j)?)
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    matrix: Vec<Vec<[f64; 2]>>,
}

/// `{"matrix": [[[re, im], …], …]}`.
pub fn load_matrix(arg: &str) -> Result<CMat> {
    let j: MatrixJson = serde_json::from_str(&read_json_arg(arg)?).context("parsing matrix")?;
    let d = j.matrix.len();
    if j.matrix.iter().any(|r| r.len() != d) {
        bail!(fockshift::Error::Parse("matrix must be square".into()));
    }
    Ok(CMat::from_fn(d, d, |r, c| {
        C64::new(j.matrix[r][c][0], j.matrix[r][c][1])
    }))
}
