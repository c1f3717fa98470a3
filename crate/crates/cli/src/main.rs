//! `fockshift`: batch certificates for weighted multi-shifts and matrix tuples.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fockshift::fock::{classify, component_leakage, joint_radius_estimate, reduce_decompose};
use fockshift::freeword::multi_indices_up_to;
use fockshift::hardy::{
    calculus_certificates, cesaro_evaluate, evaluate_at_point, point_membership_with,
    schwarz_check, tuple_domain_membership, CalculusMode, RatioTest, Symbol,
};
use fockshift::linalg::{identity, op_norm, CMat};
use fockshift::model::{
    foias_pearcy_certify, foias_pearcy_weights, fp_sequence_from_tuple, model_bound, tuple_stats,
    ModelMode,
};
use fockshift::similarity::{contraction_weights, similarity_diagonal, verify_intertwining};
use fockshift::symfock::{
    commutative_calculus_certificates, commutative_model, commuting_shift_matrix,
    compression_check, h2_kernel, SymmetricBasis,
};
use fockshift::weights::{boundedness_report, FamilyRegistry};
use fockshift::{limits, C64};

use input::{
    load_matrix, load_symbol, load_tuple, parse_point, parse_points, parse_reals, WeightArgs,
};
use output::{cell, emit, opt_cell, to_csv, to_json};

#[derive(Parser, Debug)]
#[command(
    name = "fockshift",
    version,
    about = "Weighted multi-shift certificates"
)]
struct Cli {
    /// Worker threads for parallel level scans.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List the registered weight families.
    Families,
    /// Level row norms and the joint spectral radius window.
    Radius {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long = "N")]
        big_n: usize,
    },
    /// Injectivity, row contraction, power bound and compactness evidence.
    Classify {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long = "N")]
        big_n: usize,
        /// Power bound M to test.
        #[arg(long = "M")]
        bound: Option<f64>,
    },
    /// Split a shift into injective pieces and truncations.
    Decompose {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long = "N")]
        big_n: usize,
    },
    /// Diagonal similarity from the weights to a second spec.
    Similar {
        #[command(flatten)]
        w: WeightArgs,
        /// Target weight spec (JSON file or inline JSON).
        #[arg(long)]
        to: String,
        #[arg(long = "N")]
        big_n: usize,
    },
    /// Contractive weights similar to a power bounded shift.
    Contract {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long = "M")]
        bound: f64,
        #[arg(long = "N")]
        big_n: usize,
    },
    /// Similarity model of a matrix tuple.
    Model {
        #[arg(long)]
        tuple: String,
        #[arg(long, value_enum)]
        mode: ModelArg,
        #[arg(long = "N")]
        big_n: usize,
        /// Weights for rota mode.
        #[command(flatten)]
        w: WeightArgs,
        /// Positive definite Q for rota mode (default I).
        #[arg(long)]
        q: Option<String>,
    },
    /// Foias-Pearcy weights and certificates.
    Fp {
        /// Sequence a_1, a_2, ... (a_0 = 1).
        #[arg(long)]
        sequence: Option<String>,
        /// Measure a_k = |phi_T^k(I)|^(1/4) from a tuple instead.
        #[arg(long)]
        tuple: Option<String>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "N")]
        big_n: usize,
    },
    /// Whether a point is a bounded point evaluation.
    Membership {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Deepest level summed.
        #[arg(long = "N", default_value_t = 40)]
        big_n: usize,
        #[arg(long, default_value_t = 5)]
        window: usize,
        #[arg(long, default_value_t = fockshift::model::RATIO_DELTA)]
        delta: f64,
    },
    /// Evaluate a symbol at a point through the kernel vector.
    Eval {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long)]
        symbol: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Cesaro functional calculus of a symbol on a tuple.
    Calculus {
        #[command(flatten)]
        w: WeightArgs,
        #[arg(long)]
        symbol: String,
        /// Second symbol for the homomorphism check (default Z_1).
        #[arg(long)]
        psi: Option<String>,
        #[arg(long)]
        tuple: String,
        #[arg(long, value_enum, default_value_t = CalcArg::Fejer)]
        mode: CalcArg,
        #[arg(long = "N")]
        big_n: usize,
    },
    /// Class weights, lattice shifts and the commutative model.
    Symmetric {
        #[command(flatten)]
        w: WeightArgs,
        /// Degree cap of the lattice.
        #[arg(long = "D")]
        d_total: usize,
        /// Commuting tuple for the commutative model.
        #[arg(long)]
        tuple: Option<String>,
        #[arg(long)]
        q: Option<String>,
    },
    /// Reproducing kernel values for every pair of points.
    Kernel {
        #[command(flatten)]
        w: WeightArgs,
        /// Points separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Degree of the partial sums.
        #[arg(long = "D", default_value_t = 40)]
        d_total: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Rota,
    Main1,
    Nilpotent,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CalcArg {
    Fejer,
    ExactPoly,
    Hol0,
}

impl From<CalcArg> for CalculusMode {
    fn from(c: CalcArg) -> Self {
        match c {
            CalcArg::Fejer => CalculusMode::Fejer,
            CalcArg::ExactPoly => CalculusMode::ExactPoly,
            CalcArg::Hol0 => CalculusMode::Hol0,
        }
    }
}

struct Report {
    command: &'static str,
    anchor: &'static str,
    config: Value,
    result: Value,
    table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

fn matrix_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| {
                Value::Array(
                    (0..m.ncols())
                        .map(|c| json!([m[(r, c)].re, m[(r, c)].im]))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn point_json(p: &[C64]) -> Value {
    Value::Array(p.iter().map(|z| json!([z.re, z.im])).collect())
}

fn check_truncation(n: usize, big_n: usize) -> Result<()> {
    limits::check_dim(n, big_n)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<Report> {
    let r = match &cli.cmd {
        Cmd::Families => {
            let reg = FamilyRegistry::with_builtin();
            let fams: Vec<Value> = reg
                .summaries()
                .into_iter()
                .map(|(name, summary)| json!({"name": name, "summary": summary}))
                .collect();
            Report {
                command: "families",
                anchor: "weight family registry",
                config: json!({}),
                table: Some((
                    vec!["name", "summary"],
                    reg.summaries()
                        .into_iter()
                        .map(|(a, b)| vec![a.to_string(), b.to_string()])
                        .collect(),
                )),
                result: json!({ "families": fams }),
            }
        }
        Cmd::Radius { w, big_n } => {
            let (spec, w) = w.build()?;
            check_truncation(w.n(), *big_n)?;
            let est = joint_radius_estimate(&w, *big_n)?;
            let rows = est
                .levels
                .iter()
                .zip(&est.roots)
                .map(|(l, root)| {
                    vec![
                        l.k.to_string(),
                        cell(l.value),
                        cell(l.deepest),
                        opt_cell(l.certified),
                        cell(*root),
                        l.beta.to_string(),
                        l.alpha.to_string(),
                    ]
                })
                .collect();
            Report {
                command: "radius",
                anchor: "joint spectral radius from level row norms",
                config: json!({"weights": spec, "N": big_n}),
                result: json!({
                    "levels": est.levels,
                    "roots": est.roots,
                    "window": est.window,
                    "r_estimate": est.estimate,
                    "r_certified_upper": est.certified_upper,
                    "r_exact": est.exact,
                }),
                table: Some((
                    vec![
                        "k",
                        "value",
                        "deepest",
                        "certified",
                        "root",
                        "beta",
                        "alpha",
                    ],
                    rows,
                )),
            }
        }
        Cmd::Classify { w, big_n, bound } => {
            let (spec, w) = w.build()?;
            check_truncation(w.n(), *big_n)?;
            let rep = classify(&w, *big_n, *bound)?;
            let bnd = boundedness_report(&w, *big_n)?;
            let rows = rep
                .level_norms
                .iter()
                .enumerate()
                .map(|(k, v)| vec![(k + 1).to_string(), cell(*v)])
                .collect();
            Report {
                command: "classify",
                anchor: "row contraction and power bound from weight products",
                config: json!({"weights": spec, "N": big_n, "M": bound}),
                result: json!({"classification": rep, "boundedness": bnd}),
                table: Some((vec!["k", "level_norm"], rows)),
            }
        }
        Cmd::Decompose { w, big_n } => {
            let (spec, w) = w.build()?;
            check_truncation(w.n(), *big_n)?;
            let dec = reduce_decompose(&w, *big_n)?;
            let leakage = component_leakage(&w, &dec)?;
            let mut rows = Vec::new();
            for (j, c) in dec.components.iter().enumerate() {
                for word in &c.words {
                    rows.push(vec![
                        j.to_string(),
                        c.root.to_string(),
                        serde_json::to_value(c.kind)?.as_str().unwrap().to_string(),
                        word.to_string(),
                    ]);
                }
            }
            Report {
                command: "decompose",
                anchor: "direct sum of injective shifts and truncations",
                config: json!({"weights": spec, "N": big_n}),
                result: json!({"decomposition": dec, "leakage": leakage}),
                table: Some((vec!["component", "root", "kind", "word"], rows)),
            }
        }
        Cmd::Similar { w, to, big_n } => {
            let (spec, w) = w.build()?;
            let (spec2, w2) = WeightArgs {
                weights: Some(to.clone()),
                ..Default::default()
            }
            .build()?;
            check_truncation(w.n(), *big_n)?;
            let d = similarity_diagonal(&w, &w2, *big_n)?;
            let residual = verify_intertwining(&d, &w, &w2, *big_n)?;
            Report {
                command: "similar",
                anchor: "diagonal similarity between weighted shifts",
                config: json!({"weights": spec, "to": spec2, "N": big_n}),
                result: json!({
                    "C1": d.c1,
                    "C2": d.c2,
                    "cond": d.cond,
                    "C2_over_C1": d.c2 / d.c1,
                    "residual": residual,
                    "route_gap": d.route_gap,
                }),
                table: None,
            }
        }
        Cmd::Contract { w, bound, big_n } => {
            let (spec, w) = w.build()?;
            check_truncation(w.n(), *big_n)?;
            let c = contraction_weights(&w, *bound, *big_n)?;
            let d = similarity_diagonal(&w, &c.weights, *big_n)?;
            let residual = verify_intertwining(&d, &w, &c.weights, *big_n)?;
            let mu = w.weight_table(*big_n)?;
            let v = c.weights.weight_table(*big_n)?;
            let words = fockshift::freeword::enumerate_words(w.n(), *big_n)?;
            let v_level_max = (1..=*big_n)
                .map(|k| fockshift::fock::level_row_norm(&c.weights, k, *big_n).map(|l| l.value))
                .collect::<fockshift::Result<Vec<_>>>()?;
            let rows = words
                .iter()
                .enumerate()
                .map(|(i, a)| vec![a.to_string(), cell(mu[i]), cell(v[i]), cell(c.gamma[i])])
                .collect();
            Report {
                command: "contract",
                anchor: "power bounded shifts are similar to row contractions",
                config: json!({"weights": spec, "M": bound, "N": big_n}),
                result: json!({
                    "gamma_by_level": c.by_level,
                    "scan_sup": c.scan_sup,
                    "max_v": v[1..].iter().copied().fold(0.0, f64::max),
                    "v_level_norms": v_level_max,
                    "C1": d.c1,
                    "C2": d.c2,
                    "cond": d.cond,
                    "residual": residual,
                }),
                table: Some((vec!["word", "mu", "v", "gamma"], rows)),
            }
        }
        Cmd::Model {
            tuple,
            mode,
            big_n,
            w,
            q,
        } => {
            let t = load_tuple(tuple)?;
            check_truncation(t.n(), *big_n)?;
            let (mode_v, wspec) = match mode {
                ModelArg::Rota => {
                    let (spec, ws) = w.build()?;
                    let q = match q {
                        Some(p) => load_matrix(p)?,
                        None => identity(t.d()),
                    };
                    (ModelMode::Rota { weights: ws, q }, Some(spec))
                }
                ModelArg::Main1 => (ModelMode::Main1, None),
                ModelArg::Nilpotent => (ModelMode::Nilpotent, None),
            };
            let b = model_bound(&t, &mode_v, *big_n)?;
            let stats = tuple_stats(&t, (*big_n).max(1));
            let cert = &b.certificate;
            Report {
                command: "model",
                anchor: "weighted Rota model of a matrix tuple",
                config: json!({"tuple": tuple, "mode": mode_v.name(), "N": big_n, "weights": wspec}),
                result: json!({
                    "cb_bound": b.bound,
                    "cb_measured": cert.cb_bound,
                    "consistent": b.consistent,
                    "nilpotent_index": b.nilpotent_index,
                    "residuals": cert.residuals,
                    "interior_residuals": cert.interior_residuals,
                    "lambda_min": cert.lambda_min,
                    "lambda_max": cert.lambda_max,
                    "level_terms": cert.level_terms,
                    "partial_max": cert.partial_max,
                    "convergence": cert.convergence,
                    "exact": cert.exact,
                    "tuple_stats": stats,
                }),
                table: None,
            }
        }
        Cmd::Fp {
            sequence,
            tuple,
            kmax,
            n,
            big_n,
        } => {
            let (a, t, n) = match (sequence, tuple) {
                (Some(s), None) => (parse_reals(s)?, None, n.unwrap_or(2)),
                (None, Some(p)) => {
                    let t = load_tuple(p)?;
                    let k = kmax.unwrap_or(*big_n);
                    (fp_sequence_from_tuple(&t, k), Some(t.clone()), t.n())
                }
                _ => bail!(fockshift::Error::InvalidParameter(
                    "pass exactly one of --sequence and --tuple".into()
                )),
            };
            check_truncation(n, *big_n)?;
            let fp = foias_pearcy_weights(&a)?;
            let cert = foias_pearcy_certify(&fp, n, *big_n, t.as_ref())?;
            Report {
                command: "fp",
                anchor: "Foias-Pearcy quasi-nilpotent model",
                config: json!({"sequence": sequence, "tuple": tuple, "kmax": kmax, "n": n, "N": big_n}),
                result: json!({"weights": fp, "certificate": cert}),
                table: None,
            }
        }
        Cmd::Membership {
            w,
            lambda,
            big_n,
            window,
            delta,
        } => {
            let (spec, w) = w.build()?;
            let l = parse_point(lambda)?;
            let r = point_membership_with(
                &w,
                &l,
                *big_n,
                RatioTest {
                    window: *window,
                    delta: *delta,
                },
            )?;
            let rows = r
                .level_terms
                .iter()
                .zip(&r.partial_sums)
                .enumerate()
                .map(|(k, (t, s))| vec![k.to_string(), cell(*t), cell(*s)])
                .collect();
            Report {
                command: "membership",
                anchor: "bounded point evaluations",
                config: json!({"weights": spec, "lambda": point_json(&l), "N": big_n, "window": window, "delta": delta}),
                result: serde_json::to_value(&r)?,
                table: Some((vec!["k", "term", "partial_sum"], rows)),
            }
        }
        Cmd::Eval { w, symbol, lambda } => {
            let (spec, w) = w.build()?;
            let f = load_symbol(symbol)?;
            let l = parse_point(lambda)?;
            check_truncation(w.n(), f.degree())?;
            let r = evaluate_at_point(&f, &w, &l)?;
            Report {
                command: "eval",
                anchor: "point evaluation through kernel vectors",
                config: json!({"weights": spec, "symbol": f.to_json(), "lambda": point_json(&l)}),
                result: serde_json::to_value(&r)?,
                table: None,
            }
        }
        Cmd::Calculus {
            w,
            symbol,
            psi,
            tuple,
            mode,
            big_n,
        } => {
            let spec = if w.family.is_none() && w.weights.is_none() {
                None
            } else {
                Some(w.build()?)
            };
            let t = load_tuple(tuple)?;
            let (spec, ws) = match spec {
                Some(p) => p,
                None => WeightArgs {
                    family: Some("unit".into()),
                    n: Some(t.n()),
                    ..Default::default()
                }
                .build()?,
            };
            let phi = load_symbol(symbol)?;
            let psi_s = match psi {
                Some(p) => load_symbol(p)?,
                None => Symbol::var(1),
            };
            check_truncation(t.n(), (*big_n).max(phi.degree()))?;
            let value = cesaro_evaluate(&phi, &t, *big_n, (*mode).into())?;
            let cert = calculus_certificates(&phi, &psi_s, &t, &ws, *big_n)?;
            let domain = tuple_domain_membership(&ws, &t, (*big_n).max(8))?;
            let schwarz =
                if phi.coeff(&fockshift::Word::empty()) == C64::new(0.0, 0.0) && !phi.is_zero() {
                    Some(schwarz_check(
                        &phi,
                        &ws,
                        &t,
                        (*big_n).max(phi.degree()),
                        (*big_n).max(8),
                    )?)
                } else {
                    None
                };
            let commutative = if t.is_commuting(1e-12) {
                Some(commutative_calculus_certificates(&phi, &psi_s, &t, *big_n)?)
            } else {
                None
            };
            Report {
                command: "calculus",
                anchor: "Cesaro functional calculus",
                config: json!({
                    "weights": spec,
                    "symbol": phi.to_json(),
                    "psi": psi_s.to_json(),
                    "tuple": tuple,
                    "mode": format!("{mode:?}").to_lowercase(),
                    "N": big_n,
                }),
                result: json!({
                    "value": matrix_json(&value),
                    "value_norm": op_norm(&value),
                    "certificates": cert,
                    "domain": domain,
                    "schwarz": schwarz,
                    "commutative": commutative,
                }),
                table: None,
            }
        }
        Cmd::Symmetric {
            w,
            d_total,
            tuple,
            q,
        } => {
            let (spec, w) = w.build()?;
            let finite = SymmetricBasis::finite_degree(&w, *d_total)?.unwrap_or(0);
            let basis = SymmetricBasis::new(&w, finite)?;
            let omega: Vec<Value> = basis
                .indices()
                .iter()
                .zip(basis.omega())
                .map(|(k, om)| json!({"k": k, "omega": om}))
                .collect();
            let mut commutators = 0.0_f64;
            let dense: Vec<CMat> = (1..=w.n())
                .map(|i| commuting_shift_matrix(&basis, i).map(|b| b.to_dense()))
                .collect::<fockshift::Result<_>>()?;
            for i in 0..dense.len() {
                for j in i + 1..dense.len() {
                    let c = &dense[i] * &dense[j] - &dense[j] * &dense[i];
                    for col in 0..basis.dim() {
                        if basis.indices()[col].total() + 2 <= finite {
                            commutators = commutators.max(c.column(col).norm());
                        }
                    }
                }
            }
            let compression = if limits::check_dim(w.n(), finite + 1).is_ok() {
                Some(
                    (1..=w.n())
                        .map(|i| compression_check(&w, i, finite, finite + 1))
                        .collect::<fockshift::Result<Vec<_>>>()?,
                )
            } else {
                None
            };
            let model = match tuple {
                Some(p) => {
                    let t = load_tuple(p)?;
                    let q = match q {
                        Some(path) => load_matrix(path)?,
                        None => identity(t.d()),
                    };
                    let c = commutative_model(&t, &w, &q, *d_total)?;
                    Some(json!({
                        "d_total": c.d_total,
                        "residuals": c.residuals,
                        "interior_residuals": c.interior_residuals,
                        "level_terms": c.level_terms,
                        "lambda_min": c.lambda_min,
                        "lambda_max": c.lambda_max,
                        "cb_bound": c.cb_bound,
                        "convergence": c.convergence,
                        "commutator_defect": c.commutator_defect,
                    }))
                }
                None => None,
            };
            let rows = basis
                .indices()
                .iter()
                .zip(basis.omega())
                .map(|(k, om)| vec![k.to_string(), cell(*om)])
                .collect();
            Report {
                command: "symmetric",
                anchor: "symmetric weighted Fock space",
                config: json!({"weights": spec, "D": d_total, "tuple": tuple}),
                result: json!({
                    "degree_used": finite,
                    "omega": omega,
                    "lattice_points": multi_indices_up_to(w.n(), finite).len(),
                    "commutator_interior": commutators,
                    "compression": compression,
                    "model": model,
                }),
                table: Some((vec!["k", "omega"], rows)),
            }
        }
        Cmd::Kernel {
            w,
            zeta,
            lambda,
            d_total,
        } => {
            let (spec, w) = w.build()?;
            let zs = parse_points(zeta)?;
            let ls = parse_points(lambda)?;
            let mut values = Vec::new();
            let mut rows = Vec::new();
            for z in &zs {
                for l in &ls {
                    let k = h2_kernel(&w, z, l, *d_total)?;
                    rows.push(vec![
                        fmt_point(z),
                        fmt_point(l),
                        cell(k.value[0]),
                        cell(k.value[1]),
                    ]);
                    values.push(json!({
                        "zeta": point_json(z),
                        "lambda": point_json(l),
                        "value": k.value,
                    }));
                }
            }
            Report {
                command: "kernel",
                anchor: "reproducing kernel of the symmetric space",
                config: json!({"weights": spec, "D": d_total, "zeta": zeta, "lambda": lambda}),
                result: json!({"values": values}),
                table: Some((vec!["zeta", "lambda", "re", "im"], rows)),
            }
        }
    };
    Ok(r)
}

fn fmt_point(p: &[C64]) -> String {
    p.iter()
        .map(|z| {
            let sign = if z.im.is_sign_negative() { "" } else { "+" };
            format!("{}{}{}i", cell(z.re), sign, cell(z.im))
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    if let Some(fe) = e.downcast_ref::<fockshift::Error>() {
        fe.kind()
    } else if e.downcast_ref::<serde_json::Error>().is_some() {
        "parse"
    } else if e.downcast_ref::<std::io::Error>().is_some() {
        "io"
    } else if e.downcast_ref::<clap::Error>().is_some() {
        "usage"
    } else if e
        .chain()
        .any(|c| c.downcast_ref::<serde_json::Error>().is_some())
    {
        "parse"
    } else if e
        .chain()
        .any(|c| c.downcast_ref::<std::io::Error>().is_some())
    {
        "io"
    } else {
        "other"
    }
}

fn fail(e: anyhow::Error) -> ExitCode {
    let msg = format!("{e:#}");
    let body = json!({"error": {"kind": error_kind(&e), "message": msg}});
    print!("{}", to_json(&body));
    ExitCode::from(2)
}

fn setup(cli: &Cli) -> Result<()> {
    if let Ok(v) = std::env::var("FOCKSHIFT_MAX_DIM") {
        let cap: usize = v.trim().parse().map_err(|_| {
            fockshift::Error::InvalidParameter(format!("FOCKSHIFT_MAX_DIM={v:?} is not a count"))
        })?;
        limits::set_max_dim(cap);
    }
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            return fail(e.into());
        }
    };
    if let Err(e) = setup(&cli) {
        return fail(e);
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let text = match cli.format {
        Format::Json => to_json(&json!({
            "command": report.command,
            "anchor": report.anchor,
            "config": report.config,
            "result": report.result,
        })),
        Format::Csv => match &report.table {
            Some((header, rows)) => match to_csv(header, rows) {
                Ok(t) => t,
                Err(e) => return fail(e),
            },
            None => {
                return fail(
                    fockshift::Error::InvalidParameter(format!(
                        "{} has no tabular output; use --format json",
                        report.command
                    ))
                    .into(),
                )
            }
        },
    };
    match emit(&text, cli.out.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}
