//! Command-line jobs. `main` only prints; everything here is testable.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use melnikov_core::cyclicity::{certify_cycles, CertifyPlan, LinearCoeffSystem};
use melnikov_core::melnikov::{classify_origin, melnikov_expansion, ExpansionOptions, WeightRule};
use melnikov_core::normal_form::classify_symmetric_nilpotent;
use melnikov_core::parse::parse_expr;
use melnikov_core::poly::{var, Var, Q};
use serde_json::{json, Value};

use crate::error::{KitError, Result};
use crate::numeric::{ladder_fit, FPoly, NumericSystem, TraceOptions};
use crate::report;
use crate::reproduce::{reproduce, CASES};
use crate::system::{read_system_file, Body, Normalization, SystemFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Weights {
    WithJacobian,
    WithoutJacobian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    #[value(name = "elementary-(0,1)")]
    Elementary,
    #[value(name = "nilpotent-(0,1)")]
    Nilpotent,
}

#[derive(Debug, Parser)]
#[command(name = "melnikov-kit", version, about = "Melnikov function expansions near elementary and nilpotent centers")]
pub struct JobConfig {
    #[command(subcommand)]
    pub command: Command,

    /// System file.
    #[arg(long, short, global = true)]
    pub input: Option<PathBuf>,

    /// Target order L (highest coefficient b_L).
    #[arg(long, short = 'L', global = true)]
    pub order: Option<u32>,

    #[arg(long, short, global = true, value_enum, default_value = "text")]
    pub format: Format,

    /// Parameter value, e.g. `--param r=1/3`; repeatable.
    #[arg(long = "param", short = 'p', global = true, value_name = "NAME=VALUE")]
    pub params: Vec<String>,

    /// Significant digits of decimal output.
    #[arg(long, global = true, default_value_t = 20)]
    pub precision: u32,

    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type of the singular point at the origin.
    Classify,
    /// Coefficients b_0 … b_L of the Melnikov function.
    Expand {
        #[arg(long, value_enum, default_value = "with-jacobian")]
        weights: Weights,
    },
    /// Normal form of a symmetric system at (0, 1).
    Transport {
        /// Overrides the file's `normalize` setting.
        #[arg(long, value_enum)]
        preset: Option<Preset>,
    },
    /// Certify a lower bound for the number of limit cycles.
    Certify {
        /// Variables solved from b_0 = b_1 = … = 0, in order; `_` lets the
        /// solver pick. Default: automatic, L + 1 - |chain| of them.
        #[arg(long, value_delimiter = ',')]
        eliminate: Vec<String>,
        /// Parameters a_1 … a_n for the Delta chain.
        #[arg(long, value_delimiter = ',')]
        chain: Vec<String>,
        /// Values of the free perturbation parameters at the witness.
        #[arg(long = "witness", value_name = "NAME=VALUE")]
        witness: Vec<String>,
        /// Prefer the root of the last chain equation nearest this value.
        #[arg(long)]
        root_hint: Option<String>,
    },
    /// Compare the symbolic expansion with numeric quadrature.
    Verify {
        /// Largest energy level; default 1/16 of the lowest saddle energy.
        #[arg(long)]
        h_max: Option<f64>,
        /// Relative agreement required for b_0 … b_2.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Recompute a worked example and diff it against its reference values.
    Reproduce {
        /// One of the known cases, or `all`.
        case: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Rendered result and exit status (0 success, 1 mismatch or failed
/// certification).
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub status: i32,
}

fn parse_q(s: &str, what: &str) -> Result<Q> {
    let e = parse_expr(s, None).map_err(|e| KitError::Usage(format!("{what}: {e}")))?;
    let v = if e.is_zero() {
        Some(Q::from_integer(0.into()))
    } else {
        e.single_term().filter(|(k, _)| k.is_one()).and_then(|(_, r)| r.constant_value())
    };
    v.ok_or_else(|| KitError::Usage(format!("{what}: `{s}` is not a rational number")))
}

pub fn parse_assignments(items: &[String]) -> Result<BTreeMap<Var, Q>> {
    let mut out = BTreeMap::new();
    for it in items {
        let (k, v) = it.split_once('=').ok_or_else(|| KitError::Usage(format!("expected NAME=VALUE, got `{it}`")))?;
        out.insert(var(k.trim()), parse_q(v.trim(), k.trim())?);
    }
    Ok(out)
}

fn load(cfg: &JobConfig) -> Result<SystemFile> {
    let path = cfg.input.as_ref().ok_or_else(|| KitError::Usage("--input is required".into()))?;
    let f = read_system_file(path)?;
    f.with_values(&parse_assignments(&cfg.params)?)
}

fn render(format: Format, json: Value, text: String) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&json).expect("a JSON value serializes") + "\n"),
        Format::Text => Ok(text),
        Format::Csv => Err(KitError::Usage("csv output is only available for `verify`".into())),
    }
}

pub fn run(cfg: &JobConfig) -> Result<Output> {
    let ok = |text| Output { text, status: 0 };
    match &cfg.command {
        Command::Classify => {
            let f = load(cfg)?;
            let spec = f.spec()?;
            let c =
                classify_origin(&spec.hamiltonian, &BTreeMap::new(), &spec.positive, cfg.order.unwrap_or(12) as usize)?;
            let sym = match f.symmetric_normal_form()? {
                Some((s, _, Normalization::Nilpotent)) => Some(classify_symmetric_nilpotent(&s)?.name()),
                _ => None,
            };
            render(cfg.format, report::classification_json(&c, sym), report::classification_text(&c, sym)).map(ok)
        }
        Command::Expand { weights } => {
            let f = load(cfg)?;
            let spec = f.spec()?;
            let weights = match weights {
                Weights::WithJacobian => WeightRule::WithJacobian,
                Weights::WithoutJacobian => WeightRule::WithoutJacobian,
            };
            let exp =
                melnikov_expansion(&spec, cfg.order.unwrap_or(2), &ExpansionOptions { weights, ..Default::default() })?;
            let json = report::expansion_json(&exp, &spec.deltas, cfg.precision);
            render(cfg.format, json, report::expansion_text(&exp)).map(ok)
        }
        Command::Transport { preset } => {
            let mut f = load(cfg)?;
            let Body::Symmetric { normalize, .. } = &mut f.body else {
                return Err(KitError::Usage("transport needs a file with `symmetric = true`".into()));
            };
            match preset {
                Some(Preset::Elementary) => *normalize = Some(Normalization::Elementary),
                Some(Preset::Nilpotent) => *normalize = Some(Normalization::Nilpotent),
                None => {}
            }
            let (_, nf, _) = f.symmetric_normal_form()?.expect("symmetric body");
            render(cfg.format, report::normal_form_json(&nf), report::normal_form_text(&nf)).map(ok)
        }
        Command::Certify { eliminate, chain, witness, root_hint } => {
            let f = load(cfg)?;
            let spec = f.spec()?;
            let l = cfg.order.unwrap_or(if eliminate.is_empty() { 2 } else { (eliminate.len() + chain.len()) as u32 });
            let exp = melnikov_expansion(&spec, l, &ExpansionOptions::default())?;
            let deltas = if spec.deltas.is_empty() { f.delta_vars() } else { spec.deltas.clone() };
            let lin = LinearCoeffSystem::from_expansion(&exp, &deltas)?;
            let order: Vec<Option<Var>> = if eliminate.is_empty() {
                vec![None; (l as usize + 1).saturating_sub(chain.len())]
            } else {
                eliminate.iter().map(|d| if d == "_" { None } else { Some(var(d)) }).collect()
            };
            let plan = CertifyPlan {
                order,
                chain: chain.iter().map(|c| var(c)).collect(),
                delta_witness: parse_assignments(witness)?,
                root_hint: root_hint.as_deref().map(|h| parse_q(h, "--root-hint")).transpose()?,
                max_refinements: 0,
            };
            let cert = certify_cycles(&lin, &plan)?;
            let status = if cert.established { 0 } else { 1 };
            let text = render(cfg.format, report::certificate_json(&cert), report::certificate_text(&cert))?;
            Ok(Output { text, status })
        }
        Command::Verify { h_max, tol } => verify(cfg, *h_max, *tol),
        Command::Reproduce { case, seed } => {
            let cases: Vec<&str> = if case == "all" { CASES.to_vec() } else { vec![case.as_str()] };
            let mut json = Vec::new();
            let mut text = String::new();
            let mut status = 0;
            for c in cases {
                let r = reproduce(c, *seed)?;
                if !r.passed() {
                    status = 1;
                }
                json.push(report::case_json(&r));
                text.push_str(&report::case_text(&r));
            }
            let json = if json.len() == 1 { json.pop().unwrap() } else { Value::Array(json) };
            Ok(Output { text: render(cfg.format, json, text)?, status })
        }
    }
}

fn verify(cfg: &JobConfig, h_max: Option<f64>, tol: f64) -> Result<Output> {
    let f = load(cfg)?;
    let spec = f.spec()?;
    let l = cfg.order.unwrap_or(2);
    let exp = melnikov_expansion(&spec, l, &ExpansionOptions::default())?;
    let none = BTreeMap::new();
    let symbolic: Vec<f64> = exp
        .coefficients
        .iter()
        .map(|b| {
            b.eval(&none, 128)
                .map(|v| v.to_f64())
                .ok_or_else(|| KitError::Usage(format!("b = {b} is not numeric; bind every parameter with --param")))
        })
        .collect::<Result<_>>()?;
    let h = FPoly::from_bipoly(&spec.hamiltonian, &none)?;
    let div = FPoly::from_bipoly(&spec.divergence, &none)?;
    let sys = NumericSystem::from_divergence(h, &div, exp.p);
    // Two extra basis terms absorb the truncation error of the ladder.
    let lf = ladder_fit(&sys, h_max, l as usize + 4, l as usize + 2, &TraceOptions::default())?;
    let mut rows = Vec::new();
    let mut status = 0;
    let mut text = format!("h_max = {:e}, {} levels, condition {:.3e}\n", lf.h_max, lf.orbits.len(), lf.fit.condition);
    for (i, b) in symbolic.iter().enumerate() {
        let fitted = lf.fit.coeffs[i];
        let err = (fitted - b).abs() / b.abs().max(1.0);
        let checked = i <= 2;
        let pass = !checked || err <= tol;
        if !pass {
            status = 1;
        }
        text.push_str(&format!(
            "b{i}: symbolic {b:.10e}  fitted {fitted:.10e}  rel {err:.2e}{}\n",
            if !checked {
                ""
            } else if pass {
                "  ok"
            } else {
                "  MISMATCH"
            }
        ));
        rows.push(
            json!({"l": i, "symbolic": b, "fitted": fitted, "relative_error": err, "checked": checked, "ok": pass}),
        );
    }
    for w in &lf.fit.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    let out = match cfg.format {
        Format::Csv => report::samples_csv(&lf),
        Format::Text => text,
        Format::Json => {
            let samples: Vec<Value> = lf
                .orbits
                .iter()
                .map(|o| json!({"h": o.h, "M_num": o.melnikov, "err_est": o.err_est, "period": o.period}))
                .collect();
            let v = json!({
                "h_max": lf.h_max,
                "samples": samples,
                "coefficients": rows,
                "condition": lf.fit.condition,
                "warnings": lf.fit.warnings,
                "tolerance": tol,
            });
            serde_json::to_string_pretty(&v).expect("a JSON value serializes") + "\n"
        }
    };
    Ok(Output { text: out, status })
}
