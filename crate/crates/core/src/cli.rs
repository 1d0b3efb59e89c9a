//! Command-line driver. Every command prints one JSON document.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::homcalc::{enumerate_maps_with, hom_classes, mapping_space, DEFAULT_MAP_LIMIT};
use crate::io::{self, Document};
use crate::lifting::{complete_from_empty, is_ncategory, satisfies_lifting, DEFAULT_PASS_LIMIT};
use crate::oracle::{self, ThetaClosure};
use crate::precat::{boundary, boundary_complex, check_boundary_duality, representable_complex, CellComplex, Precat};
use crate::report::{self, map_labels};
use crate::resolution::{census, ResolveConfig, Resolution};
use crate::support::{BoundaryMode, Support};
use crate::theta::{compose, hom_set, MonotoneMap, ThetaMorphism, ThetaShape};

#[derive(Parser, Debug)]
#[command(name = "thetacat", version, about = "Θ^n cell complexes, free resolutions and homotopy classes of maps")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Free,
    /// Classical simplicial boundaries at n = 1 (experimental).
    Full,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,
    /// Largest total degree of a support shape (default 3 at n = 1, 2 at n = 2).
    #[arg(long = "degree-bound", global = true)]
    pub degree_bound: Option<u32>,
    #[arg(long = "pass-limit", global = true, default_value_t = DEFAULT_PASS_LIMIT)]
    pub pass_limit: usize,
    #[arg(long, global = true, value_enum, default_value = "free")]
    pub mode: ModeArg,
    /// Write the JSON here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Shapes, hom sets, composition and canonical forms.
    Theta {
        #[command(subcommand)]
        op: ThetaOp,
    },
    /// The boundary complex of a shape and its duality check.
    Boundary { shape: String },
    /// Build F0 and F1 (and F2 with --level2) over a category or precat.
    Resolve {
        input: String,
        #[arg(long)]
        level2: bool,
    },
    /// Enumerate maps from a complex into a precat.
    Maps {
        target: String,
        /// The representable complex of this shape.
        #[arg(long)]
        repr: Option<String>,
        /// A complex document.
        #[arg(long)]
        complex: Option<String>,
        /// A resolution stage of --of.
        #[arg(long, value_enum)]
        stage: Option<StageArg>,
        #[arg(long)]
        of: Option<String>,
        /// Include every map in the output.
        #[arg(long)]
        list: bool,
    },
    /// Homotopy classes of maps A -> B.
    Homclasses { source: String, target: String },
    /// The truncated simplicial set of maps out of the resolution.
    MappingSpace {
        source: String,
        target: String,
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Segal check.
    Check { input: String },
    /// Independent brute-force answers.
    Oracle {
        #[command(subcommand)]
        op: OracleOp,
    },
    /// Run a comparison suite against the oracle.
    Report {
        #[arg(long, value_enum, default_value = "acceptance")]
        suite: SuiteArg,
    },
    /// A free 2-category over the promoted composable pair.
    Exercise1,
    /// The inductive description of maps out of a free complex.
    Exercise2 {
        #[arg(long, default_value = "[1]")]
        shape: String,
        #[arg(long, default_value = "arrow")]
        target: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ThetaOp {
    /// Support shapes in order.
    Shapes,
    Hom { source: String, target: String },
    /// `f: source -> middle` then `g: middle -> target`.
    Compose {
        source: String,
        middle: String,
        target: String,
        f: String,
        g: String,
    },
    /// Canonical form of a raw component tuple.
    Canon { source: String, target: String, raw: String },
}

#[derive(Subcommand, Debug)]
pub enum OracleOp {
    /// Functors up to natural isomorphism.
    Homcat { source: String, target: String },
    /// Congruence-closure class tables for all shapes with entries <= bound.
    Theta {
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StageArg {
    F0,
    F1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Acceptance,
    Discrepancy,
    /// Randomized pushout, representability and slice runs (uses --seed).
    Properties,
}

/// Validated run settings.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub d: u32,
    pub pass_limit: usize,
    pub mode: BoundaryMode,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_args(a: &RunArgs) -> Result<RunConfig> {
        if !(1..=2).contains(&a.n) {
            return Err(Error::Config(format!("n must be 1 or 2, got {}", a.n)));
        }
        let d = a.degree_bound.unwrap_or(if a.n == 1 { 3 } else { 2 });
        if d == 0 {
            return Err(Error::Config("degree bound must be at least 1".into()));
        }
        let mode = match a.mode {
            ModeArg::Free => BoundaryMode::Free,
            ModeArg::Full => BoundaryMode::Full,
        };
        if mode == BoundaryMode::Full && a.n != 1 {
            return Err(Error::Config("full boundary mode is only available at n = 1".into()));
        }
        if a.pass_limit == 0 {
            return Err(Error::Config("pass limit must be at least 1".into()));
        }
        Ok(RunConfig {
            n: a.n,
            d,
            pass_limit: a.pass_limit,
            mode,
            out: a.out.clone(),
            seed: a.seed,
        })
    }

    pub fn support(&self) -> Result<Arc<Support>> {
        Support::shared(self.n, self.d, self.mode)
    }
}

/// A command's JSON output and whether a completion stopped at its pass limit.
pub struct Outcome {
    pub json: Value,
    pub pass_limit_hit: bool,
}

impl Outcome {
    fn ok(json: Value) -> Outcome {
        Outcome {
            json,
            pass_limit_hit: false,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn parse_shape(n: usize, text: &str) -> Result<ThetaShape> {
    let entries: Vec<u32> = serde_json::from_str(text)?;
    ThetaShape::new(n, entries)
}

/// Parse `[[..],[..]]` as components, padding missing ones with constants.
fn parse_morphism(source: &ThetaShape, target: &ThetaShape, text: &str) -> Result<ThetaMorphism> {
    let comps: Vec<Vec<u32>> = serde_json::from_str(text)?;
    let n = source.n();
    if comps.len() > n {
        return Err(Error::SizeMismatch(format!("{} components at n = {n}", comps.len())));
    }
    let raw = (0..n)
        .map(|i| match comps.get(i) {
            Some(v) => MonotoneMap::new(target.entry_or_zero(i), v.clone()),
            None => Ok(MonotoneMap::constant(source.entry_or_zero(i), target.entry_or_zero(i), 0)),
        })
        .collect::<Result<Vec<_>>>()?;
    ThetaMorphism::canonicalize(source, target, &raw)
}

fn morphism_json(m: &ThetaMorphism) -> Value {
    json!(m.components().iter().map(|c| c.values().to_vec()).collect::<Vec<_>>())
}

fn load_precat(arg: &str, support: &Arc<Support>) -> Result<Precat> {
    io::as_precat(io::load(arg)?, support)
}

fn level_sizes(x: &Precat) -> Value {
    let s = x.support();
    Value::Array(
        (0..s.shape_count())
            .map(|i| json!([s.shape(i).to_string(), x.size(i)]))
            .collect(),
    )
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = RunConfig::from_args(&cli.run)?;
    match &cli.command {
        Command::Theta { op } => cmd_theta(&cfg, op),
        Command::Boundary { shape } => cmd_boundary(&cfg, shape),
        Command::Resolve { input, level2 } => cmd_resolve(&cfg, input, *level2),
        Command::Maps {
            target,
            repr,
            complex,
            stage,
            of,
            list,
        } => cmd_maps(&cfg, target, repr.as_deref(), complex.as_deref(), *stage, of.as_deref(), *list),
        Command::Homclasses { source, target } => cmd_homclasses(&cfg, source, target),
        Command::MappingSpace { source, target, level } => cmd_mapping_space(&cfg, source, target, *level),
        Command::Check { input } => cmd_check(&cfg, input),
        Command::Oracle { op } => cmd_oracle(&cfg, op),
        Command::Report { suite } => cmd_report(&cfg, *suite),
        Command::Exercise1 => cmd_exercise1(&cfg),
        Command::Exercise2 { shape, target } => cmd_exercise2(&cfg, shape, target),
    }
}

fn cmd_theta(cfg: &RunConfig, op: &ThetaOp) -> Result<Outcome> {
    let n = cfg.n;
    let json = match op {
        ThetaOp::Shapes => {
            let s = cfg.support()?;
            json!({
                "n": n,
                "degree_bound": cfg.d,
                "shapes": (0..s.shape_count()).map(|i| s.shape(i).to_string()).collect::<Vec<_>>(),
            })
        }
        ThetaOp::Hom { source, target } => {
            let (a, b) = (parse_shape(n, source)?, parse_shape(n, target)?);
            let hom = hom_set(&a, &b)?;
            json!({
                "source": a.to_string(),
                "target": b.to_string(),
                "count": hom.len(),
                "morphisms": hom.iter().map(morphism_json).collect::<Vec<_>>(),
            })
        }
        ThetaOp::Compose {
            source,
            middle,
            target,
            f,
            g,
        } => {
            let (a, b, c) = (parse_shape(n, source)?, parse_shape(n, middle)?, parse_shape(n, target)?);
            let (f, g) = (parse_morphism(&a, &b, f)?, parse_morphism(&b, &c, g)?);
            json!({ "composite": morphism_json(&compose(&f, &g)?) })
        }
        ThetaOp::Canon { source, target, raw } => {
            let (a, b) = (parse_shape(n, source)?, parse_shape(n, target)?);
            let m = parse_morphism(&a, &b, raw)?;
            json!({ "canonical": morphism_json(&m), "length": m.components().len() })
        }
    };
    Ok(Outcome::ok(json))
}

fn cmd_boundary(cfg: &RunConfig, shape: &str) -> Result<Outcome> {
    let s = cfg.support()?;
    let m = parse_shape(cfg.n, shape)?;
    let id = s.shape_id_of(m.entries())?;
    let (w, _) = boundary_complex(&s, id)?;
    let (b, _) = boundary(&s, id);
    Ok(Outcome::ok(json!({
        "shape": m.to_string(),
        "mode": s.mode(),
        "cells": census(&w),
        "complex": to_value(&io::complex_to_json(&w))?,
        "levels": level_sizes(&b),
        "duality": check_boundary_duality(&s, id)?,
    })))
}

fn resolve(cfg: &RunConfig, input: &str, level2: bool) -> Result<(Precat, Resolution)> {
    let s = cfg.support()?;
    let a = load_precat(input, &s)?;
    let r = Resolution::build(
        &a,
        &ResolveConfig {
            pass_limit: cfg.pass_limit,
            level2,
        },
    )?;
    Ok((a, r))
}

fn cmd_resolve(cfg: &RunConfig, input: &str, level2: bool) -> Result<Outcome> {
    let (_, r) = resolve(cfg, input, level2)?;
    let identities = r.check_identities()?;
    Ok(Outcome {
        json: json!({
            "stages": to_value(&r.summary()?)?,
            "identities": identities,
            "converged": r.converged(),
        }),
        pass_limit_hit: !r.converged(),
    })
}

fn cmd_maps(
    cfg: &RunConfig,
    target: &str,
    repr: Option<&str>,
    complex: Option<&str>,
    stage: Option<StageArg>,
    of: Option<&str>,
    list: bool,
) -> Result<Outcome> {
    let s = cfg.support()?;
    let b = load_precat(target, &s)?;
    let mut pass_limit_hit = false;
    let w: CellComplex = match (repr, complex, stage, of) {
        (Some(shape), None, None, None) => representable_complex(&s, s.shape_id_of(parse_shape(cfg.n, shape)?.entries())?)?.0,
        (None, Some(path), None, None) => match io::load(path)? {
            Document::Complex(w) => w,
            other => return Err(Error::Config(format!("--complex expects a complex, got a {}", other.kind()))),
        },
        (None, None, Some(stage), Some(of)) => {
            let (_, r) = resolve(cfg, of, false)?;
            pass_limit_hit = !r.converged();
            match stage {
                StageArg::F0 => r.f0.complex().clone(),
                StageArg::F1 => r.f1.complex().clone(),
            }
        }
        _ => return Err(Error::Config("give exactly one of --repr, --complex or --stage with --of".into())),
    };
    let (maps, stats) = enumerate_maps_with(&w, &b, DEFAULT_MAP_LIMIT)?;
    let mut json = json!({
        "cells": w.len(),
        "count": maps.len(),
        "stats": to_value(&stats)?,
    });
    if let Some(warning) = &maps.warning {
        json["warning"] = json!(warning);
    }
    if list {
        json["maps"] = json!(maps.maps.iter().map(|m| map_labels(&b, &w, m.images())).collect::<Vec<_>>());
    }
    Ok(Outcome { json, pass_limit_hit })
}

fn cmd_homclasses(cfg: &RunConfig, source: &str, target: &str) -> Result<Outcome> {
    let s = cfg.support()?;
    let (da, db) = (io::load(source)?, io::load(target)?);
    let oracle_pair = match (&da, &db) {
        (Document::Category(a), Document::Category(b)) if cfg.n == 1 => Some((a.clone(), b.clone())),
        _ => None,
    };
    let a = io::as_precat(da, &s)?;
    let b = io::as_precat(db, &s)?;
    let r = Resolution::build(
        &a,
        &ResolveConfig {
            pass_limit: cfg.pass_limit,
            level2: false,
        },
    )?;
    let hc = hom_classes(&r, &b)?;
    let w0 = r.f0.complex();
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); hc.class_count()];
    for (i, &c) in hc.class_of.iter().enumerate() {
        classes[c].push(i);
    }
    let mut json = json!({
        "maps": hc.maps.maps.iter().map(|m| map_labels(&b, w0, m.images())).collect::<Vec<_>>(),
        "edges": hc.edges.iter().map(|e| [e.from, e.to]).collect::<Vec<_>>(),
        "classes": classes,
        "class_count": hc.class_count(),
        "raw_relation": to_value(&hc.flags)?,
        "single_step_sufficient": hc.flags.single_step_sufficient(),
        "converged": r.converged(),
    });
    if let Some(w) = &hc.maps.warning {
        json["warning"] = json!(w);
    }
    if let Some((ca, cb)) = oracle_pair {
        let truth = oracle::ho_cat_hom(&ca, &cb);
        json["oracle_comparison"] = json!({
            "oracle_classes": truth.count(),
            "agree": truth.count() == hc.class_count(),
        });
    }
    Ok(Outcome {
        json,
        pass_limit_hit: !r.converged(),
    })
}

fn cmd_mapping_space(cfg: &RunConfig, source: &str, target: &str, level: usize) -> Result<Outcome> {
    let s = cfg.support()?;
    let b = load_precat(target, &s)?;
    let (_, r) = resolve(cfg, source, level >= 2)?;
    let m = mapping_space(&r, &b, level)?;
    Ok(Outcome {
        json: to_value(&m.summary())?,
        pass_limit_hit: !r.converged(),
    })
}

fn cmd_check(cfg: &RunConfig, input: &str) -> Result<Outcome> {
    let s = cfg.support()?;
    let x = load_precat(input, &s)?;
    x.validate()?;
    let witness = is_ncategory(&x)?;
    Ok(Outcome::ok(json!({
        "n-category": witness.is_none(),
        "witness": witness.map(|w| to_value(&w)).transpose()?,
        "levels": level_sizes(&x),
    })))
}

fn cmd_oracle(cfg: &RunConfig, op: &OracleOp) -> Result<Outcome> {
    let json = match op {
        OracleOp::Homcat { source, target } => {
            let (a, b) = match (io::load(source)?, io::load(target)?) {
                (Document::Category(a), Document::Category(b)) => (a, b),
                _ => return Err(Error::Config("the category oracle takes two categories".into())),
            };
            let h = oracle::ho_cat_hom(&a, &b);
            let mut classes: Vec<Vec<usize>> = vec![Vec::new(); h.count()];
            for (i, &c) in h.classes.class_of.iter().enumerate() {
                classes[c].push(i);
            }
            json!({
                "functors": to_value(&h.functors)?,
                "classes": classes,
                "count": h.count(),
                "equivalence_relation": h.classes.equivalence_relation,
            })
        }
        OracleOp::Theta { bound } => {
            let mut c = ThetaClosure::build(cfg.n, *bound)?;
            let shapes = c.shapes();
            let mut tables = Vec::new();
            for x in &shapes {
                for y in &shapes {
                    tables.push(to_value(&c.classes(x, y)?)?);
                }
            }
            json!({ "n": cfg.n, "bound": bound, "morphisms": c.morphism_count(), "tables": tables })
        }
    };
    Ok(Outcome::ok(json))
}

fn cmd_report(cfg: &RunConfig, suite: SuiteArg) -> Result<Outcome> {
    if suite == SuiteArg::Properties {
        let runs = report::property_suite(cfg.seed)?;
        return Ok(Outcome::ok(json!({ "suite": "properties", "seed": cfg.seed, "runs": to_value(&runs)? })));
    }
    if cfg.n != 1 {
        return Err(Error::Unsupported("the comparison suites run at n = 1".into()));
    }
    let r = match suite {
        SuiteArg::Discrepancy => report::run_suite("discrepancy", &report::DISCREPANCY_SUITE, cfg.d)?,
        _ => report::run_suite("acceptance", &report::ACCEPTANCE_SUITE, cfg.d)?,
    };
    let hit = r.pairs.iter().any(|p| !p.converged);
    Ok(Outcome {
        json: to_value(&r)?,
        pass_limit_hit: hit,
    })
}

fn cmd_exercise1(cfg: &RunConfig) -> Result<Outcome> {
    let d = cfg.d.min(2);
    let low = Support::shared(1, d, BoundaryMode::Free)?;
    let a = crate::precat::promote(&crate::precat::nerve(&low, &crate::category::composable_pair())?)?;
    let f0 = complete_from_empty(&a, cfg.pass_limit)?;
    let s = a.support().clone();
    let w = f0.complex();
    let over: Vec<Value> = (0..w.len())
        .map(|c| json!([s.shape(w.cell(c).shape).to_string(), a.label(w.cell(c).shape, f0.map.image(c))]))
        .collect();
    let segal = is_ncategory(f0.precat())?;
    Ok(Outcome {
        json: json!({
            "target": "promoted nerve of the composable pair",
            "n": 2,
            "degree_bound": d,
            "census": census(w),
            "cells_over": over,
            "bounded_lifting": satisfies_lifting(f0.over(&a)).is_none(),
            "fixpoint": f0.report.fixpoint,
            "passes": f0.report.passes,
            "segal": segal.is_none(),
            "segal_witness": segal.map(|w| to_value(&w)).transpose()?,
        }),
        pass_limit_hit: !f0.report.fixpoint,
    })
}

fn cmd_exercise2(cfg: &RunConfig, shape: &str, target: &str) -> Result<Outcome> {
    let s = cfg.support()?;
    let b = load_precat(target, &s)?;
    let m = parse_shape(cfg.n, shape)?;
    let (w, _) = representable_complex(&s, s.shape_id_of(m.entries())?)?;
    let (maps, stats) = enumerate_maps_with(&w, &b, DEFAULT_MAP_LIMIT)?;
    let mut by_shape: std::collections::BTreeMap<String, (usize, usize)> = Default::default();
    for c in &stats.cells {
        let e = by_shape.entry(c.shape.clone()).or_default();
        e.0 += 1;
        e.1 += c.total_candidates;
    }
    Ok(Outcome::ok(json!({
        "complex": m.to_string(),
        "target_level_size": b.size(s.shape_id_of(m.entries())?),
        "cells": to_value(&stats.cells)?,
        "by_shape": by_shape
            .into_iter()
            .map(|(k, (cells, cands))| json!({"shape": k, "cells": cells, "candidates": cands}))
            .collect::<Vec<_>>(),
        "nodes": stats.nodes,
        "dead_ends": stats.dead_ends,
        "maps": maps.len(),
    })))
}

/// Exit code for an error: 2 pass limit, 3 invalid input, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PassLimit { .. } | Error::ElementLimit(_) => 2,
        e if e.is_validation() => 3,
        _ => 1,
    }
}

/// Parse arguments, run, write the output; returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    match run(&cli).and_then(|o| emit(&cli, o)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(cli: &Cli, o: Outcome) -> Result<i32> {
    let text = serde_json::to_string_pretty(&o.json)? + "\n";
    match &cli.run.out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            // a closed pipe (e.g. `| head`) is not an error
            if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    if o.pass_limit_hit {
        eprintln!("warning: a completion stopped at the pass limit before reaching a fixpoint");
        return Ok(2);
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome> {
        let cli = Cli::try_parse_from(std::iter::once("thetacat").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn theta_hom_counts() {
        assert_eq!(run_args(&["theta", "hom", "[]", "[2]"]).unwrap().json["count"], 3);
        assert_eq!(run_args(&["theta", "hom", "[1]", "[1,1]", "--n", "2"]).unwrap().json["count"], 4);
        let c = run_args(&["theta", "compose", "[1]", "[1,1]", "[1]", "[[0,1],[1]]", "[[0,0]]", "--n", "2"]).unwrap();
        assert_eq!(c.json["composite"], json!([[0, 0]]));
    }

    #[test]
    fn pipeline_commands() {
        let h = run_args(&["homclasses", "fixtures/arrow.json", "fixtures/arrow.json"]).unwrap();
        assert_eq!(h.json["class_count"], 3);
        assert_eq!(h.json["oracle_comparison"]["agree"], true);
        assert_eq!(run_args(&["check", "fixtures/arrow.json"]).unwrap().json["n-category"], true);
        let e = run_args(&["exercise2"]).unwrap();
        assert_eq!(e.json["maps"], 3);
    }

    #[test]
    fn config_errors() {
        assert!(run_args(&["--n", "3", "theta", "shapes"]).is_err());
        assert!(run_args(&["--n", "2", "--mode", "full", "theta", "shapes"]).is_err());
        let e = run_args(&["check", "no-such-thing"]).err().unwrap();
        assert_eq!(exit_code(&e), 3);
    }
}
