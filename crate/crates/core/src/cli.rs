//! Command-line front end: argument definitions, input loading and report
//! rendering. The binary only parses arguments and prints.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lorentz::{concavity_search, p_growth_experiment, quasinorm_search, triangle_search, LorentzParams};
use crate::measure::{canonical_step, Grid, MeasurableSet, MeasureSpace, StepFunction, Weight};
use crate::rearrange::rearrange;
use crate::symmetrize::{
    rearrange_2d, spherical_normability_suite, spherical_profile, steiner, steiner_normability_suite, GridFunction,
    Route,
};
use crate::transform::{Property, SetTransformation, TransformSpec};
use crate::tree::{cc_linear_suite, HomogeneousTree, TreeWeight};

#[derive(Debug, Parser)]
#[command(name = "layercake", version, about = "Layer-cake rearrangements and weighted Lorentz functionals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rearrange a step function.
    Rearrange(RearrangeArgs),
    /// Symmetrize a grid function.
    Symmetrize(SymmetrizeArgs),
    /// Lorentz functional of a step function.
    Norm(NormArgs),
    /// Check a transformation property or a normability condition.
    Check(CheckArgs),
    /// Run a numerical experiment.
    Experiment(ExperimentArgs),
    /// Concavity versus linear decrease for tree weights.
    Tree(TreeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformKind {
    Classical,
    Shifted,
    Spherical,
    Steiner,
    Multidim2d,
    Tree,
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    /// Built-in transformation.
    #[arg(long, value_enum)]
    pub transform: Option<TransformKind>,
    /// JSON transformation descriptor (needed for user tables).
    #[arg(long, conflicts_with = "transform")]
    pub transform_file: Option<PathBuf>,
    /// Dimension of the spherical codomain.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Order of Steiner symmetrization.
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    /// Tree branching.
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// Tree depth.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
}

impl TransformArgs {
    fn spec(&self) -> Result<TransformSpec> {
        if let Some(path) = &self.transform_file {
            return parse_json(path, &read(path)?);
        }
        Ok(match self.transform.unwrap_or(TransformKind::Classical) {
            TransformKind::Classical => TransformSpec::Classical,
            TransformKind::Shifted => TransformSpec::Shifted,
            TransformKind::Spherical => TransformSpec::Spherical { dim: self.dim },
            TransformKind::Steiner => TransformSpec::Steiner { order: self.order },
            TransformKind::Multidim2d => TransformSpec::Multidim2d,
            TransformKind::Tree => TransformSpec::TreeInitialSegment { q: self.q, d: self.d },
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct SeedArgs {
    /// Seed for witness generation.
    #[arg(long, env = "LAYERCAKE_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RearrangeArgs {
    /// Step function JSON.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub transform: TransformArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Spherical,
    Steiner,
    #[value(name = "2d")]
    TwoD,
}

#[derive(Debug, Clone, Args)]
pub struct SymmetrizeArgs {
    /// Grid CSV.
    #[arg(long)]
    pub grid: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = RouteArg::Iterated)]
    pub route: RouteArg,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Iterated,
    SetTransform,
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub transform: TransformArgs,
    #[arg(long)]
    pub p: f64,
    /// Weight JSON; the unit weight when absent.
    #[arg(long)]
    pub weight: Option<PathBuf>,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Condition {
    Concavity,
    QuasiNorm,
    Triangle,
    Spherical,
    Steiner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    Monotone,
    Fatou,
    MeasurePreserving,
    Intersection,
    Nondegenerate,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub transform: TransformArgs,
    #[arg(long, value_enum, required_unless_present = "condition", conflicts_with = "condition")]
    pub property: Option<PropertyArg>,
    #[arg(long, value_enum)]
    pub condition: Option<Condition>,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Exit with status 1 when the check finds a violation.
    #[arg(long)]
    pub assert: bool,
    /// Domain: `counting:N`, `atoms:m1,m2,..`, `halfline`, or
    /// `grid:N1,N2,..[@h]` (centred).
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long)]
    pub weight: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Constant the quasi-norm ratio must stay below.
    #[arg(long, default_value_t = 1.0)]
    pub bound: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[command(subcommand)]
    pub which: Experiment,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Experiment {
    /// `(1/n)‖f_1 + ... + f_n‖` for the unit-norm blocks `2^k χ_{A_k}`.
    PGrowth {
        #[arg(long)]
        p: f64,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct TreeArgs {
    /// Tree weight JSON `{q, d, values}`.
    #[arg(long)]
    pub weights: PathBuf,
    #[arg(long)]
    pub assert: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Text to emit and the process status.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub output: Option<PathBuf>,
    pub code: u8,
}

/// Runs a parsed command. Errors map to status 2, except divergent
/// integrals, which map to 1.
pub fn run(cli: Cli) -> std::result::Result<Outcome, (Error, u8)> {
    run_inner(cli).map_err(|e| {
        let code = if matches!(e, Error::Diverged(_)) { 1 } else { 2 };
        (e, code)
    })
}

fn run_inner(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Rearrange(a) => cmd_rearrange(a),
        Command::Symmetrize(a) => cmd_symmetrize(a),
        Command::Norm(a) => cmd_norm(a),
        Command::Check(a) => cmd_check(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Tree(a) => cmd_tree(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn json_outcome(v: Value, output: Option<PathBuf>, violated: bool, assert: bool) -> Outcome {
    Outcome {
        body: pretty(&v),
        output,
        code: if violated && assert { 1 } else { 0 },
    }
}

/// Reads a step function from any of the accepted JSON shapes: canonical
/// `{space, values, levels}`, `{space, pairs: [[value, set], ..]}` or
/// `{space, cell_values: [..]}`.
pub fn load_function(path: &Path) -> Result<StepFunction> {
    let text = read(path)?;
    let raw: Value = parse_json(path, &text)?;
    let obj = raw
        .as_object()
        .ok_or_else(|| Error::InvalidInput(format!("{}: expected a JSON object", path.display())))?;
    let field = |name: &str| -> Result<Value> {
        obj.get(name)
            .cloned()
            .ok_or_else(|| Error::InvalidInput(format!("{}: missing field `{name}`", path.display())))
    };
    let space: MeasureSpace = serde_json::from_value(field("space")?)
        .map_err(|e| Error::InvalidInput(format!("{}: field `space`: {e}", path.display())))?;
    if obj.contains_key("levels") {
        return parse_json(path, &text);
    }
    if obj.contains_key("pairs") {
        let pairs: Vec<(f64, MeasurableSet)> = serde_json::from_value(field("pairs")?)
            .map_err(|e| Error::InvalidInput(format!("{}: field `pairs`: {e}", path.display())))?;
        return canonical_step(&space, &pairs);
    }
    if obj.contains_key("cell_values") {
        let vals: Vec<f64> = serde_json::from_value(field("cell_values")?)
            .map_err(|e| Error::InvalidInput(format!("{}: field `cell_values`: {e}", path.display())))?;
        return StepFunction::from_index_values(space, &vals);
    }
    Err(Error::InvalidInput(format!(
        "{}: expected one of `levels`, `pairs`, `cell_values`",
        path.display()
    )))
}

fn load_weight(path: Option<&PathBuf>) -> Result<Weight> {
    match path {
        None => Ok(Weight::Unit),
        Some(p) => {
            let w: Weight = parse_json(p, &read(p)?)?;
            w.validate()?;
            Ok(w)
        }
    }
}

/// Parses the grid CSV: `n`, `h`, `origin` and `shape` rows, a `values`
/// row, then the cell values row-major (any number per line).
pub fn parse_grid_csv(text: &str) -> Result<GridFunction> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut n = None;
    let mut h = None;
    let mut origin: Option<Vec<f64>> = None;
    let mut shape: Option<Vec<usize>> = None;
    let mut values = Vec::new();
    let mut in_values = false;
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::InvalidInput(format!("grid csv: {e}")))?;
        let line = line + 1;
        let bad = |what: &str| Error::InvalidInput(format!("grid csv line {line}: {what}"));
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("`{s}` is not a number")));
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if in_values {
            for f in rec.iter().filter(|f| !f.is_empty()) {
                values.push(num(f)?);
            }
            continue;
        }
        let key = rec.get(0).unwrap_or_default();
        let rest: Vec<&str> = rec.iter().skip(1).filter(|f| !f.is_empty()).collect();
        match key {
            "n" => n = Some(rest.first().ok_or_else(|| bad("missing n"))?.parse::<usize>().map_err(|_| bad("bad n"))?),
            "h" => h = Some(num(rest.first().ok_or_else(|| bad("missing h"))?)?),
            "origin" => origin = Some(rest.iter().map(|s| num(s)).collect::<Result<_>>()?),
            "shape" => {
                shape = Some(
                    rest.iter()
                        .map(|s| s.parse::<usize>().map_err(|_| bad(&format!("`{s}` is not a count"))))
                        .collect::<Result<_>>()?,
                )
            }
            "values" => in_values = true,
            other => return Err(bad(&format!("unknown key `{other}`"))),
        }
    }
    let missing = |k: &str| Error::InvalidInput(format!("grid csv: missing `{k}` row"));
    let shape = shape.ok_or_else(|| missing("shape"))?;
    let h = h.ok_or_else(|| missing("h"))?;
    if let Some(n) = n {
        if n != shape.len() {
            return Err(Error::InvalidInput(format!("grid csv: n = {n} but shape has {} axes", shape.len())));
        }
    }
    let grid = match origin {
        Some(o) => Grid::new(shape, h, o)?,
        None => Grid::centered(shape, h)?,
    };
    GridFunction::new(grid, values)
}

/// Inverse of [`parse_grid_csv`], one grid row (last axis) per line.
pub fn write_grid_csv(f: &GridFunction) -> String {
    let g = &f.grid;
    let join = |v: Vec<String>| v.join(",");
    let mut s = String::new();
    s += &format!("n,{}\n", g.dim());
    s += &format!("h,{}\n", g.h);
    s += &format!("origin,{}\n", join(g.origin.iter().map(|x| x.to_string()).collect()));
    s += &format!("shape,{}\n", join(g.shape.iter().map(|x| x.to_string()).collect()));
    s += "values\n";
    let width = *g.shape.last().unwrap_or(&1);
    for row in f.values.chunks(width.max(1)) {
        s += &join(row.iter().map(|x| x.to_string()).collect());
        s += "\n";
    }
    s
}

fn profile_csv(rows: &[(f64, f64)]) -> String {
    let mut s = String::from("t,value\n");
    for (t, v) in rows {
        s += &format!("{t},{v}\n");
    }
    s
}

/// Parses `--domain`.
pub fn parse_domain(text: &str) -> Result<MeasureSpace> {
    let bad = || Error::InvalidInput(format!("domain `{text}`: expected counting:N, atoms:m1,.., halfline or grid:N1,..[@h]"));
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    match kind {
        "halfline" => Ok(MeasureSpace::HalfLine),
        "counting" => Ok(MeasureSpace::counting(rest.parse().map_err(|_| bad())?)),
        "atoms" => {
            let masses = rest.split(',').map(|m| m.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
            MeasureSpace::atoms(masses)
        }
        "grid" => {
            let (dims, h) = match rest.split_once('@') {
                Some((d, h)) => (d, h.parse::<f64>().map_err(|_| bad())?),
                None => (rest, 1.0),
            };
            let shape = dims.split(',').map(|d| d.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?;
            MeasureSpace::grid(Grid::centered(shape, h)?)
        }
        _ => Err(bad()),
    }
}

fn cmd_rearrange(a: RearrangeArgs) -> Result<Outcome> {
    let f = load_function(&a.input)?;
    let spec = a.transform.spec()?;
    let r = SetTransformation::build(spec.clone(), f.space().clone(), a.seed.seed)?;
    let fr = rearrange(&r, &f)?;
    let body = match a.out.format {
        Format::Csv => profile_csv(&fr.profile_rows()?),
        Format::Json => {
            let step = fr.to_step().ok();
            pretty(&json!({
                "command": "rearrange",
                "seed": a.seed.seed,
                "transform": spec,
                "flags": r.flags(),
                "result": { "space": fr.space, "values": fr.values, "levels": fr.levels },
                "canonical": step,
            }))
        }
    };
    Ok(Outcome { body, output: a.out.output, code: 0 })
}

fn cmd_symmetrize(a: SymmetrizeArgs) -> Result<Outcome> {
    let f = parse_grid_csv(&read(&a.grid)?)?;
    let body = match a.mode {
        Mode::Spherical => {
            let prof = spherical_profile(&f)?;
            match a.out.format {
                Format::Csv => profile_csv(&prof.rows()),
                Format::Json => pretty(&json!({ "command": "symmetrize", "mode": "spherical", "seed": a.seed.seed, "profile": prof })),
            }
        }
        Mode::Steiner => {
            let out = steiner(&f, a.order)?;
            match a.out.format {
                Format::Csv => write_grid_csv(&out),
                Format::Json => pretty(&json!({ "command": "symmetrize", "mode": "steiner", "order": a.order, "seed": a.seed.seed, "grid": out })),
            }
        }
        Mode::TwoD => {
            let route = match a.route {
                RouteArg::Iterated => Route::Iterated,
                RouteArg::SetTransform => Route::SetTransform,
            };
            let out = rearrange_2d(&f, route)?;
            match a.out.format {
                Format::Csv => {
                    let (rows, cols, h) = (out.grid.shape[0], out.grid.shape[1], out.grid.h);
                    let mut s = String::from("s,t,value\n");
                    for r in 0..rows {
                        for c in 0..cols {
                            s += &format!("{},{},{}\n", c as f64 * h, r as f64 * h, out.values[r * cols + c]);
                        }
                    }
                    s
                }
                Format::Json => pretty(&json!({ "command": "symmetrize", "mode": "2d", "route": route, "seed": a.seed.seed, "grid": out })),
            }
        }
    };
    Ok(Outcome { body, output: a.out.output, code: 0 })
}

fn cmd_norm(a: NormArgs) -> Result<Outcome> {
    let f = load_function(&a.input)?;
    let spec = a.transform.spec()?;
    let r = SetTransformation::build(spec.clone(), f.space().clone(), a.seed.seed)?;
    let weight = load_weight(a.weight.as_ref())?;
    let params = LorentzParams::new(a.p, weight.clone(), r)?;
    let norm = params.norm(&f)?;
    let v = json!({
        "command": "norm",
        "seed": a.seed.seed,
        "transform": spec,
        "weight": weight,
        "p": a.p,
        "norm": norm,
        "lp_norm": f.lp_norm(a.p)?,
    });
    Ok(json_outcome(v, a.output, false, false))
}

fn default_domain(spec: &TransformSpec) -> Result<MeasureSpace> {
    Ok(match spec {
        TransformSpec::Steiner { .. } | TransformSpec::Multidim2d => MeasureSpace::grid(Grid::centered(vec![4, 4], 1.0)?)?,
        TransformSpec::TreeInitialSegment { q, d } => MeasureSpace::counting(HomogeneousTree::new(*q, *d)?.vertex_count()),
        TransformSpec::UserTable { table, .. } => MeasureSpace::counting(table.len().trailing_zeros() as usize),
        _ => MeasureSpace::counting(8),
    })
}

fn cmd_check(a: CheckArgs) -> Result<Outcome> {
    let seed = a.seed.seed;
    let spec = a.transform.spec()?;
    let domain = match &a.domain {
        Some(d) => parse_domain(d)?,
        None => default_domain(&spec)?,
    };
    let echo = json!({
        "transform": spec,
        "domain": domain,
        "trials": a.trials,
        "seed": seed,
        "p": a.p,
    });
    if let Some(prop) = a.property {
        let r = SetTransformation::build(spec, domain, seed)?;
        let property = match prop {
            PropertyArg::Monotone => Property::Monotone,
            PropertyArg::Fatou => Property::Fatou,
            PropertyArg::MeasurePreserving => Property::MeasurePreserving,
            PropertyArg::Intersection => Property::Intersection,
            PropertyArg::Nondegenerate => Property::Nondegenerate,
        };
        let report = r.check_property(property, a.trials, seed)?;
        let violated = !report.holds();
        let v = json!({ "command": "check", "spec": echo, "report": report });
        return Ok(json_outcome(v, a.output, violated, a.assert));
    }
    let condition = a.condition.expect("clap requires property or condition");
    let weight = load_weight(a.weight.as_ref())?;
    let (report, violated) = match condition {
        Condition::Spherical => {
            let r = spherical_normability_suite(&weight, a.p, seed)?;
            let violated = !(r.concavity.holds && r.decreasing.holds && r.saturation.holds);
            (serde_json::to_value(r).unwrap(), violated)
        }
        Condition::Steiner => {
            let MeasureSpace::Grid(g) = &domain else {
                return Err(Error::InvalidInput("the steiner condition needs a grid domain".into()));
            };
            let r = steiner_normability_suite(g, &weight, a.trials, seed)?;
            let violated = !(r.concavity.holds && r.decreasing.holds);
            (serde_json::to_value(r).unwrap(), violated)
        }
        _ => {
            let r = SetTransformation::build(spec, domain, seed)?;
            let params = LorentzParams::new(a.p, weight, r)?;
            match condition {
                Condition::Concavity => {
                    let r = concavity_search(&params, a.trials, seed)?;
                    (serde_json::to_value(&r).unwrap(), !r.holds)
                }
                Condition::QuasiNorm => {
                    let r = quasinorm_search(&params, a.bound, a.trials, seed)?;
                    (serde_json::to_value(&r).unwrap(), !r.holds)
                }
                Condition::Triangle => {
                    let r = triangle_search(&params, a.trials, seed)?;
                    (serde_json::to_value(&r).unwrap(), r.violated)
                }
                Condition::Spherical | Condition::Steiner => unreachable!(),
            }
        }
    };
    let v = json!({ "command": "check", "condition": condition_name(condition), "spec": echo, "report": report });
    Ok(json_outcome(v, a.output, violated, a.assert))
}

fn condition_name(c: Condition) -> &'static str {
    match c {
        Condition::Concavity => "concavity",
        Condition::QuasiNorm => "quasi-norm",
        Condition::Triangle => "triangle",
        Condition::Spherical => "spherical",
        Condition::Steiner => "steiner",
    }
}

fn cmd_experiment(a: ExperimentArgs) -> Result<Outcome> {
    let Experiment::PGrowth { p, n, format, output } = a.which;
    let values = p_growth_experiment(p, n)?;
    let body = match format {
        Format::Csv => {
            let mut s = String::from("n,value\n");
            for (i, v) in values.iter().enumerate() {
                s += &format!("{},{}\n", i + 1, v);
            }
            s
        }
        Format::Json => pretty(&json!({ "command": "experiment", "experiment": "p-growth", "p": p, "N": n, "values": values })),
    };
    Ok(Outcome { body, output, code: 0 })
}

fn cmd_tree(a: TreeArgs) -> Result<Outcome> {
    let w = TreeWeight::from_json(&read(&a.weights)?)?;
    let r = cc_linear_suite(&w)?;
    let violated = !(r.concavity_holds && r.linearly_decreasing.holds);
    let v = json!({ "command": "tree", "report": r });
    Ok(json_outcome(v, a.output, violated, a.assert))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_csv_round_trip() {
        let text = "n,2\nh,0.5\norigin,-1,-0.5\nshape,2,4\nvalues\n0,1,2,3\n4,5,6,7\n";
        let f = parse_grid_csv(text).unwrap();
        assert_eq!(f.grid.shape, vec![2, 4]);
        assert_eq!(f.values[5], 5.0);
        assert_eq!(parse_grid_csv(&write_grid_csv(&f)).unwrap(), f);
    }

    #[test]
    fn grid_csv_errors_name_the_line() {
        let err = parse_grid_csv("h,1\nshape,2\nvalues\n1,x\n").unwrap_err();
        assert!(err.to_string().contains("line 4"), "{err}");
        assert!(parse_grid_csv("h,1\nvalues\n1\n").is_err());
        assert!(parse_grid_csv("h,1\nshape,3\nvalues\n1,2\n").is_err());
    }

    #[test]
    fn domains() {
        assert_eq!(parse_domain("counting:3").unwrap(), MeasureSpace::counting(3));
        assert_eq!(parse_domain("halfline").unwrap(), MeasureSpace::HalfLine);
        assert_eq!(parse_domain("atoms:1,2.5").unwrap(), MeasureSpace::atoms(vec![1.0, 2.5]).unwrap());
        let MeasureSpace::Grid(g) = parse_domain("grid:2,4@0.5").unwrap() else { panic!() };
        assert_eq!(g.origin, vec![-0.5, -1.0]);
        assert!(parse_domain("sphere:2").is_err());
    }
}
