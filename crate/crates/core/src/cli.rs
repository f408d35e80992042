//! Command-line front end. Every command prints one JSON report: the result's
//! own fields at the top level plus `schema_version`, `command`, `anchor`
//! (which construction the command exercises) and `config` (the echoed
//! settings, seed included). Keys come out sorted and floats in shortest
//! round-trip form, so identical invocations give identical bytes.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::decimal_rational;
use crate::extract::{
    binomial_gate_check, expected_relation_count, extract_independent_subset, extract_small_constant_subset,
    ExtractionParams, SmallConstantParams,
};
use crate::group::{ElementSet, WireElement};
use crate::interpolate::{
    certify_family, classic_interpolate, riesz_interpolate, FamilyOptions, InterpolationOptions, Phi, Route,
};
use crate::polynomial::{is_nonnegative, PeakKind};
use crate::relations::{
    count_relations, is_n_length_independent, relation_mass, Engine, RelationOptions, RemovalRule,
};
use crate::sidon::{
    sidon_lower_bound, sidon_upper_bound, two_element_constant_mod_p, LowerBoundOptions,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "sidonlab", version, about = "Independence, Riesz products and Sidon-constant bounds")]
pub struct Cli {
    /// Seed for every random choice a command makes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on elementary relation-counting steps.
    #[arg(long, global = true, default_value_t = RelationOptions::default().work_cap)]
    pub workcap: u64,
    /// Grid points per unit of frequency spread in sup-norm certificates.
    #[arg(long = "grid-mult", global = true, default_value_t = 64)]
    pub grid_mult: u32,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Auto,
    Dp,
    Mitm,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Auto => Engine::Auto,
            EngineArg::Dp => Engine::DynamicProgram,
            EngineArg::Mitm => Engine::MeetInTheMiddle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoKind {
    /// Classic Riesz products on powers of three.
    Lacunary,
    /// Both peak polynomials for one ε.
    Peak,
    /// Extraction followed by a small-constant certificate.
    Pipeline,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relation report and n-degree (or n-length) independence.
    Check {
        /// Inline JSON, a bare integer list, or a path to a JSON file.
        #[arg(long)]
        set: String,
        #[arg(long)]
        degree: u32,
        /// Test n-length independence instead.
        #[arg(long)]
        length: bool,
        #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
        engine: EngineArg,
    },
    /// Exact relation count `C_n(F)`, optionally weighted by a thinning rate.
    Count {
        #[arg(long)]
        set: String,
        #[arg(long)]
        degree: u32,
        /// Exact decimal or fraction; adds the expected count after thinning.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
        engine: EngineArg,
    },
    /// Randomized extraction of an n-degree independent subset.
    Extract {
        #[arg(long)]
        set: String,
        #[arg(long)]
        degree: u32,
        /// Defaults to 1/(4n).
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 32)]
        attempts: u32,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value = "most-frequent")]
        rule: RemovalRule,
    },
    /// Extraction of a subset with Sidon constant at most 1+ε, with certificate.
    ExtractSidon {
        #[arg(long)]
        set: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value = "fejer")]
        peak: PeakKind,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 32)]
        attempts: u32,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long = "random-patterns", default_value_t = 100)]
        random_patterns: usize,
    },
    /// Riesz-product interpolation of given data on an independent set.
    Interpolate {
        #[arg(long)]
        set: String,
        /// JSON list of `{"elem": .., "re": .., "im": ..}`, inline or a path.
        #[arg(long)]
        phi: String,
        /// Peak route tolerance; required unless `--classic`.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Product of `1 + 2Re(φγ)` over a dissociate set.
        #[arg(long)]
        classic: bool,
        #[arg(long, default_value = "fejer")]
        peak: PeakKind,
    },
    /// Bounds on the Sidon constant of a finite set.
    Constant {
        #[arg(long)]
        set: String,
        #[arg(long, conflicts_with = "upper")]
        lower: bool,
        #[arg(long)]
        upper: bool,
        /// Peak route for the upper bound; without it the classic route is used.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value = "fejer")]
        peak: PeakKind,
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long = "descent-rounds", default_value_t = 24)]
        descent_rounds: usize,
        #[arg(long = "random-patterns", default_value_t = 100)]
        random_patterns: usize,
    },
    /// The two-element lower bound `sec(π/(2p))`.
    Secbound {
        #[arg(long)]
        p: u64,
    },
    /// Canned end-to-end runs.
    Demo {
        #[arg(value_enum)]
        kind: DemoKind,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
    },
    /// Exact check of `binom(m, m(1−θ)/2) ≤ 2^{s(θ)m}` over even m.
    Gatecheck {
        #[arg(long = "max-m", default_value_t = 64)]
        max_m: u64,
        /// Comma-separated θ values.
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])]
        thetas: Vec<f64>,
    },
}

/// Parses arguments, runs the command under the configured thread pool, writes
/// the report and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute_in_pool(&cli).and_then(|report| emit(&cli, &report)) {
        Ok(()) => 0,
        Err(e) => {
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "error": { "kind": error_kind(&e), "message": e.to_string() },
            });
            eprintln!("{}", serde_json::to_string_pretty(&report).unwrap_or_default());
            e.exit_code()
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::SpecMismatch(_) => "spec-mismatch",
        Error::Domain(_) => "domain",
        Error::NotIndependent { .. } => "not-independent",
        Error::Config(_) => "config",
        Error::Resource { .. } => "resource",
        Error::Parse(_) => "parse",
        Error::Io(_) => "io",
    }
}

fn execute_in_pool(cli: &Cli) -> Result<Value> {
    match std::env::var("SIDONLAB_THREADS") {
        Ok(v) => {
            let threads: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::config(format!("SIDONLAB_THREADS must be a positive integer, got {v:?}")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::config(e.to_string()))?;
            pool.install(|| execute(cli))
        }
        Err(_) => execute(cli),
    }
}

fn emit(cli: &Cli, report: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            // A reader that closed the pipe early has seen all it wanted.
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

/// Reads `--set`-style input: inline JSON, a bare list of integers, or a path.
pub fn read_json_arg(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        Ok(std::fs::read_to_string(arg)?)
    }
}

pub fn parse_set(arg: &str) -> Result<ElementSet> {
    let text = read_json_arg(arg)?;
    if text.trim_start().starts_with('[') {
        let values: Vec<i64> = serde_json::from_str(&text)?;
        return Ok(ElementSet::integers(&values));
    }
    ElementSet::from_json(&text)
}

#[derive(Deserialize)]
struct PhiEntry {
    elem: WireElement,
    re: f64,
    #[serde(default)]
    im: f64,
}

pub fn parse_phi(set: &ElementSet, arg: &str) -> Result<Phi> {
    let entries: Vec<PhiEntry> = serde_json::from_str(&read_json_arg(arg)?)?;
    let mut phi = Phi::new();
    for e in entries {
        let g = set.spec.adopt(e.elem)?;
        if phi.insert(g.clone(), Complex64::new(e.re, e.im)).is_some() {
            return Err(Error::Parse(format!("φ lists {g} twice")));
        }
    }
    Ok(phi)
}

fn envelope(command: &str, anchor: &str, config: Value, result: Value) -> Value {
    let mut top = Map::new();
    match result {
        Value::Object(fields) => top.extend(fields),
        other => {
            top.insert("result".into(), other);
        }
    }
    top.insert("schema_version".into(), json!(SCHEMA_VERSION));
    top.insert("command".into(), json!(command));
    top.insert("anchor".into(), json!(anchor));
    top.insert("config".into(), config);
    Value::Object(top)
}

fn relation_options(cli: &Cli, engine: EngineArg) -> RelationOptions {
    RelationOptions {
        work_cap: cli.workcap,
        engine: engine.into(),
        ..RelationOptions::default()
    }
}

fn family_options(cli: &Cli, random_patterns: usize) -> FamilyOptions {
    let mut opts = FamilyOptions {
        random_patterns,
        seed: cli.seed,
        ..FamilyOptions::default()
    };
    opts.interpolation.relations.work_cap = cli.workcap;
    opts
}

/// Runs the parsed command and returns its report.
pub fn execute(cli: &Cli) -> Result<Value> {
    let base = json!({
        "seed": cli.seed,
        "workcap": cli.workcap,
        "grid_mult": cli.grid_mult,
    });
    let with = |extra: Value| -> Value {
        let mut config = base.clone();
        if let (Value::Object(c), Value::Object(e)) = (&mut config, extra) {
            c.extend(e);
        }
        config
    };

    Ok(match &cli.command {
        Command::Check {
            set,
            degree,
            length,
            engine,
        } => {
            let set = parse_set(set)?;
            let opts = relation_options(cli, *engine);
            let config = with(json!({ "degree": degree, "length": length, "engine": format!("{engine:?}").to_lowercase() }));
            if *length {
                let report = is_n_length_independent(&set, *degree, &opts)?;
                envelope("check", "n-length-independence", config, serde_json::to_value(report)?)
            } else {
                let report = count_relations(&set, *degree, &opts)?;
                envelope("check", "n-degree-independence", config, serde_json::to_value(report)?)
            }
        }
        Command::Count {
            set,
            degree,
            lambda,
            engine,
        } => {
            let set = parse_set(set)?;
            let opts = relation_options(cli, *engine);
            let mut result = serde_json::to_value(count_relations(&set, *degree, &opts)?)?;
            if let Some(text) = lambda {
                let lambda = decimal_rational(text)?;
                let mass = relation_mass(&set, *degree, &lambda, &opts)?;
                result["expected_after_thinning"] = serde_json::to_value(mass)?;
            }
            let config = with(json!({ "degree": degree, "lambda": lambda, "engine": format!("{engine:?}").to_lowercase() }));
            envelope("count", "relation-count", config, result)
        }
        Command::Extract {
            set,
            degree,
            lambda,
            attempts,
            alpha,
            rule,
        } => {
            let set = parse_set(set)?;
            let mut params = ExtractionParams::new(*degree);
            if let Some(l) = lambda {
                params.lambda = *l;
            }
            params.max_attempts = *attempts;
            params.alpha = *alpha;
            params.seed = cli.seed;
            params.work_cap = cli.workcap;
            params.removal_rule = *rule;
            let result = extract_independent_subset(&set, &params)?;
            envelope("extract", "proportional-independent-subset", with(json!({})), serde_json::to_value(result)?)
        }
        Command::ExtractSidon {
            set,
            epsilon,
            peak,
            lambda,
            attempts,
            alpha,
            random_patterns,
        } => {
            let set = parse_set(set)?;
            let params = SmallConstantParams {
                peak: *peak,
                lambda: *lambda,
                max_attempts: *attempts,
                seed: cli.seed,
                alpha: *alpha,
                work_cap: cli.workcap,
                family: family_options(cli, *random_patterns),
            };
            let result = extract_small_constant_subset(&set, *epsilon, &params)?;
            let config = with(json!({ "epsilon": epsilon, "peak": peak, "random_patterns": random_patterns }));
            envelope("extract-sidon", "proportional-small-sidon-constant", config, serde_json::to_value(result)?)
        }
        Command::Interpolate {
            set,
            phi,
            epsilon,
            classic,
            peak,
        } => {
            let set = parse_set(set)?;
            let phi = parse_phi(&set, phi)?;
            let mut opts = InterpolationOptions::default();
            opts.relations.work_cap = cli.workcap;
            let (result, anchor) = if *classic {
                (classic_interpolate(&set, &phi, &opts)?, "classic-riesz-product")
            } else {
                let eps = epsilon.ok_or_else(|| Error::config("--epsilon is required unless --classic is given"))?;
                (riesz_interpolate(&set, &phi, &peak.build(eps)?, &opts)?, "peak-riesz-product")
            };
            let config = with(json!({
                "classic": classic,
                "epsilon": epsilon,
                "peak": peak,
                "nonneg_tolerance": opts.verify.nonneg.tolerance,
            }));
            envelope("interpolate", anchor, config, serde_json::to_value(result)?)
        }
        Command::Constant {
            set,
            lower,
            upper,
            epsilon,
            peak,
            trials,
            descent_rounds,
            random_patterns,
        } => {
            let set = parse_set(set)?;
            let want_lower = *lower || !*upper;
            let want_upper = *upper || (!*lower && epsilon.is_some());
            let mut result = Map::new();
            if want_lower {
                let opts = LowerBoundOptions {
                    trials: *trials,
                    seed: cli.seed,
                    grid_multiplier: cli.grid_mult,
                    descent_rounds: *descent_rounds,
                };
                result.insert("lower_bound".into(), serde_json::to_value(sidon_lower_bound(&set, &opts)?)?);
            }
            if want_upper {
                let route = match epsilon {
                    Some(eps) => Route::Peak(peak.build(*eps)?),
                    None => Route::Classic,
                };
                let est = sidon_upper_bound(&set, &route, &family_options(cli, *random_patterns))?;
                result.insert("upper_bound".into(), serde_json::to_value(est)?);
            }
            let config = with(json!({
                "trials": trials,
                "descent_rounds": descent_rounds,
                "epsilon": epsilon,
                "peak": peak,
                "random_patterns": random_patterns,
            }));
            envelope("constant", "sidon-constant-bounds", config, Value::Object(result))
        }
        Command::Secbound { p } => {
            let result = two_element_constant_mod_p(*p)?;
            envelope("secbound", "two-element-secant-bound", with(json!({ "p": p })), serde_json::to_value(result)?)
        }
        Command::Demo { kind, epsilon } => {
            let config = with(json!({ "kind": format!("{kind:?}").to_lowercase(), "epsilon": epsilon }));
            let (anchor, result) = match kind {
                DemoKind::Lacunary => ("classic-riesz-product", demo_lacunary(cli)?),
                DemoKind::Peak => ("peak-polynomial", demo_peak(*epsilon)?),
                DemoKind::Pipeline => ("proportional-small-sidon-constant", demo_pipeline(cli, *epsilon)?),
            };
            envelope("demo", anchor, config, result)
        }
        Command::Gatecheck { max_m, thetas } => {
            let sizes: Vec<u64> = (1..=*max_m / 2).map(|h| 2 * h).collect();
            let result = binomial_gate_check(&sizes, thetas)?;
            envelope("gatecheck", "binomial-entropy-gate", with(json!({ "max_m": max_m, "thetas": thetas })), serde_json::to_value(result)?)
        }
    })
}

/// Twenty random `φ` with `|φ| ≤ ½` on `{3, 9, 27, 81}`, each interpolated by a
/// classic Riesz product, then the family bound.
fn demo_lacunary(cli: &Cli) -> Result<Value> {
    let set = ElementSet::integers(&[3, 9, 27, 81]);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let opts = InterpolationOptions::default();
    let mut runs = Vec::new();
    for _ in 0..20 {
        let phi: Phi = set
            .elems
            .iter()
            .map(|g| {
                let r = 0.5 * rng.gen::<f64>();
                (g.clone(), Complex64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>()))
            })
            .collect();
        runs.push(classic_interpolate(&set, &phi, &opts)?.certificate);
    }
    let worst_residual = runs.iter().map(|c| c.residual).fold(0.0, f64::max);
    let all_nonneg = runs.iter().all(|c| c.nonneg.as_ref().is_some_and(|n| n.certified));
    let family = certify_family(&set, &Route::Classic, &family_options(cli, 100))?;
    Ok(json!({
        "set": set,
        "dissociate": crate::relations::is_dissociate(&set)?,
        "certificates": runs,
        "worst_residual": worst_residual,
        "all_nonneg_certified": all_nonneg,
        "family": family,
    }))
}

fn demo_peak(epsilon: f64) -> Result<Value> {
    let mut kinds = BTreeMap::new();
    for kind in [PeakKind::Fejer, PeakKind::Triangle] {
        let peak = kind.build(epsilon)?;
        let cert = is_nonnegative(&peak.to_polynomial(), 1e-9)?;
        kinds.insert(
            kind.to_string(),
            json!({
                "degree": peak.degree,
                "peak_coefficient": peak.peak_coefficient(),
                "meets_target": peak.peak_coefficient() >= 1.0 / (1.0 + epsilon) - 1e-15,
                "eta": peak.eta,
                "triangle_width": peak.triangle_width,
                "tail_mass": peak.tail_mass,
                "leading_coefficients": peak.coeffs.iter().take(8).collect::<Vec<_>>(),
                "nonneg": cert,
            }),
        );
    }
    Ok(json!({ "epsilon": epsilon, "peaks": kinds }))
}

fn demo_pipeline(cli: &Cli, epsilon: f64) -> Result<Value> {
    let values: Vec<i64> = (1..=64).collect();
    let set = ElementSet::integers(&values);
    let params = SmallConstantParams {
        seed: cli.seed,
        work_cap: cli.workcap,
        family: family_options(cli, 100),
        ..SmallConstantParams::default()
    };
    let result = extract_small_constant_subset(&set, epsilon, &params)?;
    let n = u32::try_from(result.peak.degree + 1).map_err(|_| Error::domain("peak degree too large"))?;
    let expected = expected_relation_count(&set, n, result.extraction.params.lambda, &RelationOptions {
        work_cap: cli.workcap,
        ..RelationOptions::default()
    })?;
    Ok(json!({ "input": set, "expected_relation_count": expected, "result": result }))
}
