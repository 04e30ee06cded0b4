//! `nash-toric`: command-line access to the toric Nash pipeline.
//!
//! Every command prints one JSON document carrying `"schema": 1`. Exit codes:
//! 0 on success, 1 on usage errors (bad flags, malformed JSON), 2 on domain
//! errors raised by the library.

mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use nash_toric::cones::{Cone, Fan};
use nash_toric::curve::{check_characteristic, curve_report, semigroup_from_generators};
use nash_toric::gfan::{groebner_fan_2d, GroebnerConeSummary};
use nash_toric::groebner::{buchberger, Ideal};
use nash_toric::lattice::LatticeVector;
use nash_toric::nash::{
    a_cone, calibrate_power_rule_on, ConeSmoothness, iterate_normalized_nash_with, nash_fan, toh_yama_cone, toh_yama_rays, PowerRule,
    DEFAULT_ITERATION_CAP,
};
use nash_toric::polyalg::{CoefficientField, Field, MonomialOrder, Polynomial, PolynomialJson, PrimeField, Rationals, SemigroupRing};
use nash_toric::semigroups::AffineSemigroup;

#[derive(Parser, Debug)]
#[command(name = "nash-toric", version, about = "Normalized Nash modifications of toric varieties, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dual cone of a cone.
    Dual(ConeArgs),
    /// Hilbert basis of the semigroup of a cone.
    Hilbert(ConeArgs),
    /// Whether a cone is smooth.
    SmoothCheck(ConeArgs),
    /// Reduced Groebner basis of an ideal of a semigroup ring.
    Groebner(IdealArgs),
    /// Restricted Groebner fan of an ideal (dimension 2).
    Gfan(IdealArgs),
    /// Fan of the normalized n-th Nash modification.
    Nash(NashArgs),
    /// Iterate normalized Nash modifications until smooth (dimension 2).
    Iterate(IterateArgs),
    /// Closed-form Toh-Yama cone for A_3, checked against the computed fan.
    TohYama(TohYamaArgs),
    /// Nash modifications of a curve branch from its semigroup.
    Curve(CurveArgs),
    /// Select the power rule that reproduces the Toh-Yama cones.
    Calibrate(CalibrateArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Coefficient field: rational, prime:p, or a bare prime p.
    #[arg(long, default_value = "rational", value_parser = parse_field)]
    field: CoefficientField,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also draw the resulting fan as SVG to this file (dimension 2).
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConeArgs {
    /// Inline cone JSON, e.g. '{"dim":2,"rays":[[0,1],[4,-3]]}'.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    cone: Option<String>,
    /// File holding the cone JSON.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct IdealArgs {
    /// Inline JSON {"cone": {...}, "generators": [{"terms": [...]}, ...]}.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    ideal: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    /// default, lex, toh-yama, or a JSON monomial order.
    #[arg(long, default_value = "default")]
    order: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct NashArgs {
    #[command(flatten)]
    cone: ConeArgs,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// base, power(n) or power(n+1).
    #[arg(long, default_value_t = PowerRule::default(), value_parser = parse_rule)]
    power_rule: PowerRule,
}

#[derive(Args, Debug)]
struct IterateArgs {
    #[command(flatten)]
    cone: ConeArgs,
    #[arg(long, default_value_t = PowerRule::default(), value_parser = parse_rule)]
    power_rule: PowerRule,
    #[arg(long, default_value_t = DEFAULT_ITERATION_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct TohYamaArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = PowerRule::default(), value_parser = parse_rule)]
    power_rule: PowerRule,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// Semigroup generators, e.g. 2,5.
    #[arg(long, value_delimiter = ',', required = true)]
    generators: Vec<u64>,
    #[arg(long, default_value_t = 10)]
    up_to: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    orders: Vec<u32>,
    #[command(flatten)]
    common: Common,
}

fn parse_field(s: &str) -> Result<CoefficientField, String> {
    s.parse().map_err(|e: nash_toric::Error| e.to_string())
}

fn parse_rule(s: &str) -> Result<PowerRule, String> {
    s.parse().map_err(|e: nash_toric::Error| e.to_string())
}

enum Failure {
    Usage(String),
    Domain(nash_toric::Error),
}

impl From<nash_toric::Error> for Failure {
    fn from(e: nash_toric::Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(n) = std::env::var("NASH_TORIC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not cap threads: {e}");
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Outcome<T> {
    serde_json::from_str(text)
        .map_err(|e| Failure::Usage(format!("malformed {what} JSON at line {} column {}: {e}", e.line(), e.column())))
}

fn read_source(inline: &Option<String>, path: &Option<PathBuf>) -> Outcome<String> {
    match (inline, path) {
        (Some(s), _) => Ok(s.clone()),
        (None, Some(p)) => fs::read_to_string(p).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
        (None, None) => Err(Failure::Usage("no input given".into())),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCone {
    dim: usize,
    rays: Vec<LatticeVector>,
}

impl RawCone {
    fn build(self) -> Outcome<Cone> {
        Ok(Cone::new(self.dim, self.rays)?)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdeal {
    cone: RawCone,
    generators: Vec<PolynomialJson>,
}

fn load_cone(args: &ConeArgs) -> Outcome<Cone> {
    let text = read_source(&args.cone, &args.input)?;
    parse_json::<RawCone>(&text, "cone")?.build()
}

fn emit(common: &Common, body: Value) -> Outcome<()> {
    let mut doc = serde_json::Map::new();
    doc.insert("schema".into(), json!(1));
    match body {
        Value::Object(m) => doc.extend(m),
        other => {
            doc.insert("result".into(), other);
        }
    }
    let text = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize") + "\n";
    match &common.output {
        Some(p) => write_file(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(p: &Path, text: &str) -> Outcome<()> {
    fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))
}

fn draw(common: &Common, fan: &Fan) -> Outcome<()> {
    if let Some(p) = &common.svg {
        if fan.ambient_dim() != 2 {
            return Err(Failure::Domain(nash_toric::Error::FanEnumerationUnsupported(fan.ambient_dim())));
        }
        write_file(p, &svg::render_fan(fan))?;
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn run(command: Command) -> Outcome<()> {
    log::info!("running {command:?}");
    match command {
        Command::Dual(a) => {
            let c = load_cone(&a)?;
            let d = c.dual();
            draw(&a.common, &Fan::face_fan(&c))?;
            emit(&a.common, json!({"cone": to_value(&c), "dual": {"lineality": to_value(&d.lineality), "rays": to_value(&d.rays)}}))
        }
        Command::Hilbert(a) => {
            let c = load_cone(&a)?;
            let s = AffineSemigroup::of_cone(&c)?;
            emit(&a.common, json!({"cone": to_value(&c), "hilbert_basis": to_value(&s.hilbert_basis())}))
        }
        Command::SmoothCheck(a) => {
            let c = load_cone(&a)?;
            let cs = to_value(&ConeSmoothness::of(&c));
            emit(&a.common, json!({"smooth": cs["smooth"], "index": cs["index"]}))
        }
        Command::Groebner(a) => match a.common.field {
            CoefficientField::Rational => groebner_cmd(&a, Rationals),
            CoefficientField::Prime(p) => groebner_cmd(&a, PrimeField::new(p)?),
        },
        Command::Gfan(a) => match a.common.field {
            CoefficientField::Rational => gfan_cmd(&a, Rationals),
            CoefficientField::Prime(p) => gfan_cmd(&a, PrimeField::new(p)?),
        },
        Command::Nash(a) => {
            let c = load_cone(&a.cone)?;
            let report = nash_fan(&c, a.n, a.cone.common.field, a.power_rule)?;
            draw(&a.cone.common, &report.fan)?;
            emit(&a.cone.common, to_value(&report))
        }
        Command::Iterate(a) => {
            let c = load_cone(&a.cone)?;
            let trace = iterate_normalized_nash_with(&c, a.cone.common.field, a.power_rule, a.cap)?;
            draw(&a.cone.common, trace.final_fan())?;
            emit(&a.cone.common, to_value(&trace))
        }
        Command::TohYama(a) => {
            if a.n == 0 {
                return Err(Failure::Domain(nash_toric::Error::InvalidNashOrder));
            }
            let (r1, r2) = toh_yama_rays(a.n);
            let cone = toh_yama_cone(a.n);
            let report = nash_fan(&a_cone(3), a.n as usize, a.common.field, a.power_rule)?;
            draw(&a.common, &report.fan)?;
            emit(
                &a.common,
                json!({
                    "rays": [to_value(&r1), to_value(&r2)],
                    "index": to_value(&ConeSmoothness::of(&cone))["index"],
                    "matches_computed": report.fan.maximal_cones().contains(&cone),
                }),
            )
        }
        Command::Curve(a) => {
            check_characteristic(a.common.field)?;
            let s = semigroup_from_generators(&a.generators)?;
            emit(&a.common, to_value(&curve_report(&s, a.up_to)))
        }
        Command::Calibrate(a) => {
            let cal = calibrate_power_rule_on(&a.orders, a.common.field)?;
            emit(&a.common, to_value(&cal))
        }
    }
}

fn load_ideal<F: Field>(a: &IdealArgs, field: F) -> Outcome<Ideal<F>> {
    let text = read_source(&a.ideal, &a.input)?;
    let raw: RawIdeal = parse_json(&text, "ideal")?;
    let cone = raw.cone.build()?;
    let ring = SemigroupRing::new(AffineSemigroup::of_cone(&cone)?, field.clone())?;
    let gens = raw.generators.iter().map(|g| Polynomial::from_json(field.clone(), g)).collect::<Result<Vec<_>, _>>()?;
    Ok(Ideal::new(ring, gens)?)
}

fn parse_order(text: &str, semigroup: &AffineSemigroup) -> Outcome<MonomialOrder> {
    match text {
        "default" => Ok(MonomialOrder::default_tiebreak(semigroup)),
        "lex" => Ok(MonomialOrder::lex(semigroup.ambient_dim())),
        "toh-yama" => Ok(MonomialOrder::toh_yama()),
        json => parse_json(json, "order"),
    }
}

fn groebner_cmd<F: Field>(a: &IdealArgs, field: F) -> Outcome<()> {
    let ideal = load_ideal(a, field)?;
    let order = parse_order(&a.order, ideal.ring().semigroup())?;
    let gb = buchberger(&ideal, &order)?;
    let basis: Vec<Value> = gb
        .pairs()
        .iter()
        .map(|(g, lead)| json!({"polynomial": to_value(&g.to_json()), "leading": to_value(&LatticeVector::from_i64(lead))}))
        .collect();
    emit(&a.common, json!({"order": to_value(&order), "basis": basis}))
}

fn gfan_cmd<F: Field>(a: &IdealArgs, field: F) -> Outcome<()> {
    let ideal = load_ideal(a, field)?;
    let tiebreak = parse_order(&a.order, ideal.ring().semigroup())?;
    let gf = groebner_fan_2d(&ideal, &tiebreak)?;
    draw(&a.common, &gf.fan)?;
    let cones: Vec<GroebnerConeSummary> = gf.cones.iter().map(GroebnerConeSummary::from).collect();
    emit(
        &a.common,
        json!({"fan": to_value(&gf.fan), "cones": to_value(&cones), "trivial": gf.is_trivial(ideal.ring().semigroup().sigma())}),
    )
}
