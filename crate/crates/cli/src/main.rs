use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use omn_core::algebra::{Algebra, Element, Monomial};
use omn_core::entropy;
use omn_core::group_actions::{self, subalgebra_witness_power, subalgebra_witness_zk};
use omn_core::ktheory::{self, Parity};
use omn_core::numbers::{format_coeff, format_rational, parse_rational};
use omn_core::random::DEFAULT_SEED;
use omn_core::representations::{self, LaurentMonomial, SolenoidPeriodicPoint, Variant, ZPhase};
use omn_core::reproduce;
use omn_core::rieffel::{self, ProjectionData};
use omn_core::Error;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "omn", version, about = "Exact computations in the algebras O_(m,n)(T)")]
struct Cli {
    #[arg(long, global = true, default_value_t = 1)]
    m: u32,
    #[arg(long, global = true, default_value_t = 2)]
    n: u32,
    /// Print the full machine-readable run report.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Cap on enumerated terms, generators or exponents.
    #[arg(long, global = true)]
    bound: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of an element, or of a product given as {"factors": [monomials]}.
    Normalize(InputArgs),
    /// Product of the two elements in a JSON array [a, b].
    Mul(InputArgs),
    /// Exact zero test.
    Iszero(InputArgs),
    /// Value of the KMS state.
    Kms(InputArgs),
    /// K_0 and K_1.
    Kgroups {
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// K-groups of the crossed product by the symmetry z -> z^{-1}.
    KgroupsFixed {
        #[arg(long = "m-parity")]
        parity: Parity,
    },
    /// Fixed points of the cyclic action on monomials.
    FixedPoint {
        #[arg(value_enum)]
        action: FixedPointAction,
        /// Monomial as {"mu": [...], "k": K, "nu": [...]}; read from stdin if absent.
        #[arg(long)]
        monomial: Option<String>,
    },
    /// Generators of O_(m^k, n^k)(T) or O_(m,n)(T) inside subalgebras.
    Subalgebra {
        #[arg(value_enum)]
        kind: SubalgebraKind,
        #[arg(long)]
        k: u32,
    },
    /// The projection built from piecewise-linear functions on the circle, at (1,2).
    Rieffel {
        #[arg(value_enum, default_value_t = RieffelAction::Verify)]
        action: RieffelAction,
        #[arg(long, default_value_t = reproduce::SQUARE_GRID)]
        grid: usize,
    },
    /// Relations in the shift representation on l^2(Z[1/m]).
    Rep {
        #[arg(value_enum, default_value_t = RepAction::Check)]
        action: RepAction,
        #[arg(long, value_enum, default_value_t = VariantArg::A)]
        variant: VariantArg,
        /// Index window P,Q: numerators |p| <= P, denominators m^e with e <= Q.
        #[arg(long, default_value = "256,4")]
        window: String,
    },
    /// Periodic points of the solenoid shift and their representations.
    Solenoid {
        #[arg(value_enum)]
        action: SolenoidAction,
        #[arg(long)]
        period: u32,
        /// Phase of z as p/q (exact) or a decimal (floating point).
        #[arg(long, default_value = "1/4")]
        phase: String,
    },
    /// Dimension growth of the canonical endomorphism.
    Entropy {
        #[arg(long, default_value_t = 0)]
        s: u32,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
    /// Run the acceptance criteria.
    Reproduce {
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(clap::Args)]
struct InputArgs {
    /// JSON input; read from stdin if absent.
    #[arg(long)]
    input: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    SixTerm,
    Pv,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixedPointAction {
    Test,
    Rewrite,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubalgebraKind {
    Power,
    Zk,
}

#[derive(Clone, Copy, ValueEnum)]
enum RieffelAction {
    Verify,
    Conditions,
    Trace,
    K0class,
    Square,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepAction {
    Check,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolenoidAction {
    Points,
    Rep,
}

/// What a subcommand produced: the payload for the report, whether every
/// requested check passed, and the plain-text rendering.
struct Outcome {
    results: Value,
    passed: bool,
    text: String,
}

impl Outcome {
    fn new(results: Value, passed: bool, text: impl Into<String>) -> Self {
        Outcome { results, passed, text: text.into() }
    }

    /// Plain output is the compact JSON payload.
    fn json(results: Value, passed: bool) -> Self {
        let text = results.to_string();
        Outcome { results, passed, text }
    }
}

fn read_input(arg: &Option<String>) -> Result<Value, Error> {
    let raw = match arg {
        Some(s) => s.clone(),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
            s
        }
    };
    Ok(serde_json::from_str(&raw)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    // Built on demand: some commands take (m, n) pairs that are not algebra parameters.
    let algebra = || Algebra::new(cli.m, cli.n);
    match &cli.command {
        Command::Normalize(input) => {
            let alg = algebra()?;
            let v = read_input(&input.input)?;
            let x = match v.get("factors") {
                Some(f) => {
                    let factors: Vec<Monomial> = serde_json::from_value(f.clone())?;
                    factors.iter().try_for_each(|m| alg.check_monomial(m))?;
                    alg.normalize(&factors).map(Element::from).unwrap_or_default()
                }
                None => Element::from_json(&v)?,
            };
            alg.check_element(&x)?;
            Ok(Outcome::json(x.to_json(), true))
        }
        Command::Mul(input) => {
            let alg = algebra()?;
            let v = read_input(&input.input)?;
            let pair: [Value; 2] = serde_json::from_value(v)?;
            let a = Element::from_json(&pair[0])?;
            let b = Element::from_json(&pair[1])?;
            alg.check_element(&a)?;
            alg.check_element(&b)?;
            Ok(Outcome::json(alg.mul(&a, &b).to_json(), true))
        }
        Command::Iszero(input) => {
            let alg = algebra()?;
            let x = Element::from_json(&read_input(&input.input)?)?;
            alg.check_element(&x)?;
            let zero = alg.is_zero(&x)?;
            Ok(Outcome::json(json!(zero), true))
        }
        Command::Kms(input) => {
            let alg = algebra()?;
            let x = Element::from_json(&read_input(&input.input)?)?;
            alg.check_element(&x)?;
            let value = format_coeff(&alg.kms_state(&x));
            Ok(Outcome::new(json!(value), true, value))
        }
        Command::Kgroups { method } => kgroups(cli, *method),
        Command::KgroupsFixed { parity } => {
            let r = ktheory::crossed_product_kgroups(*parity, cli.n)?;
            let mut text = format!("K_0 = {}\nK_1 = {}", r.k0, r.k1);
            if let Some(flag) = &r.flag {
                text.push_str(&format!("\nflag: {flag}"));
            }
            // A flagged disagreement with the reference groups is reported, not failed.
            Ok(Outcome::new(to_value(&r), true, text))
        }
        Command::FixedPoint { action, monomial } => {
            let alg = algebra()?;
            let v = match monomial {
                Some(s) => serde_json::from_str(s)?,
                None => read_input(&None)?,
            };
            let mon: Monomial = serde_json::from_value(v)?;
            alg.check_monomial(&mon)?;
            match action {
                FixedPointAction::Test => {
                    let weight = group_actions::beta_weight(&alg, &mon)?;
                    let fixed = weight == 0;
                    let results = json!({"fixed": fixed, "weight": weight});
                    Ok(Outcome::new(results, true, fixed.to_string()))
                }
                FixedPointAction::Rewrite => {
                    let word = group_actions::fixed_point_rewrite(&alg, &mon)?;
                    let ok = group_actions::rewrite_round_trip(&alg, &mon)?;
                    let text = word.to_string();
                    Ok(Outcome::new(json!({"word": word, "round_trip": ok}), ok, text))
                }
            }
        }
        Command::Subalgebra { kind, k } => {
            let alg = algebra()?;
            let r = match kind {
                SubalgebraKind::Power => {
                    subalgebra_witness_power(&alg, *k, cli.bound.unwrap_or(reproduce::WITNESS_MAX_GENERATORS))?
                }
                SubalgebraKind::Zk => subalgebra_witness_zk(&alg, *k as u64, cli.bound.unwrap_or(10_000))?,
            };
            let text = r
                .relations
                .iter()
                .map(|s| format!("{:<32} {} / {} failed", s.relation, s.failures, s.instances))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::new(to_value(&r), r.passed(), text))
        }
        Command::Rieffel { action, grid } => rieffel_cmd(*action, *grid),
        Command::Rep { action: RepAction::Check, variant, window } => {
            let params = algebra()?.params;
            let (bound, depth) = window
                .split_once(',')
                .and_then(|(p, q)| Some((p.trim().parse::<i64>().ok()?, q.trim().parse::<u32>().ok()?)))
                .ok_or_else(|| Error::Parse(format!("window must be P,Q, got {window}")))?;
            let variant = match variant {
                VariantArg::A => Variant::A,
                VariantArg::B => Variant::B,
            };
            let r = representations::relation_residuals(variant, params, bound, depth);
            let passed = r.passed(reproduce::MIN_COVERAGE);
            let text = format!("{} violations, coverage {:.4}", r.violations, r.coverage);
            Ok(Outcome::new(to_value(&r), passed, text))
        }
        Command::Solenoid { action, period, phase } => solenoid_cmd(cli.m as u64, *action, *period, phase),
        Command::Entropy { s, nmax } => {
            let alg = algebra()?;
            let t = entropy::entropy_estimate(&alg, *s, *nmax, cli.bound.unwrap_or(200_000) as usize)?;
            let mut text = String::from("N  D_N  log(D_N)/N  slope");
            for r in &t.rows {
                let slope = r.slope.map_or("-".to_string(), |x| format!("{x:.4}"));
                text.push_str(&format!("\n{}  {}  {:.4}  {slope}", r.n_iter, r.dimension, r.log_dim_over_n));
            }
            text.push_str(&format!("\nlog n = {:.4}", t.target));
            if let Some(w) = &t.warning {
                text.push_str(&format!("\nwarning: {w}"));
            }
            let passed = t.counting_bound_holds() && t.monotone();
            Ok(Outcome::new(to_value(&t), passed, text))
        }
        Command::Reproduce { criterion } => {
            let report = match criterion {
                Some(id) => reproduce::ReproduceReport {
                    seed: cli.seed,
                    criteria: vec![reproduce::run_criterion(*id, cli.seed)?],
                },
                None => reproduce::reproduce(cli.seed)?,
            };
            let mut text = String::from("criterion  result  time_ms  title");
            for c in &report.criteria {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                text.push_str(&format!("\n{:>9}  {verdict:<6}  {:>7}  {}", c.id, c.elapsed_ms, c.title));
            }
            Ok(Outcome::new(to_value(&report), report.all_passed(), text))
        }
    }
}

fn kgroups(cli: &Cli, method: Method) -> Result<Outcome, Error> {
    let six = || ktheory::six_term_kgroups(cli.m, cli.n);
    let pv = || ktheory::pv_dual_action_kgroups(cli.m, cli.n);
    Ok(match method {
        Method::SixTerm => Outcome::json(to_value(&six()?), true),
        Method::Pv => Outcome::json(to_value(&pv()?), true),
        Method::Both => {
            let (a, b) = (six()?, pv()?);
            if a == b {
                Outcome::json(to_value(&a), true)
            } else {
                let results = json!({"six_term": a, "pv": b});
                Outcome::json(results, false)
            }
        }
    })
}

fn rieffel_cmd(action: RieffelAction, grid: usize) -> Result<Outcome, Error> {
    let d = ProjectionData::canonical();
    let trace = || rieffel::kms_trace(&d).map(|t| format_rational(&t));
    Ok(match action {
        RieffelAction::Trace => {
            let t = trace()?;
            Outcome::new(json!(t), true, t)
        }
        RieffelAction::K0class => {
            let c = rieffel::k0_class(&d)?.to_string();
            Outcome::new(json!(c), true, c)
        }
        RieffelAction::Conditions => {
            let r = rieffel::check_conditions(&d)?;
            let text = conditions_text(&r);
            Outcome::new(to_value(&r), r.all_passed(), text)
        }
        RieffelAction::Square => {
            let r = rieffel::assemble_and_square(&d, grid)?;
            let text = format!("max |P^2 - P| = {:.3e} (grid {grid}), {:.3e} (grid {})", r.residual, r.residual_fine, 2 * grid);
            Outcome::new(to_value(&r), r.passed(), text)
        }
        RieffelAction::Verify => {
            let conditions = rieffel::check_conditions(&d)?;
            let square = rieffel::assemble_and_square(&d, grid)?;
            let (t, class) = (trace()?, rieffel::k0_class(&d)?.to_string());
            let passed = conditions.all_passed() && square.passed();
            let text = format!(
                "{}\ntrace = {t}\nK_0 class = {class}\nmax |P^2 - P| = {:.3e}",
                conditions_text(&conditions),
                square.residual
            );
            let results = json!({"conditions": conditions, "trace": t, "k0_class": class, "square": square});
            Outcome::new(results, passed, text)
        }
    })
}

fn conditions_text(r: &rieffel::ConditionReport) -> String {
    r.conditions
        .iter()
        .map(|c| {
            let tail = c.first_failure.as_ref().map_or(String::new(), |t| format!(" (fails at t = {t})"));
            format!("[{}] {}{tail}", if c.passed { "ok" } else { "FAIL" }, c.name)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn solenoid_cmd(m: u64, action: SolenoidAction, period: u32, phase: &str) -> Result<Outcome, Error> {
    let points = representations::solenoid_periodic_points(m, period)?;
    match action {
        SolenoidAction::Points => {
            let orbits = representations::solenoid::orbits(&points);
            let text = format!("{} points of exact period {period} in {} orbits", points.len(), orbits.len());
            let results = json!({"count": points.len(), "orbits": orbits.len(), "points": points});
            Ok(Outcome::new(results, true, text))
        }
        SolenoidAction::Rep => {
            let z = if phase.contains('.') {
                ZPhase::Float(phase.parse().map_err(|_| Error::Parse(format!("bad phase {phase}")))?)
            } else {
                ZPhase::Rational(parse_rational(phase)?)
            };
            let f = LaurentMonomial::coordinate(0, 1);
            let reports: Vec<_> =
                points.iter().map(|p: &SolenoidPeriodicPoint| representations::solenoid_rep_check(p, &z, &f)).collect();
            let passed = reports.iter().all(|r| r.passed());
            let worst = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
            let text = format!("{} points, max covariance residual {worst:e}", reports.len());
            Ok(Outcome::new(to_value(&reports), passed, text))
        }
    }
}

fn command_echo() -> Vec<String> {
    std::env::args().skip(1).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli);
    let elapsed_ms = start.elapsed().as_millis();
    match outcome {
        Ok(out) => {
            if cli.json {
                let report = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": command_echo(),
                    "params": {"m": cli.m, "n": cli.n, "seed": cli.seed, "bound": cli.bound},
                    "results": out.results,
                    "passed": out.passed,
                    "elapsed_ms": elapsed_ms,
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            } else {
                println!("{}", out.text);
            }
            if out.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let usage = matches!(e, Error::Parse(_) | Error::Json(_) | Error::InvalidInput(_));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
