//! Command-line front end: validate arrays, run verification suites, emit
//! generated instances and dihedral relatives as JSON.
//!
//! Exit codes are a stable contract: 0 ok, 1 check failed, 2 parse error,
//! 3 missing context, 4 generation exhausted. Reports go to stdout as JSON;
//! a human summary goes to stderr. Every report embeds its run manifest so
//! results are reproducible from the report alone.

use clap::{Args, Parser, Subcommand};
use lpkit::field::{parse_element, FieldDescriptor, FieldElement};
use lpkit::generate::{generate_valid_array, GenError, DEFAULT_MAX_RETRIES};
use lpkit::json::{
    ArrayJson, ContextJson, GeneratorSpecJson, PropTraceJson, RecoveryJson, ValidationReportJson,
};
use lpkit::params::{relatives, validate, ParameterArray};
use lpkit::qkit::{fit_eigenvalue_form, verify_split_relations, verify_transition, QContext};
use lpkit::realize::{build_split_realization, verify_leonard_axioms, verify_split_action};
use lpkit::traces::{recover_split_sequences, verify_trace_prop};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_MISSING_CONTEXT: u8 = 3;
const EXIT_EXHAUSTED: u8 = 4;

#[derive(Parser)]
#[command(name = "lpkit", version, about = "Exact tools for Leonard system parameter arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an array file against the five classification conditions.
    Validate {
        input: PathBuf,
    },
    /// Run verification suites against an array file.
    Verify {
        input: PathBuf,
        /// axioms | traces | recovery | transition | relations | all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Scalar s with q = s^2, needed by the transition/relations suites.
        #[arg(long)]
        s: Option<String>,
        /// Context file ({"s":"...","d":N}) as an alternative to --s.
        #[arg(long)]
        context: Option<PathBuf>,
    },
    /// Emit a valid parameter array.
    Generate(GenerateArgs),
    /// Emit the eight relatives of an array in table order.
    Relatives {
        input: PathBuf,
    },
}

#[derive(Args)]
struct GenerateArgs {
    /// random-rational | q-form
    #[arg(long, default_value = "random-rational")]
    kind: String,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    d: u64,
    /// RNG seed for randomized generation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Work over the prime field F_p instead of the rationals.
    #[arg(long)]
    prime: Option<u64>,
    /// Scalar s (q = s^2) for q-form generation.
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long = "alpha-star")]
    alpha_star: Option<String>,
    #[arg(long = "mu-star")]
    mu_star: Option<String>,
    #[arg(long = "nu-star")]
    nu_star: Option<String>,
    /// Seed value phi_1 for completion.
    #[arg(long)]
    phi1: Option<String>,
    /// Generator spec file as an alternative to the individual flags.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Serialize)]
struct Manifest {
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<FieldDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    suite: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<String>,
}

impl Manifest {
    fn new(command: &str) -> Manifest {
        Manifest {
            command: command.to_string(),
            input: None,
            field: None,
            seed: None,
            suite: None,
            s: None,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn emit<T: Serialize>(report: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(report).expect("report serializes")
    );
}

fn read_array(path: &PathBuf) -> Result<ParameterArray, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let json: ArrayJson = serde_json::from_str(&text)
        .map_err(|e| fail(EXIT_PARSE, format!("malformed array JSON: {e}")))?;
    json.to_array()
        .map_err(|e| fail(EXIT_PARSE, format!("bad array data: {e}")))
}

fn max_retries() -> usize {
    std::env::var("LPKIT_MAX_RETRIES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_RETRIES)
}

#[derive(Serialize)]
struct ValidateReport {
    manifest: Manifest,
    report: ValidationReportJson,
}

fn cmd_validate(input: PathBuf) -> Result<u8, Failure> {
    let p = read_array(&input)?;
    let report = ValidationReportJson::from_report(&validate(&p));
    let valid = report.valid;
    let mut manifest = Manifest::new("validate");
    manifest.input = Some(input.display().to_string());
    manifest.field = Some(p.descriptor());
    emit(&ValidateReport { manifest, report });
    eprintln!(
        "validate: d={} over {:?}: {}",
        p.d,
        p.descriptor(),
        if valid { "valid" } else { "INVALID" }
    );
    Ok(if valid { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Serialize)]
struct AxiomsJson {
    a_multiplicity_free: bool,
    a_star_multiplicity_free: bool,
    dual_sandwich_failures: Vec<(usize, usize)>,
    primal_sandwich_failures: Vec<(usize, usize)>,
    split_action: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    manifest: Manifest,
    #[serde(skip_serializing_if = "Option::is_none")]
    axioms: Option<AxiomsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prop_trace: Option<PropTraceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    recovery: Option<RecoveryJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transition: Option<TransitionJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relations: Option<RelationsJson>,
    pass: bool,
}

#[derive(Serialize)]
struct TransitionJson {
    coefficientwise: Vec<bool>,
    pointwise: Vec<bool>,
    q_inverted: bool,
}

#[derive(Serialize)]
struct RelationsJson {
    /// One entry per formula, indexed 1..=8, each with per-i booleans.
    per_formula: Vec<Vec<bool>>,
}

fn resolve_scalar(
    s: &Option<String>,
    context: &Option<PathBuf>,
    desc: &FieldDescriptor,
    d: usize,
) -> Result<Option<(QContext, String)>, Failure> {
    let text = match (s, context) {
        (Some(s), _) => Some(s.clone()),
        (None, Some(path)) => {
            let raw = std::fs::read_to_string(path)
                .map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
            let ctx: ContextJson = serde_json::from_str(&raw)
                .map_err(|e| fail(EXIT_PARSE, format!("malformed context JSON: {e}")))?;
            if ctx.d != d {
                return Err(fail(EXIT_PARSE, "context diameter disagrees with array"));
            }
            Some(ctx.s)
        }
        (None, None) => None,
    };
    match text {
        None => Ok(None),
        Some(text) => {
            let s = parse_element(&text, desc)
                .map_err(|e| fail(EXIT_PARSE, format!("bad scalar s: {e}")))?;
            let ctx = QContext::new(s, d)
                .map_err(|e| fail(EXIT_PARSE, format!("unusable scalar s: {e}")))?;
            Ok(Some((ctx, text)))
        }
    }
}

fn cmd_verify(
    input: PathBuf,
    suite: String,
    s: Option<String>,
    context: Option<PathBuf>,
) -> Result<u8, Failure> {
    let known = ["axioms", "traces", "recovery", "transition", "relations", "all"];
    if !known.contains(&suite.as_str()) {
        return Err(fail(EXIT_PARSE, format!("unknown suite `{suite}`")));
    }
    let p = read_array(&input)?;
    if !validate(&p).valid() {
        return Err(fail(EXIT_CHECK_FAILED, "input array fails validation"));
    }
    let wants = |name: &str| suite == name || suite == "all";
    let ctx = resolve_scalar(&s, &context, &p.descriptor(), p.d)?;
    if (wants("transition") || wants("relations")) && ctx.is_none() {
        return Err(fail(
            EXIT_MISSING_CONTEXT,
            "the transition/relations suites need --s or --context",
        ));
    }

    let realization = build_split_realization(&p)
        .map_err(|e| fail(EXIT_CHECK_FAILED, format!("realization failed: {e}")))?;
    let mut pass = true;
    let mut report = VerifyReport {
        manifest: Manifest::new("verify"),
        axioms: None,
        prop_trace: None,
        recovery: None,
        transition: None,
        relations: None,
        pass: true,
    };
    report.manifest.input = Some(input.display().to_string());
    report.manifest.field = Some(p.descriptor());
    report.manifest.suite = Some(suite.clone());

    if wants("axioms") {
        let ax = verify_leonard_axioms(&realization);
        let split_action = verify_split_action(&realization);
        pass &= ax.all_pass() && split_action;
        report.axioms = Some(AxiomsJson {
            a_multiplicity_free: ax.a_multiplicity_free,
            a_star_multiplicity_free: ax.a_star_multiplicity_free,
            dual_sandwich_failures: ax.dual_sandwich_failures,
            primal_sandwich_failures: ax.primal_sandwich_failures,
            split_action,
        });
    }
    if wants("traces") {
        let tr = verify_trace_prop(&realization)
            .map_err(|e| fail(EXIT_CHECK_FAILED, format!("trace suite failed: {e}")))?;
        pass &= tr.all_pass();
        report.prop_trace = Some(PropTraceJson::from_per_kind(&tr.per_kind));
    }
    if wants("recovery") {
        let rec = recover_split_sequences(&realization)
            .map_err(|e| fail(EXIT_CHECK_FAILED, format!("recovery suite failed: {e}")))?;
        let varphi_ok = rec.varphi_routes_agree(&p);
        let phi_ok = rec.phi_routes_agree(&p);
        pass &= varphi_ok && phi_ok;
        report.recovery = Some(RecoveryJson {
            varphi_routes_agree: varphi_ok,
            phi_routes_agree: phi_ok,
        });
    }
    if wants("transition") {
        let (ctx, text) = ctx.as_ref().expect("checked above");
        report.manifest.s = Some(text.clone());
        let fit = fit_eigenvalue_form(ctx, &p.theta)
            .map_err(|e| fail(EXIT_CHECK_FAILED, format!("no eigenvalue form fits: {e}")))?;
        let working = if fit.q_inverted { ctx.inverted() } else { ctx.clone() };
        let tr = verify_transition(&working, &fit.form, &p)
            .map_err(|e| fail(EXIT_CHECK_FAILED, format!("transition suite failed: {e}")))?;
        pass &= tr.all_pass();
        report.transition = Some(TransitionJson {
            coefficientwise: tr.coefficientwise,
            pointwise: tr.pointwise,
            q_inverted: fit.q_inverted,
        });
    }
    if wants("relations") {
        let (ctx, text) = ctx.as_ref().expect("checked above");
        report.manifest.s = Some(text.clone());
        let rel = verify_split_relations(ctx, &p)
            .map_err(|e| fail(EXIT_CHECK_FAILED, format!("relations suite failed: {e}")))?;
        pass &= rel.all_pass();
        report.relations = Some(RelationsJson {
            per_formula: rel.per_formula.to_vec(),
        });
    }

    report.pass = pass;
    emit(&report);
    eprintln!(
        "verify --suite {suite}: d={}: {}",
        p.d,
        if pass { "all checks pass" } else { "FAILED" }
    );
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Serialize)]
struct GenerateReport {
    manifest: Manifest,
    array: ArrayJson,
}

fn cmd_generate(args: GenerateArgs) -> Result<u8, Failure> {
    let desc = match args.prime {
        Some(p) => FieldDescriptor::prime(p)
            .map_err(|e| fail(EXIT_PARSE, format!("bad prime modulus: {e}")))?,
        None => FieldDescriptor::Rational,
    };
    let d = args.d as usize;
    let p = match args.kind.as_str() {
        "random-rational" => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            generate_valid_array(&mut rng, &desc, d, max_retries()).map_err(|e| match e {
                GenError::Exhausted { attempts } => fail(
                    EXIT_EXHAUSTED,
                    format!("no valid array after {attempts} attempts"),
                ),
                other => fail(EXIT_PARSE, other.to_string()),
            })?
        }
        "q-form" => generate_q_form(&args, &desc, d)?,
        other => return Err(fail(EXIT_PARSE, format!("unknown kind `{other}`"))),
    };
    debug_assert!(validate(&p).valid());
    let mut manifest = Manifest::new("generate");
    manifest.field = Some(desc);
    manifest.seed = Some(args.seed);
    manifest.s = args.s.clone();
    emit(&GenerateReport {
        manifest,
        array: ArrayJson::from_array(&p),
    });
    eprintln!("generate --kind {}: emitted valid d={} array", args.kind, p.d);
    Ok(EXIT_OK)
}

fn generate_q_form(
    args: &GenerateArgs,
    desc: &FieldDescriptor,
    d: usize,
) -> Result<ParameterArray, Failure> {
    let s_text = args
        .s
        .as_ref()
        .ok_or_else(|| fail(EXIT_MISSING_CONTEXT, "q-form generation needs --s"))?;
    let s = parse_element(s_text, desc).map_err(|e| fail(EXIT_PARSE, format!("bad --s: {e}")))?;
    let ctx = QContext::new(s, d)
        .map_err(|e| fail(EXIT_PARSE, format!("unusable scalar s: {e}")))?;

    let spec = if let Some(path) = &args.spec {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
        let json: GeneratorSpecJson = serde_json::from_str(&raw)
            .map_err(|e| fail(EXIT_PARSE, format!("malformed generator spec: {e}")))?;
        json.to_spec(desc)
            .map_err(|e| fail(EXIT_PARSE, format!("bad generator spec: {e}")))?
    } else {
        let field = |name: &str, value: &Option<String>| -> Result<FieldElement, Failure> {
            let text = value
                .as_ref()
                .ok_or_else(|| fail(EXIT_MISSING_CONTEXT, format!("q-form needs --{name}")))?;
            parse_element(text, desc).map_err(|e| fail(EXIT_PARSE, format!("bad --{name}: {e}")))
        };
        lpkit::qkit::QFormSpec {
            primal: lpkit::qkit::EigenvalueForm {
                alpha: field("alpha", &args.alpha)?,
                mu: field("mu", &args.mu)?,
                nu: field("nu", &args.nu)?,
            },
            dual: lpkit::qkit::EigenvalueForm {
                alpha: field("alpha-star", &args.alpha_star)?,
                mu: field("mu-star", &args.mu_star)?,
                nu: field("nu-star", &args.nu_star)?,
            },
            phi_1: field("phi1", &args.phi1)?,
        }
    };
    lpkit::qkit::generate_q_form_array(&ctx, &spec)
        .map_err(|e| fail(EXIT_CHECK_FAILED, format!("q-form completion failed: {e}")))
}

#[derive(Serialize)]
struct RelativeJson {
    word: String,
    array: ArrayJson,
}

#[derive(Serialize)]
struct RelativesReport {
    manifest: Manifest,
    relatives: Vec<RelativeJson>,
}

fn cmd_relatives(input: PathBuf) -> Result<u8, Failure> {
    let p = read_array(&input)?;
    if !validate(&p).valid() {
        return Err(fail(EXIT_CHECK_FAILED, "input array fails validation"));
    }
    let orbit = relatives(&p);
    for (word, member) in &orbit {
        if !validate(member).valid() {
            return Err(fail(
                EXIT_CHECK_FAILED,
                format!("relative {} fails validation", word.name()),
            ));
        }
    }
    let mut manifest = Manifest::new("relatives");
    manifest.input = Some(input.display().to_string());
    manifest.field = Some(p.descriptor());
    emit(&RelativesReport {
        manifest,
        relatives: orbit
            .iter()
            .map(|(word, member)| RelativeJson {
                word: word.name().to_string(),
                array: ArrayJson::from_array(member),
            })
            .collect(),
    });
    eprintln!("relatives: emitted 8 validated arrays");
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Validate { input } => cmd_validate(input),
        Command::Verify {
            input,
            suite,
            s,
            context,
        } => cmd_verify(input, suite, s, context),
        Command::Generate(args) => cmd_generate(args),
        Command::Relatives { input } => cmd_relatives(input),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
