//! Subcommand dispatch: flag parsing, input loading, and artifact writing.
//!
//! All configuration arrives through flags and a single JSON input document;
//! there are no environment variables. Outputs are written atomically.
//! Exit codes: 0 success, 1 domain error, 2 I/O or schema error; failures
//! print a JSON envelope `{"error":{"code","message"}}` to stderr.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use qflow_core::forms::{InhomogeneousForm, LinearForm, QuadraticForm};
use qflow_core::linalg::Vector;
use qflow_core::normalize::{certificate_is_valid, normalize_pair};
use qflow_core::rationality::check_hypotheses;
use qflow_core::scalar::Scalar;
use qflow_core::stabilizer::{conjugated_flow, preserves_pair};
use qflow_core::verify;
use serde::Serialize;

use crate::explorer::{
    default_t_grid, density_table, orbit_round, reduce_dimension, SearchTask, TableRow,
};
use crate::formats::{
    matrix_text, table_csv, table_json, vector_text, write_output, CertificateDoc, CliError,
    PairSpec, ScalarText,
};

#[derive(Parser)]
#[command(
    name = "qflow",
    version,
    about = "Exact toolkit for inhomogeneous quadratic forms: normalization, \
             stabilizer flows, hypothesis checks, and lattice value search"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON input document (see README for the schema)
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,

    /// Output file; stdout when omitted. Written atomically.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Search radius or comma-separated list of radii, e.g. "50,100,200"
    #[arg(long, global = true, value_name = "LIST")]
    pub radius: Option<String>,

    /// Slab half-width for the linear constraint (default 0.5)
    #[arg(long, global = true, value_name = "REAL")]
    pub epsilon: Option<f64>,

    /// Target grid "amin:amax:astep" or "amin:amax:astep,bmin:bmax:bstep"
    #[arg(long, global = true, value_name = "SPEC", allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Exact flow parameter grid "min:max:step" (scalars, e.g. "-10:10:1/4")
    #[arg(long = "t-grid", global = true, value_name = "SPEC", allow_hyphen_values = true)]
    pub t_grid: Option<String>,

    /// Height bound for the hyperplane search in `reduce` (default 2)
    #[arg(long = "height-bound", global = true, value_name = "N")]
    pub height_bound: Option<i64>,

    /// Worker threads for search (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// Integer seed point "x,y,z" enabling orbit-rounding rows in `explore`
    #[arg(long, global = true, value_name = "X,Y,Z", allow_hyphen_values = true)]
    pub seed: Option<String>,
}

#[derive(Subcommand, Clone, Copy)]
pub enum Command {
    /// Reduce a tangent pair (Q_xi, L) to the normal form, emitting the
    /// exact certificate
    Normalize,
    /// Report tangency and the irrationality conditions for a pair
    CheckHypotheses,
    /// Emit the conjugated stabilizer flow of a pair on a parameter grid
    Stabilizer,
    /// Run the built-in exact verification suite
    VerifyLemmas,
    /// Search the integer lattice for near-solutions over a target grid
    Explore,
    /// Restrict a higher-dimensional form to dimension 3
    Reduce,
}

/// Run a parsed invocation, returning the process exit code.
pub fn run(cli: &Cli) -> i32 {
    if let Some(n) = cli.threads {
        // Ignore the error: the global pool can only be set once (tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.envelope());
            e.exit
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Normalize => cmd_normalize(cli),
        Command::CheckHypotheses => cmd_check_hypotheses(cli),
        Command::Stabilizer => cmd_stabilizer(cli),
        Command::VerifyLemmas => cmd_verify_lemmas(cli),
        Command::Explore => cmd_explore(cli),
        Command::Reduce => cmd_reduce(cli),
    }
}

struct Loaded {
    d: u64,
    q: QuadraticForm,
    xi: Vector,
    linear: Option<LinearForm>,
}

fn load_input(cli: &Cli) -> Result<Loaded, CliError> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| CliError::schema("--input is required for this command"))?;
    let text = std::fs::read_to_string(path)?;
    let spec: PairSpec = serde_json::from_str(&text)?;
    let (q, xi, linear) = spec.to_parts()?;
    Ok(Loaded {
        d: spec.d,
        q,
        xi,
        linear,
    })
}

fn require_linear(loaded: &Loaded) -> Result<&LinearForm, CliError> {
    loaded
        .linear
        .as_ref()
        .ok_or_else(|| CliError::schema("this command requires the L field in the input"))
}

fn emit_json<T: Serialize>(cli: &Cli, doc: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    write_output(cli.output.as_deref(), &text)
}

fn cmd_normalize(cli: &Cli) -> Result<(), CliError> {
    let loaded = load_input(cli)?;
    let l = require_linear(&loaded)?;
    let cert = normalize_pair(&loaded.q, &loaded.xi, l)?;
    let residuals_zero = certificate_is_valid(&loaded.q, &loaded.xi, l, &cert);
    emit_json(cli, &CertificateDoc::of(&cert, residuals_zero))
}

#[derive(Serialize)]
struct HypothesesDoc {
    tangent: bool,
    q_irrational: bool,
    xi_irrational: bool,
    combo_condition: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<[ScalarText; 2]>,
    all_pass: bool,
}

fn cmd_check_hypotheses(cli: &Cli) -> Result<(), CliError> {
    let loaded = load_input(cli)?;
    let l = require_linear(&loaded)?;
    let report = check_hypotheses(&loaded.q, &loaded.xi, l);
    emit_json(
        cli,
        &HypothesesDoc {
            tangent: report.tangent,
            q_irrational: report.q_irrational,
            xi_irrational: report.xi_irrational,
            combo_condition: report.combo_condition,
            witnesses: report
                .witnesses
                .as_ref()
                .map(|(a, b)| [ScalarText::of(a), ScalarText::of(b)]),
            all_pass: report.all_pass(),
        },
    )
}

#[derive(Serialize)]
struct FlowElementDoc {
    t: ScalarText,
    g: Vec<Vec<ScalarText>>,
    v: Vec<ScalarText>,
}

#[derive(Serialize)]
struct StabilizerDoc {
    certificate: CertificateDoc,
    flows: Vec<FlowElementDoc>,
}

fn cmd_stabilizer(cli: &Cli) -> Result<(), CliError> {
    let loaded = load_input(cli)?;
    let l = require_linear(&loaded)?;
    let cert = normalize_pair(&loaded.q, &loaded.xi, l)?;
    let residuals_zero = certificate_is_valid(&loaded.q, &loaded.xi, l, &cert);
    let grid = match &cli.t_grid {
        Some(spec) => parse_t_grid(spec)?,
        None => default_t_grid(),
    };
    let pair = InhomogeneousForm::from_form(&loaded.q, loaded.xi.clone());
    let flows = grid
        .iter()
        .map(|t| {
            let m = conjugated_flow(&cert, t);
            assert!(
                preserves_pair(&m, &pair, Some(l)),
                "conjugated flow must preserve the input pair exactly"
            );
            FlowElementDoc {
                t: ScalarText::of(t),
                g: matrix_text(m.linear_part()),
                v: vector_text(m.translation_part()),
            }
        })
        .collect();
    emit_json(
        cli,
        &StabilizerDoc {
            certificate: CertificateDoc::of(&cert, residuals_zero),
            flows,
        },
    )
}

#[derive(Serialize)]
struct LemmaDoc {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn cmd_verify_lemmas(cli: &Cli) -> Result<(), CliError> {
    let checks = verify::run_all();
    let docs: Vec<LemmaDoc> = checks
        .iter()
        .map(|c| LemmaDoc {
            id: c.id,
            pass: c.pass,
            detail: c.detail.clone(),
        })
        .collect();
    emit_json(cli, &docs)?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(CliError::domain(
            "verification_failed",
            format!("{failed} of {} checks failed", checks.len()),
        ));
    }
    Ok(())
}

fn cmd_explore(cli: &Cli) -> Result<(), CliError> {
    let loaded = load_input(cli)?;
    let f = InhomogeneousForm::from_form(&loaded.q, loaded.xi.clone());
    if f.dim() != 3 {
        return Err(CliError::domain(
            "dimension_mismatch",
            "explore needs a 3-dimensional form; run `reduce` first",
        ));
    }
    let epsilon = cli.epsilon.unwrap_or(0.5);
    let radii = parse_radii(cli.radius.as_deref().unwrap_or("50"))?;
    let targets = parse_grid(cli.grid.as_deref(), loaded.linear.is_some())?;
    let mut rows = density_table(&f, loaded.linear.as_ref(), &targets, epsilon, &radii)?;

    if let Some(seed_spec) = &cli.seed {
        let l = loaded.linear.as_ref().ok_or_else(|| {
            CliError::schema("orbit rounding (--seed) requires the L field in the input")
        })?;
        let seed = parse_seed(seed_spec)?;
        let cert = normalize_pair(&loaded.q, &loaded.xi, l)?;
        let t_grid = match &cli.t_grid {
            Some(spec) => parse_t_grid(spec)?,
            None => default_t_grid(),
        };
        let radius = *radii.iter().max().expect("radii nonempty");
        for &(a, b) in &targets {
            let task = SearchTask::new(f.clone(), Some(l.clone()), a, b, epsilon, radius)?;
            let result = orbit_round(&task, &seed, &cert, &t_grid);
            rows.push(TableRow {
                target_a: a,
                target_b: b,
                radius,
                result,
            });
        }
    }

    let as_json = cli
        .output
        .as_deref()
        .and_then(|p| p.extension())
        .map_or(false, |ext| ext == "json");
    let text = if as_json { table_json(&rows) } else { table_csv(&rows) };
    write_output(cli.output.as_deref(), &text)
}

#[derive(Serialize)]
struct ReduceDoc {
    form: PairSpec,
    steps: Vec<Vec<Vec<ScalarText>>>,
}

fn cmd_reduce(cli: &Cli) -> Result<(), CliError> {
    let loaded = load_input(cli)?;
    if loaded.linear.is_some() {
        return Err(CliError::schema(
            "reduce takes a single form; remove the L field",
        ));
    }
    let f = InhomogeneousForm::from_form(&loaded.q, loaded.xi.clone());
    let red = reduce_dimension(&f, cli.height_bound.unwrap_or(2))?;
    emit_json(
        cli,
        &ReduceDoc {
            form: PairSpec::from_parts(loaded.d, &red.form, None),
            steps: red.bases.iter().map(matrix_text).collect(),
        },
    )
}

fn parse_radii(spec: &str) -> Result<Vec<i64>, CliError> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let r: i64 = part
            .trim()
            .parse()
            .map_err(|_| CliError::schema(format!("bad radius {part:?}")))?;
        if r < 1 {
            return Err(CliError::schema("radii must be at least 1"));
        }
        out.push(r);
    }
    Ok(out)
}

/// "min:max:step" with exact scalar entries and step > 0.
fn parse_range(spec: &str) -> Result<(Scalar, Scalar, Scalar), CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::schema(format!(
            "range {spec:?} must look like min:max:step"
        )));
    }
    let min: Scalar = parts[0].trim().parse()?;
    let max: Scalar = parts[1].trim().parse()?;
    let step: Scalar = parts[2].trim().parse()?;
    if !step.is_positive() {
        return Err(CliError::schema("range step must be positive"));
    }
    if max.cmp_real(&min) == std::cmp::Ordering::Less {
        return Err(CliError::schema("range max must be at least min"));
    }
    Ok((min, max, step))
}

fn scalar_range(spec: &str) -> Result<Vec<Scalar>, CliError> {
    let (min, max, step) = parse_range(spec)?;
    let mut out = Vec::new();
    let mut t = min;
    while t.cmp_real(&max) != std::cmp::Ordering::Greater {
        out.push(t.clone());
        t = t.add(&step);
    }
    Ok(out)
}

fn parse_t_grid(spec: &str) -> Result<Vec<Scalar>, CliError> {
    scalar_range(spec)
}

/// Target grid "amin:amax:astep[,bmin:bmax:bstep]"; the b part is required
/// exactly when the input carries a linear form.
fn parse_grid(spec: Option<&str>, has_linear: bool) -> Result<Vec<(f64, Option<f64>)>, CliError> {
    let spec = spec.unwrap_or(if has_linear { "-3:3:1,-3:3:1" } else { "-3:3:1" });
    let parts: Vec<&str> = spec.split(',').collect();
    match (parts.as_slice(), has_linear) {
        ([a], false) => Ok(scalar_range(a)?
            .iter()
            .map(|s| (s.to_f64(), None))
            .collect()),
        ([a, b], true) => {
            let avals = scalar_range(a)?;
            let bvals = scalar_range(b)?;
            let mut out = Vec::with_capacity(avals.len() * bvals.len());
            for av in &avals {
                for bv in &bvals {
                    out.push((av.to_f64(), Some(bv.to_f64())));
                }
            }
            Ok(out)
        }
        ([_], true) => Err(CliError::schema(
            "the input has an L field, so the grid needs a b part: amin:amax:astep,bmin:bmax:bstep",
        )),
        ([_, _], false) => Err(CliError::schema(
            "the input has no L field, so the grid must be one-dimensional: amin:amax:astep",
        )),
        _ => Err(CliError::schema("grid must have one or two ranges")),
    }
}

fn parse_seed(spec: &str) -> Result<Vector, CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::schema("seed must be three integers x,y,z"));
    }
    let mut vals = [0i64; 3];
    for (i, p) in parts.iter().enumerate() {
        vals[i] = p
            .trim()
            .parse()
            .map_err(|_| CliError::schema(format!("bad seed entry {p:?}")))?;
    }
    Ok(Vector::from_ints(&vals))
}
