//! Command-line front end: parse polynomial inputs, bind parameters, run
//! the residue analyses, and emit text or JSON reports.
//!
//! Exit codes: 0 on success, 2 on parse/precondition errors, 3 on numeric
//! non-convergence.

mod report;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use resform::formlang::{parse_constant, parse_poly, ParseError, ParseOptions};
use resform::numeric::{self, elliptic, NumericError, ProbePath, ProbeVerdict};
use resform::quasihomog::{
    classify, decompose_form, primitive, second_residue_chart, spectrum_brieskorn_pham,
    GradingError, WeightComponent, SECOND_RESIDUE_NORMALIZATION,
};
use resform::residue::{chart_residue, ResidueError};
use resform::weights::WeightError;
use resform::{infer_weights, MeroTopForm, WeightSystem};

use report::{Report, WeightsOut};

#[derive(Parser)]
#[command(
    name = "resform",
    version,
    about = "Residues of meromorphic top forms along singular hypersurfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grade ω = (g/s)·dz0∧…∧dzn by weight; report canonical/liftable verdicts
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Residue of ω in one affine chart of the hypersurface
    Residue {
        #[command(flatten)]
        input: InputArgs,
        /// Chart index i (requires ∂s/∂zᵢ ≠ 0)
        #[arg(long)]
        chart: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Explicit primitive η with dη = component, per weight component
    Primitive {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Orders of the weight components of ω
    Order {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Spectrum of z0^b0 + z1^b1 + … from its exponents
    Spectrum {
        /// Exponents b0 b1 …, each at least 2
        #[arg(required = true)]
        exponents: Vec<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Second residue of the weight-0 component, on the quotient curve
    SecondResidue {
        #[command(flatten)]
        input: InputArgs,
        /// Chart index i for the first residue
        #[arg(long)]
        chart: usize,
        /// Slice coordinate j: the quotient chart z_j = 1
        #[arg(long)]
        slice: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Square-integrability probe: shell masses and fitted decay slope
    #[command(name = "l2probe")]
    L2Probe {
        #[command(flatten)]
        input: InputArgs,
        /// Outermost shell radius
        #[arg(long, default_value_t = 0.1)]
        r0: f64,
        /// Number of shells, halving the radius each level
        #[arg(long, default_value_t = 6)]
        levels: usize,
        /// Points per shell (Monte Carlo path only)
        #[arg(long, default_value_t = 2000)]
        count: usize,
        /// Rng seed; fixed default for reproducible runs
        #[arg(long, default_value_t = 1729)]
        seed: u64,
        /// Worker threads (results are identical for any choice)
        #[arg(long)]
        threads: Option<usize>,
        /// Also write the shell data as CSV rows to FILE
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Period of y² = x³ + px + q: quadrature vs the AGM oracle
    Period {
        /// Coefficient p, as an integer, fraction, or decimal
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Coefficient q, as an integer, fraction, or decimal
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Defining polynomial of the hypersurface, e.g. "z0^2 - z1^3"
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    /// Numerator of ω
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    g: String,
    /// Bind a named rational constant, e.g. --bind p=-1 (repeatable)
    #[arg(long = "bind", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    bind: Vec<String>,
    /// Comma-separated positive weights, e.g. 3,2; wins over inference
    #[arg(long, value_name = "A0,A1,…", allow_hyphen_values = true)]
    weights: Option<String>,
    /// Infer weights from the support of s (the default when --weights is absent)
    #[arg(long)]
    infer_weights: bool,
}

#[derive(Args)]
struct OutputArgs {
    /// Emit the JSON report instead of text
    #[arg(long)]
    json: bool,
    /// Write the report to FILE instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// Errors mapped onto the exit-code contract.
enum CliError {
    /// Exit 2: the input cannot be processed as given.
    Precondition(String),
    /// Exit 3: an algorithm failed to converge or sample.
    Numeric(String),
}

impl CliError {
    fn message(&self) -> &str {
        match self {
            CliError::Precondition(m) | CliError::Numeric(m) => m,
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Precondition(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Precondition(format!("parse error at {e}"))
    }
}

impl From<WeightError> for CliError {
    fn from(e: WeightError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<ResidueError> for CliError {
    fn from(e: ResidueError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<GradingError> for CliError {
    fn from(e: GradingError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::NonConvergence { .. }
            | NumericError::SingularPoint { .. }
            | NumericError::SamplingFailure { .. }
            | NumericError::AgmNonConvergence
            | NumericError::QuadratureFailure { .. }
            | NumericError::DegenerateMass => CliError::Numeric(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Precondition(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Classify { input, output } => cmd_classify(&input, &output),
        Command::Residue { input, chart, output } => cmd_residue(&input, chart, &output),
        Command::Primitive { input, output } => cmd_primitive(&input, &output),
        Command::Order { input, output } => cmd_order(&input, &output),
        Command::Spectrum { exponents, output } => cmd_spectrum(&exponents, &output),
        Command::SecondResidue { input, chart, slice, output } => {
            cmd_second_residue(&input, chart, slice, &output)
        }
        Command::L2Probe {
            input,
            r0,
            levels,
            count,
            seed,
            threads,
            csv,
            output,
        } => cmd_l2probe(&input, r0, levels, count, seed, threads, csv.as_deref(), &output),
        Command::Period { p, q, output } => cmd_period(&p, &q, &output),
    }
}

// ----- input resolution -----

struct ResolvedInput {
    omega: MeroTopForm,
    ws: WeightSystem,
    source: &'static str,
    warnings: Vec<String>,
    /// Raw binding values, echoed in reports.
    bindings: BTreeMap<String, String>,
}

fn resolve_input(args: &InputArgs) -> Result<ResolvedInput, CliError> {
    let mut bindings = BTreeMap::new();
    let mut opts = ParseOptions::default();
    for item in &args.bind {
        let (name, value) = item.split_once('=').ok_or_else(|| {
            CliError::Precondition(format!("--bind expects NAME=VALUE, got \"{item}\""))
        })?;
        let constant = parse_constant(value, &ParseOptions::default())
            .map_err(|e| CliError::Precondition(format!("binding {name}: {e}")))?;
        if opts.bindings.insert(name.to_string(), constant).is_some() {
            return Err(CliError::Precondition(format!(
                "binding {name} is given more than once"
            )));
        }
        bindings.insert(name.to_string(), value.to_string());
    }

    let mut warnings = Vec::new();
    let parsed_s = parse_poly(&args.s, &opts)?;
    warnings.extend(parsed_s.warnings);
    let s = parsed_s.value;
    opts.nvars = Some(s.nvars());
    let parsed_g = parse_poly(&args.g, &opts)?;
    warnings.extend(parsed_g.warnings);
    let g = parsed_g.value;

    let inferred = infer_weights(&s);
    let (ws, source) = match &args.weights {
        Some(text) => {
            let list: Vec<i64> = text
                .split(',')
                .map(|part| {
                    part.trim().parse::<i64>().map_err(|_| {
                        CliError::Precondition(format!(
                            "--weights expects comma-separated integers, got \"{text}\""
                        ))
                    })
                })
                .collect::<Result<_, _>>()?;
            let ws = WeightSystem::for_polynomial(&s, &list)?;
            match &inferred {
                Some(iw) if iw.weights() != ws.weights() || iw.degree() != ws.degree() => {
                    warnings.push(format!(
                        "inferred weights {} disagree with --weights; using the explicit ones",
                        ws_text(iw)
                    ));
                }
                _ => {}
            }
            (ws, "explicit")
        }
        None => {
            let ws = inferred.ok_or_else(|| {
                CliError::Precondition(
                    "the support of s does not determine a positive weight system; \
                     pass --weights"
                        .to_string(),
                )
            })?;
            (ws, "inferred")
        }
    };

    let omega = MeroTopForm::new(g, s)?;
    Ok(ResolvedInput {
        omega,
        ws,
        source,
        warnings,
        bindings,
    })
}

fn ws_text(ws: &WeightSystem) -> String {
    let list: Vec<String> = ws.weights().iter().map(i64::to_string).collect();
    format!("({}), degree {}", list.join(", "), ws.degree())
}

fn input_json(args: &InputArgs, bindings: &BTreeMap<String, String>) -> serde_json::Value {
    serde_json::json!({
        "s": args.s,
        "g": args.g,
        "bindings": bindings,
        "weights": args.weights,
        "infer_weights": args.infer_weights,
    })
}

fn weights_out(ws: &WeightSystem, source: &'static str) -> WeightsOut {
    WeightsOut {
        weights: ws.weights().to_vec(),
        degree: ws.degree(),
        source,
    }
}

fn emit(output: &OutputArgs, text: String, report: &Report) -> Result<(), CliError> {
    let body = if output.json {
        let mut json = serde_json::to_string_pretty(report)
            .map_err(|e| CliError::Precondition(e.to_string()))?;
        json.push('\n');
        json
    } else {
        let mut text = text;
        for warning in &report.diagnostics.warnings {
            let _ = writeln!(text, "warning: {warning}");
        }
        text
    };
    match &output.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

// ----- commands -----

fn cmd_classify(input: &InputArgs, output: &OutputArgs) -> Result<(), CliError> {
    let resolved = resolve_input(input)?;
    let classification = classify(&resolved.omega, &resolved.ws)?;

    let mut text = format!(
        "weight system: {} ({})\n",
        ws_text(&resolved.ws),
        resolved.source
    );
    for (i, r) in classification.reports.iter().enumerate() {
        let _ = writeln!(
            text,
            "component {i}: numerator {}, weight {}, order {}, canonical {}, liftable {}",
            classification.components[i].form().numerator(),
            r.weight,
            r.order,
            yes_no(r.canonical),
            yes_no(r.liftable),
        );
    }
    let _ = writeln!(text, "canonical: {}", yes_no(classification.canonical));
    let _ = writeln!(
        text,
        "lifts to intersection cohomology: {}",
        yes_no(classification.ih_liftable)
    );
    if !classification.obstructions.is_empty() {
        let list: Vec<String> = classification
            .obstructions
            .iter()
            .map(|i| format!("component {i}"))
            .collect();
        let _ = writeln!(text, "obstructions: {}", list.join(", "));
    }
    for note in &classification.notes {
        let _ = writeln!(text, "note: {note}");
    }

    let mut report = Report::new("classify", input_json(input, &resolved.bindings));
    report.weights = Some(weights_out(&resolved.ws, resolved.source));
    report.results = serde_json::json!({
        "surface": resolved.omega.surface().to_string(),
        "components": classification
            .reports
            .iter()
            .enumerate()
            .map(|(i, r)| serde_json::json!({
                "index": i,
                "numerator": classification.components[i].form().numerator().to_string(),
                "weight": r.weight,
                "order": r.order.to_string(),
                "canonical": r.canonical,
                "liftable": r.liftable,
            }))
            .collect::<Vec<_>>(),
        "canonical": classification.canonical,
        "ih_liftable": classification.ih_liftable,
        "obstructions": classification.obstructions,
        "notes": classification.notes,
    });
    report.diagnostics.warnings = resolved.warnings;
    emit(output, text, &report)
}

fn cmd_residue(input: &InputArgs, chart: usize, output: &OutputArgs) -> Result<(), CliError> {
    let resolved = resolve_input(input)?;
    let residue = chart_residue(&resolved.omega, chart)?;
    let rendered = residue.form.to_string();

    let text = format!("chart: {chart}\nresidue: {rendered}\n");
    let mut report = Report::new("residue", input_json(input, &resolved.bindings));
    report.weights = Some(weights_out(&resolved.ws, resolved.source));
    report.results = serde_json::json!({
        "chart": chart,
        "residue": rendered,
    });
    report.diagnostics.warnings = resolved.warnings;
    emit(output, text, &report)
}

fn cmd_primitive(input: &InputArgs, output: &OutputArgs) -> Result<(), CliError> {
    let resolved = resolve_input(input)?;
    let components = decompose_form(&resolved.omega, &resolved.ws)?;
    let obstructed: Vec<usize> = components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.weight() == 0)
        .map(|(i, _)| i)
        .collect();
    if !obstructed.is_empty() {
        let list: Vec<String> = obstructed.iter().map(|i| format!("component {i}")).collect();
        return Err(CliError::Precondition(format!(
            "{} of weight 0 admit(s) no primitive of this shape; \
             the weight-0 class is the obstruction",
            list.join(", ")
        )));
    }

    let mut text = format!(
        "weight system: {} ({})\n",
        ws_text(&resolved.ws),
        resolved.source
    );
    let mut rows = Vec::new();
    for (i, component) in components.iter().enumerate() {
        let eta = primitive(component)?;
        let rendered = eta.to_string();
        let _ = writeln!(
            text,
            "component {i} (weight {}): η = {rendered}",
            component.weight()
        );
        rows.push(serde_json::json!({
            "index": i,
            "weight": component.weight(),
            "primitive": rendered,
        }));
    }

    let mut report = Report::new("primitive", input_json(input, &resolved.bindings));
    report.weights = Some(weights_out(&resolved.ws, resolved.source));
    report.results = serde_json::json!({ "components": rows });
    report.diagnostics.warnings = resolved.warnings;
    report
        .diagnostics
        .notes
        .push("each primitive satisfies dη = component exactly".to_string());
    emit(output, text, &report)
}

fn cmd_order(input: &InputArgs, output: &OutputArgs) -> Result<(), CliError> {
    let resolved = resolve_input(input)?;
    let classification = classify(&resolved.omega, &resolved.ws)?;

    let mut text = format!(
        "weight system: {} ({})\n",
        ws_text(&resolved.ws),
        resolved.source
    );
    for (i, r) in classification.reports.iter().enumerate() {
        let _ = writeln!(text, "component {i}: weight {}, order {}", r.weight, r.order);
    }

    let mut report = Report::new("order", input_json(input, &resolved.bindings));
    report.weights = Some(weights_out(&resolved.ws, resolved.source));
    report.results = serde_json::json!({
        "components": classification
            .reports
            .iter()
            .enumerate()
            .map(|(i, r)| serde_json::json!({
                "index": i,
                "weight": r.weight,
                "order": r.order.to_string(),
            }))
            .collect::<Vec<_>>(),
    });
    report.diagnostics.warnings = resolved.warnings;
    emit(output, text, &report)
}

fn cmd_spectrum(exponents: &[u32], output: &OutputArgs) -> Result<(), CliError> {
    if let Some(&bad) = exponents.iter().find(|&&b| b < 2) {
        return Err(CliError::Precondition(format!(
            "every exponent must be at least 2, got {bad}"
        )));
    }
    let mu: u64 = exponents.iter().map(|&b| u64::from(b) - 1).product();
    if mu > 1_000_000 {
        return Err(CliError::Precondition(format!(
            "the spectrum would have {mu} entries; this tool caps at 10^6"
        )));
    }
    let spectrum = spectrum_brieskorn_pham(exponents);
    let rendered: Vec<String> = spectrum.iter().map(|a| a.to_string()).collect();

    let text = format!(
        "spectrum: {{{}}}\nmilnor number: {}\n",
        rendered.join(", "),
        spectrum.len()
    );
    let mut report = Report::new(
        "spectrum",
        serde_json::json!({ "exponents": exponents }),
    );
    report.results = serde_json::json!({
        "milnor_number": spectrum.len(),
        "spectrum": rendered,
    });
    emit(output, text, &report)
}

fn cmd_second_residue(
    input: &InputArgs,
    chart: usize,
    slice: usize,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let resolved = resolve_input(input)?;
    let components = decompose_form(&resolved.omega, &resolved.ws)?;
    let zero_weight: Vec<&WeightComponent<_>> =
        components.iter().filter(|c| c.weight() == 0).collect();
    let component = match zero_weight.as_slice() {
        [] => {
            return Err(CliError::Precondition(
                "no weight-0 component: the second residue is defined on weight 0 only"
                    .to_string(),
            ))
        }
        [only] => *only,
        _ => unreachable!("weights are distinct within a decomposition"),
    };
    let mut warnings = resolved.warnings;
    if components.len() > 1 {
        warnings.push(format!(
            "ignoring {} component(s) of nonzero weight",
            components.len() - 1
        ));
    }
    let second = second_residue_chart(component, chart, slice)?;
    let form_text = second.sliced.to_string();
    let relation_text = second.relation.to_string();

    let text = format!(
        "second residue in chart {chart}, slice z{slice} = 1:\n\
         form: {form_text}\n\
         curve: {relation_text} = 0\n\
         normalization: {SECOND_RESIDUE_NORMALIZATION}\n"
    );
    let mut inputs = input_json(input, &resolved.bindings);
    inputs["chart"] = serde_json::json!(chart);
    inputs["slice"] = serde_json::json!(slice);
    let mut report = Report::new("second-residue", inputs);
    report.weights = Some(weights_out(&resolved.ws, resolved.source));
    report.results = serde_json::json!({
        "chart": chart,
        "slice_var": slice,
        "normalization": SECOND_RESIDUE_NORMALIZATION,
        "form": form_text,
        "relation": relation_text,
    });
    report.diagnostics.warnings = warnings;
    emit(output, text, &report)
}

#[allow(clippy::too_many_arguments)]
fn cmd_l2probe(
    input: &InputArgs,
    r0: f64,
    levels: usize,
    count: usize,
    seed: u64,
    threads: Option<usize>,
    csv: Option<&std::path::Path>,
    output: &OutputArgs,
) -> Result<(), CliError> {
    if levels < 2 {
        return Err(CliError::Precondition(
            "need at least two shells to fit a slope".to_string(),
        ));
    }
    if r0 <= 0.0 {
        return Err(CliError::Precondition(
            "the outermost radius must be positive".to_string(),
        ));
    }
    if let Some(n) = threads {
        numeric::configure_thread_count(n)
            .map_err(|e| CliError::Precondition(format!("--threads: {e}")))?;
    }
    let resolved = resolve_input(input)?;
    let probe = numeric::l2_probe(&resolved.omega, &resolved.ws, r0, levels, count, seed)?;

    let verdict = match probe.verdict {
        ProbeVerdict::Convergent => "convergent",
        ProbeVerdict::Divergent => "divergent",
        ProbeVerdict::Borderline => "borderline",
    };
    let path = match probe.path {
        ProbePath::PlaneCurveQuadrature => "plane-curve-quadrature",
        ProbePath::MonteCarlo => "monte-carlo",
    };
    let mut warnings = resolved.warnings;
    let expected = match probe.component_weight.signum() {
        1 => ProbeVerdict::Convergent,
        -1 => ProbeVerdict::Divergent,
        _ => ProbeVerdict::Borderline,
    };
    let agreement = if probe.verdict == expected {
        format!(
            "the fitted verdict matches the exact weight classification (weight {})",
            probe.component_weight
        )
    } else {
        warnings.push(format!(
            "fitted verdict \"{verdict}\" disagrees with the exact weight {}; \
             increase --count or --levels",
            probe.component_weight
        ));
        String::new()
    };

    let mut text = format!(
        "weight system: {} ({})\n",
        ws_text(&resolved.ws),
        resolved.source
    );
    let _ = writeln!(text, "component weight: {}", probe.component_weight);
    let _ = writeln!(text, "path: {path}");
    let _ = writeln!(text, "shells:");
    for (k, (&r, &m)) in probe.radii.iter().zip(&probe.masses).enumerate() {
        match &probe.std_errs {
            Some(errs) => {
                let _ = writeln!(text, "  r = {r:.6e}  mass = {m:.6e}  err = {:.3e}", errs[k]);
            }
            None => {
                let _ = writeln!(text, "  r = {r:.6e}  mass = {m:.6e}");
            }
        }
    }
    let _ = writeln!(text, "slope: {:.4}", probe.slope);
    if let Some(p) = probe.predicted_slope {
        let _ = writeln!(text, "predicted slope: {p}");
    }
    let _ = writeln!(text, "verdict: {verdict}");
    if !agreement.is_empty() {
        let _ = writeln!(text, "note: {agreement}");
    }

    if let Some(path) = csv {
        let mut rows = String::from("radius,mass,std_err\n");
        for (k, (&r, &m)) in probe.radii.iter().zip(&probe.masses).enumerate() {
            let err = probe
                .std_errs
                .as_ref()
                .map(|errs| errs[k].to_string())
                .unwrap_or_default();
            let _ = writeln!(rows, "{r},{m},{err}");
        }
        std::fs::write(path, rows)?;
    }

    let mut inputs = input_json(input, &resolved.bindings);
    inputs["r0"] = serde_json::json!(r0);
    inputs["levels"] = serde_json::json!(levels);
    inputs["count"] = serde_json::json!(count);
    let mut report = Report::new("l2probe", inputs);
    report.weights = Some(weights_out(&resolved.ws, resolved.source));
    report.results = serde_json::json!({
        "radii": probe.radii,
        "masses": probe.masses,
        "std_errs": probe.std_errs,
        "slope": probe.slope,
        "verdict": verdict,
        "component_weight": probe.component_weight,
        "predicted_slope": probe.predicted_slope,
        "predicted_mismatch": probe.predicted_mismatch,
        "path": path,
    });
    report.diagnostics.seed = Some(seed);
    report.diagnostics.threads = threads;
    report.diagnostics.tolerances = [
        ("on_hypersurface_rel", resform::tol::ON_HYPERSURFACE_REL),
        ("gradient_min", resform::tol::GRADIENT_MIN),
        ("sampling_min_acceptance", resform::tol::SAMPLING_MIN_ACCEPTANCE),
        ("slope_borderline", resform::tol::SLOPE_BORDERLINE),
    ]
    .into_iter()
    .collect();
    report.diagnostics.warnings = warnings;
    if !agreement.is_empty() {
        report.diagnostics.notes.push(agreement);
    }
    emit(output, text, &report)
}

/// Parse a real number given as a decimal or a fraction a/b.
fn parse_real(text: &str) -> Result<f64, CliError> {
    let trimmed = text.trim();
    if let Ok(v) = trimmed.parse::<f64>() {
        if v.is_finite() {
            return Ok(v);
        }
    }
    if let Some((a, b)) = trimmed.split_once('/') {
        if let (Ok(num), Ok(den)) = (a.trim().parse::<i64>(), b.trim().parse::<i64>()) {
            if den != 0 {
                return Ok(num as f64 / den as f64);
            }
        }
    }
    Err(CliError::Precondition(format!(
        "expected a finite number or fraction, got \"{text}\""
    )))
}

fn cmd_period(p_text: &str, q_text: &str, output: &OutputArgs) -> Result<(), CliError> {
    let p = parse_real(p_text)?;
    let q = parse_real(q_text)?;
    let roots = elliptic::depressed_cubic_roots(p, q)?;
    let start = roots.real[0];
    let quadrature =
        elliptic::period_integral(&[1.0], p, q, elliptic::PeriodPath::HalfLine { start })?;
    let oracle = elliptic::agm_elliptic_oracle(p, q)?;
    let rel_diff = (quadrature - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE);

    let text = format!(
        "cubic: x^3 + p*x + q with p = {p}, q = {q}\n\
         cycle: from the largest real root x = {start} to infinity\n\
         quadrature: {quadrature}\n\
         agm oracle: {oracle}\n\
         relative difference: {rel_diff:.3e}\n"
    );
    let mut report = Report::new(
        "period",
        serde_json::json!({ "p": p_text, "q": q_text }),
    );
    report.results = serde_json::json!({
        "p": p,
        "q": q,
        "cycle": "half-line",
        "start": start,
        "quadrature": quadrature,
        "oracle": oracle,
        "rel_diff": rel_diff,
    });
    report.diagnostics.tolerances = [
        ("quadrature_rel", resform::tol::QUADRATURE_REL),
        ("agm_rel", resform::tol::AGM_REL),
        ("discriminant_rel", resform::tol::DISCRIMINANT_REL),
    ]
    .into_iter()
    .collect();
    emit(output, text, &report)
}
