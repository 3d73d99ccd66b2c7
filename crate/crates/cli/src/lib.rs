//! Command-line front end: `validate`, `words`, `analyze`, `ktheory`,
//! `ideals` and `oracle`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use sofic_rot::ideals::DEFAULT_IDEAL_CAP;
use sofic_rot::ktheory::{af_core_dimension_data, k_rotation_ck, InductiveKData, KGroups};
use sofic_rot::oracles::{orbit_density, weyl_sums, OrbitSample, WeylRow, GOLDEN_DEFAULT};
use sofic_rot::report::{
    ideal_section, AnalysisReport, IdealSection, ReportOptions, Validation, TOOL_NAME, TOOL_VERSION,
};
use sofic_rot::subshift::{admissible_words, DEFAULT_WORD_CAP};
use sofic_rot::{parse_angle, parse_system, ExactAngle, LoadError, System};

#[derive(Debug, Parser)]
#[command(
    name = "sofic-rot",
    version,
    about = "Rotation-decorated labeled graphs: languages, verdicts, K-theory, ideals"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Longest word length `words` will enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_WORD_CAP)]
    max_word_len: usize,
    /// Largest vertex count for ideal enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_IDEAL_CAP)]
    ideal_cap: usize,
    /// Float value for a generator, `name=value`; repeatable.
    #[arg(long = "gen", global = true, value_name = "NAME=VALUE", value_parser = parse_gen)]
    gens: Vec<(String, f64)>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a document describes an essential left-resolving graph.
    Validate { file: PathBuf },
    /// List the admissible words of length K.
    Words {
        file: PathBuf,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Full report: verdicts, K-theory, ideals.
    Analyze {
        #[arg(required_unless_present = "angles")]
        file: Option<PathBuf>,
        /// Exact angles of a full shift instead of a file, e.g. `0,1*g1`.
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true, conflicts_with = "file")]
        angles: Vec<String>,
    },
    /// K0 and K1 of the crossed product.
    Ktheory {
        file: PathBuf,
        /// Also print the inductive data of the gauge-fixed core.
        #[arg(long)]
        af_core: bool,
        /// Depth of the inductive data table.
        #[arg(short = 'k', requires = "af_core", default_value_t = 3)]
        k: usize,
    },
    /// Invariant saturated vertex sets with their quotients.
    Ideals { file: PathBuf },
    /// Numeric cross-checks.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Orbit density per fiber.
    Orbit {
        file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// Starting vertex name; defaults to the first vertex.
        #[arg(long)]
        start: Option<String>,
        /// Starting circle point.
        #[arg(long, default_value_t = 0.0)]
        point: f64,
    },
    /// Weyl sums of the level angle sums of a full shift.
    Weyl {
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true, required = true)]
        angles: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        n: u32,
        #[arg(long, default_value_t = 50)]
        lmax: u32,
    },
}

fn parse_gen(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((name.trim().to_string(), value))
}

enum Failure {
    Usage(String),
    Io(String),
    Invalid,
}

type Outcome = Result<(), Failure>;

struct Input {
    digest: String,
    loaded: Result<System, LoadError>,
}

fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn load(path: &Path) -> Result<Input, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::Io(format!("{}: not UTF-8", path.display())))?;
    Ok(Input {
        digest: digest(&bytes),
        loaded: parse_system(&text),
    })
}

/// Loads a file that must validate; reports the error otherwise.
fn load_valid(path: &Path, err: &mut dyn Write) -> Result<System, Failure> {
    match load(path)?.loaded {
        Ok(sys) => Ok(sys),
        Err(e) => {
            let _ = writeln!(err, "invalid: {e}");
            Err(Failure::Invalid)
        }
    }
}

struct Ctx<'a> {
    json: bool,
    max_word_len: usize,
    ideal_cap: usize,
    gens: &'a [(String, f64)],
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit_json<T: Serialize>(&mut self, value: &T) -> Outcome {
        let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
        writeln!(self.out, "{s}").map_err(|e| Failure::Io(e.to_string()))
    }

    fn line(&mut self, s: impl AsRef<str>) -> Outcome {
        writeln!(self.out, "{}", s.as_ref()).map_err(|e| Failure::Io(e.to_string()))
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        max_word_len: cli.max_word_len,
        ideal_cap: cli.ideal_cap,
        gens: &cli.gens,
        out,
        err,
    };
    let result = match &cli.command {
        Command::Validate { file } => validate(&mut ctx, file),
        Command::Words { file, k } => words(&mut ctx, file, *k),
        Command::Analyze { file, angles } => analyze(&mut ctx, file.as_deref(), angles),
        Command::Ktheory { file, af_core, k } => ktheory(&mut ctx, file, af_core.then_some(*k)),
        Command::Ideals { file } => ideals(&mut ctx, file),
        Command::Oracle { which } => match which {
            OracleCommand::Orbit {
                file,
                steps,
                eps,
                start,
                point,
            } => orbit(&mut ctx, file, *steps, *eps, start.as_deref(), *point),
            OracleCommand::Weyl { angles, n, lmax } => weyl(&mut ctx, angles, *n, *lmax),
        },
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Invalid) => 2,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}\n\n{}", synopsis());
            1
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            1
        }
    }
}

fn synopsis() -> String {
    use clap::CommandFactory;
    Cli::command().render_usage().to_string()
}

#[derive(Serialize)]
struct ValidationReport<'a> {
    tool: &'a str,
    version: &'a str,
    input_digest: &'a str,
    validation: &'a Validation,
}

fn validate(ctx: &mut Ctx, file: &Path) -> Outcome {
    let input = load(file)?;
    let report = match &input.loaded {
        Ok(sys) => AnalysisReport::build_header(sys, &input.digest),
        Err(e) => AnalysisReport::failed(e, &input.digest),
    };
    if ctx.json {
        ctx.emit_json(&ValidationReport {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            input_digest: &input.digest,
            validation: &report.validation,
        })?;
    } else {
        match &input.loaded {
            Ok(sys) => ctx.line(format!(
                "valid: {} vertices, {} symbols, {} edges",
                sys.graph.vertex_count(),
                sys.graph.symbol_count(),
                sys.graph.edges().len()
            ))?,
            Err(e) => ctx.line(format!("invalid: {e}"))?,
        }
    }
    if report.validation.ok {
        Ok(())
    } else {
        Err(Failure::Invalid)
    }
}

fn words(ctx: &mut Ctx, file: &Path, k: usize) -> Outcome {
    let sys = load_valid(file, ctx.err)?;
    let list = admissible_words(&sys.graph, k, ctx.max_word_len)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let rendered: Vec<String> = list
        .iter()
        .map(|w| w.display(&sys.graph).to_string())
        .collect();
    if ctx.json {
        ctx.emit_json(&rendered)
    } else {
        rendered.iter().try_for_each(|w| ctx.line(w))
    }
}

fn full_shift_from_angles(angles: &[String]) -> Result<(System, String), Failure> {
    if angles.len() < 2 {
        return Err(Failure::Usage("--angles needs at least two angles".into()));
    }
    let parsed: Vec<ExactAngle> = angles
        .iter()
        .map(|a| parse_angle(a.trim()).map_err(|e| Failure::Usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    let sys = System::full_shift(parsed);
    let doc = sys.to_document();
    Ok((sys, digest(doc.as_bytes())))
}

fn analyze(ctx: &mut Ctx, file: Option<&Path>, angles: &[String]) -> Outcome {
    let options = ReportOptions {
        ideal_cap: ctx.ideal_cap,
    };
    let report = match file {
        Some(path) => {
            let input = load(path)?;
            match &input.loaded {
                Ok(sys) => AnalysisReport::build(sys, &input.digest, options),
                Err(e) => AnalysisReport::failed(e, &input.digest),
            }
        }
        None => {
            let (sys, d) = full_shift_from_angles(angles)?;
            AnalysisReport::build(&sys, &d, options)
        }
    };
    if ctx.json {
        ctx.emit_json(&report)?;
    } else {
        print_report(ctx, &report)?;
    }
    if report.validation.ok {
        Ok(())
    } else {
        Err(Failure::Invalid)
    }
}

fn print_report(ctx: &mut Ctx, r: &AnalysisReport) -> Outcome {
    if let Some(e) = &r.validation.error {
        return ctx.line(format!("invalid: {e}"));
    }
    let verdicts = [
        ("condition_I", &r.condition_i),
        ("irreducible", &r.irreducible),
        ("irrational_cycle", &r.irrational_cycle),
        ("g_minimal", &r.g_minimal),
        ("simple_O", &r.simple_o),
        ("purely_infinite_O", &r.purely_infinite_o),
    ];
    let mut lines = Vec::new();
    for (name, v) in verdicts {
        if let Some(v) = v {
            lines.push(verdict_line(name, v));
        }
    }
    if let Some(f) = &r.fullshift {
        lines.push(verdict_line("fullshift.F_simple", &f.f_simple));
        lines.push(verdict_line(
            "fullshift.uniformly_distributed",
            &f.uniformly_distributed,
        ));
    }
    if let Some(k) = &r.k_theory {
        lines.push(k_line(k));
    }
    if let Some(section) = &r.ideals {
        lines.push(format!("ideals: {}", section.lattice.len()));
    }
    lines.extend(r.warnings.iter().map(|w| format!("warning: {w}")));
    lines.iter().try_for_each(|l| ctx.line(l))
}

fn verdict_line(name: &str, v: &sofic_rot::VerdictReport) -> String {
    let cert = serde_json::to_string(&v.certificate).unwrap_or_default();
    let derived = if v.derived { " (derived)" } else { "" };
    format!("{name}: {:?}{derived}  [{}]  {cert}", v.verdict, v.theorem)
}

fn k_line(k: &KGroups) -> String {
    if k.k0 == k.k1 {
        format!("K0 = K1 = {}", k.k0)
    } else {
        format!("K0 = {}\nK1 = {}", k.k0, k.k1)
    }
}

#[derive(Serialize)]
struct KReport<'a> {
    k_theory: &'a KGroups,
    #[serde(skip_serializing_if = "Option::is_none")]
    af_core: Option<&'a InductiveKData>,
}

fn ktheory(ctx: &mut Ctx, file: &Path, af_depth: Option<usize>) -> Outcome {
    let sys = load_valid(file, ctx.err)?;
    let k = k_rotation_ck(&sys.graph);
    let af = af_depth
        .map(|d| af_core_dimension_data(&sys.graph, d).map_err(|e| Failure::Usage(e.to_string())))
        .transpose()?;
    if ctx.json {
        return ctx.emit_json(&KReport {
            k_theory: &k,
            af_core: af.as_ref(),
        });
    }
    ctx.line(k_line(&k))?;
    if let Some(data) = &af {
        ctx.line("level  K0  K1")?;
        for (l, level) in data.levels.iter().enumerate() {
            ctx.line(format!("{l}  {}  {}", level.k0, level.k1))?;
        }
        for (l, (m0, m1)) in data.k0_maps.iter().zip(&data.k1_maps).enumerate() {
            ctx.line(format!("{l} -> {}  K0 {m0}  K1 {m1}", l + 1))?;
        }
        ctx.line(format!("note: {}", data.note))?;
    }
    Ok(())
}

fn ideals(ctx: &mut Ctx, file: &Path) -> Outcome {
    let sys = load_valid(file, ctx.err)?;
    let section: IdealSection =
        ideal_section(&sys.graph, ctx.ideal_cap).map_err(|e| Failure::Usage(e.to_string()))?;
    if ctx.json {
        return ctx.emit_json(&section);
    }
    for (i, entry) in section.lattice.iter().enumerate() {
        let mut line = format!("{i}: {{{}}}", entry.vertices.join(", "));
        if let Some(q) = &entry.quotient {
            let status = match &q.error {
                None => "valid".to_string(),
                Some(e) => format!("invalid ({e})"),
            };
            line.push_str(&format!(
                "  quotient {{{}}} alphabet {{{}}} {status}",
                q.vertices.join(", "),
                q.surviving_alphabet.join(", ")
            ));
        }
        ctx.line(line)?;
    }
    let hasse: Vec<String> = section
        .hasse
        .iter()
        .map(|(a, b)| format!("{a} < {b}"))
        .collect();
    ctx.line(format!("hasse: {}", hasse.join(", ")))
}

/// Generator floats: document values, then `--gen` overrides, then the
/// golden-ratio default for an otherwise unset `g1`.
fn generator_values(
    sys: &System,
    gens: &[(String, f64)],
) -> Result<BTreeMap<String, f64>, Failure> {
    let mut values = sys.generator_values.clone();
    for (name, v) in gens {
        if !sys.context.contains(name) {
            return Err(Failure::Usage(format!(
                "generator `{name}` is not declared"
            )));
        }
        values.insert(name.clone(), *v);
    }
    if sys.context.contains("g1") {
        values.entry("g1".to_string()).or_insert(GOLDEN_DEFAULT);
    }
    Ok(values)
}

#[derive(Serialize)]
struct OrbitReport<'a> {
    generators: &'a BTreeMap<String, f64>,
    angles: Vec<f64>,
    start_vertex: &'a str,
    start_point: f64,
    sample: &'a OrbitSample,
}

fn orbit(
    ctx: &mut Ctx,
    file: &Path,
    steps: usize,
    eps: f64,
    start: Option<&str>,
    point: f64,
) -> Outcome {
    let sys = load_valid(file, ctx.err)?;
    let values = generator_values(&sys, ctx.gens)?;
    let theta: Vec<f64> = sys
        .angles
        .angles()
        .iter()
        .map(|a| {
            a.to_float(&values)
                .map_err(|e| Failure::Usage(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let start_vertex = match start {
        None => 0,
        Some(name) => sys
            .graph
            .vertex_index(name)
            .ok_or_else(|| Failure::Usage(format!("unknown vertex `{name}`")))?,
    };
    let sample = orbit_density(&sys.graph, &theta, start_vertex, point, steps, eps)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    if ctx.json {
        return ctx.emit_json(&OrbitReport {
            generators: &values,
            angles: theta,
            start_vertex: sys.graph.vertex_name(start_vertex),
            start_point: point,
            sample: &sample,
        });
    }
    for f in &sample.fibers {
        let gap = f
            .gap
            .map_or("unreached".to_string(), |g| format!("gap {g:.6}"));
        ctx.line(format!("{}: {} points, {gap}", f.vertex, f.points.len()))?;
    }
    ctx.line(format!(
        "steps {}  eps {}  all dense: {}",
        sample.steps,
        sample.epsilon,
        if sample.all_dense { "yes" } else { "no" }
    ))
}

#[derive(Serialize)]
struct WeylReport<'a> {
    angles: &'a [f64],
    n: u32,
    lmax: u32,
    max: f64,
    rows: &'a [WeylRow],
}

fn weyl(ctx: &mut Ctx, angles: &[f64], n: u32, lmax: u32) -> Outcome {
    if angles.is_empty() {
        return Err(Failure::Usage("--angles needs at least one value".into()));
    }
    let rows = weyl_sums(angles, n, lmax).map_err(|e| Failure::Usage(e.to_string()))?;
    let max = rows.iter().map(|r| r.value).fold(0.0, f64::max);
    if ctx.json {
        return ctx.emit_json(&WeylReport {
            angles,
            n,
            lmax,
            max,
            rows: &rows,
        });
    }
    for r in &rows {
        ctx.line(format!("{}  {:.3e}", r.ell, r.value))?;
    }
    ctx.line(format!("max {max:.3e}"))
}
