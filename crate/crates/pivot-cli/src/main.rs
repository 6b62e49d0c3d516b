//! Command-line tool for exact resolutions of monomial ideals over the
//! rationals: the full simplex resolution, pivot quotients, Morse complexes,
//! the multiplicative structure, higher homotopies for complete
//! intersections, and the lifted complexes over the quotient ring.

mod checks;
mod output;
mod parse;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{
    complex_to_dto, matrix_to_dto, print_json, render_complex, render_matrix, Certificate,
};
use pivot_core::arith::{Multidegree, Polynomial};
use pivot_core::combin::IndexSet;
use pivot_core::complex::minimalize;
use pivot_core::homotopy::{
    pivot_homotopy_with_limits, relabel_for_pivot, taylor_homotopy_with_limits, verify_homotopy,
    CIData, ExpressStrategy, HomotopyOffense, HomotopySystem, Relabeling,
};
use pivot_core::resolutions::{
    find_gaps, is_pivot_resolution, lyubeznik_matching_with_limits, morse_resolution_with_limits,
    pivot_complex_with_limits, scarf_number_with_limits, smallest_pivot_indices_with_limits,
    taylor_resolution_with_limits, validate_matching_with_limits, Limits, MonomialIdeal,
    ScarfNumber,
};
use pivot_core::shamash::{
    betti_bound, monomial_ci_multidegrees, shamash_complex, verify_shamash_exactness, BoundMode,
};
use serde::Serialize;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pivot",
    version,
    about = "Exact free resolutions of monomial ideals, their products, and lifts over complete intersections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum VerifyWhat {
    /// Consecutive differentials compose to zero.
    D2,
    /// The complex resolves the quotient by the ideal.
    Exactness,
    /// The product satisfies unit, commutativity, Leibniz, associativity.
    Dg,
    /// The higher-homotopy identities for a complete intersection.
    Homotopy,
}

#[derive(Args)]
struct CommonArgs {
    /// Ideal file: a `vars:` line, then a `gens:` line (monomials, comma-separated).
    ideal: PathBuf,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct SetArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Generator indices (1-based, comma-separated), e.g. `--indices 1,2`.
    #[arg(long, value_delimiter = ',', required = true)]
    indices: Vec<usize>,
}

#[derive(Args)]
struct LyubeznikArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Generator order as a permutation of 1..=q (default: the given order).
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<usize>>,
}

#[derive(Args)]
struct MorseArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Matching file: one `edge: upper -> lower` line per matched pair.
    #[arg(long)]
    matching: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which property to verify.
    #[arg(long, value_enum)]
    what: VerifyWhat,
    /// Pivot indices: verify the pivot complex / quotient product instead
    /// of the full resolution.
    #[arg(long, value_delimiter = ',')]
    indices: Option<Vec<usize>>,
    /// Complete-intersection file (required for `--what homotopy`).
    #[arg(long)]
    ci: Option<PathBuf>,
}

#[derive(Args)]
struct HomotopyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Complete-intersection file: `elem:` lines, optional `coeffs:` lines.
    #[arg(long)]
    ci: PathBuf,
    /// Pivot indices: build the homotopies on the pivot complex (the
    /// generators are relabeled into normal form first).
    #[arg(long, value_delimiter = ',')]
    indices: Option<Vec<usize>>,
}

#[derive(Args)]
struct ShamashArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Complete-intersection file: `elem:` lines, optional `coeffs:` lines.
    #[arg(long)]
    ci: PathBuf,
    /// Top homological degree of the lifted complex.
    #[arg(long, default_value_t = 6)]
    truncate: usize,
    /// Pivot indices: lift the pivot complex instead of the full resolution.
    #[arg(long, value_delimiter = ',')]
    indices: Option<Vec<usize>>,
    /// Assert that the elements form a regular sequence when the tool
    /// cannot certify it (non-monomial or non-coprime elements).
    #[arg(long)]
    trust_regular: bool,
    /// Check strand-by-strand exactness over the quotient ring up to this
    /// multidegree bound (`6` or `6,6,...`, one entry per variable).
    /// Requires pairwise-coprime monomial elements.
    #[arg(long)]
    exactness_bound: Option<String>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Length of the regular sequence being quotiented by.
    #[arg(long)]
    r: usize,
    /// Largest homological degree to tabulate.
    #[arg(long, default_value_t = 6)]
    max_degree: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Resolution with one basis element per subset of the generators.
    Taylor(CommonArgs),
    /// Pivot complex of an index set: drops all cells containing the set.
    Pivot(SetArgs),
    /// Gaps of an index set: outside generators dividing the set's lcm.
    Gaps(SetArgs),
    /// Smallest size of a generator subset sharing its lcm with a gap.
    Scarf(CommonArgs),
    /// Lexicographically least such subset of the smallest size.
    SmallestPivot(CommonArgs),
    /// Minimal Betti numbers, computed by exact minimalization.
    Betti(CommonArgs),
    /// Morse resolution from the order-derived matching.
    Lyubeznik(LyubeznikArgs),
    /// Morse resolution from an explicit matching file.
    Morse(MorseArgs),
    /// Run certified checks and print the certificate.
    Verify(VerifyArgs),
    /// Build the higher-homotopy system for a complete intersection.
    Homotopy(HomotopyArgs),
    /// Lift the resolution to the quotient by a complete intersection.
    Shamash(ShamashArgs),
    /// Rank bounds for the lifted resolution, closed form vs constructed.
    Bounds(BoundsArgs),
}

/// Success prints results and exits 0; a negative mathematical verdict
/// (not a resolution, failed check, invalid matching) exits 1; usage and
/// input errors exit 2.
enum Outcome {
    Success,
    Negative,
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`pivot ... | head`) instead of panicking.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<Outcome> {
    let cli = Cli::parse();
    let limits = limits_from_env()?;
    match cli.command {
        Command::Taylor(args) => cmd_taylor(args, &limits),
        Command::Pivot(args) => cmd_pivot(args, &limits),
        Command::Gaps(args) => cmd_gaps(args),
        Command::Scarf(args) => cmd_scarf(args, &limits),
        Command::SmallestPivot(args) => cmd_smallest_pivot(args, &limits),
        Command::Betti(args) => cmd_betti(args, &limits),
        Command::Lyubeznik(args) => cmd_lyubeznik(args, &limits),
        Command::Morse(args) => cmd_morse(args, &limits),
        Command::Verify(args) => cmd_verify(args, &limits),
        Command::Homotopy(args) => cmd_homotopy(args, &limits),
        Command::Shamash(args) => cmd_shamash(args, &limits),
        Command::Bounds(args) => cmd_bounds(args, &limits),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn limits_from_env() -> Result<Limits> {
    let mut limits = Limits::default();
    if let Some(v) = env_u64("PIVOT_MAX_CELLS")? {
        limits.max_cells = v;
    }
    if let Some(v) = env_u64("PIVOT_MAX_PATHS")? {
        limits.max_paths = v;
    }
    Ok(limits)
}

fn env_u64(name: &str) -> Result<Option<u64>> {
    match std::env::var(name) {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| anyhow!("{name} must be an unsigned integer, got `{text}`")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(anyhow!("{name}: {e}")),
    }
}

struct LoadedIdeal {
    vars: Vec<String>,
    ideal: MonomialIdeal,
    raw: Vec<u8>,
}

fn read_text(path: &Path) -> Result<(Vec<u8>, String)> {
    let raw =
        std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let text = String::from_utf8(raw.clone())
        .map_err(|_| anyhow!("{} is not valid UTF-8", path.display()))?;
    Ok((raw, text))
}

fn load_ideal(path: &Path) -> Result<LoadedIdeal> {
    let (raw, text) = read_text(path)?;
    let file =
        parse::parse_ideal(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok(LoadedIdeal { vars: file.vars, ideal: file.ideal, raw })
}

fn load_ci(path: &Path, loaded: &LoadedIdeal) -> Result<(Vec<u8>, parse::CiFile)> {
    let (raw, text) = read_text(path)?;
    let file = parse::parse_ci(&text, &loaded.vars, loaded.ideal.num_generators())
        .map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok((raw, file))
}

/// Converts 1-based indices into a set, rejecting out-of-range values and
/// duplicates.
fn index_set(indices: &[usize], q: usize) -> Result<IndexSet> {
    if indices.is_empty() {
        bail!("the index list must not be empty");
    }
    let mut set = IndexSet::EMPTY;
    for &i in indices {
        if i < 1 || i > q {
            bail!("index {i} outside 1..={q} (the generator count)");
        }
        if set.contains(i) {
            bail!("duplicate index {i}");
        }
        set = set.with(i);
    }
    Ok(set)
}

/// The invoked command line, recorded into certificates.
fn command_line() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    format!("pivot {}", args.join(" "))
}

fn build_ci(ideal: &MonomialIdeal, file: &parse::CiFile) -> Result<CIData> {
    let ci = match &file.coefficients {
        Some(rows) => CIData::new(ideal, file.elements.clone(), rows.clone())?,
        None => {
            CIData::from_elements(ideal, file.elements.clone(), ExpressStrategy::FirstDivisor)?
        }
    };
    Ok(ci)
}

/// Rebuilds the complete-intersection data over a relabeled ideal. Explicit
/// coefficient rows are permuted along with the generators; derived rows are
/// re-derived.
fn build_ci_relabeled(
    relabeled: &MonomialIdeal,
    file: &parse::CiFile,
    relabeling: &Relabeling,
) -> Result<CIData> {
    let ci = match &file.coefficients {
        Some(rows) => {
            let q = relabeled.num_generators();
            let permuted: Vec<Vec<Polynomial>> = rows
                .iter()
                .map(|row| {
                    let mut out = vec![Polynomial::zero(relabeled.nvars()); q];
                    for (j, c) in row.iter().enumerate() {
                        out[relabeling.image(j + 1) - 1] = c.clone();
                    }
                    out
                })
                .collect();
            CIData::new(relabeled, file.elements.clone(), permuted)?
        }
        None => {
            CIData::from_elements(relabeled, file.elements.clone(), ExpressStrategy::FirstDivisor)?
        }
    };
    Ok(ci)
}

fn relabel_note(relabeling: &Relabeling) -> String {
    let parts: Vec<String> =
        (1..=relabeling.q()).map(|i| format!("{i}->{}", relabeling.image(i))).collect();
    format!("generators relabeled to pivot normal form: {}", parts.join(", "))
}

struct HomotopyBuild {
    system: HomotopySystem,
    ci: CIData,
    relabel: Option<String>,
}

/// Builds the homotopy system, over the full resolution or (with indices)
/// over the pivot complex of the relabeled ideal.
fn build_homotopy(
    loaded: &LoadedIdeal,
    ci_file: &parse::CiFile,
    indices: Option<&[usize]>,
    limits: &Limits,
) -> Result<HomotopyBuild> {
    match indices {
        None => {
            let ci = build_ci(&loaded.ideal, ci_file)?;
            let system = taylor_homotopy_with_limits(&loaded.ideal, &ci, limits)?;
            Ok(HomotopyBuild { system, ci, relabel: None })
        }
        Some(indices) => {
            let set = index_set(indices, loaded.ideal.num_generators())?;
            let (relabeling, _gap) = relabel_for_pivot(&loaded.ideal, set)?;
            let relabeled = relabeling.apply_ideal(&loaded.ideal);
            let ci = build_ci_relabeled(&relabeled, ci_file, &relabeling)?;
            let system = pivot_homotopy_with_limits(&relabeled, set.len(), &ci, limits)?;
            Ok(HomotopyBuild { system, ci, relabel: Some(relabel_note(&relabeling)) })
        }
    }
}

/// Builds the complex named by the optional pivot indices: the full simplex
/// resolution without them, the pivot complex with them.
fn build_complex(
    loaded: &LoadedIdeal,
    indices: Option<&[usize]>,
    limits: &Limits,
) -> Result<pivot_core::complex::BasedComplex> {
    match indices {
        None => Ok(taylor_resolution_with_limits(&loaded.ideal, limits)?),
        Some(indices) => {
            let set = index_set(indices, loaded.ideal.num_generators())?;
            Ok(pivot_complex_with_limits(&loaded.ideal, set, limits)?)
        }
    }
}

fn offense_string(offense: &HomotopyOffense, vars: &[String]) -> String {
    format!(
        "offending entry at source degree {}, row {}, column {}: {}",
        offense.degree,
        offense.row,
        offense.col,
        offense.value.format_with(vars)
    )
}

fn emit_certificate(cert: &Certificate, format: Format) -> Result<()> {
    match format {
        Format::Text => print!("{}", cert.render_text()),
        Format::Json => print_json(cert)?,
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Construction commands
// ---------------------------------------------------------------------------

fn cmd_taylor(args: CommonArgs, limits: &Limits) -> Result<Outcome> {
    let loaded = load_ideal(&args.ideal)?;
    let complex = taylor_resolution_with_limits(&loaded.ideal, limits)?;
    match args.format {
        Format::Text => print!("{}", render_complex(&complex, &loaded.vars)),
        Format::Json => print_json(&complex_to_dto(&complex))?,
    }
    Ok(Outcome::Success)
}

fn cmd_pivot(args: SetArgs, limits: &Limits) -> Result<Outcome> {
    let loaded = load_ideal(&args.common.ideal)?;
    let set = index_set(&args.indices, loaded.ideal.num_generators())?;
    let complex = pivot_complex_with_limits(&loaded.ideal, set, limits)?;
    let gaps = find_gaps(&loaded.ideal, set);
    let resolution = is_pivot_resolution(&loaded.ideal, set)?;
    match args.common.format {
        Format::Text => {
            println!("pivot set: {set}");
            println!("gaps: {}", if gaps.is_empty() { "none".to_string() } else { gaps.to_string() });
            println!("resolution: {resolution}");
            println!();
            print!("{}", render_complex(&complex, &loaded.vars));
        }
        Format::Json => {
            let mut doc = serde_json::to_value(complex_to_dto(&complex))?;
            let obj = doc.as_object_mut().expect("complex document is an object");
            obj.insert("pivot_set".into(), json!(set.elements()));
            obj.insert("gaps".into(), json!(gaps.elements()));
            obj.insert("is_resolution".into(), json!(resolution));
            print_json(&doc)?;
        }
    }
    Ok(Outcome::Success)
}

fn cmd_gaps(args: SetArgs) -> Result<Outcome> {
    let loaded = load_ideal(&args.common.ideal)?;
    let set = index_set(&args.indices, loaded.ideal.num_generators())?;
    let gaps = find_gaps(&loaded.ideal, set);
    match args.common.format {
        Format::Text => {
            println!(
                "gaps of {set}: {}",
                if gaps.is_empty() { "none".to_string() } else { gaps.to_string() }
            );
        }
        Format::Json => {
            print_json(&json!({ "pivot_set": set.elements(), "gaps": gaps.elements() }))?;
        }
    }
    Ok(Outcome::Success)
}

fn cmd_scarf(args: CommonArgs, limits: &Limits) -> Result<Outcome> {
    let loaded = load_ideal(&args.ideal)?;
    let scarf = scarf_number_with_limits(&loaded.ideal, limits)?;
    match args.format {
        Format::Text => match scarf {
            ScarfNumber::Finite(l) => println!("{l}"),
            ScarfNumber::Infinite => println!("infinity"),
        },
        Format::Json => match scarf {
            ScarfNumber::Finite(l) => print_json(&json!({ "scarf": l }))?,
            ScarfNumber::Infinite => print_json(&json!({ "scarf": null }))?,
        },
    }
    Ok(Outcome::Success)
}

fn cmd_smallest_pivot(args: CommonArgs, limits: &Limits) -> Result<Outcome> {
    let loaded = load_ideal(&args.ideal)?;
    let smallest = smallest_pivot_indices_with_limits(&loaded.ideal, limits)?;
    match args.format {
        Format::Text => match smallest {
            Some(set) => {
                let parts: Vec<String> = set.iter().map(|i| i.to_string()).collect();
                println!("{}", parts.join(","));
            }
            None => println!(
                "none (no generator subset shares its lcm with a gap; \
                 the full simplex resolution is minimal)"
            ),
        },
        Format::Json => match smallest {
            Some(set) => print_json(&json!({ "indices": set.elements() }))?,
            None => print_json(&json!({ "indices": null }))?,
        },
    }
    Ok(Outcome::Success)
}

fn cmd_betti(args: CommonArgs, limits: &Limits) -> Result<Outcome> {
    let loaded = load_ideal(&args.ideal)?;
    let complex = taylor_resolution_with_limits(&loaded.ideal, limits)?;
    let (minimal, _steps) = minimalize(&complex)?;
    let ranks = minimal.ranks();
    match args.format {
        Format::Text => {
            let parts: Vec<String> = ranks.iter().map(|r| r.to_string()).collect();
            println!("{}", parts.join(" "));
        }
        Format::Json => print_json(&json!({ "betti": ranks }))?,
    }
    Ok(Outcome::Success)
}

fn cmd_lyubeznik(args: LyubeznikArgs, limits: &Limits) -> Result<Outcome> {
    let loaded = load_ideal(&args.common.ideal)?;
    let q = loaded.ideal.num_generators();
    let order: Vec<usize> = match args.order {
        Some(order) => {
            if order.len() != q || index_set(&order, q)? != IndexSet::full(q) {
                bail!("--order must be a permutation of 1..={q}");
            }
            order
        }
        None => (1..=q).collect(),
    };
    let matching = lyubeznik_matching_with_limits(&loaded.ideal, &order, limits)?;
    let complex = morse_resolution_with_limits(&loaded.ideal, &matching, limits)?;
    match args.common.format {
        Format::Text => {
            println!("matching ({} edges):", matching.len());
            for (upper, lower) in matching.edges() {
                println!("  {upper} -> {lower}");
            }
            println!();
            print!("{}", render_complex(&complex, &loaded.vars));
        }
        Format::Json => {
            let mut doc = serde_json::to_value(complex_to_dto(&complex))?;
            let obj = doc.as_object_mut().expect("complex document is an object");
            obj.insert("order".into(), json!(order));
            obj.insert("matching".into(), matching_json(&matching));
            print_json(&doc)?;
        }
    }
    Ok(Outcome::Success)
}

fn matching_json(matching: &pivot_core::resolutions::MorseMatching) -> serde_json::Value {
    let edges: Vec<serde_json::Value> = matching
        .edges()
        .iter()
        .map(|(upper, lower)| json!({ "upper": upper.elements(), "lower": lower.elements() }))
        .collect();
    json!(edges)
}

fn cmd_morse(args: MorseArgs, limits: &Limits) -> Result<Outcome> {
    let loaded = load_ideal(&args.common.ideal)?;
    let (_raw, text) = read_text(&args.matching)?;
    let matching = parse::parse_matching(&text, loaded.ideal.num_generators())
        .map_err(|e| anyhow!("{}: {e}", args.matching.display()))?;
    let report = validate_matching_with_limits(&loaded.ideal, &matching, limits)?;
    if !report.valid {
        let violation = report.violation.expect("invalid matching carries a violation");
        match args.common.format {
            Format::Text => println!("invalid matching: {violation}"),
            Format::Json => {
                print_json(&json!({ "valid": false, "violation": violation.to_string() }))?
            }
        }
        return Ok(Outcome::Negative);
    }
    let complex = morse_resolution_with_limits(&loaded.ideal, &matching, limits)?;
    match args.common.format {
        Format::Text => {
            println!("matching: valid ({} edges)", matching.len());
            println!();
            print!("{}", render_complex(&complex, &loaded.vars));
        }
        Format::Json => {
            let mut doc = serde_json::to_value(complex_to_dto(&complex))?;
            let obj = doc.as_object_mut().expect("complex document is an object");
            obj.insert("valid".into(), json!(true));
            obj.insert("matching".into(), matching_json(&matching));
            print_json(&doc)?;
        }
    }
    Ok(Outcome::Success)
}

// ---------------------------------------------------------------------------
// Verification commands
// ---------------------------------------------------------------------------

fn cmd_verify(args: VerifyArgs, limits: &Limits) -> Result<Outcome> {
    let loaded = load_ideal(&args.common.ideal)?;
    if args.ci.is_some() && args.what != VerifyWhat::Homotopy {
        bail!("--ci applies only to --what homotopy");
    }

    let ci_input = match &args.ci {
        Some(path) => Some(load_ci(path, &loaded)?),
        None => None,
    };
    let mut inputs: Vec<&[u8]> = vec![&loaded.raw];
    if let Some((raw, _)) = &ci_input {
        inputs.push(raw);
    }
    let mut cert = Certificate::new(command_line(), &inputs);

    let pass = match args.what {
        VerifyWhat::D2 => {
            let complex = build_complex(&loaded, args.indices.as_deref(), limits)?;
            checks::check_d2(&complex, &loaded.vars, &mut cert)?
        }
        VerifyWhat::Exactness => {
            let complex = build_complex(&loaded, args.indices.as_deref(), limits)?;
            checks::check_exactness(&complex, &loaded.ideal, &loaded.vars, &mut cert)?
        }
        VerifyWhat::Dg => match args.indices.as_deref() {
            None => checks::check_taylor_dg(&loaded.ideal, &mut cert)?,
            Some(indices) => {
                let set = index_set(indices, loaded.ideal.num_generators())?;
                let (relabeling, _gap) = relabel_for_pivot(&loaded.ideal, set)?;
                let relabeled = relabeling.apply_ideal(&loaded.ideal);
                cert.add_note(&relabel_note(&relabeling));
                checks::check_pivot_dg(&relabeled, set.len(), &mut cert)?
            }
        },
        VerifyWhat::Homotopy => {
            let Some((_, ci_file)) = &ci_input else {
                bail!("--ci FILE is required for --what homotopy");
            };
            let build = build_homotopy(&loaded, ci_file, args.indices.as_deref(), limits)?;
            if let Some(note) = &build.relabel {
                cert.add_note(note);
            }
            let report = verify_homotopy(&build.system, &build.ci)?;
            for check in &report.checks {
                let witness = check.offense.as_ref().map(|o| offense_string(o, &loaded.vars));
                cert.push(check.identity.clone(), check.pass, witness);
            }
            report.all_pass()
        }
    };

    emit_certificate(&cert, args.common.format)?;
    Ok(if pass { Outcome::Success } else { Outcome::Negative })
}

#[derive(Serialize)]
struct MapComponentDoc {
    source_degree: usize,
    target_degree: usize,
    matrix: output::DifferentialDto,
}

#[derive(Serialize)]
struct HomotopyMapDoc {
    s: usize,
    components: Vec<MapComponentDoc>,
}

fn cmd_homotopy(args: HomotopyArgs, limits: &Limits) -> Result<Outcome> {
    let loaded = load_ideal(&args.common.ideal)?;
    let (ci_raw, ci_file) = load_ci(&args.ci, &loaded)?;
    let mut cert = Certificate::new(command_line(), &[&loaded.raw, &ci_raw]);

    let build = build_homotopy(&loaded, &ci_file, args.indices.as_deref(), limits)?;
    if let Some(note) = &build.relabel {
        cert.add_note(note);
    }
    let report = verify_homotopy(&build.system, &build.ci)?;
    for check in &report.checks {
        let witness = check.offense.as_ref().map(|o| offense_string(o, &loaded.vars));
        cert.push(check.identity.clone(), check.pass, witness);
    }

    let complex = build.system.complex();
    let top = complex.top_degree();
    let r = build.system.r();

    match args.common.format {
        Format::Text => {
            println!("r: {r}");
            let ranks: Vec<String> = complex.ranks().iter().map(|x| x.to_string()).collect();
            println!("complex ranks: {}", ranks.join(" "));
            println!();
            print!("{}", cert.render_text());
            for s in 1..=r {
                let rise = 2 * s - 1;
                for degree in 0..=top {
                    if degree + rise > top {
                        continue;
                    }
                    let matrix = build.system.map(s, degree);
                    if matrix.entries().next().is_none() {
                        continue;
                    }
                    let row_labels: Vec<String> = complex
                        .basis(degree + rise)
                        .iter()
                        .map(|l| output::cell_string(l.cell))
                        .collect();
                    let col_labels: Vec<String> =
                        complex.basis(degree).iter().map(|l| output::cell_string(l.cell)).collect();
                    println!(
                        "\nσ_{s}: degree {degree} -> degree {} ({} x {})",
                        degree + rise,
                        matrix.rows(),
                        matrix.cols()
                    );
                    print!("{}", render_matrix(matrix, &row_labels, &col_labels, &loaded.vars));
                }
            }
        }
        Format::Json => {
            let mut maps = Vec::new();
            for s in 1..=r {
                let rise = 2 * s - 1;
                let mut components = Vec::new();
                for degree in 0..=top {
                    if degree + rise > top {
                        continue;
                    }
                    let matrix = build.system.map(s, degree);
                    if matrix.entries().next().is_none() {
                        continue;
                    }
                    components.push(MapComponentDoc {
                        source_degree: degree,
                        target_degree: degree + rise,
                        matrix: matrix_to_dto(matrix),
                    });
                }
                maps.push(HomotopyMapDoc { s, components });
            }
            print_json(&json!({
                "r": r,
                "ranks": complex.ranks(),
                "certificate": cert,
                "maps": maps,
            }))?;
        }
    }
    Ok(if report.all_pass() { Outcome::Success } else { Outcome::Negative })
}

fn parse_bound(text: &str, nvars: usize) -> Result<Multidegree> {
    let parts: Result<Vec<u32>> = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| anyhow!("--exactness-bound entries must be unsigned integers, got `{p}`"))
        })
        .collect();
    let parts = parts?;
    let exps = if parts.len() == 1 {
        vec![parts[0]; nvars]
    } else if parts.len() == nvars {
        parts
    } else {
        bail!("--exactness-bound needs 1 or {nvars} entries (one per variable), got {}", parts.len());
    };
    Ok(Multidegree::new(exps))
}

fn cmd_shamash(args: ShamashArgs, limits: &Limits) -> Result<Outcome> {
    let loaded = load_ideal(&args.common.ideal)?;
    let (ci_raw, ci_file) = load_ci(&args.ci, &loaded)?;

    // Regularity gate: the lift is exact over the quotient only when the
    // elements form a regular sequence. Pairwise-coprime monomials are
    // certified automatically; anything else needs the caller's assertion.
    let probe = build_ci(&loaded.ideal, &ci_file)?;
    let regular = monomial_ci_multidegrees(&probe);
    if let Err(reason) = &regular {
        if args.exactness_bound.is_some() {
            bail!(
                "--exactness-bound requires pairwise-coprime monomial elements \
                 (strands are finite-dimensional only there): {reason}"
            );
        }
        if !args.trust_regular {
            bail!(
                "cannot certify that the elements form a regular sequence: {reason}. \
                 The lifted complex is exact over the quotient only for a regular \
                 sequence; pass --trust-regular to assert this yourself. \
                 The differential certificate is checked either way."
            );
        }
    }

    let build = build_homotopy(&loaded, &ci_file, args.indices.as_deref(), limits)?;
    let shamash = shamash_complex(&build.system, &build.ci, args.truncate)?;

    let mut cert = Certificate::new(command_line(), &[&loaded.raw, &ci_raw]);
    if let Some(note) = &build.relabel {
        cert.add_note(note);
    }
    cert.push(
        "homotopy identities hold (σ_0² = 0, ∂σ_s + σ_s∂ = a_s·id, mixed anticommutators vanish)",
        true,
        None,
    );
    match shamash.certify_square(&build.ci) {
        Ok(()) => cert.push(
            "δ_{i-1}·δ_i = Σ_s a_s·(t_s-contraction) entrywise for 2 ≤ i ≤ truncation",
            true,
            None,
        ),
        Err(e) => cert.push(
            "δ_{i-1}·δ_i = Σ_s a_s·(t_s-contraction) entrywise for 2 ≤ i ≤ truncation",
            false,
            Some(e.to_string()),
        ),
    }

    let mut exactness_doc = None;
    if let Some(bound_text) = &args.exactness_bound {
        let bound = parse_bound(bound_text, loaded.ideal.nvars())?;
        let report = verify_shamash_exactness(&shamash, &build.ci, &bound)?;
        let witness = report.failures.first().map(|f| {
            format!(
                "strand at {}: homological degree {}, kernel dimension {} vs incoming rank {}",
                f.multidegree.format_with(&loaded.vars),
                f.degree,
                f.kernel_dim,
                f.image_rank
            )
        });
        cert.push(
            format!(
                "strand homology over the quotient vanishes in degrees {}..{} \
                 ({} strands up to {}, {} rank checks)",
                report.degrees.0,
                report.degrees.1,
                report.strands,
                bound.format_with(&loaded.vars),
                report.checks
            ),
            report.all_pass(),
            witness,
        );
        exactness_doc = Some(json!({
            "strands": report.strands,
            "checks": report.checks,
            "degrees": [report.degrees.0, report.degrees.1],
            "all_pass": report.all_pass(),
            "failures": report.failures.iter().map(|f| json!({
                "multidegree": f.multidegree.exponents(),
                "degree": f.degree,
                "kernel_dim": f.kernel_dim,
                "image_rank": f.image_rank,
            })).collect::<Vec<_>>(),
        }));
    }

    match args.common.format {
        Format::Text => {
            println!("truncation: {}", shamash.truncation());
            println!("r: {}", shamash.r());
            let ranks: Vec<String> = shamash.ranks().iter().map(|x| x.to_string()).collect();
            println!("ranks: {}", ranks.join(" "));
            println!();
            print!("{}", cert.render_text());
        }
        Format::Json => {
            let mut doc = json!({
                "truncation": shamash.truncation(),
                "r": shamash.r(),
                "ranks": shamash.ranks(),
                "certificate": cert,
            });
            if let Some(exactness) = exactness_doc {
                doc.as_object_mut().unwrap().insert("exactness".into(), exactness);
            }
            print_json(&doc)?;
        }
    }
    Ok(if cert.all_pass() { Outcome::Success } else { Outcome::Negative })
}

fn cmd_bounds(args: BoundsArgs, limits: &Limits) -> Result<Outcome> {
    let loaded = load_ideal(&args.common.ideal)?;
    if args.r == 0 {
        bail!("--r must be at least 1");
    }
    let q = loaded.ideal.num_generators();
    let scarf = scarf_number_with_limits(&loaded.ideal, limits)?;
    let l = match scarf {
        ScarfNumber::Finite(l) if l < q => l,
        ScarfNumber::Finite(l) => {
            match args.common.format {
                Format::Text => println!(
                    "no bound: the smallest lcm-sharing subset is the full generating \
                     set (size {l} of {q}); the pivot bound needs a proper subset"
                ),
                Format::Json => print_json(&json!({ "scarf": l, "rows": null }))?,
            }
            return Ok(Outcome::Negative);
        }
        ScarfNumber::Infinite => {
            match args.common.format {
                Format::Text => println!(
                    "no bound: every generator subset has a distinct lcm, so the full \
                     simplex resolution is already minimal and no pivot bound applies"
                ),
                Format::Json => print_json(&json!({ "scarf": null, "rows": null }))?,
            }
            return Ok(Outcome::Negative);
        }
    };

    let rows: Vec<(usize, u128, u128)> = (0..=args.max_degree)
        .map(|degree| {
            (
                degree,
                betti_bound(q, l, args.r, degree, BoundMode::Literal),
                betti_bound(q, l, args.r, degree, BoundMode::Structural),
            )
        })
        .collect();

    match args.common.format {
        Format::Text => {
            println!("generators: {q}");
            println!("scarf number: {l}");
            println!("regular sequence length: {}", args.r);
            println!();
            println!("{:>6}  {:>20}  {:>20}", "degree", "literal", "structural");
            for (degree, literal, structural) in &rows {
                println!("{degree:>6}  {literal:>20}  {structural:>20}");
            }
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(degree, literal, structural)| {
                    json!({
                        "degree": degree,
                        "literal": literal.to_string(),
                        "structural": structural.to_string(),
                    })
                })
                .collect();
            print_json(&json!({
                "q": q,
                "scarf": l,
                "r": args.r,
                "rows": rows,
            }))?;
        }
    }
    Ok(Outcome::Success)
}
