use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use soag_core::code::{
    build_code, dual_membership_witnesses, min_weight, read_matrix_file, write_matrix_file, CodeSweep, EvaluationCode,
    MinWeightMode, DEFAULT_SAMPLES, DEFAULT_SEED,
};
use soag_core::curve::cache::PointCache;
use soag_core::curve::{make_descriptor, CurveDescriptor, CurveInstance, Gk};
use soag_core::quantum::{
    gv_check, gv_full_sum, stabilizer_from_self_orthogonal, theorem_table, verify_table, write_csv,
};
use soag_core::rr::{select_basis, DivisorSpec};
use soag_core::swiss::{build_swiss_data, simple_zero_certificate, SwissData};

/// Fields at least this large hold the slow-tier instances.
const SLOW_FIELD_SIZE: u64 = 1024;

#[derive(Parser, Debug)]
#[command(name = "soag", version, about = "Self-orthogonal AG codes on maximal curves")]
struct Cli {
    /// Point cache directory (default: $SOAG_CACHE_DIR, else .soag-cache)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Allow instances over GF(1024) and larger
    #[arg(long, global = true)]
    slow: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Instance {
    #[arg(long)]
    family: String,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WeightMode {
    Exact,
    Sampled,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate rational places and check maximality
    Points {
        #[command(flatten)]
        inst: Instance,
    },
    /// Divisor data of the self-orthogonality construction
    Swiss {
        #[command(flatten)]
        inst: Instance,
    },
    /// Monomial basis of L(sP) over the infinite places
    Basis {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        s: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build C(D, G), or load a code from a matrix file
    Code {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        s: Option<u64>,
        /// Matrix file to analyse instead of building a code
        #[arg(long, conflicts_with_all = ["family", "s"])]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Emit a parity-check matrix instead of the generator
        #[arg(long)]
        dual: bool,
        #[arg(long, value_enum)]
        min_weight: Option<WeightMode>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Check the dual description with explicit witnesses
        #[arg(long)]
        witnesses: bool,
    },
    /// Closed-form stabilizer code table, optionally checked against constructions
    QuantumTable {
        #[command(flatten)]
        inst: Instance,
        /// Inclusive range `a..b`
        #[arg(long, value_parser = parse_range)]
        s_range: Option<(u64, u64)>,
        #[arg(long)]
        verify: bool,
        /// Add Gilbert-Varshamov verdicts (GK: only the corollary regime unless --s-range)
        #[arg(long)]
        gv: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Quantum Gilbert-Varshamov check for one parameter set
    GvCheck {
        /// Alphabet size Q
        #[arg(long, required_unless_present = "family")]
        alphabet: Option<u64>,
        #[arg(long = "length", required_unless_present = "family")]
        length: Option<u64>,
        #[arg(long, required_unless_present = "family")]
        k: Option<i64>,
        #[arg(long, required_unless_present = "family")]
        d: Option<i64>,
        /// Take N, k, d from a family's table row instead
        #[arg(long, requires_all = ["q", "s"])]
        family: Option<String>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        s: Option<u64>,
        /// Skip the dominant-term certificate
        #[arg(long)]
        full_sum: bool,
    },
}

fn parse_range(text: &str) -> Result<(u64, u64), String> {
    let (a, b) = text.split_once("..").ok_or_else(|| format!("expected a..b, got {text}"))?;
    let a = a.trim().parse::<u64>().map_err(|e| e.to_string())?;
    let b = b.trim().trim_start_matches('=').parse::<u64>().map_err(|e| e.to_string())?;
    if a > b {
        return Err(format!("empty range {text}"));
    }
    Ok((a, b))
}

struct Ctx {
    cache: PointCache,
    slow: bool,
}

impl Ctx {
    fn descriptor(&self, family: &str, q: u64, n: Option<u32>) -> anyhow::Result<CurveDescriptor> {
        let desc = make_descriptor(family, q, n)?;
        if desc.field_size >= SLOW_FIELD_SIZE && !self.slow {
            bail!("{} lives over GF({}); pass --slow to build it", desc.label(), desc.field_size);
        }
        Ok(desc)
    }

    fn instance(&self, inst: &Instance) -> anyhow::Result<CurveInstance> {
        let desc = self.descriptor(&inst.family, inst.q, inst.n)?;
        let (instance, outcome) = self.cache.instance(desc)?;
        eprintln!("cache: {outcome:?} ({})", self.cache.path_for(&instance.descriptor).display());
        Ok(instance)
    }

    fn swiss(&self, inst: &Instance) -> anyhow::Result<SwissData> {
        Ok(build_swiss_data(&self.instance(inst)?)?)
    }
}

fn print_notes(desc: &CurveDescriptor) -> Vec<String> {
    let notes = desc.family.notes(desc);
    for n in &notes {
        eprintln!("note: {n}");
    }
    notes
}

fn emit_json(v: &Value) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn failure(kind: &str, detail: Value) {
    eprintln!("{}", json!({ "failure": kind, "detail": detail }));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let cache = cli.cache_dir.clone().map_or_else(PointCache::from_env, PointCache::new);
    let ctx = Ctx { cache, slow: cli.slow };
    match run(&ctx, cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", json!({ "error": format!("{e:#}") }));
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when a requested check failed.
fn run(ctx: &Ctx, command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Points { inst } => cmd_points(ctx, &inst),
        Command::Swiss { inst } => cmd_swiss(ctx, &inst),
        Command::Basis { inst, s, format } => cmd_basis(ctx, &inst, s, format),
        Command::Code { family, q, n, s, input, format, dual, min_weight, samples, seed, witnesses } => {
            let mode = min_weight.map(|m| match m {
                WeightMode::Exact => MinWeightMode::Exact,
                WeightMode::Sampled => MinWeightMode::Sampled { samples, seed },
            });
            let opts = CodeOpts { format, dual, mode, witnesses };
            match (input, family) {
                (Some(path), _) => cmd_code_file(&path, &opts),
                (None, Some(family)) => {
                    let q = q.context("--q is required with --family")?;
                    let s = s.context("--s is required with --family")?;
                    cmd_code(ctx, &Instance { family, q, n }, s, &opts)
                }
                (None, None) => bail!("give either --family/--q/--s or --input"),
            }
        }
        Command::QuantumTable { inst, s_range, verify, gv, format } => {
            cmd_quantum_table(ctx, &inst, s_range, verify, gv, format)
        }
        Command::GvCheck { alphabet, length, k, d, family, q, n, s, full_sum } => {
            let (alphabet, length, k, d) = match family {
                Some(family) => {
                    let desc = make_descriptor(&family, q.unwrap(), n)?;
                    let s = s.unwrap();
                    let row = desc
                        .family
                        .theorem_row(&desc, s)
                        .with_context(|| format!("s = {s} outside the table of {}", desc.label()))?;
                    (desc.field_size, row.n, row.k, row.d)
                }
                None => (alphabet.unwrap(), length.unwrap(), k.unwrap(), d.unwrap()),
            };
            let result = if full_sum { gv_full_sum(alphabet, length, k, d) } else { gv_check(alphabet, length, k, d) };
            emit_json(&json!({ "alphabet": alphabet, "N": length, "k": k, "d": d, "gv": result }))?;
            Ok(true)
        }
    }
}

fn cmd_points(ctx: &Ctx, inst: &Instance) -> anyhow::Result<bool> {
    let instance = ctx.instance(inst)?;
    let desc = &instance.descriptor;
    let report = instance.maximality();
    let ok = instance.total_places() == desc.expected_places;
    emit_json(&json!({
        "family": desc.family_name(),
        "q": desc.q,
        "n": desc.n,
        "field_size": desc.field_size,
        "genus": desc.genus,
        "affine": instance.places.len(),
        "infinite": desc.infinite.count,
        "total": instance.total_places(),
        "expected": desc.expected_places,
        "hasse_weil": report.hasse_weil,
        "maximal": report.maximal,
    }))?;
    if !ok {
        failure("place-count", json!({ "observed": instance.total_places(), "expected": desc.expected_places }));
    }
    Ok(ok)
}

fn cmd_swiss(ctx: &Ctx, inst: &Instance) -> anyhow::Result<bool> {
    let swiss = ctx.swiss(inst)?;
    let notes = print_notes(&swiss.descriptor);
    let report = swiss.report();
    let certificate = simple_zero_certificate(&swiss);
    let mut v = serde_json::to_value(&report)?;
    v["simple_zero"] = serde_json::to_value(&certificate)?;
    v["notes"] = json!(notes);
    emit_json(&v)?;
    let mut ok = certificate.passed;
    for c in report.checks.iter().filter(|c| !c.passed) {
        failure("closed-form", serde_json::to_value(c)?);
        ok = false;
    }
    Ok(ok)
}

fn cmd_basis(ctx: &Ctx, inst: &Instance, s: u64, format: Format) -> anyhow::Result<bool> {
    let swiss = ctx.swiss(inst)?;
    let desc = &swiss.descriptor;
    let g = DivisorSpec::at_infinity(desc, s);
    let basis = select_basis(desc, &g, &swiss.field, &swiss.d_places)?;
    match format {
        Format::Matrix => write_matrix_file(&swiss.field, &basis.evaluations, io::stdout().lock())?,
        Format::Json => {
            let monomials: Vec<Value> = basis
                .monomials
                .iter()
                .map(|m| json!({ "monomial": m.display(desc), "exponents": m.exps, "pole_orders": m.per_place_poles(desc) }))
                .collect();
            let deg = g.degree() as i64;
            let riemann_roch = (deg > desc.canonical_degree()).then(|| deg + 1 - desc.genus as i64);
            emit_json(&json!({
                "family": desc.family_name(),
                "q": desc.q,
                "n": desc.n,
                "s": s,
                "deg_G": deg,
                "genus": desc.genus,
                "dimension": basis.dimension(),
                "riemann_roch_dimension": riemann_roch,
                "monomials": monomials,
            }))?;
        }
        Format::Csv => bail!("basis supports --format json or matrix"),
    }
    Ok(true)
}

struct CodeOpts {
    format: Format,
    dual: bool,
    mode: Option<MinWeightMode>,
    witnesses: bool,
}

fn code_summary(code: &EvaluationCode, opts: &CodeOpts) -> anyhow::Result<Value> {
    let mut v = json!({
        "length": code.length(),
        "dimension": code.dimension(),
        "designed_distance": code.designed_distance(),
        "designed_dual_distance": code.designed_dual_distance(),
        "self_orthogonal": code.is_self_orthogonal(),
    });
    if let Some(mode) = opts.mode {
        v["min_weight"] = serde_json::to_value(min_weight(code, mode)?)?;
    }
    if code.source.is_some() && code.is_self_orthogonal() {
        v["stabilizer"] = serde_json::to_value(stabilizer_from_self_orthogonal(code)?)?;
    }
    Ok(v)
}

fn emit_code(code: &EvaluationCode, mut summary: impl FnMut() -> anyhow::Result<Value>, opts: &CodeOpts) -> anyhow::Result<()> {
    match opts.format {
        Format::Matrix if opts.dual => write_matrix_file(&code.field, &code.dual_code(), io::stdout().lock())?,
        Format::Matrix => code.write_matrix(io::stdout().lock())?,
        Format::Json => emit_json(&summary()?)?,
        Format::Csv => bail!("code supports --format json or matrix"),
    }
    Ok(())
}

fn cmd_code(ctx: &Ctx, inst: &Instance, s: u64, opts: &CodeOpts) -> anyhow::Result<bool> {
    let swiss = ctx.swiss(inst)?;
    let desc = &swiss.descriptor;
    let g = DivisorSpec::at_infinity(desc, s);
    let code = build_code(&swiss, &g)?;
    let mut ok = true;
    let witness = if opts.witnesses {
        let report = dual_membership_witnesses(&swiss, &g)?;
        if !report.passed {
            failure("dual-witnesses", serde_json::to_value(&report)?);
            ok = false;
        }
        Some(report)
    } else {
        None
    };
    emit_code(
        &code,
        || {
            let mut v = code_summary(&code, opts)?;
            v["family"] = json!(desc.family_name());
            v["q"] = json!(desc.q);
            v["n"] = json!(desc.n);
            v["s"] = json!(s);
            if let Some(w) = &witness {
                v["witnesses"] = serde_json::to_value(w)?;
            }
            Ok(v)
        },
        opts,
    )?;
    Ok(ok)
}

fn cmd_code_file(path: &PathBuf, opts: &CodeOpts) -> anyhow::Result<bool> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let code = read_matrix_file(BufReader::new(file))?;
    emit_code(&code, || code_summary(&code, opts), opts)?;
    Ok(true)
}

fn cmd_quantum_table(
    ctx: &Ctx,
    inst: &Instance,
    s_range: Option<(u64, u64)>,
    verify: bool,
    gv: bool,
    format: Format,
) -> anyhow::Result<bool> {
    // the table itself is closed-form, so only --verify needs the slow gate
    let desc = if verify { ctx.descriptor(&inst.family, inst.q, inst.n)? } else { make_descriptor(&inst.family, inst.q, inst.n)? };
    let (lo, hi) = desc.family.theorem_range(&desc).with_context(|| format!("no table for {}", desc.label()))?;
    let mut range = s_range;
    if gv && range.is_none() && desc.family_name() == "gk" {
        let start = Gk::gv_violation_start(desc.q);
        if start <= hi {
            range = Some((start, hi));
        } else {
            eprintln!("note: the Gilbert-Varshamov violation regime s >= {start} is empty for q = {} (s_max = {hi})", desc.q);
        }
    }
    if let Some((a, b)) = range {
        if verify && b > hi {
            bail!("--s-range {a}..{b} reaches past s_max = {hi}; self-orthogonality is only claimed up to s_max");
        }
        if b < lo || a > hi {
            eprintln!("note: {a}..{b} misses the table range {lo}..{hi}");
        }
    }
    print_notes(&desc);
    let rows = theorem_table(&desc, range, gv)?;

    let mut ok = true;
    if verify {
        let instance = ctx.instance(&Instance { family: inst.family.clone(), q: inst.q, n: inst.n })?;
        let swiss = build_swiss_data(&instance)?;
        let mismatches = verify_table(&swiss, &rows)?;
        for m in &mismatches {
            failure("table-row", serde_json::to_value(m)?);
        }
        ok = mismatches.is_empty();
        eprintln!("verified {} of {} rows", rows.len() - count_rows(&mismatches), rows.len());
        report_boundary(&swiss, hi);
    }

    match format {
        Format::Csv => write_csv(&rows, io::stdout().lock())?,
        Format::Json => emit_json(&serde_json::to_value(&rows)?)?,
        Format::Matrix => bail!("quantum-table supports --format csv or json"),
    }
    Ok(ok)
}

fn count_rows(mismatches: &[soag_core::quantum::Mismatch]) -> usize {
    let mut s: Vec<u64> = mismatches.iter().map(|m| m.s).collect();
    s.dedup();
    s.len()
}

/// Largest `s` whose code is still self-orthogonal, looking a little past
/// the proven bound. Reported as data only.
fn report_boundary(swiss: &SwissData, s_max: u64) {
    let desc = &swiss.descriptor;
    let n = swiss.deg_d;
    let r = desc.infinite.count as u64;
    let top = (s_max + (s_max / 10).max(10)).min((n - 1) / r);
    match CodeSweep::new(swiss, top) {
        Ok(sweep) => match sweep.observed_boundary() {
            Some(b) if b == top => eprintln!("observed self-orthogonality boundary: s >= {b} (searched to {top}, s_max = {s_max})"),
            Some(b) => eprintln!("observed self-orthogonality boundary: s = {b} (s_max = {s_max})"),
            None => eprintln!("observed self-orthogonality boundary: none"),
        },
        Err(e) => eprintln!("observed self-orthogonality boundary: unavailable ({e})"),
    }
}
