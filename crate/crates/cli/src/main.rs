use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gcover::cover::{build_cover, CoverSpec, CoverSpecInput, Word};
use gcover::diagnostics::{
    diagnose, normalize_dual, DiagnoseOptions, DiagnosticsReport, Status, DEFAULT_MAX_WORD_LEN,
};
use gcover::group::GroupInput;
use gcover::hermitian::{gamma_generators, SkewHermitianModule};
use gcover::homology::homology;
use gcover::linalg::is_prime;
use gcover::repr::{central_idempotents, BlockSummary};
use gcover::twist::{
    complete_to_hyperbolic, d_beta_check, gamma_ab_generators, multi_twist, NamedMatrixSummary,
};
use gcover::FiniteGroup;
use serde::{Deserialize, Serialize};

/// Exact computations on finite group algebras and equivariant homology of
/// branched surface covers.
#[derive(Parser)]
#[command(name = "gcover", version)]
struct Cli {
    /// Emit JSON instead of a human-readable table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite-group utilities.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Wedderburn blocks of ℚG with indicators and exceptional labels.
    Decompose(GroupArgs),
    /// Generators of Γ(G) on the hyperbolic plane over ℤG.
    Gamma(GroupArgs),
    /// Cover construction.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Multi-twist, the D^β double computation and the Γ(a) generators.
    Twists(CurveArgs),
    /// Full diagnostic pipeline; exit 0 on pass, 2 if inconclusive, 1 on failure.
    Diagnose(DiagnoseArgs),
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Order, classes, element orders and a generating set.
    Info(GroupArgs),
}

#[derive(Subcommand)]
enum CoverCommand {
    /// Genus, Euler characteristic, intersection form and deck matrices.
    Build(SpecArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// A named group (Z<n>, V4, S3, D4, Q8, A4, Dic3, ...).
    #[arg(long, conflicts_with = "spec")]
    group: Option<String>,
    /// Group JSON: a name, {"order", "table", "labels"} or {"permutations"};
    /// a cover spec is accepted too.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct SpecArgs {
    /// Cover spec JSON.
    #[arg(long)]
    spec: PathBuf,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Word of the trivialised curve α (overrides the spec's "alpha").
    #[arg(long)]
    alpha: Option<String>,
    /// Words of duals β (repeatable; overrides the spec's "betas").
    #[arg(long = "beta")]
    betas: Vec<String>,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    curves: CurveArgs,
    /// Word-length bound for membership searches and lattice growth.
    #[arg(long, default_value_t = DEFAULT_MAX_WORD_LEN, value_parser = clap::value_parser!(usize))]
    max_word_len: usize,
    /// Primes for the mod-ℓ checks.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
    primes: Vec<u64>,
}

/// Cover spec plus optional curve words.
#[derive(Deserialize)]
struct SpecFile {
    #[serde(flatten)]
    cover: CoverSpecInput,
    #[serde(default)]
    alpha: Option<String>,
    #[serde(default)]
    betas: Vec<String>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_spec(path: &Path) -> Result<SpecFile> {
    serde_json::from_str(&read(path)?)
        .with_context(|| format!("parsing cover spec {}", path.display()))
}

fn load_group(args: &GroupArgs) -> Result<Arc<FiniteGroup>> {
    let g = match (&args.group, &args.spec) {
        (Some(name), _) => FiniteGroup::named(name)?,
        (None, Some(path)) => {
            let text = read(path)?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            // a cover spec carries its group under "group"
            let group = value
                .get("group")
                .filter(|_| value.get("genus").is_some())
                .unwrap_or(&value);
            let input: GroupInput =
                serde_json::from_value(group.clone()).context("not a group description")?;
            input.build()?
        }
        (None, None) => bail!("one of --group or --spec is required"),
    };
    Ok(Arc::new(g))
}

fn curves(file: &SpecFile, args: &CurveArgs) -> Result<(Word, Vec<Word>)> {
    let alpha = args
        .alpha
        .as_ref()
        .or(file.alpha.as_ref())
        .context("no curve α: pass --alpha or set \"alpha\"")?;
    let betas = if args.betas.is_empty() {
        &file.betas
    } else {
        &args.betas
    };
    let betas = betas
        .iter()
        .map(|w| Word::parse(w))
        .collect::<gcover::Result<Vec<_>>>()?;
    Ok((Word::parse(alpha)?, betas))
}

/// `writeln!` into a `String`, which cannot fail.
macro_rules! line {
    ($o:expr, $($t:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($o, $($t)*);
    }};
}

/// Writes the report; a closed pipe (e.g. `| head`) is not an error.
fn emit<T: Serialize>(json: bool, value: &T, human: impl FnOnce(&mut String)) -> Result<()> {
    let mut out = String::new();
    if json {
        out = serde_json::to_string_pretty(value)? + "\n";
    } else {
        human(&mut out);
    }
    match std::io::stdout().lock().write_all(out.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_matrix(o: &mut String, rows: &[Vec<i64>], indent: &str) {
    for r in rows {
        let cells: Vec<String> = r.iter().map(|x| format!("{x:>3}")).collect();
        line!(o, "{indent}[{}]", cells.join(" "));
    }
}

fn group_info(json: bool, args: &GroupArgs) -> Result<ExitCode> {
    let s = load_group(args)?.summary();
    emit(json, &s, |o| {
        line!(
            o,
            "order {}  abelian {}  involutions {}",
            s.order,
            s.abelian,
            s.involutions
        );
        line!(o, "generators: {}", s.generators.join(", "));
        line!(o, "classes:");
        for c in &s.classes {
            line!(
                o,
                "  {{{}}}  order {}",
                c.join(", "),
                s.element_orders[&c[0]]
            );
        }
    })?;
    Ok(ExitCode::SUCCESS)
}

fn decompose(json: bool, args: &GroupArgs) -> Result<ExitCode> {
    let g = load_group(args)?;
    let blocks: Vec<BlockSummary> = central_idempotents(&g)?
        .iter()
        .map(|b| b.summary())
        .collect();
    emit(
        json,
        &serde_json::json!({ "order": g.order(), "blocks": blocks }),
        |o| {
            line!(
                o,
                "{:>5} {:>5} {:>9} {:>7} {:>9} {:>6}  label",
                "block",
                "dim",
                "min ideal",
                "center",
                "indicator",
                "image"
            );
            for b in &blocks {
                line!(
                    o,
                    "{:>5} {:>5} {:>9} {:>7} {:>9} {:>6}  {}",
                    b.index,
                    b.dim_q,
                    b.min_ideal_dim,
                    b.center_degree,
                    b.indicator_sign,
                    b.g_image_order,
                    b.exceptional_label.as_str()
                );
            }
        },
    )?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct GammaGenerator {
    name: String,
    r_form: Vec<Vec<String>>,
    expanded: Vec<Vec<i64>>,
    unitary: bool,
}

fn gamma(json: bool, args: &GroupArgs) -> Result<ExitCode> {
    let g = load_group(args)?;
    let h2 = SkewHermitianModule::hyperbolic(&g);
    let gens: Vec<GammaGenerator> = gamma_generators(&g)
        .into_iter()
        .map(|n| GammaGenerator {
            r_form: (0..2)
                .map(|i| (0..2).map(|j| n.matrix.entry(i, j).to_string()).collect())
                .collect(),
            expanded: n.matrix.expand().to_i64_rows(),
            unitary: n.matrix.is_unitary(&h2),
            name: n.name,
        })
        .collect();
    let ok = gens.iter().all(|x| x.unitary);
    emit(
        json,
        &serde_json::json!({ "order": g.order(), "generators": gens }),
        |o| {
            for x in &gens {
                line!(o, "{}  (unitary: {})", x.name, x.unitary);
                for r in &x.r_form {
                    line!(o, "  [{}]", r.join(", "));
                }
                print_matrix(o, &x.expanded, "    ");
            }
        },
    )?;
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cover_build(json: bool, args: &SpecArgs) -> Result<ExitCode> {
    let spec = load_spec(&args.spec)?.cover.build()?;
    let h = homology(&build_cover(&spec)?)?;
    let s = h.summary();
    emit(json, &s, |o| {
        line!(
            o,
            "genus {}  rank H1 {}  euler characteristic {}",
            s.genus,
            s.rank,
            s.euler_characteristic
        );
        line!(o, "intersection form:");
        print_matrix(o, &s.intersection, "  ");
        for (label, m) in &s.actions {
            line!(o, "deck {label}:");
            print_matrix(o, m, "  ");
        }
    })?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DBetaReport {
    h: String,
    agree: bool,
    matrix: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct DualReport {
    beta: String,
    normalization: String,
    generators: Vec<NamedMatrixSummary>,
}

#[derive(Serialize)]
struct TwistsReport {
    alpha: String,
    multi_twist: Vec<Vec<i64>>,
    d_beta: Vec<DBetaReport>,
    duals: Vec<DualReport>,
}

fn twists(json: bool, args: &CurveArgs) -> Result<ExitCode> {
    let file = load_spec(&args.spec.spec)?;
    let (alpha, betas) = curves(&file, args)?;
    let spec: CoverSpec = file.cover.build()?;
    let h = homology(&build_cover(&spec)?)?;
    let g = h.group().clone();
    let a = h.lift_class(&alpha)?;
    let mut d_beta = Vec::new();
    for k in 0..g.order() {
        let c = d_beta_check(&h, &a, k)?;
        d_beta.push(DBetaReport {
            h: g.label(k).to_string(),
            agree: c.agree(),
            matrix: c.algebraic.matrix().to_i64_rows(),
        });
    }
    let mut duals = Vec::new();
    for beta in &betas {
        let (b0, normalization) = normalize_dual(&h, &a, &h.lift_class(beta)?)?;
        let pair = complete_to_hyperbolic(&h, &a, &b0)?;
        let generators = gamma_ab_generators(&h, &pair)?
            .iter()
            .map(|n| n.summary())
            .collect();
        duals.push(DualReport {
            beta: beta.to_string(),
            normalization,
            generators,
        });
    }
    let report = TwistsReport {
        alpha: alpha.to_string(),
        multi_twist: multi_twist(&h, &a)?.matrix().to_i64_rows(),
        d_beta,
        duals,
    };
    let ok = report.d_beta.iter().all(|d| d.agree);
    emit(json, &report, |o| {
        line!(o, "multi-twist along the preimage of {}:", report.alpha);
        print_matrix(o, &report.multi_twist, "  ");
        for d in &report.d_beta {
            line!(
                o,
                "D^beta, h = {}: algebraic and geometric {}",
                d.h,
                if d.agree { "agree" } else { "DISAGREE" }
            );
        }
        for d in &report.duals {
            line!(
                o,
                "dual {} (normalised by '{}'): {} generators",
                d.beta,
                d.normalization,
                d.generators.len()
            );
            for n in &d.generators {
                line!(o, "  {}", n.name);
            }
        }
    })?;
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn print_report(o: &mut String, r: &DiagnosticsReport) {
    let yes = |s: Status| match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Inconclusive => "inconclusive",
    };
    line!(
        o,
        "cover: genus {}, rank {}; α = {}",
        r.homology.genus,
        r.homology.rank,
        r.alpha
    );
    for p in &r.pairs {
        line!(
            o,
            "  dual {} (normalised by '{}'), λ = {:?}",
            p.beta,
            p.normalization,
            p.lambda
        );
    }
    line!(
        o,
        "generators: Γ_o(a) {}, Γ(a) {}",
        r.gamma_o_generators,
        r.gamma_generators
    );
    line!(
        o,
        "span of ℚG·a + Σ ℚG·b: {} / {}  {}",
        r.span.dim,
        r.span.ambient,
        yes(r.span.status)
    );
    line!(
        o,
        "fixed vectors of Γ_o(a): {}  {}",
        r.fixed_gamma_o.dim,
        yes(r.fixed_gamma_o.status)
    );
    for v in &r.mod_l {
        line!(
            o,
            "mod {} fixed vectors of Γ(a): {}  {}",
            v.prime,
            v.dim,
            yes(v.status)
        );
    }
    for v in &r.mod_l_gamma_o {
        line!(
            o,
            "mod {} fixed vectors of Γ_o(a): {}  (informational)",
            v.prime,
            v.dim
        );
    }
    for v in &r.irreducibility {
        line!(
            o,
            "block {}: component {}, algebra {} / {}  {}",
            v.block_index,
            v.component_dim,
            v.algebra_dim,
            v.target_dim,
            yes(v.status)
        );
    }
    line!(
        o,
        "lattice growth {:?}, orthogonal pair {:?}, proviso {}  {}",
        r.generation.lattice.rank_by_length,
        r.generation.orthogonal_pair,
        r.generation.proviso_satisfied,
        yes(r.generation.status)
    );
    if !r.exceptional_blocks.is_empty() {
        line!(
            o,
            "exceptional blocks (flagged only): {:?}",
            r.exceptional_blocks
        );
    }
    line!(o, "status: {}", yes(r.status));
}

fn run_diagnose(json: bool, args: &DiagnoseArgs) -> Result<ExitCode> {
    if args.max_word_len == 0 {
        bail!("--max-word-len must be positive");
    }
    if let Some(p) = args.primes.iter().find(|&&p| !is_prime(p)) {
        bail!("--primes: {p} is not prime");
    }
    let file = load_spec(&args.curves.spec.spec)?;
    let (alpha, betas) = curves(&file, &args.curves)?;
    let spec = file.cover.build()?;
    let opts = DiagnoseOptions {
        max_word_len: args.max_word_len,
        primes: args.primes.clone(),
        ..Default::default()
    };
    let report = diagnose(&spec, &alpha, &betas, &opts)?;
    emit(json, &report, |o| print_report(o, &report))?;
    Ok(match report.status {
        Status::Pass => ExitCode::SUCCESS,
        Status::Inconclusive => ExitCode::from(2),
        Status::Fail => ExitCode::from(1),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Group(GroupCommand::Info(a)) => group_info(cli.json, a),
        Command::Decompose(a) => decompose(cli.json, a),
        Command::Gamma(a) => gamma(cli.json, a),
        Command::Cover(CoverCommand::Build(a)) => cover_build(cli.json, a),
        Command::Twists(a) => twists(cli.json, a),
        Command::Diagnose(a) => run_diagnose(cli.json, a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(1)
    })
}
