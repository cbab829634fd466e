//! `comb`: audits, builds and queries combings of finitely generated groups.
//!
//! Exit status is 0 on success, 1 when a verification fails, and 2 on usage,
//! configuration or input errors.

mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use combing::atlas::{builtin_combing, builtin_group, zn_straightline_language, BuiltinGroupId, CombingId};
use combing::combing::{verify, CombingSpec, CombingType, Lang, RegularLanguage, Relabeled, VerifyOptions};
use combing::constructions::{bijectivize_shortlex, check_condition_star, direct_product, free_product};
use combing::group::{ball, evaluate, GeneratorSet};
use combing::machines::{regular_combine, CombineOp, Fsa};
use combing::models::{ActionData, FreeAbelian, MatrixSemidirect, NamedElement, Regenerated};
use combing::par::{with_threads, Parallelism};
use combing::travel::{async_kmin, bounded_async_check, sync_kmin};
use combing::wordproblem::WpContext;
use combing::{Model, Word};

use config::JobConfig;

#[derive(Parser)]
#[command(name = "comb", version, about = "Combings of finitely generated groups")]
struct Cli {
    /// Worker threads for parallel sweeps (0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Omit the timestamp line from report headers.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// TOML job file supplying defaults for missing flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group queries.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Regular operations and decisions on automaton files.
    Fsa(FsaArgs),
    /// Fellow-traveller constants of two words.
    #[command(subcommand)]
    Travel(TravelCmd),
    /// Bounded-ball audit of a combing.
    Verify(VerifyArgs),
    /// Run a construction and emit its language.
    #[command(subcommand)]
    Build(BuildCmd),
    /// Condition (*) sweep for a Z ⋉ Z² action given by a 2×2 matrix.
    StarCheck(StarArgs),
    /// Decide whether a word represents the identity.
    Wp(WpArgs),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Sphere sizes of the ball of given radius.
    Ball {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        radius: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FsaOp {
    Union,
    Intersect,
    Concat,
    Difference,
    Star,
    Plus,
    Complement,
    Determinize,
    Trim,
    Equivalent,
    Empty,
    Finite,
    Enumerate,
    Dot,
}

#[derive(Args)]
struct FsaArgs {
    op: FsaOp,
    a: PathBuf,
    b: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Length bound for `enumerate`.
    #[arg(long, default_value_t = 6)]
    len: usize,
}

#[derive(Subcommand)]
enum TravelCmd {
    /// Least synchronous and asynchronous constants, plus a bounded check.
    Kmin {
        #[arg(long)]
        group: Option<String>,
        #[arg(short)]
        v: String,
        #[arg(short)]
        w: String,
        #[arg(long, default_value_t = 16)]
        cutoff: usize,
        /// Also test bounded asynchrony with this `M` at the async constant.
        #[arg(long)]
        m: Option<usize>,
    },
}

#[derive(Args)]
struct LanguageArgs {
    #[arg(long)]
    group: Option<String>,
    /// `builtin:NAME` or an automaton file over the group's generators.
    #[arg(long)]
    language: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    lang: LanguageArgs,
    #[arg(long = "type")]
    combing_type: Option<String>,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    len: Option<usize>,
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FactorArgs {
    #[arg(long)]
    left_group: String,
    #[arg(long)]
    left_language: String,
    #[arg(long)]
    right_group: String,
    #[arg(long)]
    right_language: String,
}

#[derive(Subcommand)]
enum BuildCmd {
    /// A built-in combing.
    Builtin {
        #[command(flatten)]
        lang: LanguageArgs,
        #[arg(long)]
        len: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Product combing of two factors.
    DirectProduct {
        #[command(flatten)]
        factors: FactorArgs,
        #[arg(long)]
        len: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Alternating-block combing of a free product.
    FreeProduct {
        #[command(flatten)]
        factors: FactorArgs,
        #[arg(long, default_value_t = 5)]
        identity_bound: usize,
        #[arg(long)]
        synchronous: bool,
        #[arg(long)]
        len: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Shortlex-least subset of a regular synchronous combing; writes an automaton.
    Bijectivize {
        #[command(flatten)]
        lang: LanguageArgs,
        #[arg(short)]
        k: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct StarArgs {
    /// Rows separated by `;`, entries by `,`.
    #[arg(long, default_value = "0,1;1,1")]
    matrix: String,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    cutoff: Option<usize>,
}

#[derive(Args)]
struct WpArgs {
    #[command(flatten)]
    lang: LanguageArgs,
    #[arg(short)]
    w: String,
    /// Difference machine constant.
    #[arg(short)]
    k: Option<usize>,
    /// Enumeration bound for languages without carrier or lookup.
    #[arg(long, default_value_t = 6)]
    bound: usize,
    /// Print the normal form reached as well.
    #[arg(long)]
    normal_form: bool,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<combing::Error> for Failure {
    fn from(e: combing::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

struct Ctx {
    job: JobConfig,
    no_timestamp: bool,
}

impl Ctx {
    fn need<T: Clone>(&self, flag: Option<T>, fallback: &Option<T>, name: &str) -> Result<T, Failure> {
        flag.or_else(|| fallback.clone())
            .ok_or_else(|| Failure::Usage(format!("missing --{name} (flag or job file)")))
    }

    fn header(&self, command: &str) -> String {
        let mut s = format!("# comb {command}\n");
        if !self.no_timestamp {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            let _ = writeln!(s, "timestamp = {secs}");
        }
        s
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let job = match cli.config.as_deref().map(JobConfig::load).transpose() {
        Ok(j) => j.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let threads = cli.threads.or(job.threads).unwrap_or(0);
    let ctx = Ctx { job, no_timestamp: cli.no_timestamp };
    match with_threads(threads, || dispatch(&ctx, cli.command)) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(ctx: &Ctx, command: Command) -> Outcome {
    match command {
        Command::Group(GroupCmd::Ball { group, radius }) => group_ball(ctx, group, radius),
        Command::Fsa(args) => fsa(args),
        Command::Travel(TravelCmd::Kmin { group, v, w, cutoff, m }) => travel(ctx, group, &v, &w, cutoff, m),
        Command::Verify(args) => verify_cmd(ctx, args),
        Command::Build(b) => build(ctx, b),
        Command::StarCheck(args) => star_check(ctx, args),
        Command::Wp(args) => wp(ctx, args),
    }
}

fn parse_group(text: &str) -> Result<BuiltinGroupId, Failure> {
    text.parse().map_err(|e: combing::Error| Failure::Usage(e.to_string()))
}

fn read_fsa(path: &Path) -> Result<Fsa, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Fsa::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: String) -> Outcome {
    match out {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// A combing spec from `--group` and `--language`.
fn load_spec(ctx: &Ctx, args: &LanguageArgs, default_type: &str) -> Result<CombingSpec, Failure> {
    let group = ctx.need(args.group.clone(), &ctx.job.group, "group")?;
    let language = ctx.need(args.language.clone(), &ctx.job.language, "language")?;
    spec_for(&group, &language, default_type)
}

fn spec_for(group: &str, language: &str, default_type: &str) -> Result<CombingSpec, Failure> {
    let id = parse_group(group)?;
    if let Some(name) = language.strip_prefix("builtin:") {
        return Ok(builtin_combing(&CombingId::resolve(name, &id)?)?);
    }
    let model = builtin_group(&id)?;
    let fsa = read_fsa(Path::new(language))?;
    let lang = RegularLanguage::new(model.generators().clone(), fsa)?;
    let ty: CombingType = default_type.parse()?;
    Ok(CombingSpec::new(Arc::new(lang), model, ty)?)
}

fn group_ball(ctx: &Ctx, group: Option<String>, radius: Option<usize>) -> Outcome {
    let group = ctx.need(group, &ctx.job.group, "group")?;
    let radius = ctx.need(radius, &ctx.job.radius, "radius")?;
    let model = builtin_group(&parse_group(&group)?)?;
    let b = ball(model.as_ref(), radius)?;
    let mut s = ctx.header("group ball");
    let _ = writeln!(s, "group = {group}");
    let _ = writeln!(s, "generators = {}", model.generators().names().join(" "));
    let _ = writeln!(s, "radius = {radius}");
    let _ = writeln!(s, "elements = {}", b.len());
    let sizes: Vec<String> = b.sphere_sizes().iter().map(|n| n.to_string()).collect();
    let _ = writeln!(s, "spheres = {}", sizes.join(" "));
    Ok(s)
}

fn fsa(args: FsaArgs) -> Outcome {
    let a = read_fsa(&args.a)?;
    let b = args.b.as_deref().map(read_fsa).transpose()?;
    let binary = |op| -> Result<Fsa, Failure> {
        let b = b.as_ref().ok_or_else(|| Failure::Usage("this operation takes two automata".into()))?;
        Ok(regular_combine(op, &a, Some(b))?)
    };
    let machine = |f: Fsa| emit(args.output.as_deref(), f.to_json() + "\n");
    match args.op {
        FsaOp::Union => machine(binary(CombineOp::Union)?),
        FsaOp::Intersect => machine(binary(CombineOp::Intersection)?),
        FsaOp::Concat => machine(binary(CombineOp::Concatenation)?),
        FsaOp::Difference => {
            let b = b.as_ref().ok_or_else(|| Failure::Usage("difference takes two automata".into()))?;
            machine(a.difference(b)?)
        }
        FsaOp::Star => machine(regular_combine(CombineOp::Star, &a, None)?),
        FsaOp::Plus => machine(regular_combine(CombineOp::Plus, &a, None)?),
        FsaOp::Complement => machine(regular_combine(CombineOp::Complement, &a, None)?),
        FsaOp::Determinize => machine(a.determinize()),
        FsaOp::Trim => machine(a.trim()),
        FsaOp::Equivalent => {
            let b = b.as_ref().ok_or_else(|| Failure::Usage("equivalent takes two automata".into()))?;
            Ok(format!("{}\n", a.equivalent(b)?))
        }
        FsaOp::Empty => Ok(format!("{}\n", a.is_empty())),
        FsaOp::Finite => Ok(format!("{}\n", a.is_finite())),
        FsaOp::Enumerate => {
            let words: Vec<String> = a.enumerate(args.len).iter().map(|w| a.format_symbols(w)).collect();
            let text = words.iter().map(|w| format!("{w}\n")).collect();
            emit(args.output.as_deref(), text)
        }
        FsaOp::Dot => emit(args.output.as_deref(), a.to_dot()),
    }
}

fn travel(ctx: &Ctx, group: Option<String>, v: &str, w: &str, cutoff: usize, m: Option<usize>) -> Outcome {
    let group = ctx.need(group, &ctx.job.group, "group")?;
    let model = builtin_group(&parse_group(&group)?)?;
    let gens = model.generators();
    let (v, w) = (gens.parse_word(v)?, gens.parse_word(w)?);
    let m = m.or(ctx.job.m);
    let sync = sync_kmin(model.as_ref(), &v, &w, cutoff)?;
    let (k, witness) = async_kmin(model.as_ref(), &v, &w, cutoff)?;
    let mut s = ctx.header("travel kmin");
    let _ = writeln!(s, "v = {}", gens.format_word(&v));
    let _ = writeln!(s, "w = {}", gens.format_word(&w));
    let _ = writeln!(s, "sync_k = {sync}");
    let _ = writeln!(s, "async_k = {k}");
    let path: Vec<String> = witness.path.iter().map(|(i, j)| format!("{i},{j}")).collect();
    let _ = writeln!(s, "path = {}", path.join(" "));
    if let Some(m) = m {
        let _ = writeln!(s, "bounded(k={k}, m={m}) = {}", bounded_async_check(model.as_ref(), &v, &w, k, m)?);
    }
    Ok(s)
}

fn verify_cmd(ctx: &Ctx, args: VerifyArgs) -> Outcome {
    let ty = ctx.need(args.combing_type, &ctx.job.combing_type, "type")?;
    let ty: CombingType = ty.parse()?;
    let spec = load_spec(ctx, &args.lang, "async")?.with_type(ty);
    let radius = ctx.need(args.radius, &ctx.job.radius, "radius")?;
    let len = ctx.need(args.len, &ctx.job.len, "len")?;
    let mut opts = VerifyOptions::new(radius, len).parallelism(Parallelism::Parallel);
    if let Some(c) = args.cutoff.or(ctx.job.cutoff) {
        opts = opts.cutoff(c);
    }
    let report = verify(&spec, &opts)?;
    let mut s = ctx.header("verify");
    let _ = writeln!(s, "language = {}", spec.language.describe());
    s.push_str(&report.to_text(spec.model.generators()));
    let out = args.output.or_else(|| ctx.job.output.clone().map(PathBuf::from));
    let text = emit(out.as_deref(), s)?;
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}

/// Primes the names of `right` when they clash with `left`.
fn separate(left: &Model, right: CombingSpec) -> Result<(Lang, Model), Failure> {
    let lnames = left.generators().names();
    let rnames = right.model.generators().names();
    if !rnames.iter().any(|n| lnames.contains(n)) {
        return Ok((right.language, right.model));
    }
    let base = right.model.clone();
    let gens = base.generators().clone();
    let letters = (0..gens.len())
        .map(|x| {
            let name = gens.name(x);
            let primed = match name.strip_suffix("^-1") {
                Some(stem) => format!("{stem}'^-1"),
                None => format!("{name}'"),
            };
            NamedElement::new(primed, base.generator_element(x))
        })
        .collect();
    let model: Model = Arc::new(Regenerated::with_inverses(base.clone(), letters, gens.inverse_table().to_vec())?);
    let lang: Lang = Arc::new(Relabeled::identity(right.language, model.generators().clone())?);
    Ok((lang, model))
}

fn listing(ctx: &Ctx, title: &str, lang: &Lang, gens: &GeneratorSet, len: usize) -> String {
    let mut s = ctx.header(title);
    let _ = writeln!(s, "generators = {}", gens.names().join(" "));
    let _ = writeln!(s, "language = {}", lang.describe());
    let words = lang.enumerate(len);
    let _ = writeln!(s, "len = {len}");
    let _ = writeln!(s, "words = {}", words.len());
    for w in &words {
        let _ = writeln!(s, "{}", gens.format_word(w));
    }
    s
}

fn build(ctx: &Ctx, cmd: BuildCmd) -> Outcome {
    let default_len = ctx.job.len.unwrap_or(4);
    match cmd {
        BuildCmd::Builtin { lang, len, output } => {
            let spec = load_spec(ctx, &lang, "async")?;
            let len = len.unwrap_or(default_len);
            let mut s = listing(ctx, "build builtin", &spec.language, spec.model.generators(), len);
            let _ = writeln!(s, "claimed = {}", spec.claimed);
            emit(output.as_deref(), s)
        }
        BuildCmd::DirectProduct { factors, len, output } => {
            let left = spec_for(&factors.left_group, &factors.left_language, "sync")?;
            let right = spec_for(&factors.right_group, &factors.right_language, "sync")?;
            let (rl, rm) = separate(&left.model, right)?;
            let (l, m) = direct_product(&left.language, left.model, &rl, rm)?;
            emit(output.as_deref(), listing(ctx, "build direct-product", &l, m.generators(), len.unwrap_or(default_len)))
        }
        BuildCmd::FreeProduct { factors, identity_bound, synchronous, len, output } => {
            let left = spec_for(&factors.left_group, &factors.left_language, "sync")?;
            let right = spec_for(&factors.right_group, &factors.right_language, "sync")?;
            let (rl, rm) = separate(&left.model, right)?;
            let (l, m) = free_product(&left.language, left.model, &rl, rm, identity_bound, synchronous)?;
            emit(output.as_deref(), listing(ctx, "build free-product", &l, m.generators(), len.unwrap_or(default_len)))
        }
        BuildCmd::Bijectivize { lang, k, output } => {
            let spec = load_spec(ctx, &lang, "sync")?;
            let k = ctx.need(k, &ctx.job.k, "k")?;
            let out = bijectivize_shortlex(&spec.language, spec.model, k)?;
            emit(output.as_deref(), out.fsa().to_json() + "\n")
        }
    }
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>, Failure> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad matrix entry `{c}`"))))
                .collect()
        })
        .collect()
}

fn star_check(ctx: &Ctx, args: StarArgs) -> Outcome {
    let matrix = parse_matrix(&args.matrix)?;
    let radius = ctx.need(args.radius, &ctx.job.radius, "radius")?;
    let cutoff = args.cutoff.or(ctx.job.cutoff).unwrap_or(4 * radius + 8);
    let ambient = MatrixSemidirect::new(matrix)?;
    let h: Model = Arc::new(FreeAbelian::with_names(&["x"]));
    let n: Model = Arc::new(FreeAbelian::with_names(&["y", "z"]));
    let action = ActionData::derive(&ambient, h, &[0, 1], n, &[2, 3, 4, 5], 3)?;
    action.validate(2)?;
    let ln = zn_straightline_language(&["y".to_string(), "z".to_string()]);
    let r = check_condition_star(&ln, &action, radius, cutoff)?;
    let mut s = ctx.header("star-check");
    let _ = writeln!(s, "matrix = {}", args.matrix);
    let _ = writeln!(s, "radius = {radius}");
    let _ = writeln!(s, "checks = {}", r.checks);
    let _ = writeln!(s, "max_k = {}", r.max_k);
    if let Some((g, y, k)) = &r.worst {
        let _ = writeln!(s, "worst = {g} {} {k}", action.h_model().generators().name(*y));
    }
    Ok(s)
}

fn wp(ctx: &Ctx, args: WpArgs) -> Outcome {
    let spec = load_spec(ctx, &args.lang, "sync")?;
    let k = args.k.or(ctx.job.k).unwrap_or(2);
    let gens = spec.model.generators().clone();
    let word: Word = gens.parse_word(&args.w)?;
    let model = spec.model.clone();
    let ctx_wp = WpContext::new(spec, k, args.bound)?;
    let trivial = ctx_wp.is_trivial(&word)?;
    let mut s = String::from(if trivial { "trivial\n" } else { "nontrivial\n" });
    if args.normal_form {
        let nf = ctx_wp.reduce_to_normal(&word)?;
        let _ = writeln!(s, "normal_form = {}", gens.format_word(&nf));
        let _ = writeln!(s, "element = {}", evaluate(model.as_ref(), &nf)?);
    }
    Ok(s)
}
