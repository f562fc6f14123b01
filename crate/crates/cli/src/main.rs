use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::{json, Value};

use grsod::bottweil::{cohomology_gr, LeviWeight};
use grsod::cache;
use grsod::dualstair::{e_class, staircase_e, staircase_q, staircase_u, BlockContext, Route, StairVariant};
use grsod::grcore::Diagram;
use grsod::homcalc::{GrContext, TwistedIrred};
use grsod::kclass::{kapranov_coordinates, EqKClass};
use grsod::littlewood::{dim_gl, lr_coefficient, tensor_decompose, GlWeight};
use grsod::pathblocks::{block_at, diagonal_path, enumerate_paths, parse_path, CanonicalPath, HalfPoint};
use grsod::verify::{verify_block, verify_sod, verify_staircase, Mutation, Report};
use grsod::{Error, Result};

/// Largest n accepted without --force.
const MAX_N: i64 = 10;

#[derive(Parser)]
#[command(name = "grsod", version, about = "Equivariant cohomology, Ext and K-theory checks on Grassmannians")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Memo cache file, loaded before and extended after the run.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Allow n > 10.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Args, Clone, Copy)]
struct Gr {
    #[arg(long)]
    n: i64,
    #[arg(long)]
    k: i64,
}

#[derive(Args, Clone)]
struct BlockArgs {
    /// Integral point "x,y" of the block.
    #[arg(long, conflicts_with_all = ["w", "h"])]
    point: Option<String>,
    #[arg(long, requires = "h")]
    w: Option<usize>,
    #[arg(long, requires = "w")]
    h: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StairArg {
    U,
    Q,
    El,
    Em,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    TwistSwap,
    WedgePerturb,
    DuplicateClass,
}

#[derive(Subcommand)]
enum Cmd {
    /// Littlewood–Richardson coefficient, or the full product without --c.
    Lr {
        #[arg(long)]
        a: Diagram,
        #[arg(long)]
        b: Diagram,
        #[arg(long)]
        c: Option<Diagram>,
    },
    /// Dimension of the GL-representation with the given highest weight.
    Dim {
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Cohomology of (V/U)^q ⊗ U^u.
    Bbw {
        #[command(flatten)]
        gr: Gr,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Graded Ext between two objects "[u];[q];t".
    Ext {
        #[command(flatten)]
        gr: Gr,
        #[arg(long, allow_hyphen_values = true)]
        src: TwistedIrred,
        #[arg(long, allow_hyphen_values = true)]
        dst: TwistedIrred,
    },
    /// Equivariant class, rank and Kapranov coordinates of an object.
    Kclass {
        #[command(flatten)]
        gr: Gr,
        #[arg(long, allow_hyphen_values = true)]
        obj: TwistedIrred,
    },
    /// K-class of E^{λ,μ} by one route.
    Eclass {
        #[command(flatten)]
        gr: Gr,
        #[command(flatten)]
        block: BlockArgs,
        #[arg(long)]
        lambda: Diagram,
        #[arg(long)]
        mu: Diagram,
        #[arg(long, default_value = "gram")]
        route: Route,
    },
    /// A staircase complex and its K-exactness verdict.
    Staircase {
        #[command(flatten)]
        gr: Gr,
        #[arg(long, value_enum)]
        kind: StairArg,
        #[command(flatten)]
        block: BlockArgs,
        #[arg(long)]
        lambda: Option<Diagram>,
        #[arg(long)]
        mu: Option<Diagram>,
    },
    /// Blocks along a path, or at a single point.
    Blocks {
        #[command(flatten)]
        gr: Gr,
        #[arg(long)]
        path: Option<String>,
        #[arg(long, conflicts_with = "path")]
        point: Option<HalfPoint>,
    },
    /// The diagonal path, or every canonical path with --enumerate.
    Paths {
        #[command(flatten)]
        gr: Gr,
        #[arg(long)]
        enumerate: bool,
    },
    /// Semi-orthogonality, fullness and path-independence along one or all paths.
    VerifySod {
        #[command(flatten)]
        gr: Gr,
        #[arg(long, conflicts_with = "all_paths")]
        path: Option<String>,
        #[arg(long)]
        all_paths: bool,
        #[arg(long, value_enum)]
        mutate: Option<MutationArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dual-collection checks on the block at a point.
    VerifyBlock {
        #[command(flatten)]
        gr: Gr,
        #[arg(long)]
        point: HalfPoint,
    },
    /// Every staircase on the Grassmannian, or the E-staircases of one block.
    VerifyStaircase {
        #[command(flatten)]
        gr: Gr,
        #[command(flatten)]
        block: BlockArgs,
        #[arg(long, value_enum)]
        mutate: Option<MutationArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Cmd {
    fn gr(&self) -> Option<Gr> {
        match self {
            Cmd::Lr { .. } | Cmd::Dim { .. } => None,
            Cmd::Bbw { gr, .. }
            | Cmd::Ext { gr, .. }
            | Cmd::Kclass { gr, .. }
            | Cmd::Eclass { gr, .. }
            | Cmd::Staircase { gr, .. }
            | Cmd::Blocks { gr, .. }
            | Cmd::Paths { gr, .. }
            | Cmd::VerifySod { gr, .. }
            | Cmd::VerifyBlock { gr, .. }
            | Cmd::VerifyStaircase { gr, .. } => Some(*gr),
        }
    }
}

enum Outcome {
    Pass,
    Fail,
}

fn context(gr: Gr, force: bool) -> Result<GrContext> {
    let ctx = GrContext::new(gr.k, gr.n)?;
    if gr.n > MAX_N && !force {
        let objects = (0..ctx.k()).fold(1u128, |acc, i| acc * (ctx.n() - i) as u128 / (i + 1) as u128);
        return Err(Error::Precondition(format!(
            "n = {} exceeds {MAX_N}: {objects} generators, about {} cross pairs per path; pass --force",
            gr.n,
            objects * objects.saturating_sub(1) / 2
        )));
    }
    Ok(ctx)
}

fn block_of(ctx: GrContext, b: &BlockArgs) -> Result<Option<BlockContext>> {
    match (&b.point, b.w, b.h) {
        (Some(p), _, _) => Ok(Some(BlockContext::at_point(ctx, p.parse()?)?)),
        (None, Some(w), Some(h)) => Ok(Some(BlockContext::new(ctx, w, h)?)),
        _ => Ok(None),
    }
}

fn weight(s: &str) -> Result<Vec<i64>> {
    grsod::grcore::parse_parts(s)
}

/// Writes a line to stdout; a closed reader does not change the exit code.
fn out(line: &str) {
    if let Err(e) = writeln!(io::stdout().lock(), "{line}") {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
        }
    }
}

fn emit(json_mode: bool, v: &Value, text: &str) {
    if json_mode {
        out(&serde_json::to_string_pretty(v).unwrap_or_default());
    } else {
        out(text);
    }
}

fn emit_report(json_mode: bool, r: &Report) -> Outcome {
    if json_mode {
        out(&r.to_json().to_string());
    } else {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let n = r.details["counterexampleCount"].as_u64().unwrap_or(0);
        out(&format!("{} {}: {status} ({n} counterexamples, {} ms)", r.check, r.ctx, r.elapsed_millis));
        for c in r.counterexamples() {
            out(&format!("  {c}"));
        }
    }
    if r.passed() {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn mutation(m: Option<MutationArg>, seed: u64) -> Option<Mutation> {
    m.map(|m| match m {
        MutationArg::TwistSwap => Mutation::TwistSwap { seed },
        MutationArg::WedgePerturb => Mutation::WedgePerturb { seed },
        MutationArg::DuplicateClass => Mutation::DuplicateClass { seed },
    })
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::Precondition(format!("missing --{flag}")))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let js = cli.json;
    let ctx = cli.cmd.gr().map(|g| context(g, cli.force)).transpose()?;
    let ctx_or = || ctx.ok_or_else(|| Error::Internal("subcommand without a Grassmannian".into()));
    match &cli.cmd {
        Cmd::Lr { a, b, c } => match c {
            Some(c) => {
                let m = lr_coefficient(a, b, c);
                emit(js, &json!({ "a": a, "b": b, "c": c, "coefficient": m }), &m.to_string());
            }
            None => {
                let rows = a.len() + b.len();
                let s = tensor_decompose(&GlWeight::from_diagram(a, rows)?, &GlWeight::from_diagram(b, rows)?)?;
                let terms: Vec<Value> = s
                    .terms
                    .iter()
                    .map(|(w, m)| json!({ "weight": GlWeight::new(w.clone()).map(|g| g.to_diagram()).ok(), "mult": m }))
                    .collect();
                let text: Vec<String> = s
                    .terms
                    .iter()
                    .map(|(w, m)| format!("{m} × {}", GlWeight::new(w.clone()).map(|g| g.to_diagram().to_string()).unwrap_or_default()))
                    .collect();
                emit(js, &json!({ "a": a, "b": b, "terms": terms }), &text.join("\n"));
            }
        },
        Cmd::Dim { weight: w } => {
            let w = weight(w)?;
            GlWeight::new(w.clone())?;
            let d = dim_gl(&w);
            emit(js, &json!({ "weight": w, "dim": d.to_string() }), &d.to_string());
        }
        Cmd::Bbw { u, q, .. } => {
            let ctx = ctx_or()?;
            let lw = LeviWeight::new(vec![
                GlWeight::from_diagram(&q.parse::<Diagram>()?, ctx.q_rank())?,
                GlWeight::from_diagram(&u.parse::<Diagram>()?, ctx.k())?,
            ]);
            let r = cohomology_gr(ctx.k(), ctx.n(), &lw)?;
            let j = serde_json::to_value(r.to_json()).unwrap_or(Value::Null);
            emit(js, &j, &r.to_string());
        }
        Cmd::Ext { src, dst, .. } => {
            let ctx = ctx_or()?;
            let e = ctx.ext_graded(src, dst)?;
            emit(js, &e.to_json(), &e.to_string());
        }
        Cmd::Kclass { obj, .. } => {
            let ctx = ctx_or()?;
            let c = EqKClass::class_of(ctx, obj)?;
            let kc = kapranov_coordinates(&c)?;
            let coords: Vec<Value> =
                kc.labelled().iter().map(|(d, v)| json!({ "kapranov": d, "coeff": v.to_string() })).collect();
            let text: Vec<String> = kc.labelled().iter().map(|(d, v)| format!("  U^-{d}: {v}")).collect();
            emit(
                js,
                &json!({ "class": c.to_json(), "rank": c.rank()?.to_string(), "kapranov": coords }),
                &format!("class {c}\nrank {}\nKapranov coordinates:\n{}", c.rank()?, text.join("\n")),
            );
        }
        Cmd::Eclass { block, lambda, mu, route, .. } => {
            let ctx = ctx_or()?;
            let bc = block_of(ctx, block)?.ok_or_else(|| Error::Precondition("give --point or --w/--h".into()))?;
            let (c, cert) = e_class(&bc, lambda, mu, *route)?;
            let ok = cert.as_ref().is_none_or(|c| c.passed());
            let j = json!({ "route": route, "lambda": lambda, "mu": mu, "block": [bc.w, bc.h],
                "class": c.to_json(), "certificate": cert });
            let mut text = format!("E^{{{lambda},{mu}}} on {bc} via {route}: {c}");
            if let Some(cert) = &cert {
                text += &format!("\ncertificate: {} summands, {} failures", cert.summands, cert.failures.len());
                for f in &cert.failures {
                    text += &format!("\n  {f}");
                }
            }
            emit(js, &j, &text);
            return Ok(if ok { Outcome::Pass } else { Outcome::Fail });
        }
        Cmd::Staircase { kind, block, lambda, mu, .. } => {
            let ctx = ctx_or()?;
            let c = match kind {
                StairArg::U => staircase_u(ctx, &need(lambda, "lambda")?)?,
                StairArg::Q => staircase_q(ctx, &need(mu, "mu")?)?,
                StairArg::El | StairArg::Em => {
                    let bc = block_of(ctx, block)?.ok_or_else(|| Error::Precondition("give --point or --w/--h".into()))?;
                    let v = if matches!(kind, StairArg::El) { StairVariant::L } else { StairVariant::M };
                    staircase_e(&bc, &need(lambda, "lambda")?, &need(mu, "mu")?, v)?
                }
            };
            let exact = grsod::dualstair::check_exact_k(&c)?;
            let ranks: Vec<String> = c.ranks()?.iter().map(ToString::to_string).collect();
            let alt = c.rank_alternation()?;
            let terms: Vec<Value> = c.terms.iter().map(|t| json!({ "label": t.label, "class": t.cls.to_json() })).collect();
            let j = json!({ "kind": c.kind.to_string(), "terms": terms, "ranks": ranks,
                "rankAlternation": alt.to_string(), "exactK": exact });
            let text = format!("{}\nranks {}\nK-exact: {exact}, rank alternation {alt}", c, ranks.join(", "));
            emit(js, &j, &text);
            return Ok(if exact && alt == 0.into() { Outcome::Pass } else { Outcome::Fail });
        }
        Cmd::Blocks { path, point, .. } => {
            let ctx = ctx_or()?;
            let points: Vec<HalfPoint> = match (path, point) {
                (Some(p), _) => parse_path(&ctx, p)?.points().to_vec(),
                (None, Some(p)) => vec![*p],
                (None, None) => diagonal_path(&ctx).points().to_vec(),
            };
            let blocks = points.iter().map(|p| block_at(&ctx, *p)).collect::<Result<Vec<_>>>()?;
            let sizes: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
            let items: Vec<Value> = blocks
                .iter()
                .map(|b| json!({ "point": b.point.to_string(), "lambdaBox": [b.lambda_box.w, b.lambda_box.h],
                    "muBox": [b.mu_box.w, b.mu_box.h], "size": b.len() }))
                .collect();
            let text: Vec<String> = blocks
                .iter()
                .map(|b| format!("{}: Y_{{{},{}}} × Y_{{{},{}}} ({})", b.point, b.lambda_box.w, b.lambda_box.h, b.mu_box.w, b.mu_box.h, b.len()))
                .collect();
            let sz: Vec<String> = sizes.iter().map(ToString::to_string).collect();
            emit(js, &json!({ "blocks": items, "sizes": sizes }), &format!("{}\nsizes {}", text.join("\n"), sz.join(",")));
        }
        Cmd::Paths { enumerate, .. } => {
            let ctx = ctx_or()?;
            let paths: Vec<CanonicalPath> = if *enumerate { enumerate_paths(&ctx) } else { vec![diagonal_path(&ctx)] };
            let strs: Vec<String> = paths.iter().map(ToString::to_string).collect();
            emit(js, &json!({ "count": strs.len(), "paths": strs }), &strs.join("\n"));
        }
        Cmd::VerifySod { path, all_paths, mutate, seed, .. } => {
            let ctx = ctx_or()?;
            let paths = if *all_paths {
                enumerate_paths(&ctx)
            } else {
                vec![match path {
                    Some(p) => parse_path(&ctx, p)?,
                    None => diagonal_path(&ctx),
                }]
            };
            let r = verify_sod(ctx, &paths, mutation(*mutate, *seed))?;
            return Ok(emit_report(js, &r));
        }
        Cmd::VerifyBlock { point, .. } => {
            let r = verify_block(ctx_or()?, *point)?;
            return Ok(emit_report(js, &r));
        }
        Cmd::VerifyStaircase { block, mutate, seed, .. } => {
            let ctx = ctx_or()?;
            let r = verify_staircase(ctx, block_of(ctx, block)?, mutation(*mutate, *seed))?;
            return Ok(emit_report(js, &r));
        }
    }
    Ok(Outcome::Pass)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(3);
        }
    }
    if let Some(p) = &cli.cache {
        let s = cache::load(p);
        info!("cache {}: loaded {} lr and {} bbw entries", p.display(), s.lr, s.bbw);
    }
    let result = run(&cli);
    if let Some(p) = &cli.cache {
        match cache::save(p) {
            Ok(s) => info!("cache {}: appended {} lr and {} bbw entries", p.display(), s.lr, s.bbw),
            Err(e) => log::warn!("cache not written: {e}"),
        }
    }
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 3 } else { 2 })
        }
    }
}
