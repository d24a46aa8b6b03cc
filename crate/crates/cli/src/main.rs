use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use log::info;

use posqbf::game::{write_ghex, Player};
use posqbf::hex::{board_to_ghex, write_hex};
use posqbf::httt::{catalog, merge_catalog, parse_shapes, Polyomino};
use posqbf::oracle::Oracle;
use posqbf::preprocess::{reduce_board, reduce_ghex, transversal, Claims};
use posqbf::qbf::stats::EncodingStats;
use posqbf::runner::{
    bench, encode_instance, parse_manifest, run_solver, write_csv, BenchOptions, EncodeOptions, Encoding,
    Format, Formula, Instance, Limits, Solver, SolverResult,
};
use posqbf::selfcheck::{run_builtin, CheckOptions};

#[derive(Parser)]
#[command(name = "posqbf", version, about = "QBF encodings of maker-breaker positional games")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the QBF encoding of an instance.
    Encode(EncodeArgs),
    /// Print the reduced Generalized Hex instance.
    Preprocess(PreprocessArgs),
    /// Print encoding sizes.
    Stats(EncodeArgs),
    /// Solve the game by exhaustive search.
    Oracle(OracleArgs),
    /// Run a solver on a formula file, or encode an instance and solve it.
    Solve(SolveArgs),
    /// Run a CSV manifest of instances and write a CSV of results.
    Bench(BenchArgs),
    /// Check every encoding against the oracle on built-in instances.
    Selfcheck(SelfcheckArgs),
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Instance file (.hex board or .ghex graph).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<String>,
    /// Built-in instance: `emptyN` or `httt:<shape>:<size>`.
    #[arg(long)]
    board: Option<String>,
    /// Polyomino name (with --size) for Harary's Tic-Tac-Toe.
    #[arg(long)]
    shape: Option<String>,
    /// Square board size for --shape.
    #[arg(long)]
    size: Option<usize>,
    /// Shapes file overriding or extending the built-in catalog.
    #[arg(long, value_name = "FILE")]
    shapes: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// EA, EN, ET, LA, LN, SA, SN or HTTT-SN.
    #[arg(long)]
    enc: String,
    /// Number of plies (odd).
    #[arg(long)]
    depth: usize,
    /// qdimacs or qcir.
    #[arg(long, default_value = "qdimacs")]
    format: String,
    /// Write the formula here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Restrict Black's first move to one symmetry class (polyomino boards).
    #[arg(long)]
    symmetry: bool,
}

#[derive(Args)]
struct PreprocessArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Number of plies (odd).
    #[arg(long)]
    depth: usize,
    /// Emit White's transversal instance instead (Hex boards only).
    #[arg(long)]
    transversal: bool,
    /// Also print the board with useless cells filled for White.
    #[arg(long)]
    filled: bool,
    /// Write the instance here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Number of plies (odd).
    #[arg(long)]
    depth: usize,
    /// Refuse instances with more open positions.
    #[arg(long, default_value_t = 24)]
    limit: usize,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Solver command; `{}` is replaced by the formula path (else appended).
    /// `internal` uses the built-in evaluator. Defaults to $POSQBF_SOLVER.
    #[arg(long)]
    solver_cmd: Option<String>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Memory limit in MB.
    #[arg(long)]
    memlimit: Option<u64>,
    /// Regex whose first group is the answer in the solver output.
    #[arg(long)]
    answer_pattern: Option<String>,
    /// Variable limit of the internal evaluator.
    #[arg(long, default_value_t = 200)]
    internal_limit: usize,
}

impl SolverArgs {
    fn solver(&self) -> anyhow::Result<Solver> {
        let s = match &self.solver_cmd {
            Some(cmd) => Solver::new(cmd.clone()),
            None => Solver::from_env(),
        };
        Ok(match &self.answer_pattern {
            Some(p) => s.with_answer_pattern(p)?,
            None => s,
        })
    }

    fn limits(&self) -> Limits {
        Limits {
            timeout: self.timeout.map(Duration::from_secs_f64),
            mem_mb: self.memlimit,
            internal_var_limit: self.internal_limit,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Encode the instance with this encoding first (otherwise --in is a
    /// formula file).
    #[arg(long)]
    enc: Option<String>,
    /// Number of plies (odd), required with --enc.
    #[arg(long)]
    depth: Option<usize>,
    /// Format handed to the solver: qdimacs or qcir.
    #[arg(long, default_value = "qdimacs")]
    format: String,
    /// Restrict Black's first move to one symmetry class (polyomino boards).
    #[arg(long)]
    symmetry: bool,
    #[command(flatten)]
    solver: SolverArgs,
    /// Exit with 10 (SAT) or 20 (UNSAT) like a QBF solver.
    #[arg(long)]
    solver_exit_codes: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Manifest CSV with columns instance,encoding,depth[,solver][,format].
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Write the results CSV here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Runs in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Format for rows without a format column.
    #[arg(long, default_value = "qdimacs")]
    format: String,
    /// Restrict Black's first move to one symmetry class (polyomino boards).
    #[arg(long)]
    symmetry: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Evaluate circuits directly instead of after Tseitin lowering.
    #[arg(long)]
    direct: bool,
}

/// Failure classes with their exit codes.
enum Failure {
    Usage(anyhow::Error),
    Io(anyhow::Error),
    Solver(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Solver(_) => 3,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Usage(e) | Failure::Io(e) | Failure::Solver(e) => e,
        }
    }
}

impl From<posqbf::Error> for Failure {
    fn from(e: posqbf::Error) -> Self {
        match e {
            posqbf::Error::Io(_) | posqbf::Error::Parse { .. } => Failure::Io(e.into()),
            _ => Failure::Usage(e.into()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(anyhow!(msg.into()))
}

fn io<T, E>(r: std::result::Result<T, E>, what: impl FnOnce() -> String) -> Outcome<T>
where
    std::result::Result<T, E>: Context<T, E>,
{
    r.with_context(what).map_err(Failure::Io)
}

fn load_shapes(path: Option<&Path>) -> Outcome<Vec<Polyomino>> {
    let base = catalog();
    match path {
        None => Ok(base),
        Some(p) => {
            let text = io(fs::read_to_string(p), || format!("reading {}", p.display()))?;
            let extra = parse_shapes(&text).map_err(|e| Failure::Io(anyhow!("{}: {e}", p.display())))?;
            Ok(merge_catalog(base, extra))
        }
    }
}

fn load_instance(a: &InstanceArgs) -> Outcome<(String, Instance)> {
    let shapes = load_shapes(a.shapes.as_deref())?;
    let spec = match (&a.input, &a.board, &a.shape) {
        (Some(p), None, None) => p.clone(),
        (None, Some(b), None) => b.clone(),
        (None, None, Some(s)) => {
            let size = a.size.ok_or_else(|| usage("--shape needs --size"))?;
            format!("httt:{s}:{size}")
        }
        _ => return Err(usage("give exactly one of --in, --board or --shape")),
    };
    let inst = Instance::load_with_shapes(&spec, &shapes).map_err(|e| match e {
        posqbf::Error::Io(_) | posqbf::Error::Parse { .. } => Failure::Io(anyhow!("{spec}: {e}")),
        _ => Failure::Usage(anyhow!("{spec}: {e}")),
    })?;
    Ok((spec, inst))
}

fn parse_enc(s: &str) -> Outcome<Encoding> {
    s.parse().map_err(|e: posqbf::Error| usage(e.to_string()))
}

fn parse_format(s: &str) -> Outcome<Format> {
    s.parse().map_err(|e: posqbf::Error| usage(e.to_string()))
}

fn write_out(out: Option<&Path>, text: &str) -> Outcome<()> {
    match out {
        Some(p) => io(fs::write(p, text), || format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn stats_line(enc: Encoding, d: usize, formula: &Formula) -> String {
    let cnf = EncodingStats::of_cnf(&formula.to_cnf());
    match formula {
        Formula::Circuit(c) => format!(
            "{enc} d={d}: qdimacs {cnf}; circuit {}",
            EncodingStats::of_circuit(c)
        ),
        Formula::Cnf(_) => format!("{enc} d={d}: {cnf}"),
    }
}

fn cmd_encode(a: &EncodeArgs, only_stats: bool) -> Outcome<()> {
    let (_, inst) = load_instance(&a.instance)?;
    let enc = parse_enc(&a.enc)?;
    let format = parse_format(&a.format)?;
    let opts = EncodeOptions {
        symmetry_reduce: a.symmetry,
    };
    let e = encode_instance(&inst, enc, a.depth, opts)?;
    let line = stats_line(enc, a.depth, &e.formula);
    if only_stats {
        println!("{line}");
        return Ok(());
    }
    let text = e.render(format);
    write_out(a.out.as_deref(), &text)?;
    if a.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

fn cmd_preprocess(a: &PreprocessArgs) -> Outcome<()> {
    let (_, inst) = load_instance(&a.instance)?;
    let mut text = String::new();
    match &inst {
        Instance::Hex(board) => {
            let red = reduce_board(board, a.depth)?;
            text.push_str(&format!(
                "c filled {} contracted {} connections {}\n",
                red.report.filled,
                red.report.contracted,
                red.report.win_sets.map_or("unknown".to_string(), |n| n.to_string())
            ));
            if a.filled {
                for line in write_hex(&red.filled).lines() {
                    text.push_str(&format!("c board {line}\n"));
                }
            }
            let g = if a.transversal {
                transversal(board, a.depth)?
            } else {
                red.instance
            };
            text.push_str(&write_ghex(&g));
        }
        Instance::Ghex(g) => {
            if a.transversal {
                return Err(usage("--transversal needs a Hex board"));
            }
            let (h, report) = reduce_ghex(g, a.depth)?;
            text.push_str(&format!("c removed {}\n", report.filled));
            text.push_str(&write_ghex(&h));
        }
        Instance::Httt { .. } => return Err(usage("preprocess applies to Hex and Generalized Hex instances")),
    }
    write_out(a.out.as_deref(), &text)
}

fn cmd_oracle(a: &OracleArgs) -> Outcome<()> {
    let (spec, inst) = load_instance(&a.instance)?;
    let oracle = Oracle::with_limit(a.limit);
    let (verdict, first, labels): (_, _, Vec<String>) = match &inst {
        Instance::Hex(board) => {
            let (g, claims) = board_to_ghex(board, Player::Black);
            (
                oracle.solve_claimed_ghex(&g, &claims, a.depth)?,
                oracle.winning_first_moves_claimed_ghex(&g, &claims, a.depth)?,
                g.labels().to_vec(),
            )
        }
        Instance::Ghex(g) => {
            let none = Claims::default();
            (
                oracle.solve_claimed_ghex(g, &none, a.depth)?,
                oracle.winning_first_moves_claimed_ghex(g, &none, a.depth)?,
                g.labels().to_vec(),
            )
        }
        Instance::Httt { shape, size } => {
            let game = posqbf::httt::httt_game(shape, *size)?;
            (
                oracle.solve_game(&game, a.depth)?,
                oracle.winning_first_moves(&game, a.depth)?,
                game.labels().to_vec(),
            )
        }
    };
    let name = |v: &usize| labels[*v].clone();
    if verdict.black_wins {
        println!("{spec} d={}: black wins", a.depth);
        println!("winning first moves: {}", first.iter().map(name).collect::<Vec<_>>().join(" "));
        if let Some(line) = &verdict.variation {
            println!("variation: {}", line.iter().map(name).collect::<Vec<_>>().join(" "));
        }
    } else {
        println!("{spec} d={}: black does not win", a.depth);
    }
    Ok(())
}

fn cmd_solve(a: &SolveArgs) -> Outcome<ExitCode> {
    let solver = a.solver.solver().map_err(Failure::Usage)?;
    let limits = a.solver.limits();
    let dir = io(tempfile::tempdir(), || "creating a working directory".into())?;
    let path = match &a.enc {
        Some(enc) => {
            let enc = parse_enc(enc)?;
            let d = a.depth.ok_or_else(|| usage("--enc needs --depth"))?;
            let format = parse_format(&a.format)?;
            let (_, inst) = load_instance(&a.instance)?;
            let text = encode_instance(&inst, enc, d, EncodeOptions { symmetry_reduce: a.symmetry })?.render(format);
            let p = dir.path().join(format!("formula.{}", format.extension()));
            io(fs::write(&p, text), || format!("writing {}", p.display()))?;
            p
        }
        None => {
            let p = a
                .instance
                .input
                .as_ref()
                .ok_or_else(|| usage("give --in <formula> or --enc with an instance"))?;
            let p = PathBuf::from(p);
            if !p.exists() {
                return Err(Failure::Io(anyhow!("{}: no such file", p.display())));
            }
            p
        }
    };
    let o = run_solver(&path, &solver, &limits, Some(dir.path()));
    info!("solver output:\n{}", o.output);
    let mem = o.mem_mb.map_or(String::new(), |m| format!(" mem_mb={m:.1}"));
    println!("s {}", o.result);
    println!("c time_s={:.3}{mem}", o.time_s);
    match o.result {
        SolverResult::Sat if a.solver_exit_codes => Ok(ExitCode::from(10)),
        SolverResult::Unsat if a.solver_exit_codes => Ok(ExitCode::from(20)),
        SolverResult::Sat | SolverResult::Unsat => Ok(ExitCode::SUCCESS),
        r => {
            let detail = if o.output.trim().is_empty() { "(no output)" } else { o.output.trim() };
            Err(Failure::Solver(anyhow!("solver result {r}: {detail}")))
        }
    }
}

fn cmd_bench(a: &BenchArgs) -> Outcome<()> {
    let text = io(fs::read_to_string(&a.input), || format!("reading {}", a.input.display()))?;
    let entries = parse_manifest(&text).map_err(|e| Failure::Io(anyhow!("{}: {e}", a.input.display())))?;
    let opts = BenchOptions {
        jobs: a.jobs,
        limits: a.solver.limits(),
        default_solver: a.solver.solver().map_err(Failure::Usage)?,
        default_format: parse_format(&a.format)?,
        base_dir: a.input.parent().map(Path::to_path_buf).unwrap_or_default(),
        encode: EncodeOptions {
            symmetry_reduce: a.symmetry,
        },
    };
    let records = bench(&entries, &opts);
    write_out(a.out.as_deref(), &write_csv(&records))
}

fn cmd_selfcheck(a: &SelfcheckArgs) -> Outcome<()> {
    let opts = CheckOptions {
        via_cnf: !a.direct,
        ..CheckOptions::default()
    };
    let checks = run_builtin(opts)?;
    let bad: Vec<_> = checks.iter().filter(|c| !c.agrees()).collect();
    for c in &bad {
        println!("DISAGREE {c}");
    }
    if bad.is_empty() {
        println!("all encodings agree with oracle ({} checks)", checks.len());
        Ok(())
    } else {
        Err(Failure::Solver(anyhow!("{} of {} checks disagree", bad.len(), checks.len())))
    }
}

fn run(cli: Cli) -> Outcome<ExitCode> {
    match &cli.command {
        Cmd::Encode(a) => cmd_encode(a, false)?,
        Cmd::Stats(a) => cmd_encode(a, true)?,
        Cmd::Preprocess(a) => cmd_preprocess(a)?,
        Cmd::Oracle(a) => cmd_oracle(a)?,
        Cmd::Solve(a) => return cmd_solve(a),
        Cmd::Bench(a) => cmd_bench(a)?,
        Cmd::Selfcheck(a) => cmd_selfcheck(a)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}
