//! Instance loading, encoding dispatch, solver invocation and the batch
//! benchmark driver.

use std::fmt;
use std::fs;
use std::io::Read as _;
use std::os::unix::process::CommandExt as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use log::{debug, info, warn};
use regex::Regex;

use crate::error::{Error, Result};
use crate::explicit::{encode_ea, encode_en, encode_et, ExplicitEncoding};
use crate::game::{game_from_ghex, parse_ghex, GameInstance, GeneralizedHexInstance};
use crate::hex::{empty_board, parse_hex, HexBoard};
use crate::httt::{catalog, encode_httt_sn, find_shape, httt_game, Polyomino};
use crate::lifted::{encode_la, encode_ln, encode_sa, encode_sn};
use crate::preprocess::{black_moves, reduce_board, reduce_ghex, stutter_closure, transversal};
use crate::qbf::eval::Evaluator;
use crate::qbf::qcir::{parse_qcir, write_qcir};
use crate::qbf::qdimacs::{parse_qdimacs, write_qdimacs_with_comments};
use crate::qbf::stats::EncodingStats;
use crate::qbf::tseitin::tseitin;
use crate::qbf::{QbfCircuit, QbfCnf};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Encoding {
    Ea,
    En,
    Et,
    La,
    Ln,
    Sa,
    Sn,
    HtttSn,
}

impl Encoding {
    pub const ALL: [Encoding; 8] = [
        Encoding::Ea,
        Encoding::En,
        Encoding::Et,
        Encoding::La,
        Encoding::Ln,
        Encoding::Sa,
        Encoding::Sn,
        Encoding::HtttSn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Encoding::Ea => "EA",
            Encoding::En => "EN",
            Encoding::Et => "ET",
            Encoding::La => "LA",
            Encoding::Ln => "LN",
            Encoding::Sa => "SA",
            Encoding::Sn => "SN",
            Encoding::HtttSn => "HTTT-SN",
        }
    }

    /// Explicit board encodings produce CNF; the others produce circuits.
    pub fn is_explicit(self) -> bool {
        matches!(self, Encoding::Ea | Encoding::En | Encoding::Et)
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase().replace('_', "-");
        Encoding::ALL
            .into_iter()
            .find(|e| e.name() == up)
            .or((up == "HTTT").then_some(Encoding::HtttSn))
            .ok_or_else(|| Error::InvalidInstance(format!("unknown encoding `{s}`")))
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum Format {
    #[default]
    Qdimacs,
    Qcir,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Qdimacs => "qdimacs",
            Format::Qcir => "qcir",
        }
    }

    pub fn extension(self) -> &'static str {
        self.name()
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qdimacs" | "cnf" => Ok(Format::Qdimacs),
            "qcir" => Ok(Format::Qcir),
            other => Err(Error::InvalidInstance(format!("unknown format `{other}`"))),
        }
    }
}

/// A game position to encode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    /// Hex position, Black to move.
    Hex(HexBoard),
    /// Claim-free Generalized Hex, Short to move.
    Ghex(GeneralizedHexInstance),
    /// Empty square board with a polyomino goal.
    Httt { shape: Polyomino, size: usize },
}

impl Instance {
    /// `emptyN`, `httt:<shape>:<size>`, or a path to a `.hex` / `.ghex`
    /// file (other extensions are sniffed from the first keyword).
    pub fn load(spec: &str) -> Result<Instance> {
        Self::load_with_shapes(spec, &catalog())
    }

    pub fn load_with_shapes(spec: &str, shapes: &[Polyomino]) -> Result<Instance> {
        if let Some(n) = spec.strip_prefix("empty") {
            if let Ok(n) = n.parse::<usize>() {
                return Ok(Instance::Hex(empty_board(n)?));
            }
        }
        if let Some(rest) = spec.strip_prefix("httt:") {
            let (name, size) = rest
                .rsplit_once(':')
                .ok_or_else(|| Error::InvalidInstance(format!("expected httt:<shape>:<size>, got `{spec}`")))?;
            let size: usize = size
                .parse()
                .map_err(|_| Error::InvalidInstance(format!("bad board size in `{spec}`")))?;
            let shape = find_shape(shapes, name)
                .ok_or_else(|| Error::InvalidInstance(format!("unknown shape `{name}`")))?
                .clone();
            return Ok(Instance::Httt { shape, size });
        }
        let text = fs::read_to_string(spec).map_err(|e| Error::Io(format!("{spec}: {e}")))?;
        Self::parse(&text, Path::new(spec).extension().and_then(|e| e.to_str()))
    }

    /// Parses instance text; `ext` picks the format when given.
    pub fn parse(text: &str, ext: Option<&str>) -> Result<Instance> {
        let is_ghex = match ext {
            Some("ghex") => true,
            Some("hex") => false,
            _ => text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with('c'))
                .is_some_and(|l| l.starts_with("p ")),
        };
        if is_ghex {
            Ok(Instance::Ghex(parse_ghex(text)?))
        } else {
            Ok(Instance::Hex(parse_hex(text)?))
        }
    }
}

/// An encoder's output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Cnf(QbfCnf),
    Circuit(QbfCircuit),
}

impl Formula {
    /// CNF view: circuits are lowered with Tseitin.
    pub fn to_cnf(&self) -> QbfCnf {
        match self {
            Formula::Cnf(f) => f.clone(),
            Formula::Circuit(c) => tseitin(c),
        }
    }

    /// Circuit view: clauses become `or` gates under one `and`.
    pub fn to_circuit(&self) -> QbfCircuit {
        match self {
            Formula::Cnf(f) => f.to_circuit(),
            Formula::Circuit(c) => c.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoded {
    pub formula: Formula,
    /// Variable-map comment lines (explicit encodings only).
    pub comments: Vec<String>,
}

impl Encoded {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Qdimacs => write_qdimacs_with_comments(&self.formula.to_cnf(), &self.comments),
            Format::Qcir => write_qcir(&self.formula.to_circuit()),
        }
    }

    /// Sizes of the QDIMACS form.
    pub fn stats(&self) -> EncodingStats {
        EncodingStats::of_cnf(&self.formula.to_cnf())
    }
}

impl From<ExplicitEncoding> for Encoded {
    fn from(e: ExplicitEncoding) -> Self {
        Encoded {
            comments: e.vars.as_ref().map(|v| v.comments()).unwrap_or_default(),
            formula: Formula::Cnf(e.formula),
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct EncodeOptions {
    /// Restrict Black's first move on HTTT boards.
    pub symmetry_reduce: bool,
}

fn unsupported(enc: Encoding, what: &str) -> Error {
    Error::InvalidInstance(format!("encoding {enc} does not apply to {what}"))
}

/// Runs the preprocessing pipeline and the chosen encoder.
pub fn encode_instance(inst: &Instance, enc: Encoding, d: usize, opts: EncodeOptions) -> Result<Encoded> {
    let circuit = |c: QbfCircuit| Encoded {
        formula: Formula::Circuit(c),
        comments: Vec::new(),
    };
    match inst {
        Instance::Httt { shape, size } => match enc {
            Encoding::HtttSn => Ok(circuit(encode_httt_sn(shape, *size, d, opts.symmetry_reduce)?.circuit)),
            Encoding::Ea => Ok(encode_ea(&httt_game(shape, *size)?, d)?.into()),
            Encoding::La => Ok(circuit(encode_la(&httt_game(shape, *size)?, d)?.circuit)),
            Encoding::Sa => Ok(circuit(encode_sa(&httt_game(shape, *size)?, d)?.circuit)),
            _ => Err(unsupported(enc, "polyomino boards")),
        },
        Instance::Hex(board) => {
            if enc == Encoding::Et {
                return Ok(encode_et(&transversal(board, d)?, d)?.into());
            }
            let red = reduce_board(board, d)?;
            info!(
                "reduced board: {} nodes, {} filled, {} contracted",
                red.instance.num_nodes(),
                red.report.filled,
                red.report.contracted
            );
            encode_graph(&red.instance, enc, d)
        }
        Instance::Ghex(g) => {
            if enc == Encoding::Et {
                return Err(unsupported(enc, "Generalized Hex files (it needs a Hex board)"));
            }
            let (h, report) = reduce_ghex(g, d)?;
            info!("reduced instance: {} nodes, {} removed", h.num_nodes(), report.filled);
            encode_graph(&h, enc, d)
        }
    }
}

fn encode_graph(g: &GeneralizedHexInstance, enc: Encoding, d: usize) -> Result<Encoded> {
    let circuit = |c: QbfCircuit| Encoded {
        formula: Formula::Circuit(c),
        comments: Vec::new(),
    };
    let game = || game_from_ghex(g, black_moves(d));
    match enc {
        Encoding::Ea => Ok(encode_ea(&game(), d)?.into()),
        Encoding::La => Ok(circuit(encode_la(&game(), d)?.circuit)),
        Encoding::Sa => Ok(circuit(encode_sa(&game(), d)?.circuit)),
        Encoding::En => Ok(encode_en(g, d)?.into()),
        Encoding::Ln => Ok(circuit(encode_ln(&stutter_closure(g), d)?.circuit)),
        Encoding::Sn => Ok(circuit(encode_sn(&stutter_closure(g), d)?.circuit)),
        Encoding::Et | Encoding::HtttSn => Err(unsupported(enc, "this instance")),
    }
}

/// Convenience: the explicit game behind a graph instance.
pub fn instance_game(inst: &Instance, d: usize) -> Result<GameInstance> {
    match inst {
        Instance::Httt { shape, size } => httt_game(shape, *size),
        Instance::Hex(board) => Ok(game_from_ghex(&reduce_board(board, d)?.instance, black_moves(d))),
        Instance::Ghex(g) => Ok(game_from_ghex(&reduce_ghex(g, d)?.0, black_moves(d))),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SolverResult {
    Sat,
    Unsat,
    Timeout,
    Memout,
    Error,
}

impl SolverResult {
    pub fn name(self) -> &'static str {
        match self {
            SolverResult::Sat => "SAT",
            SolverResult::Unsat => "UNSAT",
            SolverResult::Timeout => "TIMEOUT",
            SolverResult::Memout => "MEMOUT",
            SolverResult::Error => "ERROR",
        }
    }

    pub fn verdict(self) -> Option<bool> {
        match self {
            SolverResult::Sat => Some(true),
            SolverResult::Unsat => Some(false),
            _ => None,
        }
    }
}

impl fmt::Display for SolverResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One solver run.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub result: SolverResult,
    pub time_s: f64,
    /// Peak resident memory of the child; `None` when not measured.
    pub mem_mb: Option<f64>,
    /// Captured stdout and stderr (or the error message).
    pub output: String,
}

#[derive(Clone, Debug)]
pub struct Limits {
    pub timeout: Option<Duration>,
    pub mem_mb: Option<u64>,
    /// Variable limit of the internal evaluator.
    pub internal_var_limit: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            timeout: None,
            mem_mb: None,
            internal_var_limit: 200,
        }
    }
}

pub const INTERNAL_SOLVER: &str = "internal";

/// Matches `SAT`/`UNSAT`-style answer lines, optionally prefixed by `s` or
/// `s cnf`.
pub const DEFAULT_ANSWER_PATTERN: &str =
    r"(?mi)^\s*(?:s\s+(?:cnf\s+)?)?(SAT|UNSAT|SATISFIABLE|UNSATISFIABLE|TRUE|FALSE|1|0)\s*$";

/// How to invoke a solver. The formula path replaces a `{}` argument or
/// is appended.
#[derive(Clone, Debug)]
pub struct Solver {
    pub command: String,
    pub answer: Regex,
}

impl Solver {
    pub fn new(command: impl Into<String>) -> Self {
        Solver {
            command: command.into(),
            answer: Regex::new(DEFAULT_ANSWER_PATTERN).unwrap(),
        }
    }

    pub fn with_answer_pattern(mut self, pattern: &str) -> Result<Self> {
        self.answer = Regex::new(pattern)
            .map_err(|e| Error::InvalidInstance(format!("bad answer pattern: {e}")))?;
        Ok(self)
    }

    pub fn internal() -> Self {
        Self::new(INTERNAL_SOLVER)
    }

    /// `POSQBF_SOLVER` if set, else the internal evaluator.
    pub fn from_env() -> Self {
        match std::env::var("POSQBF_SOLVER") {
            Ok(cmd) if !cmd.trim().is_empty() => Self::new(cmd),
            _ => Self::internal(),
        }
    }

    pub fn is_internal(&self) -> bool {
        self.command.trim() == INTERNAL_SOLVER
    }

    fn interpret(&self, output: &str) -> Option<SolverResult> {
        let caps = self.answer.captures_iter(output).last()?;
        let word = caps
            .get(1)
            .or_else(|| caps.get(0))
            .unwrap()
            .as_str()
            .trim()
            .to_ascii_uppercase();
        match word.as_str() {
            "SAT" | "SATISFIABLE" | "TRUE" | "1" => Some(SolverResult::Sat),
            "UNSAT" | "UNSATISFIABLE" | "FALSE" | "0" => Some(SolverResult::Unsat),
            _ => None,
        }
    }
}

/// Solves a formula file in-process. `Format` is taken from the extension
/// (`.qcir`) or the header.
pub fn solve_internal(path: &Path, limits: &Limits) -> Outcome {
    let start = Instant::now();
    let run = || -> Result<bool> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let ev = Evaluator::with_limit(limits.internal_var_limit);
        if text.trim_start().starts_with("#QCIR") {
            ev.evaluate_circuit(&parse_qcir(&text)?)
        } else {
            ev.evaluate(&parse_qdimacs(&text)?)
        }
    };
    let (result, output) = match limits.timeout {
        None => to_result(run()),
        Some(limit) => {
            let path = path.to_path_buf();
            let limits = limits.clone();
            let (tx, rx) = mpsc::channel();
            // A timed-out evaluation is abandoned; the thread finishes on its own.
            std::thread::spawn(move || {
                let _ = tx.send(solve_internal(&path, &Limits { timeout: None, ..limits }));
            });
            match rx.recv_timeout(limit) {
                Ok(o) => (o.result, o.output),
                Err(_) => (SolverResult::Timeout, String::new()),
            }
        }
    };
    Outcome {
        result,
        time_s: start.elapsed().as_secs_f64(),
        mem_mb: None,
        output,
    }
}

fn to_result(r: Result<bool>) -> (SolverResult, String) {
    match r {
        Ok(true) => (SolverResult::Sat, "s SAT\n".into()),
        Ok(false) => (SolverResult::Unsat, "s UNSAT\n".into()),
        Err(e) => (SolverResult::Error, e.to_string()),
    }
}

/// Runs `solver` on `formula` with `cwd` as working directory.
pub fn run_solver(formula: &Path, solver: &Solver, limits: &Limits, cwd: Option<&Path>) -> Outcome {
    if solver.is_internal() {
        return solve_internal(formula, limits);
    }
    let start = Instant::now();
    let error = |msg: String| Outcome {
        result: SolverResult::Error,
        time_s: start.elapsed().as_secs_f64(),
        mem_mb: None,
        output: msg,
    };
    let mut words: Vec<String> = solver.command.split_whitespace().map(String::from).collect();
    if words.is_empty() {
        return error("empty solver command".into());
    }
    let file = formula.to_string_lossy().into_owned();
    match words.iter_mut().find(|w| w.as_str() == "{}") {
        Some(w) => *w = file,
        None => words.push(file),
    }
    let dir = match cwd {
        Some(d) => d.to_path_buf(),
        None => std::env::temp_dir(),
    };
    let out_path = dir.join(format!("solver-{}.out", std::process::id()));
    let out_file = match fs::File::create(&out_path) {
        Ok(f) => f,
        Err(e) => return error(format!("cannot create {}: {e}", out_path.display())),
    };
    let err_file = match out_file.try_clone() {
        Ok(f) => f,
        Err(e) => return error(e.to_string()),
    };
    let mut cmd = Command::new(&words[0]);
    cmd.args(&words[1..])
        .current_dir(&dir)
        .stdin(Stdio::null())
        .stdout(out_file)
        .stderr(err_file);
    let mem_bytes = limits.mem_mb.map(|m| m.saturating_mul(1 << 20));
    // SAFETY: only async-signal-safe calls between fork and exec.
    unsafe {
        cmd.pre_exec(move || {
            libc::setpgid(0, 0);
            if let Some(b) = mem_bytes {
                let lim = libc::rlimit {
                    rlim_cur: b as libc::rlim_t,
                    rlim_max: b as libc::rlim_t,
                };
                libc::setrlimit(libc::RLIMIT_AS, &lim);
            }
            Ok(())
        });
    }
    let child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) => return error(format!("cannot start `{}`: {e}", words[0])),
    };
    let pid = child.id() as libc::pid_t;
    debug!("started solver pid {pid}: {}", words.join(" "));
    let mut status: libc::c_int = 0;
    // SAFETY: zeroed rusage is a valid initial value.
    let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
    let mut timed_out = false;
    loop {
        // SAFETY: pid is our child; status and usage are valid out-pointers.
        let r = unsafe { libc::wait4(pid, &mut status, libc::WNOHANG, &mut usage) };
        if r == pid {
            break;
        }
        if r < 0 {
            return error(format!("wait failed: {}", std::io::Error::last_os_error()));
        }
        if let Some(t) = limits.timeout {
            if !timed_out && start.elapsed() >= t {
                timed_out = true;
                // SAFETY: signalling our own process group.
                unsafe {
                    libc::kill(-pid, libc::SIGKILL);
                }
            }
        }
        std::thread::sleep(Duration::from_millis(5));
    }
    let time_s = start.elapsed().as_secs_f64();
    let mem_mb = Some(usage.ru_maxrss as f64 / 1024.0);
    let mut output = String::new();
    if let Ok(mut f) = fs::File::open(&out_path) {
        let _ = f.read_to_string(&mut output);
    }
    let _ = fs::remove_file(&out_path);
    let exit = libc::WIFEXITED(status).then(|| libc::WEXITSTATUS(status));
    let result = if timed_out {
        SolverResult::Timeout
    } else if exit == Some(10) {
        SolverResult::Sat
    } else if exit == Some(20) {
        SolverResult::Unsat
    } else if let Some(r) = solver.interpret(&output) {
        r
    } else if limits.mem_mb.is_some() && looks_like_memout(&output, mem_mb, limits.mem_mb) {
        SolverResult::Memout
    } else {
        SolverResult::Error
    };
    Outcome {
        result,
        time_s,
        mem_mb,
        output,
    }
}

fn looks_like_memout(output: &str, peak: Option<f64>, limit: Option<u64>) -> bool {
    let text = output.to_ascii_lowercase();
    ["out of memory", "bad_alloc", "cannot allocate", "memoryerror", "memory limit"]
        .iter()
        .any(|p| text.contains(p))
        || matches!((peak, limit), (Some(p), Some(l)) if p >= 0.9 * l as f64)
}

/// One benchmark row.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub instance: String,
    pub encoding: String,
    pub depth: usize,
    pub format: Format,
    pub result: SolverResult,
    pub time_s: f64,
    pub mem_mb: Option<f64>,
    /// Solver output or error message; not part of the CSV.
    pub output: String,
}

pub const CSV_HEADER: [&str; 7] = ["instance", "encoding", "depth", "format", "result", "time_s", "mem_mb"];

/// A manifest row: instance, encoding, depth, and optionally solver and
/// format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub instance: String,
    pub encoding: String,
    pub depth: usize,
    pub solver: Option<String>,
    pub format: Option<Format>,
}

/// CSV manifest with a header naming at least `instance,encoding,depth`;
/// optional columns `solver` and `format`.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (Some(ci), Some(ce), Some(cd)) = (col("instance"), col("encoding"), col("depth")) else {
        return Err(Error::parse(1, "manifest header needs instance,encoding,depth"));
    };
    let (cs, cf) = (col("solver"), col("format"));
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let field = |i: Option<usize>| i.and_then(|i| rec.get(i)).filter(|s| !s.is_empty());
        let get = |i: usize, what: &str| {
            rec.get(i)
                .filter(|s| !s.is_empty())
                .ok_or_else(|| Error::parse(line, format!("missing {what}")))
        };
        let depth = get(cd, "depth")?
            .parse()
            .map_err(|_| Error::parse(line, "depth must be a number"))?;
        out.push(ManifestEntry {
            instance: get(ci, "instance")?.to_string(),
            encoding: get(ce, "encoding")?.to_string(),
            depth,
            solver: field(cs).map(String::from),
            format: field(cf)
                .map(|f| f.parse().map_err(|e: Error| Error::parse(line, e.to_string())))
                .transpose()?,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub jobs: usize,
    pub limits: Limits,
    /// Used for rows without a solver column.
    pub default_solver: Solver,
    pub default_format: Format,
    /// Relative instance paths are resolved against this directory.
    pub base_dir: PathBuf,
    pub encode: EncodeOptions,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            jobs: 1,
            limits: Limits::default(),
            default_solver: Solver::from_env(),
            default_format: Format::Qdimacs,
            base_dir: PathBuf::from("."),
            encode: EncodeOptions::default(),
        }
    }
}

fn resolve(base: &Path, instance: &str) -> String {
    let looks_like_path = !(instance.starts_with("httt:")
        || instance.strip_prefix("empty").is_some_and(|n| n.parse::<usize>().is_ok()));
    if looks_like_path && Path::new(instance).is_relative() {
        base.join(instance).to_string_lossy().into_owned()
    } else {
        instance.to_string()
    }
}

fn run_entry(entry: &ManifestEntry, opts: &BenchOptions) -> RunRecord {
    let format = entry.format.unwrap_or(opts.default_format);
    let mut rec = RunRecord {
        instance: entry.instance.clone(),
        encoding: entry.encoding.clone(),
        depth: entry.depth,
        format,
        result: SolverResult::Error,
        time_s: 0.0,
        mem_mb: None,
        output: String::new(),
    };
    let work = || -> Result<Outcome> {
        let enc: Encoding = entry.encoding.parse()?;
        let inst = Instance::load(&resolve(&opts.base_dir, &entry.instance))?;
        let text = encode_instance(&inst, enc, entry.depth, opts.encode)?.render(format);
        let dir = tempfile::tempdir()?;
        let path = dir.path().join(format!("formula.{}", format.extension()));
        fs::write(&path, text)?;
        let solver = match &entry.solver {
            Some(cmd) => Solver {
                command: cmd.clone(),
                answer: opts.default_solver.answer.clone(),
            },
            None => opts.default_solver.clone(),
        };
        Ok(run_solver(&path, &solver, &opts.limits, Some(dir.path())))
    };
    match work() {
        Ok(o) => {
            rec.result = o.result;
            rec.time_s = o.time_s;
            rec.mem_mb = o.mem_mb;
            rec.output = o.output;
        }
        Err(e) => {
            warn!("{} {} d={}: {e}", entry.instance, entry.encoding, entry.depth);
            rec.output = e.to_string();
        }
    }
    rec
}

/// Runs every manifest entry (up to `opts.jobs` at a time); rows come back
/// in manifest order.
pub fn bench(entries: &[ManifestEntry], opts: &BenchOptions) -> Vec<RunRecord> {
    let next = AtomicUsize::new(0);
    let jobs = opts.jobs.clamp(1, entries.len().max(1));
    let mut rows: Vec<Option<RunRecord>> = vec![None; entries.len()];
    std::thread::scope(|s| {
        let workers: Vec<_> = (0..jobs)
            .map(|_| {
                s.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(e) = entries.get(i) else { break };
                        done.push((i, run_entry(e, opts)));
                    }
                    done
                })
            })
            .collect();
        for w in workers {
            for (i, r) in w.join().expect("bench worker panicked") {
                rows[i] = Some(r);
            }
        }
    });
    rows.into_iter().map(|r| r.expect("every row is run")).collect()
}

pub fn write_csv(records: &[RunRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).unwrap();
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.encoding.clone(),
            r.depth.to_string(),
            r.format.to_string(),
            r.result.to_string(),
            format!("{:.3}", r.time_s),
            r.mem_mb.map(|m| format!("{m:.1}")).unwrap_or_default(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}
