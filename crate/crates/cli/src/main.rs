use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::Value;

use diffeq_core::diffpoly::{verify_window, DiffSystem, Ring, Witness};
use diffeq_core::field::{set_degree_cap, FieldKind, Rational};
use diffeq_core::monoid::{MonoidKind, WindowSpec};
use diffeq_core::piecewise::{
    detector_map, hilbert10_map, parse_point, pn_index_of, pn_polynomial, tn_map, PiecewiseError, PiecewiseMap,
};
use diffeq_core::poly::Poly;
use diffeq_core::reductions::{
    compile_diophantine, compile_domino, compile_dynamics, compile_free_monoid, normalize_order, CompiledSystem,
    DominoSet, DynamicsLayout, NormalizedSystem,
};
use diffeq_core::witness::{
    build_diophantine_witness, build_dynamics_witness, build_free_monoid_witness, finite_tiling_search_capped,
    tiling_to_witness, transport_normalized_witness, BuildError, SearchMode, Tiling, TILE_SEARCH_CAP,
};

/// Exit status: 1 a check failed, 2 bad input, 3 the pieces of a map do not partition.
enum Failure {
    Check(String),
    Input(String),
    Partition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
            Failure::Partition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Input(m) | Failure::Partition(m) => m,
        }
    }
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

impl From<PiecewiseError> for Failure {
    fn from(e: PiecewiseError) -> Self {
        if e.is_partition_violation() {
            Failure::Partition(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Trajectory { .. } | BuildError::NotASolution(_) | BuildError::InsufficientZeros { .. } => {
                Failure::Check(e.to_string())
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "diffeq", version, about = "Difference equations over monoids: compile, iterate, witness, verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a problem into a difference system (JSON on stdout)
    Compile {
        #[command(subcommand)]
        what: CompileCmd,
        /// Print the variable legend to stderr
        #[arg(long, global = true)]
        explain: bool,
    },
    /// Iterate a piecewise map and print the orbit as CSV
    Iterate(IterateArgs),
    /// Build a witness for a compiled system (JSON on stdout)
    Witness {
        #[command(subcommand)]
        what: WitnessCmd,
    },
    /// Check a witness against a system on its window
    Verify { system: PathBuf, witness: PathBuf },
    /// Convert between an index N and the polynomial P_N
    Pn(PnArgs),
    /// Search for a tiling of a k×k square or torus
    TileSearch(TileArgs),
}

#[derive(Args)]
struct MapArgs {
    /// tn<N>, detector, hilbert10 (with --poly) or a map JSON file
    #[arg(long)]
    map: Option<String>,
    /// Polynomial for the hilbert10 map
    #[arg(long)]
    poly: Option<String>,
}

#[derive(Subcommand)]
enum CompileCmd {
    /// Orbit reachability for a piecewise map
    Dynamics {
        /// JSON with "map", "V" and optionally "monoid"; replaces the flags
        file: Option<PathBuf>,
        #[command(flatten)]
        map: MapArgs,
        /// Equations of the start set, comma separated
        #[arg(long = "v", value_delimiter = ',')]
        v: Vec<String>,
        #[arg(long, default_value = "nat")]
        monoid: MonoidKind,
    },
    /// Diophantine equation
    Diophantine {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "nat")]
        monoid: MonoidKind,
    },
    /// Domino set
    Domino {
        file: PathBuf,
        #[arg(long, default_value = "int2")]
        monoid: MonoidKind,
    },
    /// ℕ-system with an inequation, moved to the free monoid on {a, b}
    FreeMonoid {
        /// JSON with "vars", "equations" and "g"
        file: PathBuf,
    },
}

#[derive(Args)]
struct IterateArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Start point, comma separated
    #[arg(long, allow_hyphen_values = true)]
    start: String,
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value = "q")]
    field: FieldKind,
    /// Coordinate (1-based) whose first zero is reported; defaults to the last
    #[arg(long)]
    coord: Option<usize>,
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Orbit witness for a compiled dynamics system
    Dynamics {
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value = "q")]
        field: FieldKind,
        /// Window such as 0..120
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// Index at which the orbit starts
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        offset: i64,
    },
    /// Zig-zag witness from an integer solution
    Diophantine {
        #[arg(long)]
        poly: String,
        /// Solution, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<i64>,
        #[arg(long, default_value = "nat")]
        monoid: MonoidKind,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Witness from a tiling file
    Domino {
        tiling: PathBuf,
        #[arg(long, default_value = "int2")]
        monoid: MonoidKind,
        /// Defaults to the tiled rectangle, one cell larger on each side when periodic
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Word-indexed witness from an ℕ-witness of the original system
    FreeMonoid {
        file: PathBuf,
        /// ℕ-witness of the system in FILE
        #[arg(long)]
        nat_witness: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PnArgs {
    #[arg(long)]
    index: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
}

#[derive(Args)]
struct TileArgs {
    dominoes: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "torus")]
    mode: SearchMode,
    #[arg(long, default_value_t = TILE_SEARCH_CAP)]
    cap: usize,
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn print_json(v: &Value) -> CliResult {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(input)?;
    writeln!(out).map_err(input)
}

fn parse_poly(text: &str) -> Result<Poly, Failure> {
    Poly::parse(text).map_err(|e| input(format!("polynomial '{text}': {e}")))
}

/// Resolves `--map` and returns the map with its customary start set.
fn resolve_map(args: &MapArgs) -> Result<(PiecewiseMap, Option<Vec<Poly>>), Failure> {
    let name = args.map.as_deref().ok_or_else(|| input("--map is required"))?;
    if let Some(n) = name.strip_prefix("tn") {
        if let Ok(n) = n.parse::<usize>() {
            if n == 0 {
                return Err(input("tn needs n >= 1"));
            }
            let v = (0..n).map(Poly::var).collect();
            return Ok((tn_map(n), Some(v)));
        }
    }
    match name {
        "detector" => {
            let v = ["x2", "x3", "x4", "x5-1"].iter().map(|s| Poly::parse(s).unwrap()).collect();
            Ok((detector_map(), Some(v)))
        }
        "hilbert10" => {
            let p = parse_poly(args.poly.as_deref().ok_or_else(|| input("hilbert10 needs --poly"))?)?;
            let map = hilbert10_map(&p)?;
            let last = map.dim() - 1;
            // the orbit starts at the origin, so the last coordinate is P(0)^(n!)
            let copies = u32::try_from(last / p.nvars().max(1)).map_err(input)?;
            let p0 = p.constant_term().pow(copies as i32);
            let mut v: Vec<Poly> = (0..last).map(Poly::var).collect();
            v.push(&Poly::var(last) - &Poly::constant(p0));
            Ok((map, Some(v)))
        }
        path => Ok((PiecewiseMap::from_json(&read_json(Path::new(path))?)?, None)),
    }
}

fn cmd_compile(what: CompileCmd, explain: bool) -> CliResult {
    let compiled = match what {
        CompileCmd::Dynamics { file: Some(file), .. } => {
            let v = read_json(&file)?;
            let map = match v.get("map") {
                Some(Value::String(name)) => resolve_map(&MapArgs { map: Some(name.clone()), poly: None })?.0,
                Some(m) => PiecewiseMap::from_json(m)?,
                None => return Err(input("dynamics input needs \"map\"")),
            };
            let start: Vec<String> = serde_json::from_value(v.get("V").cloned().unwrap_or(Value::Null))
                .map_err(|e| input(format!("\"V\": {e}")))?;
            let start = start.iter().map(|s| parse_poly(s)).collect::<Result<Vec<_>, _>>()?;
            let monoid = match v.get("monoid").and_then(Value::as_str) {
                Some(m) => m.parse().map_err(input)?,
                None => MonoidKind::Nat,
            };
            compile_dynamics(&map, &start, monoid).map_err(input)?
        }
        CompileCmd::Dynamics { file: None, map, v, monoid } => {
            let (m, default_v) = resolve_map(&map)?;
            let start = if v.is_empty() {
                default_v.ok_or_else(|| input("--v is required for a map read from a file"))?
            } else {
                v.iter().map(|s| parse_poly(s)).collect::<Result<_, _>>()?
            };
            compile_dynamics(&m, &start, monoid).map_err(input)?
        }
        CompileCmd::Diophantine { poly, monoid } => compile_diophantine(&parse_poly(&poly)?, monoid).map_err(input)?,
        CompileCmd::Domino { file, monoid } => {
            let d = DominoSet::from_json(&read_json(&file)?).map_err(input)?;
            compile_domino(&d, monoid).map_err(input)?
        }
        CompileCmd::FreeMonoid { file } => {
            let ns = read_free_monoid_input(&file)?;
            compile_free_monoid(&ns.ring, &ns.equations, &ns.g).map_err(input)?
        }
    };
    if explain {
        eprint!("{}", compiled.explain());
    }
    print_json(&compiled.to_json())
}

/// Reads `{"vars", "equations", "g"}` over ℕ and normalizes its order.
fn read_free_monoid_input(file: &Path) -> Result<NormalizedSystem, Failure> {
    let v = read_json(file)?;
    let field = |k: &str| v.get(k).cloned().ok_or_else(|| input(format!("input needs \"{k}\"")));
    let vars: Vec<String> = serde_json::from_value(field("vars")?).map_err(input)?;
    let eqs: Vec<String> = serde_json::from_value(field("equations")?).map_err(input)?;
    let g: String = serde_json::from_value(field("g")?).map_err(input)?;
    let ring = Ring::new(MonoidKind::Nat, vars).map_err(input)?;
    let f = eqs.iter().map(|e| ring.parse(e)).collect::<Result<Vec<_>, _>>().map_err(input)?;
    let g = ring.parse(&g).map_err(input)?;
    normalize_order(&ring, &f, &g).map_err(input)
}

fn cmd_iterate(args: IterateArgs) -> CliResult {
    let (map, _) = resolve_map(&args.map)?;
    let start = parse_point(args.field, &args.start).map_err(input)?;
    if start.len() != map.dim() {
        return Err(input(format!("start has {} coordinates, the map needs {}", start.len(), map.dim())));
    }
    let coord = args.coord.unwrap_or(map.dim());
    if coord == 0 || coord > map.dim() {
        return Err(input(format!("--coord must be between 1 and {}", map.dim())));
    }
    let traj = map.iterate(&start, args.steps)?;

    let mut out = csv::Writer::from_writer(io::stdout().lock());
    let mut header = vec!["step".to_string(), "piece".to_string()];
    header.extend((1..=map.dim()).map(|k| format!("x{k}")));
    out.write_record(&header).map_err(input)?;
    for (s, p) in traj.points.iter().enumerate() {
        let piece = if s == 0 { String::new() } else { (traj.piece_trace[s - 1] + 1).to_string() };
        let mut row = vec![s.to_string(), piece];
        row.extend(p.iter().map(ToString::to_string));
        out.write_record(&row).map_err(input)?;
    }
    out.flush().map_err(input)?;
    match traj.first_zero(coord - 1) {
        Some(s) => eprintln!("first zero of x{coord} at step {s}"),
        None => eprintln!("x{coord} has no zero in {} steps", args.steps),
    }
    Ok(())
}

fn cmd_witness(what: WitnessCmd) -> CliResult {
    let w = match what {
        WitnessCmd::Dynamics { system, start, field, window, offset } => {
            let c = CompiledSystem::from_json(&read_json(&system)?).map_err(input)?;
            let layout = DynamicsLayout::from_compiled(&c).map_err(input)?;
            let window = WindowSpec::parse(c.system.kind(), &window).map_err(input)?;
            let start = parse_point(field, &start).map_err(input)?;
            let hi = window.enumerate().iter().filter_map(|m| m.components()).map(|c| c[0]).max().unwrap_or(0);
            let steps = usize::try_from(hi - offset).map_err(|_| input("--offset lies past the window"))?;
            let traj = layout.map.iterate(&start, steps)?;
            build_dynamics_witness(&c, &traj, offset, &window)?
        }
        WitnessCmd::Diophantine { poly, a, monoid, window } => {
            let window = WindowSpec::parse(monoid, &window).map_err(input)?;
            build_diophantine_witness(&parse_poly(&poly)?, &a, &window)?
        }
        WitnessCmd::Domino { tiling, monoid, window } => {
            let (d, t): (DominoSet, Tiling) = Tiling::from_json(&read_json(&tiling)?)?;
            let window = window.map(|w| WindowSpec::parse(monoid, &w)).transpose().map_err(input)?;
            tiling_to_witness(&d, &t, monoid, window)?
        }
        WitnessCmd::FreeMonoid { file, nat_witness, max_len } => {
            let ns = read_free_monoid_input(&file)?;
            let x = Witness::from_json(&read_json(&nat_witness)?).map_err(input)?;
            let nx = transport_normalized_witness(&ns, &x)?;
            let c = compile_free_monoid(&ns.ring, &ns.equations, &ns.g).map_err(input)?;
            build_free_monoid_witness(&c, &nx, &ns.g, max_len)?
        }
    };
    print_json(&w.to_json())
}

fn cmd_verify(system: &Path, witness: &Path) -> CliResult {
    let sv = read_json(system)?;
    let sys = DiffSystem::from_json(&sv).map_err(|e| input(format!("{}: {e}", system.display())))?;
    let w = Witness::from_json(&read_json(witness)?).map_err(|e| input(format!("{}: {e}", witness.display())))?;
    let report = verify_window(&sys, &w).map_err(input)?;
    if let Some(r) = sv.pointer("/source/reduction").and_then(Value::as_str) {
        println!("reduction: {r}");
    }
    println!("{report}");
    if report.is_verified() {
        Ok(())
    } else {
        Err(Failure::Check("witness does not verify on its window".into()))
    }
}

fn cmd_pn(args: PnArgs) -> CliResult {
    if let Some(n) = args.index {
        let n: BigUint = n.trim().parse().map_err(|_| input(format!("'{n}' is not a natural number")))?;
        println!("{}", pn_polynomial(&n));
        return Ok(());
    }
    let q = parse_poly(args.poly.as_deref().unwrap_or_default())?;
    let (n, sign) = pn_index_of(&q).map_err(input)?;
    debug_assert_eq!(pn_polynomial(&n).scale(&Rational::from_integer(sign.into())), q);
    println!("N = {n}");
    println!("sign = {sign}");
    Ok(())
}

fn cmd_tile_search(args: TileArgs) -> CliResult {
    let d = DominoSet::from_json(&read_json(&args.dominoes)?).map_err(input)?;
    match finite_tiling_search_capped(&d, args.k, args.mode, args.cap)? {
        Some(t) => print_json(&t.to_json(&d)),
        None => Err(Failure::Check(format!("no {}x{} tiling exists", args.k, args.k))),
    }
}

fn run(cli: Cli) -> CliResult {
    if let Ok(cap) = std::env::var("DIFFEQ_DEGREE_CAP") {
        let cap: usize = cap.parse().map_err(|_| input(format!("DIFFEQ_DEGREE_CAP='{cap}' is not a number")))?;
        set_degree_cap(cap);
    }
    match cli.command {
        Command::Compile { what, explain } => cmd_compile(what, explain),
        Command::Iterate(a) => cmd_iterate(a),
        Command::Witness { what } => cmd_witness(what),
        Command::Verify { system, witness } => cmd_verify(&system, &witness),
        Command::Pn(a) => cmd_pn(a),
        Command::TileSearch(a) => cmd_tile_search(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
