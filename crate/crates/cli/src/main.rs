//! Command-line front end: group files in, deterministic reports out.
//!
//! Every subcommand reads one presentation (`--group FILE`, or a built-in
//! three-generator example with all exponents 7), runs one computation
//! from the `relhyp` crate, and prints either human-readable text or
//! machine-readable line records (`--output machine`). Identical flags
//! and seeds produce byte-identical machine output.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 bad input or
//! unusable presentation, 3 a resource cap was exceeded.

mod output;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use output::{wtok, yes_no, Rec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relhyp::artin::{dehn_solve, parabolic_intersection_check};
use relhyp::{
    bigon_scan_records, delta_report, run_pipeline_sample_records, run_selected, verify_pipeline,
    AcceptanceConfig, BallOptions, ConedBall, DehnOptions, DihedralPair, Error, GroupSpec, MCoeff,
    MinSyllStatus, ScanCaps, ScanMode, ScanReport, SearchBounds, Status, Word, DEFAULT_SEED,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "artin-relhyp",
    version,
    about = "Normal forms, word problem, and coned-off geometry for Artin groups with large exponents"
)]
struct Cli {
    /// Group presentation file (default: built-in n=3, all m=7)
    #[arg(long, global = true, value_name = "FILE")]
    group: Option<PathBuf>,

    /// Report style: human-readable text or key=value line records
    #[arg(long, global = true, value_enum, default_value = "text")]
    output: OutputMode,

    /// Group-vertex cap for ball construction
    #[arg(
        long,
        global = true,
        env = "ARTIN_RELHYP_MAX_VERTICES",
        default_value_t = 500_000,
        value_name = "N"
    )]
    max_vertices: usize,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Text,
    Machine,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Compare all geodesics between vertex pairs
    Vertex,
    /// Compare geodesics between sampled endpoint pairs near a common cone
    Claim,
}

impl ModeArg {
    fn to_scan(self) -> ScanMode {
        match self {
            ModeArg::Vertex => ScanMode::VertexBigons,
            ModeArg::Claim => ScanMode::ClaimQuadrilaterals,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Summarize the presentation and its classification flags
    Info,

    /// Print the defining relator of one finite-exponent generator pair
    Relator {
        #[arg(long, num_args = 2, value_names = ["I", "J"], required = true)]
        pair: Vec<u16>,
    },

    /// Both normal forms of a word in a two-generator subgroup
    Nf {
        #[arg(long, num_args = 2, value_names = ["I", "J"], required = true)]
        pair: Vec<u16>,
        /// Word tokens, dot- or space-separated (`a1.a2^-3`; `1` = identity)
        #[arg(required = true, value_name = "WORD")]
        word: Vec<String>,
    },

    /// Decide whether a word names the identity
    Wp {
        /// Restrict to one two-generator subgroup and use its exact oracles
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Vec<u16>,
        /// Accept finite exponents below 4 (nontrivial verdicts turn heuristic)
        #[arg(long)]
        allow_small: bool,
        #[arg(required = true, value_name = "WORD")]
        word: Vec<String>,
    },

    /// Syllable-minimal representative in a two-generator subgroup
    Minsyll {
        #[arg(long, num_args = 2, value_names = ["I", "J"], required = true)]
        pair: Vec<u16>,
        /// Candidate syllable-count bound (default: the input's count)
        #[arg(long, value_name = "N")]
        max_syllables: Option<usize>,
        /// Per-syllable exponent bound (default: input letters + 2m)
        #[arg(long, value_name = "E")]
        max_exp: Option<u64>,
        #[arg(required = true, value_name = "WORD")]
        word: Vec<String>,
    },

    /// Shorten a word by relator replacements until none applies
    Reduce {
        /// Replace subwords missing up to 4 syllables instead of 3
        #[arg(long)]
        strong: bool,
        /// Accept finite exponents below 4 (reduction turns heuristic)
        #[arg(long)]
        allow_small: bool,
        #[arg(required = true, value_name = "WORD")]
        word: Vec<String>,
    },

    /// Enumerate common elements of two two-generator subgroups
    Intersect {
        /// A generator pair; give this flag exactly twice
        #[arg(long = "pair", num_args = 2, value_names = ["I", "J"],
              action = ArgAction::Append, required = true)]
        pairs: Vec<u16>,
        /// Letter-length radius of the enumeration in each subgroup
        #[arg(long, default_value_t = 4)]
        radius: u64,
    },

    /// Build the coned-off ball and report its size
    Ball {
        #[arg(long, default_value_t = 3)]
        radius: u64,
        /// Extra certified shell depth beyond the radius
        #[arg(long, default_value_t = 1)]
        slack: u64,
        /// Also print one machine record per vertex, cone, and edge
        #[arg(long)]
        export: bool,
    },

    /// Distance between two ball vertices in the subdivided metric
    Dist {
        #[arg(long, value_name = "WORD")]
        from: String,
        #[arg(long, value_name = "WORD")]
        to: String,
        #[arg(long, default_value_t = 3)]
        radius: u64,
        #[arg(long, default_value_t = 1)]
        slack: u64,
    },

    /// Enumerate geodesics between two ball vertices
    Geo {
        #[arg(long, value_name = "WORD")]
        from: String,
        #[arg(long, value_name = "WORD")]
        to: String,
        /// Most geodesics to list
        #[arg(long, default_value_t = 10)]
        cap: usize,
        #[arg(long, default_value_t = 3)]
        radius: u64,
        #[arg(long, default_value_t = 1)]
        slack: u64,
    },

    /// Run the geodesic pipeline and check every asserted property
    Pipeline {
        /// Verify one geodesic from this vertex (with --to); otherwise sample
        #[arg(long, value_name = "WORD", requires = "to")]
        from: Option<String>,
        #[arg(long, value_name = "WORD", requires = "from")]
        to: Option<String>,
        /// Sampled geodesic count when no endpoints are given
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        radius: u64,
        #[arg(long, default_value_t = 1)]
        slack: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },

    /// Scan geodesic bigons or claim quadrilaterals for thinness
    Bigons {
        #[arg(long, value_enum, default_value = "vertex")]
        mode: ModeArg,
        #[arg(long, default_value_t = 3)]
        radius: u64,
        #[arg(long, default_value_t = 1)]
        slack: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Most geodesics enumerated per endpoint pair
        #[arg(long, default_value_t = 64, value_name = "N")]
        cap_geodesics: usize,
        /// Scan every Nth source vertex (1 = all)
        #[arg(long, default_value_t = 1, value_name = "N")]
        stride: usize,
        /// Quadrilateral count in claim mode
        #[arg(long, default_value_t = 500, value_name = "N")]
        samples: usize,
        /// Fail (exit 1) when the maximum delta exceeds this many units
        #[arg(long, value_name = "D")]
        bound: Option<u32>,
        /// Scan without the enlarged ball's distance-stability filter
        #[arg(long)]
        no_stability: bool,
    },

    /// Compare thinness maxima across several presentations
    Delta {
        /// Group file; repeatable (default: three built-in examples)
        #[arg(long = "spec", value_name = "FILE")]
        specs: Vec<PathBuf>,
        #[arg(long, default_value_t = 3)]
        radius: u64,
        #[arg(long, default_value_t = 1)]
        slack: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Most geodesics enumerated per endpoint pair
        #[arg(long, default_value_t = 64, value_name = "N")]
        cap_geodesics: usize,
    },

    /// Run the acceptance criteria and report each verdict
    Accept {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Comma-separated criterion numbers to run (default: all eight)
        #[arg(long, value_delimiter = ',', value_name = "N,..")]
        only: Vec<usize>,
    },
}

/// A failed run, keyed by exit code.
#[derive(Debug)]
enum Failure {
    /// A checked property did not hold (exit 1).
    Assertion(String),
    /// Bad input, unusable presentation, or a word outside scope (exit 2).
    Usage(String),
    /// A configured resource cap was exceeded (exit 3).
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::ResourceCap(_) => Failure::Resource(e.to_string()),
            Error::DehnStalled(_) => Failure::Assertion(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("resource cap: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let spec = load_spec(cli.group.as_deref())?;
    let mode = cli.output;
    match &cli.cmd {
        Cmd::Info => cmd_info(&spec, mode),
        Cmd::Relator { pair } => cmd_relator(&spec, pair2(pair), mode),
        Cmd::Nf { pair, word } => cmd_nf(&spec, pair2(pair), &parse_word_args(word)?, mode),
        Cmd::Wp {
            pair,
            allow_small,
            word,
        } => cmd_wp(&spec, pair, *allow_small, &parse_word_args(word)?, mode),
        Cmd::Minsyll {
            pair,
            max_syllables,
            max_exp,
            word,
        } => {
            let bounds = SearchBounds {
                max_syllables: *max_syllables,
                max_exp: *max_exp,
            };
            cmd_minsyll(&spec, pair2(pair), bounds, &parse_word_args(word)?, mode)
        }
        Cmd::Reduce {
            strong,
            allow_small,
            word,
        } => cmd_reduce(&spec, *strong, *allow_small, &parse_word_args(word)?, mode),
        Cmd::Intersect { pairs, radius } => cmd_intersect(&spec, pairs, *radius, mode),
        Cmd::Ball {
            radius,
            slack,
            export,
        } => cmd_ball(&spec, ball_opts(cli, *radius, *slack), *export, mode),
        Cmd::Dist {
            from,
            to,
            radius,
            slack,
        } => cmd_dist(&spec, ball_opts(cli, *radius, *slack), from, to, mode),
        Cmd::Geo {
            from,
            to,
            cap,
            radius,
            slack,
        } => cmd_geo(&spec, ball_opts(cli, *radius, *slack), from, to, *cap, mode),
        Cmd::Pipeline {
            from,
            to,
            samples,
            radius,
            slack,
            seed,
        } => cmd_pipeline(
            &spec,
            ball_opts(cli, *radius, *slack),
            from.as_deref().zip(to.as_deref()),
            *samples,
            *seed,
            mode,
        ),
        Cmd::Bigons {
            mode: scan_mode,
            radius,
            slack,
            seed,
            cap_geodesics,
            stride,
            samples,
            bound,
            no_stability,
        } => {
            let caps = ScanCaps {
                cap_geodesics: *cap_geodesics,
                source_stride: *stride,
                samples: *samples,
            };
            cmd_bigons(
                &spec,
                ball_opts(cli, *radius, *slack),
                scan_mode.to_scan(),
                &caps,
                *seed,
                *bound,
                *no_stability,
                mode,
            )
        }
        Cmd::Delta {
            specs,
            radius,
            slack,
            seed,
            cap_geodesics,
        } => {
            let caps = ScanCaps {
                cap_geodesics: *cap_geodesics,
                ..ScanCaps::default()
            };
            cmd_delta(cli, &spec, specs, (*radius, *slack), &caps, *seed, mode)
        }
        Cmd::Accept { seed, only } => cmd_accept(cli, spec.clone(), *seed, only, mode),
    }
}

fn load_spec(path: Option<&Path>) -> Result<GroupSpec, Failure> {
    match path {
        None => Ok(GroupSpec::uniform(3, 7)),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
            Ok(GroupSpec::parse(&text)?)
        }
    }
}

/// Joins word arguments, accepting both the dotted output syntax and
/// space-separated tokens.
fn parse_word_args(args: &[String]) -> Result<Word, Failure> {
    parse_word_str(&args.join(" "))
}

fn parse_word_str(s: &str) -> Result<Word, Failure> {
    Ok(Word::parse(&s.replace('.', " "))?)
}

fn pair2(v: &[u16]) -> (u16, u16) {
    (v[0], v[1])
}

fn ball_opts(cli: &Cli, radius: u64, slack: u64) -> BallOptions {
    BallOptions {
        radius,
        slack,
        max_vertices: cli.max_vertices,
        dehn: DehnOptions::default(),
    }
}

fn locate_vertex(ball: &ConedBall, w: &Word) -> Result<u32, Failure> {
    match ball.locate(w) {
        Ok(v) => Ok(v),
        Err(Error::OutsideBall) => Err(Failure::Usage(format!(
            "`{}` walks outside the radius-{} ball; raise --radius",
            wtok(w),
            ball.radius()
        ))),
        Err(e) => Err(e.into()),
    }
}

fn cmd_info(spec: &GroupSpec, mode: OutputMode) -> Result<(), Failure> {
    let n = spec.n();
    match mode {
        OutputMode::Text => {
            println!("generators: {n}");
            for i in 1..=n {
                for j in i + 1..=n {
                    println!("pair (a{i}, a{j}): m = {}", spec.m(i, j)?);
                }
            }
            println!("finite pairs: {}", spec.finite_pairs().len());
            println!(
                "extra-large (all finite m >= 4): {}",
                yes_no(spec.is_extra_large())
            );
            println!(
                "theorem scope (all finite m >= 7): {}",
                yes_no(spec.is_theorem_scope())
            );
        }
        OutputMode::Machine => {
            Rec::new("spec")
                .kv("n", n)
                .kv("finite_pairs", spec.finite_pairs().len())
                .kv("extra_large", spec.is_extra_large())
                .kv("theorem_scope", spec.is_theorem_scope())
                .emit();
            for i in 1..=n {
                for j in i + 1..=n {
                    Rec::new("pair")
                        .kv("i", i)
                        .kv("j", j)
                        .kv("m", spec.m(i, j)?)
                        .emit();
                }
            }
        }
    }
    Ok(())
}

fn cmd_relator(spec: &GroupSpec, (i, j): (u16, u16), mode: OutputMode) -> Result<(), Failure> {
    let pair = DihedralPair::from_spec(spec, i, j)?;
    let r = pair.relator();
    match mode {
        OutputMode::Text => {
            println!("pair (a{i}, a{j}), m = {}", pair.m);
            println!("relator: {}", wtok(&r));
            println!("letters: {}, syllables: {}", r.letter_len(), r.syll_len());
        }
        OutputMode::Machine => {
            Rec::new("relator")
                .kv("i", i)
                .kv("j", j)
                .kv("m", pair.m)
                .kv("word", wtok(&r))
                .kv("letters", r.letter_len())
                .kv("syllables", r.syll_len())
                .emit();
        }
    }
    Ok(())
}

/// Renders central-quotient syllables; tag 0 is the first generator's
/// class, tag 1 the second's.
fn amalgam_sylls(sylls: &[(u8, i64)]) -> String {
    if sylls.is_empty() {
        return "1".to_string();
    }
    sylls
        .iter()
        .map(|&(tag, v)| {
            let name = if tag == 0 { "x" } else { "y" };
            if v == 1 {
                name.to_string()
            } else {
                format!("{name}^{v}")
            }
        })
        .collect::<Vec<_>>()
        .join(".")
}

fn cmd_nf(
    spec: &GroupSpec,
    (i, j): (u16, u16),
    w: &Word,
    mode: OutputMode,
) -> Result<(), Failure> {
    let pair = DihedralPair::from_spec(spec, i, j)?;
    let g = pair.garside_nf(w)?;
    let a = pair.amalgam_nf(w)?;
    if g.is_trivial() != a.is_trivial() {
        return Err(Failure::Assertion(format!(
            "normal forms disagree on `{}`: garside {}, central quotient {}",
            wtok(w),
            g.is_trivial(),
            a.is_trivial()
        )));
    }
    let factors: Vec<String> = g
        .factors
        .iter()
        .map(|s| wtok(&pair.simple_word(*s)))
        .collect();
    let canonical = pair.canonical_word(&g);
    match mode {
        OutputMode::Text => {
            println!("word: {}", wtok(w));
            println!(
                "garside: inf = {}, canonical length = {}",
                g.inf,
                g.canonical_len()
            );
            if !factors.is_empty() {
                println!("factors: {}", factors.join(" | "));
            }
            println!("canonical word: {}", wtok(&canonical));
            let classes = if pair.m % 2 == 1 {
                format!("x: half-twist class, y: class of a{i}.a{j}")
            } else {
                format!("x: class of a{i}.a{j}, y: class of a{i}")
            };
            println!(
                "central quotient: central = {}, image = {}  ({classes})",
                a.central,
                amalgam_sylls(&a.sylls)
            );
            println!("trivial: {}", yes_no(g.is_trivial()));
        }
        OutputMode::Machine => {
            Rec::new("nf")
                .kv("i", i)
                .kv("j", j)
                .kv("word", wtok(w))
                .kv("garside_inf", g.inf)
                .kv("garside_len", g.canonical_len())
                .kv("garside_factors", factors.join("|"))
                .kv("canonical", wtok(&canonical))
                .kv("central", a.central)
                .kv("image", amalgam_sylls(&a.sylls))
                .kv("trivial", g.is_trivial())
                .emit();
        }
    }
    Ok(())
}

fn cmd_wp(
    spec: &GroupSpec,
    pair: &[u16],
    allow_small: bool,
    w: &Word,
    mode: OutputMode,
) -> Result<(), Failure> {
    if !pair.is_empty() {
        let (i, j) = pair2(pair);
        let p = DihedralPair::from_spec(spec, i, j)?;
        let g = p.garside_trivial(w)?;
        let a = p.amalgam_trivial(w)?;
        if g != a {
            return Err(Failure::Assertion(format!(
                "normal forms disagree on `{}`: garside {g}, central quotient {a}"
            , wtok(w))));
        }
        match mode {
            OutputMode::Text => {
                println!("word: {}", wtok(w));
                println!("subgroup: (a{i}, a{j}), m = {}", p.m);
                println!("trivial: {} (both normal forms agree)", yes_no(g));
            }
            OutputMode::Machine => {
                Rec::new("wp")
                    .kv("method", "oracles")
                    .kv("i", i)
                    .kv("j", j)
                    .kv("word", wtok(w))
                    .kv("garside", g)
                    .kv("quotient", a)
                    .kv("trivial", g)
                    .emit();
            }
        }
        return Ok(());
    }
    let opts = DehnOptions {
        allow_non_extra_large: allow_small,
        ..DehnOptions::default()
    };
    let trace = dehn_solve(spec, w, &opts)?;
    let trivial = trace.result.is_empty();
    match mode {
        OutputMode::Text => {
            println!("word: {}", wtok(w));
            println!("trivial: {}", yes_no(trivial));
            println!("replacements: {}", trace.steps.len());
            if !trivial {
                println!("residual: {}", wtok(&trace.result));
            }
        }
        OutputMode::Machine => {
            Rec::new("wp")
                .kv("method", "reduction")
                .kv("word", wtok(w))
                .kv("trivial", trivial)
                .kv("steps", trace.steps.len())
                .kv("residual", wtok(&trace.result))
                .emit();
        }
    }
    Ok(())
}

fn cmd_minsyll(
    spec: &GroupSpec,
    (i, j): (u16, u16),
    bounds: SearchBounds,
    w: &Word,
    mode: OutputMode,
) -> Result<(), Failure> {
    let pair = DihedralPair::from_spec(spec, i, j)?;
    let res = pair.min_syllable_rep(w, bounds)?;
    let status = match res.status {
        MinSyllStatus::Exhaustive => "exhaustive",
        MinSyllStatus::Bounded => "bounded",
    };
    match mode {
        OutputMode::Text => {
            println!("word: {} ({} syllables)", wtok(w), w.syll_len());
            println!(
                "minimal: {} ({} syllables)",
                wtok(&res.word),
                res.word.syll_len()
            );
            println!("search: {status}");
        }
        OutputMode::Machine => {
            Rec::new("minsyll")
                .kv("i", i)
                .kv("j", j)
                .kv("word", wtok(w))
                .kv("syllables_in", w.syll_len())
                .kv("minimal", wtok(&res.word))
                .kv("syllables_out", res.word.syll_len())
                .kv("search", status)
                .emit();
        }
    }
    Ok(())
}

fn cmd_reduce(
    spec: &GroupSpec,
    strong: bool,
    allow_small: bool,
    w: &Word,
    mode: OutputMode,
) -> Result<(), Failure> {
    let opts = DehnOptions {
        slack: if strong { 4 } else { 3 },
        allow_non_extra_large: allow_small,
        ..DehnOptions::default()
    };
    let trace = dehn_solve(spec, w, &opts)?;
    match mode {
        OutputMode::Text => {
            println!("input: {}", wtok(w));
            for (k, step) in trace.steps.iter().enumerate() {
                let v = &step.violation;
                println!(
                    "step {}: pair (a{}, a{}): {} -> inverse of {}",
                    k + 1,
                    v.pair.i,
                    v.pair.j,
                    wtok(&v.v),
                    wtok(&v.u)
                );
                println!("  now: {}", wtok(&step.after));
            }
            println!("result: {}", wtok(&trace.result));
            println!("trivial: {}", yes_no(trace.result.is_empty()));
        }
        OutputMode::Machine => {
            for (k, step) in trace.steps.iter().enumerate() {
                let v = &step.violation;
                Rec::new("step")
                    .kv("index", k + 1)
                    .kv("i", v.pair.i)
                    .kv("j", v.pair.j)
                    .kv("from", wtok(&v.v))
                    .kv("to_inverse_of", wtok(&v.u))
                    .kv("after", wtok(&step.after))
                    .emit();
            }
            Rec::new("reduce")
                .kv("input", wtok(w))
                .kv("slack", opts.slack)
                .kv("steps", trace.steps.len())
                .kv("result", wtok(&trace.result))
                .kv("trivial", trace.result.is_empty())
                .emit();
        }
    }
    Ok(())
}

fn cmd_intersect(
    spec: &GroupSpec,
    pairs: &[u16],
    radius: u64,
    mode: OutputMode,
) -> Result<(), Failure> {
    if pairs.len() != 4 {
        return Err(Failure::Usage(
            "give --pair exactly twice, e.g. --pair 1 2 --pair 1 3".into(),
        ));
    }
    let p1 = (pairs[0], pairs[1]);
    let p2 = (pairs[2], pairs[3]);
    let report = parabolic_intersection_check(spec, p1, p2, radius, &DehnOptions::default())?;
    let shared = match report.shared_gen {
        Some(g) => format!("a{g}"),
        None => "none".to_string(),
    };
    match mode {
        OutputMode::Text => {
            println!(
                "subgroups (a{}, a{}) and (a{}, a{}), radius {radius}",
                p1.0, p1.1, p2.0, p2.1
            );
            println!("shared generator: {shared}");
            println!("common elements: {}", report.common.len());
            for (w1, w2) in &report.common {
                println!("  {} = {}", wtok(w1), wtok(w2));
            }
            println!(
                "within prediction: {}",
                yes_no(report.pass)
            );
        }
        OutputMode::Machine => {
            for (w1, w2) in &report.common {
                Rec::new("common").kv("w1", wtok(w1)).kv("w2", wtok(w2)).emit();
            }
            Rec::new("intersect")
                .kv("pair1", format!("{},{}", p1.0, p1.1))
                .kv("pair2", format!("{},{}", p2.0, p2.1))
                .kv("radius", radius)
                .kv("shared", &shared)
                .kv("common", report.common.len())
                .kv("pass", report.pass)
                .emit();
        }
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Assertion(
            "intersection exceeds the shared-generator prediction".into(),
        ))
    }
}

fn cmd_ball(
    spec: &GroupSpec,
    opts: BallOptions,
    export: bool,
    mode: OutputMode,
) -> Result<(), Failure> {
    let ball = ConedBall::build(spec, &opts)?;
    match mode {
        OutputMode::Text => {
            println!("radius: {} (+{} shell)", ball.radius(), ball.slack());
            println!(
                "group vertices: {} ({} within the radius)",
                ball.vertex_count(),
                ball.core_vertex_count()
            );
            println!("cones: {}", ball.cone_count());
            println!("subdivided edges: {}", ball.edge_count());
            println!("metric nodes: {}", ball.node_count());
            println!(
                "coset partition stabilized: {}",
                yes_no(ball.stabilized())
            );
        }
        OutputMode::Machine => {
            ball_record(&ball).emit();
        }
    }
    if export {
        export_ball(&ball);
    }
    Ok(())
}

fn ball_record(ball: &ConedBall) -> Rec {
    Rec::new("ball")
        .kv("radius", ball.radius())
        .kv("slack", ball.slack())
        .kv("vertices", ball.vertex_count())
        .kv("core_vertices", ball.core_vertex_count())
        .kv("cones", ball.cone_count())
        .kv("edges", ball.edge_count())
        .kv("nodes", ball.node_count())
        .kv("stabilized", ball.stabilized())
}

/// One record per vertex, cone, and edge; ids match the metric node ids,
/// midpoints included. Cayley edges cost 2 units (via a midpoint), cone
/// edges 1.
fn export_ball(ball: &ConedBall) {
    let v = ball.vertex_count();
    let c = ball.cone_count();
    for id in 0..v as u32 {
        Rec::new("vertex")
            .kv("id", id)
            .kv("label", ball.node_label(id))
            .kv("depth", ball.depth_of(id))
            .emit();
    }
    for (idx, cone) in ball.cones().iter().enumerate() {
        let id = (v + idx) as u32;
        Rec::new("cone")
            .kv("id", id)
            .kv("label", ball.node_label(id))
            .kv("i", cone.i)
            .kv("j", cone.j)
            .kv("members", cone.members_full.len())
            .kv("core_members", cone.members.len())
            .kv("min_depth", cone.min_depth)
            .emit();
    }
    for (idx, &(x, y, gen)) in ball.gamma_edges().iter().enumerate() {
        Rec::new("edge")
            .kv("type", "cayley")
            .kv("x", x)
            .kv("y", y)
            .kv("gen", format!("a{gen}"))
            .kv("mid", v + c + idx)
            .kv("units", 2)
            .emit();
    }
    for (idx, cone) in ball.cones().iter().enumerate() {
        for &m in &cone.members {
            Rec::new("edge")
                .kv("type", "cone")
                .kv("cone", v + idx)
                .kv("v", m)
                .kv("units", 1)
                .emit();
        }
    }
}

fn cmd_dist(
    spec: &GroupSpec,
    opts: BallOptions,
    from: &str,
    to: &str,
    mode: OutputMode,
) -> Result<(), Failure> {
    let ball = ConedBall::build(spec, &opts)?;
    let wf = parse_word_str(from)?;
    let wt = parse_word_str(to)?;
    let a = locate_vertex(&ball, &wf)?;
    let b = locate_vertex(&ball, &wt)?;
    let d = ball.dist(a, b);
    match mode {
        OutputMode::Text => {
            println!(
                "d({}, {}) = {} units (a Cayley edge is 2, a cone edge 1)",
                wtok(&wf),
                wtok(&wt),
                d
            );
        }
        OutputMode::Machine => {
            Rec::new("dist")
                .kv("from", wtok(&wf))
                .kv("to", wtok(&wt))
                .kv("d", d)
                .emit();
        }
    }
    Ok(())
}

fn cmd_geo(
    spec: &GroupSpec,
    opts: BallOptions,
    from: &str,
    to: &str,
    cap: usize,
    mode: OutputMode,
) -> Result<(), Failure> {
    let ball = ConedBall::build(spec, &opts)?;
    let wf = parse_word_str(from)?;
    let wt = parse_word_str(to)?;
    let a = locate_vertex(&ball, &wf)?;
    let b = locate_vertex(&ball, &wt)?;
    let set = ball.geodesics(a, b, cap);
    let d = ball.dist(a, b);
    match mode {
        OutputMode::Text => {
            println!(
                "d = {d} units, geodesics: {}{}",
                set.total,
                if set.truncated {
                    format!(" (showing {})", set.paths.len())
                } else {
                    String::new()
                }
            );
            for (k, p) in set.paths.iter().enumerate() {
                let labels: Vec<String> =
                    p.nodes.iter().map(|&x| ball.node_label(x)).collect();
                println!("{:>3}: {}", k + 1, labels.join(" -> "));
            }
        }
        OutputMode::Machine => {
            Rec::new("geo")
                .kv("from", wtok(&wf))
                .kv("to", wtok(&wt))
                .kv("d", d)
                .kv("total", set.total)
                .kv("shown", set.paths.len())
                .kv("truncated", set.truncated)
                .emit();
            for (k, p) in set.paths.iter().enumerate() {
                let labels: Vec<String> =
                    p.nodes.iter().map(|&x| ball.node_label(x)).collect();
                Rec::new("geodesic")
                    .kv("index", k + 1)
                    .kv("len", p.len_units())
                    .kv("nodes", labels.join(";"))
                    .emit();
            }
        }
    }
    Ok(())
}

fn opt_units(u: Option<u32>) -> String {
    match u {
        Some(v) => v.to_string(),
        None => "-".to_string(),
    }
}

fn cmd_pipeline(
    spec: &GroupSpec,
    opts: BallOptions,
    endpoints: Option<(&str, &str)>,
    samples: usize,
    seed: u64,
    mode: OutputMode,
) -> Result<(), Failure> {
    let ball = ConedBall::build(spec, &opts)?;
    let dehn = opts.dehn.clone();
    if let Some((from, to)) = endpoints {
        let wf = parse_word_str(from)?;
        let wt = parse_word_str(to)?;
        let a = locate_vertex(&ball, &wf)?;
        let b = locate_vertex(&ball, &wt)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = ball
            .sample_geodesic(a, b, &mut rng)
            .ok_or_else(|| Failure::Usage("endpoints are not connected".into()))?;
        let report = verify_pipeline(&ball, &alpha, &dehn)?;
        match mode {
            OutputMode::Text => {
                println!(
                    "geodesic: {} -> {} ({} units)",
                    wtok(&wf),
                    wtok(&wt),
                    alpha.len_units()
                );
                println!(
                    "blocks: {} ({} cone, {} Cayley)",
                    report.blocks, report.cone_blocks, report.gamma_blocks
                );
                println!("condensed word: {}", wtok(&report.u));
                println!("strongly reduced: {}", yes_no(report.strongly_reduced));
                if !report.theorem_scope {
                    println!("note: finite exponents below 7; bounds are advisory");
                }
                if report.minsyll_bounded > 0 {
                    println!(
                        "syllable searches hitting bounds: {}",
                        report.minsyll_bounded
                    );
                }
                println!(
                    "hausdorff units: alpha/beta {}, beta/gamma {}, alpha/gamma {}",
                    opt_units(report.hausdorff_alpha_beta),
                    opt_units(report.hausdorff_beta_gamma),
                    opt_units(report.hausdorff_alpha_gamma)
                );
                if report.ok() {
                    println!("all checks passed");
                } else {
                    for f in &report.failures {
                        println!("check failed: {f}");
                    }
                }
            }
            OutputMode::Machine => {
                for (k, f) in report.failures.iter().enumerate() {
                    Rec::new("pipeline_failure")
                        .kv("index", k + 1)
                        .kv("text", f)
                        .emit();
                }
                Rec::new("pipeline")
                    .kv("from", wtok(&wf))
                    .kv("to", wtok(&wt))
                    .kv("len", alpha.len_units())
                    .kv("blocks", report.blocks)
                    .kv("cone_blocks", report.cone_blocks)
                    .kv("gamma_blocks", report.gamma_blocks)
                    .kv("u", wtok(&report.u))
                    .kv("strongly_reduced", report.strongly_reduced)
                    .kv("minsyll_bounded", report.minsyll_bounded)
                    .kv("h_ab", opt_units(report.hausdorff_alpha_beta))
                    .kv("h_bg", opt_units(report.hausdorff_beta_gamma))
                    .kv("h_ag", opt_units(report.hausdorff_alpha_gamma))
                    .kv("ok", report.ok())
                    .emit();
            }
        }
        return if report.ok() {
            Ok(())
        } else {
            Err(Failure::Assertion(format!(
                "{} pipeline check(s) failed",
                report.failures.len()
            )))
        };
    }

    let enlarged = ConedBall::build(
        spec,
        &BallOptions {
            radius: opts.radius + 1,
            slack: opts.slack + 1,
            ..opts.clone()
        },
    )?;
    let capture = mode == OutputMode::Machine;
    let (batch, runs) =
        run_pipeline_sample_records(&ball, Some(&enlarged), samples, seed, &dehn, capture)?;
    match mode {
        OutputMode::Text => {
            println!("runs: {}, passed: {}", batch.runs, batch.passed);
            println!(
                "skipped unstable endpoint pairs: {}",
                batch.skipped_unstable
            );
            println!(
                "comparison paths leaving the ball: beta {}, gamma {}",
                batch.beta_exits, batch.gamma_exits
            );
            println!(
                "syllable searches hitting bounds: {}",
                batch.minsyll_bounded
            );
            println!("max hausdorff(alpha, gamma): {} units", batch.max_alpha_gamma);
            for (label, msgs) in &batch.failures {
                for m in msgs {
                    println!("failed [{label}]: {m}");
                }
            }
        }
        OutputMode::Machine => {
            for r in &runs {
                Rec::new("run")
                    .kv("from", &r.from)
                    .kv("to", &r.to)
                    .kv("len", r.len)
                    .kv("blocks", r.blocks)
                    .kv("h_ag", opt_units(r.hausdorff_alpha_gamma))
                    .kv("ok", r.ok)
                    .emit();
            }
            for (label, msgs) in &batch.failures {
                for (k, m) in msgs.iter().enumerate() {
                    Rec::new("pipeline_failure")
                        .kv("run", label)
                        .kv("index", k + 1)
                        .kv("text", m)
                        .emit();
                }
            }
            Rec::new("pipeline_batch")
                .kv("runs", batch.runs)
                .kv("passed", batch.passed)
                .kv("skipped_unstable", batch.skipped_unstable)
                .kv("beta_exits", batch.beta_exits)
                .kv("gamma_exits", batch.gamma_exits)
                .kv("minsyll_bounded", batch.minsyll_bounded)
                .kv("max_alpha_gamma", batch.max_alpha_gamma)
                .kv("ok", batch.passed == batch.runs)
                .emit();
        }
    }
    if batch.passed == batch.runs {
        Ok(())
    } else {
        Err(Failure::Assertion(format!(
            "{} of {} pipeline runs failed",
            batch.runs - batch.passed,
            batch.runs
        )))
    }
}

fn scan_caption(mode: ScanMode) -> &'static str {
    match mode {
        ScanMode::VertexBigons => "vertex bigons",
        ScanMode::ClaimQuadrilaterals => "claim quadrilaterals",
    }
}

fn histogram_str(report: &ScanReport) -> String {
    report
        .histogram
        .iter()
        .map(|(d, c)| format!("{d}:{c}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn print_scan_text(report: &ScanReport) {
    println!(
        "{}: max {} over {} stable pairs ({} skipped, {} truncated)",
        scan_caption(report.mode),
        report.max_delta,
        report.pairs_scanned,
        report.pairs_skipped_unstable,
        report.truncated_pairs
    );
    println!("histogram: {}", histogram_str(report));
    if let Some(w) = &report.witness {
        match report.mode {
            ScanMode::VertexBigons => {
                println!("widest: {} .. {} (delta {})", w.a, w.b, w.delta)
            }
            ScanMode::ClaimQuadrilaterals => {
                println!("widest: {} vs {} (delta {})", w.a, w.b, w.delta)
            }
        }
    }
}

fn scan_record(report: &ScanReport) -> Rec {
    let mode_key = match report.mode {
        ScanMode::VertexBigons => "vertex",
        ScanMode::ClaimQuadrilaterals => "claim",
    };
    let (wa, wb) = match &report.witness {
        Some(w) => (w.a.clone(), w.b.clone()),
        None => ("-".to_string(), "-".to_string()),
    };
    Rec::new("scan")
        .kv("mode", mode_key)
        .kv("pairs", report.pairs_scanned)
        .kv("skipped", report.pairs_skipped_unstable)
        .kv("truncated", report.truncated_pairs)
        .kv("max_delta", report.max_delta)
        .kv("histogram", histogram_str(report))
        .kv("witness_a", wa)
        .kv("witness_b", wb)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bigons(
    spec: &GroupSpec,
    opts: BallOptions,
    scan_mode: ScanMode,
    caps: &ScanCaps,
    seed: u64,
    bound: Option<u32>,
    no_stability: bool,
    mode: OutputMode,
) -> Result<(), Failure> {
    let ball = ConedBall::build(spec, &opts)?;
    let enlarged = if no_stability {
        None
    } else {
        Some(ConedBall::build(
            spec,
            &BallOptions {
                radius: opts.radius + 1,
                slack: opts.slack + 1,
                ..opts.clone()
            },
        )?)
    };
    let capture = mode == OutputMode::Machine;
    let (report, records) =
        bigon_scan_records(&ball, enlarged.as_ref(), scan_mode, caps, seed, capture);
    match mode {
        OutputMode::Text => print_scan_text(&report),
        OutputMode::Machine => {
            for r in &records {
                Rec::new("pair")
                    .kv("a_from", &r.a.0)
                    .kv("a_to", &r.a.1)
                    .kv("b_from", &r.b.0)
                    .kv("b_to", &r.b.1)
                    .kv("delta", r.delta)
                    .kv("compared", r.compared)
                    .kv("total", r.total)
                    .kv("truncated", r.truncated)
                    .emit();
            }
            scan_record(&report).emit();
        }
    }
    match bound {
        Some(b) if report.max_delta > b => Err(Failure::Assertion(format!(
            "max delta {} exceeds the requested bound {b}",
            report.max_delta
        ))),
        _ => Ok(()),
    }
}

fn spec_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn delta_family(
    cli: &Cli,
    loaded: &GroupSpec,
    files: &[PathBuf],
) -> Result<Vec<(String, GroupSpec)>, Failure> {
    if !files.is_empty() {
        let mut out = Vec::new();
        for f in files {
            out.push((spec_label(f), load_spec(Some(f))?));
        }
        return Ok(out);
    }
    if cli.group.is_some() {
        let label = spec_label(cli.group.as_deref().unwrap());
        return Ok(vec![(label, loaded.clone())]);
    }
    Ok(vec![
        ("e7".to_string(), GroupSpec::uniform(3, 7)),
        (
            "mixed789".to_string(),
            GroupSpec::new(
                3,
                &[
                    (1, 2, MCoeff::Finite(7)),
                    (1, 3, MCoeff::Finite(8)),
                    (2, 3, MCoeff::Finite(9)),
                ],
            )
            .expect("well-formed example"),
        ),
        ("n4all7".to_string(), GroupSpec::uniform(4, 7)),
    ])
}

fn cmd_delta(
    cli: &Cli,
    loaded: &GroupSpec,
    files: &[PathBuf],
    (radius, slack): (u64, u64),
    caps: &ScanCaps,
    seed: u64,
    mode: OutputMode,
) -> Result<(), Failure> {
    let family = delta_family(cli, loaded, files)?;
    let mut reports: Vec<(String, ScanReport)> = Vec::new();
    for (label, spec) in &family {
        let ball = ConedBall::build(spec, &ball_opts(cli, radius, slack))?;
        let enlarged = ConedBall::build(spec, &ball_opts(cli, radius + 1, slack + 1))?;
        for scan_mode in [ScanMode::VertexBigons, ScanMode::ClaimQuadrilaterals] {
            let (r, _) = bigon_scan_records(
                &ball,
                Some(&enlarged),
                scan_mode,
                caps,
                seed,
                false,
            );
            let suffix = match scan_mode {
                ScanMode::VertexBigons => "vertex",
                ScanMode::ClaimQuadrilaterals => "claim",
            };
            reports.push((format!("{label}/{suffix}"), r));
        }
    }
    let rows: Vec<(String, &ScanReport)> = reports
        .iter()
        .map(|(l, r)| (l.clone(), r))
        .collect();
    let table = delta_report(rows);
    match mode {
        OutputMode::Text => {
            for row in &table.rows {
                println!(
                    "{}: max {} over {} comparisons",
                    row.label, row.max_delta, row.pairs
                );
            }
            println!(
                "common bound: {} (threshold {}) — {}",
                table.common_bound,
                table.threshold,
                if table.within_threshold {
                    "within"
                } else {
                    "exceeded"
                }
            );
        }
        OutputMode::Machine => {
            for row in &table.rows {
                Rec::new("delta_row")
                    .kv("label", &row.label)
                    .kv("max_delta", row.max_delta)
                    .kv("pairs", row.pairs)
                    .emit();
            }
            Rec::new("delta")
                .kv("common_bound", table.common_bound)
                .kv("threshold", table.threshold)
                .kv("within", table.within_threshold)
                .emit();
        }
    }
    if table.within_threshold {
        Ok(())
    } else {
        Err(Failure::Assertion(format!(
            "common bound {} exceeds the threshold {}",
            table.common_bound, table.threshold
        )))
    }
}

fn cmd_accept(
    cli: &Cli,
    subject: GroupSpec,
    seed: u64,
    only: &[usize],
    mode: OutputMode,
) -> Result<(), Failure> {
    if let Some(bad) = only.iter().find(|i| !(1..=8).contains(*i)) {
        return Err(Failure::Usage(format!(
            "criterion {bad} does not exist; pick from 1..=8"
        )));
    }
    let cfg = AcceptanceConfig {
        subject,
        seed,
        max_vertices: cli.max_vertices,
    };
    let indices: Vec<usize> = if only.is_empty() {
        (1..=8).collect()
    } else {
        only.to_vec()
    };
    let outcomes = run_selected(&cfg, &indices);
    for out in &outcomes {
        match mode {
            OutputMode::Text => {
                println!("{}", out.line());
                for d in &out.details {
                    println!("    {d}");
                }
            }
            OutputMode::Machine => {
                let status = match &out.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                    Status::Skipped(_) => "skip",
                };
                let notice = match &out.status {
                    Status::Skipped(n) => n.clone(),
                    _ => "-".to_string(),
                };
                Rec::new("criterion")
                    .kv("index", out.index)
                    .kv("status", status)
                    .kv("notice", notice)
                    .kv("name", out.name)
                    .kv("observed", &out.observed)
                    .kv("bound", out.bound)
                    .emit();
                for (k, d) in out.details.iter().enumerate() {
                    Rec::new("detail")
                        .kv("index", out.index)
                        .kv("line", k + 1)
                        .kv("text", d)
                        .emit();
                }
            }
        }
    }
    if outcomes.iter().any(|o| o.hit_resource_cap()) {
        return Err(Failure::Resource("a criterion hit a resource cap".into()));
    }
    if outcomes.iter().any(|o| !o.passed()) {
        return Err(Failure::Assertion("a criterion failed".into()));
    }
    Ok(())
}
