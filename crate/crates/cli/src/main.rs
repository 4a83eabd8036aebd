use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use posgame_core::engine::{play, value, GameError};
use posgame_core::experiment::{derive_seed, fit_exponents, master_seed_from_env, run_experiment, to_csv, to_json, ExperimentConfig};
use posgame_core::invariants::{ratio_f64, summarize, Rational};
use posgame_core::randmodels::{extract_sparse_family, sample_gnm, sample_gnp, ExtractMode};
use posgame_core::solver::solve;
use posgame_core::strategies::registry::{make_client, make_waiter, StrategyContext};
use posgame_core::{Board, Pattern, WinningFamily};

#[derive(Parser)]
#[command(name = "posgame", about = "Biased Waiter-Client games on graphs", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the density invariants of a pattern.
    Invariants {
        /// Name like k4, p3, s4, c5, or edges:0-1,1-2
        graph: String,
    },
    /// Exact value of a tiny game, with a line of optimal play.
    Solve {
        #[arg(long)]
        board: String,
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 1)]
        b: u64,
        /// Count canonical copies only (blow-up boards).
        #[arg(long)]
        canonical: bool,
    },
    /// Play one game between two named strategies.
    Play {
        #[arg(long)]
        waiter: String,
        #[arg(long)]
        client: String,
        #[arg(long)]
        board: String,
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 1)]
        b: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        canonical: bool,
        /// Write the transcript here.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Run a sweep config and emit CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; overrides the config's output key. Stdout if neither is set.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the JSON mirror here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Print fitted exponents to stderr.
        #[arg(long)]
        fit: bool,
    },
    /// Sample random blow-up subgraphs and extract sparse families; per-seed CSV.
    Randlab {
        #[arg(long)]
        pattern: String,
        /// Part size.
        #[arg(long)]
        n: usize,
        /// Edge probability (exclusive with --m).
        #[arg(long)]
        p: Option<f64>,
        /// Exact edge count.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value = "greedy")]
        mode: String,
    },
}

enum Failure {
    Config(anyhow::Error),
    Illegal(anyhow::Error),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn config<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(anyhow!("{e}"))
}

fn game_failure(e: GameError) -> Failure {
    match e {
        GameError::Illegal { .. } | GameError::Strategy { .. } => Failure::Illegal(e.into()),
        other => Failure::Other(other.into()),
    }
}

fn fraction(r: Option<Rational>) -> String {
    match r {
        Some(r) => format!("{} ({:.6})", r, ratio_f64(r)),
        None => "undefined".into(),
    }
}

fn family_for(pattern: &str, canonical: bool) -> Result<(Pattern, WinningFamily), Failure> {
    let h = Pattern::from_spec(pattern).map_err(config)?;
    let fam = if canonical { WinningFamily::canonical(h.clone()) } else { WinningFamily::copies(h.clone()) };
    Ok((h, fam))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Invariants { graph } => {
            let h = Pattern::from_spec(&graph).map_err(config)?;
            let s = summarize(&h).map_err(config)?;
            println!("pattern      {h}");
            println!("m            {}", fraction(s.m));
            println!("m2           {}", fraction(s.m2));
            println!("m2-balanced  {}", s.m2_balanced.map(|b| b.to_string()).unwrap_or_else(|| "undefined".into()));
            println!("g1           {}", fraction(s.g1));
            println!("g2           {}", fraction(s.g2));
        }
        Cmd::Solve { board, pattern, b, canonical } => {
            let board = Board::from_descriptor(&board).map_err(config)?;
            let (_, fam) = family_for(&pattern, canonical)?;
            let sol = solve(&board, &fam, b).map_err(config)?;
            println!("value = {}", sol.value);
            print!("{}", sol.principal_variation.to_text());
        }
        Cmd::Play { waiter, client, board, pattern, b, seed, canonical, transcript } => {
            let board = Arc::new(Board::from_descriptor(&board).map_err(config)?);
            let (_, fam) = family_for(&pattern, canonical)?;
            let ctx = StrategyContext { board: &board, family: &fam, b, bad_family: None };
            let mut w = make_waiter(&waiter, &ctx).map_err(config)?;
            let mut c = make_client(&client, &ctx).map_err(config)?;
            let master = master_seed_from_env().map_err(config)?;
            let state = play(board.clone(), b, w.as_mut(), c.as_mut(), derive_seed(master, seed)).map_err(game_failure)?;
            let v = value(&state, &fam).map_err(game_failure)?;
            println!("value = {v}");
            println!("rounds = {}", state.transcript().rounds());
            if let Some(path) = transcript {
                fs::write(&path, state.transcript().to_text()).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Cmd::Sweep { config: path, out, json, fit } => {
            let text = fs::read_to_string(&path).map_err(|e| config(format!("{}: {e}", path.display())))?;
            let cfg = ExperimentConfig::parse(&text).map_err(config)?;
            let master = master_seed_from_env().map_err(config)?;
            let records = run_experiment(&cfg, master).map_err(config)?;
            for r in records.iter().filter(|r| r.error.is_some()) {
                log::warn!("cell n={} b={} seed={}: {}", r.n, r.b, r.seed, r.error.as_deref().unwrap());
            }
            let csv = to_csv(&records);
            match out.or(cfg.output.clone()) {
                Some(p) => fs::write(&p, csv).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{csv}"),
            }
            if let Some(p) = json {
                fs::write(&p, to_json(&records)).with_context(|| format!("writing {}", p.display()))?;
            }
            if fit {
                match fit_exponents(&records) {
                    Ok(f) => eprintln!("slope_n = {:?}, slope_b = {:?}, intercept = {:?}", f.slope_n, f.slope_b, f.intercept),
                    Err(e) => eprintln!("fit: {e}"),
                }
            }
        }
        Cmd::Randlab { pattern, n, p, m, seeds, c, mode } => {
            let h = Pattern::from_spec(&pattern).map_err(config)?;
            let board = Board::blowup(&h, n).map_err(config)?;
            let mode: ExtractMode = mode.parse().map_err(config)?;
            if p.is_some() == m.is_some() {
                return Err(config("give exactly one of --p and --m"));
            }
            let master = master_seed_from_env().map_err(config)?;
            println!("n,p,m,seed,copies_found,family_size,p1,p2,p3,p4,p5");
            for seed in 0..seeds {
                let s = derive_seed(master, seed);
                let g = match (p, m) {
                    (Some(p), _) => sample_gnp(&board, p, s),
                    (_, Some(m)) => sample_gnm(&board, m, s),
                    _ => unreachable!(),
                }
                .map_err(config)?;
                let ex = extract_sparse_family(&board, &g, c, mode, s).map_err(|e| Failure::Other(e.into()))?;
                let f = ex.report.flags();
                println!(
                    "{n},{},{},{seed},{},{},{},{},{},{},{}",
                    p.map(|x| x.to_string()).unwrap_or_default(),
                    m.map(|x| x.to_string()).unwrap_or_default(),
                    ex.found,
                    ex.family.len(),
                    f[0],
                    f[1],
                    f[2],
                    f[3],
                    f[4]
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Illegal(e)) => {
            eprintln!("illegal move: {e:#}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
