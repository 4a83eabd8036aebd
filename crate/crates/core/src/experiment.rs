//! Parameter sweeps over matchups, CSV/JSON output and exponent fits.
//!
//! A config is a flat list of `key = value` lines. List-valued keys take
//! comma-separated values. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{play, value, WinningFamily};
use crate::graph::{Board, Pattern};
use crate::invariants::{bias_window, Regime, WindowConstants};
use crate::strategies::potential::initial_potential;
use crate::strategies::registry::{make_client, make_waiter, StrategyContext};

pub const CSV_COLUMNS: [&str; 10] = ["pattern", "board", "n", "b", "seed", "waiter", "client", "value", "normalized", "elapsed_ms"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing key {0:?}")]
    Missing(&'static str),
    #[error("key {key:?}: {message}")]
    Value { key: String, message: String },
    #[error("sweep over {0:?} is empty")]
    EmptySweep(&'static str),
    #[error("seed {0} listed twice")]
    DuplicateSeed(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoardFamily {
    Complete,
    Blowup,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub pattern: String,
    pub board: BoardFamily,
    /// Vertex count for complete boards, part size for blow-ups.
    pub n: Vec<usize>,
    pub b: Vec<u64>,
    pub seeds: Vec<u64>,
    pub waiter: String,
    pub client: String,
    /// Count only canonical copies; defaults to true on blow-ups.
    pub canonical: bool,
    pub regime: Option<Regime>,
    pub alpha: f64,
    pub constants: WindowConstants,
    /// Rerun at a larger admissible bias when the Waiter rejects `b`.
    pub surrogate: bool,
    pub timing: bool,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
}

fn parse_list<T: std::str::FromStr>(key: &str, raw: &str) -> Result<Vec<T>, ConfigError> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| ConfigError::Value { key: key.into(), message: format!("cannot parse {s:?}") }))
        .collect()
}

fn parse_one<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, ConfigError> {
    raw.trim().parse().map_err(|_| ConfigError::Value { key: key.into(), message: format!("cannot parse {raw:?}") })
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line: i + 1, message: "expected key = value".into() })?;
            let k = k.trim().to_string();
            if kv.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(ConfigError::Syntax { line: i + 1, message: format!("duplicate key {k:?}") });
            }
        }
        let mut take = |k: &'static str| kv.remove(k);
        let need = |v: Option<String>, k: &'static str| v.ok_or(ConfigError::Missing(k));

        let pattern = need(take("pattern"), "pattern")?;
        let board = match need(take("board"), "board")?.as_str() {
            "complete" => BoardFamily::Complete,
            "blowup" => BoardFamily::Blowup,
            other => return Err(ConfigError::Value { key: "board".into(), message: format!("unknown board family {other:?}") }),
        };
        let n = parse_list("n", &need(take("n"), "n")?)?;
        let b = parse_list("b", &need(take("b"), "b")?)?;
        let seeds = parse_list("seeds", &take("seeds").unwrap_or_else(|| "0".into()))?;
        let waiter = need(take("waiter"), "waiter")?;
        let client = need(take("client"), "client")?;
        let canonical = match take("canonical") {
            Some(v) => parse_one("canonical", &v)?,
            None => board == BoardFamily::Blowup,
        };
        let regime = take("regime").map(|v| parse_one::<Regime>("regime", &v)).transpose()?;
        let alpha = take("alpha").map(|v| parse_one("alpha", &v)).transpose()?.unwrap_or(0.5);
        let mut c = [1.0f64; 3];
        for (slot, key) in c.iter_mut().zip(["c", "c1", "c2"]) {
            if let Some(v) = take(key) {
                *slot = parse_one(key, &v)?;
            }
        }
        let constants = match take("delta") {
            Some(v) => WindowConstants::ProofGiven { delta: parse_one("delta", &v)? },
            None => WindowConstants::Knobs { c: c[0], c1: c[1], c2: c[2] },
        };
        let surrogate = take("surrogate").map(|v| parse_one("surrogate", &v)).transpose()?.unwrap_or(false);
        let timing = take("timing").map(|v| parse_one("timing", &v)).transpose()?.unwrap_or(false);
        let workers = take("workers").map(|v| parse_one("workers", &v)).transpose()?;
        let output = take("output").map(PathBuf::from);
        if let Some(k) = kv.keys().next() {
            return Err(ConfigError::Value { key: k.clone(), message: "unknown key".into() });
        }

        let cfg = ExperimentConfig {
            pattern,
            board,
            n,
            b,
            seeds,
            waiter,
            client,
            canonical,
            regime,
            alpha,
            constants,
            surrogate,
            timing,
            workers,
            output,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n.is_empty() {
            return Err(ConfigError::EmptySweep("n"));
        }
        if self.b.is_empty() {
            return Err(ConfigError::EmptySweep("b"));
        }
        if self.seeds.is_empty() {
            return Err(ConfigError::EmptySweep("seeds"));
        }
        for (i, s) in self.seeds.iter().enumerate() {
            if self.seeds[..i].contains(s) {
                return Err(ConfigError::DuplicateSeed(*s));
            }
        }
        Pattern::from_spec(&self.pattern).map_err(|e| ConfigError::Value { key: "pattern".into(), message: e.to_string() })?;
        Ok(())
    }

    /// Every (n, b, seed) cell in output order.
    pub fn cells(&self) -> Vec<(usize, u64, u64)> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &b in &self.b {
                for &s in &self.seeds {
                    out.push((n, b, s));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRecord {
    pub pattern: String,
    pub board: String,
    pub n: usize,
    pub b: u64,
    pub seed: u64,
    pub waiter: String,
    pub client: String,
    pub value: Option<u64>,
    /// value / (n^{v(H)} (b+1)^{-e(H)})
    pub normalized: Option<f64>,
    pub elapsed_ms: u128,
    /// Bias actually played when a surrogate run replaced `b`.
    pub played_b: u64,
    pub flags: Vec<String>,
    pub error: Option<String>,
}

/// Mixes the master seed with a cell seed.
pub fn derive_seed(master: u64, seed: u64) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    splitmix(master ^ splitmix(seed))
}

/// The master seed from `POSGAME_SEED`, or 0.
pub fn master_seed_from_env() -> Result<u64, ConfigError> {
    match std::env::var("POSGAME_SEED") {
        Ok(v) => parse_one("POSGAME_SEED", &v),
        Err(_) => Ok(0),
    }
}

fn normalized(h: &Pattern, n: usize, b: u64, v: u64) -> f64 {
    let scale = (n as f64).powi(h.vertex_count() as i32) * ((b + 1) as f64).powi(-(h.edge_count() as i32));
    v as f64 / scale
}

/// Larger biases to try when the Waiter rejects `b`: the board size first,
/// then successive doublings.
fn surrogate_biases(b: u64, n: usize, elements: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if n as u64 > b {
        out.push(n as u64);
    }
    let mut x = b.max(1) * 2;
    while x <= elements as u64 {
        if !out.contains(&x) {
            out.push(x);
        }
        x *= 2;
    }
    out.sort_unstable();
    out
}

fn run_cell(cfg: &ExperimentConfig, h: &Pattern, n: usize, b: u64, seed: u64, master: u64) -> ResultRecord {
    let started = Instant::now();
    let mut rec = ResultRecord {
        pattern: cfg.pattern.clone(),
        board: match cfg.board {
            BoardFamily::Complete => "complete".into(),
            BoardFamily::Blowup => "blowup".into(),
        },
        n,
        b,
        seed,
        waiter: cfg.waiter.clone(),
        client: cfg.client.clone(),
        value: None,
        normalized: None,
        elapsed_ms: 0,
        played_b: b,
        flags: Vec::new(),
        error: None,
    };
    let board = match cfg.board {
        BoardFamily::Complete => Board::complete(n),
        BoardFamily::Blowup => Board::blowup(h, n),
    };
    let board = match board {
        Ok(b) => Arc::new(b),
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    let family = if cfg.canonical { WinningFamily::canonical(h.clone()) } else { WinningFamily::copies(h.clone()) };
    if let Some(regime) = cfg.regime {
        match bias_window(h, n, b, regime, cfg.alpha, cfg.constants) {
            Ok(w) if !w.contains(b) => rec.flags.push("regime-exceeded".into()),
            Ok(_) => {}
            Err(_) => rec.flags.push("regime-undefined".into()),
        }
    }

    let build = |bias: u64| {
        let ctx = StrategyContext { board: &board, family: &family, b: bias, bad_family: None };
        Ok::<_, String>((make_waiter(&cfg.waiter, &ctx).map_err(|e| e.0)?, make_client(&cfg.client, &ctx).map_err(|e| e.0)?))
    };
    let mut played = b;
    let mut pair = build(b);
    if let (Err(first), true) = (&pair, cfg.surrogate) {
        let first = first.clone();
        pair = Err(first);
        for alt in surrogate_biases(b, n, board.element_count()) {
            if let Ok(p) = build(alt) {
                played = alt;
                rec.flags.push(format!("bias-surrogate:{alt}"));
                pair = Ok(p);
                break;
            }
        }
    }
    let (mut waiter, mut client) = match pair {
        Ok(p) => p,
        Err(e) => {
            rec.error = Some(e);
            return rec;
        }
    };
    rec.played_b = played;
    match play(board.clone(), played, waiter.as_mut(), client.as_mut(), derive_seed(master, seed)) {
        Ok(state) => match value(&state, &family) {
            Ok(v) => {
                rec.value = Some(v);
                rec.normalized = Some(normalized(h, n, b, v));
                if cfg.client == "potential-client" {
                    if let Ok(phi) = initial_potential(&board, &family, played) {
                        if v as f64 > (phi + 1e-9).floor() {
                            rec.flags.push("potential-envelope-violated".into());
                        }
                    }
                }
            }
            Err(e) => rec.error = Some(e.to_string()),
        },
        Err(e) => rec.error = Some(e.to_string()),
    }
    if cfg.timing {
        rec.elapsed_ms = started.elapsed().as_millis();
    }
    rec
}

/// Plays every cell. Results come back in config order whatever the worker count.
pub fn run_experiment(cfg: &ExperimentConfig, master: u64) -> Result<Vec<ResultRecord>, ConfigError> {
    cfg.validate()?;
    let h = Pattern::from_spec(&cfg.pattern).map_err(|e| ConfigError::Value { key: "pattern".into(), message: e.to_string() })?;
    let cells = cfg.cells();
    let work = || cells.par_iter().map(|&(n, b, s)| run_cell(cfg, &h, n, b, s, master)).collect::<Vec<_>>();
    Ok(match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| ConfigError::Value { key: "workers".into(), message: e.to_string() })?
            .install(work),
        None => work(),
    })
}

/// The fixed-schema CSV. Errored cells have an empty value.
pub fn to_csv(records: &[ResultRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).unwrap();
    for r in records {
        w.write_record([
            r.pattern.clone(),
            r.board.clone(),
            r.n.to_string(),
            r.b.to_string(),
            r.seed.to_string(),
            r.waiter.clone(),
            r.client.clone(),
            r.value.map(|v| v.to_string()).unwrap_or_default(),
            r.normalized.map(|v| format!("{v:.6e}")).unwrap_or_default(),
            r.elapsed_ms.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

pub fn to_json(records: &[ResultRecord]) -> String {
    serde_json::to_string_pretty(records).unwrap()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least three distinct n at a fixed b, or three distinct b at a fixed n, with positive values")]
    InsufficientSupport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub slope_n: Option<f64>,
    pub slope_b: Option<f64>,
    /// Intercept of the log-value against log-n line.
    pub intercept: Option<f64>,
    /// Records left out because their value was zero or missing.
    pub excluded: usize,
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxy: f64 = points.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn distinct<T: PartialEq + Copy>(xs: impl Iterator<Item = T>) -> usize {
    let mut seen: Vec<T> = Vec::new();
    for x in xs {
        if !seen.contains(&x) {
            seen.push(x);
        }
    }
    seen.len()
}

/// Slopes of log(value) against log n at the most common b with enough
/// support, and against log(b+1) at the most common such n.
pub fn fit_exponents(records: &[ResultRecord]) -> Result<Fit, FitError> {
    let usable: Vec<&ResultRecord> = records.iter().filter(|r| r.value.is_some_and(|v| v > 0)).collect();
    let excluded = records.len() - usable.len();
    if excluded > 0 {
        log::warn!("excluding {excluded} records with zero or missing values from the fit");
    }
    let pick_group = |key: &dyn Fn(&ResultRecord) -> u64, other: &dyn Fn(&ResultRecord) -> u64| {
        let mut groups: BTreeMap<u64, Vec<&ResultRecord>> = BTreeMap::new();
        for r in &usable {
            groups.entry(key(r)).or_default().push(r);
        }
        groups
            .into_values()
            .filter(|g| distinct(g.iter().map(|r| other(r))) >= 3)
            .max_by_key(|g| g.len())
    };
    let by_b = pick_group(&|r| r.b, &|r| r.n as u64);
    let by_n = pick_group(&|r| r.n as u64, &|r| r.b);
    if by_b.is_none() && by_n.is_none() {
        return Err(FitError::InsufficientSupport);
    }
    let fit_n = by_b.map(|g| {
        let pts: Vec<(f64, f64)> = g.iter().map(|r| ((r.n as f64).ln(), (r.value.unwrap() as f64).ln())).collect();
        least_squares(&pts)
    });
    let slope_b = by_n.map(|g| {
        let pts: Vec<(f64, f64)> = g.iter().map(|r| (((r.b + 1) as f64).ln(), (r.value.unwrap() as f64).ln())).collect();
        least_squares(&pts).0
    });
    Ok(Fit { slope_n: fit_n.map(|f| f.0), slope_b, intercept: fit_n.map(|f| f.1), excluded })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(n: usize, b: u64, v: u64) -> ResultRecord {
        ResultRecord {
            pattern: "k3".into(),
            board: "complete".into(),
            n,
            b,
            seed: 0,
            waiter: "w".into(),
            client: "c".into(),
            value: Some(v),
            normalized: None,
            elapsed_ms: 0,
            played_b: b,
            flags: vec![],
            error: None,
        }
    }

    #[test]
    fn exact_power_laws() {
        let recs: Vec<_> = [10usize, 20, 40, 80].iter().map(|&n| synthetic(n, 1, (n * n * n) as u64)).collect();
        let fit = fit_exponents(&recs).unwrap();
        assert!((fit.slope_n.unwrap() - 3.0).abs() < 1e-9);
        assert!(fit.slope_b.is_none());
        let recs: Vec<_> = [1u64, 3, 7, 15].iter().map(|&b| synthetic(64, b, 64u64.pow(3) / (b + 1).pow(3))).collect();
        assert!((fit_exponents(&recs).unwrap().slope_b.unwrap() + 3.0).abs() < 1e-9);
        assert_eq!(fit_exponents(&recs[..2]), Err(FitError::InsufficientSupport));
    }

    #[test]
    fn zeros_are_excluded() {
        let mut recs: Vec<_> = [10usize, 20, 40].iter().map(|&n| synthetic(n, 1, (n * n) as u64)).collect();
        recs.push(synthetic(80, 1, 0));
        let fit = fit_exponents(&recs).unwrap();
        assert_eq!(fit.excluded, 1);
        assert!((fit.slope_n.unwrap() - 2.0).abs() < 1e-9);
    }

    const BASE: &str = "pattern = p3\nboard = complete\nn = 8, 9\nb = 1\nseeds = 1, 2\nwaiter = random\nclient = greedy-client\n";

    #[test]
    fn config_parsing() {
        let cfg = ExperimentConfig::parse(BASE).unwrap();
        assert_eq!(cfg.n, vec![8, 9]);
        assert_eq!(cfg.cells().len(), 4);
        assert!(!cfg.canonical);
        assert!(matches!(ExperimentConfig::parse(&BASE.replace("n = 8, 9", "n =")), Err(ConfigError::EmptySweep("n"))));
        assert!(matches!(ExperimentConfig::parse(&BASE.replace("1, 2", "1, 1")), Err(ConfigError::DuplicateSeed(1))));
        assert!(ExperimentConfig::parse(&format!("{BASE}bogus = 1\n")).is_err());
        assert!(ExperimentConfig::parse("pattern p3").is_err());
    }

    #[test]
    fn runs_are_ordered_and_reproducible() {
        let cfg = ExperimentConfig::parse(&format!("{BASE}workers = 3\n")).unwrap();
        let a = to_csv(&run_experiment(&cfg, 7).unwrap());
        let b = to_csv(&run_experiment(&cfg, 7).unwrap());
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
        assert!(lines[1].starts_with("p3,complete,8,1,1,"));
        assert!(lines[4].starts_with("p3,complete,9,1,2,"));
    }

    #[test]
    fn errors_stay_in_their_cell() {
        let cfg = ExperimentConfig::parse(&BASE.replace("waiter = random", "waiter = triangle")).unwrap();
        let recs = run_experiment(&cfg, 0).unwrap();
        assert!(recs.iter().all(|r| r.error.is_some() && r.value.is_none()));
        assert!(to_csv(&recs).lines().nth(1).unwrap().contains(",,"));
    }

    #[test]
    fn surrogate_bias_is_flagged() {
        // the sparse tree Waiter needs n <= b <= n^2 / 256 for a single edge
        let text = "pattern = p2\nboard = complete\nn = 256\nb = 1\nwaiter = tree-sparse\nclient = random\nsurrogate = true\n";
        let recs = run_experiment(&ExperimentConfig::parse(text).unwrap(), 0).unwrap();
        assert_eq!(recs[0].played_b, 256);
        assert_eq!(recs[0].flags, vec!["bias-surrogate:256".to_string()]);
        assert!(recs[0].value.is_some());
        let recs = run_experiment(&ExperimentConfig::parse(&text.replace("256", "16")).unwrap(), 0).unwrap();
        assert!(recs[0].error.is_some());
    }

    #[test]
    fn potential_envelope_holds() {
        let text = "pattern = k3\nboard = complete\nn = 6, 7\nb = 1, 2\nseeds = 0, 1\nwaiter = random\nclient = potential-client\n";
        let recs = run_experiment(&ExperimentConfig::parse(text).unwrap(), 3).unwrap();
        assert!(recs.iter().all(|r| r.flags.is_empty() && r.value.is_some()));
    }
}
