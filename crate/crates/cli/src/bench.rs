use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::Args;

use pot_core::instancegen::{generate, GenMode, GenSpec};
use pot_core::solver::{solve, Algorithm, SolveOptions, BRUTE_MAX_N};
use pot_core::PotError;

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated list of ptop, total, brute.
    #[arg(long, default_value = "ptop,total")]
    algos: String,
    /// Inclusive range `A..B`.
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value_t = 1)]
    per_size: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    timeout_ms: Option<u64>,
    #[arg(long, default_value = "uniform")]
    mode: String,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn parse_sizes(s: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = s.split_once("..").with_context(|| format!("sizes {s:?} must look like A..B"))?;
    let a: usize = a.trim().parse().with_context(|| format!("bad size {a:?}"))?;
    let b: usize = b.trim().parse().with_context(|| format!("bad size {b:?}"))?;
    if a == 0 || a > b {
        bail!("empty size range {s:?}");
    }
    Ok((a, b))
}

pub fn run(a: BenchArgs) -> anyhow::Result<u8> {
    let algos: Vec<Algorithm> = a.algos.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
    let (lo, hi) = parse_sizes(&a.sizes)?;
    if algos.contains(&Algorithm::Brute) && hi > BRUTE_MAX_N {
        bail!("brute force is limited to n <= {BRUTE_MAX_N}");
    }
    let mode: GenMode = a.mode.parse()?;
    let mut out = csv::Writer::from_path(&a.csv).with_context(|| format!("cannot write {}", a.csv.display()))?;
    out.write_record(["algo", "n", "seed", "instance", "verdict", "leaves", "millis", "timeout"])?;
    let opts = SolveOptions {
        threads: a.threads.max(1),
        strict: a.threads <= 1,
        timeout: a.timeout_ms.map(Duration::from_millis),
    };
    for n in lo..=hi {
        for k in 0..a.per_size {
            let seed = a.seed.wrapping_add(k);
            let (ins, _) = generate(&GenSpec::new(n, a.density, seed, mode))?;
            for &algo in &algos {
                let start = Instant::now();
                let (verdict, leaves, timeout) = match solve(&ins, algo, &opts) {
                    Ok(ans) => (ans.verdict.to_string(), ans.stats.leaves.to_string(), "0"),
                    Err(PotError::Timeout) => (String::new(), String::new(), "1"),
                    Err(e) => return Err(e.into()),
                };
                let millis = start.elapsed().as_millis().to_string();
                out.write_record([algo.name(), &n.to_string(), &seed.to_string(), &k.to_string(), &verdict, &leaves, &millis, timeout])?;
            }
        }
    }
    out.flush()?;
    Ok(0)
}
