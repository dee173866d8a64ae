use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use pot_core::format::{parse_instance, parse_model, serialize_instance, serialize_model, ModelFile};
use pot_core::instancegen::{generate, GenMode, GenSpec};
use pot_core::network::verify_model;
use pot_core::orders::{compose_with, unrank_ptop};
use pot_core::solver::{solve, Algorithm, SolveOptions};
use pot_core::structure::{chain_links, find_chains, render_diagnostics};
use pot_core::{Instance, Network};

mod bench;

const EXIT_YES: u8 = 10;
const EXIT_NO: u8 = 20;
const EXIT_ERROR: u8 = 1;

/// Decides whether a set of point constraints fits some partial order.
#[derive(Parser)]
#[command(name = "pot", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide an instance. Exits 10 if satisfiable, 20 if not.
    Solve(SolveArgs),
    /// Write a random instance.
    Gen(GenArgs),
    /// Check a model against an instance. Exits 0 if it fits, 20 if not.
    Verify(VerifyArgs),
    /// Run solvers over generated instances and write one CSV row per run.
    Bench(bench::BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, default_value = "ptop")]
    algo: String,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    model_out: Option<PathBuf>,
    /// Print counters as key=value lines.
    #[arg(long)]
    stats: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Print the links and chains of the first scaffold.
    #[arg(long)]
    explain: bool,
    /// Search sequentially so the output is reproducible.
    #[arg(long)]
    strict_determinism: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "planted")]
    mode: String,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    model: PathBuf,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    parse_instance(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn explain(ins: &Instance) -> anyhow::Result<String> {
    let p = unrank_ptop(ins.n, 0);
    let g = compose_with(&p, &Network::from_instance(ins)?)?;
    let chains = find_chains(&p, &g);
    Ok(render_diagnostics(&chain_links(&chains), &chains))
}

fn cmd_solve(a: SolveArgs) -> anyhow::Result<u8> {
    let algo: Algorithm = a.algo.parse()?;
    let ins = load_instance(&a.input)?;
    if a.explain {
        print!("{}", explain(&ins)?);
    }
    let opts = SolveOptions { threads: a.threads.max(1), strict: a.strict_determinism, timeout: None };
    let ans = solve(&ins, algo, &opts)?;
    let file = match &ans.model {
        Some(m) => ModelFile::Yes(m.clone()),
        None => ModelFile::No,
    };
    let text = serialize_model(&file);
    match &a.model_out {
        Some(path) => {
            write(path, &text)?;
            println!("s {}", ans.verdict);
        }
        None => print!("{text}"),
    }
    if a.stats {
        print!("{}", ans.stats.render());
    }
    Ok(if ans.is_yes() { EXIT_YES } else { EXIT_NO })
}

fn cmd_gen(a: GenArgs) -> anyhow::Result<u8> {
    let mode: GenMode = a.mode.parse()?;
    let spec = GenSpec::new(a.n, a.density, a.seed, mode);
    let (ins, model) = generate(&spec)?;
    write(&a.output, &serialize_instance(&ins))?;
    if let Some(m) = model {
        let mut path = a.output.into_os_string();
        path.push(".model");
        write(Path::new(&path), &serialize_model(&ModelFile::Yes(m)))?;
    }
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<u8> {
    let ins = load_instance(&a.input)?;
    let text = read(&a.model)?;
    let model = match parse_model(&text).with_context(|| format!("in {}", a.model.display()))? {
        ModelFile::Yes(m) => m,
        ModelFile::No => bail!("{} states that there is no model", a.model.display()),
    };
    if verify_model(&ins, &model)? {
        println!("ok");
        Ok(0)
    } else {
        println!("violated");
        Ok(EXIT_NO)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_ERROR);
        }
    };
    let result = match cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Bench(a) => bench::run(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
