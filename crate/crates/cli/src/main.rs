use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use autoqml::gan::ModelFile;
use autoqml::orchestrator::{
    evaluation_demand, expand_grid, parse_config, read_aggregate, read_selection, run_all, schedule_static,
    DirStore, ObjectStore, PipelineError, RunOptions,
};
use clap::{Parser, Subcommand};

/// Automated qGAN architecture search.
#[derive(Parser)]
#[command(name = "autoqml", version, about)]
struct Cli {
    /// error, warn, info, debug or trace
    #[arg(long, global = true, default_value = "info")]
    log_level: log::LevelFilter,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the whole grid, aggregate, select and plot.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Store directory; data paths in the config are relative to it.
        #[arg(long, env = "AUTOQML_STORE")]
        store: PathBuf,
        /// Worker threads (default: available cores, at most n_containers).
        #[arg(long)]
        max_parallel: Option<usize>,
        /// Seconds a stage waits for the previous stage's output.
        #[arg(long, default_value_t = 60)]
        trigger_timeout: u64,
    },
    /// Check a config and print the size of its grid.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the aggregate table and the selected spec of a finished run.
    Report {
        #[arg(long, env = "AUTOQML_STORE")]
        store: PathBuf,
        /// Only the best N rows.
        #[arg(long)]
        top: Option<usize>,
    },
    /// List the store, or show one blob (models are summarized).
    Inspect {
        #[arg(long, env = "AUTOQML_STORE")]
        store: PathBuf,
        key: Option<String>,
    },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_PIPELINE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(cli.log_level)
        .format_timestamp_secs()
        .target(env_logger::Target::Stderr)
        .init();
    match cli.command {
        Command::Run {
            config,
            store,
            max_parallel,
            trigger_timeout,
        } => run(config, store, max_parallel, trigger_timeout),
        Command::Validate { config } => validate(config),
        Command::Report { store, top } => report(store, top),
        Command::Inspect { store, key } => inspect(store, key),
    }
}

fn run(config: PathBuf, store: PathBuf, max_parallel: Option<usize>, timeout: u64) -> ExitCode {
    let options = RunOptions {
        max_parallel,
        trigger_timeout: Duration::from_secs(timeout),
        ..Default::default()
    };
    match run_all(&config, &store, &options) {
        Ok(summary) => {
            let t = &summary.training;
            println!(
                "{} specs, {} runs ok, {} failed, {} stopped by budget",
                t.specs, t.runs_ok, t.runs_failed, t.budget_exhausted
            );
            let w = &summary.selection.winner;
            println!(
                "winner {}: {} k={} N={} init={} (score {:.4}, mean RE {:.4}, mean KS {:.4})",
                w.spec_id,
                w.spec.family,
                w.spec.repetitions,
                w.spec.num_qubits,
                w.spec.initialization.kind,
                w.score,
                w.stats.mu_re,
                w.stats.mu_ks
            );
            println!("model written to {}", store.join("models").join("best.qmodel").display());
            ExitCode::SUCCESS
        }
        Err(e @ (PipelineError::Config(_) | PipelineError::ReadConfig { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_PIPELINE)
        }
    }
}

fn validate(path: PathBuf) -> ExitCode {
    let bytes = match std::fs::read(&path) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let config = match parse_config(&bytes) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let specs = expand_grid(&config);
    let noun = if specs.len() == 1 { "specification" } else { "specifications" };
    println!("{} experiment {noun}", specs.len());
    let runs: usize = specs.iter().map(|s| s.num_training_runs).sum();
    println!("{runs} training runs");
    let sets = schedule_static(&specs, config.n_containers);
    let max = sets.iter().map(Vec::len).max().unwrap_or(0);
    let min = sets.iter().map(Vec::len).min().unwrap_or(0);
    println!("{} workers, {min}..={max} specs each", config.n_containers);
    println!("at most {} circuit evaluations", evaluation_demand(&specs));
    ExitCode::SUCCESS
}

fn report(store: PathBuf, top: Option<usize>) -> ExitCode {
    let store = match DirStore::open(&store) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PIPELINE);
        }
    };
    let (rows, selection) = match read_aggregate(&store).and_then(|r| Ok((r, read_selection(&store)?))) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e} (has the run finished?)");
            return ExitCode::from(EXIT_PIPELINE);
        }
    };
    println!(
        "{:<16} {:<10} {:>2} {:>2} {:<8} {:<18} {:>8} {:>4} {:>17} {:>17} {:>7} {:>8}",
        "spec", "family", "N", "k", "init", "discriminator", "lr_G", "runs", "KS", "RE", "depth", "score"
    );
    let limit = top.unwrap_or(usize::MAX);
    for ranked in selection.ranking.iter().take(limit) {
        let Some(r) = rows.iter().find(|r| r.spec_id == ranked.spec_id) else {
            continue;
        };
        println!(
            "{:<16} {:<10} {:>2} {:>2} {:<8} {:<18} {:>8.0e} {:>4} {:>8.4}±{:<8.4} {:>8.4}±{:<8.4} {:>7.1} {:>8.4}",
            r.spec_id,
            r.family,
            r.num_qubits,
            r.k,
            r.initialization,
            r.discriminator,
            r.generator_lr,
            r.n_runs,
            r.mu_ks,
            r.sigma_ks,
            r.mu_re,
            r.sigma_re,
            r.mu_depth,
            ranked.score
        );
    }
    let w = &selection.winner;
    println!();
    println!(
        "winner: {} ({} k={} N={} init={}, best run {})",
        w.spec_id, w.spec.family, w.spec.repetitions, w.spec.num_qubits, w.spec.initialization.kind, w.best_run_index
    );
    for q in &selection.per_qubit_winners {
        println!("best for N={}: {} (score {:.4})", q.num_qubits, q.spec_id, q.score);
    }
    println!("{} runs ok, {} failed", selection.runs_ok, selection.runs_failed);
    ExitCode::SUCCESS
}

fn inspect(store: PathBuf, key: Option<String>) -> ExitCode {
    let store = match DirStore::open(&store) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PIPELINE);
        }
    };
    let Some(key) = key else {
        match store.list("") {
            Ok(keys) => {
                for k in keys {
                    let size = store.get(&k).map_or(0, |b| b.len());
                    println!("{size:>10}  {k}");
                }
                return ExitCode::SUCCESS;
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_PIPELINE);
            }
        }
    };
    let bytes = match store.get(&key) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PIPELINE);
        }
    };
    if !key.ends_with(".qmodel") {
        print!("{}", String::from_utf8_lossy(&bytes));
        return ExitCode::SUCCESS;
    }
    let model = match ModelFile::from_bytes(&bytes) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PIPELINE);
        }
    };
    println!("spec {} run {}", model.spec_id, model.run_index);
    println!(
        "ansatz {} k={} on {} qubits, {} parameters",
        model.ansatz.family,
        model.ansatz.repetitions,
        model.ansatz.num_qubits,
        model.generator_params.len()
    );
    println!("initialization {}", model.init_strategy.kind);
    println!("range [{}, {}]", model.range.0, model.range.1);
    let t = &model.training;
    println!(
        "trained {} epochs (batch {}, lr {}), final RE {:.6}, KS {:.6}, depth {}",
        t.epochs_completed, t.batch_size, t.generator_lr, t.final_re, t.final_ks, t.transpiled_depth
    );
    match model.generator_probabilities() {
        Ok(p) => {
            println!("{:>5} {:>10} {:>10}", "bin", "target", "generated");
            for (i, g) in p.iter().enumerate() {
                let t = model.target_probabilities.get(i).copied().unwrap_or(f64::NAN);
                println!("{i:>5} {t:>10.5} {g:>10.5}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_PIPELINE)
        }
    }
}
