use anyhow::{bail, Context, Result};
use branchlab::bench::{
    aggregate, bootstrap_optimum, load_instance, optimum_cache_path, read_cached_optimum, read_results_csv,
    run_campaign, summary_markdown, write_results_csv, Campaign,
};
use branchlab::engine::{init_primal_bound, solve};
use branchlab::generators::{generate, parse_overrides, GenSpec, Kind};
use branchlab::model::{to_json, write_mps};
use branchlab::rules::{RuleConfig, CATALOG};
use clap::{Parser, Subcommand};
use std::fs::File;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "branchlab", version, about = "Strong-branching score experiments on mixed-binary programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write generated instances as `<kind>-<seed>.json`.
    Generate {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also write an MPS file per instance.
        #[arg(long)]
        mps: bool,
        /// Dimension override, e.g. `--set n=50`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Solve one instance with one rule.
    Solve {
        /// Instance file (`.json` codec, otherwise MPS).
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "def-sb")]
        rule: String,
        /// Relative primal gap of the initial bound; needs a reference optimum.
        #[arg(long)]
        gap: Option<f64>,
        /// Reference optimum; defaults to `<instance>.opt` or a Def-SB solve.
        #[arg(long)]
        reference: Option<f64>,
        #[arg(long, default_value_t = 20_000)]
        node_limit: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write per-node telemetry CSV here.
        #[arg(long)]
        telemetry: Option<PathBuf>,
        /// Write the full report as JSON here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a campaign and write `results.csv` and `summary.md`.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Rebuild the summary tables from a results CSV.
    Report {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        baseline: Option<String>,
    },
    /// List the rule catalog and generator kinds.
    List,
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Generate { kind, seed, count, out, mps, overrides } => {
            let kind: Kind = kind.parse()?;
            let overrides = parse_overrides(overrides.iter().map(String::as_str)).map_err(anyhow::Error::msg)?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            for s in seed..seed + count {
                let spec = GenSpec { kind, seed: s, overrides: overrides.clone() };
                let inst = generate(&spec)?;
                let path = out.join(format!("{}.json", inst.name));
                std::fs::write(&path, to_json(&inst))?;
                if mps {
                    std::fs::write(path.with_extension("mps"), write_mps(&inst))?;
                }
                println!("{}", path.display());
            }
        }
        Command::Solve { instance, rule, gap, reference, node_limit, seed, telemetry, report } => {
            let inst = load_instance(&instance)?;
            let config = RuleConfig::parse(&rule)?;
            let init = match gap {
                None => None,
                Some(g) if !(g.is_finite() && g >= 0.0) => bail!("gap must be finite and nonnegative"),
                Some(g) => {
                    let z = match reference.or_else(|| read_cached_optimum(&optimum_cache_path(&instance))) {
                        Some(z) => z,
                        None => {
                            bootstrap_optimum(&inst, 1_000_000).context("no reference optimum: pass --reference")?
                        }
                    };
                    Some(init_primal_bound(z, g, inst.sense))
                }
            };
            let r = solve(&inst, &config, init, node_limit, seed)?;
            println!("instance   {}", inst.name);
            println!("rule       {}", r.rule);
            println!("status     {:?}", r.status);
            println!("tree size  {}", r.tree_size);
            println!("incumbent  {}", r.incumbent_value());
            println!("dual bound {}", r.dual_bound_value());
            println!("root LP    {}", r.root_lp_value());
            if let Some(p) = telemetry {
                std::fs::write(&p, r.telemetry_csv())?;
            }
            if let Some(p) = report {
                std::fs::write(&p, serde_json::to_string_pretty(&r)?)?;
            }
        }
        Command::Bench { config, out, jobs } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let campaign = Campaign::from_json(&text)?;
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let result = run_campaign(&campaign, jobs)?;
            std::fs::create_dir_all(&out)?;
            write_results_csv(&result.rows, File::create(out.join("results.csv"))?)?;
            let summary = result.summary(campaign.baseline.as_deref());
            std::fs::write(out.join("summary.md"), &summary)?;
            print!("{summary}");
        }
        Command::Report { csv, baseline } => {
            let rows = read_results_csv(File::open(&csv).with_context(|| format!("opening {}", csv.display()))?)?;
            print!("{}", summary_markdown(&aggregate(&rows), baseline.as_deref()));
        }
        Command::List => {
            println!("rules:");
            for r in CATALOG {
                println!("  {r}");
            }
            println!("kinds:");
            for k in Kind::ALL {
                println!("  {k}");
            }
        }
    }
    Ok(())
}
