//! `cotwist`: spectra of co-triangular Hopf algebras from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cotwist::correspondence::{run, Config, Construction};
use cotwist::Error;

#[derive(Parser, Debug)]
#[command(name = "cotwist", version, about = "Block spectra of (C[G]^J)* for minimal twists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Twist axioms, triangularity, minimality, Q identity and |H| square only.
    Verify(Opts),
    /// Full three-route spectrum report for every double coset.
    Spectrum(Opts),
    /// H = (Z/p)² with its symplectic twist, G = H ⋊ ⟨γ⟩.
    Example(Opts),
}

#[derive(Args, Debug)]
struct Opts {
    #[arg(long)]
    p: Option<u32>,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Row-major entries, one `;`-separated block per generator.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, conflicts_with_all = ["p", "gamma"])]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "COTWIST_SEED", hide_env_values = true)]
    default_seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    jobs: Option<usize>,
    /// JSON destination; `-` or absent for stdout.
    #[arg(long)]
    out: Option<String>,
}

fn parse_gamma(text: &str, n: usize) -> Result<Vec<Vec<Vec<i64>>>, Error> {
    let dim = 2 * n;
    text.split(';')
        .map(str::trim)
        .filter(|b| !b.is_empty())
        .map(|block| {
            let entries: Vec<i64> = block
                .split(',')
                .map(|e| {
                    e.trim()
                        .parse()
                        .map_err(|err| Error::Config(format!("gamma entry {e:?}: {err}")))
                })
                .collect::<Result<_, _>>()?;
            if entries.len() != dim * dim {
                return Err(Error::Config(format!(
                    "gamma block {block:?} has {} entries, expected {}",
                    entries.len(),
                    dim * dim
                )));
            }
            Ok(entries.chunks(dim).map(<[i64]>::to_vec).collect())
        })
        .collect()
}

fn config_from(opts: &Opts) -> Result<Config, Error> {
    let mut cfg = match (&opts.config, opts.p) {
        (Some(path), _) => Config::load(path)?,
        (None, Some(p)) => {
            let gens = match &opts.gamma {
                Some(g) => parse_gamma(g, opts.n)?,
                None => Vec::new(),
            };
            Config::symplectic(p, opts.n, gens)
        }
        (None, None) => return Err(Error::Config("either --config or --p is required".into())),
    };
    if let Some(s) = opts.seed {
        cfg.seed = Some(s);
    } else if cfg.seed.is_none() {
        cfg.seed = opts.default_seed;
    }
    if let Some(t) = opts.tol {
        cfg.tol = t;
    }
    if opts.jobs.is_some() {
        cfg.jobs = opts.jobs;
    }
    if opts.out.is_some() {
        cfg.out = opts.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (opts, verify_only, example) = match &cli.command {
        Command::Verify(o) => (o, true, false),
        Command::Spectrum(o) => (o, false, false),
        Command::Example(o) => (o, false, true),
    };
    let cfg = match config_from(opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cotwist: {e}");
            return ExitCode::from(2);
        }
    };
    if example && !matches!(cfg.construction, Construction::Symplectic { n: 1, .. }) {
        eprintln!("cotwist: example needs --p and n = 1");
        return ExitCode::from(2);
    }
    let report = match run(&cfg, verify_only) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("cotwist: {e}");
            return ExitCode::from(2);
        }
    };
    let json = report.to_json();
    match cfg.out.as_deref() {
        None | Some("-") => {
            print!("{json}");
            eprint!("{}", report.to_table());
        }
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("cotwist: writing {path}: {e}");
                return ExitCode::from(2);
            }
            print!("{}", report.to_table());
        }
    }
    if report.passed(verify_only) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_blocks() {
        let g = parse_gamma("1,0,0,2; 1,1,0,1", 1).unwrap();
        assert_eq!(g, vec![vec![vec![1, 0], vec![0, 2]], vec![vec![1, 1], vec![0, 1]]]);
        assert!(parse_gamma("1,0,0", 1).is_err());
        assert!(parse_gamma("1,x,0,1", 1).is_err());
        assert!(parse_gamma("", 1).unwrap().is_empty());
    }
}
