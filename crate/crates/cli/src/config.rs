//! Command-line arguments and their resolution into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fibexp::families::{params_for_target, kl_of, TargetParams};
use fibexp::{Error, FamilyParams, Mat2};
use num_bigint::BigInt;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "fibexp", version, about = "Fibonacci-type numbers and their uniform exponents")]
pub struct Cli {
    /// Worker threads for brute-force scans (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the exact identities of the sequence.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 15)]
        imax: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compute ξ with a certified error bound.
    Xi {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        /// Largest sequence index to try.
        #[arg(long, default_value_t = fibexp::xi::DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        /// Also print the exact approximant y_{i,1}/y_{i,0} at this depth.
        #[arg(long)]
        rational_depth: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Estimate ω̂₂ and λ̂₂ from candidate points and by brute force.
    Exponents {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 14)]
        imax: usize,
        #[command(flatten)]
        brute: BruteArgs,
        /// Allowed distance between the candidate estimate and its target interval.
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// One row of estimates per (k, ℓ) family.
    Sweep {
        /// `default` or a list such as `3,1;4,1;5,2`.
        #[arg(long, default_value = "default")]
        grid: String,
        #[arg(long, default_value_t = 14)]
        imax: usize,
        #[command(flatten)]
        brute: BruteArgs,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Family parameters `a,b,c`.
    #[arg(long, value_name = "A,B,C", conflicts_with_all = ["t", "seed", "seed_file"])]
    pub family: Option<String>,
    /// Target parameter t in (0, γ⁻²); needs --eps.
    #[arg(long, requires = "eps", conflicts_with_all = ["seed", "seed_file"])]
    pub t: Option<f64>,
    #[arg(long, requires = "t")]
    pub eps: Option<f64>,
    /// Seed matrices w0 and w1, each as four integers `a,b,c,d` in row order.
    #[arg(long, num_args = 2, value_names = ["W0", "W1"], conflicts_with = "seed_file")]
    pub seed: Option<Vec<String>>,
    /// File holding the eight seed entries, whitespace separated.
    #[arg(long)]
    pub seed_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BruteArgs {
    /// Height for the brute-force ω̂ scan (O(X²)); skipped when absent.
    #[arg(long)]
    pub xmax_omega: Option<u64>,
    /// Height for the brute-force λ̂ scan (O(X)); skipped when absent.
    #[arg(long)]
    pub xmax_lambda: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Upper limits of the brute-force budgets.
pub const MAX_X_OMEGA: u64 = 200_000;
pub const MAX_X_LAMBDA: u64 = 100_000_000;

/// Where the seeds come from, after resolution.
#[derive(Serialize, Debug, Clone)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Source {
    Family {
        a: String,
        b: String,
        c: String,
        k: Option<u32>,
        l: Option<u32>,
    },
    Target {
        t: f64,
        eps: f64,
        k: u32,
        l: u32,
        a: String,
        b: String,
        c: String,
    },
    Seed {
        w0: [String; 4],
        w1: [String; 4],
    },
}

/// The resolved configuration echoed into every output.
#[derive(Serialize, Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<Source>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<(u32, u32)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xmax_omega: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xmax_lambda: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub format: Format,
    pub version: &'static str,
}

impl RunConfig {
    pub fn new(command: &'static str, format: Format) -> Self {
        RunConfig {
            command,
            source: None,
            imax: None,
            digits: None,
            max_depth: None,
            grid: None,
            xmax_omega: None,
            xmax_lambda: None,
            tol: None,
            format,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Seeds ready for the library, plus the family when there is one.
pub struct Resolved {
    pub source: Source,
    pub family: Option<FamilyParams>,
    pub target: Option<TargetParams>,
    pub seeds: Option<(Mat2, Mat2)>,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

fn parse_ints(text: &str, sep: &[char], count: usize, what: &str) -> Result<Vec<BigInt>, Error> {
    let parts: Vec<&str> = text.split(sep).map(str::trim).filter(|s| !s.is_empty()).collect();
    if parts.len() != count {
        return Err(config_error(format!("{what}: expected {count} integers, got {}", parts.len())));
    }
    parts
        .iter()
        .map(|p| p.parse::<BigInt>().map_err(|_| config_error(format!("{what}: `{p}` is not an integer"))))
        .collect()
}

fn mat_from(v: &[BigInt]) -> Mat2 {
    Mat2::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
}

fn strings(v: &[BigInt]) -> [String; 4] {
    std::array::from_fn(|i| v[i].to_string())
}

impl SourceArgs {
    pub fn resolve(&self) -> Result<Resolved, Error> {
        if let Some(f) = &self.family {
            let v = parse_ints(f, &[','], 3, "--family")?;
            let p = FamilyParams::new(v[0].clone(), v[1].clone(), v[2].clone())?;
            let kl = kl_of(&p);
            return Ok(Resolved {
                source: Source::Family {
                    a: p.a.to_string(),
                    b: p.b.to_string(),
                    c: p.c.to_string(),
                    k: kl.map(|x| x.0),
                    l: kl.map(|x| x.1),
                },
                family: Some(p),
                target: None,
                seeds: None,
            });
        }
        if let (Some(t), Some(eps)) = (self.t, self.eps) {
            let cp = params_for_target(t, eps)?;
            let p = cp.family.clone();
            return Ok(Resolved {
                source: Source::Target {
                    t,
                    eps,
                    k: cp.k,
                    l: cp.l,
                    a: p.a.to_string(),
                    b: p.b.to_string(),
                    c: p.c.to_string(),
                },
                family: Some(p),
                target: Some(cp),
                seeds: None,
            });
        }
        let entries = if let Some(seed) = &self.seed {
            let mut v = parse_ints(&seed[0], &[','], 4, "--seed W0")?;
            v.extend(parse_ints(&seed[1], &[','], 4, "--seed W1")?);
            v
        } else if let Some(path) = &self.seed_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
            parse_ints(&text, &[' ', '\t', '\n', '\r'], 8, "--seed-file")?
        } else {
            return Err(config_error("give one of --family, --t/--eps, --seed, --seed-file"));
        };
        Ok(Resolved {
            source: Source::Seed {
                w0: strings(&entries[..4]),
                w1: strings(&entries[4..]),
            },
            family: None,
            target: None,
            seeds: Some((mat_from(&entries[..4]), mat_from(&entries[4..]))),
        })
    }
}

/// `default` or `k,l;k,l;…`.
pub fn parse_grid(text: &str) -> Result<Vec<(u32, u32)>, Error> {
    if text.trim() == "default" {
        return Ok(fibexp::exponents::sweep::DEFAULT_GRID.to_vec());
    }
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|entry| {
            let (k, l) = entry
                .split_once(',')
                .ok_or_else(|| config_error(format!("grid entry `{entry}` is not `k,l`")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| config_error(format!("grid entry `{entry}` is not `k,l`")))
            };
            Ok((parse(k)?, parse(l)?))
        })
        .collect()
}

pub fn check_budgets(brute: &BruteArgs) -> Result<(), Error> {
    if let Some(x) = brute.xmax_omega {
        if x == 0 || x > MAX_X_OMEGA {
            return Err(config_error(format!("--xmax-omega must be in 1..={MAX_X_OMEGA}")));
        }
    }
    if let Some(x) = brute.xmax_lambda {
        if x == 0 || x > MAX_X_LAMBDA {
            return Err(config_error(format!("--xmax-lambda must be in 1..={MAX_X_LAMBDA}")));
        }
    }
    Ok(())
}
