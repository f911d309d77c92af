mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fibexp::exponents::brute::{lambda_records, omega_records};
use fibexp::exponents::candidate::{candidate_slopes, xi_for_slopes};
use fibexp::exponents::sweep::{density_sweep, SweepOptions};
use fibexp::exponents::{jarnik_check, jarnik_residual, uniform_slope, ExponentEstimate, ExponentKind, Method};
use fibexp::families::{family_checks, family_sequence, target_interval, target_interval_for, TargetParams};
use fibexp::sequence::{from_seeds, verify_arithmetic, verify_growth, verify_recurrences, FibSequence};
use fibexp::xi::{cross_check, ratio_at, xi_approx_with};
use fibexp::Error;
use serde::Serialize;

use config::{check_budgets, parse_grid, Cli, Command, Format, OutputArgs, Resolved, RunConfig};

/// Tolerance for Jarník's relation on brute-force pairs.
const JARNIK_TOL: f64 = 0.1;

enum Outcome {
    Ok,
    CheckFailed,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionUnreachable { .. } | Error::InsufficientPrecision(_) => 3,
        Error::InvalidParams(_) | Error::Singular | Error::ZeroPoint | Error::ZeroContent => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Verify { source, imax, output } => {
            let resolved = source.resolve()?;
            let mut cfg = RunConfig::new("verify", output.format);
            cfg.source = Some(resolved.source.clone());
            cfg.imax = Some(imax);
            cmd_verify(&cfg, resolved, imax, &output)
        }
        Command::Xi {
            source,
            digits,
            max_depth,
            rational_depth,
            output,
        } => {
            if digits == 0 {
                return Err(Error::InvalidParams("--digits must be positive".into()));
            }
            let resolved = source.resolve()?;
            let mut cfg = RunConfig::new("xi", output.format);
            cfg.source = Some(resolved.source.clone());
            cfg.digits = Some(digits);
            cfg.max_depth = Some(max_depth);
            cmd_xi(&cfg, resolved, digits, max_depth, rational_depth, &output)
        }
        Command::Exponents {
            source,
            imax,
            brute,
            tol,
            output,
        } => {
            check_budgets(&brute)?;
            if imax < 6 {
                return Err(Error::InvalidParams("--imax must be at least 6".into()));
            }
            let resolved = source.resolve()?;
            let mut cfg = RunConfig::new("exponents", output.format);
            cfg.source = Some(resolved.source.clone());
            cfg.imax = Some(imax);
            cfg.xmax_omega = brute.xmax_omega;
            cfg.xmax_lambda = brute.xmax_lambda;
            cfg.tol = Some(tol);
            cmd_exponents(&cfg, resolved, imax, &brute, tol, &output)
        }
        Command::Sweep {
            grid,
            imax,
            brute,
            tol,
            output,
        } => {
            check_budgets(&brute)?;
            if imax < 6 {
                return Err(Error::InvalidParams("--imax must be at least 6".into()));
            }
            let grid = parse_grid(&grid)?;
            let mut cfg = RunConfig::new("sweep", output.format);
            cfg.grid = Some(grid.clone());
            cfg.imax = Some(imax);
            cfg.xmax_omega = brute.xmax_omega;
            cfg.xmax_lambda = brute.xmax_lambda;
            cfg.tol = Some(tol);
            let params = grid
                .iter()
                .map(|&(k, l)| TargetParams::from_kl(k, l))
                .collect::<Result<Vec<_>, _>>()?;
            let opts = SweepOptions {
                i_max: imax,
                x_omega: brute.xmax_omega,
                x_lambda: brute.xmax_lambda,
            };
            let table = density_sweep(&params, &opts)?;
            let body = match output.format {
                Format::Csv => with_csv_header(&cfg, &table.to_csv()?),
                Format::Json => json_doc(&cfg, &table)?,
            };
            emit(&output, &body)?;
            let misses: Vec<String> = table
                .rows
                .iter()
                .filter(|r| !(r.target_lo - tol <= r.omega_candidate && r.omega_candidate <= r.target_hi + tol))
                .map(|r| format!("({}, {})", r.k, r.l))
                .collect();
            if misses.is_empty() {
                Ok(Outcome::Ok)
            } else {
                eprintln!("candidate estimate outside target ± {tol} for {}", misses.join(", "));
                Ok(Outcome::CheckFailed)
            }
        }
    }
}

fn sequence_of(resolved: &Resolved) -> Result<FibSequence, Error> {
    match (&resolved.family, &resolved.seeds) {
        (Some(p), _) => family_sequence(p),
        (None, Some((w0, w1))) => from_seeds(w0, w1),
        (None, None) => unreachable!("resolution yields a family or seeds"),
    }
}

fn with_csv_header(cfg: &RunConfig, csv: &str) -> String {
    let echo = serde_json::to_string(cfg).expect("config serializes");
    format!("# config: {echo}\n{csv}")
}

fn json_doc<T: Serialize>(cfg: &RunConfig, result: &T) -> Result<String, Error> {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        config: &'a RunConfig,
        result: &'a T,
    }
    let mut s = serde_json::to_string_pretty(&Doc { config: cfg, result })
        .map_err(|e| Error::Serialize(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn emit(output: &OutputArgs, body: &str) -> Result<(), Error> {
    match &output.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::InvalidParams(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| Error::Serialize(e.to_string()))
        }
    }
}

fn cmd_verify(cfg: &RunConfig, resolved: Resolved, imax: usize, output: &OutputArgs) -> Result<Outcome, Error> {
    let mut seq = match sequence_of(&resolved) {
        Ok(seq) => seq,
        Err(Error::NotAdmissible(reason)) => {
            eprintln!("FAIL admissibility: {reason}");
            return Ok(Outcome::CheckFailed);
        }
        Err(e) => return Err(e),
    };
    let growth_max = imax.max(18);
    seq.extend(growth_max + 3);
    let mut report = verify_recurrences(&seq, imax);
    report.extend(verify_arithmetic(&seq, imax));
    report.extend(verify_growth(&seq, growth_max, resolved.family.as_ref().map(|p| p.det_exponents())));
    if let Some(p) = &resolved.family {
        report.extend(family_checks(&seq, p, imax));
    }
    let body = match output.format {
        Format::Csv => with_csv_header(cfg, &report.to_csv()?),
        Format::Json => json_doc(cfg, &report)?,
    };
    emit(output, &body)?;
    match report.first_failure() {
        None => {
            if output.out.is_some() {
                println!("PASS {} checks", report.count(fibexp::Status::Pass));
            }
            Ok(Outcome::Ok)
        }
        Some(f) => {
            let at = f.index.map(|i| format!(" at i = {i}")).unwrap_or_default();
            eprintln!("FAIL {}{at}: {}", f.check, f.witness);
            Ok(Outcome::CheckFailed)
        }
    }
}

#[derive(Serialize)]
struct XiResult {
    digits: u32,
    depth: usize,
    value: String,
    err: String,
    cross_check: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    rational: Option<(usize, String)>,
}

fn cmd_xi(
    cfg: &RunConfig,
    resolved: Resolved,
    digits: u32,
    max_depth: usize,
    rational_depth: Option<usize>,
    output: &OutputArgs,
) -> Result<Outcome, Error> {
    let mut seq = sequence_of(&resolved)?;
    let xi = xi_approx_with(&mut seq, digits, max_depth)?;
    let confirmed = cross_check(&mut seq, &xi, 2);
    let rational = rational_depth.map(|d| {
        seq.extend(d + 1);
        let r = ratio_at(&seq, d).map(|r| r.to_string()).unwrap_or_else(|| "undefined".into());
        (d, r)
    });
    let result = XiResult {
        digits,
        depth: xi.depth,
        value: xi.to_decimal(digits as usize),
        err: xi.err_string(),
        cross_check: confirmed,
        rational,
    };
    println!("{} ± {}", result.value, result.err);
    println!("depth {}", result.depth);
    if let Some((d, r)) = &result.rational {
        println!("y_{{{d},1}}/y_{{{d},0}} = {r}");
    }
    if let Some(path) = &output.out {
        let body = match output.format {
            Format::Csv => {
                let mut w = csv_writer();
                w.write_record(["digits", "depth", "value", "err", "cross_check"])
                    .and_then(|_| {
                        w.write_record([
                            result.digits.to_string(),
                            result.depth.to_string(),
                            result.value.clone(),
                            result.err.clone(),
                            result.cross_check.to_string(),
                        ])
                    })
                    .map_err(|e| Error::Serialize(e.to_string()))?;
                with_csv_header(cfg, &csv_string(w)?)
            }
            Format::Json => json_doc(cfg, &result)?,
        };
        std::fs::write(path, body).map_err(|e| Error::InvalidParams(format!("cannot write {}: {e}", path.display())))?;
    }
    if confirmed {
        Ok(Outcome::Ok)
    } else {
        eprintln!("FAIL recomputation at depth {} left the certified interval", xi.depth + 2);
        Ok(Outcome::CheckFailed)
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String, Error> {
    let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
}

#[derive(Serialize)]
struct ExponentsRow {
    depth: usize,
    target_lo: Option<f64>,
    target_hi: Option<f64>,
    omega_candidate: f64,
    lambda_diagnostic: f64,
    beta_star: Option<f64>,
    omega_brute: Option<f64>,
    lambda_brute: Option<f64>,
    jarnik_residual: Option<f64>,
}

#[derive(Serialize)]
struct ExponentsResult {
    summary: ExponentsRow,
    estimates: Vec<ExponentEstimate>,
}

fn cmd_exponents(
    cfg: &RunConfig,
    resolved: Resolved,
    imax: usize,
    brute: &config::BruteArgs,
    tol: f64,
    output: &OutputArgs,
) -> Result<Outcome, Error> {
    let mut seq = sequence_of(&resolved)?;
    let (xi, y) = xi_for_slopes(&mut seq, imax)?;
    let cand = candidate_slopes(&seq, &y, 3..=imax)?;
    let target = match (&resolved.target, &resolved.family) {
        (Some(cp), _) => Some(target_interval(cp)),
        (None, Some(p)) => Some(target_interval_for(p.alpha(), p.beta())),
        _ => None,
    };
    let mut omega = cand.omega.clone();
    if let Some(t) = target {
        omega = omega.with_target(t);
    }
    let mut estimates = vec![omega.clone(), cand.lambda_diagnostic.clone()];
    let omega_brute = match brute.xmax_omega {
        Some(x) => {
            let e = uniform_slope(&omega_records(&y, x)?, ExponentKind::OmegaHat, Method::Bruteforce)?;
            estimates.push(e.clone());
            Some(e.estimate)
        }
        None => None,
    };
    let lambda_brute = match brute.xmax_lambda {
        Some(x) => {
            let e = uniform_slope(&lambda_records(&y, x)?, ExponentKind::LambdaHat, Method::Bruteforce)?;
            estimates.push(e.clone());
            Some(e.estimate)
        }
        None => None,
    };
    let summary = ExponentsRow {
        depth: xi.depth,
        target_lo: target.map(|t| t.0),
        target_hi: target.map(|t| t.1),
        omega_candidate: omega.estimate,
        lambda_diagnostic: cand.lambda_diagnostic.estimate,
        beta_star: cand.beta_star,
        omega_brute,
        lambda_brute,
        jarnik_residual: lambda_brute.map(|l| jarnik_residual(l, omega.estimate)),
    };
    let body = match output.format {
        Format::Csv => {
            let mut w = csv_writer();
            w.serialize(&summary).map_err(|e| Error::Serialize(e.to_string()))?;
            with_csv_header(cfg, &csv_string(w)?)
        }
        Format::Json => json_doc(cfg, &ExponentsResult { summary, estimates })?,
    };
    emit(output, &body)?;
    let mut ok = true;
    if omega.within_target(tol) == Some(false) {
        eprintln!("FAIL candidate ω̂ = {:.6} outside target ± {tol}", omega.estimate);
        ok = false;
    }
    if let Some(l) = lambda_brute {
        if !jarnik_check(l, omega.estimate, JARNIK_TOL) {
            eprintln!("FAIL Jarník residual {:.4} exceeds {JARNIK_TOL}", jarnik_residual(l, omega.estimate));
            ok = false;
        }
    }
    Ok(if ok { Outcome::Ok } else { Outcome::CheckFailed })
}
