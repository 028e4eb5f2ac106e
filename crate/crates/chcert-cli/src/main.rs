//! Command-line front end: parse a run configuration, execute the
//! requested verification, and emit the certificate.
//!
//! Exit codes: 0 when the run certifies (or a scan completes), 1 when an
//! inequality fails, 2 for configuration errors, 3 for internal
//! inconsistencies such as a degenerate spectrum.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use chcert::atlas::CircleAtlas;
use chcert::certificate::{InequalityRecord, Relation, VerificationCertificate};
use chcert::cones::check_cone_conditions;
use chcert::covering::check_covering_parallel;
use chcert::henon::{
    assemble_backward_bounds, assemble_forward_bounds, chart_triples, eigen_data,
    full_verify_threaded, max_certified_epsilon, resolve_v, MapDirection,
};
use chcert::Error as LibError;

use config::{Mode, RunConfig};
use report::{render, RunOutcome};

/// Certifies covering relations and cone conditions for the rotating
/// Henon map with rigorous interval arithmetic.
#[derive(Debug, Parser)]
#[command(name = "chcert", version, about)]
struct Cli {
    /// Configuration file (key = value lines); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,

    /// henon-verify | henon-scan | cones-check | covering-check | atlas-validate
    #[arg(long)]
    mode: Option<String>,

    /// Perturbation size (default 0.5).
    #[arg(long)]
    epsilon: Option<f64>,

    /// Unstable-direction frame rescaling (default 3).
    #[arg(long)]
    tau: Option<f64>,

    /// Stable-direction frame rescaling (default 0.075).
    #[arg(long)]
    eta: Option<f64>,

    /// Forward cone expansion rate (default 2).
    #[arg(long = "m-forward")]
    m_forward: Option<f64>,

    /// Backward cone expansion rate (default 200).
    #[arg(long = "m-backward")]
    m_backward: Option<f64>,

    /// Output path; "-" or omitted writes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format: text | structured.
    #[arg(long)]
    format: Option<String>,
}

fn main() -> ExitCode {
    match run() {
        Ok(success) => {
            if success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("chcert: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn config_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn lib_failure(e: LibError) -> Failure {
    let code = match e {
        LibError::InvalidParams(_)
        | LibError::AtlasTooSmall(_)
        | LibError::InvalidRate(_)
        | LibError::InvalidRescale(_) => 2,
        _ => 3,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn run() -> Result<bool, Failure> {
    let cli = Cli::parse();

    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                config_failure(format!("cannot read config {}: {e}", path.display()))
            })?;
            config::parse_config(&text).map_err(|e| config_failure(e.to_string()))?
        }
        None => RunConfig::default(),
    };

    // Flags override the file.
    if let Some(mode) = &cli.mode {
        cfg.mode = mode.parse().map_err(config_failure)?;
    }
    if let Some(x) = cli.epsilon {
        cfg.epsilon = x;
    }
    if let Some(x) = cli.tau {
        cfg.tau = x;
    }
    if let Some(x) = cli.eta {
        cfg.eta = x;
    }
    if let Some(x) = cli.m_forward {
        cfg.m_forward = x;
    }
    if let Some(x) = cli.m_backward {
        cfg.m_backward = x;
    }
    if let Some(p) = cli.out {
        cfg.out = if p.as_os_str() == "-" { None } else { Some(p) };
    }
    if let Some(f) = &cli.format {
        cfg.format = f.parse().map_err(config_failure)?;
    }
    config::validate(&cfg).map_err(|e| config_failure(e.to_string()))?;

    let threads = thread_count();
    let outcome = execute(&cfg, threads).map_err(lib_failure)?;

    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let text = render(&cfg, &outcome, &timestamp);
    match &cfg.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| {
            config_failure(format!("cannot write certificate {}: {e}", path.display()))
        })?,
        None => print!("{text}"),
    }
    if !outcome.exit_success() {
        // Echo the failing names to stderr even when the certificate went
        // to a file.
        eprintln!(
            "chcert: verification failed: {}",
            outcome.cert.failures().join(", ")
        );
    }
    Ok(outcome.exit_success())
}

/// Worker threads for the covering checks; `CHCERT_THREADS` is the only
/// environment variable the tool reads.
fn thread_count() -> usize {
    std::env::var("CHCERT_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

fn execute(cfg: &RunConfig, threads: usize) -> chcert::Result<RunOutcome> {
    let params = cfg.henon_params()?;
    match cfg.mode {
        Mode::HenonVerify => {
            let cert = full_verify_threaded(&params, cfg.m_forward, cfg.m_backward, threads)?;
            Ok(RunOutcome { cert, scan: None })
        }
        Mode::HenonScan => {
            let scan = max_certified_epsilon(&params, cfg.m_forward, cfg.m_backward)?;
            Ok(RunOutcome {
                cert: VerificationCertificate::new(),
                scan: Some(scan),
            })
        }
        Mode::ConesCheck => {
            let frame = eigen_data(&params)?;
            let v = resolve_v(&params, &frame, Some(cfg.m_forward), Some(cfg.m_backward))?;
            let mut cert = VerificationCertificate::new();
            cert.resolved_v = Some(v);
            let fwd =
                check_cone_conditions(&assemble_forward_bounds(&params, &frame, v), cfg.m_forward)?;
            let bwd = check_cone_conditions(
                &assemble_backward_bounds(&params, &frame, v)?,
                cfg.m_backward,
            )?;
            for (tag, verdict) in [("cone-est1-forward", fwd), ("cone-est1-backward", bwd)] {
                cert.push(InequalityRecord::new(
                    format!("{tag}-1"),
                    verdict.lhs[0],
                    verdict.m,
                    Relation::Less,
                ));
                cert.push(InequalityRecord::new(
                    format!("{tag}-2"),
                    verdict.lhs[1],
                    verdict.m,
                    Relation::Greater,
                ));
                cert.push(InequalityRecord::new(
                    format!("{tag}-3"),
                    verdict.lhs[2],
                    verdict.m,
                    Relation::Less,
                ));
            }
            Ok(RunOutcome { cert, scan: None })
        }
        Mode::CoveringCheck => {
            let frame = eigen_data(&params)?;
            let v = resolve_v(&params, &frame, None, None)?;
            let atlas = CircleAtlas::new(v)?;
            let mut cert = VerificationCertificate::new();
            cert.resolved_v = Some(v);
            for (direction, tags) in [
                (
                    MapDirection::Forward,
                    ("zero-image", "cover-est-henon1", "cover-est-henon2"),
                ),
                (
                    MapDirection::Backward,
                    ("zero-image-inv", "cover-est-henon3", "cover-est-henon4"),
                ),
            ] {
                let triples = chart_triples(&params, &frame, &atlas, direction)?;
                let verdict = check_covering_parallel(&triples, threads)?;
                let mut expansion = f64::INFINITY;
                let mut exp_thr = f64::NEG_INFINITY;
                let mut contraction = f64::NEG_INFINITY;
                let mut con_thr = f64::INFINITY;
                let mut zero_ok = true;
                for (t, d) in triples.iter().zip(&verdict.diagnostics) {
                    expansion = expansion.min(d.expansion_lower);
                    exp_thr = exp_thr.max(1.0 + t.eps_u);
                    contraction = contraction.max(d.contraction_upper);
                    con_thr = con_thr.min(1.0 - t.eps_s);
                    zero_ok &= d.zero_image_ok;
                }
                cert.push(InequalityRecord::new(
                    tags.0,
                    if zero_ok { 0.0 } else { 1.0 },
                    0.0,
                    Relation::LessEq,
                ));
                cert.push(InequalityRecord::new(
                    tags.1,
                    expansion,
                    exp_thr,
                    Relation::Greater,
                ));
                cert.push(InequalityRecord::new(
                    tags.2,
                    contraction,
                    con_thr,
                    Relation::Less,
                ));
            }
            Ok(RunOutcome { cert, scan: None })
        }
        Mode::AtlasValidate => {
            let frame = eigen_data(&params)?;
            let v = resolve_v(&params, &frame, None, None)?;
            let atlas = CircleAtlas::new(v)?;
            let report = atlas.validate_cone_containment();
            let mut cert = VerificationCertificate::new();
            cert.resolved_v = Some(v);
            cert.push(InequalityRecord::new(
                "atls-cond",
                report.enclosing_margin,
                0.0,
                Relation::Greater,
            ));
            cert.push(InequalityRecord::new(
                "atls-good-pair",
                report.chart_pair_margin,
                0.0,
                Relation::Greater,
            ));
            Ok(RunOutcome { cert, scan: None })
        }
    }
}
