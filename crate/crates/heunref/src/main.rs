//! heunref command-line front end: list the catalog, evaluate kernels, run
//! verification sweeps.

use clap::{Args, Parser, Subcommand};
use heunref::catalog::{self, Identity};
use heunref::report::{RunHeader, RunReport, Verdict};
use heunref::specfun::{
    ellip_e_complete, ellip_f_incomplete, ellip_k_complete, heun_l, heun_l_prime, hyp2f1,
    HeunParams,
};
use heunref::verifier::{verify, SamplePlan};
use serde::Deserialize;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

#[derive(Parser)]
#[command(name = "heunref", version, about = "numerical referee for Heun-function integral identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the catalog: id, anchor, constraints, status.
    List {
        /// Glob over identity ids (supports '*' and '?').
        #[arg(long)]
        filter: Option<String>,
        /// Output format: text or json.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Evaluate a kernel function at the given arguments.
    ///
    /// Functions: heun_l a q alpha beta gamma delta x; heun_l_prime ...;
    /// hyp2f1 a b c z; ellip_f phi k; ellip_k k; ellip_e k.
    Eval {
        function: String,
        args: Vec<f64>,
    },
    /// Run verification sweeps over the (filtered) catalog.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Verify only ids matching this glob.
    #[arg(long, visible_alias = "filter")]
    only: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    draws: Option<usize>,
    /// Residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Quadrature tolerance.
    #[arg(long)]
    tol_quad: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Report file path.
    #[arg(long)]
    out: Option<String>,
    /// Report format: json or csv.
    #[arg(long, default_value = "json")]
    format: String,
    /// TOML or JSON file pre-setting plan fields (flags override).
    #[arg(long)]
    config: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
struct FileConfig {
    seed: Option<u64>,
    draws: Option<usize>,
    tol: Option<f64>,
    tol_quad: Option<f64>,
    points: Option<usize>,
    format: Option<String>,
    out: Option<String>,
}

/// Minimal glob: '*' matches any run, '?' any single character.
fn glob_match(pattern: &str, text: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    fn go(p: &[char], t: &[char]) -> bool {
        match (p.first(), t.first()) {
            (None, None) => true,
            (Some('*'), _) => go(&p[1..], t) || (!t.is_empty() && go(p, &t[1..])),
            (Some('?'), Some(_)) => go(&p[1..], &t[1..]),
            (Some(c), Some(d)) if c == d => go(&p[1..], &t[1..]),
            _ => false,
        }
    }
    go(&p, &t)
}

/// 15 significant digits; exact integers print bare.
fn fmt_value(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        return format!("{}", v as i64);
    }
    let s = format!("{v:.14e}");
    // rebuild plain notation from the scientific form
    let (mant, exp) = s.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..15).contains(&exp) {
        let neg = mant.starts_with('-');
        let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
        let point = exp + 1;
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if point <= 0 {
            out.push_str("0.");
            for _ in 0..(-point) {
                out.push('0');
            }
            out.push_str(&digits);
        } else if (point as usize) >= digits.len() {
            out.push_str(&digits);
            for _ in 0..(point as usize - digits.len()) {
                out.push('0');
            }
        } else {
            out.push_str(&digits[..point as usize]);
            out.push('.');
            out.push_str(&digits[point as usize..]);
        }
        out
    } else {
        s
    }
}

fn selected(filter: Option<&str>) -> Vec<&'static Identity> {
    catalog::catalog()
        .iter()
        .filter(|e| filter.map_or(true, |f| glob_match(f, e.id)))
        .collect()
}

fn cmd_list(filter: Option<&str>, format: &str) -> ExitCode {
    let entries = selected(filter);
    if entries.is_empty() {
        eprintln!("warning: no identities matched the filter");
    }
    match format {
        "json" => {
            let manifest: Vec<serde_json::Value> = entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "id": e.id,
                        "anchor": e.paper_anchor,
                        "constraints": e.constraints_text,
                        "status_note": e.status_note.as_str(),
                        "variants": e.variant_names(),
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&manifest).unwrap());
        }
        _ => {
            for e in entries {
                println!(
                    "{:<18} [{}] {} | {}",
                    e.id,
                    e.status_note.as_str(),
                    e.paper_anchor,
                    e.constraints_text
                );
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_eval(function: &str, args: &[f64]) -> ExitCode {
    let need = |n: usize| -> Result<(), String> {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!("{function} takes {n} arguments, got {}", args.len()))
        }
    };
    let result = (|| -> Result<f64, String> {
        match function {
            "heun_l" | "heun_l_prime" => {
                need(7)?;
                let p = HeunParams::new(args[0], args[1], args[2], args[3], args[4], args[5])
                    .map_err(|e| e.to_string())?;
                let f = if function == "heun_l" { heun_l } else { heun_l_prime };
                f(&p, args[6]).map_err(|e| e.to_string())
            }
            "hyp2f1" => {
                need(4)?;
                hyp2f1(args[0], args[1], args[2], args[3]).map_err(|e| e.to_string())
            }
            "ellip_f" => {
                need(2)?;
                ellip_f_incomplete(args[0], args[1]).map_err(|e| e.to_string())
            }
            "ellip_k" => {
                need(1)?;
                ellip_k_complete(args[0]).map_err(|e| e.to_string())
            }
            "ellip_e" => {
                need(1)?;
                ellip_e_complete(args[0]).map_err(|e| e.to_string())
            }
            other => Err(format!(
                "unknown function '{other}' (expected heun_l, heun_l_prime, hyp2f1, ellip_f, ellip_k, ellip_e)"
            )),
        }
    })();
    match result {
        Ok(v) => {
            println!("{}", fmt_value(v));
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_config(path: &str) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    if path.ends_with(".json") {
        serde_json::from_str(&text).map_err(|e| format!("invalid JSON config: {e}"))
    } else {
        toml::from_str(&text).map_err(|e| format!("invalid TOML config: {e}"))
    }
}

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    let file_cfg = match args.config.as_deref().map(load_config) {
        Some(Ok(c)) => c,
        Some(Err(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(4);
        }
        None => FileConfig::default(),
    };
    let mut plan = SamplePlan::default();
    if let Some(s) = file_cfg.seed {
        plan.rng_seed = s;
    }
    if let Some(d) = file_cfg.draws {
        plan.n_param_draws = d;
    }
    if let Some(t) = file_cfg.tol {
        plan.tol_residual = t;
    }
    if let Some(t) = file_cfg.tol_quad {
        plan.tol_quad = t;
    }
    if let Some(p) = file_cfg.points {
        plan.points_per_interval = p;
    }
    if let Some(s) = args.seed {
        plan.rng_seed = s;
    }
    if let Some(d) = args.draws {
        plan.n_param_draws = d;
    }
    if let Some(t) = args.tol {
        plan.tol_residual = t;
    }
    if let Some(t) = args.tol_quad {
        plan.tol_quad = t;
    }
    if let Some(p) = args.points {
        plan.points_per_interval = p;
    }
    let format = args.format.clone();
    let format = file_cfg.format.filter(|_| args.format == "json").unwrap_or(format);
    let out_path = args.out.clone().or(file_cfg.out);
    if plan.validate().is_err() {
        eprintln!("error: invalid plan: {:?}", plan.validate().unwrap_err());
        return ExitCode::from(4);
    }
    if format != "json" && format != "csv" {
        eprintln!("error: unknown report format '{format}'");
        return ExitCode::from(4);
    }
    let entries = selected(args.only.as_deref());
    if entries.is_empty() {
        eprintln!("error: no identities matched");
        return ExitCode::from(4);
    }
    let start = Instant::now();
    let mut results = Vec::new();
    for e in entries {
        match verify(e, &plan) {
            Ok(rep) => {
                let note = match (&rep.verdict, &rep.confirmed_variant) {
                    (Verdict::Confirmed, _) => String::new(),
                    (_, Some(v)) => format!(" (variant '{v}' CONFIRMED)"),
                    _ => String::new(),
                };
                println!("{:<18} {}{}", rep.identity, rep.verdict, note);
                results.push(rep);
            }
            Err(err) => {
                eprintln!("error verifying {}: {err}", e.id);
                return ExitCode::from(4);
            }
        }
    }
    let report = RunReport {
        header: RunHeader {
            timestamp_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis())
                .unwrap_or(0),
            wall_time_ms: start.elapsed().as_millis(),
            seed: plan.rng_seed,
            tool: format!("heunref {}", env!("CARGO_PKG_VERSION")),
        },
        results,
    };
    if let Some(path) = out_path {
        let body = if format == "csv" {
            report.to_csv()
        } else {
            report.to_json()
        };
        if let Err(e) = std::fs::write(&path, body) {
            eprintln!("error: cannot write {path}: {e}");
            return ExitCode::from(4);
        }
        println!("report written to {path}");
    }
    let any_refuted = report
        .results
        .iter()
        .any(|r| r.effective_verdict == Verdict::Refuted);
    let any_inconclusive = report
        .results
        .iter()
        .any(|r| r.effective_verdict == Verdict::Inconclusive);
    if any_refuted {
        ExitCode::from(1)
    } else if any_inconclusive {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("HEUNREF_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match &cli.command {
        Command::List { filter, format } => cmd_list(filter.as_deref(), format),
        Command::Eval { function, args } => cmd_eval(function, args),
        Command::Verify(args) => cmd_verify(args),
    }
}
