//! `permpat`: longest common patterns and decomposition trees from the shell.
//!
//! Exit codes: 0 success / predicate true, 1 predicate false, 2 input error,
//! 3 algorithm precondition failed.

use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use permpat_core::export::{to_dot, to_json, to_text};
use permpat_core::{
    common_intervals, complexity_warning, decomposition_tree, expand_tree, find_occurrence, is_separable, is_simple,
    lcp_with, max_prime_arity, Algorithm, DpOptions, Error, LcpResult, Pattern, Permutation,
};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "permpat", version, about = "Longest common patterns between permutations")]
struct Cli {
    /// Output format for reports.
    #[arg(short, long, value_enum, global = true, default_value_t = Output::Text)]
    output: Output,
    /// Suppress diagnostics on standard error.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Auto,
    Separable,
    General,
    Oracle,
}

impl From<Algo> for Algorithm {
    fn from(a: Algo) -> Self {
        match a {
            Algo::Auto => Algorithm::Auto,
            Algo::Separable => Algorithm::Separable,
            Algo::General => Algorithm::General,
            Algo::Oracle => Algorithm::Oracle,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TreeKind {
    Labeled,
    Expanded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TreeFormat {
    Text,
    Dot,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Longest common pattern of two permutations.
    Lcp {
        sigma: Permutation,
        tau: Permutation,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
        /// Break ties toward the lexicographically smallest pattern.
        #[arg(long)]
        canonical: bool,
    },
    /// Print the decomposition tree of a permutation.
    Tree {
        sigma: Permutation,
        #[arg(long, value_enum, default_value_t = TreeKind::Labeled)]
        kind: TreeKind,
        /// Defaults to `json` under `--output json`, `text` otherwise.
        #[arg(long, value_enum)]
        format: Option<TreeFormat>,
    },
    /// Test whether a permutation is separable or simple.
    #[command(group(ArgGroup::new("predicate").required(true).args(["separable", "simple"])))]
    Check {
        sigma: Permutation,
        #[arg(long)]
        separable: bool,
        #[arg(long)]
        simple: bool,
    },
    /// Test whether PATTERN occurs in SIGMA.
    Contains { pattern: Permutation, sigma: Permutation },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotSeparable | Error::PrimeNode => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let json = cli.output == Output::Json;
    match &cli.command {
        Command::Lcp { sigma, tau, algo, canonical } => {
            let algorithm = Algorithm::from(*algo);
            if !cli.quiet {
                warn_complexity(sigma, tau, algorithm);
            }
            let options = DpOptions { canonical: *canonical, ..DpOptions::default() };
            let r = lcp_with(sigma, tau, algorithm, options)?;
            if json {
                println!("{}", lcp_json(&r));
            } else {
                println!("pattern: {}", r.pattern);
                println!("length: {}", r.len());
                println!("occ_sigma: {}", r.occ_sigma);
                println!("occ_tau: {}", r.occ_tau);
                println!("algorithm: {}", r.algorithm);
            }
            Ok(0)
        }
        Command::Tree { sigma, kind, format } => {
            let mut tree = decomposition_tree(sigma);
            if *kind == TreeKind::Expanded {
                tree = expand_tree(&tree);
            }
            let format = format.unwrap_or(if json { TreeFormat::Json } else { TreeFormat::Text });
            match format {
                TreeFormat::Text => print!("{}", to_text(&tree)),
                TreeFormat::Dot => print!("{}", to_dot(&tree)),
                TreeFormat::Json => println!("{}", to_json(&tree)),
            }
            Ok(0)
        }
        Command::Check { sigma, separable, .. } => {
            let report = if *separable { check_separable(sigma) } else { check_simple(sigma) };
            if json {
                println!("{}", report.json);
            } else if !cli.quiet {
                println!("{}", report.text);
            }
            Ok(if report.holds { 0 } else { 1 })
        }
        Command::Contains { pattern, sigma } => {
            let r = lcp_with(pattern, sigma, Algorithm::Auto, DpOptions::default())?;
            let contained = r.len() == pattern.len();
            if json {
                let occ = contained.then(|| r.occ_tau.positions().to_vec());
                println!("{}", json!({ "contains": contained, "occurrence": occ }));
            } else if !cli.quiet {
                if contained {
                    let values = r.occ_tau.extract(sigma.values());
                    println!("occurrence: {} (values {})", r.occ_tau, join(&values));
                } else {
                    println!("not contained (longest common pattern has length {})", r.len());
                }
            }
            Ok(if contained { 0 } else { 1 })
        }
    }
}

fn warn_complexity(sigma: &Permutation, tau: &Permutation, algorithm: Algorithm) {
    let tree = match algorithm {
        Algorithm::Oracle => return,
        Algorithm::Auto => {
            let (ts, tt) = (decomposition_tree(sigma), decomposition_tree(tau));
            if (max_prime_arity(&tt), tau.len()) < (max_prime_arity(&ts), sigma.len()) {
                tt
            } else {
                ts
            }
        }
        Algorithm::Separable | Algorithm::General => decomposition_tree(sigma),
    };
    if let Some(w) = complexity_warning(&tree) {
        eprintln!("warning: {w}");
    }
}

fn lcp_json(r: &LcpResult) -> serde_json::Value {
    json!({
        "pattern": r.pattern.values(),
        "length": r.len(),
        "occ_sigma": r.occ_sigma.positions(),
        "occ_tau": r.occ_tau.positions(),
        "algorithm": r.algorithm.to_string(),
    })
}

struct Report {
    holds: bool,
    text: String,
    json: serde_json::Value,
}

fn join(values: &[u32]) -> String {
    values.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn check_separable(sigma: &Permutation) -> Report {
    if is_separable(sigma) {
        return Report {
            holds: true,
            text: "separable".into(),
            json: json!({ "predicate": "separable", "holds": true }),
        };
    }
    let witness = ["3 1 4 2", "2 4 1 3"]
        .iter()
        .map(|s| s.parse::<Pattern>().unwrap())
        .find_map(|p| find_occurrence(sigma.values(), &p).map(|occ| (p, occ)))
        .expect("a non-separable permutation contains 3 1 4 2 or 2 4 1 3");
    let (pattern, occ) = witness;
    let values = occ.extract(sigma.values());
    Report {
        holds: false,
        text: format!(
            "not separable: contains {pattern} at positions {occ} (values {})",
            join(&values)
        ),
        json: json!({
            "predicate": "separable",
            "holds": false,
            "witness": { "pattern": pattern.values(), "positions": occ.positions(), "values": values },
        }),
    }
}

fn check_simple(sigma: &Permutation) -> Report {
    if is_simple(sigma) {
        return Report {
            holds: true,
            text: "simple".into(),
            json: json!({ "predicate": "simple", "holds": true }),
        };
    }
    let n = sigma.len();
    let proper = common_intervals(sigma).into_iter().find(|s| s.lo != s.hi && s.width() != n);
    let (span, reason) = match proper {
        Some(s) => (s, format!("common interval {s}")),
        None => (
            permpat_core::IntervalSpan::new(1, n),
            format!("size {n} is below 4; only common interval besides singletons is [1..{n}]"),
        ),
    };
    Report {
        holds: false,
        text: format!("not simple: {reason}"),
        json: json!({
            "predicate": "simple",
            "holds": false,
            "witness": { "span": [span.lo, span.hi], "reason": reason },
        }),
    }
}
