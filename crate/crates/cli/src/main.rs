//! `picentral`: normal forms, span membership, Grassmann evaluation and the
//! claim catalog from the command line.
//!
//! Exit status: 0 pass/success, 1 claim failed, 2 inconclusive, 3 usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "picentral", version, about = "Central polynomials of Grassmann algebras over GF(p)")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Characteristic (odd prime).
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u32,
    /// unital or nonunital.
    #[arg(long, global = true, default_value = "nonunital")]
    pub mode: String,
    /// Number of Grassmann generators.
    #[arg(long = "N", global = true, default_value_t = 10)]
    pub n: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on spanning vectors per span (overrides PI_CENTRAL_BUDGET).
    #[arg(long, global = true)]
    pub budget_vectors: Option<usize>,
    /// Cap on nonzero echelon entries per span (overrides PI_CENTRAL_BUDGET).
    #[arg(long, global = true)]
    pub budget_entries: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include wall-clock runtimes in JSON certificates.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normal form modulo T(G0) in the BSS basis.
    Nf {
        expr: String,
    },
    /// Membership of a polynomial in a span, componentwise.
    Member {
        #[arg(long)]
        target: String,
        /// e.g. S2+TG0, T3, XP_T0, W1.
        #[arg(long)]
        span: String,
    },
    /// Evaluate in G(N) (unital) or G0(N) (nonunital).
    Eval {
        expr: String,
        /// Variable assignment, e.g. --assign "x1=e1 + e2e3". Unassigned
        /// variables get seeded random elements.
        #[arg(long = "assign")]
        assign: Vec<String>,
    },
    /// Search for an assignment making a polynomial nonzero or non-central.
    Witness {
        expr: String,
        #[arg(long)]
        noncentral: bool,
        /// Random samples after the structured family.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Run catalog claims.
    Verify {
        claim: Option<String>,
        #[arg(long)]
        m: Option<u32>,
        /// Every claim in the catalog.
        #[arg(long)]
        all: bool,
        /// The negative controls (each is expected to fail).
        #[arg(long)]
        controls: bool,
        /// JSON list of {"claim": ..., "params": {"p": .., "m": .., "seed": .., "n": ..}}.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Strictness of U_m < U_(m+1).
    Chain {
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Dimension of a span inside one multidegree component.
    Span {
        #[arg(long)]
        span: String,
        /// "3,3" for x1^3 x2^3, or "x1:3,x4:1".
        #[arg(long)]
        multidegree: String,
    },
    /// Check that every statement maps to catalog entries or is marked out of scope.
    Audit,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.render(cli.global.format));
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
