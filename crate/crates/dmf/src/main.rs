//! dmf — exact computations with Drinfeld modular forms over F_q[T].
//!
//! Everything is computed with exact arithmetic (F_q(T)-coefficient series,
//! residue fields A/(π)); there are no floating-point tolerances anywhere.
//! Exit status: 0 when all requested checks pass, 1 when a verification or
//! agreement check fails, 2 for configuration errors (bad q, reducible π,
//! unparsable input), 3 when the requested computation needs more series
//! precision than `--prec` provides.

mod cmds;

use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dmf",
    version,
    about = "Exact workbench for Drinfeld modular forms over F_q[T]",
    after_help = "Polynomials accept both `T^3+2T+1` and `T^3 + 2*T + 1`; output is \
                  always canonical (explicit `*`, descending degree). JSON output \
                  carries a top-level \"schema\": 1."
)]
pub(crate) struct Cli {
    /// Field size q = p^e (odd prime power)
    #[arg(long, global = true, default_value_t = 3)]
    pub(crate) q: u64,

    /// Monic irreducible π over F_q, e.g. "T^3+2T+1"
    #[arg(long, global = true)]
    pub(crate) pi: Option<String>,

    /// Series precision (u-adic window length); defaults to 64, and for
    /// `verify` to enough window for the statement being checked
    #[arg(long, global = true)]
    pub(crate) prec: Option<usize>,

    /// Emit JSON instead of text
    #[arg(long, global = true)]
    pub(crate) json: bool,

    /// For `ssp`: also run the brute-force Drinfeld-module enumeration and
    /// compare
    #[arg(long, global = true)]
    pub(crate) oracle: bool,

    /// Sweep every monic irreducible of this degree (lexicographic order)
    /// instead of a single `--pi`
    #[arg(long, global = true, value_name = "D")]
    pub(crate) all_primes_of_degree: Option<u32>,

    #[command(subcommand)]
    pub(crate) cmd: Cmd,
}

#[derive(Subcommand)]
pub(crate) enum Cmd {
    /// Print the u-expansion of a target: g, h, E, g_<d>, u_a, form:<expr>
    Expand {
        /// What to expand: g | h | E | g_<d> | u_a[:<poly>] | form:<expr>
        target: String,
        /// The polynomial a for the u_a target (alternative to u_a:<poly>)
        #[arg(long)]
        a: Option<String>,
    },
    /// Supersingular polynomial S_π(x) at the prime --pi
    Ssp,
    /// Companion polynomial P(f, x) of a form
    Companion {
        /// The form: g | h | g_<d> | an expression like "g^4 + (T+1)*h^2"
        form: String,
    },
    /// Filtration of a form at the prime --pi
    Filtration {
        /// The form: g | h | g_<d> | an expression like "g^4 + (T+1)*h^2"
        form: String,
    },
    /// Wronskian of forms: symbolic (Serre-operator) and series routes
    Wronskian {
        /// Forms (each g | h | g_<d> | expression); symbolic route needs ≤ q of them
        #[arg(required = true)]
        forms: Vec<String>,
    },
    /// Run a verification suite and report each named check
    Verify {
        /// Which statement to verify
        #[arg(long, value_enum)]
        theorem: Theorem,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Theorem {
    /// Special-basis Wronskian: symbolic vs series, order, basis shape
    Computation,
    /// Supersingular factorization of the squared Wronskian at a cubic prime
    Ahlgrenono,
    /// Filtration divisibility bound on Eisenstein powers and random forms
    Dww,
    /// Companion-polynomial product congruences, both parity branches
    CompanionProducts,
    /// Everything applicable to the given prime(s)
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cmds::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// Map failures onto the documented exit contract: 3 for precision
/// exhaustion, 1 for failed mathematical checks, 2 for everything
/// configuration-shaped.
fn exit_code(err: &anyhow::Error) -> u8 {
    use drinfeld::Error;
    match err.downcast_ref::<Error>() {
        Some(Error::PrecisionExhausted { .. }) => 3,
        Some(Error::NotModular { .. }) | Some(Error::InternalInconsistency(_)) => 1,
        Some(_) => 2,
        None => 2,
    }
}
