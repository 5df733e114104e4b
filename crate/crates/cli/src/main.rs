use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod run;

#[derive(Parser, Debug)]
#[command(
    name = "drinfeld",
    version,
    about = "Exact computations with Drinfeld modules over F_q[T]"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the result here instead of stdout
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Field size q = p^e
    #[arg(long)]
    q: u64,
    /// Modulus of F_q over F_p, ascending coefficients "c0,c1,...,1"
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Basic J-invariant exponent tuples
    Jinv {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
    },
    /// Self-isogenous modular polynomial for T-cyclic isogenies
    SelfisogT {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        r: usize,
        /// Exponents "δ1,...,δ(r-1),δr"
        #[arg(long)]
        j: String,
        /// "all" or an element of F_q^*
        #[arg(long, default_value = "all")]
        delta: String,
        /// Also emit g(Δ, X) for every Δ
        #[arg(long)]
        emit_g: bool,
    },
    /// Closed-form degree bounds for level T^2+T+1
    Bound {
        #[arg(long, value_enum)]
        which: BoundKind,
        #[arg(long)]
        q: u64,
    },
    /// φ_a as a twisted polynomial, or its symbolic coefficient system
    PhiA {
        /// Field size, or "any" for q left symbolic
        #[arg(long)]
        q: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        a: String,
        /// Coefficients g1,...,gr of φ_T as polynomials in T
        #[arg(long)]
        coeffs: Option<String>,
        #[arg(long)]
        symbolic: bool,
        /// τ-degree of a monic isogeny: emit the commutation system instead
        #[arg(long)]
        iso_deg: Option<usize>,
        /// Name of the top coefficient of φ_T in the commutation system
        #[arg(long, default_value = "Delta")]
        top_name: String,
        #[arg(long)]
        modulus: Option<String>,
    },
    /// γ(O, a) by bounded enumeration
    Gamma {
        #[arg(long)]
        order: PathBuf,
        #[arg(long)]
        a: String,
        /// Coordinate degree bound (default deg a)
        #[arg(long)]
        bound: Option<usize>,
        /// Degree bound known to make the search complete
        #[arg(long)]
        certified: Option<usize>,
    },
    /// Fitting norm of an ideal of an order
    Fitnorm {
        #[arg(long)]
        order: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
    },
    /// Generalized volcano generation and validation
    Volcano {
        #[command(subcommand)]
        cmd: VolcanoCmd,
    },
    /// Affine points of y^rexp = f(x) over F_q
    Points {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        rexp: u64,
        #[arg(long)]
        f: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BoundKind {
    Pairs,
    #[value(name = "Nq", alias = "nq")]
    Nq,
    Generic,
    Lift,
}

#[derive(Subcommand, Debug)]
enum VolcanoCmd {
    /// Build a volcano from crater group data
    Gen {
        /// Invariant factors "n1,n2,..." (empty for the trivial group)
        #[arg(long, default_value = "")]
        group: String,
        /// Prime images separated by ';', coordinates by ','
        #[arg(long, allow_hyphen_values = true)]
        images: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        degl: u32,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Per-level branching override "b1,b2,..."
        #[arg(long)]
        branching: Option<String>,
    },
    /// Check a graph JSON file against the volcano axioms
    Validate {
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        g1: usize,
        #[arg(long)]
        b: u64,
    },
    /// Built-in rank-3 examples over F_5
    Preset {
        #[arg(value_parser = ["r3-cycle", "r3-loop"])]
        name: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(&cli.cmd, cli.format) {
        Ok(out) => {
            let s = out.render(cli.format);
            let res = match &cli.out {
                Some(p) => std::fs::write(p, s),
                None => {
                    print!("{s}");
                    Ok(())
                }
            };
            match res {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(run::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(run::Failure::Math(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
    }
}
