//! `goi`: runs the property suites and demos, printing one JSON object per
//! line. Exit status 0 when every check passes, 1 when one fails, 2 on a
//! usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "goi", version, about = "Traced categories, GoI and projector networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Common {
    /// Seed for every random draw.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the comparison tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Cat {
    Fdvec,
    RelTimes,
    RelPlus,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Trace axioms on random samples.
    Axioms {
        #[arg(long, value_enum, default_value = "all")]
        cat: Cat,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Largest dimension or carrier size drawn.
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Traces from projectors: theta(v ⊗ u) = Tr(f)(v) ⊗ P(u).
    Lemma1 {
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Dimensions `V,U,W`; both default shapes when omitted.
        #[arg(long, value_parser = dims::<3>)]
        dims: Option<[usize; 3]>,
        #[command(flatten)]
        common: Common,
    },
    /// Linear maps from projectors: zeta(v ⊗ u) = K bell ⊗ f(v).
    Lemma2 {
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Dimensions `V,W`.
        #[arg(long, value_parser = dims::<2>, default_value = "2,3")]
        dims: [usize; 2],
        #[command(flatten)]
        common: Common,
    },
    /// Teleport a random state through a maximally entangled context.
    Teleport {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Also draw the measurement outcomes from the seeded generator.
        #[arg(long)]
        sample: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Copy a basis state and a superposition with the diagonal map.
    Clone {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Unit and associativity laws of GoI composition.
    GoiCompose {
        #[arg(long, value_enum, default_value = "all")]
        cat: Cat,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the projector network with GoI composition.
    Network {
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// The relational image of linear maps.
    FunctorR {
        /// Print the map whose image is only laxly functorial.
        #[arg(long)]
        counterexample: bool,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Wave network, its relational image, and a particle network.
    Descent {
        /// Dimension of each space in the wave network.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Parse, check and compile a term file.
    Compile {
        file: PathBuf,
        /// Print the linear map of a first-order program.
        #[arg(long)]
        denote: bool,
        /// Print the compiled GoI morphism.
        #[arg(long)]
        json: bool,
    },
}

/// Parses exactly `N` comma-separated dimensions.
fn dims<const N: usize>(s: &str) -> Result<[usize; N], String> {
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    parts.try_into().map_err(|p: Vec<usize>| format!("expected {N} dimensions, got {}", p.len()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(lines) => {
            let mut ok = true;
            for (line, passed) in lines {
                println!("{line}");
                ok &= passed;
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(e) => {
            println!("{}", serde_json::json!({ "error": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
