//! Command-line front end: count quasi-trees by several methods, verify the
//! closed-form table, and emit matrices, characteristic polynomials,
//! delta-matroids, matchings and transformed ribbon graphs.
//!
//! Exit codes: 0 ok, 1 disagreement or failed verification, 2 input error,
//! 3 method-eligibility refusal, 4 resource guard.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod util;

#[derive(Parser)]
#[command(name = "quasitree", version, about = "Exact quasi-tree counts of ribbon graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct InputArgs {
    /// Signed rotation of a bouquet, e.g. "-1,4,2,1,3,2,4,3"
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["family", "n"])]
    rotation: Option<String>,
    /// Family id: F, W, Fp, F1, Fp1, Fpn or W1
    #[arg(long, requires = "n")]
    family: Option<String>,
    /// Family index n
    #[arg(long, requires = "family")]
    n: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Count spanning quasi-trees by one or more methods
    Count {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated methods: brute, det, delcon, closed, or all
        #[arg(long, default_value = "all")]
        methods: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Worker threads for subset enumeration
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Lift the 24-edge brute-force guard
        #[arg(long)]
        force: bool,
    },
    /// Check brute force, determinant, recursion and closed form against
    /// each other for every family up to --max-n
    VerifyTable2 {
        #[arg(long, default_value_t = 12)]
        max_n: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        force: bool,
        /// Negative control: corrupt one closed-form value
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Print the intersection matrix A(B) and det(I + A)
    Matrix {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the characteristic polynomial of A(B)
    Charpoly {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Delta-matroid operations on D(B) or on a set system read from file
    Dm {
        #[command(flatten)]
        input: InputArgs,
        /// Set-system file (first line ground set, then one feasible set
        /// per line, "-" for the empty set); "-" reads stdin
        #[arg(long, conflicts_with_all = ["rotation", "family", "n"])]
        input_file: Option<String>,
        /// list, check, twist, loop-comp, slide, exchange or fourterm
        #[arg(long)]
        op: String,
        /// Elements for twist (comma-separated labels)
        #[arg(long)]
        set: Option<String>,
        /// First element for slide/exchange/fourterm, or loop-comp target
        #[arg(long)]
        a: Option<u32>,
        /// Second element for slide/exchange/fourterm
        #[arg(long)]
        b: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Lift the 24-edge enumeration guard
        #[arg(long)]
        force: bool,
    },
    /// Perfect-matching counts of P2 x Pn, P2 x Tn, or P2 x G for a graph
    /// read from an edge list
    Matchings {
        /// ladder (P2 x Pn) or caterpillar (P2 x Tn)
        #[arg(long, conflicts_with = "input_file")]
        kind: Option<String>,
        #[arg(long, conflicts_with = "input_file")]
        n: Option<usize>,
        /// Edge-list file ("u v" per line); "-" reads stdin
        #[arg(long)]
        input_file: Option<String>,
        /// Also print the product graph's edge list
        #[arg(long)]
        emit_graph: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Lift the 40-vertex product guard
        #[arg(long)]
        force: bool,
    },
    /// Emit a ribbon graph, optionally transformed by a pipeline of
    /// operations, e.g. --apply "dual:1,3|petrial:2|contract:1"
    Graph {
        #[command(flatten)]
        input: InputArgs,
        /// Ribbon-graph file in the v/e text format; "-" reads stdin
        #[arg(long, conflicts_with_all = ["rotation", "family", "n"])]
        input_file: Option<String>,
        /// Pipeline of dual:LABELS, petrial:LABELS, delete:LABEL,
        /// contract:LABEL separated by "|"
        #[arg(long)]
        apply: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Seeded random sweeps: determinant vs brute force, principal minors,
    /// delta-matroid identities and the four-term relation
    VerifyRandom {
        #[arg(long, default_value_t = 20240)]
        seed: u64,
        /// Instances per sweep
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Largest edge count / ground size used
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Count {
            input,
            methods,
            format,
            threads,
            force,
        } => commands::count(&input, &methods, format, threads, force),
        Command::VerifyTable2 {
            max_n,
            format,
            threads,
            force,
            inject_fault,
        } => commands::verify_table2(max_n, format, threads, force, inject_fault),
        Command::Matrix { input, format } => commands::matrix(&input, format),
        Command::Charpoly { input, format } => commands::charpoly(&input, format),
        Command::Dm {
            input,
            input_file,
            op,
            set,
            a,
            b,
            format,
            force,
        } => commands::dm(&input, input_file.as_deref(), &op, set.as_deref(), a, b, format, force),
        Command::Matchings {
            kind,
            n,
            input_file,
            emit_graph,
            format,
            force,
        } => commands::matchings(kind.as_deref(), n, input_file.as_deref(), emit_graph, format, force),
        Command::Graph {
            input,
            input_file,
            apply,
            format,
        } => commands::graph(&input, input_file.as_deref(), apply.as_deref(), format),
        Command::VerifyRandom {
            seed,
            count,
            max_n,
            threads,
            format,
        } => commands::verify_random(seed, count, max_n, threads, format),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
