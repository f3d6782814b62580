use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "hyperrec",
    version,
    about = "Finite-scale verification of recurrence in hyperspaces",
    long_about = "Builds the subshift, skew-product, annulus and rigid constructions, runs the \
                  finite-scale checks and certificates, and writes JSON verification reports.\n\n\
                  Exit status: 0 all checks passed, 1 a check failed, 2 usage or configuration \
                  error, 3 capacity or insufficient series depth."
)]
pub struct Cli {
    /// Write the JSON report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub json: Option<PathBuf>,

    /// TOML configuration file (keys: symbol_budget, allow_large_levels).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Symbol budget for word constructions; overrides the environment and
    /// the configuration file.
    #[arg(long, global = true, env = "HYPERREC_SYMBOL_BUDGET", value_name = "SYMBOLS")]
    pub budget: Option<u128>,

    /// Only print the final verdict line.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Weakly mixing subshift X(w, eps): build the word ladder and verify it.
    Wm(WmArgs),
    /// Grand shift: union of the level subshifts with eps_m = 9^-m.
    Grand(GrandArgs),
    /// Smallest k with k, k+1 in N([u], [v]) in the grand shift.
    GrandWitness(GrandWitnessArgs),
    /// Periodic set inside the cylinder [u] of the grand shift.
    GrandPeriodic(GrandPeriodicArgs),
    /// Recurrence scan d_H(T_K^n A, A) of a finite set A.
    Scan(ScanArgs),
    /// Non-recurrent fibre of the skew product (x, y) -> (x + alpha, y + x).
    Example1(Example1Args),
    /// Truncated annulus: pointwise rigid, set not recurrent.
    Annulus(AnnulusArgs),
    /// Winding number and density of Birkhoff sums of a circle cocycle.
    Degree(DegreeArgs),
    /// Certificates for the uniformly rigid skew product.
    #[command(subcommand)]
    Rigid(RigidCommand),
    /// Recurrence combinatorics.
    #[command(subcommand)]
    Comb(CombCommand),
    /// Run a manifest of scenarios (default: the built-in acceptance corpus).
    Corpus(CorpusArgs),
}

#[derive(Args, Debug, Clone)]
pub struct WmArgs {
    /// Seed word over {0,1}; "0^k" shorthand allowed.
    #[arg(long)]
    pub w: String,
    /// Frequency bound as p/q.
    #[arg(long)]
    pub eps: String,
    /// Ladder depth (>= 2).
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Return-time horizon for the mixing and return-pair checks.
    #[arg(long)]
    pub horizon: Option<u64>,
    /// Use this admissible t instead of the minimal one.
    #[arg(long)]
    pub t: Option<u64>,
    /// Flip the prefix bit at this position before verifying (fault injection).
    #[arg(long, hide = true)]
    pub inject_flip: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct GrandArgs {
    #[arg(long, default_value_t = 2)]
    pub max_level: usize,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Permit levels above the default ceiling.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Args, Debug, Clone)]
pub struct GrandWitnessArgs {
    #[command(flatten)]
    pub grand: GrandArgs,
    #[arg(long, required_unless_present = "all_length", requires = "v")]
    pub u: Option<String>,
    #[arg(long, requires = "u")]
    pub v: Option<String>,
    /// Check every pair u, v of the length-k language instead.
    #[arg(long, conflicts_with = "u")]
    pub all_length: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub horizon: u64,
}

#[derive(Args, Debug, Clone)]
pub struct GrandPeriodicArgs {
    #[command(flatten)]
    pub grand: GrandArgs,
    #[arg(long)]
    pub u: String,
    /// Number of aligned repetitions required.
    #[arg(long, default_value_t = 50)]
    pub min_reps: u64,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    /// circle:<alpha>, example1:<alpha>, rotation2:<alpha>, annulus:<N>,
    /// full-shift or rigid. alpha is a decimal, p/q or "golden".
    #[arg(long)]
    pub system: String,
    /// A JSON array of points, @file with one, or a builder: grid:<g>,
    /// fiber:<g>[:<y0>], random:<count>:<seed>, rings (annulus), periodic
    /// (full shift).
    #[arg(long)]
    pub set: String,
    #[arg(long)]
    pub horizon: u64,
    #[arg(long)]
    pub backward: bool,
    /// Return threshold for the recurrence verdict.
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// Fail unless the verdict is as expected.
    #[arg(long, value_parser = ["recurrent", "non-recurrent"])]
    pub expect: Option<String>,
    /// Include the full distance profile in the report.
    #[arg(long)]
    pub profile: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Example1Args {
    /// Decimal, p/q or "golden".
    #[arg(long, default_value = "golden")]
    pub alpha: String,
    #[arg(long, default_value_t = 2048)]
    pub grid: usize,
    #[arg(long, default_value_t = 5000)]
    pub horizon: u64,
    #[arg(long, default_value_t = 0.0)]
    pub y0: f64,
}

#[derive(Args, Debug, Clone)]
pub struct AnnulusArgs {
    #[arg(long, default_value_t = 12)]
    pub circles: u32,
    #[arg(long)]
    pub horizon: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct DegreeArgs {
    /// x, <d>x, -x, coboundary[:amp] or rigid.
    #[arg(long, allow_hyphen_values = true)]
    pub cocycle: String,
    #[arg(long, default_value_t = 3)]
    pub n: u64,
    #[arg(long, default_value = "golden")]
    pub alpha: String,
    #[arg(long, default_value_t = 10_000)]
    pub grid: usize,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct RigidParamArgs {
    /// Terms of the alpha series used for enclosures.
    #[arg(long, default_value_t = 5)]
    pub j: usize,
    /// Terms of the cocycle series evaluated explicitly.
    #[arg(long = "k-terms", default_value_t = 5)]
    pub k_terms: usize,
    /// Fixed-point precision in bits.
    #[arg(long, default_value_t = 256)]
    pub prec: u32,
}

#[derive(Subcommand, Debug, Clone)]
pub enum RigidCommand {
    /// Rigidity certificate sup d(T^{n_s} z, z) <= bound.
    Cert {
        #[arg(long)]
        s: usize,
        #[command(flatten)]
        params: RigidParamArgs,
    },
    /// Certified vertical gap witnessing non-equicontinuity.
    Witness {
        #[arg(long)]
        l: usize,
        #[command(flatten)]
        params: RigidParamArgs,
    },
    /// Smallness inequality for ||n_k alpha|| (or ||n_k n_l alpha|| with --l).
    Ineq {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, default_value_t = 5)]
        j: usize,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum CombCommand {
    /// Finite-sum set of the generators, up to a bound.
    Fs {
        /// Comma-separated strictly increasing generators.
        #[arg(long, value_delimiter = ',')]
        gens: Vec<u64>,
        #[arg(long)]
        bound: u64,
    },
    /// Transfer set N(U, V), symbolic (--prefix) or metric (--system).
    Transfer(TransferArgs),
    /// Window densities of an index set.
    Density {
        /// JSON array, @file, evens:<end>, odds:<end> or mult:<m>:<end>.
        #[arg(long)]
        set: String,
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<u64>,
    },
    /// Smallest l in FS(gens) with J ∩ (J − l) of density >= theta.
    Ipshift {
        #[arg(long)]
        set: String,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<u64>,
        #[arg(long)]
        window: u64,
        /// p/q in (0, 1].
        #[arg(long)]
        theta: String,
        /// Fail unless this l is found.
        #[arg(long)]
        expect_l: Option<u64>,
    },
    /// Independence set of two cylinders.
    Indep {
        /// full, sturmian:<len> or word:<w>.
        #[arg(long, default_value = "full")]
        language: String,
        #[arg(long, default_value = "0")]
        u1: String,
        #[arg(long, default_value = "1")]
        u2: String,
        #[arg(long)]
        window: u64,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = ["found", "not-found"])]
        expect: Option<String>,
    },
    /// FS-generated return times of a closed ball into the eps-ball.
    Localrec {
        #[arg(long)]
        system: String,
        /// Point as JSON (number, [x, y], "u(v)" ...).
        #[arg(long)]
        point: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        horizon: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, value_parser = ["found", "not-found"])]
        expect: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct TransferArgs {
    /// Symbolic source: sturmian:<len>, grand:<level> or word:<w>.
    #[arg(long, conflicts_with = "system")]
    pub prefix: Option<String>,
    #[arg(long, requires = "prefix")]
    pub u: Option<String>,
    #[arg(long, requires = "prefix")]
    pub v: Option<String>,
    /// Metric system spec, as for scan.
    #[arg(long, requires_all = ["from", "to", "radius"])]
    pub system: Option<String>,
    /// Source point (JSON).
    #[arg(long)]
    pub from: Option<String>,
    /// Sample the open ball of this radius around the source point.
    #[arg(long)]
    pub from_radius: Option<f64>,
    /// Target ball centre (JSON).
    #[arg(long)]
    pub to: Option<String>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub horizon: u64,
}

#[derive(Args, Debug, Clone)]
pub struct CorpusArgs {
    /// JSON manifest {"scenarios": [{"name", "args"}]}; a scenario without
    /// args names a built-in scenario.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Directory for per-scenario reports and summary.json.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Run only these scenarios.
    #[arg(long)]
    pub only: Vec<String>,
    /// List the built-in scenarios and exit.
    #[arg(long)]
    pub list: bool,
}
