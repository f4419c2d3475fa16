use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use subcone::{AdjacencyTest, OrderKind};

#[derive(Parser, Debug)]
#[command(name = "subcone", version, about = "Extremal rays of the cone of submodular functions")]
pub struct Cli {
    /// Worker threads (default: all available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Where to write the run manifest. Defaults to `<out>.manifest.json`
    /// next to the primary output, or one JSON line on stderr.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    /// Integer backend.
    #[arg(long, global = true, value_enum, default_value_t = Arith::Big)]
    pub arith: Arith,

    /// Progress messages on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Arith {
    /// Arbitrary precision.
    Big,
    /// Checked 128-bit; overflow aborts with exit code 4.
    I128,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the inequality matrix, and optionally an insertion order.
    Matrix(MatrixArgs),
    /// Run the Double Description method.
    Dd(DdArgs),
    /// One DD step: read a DD pair plus a row on stdin, write the next pair.
    DdStep(DdStepArgs),
    /// Neighbors of extremal rays.
    Neighbors(NeighborsArgs),
    /// Reduce rays to orbit representatives, or expand a pool to all rays.
    #[command(subcommand)]
    Orbits(OrbitsCommand),
    /// Collect extremal rays of the full cone from an intermediate cone.
    Harvest(HarvestArgs),
    /// Weight and orbit-size distributions.
    Stats(StatsArgs),
    /// Capture-recapture estimate of the number of orbits and rays.
    Estimate(EstimateArgs),
    /// Check that every ray in a file is extremal.
    Verify(VerifyArgs),
    /// Random extremal rays from random row subsets.
    Sample(SampleArgs),
    /// Adjacency decomposition over orbits, with a resumable journal.
    Bfs(BfsArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ConeArgs {
    /// Base-set size.
    #[arg(short, long)]
    pub n: usize,
}

#[derive(Args, Debug, Clone)]
pub struct OrderArgs {
    #[arg(long, default_value_t = OrderKind::TOpt)]
    pub order: OrderKind,
    /// Row labels, one per line; overrides `--order`'s row sequence.
    #[arg(long)]
    pub order_file: Option<PathBuf>,
    /// Seed for lexmin tie-breaking.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// Also write this static insertion order.
    #[arg(long)]
    pub order: Option<OrderKind>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short, long, default_value = "-")]
    pub out: PathBuf,
    /// Order file (default: `<out>.order`).
    #[arg(long)]
    pub order_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DdArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[command(flatten)]
    pub order: OrderArgs,
    /// Stop once this many rows (initial simplex included) are processed.
    #[arg(long)]
    pub stop_after: Option<usize>,
    /// Recursive order with the `n-1` rows `(0,j|X∖0j)` moved up so that
    /// the intermediate cone `C*_n` is pointed; stops there unless
    /// `--stop-after` says otherwise.
    #[arg(long, conflicts_with_all = ["order", "order_file"])]
    pub cstar: bool,
    /// Give up when an intermediate cone exceeds this many rays.
    #[arg(long, env = "SUBCONE_MAX_RAYS")]
    pub max_rays: Option<usize>,
    /// Rows left out, as `i,j|K` (e.g. `0,1|` or `0,5|34`) or a row index.
    #[arg(long)]
    pub exclude: Vec<String>,
    #[arg(long, default_value_t = AdjacencyTest::HalfGraph)]
    pub adjacency: AdjacencyTest,
    /// CSV of `step,rays` after every iteration.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Final DD pair, with the next row appended if the run stopped early.
    #[arg(long)]
    pub pair_out: Option<PathBuf>,
    /// Write rays in the SDDR1 binary format.
    #[arg(long)]
    pub binary: bool,
    #[arg(short, long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct DdStepArgs {
    #[arg(long, default_value_t = AdjacencyTest::HalfGraph)]
    pub adjacency: AdjacencyTest,
    #[arg(short, long, default_value = "-")]
    pub input: PathBuf,
    #[arg(short, long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct NeighborArgs {
    /// 1 runs DD on the neighbor cone; larger values decompose it recursively.
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    /// Ray budget for each neighbor-cone enumeration.
    #[arg(long, env = "SUBCONE_MAX_RAYS")]
    pub max_rays: Option<usize>,
    #[arg(long, default_value_t = OrderKind::TOpt)]
    pub order: OrderKind,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = AdjacencyTest::HalfGraph)]
    pub adjacency: AdjacencyTest,
}

#[derive(Args, Debug)]
pub struct NeighborsArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[command(flatten)]
    pub neighbor: NeighborArgs,
    /// Rays whose neighbors are wanted (text or SDDR1).
    #[arg(short, long, default_value = "-")]
    pub rays: PathBuf,
    /// Write orbit representatives of the neighbors instead of the rays.
    #[arg(long)]
    pub canonical: bool,
    #[arg(short, long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum OrbitsCommand {
    /// Rays to an annotated pool of orbit representatives.
    Canonicalize {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(short, long, default_value = "-")]
        rays: PathBuf,
        #[arg(short, long, default_value = "-")]
        out: PathBuf,
    },
    /// A pool to every ray of every orbit.
    Expand {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(short, long, default_value = "-")]
        pool: PathBuf,
        #[arg(long)]
        binary: bool,
        #[arg(short, long, default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct HarvestArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[arg(long, default_value_t = OrderKind::Recursive)]
    pub order: OrderKind,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rows in the intermediate cone (initial simplex included).
    #[arg(long, required_unless_present = "cstar")]
    pub stop_after: Option<usize>,
    /// Start from `C*_n` (see `dd --cstar`) and treat every cut pair as
    /// adjacent.
    #[arg(long, conflicts_with_all = ["stop_after", "order"])]
    pub cstar: bool,
    /// Skip adjacency tests.
    #[arg(long)]
    pub assume_adjacent: bool,
    /// Harvest only with the next row instead of every remaining row.
    #[arg(long)]
    pub next_only: bool,
    #[arg(long, default_value_t = AdjacencyTest::HalfGraph)]
    pub adjacency: AdjacencyTest,
    #[arg(short, long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// A ray file (text or SDDR1).
    #[arg(long, conflicts_with = "pool", required_unless_present = "pool")]
    pub rays: Option<PathBuf>,
    /// An orbit pool.
    #[arg(long)]
    pub pool: Option<PathBuf>,
    /// Also reduce a ray file to orbits.
    #[arg(long)]
    pub orbits: bool,
    /// CSV of `bucket,count` over ray weights.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// CSV of `bucket,count` over orbit sizes.
    #[arg(long)]
    pub sizes: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Orbits in the pool.
    #[arg(long, required_unless_present = "pool_file")]
    pub pool: Option<u64>,
    /// Distinct orbits in the probe.
    #[arg(long, required_unless_present = "probe_file")]
    pub probe: Option<u64>,
    /// Probe orbits already in the pool.
    #[arg(long, required_unless_present_all = ["pool_file", "probe_file"])]
    pub overlap: Option<u64>,
    /// Pool file; overlap is counted against `--probe-file`.
    #[arg(long, requires = "probe_file", conflicts_with_all = ["pool", "overlap"])]
    pub pool_file: Option<PathBuf>,
    #[arg(long, requires = "pool_file", conflicts_with = "probe")]
    pub probe_file: Option<PathBuf>,
    /// Mean orbit size; read from pool annotations when omitted.
    #[arg(long)]
    pub mean_orbit_size: Option<f64>,
    #[arg(short, long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[arg(short, long, default_value = "-")]
    pub rays: PathBuf,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub attempts: usize,
    /// Draw most rows from the support of the first ray in this file.
    #[arg(long)]
    pub around: Option<PathBuf>,
    #[arg(short, long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BfsArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    #[command(flatten)]
    pub neighbor: NeighborArgs,
    /// Starting rays (default: `f_J` for `J = {0,1}`).
    #[arg(long)]
    pub seeds: Option<PathBuf>,
    /// Annotated pool of every orbit found; read back on resume.
    #[arg(long)]
    pub pool: PathBuf,
    /// Probe journal; existing entries are skipped on resume.
    #[arg(long)]
    pub journal: PathBuf,
    #[arg(long, env = "SUBCONE_MAX_PROBES")]
    pub max_probes: Option<usize>,
    /// Orbits heavier than this are recorded but not probed.
    #[arg(long, env = "SUBCONE_MAX_WEIGHT")]
    pub max_weight: Option<usize>,
    #[arg(long, default_value_t = 64)]
    pub batch: usize,
    /// Spill the orbit ledger to sorted runs in this directory.
    #[arg(long)]
    pub spill_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 1 << 22)]
    pub spill_at: usize,
}
