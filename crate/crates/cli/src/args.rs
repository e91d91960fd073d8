use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use incidence_core::grading_sets::DEFAULT_BUDGET;

/// Finite relations, their incidence rings and group gradings.
#[derive(Debug, Parser)]
#[command(name = "incidence-lab", version)]
pub struct Cli {
    /// Print canonical JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Largest number of assignments any single enumeration may visit.
    #[arg(
        long,
        global = true,
        env = "INCIDENCE_LAB_BUDGET",
        default_value_t = DEFAULT_BUDGET,
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    pub budget: u64,

    /// Worker threads for parallel enumeration (defaults to one per core).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reflexive, balanced, stable, preorder, partial order and minimal connectivity.
    Check(RelationArg),
    /// Clasps of a relation and whether each is locked.
    Clasps(RelationArg),
    /// Hasse arrows of a partial order.
    Hasse(RelationArg),
    /// Paired quotient of a preorder.
    Quotient {
        #[command(flatten)]
        relation: RelationArg,
        /// One representative per class, comma separated.
        #[arg(long, value_delimiter = ',')]
        representatives: Vec<String>,
    },
    /// Crosscuts of a preorder.
    Crosscut {
        #[command(flatten)]
        relation: RelationArg,
        /// List crosscuts up to this many members (default: the shortest length).
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Brute-force associativity of the standard units.
    AssocOracle(RelationArg),
    /// Incidence ring arithmetic.
    #[command(subcommand)]
    Ring(RingCommand),
    /// Relation homomorphisms.
    #[command(subcommand)]
    Hom(HomCommand),
    /// Good gradings of incidence rings.
    #[command(subcommand)]
    Grade(GradeCommand),
    /// Grading sets.
    #[command(subcommand)]
    Gset(GsetCommand),
    /// Compressions between relations.
    #[command(subcommand)]
    Compress(CompressCommand),
    /// Worked examples with verdicts.
    #[command(subcommand)]
    Demo(DemoCommand),
}

#[derive(Debug, Args)]
pub struct RelationArg {
    /// Relation file.
    #[arg(long)]
    pub relation: PathBuf,
}

#[derive(Debug, Args)]
pub struct HomArgs {
    #[command(flatten)]
    pub relation: RelationArg,
    /// Built-in group label (Z2, S3, K4, Zinf, ...) or group file.
    #[arg(long)]
    pub group: String,
    /// Homomorphism file.
    #[arg(long)]
    pub hom: PathBuf,
}

#[derive(Debug, Args)]
pub struct GroupList {
    /// Test group; repeat for several. Defaults to Z2, Z3 and S3.
    #[arg(long = "group")]
    pub groups: Vec<String>,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// Relation ρ₂ the map is defined on.
    #[arg(long)]
    pub source: PathBuf,
    /// Relation ρ₁ the map lands in.
    #[arg(long)]
    pub target: PathBuf,
    /// Compression file.
    #[arg(long)]
    pub map: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum RingCommand {
    /// Convolution product of the elements, left to right.
    Mul(ElementList),
    /// Sum of the elements.
    Add(ElementList),
}

#[derive(Debug, Args)]
pub struct ElementList {
    #[command(flatten)]
    pub relation: RelationArg,
    /// Element file; give at least two.
    #[arg(long = "element", required = true)]
    pub elements: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum HomCommand {
    /// Checks that a complete assignment is a homomorphism.
    Verify(HomArgs),
    /// Extends values on the Hasse arrows of a minimally connected partial order.
    Extend(HomArgs),
}

#[derive(Debug, Subcommand)]
pub enum GradeCommand {
    /// Grading induced by a homomorphism.
    Induce {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Homogeneous components of an element.
    Decompose {
        #[command(flatten)]
        hom: HomArgs,
        /// Element file; its ring is used.
        #[arg(long)]
        element: PathBuf,
    },
    /// Component closure of arbitrary unit degrees given in homomorphism-file format.
    Closure {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Recovers the homomorphism behind a closed grading.
    Extract {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum GsetCommand {
    /// Extendible and essential verdicts for a subset.
    Verify {
        #[command(flatten)]
        relation: RelationArg,
        /// Subset file.
        #[arg(long)]
        subset: PathBuf,
        #[command(flatten)]
        groups: GroupList,
    },
    /// Smallest grading set for the listed groups.
    Search {
        #[command(flatten)]
        relation: RelationArg,
        #[command(flatten)]
        groups: GroupList,
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Lifts a grading set of the paired quotient to the preorder.
    JonesLift {
        #[command(flatten)]
        relation: RelationArg,
        /// Grading set of the quotient, named by representatives.
        #[arg(long)]
        subset: PathBuf,
        /// One representative per class, comma separated.
        #[arg(long, value_delimiter = ',')]
        representatives: Vec<String>,
        #[command(flatten)]
        groups: GroupList,
        /// Values on σ to extend; needs exactly one group.
        #[arg(long)]
        hom: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Forward,
    Reverse,
}

#[derive(Debug, Subcommand)]
pub enum CompressCommand {
    /// Checks the three compression conditions.
    Verify(MapArgs),
    /// Pulls a homomorphism on the target back to the source.
    Induce {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        group: String,
        /// Homomorphism file on the target.
        #[arg(long)]
        hom: PathBuf,
    },
    /// Image of an element of the source ring in the target ring.
    Embed {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        element: PathBuf,
    },
    /// Moves a subset across θ* and certifies the result.
    Transport {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        subset: PathBuf,
        #[arg(long, value_enum, default_value_t = DirectionArg::Forward)]
        direction: DirectionArg,
        #[command(flatten)]
        groups: GroupList,
    },
    /// Compression of a stable relation onto it whose source has no clasps.
    Split(RelationArg),
}

#[derive(Debug, Subcommand)]
pub enum DemoCommand {
    /// Clasp splitting, quotient, lift and transport on the five-point example.
    Fig2,
    /// Image sizes of the chain gradings into the infinite cyclic group.
    InfiniteSupport {
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(2..=64))]
        k: u64,
    },
    /// Balance against unit associativity on four atoms.
    Sweep4,
}
