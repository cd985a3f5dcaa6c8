use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use dissim::datagen::{self, GaussianCloudSpec, PolylineCloudSpec};
use dissim::embedding::project_all;
use dissim::evaluation::{run_experiment, ExperimentConfig, PairSamplingSpec};
use dissim::selection::{self, FftStart, Policy, PrototypeSet, SffParams};
use dissim::{io as fmt, Dataset, DistanceKernel, Error};

#[derive(Debug, Parser)]
#[command(
    name = "dissim",
    version,
    about = "Dissimilarity embedding of streamlines and point clouds"
)]
struct Cli {
    /// Worker threads for the library (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic dataset
    #[command(subcommand)]
    Generate(Generate),
    /// Select prototypes from a dataset
    Select(SelectArgs),
    /// Project a dataset onto prototypes, writing an N x p CSV
    Embed(EmbedArgs),
    /// Correlation between original and embedded distances over repetitions
    Evaluate(EvaluateArgs),
    /// Time prototype selection on generated datasets of several sizes
    Bench(BenchArgs),
}

#[derive(Debug, Subcommand)]
enum Generate {
    /// Points from the standard normal in 2D
    Gaussian {
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smooth 3D random-walk polylines
    Polylines {
        #[command(flatten)]
        shape: PolylineArgs,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
struct PolylineArgs {
    #[arg(long, default_value_t = 20)]
    min_points: usize,
    #[arg(long, default_value_t = 100)]
    max_points: usize,
    /// Side of the start-point cube, mm
    #[arg(long, default_value_t = 100.0)]
    extent: f64,
    /// Distance between consecutive points, mm
    #[arg(long, default_value_t = 1.0)]
    step_length: f64,
    /// Direction persistence in [0, 1)
    #[arg(long, default_value_t = 0.9)]
    momentum: f64,
}

impl PolylineArgs {
    fn spec(&self, n: usize, seed: u64) -> PolylineCloudSpec {
        PolylineCloudSpec {
            n,
            min_points: self.min_points,
            max_points: self.max_points,
            extent: self.extent,
            step_length: self.step_length,
            momentum: self.momentum,
            seed,
        }
    }
}

#[derive(Debug, Args)]
struct SelectArgs {
    /// Streamline file
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "sff", value_parser = Policy::from_str)]
    policy: Policy,
    #[arg(long)]
    p: usize,
    /// SFF oversampling constant
    #[arg(long, default_value_t = selection::DEFAULT_SFF_C)]
    c: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "mam", value_parser = DistanceKernel::from_str)]
    kernel: DistanceKernel,
    /// Force the first FFT prototype to this index instead of drawing it
    #[arg(long)]
    fft_start: Option<usize>,
    /// Prototype indices, one per line (default: stdout)
    #[arg(long)]
    out_indices: Option<PathBuf>,
    /// Prototype streamlines in the streamline format
    #[arg(long)]
    out_prototypes: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    #[arg(long)]
    input: PathBuf,
    /// Prototype streamline file
    #[arg(long)]
    prototypes: PathBuf,
    #[arg(long, default_value = "mam", value_parser = DistanceKernel::from_str)]
    kernel: DistanceKernel,
    /// Divide coordinates by sqrt(p)
    #[arg(long)]
    normalized: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairsArg {
    Auto,
    All,
    Random(usize),
}

impl FromStr for PairsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(PairsArg::Auto),
            "all" => Ok(PairsArg::All),
            _ => s
                .strip_prefix("random:")
                .and_then(|c| c.parse().ok())
                .map(PairsArg::Random)
                .ok_or_else(|| format!("expected 'auto', 'all' or 'random:COUNT', got '{s}'")),
        }
    }
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated policies
    #[arg(long, value_delimiter = ',', default_value = "random,fft,sff", value_parser = Policy::from_str)]
    policy: Vec<Policy>,
    #[arg(long, value_delimiter = ',', default_value = "5,10,15,20,25,30,40,50")]
    p_list: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    repetitions: usize,
    /// auto | all | random:COUNT
    #[arg(long, default_value = "auto")]
    pairs: PairsArg,
    /// Seed of the pair sample
    #[arg(long, default_value_t = 0)]
    pair_seed: u64,
    /// Base seed; repetition r uses seed + r
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = selection::DEFAULT_SFF_C)]
    c: f64,
    #[arg(long, default_value = "mam", value_parser = DistanceKernel::from_str)]
    kernel: DistanceKernel,
    /// Leave wall_time_ms empty for byte-reproducible output
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "fft,sff", value_parser = Policy::from_str)]
    policy: Vec<Policy>,
    #[arg(long, default_value_t = 50)]
    p: usize,
    #[arg(long, default_value_t = selection::DEFAULT_SFF_C)]
    c: f64,
    /// Comma-separated dataset sizes
    #[arg(long, value_delimiter = ',', default_value = "1000,10000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "mam", value_parser = DistanceKernel::from_str)]
    kernel: DistanceKernel,
    #[command(flatten)]
    shape: PolylineArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_dataset(dataset: &Dataset, path: Option<&PathBuf>) -> Result<(), Error> {
    match path {
        Some(p) => fmt::write_streamlines(dataset, p),
        None => {
            let mut out = output(None)?;
            out.write_all(fmt::format_streamlines(dataset).as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn run_generate(cmd: &Generate) -> Result<(), Error> {
    match cmd {
        Generate::Gaussian { n, seed, out } => {
            let ds = datagen::generate_gaussian(GaussianCloudSpec { n: *n, seed: *seed })?;
            write_dataset(&ds, out.as_ref())
        }
        Generate::Polylines {
            shape,
            n,
            seed,
            out,
        } => {
            let ds = datagen::generate_polylines(shape.spec(*n, *seed))?;
            write_dataset(&ds, out.as_ref())
        }
    }
}

fn run_select(args: &SelectArgs) -> Result<(), Error> {
    let ds = fmt::read_streamlines(&args.input)?;
    let set: PrototypeSet = match (args.policy, args.fft_start) {
        (Policy::Fft, Some(start)) => {
            selection::select_fft_with(&ds, args.p, args.kernel, args.seed, FftStart::Index(start))?
        }
        (_, Some(_)) => {
            return Err(Error::InvalidParameter(
                "--fft-start only applies to --policy fft".into(),
            ))
        }
        (Policy::Sff, None) => {
            let params = SffParams::new(args.p, args.c)?;
            eprintln!("sff subset size m = {}", params.subset_size(ds.len()));
            selection::select_sff(&ds, params, args.kernel, args.seed)?
        }
        (policy, None) => selection::select(&ds, policy, args.p, args.c, args.kernel, args.seed)?,
    };
    let mut out = output(args.out_indices.as_ref())?;
    fmt::write_indices(&set.indices, &mut out)?;
    out.flush()?;
    if let Some(path) = &args.out_prototypes {
        fmt::write_streamlines(&Dataset::new(set.streamlines), path)?;
    }
    Ok(())
}

fn run_embed(args: &EmbedArgs) -> Result<(), Error> {
    let ds = fmt::read_streamlines(&args.input)?;
    let protos = fmt::read_streamlines(&args.prototypes)?;
    let set = PrototypeSet {
        indices: (0..protos.len()).collect(),
        streamlines: protos.into_streamlines(),
        policy: Policy::Random,
        seed: 0,
    };
    let mut embedded = project_all(&ds, &set, args.kernel)?;
    if args.normalized {
        embedded = embedded.normalized();
    }
    let mut out = output(args.out.as_ref())?;
    fmt::write_embedded_csv(&embedded, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run_evaluate(args: &EvaluateArgs) -> Result<(), Error> {
    let ds = fmt::read_streamlines(&args.input)?;
    let pairs = match args.pairs {
        PairsArg::Auto => PairSamplingSpec::default_for(ds.len(), args.pair_seed),
        PairsArg::All => PairSamplingSpec::AllPairs,
        PairsArg::Random(count) => PairSamplingSpec::RandomPairs {
            count,
            seed: args.pair_seed,
        },
    };
    eprintln!("resolved pairs: {pairs:?} over {} objects", ds.len());
    let mut reports = Vec::new();
    for &policy in &args.policy {
        let config = ExperimentConfig {
            policy,
            p_values: args.p_list.clone(),
            repetitions: args.repetitions,
            kernel: args.kernel,
            pairs,
            base_seed: args.seed,
            c: args.c,
        };
        let policy_reports = run_experiment(&ds, &config)?;
        for r in &policy_reports {
            eprintln!(
                "{:>6} p={:<4} mean={:.4} std={:.4}",
                r.policy, r.p, r.mean, r.std
            );
        }
        reports.extend(policy_reports);
    }
    let mut out = output(args.out.as_ref())?;
    fmt::write_results_csv(&reports, !args.no_timing, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run_bench(args: &BenchArgs) -> Result<(), Error> {
    let mut out = output(args.out.as_ref())?;
    writeln!(out, "policy,size,p,seed,wall_time_ms")?;
    for &size in &args.sizes {
        let ds = datagen::generate_polylines(args.shape.spec(size, args.seed))?;
        for &policy in &args.policy {
            let start = Instant::now();
            selection::select(&ds, policy, args.p, args.c, args.kernel, args.seed)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            eprintln!("{policy:>6} size={size:<8} {ms:.1} ms");
            writeln!(out, "{policy},{size},{},{},{ms:.3}", args.p, args.seed)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("{cli:#?}");
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Generate(g) => run_generate(g),
        Command::Select(a) => run_select(a),
        Command::Embed(a) => run_embed(a),
        Command::Evaluate(a) => run_evaluate(a),
        Command::Bench(a) => run_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
