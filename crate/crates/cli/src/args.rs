use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use gfs_core::subseq::DEFAULT_SCAN_CAP;
use gfs_core::{SequenceA, SystemId, WeightMode, Weighting};

use crate::inputs;
use crate::Outcome;

#[derive(Debug, Parser)]
#[command(
    name = "gfs",
    version,
    about = "Fourier coefficients and multiplier diagnostics for BV functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Coefficients C_1..C_N of a function.
    Coeffs(CoeffsArgs),
    /// Gram matrix of the first N elements.
    Gram(SizeArgs),
    /// n·sup|Φ_n| for n = 1..N.
    Decay(SizeArgs),
    /// G_n/T_n over a list of n.
    Ratio(RatioArgs),
    /// Running weighted log-sums S_n.
    Logsum(LogsumArgs),
    /// S_N and Cauchy gaps over a list of N.
    Converge(ConvergeArgs),
    /// Summation-by-parts decomposition of ∫ f·g.
    Lemma(LemmaArgs),
    /// The plateau function for (n, i).
    Plateau(PlateauArgs),
    /// Plateau lower bound at the argmax of G_n.
    Probe(ProbeArgs),
    /// Greedy subsequence with sup|Φ_{n_k}| < 1/k².
    Subseq(SubseqArgs),
    /// Σ_{n≤N} Φ_n(x)² for complete systems.
    Parseval(ParsevalArgs),
    /// U_n(f, b) = ∫ f P_n / T_n over a list of n.
    Un(UnArgs),
    /// Check h_n = O(√n / log(n+1)).
    Admissible(AdmissibleArgs),
}

impl Command {
    pub fn out(&self) -> Option<&PathBuf> {
        match self {
            Command::Coeffs(a) => a.out.as_ref(),
            Command::Gram(a) | Command::Decay(a) => a.out.as_ref(),
            Command::Ratio(a) => a.out.as_ref(),
            Command::Logsum(a) => a.out.as_ref(),
            Command::Converge(a) => a.out.as_ref(),
            Command::Lemma(a) => a.out.as_ref(),
            Command::Plateau(a) => a.out.as_ref(),
            Command::Probe(a) => a.out.as_ref(),
            Command::Subseq(a) => a.out.as_ref(),
            Command::Parseval(a) => a.out.as_ref(),
            Command::Un(a) => a.out.as_ref(),
            Command::Admissible(a) => a.out.as_ref(),
        }
    }
}

/// Multiplier `d` and log-weight convention.
#[derive(Debug, Args, Serialize)]
pub struct WeightArgs {
    /// `const:c`, `power:g`, `sqrtlog`, `table:v1,v2,...` or `table:@file`.
    #[arg(long, default_value = "const:1")]
    pub multiplier: String,
    /// `paper` (log₂k) or `shifted` (log₂(k+1)).
    #[arg(long, default_value = "paper")]
    pub weight_mode: WeightMode,
}

impl WeightArgs {
    pub fn weighting(&self) -> Outcome<Weighting> {
        Ok(Weighting::new(
            inputs::multiplier(&self.multiplier)?,
            self.weight_mode,
        ))
    }
}

/// The sequence `a` (or `b`).
#[derive(Debug, Args, Serialize)]
pub struct SequenceArgs {
    /// `random`, `unit:k`, `table:v1,v2,...` or `table:@file`.
    #[arg(long, default_value = "random")]
    pub sequence: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = gfs_core::sequence::DEFAULT_ALPHA)]
    pub alpha: f64,
}

impl SequenceArgs {
    pub fn build(&self, len: usize) -> Outcome<SequenceA> {
        inputs::sequence(&self.sequence, self.seed, self.alpha, len)
    }

    pub fn seed_if_random(&self) -> Option<u64> {
        (self.sequence == "random").then_some(self.seed)
    }
}

#[derive(Debug, Args, Serialize)]
pub struct CoeffsArgs {
    #[arg(long, default_value = "walsh")]
    pub system: SystemId,
    /// Catalog name, inline JSON, or `@file.json`.
    #[arg(long)]
    pub function: String,
    #[arg(long = "N", default_value_t = 64)]
    #[serde(rename = "N")]
    pub len: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SizeArgs {
    #[arg(long, default_value = "walsh")]
    pub system: SystemId,
    #[arg(long = "N", default_value_t = 64)]
    #[serde(rename = "N")]
    pub len: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RatioArgs {
    #[arg(long, default_value = "walsh")]
    pub system: SystemId,
    #[command(flatten)]
    #[serde(flatten)]
    pub weights: WeightArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub sequence: SequenceArgs,
    #[arg(long, value_delimiter = ',', default_value = "16,64,256,1024")]
    pub n_list: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct LogsumArgs {
    #[arg(long, default_value = "walsh")]
    pub system: SystemId,
    #[arg(long)]
    pub function: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub weights: WeightArgs,
    #[arg(long = "N", default_value_t = 1024)]
    #[serde(rename = "N")]
    pub len: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ConvergeArgs {
    #[arg(long, default_value = "walsh")]
    pub system: SystemId,
    #[arg(long)]
    pub function: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub weights: WeightArgs,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "64,128,256,512,1024,2048,4096"
    )]
    pub n_list: Vec<usize>,
    #[arg(long, default_value_t = 1024)]
    pub grid_size: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct LemmaArgs {
    /// Restrict to one system; all three by default.
    #[arg(long)]
    pub system: Option<SystemId>,
    /// Restrict to one function; the whole catalog by default.
    #[arg(long)]
    pub function: Option<String>,
    /// `phi:k` or `pn:m` (P_m with d ≡ 1, a = C(f)); default phi:1..phi:8 and pn:8.
    #[arg(long)]
    pub g: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "2,7,16,50")]
    pub n: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PlateauArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub i: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ProbeArgs {
    #[arg(long, default_value = "walsh")]
    pub system: SystemId,
    #[command(flatten)]
    #[serde(flatten)]
    pub weights: WeightArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub sequence: SequenceArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SubseqArgs {
    #[arg(long, default_value = "haar")]
    pub system: SystemId,
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub count: usize,
    #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
    pub cap: usize,
    /// Also report the remapped log-sum of this function.
    #[arg(long)]
    pub function: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub weights: WeightArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ParsevalArgs {
    #[arg(long, default_value = "haar+const")]
    pub system: SystemId,
    #[arg(long)]
    pub x: f64,
    #[arg(long = "N", default_value_t = 4096)]
    #[serde(rename = "N")]
    pub len: usize,
    /// Several prefix lengths; overrides `--N`.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct UnArgs {
    #[arg(long, default_value = "walsh")]
    pub system: SystemId,
    #[arg(long)]
    pub function: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub weights: WeightArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub sequence: SequenceArgs,
    #[arg(long, value_delimiter = ',', default_value = "16,64,256")]
    pub n_list: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct AdmissibleArgs {
    /// Same syntax as `--multiplier`.
    #[arg(long, default_value = "sqrtlog")]
    pub h: String,
    #[arg(long = "N", default_value_t = 4096)]
    #[serde(rename = "N")]
    pub len: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
