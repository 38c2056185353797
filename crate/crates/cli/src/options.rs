use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use manifold_uncertainty::rng::DEFAULT_SEED;
use manifold_uncertainty::uncertainty::LOW_SAMPLING;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inequality {
    Lca,
    Bourgain,
    Prop,
    Homogeneous,
    Supnorm,
    Covering,
    Joint,
    RandomManifold,
}

/// How the test function `f` is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionKind {
    /// Top concentration eigenvector of the spectrum on the region.
    Slepian,
    /// Gaussian coefficients on the spectrum, plus `--leak` outside it.
    Random,
    Constant,
    /// Indicator of the region.
    Indicator,
}

/// Commands a batch entry may run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BatchCommand {
    Check,
    DonohoStark,
}

/// Options shared by every subcommand and by `[[run]]` entries of a batch file.
#[derive(Args, Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunOptions {
    /// Batch files only: which command this entry runs.
    #[arg(skip)]
    pub command: Option<BatchCommand>,

    /// Space descriptor, e.g. `torus:d=2`, `sphere2`, `zn:N=16,d=1`.
    #[arg(long, default_value_t = RunOptions::default().space)]
    pub space: String,
    /// Region descriptor, e.g. `arc:0:pi`, `cap:1.2`, `set:{0,4,8}`.
    #[arg(long, default_value_t = RunOptions::default().region)]
    pub region: String,
    /// Spectral descriptor, e.g. `ball:5`, `level:ℓ=3`, `list:[1,2]`, `joint:[(1),(-1)]`.
    #[arg(long)]
    pub spectrum: Option<String>,
    /// Largest frequency kept in the discretization (default: top of the spectrum + 1).
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// Frequency for `weyl` and `homogeneity`.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Minimum quadrature points per axis.
    #[arg(long)]
    pub quadrature_points: Option<usize>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Random restarts for `lambda-q`.
    #[arg(long, default_value_t = RunOptions::default().trials)]
    pub trials: usize,
    #[arg(long, default_value_t = RunOptions::default().seed)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub inequality: Option<Inequality>,
    #[arg(long, value_enum)]
    pub function: Option<FunctionKind>,
    /// Relative size of the part of a random `f` outside the spectrum.
    #[arg(long, default_value_t = RunOptions::default().leak)]
    pub leak: f64,
    /// Upper bound for the q-orthogonality constant (default: interpolation bound).
    #[arg(long)]
    pub c_upper: Option<f64>,
    /// Local Weyl window constant (default: sampled estimate).
    #[arg(long)]
    pub c_m: Option<f64>,
    /// Random points for sampled suprema.
    #[arg(long, default_value_t = RunOptions::default().x_samples)]
    pub x_samples: usize,
    /// Size of the system split by `gmpt` and `random-manifold`.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = RunOptions::default().c_param)]
    pub c_param: f64,
    #[arg(long, default_value_t = RunOptions::default().subsets)]
    pub subsets: usize,
    #[arg(long, default_value_t = RunOptions::default().coefficient_trials)]
    pub coefficient_trials: usize,
    /// Random points for `weyl` and `homogeneity`.
    #[arg(long, default_value_t = RunOptions::default().points)]
    pub points: usize,
    /// Concentration eigenvectors listed by `concentrate`.
    #[arg(long, default_value_t = RunOptions::default().top)]
    pub top: usize,
    /// Write the Gram matrix of `concentrate` as JSON.
    #[arg(long)]
    pub export_matrix: Option<PathBuf>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            command: None,
            space: "torus:d=1".into(),
            region: "full".into(),
            spectrum: None,
            cutoff: None,
            lambda: None,
            quadrature_points: None,
            q: None,
            trials: 20,
            seed: DEFAULT_SEED,
            inequality: None,
            function: None,
            leak: 0.0,
            c_upper: None,
            c_m: None,
            x_samples: LOW_SAMPLING,
            n: None,
            c_param: 1.0,
            subsets: 64,
            coefficient_trials: 16,
            points: 16,
            top: 4,
            export_matrix: None,
        }
    }
}
