use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use susyrad::quantum_numbers::pair_ell;
use susyrad::radial::{make_grid, RadialGrid};
use susyrad::spectral::PairingOptions;
use susyrad::superpotential::parse_spec;
use susyrad::{HalfInt, Sign, SuperpotentialSpec, System};

use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "susyrad", version, about = "SUSY partner spectra of spherically symmetric Pauli Hamiltonians")]
pub struct Cli {
    /// Plain `key=value` file; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Mass convention used when no mass is given.
    #[arg(long, global = true, value_enum, default_value_t = Units::M1)]
    pub units: Units,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Units {
    /// m = 1.
    #[value(name = "m1")]
    M1,
    /// 2m = 1.
    #[value(name = "2m1")]
    TwoM1,
}

impl Units {
    pub fn mass(self) -> f64 {
        match self {
            Units::M1 => 1.0,
            Units::TwoM1 => 0.5,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lowest eigenvalues of both partners, with closed forms when known.
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// The four partner potentials on an r range.
    #[command(allow_negative_numbers = true)]
    Potential(PotentialArgs),
    /// Normalized zero-mode density, closed form against the grid vector.
    #[command(name = "zero-mode", allow_negative_numbers = true)]
    ZeroMode(ZeroModeArgs),
    /// Parameter chain, remainders and shape-invariance residuals.
    #[command(name = "shape-invariance", allow_negative_numbers = true)]
    ShapeInvariance(ShapeArgs),
    /// Runs the verification suites and reports every residual.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Spinor-harmonic orthonormality and the σ·e_r flip.
    #[command(name = "spinor-check")]
    SpinorCheck(SpinorArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct SpecArgs {
    /// Superpotential as tokens, e.g. "family=power-law gamma=1 a=2".
    #[arg(long)]
    pub spec: Option<String>,
    /// power-law, quadratic, linear, logarithmic or tabulated.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Overrides the --units preset.
    #[arg(long)]
    pub mass: Option<f64>,
}

impl SpecArgs {
    pub fn is_empty(&self) -> bool {
        self.spec.is_none() && self.family.is_none()
    }

    pub fn resolve(&self, units: Units) -> CliResult<SuperpotentialSpec> {
        let mut tokens: Vec<String> = self.spec.iter().cloned().collect();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                tokens.push(format!("{k}={v}"));
            }
        };
        push("family", self.family.clone());
        push("gamma", self.gamma.map(|v| v.to_string()));
        push("a", self.a.map(|v| v.to_string()));
        push("omega", self.omega.map(|v| v.to_string()));
        push("mass", self.mass.map(|v| v.to_string()));
        if tokens.is_empty() {
            return Err(CliError::Config("no superpotential given; use --family or --spec".into()));
        }
        Ok(parse_spec(&tokens.join(" "), units.mass())?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Interior grid points.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    /// Box radius, or `auto` for the analytic families.
    #[arg(long, default_value = "auto")]
    pub r_max: String,
}

impl GridArgs {
    pub fn resolve(&self, spec: &SuperpotentialSpec, ell: u32, levels: usize) -> CliResult<RadialGrid> {
        let r_max = if self.r_max == "auto" {
            spec.auto_r_max(ell, levels)?
        } else {
            self.r_max.parse::<f64>().map_err(|_| {
                CliError::Config(format!("cannot parse `--r-max {}`: expected a number or auto", self.r_max))
            })?
        };
        Ok(make_grid(r_max, self.n)?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct ChannelArgs {
    /// Pair labels ℓ ≥ 1, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ell: Vec<u32>,
    /// Total angular momenta (ℓ = j + 1/2), e.g. 1/2,3/2.
    #[arg(long, value_delimiter = ',')]
    pub j: Vec<HalfInt>,
    /// 1 (σ = +1) or 2 (σ = -1), comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub system: Vec<u8>,
}

impl ChannelArgs {
    pub fn ells(&self, default: u32) -> CliResult<Vec<u32>> {
        let mut out = self.ell.clone();
        for j in &self.j {
            out.push(pair_ell(*j)?);
        }
        if out.is_empty() {
            out.push(default);
        }
        Ok(out)
    }

    pub fn systems(&self) -> CliResult<Vec<System>> {
        self.system.iter().map(|s| System::from_number(*s).map_err(CliError::from)).collect()
    }
}

#[derive(Args, Debug, Clone)]
pub struct TolArgs {
    /// Relative pairing tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol_pair: f64,
    /// Zero-energy threshold; default max(10·λmin(H₋)·h², 1e-9).
    #[arg(long)]
    pub tol_zero: Option<f64>,
    /// Edge weight above which a zero-energy vector is a wall state.
    #[arg(long, default_value_t = 1e-3)]
    pub tol_boundary: f64,
    /// Supercharge algebra residuals relative to ‖H‖.
    #[arg(long, default_value_t = 1e-12)]
    pub tol_algebra: f64,
}

impl TolArgs {
    pub fn pairing(&self) -> PairingOptions {
        PairingOptions {
            tol_zero: self.tol_zero,
            pair_tol: self.tol_pair,
            boundary_tol: self.tol_boundary,
            algebra: true,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus")]
    Minus,
}

impl From<BranchArg> for Sign {
    fn from(b: BranchArg) -> Sign {
        match b {
            BranchArg::Plus => Sign::Plus,
            BranchArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Restrict the table to one partner.
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// Lowest eigenvalues listed per partner.
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    #[command(flatten)]
    pub tol: TolArgs,
    /// Fail when a level is farther than this from its closed form.
    #[arg(long)]
    pub tol_analytic: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 1)]
    pub ell: u32,
    #[arg(long, default_value_t = 0.05)]
    pub r_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Explicit radii, comma separated; replaces the range.
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct ZeroModeArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1)]
    pub ell: u32,
    #[arg(long, default_value_t = 1)]
    pub system: u8,
    /// Tolerance on ∫ |ψ|² r² dr = 1 for the closed form.
    #[arg(long, default_value_t = 1e-6)]
    pub tol_norm: f64,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ShapeArgs {
    #[arg(long, default_value_t = 1)]
    pub ell0: u32,
    /// γ₀ as a decimal or an exact fraction p/q.
    #[arg(long, default_value = "1")]
    pub gamma0: String,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    /// Log-spaced sample radii in [r-lo, r-hi].
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub r_lo: f64,
    #[arg(long, default_value_t = 1e2)]
    pub r_hi: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Relative tolerance of the chain spectrum against the closed form.
    #[arg(long, default_value_t = 1e-13)]
    pub tol_spectrum: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Algebra,
    Spectrum,
    ZeroModes,
    ShapeInvariance,
    Bessel,
    Spinor,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub suite: Vec<Suite>,
    /// Defaults to the oscillator ω = 1.
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub ell: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub system: Vec<u8>,
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub tol_analytic: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol_kernel: f64,
    #[arg(long, default_value_t = 1)]
    pub ell0: u32,
    #[arg(long, default_value = "1")]
    pub gamma0: String,
    #[arg(long, default_value_t = 1e-12)]
    pub tol_shape: f64,
    #[arg(long, default_value_t = 10)]
    pub lmax: u32,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_bessel: f64,
    #[arg(long, default_value = "7/2")]
    pub jmax: HalfInt,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_ortho: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol_flip: f64,
}

#[derive(Args, Debug, Clone)]
pub struct SpinorArgs {
    #[arg(long, default_value = "7/2")]
    pub jmax: HalfInt,
    /// Sample count per angle for the flip identity.
    #[arg(long, default_value_t = 41)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_ortho: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol_flip: f64,
}
