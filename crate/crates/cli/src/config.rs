//! Run configuration: defaults, then the `--config` file, then flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::{Deserialize, Serialize};

use semijulia_core::semigroup::{SemigroupSpec, DEFAULT_COMPARE_SAMPLES, DEFAULT_COMPARE_TOLERANCE};
use semijulia_core::{parse_poly, Polynomial};

use crate::error::{CliError, CliResult};

pub const DEFAULT_DEPTH: usize = 16;
pub const DEFAULT_BUDGET: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_GRID_CELLS: usize = 2048;
pub const DEFAULT_SIDE: u32 = 512;

/// Rectangle `[re0, re1] x [im0, im1]` of the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Window {
    pub re0: f64,
    pub im0: f64,
    pub re1: f64,
    pub im1: f64,
}

impl Window {
    pub fn new(re0: f64, im0: f64, re1: f64, im1: f64) -> Result<Self, String> {
        if ![re0, im0, re1, im1].iter().all(|v| v.is_finite()) || re1 <= re0 || im1 <= im0 {
            return Err(format!("window {re0},{im0},{re1},{im1} needs re0 < re1 and im0 < im1"));
        }
        Ok(Window { re0, im0, re1, im1 })
    }
}

impl Default for Window {
    fn default() -> Self {
        Window {
            re0: -3.5,
            im0: -3.5,
            re1: 3.5,
            im1: 3.5,
        }
    }
}

impl TryFrom<[f64; 4]> for Window {
    type Error = String;

    fn try_from(v: [f64; 4]) -> Result<Self, String> {
        Window::new(v[0], v[1], v[2], v[3])
    }
}

impl From<Window> for [f64; 4] {
    fn from(w: Window) -> Self {
        [w.re0, w.im0, w.re1, w.im1]
    }
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("window component {p:?}: {e}")))
            .collect::<Result<_, _>>()?;
        let parts: [f64; 4] = parts
            .try_into()
            .map_err(|_| "window needs four values re0,im0,re1,im1".to_string())?;
        parts.try_into()
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.re0, self.im0, self.re1, self.im1)
    }
}

/// Flags shared by the cloud, coverage, compare and render commands.
#[derive(Args, Clone, Debug, Default)]
pub struct RunArgs {
    /// Generator polynomial in z, e.g. "z^2/3" (repeatable).
    #[arg(long = "gen", value_name = "EXPR", allow_hyphen_values = true)]
    pub generators: Vec<String>,
    /// Word length (default 16).
    #[arg(long)]
    pub depth: Option<usize>,
    /// Points kept per round (default 1000000).
    #[arg(long)]
    pub budget: Option<usize>,
    /// Base seed of every random stream (default 42).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cells of the equal-area sphere grid (default 2048).
    #[arg(long = "grid")]
    pub grid_cells: Option<usize>,
    /// Green's-function threshold of the comparator (default 1e-3).
    #[arg(long = "tol")]
    pub tolerance: Option<f64>,
    /// Points per Julia cloud in the comparator (default 10000).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a PPM picture of the cloud here.
    #[arg(long)]
    pub image: Option<PathBuf>,
    #[arg(long)]
    pub width: Option<u32>,
    #[arg(long)]
    pub height: Option<u32>,
    /// Plotted rectangle as re0,im0,re1,im1 (default -3.5,-3.5,3.5,3.5).
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<Window>,
    /// JSON file with any of the fields above; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub generators: Option<Vec<String>>,
    pub depth: Option<usize>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
    pub grid_cells: Option<usize>,
    pub tolerance: Option<f64>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub image: Option<PathBuf>,
    pub width: Option<u32>,
    pub height: Option<u32>,
    pub window: Option<Window>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| CliError::Config {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Fully resolved configuration, echoed in every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub generators: Vec<String>,
    pub depth: usize,
    pub budget: usize,
    pub seed: u64,
    pub grid_cells: usize,
    pub tolerance: f64,
    pub samples: usize,
    pub out: Option<PathBuf>,
    pub image: Option<PathBuf>,
    pub width: u32,
    pub height: u32,
    pub window: Window,
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let generators = if args.generators.is_empty() {
            file.generators.unwrap_or_default()
        } else {
            args.generators.clone()
        };
        let config = RunConfig {
            generators,
            depth: args.depth.or(file.depth).unwrap_or(DEFAULT_DEPTH),
            budget: args.budget.or(file.budget).unwrap_or(DEFAULT_BUDGET),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            grid_cells: args.grid_cells.or(file.grid_cells).unwrap_or(DEFAULT_GRID_CELLS),
            tolerance: args.tolerance.or(file.tolerance).unwrap_or(DEFAULT_COMPARE_TOLERANCE),
            samples: args.samples.or(file.samples).unwrap_or(DEFAULT_COMPARE_SAMPLES),
            out: args.out.clone().or(file.out),
            image: args.image.clone().or(file.image),
            width: args.width.or(file.width).unwrap_or(DEFAULT_SIDE),
            height: args.height.or(file.height).unwrap_or(DEFAULT_SIDE),
            window: args.window.or(file.window).unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> CliResult<()> {
        let positive = [
            ("budget", self.budget),
            ("grid", self.grid_cells),
            ("samples", self.samples),
            ("width", self.width as usize),
            ("height", self.height as usize),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(CliError::Usage(format!("--{name} must be positive")));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::Usage("--tol must be a positive number".into()));
        }
        Ok(())
    }

    pub fn polynomials(&self) -> CliResult<Vec<Polynomial>> {
        if self.generators.is_empty() {
            return Err(CliError::Usage("at least one --gen is required".into()));
        }
        self.generators
            .iter()
            .enumerate()
            .map(|(index, text)| {
                let p = parse_poly(text).and_then(|p| p.require_generator().map(|_| p));
                p.map_err(|source| CliError::Generator {
                    index,
                    text: text.clone(),
                    source,
                })
            })
            .collect()
    }

    pub fn semigroup(&self) -> CliResult<SemigroupSpec> {
        Ok(SemigroupSpec::new(self.polynomials()?)?)
    }

    pub fn require_generator_count(&self, check: impl Fn(usize) -> bool, expected: &str) -> CliResult<()> {
        if check(self.generators.len()) {
            Ok(())
        } else {
            Err(CliError::Usage(format!(
                "this command needs {expected} --gen, got {}",
                self.generators.len()
            )))
        }
    }
}
