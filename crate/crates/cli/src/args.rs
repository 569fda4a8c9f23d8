//! Flag groups. Every field is optional so a JSON config file can fill in
//! whatever the command line leaves unset.

use crate::error::{input, CliResult};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{Map, Value};
use std::path::{Path, PathBuf};

/// Declares a flag group: every field becomes `--kebab-name` and is also
/// read from the snake_case key of the config file.
macro_rules! flag_group {
    ($(#[$m:meta])* $name:ident { $($(#[$fm:meta])* $field:ident : $ty:ty),* $(,)? }) => {
        #[derive(clap::Args, Deserialize, Clone, Debug, Default)]
        $(#[$m])*
        #[serde(default)]
        pub struct $name {
            $($(#[$fm])* #[arg(long)] pub $field: Option<$ty>,)*
        }

        impl $name {
            pub const KEYS: &'static [&'static str] = &[$(stringify!($field)),*];

            /// Flags first, then the file.
            pub fn or(self, file: Self) -> Self {
                $name { $($field: self.$field.or(file.$field),)* }
            }
        }
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
pub enum PriorKind {
    #[serde(rename = "r2d2")]
    R2d2,
    #[serde(rename = "dl")]
    Dl,
    #[serde(rename = "hs")]
    Hs,
    #[value(name = "hs+")]
    #[serde(rename = "hs+")]
    HsPlus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GlobalKind {
    HalfCauchy,
    Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    Linear,
    Log,
}

flag_group!(
    #[command(next_help_heading = "Prior")]
    PriorArgs {
        /// Prior family.
        prior: PriorKind,
        /// R2-D2 Beta shape a of R^2 (must equal p * a_pi).
        a: f64,
        /// R2-D2 Beta shape b of R^2.
        b: f64,
        /// R2-D2 Dirichlet concentration.
        a_pi: f64,
        /// Dirichlet-Laplace concentration.
        a_d: f64,
        /// Horseshoe / Horseshoe+ global scale.
        tau: f64,
        /// Global scale treatment for the Horseshoe variants.
        global: GlobalKind,
    }
);

flag_group!(
    #[command(next_help_heading = "MCMC")]
    McmcArgs {
        /// Total sweeps, burn-in included (default 2000).
        iters: usize,
        /// Sweeps discarded before draws are kept.
        burnin: usize,
        /// Keep every thin-th sweep after burn-in.
        thin: usize,
        /// Inverse-gamma shape of the sigma^2 prior.
        a1: f64,
        /// Inverse-gamma scale of the sigma^2 prior.
        b1: f64,
        /// Base seed of every random stream.
        seed: u64,
    }
);

flag_group!(
    #[command(next_help_heading = "Input/output")]
    IoArgs {
        /// Design matrix CSV (header optional).
        in_x: PathBuf,
        /// Response CSV, one column (header optional).
        in_y: PathBuf,
        /// Output directory.
        out: PathBuf,
    }
);

flag_group!(
    #[command(next_help_heading = "Simulation")]
    SimArgs {
        /// Coefficient setup, 1 or 2.
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        setup: u8,
        /// Rows per simulated data set (default 60).
        n: usize,
        /// Predictors per simulated data set (default 50).
        p: usize,
        /// AR(1) correlation of the predictors.
        rho: f64,
        /// Replicated data sets (default 50).
        reps: usize,
    }
);

flag_group!(
    #[command(next_help_heading = "Splits")]
    SplitArgs {
        /// Number of random train/test splits (default 20).
        splits: usize,
        /// Rows held out per split (default 5).
        test_size: usize,
        /// Columns kept by marginal-correlation screening (all if unset).
        screen_k: usize,
        /// Comma-separated 0-based columns always kept.
        #[arg(value_delimiter = ',')]
        keep: Vec<usize>,
        /// Permute the response once before splitting (null control).
        #[arg(num_args = 0..=1, default_missing_value = "true")]
        permute: bool,
        /// Also fit every prior to all rows and write agreement curves.
        #[arg(num_args = 0..=1, default_missing_value = "true")]
        agreement: bool,
    }
);

flag_group!(
    #[command(next_help_heading = "Grid")]
    GridArgs {
        /// Smallest beta on the grid (default 0.01).
        grid_lo: f64,
        /// Largest beta on the grid (default 5).
        grid_hi: f64,
        /// Grid size (default 500).
        points: usize,
        /// Grid spacing (default linear).
        grid: GridKind,
    }
);

flag_group!(
    #[command(next_help_heading = "Diagnostics")]
    DiagArgs {
        /// Draws CSV written by `fit`.
        draws: PathBuf,
        /// Largest autocorrelation lag (default 50).
        max_lag: usize,
    }
);

#[derive(Parser, Debug)]
#[command(name = "shrinkage", version, about = "Shrinkage-prior Bayesian linear regression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one Gibbs chain on a data set.
    Fit {
        #[command(flatten)]
        prior: PriorArgs,
        #[command(flatten)]
        mcmc: McmcArgs,
        #[command(flatten)]
        io: IoArgs,
        /// JSON file of flag values (snake_case keys); flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Replicated simulation study over the comparison priors.
    Simulate {
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        prior: PriorArgs,
        #[command(flatten)]
        mcmc: McmcArgs,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON file of flag values (snake_case keys); flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Marginal prior density on a grid.
    Density {
        #[command(flatten)]
        prior: PriorArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON file of flag values (snake_case keys); flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Rank columns by absolute marginal correlation with the response.
    Screen {
        #[command(flatten)]
        io: IoArgs,
        /// Number of columns to keep.
        #[arg(long)]
        k: Option<usize>,
        /// JSON file of flag values (snake_case keys); flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Prediction error over random train/test splits.
    Predict {
        #[command(flatten)]
        split: SplitArgs,
        #[command(flatten)]
        prior: PriorArgs,
        #[command(flatten)]
        mcmc: McmcArgs,
        #[command(flatten)]
        io: IoArgs,
        /// JSON file of flag values (snake_case keys); flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Autocorrelation and effective sample size of saved draws.
    Diagnose {
        #[command(flatten)]
        diag: DiagArgs,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON file of flag values (snake_case keys); flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Flat JSON object holding any of the flag names in snake_case.
#[derive(Debug, Default)]
pub struct ConfigFile(Map<String, Value>);

const EXTRA_KEYS: &[&str] = &["out", "k"];

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| input(format!("cannot read config file {}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| input(format!("config file {}: {e}", path.display())))?;
        let Value::Object(map) = value else {
            return Err(input(format!("config file {} must hold a JSON object", path.display())));
        };
        let known = [
            PriorArgs::KEYS,
            McmcArgs::KEYS,
            IoArgs::KEYS,
            SimArgs::KEYS,
            SplitArgs::KEYS,
            GridArgs::KEYS,
            DiagArgs::KEYS,
            EXTRA_KEYS,
        ]
        .concat();
        if let Some(k) = map.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(input(format!("config file {}: unknown key `{k}`", path.display())));
        }
        Ok(ConfigFile(map))
    }

    /// The file's view of one flag group; keys of other groups are ignored.
    pub fn group<T: for<'de> Deserialize<'de> + Default>(&self) -> CliResult<T> {
        serde_json::from_value(Value::Object(self.0.clone())).map_err(|e| input(format!("config file: {e}")))
    }

    pub fn get<T: for<'de> Deserialize<'de>>(&self, key: &str) -> CliResult<Option<T>> {
        self.0
            .get(key)
            .map(|v| serde_json::from_value(v.clone()).map_err(|e| input(format!("config file key `{key}`: {e}"))))
            .transpose()
    }
}
