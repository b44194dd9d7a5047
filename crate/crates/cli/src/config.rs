//! Run configuration: one JSON document describing a batch run, the CLI
//! flags that override its fields, and the canonical hash that every
//! report row carries so output files can be traced back to their inputs.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// Which verification routine to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    /// Evaluate ln f and its first two logarithmic derivatives on a grid.
    Eval,
    /// Random sweep of the row/column-sum inequality.
    IneqCheck,
    /// Grid checks of complete monotonicity and the Bernstein property.
    CmCheck,
    /// Multi-start search for ratios below the conjectured floor of 2.
    Sharpness,
    /// Reconstruct the representing density of [ln f]″.
    Measure,
    /// Random sweep of the multinomial/beta identities and inequalities.
    CombiCheck,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommandKind::Eval => "eval",
            CommandKind::IneqCheck => "ineq-check",
            CommandKind::CmCheck => "cm-check",
            CommandKind::Sharpness => "sharpness",
            CommandKind::Measure => "measure",
            CommandKind::CombiCheck => "combi-check",
        })
    }
}

/// Evaluation grid: `points` geometrically spaced values in [t_min, t_max].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            t_min: 0.1,
            t_max: 100.0,
            points: 50,
        }
    }
}

/// Report encoding. Sweeps default to CSV, structured results to JSON;
/// either can be forced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

fn default_rho() -> f64 {
    2.0
}

fn default_samples() -> u64 {
    100
}

fn default_order() -> usize {
    6
}

/// The full description of a run. A config file is exactly this struct as
/// a JSON document; CLI flags override individual fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    /// Explicit matrix entries, row-major rows. Mutually exclusive with
    /// `dims`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    /// Shape (m, n) for random generation; entries are drawn log-uniformly
    /// from [1e-3, 1e3]. Mutually exclusive with `matrix`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<(usize, usize)>,
    #[serde(default = "default_rho")]
    pub rho: f64,
    /// Sample count for sweeps; start count for the sharpness search.
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
    /// Index of the first sample. Sample i derives its generator from
    /// (seed, stream = first_sample + i), so any single sample of a sweep
    /// replays bit-exactly via `first_sample = i, samples = 1`.
    #[serde(default)]
    pub first_sample: u64,
    #[serde(default)]
    pub grid: GridSpec,
    /// Highest derivative order for the grid checks.
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_format: Option<OutputFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    /// Free-form context; carried through untouched (violation files use
    /// it to say what failed).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RunConfig {
    /// A config with every optional field at its default.
    pub fn new(command: CommandKind) -> Self {
        RunConfig {
            command,
            matrix: None,
            dims: None,
            rho: default_rho(),
            samples: default_samples(),
            seed: 0,
            first_sample: 0,
            grid: GridSpec::default(),
            order: default_order(),
            output_format: None,
            output_path: None,
            note: None,
        }
    }

    /// Structural validation shared by every command.
    pub fn validate(&self) -> Result<(), String> {
        match (&self.matrix, &self.dims) {
            (Some(_), Some(_)) => {
                return Err("exactly one of `matrix` and `dims` may be given, not both".into())
            }
            (None, None) => {
                return Err("one of `matrix` (explicit entries) or `dims` (random shape) is required".into())
            }
            _ => {}
        }
        if let Some(rows) = &self.matrix {
            if rows.is_empty() || rows[0].is_empty() {
                return Err("`matrix` must have at least one row and one column".into());
            }
            let width = rows[0].len();
            if rows.iter().any(|r| r.len() != width) {
                return Err("`matrix` rows must all have the same length".into());
            }
            if rows.iter().flatten().any(|v| !(*v > 0.0) || !v.is_finite()) {
                return Err("`matrix` entries must be strictly positive and finite".into());
            }
        }
        if let Some((m, n)) = self.dims {
            if m == 0 || n == 0 {
                return Err("`dims` must both be at least 1".into());
            }
        }
        if !self.rho.is_finite() {
            return Err("`rho` must be finite".into());
        }
        if self.samples == 0 {
            return Err("`samples` must be at least 1".into());
        }
        let g = &self.grid;
        if !(g.t_min > 0.0) || !g.t_max.is_finite() || g.t_max <= g.t_min {
            return Err("grid bounds must satisfy 0 < t_min < t_max < inf".into());
        }
        if g.points < 2 {
            return Err("grid must have at least 2 points".into());
        }
        if self.order == 0 || self.order > 6 {
            return Err("`order` must be between 1 and 6".into());
        }
        Ok(())
    }

    /// The shape of the matrix this run works with.
    pub fn shape(&self) -> (usize, usize) {
        match (&self.matrix, &self.dims) {
            (Some(rows), _) => (rows.len(), rows[0].len()),
            (None, Some(dims)) => *dims,
            (None, None) => unreachable!("validate() enforces matrix xor dims"),
        }
    }

    /// Report format: explicit choice, else CSV for sweeps and JSON for
    /// structured results.
    pub fn effective_format(&self) -> OutputFormat {
        self.output_format.unwrap_or(match self.command {
            CommandKind::Eval
            | CommandKind::IneqCheck
            | CommandKind::Measure
            | CommandKind::CombiCheck => OutputFormat::Csv,
            CommandKind::CmCheck | CommandKind::Sharpness => OutputFormat::Json,
        })
    }

    /// FNV-1a hash of the fields that determine the data (output routing
    /// and notes excluded), folded over exact bit patterns so the hash is
    /// as reproducible as the run itself.
    pub fn config_hash(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut hash = OFFSET;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                hash ^= u64::from(b);
                hash = hash.wrapping_mul(PRIME);
            }
        };
        eat(self.command.to_string().as_bytes());
        if let Some(rows) = &self.matrix {
            eat(&(rows.len() as u64).to_le_bytes());
            eat(&(rows[0].len() as u64).to_le_bytes());
            for v in rows.iter().flatten() {
                eat(&v.to_bits().to_le_bytes());
            }
        }
        if let Some((m, n)) = self.dims {
            eat(&(m as u64).to_le_bytes());
            eat(&(n as u64).to_le_bytes());
        }
        eat(&self.rho.to_bits().to_le_bytes());
        eat(&self.samples.to_le_bytes());
        eat(&self.seed.to_le_bytes());
        eat(&self.first_sample.to_le_bytes());
        eat(&self.grid.t_min.to_bits().to_le_bytes());
        eat(&self.grid.t_max.to_bits().to_le_bytes());
        eat(&(self.grid.points as u64).to_le_bytes());
        eat(&(self.order as u64).to_le_bytes());
        hash
    }

    /// The hash as the fixed-width hex token report rows carry.
    pub fn hash_hex(&self) -> String {
        format!("{:016x}", self.config_hash())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> RunConfig {
        let mut cfg = RunConfig::new(CommandKind::Eval);
        cfg.dims = Some((2, 2));
        cfg
    }

    #[test]
    fn validation_enforces_matrix_xor_dims() {
        let mut cfg = base();
        assert!(cfg.validate().is_ok());
        cfg.matrix = Some(vec![vec![1.0, 2.0]]);
        assert!(cfg.validate().is_err());
        cfg.dims = None;
        assert!(cfg.validate().is_ok());
        cfg.matrix = None;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn validation_rejects_bad_fields() {
        let mut cfg = base();
        cfg.matrix = Some(vec![vec![1.0], vec![1.0, 2.0]]);
        cfg.dims = None;
        assert!(cfg.validate().is_err());
        let mut cfg = base();
        cfg.grid.t_min = -1.0;
        assert!(cfg.validate().is_err());
        let mut cfg = base();
        cfg.grid.points = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = base();
        cfg.order = 7;
        assert!(cfg.validate().is_err());
        let mut cfg = base();
        cfg.samples = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn hash_tracks_data_fields_only() {
        let a = base();
        let mut b = base();
        b.output_path = Some(PathBuf::from("elsewhere.csv"));
        b.note = Some("same data".into());
        assert_eq!(a.config_hash(), b.config_hash());
        let mut c = base();
        c.seed = 1;
        assert_ne!(a.config_hash(), c.config_hash());
        let mut d = base();
        d.rho = 1.5;
        assert_ne!(a.config_hash(), d.config_hash());
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut cfg = base();
        cfg.matrix = Some(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        cfg.dims = None;
        cfg.note = Some("round trip".into());
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn unknown_fields_are_rejected_with_context() {
        let err = serde_json::from_str::<RunConfig>(
            "{\"command\": \"eval\", \"dims\": [1, 2],\n \"surprise\": 1}",
        )
        .unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
