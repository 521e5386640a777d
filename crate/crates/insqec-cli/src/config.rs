//! Experiment configuration: JSON config file plus flag overrides.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::Deserialize;

use insqec::channel::InsertionQubit;
use insqec::states::{GnuCode, LogicalQubit};

use crate::CliError;

/// Grid used by `lemma` when no cells are configured.
pub const DEFAULT_GRID: [(u32, u32, u32); 7] = [
    (2, 2, 1),
    (3, 2, 1),
    (2, 3, 1),
    (2, 2, 2),
    (3, 3, 1),
    (2, 2, 3),
    (3, 2, 2),
];

#[derive(clap::Args, Debug, Default)]
pub struct RunArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// RNG seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of Monte Carlo shots.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Code gap g.
    #[arg(long)]
    pub g: Option<u32>,
    /// Code occupancy n.
    #[arg(long)]
    pub n: Option<u32>,
    /// Code scaling u.
    #[arg(long)]
    pub u: Option<u32>,
    /// Insertion position: an index or "random".
    #[arg(long)]
    pub a: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Deserialize, Debug, Default)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    g: Option<u32>,
    n: Option<u32>,
    u: Option<u32>,
    /// Payload amplitudes as [[re, im], [re, im]].
    payload: Option<[[f64; 2]; 2]>,
    /// Insertion amplitudes as [[re, im], [re, im]].
    insertion: Option<[[f64; 2]; 2]>,
    /// Index or the string "random".
    position: Option<serde_json::Value>,
    shots: Option<u64>,
    seed: Option<u64>,
    mode: Option<String>,
    /// (g, n, u) cells for lemma sweeps.
    grid: Option<Vec<[u32; 3]>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    At(u32),
    Random,
}

#[derive(Debug)]
pub struct ExperimentConfig {
    pub code: GnuCode,
    pub payload: LogicalQubit,
    pub insertion: InsertionQubit,
    pub position: Position,
    pub shots: u64,
    pub seed: u64,
    pub grid: Vec<(u32, u32, u32)>,
    pub warnings: Vec<String>,
    /// Raw amplitude pairs for echoing into reports.
    pub payload_raw: [[f64; 2]; 2],
    pub insertion_raw: [[f64; 2]; 2],
}

fn unit_pair(
    raw: [[f64; 2]; 2],
    what: &str,
    warnings: &mut Vec<String>,
) -> Result<[Complex64; 2], CliError> {
    let mut v = [
        Complex64::new(raw[0][0], raw[0][1]),
        Complex64::new(raw[1][0], raw[1][1]),
    ];
    if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(CliError::Usage(format!("{what} amplitudes must be finite")));
    }
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if (norm - 1.0).abs() >= 1e-6 {
        return Err(CliError::Usage(format!(
            "{what} norm is {norm}; must be within 1e-6 of 1"
        )));
    }
    if norm != 1.0 {
        warnings.push(format!("renormalized {what} (norm was {norm})"));
        v[0] /= norm;
        v[1] /= norm;
    }
    Ok(v)
}

fn parse_position(raw: &serde_json::Value) -> Result<Position, CliError> {
    match raw {
        serde_json::Value::String(s) if s == "random" => Ok(Position::Random),
        serde_json::Value::Number(n) => n
            .as_u64()
            .map(|v| Position::At(v as u32))
            .ok_or_else(|| CliError::Usage(format!("invalid position {n}"))),
        other => Err(CliError::Usage(format!(
            "position must be an index or \"random\", got {other}"
        ))),
    }
}

pub fn resolve(args: &RunArgs, subcommand: &str) -> Result<ExperimentConfig, CliError> {
    let mut file = FileConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        file = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
    }
    let mut warnings = Vec::new();
    if let Some(mode) = &file.mode {
        if mode != subcommand {
            warnings.push(format!(
                "config mode \"{mode}\" ignored; running \"{subcommand}\""
            ));
        }
    }

    let g = args.g.or(file.g).unwrap_or(2);
    let n = args.n.or(file.n).unwrap_or(2);
    let u = args.u.or(file.u).unwrap_or(1);
    let code = GnuCode::new(g, n, u).map_err(|e| CliError::Usage(e.to_string()))?;

    let payload_raw = file.payload.unwrap_or([
        [std::f64::consts::FRAC_1_SQRT_2, 0.0],
        [std::f64::consts::FRAC_1_SQRT_2, 0.0],
    ]);
    let insertion_raw = file.insertion.unwrap_or([
        [std::f64::consts::FRAC_1_SQRT_2, 0.0],
        [std::f64::consts::FRAC_1_SQRT_2, 0.0],
    ]);
    let p = unit_pair(payload_raw, "payload", &mut warnings)?;
    let v = unit_pair(insertion_raw, "insertion", &mut warnings)?;
    let payload = LogicalQubit::new(p[0], p[1]).map_err(|e| CliError::Usage(e.to_string()))?;
    let insertion = InsertionQubit::new(v[0], v[1]).map_err(|e| CliError::Usage(e.to_string()))?;

    let position = match (&args.a, &file.position) {
        (Some(s), _) => {
            if s == "random" {
                Position::Random
            } else {
                Position::At(
                    s.parse::<u32>()
                        .map_err(|_| CliError::Usage(format!("invalid --a value {s:?}")))?,
                )
            }
        }
        (None, Some(raw)) => parse_position(raw)?,
        (None, None) => Position::Random,
    };
    if let Position::At(a) = position {
        if a > code.qubit_count() {
            return Err(CliError::Usage(format!(
                "position {a} exceeds N = {}",
                code.qubit_count()
            )));
        }
    }

    let grid = if let Some(cells) = &file.grid {
        cells.iter().map(|c| (c[0], c[1], c[2])).collect()
    } else if args.g.is_some() && args.n.is_some() {
        vec![(g, n, u)]
    } else {
        DEFAULT_GRID.to_vec()
    };

    Ok(ExperimentConfig {
        code,
        payload,
        insertion,
        position,
        shots: args.shots.or(file.shots).unwrap_or(10_000),
        seed: args.seed.or(file.seed).unwrap_or(0),
        grid,
        warnings,
        payload_raw,
        insertion_raw,
    })
}
