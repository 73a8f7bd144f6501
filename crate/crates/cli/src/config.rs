//! JSON run configuration: schema, defaults, and validation into
//! library types.
//!
//! Anchors are given either as angles in degrees (canonical) or as
//! re/im pairs; pairs are normalized onto the unit circle when their
//! modulus is within 1e-12 of 1 and rejected otherwise. Unknown keys
//! are schema errors.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use exflat::{Cx, GridSpec, PoissonSpectrum, Spectrum64, Tolerances};
use serde::Deserialize;

use crate::error::{variant_name, CliError, CliResult};

/// Artifact formats a command may emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Validated run configuration shared by every command.
pub struct RunConfig {
    pub spectrum: Spectrum64,
    /// Export grid; the verification grid reuses its density but not
    /// its radius.
    pub grid: GridSpec<f64>,
    pub tolerances: Tolerances<f64>,
    pub out_dir: PathBuf,
    pub formats: BTreeSet<Format>,
    /// Reserved for randomized sampling; recorded in artifacts so that
    /// reruns are attributable.
    pub seed: u64,
}

impl RunConfig {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    spectrum: SpectrumDoc,
    #[serde(default)]
    grid: GridDoc,
    #[serde(default)]
    tolerances: TolerancesDoc,
    #[serde(default)]
    outputs: OutputsDoc,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumDoc {
    #[serde(default)]
    anchors_deg: Option<Vec<f64>>,
    #[serde(default)]
    anchors: Option<Vec<[f64; 2]>>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct GridDoc {
    radial: usize,
    angular: usize,
    rmax: f64,
}

impl Default for GridDoc {
    fn default() -> Self {
        GridDoc {
            radial: 16,
            angular: 32,
            rmax: 0.9,
        }
    }
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct TolerancesDoc {
    unimodularity: Option<f64>,
    positivity_margin: Option<f64>,
    nonvanishing_floor: Option<f64>,
    fd_step: Option<f64>,
    neumann_rel: Option<f64>,
    quadrature: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct OutputsDoc {
    dir: String,
    formats: Vec<String>,
}

impl Default for OutputsDoc {
    fn default() -> Self {
        OutputsDoc {
            dir: "out".to_string(),
            formats: vec!["csv".to_string(), "json".to_string()],
        }
    }
}

fn schema(msg: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("schema error: {msg}"))
}

/// Reads, parses, and validates a configuration file. `out` and `seed`
/// from the command line override the configured values.
pub fn load(path: &Path, out: Option<PathBuf>, seed: Option<u64>) -> CliResult<RunConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let doc: ConfigDoc = serde_json::from_str(&text).map_err(schema)?;

    let anchors: Vec<Cx> = match (&doc.spectrum.anchors_deg, &doc.spectrum.anchors) {
        (Some(_), Some(_)) => {
            return Err(schema(
                "spectrum.anchors_deg and spectrum.anchors are mutually exclusive",
            ))
        }
        (None, None) => {
            return Err(schema(
                "spectrum needs anchors_deg (degrees) or anchors (re/im pairs)",
            ))
        }
        (Some(deg), None) => deg
            .iter()
            .map(|d| Cx::from_polar(1.0, d.to_radians()))
            .collect(),
        (None, Some(pairs)) => pairs.iter().map(|p| Cx::new(p[0], p[1])).collect(),
    };
    let spectrum = PoissonSpectrum::new(anchors, doc.spectrum.weights.clone())
        .map_err(|e| schema(format_args!("spectrum ({}): {e}", variant_name(&e))))?;

    if doc.grid.radial < 2 {
        return Err(schema("grid.radial must be an integer >= 2"));
    }
    if doc.grid.angular < 2 {
        return Err(schema("grid.angular must be an integer >= 2"));
    }
    if !(doc.grid.rmax > 0.0 && doc.grid.rmax < 1.0) {
        return Err(schema(format_args!(
            "grid.rmax must be a number strictly between 0 and 1, got {}",
            doc.grid.rmax
        )));
    }

    let t = &doc.tolerances;
    for (key, value) in [
        ("tolerances.unimodularity", t.unimodularity),
        ("tolerances.nonvanishing_floor", t.nonvanishing_floor),
        ("tolerances.fd_step", t.fd_step),
        ("tolerances.neumann_rel", t.neumann_rel),
        ("tolerances.quadrature", t.quadrature),
    ] {
        if let Some(x) = value {
            if !(x > 0.0) {
                return Err(schema(format_args!("{key} must be a positive number")));
            }
        }
    }
    let base = Tolerances::default();
    let tolerances = Tolerances {
        unimodularity: t.unimodularity.unwrap_or(base.unimodularity),
        positivity_margin: t.positivity_margin.unwrap_or(base.positivity_margin),
        nonvanishing_floor: t.nonvanishing_floor.unwrap_or(base.nonvanishing_floor),
        fd_step: t.fd_step.unwrap_or(base.fd_step),
        neumann_rel: t.neumann_rel.unwrap_or(base.neumann_rel),
        quadrature: t.quadrature.unwrap_or(base.quadrature),
    };

    let mut formats = BTreeSet::new();
    for f in &doc.outputs.formats {
        formats.insert(match f.as_str() {
            "csv" => Format::Csv,
            "json" => Format::Json,
            "svg" => Format::Svg,
            other => {
                return Err(schema(format_args!(
                    "outputs.formats entries must be \"csv\", \"json\", or \"svg\", got \"{other}\""
                )))
            }
        });
    }

    Ok(RunConfig {
        spectrum,
        grid: GridSpec {
            radial: doc.grid.radial,
            angular: doc.grid.angular,
            rmax: doc.grid.rmax,
        },
        tolerances,
        out_dir: out.unwrap_or_else(|| PathBuf::from(doc.outputs.dir.clone())),
        formats,
        seed: seed.or(doc.seed).unwrap_or(0),
    })
}
