//! Artifact serialization: fixed-precision CSV, JSON reports, and SVG
//! polyline sketches.
//!
//! Every floating-point value in a CSV file is printed with 17
//! significant digits so the artifact round-trips the underlying f64
//! exactly; all writers are deterministic, so identical runs produce
//! byte-identical files.

use std::fs;
use std::path::Path;

use exflat::{Cx, EndReport, FieldGrid, GridSpec, SimilarityTransform, VerificationReport};
use serde::Serialize;

use crate::error::{io_invalid, CliError, CliResult};

/// 17 significant digits: enough to reconstruct the f64 bit pattern.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir)
        .map_err(|e| io_invalid(format_args!("cannot create {}", dir.display()), e))
}

fn write_text(dir: &Path, name: &str, text: &str) -> CliResult<String> {
    let path = dir.join(name);
    fs::write(&path, text)
        .map_err(|e| io_invalid(format_args!("cannot write {}", path.display()), e))?;
    Ok(name.to_string())
}

/// Boundary-style table, one row per sample: theta,re_F,im_F,u. The
/// parameter column is the circle angle for disk arcs and the strip
/// abscissa for catalogued strip boundaries.
pub fn write_boundary_csv(
    dir: &Path,
    name: &str,
    params: &[f64],
    points: &[Cx],
    us: &[f64],
) -> CliResult<String> {
    let mut text = String::from("theta,re_F,im_F,u\n");
    for ((&p, z), &u) in params.iter().zip(points).zip(us) {
        text.push_str(&fmt_f(p));
        text.push(',');
        text.push_str(&fmt_f(z.re));
        text.push(',');
        text.push_str(&fmt_f(z.im));
        text.push(',');
        text.push_str(&fmt_f(u));
        text.push('\n');
    }
    write_text(dir, name, &text)
}

/// Field grid table in the ray-major sampling order: r,phi,re_z,im_z,
/// re_F,im_F,u with phi = 2 pi j / angular and r = rmax i / radial.
pub fn write_grid_csv(dir: &Path, grid: &FieldGrid, spec: &GridSpec<f64>) -> CliResult<String> {
    let tau = std::f64::consts::TAU;
    let mut text = String::from("r,phi,re_z,im_z,re_F,im_F,u\n");
    let mut samples = grid.samples.iter();
    for j in 0..spec.angular {
        let phi = tau * j as f64 / spec.angular as f64;
        for i in 1..=spec.radial {
            let r = spec.rmax * i as f64 / spec.radial as f64;
            let s = samples.next().expect("grid holds radial * angular samples");
            for (k, v) in [r, phi, s.z.re, s.z.im, s.f.re, s.f.im, s.u].iter().enumerate() {
                if k > 0 {
                    text.push(',');
                }
                text.push_str(&fmt_f(*v));
            }
            text.push('\n');
        }
    }
    write_text(dir, "grid.csv", &text)
}

/// Polyline sketch of already-exported curves: one path per curve, no
/// recomputation, viewBox fitted with a 5% margin. The imaginary axis
/// is negated so the picture keeps the plane's orientation under SVG's
/// downward y axis.
pub fn write_svg(dir: &Path, name: &str, curves: &[&[Cx]]) -> CliResult<String> {
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for pts in curves {
        for p in *pts {
            lo = (lo.0.min(p.re), lo.1.min(-p.im));
            hi = (hi.0.max(p.re), hi.1.max(-p.im));
        }
    }
    if !(lo.0.is_finite() && hi.0.is_finite()) {
        return Err(CliError::Invalid(format!("{name}: no points to draw")));
    }
    let w = (hi.0 - lo.0).max(1e-9);
    let h = (hi.1 - lo.1).max(1e-9);
    let (mx, my) = (0.05 * w, 0.05 * h);
    let stroke = 0.004 * w.max(h);
    let mut text = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        fmt_f(lo.0 - mx),
        fmt_f(lo.1 - my),
        fmt_f(w + 2.0 * mx),
        fmt_f(h + 2.0 * my),
    );
    for pts in curves {
        let mut d = String::new();
        for (k, p) in pts.iter().enumerate() {
            d.push_str(if k == 0 { "M " } else { " L " });
            d.push_str(&fmt_f(p.re));
            d.push(' ');
            d.push_str(&fmt_f(-p.im));
        }
        text.push_str(&format!(
            "  <path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\"/>\n",
            fmt_f(stroke)
        ));
    }
    text.push_str("</svg>\n");
    write_text(dir, name, &text)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> CliResult<String> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Invalid(format!("cannot serialize {name}: {e}")))?;
    write_text(dir, name, &(text + "\n"))
}

#[derive(Serialize)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Cx> for JsonComplex {
    fn from(z: Cx) -> Self {
        JsonComplex { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
pub struct GridMeta {
    pub radial: usize,
    pub angular: usize,
    pub rmax: f64,
}

#[derive(Serialize)]
pub struct GenerateManifest {
    pub arcs: usize,
    pub samples_per_arc: usize,
    pub grid: GridMeta,
    pub base_point: JsonComplex,
    pub base_value: JsonComplex,
    pub seed: u64,
    pub files: Vec<String>,
}

#[derive(Serialize)]
pub struct RecordJson {
    pub name: String,
    pub measured: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub pass: bool,
    pub samples: usize,
}

#[derive(Serialize)]
pub struct ReportJson {
    pub pass: bool,
    pub records: Vec<RecordJson>,
}

pub fn report_json(report: &VerificationReport) -> ReportJson {
    ReportJson {
        pass: report.pass(),
        records: report
            .records
            .iter()
            .map(|r| RecordJson {
                name: r.name.clone(),
                measured: r.measured,
                lower: r.lower,
                upper: r.upper,
                pass: r.pass,
                samples: r.samples,
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct CompareJson {
    pub rotation_scale: JsonComplex,
    pub translation: JsonComplex,
    pub reflection: bool,
    pub residual: f64,
}

pub fn compare_json(t: &SimilarityTransform, residual: f64) -> CompareJson {
    CompareJson {
        rotation_scale: t.rotation_scale.into(),
        translation: t.translation.into(),
        reflection: t.reflection,
        residual,
    }
}

#[derive(Serialize)]
pub struct EndJson {
    pub anchor_index: usize,
    pub anchor: JsonComplex,
    pub tau_minus: JsonComplex,
    pub tau_plus: JsonComplex,
    pub theta: f64,
    pub spread: f64,
}

#[derive(Serialize)]
pub struct EndsJson {
    pub ends: Vec<EndJson>,
}

pub fn end_json(anchor: Cx, r: &EndReport) -> EndJson {
    EndJson {
        anchor_index: r.anchor_index,
        anchor: anchor.into(),
        tau_minus: r.tau_minus.into(),
        tau_plus: r.tau_plus.into(),
        theta: r.theta,
        spread: r.spread,
    }
}

#[derive(Serialize)]
pub struct RoofSampleJson {
    pub point: Vec<f64>,
    pub u: f64,
}

#[derive(Serialize)]
pub struct TrivialDomainJson {
    pub kind: String,
    pub dimension: usize,
    pub samples: Vec<RoofSampleJson>,
}

#[derive(Serialize)]
pub struct TrivialRoofsJson {
    pub domains: Vec<TrivialDomainJson>,
}

#[derive(Serialize)]
pub struct PathologicalSampleJson {
    pub z: JsonComplex,
    pub f: JsonComplex,
}

#[derive(Serialize)]
pub struct PathologicalJson {
    pub period: JsonComplex,
    pub samples: Vec<PathologicalSampleJson>,
    /// Worst deviation of F(z + 2 pi i) - F(z) from the period over the
    /// exported samples.
    pub periodicity_residual: f64,
}
