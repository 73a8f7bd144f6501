//! The five batch commands: pipeline orchestration and artifact emission.

use exflat::{
    catalogue_trivial, end_data, fit_to_hairpin, hairpin_eval, map_grid, pathological_eval,
    period_constant, trace_boundary, verify_neumann_fd, verify_triple, BoundaryCurve, Cx,
    GridSpec, Triple64, TrivialDomain, WeierstrassTriple,
};

use crate::config::{Format, RunConfig};
use crate::error::{classify, CliError, CliResult};
use crate::output;

/// Residual bound for the numerator root solve at assembly.
const ROOT_TOL: f64 = 1e-12;
/// Half width of the circle band in which numerator roots are rejected.
const BOUNDARY_BAND: f64 = 1e-8;
/// Angular clearance kept between boundary samples and the anchors. A
/// sample's floating-point placement sits about one epsilon off the
/// circle, and the Poisson kernel amplifies that to a roof residual of
/// order eps * w / d^2 at distance d from an anchor of weight w, so the
/// clearance grows with the weight scale to keep emitted rows inside
/// the roof bound.
const ARC_CLIP_MIN: f64 = 1e-3;
const ARC_CLIP_PER_WEIGHT: f64 = 4e-3;
/// Boundary samples per arc, per angular grid line.
const SAMPLES_PER_ANGULAR: usize = 16;
/// Emitted boundary rows must have roof values below this bound.
const EMIT_U_BOUND: f64 = 1e-10;
/// Outer radius of the verification grid. The export radius only
/// shapes artifacts; verification always probes the near-boundary band.
const VERIFY_RMAX: f64 = 0.995;
/// Sample count and inward step of the unit-Neumann quotient check.
const NEUMANN_SAMPLES: usize = 50;
const NEUMANN_STEP: f64 = 1e-4;
/// Geometric ratio and depth of the end-direction extrapolation ladder.
const END_RATIO: f64 = 0.6;
const END_LEVELS: usize = 10;
/// Strip half width and per-curve sample count of the hairpin fit. The
/// boundary trace feeding the fit has its own density: the puncture
/// approach is exponential along the image arms, so the export density
/// would leave interpolation gaps there.
const FIT_HALFWIDTH: f64 = 6.0;
const FIT_SAMPLES: usize = 300;
const FIT_TRACE_SAMPLES: usize = 2000;
/// Abscissa range and sample count of the catalogued hairpin boundary.
const HAIRPIN_XMAX: f64 = 4.0;
const HAIRPIN_SAMPLES: usize = 801;
/// Quadrature budgets of the catalogued non-injective antiderivative.
const PERIOD_TOL: f64 = 1e-12;
const PATHOLOGICAL_TOL: f64 = 1e-11;

fn assemble(cfg: &RunConfig) -> CliResult<Triple64> {
    WeierstrassTriple::assemble(cfg.spectrum.clone(), ROOT_TOL, BOUNDARY_BAND).map_err(classify)
}

fn arc_clip(cfg: &RunConfig) -> f64 {
    let max_w = cfg
        .spectrum
        .weights()
        .iter()
        .fold(0.0_f64, |m, &w| m.max(w));
    ARC_CLIP_MIN.max(ARC_CLIP_PER_WEIGHT * max_w.sqrt())
}

/// Traces every boundary arc from the common base value F(0) = 0.
fn trace_all(cfg: &RunConfig, t: &Triple64, n_samples: usize) -> CliResult<Vec<BoundaryCurve>> {
    let clip = arc_clip(cfg);
    (0..t.spectrum().len())
        .map(|j| {
            trace_boundary(
                t,
                j,
                n_samples,
                clip,
                Cx::new(0.0, 0.0),
                cfg.tolerances.quadrature,
            )
            .map_err(classify)
        })
        .collect()
}

/// Roof values on emitted boundary rows are residuals of an exact zero;
/// a violation of the emission bound means the configuration's scale
/// has outgrown the sampling clearance.
fn check_boundary_roof(curves: &[BoundaryCurve]) -> CliResult<()> {
    let worst = curves
        .iter()
        .flat_map(|c| c.us.iter())
        .fold(0.0_f64, |m, &u| m.max(u.abs()));
    if worst > EMIT_U_BOUND {
        return Err(CliError::Numeric(format!(
            "boundary roof residual {worst:.3e} exceeds the {EMIT_U_BOUND:.0e} emission bound"
        )));
    }
    Ok(())
}

pub fn generate(cfg: &RunConfig) -> CliResult<bool> {
    let t = assemble(cfg)?;
    let curves = trace_all(cfg, &t, SAMPLES_PER_ANGULAR * cfg.grid.angular)?;
    check_boundary_roof(&curves)?;
    let grid = map_grid(
        &t,
        cfg.grid.radial,
        cfg.grid.angular,
        cfg.grid.rmax,
        cfg.tolerances.quadrature,
    )
    .map_err(classify)?;

    output::ensure_dir(&cfg.out_dir)?;
    let mut files = Vec::new();
    if cfg.wants(Format::Csv) {
        for c in &curves {
            files.push(output::write_boundary_csv(
                &cfg.out_dir,
                &format!("boundary_arc_{}.csv", c.arc_index),
                &c.thetas,
                &c.points,
                &c.us,
            )?);
        }
        files.push(output::write_grid_csv(&cfg.out_dir, &grid, &cfg.grid)?);
    }
    if cfg.wants(Format::Svg) {
        let pts: Vec<&[Cx]> = curves.iter().map(|c| c.points.as_slice()).collect();
        files.push(output::write_svg(&cfg.out_dir, "boundary.svg", &pts)?);
    }
    if cfg.wants(Format::Json) {
        let manifest = output::GenerateManifest {
            arcs: curves.len(),
            samples_per_arc: SAMPLES_PER_ANGULAR * cfg.grid.angular,
            grid: output::GridMeta {
                radial: cfg.grid.radial,
                angular: cfg.grid.angular,
                rmax: cfg.grid.rmax,
            },
            base_point: grid.base_point.into(),
            base_value: grid.base_value.into(),
            seed: cfg.seed,
            files: files.clone(),
        };
        files.push(output::write_json(&cfg.out_dir, "generate.json", &manifest)?);
    }
    for f in &files {
        println!("wrote {}", cfg.out_dir.join(f).display());
    }
    println!(
        "generate: {} arcs x {} samples, grid {} x {} up to r = {}",
        curves.len(),
        SAMPLES_PER_ANGULAR * cfg.grid.angular,
        cfg.grid.radial,
        cfg.grid.angular,
        cfg.grid.rmax,
    );
    Ok(true)
}

pub fn verify(cfg: &RunConfig) -> CliResult<bool> {
    let t = assemble(cfg)?;
    let spec = GridSpec {
        radial: cfg.grid.radial,
        angular: cfg.grid.angular,
        rmax: VERIFY_RMAX,
    };
    let report = verify_triple(&t, &spec, &cfg.tolerances)
        .map_err(classify)?
        .merge(verify_neumann_fd(&t, NEUMANN_SAMPLES, NEUMANN_STEP, &cfg.tolerances).map_err(classify)?);

    for r in &report.records {
        let bounds = match (r.lower, r.upper) {
            (Some(lo), Some(hi)) => format!(" (in ({lo:.3e}, {hi:.3e}])"),
            (Some(lo), None) => format!(" (> {lo:.3e})"),
            (None, Some(hi)) => format!(" (<= {hi:.3e})"),
            (None, None) => String::new(),
        };
        println!(
            "{} {}: measured {:.6e}{bounds} [{} samples]",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.measured,
            r.samples,
        );
    }
    let pass = report.pass();
    if cfg.wants(Format::Json) {
        output::ensure_dir(&cfg.out_dir)?;
        let name = output::write_json(&cfg.out_dir, "report.json", &output::report_json(&report))?;
        println!("wrote {}", cfg.out_dir.join(name).display());
    }
    println!(
        "verify: {}",
        if pass {
            "all records pass"
        } else {
            "some records fail"
        }
    );
    Ok(pass)
}

pub fn catalogue(cfg: &RunConfig) -> CliResult<bool> {
    output::ensure_dir(&cfg.out_dir)?;
    let mut files = Vec::new();

    // hairpin boundary branches, parameterized by the strip abscissa
    let mut xs = Vec::with_capacity(HAIRPIN_SAMPLES);
    let mut branches = [Vec::new(), Vec::new()];
    let mut us = [Vec::new(), Vec::new()];
    let half_pi = std::f64::consts::FRAC_PI_2;
    for k in 0..HAIRPIN_SAMPLES {
        let x = -HAIRPIN_XMAX + 2.0 * HAIRPIN_XMAX * k as f64 / (HAIRPIN_SAMPLES - 1) as f64;
        xs.push(x);
        for (b, sign) in [(0usize, 1.0), (1, -1.0)] {
            let s = hairpin_eval(Cx::new(x, sign * half_pi)).map_err(classify)?;
            branches[b].push(s.f);
            us[b].push(s.u);
        }
    }
    if cfg.wants(Format::Csv) {
        files.push(output::write_boundary_csv(
            &cfg.out_dir,
            "hairpin_upper.csv",
            &xs,
            &branches[0],
            &us[0],
        )?);
        files.push(output::write_boundary_csv(
            &cfg.out_dir,
            "hairpin_lower.csv",
            &xs,
            &branches[1],
            &us[1],
        )?);
    }
    if cfg.wants(Format::Svg) {
        files.push(output::write_svg(
            &cfg.out_dir,
            "hairpin.svg",
            &[&branches[0], &branches[1]],
        )?);
    }

    if cfg.wants(Format::Json) {
        let mut domains = Vec::new();
        let cases: [(&str, TrivialDomain, usize, &[&[f64]]); 3] = [
            (
                "half_plane",
                TrivialDomain::HalfPlane,
                2,
                &[&[0.0, 0.0], &[0.5, -1.0], &[1.5, 2.0], &[3.0, 0.25]],
            ),
            (
                "exterior_disk_2d",
                TrivialDomain::ExteriorDisk2d,
                2,
                &[&[1.0, 0.0], &[0.0, 1.5], &[-2.0, 0.0], &[0.0, -4.0]],
            ),
            (
                "exterior_ball_md",
                TrivialDomain::ExteriorDiskMd,
                3,
                &[
                    &[1.0, 0.0, 0.0],
                    &[0.0, 1.5, 0.0],
                    &[0.0, 0.0, 2.0],
                    &[4.0, 0.0, 0.0],
                ],
            ),
        ];
        for (kind, domain, m, points) in cases {
            let mut samples = Vec::new();
            for p in points {
                let u = catalogue_trivial(domain, p, m).map_err(classify)?;
                samples.push(output::RoofSampleJson {
                    point: p.to_vec(),
                    u,
                });
            }
            domains.push(output::TrivialDomainJson {
                kind: kind.to_string(),
                dimension: m,
                samples,
            });
        }
        files.push(output::write_json(
            &cfg.out_dir,
            "trivial_roofs.json",
            &output::TrivialRoofsJson { domains },
        )?);

        let period = period_constant(PERIOD_TOL).map_err(classify)?;
        let zs = [Cx::new(0.3, 0.2), Cx::new(-0.5, 1.0), Cx::new(1.0, -0.7)];
        let shift = Cx::new(0.0, std::f64::consts::TAU);
        let mut samples = Vec::new();
        let mut residual = 0.0_f64;
        for z in zs {
            let f = pathological_eval(z, PATHOLOGICAL_TOL).map_err(classify)?;
            let f_shifted = pathological_eval(z + shift, PATHOLOGICAL_TOL).map_err(classify)?;
            residual = residual.max((f_shifted - f - period).norm());
            samples.push(output::PathologicalSampleJson {
                z: z.into(),
                f: f.into(),
            });
        }
        files.push(output::write_json(
            &cfg.out_dir,
            "pathological.json",
            &output::PathologicalJson {
                period: period.into(),
                samples,
                periodicity_residual: residual,
            },
        )?);
    }

    for f in &files {
        println!("wrote {}", cfg.out_dir.join(f).display());
    }
    println!("catalogue: {} files", files.len());
    Ok(true)
}

pub fn compare(cfg: &RunConfig) -> CliResult<bool> {
    if cfg.spectrum.len() != 2 {
        return Err(CliError::Invalid(format!(
            "compare needs a spectrum with exactly 2 anchors, got {}",
            cfg.spectrum.len()
        )));
    }
    let t = assemble(cfg)?;
    let curves = trace_all(cfg, &t, FIT_TRACE_SAMPLES)?;
    let pts: Vec<&[Cx]> = curves.iter().map(|c| c.points.as_slice()).collect();
    let (transform, residual) = fit_to_hairpin(&pts, FIT_HALFWIDTH, FIT_SAMPLES).map_err(classify)?;

    println!("compare: residual {residual:.6e}");
    println!(
        "  rotation_scale = {:.6e} + {:.6e} i, translation = {:.6e} + {:.6e} i, reflection = {}",
        transform.rotation_scale.re,
        transform.rotation_scale.im,
        transform.translation.re,
        transform.translation.im,
        transform.reflection
    );
    if cfg.wants(Format::Json) {
        output::ensure_dir(&cfg.out_dir)?;
        let name = output::write_json(
            &cfg.out_dir,
            "compare.json",
            &output::compare_json(&transform, residual),
        )?;
        println!("wrote {}", cfg.out_dir.join(name).display());
    }
    Ok(true)
}

pub fn ends(cfg: &RunConfig) -> CliResult<bool> {
    let t = assemble(cfg)?;
    let anchors = t.spectrum().anchors().to_vec();
    let mut reports = Vec::new();
    for j in 0..anchors.len() {
        reports.push(end_data(&t, j, END_RATIO, END_LEVELS).map_err(classify)?);
    }
    for r in &reports {
        println!(
            "anchor {}: opening angle {:.12} rad, spread {:.3e}",
            r.anchor_index, r.theta, r.spread
        );
    }
    if cfg.wants(Format::Json) {
        output::ensure_dir(&cfg.out_dir)?;
        let ends = reports
            .iter()
            .map(|r| output::end_json(anchors[r.anchor_index], r))
            .collect();
        let name = output::write_json(&cfg.out_dir, "ends.json", &output::EndsJson { ends })?;
        println!("wrote {}", cfg.out_dir.join(name).display());
    }
    Ok(true)
}
