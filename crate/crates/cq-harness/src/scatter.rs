//! Scattering demo driver: builds the geometry, incident wave, and run
//! parameters from [`Settings`], executes the engine pipeline, writes the
//! history/snapshot artifacts, and computes the causality and extinction
//! diagnostics the CLI prints.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use cq_engine::scattering::{
    solve_scattering, BoundaryGeometry, Curve, FieldGrid, IncidentWave, ScatterRun,
    ScatteringSolution, TimeScheme,
};
use nalgebra::Vector2;

use crate::config::Settings;
use crate::io;
use crate::{config_error, HarnessError};

/// Resolves a geometry name: `circle` (radius 1), `circle:R`,
/// `ellipse:A:B`, or `kite` (the standard kite-shaped test curve).
pub fn curve_by_name(name: &str) -> Result<Curve, HarnessError> {
    let mut parts = name.split(':');
    let kind = parts.next().unwrap_or("");
    let nums: Result<Vec<f64>, _> = parts
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| config_error(format!("geometry: bad parameter '{p}' in '{name}'")))
        })
        .collect();
    let nums = nums?;
    match (kind, nums.as_slice()) {
        ("circle", []) => Ok(Curve::Circle { radius: 1.0 }),
        ("circle", [r]) if *r > 0.0 => Ok(Curve::Circle { radius: *r }),
        ("ellipse", [a, b]) if *a > 0.0 && *b > 0.0 => Ok(Curve::Ellipse { a: *a, b: *b }),
        ("kite", []) => Ok(Curve::kite()),
        _ => Err(config_error(format!(
            "geometry: expected circle[:R], ellipse:A:B, or kite, got '{name}'"
        ))),
    }
}

/// Everything a CLI scatter run leaves behind.
pub struct ScatterArtifacts {
    pub out_dir: PathBuf,
    pub solution: ScatteringSolution,
    /// `max pre-arrival |density| / peak |density|` over step nodes, when
    /// the run had any pre-arrival nodes.
    pub causality_ratio: Option<f64>,
    /// `max_p sup_t |U + u_inc| / sup_t |u_inc|` over interior probes.
    pub extinction_ratio: Option<f64>,
}

/// Builds and runs the scattering pipeline from settings, writing
/// artifacts under the `out` directory.
pub fn run_scatter(settings: &Settings) -> Result<ScatterArtifacts, HarnessError> {
    let scheme_name = settings.string_or("scheme", "radau3");
    let scheme = TimeScheme::from_name(&scheme_name)
        .ok_or_else(|| config_error(format!("unknown scheme '{scheme_name}'")))?;
    let kappa = settings.positive_f64_or("kappa", 0.0625)?;
    let steps = settings.usize_or("steps", 128)?;
    let eps = settings.positive_f64_or("eps", f64::EPSILON)?;
    let boundary_points = settings.usize_or("boundary-points", 32)?;
    let speed = settings.positive_f64_or("speed", 1.0)?;
    let march = settings.bool_or("march", false)?;
    let geometry = settings.string_or("geometry", "circle");
    let out_dir = PathBuf::from(settings.string_or("out", "cq-out"));

    let curve = curve_by_name(&geometry)?;
    let geom = Arc::new(BoundaryGeometry::new(&curve, boundary_points)?);
    let wave = IncidentWave::toward_geometry(&geom, speed)?;

    let mut run = ScatterRun::new(scheme, kappa, steps);
    run.eps = eps;
    run.march = march;
    run.probe_points = settings
        .point_list("probes")?
        .into_iter()
        .map(|(x, y)| Vector2::new(x, y))
        .collect();
    run.snapshot_times = settings.f64_list("snapshots")?;
    if let Some((nx, ny)) = settings.grid_size("grid")? {
        let extent = settings.f64_list("extent")?;
        let (x_min, x_max, y_min, y_max) = match extent.as_slice() {
            [] => (-3.0, 3.0, -3.0, 3.0),
            [a, b, c, d] => (*a, *b, *c, *d),
            _ => {
                return Err(config_error(
                    "extent: expected xmin,xmax,ymin,ymax".to_string(),
                ))
            }
        };
        run.grid = Some(FieldGrid {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        });
    }

    let solution = solve_scattering(&geom, &wave, &run)?;
    write_artifacts(&out_dir, &run, &solution)?;

    let causality_ratio = causality_diagnostic(&geom, &wave, &solution);
    let extinction_ratio = extinction_diagnostic(&geom, &wave, &run, &solution);

    Ok(ScatterArtifacts {
        out_dir,
        solution,
        causality_ratio,
        extinction_ratio,
    })
}

fn write_artifacts(
    out_dir: &Path,
    run: &ScatterRun,
    solution: &ScatteringSolution,
) -> Result<(), HarnessError> {
    std::fs::create_dir_all(out_dir)?;
    io::write_history_csv(
        out_dir.join("density.csv"),
        &solution.times,
        &solution.density,
        "eta",
    )?;
    io::write_history_csv(
        out_dir.join("normal_derivative.csv"),
        &solution.times,
        &solution.normal_derivative,
        "lambda",
    )?;
    if !solution.probe_histories.is_empty() {
        let width = solution.probe_histories.len();
        let mut header = vec!["t".to_string()];
        header.extend((0..width).map(|i| format!("probe_{i}")));
        io::write_csv(
            out_dir.join("probes.csv"),
            &header,
            solution.times.iter().enumerate().map(|(n, t)| {
                let mut row = vec![io::format_f64(*t)];
                row.extend(
                    solution
                        .probe_histories
                        .iter()
                        .map(|h| io::format_f64(h[n])),
                );
                row
            }),
        )?;
    }
    for (k, snap) in solution.snapshots.iter().enumerate() {
        io::write_matrix_csv(out_dir.join(format!("snapshot_{k}.csv")), &snap.values)?;
        io::write_pgm(out_dir.join(format!("snapshot_{k}.pgm")), &snap.values)?;
    }
    let _ = run;
    Ok(())
}

/// First time any observation point feels the wave: the signal support
/// starts at argument 0, so arrival is at `lag + min_m (m . d) / c`.
pub fn arrival_time(geom: &BoundaryGeometry, wave: &IncidentWave) -> f64 {
    let mut min_proj = f64::INFINITY;
    for side in 0..2 {
        for p in geom.observation_points(side) {
            min_proj = min_proj.min(p.dot(&wave.direction()));
        }
    }
    wave.lag() + min_proj / wave.speed()
}

/// Pre-arrival density level relative to the history's peak; `None` when
/// no step node precedes the arrival or the density never responds.
fn causality_diagnostic(
    geom: &BoundaryGeometry,
    wave: &IncidentWave,
    solution: &ScatteringSolution,
) -> Option<f64> {
    let arrival = arrival_time(geom, wave);
    let sup = |v: &nalgebra::DVector<f64>| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut pre = None;
    let mut peak = 0.0f64;
    for (t, density) in solution.times.iter().zip(&solution.density) {
        let level = sup(density);
        peak = peak.max(level);
        if *t <= arrival {
            pre = Some(pre.unwrap_or(0.0f64).max(level));
        }
    }
    match (pre, peak > 0.0) {
        (Some(p), true) => Some(p / peak),
        _ => None,
    }
}

/// Total-field extinction ratio over the probes that lie inside the
/// obstacle; `None` when no probe does.
fn extinction_diagnostic(
    geom: &BoundaryGeometry,
    wave: &IncidentWave,
    run: &ScatterRun,
    solution: &ScatteringSolution,
) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for (p, history) in run.probe_points.iter().zip(&solution.probe_histories) {
        if !point_inside(geom, *p) {
            continue;
        }
        let mut total = 0.0f64;
        let mut incident = 0.0f64;
        for (n, t) in solution.times.iter().enumerate() {
            let u_inc = wave.evaluate(*p, *t);
            total = total.max((history[n] + u_inc).abs());
            incident = incident.max(u_inc.abs());
        }
        if incident > 0.0 {
            let ratio = total / incident;
            worst = Some(worst.map_or(ratio, |w: f64| w.max(ratio)));
        }
    }
    worst
}

/// Winding-number inside test against the sampled boundary polygon.
fn point_inside(geom: &BoundaryGeometry, p: Vector2<f64>) -> bool {
    let poly = geom.sources();
    let n = poly.len();
    let mut winding = 0i32;
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        let cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
        if a.y <= p.y {
            if b.y > p.y && cross > 0.0 {
                winding += 1;
            }
        } else if b.y <= p.y && cross < 0.0 {
            winding -= 1;
        }
    }
    winding != 0
}
