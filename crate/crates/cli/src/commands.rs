use std::f64::consts::PI;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use leaky_core::chords::{
    check_continuous_with, check_discrete, chord_moment, default_paperclip_family, default_tolerance,
    lens_c2_closed_form, paperclip_probe as probe, InequalityReport, Sign, Verdict,
};
use leaky_core::geometry::{
    build_circle, build_ellipse, build_from_curvature, build_lens, build_paperclip, build_regular_polygon,
    close_curve, perturbed_regular_polygon, rhomboid, ArcLengthCurve, CurvatureSpec, Polygon,
};
use leaky_core::io::{curve_to_json, read_curve, read_json, read_polygon, read_spec};
use leaky_core::perturb::{i_g, second_order_expansion_audit, ExpansionAudit, ModeContribution};
use leaky_core::spectral::{eigenfunction_at, ground_state_with, GroundStateOptions, GroundStateResult};
use leaky_core::Error;

use crate::config::{positive, Format, RunConfig, Shape, SignChoice};
use crate::output::{emit, json, Csv};

pub enum Outcome {
    Success,
    Violation,
}

impl Outcome {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Outcome::Success => ExitCode::SUCCESS,
            Outcome::Violation => ExitCode::from(3),
        }
    }
}

pub fn failure_code(error: &anyhow::Error) -> u8 {
    let no_bound_state = error
        .chain()
        .any(|cause| matches!(cause.downcast_ref::<Error>(), Some(Error::NoBoundState { .. })));
    if no_bound_state {
        2
    } else {
        1
    }
}

const DEFAULT_SPEC_GRID: usize = 256;
/// Largest refinement factor tried when requested separations are off-grid.
const MAX_REFINEMENT: usize = 64;

fn load_curve(cfg: &RunConfig) -> Result<ArcLengthCurve> {
    if let Some(n) = cfg.grid {
        if n < 3 {
            bail!("--grid must be at least 3, got {n}");
        }
    }
    let curve = match (&cfg.curve, &cfg.spec) {
        (Some(path), None) => read_curve(path).with_context(|| format!("reading curve {}", path.display()))?,
        (None, Some(path)) => {
            let spec = read_spec(path).with_context(|| format!("reading spec {}", path.display()))?;
            let raw = build_from_curvature(&spec, cfg.grid.unwrap_or(DEFAULT_SPEC_GRID))?;
            close_curve(&raw, &spec)?.0
        }
        (Some(_), Some(_)) => bail!("give either --curve or --spec, not both"),
        (None, None) => bail!("a curve is required (--curve or --spec)"),
    };
    match cfg.grid {
        Some(n) if n != curve.grid_size() => {
            eprintln!("resampling the curve from {} to {n} points", curve.grid_size());
            Ok(curve.resampled(n)?)
        }
        _ => Ok(curve),
    }
}

fn solver_options(cfg: &RunConfig) -> Result<(f64, GroundStateOptions)> {
    let alpha = positive("alpha", cfg.alpha.unwrap_or(1.0))?;
    let options = GroundStateOptions {
        kappa_tolerance: positive("tol", cfg.tol.unwrap_or(1e-8))?,
        ..GroundStateOptions::default()
    };
    Ok((alpha, options))
}

fn solve(curve: &ArcLengthCurve, cfg: &RunConfig) -> Result<GroundStateResult> {
    let (alpha, options) = solver_options(cfg)?;
    let result = ground_state_with(curve, alpha, &options)?;
    if result.self_intersecting {
        eprintln!("warning: the curve intersects itself");
    }
    eprintln!(
        "kappa* = {}, energy = {}, residual = {:.3e}, grid = {}",
        result.kappa_star, result.energy, result.lambda_residual, result.grid_size
    );
    Ok(result)
}

pub fn ground_state(cfg: &RunConfig) -> Result<Outcome> {
    solver_options(cfg)?;
    let curve = load_curve(cfg)?;
    let result = solve(&curve, cfg)?;
    let text = match cfg.format_or(Format::Json) {
        Format::Json => json(&result)?,
        Format::Csv => {
            let mut csv = Csv::new("kappa,energy,residual,iterations,grid");
            csv.row(&[
                result.kappa_star.to_string(),
                result.energy.to_string(),
                result.lambda_residual.to_string(),
                result.bisection_iterations.to_string(),
                result.grid_size.to_string(),
            ]);
            csv.finish()
        }
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(Outcome::Success)
}

fn signs(cfg: &RunConfig) -> Vec<Sign> {
    match cfg.sign.unwrap_or(SignChoice::Both) {
        SignChoice::Plus => vec![Sign::Plus],
        SignChoice::Minus => vec![Sign::Minus],
        SignChoice::Both => vec![Sign::Plus, Sign::Minus],
    }
}

fn exponents(cfg: &RunConfig) -> Result<Vec<f64>> {
    let p = cfg.p.clone().unwrap_or_else(|| vec![2.0]);
    for &x in &p {
        positive("p", x).context("exponents are given as positive numbers; use --sign for the reciprocal families")?;
    }
    Ok(p)
}

fn on_grid(u: f64, spacing: f64) -> bool {
    let steps = u / spacing;
    (steps - steps.round()).abs() <= 1e-9 * steps.max(1.0)
}

/// Refine the grid until every separation is a multiple of the spacing.
fn fit_grid(curve: ArcLengthCurve, us: &[f64]) -> Result<ArcLengthCurve> {
    for k in 1..=MAX_REFINEMENT {
        let n = curve.grid_size() * k;
        let spacing = curve.length() / n as f64;
        if us.iter().all(|&u| on_grid(u, spacing)) {
            if k == 1 {
                return Ok(curve);
            }
            eprintln!("resampling the curve from {} to {n} points to reach the requested separations", curve.grid_size());
            return curve
                .resampled(n)
                .context("the requested separations are off the sample grid");
        }
    }
    bail!(
        "the requested separations are not multiples of L/{} for any refinement up to {MAX_REFINEMENT}",
        curve.grid_size()
    )
}

pub fn chord_scan(cfg: &RunConfig) -> Result<Outcome> {
    let p = exponents(cfg)?;
    let signs = signs(cfg);
    let reports = if let Some(path) = &cfg.polygon {
        if cfg.curve.is_some() || cfg.spec.is_some() {
            bail!("give either a polygon or a curve, not both");
        }
        if cfg.u.is_some() || cfg.tol.is_some() {
            bail!("--u and --tol apply to curves; polygons take --m");
        }
        let polygon = read_polygon(path).with_context(|| format!("reading polygon {}", path.display()))?;
        scan_polygon(&polygon, cfg.m.as_deref(), &p, &signs)?
    } else {
        if cfg.m.is_some() {
            bail!("--m applies to polygons; curves take --u");
        }
        if let Some(t) = cfg.tol {
            positive("tol", t)?;
        }
        let curve = load_curve(cfg)?;
        let l = curve.length();
        let us = cfg
            .u
            .clone()
            .unwrap_or_else(|| (1..=8).map(|k| l * k as f64 / 16.0).collect());
        if let Some(&u) = us.iter().find(|&&u| !(u > 0.0 && u <= 0.5 * l * (1.0 + 1e-12))) {
            bail!("arc separation {u} outside (0, L/2] for L = {l}");
        }
        let curve = fit_grid(curve, &us)?;
        let tol = cfg.tol.unwrap_or_else(|| default_tolerance(&curve));
        let mut out = Vec::new();
        for &u in &us {
            for &x in &p {
                for &sign in &signs {
                    out.push(check_continuous_with(&curve, u, x, sign, tol)?);
                }
            }
        }
        out
    };
    let violations = reports.iter().filter(|r| r.verdict == Verdict::Violated).count();
    let text = match cfg.format_or(Format::Csv) {
        Format::Json => json(&reports)?,
        Format::Csv => {
            let mut csv = Csv::new(InequalityReport::CSV_HEADER);
            for r in &reports {
                csv.line(&r.csv_row());
            }
            csv.finish()
        }
    };
    emit(cfg.out.as_deref(), &text)?;
    eprintln!("{} checks, {violations} violated", reports.len());
    Ok(if violations > 0 { Outcome::Violation } else { Outcome::Success })
}

fn scan_polygon(polygon: &Polygon, m: Option<&[usize]>, p: &[f64], signs: &[Sign]) -> Result<Vec<InequalityReport>> {
    let n = polygon.vertex_count();
    let orders: Vec<usize> = m.map_or_else(|| (1..=n / 2).collect(), <[usize]>::to_vec);
    if let Some(&bad) = orders.iter().find(|&&k| k == 0 || k > n / 2) {
        bail!("diagonal order {bad} outside 1..={}", n / 2);
    }
    let mut out = Vec::new();
    for &k in &orders {
        for &x in p {
            for &sign in signs {
                out.push(check_discrete(polygon, k, x, sign)?);
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct PerturbEntry {
    u: f64,
    i_g: f64,
    modes: Vec<ModeContribution>,
    audit: ExpansionAudit,
    verdict: &'static str,
}

/// Default audit parameter: small against the unit circle, and scaled down
/// for large perturbations so that `‖Lεg‖∞` stays at most 0.05.
fn default_epsilon(spec: &CurvatureSpec) -> f64 {
    let norm = spec.sup_norm(4096);
    if norm == 0.0 {
        0.02
    } else {
        0.02f64.min(0.05 / norm)
    }
}

pub fn perturb(cfg: &RunConfig) -> Result<Outcome> {
    if let Some(e) = cfg.epsilon {
        positive("epsilon", e)?;
    }
    let spec = match &cfg.spec {
        Some(path) => read_spec(path).with_context(|| format!("reading spec {}", path.display()))?,
        None => {
            eprintln!("no --spec given: using a random spec with modes 1..5, ‖Lg‖∞ = 1, seed {}", cfg.seed());
            CurvatureSpec::random(2.0 * PI, &[1, 2, 3, 4, 5], 1.0, cfg.seed())?
        }
    };
    let l = spec.length();
    let us = cfg.u.clone().unwrap_or_else(|| vec![0.5 * l]);
    if let Some(&u) = us.iter().find(|&&u| !(u > 0.0 && u <= 0.5 * l * (1.0 + 1e-12))) {
        bail!("arc separation {u} outside (0, L/2] for L = {l}");
    }
    let epsilon = cfg.epsilon.unwrap_or_else(|| default_epsilon(&spec));
    let mut entries = Vec::with_capacity(us.len());
    for &u in &us {
        let (total, modes) = i_g(&spec, u)?;
        let audit = second_order_expansion_audit(&spec, u, epsilon)?;
        eprintln!("u = {u}: I_g = {total}, audit ratio = {}, {}", audit.ratio, audit.verdict());
        entries.push(PerturbEntry {
            u,
            i_g: total,
            modes,
            verdict: audit.verdict(),
            audit,
        });
    }
    let text = match cfg.format_or(Format::Csv) {
        Format::Json => json(&entries)?,
        Format::Csv => {
            let mut csv = Csv::new("u,n,a,b,weight,F,contribution,I_g,audit");
            for e in &entries {
                for m in &e.modes {
                    csv.row(&[
                        e.u.to_string(),
                        m.n.to_string(),
                        m.a.to_string(),
                        m.b.to_string(),
                        m.weight.to_string(),
                        m.kernel.to_string(),
                        m.contribution.to_string(),
                        e.i_g.to_string(),
                        e.verdict.to_string(),
                    ]);
                }
            }
            csv.finish()
        }
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct FieldSample {
    x: f64,
    y: f64,
    psi: Option<f64>,
}

pub fn field_map(cfg: &RunConfig) -> Result<Outcome> {
    let extent = positive("extent", cfg.extent.unwrap_or(3.0))?;
    let samples = cfg.samples.unwrap_or(41);
    if samples < 2 {
        bail!("--samples must be at least 2, got {samples}");
    }
    if cfg.result.is_none() {
        solver_options(cfg)?;
    }
    let curve = load_curve(cfg)?;
    let result: GroundStateResult = match &cfg.result {
        Some(path) => read_json(path).with_context(|| format!("reading ground state {}", path.display()))?,
        None => solve(&curve, cfg)?,
    };
    // integer numerators keep the axis exactly symmetric about zero
    let last = (samples - 1) as i64;
    let axis: Vec<f64> = (0..=last).map(|i| extent * (2 * i - last) as f64 / last as f64).collect();
    let mut points = Vec::with_capacity(samples * samples);
    let mut on_curve = 0usize;
    for &y in &axis {
        for &x in &axis {
            let psi = match eigenfunction_at(&result, &curve, [x, y]) {
                Ok(v) => Some(v),
                Err(Error::PointOnCurve { .. }) => {
                    on_curve += 1;
                    None
                }
                Err(e) => return Err(e.into()),
            };
            points.push(FieldSample { x, y, psi });
        }
    }
    if on_curve > 0 {
        eprintln!("{on_curve} grid points lie on the curve; psi is left undefined there");
    }
    let text = match cfg.format_or(Format::Csv) {
        Format::Json => json(&points)?,
        Format::Csv => {
            let mut csv = Csv::new("x,y,psi");
            for s in &points {
                csv.row(&[s.x.to_string(), s.y.to_string(), s.psi.map_or_else(|| "nan".into(), |v| v.to_string())]);
            }
            csv.finish()
        }
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct LensRow {
    radius: f64,
    u: f64,
    closed_form: f64,
    quadrature: f64,
    circle: f64,
    ratio: f64,
}

pub fn lens_table(cfg: &RunConfig) -> Result<Outcome> {
    let l = positive("length", cfg.length.unwrap_or(2.0 * PI))?;
    let grid = cfg.grid.unwrap_or(4096);
    let radii = cfg.radius.clone().unwrap_or_else(|| {
        [1.0, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0].iter().map(|f| f * l / (2.0 * PI)).collect()
    });
    for &r in &radii {
        if !(r > l / (4.0 * PI)) {
            bail!("lens radius {r} must exceed L/4π = {}", l / (4.0 * PI));
        }
    }
    let us = cfg.u.clone().unwrap_or_else(|| (1..=8).map(|k| l * k as f64 / 16.0).collect());
    if let Some(&u) = us.iter().find(|&&u| !(u > 0.0 && u <= 0.5 * l * (1.0 + 1e-12))) {
        bail!("arc separation {u} outside (0, L/2] for L = {l}");
    }
    let mut rows = Vec::new();
    for &radius in &radii {
        let lens = build_lens(radius, l, grid)?;
        for &u in &us {
            let closed_form = lens_c2_closed_form(radius, l, u)?;
            let quadrature = chord_moment(&lens, u, 2.0)
                .with_context(|| format!("quadrature on {grid} points"))?
                .value;
            let circle = l.powi(3) / (PI * PI) * (PI * u / l).sin().powi(2);
            rows.push(LensRow {
                radius,
                u,
                closed_form,
                quadrature,
                circle,
                ratio: closed_form / circle,
            });
        }
    }
    let text = match cfg.format_or(Format::Csv) {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut csv = Csv::new("radius,u,closed_form,quadrature,circle,ratio");
            for r in &rows {
                csv.row(&[
                    r.radius.to_string(),
                    r.u.to_string(),
                    r.closed_form.to_string(),
                    r.quadrature.to_string(),
                    r.circle.to_string(),
                    r.ratio.to_string(),
                ]);
            }
            csv.finish()
        }
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(Outcome::Success)
}

pub fn paperclip_probe(cfg: &RunConfig) -> Result<Outcome> {
    let family = match (cfg.a, cfg.b, cfg.r) {
        (None, None, None) => default_paperclip_family(),
        (Some(a), Some(b), Some(r)) => vec![(positive("a", a)?, positive("b", b)?, positive("r", r)?)],
        _ => bail!("a single paperclip needs all of --a, --b and --r"),
    };
    let samples = probe(&family, cfg.grid.unwrap_or(8192))?;
    if let Some(best) = samples.iter().max_by(|x, y| x.normalized_c2.total_cmp(&y.normalized_c2)) {
        eprintln!(
            "largest c²(L/2)/L³ = {} at (a, b, r) = ({}, {}, {}); circle value 1/π² = {}",
            best.normalized_c2,
            best.a,
            best.b,
            best.r,
            1.0 / (PI * PI)
        );
    }
    let text = match cfg.format_or(Format::Csv) {
        Format::Json => json(&samples)?,
        Format::Csv => {
            let mut csv = Csv::new("a,b,r,length,normalized_c2,excess");
            for s in &samples {
                csv.row(&[
                    s.a.to_string(),
                    s.b.to_string(),
                    s.r.to_string(),
                    s.length.to_string(),
                    s.normalized_c2.to_string(),
                    s.excess.to_string(),
                ]);
            }
            csv.finish()
        }
    };
    emit(cfg.out.as_deref(), &text)?;
    Ok(Outcome::Success)
}

fn need(value: Option<f64>, flag: &str) -> Result<f64> {
    value.with_context(|| format!("this shape needs --{flag}"))
}

pub fn make_curve(cfg: &RunConfig) -> Result<Outcome> {
    let shape = cfg.shape.context("--shape is required")?;
    let length = cfg.length.unwrap_or(2.0 * PI);
    let grid = cfg.grid.unwrap_or(DEFAULT_SPEC_GRID);
    let side = cfg.side.unwrap_or(1.0);
    let text = match shape {
        Shape::Circle => curve_to_json(&build_circle(length, grid)?)?,
        Shape::Ellipse => curve_to_json(&build_ellipse(need(cfg.ratio, "ratio")?, length, grid)?)?,
        Shape::Lens => {
            let radius = match cfg.radius.as_deref() {
                Some([r]) => *r,
                _ => bail!("a lens needs exactly one --radius"),
            };
            curve_to_json(&build_lens(radius, length, grid)?)?
        }
        Shape::Paperclip => curve_to_json(&build_paperclip(
            need(cfg.a, "a")?,
            need(cfg.b, "b")?,
            need(cfg.r, "r")?,
            grid,
        )?)?,
        Shape::Curvature => {
            let path = cfg.spec.as_ref().context("a curvature curve needs --spec")?;
            let spec = read_spec(path).with_context(|| format!("reading spec {}", path.display()))?;
            let (curve, _) = close_curve(&build_from_curvature(&spec, grid)?, &spec)?;
            curve_to_json(&curve)?
        }
        Shape::RegularPolygon => {
            let n = cfg.vertices.context("a polygon needs --vertices")?;
            json(&build_regular_polygon(n, side)?)?
        }
        Shape::Rhomboid => json(&rhomboid(need(cfg.angle, "angle")?, side)?)?,
        Shape::PerturbedPolygon => {
            let n = cfg.vertices.context("a polygon needs --vertices")?;
            json(&perturbed_regular_polygon(n, side, need(cfg.amplitude, "amplitude")?, cfg.seed())?)?
        }
    };
    let mut text = text;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    emit(cfg.out.as_deref(), &text)?;
    Ok(Outcome::Success)
}
