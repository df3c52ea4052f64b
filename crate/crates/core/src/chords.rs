//! Mean-chord functionals `c^p(u) = ∫₀ᴸ |Γ(s+u) - Γ(s)|ᵖ ds`, their discrete
//! polygon analogues, and verdicts for the associated inequalities.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{build_paperclip, validate_positive, ArcLengthCurve, Polygon};
use crate::quadrature::gregory;
use crate::spectral::CLOSURE_TOLERANCE;
use crate::specfun::k0_unchecked;

/// Relative equality tolerance for smooth curves.
pub const SMOOTH_TOLERANCE: f64 = 1e-8;
/// Relative equality tolerance for curves with corners.
pub const CORNER_TOLERANCE: f64 = 1e-6;
/// Relative equality tolerance for the finite polygon sums.
pub const DISCRETE_TOLERANCE: f64 = 1e-10;

/// `c^p(u)` evaluated on a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChordMoment {
    pub u: f64,
    pub p: f64,
    pub value: f64,
    pub length: f64,
    pub grid_size: usize,
}

/// `∫₀ᴸ |Γ(s+u) - Γ(s)|ᵖ ds` on the sample grid.
///
/// Smooth loops use the periodic trapezoid rule. If the curve has corners
/// the integrand has kinks wherever `s` or `s + u` sits on a corner; the
/// period is then split at those samples and each panel is integrated with
/// Gregory end corrections.
pub fn chord_moment(curve: &ArcLengthCurve, u: f64, p: f64) -> Result<ChordMoment> {
    if p == 0.0 || !p.is_finite() {
        return Err(invalid(format!("exponent must be finite and nonzero, got {p}")));
    }
    let l = curve.length();
    if !(u > 0.0 && u <= 0.5 * l * (1.0 + 1e-12)) {
        return Err(invalid(format!("arc separation {u} outside (0, L/2] for L = {l}")));
    }
    let k = curve.grid_offset(u)?;
    let n = curve.grid_size();
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let d = curve.chord(i, k);
        if p < 0.0 && !(d > 0.0) {
            return Err(Error::SingularChord { index: i });
        }
        samples.push(d.powf(p));
    }
    let h = curve.spacing();
    let value = if curve.corners().is_empty() {
        samples.iter().sum::<f64>() * h
    } else {
        let mut breaks: Vec<usize> = curve
            .corners()
            .iter()
            .flat_map(|&c| [c % n, (c + n - k % n) % n])
            .collect();
        breaks.sort_unstable();
        breaks.dedup();
        let mut total = 0.0;
        for (j, &start) in breaks.iter().enumerate() {
            let end = if j + 1 < breaks.len() { breaks[j + 1] } else { breaks[0] + n };
            let panel: Vec<f64> = (start..=end).map(|i| samples[i % n]).collect();
            total += gregory(&panel, h);
        }
        total
    };
    Ok(ChordMoment {
        u,
        p,
        value,
        length: l,
        grid_size: n,
    })
}

/// Which member of the inequality family a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "C+p")]
    CPlus,
    #[serde(rename = "C-p")]
    CMinus,
    #[serde(rename = "D+p")]
    DPlus,
    #[serde(rename = "D-p")]
    DMinus,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::CPlus => "C+p",
            Family::CMinus => "C-p",
            Family::DPlus => "D+p",
            Family::DMinus => "D-p",
        })
    }
}

/// Exponent sign: `+p` bounds the moment from above, `-p` from below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    EqualityWithinTol,
}

impl Verdict {
    /// Holds, possibly with equality.
    pub fn is_satisfied(self) -> bool {
        self != Verdict::Violated
    }

    fn classify(margin: f64, tolerance: f64) -> Self {
        if margin.abs() <= tolerance {
            Verdict::EqualityWithinTol
        } else if margin > 0.0 {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::EqualityWithinTol => "equality-within-tol",
        })
    }
}

/// One evaluated inequality.
///
/// `margin` is the slack in the direction of the inequality: `rhs - lhs`
/// for the `+p` families (upper bounds) and `lhs - rhs` for the `-p`
/// families (lower bounds), so a negative margin is always a violation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub family: Family,
    /// `u` for curves, `m` for polygons.
    pub u_or_m: f64,
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
    /// Absolute tolerance applied to the margin.
    pub tolerance: f64,
}

impl InequalityReport {
    pub const CSV_HEADER: &'static str = "family,u_or_m,p,lhs,rhs,margin,verdict";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.family, self.u_or_m, self.p, self.lhs, self.rhs, self.margin, self.verdict
        )
    }

    /// `lhs / rhs`.
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }

    fn build(family: Family, sign: Sign, u_or_m: f64, p: f64, lhs: f64, rhs: f64, rel_tol: f64) -> Self {
        let margin = match sign {
            Sign::Plus => rhs - lhs,
            Sign::Minus => lhs - rhs,
        };
        let tolerance = rel_tol * rhs.abs();
        InequalityReport {
            family,
            u_or_m,
            p,
            lhs,
            rhs,
            margin,
            verdict: Verdict::classify(margin, tolerance),
            tolerance,
        }
    }
}

/// Default relative tolerance for a curve: looser when it has corners.
pub fn default_tolerance(curve: &ArcLengthCurve) -> f64 {
    if curve.corners().is_empty() {
        SMOOTH_TOLERANCE
    } else {
        CORNER_TOLERANCE
    }
}

/// Circle value of the `±p` moment, the right-hand side of the continuous
/// inequalities.
pub fn circle_bound(length: f64, u: f64, p: f64, sign: Sign) -> f64 {
    let s = (PI * u / length).sin();
    match sign {
        Sign::Plus => length.powf(1.0 + p) / PI.powf(p) * s.powf(p),
        Sign::Minus => PI.powf(p) * length.powf(1.0 - p) / s.powf(p),
    }
}

/// Regular-polygon value of the `±p` diagonal sum.
pub fn regular_polygon_bound(vertices: usize, side: f64, m: usize, p: f64, sign: Sign) -> f64 {
    let ratio = (PI * m as f64 / vertices as f64).sin() / (PI / vertices as f64).sin();
    match sign {
        Sign::Plus => vertices as f64 * side.powf(p) * ratio.powf(p),
        Sign::Minus => vertices as f64 * side.powf(-p) * ratio.powf(-p),
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(invalid(format!("exponent must be positive (the sign selects ±p), got {p}")));
    }
    Ok(())
}

pub fn check_continuous(curve: &ArcLengthCurve, u: f64, p: f64, sign: Sign) -> Result<InequalityReport> {
    check_continuous_with(curve, u, p, sign, default_tolerance(curve))
}

/// Compare `c^{±p}(u)` against the circle of the same length.
pub fn check_continuous_with(
    curve: &ArcLengthCurve,
    u: f64,
    p: f64,
    sign: Sign,
    rel_tol: f64,
) -> Result<InequalityReport> {
    check_exponent(p)?;
    let exponent = if sign == Sign::Plus { p } else { -p };
    let lhs = chord_moment(curve, u, exponent)?.value;
    let rhs = circle_bound(curve.length(), u, p, sign);
    let family = if sign == Sign::Plus { Family::CPlus } else { Family::CMinus };
    Ok(InequalityReport::build(family, sign, u, p, lhs, rhs, rel_tol))
}

/// Compare `Σ |y_{n+m} - y_n|^{±p}` against the regular polygon with the
/// same vertex count and side.
pub fn check_discrete(polygon: &Polygon, m: usize, p: f64, sign: Sign) -> Result<InequalityReport> {
    check_exponent(p)?;
    let n = polygon.vertex_count();
    if m < 1 || m > n / 2 {
        return Err(invalid(format!("m = {m} outside 1..={}", n / 2)));
    }
    let exponent = if sign == Sign::Plus { p } else { -p };
    let mut lhs = 0.0;
    for i in 0..n {
        let d = polygon.diagonal(i, m);
        if exponent < 0.0 && !(d > 0.0) {
            return Err(Error::SingularChord { index: i });
        }
        lhs += d.powf(exponent);
    }
    let rhs = regular_polygon_bound(n, polygon.side_length(), m, p, sign);
    let family = if sign == Sign::Plus { Family::DPlus } else { Family::DMinus };
    Ok(InequalityReport::build(family, sign, m as f64, p, lhs, rhs, DISCRETE_TOLERANCE))
}

/// `c²(u)` of the two-arc loop of radius `R` and length `L`.
pub fn lens_c2_closed_form(radius: f64, length: f64, u: f64) -> Result<f64> {
    validate_positive("radius", radius)?;
    validate_positive("length", length)?;
    if radius <= length / (4.0 * PI) {
        return Err(invalid(format!("lens radius {radius} must exceed L/4π")));
    }
    if !(u > 0.0 && u <= 0.5 * length * (1.0 + 1e-12)) {
        return Err(invalid(format!("arc separation {u} outside (0, L/2]")));
    }
    let t = u / (2.0 * radius);
    Ok(8.0
        * radius.powi(3)
        * (length / (2.0 * radius) * t.sin().powi(2)
            + 4.0 * (t * t.cos() - t.sin()) * (length / (4.0 * radius)).cos() * ((length - 2.0 * u) / (4.0 * radius)).cos()))
}

/// The four reports `±p, ±p′` and whether the observed verdicts respect the
/// implications `p ⇒ p′` (for `p > p′`) and `p ⇒ -p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationAudit {
    pub plus_p: InequalityReport,
    pub plus_q: InequalityReport,
    pub minus_p: InequalityReport,
    pub minus_q: InequalityReport,
    pub consistent: bool,
}

impl ImplicationAudit {
    fn from_reports(reports: [InequalityReport; 4]) -> Self {
        let [plus_p, plus_q, minus_p, minus_q] = reports;
        let implies = |a: &InequalityReport, b: &InequalityReport| !a.verdict.is_satisfied() || b.verdict.is_satisfied();
        let consistent = implies(&plus_p, &plus_q) && implies(&plus_p, &minus_p) && implies(&plus_q, &minus_q);
        Self {
            plus_p,
            plus_q,
            minus_p,
            minus_q,
            consistent,
        }
    }

    pub fn reports(&self) -> [&InequalityReport; 4] {
        [&self.plus_p, &self.plus_q, &self.minus_p, &self.minus_q]
    }
}

fn check_exponent_pair(p: f64, q: f64) -> Result<()> {
    if !(p > q && q > 0.0) {
        return Err(invalid(format!("need p > p′ > 0, got p = {p}, p′ = {q}")));
    }
    Ok(())
}

pub fn implication_audit(curve: &ArcLengthCurve, u: f64, p: f64, q: f64) -> Result<ImplicationAudit> {
    check_exponent_pair(p, q)?;
    Ok(ImplicationAudit::from_reports([
        check_continuous(curve, u, p, Sign::Plus)?,
        check_continuous(curve, u, q, Sign::Plus)?,
        check_continuous(curve, u, p, Sign::Minus)?,
        check_continuous(curve, u, q, Sign::Minus)?,
    ]))
}

pub fn implication_audit_discrete(polygon: &Polygon, m: usize, p: f64, q: f64) -> Result<ImplicationAudit> {
    check_exponent_pair(p, q)?;
    Ok(ImplicationAudit::from_reports([
        check_discrete(polygon, m, p, Sign::Plus)?,
        check_discrete(polygon, m, q, Sign::Plus)?,
        check_discrete(polygon, m, p, Sign::Minus)?,
        check_discrete(polygon, m, q, Sign::Minus)?,
    ]))
}

/// Observables of the convexity argument linking chord moments to the
/// kernel mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JensenAudit {
    pub kappa: f64,
    /// `F_κ(Γ) = ∫₀^{L/2} du ∫₀ᴸ ds [K₀(κ|Γ(s+u)-Γ(s)|) - K₀(κ|𝒞(s+u)-𝒞(s)|)]`.
    pub functional: f64,
    /// `∫₀^{L/2} [K₀(κ c¹(u)/L) - K₀((κL/π) sin(πu/L))] du`.
    pub jensen_bound: f64,
    /// Whether the mean chord is below the circle's at every grid `u`.
    pub mean_chord_dominated: bool,
    pub tolerance: f64,
    /// `F_κ/L ≥ bound`, and `bound ≥ 0` whenever the mean chord is dominated.
    pub consistent: bool,
}

/// Evaluate both sides of `F_κ(Γ)/L ≥ Jensen bound` on the sample grid.
///
/// The `u`-integrands extend to even `L`-periodic functions vanishing at
/// `u = 0`, so the trapezoid rule over the grid separations is spectrally
/// accurate for smooth loops.
pub fn jensen_chain_audit(curve: &ArcLengthCurve, kappa: f64) -> Result<JensenAudit> {
    validate_positive("kappa", kappa)?;
    if !curve.is_closed(CLOSURE_TOLERANCE) {
        return Err(Error::NotClosed {
            defect: curve.closure_defect(),
            limit: CLOSURE_TOLERANCE * curve.length(),
        });
    }
    let n = curve.grid_size();
    let l = curve.length();
    let h = curve.spacing();
    let half = n / 2;
    let mut functional = 0.0;
    let mut bound = 0.0;
    let mut dominated = true;
    for k in 1..=half {
        let u = k as f64 * h;
        let weight = if k == half { 0.5 * h } else { h };
        let circle = l / PI * (PI * u / l).sin();
        let k0_circle = k0_unchecked(kappa * circle);
        let mut inner = 0.0;
        let mut mean = 0.0;
        for i in 0..n {
            let d = curve.chord(i, k);
            if !(d > 0.0) {
                return Err(Error::SingularChord { index: i });
            }
            inner += k0_unchecked(kappa * d) - k0_circle;
            mean += d;
        }
        mean /= n as f64;
        functional += weight * inner * h;
        bound += weight * (k0_unchecked(kappa * mean) - k0_circle);
        if mean > circle * (1.0 + SMOOTH_TOLERANCE) {
            dominated = false;
        }
    }
    let tolerance = 1e-10 * (1.0 + l * l.ln().abs().max(1.0));
    let consistent = functional / l >= bound - tolerance && (!dominated || bound >= -tolerance);
    Ok(JensenAudit {
        kappa,
        functional,
        jensen_bound: bound,
        mean_chord_dominated: dominated,
        tolerance,
        consistent,
    })
}

/// One paperclip and its normalised half-length squared-chord moment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PaperclipSample {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub length: f64,
    /// `c²(L/2) / L³`.
    pub normalized_c2: f64,
    /// `c²(L/2) / L³ - 1/π²`; positive means the circle bound fails.
    pub excess: f64,
}

/// Paperclips with `a = 1`, shrinking return segment and turn radius.
pub fn default_paperclip_family() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &b in &[1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01] {
        for &r in &[0.05, 0.01, 0.005, 0.001] {
            out.push((1.0, b, r));
        }
    }
    out
}

/// `c²(L/2)/L³` for each `(a, b, r)`, using quasi-periodic chords.
pub fn paperclip_probe(family: &[(f64, f64, f64)], grid: usize) -> Result<Vec<PaperclipSample>> {
    family
        .iter()
        .map(|&(a, b, r)| {
            let clip = build_paperclip(a, b, r, grid)?;
            let l = clip.length();
            let c2 = chord_moment(&clip, 0.5 * l, 2.0)?.value / l.powi(3);
            Ok(PaperclipSample {
                a,
                b,
                r,
                length: l,
                normalized_c2: c2,
                excess: c2 - 1.0 / (PI * PI),
            })
        })
        .collect()
}
