//! Closed-form hyperbolic quantities attached to minimally intersecting
//! filling pairs: the perimeter of the regular right-angled `(8g-4)`-gon, the
//! separator length `λ(g)` and the derived bounds.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum HyperbolicError {
    #[error("genus {got} is below the minimum {min} for this quantity")]
    GenusTooSmall { got: u32, min: u32 },
}

fn need(g: u32, min: u32) -> Result<(), HyperbolicError> {
    if g < min {
        return Err(HyperbolicError::GenusTooSmall { got: g, min });
    }
    Ok(())
}

/// Side length of the regular right-angled `(8g-4)`-gon.
pub fn edge_length(g: u32) -> Result<f64, HyperbolicError> {
    need(g, 2)?;
    let n = (8 * g - 4) as f64;
    Ok((2.0 * ((2.0 * PI / n).cos() + 0.5)).acosh())
}

/// Perimeter `m_g` of the regular right-angled `(8g-4)`-gon.
pub fn m_g(g: u32) -> Result<f64, HyperbolicError> {
    Ok((8 * g - 4) as f64 * edge_length(g)?)
}

/// Least total length of a minimally intersecting filling pair, `m_g / 2`.
pub fn min_pair_length(g: u32) -> Result<f64, HyperbolicError> {
    Ok(m_g(g)? / 2.0)
}

/// `λ(g)`, with `cos(π/(2-4g))` evaluated as `cos(π/(4g-2))`.
pub fn lambda_g(g: u32) -> Result<f64, HyperbolicError> {
    need(g, 3)?;
    let c = (PI / (4 * g - 2) as f64).cos();
    let num = 1.0 + 2.0 * c;
    let den = (4.0 * c * (1.0 + c) + 1.0 / (num * num)).sqrt();
    Ok((num / den).acosh())
}

/// `arccosh(9/√73)`, the limit of `λ(g)`.
pub fn lambda_limit() -> f64 {
    (9.0 / 73f64.sqrt()).acosh()
}

/// Lower bound on the injectivity radius, `arccosh(9/√73) / 2`.
pub fn inj_radius_lower() -> f64 {
    lambda_limit() / 2.0
}

/// Most minimal-length pairs that can share one hyperbolic surface, `42(2g-2)`.
pub fn max_coincident(g: u32) -> Result<u64, HyperbolicError> {
    need(g, 2)?;
    Ok(42 * (2 * g as u64 - 2))
}

/// Area of the regular right-angled `n`-gon by triangle decomposition.
pub fn right_angled_polygon_area(n: u32) -> f64 {
    (n as f64 - 2.0) * PI - n as f64 * PI / 2.0
}

/// Side length from the half-angle identity `cosh(ℓ/2) = √2 cos(π/n)`.
pub fn edge_length_half_angle(n: u32) -> f64 {
    2.0 * (2f64.sqrt() * (PI / n as f64).cos()).acosh()
}

/// Decimal commonly quoted for the injectivity radius bound.
pub const QUOTED_INJ_RADIUS: f64 = 0.3253;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjRadiusNote {
    pub quoted: f64,
    pub half_limit: f64,
    pub full_limit: f64,
    /// Which of the two values the quoted decimal agrees with to four places.
    pub quoted_matches: &'static str,
    pub message: String,
}

pub fn inj_radius_note() -> InjRadiusNote {
    let half = inj_radius_lower();
    let full = lambda_limit();
    let matches = if (QUOTED_INJ_RADIUS - full).abs() < 5e-4 {
        "full_limit"
    } else if (QUOTED_INJ_RADIUS - half).abs() < 5e-4 {
        "half_limit"
    } else {
        "neither"
    };
    InjRadiusNote {
        quoted: QUOTED_INJ_RADIUS,
        half_limit: half,
        full_limit: full,
        quoted_matches: matches,
        message: format!(
            "quoted {QUOTED_INJ_RADIUS} agrees with arccosh(9/sqrt(73)) = {full:.6}, not with its half {half:.6}; the bound reported is the half"
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperbolicReport {
    pub genus: u32,
    pub m_g: f64,
    pub edge_length: f64,
    pub min_pair_length: f64,
    /// Absent for `g < 3`.
    pub lambda_g: Option<f64>,
    pub lambda_limit: f64,
    pub inj_radius_lower: f64,
    pub max_coincident: u64,
    pub area: f64,
    pub inj_radius_note: InjRadiusNote,
}

impl HyperbolicReport {
    pub fn new(g: u32) -> Result<Self, HyperbolicError> {
        Ok(HyperbolicReport {
            genus: g,
            m_g: m_g(g)?,
            edge_length: edge_length(g)?,
            min_pair_length: min_pair_length(g)?,
            lambda_g: lambda_g(g).ok(),
            lambda_limit: lambda_limit(),
            inj_radius_lower: inj_radius_lower(),
            max_coincident: max_coincident(g)?,
            area: right_angled_polygon_area(8 * g - 4),
            inj_radius_note: inj_radius_note(),
        })
    }
}
