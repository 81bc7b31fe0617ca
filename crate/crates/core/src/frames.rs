//! Frame and Riesz bounds of modulation systems `E^Λ(A) = { M_λ φ }`.
//!
//! The frame operator is `S f = w sum_{λ, φ} <f, M_λ φ> M_λ φ`. With the
//! normalized measure on `Λ` (`w = 1/|Λ|`) its spectrum on `W = span E^Λ(A)`
//! is the union over `x in Π` of the nonzero spectra of the fiber frame
//! operators `sum_φ Z̃φ(x) <·, Z̃φ(x)>`. Counting measure (`w = 1`) scales every
//! bound by `|Λ|`.

use serde::{Deserialize, Serialize};

use crate::ambient;
use crate::context::FiberContext;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, RANK_TOL};
use crate::transforms::{mod_zak, Signal};

/// Tolerance for declaring bounds equal to 1.
pub const PARSEVAL_TOL: f64 = 1e-8;

/// Measure placed on `Λ` in the frame operator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Total mass one: weight `1/|Λ|` per point.
    #[default]
    Normalized,
    /// Weight one per point.
    Counting,
}

impl Measure {
    pub fn weight(self, lambda_order: usize) -> f64 {
        match self {
            Measure::Normalized => 1.0 / lambda_order as f64,
            Measure::Counting => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Normalized => "normalized",
            Measure::Counting => "counting",
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "normalized" => Ok(Measure::Normalized),
            "counting" => Ok(Measure::Counting),
            other => Err(format!("unknown measure `{other}` (expected normalized|counting)")),
        }
    }
}

/// Bounds of one fiber with `J(x) != {0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberBounds {
    /// Group index of the `Π` representative.
    pub x: usize,
    pub lower: f64,
    pub upper: f64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameReport {
    /// Empty for the ambient oracle.
    pub per_fiber: Vec<FiberBounds>,
    pub lower: f64,
    pub upper: f64,
    pub is_frame: bool,
    pub is_parseval: bool,
    pub is_riesz: bool,
    pub measure: Measure,
}

impl FrameReport {
    fn assemble(per_fiber: Vec<FiberBounds>, lower: f64, upper: f64, is_riesz: bool, measure: Measure) -> Self {
        let is_frame = lower > 0.0;
        Self {
            per_fiber,
            lower,
            upper,
            is_frame,
            is_parseval: is_frame && (lower - 1.0).abs() < PARSEVAL_TOL && (upper - 1.0).abs() < PARSEVAL_TOL,
            is_riesz,
            measure,
        }
    }
}

/// Per-fiber rank diagnostics for the Riesz test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberRank {
    pub x: usize,
    pub rank: usize,
    pub smallest_singular_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RieszDiagnostics {
    pub is_riesz: bool,
    pub generators: usize,
    pub per_fiber: Vec<FiberRank>,
}

/// `|D| x |A|` generator matrices `[Z̃φ_1(x) ... Z̃φ_m(x)]` for every fiber.
fn fiber_generator_matrices(ctx: &FiberContext, generators: &[Signal]) -> Result<Vec<CMatrix>> {
    let fibers = generators.iter().map(|g| mod_zak(g, ctx)).collect::<Result<Vec<_>>>()?;
    Ok((0..ctx.num_fibers())
        .map(|i| CMatrix::from_fn(ctx.fiber_len(), generators.len(), |r, c| fibers[c].row(i)[r]))
        .collect())
}

struct FiberSpectra {
    /// Singular values per fiber, decreasing.
    singular: Vec<Vec<f64>>,
    cutoff: f64,
}

fn fiber_spectra(ctx: &FiberContext, generators: &[Signal]) -> Result<FiberSpectra> {
    let singular: Vec<Vec<f64>> = fiber_generator_matrices(ctx, generators)?
        .iter()
        .map(linalg::singular_values)
        .collect();
    let largest = singular.iter().filter_map(|s| s.first().copied()).fold(0.0, f64::max);
    Ok(FiberSpectra {
        singular,
        cutoff: RANK_TOL * largest,
    })
}

fn riesz_from_spectra(ctx: &FiberContext, spectra: &FiberSpectra, generators: usize) -> RieszDiagnostics {
    let per_fiber: Vec<FiberRank> = spectra
        .singular
        .iter()
        .zip(ctx.pi().representatives())
        .map(|(s, &x)| FiberRank {
            x,
            rank: s.iter().filter(|&&v| v > spectra.cutoff).count(),
            // fewer rows than generators means a zero singular value is implicit
            smallest_singular_value: if s.len() < generators {
                0.0
            } else {
                s.last().copied().unwrap_or(0.0)
            },
        })
        .collect();
    let is_riesz = per_fiber.iter().all(|f| f.rank == generators);
    RieszDiagnostics {
        is_riesz,
        generators,
        per_fiber,
    }
}

/// Frame bounds from the fiber generator matrices: at each `x` with
/// `J(x) != {0}`, the extreme nonzero squared singular values.
pub fn fiber_frame_bounds(ctx: &FiberContext, generators: &[Signal], measure: Measure) -> Result<FrameReport> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let spectra = fiber_spectra(ctx, generators)?;
    let scale = measure.weight(ctx.lambda().order()) * ctx.lambda().order() as f64;
    let mut per_fiber = Vec::new();
    for (s, &x) in spectra.singular.iter().zip(ctx.pi().representatives()) {
        let nonzero: Vec<f64> = s.iter().copied().filter(|&v| v > spectra.cutoff).collect();
        if let (Some(&hi), Some(&lo)) = (nonzero.first(), nonzero.last()) {
            per_fiber.push(FiberBounds {
                x,
                lower: lo * lo * scale,
                upper: hi * hi * scale,
                dim: nonzero.len(),
            });
        }
    }
    let (lower, upper) = if per_fiber.is_empty() {
        (0.0, 0.0)
    } else {
        (
            per_fiber.iter().map(|f| f.lower).fold(f64::INFINITY, f64::min),
            per_fiber.iter().map(|f| f.upper).fold(0.0, f64::max),
        )
    };
    let is_riesz = riesz_from_spectra(ctx, &spectra, generators.len()).is_riesz;
    Ok(FrameReport::assemble(per_fiber, lower, upper, is_riesz, measure))
}

/// Oracle: spectrum of the ambient frame operator on `W`, with no fiber map
/// involved. Riesz means the `|A| |Λ|` system vectors are linearly independent.
pub fn brute_force_frame_bounds(ctx: &FiberContext, generators: &[Signal], measure: Measure) -> Result<FrameReport> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    ambient::check_size(ctx.group().order())?;
    let system = ambient::modulation_system(ctx, generators)?;
    let w = measure.weight(ctx.lambda().order());
    // nonzero eigenvalues of S = w M M^* are w * sigma_i(M)^2
    let sigma = linalg::singular_values(&system);
    let cutoff = RANK_TOL * sigma.first().copied().unwrap_or(0.0);
    let nonzero: Vec<f64> = sigma.iter().filter(|&&s| s > cutoff).map(|s| w * s * s).collect();
    let (lower, upper) = match (nonzero.first(), nonzero.last()) {
        (Some(&hi), Some(&lo)) => (lo, hi),
        _ => (0.0, 0.0),
    };
    let is_riesz = nonzero.len() == system.ncols();
    Ok(FrameReport::assemble(Vec::new(), lower, upper, is_riesz, measure))
}

/// Riesz-basis test: at every `x in Π` the fiber vectors `{Z̃φ(x)}` must be
/// linearly independent (smallest singular value above the shared cutoff).
/// Fibers where some generators vanish therefore fail, matching ambient
/// dependence of `{ M_λ φ }`.
pub fn is_riesz_basis(ctx: &FiberContext, generators: &[Signal]) -> Result<RieszDiagnostics> {
    let spectra = fiber_spectra(ctx, generators)?;
    Ok(riesz_from_spectra(ctx, &spectra, generators.len()))
}
