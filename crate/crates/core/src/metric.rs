//! The modulation metric `θ(V, W) = max_x || P_{J_V}(x) - P_{J_W}(x) ||` on
//! modulation-invariant spaces sharing a fiber context, and constructive
//! probes of its geometry (nested chains, dimension rigidity, limits).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fiber::{ModInvariantSpace, RangeFunction};
use crate::linalg::{self, CMatrix};

/// Per-fiber distances within this of 0 or 1 are reported as exactly 0 or 1.
pub const THETA_ZERO_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    pub theta: f64,
    /// `|| P_V(x) - P_W(x) ||` per fiber, in `Π` order.
    pub per_fiber: Vec<f64>,
    /// Group index of the first fiber attaining `theta`.
    pub argmax_x: usize,
}

fn fiber_distance(a: &RangeFunction, b: &RangeFunction, fiber: usize) -> f64 {
    let (pa, pb) = (a.projection(fiber), b.projection(fiber));
    // both orientations, so the result is symmetric bit for bit
    let d = linalg::spectral_norm(&(&pa - &pb)).max(linalg::spectral_norm(&(pb - pa)));
    if d < THETA_ZERO_TOL {
        0.0
    } else if d > 1.0 - THETA_ZERO_TOL {
        // unequal fiber ranks force exactly 1; rounding can land just below
        1.0
    } else {
        d
    }
}

pub fn mod_metric(v: &ModInvariantSpace, w: &ModInvariantSpace) -> Result<MetricReport> {
    v.context().ensure_same(w.context())?;
    let (a, b) = (v.range(), w.range());
    let per_fiber: Vec<f64> = (0..a.num_fibers()).map(|i| fiber_distance(a, b, i)).collect();
    let mut arg = 0;
    for (i, &d) in per_fiber.iter().enumerate() {
        if d > per_fiber[arg] {
            arg = i;
        }
    }
    Ok(MetricReport {
        theta: per_fiber[arg],
        argmax_x: a.pi()[arg],
        per_fiber,
    })
}

pub fn theta(v: &ModInvariantSpace, w: &ModInvariantSpace) -> Result<f64> {
    Ok(mod_metric(v, w)?.theta)
}

/// `θ(V, W)` for `V ⊆ W`; strict fiber inclusion anywhere forces the value 1.
pub fn nested_distance_check(v: &ModInvariantSpace, w: &ModInvariantSpace) -> Result<f64> {
    v.context().ensure_same(w.context())?;
    for phi in v.generators() {
        if !w.contains(phi)? {
            return Err(Error::Precondition("first space is not contained in the second".into()));
        }
    }
    theta(v, w)
}

/// True iff `θ(V, W) < 1 - 1e-9` implies `dim J_V(x) = dim J_W(x)` for all `x`.
pub fn dimension_rigidity_check(v: &ModInvariantSpace, w: &ModInvariantSpace) -> Result<bool> {
    let t = theta(v, w)?;
    Ok(t >= 1.0 - 1e-9 || v.dims() == w.dims())
}

/// `max_x dim J(x)`, the length of the principal decomposition of `W`.
pub fn minimal_generator_count(w: &ModInvariantSpace) -> usize {
    w.range().max_dim()
}

#[derive(Clone, Debug)]
pub struct CauchyLimit {
    pub space: ModInvariantSpace,
    /// Index of the first sequence element in the averaged tail.
    pub tail_start: usize,
    /// `θ(seq_n, limit)` for each tail element.
    pub tail_distances: Vec<f64>,
}

/// Limit of a sequence whose consecutive `θ` distances end below `tol`.
///
/// The tail is the longest suffix with pairwise distances below `tol / 2`.
/// Its fiber projections are averaged and each average is rounded to the
/// nearest orthogonal projection (eigenvalues snapped to {0, 1} at 1/2), so
/// every tail element lies within `tol` of the limit.
pub fn cauchy_limit(seq: &[ModInvariantSpace], tol: f64) -> Result<CauchyLimit> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let last = seq
        .last()
        .ok_or_else(|| Error::Precondition("sequence is empty".into()))?;
    let ctx = last.context();
    for s in seq {
        ctx.ensure_same(s.context())?;
    }
    let n = seq.len();
    if n >= 2 {
        let d = theta(&seq[n - 2], &seq[n - 1])?;
        if d >= tol {
            return Err(Error::NotCauchy { tol, last: d });
        }
    }

    let mut start = n - 1;
    'grow: while start > 0 {
        let cand = &seq[start - 1];
        for s in &seq[start..] {
            if theta(cand, s)? >= tol / 2.0 {
                break 'grow;
            }
        }
        start -= 1;
    }
    let tail = &seq[start..];

    let dim = ctx.fiber_len();
    let weight = Complex64::new(1.0 / tail.len() as f64, 0.0);
    let bases = (0..ctx.num_fibers())
        .map(|i| {
            let mut avg = CMatrix::zeros(dim, dim);
            for s in tail {
                avg += s.range().projection(i);
            }
            avg *= weight;
            // symmetrize against rounding before the Hermitian solver
            let avg = (&avg + avg.adjoint()) * Complex64::new(0.5, 0.0);
            let (values, vectors) = linalg::hermitian_eigen(&avg);
            let keep: Vec<(f64, Vec<Complex64>)> = values
                .iter()
                .enumerate()
                .filter(|(_, &ev)| ev > 0.5)
                .map(|(k, &ev)| (ev, vectors.column(k).iter().copied().collect()))
                .collect();
            let vs: Vec<Vec<Complex64>> = keep.into_iter().map(|(_, v)| v).collect();
            linalg::orthonormal_basis(&vs, 0.5)
        })
        .collect();
    let range = RangeFunction::from_bases(ctx, bases)?;
    let space = ModInvariantSpace::from_range_function(ctx, &range)?;
    let tail_distances = tail.iter().map(|s| theta(s, &space)).collect::<Result<_>>()?;
    Ok(CauchyLimit {
        space,
        tail_start: start,
        tail_distances,
    })
}
