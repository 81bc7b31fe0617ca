//! Orthogonal splitting of a modulation-invariant space into principal spaces
//! with Parseval generators.
//!
//! Given orthonormal fiber bases `e_1(x), ..., e_{dim J(x)}(x)`, generator
//! `φ_n` is the signal with `Z̃φ_n(x) = e_n(x)` when `n <= dim J(x)` and zero
//! otherwise. Distinct `φ_n` have pointwise orthogonal fibers, so their
//! principal spaces are orthogonal, and unit fiber norms make each
//! `{ M_λ φ_n }` a Parseval frame under the normalized measure.

use crate::ambient;
use crate::error::Result;
use crate::fiber::{graded_basis_signals, ModInvariantSpace};
use crate::frames::{brute_force_frame_bounds, Measure};
use crate::linalg::{self, CMatrix};
use crate::transforms::{mod_zak, Signal};

#[derive(Clone, Debug)]
pub struct PrincipalDecomposition {
    /// `φ_1, ..., φ_N`, ordered by decreasing number of supporting fibers.
    pub generators: Vec<Signal>,
    /// For each generator, the group indices `x in Π` with `Z̃φ_n(x) != 0`.
    pub supports: Vec<Vec<usize>>,
}

impl PrincipalDecomposition {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

pub fn principal_decompose(space: &ModInvariantSpace) -> Result<PrincipalDecomposition> {
    let ctx = space.context();
    let range = space.range();
    let generators = graded_basis_signals(ctx, range)?;
    let supports = (0..generators.len())
        .map(|n| {
            (0..range.num_fibers())
                .filter(|&i| range.dim(i) > n)
                .map(|i| range.pi()[i])
                .collect()
        })
        .collect();
    Ok(PrincipalDecomposition { generators, supports })
}

/// Residuals of the decomposition invariants, all measured ambiently.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionReport {
    /// `max_{m != n} || P_m P_n ||`.
    pub orthogonality: f64,
    /// `sum_n dim M^Λ(φ_n)`.
    pub dimension_sum: usize,
    /// `dim W`.
    pub dimension: usize,
    /// `max_n max(|A_n - 1|, |B_n - 1|)` from the ambient frame oracle.
    pub parseval: f64,
    /// `max || f - sum_n P_n f || / ||f||` over the generators of `W`.
    pub reconstruction: f64,
    /// `max_n` membership residual of `φ_n` in `W`, relative to `||φ_n||`.
    pub membership: f64,
    /// Largest fiber inner product `|<Z̃φ_m(x), Z̃φ_n(x)>|`, `m != n`.
    pub fiber_orthogonality: f64,
}

impl DecompositionReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.orthogonality < tol
            && self.dimension_sum == self.dimension
            && self.parseval < tol
            && self.reconstruction < tol
            && self.membership < tol
            && self.fiber_orthogonality < tol
    }
}

pub fn verify_decomposition(space: &ModInvariantSpace, dec: &PrincipalDecomposition) -> Result<DecompositionReport> {
    let ctx = space.context();
    ambient::check_size(ctx.group().order())?;

    let bases: Vec<CMatrix> = dec
        .generators
        .iter()
        .map(|phi| ambient::span_basis(ctx, std::slice::from_ref(phi)))
        .collect::<Result<_>>()?;
    let mut orthogonality: f64 = 0.0;
    for (m, qm) in bases.iter().enumerate() {
        for qn in &bases[m + 1..] {
            orthogonality = orthogonality.max(linalg::spectral_norm(&(qm.adjoint() * qn)));
        }
    }
    let dimension_sum = bases.iter().map(CMatrix::ncols).sum();
    let dimension = ambient::span_dimension(ctx, space.generators())?;

    let mut parseval: f64 = 0.0;
    for phi in &dec.generators {
        let r = brute_force_frame_bounds(ctx, std::slice::from_ref(phi), Measure::Normalized)?;
        parseval = parseval.max((r.lower - 1.0).abs()).max((r.upper - 1.0).abs());
    }

    let mut reconstruction: f64 = 0.0;
    for f in space.generators() {
        let norm = f.norm();
        if norm == 0.0 {
            continue;
        }
        let mut sum = Signal::zeros(ctx.group(), f.side());
        for q in &bases {
            let coeffs = q.adjoint() * CMatrix::from_column_slice(f.len(), 1, f.values());
            let p = q * coeffs;
            sum = sum.add(&Signal::new(ctx.group(), f.side(), p.iter().copied().collect())?);
        }
        reconstruction = reconstruction.max(sum.distance(f) / norm);
    }

    let mut membership: f64 = 0.0;
    for phi in &dec.generators {
        let n = phi.norm();
        if n > 0.0 {
            membership = membership.max(space.membership(phi)?.max_residual / n);
        }
    }

    let fibers = dec
        .generators
        .iter()
        .map(|phi| mod_zak(phi, ctx))
        .collect::<Result<Vec<_>>>()?;
    let mut fiber_orthogonality: f64 = 0.0;
    for (m, a) in fibers.iter().enumerate() {
        for b in &fibers[m + 1..] {
            for i in 0..a.rows() {
                fiber_orthogonality = fiber_orthogonality.max(linalg::inner(a.row(i), b.row(i)).norm());
            }
        }
    }

    Ok(DecompositionReport {
        orthogonality,
        dimension_sum,
        dimension,
        parseval,
        reconstruction,
        membership,
        fiber_orthogonality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::FiberContext;
    use crate::group::{GroupSpec, Side};
    use num_complex::Complex64;

    fn z4_ctx() -> FiberContext {
        FiberContext::from_generators(&GroupSpec::cyclic(4).unwrap(), &[2]).unwrap()
    }

    fn delta(ctx: &FiberContext, i: usize) -> Signal {
        Signal::delta(ctx.group(), Side::Primal, i)
    }

    #[test]
    fn two_deltas_recover_deltas() {
        let ctx = z4_ctx();
        let w = ModInvariantSpace::generated(&ctx, vec![delta(&ctx, 0), delta(&ctx, 2)]).unwrap();
        let dec = principal_decompose(&w).unwrap();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec.supports, vec![vec![0], vec![0]]);
        // generators equal delta_0 and delta_2 up to a unimodular factor
        for (phi, target) in dec.generators.iter().zip([0usize, 2]) {
            let overlap = phi.inner(&delta(&ctx, target)).norm();
            assert!((overlap - 1.0).abs() < 1e-12);
            assert!((phi.norm() - 1.0).abs() < 1e-12);
        }
        let report = verify_decomposition(&w, &dec).unwrap();
        assert!(report.passes(1e-10), "{report:?}");
    }

    #[test]
    fn full_space_needs_two_generators() {
        let g = GroupSpec::cyclic(4).unwrap();
        let ctx = FiberContext::from_generators(&g, &[2]).unwrap();
        let all: Vec<Signal> = (0..4).map(|i| delta(&ctx, i)).collect();
        let w = ModInvariantSpace::generated(&ctx, all).unwrap();
        assert_eq!(w.dims(), vec![2, 2]);
        let dec = principal_decompose(&w).unwrap();
        assert_eq!(dec.len(), 2);
        assert!(verify_decomposition(&w, &dec).unwrap().passes(1e-10));
    }

    #[test]
    fn principal_space_stays_principal() {
        let g = GroupSpec::new(vec![2, 3]).unwrap();
        let ctx = FiberContext::from_generators(&g, &[g.index_of(&[1, 1]).unwrap()]).unwrap();
        let phi = Signal::from_fn(&g, Side::Primal, |i| Complex64::new(1.0 + i as f64, -0.5 * i as f64));
        let w = ModInvariantSpace::generated(&ctx, vec![phi.clone()]).unwrap();
        let dec = principal_decompose(&w).unwrap();
        assert_eq!(dec.len(), 1);
        // same principal space, fiber-normalized generator
        let v = ModInvariantSpace::generated(&ctx, dec.generators.clone()).unwrap();
        assert!(v.same_range(&w, 1e-10).unwrap());
        let zn = mod_zak(&dec.generators[0], &ctx).unwrap();
        for i in 0..zn.rows() {
            let n = linalg::norm(zn.row(i));
            assert!(n.abs() < 1e-12 || (n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_space_is_vacuous() {
        let ctx = z4_ctx();
        let w = ModInvariantSpace::zero(&ctx);
        let dec = principal_decompose(&w).unwrap();
        assert!(dec.is_empty());
        let r = verify_decomposition(&w, &dec).unwrap();
        assert!(r.passes(1e-10));
    }

    #[test]
    fn perturbation_is_detected() {
        let ctx = z4_ctx();
        let w = ModInvariantSpace::generated(&ctx, vec![delta(&ctx, 0), delta(&ctx, 1)]).unwrap();
        let mut dec = principal_decompose(&w).unwrap();
        dec.generators[0] = dec.generators[0].scale(Complex64::new(1.0 + 1e-3, 0.0));
        let r = verify_decomposition(&w, &dec).unwrap();
        assert!(r.parseval > 1e-4 && r.parseval < 1e-2, "{r:?}");
        assert!(!r.passes(1e-10));
    }
}
