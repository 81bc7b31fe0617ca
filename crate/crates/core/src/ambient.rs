//! Dense computations directly in `C^{|G|}`, bypassing every fiber map.
//! These are the reference oracles the fiberwise results are checked against.

use crate::context::FiberContext;
use crate::error::{Error, Result};
use crate::group::Side;
use crate::linalg::{self, CMatrix, RANK_TOL};
use crate::transforms::Signal;

/// Largest group order accepted by the dense oracles.
pub const MAX_ORACLE_ORDER: usize = 4096;

pub fn check_size(order: usize) -> Result<()> {
    if order > MAX_ORACLE_ORDER {
        Err(Error::SizeGuard {
            order,
            limit: MAX_ORACLE_ORDER,
        })
    } else {
        Ok(())
    }
}

/// `|G| x (|A| |Λ|)` matrix whose columns are `M_λ φ`, generator-major.
pub fn modulation_system(ctx: &FiberContext, generators: &[Signal]) -> Result<CMatrix> {
    let g = ctx.group();
    let lambda = ctx.lambda().elements();
    let mut m = CMatrix::zeros(g.order(), generators.len() * lambda.len());
    for (a, phi) in generators.iter().enumerate() {
        phi.expect_group(g)?;
        phi.expect_side(Side::Primal)?;
        for (l, &lam) in lambda.iter().enumerate() {
            let col = a * lambda.len() + l;
            for x in 0..g.order() {
                m[(x, col)] = phi.values()[x] * g.pairing_index(x, lam);
            }
        }
    }
    Ok(m)
}

/// Orthonormal basis (columns) of `span{ M_λ φ }`, computed by SVD.
pub fn span_basis(ctx: &FiberContext, generators: &[Signal]) -> Result<CMatrix> {
    Ok(linalg::svd_column_space(&modulation_system(ctx, generators)?, RANK_TOL))
}

/// Orthogonal projection onto `span{ M_λ φ }`.
pub fn span_projection(ctx: &FiberContext, generators: &[Signal]) -> Result<CMatrix> {
    let q = span_basis(ctx, generators)?;
    Ok(&q * q.adjoint())
}

pub fn span_dimension(ctx: &FiberContext, generators: &[Signal]) -> Result<usize> {
    Ok(span_basis(ctx, generators)?.ncols())
}
