//! Range functions and modulation-invariant spaces.
//!
//! A `Λ`-modulation-invariant space `W ⊆ L²(G)` is determined by the subspaces
//! `J(x) = span{ Z̃φ(x) : φ in A } ⊆ C^{|D|}`, one per `x in Π`, and
//! `W = { f : Z̃f(x) in J(x) for every x }`.

use num_complex::Complex64;

use crate::context::FiberContext;
use crate::error::{Error, Result};
use crate::group::{Side, Subgroup};
use crate::linalg::{self, CMatrix, RANK_TOL};
use crate::transforms::{fiberization, inverse_mod_zak, mod_zak, FiberMatrix, Signal};

/// Relative tolerance for membership decisions.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Per-fiber orthonormal bases of `J(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeFunction {
    pi: Vec<usize>,
    fiber_len: usize,
    bases: Vec<Vec<Vec<Complex64>>>,
}

impl RangeFunction {
    pub fn zero(ctx: &FiberContext) -> Self {
        Self {
            pi: ctx.pi().representatives().to_vec(),
            fiber_len: ctx.fiber_len(),
            bases: vec![Vec::new(); ctx.num_fibers()],
        }
    }

    /// Wraps explicit bases. Each basis must be column-orthonormal.
    pub fn from_bases(ctx: &FiberContext, bases: Vec<Vec<Vec<Complex64>>>) -> Result<Self> {
        if bases.len() != ctx.num_fibers() {
            return Err(Error::ShapeMismatch {
                expected: (ctx.num_fibers(), ctx.fiber_len()),
                found: (bases.len(), ctx.fiber_len()),
            });
        }
        for b in &bases {
            if b.len() > ctx.fiber_len() || b.iter().any(|v| v.len() != ctx.fiber_len()) {
                return Err(Error::ShapeMismatch {
                    expected: (ctx.num_fibers(), ctx.fiber_len()),
                    found: (bases.len(), b.first().map_or(0, Vec::len)),
                });
            }
        }
        let rf = Self {
            pi: ctx.pi().representatives().to_vec(),
            fiber_len: ctx.fiber_len(),
            bases,
        };
        if rf.max_gram_residual() > 1e-10 {
            return Err(Error::Precondition("fiber bases are not orthonormal".into()));
        }
        Ok(rf)
    }

    /// `Π` representatives, in fiber order.
    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn fiber_len(&self) -> usize {
        self.fiber_len
    }

    pub fn num_fibers(&self) -> usize {
        self.bases.len()
    }

    pub fn basis(&self, fiber: usize) -> &[Vec<Complex64>] {
        &self.bases[fiber]
    }

    pub fn bases(&self) -> &[Vec<Vec<Complex64>>] {
        &self.bases
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn dim(&self, fiber: usize) -> usize {
        self.bases[fiber].len()
    }

    pub fn total_dim(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    pub fn max_dim(&self) -> usize {
        self.bases.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `P_J(x)` as a dense `|D| x |D|` matrix.
    pub fn projection(&self, fiber: usize) -> CMatrix {
        linalg::projection_matrix(self.fiber_len, &self.bases[fiber])
    }

    /// Largest `|| Q^* Q - I ||_F` over all fibers.
    pub fn max_gram_residual(&self) -> f64 {
        self.bases
            .iter()
            .map(|b| {
                let q = linalg::columns_to_matrix(self.fiber_len, b);
                let gram = q.adjoint() * &q;
                (gram - CMatrix::identity(b.len(), b.len())).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Fibers `Z̃φ(x)` of each generator, plus the global rank cutoff.
fn generator_fibers(ctx: &FiberContext, generators: &[Signal]) -> Result<(Vec<FiberMatrix>, f64)> {
    let fibers = generators.iter().map(|g| mod_zak(g, ctx)).collect::<Result<Vec<_>>>()?;
    let largest = fibers
        .iter()
        .flat_map(|m| (0..m.rows()).map(move |i| linalg::norm(m.row(i))))
        .fold(0.0, f64::max);
    Ok((fibers, RANK_TOL * largest))
}

/// `J(x) = span{ Z̃φ(x) : φ in A }` via modified Gram-Schmidt over generators in
/// list order, with cutoff `1e-9 * max_{φ,x} ||Z̃φ(x)||`.
pub fn range_function_from_generators(ctx: &FiberContext, generators: &[Signal]) -> Result<RangeFunction> {
    let (fibers, tol) = generator_fibers(ctx, generators)?;
    let bases = (0..ctx.num_fibers())
        .map(|i| {
            let vs: Vec<Vec<Complex64>> = fibers.iter().map(|m| m.row(i).to_vec()).collect();
            linalg::orthonormal_basis(&vs, tol)
        })
        .collect();
    Ok(RangeFunction {
        pi: ctx.pi().representatives().to_vec(),
        fiber_len: ctx.fiber_len(),
        bases,
    })
}

/// Range function built from the fiberization map `f -> { (F_Ĝ F_G f)(x + k) }_{k in Λ*}`
/// instead of the modulation Zak transform, with the same Gram-Schmidt rule.
pub fn range_function_via_fiberization(ctx: &FiberContext, generators: &[Signal]) -> Result<RangeFunction> {
    let fibers = generators
        .iter()
        .map(|g| fiberization(g, ctx))
        .collect::<Result<Vec<_>>>()?;
    let largest = fibers
        .iter()
        .flat_map(|m| (0..m.rows()).map(move |i| linalg::norm(m.row(i))))
        .fold(0.0, f64::max);
    let bases = (0..ctx.num_fibers())
        .map(|i| {
            let vs: Vec<Vec<Complex64>> = fibers.iter().map(|m| m.row(i).to_vec()).collect();
            linalg::orthonormal_basis(&vs, RANK_TOL * largest)
        })
        .collect();
    Ok(RangeFunction {
        pi: ctx.pi().representatives().to_vec(),
        fiber_len: ctx.lambda_star().order(),
        bases,
    })
}

/// Membership of `f` against a range function built by
/// [`range_function_via_fiberization`].
pub fn membership_via_fiberization(ctx: &FiberContext, range: &RangeFunction, f: &Signal) -> Result<Membership> {
    let t = fiberization(f, ctx)?;
    let max_residual = (0..t.rows())
        .map(|i| linalg::residual(range.basis(i), t.row(i)))
        .fold(0.0, f64::max);
    Ok(Membership {
        member: max_residual <= MEMBERSHIP_TOL * f.norm(),
        max_residual,
    })
}

/// Outcome of a membership test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// `max_x || (I - P_J(x)) Z̃f(x) ||`.
    pub max_residual: f64,
}

/// `W = M^Λ(A)`, the closed span of `{ M_λ φ : φ in A, λ in Λ }`.
#[derive(Clone, Debug)]
pub struct ModInvariantSpace {
    ctx: FiberContext,
    generators: Vec<Signal>,
    range: RangeFunction,
}

impl ModInvariantSpace {
    pub fn generated(ctx: &FiberContext, generators: Vec<Signal>) -> Result<Self> {
        let range = range_function_from_generators(ctx, &generators)?;
        Ok(Self {
            ctx: ctx.clone(),
            generators,
            range,
        })
    }

    pub fn zero(ctx: &FiberContext) -> Self {
        Self {
            ctx: ctx.clone(),
            generators: Vec::new(),
            range: RangeFunction::zero(ctx),
        }
    }

    /// The space whose range function is `range`. Generators are the graded
    /// fiber-basis signals, so `M^Λ(generators)` reproduces `range`.
    pub fn from_range_function(ctx: &FiberContext, range: &RangeFunction) -> Result<Self> {
        let generators = graded_basis_signals(ctx, range)?;
        Self::generated(ctx, generators)
    }

    /// `{ f : supp f ⊆ support }`. Requires `Λ = Ĝ`.
    pub fn from_support(ctx: &FiberContext, support: &[usize]) -> Result<Self> {
        if !ctx.is_full_dual() {
            return Err(Error::Precondition(
                "support spaces require the modulation subgroup to be the whole dual group".into(),
            ));
        }
        let group = ctx.group();
        let mut seen = vec![false; group.order()];
        let mut generators = Vec::new();
        for &x in support {
            if x >= group.order() {
                return Err(Error::InvalidElement {
                    residues: vec![x],
                    factors: group.factors().to_vec(),
                });
            }
            if !std::mem::replace(&mut seen[x], true) {
                generators.push(Signal::delta(group, Side::Primal, x));
            }
        }
        Self::generated(ctx, generators)
    }

    pub fn context(&self) -> &FiberContext {
        &self.ctx
    }

    pub fn generators(&self) -> &[Signal] {
        &self.generators
    }

    pub fn range(&self) -> &RangeFunction {
        &self.range
    }

    pub fn dims(&self) -> Vec<usize> {
        self.range.dims()
    }

    /// `dim W = sum_x dim J(x)`.
    pub fn dimension(&self) -> usize {
        self.range.total_dim()
    }

    pub fn membership(&self, f: &Signal) -> Result<Membership> {
        let z = mod_zak(f, &self.ctx)?;
        let max_residual = (0..z.rows())
            .map(|i| linalg::residual(self.range.basis(i), z.row(i)))
            .fold(0.0, f64::max);
        Ok(Membership {
            member: max_residual <= MEMBERSHIP_TOL * f.norm(),
            max_residual,
        })
    }

    pub fn contains(&self, f: &Signal) -> Result<bool> {
        Ok(self.membership(f)?.member)
    }

    /// Orthogonal projection onto `W`, applied fiber by fiber.
    pub fn project(&self, f: &Signal) -> Result<Signal> {
        let z = mod_zak(f, &self.ctx)?;
        let mut out = FiberMatrix::zeros(&self.ctx);
        for i in 0..z.rows() {
            let p = linalg::project(self.range.basis(i), z.row(i));
            out.row_mut(i).copy_from_slice(&p);
        }
        inverse_mod_zak(&out, &self.ctx)
    }

    /// The projection onto `W` as a dense `|G| x |G|` matrix (column `y` is the
    /// projection of `δ_y`).
    pub fn projection_operator(&self) -> Result<CMatrix> {
        let g = self.ctx.group();
        let n = g.order();
        let mut m = CMatrix::zeros(n, n);
        for y in 0..n {
            let p = self.project(&Signal::delta(g, Side::Primal, y))?;
            for (x, v) in p.values().iter().enumerate() {
                m[(x, y)] = *v;
            }
        }
        Ok(m)
    }

    /// Range functions agree fiber by fiber: equal dimensions and projection
    /// difference below `tol` in operator norm.
    pub fn same_range(&self, other: &ModInvariantSpace, tol: f64) -> Result<bool> {
        self.ctx.ensure_same(&other.ctx)?;
        Ok((0..self.range.num_fibers()).all(|i| {
            self.range.dim(i) == other.range.dim(i)
                && linalg::spectral_norm(&(self.range.projection(i) - other.range.projection(i))) < tol
        }))
    }
}

/// For each `n < max_x dim J(x)`, the signal whose fiber at `x` is the `n`-th
/// basis vector of `J(x)` (or zero when `dim J(x) <= n`).
pub(crate) fn graded_basis_signals(ctx: &FiberContext, range: &RangeFunction) -> Result<Vec<Signal>> {
    (0..range.max_dim())
        .map(|n| {
            let mut m = FiberMatrix::zeros(ctx);
            for i in 0..range.num_fibers() {
                if let Some(e) = range.basis(i).get(n) {
                    m.row_mut(i).copy_from_slice(e);
                }
            }
            inverse_mod_zak(&m, ctx)
        })
        .collect()
}

/// Ambient test of `M_λ span(S) ⊆ span(S)` for all `λ` in `lambda`, with
/// relative tolerance `1e-9`.
pub fn is_modulation_invariant(lambda: &Subgroup, spanning: &[Signal]) -> Result<bool> {
    if lambda.side() != Side::Dual {
        return Err(Error::SideMismatch {
            expected: Side::Dual,
            found: lambda.side(),
        });
    }
    for s in spanning {
        s.expect_group(lambda.group())?;
        s.expect_side(Side::Primal)?;
    }
    let scale = spanning.iter().map(Signal::norm).fold(0.0, f64::max);
    let tol = RANK_TOL * scale;
    let vectors: Vec<Vec<Complex64>> = spanning.iter().map(|s| s.values().to_vec()).collect();
    let basis = linalg::orthonormal_basis(&vectors, tol);
    for s in spanning {
        for &l in lambda.elements() {
            let moved = s.modulate(l)?;
            if linalg::residual(&basis, moved.values()) > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
