//! Modulation-invariant subspaces of `L²(G)` for finite abelian groups `G`.
//!
//! A subgroup `Λ` of the dual group acts on signals by modulation. The
//! modulation Zak transform turns that action into multiplication by
//! characters on the fibers over a section `Π` of `G/Λ*`, so every
//! `Λ`-invariant space is described by a range function `x -> J(x)`. On top of
//! that description this crate computes membership and projections, fiberwise
//! frame and Riesz bounds, orthogonal decompositions into principal spaces and
//! the modulation metric. Each fiberwise computation has an ambient dense
//! counterpart in [`ambient`] used as an oracle.
//!
//! ```
//! use modspace::{FiberContext, GroupSpec, ModInvariantSpace, Side, Signal};
//!
//! let z4 = GroupSpec::cyclic(4).unwrap();
//! let ctx = FiberContext::from_generators(&z4, &[2]).unwrap();
//! let w = ModInvariantSpace::generated(&ctx, vec![Signal::delta(&z4, Side::Primal, 0)]).unwrap();
//! assert_eq!(w.dims(), vec![1, 0]);
//! assert!(!w.contains(&Signal::delta(&z4, Side::Primal, 2)).unwrap());
//! ```

pub mod ambient;
pub mod context;
pub mod decomposition;
pub mod error;
pub mod fiber;
pub mod frames;
pub mod group;
pub mod io;
pub mod linalg;
pub mod metric;
pub mod sample;
pub mod transforms;

pub use context::FiberContext;
pub use decomposition::{principal_decompose, verify_decomposition, DecompositionReport, PrincipalDecomposition};
pub use error::{Error, Result};
pub use fiber::{
    is_modulation_invariant, membership_via_fiberization, range_function_from_generators,
    range_function_via_fiberization, Membership, ModInvariantSpace, RangeFunction,
};
pub use frames::{
    brute_force_frame_bounds, fiber_frame_bounds, is_riesz_basis, FiberBounds, FrameReport, Measure, RieszDiagnostics,
};
pub use group::{pairing, GroupElement, GroupSpec, Section, Side, Subgroup};
pub use metric::{
    cauchy_limit, dimension_rigidity_check, minimal_generator_count, mod_metric, nested_distance_check, theta,
    CauchyLimit, MetricReport,
};
pub use num_complex::Complex64;
pub use transforms::{
    dft, dft_fast, fiberization, inverse_mod_zak, inverse_zak, mod_zak, zak, FiberMatrix, LambdaStarFibers, Signal,
};
