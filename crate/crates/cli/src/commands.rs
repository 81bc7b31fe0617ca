//! One function per subcommand. Each returns a serializable report whose
//! field order is fixed by its struct definition.

use modspace::io::{self, ElementJson, GroupJson, RangeFunctionJson, SignalJson, SpaceDescription};
use modspace::{
    ambient, cauchy_limit, fiber_frame_bounds, is_modulation_invariant, minimal_generator_count, mod_metric,
    principal_decompose, verify_decomposition, DecompositionReport, GroupSpec, Measure, ModInvariantSpace,
};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::problem::Problem;

/// Flags that override the corresponding fields of the input document.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub measure: Option<Measure>,
    pub tolerance: Option<f64>,
}

impl Overrides {
    fn tolerance(&self, problem: Option<&Problem>, default: f64) -> CliResult<f64> {
        let t = self
            .tolerance
            .or_else(|| problem.and_then(|p| p.description.tolerance))
            .unwrap_or(default);
        if t > 0.0 && t.is_finite() {
            Ok(t)
        } else {
            Err(CliError::validation(format!("tolerance: must be positive, got {t}")))
        }
    }

    fn measure(&self, problem: &Problem) -> Measure {
        self.measure.or(problem.description.measure).unwrap_or_default()
    }
}

fn elements(group: &GroupSpec, indices: &[usize]) -> Vec<ElementJson> {
    io::indices_to_elements(group, indices)
}

fn space_of(problem: &Problem) -> CliResult<ModInvariantSpace> {
    match problem.support()? {
        Some(support) => {
            if !problem.description.generators.is_empty() {
                return Err(CliError::validation("support: cannot be combined with generators"));
            }
            Ok(ModInvariantSpace::from_support(&problem.ctx, &support)?)
        }
        None => Ok(ModInvariantSpace::generated(&problem.ctx, problem.generators()?)?),
    }
}

#[derive(Debug, Serialize)]
pub struct SubgroupReport {
    pub generators: Vec<ElementJson>,
    pub elements: Vec<ElementJson>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub group: GroupJson,
    pub lambda: SubgroupReport,
    pub lambda_star: SubgroupReport,
    pub pi: Vec<ElementJson>,
    pub d: Vec<ElementJson>,
    pub dims: Vec<usize>,
    pub dimension: usize,
    pub minimal_generators: usize,
    pub range_function: RangeFunctionJson,
}

pub fn analyze(problem: &Problem) -> CliResult<AnalyzeReport> {
    let ctx = &problem.ctx;
    let g = ctx.group();
    let w = space_of(problem)?;
    let sub = |s: &modspace::Subgroup| SubgroupReport {
        generators: elements(g, s.generators()),
        elements: elements(g, s.elements()),
    };
    Ok(AnalyzeReport {
        group: GroupJson::from_group(g),
        lambda: sub(ctx.lambda()),
        lambda_star: sub(ctx.lambda_star()),
        pi: elements(g, ctx.pi().representatives()),
        d: elements(g, ctx.d().representatives()),
        dims: w.dims(),
        dimension: w.dimension(),
        minimal_generators: minimal_generator_count(&w),
        range_function: RangeFunctionJson::from_range(g, w.range()),
    })
}

#[derive(Debug, Serialize)]
pub struct CandidateReport {
    pub name: String,
    pub member: bool,
    pub max_residual: f64,
    pub norm: f64,
}

#[derive(Debug, Serialize)]
pub struct MembershipReport {
    pub tolerance: f64,
    pub dims: Vec<usize>,
    pub candidates: Vec<CandidateReport>,
}

/// A candidate is a member when its worst fiber residual is at most
/// `tolerance * ||f||`.
pub fn membership(problem: &Problem, flags: Overrides) -> CliResult<MembershipReport> {
    let tol = flags.tolerance(Some(problem), modspace::fiber::MEMBERSHIP_TOL)?;
    let w = space_of(problem)?;
    let candidates = problem
        .candidates()?
        .into_iter()
        .map(|c| {
            let m = w.membership(&c.signal)?;
            let norm = c.signal.norm();
            Ok(CandidateReport {
                name: c.label,
                member: m.max_residual <= tol * norm,
                max_residual: m.max_residual,
                norm,
            })
        })
        .collect::<CliResult<_>>()?;
    Ok(MembershipReport {
        tolerance: tol,
        dims: w.dims(),
        candidates,
    })
}

#[derive(Debug, Serialize)]
pub struct FiberBoundsJson {
    pub x: ElementJson,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub dim: usize,
}

#[derive(Debug, Serialize)]
pub struct SystemBoundsJson {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub frame: bool,
    pub parseval: bool,
    pub riesz: bool,
}

#[derive(Debug, Serialize)]
pub struct FrameBoundsReport {
    pub per_fiber: Vec<FiberBoundsJson>,
    pub system: SystemBoundsJson,
    pub measure: Measure,
}

pub fn frame_bounds(problem: &Problem, flags: Overrides) -> CliResult<FrameBoundsReport> {
    let g = problem.ctx.group();
    let r = fiber_frame_bounds(&problem.ctx, &problem.generators()?, flags.measure(problem))?;
    Ok(FrameBoundsReport {
        per_fiber: r
            .per_fiber
            .iter()
            .map(|f| FiberBoundsJson {
                x: g.residues(f.x),
                a: f.lower,
                b: f.upper,
                dim: f.dim,
            })
            .collect(),
        system: SystemBoundsJson {
            a: r.lower,
            b: r.upper,
            frame: r.is_frame,
            parseval: r.is_parseval,
            riesz: r.is_riesz,
        },
        measure: r.measure,
    })
}

#[derive(Debug, Serialize)]
pub struct VerificationJson {
    pub orthogonality: f64,
    pub dimension_sum: usize,
    pub dimension: usize,
    pub parseval: f64,
    pub reconstruction: f64,
    pub membership: f64,
    pub fiber_orthogonality: f64,
    pub passed: bool,
}

impl VerificationJson {
    fn new(r: &DecompositionReport, tol: f64) -> Self {
        Self {
            orthogonality: r.orthogonality,
            dimension_sum: r.dimension_sum,
            dimension: r.dimension,
            parseval: r.parseval,
            reconstruction: r.reconstruction,
            membership: r.membership,
            fiber_orthogonality: r.fiber_orthogonality,
            passed: r.orthogonality < tol
                && r.reconstruction < tol
                && r.fiber_orthogonality < tol
                && r.dimension_sum == r.dimension
                && r.parseval < tol.max(modspace::frames::PARSEVAL_TOL)
                && r.membership < tol.max(modspace::fiber::MEMBERSHIP_TOL),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DecomposeReport {
    pub tolerance: f64,
    pub dims: Vec<usize>,
    pub generators: Vec<SignalJson>,
    /// Fiber support of each summand, as coset representatives.
    pub supports: Vec<Vec<ElementJson>>,
    pub verification: VerificationJson,
}

pub fn decompose(problem: &Problem, flags: Overrides) -> CliResult<DecomposeReport> {
    let tol = flags.tolerance(Some(problem), 1e-10)?;
    let g = problem.ctx.group();
    ambient::check_size(g.order())?;
    let w = space_of(problem)?;
    let dec = principal_decompose(&w)?;
    let report = verify_decomposition(&w, &dec)?;
    Ok(DecomposeReport {
        tolerance: tol,
        dims: w.dims(),
        generators: dec.generators.iter().map(io::signal_to_json).collect(),
        supports: dec.supports.iter().map(|s| elements(g, s)).collect(),
        verification: VerificationJson::new(&report, tol),
    })
}

#[derive(Debug, Serialize)]
pub struct MetricJson {
    pub theta: f64,
    pub per_fiber: Vec<f64>,
    pub argmax_x: ElementJson,
    pub dims: [Vec<usize>; 2],
}

pub fn metric(problem: &Problem) -> CliResult<MetricJson> {
    let v = ModInvariantSpace::generated(&problem.ctx, problem.generators()?)?;
    let w = ModInvariantSpace::generated(&problem.ctx, problem.other_generators()?)?;
    let r = mod_metric(&v, &w)?;
    Ok(MetricJson {
        theta: r.theta,
        per_fiber: r.per_fiber,
        argmax_x: problem.ctx.group().residues(r.argmax_x),
        dims: [v.dims(), w.dims()],
    })
}

#[derive(Debug, Serialize)]
pub struct LimitReport {
    pub tolerance: f64,
    pub tail_start: usize,
    pub tail_distances: Vec<f64>,
    pub dims: Vec<usize>,
    pub limit: SpaceDescription,
}

pub fn limit(sequence: &[SpaceDescription], flags: Overrides) -> CliResult<LimitReport> {
    let tol = flags.tolerance(None, 1e-3)?;
    let first = sequence
        .first()
        .ok_or_else(|| CliError::validation("[]: the sequence must not be empty"))?;
    let ctx = first.context().map_err(|e| CliError::validation(format!("[0]: {e}")))?;
    let spaces = sequence
        .iter()
        .enumerate()
        .map(|(i, d)| {
            d.build_in(&ctx)
                .map_err(|e| CliError::validation(format!("[{i}]: {e}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let lim = cauchy_limit(&spaces, tol)?;
    Ok(LimitReport {
        tolerance: tol,
        tail_start: lim.tail_start,
        tail_distances: lim.tail_distances,
        dims: lim.space.dims(),
        limit: SpaceDescription::from_space(&lim.space),
    })
}

#[derive(Debug, Serialize)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub lambda_order: usize,
    pub span_dimension: usize,
}

/// Whether the span of the given signals is closed under every `M_λ`,
/// decided in the ambient space.
pub fn invariance_check(problem: &Problem) -> CliResult<InvarianceReport> {
    let g = problem.ctx.group();
    ambient::check_size(g.order())?;
    let spanning = problem.generators()?;
    let invariant = is_modulation_invariant(problem.ctx.lambda(), &spanning)?;
    let trivial = modspace::FiberContext::from_generators(g, &[])?;
    let span_dimension = if spanning.is_empty() {
        0
    } else {
        // with Λ trivial the modulation system is the spanning set itself
        ambient::span_dimension(&trivial, &spanning)?
    };
    Ok(InvarianceReport {
        invariant,
        lambda_order: problem.ctx.lambda().order(),
        span_dimension,
    })
}
