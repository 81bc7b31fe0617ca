//! Seeded oracle-equivalence suites. Each compares a fiberwise computation
//! with an ambient or independent reference on many random instances and
//! reports the worst residual seen.

use modspace::linalg;
use modspace::sample::{self, SampleRng};
use modspace::{
    ambient, brute_force_frame_bounds, cauchy_limit, fiber_frame_bounds, inverse_mod_zak, membership_via_fiberization,
    minimal_generator_count, mod_zak, nested_distance_check, principal_decompose, range_function_via_fiberization,
    theta, verify_decomposition, Complex64, FiberContext, FiberMatrix, GroupSpec, Measure, ModInvariantSpace, Result,
    Side, Signal,
};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

/// Outcome of one suite.
#[derive(Clone, Debug, Serialize)]
pub struct Suite {
    pub name: &'static str,
    pub instances: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Descriptions of the first few failing instances.
    pub failures: Vec<String>,
}

struct Tracker {
    suite: Suite,
}

impl Tracker {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            suite: Suite {
                name,
                instances: 0,
                max_residual: 0.0,
                tolerance,
                passed: true,
                failures: Vec::new(),
            },
        }
    }

    fn residual(&mut self, value: f64, what: impl FnOnce() -> String) {
        self.suite.max_residual = self.suite.max_residual.max(value);
        if value.is_nan() || value > self.suite.tolerance {
            self.fail(what);
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.fail(what);
        }
    }

    fn fail(&mut self, what: impl FnOnce() -> String) {
        self.suite.passed = false;
        if self.suite.failures.len() < 5 {
            self.suite.failures.push(what());
        }
    }

    fn done(mut self, instances: usize) -> Suite {
        self.suite.instances = instances;
        self.suite
    }
}

fn max_row_gap(a: &FiberMatrix, b: &FiberMatrix, scale: impl Fn(usize) -> Complex64) -> f64 {
    (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .zip(b.row(i))
                .map(|(u, v)| (u - scale(i) * v).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// Unitarity, invertibility and modulation intertwining of the modulation Zak
/// transform. Intertwining is checked for every generator of `Λ` and a few
/// random elements.
pub fn transform_validity(seed: u64, count: usize, max_order: usize) -> Result<Suite> {
    let mut t = Tracker::new("transform_validity", 1e-12);
    let mut rng = sample::rng(seed);
    for n in 0..count {
        let g = sample::group(&mut rng, max_order);
        let ctx = sample::context(&mut rng, &g);
        let f = sample::signal(&mut rng, &g, Side::Primal);
        let scale = f.norm().max(1.0);
        let z = mod_zak(&f, &ctx)?;
        t.residual((z.frobenius_norm() - f.norm()).abs() / scale, || {
            format!("#{n}: norm not preserved")
        });
        t.residual(inverse_mod_zak(&z, &ctx)?.distance(&f) / scale, || {
            format!("#{n}: inverse round trip")
        });

        let rows: Vec<Vec<Complex64>> = (0..z.rows())
            .map(|_| (0..z.cols()).map(|_| sample::complex(&mut rng)).collect())
            .collect();
        let m = FiberMatrix::from_rows(&ctx, rows)?;
        let back = inverse_mod_zak(&m, &ctx)?;
        let mscale = m.frobenius_norm().max(1.0);
        t.residual((back.norm() - m.frobenius_norm()).abs() / mscale, || {
            format!("#{n}: inverse not isometric")
        });
        t.residual(
            max_row_gap(&mod_zak(&back, &ctx)?, &m, |_| Complex64::new(1.0, 0.0)) / mscale,
            || format!("#{n}: forward after inverse"),
        );

        let lambda = ctx.lambda();
        let mut probes = lambda.generators().to_vec();
        probes.extend((0..3).map(|_| *lambda.elements().choose(&mut rng).expect("nonempty")));
        for lam in probes {
            let moved = mod_zak(&f.modulate(lam)?, &ctx)?;
            let pi = ctx.pi().representatives();
            let gap = max_row_gap(&moved, &z, |i| g.pairing_index(pi[i], lam)) / scale;
            t.residual(gap, || format!("#{n}: intertwining fails for lambda index {lam}"));
        }
    }
    Ok(t.done(count))
}

/// Ambient projection onto the span of `{M_λ φ}` against the fiberwise
/// projection transported back by the transform, in operator norm.
pub fn characterization(seed: u64, count: usize) -> Result<Suite> {
    let mut t = Tracker::new("characterization", 1e-9);
    let mut rng = sample::rng(seed);
    for n in 0..count {
        let g = sample::group(&mut rng, 64);
        let ctx = sample::context(&mut rng, &g);
        let gens = sample::generators(&mut rng, &ctx, 4);
        let ambient = ambient::span_projection(&ctx, &gens)?;
        let w = ModInvariantSpace::generated(&ctx, gens.clone())?;
        let fiberwise = w.projection_operator()?;
        t.residual(linalg::spectral_norm(&(ambient - fiberwise)), || {
            format!("#{n}: projections differ")
        });
        t.check(w.dimension() == ambient::span_dimension(&ctx, &gens)?, || {
            format!("#{n}: dimension mismatch")
        });
    }
    Ok(t.done(count))
}

/// Every factor list `[n1, ..]` with at most three factors and product at most
/// `max_order`.
fn all_groups(max_order: usize) -> Vec<GroupSpec> {
    fn grow(prefix: &mut Vec<usize>, order: usize, max_order: usize, out: &mut Vec<GroupSpec>) {
        if !prefix.is_empty() {
            out.push(GroupSpec::new(prefix.clone()).expect("factors >= 2"));
        }
        if prefix.len() == 3 {
            return;
        }
        for n in 2..=max_order / order {
            prefix.push(n);
            grow(prefix, order * n, max_order, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), 1, max_order, &mut out);
    out
}

/// With `Λ` the whole dual group, membership must coincide exactly with the
/// support condition. Every group with `|G| <= max_order` and at most three
/// factors is covered, each with `supports_per_group` random supports tested
/// against every delta.
pub fn support_condition(seed: u64, max_order: usize, supports_per_group: usize) -> Result<Suite> {
    let mut t = Tracker::new("support_condition", 0.0);
    let mut rng = sample::rng(seed);
    let mut instances = 0;
    for g in all_groups(max_order) {
        let ctx = FiberContext::full_dual(&g);
        for _ in 0..supports_per_group {
            let p = rng.gen_range(0.0..1.0);
            let support: Vec<usize> = (0..g.order()).filter(|_| rng.gen_bool(p)).collect();
            let w = ModInvariantSpace::from_support(&ctx, &support)?;
            let mut mismatches = 0usize;
            for y in 0..g.order() {
                if w.contains(&Signal::delta(&g, Side::Primal, y))? != support.contains(&y) {
                    mismatches += 1;
                }
            }
            // a dense signal on the support is a member; any leak outside is not
            let inside = Signal::from_fn(&g, Side::Primal, |x| {
                if support.contains(&x) {
                    sample::complex(&mut rng)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            if !w.contains(&inside)? {
                mismatches += 1;
            }
            if support.len() < g.order() {
                let out = *(0..g.order())
                    .filter(|x| !support.contains(x))
                    .collect::<Vec<_>>()
                    .choose(&mut rng)
                    .expect("nonempty complement");
                let leaked = inside.add(&Signal::delta(&g, Side::Primal, out).scale(Complex64::new(1e-3, 0.0)));
                if w.contains(&leaked)? {
                    mismatches += 1;
                }
            }
            t.residual(mismatches as f64, || {
                format!("{:?}: {mismatches} wrong decisions", g.factors())
            });
            instances += 1;
        }
    }
    Ok(t.done(instances))
}

/// Fiber frame bounds against the ambient frame-operator spectrum, plus the
/// counting-measure factor `|Λ|` on both paths.
pub fn frame_bounds(seed: u64, count: usize) -> Result<Suite> {
    let mut t = Tracker::new("frame_bounds", 1e-8);
    let mut rng = sample::rng(seed);
    for n in 0..count {
        let g = sample::group(&mut rng, 64);
        let ctx = sample::context(&mut rng, &g);
        let gens = match rng.gen_range(0..3) {
            0 => {
                principal_decompose(&ModInvariantSpace::generated(
                    &ctx,
                    sample::generators(&mut rng, &ctx, 3),
                )?)?
                .generators
            }
            _ => sample::generators(&mut rng, &ctx, 3),
        };
        if gens.is_empty() {
            continue;
        }
        let lam = ctx.lambda().order() as f64;
        let fiber = fiber_frame_bounds(&ctx, &gens, Measure::Normalized)?;
        let brute = brute_force_frame_bounds(&ctx, &gens, Measure::Normalized)?;
        let scale = fiber.upper.max(brute.upper).max(f64::MIN_POSITIVE);
        t.residual((fiber.lower - brute.lower).abs() / scale, || {
            format!("#{n}: lower bound")
        });
        t.residual((fiber.upper - brute.upper).abs() / scale, || {
            format!("#{n}: upper bound")
        });
        t.check(
            (fiber.is_frame, fiber.is_parseval, fiber.is_riesz) == (brute.is_frame, brute.is_parseval, brute.is_riesz),
            || format!("#{n}: flags differ"),
        );

        let fc = fiber_frame_bounds(&ctx, &gens, Measure::Counting)?;
        let bc = brute_force_frame_bounds(&ctx, &gens, Measure::Counting)?;
        for (c, base) in [
            (fc.lower, fiber.lower),
            (fc.upper, fiber.upper),
            (bc.lower, brute.lower),
            (bc.upper, brute.upper),
        ] {
            t.residual((c - lam * base).abs() / (lam * scale), || {
                format!("#{n}: counting factor")
            });
        }
    }
    Ok(t.done(count))
}

/// Worst values of the principal-decomposition checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct DecompositionWorst {
    pub orthogonality: f64,
    pub parseval: f64,
    pub reconstruction: f64,
    pub membership: f64,
    pub fiber_orthogonality: f64,
}

/// Principal decompositions: orthogonal summands, additive dimensions,
/// Parseval generators, exact reconstruction and minimal length.
pub fn decomposition(seed: u64, count: usize) -> Result<(Suite, DecompositionWorst)> {
    let mut t = Tracker::new("decomposition", 1e-10);
    let mut worst = DecompositionWorst::default();
    let mut rng = sample::rng(seed);
    for n in 0..count {
        let g = sample::group(&mut rng, 64);
        let ctx = sample::context(&mut rng, &g);
        let w = ModInvariantSpace::generated(&ctx, sample::generators(&mut rng, &ctx, 4))?;
        let dec = principal_decompose(&w)?;
        let r = verify_decomposition(&w, &dec)?;
        worst.orthogonality = worst.orthogonality.max(r.orthogonality);
        worst.parseval = worst.parseval.max(r.parseval);
        worst.reconstruction = worst.reconstruction.max(r.reconstruction);
        worst.membership = worst.membership.max(r.membership);
        worst.fiber_orthogonality = worst.fiber_orthogonality.max(r.fiber_orthogonality);

        t.residual(r.orthogonality, || format!("#{n}: summands not orthogonal"));
        t.residual(r.reconstruction, || format!("#{n}: reconstruction"));
        t.residual(r.fiber_orthogonality, || format!("#{n}: fibers not orthogonal"));
        t.check(r.parseval < 1e-8, || {
            format!("#{n}: summand not Parseval ({:e})", r.parseval)
        });
        t.check(r.membership < 1e-9, || format!("#{n}: generator outside W"));
        t.check(r.dimension_sum == r.dimension, || {
            format!("#{n}: dimensions {} != {}", r.dimension_sum, r.dimension)
        });
        t.check(dec.len() == minimal_generator_count(&w), || {
            format!("#{n}: length not minimal")
        });
    }
    Ok((t.done(count), worst))
}

fn perturb(rng: &mut SampleRng, ctx: &FiberContext, gens: &[Signal], eps: f64) -> Vec<Signal> {
    gens.iter()
        .map(|s| s.add(&sample::signal(rng, ctx.group(), Side::Primal).scale(Complex64::new(eps, 0.0))))
        .collect()
}

fn random_space(
    rng: &mut SampleRng,
    ctx: &FiberContext,
    near: Option<&ModInvariantSpace>,
) -> Result<ModInvariantSpace> {
    match near {
        Some(base) if rng.gen_bool(0.7) => {
            let eps = 10f64.powf(rng.gen_range(-8.0..0.0));
            ModInvariantSpace::generated(ctx, perturb(rng, ctx, base.generators(), eps))
        }
        _ => ModInvariantSpace::generated(ctx, sample::generators(rng, ctx, 3)),
    }
}

/// Counters collected by the metric suite.
#[derive(Clone, Debug, Default, Serialize)]
pub struct MetricStats {
    pub triples: usize,
    pub below_one_pairs: usize,
    pub strict_chains: usize,
    pub scaled_pairs: usize,
}

/// Metric axioms on random triples, exact zero under rescaling, `θ = 1` on
/// strict nested chains and equal fiber dimensions whenever `θ < 1`.
pub fn metric(seed: u64, count: usize) -> Result<(Suite, MetricStats)> {
    let mut t = Tracker::new("metric", 1e-12);
    let mut stats = MetricStats::default();
    let mut rng = sample::rng(seed);
    for n in 0..count {
        let g = sample::group(&mut rng, 48);
        let ctx = sample::context(&mut rng, &g);
        let u = random_space(&mut rng, &ctx, None)?;
        let v = random_space(&mut rng, &ctx, Some(&u))?;
        let w = random_space(&mut rng, &ctx, Some(&v))?;
        let spaces = [&u, &v, &w];
        let mut d = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                d[i][j] = theta(spaces[i], spaces[j])?;
            }
        }
        for i in 0..3 {
            t.check(d[i][i] == 0.0, || format!("#{n}: theta(V, V) = {}", d[i][i]));
            for j in 0..3 {
                t.check((0.0..=1.0).contains(&d[i][j]), || format!("#{n}: theta out of [0, 1]"));
                t.check(d[i][j] == d[j][i], || format!("#{n}: theta not symmetric"));
                for k in 0..3 {
                    t.residual((d[i][k] - d[i][j] - d[j][k]).max(0.0), || {
                        format!("#{n}: triangle inequality")
                    });
                }
                if i != j && d[i][j] < 1.0 {
                    stats.below_one_pairs += 1;
                    t.check(spaces[i].dims() == spaces[j].dims(), || {
                        format!("#{n}: theta < 1 with unequal dims")
                    });
                }
            }
        }
        stats.triples += 1;

        let c = sample::complex(&mut rng) * 3.0;
        if c.norm() > 1e-3 {
            let scaled = ModInvariantSpace::generated(&ctx, u.generators().iter().map(|s| s.scale(c)).collect())?;
            t.check(theta(&u, &scaled)? == 0.0, || {
                format!("#{n}: rescaled space at positive distance")
            });
            stats.scaled_pairs += 1;
        }

        // chain V_1 ⊆ V_2 ⊆ ... from growing generator prefixes
        let gens: Vec<Signal> = (0..3).map(|_| sample::coset_supported_signal(&mut rng, &ctx)).collect();
        let chain = (1..=gens.len())
            .map(|k| ModInvariantSpace::generated(&ctx, gens[..k].to_vec()))
            .collect::<Result<Vec<_>>>()?;
        for pair in chain.windows(2) {
            if pair[0].dims() != pair[1].dims() {
                stats.strict_chains += 1;
                let th = nested_distance_check(&pair[0], &pair[1])?;
                t.check((th - 1.0).abs() <= 1e-10, || {
                    format!("#{n}: strict chain with theta {th}")
                });
            }
        }
    }
    t.check(stats.below_one_pairs > 0, || {
        "no pair with theta < 1 was sampled".into()
    });
    t.check(stats.strict_chains > 0, || "no strict chain was sampled".into());
    Ok((t.done(count), stats))
}

fn context_with_room(rng: &mut SampleRng, max_order: usize) -> FiberContext {
    loop {
        let g = sample::group(rng, max_order);
        let ctx = sample::context(rng, &g);
        if ctx.fiber_len() >= 2 {
            return ctx;
        }
    }
}

/// Limits of Cauchy sequences: rotating-line families with a known limit and
/// perturbed principal sequences, whose limits must again be principal.
pub fn limits(seed: u64, count: usize) -> Result<Suite> {
    let mut t = Tracker::new("limits", 0.0);
    let mut rng = sample::rng(seed);
    for n in 0..count {
        let ctx = context_with_room(&mut rng, 48);
        let tol = 10f64.powf(-rng.gen_range(2.0..6.0));
        if n % 2 == 0 {
            let mut fibers: Vec<usize> = (0..ctx.num_fibers()).filter(|_| rng.gen_bool(0.6)).collect();
            if fibers.is_empty() {
                fibers.push(0);
            }
            let target = rng.gen_range(0.0..std::f64::consts::PI);
            let amp = rng.gen_range(0.1..1.0);
            let seq = (1..=40)
                .map(|k| sample::rotated_line(&ctx, &fibers, target + amp * 0.6f64.powi(k)))
                .collect::<Result<Vec<_>>>()?;
            let lim = cauchy_limit(&seq, tol)?;
            let exact = sample::rotated_line(&ctx, &fibers, target)?;
            check_limit(&mut t, n, &lim, tol);
            let gap = theta(&lim.space, &exact)?;
            t.check(gap < tol, || format!("#{n}: limit {gap:e} from the true limit"));
            t.check(lim.space.dims() == exact.dims(), || format!("#{n}: limit dims"));
            t.check(minimal_generator_count(&lim.space) == 1, || {
                format!("#{n}: limit not principal")
            });
        } else {
            let phi = sample::signal(&mut rng, ctx.group(), Side::Primal);
            let psi = sample::coset_supported_signal(&mut rng, &ctx);
            let seq = (1..=40)
                .map(|k| {
                    let eps = Complex64::new(0.5f64.powi(k), 0.0);
                    ModInvariantSpace::generated(&ctx, vec![phi.add(&psi.scale(eps))])
                })
                .collect::<Result<Vec<_>>>()?;
            let lim = cauchy_limit(&seq, tol)?;
            check_limit(&mut t, n, &lim, tol);
            t.check(minimal_generator_count(&lim.space) <= 1, || {
                format!("#{n}: principal input, non-principal limit")
            });
        }
    }
    Ok(t.done(count))
}

fn check_limit(t: &mut Tracker, n: usize, lim: &modspace::CauchyLimit, tol: f64) {
    let worst = lim.tail_distances.iter().copied().fold(0.0, f64::max);
    t.check(worst < tol, || format!("#{n}: tail distance {worst:e} >= {tol:e}"));
    t.check(lim.space.range().max_gram_residual() < 1e-10, || {
        format!("#{n}: limit basis not orthonormal")
    });
    // the limit's generators must regenerate its range function
    let rebuilt = ModInvariantSpace::generated(lim.space.context(), lim.space.generators().to_vec());
    let same = rebuilt.and_then(|r| r.same_range(&lim.space, 1e-9)).unwrap_or(false);
    t.check(same, || format!("#{n}: limit generators do not span the limit"));
}

/// Range functions from the fiberization map against those from the
/// modulation Zak transform: fiber dimensions and membership decisions.
pub fn fiberization(seed: u64, count: usize) -> Result<Suite> {
    let mut t = Tracker::new("fiberization", 0.0);
    let mut rng = sample::rng(seed);
    for n in 0..count {
        let g = sample::group(&mut rng, 64);
        let ctx = sample::context(&mut rng, &g);
        let gens = sample::generators(&mut rng, &ctx, 3);
        let w = ModInvariantSpace::generated(&ctx, gens.clone())?;
        let alt = range_function_via_fiberization(&ctx, &gens)?;
        t.check(alt.dims() == w.dims(), || {
            format!("#{n}: dims {:?} vs {:?}", alt.dims(), w.dims())
        });
        let mut tests = vec![
            sample::member(&mut rng, &w),
            sample::member(&mut rng, &w),
            sample::signal(&mut rng, &g, Side::Primal),
            sample::coset_supported_signal(&mut rng, &ctx),
        ];
        tests.push(tests[0].add(&tests[2].scale(Complex64::new(1e-4, 0.0))));
        for (k, f) in tests.iter().enumerate() {
            let a = w.contains(f)?;
            let b = membership_via_fiberization(&ctx, &alt, f)?.member;
            t.check(a == b, || format!("#{n}: test signal {k} decided {a} vs {b}"));
        }
    }
    Ok(t.done(count))
}
