//! Worked scenarios on `Z_4` with `Λ = {0, 2}` (and `Λ = Z_4^` where noted),
//! each compared against its closed-form value.

use modspace::io::{self, ElementJson};
use modspace::{
    dft, fiber_frame_bounds, fiberization, is_modulation_invariant, is_riesz_basis, minimal_generator_count,
    mod_metric, mod_zak, nested_distance_check, pairing, principal_decompose, theta, Complex64, FiberContext,
    GroupSpec, Measure, ModInvariantSpace, Result, Section, Side, Signal, Subgroup,
};
use serde::Serialize;
use serde_json::{json, Value};

/// Agreement tolerance for floating-point scenario values.
pub const DEMO_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct Scenario {
    pub name: &'static str,
    pub expected: Value,
    pub observed: Value,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoReport {
    pub group: Vec<usize>,
    pub lambda: Vec<ElementJson>,
    pub scenarios: Vec<Scenario>,
    pub passed: bool,
}

struct Builder {
    out: Vec<Scenario>,
}

impl Builder {
    fn exact<T: Serialize + PartialEq>(&mut self, name: &'static str, expected: T, observed: T) {
        let ok = expected == observed;
        self.push(name, json!(expected), json!(observed), ok);
    }

    fn close(&mut self, name: &'static str, expected: &[Complex64], observed: &[Complex64]) {
        let ok =
            expected.len() == observed.len() && expected.iter().zip(observed).all(|(a, b)| (a - b).norm() < DEMO_TOL);
        self.push(
            name,
            json!(io::vector_to_json(expected)),
            json!(io::vector_to_json(observed)),
            ok,
        );
    }

    fn scalar(&mut self, name: &'static str, expected: f64, observed: f64) {
        self.push(
            name,
            json!(expected),
            json!(observed),
            (expected - observed).abs() < DEMO_TOL,
        );
    }

    fn push(&mut self, name: &'static str, expected: Value, observed: Value, ok: bool) {
        self.out.push(Scenario {
            name,
            expected,
            observed,
            ok,
        });
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn run() -> Result<DemoReport> {
    let g = GroupSpec::cyclic(4)?;
    let ctx = FiberContext::from_generators(&g, &[2])?;
    let full = FiberContext::full_dual(&g);
    let delta = |i| Signal::delta(&g, Side::Primal, i);
    let span = |ctx: &FiberContext, gens: &[usize]| {
        ModInvariantSpace::generated(ctx, gens.iter().map(|&i| delta(i)).collect())
    };
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let zero = c(0.0, 0.0);
    let mut b = Builder { out: Vec::new() };

    // groups and sections
    let x1 = g.element(1, Side::Primal);
    let xi1 = g.element(1, Side::Dual);
    let xi2 = g.element(2, Side::Dual);
    b.close("pairing <1,1>", &[c(0.0, 1.0)], &[pairing(&x1, &xi1)?]);
    b.close("pairing <1,2>", &[c(-1.0, 0.0)], &[pairing(&x1, &xi2)?]);
    b.exact("subgroup <2>", vec![0, 2], ctx.lambda().elements().to_vec());
    b.exact(
        "trivial subgroup",
        vec![0],
        Subgroup::from_generators(&g, Side::Dual, &[])?.elements().to_vec(),
    );
    b.exact(
        "annihilator of {0,2}",
        vec![0, 2],
        ctx.lambda_star().elements().to_vec(),
    );
    let h = Subgroup::from_generators(&g, Side::Primal, &[2])?;
    let sec = Section::new(&h);
    b.exact("section representatives", vec![0, 1], sec.representatives().to_vec());
    b.exact("decompose 3", (1, 2), sec.decompose(3));
    b.exact("decompose 2", (0, 2), sec.decompose(2));

    // transforms
    b.close("dft delta_0", &[c(0.5, 0.0); 4], dft(&delta(0)).values());
    let flat = Signal::new(&g, Side::Dual, vec![c(0.5, 0.0); 4])?;
    b.close("dft constant 1/2", delta(0).values(), dft(&flat).values());
    b.close(
        "dft delta_1",
        &[c(0.5, 0.0), c(0.0, -0.5), c(-0.5, 0.0), c(0.0, 0.5)],
        dft(&delta(1)).values(),
    );
    let z0 = mod_zak(&delta(0), &ctx)?;
    let z1 = mod_zak(&delta(1), &ctx)?;
    b.close("mod_zak delta_0 row 0", &[c(r, 0.0), c(r, 0.0)], z0.row(0));
    b.close("mod_zak delta_0 row 1", &[zero, zero], z0.row(1));
    b.close("mod_zak delta_1 row 0", &[zero, zero], z1.row(0));
    b.close("mod_zak delta_1 row 1", &[c(r, 0.0), c(0.0, -r)], z1.row(1));
    let zm = mod_zak(&delta(0).modulate(2)?, &ctx)?;
    // rows scale by (<0,2>, <1,2>) = (1, -1)
    let scaled_rows: Vec<Complex64> = z0.row(0).iter().copied().chain(z0.row(1).iter().map(|v| -v)).collect();
    let moved_rows: Vec<Complex64> = zm.row(0).iter().chain(zm.row(1)).copied().collect();
    b.close("mod_zak M_2 delta_0", &scaled_rows, &moved_rows);
    b.close(
        "inverse mod_zak round trip",
        delta(0).values(),
        modspace::inverse_mod_zak(&z0, &ctx)?.values(),
    );
    let fz = fiberization(&delta(0), &ctx)?;
    let fib: Vec<Complex64> = (0..fz.rows()).flat_map(|i| fz.row(i).to_vec()).collect();
    b.close("fiberization delta_0", &[c(1.0, 0.0), zero, zero, zero], &fib);

    // range functions and membership
    let w0 = span(&ctx, &[0])?;
    let w02 = span(&ctx, &[0, 2])?;
    b.exact("dims M(delta_0)", vec![1, 0], w0.dims());
    b.close(
        "J(0) basis of M(delta_0)",
        &[c(r, 0.0), c(r, 0.0)],
        &w0.range().basis(0)[0],
    );
    b.exact("dims M(delta_0, delta_2)", vec![2, 0], w02.dims());
    b.exact(
        "c delta_0 in M(delta_0)",
        true,
        w0.contains(&delta(0).scale(c(-3.0, 2.0)))?,
    );
    b.exact("delta_2 in M(delta_0)", false, w0.contains(&delta(2))?);
    b.scalar("|| P delta_2 || in M(delta_0)", 0.0, w0.project(&delta(2))?.norm());
    let wf = ModInvariantSpace::from_support(&full, &[0, 3])?;
    b.exact("delta_3 in L2({0,3})", true, wf.contains(&delta(3))?);
    b.exact("delta_1 in L2({0,3})", false, wf.contains(&delta(1))?);
    b.exact(
        "span{delta_0 + delta_1} invariant under all of Z_4^",
        false,
        is_modulation_invariant(full.lambda(), &[delta(0).add(&delta(1))])?,
    );
    b.exact(
        "span{delta_0} invariant under {0,2}",
        true,
        is_modulation_invariant(ctx.lambda(), &[delta(0)])?,
    );

    // frames
    let fr = fiber_frame_bounds(&ctx, &[delta(0)], Measure::Normalized)?;
    b.exact(
        "frame {delta_0} bounds",
        (1.0, 1.0, true),
        (round(fr.lower), round(fr.upper), fr.is_parseval),
    );
    let fr = fiber_frame_bounds(&ctx, &[delta(0), delta(2)], Measure::Normalized)?;
    b.exact(
        "frame {delta_0, delta_2} bounds",
        (1.0, 1.0),
        (round(fr.lower), round(fr.upper)),
    );
    let fr = fiber_frame_bounds(&ctx, &[delta(0), delta(0)], Measure::Normalized)?;
    b.exact(
        "frame {delta_0, delta_0} bounds",
        (2.0, 2.0),
        (round(fr.lower), round(fr.upper)),
    );
    let fr = fiber_frame_bounds(&ctx, &[delta(0)], Measure::Counting)?;
    b.exact(
        "frame {delta_0} counting bounds",
        (2.0, 2.0),
        (round(fr.lower), round(fr.upper)),
    );
    b.exact("riesz {delta_0}", false, is_riesz_basis(&ctx, &[delta(0)])?.is_riesz);
    // each fiber carries one zero column, and ambiently M_2 delta_0 = delta_0
    b.exact(
        "riesz {delta_0, delta_1}",
        false,
        is_riesz_basis(&ctx, &[delta(0), delta(1)])?.is_riesz,
    );

    // decompositions
    let whole = span(&ctx, &[0, 1, 2, 3])?;
    let dec = principal_decompose(&w02)?;
    b.exact("principal length M(delta_0, delta_2)", 2, dec.len());
    let dec = principal_decompose(&whole)?;
    b.exact("principal length L2(Z_4)", 2, dec.len());
    b.exact("dims L2(Z_4)", vec![2, 2], whole.dims());
    b.exact("minimal generators M(delta_0)", 1, minimal_generator_count(&w0));
    b.exact("minimal generators L2(Z_4)", 2, minimal_generator_count(&whole));

    // metric
    let scaled = ModInvariantSpace::generated(&ctx, vec![delta(0).scale(c(0.25, -4.0))])?;
    b.exact("theta(M(delta_0), M(c delta_0))", 0.0, theta(&w0, &scaled)?);
    let m = mod_metric(&w0, &span(&ctx, &[1])?)?;
    b.scalar("theta(M(delta_0), M(delta_1))", 1.0, m.theta);
    b.scalar(
        "theta M(delta_0) in M(delta_0, delta_2)",
        1.0,
        nested_distance_check(&w0, &w02)?,
    );
    let chain = (1..=4)
        .map(|k| span(&ctx, &(0..k).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let steps = chain
        .windows(2)
        .map(|p| nested_distance_check(&p[0], &p[1]))
        .collect::<Result<Vec<_>>>()?;
    let ok = steps.iter().all(|t| (t - 1.0).abs() < 1e-10);
    b.push("nested chain theta", json!([1.0, 1.0, 1.0]), json!(steps), ok);

    let passed = b.out.iter().all(|s| s.ok);
    Ok(DemoReport {
        group: g.factors().to_vec(),
        lambda: io::indices_to_elements(&g, ctx.lambda().generators()),
        scenarios: b.out,
        passed,
    })
}

/// Rounds to 12 decimals so exact expectations tolerate last-bit noise.
fn round(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}
