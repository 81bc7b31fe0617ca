//! Randomized invariants. Instances are drawn from seeded samplers so that a
//! failing case shrinks to a single seed.

use modspace::linalg::{self, CMatrix};
use modspace::sample;
use modspace::{
    ambient, brute_force_frame_bounds, dft, dft_fast, fiber_frame_bounds, inverse_mod_zak, mod_zak,
    principal_decompose, theta, zak, Complex64, FiberMatrix, Measure, ModInvariantSpace, Section, Side, Signal,
    Subgroup,
};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn dft_is_unitary_and_involutive(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::group(&mut rng, 128);
        let f = sample::signal(&mut rng, &g, Side::Primal);
        let h = dft(&f);
        prop_assert!((h.norm() - f.norm()).abs() < 1e-12);
        prop_assert!(dft(&h).distance(&f) < 1e-12);
        prop_assert!(dft_fast(&f).distance(&h) < 1e-12);
    }

    #[test]
    fn annihilator_and_section_invariants(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::group(&mut rng, 96);
        let ctx = sample::context(&mut rng, &g);
        let (lambda, star) = (ctx.lambda(), ctx.lambda_star());
        prop_assert_eq!(lambda.order() * star.order(), g.order());
        for &h in star.elements() {
            for &l in lambda.generators() {
                prop_assert_eq!(g.phase(h, l), 0);
            }
        }
        for sec in [ctx.pi(), ctx.d()] {
            for x in 0..g.order() {
                let (rep, h) = sec.decompose(x);
                prop_assert!(sec.subgroup().contains(h));
                prop_assert_eq!(g.add(rep, h), x);
            }
        }
        // arbitrary subgroup sections too
        let extra = Subgroup::from_generators(&g, Side::Primal, &[g.order() / 2]).unwrap();
        let sec = Section::new(&extra);
        prop_assert_eq!(sec.len() * extra.order(), g.order());
    }

    #[test]
    fn mod_zak_is_unitary_and_invertible(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::group(&mut rng, 256);
        let ctx = sample::context(&mut rng, &g);
        let f = sample::signal(&mut rng, &g, Side::Primal);
        let z = mod_zak(&f, &ctx).unwrap();
        prop_assert!((z.frobenius_norm() - f.norm()).abs() < 1e-12);
        prop_assert!(inverse_mod_zak(&z, &ctx).unwrap().distance(&f) < 1e-12);

        let mut rows = z.to_rows();
        for r in &mut rows {
            for v in r.iter_mut() {
                *v = sample::complex(&mut rng);
            }
        }
        let m = FiberMatrix::from_rows(&ctx, rows).unwrap();
        let back = mod_zak(&inverse_mod_zak(&m, &ctx).unwrap(), &ctx).unwrap();
        let err: f64 = (0..m.rows())
            .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
            .map(|(i, j)| (back.get(i, j) - m.get(i, j)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn transforms_are_linear(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::group(&mut rng, 128);
        let ctx = sample::context(&mut rng, &g);
        let f = sample::signal(&mut rng, &g, Side::Primal);
        let h = sample::signal(&mut rng, &g, Side::Primal);
        let (a, b) = (sample::complex(&mut rng), sample::complex(&mut rng));
        let combo = f.scale(a).add(&h.scale(b));
        let (zf, zh, zc) = (
            mod_zak(&f, &ctx).unwrap(),
            mod_zak(&h, &ctx).unwrap(),
            mod_zak(&combo, &ctx).unwrap(),
        );
        for i in 0..zc.rows() {
            for j in 0..zc.cols() {
                prop_assert!((zc.get(i, j) - (a * zf.get(i, j) + b * zh.get(i, j))).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zak_intertwines_translations(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::group(&mut rng, 128);
        let ctx = sample::context(&mut rng, &g);
        let sig = sample::signal(&mut rng, &g, Side::Dual);
        let base = zak(&sig, &ctx).unwrap();
        for &mu in ctx.lambda().elements().iter().take(8) {
            let moved = zak(&sig.translate(mu).unwrap(), &ctx).unwrap();
            for (i, &x) in ctx.pi().representatives().iter().enumerate() {
                let ch = g.pairing_index(x, mu);
                let err = moved.row(i).iter().zip(base.row(i)).map(|(m, b)| (m - ch * b).norm_sqr()).sum::<f64>().sqrt();
                prop_assert!(err < 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn projection_is_idempotent_self_adjoint_contractive(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::group(&mut rng, 64);
        let ctx = sample::context(&mut rng, &g);
        let w = ModInvariantSpace::generated(&ctx, sample::generators(&mut rng, &ctx, 3)).unwrap();
        let f = sample::signal(&mut rng, &g, Side::Primal);
        let h = sample::signal(&mut rng, &g, Side::Primal);
        let pf = w.project(&f).unwrap();
        let ph = w.project(&h).unwrap();
        prop_assert!(w.project(&pf).unwrap().distance(&pf) < 1e-12);
        prop_assert!(pf.norm() <= f.norm() + 1e-12);
        prop_assert!((pf.inner(&h) - f.inner(&ph)).norm() < 1e-12);
        prop_assert!(w.contains(&pf).unwrap());
        prop_assert!(w.range().max_gram_residual() < 1e-10);
    }

    #[test]
    fn fiberwise_multiplication_preserves_membership(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::group(&mut rng, 64);
        let ctx = sample::context(&mut rng, &g);
        let w = ModInvariantSpace::generated(&ctx, sample::generators(&mut rng, &ctx, 2)).unwrap();
        let f = sample::member(&mut rng, &w);
        let z = mod_zak(&f, &ctx).unwrap();
        let rows: Vec<Vec<Complex64>> = (0..z.rows())
            .map(|i| {
                let c = sample::complex(&mut rng);
                z.row(i).iter().map(|v| v * c).collect()
            })
            .collect();
        let moved = inverse_mod_zak(&FiberMatrix::from_rows(&ctx, rows).unwrap(), &ctx).unwrap();
        prop_assert!(w.contains(&moved).unwrap());
    }

    #[test]
    fn equal_ranges_iff_equal_ambient_projections(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::group(&mut rng, 48);
        let ctx = sample::context(&mut rng, &g);
        let gens = sample::generators(&mut rng, &ctx, 3);
        let v = ModInvariantSpace::generated(&ctx, gens.clone()).unwrap();
        // same space through rescaled, reordered and modulated generators
        let mut other: Vec<Signal> = gens
            .iter()
            .map(|s| s.modulate(ctx.lambda().elements()[ctx.lambda().order() - 1]).unwrap().scale(Complex64::new(0.0, 2.0)))
            .collect();
        other.reverse();
        let same = ModInvariantSpace::generated(&ctx, other).unwrap();
        let diff = ModInvariantSpace::generated(&ctx, sample::generators(&mut rng, &ctx, 3)).unwrap();
        for u in [&same, &diff] {
            let fiber_equal = v.same_range(u, 1e-9).unwrap();
            let ambient_gap = linalg::spectral_norm(&(v.projection_operator().unwrap() - u.projection_operator().unwrap()));
            prop_assert_eq!(fiber_equal, ambient_gap < 1e-9);
        }
        prop_assert!(v.same_range(&same, 1e-9).unwrap());
    }

    #[test]
    fn frame_report_invariant_under_generator_modulation(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::group(&mut rng, 64);
        let ctx = sample::context(&mut rng, &g);
        let gens = sample::generators(&mut rng, &ctx, 3);
        let mu = ctx.lambda().elements()[ctx.lambda().order() / 2];
        let moved: Vec<Signal> = gens.iter().map(|s| s.modulate(mu).unwrap()).collect();
        let a = fiber_frame_bounds(&ctx, &gens, Measure::Normalized).unwrap();
        let b = fiber_frame_bounds(&ctx, &moved, Measure::Normalized).unwrap();
        prop_assert!((a.lower - b.lower).abs() <= 1e-10 * a.upper.max(1.0));
        prop_assert!((a.upper - b.upper).abs() <= 1e-10 * a.upper.max(1.0));
        prop_assert_eq!((a.is_frame, a.is_riesz, a.is_parseval), (b.is_frame, b.is_riesz, b.is_parseval));
    }

    #[test]
    fn parseval_iff_unit_singular_values(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::group(&mut rng, 64);
        let ctx = sample::context(&mut rng, &g);
        let w = ModInvariantSpace::generated(&ctx, sample::generators(&mut rng, &ctx, 3)).unwrap();
        let dec = principal_decompose(&w).unwrap();
        for phi in &dec.generators {
            let r = fiber_frame_bounds(&ctx, std::slice::from_ref(phi), Measure::Normalized).unwrap();
            prop_assert!(r.is_parseval);
            let z = mod_zak(phi, &ctx).unwrap();
            for i in 0..z.rows() {
                let n = linalg::norm(z.row(i));
                prop_assert!(n < 1e-12 || (n - 1.0).abs() < 1e-12);
            }
        }
        // a generic generator is not Parseval
        let phi = sample::signal(&mut rng, &g, Side::Primal).scale(Complex64::new(3.0, 0.0));
        let r = brute_force_frame_bounds(&ctx, &[phi], Measure::Normalized).unwrap();
        prop_assert!(!r.is_parseval);
    }

    #[test]
    fn metric_is_bounded_symmetric_and_rigid(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::group(&mut rng, 48);
        let ctx = sample::context(&mut rng, &g);
        let base = sample::generators(&mut rng, &ctx, 2);
        let eps = rng_eps(&mut rng);
        let nudged: Vec<Signal> = base
            .iter()
            .map(|s| s.add(&sample::signal(&mut rng, &g, Side::Primal).scale(Complex64::new(eps, 0.0))))
            .collect();
        let v = ModInvariantSpace::generated(&ctx, base).unwrap();
        let w = ModInvariantSpace::generated(&ctx, nudged).unwrap();
        let t = theta(&v, &w).unwrap();
        prop_assert!((0.0..=1.0).contains(&t));
        prop_assert_eq!(t, theta(&w, &v).unwrap());
        if t < 1.0 - 1e-9 {
            prop_assert_eq!(v.dims(), w.dims());
        }
        if v.dims() != w.dims() {
            prop_assert!((t - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn dimensions_match_ambient_span(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let g = sample::group(&mut rng, 64);
        let ctx = sample::context(&mut rng, &g);
        let gens = sample::generators(&mut rng, &ctx, 3);
        let w = ModInvariantSpace::generated(&ctx, gens.clone()).unwrap();
        prop_assert_eq!(w.dimension(), ambient::span_dimension(&ctx, &gens).unwrap());
    }
}

fn rng_eps(rng: &mut sample::SampleRng) -> f64 {
    use rand::Rng;
    10f64.powf(rng.gen_range(-6.0..-0.5))
}

#[test]
fn counting_measure_matrix_identity() {
    // S_counting = |Λ| S_normalized as operators
    let mut rng = sample::rng(11);
    let g = sample::group(&mut rng, 32);
    let ctx = sample::context(&mut rng, &g);
    let gens = sample::generators(&mut rng, &ctx, 2);
    let m = ambient::modulation_system(&ctx, &gens).unwrap();
    let s: CMatrix = &m * m.adjoint();
    let n = brute_force_frame_bounds(&ctx, &gens, Measure::Normalized).unwrap();
    let top = linalg::hermitian_eigenvalues(&s)[0];
    assert!((top - n.upper * ctx.lambda().order() as f64).abs() < 1e-9 * top);
}
