//! Seeded random instances for property tests, the acceptance suite and the
//! CLI self-test.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::FiberContext;
use crate::error::Result;
use crate::fiber::{ModInvariantSpace, RangeFunction};
use crate::group::{GroupSpec, Side};
use crate::transforms::Signal;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random product of 1 to 3 cyclic factors with order at most `max_order`.
pub fn group(rng: &mut impl Rng, max_order: usize) -> GroupSpec {
    assert!(max_order >= 2);
    loop {
        let k = rng.gen_range(1..=3);
        let mut factors = Vec::with_capacity(k);
        let mut order = 1usize;
        for _ in 0..k {
            let room = max_order / order;
            if room < 2 {
                break;
            }
            let n = rng.gen_range(2..=room.min(max_order));
            factors.push(n);
            order *= n;
        }
        if !factors.is_empty() {
            return GroupSpec::new(factors).expect("valid factors");
        }
    }
}

/// Context for `Λ` generated by 0 to 2 random dual elements.
pub fn context(rng: &mut impl Rng, group: &GroupSpec) -> FiberContext {
    let count = rng.gen_range(0..=2);
    let gens: Vec<usize> = (0..count).map(|_| rng.gen_range(0..group.order())).collect();
    FiberContext::from_generators(group, &gens).expect("valid generators")
}

pub fn complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn signal(rng: &mut impl Rng, group: &GroupSpec, side: Side) -> Signal {
    Signal::from_fn(group, side, |_| complex(rng))
}

/// Random signal supported on a random union of `Λ*`-cosets, so that some of
/// its fibers vanish.
pub fn coset_supported_signal(rng: &mut impl Rng, ctx: &FiberContext) -> Signal {
    let g = ctx.group();
    let keep: Vec<bool> = (0..ctx.num_fibers()).map(|_| rng.gen_bool(0.5)).collect();
    Signal::from_fn(g, Side::Primal, |x| {
        if keep[ctx.pi().coset_of(x)] {
            complex(rng)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// 1 to `max_count` generators mixing dense signals, coset-supported signals
/// and linear combinations of earlier generators.
pub fn generators(rng: &mut impl Rng, ctx: &FiberContext, max_count: usize) -> Vec<Signal> {
    let count = rng.gen_range(1..=max_count.max(1));
    let mut out: Vec<Signal> = Vec::with_capacity(count);
    for _ in 0..count {
        let s = match rng.gen_range(0..4) {
            1 if !out.is_empty() => {
                let a = out.choose(rng).expect("nonempty").clone();
                let b = out.choose(rng).expect("nonempty").clone();
                a.scale(complex(rng)).add(&b.scale(complex(rng)))
            }
            2 => coset_supported_signal(rng, ctx),
            _ => signal(rng, ctx.group(), Side::Primal),
        };
        out.push(s);
    }
    out
}

/// A random element of `W`: a combination of modulated generators.
pub fn member(rng: &mut impl Rng, space: &ModInvariantSpace) -> Signal {
    let ctx = space.context();
    let mut f = Signal::zeros(ctx.group(), Side::Primal);
    for phi in space.generators() {
        for &l in ctx.lambda().elements() {
            f = f.add(&phi.modulate(l).expect("primal").scale(complex(rng)));
        }
    }
    f
}

/// Space whose fiber at every `x` in `fibers` is spanned by
/// `cos(t) e_0 + sin(t) e_1`; all other fibers are zero. Needs `|D| >= 2`.
pub fn rotated_line(ctx: &FiberContext, fibers: &[usize], t: f64) -> Result<ModInvariantSpace> {
    let dim = ctx.fiber_len();
    let bases = (0..ctx.num_fibers())
        .map(|i| {
            if fibers.contains(&i) {
                let mut e = vec![Complex64::new(0.0, 0.0); dim];
                e[0] = Complex64::new(t.cos(), 0.0);
                e[1] = Complex64::new(t.sin(), 0.0);
                vec![e]
            } else {
                Vec::new()
            }
        })
        .collect();
    let rf = RangeFunction::from_bases(ctx, bases)?;
    ModInvariantSpace::from_range_function(ctx, &rf)
}
