//! Unitary maps between `L²(G)`, `L²(Ĝ)` and fiber fields over `Π`.
//!
//! Conventions (counting measure on both `G` and `Ĝ`):
//!
//! * `dft` of a primal signal: `(Ff)(xi) = |G|^{-1/2} sum_x f(x) conj(<x, xi>)`.
//! * `dft` of a dual signal uses the conjugate kernel, so `dft(dft(f)) == f`.
//! * `zak`: `Zg(x)(d) = |Λ|^{-1/2} sum_{lambda in Λ} g(d + lambda) <x, lambda>`
//!   for `x in Π`, `d in D`.
//! * `mod_zak = zak ∘ dft`, turning modulations by `Λ` into multiplication by
//!   the restricted characters `x -> <x, lambda>`.
//!
//! [`dft`] is the direct-sum reference; the composite maps run on
//! [`dft_fast`], which is checked against it to 1e-12.
//!
//! All sums run left to right in canonical index order, so results are
//! deterministic.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::context::FiberContext;
use crate::error::{Error, Result};
use crate::group::{GroupSpec, Side};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A complex function on `G` (primal) or `Ĝ` (dual), indexed mixed-radix.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    group: GroupSpec,
    side: Side,
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(group: &GroupSpec, side: Side, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::ShapeMismatch {
                expected: (group.order(), 1),
                found: (values.len(), 1),
            });
        }
        Ok(Self {
            group: group.clone(),
            side,
            values,
        })
    }

    pub fn zeros(group: &GroupSpec, side: Side) -> Self {
        Self {
            group: group.clone(),
            side,
            values: vec![ZERO; group.order()],
        }
    }

    /// Indicator of a single element.
    pub fn delta(group: &GroupSpec, side: Side, index: usize) -> Self {
        let mut s = Self::zeros(group, side);
        s.values[index] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn from_fn(group: &GroupSpec, side: Side, f: impl FnMut(usize) -> Complex64) -> Self {
        Self {
            group: group.clone(),
            side,
            values: (0..group.order()).map(f).collect(),
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self, other> = sum self(x) conj(other(x))`.
    pub fn inner(&self, other: &Signal) -> Complex64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn scale(&self, c: Complex64) -> Signal {
        self.map(|_, v| v * c)
    }

    /// Pointwise `self - other`. Both must live on the same group and side.
    pub fn sub(&self, other: &Signal) -> Signal {
        debug_assert!(self.group == other.group && self.side == other.side);
        self.map(|i, v| v - other.values[i])
    }

    pub fn add(&self, other: &Signal) -> Signal {
        debug_assert!(self.group == other.group && self.side == other.side);
        self.map(|i, v| v + other.values[i])
    }

    pub fn distance(&self, other: &Signal) -> f64 {
        self.sub(other).norm()
    }

    fn map(&self, mut f: impl FnMut(usize, Complex64) -> Complex64) -> Signal {
        Signal {
            group: self.group.clone(),
            side: self.side,
            values: self.values.iter().enumerate().map(|(i, &v)| f(i, v)).collect(),
        }
    }

    /// Modulation `M_lambda f(x) = <x, lambda> f(x)` of a primal signal by a
    /// dual index.
    pub fn modulate(&self, lambda: usize) -> Result<Signal> {
        self.expect_side(Side::Primal)?;
        Ok(self.map(|x, v| v * self.group.pairing_index(x, lambda)))
    }

    /// Translation `T_mu g(xi) = g(xi - mu)` of a dual signal.
    pub fn translate(&self, mu: usize) -> Result<Signal> {
        self.expect_side(Side::Dual)?;
        let g = &self.group;
        Ok(Signal {
            group: g.clone(),
            side: self.side,
            values: (0..g.order()).map(|xi| self.values[g.sub(xi, mu)]).collect(),
        })
    }

    pub(crate) fn expect_side(&self, side: Side) -> Result<()> {
        if self.side == side {
            Ok(())
        } else {
            Err(Error::SideMismatch {
                expected: side,
                found: self.side,
            })
        }
    }

    pub(crate) fn expect_group(&self, group: &GroupSpec) -> Result<()> {
        self.group.ensure_same(group)
    }
}

/// Reference DFT by direct summation, `O(|G|^2)`.
pub fn dft(f: &Signal) -> Signal {
    let g = &f.group;
    let n = g.order();
    let scale = 1.0 / (n as f64).sqrt();
    let conj_kernel = f.side == Side::Primal;
    let values = (0..n)
        .map(|out| {
            let mut acc = ZERO;
            for (inp, v) in f.values.iter().enumerate() {
                let (x, xi) = if conj_kernel { (inp, out) } else { (out, inp) };
                let p = g.pairing_index(x, xi);
                acc += v * if conj_kernel { p.conj() } else { p };
            }
            acc * scale
        })
        .collect();
    Signal {
        group: g.clone(),
        side: f.side.opposite(),
        values,
    }
}

/// Row-column mixed-radix DFT: one 1-D FFT pass per cyclic factor.
///
/// Agrees with [`dft`] to rounding; the direct sum remains the reference.
pub fn dft_fast(f: &Signal) -> Signal {
    let g = &f.group;
    let n = g.order();
    let direction = match f.side {
        Side::Primal => FftDirection::Forward,
        Side::Dual => FftDirection::Inverse,
    };
    let mut data = f.values.clone();
    let mut planner = FftPlanner::<f64>::new();
    let mut stride = n;
    let mut line = Vec::new();
    for &len in g.factors() {
        stride /= len;
        let fft = planner.plan_fft(len, direction);
        let block = stride * len;
        for outer in (0..n).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                line.clear();
                line.extend((0..len).map(|t| data[base + t * stride]));
                fft.process(&mut line);
                for (t, v) in line.iter().enumerate() {
                    data[base + t * stride] = *v;
                }
            }
        }
    }
    let scale = 1.0 / (n as f64).sqrt();
    for v in &mut data {
        *v *= scale;
    }
    Signal {
        group: g.clone(),
        side: f.side.opposite(),
        values: data,
    }
}

/// Image of a signal in `L²(Π, L²(D))`, stored row-major as `|Π| x |D|`.
///
/// Row `i` is the fiber at the `i`-th representative of `Π`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberMatrix {
    pi: Vec<usize>,
    d: Vec<usize>,
    data: Vec<Complex64>,
}

impl FiberMatrix {
    pub fn zeros(ctx: &FiberContext) -> Self {
        let pi = ctx.pi().representatives().to_vec();
        let d = ctx.d().representatives().to_vec();
        let data = vec![ZERO; pi.len() * d.len()];
        Self { pi, d, data }
    }

    /// Builds a fiber field from explicit rows, checked against the context shape.
    pub fn from_rows(ctx: &FiberContext, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let mut m = Self::zeros(ctx);
        let found_cols = rows.first().map_or(0, Vec::len);
        if rows.len() != m.rows() || rows.iter().any(|r| r.len() != m.cols()) {
            return Err(Error::ShapeMismatch {
                expected: (m.rows(), m.cols()),
                found: (rows.len(), found_cols),
            });
        }
        m.data = rows.into_iter().flatten().collect();
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.pi.len()
    }

    pub fn cols(&self) -> usize {
        self.d.len()
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn d(&self) -> &[usize] {
        &self.d
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let c = self.cols();
        &self.data[i * c..(i + 1) * c]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        let c = self.cols();
        &mut self.data[i * c..(i + 1) * c]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols() + j]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows()).map(|i| self.row(i).to_vec()).collect()
    }

    fn check_shape(&self, ctx: &FiberContext) -> Result<()> {
        if self.pi != ctx.pi().representatives() || self.d != ctx.d().representatives() {
            return Err(Error::ShapeMismatch {
                expected: (ctx.num_fibers(), ctx.fiber_len()),
                found: (self.rows(), self.cols()),
            });
        }
        Ok(())
    }
}

/// Zak transform of a dual signal.
pub fn zak(g: &Signal, ctx: &FiberContext) -> Result<FiberMatrix> {
    g.expect_group(ctx.group())?;
    g.expect_side(Side::Dual)?;
    let group = ctx.group();
    let lambda = ctx.lambda().elements();
    let scale = 1.0 / (lambda.len() as f64).sqrt();
    let chars = character_table(ctx);
    let mut out = FiberMatrix::zeros(ctx);
    let cols = out.cols();
    for (j, &d) in ctx.d().representatives().iter().enumerate() {
        let samples: Vec<Complex64> = lambda.iter().map(|&l| g.values[group.add(d, l)]).collect();
        for (i, row_chars) in chars.iter().enumerate() {
            let mut acc = ZERO;
            for (s, c) in samples.iter().zip(row_chars) {
                acc += s * c;
            }
            out.data[i * cols + j] = acc * scale;
        }
    }
    Ok(out)
}

/// Inverse of [`zak`]: `g(d + lambda) = |Λ|^{-1/2} sum_x Zg(x)(d) conj(<x, lambda>)`.
pub fn inverse_zak(m: &FiberMatrix, ctx: &FiberContext) -> Result<Signal> {
    m.check_shape(ctx)?;
    let group = ctx.group();
    let lambda = ctx.lambda().elements();
    let scale = 1.0 / (lambda.len() as f64).sqrt();
    let chars = character_table(ctx);
    let mut values = vec![ZERO; group.order()];
    for (j, &d) in ctx.d().representatives().iter().enumerate() {
        for (l, &lam) in lambda.iter().enumerate() {
            let mut acc = ZERO;
            for (i, row_chars) in chars.iter().enumerate() {
                acc += m.get(i, j) * row_chars[l].conj();
            }
            values[group.add(d, lam)] = acc * scale;
        }
    }
    Signal::new(group, Side::Dual, values)
}

/// `chars[i][l] = <pi_i, lambda_l>`.
fn character_table(ctx: &FiberContext) -> Vec<Vec<Complex64>> {
    let group = ctx.group();
    ctx.pi()
        .representatives()
        .iter()
        .map(|&x| {
            ctx.lambda()
                .elements()
                .iter()
                .map(|&l| group.pairing_index(x, l))
                .collect()
        })
        .collect()
}

/// Modulation Zak transform `zak ∘ dft` of a primal signal.
pub fn mod_zak(f: &Signal, ctx: &FiberContext) -> Result<FiberMatrix> {
    f.expect_group(ctx.group())?;
    f.expect_side(Side::Primal)?;
    zak(&dft_fast(f), ctx)
}

pub fn inverse_mod_zak(m: &FiberMatrix, ctx: &FiberContext) -> Result<Signal> {
    Ok(dft_fast(&inverse_zak(m, ctx)?))
}

/// Fiberization image in `L²(Π, l²(Λ*))`, stored row-major as `|Π| x |Λ*|`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaStarFibers {
    pi: Vec<usize>,
    lambda_star: Vec<usize>,
    data: Vec<Complex64>,
}

impl LambdaStarFibers {
    pub fn rows(&self) -> usize {
        self.pi.len()
    }

    pub fn cols(&self) -> usize {
        self.lambda_star.len()
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn lambda_star(&self) -> &[usize] {
        &self.lambda_star
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let c = self.cols();
        &self.data[i * c..(i + 1) * c]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Fiberization of a primal signal: `entries[x, k] = (F_Ĝ F_G f)(x + k)` for
/// `x in Π`, `k in Λ*`.
pub fn fiberization(f: &Signal, ctx: &FiberContext) -> Result<LambdaStarFibers> {
    f.expect_group(ctx.group())?;
    f.expect_side(Side::Primal)?;
    let group = ctx.group();
    let twice = dft_fast(&dft_fast(f));
    let pi = ctx.pi().representatives().to_vec();
    let lambda_star = ctx.lambda_star().elements().to_vec();
    let mut data = Vec::with_capacity(pi.len() * lambda_star.len());
    for &x in &pi {
        for &k in &lambda_star {
            data.push(twice.values[group.add(x, k)]);
        }
    }
    Ok(LambdaStarFibers { pi, lambda_star, data })
}
