//! JSON encodings.
//!
//! * group: `{"factors": [n1, ..., nk]}`
//! * element: residue array `[x1, ..., xk]`
//! * subgroup: `{"generators": [[...], ...]}`
//! * signal: array of `[re, im]` pairs in mixed-radix order
//! * fiber matrix: `{"pi": [reps], "d": [reps], "rows": [[[re, im], ...], ...]}`
//! * space: `{"group": ..., "lambda_generators": [[...], ...], "generators": [signal, ...]}`
//! * range function: `{"pi": [reps], "dims": [...], "bases": [[column, ...], ...]}`

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::context::FiberContext;
use crate::error::{Error, Result};
use crate::fiber::{ModInvariantSpace, RangeFunction};
use crate::group::{GroupSpec, Side, Subgroup};
use crate::transforms::{FiberMatrix, Signal};

pub type ComplexJson = [f64; 2];
pub type SignalJson = Vec<ComplexJson>;
pub type ElementJson = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub factors: Vec<usize>,
}

impl GroupJson {
    pub fn build(&self) -> Result<GroupSpec> {
        GroupSpec::new(self.factors.clone())
    }

    pub fn from_group(group: &GroupSpec) -> Self {
        Self {
            factors: group.factors().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupJson {
    pub generators: Vec<ElementJson>,
}

impl SubgroupJson {
    pub fn build(&self, group: &GroupSpec, side: Side) -> Result<Subgroup> {
        let gens = elements_to_indices(group, &self.generators)?;
        Subgroup::from_generators(group, side, &gens)
    }

    pub fn from_subgroup(s: &Subgroup) -> Self {
        Self {
            generators: indices_to_elements(s.group(), s.generators()),
        }
    }
}

pub fn elements_to_indices(group: &GroupSpec, elements: &[ElementJson]) -> Result<Vec<usize>> {
    elements.iter().map(|e| group.index_of(e)).collect()
}

pub fn indices_to_elements(group: &GroupSpec, indices: &[usize]) -> Vec<ElementJson> {
    indices.iter().map(|&i| group.residues(i)).collect()
}

pub fn complex_to_json(c: Complex64) -> ComplexJson {
    [c.re, c.im]
}

pub fn complex_from_json(c: &ComplexJson) -> Result<Complex64> {
    if c.iter().all(|v| v.is_finite()) {
        Ok(Complex64::new(c[0], c[1]))
    } else {
        Err(Error::Precondition(format!("non-finite complex value {c:?}")))
    }
}

pub fn vector_to_json(v: &[Complex64]) -> SignalJson {
    v.iter().copied().map(complex_to_json).collect()
}

pub fn signal_to_json(s: &Signal) -> SignalJson {
    vector_to_json(s.values())
}

pub fn signal_from_json(group: &GroupSpec, side: Side, values: &[ComplexJson]) -> Result<Signal> {
    let v = values.iter().map(complex_from_json).collect::<Result<Vec<_>>>()?;
    Signal::new(group, side, v)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberMatrixJson {
    pub pi: Vec<ElementJson>,
    pub d: Vec<ElementJson>,
    pub rows: Vec<Vec<ComplexJson>>,
}

impl FiberMatrixJson {
    pub fn from_matrix(group: &GroupSpec, m: &FiberMatrix) -> Self {
        Self {
            pi: indices_to_elements(group, m.pi()),
            d: indices_to_elements(group, m.d()),
            rows: (0..m.rows()).map(|i| vector_to_json(m.row(i))).collect(),
        }
    }

    pub fn build(&self, ctx: &FiberContext) -> Result<FiberMatrix> {
        let group = ctx.group();
        if elements_to_indices(group, &self.pi)? != ctx.pi().representatives()
            || elements_to_indices(group, &self.d)? != ctx.d().representatives()
        {
            return Err(Error::ShapeMismatch {
                expected: (ctx.num_fibers(), ctx.fiber_len()),
                found: (self.pi.len(), self.d.len()),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(complex_from_json).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FiberMatrix::from_rows(ctx, rows)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDescription {
    pub group: GroupJson,
    #[serde(default)]
    pub lambda_generators: Vec<ElementJson>,
    #[serde(default)]
    pub generators: Vec<SignalJson>,
}

impl SpaceDescription {
    pub fn context(&self) -> Result<FiberContext> {
        let group = self.group.build()?;
        let gens = elements_to_indices(&group, &self.lambda_generators)?;
        FiberContext::from_generators(&group, &gens)
    }

    pub fn build(&self) -> Result<ModInvariantSpace> {
        let ctx = self.context()?;
        self.build_in(&ctx)
    }

    /// Builds the space in an existing context, which must match the description.
    pub fn build_in(&self, ctx: &FiberContext) -> Result<ModInvariantSpace> {
        let own = self.context()?;
        ctx.ensure_same(&own)?;
        let gens = self
            .generators
            .iter()
            .map(|s| signal_from_json(ctx.group(), Side::Primal, s))
            .collect::<Result<Vec<_>>>()?;
        ModInvariantSpace::generated(ctx, gens)
    }

    pub fn from_space(space: &ModInvariantSpace) -> Self {
        let ctx = space.context();
        Self {
            group: GroupJson::from_group(ctx.group()),
            lambda_generators: indices_to_elements(ctx.group(), ctx.lambda().generators()),
            generators: space.generators().iter().map(signal_to_json).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangeFunctionJson {
    pub pi: Vec<ElementJson>,
    pub dims: Vec<usize>,
    /// Per fiber, the orthonormal basis columns.
    pub bases: Vec<Vec<SignalJson>>,
}

impl RangeFunctionJson {
    pub fn from_range(group: &GroupSpec, rf: &RangeFunction) -> Self {
        Self {
            pi: indices_to_elements(group, rf.pi()),
            dims: rf.dims(),
            bases: rf
                .bases()
                .iter()
                .map(|b| b.iter().map(|v| vector_to_json(v)).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::mod_zak;

    #[test]
    fn space_description_round_trip() {
        let text = r#"{"group":{"factors":[4]},"lambda_generators":[[2]],"generators":[[[1,0],[0,0],[0,0],[0,0]]]}"#;
        let desc: SpaceDescription = serde_json::from_str(text).unwrap();
        let w = desc.build().unwrap();
        assert_eq!(w.dims(), vec![1, 0]);
        let again = SpaceDescription::from_space(&w);
        assert_eq!(again, desc);
    }

    #[test]
    fn fiber_matrix_round_trip() {
        let g = GroupSpec::new(vec![2, 4]).unwrap();
        let ctx = FiberContext::from_generators(&g, &[g.index_of(&[1, 2]).unwrap()]).unwrap();
        let f = Signal::from_fn(&g, Side::Primal, |i| Complex64::new(i as f64, 1.0 / (1.0 + i as f64)));
        let m = mod_zak(&f, &ctx).unwrap();
        let json = FiberMatrixJson::from_matrix(&g, &m);
        let text = serde_json::to_string(&json).unwrap();
        let back: FiberMatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build(&ctx).unwrap(), m);
    }

    #[test]
    fn rejects_bad_input() {
        let g = GroupSpec::cyclic(4).unwrap();
        assert!(signal_from_json(&g, Side::Primal, &[[1.0, 0.0]]).is_err());
        assert!(signal_from_json(&g, Side::Primal, &[[f64::NAN, 0.0]; 4]).is_err());
        let bad = SpaceDescription {
            group: GroupJson { factors: vec![4] },
            lambda_generators: vec![vec![5]],
            generators: vec![],
        };
        assert!(matches!(bad.build(), Err(Error::InvalidElement { .. })));
        assert!(serde_json::from_str::<GroupJson>(r#"{"factors":[4],"extra":1}"#).is_err());
    }

    #[test]
    fn subgroup_json() {
        let g = GroupSpec::new(vec![6, 2]).unwrap();
        let s: SubgroupJson = serde_json::from_str(r#"{"generators":[[3,1]]}"#).unwrap();
        let h = s.build(&g, Side::Primal).unwrap();
        assert_eq!(h.order(), 2);
        assert_eq!(SubgroupJson::from_subgroup(&h), s);
    }
}
