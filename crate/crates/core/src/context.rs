use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Section, Side, Subgroup};

/// Everything fixed by the choice of modulation subgroup `Λ ≤ Ĝ`:
/// the annihilator `Λ* ≤ G`, a section `Π` of `G/Λ*` and a section `D` of `Ĝ/Λ`.
///
/// `|Π| = |Λ|` and `|Π| * |D| = |G|`.
#[derive(Clone, Debug)]
pub struct FiberContext {
    group: GroupSpec,
    lambda: Subgroup,
    lambda_star: Subgroup,
    pi: Section,
    d: Section,
}

impl FiberContext {
    pub fn new(lambda: Subgroup) -> Result<Self> {
        if lambda.side() != Side::Dual {
            return Err(Error::SideMismatch {
                expected: Side::Dual,
                found: lambda.side(),
            });
        }
        let group = lambda.group().clone();
        let lambda_star = lambda.annihilator();
        let pi = Section::new(&lambda_star);
        let d = Section::new(&lambda);
        Ok(Self {
            group,
            lambda,
            lambda_star,
            pi,
            d,
        })
    }

    /// Context for `Λ = <generators>` given as dual-group indices.
    pub fn from_generators(group: &GroupSpec, lambda_generators: &[usize]) -> Result<Self> {
        Self::new(Subgroup::from_generators(group, Side::Dual, lambda_generators)?)
    }

    pub fn from_elements(group: &GroupSpec, lambda_generators: &[GroupElement]) -> Result<Self> {
        Self::new(Subgroup::from_elements(group, Side::Dual, lambda_generators)?)
    }

    /// `Λ = Ĝ`: then `Λ* = {0}`, `Π = G` and `|D| = 1`.
    pub fn full_dual(group: &GroupSpec) -> Self {
        Self::new(Subgroup::whole(group, Side::Dual)).expect("dual side")
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn lambda(&self) -> &Subgroup {
        &self.lambda
    }

    pub fn lambda_star(&self) -> &Subgroup {
        &self.lambda_star
    }

    pub fn pi(&self) -> &Section {
        &self.pi
    }

    pub fn d(&self) -> &Section {
        &self.d
    }

    pub fn num_fibers(&self) -> usize {
        self.pi.len()
    }

    pub fn fiber_len(&self) -> usize {
        self.d.len()
    }

    pub fn is_full_dual(&self) -> bool {
        self.lambda.order() == self.group.order()
    }

    pub fn same_as(&self, other: &FiberContext) -> bool {
        self.lambda.same_set(&other.lambda)
    }

    pub(crate) fn ensure_same(&self, other: &FiberContext) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }
}
