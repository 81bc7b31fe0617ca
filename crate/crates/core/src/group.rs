//! Finite abelian groups `Z_{n_1} x ... x Z_{n_k}`, their duals, subgroups,
//! annihilators and coset sections.
//!
//! Elements are addressed by their mixed-radix index: the residue tuple
//! `(x_1, ..., x_k)` maps to `sum_j x_j * stride_j` with the first factor most
//! significant, so index order is lexicographic order on residues. The dual
//! group is carried by the same [`GroupSpec`]; the pairing
//! `<x, xi> = exp(2 pi i sum_j x_j xi_j / n_j)` fixes the identification.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which side of the duality an element or signal lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The group `G` itself.
    Primal,
    /// The dual group `Ĝ`.
    Dual,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Primal => Side::Dual,
            Side::Dual => Side::Primal,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Primal => f.write_str("primal"),
            Side::Dual => f.write_str("dual"),
        }
    }
}

struct GroupInner {
    factors: Vec<usize>,
    strides: Vec<usize>,
    order: usize,
    /// lcm of the factors; every pairing value is an `exponent`-th root of unity.
    exponent: usize,
    /// `exponent / n_j` per factor.
    weights: Vec<usize>,
    roots: Vec<Complex64>,
}

/// A finite abelian group given as an explicit product of cyclic factors.
///
/// Cloning is cheap; the factor data and root-of-unity table are shared.
#[derive(Clone)]
pub struct GroupSpec {
    inner: Arc<GroupInner>,
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl GroupSpec {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(|&n| n < 2) {
            return Err(Error::InvalidFactors(factors));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| Error::InvalidFactors(factors.clone()))?;
        let mut strides = vec![1usize; factors.len()];
        for j in (0..factors.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * factors[j + 1];
        }
        let exponent = factors.iter().fold(1usize, |l, &n| l / gcd(l, n) * n);
        let weights = factors.iter().map(|&n| exponent / n).collect();
        let roots = (0..exponent)
            .map(|r| Complex64::from_polar(1.0, TAU * r as f64 / exponent as f64))
            .collect();
        Ok(Self {
            inner: Arc::new(GroupInner {
                factors,
                strides,
                order,
                exponent,
                weights,
                roots,
            }),
        })
    }

    /// Cyclic group `Z_n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[usize] {
        &self.inner.factors
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn rank(&self) -> usize {
        self.inner.factors.len()
    }

    /// Least common multiple of the cyclic orders.
    pub fn exponent(&self) -> usize {
        self.inner.exponent
    }

    pub fn residues(&self, index: usize) -> Vec<usize> {
        debug_assert!(index < self.order());
        self.inner
            .factors
            .iter()
            .zip(&self.inner.strides)
            .map(|(&n, &s)| (index / s) % n)
            .collect()
    }

    /// Mixed-radix index of a residue tuple. Residues must already be reduced.
    pub fn index_of(&self, residues: &[usize]) -> Result<usize> {
        if residues.len() != self.rank() || residues.iter().zip(self.factors()).any(|(&x, &n)| x >= n) {
            return Err(Error::InvalidElement {
                residues: residues.to_vec(),
                factors: self.factors().to_vec(),
            });
        }
        Ok(residues.iter().zip(&self.inner.strides).map(|(&x, &s)| x * s).sum())
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&n, &s) in self.inner.factors.iter().zip(&self.inner.strides) {
            let r = ((a / s) % n + (b / s) % n) % n;
            out += r * s;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        let mut out = 0;
        for (&n, &s) in self.inner.factors.iter().zip(&self.inner.strides) {
            let r = (a / s) % n;
            out += ((n - r) % n) * s;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Exponent `r` with `<x, xi> = exp(2 pi i r / exponent)`.
    pub fn phase(&self, x: usize, xi: usize) -> usize {
        let l = self.inner.exponent;
        let mut acc = 0usize;
        for ((&n, &s), &w) in self
            .inner
            .factors
            .iter()
            .zip(&self.inner.strides)
            .zip(&self.inner.weights)
        {
            let prod = ((x / s) % n) * ((xi / s) % n) % n;
            acc = (acc + prod * w) % l;
        }
        acc
    }

    /// `<x, xi>` for a primal index `x` and a dual index `xi`.
    pub fn pairing_index(&self, x: usize, xi: usize) -> Complex64 {
        self.inner.roots[self.phase(x, xi)]
    }

    /// `exp(2 pi i r / exponent)`.
    pub fn root(&self, r: usize) -> Complex64 {
        self.inner.roots[r % self.inner.exponent]
    }

    pub fn element(&self, index: usize, side: Side) -> GroupElement {
        GroupElement {
            group: self.clone(),
            side,
            index,
        }
    }

    pub fn element_from_residues(&self, residues: &[usize], side: Side) -> Result<GroupElement> {
        Ok(self.element(self.index_of(residues)?, side))
    }

    pub fn identity(&self, side: Side) -> GroupElement {
        self.element(0, side)
    }

    pub fn same_as(&self, other: &GroupSpec) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.factors() == other.factors()
    }

    pub(crate) fn ensure_same(&self, other: &GroupSpec) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                left: self.factors().to_vec(),
                right: other.factors().to_vec(),
            })
        }
    }
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for GroupSpec {}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupSpec")
            .field("factors", &self.inner.factors)
            .field("order", &self.inner.order)
            .finish()
    }
}

/// An element of `G` or `Ĝ`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupElement {
    group: GroupSpec,
    side: Side,
    index: usize,
}

impl GroupElement {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn residues(&self) -> Vec<usize> {
        self.group.residues(self.index)
    }

    pub fn is_identity(&self) -> bool {
        self.index == 0
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.group.ensure_same(&other.group)?;
        if self.side != other.side {
            return Err(Error::SideMismatch {
                expected: self.side,
                found: other.side,
            });
        }
        Ok(self.group.element(self.group.add(self.index, other.index), self.side))
    }

    pub fn neg(&self) -> GroupElement {
        self.group.element(self.group.neg(self.index), self.side)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.side, self.residues())
    }
}

/// Character pairing `<x, xi> = exp(2 pi i sum_j x_j xi_j / n_j)`.
///
/// `x` must be a primal element and `xi` a dual element of the same group.
pub fn pairing(x: &GroupElement, xi: &GroupElement) -> Result<Complex64> {
    x.group.ensure_same(&xi.group)?;
    if x.side != Side::Primal {
        return Err(Error::SideMismatch {
            expected: Side::Primal,
            found: x.side,
        });
    }
    if xi.side != Side::Dual {
        return Err(Error::SideMismatch {
            expected: Side::Dual,
            found: xi.side,
        });
    }
    Ok(x.group.pairing_index(x.index, xi.index))
}

/// A subgroup of `G` or `Ĝ` with its full, index-sorted enumeration.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: GroupSpec,
    side: Side,
    generators: Vec<usize>,
    elements: Vec<usize>,
    member: Vec<bool>,
}

impl Subgroup {
    /// Closure of `generators` under addition. Finite order makes negation automatic.
    pub fn from_generators(group: &GroupSpec, side: Side, generators: &[usize]) -> Result<Self> {
        let order = group.order();
        if let Some(&bad) = generators.iter().find(|&&g| g >= order) {
            return Err(Error::InvalidElement {
                residues: vec![bad],
                factors: group.factors().to_vec(),
            });
        }
        let mut member = vec![false; order];
        member[0] = true;
        let mut frontier = vec![0usize];
        while let Some(e) = frontier.pop() {
            for &g in generators {
                let s = group.add(e, g);
                if !member[s] {
                    member[s] = true;
                    frontier.push(s);
                }
            }
        }
        Ok(Self::from_membership(group, side, generators.to_vec(), member))
    }

    pub fn from_elements(group: &GroupSpec, side: Side, generators: &[GroupElement]) -> Result<Self> {
        let mut idx = Vec::with_capacity(generators.len());
        for g in generators {
            group.ensure_same(g.group())?;
            if g.side() != side {
                return Err(Error::SideMismatch {
                    expected: side,
                    found: g.side(),
                });
            }
            idx.push(g.index());
        }
        Self::from_generators(group, side, &idx)
    }

    pub fn trivial(group: &GroupSpec, side: Side) -> Self {
        let mut member = vec![false; group.order()];
        member[0] = true;
        Self::from_membership(group, side, Vec::new(), member)
    }

    pub fn whole(group: &GroupSpec, side: Side) -> Self {
        let member = vec![true; group.order()];
        let mut s = Self::from_membership(group, side, Vec::new(), member);
        s.generators = greedy_generators(group, &s.elements);
        s
    }

    fn from_membership(group: &GroupSpec, side: Side, generators: Vec<usize>, member: Vec<bool>) -> Self {
        let elements = member.iter().enumerate().filter_map(|(i, &m)| m.then_some(i)).collect();
        Self {
            group: group.clone(),
            side,
            generators,
            elements,
            member,
        }
    }

    /// `{x in G : <x, lambda> = 1 for all lambda}` (or the dual statement when
    /// `self` lives in `G`).
    pub fn annihilator(&self) -> Subgroup {
        let g = &self.group;
        let test: &[usize] = if self.generators.is_empty() {
            &self.elements
        } else {
            &self.generators
        };
        let member: Vec<bool> = (0..g.order())
            .map(|x| test.iter().all(|&l| g.phase(x, l) == 0))
            .collect();
        let mut out = Self::from_membership(g, self.side.opposite(), Vec::new(), member);
        out.generators = greedy_generators(g, &out.elements);
        out
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Element indices in increasing mixed-radix order.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, index: usize) -> bool {
        self.member.get(index).copied().unwrap_or(false)
    }

    /// Same parent group, side and element set.
    pub fn same_set(&self, other: &Subgroup) -> bool {
        self.group == other.group && self.side == other.side && self.elements == other.elements
    }
}

fn greedy_generators(group: &GroupSpec, elements: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut member = vec![false; group.order()];
    member[0] = true;
    let mut closure = vec![0usize];
    for &e in elements {
        if member[e] {
            continue;
        }
        gens.push(e);
        // extend the closure by multiples of the new generator
        let base = closure.clone();
        let mut step = e;
        while !member[step] {
            for &c in &base {
                let s = group.add(c, step);
                if !member[s] {
                    member[s] = true;
                    closure.push(s);
                }
            }
            step = group.add(step, e);
        }
    }
    gens
}

/// A transversal of `parent / subgroup`: one index-minimal representative per coset.
#[derive(Clone, Debug)]
pub struct Section {
    subgroup: Subgroup,
    representatives: Vec<usize>,
    coset_index: Vec<usize>,
}

impl Section {
    pub fn new(subgroup: &Subgroup) -> Self {
        let group = subgroup.group();
        let unset = usize::MAX;
        let mut coset_index = vec![unset; group.order()];
        let mut representatives = Vec::with_capacity(group.order() / subgroup.order());
        for g in 0..group.order() {
            if coset_index[g] != unset {
                continue;
            }
            let pos = representatives.len();
            representatives.push(g);
            for &h in subgroup.elements() {
                coset_index[group.add(g, h)] = pos;
            }
        }
        Self {
            subgroup: subgroup.clone(),
            representatives,
            coset_index,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        self.subgroup.group()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn side(&self) -> Side {
        self.subgroup.side()
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Position (in `representatives`) of the coset containing `g`.
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_index[g]
    }

    /// Splits `g = rep + h` with `rep` a representative and `h` in the subgroup.
    pub fn decompose(&self, g: usize) -> (usize, usize) {
        let rep = self.representatives[self.coset_index[g]];
        (rep, self.group().sub(g, rep))
    }

    pub fn decompose_element(&self, g: &GroupElement) -> Result<(GroupElement, GroupElement)> {
        self.group().ensure_same(g.group())?;
        if g.side() != self.side() {
            return Err(Error::SideMismatch {
                expected: self.side(),
                found: g.side(),
            });
        }
        let (rep, h) = self.decompose(g.index());
        Ok((
            self.group().element(rep, self.side()),
            self.group().element(h, self.side()),
        ))
    }
}
