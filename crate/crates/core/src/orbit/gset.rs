use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::injection::OIInjection;
use crate::error::{Error, Result};

/// Transitive `G^r`-set `R^(n_1) x ... x R^(n_r)`, named by its arities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrbitSymbol(Vec<usize>);

impl OrbitSymbol {
    pub fn new(arities: Vec<usize>) -> Result<Self> {
        if arities.is_empty() {
            return Err(Error::ShapeMismatch("orbit symbol needs at least one factor".into()));
        }
        Ok(OrbitSymbol(arities))
    }

    pub(crate) fn from_vec(arities: Vec<usize>) -> Self {
        debug_assert!(!arities.is_empty());
        OrbitSymbol(arities)
    }

    pub fn point(shape: usize) -> Self {
        OrbitSymbol(vec![0; shape])
    }

    /// `R` placed in factor `t` (0-based).
    pub fn generator(shape: usize, t: usize) -> Self {
        let mut a = vec![0; shape];
        a[t] = 1;
        OrbitSymbol(a)
    }

    pub fn single(n: usize) -> Self {
        OrbitSymbol(vec![n])
    }

    pub fn shape(&self) -> usize {
        self.0.len()
    }

    pub fn arities(&self) -> &[usize] {
        &self.0
    }

    pub fn arity(&self, t: usize) -> usize {
        self.0[t]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for OrbitSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// Equivariant map between transitive sets: one injection per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransitiveMap {
    source: OrbitSymbol,
    target: OrbitSymbol,
    injections: Vec<OIInjection>,
}

impl TransitiveMap {
    pub fn new(source: OrbitSymbol, target: OrbitSymbol, injections: Vec<OIInjection>) -> Result<Self> {
        if source.shape() != target.shape() || injections.len() != source.shape() {
            return Err(Error::ShapeMismatch(format!(
                "map {source} -> {target} with {} injections",
                injections.len()
            )));
        }
        for (t, j) in injections.iter().enumerate() {
            if j.domain() != target.arity(t) || j.codomain() != source.arity(t) {
                return Err(Error::ArityMismatch(format!(
                    "factor {t}: injection {j} does not match {source} -> {target}"
                )));
            }
        }
        Ok(TransitiveMap { source, target, injections })
    }

    pub(crate) fn from_injections(injections: Vec<OIInjection>) -> Self {
        let source = OrbitSymbol::from_vec(injections.iter().map(|j| j.codomain()).collect());
        let target = OrbitSymbol::from_vec(injections.iter().map(|j| j.domain()).collect());
        TransitiveMap { source, target, injections }
    }

    pub fn identity(symbol: &OrbitSymbol) -> Self {
        TransitiveMap {
            source: symbol.clone(),
            target: symbol.clone(),
            injections: symbol.arities().iter().map(|&n| OIInjection::identity(n)).collect(),
        }
    }

    /// Unique map to the point.
    pub fn to_point(symbol: &OrbitSymbol) -> Self {
        TransitiveMap {
            source: symbol.clone(),
            target: OrbitSymbol::point(symbol.shape()),
            injections: symbol
                .arities()
                .iter()
                .map(|&n| OIInjection::new_unchecked(n, Vec::new()))
                .collect(),
        }
    }

    pub fn source(&self) -> &OrbitSymbol {
        &self.source
    }

    pub fn target(&self) -> &OrbitSymbol {
        &self.target
    }

    pub fn injections(&self) -> &[OIInjection] {
        &self.injections
    }

    pub fn is_identity(&self) -> bool {
        self.injections.iter().all(OIInjection::is_identity)
    }

    /// `next ∘ self` for `self: A -> B`, `next: B -> C`.
    pub fn then(&self, next: &TransitiveMap) -> Result<TransitiveMap> {
        if self.target != next.source {
            return Err(Error::ArityMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source, self.target, next.source, next.target
            )));
        }
        let injections = next
            .injections
            .iter()
            .zip(&self.injections)
            .map(|(g, f)| g.then(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(TransitiveMap { source: self.source.clone(), target: next.target.clone(), injections })
    }
}

impl fmt::Display for TransitiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} [{}]", self.source, self.target, self.injections.iter().join(" "))
    }
}

/// Finite `G^r`-set as an ordered list of orbits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GSet {
    shape: usize,
    orbits: Vec<OrbitSymbol>,
}

impl GSet {
    pub fn new(shape: usize, orbits: Vec<OrbitSymbol>) -> Result<Self> {
        if shape == 0 {
            return Err(Error::ShapeMismatch("shape must be at least 1".into()));
        }
        if let Some(o) = orbits.iter().find(|o| o.shape() != shape) {
            return Err(Error::ShapeMismatch(format!("orbit {o} in a set of shape {shape}")));
        }
        Ok(GSet { shape, orbits })
    }

    pub fn empty(shape: usize) -> Self {
        GSet { shape, orbits: Vec::new() }
    }

    pub fn point(shape: usize) -> Self {
        GSet { shape, orbits: vec![OrbitSymbol::point(shape)] }
    }

    pub fn transitive(symbol: OrbitSymbol) -> Self {
        GSet { shape: symbol.shape(), orbits: vec![symbol] }
    }

    /// `R^(n)` for the one-factor group.
    pub fn power(n: usize) -> Self {
        GSet::transitive(OrbitSymbol::single(n))
    }

    pub fn shape(&self) -> usize {
        self.shape
    }

    pub fn orbits(&self) -> &[OrbitSymbol] {
        &self.orbits
    }

    pub fn orbit(&self, i: usize) -> &OrbitSymbol {
        &self.orbits[i]
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn disjoint_union(&self, other: &GSet) -> Result<GSet> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!("{} vs {}", self.shape, other.shape)));
        }
        let mut orbits = self.orbits.clone();
        orbits.extend(other.orbits.iter().cloned());
        Ok(GSet { shape: self.shape, orbits })
    }
}

impl fmt::Display for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.orbits.iter().join(", "))
    }
}

/// Equivariant map: each source orbit goes to a target orbit by a transitive map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSetMap {
    source: GSet,
    target: GSet,
    assignment: Vec<(usize, TransitiveMap)>,
}

impl GSetMap {
    pub fn new(source: GSet, target: GSet, assignment: Vec<(usize, TransitiveMap)>) -> Result<Self> {
        if source.shape() != target.shape() {
            return Err(Error::ShapeMismatch("map between sets of different shape".into()));
        }
        if assignment.len() != source.len() {
            return Err(Error::ArityMismatch(format!(
                "{} assignments for {} source orbits",
                assignment.len(),
                source.len()
            )));
        }
        for (i, (j, m)) in assignment.iter().enumerate() {
            if *j >= target.len() || m.source() != source.orbit(i) || m.target() != target.orbit(*j) {
                return Err(Error::ArityMismatch(format!("orbit {i} assigned inconsistently")));
            }
        }
        Ok(GSetMap { source, target, assignment })
    }

    pub fn identity(x: &GSet) -> Self {
        GSetMap {
            source: x.clone(),
            target: x.clone(),
            assignment: x
                .orbits()
                .iter()
                .enumerate()
                .map(|(i, o)| (i, TransitiveMap::identity(o)))
                .collect(),
        }
    }

    pub fn to_point(x: &GSet) -> Self {
        GSetMap {
            source: x.clone(),
            target: GSet::point(x.shape()),
            assignment: x.orbits().iter().map(|o| (0, TransitiveMap::to_point(o))).collect(),
        }
    }

    /// Diagonal `X -> X x X`; the target is the list of components of `X x X`.
    pub fn diagonal(x: &GSet) -> Self {
        let target = super::product_gset(&[x.clone(), x.clone()]);
        let comps = super::product_decompose(&[x.clone(), x.clone()]);
        let assignment = x
            .orbits()
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let d = super::Component::diagonal(i, o);
                let j = comps.iter().position(|c| *c == d).expect("diagonal component");
                (j, TransitiveMap::identity(o))
            })
            .collect();
        GSetMap { source: x.clone(), target, assignment }
    }

    /// Single transitive map viewed as a map of one-orbit sets.
    pub fn from_transitive(m: &TransitiveMap) -> Self {
        GSetMap {
            source: GSet::transitive(m.source().clone()),
            target: GSet::transitive(m.target().clone()),
            assignment: vec![(0, m.clone())],
        }
    }

    pub fn source(&self) -> &GSet {
        &self.source
    }

    pub fn target(&self) -> &GSet {
        &self.target
    }

    pub fn assignment(&self) -> &[(usize, TransitiveMap)] {
        &self.assignment
    }

    pub fn compose(&self, next: &GSetMap) -> Result<GSetMap> {
        if self.target != next.source {
            return Err(Error::ArityMismatch("composing maps with mismatched middle set".into()));
        }
        let assignment = self
            .assignment
            .iter()
            .map(|(j, m)| {
                let (k, n) = &next.assignment[*j];
                Ok((*k, m.then(n)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GSetMap { source: self.source.clone(), target: next.target.clone(), assignment })
    }

    /// Bijective on orbits with identity transitive maps.
    pub fn is_isomorphism(&self) -> bool {
        if self.source.len() != self.target.len() {
            return false;
        }
        let mut hit = vec![false; self.target.len()];
        for (j, m) in &self.assignment {
            if hit[*j] || !m.is_identity() {
                return false;
            }
            hit[*j] = true;
        }
        true
    }
}

impl TransitiveMap {
    /// Map assembled from per-factor injections.
    pub fn from_parts(injections: Vec<OIInjection>) -> Self {
        Self::from_injections(injections)
    }
}
