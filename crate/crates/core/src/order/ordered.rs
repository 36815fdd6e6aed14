use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use itertools::Itertools;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::orbit::{
    constrained_merges, merge_patterns, power_words, product_decompose, GSet, GSetMap, Letter, OIInjection, OrbitSymbol,
    TransitiveMap, Word, L, R,
};
use crate::orbit::Component;

/// A `G^r`-set with a total order, stored as the set of components of
/// `X x X` on which `x < y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedGSet {
    carrier: GSet,
    less: BTreeSet<Component>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderViolation {
    /// A component of `X x X` covered zero or several times by less, diagonal, less^op.
    Totality(Component),
    /// A component of `X^3` with `x1 < x2 < x3` but not `x1 < x3`.
    Transitivity(Component),
    /// A key of `less` that is not a component of `X x X`.
    Malformed(String),
}

impl fmt::Display for OrderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderViolation::Totality(c) => write!(f, "totality fails at {c}"),
            OrderViolation::Transitivity(c) => write!(f, "transitivity fails at {c}"),
            OrderViolation::Malformed(s) => write!(f, "malformed relation: {s}"),
        }
    }
}

impl OrderedGSet {
    /// Unchecked constructor; see [`OrderedGSet::verify`].
    pub fn new(carrier: GSet, less: BTreeSet<Component>) -> Self {
        OrderedGSet { carrier, less }
    }

    pub fn checked(carrier: GSet, less: BTreeSet<Component>) -> Result<Self> {
        let o = OrderedGSet { carrier, less };
        o.verify().map_err(|v| Error::InvalidOrder(v.to_string()))?;
        Ok(o)
    }

    pub fn carrier(&self) -> &GSet {
        &self.carrier
    }

    pub fn less(&self) -> &BTreeSet<Component> {
        &self.less
    }

    pub fn shape(&self) -> usize {
        self.carrier.shape()
    }

    pub fn is_less(&self, c: &Component) -> bool {
        self.less.contains(c)
    }

    pub fn zero(shape: usize) -> Self {
        OrderedGSet { carrier: GSet::empty(shape), less: BTreeSet::new() }
    }

    pub fn unit(shape: usize) -> Self {
        OrderedGSet { carrier: GSet::point(shape), less: BTreeSet::new() }
    }

    /// `R` in factor `t` with its natural order.
    pub fn generator(shape: usize, t: usize) -> Self {
        let words = (0..shape)
            .map(|s| if s == t { Word::new(vec![L, R]) } else { Word::empty() })
            .collect();
        OrderedGSet {
            carrier: GSet::transitive(OrbitSymbol::generator(shape, t)),
            less: [Component::new(vec![0, 0], words)].into_iter().collect(),
        }
    }

    pub fn reverse(&self) -> Self {
        OrderedGSet { carrier: self.carrier.clone(), less: self.less.iter().map(Component::transpose).collect() }
    }

    /// `A ⊕ B` with all of `A` before `B`.
    pub fn lex_sum(a: &Self, b: &Self) -> Result<Self> {
        let carrier = a.carrier.disjoint_union(&b.carrier)?;
        let shift = a.carrier.len();
        let mut less = a.less.clone();
        less.extend(b.less.iter().map(|c| c.with_orbits(vec![c.orbit(0) + shift, c.orbit(1) + shift])));
        if !a.carrier.is_empty() && !b.carrier.is_empty() {
            for c in product_decompose(&[a.carrier.clone(), b.carrier.clone()]) {
                less.insert(c.with_orbits(vec![c.orbit(0), c.orbit(1) + shift]));
            }
        }
        Ok(OrderedGSet { carrier, less })
    }

    /// `A ⊗ B` ordered by the first factor, then the second.
    pub fn lex_product(a: &Self, b: &Self) -> Result<Self> {
        if a.shape() != b.shape() {
            return Err(Error::ShapeMismatch("lexicographic product of different shapes".into()));
        }
        if a.carrier.is_empty() || b.carrier.is_empty() {
            return Ok(Self::zero(a.shape()));
        }
        let inner = product_decompose(&[a.carrier.clone(), b.carrier.clone()]);
        let carrier = GSet::new(a.shape(), inner.iter().map(Component::ambient).collect())?;
        let mut less = BTreeSet::new();
        for k in pair_components(&carrier) {
            let flat = k.flatten(&[&inner[k.orbit(0)], &inner[k.orbit(1)]]);
            let (pa, _) = flat.project(&[0, 2]);
            let in_less = a.is_less(&pa) || (pa.is_diagonal() && b.is_less(&flat.project(&[1, 3]).0));
            if in_less {
                less.insert(k);
            }
        }
        Ok(OrderedGSet { carrier, less })
    }

    /// `A^(n)` ordered lexicographically after permuting coordinates by `perm`
    /// (coordinates are compared in the order `perm[0], perm[1], ...`).
    pub fn tuple_power(&self, n: usize, perm: &[usize]) -> Result<Self> {
        check_perm(n, perm)?;
        let level = tuples(self, n);
        let carrier = level.gset().clone();
        let mut less = BTreeSet::new();
        if !carrier.is_empty() {
            for k in pair_components(&carrier) {
                let flat = k.flatten(&[&level.components[k.orbit(0)], &level.components[k.orbit(1)]]);
                for &i in perm {
                    let (pc, _) = flat.project(&[i, n + i]);
                    if self.is_less(&pc) {
                        less.insert(k);
                        break;
                    }
                    if !pc.is_diagonal() {
                        break;
                    }
                }
            }
        }
        Ok(OrderedGSet { carrier, less })
    }

    /// Induced order on the orbits `keep`, listed in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let mut index = HashMap::new();
        for (new, &old) in keep.iter().enumerate() {
            if old >= self.carrier.len() || index.insert(old, new).is_some() {
                return Err(Error::Invalid(format!("bad orbit selection {keep:?}")));
            }
        }
        let carrier = GSet::new(self.shape(), keep.iter().map(|&i| self.carrier.orbit(i).clone()).collect())?;
        let less = self
            .less
            .iter()
            .filter_map(|c| {
                let (a, b) = (index.get(&c.orbit(0))?, index.get(&c.orbit(1))?);
                Some(c.with_orbits(vec![*a, *b]))
            })
            .collect();
        Ok(OrderedGSet { carrier, less })
    }

    /// Checks totality over `X^2` and transitivity over `X^3`.
    pub fn verify(&self) -> std::result::Result<(), OrderViolation> {
        let x = &self.carrier;
        for c in &self.less {
            if let Err(e) = c.validate(&[x, x]) {
                return Err(OrderViolation::Malformed(format!("{c}: {e}")));
            }
        }
        if x.is_empty() {
            return Ok(());
        }
        for c in pair_components(x) {
            let hits = [self.less.contains(&c), c.is_diagonal(), self.less.contains(&c.transpose())];
            if hits.iter().filter(|&&h| h).count() != 1 {
                return Err(OrderViolation::Totality(c));
            }
        }
        let mut starting: FxHashMap<usize, Vec<&Component>> = FxHashMap::default();
        // (first orbit, last orbit, packed words), one u64 per factor
        let mut keys: FxHashSet<(usize, usize, Vec<u64>)> = FxHashSet::default();
        for c in &self.less {
            starting.entry(c.orbit(0)).or_default().push(c);
            let Some(k) = c.words().iter().map(pack).collect::<Option<Vec<u64>>>() else {
                return self.verify_transitivity_slow();
            };
            keys.insert((c.orbit(0), c.orbit(1), k));
        }
        let single: FxHashSet<(usize, usize, u64)> =
            if self.shape() == 1 { keys.iter().map(|(a, c, k)| (*a, *c, k[0])).collect() } else { FxHashSet::default() };
        let failing = self.less.par_iter().find_map_any(|c1| {
            let mut scratch = Vec::new();
            starting.get(&c1.orbit(1))?.iter().find_map(|c2| {
                let (a, c) = (c1.orbit(0), c2.orbit(1));
                let missing = if self.shape() == 1 {
                    scratch.clear();
                    outer_keys(c1.words()[0].letters(), c2.words()[0].letters(), 0, &mut scratch);
                    scratch.iter().any(|&k| !single.contains(&(a, c, k)))
                } else {
                    let per_factor: Vec<Vec<u64>> = c1
                        .words()
                        .iter()
                        .zip(c2.words())
                        .map(|(w, v)| {
                            let mut ks = Vec::new();
                            outer_keys(w.letters(), v.letters(), 0, &mut ks);
                            ks.sort_unstable();
                            ks.dedup();
                            ks
                        })
                        .collect();
                    per_factor
                        .iter()
                        .map(|f| f.iter().copied())
                        .multi_cartesian_product()
                        .any(|k| !keys.contains(&(a, c, k)))
                };
                missing.then_some((c1, *c2))
            })
        });
        let bad = failing.and_then(|(c1, c2)| self.witness(c1, c2));
        bad.map_or(Ok(()), |t| Err(OrderViolation::Transitivity(t)))
    }

    /// A component of `X^3` over `c1` and `c2` whose outer projection is not less.
    fn witness(&self, c1: &Component, c2: &Component) -> Option<Component> {
        glued_factors(c1, c2)
            .iter()
            .map(|f| f.iter())
            .multi_cartesian_product()
            .find(|choice| {
                let outer = choice.iter().map(|(_, o)| o.clone()).collect();
                !self.less.contains(&Component::new(vec![c1.orbit(0), c2.orbit(1)], outer))
            })
            .map(|choice| {
                let words = choice.iter().map(|(t, _)| t.clone()).collect();
                Component::new(vec![c1.orbit(0), c1.orbit(1), c2.orbit(1)], words)
            })
    }

    fn verify_transitivity_slow(&self) -> std::result::Result<(), OrderViolation> {
        let mut starting: HashMap<usize, Vec<&Component>> = HashMap::new();
        for c in &self.less {
            starting.entry(c.orbit(0)).or_default().push(c);
        }
        for c1 in &self.less {
            for c2 in starting.get(&c1.orbit(1)).into_iter().flatten() {
                if let Some(t) = self.witness(c1, c2) {
                    return Err(OrderViolation::Transitivity(t));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for OrderedGSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "carrier {}; less {{", self.carrier)?;
        for (i, c) in self.less.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn check_perm(n: usize, perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::Invalid(format!("{perm:?} is not a permutation of {n} points")));
    }
    Ok(())
}

/// Components of `X x X`.
pub fn pair_components(x: &GSet) -> Vec<Component> {
    if x.is_empty() {
        return Vec::new();
    }
    product_decompose(&[x.clone(), x.clone()])
}

/// Base-4 code of a two-slot word; letters are nonzero so the length is
/// implicit. `None` past 31 letters.
fn pack(w: &Word) -> Option<u64> {
    (w.len() <= 31).then(|| w.letters().iter().fold(0u64, |k, &l| k * 4 + u64::from(l)))
}

/// Codes of the `(1,3)`-projections of all triples gluing `w` (slots x,y) to
/// `v` (slots y,z) along y. Pure y positions drop out of the projection.
fn outer_keys(w: &[Letter], v: &[Letter], acc: u64, out: &mut Vec<u64>) {
    let (wy, vy) = (w.first().map(|&l| l & R != 0), v.first().map(|&l| l & L != 0));
    match (wy, vy) {
        (None, None) => out.push(acc),
        (Some(false), None) => outer_keys(&w[1..], v, acc * 4 + 1, out),
        (None, Some(false)) => outer_keys(w, &v[1..], acc * 4 + 2, out),
        (Some(false), Some(false)) => {
            outer_keys(&w[1..], v, acc * 4 + 1, out);
            outer_keys(w, &v[1..], acc * 4 + 2, out);
            outer_keys(&w[1..], &v[1..], acc * 4 + 3, out);
        }
        (Some(true), Some(false)) => outer_keys(w, &v[1..], acc * 4 + 2, out),
        (Some(false), Some(true)) => outer_keys(&w[1..], v, acc * 4 + 1, out),
        (Some(true), Some(true)) => {
            let o = u64::from(w[0] & L) | (u64::from(v[0] & R));
            outer_keys(&w[1..], &v[1..], if o == 0 { acc } else { acc * 4 + o }, out);
        }
        // y letters left on one side only: no gluing.
        (Some(true), None) | (None, Some(true)) => {}
    }
}

/// Per factor, the words of components `t` of `X^3` with `t_{12} = c1` and
/// `t_{23} = c2`, each paired with its `(1,3)`-projection. Triples with equal
/// projection are listed once.
fn glued_factors(c1: &Component, c2: &Component) -> Vec<Vec<(Word, Word)>> {
    c1.words()
        .iter()
        .zip(c2.words())
        .map(|(w, v)| {
            let pairs: Vec<(usize, usize)> =
                w.slot_injection(1).values().iter().copied().zip(v.slot_injection(0).values().iter().copied()).collect();
            let mut seen = HashSet::new();
            constrained_merges(w.len(), v.len(), &pairs)
                .into_iter()
                .filter_map(|m| {
                    let (mut pw, mut pv) = (0, 0);
                    let mut triple = Vec::with_capacity(m.len());
                    let mut outer = Vec::new();
                    for &l in m.letters() {
                        let mut t: Letter = 0;
                        if l & L != 0 {
                            t |= w.letters()[pw];
                            pw += 1;
                        }
                        if l & R != 0 {
                            if v.letters()[pv] & R != 0 {
                                t |= 0b100;
                            }
                            pv += 1;
                        }
                        triple.push(t);
                        let o = (t & 1) | ((t >> 1) & 0b10);
                        if o != 0 {
                            outer.push(o);
                        }
                    }
                    let outer = Word::new(outer);
                    seen.insert(outer.clone()).then(|| (Word::new(triple), outer))
                })
                .collect()
        })
        .collect()
}

/// Components of `P x z` for a component `c` (slots of `P`) and orbit `z`,
/// with `z` as the new last slot.
fn extend(c: &Component, z: usize, zsym: &OrbitSymbol) -> Vec<Component> {
    let s = c.slots();
    let bit: Letter = 1 << s;
    let per_factor: Vec<Vec<Word>> = c
        .words()
        .iter()
        .enumerate()
        .map(|(t, w)| {
            merge_patterns(w.len(), zsym.arity(t))
                .iter()
                .map(|m| {
                    let mut pos = 0;
                    let letters = m
                        .letters()
                        .iter()
                        .map(|&l| {
                            let mut nl = 0;
                            if l & L != 0 {
                                nl |= w.letters()[pos];
                                pos += 1;
                            }
                            if l & R != 0 {
                                nl |= bit;
                            }
                            nl
                        })
                        .collect();
                    Word::new(letters)
                })
                .collect()
        })
        .collect();
    let mut orbits = c.orbits().to_vec();
    orbits.push(z);
    itertools::Itertools::multi_cartesian_product(per_factor.iter().map(|ws| ws.iter()))
        .map(|words| Component::new(orbits.clone(), words.into_iter().cloned().collect()))
        .collect()
}

/// `X^(n)`: the components of `X^n` whose coordinates increase strictly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleLevel {
    n: usize,
    components: Vec<Component>,
    gset: GSet,
    index: HashMap<Component, usize>,
}

impl TupleLevel {
    fn from_components(shape: usize, n: usize, mut components: Vec<Component>) -> Self {
        components.sort();
        let gset = GSet::new(shape, components.iter().map(Component::ambient).collect()).expect("shape");
        let index = components.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        TupleLevel { n, components, gset, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn gset(&self) -> &GSet {
        &self.gset
    }

    pub fn index_of(&self, c: &Component) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Projection onto coordinate `k`, as a map to the carrier.
    pub fn coordinate_map(&self, carrier: &GSet, k: usize) -> GSetMap {
        let assignment = self.components.iter().map(|c| (c.orbit(k), c.slot_map(k))).collect();
        GSetMap::new(self.gset.clone(), carrier.clone(), assignment).expect("coordinate map")
    }

    /// The map `X^(n) -> X^(m)` keeping the coordinates selected by `inj: [m] -> [n]`.
    pub fn projection(&self, lower: &TupleLevel, inj: &OIInjection) -> Result<GSetMap> {
        if inj.codomain() != self.n || inj.domain() != lower.n {
            return Err(Error::ArityMismatch(format!("{inj} between levels {} and {}", self.n, lower.n)));
        }
        let assignment = self
            .components
            .iter()
            .map(|c| {
                let (img, conn) = c.project(inj.values());
                let j = lower
                    .index_of(&img)
                    .ok_or_else(|| Error::InvalidOrder(format!("projection {img} of {c} is not increasing")))?;
                Ok((j, conn))
            })
            .collect::<Result<Vec<_>>>()?;
        GSetMap::new(self.gset.clone(), lower.gset.clone(), assignment)
    }
}

/// `X^(n)`, built by adding one coordinate at a time and keeping only
/// components whose new coordinate exceeds every earlier one.
pub fn tuples(o: &OrderedGSet, n: usize) -> Arc<TupleLevel> {
    let shape = o.shape();
    let mut level = vec![Component::new(Vec::new(), vec![Word::empty(); shape])];
    for k in 0..n {
        let mut next = Vec::new();
        for c in &level {
            for z in 0..o.carrier.len() {
                for t in extend(c, z, o.carrier.orbit(z)) {
                    if (0..k).all(|i| o.is_less(&t.project(&[i, k]).0)) {
                        next.push(t);
                    }
                }
            }
        }
        level = next;
    }
    Arc::new(TupleLevel::from_components(shape, n, level))
}

/// `X^(n)` by filtering the full power decomposition on every pair `i < j`.
pub fn tuples_direct(o: &OrderedGSet, n: usize) -> TupleLevel {
    let shape = o.shape();
    if n == 0 {
        return TupleLevel::from_components(shape, 0, vec![Component::new(Vec::new(), vec![Word::empty(); shape])]);
    }
    if o.carrier.is_empty() {
        return TupleLevel::from_components(shape, n, Vec::new());
    }
    let comps = product_decompose(&vec![o.carrier.clone(); n])
        .into_iter()
        .filter(|c| (0..n).all(|j| (0..j).all(|i| o.is_less(&c.project(&[i, j]).0))))
        .collect();
    TupleLevel::from_components(shape, n, comps)
}

/// Preorder on `size` points given by its `<=` relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderScheme {
    size: usize,
    le: Vec<Vec<bool>>,
}

impl OrderScheme {
    pub fn new(le: Vec<Vec<bool>>) -> Result<Self> {
        let size = le.len();
        if le.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidScheme("relation matrix is not square".into()));
        }
        for i in 0..size {
            if !le[i][i] {
                return Err(Error::InvalidScheme(format!("point {i} is not related to itself")));
            }
            for j in 0..size {
                for k in 0..size {
                    if le[i][j] && le[j][k] && !le[i][k] {
                        return Err(Error::InvalidScheme(format!("{i} <= {j} <= {k} but not {i} <= {k}")));
                    }
                }
            }
        }
        Ok(OrderScheme { size, le })
    }

    /// No relations beyond reflexivity.
    pub fn discrete(size: usize) -> Self {
        OrderScheme { size, le: (0..size).map(|i| (0..size).map(|j| i == j).collect()).collect() }
    }

    pub fn all_equivalent(size: usize) -> Self {
        OrderScheme { size, le: vec![vec![true; size]; size] }
    }

    /// `0 < 1 < ... < size-1`.
    pub fn chain(size: usize) -> Self {
        Self::from_ranks(&(0..size).collect::<Vec<_>>())
    }

    /// Total preorder `i <= j` iff `rank[i] <= rank[j]`.
    pub fn from_ranks(rank: &[usize]) -> Self {
        OrderScheme {
            size: rank.len(),
            le: rank.iter().map(|a| rank.iter().map(|b| a <= b).collect()).collect(),
        }
    }

    /// All total preorders on `size` points (ordered set partitions).
    pub fn total_preorders(size: usize) -> Vec<OrderScheme> {
        let mut out = Vec::new();
        for ranks in itertools::Itertools::multi_cartesian_product((0..size).map(|_| 0..size.max(1))) {
            let used: BTreeSet<usize> = ranks.iter().copied().collect();
            if used.iter().copied().eq(0..used.len()) {
                out.push(Self::from_ranks(&ranks));
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn equivalent(&self, i: usize, j: usize) -> bool {
        self.le[i][j] && self.le[j][i]
    }

    pub fn strictly_less(&self, i: usize, j: usize) -> bool {
        self.le[i][j] && !self.le[j][i]
    }
}

/// `X[S]`: components of `X^s` where equivalent slots coincide and ordered
/// slots are increasing.
pub fn order_scheme_subobject(o: &OrderedGSet, s: &OrderScheme) -> Vec<Component> {
    let n = s.size();
    if n == 0 {
        return vec![Component::new(Vec::new(), vec![Word::empty(); o.shape()])];
    }
    if o.carrier.is_empty() {
        return Vec::new();
    }
    product_decompose(&vec![o.carrier.clone(); n])
        .into_iter()
        .filter(|c| {
            (0..n).all(|i| {
                (0..n).all(|j| {
                    if i == j {
                        return true;
                    }
                    let p = c.project(&[i, j]).0;
                    (!s.equivalent(i, j) || p.is_diagonal()) && (!s.strictly_less(i, j) || o.is_less(&p))
                })
            })
        })
        .collect()
}

/// The unique isomorphism `a -> b` of ordered sets, if any, as an orbit map
/// with identity transitive maps.
pub fn ordered_iso(a: &OrderedGSet, b: &OrderedGSet) -> Option<GSetMap> {
    if a.shape() != b.shape() || a.carrier.len() != b.carrier.len() || a.less.len() != b.less.len() {
        return None;
    }
    let n = a.carrier.len();
    let sig = |o: &OrderedGSet, i: usize| {
        let mut s: Vec<(bool, bool, OrbitSymbol, Vec<Word>)> = o
            .less
            .iter()
            .filter(|c| c.orbit(0) == i || c.orbit(1) == i)
            .map(|c| {
                let (first, other) = if c.orbit(0) == i { (true, c.orbit(1)) } else { (false, c.orbit(0)) };
                (first, c.orbit(0) == c.orbit(1), o.carrier.orbit(other).clone(), c.words().to_vec())
            })
            .collect();
        s.sort();
        (o.carrier.orbit(i).clone(), s)
    };
    let sa: Vec<_> = (0..n).map(|i| sig(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(b, i)).collect();
    let candidates: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| sa[i] == sb[j]).collect()).collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let mut by_pair: HashMap<(usize, usize), Vec<&Component>> = HashMap::new();
    for c in &a.less {
        by_pair.entry((c.orbit(0), c.orbit(1))).or_default().push(c);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| candidates[i].len());
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn search(
        depth: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        by_pair: &HashMap<(usize, usize), Vec<&Component>>,
        b: &OrderedGSet,
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let i = order[depth];
        for &j in &candidates[i] {
            if used[j] {
                continue;
            }
            phi[i] = j;
            let consistent = order[..=depth].iter().all(|&k| {
                [(i, k), (k, i)].iter().all(|key| {
                    by_pair.get(key).is_none_or(|cs| {
                        cs.iter().all(|c| b.is_less(&c.with_orbits(vec![phi[c.orbit(0)], phi[c.orbit(1)]])))
                    })
                })
            });
            if consistent {
                used[j] = true;
                if search(depth + 1, order, candidates, by_pair, b, phi, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        phi[i] = usize::MAX;
        false
    }
    if !search(0, &order, &candidates, &by_pair, b, &mut phi, &mut used) {
        return None;
    }
    let mapped: HashSet<Component> =
        a.less.iter().map(|c| c.with_orbits(vec![phi[c.orbit(0)], phi[c.orbit(1)]])).collect();
    if mapped.len() != b.less.len() || !mapped.iter().all(|c| b.is_less(c)) {
        return None;
    }
    let assignment = (0..n).map(|i| (phi[i], TransitiveMap::identity(a.carrier.orbit(i)))).collect();
    GSetMap::new(a.carrier.clone(), b.carrier.clone(), assignment).ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteLike {
    /// `X^(n)` is empty; `n` is the least such.
    Finite(usize),
    InfiniteUpTo(usize),
}

/// Least `n <= bound` with `X^(n)` empty.
///
/// An orbit of positive arity contains `x < g x` for some `g`, hence chains
/// `x < g x < g^2 x < ...` of every length; so `X^(n)` is empty for some `n`
/// exactly when every orbit is a fixed point, and then the least such `n` is
/// one more than the number of points.
pub fn finite_like(o: &OrderedGSet, bound: usize) -> FiniteLike {
    if o.carrier.orbits().iter().any(|s| s.total() > 0) {
        return FiniteLike::InfiniteUpTo(bound);
    }
    let n = o.carrier.len() + 1;
    if n <= bound {
        FiniteLike::Finite(n)
    } else {
        FiniteLike::InfiniteUpTo(bound)
    }
}

/// Number of orbits of `X^s` (used by the scheme decomposition checks).
pub fn power_size(x: &GSet, s: usize) -> usize {
    if s == 0 {
        return 1;
    }
    if x.is_empty() {
        return 0;
    }
    itertools::Itertools::multi_cartesian_product((0..s).map(|_| 0..x.len()))
        .map(|orbits| {
            (0..x.shape())
                .map(|t| power_words(&orbits.iter().map(|&o| x.orbit(o).arity(t)).collect::<Vec<_>>()).len())
                .product::<usize>()
        })
        .sum()
}
