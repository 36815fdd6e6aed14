use std::fmt;

use itertools::Itertools;

use super::gset::{GSet, GSetMap, OrbitSymbol, TransitiveMap};
use super::injection::OIInjection;
use super::pattern::{constrained_merges, power_words, Letter, Word, B, MAX_SLOTS};
use crate::error::{Error, Result};

/// Orbit of a product `X_1 x ... x X_s`: one parent orbit index per slot and
/// one word per factor of the group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    orbits: Vec<usize>,
    words: Vec<Word>,
}

impl Component {
    pub fn new(orbits: Vec<usize>, words: Vec<Word>) -> Self {
        Component { orbits, words }
    }

    /// Checks the slot counts against the parent orbits.
    pub fn validate(&self, parents: &[&GSet]) -> Result<()> {
        if parents.len() != self.orbits.len() {
            return Err(Error::ArityMismatch(format!(
                "{} slots for {} parents",
                self.orbits.len(),
                parents.len()
            )));
        }
        for (k, (&o, p)) in self.orbits.iter().zip(parents).enumerate() {
            if o >= p.len() {
                return Err(Error::InvalidPattern(format!("slot {k}: orbit {o} out of range")));
            }
            if self.words.len() != p.shape() {
                return Err(Error::ShapeMismatch(format!(
                    "{} words for shape {}",
                    self.words.len(),
                    p.shape()
                )));
            }
            let sym = p.orbit(o);
            for (t, w) in self.words.iter().enumerate() {
                if w.count(k) != sym.arity(t) {
                    return Err(Error::InvalidPattern(format!(
                        "slot {k} factor {t}: word {w} does not match orbit {sym}"
                    )));
                }
            }
        }
        let full: Letter = ((1u32 << self.orbits.len()) - 1) as Letter;
        for w in &self.words {
            if w.letters().iter().any(|&l| l == 0 || l & !full != 0) {
                return Err(Error::InvalidPattern(format!("word {w} uses unknown slots")));
            }
        }
        Ok(())
    }

    pub fn diagonal(orbit: usize, symbol: &OrbitSymbol) -> Self {
        Component {
            orbits: vec![orbit, orbit],
            words: symbol.arities().iter().map(|&n| Word::new(vec![B; n])).collect(),
        }
    }

    pub fn orbits(&self) -> &[usize] {
        &self.orbits
    }

    pub fn orbit(&self, slot: usize) -> usize {
        self.orbits[slot]
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn slots(&self) -> usize {
        self.orbits.len()
    }

    pub fn ambient(&self) -> OrbitSymbol {
        OrbitSymbol::from_vec(self.words.iter().map(Word::len).collect())
    }

    /// Projection of the component onto its slot `k`.
    pub fn slot_map(&self, k: usize) -> TransitiveMap {
        TransitiveMap::from_injections(self.words.iter().map(|w| w.slot_injection(k)).collect())
    }

    pub fn is_diagonal(&self) -> bool {
        self.orbits.len() == 2 && self.orbits[0] == self.orbits[1] && self.words.iter().all(Word::is_diagonal)
    }

    /// Swaps the two slots.
    pub fn transpose(&self) -> Component {
        assert_eq!(self.orbits.len(), 2);
        Component {
            orbits: vec![self.orbits[1], self.orbits[0]],
            words: self.words.iter().map(Word::transpose).collect(),
        }
    }

    pub fn with_orbits(&self, orbits: Vec<usize>) -> Component {
        assert_eq!(orbits.len(), self.orbits.len());
        Component { orbits, words: self.words.clone() }
    }

    /// Image under the projection onto `slots` (renumbered in the given order),
    /// with the connecting map from this ambient to the image ambient.
    pub fn project(&self, slots: &[usize]) -> (Component, TransitiveMap) {
        let mut words = Vec::with_capacity(self.words.len());
        let mut injections = Vec::with_capacity(self.words.len());
        for w in &self.words {
            let mut letters = Vec::new();
            let mut kept = Vec::new();
            for (p, &l) in w.letters().iter().enumerate() {
                let mut nl: Letter = 0;
                for (k, &s) in slots.iter().enumerate() {
                    if l & (1 << s) != 0 {
                        nl |= 1 << k;
                    }
                }
                if nl != 0 {
                    letters.push(nl);
                    kept.push(p);
                }
            }
            injections.push(OIInjection::new_unchecked(w.len(), kept));
            words.push(Word::new(letters));
        }
        let orbits = slots.iter().map(|&s| self.orbits[s]).collect();
        (Component { orbits, words }, TransitiveMap::from_injections(injections))
    }

    /// Regroups a component of `P_1 x ... x P_s`, where slot `k` lies in the
    /// orbit `inner[k]` of a product, into a component of the flat product.
    pub fn flatten(&self, inner: &[&Component]) -> Component {
        assert_eq!(inner.len(), self.orbits.len());
        let offsets: Vec<usize> = inner
            .iter()
            .scan(0, |acc, c| {
                let o = *acc;
                *acc += c.slots();
                Some(o)
            })
            .collect();
        assert!(offsets.last().map_or(0, |o| o + inner.last().unwrap().slots()) <= MAX_SLOTS);
        let words = self
            .words
            .iter()
            .enumerate()
            .map(|(t, w)| {
                let mut pos = vec![0usize; inner.len()];
                let letters = w
                    .letters()
                    .iter()
                    .map(|&l| {
                        let mut nl: Letter = 0;
                        for k in 0..inner.len() {
                            if l & (1 << k) != 0 {
                                nl |= inner[k].words[t].letters()[pos[k]] << offsets[k];
                                pos[k] += 1;
                            }
                        }
                        nl
                    })
                    .collect();
                Word::new(letters)
            })
            .collect();
        let orbits = inner.iter().flat_map(|c| c.orbits.iter().copied()).collect();
        Component { orbits, words }
    }

    /// Two-slot text form, e.g. `0,1:LBR|RL`.
    pub fn label(&self) -> String {
        format!("{}:{}", self.orbits.iter().join(","), self.words.iter().join("|"))
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// All orbits of `X_1 x ... x X_s` in canonical order: orbit tuples
/// lexicographically, then per-factor words.
pub fn product_decompose(sets: &[GSet]) -> Vec<Component> {
    assert!(!sets.is_empty(), "empty product");
    let shape = sets[0].shape();
    assert!(sets.iter().all(|s| s.shape() == shape), "mixed shapes");
    let mut out = Vec::new();
    for orbits in sets.iter().map(|s| 0..s.len()).multi_cartesian_product() {
        let per_factor: Vec<_> = (0..shape)
            .map(|t| {
                let counts: Vec<usize> =
                    orbits.iter().zip(sets).map(|(&o, s)| s.orbit(o).arity(t)).collect();
                power_words(&counts)
            })
            .collect();
        for words in per_factor.iter().map(|ws| ws.iter()).multi_cartesian_product() {
            out.push(Component { orbits: orbits.clone(), words: words.into_iter().cloned().collect() });
        }
    }
    out
}

/// The product as a set of orbits, in the order of [`product_decompose`].
pub fn product_gset(sets: &[GSet]) -> GSet {
    let shape = sets[0].shape();
    GSet::new(shape, product_decompose(sets).iter().map(Component::ambient).collect())
        .expect("consistent shape")
}

/// Image of an orbit under maps to several orbits: the component of the
/// product it lands in and the connecting map onto that component.
pub fn image_factorization(apex: &OrbitSymbol, legs: &[(usize, &TransitiveMap)]) -> Result<(Component, TransitiveMap)> {
    if legs.len() > MAX_SLOTS {
        return Err(Error::ArityMismatch("too many legs".into()));
    }
    for (_, m) in legs {
        if m.source() != apex {
            return Err(Error::ArityMismatch(format!("leg {m} does not start at {apex}")));
        }
    }
    let mut words = Vec::with_capacity(apex.shape());
    let mut injections = Vec::with_capacity(apex.shape());
    for t in 0..apex.shape() {
        let q = apex.arity(t);
        let mut marks = vec![0 as Letter; q];
        for (k, (_, m)) in legs.iter().enumerate() {
            for &p in m.injections()[t].values() {
                marks[p] |= 1 << k;
            }
        }
        let kept: Vec<usize> = (0..q).filter(|&p| marks[p] != 0).collect();
        words.push(Word::new(kept.iter().map(|&p| marks[p]).collect()));
        injections.push(OIInjection::new_unchecked(q, kept));
    }
    let orbits = legs.iter().map(|(o, _)| *o).collect();
    Ok((Component { orbits, words }, TransitiveMap::from_injections(injections)))
}

/// Orbits of the fiber product of `f: Y -> X` and `g: Y' -> X`, as components
/// of `Y x Y'`.
pub fn fiber_product(f: &GSetMap, g: &GSetMap) -> Result<Vec<Component>> {
    if f.target() != g.target() {
        return Err(Error::ArityMismatch("fiber product over different bases".into()));
    }
    let shape = f.target().shape();
    let mut out = Vec::new();
    for (i, (xi, u)) in f.assignment().iter().enumerate() {
        for (j, (xj, v)) in g.assignment().iter().enumerate() {
            if xi != xj {
                continue;
            }
            let per_factor: Vec<Vec<Word>> = (0..shape)
                .map(|t| {
                    let (a, b) = (&u.injections()[t], &v.injections()[t]);
                    let pairs: Vec<_> = a.values().iter().copied().zip(b.values().iter().copied()).collect();
                    constrained_merges(a.codomain(), b.codomain(), &pairs)
                })
                .collect();
            for words in per_factor.iter().map(|ws| ws.iter()).multi_cartesian_product() {
                out.push(Component { orbits: vec![i, j], words: words.into_iter().cloned().collect() });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::pattern::merge_patterns;

    fn sym(a: &[usize]) -> OrbitSymbol {
        OrbitSymbol::new(a.to_vec()).unwrap()
    }

    #[test]
    fn decompose_r2_r2() {
        let x = GSet::power(2);
        let comps = product_decompose(&[x.clone(), x.clone()]);
        assert_eq!(comps.len(), 13);
        for c in &comps {
            c.validate(&[&x, &x]).unwrap();
        }
    }

    #[test]
    fn decompose_two_factor_group() {
        let x = GSet::new(2, vec![sym(&[1, 0]), sym(&[0, 1])]).unwrap();
        let comps = product_decompose(&[x.clone(), x.clone()]);
        // (1,0)x(1,0): 3, (1,0)x(0,1): 1, (0,1)x(1,0): 1, (0,1)x(0,1): 3.
        assert_eq!(comps.len(), 8);
    }

    #[test]
    fn fiber_of_projections() {
        let p22 = TransitiveMap::new(sym(&[2]), sym(&[1]), vec![OIInjection::omission(2, 2).unwrap()]).unwrap();
        let p21 = TransitiveMap::new(sym(&[2]), sym(&[1]), vec![OIInjection::omission(2, 1).unwrap()]).unwrap();
        let f = GSetMap::from_transitive(&p22);
        let g = GSetMap::from_transitive(&p21);
        let same: Vec<_> = fiber_product(&f, &f).unwrap().iter().map(|c| c.ambient().total()).collect();
        assert_eq!(same, vec![2, 3, 3]);
        let mixed = fiber_product(&f, &g).unwrap();
        assert_eq!(mixed.len(), 1);
        assert_eq!(mixed[0].words()[0].to_string(), "RBL");
    }

    #[test]
    fn fiber_over_point_is_product() {
        for n in 0..=3 {
            for m in 0..=3 {
                let f = GSetMap::to_point(&GSet::power(n));
                let g = GSetMap::to_point(&GSet::power(m));
                assert_eq!(fiber_product(&f, &g).unwrap().len(), merge_patterns(n, m).len());
            }
        }
    }

    #[test]
    fn image_of_projection_pair() {
        // The diagonal R -> R x R.
        let apex = sym(&[1]);
        let id = TransitiveMap::identity(&apex);
        let (c, m) = image_factorization(&apex, &[(0, &id), (0, &id)]).unwrap();
        assert!(c.is_diagonal());
        assert!(m.is_identity());
        // R^(2) projected to its first coordinate only.
        let apex = sym(&[2]);
        let p = c_slot(&apex);
        let (c, m) = image_factorization(&apex, &[(0, &p)]).unwrap();
        assert_eq!(c.words()[0].len(), 1);
        assert_eq!(m.injections()[0].values(), &[0]);
    }

    fn c_slot(apex: &OrbitSymbol) -> TransitiveMap {
        TransitiveMap::new(apex.clone(), sym(&[1]), vec![OIInjection::omission(2, 2).unwrap()]).unwrap()
    }

    #[test]
    fn project_and_flatten_are_inverse_regroupings() {
        let x = GSet::power(1);
        let y = GSet::power(2);
        let inner = product_decompose(&[x.clone(), y.clone()]);
        let inner_set = product_gset(&[x.clone(), y.clone()]);
        let z = GSet::power(1);
        let nested = product_decompose(&[inner_set, z.clone()]);
        let mut flat: Vec<Component> = nested
            .iter()
            .map(|k| {
                let z_comp = Component::new(vec![0], vec![Word::new(vec![1])]);
                k.flatten(&[&inner[k.orbit(0)], &z_comp.with_orbits(vec![k.orbit(1)])])
            })
            .collect();
        flat.sort();
        let mut direct = product_decompose(&[x, y, z]);
        direct.sort();
        assert_eq!(flat, direct);
    }
}
