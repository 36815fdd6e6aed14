use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHasher};

use super::matrix::{Matrix, Solve};
use crate::error::{Error, Result};
use crate::measure::{mu_omitting, MeasureSpec};
use crate::orbit::{
    constrained_merges, image_factorization, product_decompose, product_gset, Component, GSet, GSetMap,
    TransitiveMap, Word, L, R,
};
use crate::scalar::Scalar;

/// Basis of `Hom(C(source), C(target))`: the components of `target x source`.
pub fn hom_basis(source: &GSet, target: &GSet) -> Vec<Component> {
    product_decompose(&[target.clone(), source.clone()])
}

/// Morphism `C(source) -> C(target)` as a sparse combination of basis
/// components of `target x source` (slot 0 is the target).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    measure: MeasureSpec,
    source: GSet,
    target: GSet,
    coeffs: BTreeMap<Component, Scalar>,
}

impl Morphism {
    pub fn zero(measure: &MeasureSpec, source: &GSet, target: &GSet) -> Result<Self> {
        if source.shape() != measure.shape() || target.shape() != measure.shape() {
            return Err(Error::ShapeMismatch(format!(
                "objects of shape {}/{} under a measure of shape {}",
                source.shape(),
                target.shape(),
                measure.shape()
            )));
        }
        Ok(Morphism {
            measure: measure.clone(),
            source: source.clone(),
            target: target.clone(),
            coeffs: BTreeMap::new(),
        })
    }

    /// Builds from explicit coefficients, validating every key.
    pub fn from_coeffs(
        measure: &MeasureSpec,
        source: &GSet,
        target: &GSet,
        coeffs: impl IntoIterator<Item = (Component, Scalar)>,
    ) -> Result<Self> {
        let mut m = Self::zero(measure, source, target)?;
        for (c, v) in coeffs {
            c.validate(&[target, source])?;
            if v.field() != measure.field() {
                return Err(Error::FieldMismatch(format!("{} coefficient under {}", v.field(), measure.field())));
            }
            m.add_coeff(c, &v);
        }
        Ok(m)
    }

    /// The basis element `A_Z`.
    pub fn basis(measure: &MeasureSpec, source: &GSet, target: &GSet, z: &Component) -> Result<Self> {
        Self::from_coeffs(measure, source, target, [(z.clone(), measure.field().one())])
    }

    pub fn identity(measure: &MeasureSpec, x: &GSet) -> Result<Self> {
        let mut m = Self::zero(measure, x, x)?;
        for (i, o) in x.orbits().iter().enumerate() {
            m.coeffs.insert(Component::diagonal(i, o), measure.field().one());
        }
        Ok(m)
    }

    /// Push-pull along a span `target <- apex -> source`.
    pub fn from_span(
        measure: &MeasureSpec,
        to_target: &GSetMap,
        to_source: &GSetMap,
    ) -> Result<Self> {
        if to_target.source() != to_source.source() {
            return Err(Error::MorphismMismatch("span legs start at different sets".into()));
        }
        let apex = to_target.source();
        let mut m = Self::zero(measure, to_source.target(), to_target.target())?;
        for (i, sym) in apex.orbits().iter().enumerate() {
            let (ti, mt) = &to_target.assignment()[i];
            let (si, ms) = &to_source.assignment()[i];
            let (o, conn) = image_factorization(sym, &[(*ti, mt), (*si, ms)])?;
            let w = measure.transitive_int(&conn);
            if w != 0 {
                m.add_coeff(o, &measure.scalar(w));
            }
        }
        Ok(m)
    }

    /// `f^*: C(X) -> C(Y)` for `f: Y -> X`.
    pub fn pullback(measure: &MeasureSpec, f: &GSetMap) -> Result<Self> {
        Self::from_span(measure, &GSetMap::identity(f.source()), f)
    }

    /// `f_*: C(Y) -> C(X)` for `f: Y -> X`.
    pub fn pushforward(measure: &MeasureSpec, f: &GSetMap) -> Result<Self> {
        Self::from_span(measure, f, &GSetMap::identity(f.source()))
    }

    pub fn measure(&self) -> &MeasureSpec {
        &self.measure
    }

    pub fn source(&self) -> &GSet {
        &self.source
    }

    pub fn target(&self) -> &GSet {
        &self.target
    }

    pub fn coeffs(&self) -> &BTreeMap<Component, Scalar> {
        &self.coeffs
    }

    pub fn coeff(&self, z: &Component) -> Scalar {
        self.coeffs.get(z).cloned().unwrap_or_else(|| self.measure.field().zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_coeff(&mut self, z: Component, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        match self.coeffs.entry(z) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + v;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v.clone());
            }
        }
    }

    fn same_hom(&self, other: &Morphism) -> Result<()> {
        if self.measure != other.measure {
            return Err(Error::MorphismMismatch("different measures".into()));
        }
        if self.source != other.source || self.target != other.target {
            return Err(Error::MorphismMismatch("different hom spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.same_hom(other)?;
        let mut out = self.clone();
        for (z, v) in &other.coeffs {
            out.add_coeff(z.clone(), v);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Morphism {
        let mut out = self.clone();
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(z, v)| (z.clone(), v * c))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        out
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.add(&other.scale(&-self.measure.field().one()))
    }

    /// Coefficient vector in the canonical basis order.
    pub fn to_vector(&self) -> Vec<Scalar> {
        hom_basis(&self.source, &self.target).iter().map(|z| self.coeff(z)).collect()
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &Morphism) -> Result<Morphism> {
        if self.measure != f.measure {
            return Err(Error::MorphismMismatch("different measures".into()));
        }
        if self.source != f.target {
            return Err(Error::MorphismMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, f.source, f.target
            )));
        }
        let lift = |c: &Scalar| match c {
            Scalar::Residue { value, .. } => Some(*value as i64),
            _ => c.to_i64(),
        };
        let ints: Option<Vec<i64>> = self.coeffs.values().chain(f.coeffs.values()).map(lift).collect();
        let Some(ints) = ints else { return self.compose_exact(f) };
        let (left, right) = ints.split_at(self.coeffs.len());
        let r = self.measure.shape();
        let mut pieces = Pieces::new(self.measure.factors());
        let lhs: Vec<(usize, usize, Vec<u32>, i64)> = self
            .coeffs
            .keys()
            .zip(left)
            .map(|(w, &c)| (w.orbit(0), w.orbit(1), pieces.intern_all(w.words()), c))
            .collect();
        let mut by_target: FxHashMap<usize, Vec<(usize, Vec<u32>, i64)>> = FxHashMap::default();
        for (v, &c) in f.coeffs.keys().zip(right) {
            let ids = pieces.intern_all(v.words());
            by_target.entry(v.orbit(0)).or_default().push((v.orbit(1), ids, c));
        }
        // Output words per factor are interned too; a key is (target orbit,
        // source orbit, id of the tuple of word ids).
        let mut tuple_ids: FxHashMap<Vec<u32>, u64> = FxHashMap::default();
        let mut tuples: Vec<Vec<u32>> = Vec::new();
        let mut acc: FxHashMap<(usize, usize, u64), i128> = FxHashMap::default();
        let mut combos: Vec<(Vec<u32>, i64)> = Vec::new();
        for (z, y, wids, cw) in &lhs {
            let Some(vs) = by_target.get(y) else { continue };
            for (x, vids, cv) in vs {
                let c = i128::from(*cw) * i128::from(*cv);
                if r == 1 {
                    for &(id, k) in pieces.get(0, wids[0], vids[0]) {
                        let slot = acc.entry((*z, *x, u64::from(id))).or_insert(0);
                        match c.checked_mul(i128::from(k)).and_then(|p| slot.checked_add(p)) {
                            Some(v) => *slot = v,
                            None => return self.compose_exact(f),
                        }
                    }
                    continue;
                }
                combos.clear();
                combos.push((Vec::with_capacity(r), 1));
                for t in 0..r {
                    let p = pieces.get(t, wids[t], vids[t]);
                    combos = combos
                        .iter()
                        .flat_map(|(ids, k)| {
                            p.iter().map(move |&(id, kk)| {
                                let mut n = ids.clone();
                                n.push(id);
                                (n, k * kk)
                            })
                        })
                        .collect();
                }
                for (ids, k) in combos.drain(..) {
                    let next = tuples.len() as u64;
                    let tid = *tuple_ids.entry(ids.clone()).or_insert_with(|| {
                        tuples.push(ids);
                        next
                    });
                    let slot = acc.entry((*z, *x, tid)).or_insert(0);
                    match c.checked_mul(i128::from(k)).and_then(|p| slot.checked_add(p)) {
                        Some(v) => *slot = v,
                        None => return self.compose_exact(f),
                    }
                }
            }
        }
        let field = self.measure.field();
        let mut out = Morphism::zero(&self.measure, &f.source, &self.target)?;
        for ((z, x, tid), v) in acc {
            let s = scalar_from_i128(field, v);
            if s.is_zero() {
                continue;
            }
            let ws = if r == 1 {
                vec![pieces.output(0, tid as u32)]
            } else {
                tuples[tid as usize].iter().enumerate().map(|(t, &i)| pieces.output(t, i)).collect()
            };
            out.coeffs.insert(Component::new(vec![z, x], ws), s);
        }
        Ok(out)
    }

    /// Reference composition with exact scalars throughout.
    fn compose_exact(&self, f: &Morphism) -> Result<Morphism> {
        let mut by_target: HashMap<usize, Vec<(&Component, &Scalar)>> = HashMap::new();
        for (v, c) in &f.coeffs {
            by_target.entry(v.orbit(0)).or_default().push((v, c));
        }
        let mut out = Morphism::zero(&self.measure, &f.source, &self.target)?;
        let factors = self.measure.factors().to_vec();
        for (w, cw) in &self.coeffs {
            let Some(vs) = by_target.get(&w.orbit(1)) else { continue };
            for (v, cv) in vs {
                let pieces: Vec<Vec<(Word, i64)>> = factors
                    .iter()
                    .enumerate()
                    .map(|(t, &k)| compose_factor(k, &w.words()[t], &v.words()[t]))
                    .collect();
                let c = cw * *cv;
                for choice in pieces.iter().map(|p| p.iter()).multi_cartesian_product() {
                    let weight: i64 = choice.iter().map(|(_, x)| *x).product();
                    let words: Vec<Word> = choice.into_iter().map(|(w, _)| w.clone()).collect();
                    out.add_coeff(Component::new(vec![w.orbit(0), v.orbit(1)], words), &c.mul_i64(weight));
                }
            }
        }
        Ok(out)
    }

    /// Swaps source and target.
    pub fn transpose(&self) -> Morphism {
        Morphism {
            measure: self.measure.clone(),
            source: self.target.clone(),
            target: self.source.clone(),
            coeffs: self.coeffs.iter().map(|(z, v)| (z.transpose(), v.clone())).collect(),
        }
    }

    /// Block-diagonal sum on `source ⊔ other.source`.
    pub fn direct_sum(&self, other: &Morphism) -> Result<Morphism> {
        if self.measure != other.measure {
            return Err(Error::MorphismMismatch("different measures".into()));
        }
        let source = self.source.disjoint_union(&other.source)?;
        let target = self.target.disjoint_union(&other.target)?;
        let mut out = Morphism::zero(&self.measure, &source, &target)?;
        out.coeffs = self.coeffs.clone();
        for (z, v) in &other.coeffs {
            let shifted = z.with_orbits(vec![z.orbit(0) + self.target.len(), z.orbit(1) + self.source.len()]);
            out.coeffs.insert(shifted, v.clone());
        }
        Ok(out)
    }

    /// `self ⊗ other` on the decomposed products `source x other.source`.
    pub fn tensor(&self, other: &Morphism) -> Result<Morphism> {
        if self.measure != other.measure {
            return Err(Error::MorphismMismatch("different measures".into()));
        }
        let tgt_comps = product_decompose(&[self.target.clone(), other.target.clone()]);
        let src_comps = product_decompose(&[self.source.clone(), other.source.clone()]);
        let tgt_index: HashMap<&Component, usize> = tgt_comps.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let src_index: HashMap<&Component, usize> = src_comps.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let source = product_gset(&[self.source.clone(), other.source.clone()]);
        let target = product_gset(&[self.target.clone(), other.target.clone()]);
        let mut out = Morphism::zero(&self.measure, &source, &target)?;
        for (w, cw) in &self.coeffs {
            for (v, cv) in &other.coeffs {
                let pair = [GSet::transitive(w.ambient()), GSet::transitive(v.ambient())];
                let coef = cw * cv;
                for t in product_decompose(&pair) {
                    let apex = t.ambient();
                    let (tw, tv) = (t.slot_map(0), t.slot_map(1));
                    let to_y = tw.then(&w.slot_map(0))?;
                    let to_x = tw.then(&w.slot_map(1))?;
                    let to_y2 = tv.then(&v.slot_map(0))?;
                    let to_x2 = tv.then(&v.slot_map(1))?;
                    let (c1, m1) = image_factorization(&apex, &[(w.orbit(0), &to_y), (v.orbit(0), &to_y2)])?;
                    let (c2, m2) = image_factorization(&apex, &[(w.orbit(1), &to_x), (v.orbit(1), &to_x2)])?;
                    let i1 = tgt_index[&c1];
                    let i2 = src_index[&c2];
                    let (o, conn) = image_factorization(&apex, &[(i1, &m1), (i2, &m2)])?;
                    debug_assert!(conn.is_identity());
                    out.add_coeff(o, &coef);
                }
            }
        }
        Ok(out)
    }

    /// Trace of an endomorphism: diagonal coefficients weighted by orbit measure.
    pub fn trace(&self) -> Result<Scalar> {
        if self.source != self.target {
            return Err(Error::NotEndomorphism);
        }
        let mut acc = self.measure.field().zero();
        for (z, v) in &self.coeffs {
            if z.is_diagonal() {
                acc += &(v * &self.measure.object(&GSet::transitive(self.source.orbit(z.orbit(0)).clone())));
            }
        }
        Ok(acc)
    }

    /// Replaces source and target by sets with the same orbit list.
    pub fn relabel(&self, source: &GSet, target: &GSet) -> Result<Morphism> {
        if source.orbits() != self.source.orbits() || target.orbits() != self.target.orbits() {
            return Err(Error::MorphismMismatch("relabelling must keep the orbit lists".into()));
        }
        let mut out = self.clone();
        out.source = source.clone();
        out.target = target.clone();
        Ok(out)
    }
}

/// Interned output words with integer coefficients.
type Terms = Vec<(u32, i64)>;

/// Per-factor composites of interned word pairs, with interned results.
struct Pieces<'a> {
    factors: &'a [usize],
    input: Vec<FxHashMap<Word, u32>>,
    input_words: Vec<Vec<Word>>,
    output: Vec<FxHashMap<Word, u32>>,
    output_words: Vec<Vec<Word>>,
    cache: Vec<FxHashMap<(u32, u32), Terms>>,
}

impl<'a> Pieces<'a> {
    fn new(factors: &'a [usize]) -> Self {
        let r = factors.len();
        Pieces {
            factors,
            input: vec![FxHashMap::default(); r],
            input_words: vec![Vec::new(); r],
            output: vec![FxHashMap::default(); r],
            output_words: vec![Vec::new(); r],
            cache: vec![FxHashMap::default(); r],
        }
    }

    fn intern_all(&mut self, words: &[Word]) -> Vec<u32> {
        words
            .iter()
            .enumerate()
            .map(|(t, w)| {
                let next = self.input_words[t].len() as u32;
                *self.input[t].entry(w.clone()).or_insert_with(|| {
                    self.input_words[t].push(w.clone());
                    next
                })
            })
            .collect()
    }

    fn get(&mut self, t: usize, a: u32, b: u32) -> &[(u32, i64)] {
        let Pieces { factors, input_words, output, output_words, cache, .. } = self;
        cache[t].entry((a, b)).or_insert_with(|| {
            compose_factor_cached(factors[t], &input_words[t][a as usize], &input_words[t][b as usize])
                .iter()
                .map(|(w, k)| {
                    let next = output_words[t].len() as u32;
                    let id = *output[t].entry(w.clone()).or_insert_with(|| {
                        output_words[t].push(w.clone());
                        next
                    });
                    (id, *k)
                })
                .collect()
        })
    }

    fn output(&self, t: usize, id: u32) -> Word {
        self.output_words[t][id as usize].clone()
    }
}

fn scalar_from_i128(field: crate::scalar::Field, v: i128) -> Scalar {
    match field {
        crate::scalar::Field::Prime(p) => field.from_i64(v.rem_euclid(i128::from(p)) as i64),
        crate::scalar::Field::Rational => match i64::try_from(v) {
            Ok(x) => field.from_i64(x),
            Err(_) => Scalar::Rational(num_rational::BigRational::from_integer(num_bigint::BigInt::from(v))),
        },
    }
}

type FactorKey = (usize, Word, Word);
const SHARDS: usize = 64;
/// Entries kept per shard before it is cleared.
const SHARD_LIMIT: usize = 1 << 16;

type Shard = Mutex<FxHashMap<FactorKey, Arc<Vec<(Word, i64)>>>>;

fn factor_cache() -> &'static [Shard] {
    static CACHE: OnceLock<Vec<Shard>> = OnceLock::new();
    CACHE.get_or_init(|| (0..SHARDS).map(|_| Mutex::default()).collect())
}

fn compose_factor_cached(k: usize, w: &Word, v: &Word) -> Arc<Vec<(Word, i64)>> {
    let key = (k, w.clone(), v.clone());
    let mut h = FxHasher::default();
    key.hash(&mut h);
    let shard = &factor_cache()[h.finish() as usize % SHARDS];
    if let Some(r) = shard.lock().expect("factor cache").get(&key) {
        return r.clone();
    }
    let r = Arc::new(compose_factor(k, w, v));
    let mut m = shard.lock().expect("factor cache");
    if m.len() >= SHARD_LIMIT {
        m.clear();
    }
    m.insert(key, r.clone());
    r
}

/// Per-factor composite: for words `w` (slots Z,Y) and `v` (slots Y,X), the
/// orbits of the fiber product over Y with their image word on (Z,X) and the
/// measure of the connecting map.
fn compose_factor(k: usize, w: &Word, v: &Word) -> Vec<(Word, i64)> {
    let a = w.slot_injection(1);
    let b = v.slot_injection(0);
    let pairs: Vec<(usize, usize)> = a.values().iter().copied().zip(b.values().iter().copied()).collect();
    constrained_merges(w.len(), v.len(), &pairs)
        .into_iter()
        .filter_map(|t| {
            let (mut pw, mut pv) = (0, 0);
            let mut letters = Vec::with_capacity(t.len());
            let mut omitted = Vec::new();
            for (p, &l) in t.letters().iter().enumerate() {
                let mut o = 0;
                if l & L != 0 {
                    if w.letters()[pw] & L != 0 {
                        o |= L;
                    }
                    pw += 1;
                }
                if l & R != 0 {
                    if v.letters()[pv] & R != 0 {
                        o |= R;
                    }
                    pv += 1;
                }
                if o == 0 {
                    omitted.push(p);
                } else {
                    letters.push(o);
                }
            }
            let weight = mu_omitting(k, t.len(), &omitted);
            (weight != 0).then(|| (Word::new(letters), weight))
        })
        .collect()
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}:", self.source, self.target)?;
        if self.coeffs.is_empty() {
            return write!(f, " 0");
        }
        for (z, v) in &self.coeffs {
            write!(f, " {v}*[{z}]")?;
        }
        Ok(())
    }
}

/// Dimension of `C(X)`: its measure.
pub fn dim(measure: &MeasureSpec, x: &GSet) -> Scalar {
    measure.object(x)
}

/// Unit, multiplication, counit and comultiplication of the algebra `C(X)`.
#[derive(Clone, Debug)]
pub struct AlgebraStructure {
    pub unit: Morphism,
    pub mult: Morphism,
    pub counit: Morphism,
    pub comult: Morphism,
}

pub fn algebra_structure(measure: &MeasureSpec, x: &GSet) -> Result<AlgebraStructure> {
    let to_point = GSetMap::to_point(x);
    let diag = GSetMap::diagonal(x);
    Ok(AlgebraStructure {
        unit: Morphism::pullback(measure, &to_point)?,
        mult: Morphism::pullback(measure, &diag)?,
        counit: Morphism::pushforward(measure, &to_point)?,
        comult: Morphism::pushforward(measure, &diag)?,
    })
}

/// Trace pairing `(Z, W) -> tr(A_Z ∘ A_W)` for `Z` in `Hom(X, Y)`, `W` in `Hom(Y, X)`.
pub fn gram_matrix(measure: &MeasureSpec, x: &GSet, y: &GSet) -> Result<Matrix> {
    let zs = hom_basis(x, y);
    let ws = hom_basis(y, x);
    let az: Vec<Morphism> = zs.iter().map(|z| Morphism::basis(measure, x, y, z)).collect::<Result<_>>()?;
    let aw: Vec<Morphism> = ws.iter().map(|w| Morphism::basis(measure, y, x, w)).collect::<Result<_>>()?;
    let rows: Vec<Vec<Scalar>> = az
        .par_iter()
        .map(|a| aw.iter().map(|b| a.compose(b)?.trace()).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let field = measure.field();
    if rows.is_empty() {
        return Ok(Matrix::zeros(field, 0, ws.len()));
    }
    Ok(Matrix::from_rows(field, rows))
}

#[derive(Clone, Debug)]
pub enum LeftInverse {
    Found(Morphism),
    /// Functional on `End(C(X))` (by basis component) vanishing on every
    /// `h ∘ f` but not on the identity.
    Infeasible(Vec<(Component, Scalar)>),
}

/// Solves `g ∘ f = id` exactly.
pub fn solve_left_inverse(f: &Morphism) -> Result<LeftInverse> {
    let (x, y) = (f.source(), f.target());
    let unknowns = hom_basis(y, x);
    let equations = hom_basis(x, x);
    let field = f.measure().field();
    let columns: Vec<Vec<Scalar>> = unknowns
        .par_iter()
        .map(|b| {
            let g = Morphism::basis(f.measure(), y, x, b)?;
            Ok(g.compose(f)?.to_vector())
        })
        .collect::<Result<_>>()?;
    let mut a = Matrix::zeros(field, equations.len(), unknowns.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            a.set(i, j, v.clone());
        }
    }
    let rhs = Morphism::identity(f.measure(), x)?.to_vector();
    match a.solve(&rhs) {
        Solve::Solution(sol) => {
            let g = Morphism::from_coeffs(f.measure(), y, x, unknowns.into_iter().zip(sol))?;
            Ok(LeftInverse::Found(g))
        }
        Solve::Infeasible(cert) => Ok(LeftInverse::Infeasible(equations.into_iter().zip(cert).collect())),
    }
}

/// Checks that `cert` vanishes on `h ∘ f` for all basis `h` and not on `id`.
pub fn verify_infeasibility(f: &Morphism, cert: &[(Component, Scalar)]) -> Result<bool> {
    let (x, y) = (f.source(), f.target());
    let apply = |m: &Morphism| {
        cert.iter().fold(f.measure().field().zero(), |acc, (z, c)| &acc + &(c * &m.coeff(z)))
    };
    if apply(&Morphism::identity(f.measure(), x)?).is_zero() {
        return Ok(false);
    }
    for b in hom_basis(y, x) {
        let g = Morphism::basis(f.measure(), y, x, &b)?;
        if !apply(&g.compose(f)?).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coordinate-selection map viewed as a one-orbit map.
pub fn selection(map: &TransitiveMap) -> GSetMap {
    GSetMap::from_transitive(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{OIInjection, OrbitSymbol};
    use crate::scalar::Field;

    fn mu(k: usize) -> MeasureSpec {
        MeasureSpec::single(k, Field::Rational).unwrap()
    }

    fn p(n: usize, i: usize) -> GSetMap {
        let m = TransitiveMap::new(
            OrbitSymbol::single(n),
            OrbitSymbol::single(n - 1),
            vec![OIInjection::omission(n, i).unwrap()],
        )
        .unwrap();
        GSetMap::from_transitive(&m)
    }

    fn basis_of(m: &MeasureSpec, x: &GSet, y: &GSet) -> Vec<Morphism> {
        hom_basis(x, y).iter().map(|z| Morphism::basis(m, x, y, z).unwrap()).collect()
    }

    #[test]
    fn push_pull_is_measure() {
        for k in 1..=4 {
            let m = mu(k);
            let f = GSetMap::to_point(&GSet::power(1));
            let c = Morphism::pushforward(&m, &f).unwrap().compose(&Morphism::pullback(&m, &f).unwrap()).unwrap();
            let expected = Morphism::identity(&m, &GSet::point(1)).unwrap().scale(&m.scalar(crate::measure::MEASURE_TABLE[k - 1][0]));
            assert_eq!(c, expected);
        }
    }

    #[test]
    fn pullback_graph() {
        let m = mu(1);
        let f = Morphism::pullback(&m, &p(2, 2)).unwrap();
        assert_eq!(f.coeffs().len(), 1);
        let (z, v) = f.coeffs().iter().next().unwrap();
        assert_eq!(z.words()[0].to_string(), "BL");
        assert!(v.is_one());
        assert_eq!(Morphism::pullback(&m, &GSetMap::identity(&GSet::power(2))).unwrap(), Morphism::identity(&m, &GSet::power(2)).unwrap());
    }

    #[test]
    fn pullback_is_contravariant() {
        let m = mu(2);
        for i in 1..=3 {
            for j in 1..=2 {
                let f = p(3, i);
                let g = p(2, j);
                let gf = f.compose(&g).unwrap();
                let lhs = Morphism::pullback(&m, &gf).unwrap();
                let rhs = Morphism::pullback(&m, &f).unwrap().compose(&Morphism::pullback(&m, &g).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn span_agrees_with_composite() {
        for k in 1..=4 {
            let m = mu(k);
            for a in 1..=2 {
                for b in 1..=2 {
                    let lhs = Morphism::pushforward(&m, &p(2, a)).unwrap().compose(&Morphism::pullback(&m, &p(2, b)).unwrap()).unwrap();
                    let rhs = Morphism::from_span(&m, &p(2, a), &p(2, b)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn traces_and_dims() {
        let m = mu(1);
        for n in 0..=3 {
            let x = GSet::power(n);
            let id = Morphism::identity(&m, &x).unwrap();
            assert_eq!(id.trace().unwrap(), m.scalar(if n % 2 == 0 { 1 } else { -1 }));
        }
        let r = GSet::power(1);
        let lr = Component::new(vec![0, 0], vec![Word::parse_merge("LR").unwrap()]);
        assert!(Morphism::basis(&m, &r, &r, &lr).unwrap().trace().unwrap().is_zero());
        let f = Morphism::zero(&m, &r, &GSet::power(2)).unwrap();
        assert_eq!(f.trace(), Err(Error::NotEndomorphism));
    }

    #[test]
    fn identity_and_associativity_small() {
        for k in 1..=4 {
            let m = mu(k);
            let objs: Vec<GSet> = (0..=2).map(GSet::power).collect();
            for x in &objs {
                for y in &objs {
                    for f in basis_of(&m, x, y) {
                        assert_eq!(Morphism::identity(&m, y).unwrap().compose(&f).unwrap(), f);
                        assert_eq!(f.compose(&Morphism::identity(&m, x).unwrap()).unwrap(), f);
                    }
                }
            }
            let (x, y, z, w) = (&objs[1], &objs[1], &objs[1], &objs[0]);
            for f in basis_of(&m, x, y) {
                for g in basis_of(&m, y, z) {
                    for h in basis_of(&m, z, w) {
                        let a = h.compose(&g.compose(&f).unwrap()).unwrap();
                        let b = h.compose(&g).unwrap().compose(&f).unwrap();
                        assert_eq!(a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn fast_and_exact_composition_agree() {
        let specs = [
            mu(2),
            MeasureSpec::single(3, Field::prime(7).unwrap()).unwrap(),
            MeasureSpec::new(vec![1, 4], Field::Rational).unwrap(),
        ];
        for m in &specs {
            let objs: Vec<GSet> = if m.shape() == 1 {
                (0..=2).map(GSet::power).collect()
            } else {
                use crate::orbit::OrbitSymbol;
                vec![GSet::point(2), GSet::transitive(OrbitSymbol::new(vec![1, 1]).unwrap()), GSet::transitive(OrbitSymbol::new(vec![0, 2]).unwrap())]
            };
            let half = m.field().from_i64(2).inv().unwrap();
            for x in &objs {
                for y in &objs {
                    for z in &objs {
                        let fs = basis_of(m, x, y);
                        let gs = basis_of(m, y, z);
                        let sum_f = fs.iter().skip(1).fold(fs[0].clone(), |a, b| a.add(b).unwrap());
                        for g in &gs {
                            assert_eq!(g.compose(&sum_f).unwrap(), g.compose_exact(&sum_f).unwrap());
                            let gh = g.scale(&half);
                            assert_eq!(gh.compose(&sum_f).unwrap(), gh.compose_exact(&sum_f).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn transpose_reverses_composition() {
        let m = mu(3);
        let (x, y) = (GSet::power(1), GSet::power(2));
        for f in basis_of(&m, &x, &y) {
            for g in basis_of(&m, &y, &x) {
                let lhs = g.compose(&f).unwrap().transpose();
                let rhs = f.transpose().compose(&g.transpose()).unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(f.transpose().transpose(), f);
            }
        }
    }

    #[test]
    fn tensor_of_identities_and_traces() {
        for k in 1..=4 {
            let m = mu(k);
            let (x, y) = (GSet::power(1), GSet::power(2));
            let t = Morphism::identity(&m, &x).unwrap().tensor(&Morphism::identity(&m, &y).unwrap()).unwrap();
            let xy = product_gset(&[x.clone(), y.clone()]);
            assert_eq!(t, Morphism::identity(&m, &xy).unwrap());
            for f in basis_of(&m, &x, &x) {
                for g in basis_of(&m, &x, &x) {
                    let tr = f.tensor(&g).unwrap().trace().unwrap();
                    assert_eq!(tr, &f.trace().unwrap() * &g.trace().unwrap());
                }
            }
            let empty = GSet::empty(1);
            let z = Morphism::identity(&m, &x).unwrap().tensor(&Morphism::identity(&m, &empty).unwrap()).unwrap();
            assert!(z.is_zero() && z.source().is_empty());
        }
    }

    #[test]
    fn algebra_axioms() {
        for k in 1..=4 {
            let m = mu(k);
            for n in 0..=2 {
                let x = GSet::power(n);
                let a = algebra_structure(&m, &x).unwrap();
                assert_eq!(a.mult.compose(&a.mult.transpose()).unwrap(), Morphism::identity(&m, &x).unwrap());
                assert_eq!(a.comult, a.mult.transpose());
                let e = a.counit.compose(&a.unit).unwrap();
                assert_eq!(e.trace().unwrap(), dim(&m, &x));
            }
            let one = algebra_structure(&m, &GSet::point(1)).unwrap();
            assert_eq!(one.unit, Morphism::identity(&m, &GSet::point(1)).unwrap());
        }
    }

    #[test]
    fn gram_on_end_r() {
        let g = gram_matrix(&mu(1), &GSet::power(1), &GSet::power(1)).unwrap();
        assert_eq!(g.rows(), 3);
        assert!(g.is_nondegenerate());
    }

    #[test]
    fn left_inverses() {
        let m = mu(1);
        let x = GSet::power(2);
        let id = Morphism::identity(&m, &x).unwrap();
        match solve_left_inverse(&id).unwrap() {
            LeftInverse::Found(g) => assert_eq!(g.compose(&id).unwrap(), id),
            LeftInverse::Infeasible(_) => panic!("identity has a left inverse"),
        }
        let zero = Morphism::zero(&m, &GSet::power(1), &x).unwrap();
        match solve_left_inverse(&zero).unwrap() {
            LeftInverse::Found(_) => panic!("zero map has no left inverse"),
            LeftInverse::Infeasible(cert) => assert!(verify_infeasibility(&zero, &cert).unwrap()),
        }
    }
}
