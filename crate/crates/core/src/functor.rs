//! Tensor functors out of the Delannoy categories, built from a Delannic
//! ordered set `A` in the target: `R^(n)` goes to the increasing `n`-tuples
//! of `A`, and a basis morphism with pattern `(a, b)` goes to the push-pull
//! along the images of the coordinate selections `a` and `b`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::delannic::{profile, DelannicProfile, DelannicType};
use crate::error::{Error, Result};
use crate::linear::{hom_basis, Morphism};
use crate::measure::{mu_injection, MeasureSpec};
use crate::orbit::{
    enumerate_injections, image_factorization, product_decompose, product_gset, Component, GSet, GSetMap,
    OIInjection, TransitiveMap,
};
use crate::order::{ordered_iso, tuples, OrderExpr, OrderedGSet, TupleLevel};

/// A basis morphism with its image and the image of its transpose.
type BasisImage = (Component, Morphism, Morphism);

pub const DEFAULT_CEILING: usize = 6;

/// Outcome of a sweep: how many cases were looked at and what went wrong.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport { name: name.to_string(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn absorb(&mut self, results: Vec<std::result::Result<(), String>>) {
        self.checked += results.len();
        self.failures.extend(results.into_iter().filter_map(std::result::Result::err));
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{}: {verdict} ({} cases", self.name, self.checked)?;
        if !self.failures.is_empty() {
            write!(f, ", {} failures; first: {}", self.failures.len(), self.failures[0])?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fullness {
    /// `A^(n)` has at most one orbit for every `n <= N`.
    FullUpTo(usize),
    NotFull { n: usize, orbits: usize },
}

/// A tensor functor `C_i -> target` determined by its generator.
#[derive(Debug)]
pub struct TensorFunctor {
    source_type: u8,
    source: MeasureSpec,
    target: MeasureSpec,
    generator: OrderedGSet,
    expr: Option<OrderExpr>,
    profile: DelannicProfile,
    ceiling: usize,
    levels: Vec<OnceLock<Arc<TupleLevel>>>,
    psi: Mutex<HashMap<OIInjection, Arc<GSetMap>>>,
    images: Mutex<HashMap<Component, Arc<Morphism>>>,
}

impl Clone for TensorFunctor {
    fn clone(&self) -> Self {
        TensorFunctor {
            source_type: self.source_type,
            source: self.source.clone(),
            target: self.target.clone(),
            generator: self.generator.clone(),
            expr: self.expr.clone(),
            profile: self.profile.clone(),
            ceiling: self.ceiling,
            levels: self.levels.clone(),
            psi: Mutex::default(),
            images: Mutex::default(),
        }
    }
}

impl TensorFunctor {
    /// Evaluates `expr` in the target shape and builds from the result.
    pub fn build(i: u8, target: &MeasureSpec, expr: &OrderExpr) -> Result<Self> {
        let generator = expr.evaluate(target.shape())?;
        let mut f = Self::from_generator(i, target, generator)?;
        f.expr = Some(expr.clone());
        Ok(f)
    }

    /// Fails with the computed type unless `generator` is Delannic of type `i`.
    pub fn from_generator(i: u8, target: &MeasureSpec, generator: OrderedGSet) -> Result<Self> {
        DelannicType::from_index(i)?;
        if generator.shape() != target.shape() {
            return Err(Error::ShapeMismatch(format!(
                "generator of shape {} in a target of shape {}",
                generator.shape(),
                target.shape()
            )));
        }
        let p = profile(&generator, target)?;
        if !p.kind.matches(i) {
            return Err(Error::TypeMismatch { expected: i, found: p.to_string() });
        }
        Ok(TensorFunctor {
            source_type: i,
            source: MeasureSpec::single(i as usize, target.field())?,
            target: target.clone(),
            generator,
            expr: None,
            profile: p,
            ceiling: DEFAULT_CEILING,
            levels: (0..=DEFAULT_CEILING).map(|_| OnceLock::new()).collect(),
            psi: Mutex::default(),
            images: Mutex::default(),
        })
    }

    pub fn with_ceiling(mut self, ceiling: usize) -> Self {
        self.levels.resize_with(ceiling + 1, OnceLock::new);
        self.levels.truncate(ceiling + 1);
        self.ceiling = ceiling;
        self
    }

    /// Replaces a cached level. Only meant for negative controls.
    #[doc(hidden)]
    pub fn with_level(self, n: usize, level: TupleLevel) -> Self {
        let mut f = self;
        let cell = OnceLock::new();
        let _ = cell.set(Arc::new(level));
        f.levels[n] = cell;
        f.psi = Mutex::default();
        f.images = Mutex::default();
        f
    }

    pub fn source_type(&self) -> u8 {
        self.source_type
    }

    pub fn source(&self) -> &MeasureSpec {
        &self.source
    }

    pub fn target(&self) -> &MeasureSpec {
        &self.target
    }

    pub fn generator(&self) -> &OrderedGSet {
        &self.generator
    }

    pub fn expr(&self) -> Option<&OrderExpr> {
        self.expr.as_ref()
    }

    pub fn profile(&self) -> &DelannicProfile {
        &self.profile
    }

    pub fn ceiling(&self) -> usize {
        self.ceiling
    }

    /// `Ψ(R^(n))`, computed once.
    pub fn level(&self, n: usize) -> Result<Arc<TupleLevel>> {
        let cell = self.levels.get(n).ok_or(Error::CeilingExceeded { requested: n, ceiling: self.ceiling })?;
        Ok(cell.get_or_init(|| tuples(&self.generator, n)).clone())
    }

    /// `Ψ` of the selection `R^(n) -> R^(m)` keeping the coordinates `inj: [m] -> [n]`.
    pub fn psi_map(&self, inj: &OIInjection) -> Result<Arc<GSetMap>> {
        if let Some(m) = self.psi.lock().expect("psi cache").get(inj) {
            return Ok(m.clone());
        }
        let upper = self.level(inj.codomain())?;
        let lower = self.level(inj.domain())?;
        let m = Arc::new(upper.projection(&lower, inj)?);
        self.psi.lock().expect("psi cache").insert(inj.clone(), m.clone());
        Ok(m)
    }

    fn check_source_object(&self, x: &GSet) -> Result<()> {
        if x.shape() != 1 {
            return Err(Error::ShapeMismatch(format!("source objects have shape 1, got {}", x.shape())));
        }
        Ok(())
    }

    /// Orbit offsets of the blocks of `apply_object(x)`.
    fn offsets(&self, x: &GSet) -> Result<Vec<usize>> {
        let mut acc = 0;
        x.orbits()
            .iter()
            .map(|o| {
                let here = acc;
                acc += self.level(o.arity(0))?.gset().len();
                Ok(here)
            })
            .collect()
    }

    pub fn apply_object(&self, x: &GSet) -> Result<GSet> {
        self.check_source_object(x)?;
        let mut orbits = Vec::new();
        for o in x.orbits() {
            orbits.extend(self.level(o.arity(0))?.gset().orbits().iter().cloned());
        }
        GSet::new(self.target.shape(), orbits)
    }

    /// Image of the basis element `A_Z` for `Z` in `R^(m) x R^(n)`, between the levels.
    pub fn basis_image(&self, z: &Component) -> Result<Arc<Morphism>> {
        if let Some(m) = self.images.lock().expect("image cache").get(z) {
            return Ok(m.clone());
        }
        let w = &z.words()[0];
        let to_target = self.psi_map(&w.slot_injection(0))?;
        let to_source = self.psi_map(&w.slot_injection(1))?;
        let m = Arc::new(Morphism::from_span(&self.target, &to_target, &to_source)?);
        self.images.lock().expect("image cache").insert(z.clone(), m.clone());
        Ok(m)
    }

    pub fn apply_morphism(&self, f: &Morphism) -> Result<Morphism> {
        if f.measure().factors() != [self.source_type as usize] {
            return Err(Error::MorphismMismatch(format!(
                "morphism lives in a category with measure {:?}, functor starts at type {}",
                f.measure().factors(),
                self.source_type
            )));
        }
        if f.measure().field() != self.target.field() {
            return Err(Error::FieldMismatch(format!("{} vs {}", f.measure().field(), self.target.field())));
        }
        self.check_source_object(f.source())?;
        self.check_source_object(f.target())?;
        let (src_off, tgt_off) = (self.offsets(f.source())?, self.offsets(f.target())?);
        let mut coeffs: Vec<(Component, crate::Scalar)> = Vec::new();
        for (z, c) in f.coeffs() {
            let img = self.basis_image(z)?;
            for (w, v) in img.coeffs() {
                let moved = w.with_orbits(vec![tgt_off[z.orbit(0)] + w.orbit(0), src_off[z.orbit(1)] + w.orbit(1)]);
                coeffs.push((moved, v * c));
            }
        }
        Morphism::from_coeffs(&self.target, &self.apply_object(f.source())?, &self.apply_object(f.target())?, coeffs)
    }

    /// Pushes the order of a source ordered set through the functor.
    pub fn apply_ordered(&self, o: &OrderedGSet) -> Result<OrderedGSet> {
        let carrier = self.apply_object(o.carrier())?;
        let off = self.offsets(o.carrier())?;
        let mut less = BTreeSet::new();
        for z in o.less() {
            let w = &z.words()[0];
            let k = w.len();
            let a = self.psi_map(&w.slot_injection(0))?;
            let b = self.psi_map(&w.slot_injection(1))?;
            let level = self.level(k)?;
            for (u, sym) in level.gset().orbits().iter().enumerate() {
                let (ja, ma) = &a.assignment()[u];
                let (jb, mb) = &b.assignment()[u];
                let (c, conn) =
                    image_factorization(sym, &[(off[z.orbit(0)] + ja, ma), (off[z.orbit(1)] + jb, mb)])?;
                if !conn.is_identity() {
                    return Err(Error::InvalidOrder(format!("image of {z} is not a pair of points")));
                }
                less.insert(c);
            }
        }
        Ok(OrderedGSet::new(carrier, less))
    }

    /// Regrouping isomorphism `Ψ(R^(a) x R^(b)) -> Ψ(R^(a)) x Ψ(R^(b))`.
    pub fn regroup(&self, a: usize, b: usize) -> Result<GSetMap> {
        let (la, lb) = (self.level(a)?, self.level(b)?);
        let comps = product_decompose(&[la.gset().clone(), lb.gset().clone()]);
        let index: HashMap<&Component, usize> = comps.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let xy = product_gset(&[GSet::power(a), GSet::power(b)]);
        let mut assignment = Vec::new();
        for z in product_decompose(&[GSet::power(a), GSet::power(b)]) {
            let w = &z.words()[0];
            let pa = self.psi_map(&w.slot_injection(0))?;
            let pb = self.psi_map(&w.slot_injection(1))?;
            let level = self.level(w.len())?;
            for (u, sym) in level.gset().orbits().iter().enumerate() {
                let (ja, ma) = &pa.assignment()[u];
                let (jb, mb) = &pb.assignment()[u];
                let (c, conn) = image_factorization(sym, &[(*ja, ma), (*jb, mb)])?;
                let i = *index.get(&c).ok_or_else(|| Error::Invalid(format!("{c} is not a product orbit")))?;
                assignment.push((i, conn));
            }
        }
        GSetMap::new(self.apply_object(&xy)?, product_gset(&[la.gset().clone(), lb.gset().clone()]), assignment)
    }

    /// Faithful unless the generator is `0` or `1`.
    pub fn faithful(&self) -> bool {
        let c = self.generator.carrier();
        !(c.is_empty() || (c.len() == 1 && c.orbit(0).total() == 0))
    }

    pub fn full(&self, bound: usize) -> Result<Fullness> {
        for n in 0..=bound {
            let orbits = self.level(n)?.gset().len();
            if orbits > 1 {
                return Ok(Fullness::NotFull { n, orbits });
            }
        }
        Ok(Fullness::FullUpTo(bound))
    }

    fn basis(&self, a: usize, b: usize) -> Vec<(Component, Morphism)> {
        let (x, y) = (GSet::power(a), GSet::power(b));
        hom_basis(&x, &y)
            .into_iter()
            .map(|z| {
                let m = Morphism::basis(&self.source, &x, &y, &z).expect("basis element");
                (z, m)
            })
            .collect()
    }

    /// `F(g ∘ f) = F(g) ∘ F(f)` over basis pairs among `R^(a)`, `a <= bound`,
    /// plus identities and transposes.
    pub fn check_functoriality(&self, bound: usize) -> CheckReport {
        let mut report = CheckReport::new("functoriality");
        let objs: Vec<usize> = (0..=bound).collect();
        let mut images: HashMap<(usize, usize), Vec<BasisImage>> = HashMap::new();
        for &a in &objs {
            for &b in &objs {
                let list: Vec<_> = self
                    .basis(a, b)
                    .into_par_iter()
                    .map(|(z, m)| {
                        let img = self.apply_morphism(&m);
                        (z, m, img)
                    })
                    .collect();
                let mut ok = Vec::new();
                for (z, m, img) in list {
                    match img {
                        Ok(i) => ok.push((z, m, i)),
                        Err(e) => report.failures.push(format!("apply {z}: {e}")),
                    }
                }
                images.insert((a, b), ok);
            }
        }
        let mut results = Vec::new();
        for &a in &objs {
            let x = GSet::power(a);
            results.push((|| {
                let id = Morphism::identity(&self.source, &x).map_err(|e| e.to_string())?;
                let img = self.apply_morphism(&id).map_err(|e| e.to_string())?;
                let fx = self.apply_object(&x).map_err(|e| e.to_string())?;
                let want = Morphism::identity(&self.target, &fx).map_err(|e| e.to_string())?;
                (img == want).then_some(()).ok_or_else(|| format!("identity of R^({a})"))
            })());
        }
        for (&(a, b), list) in &images {
            let back = &images[&(b, a)];
            for (z, _, img) in list {
                let zt = z.transpose();
                let t = back.iter().find(|(w, _, _)| *w == zt).map(|(_, _, i)| i);
                results.push(match t {
                    Some(t) if *t == img.transpose() => Ok(()),
                    _ => Err(format!("transpose of {z} in Hom(R^({a}), R^({b}))")),
                });
            }
        }
        report.absorb(results);
        for &a in &objs {
            for &b in &objs {
                for &c in &objs {
                    let (fs, gs) = (&images[&(a, b)], &images[&(b, c)]);
                    let results: Vec<_> = fs
                        .par_iter()
                        .flat_map_iter(|f| gs.iter().map(move |g| (f, g)))
                        .map(|((zf, f, ff), (zg, g, fg))| {
                            let lhs = g.compose(f).and_then(|gf| self.apply_morphism(&gf));
                            let rhs = fg.compose(ff);
                            match (lhs, rhs) {
                                (Ok(l), Ok(r)) if l == r => Ok(()),
                                (Ok(_), Ok(_)) => Err(format!("F(g f) != F(g) F(f) for f = {zf}, g = {zg} ({a} -> {b} -> {c})")),
                                (Err(e), _) | (_, Err(e)) => Err(format!("f = {zf}, g = {zg}: {e}")),
                            }
                        })
                        .collect();
                    report.absorb(results);
                }
            }
        }
        report
    }

    /// `F(f ⊗ g)` against `F(f) ⊗ F(g)`, conjugated by the regrouping
    /// isomorphisms, for `f: R^(a) -> R^(a')`, `g: R^(b) -> R^(b')` with
    /// `a + b <= bound` and `a' + b' <= bound`.
    pub fn check_monoidality(&self, bound: usize) -> CheckReport {
        let mut report = CheckReport::new("monoidality");
        let pairs: Vec<(usize, usize)> =
            (0..=bound).flat_map(|a| (0..=bound - a).map(move |b| (a, b))).collect();
        let mut regroup: HashMap<(usize, usize), Morphism> = HashMap::new();
        let mut results = Vec::new();
        match self.level(0) {
            Ok(l) if l.gset() == &GSet::point(self.target.shape()) => results.push(Ok(())),
            _ => results.push(Err("the unit does not go to the unit".to_string())),
        }
        for &(a, b) in &pairs {
            let r = self.regroup(a, b).and_then(|m| {
                if !m.is_isomorphism() {
                    return Err(Error::Invalid(format!("regrouping for ({a}, {b}) is not bijective")));
                }
                Morphism::pushforward(&self.target, &m)
            });
            match r {
                Ok(m) => {
                    regroup.insert((a, b), m);
                    results.push(Ok(()));
                }
                Err(e) => results.push(Err(format!("regroup ({a}, {b}): {e}"))),
            }
        }
        report.absorb(results);
        if !report.passed() {
            return report;
        }
        for &(a, b) in &pairs {
            for &(a2, b2) in &pairs {
                let fs = self.basis(a, a2);
                let gs = self.basis(b, b2);
                let (phi_src, phi_tgt) = (&regroup[&(a, b)], &regroup[&(a2, b2)]);
                let results: Vec<_> = fs
                    .par_iter()
                    .flat_map_iter(|f| gs.iter().map(move |g| (f, g)))
                    .map(|((zf, f), (zg, g))| {
                        let run = || -> Result<bool> {
                            let lhs = phi_tgt.compose(&self.apply_morphism(&f.tensor(g)?)?)?;
                            let rhs = self.apply_morphism(f)?.tensor(&self.apply_morphism(g)?)?.compose(phi_src)?;
                            Ok(lhs == rhs)
                        };
                        match run() {
                            Ok(true) => Ok(()),
                            Ok(false) => Err(format!("F(f x g) != F(f) x F(g) for f = {zf}, g = {zg}")),
                            Err(e) => Err(format!("f = {zf}, g = {zg}: {e}")),
                        }
                    })
                    .collect();
                report.absorb(results);
            }
        }
        report
    }

    /// For every order-preserving selection `f: R^(n) -> R^(m)` with
    /// `n <= bound`, the fibres of `Ψ(f)` over each target orbit have measure
    /// `mu_i(f)`.
    pub fn check_measure_compat(&self, bound: usize) -> CheckReport {
        let mut report = CheckReport::new("measure compatibility");
        let mut results = Vec::new();
        for n in 0..=bound {
            for m in 0..=n {
                for inj in enumerate_injections(m, n) {
                    results.push(self.fibre_check(&inj));
                }
            }
        }
        report.absorb(results);
        report
    }

    /// The same check restricted to `p_{1,1}`, `p_{2,1}` and `p_{2,2}`.
    pub fn check_generating_maps(&self) -> CheckReport {
        let mut report = CheckReport::new("measure compatibility on generators");
        let results = [(1, 1), (2, 1), (2, 2)]
            .iter()
            .map(|&(n, i)| self.fibre_check(&OIInjection::omission(n, i).expect("omission")))
            .collect();
        report.absorb(results);
        report
    }

    fn fibre_check(&self, inj: &OIInjection) -> std::result::Result<(), String> {
        let want = mu_injection(self.source_type as usize, inj);
        let map = self.psi_map(inj).map_err(|e| e.to_string())?;
        let mut sums = vec![0i64; map.target().len()];
        for (j, t) in map.assignment() {
            sums[*j] += self.target.transitive_int(t);
        }
        match sums.iter().position(|&s| s != want) {
            None => Ok(()),
            Some(v) => Err(format!("fibre of Ψ({inj}) over orbit {v} has measure {}, expected {want}", sums[v])),
        }
    }

    /// `μ_target(Ψ(R^(n))) = μ_i(R^(n))` for `n <= bound`.
    pub fn check_dimensions(&self, bound: usize) -> CheckReport {
        let mut report = CheckReport::new("dimensions");
        let k = self.source_type as usize;
        let results = (0..=bound)
            .map(|n| {
                let want = mu_injection(k, &OIInjection::new(n, Vec::new()).map_err(|e| e.to_string())?);
                let got = self.level(n).map_err(|e| e.to_string())?;
                let got = self.target.object_int(got.gset());
                (got == want).then_some(()).ok_or_else(|| format!("dim Ψ(R^({n})) = {got}, expected {want}"))
            })
            .collect();
        report.absorb(results);
        report
    }
}

/// Isomorphism `outer(inner(R^(n))) -> direct(R^(n))` where `direct` is built
/// from `outer.apply_ordered(inner.generator)`.
fn composite_level_iso(outer: &TensorFunctor, inner: &TensorFunctor, direct: &TensorFunctor, n: usize) -> Result<GSetMap> {
    let inner_level = inner.level(n)?;
    let carrier_off = outer.offsets(inner.generator.carrier())?;
    let target_level = direct.level(n)?;
    let mut assignment = Vec::new();
    for w in inner_level.components() {
        let k = w.words()[0].len();
        let legs: Vec<Arc<GSetMap>> =
            (0..n).map(|j| outer.psi_map(&w.words()[0].slot_injection(j))).collect::<Result<_>>()?;
        for (u, sym) in outer.level(k)?.gset().orbits().iter().enumerate() {
            let parts: Vec<(usize, &TransitiveMap)> = legs
                .iter()
                .enumerate()
                .map(|(j, l)| {
                    let (idx, m) = &l.assignment()[u];
                    (carrier_off[w.orbit(j)] + idx, m)
                })
                .collect();
            let (c, conn) = image_factorization(sym, &parts)?;
            let i = target_level
                .index_of(&c)
                .ok_or_else(|| Error::Invalid(format!("{c} is not an increasing tuple of the composite generator")))?;
            assignment.push((i, conn));
        }
    }
    let src = outer.apply_object(inner_level.gset())?;
    GSetMap::new(src, target_level.gset().clone(), assignment)
}

/// `outer ∘ inner` against the functor built directly from the image of the
/// inner generator, on basis morphisms among `R^(a)`, `a <= bound`. When both
/// functors come from expressions, the image is also compared with the
/// substituted expression.
pub fn check_composite(outer: &TensorFunctor, inner: &TensorFunctor, bound: usize) -> Result<CheckReport> {
    if inner.target.factors() != [outer.source_type as usize] || inner.target.field() != outer.target.field() {
        return Err(Error::MorphismMismatch("the inner functor does not land in the outer source".into()));
    }
    let mut report = CheckReport::new("composite");
    let g = outer.apply_ordered(&inner.generator)?;
    let direct = TensorFunctor::from_generator(inner.source_type, &outer.target, g.clone())?;
    let mut results = Vec::new();
    if let (Some(a), Some(b)) = (&inner.expr, &outer.expr) {
        let sub = a.substitute(std::slice::from_ref(b));
        let e = sub.evaluate(outer.target.shape())?;
        results.push(ordered_iso(&g, &e).map(|_| ()).ok_or_else(|| format!("image of the generator is not {sub}")));
    }
    let isos: Vec<Morphism> = (0..=bound)
        .map(|n| Morphism::pushforward(&outer.target, &composite_level_iso(outer, inner, &direct, n)?))
        .collect::<Result<_>>()?;
    for a in 0..=bound {
        for b in 0..=bound {
            for (z, f) in inner.basis(a, b) {
                let run = || -> Result<bool> {
                    let lhs = isos[b].compose(&outer.apply_morphism(&inner.apply_morphism(&f)?)?)?;
                    let rhs = direct.apply_morphism(&f)?.compose(&isos[a])?;
                    Ok(lhs == rhs)
                };
                results.push(match run() {
                    Ok(true) => Ok(()),
                    Ok(false) => Err(format!("images of {z} differ")),
                    Err(e) => Err(format!("{z}: {e}")),
                });
            }
        }
    }
    report.absorb(results);
    Ok(report)
}

/// Everything the commuting-square scenario establishes.
#[derive(Clone, Debug)]
pub struct SquareReport {
    pub claims: Vec<(String, bool, String)>,
    /// Orbit assignment of the isomorphism between the two composites.
    pub witness: Option<GSetMap>,
}

impl SquareReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|(_, ok, _)| *ok)
    }
}

impl fmt::Display for SquareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (claim, ok, detail) in &self.claims {
            writeln!(f, "[{}] {claim}: {detail}", if *ok { "PASS" } else { "FAIL" })?;
        }
        if let Some(w) = &self.witness {
            write!(f, "witness:")?;
            for (i, (j, _)) in w.assignment().iter().enumerate() {
                write!(f, " {}->{}", i, j)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The square of functors `C_2 -> C_1 -> C_1 ⊠ C_1` and
/// `C_2 -> C_1 ⊠ C_1 -> C_1 ⊠ C_1` built from `A ⊕ A^(2)`, and the
/// isomorphism of the two images of the generator of `C_2`.
pub fn scenario_commuting_square(field: crate::Field) -> Result<SquareReport> {
    let mu1 = MeasureSpec::single(1, field)?;
    let mu11 = MeasureSpec::new(vec![1, 1], field)?;
    let parse = |s: &str| OrderExpr::parse(s);
    let mut claims = Vec::new();
    let mut claim = |name: &str, ok: bool, detail: String| claims.push((name.to_string(), ok, detail));

    let phi1 = TensorFunctor::build(2, &mu1, &parse("sum(R,tup(R,2))")?)?;
    claim("A ⊕ A^(2) has type 2", true, phi1.profile().to_string());
    let phi2 = TensorFunctor::build(2, &mu11, &parse("sum(R@1,tup(R@2,2))")?)?;
    claim("A_1 ⊕ A_2^(2) has type 2", true, phi2.profile().to_string());
    let phi3 = TensorFunctor::build(1, &mu11, &parse("sum(sum(R@1,1),R@2)")?)?;
    claim("A_1 ⊕ 1 ⊕ A_2 has type 1", true, phi3.profile().to_string());

    // Φ3(A)^(2) splits as E' followed by A_2^(2).
    let g3 = phi3.generator().clone();
    let a2_orbit = g3.carrier().len() - 1;
    let sq = g3.tuple_power(2, &[0, 1])?;
    let level = tuples(&g3, 2);
    let (mut head, mut tail) = (Vec::new(), Vec::new());
    for (i, c) in level.components().iter().enumerate() {
        if c.orbit(0) == a2_orbit && c.orbit(1) == a2_orbit {
            tail.push(i);
        } else {
            head.push(i);
        }
    }
    let e_prime = sq.restrict(&head)?;
    let a2sq = sq.restrict(&tail)?;
    let split = OrderedGSet::lex_sum(&e_prime, &a2sq)?;
    claim(
        "Φ3(A)^(2) = E' ⊕ A_2^(2) as a lexicographic sum",
        ordered_iso(&sq, &split).is_some(),
        format!("{} + {} orbits", head.len(), tail.len()),
    );
    let pe = profile(&e_prime, &mu11)?;
    claim("E' has type 3", pe.kind == DelannicType::T3, pe.to_string());
    let pa2 = profile(&a2sq, &mu11)?;
    claim("A_2^(2) has type 4", pa2.kind == DelannicType::T4, pa2.to_string());

    let e = OrderedGSet::lex_sum(&g3, &e_prime)?;
    let p_e = profile(&e, &mu11)?;
    claim("E = Φ3(A) ⊕ E' has type 1", p_e.kind == DelannicType::T1, p_e.to_string());
    let mut have: Vec<_> = e.carrier().orbits().to_vec();
    have.sort();
    let listed = parse("sum(R@1,sum(1,sum(R@2,sum(tup(R@1,2),sum(R@1,sum(R@2,prod(R@1,R@2)))))))")?.evaluate(2)?;
    let mut want: Vec<_> = listed.carrier().orbits().to_vec();
    want.sort();
    claim("E has the orbits A_1, 1, A_2, A_1^(2), A_1, A_2, A_1 ⊗ A_2", have == want, e.carrier().to_string());

    let phi4a = TensorFunctor::from_generator(1, &mu11, e.clone());
    claim("Φ4 on A_1 (generator E) exists", phi4a.is_ok(), p_e.to_string());
    let phi4b = TensorFunctor::build(1, &mu11, &parse("R@2")?);
    claim("Φ4 on A_2 (generator A_2) exists", phi4b.is_ok(), "type 1".into());

    let top = phi3.apply_ordered(phi1.generator())?;
    let top_expr = parse("sum(R,tup(R,2))")?.substitute(&[parse("sum(sum(R@1,1),R@2)")?]).evaluate(2)?;
    claim(
        "Φ3(Φ1(B)) = Φ3(A) ⊕ Φ3(A)^(2)",
        ordered_iso(&top, &top_expr).is_some(),
        format!("{} orbits", top.carrier().len()),
    );
    // Φ4(Φ2(B)) = Φ4(A_1) ⊕ Φ4(A_2)^(2) = E ⊕ A_2^(2).
    let bottom = OrderedGSet::lex_sum(&e, &OrderedGSet::generator(2, 1).tuple_power(2, &[0, 1])?)?;
    let witness = ordered_iso(&top, &bottom);
    claim(
        "Φ3(Φ1(B)) ≅ Φ4(Φ2(B)) as ordered sets",
        witness.is_some(),
        if witness.is_some() { "isomorphism found".into() } else { "no isomorphism".into() },
    );
    Ok(SquareReport { claims, witness })
}

#[cfg(test)]
mod tests;
