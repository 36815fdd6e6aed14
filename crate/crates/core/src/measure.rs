//! The four `Z`-valued measures on `Aut(R, <)` and their products.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbit::{enumerate_injections, fiber_product, GSet, GSetMap, OIInjection, OrbitSymbol, TransitiveMap};
use crate::scalar::{Field, Scalar};

/// Values on `p_{1,1}`, `p_{2,1}`, `p_{2,2}` for the measures 1 to 4.
pub const MEASURE_TABLE: [[i64; 3]; 4] = [[-1, -1, -1], [0, -1, 0], [0, 0, -1], [1, 0, 0]];

/// `mu_k(p_{n,i})` where `p_{n,i}` omits coordinate `i` (1-based).
pub fn mu_omission(k: usize, n: usize, i: usize) -> i64 {
    let [v1, v21, v22] = MEASURE_TABLE[k - 1];
    assert!(1 <= i && i <= n, "p_{{{n},{i}}} is undefined");
    if n == 1 {
        v1
    } else if i == 1 {
        v21
    } else if i == n {
        v22
    } else {
        -1
    }
}

/// Measure of the selection map of `inj`, omitting coordinates from the top down.
pub fn mu_injection(k: usize, inj: &OIInjection) -> i64 {
    mu_omitting(k, inj.codomain(), &inj.omitted())
}

/// Measure of the map `R^(n) -> R^(n - |omitted|)` dropping the given
/// ascending 0-based coordinates.
pub fn mu_omitting(k: usize, n: usize, omitted: &[usize]) -> i64 {
    let mut n = n;
    let mut acc = 1;
    for &d in omitted.iter().rev() {
        acc *= mu_omission(k, n, d + 1);
        n -= 1;
        if acc == 0 {
            break;
        }
    }
    acc
}

/// Measure computed by omitting coordinates in the given order
/// (original 0-based indices).
pub fn mu_injection_along(k: usize, inj: &OIInjection, order: &[usize]) -> i64 {
    let mut alive: Vec<usize> = (0..inj.codomain()).collect();
    let mut acc = 1;
    for &d in order {
        let pos = alive.iter().position(|&a| a == d).expect("omitted coordinate");
        acc *= mu_omission(k, alive.len(), pos + 1);
        alive.remove(pos);
    }
    acc
}

/// Every omission order of every injection with codomain at most `n_max`
/// gives the same product.
pub fn check_path_independence(k: usize, n_max: usize) -> std::result::Result<usize, String> {
    let mut checked = 0;
    for n in 0..=n_max {
        for m in 0..=n {
            for inj in enumerate_injections(m, n) {
                let omitted = inj.omitted();
                let reference = mu_injection(k, &inj);
                for order in omitted.iter().copied().permutations(omitted.len()) {
                    checked += 1;
                    let v = mu_injection_along(k, &inj, &order);
                    if v != reference {
                        return Err(format!(
                            "mu{k}: {inj} gives {v} along {order:?} but {reference} top-down"
                        ));
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Product measure on `G^r`: one measure index per factor, plus the scalar field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasureSpec {
    factors: Vec<usize>,
    field: Field,
}

impl MeasureSpec {
    pub fn new(factors: Vec<usize>, field: Field) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::ShapeMismatch("a measure needs at least one factor".into()));
        }
        if let Some(&k) = factors.iter().find(|&&k| !(1..=4).contains(&k)) {
            return Err(Error::InvalidMeasure(k));
        }
        Ok(MeasureSpec { factors, field })
    }

    pub fn single(k: usize, field: Field) -> Result<Self> {
        Self::new(vec![k], field)
    }

    /// Parses `mu1`, `1`, `mu1*mu1`, `mu1,mu2`, `mu1xmu1`.
    pub fn parse(s: &str, field: Field) -> Result<Self> {
        let factors = s
            .split(['*', ',', 'x', '⊗'])
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                let t = p.trim();
                let t = t.strip_prefix("mu").or_else(|| t.strip_prefix("μ")).unwrap_or(t);
                t.parse::<usize>().map_err(|_| Error::Invalid(format!("unknown measure {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors, field)
    }

    pub fn shape(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn with_field(&self, field: Field) -> Self {
        MeasureSpec { factors: self.factors.clone(), field }
    }

    pub fn scalar(&self, v: i64) -> Scalar {
        self.field.from_i64(v)
    }

    /// Integer measure of a transitive map.
    pub fn transitive_int(&self, f: &TransitiveMap) -> i64 {
        debug_assert_eq!(f.source().shape(), self.shape());
        let mut acc = 1;
        for (t, inj) in f.injections().iter().enumerate() {
            acc *= mu_injection(self.factors[t], inj);
            if acc == 0 {
                break;
            }
        }
        acc
    }

    pub fn transitive(&self, f: &TransitiveMap) -> Scalar {
        self.scalar(self.transitive_int(f))
    }

    /// Measure of a map whose target is a single orbit: the sum over source orbits.
    pub fn map_int(&self, f: &GSetMap) -> Result<i64> {
        if f.target().len() != 1 {
            return Err(Error::NonTransitiveTarget(f.target().len()));
        }
        Ok(f.assignment().iter().map(|(_, m)| self.transitive_int(m)).sum())
    }

    pub fn map(&self, f: &GSetMap) -> Result<Scalar> {
        self.map_int(f).map(|v| self.scalar(v))
    }

    pub fn orbit_int(&self, o: &OrbitSymbol) -> i64 {
        self.transitive_int(&TransitiveMap::to_point(o))
    }

    pub fn object_int(&self, x: &GSet) -> i64 {
        x.orbits().iter().map(|o| self.orbit_int(o)).sum()
    }

    pub fn object(&self, x: &GSet) -> Scalar {
        self.scalar(self.object_int(x))
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.factors.iter().map(|k| format!("mu{k}")).join("*"))?;
        if self.field != Field::Rational {
            write!(f, " over {}", self.field)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub compositions: usize,
    pub squares: usize,
    pub failure: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Injection pairs `(f, g)` with a common domain `[m]` and codomains at most `n_max`.
fn cospans(n_max: usize) -> Vec<(OIInjection, OIInjection)> {
    let mut out = Vec::new();
    for m in 0..=n_max {
        let legs: Vec<OIInjection> = (m..=n_max).flat_map(|n| enumerate_injections(m, n)).collect();
        for f in &legs {
            for g in &legs {
                out.push((f.clone(), g.clone()));
            }
        }
    }
    out
}

/// Checks normalization, multiplicativity and base-change additivity on all
/// transitive maps whose per-factor arities are at most `n_max`.
pub fn check_measure_axioms(spec: &MeasureSpec, n_max: usize) -> AxiomReport {
    let mut report = AxiomReport::default();
    let r = spec.shape();
    for t in 0..r {
        if let Err(e) = check_path_independence(spec.factors[t], n_max) {
            report.failure = Some(e);
            return report;
        }
    }
    let point = OrbitSymbol::point(r);
    if spec.transitive_int(&TransitiveMap::identity(&point)) != 1 {
        report.failure = Some("measure of the point is not 1".into());
        return report;
    }
    // Multiplicativity over composable chains [a] -> [b] -> [c].
    for t in 0..r {
        let k = spec.factors[t];
        for c in 0..=n_max {
            for b in 0..=c {
                for a in 0..=b {
                    for inner in enumerate_injections(a, b) {
                        for outer in enumerate_injections(b, c) {
                            report.compositions += 1;
                            let comp = inner.then(&outer).expect("composable");
                            let lhs = mu_injection(k, &comp);
                            let rhs = mu_injection(k, &inner) * mu_injection(k, &outer);
                            if lhs != rhs {
                                report.failure = Some(format!(
                                    "mu{k} not multiplicative on {inner} then {outer}: {lhs} != {rhs}"
                                ));
                                return report;
                            }
                        }
                    }
                }
            }
        }
    }
    // Base change: mu(f) = sum of mu(f') over the orbits of the fiber product.
    let per_factor = cospans(n_max);
    for square in (0..r).map(|_| per_factor.iter()).multi_cartesian_product() {
        report.squares += 1;
        let f = TransitiveMap::from_parts(square.iter().map(|(f, _)| f.clone()).collect());
        let g = TransitiveMap::from_parts(square.iter().map(|(_, g)| g.clone()).collect());
        let fm = GSetMap::from_transitive(&f);
        let gm = GSetMap::from_transitive(&g);
        let comps = match fiber_product(&fm, &gm) {
            Ok(c) => c,
            Err(e) => {
                report.failure = Some(e.to_string());
                return report;
            }
        };
        let lhs = spec.transitive_int(&f);
        let rhs: i64 = comps.iter().map(|c| spec.transitive_int(&c.slot_map(1))).sum();
        if lhs != rhs {
            report.failure = Some(format!(
                "{spec}: base change of {f} along {g} gives {rhs}, expected {lhs}"
            ));
            return report;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(k: usize) -> MeasureSpec {
        MeasureSpec::single(k, Field::Rational).unwrap()
    }

    #[test]
    fn table_values() {
        for k in 1..=4 {
            let row = [
                mu_omission(k, 1, 1),
                mu_omission(k, 2, 1),
                mu_omission(k, 2, 2),
            ];
            assert_eq!(row, MEASURE_TABLE[k - 1]);
            assert_eq!(mu_omission(k, 3, 2), -1);
        }
    }

    #[test]
    fn object_measures() {
        // mu_k(R^(n)) for n = 0..=3.
        let expected = [[1, -1, 1, -1], [1, 0, 0, 0], [1, 0, 0, 0], [1, 1, 0, 0]];
        for k in 1..=4 {
            let got: Vec<i64> = (0..=3).map(|n| spec(k).object_int(&GSet::power(n))).collect();
            assert_eq!(got, expected[k - 1], "mu{k}");
        }
    }

    #[test]
    fn path_independence_to_seven() {
        for k in 1..=4 {
            assert!(check_path_independence(k, 7).is_ok());
        }
    }

    #[test]
    fn axioms_single_factor() {
        for k in 1..=4 {
            let rep = check_measure_axioms(&spec(k), 3);
            assert!(rep.passed(), "{:?}", rep.failure);
        }
    }

    #[test]
    fn parse_specs() {
        let s = MeasureSpec::parse("mu1*mu1", Field::Rational).unwrap();
        assert_eq!(s.factors(), &[1, 1]);
        assert_eq!(MeasureSpec::parse("3", Field::Rational).unwrap().factors(), &[3]);
        assert!(MeasureSpec::parse("mu5", Field::Rational).is_err());
        assert!(MeasureSpec::parse("nu1", Field::Rational).is_err());
    }

    #[test]
    fn map_requires_transitive_target() {
        let x = GSet::new(1, vec![OrbitSymbol::single(1), OrbitSymbol::single(0)]).unwrap();
        let id = GSetMap::identity(&x);
        assert!(matches!(spec(1).map_int(&id), Err(Error::NonTransitiveTarget(2))));
        assert_eq!(spec(1).map_int(&GSetMap::to_point(&x)).unwrap(), 0);
    }
}
