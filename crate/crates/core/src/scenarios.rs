//! Named end-to-end scenarios and the self-test, as lists of checked claims.

use std::fmt;

use serde::Serialize;

use crate::delannic::{closure_suite, gamma_identity_suite, GammaConvention, ClosureReport};
use crate::error::Result;
use crate::functor::{scenario_commuting_square, CheckReport, TensorFunctor};
use crate::linear::{
    check_category_laws, delannoy_number, hom_dim, solve_left_inverse, verify_infeasibility, LeftInverse, Morphism,
};
use crate::measure::{check_measure_axioms, check_path_independence, MeasureSpec};
use crate::orbit::{GSet, GSetMap, OIInjection, OrbitSymbol, TransitiveMap};
use crate::order::OrderExpr;
use crate::scalar::Field;
use crate::serial;

pub const SCENARIOS: [&str; 6] = ["measure-table", "simple-functors", "dim0-square", "two-envelopes", "type-tables", "delannoy-dims"];

/// Functors `C_i -> C_k` given by a generator expression, as `(i, k, expr)`.
pub const SIMPLE_FUNCTORS: [(u8, usize, &str); 6] = [
    (2, 1, "sum(R,1)"),
    (2, 1, "sum(R,tup(R,2))"),
    (3, 1, "sum(1,R)"),
    (4, 1, "sum(1,sum(R,1))"),
    (4, 2, "sum(1,R)"),
    (4, 3, "sum(R,1)"),
];

/// Largest bound at which functoriality and monoidality of a functor whose
/// generator has orbits of arity 2 stay within memory: the checks need tuple
/// levels up to twice the bound, and level 6 has 769336 orbits.
pub const QUADRATIC_BOUND: usize = 2;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Claim {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub setup: String,
    pub claims: Vec<Claim>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(name: &str, setup: impl Into<String>) -> Self {
        Report { name: name.into(), setup: setup.into(), claims: Vec::new(), notes: Vec::new() }
    }

    fn claim(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.claims.push(Claim { name: name.into(), passed, detail: detail.into() });
    }

    fn check(&mut self, name: impl Into<String>, r: &CheckReport) {
        let detail = match r.failures.first() {
            None => format!("{} cases", r.checked),
            Some(f) => format!("{} of {} cases fail, first: {f}", r.failures.len(), r.checked),
        };
        self.claim(name, r.passed(), detail);
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} ==", self.name)?;
        writeln!(f, "{}", self.setup)?;
        for c in &self.claims {
            writeln!(f, "[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "  {n}")?;
        }
        Ok(())
    }
}

fn omission_map(n: usize, i: usize) -> Result<TransitiveMap> {
    TransitiveMap::new(OrbitSymbol::single(n), OrbitSymbol::single(n - 1), vec![OIInjection::omission(n, i)?])
}

/// `mu_k(p_{1,1})`, `mu_k(p_{2,1})`, `mu_k(p_{2,2})` for `k = 1..=4`, read off
/// the measure of the transitive maps.
pub fn measure_table() -> Result<[[i64; 3]; 4]> {
    let mut out = [[0; 3]; 4];
    let maps = [omission_map(1, 1)?, omission_map(2, 1)?, omission_map(2, 2)?];
    for (k, row) in out.iter_mut().enumerate() {
        let spec = MeasureSpec::single(k + 1, Field::Rational)?;
        for (v, m) in row.iter_mut().zip(&maps) {
            *v = spec.transitive_int(m);
        }
    }
    Ok(out)
}

pub fn measure_table_report() -> Result<Report> {
    const EXPECTED: [[i64; 3]; 4] = [[-1, -1, -1], [0, -1, 0], [0, 0, -1], [1, 0, 0]];
    let mut r = Report::new("measure-table", "values of the four measures on p_{1,1}, p_{2,1}, p_{2,2}");
    let table = measure_table()?;
    for (k, (row, want)) in table.iter().zip(EXPECTED).enumerate() {
        r.claim(format!("mu{} on the generating maps", k + 1), *row == want, format!("{row:?}"));
    }
    Ok(r)
}

fn functor_label(i: u8, k: usize, e: &str) -> String {
    format!("C{i} -> C{k} via {e}")
}

pub fn simple_functors(field: Field, bound: usize) -> Result<Report> {
    let mut r = Report::new(
        "simple-functors",
        format!("tensor functors built from small ordered algebras, checked on objects of arity up to {bound}"),
    );
    for (i, k, e) in SIMPLE_FUNCTORS {
        let f = TensorFunctor::build(i, &MeasureSpec::single(k, field)?, &OrderExpr::parse(e)?)?;
        let label = functor_label(i, k, e);
        r.claim(format!("{label}: generator has type {i}"), f.profile().kind.matches(i), f.profile().to_string());
        let quadratic = f.generator().carrier().orbits().iter().any(|o| o.total() > 1);
        let n = if quadratic { bound.min(QUADRATIC_BOUND) } else { bound };
        if n < bound {
            r.notes.push(format!("{label}: functoriality and monoidality checked up to {n} only"));
        }
        r.check(format!("{label}: functoriality up to {n}"), &f.check_functoriality(n));
        r.check(format!("{label}: monoidality up to {n}"), &f.check_monoidality(n));
        r.check(format!("{label}: measure compatibility up to {bound}"), &f.check_measure_compat(bound));
        r.check(format!("{label}: generating maps"), &f.check_generating_maps());
        r.claim(format!("{label}: faithful"), f.faithful(), String::new());
        r.notes.push(format!("{label}: fullness {:?}", f.full(n)?));
    }
    Ok(r)
}

pub fn dim0_square(field: Field) -> Result<Report> {
    let sq = scenario_commuting_square(field)?;
    let mut r = Report::new(
        "dim0-square",
        "functors C2 -> C1 -> C1 x C1 and C2 -> C1 x C1 -> C1 x C1 through A + A^(2), compared on the generator",
    );
    for (name, ok, detail) in sq.claims {
        r.claim(name, ok, detail);
    }
    match &sq.witness {
        Some(w) => r.notes.push(format!("witness (orbit assignment): {}", assignment(w))),
        None => r.claim("witness exists", false, "no isomorphism found"),
    }
    Ok(r)
}

fn assignment(w: &GSetMap) -> String {
    w.assignment().iter().enumerate().map(|(i, (j, _))| format!("{i}->{j}")).collect::<Vec<_>>().join(" ")
}

pub fn two_envelopes(field: Field) -> Result<Report> {
    let mu2 = MeasureSpec::single(2, field)?;
    let mu1 = MeasureSpec::single(1, field)?;
    let mut r = Report::new(
        "two-envelopes",
        "images of the pullback along p_{2,2} in C2 under the functors given by A + 1 and A + A^(2)",
    );
    let f = Morphism::pullback(&mu2, &GSetMap::from_transitive(&omission_map(2, 2)?))?;
    for (e, want_inverse) in [("sum(R,1)", false), ("sum(R,tup(R,2))", true)] {
        let phi = TensorFunctor::build(2, &mu1, &OrderExpr::parse(e)?)?;
        let img = phi.apply_morphism(&f)?;
        let label = functor_label(2, 1, e);
        match solve_left_inverse(&img)? {
            LeftInverse::Found(g) => {
                let id = Morphism::identity(&mu1, img.source())?;
                let ok = g.compose(&img)? == id;
                r.claim(
                    format!("{label}: image of the pullback has a left inverse"),
                    want_inverse && ok,
                    format!("g with {} nonzero coefficients, g f = id {}", g.coeffs().len(), if ok { "verified" } else { "FAILS" }),
                );
                r.notes.push(format!("{label}: left inverse {}", serial::morphism_to_json(&g)));
            }
            LeftInverse::Infeasible(cert) => {
                let ok = verify_infeasibility(&img, &cert)?;
                r.claim(
                    format!("{label}: image of the pullback has no left inverse"),
                    !want_inverse && ok,
                    format!("certificate on {} components {}", cert.len(), if ok { "verified" } else { "FAILS" }),
                );
                let c: Vec<String> = cert.iter().filter(|(_, s)| !s.is_zero()).map(|(z, s)| format!("{z}={s}")).collect();
                r.notes.push(format!("{label}: infeasibility certificate {}", c.join(", ")));
            }
        }
    }
    let own = match solve_left_inverse(&f)? {
        LeftInverse::Found(_) => "has a left inverse",
        LeftInverse::Infeasible(_) => "has no left inverse",
    };
    r.notes.push(format!("in C2 itself the pullback {own}"));
    Ok(r)
}

fn rule_claims(r: &mut Report, suite: &ClosureReport, prefix: &str) {
    for (rule, n) in &suite.checks {
        let key = format!(" {rule}: ");
        let fails: Vec<&String> = suite.failures.iter().filter(|f| f.contains(&key)).collect();
        let detail = match fails.first() {
            None => format!("{n} cases"),
            Some(f) => format!("{} of {n} cases fail, first: {f}", fails.len()),
        };
        r.claim(format!("{prefix}{rule}"), fails.is_empty(), detail);
    }
}

/// Type closure at expression size `depth` and the gamma identities at `identity_depth`.
pub fn type_tables(field: Field, depth: usize, identity_depth: usize) -> Result<Report> {
    let specs: Vec<MeasureSpec> = (1..=4).map(|k| MeasureSpec::single(k, field)).collect::<Result<_>>()?;
    let conv = GammaConvention::default();
    let mut r = Report::new(
        "type-tables",
        format!("profiles of constructor expressions with up to {depth} nodes against the sum, product and power tables"),
    );
    let suite = closure_suite(depth, &specs, conv)?;
    r.notes.push(format!("{} expressions profiled", suite.expressions));
    rule_claims(&mut r, &suite, "");
    const SHOWN: usize = 12;
    for f in suite.failures.iter().take(SHOWN) {
        r.notes.push(format!("failure: {f}"));
    }
    if suite.failures.len() > SHOWN {
        r.notes.push(format!("... and {} more failures", suite.failures.len() - SHOWN));
    }
    let mut ids = ClosureReport::default();
    for s in &specs {
        let g = gamma_identity_suite(identity_depth, s, conv)?;
        ids.expressions += g.expressions;
        for (k, v) in g.checks {
            *ids.checks.entry(k).or_default() += v;
        }
        ids.failures.extend(g.failures);
    }
    rule_claims(&mut r, &ids, &format!("gamma identity (pairs of size {identity_depth}) "));
    Ok(r)
}

pub fn delannoy_dims(max: usize) -> Report {
    let mut r = Report::new("delannoy-dims", format!("dim Hom(C(R^(n)), C(R^(m))) for n, m up to {max}"));
    let mut bad = Vec::new();
    for n in 0..=max {
        let row: Vec<String> = (0..=max)
            .map(|m| {
                let d = hom_dim(&GSet::power(n), &GSet::power(m));
                if d as u128 != delannoy_number(n, m) {
                    bad.push(format!("({n},{m}): {d} vs {}", delannoy_number(n, m)));
                }
                d.to_string()
            })
            .collect();
        r.notes.push(format!("n={n}: {}", row.join(" ")));
    }
    r.claim("dimensions equal the lattice-path counts", bad.is_empty(), bad.join(", "));
    let spots: Vec<usize> = (1..=3.min(max)).map(|n| hom_dim(&GSet::power(n), &GSet::power(n))).collect();
    r.claim("diagonal values", spots == [3, 13, 63][..spots.len()], format!("{spots:?}"));
    r
}

pub fn scenario(name: &str, field: Field) -> Result<Option<Report>> {
    Ok(Some(match name {
        "measure-table" => measure_table_report()?,
        "simple-functors" => simple_functors(field, 3)?,
        "dim0-square" => dim0_square(field)?,
        "two-envelopes" => two_envelopes(field)?,
        "type-tables" => type_tables(field, 4, 3)?,
        "delannoy-dims" => delannoy_dims(4),
        _ => return Ok(None),
    }))
}

/// Every invariant suite at size `depth`.
pub fn selftest(depth: usize, field: Field) -> Result<Vec<Report>> {
    let mut out = vec![measure_table_report()?];

    let mut m = Report::new("measures", format!("measure axioms up to arity {}", depth + 1));
    for k in 1..=4 {
        let p = check_path_independence(k, depth + 4);
        m.claim(format!("mu{k} path independence up to {}", depth + 4), p.is_ok(), p.map_or_else(|e| e, |n| format!("{n} orders")));
    }
    let mut specs: Vec<MeasureSpec> = (1..=4).map(|k| MeasureSpec::single(k, field)).collect::<Result<_>>()?;
    specs.push(MeasureSpec::new(vec![1, 1], field)?);
    for s in &specs {
        let a = check_measure_axioms(s, depth + 1);
        let detail = a.failure.clone().unwrap_or_else(|| format!("{} compositions, {} squares", a.compositions, a.squares));
        m.claim(format!("{s} axioms"), a.passed(), detail);
    }
    out.push(m);

    out.push(delannoy_dims(depth + 1));

    let mut laws = Report::new("category-laws", format!("basis morphisms among R^(n), n <= {depth}"));
    let objects: Vec<GSet> = (0..=depth).map(GSet::power).collect();
    for s in &specs[..4] {
        let l = check_category_laws(s, &objects)?;
        let detail = match l.failures.first() {
            None => format!("{} identities, {} triples, {} trace pairs", l.identities, l.triples, l.trace_pairs),
            Some(f) => f.clone(),
        };
        laws.claim(format!("{s} identity, associativity, trace"), l.passed(), detail);
    }
    out.push(laws);

    out.push(type_tables(field, depth, depth)?);
    out.push(simple_functors(field, depth)?);
    out.push(two_envelopes(field)?);
    out.push(dim0_square(field)?);

    let mut s = Report::new("serialization", "JSON round trips");
    for n in 0..=depth {
        let id = Morphism::identity(&specs[0], &GSet::power(n))?;
        let back = serial::morphism_from_json(&serial::morphism_to_json(&id).to_string())?;
        s.claim(format!("identity on C(R^({n}))"), back == id, String::new());
    }
    let o = OrderExpr::parse("prod(R,R)")?.evaluate(1)?;
    let back = serial::ordered_from_json(&serial::ordered_to_json(&o).to_string())?;
    s.claim("lexicographic square of R", back == o, String::new());
    out.push(s);
    Ok(out)
}
