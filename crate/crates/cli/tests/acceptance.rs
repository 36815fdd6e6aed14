//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! Two criteria cannot be met as stated and print FAIL with the reason; the
//! test itself asserts every part that is attainable.

use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;

use delannoy_core::delannic::{closure_suite, gamma_identity_suite, GammaConvention};
use delannoy_core::functor::TensorFunctor;
use delannoy_core::linear::{check_category_laws, gram_matrix, hom_dim, Matrix};
use delannoy_core::measure::{check_measure_axioms, check_path_independence, MeasureSpec};
use delannoy_core::orbit::GSet;
use delannoy_core::order::{tuples, OrderExpr};
use delannoy_core::scenarios::{dim0_square, two_envelopes, QUADRATIC_BOUND, SIMPLE_FUNCTORS};
use delannoy_core::Field;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn mu(k: usize) -> MeasureSpec {
    MeasureSpec::single(k, Field::Rational).unwrap()
}

fn measure_table() -> Verdict {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_delannoy")).arg("measure-table").env_remove("DELANNOY_FIELD").output().unwrap();
    let elapsed = t.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<Vec<i64>> = text
        .lines()
        .filter(|l| l.starts_with("mu"))
        .map(|l| l.split_whitespace().skip(1).map(|v| v.parse().unwrap()).collect())
        .collect();
    let want = vec![vec![-1, -1, -1], vec![0, -1, 0], vec![0, 0, -1], vec![1, 0, 0]];
    verdict(out.status.success() && rows == want && elapsed.as_secs_f64() < 1.0, format!("{rows:?} in {elapsed:?}"))
}

fn measure_axioms() -> Verdict {
    let mut orders = 0;
    for k in 1..=4 {
        match check_path_independence(k, 7) {
            Ok(n) => orders += n,
            Err(e) => return verdict(false, e),
        }
    }
    let mut specs: Vec<MeasureSpec> = (1..=4).map(mu).collect();
    specs.push(MeasureSpec::new(vec![1, 1], Field::Rational).unwrap());
    for s in &specs {
        if let Some(f) = check_measure_axioms(s, 4).failure {
            return verdict(false, format!("{s}: {f}"));
        }
    }
    verdict(true, format!("{orders} omission orders; axioms at N = 4 for mu1..mu4 and mu1*mu1"))
}

/// Lattice paths from (0,0) to (n,m) with steps (1,0), (0,1), (1,1), counted one by one.
fn lattice_paths(n: usize, m: usize) -> usize {
    if n == 0 || m == 0 {
        return 1;
    }
    lattice_paths(n - 1, m) + lattice_paths(n, m - 1) + lattice_paths(n - 1, m - 1)
}

fn delannoy_dims() -> Verdict {
    let mut bad = Vec::new();
    for n in 0..=4 {
        for m in 0..=4 {
            let d = hom_dim(&GSet::power(n), &GSet::power(m));
            if d != lattice_paths(n, m) {
                bad.push(format!("({n},{m}): {d}"));
            }
        }
    }
    let spots: Vec<usize> = (1..=3).map(|n| hom_dim(&GSet::power(n), &GSet::power(n))).collect();
    verdict(bad.is_empty() && spots == [3, 13, 63], format!("spot values {spots:?} {}", bad.join(" ")))
}

fn category_laws() -> Verdict {
    let t = Instant::now();
    let objects: Vec<GSet> = (0..=3).map(GSet::power).collect();
    let mut triples = 0;
    for k in 1..=4 {
        let r = check_category_laws(&mu(k), &objects).unwrap();
        if !r.passed() {
            return verdict(false, format!("mu{k}: {}", r.failures[0]));
        }
        triples += r.triples;
    }
    let elapsed = t.elapsed();
    verdict(elapsed.as_secs() < 60, format!("{triples} composable basis triples in {elapsed:?}"))
}

fn tuple_power_orbits() -> Verdict {
    let lex = OrderExpr::parse("tup(R,2)").unwrap().evaluate(1).unwrap();
    let level = tuples(&lex, 2);
    let mut symbols: Vec<usize> = level.gset().orbits().iter().map(|o| o.arity(0)).collect();
    symbols.sort_unstable_by(|a, b| b.cmp(a));
    verdict(symbols == [4, 4, 4, 3, 3, 3], format!("{symbols:?}"))
}

/// Returns the verdict and whether every part other than the literal power rule held.
fn type_system() -> (Verdict, bool) {
    let specs: Vec<MeasureSpec> = (1..=4).map(mu).collect();
    let conv = GammaConvention::default();
    let suite = closure_suite(4, &specs, conv).unwrap();
    let literal: Vec<&String> = suite.failures.iter().filter(|f| f.contains(" lambda: ")).collect();
    let other = suite.failures.len() - literal.len();
    let mut identities = 0;
    let mut identity_failures = 0;
    for s in &specs {
        let g = gamma_identity_suite(3, s, conv).unwrap();
        identities += g.checks.get("lexsum").copied().unwrap_or(0);
        identity_failures += g.failures.len();
    }
    let detail = format!(
        "{} expressions; sum, product, relabelled power and other rules: {other} failures; \
         literal power rule: {} of {} cases fail (first: {}); gamma lex-sum identity: {identity_failures} failures in {identities} pairs",
        suite.expressions,
        literal.len(),
        suite.checks["lambda"],
        literal.first().map_or("none", |s| s.as_str()),
    );
    (verdict(suite.passed() && identity_failures == 0, detail), other == 0 && identity_failures == 0)
}

/// Returns the verdict and whether every check run passed.
fn functors() -> (Verdict, bool) {
    let mut lines = Vec::new();
    let mut all_run_pass = true;
    let mut full_bound = true;
    for (i, k, e) in SIMPLE_FUNCTORS {
        let f = TensorFunctor::build(i, &mu(k), &OrderExpr::parse(e).unwrap()).unwrap();
        let quadratic = f.generator().carrier().orbits().iter().any(|o| o.total() > 1);
        let n = if quadratic { QUADRATIC_BOUND } else { 3 };
        full_bound &= n == 3;
        let ok = [f.check_functoriality(n), f.check_monoidality(n), f.check_measure_compat(3)]
            .iter()
            .all(|r| r.passed())
            && f.faithful();
        all_run_pass &= ok;
        lines.push(format!("C{i}->C{k} {e}: {} at N={n}", if ok { "ok" } else { "FAILS" }));
    }
    let mut detail = lines.join("; ");
    if !full_bound {
        detail += "; functoriality and monoidality of sum(R,tup(R,2)) at N = 3 need tuple level 6 \
                   (769336 orbits), beyond this machine, so that part stops at N = 2";
    }
    (verdict(all_run_pass && full_bound, detail), all_run_pass)
}

fn envelopes() -> Verdict {
    let r = two_envelopes(Field::Rational).unwrap();
    verdict(r.passed(), r.claims.iter().map(|c| c.detail.clone()).collect::<Vec<_>>().join("; "))
}

fn square() -> Verdict {
    let t = Instant::now();
    let r = dim0_square(Field::Rational).unwrap();
    let witness = r.notes.iter().any(|n| n.starts_with("witness"));
    let elapsed = t.elapsed();
    verdict(
        r.passed() && witness && elapsed.as_secs() < 60,
        format!("{} claims, witness {}, {elapsed:?}", r.claims.len(), if witness { "found" } else { "missing" }),
    )
}

/// Rank by fraction-free elimination over the integers.
fn oracle_rank(m: &Matrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|s| BigInt::from(s.to_i64().expect("integral Gram entries")))
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                a[r][j] = (&a[rank][c] * &a[r][j] - &a[r][c] * &a[rank][j]) / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Frozen rank profile in C2 for pairs `R^(a), R^(b)`, `a <= b <= 3`, as `(a, b, size, rank)`.
const C2_PROFILE: [(usize, usize, usize, usize); 10] = [
    (0, 0, 1, 1),
    (0, 1, 1, 0),
    (0, 2, 1, 0),
    (0, 3, 1, 0),
    (1, 1, 3, 0),
    (1, 2, 5, 0),
    (1, 3, 7, 0),
    (2, 2, 13, 0),
    (2, 3, 25, 0),
    (3, 3, 63, 0),
];

fn semisimplicity() -> Verdict {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in 0..=3 {
        let x = GSet::power(n);
        let g = gram_matrix(&mu(1), &x, &x).unwrap();
        let (r, o) = (g.rank(), oracle_rank(&g));
        ok &= g.is_nondegenerate() && r == o && r == g.rows();
        detail.push(format!("C1 End(R^({n})): rank {r}/{}", g.rows()));
    }
    let mut profile = Vec::new();
    for a in 0..=3 {
        for b in a..=3 {
            let g = gram_matrix(&mu(2), &GSet::power(a), &GSet::power(b)).unwrap();
            let (r, o) = (g.rank(), oracle_rank(&g));
            ok &= r == o;
            profile.push((a, b, g.rows(), r));
        }
    }
    let deficient = profile.iter().filter(|p| p.3 < p.2).count();
    ok &= profile == C2_PROFILE && deficient > 0;
    detail.push(format!("C2 profile {profile:?}, {deficient} rank-deficient"));
    verdict(ok, detail.join("; "))
}

fn main() {
    let mut results: Vec<(u8, Verdict)> = Vec::new();
    let mut attainable = true;
    results.push((1, measure_table()));
    results.push((2, measure_axioms()));
    results.push((3, delannoy_dims()));
    results.push((4, category_laws()));
    results.push((5, tuple_power_orbits()));
    let (v6, rest6) = type_system();
    attainable &= rest6;
    results.push((6, v6));
    let (v7, rest7) = functors();
    attainable &= rest7;
    results.push((7, v7));
    results.push((8, envelopes()));
    results.push((9, square()));
    results.push((10, semisimplicity()));
    for (n, v) in &results {
        println!("criterion {n}: {} - {}", if v.passed { "PASS" } else { "FAIL" }, v.detail);
    }
    let broken: Vec<u8> = results.iter().filter(|(n, v)| !v.passed && ![6, 7].contains(n)).map(|(n, _)| *n).collect();
    if !broken.is_empty() || !attainable {
        eprintln!("attainable criteria failed: {broken:?}, parts of 6 and 7 attainable: {attainable}");
        std::process::exit(1);
    }
}
