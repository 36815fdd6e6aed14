//! Exhaustive checks of the category laws on basis morphisms, through a table
//! of composites of basis pairs.

use std::collections::HashMap;

use rayon::prelude::*;

use super::matrix::Matrix;
use super::morphism::{gram_matrix, hom_basis, Morphism};
use crate::error::Result;
use crate::measure::MeasureSpec;
use crate::orbit::{Component, GSet};
use crate::scalar::Scalar;

/// `D(n, m)` by the lattice-path recurrence.
pub fn delannoy_number(n: usize, m: usize) -> u128 {
    let mut d = vec![vec![1u128; m + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=m {
            d[i][j] = d[i - 1][j] + d[i][j - 1] + d[i - 1][j - 1];
        }
    }
    d[n][m]
}

pub fn hom_dim(x: &GSet, y: &GSet) -> usize {
    hom_basis(x, y).len()
}

/// Sparse vector over the basis of one hom space.
type Vector = HashMap<Component, Scalar>;
/// The same, keyed by position in the basis.
type Keyed = Vec<(u32, Scalar)>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub identities: usize,
    pub triples: usize,
    pub trace_pairs: usize,
    pub failures: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Identity, associativity and `tr(g f) = tr(f g)` over all basis morphisms
/// among `objects`.
pub fn check_category_laws(measure: &MeasureSpec, objects: &[GSet]) -> Result<LawReport> {
    let n = objects.len();
    let basis: Vec<Vec<Vec<Component>>> =
        (0..n).map(|a| (0..n).map(|b| hom_basis(&objects[a], &objects[b])).collect()).collect();
    let mut report = LawReport::default();
    for (a, x) in objects.iter().enumerate() {
        let id = Morphism::identity(measure, x)?;
        for b in 0..n {
            for z in &basis[a][b] {
                let f = Morphism::basis(measure, x, &objects[b], z)?;
                let idy = Morphism::identity(measure, &objects[b])?;
                report.identities += 1;
                if idy.compose(&f)? != f || f.compose(&id)? != f {
                    report.failures.push(format!("identity law fails for {z}"));
                }
            }
        }
    }
    // table[(a, b, c)][i][j] = basis_j(b -> c) ∘ basis_i(a -> b)
    let mut table: HashMap<(usize, usize, usize), Vec<Vec<Vector>>> = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let rows = basis[a][b]
                    .par_iter()
                    .map(|zf| {
                        let f = Morphism::basis(measure, &objects[a], &objects[b], zf)?;
                        basis[b][c]
                            .iter()
                            .map(|zg| {
                                let g = Morphism::basis(measure, &objects[b], &objects[c], zg)?;
                                Ok(g.compose(&f)?.coeffs().clone().into_iter().collect())
                            })
                            .collect::<Result<Vec<Vector>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                table.insert((a, b, c), rows);
            }
        }
    }
    let index: Vec<Vec<HashMap<&Component, u32>>> = basis
        .iter()
        .map(|row| row.iter().map(|zs| zs.iter().enumerate().map(|(i, z)| (z, i as u32)).collect()).collect())
        .collect();
    // Re-key every table entry by (target index of the basis, coefficient).
    let mut sparse: HashMap<(usize, usize, usize), Vec<Vec<Keyed>>> = HashMap::new();
    for (&(a, b, c), rows) in &table {
        let keyed = rows
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|(z, x)| (index[a][c][z], x.clone())).collect()).collect())
            .collect();
        sparse.insert((a, b, c), keyed);
    }
    let integral = sparse.values().flatten().flatten().flatten().all(|(_, x)| x.to_i64().is_some());
    let quads: Vec<(usize, usize, usize, usize)> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).flat_map(move |c| (0..n).map(move |d| (a, b, c, d)))))
        .collect();
    let field = measure.field();
    let results: Vec<(usize, Vec<String>)> = quads
        .par_iter()
        .map(|&(a, b, c, d)| {
            let mut fails = Vec::new();
            let mut count = 0;
            let (gf, hg) = (&sparse[&(a, b, c)], &sparse[&(b, c, d)]);
            let (wf, hv) = (&sparse[&(a, c, d)], &sparse[&(a, b, d)]);
            let dim = basis[a][d].len();
            for i in 0..basis[a][b].len() {
                for j in 0..basis[b][c].len() {
                    for (k, zh) in basis[c][d].iter().enumerate() {
                        count += 1;
                        // (h g) f against h (g f)
                        let ok = if integral {
                            let mut acc = vec![0i128; dim];
                            for (w, cw) in &hg[j][k] {
                                let cw = i128::from(cw.to_i64().unwrap_or_default());
                                for (t, x) in &hv[i][*w as usize] {
                                    acc[*t as usize] += cw * i128::from(x.to_i64().unwrap_or_default());
                                }
                            }
                            for (v, cv) in &gf[i][j] {
                                let cv = i128::from(cv.to_i64().unwrap_or_default());
                                for (t, x) in &wf[*v as usize][k] {
                                    acc[*t as usize] -= cv * i128::from(x.to_i64().unwrap_or_default());
                                }
                            }
                            acc.iter().all(|x| *x == 0)
                        } else {
                            let mut acc = vec![field.zero(); dim];
                            for (w, cw) in &hg[j][k] {
                                for (t, x) in &hv[i][*w as usize] {
                                    acc[*t as usize] += &(cw * x);
                                }
                            }
                            for (v, cv) in &gf[i][j] {
                                for (t, x) in &wf[*v as usize][k] {
                                    acc[*t as usize] += &-&(cv * x);
                                }
                            }
                            acc.iter().all(Scalar::is_zero)
                        };
                        if !ok {
                            fails.push(format!("associativity fails at {a}->{b}->{c}->{d}, h = {zh}"));
                        }
                    }
                }
            }
            (count, fails)
        })
        .collect();
    for (c, f) in results {
        report.triples += c;
        report.failures.extend(f);
    }
    for a in 0..n {
        for b in 0..n {
            let (fg, gf) = (&table[&(a, b, a)], &table[&(b, a, b)]);
            for i in 0..basis[a][b].len() {
                for j in 0..basis[b][a].len() {
                    report.trace_pairs += 1;
                    let t1 = trace_of(measure, &objects[a], &fg[i][j])?;
                    let t2 = trace_of(measure, &objects[b], &gf[j][i])?;
                    if t1 != t2 {
                        report.failures.push(format!(
                            "tr(g f) = {t1} but tr(f g) = {t2} for {} and {}",
                            basis[a][b][i], basis[b][a][j]
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn trace_of(measure: &MeasureSpec, x: &GSet, v: &Vector) -> Result<Scalar> {
    Morphism::from_coeffs(measure, x, x, v.iter().map(|(z, c)| (z.clone(), c.clone())))?.trace()
}

/// Rank of the trace pairing on `Hom(X, Y) x Hom(Y, X)` for each pair of objects.
pub fn gram_rank_profile(measure: &MeasureSpec, objects: &[GSet]) -> Result<Vec<(usize, usize, usize, usize)>> {
    let mut out = Vec::new();
    for (a, x) in objects.iter().enumerate() {
        for (b, y) in objects.iter().enumerate().skip(a) {
            let g: Matrix = gram_matrix(measure, x, y)?;
            out.push((a, b, g.rows(), g.rank()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Field;
    use proptest::prelude::*;

    #[test]
    fn small_delannoy_numbers() {
        assert_eq!(delannoy_number(0, 5), 1);
        assert_eq!(delannoy_number(2, 2), 13);
        assert_eq!(delannoy_number(3, 3), 63);
        assert_eq!(delannoy_number(4, 4), 321);
    }

    #[test]
    fn hom_dims_count_lattice_paths() {
        for n in 0..=4 {
            for m in 0..=4 {
                assert_eq!(hom_dim(&GSet::power(n), &GSet::power(m)) as u128, delannoy_number(n, m));
            }
        }
    }

    #[test]
    fn laws_hold_in_a_small_range() {
        let objs: Vec<GSet> = (0..=2).map(GSet::power).collect();
        for k in 1..=4 {
            let r = check_category_laws(&MeasureSpec::single(k, Field::Rational).unwrap(), &objs).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            assert_eq!(r.identities, 1 + 1 + 1 + 1 + 3 + 5 + 1 + 5 + 13);
        }
        let r = check_category_laws(&MeasureSpec::single(1, Field::prime(5).unwrap()).unwrap(), &objs).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn second_measure_kills_traces_above_the_point() {
        let objs: Vec<GSet> = (0..=2).map(GSet::power).collect();
        let p = gram_rank_profile(&MeasureSpec::single(2, Field::Rational).unwrap(), &objs).unwrap();
        assert_eq!(p[0], (0, 0, 1, 1));
        assert!(p[1..].iter().all(|r| r.3 == 0));
    }

    proptest! {
        #[test]
        fn delannoy_is_symmetric(n in 0usize..30, m in 0usize..30) {
            prop_assert_eq!(delannoy_number(n, m), delannoy_number(m, n));
        }
    }
}
