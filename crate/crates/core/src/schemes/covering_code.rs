use itertools::Itertools;
use num::integer::binomial;

use crate::codes::{scalar_code, LinearIndexCode};
use crate::error::{Error, Result};
use crate::field_linalg::{Field, GfMatrix};
use crate::graph::SideInfoGraph;
use crate::minrank::{minrank, optimal_scalar_encoder};

/// Default cap on the number of candidate parity-check matrices examined.
pub const DEFAULT_COVERING_BUDGET: u128 = 1 << 20;

/// Largest syndrome space the search will explore.
const MAX_SYNDROMES: u128 = 1 << 16;

/// A `codim x n` parity-check matrix whose columns reach every syndrome
/// with at most `radius` of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringCode {
    pub n: usize,
    pub radius: usize,
    pub h: GfMatrix,
}

/// `sum_{j <= radius} C(n, j) (q - 1)^j >= q^codim`.
pub fn sphere_covering_holds(q: u32, codim: usize, radius: usize, n: usize) -> bool {
    let target = (q as u128).saturating_pow(codim as u32);
    let mut ball: u128 = 0;
    for j in 0..=radius.min(n) {
        let term = binomial(n as u128, j as u128).saturating_mul((q as u128 - 1).saturating_pow(j as u32));
        ball = ball.saturating_add(term);
    }
    ball >= target
}

/// Shortest covering code of the given codimension and radius.
///
/// Lengths are tried in increasing order starting at the sphere-covering
/// bound. Columns are drawn from the projective points of `F_q^codim`
/// (first nonzero entry equal to one) in increasing order, since zero,
/// repeated or proportional columns never shorten a combination. The first
/// covering set found is returned.
pub fn find_covering_code(field: Field, codim: usize, radius: usize, budget: u128) -> Result<CoveringCode> {
    if codim == 0 {
        return Ok(CoveringCode {
            n: 0,
            radius,
            h: GfMatrix::zeros(field, 0, 0),
        });
    }
    if radius == 0 {
        return Err(Error::Precondition("covering radius must be at least 1".into()));
    }
    if radius >= codim {
        return Ok(CoveringCode {
            n: codim,
            radius,
            h: GfMatrix::identity(field, codim),
        });
    }
    let q = field.order();
    let space = (q as u128).checked_pow(codim as u32).unwrap_or(u128::MAX);
    if space > MAX_SYNDROMES {
        return Err(Error::BudgetExceeded {
            what: "syndrome space",
            needed: space,
            budget: MAX_SYNDROMES,
        });
    }
    let space = space as usize;
    let points = projective_points(q, codim);
    let start = (codim..)
        .find(|&n| sphere_covering_holds(q, codim, radius, n))
        .expect("bound is eventually met");

    let mut spent: u128 = 0;
    for n in start..=points.len() {
        let candidates = binomial(points.len() as u128, n as u128);
        spent = spent.saturating_add(candidates);
        if spent > budget {
            return Err(Error::BudgetExceeded {
                what: "covering code search",
                needed: spent,
                budget,
            });
        }
        let mut reach = vec![u8::MAX; space];
        for combo in (0..points.len()).combinations(n) {
            if covers(field, codim, radius, &points, &combo, &mut reach) {
                let columns: Vec<Vec<u32>> = combo.iter().map(|&p| digits(points[p], q, codim)).collect();
                return Ok(CoveringCode {
                    n,
                    radius,
                    h: GfMatrix::from_columns(field, codim, &columns)?,
                });
            }
        }
    }
    unreachable!("all projective points cover at radius one")
}

fn digits(mut v: usize, q: u32, codim: usize) -> Vec<u32> {
    let mut out = vec![0u32; codim];
    for slot in out.iter_mut().rev() {
        *slot = (v % q as usize) as u32;
        v /= q as usize;
    }
    out
}

fn projective_points(q: u32, codim: usize) -> Vec<usize> {
    let total = (q as usize).pow(codim as u32);
    (1..total)
        .filter(|&v| digits(v, q, codim).into_iter().find(|&d| d != 0) == Some(1))
        .collect()
}

/// Breadth-first search over syndromes, one column multiple per step.
fn covers(field: Field, codim: usize, radius: usize, points: &[usize], combo: &[usize], reach: &mut [u8]) -> bool {
    let q = field.order();
    reach.iter_mut().for_each(|r| *r = u8::MAX);
    let steps: Vec<Vec<u32>> = combo
        .iter()
        .flat_map(|&p| {
            let col = digits(points[p], q, codim);
            (1..q).map(move |a| col.iter().map(|&c| field.mul(a, c)).collect::<Vec<u32>>())
        })
        .collect();
    let encode = |d: &[u32]| d.iter().fold(0usize, |acc, &x| acc * q as usize + x as usize);
    reach[0] = 0;
    let mut seen = 1;
    let mut frontier = vec![0usize];
    for dist in 1..=radius {
        let mut next = Vec::new();
        for &s in &frontier {
            let sd = digits(s, q, codim);
            for step in &steps {
                let t: Vec<u32> = sd.iter().zip(step).map(|(&a, &b)| field.add(a, b)).collect();
                let t = encode(&t);
                if reach[t] == u8::MAX {
                    reach[t] = dist as u8;
                    seen += 1;
                    next.push(t);
                }
            }
        }
        if seen == reach.len() {
            return true;
        }
        frontier = next;
    }
    seen == reach.len()
}

/// Scalar code with encoder `B' H`: each fitting-matrix column becomes a
/// combination of at most `radius` transmitted symbols.
pub fn separation_code(
    g: &SideInfoGraph,
    field: Field,
    radius: usize,
    minrank_budget: u128,
    covering_budget: u128,
) -> Result<LinearIndexCode> {
    let mr = minrank(g, field, minrank_budget)?;
    let b_prime = optimal_scalar_encoder(&mr.witness);
    let cc = find_covering_code(field, mr.rank, radius, covering_budget)?;
    let b = b_prime.mul(&cc.h)?;
    let code = scalar_code(g, &b, &mr.witness, b.cols())?;
    Ok(code.with_provenance(format!("separation(radius={radius}, n={})", cc.n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{verify_code, VerifyOptions};
    use crate::minrank::DEFAULT_MINRANK_BUDGET;
    use crate::rational::int;
    use proptest::prelude::*;

    /// Smallest covering length by trying every codim x n matrix.
    fn brute_force_length(q: u32, codim: usize, radius: usize) -> usize {
        let f = Field::new(q).unwrap();
        let total = (q as usize).pow(codim as u32);
        for n in 1.. {
            let cells = codim * n;
            for idx in 0..(q as usize).pow(cells as u32) {
                let entries = digits(idx, q, cells);
                let columns: Vec<Vec<u32>> = entries.chunks(codim).map(|c| c.to_vec()).collect();
                let h = GfMatrix::from_columns(f, codim, &columns).unwrap();
                let mut ok = vec![false; total];
                for coeffs in 0..(q as usize).pow(n as u32) {
                    let d = digits(coeffs, q, n);
                    if d.iter().filter(|&&x| x != 0).count() <= radius {
                        let s = h.apply(&d);
                        ok[s.iter().fold(0usize, |a, &x| a * q as usize + x as usize)] = true;
                    }
                }
                if ok.iter().all(|&b| b) {
                    return n;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn known_lengths() {
        let f2 = Field::BINARY;
        assert_eq!(find_covering_code(f2, 2, 1, DEFAULT_COVERING_BUDGET).unwrap().n, 3);
        assert_eq!(find_covering_code(f2, 3, 1, DEFAULT_COVERING_BUDGET).unwrap().n, 7);
        assert_eq!(find_covering_code(f2, 4, 2, DEFAULT_COVERING_BUDGET).unwrap().n, 5);
        for q in [2, 3, 5] {
            let c = find_covering_code(Field::new(q).unwrap(), 3, 3, DEFAULT_COVERING_BUDGET).unwrap();
            assert_eq!(c.h, GfMatrix::identity(Field::new(q).unwrap(), 3));
        }
    }

    #[test]
    fn matches_exhaustive_matrix_search() {
        for (q, codim, radius) in [(2, 2, 1), (3, 2, 1), (2, 3, 2), (5, 1, 1)] {
            let found = find_covering_code(Field::new(q).unwrap(), codim, radius, DEFAULT_COVERING_BUDGET).unwrap();
            assert_eq!(
                found.n,
                brute_force_length(q, codim, radius),
                "q={q} codim={codim} radius={radius}"
            );
        }
    }

    #[test]
    fn budget_and_size_errors() {
        assert!(matches!(
            find_covering_code(Field::BINARY, 4, 2, 10),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            find_covering_code(Field::BINARY, 17, 1, u128::MAX),
            Err(Error::BudgetExceeded {
                what: "syndrome space",
                ..
            })
        ));
        assert!(find_covering_code(Field::BINARY, 2, 0, 10).is_err());
    }

    #[test]
    fn three_cycle_separation() {
        let g = SideInfoGraph::directed_cycle(3);
        let c1 = separation_code(&g, Field::BINARY, 1, DEFAULT_MINRANK_BUDGET, DEFAULT_COVERING_BUDGET).unwrap();
        assert_eq!((c1.metrics().beta, c1.metrics().r), (int(3), int(1)));
        let c2 = separation_code(&g, Field::BINARY, 2, DEFAULT_MINRANK_BUDGET, DEFAULT_COVERING_BUDGET).unwrap();
        assert_eq!((c2.metrics().beta, c2.metrics().r), (int(2), int(2)));
        for c in [c1, c2] {
            assert!(verify_code(&c, &g, &VerifyOptions::default()).unwrap().is_valid());
        }
    }

    #[test]
    fn kappa_three_radius_one() {
        let g = SideInfoGraph::directed_cycle(4);
        let c = separation_code(&g, Field::BINARY, 1, DEFAULT_MINRANK_BUDGET, DEFAULT_COVERING_BUDGET).unwrap();
        assert!(c.provenance().contains("n=7"));
        // radius one means every receiver reads a single column equal to its
        // fitting column, so only the distinct ones survive pruning
        assert!(c.metrics().beta <= int(7));
        assert_eq!(c.metrics().beta, int(4));
        assert_eq!(c.metrics().r, int(1));
        assert!(verify_code(&c, &g, &VerifyOptions::default()).unwrap().is_valid());
    }

    #[test]
    fn radius_kappa_is_the_scalar_code() {
        let g = SideInfoGraph::directed_cycle(5);
        let c = separation_code(&g, Field::BINARY, 4, DEFAULT_MINRANK_BUDGET, DEFAULT_COVERING_BUDGET).unwrap();
        assert_eq!(c.metrics().beta, int(4));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn lengths_satisfy_sphere_bound(q in prop::sample::select(vec![2u32, 3]), codim in 1usize..=4, radius in 1usize..=3) {
            let f = Field::new(q).unwrap();
            if let Ok(c) = find_covering_code(f, codim, radius, DEFAULT_COVERING_BUDGET) {
                prop_assert!(sphere_covering_holds(q, codim, radius, c.n));
                prop_assert_eq!(c.h.rank(), codim);
            }
        }
    }
}
