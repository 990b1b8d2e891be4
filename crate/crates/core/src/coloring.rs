//! Fractional coloring of interference graphs and the locality-one codes
//! built from them.

use num::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::codes::{Decoder, LinearIndexCode};
use crate::error::{Error, Result};
use crate::field_linalg::{Field, GfMatrix};
use crate::graph::{SideInfoGraph, UndirectedGraph, VertexSet};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{int, lcm_of_denominators, Rational};

/// Default vertex limit for the exact coloring routines.
pub const COLORING_LIMIT: usize = 12;

/// `a` colors in total, `b` per vertex, adjacent vertices get disjoint sets.
/// Colors are 0-indexed and each vertex's set is sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ABColoring {
    pub a: usize,
    pub b: usize,
    pub assignment: Vec<Vec<usize>>,
}

impl ABColoring {
    pub fn validate(&self, h: &UndirectedGraph) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCode(m));
        if self.assignment.len() != h.n() {
            return bad(format!(
                "coloring has {} vertices, graph has {}",
                self.assignment.len(),
                h.n()
            ));
        }
        for (v, c) in self.assignment.iter().enumerate() {
            if c.len() != self.b || c.windows(2).any(|w| w[0] >= w[1]) || c.iter().any(|&x| x >= self.a) {
                return bad(format!(
                    "vertex {} needs {} distinct colors below {}",
                    v + 1,
                    self.b,
                    self.a
                ));
            }
        }
        for (u, v) in h.edges() {
            let cv = &self.assignment[v];
            if self.assignment[u].iter().any(|x| cv.binary_search(x).is_ok()) {
                return bad(format!("vertices {} and {} share a color", u + 1, v + 1));
            }
        }
        Ok(())
    }
}

/// All maximal independent sets, sorted by bitmask.
pub fn maximal_independent_sets(h: &UndirectedGraph) -> Vec<VertexSet> {
    let n = h.n();
    let full = VertexSet::full(n);
    // independent sets of H are cliques of its complement
    let co: Vec<VertexSet> = (0..n)
        .map(|v| VertexSet(full.0 & !h.neighbors(v).0 & !VertexSet::singleton(v).0))
        .collect();
    let mut out = Vec::new();
    bron_kerbosch(&co, VertexSet::EMPTY, full, VertexSet::EMPTY, &mut out);
    out.sort_by_key(|s| s.0);
    out
}

fn bron_kerbosch(adj: &[VertexSet], r: VertexSet, p: VertexSet, x: VertexSet, out: &mut Vec<VertexSet>) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    let pivot = p
        .union(x)
        .iter()
        .max_by_key(|&u| adj[u].intersection(p).len())
        .expect("nonempty");
    let (mut p, mut x) = (p, x);
    for v in VertexSet(p.0 & !adj[pivot].0).iter() {
        let mut rv = r;
        rv.insert(v);
        bron_kerbosch(adj, rv, p.intersection(adj[v]), x.intersection(adj[v]), out);
        p = VertexSet(p.0 & !(1 << v));
        x.insert(v);
    }
}

pub fn fractional_chromatic(h: &UndirectedGraph) -> Result<(Rational, ABColoring)> {
    fractional_chromatic_with_limit(h, COLORING_LIMIT)
}

/// Exact `χ_f(H)` from the independent-set covering LP, with an `a:b`
/// coloring attaining it.
pub fn fractional_chromatic_with_limit(h: &UndirectedGraph, limit: usize) -> Result<(Rational, ABColoring)> {
    let n = h.n();
    if n > limit {
        return Err(Error::SizeLimit { n, limit });
    }
    if n == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    let sets = maximal_independent_sets(h);
    let mut lp = LinearProgram::new(sets.len());
    lp.objective = vec![int(1); sets.len()];
    for v in 0..n {
        let row = sets.iter().map(|s| int(i64::from(s.contains(v)))).collect();
        lp.add(row, Relation::Ge, int(1));
    }
    let LpOutcome::Optimal { x, value } = lp.solve() else {
        unreachable!("covering LP is feasible and bounded");
    };

    let b = lcm_of_denominators(&x);
    let b_usize = b.to_usize().expect("denominator fits");
    let mult: Vec<usize> = x
        .iter()
        .map(|y| {
            (y * Rational::from_integer(b.clone()))
                .to_integer()
                .to_usize()
                .expect("small")
        })
        .collect();

    let mut assignment = vec![Vec::new(); n];
    let mut next = 0;
    for (s, &k) in sets.iter().zip(&mult) {
        for color in next..next + k {
            for v in s.iter() {
                if assignment[v].len() < b_usize {
                    assignment[v].push(color);
                }
            }
        }
        next += k;
    }
    let coloring = compact(ABColoring {
        a: next,
        b: b_usize,
        assignment,
    });
    debug_assert!(coloring.validate(h).is_ok());
    debug_assert_eq!(Rational::new(coloring.a.into(), coloring.b.into()), value);
    Ok((value, coloring))
}

/// Drops colors that no vertex uses and renumbers the rest.
fn compact(col: ABColoring) -> ABColoring {
    let mut used = vec![false; col.a];
    for c in col.assignment.iter().flatten() {
        used[*c] = true;
    }
    let mut map = vec![usize::MAX; col.a];
    let mut a = 0;
    for (c, u) in used.iter().enumerate() {
        if *u {
            map[c] = a;
            a += 1;
        }
    }
    let assignment = col
        .assignment
        .into_iter()
        .map(|cs| cs.into_iter().map(|c| map[c]).collect())
        .collect();
    ABColoring {
        a,
        b: col.b,
        assignment,
    }
}

/// Smallest `a` admitting an `a:b` coloring, found by backtracking over
/// color sets with symmetry breaking, starting from `ceil(b χ_f)`.
pub fn min_colors_fixed_b(h: &UndirectedGraph, b: usize) -> Result<(usize, ABColoring)> {
    let n = h.n();
    if n > COLORING_LIMIT {
        return Err(Error::SizeLimit {
            n,
            limit: COLORING_LIMIT,
        });
    }
    if b == 0 {
        return Err(Error::Precondition("b must be at least 1".into()));
    }
    let (chi_f, _) = fractional_chromatic(h)?;
    let lower = (chi_f * int(b as i64)).ceil().to_integer().to_usize().expect("small");
    for a in lower..=n * b {
        let mut sets = vec![0u64; n];
        if extend(h, b, a, 0, 0, 0, &mut sets) {
            let assignment = sets.iter().map(|&s| VertexSet(s).to_vec()).collect();
            return Ok((a, ABColoring { a, b, assignment }));
        }
    }
    unreachable!("n*b colors always suffice")
}

/// Assigns the next color of vertex `v` (it already has `have` colors, all
/// below `floor`). New colors are introduced in order, so a color may be at
/// most one past the largest used so far.
fn extend(h: &UndirectedGraph, b: usize, a: usize, v: usize, have: usize, floor: usize, sets: &mut [u64]) -> bool {
    if v == sets.len() {
        return true;
    }
    if have == b {
        return extend(h, b, a, v + 1, 0, 0, sets);
    }
    let used = sets.iter().fold(0u64, |acc, s| acc | s);
    let max_new = if used == 0 {
        0
    } else {
        64 - used.leading_zeros() as usize
    };
    let blocked = h.neighbors(v).iter().fold(0u64, |acc, u| acc | sets[u]);
    // remaining colors for this vertex must still fit below a
    let top = (a - (b - have - 1)).min(max_new + 1);
    for c in floor..top {
        if blocked >> c & 1 == 1 {
            continue;
        }
        sets[v] |= 1 << c;
        if extend(h, b, a, v, have + 1, c + 1, sets) {
            return true;
        }
        sets[v] &= !(1 << c);
    }
    false
}

/// Locality-one code from an `a:b` coloring of the interference graph:
/// symbol `k` of receiver `i` is added into codeword position `C_i[k]`.
pub fn fractional_coloring_code(g: &SideInfoGraph, col: &ABColoring, field: Field) -> Result<LinearIndexCode> {
    let n = g.n();
    col.validate(&g.interference_graph())?;
    let col = compact(col.clone());
    let (a, b) = (col.a, col.b);
    let mut encoder = GfMatrix::zeros(field, n * b, a);
    for (i, cs) in col.assignment.iter().enumerate() {
        for (k, &t) in cs.iter().enumerate() {
            encoder.set(i * b + k, t, 1);
        }
    }
    let minus_one = field.neg(1);
    let decoders = (0..n)
        .map(|i| {
            let known = g.known(i);
            let mut side_map = GfMatrix::zeros(field, b * known.len(), b);
            for (p, &j) in known.iter().enumerate() {
                for (s, t) in col.assignment[j].iter().enumerate() {
                    if let Ok(k) = col.assignment[i].binary_search(t) {
                        side_map.set(p * b + s, k, minus_one);
                    }
                }
            }
            Decoder {
                query_map: GfMatrix::identity(field, b),
                side_map,
            }
        })
        .collect();
    LinearIndexCode::new(
        field,
        n,
        b,
        encoder,
        col.assignment.clone(),
        decoders,
        format!("fractional-coloring({a}:{b})"),
    )
}

/// `χ_f` of the interference graph together with the code that attains it.
pub fn optimal_coloring_code(g: &SideInfoGraph, field: Field) -> Result<(Rational, LinearIndexCode)> {
    let (chi, col) = fractional_chromatic(&g.interference_graph())?;
    debug_assert!(!chi.is_zero());
    Ok((chi, fractional_coloring_code(g, &col, field)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{queries_disjoint_on_interference, verify_code, VerifyOptions};
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn chi_f_examples() {
        assert_eq!(fractional_chromatic(&UndirectedGraph::complete(3)).unwrap().0, int(3));
        assert_eq!(
            fractional_chromatic(&UndirectedGraph::new(4, &[]).unwrap()).unwrap().0,
            int(1)
        );
        let (chi, col) = fractional_chromatic(&UndirectedGraph::cycle(5)).unwrap();
        assert_eq!(chi, rat(5, 2));
        assert_eq!((col.a, col.b), (5, 2));
        col.validate(&UndirectedGraph::cycle(5)).unwrap();
    }

    #[test]
    fn size_limit() {
        let h = UndirectedGraph::new(13, &[]).unwrap();
        assert!(matches!(
            fractional_chromatic(&h),
            Err(Error::SizeLimit { n: 13, limit: 12 })
        ));
    }

    #[test]
    fn fixed_b_examples() {
        assert_eq!(min_colors_fixed_b(&UndirectedGraph::complete(3), 1).unwrap().0, 3);
        let c5 = UndirectedGraph::cycle(5);
        let (a, col) = min_colors_fixed_b(&c5, 2).unwrap();
        assert_eq!(a, 5);
        col.validate(&c5).unwrap();
        assert_eq!(min_colors_fixed_b(&c5, 1).unwrap().0, 3);
        assert_eq!(min_colors_fixed_b(&c5, 3).unwrap().0, 8);
    }

    #[test]
    fn maximal_independent_sets_of_c5() {
        let sets = maximal_independent_sets(&UndirectedGraph::cycle(5));
        assert_eq!(sets.len(), 5);
        assert!(sets.iter().all(|s| s.len() == 2));
    }

    #[test]
    fn three_cycle_is_uncoded() {
        let g = SideInfoGraph::directed_cycle(3);
        let (chi, code) = optimal_coloring_code(&g, Field::BINARY).unwrap();
        assert_eq!(chi, int(3));
        assert_eq!((code.metrics().beta, code.metrics().r), (int(3), int(1)));
        assert!(verify_code(&code, &g, &VerifyOptions::default()).unwrap().is_valid());
    }

    #[test]
    fn pentagon_side_information() {
        let g = SideInfoGraph::undirected_cycle(5);
        let (chi, code) = optimal_coloring_code(&g, Field::BINARY).unwrap();
        assert_eq!(chi, rat(5, 2));
        assert_eq!((code.m(), code.len()), (2, 5));
        let report = verify_code(&code, &g, &VerifyOptions::default()).unwrap();
        assert_eq!(report.exhaustive, Some(Ok(())));
        assert!(report.is_valid());
    }

    #[test]
    fn single_receiver() {
        let g = SideInfoGraph::edgeless(1);
        let (_, code) = optimal_coloring_code(&g, Field::BINARY).unwrap();
        assert_eq!((code.m(), code.len()), (1, 1));
    }

    #[test]
    fn overlapping_coloring_rejected() {
        let g = SideInfoGraph::directed_cycle(3);
        let col = ABColoring {
            a: 2,
            b: 1,
            assignment: vec![vec![0], vec![0], vec![1]],
        };
        assert!(fractional_coloring_code(&g, &col, Field::BINARY).is_err());
    }

    fn small_graph() -> impl Strategy<Value = SideInfoGraph> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                let sets = (0..n)
                    .map(|i| (0..n).filter(|&j| j != i && bits[i * n + j]).collect())
                    .collect();
                SideInfoGraph::new(sets).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn coloring_code_is_valid_and_optimal(g in small_graph()) {
            let h = g.interference_graph();
            let (chi, code) = optimal_coloring_code(&g, Field::new(3).unwrap()).unwrap();
            prop_assert_eq!(code.metrics().beta, chi.clone());
            prop_assert_eq!(code.metrics().r, int(1));
            prop_assert!(verify_code(&code, &g, &VerifyOptions::algebraic_only()).unwrap().is_valid());
            prop_assert!(queries_disjoint_on_interference(&code, &g));
            let (chi_int, _) = min_colors_fixed_b(&h, 1).unwrap();
            prop_assert!(chi <= int(chi_int as i64));
        }

        #[test]
        fn fixed_b_matches_lp_scaling(g in small_graph(), b in 1usize..=3) {
            let h = g.interference_graph();
            let (chi, _) = fractional_chromatic(&h).unwrap();
            let (a, col) = min_colors_fixed_b(&h, b).unwrap();
            prop_assert!(col.validate(&h).is_ok());
            prop_assert!(int(a as i64) >= chi * int(b as i64));
        }
    }
}
