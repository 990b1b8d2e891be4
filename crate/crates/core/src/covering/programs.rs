use std::collections::HashMap;

use num::{One, ToPrimitive, Zero};

use super::components::ComponentCatalog;
use crate::codes::{compose, LinearIndexCode, Part};
use crate::error::{Error, Result};
use crate::graph::{SideInfoGraph, VertexSet};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{format_rational, int, lcm_of_denominators, Rational};

/// Weights on catalog components (by index), with the objective value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSolution {
    /// Nonzero weights only, sorted by component index.
    pub weights: Vec<(usize, Rational)>,
    pub objective: Rational,
    pub integral: bool,
}

impl CoverSolution {
    pub fn describe(&self, catalog: &ComponentCatalog) -> String {
        self.weights
            .iter()
            .map(|(idx, w)| format!("{}*{:?}", format_rational(w), catalog.components[*idx].subset))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn check_locality(r: &Rational) -> Result<()> {
    if *r < int(1) {
        return Err(Error::LocalityBelowOne(format_rational(r)));
    }
    Ok(())
}

/// Minimum-rate partition of the receivers into catalog subsets whose
/// locality is at most `r`. Branch and bound over exact covers.
pub fn covering_ilp(g: &SideInfoGraph, catalog: &ComponentCatalog, r: &Rational) -> Result<CoverSolution> {
    check_locality(r)?;
    let mut candidates: Vec<usize> = (0..catalog.len()).filter(|&i| catalog.components[i].r <= *r).collect();
    let ratio = |i: usize| {
        let c = &catalog.components[i];
        c.beta.clone() / int(c.subset.len() as i64)
    };
    candidates.sort_by(|&a, &b| {
        ratio(a)
            .cmp(&ratio(b))
            .then(catalog.components[a].subset.0.cmp(&catalog.components[b].subset.0))
    });
    let Some(best_ratio) = candidates.first().map(|&i| ratio(i)) else {
        return Err(Error::Infeasible(format!(
            "no component has locality at most {}",
            format_rational(r)
        )));
    };

    let n = g.n();
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &c in &candidates {
        for v in catalog.components[c].subset.iter() {
            by_vertex[v].push(c);
        }
    }
    let mut search = Search {
        catalog,
        by_vertex: &by_vertex,
        best_ratio,
        full: g.vertices(),
        best: None,
        chosen: Vec::new(),
    };
    search.run(VertexSet::EMPTY, int(0));
    let Some((objective, chosen)) = search.best else {
        return Err(Error::Infeasible(format!(
            "no partition into components with locality at most {}",
            format_rational(r)
        )));
    };
    let mut weights: Vec<(usize, Rational)> = chosen.into_iter().map(|i| (i, Rational::one())).collect();
    weights.sort_by_key(|(i, _)| *i);
    Ok(CoverSolution {
        weights,
        objective,
        integral: true,
    })
}

struct Search<'a> {
    catalog: &'a ComponentCatalog,
    by_vertex: &'a [Vec<usize>],
    best_ratio: Rational,
    full: VertexSet,
    best: Option<(Rational, Vec<usize>)>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, covered: VertexSet, cost: Rational) {
        let left = VertexSet(self.full.0 & !covered.0);
        let Some(v) = left.min() else {
            if self.best.as_ref().is_none_or(|(b, _)| cost < *b) {
                self.best = Some((cost, self.chosen.clone()));
            }
            return;
        };
        if let Some((b, _)) = &self.best {
            if cost.clone() + self.best_ratio.clone() * int(left.len() as i64) >= *b {
                return;
            }
        }
        for &c in &self.by_vertex[v] {
            let comp = &self.catalog.components[c];
            if !comp.subset.is_disjoint(covered) {
                continue;
            }
            self.chosen.push(c);
            self.run(covered.union(comp.subset), cost.clone() + comp.beta.clone());
            self.chosen.pop();
        }
    }
}

/// Fractional relaxation: every receiver covered with total weight one and
/// weighted locality at most `r`.
pub fn covering_lp(g: &SideInfoGraph, catalog: &ComponentCatalog, r: &Rational) -> Result<CoverSolution> {
    check_locality(r)?;
    let k = catalog.len();
    let mut lp = LinearProgram::new(k);
    lp.objective = catalog.components.iter().map(|c| c.beta.clone()).collect();
    for i in 0..g.n() {
        let cover = catalog
            .components
            .iter()
            .map(|c| if c.subset.contains(i) { int(1) } else { int(0) })
            .collect();
        lp.add(cover, Relation::Eq, int(1));
        let local = catalog
            .components
            .iter()
            .map(|c| if c.subset.contains(i) { c.r.clone() } else { int(0) })
            .collect();
        lp.add(local, Relation::Le, r.clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { x, value } => {
            let integral = x.iter().all(|w| w.is_integer());
            let weights = x.into_iter().enumerate().filter(|(_, w)| !w.is_zero()).collect();
            Ok(CoverSolution {
                weights,
                objective: value,
                integral,
            })
        }
        LpOutcome::Infeasible => Err(Error::Infeasible(format!(
            "no fractional cover with locality at most {}",
            format_rational(r)
        ))),
        LpOutcome::Unbounded => unreachable!("objective is bounded below by zero"),
    }
}

/// Minimum over all set partitions into catalog subsets with locality at
/// most `r`, by direct enumeration. Test oracle for [`covering_ilp`].
pub fn exhaustive_partition_oracle(
    g: &SideInfoGraph,
    catalog: &ComponentCatalog,
    r: &Rational,
) -> Result<Option<Rational>> {
    let n = g.n();
    if n > 8 {
        return Err(Error::SizeLimit { n, limit: 8 });
    }
    check_locality(r)?;
    let cost: HashMap<u64, Rational> = catalog
        .components
        .iter()
        .filter(|c| c.r <= *r)
        .map(|c| (c.subset.0, c.beta.clone()))
        .collect();
    let mut best: Option<Rational> = None;
    let mut blocks: Vec<u64> = Vec::new();
    partitions(0, n, &mut blocks, &mut |parts| {
        let total: Option<Rational> = parts.iter().map(|b| cost.get(b).cloned()).sum();
        if let Some(t) = total {
            if best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        }
    });
    Ok(best)
}

fn partitions(v: usize, n: usize, blocks: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
    if v == n {
        visit(blocks);
        return;
    }
    for b in 0..blocks.len() {
        blocks[b] |= 1 << v;
        partitions(v + 1, n, blocks, visit);
        blocks[b] &= !(1 << v);
    }
    blocks.push(1 << v);
    partitions(v + 1, n, blocks, visit);
    blocks.pop();
}

/// Time-shares the component codes with the solution's weights. Component
/// `S` with weight `a_S` is used `a_S m / m_S` times, `m` being the least
/// value that makes every count an integer.
pub fn materialize(g: &SideInfoGraph, catalog: &ComponentCatalog, solution: &CoverSolution) -> Result<LinearIndexCode> {
    let scaled: Vec<Rational> = solution
        .weights
        .iter()
        .map(|(i, w)| w.clone() / int(catalog.components[*i].m as i64))
        .collect();
    let m = Rational::from_integer(lcm_of_denominators(&scaled));
    let codes: Vec<LinearIndexCode> = solution
        .weights
        .iter()
        .map(|(i, _)| catalog.components[*i].build(g))
        .collect::<Result<_>>()?;
    let vertex_lists: Vec<Vec<usize>> = solution
        .weights
        .iter()
        .map(|(i, _)| catalog.components[*i].subset.to_vec())
        .collect();
    let mut parts = Vec::with_capacity(codes.len());
    for ((code, vertices), k) in codes.iter().zip(&vertex_lists).zip(&scaled) {
        let copies = (k.clone() * m.clone())
            .to_integer()
            .to_usize()
            .ok_or_else(|| Error::InvalidCode("component multiplicity does not fit in usize".into()))?;
        parts.push(Part {
            code,
            vertices,
            multiplicity: copies,
        });
    }
    let provenance = format!("{}-cover[{}]", catalog.kind, solution.describe(catalog));
    compose(g, &parts, provenance)
}
