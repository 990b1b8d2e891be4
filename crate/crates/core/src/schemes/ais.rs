use num::integer::binomial;

use crate::codes::{time_share, LinearIndexCode};
use crate::error::{Error, Result};
use crate::field_linalg::GfMatrix;
use crate::graph::{SideInfoGraph, TopologicalOrder, VertexSet};
use crate::minrank::FittingMatrix;
use crate::rational::{rat, Rational};

/// Subsets of the receivers that each induce an acyclic subgraph, with every
/// receiver in at least `q_fold` of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AisCover {
    subsets: Vec<VertexSet>,
    q_fold: usize,
}

impl AisCover {
    /// Validates the subsets and takes `Q` as the smallest multiplicity.
    pub fn new(g: &SideInfoGraph, subsets: Vec<VertexSet>) -> Result<Self> {
        let n = g.n();
        if subsets.is_empty() {
            return Err(Error::Precondition("cover has no subsets".into()));
        }
        for s in &subsets {
            if s.is_empty() || !s.is_subset(g.vertices()) {
                return Err(Error::Precondition(format!("subset {s:?} is empty or out of range")));
            }
            if !g.is_acyclic_on(*s) {
                return Err(Error::Precondition(format!("subset {s:?} induces a cycle")));
            }
        }
        let q_fold = (0..n)
            .map(|i| subsets.iter().filter(|s| s.contains(i)).count())
            .min()
            .expect("n >= 1");
        if q_fold == 0 {
            return Err(Error::Precondition("some receiver is in no subset".into()));
        }
        Ok(AisCover { subsets, q_fold })
    }

    pub fn subsets(&self) -> &[VertexSet] {
        &self.subsets
    }

    /// `Q`.
    pub fn q_fold(&self) -> usize {
        self.q_fold
    }

    /// `M`.
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    /// `(Q + (M - Q) ℓ) / M`, the locality guaranteed with a length-`ℓ` encoder.
    pub fn locality_bound(&self, len: usize) -> Rational {
        let (m, q) = (self.len() as i64, self.q_fold as i64);
        rat(q + (m - q) * len as i64, m)
    }
}

/// All `t`-subsets of the receivers. Requires every directed cycle to be
/// longer than `t`.
pub fn t_subset_cover(g: &SideInfoGraph, t: usize) -> Result<AisCover> {
    let n = g.n();
    if t == 0 || t > n {
        return Err(Error::Precondition(format!("t = {t} must lie in [1, {n}]")));
    }
    if let Some(girth) = g.girth() {
        if girth <= t {
            return Err(Error::Precondition(format!("girth {girth} is not larger than t = {t}")));
        }
    }
    let subsets: Vec<VertexSet> = VertexSet::nonempty_subsets(n).filter(|s| s.len() == t).collect();
    let cover = AisCover::new(g, subsets)?;
    debug_assert_eq!(cover.q_fold as u64, binomial(n as u64 - 1, t as u64 - 1));
    Ok(cover)
}

/// Encoder with `a_i` (for `i` in `s`, topologically ordered) as leading
/// columns, padded with columns of `b` that raise the rank.
pub fn reorder_for_subset(g: &SideInfoGraph, b: &GfMatrix, a: &FittingMatrix, s: VertexSet) -> Result<GfMatrix> {
    let (sub, map) = g.induced_subgraph(s)?;
    let order = match sub.topological_order() {
        TopologicalOrder::Order(o) => o,
        TopologicalOrder::Cyclic(c) => {
            let cycle: Vec<usize> = c.iter().map(|&v| map[v] + 1).collect();
            return Err(Error::Precondition(format!("subset induces the cycle {cycle:?}")));
        }
    };
    let mut columns: Vec<Vec<u32>> = order.iter().map(|&v| a.column(map[v])).collect();
    let lead = GfMatrix::from_columns(b.field(), b.rows(), &columns)?;
    assert_eq!(
        lead.rank(),
        columns.len(),
        "columns of an acyclic subset must be independent"
    );
    let mut rank = columns.len();
    for col in b.columns() {
        columns.push(col);
        let trial = GfMatrix::from_columns(b.field(), b.rows(), &columns)?;
        if trial.rank() > rank {
            rank += 1;
        } else {
            columns.pop();
        }
    }
    let out = GfMatrix::from_columns(b.field(), b.rows(), &columns)?;
    debug_assert!(out.column_space_contains(a.matrix()).unwrap_or(false));
    Ok(out)
}

/// Time-shares one scalar code per subset, each built on the encoder that
/// gives the subset's receivers locality one.
pub fn ais_cover_code(g: &SideInfoGraph, cover: &AisCover, b: &GfMatrix, a: &FittingMatrix) -> Result<LinearIndexCode> {
    let mut codes = Vec::with_capacity(cover.len());
    for &s in cover.subsets() {
        let bj = reorder_for_subset(g, b, a, s)?;
        let wt_cap = bj.cols();
        codes.push(crate::codes::scalar_code(g, &bj, a, wt_cap)?);
    }
    let parts: Vec<(&LinearIndexCode, usize)> = codes.iter().map(|c| (c, 1)).collect();
    let code = time_share(g, &parts)?;
    Ok(code.with_provenance(format!("ais-cover(M={}, Q={})", cover.len(), cover.q_fold())))
}
