use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{scalar_code, scalar_code_from_encoder, LinearIndexCode};
use crate::error::{Error, Result};
use crate::field_linalg::{next_prime_at_least, Field, GfMatrix};
use crate::graph::{SideInfoGraph, VertexSet};
use crate::minrank::{minrank, optimal_scalar_encoder, FittingMatrix};
use crate::rational::{format_rational, int, rat, Rational};
use crate::schemes::{ais_cover_code, t_subset_cover};

/// Full subset catalogs are built only up to this many receivers.
pub const CATALOG_LIMIT: usize = 8;

/// `n x (n - k)` encoder whose transpose is the parity check of an `[n, k]`
/// MDS code: any `n - k` rows are independent.
///
/// `k = 0`, `1`, `n - 1` and `n` work over every field; other `k` use a
/// Vandermonde matrix on the points `0, 1, ..., n - 1` and need `q >= n`.
pub fn mds_parity_encoder(n: usize, k: usize, field: Field) -> Result<GfMatrix> {
    if k > n {
        return Err(Error::Precondition(format!("dimension {k} exceeds length {n}")));
    }
    let f = field;
    if k == 0 {
        return Ok(GfMatrix::identity(f, n));
    }
    if k == n {
        return Ok(GfMatrix::zeros(f, n, 0));
    }
    if k == n - 1 {
        return GfMatrix::from_columns(f, n, &[vec![1; n]]);
    }
    if k == 1 {
        // parity check [I | -1] of the repetition code
        let mut m = GfMatrix::zeros(f, n, n - 1);
        for j in 0..n - 1 {
            m.set(j, j, 1);
            m.set(n - 1, j, f.neg(1));
        }
        return Ok(m);
    }
    if (f.order() as usize) < n {
        return Err(Error::Precondition(format!(
            "an MDS code of length {n} needs at least {n} field elements, F_{} has {}",
            f.order(),
            f.order()
        )));
    }
    let mut m = GfMatrix::zeros(f, n, n - k);
    for point in 0..n {
        for power in 0..n - k {
            m.set(point, power, f.pow(point as u32, power as u64));
        }
    }
    Ok(m)
}

/// The scalar scheme behind a component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recipe {
    Uncoded,
    /// MDS parity encoder with dimension `k`.
    Parity {
        k: usize,
    },
    Minrank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogKind {
    PartialClique,
    Cycle,
    Minrank,
    VectorPartialClique,
    VectorCycle,
    VectorMinrank,
}

impl CatalogKind {
    pub const ALL: [CatalogKind; 6] = [
        CatalogKind::PartialClique,
        CatalogKind::Cycle,
        CatalogKind::Minrank,
        CatalogKind::VectorPartialClique,
        CatalogKind::VectorCycle,
        CatalogKind::VectorMinrank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogKind::PartialClique => "partial-clique",
            CatalogKind::Cycle => "cycle",
            CatalogKind::Minrank => "minrank",
            CatalogKind::VectorPartialClique => "vector-partial-clique",
            CatalogKind::VectorCycle => "vector-cycle",
            CatalogKind::VectorMinrank => "vector-minrank",
        }
    }

    pub fn is_vector(self) -> bool {
        matches!(
            self,
            CatalogKind::VectorPartialClique | CatalogKind::VectorCycle | CatalogKind::VectorMinrank
        )
    }

    pub fn scalar(self) -> CatalogKind {
        match self {
            CatalogKind::VectorPartialClique => CatalogKind::PartialClique,
            CatalogKind::VectorCycle => CatalogKind::Cycle,
            CatalogKind::VectorMinrank => CatalogKind::Minrank,
            other => other,
        }
    }
}

impl fmt::Display for CatalogKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown catalog {s:?}")))
    }
}

/// A code for the subgraph induced on `subset`, described by its parameters
/// and buildable on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCode {
    pub subset: VertexSet,
    pub kind: CatalogKind,
    pub recipe: Recipe,
    pub field: Field,
    pub m: usize,
    pub len: usize,
    pub beta: Rational,
    pub r: Rational,
    /// AIS cover size used when vectorized: 1 for singletons, `|S| - 1` for cycles.
    pub vector_t: Option<usize>,
}

impl ComponentCode {
    fn scalar(subset: VertexSet, kind: CatalogKind, recipe: Recipe, field: Field, len: usize, r: Rational) -> Self {
        ComponentCode {
            subset,
            kind,
            recipe,
            field,
            m: 1,
            len,
            beta: int(len as i64),
            r,
            vector_t: None,
        }
    }

    /// Builds the code on `G_S`, with receivers numbered by the sorted subset.
    pub fn build(&self, g: &SideInfoGraph) -> Result<LinearIndexCode> {
        let (sub, _) = g.induced_subgraph(self.subset)?;
        let n = sub.n();
        let (b, a, scalar) = match self.recipe {
            Recipe::Uncoded => {
                let b = GfMatrix::identity(self.field, n);
                let (code, a) = scalar_code_from_encoder(&sub, &b, 1)?;
                (b, a, code)
            }
            Recipe::Parity { k } => {
                let b = mds_parity_encoder(n, k, self.field)?;
                let cap = b.cols();
                let (code, a) = scalar_code_from_encoder(&sub, &b, cap)?;
                (b, a, code)
            }
            Recipe::Minrank => {
                let mr = minrank(&sub, self.field, u128::MAX)?;
                let b = optimal_scalar_encoder(&mr.witness);
                let code = scalar_code(&sub, &b, &mr.witness, b.cols())?;
                (b, mr.witness, code)
            }
        };
        let code = match self.vector_t {
            None => scalar,
            Some(t) => vector_code(&sub, t, &b, &a)?,
        };
        Ok(code.with_provenance(format!("{}{:?}", self.kind, self.subset)))
    }
}

fn vector_code(sub: &SideInfoGraph, t: usize, b: &GfMatrix, a: &FittingMatrix) -> Result<LinearIndexCode> {
    let cover = t_subset_cover(sub, t)?;
    ais_cover_code(sub, &cover, b, a)
}

fn side_info_within(g: &SideInfoGraph, s: VertexSet) -> usize {
    s.iter()
        .map(|i| g.side_info(i).intersection(s).len())
        .min()
        .expect("nonempty subset")
}

/// Broadcast `|S| - min_i |K_i ∩ S|` MDS parities.
pub fn partial_clique_component(g: &SideInfoGraph, s: VertexSet, field: Field) -> Result<ComponentCode> {
    let n = s.len();
    let k = side_info_within(g, s);
    if k == 0 {
        return Ok(ComponentCode::scalar(
            s,
            CatalogKind::PartialClique,
            Recipe::Uncoded,
            field,
            n,
            int(1),
        ));
    }
    if !(k == 1 || k == n - 1) && (field.order() as usize) < n {
        return Err(Error::Precondition(format!(
            "subset {s:?} needs a field with at least {n} elements"
        )));
    }
    let len = n - k;
    Ok(ComponentCode::scalar(
        s,
        CatalogKind::PartialClique,
        Recipe::Parity { k },
        field,
        len,
        int(len as i64),
    ))
}

/// One repetition-code parity set when `G_S` is a directed cycle, otherwise
/// uncoded transmission.
pub fn cycle_component(g: &SideInfoGraph, s: VertexSet, field: Field) -> Result<ComponentCode> {
    let (sub, _) = g.induced_subgraph(s)?;
    let n = s.len();
    if n >= 2 && sub.is_directed_cycle() {
        Ok(ComponentCode::scalar(
            s,
            CatalogKind::Cycle,
            Recipe::Parity { k: 1 },
            field,
            n - 1,
            int(n as i64 - 1),
        ))
    } else {
        Ok(ComponentCode::scalar(
            s,
            CatalogKind::Cycle,
            Recipe::Uncoded,
            field,
            n,
            int(1),
        ))
    }
}

/// Optimal scalar-linear code of `G_S`.
pub fn minrank_component(g: &SideInfoGraph, s: VertexSet, field: Field, budget: u128) -> Result<ComponentCode> {
    let (sub, _) = g.induced_subgraph(s)?;
    let kappa = minrank(&sub, field, budget)?.rank;
    Ok(ComponentCode::scalar(
        s,
        CatalogKind::Minrank,
        Recipe::Minrank,
        field,
        kappa,
        int(kappa as i64),
    ))
}

/// Trades message length for locality on a scalar component: singletons for
/// partial-clique and minrank components, `(|S| - 1)`-subsets for coded
/// cycles. Uncoded components and singletons come back unchanged apart from
/// their kind.
pub fn vectorize_component(c: &ComponentCode) -> ComponentCode {
    let kind = match c.kind {
        CatalogKind::PartialClique => CatalogKind::VectorPartialClique,
        CatalogKind::Cycle => CatalogKind::VectorCycle,
        CatalogKind::Minrank => CatalogKind::VectorMinrank,
        already => already,
    };
    let n = c.subset.len();
    if c.vector_t.is_some() || n == 1 || c.recipe == Recipe::Uncoded {
        return ComponentCode { kind, ..c.clone() };
    }
    let ell = c.len as i64;
    let ni = n as i64;
    let (t, r) = match c.kind {
        CatalogKind::Cycle => (n - 1, rat(2 * (ni - 1), ni)),
        _ => (1, rat(1 + (ni - 1) * ell, ni)),
    };
    ComponentCode {
        kind,
        m: n,
        len: c.len * n,
        beta: c.beta.clone(),
        r,
        vector_t: Some(t),
        ..c.clone()
    }
}

/// Component codes for a family of subsets, all of one kind.
#[derive(Clone, Debug)]
pub struct ComponentCatalog {
    pub kind: CatalogKind,
    pub field: Field,
    pub components: Vec<ComponentCode>,
    /// Subsets left out because their minrank exceeded the budget.
    pub skipped: Vec<VertexSet>,
}

impl ComponentCatalog {
    /// Every nonempty subset (requires `N <= 8`).
    ///
    /// Partial-clique catalogs switch to the smallest prime field with at
    /// least `N` elements when the requested field is too small for some
    /// subset; [`ComponentCatalog::field`] reports the field used.
    pub fn build(g: &SideInfoGraph, kind: CatalogKind, field: Field, minrank_budget: u128) -> Result<Self> {
        let n = g.n();
        if n > CATALOG_LIMIT {
            return Err(Error::SizeLimit {
                n,
                limit: CATALOG_LIMIT,
            });
        }
        let subsets: Vec<VertexSet> = VertexSet::nonempty_subsets(n).collect();
        Self::from_subsets(g, kind, field, &subsets, minrank_budget)
    }

    /// The given subsets plus every singleton.
    pub fn from_subsets(
        g: &SideInfoGraph,
        kind: CatalogKind,
        field: Field,
        subsets: &[VertexSet],
        minrank_budget: u128,
    ) -> Result<Self> {
        let mut all: Vec<VertexSet> = (0..g.n())
            .map(VertexSet::singleton)
            .chain(subsets.iter().copied())
            .collect();
        all.sort_by_key(|s| (s.len(), s.0));
        all.dedup();
        for s in &all {
            if s.is_empty() || !s.is_subset(g.vertices()) {
                return Err(Error::InvalidGraph(format!("subset {s:?} is empty or out of range")));
            }
        }

        let field = if kind.scalar() == CatalogKind::PartialClique {
            let needs_big = all.iter().any(|&s| {
                let k = side_info_within(g, s);
                k >= 2 && k + 1 < s.len() && (field.order() as usize) < s.len()
            });
            if needs_big {
                Field::new(next_prime_at_least(g.n() as u64) as u32)?
            } else {
                field
            }
        } else {
            field
        };

        let built: Vec<std::result::Result<ComponentCode, VertexSet>> = all
            .par_iter()
            .map(|&s| {
                let scalar = match kind.scalar() {
                    CatalogKind::PartialClique => partial_clique_component(g, s, field),
                    CatalogKind::Cycle => cycle_component(g, s, field),
                    _ => minrank_component(g, s, field, minrank_budget),
                };
                match scalar {
                    Ok(c) if kind.is_vector() => Ok(vectorize_component(&c)),
                    Ok(c) => Ok(c),
                    Err(_) => Err(s),
                }
            })
            .collect();
        let mut components = Vec::new();
        let mut skipped = Vec::new();
        for b in built {
            match b {
                Ok(c) => components.push(c),
                Err(s) if s.len() == 1 => {
                    return Err(Error::Infeasible(format!("no component for singleton {s:?}")));
                }
                Err(s) => skipped.push(s),
            }
        }
        Ok(ComponentCatalog {
            kind,
            field,
            components,
            skipped,
        })
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn get(&self, s: VertexSet) -> Option<&ComponentCode> {
        self.components.iter().find(|c| c.subset == s)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Entry {
            subset: Vec<usize>,
            m: usize,
            len: usize,
            beta: String,
            r: String,
            scheme: Recipe,
        }
        #[derive(Serialize)]
        struct Doc {
            kind: CatalogKind,
            q: u32,
            components: Vec<Entry>,
            skipped: Vec<Vec<usize>>,
        }
        let doc = Doc {
            kind: self.kind,
            q: self.field.order(),
            components: self
                .components
                .iter()
                .map(|c| Entry {
                    subset: c.subset.to_one_indexed(),
                    m: c.m,
                    len: c.len,
                    beta: format_rational(&c.beta),
                    r: format_rational(&c.r),
                    scheme: c.recipe,
                })
                .collect(),
            skipped: self.skipped.iter().map(|s| s.to_one_indexed()).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("catalog serializes")
    }
}
