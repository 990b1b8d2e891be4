//! Exhaustive minrank and optimal scalar-linear encoders.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field_linalg::{Field, GfMatrix};
use crate::graph::SideInfoGraph;

/// Default cap on the number of fitting matrices enumerated (`2^24`).
pub const DEFAULT_MINRANK_BUDGET: u128 = 1 << 24;

/// An `N x N` matrix with unit diagonal whose off-diagonal support is confined
/// to side-information positions: `A[j][i] != 0` only if `j` is in `K_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FittingMatrix {
    matrix: GfMatrix,
}

impl FittingMatrix {
    pub fn new(g: &SideInfoGraph, matrix: GfMatrix) -> Result<Self> {
        let n = g.n();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "fitting matrix must be {n}x{n}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let v = matrix.get(j, i);
                if i == j && v != 1 {
                    return Err(Error::Precondition(format!(
                        "diagonal entry ({}, {}) is {v}, must be 1",
                        i + 1,
                        i + 1
                    )));
                }
                if i != j && v != 0 && !g.knows(i, j) {
                    return Err(Error::Precondition(format!(
                        "entry ({}, {}) is nonzero but receiver {} does not know message {}",
                        j + 1,
                        i + 1,
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(FittingMatrix { matrix })
    }

    pub fn matrix(&self) -> &GfMatrix {
        &self.matrix
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    /// Column `a_i`.
    pub fn column(&self, i: usize) -> Vec<u32> {
        self.matrix.column(i)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

#[derive(Clone, Debug)]
pub struct Minrank {
    pub rank: usize,
    pub witness: FittingMatrix,
}

/// Free positions `(row j, column i)` with `j` in `K_i`, in row-major order.
pub fn free_positions(g: &SideInfoGraph) -> Vec<(usize, usize)> {
    let n = g.n();
    (0..n)
        .flat_map(|j| (0..n).filter(move |&i| i != j).map(move |i| (j, i)))
        .filter(|&(j, i)| g.knows(i, j))
        .collect()
}

pub fn enumeration_size(g: &SideInfoGraph, field: Field) -> u128 {
    let free = free_positions(g).len() as u32;
    (field.order() as u128).checked_pow(free).unwrap_or(u128::MAX)
}

/// Exact `κ_q(G)` by enumerating every fitting matrix.
///
/// Free entries are enumerated row-major with the first free position as the
/// most significant digit, digits ascending. The witness is the first matrix
/// of minimum rank in that order. Enumeration stops early at rank 1.
pub fn minrank(g: &SideInfoGraph, field: Field, budget: u128) -> Result<Minrank> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidGraph("minrank of an empty graph".into()));
    }
    let total = enumeration_size(g, field);
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: "minrank enumeration",
            needed: total,
            budget,
        });
    }
    let positions = free_positions(g);
    let q = field.order() as u64;
    let total = total as u64;

    // Contiguous index ranges keep the reduction deterministic: the first
    // minimum inside each chunk, then the first chunk holding the global minimum.
    let chunk = 1u64 << 12;
    let chunks = total.div_ceil(chunk);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            let mut best: Option<(usize, u64)> = None;
            for idx in lo..hi {
                let rank = rank_of_index(n, field, &positions, idx, q);
                if best.is_none_or(|(r, _)| rank < r) {
                    best = Some((rank, idx));
                    if rank == 1 {
                        break;
                    }
                }
            }
            best.expect("nonempty chunk")
        })
        .min_by_key(|&(rank, idx)| (rank, idx))
        .expect("at least one fitting matrix");

    let matrix = matrix_of_index(n, field, &positions, best.1, q);
    Ok(Minrank {
        rank: best.0,
        witness: FittingMatrix::new(g, matrix)?,
    })
}

fn digits(positions_len: usize, mut idx: u64, q: u64) -> impl Iterator<Item = u32> {
    // Most significant digit first, matching row-major lexicographic order.
    let mut out = vec![0u32; positions_len];
    for slot in out.iter_mut().rev() {
        *slot = (idx % q) as u32;
        idx /= q;
    }
    out.into_iter()
}

fn matrix_of_index(n: usize, field: Field, positions: &[(usize, usize)], idx: u64, q: u64) -> GfMatrix {
    let mut m = GfMatrix::identity(field, n);
    for (&(j, i), v) in positions.iter().zip(digits(positions.len(), idx, q)) {
        m.set(j, i, v);
    }
    m
}

fn rank_of_index(n: usize, field: Field, positions: &[(usize, usize)], idx: u64, q: u64) -> usize {
    if q == 2 {
        let mut rows = [0u64; 64];
        for (r, row) in rows.iter_mut().enumerate().take(n) {
            *row = 1 << r;
        }
        for (&(j, i), v) in positions.iter().zip(digits(positions.len(), idx, q)) {
            if v == 1 {
                rows[j] |= 1 << i;
            }
        }
        binary_rank(&mut rows[..n])
    } else {
        matrix_of_index(n, field, positions, idx, q).rank()
    }
}

fn binary_rank(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for bit in 0..64 {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row >> bit & 1 == 1 {
                *row ^= pivot;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// `B` = the first (in column order) maximal independent set of columns of `A`.
pub fn optimal_scalar_encoder(a: &FittingMatrix) -> GfMatrix {
    let m = a.matrix();
    m.select_columns(&m.independent_columns())
}
