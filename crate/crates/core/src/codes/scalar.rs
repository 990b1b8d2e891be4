use super::{Decoder, LinearIndexCode};
use crate::error::{Error, Result};
use crate::field_linalg::{hamming_weight, GfMatrix};
use crate::graph::SideInfoGraph;
use crate::minrank::FittingMatrix;

/// Scalar code from an encoder `B` whose column space contains the fitting
/// matrix `A`. Receiver `i` queries the support of a minimum-weight `d_i`
/// with `B d_i = a_i`.
pub fn scalar_code(g: &SideInfoGraph, b: &GfMatrix, a: &FittingMatrix, wt_cap: usize) -> Result<LinearIndexCode> {
    let n = g.n();
    if a.n() != n || b.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "graph has {n} vertices, encoder has {} rows, fitting matrix is {}x{}",
            b.rows(),
            a.n(),
            a.n()
        )));
    }
    if b.field() != a.field() {
        return Err(Error::DimensionMismatch(
            "encoder and fitting matrix fields differ".into(),
        ));
    }
    if !b.column_space_contains(a.matrix())? {
        return Err(Error::InvalidCode(
            "encoder column space does not contain the fitting matrix".into(),
        ));
    }
    let mut solutions = Vec::with_capacity(n);
    for i in 0..n {
        let d = b.min_weight_solution(&a.column(i), wt_cap)?;
        solutions.push(d);
    }
    assemble(g, b, a, &solutions, "scalar")
}

/// Scalar code from an encoder alone: each receiver uses the cheapest
/// combination of columns that yields `x_i` plus terms it already knows.
/// Returns the code together with the fitting matrix it realizes.
pub fn scalar_code_from_encoder(
    g: &SideInfoGraph,
    b: &GfMatrix,
    wt_cap: usize,
) -> Result<(LinearIndexCode, FittingMatrix)> {
    let n = g.n();
    let f = b.field();
    if b.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "encoder has {} rows, graph has {n} vertices",
            b.rows()
        )));
    }
    let mut solutions = Vec::with_capacity(n);
    let mut a = GfMatrix::zeros(f, n, n);
    for i in 0..n {
        // rows outside K_i are pinned: 1 on row i, 0 elsewhere
        let pinned: Vec<usize> = (0..n).filter(|&j| j == i || !g.knows(i, j)).collect();
        let target: Vec<u32> = pinned.iter().map(|&j| u32::from(j == i)).collect();
        let d = b
            .select_rows(&pinned)
            .min_weight_solution(&target, wt_cap)
            .map_err(|e| match e {
                Error::UnreachableTarget => Error::InvalidCode(format!("encoder cannot serve receiver {}", i + 1)),
                other => other,
            })?;
        for (j, v) in b.apply(&d).into_iter().enumerate() {
            a.set(j, i, v);
        }
        solutions.push(d);
    }
    let a = FittingMatrix::new(g, a)?;
    let code = assemble(g, b, &a, &solutions, "scalar")?;
    Ok((code, a))
}

fn assemble(
    g: &SideInfoGraph,
    b: &GfMatrix,
    a: &FittingMatrix,
    solutions: &[Vec<u32>],
    provenance: &str,
) -> Result<LinearIndexCode> {
    let f = b.field();
    let n = g.n();
    let used: Vec<usize> = (0..b.cols()).filter(|&t| solutions.iter().any(|d| d[t] != 0)).collect();
    let position = |t: usize| used.binary_search(&t).expect("used column");
    let mut queries = Vec::with_capacity(n);
    let mut decoders = Vec::with_capacity(n);
    for (i, d) in solutions.iter().enumerate() {
        debug_assert!(hamming_weight(d) >= 1);
        let support: Vec<usize> = (0..b.cols()).filter(|&t| d[t] != 0).collect();
        let mut query_map = GfMatrix::zeros(f, support.len(), 1);
        for (row, &t) in support.iter().enumerate() {
            query_map.set(row, 0, d[t]);
        }
        let known = g.known(i);
        let mut side_map = GfMatrix::zeros(f, known.len(), 1);
        for (row, &j) in known.iter().enumerate() {
            side_map.set(row, 0, f.neg(a.matrix().get(j, i)));
        }
        queries.push(support.into_iter().map(position).collect());
        decoders.push(Decoder { query_map, side_map });
    }
    LinearIndexCode::new(f, n, 1, b.select_columns(&used), queries, decoders, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::verify_code;
    use crate::codes::VerifyOptions;
    use crate::field_linalg::Field;
    use crate::minrank::{minrank, optimal_scalar_encoder, DEFAULT_MINRANK_BUDGET};
    use crate::rational::int;

    #[test]
    fn three_cycle_localities() {
        let g = SideInfoGraph::directed_cycle(3);
        let mr = minrank(&g, Field::BINARY, DEFAULT_MINRANK_BUDGET).unwrap();
        let b = optimal_scalar_encoder(&mr.witness);
        let code = scalar_code(&g, &b, &mr.witness, b.cols()).unwrap();
        let m = code.metrics();
        assert_eq!(m.per_receiver, vec![int(1), int(1), int(2)]);
        assert_eq!((m.beta, m.r), (int(2), int(2)));
        assert!(verify_code(&code, &g, &VerifyOptions::default()).unwrap().is_valid());
    }

    #[test]
    fn identity_encoder_is_uncoded() {
        let g = SideInfoGraph::edgeless(4);
        let f = Field::new(3).unwrap();
        let a = FittingMatrix::new(&g, GfMatrix::identity(f, 4)).unwrap();
        let code = scalar_code(&g, &GfMatrix::identity(f, 4), &a, 4).unwrap();
        assert!(code.metrics().per_receiver.iter().all(|r| *r == int(1)));
        assert_eq!(code.metrics().beta, int(4));
    }

    #[test]
    fn five_cycle_scalar() {
        let g = SideInfoGraph::directed_cycle(5);
        let mr = minrank(&g, Field::BINARY, DEFAULT_MINRANK_BUDGET).unwrap();
        let b = optimal_scalar_encoder(&mr.witness);
        let code = scalar_code(&g, &b, &mr.witness, b.cols()).unwrap();
        assert_eq!(code.metrics().beta, int(4));
        assert_eq!(code.metrics().r, int(4));
        assert!(verify_code(&code, &g, &VerifyOptions::default()).unwrap().is_valid());
    }

    #[test]
    fn rejects_encoder_missing_columns() {
        let g = SideInfoGraph::directed_cycle(3);
        let mr = minrank(&g, Field::BINARY, DEFAULT_MINRANK_BUDGET).unwrap();
        let b = mr.witness.matrix().select_columns(&[0]);
        assert!(matches!(
            scalar_code(&g, &b, &mr.witness, 1),
            Err(Error::InvalidCode(_))
        ));
    }

    #[test]
    fn encoder_only_construction() {
        let g = SideInfoGraph::directed_cycle(3);
        let b = GfMatrix::from_rows(Field::BINARY, &[vec![1, 0], vec![1, 1], vec![0, 1]]).unwrap();
        let (code, a) = scalar_code_from_encoder(&g, &b, 2).unwrap();
        assert_eq!(a.rank(), 2);
        assert!(verify_code(&code, &g, &VerifyOptions::default()).unwrap().is_valid());
        // a single all-ones column cannot serve the 3-cycle
        let ones = GfMatrix::from_rows(Field::BINARY, &[vec![1], vec![1], vec![1]]).unwrap();
        assert!(scalar_code_from_encoder(&g, &ones, 1).is_err());
    }
}
