use crate::codes::{scalar_code, time_share, LinearIndexCode};
use crate::error::{Error, Result};
use crate::field_linalg::{Field, GfMatrix};
use crate::graph::SideInfoGraph;
use crate::minrank::{minrank, optimal_scalar_encoder, FittingMatrix};

/// Time-shares the `N` cyclic shifts of an optimal scalar code. Requires
/// `i -> i + 1 (mod N)` to be an automorphism of `g`.
///
/// Each shift moves the receivers that query a single symbol, so every
/// receiver gets locality one in `κ` of the `N` instances.
pub fn cyclic_balanced_code(g: &SideInfoGraph, field: Field, minrank_budget: u128) -> Result<LinearIndexCode> {
    if !g.has_cyclic_automorphism() {
        return Err(Error::Precondition(
            "i -> i + 1 is not an automorphism of the graph".into(),
        ));
    }
    let n = g.n();
    let mr = minrank(g, field, minrank_budget)?;
    let a = mr.witness.matrix();
    let b = optimal_scalar_encoder(&mr.witness);

    let mut codes = Vec::with_capacity(n);
    for s in 0..n {
        let shift = |v: usize| (v + s) % n;
        let mut a_s = GfMatrix::zeros(field, n, n);
        for j in 0..n {
            for i in 0..n {
                a_s.set(shift(j), shift(i), a.get(j, i));
            }
        }
        let mut b_s = GfMatrix::zeros(field, n, b.cols());
        for j in 0..n {
            for c in 0..b.cols() {
                b_s.set(shift(j), c, b.get(j, c));
            }
        }
        let a_s = FittingMatrix::new(g, a_s)?;
        codes.push(scalar_code(g, &b_s, &a_s, b.cols())?);
    }
    let parts: Vec<(&LinearIndexCode, usize)> = codes.iter().map(|c| (c, 1)).collect();
    let code = time_share(g, &parts)?;
    Ok(code.with_provenance(format!("cyclic-balanced(kappa={})", mr.rank)))
}
