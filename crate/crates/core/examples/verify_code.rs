//! Both verifier backends, a JSON round trip, and a broken code.

use ldic::codes::{verify_code, LinearIndexCode, VerifyOptions};
use ldic::field_linalg::Field;
use ldic::graph::SideInfoGraph;
use ldic::minrank::{minrank, optimal_scalar_encoder, DEFAULT_MINRANK_BUDGET};
use ldic::schemes::{ais_cover_code, t_subset_cover};

fn main() -> ldic::Result<()> {
    let field = Field::new(2)?;
    let g = SideInfoGraph::directed_cycle(3);
    let mr = minrank(&g, field, DEFAULT_MINRANK_BUDGET)?;
    let b = optimal_scalar_encoder(&mr.witness);
    let code = ais_cover_code(&g, &t_subset_cover(&g, 2)?, &b, &mr.witness)?;

    let text = code.to_json();
    let back = LinearIndexCode::from_json(&text)?;
    assert_eq!(back, code);
    println!("{text}\n");

    let report = verify_code(&back, &g, &VerifyOptions::default())?;
    println!("algebraic: {:?}", report.algebraic.is_ok());
    println!("exhaustive: {:?}", report.exhaustive.as_ref().map(|r| r.is_ok()));

    // Dropping one queried symbol from receiver 1 must be caught.
    let broken = code.with_truncated_query(0, code.query(0).len() - 1)?;
    let report = verify_code(&broken, &g, &VerifyOptions::default())?;
    match report.failure() {
        Some(c) => println!("truncated code rejected: {c}"),
        None => println!("truncated code slipped through"),
    }
    Ok(())
}
