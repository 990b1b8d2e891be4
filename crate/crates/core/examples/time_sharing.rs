//! Mixing two codes with equal message length interpolates (r, beta).

use ldic::codes::{time_share, uncoded, verify_code, VerifyOptions};
use ldic::field_linalg::Field;
use ldic::graph::SideInfoGraph;
use ldic::minrank::{minrank, optimal_scalar_encoder, DEFAULT_MINRANK_BUDGET};
use ldic::schemes::{ais_cover_code, t_subset_cover};

fn main() -> ldic::Result<()> {
    let field = Field::new(2)?;
    let g = SideInfoGraph::directed_cycle(3);
    let mr = minrank(&g, field, DEFAULT_MINRANK_BUDGET)?;
    let b = optimal_scalar_encoder(&mr.witness);
    let ais = ais_cover_code(&g, &t_subset_cover(&g, 2)?, &b, &mr.witness)?;
    let plain = uncoded(&g, field, 1);
    println!("uncoded: {}  (m = {})", plain.metrics(), plain.m());
    println!("ais:     {}  (m = {})", ais.metrics(), ais.m());

    // Three copies of the uncoded code match one copy of the AIS code.
    let mixed = time_share(&g, &[(&plain, 3), (&ais, 1)])?;
    let valid = verify_code(&mixed, &g, &VerifyOptions::default())?.is_valid();
    println!(
        "mixed:   {}  (m = {}, len = {})  valid = {valid}",
        mixed.metrics(),
        mixed.m(),
        mixed.len()
    );
    println!("{}", mixed.provenance());
    Ok(())
}
