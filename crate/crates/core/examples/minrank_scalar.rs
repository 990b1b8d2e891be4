//! Exhaustive minrank and the scalar code built from the witness.

use ldic::codes::{scalar_code, verify_code, VerifyOptions};
use ldic::field_linalg::Field;
use ldic::graph::SideInfoGraph;
use ldic::minrank::{enumeration_size, minrank, optimal_scalar_encoder, DEFAULT_MINRANK_BUDGET};

fn main() -> ldic::Result<()> {
    let field = Field::new(2)?;
    for n in 3..=6 {
        let g = SideInfoGraph::directed_cycle(n);
        let mr = minrank(&g, field, DEFAULT_MINRANK_BUDGET)?;
        let b = optimal_scalar_encoder(&mr.witness);
        let code = scalar_code(&g, &b, &mr.witness, b.cols())?;
        let valid = verify_code(&code, &g, &VerifyOptions::default())?.is_valid();
        println!(
            "C{n}: {} fitting matrices, minrank {}, {}, valid = {valid}",
            enumeration_size(&g, field),
            mr.rank,
            code.metrics()
        );
    }

    let g = SideInfoGraph::directed_cycle(3);
    let mr = minrank(&g, field, DEFAULT_MINRANK_BUDGET)?;
    println!("\nC3 witness (rows):");
    for row in mr.witness.matrix().to_rows() {
        println!("  {row:?}");
    }
    Ok(())
}
