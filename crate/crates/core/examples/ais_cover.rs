//! Covering the vertex set with acyclic t-subsets trades rate for locality.

use ldic::codes::{verify_code, VerifyOptions};
use ldic::field_linalg::Field;
use ldic::graph::SideInfoGraph;
use ldic::minrank::{minrank, optimal_scalar_encoder, DEFAULT_MINRANK_BUDGET};
use ldic::rational::format_rational;
use ldic::schemes::{ais_cover_code, t_subset_cover};

fn main() -> ldic::Result<()> {
    let field = Field::new(2)?;
    for n in 3..=5 {
        let g = SideInfoGraph::directed_cycle(n);
        let mr = minrank(&g, field, DEFAULT_MINRANK_BUDGET)?;
        let b = optimal_scalar_encoder(&mr.witness);
        for t in 1..n {
            let cover = t_subset_cover(&g, t)?;
            let code = ais_cover_code(&g, &cover, &b, &mr.witness)?;
            let valid = verify_code(&code, &g, &VerifyOptions::default())?.is_valid();
            println!(
                "C{n} t={t}: M = {}, Q = {}, {}, bound r <= {}, valid = {valid}",
                cover.len(),
                cover.q_fold(),
                code.metrics(),
                format_rational(&cover.locality_bound(b.cols()))
            );
        }
    }
    Ok(())
}
