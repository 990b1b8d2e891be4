//! Covering codes over the minrank code space give r = 1 at a rate cost.

use ldic::codes::{verify_code, VerifyOptions};
use ldic::field_linalg::Field;
use ldic::graph::SideInfoGraph;
use ldic::minrank::DEFAULT_MINRANK_BUDGET;
use ldic::schemes::{find_covering_code, separation_code, sphere_covering_holds, DEFAULT_COVERING_BUDGET};

fn main() -> ldic::Result<()> {
    let field = Field::new(2)?;
    for (codim, radius) in [(2, 1), (3, 1), (3, 2), (4, 1)] {
        let cc = find_covering_code(field, codim, radius, DEFAULT_COVERING_BUDGET)?;
        println!(
            "shortest binary code with codimension {codim}, radius {radius}: n = {} (perfect: {})",
            cc.n,
            sphere_covering_holds(2, codim, radius, cc.n)
        );
    }

    let g = SideInfoGraph::directed_cycle(3);
    for radius in 1..=2 {
        let code = separation_code(&g, field, radius, DEFAULT_MINRANK_BUDGET, DEFAULT_COVERING_BUDGET)?;
        let valid = verify_code(&code, &g, &VerifyOptions::default())?.is_valid();
        println!(
            "C3 radius {radius}: {}  [{}]  valid = {valid}",
            code.metrics(),
            code.provenance()
        );
    }
    Ok(())
}
