//! Rotating a scalar code over all cyclic shifts spreads the load evenly.

use ldic::codes::{verify_code, VerifyOptions};
use ldic::field_linalg::Field;
use ldic::graph::SideInfoGraph;
use ldic::minrank::DEFAULT_MINRANK_BUDGET;
use ldic::schemes::cyclic_balanced_code;

fn main() -> ldic::Result<()> {
    let field = Field::new(2)?;
    let graphs = [
        ("C3", SideInfoGraph::directed_cycle(3)),
        ("C5", SideInfoGraph::directed_cycle(5)),
        ("circulant(5; 1,2)", SideInfoGraph::circulant(5, &[1, 2])),
        ("circulant(6; 1,2)", SideInfoGraph::circulant(6, &[1, 2])),
    ];
    for (name, g) in graphs {
        let code = cyclic_balanced_code(&g, field, DEFAULT_MINRANK_BUDGET)?;
        let valid = verify_code(&code, &g, &VerifyOptions::default())?.is_valid();
        println!("{name:18} {}  [{}]  valid = {valid}", code.metrics(), code.provenance());
    }

    // A path has no rotation symmetry, so the scheme refuses it.
    let path = SideInfoGraph::new(vec![vec![1], vec![2], vec![]])?;
    match cyclic_balanced_code(&path, field, DEFAULT_MINRANK_BUDGET) {
        Ok(_) => println!("path: unexpectedly accepted"),
        Err(e) => println!("path: {e}"),
    }
    Ok(())
}
