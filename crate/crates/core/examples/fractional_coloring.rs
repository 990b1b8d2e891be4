//! Codes from optimal fractional colorings: locality 1, rate chi_f.

use ldic::codes::{queries_disjoint_on_interference, verify_code, VerifyOptions};
use ldic::coloring::optimal_coloring_code;
use ldic::field_linalg::Field;
use ldic::graph::SideInfoGraph;

fn main() -> ldic::Result<()> {
    let field = Field::new(2)?;
    let graphs = [
        ("directed 3-cycle", SideInfoGraph::directed_cycle(3)),
        ("pentagon", SideInfoGraph::undirected_cycle(5)),
        ("complete K4", SideInfoGraph::complete(4)),
        ("edgeless 4", SideInfoGraph::edgeless(4)),
    ];
    for (name, g) in graphs {
        let (chi, code) = optimal_coloring_code(&g, field)?;
        let report = verify_code(&code, &g, &VerifyOptions::default())?;
        println!(
            "{name:18} chi_f = {chi:>3}  {}  {}  disjoint = {}  valid = {}",
            code.metrics(),
            code.provenance(),
            queries_disjoint_on_interference(&code, &g),
            report.is_valid()
        );
    }
    Ok(())
}
