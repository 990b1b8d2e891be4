//! Structural report for a side-information graph read from JSON.
//!
//! cargo run --example analyze_graph -- data/pentagon.json

use std::env;
use std::fs;

use ldic::coloring::fractional_chromatic;
use ldic::field_linalg::Field;
use ldic::graph::SideInfoGraph;
use ldic::minrank::{minrank, DEFAULT_MINRANK_BUDGET};
use ldic::rational::format_rational;

fn main() -> ldic::Result<()> {
    let path = env::args().nth(1).unwrap_or_else(|| "data/pentagon.json".into());
    let g = SideInfoGraph::from_json(&fs::read_to_string(&path)?)?;

    let (chi, coloring) = fractional_chromatic(&g.interference_graph())?;
    let (mais, acyclic) = g.max_acyclic_induced_subgraph()?;
    println!("{path}: N = {}, |E| = {}", g.n(), g.edge_count());
    println!("girth: {:?}", g.girth());
    println!("cyclic automorphism: {}", g.has_cyclic_automorphism());
    println!(
        "chi_f = {} via a {}:{} coloring",
        format_rational(&chi),
        coloring.a,
        coloring.b
    );
    println!("mais = {mais}, witness {:?}", acyclic.to_one_indexed());
    for q in [2, 3] {
        let kappa = minrank(&g, Field::new(q)?, DEFAULT_MINRANK_BUDGET)?.rank;
        println!("minrank over F_{q}: {kappa}");
    }
    Ok(())
}
