//! Partition the receivers into components under a locality budget.

use ldic::codes::{verify_code, VerifyOptions};
use ldic::covering::{
    covering_ilp, covering_lp, exhaustive_partition_oracle, materialize, CatalogKind, ComponentCatalog,
};
use ldic::field_linalg::Field;
use ldic::graph::SideInfoGraph;
use ldic::minrank::DEFAULT_MINRANK_BUDGET;
use ldic::rational::{format_rational, rat};

fn main() -> ldic::Result<()> {
    let field = Field::new(2)?;
    let g = SideInfoGraph::circulant(5, &[1, 2]);

    for kind in [CatalogKind::PartialClique, CatalogKind::Cycle, CatalogKind::Minrank] {
        let cat = ComponentCatalog::build(&g, kind, field, DEFAULT_MINRANK_BUDGET)?;
        for r in [rat(1, 1), rat(3, 2), rat(2, 1), rat(3, 1)] {
            let oracle = exhaustive_partition_oracle(&g, &cat, &r)?;
            let (ilp, lp) = match (covering_ilp(&g, &cat, &r), covering_lp(&g, &cat, &r)) {
                (Ok(i), Ok(l)) => (i, l),
                (Err(e), _) | (_, Err(e)) => {
                    println!("{:14} r = {:>3}: {e}", kind.name(), format_rational(&r));
                    continue;
                }
            };
            println!(
                "{:14} r = {:>3}: ilp {:>4}  lp {:>4}  oracle {:>4}  {}",
                kind.name(),
                format_rational(&r),
                format_rational(&ilp.objective),
                format_rational(&lp.objective),
                oracle.map_or("-".into(), |v| format_rational(&v)),
                ilp.describe(&cat)
            );
        }
    }

    // Fractional solutions become real codes by scaling the message length.
    let c3 = SideInfoGraph::directed_cycle(3);
    let cat = ComponentCatalog::build(&c3, CatalogKind::VectorCycle, field, DEFAULT_MINRANK_BUDGET)?;
    let sol = covering_lp(&c3, &cat, &rat(7, 6))?;
    let code = materialize(&c3, &cat, &sol)?;
    let valid = verify_code(&code, &c3, &VerifyOptions::default())?.is_valid();
    println!("\nC3 at r = 7/6: {}  m = {}  valid = {valid}", code.metrics(), code.m());
    println!("{}", sol.describe(&cat));
    Ok(())
}
