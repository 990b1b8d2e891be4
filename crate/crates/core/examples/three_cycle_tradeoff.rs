//! The directed 3-cycle is the one graph where the whole curve is known:
//! the best rate is max(6 - 3r, 2) and the toolkit meets it from both sides.

use ldic::field_linalg::Field;
use ldic::graph::SideInfoGraph;
use ldic::rational::{format_rational, rat};
use ldic::tradeoff::{three_cycle_beta, tradeoff_curve, Budgets, Grid};

fn main() -> ldic::Result<()> {
    let g = SideInfoGraph::directed_cycle(3);
    let grid = Grid::new(rat(1, 1), rat(2, 1), rat(1, 12))?;
    let curve = tradeoff_curve(&g, Field::new(2)?, &grid, &Budgets::default())?;

    println!("{:>6} {:>6} {:>6} {:>6}  witness", "r", "upper", "lower", "exact");
    for r in grid.points() {
        let (upper, witness) = curve.upper.segment(&r).expect("grid inside envelope");
        let lower = curve.lower.eval(&r).expect("r >= 1");
        let exact = three_cycle_beta(&r)?;
        println!(
            "{:>6} {:>6} {:>6} {:>6}  {witness}",
            format_rational(&r),
            format_rational(&upper),
            format_rational(&lower),
            format_rational(&exact)
        );
    }
    Ok(())
}
