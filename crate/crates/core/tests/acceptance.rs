//! Acceptance checks: one timed PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ldic::codes::{queries_disjoint_on_interference, scalar_code, verify_code, LinearIndexCode, VerifyOptions};
use ldic::coloring::optimal_coloring_code;
use ldic::covering::{
    covering_ilp, covering_lp, exhaustive_partition_oracle, materialize, CatalogKind, ComponentCatalog,
};
use ldic::field_linalg::Field;
use ldic::graph::SideInfoGraph;
use ldic::minrank::{minrank, optimal_scalar_encoder, DEFAULT_MINRANK_BUDGET};
use ldic::rational::{format_rational, int, lcm_of_denominators, rat, Rational};
use ldic::schemes::{
    ais_cover_code, cyclic_balanced_code, find_covering_code, separation_code, sphere_covering_holds, t_subset_cover,
    DEFAULT_COVERING_BUDGET,
};
use ldic::tradeoff::{three_cycle_beta, tradeoff_curve, Budgets, Grid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(r: &Rational) -> String {
    format_rational(r)
}

/// Both backends; the exhaustive one only runs within its message-space limit.
fn verified(code: &LinearIndexCode, g: &SideInfoGraph) -> Result<bool, String> {
    let report = verify_code(code, g, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    if let Some(c) = report.failure() {
        return Err(format!("{}: {c}", code.provenance()));
    }
    Ok(report.exhaustive.is_some())
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize, p: f64) -> SideInfoGraph {
    let n = rng.gen_range(2..=max_n);
    let side = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && rng.gen_bool(p)).collect())
        .collect();
    SideInfoGraph::new(side).expect("loop-free by construction")
}

fn criterion_1() -> Check {
    let g = SideInfoGraph::directed_cycle(3);
    let grid = Grid::new(int(1), int(2), rat(1, 12)).map_err(|e| e.to_string())?;
    let curve = tradeoff_curve(&g, Field::BINARY, &grid, &Budgets::default()).map_err(|e| e.to_string())?;
    ensure(curve.grid.len() == 13, || {
        format!("grid has {} points", curve.grid.len())
    })?;
    for r in &curve.grid {
        let want = three_cycle_beta(r).map_err(|e| e.to_string())?;
        let upper = curve.upper.eval(r);
        let lower = curve.lower.eval(r);
        ensure(upper.as_ref() == Some(&want) && lower.as_ref() == Some(&want), || {
            format!(
                "r = {}: upper {upper:?}, lower {lower:?}, want {}",
                show(r),
                show(&want)
            )
        })?;
    }
    Ok("upper = lower = max(6 - 3r, 2) at 13 grid points".into())
}

fn criterion_2() -> Check {
    let cases = [
        ("3-cycle", SideInfoGraph::directed_cycle(3), int(3)),
        ("pentagon", SideInfoGraph::undirected_cycle(5), rat(5, 2)),
        ("K4", SideInfoGraph::complete(4), int(1)),
    ];
    for (name, g, chi) in cases {
        let (got, code) = optimal_coloring_code(&g, Field::BINARY).map_err(|e| e.to_string())?;
        verified(&code, &g)?;
        let m = code.metrics();
        ensure(got == chi && m.beta == chi && m.r == int(1), || {
            format!("{name}: chi_f {}, beta {}, r {}", show(&got), show(&m.beta), show(&m.r))
        })?;
        ensure(queries_disjoint_on_interference(&code, &g), || {
            format!("{name}: queries overlap")
        })?;
    }
    Ok("chi_f = 3, 5/2, 1 with r = 1 and disjoint queries".into())
}

fn scalar_check(name: &str, g: &SideInfoGraph, want: usize) -> Result<(), String> {
    let mr = minrank(g, Field::BINARY, DEFAULT_MINRANK_BUDGET).map_err(|e| e.to_string())?;
    ensure(mr.rank == want, || format!("{name}: minrank {} != {want}", mr.rank))?;
    let b = optimal_scalar_encoder(&mr.witness);
    let code = scalar_code(g, &b, &mr.witness, b.cols()).map_err(|e| e.to_string())?;
    verified(&code, g)?;
    ensure(code.len() == want, || {
        format!("{name}: scalar code length {}", code.len())
    })
}

fn criterion_3() -> Check {
    for n in 3..=6 {
        scalar_check(&format!("C{n}"), &SideInfoGraph::directed_cycle(n), n - 1)?;
    }
    for n in [3, 5] {
        scalar_check(&format!("edgeless {n}"), &SideInfoGraph::edgeless(n), n)?;
    }
    for n in [3, 5] {
        scalar_check(&format!("K{n}"), &SideInfoGraph::complete(n), 1)?;
    }
    Ok("cycles N - 1, edgeless N, complete 1, scalar codes verified".into())
}

fn criterion_4() -> Check {
    for n in 3..=5 {
        let g = SideInfoGraph::directed_cycle(n);
        let mr = minrank(&g, Field::BINARY, DEFAULT_MINRANK_BUDGET).map_err(|e| e.to_string())?;
        let b = optimal_scalar_encoder(&mr.witness);
        let cover = t_subset_cover(&g, n - 1).map_err(|e| e.to_string())?;
        let code = ais_cover_code(&g, &cover, &b, &mr.witness).map_err(|e| e.to_string())?;
        verified(&code, &g)?;
        let m = code.metrics();
        let bound = rat(2 * (n as i64 - 1), n as i64);
        ensure(m.beta == int(n as i64 - 1) && m.r <= bound, || {
            format!(
                "C{n}: beta {}, r {} vs bound {}",
                show(&m.beta),
                show(&m.r),
                show(&bound)
            )
        })?;
        if n == 3 {
            ensure(m.r == rat(4, 3), || format!("C3: r {} != 4/3", show(&m.r)))?;
        }
    }
    Ok("t = N - 1 covers meet beta = N - 1, r <= 2(N-1)/N, C3 at 4/3".into())
}

fn criterion_5() -> Check {
    let mut graphs: Vec<(String, SideInfoGraph)> = (3..=6)
        .map(|n| (format!("C{n}"), SideInfoGraph::directed_cycle(n)))
        .collect();
    for n in [5, 6] {
        graphs.push((format!("circulant({n}; 1, 2)"), SideInfoGraph::circulant(n, &[1, 2])));
    }
    let mut seen = Vec::new();
    for (name, g) in graphs {
        let kappa = minrank(&g, Field::BINARY, DEFAULT_MINRANK_BUDGET)
            .map_err(|e| e.to_string())?
            .rank as i64;
        let n = g.n() as i64;
        let code = cyclic_balanced_code(&g, Field::BINARY, DEFAULT_MINRANK_BUDGET).map_err(|e| e.to_string())?;
        verified(&code, &g)?;
        let m = code.metrics();
        let bound = rat(kappa * (n - kappa + 1), n);
        ensure(m.beta == int(kappa) && m.r <= bound, || {
            format!(
                "{name}: beta {} (kappa {kappa}), r {} vs {}",
                show(&m.beta),
                show(&m.r),
                show(&bound)
            )
        })?;
        seen.push(format!("{name} r={}", show(&m.r)));
    }
    Ok(seen.join(", "))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let rs = [int(1), rat(3, 2), int(2), int(3)];
    let kinds = [CatalogKind::PartialClique, CatalogKind::Cycle, CatalogKind::Minrank];
    let mut comparisons = 0;
    for k in 0..10 {
        let g = random_graph(&mut rng, 6, 0.45);
        for kind in kinds {
            let cat =
                ComponentCatalog::build(&g, kind, Field::BINARY, DEFAULT_MINRANK_BUDGET).map_err(|e| e.to_string())?;
            for r in &rs {
                let oracle = exhaustive_partition_oracle(&g, &cat, r).map_err(|e| e.to_string())?;
                let ilp = covering_ilp(&g, &cat, r).ok().map(|s| s.objective);
                let lp = covering_lp(&g, &cat, r).ok().map(|s| s.objective);
                let ctx = || format!("graph {k} {} {kind} r = {}", g.to_json(), show(r));
                ensure(ilp == oracle, || format!("{}: ilp {ilp:?} oracle {oracle:?}", ctx()))?;
                if let (Some(lp), Some(ilp)) = (&lp, &ilp) {
                    ensure(lp <= ilp, || format!("{}: lp {} > ilp {}", ctx(), show(lp), show(ilp)))?;
                } else {
                    ensure(lp.is_some() || ilp.is_none(), || {
                        format!("{}: lp infeasible, ilp feasible", ctx())
                    })?;
                }
                comparisons += 1;
            }
        }
    }
    Ok(format!("{comparisons} ILP/oracle/LP comparisons agree"))
}

fn criterion_7() -> Check {
    let g = SideInfoGraph::directed_cycle(3);
    let cat = ComponentCatalog::build(&g, CatalogKind::VectorCycle, Field::BINARY, DEFAULT_MINRANK_BUDGET)
        .map_err(|e| e.to_string())?;
    let cases = [
        (int(1), int(3)),
        (rat(9, 8), rat(21, 8)),
        (rat(7, 6), rat(5, 2)),
        (rat(5, 4), rat(9, 4)),
        (rat(4, 3), int(2)),
        (rat(3, 2), int(2)),
        (int(2), int(2)),
    ];
    for (r, want) in cases {
        let sol = covering_lp(&g, &cat, &r).map_err(|e| e.to_string())?;
        ensure(sol.objective == want, || {
            format!("r = {}: lp {} != {}", show(&r), show(&sol.objective), show(&want))
        })?;
        let code = materialize(&g, &cat, &sol).map_err(|e| e.to_string())?;
        verified(&code, &g)?;
        let m = code.metrics();
        let expected_r = if r <= rat(4, 3) { r.clone() } else { rat(4, 3) };
        ensure(m.beta == want && m.r == expected_r, || {
            format!("r = {}: measured beta {} r {}", show(&r), show(&m.beta), show(&m.r))
        })?;
    }
    Ok("LP = 6 - 3r up to 4/3 then 2, materialized codes verified".into())
}

fn criterion_8() -> Check {
    let g = SideInfoGraph::directed_cycle(3);
    for (radius, want) in [(1, 3), (2, 2)] {
        let code = separation_code(
            &g,
            Field::BINARY,
            radius,
            DEFAULT_MINRANK_BUDGET,
            DEFAULT_COVERING_BUDGET,
        )
        .map_err(|e| e.to_string())?;
        verified(&code, &g)?;
        let beta = code.metrics().beta;
        ensure(beta == int(want), || format!("radius {radius}: beta {}", show(&beta)))?;
    }
    for (codim, want) in [(2, 3), (3, 7)] {
        let cc = find_covering_code(Field::BINARY, codim, 1, DEFAULT_COVERING_BUDGET).map_err(|e| e.to_string())?;
        ensure(cc.n == want && sphere_covering_holds(2, codim, 1, cc.n), || {
            format!("codimension {codim}: n = {}", cc.n)
        })?;
    }
    Ok("radius 1 -> 3, radius 2 -> 2, n(1,2) = 3, n(1,3) = 7".into())
}

/// Every constructor that applies to `g`, with labels.
fn constructions(g: &SideInfoGraph, field: Field) -> (Vec<(String, LinearIndexCode)>, usize) {
    let mut attempts: Vec<(String, ldic::Result<LinearIndexCode>)> = Vec::new();
    let mut skipped = 0;
    let mut push = |label: String, code| attempts.push((label, code));
    push("coloring".into(), optimal_coloring_code(g, field).map(|(_, c)| c));
    if let Ok(mr) = minrank(g, field, DEFAULT_MINRANK_BUDGET) {
        let b = optimal_scalar_encoder(&mr.witness);
        push("scalar".into(), scalar_code(g, &b, &mr.witness, b.cols()));
        for t in 1..g.n() {
            if let Ok(cover) = t_subset_cover(g, t) {
                push(format!("ais t={t}"), ais_cover_code(g, &cover, &b, &mr.witness));
            }
        }
        if g.has_cyclic_automorphism() {
            push("cyclic".into(), cyclic_balanced_code(g, field, DEFAULT_MINRANK_BUDGET));
        }
        for radius in 1..mr.rank {
            push(
                format!("separation radius={radius}"),
                separation_code(g, field, radius, DEFAULT_MINRANK_BUDGET, DEFAULT_COVERING_BUDGET),
            );
        }
    } else {
        skipped += 1;
    }
    for kind in CatalogKind::ALL {
        let Ok(cat) = ComponentCatalog::build(g, kind, field, DEFAULT_MINRANK_BUDGET) else {
            skipped += 1;
            continue;
        };
        for r in [int(1), rat(3, 2), int(2)] {
            let sol = if kind.is_vector() {
                covering_lp(g, &cat, &r)
            } else {
                covering_ilp(g, &cat, &r)
            };
            let Ok(sol) = sol else {
                skipped += 1;
                continue;
            };
            let scaled: Vec<Rational> = sol
                .weights
                .iter()
                .map(|(i, w)| w / int(cat.components[*i].m as i64))
                .collect();
            if lcm_of_denominators(&scaled) > 360.into() {
                skipped += 1;
                continue;
            }
            push(format!("{kind} r={}", show(&r)), materialize(g, &cat, &sol));
        }
    }
    let mut out = Vec::new();
    for (label, code) in attempts {
        match code {
            Ok(c) => out.push((label, c)),
            Err(_) => skipped += 1,
        }
    }
    (out, skipped)
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut codes, mut exhaustive, mut skipped) = (0, 0, 0);
    for k in 0..50 {
        let q = if rng.gen_bool(0.5) { 2 } else { 3 };
        let field = Field::new(q).map_err(|e| e.to_string())?;
        let g = random_graph(&mut rng, 6, if q == 2 { 0.4 } else { 0.3 });
        let ctx = |s: String| format!("graph {k} q={q} {}: {s}", g.to_json());

        let (built, missed) = constructions(&g, field);
        skipped += missed;
        for (label, code) in &built {
            exhaustive += verified(code, &g).map_err(|e| ctx(format!("{label}: {e}")))? as usize;
            let m = code.metrics();
            ensure(m.r >= int(1) && m.r <= m.beta, || {
                ctx(format!("{label}: r {} beta {}", show(&m.r), show(&m.beta)))
            })?;
            codes += 1;
        }

        let grid = Grid::new(int(1), int(3), rat(1, 4)).map_err(|e| e.to_string())?;
        let curve = tradeoff_curve(&g, field, &grid, &Budgets::default()).map_err(|e| ctx(e.to_string()))?;
        ensure(curve.upper.is_convex() && curve.upper.is_non_increasing(), || {
            ctx("envelope is not convex and non-increasing".into())
        })?;
        for r in &curve.grid {
            let (upper, lower) = (curve.upper.eval(r), curve.lower.eval(r));
            ensure(matches!((&upper, &lower), (Some(u), Some(l)) if u >= l), || {
                ctx(format!("r = {}: upper {upper:?} below lower {lower:?}", show(r)))
            })?;
        }
    }
    Ok(format!(
        "{codes} codes verified ({exhaustive} also exhaustively), {skipped} constructions not applicable or over budget"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("3-cycle trade-off", Duration::from_secs(5), criterion_1),
        ("fractional coloring at r = 1", Duration::from_secs(10), criterion_2),
        ("minrank", Duration::from_secs(30), criterion_3),
        ("AIS covers", Duration::from_secs(10), criterion_4),
        ("cyclic-balanced", Duration::from_secs(60), criterion_5),
        ("covering ILP vs oracle", Duration::from_secs(120), criterion_6),
        ("covering LP on the 3-cycle", Duration::from_secs(10), criterion_7),
        ("separation", Duration::from_secs(30), criterion_8),
        ("property suite", Duration::from_secs(300), criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let timing = format!("{:.2}s, limit {}s", took.as_secs_f64(), limit.as_secs());
        match result {
            Ok(detail) if took <= limit => println!("[PASS] {} {name}: {detail} ({timing})", k + 1),
            Ok(detail) => {
                failed += 1;
                println!("[FAIL] {} {name}: too slow; {detail} ({timing})", k + 1);
            }
            Err(why) => {
                failed += 1;
                println!("[FAIL] {} {name}: {why} ({timing})", k + 1);
            }
        }
    }
    if failed == 0 {
        println!("all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failed} of 9 criteria failed");
        ExitCode::FAILURE
    }
}
