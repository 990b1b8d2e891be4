//! Achievable (locality, rate) points, their convex envelope, and lower bounds.

use std::fmt;

use num::integer::binomial;
use rayon::prelude::*;

use crate::codes::{scalar_code, verify_code, LinearIndexCode, VerifyOptions};
use crate::coloring::{fractional_chromatic, optimal_coloring_code, COLORING_LIMIT};
use crate::covering::{covering_ilp, covering_lp, materialize, CatalogKind, ComponentCatalog, CATALOG_LIMIT};
use crate::error::{Error, Result};
use crate::field_linalg::Field;
use crate::graph::SideInfoGraph;
use crate::minrank::{minrank, optimal_scalar_encoder, DEFAULT_MINRANK_BUDGET};
use crate::rational::{format_rational, int, parse_rational, rat, Rational};
use crate::schemes::{ais_cover_code, cyclic_balanced_code, separation_code, t_subset_cover, DEFAULT_COVERING_BUDGET};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TradeoffPoint {
    pub r: Rational,
    pub beta: Rational,
    pub provenance: String,
}

impl TradeoffPoint {
    pub fn new(r: Rational, beta: Rational, provenance: impl Into<String>) -> Self {
        TradeoffPoint {
            r,
            beta,
            provenance: provenance.into(),
        }
    }
}

impl fmt::Display for TradeoffPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}) {}",
            format_rational(&self.r),
            format_rational(&self.beta),
            self.provenance
        )
    }
}

/// Limits for the exhaustive searches run while collecting points.
#[derive(Clone, Copy, Debug)]
pub struct Budgets {
    pub minrank: u128,
    pub covering: u128,
    /// Largest AIS cover (number of subsets) that is materialized.
    pub max_cover_subsets: u128,
    /// Largest message length of a time-shared covering code that is materialized.
    pub max_message_length: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            minrank: DEFAULT_MINRANK_BUDGET,
            covering: DEFAULT_COVERING_BUDGET,
            max_cover_subsets: 256,
            max_message_length: 360,
        }
    }
}

/// Evenly spaced localities `lo, lo + step, ..., <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub lo: Rational,
    pub hi: Rational,
    pub step: Rational,
}

impl Grid {
    pub fn new(lo: Rational, hi: Rational, step: Rational) -> Result<Self> {
        if lo < int(1) {
            return Err(Error::LocalityBelowOne(format_rational(&lo)));
        }
        if hi < lo || step <= int(0) {
            return Err(Error::Parse(format!(
                "grid needs lo <= hi and step > 0, got {}:{}:{}",
                format_rational(&lo),
                format_rational(&hi),
                format_rational(&step)
            )));
        }
        Ok(Grid { lo, hi, step })
    }

    /// Parses `lo:hi:step`, each part a rational such as `7/6`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(Error::Parse(format!("grid must be lo:hi:step, got {text:?}")));
        };
        Self::new(parse_rational(lo)?, parse_rational(hi)?, parse_rational(step)?)
    }

    pub fn points(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut r = self.lo.clone();
        while r <= self.hi {
            out.push(r.clone());
            r += self.step.clone();
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct Achievable {
    pub points: Vec<TradeoffPoint>,
    /// One line per scheme that was not run or whose code was rejected.
    pub skipped: Vec<String>,
}

/// Runs every scheme that applies to `g`, verifies each code, and returns
/// the measured points.
pub fn achievable_points(g: &SideInfoGraph, field: Field, grid: &[Rational], budgets: &Budgets) -> Result<Achievable> {
    let n = g.n();
    let mut out = Achievable::default();
    let mut attempts: Vec<(String, Result<LinearIndexCode>)> = Vec::new();

    if n <= COLORING_LIMIT {
        attempts.push((
            "fractional-coloring".into(),
            optimal_coloring_code(g, field).map(|(_, c)| c),
        ));
    } else {
        out.skipped
            .push(format!("fractional-coloring: {n} vertices exceed {COLORING_LIMIT}"));
    }

    match minrank(g, field, budgets.minrank) {
        Ok(mr) => {
            let b = optimal_scalar_encoder(&mr.witness);
            attempts.push(("scalar-minrank".into(), scalar_code(g, &b, &mr.witness, b.cols())));
            let max_t = g.girth().map_or(n, |girth| (girth - 1).min(n));
            for t in 1..=max_t {
                let subsets = binomial(n as u128, t as u128);
                if subsets > budgets.max_cover_subsets {
                    out.skipped.push(format!(
                        "ais t={t}: {subsets} subsets exceed {}",
                        budgets.max_cover_subsets
                    ));
                    continue;
                }
                let code = t_subset_cover(g, t).and_then(|cover| ais_cover_code(g, &cover, &b, &mr.witness));
                attempts.push((
                    format!("ais t={t}"),
                    code.map(|c| c.with_provenance(format!("ais(t={t})"))),
                ));
            }
            if g.has_cyclic_automorphism() {
                attempts.push((
                    "cyclic-balanced".into(),
                    cyclic_balanced_code(g, field, budgets.minrank),
                ));
            } else {
                out.skipped
                    .push("cyclic-balanced: i -> i + 1 is not an automorphism".into());
            }
            for radius in 1..mr.rank {
                attempts.push((
                    format!("separation radius={radius}"),
                    separation_code(g, field, radius, budgets.minrank, budgets.covering),
                ));
            }
        }
        Err(e) => out.skipped.push(format!("minrank-based schemes: {e}")),
    }

    if n <= CATALOG_LIMIT {
        let kinds = [
            (CatalogKind::Minrank, false),
            (CatalogKind::Cycle, false),
            (CatalogKind::PartialClique, false),
            (CatalogKind::VectorMinrank, true),
            (CatalogKind::VectorCycle, true),
            (CatalogKind::VectorPartialClique, true),
        ];
        for (kind, fractional) in kinds {
            let catalog = match ComponentCatalog::build(g, kind, field, budgets.minrank) {
                Ok(c) => c,
                Err(e) => {
                    out.skipped.push(format!("{kind} catalog: {e}"));
                    continue;
                }
            };
            if catalog.field != field {
                out.skipped.push(format!(
                    "{kind} catalog: needs F_{}, points must use F_{}",
                    catalog.field.order(),
                    field.order()
                ));
                continue;
            }
            let sweep: Vec<(String, Result<LinearIndexCode>)> = grid
                .par_iter()
                .map(|r| {
                    let label = format!(
                        "{kind} {} at r={}",
                        if fractional { "lp" } else { "ilp" },
                        format_rational(r)
                    );
                    let solved = if fractional {
                        covering_lp(g, &catalog, r)
                    } else {
                        covering_ilp(g, &catalog, r)
                    };
                    let code = solved.and_then(|sol| {
                        let m = message_length(&catalog, &sol);
                        if m.is_none_or(|m| m > budgets.max_message_length) {
                            return Err(Error::BudgetExceeded {
                                what: "time-shared message length",
                                needed: m.map_or(u128::MAX, |m| m as u128),
                                budget: budgets.max_message_length as u128,
                            });
                        }
                        materialize(g, &catalog, &sol)
                    });
                    (label, code)
                })
                .collect();
            attempts.extend(sweep);
        }
    } else {
        out.skipped
            .push(format!("covering programs: {n} vertices exceed {CATALOG_LIMIT}"));
    }

    let checked: Vec<std::result::Result<TradeoffPoint, String>> = attempts
        .into_par_iter()
        .map(|(label, code)| {
            let code = code.map_err(|e| format!("{label}: {e}"))?;
            let report = verify_code(&code, g, &VerifyOptions::default()).map_err(|e| format!("{label}: {e}"))?;
            if let Some(c) = report.failure() {
                return Err(format!("{label}: code rejected by verifier: {c}"));
            }
            let m = code.metrics();
            Ok(TradeoffPoint::new(m.r, m.beta, code.provenance()))
        })
        .collect();
    for c in checked {
        match c {
            Ok(p) => out.points.push(p),
            Err(s) => out.skipped.push(s),
        }
    }
    out.points = dedup_points(out.points);
    Ok(out)
}

fn message_length(catalog: &ComponentCatalog, sol: &crate::covering::CoverSolution) -> Option<usize> {
    use num::ToPrimitive;
    let scaled: Vec<Rational> = sol
        .weights
        .iter()
        .map(|(i, w)| w.clone() / int(catalog.components[*i].m as i64))
        .collect();
    crate::rational::lcm_of_denominators(&scaled).to_usize()
}

/// One point per `(r, beta)`, keeping the lexicographically smallest
/// provenance; sorted by `(r, beta)`.
pub fn dedup_points(mut points: Vec<TradeoffPoint>) -> Vec<TradeoffPoint> {
    points.sort();
    points.dedup_by(|later, earlier| later.r == earlier.r && later.beta == earlier.beta);
    points
}

/// Piecewise-linear function through `breakpoints` (sorted by `r`), constant
/// after the last one and undefined before the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinear {
    pub breakpoints: Vec<TradeoffPoint>,
}

impl PiecewiseLinear {
    pub fn eval(&self, r: &Rational) -> Option<Rational> {
        self.segment(r).map(|(v, _)| v)
    }

    /// Value at `r` and the provenance of the breakpoint(s) it comes from.
    pub fn segment(&self, r: &Rational) -> Option<(Rational, String)> {
        let bp = &self.breakpoints;
        let first = bp.first()?;
        if *r < first.r {
            return None;
        }
        for w in bp.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if *r == a.r {
                return Some((a.beta.clone(), a.provenance.clone()));
            }
            if *r < b.r {
                let t = (r - &a.r) / (&b.r - &a.r);
                let v = &a.beta + (&b.beta - &a.beta) * t;
                return Some((v, format!("time-share({} ; {})", a.provenance, b.provenance)));
            }
        }
        let last = bp.last().expect("nonempty");
        Some((last.beta.clone(), last.provenance.clone()))
    }

    pub fn is_non_increasing(&self) -> bool {
        self.breakpoints.windows(2).all(|w| w[1].beta <= w[0].beta)
    }

    pub fn is_convex(&self) -> bool {
        self.breakpoints.windows(3).all(|w| {
            let s1 = (&w[1].beta - &w[0].beta) / (&w[1].r - &w[0].r);
            let s2 = (&w[2].beta - &w[1].beta) / (&w[2].r - &w[1].r);
            s2 >= s1
        })
    }
}

/// Lower convex envelope of the points from the smallest locality to the
/// smallest rate, then flat.
pub fn upper_envelope(points: &[TradeoffPoint]) -> Result<PiecewiseLinear> {
    if points.is_empty() {
        return Err(Error::Precondition("no achievable points".into()));
    }
    let mut pts = dedup_points(points.to_vec());
    // best rate at each locality
    pts.dedup_by(|later, earlier| later.r == earlier.r);

    let cross = |o: &TradeoffPoint, a: &TradeoffPoint, b: &TradeoffPoint| {
        (&a.r - &o.r) * (&b.beta - &o.beta) - (&a.beta - &o.beta) * (&b.r - &o.r)
    };
    let mut hull: Vec<TradeoffPoint> = Vec::new();
    for p in pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= int(0) {
            hull.pop();
        }
        hull.push(p);
    }
    let min_beta = hull.iter().map(|p| p.beta.clone()).min().expect("nonempty");
    let cut = hull.iter().position(|p| p.beta == min_beta).expect("present");
    hull.truncate(cut + 1);
    Ok(PiecewiseLinear { breakpoints: hull })
}

/// `max(6 - 3r, 2)`, the exact trade-off of the directed 3-cycle.
pub fn three_cycle_beta(r: &Rational) -> Result<Rational> {
    if *r < int(1) {
        return Err(Error::LocalityBelowOne(format_rational(r)));
    }
    Ok(std::cmp::max(int(6) - int(3) * r.clone(), int(2)))
}

/// Pointwise maximum of the available lower bounds on the optimal rate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    /// Size of a maximum acyclic induced subgraph; bounds the rate at every locality.
    pub mais: usize,
    /// Fractional chromatic number of the interference graph; the exact rate at locality one.
    pub chi_f: Option<Rational>,
    pub three_cycle: bool,
}

impl LowerBound {
    pub fn eval(&self, r: &Rational) -> Option<Rational> {
        self.eval_with_source(r).map(|(v, _)| v)
    }

    pub fn eval_with_source(&self, r: &Rational) -> Option<(Rational, &'static str)> {
        if *r < int(1) {
            return None;
        }
        let mut best = (int(self.mais as i64), "mais");
        if *r == int(1) {
            if let Some(chi) = &self.chi_f {
                if *chi > best.0 {
                    best = (chi.clone(), "chi_f at r=1");
                }
            }
        }
        if self.three_cycle {
            let v = three_cycle_beta(r).expect("r >= 1");
            if v > best.0 {
                best = (v, "three-cycle");
            }
        }
        Some(best)
    }
}

pub fn lower_bound_curve(g: &SideInfoGraph) -> Result<LowerBound> {
    let (mais, _) = g.max_acyclic_induced_subgraph()?;
    let chi_f = if g.n() <= COLORING_LIMIT {
        Some(fractional_chromatic(&g.interference_graph())?.0)
    } else {
        None
    };
    Ok(LowerBound {
        mais,
        chi_f,
        three_cycle: g.is_three_cycle(),
    })
}

#[derive(Clone, Debug)]
pub struct TradeoffCurve {
    pub points: Vec<TradeoffPoint>,
    pub skipped: Vec<String>,
    pub upper: PiecewiseLinear,
    pub lower: LowerBound,
    pub grid: Vec<Rational>,
}

pub fn tradeoff_curve(g: &SideInfoGraph, field: Field, grid: &Grid, budgets: &Budgets) -> Result<TradeoffCurve> {
    let grid = grid.points();
    let achievable = achievable_points(g, field, &grid, budgets)?;
    let upper = upper_envelope(&achievable.points)?;
    let lower = lower_bound_curve(g)?;
    Ok(TradeoffCurve {
        points: achievable.points,
        skipped: achievable.skipped,
        upper,
        lower,
        grid,
    })
}

impl TradeoffCurve {
    /// Rows `r,beta,kind,provenance`: every raw point, then the upper and
    /// lower curves at each grid locality.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["r", "beta", "kind", "provenance"]).map_err(csv_err)?;
        for p in &self.points {
            w.write_record([
                format_rational(&p.r),
                format_rational(&p.beta),
                "point".into(),
                p.provenance.clone(),
            ])
            .map_err(csv_err)?;
        }
        for r in &self.grid {
            if let Some((v, src)) = self.upper.segment(r) {
                w.write_record([format_rational(r), format_rational(&v), "upper".into(), src])
                    .map_err(csv_err)?;
            }
        }
        for r in &self.grid {
            if let Some((v, src)) = self.lower.eval_with_source(r) {
                w.write_record([format_rational(r), format_rational(&v), "lower".into(), src.into()])
                    .map_err(csv_err)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Grid of `count` evenly spaced localities from `lo` to `hi` inclusive.
pub fn even_grid(lo: Rational, hi: Rational, count: usize) -> Result<Grid> {
    let step = if count <= 1 {
        int(1)
    } else {
        (hi.clone() - lo.clone()) / rat(count as i64 - 1, 1)
    };
    Grid::new(lo, hi, step)
}
