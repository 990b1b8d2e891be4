use ldic::codes::{repeat, time_share, uncoded, verify_code, LinearIndexCode, VerifyOptions};
use ldic::coloring::optimal_coloring_code;
use ldic::covering::{covering_lp, materialize, CatalogKind, ComponentCatalog};
use ldic::field_linalg::Field;
use ldic::graph::SideInfoGraph;
use ldic::minrank::{minrank, optimal_scalar_encoder, DEFAULT_MINRANK_BUDGET};
use ldic::rational::{int, rat};
use ldic::schemes::{ais_cover_code, cyclic_balanced_code, separation_code, t_subset_cover, DEFAULT_COVERING_BUDGET};

fn ais(g: &SideInfoGraph, t: usize) -> LinearIndexCode {
    let mr = minrank(g, Field::BINARY, DEFAULT_MINRANK_BUDGET).unwrap();
    let b = optimal_scalar_encoder(&mr.witness);
    ais_cover_code(g, &t_subset_cover(g, t).unwrap(), &b, &mr.witness).unwrap()
}

fn valid(code: &LinearIndexCode, g: &SideInfoGraph) -> bool {
    verify_code(code, g, &VerifyOptions::default()).unwrap().is_valid()
}

#[test]
fn uncoded_and_ais_time_share_to_the_midpoint() {
    let g = SideInfoGraph::directed_cycle(3);
    let plain = uncoded(&g, Field::BINARY, 1);
    let coded = ais(&g, 2);
    assert_eq!(coded.m(), 3);

    let mixed = time_share(&g, &[(&plain, 3), (&coded, 1)]).unwrap();
    assert_eq!((mixed.m(), mixed.len()), (6, 15));
    let m = mixed.metrics();
    assert_eq!(m.beta, rat(5, 2));
    assert!(m.r <= rat(7, 6));
    assert!(valid(&mixed, &g));
}

#[test]
fn time_share_weights_by_message_length() {
    // one symbol uncoded plus three symbols through AIS: (3 + 6) / 4
    let g = SideInfoGraph::directed_cycle(3);
    let plain = uncoded(&g, Field::BINARY, 1);
    let coded = ais(&g, 2);
    let mixed = time_share(&g, &[(&plain, 1), (&coded, 1)]).unwrap();
    assert_eq!(mixed.m(), 4);
    assert_eq!(mixed.metrics().beta, rat(9, 4));
    assert!(valid(&mixed, &g));
}

#[test]
fn repeat_keeps_the_operating_point() {
    let g = SideInfoGraph::directed_cycle(3);
    let code = ais(&g, 1);
    let twice = repeat(&g, &code, 2).unwrap();
    assert_eq!(twice.m(), 2 * code.m());
    assert_eq!(twice.metrics().beta, code.metrics().beta);
    assert_eq!(twice.metrics().r, code.metrics().r);
    assert!(valid(&twice, &g));
}

#[test]
fn json_round_trip_for_every_scheme() {
    let g = SideInfoGraph::directed_cycle(4);
    let f = Field::BINARY;
    let cat = ComponentCatalog::build(&g, CatalogKind::VectorCycle, f, DEFAULT_MINRANK_BUDGET).unwrap();
    let codes = vec![
        optimal_coloring_code(&g, f).unwrap().1,
        ais(&g, 1),
        ais(&g, 3),
        cyclic_balanced_code(&g, f, DEFAULT_MINRANK_BUDGET).unwrap(),
        separation_code(&g, f, 1, DEFAULT_MINRANK_BUDGET, DEFAULT_COVERING_BUDGET).unwrap(),
        materialize(&g, &cat, &covering_lp(&g, &cat, &rat(5, 4)).unwrap()).unwrap(),
    ];
    for code in codes {
        let text = code.to_json();
        let back = LinearIndexCode::from_json(&text).unwrap();
        assert_eq!(back, code, "{}", code.provenance());
        assert_eq!(back.to_json(), text);
        assert!(valid(&back, &g), "{}", code.provenance());
    }
}

#[test]
fn code_json_is_strict() {
    let g = SideInfoGraph::directed_cycle(3);
    let text = ais(&g, 2).to_json();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();

    let mut extra = doc.clone();
    extra["surprise"] = serde_json::json!(1);
    assert!(LinearIndexCode::from_json(&extra.to_string()).is_err());

    let mut zero = doc.clone();
    zero["queries"][0][0] = serde_json::json!(0);
    assert!(LinearIndexCode::from_json(&zero.to_string()).is_err());

    let mut big = doc.clone();
    big["encoder"][0][0] = serde_json::json!(2);
    assert!(LinearIndexCode::from_json(&big.to_string()).is_err());

    let mut composite = doc;
    composite["q"] = serde_json::json!(4);
    assert!(LinearIndexCode::from_json(&composite.to_string()).is_err());
}

#[test]
fn graph_json_round_trip_and_validation() {
    for g in [
        SideInfoGraph::directed_cycle(5),
        SideInfoGraph::circulant(6, &[1, 2]),
        SideInfoGraph::edgeless(3),
    ] {
        assert_eq!(SideInfoGraph::from_json(&g.to_json()).unwrap(), g);
    }
    assert!(SideInfoGraph::from_json(r#"{"n":2,"side_info":[[2]]}"#).is_err());
    assert!(SideInfoGraph::from_json(r#"{"n":2,"side_info":[[3],[]]}"#).is_err());
    assert!(SideInfoGraph::from_json(r#"{"n":2,"side_info":[[1],[]]}"#).is_err());
}

#[test]
fn ternary_codes_verify() {
    let g = SideInfoGraph::directed_cycle(3);
    let f = Field::new(3).unwrap();
    let code = cyclic_balanced_code(&g, f, DEFAULT_MINRANK_BUDGET).unwrap();
    assert_eq!(code.metrics().beta, int(2));
    assert!(valid(&code, &g));
    let (chi, col) = optimal_coloring_code(&SideInfoGraph::undirected_cycle(5), f).unwrap();
    assert_eq!(chi, rat(5, 2));
    assert!(valid(&col, &SideInfoGraph::undirected_cycle(5)));
}
