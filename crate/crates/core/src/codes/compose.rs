use super::{Decoder, LinearIndexCode};
use crate::error::{Error, Result};
use crate::field_linalg::GfMatrix;
use crate::graph::SideInfoGraph;

/// A code for the subgraph induced on `vertices` (sorted, 0-indexed in the
/// parent graph), used `multiplicity` times.
#[derive(Clone, Copy, Debug)]
pub struct Part<'a> {
    pub code: &'a LinearIndexCode,
    pub vertices: &'a [usize],
    pub multiplicity: usize,
}

/// Stitches subgraph codes into one code for `g` with disjoint codeword
/// blocks. Every receiver must end up with the same total message length.
///
/// Instances are laid out part by part and copy by copy; each receiver's
/// message symbols are allocated in that same order.
pub fn compose(g: &SideInfoGraph, parts: &[Part<'_>], provenance: impl Into<String>) -> Result<LinearIndexCode> {
    let n = g.n();
    let parts: Vec<&Part> = parts.iter().filter(|p| p.multiplicity > 0).collect();
    let Some(first) = parts.first() else {
        return Err(Error::InvalidCode("nothing to compose".into()));
    };
    let field = first.code.field();

    let mut totals = vec![0usize; n];
    for p in &parts {
        if p.code.field() != field {
            return Err(Error::DimensionMismatch("parts use different fields".into()));
        }
        if p.code.n() != p.vertices.len() {
            return Err(Error::DimensionMismatch(format!(
                "part code has {} receivers but covers {} vertices",
                p.code.n(),
                p.vertices.len()
            )));
        }
        if p.vertices.windows(2).any(|w| w[0] >= w[1]) || p.vertices.iter().any(|&v| v >= n) {
            return Err(Error::InvalidCode(
                "part vertices must be sorted, distinct and in range".into(),
            ));
        }
        for &v in p.vertices {
            totals[v] += p.multiplicity * p.code.m();
        }
    }
    let m = totals[0];
    if let Some(v) = totals.iter().position(|&t| t != m) {
        return Err(Error::InvalidCode(format!(
            "unequal message totals: receiver 1 gets {m}, receiver {} gets {}",
            v + 1,
            totals[v]
        )));
    }

    let len: usize = parts.iter().map(|p| p.multiplicity * p.code.len()).sum();
    let mut encoder = GfMatrix::zeros(field, n * m, len);
    let known: Vec<Vec<usize>> = (0..n).map(|i| g.known(i)).collect();

    // Gather, per receiver, (codeword offset, query set, local decoder, local
    // side info, message offset) for every instance it takes part in.
    struct Piece<'c> {
        local: usize,
        code: &'c LinearIndexCode,
        col_off: usize,
        msg_off: Vec<usize>,
        vertices: &'c [usize],
    }
    let mut pieces: Vec<Vec<Piece>> = (0..n).map(|_| Vec::new()).collect();
    let mut msg_next = vec![0usize; n];
    let mut col_off = 0;
    for p in &parts {
        let mp = p.code.m();
        for _ in 0..p.multiplicity {
            let msg_off: Vec<usize> = p.vertices.iter().map(|&v| msg_next[v]).collect();
            for (lv, &v) in p.vertices.iter().enumerate() {
                for s in 0..mp {
                    let row = v * m + msg_off[lv] + s;
                    for c in 0..p.code.len() {
                        encoder.set(row, col_off + c, p.code.encoder().get(lv * mp + s, c));
                    }
                }
            }
            for (lv, &v) in p.vertices.iter().enumerate() {
                pieces[v].push(Piece {
                    local: lv,
                    code: p.code,
                    col_off,
                    msg_off: msg_off.clone(),
                    vertices: p.vertices,
                });
                msg_next[v] += mp;
            }
            col_off += p.code.len();
        }
    }

    let mut queries = Vec::with_capacity(n);
    let mut decoders = Vec::with_capacity(n);
    for i in 0..n {
        let q_len: usize = pieces[i].iter().map(|pc| pc.code.query(pc.local).len()).sum();
        let mut query = Vec::with_capacity(q_len);
        let mut query_map = GfMatrix::zeros(field, q_len, m);
        let mut side_map = GfMatrix::zeros(field, m * known[i].len(), m);
        let mut row_off = 0;
        for pc in &pieces[i] {
            let mp = pc.code.m();
            let out_col = pc.msg_off[pc.local];
            let dec = &pc.code.decoders()[pc.local];
            let local_query = pc.code.query(pc.local);
            for (r, &t) in local_query.iter().enumerate() {
                query.push(pc.col_off + t);
                for k in 0..mp {
                    query_map.set(row_off + r, out_col + k, dec.query_map.get(r, k));
                }
            }
            row_off += local_query.len();

            // local side information is K_i restricted to the part
            let local_known: Vec<usize> = (0..pc.vertices.len())
                .filter(|&lj| known[i].binary_search(&pc.vertices[lj]).is_ok())
                .collect();
            if dec.side_map.rows() != mp * local_known.len() {
                return Err(Error::InvalidCode(format!(
                    "part decoder for receiver {} expects different side information",
                    i + 1
                )));
            }
            for (t, &lj) in local_known.iter().enumerate() {
                let j = pc.vertices[lj];
                let pos = known[i].binary_search(&j).expect("known");
                for s in 0..mp {
                    let global_row = pos * m + pc.msg_off[lj] + s;
                    for k in 0..mp {
                        side_map.set(global_row, out_col + k, dec.side_map.get(t * mp + s, k));
                    }
                }
            }
        }
        // codeword blocks are disjoint and laid out in order, so `query` is sorted
        queries.push(query);
        decoders.push(Decoder { query_map, side_map });
    }
    LinearIndexCode::new(field, n, m, encoder, queries, decoders, provenance)
}

/// Time-sharing of codes that all serve the full graph.
pub fn time_share(g: &SideInfoGraph, parts: &[(&LinearIndexCode, usize)]) -> Result<LinearIndexCode> {
    let all: Vec<usize> = (0..g.n()).collect();
    for (code, _) in parts {
        if code.n() != g.n() {
            return Err(Error::DimensionMismatch(format!(
                "part has {} receivers, graph has {}",
                code.n(),
                g.n()
            )));
        }
    }
    if parts.len() == 1 && parts[0].1 == 1 {
        return Ok(parts[0].0.clone());
    }
    let provenance = format!(
        "time-share({})",
        parts
            .iter()
            .map(|(c, k)| format!("{}x{}", k, c.provenance()))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let parts: Vec<Part> = parts
        .iter()
        .map(|&(code, multiplicity)| Part {
            code,
            vertices: &all,
            multiplicity,
        })
        .collect();
    compose(g, &parts, provenance)
}

/// `copies` independent uses of the same code.
pub fn repeat(g: &SideInfoGraph, code: &LinearIndexCode, copies: usize) -> Result<LinearIndexCode> {
    time_share(g, &[(code, copies)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{scalar_code, uncoded, verify_code, VerifyOptions};
    use crate::field_linalg::Field;
    use crate::minrank::{minrank, optimal_scalar_encoder, DEFAULT_MINRANK_BUDGET};
    use crate::rational::{int, rat};

    fn scalar(g: &SideInfoGraph) -> LinearIndexCode {
        let mr = minrank(g, Field::BINARY, DEFAULT_MINRANK_BUDGET).unwrap();
        let b = optimal_scalar_encoder(&mr.witness);
        scalar_code(g, &b, &mr.witness, b.cols()).unwrap()
    }

    #[test]
    fn single_part_is_identity() {
        let g = SideInfoGraph::directed_cycle(3);
        let c = scalar(&g);
        assert_eq!(time_share(&g, &[(&c, 1)]).unwrap(), c);
    }

    #[test]
    fn copies_keep_metrics() {
        let g = SideInfoGraph::directed_cycle(4);
        let c = scalar(&g);
        let r = repeat(&g, &c, 3).unwrap();
        assert_eq!(r.m(), 3);
        assert_eq!(r.metrics().beta, c.metrics().beta);
        assert_eq!(r.metrics().r, c.metrics().r);
        assert!(verify_code(&r, &g, &VerifyOptions::default()).unwrap().is_valid());
    }

    #[test]
    fn mixing_scalar_and_uncoded() {
        let g = SideInfoGraph::directed_cycle(3);
        let s = scalar(&g);
        let u = uncoded(&g, Field::BINARY, 1);
        let t = time_share(&g, &[(&u, 1), (&s, 1)]).unwrap();
        assert_eq!(t.m(), 2);
        assert_eq!(t.metrics().beta, rat(5, 2));
        // receiver 3 reads one uncoded symbol and two scalar symbols
        assert_eq!(t.metrics().r, rat(3, 2));
        assert!(verify_code(&t, &g, &VerifyOptions::default()).unwrap().is_valid());
        assert!(t.metrics().r <= (int(1) + s.metrics().r) * rat(1, 2));
    }

    #[test]
    fn unequal_totals_rejected() {
        let g = SideInfoGraph::directed_cycle(3);
        let u = uncoded(&g, Field::BINARY, 1);
        let all = [0usize, 1, 2];
        let one = [0usize];
        let lone = uncoded(&SideInfoGraph::edgeless(1), Field::BINARY, 1);
        let parts = [
            Part {
                code: &u,
                vertices: &all,
                multiplicity: 1,
            },
            Part {
                code: &lone,
                vertices: &one,
                multiplicity: 1,
            },
        ];
        assert!(compose(&g, &parts, "x").is_err());
    }

    #[test]
    fn disjoint_parts_cover() {
        // two halves of an edgeless graph coded separately
        let g = SideInfoGraph::edgeless(4);
        let half = uncoded(&SideInfoGraph::edgeless(2), Field::BINARY, 1);
        let (a, b) = ([0usize, 2], [1usize, 3]);
        let parts = [
            Part {
                code: &half,
                vertices: &a,
                multiplicity: 2,
            },
            Part {
                code: &half,
                vertices: &b,
                multiplicity: 2,
            },
        ];
        let c = compose(&g, &parts, "halves").unwrap();
        assert_eq!((c.m(), c.len()), (2, 8));
        assert!(verify_code(&c, &g, &VerifyOptions::default()).unwrap().is_valid());
    }
}
