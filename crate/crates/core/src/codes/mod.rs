//! Materialized linear index codes: storage, metrics, serialization,
//! verification and composition.

mod compose;
mod scalar;
mod verify;

pub use compose::{compose, repeat, time_share, Part};
pub use scalar::{scalar_code, scalar_code_from_encoder};
pub use verify::{verify_code, Backend, Counterexample, VerifyOptions, VerifyReport, DEFAULT_EXHAUSTIVE_LIMIT};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_linalg::{Field, GfMatrix};
use crate::graph::SideInfoGraph;
use crate::rational::{format_rational, rat, Rational};

/// Linear decoder for one receiver:
/// `x_i = c[R_i] * query_map + x[K_i] * side_map`.
///
/// `query_map` is `|R_i| x m`. `side_map` is `(m |K_i|) x m`, its rows
/// ordered by known message (ascending) and then by symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoder {
    pub query_map: GfMatrix,
    pub side_map: GfMatrix,
}

/// A vector-linear index code with explicit encoder.
///
/// Messages are concatenated as `x = (x_1, ..., x_N)`, with symbol `k` of
/// receiver `i` at row `i*m + k` of the `(mN) x len` encoder. The codeword is
/// `c = x * encoder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearIndexCode {
    field: Field,
    n: usize,
    m: usize,
    encoder: GfMatrix,
    queries: Vec<Vec<usize>>,
    decoders: Vec<Decoder>,
    provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeMetrics {
    pub beta: Rational,
    pub r: Rational,
    pub per_receiver: Vec<Rational>,
}

impl std::fmt::Display for CodeMetrics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "beta = {}, r = {}",
            format_rational(&self.beta),
            format_rational(&self.r)
        )
    }
}

impl LinearIndexCode {
    pub fn new(
        field: Field,
        n: usize,
        m: usize,
        encoder: GfMatrix,
        queries: Vec<Vec<usize>>,
        decoders: Vec<Decoder>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidCode(msg));
        if n == 0 || m == 0 {
            return bad(format!("need n >= 1 and m >= 1, got n = {n}, m = {m}"));
        }
        if encoder.field() != field {
            return bad("encoder field differs from code field".into());
        }
        if encoder.rows() != n * m {
            return bad(format!("encoder has {} rows, expected {}", encoder.rows(), n * m));
        }
        if queries.len() != n || decoders.len() != n {
            return bad(format!(
                "expected {n} query sets and decoders, got {} and {}",
                queries.len(),
                decoders.len()
            ));
        }
        let len = encoder.cols();
        let mut covered = vec![false; len];
        for (i, (r, d)) in queries.iter().zip(&decoders).enumerate() {
            if r.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("query set of receiver {} is not strictly increasing", i + 1));
            }
            for &t in r {
                if t >= len {
                    return bad(format!("receiver {} queries symbol {} of {len}", i + 1, t + 1));
                }
                covered[t] = true;
            }
            if d.query_map.field() != field || d.side_map.field() != field {
                return bad(format!("decoder {} uses a different field", i + 1));
            }
            if d.query_map.rows() != r.len() || d.query_map.cols() != m {
                return bad(format!(
                    "decoder {} query map is {}x{}, expected {}x{m}",
                    i + 1,
                    d.query_map.rows(),
                    d.query_map.cols(),
                    r.len()
                ));
            }
            if d.side_map.cols() != m || d.side_map.rows() % m != 0 {
                return bad(format!(
                    "decoder {} side map is {}x{}",
                    i + 1,
                    d.side_map.rows(),
                    d.side_map.cols()
                ));
            }
        }
        if let Some(t) = covered.iter().position(|&c| !c) {
            return bad(format!("codeword symbol {} is never queried", t + 1));
        }
        Ok(LinearIndexCode {
            field,
            n,
            m,
            encoder,
            queries,
            decoders,
            provenance: provenance.into(),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Codeword length `ℓ`.
    pub fn len(&self) -> usize {
        self.encoder.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn encoder(&self) -> &GfMatrix {
        &self.encoder
    }

    pub fn queries(&self) -> &[Vec<usize>] {
        &self.queries
    }

    pub fn query(&self, i: usize) -> &[usize] {
        &self.queries[i]
    }

    pub fn decoders(&self) -> &[Decoder] {
        &self.decoders
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Replaces the query set of receiver `i`, dropping the matching decoder
    /// rows. Intended for building deliberately broken codes in tests and demos.
    pub fn with_truncated_query(&self, i: usize, keep: usize) -> Result<Self> {
        let mut out = self.clone();
        let keep = keep.min(out.queries[i].len());
        out.queries[i].truncate(keep);
        let rows: Vec<usize> = (0..keep).collect();
        out.decoders[i].query_map = out.decoders[i].query_map.select_rows(&rows);
        Self::new(
            out.field,
            out.n,
            out.m,
            out.encoder,
            out.queries,
            out.decoders,
            out.provenance,
        )
    }

    pub fn metrics(&self) -> CodeMetrics {
        let m = self.m as i64;
        let per_receiver: Vec<Rational> = self.queries.iter().map(|r| rat(r.len() as i64, m)).collect();
        let r = per_receiver.iter().max().cloned().expect("n >= 1");
        CodeMetrics {
            beta: rat(self.len() as i64, m),
            r,
            per_receiver,
        }
    }

    /// `c = x * L` for a full message vector of length `mN`.
    pub fn encode(&self, x: &[u32]) -> Vec<u32> {
        self.encoder.left_apply(x)
    }

    /// Runs decoder `i` on a full codeword and full message vector, reading
    /// only the queried symbols and the messages in `K_i`.
    pub fn decode(&self, g: &SideInfoGraph, i: usize, codeword: &[u32], x: &[u32]) -> Vec<u32> {
        let f = self.field;
        let d = &self.decoders[i];
        let mut out = vec![0u32; self.m];
        for (row, &t) in self.queries[i].iter().enumerate() {
            let c = codeword[t];
            if c == 0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(c, d.query_map.get(row, k)));
            }
        }
        for (pos, j) in g.known(i).into_iter().enumerate() {
            for s in 0..self.m {
                let v = x[j * self.m + s];
                if v == 0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o = f.add(*o, f.mul(v, d.side_map.get(pos * self.m + s, k)));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = CodeDoc {
            q: self.field.order(),
            n: self.n,
            m: self.m,
            len: self.len(),
            encoder: self.encoder.to_rows(),
            queries: self.queries.iter().map(|r| r.iter().map(|t| t + 1).collect()).collect(),
            decoders: self
                .decoders
                .iter()
                .map(|d| DecoderDoc {
                    query_map: d.query_map.to_rows(),
                    side_map: d.side_map.to_rows(),
                })
                .collect(),
            provenance: self.provenance.clone(),
        };
        inline_number_arrays(&serde_json::to_string_pretty(&doc).expect("code serializes"))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CodeDoc = serde_json::from_str(text)?;
        let field = Field::new(doc.q)?;
        let matrix = |rows: &[Vec<u32>], cols: usize, what: &str| -> Result<GfMatrix> {
            let mut out = GfMatrix::zeros(field, rows.len(), cols);
            for (r, row) in rows.iter().enumerate() {
                if row.len() != cols {
                    return Err(Error::Parse(format!(
                        "{what}: row {} has {} entries, expected {cols}",
                        r + 1,
                        row.len()
                    )));
                }
                for (c, &v) in row.iter().enumerate() {
                    if v >= doc.q {
                        return Err(Error::Parse(format!("{what}: entry {v} is not in F_{}", doc.q)));
                    }
                    out.set(r, c, v);
                }
            }
            Ok(out)
        };
        let encoder = matrix(&doc.encoder, doc.len, "encoder")?;
        let mut queries = Vec::with_capacity(doc.queries.len());
        for r in &doc.queries {
            if r.contains(&0) {
                return Err(Error::Parse("query indices are 1-based".into()));
            }
            queries.push(r.iter().map(|t| t - 1).collect());
        }
        let decoders = doc
            .decoders
            .iter()
            .map(|d| {
                Ok(Decoder {
                    query_map: matrix(&d.query_map, doc.m, "query_map")?,
                    side_map: matrix(&d.side_map, doc.m, "side_map")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, doc.n, doc.m, encoder, queries, decoders, doc.provenance)
    }
}

/// Puts every array of plain numbers on one line so matrices read as rows.
fn inline_number_arrays(pretty: &str) -> String {
    let mut out = String::with_capacity(pretty.len());
    let mut rest = pretty;
    while let Some(open) = rest.find('[') {
        out.push_str(&rest[..=open]);
        rest = &rest[open + 1..];
        let Some(close) = rest.find(['[', ']']) else { continue };
        let inner = &rest[..close];
        // JSON strings never hold a raw newline, so this skips bracketed text in them.
        let numeric = rest.as_bytes()[close] == b']'
            && inner.contains('\n')
            && inner
                .chars()
                .all(|c| c.is_ascii_digit() || c == ',' || c.is_whitespace());
        if numeric {
            let items: Vec<&str> = inner.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
            out.push_str(&items.join(", "));
            out.push(']');
            rest = &rest[close + 1..];
        }
    }
    out.push_str(rest);
    out
}

pub fn code_metrics(code: &LinearIndexCode) -> CodeMetrics {
    code.metrics()
}

/// True iff `R_i` and `R_j` are disjoint for every interference edge.
/// Every locality-one code has this property.
pub fn queries_disjoint_on_interference(code: &LinearIndexCode, g: &SideInfoGraph) -> bool {
    g.interference_graph().edges().into_iter().all(|(a, b)| {
        let rb = &code.queries[b];
        code.queries[a].iter().all(|t| rb.binary_search(t).is_err())
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeDoc {
    q: u32,
    n: usize,
    m: usize,
    len: usize,
    encoder: Vec<Vec<u32>>,
    queries: Vec<Vec<usize>>,
    decoders: Vec<DecoderDoc>,
    provenance: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecoderDoc {
    query_map: Vec<Vec<u32>>,
    side_map: Vec<Vec<u32>>,
}

/// Uncoded transmission: `c = x`, receiver `i` reads its own `m` symbols.
pub fn uncoded(g: &SideInfoGraph, field: Field, m: usize) -> LinearIndexCode {
    let n = g.n();
    let decoders = (0..n)
        .map(|i| Decoder {
            query_map: GfMatrix::identity(field, m),
            side_map: GfMatrix::zeros(field, m * g.side_info(i).len(), m),
        })
        .collect();
    let queries = (0..n).map(|i| (i * m..(i + 1) * m).collect()).collect();
    LinearIndexCode::new(
        field,
        n,
        m,
        GfMatrix::identity(field, n * m),
        queries,
        decoders,
        "uncoded",
    )
    .expect("uncoded code is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn uncoded_metrics() {
        let g = SideInfoGraph::directed_cycle(3);
        let c = uncoded(&g, Field::BINARY, 1);
        let m = code_metrics(&c);
        assert_eq!((m.beta, m.r), (int(3), int(1)));
        assert!(queries_disjoint_on_interference(&c, &g));
    }

    #[test]
    fn json_round_trip() {
        let g = SideInfoGraph::directed_cycle(4);
        let c = uncoded(&g, Field::new(3).unwrap(), 2);
        let text = c.to_json();
        let back = LinearIndexCode::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"queries\""));
    }

    #[test]
    fn rejects_malformed_json() {
        assert!(LinearIndexCode::from_json("{}").is_err());
        let g = SideInfoGraph::directed_cycle(3);
        let text = uncoded(&g, Field::BINARY, 1).to_json().replace("\"q\": 2", "\"q\": 4");
        assert!(matches!(LinearIndexCode::from_json(&text), Err(Error::NotPrime(4))));
    }

    #[test]
    fn unqueried_symbols_are_rejected() {
        let f = Field::BINARY;
        let dec = Decoder {
            query_map: GfMatrix::identity(f, 1),
            side_map: GfMatrix::zeros(f, 0, 1),
        };
        let err = LinearIndexCode::new(f, 1, 1, GfMatrix::zeros(f, 1, 2), vec![vec![0]], vec![dec], "x");
        assert!(err.is_err());
    }
}
