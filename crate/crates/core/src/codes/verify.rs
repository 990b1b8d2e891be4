use std::fmt;

use rayon::prelude::*;

use super::LinearIndexCode;
use crate::error::{Error, Result};
use crate::field_linalg::GfMatrix;
use crate::graph::SideInfoGraph;

/// Message spaces up to this size are also checked by brute force.
pub const DEFAULT_EXHAUSTIVE_LIMIT: u128 = 1 << 20;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Run the exhaustive backend when `q^(mN)` is at most this.
    pub exhaustive_limit: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
        }
    }
}

impl VerifyOptions {
    pub fn algebraic_only() -> Self {
        VerifyOptions { exhaustive_limit: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Structural,
    Algebraic,
    Exhaustive,
}

/// A receiver that fails, with a message tuple showing it.
///
/// For the algebraic backend `other` (when present) is a second message
/// tuple that agrees with `message` on everything receiver `i` sees but
/// differs in `x_i`. `decoded` is what the stored decoder outputs on `message`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub backend: Backend,
    pub receiver: usize,
    pub message: Vec<u32>,
    pub other: Option<Vec<u32>>,
    pub decoded: Option<Vec<u32>>,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "receiver {} ({:?}): {}; message {:?}",
            self.receiver + 1,
            self.backend,
            self.detail,
            self.message
        )?;
        if let Some(o) = &self.other {
            write!(f, " vs {o:?}")?;
        }
        if let Some(d) = &self.decoded {
            write!(f, ", decoded {d:?}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub algebraic: std::result::Result<(), Counterexample>,
    /// `None` when the message space is above the exhaustive limit.
    pub exhaustive: Option<std::result::Result<(), Counterexample>>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.algebraic.is_ok() && !matches!(self.exhaustive, Some(Err(_)))
    }

    pub fn failure(&self) -> Option<&Counterexample> {
        match (&self.algebraic, &self.exhaustive) {
            (Err(c), _) => Some(c),
            (_, Some(Err(c))) => Some(c),
            _ => None,
        }
    }
}

/// Checks that every receiver recovers its message from its queried symbols
/// and its side information.
///
/// Errors only when the code and graph disagree on the number of receivers.
pub fn verify_code(code: &LinearIndexCode, g: &SideInfoGraph, options: &VerifyOptions) -> Result<VerifyReport> {
    if code.n() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "code has {} receivers, graph has {} vertices",
            code.n(),
            g.n()
        )));
    }
    let m = code.m();
    for i in 0..g.n() {
        let expected = m * g.side_info(i).len();
        let got = code.decoders()[i].side_map.rows();
        if got != expected {
            let c = Counterexample {
                backend: Backend::Structural,
                receiver: i,
                message: vec![0; m * g.n()],
                other: None,
                decoded: None,
                detail: format!("side map has {got} rows, expected {expected}"),
            };
            return Ok(VerifyReport {
                algebraic: Err(c),
                exhaustive: None,
            });
        }
    }

    let algebraic = (0..g.n()).try_for_each(|i| algebraic_check(code, g, i));
    let space = message_space(code);
    let exhaustive = (space <= options.exhaustive_limit).then(|| exhaustive_check(code, g, space as u64));
    Ok(VerifyReport { algebraic, exhaustive })
}

/// `q^(mN)`, saturating.
pub(crate) fn message_space(code: &LinearIndexCode) -> u128 {
    let q = code.field().order() as u128;
    let digits = (code.m() * code.n()) as u32;
    q.checked_pow(digits).unwrap_or(u128::MAX)
}

fn algebraic_check(code: &LinearIndexCode, g: &SideInfoGraph, i: usize) -> std::result::Result<(), Counterexample> {
    let f = code.field();
    let m = code.m();
    let total = m * g.n();
    let l = code.encoder();
    let r = code.query(i);
    let known = g.side_info(i);
    let dec = &code.decoders()[i];

    // Messages with x_K = 0 and c_R = 0 must have x_i = 0.
    let free: Vec<usize> = (0..total).filter(|&k| !known.contains(k / m)).collect();
    let block = l.select_rows(&free).select_columns(r);
    for y in block.transpose().kernel() {
        let mut x = vec![0u32; total];
        for (&k, &v) in free.iter().zip(&y) {
            x[k] = v;
        }
        if x[i * m..(i + 1) * m].iter().any(|&v| v != 0) {
            return Err(Counterexample {
                backend: Backend::Algebraic,
                receiver: i,
                message: vec![0; total],
                other: Some(x),
                decoded: None,
                detail: "two messages look identical to the receiver".into(),
            });
        }
    }

    // Decoder identity: L[:, R] Q + J_K S = P_i, checked row by row.
    let lr = l.select_columns(r);
    let via_query = lr.mul(&dec.query_map).expect("shapes checked at construction");
    let known_list = g.known(i);
    for k in 0..total {
        let (owner, s) = (k / m, k % m);
        let mut row: Vec<u32> = via_query.row(k).to_vec();
        if let Ok(pos) = known_list.binary_search(&owner) {
            for (c, v) in row.iter_mut().enumerate() {
                *v = f.add(*v, dec.side_map.get(pos * m + s, c));
            }
        }
        if owner == i {
            row[s] = f.sub(row[s], 1);
        }
        if row.iter().any(|&v| v != 0) {
            let mut x = vec![0u32; total];
            x[k] = 1;
            let decoded = code.decode(g, i, &code.encode(&x), &x);
            return Err(Counterexample {
                backend: Backend::Algebraic,
                receiver: i,
                message: x,
                other: None,
                decoded: Some(decoded),
                detail: "stored decoder returns the wrong value".into(),
            });
        }
    }
    Ok(())
}

fn exhaustive_check(code: &LinearIndexCode, g: &SideInfoGraph, space: u64) -> std::result::Result<(), Counterexample> {
    const CHUNK: u64 = 1 << 12;
    let chunks = space.div_ceil(CHUNK);
    let known: Vec<Vec<usize>> = (0..g.n()).map(|i| g.known(i)).collect();
    let packed = BinaryPacked::new(code, &known);
    let found = (0..chunks).into_par_iter().find_map_first(|c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(space);
        match &packed {
            Some(p) => p.scan(lo, hi),
            None => scan(code, &known, lo, hi),
        }
    });
    match found {
        Some((i, x, decoded)) => Err(Counterexample {
            backend: Backend::Exhaustive,
            receiver: i,
            message: x,
            other: None,
            decoded: Some(decoded),
            detail: "decoder output differs from the message".into(),
        }),
        None => Ok(()),
    }
}

fn scan(code: &LinearIndexCode, known: &[Vec<usize>], lo: u64, hi: u64) -> Option<(usize, Vec<u32>, Vec<u32>)> {
    let f = code.field();
    let q = f.order();
    let m = code.m();
    let total = m * code.n();
    let l: &GfMatrix = code.encoder();

    // last coordinate is the least significant digit
    let mut x = vec![0u32; total];
    let mut rest = lo;
    for slot in x.iter_mut().rev() {
        *slot = (rest % q as u64) as u32;
        rest /= q as u64;
    }
    let mut c = code.encode(&x);
    let mut out = vec![0u32; m];

    for _ in lo..hi {
        for (i, kn) in known.iter().enumerate() {
            decode_into(code, i, kn, &c, &x, &mut out);
            if out[..] != x[i * m..(i + 1) * m] {
                return Some((i, x.clone(), out.clone()));
            }
        }
        // odometer step: every digit touched moves up by one mod q
        for p in (0..total).rev() {
            x[p] = (x[p] + 1) % q;
            for (ct, &lv) in c.iter_mut().zip(l.row(p)) {
                *ct = f.add(*ct, lv);
            }
            if x[p] != 0 {
                break;
            }
        }
    }
    None
}

fn decode_into(code: &LinearIndexCode, i: usize, known: &[usize], c: &[u32], x: &[u32], out: &mut [u32]) {
    let f = code.field();
    let m = code.m();
    let d = &code.decoders()[i];
    out.iter_mut().for_each(|o| *o = 0);
    for (row, &t) in code.query(i).iter().enumerate() {
        let v = c[t];
        if v != 0 {
            for (k, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(v, d.query_map.get(row, k)));
            }
        }
    }
    for (pos, &j) in known.iter().enumerate() {
        for s in 0..m {
            let v = x[j * m + s];
            if v != 0 {
                for (k, o) in out.iter_mut().enumerate() {
                    *o = f.add(*o, f.mul(v, d.side_map.get(pos * m + s, k)));
                }
            }
        }
    }
}

/// Binary codes small enough to hold messages, codewords and decoder rows in
/// machine words. Same enumeration order and decoders as [`scan`]; each
/// decoder is applied through per-byte tables of its partial sums.
struct BinaryPacked {
    total: usize,
    m: usize,
    /// Codeword contribution of counter bit `b`, which is coordinate `total - 1 - b`.
    lrows: Vec<u64>,
    receivers: Vec<ByteTables>,
}

/// Decoder output bit `m - 1 - s` is symbol `s`, so the expected value is a
/// plain shift of the counter.
struct ByteTables {
    /// `query[k][byte]`: xor of query_map rows for codeword bits `8k..8k+8`.
    query: Vec<[u64; 256]>,
    /// `side[k][byte]`: xor of side_map rows for counter bits `8k..8k+8`.
    side: Vec<[u64; 256]>,
}

fn byte_tables(width: usize, rows: &[(usize, u64)]) -> Vec<[u64; 256]> {
    let mut tables = vec![[0u64; 256]; width.div_ceil(8)];
    for (k, table) in tables.iter_mut().enumerate() {
        for (byte, entry) in table.iter_mut().enumerate() {
            *entry = rows
                .iter()
                .filter(|&&(b, _)| b / 8 == k && (byte >> (b % 8)) & 1 == 1)
                .fold(0, |acc, &(_, row)| acc ^ row);
        }
    }
    tables
}

fn apply_tables(tables: &[[u64; 256]], w: u64) -> u64 {
    tables
        .iter()
        .enumerate()
        .fold(0, |acc, (k, t)| acc ^ t[((w >> (8 * k)) & 0xff) as usize])
}

impl BinaryPacked {
    fn new(code: &LinearIndexCode, known: &[Vec<usize>]) -> Option<Self> {
        let m = code.m();
        let total = m * code.n();
        if code.field().order() != 2 || total > 64 || code.len() > 64 {
            return None;
        }
        let pack_codeword = |row: &[u32]| {
            row.iter()
                .enumerate()
                .fold(0u64, |acc, (k, &v)| acc | (u64::from(v) << k))
        };
        let pack_symbols = |row: &[u32]| {
            row.iter()
                .enumerate()
                .fold(0u64, |acc, (k, &v)| acc | (u64::from(v) << (m - 1 - k)))
        };
        let l = code.encoder();
        let lrows = (0..total).map(|b| pack_codeword(l.row(total - 1 - b))).collect();
        let receivers = known
            .iter()
            .enumerate()
            .map(|(i, kn)| {
                let d = &code.decoders()[i];
                let queried: Vec<(usize, u64)> = code
                    .query(i)
                    .iter()
                    .enumerate()
                    .map(|(row, &t)| (t, pack_symbols(d.query_map.row(row))))
                    .collect();
                let side: Vec<(usize, u64)> = kn
                    .iter()
                    .enumerate()
                    .flat_map(|(pos, &j)| (0..m).map(move |s| (pos, j, s)))
                    .map(|(pos, j, s)| (total - 1 - (j * m + s), pack_symbols(d.side_map.row(pos * m + s))))
                    .collect();
                ByteTables {
                    query: byte_tables(code.len(), &queried),
                    side: byte_tables(total, &side),
                }
            })
            .collect();
        Some(BinaryPacked {
            total,
            m,
            lrows,
            receivers,
        })
    }

    fn scan(&self, lo: u64, hi: u64) -> Option<(usize, Vec<u32>, Vec<u32>)> {
        let mask = if self.m == 64 { u64::MAX } else { (1u64 << self.m) - 1 };
        let mut c = (0..self.total)
            .filter(|&b| (lo >> b) & 1 == 1)
            .fold(0u64, |acc, b| acc ^ self.lrows[b]);
        for v in lo..hi {
            for (i, t) in self.receivers.iter().enumerate() {
                let out = apply_tables(&t.query, c) ^ apply_tables(&t.side, v);
                let shift = self.total - (i + 1) * self.m;
                if out != (v >> shift) & mask {
                    let bits = |w: u64, width: usize| (0..width).map(|p| ((w >> (width - 1 - p)) & 1) as u32).collect();
                    return Some((i, bits(v, self.total), bits(out, self.m)));
                }
            }
            let mut flipped = v ^ (v + 1);
            while flipped != 0 {
                let b = flipped.trailing_zeros() as usize;
                if b < self.total {
                    c ^= self.lrows[b];
                }
                flipped &= flipped - 1;
            }
        }
        None
    }
}
