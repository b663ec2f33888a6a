//! Walsh (Fourier) spectra, nonlinearity and differential spectra of a
//! [`FunctionTable`].
//!
//! The fast path turns `Tr(a x)` into a GF(2) dot product: the trace form is
//! nondegenerate, so there is a bijection `a -> w(a)` with
//! `Tr(a x) = parity(w(a) & x)`. A component `Tr(b f(x))` then becomes a sign
//! vector, and one Walsh-Hadamard butterfly yields the whole row
//! `W(., b)` permuted by `w`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::FunctionTable;

/// Default largest n for which a full spectrum is computed.
pub const DEFAULT_N_CAP: u32 = 16;

const BLOCK: usize = 32;
const DENSE_HISTOGRAM_MAX_N: u32 = 20;

/// `dual[a] = w(a)` with `Tr(a x) = parity(w(a) & x)` for all x.
pub fn trace_dual(field: &FieldSpec) -> Vec<u32> {
    let n = field.n();
    let basis: Vec<u32> = (0..n)
        .map(|i| {
            (0..n).fold(0u32, |w, j| {
                w | field.trace_raw(field.mul_raw(1 << i, 1 << j)) << j
            })
        })
        .collect();
    let mut dual = vec![0u32; field.size()];
    for a in 1..field.size() {
        let low = a.trailing_zeros() as usize;
        dual[a] = dual[a & (a - 1)] ^ basis[low];
    }
    dual
}

#[inline]
fn parity(x: u32) -> u32 {
    x.count_ones() & 1
}

fn check_component(f: &FunctionTable, b: FieldElement) -> Result<()> {
    if !f.field().contains(&b) {
        return Err(Error::FieldMismatch);
    }
    if b.is_zero() {
        return Err(Error::ZeroComponent);
    }
    Ok(())
}

/// `sign[x] = (-1)^Tr(b f(x))`.
pub fn component_signs(f: &FunctionTable, b: FieldElement) -> Result<Vec<i32>> {
    check_component(f, b)?;
    let field = f.field();
    Ok(f
        .values()
        .iter()
        .map(|&y| 1 - 2 * field.trace_raw(field.mul_raw(b.bits(), y)) as i32)
        .collect())
}

/// `W(a, b) = sum_x (-1)^Tr(a x + b f(x))` by direct summation.
pub fn walsh_point(f: &FunctionTable, a: FieldElement, b: FieldElement) -> Result<i64> {
    check_component(f, b)?;
    if !f.field().contains(&a) {
        return Err(Error::FieldMismatch);
    }
    let field = f.field();
    let sum = f
        .values()
        .iter()
        .enumerate()
        .map(|(x, &y)| {
            let arg = field.mul_raw(a.bits(), x as u32) ^ field.mul_raw(b.bits(), y);
            1 - 2 * i64::from(field.trace_raw(arg))
        })
        .sum();
    Ok(sum)
}

/// In-place unnormalized Walsh-Hadamard transform.
pub fn fwht(data: &mut [i32]) {
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for chunk in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (p, q) = (*x, *y);
                *x = p + q;
                *y = p - q;
            }
        }
        h *= 2;
    }
}

fn fill_signs(f: &FunctionTable, wb: u32, buf: &mut [i32]) {
    for (s, &y) in buf.iter_mut().zip(f.values()) {
        *s = 1 - 2 * parity(wb & y) as i32;
    }
}

/// The butterfly image of a row: entry w is `W(a, b)` for the `a` with
/// `dual[a] = w`. Same multiset as the row itself.
fn transformed_row(f: &FunctionTable, dual: &[u32], b: u32, buf: &mut [i32]) {
    fill_signs(f, dual[b as usize], buf);
    fwht(buf);
}

/// `row[a] = W(a, b)` for every a, via the fast transform.
pub fn walsh_row(f: &FunctionTable, b: FieldElement) -> Result<Vec<i64>> {
    check_component(f, b)?;
    let dual = trace_dual(f.field());
    let mut buf = vec![0i32; f.field().size()];
    transformed_row(f, &dual, b.bits(), &mut buf);
    Ok(dual.iter().map(|&w| i64::from(buf[w as usize])).collect())
}

/// Value -> multiplicity over `a in L` and the analysed `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalshSpectrum {
    pub n: u32,
    pub counts: BTreeMap<i64, u64>,
    /// Number of b rows aggregated (2^n - 1 for a full spectrum).
    pub rows: u64,
    /// a ranges over all of L, b over L* (or the sampled subset).
    pub includes_a_zero: bool,
}

impl WalshSpectrum {
    pub fn values(&self) -> Vec<i64> {
        self.counts.keys().copied().collect()
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn max_abs(&self) -> i64 {
        self.counts.keys().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn is_full(&self) -> bool {
        self.rows == (1u64 << self.n) - 1
    }
}

fn row_block_histogram(f: &FunctionTable, dual: &[u32], bs: &[u32], dense: bool) -> Vec<(i64, u64)> {
    let size = f.field().size();
    let mut buf = vec![0i32; size];
    if !dense {
        let mut acc: BTreeMap<i64, u64> = BTreeMap::new();
        for &b in bs {
            transformed_row(f, dual, b, &mut buf);
            buf.sort_unstable();
            for run in buf.chunk_by(|x, y| x == y) {
                *acc.entry(i64::from(run[0])).or_default() += run.len() as u64;
            }
        }
        return acc.into_iter().collect();
    }
    // values lie in [-2^n, 2^n]
    let offset = size as i64;
    let mut hist = vec![0u32; 2 * size + 1];
    for &b in bs {
        transformed_row(f, dual, b, &mut buf);
        for &v in &buf {
            hist[(i64::from(v) + offset) as usize] += 1;
        }
    }
    hist.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(idx, &c)| (idx as i64 - offset, u64::from(c)))
        .collect()
}

/// Spectrum aggregated over the given b values (all must be nonzero).
/// Rows are processed in parallel blocks and merged in value order, so the
/// result does not depend on the worker count.
pub fn spectrum_over(f: &FunctionTable, bs: &[FieldElement]) -> Result<WalshSpectrum> {
    for &b in bs {
        check_component(f, b)?;
    }
    let dual = trace_dual(f.field());
    let raw: Vec<u32> = bs.iter().map(|b| b.bits()).collect();
    let dense = f.n() <= DENSE_HISTOGRAM_MAX_N;
    let parts: Vec<Vec<(i64, u64)>> = raw
        .par_chunks(BLOCK)
        .map(|chunk| row_block_histogram(f, &dual, chunk, dense))
        .collect();
    let mut counts = BTreeMap::new();
    for part in parts {
        for (v, c) in part {
            *counts.entry(v).or_default() += c;
        }
    }
    Ok(WalshSpectrum {
        n: f.n(),
        counts,
        rows: bs.len() as u64,
        includes_a_zero: true,
    })
}

/// Full spectrum over all b in L*, refusing n above [`DEFAULT_N_CAP`].
pub fn full_spectrum(f: &FunctionTable) -> Result<WalshSpectrum> {
    full_spectrum_capped(f, DEFAULT_N_CAP)
}

pub fn full_spectrum_capped(f: &FunctionTable, cap: u32) -> Result<WalshSpectrum> {
    if f.n() > cap {
        return Err(Error::CapExceeded { n: f.n(), cap });
    }
    let bs: Vec<FieldElement> = f.field().elements().skip(1).collect();
    spectrum_over(f, &bs)
}

/// `2^(n-1) - max|W| / 2`.
pub fn nonlinearity(sp: &WalshSpectrum) -> i64 {
    (1i64 << (sp.n - 1)) - sp.max_abs() / 2
}

/// Histogram of derivative solution counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffSpectrum {
    /// solution count -> number of (a, b) pairs with that count
    pub counts: BTreeMap<u64, u64>,
    pub max_count: u64,
    pub rows: u64,
}

impl DiffSpectrum {
    /// Differential uniformity.
    pub fn uniformity(&self) -> u64 {
        self.max_count
    }

    pub fn is_apn(&self) -> bool {
        self.max_count == 2
    }
}

fn ddt_block(f: &FunctionTable, rows: &[u32]) -> (Vec<u64>, u64) {
    let size = f.field().size();
    let vals = f.values();
    let mut row = vec![0u32; size];
    let mut hist = vec![0u64; size + 1];
    let mut max = 0;
    for &a in rows {
        row.fill(0);
        for (x, &y) in vals.iter().enumerate() {
            row[(y ^ vals[x ^ a as usize]) as usize] += 1;
        }
        for &c in &row {
            hist[c as usize] += 1;
            max = max.max(u64::from(c));
        }
    }
    (hist, max)
}

/// Differential spectrum over the given nonzero input differences.
pub fn diff_spectrum_rows(f: &FunctionTable, rows: &[FieldElement]) -> Result<DiffSpectrum> {
    for a in rows {
        if !f.field().contains(a) {
            return Err(Error::FieldMismatch);
        }
        if a.is_zero() {
            return Err(Error::ZeroComponent);
        }
    }
    let raw: Vec<u32> = rows.iter().map(|a| a.bits()).collect();
    let parts: Vec<(Vec<u64>, u64)> = raw
        .par_chunks(BLOCK)
        .map(|chunk| ddt_block(f, chunk))
        .collect();
    let mut counts = BTreeMap::new();
    let mut max_count = 0;
    for (hist, max) in parts {
        max_count = max_count.max(max);
        for (c, &m) in hist.iter().enumerate() {
            if m != 0 {
                *counts.entry(c as u64).or_default() += m;
            }
        }
    }
    Ok(DiffSpectrum {
        counts,
        max_count,
        rows: rows.len() as u64,
    })
}

/// Differential spectrum over every a in L*.
pub fn diff_spectrum(f: &FunctionTable) -> DiffSpectrum {
    let rows: Vec<FieldElement> = f.field().elements().skip(1).collect();
    diff_spectrum_rows(f, &rows).expect("rows are nonzero elements of the table's field")
}
