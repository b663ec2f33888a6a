//! Bilinear forms of quadratic functions, the kernels that govern their
//! squared Walsh values, and root counting for linearized
//! polynomials.
//!
//! For a quadratic f,
//! `W(a,b)^2 = 2^n * sum_{u in K_b} (-1)^Tr(a u + b f(u) + b f(0))`
//! where `K_b = { u : Tr(b B_f(u, x)) = 0 for all x }` and
//! `B_f(u, x) = f(x+u) + f(x) + f(u) + f(0)`.

mod matrix;
mod proof;

use crate::analysis::walsh_point;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::{FunctionTable, SparsePoly};

pub use matrix::{span, LinearizedMap, MapProvenance};
pub use proof::{
    lb_explicit_f5, proof_trace_f5, trace_f5_claims, verify_f5, F5Instance, KernelRecord,
    ProofChecks, ProofTrace,
};

/// `B_f(u, x) = f(x+u) + f(x) + f(u) + f(0)`.
pub fn bilinear_form(f: &FunctionTable, u: FieldElement, x: FieldElement) -> FieldElement {
    let field = f.field();
    assert!(field.contains(&u) && field.contains(&x), "element from a different field");
    field.wrap(form_raw(f, u.bits(), x.bits()))
}

#[inline]
fn form_raw(f: &FunctionTable, u: u32, x: u32) -> u32 {
    f.at_raw(x ^ u) ^ f.at_raw(x) ^ f.at_raw(u) ^ f.at_raw(0)
}

/// A value table verified to be quadratic (algebraic degree <= 2), with its
/// bilinear form on basis pairs.
#[derive(Debug, Clone)]
pub struct QuadraticForm<'a> {
    table: &'a FunctionTable,
    // basis[i * n + j] = B_f(e_i, e_j)
    basis: Vec<u32>,
}

impl<'a> QuadraticForm<'a> {
    /// Checks that f agrees everywhere with the quadratic function rebuilt
    /// from its values at 0, e_i and e_i + e_j: peeling off the lowest set
    /// bit i of x = x' + e_i must give
    /// `f(x) = f(x') + f(e_i) + f(0) + sum_{j in x'} B_f(e_i, e_j)`.
    pub fn new(table: &'a FunctionTable) -> Result<Self> {
        let n = table.n() as usize;
        let mut basis = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                basis[i * n + j] = form_raw(table, 1 << i, 1 << j);
            }
        }
        let f0 = table.at_raw(0);
        for x in 1..table.field().size() as u32 {
            let i = x.trailing_zeros() as usize;
            let rest = x & (x - 1);
            let mut expect = table.at_raw(rest) ^ table.at_raw(1 << i) ^ f0;
            let mut bits = rest;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                expect ^= basis[i * n + j];
                bits &= bits - 1;
            }
            if expect != table.at_raw(x) {
                return Err(Error::NotQuadratic(format!(
                    "value at {x:#X} is not determined by the bilinear form"
                )));
            }
        }
        Ok(Self { table, basis })
    }

    pub fn table(&self) -> &FunctionTable {
        self.table
    }

    /// `B_f(e_i, e_j)`.
    pub fn basis_form(&self, i: u32, j: u32) -> u32 {
        self.basis[(i * self.table.n() + j) as usize]
    }

    /// Matrix with entry (i, j) = `Tr(b B_f(e_j, e_i))`; u is in its kernel
    /// iff `Tr(b B_f(u, x)) = 0` for every x.
    pub fn kernel_map(&self, b: FieldElement) -> Result<LinearizedMap> {
        let field = self.table.field();
        if !field.contains(&b) {
            return Err(Error::FieldMismatch);
        }
        if b.is_zero() {
            return Err(Error::ZeroComponent);
        }
        let n = self.table.n();
        let columns = (0..n)
            .map(|j| {
                (0..n).fold(0u32, |col, i| {
                    let tr = field.trace_raw(field.mul_raw(b.bits(), self.basis_form(j, i)));
                    col | tr << i
                })
            })
            .collect();
        Ok(LinearizedMap::from_columns(n, columns, MapProvenance::BilinearGeneric))
    }

    /// `sum_{u in kernel} (-1)^Tr(a u + b f(u) + b f(0))`.
    fn kernel_character_sum(&self, kernel: &[u32], a: u32, b: u32) -> i64 {
        let field = self.table.field();
        let f0 = self.table.at_raw(0);
        kernel
            .iter()
            .map(|&u| {
                let arg = field.mul_raw(a, u) ^ field.mul_raw(b, self.table.at_raw(u) ^ f0);
                1 - 2 * i64::from(field.trace_raw(arg))
            })
            .sum()
    }

    /// `(W(a,b)^2, 2^n * kernel sum)`; equal for every quadratic f.
    pub fn squared_identity(&self, a: FieldElement, b: FieldElement) -> Result<(i64, i64)> {
        let kernel = self.kernel_map(b)?.kernel();
        let w = walsh_point(self.table, a, b)?;
        let rhs = (1i64 << self.table.n()) * self.kernel_character_sum(&kernel, a.bits(), b.bits());
        Ok((w * w, rhs))
    }

    /// [`QuadraticForm::squared_identity`] for every a at once, reusing the
    /// kernel of b.
    pub fn squared_identity_row(&self, b: FieldElement) -> Result<Vec<(i64, i64)>> {
        let kernel = self.kernel_map(b)?.kernel();
        let scale = 1i64 << self.table.n();
        self.table
            .field()
            .elements()
            .map(|a| {
                let w = walsh_point(self.table, a, b)?;
                Ok((w * w, scale * self.kernel_character_sum(&kernel, a.bits(), b.bits())))
            })
            .collect()
    }
}

/// The kernel map of the bilinear form of `f` at component `b`.
pub fn kernel_map_generic(f: &FunctionTable, b: FieldElement) -> Result<LinearizedMap> {
    QuadraticForm::new(f)?.kernel_map(b)
}

/// Returns `(W(a,b)^2, 2^n sum_{u in K} (-1)^Tr(a u + b f(u)))`. For
/// `f(0) != 0` each kernel term carries the extra constant sign
/// `(-1)^Tr(b f(0))`.
pub fn squared_transform_identity(
    f: &FunctionTable,
    a: FieldElement,
    b: FieldElement,
) -> Result<(i64, i64)> {
    QuadraticForm::new(f)?.squared_identity(a, b)
}

/// Root count of a linearized polynomial `sum_{i<=d} r_i x^(2^(s i))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootCount {
    pub roots: u64,
    pub d: u32,
    pub bound: u64,
}

/// Counts the roots of `p` in L exhaustively and checks them against
/// `2^d`. `p` must consist only of terms `x^(2^(s i mod n))`.
pub fn lemma1_root_count(p: &SparsePoly, s: u32) -> Result<RootCount> {
    let field: &FieldSpec = p.field();
    let n = field.n();
    if gcd(s, n) != 1 {
        return Err(Error::GcdViolation { s, n });
    }
    if p.is_zero() {
        return Err(Error::InvalidShape("zero polynomial".into()));
    }
    let mut d = 0;
    for e in p.exponents() {
        if !e.is_power_of_two() {
            return Err(Error::InvalidShape(format!("exponent {e} is not a power of two")));
        }
        let j = e.trailing_zeros();
        let i = (0..n)
            .find(|&i| (u64::from(s) * u64::from(i)) % u64::from(n) == u64::from(j))
            .expect("s is invertible modulo n");
        d = d.max(i);
    }
    let table = p.tabulate();
    let roots = table.values().iter().filter(|&&v| v == 0).count() as u64;
    let bound = 1u64 << d;
    if roots > bound {
        return Err(Error::BoundExceeded { roots, bound });
    }
    Ok(RootCount { roots, d, bound })
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
