//! Arithmetic in GF(2^n) in polynomial basis, for 2 <= n <= 24.
//!
//! Elements are packed into a `u32`, bit `i` holding the coefficient of
//! `x^i`. A [`FieldElement`] carries its reduction polynomial, so elements of
//! different realizations never mix silently: the operators panic on a
//! mismatch and the `try_*` methods return [`Error::FieldMismatch`].
//!
//! [`FieldSpec`] additionally keeps log/antilog tables (for n <= 20) and a
//! trace mask; the `*_raw` methods on it are the bulk-evaluation fast path
//! used by tabulation and analysis.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign};
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 24;
const TABLE_MAX_DEGREE: u32 = 20;

/// Distinct prime factors of 2^n - 1, indexed by n.
const ORDER_PRIME_FACTORS: [&[u64]; 25] = [
    &[],
    &[],
    &[3],
    &[7],
    &[3, 5],
    &[31],
    &[3, 7],
    &[127],
    &[3, 5, 17],
    &[7, 73],
    &[3, 11, 31],
    &[23, 89],
    &[3, 5, 7, 13],
    &[8191],
    &[3, 43, 127],
    &[7, 31, 151],
    &[3, 5, 17, 257],
    &[131071],
    &[3, 7, 19, 73],
    &[524287],
    &[3, 5, 11, 31, 41],
    &[7, 127, 337],
    &[3, 23, 89, 683],
    &[47, 178481],
    &[3, 5, 7, 13, 17, 241],
];

/// Carry-less product of `a` and `b` reduced modulo `poly` (degree `n`).
/// `a` must already be reduced.
#[inline]
pub(crate) fn mul_mod(mut a: u32, mut b: u32, poly: u32, n: u32) -> u32 {
    let top = 1u32 << n;
    let mut acc = 0;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= poly;
        }
    }
    acc
}

fn pow_mod(base: u32, mut e: u64, poly: u32, n: u32) -> u32 {
    let mut acc = 1u32;
    let mut sq = base;
    while e != 0 {
        if e & 1 != 0 {
            acc = mul_mod(acc, sq, poly, n);
        }
        sq = mul_mod(sq, sq, poly, n);
        e >>= 1;
    }
    acc
}

fn gf2_degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

fn gf2_rem(mut a: u64, b: u64) -> u64 {
    let db = gf2_degree(b);
    while a != 0 && gf2_degree(a) >= db {
        a ^= b << (gf2_degree(a) - db);
    }
    a
}

fn gf2_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = gf2_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test for a degree-`n` polynomial over GF(2).
pub(crate) fn is_irreducible(poly: u32, n: u32) -> bool {
    let mut h = 2u32;
    for _ in 0..n / 2 {
        h = mul_mod(h, h, poly, n);
        if gf2_gcd(u64::from(h ^ 2), u64::from(poly)) != 1 {
            return false;
        }
    }
    true
}

fn has_full_order(a: u32, poly: u32, n: u32) -> bool {
    if a == 0 {
        return false;
    }
    let order = (1u64 << n) - 1;
    if pow_mod(a, order, poly, n) != 1 {
        return false;
    }
    ORDER_PRIME_FACTORS[n as usize]
        .iter()
        .all(|q| pow_mod(a, order / q, poly, n) != 1)
}

struct LogTables {
    log: Vec<u32>,
    // doubled so that log(a) + log(b) never needs reducing
    exp: Vec<u32>,
}

impl LogTables {
    fn build(alpha: u32, poly: u32, n: u32) -> Self {
        let order = (1usize << n) - 1;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; 1 << n];
        let mut x = 1u32;
        for i in 0..order {
            exp[i] = x;
            exp[i + order] = x;
            log[x as usize] = i as u32;
            x = mul_mod(x, alpha, poly, n);
        }
        Self { log, exp }
    }
}

/// A concrete realization of GF(2^n).
#[derive(Clone)]
pub struct FieldSpec {
    n: u32,
    poly: u32,
    alpha: u32,
    trace_mask: u32,
    tables: Option<Arc<LogTables>>,
}

impl FieldSpec {
    /// Builds GF(2^n). Without an override the reduction polynomial is the
    /// smallest primitive polynomial of degree `n` (as an integer bit mask),
    /// so `alpha = x`. An irreducible override whose root is not primitive
    /// gets the smallest primitive element as `alpha` instead.
    pub fn new(n: u32, poly_override: Option<u64>) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(Error::UnsupportedDegree(n));
        }
        let (poly, alpha) = match poly_override {
            Some(p) => {
                if p >> n != 1 {
                    return Err(Error::DegreeMismatch { poly: p, n });
                }
                let p = p as u32;
                if !is_irreducible(p, n) {
                    return Err(Error::ReduciblePolynomial(u64::from(p)));
                }
                let alpha = (2u32..1 << n)
                    .find(|&a| has_full_order(a, p, n))
                    .expect("the multiplicative group of a finite field is cyclic");
                (p, alpha)
            }
            None => {
                let p = ((1u32 << n) | 1..1u32 << (n + 1))
                    .step_by(2)
                    .find(|&p| is_irreducible(p, n) && has_full_order(2, p, n))
                    .expect("primitive polynomials exist in every degree");
                (p, 2)
            }
        };
        let mut trace_mask = 0;
        for j in 0..n {
            let mut y = 1u32 << j;
            let mut t = 0;
            for _ in 0..n {
                t ^= y;
                y = mul_mod(y, y, poly, n);
            }
            debug_assert!(t <= 1);
            trace_mask |= t << j;
        }
        let tables = (n <= TABLE_MAX_DEGREE).then(|| Arc::new(LogTables::build(alpha, poly, n)));
        Ok(Self {
            n,
            poly,
            alpha,
            trace_mask,
            tables,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Reduction polynomial, bit i = coefficient of x^i.
    pub fn poly(&self) -> u32 {
        self.poly
    }

    pub fn alpha(&self) -> FieldElement {
        self.wrap(self.alpha)
    }

    /// 2^n - 1.
    pub fn order(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn size(&self) -> usize {
        1usize << self.n
    }

    pub fn order_prime_factors(&self) -> &'static [u64] {
        ORDER_PRIME_FACTORS[self.n as usize]
    }

    pub fn element(&self, bits: u64) -> Result<FieldElement> {
        if bits >> self.n != 0 {
            return Err(Error::ElementOutOfRange {
                value: bits,
                n: self.n,
            });
        }
        Ok(self.wrap(bits as u32))
    }

    /// Wraps raw bits; the caller guarantees `bits < 2^n`.
    pub(crate) fn wrap(&self, bits: u32) -> FieldElement {
        debug_assert!(bits >> self.n == 0);
        FieldElement {
            bits,
            n: self.n as u8,
            poly: self.poly,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// All elements in index order (element i has bit pattern i).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size() as u32).map(|b| self.wrap(b))
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        u32::from(a.n) == self.n && a.poly == self.poly
    }

    pub fn is_primitive(&self, a: &FieldElement) -> bool {
        self.contains(a) && a.is_primitive()
    }

    #[inline]
    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
                }
            }
            None => mul_mod(a, b, self.poly, self.n),
        }
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow_raw(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.order();
        match &self.tables {
            Some(t) => {
                let l = u64::from(t.log[a as usize]) * (e % order) % order;
                t.exp[l as usize]
            }
            None => pow_mod(a, e % order, self.poly, self.n),
        }
    }

    /// Discrete log base alpha, for nonzero `a` (None when no tables exist).
    pub(crate) fn log_raw(&self, a: u32) -> Option<u32> {
        self.tables.as_ref().map(|t| t.log[a as usize])
    }

    pub(crate) fn exp_raw(&self, l: u64) -> u32 {
        match &self.tables {
            Some(t) => t.exp[(l % self.order()) as usize],
            None => pow_mod(self.alpha, l % self.order(), self.poly, self.n),
        }
    }

    #[inline]
    pub fn trace_raw(&self, a: u32) -> u32 {
        (a & self.trace_mask).count_ones() & 1
    }

    /// Bit j is Tr(x^j); Tr(a) is the parity of `a & trace_mask`.
    pub fn trace_mask(&self) -> u32 {
        self.trace_mask
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.poly == other.poly
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("n", &self.n)
            .field("poly", &format_args!("{:#X}", self.poly))
            .field("alpha", &format_args!("{:#X}", self.alpha))
            .finish()
    }
}

/// A residue modulo the field's reduction polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    bits: u32,
    n: u8,
    poly: u32,
}

impl FieldElement {
    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn degree(self) -> u32 {
        u32::from(self.n)
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn is_one(self) -> bool {
        self.bits == 1
    }

    pub fn same_field(self, other: Self) -> bool {
        self.n == other.n && self.poly == other.poly
    }

    fn with_bits(self, bits: u32) -> Self {
        Self { bits, ..self }
    }

    fn order(self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn try_add(self, rhs: Self) -> Result<Self> {
        if !self.same_field(rhs) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.with_bits(self.bits ^ rhs.bits))
    }

    pub fn try_mul(self, rhs: Self) -> Result<Self> {
        if !self.same_field(rhs) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.with_bits(mul_mod(
            self.bits,
            rhs.bits,
            self.poly,
            u32::from(self.n),
        )))
    }

    pub fn try_div(self, rhs: Self) -> Result<Self> {
        self.try_mul(rhs.inv()?)
    }

    /// `self^e`; the exponent is reduced modulo 2^n - 1 for nonzero bases and
    /// `0^0 = 1`.
    pub fn pow(self, e: u64) -> Self {
        if e == 0 {
            return self.with_bits(1);
        }
        if self.bits == 0 {
            return self;
        }
        self.with_bits(pow_mod(
            self.bits,
            e % self.order(),
            self.poly,
            u32::from(self.n),
        ))
    }

    pub fn inv(self) -> Result<Self> {
        if self.bits == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.order() - 1))
    }

    /// `self^(2^i)` with `i` taken modulo n, so negative `i` is the inverse
    /// Frobenius.
    pub fn frobenius(self, i: i64) -> Self {
        let n = u32::from(self.n);
        let e = i.rem_euclid(i64::from(n));
        let mut bits = self.bits;
        for _ in 0..e {
            bits = mul_mod(bits, bits, self.poly, n);
        }
        self.with_bits(bits)
    }

    /// Absolute trace to GF(2), as 0 or 1.
    pub fn trace(self) -> u32 {
        let n = u32::from(self.n);
        let mut acc = 0;
        let mut y = self.bits;
        for _ in 0..n {
            acc ^= y;
            y = mul_mod(y, y, self.poly, n);
        }
        debug_assert!(acc <= 1, "trace must land in GF(2)");
        acc
    }

    /// Relative trace onto GF(2^k): the sum of `self^(2^(jk))` for j < n/k.
    pub fn rel_trace(self, k: u32) -> Result<Self> {
        let n = u32::from(self.n);
        if k == 0 || n % k != 0 {
            return Err(Error::InvalidSubfield { k, n });
        }
        let mut acc = 0;
        let mut y = self;
        for _ in 0..n / k {
            acc ^= y.bits;
            y = y.frobenius(i64::from(k));
        }
        Ok(self.with_bits(acc))
    }

    /// True when `self^(2^k) = self`.
    pub fn in_subfield(self, k: u32) -> bool {
        self.frobenius(i64::from(k)) == self
    }

    /// Multiplicative order is exactly 2^n - 1.
    pub fn is_primitive(self) -> bool {
        has_full_order(self.bits, self.poly, u32::from(self.n))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#X}", self.bits)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#X}", self.bits)
    }
}

impl serde::Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::UpperHex for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::UpperHex::fmt(&self.bits, f)
    }
}

impl fmt::LowerHex for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.bits, f)
    }
}

impl Add for FieldElement {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.try_add(rhs).expect("field mismatch in addition")
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Mul for FieldElement {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.try_mul(rhs).expect("field mismatch in multiplication")
    }
}

impl MulAssign for FieldElement {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}
