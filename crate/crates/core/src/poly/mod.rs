//! Functions L -> L as sparse univariate polynomials and as full value
//! tables.

mod family;
mod text;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

pub use family::{build_family, family_poly, validate_params, Family, FamilyParams, DILLON_MIN_POLY};
pub use text::parse_poly;

/// Exponent reduction for evaluation on all of L: `x^0` stays distinct from
/// `x^(2^n - 1)` because they differ at `x = 0`.
pub(crate) fn reduce_exponent(e: u64, order: u64) -> u64 {
    if e == 0 {
        0
    } else {
        (e - 1) % order + 1
    }
}

/// `2^(i mod n)` as an exponent.
pub(crate) fn pow2(i: i64, n: u32) -> u64 {
    1u64 << i.rem_euclid(i64::from(n))
}

#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    field: FieldSpec,
    // ascending exponents, nonzero coefficients
    terms: Vec<(FieldElement, u64)>,
}

impl SparsePoly {
    pub fn new<I>(field: &FieldSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FieldElement, u64)>,
    {
        let order = field.order();
        let mut acc: Vec<(u64, u32)> = Vec::new();
        for (c, e) in terms {
            if !field.contains(&c) {
                return Err(Error::FieldMismatch);
            }
            acc.push((reduce_exponent(e, order), c.bits()));
        }
        acc.sort_unstable_by_key(|&(e, _)| e);
        let mut merged: Vec<(FieldElement, u64)> = Vec::with_capacity(acc.len());
        for (e, c) in acc {
            match merged.last_mut() {
                Some((last, le)) if *le == e => *last = field.wrap(last.bits() ^ c),
                _ => merged.push((field.wrap(c), e)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        Ok(Self {
            field: field.clone(),
            terms: merged,
        })
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Self {
            field: field.clone(),
            terms: vec![],
        }
    }

    pub fn monomial(field: &FieldSpec, coeff: FieldElement, exp: u64) -> Result<Self> {
        Self::new(field, [(coeff, exp)])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn terms(&self) -> &[(FieldElement, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.iter().map(|&(_, e)| e)
    }

    pub fn eval(&self, x: FieldElement) -> Result<FieldElement> {
        if !self.field.contains(&x) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.field.wrap(self.eval_raw(x.bits())))
    }

    fn eval_raw(&self, x: u32) -> u32 {
        let f = &self.field;
        if x == 0 {
            return self
                .terms
                .iter()
                .find(|&&(_, e)| e == 0)
                .map_or(0, |(c, _)| c.bits());
        }
        match f.log_raw(x) {
            Some(lx) => {
                let lx = u64::from(lx);
                self.terms.iter().fold(0, |acc, &(c, e)| {
                    acc ^ f.mul_raw(c.bits(), f.exp_raw(lx * e))
                })
            }
            None => self
                .terms
                .iter()
                .fold(0, |acc, &(c, e)| acc ^ f.mul_raw(c.bits(), f.pow_raw(x, e))),
        }
    }

    pub fn tabulate(&self) -> FunctionTable {
        self.tabulate_as(Provenance::Polynomial(self.to_string()))
    }

    pub(crate) fn tabulate_as(&self, provenance: Provenance) -> FunctionTable {
        let size = self.field.size();
        let values: Vec<u32> = if size >= 1 << 12 {
            (0..size as u32).into_par_iter().map(|x| self.eval_raw(x)).collect()
        } else {
            (0..size as u32).map(|x| self.eval_raw(x)).collect()
        };
        FunctionTable {
            field: self.field.clone(),
            values,
            provenance,
        }
    }
}

/// Renders in the input grammar: `C*x^E` terms joined by `+`, coefficients
/// in upper-case hex, `x^E` for unit coefficients and bare `C` for
/// constants. The zero polynomial renders as `0`.
impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (c, e)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str("+")?;
            }
            match (c.bits(), e) {
                (c, 0) => write!(f, "{c:X}")?,
                (1, e) => write!(f, "x^{e}")?,
                (c, e) => write!(f, "{c:X}*x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly(n={}, {})", self.field.n(), self)
    }
}

/// Where a table came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Family {
        family: Family,
        params: Vec<(String, String)>,
        polynomial: String,
    },
    Polynomial(String),
    Imported,
    Raw,
}

impl Provenance {
    /// Canonical polynomial text when one is known.
    pub fn polynomial(&self) -> Option<&str> {
        match self {
            Provenance::Family { polynomial, .. } | Provenance::Polynomial(polynomial) => {
                Some(polynomial)
            }
            _ => None,
        }
    }
}

/// The value table of f on all 2^n points; entry i is f at the element whose
/// bit pattern is i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    field: FieldSpec,
    values: Vec<u32>,
    provenance: Provenance,
}

impl FunctionTable {
    pub fn from_values(field: &FieldSpec, values: Vec<u32>, provenance: Provenance) -> Result<Self> {
        if values.len() != field.size() {
            return Err(Error::TableFormat {
                line: values.len(),
                msg: format!("expected {} values, got {}", field.size(), values.len()),
            });
        }
        if let Some(&v) = values.iter().find(|&&v| v >> field.n() != 0) {
            return Err(Error::ElementOutOfRange {
                value: u64::from(v),
                n: field.n(),
            });
        }
        Ok(Self {
            field: field.clone(),
            values,
            provenance,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> u32 {
        self.field.n()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn at(&self, x: FieldElement) -> FieldElement {
        assert!(self.field.contains(&x), "element from a different field");
        self.field.wrap(self.values[x.bits() as usize])
    }

    #[inline]
    pub fn at_raw(&self, x: u32) -> u32 {
        self.values[x as usize]
    }

    /// One upper-case hex value per line, in index order.
    pub fn export(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 8);
        for v in &self.values {
            out.push_str(&format!("{v:X}\n"));
        }
        out
    }

    /// Reverses [`FunctionTable::export`]. Blank trailing lines are ignored;
    /// an optional `0x` prefix is accepted on each value.
    pub fn import(text: &str, field: &FieldSpec) -> Result<Self> {
        let mut values = Vec::with_capacity(field.size());
        let lines: Vec<&str> = text.lines().collect();
        let used = lines
            .iter()
            .rposition(|l| !l.trim().is_empty())
            .map_or(0, |p| p + 1);
        for (idx, line) in lines[..used].iter().enumerate() {
            let lineno = idx + 1;
            let raw = line.trim();
            let digits = raw
                .strip_prefix("0x")
                .or_else(|| raw.strip_prefix("0X"))
                .unwrap_or(raw);
            let v = u64::from_str_radix(digits, 16).map_err(|_| Error::TableFormat {
                line: lineno,
                msg: format!("not a hexadecimal value: {raw:?}"),
            })?;
            if v >> field.n() != 0 {
                return Err(Error::TableFormat {
                    line: lineno,
                    msg: format!("value {v:#X} out of range for GF(2^{})", field.n()),
                });
            }
            if values.len() == field.size() {
                return Err(Error::TableFormat {
                    line: lineno,
                    msg: format!("more than {} values", field.size()),
                });
            }
            values.push(v as u32);
        }
        if values.len() != field.size() {
            return Err(Error::TableFormat {
                line: used,
                msg: format!("expected {} values, got {}", field.size(), values.len()),
            });
        }
        Ok(Self {
            field: field.clone(),
            values,
            provenance: Provenance::Imported,
        })
    }
}
