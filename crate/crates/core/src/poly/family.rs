//! The quadratic APN families, the Gold monomials and Dillon's sextic
//! example, with parameter validation and a default catalog.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::field::{FieldElement, FieldSpec};

use super::{pow2, FunctionTable, Provenance, SparsePoly};

/// x^6 + x^4 + x^3 + x + 1. Dillon's function is APN only for u in the
/// conjugacy class of roots of this polynomial.
pub const DILLON_MIN_POLY: u32 = 0x5B;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// x^(2^s+1) + alpha x^(2^(ik)+2^(mk+s)), n = 3k.
    F1,
    /// x^(2^s+1) + alpha x^(2^(ik)+2^(mk+s)), n = 4k.
    F2,
    /// The n = 2k quadrinomial-plus-sum family.
    F3,
    /// x^3 + Tr(x^9).
    F4,
    /// The n = 3k quadrinomial family.
    F5,
    Gold,
    Dillon,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::F1,
        Family::F2,
        Family::F3,
        Family::F4,
        Family::F5,
        Family::Gold,
        Family::Dillon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::F1 => "f1",
            Family::F2 => "f2",
            Family::F3 => "f3",
            Family::F4 => "f4",
            Family::F5 => "f5",
            Family::Gold => "gold",
            Family::Dillon => "dillon",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

/// Parameters of a family instance. Unset fields are filled from the default
/// catalog by [`FamilyParams::with_defaults`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams {
    pub family: Family,
    pub k: Option<u32>,
    pub s: Option<u32>,
    pub i: Option<u32>,
    pub m: Option<u32>,
    pub d: Option<u32>,
    pub v: Option<FieldElement>,
    pub w: Option<FieldElement>,
    pub gammas: Option<Vec<FieldElement>>,
    pub alpha: Option<FieldElement>,
    pub beta: Option<FieldElement>,
    pub t: Option<FieldElement>,
    pub u: Option<FieldElement>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn exact_div(n: u32, by: u32) -> Option<u32> {
    (n % by == 0).then_some(n / by)
}

fn dillon_root(field: &FieldSpec) -> Option<FieldElement> {
    if field.n() != 6 {
        return None;
    }
    field.elements().find(|&x| {
        let mut acc = field.zero();
        for j in 0..=6 {
            if DILLON_MIN_POLY >> j & 1 == 1 {
                acc += x.pow(j);
            }
        }
        acc.is_zero()
    })
}

impl FamilyParams {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            k: None,
            s: None,
            i: None,
            m: None,
            d: None,
            v: None,
            w: None,
            gammas: None,
            alpha: None,
            beta: None,
            t: None,
            u: None,
        }
    }

    /// The catalog instance for `family` on `field`: smallest valid `s` (or
    /// `d`), `v = w = 0`, zero gammas, and `t = beta = alpha`.
    pub fn defaults(family: Family, field: &FieldSpec) -> Self {
        Self::new(family).with_defaults(field)
    }

    pub fn with_defaults(mut self, field: &FieldSpec) -> Self {
        let n = field.n();
        let zero = field.zero();
        match self.family {
            Family::F1 | Family::F2 => {
                let (parts, modulus) = if self.family == Family::F1 { (3, 3) } else { (4, 4) };
                self.k = self.k.or(exact_div(n, parts));
                if let Some(k) = self.k {
                    let bound = if self.family == Family::F1 { 3 * k } else { 2 * k };
                    self.s = self.s.or_else(|| (1..n.max(2)).find(|&s| gcd(s, bound) == 1));
                    if let Some(s) = self.s {
                        let i = *self.i.get_or_insert(s * k % modulus);
                        self.m.get_or_insert(if self.family == Family::F1 {
                            (3 - i % 3) % 3
                        } else {
                            4 - i % 4
                        });
                    }
                }
                let t = *self.t.get_or_insert(field.alpha());
                if let Some(k) = self.k {
                    self.alpha.get_or_insert(t.pow(pow2(i64::from(k), n) - 1));
                }
            }
            Family::F3 => {
                self.k = self.k.or(exact_div(n, 2));
                if let Some(k) = self.k {
                    self.s = self.s.or_else(|| (1..n.max(2)).step_by(2).find(|&s| gcd(k, s) == 1));
                    self.gammas
                        .get_or_insert_with(|| vec![zero; k.saturating_sub(1) as usize]);
                }
                self.alpha.get_or_insert(field.alpha());
                self.beta.get_or_insert(field.alpha());
            }
            Family::F4 => {}
            Family::F5 => {
                self.k = self.k.or(exact_div(n, 3));
                if let Some(k) = self.k {
                    self.s = self
                        .s
                        .or_else(|| (1..n.max(2)).find(|&s| gcd(s, 3 * k) == 1 && (k + s) % 3 == 0));
                }
                self.v.get_or_insert(zero);
                self.w.get_or_insert(zero);
                self.alpha.get_or_insert(field.alpha());
            }
            Family::Gold => {
                self.d = self.d.or_else(|| (1..n).find(|&d| gcd(d, n) == 1));
            }
            Family::Dillon => {
                self.u = self.u.or_else(|| dillon_root(field)).or(Some(field.alpha()));
            }
        }
        self
    }

    /// Set parameters as (name, value) pairs in a fixed order.
    pub fn summary(&self) -> Vec<(String, String)> {
        let mut out = vec![];
        let ints = [
            ("k", self.k),
            ("s", self.s),
            ("i", self.i),
            ("m", self.m),
            ("d", self.d),
        ];
        for (name, v) in ints {
            if let Some(v) = v {
                out.push((name.to_string(), v.to_string()));
            }
        }
        let els = [
            ("v", self.v),
            ("w", self.w),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("t", self.t),
            ("u", self.u),
        ];
        for (name, v) in els {
            if let Some(v) = v {
                out.push((name.to_string(), v.to_string()));
            }
        }
        if let Some(g) = &self.gammas {
            let list: Vec<String> = g.iter().map(|x| x.to_string()).collect();
            out.push(("gammas".to_string(), list.join(",")));
        }
        out
    }
}

struct Checker<'a> {
    field: &'a FieldSpec,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn require(&mut self, ok: bool, constraint: &str, detail: impl FnOnce() -> String) {
        if !ok {
            self.out.push(Violation::new(constraint, detail()));
        }
    }

    fn missing(&mut self, name: &str) {
        self.out.push(Violation::new(format!("{name} required"), "not set"));
    }

    /// Returns the element if present and in this field.
    fn element(&mut self, name: &str, e: Option<FieldElement>) -> Option<FieldElement> {
        match e {
            None => {
                self.missing(name);
                None
            }
            Some(x) if !self.field.contains(&x) => {
                self.out.push(Violation::new(
                    format!("{name} in field"),
                    format!("{name} belongs to a different field"),
                ));
                None
            }
            Some(x) => Some(x),
        }
    }

    fn primitive(&mut self, name: &str, e: Option<FieldElement>) {
        if let Some(x) = self.element(name, e) {
            self.require(x.is_primitive(), &format!("{name} primitive"), || {
                format!("{name} = {x} is not primitive")
            });
        }
    }

    fn subfield(&mut self, name: &str, e: Option<FieldElement>, k: Option<u32>) -> Option<FieldElement> {
        let x = self.element(name, e)?;
        if let Some(k) = k {
            self.require(x.in_subfield(k), &format!("{name} in GF(2^k)"), || {
                format!("{name} = {x} is not fixed by x -> x^(2^{k})")
            });
        }
        Some(x)
    }

    fn int(&mut self, name: &str, v: Option<u32>) -> Option<u32> {
        if v.is_none() {
            self.missing(name);
        }
        v
    }

    fn split(&mut self, k: Option<u32>, parts: u32) -> Option<u32> {
        let n = self.field.n();
        let k = self.int("k", k)?;
        self.require(parts * k == n, &format!("n = {parts}k"), || {
            format!("n = {n}, k = {k}")
        });
        Some(k)
    }
}

/// All violated constraints of `fp` on `field`; empty means valid.
pub fn validate_params(fp: &FamilyParams, field: &FieldSpec) -> Vec<Violation> {
    let n = field.n();
    let mut c = Checker {
        field,
        out: vec![],
    };
    match fp.family {
        Family::F1 | Family::F2 => {
            let f1 = fp.family == Family::F1;
            let k = c.split(fp.k, if f1 { 3 } else { 4 });
            let s = c.int("s", fp.s);
            let i = c.int("i", fp.i);
            let m = c.int("m", fp.m);
            if let Some(k) = k {
                if f1 {
                    c.require(gcd(k, 3) == 1, "(k,3)=1", || format!("gcd({k},3) = {}", gcd(k, 3)));
                } else {
                    c.require(gcd(k, 2) == 1, "(k,2)=1", || format!("gcd({k},2) = {}", gcd(k, 2)));
                }
                c.require(k >= 3, "k >= 3", || format!("k = {k}"));
            }
            if let (Some(k), Some(s)) = (k, s) {
                let bound = if f1 { 3 * k } else { 2 * k };
                let label = if f1 { "(s,3k)=1" } else { "(s,2k)=1" };
                c.require(gcd(s, bound) == 1, label, || {
                    format!("gcd({s},{bound}) = {}", gcd(s, bound))
                });
                if let Some(i) = i {
                    let md = if f1 { 3 } else { 4 };
                    let label = if f1 { "i ≡ sk mod 3" } else { "i ≡ sk mod 4" };
                    c.require(i % md == s * k % md, label, || {
                        format!("i = {i}, sk = {}", s * k)
                    });
                }
            }
            if let (Some(i), Some(m)) = (i, m) {
                if f1 {
                    c.require((i + m) % 3 == 0, "m ≡ -i mod 3", || format!("i = {i}, m = {m}"));
                } else {
                    c.require(i < 4 && m == 4 - i, "m = 4-i", || format!("i = {i}, m = {m}"));
                }
            }
            c.primitive("t", fp.t);
            if let (Some(k), Some(t), Some(alpha)) = (k, fp.t, c.element("alpha", fp.alpha)) {
                if field.contains(&t) {
                    let want = t.pow(pow2(i64::from(k), n) - 1);
                    c.require(alpha == want, "alpha = t^(2^k-1)", || {
                        format!("alpha = {alpha}, t^(2^k-1) = {want}")
                    });
                }
            }
        }
        Family::F3 => {
            let k = c.split(fp.k, 2);
            let s = c.int("s", fp.s);
            if let Some(k) = k {
                c.require(k % 2 == 1, "k odd", || format!("k = {k}"));
            }
            if let Some(s) = s {
                c.require(s % 2 == 1, "s odd", || format!("s = {s}"));
            }
            if let (Some(k), Some(s)) = (k, s) {
                c.require(gcd(k, s) == 1, "(k,s)=1", || format!("gcd({k},{s}) = {}", gcd(k, s)));
            }
            c.primitive("alpha", fp.alpha);
            c.primitive("beta", fp.beta);
            match &fp.gammas {
                None => c.missing("gammas"),
                Some(g) => {
                    if let Some(k) = k {
                        c.require(g.len() + 1 == k as usize, "gammas has k-1 entries", || {
                            format!("{} entries, k = {k}", g.len())
                        });
                    }
                    for (idx, &x) in g.iter().enumerate() {
                        c.subfield(&format!("gamma_{}", idx + 1), Some(x), k);
                    }
                }
            }
        }
        Family::F4 => {}
        Family::F5 => {
            let k = c.split(fp.k, 3);
            let s = c.int("s", fp.s);
            if let Some(k) = k {
                c.require(gcd(3, k) == 1, "(3,k)=1", || format!("gcd(3,{k}) = {}", gcd(3, k)));
            }
            if let (Some(k), Some(s)) = (k, s) {
                c.require(gcd(s, 3 * k) == 1, "(s,3k)=1", || {
                    format!("gcd({s},{}) = {}", 3 * k, gcd(s, 3 * k))
                });
                c.require((k + s) % 3 == 0, "3 | k+s", || format!("k + s = {}", k + s));
            }
            c.primitive("alpha", fp.alpha);
            let v = c.subfield("v", fp.v, k);
            let w = c.subfield("w", fp.w, k);
            if let (Some(v), Some(w)) = (v, w) {
                c.require(!(v * w).is_one(), "vw ≠ 1", || format!("v = {v}, w = {w}"));
            }
        }
        Family::Gold => {
            if let Some(d) = c.int("d", fp.d) {
                c.require(d >= 1, "d >= 1", || format!("d = {d}"));
                c.require(gcd(d, n) == 1, "(d,n)=1", || format!("gcd({d},{n}) = {}", gcd(d, n)));
            }
        }
        Family::Dillon => {
            c.require(n == 6, "n = 6", || format!("n = {n}"));
            c.primitive("u", fp.u);
        }
    }
    c.out
}

/// The exact polynomial of a validated family instance, all Frobenius
/// exponents resolved modulo n.
pub fn family_poly(fp: &FamilyParams, field: &FieldSpec) -> Result<SparsePoly> {
    let violations = validate_params(fp, field);
    if !violations.is_empty() {
        return Err(Error::InvalidParams(violations));
    }
    let n = field.n();
    let p2 = |i: i64| pow2(i, n);
    let one = field.one();
    // validation guarantees every field used below is present
    let int = |v: Option<u32>| i64::from(v.expect("validated"));
    let el = |v: Option<FieldElement>| v.expect("validated");
    let terms: Vec<(FieldElement, u64)> = match fp.family {
        Family::F1 | Family::F2 => {
            let (k, s, i, m) = (int(fp.k), int(fp.s), int(fp.i), int(fp.m));
            vec![(one, p2(s) + 1), (el(fp.alpha), p2(i * k) + p2(m * k + s))]
        }
        Family::F3 => {
            let (k, s) = (int(fp.k), int(fp.s));
            let alpha = el(fp.alpha);
            let mut t = vec![
                (alpha, p2(s) + 1),
                (alpha.frobenius(k), p2(k + s) + p2(k)),
                (el(fp.beta), p2(k) + 1),
            ];
            let gammas = fp.gammas.as_ref().expect("validated");
            for (idx, &g) in gammas.iter().enumerate() {
                let i = idx as i64 + 1;
                t.push((g, p2(k + i) + p2(i)));
            }
            t
        }
        Family::F4 => {
            // Tr(x^9) = sum of x^(9 * 2^j), landing in GF(2) = {0, 1}
            let mut t = vec![(one, 3)];
            t.extend((0..n).map(|j| (one, 9u64 << j)));
            t
        }
        Family::F5 => {
            let (k, s) = (int(fp.k), int(fp.s));
            let alpha = el(fp.alpha);
            vec![
                (alpha.frobenius(k), p2(-k) + p2(k + s)),
                (alpha, p2(s) + 1),
                (el(fp.v), p2(-k) + 1),
                (el(fp.w) * alpha.pow(p2(k) + 1), p2(k + s) + p2(s)),
            ]
        }
        Family::Gold => vec![(one, p2(int(fp.d)) + 1)],
        Family::Dillon => {
            let u = el(fp.u);
            vec![
                (one, 3),
                (u.pow(11), 5),
                (u.pow(13), 9),
                (one, 17),
                (u.pow(11), 33),
                (one, 48),
            ]
        }
    };
    SparsePoly::new(field, terms)
}

/// Validates, assembles and tabulates a family instance.
pub fn build_family(fp: &FamilyParams, field: &FieldSpec) -> Result<FunctionTable> {
    let poly = family_poly(fp, field)?;
    let provenance = Provenance::Family {
        family: fp.family,
        params: fp.summary(),
        polynomial: poly.to_string(),
    };
    Ok(poly.tabulate_as(provenance))
}
