//! Numerical trace of the kernel-bound argument for the n = 3k family
//! `f(x) = alpha^(2^k) x^(2^-k + 2^(k+s)) + alpha x^(2^s + 1)
//!        + v x^(2^-k + 1) + w alpha^(2^k + 1) x^(2^(k+s) + 2^s)`.
//!
//! Every named intermediate (theta, t(u), r(u), z, B, D, P(theta)) is
//! evaluated from its closed form and the claims made about it are checked
//! for a given component b.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::field::{FieldElement, FieldSpec};
use crate::poly::{pow2, validate_params, Family, FamilyParams};

use super::matrix::{LinearizedMap, MapProvenance};

/// A validated F5 parameter set.
#[derive(Debug, Clone)]
pub struct F5Instance {
    field: FieldSpec,
    k: i64,
    s: i64,
    alpha: FieldElement,
    v: FieldElement,
    w: FieldElement,
}

impl F5Instance {
    pub fn new(fp: &FamilyParams, field: &FieldSpec) -> Result<Self> {
        if fp.family != Family::F5 {
            return Err(Error::InvalidParams(vec![Violation::new(
                "family = f5",
                format!("family is {}", fp.family),
            )]));
        }
        let violations = validate_params(fp, field);
        if !violations.is_empty() {
            return Err(Error::InvalidParams(violations));
        }
        let get = |e: Option<FieldElement>| e.expect("validated");
        Ok(Self {
            field: field.clone(),
            k: i64::from(fp.k.expect("validated")),
            s: i64::from(fp.s.expect("validated")),
            alpha: get(fp.alpha),
            v: get(fp.v),
            w: get(fp.w),
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn k(&self) -> u32 {
        self.k as u32
    }

    fn e(&self, i: i64) -> u64 {
        pow2(i, self.field.n())
    }

    /// `x - y` modulo 2^n - 1, for exponent arithmetic.
    fn sub(&self, x: u64, y: u64) -> u64 {
        let o = self.field.order();
        (x % o + o - y % o) % o
    }

    fn check_b(&self, b: FieldElement) -> Result<()> {
        if !self.field.contains(&b) {
            return Err(Error::FieldMismatch);
        }
        if b.is_zero() {
            return Err(Error::ZeroComponent);
        }
        Ok(())
    }

    /// The eight (coefficient, Frobenius power) terms of L_b.
    pub fn lb_terms(&self, b: FieldElement) -> [(FieldElement, i64); 8] {
        let (k, s, a, v, w) = (self.k, self.s, self.alpha, self.v, self.w);
        [
            (a * b, s),
            (a.frobenius(-s) * b.frobenius(-s), -s),
            (a.frobenius(-k) * b.frobenius(k), -k + s),
            (a.frobenius(-s) * b.frobenius(-k - s), k - s),
            (v * b.frobenius(k), k),
            (v * b, -k),
            (
                w.frobenius(-s) * b.frobenius(-k - s) * a.pow(self.e(-s) + self.e(-k - s)),
                -k,
            ),
            (
                w.frobenius(-s) * b.frobenius(-s) * a.pow(self.e(k - s) + self.e(-s)),
                k,
            ),
        ]
    }

    pub fn lb_apply(&self, b: FieldElement, u: FieldElement) -> FieldElement {
        self.lb_terms(b)
            .iter()
            .fold(self.field.zero(), |acc, &(c, i)| acc + c * u.frobenius(i))
    }

    pub fn lb_map(&self, b: FieldElement) -> Result<LinearizedMap> {
        self.check_b(b)?;
        let terms = self.lb_terms(b);
        let field = &self.field;
        Ok(LinearizedMap::from_fn(
            field.n(),
            |u| {
                let u = field.wrap(u);
                terms
                    .iter()
                    .fold(field.zero(), |acc, &(c, i)| acc + c * u.frobenius(i))
                    .bits()
            },
            MapProvenance::ExplicitLb,
        ))
    }

    /// `theta = alpha^(2^-s) b^(2^-k - 2^(k-s))`.
    pub fn theta(&self, b: FieldElement) -> FieldElement {
        let (k, s) = (self.k, self.s);
        self.alpha.frobenius(-s) * b.pow(self.sub(self.e(-k), self.e(k - s)))
    }

    /// `t(u) = b^(2^-s + 2^(k-s)) (u^(2^-s) + w^(2^-s) alpha^(2^(k-s)) u^(2^k))`.
    pub fn t_of(&self, b: FieldElement, u: FieldElement) -> FieldElement {
        let (k, s) = (self.k, self.s);
        b.pow(self.e(-s) + self.e(k - s))
            * (u.frobenius(-s) + self.w.frobenius(-s) * self.alpha.frobenius(k - s) * u.frobenius(k))
    }

    /// `r(u) = b^(2^k + 2^-k) (v u^(2^k) + alpha^(2^-k) u^(2^(s-k)))`.
    pub fn r_of(&self, b: FieldElement, u: FieldElement) -> FieldElement {
        let (k, s) = (self.k, self.s);
        b.pow(self.e(k) + self.e(-k))
            * (self.v * u.frobenius(k) + self.alpha.frobenius(-k) * u.frobenius(-k + s))
    }
}

/// t(u) and r(u) for one kernel element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelRecord {
    pub u: FieldElement,
    pub t: FieldElement,
    pub r: FieldElement,
}

/// Outcome of every claim for one b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProofChecks {
    /// theta + theta^(2^-k) != 0
    pub theta_conj_nonzero: bool,
    pub p_theta_nonzero: bool,
    /// P(theta)^(2^k) = P(theta)
    pub p_theta_in_subfield: bool,
    /// the product form of P(theta) equals its relative-trace form
    pub p_theta_forms_agree: bool,
    pub z_in_subfield: bool,
    pub d_nonzero: bool,
    pub kernel_dim_at_most_2: bool,
    /// b^(2^-k) L_b(u) = r + r^(2^k) + theta (t + t^(2^k)) as maps
    pub lb_matches_r_t: bool,
    /// r + r^(2^k) + theta (t + t^(2^k)) = 0 on the kernel
    pub eq2: bool,
    /// t^(2^(k+s)) + w r = b^(2^k + 2^-k) (1 + vw) u^(2^k) on the kernel
    pub eq3: bool,
    /// v t^(2^(k+s)) + r = b^(2^k + 2^-k) (1 + vw) alpha^(2^-k) u^(2^(s-k)) on the kernel
    pub eq4: bool,
    /// Tr_k((theta + theta^(2^-k)) t) = 0 on the kernel
    pub eq6_t: bool,
    /// Tr_k(theta^(2^k) (theta + theta^(2^-k)) r) = 0 on the kernel
    pub eq6_r: bool,
    /// z^(2^s) (theta + theta^(2^-k))^(2^-k - 2^(2s-k)) P(theta)^(2^s - 1) T^(2^2s) + T = 0
    /// for T = t + t^(2^k) on the kernel
    pub t_sum_equation: bool,
    /// u is recovered from t + t^(2^k) through D, B on the kernel
    pub u_from_t_sum: bool,
    /// t + t^(2^k) takes at most 2 (n odd) or 4 (n even) values on the kernel
    pub t_sum_count: bool,
}

impl ProofChecks {
    pub fn entries(&self) -> [(&'static str, bool); 16] {
        [
            ("theta_conj_nonzero", self.theta_conj_nonzero),
            ("p_theta_nonzero", self.p_theta_nonzero),
            ("p_theta_in_subfield", self.p_theta_in_subfield),
            ("p_theta_forms_agree", self.p_theta_forms_agree),
            ("z_in_subfield", self.z_in_subfield),
            ("d_nonzero", self.d_nonzero),
            ("kernel_dim_at_most_2", self.kernel_dim_at_most_2),
            ("lb_matches_r_t", self.lb_matches_r_t),
            ("eq2", self.eq2),
            ("eq3", self.eq3),
            ("eq4", self.eq4),
            ("eq6_t", self.eq6_t),
            ("eq6_r", self.eq6_r),
            ("t_sum_equation", self.t_sum_equation),
            ("u_from_t_sum", self.u_from_t_sum),
            ("t_sum_count", self.t_sum_count),
        ]
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.entries()
            .into_iter()
            .filter(|&(_, ok)| !ok)
            .map(|(name, _)| name)
            .collect()
    }

    pub fn all_pass(&self) -> bool {
        self.entries().iter().all(|&(_, ok)| ok)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofTrace {
    pub b: FieldElement,
    pub theta: FieldElement,
    pub z: FieldElement,
    #[serde(rename = "B")]
    pub big_b: FieldElement,
    #[serde(rename = "D")]
    pub d: FieldElement,
    pub p_theta: FieldElement,
    pub kernel_dim: u32,
    pub kernel: Vec<KernelRecord>,
    /// distinct values of t(u) + t(u)^(2^k) over the kernel
    pub t_sums: Vec<FieldElement>,
    pub checks: ProofChecks,
}

/// Computes every named quantity for component `b` and records whether each
/// claim holds. Failed claims are data here; see [`proof_trace_f5`] for the
/// strict variant.
pub fn trace_f5_claims(inst: &F5Instance, b: FieldElement) -> Result<ProofTrace> {
    inst.check_b(b)?;
    let (k, s) = (inst.k, inst.s);
    let field = &inst.field;
    let (a, v, w) = (inst.alpha, inst.v, inst.w);
    let e = |i: i64| inst.e(i);

    let theta = inst.theta(b);
    let conj = theta + theta.frobenius(-k);
    let one_vw = field.one() + v * w;
    let z = (one_vw * b.pow(e(-k) + e(k) + 1)).pow(inst.sub(e(-s), 1));
    let big_b = one_vw * b.pow(e(k) + 1);
    let d = a.frobenius(k - s) * big_b.pow(e(-s) + 1)
        + a.frobenius(-s) * big_b.pow(e(-k - s) + e(k));
    let p_theta = (theta.frobenius(s) * (theta.pow(e(-k) + 1) + theta.pow(e(-k) + e(k))))
        .rel_trace(inst.k())?;
    let p_product =
        conj.pow(e(-k + s) + 1) * theta.frobenius(k) + conj.pow(e(k + s) + e(k)) * theta.frobenius(-k);

    let bk = b.frobenius(-k);
    let lb_matches_r_t = (0..field.n()).all(|j| {
        let u = field.wrap(1 << j);
        let (t, r) = (inst.t_of(b, u), inst.r_of(b, u));
        bk * inst.lb_apply(b, u) == r + r.frobenius(k) + theta * (t + t.frobenius(k))
    });

    let map = inst.lb_map(b)?;
    let kernel_dim = map.kernel_dim();
    let scale = b.pow(e(k) + e(-k)) * one_vw;
    let d_inv = d.inv().ok();
    let t_coeff = z.frobenius(s)
        * conj.pow(inst.sub(e(-k), e(2 * s - k)))
        * p_theta.pow(inst.sub(e(s), 1));
    let mut eq = [true; 7];
    let mut kernel = vec![];
    let mut t_sums = vec![];
    for u in map.kernel() {
        let u = field.wrap(u);
        let (t, r) = (inst.t_of(b, u), inst.r_of(b, u));
        let t_sum = t + t.frobenius(k);
        let r_sum = r + r.frobenius(k);
        let tks = t.frobenius(k + s);
        eq[0] &= (r_sum + theta * t_sum).is_zero();
        eq[1] &= tks + w * r == scale * u.frobenius(k);
        eq[2] &= v * tks + r == scale * a.frobenius(-k) * u.frobenius(-k + s);
        eq[3] &= (conj * t).rel_trace(inst.k())?.is_zero();
        eq[4] &= (theta.frobenius(k) * conj * r).rel_trace(inst.k())?.is_zero();
        let theta_t = theta * t_sum;
        let recovered = d_inv.map(|di| {
            di * (big_b.frobenius(k) * (v.frobenius(-s) * t_sum.frobenius(-k) + theta_t.frobenius(k - s))
                + a.frobenius(k - s)
                    * big_b.frobenius(-s)
                    * (t_sum.frobenius(s) + w * theta_t.frobenius(-k)))
        });
        eq[5] &= recovered == Some(u);
        eq[6] &= (t_coeff * t_sum.frobenius(2 * s) + t_sum).is_zero();
        if !t_sums.contains(&t_sum) {
            t_sums.push(t_sum);
        }
        kernel.push(KernelRecord { u, t, r });
    }
    t_sums.sort_by_key(|x| x.bits());
    let t_sum_limit = if field.n() % 2 == 1 { 2 } else { 4 };

    let checks = ProofChecks {
        theta_conj_nonzero: !conj.is_zero(),
        p_theta_nonzero: !p_theta.is_zero(),
        p_theta_in_subfield: p_theta.in_subfield(inst.k()),
        p_theta_forms_agree: p_theta == p_product,
        z_in_subfield: z.in_subfield(inst.k()),
        d_nonzero: !d.is_zero(),
        kernel_dim_at_most_2: kernel_dim <= 2,
        lb_matches_r_t,
        eq2: eq[0],
        eq3: eq[1],
        eq4: eq[2],
        eq6_t: eq[3],
        eq6_r: eq[4],
        t_sum_equation: eq[6],
        u_from_t_sum: eq[5],
        t_sum_count: t_sums.len() <= t_sum_limit,
    };
    Ok(ProofTrace {
        b,
        theta,
        z,
        big_b,
        d,
        p_theta,
        kernel_dim,
        kernel,
        t_sums,
        checks,
    })
}

/// Like [`trace_f5_claims`] but any failed claim is an
/// [`Error::CheckFailure`] naming it.
pub fn proof_trace_f5(fp: &FamilyParams, field: &FieldSpec, b: FieldElement) -> Result<ProofTrace> {
    let inst = F5Instance::new(fp, field)?;
    let trace = trace_f5_claims(&inst, b)?;
    let failed = trace.checks.failures();
    if !failed.is_empty() {
        return Err(Error::CheckFailure {
            b: b.bits(),
            check: failed.join(", "),
        });
    }
    Ok(trace)
}

/// Traces for many components, in ascending order of b regardless of the
/// order given or the worker count.
pub fn verify_f5(inst: &F5Instance, bs: &[FieldElement]) -> Result<Vec<ProofTrace>> {
    let mut bs = bs.to_vec();
    bs.sort_by_key(|b| b.bits());
    bs.dedup();
    bs.par_iter().map(|&b| trace_f5_claims(inst, b)).collect()
}

/// The matrix of the closed-form eight-term L_b.
pub fn lb_explicit_f5(fp: &FamilyParams, field: &FieldSpec, b: FieldElement) -> Result<LinearizedMap> {
    F5Instance::new(fp, field)?.lb_map(b)
}
