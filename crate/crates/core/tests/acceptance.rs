//! Acceptance criteria, one PASS/FAIL line each. Set `APNSPECTRA_SLOW=1` to
//! add the exhaustive n = 15 sweep.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use apnspectra::analysis::{
    diff_spectrum, diff_spectrum_rows, full_spectrum, spectrum_over, walsh_point, walsh_row, WalshSpectrum,
};
use apnspectra::poly::{build_family, Family, FamilyParams, SparsePoly};
use apnspectra::quadratic::{lb_explicit_f5, lemma1_root_count, trace_f5_claims, F5Instance, QuadraticForm};
use apnspectra::{FieldElement, FieldSpec, FunctionTable};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5EED_A9E5;

type Outcome = Result<String, String>;

fn gf(n: u32) -> FieldSpec {
    FieldSpec::new(n, None).unwrap()
}

fn f5(field: &FieldSpec, k: u32, s: u32, v: FieldElement, w: FieldElement) -> FamilyParams {
    let mut p = FamilyParams::new(Family::F5);
    p.k = Some(k);
    p.s = Some(s);
    p.v = Some(v);
    p.w = Some(w);
    p.with_defaults(field)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn value_set(sp: &WalshSpectrum) -> BTreeSet<i64> {
    sp.counts.keys().copied().collect()
}

fn set(values: &[i64]) -> BTreeSet<i64> {
    values.iter().copied().collect()
}

/// Value set by direct summation over every (a, b).
fn direct_value_set(t: &FunctionTable) -> BTreeSet<i64> {
    let f = t.field();
    let mut out = BTreeSet::new();
    for b in f.elements().skip(1) {
        for a in f.elements() {
            out.insert(walsh_point(t, a, b).unwrap());
        }
    }
    out
}

fn sample_b(field: &FieldSpec, count: usize, seed: u64) -> Vec<FieldElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, field.order() as usize, count).into_vec();
    idx.sort_unstable();
    idx.into_iter()
        .map(|i| field.element(i as u64 + 1).unwrap())
        .collect()
}

/// Pairs (v, w) in GF(2^k) x GF(2^k) with vw != 1.
fn vw_pairs(field: &FieldSpec, k: u32) -> Vec<(FieldElement, FieldElement)> {
    let sub: Vec<FieldElement> = field.elements().filter(|x| x.in_subfield(k)).collect();
    let mut out = vec![];
    for &v in &sub {
        for &w in &sub {
            if !(v * w).is_one() {
                out.push((v, w));
            }
        }
    }
    out
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:.2?}, limit {limit:?}"))
}

fn c1_odd() -> Outcome {
    let start = Instant::now();
    let f = gf(3);
    let pairs = vw_pairs(&f, 1);
    for &(v, w) in &pairs {
        let t = build_family(&f5(&f, 1, 2, v, w), &f).map_err(|e| e.to_string())?;
        let got = value_set(&full_spectrum(&t).unwrap());
        ensure(got == set(&[-4, 0, 4]), || format!("n=3 v={v} w={w}: {got:?}"))?;
        ensure(direct_value_set(&t) == got, || "n=3 direct path disagrees".into())?;
    }
    within(start.elapsed(), Duration::from_secs(1), "n=3")?;

    let f = gf(15);
    let t = build_family(&f5(&f, 5, 1, f.zero(), f.zero()), &f).map_err(|e| e.to_string())?;
    let bs = sample_b(&f, 256, SEED);
    let got = value_set(&spectrum_over(&t, &bs).unwrap());
    ensure(got.is_subset(&set(&[-256, 0, 256])), || format!("n=15 sample: {got:?}"))?;
    let mut note = format!("{} (v,w) at n=3; n=15 over 256 sampled b", pairs.len());

    if std::env::var("APNSPECTRA_SLOW").as_deref() == Ok("1") {
        let start = Instant::now();
        let all: Vec<FieldElement> = f.elements().skip(1).collect();
        let got = value_set(&spectrum_over(&t, &all).unwrap());
        ensure(got == set(&[-256, 0, 256]), || format!("n=15 full: {got:?}"))?;
        within(start.elapsed(), Duration::from_secs(15 * 60), "n=15 full sweep")?;
        note.push_str(" and full sweep");
    } else {
        note.push_str("; full n=15 sweep skipped (APNSPECTRA_SLOW!=1)");
    }
    Ok(note)
}

fn c2_even() -> Outcome {
    let start = Instant::now();
    let f = gf(6);
    let pairs = vw_pairs(&f, 2);
    for &(v, w) in &pairs {
        let t = build_family(&f5(&f, 2, 1, v, w), &f).map_err(|e| e.to_string())?;
        let got = value_set(&full_spectrum(&t).unwrap());
        ensure(got == set(&[-16, -8, 0, 8, 16]), || format!("n=6 v={v} w={w}: {got:?}"))?;
    }
    within(start.elapsed(), Duration::from_secs(1), "n=6 sweep")?;
    let t = build_family(&f5(&f, 2, 1, f.zero(), f.zero()), &f).unwrap();
    ensure(direct_value_set(&t) == set(&[-16, -8, 0, 8, 16]), || "n=6 direct path".into())?;

    let start = Instant::now();
    let f = gf(12);
    let t = build_family(&f5(&f, 4, 5, f.zero(), f.zero()), &f).map_err(|e| e.to_string())?;
    let got = value_set(&full_spectrum(&t).unwrap());
    ensure(got == set(&[-128, -64, 0, 64, 128]), || format!("n=12: {got:?}"))?;
    within(start.elapsed(), Duration::from_secs(60), "n=12")?;
    Ok(format!("{} (v,w) at n=6; n=12 full spectrum", pairs.len()))
}

fn c3_dillon() -> Outcome {
    let start = Instant::now();
    let f = FieldSpec::new(6, Some(0x5B)).unwrap();
    let mut p = FamilyParams::new(Family::Dillon);
    p.u = Some(f.alpha());
    let t = build_family(&p.with_defaults(&f), &f).map_err(|e| e.to_string())?;
    let sp = full_spectrum(&t).unwrap();
    let du = diff_spectrum(&t).uniformity();
    ensure(sp.distinct() == 7, || format!("{} distinct values", sp.distinct()))?;
    ensure(direct_value_set(&t).len() == 7, || "direct path disagrees".into())?;
    ensure(du == 2, || format!("differential uniformity {du}"))?;
    within(start.elapsed(), Duration::from_secs(1), "dillon")?;
    Ok(format!("values {:?}, uniformity 2", sp.values()))
}

fn c4_kernel_bound() -> Outcome {
    let mut note = vec![];
    for (n, k, s) in [(3, 1, 2), (6, 2, 1), (12, 4, 5)] {
        let f = gf(n);
        let p = f5(&f, k, s, f.zero(), f.zero());
        let t = build_family(&p, &f).unwrap();
        let start = Instant::now();
        let q = QuadraticForm::new(&t).map_err(|e| e.to_string())?;
        let mut max = 0;
        for b in f.elements().skip(1) {
            let d = q.kernel_map(b).unwrap().kernel_dim();
            ensure(d <= 2, || format!("n={n} b={b}: dim {d}"))?;
            max = max.max(d);
        }
        if n == 12 {
            within(start.elapsed(), Duration::from_secs(30), "n=12 kernels")?;
        }
        note.push(format!("n={n} max dim {max}"));
    }
    Ok(note.join(", "))
}

fn c5_identity() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for (n, k, s) in [(3, 1, 2), (6, 2, 1)] {
        let f = gf(n);
        for (v, w) in vw_pairs(&f, k) {
            let t = build_family(&f5(&f, k, s, v, w), &f).unwrap();
            let q = QuadraticForm::new(&t).unwrap();
            for b in f.elements().skip(1) {
                for (a, (lhs, rhs)) in q.squared_identity_row(b).unwrap().into_iter().enumerate() {
                    ensure(lhs == rhs, || format!("n={n} a={a:#X} b={b}: {lhs} != {rhs}"))?;
                    pairs += 1;
                }
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(10), "identity")?;
    Ok(format!("{pairs} (a,b) pairs over all valid (v,w)"))
}

fn c6_explicit_lb() -> Outcome {
    let mut checked = 0;
    for (n, k, s) in [(3, 1, 2), (6, 2, 1), (12, 4, 5)] {
        let f = gf(n);
        let cases = if n == 12 {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
            let sub: Vec<FieldElement> = f.elements().filter(|x| x.in_subfield(k)).collect();
            let (v, w) = loop {
                let v = sub[rng.gen_range(0..sub.len())];
                let w = sub[rng.gen_range(0..sub.len())];
                if !(v * w).is_one() {
                    break (v, w);
                }
            };
            vec![(v, w, sample_b(&f, 64, SEED ^ 7))]
        } else {
            let all: Vec<FieldElement> = f.elements().skip(1).collect();
            vw_pairs(&f, k).into_iter().map(|(v, w)| (v, w, all.clone())).collect()
        };
        for (v, w, bs) in cases {
            let p = f5(&f, k, s, v, w);
            let t = build_family(&p, &f).unwrap();
            let q = QuadraticForm::new(&t).unwrap();
            for b in bs {
                let explicit = lb_explicit_f5(&p, &f, b).unwrap().kernel();
                let generic = q.kernel_map(b).unwrap().kernel();
                ensure(explicit == generic, || format!("n={n} v={v} w={w} b={b}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} kernels compared"))
}

fn c7_proof_trace() -> Outcome {
    let mut checked = 0;
    for (n, k, s) in [(3, 1, 2), (6, 2, 1), (12, 4, 5)] {
        let f = gf(n);
        let bs = if n == 12 {
            sample_b(&f, 256, SEED ^ 12)
        } else {
            f.elements().skip(1).collect()
        };
        for (v, w) in vw_pairs(&f, k) {
            let inst = F5Instance::new(&f5(&f, k, s, v, w), &f).map_err(|e| e.to_string())?;
            for &b in &bs {
                let tr = trace_f5_claims(&inst, b).unwrap();
                let failed = tr.checks.failures();
                ensure(failed.is_empty(), || format!("n={n} v={v} w={w} b={b}: {failed:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (v,w,b) traces, every claim holds"))
}

fn instance(family: Family, n: u32, set_params: impl FnOnce(&mut FamilyParams)) -> Result<FunctionTable, String> {
    let f = gf(n);
    let mut p = FamilyParams::new(family);
    set_params(&mut p);
    build_family(&p.with_defaults(&f), &f).map_err(|e| format!("{family} n={n}: {e}"))
}

/// Instances for the cross-family and APN criteria, with their expected
/// spectrum. `None` marks an instance whose parameters were rejected.
fn cross_family() -> Vec<(String, Result<FunctionTable, String>, Vec<i64>)> {
    let mut out = vec![];
    for n in [3u32, 5, 7] {
        let m = 1i64 << ((n + 1) / 2);
        out.push((format!("gold n={n}"), instance(Family::Gold, n, |p| p.d = Some(1)), vec![-m, 0, m]));
    }
    out.push(("f4 n=5".into(), instance(Family::F4, 5, |_| {}), vec![-8, 0, 8]));
    out.push(("f4 n=6".into(), instance(Family::F4, 6, |_| {}), vec![-16, -8, 0, 8, 16]));
    out.push((
        "f3 n=6".into(),
        instance(Family::F3, 6, |p| {
            p.k = Some(3);
            p.s = Some(1);
        }),
        vec![-16, -8, 0, 8, 16],
    ));
    out.push((
        "f1 n=12".into(),
        instance(Family::F1, 12, |p| {
            p.k = Some(4);
            p.s = Some(1);
        }),
        vec![-128, -64, 0, 64, 128],
    ));
    out.push((
        "f2 n=12".into(),
        instance(Family::F2, 12, |p| {
            p.k = Some(3);
            p.s = Some(1);
        }),
        vec![-128, -64, 0, 64, 128],
    ));
    out
}

fn c8_cross_family() -> Outcome {
    let mut notes = vec![];
    for (name, table, want) in cross_family() {
        let start = Instant::now();
        let t = table?;
        let got = value_set(&full_spectrum(&t).unwrap());
        ensure(got == set(&want), || format!("{name}: {got:?}"))?;
        within(start.elapsed(), Duration::from_secs(60), &name)?;
        notes.push(name);
    }
    Ok(notes.join(", "))
}

fn c9_apn() -> Outcome {
    let mut tables: Vec<(String, FunctionTable)> = vec![];
    for (n, k, s) in [(3, 1, 2), (6, 2, 1)] {
        let f = gf(n);
        for (v, w) in vw_pairs(&f, k) {
            tables.push((format!("f5 n={n} v={v} w={w}"), build_family(&f5(&f, k, s, v, w), &f).unwrap()));
        }
    }
    let f = gf(12);
    tables.push(("f5 n=12".into(), build_family(&f5(&f, 4, 5, f.zero(), f.zero()), &f).unwrap()));
    for (name, t, _) in cross_family() {
        tables.push((name, t?));
    }
    for (name, t) in &tables {
        let start = Instant::now();
        let du = diff_spectrum(t).uniformity();
        ensure(du == 2, || format!("{name}: uniformity {du}"))?;
        if t.n() == 12 {
            within(start.elapsed(), Duration::from_secs(300), name)?;
        }
    }
    let start = Instant::now();
    let f = gf(15);
    let t = build_family(&f5(&f, 5, 1, f.zero(), f.zero()), &f).unwrap();
    let rows = sample_b(&f, 512, SEED ^ 15);
    let du = diff_spectrum_rows(&t, &rows).unwrap().uniformity();
    ensure(du == 2, || format!("f5 n=15 sampled rows: uniformity {du}"))?;
    within(start.elapsed(), Duration::from_secs(30), "n=15 rows")?;
    Ok(format!("{} instances with full DDT; f5 n=15 over 512 rows", tables.len()))
}

fn c10_root_bound() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let fields = [gf(5), gf(7)];
    let mut max_ratio = (0, 1);
    for _ in 0..1000 {
        let f = &fields[rng.gen_range(0..2)];
        let n = f.n();
        let s = loop {
            let s = rng.gen_range(1..n);
            if (1..=s).all(|g| g == 1 || s % g != 0 || n % g != 0) {
                break s;
            }
        };
        let d = rng.gen_range(1..=2u32);
        let coeffs: Vec<FieldElement> = (0..=d)
            .map(|i| {
                let lo = if i == d { 1 } else { 0 };
                f.element(rng.gen_range(lo..f.size() as u64)).unwrap()
            })
            .collect();
        let terms: Vec<(FieldElement, u64)> = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, 1u64 << ((s * i as u32) % n)))
            .collect();
        let p = SparsePoly::new(f, terms.clone()).unwrap();
        let rc = lemma1_root_count(&p, s).map_err(|e| format!("n={n} s={s} d={d}: {e}"))?;
        // independent count by evaluating term by term
        let roots = f
            .elements()
            .filter(|&x| terms.iter().fold(f.zero(), |acc, &(c, e)| acc + c * x.pow(e)).is_zero())
            .count() as u64;
        ensure(roots == rc.roots, || format!("root count {roots} vs {}", rc.roots))?;
        ensure(roots <= 1 << d, || format!("n={n} s={s} d={d}: {roots} roots"))?;
        if roots * max_ratio.1 > max_ratio.0 << d {
            max_ratio = (roots, 1 << d);
        }
    }
    within(start.elapsed(), Duration::from_secs(5), "root counts")?;
    Ok(format!("1000 instances, worst case {} roots of bound {}", max_ratio.0, max_ratio.1))
}

fn random_table(field: &FieldSpec, rng: &mut ChaCha8Rng) -> FunctionTable {
    let values = (0..field.size()).map(|_| rng.gen_range(0..field.size() as u32)).collect();
    FunctionTable::from_values(field, values, apnspectra::poly::Provenance::Raw).unwrap()
}

fn c11_infrastructure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    for n in 2..=8u32 {
        let f = gf(n);
        let mut tables = vec![random_table(&f, &mut rng), random_table(&f, &mut rng)];
        tables.push(build_family(&FamilyParams::defaults(Family::Gold, &f), &f).unwrap());
        let size = 1i64 << n;
        for t in &tables {
            for b in f.elements().skip(1) {
                let row = walsh_row(t, b).unwrap();
                let parseval: i64 = row.iter().map(|w| w * w).sum();
                ensure(parseval == size * size, || format!("Parseval n={n} b={b}"))?;
                for (a, &w) in f.elements().zip(&row) {
                    let direct = walsh_point(t, a, b).unwrap();
                    ensure(w == direct, || format!("n={n} a={a} b={b}: {w} vs {direct}"))?;
                }
            }
        }
    }

    for n in 2..=6u32 {
        let f = gf(n);
        let els: Vec<FieldElement> = f.elements().collect();
        for &a in &els {
            ensure((a + a).is_zero() && a * f.one() == a, || format!("n={n} identities at {a}"))?;
            if !a.is_zero() {
                ensure((a * a.inv().unwrap()).is_one(), || format!("n={n} inverse of {a}"))?;
            }
            for &b in &els {
                ensure(a * b == b * a && a + b == b + a, || format!("n={n} commutativity"))?;
                for &c in &els {
                    ensure((a * b) * c == a * (b * c), || format!("n={n} associativity"))?;
                    ensure(a * (b + c) == a * b + a * c, || format!("n={n} distributivity"))?;
                }
            }
        }
    }

    let f = gf(12);
    let t = build_family(&FamilyParams::defaults(Family::F5, &f), &f).unwrap();
    let json = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let sp = full_spectrum(&t).unwrap();
            let dd = diff_spectrum(&t);
            serde_json::to_string(&(sp, dd)).unwrap()
        })
    };
    let one = json(1);
    ensure(one == json(8), || "JSON differs between 1 and 8 workers".into())?;
    Ok("Parseval and fast/direct at n<=8, field axioms at n<=6, 1 vs 8 workers".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("F5 odd n spectrum", c1_odd),
        ("F5 even n spectrum", c2_even),
        ("Dillon function: 7 values, APN", c3_dillon),
        ("F5 kernel dimension <= 2", c4_kernel_bound),
        ("squared transform identity", c5_identity),
        ("explicit L_b kernels = generic kernels", c6_explicit_lb),
        ("proof trace claims", c7_proof_trace),
        ("cross-family spectra", c8_cross_family),
        ("differential uniformity 2", c9_apn),
        ("linearized root bound", c10_root_bound),
        ("infrastructure properties", c11_infrastructure),
    ];
    let mut failures = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(note) => println!("PASS  {:>2}  {name} [{elapsed:.2?}]: {note}", idx + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL  {:>2}  {name} [{elapsed:.2?}]: {why}", idx + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
