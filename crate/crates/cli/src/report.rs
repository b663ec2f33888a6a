use std::collections::BTreeMap;
use std::fmt::Write;

use apnspectra::analysis::{diff_spectrum_rows, nonlinearity, spectrum_over};
use apnspectra::poly::{FamilyParams, Provenance};
use apnspectra::quadratic::{verify_f5, F5Instance, QuadraticForm};
use apnspectra::{Error, FieldElement, FieldSpec, FunctionTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Format, RunArgs};
use crate::CliError;

#[derive(Serialize)]
struct Sample {
    seed: u64,
    b: Vec<FieldElement>,
}

/// The b values to analyze: a seeded sample, or all of L* within the cap.
fn select_b(field: &FieldSpec, run: &RunArgs) -> Result<(Vec<FieldElement>, Option<Sample>), CliError> {
    if let Some(count) = run.sample_b {
        let order = field.order();
        if count == 0 || count > order {
            return Err(CliError::Usage(format!(
                "--sample-b must be in 1..={order} for n = {}",
                field.n()
            )));
        }
        let seed = run.seed.expect("clap enforces --seed");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx = rand::seq::index::sample(&mut rng, order as usize, count as usize).into_vec();
        idx.sort_unstable();
        let bs: Vec<FieldElement> = idx
            .into_iter()
            .map(|i| field.element(i as u64 + 1).expect("in range"))
            .collect();
        return Ok((bs.clone(), Some(Sample { seed, b: bs })));
    }
    if field.n() > run.n_cap && !run.force {
        return Err(Error::CapExceeded {
            n: field.n(),
            cap: run.n_cap,
        }
        .into());
    }
    Ok((field.elements().skip(1).collect(), None))
}

fn provenance_label(table: &FunctionTable) -> String {
    match table.provenance() {
        Provenance::Imported => "imported".into(),
        Provenance::Raw => "raw".into(),
        p => p.polynomial().unwrap_or_default().to_string(),
    }
}

fn json_line(out: &mut String, value: &impl Serialize) {
    out.push_str(&serde_json::to_string(value).expect("serializable"));
    out.push('\n');
}

pub fn field(spec: &FieldSpec, format: Format) -> String {
    let order = spec.order();
    let mut rest = order;
    let factors: Vec<(u64, u32)> = spec
        .order_prime_factors()
        .iter()
        .map(|&p| {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            (p, e)
        })
        .collect();
    let pretty = factors
        .iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join(" * ");
    match format {
        Format::Json | Format::Csv => {
            #[derive(Serialize)]
            struct Factor {
                prime: u64,
                exponent: u32,
            }
            #[derive(Serialize)]
            struct Report {
                n: u32,
                poly: String,
                alpha: FieldElement,
                order: u64,
                factorization: Vec<Factor>,
            }
            let mut out = String::new();
            json_line(
                &mut out,
                &Report {
                    n: spec.n(),
                    poly: format!("{:#X}", spec.poly()),
                    alpha: spec.alpha(),
                    order,
                    factorization: factors
                        .into_iter()
                        .map(|(prime, exponent)| Factor { prime, exponent })
                        .collect(),
                },
            );
            out
        }
        Format::Text => format!(
            "n: {}\npoly: {:#X}\nalpha: {}\norder: {order} = {pretty}\n",
            spec.n(),
            spec.poly(),
            spec.alpha()
        ),
    }
}

#[derive(Serialize)]
struct SpectrumEntry {
    value: i64,
    count: u64,
}

#[derive(Serialize)]
struct SpectrumReport {
    n: u32,
    provenance: String,
    spectrum: Vec<SpectrumEntry>,
    nonlinearity: i64,
    differential_uniformity: u64,
    is_apn: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample: Option<Sample>,
}

pub fn analyze(table: &FunctionTable, run: &RunArgs, format: Format) -> Result<String, CliError> {
    let field = table.field();
    let (bs, sample) = select_b(field, run)?;
    let spectrum = spectrum_over(table, &bs)?;
    // sampled runs use the same values as derivative directions
    let ddt = diff_spectrum_rows(table, &bs)?;
    let rep = SpectrumReport {
        n: table.n(),
        provenance: provenance_label(table),
        spectrum: spectrum
            .counts
            .iter()
            .map(|(&value, &count)| SpectrumEntry { value, count })
            .collect(),
        nonlinearity: nonlinearity(&spectrum),
        differential_uniformity: ddt.uniformity(),
        is_apn: ddt.is_apn(),
        sample,
    };
    let mut out = String::new();
    match format {
        Format::Json => json_line(&mut out, &rep),
        Format::Csv => {
            out.push_str("value,count\n");
            for e in &rep.spectrum {
                writeln!(out, "{},{}", e.value, e.count).unwrap();
            }
        }
        Format::Text => {
            writeln!(out, "n: {}", rep.n).unwrap();
            writeln!(out, "function: {}", rep.provenance).unwrap();
            if let Some(s) = &rep.sample {
                writeln!(out, "sampled b: {} (seed {})", s.b.len(), s.seed).unwrap();
            }
            writeln!(out, "spectrum:").unwrap();
            for e in &rep.spectrum {
                writeln!(out, "  {:>8}  {}", e.value, e.count).unwrap();
            }
            writeln!(out, "nonlinearity: {}", rep.nonlinearity).unwrap();
            writeln!(
                out,
                "differential uniformity: {}{}",
                rep.differential_uniformity,
                if rep.is_apn { " (APN)" } else { "" }
            )
            .unwrap();
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct KernelLine {
    b: FieldElement,
    dim: u32,
    kernel: Vec<FieldElement>,
}

#[derive(Serialize)]
struct KernelSummary {
    components: usize,
    dims: BTreeMap<u32, u64>,
    max_dim: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violations: Option<Vec<FieldElement>>,
}

pub fn kernels(
    table: &FunctionTable,
    bound: Option<u32>,
    run: &RunArgs,
    format: Format,
) -> Result<String, CliError> {
    let field = table.field();
    let q = QuadraticForm::new(table)?;
    let (bs, _) = select_b(field, run)?;
    let lines = bs
        .par_iter()
        .map(|&b| {
            let map = q.kernel_map(b)?;
            Ok(KernelLine {
                b,
                dim: map.kernel_dim(),
                kernel: map.kernel().into_iter().map(|u| field.element(u64::from(u)).expect("in range")).collect(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut dims = BTreeMap::new();
    for l in &lines {
        *dims.entry(l.dim).or_default() += 1;
    }
    let summary = KernelSummary {
        components: lines.len(),
        max_dim: dims.keys().copied().max().unwrap_or(0),
        dims,
        bound,
        violations: bound.map(|d| lines.iter().filter(|l| l.dim > d).map(|l| l.b).collect()),
    };
    let mut out = String::new();
    match format {
        Format::Json => {
            for l in &lines {
                json_line(&mut out, l);
            }
            #[derive(Serialize)]
            struct Wrap<'a> {
                summary: &'a KernelSummary,
            }
            json_line(&mut out, &Wrap { summary: &summary });
        }
        Format::Csv => {
            out.push_str("b,dim,kernel\n");
            for l in &lines {
                let k: Vec<String> = l.kernel.iter().map(|u| u.to_string()).collect();
                writeln!(out, "{},{},{}", l.b, l.dim, k.join(" ")).unwrap();
            }
        }
        Format::Text => {
            for l in &lines {
                writeln!(out, "b = {}: dim {}", l.b, l.dim).unwrap();
            }
            for (d, c) in &summary.dims {
                writeln!(out, "dim {d}: {c} components").unwrap();
            }
            if let Some(v) = &summary.violations {
                writeln!(out, "components above the bound: {}", v.len()).unwrap();
            }
        }
    }
    Ok(out)
}

/// Returns the report and whether every claim held for every b.
pub fn verify(
    params: &FamilyParams,
    field: &FieldSpec,
    run: &RunArgs,
    format: Format,
) -> Result<(String, bool), CliError> {
    let inst = F5Instance::new(params, field)?;
    let (bs, sample) = select_b(field, run)?;
    let traces = verify_f5(&inst, &bs)?;
    let failed: Vec<FieldElement> = traces
        .iter()
        .filter(|t| !t.checks.all_pass())
        .map(|t| t.b)
        .collect();
    let pass = failed.is_empty();
    let mut out = String::new();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Record<'a> {
                #[serde(flatten)]
                trace: &'a apnspectra::quadratic::ProofTrace,
                pass: bool,
            }
            #[derive(Serialize)]
            struct Overall<'a> {
                tested: usize,
                passed: usize,
                failed: &'a [FieldElement],
                pass: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                seed: Option<u64>,
            }
            #[derive(Serialize)]
            struct Wrap<'a> {
                overall: Overall<'a>,
            }
            for t in &traces {
                json_line(
                    &mut out,
                    &Record {
                        trace: t,
                        pass: t.checks.all_pass(),
                    },
                );
            }
            json_line(
                &mut out,
                &Wrap {
                    overall: Overall {
                        tested: traces.len(),
                        passed: traces.len() - failed.len(),
                        failed: &failed,
                        pass,
                        seed: sample.map(|s| s.seed),
                    },
                },
            );
        }
        Format::Csv => {
            let names: Vec<&str> = traces
                .first()
                .map(|t| t.checks.entries().iter().map(|e| e.0).collect())
                .unwrap_or_default();
            writeln!(out, "b,kernel_dim,{}", names.join(",")).unwrap();
            for t in &traces {
                let vals: Vec<&str> = t
                    .checks
                    .entries()
                    .iter()
                    .map(|e| if e.1 { "true" } else { "false" })
                    .collect();
                writeln!(out, "{},{},{}", t.b, t.kernel_dim, vals.join(",")).unwrap();
            }
        }
        Format::Text => {
            for t in &traces {
                let f = t.checks.failures();
                if f.is_empty() {
                    writeln!(out, "b = {}: ok (dim {})", t.b, t.kernel_dim).unwrap();
                } else {
                    writeln!(out, "b = {}: FAILED {}", t.b, f.join(", ")).unwrap();
                }
            }
            writeln!(
                out,
                "{} of {} components pass",
                traces.len() - failed.len(),
                traces.len()
            )
            .unwrap();
        }
    }
    Ok((out, pass))
}
