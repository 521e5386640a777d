//! The five experiment pipelines.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use insqec::analytic::{self, SyndromeProbability};
use insqec::channel::{insert, InsertionEvent, InsertionQubit};
use insqec::oracle::{full_syndrome_projectors, j_ladder, Projector};
use insqec::recovery::{projected_register, teleport, Syndrome};
use insqec::scb::build_scb;
use insqec::states::{encode, DenseState, GnuCode, LogicalQubit};
use insqec::HalfInt;

use crate::config::{ExperimentConfig, Position};
use crate::CliError;

pub const SCHEMA: &str = "insqec/1";

/// A finished run: the report (JSON always, CSV where tabular) and
/// whether every check passed.
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
    pub passed: bool,
}

impl Report {
    fn json_only(json: Value, passed: bool) -> Self {
        Report { json, csv: None, passed }
    }
}

fn config_json(cfg: &ExperimentConfig) -> Value {
    json!({
        "g": cfg.code.g(),
        "n": cfg.code.n(),
        "u": cfg.code.u(),
        "payload": cfg.payload_raw,
        "insertion": cfg.insertion_raw,
        "seed": cfg.seed,
        "shots": cfg.shots,
    })
}

// The (j, w) labels of the complete syndrome measurement, aligned with
// `full_syndrome_projectors` ordering.
fn syndrome_labels(m: usize, g: u32) -> Vec<(HalfInt, u32)> {
    let mut out = Vec::new();
    for j in j_ladder(m) {
        for w in 0..g {
            out.push((j, w));
        }
    }
    out
}

fn analytic_lookup(dist: &[SyndromeProbability], j: HalfInt, w: u32) -> f64 {
    dist.iter()
        .find(|s| s.j == j && s.w == w)
        .map(|s| s.probability)
        .unwrap_or(0.0)
}

fn distribution_json(labels: &[(HalfInt, u32)], probs: &[f64]) -> Value {
    let rows: Vec<Value> = labels
        .iter()
        .zip(probs)
        .filter(|(_, &p)| p > 1e-15)
        .map(|((j, w), p)| json!({"j": j.to_string(), "w": w, "probability": p}))
        .collect();
    Value::Array(rows)
}

struct Extraction {
    labels: Vec<(HalfInt, u32)>,
    projectors: Vec<Projector>,
    oracle: Vec<f64>,
    analytic: Vec<SyndromeProbability>,
    max_deviation: f64,
    state: DenseState,
}

fn extract(cfg: &ExperimentConfig, a: u32) -> Result<Extraction, CliError> {
    let code = &cfg.code;
    let m = code.qubit_count() as usize + 1;
    let state = insert(
        &encode(code, &cfg.payload)?,
        &cfg.insertion,
        InsertionEvent { position: a },
    )?;
    let projectors = full_syndrome_projectors(m, code.g());
    let labels = syndrome_labels(m, code.g());
    let oracle = insqec::oracle::born_probabilities(&state, &projectors)?;
    let analytic = analytic::syndrome_distribution(code, &cfg.insertion, a)?;
    let max_deviation = labels
        .iter()
        .zip(&oracle)
        .map(|((j, w), p)| (p - analytic_lookup(&analytic, *j, *w)).abs())
        .fold(0.0f64, f64::max);
    Ok(Extraction {
        labels,
        projectors,
        oracle,
        analytic,
        max_deviation,
        state,
    })
}

fn resolve_position(cfg: &ExperimentConfig, rng: &mut impl Rng) -> u32 {
    match cfg.position {
        Position::At(a) => a,
        Position::Random => rng.gen_range(0..=cfg.code.qubit_count()),
    }
}

fn sample_index(probs: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

pub fn run_single(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let code = &cfg.code;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let a = resolve_position(cfg, &mut rng);
    let ex = extract(cfg, a)?;

    let pick = sample_index(&ex.oracle, &mut rng);
    let (j, w) = ex.labels[pick];
    let syndrome = Syndrome::new(j, w);
    let post = ex.projectors[pick].apply_raw(&ex.state)?.normalized()?;

    let reg = projected_register(code, a, &syndrome, &post)?;
    let outcome = teleport(code, code, &reg, &cfg.payload, rng.gen())?;

    let passed = ex.max_deviation <= 1e-10 && outcome.fidelity >= 1.0 - 1e-9;
    let body = json!({
        "schema": SCHEMA,
        "mode": "single",
        "config": config_json(cfg),
        "warnings": cfg.warnings,
        "position": a,
        "analytic": distribution_json(
            &ex.labels,
            &ex.labels
                .iter()
                .map(|(j, w)| analytic_lookup(&ex.analytic, *j, *w))
                .collect::<Vec<_>>(),
        ),
        "oracle": distribution_json(&ex.labels, &ex.oracle),
        "max_deviation": ex.max_deviation,
        "sampled": {
            "j": j.to_string(),
            "w": w,
            "probability": ex.oracle[pick],
        },
        "post_state": {
            "num_qubits": post.num_qubits(),
            "weight_distribution": post.weight_distribution(),
        },
        "recovery": {
            "bit": outcome.measured_bit,
            "probability": outcome.measured_probability,
            "corrected": outcome.corrected,
            "fidelity": outcome.fidelity,
            "syndrome": {"j": j.to_string(), "w": w},
        },
        "passed": passed,
    });
    Ok(Report::json_only(body, passed))
}

fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    let z = 1.959963984540054f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = z * ((p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt()) / denom;
    (center - half, center + half)
}

pub fn run_montecarlo(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    if cfg.shots == 0 {
        return Err(CliError::Usage("montecarlo requires shots >= 1".into()));
    }
    let dim = 1u64 << (cfg.code.qubit_count() + 1);
    if cfg.shots.saturating_mul(dim) > 1 << 40 {
        return Err(CliError::Usage(format!(
            "shots x dimension = {} exceeds the cap of 2^40",
            cfg.shots.saturating_mul(dim)
        )));
    }
    let mut seed_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let a = resolve_position(cfg, &mut seed_rng);
    let ex = extract(cfg, a)?;

    let mut counts = vec![0u64; ex.labels.len()];
    for shot in 0..cfg.shots {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(shot.wrapping_add(1));
        counts[sample_index(&ex.oracle, &mut rng)] += 1;
    }

    let mut rows = Vec::new();
    let mut passed = ex.max_deviation <= 1e-10;
    for (i, (j, w)) in ex.labels.iter().enumerate() {
        let p = analytic_lookup(&ex.analytic, *j, *w);
        if p <= 1e-15 && counts[i] == 0 {
            continue;
        }
        let emp = counts[i] as f64 / cfg.shots as f64;
        let sigma = (p * (1.0 - p) / cfg.shots as f64).sqrt();
        let ok = (emp - p).abs() <= 3.0 * sigma.max(1e-12);
        passed &= ok;
        let (lo, hi) = wilson(counts[i], cfg.shots);
        rows.push((j.to_string(), *w, p, emp, counts[i], lo, hi, ok));
    }

    let body = json!({
        "schema": SCHEMA,
        "mode": "montecarlo",
        "config": config_json(cfg),
        "warnings": cfg.warnings,
        "position": a,
        "max_deviation": ex.max_deviation,
        "rows": rows.iter().map(|(j, w, p, emp, c, lo, hi, ok)| json!({
            "j": j, "w": w,
            "analytic": p,
            "empirical": emp,
            "count": c,
            "wilson_low": lo,
            "wilson_high": hi,
            "within_3_sigma": ok,
        })).collect::<Vec<_>>(),
        "passed": passed,
    });
    let csv = {
        let mut s = String::from("j,w,analytic,empirical,count,wilson_low,wilson_high,within_3_sigma\n");
        for (j, w, p, emp, c, lo, hi, ok) in &rows {
            s.push_str(&format!("{j},{w},{p},{emp},{c},{lo},{hi},{ok}\n"));
        }
        s
    };
    Ok(Report { json: body, csv: Some(csv), passed })
}

pub fn run_lemma(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let mut cells = Vec::new();
    let mut passed = true;
    let mut warnings = cfg.warnings.clone();
    if cfg.grid.is_empty() {
        warnings.push("empty lemma grid; nothing verified".into());
    }
    for &(g, n, u) in &cfg.grid {
        let code = GnuCode::new(g, n, u).map_err(|e| CliError::Usage(e.to_string()))?;
        let report = analytic::verify_lemma1(&code)?;
        passed &= report.passed;
        cells.push(serde_json::to_value(&report).expect("report serializes"));
    }
    let body = json!({
        "schema": SCHEMA,
        "mode": "lemma",
        "warnings": warnings,
        "cells": cells,
        "passed": passed,
    });
    Ok(Report::json_only(body, passed))
}

pub fn run_example() -> Result<Report, CliError> {
    let code = GnuCode::new(2, 2, 1).unwrap();
    let payload = LogicalQubit::plus();
    let s6 = 6f64.sqrt();
    let mut max_dev = 0.0f64;
    let mut states = Vec::new();

    // Symmetric-sector displays: (weight, codeword bit, displayed
    // amplitude within that codeword). The projected state weights each
    // codeword by its norm against the joint norm; |+> balances the two.
    let sym_expect: [(u32, Vec<(u32, u8, f64)>); 2] = [
        (0, vec![(0, 0, 5f64.sqrt() / s6), (4, 0, 1.0 / s6), (2, 1, 1.0)]),
        (1, vec![(1, 0, 1.0 / s6), (5, 0, 5f64.sqrt() / s6), (3, 1, 1.0)]),
    ];
    for (w, triples) in &sym_expect {
        let q1 = if *w == 0 { InsertionQubit::zero() } else { InsertionQubit::one() };
        let state = insert(
            &encode(&code, &payload)?,
            &q1,
            InsertionEvent { position: 4 },
        )?;
        let j = HalfInt::from_twice(5);
        let (_, post) = insqec::oracle::project_total_j(&state, j)?;
        let norms = [
            analytic::symmetric_codeword(&code, *w, 0)?.norm,
            analytic::symmetric_codeword(&code, *w, 1)?.norm,
        ];
        let joint = norms[0].hypot(norms[1]);
        let weight = post.symmetric_component()?;
        let mut entry = Vec::new();
        for &(k, x, amp) in triples {
            let expect = amp * norms[x as usize] / joint;
            let got = weight.amp(k).re;
            let dev = (got - expect).abs();
            max_dev = max_dev.max(dev);
            entry.push(json!({
                "weight": k,
                "amplitude": got,
                "expected": expect,
                "deviation": dev,
            }));
        }
        states.push(json!({"sector": "symmetric", "w": w, "amplitudes": entry}));
    }

    // Mixed-sector states: the projected state factorizes into path
    // coefficients d_p times a fixed weight profile; the d must be unit.
    let basis = build_scb(5)?;
    let j = HalfInt::from_twice(3);
    for a in 0..=4u32 {
        let state = insert(
            &encode(&code, &payload)?,
            &InsertionQubit::one(),
            InsertionEvent { position: a },
        )?;
        let (_, post) = insqec::oracle::project_total_j(&state, j)?;
        let c0 = analytic::mixed_codeword(&code, a, 0, 0)?;
        let c1 = analytic::mixed_codeword(&code, a, 0, 1)?;
        let norm = c0.norm.hypot(c1.norm) / 2f64.sqrt();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut sum_d_sq = 0.0;
        for path in basis.paths_with_j(j) {
            let mut d = Complex64::new(0.0, 0.0);
            for v in basis.vectors_with_j(j).filter(|v| &v.path == path) {
                for c in [&c0, &c1] {
                    for (&i, &coeff) in &c.coeffs {
                        if c.m_labels[&i] == v.m.twice() {
                            d += (h * coeff / norm) * v.state.inner(&post);
                        }
                    }
                }
            }
            sum_d_sq += d.norm_sqr();
        }
        let dev = (sum_d_sq - 1.0).abs();
        max_dev = max_dev.max(dev);
        states.push(json!({
            "sector": "mixed", "w": 0, "a": a,
            "sum_d_squared": sum_d_sq,
            "deviation": dev,
        }));
    }

    let passed = max_dev < 1e-10;
    let body = json!({
        "schema": SCHEMA,
        "mode": "example",
        "code": {"g": 2, "n": 2, "u": 1},
        "states": states,
        "max_amplitude_deviation": max_dev,
        "passed": passed,
    });
    Ok(Report::json_only(body, passed))
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let code = &cfg.code;
    let mut rows = Vec::new();
    let mut passed = true;
    for a in 0..=code.qubit_count() {
        let ex = extract(cfg, a)?;
        passed &= ex.max_deviation <= 1e-10;
        for (i, (j, w)) in ex.labels.iter().enumerate() {
            let p = analytic_lookup(&ex.analytic, *j, *w);
            if p <= 1e-15 && ex.oracle[i] <= 1e-15 {
                continue;
            }
            rows.push((a, j.to_string(), *w, p, ex.oracle[i], (p - ex.oracle[i]).abs()));
        }
    }
    let body = json!({
        "schema": SCHEMA,
        "mode": "sweep",
        "config": config_json(cfg),
        "warnings": cfg.warnings,
        "rows": rows.iter().map(|(a, j, w, p, o, d)| json!({
            "a": a, "j": j, "w": w,
            "analytic": p, "oracle": o, "deviation": d,
        })).collect::<Vec<_>>(),
        "passed": passed,
    });
    let csv = {
        let mut s = String::from("a,j,w,analytic,oracle,deviation\n");
        for (a, j, w, p, o, d) in &rows {
            s.push_str(&format!("{a},{j},{w},{p},{o},{d}\n"));
        }
        s
    };
    Ok(Report { json: body, csv: Some(csv), passed })
}
