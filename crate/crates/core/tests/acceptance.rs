//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if
//! any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use qpebble::agent::{decide_fixed, measure_node_fixed, Decode, FailureKind};
use qpebble::analysis::{
    bitsign4_wrong_run_prob, bitsign4_wrong_run_prob_per_sign, check_impossibility, compare_single_vs_per_node,
    full_path_log_bound, per_node_failure, required_n,
};
use qpebble::encoding::{decode_outcome, encode_port, port_outcome, BasisFamily, Emission, QuantumPebble};
use qpebble::harness::{run_experiment, ExperimentConfig, GeneratorSpec, GraphSource, StrategySpec};
use qpebble::quantum::{
    born_probability, build_basis, cross_overlap_closed_form, delta_bound, sample_measurement, QubitState, Sign,
};
use qpebble::{EncodingScheme, RngStream};

type Verdict = Result<String, String>;

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// `(re, im)` pairs so the oracle shares no code with the library.
type C = (f64, f64);

fn cis(a: f64) -> C {
    (a.cos(), a.sin())
}

/// `|<b|a>|^2` for two-component vectors.
fn overlap_sq(a: [C; 2], b: [C; 2]) -> f64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for k in 0..2 {
        // conj(b) * a
        re += b[k].0 * a[k].0 + b[k].1 * a[k].1;
        im += b[k].0 * a[k].1 - b[k].1 * a[k].0;
    }
    re * re + im * im
}

/// `(|0> + s e^{i j pi / delta} |1>) / sqrt 2`.
fn phase_vec(j: usize, plus: bool, delta: usize) -> [C; 2] {
    let r = 0.5f64.sqrt();
    let s = if plus { r } else { -r };
    let e = cis(j as f64 * PI / delta as f64);
    [(r, 0.0), (s * e.0, s * e.1)]
}

fn pebble(state: QubitState) -> QuantumPebble {
    QuantumPebble {
        node: 0,
        emission: Emission::Qubit {
            state,
            label: qpebble::quantum::Outcome::new(0, Sign::Plus),
        },
    }
}

fn path_cfg(scheme: EncodingScheme, strategy: StrategySpec, trials: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig::new(
        GraphSource::Generator(GeneratorSpec::path(10, 4)),
        scheme,
        strategy,
        trials,
        seed,
    )
}

fn encoding_bijection() -> Verdict {
    let mut checked = 0;
    for delta in [2usize, 4, 6, 8, 16, 64, 128] {
        let bases: Vec<_> = (0..delta / 2).map(|i| build_basis(i, delta).unwrap()).collect();
        for j in 1..=delta {
            if decode_outcome(port_outcome(j, delta).unwrap(), delta).unwrap() != j {
                return Err(format!("label roundtrip broke at delta={delta} j={j}"));
            }
            // decode from the state itself: the unique certain eigenvalue
            let state = encode_port(j, delta).unwrap();
            let certain: Vec<_> = bases
                .iter()
                .flat_map(|b| [Sign::Plus, Sign::Minus].map(|s| (b.index, s, born_probability(&state, b.vector(s)))))
                .filter(|(_, _, p)| (p - 1.0).abs() < 1e-12)
                .collect();
            if certain.len() != 1 {
                return Err(format!("delta={delta} j={j}: {} certain outcomes", certain.len()));
            }
            let (i, s, _) = certain[0];
            let o = qpebble::quantum::Outcome::new(i, s);
            if decode_outcome(o, delta).unwrap() != j {
                return Err(format!("state decode broke at delta={delta} j={j}"));
            }
            checked += 1;
        }
        if delta <= 4 {
            let fam = BasisFamily::BitSign;
            let bs = fam.bases().unwrap();
            for j in 1..=delta {
                let state = fam.state_for(j).unwrap();
                let o = port_outcome(j, 4).unwrap();
                let p = born_probability(&state, bs[o.basis_index].vector(o.sign));
                if (p - 1.0).abs() > 1e-12 || decode_outcome(o, 4).unwrap() != j {
                    return Err(format!("bit/sign decode broke at delta={delta} j={j}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} ports roundtrip"))
}

fn overlaps() -> Verdict {
    let mut worst_bound_gap = f64::NEG_INFINITY;
    let mut worst_closed = 0.0f64;
    let mut worst_ortho = 0.0f64;
    for delta in (2..=128).step_by(2) {
        let bound = delta_bound(delta);
        let bases: Vec<_> = (0..delta / 2).map(|i| build_basis(i, delta).unwrap()).collect();
        for b in &bases {
            worst_ortho = worst_ortho
                .max(born_probability(&b.plus, &b.minus))
                .max((born_probability(&b.plus, &b.plus) - 1.0).abs());
        }
        for (j, bj) in bases.iter().enumerate() {
            for (k, bk) in bases.iter().enumerate() {
                if j == k {
                    continue;
                }
                for sj in [Sign::Plus, Sign::Minus] {
                    for sk in [Sign::Plus, Sign::Minus] {
                        let numeric = born_probability(bj.vector(sj), bk.vector(sk));
                        let closed = cross_overlap_closed_form(j, k, sj, sk, delta);
                        worst_bound_gap = worst_bound_gap.max(numeric - bound);
                        worst_closed = worst_closed.max((numeric - closed).abs());
                    }
                }
            }
        }
    }
    check(
        worst_bound_gap <= 1e-12 && worst_closed <= 1e-12 && worst_ortho <= 1e-12,
        format!(
            "max(overlap - delta) = {worst_bound_gap:.3e}, closed-form error {worst_closed:.3e}, orthonormality error {worst_ortho:.3e}"
        ),
    )
}

fn born_sampling() -> Verdict {
    // (description, library state, library basis, oracle state, oracle plus vector)
    let (t, f) = (0.3f64, 1.1f64);
    let ang_state = QubitState::from_angles(t, f);
    let ang_oracle = [(t.cos(), 0.0), (t.sin() * f.cos(), t.sin() * f.sin())];
    let z = [(1.0, 0.0), (0.0, 0.0)];
    let r = 0.5f64.sqrt();
    let plus = [(r, 0.0), (r, 0.0)];
    let minus = [(r, 0.0), (-r, 0.0)];
    let bitsign = BasisFamily::BitSign.bases().unwrap();
    let cases: Vec<(String, QubitState, qpebble::quantum::MeasurementBasis, [C; 2], [C; 2])> = vec![
        ("|0+> in M(1), delta 4".into(), encode_port(1, 4).unwrap(), build_basis(1, 4).unwrap(), phase_vec(0, true, 4), phase_vec(1, true, 4)),
        ("|0-> in M(1), delta 4".into(), encode_port(2, 4).unwrap(), build_basis(1, 4).unwrap(), phase_vec(0, false, 4), phase_vec(1, true, 4)),
        ("|1+> in M(0), delta 4".into(), encode_port(3, 4).unwrap(), build_basis(0, 4).unwrap(), phase_vec(1, true, 4), phase_vec(0, true, 4)),
        ("|0+> in M(3), delta 8".into(), encode_port(1, 8).unwrap(), build_basis(3, 8).unwrap(), phase_vec(0, true, 8), phase_vec(3, true, 8)),
        ("|1-> in M(2), delta 6".into(), encode_port(4, 6).unwrap(), build_basis(2, 6).unwrap(), phase_vec(1, false, 6), phase_vec(2, true, 6)),
        ("|0+> in M(63), delta 128".into(), encode_port(1, 128).unwrap(), build_basis(63, 128).unwrap(), phase_vec(0, true, 128), phase_vec(63, true, 128)),
        ("|0> in Hadamard".into(), QubitState::ZERO, bitsign[1], z, plus),
        ("|+> in computational".into(), QubitState::PLUS, bitsign[0], plus, z),
        ("|-> in Hadamard".into(), QubitState::MINUS, bitsign[1], minus, plus),
        ("angles (0.3, 1.1) in M(1), delta 4".into(), ang_state, build_basis(1, 4).unwrap(), ang_oracle, phase_vec(1, true, 4)),
    ];
    let samples = 100_000;
    let mut worst = 0.0f64;
    let mut first_expected = f64::NAN;
    for (i, (name, state, basis, os, ov)) in cases.iter().enumerate() {
        let expected = overlap_sq(*os, *ov);
        if i == 0 {
            first_expected = expected;
        }
        let mut rng = RngStream::new(2024, i as u64);
        let hits = (0..samples)
            .filter(|_| sample_measurement(state, basis, &mut rng).sign == Sign::Plus)
            .count();
        let freq = hits as f64 / samples as f64;
        let err = (freq - expected).abs();
        if err > 0.005 {
            return Err(format!("{name}: frequency {freq:.5} vs {expected:.6}"));
        }
        worst = worst.max(err);
    }
    check(
        (first_expected - 0.853553).abs() < 1e-6,
        format!("10 pairs within {worst:.4} of the oracle (|0+> in M(1): {first_expected:.6})"),
    )
}

fn end_to_end() -> Verdict {
    let n = required_n(10, 4, 0.01);
    if n != 53 {
        return Err(format!("required_n(10, 4, 0.01) = {n}"));
    }
    let e = run_experiment(&path_cfg(EncodingScheme::General, StrategySpec::Fixed(None), 10_000, 7))
        .map_err(|e| e.to_string())?;
    let threshold = 0.990 - 3.0 * (0.990f64 * 0.010 / 1e4).sqrt();
    let rate = e.summary.success_rate;
    let exact = e
        .records
        .iter()
        .filter(|r| r.success)
        .all(|r| r.steps == 10 && r.measurements == 1060);
    check(
        rate >= threshold && exact,
        format!("success {rate:.4} >= {threshold:.4}; successes all 10 steps / 1060 measurements: {exact}"),
    )
}

fn bitsign_runs() -> Verdict {
    let bases = BasisFamily::BitSign.bases().unwrap();
    let runs = 1_000_000u64;
    let mut lines = Vec::new();
    let mut ok = true;
    for (slot, n) in [5usize, 11].into_iter().enumerate() {
        // port 1 is |0>, measured in the wrong (Hadamard) basis
        let p = pebble(BasisFamily::BitSign.state_for(1).unwrap());
        let (mut plus, mut minus) = (0u64, 0u64);
        for i in 0..runs {
            let mut rng = RngStream::new(5150 + slot as u64, i);
            let t = measure_node_fixed(&p, &bases[1..], n, &mut rng).unwrap();
            match t.uniform_sign(0) {
                Some(Sign::Plus) => plus += 1,
                Some(Sign::Minus) => minus += 1,
                None => {}
            }
        }
        let within = |count: u64, p: f64| {
            let sigma = (p * (1.0 - p) / runs as f64).sqrt();
            (count as f64 / runs as f64 - p).abs() <= 4.0 * sigma
        };
        let per_sign = bitsign4_wrong_run_prob_per_sign(n);
        let either = bitsign4_wrong_run_prob(n);
        ok &= within(plus, per_sign) && within(minus, per_sign) && within(plus + minus, either);
        lines.push(format!(
            "n={n}: +run {:.3e} -run {:.3e} (2^-n {per_sign:.3e}), either {:.3e} (2^-(n-1) {either:.3e})",
            plus as f64 / runs as f64,
            minus as f64 / runs as f64,
            (plus + minus) as f64 / runs as f64
        ));
    }
    check(ok, lines.join("; "))
}

fn per_node_bound() -> Verdict {
    let decodes = 100_000u64;
    let mut lines = Vec::new();
    let mut ok = true;
    for (delta, n) in [(4usize, 10usize), (8, 20), (16, 30)] {
        let bases = BasisFamily::Phase { delta }.bases().unwrap();
        let pebbles: Vec<_> = (1..=delta).map(|j| pebble(encode_port(j, delta).unwrap())).collect();
        let (mut ambiguous, mut wrong) = (0u64, 0u64);
        for i in 0..decodes {
            let j = i as usize % delta;
            let mut rng = RngStream::new(606 + delta as u64, i);
            let t = measure_node_fixed(&pebbles[j], &bases, n, &mut rng).unwrap();
            match decide_fixed(&t, delta) {
                Decode::Ambiguous => ambiguous += 1,
                Decode::Port(p) if p != j + 1 => wrong += 1,
                Decode::Port(_) => {}
            }
        }
        let bound = per_node_failure(delta, n).min(1.0);
        let sigma = (bound * (1.0 - bound) / decodes as f64).sqrt();
        let rate = ambiguous as f64 / decodes as f64;
        ok &= rate <= bound + 4.0 * sigma && wrong == 0;
        lines.push(format!("delta={delta} n={n}: {rate:.3e} <= {bound:.3e} (+4 sigma), wrong ports {wrong}"));
    }
    check(ok, lines.join("; "))
}

fn impossibility() -> Verdict {
    let r = check_impossibility();
    check(
        r.pass && r.defeated == 64 && r.tables == 64 && r.graphs == 216 && r.max_walk_len <= 7,
        format!(
            "{}/{} decision tables defeated over {} gadgets x {} placements, longest walk {}, universal gadget {:?}",
            r.defeated, r.tables, r.graphs, r.placements_per_graph, r.max_walk_len, r.universal_witness
        ),
    )
}

fn full_path() -> Verdict {
    let mut min_ln_ratio = f64::INFINITY;
    for d in 2..=6 {
        for delta in [2, 4, 8] {
            let c = compare_single_vs_per_node(d, delta).map_err(|e| e.to_string())?;
            if !c.full_path_not_better {
                return Err(format!("D={d} delta={delta}: full path {} < per node {}", c.full_path_total, c.per_node_total));
            }
            min_ln_ratio = min_ln_ratio.min(c.ln_ratio);
        }
    }
    let mut worst = 0.0f64;
    for delta in [2usize, 4, 6, 8, 16, 64, 128] {
        let direct = -delta_bound(delta).ln();
        worst = worst.max((full_path_log_bound(1, delta).log_inv_delta_prime - direct).abs());
    }
    check(
        worst <= 1e-12,
        format!("full path >= per node on 15 configs (min ratio {:.3}); D=1 error {worst:.2e}", min_ln_ratio.exp()),
    )
}

fn baselines() -> Verdict {
    let mut walk_cfg = path_cfg(EncodingScheme::General, StrategySpec::RandomWalk, 10_000, 11);
    walk_cfg.step_budget = Some(10);
    let walk = run_experiment(&walk_cfg).map_err(|e| e.to_string())?;
    let mut qudit_cfg = path_cfg(EncodingScheme::Qudit, StrategySpec::Qudit, 10_000, 11);
    qudit_cfg.step_budget = Some(10);
    let qudit = run_experiment(&qudit_cfg).map_err(|e| e.to_string())?;
    let one_each = qudit
        .records
        .iter()
        .all(|r| r.success && r.steps == 10 && r.measurements == 10 && r.failure_kind == FailureKind::None);
    check(
        walk.summary.success_rate <= 0.01 && qudit.summary.success_rate == 1.0 && one_each,
        format!(
            "random walk {:.4}, qudit {:.4} with one measurement per node: {one_each}",
            walk.summary.success_rate, qudit.summary.success_rate
        ),
    )
}

fn reproducibility() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |threads: &str, name: &str| -> Result<Vec<u8>, String> {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_qpebble"))
            .args([
                "simulate", "--gen", "path:D=10,delta=4", "--scheme", "general", "--strategy", "fixed:auto",
                "--trials", "10000", "--seed", "42", "--threads", threads, "--out",
            ])
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(String::from_utf8_lossy(&status.stderr).into_owned());
        }
        std::fs::read(&out).map_err(|e| e.to_string())
    };
    let a = run("1", "a.csv")?;
    let b = run("1", "b.csv")?;
    let c = run("4", "c.csv")?;
    check(
        a == b && a == c && a.len() > 10_000,
        format!("{} bytes; repeat identical: {}; 1 vs 4 workers identical: {}", a.len(), a == b, a == c),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("1 encoding bijection", encoding_bijection),
        ("2 basis orthonormality and overlap bound", overlaps),
        ("3 Born sampling", born_sampling),
        ("4 end-to-end hunt D=10 delta=4", end_to_end),
        ("5 bit/sign wrong-basis runs", bitsign_runs),
        ("6 per-node bad-event bound", per_node_bound),
        ("7 classical impossibility", impossibility),
        ("8 full-path comparison", full_path),
        ("9 baselines", baselines),
        ("10 reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let verdict = f();
        let secs = t.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", 10 - failed, 10);
    if failed > 0 {
        std::process::exit(1);
    }
}
