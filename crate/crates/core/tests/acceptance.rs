//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line.
//!
//! Run with: cargo test -p semrra-core --test acceptance -- --nocapture

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semrra::allocator::{brute_force_joint, solve_benchmark, solve_semantic};
use semrra::channel::{link_realization, sample_drop, NetworkDrop, RadioParams};
use semrra::exec::Execution;
use semrra::harness::{
    crossover_mu, model_comparison_totals, run_scenario, sweep_drop_totals, SweepSamples,
};
use semrra::hungarian::{hungarian_max, WeightMatrix};
use semrra::link_adaptation::{check_builtin_tables, CqiTable, CqiTables, SystemKind};
use semrra::metrics::{SourceStats, TransformFactor};
use semrra::scenario::{ScenarioConfig, Sweep, SweepParam};
use semrra::similarity::default_surrogate;
use semrra::{Constraints, Series};

fn report(id: u32, name: &str, ok: bool, detail: String, elapsed: Duration, budget: Duration) {
    let within = elapsed <= budget;
    let status = if ok && within { "PASS" } else { "FAIL" };
    println!(
        "[{status}] AC{id} {name}: {detail} ({:.2?}, budget {:.0?})",
        elapsed, budget
    );
    assert!(ok, "AC{id} {name}: {detail}");
    assert!(within, "AC{id} {name}: exceeded time budget ({elapsed:.2?} > {budget:?})");
}

// Test-side oracle: best permutation of a padded square matrix, summed in
// ascending order like the solver's totals.
fn brute_force_matching(w: &WeightMatrix) -> f64 {
    let n = w.rows().max(w.cols());
    let get = |r: usize, c: usize| {
        if r < w.rows() && c < w.cols() {
            w.get(r, c)
        } else {
            0.0
        }
    };
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = 0.0f64;
    let mut visit = |p: &[usize]| {
        let mut parts: Vec<f64> = p
            .iter()
            .enumerate()
            .map(|(r, &c)| get(r, c))
            .filter(|&x| x > 0.0)
            .collect();
        parts.sort_by(f64::total_cmp);
        let total: f64 = parts.into_iter().sum();
        best = best.max(total);
    };
    heap_permutations(&mut perm, n, &mut visit);
    best
}

fn heap_permutations(a: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        f(a);
        return;
    }
    heap_permutations(a, k - 1, f);
    for i in 0..k - 1 {
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
        heap_permutations(a, k - 1, f);
    }
}

#[test]
fn ac1_link_budget() {
    let t = Instant::now();
    let p = RadioParams::default();
    let link = link_realization(&p, 0.5, 0.0, 1.0).unwrap();
    let ok = (link.snr_db - 14.666).abs() <= 0.01;
    report(
        1,
        "link budget",
        ok,
        format!("snr = {:.4} dB (target 14.666 ± 0.01)", link.snr_db),
        t.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn ac2_hungarian_optimality() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut mismatches = 0;
    let mut cases = 0;
    let mut check = |rows: usize, cols: usize, rng: &mut ChaCha8Rng| {
        let w = WeightMatrix::from_fn(rows, cols, |_, _| rng.random::<f64>() * 10.0);
        let m = hungarian_max(&w).unwrap();
        cases += 1;
        if m.total != brute_force_matching(&w) {
            mismatches += 1;
        }
    };
    for _ in 0..1000 {
        check(5, 5, &mut rng);
    }
    for i in 0..200 {
        let (r, c) = if i % 2 == 0 { (3, 6) } else { (6, 3) };
        check(r, c, &mut rng);
    }
    report(
        2,
        "hungarian optimality",
        mismatches == 0,
        format!("{mismatches} mismatches in {cases} instances"),
        t.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn ac3_decomposition_equivalence() {
    let t = Instant::now();
    let surface = default_surrogate(5).unwrap();
    let cons = Constraints {
        k_max: 5,
        ..Constraints::default()
    };
    let params = RadioParams::default();
    let mut mismatches = 0;
    let mut nonzero = 0;
    for seed in 0..500u64 {
        let drop = sample_drop(4, 4, &params, 10_000 + seed).unwrap();
        let fast = solve_semantic(&drop, &surface, &cons).unwrap();
        let oracle = brute_force_joint(&drop, &surface, &cons).unwrap();
        if fast.total_weight != oracle.total_weight {
            mismatches += 1;
        }
        if oracle.total_weight > 0.0 {
            nonzero += 1;
        }
    }
    report(
        3,
        "decomposition equivalence",
        mismatches == 0 && nonzero > 0,
        format!("{mismatches} mismatches in 500 instances ({nonzero} with non-zero optimum)"),
        t.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn ac4_transform_method_and_tables() {
    let t = Instant::now();
    let p = RadioParams::default();
    let link = link_realization(&p, 0.5, 0.0, 1.0).unwrap();
    let drop = NetworkDrop::from_links(vec![0.5], vec![0.0], vec![vec![link]]).unwrap();
    let a = solve_benchmark(
        &drop,
        SystemKind::Ideal,
        &CqiTables::default(),
        TransformFactor::new(40.0).unwrap(),
        SourceStats::default(),
        &Constraints::default(),
    )
    .unwrap();
    let sse_ok = (a.total_weight - 0.1229).abs() <= 0.001;
    let digests_ok = check_builtin_tables().iter().all(|c| c.ok());
    let lte = CqiTable::lte();
    let nr = CqiTable::nr();
    let entries_ok = lte.entries().len() + nr.entries().len() == 30
        && lte.entries()[0].efficiency == 0.1523
        && lte.entries()[14].efficiency == 5.5547
        && nr.entries()[14].efficiency == 7.4063;
    report(
        4,
        "transform method + CQI transcription",
        sse_ok && digests_ok && entries_ok,
        format!(
            "ideal S-SE = {:.5} (target 0.1229 ± 0.001), digests ok = {digests_ok}, entries ok = {entries_ok}",
            a.total_weight
        ),
        t.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn ac5_model_comparison_dominance() {
    let t = Instant::now();
    let cfg = ScenarioConfig::default();
    let ks = [1, 2, 3, 4, 5];
    let cmp = model_comparison_totals(&cfg, &ks, Execution::default()).unwrap();
    let mut violations = 0;
    for (_, fixed) in &cmp.fixed_k {
        for (p, f) in cmp.proposed.iter().zip(fixed) {
            if f > p {
                violations += 1;
            }
        }
    }
    let zero_ks: Vec<u32> = cmp
        .fixed_k
        .iter()
        .filter(|(_, v)| v.iter().all(|&x| x == 0.0))
        .map(|(k, _)| *k)
        .collect();
    let means: Vec<String> = cmp
        .fixed_k
        .iter()
        .map(|(k, v)| format!("k={k}:{:.4}", v.iter().sum::<f64>() / v.len() as f64))
        .collect();
    let proposed_mean = cmp.proposed.iter().sum::<f64>() / cmp.proposed.len() as f64;
    report(
        5,
        "fig3 dominance",
        cmp.proposed.len() == 500 && violations == 0 && !zero_ks.is_empty(),
        format!(
            "{violations} per-drop violations; proposed mean {proposed_mean:.4}; fixed {}; zero at k = {zero_ks:?}",
            means.join(" ")
        ),
        t.elapsed(),
        Duration::from_secs(120),
    );
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn ac6_channel_count_monotonicity() {
    let t = Instant::now();
    let cfg = ScenarioConfig {
        sweep: Some(Sweep {
            param: SweepParam::NChannels,
            values: (1..=10).map(f64::from).collect(),
        }),
        ..ScenarioConfig::default()
    };
    let samples = sweep_drop_totals(&cfg, Execution::default()).unwrap();
    let mut per_drop_violations = 0;
    let mut mean_violations = 0;
    for w in samples.windows(2) {
        for system in SystemKind::ALL {
            let a = w[0].totals(system).unwrap();
            let b = w[1].totals(system).unwrap();
            per_drop_violations += a.iter().zip(b).filter(|(x, y)| y < x).count();
            if mean(b) < mean(a) {
                mean_violations += 1;
            }
        }
    }
    let curve = |s: &SweepSamples| format!("{:.3}", mean(s.totals(SystemKind::Semantic).unwrap()));
    report(
        6,
        "fig4a monotone in M",
        per_drop_violations == 0 && mean_violations == 0,
        format!(
            "{per_drop_violations} per-drop and {mean_violations} mean violations; semantic means {}",
            samples.iter().map(curve).collect::<Vec<_>>().join(",")
        ),
        t.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn ac7_transmit_power_saturation() {
    let t = Instant::now();
    let cfg = ScenarioConfig {
        sweep: Some(Sweep {
            param: SweepParam::TxPowerDbm,
            values: vec![40.0, 60.0],
        }),
        ..ScenarioConfig::default()
    };
    let samples = sweep_drop_totals(&cfg, Execution::default()).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for system in SystemKind::ALL {
        let at40 = mean(samples[0].totals(system).unwrap());
        let at60 = mean(samples[1].totals(system).unwrap());
        let rel = (at60 - at40) / at60;
        let pass = match system {
            SystemKind::Ideal => at60 > 1.1 * at40,
            _ => rel.abs() <= 0.01,
        };
        ok &= pass;
        detail.push(format!("{system}: {at40:.4}->{at60:.4} ({:+.2}%)", 100.0 * rel));
    }
    report(
        7,
        "fig4b saturation",
        ok,
        detail.join("; "),
        t.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn ac8_transform_factor_sweep() {
    let t = Instant::now();
    let mus = [10.0, 19.0, 27.0, 40.0, 60.0];
    let cfg = ScenarioConfig {
        sweep: Some(Sweep {
            param: SweepParam::Mu,
            values: mus.to_vec(),
        }),
        ..ScenarioConfig::default()
    };
    let records = run_scenario(&cfg).unwrap();
    let of = |s: SystemKind| -> Vec<(f64, f64)> {
        records
            .iter()
            .filter(|r| r.series == Series::System(s))
            .map(|r| (r.sweep_value.unwrap(), r.mean_total_sse))
            .collect()
    };
    let sem = of(SystemKind::Semantic);
    let sem_identical = sem.iter().all(|&(_, m)| m.to_bits() == sem[0].1.to_bits());
    let mut ok = sem_identical && sem.len() == mus.len();
    let mut detail = vec![format!("semantic bit-identical = {sem_identical}")];
    for s in [SystemKind::Ideal, SystemKind::FourG, SystemKind::FiveG] {
        let products: Vec<f64> = of(s).iter().map(|&(mu, m)| mu * m).collect();
        let reference = products[0];
        let worst = products
            .iter()
            .map(|p| ((p - reference) / reference).abs())
            .fold(0.0, f64::max);
        ok &= worst <= 1e-9;
        detail.push(format!("{s}: max rel dev of mean*mu = {worst:.2e}"));
    }
    let cross = crossover_mu(&records);
    ok &= cross.len() == 3;
    for c in &cross {
        detail.push(format!(
            "crossover {} = {}",
            c.system,
            c.mu.map_or("none".into(), |m| format!("{m:.2}"))
        ));
    }
    report(
        8,
        "fig4c transform factor structure",
        ok,
        detail.join("; "),
        t.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn ac9_invariant_suites() {
    let t = Instant::now();
    let mut failures: Vec<String> = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };

    // similarity: range and SNR monotonicity of the surrogate, incl. off-grid queries
    let surface = default_surrogate(20).unwrap();
    let mut range_ok = true;
    let mut mono_ok = true;
    for k in 1..=20 {
        let mut prev = -1.0;
        for i in 0..=700 {
            let snr = -20.0 + 0.05 * f64::from(i);
            let xi = surface.query(k, snr).unwrap();
            range_ok &= (0.0..=1.0).contains(&xi);
            mono_ok &= xi >= prev;
            prev = xi;
        }
        if k > 1 {
            let (a, b) = (surface.row(k - 1).unwrap(), surface.row(k).unwrap());
            mono_ok &= a.iter().zip(b).all(|(x, y)| x <= y);
        }
    }
    check(range_ok, "similarity range");
    check(mono_ok, "similarity monotonicity");

    // SNR linearity in p, g and |h|²
    let p = RadioParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut lin_ok = true;
    for _ in 0..1000 {
        let g = 10f64.powf(-rng.random_range(6.0..14.0));
        let h = rng.random_range(0.01..5.0);
        let c = rng.random_range(0.1..10.0);
        let (base, _) = semrra::channel::snr(&p, g, h).unwrap();
        let (sg, _) = semrra::channel::snr(&p, c * g, h).unwrap();
        let (sh, _) = semrra::channel::snr(&p, g, c * h).unwrap();
        let mut q = p.clone();
        q.tx_power_dbm += 10.0 * c.log10();
        let (sp, _) = semrra::channel::snr(&q, g, h).unwrap();
        for s in [sg, sh, sp] {
            lin_ok &= ((s - c * base) / (c * base)).abs() < 1e-12;
        }
    }
    check(lin_ok, "SNR linearity");

    // uniform disc and Rayleigh power
    let n = 100_000;
    let drop = sample_drop(n, 1, &p, 77).unwrap();
    let inner = drop
        .user_distances_km
        .iter()
        .filter(|&&d| d < p.cell_radius_km / 2.0)
        .count() as f64
        / n as f64;
    check((inner - 0.25).abs() <= 0.01, "uniform disc inner fraction");
    let mut fading: Vec<f64> = (0..n).map(|u| drop.link(u, 0).fading_power).collect();
    fading.sort_by(f64::total_cmp);
    let ks = fading
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = 1.0 - (-x).exp();
            (cdf - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - cdf).abs())
        })
        .fold(0.0, f64::max);
    check(ks < 0.01, "Rayleigh power KS");

    // matching structure and seed determinism
    let cfg = ScenarioConfig::default();
    let res = cfg.load_resources().unwrap();
    let mut structure_ok = true;
    for seed in 0..200 {
        let a = sample_drop(5, 7, &cfg.radio, seed).unwrap();
        let b = sample_drop(5, 7, &cfg.radio, seed).unwrap();
        check(a == b, "seed determinism");
        let sem = solve_semantic(&a, &res.surface, &cfg.constraints).unwrap();
        structure_ok &= sem.is_valid_matching(5, 7);
        structure_ok &= sem.per_user.iter().all(|pp| {
            pp.feasible
                && pp.xi >= cfg.constraints.xi_threshold
                && pp.weight >= cfg.constraints.sse_threshold
        });
        for s in [SystemKind::Ideal, SystemKind::FourG, SystemKind::FiveG] {
            let m = solve_benchmark(&a, s, &res.tables, cfg.tf, cfg.src, &cfg.constraints).unwrap();
            structure_ok &= m.is_valid_matching(5, 7);
            structure_ok &= m.per_user.iter().all(|pp| pp.weight >= cfg.constraints.sse_threshold);
        }
    }
    check(structure_ok, "matching structure");

    report(
        9,
        "invariant suites",
        failures.is_empty(),
        format!(
            "failures: {failures:?}; inner fraction {inner:.4}, KS {ks:.4}"
        ),
        t.elapsed(),
        Duration::from_secs(60),
    );
}

/// Not an acceptance criterion: isolates why AC8 fails at the reference
/// parameters. With the per-link S-SE floor removed, the μ structure is exact.
#[test]
fn ac8_structure_without_sse_floor() {
    let mus = [10.0, 19.0, 27.0, 40.0, 60.0];
    let mut cfg = ScenarioConfig {
        sweep: Some(Sweep {
            param: SweepParam::Mu,
            values: mus.to_vec(),
        }),
        ..ScenarioConfig::default()
    };
    cfg.constraints.sse_threshold = 0.0;
    let records = run_scenario(&cfg).unwrap();
    for s in [SystemKind::Ideal, SystemKind::FourG, SystemKind::FiveG] {
        let products: Vec<f64> = records
            .iter()
            .filter(|r| r.series == Series::System(s))
            .map(|r| r.sweep_value.unwrap() * r.mean_total_sse)
            .collect();
        for p in &products {
            let rel = ((p - products[0]) / products[0]).abs();
            println!("{s}: mean*mu = {p:.12} (rel dev {rel:.2e})");
            assert!(rel <= 1e-9, "{s}: {rel}");
        }
    }
}
