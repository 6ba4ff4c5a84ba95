//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use chrono::{Datelike, NaiveDate, TimeDelta};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topofield::field::compute_norm_stats;
use topofield::fusion::{entropy_term, fuse, tv, LambdaMap};
use topofield::losses::{
    composite_report, content_loss, hinge_d, hinge_g, mae, ssim, GateSchedule, LossComponents, LossWeights,
};
use topofield::metrics::{lambda_bin_analysis, rmse, BinSpec};
use topofield::persistence::{bottleneck_distance, read_csv, sublevel_persistence_all, write_csv};
use topofield::persistence::{PersistenceDiagram, PersistencePair};
use topofield::synthetic::{generate_climate, oracle_lambda, ClimateSpec};
use topofield::temporal::{
    build_climatology, climatology_forecast, interannual_dates, uniform_lead_times, validate_split, LeadTime, Role,
    SampleDates,
};
use topofield::{gfs, FieldStack, ScalarField, SplitSpec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

fn persistence_corpus() -> Vec<ScalarField> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    (0..1000).map(|_| integer_grid(&mut rng)).collect()
}

fn c1_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let corpus = persistence_corpus();
    let mut h1_pairs = 0;
    for (i, f) in corpus.iter().enumerate() {
        let (h0, h1) = sublevel_persistence_all(f);
        let (o0, o1) = naive_persistence(f);
        check(multiset(&h0) == multiset(&o0), format!("H0 differs on grid {i}"))?;
        check(multiset(&h1) == multiset(&o1), format!("H1 differs on grid {i}"))?;
        h1_pairs += h1.len();
    }
    let elapsed = start.elapsed();
    check(elapsed <= Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} grids, {h1_pairs} H1 pairs, {:.2}s",
        corpus.len(),
        elapsed.as_secs_f64()
    ))
}

fn c2_minima_count() -> Outcome {
    for (i, f) in persistence_corpus().iter().enumerate() {
        let (h0, _) = sublevel_persistence_all(f);
        let minima = local_minima(f);
        check(
            h0.len() == minima.len(),
            format!("grid {i}: {} bars vs {} minima", h0.len(), minima.len()),
        )?;
        let mut births: Vec<u64> = h0.pairs.iter().map(|p| p.birth.to_bits()).collect();
        let mut mins: Vec<u64> = minima.iter().map(|&v| f.values()[v].to_bits()).collect();
        births.sort_unstable();
        mins.sort_unstable();
        check(births == mins, format!("grid {i}: births are not the minima values"))?;
    }
    Ok("1000/1000 grids".into())
}

fn c3_stability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let h = rng.random_range(3..=10);
        let w = rng.random_range(3..=10);
        let f = uniform_grid(&mut rng, h, w);
        let eps: f64 = rng.random_range(0.0..0.25);
        let g = f
            .zip_map(&uniform_grid(&mut rng, h, w), |a, n| a + eps * (2.0 * n - 1.0))
            .unwrap();
        let sup = f
            .values()
            .iter()
            .zip(g.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let (f0, f1) = sublevel_persistence_all(&f);
        let (g0, g1) = sublevel_persistence_all(&g);
        for (a, b) in [(f0, g0), (f1, g1)] {
            let d = bottleneck_distance(&a, &b).map_err(|e| e.to_string())?;
            check(d <= sup + 1e-9, format!("pair {i} dim {}: d_B {d} > {sup}", a.dim))?;
            if sup > 0.0 {
                worst = worst.max(d / sup);
            }
        }
    }
    Ok(format!("500 pairs, max d_B/sup = {worst:.3}"))
}

fn c4_bottleneck() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for i in 0..500 {
        let ess = rng.random_range(0..=2);
        let a = random_diagram(&mut rng, 8, ess);
        let b = random_diagram(&mut rng, 8, ess);
        let d = bottleneck_distance(&a, &b).map_err(|e| e.to_string())?;
        let oracle = exhaustive_bottleneck(&a, &b);
        check(d == oracle, format!("pair {i}: {d} vs oracle {oracle}"))?;
        let back = bottleneck_distance(&b, &a).map_err(|e| e.to_string())?;
        check(d == back, format!("pair {i}: asymmetric {d} vs {back}"))?;
    }
    for i in 0..200 {
        let a = random_diagram(&mut rng, 8, 1);
        let b = random_diagram(&mut rng, 8, 1);
        let c = random_diagram(&mut rng, 8, 1);
        let ab = bottleneck_distance(&a, &b).unwrap();
        let bc = bottleneck_distance(&b, &c).unwrap();
        let ac = bottleneck_distance(&a, &c).unwrap();
        check(ac <= ab + bc + 1e-9, format!("triple {i}: {ac} > {ab} + {bc}"))?;
    }
    Ok("500 exact matches, symmetric, 200 triangle triples".into())
}

fn c5_losses() -> Outcome {
    let x = ScalarField::from_fn(16, 16, |r, c| (((r * 31 + c * 17) % 23) as f64) / 22.0);
    let c = content_loss(&x, &x).map_err(|e| e.to_string())?;
    check(c.abs() <= 1e-9, format!("content_loss(x, x) = {c}"))?;

    let a = ScalarField::filled(12, 12, 0.2);
    let b = ScalarField::filled(12, 12, 0.4);
    let closed = (2.0 * 0.2 * 0.4 + 1e-4) / (0.2f64.powi(2) + 0.4f64.powi(2) + 1e-4);
    let s = ssim(&a, &b).map_err(|e| e.to_string())?;
    check((s - closed).abs() <= 1e-9, format!("ssim {s} vs {closed}"))?;

    let ok = |r: topofield::Result<f64>| r.map_err(|e| e.to_string());
    check(ok(hinge_d(&[1.0; 4], &[-1.0; 4]))? == 0.0, "hinge_d(1, -1) != 0")?;
    check(ok(hinge_d(&[0.0; 4], &[0.0; 4]))? == 2.0, "hinge_d(0, 0) != 2")?;
    check(
        ok(hinge_g(&[0.0; 3]))? == 0.0 && ok(hinge_g(&[1.0; 3]))? == -1.0,
        "hinge_g examples",
    )?;

    let parts = LossComponents {
        content: 1.0,
        adv: 1.0,
        reg: 1.0,
        topo: 1.0,
    };
    let gate = GateSchedule::new(10, 5).unwrap();
    let w = LossWeights::default();
    let got: Vec<(f64, bool)> = [3, 15, 16]
        .iter()
        .map(|&s| {
            let r = composite_report(parts, &w, s, &gate);
            (r.total, r.topo_active)
        })
        .collect();
    check(
        got == vec![(3.0, false), (4.0, true), (3.0, false)],
        format!("gate pattern {got:?}"),
    )?;
    Ok(format!("ssim(0.2, 0.4) = {s:.6}, gate totals 3/4/3"))
}

fn c6_fusion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for i in 0..100 {
        let (h, w) = (rng.random_range(2..12), rng.random_range(2..12));
        let inter = ScalarField::from_fn(h, w, |_, _| rng.random_range(-300.0..300.0));
        let intra = ScalarField::from_fn(h, w, |_, _| rng.random_range(-300.0..300.0));
        let lam = LambdaMap::single(ScalarField::from_fn(h, w, |_, _| rng.random_range(0.0..=1.0))).unwrap();
        let ones = LambdaMap::single(ScalarField::filled(h, w, 1.0)).unwrap();
        let zeros = LambdaMap::single(ScalarField::filled(h, w, 0.0)).unwrap();
        check(
            fuse(&inter, &intra, &ones).unwrap() == inter,
            format!("triple {i}: λ≡1 is not inter"),
        )?;
        check(
            fuse(&inter, &intra, &zeros).unwrap() == intra,
            format!("triple {i}: λ≡0 is not intra"),
        )?;
        let f = fuse(&inter, &intra, &lam).unwrap();
        for k in 0..h * w {
            let (a, b, v) = (inter.values()[k], intra.values()[k], f.values()[k]);
            check(
                a.min(b) <= v && v <= a.max(b),
                format!("triple {i}: {v} outside [{a}, {b}]"),
            )?;
        }
    }
    let board = ScalarField::from_fn(8, 8, |r, c| ((r + c) % 2) as f64);
    let t = tv(&board).map_err(|e| e.to_string())?;
    check(t == 1.0, format!("TV(checkerboard) = {t}"))?;
    let e = entropy_term(&ScalarField::filled(5, 5, 0.5));
    check(
        (e - std::f64::consts::LN_2).abs() <= 1e-12,
        format!("entropy(0.5) = {e}"),
    )?;
    Ok("100 random triples, TV = 1, entropy = ln 2".into())
}

/// Cells whose lower-median λ per RMSE bin equals the given medians.
fn constructed_cells(medians: [f64; 4], seed: u64) -> (ScalarField, ScalarField) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centres = [1.5, 3.5, 4.5, 7.0];
    let mut lam = Vec::new();
    let mut err = Vec::new();
    for (m, c) in medians.iter().zip(centres) {
        let n = 2 * rng.random_range(3..12) + 1;
        let half = n / 2;
        for k in 0..n {
            let offset = (k as f64 - half as f64) * 0.001;
            lam.push(if k == half { *m } else { m + offset });
            err.push(c + rng.random_range(-0.4..0.4));
        }
    }
    let n = lam.len();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let lam = order.iter().map(|&i| lam[i]).collect();
    let err = order.iter().map(|&i| err[i]).collect();
    (
        ScalarField::new(1, n, lam).unwrap(),
        ScalarField::new(1, n, err).unwrap(),
    )
}

fn c7_lambda_bins() -> Outcome {
    let rows = [
        ("DJF", [0.687, 0.698, 0.737, 0.742], 0.055, "0.055"),
        ("MAM", [0.572, 0.580, 0.562, 0.592], 0.020, "0.020"),
        ("JJA", [0.554, 0.497, 0.509, 0.517], -0.037, "-0.037"),
        ("SON", [0.702, 0.706, 0.673, 0.727], 0.025, "0.025"),
    ];
    let mut shown = Vec::new();
    for (i, (season, medians, expected, text)) in rows.iter().enumerate() {
        let (lam, err) = constructed_cells(*medians, 70 + i as u64);
        let row = lambda_bin_analysis(&lam, &err, &BinSpec::default()).map_err(|e| e.to_string())?;
        check(
            row.medians == medians.map(Some).to_vec(),
            format!("{season}: medians {:?}", row.medians),
        )?;
        let delta = row.delta_checked().map_err(|e| e.to_string())?;
        check(format!("{delta:.3}") == *text, format!("{season}: Δ = {delta}"))?;
        check(
            (delta - expected).abs() <= 1e-12,
            format!("{season}: Δ = {delta} vs {expected}"),
        )?;
        shown.push(format!("{season} {delta:.3}"));
    }
    Ok(shown.join(", "))
}

fn dual_climate() -> ClimateSpec {
    ClimateSpec {
        n_years: 8,
        height: 16,
        width: 16,
        annual_amp: 9.0,
        interannual_amp: 1.5,
        weather_amp: 2.5,
        ar1_coeff: 0.97,
        seed: 8,
        start_year: 2012,
        baseline_kelvin: 283.0,
    }
}

fn c8_dual_scale() -> Outcome {
    let stack = generate_climate(&dual_climate()).map_err(|e| e.to_string())?;
    let split = SplitSpec::new(2012..=2017, [2018, 2019]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let taus = uniform_lead_times(50, 88);
    let get = |d: NaiveDate| stack.get(d, 0).unwrap();
    let (mut fused_total, mut inter_total, mut intra_total) = (0.0, 0.0, 0.0);
    for (i, tau) in taus.into_iter().enumerate() {
        let t = ymd(2018, 1, 1) + TimeDelta::days(rng.random_range(0..730));
        let s = SampleDates::new(t, tau);
        // Branch predictors: mean of the calendar-aligned years, and the latest lead-matched field.
        let inter = get(s.inter[0])
            .zip_map(get(s.inter[1]), |a, b| a + b)
            .unwrap()
            .zip_map(get(s.inter[2]), |a, b| (a + b) / 3.0)
            .unwrap();
        let intra = get(s.intra[2]).clone();
        let truth = get(t);
        let fused = fuse(&inter, &intra, &oracle_lambda(&inter, &intra, truth).unwrap()).unwrap();
        let (ef, ei, er) = (
            mae(&fused, truth).unwrap(),
            mae(&inter, truth).unwrap(),
            mae(&intra, truth).unwrap(),
        );
        check(
            ef <= ei && ef <= er,
            format!("case {i} ({t}, τ={tau}): fused {ef} vs {ei}/{er}"),
        )?;
        fused_total += ef;
        inter_total += ei;
        intra_total += er;
    }

    let clim = build_climatology(&stack, &split).map_err(|e| e.to_string())?;
    // Every test-year target whose τ-lagged inputs exist; the set shifts with τ.
    let clim_rmse = |days: i64| {
        let tau = LeadTime::new(days).unwrap();
        let scores: Vec<f64> = stack
            .dates()
            .iter()
            .filter(|&&t| split.is_test(t))
            .filter(|&&t| SampleDates::new(t, tau).inputs().all(|d| stack.index_of(d).is_some()))
            .map(|&t| rmse(&climatology_forecast(&clim, t).unwrap(), get(t)).unwrap())
            .collect();
        scores.iter().sum::<f64>() / scores.len() as f64
    };
    let (r30, r90) = (clim_rmse(30), clim_rmse(90));
    check(
        (r90 - r30).abs() <= 0.05 * r30,
        format!("climatology RMSE {r30} (30) vs {r90} (90)"),
    )?;
    let n = 50.0;
    Ok(format!(
        "50/50 cases; mean MAE fused {:.3} K, inter {:.3} K, intra {:.3} K; climatology RMSE {:.4} K at τ=30, {:.4} K at τ=90",
        fused_total / n,
        inter_total / n,
        intra_total / n,
        r30,
        r90
    ))
}

fn c9_temporal() -> Outcome {
    let leap = interannual_dates(ymd(2020, 2, 29), ymd(2010, 1, 1)).map_err(|e| e.to_string())?;
    check(
        leap == [ymd(2017, 2, 28), ymd(2018, 2, 28), ymd(2019, 2, 28)],
        format!("leap day maps to {leap:?}"),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let split = SplitSpec::new(1980..=2015, 2016..=2025).unwrap();
    for (i, tau) in uniform_lead_times(10_000, 9).into_iter().enumerate() {
        let t = ymd(rng.random_range(1985..2026), 1, 1) + TimeDelta::days(rng.random_range(0..365));
        let s = SampleDates::new(t, tau);
        check(
            s.inputs().all(|d| d < t),
            format!("sample {i} leaks: {}", s.to_manifest_line()),
        )?;
        if split.is_test(t) {
            check(
                validate_split(&s, &split, Role::Test),
                format!("sample {i} rejected as test"),
            )?;
        }
    }

    let mut spec = dual_climate();
    spec.n_years = 5;
    spec.height = 8;
    spec.width = 8;
    let raw = generate_climate(&spec).map_err(|e| e.to_string())?;
    let split = SplitSpec::new(2012..=2014, [2015, 2016]).unwrap();
    let records = raw
        .dates()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let f = raw.field(i, 0);
            (
                d,
                if split.is_test(d) {
                    f.map(|v| -v * 1e3)
                } else {
                    f.clone()
                },
            )
        })
        .collect();
    let poisoned = FieldStack::from_records(records).unwrap();
    let (s0, s1) = (
        compute_norm_stats(&raw, &split).unwrap(),
        compute_norm_stats(&poisoned, &split).unwrap(),
    );
    check(
        s0.p1.to_bits() == s1.p1.to_bits() && s0.p99.to_bits() == s1.p99.to_bits(),
        "NormStats changed under poisoning",
    )?;
    let (c0, c1) = (
        build_climatology(&raw, &split).unwrap(),
        build_climatology(&poisoned, &split).unwrap(),
    );
    check(
        gfs::encode(&c0.to_stack().unwrap()) == gfs::encode(&c1.to_stack().unwrap()) && c0 == c1,
        "climatology changed under poisoning",
    )?;
    Ok("leap day, 10000 causal samples, poisoning-invariant stats and climatology".into())
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_topofield"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn read_bytes(p: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(p).map_err(|e| format!("{}: {e}", p.display()))
}

fn c10_cli() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let specials = [0.0f32, -0.0, f32::MIN_POSITIVE, 1e-45, f32::MAX, -f32::MAX, 0.1, 273.15];
    let fields: Vec<ScalarField> = (0..6)
        .map(|k| {
            ScalarField::from_fn(5, 7, |r, c| {
                if k == 0 {
                    f64::from(specials[(r * 7 + c) % specials.len()])
                } else {
                    f64::from(rng.random_range(-1e4f32..1e4))
                }
            })
        })
        .collect();
    let dates = vec![ymd(1970, 1, 1), ymd(1999, 12, 31), ymd(2024, 2, 29)];
    let stack = FieldStack::new(5, 7, 2, dates, fields).unwrap();
    let bytes = gfs::encode(&stack);
    let back = gfs::decode(&bytes).map_err(|e| e.to_string())?;
    check(gfs::encode(&back) == bytes, "GFS re-encode differs")?;
    let bits = |s: &FieldStack| -> Vec<u64> {
        s.fields()
            .iter()
            .flat_map(|f| f.values().iter().map(|v| v.to_bits()))
            .collect()
    };
    check(
        bits(&back) == bits(&stack) && back.dates() == stack.dates(),
        "GFS round trip is not bit-exact",
    )?;

    let mut diagrams = Vec::new();
    for dim in 0..2u8 {
        let mut pairs: Vec<PersistencePair> = (0..50)
            .map(|_| {
                let b = f64::from_bits(rng.random::<u64>() >> 2) * if rng.random_bool(0.5) { -1.0 } else { 1.0 };
                PersistencePair {
                    birth: b,
                    death: b + rng.random_range(1e-300..1e300),
                }
            })
            .filter(|p| p.death.is_finite())
            .collect();
        pairs.push(PersistencePair {
            birth: 0.1 + 0.2,
            death: f64::INFINITY,
        });
        diagrams.push(PersistenceDiagram::new(dim, pairs));
    }
    let mut csv = Vec::new();
    write_csv(&mut csv, &diagrams).map_err(|e| e.to_string())?;
    let parsed = read_csv(csv.as_slice()).map_err(|e| e.to_string())?;
    let pd_bits = |ds: &[PersistenceDiagram]| -> Vec<(u8, u64, u64)> {
        ds.iter()
            .flat_map(|d| {
                d.pairs
                    .iter()
                    .map(move |p| (d.dim, p.birth.to_bits(), p.death.to_bits()))
            })
            .collect()
    };
    check(
        pd_bits(&parsed) == pd_bits(&diagrams),
        "diagram CSV round trip is not exact",
    )?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name);
    let s = |path: &Path| path.to_str().unwrap().to_string();
    let spec = r#"{"n_years": 4, "height": 12, "width": 12, "annual_amp": 8.0, "interannual_amp": 1.0,
                   "weather_amp": 2.0, "ar1_coeff": 0.9, "seed": 3, "start_year": 2016}"#;
    std::fs::write(p("spec.json"), spec).unwrap();
    for out in ["raw1.gfs", "raw2.gfs"] {
        run_cli(&["synth", "--input", &s(&p("spec.json")), "--output", &s(&p(out))])?;
    }
    let raw = read_bytes(&p("raw1.gfs"))?;
    check(raw == read_bytes(&p("raw2.gfs"))?, "synth outputs differ")?;
    let decoded = gfs::decode(&raw).map_err(|e| e.to_string())?;
    check(gfs::encode(&decoded) == raw, "CLI-written GFS does not round-trip")?;

    run_cli(&[
        "stats",
        "--input",
        &s(&p("raw1.gfs")),
        "--train-years",
        "2016-2018",
        "--test-years",
        "2019",
        "--output",
        &s(&p("stats.json")),
        "--clim-output",
        &s(&p("clim.gfs")),
    ])?;
    run_cli(&[
        "normalize",
        "--input",
        &s(&p("raw1.gfs")),
        "--stats",
        &s(&p("stats.json")),
        "--output",
        &s(&p("norm.gfs")),
    ])?;
    for (out, threads) in [("pd1.csv", "1"), ("pd2.csv", "3")] {
        run_cli(&[
            "persistence",
            "--input",
            &s(&p("norm.gfs")),
            "--date",
            "2019-07-01",
            "--output",
            &s(&p(out)),
            "--threads",
            threads,
        ])?;
    }
    check(
        read_bytes(&p("pd1.csv"))? == read_bytes(&p("pd2.csv"))?,
        "persistence CSVs differ",
    )?;

    let norm = gfs::read_file(p("norm.gfs")).map_err(|e| e.to_string())?;
    let test_records: Vec<(NaiveDate, ScalarField)> = norm
        .dates()
        .iter()
        .enumerate()
        .filter(|(_, d)| d.year() == 2019)
        .map(|(i, &d)| (d, norm.field(i, 0).map(|v| (v * 0.9 + 0.05).clamp(0.0, 1.0))))
        .collect();
    gfs::write_file(p("pred.gfs"), &FieldStack::from_records(test_records).unwrap()).unwrap();
    let mut outputs = Vec::new();
    for (threads, rec) in [("1", "rec1.json"), ("4", "rec2.json")] {
        outputs.push(run_cli(&[
            "evaluate",
            "--pred",
            &s(&p("pred.gfs")),
            "--truth",
            &s(&p("norm.gfs")),
            "--clim",
            &s(&p("clim.gfs")),
            "--stats",
            &s(&p("stats.json")),
            "--tau",
            "30",
            "--json",
            "--threads",
            threads,
            "--output",
            &s(&p(rec)),
        ])?);
    }
    check(outputs[0] == outputs[1], "evaluate stdout differs")?;
    check(
        read_bytes(&p("rec1.json"))? == read_bytes(&p("rec2.json"))?,
        "evaluate records differ",
    )?;
    serde_json::from_slice::<serde_json::Value>(&outputs[0]).map_err(|e| format!("evaluate JSON: {e}"))?;

    let d: serde_json::Value = serde_json::from_slice(&run_cli(&[
        "bottleneck",
        &s(&p("pd1.csv")),
        &s(&p("pd2.csv")),
        "--dim",
        "1",
        "--json",
    ])?)
    .map_err(|e| e.to_string())?;
    check(d["distance"] == serde_json::json!(0.0), format!("self-distance {d}"))?;
    Ok("GFS and CSV bit-exact; synth, persistence and evaluate byte-identical across runs and thread counts".into())
}

fn main() {
    let start = Instant::now();
    let criteria: [Criterion; 10] = [
        ("persistence oracle equivalence", c1_oracle_equivalence),
        ("H0 births equal 4-neighbour local minima", c2_minima_count),
        ("stability under bounded perturbation", c3_stability),
        ("bottleneck exactness, symmetry, triangle inequality", c4_bottleneck),
        ("loss kernels and topology gate", c5_losses),
        ("fusion identities and regularizer values", c6_fusion),
        ("median-lambda bin deltas", c7_lambda_bins),
        ("dual-scale superiority and flat climatology", c8_dual_scale),
        ("temporal protocol", c9_temporal),
        ("CLI determinism and formats", c10_cli),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    let total = start.elapsed();
    let within = total <= Duration::from_secs(300);
    println!(
        "acceptance: {}/{} criteria passed in {:.2}s{}",
        criteria.len() - failures,
        criteria.len(),
        total.as_secs_f64(),
        if within { "" } else { " (over the 5 minute budget)" }
    );
    if failures > 0 || !within {
        std::process::exit(1);
    }
}
