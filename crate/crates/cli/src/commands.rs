use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use chrono::NaiveDate;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use topofield::field::{compute_norm_stats, denormalize, normalize};
use topofield::fusion::{apply_residual, clamp_unit, fuse, regularizer, LambdaMap, RegWeights};
use topofield::losses::{
    composite_report, content_loss, hinge_d, hinge_g, topo_loss, GateSchedule, LossComponents, LossWeights,
};
use topofield::metrics::{
    self, kde_overlap, lambda_bin_analysis, lead_time_curves, season_of, seasonal_summary, seasons_present, BinSpec,
    EvalRecord, Season, StratRow,
};
use topofield::persistence::{self, PersistenceDiagram};
use topofield::synthetic::{generate_climate, ClimateSpec};
use topofield::temporal::{
    build_climatology, build_sample, climatology_forecast, uniform_lead_times, validate_split, Climatology, LeadTime,
    Role, SampleDates,
};
use topofield::topo::{build_structural_channels, CriticalKind};
use topofield::{gfs, Error, FieldStack, NormStats, ScalarField, SplitSpec};

use crate::args::*;
use crate::config::{parse_bins, parse_years, Config};
use crate::UsageError;

fn read_stack(path: &Path) -> Result<FieldStack> {
    gfs::read_file(path).with_context(|| format!("reading {}", path.display()))
}

fn write_stack(path: &Path, stack: &FieldStack) -> Result<()> {
    gfs::write_file(path, stack).with_context(|| format!("writing {}", path.display()))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_stats(path: &Path) -> Result<NormStats> {
    let raw: NormStats = read_json(path)?;
    Ok(NormStats::new(raw.p1, raw.p99)?)
}

fn split_from(train: Option<&str>, test: Option<&str>, cfg: &Config) -> Result<SplitSpec> {
    let train = train
        .or(cfg.train_years.as_deref())
        .ok_or_else(|| UsageError("--train-years is required".into()))?;
    let test = test.or(cfg.test_years.as_deref()).unwrap_or("");
    Ok(SplitSpec::new(parse_years(train)?, parse_years(test)?)?)
}

/// Applies `f` to channel 0 of every record in parallel, keeping date order.
fn map_records<F>(stack: &FieldStack, f: F) -> Result<FieldStack>
where
    F: Fn(&ScalarField) -> topofield::Result<ScalarField> + Sync,
{
    let fields: Vec<ScalarField> = (0..stack.len())
        .into_par_iter()
        .map(|i| f(stack.field(i, 0)))
        .collect::<topofield::Result<_>>()?;
    Ok(FieldStack::new(
        stack.height(),
        stack.width(),
        1,
        stack.dates().to_vec(),
        fields,
    )?)
}

fn field_at(stack: &FieldStack, date: NaiveDate) -> Result<&ScalarField> {
    Ok(stack.get(date, 0).ok_or_else(|| Error::MissingDate(vec![date]))?)
}

/// Record `date` of a per-date stack, or its only record when it holds one.
fn broadcast_record(stack: &FieldStack, date: NaiveDate) -> Result<&[ScalarField]> {
    if stack.len() == 1 {
        return Ok(stack.record(0));
    }
    let i = stack.index_of(date).ok_or_else(|| Error::MissingDate(vec![date]))?;
    Ok(stack.record(i))
}

pub fn stats(a: &StatsArgs, cfg: &Config) -> Result<Value> {
    let stack = read_stack(&a.input)?;
    let split = split_from(a.train_years.as_deref(), a.test_years.as_deref(), cfg)?;
    let stats = compute_norm_stats(&stack, &split)?;
    if let Some(path) = &a.output {
        write_json(path, &stats)?;
    }
    let train_records = stack.dates().iter().filter(|d| split.is_train(**d)).count();
    let mut out = json!({ "p1": stats.p1, "p99": stats.p99, "train_records": train_records });
    if let Some(path) = &a.clim_output {
        let clim = build_climatology(&stack, &split)?;
        write_stack(path, &clim.to_stack()?)?;
        out["climatology_days"] = clim.len().into();
    }
    Ok(out)
}

pub fn normalize_cmd(a: &NormalizeArgs) -> Result<Value> {
    let stack = read_stack(&a.input)?;
    let stats = read_stats(&a.stats)?;
    let out = if a.inverse {
        map_records(&stack, |f| denormalize(f, &stats))?
    } else {
        map_records(&stack, |f| Ok(normalize(f, &stats)))?
    };
    write_stack(&a.output, &out)?;
    Ok(json!({ "records": out.len(), "p1": stats.p1, "p99": stats.p99 }))
}

pub fn channels(a: &ChannelsArgs) -> Result<Value> {
    let mut stack = read_stack(&a.input)?;
    if let Some(path) = &a.stats {
        let stats = read_stats(path)?;
        stack = map_records(&stack, |f| Ok(normalize(f, &stats)))?;
    }
    let built: Vec<_> = (0..stack.len())
        .into_par_iter()
        .map(|i| build_structural_channels(stack.field(i, 0)))
        .collect::<topofield::Result<_>>()?;
    let mut counts = [0usize; 4];
    let mut contour_pixels = 0usize;
    let mut fields = Vec::with_capacity(built.len() * 4);
    for m in built {
        for &code in m.channels.kind.values() {
            counts[(code * 3.0).round() as usize] += 1;
        }
        contour_pixels += m.channels.contour.values().iter().filter(|&&v| v == 1.0).count();
        fields.extend(m.to_channels());
    }
    let out = FieldStack::new(stack.height(), stack.width(), 4, stack.dates().to_vec(), fields)?;
    write_stack(&a.output, &out)?;
    Ok(json!({
        "records": out.len(),
        "maxima": counts[CriticalKind::Maximum.code() as usize],
        "minima": counts[CriticalKind::Minimum.code() as usize],
        "saddles": counts[CriticalKind::Saddle.code() as usize],
        "contour_pixels": contour_pixels,
    }))
}

fn diagram_json(pd: &PersistenceDiagram) -> Value {
    let pairs: Vec<Value> = pd
        .pairs
        .iter()
        .map(|p| json!([p.birth, if p.is_essential() { Value::Null } else { p.death.into() }]))
        .collect();
    json!({ "dim": pd.dim, "count": pd.len(), "essential": pd.essential_births().len(), "pairs": pairs })
}

pub fn persistence_cmd(a: &PersistenceArgs) -> Result<Value> {
    let stack = read_stack(&a.input)?;
    let index = match a.date {
        Some(d) => stack.index_of(d).ok_or_else(|| Error::MissingDate(vec![d]))?,
        None if stack.len() == 1 => 0,
        None => return Err(UsageError(format!("stack holds {} records; choose one with --date", stack.len())).into()),
    };
    let field = stack.field(index, 0);
    let diagrams: Vec<PersistenceDiagram> = match a.dim {
        Some(dim) => vec![persistence::sublevel_persistence(field, dim)?],
        None => {
            let (h0, h1) = persistence::sublevel_persistence_all(field);
            vec![h0, h1]
        }
    };
    if let Some(path) = &a.output {
        let file = File::create(path).with_context(|| format!("writing {}", path.display()))?;
        let mut w = BufWriter::new(file);
        persistence::write_csv(&mut w, &diagrams)?;
        w.flush()?;
    }
    Ok(json!({
        "date": stack.dates()[index].to_string(),
        "filtration": persistence::FILTRATION,
        "diagrams": diagrams.iter().map(diagram_json).collect::<Vec<_>>(),
    }))
}

fn read_diagrams(path: &Path) -> Result<Vec<PersistenceDiagram>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    persistence::read_csv(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))
}

pub fn bottleneck(a: &BottleneckArgs) -> Result<Value> {
    let (da, db) = (read_diagrams(&a.a)?, read_diagrams(&a.b)?);
    let dim = match a.dim {
        Some(d) => d,
        None => {
            let dims: BTreeSet<u8> = da.iter().chain(&db).map(|d| d.dim).collect();
            match dims.len() {
                0 => 1,
                1 => *dims.first().expect("one element"),
                _ => return Err(UsageError("the files hold several dimensions; choose one with --dim".into()).into()),
            }
        }
    };
    let pick = |ds: &[PersistenceDiagram]| {
        ds.iter()
            .find(|d| d.dim == dim)
            .cloned()
            .unwrap_or_else(|| PersistenceDiagram::empty(dim))
    };
    let distance = persistence::bottleneck_distance(&pick(&da), &pick(&db))?;
    Ok(json!({ "distance": distance, "dim": dim }))
}

pub fn sample(a: &SampleArgs, cfg: &Config) -> Result<Value> {
    let stack = read_stack(&a.input)?;
    let split = match a.role {
        Some(_) => Some(split_from(a.train_years.as_deref(), a.test_years.as_deref(), cfg)?),
        None => None,
    };
    let role = a.role.map(|r| match r {
        RoleArg::Train => Role::Train,
        RoleArg::Test => Role::Test,
    });
    let fixed = a.tau.or(cfg.tau).map(LeadTime::new).transpose()?;

    if let Some(t) = a.date {
        let tau = match fixed {
            Some(tau) => tau,
            None => uniform_lead_times(1, a.seed.or(cfg.seed).unwrap_or(0))[0],
        };
        let s = build_sample(&stack, t, tau)?;
        let valid = match (&split, role) {
            (Some(split), Some(role)) => Some(validate_split(&s.dates, split, role)),
            _ => None,
        };
        let line = s.dates.to_manifest_line();
        if let Some(path) = &a.output {
            std::fs::write(path, format!("{line}\n")).with_context(|| format!("writing {}", path.display()))?;
        }
        return Ok(json!({ "sample": s.dates, "manifest": line, "valid_for_role": valid }));
    }

    let targets = stack.dates();
    let taus = match fixed {
        Some(tau) => vec![tau; targets.len()],
        None => uniform_lead_times(targets.len(), a.seed.or(cfg.seed).unwrap_or(0)),
    };
    let start = targets.first().copied();
    let mut lines = Vec::new();
    let mut skipped = 0usize;
    for (&t, &tau) in targets.iter().zip(&taus) {
        let s = SampleDates::new(t, tau);
        let available = s.inputs().all(|d| Some(d) >= start && stack.index_of(d).is_some());
        let allowed = match (&split, role) {
            (Some(split), Some(role)) => validate_split(&s, split, role),
            _ => true,
        };
        if available && allowed {
            lines.push(s.to_manifest_line());
        } else {
            skipped += 1;
        }
    }
    let mut out = json!({ "samples": lines.len(), "skipped": skipped });
    match &a.output {
        Some(path) => {
            let mut text = lines.join("\n");
            if !text.is_empty() {
                text.push('\n');
            }
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => out["manifest"] = lines.into(),
    }
    Ok(out)
}

pub fn fuse_cmd(a: &FuseArgs, cfg: &Config) -> Result<Value> {
    let inter = read_stack(&a.inter)?;
    let intra = read_stack(&a.intra)?;
    let lambda = read_stack(&a.lambda)?;
    let residual = a.residual.as_deref().map(read_stack).transpose()?;
    if inter.dates() != intra.dates() {
        let (x, y): (BTreeSet<_>, BTreeSet<_>) = (inter.dates().iter().collect(), intra.dates().iter().collect());
        let missing: Vec<NaiveDate> = x.symmetric_difference(&y).map(|d| **d).collect();
        return Err(Error::MissingDate(missing).into());
    }
    let clamp = a.clamp || cfg.clamp.unwrap_or(false);
    let fields: Vec<ScalarField> = inter
        .dates()
        .par_iter()
        .enumerate()
        .map(|(i, &d)| -> Result<ScalarField> {
            let lam = LambdaMap::new(broadcast_record(&lambda, d)?.to_vec())?;
            let mut out = fuse(inter.field(i, 0), intra.field(i, 0), &lam)?;
            if let Some(r) = &residual {
                out = apply_residual(&out, &broadcast_record(r, d)?[0])?;
            }
            Ok(if clamp { clamp_unit(&out) } else { out })
        })
        .collect::<Result<_>>()?;
    let out = FieldStack::new(inter.height(), inter.width(), 1, inter.dates().to_vec(), fields)?;
    write_stack(&a.output, &out)?;
    let (lo, hi) = out
        .fields()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| {
            (lo.min(f.min()), hi.max(f.max()))
        });
    Ok(json!({ "records": out.len(), "clamped": clamp, "min": lo, "max": hi }))
}

fn reg_weights(flags: &RegFlags, cfg: &Config) -> Result<RegWeights> {
    let base = cfg.reg_weights.unwrap_or_default();
    let w = RegWeights {
        eta1: flags.eta1.unwrap_or(base.eta1),
        eta2: flags.eta2.unwrap_or(base.eta2),
        eta3: flags.eta3.unwrap_or(base.eta3),
        lambda_target: flags.lambda_target.unwrap_or(base.lambda_target),
    };
    w.validate()?;
    Ok(w)
}

pub fn regularize(a: &RegularizeArgs, cfg: &Config) -> Result<Value> {
    let lambda = read_stack(&a.lambda)?;
    let w = reg_weights(&a.weights, cfg)?;
    let mut records = Vec::with_capacity(lambda.len());
    for (i, d) in lambda.dates().iter().enumerate() {
        let r = regularizer(&LambdaMap::new(lambda.record(i).to_vec())?, &w)?;
        records.push(json!({
            "date": d.to_string(),
            "tv": r.tv,
            "entropy": r.entropy,
            "mean_balance": r.mean_balance,
            "l_reg": r.l_reg,
        }));
    }
    Ok(json!({ "weights": w, "records": records }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Scores {
    real: Vec<f64>,
    fake: Vec<f64>,
}

fn paired_dates(pred: &FieldStack, truth: &FieldStack) -> Result<Vec<(usize, usize)>> {
    let missing: Vec<NaiveDate> = pred
        .dates()
        .iter()
        .filter(|d| truth.index_of(**d).is_none())
        .copied()
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingDate(missing).into());
    }
    Ok(pred
        .dates()
        .iter()
        .enumerate()
        .map(|(i, d)| (i, truth.index_of(*d).expect("checked above")))
        .collect())
}

pub fn losses(a: &LossesArgs, cfg: &Config) -> Result<Value> {
    let pred = read_stack(&a.pred)?;
    let truth = read_stack(&a.truth)?;
    let pairs = paired_dates(&pred, &truth)?;
    if pairs.is_empty() {
        return Err(UsageError("--pred holds no records".into()).into());
    }
    let base = cfg.loss_weights.unwrap_or_default();
    let weights = LossWeights::new(
        a.alpha.unwrap_or(base.alpha),
        a.beta.unwrap_or(base.beta),
        a.gamma.unwrap_or(base.gamma),
        a.delta.unwrap_or(base.delta),
    )?;
    let warmup = a
        .warmup
        .or(cfg.gate.map(|g| g.warmup_steps))
        .ok_or_else(|| UsageError("--warmup is required (no default warm-up length)".into()))?;
    let every_n = a.every_n.or(cfg.gate.map(|g| g.every_n)).unwrap_or(5);
    let gate = GateSchedule::new(warmup, every_n)?;

    let per_record: Vec<(f64, f64)> = pairs
        .par_iter()
        .map(|&(i, j)| -> topofield::Result<(f64, f64)> {
            let (p, t) = (pred.field(i, 0), truth.field(j, 0));
            Ok((content_loss(p, t)?, topo_loss(t, p)?))
        })
        .collect::<topofield::Result<_>>()?;
    let n = per_record.len() as f64;
    let content = per_record.iter().map(|r| r.0).sum::<f64>() / n;
    let topo = per_record.iter().map(|r| r.1).sum::<f64>() / n;

    let (adv, d_loss) = match &a.scores {
        Some(path) => {
            let s: Scores = read_json(path)?;
            (hinge_g(&s.fake)?, Some(hinge_d(&s.real, &s.fake)?))
        }
        None => (0.0, None),
    };
    let reg = match &a.lambda {
        Some(path) => {
            let lambda = read_stack(path)?;
            let w = reg_weights(&a.reg, cfg)?;
            let mut total = 0.0;
            for i in 0..lambda.len() {
                total += regularizer(&LambdaMap::new(lambda.record(i).to_vec())?, &w)?.l_reg;
            }
            total / lambda.len().max(1) as f64
        }
        None => 0.0,
    };
    let report = composite_report(
        LossComponents {
            content,
            adv,
            reg,
            topo,
        },
        &weights,
        a.step,
        &gate,
    );
    let mut out = serde_json::to_value(report)?;
    out["hinge_d"] = json!(d_loss);
    out["weights"] = serde_json::to_value(weights)?;
    out["gate"] = serde_json::to_value(gate)?;
    out["records"] = pairs.len().into();
    Ok(out)
}

pub fn evaluate(a: &EvaluateArgs) -> Result<Value> {
    let pred = read_stack(&a.pred)?;
    let truth = read_stack(&a.truth)?;
    let clim = Climatology::from_stack(&read_stack(&a.clim)?);
    let stats = read_stats(&a.stats)?;
    let tau = a.tau.map(LeadTime::new).transpose()?.map(LeadTime::days);
    let dates: Vec<NaiveDate> = match a.date {
        Some(d) => vec![d],
        None => pred.dates().to_vec(),
    };
    let records: Vec<EvalRecord> = dates
        .par_iter()
        .map(|&d| -> Result<EvalRecord> {
            let c = climatology_forecast(&clim, d)?;
            Ok(metrics::evaluate(
                field_at(&pred, d)?,
                field_at(&truth, d)?,
                &c,
                &stats,
                d,
                tau,
            )?)
        })
        .collect::<Result<_>>()?;
    if let Some(path) = &a.output {
        write_json(path, &records)?;
    }
    if a.date.is_some() {
        return Ok(serde_json::to_value(&records[0])?);
    }
    Ok(json!({ "records": records }))
}

fn write_csv_rows(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Kelvin values of the season's dates, pooled over all cells.
fn pooled_kelvin(stack: &FieldStack, dates: &[NaiveDate], stats: &NormStats) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for &d in dates {
        out.extend(denormalize(field_at(stack, d)?, stats)?.into_values());
    }
    Ok(out)
}

/// Per-cell RMSE (kelvin) over `dates` and the per-cell mean λ over the same dates.
fn season_cell_fields(
    pred: &FieldStack,
    truth: &FieldStack,
    lambda: &FieldStack,
    stats: &NormStats,
    dates: &[NaiveDate],
) -> Result<(ScalarField, ScalarField)> {
    let (h, w) = (pred.height(), pred.width());
    let mut sq = vec![0.0; h * w];
    let mut lam = vec![0.0; h * w];
    for &d in dates {
        let p = denormalize(field_at(pred, d)?, stats)?;
        let t = denormalize(field_at(truth, d)?, stats)?;
        let l = &broadcast_record(lambda, d)?[0];
        l.require_same_shape(&p)?;
        for k in 0..h * w {
            sq[k] += (p.values()[k] - t.values()[k]).powi(2);
            lam[k] += l.values()[k];
        }
    }
    let n = dates.len() as f64;
    Ok((
        ScalarField::new(h, w, sq.into_iter().map(|s| (s / n).sqrt()).collect())?,
        ScalarField::new(h, w, lam.into_iter().map(|s| s / n).collect())?,
    ))
}

pub fn stratify(a: &StratifyArgs, cfg: &Config) -> Result<Value> {
    let records: Vec<EvalRecord> = read_json(&a.input)?;
    let bins = match (&a.bins, &cfg.bins) {
        (Some(s), _) => BinSpec::new(parse_bins(s)?)?,
        (None, Some(edges)) => BinSpec::new(edges.clone())?,
        (None, None) => BinSpec::default(),
    };
    let seasons = seasons_present(&records);
    let mut summaries = seasonal_summary(&records, &seasons)?;

    let mut season_dates: BTreeMap<Season, Vec<NaiveDate>> = BTreeMap::new();
    for r in &records {
        season_dates
            .entry(season_of(r.target_date))
            .or_default()
            .push(r.target_date);
    }
    for dates in season_dates.values_mut() {
        dates.sort_unstable();
        dates.dedup();
    }

    let fields = match (&a.pred, &a.truth, &a.stats) {
        (Some(p), Some(t), Some(s)) => Some((read_stack(p)?, read_stack(t)?, read_stats(s)?)),
        (None, None, None) => None,
        _ => return Err(UsageError("--pred, --truth and --stats go together".into()).into()),
    };
    let mut lambda_rows: Vec<StratRow> = Vec::new();
    if let Some((pred, truth, stats)) = &fields {
        for s in summaries.iter_mut() {
            let dates = &season_dates[&s.season];
            s.overlap = Some(kde_overlap(
                &pooled_kelvin(pred, dates, stats)?,
                &pooled_kelvin(truth, dates, stats)?,
            )?);
        }
        if let Some(path) = &a.lambda {
            let lambda = read_stack(path)?;
            for &season in &seasons {
                let (err, lam) = season_cell_fields(pred, truth, &lambda, stats, &season_dates[&season])?;
                let mut row = lambda_bin_analysis(&lam, &err, &bins)?;
                row.season = Some(season);
                lambda_rows.push(row);
            }
        }
    }
    let curves = lead_time_curves(&records);

    if let Some(dir) = &a.output {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let header: Vec<String> = ["season", "mean_rmse", "std", "acc", "overlap", "n"]
            .map(String::from)
            .into();
        let rows: Vec<Vec<String>> = summaries
            .iter()
            .map(|s| {
                vec![
                    s.season.to_string(),
                    s.mean_rmse.to_string(),
                    s.std_rmse.to_string(),
                    opt(s.mean_acc),
                    opt(s.overlap),
                    s.n.to_string(),
                ]
            })
            .collect();
        write_csv_rows(&dir.join("seasonal.csv"), &header, &rows)?;

        let header: Vec<String> = ["season", "tau", "mean_rmse", "n"].map(String::from).into();
        let rows: Vec<Vec<String>> = curves
            .iter()
            .map(|c| {
                vec![
                    c.season.to_string(),
                    c.tau.to_string(),
                    c.mean_rmse.to_string(),
                    c.n.to_string(),
                ]
            })
            .collect();
        write_csv_rows(&dir.join("lead_curves.csv"), &header, &rows)?;

        if !lambda_rows.is_empty() {
            let mut header = vec!["season".to_string()];
            header.extend(bins.labels());
            header.push("delta".into());
            let rows: Vec<Vec<String>> = lambda_rows
                .iter()
                .map(|r| {
                    let mut row = vec![r.season.map_or_else(String::new, |s| s.to_string())];
                    row.extend(r.medians.iter().map(|m| opt(*m)));
                    row.push(opt(r.delta));
                    row
                })
                .collect();
            write_csv_rows(&dir.join("lambda_bins.csv"), &header, &rows)?;
        }
    }

    Ok(json!({
        "bins": bins.labels(),
        "seasonal": summaries,
        "lead_curves": curves,
        "lambda_bins": lambda_rows,
    }))
}

pub fn synth(a: &SynthArgs) -> Result<Value> {
    let mut spec: ClimateSpec = read_json(&a.input)?;
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    let stack = generate_climate(&spec)?;
    write_stack(&a.output, &stack)?;
    Ok(json!({
        "records": stack.len(),
        "first_date": stack.dates()[0].to_string(),
        "last_date": stack.dates()[stack.len() - 1].to_string(),
        "height": stack.height(),
        "width": stack.width(),
        "seed": spec.seed,
    }))
}
