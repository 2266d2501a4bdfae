//! The quantile-error sweep: sample a stream, feed the sketch, score it
//! against the recorded stream, one CSV row per (grid point, repetition).

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use ordsketch::bucketing::{Bucketing, GrowthPolicy};
use ordsketch::distributions::{SourceKind, SourceSpec};
use ordsketch::ord;
use ordsketch::quantile::{bucketing_error, RecordedStream};
use ordsketch::Ordinal;

use crate::config::{DistributionName, PolicyName, QuantileConfig};
use crate::{write_rows, HarnessError, SweepSummary};

/// One point of the parameter grid.
#[derive(Debug, Clone)]
pub struct QuantilePoint {
    pub policy: PolicyName,
    pub k: f64,
    pub n: usize,
    pub m: usize,
    pub distribution: DistributionName,
    pub samples: u64,
}

impl QuantilePoint {
    pub fn growth_policy(&self) -> GrowthPolicy {
        self.policy.build(self.k, self.n, self.m)
    }
}

/// Grid enumeration in declaration order: policies, ks, ns, ms,
/// distributions, sample counts.
pub fn expand_grid(cfg: &QuantileConfig) -> Vec<QuantilePoint> {
    let g = &cfg.grid;
    let mut points = Vec::with_capacity(cfg.grid_len());
    for policy in &g.policies {
        for k in &g.ks {
            for n in &g.ns {
                for m in &g.ms {
                    for distribution in &g.distributions {
                        for samples in &g.sample_counts {
                            points.push(QuantilePoint {
                                policy: *policy,
                                k: *k,
                                n: *n,
                                m: *m,
                                distribution: *distribution,
                                samples: *samples,
                            });
                        }
                    }
                }
            }
        }
    }
    points
}

/// Builds the sketch from one freshly sampled stream and measures E.
pub fn measure_error(policy: GrowthPolicy, kind: SourceKind, samples: u64, seed: u64) -> Result<f64, String> {
    let mut sampler = SourceSpec::new(kind, seed).sampler();
    let mut sketch: Bucketing<Ordinal> = Bucketing::new(policy);
    let mut stream: RecordedStream<Ordinal> = RecordedStream::default();
    for _ in 0..samples {
        let x = ord(sampler.next_value());
        sketch.add(x);
        stream.push(x);
    }
    bucketing_error(&stream, &sketch)
        .map(|report| report.e)
        .map_err(|e| e.to_string())
}

/// Mean E over `reps` repetitions with seeds `base_seed..`; runs that fail
/// (e.g. a degenerate single-bucket sketch) are dropped from the mean.
pub fn mean_error(
    policy: GrowthPolicy,
    kind: SourceKind,
    samples: u64,
    reps: u32,
    base_seed: u64,
) -> f64 {
    let values: Vec<f64> = (0..reps)
        .into_par_iter()
        .filter_map(|r| {
            measure_error(policy.clone(), kind, samples, base_seed.wrapping_add(r as u64)).ok()
        })
        .collect();
    values.iter().sum::<f64>() / values.len() as f64
}

/// Output path of the per-grid-point aggregate file: `<out>.mean.csv`
/// next to `<out>.csv`.
pub fn aggregate_path(out: &Path) -> PathBuf {
    let mut path = out.to_path_buf();
    match out.file_stem().and_then(|s| s.to_str()) {
        Some(stem) => path.set_file_name(format!("{stem}.mean.csv")),
        None => {
            path.set_extension("mean.csv");
        }
    }
    path
}

pub const RAW_HEADER: &str = "policy,k,n,m,distribution,t,seed,e,error";
pub const MEAN_HEADER: &str = "policy,k,n,m,distribution,t,mean_e,runs";

/// Runs the whole sweep and writes the raw and aggregate CSV files.
pub fn run_quantile_sweep(cfg: &QuantileConfig) -> Result<SweepSummary, HarnessError> {
    let errors = cfg.validate();
    if !errors.is_empty() {
        return Err(HarnessError::Config(errors));
    }
    let points = expand_grid(cfg);
    let reps = cfg.repetitions as u64;

    // One task per (grid point, repetition); rayon's indexed collect keeps
    // declaration order no matter how many workers run.
    let results: Vec<Result<f64, String>> = (0..points.len() as u64 * reps)
        .into_par_iter()
        .map(|run_index| {
            let point = &points[(run_index / reps) as usize];
            let seed = cfg.base_seed.wrapping_add(run_index);
            measure_error(point.growth_policy(), point.distribution.kind(), point.samples, seed)
        })
        .collect();

    let mut raw_rows = Vec::with_capacity(results.len());
    let mut mean_rows = Vec::with_capacity(points.len());
    let mut failures = 0usize;
    for (p_idx, point) in points.iter().enumerate() {
        let mut sum = 0.0;
        let mut ok = 0u32;
        for r in 0..reps {
            let run_index = p_idx as u64 * reps + r;
            let seed = cfg.base_seed.wrapping_add(run_index);
            let prefix = vec![
                point.policy.to_string(),
                point.k.to_string(),
                point.n.to_string(),
                point.m.to_string(),
                point.distribution.to_string(),
                point.samples.to_string(),
                seed.to_string(),
            ];
            match &results[run_index as usize] {
                Ok(e) => {
                    sum += e;
                    ok += 1;
                    raw_rows.push([prefix, vec![e.to_string(), String::new()]].concat());
                }
                Err(msg) => {
                    failures += 1;
                    raw_rows.push([prefix, vec![String::new(), msg.clone()]].concat());
                }
            }
        }
        let mean = if ok > 0 { (sum / ok as f64).to_string() } else { String::new() };
        mean_rows.push(vec![
            point.policy.to_string(),
            point.k.to_string(),
            point.n.to_string(),
            point.m.to_string(),
            point.distribution.to_string(),
            point.samples.to_string(),
            mean,
            ok.to_string(),
        ]);
    }

    write_rows(&cfg.out, RAW_HEADER, &raw_rows)?;
    let agg = aggregate_path(&cfg.out);
    write_rows(&agg, MEAN_HEADER, &mean_rows)?;

    Ok(SweepSummary {
        rows: raw_rows.len(),
        failures,
        out: cfg.out.clone(),
        aggregate_out: Some(agg),
    })
}
