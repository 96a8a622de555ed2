//! Monte Carlo trials, sweeps and their reports.
//!
//! Each trial draws its randomness from its own ChaCha stream selected by
//! `(seed, trial index)`, so sequential and parallel runs produce identical
//! records. Sampling compares one uniform draw per qubit against the error
//! probability, so for a fixed seed the error at a smaller `p` is contained
//! in the error at a larger `p`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::{syndrome_of, ErrorSupport, ResidualClass};
use crate::error::{Error, Result};
use crate::pipeline::{ColorCodeDecoder, DecodeFailure, DecodeStats};
use crate::toric::DecoderConfig;

/// Environment variable holding the worker count for parallel runs.
pub const WORKERS_ENV: &str = "COLORPROJ_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p_x: f64,
    pub p_z: f64,
    /// Depolarizing-style sampling: at most one of X, Y, Z per qubit, each
    /// with probability `p_x / 2`. Requires `p_x == p_z`.
    #[serde(default)]
    pub correlated: bool,
}

impl NoiseModel {
    pub fn new(p_x: f64, p_z: f64) -> Result<Self> {
        for p in [p_x, p_z] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidInput(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(Self {
            p_x,
            p_z,
            correlated: false,
        })
    }

    pub fn independent(p: f64) -> Result<Self> {
        Self::new(p, p)
    }

    /// Depolarizing noise of total strength `p`: `p_x = p_z = 2p/3`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        let m = Self::new(2.0 * p / 3.0, 2.0 * p / 3.0)?;
        if p > 1.0 {
            return Err(Error::InvalidInput(format!("depolarizing strength {p} above 1")));
        }
        Ok(Self { correlated: true, ..m })
    }

    /// Label used in aggregate rows.
    pub fn strength(&self) -> f64 {
        self.p_x.max(self.p_z)
    }

    pub fn sample(&self, num_qubits: usize, rng: &mut impl Rng) -> ErrorSupport {
        let mut e = ErrorSupport::identity(num_qubits);
        for q in 0..num_qubits {
            if self.correlated {
                let u: f64 = rng.random();
                let third = self.p_x / 2.0;
                if u < third {
                    e.x.set(q, true);
                } else if u < 2.0 * third {
                    e.z.set(q, true);
                } else if u < 3.0 * third {
                    e.x.set(q, true);
                    e.z.set(q, true);
                }
            } else {
                let (ux, uz): (f64, f64) = (rng.random(), rng.random());
                e.x.set(q, ux < self.p_x);
                e.z.set(q, uz < self.p_z);
            }
        }
        e
    }

    fn check(&self) -> Result<()> {
        if self.correlated && self.p_x != self.p_z {
            return Err(Error::InvalidInput("correlated sampling needs p_x == p_z".into()));
        }
        Self::new(self.p_x, self.p_z).map(|_| ())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub x_error: Vec<usize>,
    pub z_error: Vec<usize>,
    /// `None` when decoding failed.
    pub residual: Option<ResidualClass>,
    pub failure: Option<DecodeFailure>,
    pub stats: DecodeStats,
    /// Whether an independent recomputation agreed with `residual`.
    pub verified: bool,
    pub wall_time_ns: u64,
}

impl TrialRecord {
    pub fn is_logical(&self) -> bool {
        self.residual.is_some_and(ResidualClass::is_logical)
    }

    pub fn is_failure(&self) -> bool {
        self.failure.is_some()
    }

    /// Copy with the timing field cleared, for run-to-run comparison.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_time_ns: 0,
            ..self.clone()
        }
    }
}

/// Residual class recomputed from scratch: fresh syndromes from the
/// incidence lists and fresh eliminations for stabilizer membership.
fn reverify(decoder: &ColorCodeDecoder, actual: &ErrorSupport, estimate: &ErrorSupport) -> Result<ResidualClass> {
    let code = decoder.code();
    let d = code.dual();
    if syndrome_of(d, actual)? != syndrome_of(d, estimate)? {
        return Ok(ResidualClass::SyndromeMismatch);
    }
    let r = actual.mul(estimate);
    let st = code.stabilizers();
    let x_ok = st.sx.in_rowspace(&r.x)?;
    let z_ok = st.sz.in_rowspace(&r.z)?;
    Ok(match (x_ok, z_ok) {
        (true, true) => ResidualClass::Success,
        (false, true) => ResidualClass::LogicalX,
        (true, false) => ResidualClass::LogicalZ,
        (false, false) => ResidualClass::LogicalXZ,
    })
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_one(decoder: &ColorCodeDecoder, noise: &NoiseModel, seed: u64, trial: u64) -> TrialRecord {
    let start = Instant::now();
    let code = decoder.code();
    let error = noise.sample(code.num_qubits(), &mut trial_rng(seed, trial));
    let syndrome = code.syndrome_of(&error).expect("sampled error matches code size");
    let (decoded, stats) = decoder.decode_with_stats(&syndrome);
    let (residual, failure, verified) = match decoded {
        Ok(est) => {
            let class = code.residual_class(&error, &est).expect("estimate matches code size");
            let again = reverify(decoder, &error, &est).ok();
            let ok = again == Some(class) && class != ResidualClass::SyndromeMismatch;
            (Some(class), None, ok)
        }
        Err(f) => (None, Some(f), true),
    };
    TrialRecord {
        trial,
        seed,
        x_error: error.x.to_indices(),
        z_error: error.z.to_indices(),
        residual,
        failure,
        stats,
        verified,
        wall_time_ns: start.elapsed().as_nanos() as u64,
    }
}

/// Runs `n` independent trials. Output order is by trial index whatever the mode.
pub fn run_trials(decoder: &ColorCodeDecoder, noise: &NoiseModel, n: u64, seed: u64, mode: ExecMode) -> Result<Vec<TrialRecord>> {
    noise.check()?;
    let one = |t: u64| run_one(decoder, noise, seed, t);
    Ok(match mode {
        ExecMode::Sequential => (0..n).map(one).collect(),
        ExecMode::Parallel => parallel_map(n, one),
    })
}

#[cfg(feature = "parallel")]
fn parallel_map(n: u64, f: impl Fn(u64) -> TrialRecord + Sync + Send) -> Vec<TrialRecord> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map(n: u64, f: impl Fn(u64) -> TrialRecord) -> Vec<TrialRecord> {
    (0..n).map(f).collect()
}

/// Sizes the global worker pool from [`WORKERS_ENV`] if it is set. Returns
/// the configured count. Has no effect without the `parallel` feature.
pub fn configure_workers_from_env() -> Result<Option<usize>> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{WORKERS_ENV}={raw} is not a worker count")))?;
    if n == 0 {
        return Err(Error::InvalidInput(format!("{WORKERS_ENV} must be positive")));
    }
    #[cfg(feature = "parallel")]
    {
        // a second call keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(Some(n))
}

/// Wilson score interval for `k` hits out of `n` at normal quantile `z`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// 95% two-sided.
pub const WILSON_Z: f64 = 1.96;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p: f64,
    pub p_x: f64,
    pub p_z: f64,
    pub trials: u64,
    pub logical: u64,
    pub failed: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub verification_failures: u64,
    /// Failure counts keyed by tag.
    pub failure_modes: std::collections::BTreeMap<String, u64>,
}

impl SweepPoint {
    pub fn from_records(noise: &NoiseModel, records: &[TrialRecord]) -> Self {
        let trials = records.len() as u64;
        let logical = records.iter().filter(|r| r.is_logical()).count() as u64;
        let failed = records.iter().filter(|r| r.is_failure()).count() as u64;
        let mut failure_modes = std::collections::BTreeMap::new();
        for f in records.iter().filter_map(|r| r.failure.as_ref()) {
            *failure_modes.entry(f.tag().to_string()).or_insert(0) += 1;
        }
        let bad = logical + failed;
        let (ci_lo, ci_hi) = wilson_interval(bad, trials, WILSON_Z);
        Self {
            p: noise.strength(),
            p_x: noise.p_x,
            p_z: noise.p_z,
            trials,
            logical,
            failed,
            rate: if trials == 0 { 0.0 } else { bad as f64 / trials as f64 },
            ci_lo,
            ci_hi,
            verification_failures: records.iter().filter(|r| !r.verified).count() as u64,
            failure_modes,
        }
    }
}

pub const REPORT_FORMAT: &str = "colorproj-sweep";
pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub format: String,
    pub version: u32,
    pub lattice_size: Option<usize>,
    pub num_qubits: usize,
    pub config: DecoderConfig,
    pub seed: u64,
    pub points: Vec<SweepPoint>,
    /// Per-point trial records, parallel to `points`; empty when not kept.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<Vec<TrialRecord>>,
}

impl SweepReport {
    pub fn verification_failures(&self) -> u64 {
        self.points.iter().map(|p| p.verification_failures).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,trials,logical,failed,rate,ci_lo,ci_hi\n");
        for pt in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                pt.p, pt.trials, pt.logical, pt.failed, pt.rate, pt.ci_lo, pt.ci_hi
            ));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub trials: u64,
    pub seed: u64,
    pub mode: ExecMode,
    pub keep_records: bool,
    pub lattice_size: Option<usize>,
}

/// Runs every noise point with the same seed (coupled sampling across points).
pub fn sweep(decoder: &ColorCodeDecoder, noise: &[NoiseModel], opts: &SweepOptions) -> Result<SweepReport> {
    let mut points = Vec::with_capacity(noise.len());
    let mut records = Vec::new();
    for m in noise {
        let recs = run_trials(decoder, m, opts.trials, opts.seed, opts.mode)?;
        points.push(SweepPoint::from_records(m, &recs));
        if opts.keep_records {
            records.push(recs);
        }
    }
    Ok(SweepReport {
        format: REPORT_FORMAT.into(),
        version: REPORT_VERSION,
        lattice_size: opts.lattice_size,
        num_qubits: decoder.code().num_qubits(),
        config: *decoder.config(),
        seed: opts.seed,
        points,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::build_bcc_colex;
    use crate::gf2::Gf2Vector;

    fn decoder() -> ColorCodeDecoder {
        ColorCodeDecoder::new(&build_bcc_colex(2).unwrap(), DecoderConfig::default()).unwrap()
    }

    #[test]
    fn wilson_reference_values() {
        // k=0: upper bound z²/(n+z²)
        let (lo, hi) = wilson_interval(0, 100, WILSON_Z);
        assert_eq!(lo, 0.0);
        assert!((hi - 3.8416 / 103.8416).abs() < 1e-12);
        let (lo, hi) = wilson_interval(50, 100, WILSON_Z);
        assert!((lo - 0.403_829_828_6).abs() < 1e-9 && (hi - 0.596_170_171_4).abs() < 1e-9);
        assert_eq!(wilson_interval(0, 0, WILSON_Z), (0.0, 1.0));
    }

    #[test]
    fn noiseless_trials_succeed() {
        let d = decoder();
        let recs = run_trials(&d, &NoiseModel::independent(0.0).unwrap(), 20, 7, ExecMode::Sequential).unwrap();
        assert!(recs.iter().all(|r| r.residual == Some(ResidualClass::Success) && r.x_error.is_empty()));
    }

    #[test]
    fn all_ones_x_is_a_stabilizer() {
        let d = decoder();
        let noise = NoiseModel::new(1.0, 0.0).unwrap();
        let recs = run_trials(&d, &noise, 2, 1, ExecMode::Sequential).unwrap();
        let n = d.code().num_qubits();
        assert!(d.code().stabilizers().sx.in_rowspace(&Gf2Vector::ones(n)).unwrap());
        for r in recs {
            assert_eq!(r.x_error.len(), n);
            assert_eq!(r.residual, Some(ResidualClass::Success));
        }
    }

    #[test]
    fn seeded_runs_repeat_and_modes_agree() {
        let d = decoder();
        let noise = NoiseModel::independent(0.02).unwrap();
        let strip = |v: Vec<TrialRecord>| v.iter().map(TrialRecord::without_timing).collect::<Vec<_>>();
        let a = strip(run_trials(&d, &noise, 40, 99, ExecMode::Sequential).unwrap());
        let b = strip(run_trials(&d, &noise, 40, 99, ExecMode::Sequential).unwrap());
        let c = strip(run_trials(&d, &noise, 40, 99, ExecMode::Parallel).unwrap());
        assert_eq!(a, b);
        assert_eq!(a, c);
        let other = strip(run_trials(&d, &noise, 40, 100, ExecMode::Sequential).unwrap());
        assert_ne!(a, other);
    }

    #[test]
    fn coupled_sampling_is_monotone() {
        let lo = NoiseModel::independent(0.01).unwrap();
        let hi = NoiseModel::independent(0.2).unwrap();
        for t in 0..50 {
            let a = lo.sample(96, &mut trial_rng(5, t));
            let b = hi.sample(96, &mut trial_rng(5, t));
            assert!(a.x.iter_ones().all(|q| b.x.get(q)));
            assert!(a.z.iter_ones().all(|q| b.z.get(q)));
        }
    }

    #[test]
    fn noise_validation() {
        assert!(NoiseModel::new(-0.1, 0.0).is_err());
        assert!(NoiseModel::new(0.0, 1.5).is_err());
        let bad = NoiseModel {
            p_x: 0.1,
            p_z: 0.2,
            correlated: true,
        };
        assert!(run_trials(&decoder(), &bad, 1, 0, ExecMode::Sequential).is_err());
        let dep = NoiseModel::depolarizing(0.3).unwrap();
        assert!((dep.p_x - 0.2).abs() < 1e-12 && dep.correlated);
    }

    #[test]
    fn depolarizing_marginals() {
        let dep = NoiseModel::depolarizing(0.3).unwrap();
        let mut rng = trial_rng(11, 0);
        let (mut x, mut z, mut y) = (0, 0, 0);
        let n = 20_000;
        for _ in 0..n / 100 {
            let e = dep.sample(100, &mut rng);
            x += e.x.weight();
            z += e.z.weight();
            y += e.x.and(&e.z).weight();
        }
        let f = |k: usize| k as f64 / n as f64;
        assert!((f(x) - 0.2).abs() < 0.02 && (f(z) - 0.2).abs() < 0.02 && (f(y) - 0.1).abs() < 0.015);
    }

    #[test]
    fn sweep_shapes() {
        let d = decoder();
        let opts = SweepOptions {
            trials: 10,
            seed: 3,
            mode: ExecMode::Parallel,
            keep_records: true,
            lattice_size: Some(2),
        };
        let empty = sweep(&d, &[], &opts).unwrap();
        assert!(empty.points.is_empty());
        let r = sweep(&d, &[NoiseModel::independent(0.0).unwrap()], &opts).unwrap();
        assert_eq!((r.points[0].logical, r.points[0].failed, r.points[0].rate), (0, 0, 0.0));
        assert_eq!(r.records[0].len(), 10);
        assert_eq!(r.to_csv().lines().next().unwrap(), "p,trials,logical,failed,rate,ci_lo,ci_hi");
    }
}
