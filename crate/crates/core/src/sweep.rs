//! Monte Carlo sweeps over physical error rates.
//!
//! Shot `i` of point `k` draws from a ChaCha8 stream keyed by `(seed, k, i)`,
//! so results do not depend on thread count or scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circuit_file;
use crate::error::{Error, Result};
use crate::noise::{NoiseParams, SwapNoise};
use crate::protocol::{Decoder, Policy, Protocol, ProtocolConfig, ProtocolKind, ShotRecord};
use crate::sim::Engine;
use crate::stats::{CurvePoint, Estimate};

/// Shots handed to one task.
const BLOCK: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("format must be csv or json, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub protocol: ProtocolKind,
    pub ps: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    pub policy: Policy,
    pub decoder: Decoder,
    pub swap_noise: SwapNoise,
    pub engine: Engine,
    /// Verified preparation overriding the shipped one.
    pub circuit: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl SweepConfig {
    pub fn new(protocol: ProtocolKind, policy: Policy, ps: Vec<f64>, shots: u64, seed: u64) -> Self {
        SweepConfig {
            protocol,
            ps,
            shots,
            seed,
            policy,
            decoder: Decoder::default(),
            swap_noise: SwapNoise::default(),
            engine: Engine::default(),
            circuit: None,
            out: None,
            format: Format::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        if self.ps.is_empty() {
            return Err(Error::Config("no physical error rates given".into()));
        }
        if let Some(p) = self.ps.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::Config(format!("p = {p} is outside (0, 1]")));
        }
        if self.ps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("p values must be strictly ascending".into()));
        }
        Ok(())
    }

    pub fn protocol_config(&self) -> Result<ProtocolConfig> {
        let mut c = ProtocolConfig::new(self.protocol, self.policy).decoder(self.decoder).swap(self.swap_noise).engine(self.engine);
        if let Some(path) = &self.circuit {
            c.gotorl = Some(circuit_file::load(path)?);
        }
        Ok(c)
    }

    /// Canonical `key=value` text; also the input of the config hash.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let ps: Vec<String> = self.ps.iter().map(|p| format!("{p:e}")).collect();
        writeln!(s, "protocol={}", self.protocol).unwrap();
        writeln!(s, "plist={}", ps.join(",")).unwrap();
        writeln!(s, "shots={}", self.shots).unwrap();
        writeln!(s, "seed={}", self.seed).unwrap();
        writeln!(s, "policy={}", self.policy).unwrap();
        writeln!(s, "decoder={}", self.decoder).unwrap();
        writeln!(s, "swap-noise={}", self.swap_noise).unwrap();
        writeln!(s, "engine={}", self.engine).unwrap();
        if let Some(c) = &self.circuit {
            writeln!(s, "circuit={}", c.display()).unwrap();
        }
        s
    }

    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_key_values().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Reads `key=value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

/// `n` log-spaced points from `pmin` to `pmax` inclusive.
pub fn log_grid(pmin: f64, pmax: f64, n: usize) -> Result<Vec<f64>> {
    if !(pmin > 0.0 && pmax >= pmin && n >= 1) || (n == 1 && pmin != pmax) {
        return Err(Error::Config(format!("bad grid pmin={pmin} pmax={pmax} points={n}")));
    }
    if n == 1 {
        return Ok(vec![pmin]);
    }
    let (a, b) = (pmin.ln(), pmax.ln());
    Ok((0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect())
}

pub fn parse_plist(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad p value {t:?}")))).collect()
}

/// Aggregated counts at one error rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counts {
    pub shots: u64,
    pub accepted: u64,
    pub fail_estimated: u64,
    pub fail_true: u64,
}

impl Counts {
    pub fn add(&mut self, r: &ShotRecord) {
        self.shots += 1;
        if r.accepted {
            self.accepted += 1;
            self.fail_estimated += r.fail_estimated as u64;
            self.fail_true += r.fail_true as u64;
        }
    }

    pub fn merge(mut self, o: Counts) -> Counts {
        self.shots += o.shots;
        self.accepted += o.accepted;
        self.fail_estimated += o.fail_estimated;
        self.fail_true += o.fail_true;
        self
    }
}

/// One output row; field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub p: f64,
    pub shots: u64,
    pub accepted: u64,
    pub fail_estimated: u64,
    pub fail_true: u64,
    pub rate_estimated: f64,
    pub rate_true: f64,
    pub acceptance: f64,
    /// Binomial standard error of `rate_estimated`.
    pub sigma: f64,
    pub ci95_lo: f64,
    pub ci95_hi: f64,
}

impl PointResult {
    pub fn from_counts(p: f64, c: Counts) -> Self {
        let est = Estimate::binomial(c.fail_estimated, c.accepted);
        let tru = Estimate::binomial(c.fail_true, c.accepted);
        PointResult {
            p,
            shots: c.shots,
            accepted: c.accepted,
            fail_estimated: c.fail_estimated,
            fail_true: c.fail_true,
            rate_estimated: est.rate,
            rate_true: tru.rate,
            acceptance: c.accepted as f64 / c.shots as f64,
            sigma: est.sigma,
            ci95_lo: est.ci95.0,
            ci95_hi: est.ci95.1,
        }
    }

    pub fn estimated(&self) -> Estimate {
        Estimate::binomial(self.fail_estimated, self.accepted)
    }

    pub fn true_rate(&self) -> Estimate {
        Estimate::binomial(self.fail_true, self.accepted)
    }

    pub fn acceptance_estimate(&self) -> Estimate {
        Estimate::binomial(self.accepted, self.shots)
    }

    pub fn curve_point(&self) -> CurvePoint {
        CurvePoint { p: self.p, rate: self.rate_estimated, sigma: self.sigma, ci95: (self.ci95_lo, self.ci95_hi) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub config: SweepConfig,
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub metadata: Metadata,
    pub points: Vec<PointResult>,
}

impl SweepResult {
    pub fn curve(&self) -> Vec<CurvePoint> {
        self.points.iter().map(PointResult::curve_point).collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for p in &self.points {
            w.serialize(p).map_err(|e| Error::Config(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// RNG of shot `shot` at point `point`.
pub fn shot_rng(seed: u64, point: u64, shot: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&point.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(shot);
    rng
}

/// Folds every shot of one point through `fold`, block by block. Blocks run
/// in parallel with the `parallel` feature and are combined in block order,
/// so the result does not depend on the thread count.
#[allow(clippy::too_many_arguments)]
pub fn fold_shots<T, F>(protocol: &Protocol, params: NoiseParams, shots: u64, seed: u64, point: u64, init: T, fold: F, combine: fn(T, T) -> T) -> T
where
    T: Clone + Send + Sync,
    F: Fn(&mut T, &ShotRecord) + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let blocks = shots.div_ceil(BLOCK);
        let parts: Vec<T> = (0..blocks).into_par_iter().map(|b| fold_block(protocol, params, shots, seed, point, b, &init, &fold)).collect();
        parts.into_iter().fold(init, combine)
    }
    #[cfg(not(feature = "parallel"))]
    fold_shots_sequential(protocol, params, shots, seed, point, init, fold, combine)
}

/// Single-threaded [`fold_shots`] with the same blocking and result.
#[allow(clippy::too_many_arguments)]
pub fn fold_shots_sequential<T, F>(protocol: &Protocol, params: NoiseParams, shots: u64, seed: u64, point: u64, init: T, fold: F, combine: fn(T, T) -> T) -> T
where
    T: Clone,
    F: Fn(&mut T, &ShotRecord),
{
    let blocks = shots.div_ceil(BLOCK);
    let parts: Vec<T> = (0..blocks).map(|b| fold_block(protocol, params, shots, seed, point, b, &init, &fold)).collect();
    parts.into_iter().fold(init, combine)
}

#[allow(clippy::too_many_arguments)]
fn fold_block<T: Clone, F: Fn(&mut T, &ShotRecord)>(
    protocol: &Protocol,
    params: NoiseParams,
    shots: u64,
    seed: u64,
    point: u64,
    b: u64,
    init: &T,
    fold: &F,
) -> T {
    let mut acc = init.clone();
    for i in b * BLOCK..((b + 1) * BLOCK).min(shots) {
        let r = protocol.run_shot(params, &mut shot_rng(seed, point, i));
        fold(&mut acc, &r);
    }
    acc
}

/// Counts for one point.
pub fn run_point(protocol: &Protocol, p: f64, shots: u64, seed: u64, point: u64) -> Result<Counts> {
    let params = NoiseParams::new(p)?;
    Ok(fold_shots(protocol, params, shots, seed, point, Counts::default(), |c, r| c.add(r), Counts::merge))
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let protocol = Protocol::new(config.protocol_config()?)?;
    let points = config
        .ps
        .iter()
        .enumerate()
        .map(|(k, &p)| run_point(&protocol, p, config.shots, config.seed, k as u64).map(|c| PointResult::from_counts(p, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        metadata: Metadata { config: config.clone(), config_hash: config.hash(), seed: config.seed, version: env!("CARGO_PKG_VERSION").into() },
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = log_grid(1e-4, 1e-2, 3).unwrap();
        assert!((g[1] - 1e-3).abs() < 1e-15 && (g[2] - 1e-2).abs() < 1e-15);
        assert!(log_grid(1e-2, 1e-4, 3).is_err());
        assert_eq!(parse_plist("0.01, 0.02").unwrap(), vec![0.01, 0.02]);
    }

    #[test]
    fn key_values() {
        let m = parse_key_values("# x\nprotocol = enc-fb\nswap_noise=atomic\n").unwrap();
        assert_eq!(m["protocol"], "enc-fb");
        assert_eq!(m["swap-noise"], "atomic");
        assert!(parse_key_values("oops\n").is_err());
    }

    #[test]
    fn config_errors() {
        let mut c = SweepConfig::new(ProtocolKind::EncFb, Policy::Trivial, vec![0.01], 0, 1);
        assert!(c.validate().is_err());
        c.shots = 10;
        c.ps = vec![0.02, 0.01];
        assert!(c.validate().is_err());
        c.ps = vec![0.0];
        assert!(c.validate().is_err());
    }

    #[test]
    fn csv_header_order() {
        let c = SweepConfig::new(ProtocolKind::EncFb, Policy::Trivial, vec![0.01], 50, 3);
        let r = run_sweep(&c).unwrap();
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().next().unwrap(), "p,shots,accepted,fail_estimated,fail_true,rate_estimated,rate_true,acceptance,sigma,ci95_lo,ci95_hi");
        assert_eq!(run_sweep(&c).unwrap().to_csv().unwrap(), csv);
    }
}
