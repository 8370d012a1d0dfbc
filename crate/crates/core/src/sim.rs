//! Monte Carlo simulation of the observed queue.
//!
//! Two modes: the exponential-observer window (jump chain, no clocks
//! needed) and a fixed horizon (event-driven with exponential clocks).
//! Replications are reproducible and order-independent: replication `r`
//! always draws from stream `r` of a counter-mode generator seeded from the
//! run seed, so the result does not depend on worker count or scheduling.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::QueueParams;

const EVENT_CAP: u64 = 10_000_000;

/// What a single replication observes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimMode {
    /// Run until the observer's exponential clock rings; record the number
    /// left behind, transition count, arrivals, and departures.
    Observer,
    /// Run to a fixed time; record occupancy, departures, and transition
    /// count at the horizon.
    FixedT(f64),
}

/// Observables counted by the empirical law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Observable {
    LeftBehind,
    Transitions,
    Arrivals,
    Departures,
    Occupancy,
    DeparturesAt,
    TransitionsAt,
}

impl Observable {
    pub fn as_str(self) -> &'static str {
        match self {
            Observable::LeftBehind => "nu",
            Observable::Transitions => "kappa",
            Observable::Arrivals => "arrivals",
            Observable::Departures => "departures",
            Observable::Occupancy => "n_t",
            Observable::DeparturesAt => "d_t",
            Observable::TransitionsAt => "k_t",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub params: QueueParams,
    pub replications: u64,
    pub seed: u64,
    pub mode: SimMode,
}

/// Per-observable outcome counts over all replications.
#[derive(Debug, Clone)]
pub struct EmpiricalLaw {
    replications: u64,
    seed: u64,
    counts: BTreeMap<Observable, Vec<u64>>,
}

impl EmpiricalLaw {
    pub fn replications(&self) -> u64 {
        self.replications
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn observables(&self) -> impl Iterator<Item = Observable> + '_ {
        self.counts.keys().copied()
    }

    pub fn counts(&self, obs: Observable) -> Option<&[u64]> {
        self.counts.get(&obs).map(Vec::as_slice)
    }

    /// Relative frequencies for one observable.
    pub fn frequencies(&self, obs: Observable) -> Option<Vec<f64>> {
        let n = self.replications as f64;
        self.counts
            .get(&obs)
            .map(|c| c.iter().map(|&k| k as f64 / n).collect())
    }

    /// Binomial standard errors matching [`frequencies`](Self::frequencies).
    pub fn std_errors(&self, obs: Observable) -> Option<Vec<f64>> {
        let n = self.replications as f64;
        self.counts.get(&obs).map(|c| {
            c.iter()
                .map(|&k| {
                    let p = k as f64 / n;
                    (p * (1.0 - p) / n).sqrt()
                })
                .collect()
        })
    }

    /// Total variation distance between the empirical law of `obs` and a
    /// reference pmf (tail of the reference beyond the counted range is
    /// charged in full).
    pub fn tv_distance(&self, obs: Observable, reference: &[f64]) -> Option<f64> {
        let freq = self.frequencies(obs)?;
        let len = freq.len().max(reference.len());
        let mut tv = 0.0;
        for i in 0..len {
            let f = freq.get(i).copied().unwrap_or(0.0);
            let p = reference.get(i).copied().unwrap_or(0.0);
            tv += (f - p).abs();
        }
        Some(0.5 * tv)
    }

    fn merge(&mut self, other: EmpiricalLaw) {
        self.replications += other.replications;
        for (obs, counts) in other.counts {
            let slot = self.counts.entry(obs).or_default();
            if slot.len() < counts.len() {
                slot.resize(counts.len(), 0);
            }
            for (i, c) in counts.into_iter().enumerate() {
                slot[i] += c;
            }
        }
    }
}

/// Expected total variation between the empirical law of `n` samples and
/// its generating pmf, from the normal approximation of each cell:
/// `E|f_k - p_k| ~ sqrt(2 p_k (1-p_k) / (pi n))`.
pub fn expected_tv(pmf: &[f64], n: u64) -> f64 {
    let n = n as f64;
    0.5 * pmf
        .iter()
        .map(|&p| (2.0 * p * (1.0 - p) / (std::f64::consts::PI * n)).sqrt())
        .sum::<f64>()
}

/// Pathwise record of one observer-window replication.
pub struct ObserverOutcome {
    pub left_behind: u64,
    pub transitions: u64,
    pub arrivals: u64,
    pub departures: u64,
}

/// Replay replication `r` of an observer-window run and return its path
/// summary; uses the same stream scheme as [`simulate`].
pub fn observer_replication(params: &QueueParams, seed: u64, r: u64) -> Result<ObserverOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    run_observer(params, &mut rng)
}

/// One observer-window replication on the embedded jump chain. Event order
/// within the categorical draw is fixed: arrival, departure, observer exit.
fn run_observer(params: &QueueParams, rng: &mut ChaCha8Rng) -> Result<ObserverOutcome> {
    let mut n: u64 = 0;
    let mut arrivals: u64 = 0;
    let mut departures: u64 = 0;
    let mut transitions: u64 = 1; // counts chain steps + the final exit
    loop {
        if transitions > EVENT_CAP {
            return Err(Error::Runaway(EVENT_CAP));
        }
        let blocked = params.capacity.is_some_and(|c| n as usize >= c);
        let arr = if blocked { 0.0 } else { params.rho };
        let total = arr + n as f64 + params.sigma;
        let u: f64 = rng.gen::<f64>() * total;
        if u < arr {
            n += 1;
            arrivals += 1;
            transitions += 1;
        } else if u < arr + n as f64 {
            n -= 1;
            departures += 1;
            transitions += 1;
        } else {
            break;
        }
    }
    debug_assert_eq!(arrivals + departures, transitions - 1);
    debug_assert_eq!(arrivals - departures, n);
    Ok(ObserverOutcome {
        left_behind: n,
        transitions,
        arrivals,
        departures,
    })
}

struct FixedTOutcome {
    occupancy: u64,
    departures: u64,
    transitions: u64,
}

fn exp_draw(rng: &mut ChaCha8Rng, rate: f64) -> f64 {
    // Inverse CDF; 1 - u is in (0, 1].
    -(1.0 - rng.gen::<f64>()).ln() / rate
}

/// One fixed-horizon replication, event-driven with exponential clocks.
fn run_fixed_t(params: &QueueParams, t: f64, rng: &mut ChaCha8Rng) -> Result<FixedTOutcome> {
    let mut n: u64 = 0;
    let mut arrivals: u64 = 0;
    let mut departures: u64 = 0;
    let mut clock = 0.0f64;
    loop {
        if arrivals + departures > EVENT_CAP {
            return Err(Error::Runaway(EVENT_CAP));
        }
        let blocked = params.capacity.is_some_and(|c| n as usize >= c);
        let arr = if blocked { 0.0 } else { params.rho };
        let total = arr + n as f64;
        clock += exp_draw(rng, total);
        if clock > t {
            break;
        }
        let u: f64 = rng.gen::<f64>() * total;
        if u < arr {
            n += 1;
            arrivals += 1;
        } else {
            n -= 1;
            departures += 1;
        }
    }
    debug_assert_eq!(arrivals - departures, n);
    Ok(FixedTOutcome {
        occupancy: n,
        departures,
        transitions: arrivals + departures + 1,
    })
}

fn bump(counts: &mut BTreeMap<Observable, Vec<u64>>, obs: Observable, value: u64) {
    let slot = counts.entry(obs).or_default();
    let idx = value as usize;
    if slot.len() <= idx {
        slot.resize(idx + 1, 0);
    }
    slot[idx] += 1;
}

fn run_range(config: &SimConfig, lo: u64, hi: u64) -> Result<EmpiricalLaw> {
    let mut counts = BTreeMap::new();
    for r in lo..hi {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(r);
        match config.mode {
            SimMode::Observer => {
                let o = run_observer(&config.params, &mut rng)?;
                bump(&mut counts, Observable::LeftBehind, o.left_behind);
                bump(&mut counts, Observable::Transitions, o.transitions);
                bump(&mut counts, Observable::Arrivals, o.arrivals);
                bump(&mut counts, Observable::Departures, o.departures);
            }
            SimMode::FixedT(t) => {
                let o = run_fixed_t(&config.params, t, &mut rng)?;
                bump(&mut counts, Observable::Occupancy, o.occupancy);
                bump(&mut counts, Observable::DeparturesAt, o.departures);
                bump(&mut counts, Observable::TransitionsAt, o.transitions);
            }
        }
    }
    Ok(EmpiricalLaw {
        replications: hi - lo,
        seed: config.seed,
        counts,
    })
}

/// Run all replications, parallel over a thread pool sized by available
/// parallelism (override with `QSPECTRAL_THREADS`). Counts merge
/// commutatively, so the result is independent of the partition.
pub fn simulate(config: &SimConfig) -> Result<EmpiricalLaw> {
    if let SimMode::FixedT(t) = config.mode {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain(format!(
                "horizon must be finite and >= 0, got {t}"
            )));
        }
    }
    if config.replications == 0 {
        return Err(Error::domain("replications must be positive"));
    }
    let workers = std::env::var("QSPECTRAL_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map_or(1, |p| p.get())
        })
        .min(config.replications as usize)
        .max(1);
    if workers == 1 {
        return run_range(config, 0, config.replications);
    }
    let chunk = config.replications.div_ceil(workers as u64);
    let results: Vec<Result<EmpiricalLaw>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(config.replications);
                scope.spawn(move || run_range(config, lo, hi))
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut merged: Option<EmpiricalLaw> = None;
    for law in results {
        let law = law?;
        match merged.as_mut() {
            Some(m) => m.merge(law),
            None => merged = Some(law),
        }
    }
    Ok(merged.unwrap())
}
