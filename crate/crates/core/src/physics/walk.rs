//! Continuous-time interchange process on a Schreier graph: from each
//! snippet, the neighbours across generator `k` are reached at rate `α_k`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::SchreierGraph;
use crate::spectral::{full_eigensystem, DEFAULT_DENSE_CAP};
use crate::{Error, Result};

/// Trajectories per work item; fixed so results do not depend on the
/// thread count.
const CHUNK: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct WalkConfig {
    pub duration: f64,
    pub trajectories: usize,
    pub seed: u64,
    pub start: usize,
    /// Jumps per trajectory before it is frozen; `None` is unlimited.
    pub max_events: Option<u64>,
    /// Number of autocorrelation lags after zero.
    pub lags: usize,
    /// Last lag time; `None` means `min(duration, 4/λ₂)`.
    pub lag_horizon: Option<f64>,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            duration: 10.0,
            trajectories: 10_000,
            seed: 0,
            start: 0,
            max_events: None,
            lags: 40,
            lag_horizon: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JumpCount {
    pub from: usize,
    pub to: usize,
    pub count: u64,
}

/// Maximum-likelihood jump rate `count / holding time` with its standard
/// error, next to the generator entry it estimates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateEstimate {
    pub from: usize,
    pub to: usize,
    pub rate: f64,
    pub standard_error: f64,
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkStats {
    pub trajectories: usize,
    pub duration: f64,
    pub start: usize,
    pub events: u64,
    /// Fraction of total time spent in each snippet; the start state when no
    /// time elapsed.
    pub occupancy: Vec<f64>,
    pub final_histogram: Vec<u64>,
    pub lag_times: Vec<f64>,
    /// Mean of `f(X_t)/f(X_0)`, with `f` the projection of the start state
    /// onto the `λ₂` eigenspace.
    pub autocorrelation: Vec<f64>,
    pub autocorrelation_se: Vec<f64>,
    /// Fitted decay rate of the autocorrelation; estimates `λ₂`.
    pub relaxation_rate: Option<f64>,
    pub relaxation_rate_se: Option<f64>,
    pub reference_gap: Option<f64>,
    /// Fitted decay rate of the coset-sign autocorrelation.
    pub sign_decay_rate: Option<f64>,
    pub jumps: Vec<JumpCount>,
    pub holding_time: Vec<f64>,
}

impl WalkStats {
    /// Total variation distance of the occupancy from uniform.
    pub fn occupancy_tv_from_uniform(&self) -> f64 {
        let u = 1.0 / self.occupancy.len() as f64;
        0.5 * self.occupancy.iter().map(|p| (p - u).abs()).sum::<f64>()
    }

    /// Observed jump rates for every edge direction with at least one jump.
    pub fn empirical_rates(&self, g: &SchreierGraph) -> Vec<RateEstimate> {
        let lap = g.laplacian();
        self.jumps
            .iter()
            .filter(|j| self.holding_time[j.from] > 0.0)
            .map(|j| {
                let t = self.holding_time[j.from];
                RateEstimate {
                    from: j.from,
                    to: j.to,
                    rate: j.count as f64 / t,
                    standard_error: (j.count as f64).sqrt() / t,
                    expected: -lap.get(j.from, j.to),
                }
            })
            .collect()
    }
}

struct Accumulator {
    time: Vec<f64>,
    finals: Vec<u64>,
    events: u64,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    sign_sum: Vec<f64>,
    sign_sum_sq: Vec<f64>,
    jumps: BTreeMap<(usize, usize), u64>,
}

impl Accumulator {
    fn new(vertices: usize, lags: usize) -> Self {
        Accumulator {
            time: vec![0.0; vertices],
            finals: vec![0; vertices],
            events: 0,
            sum: vec![0.0; lags],
            sum_sq: vec![0.0; lags],
            sign_sum: vec![0.0; lags],
            sign_sum_sq: vec![0.0; lags],
            jumps: BTreeMap::new(),
        }
    }

    fn merge(mut self, other: Accumulator) -> Self {
        let add = |a: &mut Vec<f64>, b: &[f64]| a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        add(&mut self.time, &other.time);
        add(&mut self.sum, &other.sum);
        add(&mut self.sum_sq, &other.sum_sq);
        add(&mut self.sign_sum, &other.sign_sum);
        add(&mut self.sign_sum_sq, &other.sign_sum_sq);
        self.finals.iter_mut().zip(&other.finals).for_each(|(x, y)| *x += y);
        self.events += other.events;
        for (k, v) in other.jumps {
            *self.jumps.entry(k).or_insert(0) += v;
        }
        self
    }
}

/// Simulates `cfg.trajectories` independent walks from `cfg.start`.
/// Trajectory `i` draws from its own ChaCha stream `i` under `cfg.seed`,
/// and chunk results are merged in order, so the output is reproducible
/// regardless of thread count.
pub fn interchange_walk(g: &SchreierGraph, cfg: &WalkConfig) -> Result<WalkStats> {
    let n = g.vertex_count();
    if !(cfg.duration.is_finite() && cfg.duration >= 0.0) {
        return Err(Error::OutOfRange(format!("walk duration {} must be finite and >= 0", cfg.duration)));
    }
    if cfg.trajectories == 0 {
        return Err(Error::OutOfRange("walk needs at least one trajectory".into()));
    }
    if cfg.start >= n {
        return Err(Error::OutOfRange(format!("start vertex {} on {n} vertices", cfg.start)));
    }
    if n > DEFAULT_DENSE_CAP {
        return Err(Error::CapExceeded {
            what: "walk graph dimension",
            value: n as u128,
            cap: DEFAULT_DENSE_CAP as u128,
        });
    }

    let w = g.weights();
    let mut out: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (u, v, k) in g.edges() {
        out[u].push((v, w.alpha(k)));
        out[v].push((u, w.alpha(k)));
    }
    let rates: Vec<f64> = out.iter().map(|o| o.iter().map(|e| e.1).sum()).collect();

    let (observable, gap) = fiedler_observable(g, cfg.start)?;
    let signs: Vec<f64> = g.space().signs().iter().map(|&s| f64::from(s)).collect();
    let horizon = cfg
        .lag_horizon
        .unwrap_or_else(|| gap.map_or(cfg.duration, |l| cfg.duration.min(4.0 / l)))
        .min(cfg.duration);
    let lags = cfg.lags.max(1);
    let lag_times: Vec<f64> = (0..=lags).map(|j| horizon * j as f64 / lags as f64).collect();

    let chunks: Vec<(usize, usize)> = (0..cfg.trajectories)
        .step_by(CHUNK)
        .map(|lo| (lo, (lo + CHUNK).min(cfg.trajectories)))
        .collect();
    let partials: Vec<Accumulator> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut acc = Accumulator::new(n, lag_times.len());
            for index in lo..hi {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(index as u64);
                run_trajectory(&mut rng, cfg, &out, &rates, &lag_times, &observable, &signs, &mut acc);
            }
            acc
        })
        .collect();
    let acc = partials
        .into_iter()
        .reduce(Accumulator::merge)
        .expect("at least one chunk");

    let m = cfg.trajectories as f64;
    let total_time: f64 = acc.time.iter().sum();
    let occupancy = if total_time > 0.0 {
        acc.time.iter().map(|t| t / total_time).collect()
    } else {
        let mut o = vec![0.0; n];
        o[cfg.start] = 1.0;
        o
    };
    let mean_se = |sum: &[f64], sum_sq: &[f64]| -> (Vec<f64>, Vec<f64>) {
        sum.iter()
            .zip(sum_sq)
            .map(|(s, q)| {
                let mean = s / m;
                let var = if m > 1.0 { ((q / m - mean * mean) * m / (m - 1.0)).max(0.0) } else { 0.0 };
                (mean, (var / m).sqrt())
            })
            .unzip()
    };
    let (autocorrelation, autocorrelation_se) = mean_se(&acc.sum, &acc.sum_sq);
    let (sign_mean, sign_se) = mean_se(&acc.sign_sum, &acc.sign_sum_sq);
    let fit = gap.and_then(|_| fit_decay(&lag_times, &autocorrelation, &autocorrelation_se));
    let sign_fit = if n > 1 { fit_decay(&lag_times, &sign_mean, &sign_se) } else { None };

    Ok(WalkStats {
        trajectories: cfg.trajectories,
        duration: cfg.duration,
        start: cfg.start,
        events: acc.events,
        occupancy,
        final_histogram: acc.finals,
        lag_times,
        autocorrelation,
        autocorrelation_se,
        relaxation_rate: fit.map(|f| f.0),
        relaxation_rate_se: fit.map(|f| f.1),
        reference_gap: gap,
        sign_decay_rate: sign_fit.map(|f| f.0),
        jumps: acc
            .jumps
            .into_iter()
            .map(|((from, to), count)| JumpCount { from, to, count })
            .collect(),
        holding_time: acc.time,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_trajectory(
    rng: &mut ChaCha8Rng,
    cfg: &WalkConfig,
    out: &[Vec<(usize, f64)>],
    rates: &[f64],
    lag_times: &[f64],
    observable: &[f64],
    signs: &[f64],
    acc: &mut Accumulator,
) {
    let mut state = cfg.start;
    let mut t = 0.0;
    let mut events = 0u64;
    let mut next_lag = 0;
    let f0 = observable[state];
    let s0 = signs[state];
    let record = |state: usize, upto: f64, next_lag: &mut usize, acc: &mut Accumulator| {
        while *next_lag < lag_times.len() && lag_times[*next_lag] < upto {
            let ratio = if f0 != 0.0 { observable[state] / f0 } else { 0.0 };
            let sign = signs[state] * s0;
            acc.sum[*next_lag] += ratio;
            acc.sum_sq[*next_lag] += ratio * ratio;
            acc.sign_sum[*next_lag] += sign;
            acc.sign_sum_sq[*next_lag] += sign * sign;
            *next_lag += 1;
        }
    };
    loop {
        let frozen = rates[state] == 0.0 || cfg.max_events.is_some_and(|cap| events >= cap);
        let hold = if frozen {
            f64::INFINITY
        } else {
            // Exp(rate) by inversion; 1 - u keeps the argument in (0, 1]
            -(1.0 - rng.gen::<f64>()).ln() / rates[state]
        };
        let leave = t + hold;
        if leave >= cfg.duration {
            acc.time[state] += cfg.duration - t;
            // lags at exactly `duration` still see the final state
            record(state, f64::INFINITY, &mut next_lag, acc);
            acc.finals[state] += 1;
            acc.events += events;
            return;
        }
        acc.time[state] += hold;
        record(state, leave, &mut next_lag, acc);
        let mut u = rng.gen::<f64>() * rates[state];
        let mut target = out[state].last().expect("positive rate has an edge").0;
        for &(v, a) in &out[state] {
            if u < a {
                target = v;
                break;
            }
            u -= a;
        }
        *acc.jumps.entry((state, target)).or_insert(0) += 1;
        events += 1;
        state = target;
        t = leave;
    }
}

/// Projection of the start indicator onto the `λ₂` eigenspace, and `λ₂`.
/// Single-vertex and disconnected graphs have no gap and get a zero
/// observable.
fn fiedler_observable(g: &SchreierGraph, start: usize) -> Result<(Vec<f64>, Option<f64>)> {
    let n = g.vertex_count();
    if n < 2 {
        return Ok((vec![0.0; n], None));
    }
    let (spectrum, vecs) = full_eigensystem(g)?;
    let tol = spectrum.tolerance();
    let values = spectrum.values();
    let lambda2 = values[1];
    if lambda2 <= tol {
        return Ok((vec![0.0; n], None));
    }
    let mut f = vec![0.0; n];
    for (c, &v) in values.iter().enumerate() {
        if (v - lambda2).abs() <= tol {
            let coef = vecs[(start, c)];
            for (i, fi) in f.iter_mut().enumerate() {
                *fi += coef * vecs[(i, c)];
            }
        }
    }
    Ok((f, Some(lambda2)))
}

/// Weighted least squares of `ln C(t)` on `t` over the leading run of
/// positive lags where `C > 3·SE`; returns `(rate, standard error)`.
fn fit_decay(t: &[f64], c: &[f64], se: &[f64]) -> Option<(f64, f64)> {
    let (mut sw, mut swt, mut swtt, mut swy, mut swty) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut points = 0;
    for i in 1..t.len() {
        if !(se[i] > 0.0 && c[i] > 3.0 * se[i]) {
            break;
        }
        let weight = (c[i] / se[i]).powi(2);
        let y = c[i].ln();
        sw += weight;
        swt += weight * t[i];
        swtt += weight * t[i] * t[i];
        swy += weight * y;
        swty += weight * t[i] * y;
        points += 1;
    }
    if points < 2 {
        return None;
    }
    let det = sw * swtt - swt * swt;
    if det <= 0.0 {
        return None;
    }
    let slope = (sw * swty - swt * swy) / det;
    Some((-slope, (sw / det).sqrt()))
}
