//! Probe battery: each probe checks one property of a bijection and reports a
//! pass, fail or undefined finding with the values that reproduce it.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{cauchy_residual, nn_add};
use crate::bijection::{BijectionSpec, Interval};
use crate::calculus::{identity_derivative_check, Convergence, StepPlan, CONVERGENCE_TOL};
use crate::error::Error;
use crate::physics::{entropy_domain_check, ProbabilityDistribution};
use crate::scalar::Scalar;

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 20_240_901;
pub const DEFAULT_CLOSURE_SAMPLES: usize = 10_000;
pub const DEFAULT_CAUCHY_SAMPLES: usize = 10_000;
pub const DEFAULT_ENTROPY_DISTRIBUTIONS: usize = 200;
pub const DEFAULT_CAUCHY_TOL: f64 = 1e-12;
pub const ROUNDTRIP_TOL: f64 = 1e-10;
pub const GRID_POINTS: usize = 19;
/// Always-checked closure pair.
pub const CLOSURE_WITNESS: (f64, f64) = (0.9, 0.9);
/// Entropy distributions have between these many outcomes (inclusive).
pub const ENTROPY_SIZES: (usize, usize) = (2, 8);

/// Cauchy samples live on this dyadic lattice, so sums of sample points are
/// exact and the residual reflects the map rather than rounding.
const LATTICE_BITS: i32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Undefined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Undefined => "undefined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditFinding {
    pub probe: String,
    pub verdict: Verdict,
    pub witness: Option<Vec<(String, f64)>>,
    pub residual: Option<f64>,
    pub notes: String,
}

impl AuditFinding {
    fn new(probe: &str, verdict: Verdict, witness: Vec<(String, f64)>, residual: Option<f64>, notes: String) -> Self {
        // Non-finite values have no JSON spelling; they are described in the notes instead.
        let witness: Vec<(String, f64)> = witness.into_iter().filter(|(_, v)| v.is_finite()).collect();
        Self {
            probe: probe.to_string(),
            verdict,
            witness: (!witness.is_empty()).then_some(witness),
            residual: residual.filter(|r| r.is_finite()),
            notes,
        }
    }

    /// Looks up a witness value by label.
    pub fn witness_value(&self, label: &str) -> Option<f64> {
        self.witness.as_ref()?.iter().find(|(l, _)| l == label).map(|&(_, v)| v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub schema_version: u32,
    pub bijection: String,
    pub seed: u64,
    pub sample_counts: BTreeMap<String, usize>,
    pub findings: Vec<AuditFinding>,
}

impl AuditReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn finding(&self, probe: &str) -> Option<&AuditFinding> {
        self.findings.iter().find(|f| f.probe == probe)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditConfig<T> {
    pub seed: u64,
    pub closure_samples: usize,
    /// Region whose closure under `(+)` is probed.
    pub closure_domain: Interval<T>,
    pub cauchy_samples: usize,
    pub cauchy_tol: T,
    pub entropy_distributions: usize,
    pub plan: StepPlan<T>,
    /// Points for the differentiability and round-trip probes.
    /// `None` uses [`default_grid`].
    pub grid: Option<Vec<T>>,
}

impl<T: Scalar> Default for AuditConfig<T> {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            closure_samples: DEFAULT_CLOSURE_SAMPLES,
            closure_domain: Interval::symmetric_unit(),
            cauchy_samples: DEFAULT_CAUCHY_SAMPLES,
            cauchy_tol: T::lit(DEFAULT_CAUCHY_TOL),
            entropy_distributions: DEFAULT_ENTROPY_DISTRIBUTIONS,
            plan: StepPlan::default(),
            grid: None,
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for probe number `index`, drawn from its own stream of `seed`.
pub fn probe_seed(seed: u64, index: u64) -> u64 {
    let mut r = rng(seed);
    r.set_stream(index + 1);
    r.next_u64()
}

fn pair(a: f64, b: f64) -> Vec<(String, f64)> {
    vec![("a".into(), a), ("b".into(), b)]
}

/// `f.domain` intersected with `[-1, 1]`, the region the sampling probes use.
fn sampling_box<T: Scalar>(f: &BijectionSpec<T>) -> Option<Interval<T>> {
    f.domain().intersect(&Interval::symmetric_unit())
}

/// Evenly spaced interior points of `f.domain` intersected with `[-1, 1]`.
pub fn default_grid<T: Scalar>(f: &BijectionSpec<T>) -> Vec<T> {
    let Some(b) = sampling_box(f) else { return Vec::new() };
    let n = T::lit((GRID_POINTS + 1) as f64);
    (1..=GRID_POINTS)
        .map(|k| {
            let k = T::lit(k as f64);
            (b.lo() * (n - k) + b.hi() * k) / n
        })
        .collect()
}

/// Checks whether `a (+) b` stays in `domain` on seeded uniform pairs.
///
/// `(0.9, 0.9)` is checked first whenever it lies in `domain`, then the
/// corners `(lo, lo)` and `(hi, hi)` when they belong to `domain`.
pub fn closure_probe<T: Scalar>(f: &BijectionSpec<T>, domain: &Interval<T>, samples: usize, seed: u64) -> AuditFinding {
    const PROBE: &str = "closure";
    if !f.domain().contains_interval(domain) {
        return AuditFinding::new(
            PROBE,
            Verdict::Undefined,
            vec![("domain_lo".into(), domain.lo().as_f64()), ("domain_hi".into(), domain.hi().as_f64())],
            None,
            format!("{domain} is not inside the domain {} of {f}", f.domain()),
        );
    }
    if !domain.lo().is_finite() || !domain.hi().is_finite() {
        return AuditFinding::new(
            PROBE,
            Verdict::Undefined,
            Vec::new(),
            Some(f64::INFINITY),
            format!("cannot sample uniformly from unbounded {domain}"),
        );
    }
    let mut pairs: Vec<(T, T)> = Vec::with_capacity(samples + 3);
    let (wa, wb) = (T::lit(CLOSURE_WITNESS.0), T::lit(CLOSURE_WITNESS.1));
    if domain.contains(wa) && domain.contains(wb) {
        pairs.push((wa, wb));
    }
    for corner in [domain.lo(), domain.hi()] {
        if domain.contains(corner) {
            pairs.push((corner, corner));
        }
    }
    let mut r = rng(seed);
    let (lo, hi) = (domain.lo().as_f64(), domain.hi().as_f64());
    let target = pairs.len() + samples;
    while pairs.len() < target {
        let a = T::lit(r.gen_range(lo..=hi));
        let b = T::lit(r.gen_range(lo..=hi));
        if domain.contains(a) && domain.contains(b) {
            pairs.push((a, b));
        }
    }
    for &(a, b) in &pairs {
        match nn_add(a, b, f) {
            Ok(v) if domain.contains(v) => {}
            Ok(v) => {
                let mut w = pair(a.as_f64(), b.as_f64());
                w.push(("sum".into(), v.as_f64()));
                return AuditFinding::new(PROBE, Verdict::Fail, w, None, format!("{a} (+) {b} = {v} leaves {domain}"));
            }
            Err(Error::Closure { image, codomain, .. }) => {
                let mut w = pair(a.as_f64(), b.as_f64());
                w.push(("image".into(), image));
                return AuditFinding::new(
                    PROBE,
                    Verdict::Fail,
                    w,
                    None,
                    format!(
                        "f({a}) + f({b}) = {image} is outside the codomain {codomain}, so {a} (+) {b} has no value"
                    ),
                );
            }
            Err(e) => {
                return AuditFinding::new(PROBE, Verdict::Undefined, pair(a.as_f64(), b.as_f64()), None, e.to_string());
            }
        }
    }
    AuditFinding::new(PROBE, Verdict::Pass, Vec::new(), None, format!("{} pairs stay in {domain}", pairs.len()))
}

/// Largest `|f(x + y) - f(x) - f(y)|` over seeded lattice pairs.
///
/// Pairs come from `f.domain` intersected with `[-1, 1]`, halved until
/// sums stay inside the domain where `f` is finite, and always include the
/// box corners.
pub fn cauchy_probe<T: Scalar>(f: &BijectionSpec<T>, samples: usize, seed: u64, tol: T) -> AuditFinding {
    const PROBE: &str = "cauchy";
    let Some(mut bx) = sampling_box(f) else {
        return AuditFinding::new(
            PROBE,
            Verdict::Undefined,
            Vec::new(),
            Some(f64::INFINITY),
            format!("{} misses [-1, 1]", f.domain()),
        );
    };
    let domain = f.domain();
    for _ in 0..8 {
        let sums = Interval::new(bx.lo() + bx.lo(), bx.hi() + bx.hi(), bx.open_lo(), bx.open_hi());
        let finite_at = |s: T| !domain.contains(s) || f.forward(s).is_ok_and(|v| v.is_finite());
        if sums.is_ok_and(|s| domain.contains_interval(&s) && finite_at(s.lo()) && finite_at(s.hi())) {
            break;
        }
        let half = T::lit(0.5);
        match Interval::new(bx.lo() * half, bx.hi() * half, bx.open_lo(), bx.open_hi())
            .ok()
            .and_then(|h| h.intersect(&domain))
        {
            Some(h) => bx = h,
            None => break,
        }
    }
    let scale = 2f64.powi(LATTICE_BITS);
    let mut k_lo = (bx.lo().as_f64() * scale).ceil() as i64;
    let mut k_hi = (bx.hi().as_f64() * scale).floor() as i64;
    let at = |k: i64| T::lit(k as f64 / scale);
    if !bx.contains(at(k_lo)) {
        k_lo += 1;
    }
    if !bx.contains(at(k_hi)) {
        k_hi -= 1;
    }
    if k_lo > k_hi {
        return AuditFinding::new(
            PROBE,
            Verdict::Undefined,
            Vec::new(),
            Some(f64::INFINITY),
            format!("sampling box {bx} is empty"),
        );
    }
    let mut pairs = vec![(at(k_hi), at(k_hi)), (at(k_lo), at(k_lo))];
    let mut r = rng(seed);
    pairs.extend((0..samples).map(|_| (at(r.gen_range(k_lo..=k_hi)), at(r.gen_range(k_lo..=k_hi)))));
    let mut worst = (T::zero(), pairs[0]);
    for &(x, y) in &pairs {
        match cauchy_residual(f, x, y) {
            Ok(res) if res.is_nan() => {
                return AuditFinding::new(
                    PROBE,
                    Verdict::Undefined,
                    pair(x.as_f64(), y.as_f64()),
                    None,
                    "residual is NaN".into(),
                );
            }
            Ok(res) => {
                if res > worst.0 {
                    worst = (res, (x, y));
                }
            }
            Err(e) => {
                return AuditFinding::new(PROBE, Verdict::Undefined, pair(x.as_f64(), y.as_f64()), None, e.to_string());
            }
        }
    }
    let (res, (x, y)) = worst;
    let verdict = if res <= tol { Verdict::Pass } else { Verdict::Fail };
    AuditFinding::new(
        PROBE,
        verdict,
        pair(x.as_f64(), y.as_f64()),
        Some(res.as_f64()),
        format!("max residual {res} over {} pairs in {bx}, tolerance {:e}", pairs.len(), tol.as_f64()),
    )
}

/// Seeded uniform draws from the simplex, sizes in [`ENTROPY_SIZES`].
pub fn random_distributions<T: Scalar>(n: usize, seed: u64) -> Vec<ProbabilityDistribution<T>> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let size = r.gen_range(ENTROPY_SIZES.0..=ENTROPY_SIZES.1);
            ProbabilityDistribution::random(&mut r, size)
        })
        .collect()
}

/// Generalized entropy on seeded random distributions of 2 to 8 outcomes.
pub fn entropy_probe<T: Scalar>(f: &BijectionSpec<T>, n_dists: usize, seed: u64) -> AuditFinding {
    const PROBE: &str = "entropy";
    let dists = random_distributions::<T>(n_dists, seed);
    let report = entropy_domain_check(f, &dists);
    match report.verdicts.iter().position(|v| !v.defined) {
        None => AuditFinding::new(
            PROBE,
            Verdict::Pass,
            Vec::new(),
            None,
            format!("defined on {}/{} distributions", report.defined, dists.len()),
        ),
        Some(i) => {
            let v = &report.verdicts[i];
            let mut w: Vec<(String, f64)> =
                dists[i].probabilities().iter().enumerate().map(|(k, p)| (format!("p{k}"), p.as_f64())).collect();
            w.push(("argument".into(), v.argument.as_f64()));
            let stage = v.stage.map(|s| s.to_string()).unwrap_or_default();
            AuditFinding::new(
                PROBE,
                Verdict::Fail,
                w,
                None,
                format!(
                    "undefined on {}/{} distributions; first at index {i}, {stage} argument {}",
                    report.undefined,
                    dists.len(),
                    v.argument
                ),
            )
        }
    }
}

/// The claim `Df_X/Dx = 1` at every grid point.
pub fn differentiability_probe<T: Scalar>(f: &BijectionSpec<T>, grid: &[T], plan: &StepPlan<T>) -> AuditFinding {
    const PROBE: &str = "differentiability";
    let report = match identity_derivative_check(f, grid, plan) {
        Ok(r) => r,
        Err(e) => return AuditFinding::new(PROBE, Verdict::Undefined, Vec::new(), Some(f64::INFINITY), e.to_string()),
    };
    let tol = T::lit(CONVERGENCE_TOL);
    let residual = report.max_deviation.map(|d| d.as_f64());
    if report.passes(tol) {
        return AuditFinding::new(
            PROBE,
            Verdict::Pass,
            Vec::new(),
            residual,
            format!("{}/{} points converge to 1", report.converged, grid.len()),
        );
    }
    let mut witness = Vec::new();
    let mut classes = Vec::new();
    for p in &report.points {
        let c = p.estimate.classification;
        let off = p.deviation.is_some_and(|d| !(d < tol));
        if c != Convergence::Converged || off {
            witness.push(("x".to_string(), p.x.as_f64()));
            classes.push(format!("x={}: {c}", p.x));
        }
    }
    let verdict = if grid.is_empty() { Verdict::Undefined } else { Verdict::Fail };
    AuditFinding::new(
        PROBE,
        verdict,
        witness,
        residual.or(Some(f64::INFINITY)),
        format!("{}/{} converged; {}", report.converged, grid.len(), classes.join(", ")),
    )
}

/// `inverse(forward(x)) = x` on `grid`, within [`ROUNDTRIP_TOL`].
pub fn roundtrip_probe<T: Scalar>(f: &BijectionSpec<T>, grid: &[T]) -> AuditFinding {
    const PROBE: &str = "roundtrip";
    let mut worst: Option<(T, T)> = None;
    for &x in grid {
        match f.forward(x).and_then(|y| f.inverse(y)) {
            Ok(back) => {
                let res = (back - x).abs();
                if worst.is_none_or(|(_, w)| res > w) {
                    worst = Some((x, res));
                }
            }
            Err(e) => {
                return AuditFinding::new(
                    PROBE,
                    Verdict::Undefined,
                    vec![("x".into(), x.as_f64())],
                    None,
                    e.to_string(),
                )
            }
        }
    }
    let Some((x, res)) = worst else {
        return AuditFinding::new(PROBE, Verdict::Undefined, Vec::new(), Some(f64::INFINITY), "empty grid".into());
    };
    let verdict = if res < T::lit(ROUNDTRIP_TOL) { Verdict::Pass } else { Verdict::Fail };
    let back = f.forward(x).and_then(|y| f.inverse(y)).map(|v| v.as_f64()).unwrap_or(f64::NAN);
    AuditFinding::new(
        PROBE,
        verdict,
        vec![("x".into(), x.as_f64()), ("inverse_forward_x".into(), back)],
        Some(res.as_f64()),
        format!("max |inverse(forward(x)) - x| over {} points", grid.len()),
    )
}

/// Probe names in report order.
pub const PROBES: [&str; 5] = ["closure", "cauchy", "entropy", "differentiability", "roundtrip"];

/// Runs every probe. Probes run in parallel; the report lists them in
/// [`PROBES`] order and depends only on `(f, config)`.
pub fn run_battery<T: Scalar>(f: &BijectionSpec<T>, config: &AuditConfig<T>) -> AuditReport {
    let grid = config.grid.clone().unwrap_or_else(|| default_grid(f));
    let findings: Vec<AuditFinding> = (0..PROBES.len())
        .into_par_iter()
        .map(|i| {
            let seed = probe_seed(config.seed, i as u64);
            match i {
                0 => closure_probe(f, &config.closure_domain, config.closure_samples, seed),
                1 => cauchy_probe(f, config.cauchy_samples, seed, config.cauchy_tol),
                2 => entropy_probe(f, config.entropy_distributions, seed),
                3 => differentiability_probe(f, &grid, &config.plan),
                _ => roundtrip_probe(f, &grid),
            }
        })
        .collect();
    let sample_counts = BTreeMap::from([
        ("closure".to_string(), config.closure_samples),
        ("cauchy".to_string(), config.cauchy_samples),
        ("entropy".to_string(), config.entropy_distributions),
        ("grid".to_string(), grid.len()),
    ]);
    AuditReport {
        schema_version: REPORT_SCHEMA_VERSION,
        bijection: f.to_string(),
        seed: config.seed,
        sample_counts,
        findings,
    }
}
