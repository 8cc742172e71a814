//! Finite hidden-variable models with setting-dependent distributions and
//! their CHSH value under an induced product.
//!
//! The expectation for a setting pair is
//! `E(a, b) = sum_l rho(l | a, b) * (A(a, l) (*) B(b, l))`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithmetic::nn_mul;
use crate::bijection::BijectionSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MODEL_SCHEMA_VERSION: u32 = 1;
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Enumeration guard for [`brute_force_classical_bound`].
pub const MAX_ENUMERATED_LAMBDAS: usize = 8;

/// A measurement outcome, `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> i32 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn value<T: Scalar>(self) -> T {
        match self {
            Outcome::Plus => T::one(),
            Outcome::Minus => -T::one(),
        }
    }
}

impl TryFrom<i64> for Outcome {
    type Error = String;

    fn try_from(v: i64) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            other => Err(format!("outcome must be +1 or -1, got {other}")),
        }
    }
}

impl From<Outcome> for i64 {
    fn from(o: Outcome) -> i64 {
        o.sign() as i64
    }
}

/// The four settings of a CHSH experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub a: String,
    pub a_prime: String,
    pub b: String,
    pub b_prime: String,
}

impl Default for ChshSettings {
    fn default() -> Self {
        Self { a: "a".into(), a_prime: "a_prime".into(), b: "b".into(), b_prime: "b_prime".into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HiddenVariableModel<T> {
    lambdas: Vec<String>,
    outcomes_a: BTreeMap<String, Vec<Outcome>>,
    outcomes_b: BTreeMap<String, Vec<Outcome>>,
    rho: BTreeMap<(String, String), Vec<T>>,
    chsh: Option<ChshSettings>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RhoEntry {
    a: String,
    b: String,
    weights: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    schema_version: u32,
    lambdas: Vec<String>,
    #[serde(rename = "outcomes_A")]
    outcomes_a: BTreeMap<String, Vec<Outcome>>,
    #[serde(rename = "outcomes_B")]
    outcomes_b: BTreeMap<String, Vec<Outcome>>,
    rho: Vec<RhoEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chsh: Option<ChshSettings>,
}

impl<T: Scalar> HiddenVariableModel<T> {
    /// Outcome tables are indexed like `lambdas`; so is every weight vector.
    pub fn new(
        lambdas: Vec<String>,
        outcomes_a: BTreeMap<String, Vec<Outcome>>,
        outcomes_b: BTreeMap<String, Vec<Outcome>>,
        rho: BTreeMap<(String, String), Vec<T>>,
    ) -> Result<Self> {
        let n = lambdas.len();
        if n == 0 {
            return Err(Error::Model("no hidden variables".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(dup) = lambdas.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::Model(format!("duplicate lambda '{dup}'")));
        }
        for (side, table) in [("A", &outcomes_a), ("B", &outcomes_b)] {
            if table.is_empty() {
                return Err(Error::Model(format!("outcomes_{side} is empty")));
            }
            for (setting, row) in table {
                if row.len() != n {
                    return Err(Error::Model(format!(
                        "outcomes_{side}[{setting}] has {} entries for {n} lambdas",
                        row.len()
                    )));
                }
            }
        }
        if rho.is_empty() {
            return Err(Error::Model("rho has no setting pairs".into()));
        }
        for ((a, b), w) in &rho {
            if !outcomes_a.contains_key(a) || !outcomes_b.contains_key(b) {
                return Err(Error::Model(format!("rho({a}, {b}) names an unknown setting")));
            }
            if w.len() != n {
                return Err(Error::Model(format!("rho({a}, {b}) has {} weights for {n} lambdas", w.len())));
            }
            if let Some(bad) = w.iter().find(|v| !(**v >= T::zero()) || !v.is_finite()) {
                return Err(Error::Model(format!("rho({a}, {b}) has weight {bad}")));
            }
            let sum = w.iter().fold(T::zero(), |acc, &v| acc + v);
            if (sum - T::one()).abs() > T::lit(WEIGHT_SUM_TOL) {
                return Err(Error::Model(format!("rho({a}, {b}) sums to {sum}")));
            }
        }
        Ok(Self { lambdas, outcomes_a, outcomes_b, rho, chsh: None })
    }

    /// Parses the JSON model document (see `README.md` for the schema).
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Model(format!("model file: {e}")))?;
        if file.schema_version != MODEL_SCHEMA_VERSION {
            return Err(Error::Model(format!("unsupported schema_version {}", file.schema_version)));
        }
        let mut rho = BTreeMap::new();
        for entry in file.rho {
            let weights = entry
                .weights
                .iter()
                .map(|&w| T::from_f64(w).ok_or_else(|| Error::Model(format!("weight {w} not representable"))))
                .collect::<Result<Vec<T>>>()?;
            if rho.insert((entry.a.clone(), entry.b.clone()), weights).is_some() {
                return Err(Error::Model(format!("rho({}, {}) given twice", entry.a, entry.b)));
            }
        }
        let mut model = Self::new(file.lambdas, file.outcomes_a, file.outcomes_b, rho)?;
        if let Some(s) = file.chsh {
            model.check_settings(&s)?;
            model.chsh = Some(s);
        }
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        let file = ModelFile {
            schema_version: MODEL_SCHEMA_VERSION,
            lambdas: self.lambdas.clone(),
            outcomes_a: self.outcomes_a.clone(),
            outcomes_b: self.outcomes_b.clone(),
            rho: self
                .rho
                .iter()
                .map(|((a, b), w)| RhoEntry {
                    a: a.clone(),
                    b: b.clone(),
                    weights: w.iter().map(|v| v.as_f64()).collect(),
                })
                .collect(),
            chsh: self.chsh.clone(),
        };
        serde_json::to_string_pretty(&file).expect("model serializes")
    }

    pub fn with_chsh(mut self, settings: ChshSettings) -> Result<Self> {
        self.check_settings(&settings)?;
        self.chsh = Some(settings);
        Ok(self)
    }

    /// CHSH frame stored with the model, if any.
    pub fn chsh_settings(&self) -> Option<&ChshSettings> {
        self.chsh.as_ref()
    }

    pub fn lambdas(&self) -> &[String] {
        &self.lambdas
    }

    pub fn rho(&self) -> &BTreeMap<(String, String), Vec<T>> {
        &self.rho
    }

    fn check_settings(&self, s: &ChshSettings) -> Result<()> {
        for a in [&s.a, &s.a_prime] {
            if !self.outcomes_a.contains_key(a) {
                return Err(Error::Model(format!("unknown A setting '{a}'")));
            }
        }
        for b in [&s.b, &s.b_prime] {
            if !self.outcomes_b.contains_key(b) {
                return Err(Error::Model(format!("unknown B setting '{b}'")));
            }
        }
        Ok(())
    }
}

const DEMO_MODEL: &str = include_str!("../fixtures/chsh_setting_dependent.json");

/// The shipped measurement-dependent model: each setting pair puts all its
/// weight on a different hidden variable, so `S = 4`.
pub fn measurement_dependent_demo<T: Scalar>() -> HiddenVariableModel<T> {
    HiddenVariableModel::from_json(DEMO_MODEL).expect("shipped fixture is valid")
}

/// `sum_l rho(l | a, b) * (A(a, l) (*) B(b, l))`.
pub fn nn_expectation<T: Scalar>(model: &HiddenVariableModel<T>, a: &str, b: &str, f: &BijectionSpec<T>) -> Result<T> {
    let weights = model
        .rho
        .get(&(a.to_string(), b.to_string()))
        .ok_or_else(|| Error::Model(format!("no rho entry for ({a}, {b})")))?;
    let row_a = model.outcomes_a.get(a).ok_or_else(|| Error::Model(format!("unknown A setting '{a}'")))?;
    let row_b = model.outcomes_b.get(b).ok_or_else(|| Error::Model(format!("unknown B setting '{b}'")))?;
    let mut acc = T::zero();
    for ((&w, oa), ob) in weights.iter().zip(row_a).zip(row_b) {
        acc = acc + w * nn_mul(oa.value(), ob.value(), f)?;
    }
    Ok(acc)
}

/// `E(a,b) + E(a,b') + E(a',b) - E(a',b')`.
pub fn chsh<T: Scalar>(model: &HiddenVariableModel<T>, s: &ChshSettings, f: &BijectionSpec<T>) -> Result<T> {
    model.check_settings(s)?;
    Ok(nn_expectation(model, &s.a, &s.b, f)?
        + nn_expectation(model, &s.a, &s.b_prime, f)?
        + nn_expectation(model, &s.a_prime, &s.b, f)?
        - nn_expectation(model, &s.a_prime, &s.b_prime, f)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport<T> {
    /// Average of all `rho(a, b)`.
    pub pooled: Vec<T>,
    /// Total-variation distance of each pair from the pooled distribution.
    pub distances: Vec<((String, String), T)>,
    pub max_distance: T,
    /// Pair attaining `max_distance`.
    pub witness: (String, String),
    pub independent: bool,
}

fn total_variation<T: Scalar>(p: &[T], q: &[T]) -> T {
    p.iter().zip(q).fold(T::zero(), |acc, (&x, &y)| acc + (x - y).abs()) * T::lit(0.5)
}

/// Measures how far `rho` depends on the setting pair.
pub fn measurement_independence_audit<T: Scalar>(model: &HiddenVariableModel<T>, tol: T) -> IndependenceReport<T> {
    let n = model.lambdas.len();
    let pairs = T::from_usize(model.rho.len()).unwrap_or_else(T::nan);
    let mut pooled = vec![T::zero(); n];
    for w in model.rho.values() {
        for (p, &v) in pooled.iter_mut().zip(w) {
            *p = *p + v;
        }
    }
    for p in &mut pooled {
        *p = *p / pairs;
    }
    let distances: Vec<((String, String), T)> =
        model.rho.iter().map(|(k, w)| (k.clone(), total_variation(w, &pooled))).collect();
    let (witness, max_distance) = distances
        .iter()
        .fold(None::<(&(String, String), T)>, |best, (k, d)| match best {
            Some((_, bd)) if bd >= *d => best,
            _ => Some((k, *d)),
        })
        .map(|(k, d)| (k.clone(), d))
        .expect("validated model has at least one rho entry");
    IndependenceReport { pooled, independent: max_distance <= tol, distances, max_distance, witness }
}

/// CHSH value of one deterministic local strategy, bits `A(a), A(a'), B(b), B(b')`.
fn local_chsh(strategy: u8) -> i32 {
    let sign = |bit: u8| if strategy >> bit & 1 == 1 { -1 } else { 1 };
    let (a, a2, b, b2) = (sign(0), sign(1), sign(2), sign(3));
    a * b + a * b2 + a2 * b - a2 * b2
}

/// Largest `|S|` over every deterministic outcome assignment on
/// `n_lambda` hidden variables, with a setting-independent `rho`.
///
/// `S` is linear in `rho`, so the maximum over the simplex sits at its
/// vertices; each assignment is scored at every vertex. All
/// `16^n_lambda` assignments are enumerated.
pub fn brute_force_classical_bound<T: Scalar>(n_lambda: usize, settings: &ChshSettings) -> Result<T> {
    if n_lambda == 0 {
        return Err(Error::Param("n_lambda must be positive".into()));
    }
    if n_lambda > MAX_ENUMERATED_LAMBDAS {
        return Err(Error::Limit(format!(
            "n_lambda = {n_lambda} exceeds the enumeration guard of {MAX_ENUMERATED_LAMBDAS}"
        )));
    }
    if [&settings.a, &settings.a_prime, &settings.b, &settings.b_prime].iter().any(|s| s.is_empty()) {
        return Err(Error::Model("empty setting name".into()));
    }
    let table: [i32; 16] = std::array::from_fn(|k| local_chsh(k as u8));
    let total: u64 = 1u64 << (4 * n_lambda);
    let best = (0..total)
        .into_par_iter()
        .map(|assignment| (0..n_lambda).map(|l| table[(assignment >> (4 * l) & 0xF) as usize].abs()).max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    Ok(T::from_i32(best).unwrap_or_else(T::nan))
}
