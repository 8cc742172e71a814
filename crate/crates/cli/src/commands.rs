use std::fmt::Write as _;

use nncalc::audit::{self, AuditReport};
use nncalc::bell::HiddenVariableModel;
use nncalc::bijection::cantor_value_ratio;
use nncalc::calculus::Differencing;
use nncalc::{
    cantor_generalized_inverse, cantor_value, cauchy_residual, chsh, cosmo_bijection_ratio, einstein_compose,
    entropy_domain_check, harmonic_average_speed, identity_derivative_check, lcdm_scale_factor,
    measurement_independence_audit, neutral_elements, nn_add, nn_derivative, nn_div, nn_entropy, nn_expectation,
    nn_mul, nn_sub, quasi_arithmetic_mean, roundtrip_residual, velocity_compose, Bijection, ChshSettings,
    CosmologyParams, Distribution, FunctionSpec, Plan,
};
use serde_json::{json, Value};

use crate::cli::*;
use crate::number::parse_ratio;
use crate::output::{num, opt_num, CliError, Csv, Output};

type Outcome = Result<Output, CliError>;

fn bijection(text: &str) -> Result<Bijection, CliError> {
    Ok(text.parse::<Bijection>()?)
}

fn need(value: Option<f64>, flag: &str, op: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for {op}")))
}

pub fn eval(args: &EvalArgs) -> Outcome {
    let f = bijection(&args.f)?;
    let op = format!("{:?}", args.op).to_lowercase();
    let (human, json) = match args.op {
        Op::Forward | Op::Inverse => {
            let a = need(args.a, "a", &op)?;
            let v = if args.op == Op::Forward { f.forward(a)? } else { f.inverse(a)? };
            (format!("{v}"), json!({ "a": num(a), "result": num(v) }))
        }
        Op::Add | Op::Sub | Op::Mul | Op::Div | Op::Cauchy => {
            let a = need(args.a, "a", &op)?;
            let b = need(args.b, "b", &op)?;
            let v = match args.op {
                Op::Add => nn_add(a, b, &f)?,
                Op::Sub => nn_sub(a, b, &f)?,
                Op::Mul => nn_mul(a, b, &f)?,
                Op::Div => nn_div(a, b, &f)?,
                _ => cauchy_residual(&f, a, b)?,
            };
            (format!("{v}"), json!({ "a": num(a), "b": num(b), "result": num(v) }))
        }
        Op::Neutrals => {
            let (zero, one) = neutral_elements(&f)?;
            (
                format!("additive neutral       {zero}\nmultiplicative neutral {one}"),
                json!({ "additive": num(zero), "multiplicative": num(one) }),
            )
        }
        Op::Roundtrip => {
            let grid = args.grid.clone().map(|g| g.0).unwrap_or_else(|| audit::default_grid(&f));
            let r = roundtrip_residual(&f, &grid)?;
            (format!("{r}"), json!({ "points": grid.len(), "result": num(r) }))
        }
    };
    let mut json = json;
    json["bijection"] = json!(f.to_string());
    json["op"] = json!(op);
    Ok(Output::new("eval", human, json))
}

fn plan(steps: &StepArgs) -> Result<Plan, CliError> {
    let d = Plan::default();
    let p = Plan::new(
        steps.h_max.unwrap_or(d.h_max),
        steps.h_min.unwrap_or(d.h_min),
        steps.ratio.unwrap_or(d.ratio),
        !steps.no_richardson,
    )?;
    Ok(p)
}

pub fn derive(args: &DeriveArgs) -> Outcome {
    let fx = bijection(&args.fx)?;
    let plan = plan(&args.steps)?;
    if args.identity_check {
        let grid = args.grid.clone().map(|g| g.0).unwrap_or_else(|| audit::default_grid(&fx));
        let report = identity_derivative_check(&fx, &grid, &plan)?;
        let mut human = format!("{:>8}  {:<16}  {:>20}\n", "x", "classification", "estimate");
        let mut csv = Csv::new(&["x", "classification", "estimate", "deviation", "slope"]);
        let mut points = Vec::new();
        for p in &report.points {
            let est = p.estimate.value.map_or("-".to_string(), |v| v.to_string());
            let _ = writeln!(human, "{:>8}  {:<16}  {:>20}", p.x, p.estimate.classification, est);
            csv.row([
                p.x.to_string(),
                p.estimate.classification.to_string(),
                p.estimate.value.map_or(String::new(), |v| v.to_string()),
                p.deviation.map_or(String::new(), |v| v.to_string()),
                p.slope.to_string(),
            ]);
            points.push(json!({
                "x": num(p.x),
                "classification": p.estimate.classification.to_string(),
                "estimate": opt_num(p.estimate.value),
                "deviation": opt_num(p.deviation),
                "slope": p.slope.to_string(),
            }));
        }
        let passes = report.passes(nncalc::calculus::CONVERGENCE_TOL);
        let _ = write!(
            human,
            "converged {}/{}; max deviation {}; {}",
            report.converged,
            report.points.len(),
            report.max_deviation.map_or("-".to_string(), |d| format!("{d:e}")),
            if passes { "pass" } else { "fail" }
        );
        let json = json!({
            "bijection": fx.to_string(),
            "points": points,
            "converged": report.converged,
            "max_deviation": opt_num(report.max_deviation),
            "pass": passes,
        });
        return Ok(Output::new("derive", human, json).with_csv(csv.finish()));
    }
    let x = need(args.x, "x", "derive")?;
    let fy = bijection(&args.fy)?;
    let func: FunctionSpec<f64> = args.func.parse()?;
    let est = nn_derivative(|t| func.eval(t), x, &fx, &fy, &plan)?;
    let mut csv = Csv::new(&["h", "quotient"]);
    for &(h, q) in &est.quotient_trace {
        csv.row([h.to_string(), q.map_or(String::new(), |q| q.to_string())]);
    }
    let differencing = match est.differencing {
        Differencing::Central => "central",
        Differencing::Forward => "forward",
    };
    let human = format!(
        "{}\nclassification {}\ndifferencing   {differencing}",
        est.value.map_or("undefined".to_string(), |v| v.to_string()),
        est.classification
    );
    let json = json!({
        "fx": fx.to_string(),
        "fy": fy.to_string(),
        "func": func.to_string(),
        "x": num(x),
        "value": opt_num(est.value),
        "limit": opt_num(est.limit),
        "classification": est.classification.to_string(),
        "differencing": differencing,
        "failed_at": opt_num(est.failed_at),
        "trace": est.quotient_trace.iter().map(|&(h, q)| json!({ "h": num(h), "quotient": opt_num(q) })).collect::<Vec<_>>(),
    });
    Ok(Output::new("derive", human, json).with_csv(csv.finish()))
}

pub fn velocity(args: &VelocityArgs) -> Outcome {
    let f = bijection(&args.f)?;
    let c = velocity_compose(args.b1, args.b2, &f)?;
    let einstein = einstein_compose(args.b1, args.b2).ok();
    let mut human = format!("{}", c.value);
    if c.superluminal {
        human.push_str("  SUPERLUMINAL (|beta| > 1)");
    }
    if let Some(e) = einstein {
        let _ = write!(human, "\neinstein {e}");
    }
    let json = json!({
        "bijection": f.to_string(),
        "b1": num(args.b1),
        "b2": num(args.b2),
        "value": num(c.value),
        "superluminal": c.superluminal,
        "einstein": opt_num(einstein),
    });
    Ok(Output::new("velocity", human, json))
}

pub fn entropy(args: &EntropyArgs) -> Outcome {
    let f = bijection(&args.f)?;
    if let Some(dist) = &args.dist {
        let dist = &dist.0;
        let d = Distribution::new(dist.clone())?;
        let s = nn_entropy(&d, &f)?;
        let json = json!({
            "bijection": f.to_string(),
            "dist": dist.iter().map(|&p| num(p)).collect::<Vec<_>>(),
            "entropy": num(s),
            "shannon": num(d.shannon_entropy()),
        });
        return Ok(Output::new("entropy", format!("{s}"), json));
    }
    let n = args.random.unwrap_or(0);
    let dists: Vec<Distribution> = audit::random_distributions(n, args.seed);
    let report = entropy_domain_check(&f, &dists);
    let mut csv = Csv::new(&["index", "size", "defined", "stage", "argument", "entropy"]);
    let mut rows = Vec::new();
    for (i, (v, d)) in report.verdicts.iter().zip(&dists).enumerate() {
        let stage = v.stage.map(|s| s.to_string());
        csv.row([
            i.to_string(),
            d.len().to_string(),
            v.defined.to_string(),
            stage.clone().unwrap_or_default(),
            v.argument.to_string(),
            v.entropy.map_or(String::new(), |e| e.to_string()),
        ]);
        rows.push(json!({
            "size": d.len(),
            "defined": v.defined,
            "stage": stage,
            "argument": num(v.argument),
            "entropy": opt_num(v.entropy),
        }));
    }
    let human = format!("defined {}/{n}, undefined {}/{n}", report.defined, report.undefined);
    let json = json!({
        "bijection": f.to_string(),
        "seed": args.seed,
        "defined": report.defined,
        "undefined": report.undefined,
        "verdicts": rows,
    });
    Ok(Output::new("entropy", human, json).with_csv(csv.finish()))
}

pub fn mean(args: &MeanArgs) -> Outcome {
    if let Some(speeds) = &args.average_speed {
        let [v1, v2] = speeds.0[..] else {
            return Err(CliError::Usage("--average-speed takes exactly two speeds".into()));
        };
        let v = harmonic_average_speed(v1, v2)?;
        let json = json!({ "speeds": [num(v1), num(v2)], "average_speed": num(v) });
        return Ok(Output::new("mean", format!("{v}"), json));
    }
    let f = bijection(&args.f)?;
    let values = args.values.clone().map(|v| v.0).unwrap_or_default();
    let weights = args.weights.as_ref().map(|w| &w.0[..]);
    let m = quasi_arithmetic_mean(&f, &values, weights)?;
    let json = json!({
        "bijection": f.to_string(),
        "values": values.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        "weights": weights.map(|w| w.iter().map(|&v| num(v)).collect::<Vec<_>>()),
        "mean": num(m),
    });
    Ok(Output::new("mean", format!("{m}"), json))
}

fn report_table(report: &AuditReport, human: &mut String, csv: &mut Csv) {
    let _ = writeln!(human, "{} (seed {})", report.bijection, report.seed);
    for f in &report.findings {
        let residual = f.residual.map_or("-".to_string(), |r| format!("{r:.6e}"));
        let _ = writeln!(human, "  {:<18} {:<10} {:>14}  {}", f.probe, f.verdict, residual, f.notes);
        csv.row([
            report.bijection.clone(),
            f.probe.clone(),
            f.verdict.to_string(),
            f.residual.map_or(String::new(), |r| r.to_string()),
            f.notes.clone(),
        ]);
    }
}

pub fn audit(args: &AuditArgs) -> Outcome {
    let specs = match &args.f {
        Some(text) => vec![bijection(text)?],
        None => Bijection::catalog(),
    };
    let config = nncalc::AuditConfig {
        seed: args.seed,
        closure_samples: args.closure_samples,
        cauchy_samples: args.cauchy_samples,
        entropy_distributions: args.entropy_dists,
        ..Default::default()
    };
    let reports: Vec<AuditReport> = specs.iter().map(|f| audit::run_battery(f, &config)).collect();
    let mut human = String::new();
    let mut csv = Csv::new(&["bijection", "probe", "verdict", "residual", "notes"]);
    for r in &reports {
        report_table(r, &mut human, &mut csv);
    }
    let json = if args.catalog {
        json!({ "reports": reports })
    } else {
        let mut v = serde_json::to_value(&reports[0]).expect("report serializes");
        v.as_object_mut().expect("object").remove("schema_version");
        v
    };
    Ok(Output::new("audit", human.trim_end().to_string(), json).with_csv(csv.finish()))
}

pub fn bell(args: &BellArgs) -> Outcome {
    let settings = |model: Option<&ChshSettings>| {
        let base = model.cloned().unwrap_or_default();
        ChshSettings {
            a: args.a.clone().unwrap_or(base.a),
            a_prime: args.a_prime.clone().unwrap_or(base.a_prime),
            b: args.b.clone().unwrap_or(base.b),
            b_prime: args.b_prime.clone().unwrap_or(base.b_prime),
        }
    };
    if let Some(n) = args.classical_bound {
        let s = settings(None);
        let bound: f64 = nncalc::brute_force_classical_bound(n, &s)?;
        let json = json!({ "n_lambda": n, "strategies": 16f64.powi(n as i32), "bound": num(bound) });
        return Ok(Output::new("bell", format!("{bound}"), json));
    }
    let path = args.model.as_ref().expect("clap requires --model");
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let model = HiddenVariableModel::<f64>::from_json(&text)?;
    let f = bijection(&args.f)?;
    let s = settings(model.chsh_settings());
    let value = chsh(&model, &s, &f)?;
    let pairs = [(&s.a, &s.b), (&s.a, &s.b_prime), (&s.a_prime, &s.b), (&s.a_prime, &s.b_prime)];
    let mut expectations = Vec::new();
    let mut human = String::new();
    for (a, b) in pairs {
        let e = nn_expectation(&model, a, b, &f)?;
        let _ = writeln!(human, "E({a}, {b}) = {e}");
        expectations.push(json!({ "a": a, "b": b, "value": num(e) }));
    }
    let audit = measurement_independence_audit(&model, args.tol);
    let (wa, wb) = &audit.witness;
    let _ = write!(
        human,
        "S = {value}\nmeasurement independence: {} (max total variation {} at ({wa}, {wb}))",
        if audit.independent { "independent" } else { "DEPENDENT" },
        audit.max_distance
    );
    let json = json!({
        "bijection": f.to_string(),
        "settings": { "a": s.a, "a_prime": s.a_prime, "b": s.b, "b_prime": s.b_prime },
        "expectations": expectations,
        "chsh": num(value),
        "independence": {
            "independent": audit.independent,
            "tol": num(args.tol),
            "max_distance": num(audit.max_distance),
            "witness": { "a": wa, "b": wb },
            "distances": audit.distances.iter().map(|((a, b), d)| json!({ "a": a, "b": b, "distance": num(*d) })).collect::<Vec<_>>(),
        },
    });
    Ok(Output::new("bell", human, json))
}

pub fn cosmo(args: &CosmoArgs) -> Outcome {
    let f = bijection(&args.f)?;
    let params = CosmologyParams::uniform_with(args.omega_lambda, args.t0, args.t1, args.n)?;
    let defect = cosmo_bijection_ratio(&params, &f)?;
    let mut csv = Csv::new(&["t", "a", "f", "ratio"]);
    let mut rows = Vec::new();
    for &t in params.t_grid() {
        let a = lcdm_scale_factor(t, args.omega_lambda)?;
        let ft = f.forward(t)?;
        let ratio = a / ft.powf(2.0 / 3.0);
        csv.row([t.to_string(), a.to_string(), ft.to_string(), ratio.to_string()]);
        rows.push(json!({ "t": num(t), "a": num(a), "f": num(ft), "ratio": num(ratio) }));
    }
    let human = format!("constancy defect {defect:e} over {} points", args.n);
    let json = json!({
        "bijection": f.to_string(),
        "omega_lambda": num(args.omega_lambda),
        "defect": num(defect),
        "rows": rows,
    });
    Ok(Output::new("cosmo", human, json).with_csv(csv.finish()))
}

pub fn cantor(args: &CantorArgs) -> Outcome {
    let depth = args.depth;
    if let Some(text) = &args.x {
        let v: f64 = match parse_ratio(text) {
            Some((p, q)) => cantor_value_ratio(p, q, depth)?,
            None => cantor_value(crate::number::parse_real(text).map_err(CliError::Usage)?, depth)?,
        };
        let json = json!({ "x": text, "depth": depth, "value": num(v) });
        return Ok(Output::new("cantor", format!("{v}"), json));
    }
    if let Some(y) = args.inverse {
        let x = cantor_generalized_inverse(y, depth)?;
        let json = json!({ "y": num(y), "depth": depth, "leftmost_preimage": num(x) });
        return Ok(Output::new("cantor", format!("{x}"), json));
    }
    let Some(samples) = args.samples else {
        return Err(CliError::Usage("cantor needs one of --x, --inverse or --samples".into()));
    };
    let (csv, rows) = cantor_table(depth, samples)?;
    let json = json!({ "depth": depth, "samples": samples, "rows": rows });
    match &args.out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let human = format!("wrote {samples} rows to {}", path.display());
            let mut json = json;
            json["path"] = json!(path.display().to_string());
            Ok(Output::new("cantor", human, json).with_csv(format!("path,rows\n{},{samples}\n", path.display())))
        }
        None => Ok(Output::new("cantor", csv.trim_end().to_string(), json).with_csv(csv)),
    }
}

/// `x,C(x)` over `samples` evenly spaced points of `[0, 1]`, each evaluated
/// from the exact fraction `k / (samples - 1)`.
pub fn cantor_table(depth: u32, samples: usize) -> Result<(String, Vec<Value>), CliError> {
    if samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let last = (samples - 1) as u64;
    let mut csv = Csv::new(&["x", "C(x)"]);
    let mut rows = Vec::with_capacity(samples);
    for k in 0..=last {
        let x = k as f64 / last as f64;
        let c: f64 = cantor_value_ratio(k, last, depth)?;
        csv.row([x.to_string(), c.to_string()]);
        rows.push(json!([num(x), num(c)]));
    }
    Ok((csv.finish(), rows))
}
