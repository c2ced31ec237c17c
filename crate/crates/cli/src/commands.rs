use serde_json::{json, Value};

use fracdom_core::falsify::{
    comonotone_improvement_search, mps_witness, pratt_witness, HitKind, MpsGrid, PrattGrid, TwoStateAllocation,
    Witness, WitnessPayload,
};
use fracdom_core::optimize::{solve_family, RiskMinInstance};
use fracdom_core::orders::ssd_dominates;
use fracdom_core::riskmeasures::{c_max, cara_meyer_curve};
use fracdom_core::timeseries::{align_and_diff, summary};
use fracdom_core::{es_crossings, Benchmarks, Distribution, Returns, Utility};

use crate::cli::{Command, DataArgs, Instance, Mode};
use crate::error::{invalid, AppResult, Context};
use crate::input::load_returns;
use crate::output::{num, Report};
use crate::parse;

pub fn run(cmd: &Command) -> AppResult<Report> {
    match cmd {
        Command::EsCurve { data } => es_curve(data),
        Command::RhoCurve { data, grid } => rho_curve(data, &parse::c_grid(grid)?),
        Command::Cmax { data, c_min, c_max, tol } => cmax(data, *c_min, *c_max, *tol),
        Command::Riskmin { config } => riskmin(config),
        Command::Falsify { utility, mode, rho } => falsify(utility, *mode, rho.as_deref()),
        Command::Counterexample { resolution, instance } => counterexample(*resolution, *instance),
        Command::Summary { data } => summarize(data),
        Command::DemoIntro => demo_intro(),
    }
}

fn input(data: &DataArgs) -> AppResult<Returns> {
    let spec = data.input.as_deref().ok_or_else(|| invalid("--input is required"))?;
    load_returns(spec, &parse::window(data)?)
}

fn benchmarks(data: &DataArgs) -> AppResult<Vec<Returns>> {
    let w = parse::window(data)?;
    data.benchmark.iter().map(|b| load_returns(b, &w)).collect()
}

fn law(r: &Returns) -> AppResult<Distribution> {
    r.empirical().validating(&r.label)
}

/// `value@prob` pairs joined by `;`.
pub fn atoms(d: &Distribution) -> String {
    d.atoms().iter().map(|a| format!("{}@{}", a.value, a.prob)).collect::<Vec<_>>().join(";")
}

fn es_curve(data: &DataArgs) -> AppResult<Report> {
    let r = input(data)?;
    let d = law(&r)?;
    let mut rep = Report::new("es-curve", &["label", "p", "es"]);
    rep.meta("observations", r.len());
    for (p, es) in d.es_curve().points() {
        rep.row(vec![json!(r.label), num(p), num(es)]);
    }
    Ok(rep)
}

fn rho_curve(data: &DataArgs, grid: &[f64]) -> AppResult<Report> {
    let x = law(&input(data)?)?;
    let bench = benchmarks(data)?;
    if bench.is_empty() {
        return Err(invalid("at least one --benchmark is required"));
    }
    let set = Benchmarks::new(bench.iter().map(|b| Ok((b.label.clone(), law(b)?))).collect::<AppResult<_>>()?)
        .validating("benchmarks")?;
    let mut rep = Report::new("rho-curve", &["c", "set", "rho", "argmin"]);
    rep.meta("benchmarks", set.labels().join(";"));
    for v in cara_meyer_curve(&x, &set, grid) {
        let winner = &set.labels()[v.argmin];
        rep.row(vec![num(v.c), json!("K"), num(v.value), json!(winner)]);
        for (label, rho) in set.labels().iter().zip(&v.per_benchmark) {
            rep.row(vec![num(v.c), json!(label), num(*rho), json!(label)]);
        }
    }
    Ok(rep)
}

fn cmax(data: &DataArgs, lo: f64, hi: f64, tol: f64) -> AppResult<Report> {
    let x = law(&input(data)?)?;
    let bench = benchmarks(data)?;
    let [y] = bench.as_slice() else {
        return Err(invalid("cmax needs exactly one --benchmark"));
    };
    let r = c_max(&x, &law(y)?, lo, hi, tol).validating("c_max")?;
    let mut rep = Report::new("cmax", &["benchmark", "c_min", "c_max", "root", "degenerate"]);
    rep.row(vec![json!(y.label), num(lo), num(hi), r.root.map_or(Value::Null, num), json!(r.degenerate)]);
    Ok(rep)
}

fn riskmin(path: &std::path::Path) -> AppResult<Report> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let inst: RiskMinInstance<f64> = serde_json::from_str(&text).validating(&path.display().to_string())?;
    let sol = solve_family(&inst).computing("risk minimisation")?;
    let mut rep = Report::new("riskmin", &["u_start", "u_end", "loss"]);
    rep.meta("kappa_star", num(sol.kappa_star));
    rep.meta("g_index", sol.g_index);
    rep.meta("x0", num(inst.x0));
    let knots = sol.l_star.knots();
    for (i, &v) in sol.l_star.values().iter().enumerate() {
        let end = knots.get(i + 1).copied().unwrap_or(1.0);
        rep.row(vec![num(knots[i]), num(end), num(v)]);
    }
    rep.detail = Some(serde_json::to_value(&sol).computing("serialise solution")?);
    Ok(rep)
}

fn falsify(utility: &str, mode: Mode, rho: Option<&str>) -> AppResult<Report> {
    let v: Utility = parse::utility(utility)?;
    let witness: Option<Witness<f64>> = match mode {
        Mode::Pratt => {
            if rho.is_some() {
                return Err(invalid("--rho only applies to --mode mps"));
            }
            pratt_witness(&v, &PrattGrid::default_for(&v))
        }
        Mode::Mps => {
            let spec = rho.ok_or_else(|| invalid("--mode mps needs --rho"))?;
            let measure = parse::risk_measure(spec)?;
            mps_witness(measure.as_ref(), &v, &MpsGrid::default_for(&v))
        }
    };
    let mut rep = Report::new(
        "falsify",
        &["status", "kind", "parameters", "dominated", "dominating", "risk_dominated", "risk_dominating", "violation"],
    );
    rep.meta("utility", v.to_string());
    rep.meta("mode", if mode == Mode::Pratt { "pratt" } else { "mps" });
    if let Some(r) = rho {
        rep.meta("rho", r);
    }
    match &witness {
        None => rep.row(vec![
            json!("no_witness"),
            Value::Null,
            Value::Null,
            Value::Null,
            Value::Null,
            Value::Null,
            Value::Null,
            Value::Null,
        ]),
        Some(w) => {
            let (kind, params) = match &w.payload {
                WitnessPayload::TranslationGap { benchmark, shift, gap } => {
                    ("translation_gap", format!("benchmark={};shift={shift};gap={gap}", atoms(benchmark)))
                }
                WitnessPayload::Mps { p, s_prime, s, t, t_prime } => {
                    ("mps", format!("p={p};s_prime={s_prime};s={s};t={t};t_prime={t_prime}"))
                }
            };
            rep.row(vec![
                json!("witness"),
                json!(kind),
                json!(params),
                json!(atoms(&w.dominated)),
                json!(atoms(&w.dominating)),
                num(w.risk_dominated),
                num(w.risk_dominating),
                num(w.violation()),
            ]);
            rep.detail = Some(serde_json::to_value(w).computing("serialise witness")?);
        }
    }
    Ok(rep)
}

fn counterexample(resolution: usize, instance: Instance) -> AppResult<Report> {
    let (x, v, name) = match instance {
        Instance::Negative => (TwoStateAllocation::negative_instance(), Utility::neg_log_neg(), "negative"),
        Instance::Positive => (TwoStateAllocation::positive_instance(), Utility::log(), "positive"),
    };
    let r = comonotone_improvement_search(&x, &v, resolution).validating("counterexample")?;
    let mut rep = Report::new(
        "counterexample",
        &["instance", "utility", "resolution", "scanned", "skipped", "hits", "status", "a", "b", "kind"],
    );
    let (status, a, b, kind) = match &r.hit {
        None => ("comonotone_infeasible", Value::Null, Value::Null, Value::Null),
        Some(h) => (
            "improvement_found",
            num(h.a),
            num(h.b),
            json!(match h.kind {
                HitKind::Strict => "strict",
                HitKind::Reflexive => "reflexive",
            }),
        ),
    };
    rep.meta("x1", format!("{},{}", x.x1[0], x.x1[1]));
    rep.meta("x2", format!("{},{}", x.x2[0], x.x2[1]));
    rep.row(vec![
        json!(name),
        json!(v.to_string()),
        json!(resolution),
        json!(r.scanned),
        json!(r.skipped),
        json!(usize::from(r.hit.is_some())),
        json!(status),
        a,
        b,
        kind,
    ]);
    rep.detail = Some(serde_json::to_value(&r).computing("serialise report")?);
    Ok(rep)
}

fn summarize(data: &DataArgs) -> AppResult<Report> {
    let base = input(data)?;
    let mut series = Vec::new();
    let bench = benchmarks(data)?;
    if bench.is_empty() {
        series.push(base);
    } else {
        for b in &bench {
            series.push(align_and_diff(&base, b).validating("return differences")?);
        }
    }
    let mut rep = Report::new("summary", &["label", "n", "min", "q1", "median", "mean", "q3", "max"]);
    for r in &series {
        let s = summary(r).validating(&r.label)?;
        rep.row(vec![
            json!(r.label),
            json!(r.len()),
            num(s.min),
            num(s.q1),
            num(s.median),
            num(s.mean),
            num(s.q3),
            num(s.max),
        ]);
    }
    Ok(rep)
}

/// Lotteries in units of $100k: 0 or 10 versus -1 or 4.
pub fn intro_lotteries() -> (Distribution, Distribution) {
    (
        Distribution::new([(0.0, 0.75), (10.0, 0.25)]).expect("valid lottery"),
        Distribution::new([(-1.0, 0.25), (4.0, 0.75)]).expect("valid lottery"),
    )
}

fn demo_intro() -> AppResult<Report> {
    let (x1, x2) = intro_lotteries();
    let crossings = es_crossings(&x1, &x2);
    let (c1, c2) = (x1.es_curve(), x2.es_curve());
    let mut ps: Vec<f64> =
        c1.breakpoints().into_iter().chain(c2.breakpoints()).chain(crossings.iter().copied()).collect();
    ps.sort_by(f64::total_cmp);
    ps.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut rep = Report::new("demo-intro", &["p", "es_x1", "es_x2", "crossing"]);
    rep.meta("crossings", crossings.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";"));
    let x1_over_x2 = ssd_dominates(&x2, &x1);
    let x2_over_x1 = ssd_dominates(&x1, &x2);
    rep.meta("x1_ssd_preferred", x1_over_x2.dominated);
    rep.meta("x2_ssd_preferred", x2_over_x1.dominated);
    for p in ps {
        let is_cross = crossings.iter().any(|c| (c - p).abs() < 1e-12);
        rep.row(vec![num(p), num(c1.eval(p)), num(c2.eval(p)), json!(is_cross)]);
    }
    rep.detail = Some(json!({
        "x1": atoms(&x1),
        "x2": atoms(&x2),
        "crossings": crossings,
        "x1_ssd_preferred": x1_over_x2,
        "x2_ssd_preferred": x2_over_x1,
    }));
    Ok(rep)
}
