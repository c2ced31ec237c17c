//! Parsers for the compact specs accepted on the command line.

use std::path::{Path, PathBuf};

use fracdom_core::riskmeasures::{BestCase, CertaintyEquivalentRisk, ExpectedShortfall, RiskFunctional, WorstCase};
use fracdom_core::timeseries::Window;
use fracdom_core::utility::KT_DEFAULT_EPS;
use fracdom_core::{Distribution, Result as CoreResult, Utility};

use crate::cli::{DataArgs, GridArgs};
use crate::error::{invalid, AppResult, Context};

fn numbers(args: &str, spec: &str) -> AppResult<Vec<f64>> {
    args.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| invalid(format!("bad number {s:?} in {spec:?}"))))
        .collect()
}

fn arity<const N: usize>(args: &[f64], spec: &str) -> AppResult<[f64; N]> {
    args.try_into().map_err(|_| invalid(format!("{spec:?} needs {N} parameter(s)")))
}

/// `cara:<c>`, `crra:<a>`, `logistic:<alpha>`, `sahara:<alpha>,<beta>,<d>`,
/// `kt:<alpha>,<beta>[,<eps>]`, `log`, `neglogneg` or `identity`.
pub fn utility(spec: &str) -> AppResult<Utility> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let params = if args.is_empty() { Vec::new() } else { numbers(args, spec)? };
    let u = match name.trim().to_ascii_lowercase().as_str() {
        "cara" => Utility::cara(arity::<1>(&params, spec)?[0]),
        "crra" => Utility::crra(arity::<1>(&params, spec)?[0]),
        "logistic" => Utility::logistic(arity::<1>(&params, spec)?[0]),
        "sahara" => {
            let [a, b, d] = arity(&params, spec)?;
            Utility::sahara(a, b, d)
        }
        "kt" => match params.len() {
            2 => Utility::kahneman_tversky(params[0], params[1], KT_DEFAULT_EPS),
            _ => {
                let [a, b, e] = arity(&params, spec)?;
                Utility::kahneman_tversky(a, b, e)
            }
        },
        "log" if params.is_empty() => Ok(Utility::log()),
        "neglogneg" if params.is_empty() => Ok(Utility::neg_log_neg()),
        "identity" if params.is_empty() => Ok(Utility::identity()),
        _ => return Err(invalid(format!("unknown utility {spec:?}"))),
    };
    u.validating(&format!("utility {spec:?}"))
}

struct Mean;

impl RiskFunctional<f64> for Mean {
    fn risk(&self, x: &Distribution) -> CoreResult<f64> {
        Ok(-x.mean())
    }
}

/// `worst`, `best`, `mean`, `es:<p>` or `cara-ce:<c>`.
pub fn risk_measure(spec: &str) -> AppResult<Box<dyn RiskFunctional<f64>>> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let params = if args.is_empty() { Vec::new() } else { numbers(args, spec)? };
    Ok(match (name.trim().to_ascii_lowercase().as_str(), params.len()) {
        ("worst", 0) => Box::new(WorstCase),
        ("best", 0) => Box::new(BestCase),
        ("mean", 0) => Box::new(Mean),
        ("es", 1) if (0.0..=1.0).contains(&params[0]) => Box::new(ExpectedShortfall { p: params[0] }),
        ("cara-ce", 1) => Box::new(CertaintyEquivalentRisk { u: utility(&format!("cara:{}", params[0]))? }),
        _ => return Err(invalid(format!("unknown risk measure {spec:?}"))),
    })
}

/// `label=path`, or a bare path labelled by its file stem.
pub fn labelled_path(spec: &str) -> (String, PathBuf) {
    if let Some((label, path)) = spec.split_once('=') {
        if !label.is_empty() && !label.contains(['/', '\\']) {
            return (label.to_string(), PathBuf::from(path));
        }
    }
    let path = PathBuf::from(spec);
    let label = Path::new(spec).file_stem().map_or_else(|| spec.to_string(), |s| s.to_string_lossy().into_owned());
    (label, path)
}

pub fn window(args: &DataArgs) -> AppResult<Window> {
    match &args.window {
        Some(name) => Window::named(name).ok_or_else(|| invalid(format!("unknown window {name:?}"))),
        None => Window::new(args.from, args.to).validating("window"),
    }
}

/// `c_steps` evenly spaced values on `[c_min, c_max]`.
pub fn c_grid(g: &GridArgs) -> AppResult<Vec<f64>> {
    if !(g.c_min.is_finite() && g.c_max.is_finite()) {
        return Err(invalid("c range must be finite"));
    }
    match g.c_steps {
        0 => Err(invalid("c-steps must be positive")),
        1 if g.c_min == g.c_max => Ok(vec![g.c_min]),
        1 => Err(invalid("a single c step needs c-min = c-max")),
        n if g.c_min < g.c_max => {
            let span = g.c_max - g.c_min;
            Ok((0..n).map(|i| g.c_min + span * i as f64 / (n - 1) as f64).collect())
        }
        _ => Err(invalid(format!("c-min {} must be below c-max {}", g.c_min, g.c_max))),
    }
}
