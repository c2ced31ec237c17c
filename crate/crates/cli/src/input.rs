use std::fs::File;
use std::path::Path;

use chrono::NaiveDate;
use fracdom_core::timeseries::{log_returns, Window};
use fracdom_core::{Prices, Returns};

use crate::error::{invalid, AppResult, Context};

/// Reads a `date,open` csv (extra columns ignored).
pub fn read_prices(label: &str, path: &Path) -> AppResult<Prices> {
    let file = File::open(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    read_prices_from(label, file).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

pub fn read_prices_from(label: &str, reader: impl std::io::Read) -> Result<Prices, String> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(reader);
    let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h.eq_ignore_ascii_case(name)).ok_or_else(|| format!("missing column {name:?}"))
    };
    let (di, pi) = (col("date")?, col("open")?);
    let mut obs = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| rec.get(i).ok_or_else(|| format!("line {line}: missing field"));
        let date = NaiveDate::parse_from_str(field(di)?, "%Y-%m-%d")
            .map_err(|e| format!("line {line}: bad date {:?}: {e}", field(di).unwrap_or_default()))?;
        let price: f64 =
            field(pi)?.parse().map_err(|_| format!("line {line}: bad price {:?}", field(pi).unwrap_or_default()))?;
        obs.push((date, price));
    }
    Prices::new(label, obs).map_err(|e| e.to_string())
}

/// Log returns of the prices inside `window`.
pub fn load_returns(spec: &str, window: &Window) -> AppResult<Returns> {
    let (label, path) = crate::parse::labelled_path(spec);
    let prices = read_prices(&label, &path)?.restrict(window);
    log_returns(&prices).validating(&format!("{label} in window"))
}
