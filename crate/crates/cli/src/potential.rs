use serde::Serialize;

use susyrad::superpotential::case2_potential;
use susyrad::{Sign, System};

use crate::args::{Format, PotentialArgs, Units};
use crate::error::{CliError, CliResult};
use crate::output::{to_json, Cell, Table};

#[derive(Serialize)]
struct Profile {
    superpotential: String,
    ell: u32,
    r: Vec<f64>,
    v1_plus: Vec<f64>,
    v1_minus: Vec<f64>,
    v2_plus: Vec<f64>,
    v2_minus: Vec<f64>,
}

fn radii(args: &PotentialArgs) -> CliResult<Vec<f64>> {
    if !args.r.is_empty() {
        return Ok(args.r.clone());
    }
    if !(args.r_min > 0.0 && args.r_max > args.r_min) {
        return Err(CliError::Config(format!("need 0 < r-min < r-max, got {} and {}", args.r_min, args.r_max)));
    }
    match args.points {
        0 => Err(CliError::Config("--points must be at least 1".into())),
        1 => Ok(vec![args.r_min]),
        p => Ok((0..p).map(|i| args.r_min + (args.r_max - args.r_min) * i as f64 / (p - 1) as f64).collect()),
    }
}

pub fn run(args: &PotentialArgs, units: Units, format: Format) -> CliResult<String> {
    let spec = args.spec.resolve(units)?;
    let rs = radii(args)?;
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(4);
    for system in [System::One, System::Two] {
        for branch in [Sign::Plus, Sign::Minus] {
            let v = case2_potential(&spec, args.ell, system, branch)?;
            cols.push(rs.iter().map(|&r| v.eval(r)).collect::<Result<_, _>>()?);
        }
    }
    Ok(match format {
        Format::Csv => {
            let mut t = Table::new(&["r", "v1_plus", "v1_minus", "v2_plus", "v2_minus"]);
            for (i, r) in rs.iter().enumerate() {
                let mut row = vec![Cell::Num(*r)];
                row.extend(cols.iter().map(|c| Cell::Num(c[i])));
                t.push(row);
            }
            t.to_csv()
        }
        Format::Json => {
            let mut it = cols.into_iter();
            let mut next = || it.next().expect("four columns");
            to_json(&Profile {
                superpotential: spec.to_string(),
                ell: args.ell,
                r: rs,
                v1_plus: next(),
                v1_minus: next(),
                v2_plus: next(),
                v2_minus: next(),
            })
        }
    })
}
