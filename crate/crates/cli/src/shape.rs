use serde::Serialize;

use susyrad::analytic::linear_spectrum;
use susyrad::shape_invariance::{log_samples, shape_invariance_residual, Coupling, ParameterChain};

use crate::args::{Format, ShapeArgs, Units};
use crate::error::{CliError, CliResult};
use crate::output::{to_json, Table};

#[derive(Serialize)]
struct Link {
    step: usize,
    ell: u32,
    gamma: Coupling,
    gamma_value: f64,
    remainder: Option<f64>,
    energy: f64,
    energy_closed_form: f64,
    residual: Option<f64>,
}

#[derive(Serialize)]
struct Report {
    mass: f64,
    exact: bool,
    samples: usize,
    r_range: (f64, f64),
    links: Vec<Link>,
    invariant_defect: f64,
    max_residual: f64,
    max_spectrum_deviation: f64,
    tol: f64,
    tol_spectrum: f64,
    pass: bool,
}

pub fn run(args: &ShapeArgs, units: Units, format: Format) -> CliResult<(String, Vec<String>)> {
    let gamma0: Coupling = args.gamma0.parse().map_err(|e: susyrad::Error| CliError::Config(e.to_string()))?;
    let mass = args.mass.unwrap_or(units.mass());
    if !(args.r_lo > 0.0 && args.r_hi >= args.r_lo) || args.samples == 0 {
        return Err(CliError::Config("need 0 < r-lo ≤ r-hi and at least one sample".into()));
    }
    let rs = log_samples(args.r_lo, args.r_hi, args.samples);
    let chain = ParameterChain::new(args.ell0, gamma0, mass, args.steps)?;
    let g0 = gamma0.to_f64();
    let mut links = Vec::with_capacity(chain.links.len());
    let (mut max_res, mut max_dev): (f64, f64) = (0.0, 0.0);
    for (k, link) in chain.links.iter().enumerate() {
        let residual = if k < args.steps {
            let r = shape_invariance_residual(link.ell, link.gamma, mass, &rs)?;
            max_res = max_res.max(r);
            Some(r)
        } else {
            None
        };
        let closed = linear_spectrum(g0, mass, args.ell0, k)?;
        let energy = chain.energies[k];
        if closed != 0.0 {
            max_dev = max_dev.max((energy - closed).abs() / closed.abs());
        } else {
            max_dev = max_dev.max(energy.abs());
        }
        links.push(Link {
            step: k,
            ell: link.ell,
            gamma: link.gamma,
            gamma_value: link.gamma.to_f64(),
            remainder: chain.remainders.get(k).copied(),
            energy,
            energy_closed_form: closed,
            residual,
        });
    }
    let mut failed = Vec::new();
    if max_res >= args.tol {
        failed.push(format!("shape-invariance residual {max_res:e} ≥ {:e}", args.tol));
    }
    if max_dev > args.tol_spectrum {
        failed.push(format!("chain spectrum deviates from the closed form by {max_dev:e}"));
    }
    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&[
                "step",
                "ell",
                "gamma",
                "gamma_value",
                "remainder",
                "energy",
                "energy_closed_form",
                "residual",
            ]);
            for l in &links {
                t.push(vec![
                    l.step.into(),
                    l.ell.into(),
                    l.gamma.to_string().into(),
                    l.gamma_value.into(),
                    l.remainder.into(),
                    l.energy.into(),
                    l.energy_closed_form.into(),
                    l.residual.into(),
                ]);
            }
            t.to_csv()
        }
        Format::Json => to_json(&Report {
            mass,
            exact: gamma0.is_exact(),
            samples: rs.len(),
            r_range: (args.r_lo, args.r_hi),
            links,
            invariant_defect: chain.invariant_defect(),
            max_residual: max_res,
            max_spectrum_deviation: max_dev,
            tol: args.tol,
            tol_spectrum: args.tol_spectrum,
            pass: failed.is_empty(),
        }),
    };
    Ok((text, failed))
}
