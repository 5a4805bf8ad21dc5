use serde::Serialize;

use susyrad::analytic::{zero_mode_closed_form, KernelKind, ZeroModeProfile};
use susyrad::quadrature::integrate;
use susyrad::radial::factorized_pair;
use susyrad::spectral::{pair_spectra, relative_deviation};
use susyrad::{Sign, SuperpotentialSpec, System};

use crate::args::{Format, Units, ZeroModeArgs};
use crate::error::{CliError, CliResult};
use crate::output::{to_json, Cell, Table};

#[derive(Serialize)]
struct Meta {
    superpotential: String,
    ell: u32,
    system: u8,
    kernel: &'static str,
    norm_constant: Option<f64>,
    integral: f64,
    tol_norm: f64,
    numeric_energy: f64,
    profile_deviation: f64,
    peak_r_analytic: f64,
    peak_r_numeric: f64,
    r_max: f64,
    n: usize,
}

#[derive(Serialize)]
struct Report {
    meta: Meta,
    r: Vec<f64>,
    density_analytic: Vec<f64>,
    density_numeric: Vec<f64>,
}

/// The normalizable branch-`+` kernel of `system`, if any.
pub fn normalizable_kernel(spec: &SuperpotentialSpec, ell: u32, system: System) -> CliResult<Option<ZeroModeProfile>> {
    for kind in KernelKind::ALL {
        if kind.system() != system || kind.branch() != Sign::Plus {
            continue;
        }
        let profile = zero_mode_closed_form(spec, ell, kind)?;
        if profile.normalizable {
            return Ok(Some(profile));
        }
    }
    Ok(None)
}

/// `∫ r² R² dr` of the closed form, integrated in `s = ln r`.
pub fn closed_form_integral(profile: &ZeroModeProfile, r_hi: f64) -> CliResult<f64> {
    let f = |s: f64| profile.density(s.exp()).map(|d| d * s.exp()).unwrap_or(f64::NAN);
    let v = integrate(f, (1e-12 * r_hi).ln(), r_hi.ln(), 400, 10);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Verification("closed-form density is not finite on the integration range".into()))
    }
}

fn argmax(r: &[f64], v: &[f64]) -> f64 {
    let i = v.iter().enumerate().fold(0, |b, (i, x)| if *x > v[b] { i } else { b });
    r[i]
}

pub fn run(args: &ZeroModeArgs, units: Units, format: Format) -> CliResult<(String, Vec<String>)> {
    let spec = args.spec.resolve(units)?;
    let system = System::from_number(args.system)?;
    let profile = normalizable_kernel(&spec, args.ell, system)?
        .ok_or_else(|| CliError::Refusal("no zero mode (broken SUSY)".into()))?;
    let grid = args.grid.resolve(&spec, args.ell, 1)?;
    let r_hi = 3.0 * spec.auto_r_max(args.ell, 1).unwrap_or(grid.r_max()).max(grid.r_max());
    let integral = closed_form_integral(&profile, r_hi)?;

    let pair = factorized_pair(&grid, args.ell, &spec, system)?;
    let rep = pair_spectra(&pair, 1, &args.tol.pairing())?;
    let zm = rep
        .zero_modes
        .iter()
        .find(|z| z.branch == Sign::Plus)
        .ok_or_else(|| CliError::Verification("the grid Hamiltonian shows no zero mode; refine the grid".into()))?;
    let r = grid.midpoints();
    let analytic = r.iter().map(|&x| profile.density(x)).collect::<Result<Vec<_>, _>>()?;
    let numeric: Vec<f64> = zm.vector.iter().map(|v| v * v).collect();
    let reduced = r.iter().map(|&x| profile.eval_reduced(x)).collect::<Result<Vec<_>, _>>()?;
    let deviation = relative_deviation(&zm.vector, &reduced);

    let mut failed = Vec::new();
    if (integral - 1.0).abs() > args.tol_norm {
        failed.push(format!("closed-form normalization ∫ = {integral:.12}, tolerance {:e}", args.tol_norm));
    }
    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&["r", "density_analytic", "density_numeric"]);
            for i in 0..r.len() {
                t.push(vec![Cell::Num(r[i]), Cell::Num(analytic[i]), Cell::Num(numeric[i])]);
            }
            t.to_csv()
        }
        Format::Json => to_json(&Report {
            meta: Meta {
                superpotential: spec.to_string(),
                ell: args.ell,
                system: system.number(),
                kernel: profile.kind.name(),
                norm_constant: profile.norm_constant,
                integral,
                tol_norm: args.tol_norm,
                numeric_energy: zm.energy,
                profile_deviation: deviation,
                peak_r_analytic: argmax(&r, &analytic),
                peak_r_numeric: argmax(&r, &numeric),
                r_max: grid.r_max(),
                n: grid.n(),
            },
            r,
            density_analytic: analytic,
            density_numeric: numeric,
        }),
    };
    Ok((text, failed))
}
