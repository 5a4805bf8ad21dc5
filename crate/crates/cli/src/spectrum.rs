use rayon::prelude::*;
use serde::Serialize;

use susyrad::analytic::AnalyticSpectrum;
use susyrad::radial::factorized_pair;
use susyrad::spectral::{pair_spectra, BoundaryState, PairEntry, ReportMeta, Residuals};
use susyrad::{Sign, SuperpotentialSpec, System};

use crate::args::{Format, SpectrumArgs, Units};
use crate::error::{CliError, CliResult};
use crate::output::{to_json, Cell, Table};

#[derive(Clone, Debug, Serialize)]
pub struct Analytic {
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
    pub max_deviation: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroModeRow {
    pub branch: Sign,
    pub energy: f64,
    pub edge_weight: f64,
    pub profile_deviation: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    #[serde(flatten)]
    pub report: ReportMeta,
    pub boundary_states: Vec<BoundaryState>,
    pub analytic: Option<Analytic>,
}

/// One channel in the flat report layout.
#[derive(Clone, Debug, Serialize)]
pub struct ChannelReport {
    pub meta: Meta,
    pub eigenvalues_plus: Vec<f64>,
    pub eigenvalues_minus: Vec<f64>,
    pub pairing: Vec<PairEntry>,
    pub zero_modes: Vec<ZeroModeRow>,
    pub residuals: Residuals,
}

impl ChannelReport {
    fn system(&self) -> u8 {
        self.meta.report.system.unwrap_or(0)
    }

    fn ell(&self) -> u32 {
        self.meta.report.ell.unwrap_or(0)
    }
}

fn analytic(
    spec: &SuperpotentialSpec,
    ell: u32,
    system: System,
    plus: &[f64],
    minus: &[f64],
    levels: usize,
) -> Option<Analytic> {
    let p = AnalyticSpectrum::for_spec(spec, ell, system, Sign::Plus).ok()?;
    let m = AnalyticSpectrum::for_spec(spec, ell, system, Sign::Minus).ok()?;
    let (ap, am) = (p.lowest(levels), m.lowest(levels));
    let dev = plus.iter().zip(&ap).chain(minus.iter().zip(&am)).map(|(x, y)| (x - y).abs()).reduce(f64::max);
    Some(Analytic { plus: ap, minus: am, max_deviation: dev })
}

pub fn channel_report(
    spec: &SuperpotentialSpec,
    ell: u32,
    system: System,
    args: &SpectrumArgs,
) -> CliResult<ChannelReport> {
    let grid = args.grid.resolve(spec, ell, args.levels)?;
    let pair = factorized_pair(&grid, ell, spec, system)?;
    let rep = pair_spectra(&pair, args.levels, &args.tol.pairing())?;
    let mut plus = rep.eigenvalues_plus.clone();
    let mut minus = rep.eigenvalues_minus.clone();
    plus.truncate(args.levels);
    minus.truncate(args.levels);
    let analytic = analytic(spec, ell, system, &plus, &minus, args.levels);
    Ok(ChannelReport {
        meta: Meta { report: rep.meta.clone(), boundary_states: rep.boundary_states.clone(), analytic },
        eigenvalues_plus: plus,
        eigenvalues_minus: minus,
        pairing: rep.pairing.clone(),
        zero_modes: rep
            .zero_modes
            .iter()
            .map(|z| ZeroModeRow {
                branch: z.branch,
                energy: z.energy,
                edge_weight: z.edge_weight,
                profile_deviation: z.profile_deviation,
            })
            .collect(),
        residuals: rep.residuals.clone(),
    })
}

/// Descriptions of the residual checks this report fails.
pub fn failures(rep: &ChannelReport, tol_algebra: f64, tol_analytic: Option<f64>) -> Vec<String> {
    let mut out = Vec::new();
    let tag = format!("system {} ℓ={}", rep.system(), rep.ell());
    let r = &rep.residuals;
    if r.pairing_violation {
        out.push(format!("{tag}: pairing violated, max relative delta {:e}", r.max_pair_delta));
    }
    if r.min_eigenvalue < -1e-12 * r.norm_bound {
        out.push(format!("{tag}: negative eigenvalue {:e}", r.min_eigenvalue));
    }
    if let Some(a) = &r.algebra {
        if a.max_relative() > tol_algebra {
            out.push(format!("{tag}: algebra residual {:e} > {tol_algebra:e}", a.max_relative()));
        }
    }
    if let (Some(tol), Some(dev)) = (tol_analytic, rep.meta.analytic.as_ref().and_then(|a| a.max_deviation)) {
        if dev > tol {
            out.push(format!("{tag}: closed-form deviation {dev:e} > {tol:e}"));
        }
    }
    out
}

pub fn table(reports: &[ChannelReport], branch: Option<Sign>, levels: usize) -> Table {
    let show_plus = branch != Some(Sign::Minus);
    let show_minus = branch != Some(Sign::Plus);
    let mut headers = vec!["system", "ell", "index"];
    if show_plus {
        headers.extend(["e_plus", "analytic_plus"]);
    }
    if show_minus {
        headers.extend(["e_minus", "analytic_minus"]);
    }
    let mut t = Table::new(&headers);
    for rep in reports {
        let an = rep.meta.analytic.as_ref();
        for k in 0..levels {
            let mut row: Vec<Cell> = vec![Cell::Int(rep.system() as i64), rep.ell().into(), k.into()];
            if show_plus {
                row.push(rep.eigenvalues_plus.get(k).copied().into());
                row.push(an.and_then(|a| a.plus.get(k).copied()).into());
            }
            if show_minus {
                row.push(rep.eigenvalues_minus.get(k).copied().into());
                row.push(an.and_then(|a| a.minus.get(k).copied()).into());
            }
            t.push(row);
        }
    }
    t
}

pub fn run(args: &SpectrumArgs, units: Units, format: Format) -> CliResult<(String, Vec<String>)> {
    if args.levels == 0 {
        return Err(CliError::Config("--levels must be at least 1".into()));
    }
    let spec = args.spec.resolve(units)?;
    let mut channels = Vec::new();
    for system in args.channel.systems()? {
        for ell in args.channel.ells(1)? {
            channels.push((system, ell));
        }
    }
    let reports = channels
        .par_iter()
        .map(|&(system, ell)| channel_report(&spec, ell, system, args))
        .collect::<CliResult<Vec<_>>>()?;
    let failed: Vec<String> =
        reports.iter().flat_map(|r| failures(r, args.tol.tol_algebra, args.tol_analytic)).collect();
    let text = match format {
        Format::Csv => table(&reports, args.branch.map(Sign::from), args.levels).to_csv(),
        Format::Json if reports.len() == 1 => to_json(&reports[0]),
        Format::Json => to_json(&reports),
    };
    Ok((text, failed))
}
