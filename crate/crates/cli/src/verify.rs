use rayon::prelude::*;
use serde::Serialize;

use susyrad::analytic::{
    bessel_recursion_residual, bessel_recursion_residual_corrected, free_susy_transform_residual,
    free_susy_transform_residual_corrected, linear_spectrum,
};
use susyrad::angular::{orthonormality_defect, sigma_flip_defect, SphereQuadrature};
use susyrad::shape_invariance::{
    chain_spectrum, default_samples, log_samples, shape_invariance_residual, Coupling, ParameterChain,
};
use susyrad::{HalfInt, Sign, SuperpotentialSpec, System};

use crate::args::{Format, SpectrumArgs, SpinorArgs, Suite, Units, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::output::{to_json, Cell, Table};
use crate::spectrum::channel_report;
use crate::zero_mode::normalizable_kernel;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Reported only; does not affect the verdict.
    pub informational: bool,
}

impl Check {
    fn below(suite: &'static str, name: impl Into<String>, value: f64, tolerance: f64) -> Check {
        Check { suite, name: name.into(), value, tolerance, pass: value < tolerance, informational: false }
    }

    fn info(suite: &'static str, name: impl Into<String>, value: f64, tolerance: f64) -> Check {
        Check { informational: true, ..Check::below(suite, name, value, tolerance) }
    }

    fn equal(suite: &'static str, name: impl Into<String>, value: f64, target: f64) -> Check {
        Check { suite, name: name.into(), value, tolerance: target, pass: value == target, informational: false }
    }
}

#[derive(Serialize)]
struct Report {
    superpotential: String,
    suites: Vec<&'static str>,
    checks: Vec<Check>,
    pass: bool,
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::All => "all",
        Suite::Algebra => "algebra",
        Suite::Spectrum => "spectrum",
        Suite::ZeroModes => "zero-modes",
        Suite::ShapeInvariance => "shape-invariance",
        Suite::Bessel => "bessel",
        Suite::Spinor => "spinor",
    }
}

const ALL: [Suite; 6] =
    [Suite::Algebra, Suite::Spectrum, Suite::ZeroModes, Suite::ShapeInvariance, Suite::Bessel, Suite::Spinor];

fn spectrum_args(args: &VerifyArgs) -> SpectrumArgs {
    SpectrumArgs {
        spec: args.spec.clone(),
        grid: args.grid.clone(),
        channel: crate::args::ChannelArgs { ell: args.ell.clone(), j: Vec::new(), system: args.system.clone() },
        branch: None,
        levels: args.levels,
        tol: args.tol.clone(),
        tol_analytic: Some(args.tol_analytic),
    }
}

fn channels(args: &VerifyArgs) -> CliResult<Vec<(System, u32)>> {
    let mut out = Vec::new();
    for s in &args.system {
        for ell in &args.ell {
            out.push((System::from_number(*s)?, *ell));
        }
    }
    Ok(out)
}

fn pair_suites(spec: &SuperpotentialSpec, args: &VerifyArgs, which: &[Suite]) -> CliResult<Vec<Check>> {
    let sargs = spectrum_args(args);
    let per_channel = channels(args)?
        .par_iter()
        .map(|&(system, ell)| -> CliResult<Vec<Check>> {
            let rep = channel_report(spec, ell, system, &sargs)?;
            let tag = format!("system {} ℓ={ell}", system.number());
            let mut out = Vec::new();
            let r = &rep.residuals;
            if which.contains(&Suite::Algebra) {
                let a = r.algebra.expect("algebra requested");
                out.push(Check::below(
                    "algebra",
                    format!("{tag}: max residual / ‖H‖"),
                    a.max_relative(),
                    args.tol.tol_algebra,
                ));
                out.push(Check::equal("algebra", format!("{tag}: ‖{{W, Q₁}}‖"), a.w_q1_anticommutator, 0.0));
            }
            if which.contains(&Suite::Spectrum) {
                let neg = (-r.min_eigenvalue).max(0.0) / r.norm_bound;
                out.push(Check::below(
                    "spectrum",
                    format!("{tag}: pairing relative delta"),
                    r.max_pair_delta,
                    args.tol.tol_pair,
                ));
                out.push(Check::below("spectrum", format!("{tag}: negative part / ‖H‖"), neg, 1e-12));
                let susy = r
                    .susy_map
                    .iter()
                    .zip(&rep.pairing)
                    .map(|(res, p)| res * p.energy_minus.max(1.0) / r.norm_bound)
                    .fold(0.0, f64::max);
                out.push(Check::below("spectrum", format!("{tag}: SUSY image residual / ‖H‖"), susy, 1e-12));
                if let Some(dev) = rep.meta.analytic.as_ref().and_then(|a| a.max_deviation) {
                    out.push(Check::below("spectrum", format!("{tag}: closed-form deviation"), dev, args.tol_analytic));
                }
            }
            if which.contains(&Suite::ZeroModes) && spec.power_law_form().is_some() {
                let expect = usize::from(normalizable_kernel(spec, ell, system)?.is_some());
                let found = rep.zero_modes.iter().filter(|z| z.branch == Sign::Plus).count();
                out.push(Check::equal(
                    "zero-modes",
                    format!("{tag}: branch-+ zero modes (expect {expect})"),
                    found as f64,
                    expect as f64,
                ));
                let minus = rep.zero_modes.iter().filter(|z| z.branch == Sign::Minus).count();
                out.push(Check::equal("zero-modes", format!("{tag}: branch-- zero modes"), minus as f64, 0.0));
                if let Some(dev) = rep.zero_modes.iter().find_map(|z| z.profile_deviation) {
                    out.push(Check::below(
                        "zero-modes",
                        format!("{tag}: kernel profile deviation"),
                        dev,
                        args.tol_kernel,
                    ));
                }
            }
            Ok(out)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(per_channel.into_iter().flatten().collect())
}

fn shape_suite(args: &VerifyArgs, mass: f64) -> CliResult<Vec<Check>> {
    let gamma0: Coupling = args.gamma0.parse().map_err(|e: susyrad::Error| CliError::Config(e.to_string()))?;
    let rs = default_samples();
    let mut out = Vec::new();
    let chain = ParameterChain::new(args.ell0, gamma0, mass, 10)?;
    let worst = chain
        .links
        .iter()
        .take(10)
        .map(|l| shape_invariance_residual(l.ell, l.gamma, mass, &rs))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(Check::below(
        "shape-invariance",
        format!("residual along the chain from ℓ₀={} γ₀={gamma0}", args.ell0),
        worst,
        args.tol_shape,
    ));
    let energies = chain_spectrum(args.ell0, gamma0, mass, 10)?;
    let mut dev: f64 = 0.0;
    for (n, e) in energies.iter().enumerate() {
        let want = linear_spectrum(gamma0.to_f64(), mass, args.ell0, n)?;
        dev = dev.max(if want == 0.0 { e.abs() } else { (e - want).abs() / want });
    }
    out.push(Check::below("shape-invariance", "chain spectrum vs closed form (relative)", dev, 1e-13));
    out.push(Check::below("shape-invariance", "invariant γℓ along the chain", chain.invariant_defect(), 1e-15));
    Ok(out)
}

fn bessel_suite(lmax: u32, tol: f64, mass: f64) -> CliResult<Vec<Check>> {
    if lmax == 0 {
        return Err(CliError::Config("--lmax must be at least 1".into()));
    }
    let xs = log_samples(1e-2, 50.0, 400);
    let (mut raise, mut lower, mut literal): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for ell in 1..=lmax {
        for &x in &xs {
            let (r, l) = bessel_recursion_residual_corrected(ell, x)?;
            raise = raise.max(r);
            lower = lower.max(l);
            literal = literal.max(bessel_recursion_residual(ell, x)?.1);
        }
    }
    let rs = log_samples(1e-2, 30.0, 300);
    let (mut map, mut map_literal): (f64, f64) = (0.0, 0.0);
    for k in [0.5, 1.0, 2.0] {
        for ell in 1..=lmax {
            map = map.max(free_susy_transform_residual_corrected(ell, k, mass, &rs)?.max());
            map_literal = map_literal.max(free_susy_transform_residual(ell, k, mass, &rs)?.max());
        }
    }
    Ok(vec![
        Check::below("bessel", format!("(∂+(ℓ+1)/z) j_ℓ = j_(ℓ-1), ℓ ≤ {lmax}"), raise, tol),
        Check::below("bessel", format!("(∂-(ℓ-1)/z) j_(ℓ-1) = -j_ℓ, ℓ ≤ {lmax}"), lower, tol),
        Check::info("bessel", "(∂-(ℓ-1)/z) j_(ℓ-1) = +j_ℓ", literal, tol),
        Check::below("bessel", "free SUSY map Qψ+ = +i√E ψ-, Qψ- = -i√E ψ+", map, tol),
        Check::info("bessel", "free SUSY map Q(ψ+, ψ-) = -i√E (ψ-, ψ+)", map_literal, tol),
    ])
}

pub fn spinor_checks(jmax: HalfInt, samples: usize, tol_ortho: f64, tol_flip: f64) -> CliResult<Vec<Check>> {
    if samples < 2 {
        return Err(CliError::Config("need at least 2 angle samples".into()));
    }
    let ortho = orthonormality_defect(&SphereQuadrature::default(), jmax)?;
    let flip = sigma_flip_defect(jmax, samples)?;
    Ok(vec![
        Check::below("spinor", format!("orthonormality, j ≤ {jmax}"), ortho, tol_ortho),
        Check::below("spinor", format!("σ·e_r flip, j ≤ {jmax}"), flip, tol_flip),
    ])
}

pub fn render(checks: &[Check], superpotential: String, suites: Vec<&'static str>, format: Format) -> String {
    let pass = checks.iter().all(|c| c.pass || c.informational);
    match format {
        Format::Csv => {
            let mut t = Table::new(&["suite", "check", "value", "tolerance", "pass", "informational"]);
            for c in checks {
                t.push(vec![
                    c.suite.into(),
                    c.name.clone().into(),
                    Cell::Num(c.value),
                    Cell::Num(c.tolerance),
                    c.pass.into(),
                    c.informational.into(),
                ]);
            }
            t.to_csv()
        }
        Format::Json => to_json(&Report { superpotential, suites, checks: checks.to_vec(), pass }),
    }
}

pub fn failures(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.pass && !c.informational)
        .map(|c| format!("[{}] {}: {:e} (tolerance {:e})", c.suite, c.name, c.value, c.tolerance))
        .collect()
}

pub fn run(args: &VerifyArgs, units: Units, format: Format) -> CliResult<(String, Vec<String>)> {
    let mut which: Vec<Suite> = if args.suite.contains(&Suite::All) { ALL.to_vec() } else { args.suite.clone() };
    which.sort_by_key(|s| ALL.iter().position(|a| a == s));
    which.dedup();
    let mut spec_args = args.spec.clone();
    if spec_args.is_empty() {
        spec_args.family = Some("quadratic".into());
        spec_args.omega = spec_args.omega.or(Some(1.0));
    }
    let spec = spec_args.resolve(units)?;
    let mass = spec.mass();

    let jobs: Vec<Suite> = {
        let mut j: Vec<Suite> = which
            .iter()
            .copied()
            .filter(|s| !matches!(s, Suite::Algebra | Suite::Spectrum | Suite::ZeroModes))
            .collect();
        if which.iter().any(|s| matches!(s, Suite::Algebra | Suite::Spectrum | Suite::ZeroModes)) {
            j.insert(0, Suite::Spectrum);
        }
        j
    };
    let results = jobs
        .par_iter()
        .map(|job| match job {
            Suite::Spectrum => pair_suites(&spec, args, &which),
            Suite::ShapeInvariance => shape_suite(args, mass),
            Suite::Bessel => bessel_suite(args.lmax, args.tol_bessel, mass),
            Suite::Spinor => spinor_checks(args.jmax, 41, args.tol_ortho, args.tol_flip),
            _ => Ok(Vec::new()),
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut checks: Vec<Check> = results.into_iter().flatten().collect();
    checks.sort_by_key(|c| ALL.iter().position(|s| suite_name(*s) == c.suite));
    let text = render(&checks, spec.to_string(), which.iter().map(|s| suite_name(*s)).collect(), format);
    Ok((text, failures(&checks)))
}

pub fn run_spinor(args: &SpinorArgs, format: Format) -> CliResult<(String, Vec<String>)> {
    let checks = spinor_checks(args.jmax, args.samples, args.tol_ortho, args.tol_flip)?;
    Ok((render(&checks, String::new(), vec!["spinor"], format), failures(&checks)))
}
