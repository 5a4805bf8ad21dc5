//! Closed-form spectra, zero modes and special functions.

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::quantum_numbers::Sign;
use crate::superpotential::{Branch, Family, SuperpotentialSpec, System};

pub const BESSEL_ELL_MAX: u32 = 64;

/// `j_ℓ(x)` by downward ratio recurrence, anchored on `j₀` or `j₁`.
pub fn spherical_bessel(ell: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(param("x", format!("spherical Bessel functions need x > 0, got {x}")));
    }
    if ell > BESSEL_ELL_MAX {
        return Err(param("ell", format!("must be at most {BESSEL_ELL_MAX}")));
    }
    Ok(bessel_unchecked(ell, x))
}

fn j0(x: f64) -> f64 {
    x.sin() / x
}

fn j1(x: f64) -> f64 {
    if x < 0.1 {
        // Series; the closed form cancels badly here.
        let x2 = x * x;
        x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0 * (1.0 - x2 / 88.0))))
    } else {
        (x.sin() / x - x.cos()) / x
    }
}

fn bessel_unchecked(ell: u32, x: f64) -> f64 {
    match ell {
        0 => return j0(x),
        1 => return j1(x),
        _ => {}
    }
    let top = ell as usize + 15usize.max((1.5 * x).ceil() as usize) + 20;
    // rho[k] = j_k / j_{k-1}
    let mut rho = vec![0.0; top + 2];
    for k in (1..=top).rev() {
        rho[k] = x / ((2 * k + 1) as f64 - x * rho[k + 1]);
    }
    let (a0, a1) = (j0(x), j1(x));
    if a0.abs() >= a1.abs() {
        rho[1..=ell as usize].iter().fold(a0, |acc, r| acc * r)
    } else {
        rho[2..=ell as usize].iter().fold(a1, |acc, r| acc * r)
    }
}

/// `j_ℓ′(x) = (ℓ/x) j_ℓ(x) - j_{ℓ+1}(x)`.
pub fn spherical_bessel_derivative(ell: u32, x: f64) -> Result<f64> {
    let j = spherical_bessel(ell, x)?;
    Ok(ell as f64 / x * j - bessel_unchecked(ell + 1, x))
}

/// Residuals of `(∂ + (ℓ+1)/z) j_ℓ = j_{ℓ-1}` and of the sign-as-written
/// lowering relation `(∂ - (ℓ-1)/z) j_{ℓ-1} = j_ℓ`.
///
/// The second identity actually reads `(∂ - (ℓ-1)/z) j_{ℓ-1} = -j_ℓ`, so its
/// residual is `-2 j_ℓ(x)`; see [`bessel_recursion_residual_corrected`].
pub fn bessel_recursion_residual(ell: u32, x: f64) -> Result<(f64, f64)> {
    let (raise, lower) = recursion_terms(ell, x)?;
    let jl = spherical_bessel(ell, x)?;
    let jm = spherical_bessel(ell - 1, x)?;
    Ok(((raise - jm).abs(), (lower - jl).abs()))
}

/// As [`bessel_recursion_residual`] with the second identity read as
/// `(∂ - (ℓ-1)/z) j_{ℓ-1} = -j_ℓ`.
pub fn bessel_recursion_residual_corrected(ell: u32, x: f64) -> Result<(f64, f64)> {
    let (raise, lower) = recursion_terms(ell, x)?;
    let jl = spherical_bessel(ell, x)?;
    let jm = spherical_bessel(ell - 1, x)?;
    Ok(((raise - jm).abs(), (lower + jl).abs()))
}

/// `((∂ + (ℓ+1)/z) j_ℓ, (∂ - (ℓ-1)/z) j_{ℓ-1})`.
fn recursion_terms(ell: u32, x: f64) -> Result<(f64, f64)> {
    if ell == 0 {
        return Err(param("ell", "the recursion needs ℓ ≥ 1"));
    }
    let l = ell as f64;
    let raise = spherical_bessel_derivative(ell, x)? + (l + 1.0) / x * spherical_bessel(ell, x)?;
    let lower = spherical_bessel_derivative(ell - 1, x)? - (l - 1.0) / x * spherical_bessel(ell - 1, x)?;
    Ok((raise, lower))
}

/// Residuals of the free-particle supercharge acting on the Bessel partner
/// states `ψ⁺ = c j_{ℓ-1}(kr)`, `ψ⁻ = c j_ℓ(kr)` with `c = √(2k²/π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FreeSusyResidual {
    /// `max |Q ψ⁺ - i λ₊ √E ψ⁻|` over the samples.
    pub plus: f64,
    /// `max |Q ψ⁻ - i λ₋ √E ψ⁺|` over the samples.
    pub minus: f64,
    /// Largest `√E |ψ|` over the samples, for scale.
    pub scale: f64,
}

impl FreeSusyResidual {
    pub fn max(&self) -> f64 {
        self.plus.max(self.minus)
    }
}

/// Checks `Q (ψ⁺, ψ⁻) = -i √E (ψ⁻, ψ⁺)` with `Q` the restricted free
/// supercharge `-i/√(2m) [[0, ∂ + (ℓ+1)/r], [∂ - (ℓ-1)/r, 0]]`.
pub fn free_susy_transform_residual(ell: u32, k: f64, mass: f64, rs: &[f64]) -> Result<FreeSusyResidual> {
    free_susy_residual(ell, k, mass, rs, -1.0, -1.0)
}

/// The relation that actually holds: `Q ψ⁺ = +i √E ψ⁻` and
/// `Q ψ⁻ = -i √E ψ⁺`.
pub fn free_susy_transform_residual_corrected(ell: u32, k: f64, mass: f64, rs: &[f64]) -> Result<FreeSusyResidual> {
    free_susy_residual(ell, k, mass, rs, 1.0, -1.0)
}

/// The supercharge is `-i` times a real operator, so with eigenvalues
/// `i λ √E` everything reduces to real arithmetic.
fn free_susy_residual(
    ell: u32,
    k: f64,
    mass: f64,
    rs: &[f64],
    lam_plus: f64,
    lam_minus: f64,
) -> Result<FreeSusyResidual> {
    if ell == 0 {
        return Err(param("ell", "the free pair needs ℓ ≥ 1"));
    }
    if !(k > 0.0) {
        return Err(param("k", "must be positive"));
    }
    if !(mass > 0.0) {
        return Err(param("mass", "must be positive"));
    }
    let c = (2.0 * k * k / std::f64::consts::PI).sqrt();
    let sqrt_e = k / (2.0 * mass).sqrt();
    let l = ell as f64;
    let mut out = FreeSusyResidual { plus: 0.0, minus: 0.0, scale: 0.0 };
    for &r in rs {
        let z = k * r;
        let psi_p = c * spherical_bessel(ell - 1, z)?;
        let psi_m = c * spherical_bessel(ell, z)?;
        let dpsi_p = c * k * spherical_bessel_derivative(ell - 1, z)?;
        let dpsi_m = c * k * spherical_bessel_derivative(ell, z)?;
        // Q acting on (ψ⁺, 0) lands in the lower slot, on (0, ψ⁻) in the upper.
        let q_plus = -(dpsi_p - (l - 1.0) / r * psi_p) / (2.0 * mass).sqrt();
        let q_minus = -(dpsi_m + (l + 1.0) / r * psi_m) / (2.0 * mass).sqrt();
        out.plus = out.plus.max((q_plus - lam_plus * sqrt_e * psi_m).abs());
        out.minus = out.minus.max((q_minus - lam_minus * sqrt_e * psi_p).abs());
        out.scale = out.scale.max(sqrt_e * psi_p.abs().max(psi_m.abs()));
    }
    Ok(out)
}

#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln |Γ(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + 7.5;
    let s = LANCZOS[1..].iter().enumerate().fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + (i + 1) as f64));
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + s.ln()
}

pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return pi / ((pi * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let t = x + 7.5;
    let s = LANCZOS[1..].iter().enumerate().fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + (i + 1) as f64));
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * s
}

fn check_pair_ell(ell: u32) -> Result<()> {
    if ell == 0 {
        Err(param("ell", "pair label ℓ must be at least 1"))
    } else {
        Ok(())
    }
}

/// Level `n` of the oscillator pair: system 1 gives `2nω` (branch `-` from
/// `n = 1`), system 2 gives `ω(2n + 2ℓ + 1)`.
pub fn oscillator_spectrum(mass: f64, omega: f64, ell: u32, system: System, branch: Branch, n: usize) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(param("mass", "must be positive"));
    }
    if !(omega > 0.0) {
        return Err(param("omega", "must be positive"));
    }
    check_pair_ell(ell)?;
    match system {
        System::One => {
            if branch == Sign::Minus && n == 0 {
                return Err(param("n", "system-1 branch − starts at n = 1"));
            }
            Ok(2.0 * n as f64 * omega)
        }
        System::Two => Ok(omega * (2.0 * n as f64 + 2.0 * ell as f64 + 1.0)),
    }
}

/// `(γ²/2m)[1 - (ℓ/(n+ℓ))²]`.
pub fn linear_spectrum(gamma: f64, mass: f64, ell: u32, n: usize) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(param("gamma", "must be positive"));
    }
    if !(mass > 0.0) {
        return Err(param("mass", "must be positive"));
    }
    check_pair_ell(ell)?;
    let q = ell as f64 / (n + ell as usize) as f64;
    Ok(gamma * gamma / (2.0 * mass) * (1.0 - q * q))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum SpectrumFamily {
    Oscillator { omega: f64 },
    Linear { gamma: f64 },
}

/// The bound-state spectrum of one partner Hamiltonian of an exactly solved
/// superpotential.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalyticSpectrum {
    pub family: SpectrumFamily,
    pub mass: f64,
    pub ell: u32,
    pub system: System,
    pub branch: Branch,
}

impl AnalyticSpectrum {
    /// Negative `ω` or `γ` swap the roles of the two systems.
    pub fn for_spec(spec: &SuperpotentialSpec, ell: u32, system: System, branch: Branch) -> Result<AnalyticSpectrum> {
        check_pair_ell(ell)?;
        let (family, flip) = match spec.power_law_form() {
            Some((gamma, a)) if a == 2.0 && gamma != 0.0 => {
                (SpectrumFamily::Oscillator { omega: gamma.abs() / spec.mass() }, gamma < 0.0)
            }
            Some((gamma, a)) if a == 1.0 && gamma != 0.0 => {
                (SpectrumFamily::Linear { gamma: gamma.abs() }, gamma < 0.0)
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "no closed-form spectrum for the {} family with these parameters",
                    spec.family().name()
                )))
            }
        };
        let system = if flip { system.other() } else { system };
        Ok(AnalyticSpectrum { family, mass: spec.mass(), ell, system, branch })
    }

    /// First admissible level index.
    pub fn first_index(&self) -> usize {
        usize::from(self.system == System::One && self.branch == Sign::Minus)
    }

    /// Whether the Hamiltonian has bound states at all. The system-2 linear
    /// pair is a repulsive Coulomb problem.
    pub fn has_bound_states(&self) -> bool {
        !matches!((self.family, self.system), (SpectrumFamily::Linear { .. }, System::Two))
    }

    pub fn level(&self, n: usize) -> Result<f64> {
        if !self.has_bound_states() {
            return Err(Error::Unsupported("this Hamiltonian has no bound states".into()));
        }
        match self.family {
            SpectrumFamily::Oscillator { omega } => {
                oscillator_spectrum(self.mass, omega, self.ell, self.system, self.branch, n)
            }
            SpectrumFamily::Linear { gamma } => {
                if n < self.first_index() {
                    return Err(param("n", "system-1 branch − starts at n = 1"));
                }
                linear_spectrum(gamma, self.mass, self.ell, n)
            }
        }
    }

    /// The `count` lowest energies, empty without bound states.
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        if !self.has_bound_states() {
            return Vec::new();
        }
        let start = self.first_index();
        (start..start + count).map(|n| self.level(n).expect("index in range")).collect()
    }

    /// `E_∞ = γ²/2m` for the linear family.
    pub fn continuum_threshold(&self) -> Option<f64> {
        match self.family {
            SpectrumFamily::Linear { gamma } => Some(gamma * gamma / (2.0 * self.mass)),
            SpectrumFamily::Oscillator { .. } => None,
        }
    }
}

/// `z²/(2m)` for the `k` lowest positive zeros `z` of `j_ℓ`.
pub fn box_limit_spectrum(ell: u32, k: usize, mass: f64) -> Result<Vec<f64>> {
    if !(mass > 0.0) {
        return Err(param("mass", "must be positive"));
    }
    Ok(bessel_zeros(ell, k)?.into_iter().map(|z| z * z / (2.0 * mass)).collect())
}

/// The `k` lowest positive zeros of `j_ℓ`.
pub fn bessel_zeros(ell: u32, k: usize) -> Result<Vec<f64>> {
    if ell > BESSEL_ELL_MAX {
        return Err(param("ell", format!("must be at most {BESSEL_ELL_MAX}")));
    }
    let f = |x: f64| bessel_unchecked(ell, x);
    let mut zeros = Vec::with_capacity(k);
    let step = 0.1;
    let mut a = step;
    let mut fa = f(a);
    while zeros.len() < k {
        let b = a + step;
        let fb = f(b);
        if fa == 0.0 {
            zeros.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid);
                if fm * flo > 0.0 {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    Ok(zeros)
}

/// The four kernel candidates of the two ladder operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    /// `r^{ℓ-1} e^{-U}`.
    Sys1Plus,
    /// `r^{-ℓ-1} e^{U}`.
    Sys1Minus,
    /// `r^{ℓ-1} e^{U}`.
    Sys2Plus,
    /// `r^{-ℓ-1} e^{-U}`.
    Sys2Minus,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] =
        [KernelKind::Sys1Plus, KernelKind::Sys1Minus, KernelKind::Sys2Plus, KernelKind::Sys2Minus];

    pub fn system(self) -> System {
        match self {
            KernelKind::Sys1Plus | KernelKind::Sys1Minus => System::One,
            KernelKind::Sys2Plus | KernelKind::Sys2Minus => System::Two,
        }
    }

    pub fn branch(self) -> Branch {
        match self {
            KernelKind::Sys1Plus | KernelKind::Sys2Plus => Sign::Plus,
            KernelKind::Sys1Minus | KernelKind::Sys2Minus => Sign::Minus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Sys1Plus => "sys1-plus",
            KernelKind::Sys1Minus => "sys1-minus",
            KernelKind::Sys2Plus => "sys2-plus",
            KernelKind::Sys2Minus => "sys2-minus",
        }
    }

    /// Signs `(p, q)` with profile `r^{p ℓ - 1} e^{q U}`.
    fn exponents(self) -> (f64, f64) {
        match self {
            KernelKind::Sys1Plus => (1.0, -1.0),
            KernelKind::Sys1Minus => (-1.0, 1.0),
            KernelKind::Sys2Plus => (1.0, 1.0),
            KernelKind::Sys2Minus => (-1.0, -1.0),
        }
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<KernelKind> {
        KernelKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::Parse {
            token: s.into(),
            reason: "expected sys1-plus, sys1-minus, sys2-plus or sys2-minus".into(),
        })
    }
}

/// A closed-form kernel profile `R(r)` with its normalizability under
/// `r² dr`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroModeProfile {
    pub kind: KernelKind,
    pub ell: u32,
    pub spec: SuperpotentialSpec,
    pub normalizable: bool,
    /// `N` with `∫ N² R² r² dr = 1`, when normalizable.
    pub norm_constant: Option<f64>,
}

impl ZeroModeProfile {
    /// `N R(r)`, or the bare profile when not normalizable.
    pub fn eval(&self, r: f64) -> Result<f64> {
        Ok(self.ln_abs(r)?.exp())
    }

    /// The reduced function `r R(r)`.
    pub fn eval_reduced(&self, r: f64) -> Result<f64> {
        Ok((self.ln_abs(r)? + r.ln()).exp())
    }

    /// `r² R(r)²`.
    pub fn density(&self, r: f64) -> Result<f64> {
        Ok((2.0 * (self.ln_abs(r)? + r.ln())).exp())
    }

    fn ln_abs(&self, r: f64) -> Result<f64> {
        let (u, _, _) = self.spec.eval(r)?;
        let (p, q) = self.kind.exponents();
        let ln_n = self.norm_constant.map_or(0.0, f64::ln);
        Ok(ln_n + (p * self.ell as f64 - 1.0) * r.ln() + q * u)
    }
}

/// The kernel profile `which` for `spec` and its normalization, decided from
/// the integrability exponents at `0` and `∞`.
pub fn zero_mode_closed_form(spec: &SuperpotentialSpec, ell: u32, which: KernelKind) -> Result<ZeroModeProfile> {
    check_pair_ell(ell)?;
    let (p, q) = which.exponents();
    let (normalizable, norm_constant) = match spec.family() {
        Family::Tabulated(_) => {
            return Err(Error::Unsupported("closed-form zero modes need an analytic superpotential".into()));
        }
        // e^{qU} = r^{qγ}: a pure power is never square integrable on (0, ∞).
        Family::Logarithmic { .. } => (false, None),
        _ => {
            let (gamma, a) = spec.power_law_form().expect("analytic power-law form");
            // r^{-ℓ-1} fails at the origin; e^{qU} must decay at infinity.
            if p < 0.0 || q * gamma >= 0.0 {
                (false, None)
            } else {
                (true, Some(power_law_norm(gamma.abs(), a, ell)))
            }
        }
    };
    Ok(ZeroModeProfile { kind: which, ell, spec: spec.clone(), normalizable, norm_constant })
}

/// `N` for `r^{ℓ-1} e^{-γ r^a / a}` under `r² dr`, from
/// `N⁻² = (1/a)(a/2γ)^{(2ℓ+1)/a} Γ((2ℓ+1)/a)`.
pub fn power_law_norm(gamma: f64, a: f64, ell: u32) -> f64 {
    let s = (2.0 * ell as f64 + 1.0) / a;
    let ln_inv_sq = -a.ln() + s * (a / (2.0 * gamma)).ln() + ln_gamma(s);
    (-0.5 * ln_inv_sq).exp()
}

/// The short form `2γ/√((2ℓ)!)` of the linear ground-state constant.
///
/// The exact constant under `r² dr` is `(2γ)^{ℓ+1/2}/√((2ℓ)!)`; the two
/// differ by `(2γ)^{ℓ-1/2}`, see [`linear_norm_discrepancy`].
pub fn linear_norm_short_form(gamma: f64, ell: u32) -> f64 {
    2.0 * gamma / (0.5 * ln_gamma(2.0 * ell as f64 + 1.0)).exp()
}

/// Exact over short form, `(2γ)^{ℓ-1/2}`.
pub fn linear_norm_discrepancy(gamma: f64, ell: u32) -> f64 {
    power_law_norm(gamma, 1.0, ell) / linear_norm_short_form(gamma, ell)
}
