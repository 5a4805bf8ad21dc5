//! Shape invariance of the linear superpotential under `ℓ → ℓ + 1`,
//! `γ → γ ℓ/(ℓ + 1)`, and the purely translational oscillator and
//! logarithmic-limit cases.

use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{param, Error, Result};
use crate::quantum_numbers::Sign;
use crate::radial::{factorized_pair, make_grid};
use crate::spectral::{eigen_decompose, relative_deviation};
use crate::superpotential::{case2_potential, loglimit_potential, SuperpotentialSpec, System};

pub type Rational = Ratio<i128>;

/// A coupling `γ`, exact when the input is rational.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coupling {
    Exact(Rational),
    Float(f64),
}

impl Coupling {
    /// Recovers a decimal fraction when `x` is one (`0.7 → 7/10`), else keeps
    /// the float.
    pub fn from_f64(x: f64) -> Coupling {
        if !x.is_finite() {
            return Coupling::Float(x);
        }
        let mut den: i128 = 1;
        for _ in 0..=12 {
            let num = (x * den as f64).round();
            if num.abs() < 1e15 && num / den as f64 == x {
                return Coupling::Exact(Rational::new(num as i128, den));
            }
            den *= 10;
        }
        Coupling::Float(x)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Coupling::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Coupling::Float(x) => x,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Coupling::Exact(_))
    }

    fn is_positive(self) -> bool {
        match self {
            Coupling::Exact(q) => q > Rational::zero(),
            Coupling::Float(x) => x > 0.0,
        }
    }

    /// `self · p / q`, exact while `i128` suffices.
    fn scale(self, p: i128, q: i128) -> Coupling {
        match self {
            Coupling::Exact(g) => {
                let f = Rational::new(p, q);
                match (g.numer().checked_mul(*f.numer()), g.denom().checked_mul(*f.denom())) {
                    (Some(n), Some(d)) => Coupling::Exact(Rational::new(n, d)),
                    _ => Coupling::Float(self.to_f64() * p as f64 / q as f64),
                }
            }
            Coupling::Float(x) => Coupling::Float(x * p as f64 / q as f64),
        }
    }

    fn square(self) -> Coupling {
        match self {
            Coupling::Exact(g) => match (g.numer().checked_mul(*g.numer()), g.denom().checked_mul(*g.denom())) {
                (Some(n), Some(d)) => Coupling::Exact(Rational::new(n, d)),
                _ => Coupling::Float(self.to_f64().powi(2)),
            },
            Coupling::Float(x) => Coupling::Float(x * x),
        }
    }

    fn sub(self, other: Coupling) -> Coupling {
        if let (Coupling::Exact(a), Coupling::Exact(b)) = (self, other) {
            let (ad, bd) = (*a.denom(), *b.denom());
            let n = a.numer().checked_mul(bd).zip(b.numer().checked_mul(ad)).and_then(|(x, y)| x.checked_sub(y));
            if let (Some(n), Some(d)) = (n, ad.checked_mul(bd)) {
                return Coupling::Exact(Rational::new(n, d));
            }
        }
        Coupling::Float(self.to_f64() - other.to_f64())
    }
}

impl From<f64> for Coupling {
    fn from(x: f64) -> Coupling {
        Coupling::from_f64(x)
    }
}

impl From<Rational> for Coupling {
    fn from(q: Rational) -> Coupling {
        Coupling::Exact(q)
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Exact(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Coupling::Exact(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Coupling::Float(x) => write!(f, "{x}"),
        }
    }
}

impl std::str::FromStr for Coupling {
    type Err = Error;

    /// `p/q`, an integer or a decimal.
    fn from_str(s: &str) -> Result<Coupling> {
        let bad = |reason: &str| Error::Parse { token: s.into(), reason: reason.into() };
        if let Some((p, q)) = s.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| bad("numerator is not an integer"))?;
            let q: i128 = q.trim().parse().map_err(|_| bad("denominator is not an integer"))?;
            if q == 0 {
                return Err(bad("zero denominator"));
            }
            return Ok(Coupling::Exact(Rational::new(p, q)));
        }
        s.trim().parse::<f64>().map(Coupling::from_f64).map_err(|_| bad("expected a number or p/q"))
    }
}

impl Serialize for Coupling {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `(ℓ + 1, γ ℓ/(ℓ + 1))`.
pub fn parameter_step(ell: u32, gamma: Coupling) -> Result<(u32, Coupling)> {
    if ell == 0 {
        return Err(param("ell", "must be at least 1"));
    }
    if !gamma.is_positive() {
        return Err(param("gamma", "must be positive"));
    }
    Ok((ell + 1, gamma.scale(ell as i128, ell as i128 + 1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainLink {
    pub ell: u32,
    pub gamma: Coupling,
}

/// The parameter sequence `(ℓ_n, γ_n)`, `n = 0..=N`, with remainders
/// `R_n = (γ_n² - γ_{n+1}²)/2m` and energies `E_n = Σ_{k<n} R_k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterChain {
    pub mass: f64,
    pub links: Vec<ChainLink>,
    pub remainders: Vec<f64>,
    pub energies: Vec<f64>,
}

impl ParameterChain {
    pub fn new(ell0: u32, gamma0: impl Into<Coupling>, mass: f64, steps: usize) -> Result<ParameterChain> {
        if !(mass > 0.0) {
            return Err(param("mass", "must be positive"));
        }
        let gamma0 = gamma0.into();
        let mut links = vec![ChainLink { ell: ell0, gamma: gamma0 }];
        for _ in 0..steps {
            let last = links[links.len() - 1];
            let (ell, gamma) = parameter_step(last.ell, last.gamma)?;
            links.push(ChainLink { ell, gamma });
        }
        if steps == 0 {
            parameter_step(ell0, gamma0)?;
        }
        let two_m = 2.0 * mass;
        let sq: Vec<Coupling> = links.iter().map(|l| l.gamma.square()).collect();
        let remainders = sq.windows(2).map(|w| w[0].sub(w[1]).to_f64() / two_m).collect();
        // Telescoped in the exact arithmetic, then divided by 2m.
        let energies = sq.iter().map(|s| sq[0].sub(*s).to_f64() / two_m).collect();
        Ok(ParameterChain { mass, links, remainders, energies })
    }

    /// `max_n |γ_n ℓ_n - γ₀ ℓ₀| / (γ₀ ℓ₀)`; zero for exact chains.
    pub fn invariant_defect(&self) -> f64 {
        let c0 = self.links[0].gamma.scale(self.links[0].ell as i128, 1);
        self.links
            .iter()
            .map(|l| l.gamma.scale(l.ell as i128, 1).sub(c0).to_f64().abs() / c0.to_f64().abs())
            .fold(0.0, f64::max)
    }
}

/// `E_0..=E_N` from the cumulative remainders of the chain.
pub fn chain_spectrum(ell0: u32, gamma0: impl Into<Coupling>, mass: f64, steps: usize) -> Result<Vec<f64>> {
    Ok(ParameterChain::new(ell0, gamma0, mass, steps)?.energies)
}

/// 50 log-spaced radii in `[1e-2, 1e2]`.
pub fn default_samples() -> Vec<f64> {
    log_samples(1e-2, 1e2, 50)
}

pub fn log_samples(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

fn check_samples(rs: &[f64]) -> Result<()> {
    match rs.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
        Some(&r) => Err(Error::Domain { r, reason: "samples must be positive".into() }),
        None => Ok(()),
    }
}

/// `max_r |V⁽¹⁾₋(ℓ, γ; r) - V⁽¹⁾₊(ℓ+1, γ'; r) - (γ² - γ'²)/2m|` with
/// `γ' = γ ℓ/(ℓ+1)`.
pub fn shape_invariance_residual(ell: u32, gamma: impl Into<Coupling>, mass: f64, rs: &[f64]) -> Result<f64> {
    let gamma = gamma.into();
    let (ell_next, gamma_next) = parameter_step(ell, gamma)?;
    shape_invariance_residual_with(ell, gamma, ell_next, gamma_next, mass, rs)
}

/// The same residual for arbitrary next parameters. The potentials
/// `V⁽¹⁾_±(ℓ, γ) = [ℓ(ℓ∓1)/r² + γ² - 2ℓγ/r]/2m` are compared coefficient by
/// coefficient so that no large terms cancel in floating point.
pub fn shape_invariance_residual_with(
    ell: u32,
    gamma: Coupling,
    ell_next: u32,
    gamma_next: Coupling,
    mass: f64,
    rs: &[f64],
) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(param("mass", "must be positive"));
    }
    check_samples(rs)?;
    let (l, ln) = (ell as i128, ell_next as i128);
    let c2 = (l * (l + 1) - ln * (ln - 1)) as f64;
    let remainder = gamma.square().sub(gamma_next.square());
    let c0 = gamma.square().sub(gamma_next.square()).sub(remainder).to_f64();
    let c1 = gamma.scale(l, 1).sub(gamma_next.scale(ln, 1)).to_f64();
    let two_m = 2.0 * mass;
    Ok(rs.iter().map(|r| (c2 / (r * r) + c0 - 2.0 * c1 / r).abs() / two_m).fold(0.0, f64::max))
}

/// Families that are shape invariant under `ℓ → ℓ + 1` alone.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum TranslationalFamily {
    /// System 1 of `U = mωr²/2`, remainder `2ω`.
    Oscillator { omega: f64, mass: f64 },
    /// `U = γ ln r`, remainder `0`, in either system.
    LogLimit { gamma: f64, mass: f64, system: System },
}

impl TranslationalFamily {
    pub fn remainder(&self) -> f64 {
        match *self {
            TranslationalFamily::Oscillator { omega, .. } => 2.0 * omega,
            TranslationalFamily::LogLimit { .. } => 0.0,
        }
    }
}

/// `max_r |V₋(ℓ; r) - V₊(ℓ+1; r) - R|` with the family's own remainder.
pub fn translational_si_check(family: TranslationalFamily, ell: u32, rs: &[f64]) -> Result<f64> {
    translational_si_check_with_remainder(family, ell, family.remainder(), rs)
}

pub fn translational_si_check_with_remainder(
    family: TranslationalFamily,
    ell: u32,
    remainder: f64,
    rs: &[f64],
) -> Result<f64> {
    if ell == 0 {
        return Err(param("ell", "must be at least 1"));
    }
    check_samples(rs)?;
    let (lower, upper) = match family {
        TranslationalFamily::Oscillator { omega, mass } => {
            let spec = SuperpotentialSpec::quadratic(omega, mass)?;
            (
                case2_potential(&spec, ell, System::One, Sign::Minus)?,
                case2_potential(&spec, ell + 1, System::One, Sign::Plus)?,
            )
        }
        TranslationalFamily::LogLimit { gamma, mass, system } => (
            loglimit_potential(gamma, ell, system, Sign::Minus, mass)?,
            loglimit_potential(gamma, ell + 1, system, Sign::Plus, mass)?,
        ),
    };
    let mut worst: f64 = 0.0;
    for &r in rs {
        let (a, b) = (lower.terms(r)?, upper.terms(r)?);
        let d = (a.centrifugal - b.centrifugal) + (a.non_centrifugal() - b.non_centrifugal()) - remainder;
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

/// `Σ c_p r^p · e^{-g r}` with integer powers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaurentProfile {
    pub min_power: i32,
    pub coeffs: Vec<f64>,
    pub decay: f64,
}

impl LaurentProfile {
    pub fn eval(&self, r: f64) -> f64 {
        let poly: f64 = self.coeffs.iter().enumerate().map(|(i, c)| c * r.powi(self.min_power + i as i32)).sum();
        poly * (-self.decay * r).exp()
    }

    /// `(d/dr + ℓ/r - γ)/√(2m)` applied exactly.
    fn apply_ladder(&self, ell: u32, gamma: f64, mass: f64) -> LaurentProfile {
        let s = 1.0 / (2.0 * mass).sqrt();
        let mut coeffs = vec![0.0; self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            let p = self.min_power + i as i32;
            coeffs[i] += (p as f64 + ell as f64) * c * s;
            coeffs[i + 1] -= (self.decay + gamma) * c * s;
        }
        LaurentProfile { min_power: self.min_power - 1, coeffs, decay: self.decay }
    }
}

/// The reduced excited state `u_n` of `H⁽¹⁾₊(ℓ₀, γ₀)` for the linear
/// superpotential, `A(ℓ₀) A(ℓ₁) ⋯ A(ℓ_{n-1}) r^{ℓ_n} e^{-γ_n r}`.
pub fn ladder_excited_profile(ell0: u32, gamma0: f64, mass: f64, n: usize) -> Result<LaurentProfile> {
    let chain = ParameterChain::new(ell0, gamma0, mass, n)?;
    let top = chain.links[n];
    let mut f = LaurentProfile { min_power: top.ell as i32, coeffs: vec![1.0], decay: top.gamma.to_f64() };
    for link in chain.links[..n].iter().rev() {
        f = f.apply_ladder(link.ell, link.gamma.to_f64(), mass);
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderCheck {
    pub r_max: f64,
    pub n_grid: usize,
    pub eigenvalues: Vec<f64>,
    /// Spectrum from the chain, for comparison with `eigenvalues`.
    pub chain_energies: Vec<f64>,
    /// ℓ² deviation between each ladder profile and the eigenvector.
    pub deviations: Vec<f64>,
}

/// Compares the ladder-generated profiles with the `levels` lowest
/// eigenvectors of the discrete `H⁽¹⁾₊(ℓ₀, γ₀)`.
pub fn ground_state_ladder_check(
    ell0: u32,
    gamma0: f64,
    mass: f64,
    levels: usize,
    n_grid: usize,
    r_max: Option<f64>,
) -> Result<LadderCheck> {
    if levels == 0 {
        return Err(param("levels", "must be at least 1"));
    }
    let spec = SuperpotentialSpec::linear(gamma0, mass)?;
    let r_max = match r_max {
        Some(r) => r,
        None => spec.auto_r_max(ell0, levels)?,
    };
    let grid = make_grid(r_max, n_grid)?;
    let pair = factorized_pair(&grid, ell0, &spec, System::One)?;
    let eig = eigen_decompose(&pair.h_plus, levels, grid.h())?;
    let mids = grid.midpoints();
    let mut deviations = Vec::with_capacity(levels);
    for (n, v) in eig.vectors.iter().enumerate() {
        let profile = ladder_excited_profile(ell0, gamma0, mass, n)?;
        let w: Vec<f64> = mids.iter().map(|&r| profile.eval(r)).collect();
        deviations.push(relative_deviation(&w, v));
    }
    let chain_energies = chain_spectrum(ell0, gamma0, mass, levels - 1)?;
    Ok(LadderCheck { r_max, n_grid, eigenvalues: eig.values, chain_energies, deviations })
}
