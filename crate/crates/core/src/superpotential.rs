//! Superpotential families `U(r)` and the effective radial potentials they
//! generate.
//!
//! All potentials act on the reduced radial function `u = rR`. For the
//! vector-potential pairs
//!
//! ```text
//!   V⁽¹⁾_±(r) = [ℓ(ℓ∓1)/r² + U′² ∓ U″ - 2ℓU′/r] / (2m)
//! ```
//!
//! and `V⁽²⁾_±` is the same expression with `U → -U`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::quantum_numbers::Sign;

/// Branch label of a partner pair; `Plus` carries `ℓ(ℓ-1)`, `Minus`
/// carries `ℓ(ℓ+1)`.
pub type Branch = Sign;

/// The two vector-potential subsystems. `One` uses `U`, `Two` uses `-U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum System {
    One,
    Two,
}

impl System {
    /// `+1` for system 1, `-1` for system 2.
    pub fn sigma(self) -> f64 {
        match self {
            System::One => 1.0,
            System::Two => -1.0,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            System::One => 1,
            System::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Result<System> {
        match n {
            1 => Ok(System::One),
            2 => Ok(System::Two),
            _ => Err(param("system", format!("must be 1 or 2, got {n}"))),
        }
    }

    pub fn other(self) -> System {
        match self {
            System::One => System::Two,
            System::Two => System::One,
        }
    }
}

/// Samples `(r_i, U_i)` interpolated by a monotone cubic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tabulated {
    r: Vec<f64>,
    u: Vec<f64>,
    #[serde(skip)]
    slopes: Vec<f64>,
}

impl Tabulated {
    pub fn new(r: Vec<f64>, u: Vec<f64>) -> Result<Tabulated> {
        if r.len() != u.len() {
            return Err(param("samples", "r and U columns differ in length"));
        }
        if r.len() < 4 {
            return Err(param("samples", "need at least four samples"));
        }
        if r.iter().chain(&u).any(|v| !v.is_finite()) {
            return Err(param("samples", "non-finite sample"));
        }
        if r[0] <= 0.0 {
            return Err(param("samples", "sample radii must be positive"));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(param("samples", "radii must be strictly increasing"));
        }
        let slopes = fritsch_carlson(&r, &u);
        Ok(Tabulated { r, u, slopes })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.r[0], *self.r.last().expect("nonempty"))
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.r.iter().copied().zip(self.u.iter().copied())
    }

    fn negated(&self) -> Tabulated {
        let u: Vec<f64> = self.u.iter().map(|v| -v).collect();
        Tabulated { r: self.r.clone(), slopes: self.slopes.iter().map(|s| -s).collect(), u }
    }

    /// Interpolated `U(r)`; `r` must lie inside the sample range.
    pub fn value(&self, r: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(lo..=hi).contains(&r) {
            return Err(Error::Domain { r, reason: format!("outside tabulated range [{lo}, {hi}]") });
        }
        let k = match self.r.partition_point(|&x| x <= r) {
            0 => 0,
            p if p >= self.r.len() => self.r.len() - 2,
            p => p - 1,
        };
        let (x0, x1) = (self.r[k], self.r[k + 1]);
        let dx = x1 - x0;
        let t = (r - x0) / dx;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Ok(h00 * self.u[k] + h10 * dx * self.slopes[k] + h01 * self.u[k + 1] + h11 * dx * self.slopes[k + 1])
    }

    /// `(U, U′, U″)` with finite-difference derivatives of step `r·1e-5`,
    /// one-sided where a centered stencil would leave the range.
    pub fn eval(&self, r: f64) -> Result<(f64, f64, f64)> {
        let u0 = self.value(r)?;
        let step = r * 1e-5;
        let (lo, hi) = self.range();
        if r - step >= lo && r + step <= hi {
            let (um, up) = (self.value(r - step)?, self.value(r + step)?);
            Ok((u0, (up - um) / (2.0 * step), (up - 2.0 * u0 + um) / (step * step)))
        } else if r + 2.0 * step <= hi {
            let (u1, u2) = (self.value(r + step)?, self.value(r + 2.0 * step)?);
            Ok((u0, (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * step), (u0 - 2.0 * u1 + u2) / (step * step)))
        } else {
            let (u1, u2) = (self.value(r - step)?, self.value(r - 2.0 * step)?);
            Ok((u0, (3.0 * u0 - 4.0 * u1 + u2) / (2.0 * step), (u0 - 2.0 * u1 + u2) / (step * step)))
        }
    }
}

fn fritsch_carlson(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k])).collect();
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for k in 1..n - 1 {
        m[k] = if delta[k - 1] * delta[k] <= 0.0 { 0.0 } else { 0.5 * (delta[k - 1] + delta[k]) };
    }
    for k in 0..n - 1 {
        if delta[k] == 0.0 {
            m[k] = 0.0;
            m[k + 1] = 0.0;
            continue;
        }
        let a = m[k] / delta[k];
        let b = m[k + 1] / delta[k];
        let s = a * a + b * b;
        if s > 9.0 {
            let tau = 3.0 / s.sqrt();
            m[k] = tau * a * delta[k];
            m[k + 1] = tau * b * delta[k];
        }
    }
    m
}

/// A superpotential family with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// `U = γ r^a / a`.
    PowerLaw {
        gamma: f64,
        a: f64,
    },
    /// `U = m ω r² / 2`.
    Quadratic {
        omega: f64,
    },
    /// `U = γ r`.
    Linear {
        gamma: f64,
    },
    /// `U = γ ln r`, the `a → 0` member.
    Logarithmic {
        gamma: f64,
    },
    Tabulated(Tabulated),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::PowerLaw { .. } => "power-law",
            Family::Quadratic { .. } => "quadratic",
            Family::Linear { .. } => "linear",
            Family::Logarithmic { .. } => "logarithmic",
            Family::Tabulated(_) => "tabulated",
        }
    }
}

/// A superpotential together with the particle mass.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperpotentialSpec {
    #[serde(flatten)]
    family: Family,
    mass: f64,
}

fn check_finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(param(name, "must be finite"))
    }
}

impl SuperpotentialSpec {
    pub fn new(family: Family, mass: f64) -> Result<SuperpotentialSpec> {
        check_finite("mass", mass)?;
        if mass <= 0.0 {
            return Err(param("mass", format!("must be positive, got {mass}")));
        }
        match &family {
            Family::PowerLaw { gamma, a } => {
                check_finite("gamma", *gamma)?;
                check_finite("a", *a)?;
                if *a <= 0.0 {
                    return Err(param("a", format!("must be positive, got {a}")));
                }
            }
            Family::Quadratic { omega } => {
                check_finite("omega", *omega)?;
                if *omega == 0.0 {
                    return Err(param("omega", "must be nonzero"));
                }
            }
            Family::Linear { gamma } | Family::Logarithmic { gamma } => check_finite("gamma", *gamma)?,
            Family::Tabulated(_) => {}
        }
        Ok(SuperpotentialSpec { family, mass })
    }

    pub fn power_law(gamma: f64, a: f64, mass: f64) -> Result<Self> {
        Self::new(Family::PowerLaw { gamma, a }, mass)
    }

    pub fn quadratic(omega: f64, mass: f64) -> Result<Self> {
        Self::new(Family::Quadratic { omega }, mass)
    }

    pub fn linear(gamma: f64, mass: f64) -> Result<Self> {
        Self::new(Family::Linear { gamma }, mass)
    }

    pub fn logarithmic(gamma: f64, mass: f64) -> Result<Self> {
        Self::new(Family::Logarithmic { gamma }, mass)
    }

    pub fn tabulated(table: Tabulated, mass: f64) -> Result<Self> {
        Self::new(Family::Tabulated(table), mass)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self.family, Family::Tabulated(_))
    }

    /// The same superpotential with `U → -U`.
    pub fn negated(&self) -> SuperpotentialSpec {
        let family = match &self.family {
            Family::PowerLaw { gamma, a } => Family::PowerLaw { gamma: -gamma, a: *a },
            Family::Quadratic { omega } => Family::Quadratic { omega: -omega },
            Family::Linear { gamma } => Family::Linear { gamma: -gamma },
            Family::Logarithmic { gamma } => Family::Logarithmic { gamma: -gamma },
            Family::Tabulated(t) => Family::Tabulated(t.negated()),
        };
        SuperpotentialSpec { family, mass: self.mass }
    }

    /// `(γ, a)` with `U = γ r^a / a`, for the families that are power laws.
    pub fn power_law_form(&self) -> Option<(f64, f64)> {
        match self.family {
            Family::PowerLaw { gamma, a } => Some((gamma, a)),
            Family::Quadratic { omega } => Some((self.mass * omega, 2.0)),
            Family::Linear { gamma } => Some((gamma, 1.0)),
            _ => None,
        }
    }

    /// `(U, U′, U″)` at `r > 0`.
    pub fn eval(&self, r: f64) -> Result<(f64, f64, f64)> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain { r, reason: "superpotential needs r > 0".into() });
        }
        Ok(match &self.family {
            Family::PowerLaw { gamma, a } => {
                let ra2 = r.powf(a - 2.0);
                (gamma * ra2 * r * r / a, gamma * ra2 * r, gamma * (a - 1.0) * ra2)
            }
            Family::Quadratic { omega } => {
                let c = self.mass * omega;
                (0.5 * c * r * r, c * r, c)
            }
            Family::Linear { gamma } => (gamma * r, *gamma, 0.0),
            Family::Logarithmic { gamma } => (gamma * r.ln(), gamma / r, -gamma / (r * r)),
            Family::Tabulated(t) => return t.eval(r),
        })
    }

    /// Default box radius for `levels` bound states of pair label `ell`.
    ///
    /// Oscillator: `8/√(m|ω|)·max(1, √ℓ)`. Linear: the radius where the
    /// highest requested level has decayed by `e^{-40}`. Power law: the
    /// radius where `|U| = 25`.
    pub fn auto_r_max(&self, ell: u32, levels: usize) -> Result<f64> {
        let ell_f = ell.max(1) as f64;
        let top = levels.saturating_sub(1) as f64;
        match self.family {
            Family::Quadratic { omega } => Ok(8.0 / (self.mass * omega.abs()).sqrt() * ell_f.sqrt().max(1.0)),
            Family::Linear { gamma } if gamma != 0.0 => Ok(40.0 * (top + ell_f) / (ell_f * gamma.abs())),
            Family::PowerLaw { gamma, a } if gamma != 0.0 => Ok((25.0 * a / gamma.abs()).powf(1.0 / a)),
            _ => Err(Error::Unsupported(format!(
                "no automatic r_max for the {} family with these parameters; pass r_max explicitly",
                self.family.name()
            ))),
        }
    }
}

impl fmt::Display for SuperpotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family={}", self.family.name())?;
        match &self.family {
            Family::PowerLaw { gamma, a } => write!(f, " gamma={gamma} a={a}")?,
            Family::Quadratic { omega } => write!(f, " omega={omega}")?,
            Family::Linear { gamma } | Family::Logarithmic { gamma } => write!(f, " gamma={gamma}")?,
            Family::Tabulated(t) => write!(f, " samples={}", t.r.len())?,
        }
        write!(f, " mass={}", self.mass)
    }
}

/// Parses `key=value` tokens such as `family=power-law gamma=1 a=2.5 mass=0.5`.
///
/// Keys: `family`, `gamma`, `a`, `omega`, `mass`, `samples`. Tabulated
/// samples are written `samples=r:U,r:U,...`.
pub fn parse_spec(text: &str, default_mass: f64) -> Result<SuperpotentialSpec> {
    let mut family = None;
    let (mut gamma, mut a, mut omega, mut mass, mut samples) = (None, None, None, None, None);
    let num = |token: &str, v: &str| -> Result<f64> {
        v.parse::<f64>().map_err(|_| Error::Parse { token: token.to_string(), reason: "not a number".into() })
    };
    for token in text.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::Parse { token: token.to_string(), reason: "expected key=value".into() })?;
        match key {
            "family" => family = Some(value.to_string()),
            "gamma" => gamma = Some(num(token, value)?),
            "a" => a = Some(num(token, value)?),
            "omega" => omega = Some(num(token, value)?),
            "mass" => mass = Some(num(token, value)?),
            "samples" => samples = Some(parse_samples(token, value)?),
            _ => return Err(Error::Parse { token: token.to_string(), reason: "unknown key".into() }),
        }
    }
    let family_name =
        family.ok_or_else(|| Error::Parse { token: text.to_string(), reason: "missing family".into() })?;
    let need = |v: Option<f64>, key: &str| {
        v.ok_or_else(|| Error::Parse { token: format!("family={family_name}"), reason: format!("missing {key}") })
    };
    let fam = match family_name.as_str() {
        "power-law" | "powerlaw" => Family::PowerLaw { gamma: need(gamma, "gamma")?, a: need(a, "a")? },
        "quadratic" | "oscillator" => Family::Quadratic { omega: need(omega, "omega")? },
        "linear" => Family::Linear { gamma: need(gamma, "gamma")? },
        "logarithmic" | "log" => Family::Logarithmic { gamma: need(gamma, "gamma")? },
        "tabulated" => {
            let (r, u) = samples
                .ok_or_else(|| Error::Parse { token: "family=tabulated".into(), reason: "missing samples".into() })?;
            Family::Tabulated(Tabulated::new(r, u)?)
        }
        other => return Err(Error::Parse { token: format!("family={other}"), reason: "unknown family".into() }),
    };
    SuperpotentialSpec::new(fam, mass.unwrap_or(default_mass))
}

fn parse_samples(token: &str, value: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let bad = || Error::Parse { token: token.to_string(), reason: "expected r:U,r:U,...".into() };
    let mut r = Vec::new();
    let mut u = Vec::new();
    for pair in value.split(',') {
        let (x, y) = pair.split_once(':').ok_or_else(bad)?;
        r.push(x.parse().map_err(|_| bad())?);
        u.push(y.parse().map_err(|_| bad())?);
    }
    Ok((r, u))
}

fn check_ell(ell: u32) -> Result<()> {
    if ell >= 1 {
        Ok(())
    } else {
        Err(param("ell", "pair label ℓ must be at least 1"))
    }
}

/// `ℓ(ℓ∓1)` for branch `±`.
pub fn centrifugal_coefficient(ell: u32, branch: Branch) -> f64 {
    let l = ell as f64;
    l * (l - branch.value() as f64)
}

/// A scalar potential for the Case-I pairs.
#[derive(Clone)]
pub enum ScalarPotential {
    Zero,
    /// `-α/r + shift`.
    Coulomb {
        alpha: f64,
        shift: f64,
    },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl ScalarPotential {
    /// The radial Coulomb Witten potential `-α/r + mα²/(2ℓ²)`.
    pub fn coulomb_witten(alpha: f64, mass: f64, ell: u32) -> ScalarPotential {
        let l = ell as f64;
        ScalarPotential::Coulomb { alpha, shift: mass * alpha * alpha / (2.0 * l * l) }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            ScalarPotential::Zero => 0.0,
            ScalarPotential::Coulomb { alpha, shift } => -alpha / r + shift,
            ScalarPotential::Custom(f) => f(r),
        }
    }
}

impl fmt::Debug for ScalarPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarPotential::Zero => write!(f, "Zero"),
            ScalarPotential::Coulomb { alpha, shift } => write!(f, "Coulomb {{ alpha: {alpha}, shift: {shift} }}"),
            ScalarPotential::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    ScalarCaseI,
    VectorCaseII,
}

#[derive(Clone, Debug)]
enum Source {
    Vector(SuperpotentialSpec),
    Scalar(ScalarPotential),
    LogLimit { gamma: f64 },
}

/// Contributions to an effective potential at one radius, each already
/// divided by `2m`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PotentialTerms {
    pub centrifugal: f64,
    pub gradient_sq: f64,
    pub curvature: f64,
    pub spin_orbit: f64,
    pub scalar: f64,
}

impl PotentialTerms {
    pub fn total(&self) -> f64 {
        self.centrifugal + self.non_centrifugal()
    }

    pub fn non_centrifugal(&self) -> f64 {
        self.gradient_sq + self.curvature + self.spin_orbit + self.scalar
    }
}

/// An effective radial potential `r ↦ V(r)` for the reduced function.
#[derive(Clone, Debug)]
pub struct EffectivePotential {
    case: CaseTag,
    system: Option<System>,
    branch: Branch,
    ell: u32,
    mass: f64,
    source: Source,
}

impl EffectivePotential {
    pub fn case(&self) -> CaseTag {
        self.case
    }

    pub fn system(&self) -> Option<System> {
        self.system
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn terms(&self, r: f64) -> Result<PotentialTerms> {
        if !(r > 0.0) {
            return Err(Error::Domain { r, reason: "effective potentials need r > 0".into() });
        }
        let two_m = 2.0 * self.mass;
        let centrifugal = centrifugal_coefficient(self.ell, self.branch) / (two_m * r * r);
        let l = self.ell as f64;
        let b = self.branch.value() as f64;
        Ok(match &self.source {
            Source::Vector(spec) => {
                let sigma = self.system.map_or(1.0, System::sigma);
                let (_, du, d2u) = spec.eval(r)?;
                let (du, d2u) = (sigma * du, sigma * d2u);
                PotentialTerms {
                    centrifugal,
                    gradient_sq: du * du / two_m,
                    curvature: -b * d2u / two_m,
                    spin_orbit: -2.0 * l * du / (two_m * r),
                    scalar: 0.0,
                }
            }
            Source::Scalar(v) => PotentialTerms { centrifugal, scalar: v.eval(r), ..Default::default() },
            Source::LogLimit { gamma } => {
                let sigma = self.system.map_or(1.0, System::sigma);
                let g = sigma * gamma;
                let lg = l - g;
                PotentialTerms { centrifugal: lg * (lg - b) / (two_m * r * r), ..Default::default() }
            }
        })
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        Ok(self.terms(r)?.total())
    }
}

/// `V⁽ᵢ⁾_±` of the vector-potential case for superpotential `spec`.
pub fn case2_potential(
    spec: &SuperpotentialSpec,
    ell: u32,
    system: System,
    branch: Branch,
) -> Result<EffectivePotential> {
    check_ell(ell)?;
    Ok(EffectivePotential {
        case: CaseTag::VectorCaseII,
        system: Some(system),
        branch,
        ell,
        mass: spec.mass(),
        source: Source::Vector(spec.clone()),
    })
}

/// `ℓ(ℓ∓1)/(2mr²) + V(r)` for a scalar potential.
pub fn case1_potential(v: ScalarPotential, ell: u32, branch: Branch, mass: f64) -> Result<EffectivePotential> {
    check_ell(ell)?;
    if !(mass > 0.0) {
        return Err(param("mass", "must be positive"));
    }
    Ok(EffectivePotential { case: CaseTag::ScalarCaseI, system: None, branch, ell, mass, source: Source::Scalar(v) })
}

/// The `a → 0` pure-centrifugal forms `(ℓ∓γ)(ℓ∓γ∓1)/(2mr²)`; the first `∓`
/// follows the system (`-` for system 1), the second the branch.
pub fn loglimit_potential(
    gamma: f64,
    ell: u32,
    system: System,
    branch: Branch,
    mass: f64,
) -> Result<EffectivePotential> {
    check_ell(ell)?;
    if !(mass > 0.0) {
        return Err(param("mass", "must be positive"));
    }
    Ok(EffectivePotential {
        case: CaseTag::VectorCaseII,
        system: Some(system),
        branch,
        ell,
        mass,
        source: Source::LogLimit { gamma },
    })
}

/// `W_±(r) = γ² r^{2a-2} ± a γ r^{a-2}`.
pub fn box_limit_term(gamma: f64, a: f64, sign: Sign) -> impl Fn(f64) -> f64 {
    let s = sign.value() as f64;
    move |r: f64| gamma * gamma * r.powf(2.0 * a - 2.0) + s * a * gamma * r.powf(a - 2.0)
}

/// Largest `|V⁽¹⁾_±(r) - V⁽²⁾_∓(r)| / (1 + |V⁽¹⁾_±(r)|)` over `rs` and both
/// branches.
pub fn collapse_deviation(spec: &SuperpotentialSpec, ell: u32, rs: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for b in [Sign::Plus, Sign::Minus] {
        let v1 = case2_potential(spec, ell, System::One, b)?;
        let v2 = case2_potential(spec, ell, System::Two, b.flip())?;
        for &r in rs {
            let a = v1.eval(r)?;
            worst = worst.max((a - v2.eval(r)?).abs() / (1.0 + a.abs()));
        }
    }
    Ok(worst)
}

/// The same comparison restricted to the `γ`-dependent parts (everything
/// except the centrifugal term).
pub fn collapse_deviation_gamma_part(spec: &SuperpotentialSpec, ell: u32, rs: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for b in [Sign::Plus, Sign::Minus] {
        let v1 = case2_potential(spec, ell, System::One, b)?;
        let v2 = case2_potential(spec, ell, System::Two, b.flip())?;
        for &r in rs {
            let t1 = v1.terms(r)?;
            let t2 = v2.terms(r)?;
            let a = t1.non_centrifugal();
            let c = t2.non_centrifugal();
            worst = worst.max((a - c).abs() / (1.0 + a.abs()));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300).max(a.abs())
    }

    #[test]
    fn eval_examples() {
        let s = SuperpotentialSpec::power_law(1.0, 2.0, 1.0).unwrap();
        assert_eq!(s.eval(2.0).unwrap(), (2.0, 2.0, 1.0));
        let s = SuperpotentialSpec::linear(3.0, 1.0).unwrap();
        assert_eq!(s.eval(5.0).unwrap(), (15.0, 3.0, 0.0));
        let s = SuperpotentialSpec::logarithmic(2.0, 1.0).unwrap();
        let (u, du, d2u) = s.eval(E).unwrap();
        assert!((u - 2.0).abs() < 1e-15);
        assert!((du - 2.0 / E).abs() < 1e-15);
        assert!((d2u + 2.0 / (E * E)).abs() < 1e-15);
    }

    #[test]
    fn eval_rejects_nonpositive_r() {
        let s = SuperpotentialSpec::linear(1.0, 1.0).unwrap();
        assert!(s.eval(0.0).is_err());
        assert!(s.eval(-1.0).is_err());
    }

    #[test]
    fn constructor_validation() {
        assert!(SuperpotentialSpec::power_law(1.0, -1.0, 1.0).is_err());
        assert!(SuperpotentialSpec::power_law(1.0, 0.0, 1.0).is_err());
        assert!(SuperpotentialSpec::linear(1.0, 0.0).is_err());
        assert!(SuperpotentialSpec::quadratic(0.0, 1.0).is_err());
        assert!(SuperpotentialSpec::linear(f64::NAN, 1.0).is_err());
        assert!(SuperpotentialSpec::linear(-1.0, 1.0).is_ok());
    }

    #[test]
    fn case2_examples() {
        let osc = SuperpotentialSpec::quadratic(1.0, 1.0).unwrap();
        let vp = case2_potential(&osc, 1, System::One, Sign::Plus).unwrap();
        let vm = case2_potential(&osc, 1, System::One, Sign::Minus).unwrap();
        assert!((vp.eval(1.0).unwrap() + 1.0).abs() < 1e-15);
        assert!((vm.eval(1.0).unwrap() - 1.0).abs() < 1e-15);
        for r in [0.3, 1.7, 4.0] {
            assert!((vp.eval(r).unwrap() - (r * r / 2.0 - 1.5)).abs() < 1e-13);
            assert!((vm.eval(r).unwrap() - (1.0 / (r * r) + r * r / 2.0 - 0.5)).abs() < 1e-13);
        }
        let lin = SuperpotentialSpec::linear(1.0, 0.5).unwrap();
        let v = case2_potential(&lin, 1, System::One, Sign::Plus).unwrap();
        assert!(v.eval(2.0).unwrap().abs() < 1e-15);
        assert!(case2_potential(&lin, 0, System::One, Sign::Plus).is_err());
    }

    #[test]
    fn case2_matches_printed_power_law_pair() {
        let (g, a, l, m) = (1.3, 2.5, 3u32, 0.7);
        let s = SuperpotentialSpec::power_law(g, a, m).unwrap();
        let lf = l as f64;
        for r in [0.2, 1.0, 2.3] {
            for b in [Sign::Plus, Sign::Minus] {
                let bf = b.value() as f64;
                let core = lf * (lf - bf) / (r * r) + g * g * r.powf(2.0 * a - 2.0);
                let so = 2.0 * g * lf * (1.0 + bf * (a - 1.0) / (2.0 * lf)) * r.powf(a - 2.0);
                let v1 = case2_potential(&s, l, System::One, b).unwrap().eval(r).unwrap();
                let v2 = case2_potential(&s, l, System::Two, b).unwrap().eval(r).unwrap();
                assert!(rel(v1, (core - so) / (2.0 * m)) < 1e-13);
                assert!(rel(v2, (core + so) / (2.0 * m)) < 1e-13);
            }
        }
    }

    #[test]
    fn linear_pair_matches_printed_form() {
        let (g, m, l) = (0.8, 1.5, 2u32);
        let s = SuperpotentialSpec::linear(g, m).unwrap();
        for r in [0.1, 1.0, 9.0] {
            let c = centrifugal_coefficient(l, Sign::Minus) / (2.0 * m * r * r);
            let v = case2_potential(&s, l, System::Two, Sign::Minus).unwrap().eval(r).unwrap();
            assert!(rel(v, c + g * g / (2.0 * m) + l as f64 * g / (m * r)) < 1e-14);
        }
    }

    #[test]
    fn case1_examples() {
        let v = case1_potential(ScalarPotential::Zero, 2, Sign::Minus, 0.5).unwrap();
        assert!((v.eval(1.0).unwrap() - 6.0).abs() < 1e-15);
        let c = case1_potential(ScalarPotential::coulomb_witten(2.0, 0.5, 1), 1, Sign::Plus, 0.5).unwrap();
        assert!((c.eval(1.0).unwrap() + 1.0).abs() < 1e-15);
        let z = case1_potential(ScalarPotential::Zero, 1, Sign::Plus, 0.3).unwrap();
        for r in [0.01, 1.0, 100.0] {
            assert_eq!(z.eval(r).unwrap(), 0.0);
        }
        assert!(case1_potential(ScalarPotential::Zero, 0, Sign::Plus, 1.0).is_err());
    }

    #[test]
    fn loglimit_examples() {
        let v = loglimit_potential(2.0, 2, System::One, Sign::Plus, 0.5).unwrap();
        for r in [0.1, 1.0, 7.0] {
            assert_eq!(v.eval(r).unwrap(), 0.0);
        }
        let v = loglimit_potential(1.0, 2, System::Two, Sign::Minus, 0.5).unwrap();
        assert!((v.eval(1.0).unwrap() - 12.0).abs() < 1e-14);
        for (l, sys, b) in [(1, System::One, Sign::Plus), (3, System::Two, Sign::Minus)] {
            let v = loglimit_potential(0.0, l, sys, b, 0.5).unwrap();
            let f = case1_potential(ScalarPotential::Zero, l, b, 0.5).unwrap();
            for r in [0.2, 2.0] {
                assert!((v.eval(r).unwrap() - f.eval(r).unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn loglimit_equals_logarithmic_case2() {
        for gamma in [-1.5, 0.0, 0.5, 2.0] {
            let s = SuperpotentialSpec::logarithmic(gamma, 0.5).unwrap();
            for l in 1..4 {
                for sys in [System::One, System::Two] {
                    for b in [Sign::Plus, Sign::Minus] {
                        let a = loglimit_potential(gamma, l, sys, b, 0.5).unwrap();
                        let c = case2_potential(&s, l, sys, b).unwrap();
                        for r in [0.3, 1.0, 5.0] {
                            let (x, y) = (a.eval(r).unwrap(), c.eval(r).unwrap());
                            assert!((x - y).abs() < 1e-13 * (1.0 + x.abs()), "{gamma} {l} {sys:?} {b:?} {r}: {x} {y}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn box_limit_examples() {
        assert!((box_limit_term(1.0, 2.0, Sign::Plus)(1.0) - 3.0).abs() < 1e-15);
        for s in [Sign::Plus, Sign::Minus] {
            assert!(box_limit_term(1.0, 30.0, s)(0.5).abs() < 1e-6);
        }
        assert!(box_limit_term(1.0, 30.0, Sign::Plus)(1.2) > 1e4);
    }

    #[test]
    fn box_limit_term_is_gamma_part_of_pair() {
        // With 2m = 1, the γ part of V⁽²⁾_- minus W_- leaves (2ℓ + 1)γ r^{a-2}.
        let (g, a, l) = (1.0, 6.0, 3u32);
        let s = SuperpotentialSpec::power_law(g, a, 0.5).unwrap();
        for r in [0.4, 0.9] {
            let t = case2_potential(&s, l, System::Two, Sign::Minus).unwrap().terms(r).unwrap();
            let gamma_part = t.non_centrifugal();
            let expected = box_limit_term(g, a, Sign::Minus)(r) + (2.0 * g * l as f64 + g) * r.powf(a - 2.0);
            let scale = g * g * r.powf(2.0 * a - 2.0) + (a + 2.0 * l as f64 + 1.0) * g * r.powf(a - 2.0);
            assert!((gamma_part - expected).abs() < 1e-14 * scale, "{gamma_part} {expected}");
        }
    }

    #[test]
    fn large_a_difference_is_centrifugal_plus_spin_orbit() {
        let (g, a, l, m) = (1.0, 30.0, 2u32, 0.5);
        let s = SuperpotentialSpec::power_law(g, a, m).unwrap();
        let lf = l as f64;
        for r in [0.05, 0.3, 0.8, 1.1] {
            for b in [Sign::Plus, Sign::Minus] {
                let v1 = case2_potential(&s, l, System::One, b).unwrap().eval(r).unwrap();
                let v2 = case2_potential(&s, l, System::Two, b.flip()).unwrap().eval(r).unwrap();
                let bf = b.value() as f64;
                let expected = (-bf * 2.0 * lf / (r * r) - 4.0 * g * lf * r.powf(a - 2.0)) / (2.0 * m);
                assert!((v1 - v2 - expected).abs() < 1e-10 * (1.0 + expected.abs()));
            }
        }
    }

    #[test]
    fn large_a_gamma_parts_converge() {
        let rs: Vec<f64> = (0..=75).map(|i| 0.05 + 0.01 * i as f64).collect();
        let mut prev = f64::INFINITY;
        for a in [30.0, 60.0, 120.0, 240.0] {
            let s = SuperpotentialSpec::power_law(1.0, a, 0.5).unwrap();
            let d = collapse_deviation_gamma_part(&s, 2, &rs).unwrap();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-4);
        let s = SuperpotentialSpec::power_law(1.0, 30.0, 0.5).unwrap();
        assert!(collapse_deviation(&s, 2, &rs).unwrap() > 1e-4);
    }

    #[test]
    fn auto_r_max_values() {
        let osc = SuperpotentialSpec::quadratic(1.0, 1.0).unwrap();
        assert_eq!(osc.auto_r_max(1, 4).unwrap(), 8.0);
        assert_eq!(osc.auto_r_max(4, 4).unwrap(), 16.0);
        let lin = SuperpotentialSpec::linear(1.0, 0.5).unwrap();
        assert_eq!(lin.auto_r_max(1, 3).unwrap(), 120.0);
        let pl = SuperpotentialSpec::power_law(1.0, 2.0, 1.0).unwrap();
        let r = pl.auto_r_max(2, 3).unwrap();
        assert!((pl.eval(r).unwrap().0 - 25.0).abs() < 1e-12);
        assert!(SuperpotentialSpec::logarithmic(1.0, 1.0).unwrap().auto_r_max(1, 1).is_err());
    }

    #[test]
    fn parse_grammar() {
        let s = parse_spec("family=power-law gamma=1.0 a=2.5 mass=0.5", 1.0).unwrap();
        assert_eq!(s.family(), &Family::PowerLaw { gamma: 1.0, a: 2.5 });
        assert_eq!(s.mass(), 0.5);
        let s = parse_spec("family=quadratic omega=2", 1.0).unwrap();
        assert_eq!(s.mass(), 1.0);
        match parse_spec("family=power-law gamma=1 a=-1", 1.0) {
            Err(Error::Parameter { name, .. }) => assert_eq!(name, "a"),
            other => panic!("{other:?}"),
        }
        match parse_spec("family=linear gamma=abc", 1.0) {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "gamma=abc"),
            other => panic!("{other:?}"),
        }
        assert!(parse_spec("family=cubic gamma=1", 1.0).is_err());
        assert!(parse_spec("gamma=1", 1.0).is_err());
        assert!(parse_spec("family=linear colour=red", 1.0).is_err());
        let t = parse_spec("family=tabulated samples=0.5:0.25,1:1,1.5:2.25,2:4,3:9", 1.0).unwrap();
        assert!(!t.is_analytic());
    }

    #[test]
    fn display_roundtrips_through_parser() {
        let s = SuperpotentialSpec::power_law(1.25, 3.0, 0.5).unwrap();
        assert_eq!(parse_spec(&s.to_string(), 9.0).unwrap(), s);
    }

    #[test]
    fn tabulated_reproduces_a_monotone_profile() {
        let r: Vec<f64> = (1..=400).map(|i| i as f64 * 0.025).collect();
        let u: Vec<f64> = r.iter().map(|x| 0.5 * x * x).collect();
        let t = Tabulated::new(r, u).unwrap();
        let (uv, du, d2u) = t.eval(3.0123).unwrap();
        assert!((uv - 0.5 * 3.0123f64.powi(2)).abs() < 1e-4);
        assert!((du - 3.0123).abs() < 1e-2);
        assert!((d2u - 1.0).abs() < 0.1);
        assert!(t.eval(0.01).is_err());
        assert!(t.eval(10.5).is_err());
        assert!(t.eval(10.0).is_ok());
        assert!(t.eval(0.025).is_ok());
    }

    #[test]
    fn tabulated_preserves_monotonicity() {
        let r = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let u = vec![0.0, 0.0, 1.0, 1.0, 5.0];
        let t = Tabulated::new(r, u).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=400 {
            let v = t.value(1.0 + i as f64 * 0.01).unwrap();
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        assert!(Tabulated::new(vec![1.0, 1.0, 2.0, 3.0], vec![0.0; 4]).is_err());
    }

    #[test]
    fn negation_flips_sign() {
        let s = SuperpotentialSpec::quadratic(1.3, 0.7).unwrap();
        let (u, du, d2u) = s.eval(1.1).unwrap();
        let (nu, ndu, nd2u) = s.negated().eval(1.1).unwrap();
        assert_eq!((u, du, d2u), (-nu, -ndu, -nd2u));
    }

    fn analytic_spec() -> impl Strategy<Value = SuperpotentialSpec> {
        let m = 0.2f64..3.0;
        prop_oneof![
            (-3.0f64..3.0, 0.3f64..4.0, m.clone())
                .prop_map(|(g, a, m)| SuperpotentialSpec::power_law(g, a, m).unwrap()),
            (0.1f64..3.0, m.clone()).prop_map(|(w, m)| SuperpotentialSpec::quadratic(w, m).unwrap()),
            (-3.0f64..3.0, m.clone()).prop_map(|(g, m)| SuperpotentialSpec::linear(g, m).unwrap()),
            (-3.0f64..3.0, m).prop_map(|(g, m)| SuperpotentialSpec::logarithmic(g, m).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn sign_flip_duality(spec in analytic_spec(), ell in 1u32..8, r in 0.05f64..8.0, plus in any::<bool>()) {
            let b = if plus { Sign::Plus } else { Sign::Minus };
            let v2 = case2_potential(&spec, ell, System::Two, b).unwrap().eval(r).unwrap();
            let v1 = case2_potential(&spec.negated(), ell, System::One, b).unwrap().eval(r).unwrap();
            prop_assert!((v1 - v2).abs() <= 1e-13 * (1.0 + v1.abs()));
        }

        #[test]
        fn quadratic_is_power_law_two(omega in 0.1f64..5.0, m in 0.1f64..5.0, ell in 1u32..8, r in 0.1f64..10.0) {
            let q = SuperpotentialSpec::quadratic(omega, m).unwrap();
            let p = SuperpotentialSpec::power_law(m * omega, 2.0, m).unwrap();
            for sys in [System::One, System::Two] {
                for b in [Sign::Plus, Sign::Minus] {
                    let x = case2_potential(&q, ell, sys, b).unwrap().eval(r).unwrap();
                    let y = case2_potential(&p, ell, sys, b).unwrap().eval(r).unwrap();
                    prop_assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0), "{x} vs {y}");
                }
            }
        }

        #[test]
        fn linear_is_power_law_one(gamma in -3.0f64..3.0, m in 0.1f64..5.0, ell in 1u32..8, r in 0.1f64..10.0) {
            let q = SuperpotentialSpec::linear(gamma, m).unwrap();
            let p = SuperpotentialSpec::power_law(gamma, 1.0, m).unwrap();
            for b in [Sign::Plus, Sign::Minus] {
                let x = case2_potential(&q, ell, System::One, b).unwrap().eval(r).unwrap();
                let y = case2_potential(&p, ell, System::One, b).unwrap().eval(r).unwrap();
                prop_assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0));
            }
        }

        #[test]
        fn linear_is_coulomb_witten(gamma in 0.1f64..5.0, m in 0.1f64..5.0, ell in 1u32..8, r in 0.1f64..10.0) {
            let alpha = ell as f64 * gamma / m;
            let lin = SuperpotentialSpec::linear(gamma, m).unwrap();
            for b in [Sign::Plus, Sign::Minus] {
                let x = case2_potential(&lin, ell, System::One, b).unwrap().eval(r).unwrap();
                let y = case1_potential(ScalarPotential::coulomb_witten(alpha, m, ell), ell, b, m).unwrap().eval(r).unwrap();
                prop_assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0) * 4.0, "{x} vs {y}");
            }
        }

        #[test]
        fn centrifugal_coefficient_by_branch(ell in 1u32..50) {
            let l = ell as f64;
            prop_assert_eq!(centrifugal_coefficient(ell, Sign::Plus), l * (l - 1.0));
            prop_assert_eq!(centrifugal_coefficient(ell, Sign::Minus), l * (l + 1.0));
        }
    }
}
