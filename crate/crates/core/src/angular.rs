//! Spherical harmonics, Pauli spinors and the radial spin projection `σ·e_r`.
//!
//! Spherical harmonics carry the Condon–Shortley phase and are orthonormal
//! under `∫ dΩ`. The Pauli spinor of channel `(j, m_j, s)` with
//! `ℓ = ℓ(s) = j - s/2` is
//!
//! ```text
//!   upper =     √((ℓ + s m_j + 1/2)/(2ℓ + 1)) · Y_ℓ^{m_j - 1/2}
//!   lower = s · √((ℓ - s m_j + 1/2)/(2ℓ + 1)) · Y_ℓ^{m_j + 1/2}
//! ```
//!
//! With this phase choice `σ·e_r` maps the `s` spinor exactly onto the `-s`
//! spinor of the same `(j, m_j)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::quantum_numbers::{Channel, HalfInt};

pub const DEFAULT_ELL_MAX: u32 = 64;

/// Normalized associated Legendre function
/// `√((2ℓ+1)/(4π) (ℓ-m)!/(ℓ+m)!) P_ℓ^m(x)` for `0 ≤ m ≤ ℓ`, including the
/// Condon–Shortley factor `(-1)^m`.
fn normalized_legendre(ell: u32, m: u32, x: f64) -> f64 {
    debug_assert!(m <= ell);
    let sin_theta = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = (0.25 / PI).sqrt();
    for k in 1..=m {
        let k = k as f64;
        pmm *= -((2.0 * k + 1.0) / (2.0 * k)).sqrt() * sin_theta;
    }
    if ell == m {
        return pmm;
    }
    let mf = m as f64;
    let mut prev = pmm;
    let mut cur = x * (2.0 * mf + 3.0).sqrt() * pmm;
    for l in (m + 2)..=ell {
        let lf = l as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let lp = lf - 1.0;
        let b = ((lp * lp - mf * mf) / (4.0 * lp * lp - 1.0)).sqrt();
        let next = a * (x * cur - b * prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// `Y_ℓ^m(θ, φ)` with the default cap `ℓ ≤ 64`.
pub fn spherical_harmonic(ell: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    spherical_harmonic_capped(ell, m, theta, phi, DEFAULT_ELL_MAX)
}

pub fn spherical_harmonic_capped(ell: u32, m: i32, theta: f64, phi: f64, ell_max: u32) -> Result<Complex64> {
    if ell > ell_max {
        return Err(Error::QuantumNumber(format!("ℓ = {ell} exceeds the cap {ell_max}")));
    }
    if m.unsigned_abs() > ell {
        return Err(Error::QuantumNumber(format!("|m| = {} exceeds ℓ = {ell}", m.abs())));
    }
    let p = normalized_legendre(ell, m.unsigned_abs(), theta.cos());
    let y = Complex64::from_polar(p, m.unsigned_abs() as f64 * phi);
    if m >= 0 {
        Ok(y)
    } else if m % 2 == 0 {
        Ok(y.conj())
    } else {
        Ok(-y.conj())
    }
}

/// Two-component spinor value at one direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpinorValue {
    #[serde(serialize_with = "ser_complex")]
    pub upper: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub lower: Complex64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

impl SpinorValue {
    pub fn new(upper: Complex64, lower: Complex64) -> Self {
        SpinorValue { upper, lower }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.upper.norm_sqr() + self.lower.norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &SpinorValue) -> Complex64 {
        self.upper.conj() * other.upper + self.lower.conj() * other.lower
    }

    pub fn distance(&self, other: &SpinorValue) -> f64 {
        ((self.upper - other.upper).norm_sqr() + (self.lower - other.lower).norm_sqr()).sqrt()
    }
}

/// Harmonic with `Y_ℓ^m = 0` for `|m| > ℓ`; the Clebsch–Gordan factor in
/// front of such a term is zero anyway.
fn harmonic_or_zero(ell: u32, m_twice: i32, theta: f64, phi: f64) -> Complex64 {
    let m = m_twice / 2;
    if m.unsigned_abs() > ell {
        Complex64::new(0.0, 0.0)
    } else {
        spherical_harmonic_capped(ell, m, theta, phi, u32::MAX).expect("|m| ≤ ℓ checked")
    }
}

/// The Pauli spinor `𝒴⁽ˢ⁾_{j m_j}(θ, φ)`.
pub fn pauli_spinor(channel: &Channel, theta: f64, phi: f64) -> Result<SpinorValue> {
    let ell = channel.ell();
    if ell > DEFAULT_ELL_MAX {
        return Err(Error::QuantumNumber(format!("ℓ = {ell} exceeds the cap {DEFAULT_ELL_MAX}")));
    }
    let l = ell as f64;
    let s = channel.s().value() as f64;
    let m_j = channel.m_j().value();
    let denom = 2.0 * l + 1.0;
    let c_up = ((l + s * m_j + 0.5) / denom).max(0.0).sqrt();
    let c_lo = s * ((l - s * m_j + 0.5) / denom).max(0.0).sqrt();
    let tm = channel.m_j().twice();
    Ok(SpinorValue {
        upper: c_up * harmonic_or_zero(ell, tm - 1, theta, phi),
        lower: c_lo * harmonic_or_zero(ell, tm + 1, theta, phi),
    })
}

/// Multiplies by `σ·e_r = [[cos θ, sin θ e^{-iφ}], [sin θ e^{iφ}, -cos θ]]`.
pub fn apply_sigma_er(value: SpinorValue, theta: f64, phi: f64) -> SpinorValue {
    let (st, ct) = theta.sin_cos();
    let e_minus = Complex64::from_polar(st, -phi);
    let e_plus = Complex64::from_polar(st, phi);
    SpinorValue { upper: ct * value.upper + e_minus * value.lower, lower: e_plus * value.upper - ct * value.lower }
}

/// Product rule on the unit sphere: Gauss–Legendre in `cos θ`, uniform
/// trapezoid in `φ`.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    points: Vec<(f64, f64, f64)>,
}

impl SphereQuadrature {
    pub const DEFAULT_THETA: usize = 64;
    pub const DEFAULT_PHI: usize = 128;

    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (x, w) = gauss_legendre(n_theta);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut points = Vec::with_capacity(n_theta * n_phi);
        for (xi, wi) in x.iter().zip(&w) {
            let theta = xi.acos();
            for k in 0..n_phi {
                points.push((theta, k as f64 * dphi, wi * dphi));
            }
        }
        SphereQuadrature { points }
    }

    /// `∫ dΩ f(θ, φ)`.
    pub fn integrate(&self, mut f: impl FnMut(f64, f64) -> Complex64) -> Complex64 {
        self.points.iter().map(|&(t, p, w)| w * f(t, p)).sum()
    }

    /// `∫ dΩ 𝒴_a† 𝒴_b`.
    pub fn spinor_overlap(&self, a: &Channel, b: &Channel) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(t, p, w) in &self.points {
            let ya = pauli_spinor(a, t, p)?;
            let yb = pauli_spinor(b, t, p)?;
            acc += w * ya.inner(&yb);
        }
        Ok(acc)
    }
}

impl Default for SphereQuadrature {
    fn default() -> Self {
        SphereQuadrature::new(Self::DEFAULT_THETA, Self::DEFAULT_PHI)
    }
}

/// Largest `|∫ 𝒴_a† 𝒴_b dΩ - δ_ab|` over every pair of channels with
/// `j ≤ j_max`.
pub fn orthonormality_defect(quad: &SphereQuadrature, j_max: HalfInt) -> Result<f64> {
    let channels = Channel::all_up_to(j_max);
    // Tabulate once; the pair loop is then a plain dot product.
    let mut table: Vec<Vec<SpinorValue>> = Vec::with_capacity(channels.len());
    for c in &channels {
        let values = quad.points.iter().map(|&(t, p, _)| pauli_spinor(c, t, p)).collect::<Result<Vec<_>>>()?;
        table.push(values);
    }
    let mut worst: f64 = 0.0;
    for a in 0..channels.len() {
        for b in a..channels.len() {
            let overlap: Complex64 = quad
                .points
                .iter()
                .zip(table[a].iter().zip(&table[b]))
                .map(|(&(_, _, w), (ya, yb))| w * ya.inner(yb))
                .sum();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((overlap - target).norm());
        }
    }
    Ok(worst)
}

/// Largest `‖σ·e_r 𝒴⁽ˢ⁾ - 𝒴⁽⁻ˢ⁾‖` over an `n × n` angle grid (poles
/// included) and every channel with `j ≤ j_max`.
pub fn sigma_flip_defect(j_max: HalfInt, n: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for c in Channel::all_up_to(j_max) {
        for i in 0..n {
            let theta = PI * i as f64 / (n - 1) as f64;
            for k in 0..n {
                let phi = 2.0 * PI * k as f64 / n as f64;
                let flipped = apply_sigma_er(pauli_spinor(&c, theta, phi)?, theta, phi);
                let partner = pauli_spinor(&c.partner(), theta, phi)?;
                worst = worst.max(flipped.distance(&partner));
            }
        }
    }
    Ok(worst)
}
