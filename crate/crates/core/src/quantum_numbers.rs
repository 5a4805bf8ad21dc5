//! Angular quantum numbers of a fixed-`j` spin-orbit channel.
//!
//! Sign convention: on the channel with label `s = ±1` the spin-orbit
//! operator acts as `K χ⁽ˢ⁾ = s ℓ χ⁽ˢ⁾` with `ℓ = j + 1/2`, and the Witten
//! parity as `W χ⁽ˢ⁾ = s χ⁽ˢ⁾`. Writing `κ = -s (j + 1/2)` or `W = -K/|K|`
//! flips both signs; every construction in this crate uses the `+s` form.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A half-integer stored as twice its value, so `3/2` is `HalfInt(3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "f64")]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// True for `±1/2, ±3/2, ...`.
    pub const fn is_half_odd(self) -> bool {
        self.0.rem_euclid(2) == 1
    }
}

impl From<HalfInt> for f64 {
    fn from(h: HalfInt) -> f64 {
        h.value()
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl std::str::FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"3/2"`, `"1.5"` or `"2"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse { token: s.to_string(), reason: reason.to_string() };
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad("numerator is not an integer"))?;
            match den.trim() {
                "2" => Ok(HalfInt(num)),
                "1" => Ok(HalfInt(2 * num)),
                _ => Err(bad("denominator must be 1 or 2")),
            }
        } else {
            let v: f64 = t.parse().map_err(|_| bad("not a number"))?;
            let twice = 2.0 * v;
            if twice.fract() != 0.0 || twice.abs() > i32::MAX as f64 {
                return Err(bad("not a multiple of 1/2"));
            }
            Ok(HalfInt(twice as i32))
        }
    }
}

/// A sign label `±1`: the spin-orbit sign `s`, a Witten parity, or a branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub const fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_value(v: i32) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::QuantumNumber(format!("sign must be +1 or -1, got {v}"))),
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

fn check_j(j: HalfInt) -> Result<()> {
    if j.twice() >= 1 && j.is_half_odd() {
        Ok(())
    } else {
        Err(Error::QuantumNumber(format!("j must be one of 1/2, 3/2, ..., got {j}")))
    }
}

/// `ℓ(s) = j - s/2`.
pub fn orbital_l(j: HalfInt, s: Sign) -> Result<u32> {
    check_j(j)?;
    Ok(((j.twice() - s.value()) / 2) as u32)
}

/// The pair label `ℓ := ℓ(-1) = j + 1/2`, always at least 1.
pub fn pair_ell(j: HalfInt) -> Result<u32> {
    check_j(j)?;
    Ok(((j.twice() + 1) / 2) as u32)
}

/// Eigenvalue `s ℓ` of the spin-orbit operator on channel `s`; never zero.
pub fn spin_orbit_eigenvalue(j: HalfInt, s: Sign) -> Result<i32> {
    Ok(s.value() * pair_ell(j)? as i32)
}

pub fn witten_parity(j: HalfInt, s: Sign) -> Result<Sign> {
    check_j(j)?;
    Ok(s)
}

/// A fixed-`(j, m_j, s)` angular channel. The radial problem does not depend
/// on `m_j`; it is kept for evaluating the angular spinors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Channel {
    j: HalfInt,
    m_j: HalfInt,
    s: Sign,
}

impl Channel {
    pub fn new(j: HalfInt, m_j: HalfInt, s: Sign) -> Result<Channel> {
        check_j(j)?;
        if !m_j.is_half_odd() || m_j.twice().abs() > j.twice() {
            return Err(Error::QuantumNumber(format!("m_j = {m_j} is not allowed for j = {j}")));
        }
        Ok(Channel { j, m_j, s })
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn m_j(&self) -> HalfInt {
        self.m_j
    }

    pub fn s(&self) -> Sign {
        self.s
    }

    /// Orbital angular momentum `ℓ(s)` of this channel.
    pub fn ell(&self) -> u32 {
        ((self.j.twice() - self.s.value()) / 2) as u32
    }

    pub fn pair_ell(&self) -> u32 {
        ((self.j.twice() + 1) / 2) as u32
    }

    pub fn spin_orbit(&self) -> i32 {
        self.s.value() * self.pair_ell() as i32
    }

    pub fn witten(&self) -> Sign {
        self.s
    }

    /// The partner channel with the same `(j, m_j)` and opposite `s`.
    pub fn partner(&self) -> Channel {
        Channel { s: self.s.flip(), ..*self }
    }

    /// Every channel with `j ≤ j_max`, ordered by `(j, m_j, s)`.
    pub fn all_up_to(j_max: HalfInt) -> Vec<Channel> {
        let mut out = Vec::new();
        let mut tj = 1;
        while tj <= j_max.twice() {
            let mut tm = -tj;
            while tm <= tj {
                for s in [Sign::Plus, Sign::Minus] {
                    out.push(Channel { j: HalfInt(tj), m_j: HalfInt(tm), s });
                }
                tm += 2;
            }
            tj += 2;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const fn h(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn orbital_l_examples() {
        assert_eq!(orbital_l(h(1), Sign::Plus).unwrap(), 0);
        assert_eq!(orbital_l(h(3), Sign::Minus).unwrap(), 2);
        assert_eq!(orbital_l(h(5), Sign::Plus).unwrap(), 2);
    }

    #[test]
    fn spin_orbit_examples() {
        assert_eq!(spin_orbit_eigenvalue(h(1), Sign::Plus).unwrap(), 1);
        assert_eq!(spin_orbit_eigenvalue(h(3), Sign::Minus).unwrap(), -2);
        assert_eq!(spin_orbit_eigenvalue(h(5), Sign::Plus).unwrap(), 3);
    }

    #[test]
    fn witten_examples() {
        assert_eq!(witten_parity(h(1), Sign::Plus).unwrap(), Sign::Plus);
        assert_eq!(witten_parity(h(7), Sign::Minus).unwrap(), Sign::Minus);
    }

    #[test]
    fn rejects_integer_or_nonpositive_j() {
        for twice in [0, 2, 4, -1, -3] {
            assert!(orbital_l(h(twice), Sign::Plus).is_err(), "j = {}", h(twice));
            assert!(spin_orbit_eigenvalue(h(twice), Sign::Minus).is_err());
            assert!(witten_parity(h(twice), Sign::Minus).is_err());
        }
    }

    #[test]
    fn channel_validation() {
        assert!(Channel::new(h(3), h(3), Sign::Plus).is_ok());
        assert!(Channel::new(h(3), h(5), Sign::Plus).is_err());
        assert!(Channel::new(h(3), h(2), Sign::Plus).is_err());
        let c = Channel::new(h(1), h(1), Sign::Plus).unwrap();
        assert_eq!(c.ell(), 0);
        assert_eq!(c.pair_ell(), 1);
        assert_eq!(c.partner().ell(), 1);
    }

    #[test]
    fn all_channels_count() {
        // Σ_{j ≤ 7/2} 2(2j+1) = 2(2+4+6+8)
        assert_eq!(Channel::all_up_to(h(7)).len(), 40);
    }

    #[test]
    fn parse_half_int() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), h(3));
        assert_eq!("2.5".parse::<HalfInt>().unwrap(), h(5));
        assert_eq!("-1/2".parse::<HalfInt>().unwrap(), h(-1));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.3".parse::<HalfInt>().is_err());
        assert_eq!(h(5).to_string(), "5/2");
    }

    proptest! {
        #[test]
        fn channel_invariants(k in 0i32..200) {
            let j = h(2 * k + 1);
            let lp = orbital_l(j, Sign::Plus).unwrap();
            let lm = orbital_l(j, Sign::Minus).unwrap();
            prop_assert_eq!(lm - lp, 1);
            prop_assert_eq!(lm, pair_ell(j).unwrap());
            for s in [Sign::Plus, Sign::Minus] {
                let w = witten_parity(j, s).unwrap();
                let kappa = spin_orbit_eigenvalue(j, s).unwrap();
                prop_assert_eq!(w * w, Sign::Plus);
                prop_assert_ne!(kappa, 0);
                prop_assert_eq!(w.value() * kappa.abs(), kappa);
            }
        }
    }
}
