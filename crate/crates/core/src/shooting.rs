//! Numerov shooting with node-count bisection, an eigenvalue oracle that
//! shares no code with the matrix pipeline.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::radial::RadialGrid;
use crate::superpotential::EffectivePotential;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShootingResult {
    pub energies: Vec<f64>,
    /// False when fewer than the requested levels lie in the search window.
    pub complete: bool,
    pub window: (f64, f64),
}

/// The `count` lowest Dirichlet eigenvalues of `-u″/(2m) + V u` on
/// `(0, r_max)`.
pub fn shooting_oracle(
    potential: &EffectivePotential,
    mass: f64,
    grid: &RadialGrid,
    count: usize,
) -> Result<ShootingResult> {
    let mut err = None;
    let res = shooting_oracle_fn(
        |r| match potential.eval(r) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        },
        mass,
        grid,
        count,
    );
    match err {
        Some(e) => Err(e),
        None => res,
    }
}

pub fn shooting_oracle_fn(
    mut v: impl FnMut(f64) -> f64,
    mass: f64,
    grid: &RadialGrid,
    count: usize,
) -> Result<ShootingResult> {
    if !(mass > 0.0) {
        return Err(crate::error::param("mass", "must be positive"));
    }
    let n = grid.n();
    let h = grid.h();
    // Index 0 is r = 0 (unused), 1..=n the nodes, n + 1 the wall.
    let mut pot = vec![0.0; n + 2];
    for (i, p) in pot.iter_mut().enumerate().skip(1) {
        let r = i as f64 * h;
        let value = v(r);
        if !value.is_finite() {
            return Err(Error::NonFinitePotential { index: i, r, value });
        }
        *p = value;
    }
    let lo = pot[1..].iter().fold(f64::INFINITY, |m, x| m.min(*x));
    let hi = pot[1..].iter().fold(f64::NEG_INFINITY, |m, x| m.max(*x));
    let numerov = Numerov { pot, two_m: 2.0 * mass, h2: h * h / 12.0 };
    numerov.check(lo)?;

    let mut energies = Vec::with_capacity(count);
    let mut floor = lo;
    let total = numerov.nodes(hi);
    for k in 0..count {
        if total <= k {
            return Ok(ShootingResult { energies, complete: false, window: (lo, hi) });
        }
        let (mut a, mut b) = (floor, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if numerov.nodes(mid) > k {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
                break;
            }
        }
        let e = 0.5 * (a + b);
        energies.push(e);
        floor = a;
    }
    Ok(ShootingResult { energies, complete: true, window: (lo, hi) })
}

struct Numerov {
    pot: Vec<f64>,
    two_m: f64,
    h2: f64,
}

impl Numerov {
    /// The recurrence divides by `1 - h²k/12`; it must stay positive for
    /// every energy in the window.
    fn check(&self, e_min: f64) -> Result<()> {
        for (i, p) in self.pot.iter().enumerate().skip(2) {
            if self.h2 * self.two_m * (p - e_min) >= 1.0 {
                return Err(Error::Unsupported(format!(
                    "Numerov step too coarse at node {i}: h²k/12 ≥ 1; refine the grid"
                )));
            }
        }
        Ok(())
    }

    /// Sign changes of the outward solution on `(0, r_max]`, equal to the
    /// number of Dirichlet eigenvalues below `e`.
    fn nodes(&self, e: f64) -> usize {
        let n = self.pot.len() - 1;
        let k = |i: usize| self.two_m * (self.pot[i] - e);
        let f = |i: usize| 1.0 - self.h2 * k(i);
        let mut prev;
        let mut y = 1.0;
        // (k u)(0) is approximated by (k u)(h), finite for regular u.
        let ky0 = k(1) * y;
        let mut next = (2.0 * y * (1.0 + 5.0 * self.h2 * k(1)) + self.h2 * ky0) / f(2);
        let mut count = 0;
        let mut last_sign = 1.0;
        let mut i = 2;
        loop {
            prev = std::mem::replace(&mut y, next);
            if y != 0.0 {
                let s = y.signum();
                if s != last_sign {
                    count += 1;
                    last_sign = s;
                }
            }
            if i == n {
                break;
            }
            next = (2.0 * y * (1.0 + 5.0 * self.h2 * k(i)) - prev * f(i - 1)) / f(i + 1);
            i += 1;
            if next.abs() > 1e100 {
                next *= 1e-100;
                y *= 1e-100;
            }
        }
        count
    }
}
