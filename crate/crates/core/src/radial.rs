//! Radial grids, the discrete ladder operator and its partner Hamiltonians.
//!
//! The reduced function `u = rR` is sampled at the `n` interior nodes
//! `r_i = i·h` of `(0, r_max)`, with `u(0) = u(r_max) = 0`. The ladder
//! operator
//!
//! ```text
//!   A = (d/dr + Φ(r)) / √(2m),   Φ = ℓ/r - σ U′(r)
//! ```
//!
//! (`σ = +1` for system 1, `-1` for system 2) is discretized as a map from
//! the nodes to the `n + 1` cell midpoints `r_{k+1/2} = (k + 1/2)·h`:
//! a forward difference plus `Φ(r_{k+1/2})` times the two-point average.
//! That makes `A` an `(n+1) × n` lower-bidiagonal matrix; `H₋ = AᵀA` lives
//! on the nodes and `H₊ = AAᵀ` on the midpoints. Both are tridiagonal and
//! their nonzero spectra coincide exactly. `H₊` always has one exact zero
//! eigenvalue, the kernel of `Aᵀ`; whether it is a bound zero mode or a
//! state pinned to the wall at `r_max` is decided downstream.

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::linalg::CsrMatrix;
pub use crate::linalg::SymTridiagonal;
use crate::superpotential::{EffectivePotential, SuperpotentialSpec, System};

pub const MIN_POINTS: usize = 16;

/// Uniform grid of `n` interior nodes on `(0, r_max)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialGrid {
    r_max: f64,
    n: usize,
    h: f64,
}

impl RadialGrid {
    pub fn new(r_max: f64, n: usize) -> Result<RadialGrid> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(param("r_max", format!("must be positive and finite, got {r_max}")));
        }
        if n < MIN_POINTS {
            return Err(param("n", format!("need at least {MIN_POINTS} interior points, got {n}")));
        }
        Ok(RadialGrid { r_max, n, h: r_max / (n + 1) as f64 })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `r_i = i·h` for `i = 1..=n`.
    pub fn nodes(&self) -> Vec<f64> {
        (1..=self.n).map(|i| i as f64 * self.h).collect()
    }

    /// `r_{k+1/2} = (k + 1/2)·h` for `k = 0..=n`.
    pub fn midpoints(&self) -> Vec<f64> {
        (0..=self.n).map(|k| (k as f64 + 0.5) * self.h).collect()
    }
}

/// Uniform grid constructor.
pub fn make_grid(r_max: f64, n: usize) -> Result<RadialGrid> {
    RadialGrid::new(r_max, n)
}

/// Lower-bidiagonal `rows × cols` matrix with `rows ∈ {cols, cols + 1}`:
/// `diag[c]` sits at `(c, c)` and `sub[c]` at `(c + 1, c)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ladder {
    rows: usize,
    cols: usize,
    diag: Vec<f64>,
    sub: Vec<f64>,
}

impl Ladder {
    pub fn new(rows: usize, cols: usize, diag: Vec<f64>, sub: Vec<f64>) -> Result<Ladder> {
        if cols == 0 || (rows != cols && rows != cols + 1) {
            return Err(Error::Shape(format!("ladder must be n × n or (n+1) × n, got {rows} × {cols}")));
        }
        if diag.len() != cols || sub.len() != rows - 1 {
            return Err(Error::Shape(format!(
                "{rows} × {cols} ladder needs {cols} diagonal and {} subdiagonal entries",
                rows - 1
            )));
        }
        if let Some(i) = diag.iter().chain(&sub).position(|v| !v.is_finite()) {
            return Err(Error::Shape(format!("non-finite ladder entry at position {i}")));
        }
        Ok(Ladder { rows, cols, diag, sub })
    }

    /// Reads a row-major dense matrix; it must be lower bidiagonal.
    pub fn from_dense(rows: usize, cols: usize, data: &[f64]) -> Result<Ladder> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("expected {} entries, got {}", rows * cols, data.len())));
        }
        if rows != cols && rows != cols + 1 {
            return Err(Error::Shape(format!("ladder must be n × n or (n+1) × n, got {rows} × {cols}")));
        }
        for r in 0..rows {
            for c in 0..cols {
                if r != c && r != c + 1 && data[r * cols + c] != 0.0 {
                    return Err(Error::Shape(format!("entry ({r}, {c}) is outside the lower bidiagonal")));
                }
            }
        }
        let diag = (0..cols).map(|c| data[c * cols + c]).collect();
        let sub = (0..rows - 1).map(|c| data[(c + 1) * cols + c]).collect();
        Ladder::new(rows, cols, diag, sub)
    }

    pub fn identity(n: usize) -> Ladder {
        Ladder { rows: n, cols: n, diag: vec![1.0; n], sub: vec![0.0; n - 1] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    /// `A x`, with `x` of length `cols`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        for c in 0..self.cols {
            y[c] += self.diag[c] * x[c];
            if c < self.sub.len() {
                y[c + 1] += self.sub[c] * x[c];
            }
        }
        y
    }

    /// `Aᵀ y`, with `y` of length `rows`.
    pub fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        (0..self.cols)
            .map(|c| {
                let s = if c < self.sub.len() { self.sub[c] * y[c + 1] } else { 0.0 };
                self.diag[c] * y[c] + s
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.rows * self.cols];
        for c in 0..self.cols {
            m[c * self.cols + c] = self.diag[c];
            if c < self.sub.len() {
                m[(c + 1) * self.cols + c] = self.sub[c];
            }
        }
        m
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let mut t: Vec<(usize, usize, f64)> = (0..self.cols).map(|c| (c, c, self.diag[c])).collect();
        t.extend(self.sub.iter().enumerate().map(|(c, &v)| (c + 1, c, v)));
        CsrMatrix::from_triplets(self.rows, self.cols, t)
    }

    pub fn transpose_csr(&self) -> CsrMatrix {
        let mut t: Vec<(usize, usize, f64)> = (0..self.cols).map(|c| (c, c, self.diag[c])).collect();
        t.extend(self.sub.iter().enumerate().map(|(c, &v)| (c, c + 1, v)));
        CsrMatrix::from_triplets(self.cols, self.rows, t)
    }

    /// `AᵀA`, `cols × cols`.
    pub fn gram_cols(&self) -> SymTridiagonal {
        let s = |c: usize| self.sub.get(c).copied().unwrap_or(0.0);
        let diag = (0..self.cols).map(|c| self.diag[c] * self.diag[c] + s(c) * s(c)).collect();
        let off = (0..self.cols - 1).map(|c| s(c) * self.diag[c + 1]).collect();
        SymTridiagonal::new(diag, off).expect("shape is consistent by construction")
    }

    /// `AAᵀ`, `rows × rows`.
    pub fn gram_rows(&self) -> SymTridiagonal {
        let d = |k: usize| self.diag.get(k).copied().unwrap_or(0.0);
        let diag = (0..self.rows)
            .map(|k| {
                let lower = if k >= 1 { self.sub[k - 1] * self.sub[k - 1] } else { 0.0 };
                d(k) * d(k) + lower
            })
            .collect();
        let off = (0..self.rows - 1).map(|k| d(k) * self.sub[k]).collect();
        SymTridiagonal::new(diag, off).expect("shape is consistent by construction")
    }
}

/// Channel data attached to a pair built from a superpotential.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairMeta {
    pub ell: u32,
    pub system: System,
    pub spec: SuperpotentialSpec,
    pub grid: RadialGrid,
}

/// A ladder with its partner Hamiltonians `H₊ = AAᵀ`, `H₋ = AᵀA`.
#[derive(Clone, Debug)]
pub struct FactorizedPair {
    pub ladder: Ladder,
    pub h_plus: SymTridiagonal,
    pub h_minus: SymTridiagonal,
    pub meta: Option<PairMeta>,
}

impl FactorizedPair {
    pub fn grid(&self) -> Option<&RadialGrid> {
        self.meta.as_ref().map(|m| &m.grid)
    }
}

/// Builds `AAᵀ` and `AᵀA`. Both are formed directly in symmetric
/// tridiagonal storage, so they are symmetric exactly.
pub fn partner_hamiltonians(a: &Ladder) -> FactorizedPair {
    FactorizedPair { ladder: a.clone(), h_plus: a.gram_rows(), h_minus: a.gram_cols(), meta: None }
}

/// The discrete ladder operator for pair label `ell` of `system`.
pub fn ladder_matrix(grid: &RadialGrid, ell: u32, spec: &SuperpotentialSpec, system: System) -> Result<Ladder> {
    if ell == 0 {
        return Err(param("ell", "pair label ℓ must be at least 1"));
    }
    let h = grid.h();
    let scale = 1.0 / (2.0 * spec.mass()).sqrt();
    let sigma = system.sigma();
    let l = ell as f64;
    let phi = grid
        .midpoints()
        .into_iter()
        .enumerate()
        .map(|(k, r)| {
            let (_, du, _) = spec.eval(r)?;
            let v = l / r - sigma * du;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinitePotential { index: k, r, value: v })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let n = grid.n();
    let diag = (0..n).map(|c| (1.0 / h + 0.5 * phi[c]) * scale).collect();
    let sub = (0..n).map(|c| (-1.0 / h + 0.5 * phi[c + 1]) * scale).collect();
    Ladder::new(n + 1, n, diag, sub)
}

/// Ladder plus partner Hamiltonians with channel metadata.
pub fn factorized_pair(
    grid: &RadialGrid,
    ell: u32,
    spec: &SuperpotentialSpec,
    system: System,
) -> Result<FactorizedPair> {
    let ladder = ladder_matrix(grid, ell, spec, system)?;
    let mut pair = partner_hamiltonians(&ladder);
    pair.meta = Some(PairMeta { ell, system, spec: spec.clone(), grid: *grid });
    Ok(pair)
}

/// `-u″/(2m) + V u` with the 3-point Laplacian at the nodes.
pub fn scalar_hamiltonian(grid: &RadialGrid, potential: &EffectivePotential, mass: f64) -> Result<SymTridiagonal> {
    if !(mass > 0.0) {
        return Err(param("mass", "must be positive"));
    }
    let kin = 1.0 / (2.0 * mass * grid.h() * grid.h());
    let nodes = grid.nodes();
    let mut diag = Vec::with_capacity(nodes.len());
    for (i, &r) in nodes.iter().enumerate() {
        let v = potential.eval(r)?;
        if !v.is_finite() {
            return Err(Error::NonFinitePotential { index: i + 1, r, value: v });
        }
        diag.push(2.0 * kin + v);
    }
    SymTridiagonal::new(diag, vec![-kin; nodes.len() - 1])
}

/// `scalar_hamiltonian` for a plain closure `V(r)`.
pub fn scalar_hamiltonian_fn(grid: &RadialGrid, v: impl Fn(f64) -> f64, mass: f64) -> Result<SymTridiagonal> {
    let kin = 1.0 / (2.0 * mass * grid.h() * grid.h());
    let mut diag = Vec::with_capacity(grid.n());
    for (i, r) in grid.nodes().into_iter().enumerate() {
        let value = v(r);
        if !value.is_finite() {
            return Err(Error::NonFinitePotential { index: i + 1, r, value });
        }
        diag.push(2.0 * kin + value);
    }
    SymTridiagonal::new(diag, vec![-kin; grid.n() - 1])
}
