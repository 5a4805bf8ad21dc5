//! Diagonalization, spectrum pairing, zero modes, SUSY maps and the
//! supercharge algebra of a factorized pair.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, SymTridiagonal};
use crate::quantum_numbers::Sign;
use crate::radial::{FactorizedPair, Ladder, PairMeta};
use crate::superpotential::Branch;

/// Eigenpairs with vectors normalized so that `Σ v_i² h = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// The `k` lowest eigenpairs of `h`, ascending, vectors scaled by `1/√spacing`.
pub fn eigen_decompose(h: &SymTridiagonal, k: usize, spacing: f64) -> Result<Eigen> {
    if !(spacing > 0.0) {
        return Err(crate::error::param("spacing", "must be positive"));
    }
    let (values, mut vectors) = h.lowest_eigenpairs(k)?;
    let s = 1.0 / spacing.sqrt();
    for v in &mut vectors {
        v.iter_mut().for_each(|x| *x *= s);
    }
    Ok(Eigen { values, vectors })
}

/// Dense entry point; rejects asymmetric or non-tridiagonal input.
pub fn eigen_decompose_dense(n: usize, data: &[f64], k: usize, spacing: f64) -> Result<Eigen> {
    eigen_decompose(&SymTridiagonal::from_dense(n, data)?, k, spacing)
}

/// Fraction of `‖v‖²` carried by the outermost 5% of the components.
pub fn edge_weight(v: &[f64]) -> f64 {
    let n = v.len();
    let tail = (n as f64 * 0.05).ceil() as usize;
    let total: f64 = v.iter().map(|x| x * x).sum();
    if total == 0.0 {
        return 0.0;
    }
    v[n - tail.max(1)..].iter().map(|x| x * x).sum::<f64>() / total
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairingOptions {
    /// Energies below this count as zero; `None` picks
    /// `max(10·λ_min(H₋)·h², 1e-9)`.
    pub tol_zero: Option<f64>,
    /// Relative tolerance for partner eigenvalues.
    pub pair_tol: f64,
    /// A zero-energy vector with more edge weight than this is a wall state.
    pub boundary_tol: f64,
    /// Also run [`algebra_check`].
    pub algebra: bool,
}

impl Default for PairingOptions {
    fn default() -> Self {
        PairingOptions { tol_zero: None, pair_tol: 1e-10, boundary_tol: 1e-3, algebra: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairEntry {
    pub index_plus: usize,
    pub index_minus: usize,
    pub energy_plus: f64,
    pub energy_minus: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroMode {
    pub branch: Branch,
    pub energy: f64,
    pub edge_weight: f64,
    /// Relative ℓ² deviation from the closed-form kernel, when known.
    pub profile_deviation: Option<f64>,
    pub vector: Vec<f64>,
}

/// A zero-energy vector of `H₊` pinned to the wall at `r_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryState {
    pub branch: Branch,
    pub energy: f64,
    pub edge_weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportMeta {
    pub system: Option<u8>,
    pub ell: Option<u32>,
    pub mass: Option<f64>,
    pub superpotential: Option<String>,
    pub r_max: Option<f64>,
    pub n: usize,
    pub h: f64,
    pub levels: usize,
    pub tol_zero: f64,
    pub pair_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residuals {
    /// Relative residual of each SUSY image, see [`susy_map`].
    pub susy_map: Vec<f64>,
    pub max_pair_delta: f64,
    pub min_eigenvalue: f64,
    pub norm_bound: f64,
    pub pairing_violation: bool,
    pub algebra: Option<AlgebraResiduals>,
}

/// Eigenvalues of both partners, their pairing, zero modes and residuals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub meta: ReportMeta,
    pub eigenvalues_plus: Vec<f64>,
    pub eigenvalues_minus: Vec<f64>,
    pub pairing: Vec<PairEntry>,
    pub zero_modes: Vec<ZeroMode>,
    pub boundary_states: Vec<BoundaryState>,
    pub residuals: Residuals,
    #[serde(skip)]
    pub vectors_plus: Vec<Vec<f64>>,
    #[serde(skip)]
    pub vectors_minus: Vec<Vec<f64>>,
}

impl SpectrumReport {
    pub fn zero_mode_count(&self) -> usize {
        self.zero_modes.len()
    }

    /// Positive eigenvalues of `H₊` (zero modes dropped).
    pub fn positive_plus(&self) -> Vec<f64> {
        self.eigenvalues_plus[self.zero_modes.iter().filter(|z| z.branch == Sign::Plus).count()..].to_vec()
    }
}

/// Greedy nearest matching of two ascending lists. Returns `(i, j, |Δ|)`,
/// ordered by `i`.
pub fn greedy_pairing(a: &[f64], b: &[f64]) -> Vec<(usize, usize, f64)> {
    let mut cand: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            cand.push(((x - y).abs(), i, j));
        }
    }
    cand.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut out = Vec::new();
    for (d, i, j) in cand {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            out.push((i, j, d));
        }
    }
    out.sort_by_key(|p| p.0);
    out
}

/// Closed-form reduced kernel `r^ℓ e^{-σU}` at the midpoints, normalized.
pub fn kernel_profile(meta: &PairMeta) -> Result<Vec<f64>> {
    let sigma = meta.system.sigma();
    let l = meta.ell as f64;
    let logs = meta
        .grid
        .midpoints()
        .into_iter()
        .map(|r| Ok(l * r.ln() - sigma * meta.spec.eval(r)?.0))
        .collect::<Result<Vec<f64>>>()?;
    let top = logs.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    let mut v: Vec<f64> = logs.iter().map(|x| (x - top).exp()).collect();
    let norm = (v.iter().map(|x| x * x).sum::<f64>() * meta.grid.h()).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    Ok(v)
}

/// `‖v - w‖ / ‖w‖` after both are normalized and aligned in sign.
pub fn relative_deviation(v: &[f64], w: &[f64]) -> f64 {
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
    let s = if dot < 0.0 { -1.0 } else { 1.0 };
    v.iter().zip(w).map(|(a, b)| (s * a / nv - b / nw).powi(2)).sum::<f64>().sqrt()
}

/// Diagonalizes both partners and pairs their spectra.
///
/// `levels` eigenvalues of `H₊` are reported (wall states excluded) and as
/// many positive eigenvalues of `H₋` as `H₊` has, so every listed positive
/// level has a partner.
pub fn pair_spectra(pair: &FactorizedPair, levels: usize, opts: &PairingOptions) -> Result<SpectrumReport> {
    if levels == 0 {
        return Err(crate::error::param("levels", "must be at least 1"));
    }
    let h = pair.grid().map_or(1.0, |g| g.h());
    let plus = eigen_decompose(&pair.h_plus, levels + 1, h)?;
    let minus = eigen_decompose(&pair.h_minus, levels, h)?;
    let tol_zero = opts.tol_zero.unwrap_or_else(|| (10.0 * minus.values[0].abs() * h * h).max(1e-9));
    let mut zero_modes = Vec::new();
    let mut boundary_states = Vec::new();
    let mut shown_plus: Vec<(f64, Vec<f64>)> = Vec::new();
    for (e, v) in plus.values.iter().zip(&plus.vectors) {
        if *e < tol_zero {
            let w = edge_weight(v);
            if w > opts.boundary_tol {
                boundary_states.push(BoundaryState { branch: Sign::Plus, energy: *e, edge_weight: w });
                continue;
            }
            let profile_deviation = match &pair.meta {
                Some(meta) => Some(relative_deviation(v, &kernel_profile(meta)?)),
                None => None,
            };
            zero_modes.push(ZeroMode {
                branch: Sign::Plus,
                energy: *e,
                edge_weight: w,
                profile_deviation,
                vector: v.clone(),
            });
        }
        if shown_plus.len() < levels {
            shown_plus.push((*e, v.clone()));
        }
    }
    let n_zero_plus = zero_modes.len();
    let n_positive = shown_plus.len() - n_zero_plus;
    let mut shown_minus: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut n_zero_minus = 0;
    for (e, v) in minus.values.iter().zip(&minus.vectors) {
        if *e < tol_zero {
            let w = edge_weight(v);
            if w > opts.boundary_tol {
                boundary_states.push(BoundaryState { branch: Sign::Minus, energy: *e, edge_weight: w });
                continue;
            }
            zero_modes.push(ZeroMode {
                branch: Sign::Minus,
                energy: *e,
                edge_weight: w,
                profile_deviation: None,
                vector: v.clone(),
            });
            n_zero_minus += 1;
            shown_minus.push((*e, v.clone()));
            continue;
        }
        if shown_minus.len() - n_zero_minus < n_positive {
            shown_minus.push((*e, v.clone()));
        }
    }

    let pos_plus: Vec<f64> = shown_plus[n_zero_plus..].iter().map(|p| p.0).collect();
    let pos_minus: Vec<f64> = shown_minus[n_zero_minus..].iter().map(|p| p.0).collect();
    let matches = greedy_pairing(&pos_plus, &pos_minus);
    let mut pairing = Vec::with_capacity(matches.len());
    let mut violation = matches.len() != pos_plus.len() || matches.len() != pos_minus.len();
    let mut max_delta: f64 = 0.0;
    let mut susy_residuals = Vec::with_capacity(matches.len());
    for &(i, j, d) in &matches {
        let (ep, em) = (pos_plus[i], pos_minus[j]);
        let rel = d / ep.abs().max(em.abs());
        max_delta = max_delta.max(rel);
        if rel > opts.pair_tol {
            violation = true;
        }
        pairing.push(PairEntry {
            index_plus: i + n_zero_plus,
            index_minus: j + n_zero_minus,
            energy_plus: ep,
            energy_minus: em,
            delta: d,
        });
        let u = &shown_minus[j + n_zero_minus].1;
        susy_residuals.push(susy_map(&pair.ladder, u, em, tol_zero)?.residual);
    }
    let algebra = if opts.algebra { Some(algebra_check(pair)?) } else { None };
    let min_eigenvalue = plus.values[0].min(minus.values[0]);
    let norm_bound = pair.h_plus.norm_bound().max(pair.h_minus.norm_bound());
    let meta = ReportMeta {
        system: pair.meta.as_ref().map(|m| m.system.number()),
        ell: pair.meta.as_ref().map(|m| m.ell),
        mass: pair.meta.as_ref().map(|m| m.spec.mass()),
        superpotential: pair.meta.as_ref().map(|m| m.spec.to_string()),
        r_max: pair.grid().map(|g| g.r_max()),
        n: pair.h_minus.len(),
        h,
        levels,
        tol_zero,
        pair_tol: opts.pair_tol,
    };
    let (eigenvalues_plus, vectors_plus) = shown_plus.into_iter().unzip();
    let (eigenvalues_minus, vectors_minus) = shown_minus.into_iter().unzip();
    Ok(SpectrumReport {
        meta,
        eigenvalues_plus,
        eigenvalues_minus,
        pairing,
        zero_modes,
        boundary_states,
        residuals: Residuals {
            susy_map: susy_residuals,
            max_pair_delta: max_delta,
            min_eigenvalue,
            norm_bound,
            pairing_violation: violation,
            algebra,
        },
        vectors_plus,
        vectors_minus,
    })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Image of an `AᵀA` eigenvector under the ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct SusyImage {
    /// `A u / √E`.
    pub vector: Vec<f64>,
    /// `‖AAᵀ v - E v‖ / (‖v‖·max(1, E))`.
    pub residual: f64,
    /// `‖A u‖² / (E ‖u‖²)`, equal to 1 for an exact eigenvector.
    pub norm_ratio: f64,
}

/// Maps an eigenvector `u` of `AᵀA` with energy `E > tol_zero` to
/// `A u / √E`, an eigenvector of `AAᵀ` with the same energy and norm.
pub fn susy_map(a: &Ladder, u: &[f64], energy: f64, tol_zero: f64) -> Result<SusyImage> {
    if energy < tol_zero {
        return Err(Error::BelowZeroModeThreshold { energy, threshold: tol_zero });
    }
    if u.len() != a.cols() {
        return Err(Error::Shape(format!("vector has {} entries, ladder has {} columns", u.len(), a.cols())));
    }
    let au = a.apply(u);
    let hu = a.apply_transpose(&au);
    let un = norm(u);
    let scale = energy.abs().max(1.0);
    let eig_res = hu.iter().zip(u).map(|(x, y)| (x - energy * y).powi(2)).sum::<f64>().sqrt() / (un * scale);
    if eig_res > 1e-8 {
        return Err(Error::NotAnEigenvector { residual: eig_res, tolerance: 1e-8 });
    }
    let s = 1.0 / energy.sqrt();
    let v: Vec<f64> = au.iter().map(|x| x * s).collect();
    let hv = a.apply(&a.apply_transpose(&v));
    let vn = norm(&v);
    let residual = hv.iter().zip(&v).map(|(x, y)| (x - energy * y).powi(2)).sum::<f64>().sqrt() / (vn * scale);
    let norm_ratio = (norm(&au) / un).powi(2) / energy;
    Ok(SusyImage { vector: v, residual, norm_ratio })
}

/// Frobenius norms of the supercharge identities, in the real `2N × 2N`
/// realization where needed. All should vanish relative to `h_norm`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlgebraResiduals {
    pub q1_squared_minus_h: f64,
    pub w_q1_anticommutator: f64,
    pub w_squared_minus_one: f64,
    pub q1_q1_minus_2h: f64,
    pub q2_q2_minus_2h: f64,
    pub q1_q2_anticommutator: f64,
    pub h_w_commutator: f64,
    pub h_norm: f64,
}

impl AlgebraResiduals {
    /// Largest residual divided by `‖H‖`.
    pub fn max_relative(&self) -> f64 {
        [
            self.q1_squared_minus_h,
            self.w_q1_anticommutator,
            self.w_squared_minus_one,
            self.q1_q1_minus_2h,
            self.q2_q2_minus_2h,
            self.q1_q2_anticommutator,
            self.h_w_commutator,
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(*v))
            / self.h_norm
    }
}

/// Checks `H = Q₁²`, `{W, Q₁} = 0`, `W² = 1`, `[H, W] = 0` and
/// `{Q_i, Q_j} = 2Hδ_ij` with `Q₁ = [[0, A], [Aᵀ, 0]]`,
/// `W = diag(1, -1)` and `Q₂ = i Q₁ W`.
pub fn algebra_check(pair: &FactorizedPair) -> Result<AlgebraResiduals> {
    let a = pair.ladder.to_csr();
    let at = pair.ladder.transpose_csr();
    let (p, m) = (pair.ladder.rows(), pair.ladder.cols());
    let sizes = [p, m];
    let q1 = CsrMatrix::block(&sizes, &sizes, &[vec![None, Some(&a)], vec![Some(&at), None]])?;
    let hp = CsrMatrix::from(&pair.h_plus);
    let hm = CsrMatrix::from(&pair.h_minus);
    let h = CsrMatrix::block(&sizes, &sizes, &[vec![Some(&hp), None], vec![None, Some(&hm)]])?;
    let w_diag: Vec<f64> = (0..p + m).map(|i| if i < p { 1.0 } else { -1.0 }).collect();
    let w = CsrMatrix::diagonal(&w_diag);
    let id = CsrMatrix::identity(p + m);

    let q1q1 = q1.matmul(&q1)?;
    let wq1 = w.matmul(&q1)?;
    let q1w = q1.matmul(&w)?;
    let anti_wq1 = wq1.combine(1.0, &q1w, 1.0)?;
    let ww = w.matmul(&w)?;
    let hw = h.matmul(&w)?.combine(1.0, &w.matmul(&h)?, -1.0)?;

    // Q₂ = i M with M = Q₁ W; realified Z = X + iY ↦ [[X, -Y], [Y, X]].
    let big = [p + m, p + m];
    let neg_m = q1w.scaled(-1.0);
    let rq1 = CsrMatrix::block(&big, &big, &[vec![Some(&q1), None], vec![None, Some(&q1)]])?;
    let rq2 = CsrMatrix::block(&big, &big, &[vec![None, Some(&neg_m)], vec![Some(&q1w), None]])?;
    let rh = CsrMatrix::block(&big, &big, &[vec![Some(&h), None], vec![None, Some(&h)]])?;
    let anti = |x: &CsrMatrix, y: &CsrMatrix| -> Result<CsrMatrix> { x.matmul(y)?.combine(1.0, &y.matmul(x)?, 1.0) };
    // Realified norms are √2 times the complex ones; divide back out.
    let r2 = std::f64::consts::SQRT_2;
    let q1q1_r = anti(&rq1, &rq1)?.combine(1.0, &rh, -2.0)?.frobenius_norm() / r2;
    let q2q2_r = anti(&rq2, &rq2)?.combine(1.0, &rh, -2.0)?.frobenius_norm() / r2;
    let q1q2_r = anti(&rq1, &rq2)?.frobenius_norm() / r2;

    Ok(AlgebraResiduals {
        q1_squared_minus_h: q1q1.combine(1.0, &h, -1.0)?.frobenius_norm(),
        w_q1_anticommutator: anti_wq1.frobenius_norm(),
        w_squared_minus_one: ww.combine(1.0, &id, -1.0)?.frobenius_norm(),
        q1_q1_minus_2h: q1q1_r,
        q2_q2_minus_2h: q2q2_r,
        q1_q2_anticommutator: q1q2_r,
        h_w_commutator: hw.frobenius_norm(),
        h_norm: h.frobenius_norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{factorized_pair, make_grid, partner_hamiltonians};
    use crate::superpotential::{SuperpotentialSpec, System};

    #[test]
    fn laplacian_three() {
        let t = SymTridiagonal::new(vec![2.0; 3], vec![-1.0; 2]).unwrap();
        let e = eigen_decompose(&t, 3, 1.0).unwrap();
        let s2 = 2f64.sqrt();
        for (a, b) in e.values.iter().zip([2.0 - s2, 2.0, 2.0 + s2]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn asymmetric_dense_rejected() {
        let r = eigen_decompose_dense(2, &[1.0, 0.5, 0.4, 1.0], 1, 1.0);
        assert!(matches!(r, Err(Error::Asymmetric { .. })));
    }

    #[test]
    fn vector_normalization_uses_spacing() {
        let t = SymTridiagonal::new(vec![2.0; 300], vec![-1.0; 299]).unwrap();
        let e = eigen_decompose(&t, 2, 0.01).unwrap();
        for v in &e.vectors {
            let s: f64 = v.iter().map(|x| x * x * 0.01).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn greedy_pairing_prefers_nearest() {
        let p = greedy_pairing(&[1.0, 2.0, 3.0], &[2.05, 0.98, 3.3]);
        assert_eq!(p.iter().map(|x| (x.0, x.1)).collect::<Vec<_>>(), vec![(0, 1), (1, 0), (2, 2)]);
    }

    #[test]
    fn edge_weights() {
        let mut v = vec![0.0; 100];
        v[99] = 1.0;
        assert_eq!(edge_weight(&v), 1.0);
        v[99] = 0.0;
        v[0] = 1.0;
        assert_eq!(edge_weight(&v), 0.0);
    }

    fn osc_pair(system: System, n: usize) -> FactorizedPair {
        let spec = SuperpotentialSpec::quadratic(1.0, 1.0).unwrap();
        factorized_pair(&make_grid(12.0, n).unwrap(), 1, &spec, system).unwrap()
    }

    #[test]
    fn oscillator_unbroken_pairing() {
        let rep = pair_spectra(&osc_pair(System::One, 600), 4, &PairingOptions::default()).unwrap();
        assert_eq!(rep.zero_mode_count(), 1);
        assert_eq!(rep.zero_modes[0].branch, Sign::Plus);
        assert!(rep.boundary_states.is_empty());
        assert_eq!(rep.eigenvalues_plus.len(), 4);
        assert_eq!(rep.eigenvalues_minus.len(), 3);
        assert!(!rep.residuals.pairing_violation);
        for (e, x) in rep.eigenvalues_plus.iter().zip([0.0, 2.0, 4.0, 6.0]) {
            assert!((e - x).abs() < 2e-3, "{e} vs {x}");
        }
        assert!(rep.zero_modes[0].profile_deviation.unwrap() < 1e-2);
    }

    #[test]
    fn oscillator_broken_pairing() {
        let rep = pair_spectra(&osc_pair(System::Two, 600), 3, &PairingOptions::default()).unwrap();
        assert_eq!(rep.zero_mode_count(), 0);
        assert_eq!(rep.boundary_states.len(), 1);
        assert!(rep.boundary_states[0].edge_weight > 0.5);
        assert_eq!(rep.eigenvalues_plus.len(), 3);
        assert_eq!(rep.eigenvalues_minus.len(), 3);
        for (a, b) in rep.eigenvalues_plus.iter().zip(&rep.eigenvalues_minus) {
            assert!((a - b).abs() < 1e-10 * a);
        }
        assert!((rep.eigenvalues_minus[0] - 3.0).abs() < 1e-2);
    }

    #[test]
    fn susy_map_properties() {
        let pair = osc_pair(System::One, 800);
        let h = pair.grid().unwrap().h();
        let e = eigen_decompose(&pair.h_minus, 2, h).unwrap();
        let img = susy_map(&pair.ladder, &e.vectors[0], e.values[0], 1e-6).unwrap();
        assert!((img.norm_ratio - 1.0).abs() < 1e-10);
        assert!(img.residual < 1e-10, "{}", img.residual);
        let n2: f64 = img.vector.iter().map(|x| x * x * h).sum();
        assert!((n2 - 1.0).abs() < 1e-10);
        assert!(matches!(susy_map(&pair.ladder, &e.vectors[0], 1e-9, 1e-6), Err(Error::BelowZeroModeThreshold { .. })));
        assert!(matches!(susy_map(&pair.ladder, &e.vectors[0], 3.0, 1e-6), Err(Error::NotAnEigenvector { .. })));
    }

    #[test]
    fn algebra_small() {
        let pair = osc_pair(System::One, 40);
        let r = algebra_check(&pair).unwrap();
        assert_eq!(r.w_q1_anticommutator, 0.0);
        assert_eq!(r.w_squared_minus_one, 0.0);
        assert!(r.q1_squared_minus_h < 1e-13 * r.h_norm);
        assert!(r.max_relative() < 1e-12);
    }

    #[test]
    fn algebra_on_identity_ladder() {
        let pair = partner_hamiltonians(&Ladder::identity(20));
        let r = algebra_check(&pair).unwrap();
        assert_eq!(r.max_relative(), 0.0);
    }

    #[test]
    fn rejects_zero_levels() {
        assert!(pair_spectra(&osc_pair(System::One, 40), 0, &PairingOptions::default()).is_err());
    }
}
