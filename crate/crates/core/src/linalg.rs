//! Symmetric tridiagonal eigensolvers and a small CSR sparse matrix.

use serde::Serialize;

use crate::error::{Error, Result};

/// Real symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<SymTridiagonal> {
        if diag.is_empty() {
            return Err(Error::Shape("empty matrix".into()));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::Shape(format!(
                "{} diagonal entries need {} off-diagonal entries, got {}",
                diag.len(),
                diag.len() - 1,
                off.len()
            )));
        }
        if let Some(i) = diag.iter().chain(&off).position(|v| !v.is_finite()) {
            return Err(Error::Shape(format!("non-finite entry at position {i}")));
        }
        Ok(SymTridiagonal { diag, off })
    }

    /// Reads a row-major dense `n × n` matrix. Rejects entries outside the
    /// tridiagonal band and asymmetry above `1e-12` relative.
    pub fn from_dense(n: usize, data: &[f64]) -> Result<SymTridiagonal> {
        if data.len() != n * n {
            return Err(Error::Shape(format!("expected {} entries for {n} × {n}, got {}", n * n, data.len())));
        }
        let scale = data.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        for i in 0..n {
            for j in 0..n {
                let v = data[i * n + j];
                if i.abs_diff(j) > 1 && v != 0.0 {
                    return Err(Error::Shape(format!("entry ({i}, {j}) lies outside the tridiagonal band")));
                }
                let asym = (v - data[j * n + i]).abs() / scale;
                if asym > 1e-12 {
                    return Err(Error::Asymmetric { row: i, asymmetry: asym });
                }
            }
        }
        let diag = (0..n).map(|i| data[i * n + i]).collect();
        let off = (0..n.saturating_sub(1)).map(|i| 0.5 * (data[i * n + i + 1] + data[(i + 1) * n + i])).collect();
        SymTridiagonal::new(diag, off)
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for i in 0..n - 1 {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.len();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = self.diag[i];
            if i + 1 < n {
                m[i * n + i + 1] = self.off[i];
                m[(i + 1) * n + i] = self.off[i];
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        let d: f64 = self.diag.iter().map(|v| v * v).sum();
        let o: f64 = self.off.iter().map(|v| v * v).sum();
        (d + 2.0 * o).sqrt()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Spectral-norm bound `max(|lo|, |hi|)` from Gershgorin.
    pub fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let max_off_sq = self.off.iter().fold(1.0f64, |m, v| m.max(v * v));
        let pivmin = f64::MIN_POSITIVE * max_off_sq;
        let mut count = 0;
        let mut d = self.diag[0] - x;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            d = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / d;
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k` lowest eigenvalues by Sturm bisection, ascending.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let k = k.min(self.len());
        let (glo, ghi) = self.gershgorin();
        let floor = f64::EPSILON * self.norm_bound().max(f64::MIN_POSITIVE) * 1e-3;
        let mut out = Vec::with_capacity(k);
        let mut lo_start = glo - floor;
        for i in 0..k {
            let mut lo = lo_start;
            let mut hi = ghi + floor;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.sturm_count(mid) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + floor {
                    break;
                }
            }
            let value = 0.5 * (lo + hi);
            out.push(value);
            lo_start = lo;
        }
        out
    }

    /// The `k` lowest eigenpairs with unit Euclidean eigenvectors, ascending.
    /// Sign convention: the first component above `1e-6·max|x|` is positive.
    pub fn lowest_eigenpairs(&self, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let k = k.min(self.len());
        if self.len() < DENSE_CUTOFF {
            let (values, vectors) = self.dense_eigen()?;
            return Ok((values[..k].to_vec(), vectors.into_iter().take(k).collect()));
        }
        let values = self.lowest_eigenvalues(k);
        let vectors = self.inverse_iteration(&values);
        Ok((values, vectors))
    }

    fn inverse_iteration(&self, values: &[f64]) -> Vec<Vec<f64>> {
        let n = self.len();
        let norm = self.norm_bound().max(f64::MIN_POSITIVE);
        let cluster = 1e-3 * norm;
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(values.len());
        for (idx, &lambda) in values.iter().enumerate() {
            let lu = TridiagLu::factor(self, lambda, f64::EPSILON * norm);
            let mut x = start_vector(n, idx as u64);
            let first = (0..idx).find(|&j| (values[j] - lambda).abs() < cluster).unwrap_or(idx);
            for _ in 0..3 {
                x = lu.solve(x);
                for v in &vectors[first..idx] {
                    let dot: f64 = v.iter().zip(&x).map(|(a, b)| a * b).sum();
                    x.iter_mut().zip(v).for_each(|(xi, vi)| *xi -= dot * vi);
                }
                normalize(&mut x);
            }
            fix_sign(&mut x);
            vectors.push(x);
        }
        vectors
    }

    /// Full decomposition by implicit QL, ascending.
    pub fn dense_eigen(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let n = self.len();
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(0.0);
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        tqli(&mut d, &mut e, &mut z, n)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
        let values = order.iter().map(|&i| d[i]).collect();
        let vectors = order
            .iter()
            .map(|&i| {
                let mut v: Vec<f64> = (0..n).map(|k| z[k * n + i]).collect();
                normalize(&mut v);
                fix_sign(&mut v);
                v
            })
            .collect();
        Ok((values, vectors))
    }
}

/// Below this size the dense QL path is used.
pub const DENSE_CUTOFF: usize = 256;

fn start_vector(n: usize, seed: u64) -> Vec<f64> {
    // Small xorshift generator; any fixed sequence without special structure works.
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ (seed.wrapping_mul(0xBF58_476D_1CE4_E5B9) + 1);
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

pub(crate) fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

pub(crate) fn fix_sign(x: &mut [f64]) {
    let max = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-6 * max) {
        if *first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// LU factorization of `T - λ I` with partial pivoting.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(t: &SymTridiagonal, lambda: f64, tiny: f64) -> TridiagLu {
        let n = t.len();
        let mut dl = t.off.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - lambda).collect();
        let mut du = t.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                let fact = if d[i] != 0.0 { dl[i] / d[i] } else { 0.0 };
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for v in &mut d {
            if v.abs() < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        TridiagLu { dl, d, du, du2, swapped }
    }

    fn solve(&self, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
        // Rescale early so repeated solves near a singular shift stay finite.
        let m = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m > 0.0 && m.is_finite() {
            b.iter_mut().for_each(|v| *v /= m);
        }
        b
    }
}

fn tqli(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Unsupported("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zf = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * zf;
                    z[k * n + i] = c * z[k * n + i] - s * zf;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Compressed sparse row matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, mut triplets: Vec<(usize, usize, f64)>) -> CsrMatrix {
        triplets.sort_by_key(|a| (a.0, a.1));
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) outside {rows} × {cols}");
            if last == Some((r, c)) {
                *values.last_mut().expect("previous entry") += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        CsrMatrix { rows, cols, indptr, indices, values }
    }

    pub fn identity(n: usize) -> CsrMatrix {
        CsrMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, 1.0)).collect())
    }

    pub fn diagonal(values: &[f64]) -> CsrMatrix {
        let n = values.len();
        CsrMatrix::from_triplets(n, n, values.iter().enumerate().map(|(i, &v)| (i, i, v)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows)
            .flat_map(move |r| (self.indptr[r]..self.indptr[r + 1]).map(move |k| (r, self.indices[k], self.values[k])))
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        (self.indptr[r]..self.indptr[r + 1]).find(|&k| self.indices[k] == c).map_or(0.0, |k| self.values[k])
    }

    pub fn matmul(&self, other: &CsrMatrix) -> Result<CsrMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {} × {} by {} × {}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut triplets = Vec::new();
        let mut acc = vec![0.0; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.cols];
        for r in 0..self.rows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                let (mid, a) = (self.indices[k], self.values[k]);
                for q in other.indptr[mid]..other.indptr[mid + 1] {
                    let c = other.indices[q];
                    if !mark[c] {
                        mark[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * other.values[q];
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                triplets.push((r, c, acc[c]));
                acc[c] = 0.0;
                mark[c] = false;
            }
            touched.clear();
        }
        Ok(CsrMatrix::from_triplets(self.rows, other.cols, triplets))
    }

    /// `α·self + β·other`.
    pub fn combine(&self, alpha: f64, other: &CsrMatrix, beta: f64) -> Result<CsrMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "cannot add {} × {} and {} × {}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let triplets = self
            .triplets()
            .map(|(r, c, v)| (r, c, alpha * v))
            .chain(other.triplets().map(|(r, c, v)| (r, c, beta * v)))
            .collect();
        Ok(CsrMatrix::from_triplets(self.rows, self.cols, triplets))
    }

    pub fn scaled(&self, s: f64) -> CsrMatrix {
        CsrMatrix { values: self.values.iter().map(|v| s * v).collect(), ..self.clone() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Places `blocks[i][j]` (if present) at block position `(i, j)`.
    pub fn block(row_sizes: &[usize], col_sizes: &[usize], blocks: &[Vec<Option<&CsrMatrix>>]) -> Result<CsrMatrix> {
        let row_off: Vec<usize> = row_sizes
            .iter()
            .scan(0, |s, &n| {
                let o = *s;
                *s += n;
                Some(o)
            })
            .collect();
        let col_off: Vec<usize> = col_sizes
            .iter()
            .scan(0, |s, &n| {
                let o = *s;
                *s += n;
                Some(o)
            })
            .collect();
        let mut triplets = Vec::new();
        for (i, row) in blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if let Some(m) = b {
                    if m.rows != row_sizes[i] || m.cols != col_sizes[j] {
                        return Err(Error::Shape(format!("block ({i}, {j}) has the wrong size")));
                    }
                    triplets.extend(m.triplets().map(|(r, c, v)| (r + row_off[i], c + col_off[j], v)));
                }
            }
        }
        Ok(CsrMatrix::from_triplets(row_sizes.iter().sum(), col_sizes.iter().sum(), triplets))
    }
}

impl From<&SymTridiagonal> for CsrMatrix {
    fn from(t: &SymTridiagonal) -> CsrMatrix {
        let n = t.len();
        let mut trip: Vec<(usize, usize, f64)> = (0..n).map(|i| (i, i, t.diag[i])).collect();
        for i in 0..n - 1 {
            trip.push((i, i + 1, t.off[i]));
            trip.push((i + 1, i, t.off[i]));
        }
        CsrMatrix::from_triplets(n, n, trip)
    }
}
