//! Dense complex linear algebra used by the samplers and estimators.
//!
//! Determinants go through partially pivoted LU; the eigensolver is only
//! needed for half-power products over doubly degenerate spectra and for
//! evaluating symmetric functions of matrix eigenvalues.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Result, ZonalError};

pub type CMat = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Determinant as `(ln|det|, det/|det|)`; a singular matrix gives `(-inf, 0)`.
pub fn log_det(m: &CMat) -> Result<(f64, Complex64)> {
    let n = square_dim(m)?;
    let mut a = m.clone();
    let mut log_abs = 0.0;
    let mut phase = ONE;
    for k in 0..n {
        let mut piv = k;
        let mut best = a[(k, k)].norm();
        for i in k + 1..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return Ok((f64::NEG_INFINITY, ZERO));
        }
        if piv != k {
            a.swap_rows(k, piv);
            phase = -phase;
        }
        let d = a[(k, k)];
        log_abs += best.ln();
        phase *= d / best;
        for i in k + 1..n {
            let f = a[(i, k)] / d;
            if f != ZERO {
                for j in k + 1..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
            }
        }
    }
    Ok((log_abs, phase))
}

/// Determinant via partially pivoted LU.
pub fn det(m: &CMat) -> Result<Complex64> {
    let n = square_dim(m)?;
    let mut a = m.clone();
    let mut acc = ONE;
    for k in 0..n {
        let mut piv = k;
        let mut best = a[(k, k)].norm();
        for i in k + 1..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return Ok(ZERO);
        }
        if piv != k {
            a.swap_rows(k, piv);
            acc = -acc;
        }
        let d = a[(k, k)];
        acc *= d;
        for i in k + 1..n {
            let f = a[(i, k)] / d;
            if f != ZERO {
                for j in k + 1..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
            }
        }
    }
    Ok(acc)
}

fn square_dim(m: &CMat) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(ZonalError::NonSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

/// `det(z I − M)`.
pub fn char_poly_value(z: Complex64, m: &CMat) -> Result<Complex64> {
    let n = square_dim(m)?;
    let mut shifted = -m.clone();
    for i in 0..n {
        shifted[(i, i)] += z;
    }
    det(&shifted)
}

/// Pfaffian of a skew-symmetric matrix by pivoted Parlett–Reid elimination.
/// Only the strict upper triangle is read (the lower one is assumed to mirror it).
pub fn pfaffian(m: &CMat) -> Result<Complex64> {
    let n = square_dim(m)?;
    if n % 2 == 1 {
        return Ok(ZERO);
    }
    let mut a = m.clone();
    let mut pf = ONE;
    let mut k = 0;
    while k + 1 < n {
        let mut piv = k + 1;
        let mut best = a[(k, k + 1)].norm();
        for i in k + 2..n {
            let v = a[(k, i)].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return Ok(ZERO);
        }
        if piv != k + 1 {
            a.swap_rows(k + 1, piv);
            a.swap_columns(k + 1, piv);
            pf = -pf;
        }
        let d = a[(k, k + 1)];
        pf *= d;
        if k + 2 < n {
            let tau: Vec<Complex64> = (k + 2..n).map(|i| a[(k, i)] / d).collect();
            let col: Vec<Complex64> = (k + 2..n).map(|i| a[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    Ok(pf)
}

/// Eigenvalues of a general complex matrix (complex Schur form).
pub fn eigenvalues(m: &CMat) -> Result<Vec<Complex64>> {
    let n = square_dim(m)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), 1e-15, 10_000).ok_or_else(|| {
        ZonalError::InvalidParameter("Schur decomposition did not converge".into())
    })?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Default pairing tolerance `1e-6 · (1 + ‖M‖_F)`.
pub fn default_pair_tolerance(m: &CMat) -> f64 {
    1e-6 * (1.0 + m.norm())
}

/// Groups a doubly degenerate spectrum into pairs by greedy nearest-neighbour
/// matching after a lexicographic sort; returns one representative per pair.
pub fn pair_eigenvalues(mut eig: Vec<Complex64>, tol: f64) -> Result<Vec<Complex64>> {
    if eig.len() % 2 == 1 {
        return Err(ZonalError::DegeneracyViolation { gap: f64::INFINITY, tol });
    }
    eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut used = vec![false; eig.len()];
    let mut reps = Vec::with_capacity(eig.len() / 2);
    for i in 0..eig.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (j, gap) = (0..eig.len())
            .filter(|&j| !used[j])
            .map(|j| (j, (eig[j] - eig[i]).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("even count leaves a partner");
        if gap > tol {
            return Err(ZonalError::DegeneracyViolation { gap, tol });
        }
        used[j] = true;
        reps.push((eig[i] + eig[j]) * 0.5);
    }
    Ok(reps)
}

/// `Π (z − λ)` over one representative eigenvalue per degenerate pair of `M`.
pub fn sqrt_det_shifted(z: Complex64, m: &CMat) -> Result<Complex64> {
    let tol = default_pair_tolerance(m);
    sqrt_det_shifted_with_tolerance(z, m, tol)
}

pub fn sqrt_det_shifted_with_tolerance(z: Complex64, m: &CMat, tol: f64) -> Result<Complex64> {
    let reps = pair_eigenvalues(eigenvalues(m)?, tol)?;
    Ok(reps.into_iter().fold(ONE, |acc, l| acc * (z - l)))
}

/// The quaternion structure matrix `Q_{2n} = I_n ⊗ [[0, −1], [1, 0]]`.
pub fn q_matrix(n: usize) -> CMat {
    let mut q = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        q[(2 * i, 2 * i + 1)] = -ONE;
        q[(2 * i + 1, 2 * i)] = ONE;
    }
    q
}

/// `Q M^T Q^T`, the quaternion dual of `M`.
pub fn quaternion_dual(m: &CMat) -> CMat {
    let q = q_matrix(m.nrows() / 2);
    &q * m.transpose() * q.transpose()
}

/// `(H)^{-1/2}` for Hermitian positive definite `H`.
pub fn hermitian_inv_sqrt(h: &CMat) -> Result<CMat> {
    square_dim(h)?;
    let eig = SymmetricEigen::new(h.clone());
    if eig.eigenvalues.iter().any(|&v| !(v > 0.0)) {
        return Err(ZonalError::InvalidParameter("matrix is not positive definite".into()));
    }
    let d = CMat::from_diagonal(
        &eig.eigenvalues.map(|v| Complex64::new(1.0 / v.sqrt(), 0.0)),
    );
    Ok(&eig.eigenvectors * d * eig.eigenvectors.adjoint())
}

/// `ln det(I + X X^†)` via LU of the Hermitian positive definite matrix.
pub fn log_det_identity_plus_gram(x: &CMat) -> Result<f64> {
    let n = x.nrows();
    let g = CMat::identity(n, n) + x * x.adjoint();
    Ok(log_det(&g)?.0)
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}
