//! Two-mode Gaussian-state entanglement measures: physicality, standard
//! form, logarithmic negativity, entanglement of formation and EPR variance
//! products.
//!
//! Conventions: quadrature basis (X_A, P_A, X_B, P_B) with X = a + a^dagger,
//! P = -i(a - a^dagger), vacuum covariance = identity. A state is physical
//! iff sigma + i Omega >= 0 with Omega the symplectic form in this basis.

use nalgebra::{Matrix2, Matrix4, SMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// PSD slack used when testing sigma - sigma_p >= 0 inside the EoF
/// optimizer; strict zero is numerically unattainable.
const PSD_TOL: f64 = 1e-9;

/// 4x4 real symmetric covariance matrix of a two-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    m: Matrix4<f64>,
}

fn symplectic_form() -> Matrix4<f64> {
    let mut k = Matrix4::zeros();
    k[(0, 1)] = 1.0;
    k[(1, 0)] = -1.0;
    k[(2, 3)] = 1.0;
    k[(3, 2)] = -1.0;
    k
}

impl CovarianceMatrix {
    pub fn from_entries(entries: [[f64; 4]; 4]) -> Result<Self> {
        let m = Matrix4::from_fn(|i, j| entries[i][j]);
        Self::from_matrix(m)
    }

    pub fn from_matrix(m: Matrix4<f64>) -> Result<Self> {
        for i in 0..4 {
            for j in (i + 1)..4 {
                let scale = 1.0 + m[(i, j)].abs().max(m[(j, i)].abs());
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-9 * scale {
                    return Err(Error::InvalidParameter(format!(
                        "covariance matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        if !m.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("covariance matrix has non-finite entries".into()));
        }
        Ok(CovarianceMatrix { m })
    }

    pub fn identity() -> Self {
        CovarianceMatrix { m: Matrix4::identity() }
    }

    /// Pure two-mode squeezed vacuum with squeezing parameter r.
    pub fn two_mode_squeezed(r: f64) -> Self {
        let c = (2.0 * r).cosh();
        let s = (2.0 * r).sinh();
        let mut m = Matrix4::identity() * c;
        m[(0, 2)] = s;
        m[(2, 0)] = s;
        m[(1, 3)] = -s;
        m[(3, 1)] = -s;
        CovarianceMatrix { m }
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    /// Congruence transform S sigma S^T (symplectic S preserves physicality).
    pub fn congruence(&self, s: &Matrix4<f64>) -> Self {
        CovarianceMatrix { m: s * self.m * s.transpose() }
    }

    /// Add isotropic classical noise eta >= 0.
    pub fn with_added_noise(&self, eta: f64) -> Self {
        CovarianceMatrix { m: self.m + Matrix4::identity() * eta }
    }

    /// Smallest eigenvalue of the Hermitian matrix sigma + i Omega, via the
    /// real symmetric 8x8 embedding [[S, -K], [K, S]].
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let k = symplectic_form();
        let mut big = SMatrix::<f64, 8, 8>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                big[(i, j)] = self.m[(i, j)];
                big[(i + 4, j + 4)] = self.m[(i, j)];
                big[(i, j + 4)] = -k[(i, j)];
                big[(i + 4, j)] = k[(i, j)];
            }
        }
        big.symmetric_eigenvalues().min()
    }

    pub fn max_abs_diff_from_identity(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.m[(i, j)] - target).abs());
            }
        }
        worst
    }

    fn det_blocks(&self) -> (f64, f64, f64, f64) {
        let a = self.m.fixed_view::<2, 2>(0, 0).into_owned();
        let b = self.m.fixed_view::<2, 2>(2, 2).into_owned();
        let c = self.m.fixed_view::<2, 2>(0, 2).into_owned();
        (
            a.determinant(),
            b.determinant(),
            c.determinant(),
            self.m.determinant(),
        )
    }
}

/// True iff min eig(sigma + i Omega) >= -tol.
pub fn is_physical(sigma: &CovarianceMatrix, tol: f64) -> bool {
    sigma.uncertainty_min_eigenvalue() >= -tol
}

/// Standard-form data (n_a, n_b, c_plus, c_minus) reachable by local
/// symplectic transformations, oriented so that c_plus >= 0 >= c_minus for
/// entangled (det C < 0) states and |c_plus| >= |c_minus| throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardForm {
    pub n_a: f64,
    pub n_b: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

impl StandardForm {
    /// The standard-form covariance matrix itself.
    pub fn to_matrix(&self) -> CovarianceMatrix {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = self.n_a;
        m[(1, 1)] = self.n_a;
        m[(2, 2)] = self.n_b;
        m[(3, 3)] = self.n_b;
        m[(0, 2)] = self.c_plus;
        m[(2, 0)] = self.c_plus;
        m[(1, 3)] = self.c_minus;
        m[(3, 1)] = self.c_minus;
        CovarianceMatrix { m }
    }
}

/// Reduce a physical CM to standard form through its four local symplectic
/// invariants (det A, det B, det C, det sigma).
pub fn standard_form(sigma: &CovarianceMatrix) -> Result<StandardForm> {
    if !is_physical(sigma, 1e-6) {
        return Err(Error::NonPhysical {
            min_eig: sigma.uncertainty_min_eigenvalue(),
        });
    }
    let (da, db, dc, ds) = sigma.det_blocks();
    if da <= 0.0 || db <= 0.0 {
        return Err(Error::NonPhysical { min_eig: da.min(db) });
    }
    let n_a = da.sqrt();
    let n_b = db.sqrt();
    let nn = n_a * n_b;
    let s = (nn * nn + dc * dc - ds) / nn;
    let disc = (s * s - 4.0 * dc * dc).max(0.0);
    let u = 0.5 * (s + disc.sqrt());
    let v = 0.5 * (s - disc.sqrt());
    let c_plus = u.max(0.0).sqrt();
    let c_minus = if dc < 0.0 {
        -v.max(0.0).sqrt()
    } else {
        v.max(0.0).sqrt()
    };
    Ok(StandardForm { n_a, n_b, c_plus, c_minus })
}

/// Logarithmic negativity max(0, -log2 nu-tilde_minus) from the smaller
/// symplectic eigenvalue of the partial transpose.
pub fn log_negativity(sigma: &CovarianceMatrix) -> f64 {
    let (da, db, dc, ds) = sigma.det_blocks();
    let delta_tilde = da + db - 2.0 * dc;
    let inner = (delta_tilde * delta_tilde - 4.0 * ds).max(0.0);
    let nu2 = 0.5 * (delta_tilde - inner.sqrt());
    if nu2 <= 0.0 {
        // degenerate/edge input; treat as maximally failing PPT
        return 0.0;
    }
    (-0.5 * nu2.log2()).max(0.0)
}

/// Entropy of entanglement of the pure two-mode squeezed state:
/// H(r) = cosh^2 r log2 cosh^2 r - sinh^2 r log2 sinh^2 r.
pub fn entropy_of_entanglement(r: f64) -> f64 {
    debug_assert!(r >= 0.0);
    let c2 = r.cosh() * r.cosh();
    let s2 = r.sinh() * r.sinh();
    if s2 == 0.0 {
        return 0.0;
    }
    c2 * c2.log2() - s2 * s2.log2()
}

/// 2x2 local symplectic R(t2) Sq(s) R(t1) (rotations and single-mode
/// squeezing).
pub fn local_symplectic(t1: f64, s: f64, t2: f64) -> Matrix2<f64> {
    let rot = |t: f64| Matrix2::new(t.cos(), t.sin(), -t.sin(), t.cos());
    let sq = Matrix2::new(s.exp(), 0.0, 0.0, (-s).exp());
    rot(t2) * sq * rot(t1)
}

/// Direct sum of two single-mode symplectics.
pub fn direct_sum(sa: &Matrix2<f64>, sb: &Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = sa[(i, j)];
            m[(i + 2, j + 2)] = sb[(i, j)];
        }
    }
    m
}

fn tmsv_matrix(r: f64) -> Matrix4<f64> {
    *CovarianceMatrix::two_mode_squeezed(r).matrix()
}

fn min_eig_diff(target: &Matrix4<f64>, s_local: &Matrix4<f64>, r: f64) -> f64 {
    let sigma_p = s_local * tmsv_matrix(r) * s_local.transpose();
    (target - sigma_p).symmetric_eigenvalues().min()
}

/// Minimal feasible TMSV squeezing r with sigma - S sigma_p(r) S^T >= 0 for
/// fixed local parameters, or None if no r in [0, r_cap] is feasible.
///
/// The feasibility margin min-eig(r) is first maximized (coarse grid +
/// ternary refinement; for pure targets the feasible set degenerates to a
/// point, which plain bisection would miss), then the left crossing of
/// -PSD_TOL is bisected.
fn min_feasible_r(target: &Matrix4<f64>, s_local: &Matrix4<f64>, r_cap: f64) -> Option<f64> {
    let f = |r: f64| min_eig_diff(target, s_local, r);
    const COARSE: usize = 32;
    let mut best = (0.0f64, f(0.0));
    for i in 1..=COARSE {
        let r = r_cap * i as f64 / COARSE as f64;
        let v = f(r);
        if v > best.1 {
            best = (r, v);
        }
    }
    // ternary refinement around the coarse peak
    let h = r_cap / COARSE as f64;
    let (mut lo, mut hi) = ((best.0 - h).max(0.0), (best.0 + h).min(r_cap));
    for _ in 0..60 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let r_peak = 0.5 * (lo + hi);
    if f(r_peak) < -PSD_TOL {
        return None;
    }
    if f(0.0) >= -PSD_TOL {
        return Some(0.0);
    }
    let (mut lo, mut hi) = (0.0, r_peak);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= -PSD_TOL {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

fn nelder_mead<F: FnMut(&[f64; 6]) -> f64>(
    f: &mut F,
    start: [f64; 6],
    step: f64,
    max_iter: usize,
    ftol: f64,
) -> ([f64; 6], f64) {
    const N: usize = 6;
    let mut simplex: Vec<[f64; 6]> = Vec::with_capacity(N + 1);
    simplex.push(start);
    for i in 0..N {
        let mut p = start;
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    for _ in 0..max_iter {
        let mut idx: Vec<usize> = (0..=N).collect();
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let (best, worst, second_worst) = (idx[0], idx[N], idx[N - 1]);
        if (values[worst] - values[best]).abs() <= ftol {
            break;
        }
        let mut centroid = [0.0; 6];
        for &i in idx.iter().take(N) {
            for d in 0..N {
                centroid[d] += simplex[i][d] / N as f64;
            }
        }
        let blend = |a: &[f64; 6], b: &[f64; 6], t: f64| {
            let mut out = [0.0; 6];
            for d in 0..N {
                out[d] = a[d] + t * (b[d] - a[d]);
            }
            out
        };
        let reflected = blend(&centroid, &simplex[worst], -1.0);
        let fr = f(&reflected);
        if fr < values[best] {
            let expanded = blend(&centroid, &simplex[worst], -2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            let contracted = blend(&centroid, &simplex[worst], 0.5);
            let fc = f(&contracted);
            if fc < values[worst] {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                let best_point = simplex[best];
                for i in 0..=N {
                    if i != best {
                        simplex[i] = blend(&best_point, &simplex[i], 0.5);
                        values[i] = f(&simplex[i]);
                    }
                }
            }
        }
    }
    let mut best = (simplex[0], values[0]);
    for i in 1..=N {
        if values[i] < best.1 {
            best = (simplex[i], values[i]);
        }
    }
    best
}

/// Default absolute tolerance of the EoF optimizer.
pub const EOF_DEFAULT_TOL: f64 = 1e-4;

/// Entanglement of formation of a physical two-mode CM: the infimum of
/// H(r) over pure two-mode-squeezed decompositions sigma = sigma_p + phi
/// with phi >= 0, to absolute tolerance `tol`.
///
/// Strategy: reduce to standard form, then for fixed local symplectic
/// parameters find the minimal feasible r (bisection against the PSD
/// constraint) and minimize over the local parameters with a multi-restart
/// derivative-free simplex search. Returns 0 whenever the logarithmic
/// negativity vanishes (PPT separability).
pub fn eof(sigma: &CovarianceMatrix, tol: f64) -> Result<f64> {
    if !is_physical(sigma, 1e-6) {
        return Err(Error::NonPhysical {
            min_eig: sigma.uncertainty_min_eigenvalue(),
        });
    }
    if log_negativity(sigma) == 0.0 {
        return Ok(0.0);
    }
    let sf = standard_form(sigma)?;
    let target = *sf.to_matrix().matrix();
    let lam_max = target.symmetric_eigenvalues().max();
    let r_cap = 0.5 * lam_max.ln() + 1.0;

    let mut objective = |theta: &[f64; 6]| -> f64 {
        let sa = local_symplectic(theta[0], theta[1], theta[2]);
        let sb = local_symplectic(theta[3], theta[4], theta[5]);
        let s_local = direct_sum(&sa, &sb);
        match min_feasible_r(&target, &s_local, r_cap) {
            Some(r) => entropy_of_entanglement(r),
            None => f64::INFINITY,
        }
    };

    const RESTARTS: usize = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(0xe0f_5eed);
    let mut results: Vec<f64> = Vec::with_capacity(RESTARTS);
    let mut best_point = [0.0f64; 6];
    let mut best_val = f64::INFINITY;
    for restart in 0..RESTARTS {
        let start: [f64; 6] = if restart == 0 {
            [0.0; 6]
        } else {
            let mut p = [0.0; 6];
            for (d, v) in p.iter_mut().enumerate() {
                *v = if d == 1 || d == 4 {
                    rng.random_range(-0.6..0.6)
                } else {
                    rng.random_range(-1.5..1.5)
                };
            }
            p
        };
        let (point, val) = nelder_mead(&mut objective, start, 0.25, 150, tol / 20.0);
        if val.is_finite() {
            results.push(val);
            if val < best_val {
                best_val = val;
                best_point = point;
            }
        }
    }
    if results.is_empty() {
        return Err(Error::OptimizationFailed {
            best: f64::INFINITY,
            runner_up: f64::INFINITY,
            allowed: 10.0 * tol,
        });
    }
    // polish the winner once more with a tighter simplex
    let (_, polished) = nelder_mead(&mut objective, best_point, 0.05, 150, tol / 50.0);
    let best = best_val.min(polished);
    results.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if results.len() >= 2 {
        let runner_up = results[1];
        if runner_up - best > 10.0 * tol {
            return Err(Error::OptimizationFailed {
                best,
                runner_up,
                allowed: 10.0 * tol,
            });
        }
    }
    Ok(best.max(0.0))
}

/// EPR variance product sqrt(V_X V_P) with V_X = <(X_A - X_B)^2>/2 and
/// V_P = <(P_A + P_B)^2>/2, evaluated on the standard-form CM; values below
/// 1 certify two-mode squeezing.
pub fn epr_variance_product(sigma: &CovarianceMatrix) -> Result<f64> {
    let sf = standard_form(sigma)?;
    let v_x = 0.5 * (sf.n_a + sf.n_b - 2.0 * sf.c_plus);
    let v_p = 0.5 * (sf.n_a + sf.n_b + 2.0 * sf.c_minus);
    Ok((v_x.max(0.0) * v_p.max(0.0)).sqrt())
}

/// Deterministic sampler of random physical CMs (thermal states pushed
/// through random two-mode symplectics); used by property tests.
pub fn random_physical_cm(rng: &mut impl Rng) -> CovarianceMatrix {
    let nu1 = 1.0 + rng.random_range(0.0..1.5f64);
    let nu2 = 1.0 + rng.random_range(0.0..1.5f64);
    let mut thermal = Matrix4::identity();
    thermal[(0, 0)] = nu1;
    thermal[(1, 1)] = nu1;
    thermal[(2, 2)] = nu2;
    thermal[(3, 3)] = nu2;

    let sa = local_symplectic(
        rng.random_range(-3.0..3.0),
        rng.random_range(-0.7..0.7),
        rng.random_range(-3.0..3.0),
    );
    let sb = local_symplectic(
        rng.random_range(-3.0..3.0),
        rng.random_range(-0.7..0.7),
        rng.random_range(-3.0..3.0),
    );
    let r = rng.random_range(0.0..1.0f64);
    let (ch, sh) = (r.cosh(), r.sinh());
    let mut tms = Matrix4::zeros();
    for i in 0..2 {
        tms[(i, i)] = ch;
        tms[(i + 2, i + 2)] = ch;
    }
    tms[(0, 2)] = sh;
    tms[(2, 0)] = sh;
    tms[(1, 3)] = -sh;
    tms[(3, 1)] = -sh;
    let s = direct_sum(&sa, &sb) * tms;
    CovarianceMatrix { m: s * thermal * s.transpose() }
}
