//! Closed-form Bogoliubov kernels between diamond/Unruh and Minkowski modes
//! and the wavepacket overlap integrals feeding the mirror circuit.
//!
//! With Omega = omega/a and kappa = k/a, the interior-mode coefficients are
//!   alpha0 = (2/a) sqrt(Omega kappa)/sinh(pi Omega) e^{2 i kappa} M(1+i Omega, 2, -4 i kappa)
//!   beta0  = -(2/a) sqrt(Omega kappa)/sinh(pi Omega) e^{2 i kappa} M(1-i Omega, 2, -4 i kappa)
//! and the Unruh-basis kernels carry sinh r / cosh r prefactors instead of
//! 1/sinh(pi Omega). Both e^{2 i kappa} M(1 +- i Omega, 2, -4 i kappa)
//! combinations are real-valued, so all four kernels are real.

use num_complex::Complex64;
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::modes::{DiamondScale, Frame, WavepacketSpec};
use crate::numerics::{integrate_adaptive, kummer_m, sinh_cosh_r, FREQ_FLOOR};

fn kernel_m(omega: f64, k: f64, scale: DiamondScale, conj_a: bool) -> Result<Complex64> {
    let a = scale.a();
    let big_omega = omega / a;
    let kappa = k / a;
    let sign = if conj_a { -1.0 } else { 1.0 };
    let m = kummer_m(
        Complex64::new(1.0, sign * big_omega),
        Complex64::new(2.0, 0.0),
        Complex64::new(0.0, -4.0 * kappa),
    )?;
    Ok(Complex64::from_polar(1.0, 2.0 * kappa) * m)
}

fn check_freqs(omega: f64, k: f64) -> Result<()> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidParameter(format!("omega = {omega} must be positive")));
    }
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("k = {k} must be positive")));
    }
    Ok(())
}

/// Interior-mode Bogoliubov coefficient alpha0(omega, k) = <g_omega^0, u_k>.
pub fn alpha0(omega: f64, k: f64, scale: DiamondScale) -> Result<Complex64> {
    check_freqs(omega, k)?;
    let a = scale.a();
    let (o, kap) = (omega / a, k / a);
    let v = (2.0 / a) * (o * kap).sqrt() / (PI * o).sinh() * kernel_m(omega, k, scale, false)?;
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "alpha0 overflowed at omega/a = {o}, k/a = {kap}"
        )));
    }
    Ok(v)
}

/// Interior-mode Bogoliubov coefficient beta0(omega, k) = <g_omega^0, u_k*>.
pub fn beta0(omega: f64, k: f64, scale: DiamondScale) -> Result<Complex64> {
    check_freqs(omega, k)?;
    let a = scale.a();
    let (o, kap) = (omega / a, k / a);
    let v = -(2.0 / a) * (o * kap).sqrt() / (PI * o).sinh() * kernel_m(omega, k, scale, true)?;
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "beta0 overflowed at omega/a = {o}, k/a = {kap}"
        )));
    }
    Ok(v)
}

/// Unruh-to-Minkowski kernel A_{k omega} = (4 sqrt(Omega kappa)/a) sinh(r_omega) e^{2 i kappa} M(1+i Omega, 2, -4 i kappa).
pub fn unruh_a(k: f64, omega: f64, scale: DiamondScale) -> Result<Complex64> {
    check_freqs(omega, k)?;
    let a = scale.a();
    let (o, kap) = (omega / a, k / a);
    let (sh, _) = sinh_cosh_r(o);
    Ok((4.0 / a) * (o * kap).sqrt() * sh * kernel_m(omega, k, scale, false)?)
}

/// Unruh-to-Minkowski kernel B_{k omega} = (4 sqrt(Omega kappa)/a) cosh(r_omega) e^{2 i kappa} M(1-i Omega, 2, -4 i kappa).
pub fn unruh_b(k: f64, omega: f64, scale: DiamondScale) -> Result<Complex64> {
    check_freqs(omega, k)?;
    let a = scale.a();
    let (o, kap) = (omega / a, k / a);
    let (_, ch) = sinh_cosh_r(o);
    Ok((4.0 / a) * (o * kap).sqrt() * ch * kernel_m(omega, k, scale, true)?)
}

/// Second-order overlap data for one Minkowski detector against the
/// reflected diamond wavepacket.
#[derive(Debug, Clone, Copy)]
pub struct OverlapSet {
    /// A_fg = int dw g*(w) cosh r_w int dk f(k) A_{kw}; equals the
    /// commutator [a_f, b_g^dagger].
    pub a_fg: Complex64,
    /// B_fg = int dw g(w) sinh r_w int dk f(k) B_{kw}; equals
    /// -[b_g, a_f].
    pub b_fg: Complex64,
    /// I_c = int dw |g(w)|^2 cosh^2 r_w  (>= 1).
    pub i_c: f64,
    /// I_s = int dw |g(w)|^2 sinh^2 r_w  (>= 0, the smeared Planck factor).
    pub i_s: f64,
    /// [a_f, b_g^dagger], assembled on the same double-integral path as the
    /// circuit's moment formulas (identical to `a_fg`).
    pub commutator: Complex64,
}

struct InnerCache {
    map: HashMap<u64, (Complex64, Complex64)>,
}

fn inner_pair(
    f: &WavepacketSpec,
    omega: f64,
    scale: DiamondScale,
    window: (f64, f64),
    cache: &RefCell<InnerCache>,
    failure: &RefCell<Option<Error>>,
) -> (Complex64, Complex64) {
    if let Some(&hit) = cache.borrow().map.get(&omega.to_bits()) {
        return hit;
    }
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let eval = |conj_a: bool| -> Complex64 {
        let a = scale.a();
        let o = omega / a;
        let (sh, ch) = sinh_cosh_r(o);
        let pre = (4.0 / a) * o.sqrt() * if conj_a { ch } else { sh };
        // scale proxy at the envelope center for the absolute floor
        let kc = f.center_freq();
        let proxy = match kernel_m(omega, kc, scale, conj_a) {
            Ok(m) => (pre * (kc / scale.a()).sqrt() * m).norm() * (window.1 - window.0),
            Err(_) => 1.0,
        };
        let r = integrate_adaptive(
            |k| match kernel_m(omega, k, scale, conj_a) {
                Ok(m) => f.profile(k) * pre * (k / a).sqrt() * m,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    nan
                }
            },
            window.0,
            window.1,
            1e-12 * proxy.max(1e-30),
            1e-7,
        );
        match r {
            Ok(q) => q.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                nan
            }
        }
    };
    let ia = eval(false);
    let ib = eval(true);
    cache.borrow_mut().map.insert(omega.to_bits(), (ia, ib));
    (ia, ib)
}

/// All overlap integrals between a Minkowski detector wavepacket `f` and the
/// reflected diamond wavepacket `g`, evaluated by nested adaptive quadrature
/// (outer omega, inner k, inner results memoized on the outer grid) to an
/// overall relative tolerance of 1e-5.
pub fn overlaps(f: &WavepacketSpec, g: &WavepacketSpec, scale: DiamondScale) -> Result<OverlapSet> {
    if f.frame() != Frame::Minkowski {
        return Err(Error::InvalidParameter(
            "overlaps: detector wavepacket must be Minkowski-frame".into(),
        ));
    }
    if g.frame() != Frame::Diamond {
        return Err(Error::InvalidParameter(
            "overlaps: reflected wavepacket must be Diamond-frame".into(),
        ));
    }
    let a = scale.a();
    let kwin = {
        let (lo, hi) = f.window();
        (lo.max(FREQ_FLOOR * a), hi)
    };
    let wwin = {
        let (lo, hi) = g.window();
        (lo.max(FREQ_FLOOR * a), hi)
    };
    let cache = RefCell::new(InnerCache { map: HashMap::new() });
    let failure: RefCell<Option<Error>> = RefCell::new(None);

    let take_failure = |fallback: Error| -> Error {
        failure.borrow_mut().take().unwrap_or(fallback)
    };

    // outer pass for A_fg
    let w0 = g.center_freq();
    let center_pair = inner_pair(f, w0, scale, kwin, &cache, &failure);
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    let (sh0, ch0) = sinh_cosh_r(w0 / a);
    let g0 = g.profile(w0).norm();
    let proxy_a = (g0 * ch0 * center_pair.0.norm() * (wwin.1 - wwin.0)).max(1e-30);
    let proxy_b = (g0 * sh0 * center_pair.1.norm() * (wwin.1 - wwin.0)).max(1e-30);

    let a_fg = integrate_adaptive(
        |w| {
            let (ia, _) = inner_pair(f, w, scale, kwin, &cache, &failure);
            let (_, ch) = sinh_cosh_r(w / a);
            g.profile(w).conj() * ch * ia
        },
        wwin.0,
        wwin.1,
        1e-12 * proxy_a,
        1e-6,
    )
    .map_err(|e| take_failure(e))?
    .value;

    let b_fg = integrate_adaptive(
        |w| {
            let (_, ib) = inner_pair(f, w, scale, kwin, &cache, &failure);
            let (sh, _) = sinh_cosh_r(w / a);
            g.profile(w) * sh * ib
        },
        wwin.0,
        wwin.1,
        1e-12 * proxy_b,
        1e-6,
    )
    .map_err(|e| take_failure(e))?
    .value;

    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }

    let (i_c, i_s) = planck_weights(g, scale)?;
    Ok(OverlapSet {
        a_fg,
        b_fg,
        i_c,
        i_s,
        commutator: a_fg,
    })
}

/// (I_c, I_s): the cosh^2/sinh^2-weighted norms of the diamond wavepacket.
/// I_c - I_s = 1 for a normalized profile.
pub fn planck_weights(g: &WavepacketSpec, scale: DiamondScale) -> Result<(f64, f64)> {
    if g.frame() != Frame::Diamond {
        return Err(Error::InvalidParameter(
            "planck_weights: wavepacket must be Diamond-frame".into(),
        ));
    }
    let a = scale.a();
    let (lo, hi) = g.window();
    let lo = lo.max(FREQ_FLOOR * a);
    let i_c = integrate_adaptive(
        |w| {
            let x = -(-2.0 * PI * w / a).exp_m1();
            Complex64::new(g.profile(w).norm_sqr() / x, 0.0)
        },
        lo,
        hi,
        1e-14,
        1e-9,
    )?
    .value
    .re;
    let i_s = integrate_adaptive(
        |w| {
            let x = -(-2.0 * PI * w / a).exp_m1();
            Complex64::new(g.profile(w).norm_sqr() * (-2.0 * PI * w / a).exp() / x, 0.0)
        },
        lo,
        hi,
        1e-16,
        1e-9,
    )?
    .value
    .re;
    Ok((i_c, i_s))
}

/// Overlap int dk f1*(k) f2(k) of two same-direction Minkowski detectors;
/// gates the same-side entanglement computations.
pub fn detector_commutator(f1: &WavepacketSpec, f2: &WavepacketSpec) -> Result<Complex64> {
    if f1.frame() != Frame::Minkowski || f2.frame() != Frame::Minkowski {
        return Err(Error::InvalidParameter(
            "detector_commutator: both wavepackets must be Minkowski-frame".into(),
        ));
    }
    if f1.direction() != f2.direction() {
        return Err(Error::InvalidParameter(
            "detector_commutator: wavepackets must share a direction".into(),
        ));
    }
    let (lo1, hi1) = f1.window();
    let (lo2, hi2) = f2.window();
    let (lo, hi) = (lo1.min(lo2), hi1.max(hi2));
    Ok(integrate_adaptive(
        |k| f1.profile(k).conj() * f2.profile(k),
        lo,
        hi,
        1e-13,
        1e-9,
    )?
    .value)
}
