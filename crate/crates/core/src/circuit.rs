//! The non-perturbative mirror interaction: output second moments, particle
//! numbers, covariance-matrix assembly and energy-flux analysis.
//!
//! The detector operator after the beamsplitter is
//!   a_f' = a_f + mu * Db + nu * Db^dagger,
//! with mu = [a_f, b_g^dagger] = A_fg, nu = [b_g, a_f] = -B_fg and
//! Db the beamsplitter increment of the reflected wavepacket mode. All
//! moments below follow from this decomposition and vacuum contractions of
//! the Unruh modes; a finite-mode symplectic simulation of the same circuit
//! reproduces every entry (see the acceptance suite).

use num_complex::Complex64;

use crate::bogoliubov::{detector_commutator, overlaps, planck_weights, OverlapSet};
use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::modes::{
    Conjugate, DiamondScale, DiamondWaveform, Direction, Frame, MinkowskiWaveform, WavepacketSpec,
};
use crate::modes::klein_gordon_inner;

/// Default magnitude gate on the overlap of same-direction detectors.
pub const DEFAULT_OVERLAP_GATE: f64 = 0.05;

/// Beamsplitter parameters of the diamond-frame reflection: cos(theta) is
/// the transmissivity amplitude, phi the mirror phase. theta = 0 is the
/// identity channel, theta = pi/2 the perfect mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorUnitary {
    theta: f64,
    phi: f64,
}

impl MirrorUnitary {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "mirror theta = {theta} must lie in [0, pi]"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParameter("mirror phi must be finite".into()));
        }
        Ok(MirrorUnitary { theta, phi })
    }

    pub fn identity() -> Self {
        MirrorUnitary { theta: 0.0, phi: 0.0 }
    }

    pub fn perfect_mirror(phi: f64) -> Self {
        MirrorUnitary { theta: std::f64::consts::FRAC_PI_2, phi }
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }
    #[inline]
    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// A Minkowski wavepacket detector tied to one moving sector.
#[derive(Debug, Clone)]
pub struct DetectorChannel {
    spec: WavepacketSpec,
    side: Direction,
}

impl DetectorChannel {
    pub fn new(spec: WavepacketSpec, side: Direction) -> Result<Self> {
        if spec.frame() != Frame::Minkowski {
            return Err(Error::InvalidParameter(
                "detector channel needs a Minkowski-frame wavepacket".into(),
            ));
        }
        if spec.direction() != side {
            return Err(Error::InvalidParameter(
                "detector wavepacket direction is inconsistent with its side".into(),
            ));
        }
        Ok(DetectorChannel { spec, side })
    }

    #[inline]
    pub fn spec(&self) -> &WavepacketSpec {
        &self.spec
    }
    #[inline]
    pub fn side(&self) -> Direction {
        self.side
    }
}

/// Second-order vacuum moments of a pair of output detectors A, B.
#[derive(Debug, Clone, Copy, Default)]
pub struct MomentSet {
    /// <a_A^dagger a_A>
    pub number_aa: Complex64,
    /// <a_B^dagger a_B>
    pub number_bb: Complex64,
    /// <a_A^dagger a_B>
    pub number_ab: Complex64,
    /// <a_A a_A>
    pub pair_aa: Complex64,
    /// <a_B a_B>
    pub pair_bb: Complex64,
    /// <a_A a_B>
    pub pair_ab: Complex64,
}

fn number_moment(ov: &OverlapSet, u: &MirrorUnitary) -> f64 {
    2.0 * (1.0 - u.theta.cos()) * (ov.a_fg.norm_sqr() * ov.i_s + ov.b_fg.norm_sqr() * ov.i_c)
}

fn pair_moment_same(ov: &OverlapSet, u: &MirrorUnitary) -> Complex64 {
    -2.0 * (1.0 - u.theta.cos()) * (ov.i_c + ov.i_s) * ov.a_fg * ov.b_fg
}

/// Vacuum particle number in one output detector, Eq.-(36) route:
/// N = 2(1 - cos theta) [ |A_fg|^2 I_s + |B_fg|^2 I_c ]. Phase-independent,
/// zero at theta = 0, non-negative.
pub fn particle_number(
    det: &DetectorChannel,
    g: &WavepacketSpec,
    u: &MirrorUnitary,
    scale: DiamondScale,
) -> Result<f64> {
    let ov = overlaps(det.spec(), g, scale)?;
    Ok(number_moment(&ov, u))
}

fn fast_commutators(
    det: &DetectorChannel,
    g: &WavepacketSpec,
    scale: DiamondScale,
) -> Result<(Complex64, Complex64)> {
    let gw = DiamondWaveform::new(g.center_freq(), g.bandwidth(), scale)?;
    let fw = MinkowskiWaveform {
        k0: det.spec().center_freq(),
        sigma: det.spec().bandwidth(),
        center: det.spec().center_pos(),
    };
    let (dlo, dhi) = gw.support_window(12.0);
    let half = 12.0 / fw.sigma;
    let lo = dlo.max(fw.center - half);
    let hi = dhi.min(fw.center + half);
    if lo >= hi {
        return Ok((Complex64::default(), Complex64::default()));
    }
    // mu = <g_G^0, f_G>; nu = -<g_G^0, conj(f_G)> (the beta-type commutator
    // pairs the diamond waveform with the negative-frequency partner)
    let mu = klein_gordon_inner(&gw, &fw, (lo, hi), 1e-12, 1e-8)?;
    let nu = -klein_gordon_inner(&gw, &Conjugate(fw), (lo, hi), 1e-12, 1e-8)?;
    Ok((mu, nu))
}

/// Same contract as [`particle_number`], with both commutators evaluated via
/// position-space Klein-Gordon inner products of the closed-form waveforms:
/// N = 2(1 - cos theta) [ |mu|^2 I_s + |nu|^2 I_c ]. Intended for high-k0
/// sweeps where the double frequency integrals become expensive; valid in
/// the narrowband regime of the closed forms.
pub fn particle_number_fast(
    det: &DetectorChannel,
    g: &WavepacketSpec,
    u: &MirrorUnitary,
    scale: DiamondScale,
) -> Result<f64> {
    let (mu, nu) = fast_commutators(det, g, scale)?;
    let (i_c, i_s) = planck_weights(g, scale)?;
    Ok(2.0 * (1.0 - u.theta.cos()) * (mu.norm_sqr() * i_s + nu.norm_sqr() * i_c))
}

/// Output moments for a left-moving detector (channel A) paired with a
/// right-moving detector (channel B).
pub fn output_moments_lr(
    det_l: &DetectorChannel,
    det_r: &DetectorChannel,
    g: &WavepacketSpec,
    u: &MirrorUnitary,
    scale: DiamondScale,
) -> Result<MomentSet> {
    if det_l.side() != Direction::Left || det_r.side() != Direction::Right {
        return Err(Error::InvalidParameter(
            "output_moments_lr: channel A must be left-moving and channel B right-moving".into(),
        ));
    }
    let ov1 = overlaps(det_l.spec(), g, scale)?;
    let ov2 = overlaps(det_r.spec(), g, scale)?;
    let st = u.theta.sin();
    let i = Complex64::new(0.0, 1.0);
    // <a_A a_B> = -i sin(theta) [ e^{-i phi} A_B B_A + e^{i phi} A_A B_B ]
    let pair_ab = -i
        * st
        * (Complex64::from_polar(1.0, -u.phi) * ov2.a_fg * ov1.b_fg
            + Complex64::from_polar(1.0, u.phi) * ov1.a_fg * ov2.b_fg);
    Ok(MomentSet {
        number_aa: number_moment(&ov1, u).into(),
        number_bb: number_moment(&ov2, u).into(),
        number_ab: Complex64::default(),
        pair_aa: pair_moment_same(&ov1, u),
        pair_bb: pair_moment_same(&ov2, u),
        pair_ab,
    })
}

/// Output moments for two detectors on the same side (channel A at the
/// final ray, channel B scanning), gated on their overlap.
pub fn output_moments_ll(
    det_plus: &DetectorChannel,
    det_minus: &DetectorChannel,
    g: &WavepacketSpec,
    u: &MirrorUnitary,
    scale: DiamondScale,
    overlap_gate: f64,
) -> Result<MomentSet> {
    if det_plus.side() != det_minus.side() {
        return Err(Error::InvalidParameter(
            "output_moments_ll: both detectors must move in the same direction".into(),
        ));
    }
    let ov_det = detector_commutator(det_plus.spec(), det_minus.spec())?;
    if ov_det.norm() > overlap_gate {
        return Err(Error::DetectorOverlapTooLarge {
            overlap: ov_det.norm(),
            gate: overlap_gate,
        });
    }
    let ov1 = overlaps(det_plus.spec(), g, scale)?;
    let ov2 = overlaps(det_minus.spec(), g, scale)?;
    let c = 1.0 - u.theta.cos();
    let sum = ov1.i_c + ov1.i_s;
    // <a_+ a_-> = -(1 - cos theta)(I_c + I_s)[ A_+ B_- + B_+ A_- ]
    let pair_ab = -c * sum * (ov1.a_fg * ov2.b_fg + ov1.b_fg * ov2.a_fg);
    // <a_+^dagger a_-> = 2(1 - cos theta)[ A_+* A_- I_s + B_+* B_- I_c ]
    let number_ab =
        2.0 * c * (ov1.a_fg.conj() * ov2.a_fg * ov1.i_s + ov1.b_fg.conj() * ov2.b_fg * ov1.i_c);
    Ok(MomentSet {
        number_aa: number_moment(&ov1, u).into(),
        number_bb: number_moment(&ov2, u).into(),
        number_ab,
        pair_aa: pair_moment_same(&ov1, u),
        pair_bb: pair_moment_same(&ov2, u),
        pair_ab,
    })
}

/// Assemble the 4x4 covariance matrix in the basis
/// (X_A, P_A, X_B, P_B), X = a + a^dagger, P = -i(a - a^dagger),
/// vacuum = identity.
pub fn covariance_from_moments(m: &MomentSet) -> Result<CovarianceMatrix> {
    for (label, n) in [("number_aa", m.number_aa), ("number_bb", m.number_bb)] {
        if n.im.abs() > 1e-8 * (1.0 + n.norm()) || n.re < -1e-8 {
            return Err(Error::InvalidParameter(format!(
                "moment {label} = {n} violates Hermiticity/positivity"
            )));
        }
    }
    let mut e = [[0.0f64; 4]; 4];
    let blocks = [(0usize, m.number_aa.re, m.pair_aa), (2usize, m.number_bb.re, m.pair_bb)];
    for (o, n, p) in blocks {
        e[o][o] = 1.0 + 2.0 * n + 2.0 * p.re;
        e[o + 1][o + 1] = 1.0 + 2.0 * n - 2.0 * p.re;
        e[o][o + 1] = 2.0 * p.im;
        e[o + 1][o] = 2.0 * p.im;
    }
    let (pm, nm) = (m.pair_ab, m.number_ab);
    e[0][2] = 2.0 * (pm.re + nm.re);
    e[0][3] = 2.0 * (pm.im + nm.im);
    e[1][2] = 2.0 * (pm.im - nm.im);
    e[1][3] = -2.0 * pm.re + 2.0 * nm.re;
    for i in 0..2 {
        for j in 2..4 {
            e[j][i] = e[i][j];
        }
    }
    let cm = CovarianceMatrix::from_entries(e)?;
    let min_eig = cm.uncertainty_min_eigenvalue();
    if min_eig < -1e-6 {
        return Err(Error::NonPhysical { min_eig });
    }
    Ok(cm)
}

/// Least-squares slope of log(y) against log(x). Exposed so synthetic decay
/// laws can be injected in tests.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidParameter(
            "slope fit needs two equal-length samples at least".into(),
        ));
    }
    if xs.iter().any(|&x| x <= 0.0) || ys.iter().any(|&y| y <= 0.0) {
        return Err(Error::InvalidParameter(
            "slope fit needs strictly positive samples".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / lx.len() as f64;
    let my = ly.iter().sum::<f64>() / ly.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..lx.len() {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    if den == 0.0 {
        return Err(Error::InvalidParameter("slope fit needs distinct abscissae".into()));
    }
    Ok(num / den)
}

/// Fitted log-log slope of the energy per detected mode, E = k0 * N, over a
/// sorted grid of detector center frequencies. The detector template fixes
/// sigma, the center position and the side; N is evaluated on the fast path.
/// A slope below -1 indicates a convergent total flux.
pub fn energy_decay_exponent(
    det_template: &DetectorChannel,
    g: &WavepacketSpec,
    u: &MirrorUnitary,
    scale: DiamondScale,
    k0_grid: &[f64],
) -> Result<f64> {
    if k0_grid.len() < 5 {
        return Err(Error::InvalidParameter(
            "energy decay fit needs at least 5 grid points".into(),
        ));
    }
    if k0_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("k0 grid must be strictly increasing".into()));
    }
    let mut energies = Vec::with_capacity(k0_grid.len());
    for &k0 in k0_grid {
        let spec = WavepacketSpec::minkowski(
            det_template.side(),
            k0,
            det_template.spec().bandwidth(),
            det_template.spec().center_pos(),
        )?;
        let det = DetectorChannel::new(spec, det_template.side())?;
        let n = particle_number_fast(&det, g, u, scale)?;
        if n <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "particle number vanished at k0 = {k0}; the fit is undefined"
            )));
        }
        energies.push(k0 * n);
    }
    fit_loglog_slope(k0_grid, &energies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn scale1() -> DiamondScale {
        DiamondScale::new(1.0).unwrap()
    }

    fn det(dir: Direction, k0: f64, sigma: f64, c: f64) -> DetectorChannel {
        DetectorChannel::new(WavepacketSpec::minkowski(dir, k0, sigma, c).unwrap(), dir).unwrap()
    }

    #[test]
    fn identity_channel_gives_vacuum() {
        let s = scale1();
        let g = WavepacketSpec::diamond(Direction::Left, 1.0, 0.2).unwrap();
        let d = det(Direction::Left, 10.0, 1.5, 2.0);
        let u = MirrorUnitary::identity();
        assert_eq!(particle_number(&d, &g, &u, s).unwrap(), 0.0);
        let m = output_moments_lr(&d, &det(Direction::Right, 10.0, 1.5, 2.0), &g, &u, s).unwrap();
        for v in [m.number_aa, m.number_bb, m.number_ab, m.pair_aa, m.pair_bb, m.pair_ab] {
            assert_eq!(v, Complex64::default());
        }
        let cm = covariance_from_moments(&m).unwrap();
        assert!(cm.max_abs_diff_from_identity() < 1e-14);
    }

    #[test]
    fn theta_scaling_and_phase_independence() {
        let s = scale1();
        let g = WavepacketSpec::diamond(Direction::Left, 1.0, 0.2).unwrap();
        let d = det(Direction::Left, 10.0, 1.5, 2.0);
        let n_half = particle_number(&d, &g, &MirrorUnitary::perfect_mirror(0.0), s).unwrap();
        let n_third = particle_number(&d, &g, &MirrorUnitary::new(PI / 3.0, 0.0).unwrap(), s).unwrap();
        assert!(n_half > 0.0);
        assert_relative_eq!(n_third / n_half, 1.0 - (PI / 3.0).cos(), max_relative = 1e-9);
        let n_phi = particle_number(&d, &g, &MirrorUnitary::perfect_mirror(1.1), s).unwrap();
        assert_relative_eq!(n_phi, n_half, max_relative = 1e-12);
    }

    #[test]
    fn dual_path_equivalence_narrowband() {
        let s = scale1();
        let u = MirrorUnitary::perfect_mirror(0.0);
        for (om0, de, k0, sg, c) in [(1.0, 0.12, 12.0, 1.5, 2.0), (1.5, 0.15, 10.0, 1.2, -1.0)] {
            let g = WavepacketSpec::diamond(Direction::Left, om0, de).unwrap();
            let d = det(Direction::Left, k0, sg, c);
            let slow = particle_number(&d, &g, &u, s).unwrap();
            let fast = particle_number_fast(&d, &g, &u, s).unwrap();
            assert!(
                (slow - fast).abs() <= 1e-3 * slow,
                "dual path at ({om0},{de},{k0},{sg},{c}): {slow} vs {fast}"
            );
        }
    }

    #[test]
    fn lr_moments_symmetric_for_symmetric_detectors() {
        let s = scale1();
        let g = WavepacketSpec::diamond(Direction::Left, 1.0, 0.2).unwrap();
        let u = MirrorUnitary::perfect_mirror(0.0);
        let dl = det(Direction::Left, 10.0, 1.5, 2.0);
        let dr = det(Direction::Right, 10.0, 1.5, 2.0);
        let m = output_moments_lr(&dl, &dr, &g, &u, s).unwrap();
        assert_relative_eq!(m.number_aa.re, m.number_bb.re, max_relative = 1e-9);
        assert!(m.number_aa.re >= 0.0);
        assert_eq!(m.number_ab, Complex64::default());
        // swapped sides must be rejected
        assert!(output_moments_lr(&dr, &dl, &g, &u, s).is_err());
    }

    #[test]
    fn ll_moments_phase_independent_and_gated() {
        let s = scale1();
        let g = WavepacketSpec::diamond(Direction::Left, 1.0, 0.11).unwrap();
        let d_plus = det(Direction::Left, 8.0, 3.2, 2.0);
        let d_minus = det(Direction::Left, 8.0, 3.2, -2.0);
        let m0 = output_moments_ll(
            &d_plus, &d_minus, &g,
            &MirrorUnitary::perfect_mirror(0.0), s, DEFAULT_OVERLAP_GATE,
        )
        .unwrap();
        let m1 = output_moments_ll(
            &d_plus, &d_minus, &g,
            &MirrorUnitary::perfect_mirror(PI / 2.0), s, DEFAULT_OVERLAP_GATE,
        )
        .unwrap();
        assert!((m0.pair_ab - m1.pair_ab).norm() <= 1e-12);
        assert!((m0.number_ab - m1.number_ab).norm() <= 1e-12);

        // nearly coincident detectors fail the overlap gate
        let d_close = det(Direction::Left, 8.0, 3.2, 1.7);
        match output_moments_ll(
            &d_plus, &d_close, &g,
            &MirrorUnitary::perfect_mirror(0.0), s, DEFAULT_OVERLAP_GATE,
        ) {
            Err(Error::DetectorOverlapTooLarge { overlap, gate }) => {
                assert!(overlap > gate);
            }
            other => panic!("expected overlap gate to fire, got {other:?}"),
        }
    }

    #[test]
    fn covariance_examples() {
        // zero moments: vacuum
        let cm = covariance_from_moments(&MomentSet::default()).unwrap();
        assert!(cm.max_abs_diff_from_identity() == 0.0);
        // pure imaginary pair moment: sigma_XP = s with unit diagonals,
        // unphysical for s != 0
        let m = MomentSet {
            pair_aa: Complex64::new(0.0, 0.05),
            ..MomentSet::default()
        };
        match covariance_from_moments(&m) {
            Err(Error::NonPhysical { min_eig }) => assert!(min_eig < -1e-6),
            other => panic!("expected NonPhysical, got {other:?}"),
        }
    }

    #[test]
    fn slope_fit_sanity() {
        // N ~ 1/k0^2 gives energy k0 N ~ 1/k0: slope -1
        let k0s: Vec<f64> = (0..10).map(|i| 10.0 * 1.3f64.powi(i)).collect();
        let es: Vec<f64> = k0s.iter().map(|k| 3.7 * k / (k * k)).collect();
        let slope = fit_loglog_slope(&k0s, &es).unwrap();
        assert!((slope + 1.0).abs() < 0.01, "slope {slope}");
        assert!(fit_loglog_slope(&[1.0], &[1.0]).is_err());
        assert!(fit_loglog_slope(&[1.0, 2.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn energy_grid_validation() {
        let s = scale1();
        let g = WavepacketSpec::diamond(Direction::Left, 5.0, 0.2).unwrap();
        let d = det(Direction::Left, 10.0, 1.0, 2.0);
        let u = MirrorUnitary::perfect_mirror(0.0);
        assert!(energy_decay_exponent(&d, &g, &u, s, &[10.0, 12.0, 11.0, 13.0, 14.0]).is_err());
        assert!(energy_decay_exponent(&d, &g, &u, s, &[10.0, 12.0]).is_err());
    }
}
