//! Direct quadrature of the collision integral, used to validate the
//! spectral evaluation at small grid sizes.
//!
//! The binary-collision form integrates over the companion velocity `v_*`
//! (midpoint rule on the grid) and the scattering direction `ω ∈ S¹`, with
//! post-collision velocities
//!
//! ```text
//! v′ = (v + v_*)/2 + (|v - v_*|/2)·ω,    v′_* = (v + v_*)/2 - (|v - v_*|/2)·ω.
//! ```
//!
//! The overall factor `1/2` aligns this parametrization with the orthogonal
//! displacement (Carleman) form the spectral operator discretizes: writing
//! the displacement `x = v′ - v` as `a·e_θ` with `a > 0` sweeps only a
//! half-circle of θ per companion velocity, and the scattering angle advances
//! at twice the rate of θ, so the full `S¹` integral counts each Carleman
//! configuration twice.
//!
//! The quadrature applies the same displacement truncation as the spectral
//! kernel tables at the grid's maximum radius R: in scattering variables the
//! condition `|v′ - v| ≤ R and |v′_* - v| ≤ R` keeps the full circle of
//! directions while `|v - v_*| ≤ R`, shrinks to the symmetric pair of arcs
//! `|ω·(v - v_*)/|v - v_*|| ≤ 2R²/|v - v_*|² - 1` for separations up to
//! `√2·R`, and excludes wider companions entirely. On constant fields the
//! swept measure reproduces the kernel-table value π(2R)² exactly, so the
//! oracle and the spectral operator discretize the same integral and their
//! difference is pure quadrature error.
//!
//! The companion integral runs in polar coordinates around each output node:
//! a periodic trapezoid rule in the companion direction, Gauss–Legendre
//! radially on the full-circle segment `|v - v_*| ≤ R`, and Gauss–Legendre
//! in the arc half-angle over the band `R < |v - v_*| ≤ √2R` (that
//! substitution absorbs the square-root behaviour of the arc length at the
//! inner edge, keeping every integrand analytic). A velocity-grid midpoint
//! rule cannot see the band at small N — its width is about 1.5 grid cells
//! at N = 16, which costs about 1% of the kernel measure. The scattering
//! circle uses a uniform trapezoid rule for full circles and Gauss–Legendre
//! nodes on the admissible arcs.
//!
//! Both sides act on the periodized distribution: companions reach across
//! the box boundary (exactly as the spectral operator's periodic
//! convolutions do), and all off-grid values — companions and post-collision
//! points alike — come from evaluating the truncated Fourier series of `f`.
//! Since `2·√2·R < 2L`, no periodic companion is counted twice.

use num_complex::Complex64;

use crate::collision::CollisionConfig;
use crate::error::SolverError;
use crate::grid::VelocityGrid;
use crate::spectral::{SpectralField, VelocityTransform};

/// The five collision pieces accumulated by one quadrature sweep, each a
/// row-major physical field. `qc = gain - loss` is the quadratic part; the
/// cubic pieces are the gain weighted by `f(v_*)` (`q1`) and `f(v)` (`q2`),
/// and the loss weighted by `f(v′)` (`q3`) and `f(v′_*)` (`q4`).
pub struct OracleTerms {
    pub qc: Vec<f64>,
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
    pub q3: Vec<f64>,
    pub q4: Vec<f64>,
}

/// Evaluates the truncated Fourier series of `f_hat` at an arbitrary point.
struct SeriesEvaluator<'a> {
    n: usize,
    half_width: f64,
    f_hat: &'a SpectralField,
    wx: Vec<Complex64>,
    wy: Vec<Complex64>,
    row: Vec<Complex64>,
}

impl<'a> SeriesEvaluator<'a> {
    fn new(f_hat: &'a SpectralField, half_width: f64) -> Self {
        let n = f_hat.n();
        SeriesEvaluator {
            n,
            half_width,
            f_hat,
            wx: vec![Complex64::new(0.0, 0.0); n],
            wy: vec![Complex64::new(0.0, 0.0); n],
            row: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    fn fill_phases(n: usize, half_width: f64, coord: f64, out: &mut [Complex64]) {
        // out[a] = exp(i (π/L) (a - N/2) coord), built by successive rotation.
        let step = Complex64::from_polar(1.0, std::f64::consts::PI * coord / half_width);
        let mut cur = Complex64::from_polar(
            1.0,
            -std::f64::consts::PI * coord * (n as f64 / 2.0) / half_width,
        );
        for w in out.iter_mut() {
            *w = cur;
            cur *= step;
        }
    }

    /// `f(p) = Σ_k f̂_k exp(i(π/L)k·p)`, real part (the block comes from a
    /// real field).
    fn eval(&mut self, px: f64, py: f64) -> f64 {
        let n = self.n;
        Self::fill_phases(n, self.half_width, px, &mut self.wx);
        Self::fill_phases(n, self.half_width, py, &mut self.wy);
        let data = self.f_hat.data();
        for (a, r) in self.row.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, &w) in self.wy.iter().enumerate() {
                acc += data[a * n + b] * w;
            }
            *r = acc;
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (a, &w) in self.wx.iter().enumerate() {
            total += self.row[a] * w;
        }
        total.re
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence with Chebyshev-like starting guesses.
fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    for i in 0..k.div_ceil(2) {
        let mut x =
            (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for m in 2..=k {
                let mf = m as f64;
                let p2 = ((2.0 * mf - 1.0) * x * p1 - (mf - 1.0) * p0) / mf;
                p0 = p1;
                p1 = p2;
            }
            dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[k - 1 - i] = x;
        weights[k - 1 - i] = w;
    }
    (nodes, weights)
}

/// Runs the quadrature sweep and returns all five collision pieces (kernel
/// strength 1). Intended for small grids: every off-grid value is a full
/// `O(N²)` series evaluation, and the sweep visits
/// `N² × n_phi × (radial nodes) × (scattering nodes)` of them.
///
/// `n_angle` must be at least 2 (odd counts are rounded up so antipodal
/// scattering pairs stay aligned); it sets the scattering-circle trapezoid
/// count, with the companion quadrature scaled alongside (`4·n_angle`
/// directions, `n_angle` radial nodes per segment, `n_angle/2` nodes per
/// scattering arc).
pub fn oracle_terms(
    f: &[f64],
    grid: &VelocityGrid,
    n_angle: usize,
) -> Result<OracleTerms, SolverError> {
    if n_angle < 2 {
        return Err(SolverError::InvalidParameter(format!(
            "oracle needs an angle count of at least 2, got {n_angle}"
        )));
    }
    let n_angle = n_angle + n_angle % 2;
    let n = grid.n();
    assert_eq!(f.len(), n * n, "field size mismatch");
    let mut transform = VelocityTransform::new(n);
    let f_hat = transform.forward(f);
    let mut series = SeriesEvaluator::new(&f_hat, grid.half_width());

    let radius = grid.max_truncation_radius();
    let n_phi = 4 * n_angle;
    let k_rad = n_angle.max(4);
    let k_arc = (n_angle / 2).max(4);

    let omegas: Vec<(f64, f64)> = (0..n_angle)
        .map(|a| {
            let th = 2.0 * std::f64::consts::PI * a as f64 / n_angle as f64;
            (th.cos(), th.sin())
        })
        .collect();
    let half = n_angle / 2;
    let (rad_nodes, rad_weights) = gauss_legendre(k_rad);
    let (arc_nodes, arc_weights) = gauss_legendre(k_arc);
    let w_phi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let w_omega = 2.0 * std::f64::consts::PI / n_angle as f64;

    let len = n * n;
    let mut out = OracleTerms {
        qc: vec![0.0; len],
        q1: vec![0.0; len],
        q2: vec![0.0; len],
        q3: vec![0.0; len],
        q4: vec![0.0; len],
    };
    let mut fp = vec![0.0f64; n_angle];
    let phis: Vec<(f64, f64)> = (0..n_phi)
        .map(|p| {
            let th = 2.0 * std::f64::consts::PI * p as f64 / n_phi as f64;
            (th.cos(), th.sin())
        })
        .collect();

    for i in 0..len {
        let vx = grid.nodes()[i / n];
        let vy = grid.nodes()[i % n];
        let fi = f[i];
        let (mut qc, mut q1, mut q2, mut q3, mut q4) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(cphi, sphi) in &phis {
            // Inner segment: separations up to R keep the full scattering
            // circle. Gauss–Legendre in the separation ρ (measure ρ dρ).
            for (&t, &wt) in rad_nodes.iter().zip(&rad_weights) {
                let rho = radius * 0.5 * (t + 1.0);
                let w_rad = wt * radius * 0.5 * rho;
                let fstar = series.eval(vx + rho * cphi, vy + rho * sphi);
                let r = 0.5 * rho;
                let cx = vx + r * cphi;
                let cy = vy + r * sphi;
                for (a, &(cw, sw)) in omegas.iter().enumerate() {
                    fp[a] = series.eval(cx + r * cw, cy + r * sw);
                }
                let loss = fi * fstar;
                // Full weight: companion measure × ω trapezoid × the
                // double-cover factor 1/2.
                let w = w_rad * w_phi * w_omega * 0.5;
                for a in 0..n_angle {
                    let gain = fp[a] * fp[(a + half) % n_angle];
                    qc += (gain - loss) * w;
                    q1 += gain * fstar * w;
                    q2 += gain * fi * w;
                    q3 += loss * fp[a] * w;
                    q4 += loss * fp[(a + half) % n_angle] * w;
                }
            }
            // Band segment: separations in (R, √2R] admit the arc pair
            // |cos ψ| ≤ 2R²/ρ² - 1. Parametrizing by the arc half-angle
            // ψ₀ ∈ (0, π/2) — where ρ² = 2R²/(1 + cos ψ₀) — keeps the
            // integrand analytic through the inner band edge.
            for (&t, &wt) in rad_nodes.iter().zip(&rad_weights) {
                let psi0 = std::f64::consts::FRAC_PI_2 * 0.5 * (t + 1.0);
                let (spsi0, cpsi0) = psi0.sin_cos();
                let rho2 = 2.0 * radius * radius / (1.0 + cpsi0);
                let rho = rho2.sqrt();
                // ρ dρ = R² sin ψ₀ / (1 + cos ψ₀)² dψ₀.
                let w_rad = wt
                    * std::f64::consts::FRAC_PI_2
                    * 0.5
                    * radius
                    * radius
                    * spsi0
                    / ((1.0 + cpsi0) * (1.0 + cpsi0));
                let fstar = series.eval(vx + rho * cphi, vy + rho * sphi);
                let r = 0.5 * rho;
                let cx = vx + r * cphi;
                let cy = vy + r * sphi;
                let loss = fi * fstar;
                let arc = std::f64::consts::PI - 2.0 * psi0;
                for (&ta, &wa) in arc_nodes.iter().zip(&arc_weights) {
                    let psi = psi0 + arc * 0.5 * (ta + 1.0);
                    let (sps, cps) = psi.sin_cos();
                    // ω at angle ψ from the companion direction; the
                    // antipodal arc contributes the mirrored assignment.
                    let wx = cphi * cps - sphi * sps;
                    let wy = cphi * sps + sphi * cps;
                    let fpp = series.eval(cx + r * wx, cy + r * wy);
                    let fpm = series.eval(cx - r * wx, cy - r * wy);
                    let w = w_rad * w_phi * (wa * arc * 0.5) * 0.5;
                    let gain = fpp * fpm;
                    qc += 2.0 * (gain - loss) * w;
                    q1 += 2.0 * gain * fstar * w;
                    q2 += 2.0 * gain * fi * w;
                    q3 += loss * (fpp + fpm) * w;
                    q4 += loss * (fpm + fpp) * w;
                }
            }
        }
        out.qc[i] = qc;
        out.q1[i] = q1;
        out.q2[i] = q2;
        out.q3[i] = q3;
        out.q4[i] = q4;
    }
    Ok(out)
}

/// Direct-quadrature evaluation of the full collision operator
/// `C₀·(Q_c + sign·θ0·(Q_1 + Q_2 - Q_3 - Q_4))`.
pub fn oracle_direct(
    f: &[f64],
    config: &CollisionConfig,
    grid: &VelocityGrid,
    n_angle: usize,
) -> Result<Vec<f64>, SolverError> {
    let terms = oracle_terms(f, grid, n_angle)?;
    let s = config.statistics.cubic_sign() * config.theta0;
    let c0 = config.kernel_constant;
    Ok(terms
        .qc
        .iter()
        .zip(&terms.q1)
        .zip(&terms.q2)
        .zip(&terms.q3)
        .zip(&terms.q4)
        .map(|((((&qc, &q1), &q2), &q3), &q4)| c0 * (qc + s * (q1 + q2 - q3 - q4)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::{CollisionOperator, KernelTables};
    use crate::quantum::Statistics;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_input_yields_zero() {
        let grid = VelocityGrid::new(8, 8.0).unwrap();
        let f = vec![0.0; grid.len()];
        let q = oracle_direct(&f, &CollisionConfig::classical(), &grid, 8).unwrap();
        assert!(q.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn angle_count_is_validated() {
        let grid = VelocityGrid::new(8, 8.0).unwrap();
        let f = vec![0.0; grid.len()];
        assert!(oracle_terms(&f, &grid, 0).is_err());
        assert!(oracle_terms(&f, &grid, 1).is_err());
        // Odd counts are accepted and rounded up to keep antipodal pairs.
        assert!(oracle_terms(&f, &grid, 7).is_ok());
    }

    /// On a constant field the quadratic part vanishes by gain/loss
    /// cancellation and every cubic piece reduces to the swept kernel
    /// measure: c³ · C₀ · π(2R)². This pins the truncation geometry (disc
    /// plus arc band) and the double-cover factor to near machine accuracy.
    #[test]
    fn constant_field_reproduces_kernel_measure() {
        let grid = VelocityGrid::new(16, 8.0).unwrap();
        let c = 0.7f64;
        let f = vec![c; grid.len()];
        let terms = oracle_terms(&f, &grid, 16).unwrap();
        let radius = grid.max_truncation_radius();
        let target = c * c * c * std::f64::consts::PI * (2.0 * radius) * (2.0 * radius);
        for (name, term) in [
            ("q1", &terms.q1),
            ("q2", &terms.q2),
            ("q3", &terms.q3),
            ("q4", &terms.q4),
        ] {
            for &x in term.iter() {
                assert!(
                    (x - target).abs() <= 1e-10 * target,
                    "{name}: {x:.12e} vs {target:.12e}"
                );
            }
        }
        for &x in terms.qc.iter() {
            assert!(x.abs() <= 1e-10 * target, "qc residue {x:.3e}");
        }
    }

    #[test]
    fn isotropic_input_produces_isotropic_output() {
        let grid = VelocityGrid::new(16, 8.0).unwrap();
        // Width 1.4: narrow enough to sit inside the box, wide enough that
        // the Fourier representation itself carries no anisotropic ringing.
        let f = grid.sample(|vx, vy| (-(vx * vx + vy * vy) / (2.0 * 1.4 * 1.4)).exp());
        let cfg = CollisionConfig::quantum(Statistics::Bose, 0.4)
            .unwrap()
            .with_kernel_constant(1.0);
        let q = oracle_direct(&f, &cfg, &grid, 16).unwrap();
        let n = grid.n();
        let scale = q.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        // Compare against the 90°-rotated field; the v = -L boundary lines
        // have no rotation partner on the grid and are skipped.
        let mut worst = 0.0f64;
        for ix in 1..n {
            for iy in 1..n {
                let rot = q[iy * n + (n - ix)];
                worst = worst.max((q[ix * n + iy] - rot).abs());
            }
        }
        assert!(worst <= 1e-6 * scale, "anisotropy {:.3e}", worst / scale);
    }

    /// Midpoint-rule moments of the output vanish for a field that is both
    /// resolved by the Fourier series and well confined in the box. Those two
    /// demands compete: at `N = 16, L = 8` no width achieves 1e-6 (the floor
    /// is a few 1e-4), so this runs at `N = 24` where a width of 1.1 leaves
    /// the worst moment near 2e-7.
    #[test]
    fn quadrature_conserves_collision_invariants() {
        let grid = VelocityGrid::new(24, 8.0).unwrap();
        let sigma = 1.1f64;
        let bumps = [
            (0.9, 0.25, -0.15, sigma),
            (0.5, -0.2, 0.1, 0.9 * sigma),
            (0.7, 0.05, 0.2, 1.1 * sigma),
        ];
        let f = grid.sample(move |vx, vy| {
            bumps
                .iter()
                .map(|&(a, cx, cy, s): &(f64, f64, f64, f64)| {
                    a * (-((vx - cx).powi(2) + (vy - cy).powi(2)) / (2.0 * s * s)).exp()
                })
                .sum()
        });
        let cfg = CollisionConfig::quantum(Statistics::Fermi, 0.3)
            .unwrap()
            .with_kernel_constant(1.0);
        let q = oracle_direct(&f, &cfg, &grid, 16).unwrap();
        let dv = grid.spacing();
        let (mut mass, mut momx, mut momy, mut energy) = (0.0, 0.0, 0.0, 0.0);
        let n = grid.n();
        for ix in 0..n {
            for iy in 0..n {
                let (vx, vy) = (grid.nodes()[ix], grid.nodes()[iy]);
                let x = q[ix * n + iy] * dv * dv;
                mass += x;
                momx += vx * x;
                momy += vy * x;
                energy += 0.5 * (vx * vx + vy * vy) * x;
            }
        }
        for (name, m) in [("mass", mass), ("momx", momx), ("momy", momy), ("energy", energy)] {
            assert!(m.abs() <= 1e-6, "{name} drift {m:.3e}");
        }
    }

    /// Smooth positive random test fields: three Gaussian bumps near the
    /// origin. The width window balances two error floors shared by both
    /// evaluations — Fourier ringing of narrow bumps against box-edge tails
    /// of wide ones — and the balance point depends on the output scale:
    /// the quadratic-only classical output is ~100× smaller than the cubic
    /// terms, so its best widths sit lower (≈1.6 at N = 16) than the
    /// quantum ones (≈2.1).
    fn random_smooth_field(
        grid: &VelocityGrid,
        seed: u64,
        sigma_lo: f64,
        sigma_hi: f64,
        amp_scale: f64,
    ) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bumps = Vec::new();
        for _ in 0..3 {
            let amp: f64 = rng.gen_range(0.4..1.0) * amp_scale;
            let cx: f64 = rng.gen_range(-0.3..0.3);
            let cy: f64 = rng.gen_range(-0.3..0.3);
            let sigma: f64 = rng.gen_range(sigma_lo..sigma_hi);
            bumps.push((amp, cx, cy, 2.0 * sigma * sigma));
        }
        grid.sample(move |vx, vy| {
            bumps
                .iter()
                .map(|&(a, cx, cy, s2)| a * (-((vx - cx).powi(2) + (vy - cy).powi(2)) / s2).exp())
                .sum()
        })
    }

    #[test]
    fn spectral_operator_matches_direct_quadrature() {
        let grid = VelocityGrid::new(16, 8.0).unwrap();
        let radius = grid.max_truncation_radius();
        let tables = KernelTables::build(&grid, 4, radius).unwrap();
        let mut op = CollisionOperator::new(&grid, tables);
        let cases: [(u64, CollisionConfig, f64, f64, f64); 5] = [
            (0x5eed_0010, CollisionConfig::classical(), 1.55, 1.65, 1.0),
            (
                0x5eed_0020,
                CollisionConfig::quantum(Statistics::Bose, 0.5).unwrap(),
                2.05,
                2.15,
                0.8,
            ),
            (
                0x5eed_0021,
                CollisionConfig::quantum(Statistics::Fermi, 0.5).unwrap(),
                2.05,
                2.15,
                0.8,
            ),
            (
                0x5eed_0022,
                CollisionConfig::quantum(Statistics::Bose, 0.5).unwrap(),
                2.05,
                2.15,
                0.8,
            ),
            (
                0x5eed_0023,
                CollisionConfig::quantum(Statistics::Fermi, 0.5).unwrap(),
                2.05,
                2.15,
                0.8,
            ),
        ];
        for (seed, statistics, lo, hi, amp) in cases {
            let cfg = statistics.with_kernel_constant(1.0);
            let f = random_smooth_field(&grid, seed, lo, hi, amp);
            let spectral = op.qq_full(&f, &cfg);
            let direct = oracle_direct(&f, &cfg, &grid, 16).unwrap();
            let scale = direct.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            let gap = spectral
                .iter()
                .zip(&direct)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            assert!(
                gap <= 1e-3 * scale,
                "spectral vs oracle gap {:.3e} ({:?})",
                gap / scale,
                cfg.statistics
            );
        }
    }

    /// Term-by-term comparison on one field. The two loss pieces are equal
    /// as integrals (relabeling the scattering direction swaps the two
    /// post-collision velocities while the kernel and measure are even), so
    /// the quadrature produces them identically; the spectral evaluation
    /// splits that sum differently below mode truncation, and only the sum
    /// is comparable across methods.
    #[test]
    fn each_collision_piece_matches_its_quadrature_counterpart() {
        let grid = VelocityGrid::new(16, 8.0).unwrap();
        let radius = grid.max_truncation_radius();
        let tables = KernelTables::build(&grid, 4, radius).unwrap();
        let mut op = CollisionOperator::new(&grid, tables);
        let f = random_smooth_field(&grid, 0x5eed_0010, 1.55, 1.65, 1.0);
        let terms = oracle_terms(&f, &grid, 16).unwrap();
        let mut transform = VelocityTransform::new(grid.n());
        let f_hat = transform.forward(&f);

        let split = terms
            .q3
            .iter()
            .zip(&terms.q4)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(split <= 1e-10, "loss pieces differ by {split:.3e}");

        let q34_direct: Vec<f64> = terms.q3.iter().zip(&terms.q4).map(|(a, b)| a + b).collect();
        let (qc_s, _) = transform.inverse_real(&op.qc_hat(&f_hat));
        let (q1_s, _) = transform.inverse_real(&op.q1_hat(&f_hat));
        let (q2_s, _) = transform.inverse_real(&op.q2_hat(&f_hat));
        let (q3_s, _) = transform.inverse_real(&op.q3_hat(&f_hat));
        let (q4_s, _) = transform.inverse_real(&op.q4_hat(&f_hat));
        let q34_s: Vec<f64> = q3_s.iter().zip(&q4_s).map(|(a, b)| a + b).collect();
        for (name, spectral, direct) in [
            ("quadratic", &qc_s, &terms.qc),
            ("gain-companion", &q1_s, &terms.q1),
            ("gain-local", &q2_s, &terms.q2),
            ("loss-sum", &q34_s, &q34_direct),
        ] {
            let scale = direct.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            let gap = spectral
                .iter()
                .zip(direct)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            assert!(
                gap <= 1.5e-3 * scale,
                "{name}: spectral vs oracle gap {:.3e}",
                gap / scale
            );
        }
    }
}

