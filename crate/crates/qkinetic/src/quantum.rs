//! Bose–Einstein and Fermi–Dirac statistics: the fugacity functions
//! `G_ν`/`F_ν`, quantum and classical-substitute Maxwellians, and inversion of
//! the constitutive system linking `(ρ, e)` to `(z, T)` in two velocity
//! dimensions.
//!
//! With `d_v = 2` the ideal quantum gas satisfies
//!
//! ```text
//! ρ = (2πT/θ0) · Q₁(z),        e = T · Q₂(z) / Q₁(z),
//! ```
//!
//! where `Q = G` for bosons, `Q = F` for fermions, and `θ0` is the quantum
//! occupancy scale (`θ0 → 0` recovers the classical gas). Eliminating `T`
//! gives the scalar equation `Q₁²(z)/Q₂(z) = (θ0/2π)(ρ/e)`, whose left side is
//! strictly increasing in `z`; [`solve_fugacity`] exploits that monotonicity
//! for unconditionally convergent bracketing with a fast secant finish.

use crate::error::SolverError;
use crate::grid::VelocityGrid;

/// Particle statistics selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    /// Bose–Einstein: enhanced scattering into occupied states, fugacity `z ∈ (0,1)`.
    Bose,
    /// Fermi–Dirac: Pauli blocking, fugacity `z ∈ (0,∞)`, occupancy bound `f ≤ 1/θ0`.
    Fermi,
}

impl Statistics {
    /// Sign of the quantum correction: `+1` for Bose (enhancement), `-1` for
    /// Fermi (blocking). The equilibrium denominator is
    /// `z⁻¹ exp(|v-u|²/2T) - sign`, and the cubic collision terms enter the
    /// operator multiplied by `sign · θ0`.
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Statistics::Bose => 1.0,
            Statistics::Fermi => -1.0,
        }
    }

    /// Evaluates the fugacity function for this statistics: `G_ν` or `F_ν`.
    pub fn fugacity_fn(self, nu: f64, z: f64) -> Result<f64, SolverError> {
        match self {
            Statistics::Bose => bose_g(nu, z),
            Statistics::Fermi => fermi_f(nu, z),
        }
    }
}

/// Thermodynamic state of a quantum ideal gas.
#[derive(Debug, Clone, Copy)]
pub struct ThermoState {
    /// Fugacity `z`.
    pub fugacity: f64,
    /// Temperature `T` (energy units; k_B = 1).
    pub temperature: f64,
    /// Quantum occupancy scale `θ0`.
    pub theta0: f64,
    /// Bose or Fermi statistics.
    pub statistics: Statistics,
}

/// Macroscopic fields of a single fluid state.
#[derive(Debug, Clone, Copy)]
pub struct MacroState {
    /// Mass density `ρ`.
    pub density: f64,
    /// Bulk velocity `u = (u_x, u_y)`.
    pub velocity: [f64; 2],
    /// Specific internal energy `e` (so `ρe = ∫ ½|v-u|² f dv`).
    pub internal_energy: f64,
}

const SERIES_TOL: f64 = 1e-12;
const SERIES_CAP: usize = 100_000;
/// Numerically representable ceiling for the Bose fugacity; `z = 1` itself is
/// the degenerate case and is excluded.
pub const BOSE_Z_MAX: f64 = 1.0 - 1e-15;
/// Practical ceiling for the Fermi fugacity (`exp` overflows shortly above).
const FERMI_Z_MAX: f64 = 1e300;

/// Power series `Σ_{n≥1} σ^{n+1} z^n / n^ν` shared by both statistics
/// (`σ = +1` Bose, `σ = -1` Fermi alternating).
fn fugacity_series(nu: f64, z: f64, alternating: bool) -> f64 {
    let mut sum = 0.0;
    let mut zp = 1.0;
    for n in 1..=SERIES_CAP {
        zp *= z;
        let mut term = zp / (n as f64).powf(nu);
        if alternating && n % 2 == 0 {
            term = -term;
        }
        sum += term;
        if term.abs() <= SERIES_TOL * sum.abs() && n > 1 {
            break;
        }
    }
    sum
}

/// Lanczos approximation of the gamma function (g = 7, 9 coefficients),
/// accurate to ~1e-13 relative on the real axis.
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection for the left half-axis.
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = C[0];
        for (i, &c) in C.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        let t = x + G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// Integrand-based evaluation of `F_ν(z) = (1/Γ(ν)) ∫₀^∞ x^{ν-1}/(z⁻¹eˣ+1) dx`
/// using the double-exponential substitution `x = exp(t - e^{-t})` and a
/// trapezoid rule refined until the relative change is ≤ 1e-10.
fn fermi_quadrature(nu: f64, z: f64) -> f64 {
    let ln_z = z.ln();
    let integrand = |t: f64| -> f64 {
        let x = (t - (-t).exp()).exp();
        let dxdt = x * (1.0 + (-t).exp());
        // 1/(e^{x-ln z}+1); the exp may overflow to +inf, which cleanly
        // drives the quotient to zero.
        x.powf(nu - 1.0) * dxdt / ((x - ln_z).exp() + 1.0)
    };
    const T_LO: f64 = -6.5;
    const T_HI: f64 = 8.0;
    let mut m = 64usize;
    let mut prev = f64::NAN;
    loop {
        let h = (T_HI - T_LO) / m as f64;
        let mut s = 0.5 * (integrand(T_LO) + integrand(T_HI));
        for i in 1..m {
            s += integrand(T_LO + i as f64 * h);
        }
        let cur = s * h;
        if prev.is_finite() && (cur - prev).abs() <= 1e-10 * cur.abs().max(1e-300) {
            return cur / gamma(nu);
        }
        prev = cur;
        m *= 2;
        if m > (1 << 22) {
            return cur / gamma(nu);
        }
    }
}

/// Bose–Einstein function `G_ν(z) = Σ_{n≥1} z^n/n^ν`.
///
/// Requires `0 < z < 1` (or `z = 1` with `ν > 1`). Uses the closed form
/// `G₁(z) = -ln(1-z)` for `ν = 1` and the power series otherwise.
pub fn bose_g(nu: f64, z: f64) -> Result<f64, SolverError> {
    if !(nu > 0.0) {
        return Err(SolverError::DomainViolation(format!(
            "bose_g requires nu > 0, got {nu}"
        )));
    }
    if !(z > 0.0) || z > 1.0 || (z == 1.0 && nu <= 1.0) {
        return Err(SolverError::DomainViolation(format!(
            "bose_g requires 0 < z < 1 (z = 1 only for nu > 1), got z = {z}"
        )));
    }
    if nu == 1.0 {
        return Ok(-(1.0 - z).ln());
    }
    Ok(fugacity_series(nu, z, false))
}

/// Fermi–Dirac function `F_ν(z) = Σ_{n≥1} (-1)^{n+1} z^n/n^ν`.
///
/// Requires `z > 0`. Uses the closed form `F₁(z) = ln(1+z)` for `ν = 1`, the
/// alternating series for `z ≤ 0.9`, and double-exponential quadrature of the
/// integral representation for larger `z` (where the series converges slowly
/// or not at all).
pub fn fermi_f(nu: f64, z: f64) -> Result<f64, SolverError> {
    if !(nu > 0.0) {
        return Err(SolverError::DomainViolation(format!(
            "fermi_f requires nu > 0, got {nu}"
        )));
    }
    if !(z > 0.0) {
        return Err(SolverError::DomainViolation(format!(
            "fermi_f requires z > 0, got {z}"
        )));
    }
    if nu == 1.0 {
        return Ok(z.ln_1p());
    }
    if z <= 0.9 {
        Ok(fugacity_series(nu, z, true))
    } else {
        Ok(fermi_quadrature(nu, z))
    }
}

/// The strictly increasing map `z ↦ Q₁²(z)/Q₂(z)` whose inversion yields the
/// fugacity from `(ρ, e)`; defined as 0 at `z = 0` by continuity.
pub fn constitutive_ratio(z: f64, statistics: Statistics) -> Result<f64, SolverError> {
    if z == 0.0 {
        return Ok(0.0);
    }
    let q1 = statistics.fugacity_fn(1.0, z)?;
    let q2 = statistics.fugacity_fn(2.0, z)?;
    Ok(q1 * q1 / q2)
}

/// Maps `(z, T, θ0)` to `(ρ, e)` through the two-dimensional constitutive
/// relations `ρ = (2πT/θ0)Q₁(z)` and `e = T·Q₂(z)/Q₁(z)`.
pub fn macro_from_zt(thermo: &ThermoState) -> Result<(f64, f64), SolverError> {
    if !(thermo.theta0 > 0.0) {
        return Err(SolverError::InvalidParameter(format!(
            "macro_from_zt requires theta0 > 0, got {}",
            thermo.theta0
        )));
    }
    if !(thermo.temperature > 0.0) {
        return Err(SolverError::InvalidParameter(format!(
            "macro_from_zt requires T > 0, got {}",
            thermo.temperature
        )));
    }
    let q1 = thermo.statistics.fugacity_fn(1.0, thermo.fugacity)?;
    let q2 = thermo.statistics.fugacity_fn(2.0, thermo.fugacity)?;
    let rho = 2.0 * std::f64::consts::PI * thermo.temperature / thermo.theta0 * q1;
    let e = thermo.temperature * q2 / q1;
    Ok((rho, e))
}

/// Classical-limit fugacity estimate `z ≈ θ0·ρ/(2π·e)`, the exact solution of
/// the constitutive system with `Q_ν(z)` replaced by its leading term `z`.
/// Useful as a warm start for [`solve_fugacity`].
#[inline]
pub fn classical_fugacity_guess(rho: f64, e: f64, theta0: f64) -> f64 {
    theta0 * rho / (2.0 * std::f64::consts::PI * e)
}

/// Closed-form fugacity at prescribed density and *temperature* (not
/// internal energy): the density relation `ρ = (2πT/θ0)·Q₁(z)` inverts
/// exactly because `Q₁` is elementary — `G₁(z) = -ln(1-z)` for Bose and
/// `F₁(z) = ln(1+z)` for Fermi. Used where an initial condition specifies
/// `(ρ, T)` directly, e.g. the shock-tube sides and the constant-state
/// accuracy study.
pub fn fugacity_at_density_temperature(
    rho: f64,
    temperature: f64,
    theta0: f64,
    statistics: Statistics,
) -> Result<f64, SolverError> {
    if !(rho > 0.0 && temperature > 0.0 && theta0 > 0.0) {
        return Err(SolverError::InvalidParameter(format!(
            "fugacity at fixed temperature needs positive rho, T, theta0; \
             got rho={rho}, T={temperature}, theta0={theta0}"
        )));
    }
    let x = theta0 * rho / (2.0 * std::f64::consts::PI * temperature);
    Ok(match statistics {
        Statistics::Bose => -(-x).exp_m1(),
        Statistics::Fermi => x.exp_m1(),
    })
}

/// Inverts the constitutive system: finds `(z, T)` with the prescribed
/// density and internal energy.
///
/// Solves `Q₁²(z)/Q₂(z) = (θ0/2π)(ρ/e)` by bisecting the monotone left side
/// to a bracket of width 1e-2 and polishing with a bracket-guarded secant
/// iteration to `|Δz| ≤ 1e-12`; then `T = θ0·ρ/(2π·Q₁(z))`. A `z_hint`
/// (e.g. the previous time step or a neighboring cell) short-circuits the
/// bracketing; if the unguarded warm-started secant leaves the domain the
/// solver falls back to the bracketed path.
pub fn solve_fugacity(
    rho: f64,
    e: f64,
    theta0: f64,
    statistics: Statistics,
    z_hint: Option<f64>,
) -> Result<ThermoState, SolverError> {
    if !(rho > 0.0) || !(e > 0.0) {
        return Err(SolverError::InvalidParameter(format!(
            "solve_fugacity requires rho > 0 and e > 0, got rho = {rho}, e = {e}"
        )));
    }
    if !(theta0 > 0.0) {
        return Err(SolverError::InvalidParameter(format!(
            "solve_fugacity requires theta0 > 0, got {theta0}"
        )));
    }
    let target = theta0 / (2.0 * std::f64::consts::PI) * rho / e;
    let z_max = match statistics {
        Statistics::Bose => BOSE_Z_MAX,
        Statistics::Fermi => FERMI_Z_MAX,
    };
    let ratio_max = constitutive_ratio(z_max, statistics)?;
    if target >= ratio_max {
        return match statistics {
            Statistics::Bose => Err(SolverError::DegenerateBose {
                target,
                limit: ratio_max,
            }),
            // The Fermi ratio increases to 2 from below; targets at or beyond
            // the representable ceiling mean a fully degenerate gas.
            Statistics::Fermi => Err(SolverError::DomainViolation(format!(
                "degenerate Fermi state: constitutive target {target:.6e} \
                 exceeds the reachable ratio {ratio_max:.12}"
            ))),
        };
    }

    let residual = |z: f64| -> Result<f64, SolverError> {
        Ok(constitutive_ratio(z, statistics)? - target)
    };

    // Warm start: plain secant from the hint, falling back on any excursion.
    if let Some(hint) = z_hint {
        if hint.is_finite() && hint > 0.0 && hint < z_max {
            if let Some(state) = secant_from_hint(hint, z_max, target, statistics, rho, theta0)? {
                return Ok(state);
            }
        }
    }

    // Bracket [a, b] with residual(a) < 0 < residual(b).
    let mut a = 0.0_f64;
    let mut fa = -target;
    let mut b = match statistics {
        Statistics::Bose => z_max,
        Statistics::Fermi => {
            // Grow until the ratio clears the target (it always does: the
            // ceiling case was rejected above).
            let mut hi = 1.0_f64;
            while constitutive_ratio(hi, statistics)? <= target && hi < FERMI_Z_MAX {
                hi = (hi * 2.0).min(FERMI_Z_MAX);
            }
            hi
        }
    };
    let mut fb = residual(b)?;

    let mut iterations = 0usize;
    while b - a > 1e-2 {
        let mid = 0.5 * (a + b);
        let fm = residual(mid)?;
        if fm < 0.0 {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
        iterations += 1;
        if iterations > 200 {
            return Err(SolverError::NonConvergence {
                iterations,
                residual: fa.abs().min(fb.abs()),
            });
        }
    }

    // Bracket-guarded secant; falls back to bisection whenever the secant
    // step leaves the bracket.
    let (mut z0, mut f0, mut z1, mut f1) = (a, fa, b, fb);
    loop {
        iterations += 1;
        if iterations > 200 {
            return Err(SolverError::NonConvergence {
                iterations,
                residual: f1.abs(),
            });
        }
        let mut z2 = if f1 != f0 {
            z1 - f1 * (z1 - z0) / (f1 - f0)
        } else {
            0.5 * (a + b)
        };
        if !(z2 > a) || !(z2 < b) {
            z2 = 0.5 * (a + b);
        }
        let f2 = residual(z2)?;
        if f2 < 0.0 {
            a = z2;
        } else {
            b = z2;
        }
        let dz = (z2 - z1).abs();
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = f2;
        if dz <= 1e-12 || f2 == 0.0 {
            break;
        }
    }

    finish_state(z1, statistics, rho, theta0)
}

/// Unguarded secant from a warm start. Returns `Ok(None)` when the iteration
/// wanders out of the fugacity domain or stalls, signalling the caller to use
/// the bracketed solver instead.
fn secant_from_hint(
    hint: f64,
    z_max: f64,
    target: f64,
    statistics: Statistics,
    rho: f64,
    theta0: f64,
) -> Result<Option<ThermoState>, SolverError> {
    let mut z0 = hint;
    let mut z1 = (hint * 1.001 + 1e-14).min(z_max);
    let mut f0 = constitutive_ratio(z0, statistics)? - target;
    let mut f1 = constitutive_ratio(z1, statistics)? - target;
    for _ in 0..60 {
        if f1 == f0 {
            return Ok(None);
        }
        let z2 = z1 - f1 * (z1 - z0) / (f1 - f0);
        if !z2.is_finite() || z2 <= 0.0 || z2 >= z_max {
            return Ok(None);
        }
        let f2 = constitutive_ratio(z2, statistics)? - target;
        let dz = (z2 - z1).abs();
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = f2;
        if dz <= 1e-12 {
            return Ok(Some(finish_state(z1, statistics, rho, theta0)?));
        }
    }
    Ok(None)
}

fn finish_state(
    z: f64,
    statistics: Statistics,
    rho: f64,
    theta0: f64,
) -> Result<ThermoState, SolverError> {
    let q1 = statistics.fugacity_fn(1.0, z)?;
    let temperature = theta0 * rho / (2.0 * std::f64::consts::PI * q1);
    Ok(ThermoState {
        fugacity: z,
        temperature,
        theta0,
        statistics,
    })
}

/// Samples the quantum equilibrium
/// `M_q(v) = (1/θ0) / (z⁻¹ exp(|v-u|²/(2T)) - sign)` on the grid
/// (`sign = +1` Bose, `-1` Fermi), row-major like [`VelocityGrid::sample`].
pub fn quantum_maxwellian(thermo: &ThermoState, u: [f64; 2], grid: &VelocityGrid) -> Vec<f64> {
    let z_inv = 1.0 / thermo.fugacity;
    let inv_2t = 1.0 / (2.0 * thermo.temperature);
    let sign = thermo.statistics.sign();
    let inv_theta0 = 1.0 / thermo.theta0;
    grid.sample(|vx, vy| {
        let w = (vx - u[0]).powi(2) + (vy - u[1]).powi(2);
        inv_theta0 / (z_inv * (w * inv_2t).exp() - sign)
    })
}

/// Samples the classical Gaussian with the same first five moments,
/// `M_c(v) = ρ/(2πe) · exp(-|v-u|²/(2e))`: internal energy replaces
/// temperature so that mass, momentum, and energy match the quantum state.
pub fn classical_maxwellian_from_e(
    rho: f64,
    u: [f64; 2],
    e: f64,
    grid: &VelocityGrid,
) -> Vec<f64> {
    let amp = rho / (2.0 * std::f64::consts::PI * e);
    let inv_2e = 1.0 / (2.0 * e);
    grid.sample(|vx, vy| {
        let w = (vx - u[0]).powi(2) + (vy - u[1]).powi(2);
        amp * (-w * inv_2e).exp()
    })
}
