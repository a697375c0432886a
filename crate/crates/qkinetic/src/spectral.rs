//! Fourier transforms between velocity-grid samples and centered mode arrays,
//! plus the ring-buffer padding used for alias-free convolutions.
//!
//! Conventions. A real field `f` sampled at `v_j = -L + jΔv` is represented by
//! coefficients `f̂_k`, `k ∈ [-N/2, N/2)²`, of the truncated series
//! `f(v) = Σ_k f̂_k exp(i(π/L)k·v)`, normalized so that
//! `f̂_k = (2L)^{-2} ∫ f(v) exp(-i(π/L)k·v) dv` (midpoint rule). Because the
//! nodes start at `-L` rather than 0, the discrete transform picks up the
//! alternating phase `(-1)^{k_x+k_y}`, which is folded in here so callers only
//! ever see the physical coefficients.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Complex Fourier coefficients on the centered index block `[-N/2, N/2)²`.
///
/// Storage is row-major over block offsets `(a, b) ∈ [0, N)²`, which map to
/// wavevectors `k = (a - N/2, b - N/2)`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    n: usize,
    data: Vec<Complex64>,
}

impl SpectralField {
    /// Zero coefficients for an `N×N` block.
    pub fn zeros(n: usize) -> Self {
        SpectralField {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// Points per axis of the underlying grid.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Raw row-major coefficient storage (block offsets, not wavevectors).
    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Mutable access to the raw storage.
    #[inline]
    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Coefficient at wavevector `k = (kx, ky)`, `kx, ky ∈ [-N/2, N/2)`.
    #[inline]
    pub fn at(&self, kx: i32, ky: i32) -> Complex64 {
        let half = (self.n / 2) as i32;
        debug_assert!(kx >= -half && kx < half && ky >= -half && ky < half);
        let a = (kx + half) as usize;
        let b = (ky + half) as usize;
        self.data[a * self.n + b]
    }

    /// Sets the coefficient at wavevector `k = (kx, ky)`.
    #[inline]
    pub fn set(&mut self, kx: i32, ky: i32, value: Complex64) {
        let half = (self.n / 2) as i32;
        debug_assert!(kx >= -half && kx < half && ky >= -half && ky < half);
        let a = (kx + half) as usize;
        let b = (ky + half) as usize;
        self.data[a * self.n + b] = value;
    }

    /// Largest deviation from the conjugate symmetry `f̂_{-k} = conj(f̂_k)`
    /// over all pairable wavevectors (a diagnostic for real-valued fields).
    pub fn conjugate_symmetry_error(&self) -> f64 {
        let half = (self.n / 2) as i32;
        let mut worst = 0.0f64;
        for kx in (-half + 1)..half {
            for ky in (-half + 1)..half {
                let d = self.at(kx, ky) - self.at(-kx, -ky).conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }
}

/// Planned 2-D FFT of a fixed square size, with scratch reuse.
///
/// `forward` is the unnormalized DFT `Σ_j x_j e^{-2πi jk/P}`; `inverse` is the
/// unnormalized inverse DFT (no `1/P²` factor), matching the usual
/// FFT-library convention. Callers scale explicitly where required.
pub struct Fft2 {
    size: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    transpose: Vec<Complex64>,
}

impl Fft2 {
    /// Plans forward and inverse transforms for a `size × size` buffer.
    pub fn new(size: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(size);
        let inv = planner.plan_fft_inverse(size);
        let scratch_len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Fft2 {
            size,
            fwd,
            inv,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            transpose: vec![Complex64::new(0.0, 0.0); size * size],
        }
    }

    /// Side length the plans were built for.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    fn pass(&mut self, buf: &mut [Complex64], forward: bool) {
        debug_assert_eq!(buf.len(), self.size * self.size);
        let plan = if forward { &self.fwd } else { &self.inv };
        // Rows in place, then columns via transpose.
        plan.process_with_scratch(buf, &mut self.scratch);
        let p = self.size;
        for i in 0..p {
            for j in 0..p {
                self.transpose[j * p + i] = buf[i * p + j];
            }
        }
        plan.process_with_scratch(&mut self.transpose, &mut self.scratch);
        for i in 0..p {
            for j in 0..p {
                buf[j * p + i] = self.transpose[i * p + j];
            }
        }
    }

    /// In-place unnormalized forward 2-D FFT.
    pub fn forward(&mut self, buf: &mut [Complex64]) {
        self.pass(buf, true);
    }

    /// In-place unnormalized inverse 2-D FFT.
    pub fn inverse(&mut self, buf: &mut [Complex64]) {
        self.pass(buf, false);
    }
}

/// Transform pair between real velocity-grid samples and centered mode blocks.
pub struct VelocityTransform {
    n: usize,
    fft: Fft2,
    work: Vec<Complex64>,
}

impl VelocityTransform {
    /// Plans transforms for an `N`-per-axis grid.
    pub fn new(n: usize) -> Self {
        VelocityTransform {
            n,
            fft: Fft2::new(n),
            work: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// Points per axis.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Computes the centered coefficients of a real row-major field.
    pub fn forward(&mut self, f: &[f64]) -> SpectralField {
        let n = self.n;
        assert_eq!(f.len(), n * n, "field size mismatch");
        for (w, &x) in self.work.iter_mut().zip(f.iter()) {
            *w = Complex64::new(x, 0.0);
        }
        self.fft.forward(&mut self.work);
        let mut out = SpectralField::zeros(n);
        let half = n / 2;
        let norm = 1.0 / (n * n) as f64;
        for a in 0..n {
            let sa = (a + half) % n;
            for b in 0..n {
                let sb = (b + half) % n;
                let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
                out.data_mut()[a * n + b] = self.work[sa * n + sb] * (sign * norm);
            }
        }
        out
    }

    /// Evaluates the truncated series on the grid, returning the complex
    /// samples. For coefficient blocks of real fields the imaginary parts are
    /// round-off; [`VelocityTransform::inverse_real`] discards them after
    /// measuring.
    pub fn inverse_complex(&mut self, f_hat: &SpectralField) -> Vec<Complex64> {
        let n = self.n;
        assert_eq!(f_hat.n(), n, "spectral block size mismatch");
        let half = n / 2;
        for w in self.work.iter_mut() {
            *w = Complex64::new(0.0, 0.0);
        }
        for a in 0..n {
            let sa = (a + half) % n;
            for b in 0..n {
                let sb = (b + half) % n;
                let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
                self.work[sa * n + sb] = f_hat.data()[a * n + b] * sign;
            }
        }
        self.fft.inverse(&mut self.work);
        self.work.clone()
    }

    /// Evaluates the truncated series and returns `(real samples, max |imag|)`.
    pub fn inverse_real(&mut self, f_hat: &SpectralField) -> (Vec<f64>, f64) {
        let samples = self.inverse_complex(f_hat);
        let mut max_imag = 0.0f64;
        let mut out = Vec::with_capacity(samples.len());
        for s in samples {
            max_imag = max_imag.max(s.im.abs());
            out.push(s.re);
        }
        (out, max_imag)
    }
}

/// Writes a centered `N×N` block onto a zeroed `2N×2N` ring buffer at slots
/// `k mod 2N`, leaving a guard band that keeps subsequent circular
/// convolutions alias-free for all wavevector reads in `[-N+1, N-1]²`.
pub fn pad_to_ring(f_hat: &SpectralField, ring: &mut [Complex64]) {
    let n = f_hat.n();
    let p = 2 * n;
    assert_eq!(ring.len(), p * p, "ring buffer size mismatch");
    for r in ring.iter_mut() {
        *r = Complex64::new(0.0, 0.0);
    }
    let half = n as i32 / 2;
    for a in 0..n {
        let kx = a as i32 - half;
        let sx = kx.rem_euclid(p as i32) as usize;
        for b in 0..n {
            let ky = b as i32 - half;
            let sy = ky.rem_euclid(p as i32) as usize;
            ring[sx * p + sy] = f_hat.data()[a * n + b];
        }
    }
}

/// Reads the centered `N×N` block back out of a `2N×2N` ring buffer.
pub fn read_ring_center(ring: &[Complex64], n: usize) -> SpectralField {
    let p = 2 * n;
    assert_eq!(ring.len(), p * p, "ring buffer size mismatch");
    let mut out = SpectralField::zeros(n);
    let half = n as i32 / 2;
    for a in 0..n {
        let kx = a as i32 - half;
        let sx = kx.rem_euclid(p as i32) as usize;
        for b in 0..n {
            let ky = b as i32 - half;
            let sy = ky.rem_euclid(p as i32) as usize;
            out.data_mut()[a * n + b] = ring[sx * p + sy];
        }
    }
    out
}
