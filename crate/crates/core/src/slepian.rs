//! Rectangular sequential filter and prolate spheroidal wave functions.
//!
//! With `R̃ = 1{|ω| < Ω}` and `Q = 1{|t| < τ}` the filter reduces to the
//! time-limited band-limiting operator, whose eigenfunctions `Φₙ` depend only
//! on `c = Ωτ`. The eigenproblem is solved on `x = t/τ ∈ [-1, 1]` with kernel
//! `sin(c(x − y))/(π(x − y))` and rescaled to physical time on sampling.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use faer::{Mat, Side};

use crate::axis::{Domain, SampledAxis, SampledSignal};
use crate::error::{Error, Result};
use crate::filter::{FilterSpec, StageOrder};
use crate::profile::{sinc, SpectralProfile, TemporalProfile};
use crate::quadrature::gauss_legendre;
use crate::C64;

// float methods come from std instead whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Eigenvalues below this are not numerically resolvable.
pub const MIN_EIGENVALUE: f64 = 1e-14;

/// Largest mode index the Legendre solver accepts.
pub const MAX_LEGENDRE_MODE: usize = 60;

/// Rectangular sequential filter: `Ω = πB`, `τ = T/2`, `c = Ωτ = (π/2)BT`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectangularSif {
    bandwidth: f64,
    duration: f64,
}

impl RectangularSif {
    pub fn new(bandwidth: f64, duration: f64) -> Result<Self> {
        rectangular_profiles(bandwidth, duration)?;
        Ok(Self { bandwidth, duration })
    }

    /// Square filter `B = T = √BT`.
    pub fn from_bt(bt: f64) -> Result<Self> {
        if !(bt > 0.0) || !bt.is_finite() {
            return Err(Error::InvalidParameter("time-bandwidth product must be positive"));
        }
        Self::new(bt.sqrt(), bt.sqrt())
    }

    pub fn from_c(c: f64) -> Result<Self> {
        Self::from_bt(2.0 * c / PI)
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn bt(&self) -> f64 {
        self.bandwidth * self.duration
    }

    pub fn omega(&self) -> f64 {
        PI * self.bandwidth
    }

    pub fn tau_half(&self) -> f64 {
        self.duration / 2.0
    }

    pub fn c(&self) -> f64 {
        self.omega() * self.tau_half()
    }

    pub fn profiles(&self) -> (SpectralProfile, TemporalProfile) {
        (
            SpectralProfile::Rectangular { bandwidth: self.bandwidth },
            TemporalProfile::Rectangular { duration: self.duration },
        )
    }

    pub fn filter(&self, order: StageOrder) -> FilterSpec {
        let (r, q) = self.profiles();
        FilterSpec::sif(r, q, order)
    }
}

/// Indicator window `|ω| < πB` and gate `|t| < T/2`.
pub fn rectangular_profiles(bandwidth: f64, duration: f64) -> Result<(SpectralProfile, TemporalProfile)> {
    Ok((SpectralProfile::rectangular(bandwidth)?, TemporalProfile::rectangular(duration)?))
}

/// `⌈2c/π⌉ + 10`, enough to cover the plunge region.
pub fn default_n_max(c: f64) -> usize {
    (2.0 * c / PI).ceil() as usize + 10
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PswfMethod {
    Nystrom,
    LegendreOperator,
}

/// One prolate function in scaled units, normalized so that
/// `∫_{-1}^{1} Φ² dx = β` and `∫ Φ² dx = 1` over the line.
#[derive(Debug, Clone)]
pub struct PswfFunction {
    c: f64,
    beta: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
    /// Coefficients on `√(k+½) P_k`, when known.
    legendre: Option<Vec<f64>>,
}

impl PswfFunction {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `Φ(x)` for any real `x`. Outside `[-1, 1]` (or without an expansion)
    /// the eigen-equation `Φ = β⁻¹ K Φ` supplies the value.
    pub fn eval(&self, x: f64) -> f64 {
        if let Some(d) = &self.legendre {
            if x.abs() <= 1.0 {
                return legendre_series(d, x);
            }
        }
        let c = self.c;
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((y, w), v)| w * v * c / PI * sinc(c * (x - y)))
            .sum();
        s / self.beta
    }

    /// `∫_{-1}^{1} e^{iξy} Φ(y) dy`.
    pub fn finite_transform(&self, xi: f64) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((y, w), v)| C64::cis(xi * y) * (w * v))
            .sum()
    }

    /// Fourier transform over the line: `β⁻¹ ∫_{-1}^{1} e^{iξy}Φ(y)dy` for
    /// `|ξ| < c`, zero beyond, `1/√2` of the limit at `|ξ| = c`.
    pub fn spectrum(&self, xi: f64) -> C64 {
        let d = xi.abs() - self.c;
        let edge = if d.abs() <= 1e-12 * self.c {
            FRAC_1_SQRT_2
        } else if d < 0.0 {
            1.0
        } else {
            return C64::new(0.0, 0.0);
        };
        self.finite_transform(xi) * (edge / self.beta)
    }
}

/// Eigenvalues `β₀ > β₁ > …` and functions `Φₙ` of the band-limiting
/// operator restricted to `|t| < τ`.
#[derive(Debug, Clone)]
pub struct PswfSolution {
    c: f64,
    tau_half: f64,
    method: PswfMethod,
    functions: Vec<PswfFunction>,
    requested: usize,
}

impl PswfSolution {
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn method(&self) -> PswfMethod {
        self.method
    }

    pub fn tau_half(&self) -> f64 {
        self.tau_half
    }

    /// Same functions on a gate of half-width `tau_half` (default 1).
    pub fn with_half_width(mut self, tau_half: f64) -> Result<Self> {
        if !(tau_half > 0.0) || !tau_half.is_finite() {
            return Err(Error::InvalidParameter("half-width must be positive"));
        }
        self.tau_half = tau_half;
        Ok(self)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.functions.iter().map(|f| f.beta).collect()
    }

    pub fn functions(&self) -> &[PswfFunction] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Modes asked for (`n_max + 1`).
    pub fn requested(&self) -> usize {
        self.requested
    }

    /// True when fewer modes than requested were resolvable.
    pub fn truncated(&self) -> bool {
        self.functions.len() < self.requested
    }

    fn function(&self, n: usize) -> Result<&PswfFunction> {
        self.functions.get(n).ok_or(Error::IndexOutOfRange { index: n, len: self.functions.len() })
    }

    /// `Φₙ(t)` in physical time, unit norm over the line.
    pub fn eval(&self, n: usize, t: f64) -> Result<f64> {
        Ok(self.function(n)?.eval(t / self.tau_half) / self.tau_half.sqrt())
    }

    /// `Φₙ` sampled on a time axis.
    pub fn sample(&self, n: usize, axis: &SampledAxis) -> Result<SampledSignal> {
        axis.expect(Domain::Time)?;
        let f = self.function(n)?;
        let (tau, s) = (self.tau_half, self.tau_half.sqrt());
        Ok(SampledSignal::from_fn(*axis, |t| C64::new(f.eval(t / tau) / s, 0.0)))
    }

    /// `Φ̃ₙ(ω) = ∫ e^{iωt} Φₙ(t) dt` sampled on a frequency axis.
    pub fn sample_spectrum(&self, n: usize, axis: &SampledAxis) -> Result<SampledSignal> {
        axis.expect(Domain::AngularFrequency)?;
        let f = self.function(n)?;
        let (tau, s) = (self.tau_half, self.tau_half.sqrt());
        Ok(SampledSignal::from_fn(*axis, |w| f.spectrum(w * tau) * s))
    }

    /// `∫_{-τ}^{τ} Φₘ Φₙ dt`.
    pub fn restricted_inner(&self, m: usize, n: usize) -> Result<f64> {
        let (a, b) = (self.function(m)?, self.function(n)?);
        if a.nodes.len() == b.nodes.len() {
            Ok(a.weights.iter().zip(&a.values).zip(&b.values).map(|((w, x), y)| w * x * y).sum())
        } else {
            Ok(a.nodes.iter().zip(&a.weights).zip(&a.values).map(|((x, w), v)| w * v * b.eval(*x)).sum())
        }
    }

    /// `∫ Φₘ Φₙ dt` over the line, evaluated in the frequency domain where
    /// both functions are supported on `|ξ| ≤ c`.
    pub fn full_line_inner(&self, m: usize, n: usize) -> Result<f64> {
        let (a, b) = (self.function(m)?, self.function(n)?);
        let k = 96 + (2.0 * self.c) as usize;
        let (xs, ws) = gauss_legendre(k);
        let s: f64 = xs
            .iter()
            .zip(&ws)
            .map(|(x, w)| {
                let xi = x * self.c;
                (a.finite_transform(xi).conj() * b.finite_transform(xi)).re * w
            })
            .sum();
        Ok(s * self.c / (2.0 * PI) / (a.beta * b.beta))
    }
}

fn check_c(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("bandwidth parameter c must be positive"))
    }
}

/// Orient `values` (sampled at ascending `nodes` symmetric about 0): even
/// modes positive at the centre, odd modes positive just right of it.
fn orientation(n: usize, nodes: &[f64], values: &[f64]) -> f64 {
    let mid = nodes.iter().position(|&x| x > 1e-14).unwrap_or(0);
    let probe = if n % 2 == 0 && nodes.get(mid.wrapping_sub(1)).is_some_and(|x| x.abs() < 1e-14) {
        values[mid - 1]
    } else {
        values[mid]
    };
    if probe < 0.0 { -1.0 } else { 1.0 }
}

/// Nyström solution on `nodes` Gauss-Legendre points (at least
/// `max(256, 32c)` are used). Modes with `β < 1e-14` are dropped; see
/// [`PswfSolution::truncated`].
pub fn pswf_solve_nystrom(c: f64, n_max: usize, nodes: usize) -> Result<PswfSolution> {
    check_c(c)?;
    let n_nodes = nodes.max(256).max((32.0 * c).ceil() as usize);
    let (x, w) = gauss_legendre(n_nodes);
    let sw: Vec<f64> = w.iter().map(|w| w.sqrt()).collect();
    let a = Mat::<f64>::from_fn(n_nodes, n_nodes, |i, j| {
        sw[i] * sw[j] * c / PI * sinc(c * (x[i] - x[j]))
    });
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::Numeric("eigenvalue iteration did not converge"))?;
    let vals = evd.S().column_vector();
    let vecs = evd.U();
    let mut functions = Vec::new();
    for n in 0..=n_max.min(n_nodes - 1) {
        let col = n_nodes - 1 - n;
        let beta = vals[col];
        if !(beta >= MIN_EIGENVALUE) {
            break;
        }
        let mut values: Vec<f64> = (0..n_nodes).map(|j| vecs[(j, col)] / sw[j] * beta.sqrt()).collect();
        let sign = orientation(n, &x, &values);
        values.iter_mut().for_each(|v| *v *= sign);
        functions.push(PswfFunction { c, beta, nodes: x.clone(), weights: w.clone(), values, legendre: None });
    }
    Ok(PswfSolution { c, tau_half: 1.0, method: PswfMethod::Nystrom, functions, requested: n_max + 1 })
}

/// `Σ dₖ √(k+½) Pₖ(x)`.
fn legendre_series(d: &[f64], x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    let mut s = d.first().copied().unwrap_or(0.0) * 0.5f64.sqrt();
    if d.len() > 1 {
        s += d[1] * 1.5f64.sqrt() * x;
    }
    for (k, dk) in d.iter().enumerate().skip(2) {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        s += dk * (kf + 0.5).sqrt() * p2;
        p0 = p1;
        p1 = p2;
    }
    s
}

/// Eigenvectors of one parity block of the prolate operator
/// `-(d/dx)(1-x²)(d/dx) + c²x²` in the normalized Legendre basis, ascending.
fn prolate_block(c: f64, parity: usize, size: usize) -> Result<(Vec<f64>, Mat<f64>)> {
    let c2 = c * c;
    let k_of = |i: usize| (2 * i + parity) as f64;
    let m = Mat::<f64>::from_fn(size, size, |i, j| {
        if i == j {
            let k = k_of(i);
            k * (k + 1.0) + c2 * (2.0 * k * (k + 1.0) - 1.0) / ((2.0 * k + 3.0) * (2.0 * k - 1.0))
        } else if i + 1 == j || j + 1 == i {
            let k = k_of(i.min(j));
            c2 * (k + 2.0) * (k + 1.0) / ((2.0 * k + 3.0) * ((2.0 * k + 1.0) * (2.0 * k + 5.0)).sqrt())
        } else {
            0.0
        }
    });
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::Numeric("eigenvalue iteration did not converge"))?;
    let vals = evd.S().column_vector().iter().copied().collect();
    Ok((vals, evd.U().to_owned()))
}

/// Solution through the commuting differential operator, tridiagonal in the
/// Legendre basis. `βₙ = c|μₙ|²/(2π)` where `μₙ` is the eigenvalue of the
/// finite Fourier transform, evaluated at the largest node of `Φₙ`; this is
/// the restricted energy of the unit-norm function.
pub fn pswf_solve_legendre(c: f64, n_max: usize) -> Result<PswfSolution> {
    check_c(c)?;
    if n_max > MAX_LEGENDRE_MODE {
        return Err(Error::IndexOutOfRange { index: n_max, len: MAX_LEGENDRE_MODE + 1 });
    }
    let mut basis = 2 * n_max + 40 + (1.5 * c) as usize;
    loop {
        match legendre_attempt(c, n_max, basis) {
            Ok(sol) => return Ok(sol),
            Err(Error::Numeric(_)) if basis < 2000 => basis *= 2,
            Err(e) => return Err(e),
        }
    }
}

fn legendre_attempt(c: f64, n_max: usize, basis: usize) -> Result<PswfSolution> {
    let half = basis / 2;
    let blocks = [prolate_block(c, 0, half)?, prolate_block(c, 1, half)?];
    let m = (128 + 2 * basis).max((4.0 * c) as usize);
    let (x, w) = gauss_legendre(m);
    let mut functions = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let parity = n % 2;
        let (_, vecs) = &blocks[parity];
        let col = n / 2;
        let mut d = alloc::vec![0.0; 2 * half];
        let mut head = 0.0f64;
        for i in 0..half {
            let v = vecs[(i, col)];
            d[2 * i + parity] = v;
            head = head.max(v.abs());
        }
        let tail = (half.saturating_sub(3)..half).map(|i| vecs[(i, col)].abs()).fold(0.0, f64::max);
        if tail > 1e-12 * head {
            return Err(Error::Numeric("Legendre basis too small"));
        }
        // the block eigenvector has unit coefficient norm, i.e. ∫_{-1}^{1} Φ² = 1
        let mut values: Vec<f64> = x.iter().map(|&xi| legendre_series(&d, xi)).collect();
        let sign = orientation(n, &x, &values);
        let star = (0..m).max_by(|&a, &b| values[a].abs().partial_cmp(&values[b].abs()).unwrap()).unwrap();
        let integral: C64 = x
            .iter()
            .zip(&w)
            .zip(&values)
            .map(|((y, wy), v)| C64::cis(c * x[star] * y) * (wy * v))
            .sum();
        let mu = integral.norm() / values[star].abs();
        let beta = c * mu * mu / (2.0 * PI);
        let scale = sign * beta.sqrt();
        values.iter_mut().for_each(|v| *v *= scale);
        d.iter_mut().for_each(|v| *v *= scale);
        functions.push(PswfFunction { c, beta, nodes: x.clone(), weights: w.clone(), values, legendre: Some(d) });
    }
    Ok(PswfSolution {
        c,
        tau_half: 1.0,
        method: PswfMethod::LegendreOperator,
        functions,
        requested: n_max + 1,
    })
}

/// Filter modes of the frequency-first rectangular filter on `axis`:
/// input `φₙ = Φₙ` (band-limited, unit norm over the line), output
/// `ψₙ = 1{|t|<τ} Φₙ/√βₙ` (unit norm on the gate), and `λₙ = √βₙ`.
/// A frequency axis yields the spectra of both modes.
pub fn slepian_filter_modes(
    sol: &PswfSolution,
    n: usize,
    axis: &SampledAxis,
) -> Result<(SampledSignal, SampledSignal, f64)> {
    let f = sol.function(n)?;
    if !(f.beta > MIN_EIGENVALUE) {
        return Err(Error::Numeric("eigenvalue below the resolvable threshold"));
    }
    let (tau, s, sb) = (sol.tau_half, sol.tau_half.sqrt(), f.beta.sqrt());
    let gate = TemporalProfile::Rectangular { duration: 2.0 * tau };
    let (phi, psi) = match axis.domain() {
        Domain::Time => (
            SampledSignal::from_fn(*axis, |t| C64::new(f.eval(t / tau) / s, 0.0)),
            SampledSignal::from_fn(*axis, |t| C64::new(gate.gate(t) * f.eval(t / tau) / (s * sb), 0.0)),
        ),
        Domain::AngularFrequency => (
            SampledSignal::from_fn(*axis, |w| f.spectrum(w * tau) * s),
            SampledSignal::from_fn(*axis, |w| f.finite_transform(w * tau) * (s / sb)),
        ),
    };
    Ok((phi, psi, sb))
}

/// `(η, ξ) = (β₀(c), β₀/BT)` with `c = (π/2)BT`.
pub fn slepian_tradeoff(bt: f64) -> Result<(f64, f64)> {
    if !(bt > 0.0) || !bt.is_finite() {
        return Err(Error::InvalidParameter("time-bandwidth product must be positive"));
    }
    let sol = pswf_solve_legendre(PI / 2.0 * bt, 0)?;
    let eta = sol.functions[0].beta;
    Ok((eta, eta / bt))
}
