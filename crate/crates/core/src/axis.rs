//! Uniform sampling grids and complex signals living on them.
//!
//! Frequency-domain integrals carry the measure `dω/2π`, so the quadrature
//! weight of an angular-frequency axis is `step / 2π` while a time axis uses
//! `step` directly. All weights are uniform: profiles with a jump (top-hat
//! windows) take the value `1/√2` on a node that sits exactly on the jump,
//! which makes every energy sum reproduce the trapezoid rule.

use alloc::vec::Vec;
use core::f64::consts::PI;


use crate::error::{Error, Result};
use crate::C64;

// float methods come from std instead whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Which variable an axis samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Time,
    AngularFrequency,
}

impl Domain {
    pub fn conjugate(self) -> Domain {
        match self {
            Domain::Time => Domain::AngularFrequency,
            Domain::AngularFrequency => Domain::Time,
        }
    }
}

/// A uniform grid `start + i * step`, `i = 0..count`, in seconds or rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledAxis {
    start: f64,
    step: f64,
    count: usize,
    domain: Domain,
    /// Start of the conjugate axis produced by a discrete Fourier transform.
    /// Kept so that a forward/inverse round trip lands on the original grid.
    reciprocal_start: Option<f64>,
}

impl SampledAxis {
    pub fn new(domain: Domain, start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidParameter("axis step must be positive and finite"));
        }
        if !start.is_finite() {
            return Err(Error::InvalidParameter("axis start must be finite"));
        }
        if count < 2 {
            return Err(Error::InvalidParameter("axis needs at least two points"));
        }
        Ok(Self { start, step, count, domain, reciprocal_start: None })
    }

    /// Closed grid on `[-half_span, half_span]`; both end points are nodes.
    pub fn symmetric(domain: Domain, half_span: f64, count: usize) -> Result<Self> {
        if !(half_span > 0.0) {
            return Err(Error::InvalidParameter("half span must be positive"));
        }
        if count < 2 {
            return Err(Error::InvalidParameter("axis needs at least two points"));
        }
        let step = 2.0 * half_span / (count - 1) as f64;
        Self::new(domain, -half_span, step, count)
    }

    /// FFT-style grid: `count` points spaced by `step` with index `count/2` at zero.
    pub fn centered(domain: Domain, step: f64, count: usize) -> Result<Self> {
        Self::new(domain, -((count / 2) as f64) * step, step, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.point(i))
    }

    /// Quadrature weight of one node: `step` on time axes, `step/2π` on frequency axes.
    pub fn weight(&self) -> f64 {
        match self.domain {
            Domain::Time => self.step,
            Domain::AngularFrequency => self.step / (2.0 * PI),
        }
    }

    /// Largest `|x|` over the grid.
    pub fn max_abs(&self) -> f64 {
        self.start.abs().max(self.end().abs())
    }

    /// Grid produced by a discrete Fourier transform of a signal on this axis.
    ///
    /// Satisfies `step * reciprocal.step = 2π / count`.
    pub fn reciprocal(&self) -> SampledAxis {
        let step = 2.0 * PI / (self.count as f64 * self.step);
        let start = self
            .reciprocal_start
            .unwrap_or(-((self.count / 2) as f64) * step);
        SampledAxis {
            start,
            step,
            count: self.count,
            domain: self.domain.conjugate(),
            reciprocal_start: Some(self.start),
        }
    }

    /// Same nodes up to rounding, ignoring any recorded reciprocal origin.
    pub fn same_grid(&self, other: &SampledAxis) -> bool {
        let scale = self.step.max(other.step);
        self.domain == other.domain
            && self.count == other.count
            && (self.step - other.step).abs() <= 1e-12 * scale
            && (self.start - other.start).abs() <= 1e-9 * scale
    }

    /// Same axis with the node count changed to `2 * count - 1`, keeping both
    /// end points so coarse nodes remain nodes.
    pub fn refined(&self) -> SampledAxis {
        SampledAxis {
            start: self.start,
            step: self.step / 2.0,
            count: 2 * self.count - 1,
            domain: self.domain,
            reciprocal_start: None,
        }
    }

    pub(crate) fn expect(&self, domain: Domain) -> Result<()> {
        if self.domain == domain {
            Ok(())
        } else {
            Err(Error::Domain { expected: domain, found: self.domain })
        }
    }
}

/// Complex samples on a [`SampledAxis`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    axis: SampledAxis,
    values: Vec<C64>,
}

impl SampledSignal {
    pub fn new(axis: SampledAxis, values: Vec<C64>) -> Result<Self> {
        if values.len() != axis.count() {
            return Err(Error::AxisMismatch("sample count differs from axis length"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("signal samples"));
        }
        Ok(Self { axis, values })
    }

    pub fn from_fn(axis: SampledAxis, f: impl Fn(f64) -> C64) -> Self {
        let values = axis.points().map(f).collect();
        Self { axis, values }
    }

    pub fn zeros(axis: SampledAxis) -> Self {
        Self { axis, values: alloc::vec![C64::new(0.0, 0.0); axis.count()] }
    }

    pub fn axis(&self) -> &SampledAxis {
        &self.axis
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub(crate) fn from_parts(axis: SampledAxis, values: Vec<C64>) -> Self {
        debug_assert_eq!(axis.count(), values.len());
        Self { axis, values }
    }

    /// `∫|f|²` under the axis measure.
    pub fn energy(&self) -> f64 {
        self.axis.weight() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.energy().sqrt()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            axis: self.axis,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Copy rescaled to unit energy. Fails on a zero signal.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) {
            return Err(Error::Numeric("cannot normalize a zero signal"));
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    /// Pointwise sum; both signals must share a grid.
    pub fn add(&self, other: &SampledSignal) -> Result<Self> {
        if !self.axis.same_grid(&other.axis) {
            return Err(Error::AxisMismatch("sum of signals on different grids"));
        }
        Ok(Self {
            axis: self.axis,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    /// `⟨self, other⟩ = ∫ self* · other` on a shared grid.
    pub fn inner(&self, other: &SampledSignal) -> Result<C64> {
        if !self.axis.same_grid(&other.axis) {
            return Err(Error::AxisMismatch("inner product of signals on different grids"));
        }
        let sum: C64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(sum * self.axis.weight())
    }

    /// Evaluate this signal on another grid.
    ///
    /// A grid of the conjugate domain is reached by direct quadrature of the
    /// Fourier integral, `f̃(ω) = Σ Δt e^{iωt} f(t)` or
    /// `f(t) = Σ (Δω/2π) e^{-iωt} f̃(ω)`. A different grid of the same domain
    /// is reached by band-limited interpolation; target nodes outside the
    /// source window are set to zero.
    pub fn represent_on(&self, target: &SampledAxis) -> Result<SampledSignal> {
        if self.axis.same_grid(target) {
            return Ok(SampledSignal { axis: *target, values: self.values.clone() });
        }
        if target.domain() == self.axis.domain().conjugate() {
            return Ok(self.direct_transform(target));
        }
        let spectrum = crate::fourier::transform(self);
        let mut out = spectrum.direct_transform(target);
        let lo = self.axis.start() - 0.5 * self.axis.step();
        let hi = self.axis.end() + 0.5 * self.axis.step();
        for (x, v) in target.points().zip(out.values.iter_mut()) {
            if x < lo || x > hi {
                *v = C64::new(0.0, 0.0);
            }
        }
        Ok(out)
    }

    fn direct_transform(&self, target: &SampledAxis) -> SampledSignal {
        // e^{+iωt} forward, e^{-iωt} inverse
        let sign = match self.axis.domain() {
            Domain::Time => 1.0,
            Domain::AngularFrequency => -1.0,
        };
        let w = self.axis.weight();
        let src = &self.axis;
        let values = target
            .points()
            .map(|y| {
                // phase advances by a constant rotation per source node
                let rot = C64::cis(sign * y * src.step());
                let mut ph = C64::cis(sign * y * src.start());
                let mut acc = C64::new(0.0, 0.0);
                for (k, v) in self.values.iter().enumerate() {
                    if k % 64 == 0 {
                        ph = C64::cis(sign * y * src.point(k));
                    }
                    acc += ph * v;
                    ph *= rot;
                }
                acc * w
            })
            .collect();
        SampledSignal { axis: *target, values }
    }
}
