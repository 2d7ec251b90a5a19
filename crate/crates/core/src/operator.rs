//! Nyström discretization of filter kernels.
//!
//! A kernel `K(x, y)` mapping functions of `y` (columns) to functions of `x`
//! (rows) becomes the matrix `√wᵢ K(xᵢ, yⱼ) √wⱼ`, whose singular values
//! approximate those of the integral operator. Multiplication operators
//! (a window on its own axis) become the diagonal of the profile.
//!
//! Representations by (rows, cols) domain:
//!
//! | filter              | time ← time      | freq ← freq        | time ← freq          | freq ← time          |
//! |---------------------|------------------|--------------------|----------------------|----------------------|
//! | spectral window     | `R(t−t′)`        | `diag R̃`           | `e^{−iω′t}R̃(ω′)`     | `e^{iωt′}R̃(ω)`       |
//! | temporal gate       | `diag Q`         | `Q̃(ω−ω′)`          | `Q(t)e^{−iω′t}`      | `e^{iωt′}Q(t′)`      |
//! | SIF, frequency first| `Q(t)R(t−t″)`    | `Q̃(ω−ω″)R̃(ω″)`     | `Q(t)e^{−iω″t}R̃(ω″)` | n/a                  |
//! | SIF, time first     | `R(t−t″)Q(t″)`   | `R̃(ω)Q̃(ω−ω″)`      | n/a                  | `R̃(ω)e^{iωt″}Q(t″)`  |
//!
//! The mixed representations keep both factors compact and are the default.

use alloc::vec::Vec;
use core::f64::consts::PI;

use faer::{Mat, Side};

use crate::axis::{Domain, SampledAxis};
use crate::error::{Error, Result};
use crate::filter::{FilterKind, FilterSpec, StageOrder};
use crate::profile::{SpectralProfile, TemporalProfile};
use crate::C64;

// float methods come from std instead whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Largest kernel mass allowed to fall outside the grid.
pub const MAX_TAIL_MASS: f64 = 1e-6;

/// Smallest node count used for default grids.
pub const MIN_GRID_POINTS: usize = 256;

/// Discretized integral kernel.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    rows_axis: SampledAxis,
    cols_axis: SampledAxis,
    entries: Mat<C64>,
    weights_applied: bool,
    tail_mass: f64,
}

impl OperatorMatrix {
    /// Wrap an already weight-symmetrized matrix.
    pub fn from_entries(rows: SampledAxis, cols: SampledAxis, entries: Mat<C64>) -> Result<Self> {
        if entries.nrows() != rows.count() || entries.ncols() != cols.count() {
            return Err(Error::AxisMismatch("matrix shape differs from axis lengths"));
        }
        Ok(Self { rows_axis: rows, cols_axis: cols, entries, weights_applied: true, tail_mass: 0.0 })
    }

    /// Raw kernel samples `K(xᵢ, yⱼ)` without quadrature weights.
    pub fn from_kernel_unweighted(
        rows: SampledAxis,
        cols: SampledAxis,
        kernel: impl Fn(f64, f64) -> C64,
    ) -> Self {
        let entries = Mat::from_fn(rows.count(), cols.count(), |i, j| kernel(rows.point(i), cols.point(j)));
        Self { rows_axis: rows, cols_axis: cols, entries, weights_applied: false, tail_mass: 0.0 }
    }

    fn from_kernel(rows: SampledAxis, cols: SampledAxis, tail_mass: f64, kernel: impl Fn(f64, f64) -> C64) -> Self {
        let w = (rows.weight() * cols.weight()).sqrt();
        let entries = Mat::from_fn(rows.count(), cols.count(), |i, j| kernel(rows.point(i), cols.point(j)) * w);
        Self { rows_axis: rows, cols_axis: cols, entries, weights_applied: true, tail_mass }
    }

    fn diagonal(axis: SampledAxis, tail_mass: f64, profile: impl Fn(f64) -> f64) -> Self {
        let d: Vec<f64> = axis.points().map(profile).collect();
        let entries = Mat::from_fn(axis.count(), axis.count(), |i, j| {
            if i == j { C64::new(d[i], 0.0) } else { C64::new(0.0, 0.0) }
        });
        Self { rows_axis: axis, cols_axis: axis, entries, weights_applied: true, tail_mass }
    }

    /// Output-side axis.
    pub fn rows_axis(&self) -> &SampledAxis {
        &self.rows_axis
    }

    /// Input-side axis.
    pub fn cols_axis(&self) -> &SampledAxis {
        &self.cols_axis
    }

    pub fn entries(&self) -> &Mat<C64> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }

    pub fn weights_applied(&self) -> bool {
        self.weights_applied
    }

    /// Estimated fraction of the kernel's squared norm lying outside the grid.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.entries.squared_norm_l2()
    }

    pub fn trace(&self) -> C64 {
        (0..self.nrows().min(self.ncols())).map(|i| self.entries[(i, i)]).sum()
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        self.check_finite()?;
        self.entries
            .singular_values()
            .map_err(|_| Error::Numeric("singular value iteration did not converge"))
    }

    /// Eigenvalues of a Hermitian matrix, descending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if self.nrows() != self.ncols() {
            return Err(Error::AxisMismatch("eigenvalues need a square matrix"));
        }
        self.check_finite()?;
        let mut ev = self
            .entries
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::Numeric("eigenvalue iteration did not converge"))?;
        ev.reverse();
        Ok(ev)
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        for j in 0..self.ncols() {
            for i in 0..self.nrows() {
                let v = self.entries[(i, j)];
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::NonFinite("operator entries"));
                }
            }
        }
        Ok(())
    }
}

/// `F†F`, the Hermitian kernel on the input axis whose eigenvalues are `λₙ²`.
pub fn gram_kernel(op: &OperatorMatrix) -> Result<OperatorMatrix> {
    if !op.weights_applied {
        return Err(Error::InvalidParameter("gram kernel needs a weight-symmetrized operator"));
    }
    let entries = op.entries.adjoint() * &op.entries;
    Ok(OperatorMatrix {
        rows_axis: op.cols_axis,
        cols_axis: op.cols_axis,
        entries,
        weights_applied: true,
        tail_mass: op.tail_mass,
    })
}

/// Discretize the filter kernel with rows on `rows` (output) and columns on
/// `cols` (input). Fails when more than [`MAX_TAIL_MASS`] of the kernel falls
/// outside the grid or the grid cannot resolve it.
pub fn build_operator(spec: &FilterSpec, rows: &SampledAxis, cols: &SampledAxis) -> Result<OperatorMatrix> {
    build_operator_with(spec, rows, cols, MAX_TAIL_MASS)
}

/// [`build_operator`] with a caller-chosen tail-mass ceiling.
pub fn build_operator_with(
    spec: &FilterSpec,
    rows: &SampledAxis,
    cols: &SampledAxis,
    max_tail_mass: f64,
) -> Result<OperatorMatrix> {
    let (rows, cols) = (*rows, *cols);
    let op = match spec.kind() {
        FilterKind::SpectralWindow(r) => spectral_window(r, rows, cols)?,
        FilterKind::TemporalGate(q) => temporal_gate(q, rows, cols)?,
        FilterKind::Sif { spectral, temporal, order } => sif(spectral, temporal, *order, rows, cols)?,
        FilterKind::SeparableCoherent { output, input, lambda } => {
            let psi = output.represent_on(&rows)?;
            let phi = input.represent_on(&cols)?;
            let kept = psi.energy().min(1.0) * phi.energy().min(1.0);
            let (pv, fv) = (psi.values(), phi.values());
            let w = (rows.weight() * cols.weight()).sqrt() * *lambda;
            let entries = Mat::from_fn(rows.count(), cols.count(), |i, j| pv[i] * fv[j].conj() * w);
            OperatorMatrix { rows_axis: rows, cols_axis: cols, entries, weights_applied: true, tail_mass: 1.0 - kept }
        }
    };
    if !(op.tail_mass <= max_tail_mass) {
        return Err(Error::Truncation { tail_mass: op.tail_mass });
    }
    op.check_finite()?;
    Ok(op)
}

impl FilterSpec {
    /// Default (rows, cols) grids for the preferred representation, with at
    /// least `min_count` nodes per axis.
    ///
    /// Sequential filters use the mixed time/frequency form with both axes
    /// closed on the supports of `Q` and `R̃`; single windows use their own
    /// domain; coherent filters use their modes' axes.
    pub fn default_axes(&self, min_count: usize) -> Result<(SampledAxis, SampledAxis)> {
        let min_count = min_count.max(2);
        match self.kind() {
            FilterKind::SpectralWindow(r) => {
                let ax = SampledAxis::symmetric(Domain::AngularFrequency, r.support(), min_count)?;
                Ok((ax, ax))
            }
            FilterKind::TemporalGate(q) => {
                let ax = SampledAxis::symmetric(Domain::Time, q.support(), min_count)?;
                Ok((ax, ax))
            }
            FilterKind::SeparableCoherent { output, input, .. } => Ok((*output.axis(), *input.axis())),
            FilterKind::Sif { spectral, temporal, order } => {
                let (ts, ws) = (temporal.support(), spectral.support());
                let n = min_count.max(phase_count(ts, ws));
                let t = SampledAxis::symmetric(Domain::Time, ts, n)?;
                let w = SampledAxis::symmetric(Domain::AngularFrequency, ws, n)?;
                Ok(match order {
                    StageOrder::FrequencyFirst => (t, w),
                    StageOrder::TimeFirst => (w, t),
                })
            }
        }
    }
}

/// Node count keeping the phase step `ωΔt` and `tΔω` at most π/2.
fn phase_count(t_max: f64, w_max: f64) -> usize {
    (4.0 * t_max * w_max / PI).ceil() as usize + 1
}

fn check_phase(t: &SampledAxis, w: &SampledAxis) -> Result<()> {
    let limit_w = PI / (2.0 * t.max_abs());
    if w.step() > limit_w * (1.0 + 1e-12) {
        return Err(Error::Resolution { step: w.step(), limit: limit_w });
    }
    let limit_t = PI / (2.0 * w.max_abs());
    if t.step() > limit_t * (1.0 + 1e-12) {
        return Err(Error::Resolution { step: t.step(), limit: limit_t });
    }
    Ok(())
}

/// Time step resolving `R` (and the spectrum of `Q`, when given).
fn check_time_step(axis: &SampledAxis, r: &SpectralProfile, q: Option<&TemporalProfile>) -> Result<()> {
    let mut limit = match r {
        SpectralProfile::Gaussian { .. } => PI / (2.0 * r.support()),
        // 64 nodes across the sinc main lobe of width 2/B
        SpectralProfile::Rectangular { bandwidth } => 1.0 / (32.0 * bandwidth),
    };
    if let Some(band) = q.and_then(|q| q.spectrum_support()) {
        limit = limit.min(PI / (2.0 * band));
    }
    step_within(axis, limit)
}

/// Frequency step resolving `Q̃` (and the impulse response `R`, when given).
fn check_freq_step(axis: &SampledAxis, q: &TemporalProfile, r: Option<&SpectralProfile>) -> Result<()> {
    let mut limit = match q {
        TemporalProfile::Gaussian { .. } => PI / (2.0 * q.support()),
        // 64 nodes across the sinc main lobe of width 4π/T
        TemporalProfile::Rectangular { duration } => PI / (16.0 * duration),
    };
    if let Some(reach) = r.and_then(|r| r.impulse_support()) {
        limit = limit.min(PI / (2.0 * reach));
    }
    step_within(axis, limit)
}

fn step_within(axis: &SampledAxis, limit: f64) -> Result<()> {
    if axis.step() > limit * (1.0 + 1e-12) {
        Err(Error::Resolution { step: axis.step(), limit })
    } else {
        Ok(())
    }
}

fn same_grid(rows: &SampledAxis, cols: &SampledAxis) -> Result<()> {
    if rows.same_grid(cols) {
        Ok(())
    } else {
        Err(Error::AxisMismatch("multiplication operator needs identical row and column grids"))
    }
}

/// Fraction of a translated kernel `k(x − y)` (mass function `outside`)
/// falling outside `axis`, averaged over `y` on `over` with density `|g(y)|²`.
fn shifted_tail(
    axis: &SampledAxis,
    over: &SampledAxis,
    g: impl Fn(f64) -> f64,
    outside: impl Fn(f64, f64) -> f64,
) -> f64 {
    let (mut lost, mut total) = (0.0, 0.0);
    for y in over.points() {
        let d = g(y) * g(y);
        if d > 0.0 {
            lost += d * outside(axis.start() - y, axis.end() - y);
            total += d;
        }
    }
    if total > 0.0 { lost / total } else { 0.0 }
}

fn combine(a: f64, b: f64) -> f64 {
    1.0 - (1.0 - a.min(1.0)) * (1.0 - b.min(1.0))
}

fn cis(x: f64) -> C64 {
    C64::cis(x)
}

fn spectral_window(r: &SpectralProfile, rows: SampledAxis, cols: SampledAxis) -> Result<OperatorMatrix> {
    let r = *r;
    Ok(match (rows.domain(), cols.domain()) {
        (Domain::Time, Domain::Time) => {
            check_time_step(&rows, &r, None)?;
            check_time_step(&cols, &r, None)?;
            let tail = shifted_tail(&cols, &rows, |_| 1.0, |a, b| r.impulse_mass_outside(a, b));
            OperatorMatrix::from_kernel(rows, cols, tail, |t, s| C64::new(r.impulse_response(t - s), 0.0))
        }
        (Domain::AngularFrequency, Domain::AngularFrequency) => {
            same_grid(&rows, &cols)?;
            let tail = r.mass_outside(rows.start(), rows.end());
            OperatorMatrix::diagonal(rows, tail, |w| r.transmission(w))
        }
        (Domain::Time, Domain::AngularFrequency) => {
            check_phase(&rows, &cols)?;
            let tail = r.mass_outside(cols.start(), cols.end());
            OperatorMatrix::from_kernel(rows, cols, tail, |t, w| cis(-w * t) * r.transmission(w))
        }
        (Domain::AngularFrequency, Domain::Time) => {
            check_phase(&cols, &rows)?;
            let tail = r.mass_outside(rows.start(), rows.end());
            OperatorMatrix::from_kernel(rows, cols, tail, |w, t| cis(w * t) * r.transmission(w))
        }
    })
}

fn temporal_gate(q: &TemporalProfile, rows: SampledAxis, cols: SampledAxis) -> Result<OperatorMatrix> {
    let q = *q;
    Ok(match (rows.domain(), cols.domain()) {
        (Domain::Time, Domain::Time) => {
            same_grid(&rows, &cols)?;
            let tail = q.mass_outside(rows.start(), rows.end());
            OperatorMatrix::diagonal(rows, tail, |t| q.gate(t))
        }
        (Domain::AngularFrequency, Domain::AngularFrequency) => {
            check_freq_step(&rows, &q, None)?;
            check_freq_step(&cols, &q, None)?;
            let tail = shifted_tail(&rows, &cols, |_| 1.0, |a, b| q.spectrum_mass_outside(a, b));
            OperatorMatrix::from_kernel(rows, cols, tail, |w, v| C64::new(q.spectrum(w - v), 0.0))
        }
        (Domain::Time, Domain::AngularFrequency) => {
            check_phase(&rows, &cols)?;
            let tail = q.mass_outside(rows.start(), rows.end());
            OperatorMatrix::from_kernel(rows, cols, tail, |t, w| cis(-w * t) * q.gate(t))
        }
        (Domain::AngularFrequency, Domain::Time) => {
            check_phase(&cols, &rows)?;
            let tail = q.mass_outside(cols.start(), cols.end());
            OperatorMatrix::from_kernel(rows, cols, tail, |w, t| cis(w * t) * q.gate(t))
        }
    })
}

fn sif(
    r: &SpectralProfile,
    q: &TemporalProfile,
    order: StageOrder,
    rows: SampledAxis,
    cols: SampledAxis,
) -> Result<OperatorMatrix> {
    let (r, q) = (*r, *q);
    use Domain::{AngularFrequency as F, Time as T};
    use StageOrder::{FrequencyFirst as FF, TimeFirst as TF};
    let unsupported = Err(Error::UnsupportedRepresentation { rows: rows.domain(), cols: cols.domain() });
    Ok(match (order, rows.domain(), cols.domain()) {
        (FF, T, T) => {
            check_time_step(&rows, &r, Some(&q))?;
            check_time_step(&cols, &r, Some(&q))?;
            let spread = shifted_tail(&cols, &rows, |t| q.gate(t), |a, b| r.impulse_mass_outside(a, b));
            let tail = combine(q.mass_outside(rows.start(), rows.end()), spread);
            OperatorMatrix::from_kernel(rows, cols, tail, |t, s| C64::new(q.gate(t) * r.impulse_response(t - s), 0.0))
        }
        (TF, T, T) => {
            check_time_step(&rows, &r, Some(&q))?;
            check_time_step(&cols, &r, Some(&q))?;
            let spread = shifted_tail(&rows, &cols, |t| q.gate(t), |a, b| r.impulse_mass_outside(a, b));
            let tail = combine(q.mass_outside(cols.start(), cols.end()), spread);
            OperatorMatrix::from_kernel(rows, cols, tail, |t, s| C64::new(r.impulse_response(t - s) * q.gate(s), 0.0))
        }
        (FF, F, F) => {
            check_freq_step(&rows, &q, Some(&r))?;
            check_freq_step(&cols, &q, Some(&r))?;
            let spread = shifted_tail(&rows, &cols, |w| r.transmission(w), |a, b| q.spectrum_mass_outside(a, b));
            let tail = combine(r.mass_outside(cols.start(), cols.end()), spread);
            OperatorMatrix::from_kernel(rows, cols, tail, |w, v| C64::new(q.spectrum(w - v) * r.transmission(v), 0.0))
        }
        (TF, F, F) => {
            check_freq_step(&rows, &q, Some(&r))?;
            check_freq_step(&cols, &q, Some(&r))?;
            let spread = shifted_tail(&cols, &rows, |w| r.transmission(w), |a, b| q.spectrum_mass_outside(a, b));
            let tail = combine(r.mass_outside(rows.start(), rows.end()), spread);
            OperatorMatrix::from_kernel(rows, cols, tail, |w, v| C64::new(r.transmission(w) * q.spectrum(w - v), 0.0))
        }
        (FF, T, F) => {
            check_phase(&rows, &cols)?;
            let tail = combine(q.mass_outside(rows.start(), rows.end()), r.mass_outside(cols.start(), cols.end()));
            let qt: Vec<f64> = rows.points().map(|t| q.gate(t)).collect();
            let rw: Vec<f64> = cols.points().map(|w| r.transmission(w)).collect();
            let w = (rows.weight() * cols.weight()).sqrt();
            let entries = Mat::from_fn(rows.count(), cols.count(), |i, j| {
                cis(-cols.point(j) * rows.point(i)) * (qt[i] * rw[j] * w)
            });
            OperatorMatrix { rows_axis: rows, cols_axis: cols, entries, weights_applied: true, tail_mass: tail }
        }
        (TF, F, T) => {
            check_phase(&cols, &rows)?;
            let tail = combine(q.mass_outside(cols.start(), cols.end()), r.mass_outside(rows.start(), rows.end()));
            let rw: Vec<f64> = rows.points().map(|w| r.transmission(w)).collect();
            let qt: Vec<f64> = cols.points().map(|t| q.gate(t)).collect();
            let w = (rows.weight() * cols.weight()).sqrt();
            let entries = Mat::from_fn(rows.count(), cols.count(), |i, j| {
                cis(rows.point(i) * cols.point(j)) * (rw[i] * qt[j] * w)
            });
            OperatorMatrix { rows_axis: rows, cols_axis: cols, entries, weights_applied: true, tail_mass: tail }
        }
        _ => return unsupported,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axis::SampledSignal;
    use crate::gaussian::mehler_u;

    fn gaussian_sif(b: f64, t: f64, order: StageOrder) -> FilterSpec {
        FilterSpec::sif(SpectralProfile::gaussian(b).unwrap(), TemporalProfile::gaussian(t).unwrap(), order)
    }

    #[test]
    fn separable_kernel_has_rank_one() {
        let ax = SampledAxis::centered(Domain::Time, 0.05, 128).unwrap();
        let psi = SampledSignal::from_fn(ax, |t| C64::new((-t * t).exp(), 0.0)).normalized().unwrap();
        let phi = SampledSignal::from_fn(ax, |t| C64::new(t * (-t * t).exp(), 0.2 * (-t * t).exp()))
            .normalized()
            .unwrap();
        let spec = FilterSpec::separable(psi, phi, 0.8).unwrap();
        let (r, c) = spec.default_axes(0).unwrap();
        let op = build_operator(&spec, &r, &c).unwrap();
        let s = op.singular_values().unwrap();
        assert!((s[0] - 0.8).abs() < 1e-12);
        assert!(s[1] / s[0] < 1e-10);
    }

    #[test]
    fn gaussian_sif_frobenius_is_bt() {
        let spec = gaussian_sif(1.0, 0.5, StageOrder::FrequencyFirst);
        let (r, c) = spec.default_axes(256).unwrap();
        let op = build_operator(&spec, &r, &c).unwrap();
        assert!((op.frobenius_sq() - 0.5).abs() < 1e-6);
        assert!(op.tail_mass() < 1e-12);
    }

    #[test]
    fn gram_eigenvalues_are_squared_singular_values() {
        let spec = gaussian_sif(1.0, 0.5, StageOrder::TimeFirst);
        let (r, c) = spec.default_axes(200).unwrap();
        let op = build_operator(&spec, &r, &c).unwrap();
        let g = gram_kernel(&op).unwrap();
        let ev = g.hermitian_eigenvalues().unwrap();
        let sv = op.singular_values().unwrap();
        let u = mehler_u(0.5);
        // λ₀² = u
        assert!((ev[0] - u).abs() < 1e-9);
        for (e, s) in ev.iter().zip(&sv).take(20) {
            assert!((e - s * s).abs() < 1e-9);
        }
        assert!((g.trace().re - op.frobenius_sq()).abs() < 1e-12);
    }

    #[test]
    fn representations_agree() {
        // all four domain pairs of one filter share its singular values
        let spec = gaussian_sif(1.0, 1.0, StageOrder::FrequencyFirst);
        let t = SampledAxis::symmetric(Domain::Time, 6.0, 301).unwrap();
        let w = SampledAxis::symmetric(Domain::AngularFrequency, 36.0, 301).unwrap();
        let mixed = build_operator(&spec, &t, &w).unwrap().singular_values().unwrap();
        let ff = build_operator(&spec, &w, &w).unwrap().singular_values().unwrap();
        let tt_axis = SampledAxis::symmetric(Domain::Time, 9.0, 401).unwrap();
        let tt = build_operator(&spec, &tt_axis, &tt_axis).unwrap().singular_values().unwrap();
        for n in 0..4 {
            let u = mehler_u(1.0).powf(n as f64 + 0.5);
            assert!((mixed[n] - u).abs() < 1e-6, "{n}");
            assert!((ff[n] - u).abs() < 1e-4, "{n}: {}", ff[n]);
            assert!((tt[n] - u).abs() < 1e-4, "{n}: {}", tt[n]);
        }
        assert!(matches!(
            build_operator(&spec, &w, &t),
            Err(Error::UnsupportedRepresentation { .. })
        ));
    }

    #[test]
    fn rectangular_time_kernel_trace_is_bt() {
        // diagonal of R(t−t″)Q(t″) is the constant Ω/π over the gate, so the trace is BT
        let b = 1.0;
        let t = 2.0 / PI;
        let spec = FilterSpec::sif(
            SpectralProfile::rectangular(b).unwrap(),
            TemporalProfile::rectangular(t).unwrap(),
            StageOrder::TimeFirst,
        );
        let ax = SampledAxis::centered(Domain::Time, 1.0 / 64.0, 1024).unwrap();
        let op = build_operator_with(&spec, &ax, &ax, 1.0).unwrap();
        assert!((op.trace().re - b * t).abs() < 2.0 * ax.step());
        assert!(matches!(build_operator(&spec, &ax, &ax), Err(Error::Truncation { .. })));
    }

    #[test]
    fn undersampled_mixed_grid_is_rejected() {
        let spec = gaussian_sif(3.0, 3.0, StageOrder::FrequencyFirst);
        let (r, c) = spec.default_axes(0).unwrap();
        let coarse_r = SampledAxis::symmetric(r.domain(), r.end(), 64).unwrap();
        let coarse_c = SampledAxis::symmetric(c.domain(), c.end(), 64).unwrap();
        assert!(matches!(build_operator(&spec, &coarse_r, &coarse_c), Err(Error::Resolution { .. })));
    }

    #[test]
    fn short_grid_is_rejected() {
        let spec = gaussian_sif(1.0, 1.0, StageOrder::FrequencyFirst);
        let t = SampledAxis::symmetric(Domain::Time, 1.0, 512).unwrap();
        let w = SampledAxis::symmetric(Domain::AngularFrequency, 36.0, 512).unwrap();
        assert!(matches!(build_operator(&spec, &t, &w), Err(Error::Truncation { .. })));
    }

    #[test]
    fn diagonal_windows() {
        let r = SpectralProfile::gaussian(1.0).unwrap();
        let spec = FilterSpec::spectral_window(r);
        let (a, b) = spec.default_axes(65).unwrap();
        let op = build_operator(&spec, &a, &b).unwrap();
        assert!((op.singular_values().unwrap()[0] - 1.0).abs() < 1e-3);
        let other = SampledAxis::symmetric(Domain::AngularFrequency, 5.0, 64).unwrap();
        assert!(build_operator(&spec, &a, &other).is_err());
    }
}
