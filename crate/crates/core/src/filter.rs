//! Declarative filter descriptions and their action on sampled signals.

use core::f64::consts::PI;


use crate::axis::{Domain, SampledSignal};
use crate::error::{Error, Result};
use crate::fourier;
use crate::profile::{SpectralProfile, TemporalProfile};
use crate::C64;

// float methods come from std instead whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Which stage of a sequential filter acts first on the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StageOrder {
    /// Spectral window, then temporal gate.
    FrequencyFirst,
    /// Temporal gate, then spectral window.
    TimeFirst,
}

impl StageOrder {
    pub fn swapped(self) -> StageOrder {
        match self {
            StageOrder::FrequencyFirst => StageOrder::TimeFirst,
            StageOrder::TimeFirst => StageOrder::FrequencyFirst,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FilterKind {
    SpectralWindow(SpectralProfile),
    TemporalGate(TemporalProfile),
    /// Rank-one kernel `λ ψ(x) φ*(y)` with unit-norm modes.
    SeparableCoherent {
        output: SampledSignal,
        input: SampledSignal,
        lambda: f64,
    },
    /// Sequential incoherent filter.
    Sif {
        spectral: SpectralProfile,
        temporal: TemporalProfile,
        order: StageOrder,
    },
}

/// A filter kind plus a scalar amplitude insertion loss in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSpec {
    kind: FilterKind,
    insertion_loss: f64,
}

impl FilterSpec {
    pub fn spectral_window(profile: SpectralProfile) -> Self {
        Self { kind: FilterKind::SpectralWindow(profile), insertion_loss: 1.0 }
    }

    pub fn temporal_gate(profile: TemporalProfile) -> Self {
        Self { kind: FilterKind::TemporalGate(profile), insertion_loss: 1.0 }
    }

    pub fn sif(spectral: SpectralProfile, temporal: TemporalProfile, order: StageOrder) -> Self {
        Self { kind: FilterKind::Sif { spectral, temporal, order }, insertion_loss: 1.0 }
    }

    /// Ideal coherent filter mapping `input` to `lambda * output`.
    pub fn separable(output: SampledSignal, input: SampledSignal, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter("coherent singular value must lie in [0, 1]"));
        }
        for m in [&output, &input] {
            if (m.norm() - 1.0).abs() > 1e-8 {
                return Err(Error::InvalidParameter("coherent filter modes must be unit-norm"));
            }
        }
        Ok(Self {
            kind: FilterKind::SeparableCoherent { output, input, lambda },
            insertion_loss: 1.0,
        })
    }

    pub fn with_insertion_loss(mut self, loss: f64) -> Result<Self> {
        if !(loss > 0.0 && loss <= 1.0) {
            return Err(Error::InvalidParameter("insertion loss must lie in (0, 1]"));
        }
        self.insertion_loss = loss;
        Ok(self)
    }

    pub fn kind(&self) -> &FilterKind {
        &self.kind
    }

    pub fn insertion_loss(&self) -> f64 {
        self.insertion_loss
    }

    /// `∫|R̃|² dω/2π · ∫|Q|² dt` for a sequential filter.
    pub fn time_bandwidth(&self) -> Option<f64> {
        match &self.kind {
            FilterKind::Sif { spectral, temporal, .. } => {
                Some(spectral.bandwidth() * temporal.duration())
            }
            _ => None,
        }
    }
}

/// The same sequential filter with its stage order reversed.
pub fn compose_order_swap(spec: &FilterSpec) -> Result<FilterSpec> {
    match &spec.kind {
        FilterKind::Sif { spectral, temporal, order } => Ok(FilterSpec {
            kind: FilterKind::Sif { spectral: *spectral, temporal: *temporal, order: order.swapped() },
            insertion_loss: spec.insertion_loss,
        }),
        _ => Err(Error::InvalidParameter("order swap needs a sequential filter")),
    }
}

/// Pass `input` through the filter. The output lives on the input's grid.
///
/// Spectral stages multiply the discrete spectrum, so the grid must be fine
/// enough for the filter's output band and long enough to hold its impulse
/// response without wrap-around.
pub fn apply_filter(spec: &FilterSpec, input: &SampledSignal) -> Result<SampledSignal> {
    let out = match &spec.kind {
        FilterKind::SeparableCoherent { output, input: mode, lambda } => {
            let phi = mode.represent_on(input.axis())?;
            let psi = output.represent_on(input.axis())?;
            // discretized modes can exceed unit norm by rounding; never amplify
            let scale = phi.norm().max(1.0) * psi.norm().max(1.0);
            let amp = phi.inner(input)? * (*lambda / scale);
            psi.scaled(amp)
        }
        kind => {
            let time = match input.axis().domain() {
                Domain::Time => input.clone(),
                Domain::AngularFrequency => fourier::transform(input),
            };
            check_sampling(kind, &time)?;
            let filtered = match kind {
                FilterKind::SpectralWindow(r) => spectral_stage(r, &time),
                FilterKind::TemporalGate(q) => gate_stage(q, &time),
                FilterKind::Sif { spectral, temporal, order } => match order {
                    StageOrder::FrequencyFirst => gate_stage(temporal, &spectral_stage(spectral, &time)),
                    StageOrder::TimeFirst => spectral_stage(spectral, &gate_stage(temporal, &time)),
                },
                FilterKind::SeparableCoherent { .. } => unreachable!(),
            };
            match input.axis().domain() {
                Domain::Time => filtered,
                Domain::AngularFrequency => {
                    let back = fourier::transform(&filtered);
                    SampledSignal::from_parts(*input.axis(), back.into_values())
                }
            }
        }
    };
    Ok(out.scaled(C64::new(spec.insertion_loss, 0.0)))
}

fn spectral_stage(r: &SpectralProfile, time: &SampledSignal) -> SampledSignal {
    let mut spec = fourier::transform(time);
    let axis = *spec.axis();
    for (w, v) in axis.points().zip(spec.values_mut()) {
        *v *= r.transmission(w);
    }
    let back = fourier::transform(&spec);
    SampledSignal::from_parts(*time.axis(), back.into_values())
}

fn gate_stage(q: &TemporalProfile, time: &SampledSignal) -> SampledSignal {
    let mut out = time.clone();
    let axis = *out.axis();
    for (t, v) in axis.points().zip(out.values_mut()) {
        *v *= q.gate(t);
    }
    out
}

fn check_sampling(kind: &FilterKind, time: &SampledSignal) -> Result<()> {
    let ax = time.axis();
    let dt = ax.step();
    let (spectral, temporal) = match kind {
        FilterKind::SpectralWindow(r) => (Some(r), None),
        FilterKind::TemporalGate(q) => (None, Some(q)),
        FilterKind::Sif { spectral, temporal, .. } => (Some(spectral), Some(temporal)),
        FilterKind::SeparableCoherent { .. } => (None, None),
    };
    if let Some(r) = spectral {
        let limit = 1.0 / (10.0 * r.bandwidth());
        if dt > limit * (1.0 + 1e-12) {
            return Err(Error::Resolution { step: dt, limit });
        }
        if let Some(reach) = r.impulse_support() {
            let span = dt * ax.count() as f64;
            if span < 2.0 * reach {
                return Err(Error::Truncation {
                    tail_mass: r.impulse_mass_outside(-span / 2.0, span / 2.0),
                });
            }
        }
    }
    if let Some(q) = temporal {
        if let Some(gate_band) = q.spectrum_support() {
            let band = spectral.map_or(gate_band, |r| match r {
                SpectralProfile::Gaussian { .. } => gate_band.hypot(r.support()),
                SpectralProfile::Rectangular { .. } => gate_band + r.support(),
            });
            let limit = PI / band;
            if dt > limit * (1.0 + 1e-12) {
                return Err(Error::Resolution { step: dt, limit });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axis::SampledAxis;

    fn pulse(axis: SampledAxis, t0: f64, width: f64) -> SampledSignal {
        SampledSignal::from_fn(axis, |t| {
            let s = (t - t0) / width;
            C64::new((-s * s).exp(), 0.3 * s * (-s * s).exp())
        })
    }

    #[test]
    fn flat_window_is_identity() {
        let ax = SampledAxis::centered(Domain::Time, 0.01, 1024).unwrap();
        let f = pulse(ax, 0.2, 0.5);
        // window is flat over the whole band the pulse occupies
        let spec = FilterSpec::spectral_window(SpectralProfile::rectangular(10.0).unwrap());
        let g = apply_filter(&spec, &f).unwrap();
        let err = (0..1024).map(|i| (f.values()[i] - g.values()[i]).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn sif_equals_manual_stage_composition() {
        let ax = SampledAxis::centered(Domain::Time, 0.02, 1024).unwrap();
        let f = pulse(ax, -0.4, 0.5);
        let r = SpectralProfile::gaussian(1.5).unwrap();
        let q = TemporalProfile::gaussian(0.8).unwrap();
        for order in [StageOrder::FrequencyFirst, StageOrder::TimeFirst] {
            let whole = apply_filter(&FilterSpec::sif(r, q, order), &f).unwrap();
            let sw = FilterSpec::spectral_window(r);
            let tg = FilterSpec::temporal_gate(q);
            let manual = match order {
                StageOrder::FrequencyFirst => apply_filter(&tg, &apply_filter(&sw, &f).unwrap()),
                StageOrder::TimeFirst => apply_filter(&sw, &apply_filter(&tg, &f).unwrap()),
            }
            .unwrap();
            for (a, b) in whole.values().iter().zip(manual.values()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn frequency_input_returns_on_same_grid() {
        let ax = SampledAxis::centered(Domain::AngularFrequency, 0.1, 1024).unwrap();
        let f = SampledSignal::from_fn(ax, |w| C64::new((-w * w / 4.0).exp(), 0.0));
        let spec = FilterSpec::sif(
            SpectralProfile::gaussian(1.0).unwrap(),
            TemporalProfile::gaussian(2.0).unwrap(),
            StageOrder::FrequencyFirst,
        );
        let g = apply_filter(&spec, &f).unwrap();
        assert!(g.axis().same_grid(&ax));
        assert!(g.energy() <= f.energy());
    }

    #[test]
    fn insertion_loss_scales_amplitude() {
        let ax = SampledAxis::centered(Domain::Time, 0.01, 256).unwrap();
        let f = pulse(ax, 0.0, 0.2);
        let q = TemporalProfile::rectangular(1.0).unwrap();
        let a = apply_filter(&FilterSpec::temporal_gate(q), &f).unwrap();
        let b = apply_filter(&FilterSpec::temporal_gate(q).with_insertion_loss(0.5).unwrap(), &f).unwrap();
        assert!((b.energy() - 0.25 * a.energy()).abs() < 1e-14);
        assert!(FilterSpec::temporal_gate(q).with_insertion_loss(1.5).is_err());
    }

    #[test]
    fn undersampled_grid_is_rejected() {
        let ax = SampledAxis::centered(Domain::Time, 0.5, 256).unwrap();
        let f = pulse(ax, 0.0, 3.0);
        let spec = FilterSpec::spectral_window(SpectralProfile::gaussian(1.0).unwrap());
        assert!(matches!(apply_filter(&spec, &f), Err(Error::Resolution { .. })));
    }

    #[test]
    fn coherent_filter_maps_input_mode_to_output_mode() {
        let ax = SampledAxis::centered(Domain::Time, 0.02, 512).unwrap();
        let phi = pulse(ax, 0.0, 0.4).normalized().unwrap();
        let psi = pulse(ax, 1.0, 0.7).normalized().unwrap();
        let spec = FilterSpec::separable(psi.clone(), phi.clone(), 1.0).unwrap();
        let out = apply_filter(&spec, &phi).unwrap();
        assert!((out.energy() - 1.0).abs() < 1e-12);
        assert!((out.inner(&psi).unwrap().norm() - 1.0).abs() < 1e-12);
        assert!(FilterSpec::separable(psi.scaled(C64::new(2.0, 0.0)), phi, 1.0).is_err());
    }

    #[test]
    fn order_swap() {
        let r = SpectralProfile::rectangular(1.0).unwrap();
        let q = TemporalProfile::rectangular(1.0).unwrap();
        let s = FilterSpec::sif(r, q, StageOrder::FrequencyFirst);
        let t = compose_order_swap(&s).unwrap();
        assert_eq!(t.kind(), &FilterKind::Sif { spectral: r, temporal: q, order: StageOrder::TimeFirst });
        assert_eq!(compose_order_swap(&t).unwrap(), s);
        assert!(compose_order_swap(&FilterSpec::spectral_window(r)).is_err());
    }
}
