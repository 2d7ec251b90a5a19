//! Numerical Schmidt decomposition of discretized filter kernels.

use alloc::vec::Vec;
use core::ops::Range;

use faer::Mat;

use crate::axis::{SampledAxis, SampledSignal};
use crate::error::{Error, Result};
use crate::filter::FilterSpec;
use crate::operator::{build_operator, OperatorMatrix, MIN_GRID_POINTS};
use crate::C64;

// float methods come from std instead whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Singular values closer than this are reported as one degenerate block.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

/// Which singular triplets to keep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// Keep `λₙ > ratio · λ₀`.
    Relative(f64),
    /// Keep the leading `n`.
    Count(usize),
    All,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Relative(1e-6)
    }
}

/// Grids a decomposition was computed on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridReport {
    pub rows: SampledAxis,
    pub cols: SampledAxis,
    pub refinements: usize,
    /// Relative change of `λ₀` at the last refinement.
    pub last_change: Option<f64>,
    /// Target for `last_change`, when refinement was requested.
    pub tolerance: Option<f64>,
}

impl GridReport {
    pub fn converged(&self) -> bool {
        matches!((self.last_change, self.tolerance), (Some(c), Some(t)) if c < t)
    }
}

/// Ordered singular values with paired input modes `φₙ` (on the operator's
/// column axis) and output modes `ψₙ` (on its row axis).
#[derive(Debug, Clone)]
pub struct SchmidtResult {
    singular_values: Vec<f64>,
    input_modes: Vec<SampledSignal>,
    output_modes: Vec<SampledSignal>,
    grid_report: GridReport,
    total_sq: f64,
    discarded_sq: f64,
    truncation_bound: f64,
}

impl SchmidtResult {
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn input_modes(&self) -> &[SampledSignal] {
        &self.input_modes
    }

    pub fn output_modes(&self) -> &[SampledSignal] {
        &self.output_modes
    }

    pub fn grid_report(&self) -> &GridReport {
        &self.grid_report
    }

    pub fn len(&self) -> usize {
        self.singular_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singular_values.is_empty()
    }

    /// Squared Frobenius norm of the decomposed matrix, `Σλₙ²` over all modes.
    pub fn total_sq(&self) -> f64 {
        self.total_sq
    }

    /// `Σλₙ²` over the discarded modes.
    pub fn discarded_sq(&self) -> f64 {
        self.discarded_sq
    }

    /// Largest reconstruction residual the truncation rule allows.
    pub fn truncation_bound(&self) -> f64 {
        self.truncation_bound
    }

    /// Index ranges of retained singular values equal within
    /// [`DEGENERACY_TOLERANCE`]; only blocks of two or more are listed.
    pub fn degenerate_blocks(&self) -> Vec<Range<usize>> {
        let s = &self.singular_values;
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=s.len() {
            if i == s.len() || s[i - 1] - s[i] > DEGENERACY_TOLERANCE {
                if i - start > 1 {
                    out.push(start..i);
                }
                start = i;
            }
        }
        out
    }
}

/// SVD of a weight-symmetrized operator.
///
/// Modes are returned under continuum normalization (the singular vectors
/// divided by `√w`). Each input mode is rotated so that its largest sample is
/// real positive, and the paired output mode takes the same rotation so that
/// the kernel expansion is unchanged.
pub fn schmidt_decompose(op: &OperatorMatrix, keep: Truncation) -> Result<SchmidtResult> {
    let report = GridReport {
        rows: *op.rows_axis(),
        cols: *op.cols_axis(),
        refinements: 0,
        last_change: None,
        tolerance: None,
    };
    decompose_with_report(op, keep, report)
}

fn decompose_with_report(op: &OperatorMatrix, keep: Truncation, report: GridReport) -> Result<SchmidtResult> {
    if !op.weights_applied() {
        return Err(Error::InvalidParameter("decomposition needs a weight-symmetrized operator"));
    }
    op.check_finite()?;
    let svd = op
        .entries()
        .thin_svd()
        .map_err(|_| Error::Numeric("singular value iteration did not converge"))?;
    let s: Vec<f64> = svd.S().column_vector().iter().map(|v| v.re).collect();
    let (u, v) = (svd.U(), svd.V());

    let kept = match keep {
        Truncation::Relative(r) => {
            let floor = r * s.first().copied().unwrap_or(0.0);
            s.iter().take_while(|&&x| x > floor).count()
        }
        Truncation::Count(n) => n.min(s.len()),
        Truncation::All => s.len(),
    };
    let discarded = &s[kept..];
    let discarded_sq: f64 = discarded.iter().map(|x| x * x).sum();
    let cap = match keep {
        Truncation::Relative(r) => r * s.first().copied().unwrap_or(0.0),
        _ => discarded.first().copied().unwrap_or(0.0),
    };
    let truncation_bound = cap * (discarded.len() as f64).sqrt();

    let (rows, cols) = (*op.rows_axis(), *op.cols_axis());
    let (wr, wc) = (rows.weight().sqrt(), cols.weight().sqrt());
    let mut input_modes = Vec::with_capacity(kept);
    let mut output_modes = Vec::with_capacity(kept);
    for n in 0..kept {
        let mut phi: Vec<C64> = (0..cols.count()).map(|j| v[(j, n)] / wc).collect();
        let mut psi: Vec<C64> = (0..rows.count()).map(|i| u[(i, n)] / wr).collect();
        let rot = phase_anchor(&phi);
        phi.iter_mut().for_each(|x| *x *= rot);
        psi.iter_mut().for_each(|x| *x *= rot);
        input_modes.push(SampledSignal::from_parts(cols, phi));
        output_modes.push(SampledSignal::from_parts(rows, psi));
    }
    Ok(SchmidtResult {
        singular_values: s[..kept].to_vec(),
        input_modes,
        output_modes,
        grid_report: report,
        total_sq: op.frobenius_sq(),
        discarded_sq,
        truncation_bound,
    })
}

/// Unit phase making the largest-magnitude sample real positive. Near-ties
/// resolve to the earliest index.
fn phase_anchor(values: &[C64]) -> C64 {
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return C64::new(1.0, 0.0);
    }
    let pick = values.iter().find(|v| v.norm() >= max * (1.0 - 1e-9)).unwrap();
    pick.conj() / pick.norm()
}

/// `⟨φₙ, input⟩`. An input on another grid is first represented on the mode's grid.
pub fn project_onto_input_mode(result: &SchmidtResult, n: usize, input: &SampledSignal) -> Result<C64> {
    let phi = result
        .input_modes
        .get(n)
        .ok_or(Error::IndexOutOfRange { index: n, len: result.len() })?;
    if phi.axis().same_grid(input.axis()) {
        phi.inner(input)
    } else {
        phi.inner(&input.represent_on(phi.axis())?)
    }
}

/// Rebuilt kernel matrix and the Frobenius residual left by truncation.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub operator: OperatorMatrix,
    pub residual: f64,
}

/// `Σ λₙ ψₙ φₙ*` over the retained modes, weight-symmetrized like the source.
///
/// The residual is `√(Σ discarded λₙ²)`; it is an error only when it exceeds
/// the bound implied by the truncation rule.
pub fn reconstruct_kernel(result: &SchmidtResult) -> Result<Reconstruction> {
    let (rows, cols) = (result.grid_report.rows, result.grid_report.cols);
    let (wr, wc) = (rows.weight().sqrt(), cols.weight().sqrt());
    let mut a = Mat::<C64>::zeros(rows.count(), cols.count());
    for ((l, psi), phi) in result.singular_values.iter().zip(&result.output_modes).zip(&result.input_modes) {
        let p: Vec<C64> = psi.values().iter().map(|x| x * (wr * l)).collect();
        let f: Vec<C64> = phi.values().iter().map(|x| x.conj() * wc).collect();
        for j in 0..cols.count() {
            for i in 0..rows.count() {
                a[(i, j)] += p[i] * f[j];
            }
        }
    }
    let residual = result.discarded_sq.sqrt();
    let slack = 1e-12 * result.total_sq.sqrt();
    if residual > result.truncation_bound * (1.0 + 1e-9) + slack {
        return Err(Error::TruncationResidual { residual, bound: result.truncation_bound });
    }
    Ok(Reconstruction { operator: OperatorMatrix::from_entries(rows, cols, a)?, residual })
}

/// Grid-refinement settings for [`decompose_filter`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineOptions {
    pub min_count: usize,
    pub max_count: usize,
    /// Stop once `λ₀` changes by less than this (relative) between grids.
    pub rel_tol: f64,
    pub keep: Truncation,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self { min_count: MIN_GRID_POINTS, max_count: 4096, rel_tol: 1e-8, keep: Truncation::default() }
    }
}

/// Build the filter on its default grids and refine both axes
/// (`n → 2n − 1`) until `λ₀` is stable to `rel_tol` or the next grid would
/// exceed `max_count`. The report records whether the tolerance was met.
pub fn decompose_filter(spec: &FilterSpec, opts: RefineOptions) -> Result<SchmidtResult> {
    let (mut rows, mut cols) = spec.default_axes(opts.min_count)?;
    let mut op = build_operator(spec, &rows, &cols)?;
    let mut lead = op.singular_values()?.first().copied().unwrap_or(0.0);
    let mut refinements = 0;
    let mut last_change = None;
    while rows.count().max(cols.count()) * 2 - 1 <= opts.max_count {
        let (r2, c2) = (rows.refined(), cols.refined());
        let op2 = build_operator(spec, &r2, &c2)?;
        let lead2 = op2.singular_values()?.first().copied().unwrap_or(0.0);
        let change = if lead2 > 0.0 { (lead2 - lead).abs() / lead2 } else { 0.0 };
        rows = r2;
        cols = c2;
        op = op2;
        lead = lead2;
        refinements += 1;
        last_change = Some(change);
        if change < opts.rel_tol {
            break;
        }
    }
    let report = GridReport { rows, cols, refinements, last_change, tolerance: Some(opts.rel_tol) };
    decompose_with_report(&op, opts.keep, report)
}
