//! The full optimize run: constraint graph, solve, certify, re-place, verify.

use log::{debug, info};
use thiserror::Error;

use crate::aux_graph::{AuxGraph, Mode};
use crate::layout::{apply_rotations, lowest_id_vertex, place_vertices, LayoutError, LengthPolicy};
use crate::model::{Drawing, FaceSymmetricDrawing, IngestConfig, IngestError};
use crate::solver::{certify, solve, Certificate, SolveError, Solution, SolverConfig, SolverKind};
use crate::verify::{check_drawing, measure_resolution, VerifyReport};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

impl PipelineError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Ingest(_) | PipelineError::Layout(_) => 1,
            PipelineError::Solve(SolveError::InfeasibleInput { .. }) => 1,
            PipelineError::Solve(_) => 2,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct OptimizeOptions {
    pub mode: Mode,
    pub solver: SolverKind,
    pub solver_cfg: SolverConfig,
    pub lengths: LengthPolicy,
    pub ingest: IngestConfig,
}

#[derive(Clone, Debug)]
pub struct Optimized {
    pub mode: Mode,
    pub aux: AuxGraph,
    pub solution: Solution,
    pub certificate: Certificate,
    pub resolution_in: f64,
    pub output: Drawing,
    pub closure_defect: f64,
    pub report: VerifyReport,
}

impl Optimized {
    pub fn lambda_star(&self) -> f64 {
        self.solution.lambda_star
    }

    pub fn rotations(&self) -> &[f64] {
        self.solution.rotations()
    }

    /// 0 on success, 2 if the certificate fails, 3 if a checked property fails.
    pub fn exit_code(&self) -> i32 {
        if !self.certificate.is_valid() {
            2
        } else if !self.report.passed(self.mode) {
            3
        } else {
            0
        }
    }
}

/// Optimize an ingested drawing.
///
/// Certificate and verification failures are reported in the result rather
/// than as errors, so callers can still inspect and emit the output.
pub fn optimize(fsd: &FaceSymmetricDrawing, opts: &OptimizeOptions) -> Result<Optimized, PipelineError> {
    let aux = AuxGraph::from_drawing(fsd, opts.mode);
    debug!(
        "aux graph: {} zones, {} edges ({} mode)",
        aux.zone_count,
        aux.edges.len(),
        opts.mode.as_str()
    );
    let solution = solve(&aux, opts.solver, None, &opts.solver_cfg)?;
    let certificate = certify(&aux, &solution, &opts.solver_cfg);
    info!(
        "lambda* = {} ({} solver, {} iterations)",
        solution.lambda_star,
        solution.solver.as_str(),
        solution.iterations
    );
    let zv = apply_rotations(&fsd.zones, solution.rotations(), &opts.lengths)?;
    let placement = place_vertices(&fsd.drawing, &fsd.zones, &zv, lowest_id_vertex(&fsd.drawing));
    let report = check_drawing(
        &placement.drawing,
        &fsd.embedding,
        Some(&fsd.drawing),
        opts.mode,
        opts.ingest.eps_geom,
    );
    Ok(Optimized {
        mode: opts.mode,
        aux,
        resolution_in: measure_resolution(&fsd.drawing).unwrap_or(f64::INFINITY),
        solution,
        certificate,
        output: placement.drawing,
        closure_defect: placement.closure_defect,
        report,
    })
}

/// Safe and unsafe runs side by side.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub safe: Optimized,
    pub unsafe_: Optimized,
}

impl Comparison {
    pub fn get(&self, mode: Mode) -> &Optimized {
        match mode {
            Mode::Safe => &self.safe,
            Mode::Unsafe => &self.unsafe_,
        }
    }
}

/// Run both modes concurrently with otherwise identical options.
pub fn compare(fsd: &FaceSymmetricDrawing, opts: &OptimizeOptions) -> Result<Comparison, PipelineError> {
    let with_mode = |mode| OptimizeOptions {
        mode,
        ..opts.clone()
    };
    let (safe, unsafe_) = std::thread::scope(|s| {
        let unsafe_run = s.spawn(|| optimize(fsd, &with_mode(Mode::Unsafe)));
        let safe = optimize(fsd, &with_mode(Mode::Safe));
        (safe, unsafe_run.join().expect("unsafe solve panicked"))
    });
    Ok(Comparison {
        safe: safe?,
        unsafe_: unsafe_?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{gen_fan, gen_grid, skew};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn ingest(d: Drawing) -> FaceSymmetricDrawing {
        FaceSymmetricDrawing::ingest(d, &IngestConfig::default()).unwrap()
    }

    #[test]
    fn skewed_grid_straightens() {
        let fsd = ingest(skew(&gen_grid(2, 2).unwrap(), PI / 6.0).unwrap());
        let out = optimize(&fsd, &OptimizeOptions::default()).unwrap();
        assert!((out.lambda_star() - FRAC_PI_2).abs() < 1e-6);
        assert!((out.resolution_in - PI / 3.0).abs() < 1e-9);
        assert!((out.report.resolution.unwrap() - FRAC_PI_2).abs() < 1e-6);
        assert!(out.closure_defect < 1e-9);
        assert_eq!(out.exit_code(), 0, "{:?}", out.report);
    }

    #[test]
    fn exact_matches_bisect() {
        let fsd = ingest(skew(&gen_fan(4).unwrap(), 0.3).unwrap());
        let bisect = optimize(&fsd, &OptimizeOptions::default()).unwrap();
        let exact = optimize(
            &fsd,
            &OptimizeOptions {
                solver: SolverKind::Exact,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((bisect.lambda_star() - exact.lambda_star()).abs() < 2e-9);
        assert_eq!(exact.exit_code(), 0);
    }

    #[test]
    fn unsafe_dominates_safe() {
        let fsd = ingest(skew(&gen_fan(6).unwrap(), 0.4).unwrap());
        let both = compare(&fsd, &OptimizeOptions::default()).unwrap();
        assert!(both.unsafe_.lambda_star() >= both.safe.lambda_star() - 1e-9);
        assert_eq!(both.safe.exit_code(), 0);
        assert_eq!(both.get(Mode::Unsafe).mode, Mode::Unsafe);
    }

    #[test]
    fn exit_codes() {
        let err = PipelineError::Ingest(IngestError::NoEdges);
        assert_eq!(err.exit_code(), 1);
        assert_eq!(PipelineError::Solve(SolveError::NoConvergence(3)).exit_code(), 2);
    }
}
