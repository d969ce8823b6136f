//! The proximal Picard iteration: builds sequences x_n in A0, y_n in
//! F(x_n) with d(x_{n+1}, y_n) = dist(A, B), stops when the proximity gap
//! closes, and records a per-step decay certificate alongside the
//! hypothesis audits.

use serde::Serialize;
use thiserror::Error;

use crate::mapping::{AlphaMap, MappingError, MultiMap};
use crate::metric::{dist, dist_point_subset, Metric, MetricError, Point, PointSet};
use crate::proximal::{
    check_alpha_proximal_admissible, check_p, check_range_condition, check_weak_p, proximal_pairs,
    AdmissibilityReport, PairPropertyReport, ProximalPairing, RangeReport,
};
use crate::theta::{audit_contraction, ContractionAudit, ContractionParams, ThetaError, ThetaSpec};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error("seed index {name}={index} out of range")]
    SeedIndexOutOfRange { name: &'static str, index: usize },
    #[error("seed point {name}={index} does not lie in A0")]
    SeedOutsideA0 { name: &'static str, index: usize },
    #[error("seed image point y0={y0} is not in F(x0={x0})")]
    SeedImageMismatch { x0: usize, y0: usize },
    #[error("seed pair not proximal: d(x1, y0) = {d} but dist(A,B) = {d_ab} (eps_prox {eps})")]
    SeedNotProximal { d: f64, d_ab: f64, eps: f64 },
    #[error("seed admissibility fails: alpha(x0, x1) = {alpha} < 1")]
    SeedAlphaBelowOne { alpha: f64 },
    #[error("fixed-point mode requires the two sets to coincide pointwise")]
    SpaceMismatch,
    #[error("no image point of x0 = {x0} has alpha(x0, y) >= 1")]
    NoAdmissibleStart { x0: usize },
}

/// Stopping and comparison tolerances for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Slack for "realizes dist(A,B)" equalities.
    pub eps_prox: f64,
    /// Proximity gap below which the iterate is accepted.
    pub eps_stop: f64,
    /// Step length below which the orbit is considered stalled.
    pub eps_step: f64,
    /// Point dedup / equality tolerance.
    pub eps_dup: f64,
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_prox: 1e-9,
            eps_stop: 1e-9,
            eps_step: 1e-12,
            eps_dup: 1e-9,
            max_iter: 1_000_000,
        }
    }
}

/// Everything the solver needs about one instance.
#[derive(Debug, Clone)]
pub struct ProximityProblem {
    pub a: PointSet,
    pub b: PointSet,
    pub metric: Metric,
    pub map: MultiMap,
    pub theta: ThetaSpec,
    pub params: ContractionParams,
}

/// Starting data for the iteration: indices into A, A, and B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Seeds {
    pub x0: usize,
    pub x1: usize,
    pub y0: usize,
}

/// One record of the iteration trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    pub n: usize,
    /// Index of x_n in A.
    pub x: usize,
    /// Index of y_n in B (on the terminal record, the image point
    /// realizing D(x_n, F(x_n))).
    pub y: usize,
    /// D(x_n, F(x_n)) - dist(A, B).
    pub gap: f64,
    /// d(x_n, x_{n+1}); absent on the terminal record.
    pub d_step: Option<f64>,
    /// d(y_{n-1}, y_n); absent on the first and terminal records.
    pub d_y_step: Option<f64>,
    /// alpha(x_n, x_{n+1}) >= 1.
    pub alpha_ok: bool,
    /// Decay certificate Theta^{-1}( Theta(d(x0,x1))^(k^n) ); absent when
    /// d(x0, x1) = 0 or on the terminal record.
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Outcome {
    Converged,
    MaxIter,
    HypothesisViolation(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationTrace {
    pub steps: Vec<Step>,
    pub outcome: Outcome,
}

/// The hypothesis audits for one problem, bundled.
///
/// The contraction inequality is audited over A0: the orbit never leaves
/// it, and its pairs are the ones the decay certificate depends on. Pass
/// a different subset to [`audit_contraction`] directly to audit more.
#[derive(Debug, Clone, Serialize)]
pub struct Certification {
    pub pairing: ProximalPairing,
    pub range: RangeReport,
    pub weak_p: PairPropertyReport,
    pub p: PairPropertyReport,
    pub admissible: AdmissibilityReport,
    pub contraction: ContractionAudit,
    /// range, weak P, admissibility, and the contraction audit all hold.
    /// The P property is reported but not required.
    pub hypotheses_hold: bool,
}

pub fn certify(problem: &ProximityProblem, tol: &Tolerances) -> Result<Certification, SolveError> {
    problem.params.validate()?;
    problem.theta.validate()?;
    let pairing = proximal_pairs(&problem.a, &problem.b, &problem.metric, tol.eps_prox)?;
    let range = check_range_condition(&problem.map, &pairing);
    let weak_p = check_weak_p(
        &pairing,
        &problem.a,
        &problem.b,
        &problem.metric,
        tol.eps_prox,
    )?;
    let p = check_p(
        &pairing,
        &problem.a,
        &problem.b,
        &problem.metric,
        tol.eps_prox,
    )?;
    let admissible = check_alpha_proximal_admissible(&problem.map, &problem.params.alpha, &pairing);
    let contraction = audit_contraction(
        &problem.a,
        &problem.b,
        &problem.metric,
        &problem.map,
        &problem.theta,
        &problem.params,
        &pairing.a0,
    )?;
    let hypotheses_hold = range.holds && weak_p.holds && admissible.holds && contraction.holds;
    Ok(Certification {
        pairing,
        range,
        weak_p,
        p,
        admissible,
        contraction,
        hypotheses_hold,
    })
}

/// Result of one solver run.
#[derive(Debug, Clone, Serialize)]
pub struct BppResult {
    pub point_index: usize,
    pub point: Point,
    /// D(point, F(point)) - dist(A, B).
    pub gap: f64,
    pub trace: IterationTrace,
    /// All hypothesis audits passed and alpha stayed >= 1 along the orbit.
    pub certified: bool,
    pub certification: Certification,
}

/// Runs the proximal Picard iteration from the given seeds.
///
/// Per iteration: if the gap at x_n already closes, stop; otherwise pick
/// y_n in F(x_n) nearest to y_{n-1} (first-index tie-break), then pick
/// x_{n+1} among the A0 partners of y_n nearest to x_n (first-index
/// tie-break). A missing partner means some image left B0 and is reported
/// as a hypothesis violation. If alpha drops below 1 along the way the
/// run continues but the result is no longer certified.
pub fn solve(
    problem: &ProximityProblem,
    seeds: Seeds,
    tol: &Tolerances,
) -> Result<BppResult, SolveError> {
    let certification = certify(problem, tol)?;
    let pairing = &certification.pairing;
    let a = &problem.a;
    let b = &problem.b;
    let m = &problem.metric;
    let f = &problem.map;
    let alpha = &problem.params.alpha;
    let k = problem.params.k;

    for (name, index, limit) in [
        ("x0", seeds.x0, a.len()),
        ("x1", seeds.x1, a.len()),
        ("y0", seeds.y0, b.len()),
    ] {
        if index >= limit {
            return Err(SolveError::SeedIndexOutOfRange { name, index });
        }
    }
    for (name, index) in [("x0", seeds.x0), ("x1", seeds.x1)] {
        if !pairing.a0.contains(&index) {
            return Err(SolveError::SeedOutsideA0 { name, index });
        }
    }
    if !f.image(seeds.x0).contains(&seeds.y0) {
        return Err(SolveError::SeedImageMismatch {
            x0: seeds.x0,
            y0: seeds.y0,
        });
    }
    let d_x1_y0 = dist(a.point(seeds.x1), b.point(seeds.y0), m)?;
    if (d_x1_y0 - pairing.d_ab).abs() > tol.eps_prox {
        return Err(SolveError::SeedNotProximal {
            d: d_x1_y0,
            d_ab: pairing.d_ab,
            eps: tol.eps_prox,
        });
    }
    let alpha_seed = alpha.value(seeds.x0, seeds.x1);
    if alpha_seed < 1.0 {
        return Err(SolveError::SeedAlphaBelowOne { alpha: alpha_seed });
    }

    let d01 = dist(a.point(seeds.x0), a.point(seeds.x1), m)?;
    let log_theta_d01 = if d01 > tol.eps_dup {
        Some(problem.theta.log_eval(d01))
    } else {
        None
    };
    let bound_at =
        |n: usize| log_theta_d01.map(|l| problem.theta.log_inverse(k.powi(n as i32) * l));

    let gap_at = |x: usize| -> Result<(f64, usize), SolveError> {
        let d = dist_point_subset(a.point(x), b, f.image(x), m)?;
        Ok((d.value - pairing.d_ab, d.argmin))
    };

    let mut steps = Vec::new();
    let (gap0, _) = gap_at(seeds.x0)?;
    steps.push(Step {
        n: 0,
        x: seeds.x0,
        y: seeds.y0,
        gap: gap0,
        d_step: Some(d01),
        d_y_step: None,
        alpha_ok: true,
        bound: bound_at(0),
    });

    let mut x = seeds.x1;
    let mut y_prev = seeds.y0;
    let mut all_alpha_ok = true;
    let mut best: Option<(f64, usize)> = None;
    let mut stalled_at: Option<usize> = None;
    let mut outcome = Outcome::MaxIter;
    let mut result_index = seeds.x1;

    for n in 1..=tol.max_iter {
        let (gap, nearest_image) = gap_at(x)?;
        if best.is_none_or(|(g, _)| gap < g) {
            best = Some((gap, x));
        }
        if gap <= tol.eps_stop {
            steps.push(Step {
                n,
                x,
                y: nearest_image,
                gap,
                d_step: None,
                d_y_step: None,
                alpha_ok: true,
                bound: None,
            });
            outcome = Outcome::Converged;
            result_index = x;
            break;
        }

        // y_n: image point of x_n nearest to y_{n-1}
        let y_sel = dist_point_subset(b.point(y_prev), b, f.image(x), m)?;
        let y_n = y_sel.argmin;
        let d_y = y_sel.value;

        // x_{n+1}: proximal partner of y_n nearest to x_n
        let partners = pairing.partners_of_b(y_n);
        if partners.is_empty() {
            steps.push(Step {
                n,
                x,
                y: y_n,
                gap,
                d_step: None,
                d_y_step: Some(d_y),
                alpha_ok: true,
                bound: None,
            });
            outcome = Outcome::HypothesisViolation(format!(
                "image point #{y_n} of x_{n} = #{x} has no proximal partner in A0; \
                 F(A0) is not contained in B0"
            ));
            result_index = best.unwrap().1;
            break;
        }
        let x_next = dist_point_subset(a.point(x), a, &partners, m)?.argmin;
        let d_step = dist(a.point(x), a.point(x_next), m)?;
        let alpha_ok = alpha.value(x, x_next) >= 1.0;
        all_alpha_ok &= alpha_ok;
        steps.push(Step {
            n,
            x,
            y: y_n,
            gap,
            d_step: Some(d_step),
            d_y_step: Some(d_y),
            alpha_ok,
            bound: bound_at(n),
        });

        if d_step <= tol.eps_step {
            // allow one revisit so the gap check can fire at x_next
            if stalled_at == Some(x_next) {
                result_index = best.unwrap().1;
                outcome = Outcome::MaxIter;
                break;
            }
            stalled_at = Some(x_next);
        } else {
            stalled_at = None;
        }

        x = x_next;
        y_prev = y_n;
        if n == tol.max_iter {
            result_index = best.unwrap().1;
        }
    }

    let (final_gap, _) = gap_at(result_index)?;
    let certified = certification.hypotheses_hold && all_alpha_ok;
    Ok(BppResult {
        point_index: result_index,
        point: a.point(result_index).clone(),
        gap: final_gap,
        trace: IterationTrace { steps, outcome },
        certified,
        certification,
    })
}

/// Fixed-point mode: the two sets coincide, dist(A, B) = 0, and a fixed
/// point is a point with D(x, F(x)) = 0. Seeds are derived from `x0` by
/// taking the first image point with alpha(x0, y) >= 1 as both y0 and x1.
pub fn solve_fixed_point(
    problem: &ProximityProblem,
    x0: usize,
    tol: &Tolerances,
) -> Result<BppResult, SolveError> {
    if problem.a.len() != problem.b.len()
        || problem
            .a
            .points()
            .iter()
            .zip(problem.b.points())
            .any(|(p, q)| !p.approx_eq(q, tol.eps_dup))
    {
        return Err(SolveError::SpaceMismatch);
    }
    if x0 >= problem.a.len() {
        return Err(SolveError::SeedIndexOutOfRange {
            name: "x0",
            index: x0,
        });
    }
    let y0 = problem
        .map
        .image(x0)
        .iter()
        .copied()
        .find(|&y| problem.params.alpha.value(x0, y) >= 1.0)
        .ok_or(SolveError::NoAdmissibleStart { x0 })?;
    solve(problem, Seeds { x0, x1: y0, y0 }, tol)
}

/// Uniqueness screen: when alpha >= 1 between every two reported best
/// proximity points and the contraction audit holds, a single point is
/// expected; finding several is reported as a diagnostic, not an error.
#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    /// alpha >= 1 on all pairs of reported points.
    pub h_condition: bool,
    pub unique_expected: bool,
    /// False when uniqueness was expected but several points were given.
    pub consistent: bool,
    pub diagnostic: Option<String>,
}

pub fn check_uniqueness_h(
    bpps: &[usize],
    alpha: &AlphaMap,
    contraction: &ContractionAudit,
) -> UniquenessReport {
    let mut h_condition = true;
    for (u, &i) in bpps.iter().enumerate() {
        for &j in &bpps[u + 1..] {
            if alpha.value(i, j) < 1.0 || alpha.value(j, i) < 1.0 {
                h_condition = false;
            }
        }
    }
    let unique_expected = h_condition && contraction.holds;
    let consistent = !unique_expected || bpps.len() <= 1;
    let diagnostic = if !consistent {
        Some(format!(
            "uniqueness hypotheses hold (alpha >= 1 between all {} reported points, \
             contraction audit passes with k_min = {:?}, k = {}, lambda = {}) yet several \
             best proximity points exist; inspect the exponent window (k_min, 1) and the \
             almost-term weight, which does not vanish between distinct proximity points \
             when dist(A,B) > 0",
            bpps.len(),
            contraction.k_min,
            contraction.k,
            contraction.lambda,
        ))
    } else {
        None
    };
    UniquenessReport {
        h_condition,
        unique_expected,
        consistent,
        diagnostic,
    }
}
