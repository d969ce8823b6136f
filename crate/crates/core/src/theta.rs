//! The catalog of comparison functions used to express contraction
//! inequalities, numeric verification of their defining conditions, and
//! the contraction audit itself.
//!
//! A comparison function maps (0, oo) into (1, oo). The catalog is closed
//! (three families) so that every family carries an exact inverse; the
//! solver's decay certificate needs the inverse, and a closed catalog
//! keeps inversion exact. Audits work in log space throughout, so large
//! distances never overflow.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mapping::{AlphaMap, MultiMap};
use crate::metric::{dist, dist_point_subset, hausdorff_subsets, Metric, MetricError, PointSet};

#[derive(Debug, Error)]
pub enum ThetaError {
    #[error("comparison function argument must be positive, got {0}")]
    NonPositiveArgument(f64),
    #[error("power base must exceed 1, got {0}")]
    InvalidBase(f64),
    #[error("contraction exponent k must lie in (0,1), got {0}")]
    InvalidExponent(f64),
    #[error("lambda must be finite and nonnegative, got {0}")]
    InvalidLambda(f64),
}

/// One of the closed catalog of comparison functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ThetaSpec {
    /// t -> e^t
    Exp,
    /// t -> b^t for a base b > 1
    PowBase { base: f64 },
    /// t -> e^sqrt(t)
    ExpSqrt,
}

impl ThetaSpec {
    pub fn pow_base(base: f64) -> Result<Self, ThetaError> {
        if !base.is_finite() || base <= 1.0 {
            return Err(ThetaError::InvalidBase(base));
        }
        Ok(ThetaSpec::PowBase { base })
    }

    pub fn validate(&self) -> Result<(), ThetaError> {
        if let ThetaSpec::PowBase { base } = self {
            if !base.is_finite() || *base <= 1.0 {
                return Err(ThetaError::InvalidBase(*base));
            }
        }
        Ok(())
    }

    /// Theta(t) for t > 0. May overflow to infinity for very large t;
    /// audits use [`log_eval`](Self::log_eval) instead.
    pub fn eval(&self, t: f64) -> Result<f64, ThetaError> {
        if t.is_nan() || t <= 0.0 {
            return Err(ThetaError::NonPositiveArgument(t));
        }
        Ok(self.log_eval(t).exp())
    }

    /// ln Theta(t) for t > 0. Exact per family, never overflows.
    pub fn log_eval(&self, t: f64) -> f64 {
        match self {
            ThetaSpec::Exp => t,
            ThetaSpec::PowBase { base } => t * base.ln(),
            ThetaSpec::ExpSqrt => t.sqrt(),
        }
    }

    /// Theta^{-1}(y) for y > 1.
    pub fn inverse(&self, y: f64) -> Result<f64, ThetaError> {
        if y.is_nan() || y <= 1.0 {
            return Err(ThetaError::NonPositiveArgument(y));
        }
        Ok(self.log_inverse(y.ln()))
    }

    /// Theta^{-1}(e^s) for s > 0; the form used by the decay bound, which
    /// has s = k^n ln Theta(d0) already in hand.
    pub fn log_inverse(&self, s: f64) -> f64 {
        match self {
            ThetaSpec::Exp => s,
            ThetaSpec::PowBase { base } => s / base.ln(),
            ThetaSpec::ExpSqrt => s * s,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            ThetaSpec::Exp => "exp",
            ThetaSpec::PowBase { .. } => "pow_base",
            ThetaSpec::ExpSqrt => "exp_sqrt",
        }
    }
}

/// Contraction parameters: exponent k in (0,1), almost-term weight
/// lambda >= 0, and the admissibility weight alpha.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionParams {
    pub k: f64,
    pub lambda: f64,
    pub alpha: AlphaMap,
}

impl ContractionParams {
    pub fn validate(&self) -> Result<(), ThetaError> {
        if !self.k.is_finite() || self.k <= 0.0 || self.k >= 1.0 {
            return Err(ThetaError::InvalidExponent(self.k));
        }
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(ThetaError::InvalidLambda(self.lambda));
        }
        Ok(())
    }
}

/// Sampling plan for the numeric condition checks.
#[derive(Debug, Clone)]
pub struct ThetaGrid {
    /// Upper end of the monotonicity grid.
    pub t_max: f64,
    /// Number of log-spaced samples on (1e-8, t_max] for monotonicity.
    pub t_samples: usize,
    /// Decades sampled for the limit checks: 10^-hi .. 10^-lo.
    pub alpha_decades: (u32, u32),
    /// Exponents tried for the limit condition: i / (k_steps + 1).
    pub k_steps: usize,
}

impl Default for ThetaGrid {
    fn default() -> Self {
        ThetaGrid {
            t_max: 10.0,
            t_samples: 60,
            alpha_decades: (2, 8),
            k_steps: 19,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Theta3Report {
    pub pass: bool,
    /// The exponent whose limit stabilized, if any.
    pub best_k: Option<f64>,
    /// The stabilized limit estimate, if any.
    pub limit_estimate: Option<f64>,
    /// True when no exponent stabilizes and every sampled ratio sequence
    /// is strictly decreasing, i.e. the limit is 0 for every exponent.
    pub decays_to_zero: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaConditionsReport {
    pub theta1: bool,
    pub theta2: bool,
    pub theta3: Theta3Report,
}

/// Numeric verification of the three defining conditions on a grid.
///
/// The monotonicity and limit-to-one checks are direct. The third
/// condition asks for an exponent k with lim (Theta(a)-1)/a^k finite and
/// positive; we estimate the limit over a decade grid and accept when the
/// last three ratios agree within 5% and sit inside (1e-6, 1e9). The
/// report never blocks a run: two catalog families fail the limit
/// condition as printed, yet they are the ones worked examples use.
pub fn check_theta_conditions(theta: &ThetaSpec, grid: &ThetaGrid) -> ThetaConditionsReport {
    // Theta1: nondecreasing on a log-spaced grid.
    let lo = 1e-8f64.log10();
    let hi = grid.t_max.log10();
    let n = grid.t_samples.max(2);
    let mut theta1 = true;
    let mut prev = f64::NEG_INFINITY;
    for i in 0..n {
        let t = 10f64.powf(lo + (hi - lo) * i as f64 / (n - 1) as f64);
        let v = theta.log_eval(t);
        if v < prev {
            theta1 = false;
            break;
        }
        prev = v;
    }

    // Theta2: Theta(a) -> 1 as a -> 0+, sampled on descending decades.
    let (dec_lo, dec_hi) = grid.alpha_decades;
    let alphas: Vec<f64> = (dec_lo..=dec_hi).map(|d| 10f64.powi(-(d as i32))).collect();
    let gaps: Vec<f64> = alphas.iter().map(|&a| theta.log_eval(a).exp_m1()).collect();
    let theta2 = gaps.windows(2).all(|w| w[1] < w[0]) && *gaps.last().unwrap() <= 1e-3;

    // Theta3: limit of (Theta(a)-1)/a^k over a grid of exponents.
    let mut best: Option<(f64, f64, f64)> = None; // (spread, k, estimate)
    let mut all_decreasing = true;
    for i in 1..=grid.k_steps {
        let k = i as f64 / (grid.k_steps + 1) as f64;
        let ratios: Vec<f64> = alphas
            .iter()
            .zip(&gaps)
            .map(|(&a, &g)| g / a.powf(k))
            .collect();
        if !ratios.windows(2).all(|w| w[1] < w[0]) {
            all_decreasing = false;
        }
        let tail = &ratios[ratios.len() - 3..];
        let max = tail.iter().cloned().fold(f64::MIN, f64::max);
        let min = tail.iter().cloned().fold(f64::MAX, f64::min);
        let spread = max / min - 1.0;
        let last = *tail.last().unwrap();
        if spread <= 0.05 && last > 1e-6 && last < 1e9 {
            match best {
                Some((s, _, _)) if s <= spread => {}
                _ => best = Some((spread, k, last)),
            }
        }
    }
    let theta3 = match best {
        Some((_, k, estimate)) => Theta3Report {
            pass: true,
            best_k: Some(k),
            limit_estimate: Some(estimate),
            decays_to_zero: false,
        },
        None => Theta3Report {
            pass: false,
            best_k: None,
            limit_estimate: None,
            decays_to_zero: all_decreasing,
        },
    };

    ThetaConditionsReport {
        theta1,
        theta2,
        theta3,
    }
}

/// One ordered pair fed to the contraction audit.
#[derive(Debug, Clone, Serialize)]
pub struct ContractionObservation {
    pub pair: (usize, usize),
    pub alpha: f64,
    /// H(Fx, Fy), or d(Fx, Fy) in the single-valued case.
    pub image_gap: f64,
    /// d(x, y).
    pub base_dist: f64,
    /// D(y, Fx), or d(y, Fx) in the single-valued case.
    pub almost_dist: f64,
}

/// Per-pair audit record; logs are natural logs of Theta values.
#[derive(Debug, Clone, Serialize)]
pub struct AuditSample {
    pub pair: (usize, usize),
    pub image_gap: f64,
    pub base_dist: f64,
    pub almost_dist: f64,
    pub alpha: f64,
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub k_pair: f64,
}

/// Result of auditing the contraction inequality over a set of pairs.
#[derive(Debug, Clone, Serialize)]
pub struct ContractionAudit {
    /// Whether alpha(x,y) Theta(gap) <= [Theta(d + lambda D)]^k held on
    /// every constrained pair, for the audited k.
    pub holds: bool,
    pub k: f64,
    pub lambda: f64,
    /// Smallest exponent that would satisfy every constrained pair;
    /// `None` when no pair imposes a constraint.
    pub k_min: Option<f64>,
    /// The pair attaining `k_min`.
    pub worst_pair: Option<(usize, usize)>,
    pub samples: Vec<AuditSample>,
    /// Pairs where the comparison argument d + lambda D vanished while the
    /// image gap did not; no exponent can satisfy these.
    pub structural_violations: Vec<(usize, usize)>,
    /// Number of pairs with a positive image gap.
    pub audited_pairs: usize,
    /// Pairs whose left side did not exceed 1 and so impose no constraint.
    pub unconstrained_pairs: usize,
}

const LOG_SLACK: f64 = 1e-12;

/// Core audit engine over precomputed observations. Works entirely in
/// log space: the left side is ln alpha + ln Theta(gap), the right side
/// k ln Theta(d + lambda D).
pub fn audit_observations(
    observations: &[ContractionObservation],
    theta: &ThetaSpec,
    params: &ContractionParams,
) -> ContractionAudit {
    let mut samples = Vec::new();
    let mut structural = Vec::new();
    let mut k_min: Option<f64> = None;
    let mut worst: Option<(usize, usize)> = None;
    let mut audited = 0usize;
    let mut unconstrained = 0usize;

    for obs in observations {
        if obs.image_gap <= 0.0 {
            continue;
        }
        audited += 1;
        let lhs_log = obs.alpha.ln() + theta.log_eval(obs.image_gap);
        if lhs_log <= 0.0 {
            unconstrained += 1;
            continue;
        }
        let rhs_arg = obs.base_dist + params.lambda * obs.almost_dist;
        if rhs_arg <= 0.0 {
            structural.push(obs.pair);
            continue;
        }
        let rhs_log = theta.log_eval(rhs_arg);
        let k_pair = lhs_log / rhs_log;
        if k_min.is_none_or(|cur| k_pair > cur) {
            k_min = Some(k_pair);
            worst = Some(obs.pair);
        }
        samples.push(AuditSample {
            pair: obs.pair,
            image_gap: obs.image_gap,
            base_dist: obs.base_dist,
            almost_dist: obs.almost_dist,
            alpha: obs.alpha,
            lhs_log,
            rhs_log,
            k_pair,
        });
    }

    let holds = structural.is_empty() && k_min.is_none_or(|km| km <= params.k + LOG_SLACK);
    ContractionAudit {
        holds,
        k: params.k,
        lambda: params.lambda,
        k_min,
        worst_pair: worst,
        samples,
        structural_violations: structural,
        audited_pairs: audited,
        unconstrained_pairs: unconstrained,
    }
}

/// Audits the set-valued contraction inequality over all ordered pairs of
/// distinct points drawn from `subset` (indices into `a`). Image gaps use
/// the Hausdorff distance between image sets.
pub fn audit_contraction(
    a: &PointSet,
    b: &PointSet,
    m: &Metric,
    f: &MultiMap,
    theta: &ThetaSpec,
    params: &ContractionParams,
    subset: &[usize],
) -> Result<ContractionAudit, MetricError> {
    let mut observations = Vec::new();
    for &i in subset {
        for &j in subset {
            if i == j {
                continue;
            }
            let image_gap = hausdorff_subsets(b, f.image(i), f.image(j), m)?;
            let base_dist = dist(a.point(i), a.point(j), m)?;
            let almost_dist = dist_point_subset(a.point(j), b, f.image(i), m)?.value;
            observations.push(ContractionObservation {
                pair: (i, j),
                alpha: params.alpha.value(i, j),
                image_gap,
                base_dist,
                almost_dist,
            });
        }
    }
    Ok(audit_observations(&observations, theta, params))
}

/// Audits the single-valued contraction inequality over all ordered pairs
/// of `points`, for an arbitrary point type with a caller-supplied map
/// and distance. The image gap is the plain distance between images.
pub fn audit_single_valued<P>(
    points: &[P],
    map: impl Fn(&P) -> P,
    dist_fn: impl Fn(&P, &P) -> f64,
    theta: &ThetaSpec,
    params: &ContractionParams,
) -> ContractionAudit {
    let images: Vec<P> = points.iter().map(&map).collect();
    let mut observations = Vec::new();
    for i in 0..points.len() {
        for j in 0..points.len() {
            if i == j {
                continue;
            }
            observations.push(ContractionObservation {
                pair: (i, j),
                alpha: params.alpha.value(i, j),
                image_gap: dist_fn(&images[i], &images[j]),
                base_dist: dist_fn(&points[i], &points[j]),
                almost_dist: dist_fn(&points[j], &images[i]),
            });
        }
    }
    audit_observations(&observations, theta, params)
}
