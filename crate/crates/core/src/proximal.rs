//! Proximal subsets and the structural hypotheses attached to a pair of
//! sets: which points realize the set distance, the P and weak P
//! properties, alpha-proximal admissibility, and the range condition.
//!
//! Every check returns a report carrying full witness tuples, because
//! diagnosing hypothesis failures is the point of running them.

use serde::Serialize;

use crate::mapping::{AlphaMap, MultiMap};
use crate::metric::{dist, Metric, MetricError, PointSet};

/// Pairs (a, b) realizing dist(A, B) within `eps_prox`, together with the
/// projections of those pairs onto each side.
#[derive(Debug, Clone, Serialize)]
pub struct ProximalPairing {
    pub d_ab: f64,
    pub eps_prox: f64,
    /// All (a-index, b-index) with d(a, b) <= d_ab + eps_prox.
    pub pairs: Vec<(usize, usize)>,
    /// Deduplicated a-indices of `pairs`, in A order.
    pub a0: Vec<usize>,
    /// Deduplicated b-indices of `pairs`, in B order.
    pub b0: Vec<usize>,
}

impl ProximalPairing {
    /// A-side partners of a given b-index, in A order.
    pub fn partners_of_b(&self, b_idx: usize) -> Vec<usize> {
        self.pairs
            .iter()
            .filter(|&&(_, j)| j == b_idx)
            .map(|&(i, _)| i)
            .collect()
    }
}

/// Exhaustive enumeration of the pairs realizing the set distance.
/// For finite nonempty sets the minimum is attained, so the projections
/// are always nonempty.
pub fn proximal_pairs(
    a: &PointSet,
    b: &PointSet,
    m: &Metric,
    eps_prox: f64,
) -> Result<ProximalPairing, MetricError> {
    let d_ab = crate::metric::dist_set_set(a, b, m)?.value;
    let mut pairs = Vec::new();
    let mut a0 = Vec::new();
    let mut b0 = Vec::new();
    for i in 0..a.len() {
        for j in 0..b.len() {
            let d = dist(a.point(i), b.point(j), m)?;
            if d <= d_ab + eps_prox {
                pairs.push((i, j));
                if !a0.contains(&i) {
                    a0.push(i);
                }
                if !b0.contains(&j) {
                    b0.push(j);
                }
            }
        }
    }
    a0.sort_unstable();
    b0.sort_unstable();
    Ok(ProximalPairing {
        d_ab,
        eps_prox,
        pairs,
        a0,
        b0,
    })
}

/// A violation of the (weak) P property: two realizing pairs whose
/// A-side distance exceeds (differs from) the B-side distance.
#[derive(Debug, Clone, Serialize)]
pub struct PairPropertyWitness {
    pub pair1: (usize, usize),
    pub pair2: (usize, usize),
    pub d_a: f64,
    pub d_b: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairPropertyReport {
    pub holds: bool,
    pub witnesses: Vec<PairPropertyWitness>,
}

/// Weak P property: for realizing pairs (x1,y1), (x2,y2),
/// d(x1,x2) <= d(y1,y2) within `tol`.
pub fn check_weak_p(
    pp: &ProximalPairing,
    a: &PointSet,
    b: &PointSet,
    m: &Metric,
    tol: f64,
) -> Result<PairPropertyReport, MetricError> {
    check_pair_property(pp, a, b, m, tol, false)
}

/// P property: the same with equality within `tol`.
pub fn check_p(
    pp: &ProximalPairing,
    a: &PointSet,
    b: &PointSet,
    m: &Metric,
    tol: f64,
) -> Result<PairPropertyReport, MetricError> {
    check_pair_property(pp, a, b, m, tol, true)
}

fn check_pair_property(
    pp: &ProximalPairing,
    a: &PointSet,
    b: &PointSet,
    m: &Metric,
    tol: f64,
    require_equality: bool,
) -> Result<PairPropertyReport, MetricError> {
    let mut witnesses = Vec::new();
    for (u, &(x1, y1)) in pp.pairs.iter().enumerate() {
        for &(x2, y2) in &pp.pairs[u + 1..] {
            let d_a = dist(a.point(x1), a.point(x2), m)?;
            let d_b = dist(b.point(y1), b.point(y2), m)?;
            let violated = if require_equality {
                (d_a - d_b).abs() > tol
            } else {
                d_a > d_b + tol
            };
            if violated {
                witnesses.push(PairPropertyWitness {
                    pair1: (x1, y1),
                    pair2: (x2, y2),
                    d_a,
                    d_b,
                });
            }
        }
    }
    Ok(PairPropertyReport {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

/// A failure of alpha-proximal admissibility: the premise held but
/// alpha(u1, u2) < 1.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityWitness {
    pub x1: usize,
    pub x2: usize,
    pub y1: usize,
    pub y2: usize,
    pub u1: usize,
    pub u2: usize,
    pub alpha_x: f64,
    pub alpha_u: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub holds: bool,
    pub witnesses: Vec<AdmissibilityWitness>,
}

/// alpha-proximal admissibility: whenever alpha(x1,x2) >= 1 and u1, u2
/// are proximal partners of image points y1 in Fx1, y2 in Fx2, then
/// alpha(u1,u2) >= 1. Enumerates the full premise space; the partner
/// relation is read off the pairing.
pub fn check_alpha_proximal_admissible(
    f: &MultiMap,
    alpha: &AlphaMap,
    pp: &ProximalPairing,
) -> AdmissibilityReport {
    // partner lists computed once per b-point
    let max_b = pp.pairs.iter().map(|&(_, j)| j + 1).max().unwrap_or(0);
    let mut partners: Vec<Vec<usize>> = vec![Vec::new(); max_b];
    for &(i, j) in &pp.pairs {
        partners[j].push(i);
    }
    let mut witnesses = Vec::new();
    for x1 in 0..f.domain_size() {
        for x2 in 0..f.domain_size() {
            let alpha_x = alpha.value(x1, x2);
            if alpha_x < 1.0 {
                continue;
            }
            for &y1 in f.image(x1) {
                for &y2 in f.image(x2) {
                    if y1 >= partners.len() || y2 >= partners.len() {
                        continue;
                    }
                    for &u1 in &partners[y1] {
                        for &u2 in &partners[y2] {
                            let alpha_u = alpha.value(u1, u2);
                            if alpha_u < 1.0 {
                                witnesses.push(AdmissibilityWitness {
                                    x1,
                                    x2,
                                    y1,
                                    y2,
                                    u1,
                                    u2,
                                    alpha_x,
                                    alpha_u,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    AdmissibilityReport {
        holds: witnesses.is_empty(),
        witnesses,
    }
}

/// A point of A0 whose image leaves B0.
#[derive(Debug, Clone, Serialize)]
pub struct RangeViolation {
    pub a_index: usize,
    pub image_index: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RangeReport {
    pub holds: bool,
    pub violators: Vec<RangeViolation>,
}

/// Range condition: Fx is contained in B0 for every x in A0.
pub fn check_range_condition(f: &MultiMap, pp: &ProximalPairing) -> RangeReport {
    let mut violators = Vec::new();
    for &i in &pp.a0 {
        for &j in f.image(i) {
            if !pp.b0.contains(&j) {
                violators.push(RangeViolation {
                    a_index: i,
                    image_index: j,
                });
            }
        }
    }
    RangeReport {
        holds: violators.is_empty(),
        violators,
    }
}
