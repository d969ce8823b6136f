//! Brute-force ground truth for finite instances plus a seeded random
//! instance generator whose output is guaranteed to satisfy every solver
//! hypothesis, for property testing at scale.

use serde::Serialize;
use thiserror::Error;

use crate::instance::{
    AlphaSpec, ElementSpec, ImageRef, InstanceFile, MetadataSpec, MetricSpec, ParamsSpec,
    SeedsSpec, TolerancesSpec, SCHEMA_VERSION,
};
use crate::mapping::{AlphaMap, MultiMap};
use crate::metric::{dist_point_subset, dist_set_set, Metric, MetricError, Point, PointSet};
use crate::proximal::{check_weak_p, proximal_pairs};
use crate::rng::SplitMix64;
use crate::theta::{audit_contraction, ContractionParams, ThetaSpec};

/// Exhaustive scan of A: the set distance, every best proximity point,
/// and the proximity gap of every point.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub d_ab: f64,
    /// Indices into A with D(x, Fx) - d_ab <= eps_prox.
    pub bpps: Vec<usize>,
    /// Gap per A index, aligned with the point list.
    pub gaps: Vec<f64>,
}

pub fn oracle_bpp(
    a: &PointSet,
    b: &PointSet,
    f: &MultiMap,
    m: &Metric,
    eps_prox: f64,
) -> Result<OracleReport, MetricError> {
    let d_ab = dist_set_set(a, b, m)?.value;
    let mut gaps = Vec::with_capacity(a.len());
    let mut bpps = Vec::new();
    for i in 0..a.len() {
        let d = dist_point_subset(a.point(i), b, f.image(i), m)?.value;
        let gap = d - d_ab;
        if gap <= eps_prox {
            bpps.push(i);
        }
        gaps.push(gap);
    }
    Ok(OracleReport { d_ab, bpps, gaps })
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("profile invalid: {0}")]
    Profile(&'static str),
    #[error("rejection budget exhausted after {attempts} attempts (seed {seed})")]
    BudgetExhausted { seed: u64, attempts: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Shape of the instances to draw.
#[derive(Debug, Clone)]
pub struct GenProfile {
    pub n_a: usize,
    pub n_b: usize,
    pub dim: usize,
    pub metric: Metric,
    /// Largest image cardinality.
    pub image_size: usize,
    /// Reject draws whose pair fails the weak P property.
    pub force_weak_p: bool,
    /// Use one point list for both sets (fixed-point instances).
    pub self_map: bool,
    /// Coordinates are drawn from [-coord_range, coord_range]^dim; a
    /// tighter range produces more distance ties and so richer proximal
    /// structure and longer orbits.
    pub coord_range: i64,
    /// Reject draws whose proximal projections have fewer points than
    /// this; 1 accepts everything.
    pub min_proximal: usize,
}

impl Default for GenProfile {
    fn default() -> Self {
        GenProfile {
            n_a: 5,
            n_b: 6,
            dim: 2,
            metric: Metric::L1,
            image_size: 2,
            force_weak_p: true,
            self_map: false,
            coord_range: 10,
            min_proximal: 1,
        }
    }
}

const REJECTION_BUDGET: usize = 10_000;
const EPS: f64 = 1e-9;

/// Draws one instance deterministically from `seed`.
///
/// Coordinates come from the integer lattice so that taxicab and max-norm
/// distances are exact in floating point. Images of proximal points are
/// drawn inside B0, which makes the range condition hold by construction;
/// a constant alpha >= 1 settles admissibility; the exponent is placed
/// halfway between the audited minimum and 1, so the contraction audit
/// holds as well. Draws that fail the weak P check (when forced), have
/// too small a proximal core, or admit no exponent below 0.95 are
/// rejected and redrawn. Seeds are the admissible start whose first
/// iterate is farthest from optimal.
///
/// Nonself instances keep lambda = 0: with a positive set distance the
/// almost term no longer vanishes along proximal orbits, and the decay
/// certificate would not be a theorem to test. Self-map instances draw
/// lambda from {0, 1/2, 2}.
pub fn gen_instance(seed: u64, profile: &GenProfile) -> Result<InstanceFile, GenError> {
    if profile.n_a == 0 || profile.n_b == 0 || profile.dim == 0 || profile.image_size == 0 {
        return Err(GenError::Profile("sizes must be at least 1"));
    }
    if matches!(profile.metric, Metric::Table(_)) {
        return Err(GenError::Profile("generator draws coordinate instances"));
    }
    if profile.coord_range < 1 {
        return Err(GenError::Profile("coordinate range must be at least 1"));
    }
    let cells = (2 * profile.coord_range + 1).pow(profile.dim as u32) as usize;
    if profile.n_a.max(profile.n_b) > cells {
        return Err(GenError::Profile(
            "more points requested than lattice cells",
        ));
    }
    let mut rng = SplitMix64::new(seed);
    let mut attempts = 0;
    loop {
        attempts += 1;
        if attempts > REJECTION_BUDGET {
            return Err(GenError::BudgetExhausted { seed, attempts });
        }
        if let Some(file) = try_draw(&mut rng, profile, seed)? {
            return Ok(file);
        }
    }
}

fn draw_lattice_points(rng: &mut SplitMix64, n: usize, dim: usize, range: i64) -> Vec<Point> {
    let mut pts: Vec<Point> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = Point::Coords(
            (0..dim)
                .map(|_| rng.next_range_i64(-range, range) as f64)
                .collect(),
        );
        if !pts.iter().any(|q| q == &p) {
            pts.push(p);
        }
    }
    pts
}

fn draw_subset(rng: &mut SplitMix64, pool: &[usize], max_size: usize) -> Vec<usize> {
    let size = 1 + rng.next_index(max_size.min(pool.len()));
    let mut chosen = Vec::with_capacity(size);
    while chosen.len() < size {
        let pick = pool[rng.next_index(pool.len())];
        if !chosen.contains(&pick) {
            chosen.push(pick);
        }
    }
    chosen.sort_unstable();
    chosen
}

fn try_draw(
    rng: &mut SplitMix64,
    profile: &GenProfile,
    seed: u64,
) -> Result<Option<InstanceFile>, GenError> {
    let a_pts = draw_lattice_points(rng, profile.n_a, profile.dim, profile.coord_range);
    let b_pts = if profile.self_map {
        a_pts.clone()
    } else {
        draw_lattice_points(rng, profile.n_b, profile.dim, profile.coord_range)
    };
    let a = PointSet::new("A", a_pts, EPS)?;
    let b = PointSet::new("B", b_pts, EPS)?;
    let pairing = proximal_pairs(&a, &b, &profile.metric, EPS)?;
    if pairing.a0.len() < profile.min_proximal || pairing.b0.len() < profile.min_proximal {
        return Ok(None);
    }
    if profile.force_weak_p && !check_weak_p(&pairing, &a, &b, &profile.metric, EPS)?.holds {
        return Ok(None);
    }

    let all_b: Vec<usize> = (0..b.len()).collect();
    let images: Vec<Vec<usize>> = (0..a.len())
        .map(|i| {
            let pool: &[usize] = if pairing.a0.contains(&i) {
                &pairing.b0
            } else {
                &all_b
            };
            draw_subset(rng, pool, profile.image_size)
        })
        .collect();
    let map = MultiMap::new(images, a.len(), b.len()).expect("generator indices are in range");

    let theta = match rng.next_index(3) {
        0 => ThetaSpec::Exp,
        1 => ThetaSpec::PowBase { base: 5.0 },
        _ => ThetaSpec::ExpSqrt,
    };
    let lambda = if profile.self_map {
        [0.0, 0.5, 2.0][rng.next_index(3)]
    } else {
        0.0
    };
    let alpha_c = [1.0, 1.1][rng.next_index(2)];

    // probe the audited minimum with a placeholder exponent
    let probe = ContractionParams {
        k: 0.5,
        lambda,
        alpha: AlphaMap::Constant(alpha_c),
    };
    let audit = audit_contraction(&a, &b, &profile.metric, &map, &theta, &probe, &pairing.a0)
        .map_err(GenError::Metric)?;
    if !audit.structural_violations.is_empty() {
        return Ok(None);
    }
    let k = match audit.k_min {
        None => 0.5,
        Some(km) if km < 0.95 => (km + 1.0) / 2.0,
        Some(_) => return Ok(None),
    };

    // Scan every admissible (x0, y0 in F(x0), x1 partner of y0) and keep
    // the one whose first iterate has the widest proximity gap, so the
    // emitted orbit actually exercises the iteration.
    let mut seed_choice: Option<(f64, SeedsSpec)> = None;
    for &x0 in &pairing.a0 {
        for &y0 in map.image(x0) {
            for x1 in pairing.partners_of_b(y0) {
                let gap = dist_point_subset(a.point(x1), &b, map.image(x1), &profile.metric)
                    .map_err(GenError::Metric)?
                    .value
                    - pairing.d_ab;
                if seed_choice.as_ref().is_none_or(|(best, _)| gap > *best) {
                    seed_choice = Some((gap, SeedsSpec { x0, x1, y0 }));
                }
            }
        }
    }
    let (_, chosen_seeds) = seed_choice.expect("proximal points have images with partners");

    let to_elems = |s: &PointSet| -> Vec<ElementSpec> {
        s.points()
            .iter()
            .map(|p| match p {
                Point::Coords(c) => ElementSpec::Point { point: c.clone() },
                Point::Index(i) => ElementSpec::Index { index: *i },
            })
            .collect()
    };
    let metric_spec = match profile.metric {
        Metric::L1 => MetricSpec::L1,
        Metric::L2 => MetricSpec::L2,
        Metric::Linf => MetricSpec::Linf,
        Metric::Table(_) => unreachable!(),
    };
    Ok(Some(InstanceFile {
        version: SCHEMA_VERSION,
        metric: metric_spec,
        dim: Some(profile.dim),
        a: to_elems(&a),
        b: to_elems(&b),
        f: map
            .images()
            .iter()
            .map(|img| img.iter().map(|&index| ImageRef::Index { index }).collect())
            .collect(),
        alpha: AlphaSpec::Constant { constant: alpha_c },
        theta,
        params: ParamsSpec { k, lambda },
        seeds: Some(chosen_seeds),
        tolerances: TolerancesSpec::default(),
        metadata: Some(MetadataSpec {
            label: Some(format!("generated seed={seed}")),
            comment: None,
            assume_alpha_subsequential: false,
        }),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{canonical_json, Instance};
    use crate::metric::EPS_DUP;
    use crate::solver::{certify, solve, Outcome};
    use crate::testfix;

    #[test]
    fn worked_example_oracle_finds_both_proximity_points() {
        let p = testfix::worked_example_problem(0.7);
        let report = oracle_bpp(&p.a, &p.b, &p.map, &p.metric, 1e-9).unwrap();
        assert_eq!(report.d_ab, 8.0);
        assert_eq!(report.bpps, vec![0, 1]);
        // the third point sees its whole image at taxicab distance >= 12
        assert_eq!(report.gaps[2], 4.0);
        // oracle set distance agrees with the metric layer exactly
        assert_eq!(
            report.d_ab,
            dist_set_set(&p.a, &p.b, &p.metric).unwrap().value
        );
    }

    #[test]
    fn identity_self_map_makes_every_point_best() {
        let pts: Vec<Point> = (0..4)
            .map(|i| Point::coords(&[f64::from(i), 0.0]))
            .collect();
        let p = testfix::self_map_problem(pts, |i| vec![i], 0.5, 0.0, 1.0);
        let report = oracle_bpp(&p.a, &p.b, &p.map, &p.metric, 1e-9).unwrap();
        assert_eq!(report.d_ab, 0.0);
        assert_eq!(report.bpps, vec![0, 1, 2, 3]);
        assert!(report.gaps.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn generator_is_deterministic() {
        let profile = GenProfile::default();
        let a = gen_instance(42, &profile).unwrap();
        let b = gen_instance(42, &profile).unwrap();
        assert_eq!(a, b);
        assert_eq!(canonical_json(&a), canonical_json(&b));
        let c = gen_instance(43, &profile).unwrap();
        assert_ne!(canonical_json(&a), canonical_json(&c));
    }

    #[test]
    fn self_map_profile_yields_zero_set_distance() {
        let profile = GenProfile {
            self_map: true,
            ..GenProfile::default()
        };
        let file = gen_instance(7, &profile).unwrap();
        let inst = Instance::from_file(file).unwrap();
        let d = dist_set_set(&inst.problem.a, &inst.problem.b, &inst.problem.metric)
            .unwrap()
            .value;
        assert_eq!(d, 0.0);
    }

    #[test]
    fn generated_instances_certify_solve_and_agree_with_oracle() {
        let mut checked = 0;
        let mut seed = 0u64;
        while checked < 25 {
            let profile = if seed.is_multiple_of(3) {
                GenProfile {
                    self_map: true,
                    ..GenProfile::default()
                }
            } else {
                GenProfile::default()
            };
            seed += 1;
            let file = match gen_instance(seed, &profile) {
                Ok(f) => f,
                Err(GenError::BudgetExhausted { .. }) => continue,
                Err(e) => panic!("generator failed: {e}"),
            };
            let inst = Instance::from_file(file).unwrap();
            let p = &inst.problem;
            let cert = certify(p, &inst.tolerances).unwrap();
            assert!(cert.hypotheses_hold, "seed {seed} must certify");
            let oracle =
                oracle_bpp(&p.a, &p.b, &p.map, &p.metric, inst.tolerances.eps_prox).unwrap();
            // every gap respects the set-distance lower bound
            assert!(oracle.gaps.iter().all(|&g| g >= -1e-9));
            let result = solve(p, inst.seeds.unwrap(), &inst.tolerances).unwrap();
            assert_eq!(result.trace.outcome, Outcome::Converged, "seed {seed}");
            assert!(result.certified, "seed {seed}");
            assert!(
                oracle.bpps.contains(&result.point_index),
                "seed {seed}: solver point {} not in oracle set {:?}",
                result.point_index,
                oracle.bpps
            );
            checked += 1;
        }
    }

    #[test]
    fn generator_rejects_bad_profiles() {
        assert!(matches!(
            gen_instance(
                0,
                &GenProfile {
                    n_a: 0,
                    ..GenProfile::default()
                }
            ),
            Err(GenError::Profile(_))
        ));
        let table =
            crate::metric::DistanceTable::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            gen_instance(
                0,
                &GenProfile {
                    metric: Metric::Table(table),
                    ..GenProfile::default()
                }
            ),
            Err(GenError::Profile(_))
        ));
        let _ = EPS_DUP;
    }
}
