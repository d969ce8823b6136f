//! The JSON instance format and its validation.
//!
//! An instance file declares the two point sets (as explicit points,
//! abstract indices, or segment samplers), the set-valued map, the
//! admissibility weight, the comparison function, the contraction
//! parameters, optional seeds, and tolerances. Loading expands segment
//! samplers deterministically (both endpoints always included), checks
//! every index, and hands back a ready-to-solve [`ProximityProblem`].
//!
//! ```json
//! {
//!   "version": 1,
//!   "metric": { "kind": "l1" },
//!   "dim": 2,
//!   "A": [ { "point": [-2, 2] }, { "point": [2, 2] } ],
//!   "B": [ { "point": [-8, 0] },
//!          { "segment": { "from": [-8, -8], "to": [-8, -1], "step": 1.0 } } ],
//!   "F": [ [ { "index": 0 } ], [ { "element": 1 } ] ],
//!   "alpha": { "constant": 1.1 },
//!   "theta": { "family": "pow_base", "base": 5.0 },
//!   "params": { "k": 0.7, "lambda": 2.0 },
//!   "seeds": { "x0": 0, "x1": 0, "y0": 0 }
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mapping::{AlphaMap, MappingError, MultiMap};
use crate::metric::{DistanceTable, Metric, MetricError, Point, PointSet};
use crate::solver::{ProximityProblem, Seeds, Tolerances};
use crate::theta::{ContractionParams, ThetaError, ThetaSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema version {0} (expected {SCHEMA_VERSION})")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error("`dim` is required when coordinate points are used")]
    MissingDim,
    #[error("{set} element {element}: expected {expected} coordinates, got {got}")]
    DimMismatch {
        set: &'static str,
        element: usize,
        expected: usize,
        got: usize,
    },
    #[error("{set} element {element}: segment step must be positive and finite")]
    BadSegmentStep { set: &'static str, element: usize },
    #[error("{set} element {element}: segment endpoints coincide")]
    DegenerateSegment { set: &'static str, element: usize },
    #[error("{set} element {element}: index points require a table metric")]
    IndexPointWithoutTable { set: &'static str, element: usize },
    #[error("{set} element {element}: table metrics take index points only")]
    CoordinatePointWithTable { set: &'static str, element: usize },
    #[error("F entry {entry} references B element {element}, but B has {count} elements")]
    ImageElementOutOfRange {
        entry: usize,
        element: usize,
        count: usize,
    },
    #[error(
        "F entry {entry} references expanded B index {index}, but B expands to {count} points"
    )]
    ImageIndexOutOfRange {
        entry: usize,
        index: usize,
        count: usize,
    },
    #[error("F has {got} entries but A expands to {expected} points")]
    ImageCount { got: usize, expected: usize },
    #[error("seed {name} = {index} out of range ({count} points)")]
    SeedOutOfRange {
        name: &'static str,
        index: usize,
        count: usize,
    },
    #[error("tolerances must be positive and finite: {0}")]
    BadTolerance(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MetricSpec {
    L1,
    L2,
    Linf,
    Table { table: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub from: Vec<f64>,
    pub to: Vec<f64>,
    pub step: f64,
}

/// One declared element of a point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    /// An explicit coordinate point.
    Point { point: Vec<f64> },
    /// An index into an abstract table-metric space.
    Index { index: usize },
    /// A sampled segment; expands to equally spaced points including both
    /// endpoints, with spacing at most `step`.
    Segment { segment: SegmentSpec },
}

/// One image reference in an F entry: either an expanded B point index or
/// a whole B element (useful for segments).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ImageRef {
    Index { index: usize },
    Element { element: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Constant { constant: f64 },
    Table { table: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsSpec {
    pub k: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedsSpec {
    pub x0: usize,
    pub x1: usize,
    pub y0: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TolerancesSpec {
    pub eps_prox: f64,
    pub eps_stop: f64,
    pub eps_step: f64,
    pub eps_dup: f64,
    pub max_iter: usize,
}

impl Default for TolerancesSpec {
    fn default() -> Self {
        let t = Tolerances::default();
        TolerancesSpec {
            eps_prox: t.eps_prox,
            eps_stop: t.eps_stop,
            eps_step: t.eps_step,
            eps_dup: t.eps_dup,
            max_iter: t.max_iter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct MetadataSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    /// Recorded assumption, never machine-checked: along convergent
    /// orbits with alpha >= 1 stepwise, some subsequence keeps alpha >= 1
    /// against the limit. Finite runs cannot test a limit property.
    pub assume_alpha_subsequential: bool,
}

/// The on-disk instance document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub metric: MetricSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(rename = "A")]
    pub a: Vec<ElementSpec>,
    #[serde(rename = "B")]
    pub b: Vec<ElementSpec>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<ImageRef>>,
    pub alpha: AlphaSpec,
    pub theta: ThetaSpec,
    pub params: ParamsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<SeedsSpec>,
    #[serde(default)]
    pub tolerances: TolerancesSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<MetadataSpec>,
}

/// A fully validated instance: the expanded problem plus the document it
/// came from.
#[derive(Debug, Clone)]
pub struct Instance {
    pub file: InstanceFile,
    pub problem: ProximityProblem,
    pub seeds: Option<Seeds>,
    pub tolerances: Tolerances,
    /// Expanded-point ranges per declared A element.
    pub a_elements: Vec<std::ops::Range<usize>>,
    /// Expanded-point ranges per declared B element.
    pub b_elements: Vec<std::ops::Range<usize>>,
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance, InstanceError> {
    let path = path.as_ref();
    let raw = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&raw)
}

pub fn parse_instance(raw: &str) -> Result<Instance, InstanceError> {
    let file: InstanceFile = serde_json::from_str(raw)?;
    Instance::from_file(file)
}

/// Canonical single-line rendering; field order is fixed by the schema,
/// so identical documents produce identical bytes.
pub fn canonical_json(file: &InstanceFile) -> String {
    serde_json::to_string(file).expect("instance serialization cannot fail")
}

/// Pretty rendering for files on disk.
pub fn save_instance(file: &InstanceFile, path: impl AsRef<Path>) -> Result<(), InstanceError> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(file).expect("instance serialization cannot fail");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// FNV-1a over the canonical form; stable across runs and platforms.
pub fn digest(file: &InstanceFile) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in canonical_json(file).as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

impl Instance {
    pub fn from_file(file: InstanceFile) -> Result<Self, InstanceError> {
        if file.version != SCHEMA_VERSION {
            return Err(InstanceError::UnsupportedVersion(file.version));
        }
        let tolerances = validate_tolerances(&file.tolerances)?;
        let metric = match &file.metric {
            MetricSpec::L1 => Metric::L1,
            MetricSpec::L2 => Metric::L2,
            MetricSpec::Linf => Metric::Linf,
            MetricSpec::Table { table } => Metric::Table(DistanceTable::new(table.clone())?),
        };

        let (a_points, a_elements) = expand_elements(&file.a, &metric, file.dim, "A")?;
        let (b_points, b_elements) = expand_elements(&file.b, &metric, file.dim, "B")?;
        let a = PointSet::new("A", a_points, tolerances.eps_dup)?;
        let b = PointSet::new("B", b_points, tolerances.eps_dup)?;

        if file.f.len() != a.len() {
            return Err(InstanceError::ImageCount {
                got: file.f.len(),
                expected: a.len(),
            });
        }
        let mut images = Vec::with_capacity(file.f.len());
        for (entry, refs) in file.f.iter().enumerate() {
            let mut image = Vec::new();
            for r in refs {
                match *r {
                    ImageRef::Index { index } => {
                        if index >= b.len() {
                            return Err(InstanceError::ImageIndexOutOfRange {
                                entry,
                                index,
                                count: b.len(),
                            });
                        }
                        if !image.contains(&index) {
                            image.push(index);
                        }
                    }
                    ImageRef::Element { element } => {
                        let range = b_elements.get(element).ok_or(
                            InstanceError::ImageElementOutOfRange {
                                entry,
                                element,
                                count: b_elements.len(),
                            },
                        )?;
                        for index in range.clone() {
                            if !image.contains(&index) {
                                image.push(index);
                            }
                        }
                    }
                }
            }
            images.push(image);
        }
        let map = MultiMap::new(images, a.len(), b.len())?;

        let alpha = match &file.alpha {
            AlphaSpec::Constant { constant } => AlphaMap::Constant(*constant),
            AlphaSpec::Table { table } => AlphaMap::Table(table.clone()),
        };
        alpha.validate(a.len())?;
        file.theta.validate()?;
        let params = ContractionParams {
            k: file.params.k,
            lambda: file.params.lambda,
            alpha,
        };
        params.validate()?;

        let seeds = match file.seeds {
            None => None,
            Some(s) => {
                for (name, index, count) in [
                    ("x0", s.x0, a.len()),
                    ("x1", s.x1, a.len()),
                    ("y0", s.y0, b.len()),
                ] {
                    if index >= count {
                        return Err(InstanceError::SeedOutOfRange { name, index, count });
                    }
                }
                Some(Seeds {
                    x0: s.x0,
                    x1: s.x1,
                    y0: s.y0,
                })
            }
        };

        let problem = ProximityProblem {
            a,
            b,
            metric,
            map,
            theta: file.theta,
            params,
        };
        Ok(Instance {
            file,
            problem,
            seeds,
            tolerances,
            a_elements,
            b_elements,
        })
    }

    pub fn digest(&self) -> String {
        digest(&self.file)
    }
}

fn validate_tolerances(t: &TolerancesSpec) -> Result<Tolerances, InstanceError> {
    for (name, v) in [
        ("eps_prox", t.eps_prox),
        ("eps_stop", t.eps_stop),
        ("eps_dup", t.eps_dup),
    ] {
        if !v.is_finite() || v <= 0.0 {
            return Err(InstanceError::BadTolerance(name));
        }
    }
    if !t.eps_step.is_finite() || t.eps_step < 0.0 {
        return Err(InstanceError::BadTolerance("eps_step"));
    }
    if t.max_iter == 0 {
        return Err(InstanceError::BadTolerance("max_iter"));
    }
    Ok(Tolerances {
        eps_prox: t.eps_prox,
        eps_stop: t.eps_stop,
        eps_step: t.eps_step,
        eps_dup: t.eps_dup,
        max_iter: t.max_iter,
    })
}

fn expand_elements(
    elements: &[ElementSpec],
    metric: &Metric,
    dim: Option<usize>,
    set: &'static str,
) -> Result<(Vec<Point>, Vec<std::ops::Range<usize>>), InstanceError> {
    let table = matches!(metric, Metric::Table(_));
    let mut points = Vec::new();
    let mut ranges = Vec::new();
    for (element, spec) in elements.iter().enumerate() {
        let start = points.len();
        match spec {
            ElementSpec::Index { index } => {
                if !table {
                    return Err(InstanceError::IndexPointWithoutTable { set, element });
                }
                points.push(Point::Index(*index));
            }
            ElementSpec::Point { point } => {
                if table {
                    return Err(InstanceError::CoordinatePointWithTable { set, element });
                }
                let d = dim.ok_or(InstanceError::MissingDim)?;
                if point.len() != d {
                    return Err(InstanceError::DimMismatch {
                        set,
                        element,
                        expected: d,
                        got: point.len(),
                    });
                }
                points.push(Point::Coords(point.clone()));
            }
            ElementSpec::Segment { segment } => {
                if table {
                    return Err(InstanceError::CoordinatePointWithTable { set, element });
                }
                let d = dim.ok_or(InstanceError::MissingDim)?;
                if segment.from.len() != d {
                    return Err(InstanceError::DimMismatch {
                        set,
                        element,
                        expected: d,
                        got: segment.from.len(),
                    });
                }
                if segment.to.len() != d {
                    return Err(InstanceError::DimMismatch {
                        set,
                        element,
                        expected: d,
                        got: segment.to.len(),
                    });
                }
                if !segment.step.is_finite() || segment.step <= 0.0 {
                    return Err(InstanceError::BadSegmentStep { set, element });
                }
                let length: f64 = segment
                    .from
                    .iter()
                    .zip(&segment.to)
                    .map(|(f, t)| (t - f) * (t - f))
                    .sum::<f64>()
                    .sqrt();
                if length == 0.0 {
                    return Err(InstanceError::DegenerateSegment { set, element });
                }
                // Both endpoints included; spacing never exceeds `step`.
                let subdivisions = ((length / segment.step) - 1e-12).ceil().max(1.0) as usize;
                for i in 0..=subdivisions {
                    let coords: Vec<f64> = segment
                        .from
                        .iter()
                        .zip(&segment.to)
                        .map(|(f, t)| f + ((t - f) * i as f64) / subdivisions as f64)
                        .collect();
                    points.push(Point::Coords(coords));
                }
            }
        }
        ranges.push(start..points.len());
    }
    Ok((points, ranges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Point;

    fn example_path() -> std::path::PathBuf {
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/example_2_10.json")
    }

    #[test]
    fn shipped_example_loads_and_expands() {
        let inst = load_instance(example_path()).unwrap();
        assert_eq!(inst.problem.a.len(), 3);
        assert!(inst.problem.b.len() >= 3);
        assert_eq!(inst.problem.b.len(), 33);
        assert_eq!(inst.problem.metric, Metric::L1);
        assert_eq!(inst.problem.a.point(0), &Point::coords(&[-2.0, 2.0]));
        // expanded segments include their endpoints
        assert!(inst
            .problem
            .b
            .position_of(&Point::coords(&[-8.0, -8.0]), 1e-9)
            .is_some());
        assert!(inst
            .problem
            .b
            .position_of(&Point::coords(&[0.0, -8.0]), 1e-9)
            .is_some());
        assert!(inst.seeds.is_some());
        // the metadata records the untestable limit assumption explicitly
        assert!(inst.file.metadata.is_some());
        // the corner point is the nearest of the 33 boundary samples
        let d = crate::metric::dist_point_set(
            &Point::coords(&[-2.0, 2.0]),
            &inst.problem.b,
            &inst.problem.metric,
        )
        .unwrap();
        assert_eq!(d.value, 8.0);
        assert_eq!(inst.problem.b.point(d.argmin), &Point::coords(&[-8.0, 0.0]));
    }

    #[test]
    fn round_trip_is_canonical() {
        let inst = load_instance(example_path()).unwrap();
        let dir = std::env::temp_dir();
        let path = dir.join(format!("proxikit_roundtrip_{}.json", std::process::id()));
        save_instance(&inst.file, &path).unwrap();
        let reloaded = load_instance(&path).unwrap();
        assert_eq!(inst.file, reloaded.file);
        assert_eq!(canonical_json(&inst.file), canonical_json(&reloaded.file));
        assert_eq!(inst.digest(), reloaded.digest());
        std::fs::remove_file(&path).ok();
    }

    fn minimal(version: u32, f: &str) -> String {
        format!(
            r#"{{
                "version": {version},
                "metric": {{ "kind": "l1" }},
                "dim": 1,
                "A": [ {{ "point": [0] }} ],
                "B": [ {{ "point": [1] }}, {{ "point": [2] }} ],
                "F": {f},
                "alpha": {{ "constant": 1.0 }},
                "theta": {{ "family": "exp" }},
                "params": {{ "k": 0.5, "lambda": 0.0 }}
            }}"#
        )
    }

    #[test]
    fn minimal_instance_parses() {
        let inst = parse_instance(&minimal(1, "[[{\"index\": 0}]]")).unwrap();
        assert_eq!(inst.problem.a.len(), 1);
        assert_eq!(inst.problem.map.image(0), &[0]);
        assert!(inst.seeds.is_none());
    }

    #[test]
    fn version_mismatch_is_rejected() {
        assert!(matches!(
            parse_instance(&minimal(2, "[[{\"index\": 0}]]")),
            Err(InstanceError::UnsupportedVersion(2))
        ));
    }

    #[test]
    fn out_of_range_image_index_names_the_entry() {
        let err = parse_instance(&minimal(1, "[[{\"index\": 7}]]")).unwrap_err();
        match err {
            InstanceError::ImageIndexOutOfRange {
                entry,
                index,
                count,
            } => {
                assert_eq!(entry, 0);
                assert_eq!(index, 7);
                assert_eq!(count, 2);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn empty_a_is_rejected() {
        let raw = r#"{
            "version": 1,
            "metric": { "kind": "l1" },
            "dim": 1,
            "A": [],
            "B": [ { "point": [1] } ],
            "F": [],
            "alpha": { "constant": 1.0 },
            "theta": { "family": "exp" },
            "params": { "k": 0.5, "lambda": 0.0 }
        }"#;
        assert!(matches!(
            parse_instance(raw),
            Err(InstanceError::Metric(MetricError::EmptySet(_)))
        ));
    }

    #[test]
    fn duplicate_points_are_rejected() {
        let raw = r#"{
            "version": 1,
            "metric": { "kind": "l1" },
            "dim": 1,
            "A": [ { "point": [0] }, { "point": [0] } ],
            "B": [ { "point": [1] } ],
            "F": [ [{"index": 0}], [{"index": 0}] ],
            "alpha": { "constant": 1.0 },
            "theta": { "family": "exp" },
            "params": { "k": 0.5, "lambda": 0.0 }
        }"#;
        assert!(matches!(
            parse_instance(raw),
            Err(InstanceError::Metric(MetricError::DuplicatePoint { .. }))
        ));
    }

    #[test]
    fn segment_expansion_hits_integer_lattice_exactly() {
        let raw = r#"{
            "version": 1,
            "metric": { "kind": "l1" },
            "dim": 2,
            "A": [ { "point": [0, 0] } ],
            "B": [ { "segment": { "from": [-7, -8], "to": [7, -8], "step": 1.0 } } ],
            "F": [ [ { "element": 0 } ] ],
            "alpha": { "constant": 1.0 },
            "theta": { "family": "exp" },
            "params": { "k": 0.5, "lambda": 0.0 }
        }"#;
        let inst = parse_instance(raw).unwrap();
        assert_eq!(inst.problem.b.len(), 15);
        for (i, p) in inst.problem.b.points().iter().enumerate() {
            let expected = Point::coords(&[-7.0 + i as f64, -8.0]);
            assert_eq!(p, &expected, "sample {i} must be an exact lattice point");
        }
        assert_eq!(inst.problem.map.image(0).len(), 15);
    }

    #[test]
    fn bad_segment_and_dim_errors() {
        let seg = |body: &str| {
            format!(
                r#"{{
                    "version": 1,
                    "metric": {{ "kind": "l1" }},
                    "dim": 2,
                    "A": [ {{ "point": [0, 0] }} ],
                    "B": [ {body} ],
                    "F": [ [ {{ "element": 0 }} ] ],
                    "alpha": {{ "constant": 1.0 }},
                    "theta": {{ "family": "exp" }},
                    "params": {{ "k": 0.5, "lambda": 0.0 }}
                }}"#
            )
        };
        assert!(matches!(
            parse_instance(&seg(
                r#"{ "segment": { "from": [0, 0], "to": [1, 0], "step": 0.0 } }"#
            )),
            Err(InstanceError::BadSegmentStep {
                set: "B",
                element: 0
            })
        ));
        assert!(matches!(
            parse_instance(&seg(
                r#"{ "segment": { "from": [0, 0], "to": [0, 0], "step": 1.0 } }"#
            )),
            Err(InstanceError::DegenerateSegment { .. })
        ));
        assert!(matches!(
            parse_instance(&seg(r#"{ "point": [1, 2, 3] }"#)),
            Err(InstanceError::DimMismatch {
                got: 3,
                expected: 2,
                ..
            })
        ));
    }

    #[test]
    fn table_instances_take_index_points_only() {
        let raw = r#"{
            "version": 1,
            "metric": { "kind": "table", "table": [[0, 1], [1, 0]] },
            "A": [ { "index": 0 } ],
            "B": [ { "index": 1 } ],
            "F": [ [ { "index": 0 } ] ],
            "alpha": { "constant": 1.0 },
            "theta": { "family": "exp" },
            "params": { "k": 0.5, "lambda": 0.0 }
        }"#;
        let inst = parse_instance(raw).unwrap();
        assert_eq!(inst.problem.a.point(0), &Point::Index(0));

        let bad = raw.replace(r#"{ "index": 0 } ]"#, r#"{ "point": [0] } ]"#);
        assert!(parse_instance(&bad).is_err());
    }

    #[test]
    fn seed_out_of_range_is_rejected() {
        let raw = r#"{
            "version": 1,
            "metric": { "kind": "l1" },
            "dim": 1,
            "A": [ { "point": [0] } ],
            "B": [ { "point": [1] } ],
            "F": [ [ { "index": 0 } ] ],
            "alpha": { "constant": 1.0 },
            "theta": { "family": "exp" },
            "params": { "k": 0.5, "lambda": 0.0 },
            "seeds": { "x0": 0, "x1": 3, "y0": 0 }
        }"#;
        assert!(matches!(
            parse_instance(raw),
            Err(InstanceError::SeedOutOfRange {
                name: "x1",
                index: 3,
                ..
            })
        ));
    }

    #[test]
    fn digest_is_stable() {
        let a = parse_instance(&minimal(1, "[[{\"index\": 0}]]")).unwrap();
        let b = parse_instance(&minimal(1, "[[{\"index\": 0}]]")).unwrap();
        assert_eq!(a.digest(), b.digest());
        let c = parse_instance(&minimal(1, "[[{\"index\": 1}]]")).unwrap();
        assert_ne!(a.digest(), c.digest());
    }
}
