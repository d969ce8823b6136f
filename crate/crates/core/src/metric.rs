//! Distances between points, point-set and set-set distances, and the
//! Hausdorff metric over finite point sets.
//!
//! Points either carry real coordinates (for the `L1`/`L2`/`LINF` metrics)
//! or are indices into an abstract finite space whose distances come from
//! an explicit table. Table metrics are validated against the metric
//! axioms on construction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default tolerance for point dedup and equality tests.
pub const EPS_DUP: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("point set `{0}` is empty")]
    EmptySet(String),
    #[error(
        "point kind does not match metric kind (coordinate point with table metric or vice versa)"
    )]
    PointKindMismatch,
    #[error("table index {index} out of range for {size}-point table")]
    TableIndexOutOfRange { index: usize, size: usize },
    #[error("invalid distance table: {0}")]
    InvalidTable(String),
    #[error("point set `{label}`: points {first} and {second} coincide within eps_dup")]
    DuplicatePoint {
        label: String,
        first: usize,
        second: usize,
    },
    #[error("point has non-finite coordinate")]
    NonFiniteCoordinate,
}

/// An element of the space: real coordinates, or an index into an
/// abstract finite space equipped with a distance table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Coords(Vec<f64>),
    Index(usize),
}

impl Point {
    pub fn coords(xs: &[f64]) -> Self {
        Point::Coords(xs.to_vec())
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Point::Coords(c) => Some(c.len()),
            Point::Index(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Point::Coords(c) => c.iter().all(|x| x.is_finite()),
            Point::Index(_) => true,
        }
    }

    /// Equality within `eps`: max coordinate difference for coordinate
    /// points, exact match for index points.
    pub fn approx_eq(&self, other: &Point, eps: f64) -> bool {
        match (self, other) {
            (Point::Coords(a), Point::Coords(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= eps)
            }
            (Point::Index(a), Point::Index(b)) => a == b,
            _ => false,
        }
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Point::Coords(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Point::Index(i) => write!(f, "#{i}"),
        }
    }
}

/// The distance to use: a coordinate norm or an explicit table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Metric {
    L1,
    L2,
    Linf,
    Table(DistanceTable),
}

impl Metric {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Metric::L1 => "l1",
            Metric::L2 => "l2",
            Metric::Linf => "linf",
            Metric::Table(_) => "table",
        }
    }
}

/// A symmetric nonnegative matrix with zero diagonal satisfying the
/// triangle inequality; validated on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceTable {
    entries: Vec<Vec<f64>>,
}

impl DistanceTable {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let n = entries.len();
        if n == 0 {
            return Err(MetricError::InvalidTable("table is empty".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::InvalidTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(MetricError::InvalidTable(format!(
                        "entry ({i},{j}) is not finite"
                    )));
                }
                if v < 0.0 {
                    return Err(MetricError::InvalidTable(format!(
                        "entry ({i},{j}) = {v} is negative"
                    )));
                }
            }
            if entries[i][i] != 0.0 {
                return Err(MetricError::InvalidTable(format!(
                    "diagonal entry ({i},{i}) = {} is nonzero",
                    entries[i][i]
                )));
            }
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in (i + 1)..n {
                if (entries[i][j] - entries[j][i]).abs() > 0.0 {
                    return Err(MetricError::InvalidTable(format!(
                        "asymmetric at ({i},{j}): {} vs {}",
                        entries[i][j], entries[j][i]
                    )));
                }
                if entries[i][j] == 0.0 {
                    return Err(MetricError::InvalidTable(format!(
                        "off-diagonal entry ({i},{j}) is zero (indiscernible points)"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if entries[i][j] > entries[i][k] + entries[k][j] + 1e-12 {
                        return Err(MetricError::InvalidTable(format!(
                            "triangle inequality fails: d({i},{j}) > d({i},{k}) + d({k},{j})"
                        )));
                    }
                }
            }
        }
        Ok(DistanceTable { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }
}

/// A finite ordered list of points; order defines tie-breaking in argmin
/// selections. Nonempty and duplicate-free within the dedup tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    label: String,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(
        label: impl Into<String>,
        points: Vec<Point>,
        eps_dup: f64,
    ) -> Result<Self, MetricError> {
        let label = label.into();
        if points.is_empty() {
            return Err(MetricError::EmptySet(label));
        }
        for p in &points {
            if !p.is_finite() {
                return Err(MetricError::NonFiniteCoordinate);
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i].approx_eq(&points[j], eps_dup) {
                    return Err(MetricError::DuplicatePoint {
                        label,
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(PointSet { label, points })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    /// Index of the first point equal to `p` within `eps`, if any.
    pub fn position_of(&self, p: &Point, eps: f64) -> Option<usize> {
        self.points.iter().position(|q| q.approx_eq(p, eps))
    }
}

/// Distance between two points under the given metric.
pub fn dist(p: &Point, q: &Point, m: &Metric) -> Result<f64, MetricError> {
    match (m, p, q) {
        (Metric::Table(t), Point::Index(i), Point::Index(j)) => {
            let n = t.size();
            if *i >= n {
                return Err(MetricError::TableIndexOutOfRange { index: *i, size: n });
            }
            if *j >= n {
                return Err(MetricError::TableIndexOutOfRange { index: *j, size: n });
            }
            Ok(t.entries[*i][*j])
        }
        (Metric::Table(_), _, _) => Err(MetricError::PointKindMismatch),
        (_, Point::Coords(a), Point::Coords(b)) => {
            if a.len() != b.len() {
                return Err(MetricError::DimensionMismatch(a.len(), b.len()));
            }
            Ok(match m {
                Metric::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
                Metric::L2 => a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt(),
                Metric::Linf => a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max),
                Metric::Table(_) => unreachable!(),
            })
        }
        _ => Err(MetricError::PointKindMismatch),
    }
}

/// Minimum distance from `p` to a finite set, with the attaining point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSetDistance {
    pub value: f64,
    /// Index of the first point in set order attaining the minimum.
    pub argmin: usize,
}

/// D(p, S) = min over S; the infimum is attained since S is finite.
/// Ties break to the first point in set order.
pub fn dist_point_set(
    p: &Point,
    s: &PointSet,
    m: &Metric,
) -> Result<PointSetDistance, MetricError> {
    let mut best: Option<PointSetDistance> = None;
    for (i, q) in s.points().iter().enumerate() {
        let d = dist(p, q, m)?;
        match best {
            Some(b) if b.value <= d => {}
            _ => {
                best = Some(PointSetDistance {
                    value: d,
                    argmin: i,
                })
            }
        }
    }
    best.ok_or_else(|| MetricError::EmptySet(s.label().to_string()))
}

/// Like [`dist_point_set`] but over a subset of `s` given by indices.
/// Ties break to the earliest index in `idx` order.
pub fn dist_point_subset(
    p: &Point,
    s: &PointSet,
    idx: &[usize],
    m: &Metric,
) -> Result<PointSetDistance, MetricError> {
    let mut best: Option<PointSetDistance> = None;
    for &i in idx {
        let d = dist(p, s.point(i), m)?;
        match best {
            Some(b) if b.value <= d => {}
            _ => {
                best = Some(PointSetDistance {
                    value: d,
                    argmin: i,
                })
            }
        }
    }
    best.ok_or_else(|| MetricError::EmptySet(format!("{} (subset)", s.label())))
}

/// Minimum distance over all pairs, with one attaining pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetSetDistance {
    pub value: f64,
    /// First attaining pair in (a-order, b-order).
    pub argmin: (usize, usize),
}

/// dist(A, B) = min over A x B.
pub fn dist_set_set(a: &PointSet, b: &PointSet, m: &Metric) -> Result<SetSetDistance, MetricError> {
    let mut best: Option<SetSetDistance> = None;
    for (i, p) in a.points().iter().enumerate() {
        for (j, q) in b.points().iter().enumerate() {
            let d = dist(p, q, m)?;
            match best {
                Some(bst) if bst.value <= d => {}
                _ => {
                    best = Some(SetSetDistance {
                        value: d,
                        argmin: (i, j),
                    })
                }
            }
        }
    }
    best.ok_or_else(|| MetricError::EmptySet("A x B".into()))
}

/// Hausdorff distance: max of the two directed sup-of-min distances.
pub fn hausdorff(a: &PointSet, b: &PointSet, m: &Metric) -> Result<f64, MetricError> {
    let ab = directed_hausdorff(a, b, m)?;
    let ba = directed_hausdorff(b, a, m)?;
    Ok(ab.max(ba))
}

fn directed_hausdorff(a: &PointSet, b: &PointSet, m: &Metric) -> Result<f64, MetricError> {
    let mut sup = 0.0f64;
    for p in a.points() {
        let d = dist_point_set(p, b, m)?.value;
        sup = sup.max(d);
    }
    Ok(sup)
}

/// Hausdorff distance between two subsets of `b` given by index lists.
pub fn hausdorff_subsets(
    b: &PointSet,
    idx1: &[usize],
    idx2: &[usize],
    m: &Metric,
) -> Result<f64, MetricError> {
    if idx1.is_empty() || idx2.is_empty() {
        return Err(MetricError::EmptySet(format!("{} (image)", b.label())));
    }
    let mut sup = 0.0f64;
    for &i in idx1 {
        sup = sup.max(dist_point_subset(b.point(i), b, idx2, m)?.value);
    }
    for &j in idx2 {
        sup = sup.max(dist_point_subset(b.point(j), b, idx1, m)?.value);
    }
    Ok(sup)
}
