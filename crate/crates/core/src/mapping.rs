//! Set-valued mappings between finite point sets and the `alpha`
//! admissibility weight attached to them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MappingError {
    #[error("mapping covers {got} points but the domain has {expected}")]
    NotTotal { got: usize, expected: usize },
    #[error("image of domain point {0} is empty")]
    EmptyImage(usize),
    #[error("image of domain point {point} references index {index}, but the codomain has {size} points")]
    ImageIndexOutOfRange {
        point: usize,
        index: usize,
        size: usize,
    },
    #[error("alpha table must be square over the domain ({got} vs {expected})")]
    AlphaTableShape { got: usize, expected: usize },
    #[error("alpha value at ({0},{1}) is negative or not finite")]
    AlphaValueInvalid(usize, usize),
}

/// For each point of the domain, a nonempty finite subset of the codomain
/// given as indices into the codomain's point list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiMap {
    images: Vec<Vec<usize>>,
}

impl MultiMap {
    /// Validates totality, nonempty images, and index ranges.
    pub fn new(
        images: Vec<Vec<usize>>,
        domain_size: usize,
        codomain_size: usize,
    ) -> Result<Self, MappingError> {
        if images.len() != domain_size {
            return Err(MappingError::NotTotal {
                got: images.len(),
                expected: domain_size,
            });
        }
        for (i, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(MappingError::EmptyImage(i));
            }
            for &j in img {
                if j >= codomain_size {
                    return Err(MappingError::ImageIndexOutOfRange {
                        point: i,
                        index: j,
                        size: codomain_size,
                    });
                }
            }
        }
        Ok(MultiMap { images })
    }

    /// Wraps a single-valued map as singleton images.
    pub fn from_single_valued(
        map: &[usize],
        domain_size: usize,
        codomain_size: usize,
    ) -> Result<Self, MappingError> {
        Self::new(
            map.iter().map(|&j| vec![j]).collect(),
            domain_size,
            codomain_size,
        )
    }

    pub fn image(&self, i: usize) -> &[usize] {
        &self.images[i]
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    /// True when every image is a singleton.
    pub fn is_single_valued(&self) -> bool {
        self.images.iter().all(|img| img.len() == 1)
    }
}

/// alpha : A x A -> [0, oo), either a constant or an explicit table
/// over domain indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AlphaMap {
    Constant(f64),
    Table(Vec<Vec<f64>>),
}

impl AlphaMap {
    pub fn validate(&self, domain_size: usize) -> Result<(), MappingError> {
        match self {
            AlphaMap::Constant(c) => {
                if !c.is_finite() || *c < 0.0 {
                    return Err(MappingError::AlphaValueInvalid(0, 0));
                }
            }
            AlphaMap::Table(t) => {
                if t.len() != domain_size {
                    return Err(MappingError::AlphaTableShape {
                        got: t.len(),
                        expected: domain_size,
                    });
                }
                for (i, row) in t.iter().enumerate() {
                    if row.len() != domain_size {
                        return Err(MappingError::AlphaTableShape {
                            got: row.len(),
                            expected: domain_size,
                        });
                    }
                    for (j, &v) in row.iter().enumerate() {
                        if !v.is_finite() || v < 0.0 {
                            return Err(MappingError::AlphaValueInvalid(i, j));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        match self {
            AlphaMap::Constant(c) => *c,
            AlphaMap::Table(t) => t[i][j],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multimap_validates_shape() {
        assert!(MultiMap::new(vec![vec![0], vec![1]], 2, 2).is_ok());
        assert!(matches!(
            MultiMap::new(vec![vec![0]], 2, 2),
            Err(MappingError::NotTotal { .. })
        ));
        assert!(matches!(
            MultiMap::new(vec![vec![0], vec![]], 2, 2),
            Err(MappingError::EmptyImage(1))
        ));
        assert!(matches!(
            MultiMap::new(vec![vec![0], vec![2]], 2, 2),
            Err(MappingError::ImageIndexOutOfRange {
                point: 1,
                index: 2,
                ..
            })
        ));
    }

    #[test]
    fn singleton_wrapper_matches_direct_construction() {
        let m = MultiMap::from_single_valued(&[1, 0], 2, 2).unwrap();
        assert_eq!(m.images(), &[vec![1], vec![0]]);
        assert!(m.is_single_valued());
    }

    #[test]
    fn alpha_validation() {
        assert!(AlphaMap::Constant(1.1).validate(3).is_ok());
        assert!(AlphaMap::Constant(-0.5).validate(3).is_err());
        assert!(AlphaMap::Table(vec![vec![1.0, 0.0], vec![0.0, 1.0]])
            .validate(2)
            .is_ok());
        assert!(AlphaMap::Table(vec![vec![1.0]]).validate(2).is_err());
        assert!(AlphaMap::Table(vec![vec![1.0, f64::NAN], vec![0.0, 1.0]])
            .validate(2)
            .is_err());
    }
}
