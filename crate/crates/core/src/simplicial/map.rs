//! Maps between presented simplicial sets.
//!
//! A map is stored by its values on generators; the value on a degenerate
//! simplex follows by applying the degeneracy word to the generator image.
//! Compatibility with faces is a property checked by [`SimplicialMap::validate`],
//! not something the representation can express wrongly elsewhere.

use super::{Presentation, SimplexRef};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("generator image missing for dimension {dim} index {idx}")]
    MissingImage { dim: usize, idx: usize },
    #[error("image of generator {name} has dimension {got}, expected {expected}")]
    ImageDimension { name: String, got: usize, expected: usize },
    #[error("face compatibility fails on generator {name} at face {i}")]
    FaceCompatibility { name: String, i: usize },
    #[error("image simplex invalid in target")]
    BadImage,
    #[error("sources or targets of composed maps disagree")]
    ComposeMismatch,
}

/// A simplicial map given by generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    /// `assign[dim][idx]` is the image of the generator.
    assign: Vec<Vec<SimplexRef>>,
}

impl SimplicialMap {
    pub fn new(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        assign: Vec<Vec<SimplexRef>>,
    ) -> Self {
        SimplicialMap { source, target, assign }
    }

    /// The identity on a presentation.
    pub fn identity(p: Arc<Presentation>) -> Self {
        let assign = (0..=p.truncation())
            .map(|d| p.generators(d).map(SimplexRef::generator).collect())
            .collect();
        SimplicialMap { source: p.clone(), target: p, assign }
    }

    /// Image of a generator.
    pub fn generator_image(&self, dim: usize, idx: usize) -> &SimplexRef {
        &self.assign[dim][idx]
    }

    pub fn assignment(&self) -> &Vec<Vec<SimplexRef>> {
        &self.assign
    }

    /// Image of an arbitrary simplex in normal form.
    pub fn apply(&self, r: &SimplexRef) -> SimplexRef {
        let mut img = self.assign[r.base.dim][r.base.idx].clone();
        for &j in r.word.iter().rev() {
            img = self.target.degeneracy(&img, j);
        }
        img
    }

    /// Checks dimensions and face compatibility on every generator.
    pub fn validate(&self) -> Result<(), MapError> {
        for dim in 0..=self.source.truncation() {
            let count = self.source.generator_count(dim);
            if self.assign.len() <= dim || self.assign[dim].len() != count {
                return Err(MapError::MissingImage { dim, idx: count });
            }
            for idx in 0..count {
                let img = &self.assign[dim][idx];
                if self.target.check_ref(img).is_err() {
                    return Err(MapError::BadImage);
                }
                if img.dim() != dim {
                    return Err(MapError::ImageDimension {
                        name: self.source.generator_name(super::GenId { dim, idx }).to_string(),
                        got: img.dim(),
                        expected: dim,
                    });
                }
                if dim >= 1 {
                    let g = SimplexRef::generator(super::GenId { dim, idx });
                    for i in 0..=dim {
                        let lhs = self.apply(&self.source.face(&g, i));
                        let rhs = self.target.face(img, i);
                        if lhs != rhs {
                            return Err(MapError::FaceCompatibility {
                                name: self
                                    .source
                                    .generator_name(super::GenId { dim, idx })
                                    .to_string(),
                                i,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `other` after `self`; sources and targets must line up.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap, MapError> {
        if self.target.as_ref() != other.source.as_ref() {
            return Err(MapError::ComposeMismatch);
        }
        let assign = self
            .assign
            .iter()
            .map(|level| level.iter().map(|r| other.apply(r)).collect())
            .collect();
        Ok(SimplicialMap { source: self.source.clone(), target: other.target.clone(), assign })
    }

    /// Constant map collapsing everything onto the degeneracies of a vertex.
    pub fn constant(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        vertex: SimplexRef,
    ) -> Self {
        assert_eq!(vertex.dim(), 0);
        let assign = (0..=source.truncation())
            .map(|d| {
                (0..source.generator_count(d))
                    .map(|_| {
                        let mut r = vertex.clone();
                        for i in 0..d {
                            r = target.degeneracy(&r, i);
                        }
                        r
                    })
                    .collect()
            })
            .collect();
        SimplicialMap { source, target, assign }
    }

    /// True when the map is a bijection on simplices in every dimension up
    /// to the common truncation.
    pub fn is_iso_upto(&self, dim: usize) -> bool {
        let cap = dim.min(self.source.truncation()).min(self.target.truncation());
        for n in 0..=cap {
            let mut seen = std::collections::BTreeSet::new();
            let source_simplices = self.source.simplices(n);
            if source_simplices.len() != self.target.simplex_count(n) {
                return false;
            }
            for x in source_simplices {
                if !seen.insert(self.apply(&x)) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::super::{circle, standard_simplex, SimplexRef};
    use super::*;

    #[test]
    fn identity_and_composition() {
        let p = Arc::new(standard_simplex(2, 2));
        let id = SimplicialMap::identity(p.clone());
        id.validate().unwrap();
        let comp = id.then(&id).unwrap();
        assert_eq!(comp, id);
        assert!(id.is_iso_upto(2));
    }

    #[test]
    fn edge_onto_circle() {
        let e = Arc::new(standard_simplex(1, 2));
        let c = Arc::new(circle(2));
        let v = SimplexRef::generator(c.generator_by_name("v").unwrap());
        let edge = SimplexRef::generator(c.generator_by_name("e").unwrap());
        // Send both vertices to v and the edge generator to e.
        let assign = vec![vec![v.clone(), v.clone()], vec![edge], vec![]];
        let f = SimplicialMap::new(e.clone(), c.clone(), assign);
        f.validate().unwrap();
        // Degenerate images follow the word.
        let sv = e.degeneracy(&SimplexRef::generator(e.generator_by_name("0").unwrap()), 0);
        assert_eq!(f.apply(&sv), c.degeneracy(&v, 0));
        // A wrong assignment fails validation.
        let bad = SimplicialMap::new(
            e.clone(),
            c.clone(),
            vec![vec![v.clone(), v.clone()], vec![c.degeneracy(&v, 0)], vec![]],
        );
        bad.validate().unwrap();
        // Degenerate edge image is still simplicial here; instead check a
        // dimension mismatch is caught.
        let wrong_dim = SimplicialMap::new(
            e.clone(),
            c.clone(),
            vec![vec![v.clone(), v.clone()], vec![v.clone()], vec![]],
        );
        assert!(wrong_dim.validate().is_err());
    }

    #[test]
    fn constant_map_validates() {
        let src = Arc::new(standard_simplex(2, 2));
        let tgt = Arc::new(circle(2));
        let v = SimplexRef::generator(tgt.generator_by_name("v").unwrap());
        let f = SimplicialMap::constant(src, tgt, v);
        f.validate().unwrap();
    }
}
