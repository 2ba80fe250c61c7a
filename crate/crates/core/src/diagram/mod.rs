//! Diagrams of truncated simplicial sets indexed by a finite category.
//!
//! A diagram assigns a presentation to every object and a simplicial map to
//! every morphism, functorially. Simplices of the diagram are simplices of
//! some object value, tagged with that object; morphisms of the index
//! category act on them. Everything is levelwise: faces and degeneracies
//! never change the object tag, morphism action never changes dimension.

mod free;
mod mapping;
mod ops;

pub use free::{
    attach_cell, compute_basis, free_diagram_from, BasisError, FreeBasis, SubDiagram,
    SubDiagramError,
};
pub use mapping::{
    diagram_homotopy, diagram_homotopy_over, enumerate_diagram_maps,
    enumerate_diagram_maps_with, mapping_space, MappingSpace,
};
pub use ops::{external_product, pullback_constant_base, DiagramProduct, Pullback};

use crate::category::FiniteCategory;
use crate::simplicial::{Presentation, SimplexRef, SimplicialMap};
use std::sync::Arc;

/// A simplex of a diagram: an object index plus a simplex of its value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObjSimplex {
    pub obj: usize,
    pub simplex: SimplexRef,
}

impl ObjSimplex {
    pub fn new(obj: usize, simplex: SimplexRef) -> Self {
        ObjSimplex { obj, simplex }
    }

    pub fn dim(&self) -> usize {
        self.simplex.dim()
    }
}

impl PartialOrd for ObjSimplex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ObjSimplex {
    /// Canonical order: dimension, then object, then simplex.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.obj.cmp(&other.obj))
            .then_with(|| self.simplex.cmp(&other.simplex))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("diagram has {got} object values, category has {expected} objects")]
    ObjectCount { got: usize, expected: usize },
    #[error("diagram has {got} morphism maps, category has {expected} morphisms")]
    MorphismCount { got: usize, expected: usize },
    #[error("object values disagree on truncation")]
    MixedTruncation,
    #[error("map for morphism {0} has wrong endpoints")]
    MapEndpoints(usize),
    #[error("map for morphism {name} is not simplicial: {source}")]
    MapNotSimplicial { name: String, source: crate::simplicial::MapError },
    #[error("identity morphism {0} does not act as the identity")]
    IdentityAction(usize),
    #[error("functoriality fails on composable pair ({g}, {f})")]
    Functoriality { g: usize, f: usize },
}

/// A functor from a finite category to truncated simplicial sets.
#[derive(Debug, Clone)]
pub struct Diagram {
    pub cat: Arc<FiniteCategory>,
    truncation: usize,
    at: Vec<Arc<Presentation>>,
    act: Vec<SimplicialMap>,
    constant: bool,
}

impl Diagram {
    pub fn new(
        cat: Arc<FiniteCategory>,
        at: Vec<Arc<Presentation>>,
        act: Vec<SimplicialMap>,
    ) -> Self {
        let truncation = at.first().map(|p| p.truncation()).unwrap_or(0);
        Diagram { cat, truncation, at, act, constant: false }
    }

    /// The constant diagram at a single presentation: one shared value,
    /// identity action everywhere.
    pub fn constant(cat: Arc<FiniteCategory>, p: Arc<Presentation>) -> Self {
        let at: Vec<Arc<Presentation>> = (0..cat.object_count()).map(|_| p.clone()).collect();
        let act = (0..cat.morphism_count()).map(|_| SimplicialMap::identity(p.clone())).collect();
        Diagram { cat, truncation: p.truncation(), at, act, constant: true }
    }

    /// The empty diagram at a given truncation.
    pub fn empty(cat: Arc<FiniteCategory>, truncation: usize) -> Self {
        let p = Arc::new(Presentation::new(truncation));
        let mut d = Diagram::constant(cat, p);
        d.constant = false;
        d
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    pub fn value(&self, obj: usize) -> &Arc<Presentation> {
        &self.at[obj]
    }

    pub fn action(&self, morphism: usize) -> &SimplicialMap {
        &self.act[morphism]
    }

    /// Applies a morphism of the index category to a tagged simplex.
    pub fn apply_mor(&self, morphism: usize, x: &ObjSimplex) -> ObjSimplex {
        let m = self.cat.morphism(morphism);
        debug_assert_eq!(m.src, x.obj);
        ObjSimplex { obj: m.dst, simplex: self.act[morphism].apply(&x.simplex) }
    }

    pub fn face(&self, x: &ObjSimplex, i: usize) -> ObjSimplex {
        ObjSimplex { obj: x.obj, simplex: self.at[x.obj].face(&x.simplex, i) }
    }

    pub fn degeneracy(&self, x: &ObjSimplex, i: usize) -> ObjSimplex {
        ObjSimplex { obj: x.obj, simplex: self.at[x.obj].degeneracy(&x.simplex, i) }
    }

    /// All simplices of dimension `n` across objects, canonical order.
    pub fn simplices(&self, n: usize) -> Vec<ObjSimplex> {
        let mut out = Vec::new();
        for obj in 0..self.cat.object_count() {
            for s in self.at[obj].simplices(n) {
                out.push(ObjSimplex { obj, simplex: s });
            }
        }
        out.sort();
        out
    }

    pub fn simplex_count(&self, n: usize) -> usize {
        (0..self.cat.object_count()).map(|o| self.at[o].simplex_count(n)).sum()
    }

    /// Structural and functorial validation.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let nob = self.cat.object_count();
        let nmor = self.cat.morphism_count();
        if self.at.len() != nob {
            return Err(DiagramError::ObjectCount { got: self.at.len(), expected: nob });
        }
        if self.act.len() != nmor {
            return Err(DiagramError::MorphismCount { got: self.act.len(), expected: nmor });
        }
        if self.at.iter().any(|p| p.truncation() != self.truncation) {
            return Err(DiagramError::MixedTruncation);
        }
        for m in 0..nmor {
            let mor = self.cat.morphism(m);
            if self.act[m].source.as_ref() != self.at[mor.src].as_ref()
                || self.act[m].target.as_ref() != self.at[mor.dst].as_ref()
            {
                return Err(DiagramError::MapEndpoints(m));
            }
            self.act[m].validate().map_err(|e| DiagramError::MapNotSimplicial {
                name: mor.name.clone(),
                source: e,
            })?;
        }
        for o in 0..nob {
            let id = self.cat.identity(o);
            if self.act[id] != SimplicialMap::identity(self.at[o].clone()) {
                return Err(DiagramError::IdentityAction(id));
            }
        }
        for g in 0..nmor {
            for f in 0..nmor {
                if let Some(gf) = self.cat.compose(g, f) {
                    let composite = self.act[f].then(&self.act[g]).expect("endpoints line up");
                    if composite != self.act[gf] {
                        return Err(DiagramError::Functoriality { g, f });
                    }
                }
            }
        }
        Ok(())
    }

    /// Drops all generators above dimension `d`.
    pub fn truncate(&self, d: usize) -> Diagram {
        if d >= self.truncation {
            return self.clone();
        }
        let at: Vec<Arc<Presentation>> =
            self.at.iter().map(|p| Arc::new(truncate_presentation(p, d))).collect();
        let act = (0..self.cat.morphism_count())
            .map(|m| {
                let mor = self.cat.morphism(m);
                let assign = (0..=d)
                    .map(|dim| {
                        (0..self.at[mor.src].generator_count(dim))
                            .map(|idx| self.act[m].generator_image(dim, idx).clone())
                            .collect()
                    })
                    .collect();
                SimplicialMap::new(at[mor.src].clone(), at[mor.dst].clone(), assign)
            })
            .collect();
        Diagram {
            cat: self.cat.clone(),
            truncation: d,
            at,
            act,
            constant: self.constant,
        }
    }
}

/// Copy of a presentation with generators above `d` removed.
pub(crate) fn truncate_presentation(p: &Presentation, d: usize) -> Presentation {
    p.truncate(d)
}

/// A natural transformation between diagrams over the same index category.
#[derive(Debug, Clone)]
pub struct DiagramMap {
    pub source: Arc<Diagram>,
    pub target: Arc<Diagram>,
    pub components: Vec<SimplicialMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramMapError {
    #[error("component for object {0} missing or has wrong endpoints")]
    Component(usize),
    #[error("component for object {obj} is not simplicial: {source}")]
    NotSimplicial { obj: usize, source: crate::simplicial::MapError },
    #[error("naturality square fails at morphism {0}")]
    Naturality(usize),
    #[error("source and target live over different categories")]
    CategoryMismatch,
}

impl DiagramMap {
    pub fn new(source: Arc<Diagram>, target: Arc<Diagram>, components: Vec<SimplicialMap>) -> Self {
        DiagramMap { source, target, components }
    }

    pub fn identity(d: Arc<Diagram>) -> Self {
        let components = (0..d.cat.object_count())
            .map(|o| SimplicialMap::identity(d.value(o).clone()))
            .collect();
        DiagramMap { source: d.clone(), target: d, components }
    }

    pub fn apply(&self, x: &ObjSimplex) -> ObjSimplex {
        ObjSimplex { obj: x.obj, simplex: self.components[x.obj].apply(&x.simplex) }
    }

    pub fn validate(&self) -> Result<(), DiagramMapError> {
        if self.source.cat.as_ref() != self.target.cat.as_ref() {
            return Err(DiagramMapError::CategoryMismatch);
        }
        let nob = self.source.cat.object_count();
        if self.components.len() != nob {
            return Err(DiagramMapError::Component(self.components.len()));
        }
        for o in 0..nob {
            let c = &self.components[o];
            if c.source.as_ref() != self.source.value(o).as_ref()
                || c.target.as_ref() != self.target.value(o).as_ref()
            {
                return Err(DiagramMapError::Component(o));
            }
            c.validate().map_err(|e| DiagramMapError::NotSimplicial { obj: o, source: e })?;
        }
        for m in 0..self.source.cat.morphism_count() {
            let mor = self.source.cat.morphism(m);
            let lhs = self.source.action(m).then(&self.components[mor.dst]).unwrap();
            let rhs = self.components[mor.src].then(self.target.action(m)).unwrap();
            if lhs != rhs {
                return Err(DiagramMapError::Naturality(m));
            }
        }
        Ok(())
    }

    pub fn then(&self, other: &DiagramMap) -> DiagramMap {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(f, g)| f.then(g).expect("endpoints line up"))
            .collect();
        DiagramMap { source: self.source.clone(), target: other.target.clone(), components }
    }

    /// Componentwise equality of assignments.
    pub fn same_assignment(&self, other: &DiagramMap) -> bool {
        self.components.len() == other.components.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.assignment() == b.assignment())
    }

    /// Levelwise bijectivity up to `dim`.
    pub fn is_iso_upto(&self, dim: usize) -> bool {
        self.components.iter().all(|c| c.is_iso_upto(dim))
    }
}

/// Levelwise Kan fibration check for a diagram map: each component must
/// have the lifting property in dimensions `1 ..= d`.
pub fn is_fibration_upto(
    p: &DiagramMap,
    d: usize,
    budget: &mut crate::budget::Budget,
) -> Result<crate::simplicial::FibrationReport, crate::budget::BudgetExhausted> {
    let mut total = crate::simplicial::FibrationReport {
        dim_checked: usize::MAX,
        instances: 0,
        failure: None,
    };
    for c in &p.components {
        let r = crate::simplicial::is_kan_fibration_upto(c, d, budget)?;
        total.dim_checked = total.dim_checked.min(r.dim_checked);
        total.instances += r.instances;
        if total.failure.is_none() {
            total.failure = r.failure;
        }
        if total.failure.is_some() {
            break;
        }
    }
    if total.dim_checked == usize::MAX {
        total.dim_checked = 0;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::standard_simplex;

    #[test]
    fn constant_diagram_validates() {
        let cat = Arc::new(FiniteCategory::arrow());
        let p = Arc::new(standard_simplex(1, 2));
        let d = Diagram::constant(cat, p);
        d.validate().unwrap();
        assert!(d.is_constant());
        assert_eq!(d.simplex_count(0), 4);
    }

    #[test]
    fn truncate_drops_generators() {
        let cat = Arc::new(FiniteCategory::terminal());
        let p = Arc::new(standard_simplex(2, 2));
        let d = Diagram::constant(cat, p);
        let t = d.truncate(1);
        t.validate().unwrap();
        assert_eq!(t.value(0).generator_counts(), vec![3, 3]);
    }

    #[test]
    fn identity_map_validates() {
        let cat = Arc::new(FiniteCategory::z2());
        let p = Arc::new(standard_simplex(0, 2));
        let d = Arc::new(Diagram::constant(cat, p));
        let id = DiagramMap::identity(d);
        id.validate().unwrap();
        assert!(id.is_iso_upto(2));
    }
}
