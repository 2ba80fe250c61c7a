//! Homotopy relations between generators of a free diagram over a fixed
//! fibration, minimality testing, and extraction of minimal models.
//!
//! Two simplices at the same object are related when one maps to the other
//! under a morphism of the index category up to a fibrewise homotopy
//! relative to the boundary. A free diagram is minimal when no two distinct
//! basis generators are related. Every finite index category satisfies the
//! descending chain condition on its object classes, so the extraction in
//! [`extract_minimal`] only requires the EI property (every endomorphism
//! invertible); over an infinite descending chain of objects a free diagram
//! can fail to admit a minimal retract, which is why those conditions are
//! checked at all.

mod extract;
mod preorder;

pub use extract::{extract_minimal, truncate_diagram_map, ExtractionReport, MinimalModel};
pub use preorder::PreorderedSet;

use crate::budget::{Budget, SearchOutcome};
use crate::diagram::{compute_basis, enumerate_diagram_maps_with, DiagramMap, FreeBasis, ObjSimplex};
use crate::lifting::{prism_homotopy, PrismHomotopy};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MinimalError {
    #[error("simplices live at different objects")]
    ObjectMismatch,
    #[error("simplices have different dimensions")]
    DimensionMismatch,
    #[error("simplices do not share their boundary")]
    BoundaryMismatch,
    #[error("simplices have different images in the base")]
    ImageMismatch,
    #[error("the index category has a non-invertible endomorphism")]
    NotEi,
    #[error("the total diagram is not free")]
    NotFree,
    #[error("the map fails the fibration check up to dimension {0}")]
    NotFibration(usize),
    #[error("truncation {have} is too low, need at least {need}")]
    Truncation { need: usize, have: usize },
    #[error("search budget exhausted during {0}")]
    Exhausted(&'static str),
    #[error("selected generators are not closed under degeneracies")]
    SigmaNotClosed,
    #[error("a lifting step of the retraction was refuted at dimension {0}")]
    LiftRefuted(usize),
    #[error("no retraction target found for a cell of dimension {0}")]
    NoTarget(usize),
    #[error("assembled model failed validation: {0}")]
    Invalid(String),
}

/// Searches for a fibrewise homotopy relative to the boundary between two
/// simplices at the same object, vertex 0 of the interval on `x` and vertex
/// 1 on `y`. The simplices must be comparable: same object and dimension,
/// equal boundaries, equal images under `p`.
pub fn p_homotopic(
    p: &DiagramMap,
    x: &ObjSimplex,
    y: &ObjSimplex,
    budget: &mut Budget,
) -> Result<SearchOutcome<PrismHomotopy>, MinimalError> {
    if x.obj != y.obj {
        return Err(MinimalError::ObjectMismatch);
    }
    if x.dim() != y.dim() {
        return Err(MinimalError::DimensionMismatch);
    }
    let space = p.source.value(x.obj);
    if x.dim() >= 1 {
        for i in 0..=x.dim() {
            if space.face(&x.simplex, i) != space.face(&y.simplex, i) {
                return Err(MinimalError::BoundaryMismatch);
            }
        }
    }
    let pc = &p.components[x.obj];
    if pc.apply(&x.simplex) != pc.apply(&y.simplex) {
        return Err(MinimalError::ImageMismatch);
    }
    Ok(prism_homotopy(space, &x.simplex, &y.simplex, true, Some(pc), budget))
}

/// The precedence preorder on basis generators: `i` precedes `j` when some
/// morphism carries generator `i` to a simplex homotopic to generator `j`
/// fibrewise relative to the boundary.
#[derive(Debug, Clone)]
pub struct SubPPreorder {
    /// Basis generators up to the dimension cap, in canonical order.
    pub elems: Vec<ObjSimplex>,
    /// Reflexive-transitive closure of the found relations.
    pub order: PreorderedSet,
    /// Morphism witnessing each directly found relation.
    pub witnesses: BTreeMap<(usize, usize), usize>,
    /// Pairs left unresolved by budget exhaustion, with the morphism tried.
    pub unknown: Vec<(usize, usize, usize)>,
}

impl SubPPreorder {
    pub fn index_of(&self, x: &ObjSimplex) -> Option<usize> {
        self.elems.binary_search(x).ok()
    }

    /// One flag per element: true when the generator is degenerate.
    pub fn degenerate_flags(&self) -> Vec<bool> {
        self.elems.iter().map(|e| !e.simplex.word.is_empty()).collect()
    }
}

/// Computes the precedence preorder on the basis generators of dimension at
/// most `dim_cap`. Only equidimensional simplices can be related, and a
/// relation needs matching boundaries and base images, so most pairs are
/// screened without searching. Budget exhaustion marks the affected pair
/// unknown and the computation continues.
pub fn sub_p_preorder(
    p: &DiagramMap,
    basis: &FreeBasis,
    dim_cap: usize,
    budget: &mut Budget,
) -> SubPPreorder {
    let x = &p.source;
    assert!(
        dim_cap < x.truncation(),
        "homotopies between cap-dimensional generators need one dimension of room"
    );
    let elems: Vec<ObjSimplex> =
        basis.gens.iter().filter(|g| g.dim() <= dim_cap).cloned().collect();
    let mut bucket: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in elems.iter().enumerate() {
        bucket.entry((e.obj, e.dim())).or_default().push(i);
    }
    let mut pairs = Vec::new();
    let mut witnesses = BTreeMap::new();
    let mut unknown = Vec::new();
    for (i, e) in elems.iter().enumerate() {
        for dst in 0..x.cat.object_count() {
            for f in x.cat.hom(e.obj, dst) {
                let fx = x.action(f).apply(&e.simplex);
                let Some(js) = bucket.get(&(dst, e.dim())) else { continue };
                for &j in js {
                    let y = &elems[j].simplex;
                    if fx == *y {
                        pairs.push((i, j));
                        witnesses.entry((i, j)).or_insert(f);
                        continue;
                    }
                    let space = x.value(dst);
                    let comparable = (fx.dim() == 0
                        || (0..=fx.dim()).all(|k| space.face(&fx, k) == space.face(y, k)))
                        && p.components[dst].apply(&fx) == p.components[dst].apply(y);
                    if !comparable {
                        continue;
                    }
                    match prism_homotopy(space, &fx, y, true, Some(&p.components[dst]), budget) {
                        SearchOutcome::Found(_) => {
                            pairs.push((i, j));
                            witnesses.entry((i, j)).or_insert(f);
                        }
                        SearchOutcome::Refuted => {}
                        SearchOutcome::Exhausted => unknown.push((i, j, f)),
                    }
                }
            }
        }
    }
    let order = PreorderedSet::new(elems.len(), &pairs);
    SubPPreorder { elems, order, witnesses, unknown }
}

/// Outcome of a minimality check up to a dimension cap.
#[derive(Debug, Clone)]
pub struct MinimalityReport {
    pub dim: usize,
    pub elems: Vec<ObjSimplex>,
    /// Ordered pairs of distinct related generators, by element index.
    pub violations: Vec<(usize, usize)>,
    /// Pairs left unresolved by budget exhaustion.
    pub unknown: Vec<(usize, usize, usize)>,
}

impl MinimalityReport {
    /// Minimal with no unresolved pairs.
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.unknown.is_empty()
    }

    pub fn verdict(&self) -> String {
        if !self.violations.is_empty() {
            format!(
                "not minimal: {} related pair(s) of distinct generators up to dimension {}",
                self.violations.len(),
                self.dim
            )
        } else if !self.unknown.is_empty() {
            format!(
                "minimal up to budget: {} pair(s) unresolved up to dimension {}",
                self.unknown.len(),
                self.dim
            )
        } else {
            format!("minimal up to dimension {}", self.dim)
        }
    }
}

/// Checks whether distinct basis generators of the free source of `p` are
/// ever related by precedence, up to dimension `d`.
pub fn is_minimal(
    p: &DiagramMap,
    d: usize,
    budget: &mut Budget,
) -> Result<MinimalityReport, MinimalError> {
    let trunc = p.source.truncation();
    if trunc < d + 1 {
        return Err(MinimalError::Truncation { need: d + 1, have: trunc });
    }
    let basis = match compute_basis(&p.source, budget) {
        SearchOutcome::Found(b) => b,
        SearchOutcome::Refuted => return Err(MinimalError::NotFree),
        SearchOutcome::Exhausted => return Err(MinimalError::Exhausted("basis search")),
    };
    let pre = sub_p_preorder(p, &basis, d, budget);
    let n = pre.elems.len();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && pre.order.leq(i, j) {
                violations.push((i, j));
            }
        }
    }
    Ok(MinimalityReport { dim: d, elems: pre.elems, violations, unknown: pre.unknown })
}

/// Searches for an isomorphism `h` between the sources of two fibrations
/// with `q . h = p`. The caller is responsible for both maps sharing their
/// base. Unequal generator counts refute immediately.
pub fn minimal_iso(
    p: &DiagramMap,
    q: &DiagramMap,
    budget: &mut Budget,
) -> SearchOutcome<DiagramMap> {
    let x = &p.source;
    let y = &q.source;
    let trunc = x.truncation();
    for c in 0..x.cat.object_count() {
        if x.value(c).generator_counts() != y.value(c).generator_counts() {
            return SearchOutcome::Refuted;
        }
    }
    let pins = BTreeMap::new();
    match enumerate_diagram_maps_with(x, y, &pins, Some((q, p)), false, budget) {
        SearchOutcome::Found(maps) => match maps.into_iter().find(|h| h.is_iso_upto(trunc)) {
            Some(h) => SearchOutcome::Found(h),
            None => SearchOutcome::Refuted,
        },
        SearchOutcome::Refuted => SearchOutcome::Refuted,
        SearchOutcome::Exhausted => SearchOutcome::Exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FiniteCategory;
    use crate::diagram::{free_diagram_from, Diagram};
    use crate::simplicial::{
        codiscrete_nerve, group_nerve, standard_simplex, GenId, SimplexRef, SimplicialMap,
    };
    use std::sync::Arc;

    fn over_point(x: Arc<Diagram>) -> DiagramMap {
        let cat = x.cat.clone();
        let trunc = x.truncation();
        let point = Arc::new(Diagram::constant(cat, Arc::new(standard_simplex(0, trunc))));
        let components = (0..x.cat.object_count())
            .map(|c| {
                SimplicialMap::constant(
                    x.value(c).clone(),
                    point.value(c).clone(),
                    SimplexRef::generator(GenId { dim: 0, idx: 0 }),
                )
            })
            .collect();
        DiagramMap::new(x, point, components)
    }

    #[test]
    fn codiscrete_nerve_vertices_are_homotopic_both_ways() {
        let e = Arc::new(codiscrete_nerve(&["e", "g"], 2));
        let cat = Arc::new(FiniteCategory::terminal());
        let p = over_point(Arc::new(Diagram::constant(cat, e.clone())));
        let ve = ObjSimplex::new(0, SimplexRef::generator(e.generator_by_name("[e]").unwrap()));
        let vg = ObjSimplex::new(0, SimplexRef::generator(e.generator_by_name("[g]").unwrap()));
        let mut b = Budget::limited(100_000);
        let fwd = p_homotopic(&p, &ve, &vg, &mut b).unwrap().found().unwrap();
        assert_eq!(fwd.family.len(), 1);
        assert!(p_homotopic(&p, &vg, &ve, &mut b).unwrap().is_found());
    }

    #[test]
    fn identical_simplices_are_p_homotopic() {
        let n = Arc::new(group_nerve(&["e", "g"], 0, &[vec![0, 1], vec![1, 0]], 3));
        let cat = Arc::new(FiniteCategory::terminal());
        let p = over_point(Arc::new(Diagram::constant(cat, n.clone())));
        let g = ObjSimplex::new(0, SimplexRef::generator(n.generator_by_name("[g]").unwrap()));
        let mut b = Budget::limited(1_000_000);
        assert!(p_homotopic(&p, &g, &g, &mut b).unwrap().is_found());
        // Distinct degenerate simplices are never related rel boundary.
        let v = SimplexRef::generator(n.generator_by_name("[o]").unwrap());
        let sv = ObjSimplex::new(0, n.degeneracy(&v, 0));
        assert!(matches!(
            p_homotopic(&p, &sv, &g, &mut b).unwrap(),
            SearchOutcome::Refuted
        ));
    }

    #[test]
    fn group_nerve_over_a_point_is_minimal() {
        let n = Arc::new(group_nerve(&["e", "g"], 0, &[vec![0, 1], vec![1, 0]], 3));
        let cat = Arc::new(FiniteCategory::terminal());
        let p = over_point(Arc::new(Diagram::constant(cat, n)));
        let mut b = Budget::limited(2_000_000);
        let report = is_minimal(&p, 2, &mut b).unwrap();
        assert!(report.passed(), "{}", report.verdict());
    }

    #[test]
    fn contractible_codiscrete_nerve_is_not_minimal() {
        let e = Arc::new(codiscrete_nerve(&["e", "g"], 3));
        let cat = Arc::new(FiniteCategory::terminal());
        let p = over_point(Arc::new(Diagram::constant(cat, e)));
        let mut b = Budget::limited(2_000_000);
        let report = is_minimal(&p, 2, &mut b).unwrap();
        assert!(!report.passed());
        // The two vertices are mutually related.
        let (i, j) = report.violations[0];
        assert_eq!(report.elems[i].dim(), 0);
        assert_eq!(report.elems[j].dim(), 0);
        assert!(report.unknown.is_empty());
    }

    #[test]
    fn free_singleton_basis_has_trivial_preorder() {
        let cat = Arc::new(FiniteCategory::arrow());
        let (x, basis) = free_diagram_from(cat.clone(), 0, &standard_simplex(0, 2));
        let p = over_point(Arc::new(x));
        let mut b = Budget::limited(100_000);
        let pre = sub_p_preorder(&p, &basis, 1, &mut b);
        for i in 0..pre.elems.len() {
            for j in 0..pre.elems.len() {
                assert_eq!(pre.order.leq(i, j), i == j);
            }
        }
        assert!(pre.unknown.is_empty());
    }

    #[test]
    fn injective_chain_diagrams_are_free() {
        // An inclusion of presentations over the arrow category is free:
        // the basis holds the source simplices plus the unreached targets.
        let cat = Arc::new(FiniteCategory::arrow());
        let pt = Arc::new(standard_simplex(0, 2));
        let i1 = Arc::new(standard_simplex(1, 2));
        let incl = SimplicialMap::constant(
            pt.clone(),
            i1.clone(),
            SimplexRef::generator(i1.generator_by_name("0").unwrap()),
        );
        let x = Diagram::new(
            cat,
            vec![pt.clone(), i1.clone()],
            vec![SimplicialMap::identity(pt), SimplicialMap::identity(i1), incl],
        );
        let mut b = Budget::limited(100_000);
        let basis = compute_basis(&x, &mut b).found().unwrap();
        basis.verify(&x).unwrap();
        assert_eq!(basis.gens_of_dim(0).len(), 2);
    }

    #[test]
    fn minimal_iso_finds_identity_and_respects_counts() {
        let n = Arc::new(group_nerve(&["e", "g"], 0, &[vec![0, 1], vec![1, 0]], 2));
        let cat = Arc::new(FiniteCategory::terminal());
        let p = over_point(Arc::new(Diagram::constant(cat.clone(), n)));
        let mut b = Budget::limited(1_000_000);
        let h = minimal_iso(&p, &p, &mut b).found().unwrap();
        assert!(h.same_assignment(&DiagramMap::identity(p.source.clone())));
        // Different fibre cardinality refutes without any search.
        let m = Arc::new(group_nerve(&["e"], 0, &[vec![0]], 2));
        let q = over_point(Arc::new(Diagram::constant(cat, m)));
        assert!(matches!(minimal_iso(&p, &q, &mut b), SearchOutcome::Refuted));
    }
}
