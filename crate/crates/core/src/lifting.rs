//! Lifting problems against a fixed target and prism homotopies between
//! simplices of equal dimension.

use crate::budget::{Budget, SearchOutcome};
use crate::category::FiniteCategory;
use crate::diagram::{enumerate_diagram_maps_with, Diagram, DiagramMap};
use crate::simplicial::{
    characteristic_map, standard_simplex, GenId, MapError, Presentation, ProductPresentation,
    SimplexRef, SimplicialMap,
};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A search for a total simplicial map extending prescribed generator
/// images. With `over = (p, q)` every solution `h` must satisfy `p . h = q`,
/// which is how lifts against a fibration are posed.
pub struct LiftingProblem<'a> {
    pub domain: Arc<Presentation>,
    pub target: Arc<Presentation>,
    pub pins: BTreeMap<GenId, SimplexRef>,
    pub over: Option<(&'a SimplicialMap, &'a SimplicialMap)>,
}

impl LiftingProblem<'_> {
    fn run(&self, first_only: bool, budget: &mut Budget) -> SearchOutcome<Vec<SimplicialMap>> {
        let cat = Arc::new(FiniteCategory::terminal());
        let dx = Arc::new(Diagram::constant(cat.clone(), self.domain.clone()));
        let dy = Arc::new(Diagram::constant(cat.clone(), self.target.clone()));
        let pins: BTreeMap<(usize, GenId), SimplexRef> =
            self.pins.iter().map(|(g, r)| ((0, *g), r.clone())).collect();
        let over_pair = self.over.map(|(p, q)| {
            let base = Arc::new(Diagram::constant(cat.clone(), p.target.clone()));
            (
                DiagramMap::new(dy.clone(), base.clone(), vec![p.clone()]),
                DiagramMap::new(dx.clone(), base, vec![q.clone()]),
            )
        });
        let over_ref = over_pair.as_ref().map(|(p, q)| (p, q));
        enumerate_diagram_maps_with(&dx, &dy, &pins, over_ref, first_only, budget).map(|maps| {
            maps.into_iter()
                .map(|m| m.components.into_iter().next().expect("one component"))
                .collect()
        })
    }

    /// The canonically least solution, if any.
    pub fn solve(&self, budget: &mut Budget) -> SearchOutcome<SimplicialMap> {
        match self.run(true, budget) {
            SearchOutcome::Found(v) => match v.into_iter().next() {
                Some(m) => SearchOutcome::Found(m),
                None => SearchOutcome::Refuted,
            },
            SearchOutcome::Refuted => SearchOutcome::Refuted,
            SearchOutcome::Exhausted => SearchOutcome::Exhausted,
        }
    }

    /// All solutions in canonical order.
    pub fn solve_all(&self, budget: &mut Budget) -> SearchOutcome<Vec<SimplicialMap>> {
        self.run(false, budget)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopAssignmentError {
    #[error("generator {0:?} is not a face of any higher generator")]
    Orphan(GenId),
    #[error("expected {expected} top images, got {got}")]
    TopCount { got: usize, expected: usize },
    #[error("domain has generators above the top dimension")]
    AboveTop,
    #[error("propagated images are not simplicial: {0}")]
    NotSimplicial(#[from] MapError),
}

/// Rebuilds a simplicial map from images of the top-dimensional generators
/// alone. Every lower generator must arise as a face of some generator one
/// dimension up; its image is read off that face image by cancelling the
/// degeneracy letters. The result is validated, so inconsistent top data is
/// rejected rather than silently propagated.
pub fn map_from_top_assignment(
    domain: Arc<Presentation>,
    target: Arc<Presentation>,
    top_dim: usize,
    tops: &[SimplexRef],
) -> Result<SimplicialMap, TopAssignmentError> {
    if tops.len() != domain.generator_count(top_dim) {
        return Err(TopAssignmentError::TopCount {
            got: tops.len(),
            expected: domain.generator_count(top_dim),
        });
    }
    for d in top_dim + 1..=domain.truncation() {
        if domain.generator_count(d) != 0 {
            return Err(TopAssignmentError::AboveTop);
        }
    }
    let mut images: Vec<Vec<Option<SimplexRef>>> =
        (0..=domain.truncation()).map(|d| vec![None; domain.generator_count(d)]).collect();
    images[top_dim] = tops.iter().cloned().map(Some).collect();
    for d in (0..top_dim).rev() {
        for g in domain.generators(d) {
            let mut assigned = false;
            'parent: for h in domain.generators(d + 1) {
                for (i, f) in domain.generator_faces(h).iter().enumerate() {
                    if f.base == g {
                        // The face is s_w(g), so the image of g falls out of
                        // d_w applied to the parent's face image.
                        let parent = images[d + 1][h.idx].clone().expect("upper level done");
                        let mut img = target.face(&parent, i);
                        for &j in &f.word {
                            img = target.face(&img, j);
                        }
                        images[d][g.idx] = Some(img);
                        assigned = true;
                        break 'parent;
                    }
                }
            }
            if !assigned {
                return Err(TopAssignmentError::Orphan(g));
            }
        }
    }
    let assign = images
        .into_iter()
        .map(|level| level.into_iter().map(|i| i.expect("all assigned")).collect())
        .collect();
    let map = SimplicialMap::new(domain, target, assign);
    map.validate()?;
    Ok(map)
}

/// A homotopy between two simplices of equal dimension, as a map out of the
/// cylinder over the standard simplex together with its images on the top
/// prisms.
pub struct PrismHomotopy {
    /// Images `z_0 .. z_n` of the top prisms.
    pub family: Vec<SimplexRef>,
    /// The full homotopy out of the cylinder presentation.
    pub map: SimplicialMap,
    /// The cylinder: standard simplex times the interval.
    pub product: ProductPresentation,
}

impl PrismHomotopy {
    /// Evaluates the homotopy at cylinder coordinates.
    pub fn eval(&self, a: &SimplexRef, t: &SimplexRef) -> SimplexRef {
        self.map.apply(&self.product.ref_of(a, t))
    }
}

/// Searches for a homotopy from `x` at vertex 0 to `y` at vertex 1 of the
/// interval. With `rel_boundary` the homotopy is constant on the boundary
/// of the simplex, which requires the ends to share all faces. With `over`
/// the projected homotopy is constant, which requires the ends to share
/// their image. The truncation must exceed the dimension of the ends.
pub fn prism_homotopy(
    space: &Arc<Presentation>,
    x: &SimplexRef,
    y: &SimplexRef,
    rel_boundary: bool,
    over: Option<&SimplicialMap>,
    budget: &mut Budget,
) -> SearchOutcome<PrismHomotopy> {
    let n = x.dim();
    assert_eq!(n, y.dim(), "homotopy ends must have equal dimension");
    let trunc = space.truncation();
    assert!(trunc >= n + 1, "cylinder needs room above the ends");
    if rel_boundary && n >= 1 {
        for i in 0..=n {
            if space.face(x, i) != space.face(y, i) {
                return SearchOutcome::Refuted;
            }
        }
    }
    if let Some(p) = over {
        if p.apply(x) != p.apply(y) {
            return SearchOutcome::Refuted;
        }
    }
    let simplex = Arc::new(standard_simplex(n, trunc));
    let interval = Arc::new(standard_simplex(1, trunc));
    let product = ProductPresentation::build(simplex, interval.clone());
    let xbar = characteristic_map(space.clone(), x);
    let ybar = characteristic_map(space.clone(), y);
    let v0 = interval.generator_by_name("0").expect("interval vertex");
    let v1 = interval.generator_by_name("1").expect("interval vertex");
    let top = GenId { dim: n, idx: 0 };
    let mut pins = BTreeMap::new();
    for g in product.result.all_generators() {
        let (a, t) = product.pair_of(&SimplexRef::generator(g));
        if t.base == v0 {
            pins.insert(g, xbar.apply(&a));
        } else if t.base == v1 {
            pins.insert(g, ybar.apply(&a));
        } else if rel_boundary && a.base != top {
            pins.insert(g, xbar.apply(&a));
        }
    }
    let q_store;
    let over_pair = match over {
        Some(p) => {
            // The projected homotopy: constant at the image of x.
            let assign = (0..=trunc)
                .map(|d| {
                    product
                        .result
                        .generators(d)
                        .map(|g| {
                            let (a, _) = product.pair_of(&SimplexRef::generator(g));
                            p.apply(&xbar.apply(&a))
                        })
                        .collect()
                })
                .collect();
            q_store = SimplicialMap::new(product.result.clone(), p.target.clone(), assign);
            Some((p, &q_store))
        }
        None => None,
    };
    let problem = LiftingProblem {
        domain: product.result.clone(),
        target: space.clone(),
        pins,
        over: over_pair,
    };
    match problem.solve(budget) {
        SearchOutcome::Found(map) => {
            let edge = interval.generator_by_name("01").expect("interval edge");
            let family = (0..=n)
                .map(|j| {
                    let a = SimplexRef { base: top, word: vec![j] };
                    let w: Vec<usize> = (0..=n).rev().filter(|&v| v != j).collect();
                    let t = SimplexRef { base: edge, word: w };
                    map.apply(&product.ref_of(&a, &t))
                })
                .collect();
            SearchOutcome::Found(PrismHomotopy { family, map, product })
        }
        SearchOutcome::Refuted => SearchOutcome::Refuted,
        SearchOutcome::Exhausted => SearchOutcome::Exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{circle, group_nerve};

    #[test]
    fn lifting_respects_pins_and_order() {
        let d0 = Arc::new(standard_simplex(0, 2));
        let d1 = Arc::new(standard_simplex(1, 2));
        let free = LiftingProblem {
            domain: d0.clone(),
            target: d1.clone(),
            pins: BTreeMap::new(),
            over: None,
        };
        let mut b = Budget::limited(100_000);
        let all = free.solve_all(&mut b).found().unwrap();
        assert_eq!(all.len(), 2);
        let first = free.solve(&mut b).found().unwrap();
        assert_eq!(first, all[0]);
        // Pinning both vertices of the interval forces the long edge.
        let d2 = Arc::new(standard_simplex(2, 2));
        let mut pins = BTreeMap::new();
        pins.insert(
            d1.generator_by_name("0").unwrap(),
            SimplexRef::generator(d2.generator_by_name("0").unwrap()),
        );
        pins.insert(
            d1.generator_by_name("1").unwrap(),
            SimplexRef::generator(d2.generator_by_name("2").unwrap()),
        );
        let pinned = LiftingProblem { domain: d1.clone(), target: d2.clone(), pins, over: None };
        let sol = pinned.solve(&mut b).found().unwrap();
        assert_eq!(
            sol.generator_image(1, 0),
            &SimplexRef::generator(d2.generator_by_name("02").unwrap())
        );
    }

    #[test]
    fn top_assignment_rebuilds_the_square() {
        let i1 = Arc::new(standard_simplex(1, 2));
        let prod = ProductPresentation::build(i1.clone(), i1.clone());
        let tops: Vec<SimplexRef> =
            prod.result.generators(2).map(SimplexRef::generator).collect();
        let m =
            map_from_top_assignment(prod.result.clone(), prod.result.clone(), 2, &tops).unwrap();
        assert_eq!(m, SimplicialMap::identity(prod.result.clone()));
        // Swapping the two triangles reconstructs the flip symmetry.
        let swapped: Vec<SimplexRef> = tops.iter().rev().cloned().collect();
        let flip =
            map_from_top_assignment(prod.result.clone(), prod.result.clone(), 2, &swapped).unwrap();
        assert_ne!(flip, m);
        assert_eq!(flip.then(&flip).unwrap(), m);
        // Triangles sent to simplices disagreeing on the shared diagonal are
        // rejected.
        let v0 = SimplexRef::generator(i1.generator_by_name("0").unwrap());
        let v1 = SimplexRef::generator(i1.generator_by_name("1").unwrap());
        let c0 = i1.degeneracy(&i1.degeneracy(&v0, 0), 1);
        let c1 = i1.degeneracy(&i1.degeneracy(&v1, 0), 1);
        assert!(matches!(
            map_from_top_assignment(prod.result.clone(), i1.clone(), 2, &[c0, c1]),
            Err(TopAssignmentError::NotSimplicial(_))
        ));
    }

    #[test]
    fn vertex_homotopy_follows_edges() {
        let i1 = Arc::new(standard_simplex(1, 2));
        let v0 = SimplexRef::generator(i1.generator_by_name("0").unwrap());
        let v1 = SimplexRef::generator(i1.generator_by_name("1").unwrap());
        let mut b = Budget::limited(100_000);
        let h = prism_homotopy(&i1, &v0, &v1, true, None, &mut b).found().unwrap();
        assert_eq!(h.family.len(), 1);
        assert_eq!(i1.face(&h.family[0], 1), v0);
        assert_eq!(i1.face(&h.family[0], 0), v1);
        // No edge points backwards.
        assert!(matches!(
            prism_homotopy(&i1, &v1, &v0, true, None, &mut b),
            SearchOutcome::Refuted
        ));
    }

    #[test]
    fn constant_prism_on_an_edge() {
        let d2 = Arc::new(standard_simplex(2, 3));
        let e = SimplexRef::generator(d2.generator_by_name("01").unwrap());
        let mut b = Budget::limited(1_000_000);
        let h = prism_homotopy(&d2, &e, &e, true, None, &mut b).found().unwrap();
        assert_eq!(h.family.len(), 2);
        // The stored family keeps both ends on its outer faces.
        assert_eq!(d2.face(&h.family[1], 2), e);
        assert_eq!(d2.face(&h.family[0], 0), e);
        h.map.validate().unwrap();
    }

    #[test]
    fn circle_edge_is_not_null_homotopic() {
        let c = Arc::new(circle(3));
        let e = SimplexRef::generator(c.generator_by_name("e").unwrap());
        let v = SimplexRef::generator(c.generator_by_name("v").unwrap());
        let sv = c.degeneracy(&v, 0);
        let mut b = Budget::limited(1_000_000);
        assert!(matches!(
            prism_homotopy(&c, &e, &sv, true, None, &mut b),
            SearchOutcome::Refuted
        ));
    }

    #[test]
    fn group_nerve_loop_is_not_null_homotopic() {
        let n = Arc::new(group_nerve(&["e", "g"], 0, &[vec![0, 1], vec![1, 0]], 3));
        let g = SimplexRef::generator(n.generator_by_name("[g]").unwrap());
        let v = SimplexRef::generator(n.generator_by_name("[o]").unwrap());
        let sv = n.degeneracy(&v, 0);
        let mut b = Budget::limited(1_000_000);
        assert!(matches!(
            prism_homotopy(&n, &g, &sv, true, None, &mut b),
            SearchOutcome::Refuted
        ));
        assert!(prism_homotopy(&n, &sv, &sv, true, None, &mut b).is_found());
    }

    #[test]
    fn fibrewise_needs_matching_projections() {
        let i1 = Arc::new(standard_simplex(1, 2));
        let id = SimplicialMap::identity(i1.clone());
        let v0 = SimplexRef::generator(i1.generator_by_name("0").unwrap());
        let v1 = SimplexRef::generator(i1.generator_by_name("1").unwrap());
        let mut b = Budget::limited(100_000);
        assert!(matches!(
            prism_homotopy(&i1, &v0, &v1, false, Some(&id), &mut b),
            SearchOutcome::Refuted
        ));
        assert!(prism_homotopy(&i1, &v0, &v0, false, Some(&id), &mut b).is_found());
    }
}
