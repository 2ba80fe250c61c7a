//! Objectwise products with a fixed complex and pullbacks over a constant
//! base.

use super::free::FreeBasis;
use super::{Diagram, DiagramMap, ObjSimplex};
use crate::simplicial::{
    presentation_from_levels, LevelwiseData, LevelwiseError, LevelwiseResult, Presentation,
    ProductPresentation, SimplexRef, SimplicialMap,
};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// A diagram multiplied objectwise by a fixed presentation. The value at
/// each object is the binary product, morphisms act on the first coordinate
/// and fix the second.
#[derive(Clone)]
pub struct DiagramProduct {
    pub diagram: Arc<Diagram>,
    /// The diagram factor.
    pub left: Arc<Diagram>,
    /// The fixed factor.
    pub factor: Arc<Presentation>,
    constant_factor: Arc<Diagram>,
    products: Vec<Arc<ProductPresentation>>,
}

/// Builds the objectwise product of a diagram with a fixed presentation.
pub fn external_product(x: Arc<Diagram>, k: Arc<Presentation>) -> DiagramProduct {
    let cat = x.cat.clone();
    let products: Vec<Arc<ProductPresentation>> = if x.is_constant() {
        let p0 = Arc::new(ProductPresentation::build(x.value(0).clone(), k.clone()));
        (0..cat.object_count()).map(|_| p0.clone()).collect()
    } else {
        (0..cat.object_count())
            .map(|o| Arc::new(ProductPresentation::build(x.value(o).clone(), k.clone())))
            .collect()
    };
    let diagram = if x.is_constant() {
        Arc::new(Diagram::constant(cat.clone(), products[0].result.clone()))
    } else {
        let at: Vec<Arc<Presentation>> = products.iter().map(|p| p.result.clone()).collect();
        let idk = SimplicialMap::identity(k.clone());
        let act = (0..cat.morphism_count())
            .map(|m| {
                let mor = cat.morphism(m);
                products[mor.src].map_between(&products[mor.dst], x.action(m), &idk)
            })
            .collect();
        Arc::new(Diagram::new(cat.clone(), at, act))
    };
    let constant_factor = Arc::new(Diagram::constant(cat, k.clone()));
    DiagramProduct { diagram, left: x, factor: k, constant_factor, products }
}

impl DiagramProduct {
    pub fn product_at(&self, obj: usize) -> &Arc<ProductPresentation> {
        &self.products[obj]
    }

    /// Normal form of a coordinate pair at an object.
    pub fn ref_of(&self, obj: usize, a: &SimplexRef, b: &SimplexRef) -> SimplexRef {
        self.products[obj].ref_of(a, b)
    }

    /// Coordinates of a product simplex at an object.
    pub fn pair_of(&self, obj: usize, r: &SimplexRef) -> (SimplexRef, SimplexRef) {
        self.products[obj].pair_of(r)
    }

    /// Projection onto the diagram factor.
    pub fn to_left(&self) -> DiagramMap {
        let components = (0..self.diagram.cat.object_count())
            .map(|o| self.products[o].projection_left())
            .collect();
        DiagramMap::new(self.diagram.clone(), self.left.clone(), components)
    }

    /// Projection onto the fixed factor, as a map to the constant diagram.
    pub fn to_factor(&self) -> DiagramMap {
        let components = (0..self.diagram.cat.object_count())
            .map(|o| self.products[o].projection_right())
            .collect();
        DiagramMap::new(self.diagram.clone(), self.constant_factor.clone(), components)
    }

    /// The constant diagram at the fixed factor.
    pub fn constant_factor(&self) -> &Arc<Diagram> {
        &self.constant_factor
    }

    /// The product of a diagram map and a map of fixed factors.
    pub fn map_between(
        &self,
        other: &DiagramProduct,
        u: &DiagramMap,
        v: &SimplicialMap,
    ) -> DiagramMap {
        let components = (0..self.diagram.cat.object_count())
            .map(|o| self.products[o].map_between(&other.products[o], &u.components[o], v))
            .collect();
        DiagramMap::new(self.diagram.clone(), other.diagram.clone(), components)
    }

    /// The identity on the diagram factor times a map of fixed factors.
    pub fn map_factor(&self, other: &DiagramProduct, v: &SimplicialMap) -> DiagramMap {
        self.map_between(other, &DiagramMap::identity(self.left.clone()), v)
    }

    /// Pairing of a map into the diagram factor with a map into the
    /// constant diagram at the fixed factor.
    pub fn tuple(&self, f: &DiagramMap, g: &DiagramMap) -> DiagramMap {
        let components = (0..self.diagram.cat.object_count())
            .map(|o| self.products[o].tuple(&f.components[o], &g.components[o]))
            .collect();
        DiagramMap::new(f.source.clone(), self.diagram.clone(), components)
    }
}

/// Level data of one object value of a pullback: pairs of equal-dimension
/// simplices with matching images in the base.
struct PullbackLevels<'a> {
    a: &'a Presentation,
    xc: &'a Presentation,
    alpha: &'a SimplicialMap,
    pc: &'a SimplicialMap,
}

impl LevelwiseData for PullbackLevels<'_> {
    type Elem = (SimplexRef, SimplexRef);

    fn truncation(&self) -> usize {
        self.a.truncation()
    }

    fn level(&self, n: usize) -> Vec<Self::Elem> {
        let mut out = Vec::new();
        for u in self.a.simplices(n) {
            let bu = self.alpha.apply(&u);
            for v in self.xc.simplices(n) {
                if self.pc.apply(&v) == bu {
                    out.push((u.clone(), v));
                }
            }
        }
        out
    }

    fn face(&self, _n: usize, i: usize, e: &Self::Elem) -> Self::Elem {
        (self.a.face(&e.0, i), self.xc.face(&e.1, i))
    }

    fn degeneracy(&self, _n: usize, i: usize, e: &Self::Elem) -> Self::Elem {
        (self.a.degeneracy(&e.0, i), self.xc.degeneracy(&e.1, i))
    }

    fn label(&self, _n: usize, e: &Self::Elem) -> String {
        format!("({},{})", self.a.display_ref(&e.0), self.xc.display_ref(&e.1))
    }
}

/// A pullback of a diagram map to a constant diagram along a simplicial map
/// into the shared base value.
pub struct Pullback {
    pub diagram: Arc<Diagram>,
    /// Projection to the constant diagram at the pulled-back corner.
    pub to_corner: DiagramMap,
    /// Projection to the diagram the pullback was taken from.
    pub to_total: DiagramMap,
    alpha: SimplicialMap,
    p: DiagramMap,
    results: Vec<LevelwiseResult<(SimplexRef, SimplexRef)>>,
}

/// Pulls `p : X -> const B` back along `alpha : A -> B`. The result has
/// value `A x_B X(c)` at `c`, with morphisms acting on the second
/// coordinate.
pub fn pullback_constant_base(
    alpha: &SimplicialMap,
    p: &DiagramMap,
) -> Result<Pullback, LevelwiseError> {
    assert!(p.target.is_constant(), "base of the pullback must be constant");
    assert_eq!(
        alpha.target.as_ref(),
        p.target.value(0).as_ref(),
        "both maps must land in the same base"
    );
    let x = p.source.clone();
    let cat = x.cat.clone();
    let trunc = x.truncation();
    assert_eq!(alpha.source.truncation(), trunc, "truncations must agree");
    let mut results = Vec::with_capacity(cat.object_count());
    for c in 0..cat.object_count() {
        let data = PullbackLevels {
            a: alpha.source.as_ref(),
            xc: x.value(c).as_ref(),
            alpha,
            pc: &p.components[c],
        };
        results.push(presentation_from_levels(&data)?);
    }
    let at: Vec<Arc<Presentation>> =
        results.iter().map(|r| Arc::new(r.presentation.clone())).collect();
    let act = (0..cat.morphism_count())
        .map(|m| {
            let mor = cat.morphism(m);
            let assign = (0..=trunc)
                .map(|n| {
                    results[mor.src].gen_elem[n]
                        .iter()
                        .map(|(u, v)| {
                            let img = (u.clone(), x.action(m).apply(v));
                            results[mor.dst].normal_form(n, &img).clone()
                        })
                        .collect()
                })
                .collect();
            SimplicialMap::new(at[mor.src].clone(), at[mor.dst].clone(), assign)
        })
        .collect();
    let diagram = Arc::new(Diagram::new(cat.clone(), at.clone(), act));
    let corner = Arc::new(Diagram::constant(cat.clone(), alpha.source.clone()));
    let to_corner_components = (0..cat.object_count())
        .map(|c| {
            let assign = (0..=trunc)
                .map(|n| results[c].gen_elem[n].iter().map(|(u, _)| u.clone()).collect())
                .collect();
            SimplicialMap::new(at[c].clone(), alpha.source.clone(), assign)
        })
        .collect();
    let to_total_components = (0..cat.object_count())
        .map(|c| {
            let assign = (0..=trunc)
                .map(|n| results[c].gen_elem[n].iter().map(|(_, v)| v.clone()).collect())
                .collect();
            SimplicialMap::new(at[c].clone(), x.value(c).clone(), assign)
        })
        .collect();
    let to_corner = DiagramMap::new(diagram.clone(), corner, to_corner_components);
    let to_total = DiagramMap::new(diagram.clone(), x.clone(), to_total_components);
    Ok(Pullback { diagram, to_corner, to_total, alpha: alpha.clone(), p: p.clone(), results })
}

impl Pullback {
    /// Coordinates of a pullback simplex at an object.
    pub fn coords(&self, obj: usize, r: &SimplexRef) -> (SimplexRef, SimplexRef) {
        let (u0, v0) = &self.results[obj].gen_elem[r.base.dim][r.base.idx];
        let ap = &self.alpha.source;
        let xp = self.to_total.target.value(obj);
        let mut u = u0.clone();
        let mut v = v0.clone();
        for &j in r.word.iter().rev() {
            u = ap.degeneracy(&u, j);
            v = xp.degeneracy(&v, j);
        }
        (u, v)
    }

    /// Normal form of a coordinate pair, which must have matching images.
    pub fn ref_of(&self, obj: usize, u: &SimplexRef, v: &SimplexRef) -> SimplexRef {
        debug_assert_eq!(u.dim(), v.dim());
        self.results[obj].normal_form(u.dim(), &(u.clone(), v.clone())).clone()
    }

    /// Transfers a basis of the pulled-back diagram: basis cells are pairs
    /// of a corner simplex and a basis cell with equal base image.
    pub fn transfer_basis(&self, basis: &FreeBasis) -> FreeBasis {
        let ap = &self.alpha.source;
        let mut gens = BTreeSet::new();
        for b in &basis.gens {
            let pb = self.p.components[b.obj].apply(&b.simplex);
            for u in ap.simplices(b.dim()) {
                if self.alpha.apply(&u) == pb {
                    gens.insert(ObjSimplex::new(b.obj, self.ref_of(b.obj, &u, &b.simplex)));
                }
            }
        }
        let mut witness = BTreeMap::new();
        for n in 0..=self.diagram.truncation() {
            for s in self.diagram.simplices(n) {
                let (u, v) = self.coords(s.obj, &s.simplex);
                let w = basis.decompose(&ObjSimplex::new(s.obj, v));
                let cell = ObjSimplex::new(w.0.obj, self.ref_of(w.0.obj, &u, &w.0.simplex));
                witness.insert(s.clone(), (cell, w.1));
            }
        }
        FreeBasis { gens, witness }
    }
}

#[cfg(test)]
mod tests {
    use super::super::free::{compute_basis, free_diagram_from};
    use super::*;
    use crate::budget::Budget;
    use crate::category::FiniteCategory;
    use crate::simplicial::standard_simplex;

    #[test]
    fn product_with_interval_validates() {
        let cat = Arc::new(FiniteCategory::arrow());
        let x = Arc::new(Diagram::constant(cat, Arc::new(standard_simplex(1, 2))));
        let k = Arc::new(standard_simplex(1, 2));
        let prod = external_product(x, k);
        prod.diagram.validate().unwrap();
        assert_eq!(prod.diagram.value(0).generator_counts(), vec![4, 5, 2]);
        prod.to_left().validate().unwrap();
        prod.to_factor().validate().unwrap();
    }

    #[test]
    fn product_of_free_diagram_validates() {
        let cat = Arc::new(FiniteCategory::arrow());
        let (x, _) = free_diagram_from(cat, 0, &standard_simplex(1, 2));
        let prod = external_product(Arc::new(x), Arc::new(standard_simplex(1, 2)));
        prod.diagram.validate().unwrap();
        prod.to_left().validate().unwrap();
        prod.to_factor().validate().unwrap();
    }

    #[test]
    fn pullback_along_vertex_is_fibre() {
        let cat = Arc::new(FiniteCategory::terminal());
        let b = Arc::new(standard_simplex(1, 2));
        let x = Arc::new(Diagram::constant(cat, b.clone()));
        let a = Arc::new(standard_simplex(0, 2));
        let v0 = SimplexRef::generator(b.generator_by_name("0").unwrap());
        let alpha = SimplicialMap::new(a, b, vec![vec![v0], vec![], vec![]]);
        alpha.validate().unwrap();
        let p = DiagramMap::identity(x);
        let pb = pullback_constant_base(&alpha, &p).unwrap();
        pb.diagram.validate().unwrap();
        // Only the degeneracy tower of vertex 0 matches, so the pullback is
        // a point.
        assert_eq!(pb.diagram.value(0).generator_counts(), vec![1, 0, 0]);
        pb.to_corner.validate().unwrap();
        pb.to_total.validate().unwrap();
    }

    #[test]
    fn pullback_over_point_is_product() {
        let cat = Arc::new(FiniteCategory::arrow());
        let pt = Arc::new(standard_simplex(0, 2));
        let i1 = Arc::new(standard_simplex(1, 2));
        let x = Arc::new(Diagram::constant(cat.clone(), i1.clone()));
        let base = Arc::new(Diagram::constant(cat.clone(), pt.clone()));
        let v = SimplexRef::generator(pt.generator_by_name("0").unwrap());
        let alpha = SimplicialMap::constant(i1.clone(), pt.clone(), v.clone());
        let to_pt = SimplicialMap::constant(i1.clone(), pt.clone(), v);
        let p = DiagramMap::new(x.clone(), base, vec![to_pt.clone(), to_pt]);
        p.validate().unwrap();
        let pb = pullback_constant_base(&alpha, &p).unwrap();
        pb.diagram.validate().unwrap();
        // Over the point the pullback is the plain product of the corners.
        let square = ProductPresentation::build(i1.clone(), i1.clone());
        assert_eq!(
            pb.diagram.value(0).generator_counts(),
            square.result.generator_counts()
        );
        let basis = compute_basis(&x, &mut Budget::limited(1_000_000)).found().unwrap();
        let transferred = pb.transfer_basis(&basis);
        transferred.verify(&pb.diagram).unwrap();
        let expected: usize =
            basis.gens.iter().map(|g| i1.simplex_count(g.dim())).sum();
        assert_eq!(transferred.gens.len(), expected);
    }
}
