//! Twisted cartesian products: the total diagram whose zeroth face is
//! corrected by a twisting function, the principal case, and the
//! associated-bundle quotient.

use std::sync::Arc;

use super::group::{GroupAction, SimplicialGroup};
use super::twisting::TwistingFunction;
use super::BundleError;
use crate::category::FiniteCategory;
use crate::diagram::{Diagram, DiagramMap};
use crate::simplicial::{
    presentation_from_levels, LevelwiseData, LevelwiseResult, Presentation, SimplexRef,
    SimplicialMap,
};

/// A twisted cartesian product together with its projection to the
/// constant diagram on the base.
#[derive(Clone)]
pub struct Tcp {
    pub twisting: TwistingFunction,
    pub action: GroupAction,
    pub total: Arc<Diagram>,
    pub projection: DiagramMap,
    tables: Vec<LevelwiseResult<(SimplexRef, SimplexRef)>>,
}

fn pair_label(base: &Presentation, fibre: &Presentation, e: &(SimplexRef, SimplexRef)) -> String {
    format!("({}|{})", base.display_ref(&e.0), fibre.display_ref(&e.1))
}

struct TcpLevels<'a> {
    t: &'a TwistingFunction,
    action: &'a GroupAction,
    c: usize,
}

impl TcpLevels<'_> {
    fn fibre(&self) -> &Presentation {
        self.action.space.value(self.c)
    }
}

impl LevelwiseData for TcpLevels<'_> {
    type Elem = (SimplexRef, SimplexRef);

    fn truncation(&self) -> usize {
        self.t.base.truncation()
    }

    fn level(&self, n: usize) -> Vec<Self::Elem> {
        let xs = self.fibre().simplices(n);
        self.t
            .base
            .simplices(n)
            .into_iter()
            .flat_map(|b| xs.iter().map(move |x| (b.clone(), x.clone())))
            .collect()
    }

    fn face(&self, n: usize, i: usize, e: &Self::Elem) -> Self::Elem {
        let b = self.t.base.face(&e.0, i);
        let x = self.fibre().face(&e.1, i);
        if i == 0 {
            (b, self.action.apply(self.c, n - 1, self.t.value(&e.0), &x))
        } else {
            (b, x)
        }
    }

    fn degeneracy(&self, _n: usize, i: usize, e: &Self::Elem) -> Self::Elem {
        (self.t.base.degeneracy(&e.0, i), self.fibre().degeneracy(&e.1, i))
    }

    fn label(&self, _n: usize, e: &Self::Elem) -> String {
        pair_label(&self.t.base, self.fibre(), e)
    }
}

/// Builds the twisted cartesian product of the base of `t` with the space
/// acted on by `action`.
pub fn build_tcp(t: &TwistingFunction, action: &GroupAction) -> Result<Tcp, BundleError> {
    let trunc = t.base.truncation();
    if action.space.truncation() != trunc {
        return Err(BundleError::Truncation { need: trunc, have: action.space.truncation() });
    }
    if trunc >= 1 && !t.group.same_tables_upto(&action.group, trunc - 1) {
        return Err(BundleError::Mismatch);
    }
    let cat = action.space.cat.clone();
    let objects = cat.object_count();
    let tables: Vec<LevelwiseResult<(SimplexRef, SimplexRef)>> = (0..objects)
        .map(|c| presentation_from_levels(&TcpLevels { t, action, c }))
        .collect::<Result<_, _>>()?;
    let at: Vec<Arc<Presentation>> =
        tables.iter().map(|r| Arc::new(r.presentation.clone())).collect();
    let act = (0..cat.morphism_count())
        .map(|m| {
            let src = cat.morphism(m).src;
            let dst = cat.morphism(m).dst;
            let f = action.space.action(m);
            let assign = (0..=trunc)
                .map(|dim| {
                    at[src]
                        .generators(dim)
                        .map(|g| {
                            let (b, x) = &tables[src].gen_elem[dim][g.idx];
                            tables[dst].normal_form(dim, &(b.clone(), f.apply(x))).clone()
                        })
                        .collect()
                })
                .collect();
            SimplicialMap::new(at[src].clone(), at[dst].clone(), assign)
        })
        .collect();
    let total = Arc::new(Diagram::new(cat.clone(), at.clone(), act));
    total
        .validate()
        .map_err(|e| BundleError::Action { what: format!("twisted product naturality: {e}") })?;
    let base_diag = Arc::new(Diagram::constant(cat, t.base.clone()));
    let comps = (0..objects)
        .map(|c| {
            let assign = (0..=trunc)
                .map(|dim| {
                    at[c].generators(dim).map(|g| tables[c].gen_elem[dim][g.idx].0.clone()).collect()
                })
                .collect();
            SimplicialMap::new(at[c].clone(), t.base.clone(), assign)
        })
        .collect();
    let projection = DiagramMap::new(total.clone(), base_diag, comps);
    projection.validate().map_err(|e| {
        BundleError::Action { what: format!("twisted product projection: {e}") }
    })?;
    Ok(Tcp { twisting: t.clone(), action: action.clone(), total, projection, tables })
}

impl Tcp {
    /// The total-space simplex carrying a base and fibre pair.
    pub fn ref_of(&self, c: usize, b: &SimplexRef, x: &SimplexRef) -> SimplexRef {
        self.tables[c].normal_form(b.dim(), &(b.clone(), x.clone())).clone()
    }

    /// The base and fibre pair behind a total-space simplex.
    pub fn coords(&self, c: usize, r: &SimplexRef) -> (SimplexRef, SimplexRef) {
        let (mut b, mut x) = self.tables[c].gen_elem[r.base.dim][r.base.idx].clone();
        let fibre = self.action.space.value(c);
        for &j in r.word.iter().rev() {
            b = self.twisting.base.degeneracy(&b, j);
            x = fibre.degeneracy(&x, j);
        }
        (b, x)
    }

    pub fn base(&self) -> &Arc<Presentation> {
        &self.twisting.base
    }
}

/// The action of a simplicial group on itself by left translation, as a
/// constant diagram over the given category.
pub fn left_translation(
    group: Arc<SimplicialGroup>,
    cat: Arc<FiniteCategory>,
) -> Result<GroupAction, BundleError> {
    let trunc = group.truncation();
    let space = Arc::new(Diagram::constant(cat, group.space().clone()));
    let per_level: Vec<Vec<Vec<usize>>> = (0..=trunc)
        .map(|n| {
            let list = group.space().simplices(n);
            let index: std::collections::BTreeMap<_, _> =
                list.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
            (0..group.order(n))
                .map(|g| {
                    list.iter()
                        .map(|r| {
                            let moved = group.ref_of(n, group.mult(n, g, group.elem_of(r)));
                            index[&moved]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let tables = vec![per_level; space.cat.object_count()];
    GroupAction::new(group, space, tables)
}

/// The principal twisted product: the group acting on itself by left
/// translation, over the base of `t`. The group is truncated to the base
/// truncation first so levels line up.
pub fn principal_tcp(t: &TwistingFunction, cat: Arc<FiniteCategory>) -> Result<Tcp, BundleError> {
    let d = t.base.truncation();
    if t.group.truncation() < d {
        return Err(BundleError::Truncation { need: d, have: t.group.truncation() });
    }
    let group = Arc::new(t.group.truncate(d));
    let td = t.with_group(group.clone())?;
    let action = left_translation(group, cat)?;
    build_tcp(&td, &action)
}

struct QuotientLevels<'a> {
    t: &'a TwistingFunction,
    action: &'a GroupAction,
    principal: &'a Tcp,
    c: usize,
}

impl QuotientLevels<'_> {
    fn fibre(&self) -> &Presentation {
        self.action.space.value(self.c)
    }

    fn group(&self) -> &SimplicialGroup {
        &self.principal.action.group
    }

    /// Renormalizes a class member to the representative with unit group
    /// coordinate.
    fn canonical(&self, n: usize, p: &SimplexRef, x: &SimplexRef) -> (SimplexRef, SimplexRef) {
        let (b, gref) = self.principal.coords(self.c, p);
        let g = self.group().elem_of(&gref);
        (b, self.action.apply(self.c, n, g, x))
    }

    fn member(&self, n: usize, e: &(SimplexRef, SimplexRef), h: usize) -> (SimplexRef, SimplexRef) {
        let href = self.group().ref_of(n, h);
        let p = self.principal.ref_of(self.c, &e.0, &href);
        let x = self.action.apply(self.c, n, self.group().inverse(n, h), &e.1);
        (p, x)
    }
}

impl LevelwiseData for QuotientLevels<'_> {
    type Elem = (SimplexRef, SimplexRef);

    fn truncation(&self) -> usize {
        self.t.base.truncation()
    }

    fn level(&self, n: usize) -> Vec<Self::Elem> {
        let xs = self.fibre().simplices(n);
        self.t
            .base
            .simplices(n)
            .into_iter()
            .flat_map(|b| xs.iter().map(move |x| (b.clone(), x.clone())))
            .collect()
    }

    fn face(&self, n: usize, i: usize, e: &Self::Elem) -> Self::Elem {
        let (p, x) = self.member(n, e, self.group().unit(n));
        let p1 = self.principal.total.value(self.c).face(&p, i);
        let x1 = self.fibre().face(&x, i);
        self.canonical(n - 1, &p1, &x1)
    }

    fn degeneracy(&self, n: usize, i: usize, e: &Self::Elem) -> Self::Elem {
        let (p, x) = self.member(n, e, self.group().unit(n));
        let p1 = self.principal.total.value(self.c).degeneracy(&p, i);
        let x1 = self.fibre().degeneracy(&x, i);
        self.canonical(n + 1, &p1, &x1)
    }

    fn label(&self, _n: usize, e: &Self::Elem) -> String {
        pair_label(&self.t.base, self.fibre(), e)
    }
}

/// The associated bundle: the product of the principal twisted product
/// with the fibre, divided by moving group elements across the pairing.
/// The quotient is built explicitly, checked to be independent of the
/// chosen class representatives, and compared against the direct twisted
/// product, which is returned.
pub fn associated(t: &TwistingFunction, action: &GroupAction) -> Result<Tcp, BundleError> {
    let tcp = build_tcp(t, action)?;
    let principal = principal_tcp(t, action.space.cat.clone())?;
    let trunc = t.base.truncation();
    for c in 0..action.space.cat.object_count() {
        let q = QuotientLevels { t, action, principal: &principal, c };
        for n in 0..=trunc {
            for e in q.level(n) {
                for h in 0..q.group().order(n) {
                    let m = q.member(n, &e, h);
                    if q.canonical(n, &m.0, &m.1) != e {
                        return Err(BundleError::Quotient(format!(
                            "class members disagree at object {c} dim {n}"
                        )));
                    }
                    for i in 0..=n {
                        if n >= 1 {
                            let p1 = principal.total.value(c).face(&m.0, i);
                            let x1 = q.fibre().face(&m.1, i);
                            if q.canonical(n - 1, &p1, &x1) != q.face(n, i, &e) {
                                return Err(BundleError::Quotient(format!(
                                    "face {i} depends on the representative at object {c} dim {n}"
                                )));
                            }
                        }
                        if n < trunc {
                            let p1 = principal.total.value(c).degeneracy(&m.0, i);
                            let x1 = q.fibre().degeneracy(&m.1, i);
                            if q.canonical(n + 1, &p1, &x1) != q.degeneracy(n, i, &e) {
                                return Err(BundleError::Quotient(format!(
                                    "degeneracy {i} depends on the representative at object {c} dim {n}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        let built = presentation_from_levels(&q)?;
        if built.presentation != tcp.tables[c].presentation {
            return Err(BundleError::Quotient(format!(
                "quotient presentation differs at object {c}"
            )));
        }
    }
    Ok(tcp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::bundle::group::two_point_swap;
    use crate::bundle::twisting::TwistingFunction;
    use crate::diagram::is_fibration_upto;
    use crate::simplicial::{circle, vertex_components};
    use std::collections::BTreeMap;

    fn circle_setup(twist: bool) -> (Arc<Presentation>, TwistingFunction, GroupAction) {
        let cat = Arc::new(FiniteCategory::terminal());
        let (group, action) = two_point_swap(cat, 2).unwrap();
        let base = Arc::new(circle(2));
        let t = if twist {
            let e = base.generator_by_name("e").unwrap();
            let assign: BTreeMap<_, _> = [(e, 1)].into_iter().collect();
            TwistingFunction::from_nondegenerate(base.clone(), group, &assign).unwrap()
        } else {
            TwistingFunction::units(base.clone(), group)
        };
        (base, t, action)
    }

    #[test]
    fn unit_twisting_gives_the_plain_product() {
        let (base, t, action) = circle_setup(false);
        let tcp = build_tcp(&t, &action).unwrap();
        let p0 = tcp.total.value(0);
        assert_eq!(p0.generator_count(0), 2);
        assert_eq!(vertex_components(p0), 2);
        // Zeroth face acts coordinatewise when the twist is trivial.
        let e = base.generator_by_name("e").unwrap();
        let x = action.space.value(0).simplices(1)[0].clone();
        let pair = tcp.ref_of(0, &SimplexRef::generator(e), &x);
        let (b0, x0) = tcp.coords(0, &p0.face(&pair, 0));
        assert_eq!(b0, base.face(&SimplexRef::generator(e), 0));
        assert_eq!(x0, action.space.value(0).face(&x, 0));
    }

    #[test]
    fn twisted_circle_is_the_connected_double_cover() {
        let (_, t, action) = circle_setup(true);
        let tcp = build_tcp(&t, &action).unwrap();
        let p0 = tcp.total.value(0);
        assert_eq!(p0.generator_count(0), 2);
        assert_eq!(vertex_components(p0), 1);
        let mut budget = Budget::limited(1_000_000);
        let report = is_fibration_upto(&tcp.projection, 2, &mut budget).unwrap();
        assert!(report.failure.is_none());
        assert!(tcp.projection.validate().is_ok());
    }

    #[test]
    fn round_trip_through_coordinates() {
        let (base, t, action) = circle_setup(true);
        let tcp = build_tcp(&t, &action).unwrap();
        for n in 0..=2 {
            for b in base.simplices(n) {
                for x in action.space.value(0).simplices(n) {
                    let r = tcp.ref_of(0, &b, &x);
                    assert_eq!(tcp.coords(0, &r), (b.clone(), x.clone()));
                }
            }
        }
    }

    #[test]
    fn principal_total_space_is_connected_exactly_when_twisted() {
        let (_, t, _) = circle_setup(true);
        let p = principal_tcp(&t, Arc::new(FiniteCategory::terminal())).unwrap();
        assert_eq!(vertex_components(p.total.value(0)), 1);

        let (_, units, _) = circle_setup(false);
        let p = principal_tcp(&units, Arc::new(FiniteCategory::terminal())).unwrap();
        assert_eq!(vertex_components(p.total.value(0)), 2);
    }

    #[test]
    fn quotient_of_the_principal_product_recovers_the_bundle() {
        for twist in [false, true] {
            let (_, t, action) = circle_setup(twist);
            let q = associated(&t, &action).unwrap();
            let direct = build_tcp(&t, &action).unwrap();
            assert_eq!(q.total.value(0), direct.total.value(0));
        }
    }
}
