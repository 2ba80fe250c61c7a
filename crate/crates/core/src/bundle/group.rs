//! Finite simplicial groups given by multiplication tables, and their
//! actions on diagrams of simplicial sets.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::BundleError;
use crate::category::FiniteCategory;
use crate::diagram::{Diagram, DiagramMap, DiagramProduct};
use crate::simplicial::{
    characteristic_map, presentation_from_levels, GenId, LevelwiseData, LevelwiseResult,
    Presentation, SimplexRef, SimplicialMap,
};

/// A finite group as an explicit multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    names: Vec<String>,
    unit: usize,
    mult: Vec<Vec<usize>>,
}

impl GroupTable {
    /// Builds a table and checks the group axioms.
    pub fn new(names: Vec<String>, unit: usize, mult: Vec<Vec<usize>>) -> Result<Self, BundleError> {
        let order = names.len();
        if order == 0 {
            return Err(BundleError::Group("no elements".into()));
        }
        if unit >= order || mult.len() != order {
            return Err(BundleError::Group("table shape does not match elements".into()));
        }
        for row in &mult {
            if row.len() != order || row.iter().any(|&x| x >= order) {
                return Err(BundleError::Group("table shape does not match elements".into()));
            }
        }
        for a in 0..order {
            if mult[unit][a] != a || mult[a][unit] != a {
                return Err(BundleError::Group(format!("unit law fails at {}", names[a])));
            }
            if !(0..order).any(|b| mult[a][b] == unit) {
                return Err(BundleError::Group(format!("{} has no inverse", names[a])));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(BundleError::Group(format!(
                            "associativity fails at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(GroupTable { names, unit, mult })
    }

    /// The one-element group.
    pub fn trivial() -> Self {
        GroupTable { names: vec!["e".into()], unit: 0, mult: vec![vec![0]] }
    }

    /// The cyclic group of the given order with elements e, g, g2, ...
    pub fn cyclic(order: usize) -> Self {
        assert!(order > 0);
        let names = (0..order)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{i}"),
            })
            .collect();
        let mult = (0..order).map(|a| (0..order).map(|b| (a + b) % order).collect()).collect();
        GroupTable { names, unit: 0, mult }
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mult(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.mult[a][b] == self.unit).expect("group has inverses")
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }
}

struct GroupLevels<'a> {
    truncation: usize,
    levels: &'a [GroupTable],
    faces: &'a [Vec<Vec<usize>>],
    degens: &'a [Vec<Vec<usize>>],
}

impl LevelwiseData for GroupLevels<'_> {
    type Elem = usize;

    fn truncation(&self) -> usize {
        self.truncation
    }

    fn level(&self, n: usize) -> Vec<usize> {
        (0..self.levels[n].order()).collect()
    }

    fn face(&self, n: usize, i: usize, e: &usize) -> usize {
        self.faces[n][i][*e]
    }

    fn degeneracy(&self, n: usize, i: usize, e: &usize) -> usize {
        self.degens[n][i][*e]
    }

    fn label(&self, n: usize, e: &usize) -> String {
        self.levels[n].name(*e).to_string()
    }
}

/// A truncated simplicial group: a finite group per level and face and
/// degeneracy homomorphisms between neighbouring levels.
#[derive(Debug, Clone)]
pub struct SimplicialGroup {
    truncation: usize,
    levels: Vec<GroupTable>,
    /// faces[n][i][g] for 1 <= n, 0 <= i <= n.
    faces: Vec<Vec<Vec<usize>>>,
    /// degens[n][i][g] for n < truncation, 0 <= i <= n.
    degens: Vec<Vec<Vec<usize>>>,
    /// Underlying simplicial set of the group.
    space: Arc<Presentation>,
    tables: LevelwiseResult<usize>,
}

impl SimplicialGroup {
    /// Builds a simplicial group, checking group axioms, homomorphism
    /// properties of the operators, and all simplicial identities.
    pub fn new(
        levels: Vec<GroupTable>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, BundleError> {
        if levels.is_empty() {
            return Err(BundleError::Group("no levels".into()));
        }
        let truncation = levels.len() - 1;
        if faces.len() != truncation + 1 || degens.len() != truncation + 1 {
            return Err(BundleError::Operator {
                dim: truncation,
                what: "operator tables do not cover every level".into(),
            });
        }
        if !faces[0].is_empty() || !degens[truncation].is_empty() {
            return Err(BundleError::Operator {
                dim: 0,
                what: "face tables start at dim 1 and degeneracies stop below the cut".into(),
            });
        }
        let check = |tab: &[Vec<usize>], n: usize, from: &GroupTable, to: &GroupTable| {
            if tab.len() != n + 1 {
                return Err(BundleError::Operator { dim: n, what: "wrong operator count".into() });
            }
            for (i, op) in tab.iter().enumerate() {
                if op.len() != from.order() || op.iter().any(|&x| x >= to.order()) {
                    return Err(BundleError::Operator {
                        dim: n,
                        what: format!("operator {i} has the wrong shape"),
                    });
                }
                for a in 0..from.order() {
                    for b in 0..from.order() {
                        if op[from.mult(a, b)] != to.mult(op[a], op[b]) {
                            return Err(BundleError::Operator {
                                dim: n,
                                what: format!(
                                    "operator {i} is not a homomorphism at ({}, {})",
                                    from.name(a),
                                    from.name(b)
                                ),
                            });
                        }
                    }
                }
            }
            Ok(())
        };
        for n in 1..=truncation {
            check(&faces[n], n, &levels[n], &levels[n - 1])?;
        }
        for n in 0..truncation {
            check(&degens[n], n, &levels[n], &levels[n + 1])?;
        }
        let data = GroupLevels { truncation, levels: &levels, faces: &faces, degens: &degens };
        let built = presentation_from_levels(&data)?;
        Ok(SimplicialGroup {
            truncation,
            levels,
            faces,
            degens,
            space: Arc::new(built.presentation.clone()),
            tables: built,
        })
    }

    /// The constant simplicial group on one table: every level equal, all
    /// operators the identity.
    pub fn constant(table: GroupTable, truncation: usize) -> Self {
        let id: Vec<usize> = (0..table.order()).collect();
        let levels = vec![table; truncation + 1];
        let faces = (0..=truncation)
            .map(|n| if n == 0 { Vec::new() } else { vec![id.clone(); n + 1] })
            .collect();
        let degens = (0..=truncation)
            .map(|n| if n == truncation { Vec::new() } else { vec![id.clone(); n + 1] })
            .collect();
        SimplicialGroup::new(levels, faces, degens).expect("constant tables are simplicial")
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn level(&self, n: usize) -> &GroupTable {
        &self.levels[n]
    }

    pub fn order(&self, n: usize) -> usize {
        self.levels[n].order()
    }

    pub fn unit(&self, n: usize) -> usize {
        self.levels[n].unit()
    }

    pub fn mult(&self, n: usize, a: usize, b: usize) -> usize {
        self.levels[n].mult(a, b)
    }

    pub fn inverse(&self, n: usize, a: usize) -> usize {
        self.levels[n].inverse(a)
    }

    pub fn face(&self, n: usize, i: usize, g: usize) -> usize {
        self.faces[n][i][g]
    }

    pub fn degeneracy(&self, n: usize, i: usize, g: usize) -> usize {
        self.degens[n][i][g]
    }

    /// Underlying simplicial set of the group.
    pub fn space(&self) -> &Arc<Presentation> {
        &self.space
    }

    /// The simplex of the underlying set carrying a group element.
    pub fn ref_of(&self, n: usize, g: usize) -> SimplexRef {
        self.tables.normal_form(n, &g).clone()
    }

    /// The group element carried by a simplex of the underlying set.
    pub fn elem_of(&self, r: &SimplexRef) -> usize {
        let mut e = self.tables.gen_elem[r.base.dim][r.base.idx];
        let mut dim = r.base.dim;
        for &j in r.word.iter().rev() {
            e = self.degens[dim][j][e];
            dim += 1;
        }
        e
    }

    /// The same group tables cut down to a lower truncation.
    pub fn truncate(&self, d: usize) -> SimplicialGroup {
        assert!(d <= self.truncation);
        let levels = self.levels[..=d].to_vec();
        let mut faces = self.faces[..=d].to_vec();
        let mut degens = self.degens[..=d].to_vec();
        faces[0] = Vec::new();
        degens[d] = Vec::new();
        SimplicialGroup::new(levels, faces, degens).expect("truncation preserves the identities")
    }

    /// Structural equality of the group data up to a dimension.
    pub fn same_tables_upto(&self, other: &SimplicialGroup, d: usize) -> bool {
        if self.truncation < d || other.truncation < d {
            return false;
        }
        self.levels[..=d] == other.levels[..=d]
            && self.faces[1..=d] == other.faces[1..=d]
            && (0..d).all(|n| self.degens[n] == other.degens[n])
    }
}

/// A left action of a simplicial group on a diagram, stored as one
/// permutation table per object, level, and group element.
#[derive(Clone)]
pub struct GroupAction {
    pub group: Arc<SimplicialGroup>,
    pub space: Arc<Diagram>,
    /// tables[c][n][g][pos] indexes into the canonical simplex list.
    tables: Vec<Vec<Vec<Vec<usize>>>>,
    simplices: Vec<Vec<Vec<SimplexRef>>>,
    index: Vec<Vec<BTreeMap<SimplexRef, usize>>>,
}

impl GroupAction {
    /// Builds an action and checks the axioms: unit and composition laws,
    /// compatibility with faces and degeneracies, and naturality in the
    /// index category.
    pub fn new(
        group: Arc<SimplicialGroup>,
        space: Arc<Diagram>,
        tables: Vec<Vec<Vec<Vec<usize>>>>,
    ) -> Result<Self, BundleError> {
        let trunc = space.truncation();
        if group.truncation() < trunc {
            return Err(BundleError::Truncation { need: trunc, have: group.truncation() });
        }
        let cat = &space.cat;
        let objects = cat.object_count();
        let simplices: Vec<Vec<Vec<SimplexRef>>> = (0..objects)
            .map(|c| (0..=trunc).map(|n| space.value(c).simplices(n)).collect())
            .collect();
        let index: Vec<Vec<BTreeMap<SimplexRef, usize>>> = simplices
            .iter()
            .map(|per| {
                per.iter()
                    .map(|list| list.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect())
                    .collect()
            })
            .collect();
        if tables.len() != objects {
            return Err(BundleError::Action { what: "one table block per object".into() });
        }
        for c in 0..objects {
            if tables[c].len() != trunc + 1 {
                return Err(BundleError::Action { what: "one table per level".into() });
            }
            for n in 0..=trunc {
                let count = simplices[c][n].len();
                let block = &tables[c][n];
                if block.len() != group.order(n)
                    || block.iter().any(|row| row.len() != count || row.iter().any(|&x| x >= count))
                {
                    return Err(BundleError::Action {
                        what: format!("table shape at object {c} dim {n}"),
                    });
                }
                let e = group.unit(n);
                if block[e] != (0..count).collect::<Vec<_>>() {
                    return Err(BundleError::Action {
                        what: format!("unit law at object {c} dim {n}"),
                    });
                }
                for a in 0..group.order(n) {
                    for b in 0..group.order(n) {
                        let ab = group.mult(n, a, b);
                        for pos in 0..count {
                            if block[a][block[b][pos]] != block[ab][pos] {
                                return Err(BundleError::Action {
                                    what: format!(
                                        "composition law at object {c} dim {n} element {}",
                                        group.level(n).name(a)
                                    ),
                                });
                            }
                        }
                    }
                }
            }
        }
        let action = GroupAction { group, space, tables, simplices, index };
        action.check_operators()?;
        action.check_naturality()?;
        Ok(action)
    }

    fn check_operators(&self) -> Result<(), BundleError> {
        let trunc = self.space.truncation();
        for c in 0..self.space.cat.object_count() {
            let p = self.space.value(c);
            for n in 0..=trunc {
                for g in 0..self.group.order(n) {
                    for x in &self.simplices[c][n] {
                        let gx = self.apply(c, n, g, x);
                        for i in 0..=n {
                            if n >= 1 {
                                let lhs = p.face(&gx, i);
                                let rhs =
                                    self.apply(c, n - 1, self.group.face(n, i, g), &p.face(x, i));
                                if lhs != rhs {
                                    return Err(BundleError::Action {
                                        what: format!("face {i} compatibility at object {c} dim {n}"),
                                    });
                                }
                            }
                            if n < trunc {
                                let lhs = p.degeneracy(&gx, i);
                                let rhs = self.apply(
                                    c,
                                    n + 1,
                                    self.group.degeneracy(n, i, g),
                                    &p.degeneracy(x, i),
                                );
                                if lhs != rhs {
                                    return Err(BundleError::Action {
                                        what: format!(
                                            "degeneracy {i} compatibility at object {c} dim {n}"
                                        ),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_naturality(&self) -> Result<(), BundleError> {
        let cat = &self.space.cat;
        for m in 0..cat.morphism_count() {
            let src = cat.morphism(m).src;
            let dst = cat.morphism(m).dst;
            let f = self.space.action(m);
            for n in 0..=self.space.truncation() {
                for g in 0..self.group.order(n) {
                    for x in &self.simplices[src][n] {
                        let lhs = f.apply(&self.apply(src, n, g, x));
                        let rhs = self.apply(dst, n, g, &f.apply(x));
                        if lhs != rhs {
                            return Err(BundleError::Action {
                                what: format!("naturality at morphism {m} dim {n}"),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The trivial action: every element acts as the identity.
    pub fn trivial(group: Arc<SimplicialGroup>, space: Arc<Diagram>) -> Result<Self, BundleError> {
        let trunc = space.truncation();
        let tables = (0..space.cat.object_count())
            .map(|c| {
                (0..=trunc)
                    .map(|n| {
                        let count = space.value(c).simplex_count(n);
                        vec![(0..count).collect::<Vec<_>>(); group.order(n)]
                    })
                    .collect()
            })
            .collect();
        GroupAction::new(group, space, tables)
    }

    /// Applies a group element of level `n` to a simplex at an object.
    pub fn apply(&self, c: usize, n: usize, g: usize, x: &SimplexRef) -> SimplexRef {
        let pos = self.index[c][n][x];
        self.simplices[c][n][self.tables[c][n][g][pos]].clone()
    }

    /// The endomorphism of a cylinder `F x Delta[n]` induced by a level-`n`
    /// group element: `(y, u)` goes to `(u^*(g) . y, u)`, where `u^*` is
    /// restriction along the structure map of `u`.
    pub fn rho_endo(&self, cyl: &DiagramProduct, level: usize, g: usize) -> DiagramMap {
        let chi = characteristic_map(self.group.space().clone(), &self.group.ref_of(level, g));
        let comps = (0..self.space.cat.object_count())
            .map(|c| {
                let p = cyl.diagram.value(c);
                let assign = (0..=p.truncation())
                    .map(|dim| {
                        p.generators(dim)
                            .map(|gen| {
                                let (y, u) = cyl.pair_of(c, &SimplexRef::generator(gen));
                                let conj = self.group.elem_of(&chi.apply(&u));
                                cyl.ref_of(c, &self.apply(c, dim, conj, &y), &u)
                            })
                            .collect()
                    })
                    .collect();
                SimplicialMap::new(p.clone(), p.clone(), assign)
            })
            .collect();
        DiagramMap::new(cyl.diagram.clone(), cyl.diagram.clone(), comps)
    }
}

/// The two-point fibre with the cyclic group of order two swapping the
/// points, as a constant diagram over the given category.
pub fn two_point_swap(
    cat: Arc<FiniteCategory>,
    truncation: usize,
) -> Result<(Arc<SimplicialGroup>, GroupAction), BundleError> {
    let group = Arc::new(SimplicialGroup::constant(GroupTable::cyclic(2), truncation));
    let mut f = Presentation::new(truncation);
    f.add_vertex("x0");
    f.add_vertex("x1");
    let space = Arc::new(Diagram::constant(cat, Arc::new(f)));
    let tables = (0..space.cat.object_count())
        .map(|c| {
            (0..=truncation)
                .map(|n| {
                    let list = space.value(c).simplices(n);
                    let index: BTreeMap<_, _> =
                        list.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
                    let swap: Vec<usize> = list
                        .iter()
                        .map(|r| {
                            let flipped = SimplexRef {
                                base: GenId { dim: 0, idx: 1 - r.base.idx },
                                word: r.word.clone(),
                            };
                            index[&flipped]
                        })
                        .collect();
                    vec![(0..list.len()).collect(), swap]
                })
                .collect()
        })
        .collect();
    let action = GroupAction::new(group.clone(), space, tables)?;
    Ok((group, action))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::external_product;
    use crate::simplicial::standard_simplex;

    #[test]
    fn cyclic_tables_satisfy_the_group_axioms() {
        for n in 1..=4 {
            let t = GroupTable::cyclic(n);
            assert_eq!(t.order(), n);
            let rebuilt = GroupTable::new(
                (0..n).map(|i| t.name(i).to_string()).collect(),
                t.unit(),
                (0..n).map(|a| (0..n).map(|b| t.mult(a, b)).collect()).collect(),
            );
            assert!(rebuilt.is_ok());
            for a in 0..n {
                assert_eq!(t.mult(a, t.inverse(a)), t.unit());
            }
        }
        let bad = GroupTable::new(
            vec!["e".into(), "a".into()],
            0,
            vec![vec![0, 1], vec![1, 1]],
        );
        assert!(matches!(bad, Err(BundleError::Group(_))));
    }

    #[test]
    fn constant_group_has_a_discrete_underlying_set() {
        let g = SimplicialGroup::constant(GroupTable::cyclic(3), 2);
        assert_eq!(g.space().generator_counts(), vec![3, 0, 0]);
        for n in 0..=2 {
            for e in 0..3 {
                let r = g.ref_of(n, e);
                assert_eq!(r.dim(), n);
                assert_eq!(g.elem_of(&r), e);
            }
        }
        let cut = g.truncate(1);
        assert_eq!(cut.truncation(), 1);
        assert!(cut.same_tables_upto(&g, 1));
    }

    #[test]
    fn operator_tables_must_be_homomorphisms() {
        let g = SimplicialGroup::constant(GroupTable::cyclic(2), 2);
        let mut faces: Vec<Vec<Vec<usize>>> = (0..=2)
            .map(|n| if n == 0 { Vec::new() } else { vec![vec![0, 1]; n + 1] })
            .collect();
        // Swapping the unit with g cannot be a homomorphism.
        faces[2][1] = vec![1, 0];
        let degens = vec![vec![vec![0, 1]; 1], vec![vec![0, 1]; 2], Vec::new()];
        let bad = SimplicialGroup::new(
            (0..=2).map(|n| g.level(n).clone()).collect(),
            faces,
            degens,
        );
        assert!(matches!(bad, Err(BundleError::Operator { dim: 2, .. })));
    }

    #[test]
    fn swap_action_validates_and_swaps_towers() {
        let cat = Arc::new(FiniteCategory::arrow());
        let (group, action) = two_point_swap(cat, 2).unwrap();
        let p = action.space.value(0);
        let x0 = p.simplices(2)[0].clone();
        let moved = action.apply(0, 2, 1, &x0);
        assert_ne!(moved, x0);
        assert_eq!(action.apply(0, 2, 1, &moved), x0);
        assert_eq!(group.order(1), 2);

        let trivial = GroupAction::trivial(group.clone(), action.space.clone()).unwrap();
        let y = p.simplices(1)[1].clone();
        assert_eq!(trivial.apply(0, 1, 1, &y), y);
    }

    #[test]
    fn cylinder_endomorphisms_multiply_like_the_group() {
        let cat = Arc::new(FiniteCategory::terminal());
        let (_, action) = two_point_swap(cat, 2).unwrap();
        let cyl = external_product(action.space.clone(), Arc::new(standard_simplex(1, 2)));
        let e = action.rho_endo(&cyl, 1, 0);
        let g = action.rho_endo(&cyl, 1, 1);
        assert!(e.validate().is_ok());
        assert!(g.validate().is_ok());
        assert!(e.same_assignment(&DiagramMap::identity(cyl.diagram.clone())));
        assert!(!g.same_assignment(&e));
        assert!(g.then(&g).same_assignment(&e));
    }
}
