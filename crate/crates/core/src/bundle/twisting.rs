//! Twisting functions on a presented base, their exhaustive enumeration,
//! and the equivalence that identifies twisted products.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::group::SimplicialGroup;
use super::tcp::principal_tcp;
use super::BundleError;
use crate::budget::{Budget, SearchOutcome};
use crate::category::FiniteCategory;
use crate::simplicial::{GenId, Presentation, SimplexRef, SimplicialMap};

/// A degree-lowering family `t_n : B_n -> G_{n-1}` for `n >= 1` subject to
/// the four twisting identities.
#[derive(Clone)]
pub struct TwistingFunction {
    pub base: Arc<Presentation>,
    pub group: Arc<SimplicialGroup>,
    /// values[n][pos] indexes a group element of level `n - 1`; pos runs
    /// over the canonical simplex list of the base at dim `n`.
    values: Vec<Vec<usize>>,
    simplices: Vec<Vec<SimplexRef>>,
    index: Vec<BTreeMap<SimplexRef, usize>>,
}

fn layout(base: &Presentation) -> (Vec<Vec<SimplexRef>>, Vec<BTreeMap<SimplexRef, usize>>) {
    let simplices: Vec<Vec<SimplexRef>> =
        (0..=base.truncation()).map(|n| base.simplices(n)).collect();
    let index = simplices
        .iter()
        .map(|list| list.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect())
        .collect();
    (simplices, index)
}

impl TwistingFunction {
    /// Builds a twisting function from a full value table and validates it.
    pub fn new(
        base: Arc<Presentation>,
        group: Arc<SimplicialGroup>,
        values: Vec<Vec<usize>>,
    ) -> Result<Self, BundleError> {
        let trunc = base.truncation();
        if group.truncation() + 1 < trunc {
            return Err(BundleError::Truncation { need: trunc - 1, have: group.truncation() });
        }
        let (simplices, index) = layout(&base);
        if values.len() != trunc + 1 || !values[0].is_empty() {
            return Err(BundleError::Twisting { family: "layout", simplex: "value table".into() });
        }
        for n in 1..=trunc {
            if values[n].len() != simplices[n].len()
                || values[n].iter().any(|&g| g >= group.order(n - 1))
            {
                return Err(BundleError::Twisting {
                    family: "layout",
                    simplex: format!("value table at dim {n}"),
                });
            }
        }
        let t = TwistingFunction { base, group, values, simplices, index };
        t.validate()?;
        Ok(t)
    }

    /// The twisting function that is the unit everywhere.
    pub fn units(base: Arc<Presentation>, group: Arc<SimplicialGroup>) -> Self {
        let values = (0..=base.truncation())
            .map(|n| {
                if n == 0 {
                    Vec::new()
                } else {
                    vec![group.unit(n - 1); base.simplex_count(n)]
                }
            })
            .collect();
        TwistingFunction::new(base, group, values).expect("unit values satisfy every identity")
    }

    /// Extends values on the non-degenerate generators to all simplices by
    /// the degeneracy identities, then validates.
    pub fn from_nondegenerate(
        base: Arc<Presentation>,
        group: Arc<SimplicialGroup>,
        assign: &BTreeMap<GenId, usize>,
    ) -> Result<Self, BundleError> {
        let trunc = base.truncation();
        if group.truncation() + 1 < trunc {
            return Err(BundleError::Truncation { need: trunc - 1, have: group.truncation() });
        }
        if assign.keys().any(|g| g.dim == 0 || !base.contains(*g)) {
            return Err(BundleError::Twisting {
                family: "layout",
                simplex: "value assigned off a positive-dimensional generator".into(),
            });
        }
        let (simplices, index) = layout(&base);
        let mut values: Vec<Vec<usize>> = vec![Vec::new(); trunc + 1];
        for n in 1..=trunc {
            values[n] = simplices[n]
                .iter()
                .map(|r| {
                    if r.word.is_empty() {
                        return assign.get(&r.base).copied().ok_or(BundleError::Twisting {
                            family: "layout",
                            simplex: base.display_ref(r),
                        });
                    }
                    let j = r.word[0];
                    if j == 0 {
                        return Ok(group.unit(n - 1));
                    }
                    let parent = SimplexRef { base: r.base, word: r.word[1..].to_vec() };
                    let below = values[n - 1][index[n - 1][&parent]];
                    Ok(group.degeneracy(n - 2, j - 1, below))
                })
                .collect::<Result<_, _>>()?;
        }
        TwistingFunction::new(base, group, values)
    }

    /// The value on a simplex of positive dimension.
    pub fn value(&self, v: &SimplexRef) -> usize {
        let n = v.dim();
        self.values[n][self.index[n][v]]
    }

    /// The values on non-degenerate generators, which determine the rest.
    pub fn nondegenerate_values(&self) -> BTreeMap<GenId, usize> {
        (1..=self.base.truncation())
            .flat_map(|n| {
                self.base
                    .generators(n)
                    .map(|g| (g, self.value(&SimplexRef::generator(g))))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    pub fn same_values(&self, other: &TwistingFunction) -> bool {
        self.values == other.values
    }

    /// The same value table over another copy of the group, for example a
    /// truncation of it.
    pub fn with_group(&self, group: Arc<SimplicialGroup>) -> Result<TwistingFunction, BundleError> {
        TwistingFunction::new(self.base.clone(), group, self.values.clone())
    }

    /// Checks the four identity families on every simplex of the base.
    /// The degeneracy families run first: they are the more local
    /// diagnostic, so a broken degenerate entry is reported at its own
    /// simplex rather than through a face identity one level up.
    pub fn validate(&self) -> Result<(), BundleError> {
        let trunc = self.base.truncation();
        let g = &self.group;
        for n in 0..trunc {
            for v in &self.simplices[n] {
                if self.value(&self.base.degeneracy(v, 0)) != g.unit(n) {
                    return Err(BundleError::Twisting {
                        family: "unit degeneracy",
                        simplex: self.base.display_ref(v),
                    });
                }
                if n >= 1 {
                    let tv = self.value(v);
                    for i in 0..n {
                        let lhs = g.degeneracy(n - 1, i, tv);
                        if lhs != self.value(&self.base.degeneracy(v, i + 1)) {
                            return Err(BundleError::Twisting {
                                family: "degeneracy",
                                simplex: self.base.display_ref(v),
                            });
                        }
                    }
                }
            }
        }
        for n in 2..=trunc {
            for v in &self.simplices[n] {
                let tv = self.value(v);
                let d0 = self.value(&self.base.face(v, 0));
                let d1 = self.value(&self.base.face(v, 1));
                let want = g.mult(n - 2, g.inverse(n - 2, d0), d1);
                if g.face(n - 1, 0, tv) != want {
                    return Err(BundleError::Twisting {
                        family: "zeroth face",
                        simplex: self.base.display_ref(v),
                    });
                }
                for i in 1..n {
                    if g.face(n - 1, i, tv) != self.value(&self.base.face(v, i + 1)) {
                        return Err(BundleError::Twisting {
                            family: "face",
                            simplex: self.base.display_ref(v),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// All twisting functions on a base, found by running through every
/// assignment on the non-degenerate generators.
pub fn enumerate_twistings(
    base: &Arc<Presentation>,
    group: &Arc<SimplicialGroup>,
    budget: &mut Budget,
) -> SearchOutcome<Vec<TwistingFunction>> {
    let gens: Vec<(GenId, usize)> = (1..=base.truncation())
        .flat_map(|n| base.generators(n).map(|g| (g, group.order(n - 1))).collect::<Vec<_>>())
        .collect();
    let mut counters = vec![0usize; gens.len()];
    let mut out = Vec::new();
    loop {
        if budget.tick().is_err() {
            return SearchOutcome::Exhausted;
        }
        let assign: BTreeMap<GenId, usize> =
            gens.iter().zip(&counters).map(|(&(g, _), &v)| (g, v)).collect();
        if let Ok(t) = TwistingFunction::from_nondegenerate(base.clone(), group.clone(), &assign) {
            out.push(t);
        }
        let mut k = gens.len();
        loop {
            if k == 0 {
                return SearchOutcome::Found(out);
            }
            k -= 1;
            counters[k] += 1;
            if counters[k] < gens[k].1 {
                break;
            }
            counters[k] = 0;
        }
    }
}

/// A witness that two twisting functions present the same bundle: the
/// degree-preserving conjugating family and the induced isomorphism of the
/// principal twisted products.
#[derive(Clone)]
pub struct TwistingEquivalence {
    /// gamma[n][pos] indexes a group element of level `n`.
    pub gamma: Vec<Vec<usize>>,
    pub principal_iso: SimplicialMap,
}

fn gamma_valid(
    t: &TwistingFunction,
    t2: &TwistingFunction,
    gamma: &[Vec<usize>],
) -> bool {
    let base = &t.base;
    let g = &t.group;
    let trunc = base.truncation();
    let at = |r: &SimplexRef| gamma[r.dim()][t.index[r.dim()][r]];
    for n in 1..=trunc {
        for v in &t.simplices[n] {
            let lhs = g.mult(n - 1, t2.value(v), g.face(n, 0, at(v)));
            let rhs = g.mult(n - 1, at(&base.face(v, 0)), t.value(v));
            if lhs != rhs {
                return false;
            }
            for i in 1..=n {
                if g.face(n, i, at(v)) != at(&base.face(v, i)) {
                    return false;
                }
            }
        }
    }
    for n in 0..trunc {
        for v in &t.simplices[n] {
            for i in 0..=n {
                if g.degeneracy(n, i, at(v)) != at(&base.degeneracy(v, i)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Builds the fibrewise translation `(v, x) -> (v, gamma(v) . x)` between
/// the principal twisted products and checks it is simplicial.
fn principal_translation(
    t: &TwistingFunction,
    t2: &TwistingFunction,
    gamma: &[Vec<usize>],
) -> Result<SimplicialMap, BundleError> {
    let cat = Arc::new(FiniteCategory::terminal());
    let p = principal_tcp(t, cat.clone())?;
    let p2 = principal_tcp(t2, cat)?;
    let source = p.total.value(0).clone();
    let target = p2.total.value(0).clone();
    let group = &p.action.group;
    let assign = (0..=source.truncation())
        .map(|dim| {
            source
                .generators(dim)
                .map(|gen| {
                    let (b, x) = p.coords(0, &SimplexRef::generator(gen));
                    let gv = gamma[dim][t.index[dim][&b]];
                    let moved = group.ref_of(dim, group.mult(dim, gv, group.elem_of(&x)));
                    p2.ref_of(0, &b, &moved)
                })
                .collect()
        })
        .collect();
    let h = SimplicialMap::new(source, target, assign);
    h.validate().map_err(|e| BundleError::NotSimplicial(e.to_string()))?;
    if !h.is_iso_upto(t.base.truncation()) {
        return Err(BundleError::NotSimplicial("translation is not invertible".into()));
    }
    Ok(h)
}

/// Searches for an equivalence between two twisting functions on the same
/// base and group.
pub fn twisting_equivalent(
    t: &TwistingFunction,
    t2: &TwistingFunction,
    budget: &mut Budget,
) -> Result<SearchOutcome<TwistingEquivalence>, BundleError> {
    if !Arc::ptr_eq(&t.base, &t2.base) && t.base.as_ref() != t2.base.as_ref() {
        return Err(BundleError::Mismatch);
    }
    if !t.group.same_tables_upto(&t2.group, t.group.truncation().min(t2.group.truncation())) {
        return Err(BundleError::Mismatch);
    }
    let base = &t.base;
    let trunc = base.truncation();
    let gens: Vec<(GenId, usize)> = (0..=trunc)
        .flat_map(|n| base.generators(n).map(|g| (g, t.group.order(n))).collect::<Vec<_>>())
        .collect();
    let mut counters = vec![0usize; gens.len()];
    loop {
        if budget.tick().is_err() {
            return Ok(SearchOutcome::Exhausted);
        }
        let assign: BTreeMap<GenId, usize> =
            gens.iter().zip(&counters).map(|(&(g, _), &v)| (g, v)).collect();
        let mut gamma: Vec<Vec<usize>> = vec![Vec::new(); trunc + 1];
        for n in 0..=trunc {
            gamma[n] = t.simplices[n]
                .iter()
                .map(|r| {
                    if r.word.is_empty() {
                        assign[&r.base]
                    } else {
                        let parent = SimplexRef { base: r.base, word: r.word[1..].to_vec() };
                        let below = gamma[n - 1][t.index[n - 1][&parent]];
                        t.group.degeneracy(n - 1, r.word[0], below)
                    }
                })
                .collect();
        }
        if gamma_valid(t, t2, &gamma) {
            let principal_iso = principal_translation(t, t2, &gamma)?;
            return Ok(SearchOutcome::Found(TwistingEquivalence { gamma, principal_iso }));
        }
        let mut k = gens.len();
        loop {
            if k == 0 {
                return Ok(SearchOutcome::Refuted);
            }
            k -= 1;
            counters[k] += 1;
            if counters[k] < gens[k].1 {
                break;
            }
            counters[k] = 0;
        }
    }
}

/// Partitions a list of twisting functions into equivalence classes of
/// indices, comparing against one representative per class.
pub fn twisting_classes(
    list: &[TwistingFunction],
    budget: &mut Budget,
) -> Result<SearchOutcome<Vec<Vec<usize>>>, BundleError> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..list.len() {
        let mut placed = false;
        for class in classes.iter_mut() {
            match twisting_equivalent(&list[class[0]], &list[i], budget)? {
                SearchOutcome::Found(_) => {
                    class.push(i);
                    placed = true;
                    break;
                }
                SearchOutcome::Refuted => {}
                SearchOutcome::Exhausted => return Ok(SearchOutcome::Exhausted),
            }
        }
        if !placed {
            classes.push(vec![i]);
        }
    }
    Ok(SearchOutcome::Found(classes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::group::GroupTable;
    use crate::simplicial::{circle, standard_simplex};

    fn z2(trunc: usize) -> Arc<SimplicialGroup> {
        Arc::new(SimplicialGroup::constant(GroupTable::cyclic(2), trunc))
    }

    #[test]
    fn unit_twisting_validates_and_mutations_are_caught() {
        let base = Arc::new(circle(2));
        let t = TwistingFunction::units(base.clone(), z2(2));
        assert!(t.validate().is_ok());

        let mut values = t.values.clone();
        let s0v = base.degeneracy(&base.simplices(0)[0], 0);
        let pos = t.index[1][&s0v];
        values[1][pos] = 1;
        let bad = TwistingFunction::new(base, z2(2), values);
        assert!(matches!(
            bad,
            Err(BundleError::Twisting { family: "unit degeneracy", .. })
        ));
    }

    #[test]
    fn twisted_circle_values_extend_by_the_degeneracy_rules() {
        let base = Arc::new(circle(2));
        let e = base.generator_by_name("e").unwrap();
        let assign = [(e, 1)].into_iter().collect();
        let t = TwistingFunction::from_nondegenerate(base.clone(), z2(2), &assign).unwrap();
        let er = SimplexRef::generator(e);
        assert_eq!(t.value(&er), 1);
        assert_eq!(t.value(&base.degeneracy(&er, 0)), 0);
        assert_eq!(t.value(&base.degeneracy(&er, 1)), 1);
        assert_eq!(t.nondegenerate_values(), assign);
    }

    #[test]
    fn the_circle_carries_two_twistings_in_two_classes() {
        let base = Arc::new(circle(2));
        let mut budget = Budget::limited(100_000);
        let all = enumerate_twistings(&base, &z2(2), &mut budget).found().unwrap();
        assert_eq!(all.len(), 2);
        let classes = twisting_classes(&all, &mut budget).unwrap().found().unwrap();
        assert_eq!(classes.len(), 2);
    }

    #[test]
    fn the_interval_carries_two_twistings_in_one_class() {
        let base = Arc::new(standard_simplex(1, 2));
        let mut budget = Budget::limited(100_000);
        let all = enumerate_twistings(&base, &z2(2), &mut budget).found().unwrap();
        assert_eq!(all.len(), 2);
        let classes = twisting_classes(&all, &mut budget).unwrap().found().unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0], vec![0, 1]);
    }

    #[test]
    fn equivalence_is_reflexive_and_recovers_a_planted_conjugation() {
        let base = Arc::new(standard_simplex(1, 2));
        let group = z2(2);
        let units = TwistingFunction::units(base.clone(), group.clone());
        let mut budget = Budget::limited(100_000);

        let refl = twisting_equivalent(&units, &units, &mut budget).unwrap();
        let refl = refl.found().expect("a twisting is equivalent to itself");
        assert!(refl.gamma.iter().flatten().all(|&g| g == 0));

        let e01 = base.generator_by_name("01").unwrap();
        let assign = [(e01, 1)].into_iter().collect();
        let twisted =
            TwistingFunction::from_nondegenerate(base.clone(), group.clone(), &assign).unwrap();
        let found = twisting_equivalent(&units, &twisted, &mut budget).unwrap();
        let wit = found.found().expect("interval twistings are equivalent");
        let v1 = base.generator_by_name("1").unwrap();
        assert_eq!(wit.gamma[0][t_index(&units, 0, &SimplexRef::generator(v1))], 1);
        assert!(wit.principal_iso.validate().is_ok());
    }

    fn t_index(t: &TwistingFunction, n: usize, r: &SimplexRef) -> usize {
        t.index[n][r]
    }
}
