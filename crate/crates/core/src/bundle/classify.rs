//! Desk-scale classification: every twisting function on a base up to
//! equivalence, every simplicial map into the classifying complex up to
//! homotopy, and the check that the classifying-map assignment matches
//! the two quotients up.

use std::sync::Arc;

use super::group::{GroupAction, SimplicialGroup};
use super::tcp::build_tcp;
use super::twisting::{
    enumerate_twistings, twisting_classes, twisting_equivalent, TwistingFunction,
};
use super::wbar::{classifying_map, wbar};
use super::BundleError;
use crate::budget::{Budget, SearchOutcome};
use crate::category::FiniteCategory;
use crate::diagram::{
    diagram_homotopy, enumerate_diagram_maps, truncate_presentation, Diagram, DiagramMap,
};
use crate::simplicial::{Presentation, SimplicialMap};

/// Outcome of the exhaustive two-sided classification.
pub struct ClassifyReport {
    /// Number of twisting functions found on the base.
    pub twisting_count: usize,
    /// Indices of the twisting functions grouped by equivalence.
    pub twisting_classes: Vec<Vec<usize>>,
    /// Number of simplicial maps from the base to the classifying complex.
    pub map_count: usize,
    /// Map indices grouped by the homotopy relation.
    pub map_classes: Vec<Vec<usize>>,
    /// For each twisting class, the homotopy class its classifying maps
    /// land in.
    pub assignment: Vec<usize>,
    /// Whether the assignment is well defined, injective, and onto.
    pub bijection: bool,
}

fn size_guard(base: &Presentation, group: &SimplicialGroup, d: usize) -> Result<(), BundleError> {
    if d > 4 {
        return Err(BundleError::TooLarge(format!("dimension cap {d} exceeds 4")));
    }
    let gens: usize = (0..=base.truncation().min(d)).map(|n| base.generator_count(n)).sum();
    if gens > 64 {
        return Err(BundleError::TooLarge(format!("{gens} base generators exceed 64")));
    }
    for n in 0..=group.truncation() {
        if group.order(n) > 16 {
            return Err(BundleError::TooLarge(format!(
                "group order {} at level {n} exceeds 16",
                group.order(n)
            )));
        }
    }
    Ok(())
}

/// Checks that an equivalence of twistings really translates one twisted
/// product onto the other, fibrewise over the identity of the base.
fn check_translation(
    t: &TwistingFunction,
    t2: &TwistingFunction,
    gamma: &[Vec<usize>],
    action: &GroupAction,
) -> Result<(), BundleError> {
    let tcp = build_tcp(t, action)?;
    let tcp2 = build_tcp(t2, action)?;
    let base = &t.base;
    let trunc = base.truncation();
    let index: Vec<std::collections::BTreeMap<_, _>> = (0..=trunc)
        .map(|n| base.simplices(n).into_iter().enumerate().map(|(i, r)| (r, i)).collect())
        .collect();
    let comps: Vec<SimplicialMap> = (0..action.space.cat.object_count())
        .map(|c| {
            let source = tcp.total.value(c).clone();
            let assign = (0..=trunc)
                .map(|dim| {
                    source
                        .generators(dim)
                        .map(|g| {
                            let (b, x) = tcp.coords(c, &crate::simplicial::SimplexRef::generator(g));
                            let gv = gamma[dim][index[dim][&b]];
                            tcp2.ref_of(c, &b, &action.apply(c, dim, gv, &x))
                        })
                        .collect()
                })
                .collect();
            SimplicialMap::new(source, tcp2.total.value(c).clone(), assign)
        })
        .collect();
    let h = DiagramMap::new(tcp.total.clone(), tcp2.total.clone(), comps);
    h.validate().map_err(|e| BundleError::NotSimplicial(e.to_string()))?;
    if !h.is_iso_upto(trunc) {
        return Err(BundleError::NotSimplicial("translation is not invertible".into()));
    }
    if !h.then(&tcp2.projection).same_assignment(&tcp.projection) {
        return Err(BundleError::NotSimplicial("translation moves the base".into()));
    }
    Ok(())
}

/// Enumerates both sides of the classification over a base truncated at
/// `d` and reports the correspondence induced by classifying maps.
pub fn classify(
    base: &Arc<Presentation>,
    group: &Arc<SimplicialGroup>,
    action: &GroupAction,
    d: usize,
    budget: &mut Budget,
) -> Result<ClassifyReport, BundleError> {
    size_guard(base, group, d)?;
    if base.truncation() < d || group.truncation() < d {
        return Err(BundleError::Truncation {
            need: d,
            have: base.truncation().min(group.truncation()),
        });
    }
    let bd: Arc<Presentation> = if base.truncation() == d {
        base.clone()
    } else {
        Arc::new(truncate_presentation(base, d))
    };
    if action.space.truncation() != d || !action.group.same_tables_upto(group, d) {
        return Err(BundleError::Mismatch);
    }

    let twistings = match enumerate_twistings(&bd, group, budget) {
        SearchOutcome::Found(list) => list,
        _ => return Err(BundleError::Budget),
    };
    let t_classes = match twisting_classes(&twistings, budget)? {
        SearchOutcome::Found(classes) => classes,
        _ => return Err(BundleError::Budget),
    };
    for class in &t_classes {
        for &member in &class[1..] {
            let wit = match twisting_equivalent(&twistings[class[0]], &twistings[member], budget)? {
                SearchOutcome::Found(wit) => wit,
                SearchOutcome::Refuted => return Err(BundleError::Mismatch),
                SearchOutcome::Exhausted => return Err(BundleError::Budget),
            };
            check_translation(&twistings[class[0]], &twistings[member], &wit.gamma, action)?;
        }
    }

    let w = wbar(group, d)?;
    let cat = Arc::new(FiniteCategory::terminal());
    let bdg = Arc::new(Diagram::constant(cat.clone(), bd.clone()));
    let wdg = Arc::new(Diagram::constant(cat, w.space.clone()));
    let maps = match enumerate_diagram_maps(&bdg, &wdg, budget) {
        SearchOutcome::Found(list) => list,
        _ => return Err(BundleError::Budget),
    };

    let mut root: Vec<usize> = (0..maps.len()).collect();
    fn find(root: &mut Vec<usize>, mut a: usize) -> usize {
        while root[a] != a {
            root[a] = root[root[a]];
            a = root[a];
        }
        a
    }
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            if find(&mut root, i) == find(&mut root, j) {
                continue;
            }
            let mut related = match diagram_homotopy(&maps[i], &maps[j], budget) {
                SearchOutcome::Found(_) => true,
                SearchOutcome::Refuted => false,
                SearchOutcome::Exhausted => return Err(BundleError::Budget),
            };
            if !related {
                related = match diagram_homotopy(&maps[j], &maps[i], budget) {
                    SearchOutcome::Found(_) => true,
                    SearchOutcome::Refuted => false,
                    SearchOutcome::Exhausted => return Err(BundleError::Budget),
                };
            }
            if related {
                let (a, b) = (find(&mut root, i), find(&mut root, j));
                root[a] = b;
            }
        }
    }
    let mut map_classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..maps.len() {
        let r = find(&mut root, i);
        match map_classes.iter_mut().find(|cl| find(&mut root, cl[0]) == r) {
            Some(cl) => cl.push(i),
            None => map_classes.push(vec![i]),
        }
    }

    let located: Vec<usize> = twistings
        .iter()
        .map(|t| {
            let c = classifying_map(t, &w)?;
            let k = maps
                .iter()
                .position(|m| m.components[0].assignment() == c.assignment())
                .expect("exhaustive enumeration contains every simplicial map");
            Ok(map_classes
                .iter()
                .position(|cl| cl.contains(&k))
                .expect("every map lies in a homotopy class"))
        })
        .collect::<Result<_, BundleError>>()?;

    let mut well_defined = true;
    let assignment: Vec<usize> = t_classes
        .iter()
        .map(|class| {
            let first = located[class[0]];
            if class.iter().any(|&m| located[m] != first) {
                well_defined = false;
            }
            first
        })
        .collect();
    let mut distinct = assignment.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let injective = distinct.len() == assignment.len();
    let surjective = distinct.len() == map_classes.len();
    let bijection = well_defined && injective && surjective;

    Ok(ClassifyReport {
        twisting_count: twistings.len(),
        twisting_classes: t_classes,
        map_count: maps.len(),
        map_classes,
        assignment,
        bijection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::group::{two_point_swap, GroupTable};
    use crate::simplicial::{circle, standard_simplex};

    #[test]
    fn circle_double_covers_split_into_two_classes_matching_the_maps() {
        let cat = Arc::new(FiniteCategory::terminal());
        let (group, action) = two_point_swap(cat, 2).unwrap();
        let base = Arc::new(circle(2));
        let mut budget = Budget::limited(5_000_000);
        let report = classify(&base, &group, &action, 2, &mut budget).unwrap();
        assert_eq!(report.twisting_count, 2);
        assert_eq!(report.twisting_classes.len(), 2);
        assert_eq!(report.map_count, 2);
        assert_eq!(report.map_classes.len(), 2);
        assert!(report.bijection);
    }

    #[test]
    fn contractible_base_has_one_class_on_each_side() {
        let cat = Arc::new(FiniteCategory::terminal());
        let (group, action) = two_point_swap(cat, 2).unwrap();
        let base = Arc::new(standard_simplex(1, 2));
        let mut budget = Budget::limited(5_000_000);
        let report = classify(&base, &group, &action, 2, &mut budget).unwrap();
        assert_eq!(report.twisting_count, 2);
        assert_eq!(report.twisting_classes.len(), 1);
        assert_eq!(report.map_classes.len(), 1);
        assert!(report.bijection);
    }

    #[test]
    fn trivial_group_always_gives_one_class() {
        let cat = Arc::new(FiniteCategory::terminal());
        let group = Arc::new(SimplicialGroup::constant(GroupTable::trivial(), 2));
        let base = Arc::new(circle(2));
        let mut fp = Presentation::new(2);
        fp.add_vertex("x");
        let space = Arc::new(Diagram::constant(Arc::new(FiniteCategory::terminal()), Arc::new(fp)));
        let action = GroupAction::trivial(group.clone(), space).unwrap();
        let mut budget = Budget::limited(1_000_000);
        let report = classify(&base, &group, &action, 2, &mut budget).unwrap();
        assert_eq!(report.twisting_classes.len(), 1);
        assert_eq!(report.map_classes.len(), 1);
        assert!(report.bijection);
        let _ = cat;
    }

    #[test]
    fn starved_budget_is_reported_as_such() {
        let cat = Arc::new(FiniteCategory::terminal());
        let (group, action) = two_point_swap(cat, 2).unwrap();
        let base = Arc::new(circle(2));
        let mut budget = Budget::limited(3);
        let out = classify(&base, &group, &action, 2, &mut budget);
        assert!(matches!(out, Err(BundleError::Budget)));
    }
}
