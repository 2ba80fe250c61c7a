//! The classifying complex of a simplicial group: n-simplices are tuples
//! `(g_{n-1}, ..., g_0)` with `g_j` of level j, the top entry is the
//! universal twisting value, and simplicial maps into it classify twisted
//! products of the group.

use std::sync::Arc;

use super::group::SimplicialGroup;
use super::twisting::TwistingFunction;
use super::BundleError;
use crate::simplicial::{
    presentation_from_levels, LevelwiseData, LevelwiseResult, Presentation, SimplexRef,
    SimplicialMap,
};

/// Tuples are stored subscript first: `tuple[j]` is the level-j entry, so
/// the top entry sits at index `n - 1`.
fn wbar_face(group: &SimplicialGroup, n: usize, i: usize, g: &[usize]) -> Vec<usize> {
    if i == 0 {
        return g[..n - 1].to_vec();
    }
    (0..n - 1)
        .map(|j| {
            if j >= n - i {
                group.face(j + 1, j + i + 1 - n, g[j + 1])
            } else if j + 1 == n - i {
                group.mult(j, g[j], group.face(n - i, 0, g[n - i]))
            } else {
                g[j]
            }
        })
        .collect()
}

fn wbar_degeneracy(group: &SimplicialGroup, n: usize, i: usize, g: &[usize]) -> Vec<usize> {
    (0..=n)
        .map(|j| {
            if j >= n + 1 - i {
                group.degeneracy(j - 1, j + i - 1 - n, g[j - 1])
            } else if j == n - i {
                group.unit(j)
            } else {
                g[j]
            }
        })
        .collect()
}

struct WbarLevels<'a> {
    group: &'a SimplicialGroup,
    truncation: usize,
}

impl LevelwiseData for WbarLevels<'_> {
    type Elem = Vec<usize>;

    fn truncation(&self) -> usize {
        self.truncation
    }

    fn level(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for j in 0..n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..self.group.order(j)).map(move |g| {
                        let mut u = t.clone();
                        u.push(g);
                        u
                    })
                })
                .collect();
        }
        out
    }

    fn face(&self, n: usize, i: usize, e: &Vec<usize>) -> Vec<usize> {
        wbar_face(self.group, n, i, e)
    }

    fn degeneracy(&self, n: usize, i: usize, e: &Vec<usize>) -> Vec<usize> {
        wbar_degeneracy(self.group, n, i, e)
    }

    fn label(&self, _n: usize, e: &Vec<usize>) -> String {
        if e.is_empty() {
            "*".to_string()
        } else {
            let parts: Vec<&str> =
                e.iter().enumerate().rev().map(|(j, &g)| self.group.level(j).name(g)).collect();
            parts.join(",")
        }
    }
}

/// The classifying complex with its tuple bookkeeping.
pub struct WbarComplex {
    pub group: Arc<SimplicialGroup>,
    pub space: Arc<Presentation>,
    truncation: usize,
    tables: LevelwiseResult<Vec<usize>>,
}

/// Builds the classifying complex up to dimension `d`.
pub fn wbar(group: &Arc<SimplicialGroup>, d: usize) -> Result<WbarComplex, BundleError> {
    if group.truncation() + 1 < d {
        return Err(BundleError::Truncation { need: d.saturating_sub(1), have: group.truncation() });
    }
    let built = presentation_from_levels(&WbarLevels { group, truncation: d })?;
    Ok(WbarComplex {
        group: group.clone(),
        space: Arc::new(built.presentation.clone()),
        truncation: d,
        tables: built,
    })
}

impl WbarComplex {
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// The simplex carrying a tuple.
    pub fn ref_of(&self, tuple: &[usize]) -> SimplexRef {
        self.tables.normal_form(tuple.len(), &tuple.to_vec()).clone()
    }

    /// The tuple behind a simplex.
    pub fn tuple_of(&self, r: &SimplexRef) -> Vec<usize> {
        let mut t = self.tables.gen_elem[r.base.dim][r.base.idx].clone();
        let mut dim = r.base.dim;
        for &j in r.word.iter().rev() {
            t = wbar_degeneracy(&self.group, dim, j, &t);
            dim += 1;
        }
        t
    }

    /// The top tuple entry as a twisting function on the classifying
    /// complex itself. That it validates is the self-test of the operator
    /// tables above.
    pub fn universal_twisting(&self) -> Result<TwistingFunction, BundleError> {
        let values = (0..=self.truncation)
            .map(|n| {
                if n == 0 {
                    Vec::new()
                } else {
                    self.space.simplices(n).iter().map(|r| self.tuple_of(r)[n - 1]).collect()
                }
            })
            .collect();
        TwistingFunction::new(self.space.clone(), self.group.clone(), values)
    }
}

/// The simplicial map to the classifying complex whose level-n value
/// stacks the twisting values along iterated zeroth faces.
pub fn classifying_map(
    t: &TwistingFunction,
    w: &WbarComplex,
) -> Result<SimplicialMap, BundleError> {
    let trunc = t.base.truncation();
    if w.truncation != trunc {
        return Err(BundleError::Truncation { need: trunc, have: w.truncation });
    }
    if trunc >= 1 && !t.group.same_tables_upto(&w.group, trunc - 1) {
        return Err(BundleError::Mismatch);
    }
    let assign = (0..=trunc)
        .map(|n| {
            t.base
                .generators(n)
                .map(|gen| {
                    let mut tuple = vec![0usize; n];
                    let mut cur = SimplexRef::generator(gen);
                    for j in (0..n).rev() {
                        tuple[j] = t.value(&cur);
                        cur = t.base.face(&cur, 0);
                    }
                    w.ref_of(&tuple)
                })
                .collect()
        })
        .collect();
    let map = SimplicialMap::new(t.base.clone(), w.space.clone(), assign);
    map.validate().map_err(|e| BundleError::NotSimplicial(e.to_string()))?;
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::group::GroupTable;
    use crate::simplicial::circle;
    use std::collections::BTreeMap;

    fn constant(order: usize, trunc: usize) -> Arc<SimplicialGroup> {
        Arc::new(SimplicialGroup::constant(GroupTable::cyclic(order), trunc))
    }

    #[test]
    fn trivial_group_classifies_to_a_point() {
        let w = wbar(&constant(1, 3), 3).unwrap();
        assert_eq!(w.space.generator_counts(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn order_two_complex_has_one_fresh_simplex_per_dim() {
        let w = wbar(&constant(2, 3), 3).unwrap();
        assert_eq!(w.space.generator_counts(), vec![1, 1, 1, 1]);
        for n in 0..=3 {
            assert_eq!(w.space.simplex_count(n), 1 << n);
        }
        let edge = w.ref_of(&[1]);
        assert!(edge.word.is_empty());
        let degenerate = w.ref_of(&[0]);
        assert!(!degenerate.word.is_empty());
    }

    #[test]
    fn universal_twisting_validates() {
        for order in [2, 3] {
            let w = wbar(&constant(order, 3), 3).unwrap();
            let t = w.universal_twisting().unwrap();
            assert!(t.validate().is_ok());
        }
    }

    #[test]
    fn universal_twisting_classifies_by_the_identity_map() {
        let w = wbar(&constant(2, 2), 2).unwrap();
        let t = w.universal_twisting().unwrap();
        let c = classifying_map(&t, &w).unwrap();
        assert_eq!(c.assignment(), SimplicialMap::identity(w.space.clone()).assignment());
    }

    #[test]
    fn circle_twistings_classify_to_distinct_edges() {
        let base = Arc::new(circle(2));
        let group = constant(2, 2);
        let w = wbar(&group, 2).unwrap();
        let units = TwistingFunction::units(base.clone(), group.clone());
        let e = base.generator_by_name("e").unwrap();
        let assign: BTreeMap<_, _> = [(e, 1)].into_iter().collect();
        let twisted = TwistingFunction::from_nondegenerate(base, group, &assign).unwrap();
        let cu = classifying_map(&units, &w).unwrap();
        let ct = classifying_map(&twisted, &w).unwrap();
        assert_ne!(cu.assignment(), ct.assignment());
        assert_eq!(ct.apply(&SimplexRef::generator(e)), w.ref_of(&[1]));
    }
}
