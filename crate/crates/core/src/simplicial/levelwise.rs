//! Builds a generator presentation out of explicit level data.
//!
//! Some simplicial sets are easiest to describe by listing every simplex of
//! every dimension together with total face and degeneracy maps. This module
//! turns such data into a [`Presentation`] by detecting which elements are
//! degenerate, keeping the rest as generators, and recording faces in normal
//! form. The raw operators are verified against the simplicial identities
//! first, so a bad table is rejected instead of producing a broken
//! presentation.

use super::{Presentation, PresentationError, SimplexRef};
use std::collections::BTreeMap;

/// Explicit levels of a truncated simplicial set.
pub trait LevelwiseData {
    type Elem: Clone + Ord + std::fmt::Debug;

    fn truncation(&self) -> usize;
    /// All elements of dimension `n`, in a deterministic order.
    fn level(&self, n: usize) -> Vec<Self::Elem>;
    /// `d_i` on dimension `n >= 1`.
    fn face(&self, n: usize, i: usize, e: &Self::Elem) -> Self::Elem;
    /// `s_i` on dimension `n`.
    fn degeneracy(&self, n: usize, i: usize, e: &Self::Elem) -> Self::Elem;
    /// Printable name used for generators.
    fn label(&self, n: usize, e: &Self::Elem) -> String;
}

/// Outcome of the conversion: the presentation plus translation tables.
#[derive(Debug, Clone)]
pub struct LevelwiseResult<E: Ord> {
    pub presentation: Presentation,
    /// Normal form of every raw element, per dimension.
    pub to_ref: Vec<BTreeMap<E, SimplexRef>>,
    /// Raw element behind each generator, per dimension.
    pub gen_elem: Vec<Vec<E>>,
}

impl<E: Ord + Clone> LevelwiseResult<E> {
    /// Normal form of a raw element of dimension `n`.
    pub fn normal_form(&self, n: usize, e: &E) -> &SimplexRef {
        self.to_ref[n].get(e).expect("element listed in level data")
    }
}

/// Errors specific to level data conversion.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LevelwiseError {
    #[error("operator tables violate a simplicial identity at dim {dim}: {what}")]
    Identity { dim: usize, what: String },
    #[error("face of a listed element is not listed at dim {0}")]
    MissingElement(usize),
    #[error("degeneracy witnesses disagree at dim {0}")]
    AmbiguousNormalForm(usize),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// Converts level data to a presentation with face tables in normal form.
pub fn presentation_from_levels<D: LevelwiseData>(
    data: &D,
) -> Result<LevelwiseResult<D::Elem>, LevelwiseError> {
    let trunc = data.truncation();
    verify_level_identities(data)?;

    let mut presentation = Presentation::new(trunc);
    let mut to_ref: Vec<BTreeMap<D::Elem, SimplexRef>> = Vec::with_capacity(trunc + 1);
    let mut gen_elem: Vec<Vec<D::Elem>> = Vec::with_capacity(trunc + 1);

    for n in 0..=trunc {
        let elems = data.level(n);
        let level_set: std::collections::BTreeSet<D::Elem> = elems.iter().cloned().collect();
        // Witness (i, parent) for every element that is a degeneracy image.
        let mut degenerate: BTreeMap<D::Elem, (usize, D::Elem)> = BTreeMap::new();
        if n >= 1 {
            for parent in data.level(n - 1) {
                for i in 0..n {
                    let img = data.degeneracy(n - 1, i, &parent);
                    if !level_set.contains(&img) {
                        return Err(LevelwiseError::MissingElement(n));
                    }
                    degenerate.entry(img).or_insert((i, parent.clone()));
                }
            }
        }
        let mut level_refs: BTreeMap<D::Elem, SimplexRef> = BTreeMap::new();
        for e in &elems {
            if degenerate.contains_key(e) {
                continue;
            }
            let gid = if n == 0 {
                presentation.add_vertex(data.label(n, e))
            } else {
                let faces = (0..=n)
                    .map(|i| {
                        let fe = data.face(n, i, e);
                        to_ref[n - 1]
                            .get(&fe)
                            .cloned()
                            .ok_or(LevelwiseError::MissingElement(n - 1))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                presentation.add_generator(data.label(n, e), faces)?
            };
            level_refs.insert(e.clone(), SimplexRef::generator(gid));
            gen_elem_push(&mut gen_elem, n, e.clone());
        }
        // Resolve degenerate elements through their witnesses; parents are in
        // the previous level so their refs are already known.
        let mut pending: Vec<&D::Elem> =
            elems.iter().filter(|e| degenerate.contains_key(*e)).collect();
        while !pending.is_empty() {
            let before = pending.len();
            pending.retain(|e| {
                let (i, parent) = &degenerate[*e];
                match to_ref[n - 1].get(parent) {
                    Some(pr) => {
                        let mut word = pr.word.clone();
                        super::word_insert(&mut word, *i);
                        level_refs.insert((*e).clone(), SimplexRef { base: pr.base, word });
                        false
                    }
                    None => true,
                }
            });
            if pending.len() == before {
                return Err(LevelwiseError::MissingElement(n));
            }
        }
        // Every witness must agree with the recorded normal form; this is
        // where inconsistent tables surface.
        if n >= 1 {
            for parent in data.level(n - 1) {
                let pr = &to_ref[n - 1][&parent];
                for i in 0..n {
                    let img = data.degeneracy(n - 1, i, &parent);
                    let mut word = pr.word.clone();
                    super::word_insert(&mut word, i);
                    let expect = SimplexRef { base: pr.base, word };
                    if level_refs.get(&img) != Some(&expect) {
                        return Err(LevelwiseError::AmbiguousNormalForm(n));
                    }
                }
            }
        }
        if gen_elem.len() == n {
            gen_elem.push(Vec::new());
        }
        to_ref.push(level_refs);
    }
    presentation.validate()?;
    Ok(LevelwiseResult { presentation, to_ref, gen_elem })
}

fn gen_elem_push<E>(gen_elem: &mut Vec<Vec<E>>, n: usize, e: E) {
    while gen_elem.len() <= n {
        gen_elem.push(Vec::new());
    }
    gen_elem[n].push(e);
}

/// Checks all simplicial identities directly on the raw operator tables.
fn verify_level_identities<D: LevelwiseData>(data: &D) -> Result<(), LevelwiseError> {
    let trunc = data.truncation();
    for n in 0..=trunc {
        for e in data.level(n) {
            if n >= 2 {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = data.face(n - 1, i, &data.face(n, j, &e));
                        let rhs = data.face(n - 1, j - 1, &data.face(n, i, &e));
                        if lhs != rhs {
                            return Err(LevelwiseError::Identity {
                                dim: n,
                                what: format!("d_{} d_{} on {:?}", i, j, e),
                            });
                        }
                    }
                }
            }
            if n + 2 <= trunc {
                for j in 0..=n {
                    for i in 0..=j {
                        let lhs = data.degeneracy(n + 1, i, &data.degeneracy(n, j, &e));
                        let rhs = data.degeneracy(n + 1, j + 1, &data.degeneracy(n, i, &e));
                        if lhs != rhs {
                            return Err(LevelwiseError::Identity {
                                dim: n,
                                what: format!("s_{} s_{} on {:?}", i, j, e),
                            });
                        }
                    }
                }
            }
            if n + 1 <= trunc {
                for j in 0..=n {
                    let sj = data.degeneracy(n, j, &e);
                    for i in 0..=n + 1 {
                        let lhs = data.face(n + 1, i, &sj);
                        let ok = if i < j {
                            lhs == data.degeneracy(n - 1, j - 1, &data.face(n, i, &e))
                        } else if i == j || i == j + 1 {
                            lhs == e
                        } else {
                            lhs == data.degeneracy(n - 1, j, &data.face(n, i - 1, &e))
                        };
                        if !ok {
                            return Err(LevelwiseError::Identity {
                                dim: n,
                                what: format!("d_{} s_{} on {:?}", i, j, e),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
