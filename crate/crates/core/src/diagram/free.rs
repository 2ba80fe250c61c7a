//! Free diagrams and their bases.
//!
//! A basis of a diagram is a degeneracy-closed set of simplices such that
//! every simplex of the diagram is the image of exactly one basis element
//! under exactly one morphism of the index category. Freeness is a property;
//! `compute_basis` decides it by an exact-unique-cover search per dimension
//! and returns the canonically least basis when one exists.

use super::{Diagram, DiagramMap, ObjSimplex};
use crate::budget::{Budget, SearchOutcome};
use crate::category::FiniteCategory;
use crate::simplicial::{GenId, Presentation, SimplexRef, SimplicialMap};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BasisError {
    #[error("basis is not closed under degeneracies at {0:?}")]
    NotDegeneracyClosed(ObjSimplex),
    #[error("simplex {x:?} has {count} basis witnesses, expected exactly one")]
    WitnessCount { x: ObjSimplex, count: usize },
    #[error("recorded witness for {0:?} disagrees with the unique cover")]
    WitnessMismatch(ObjSimplex),
    #[error("witness table misses simplex {0:?}")]
    WitnessMissing(ObjSimplex),
}

/// A basis of a free diagram together with the full witness table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeBasis {
    /// All basis simplices, including degenerate ones.
    pub gens: BTreeSet<ObjSimplex>,
    /// For every simplex of the diagram, its unique (basis element,
    /// morphism) decomposition.
    pub witness: BTreeMap<ObjSimplex, (ObjSimplex, usize)>,
}

impl FreeBasis {
    pub fn empty() -> Self {
        FreeBasis { gens: BTreeSet::new(), witness: BTreeMap::new() }
    }

    /// Non-degenerate basis elements, dimension ascending in canonical order.
    pub fn cells(&self) -> Vec<ObjSimplex> {
        self.gens.iter().filter(|b| !b.simplex.is_degenerate()).cloned().collect()
    }

    /// Basis elements of one dimension.
    pub fn gens_of_dim(&self, n: usize) -> Vec<ObjSimplex> {
        self.gens.iter().filter(|b| b.dim() == n).cloned().collect()
    }

    /// The unique decomposition of a simplex.
    pub fn decompose(&self, x: &ObjSimplex) -> &(ObjSimplex, usize) {
        self.witness.get(x).expect("every simplex has a decomposition")
    }

    /// Exhaustively re-checks the basis axioms against the diagram.
    pub fn verify(&self, x: &Diagram) -> Result<(), BasisError> {
        for b in &self.gens {
            if b.dim() < x.truncation() {
                for i in 0..=b.dim() {
                    let s = x.degeneracy(b, i);
                    if !self.gens.contains(&s) {
                        return Err(BasisError::NotDegeneracyClosed(b.clone()));
                    }
                }
            }
        }
        for n in 0..=x.truncation() {
            let level_gens: Vec<&ObjSimplex> =
                self.gens.iter().filter(|b| b.dim() == n).collect();
            for s in x.simplices(n) {
                let mut found: Option<(ObjSimplex, usize)> = None;
                let mut count = 0usize;
                for b in &level_gens {
                    for m in x.cat.hom(b.obj, s.obj) {
                        if x.apply_mor(m, b) == s {
                            count += 1;
                            found = Some(((*b).clone(), m));
                        }
                    }
                }
                if count != 1 {
                    return Err(BasisError::WitnessCount { x: s, count });
                }
                match self.witness.get(&s) {
                    None => return Err(BasisError::WitnessMissing(s)),
                    Some(w) if Some(w) != found.as_ref() => {
                        return Err(BasisError::WitnessMismatch(s))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

/// The free diagram on a presentation placed at object `c`: its value at
/// `d` is one copy of `y` per morphism `c -> d`, morphisms act by
/// post-composition on the copy labels.
pub fn free_diagram_from(
    cat: Arc<FiniteCategory>,
    c: usize,
    y: &Presentation,
) -> (Diagram, FreeBasis) {
    let trunc = y.truncation();
    let nob = cat.object_count();
    // Copy labels at object d are the morphisms c -> d in index order.
    let copies: Vec<Vec<usize>> = (0..nob).map(|d| cat.hom(c, d)).collect();
    let mut at: Vec<Arc<Presentation>> = Vec::with_capacity(nob);
    // (object, copy morphism, y-generator) -> generator id in at(object).
    let mut gen_index: BTreeMap<(usize, usize, GenId), GenId> = BTreeMap::new();
    for d in 0..nob {
        let mut p = Presentation::new(trunc);
        for dim in 0..=trunc {
            for &h in &copies[d] {
                for yg in y.generators(dim) {
                    let name = format!("{}@{}", y.generator_name(yg), cat.morphism(h).name);
                    let gid = if dim == 0 {
                        p.add_vertex(name)
                    } else {
                        let faces = y
                            .generator_faces(yg)
                            .iter()
                            .map(|f| SimplexRef {
                                base: gen_index[&(d, h, f.base)],
                                word: f.word.clone(),
                            })
                            .collect();
                        p.add_generator(name, faces).expect("copied faces are valid")
                    };
                    gen_index.insert((d, h, yg), gid);
                }
            }
        }
        at.push(Arc::new(p));
    }
    let act = (0..cat.morphism_count())
        .map(|f| {
            let mor = cat.morphism(f);
            let assign = (0..=trunc)
                .map(|dim| {
                    copies[mor.src]
                        .iter()
                        .flat_map(|&h| {
                            let fh = cat.compose(f, h).expect("h lands at src of f");
                            y.generators(dim)
                                .map(move |yg| (h, fh, yg))
                        })
                        .map(|(_h, fh, yg)| {
                            SimplexRef::generator(gen_index[&(mor.dst, fh, yg)])
                        })
                        .collect()
                })
                .collect();
            SimplicialMap::new(at[mor.src].clone(), at[mor.dst].clone(), assign)
        })
        .collect();
    let diagram = Diagram::new(cat.clone(), at, act);
    // Basis: the identity copy at c, all of its simplices.
    let idc = cat.identity(c);
    let mut gens = BTreeSet::new();
    let mut witness = BTreeMap::new();
    for n in 0..=trunc {
        for ys in y.simplices(n) {
            let base_ref = SimplexRef {
                base: gen_index[&(c, idc, ys.base)],
                word: ys.word.clone(),
            };
            gens.insert(ObjSimplex::new(c, base_ref));
        }
    }
    for d in 0..nob {
        for &h in &copies[d] {
            for n in 0..=trunc {
                for ys in y.simplices(n) {
                    let here = SimplexRef {
                        base: gen_index[&(d, h, ys.base)],
                        word: ys.word.clone(),
                    };
                    let origin = SimplexRef {
                        base: gen_index[&(c, idc, ys.base)],
                        word: ys.word.clone(),
                    };
                    witness.insert(
                        ObjSimplex::new(d, here),
                        (ObjSimplex::new(c, origin), h),
                    );
                }
            }
        }
    }
    (diagram, FreeBasis { gens, witness })
}

/// Decides freeness and returns the canonically least basis if one exists.
///
/// The search walks dimensions bottom up. Inside a dimension it scans the
/// simplices in canonical order and decides membership, keeping for every
/// simplex the number of covers by chosen elements and the number of covers
/// still possible; a simplex covered twice or coverable zero times prunes
/// the branch. Degeneracies of lower basis elements are forced in.
pub fn compute_basis(x: &Diagram, budget: &mut Budget) -> SearchOutcome<FreeBasis> {
    let trunc = x.truncation();
    let mut levels: Vec<Vec<ObjSimplex>> = Vec::with_capacity(trunc + 1);
    for n in 0..=trunc {
        levels.push(x.simplices(n));
    }
    // cover_pairs[n][i] lists (target index, morphism) pairs reachable from
    // element i of level n.
    let mut cover_pairs: Vec<Vec<Vec<(usize, usize)>>> = Vec::with_capacity(trunc + 1);
    for level in &levels {
        let pos: BTreeMap<&ObjSimplex, usize> =
            level.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let pairs = level
            .iter()
            .map(|b| {
                x.cat
                    .from_object(b.obj)
                    .into_iter()
                    .map(|m| (pos[&x.apply_mor(m, b)], m))
                    .collect()
            })
            .collect();
        cover_pairs.push(pairs);
    }

    struct State<'a> {
        x: &'a Diagram,
        levels: &'a [Vec<ObjSimplex>],
        cover_pairs: &'a [Vec<Vec<(usize, usize)>>],
        chosen: Vec<Vec<bool>>,
        cnt: Vec<Vec<usize>>,
        avail: Vec<Vec<usize>>,
        snapshot: Option<Vec<Vec<bool>>>,
    }

    // The chosen flags are cleared on unwind, so the success leaf snapshots
    // them before returning.
    fn solve(
        st: &mut State,
        n: usize,
        pos: usize,
        required: &BTreeSet<usize>,
        budget: &mut Budget,
    ) -> SearchOutcome<()> {
        if budget.tick().is_err() {
            return SearchOutcome::Exhausted;
        }
        let trunc = st.levels.len() - 1;
        if pos == st.levels[n].len() {
            debug_assert!(st.cnt[n].iter().all(|&c| c == 1));
            if n == trunc {
                st.snapshot = Some(st.chosen.clone());
                return SearchOutcome::Found(());
            }
            // Degeneracies of the chosen level are forced in the next one.
            let mut next_required = BTreeSet::new();
            let next_pos: BTreeMap<&ObjSimplex, usize> =
                st.levels[n + 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
            for (i, s) in st.levels[n].iter().enumerate() {
                if st.chosen[n][i] {
                    for j in 0..=n {
                        next_required.insert(next_pos[&st.x.degeneracy(s, j)]);
                    }
                }
            }
            return solve(st, n + 1, 0, &next_required, budget);
        }
        // Include branch first: the first solution found is canonically
        // least because earlier elements are preferred. Including fails if
        // any target would be covered twice, also when both covers come
        // from this element via two morphisms.
        'include: {
            let mut applied = 0;
            let mut clash = false;
            for &(t, _m) in &st.cover_pairs[n][pos] {
                st.cnt[n][t] += 1;
                applied += 1;
                if st.cnt[n][t] > 1 {
                    clash = true;
                    break;
                }
            }
            if clash {
                for &(t, _m) in st.cover_pairs[n][pos].iter().take(applied) {
                    st.cnt[n][t] -= 1;
                }
                break 'include;
            }
            st.chosen[n][pos] = true;
            let r = solve(st, n, pos + 1, required, budget);
            st.chosen[n][pos] = false;
            for &(t, _m) in &st.cover_pairs[n][pos] {
                st.cnt[n][t] -= 1;
            }
            if !matches!(r, SearchOutcome::Refuted) {
                return r;
            }
        }
        // Exclude branch, unless forced in. Fails if some target loses its
        // last possible cover.
        if !required.contains(&pos) {
            let mut applied = 0;
            let mut dead = false;
            for &(t, _m) in &st.cover_pairs[n][pos] {
                st.avail[n][t] -= 1;
                applied += 1;
                if st.avail[n][t] == 0 {
                    dead = true;
                    break;
                }
            }
            let r = if dead {
                SearchOutcome::Refuted
            } else {
                solve(st, n, pos + 1, required, budget)
            };
            for &(t, _m) in st.cover_pairs[n][pos].iter().take(applied) {
                st.avail[n][t] += 1;
            }
            return r;
        }
        SearchOutcome::Refuted
    }

    let mut st = State {
        x,
        levels: &levels,
        cover_pairs: &cover_pairs,
        chosen: levels.iter().map(|l| vec![false; l.len()]).collect(),
        cnt: levels.iter().map(|l| vec![0; l.len()]).collect(),
        avail: levels
            .iter()
            .enumerate()
            .map(|(n, l)| {
                let mut a = vec![0usize; l.len()];
                for src in 0..l.len() {
                    for &(t, _m) in &cover_pairs[n][src] {
                        a[t] += 1;
                    }
                }
                a
            })
            .collect(),
        snapshot: None,
    };
    match solve(&mut st, 0, 0, &BTreeSet::new(), budget) {
        SearchOutcome::Found(()) => {
            let chosen = st.snapshot.expect("success recorded a snapshot");
            let mut gens = BTreeSet::new();
            let mut witness = BTreeMap::new();
            for (n, level) in levels.iter().enumerate() {
                for (i, s) in level.iter().enumerate() {
                    if chosen[n][i] {
                        gens.insert(s.clone());
                        for &(t, m) in &cover_pairs[n][i] {
                            witness.insert(levels[n][t].clone(), (s.clone(), m));
                        }
                    }
                }
            }
            SearchOutcome::Found(FreeBasis { gens, witness })
        }
        SearchOutcome::Refuted => SearchOutcome::Refuted,
        SearchOutcome::Exhausted => SearchOutcome::Exhausted,
    }
}

/// Attaches a free cell at object `c` along a boundary in `x.value(c)`.
///
/// `boundary` lists the faces `d_0 .. d_n` of the new `n`-cell; it must be
/// empty exactly when `n = 0`. Every object gains one new generator per
/// morphism out of `c`, and the basis grows by the new cell and its
/// degeneracies.
pub fn attach_cell(
    x: &Diagram,
    basis: &FreeBasis,
    c: usize,
    n: usize,
    boundary: Vec<SimplexRef>,
    name: &str,
) -> Result<(Diagram, FreeBasis), crate::simplicial::PresentationError> {
    let cat = x.cat.clone();
    let trunc = x.truncation();
    assert!(n <= trunc, "cell dimension exceeds truncation");
    assert_eq!(boundary.len(), if n == 0 { 0 } else { n + 1 });
    let mut at: Vec<Arc<Presentation>> = Vec::with_capacity(cat.object_count());
    // (object, morphism from c) -> new generator id.
    let mut new_gen: BTreeMap<(usize, usize), GenId> = BTreeMap::new();
    for d in 0..cat.object_count() {
        let mut p = x.value(d).as_ref().clone();
        for h in cat.hom(c, d) {
            let gname = format!("{}@{}", name, cat.morphism(h).name);
            let gid = if n == 0 {
                p.add_vertex(gname)
            } else {
                let faces = boundary.iter().map(|b| x.action(h).apply(b)).collect();
                p.add_generator(gname, faces)?
            };
            new_gen.insert((d, h), gid);
        }
        at.push(Arc::new(p));
    }
    let act = (0..cat.morphism_count())
        .map(|f| {
            let mor = cat.morphism(f);
            let assign = (0..=trunc)
                .map(|dim| {
                    let mut level: Vec<SimplexRef> = (0..x.value(mor.src).generator_count(dim))
                        .map(|idx| x.action(f).generator_image(dim, idx).clone())
                        .collect();
                    if dim == n {
                        for h in cat.hom(c, mor.src) {
                            let fh = cat.compose(f, h).expect("composable");
                            level.push(SimplexRef::generator(new_gen[&(mor.dst, fh)]));
                        }
                    }
                    level
                })
                .collect();
            SimplicialMap::new(at[mor.src].clone(), at[mor.dst].clone(), assign)
        })
        .collect();
    let out = Diagram::new(cat.clone(), at, act);
    let mut gens = basis.gens.clone();
    let mut witness = basis.witness.clone();
    // Degeneracy closure of each new generator, per copy, with witnesses
    // rooted at the identity copy.
    let idc = cat.identity(c);
    let degeneracies = |obj: usize, gid: GenId| -> Vec<SimplexRef> {
        let mut all = vec![SimplexRef::generator(gid)];
        let mut frontier = all.clone();
        while let Some(r) = frontier.pop() {
            if r.dim() < trunc {
                for i in 0..=r.dim() {
                    let s = out.value(obj).degeneracy(&r, i);
                    if !all.contains(&s) {
                        all.push(s.clone());
                        frontier.push(s);
                    }
                }
            }
        }
        all.sort();
        all
    };
    let root_list = degeneracies(c, new_gen[&(c, idc)]);
    for r in &root_list {
        gens.insert(ObjSimplex::new(c, r.clone()));
    }
    for d in 0..cat.object_count() {
        for h in cat.hom(c, d) {
            for (r, root) in degeneracies(d, new_gen[&(d, h)]).iter().zip(&root_list) {
                debug_assert_eq!(r.word, root.word);
                witness.insert(
                    ObjSimplex::new(d, r.clone()),
                    (ObjSimplex::new(c, root.clone()), h),
                );
            }
        }
    }
    Ok((out, FreeBasis { gens, witness }))
}

/// A levelwise-closed subdiagram, re-presented with its own generators.
#[derive(Debug, Clone)]
pub struct SubDiagram {
    pub diagram: Arc<Diagram>,
    pub inclusion: DiagramMap,
    /// Generator of the subpresentation behind each member generator of the
    /// ambient presentation, per object.
    old_to_new: Vec<BTreeMap<GenId, GenId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubDiagramError {
    #[error("member set not closed under faces at {0:?}")]
    NotFaceClosed(ObjSimplex),
    #[error("member set not closed under degeneracies at {0:?}")]
    NotDegeneracyClosed(ObjSimplex),
    #[error("member set not closed under morphism {0}")]
    NotMorphismClosed(usize),
    #[error("member {0:?} has a base generator outside the set")]
    BaseMissing(ObjSimplex),
}

impl SubDiagram {
    /// Builds the subdiagram on the member sets, which must be closed under
    /// faces, degeneracies (within the truncation) and morphism action.
    pub fn new(
        ambient: Arc<Diagram>,
        members: &[BTreeSet<SimplexRef>],
    ) -> Result<SubDiagram, SubDiagramError> {
        let cat = ambient.cat.clone();
        let trunc = ambient.truncation();
        for (obj, set) in members.iter().enumerate() {
            for r in set {
                let x = ObjSimplex::new(obj, r.clone());
                if r.dim() >= 1 {
                    for i in 0..=r.dim() {
                        if !set.contains(&ambient.value(obj).face(r, i)) {
                            return Err(SubDiagramError::NotFaceClosed(x));
                        }
                    }
                }
                if r.dim() < trunc {
                    for i in 0..=r.dim() {
                        if !set.contains(&ambient.value(obj).degeneracy(r, i)) {
                            return Err(SubDiagramError::NotDegeneracyClosed(x));
                        }
                    }
                }
                if !set.contains(&SimplexRef::generator(r.base)) {
                    return Err(SubDiagramError::BaseMissing(x));
                }
            }
        }
        for m in 0..cat.morphism_count() {
            let mor = cat.morphism(m);
            for r in &members[mor.src] {
                if !members[mor.dst].contains(&ambient.action(m).apply(r)) {
                    return Err(SubDiagramError::NotMorphismClosed(m));
                }
            }
        }
        let mut old_to_new: Vec<BTreeMap<GenId, GenId>> = Vec::new();
        let mut at: Vec<Arc<Presentation>> = Vec::new();
        for (obj, set) in members.iter().enumerate() {
            let mut p = Presentation::new(trunc);
            let mut remap = BTreeMap::new();
            for dim in 0..=trunc {
                for g in ambient.value(obj).generators(dim) {
                    if !set.contains(&SimplexRef::generator(g)) {
                        continue;
                    }
                    let name = ambient.value(obj).generator_name(g);
                    let gid = if dim == 0 {
                        p.add_vertex(name)
                    } else {
                        let faces = ambient
                            .value(obj)
                            .generator_faces(g)
                            .iter()
                            .map(|f| SimplexRef { base: remap[&f.base], word: f.word.clone() })
                            .collect();
                        p.add_generator(name, faces).expect("faces are members")
                    };
                    remap.insert(g, gid);
                }
            }
            old_to_new.push(remap);
            at.push(Arc::new(p));
        }
        let act = (0..cat.morphism_count())
            .map(|m| {
                let mor = cat.morphism(m);
                let assign = (0..=trunc)
                    .map(|dim| {
                        ambient
                            .value(mor.src)
                            .generators(dim)
                            .filter(|g| old_to_new[mor.src].contains_key(g))
                            .map(|g| {
                                let img = ambient.action(m).apply(&SimplexRef::generator(g));
                                SimplexRef {
                                    base: old_to_new[mor.dst][&img.base],
                                    word: img.word,
                                }
                            })
                            .collect()
                    })
                    .collect();
                SimplicialMap::new(at[mor.src].clone(), at[mor.dst].clone(), assign)
            })
            .collect();
        let sub = Arc::new(Diagram::new(cat.clone(), at, act));
        // Inclusion back into the ambient diagram.
        let new_to_old: Vec<BTreeMap<GenId, GenId>> = old_to_new
            .iter()
            .map(|m| m.iter().map(|(o, n)| (*n, *o)).collect())
            .collect();
        let components = (0..cat.object_count())
            .map(|obj| {
                let assign = (0..=trunc)
                    .map(|dim| {
                        sub.value(obj)
                            .generators(dim)
                            .map(|g| SimplexRef::generator(new_to_old[obj][&g]))
                            .collect()
                    })
                    .collect();
                SimplicialMap::new(sub.value(obj).clone(), ambient.value(obj).clone(), assign)
            })
            .collect();
        let inclusion = DiagramMap::new(sub.clone(), ambient.clone(), components);
        Ok(SubDiagram { diagram: sub, inclusion, old_to_new })
    }

    /// Translates an ambient simplex into the subpresentation, if present.
    pub fn pull(&self, obj: usize, r: &SimplexRef) -> Option<SimplexRef> {
        self.old_to_new[obj]
            .get(&r.base)
            .map(|ng| SimplexRef { base: *ng, word: r.word.clone() })
    }

    /// Membership test for an ambient simplex.
    pub fn contains(&self, obj: usize, r: &SimplexRef) -> bool {
        self.old_to_new[obj].contains_key(&r.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::standard_simplex;

    #[test]
    fn free_on_terminal_category() {
        let cat = Arc::new(FiniteCategory::terminal());
        let y = standard_simplex(1, 2);
        let (d, basis) = free_diagram_from(cat, 0, &y);
        d.validate().unwrap();
        basis.verify(&d).unwrap();
        assert_eq!(d.value(0).generator_counts(), y.generator_counts());
    }

    #[test]
    fn free_on_arrow_category() {
        let cat = Arc::new(FiniteCategory::arrow());
        let y = standard_simplex(1, 2);
        // Place the free cell at `a`; the value at `b` is one copy.
        let (d, basis) = free_diagram_from(cat.clone(), 0, &y);
        d.validate().unwrap();
        basis.verify(&d).unwrap();
        assert_eq!(d.value(0).generator_counts(), y.generator_counts());
        assert_eq!(d.value(1).generator_counts(), y.generator_counts());
        // Place it at `b`; the value at `a` is empty.
        let (d2, basis2) = free_diagram_from(cat, 1, &y);
        d2.validate().unwrap();
        basis2.verify(&d2).unwrap();
        assert_eq!(d2.value(0).generator_counts(), vec![0, 0, 0]);
    }

    #[test]
    fn free_on_group_category() {
        let cat = Arc::new(FiniteCategory::z2());
        let y = standard_simplex(1, 2);
        let (d, basis) = free_diagram_from(cat, 0, &y);
        d.validate().unwrap();
        basis.verify(&d).unwrap();
        // Two copies of the interval at the single object.
        assert_eq!(d.value(0).generator_counts(), vec![4, 2, 0]);
    }

    #[test]
    fn compute_basis_recovers_free_structure() {
        let cat = Arc::new(FiniteCategory::z2());
        let y = standard_simplex(1, 2);
        let (d, basis) = free_diagram_from(cat, 0, &y);
        let found = compute_basis(&d, &mut Budget::limited(100_000))
            .found()
            .expect("free diagram has a basis");
        found.verify(&d).unwrap();
        assert_eq!(found.gens.len(), basis.gens.len());
    }

    #[test]
    fn constant_diagram_over_group_is_not_free() {
        // Trivial action of Z/2 on a point: the point is covered by both
        // group elements, so no unique-witness set exists.
        let cat = Arc::new(FiniteCategory::z2());
        let p = Arc::new(standard_simplex(0, 2));
        let d = Diagram::constant(cat, p);
        let r = compute_basis(&d, &mut Budget::limited(100_000));
        assert_eq!(r, SearchOutcome::Refuted);
    }

    #[test]
    fn constant_diagram_over_arrow_is_free() {
        // With one arrow a -> b and identity transition, the copy at `a`
        // covers both objects uniquely.
        let cat = Arc::new(FiniteCategory::arrow());
        let p = Arc::new(standard_simplex(0, 2));
        let d = Diagram::constant(cat, p);
        let basis = compute_basis(&d, &mut Budget::limited(100_000))
            .found()
            .expect("injective transition keeps the diagram free");
        basis.verify(&d).unwrap();
        // Exactly the simplices sitting at `a`.
        assert!(basis.gens.iter().all(|b| b.obj == 0));
    }

    #[test]
    fn attach_cell_grows_basis() {
        let cat = Arc::new(FiniteCategory::arrow());
        let empty = Diagram::empty(cat.clone(), 2);
        let (with_pt, b1) =
            attach_cell(&empty, &FreeBasis::empty(), 0, 0, vec![], "p").unwrap();
        with_pt.validate().unwrap();
        b1.verify(&with_pt).unwrap();
        // A loop on the point at object a.
        let v = SimplexRef::generator(with_pt.value(0).generator_by_name("p@id_a").unwrap());
        let (with_loop, b2) =
            attach_cell(&with_pt, &b1, 0, 1, vec![v.clone(), v], "l").unwrap();
        with_loop.validate().unwrap();
        b2.verify(&with_loop).unwrap();
        assert_eq!(with_loop.value(0).generator_counts(), vec![1, 1, 0]);
        assert_eq!(with_loop.value(1).generator_counts(), vec![1, 1, 0]);
        let again = compute_basis(&with_loop, &mut Budget::limited(100_000))
            .found()
            .unwrap();
        again.verify(&with_loop).unwrap();
    }

    #[test]
    fn subdiagram_of_constant() {
        let cat = Arc::new(FiniteCategory::arrow());
        let p = Arc::new(standard_simplex(1, 2));
        let d = Arc::new(Diagram::constant(cat, p.clone()));
        // Keep only the vertex 0 and its degeneracies at both objects.
        let v = SimplexRef::generator(p.generator_by_name("0").unwrap());
        let mut closure = BTreeSet::new();
        closure.insert(v.clone());
        closure.insert(p.degeneracy(&v, 0));
        closure.insert(p.degeneracy(&p.degeneracy(&v, 0), 1));
        let sub = SubDiagram::new(d.clone(), &[closure.clone(), closure]).unwrap();
        sub.diagram.validate().unwrap();
        sub.inclusion.validate().unwrap();
        assert_eq!(sub.diagram.value(0).generator_counts(), vec![1, 0, 0]);
        assert!(sub.contains(0, &v));
        let e = SimplexRef::generator(p.generator_by_name("01").unwrap());
        assert!(!sub.contains(0, &e));
    }
}
