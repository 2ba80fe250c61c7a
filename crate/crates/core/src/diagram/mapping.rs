//! Enumeration of diagram maps, homotopies through the cylinder, and
//! finite mapping spaces.

use super::ops::{external_product, DiagramProduct};
use super::{Diagram, DiagramMap};
use crate::budget::{Budget, SearchOutcome};
use crate::simplicial::{
    codegeneracy, coface, monotone_map, presentation_from_levels, standard_simplex, GenId,
    LevelwiseData, Presentation, SimplexRef, SimplicialMap,
};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Applies a partially defined map to a simplex whose base generator is
/// already assigned.
fn partial_apply(
    target: &Presentation,
    images: &[Vec<Vec<Option<SimplexRef>>>],
    obj: usize,
    r: &SimplexRef,
) -> Option<SimplexRef> {
    let img = images[obj][r.base.dim][r.base.idx].as_ref()?;
    let mut out = img.clone();
    for &j in r.word.iter().rev() {
        out = target.degeneracy(&out, j);
    }
    Some(out)
}

enum Stop {
    Budget,
    Done,
}

struct Ctx<'a> {
    x: &'a Arc<Diagram>,
    y: &'a Arc<Diagram>,
    /// Generators in assignment order: dimension major, then object.
    positions: &'a [(usize, GenId)],
    pins: &'a BTreeMap<(usize, GenId), SimplexRef>,
    /// Base condition `p . h = q` as the pair `(p, q)`.
    over: Option<(&'a DiagramMap, &'a DiagramMap)>,
    images: Vec<Vec<Vec<Option<SimplexRef>>>>,
    out: Vec<DiagramMap>,
    first_only: bool,
}

impl Ctx<'_> {
    fn materialize(&self) -> DiagramMap {
        let trunc = self.x.truncation();
        let components = (0..self.x.cat.object_count())
            .map(|obj| {
                let assign = (0..=trunc)
                    .map(|dim| {
                        self.images[obj][dim]
                            .iter()
                            .map(|i| i.clone().expect("all generators assigned"))
                            .collect()
                    })
                    .collect();
                SimplicialMap::new(
                    self.x.value(obj).clone(),
                    self.y.value(obj).clone(),
                    assign,
                )
            })
            .collect();
        DiagramMap::new(self.x.clone(), self.y.clone(), components)
    }

    /// Naturality on every generator of one dimension, all of which must be
    /// assigned. Lower dimensions are assumed checked; this suffices since
    /// partial application commutes with degeneracies by construction.
    fn naturality_holds(&self, dim: usize) -> bool {
        for m in 0..self.x.cat.morphism_count() {
            let mor = self.x.cat.morphism(m);
            for g in self.x.value(mor.src).generators(dim) {
                let img = self.images[mor.src][dim][g.idx].as_ref().expect("assigned");
                let lhs = self.y.action(m).apply(img);
                let moved = self.x.action(m).generator_image(dim, g.idx);
                let rhs = partial_apply(self.y.value(mor.dst), &self.images, mor.dst, moved)
                    .expect("level complete");
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

fn dfs(ctx: &mut Ctx, pos: usize, budget: &mut Budget) -> Result<(), Stop> {
    if budget.tick().is_err() {
        return Err(Stop::Budget);
    }
    if pos == ctx.positions.len() {
        ctx.out.push(ctx.materialize());
        return if ctx.first_only { Err(Stop::Done) } else { Ok(()) };
    }
    let (obj, g) = ctx.positions[pos];
    let dim = g.dim;
    let level_ends = pos + 1 == ctx.positions.len() || ctx.positions[pos + 1].1.dim > dim;
    let candidates: Vec<SimplexRef> = match ctx.pins.get(&(obj, g)) {
        Some(r) => vec![r.clone()],
        None => ctx.y.value(obj).simplices(dim),
    };
    let faces: Vec<SimplexRef> = if dim >= 1 {
        ctx.x.value(obj).generator_faces(g).to_vec()
    } else {
        Vec::new()
    };
    'cand: for c in candidates {
        if let Some((p, q)) = ctx.over {
            let want = q.components[obj].generator_image(dim, g.idx);
            if p.components[obj].apply(&c) != *want {
                continue 'cand;
            }
        }
        for (i, f) in faces.iter().enumerate() {
            let want = partial_apply(ctx.y.value(obj), &ctx.images, obj, f)
                .expect("faces live below");
            if ctx.y.value(obj).face(&c, i) != want {
                continue 'cand;
            }
        }
        ctx.images[obj][dim][g.idx] = Some(c);
        let consistent = !level_ends || ctx.naturality_holds(dim);
        if consistent {
            let r = dfs(ctx, pos + 1, budget);
            if r.is_err() {
                ctx.images[obj][dim][g.idx] = None;
                return r;
            }
        }
        ctx.images[obj][dim][g.idx] = None;
    }
    Ok(())
}

/// Enumerates diagram maps whose generator images agree with `pins` and,
/// when `over = (p, q)` is given, satisfy `p . h = q`. Maps come out in
/// lexicographic order of image choices; with `first_only` the search stops
/// at the first one.
pub fn enumerate_diagram_maps_with(
    x: &Arc<Diagram>,
    y: &Arc<Diagram>,
    pins: &BTreeMap<(usize, GenId), SimplexRef>,
    over: Option<(&DiagramMap, &DiagramMap)>,
    first_only: bool,
    budget: &mut Budget,
) -> SearchOutcome<Vec<DiagramMap>> {
    assert_eq!(x.cat.as_ref(), y.cat.as_ref(), "maps need a shared index category");
    assert_eq!(x.truncation(), y.truncation(), "truncations must agree");
    let trunc = x.truncation();
    let nob = x.cat.object_count();
    let mut positions = Vec::new();
    for dim in 0..=trunc {
        for obj in 0..nob {
            for g in x.value(obj).generators(dim) {
                positions.push((obj, g));
            }
        }
    }
    let images = (0..nob)
        .map(|obj| {
            (0..=trunc)
                .map(|dim| vec![None; x.value(obj).generator_count(dim)])
                .collect()
        })
        .collect();
    let mut ctx =
        Ctx { x, y, positions: &positions, pins, over, images, out: Vec::new(), first_only };
    match dfs(&mut ctx, 0, budget) {
        Ok(()) | Err(Stop::Done) => SearchOutcome::Found(ctx.out),
        Err(Stop::Budget) => SearchOutcome::Exhausted,
    }
}

/// All diagram maps from `x` to `y`, in a canonical order.
pub fn enumerate_diagram_maps(
    x: &Arc<Diagram>,
    y: &Arc<Diagram>,
    budget: &mut Budget,
) -> SearchOutcome<Vec<DiagramMap>> {
    enumerate_diagram_maps_with(x, y, &BTreeMap::new(), None, false, budget)
}

/// Searches for a homotopy through the cylinder with `f` at vertex 0 and
/// `g` at vertex 1, optionally constant over a base map out of the shared
/// target. Refuted means no such map exists; the relation is only symmetric
/// over fibrant targets.
pub fn diagram_homotopy_over(
    f: &DiagramMap,
    g: &DiagramMap,
    over: Option<&DiagramMap>,
    budget: &mut Budget,
) -> SearchOutcome<DiagramMap> {
    assert!(f.source.as_ref().cat.as_ref() == g.source.as_ref().cat.as_ref());
    let x = f.source.clone();
    let y = f.target.clone();
    let trunc = x.truncation();
    let interval = Arc::new(standard_simplex(1, trunc));
    let cyl = external_product(x.clone(), interval.clone());
    let v0 = interval.generator_by_name("0").expect("interval vertex");
    let v1 = interval.generator_by_name("1").expect("interval vertex");
    let mut pins = BTreeMap::new();
    for o in 0..x.cat.object_count() {
        for dim in 0..=trunc {
            for a in x.value(o).generators(dim) {
                let aref = SimplexRef::generator(a);
                let word: Vec<usize> = (0..dim).rev().collect();
                for (vtx, end) in [(v0, f), (v1, g)] {
                    let tower = SimplexRef { base: vtx, word: word.clone() };
                    let pinned = cyl.ref_of(o, &aref, &tower);
                    debug_assert!(pinned.word.is_empty(), "end copies are generators");
                    pins.insert(
                        (o, pinned.base),
                        end.components[o].generator_image(dim, a.idx).clone(),
                    );
                }
            }
        }
    }
    // A homotopy constant over the base projects both ends to the same map.
    let over_pair = over.map(|p| {
        let q = cyl.to_left().then(&f.then(p));
        (p, q)
    });
    if let Some((p, _)) = &over_pair {
        let pf = f.then(p);
        let pg = g.then(p);
        if !pf.same_assignment(&pg) {
            return SearchOutcome::Refuted;
        }
    }
    let over_ref = over_pair.as_ref().map(|(p, q)| (*p, q));
    match enumerate_diagram_maps_with(&cyl.diagram, &y, &pins, over_ref, true, budget) {
        SearchOutcome::Found(v) => match v.into_iter().next() {
            Some(h) => SearchOutcome::Found(h),
            None => SearchOutcome::Refuted,
        },
        SearchOutcome::Refuted => SearchOutcome::Refuted,
        SearchOutcome::Exhausted => SearchOutcome::Exhausted,
    }
}

/// [`diagram_homotopy_over`] without a base condition.
pub fn diagram_homotopy(
    f: &DiagramMap,
    g: &DiagramMap,
    budget: &mut Budget,
) -> SearchOutcome<DiagramMap> {
    diagram_homotopy_over(f, g, None, budget)
}

/// Finite levels of the space of maps between two diagrams: level `k` holds
/// all maps out of the cylinder over the standard `k`-simplex, with face and
/// degeneracy operators given by precomposition.
pub struct MappingSpace {
    pub levels: Vec<Vec<DiagramMap>>,
    /// `face_at[k][e][i]` indexes `d_i e` in level `k - 1`, for `k >= 1`.
    pub face_at: Vec<Vec<Vec<usize>>>,
    /// `degeneracy_at[k][e][i]` indexes `s_i e` in level `k + 1`.
    pub degeneracy_at: Vec<Vec<Vec<usize>>>,
}

pub fn mapping_space(
    x: &Arc<Diagram>,
    y: &Arc<Diagram>,
    nmax: usize,
    budget: &mut Budget,
) -> SearchOutcome<MappingSpace> {
    let trunc = x.truncation();
    let simplices: Vec<Arc<Presentation>> =
        (0..=nmax).map(|k| Arc::new(standard_simplex(k, trunc))).collect();
    let products: Vec<DiagramProduct> =
        simplices.iter().map(|s| external_product(x.clone(), s.clone())).collect();
    let mut levels = Vec::new();
    for prod in &products {
        match enumerate_diagram_maps(&prod.diagram, y, budget) {
            SearchOutcome::Found(v) => levels.push(v),
            SearchOutcome::Exhausted => return SearchOutcome::Exhausted,
            SearchOutcome::Refuted => unreachable!("enumeration never refutes"),
        }
    }
    let locate = |k: usize, m: &DiagramMap| -> usize {
        levels[k]
            .iter()
            .position(|c| c.same_assignment(m))
            .expect("structure maps stay within the enumerated levels")
    };
    let mut face_at = vec![Vec::new()];
    for k in 1..=nmax {
        let tbl = levels[k]
            .iter()
            .map(|h| {
                (0..=k)
                    .map(|i| {
                        let inc =
                            monotone_map(&coface(k, i), simplices[k - 1].clone(), simplices[k].clone());
                        let pre = products[k - 1].map_factor(&products[k], &inc);
                        locate(k - 1, &pre.then(h))
                    })
                    .collect()
            })
            .collect();
        face_at.push(tbl);
    }
    let mut degeneracy_at = Vec::new();
    for k in 0..=nmax {
        let tbl = if k < nmax {
            levels[k]
                .iter()
                .map(|h| {
                    (0..=k)
                        .map(|i| {
                            let col = monotone_map(
                                &codegeneracy(k, i),
                                simplices[k + 1].clone(),
                                simplices[k].clone(),
                            );
                            let pre = products[k + 1].map_factor(&products[k], &col);
                            locate(k + 1, &pre.then(h))
                        })
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        degeneracy_at.push(tbl);
    }
    SearchOutcome::Found(MappingSpace { levels, face_at, degeneracy_at })
}

struct MappingLevels<'a>(&'a MappingSpace);

impl LevelwiseData for MappingLevels<'_> {
    type Elem = usize;

    fn truncation(&self) -> usize {
        self.0.levels.len() - 1
    }

    fn level(&self, n: usize) -> Vec<usize> {
        (0..self.0.levels[n].len()).collect()
    }

    fn face(&self, n: usize, i: usize, e: &usize) -> usize {
        self.0.face_at[n][*e][i]
    }

    fn degeneracy(&self, n: usize, i: usize, e: &usize) -> usize {
        self.0.degeneracy_at[n][*e][i]
    }

    fn label(&self, n: usize, e: &usize) -> String {
        format!("f{}_{}", n, e)
    }
}

impl MappingSpace {
    /// The mapping space as a presentation truncated at the computed depth.
    pub fn to_presentation(&self) -> Presentation {
        presentation_from_levels(&MappingLevels(self))
            .expect("mapping space levels are simplicial")
            .presentation
    }
}

#[cfg(test)]
mod tests {
    use super::super::free::free_diagram_from;
    use super::*;
    use crate::category::FiniteCategory;

    fn const_over_terminal(p: Presentation) -> Arc<Diagram> {
        Arc::new(Diagram::constant(Arc::new(FiniteCategory::terminal()), Arc::new(p)))
    }

    #[test]
    fn maps_between_standard_simplices() {
        // Simplicial maps between standard simplices are exactly the
        // monotone vertex assignments.
        let pt = const_over_terminal(standard_simplex(0, 2));
        let i1 = const_over_terminal(standard_simplex(1, 2));
        let mut budget = Budget::limited(1_000_000);
        let to_pt = enumerate_diagram_maps(&i1, &pt, &mut budget).found().unwrap();
        assert_eq!(to_pt.len(), 1);
        let from_pt = enumerate_diagram_maps(&pt, &i1, &mut budget).found().unwrap();
        assert_eq!(from_pt.len(), 2);
        let endo = enumerate_diagram_maps(&i1, &i1, &mut budget).found().unwrap();
        assert_eq!(endo.len(), 3);
        for m in &endo {
            m.validate().unwrap();
        }
    }

    #[test]
    fn restriction_adjunction_cardinality() {
        // Maps out of the free diagram at `c` match plain maps out of the
        // placed value.
        let cat = Arc::new(FiniteCategory::arrow());
        let y = standard_simplex(1, 2);
        let (fd, _) = free_diagram_from(cat.clone(), 0, &y);
        let x = Arc::new(Diagram::constant(cat, Arc::new(standard_simplex(1, 2))));
        let mut budget = Budget::limited(10_000_000);
        let lhs = enumerate_diagram_maps(&Arc::new(fd), &x, &mut budget).found().unwrap();
        let rhs = enumerate_diagram_maps(
            &const_over_terminal(y),
            &const_over_terminal(standard_simplex(1, 2)),
            &mut budget,
        )
        .found()
        .unwrap();
        assert_eq!(lhs.len(), rhs.len());
        assert_eq!(lhs.len(), 3);
    }

    #[test]
    fn homotopy_is_directional_over_non_fibrant_targets() {
        let pt = const_over_terminal(standard_simplex(0, 2));
        let i1 = const_over_terminal(standard_simplex(1, 2));
        let mut budget = Budget::limited(1_000_000);
        let ends = enumerate_diagram_maps(&pt, &i1, &mut budget).found().unwrap();
        let f = &ends[0];
        let g = &ends[1];
        // The interval has an edge from vertex 0 to vertex 1 only.
        assert!(diagram_homotopy(f, g, &mut budget).is_found());
        assert!(matches!(diagram_homotopy(g, f, &mut budget), SearchOutcome::Refuted));
        assert!(diagram_homotopy(f, f, &mut budget).is_found());
    }

    #[test]
    fn mapping_space_from_point_recovers_target() {
        let pt = const_over_terminal(standard_simplex(0, 1));
        let i1 = const_over_terminal(standard_simplex(1, 1));
        let mut budget = Budget::limited(10_000_000);
        let ms = mapping_space(&pt, &i1, 1, &mut budget).found().unwrap();
        assert_eq!(ms.levels[0].len(), 2);
        assert_eq!(ms.levels[1].len(), 3);
        let p = ms.to_presentation();
        p.validate().unwrap();
        assert_eq!(p.generator_counts(), vec![2, 1]);
    }

    #[test]
    fn pinning_forces_the_image() {
        let pt = const_over_terminal(standard_simplex(0, 2));
        let i1 = const_over_terminal(standard_simplex(1, 2));
        let v = pt.value(0).generators(0).next().unwrap();
        let target = SimplexRef::generator(i1.value(0).generator_by_name("1").unwrap());
        let mut pins = BTreeMap::new();
        pins.insert((0usize, v), target.clone());
        let mut budget = Budget::limited(1_000_000);
        let maps = enumerate_diagram_maps_with(&pt, &i1, &pins, None, false, &mut budget)
            .found()
            .unwrap();
        assert_eq!(maps.len(), 1);
        assert_eq!(maps[0].components[0].generator_image(0, 0), &target);
    }
}
