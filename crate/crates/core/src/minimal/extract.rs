//! Extraction of a minimal model from a free fibration over an EI index
//! category.
//!
//! The extraction picks one representative per minimal precedence class,
//! spans a subdiagram by their orbits, and then retracts the whole diagram
//! onto that span one non-degenerate generator at a time. Each retraction
//! step solves two lifting problems against the fibration: a straightening
//! homotopy that fixes everything already retracted, and a composition over
//! a triangle that splices the straightening together with a homotopy into
//! the span. The resulting retraction, homotopy and restricted fibration
//! are re-validated from scratch before they are returned, and the
//! restriction is certified minimal by an independent search at the full
//! truncation.

use super::{is_minimal, sub_p_preorder, MinimalError, MinimalityReport};
use crate::budget::{Budget, SearchOutcome};
use crate::diagram::{
    compute_basis, external_product, is_fibration_upto, Diagram, DiagramMap, DiagramProduct,
    FreeBasis, ObjSimplex, SubDiagram,
};
use crate::lifting::{prism_homotopy, LiftingProblem, PrismHomotopy};
use crate::simplicial::{
    characteristic_map, monotone_map, standard_simplex, GenId, ProductPresentation, SimplexRef,
    SimplicialMap,
};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Numerical summary of an extraction run.
#[derive(Debug, Clone)]
pub struct ExtractionReport {
    pub dim_cap: usize,
    /// Number of basis generators of the ambient diagram.
    pub basis_size: usize,
    /// Chosen representatives, one per minimal precedence class.
    pub selected: Vec<ObjSimplex>,
    /// Non-degenerate generators retracted by a lifting step.
    pub retracted: usize,
    /// Precedence pairs left unresolved by budget exhaustion.
    pub unknown_pairs: usize,
    /// Independent minimality check of the restriction, run at the full
    /// truncation after the model was assembled.
    pub certification: MinimalityReport,
}

/// A minimal model of a fibration through a dimension cap: the restricted
/// diagram together with the retraction data exhibiting it as a fibrewise
/// strong deformation retract of the truncated total diagram.
#[derive(Clone)]
pub struct MinimalModel {
    /// The restriction, as a subdiagram of the truncated total diagram.
    pub sub: SubDiagram,
    /// Basis of the restriction, computed independently.
    pub basis: FreeBasis,
    /// Retraction of the truncated total diagram onto the restriction.
    pub retraction: DiagramMap,
    /// Homotopy from the retraction to the identity, constant on the
    /// restriction and fibrewise over the truncated base.
    pub homotopy: DiagramMap,
    /// The cylinder the homotopy is defined on.
    pub cylinder: DiagramProduct,
    /// The restricted fibration.
    pub projection: DiagramMap,
    /// The truncated ambient fibration.
    pub total_projection: DiagramMap,
    pub dim_cap: usize,
    pub report: ExtractionReport,
}

/// Restriction of a diagram map to the truncations of its endpoints.
pub fn truncate_diagram_map(p: &DiagramMap, d: usize) -> DiagramMap {
    if d >= p.source.truncation() {
        return p.clone();
    }
    let source = Arc::new(p.source.truncate(d));
    let target = Arc::new(p.target.truncate(d));
    truncate_onto(p, source, target, d)
}

/// Same restriction, landing in already-built truncated diagrams.
fn truncate_onto(
    p: &DiagramMap,
    source: Arc<Diagram>,
    target: Arc<Diagram>,
    d: usize,
) -> DiagramMap {
    let components = (0..source.cat.object_count())
        .map(|c| {
            let assign = (0..=d)
                .map(|dim| {
                    (0..source.value(c).generator_count(dim))
                        .map(|idx| p.components[c].generator_image(dim, idx).clone())
                        .collect()
                })
                .collect();
            SimplicialMap::new(source.value(c).clone(), target.value(c).clone(), assign)
        })
        .collect();
    DiagramMap::new(source, target, components)
}

/// The fully degenerate simplex over a vertex, at a given dimension.
fn vertex_tower(vertex: GenId, dim: usize) -> SimplexRef {
    SimplexRef { base: vertex, word: (0..dim).rev().collect() }
}

/// The projection a fibrewise homotopy on a cell must have: every product
/// simplex goes to the base image of its left coordinate.
fn fibrewise_projection(
    prod: &ProductPresentation,
    zbar: &SimplicialMap,
    pc: &SimplicialMap,
) -> SimplicialMap {
    let assign = (0..=prod.result.truncation())
        .map(|dim| {
            prod.result
                .generators(dim)
                .map(|g| {
                    let (a, _) = prod.pair_of(&SimplexRef::generator(g));
                    pc.apply(&zbar.apply(&a))
                })
                .collect()
        })
        .collect();
    SimplicialMap::new(prod.result.clone(), pc.target.clone(), assign)
}

/// Value of the partially built homotopy on a cylinder coordinate pair.
/// The slot behind the pair must already be assigned; the construction
/// only ever asks for cells whose base lies in an earlier dimension.
fn eval_partial(
    cylinder: &DiagramProduct,
    assign: &[Vec<Vec<Option<SimplexRef>>>],
    x: &Diagram,
    c: usize,
    a: &SimplexRef,
    t: &SimplexRef,
) -> SimplexRef {
    let r = cylinder.product_at(c).ref_of(a, t);
    let mut out = assign[c][r.base.dim][r.base.idx]
        .clone()
        .expect("homotopy values below the current dimension are assigned");
    for &j in r.word.iter().rev() {
        out = x.value(c).degeneracy(&out, j);
    }
    out
}

/// Extracts a minimal model of the fibration `p` through dimension `d`.
///
/// Requirements: the index category must be EI, the source of `p` must be
/// free, `p` must pass the fibration check up to `d + 2`, and the
/// truncation must be at least `d + 2` so the composition lifts have room.
/// The search budget is shared by every subsearch; exhaustion surfaces as
/// [`MinimalError::Exhausted`] rather than a wrong model.
pub fn extract_minimal(
    p: &DiagramMap,
    d: usize,
    budget: &mut Budget,
) -> Result<MinimalModel, MinimalError> {
    let x = p.source.clone();
    let cat = x.cat.clone();
    if !cat.is_ei() {
        return Err(MinimalError::NotEi);
    }
    debug_assert!(cat.is_artinian(), "finite categories satisfy the chain condition");
    let trunc = x.truncation();
    if trunc < d + 2 {
        return Err(MinimalError::Truncation { need: d + 2, have: trunc });
    }
    let basis = match compute_basis(&x, budget) {
        SearchOutcome::Found(b) => b,
        SearchOutcome::Refuted => return Err(MinimalError::NotFree),
        SearchOutcome::Exhausted => return Err(MinimalError::Exhausted("basis search")),
    };
    let fib = is_fibration_upto(p, d + 2, budget)
        .map_err(|_| MinimalError::Exhausted("fibration check"))?;
    if let Some(f) = fib.failure {
        return Err(MinimalError::NotFibration(f.n));
    }

    // Precedence preorder one dimension above the cap, so the span keeps
    // the cells its own minimality at the cap depends on.
    let pre = sub_p_preorder(p, &basis, d + 1, budget);
    let picked = pre.order.minimal_subset(&pre.degenerate_flags());
    let selected: Vec<ObjSimplex> = picked.iter().map(|&i| pre.elems[i].clone()).collect();
    let sel_set: BTreeSet<ObjSimplex> = selected.iter().cloned().collect();
    for s in &selected {
        if s.dim() < d + 1 {
            for i in 0..=s.dim() {
                if !sel_set.contains(&x.degeneracy(s, i)) {
                    return Err(MinimalError::SigmaNotClosed);
                }
            }
        }
    }

    // Span the restriction greedily: adjoin the full orbit of every chosen
    // cell whose boundary already lies in the span. Membership is tracked
    // through non-degenerate bases, which makes the span closed under
    // degeneracies for free.
    let nob = cat.object_count();
    let mut marked: Vec<BTreeSet<GenId>> = vec![BTreeSet::new(); nob];
    for n in 0..=d + 1 {
        for s in selected.iter().filter(|s| s.dim() == n) {
            let sp = x.value(s.obj);
            let closed =
                n == 0 || (0..=n).all(|i| marked[s.obj].contains(&sp.face(&s.simplex, i).base));
            if !closed {
                continue;
            }
            for dst in 0..nob {
                for f in cat.hom(s.obj, dst) {
                    let img = x.action(f).apply(&s.simplex);
                    marked[dst].insert(img.base);
                }
            }
        }
    }

    // The truncated total diagram, its cylinder, and one homotopy slot per
    // cylinder generator. The homotopy is constant on the span.
    let xd = Arc::new(x.truncate(d));
    let interval_d = Arc::new(standard_simplex(1, d));
    let cylinder = external_product(xd.clone(), interval_d.clone());
    let mut hassign: Vec<Vec<Vec<Option<SimplexRef>>>> = (0..nob)
        .map(|c| {
            (0..=d)
                .map(|m| vec![None; cylinder.product_at(c).result.generator_count(m)])
                .collect()
        })
        .collect();
    for c in 0..nob {
        for g in cylinder.product_at(c).result.all_generators() {
            let (a, _) = cylinder.product_at(c).pair_of(&SimplexRef::generator(g));
            if marked[c].contains(&a.base) {
                hassign[c][g.dim][g.idx] = Some(a);
            }
        }
    }

    let d1t = Arc::new(standard_simplex(1, trunc));
    let d2t = Arc::new(standard_simplex(2, trunc));
    let v0t = d1t.generator_by_name("0").expect("interval vertex");
    let v1t = d1t.generator_by_name("1").expect("interval vertex");
    let edge1 = d1t.generator_by_name("01").expect("interval edge");
    let w0 = d2t.generator_by_name("0").expect("triangle vertex");
    let w1 = d2t.generator_by_name("1").expect("triangle vertex");
    let w2 = d2t.generator_by_name("2").expect("triangle vertex");
    let e01 = d2t.generator_by_name("01").expect("triangle edge");
    let e02 = d2t.generator_by_name("02").expect("triangle edge");
    // Collapse of the triangle keeping its last vertex apart, and the
    // inclusion of the interval as the last edge. Their composite is the
    // identity of the interval, which is what splices the new homotopy
    // segment against the already built one.
    let sigma01 = monotone_map(&[0, 0, 1], d2t.clone(), d1t.clone());
    let dmap0 = monotone_map(&[1, 2], d1t.clone(), d2t.clone());

    let mut retracted = 0usize;
    for n in 0..=d {
        let zs: Vec<ObjSimplex> = basis
            .cells()
            .into_iter()
            .filter(|z| z.dim() == n && !marked[z.obj].contains(&z.simplex.base))
            .collect();
        for z in zs {
            retracted += 1;
            let c = z.obj;
            let xc = x.value(c).clone();
            let pc = &p.components[c];
            let zbar = characteristic_map(xc.clone(), &z.simplex);
            let simplex_n = zbar.source.clone();
            let top = GenId { dim: n, idx: 0 };

            // Straightening square: a fibrewise homotopy on the cell that
            // restricts to the known homotopy on its boundary and ends at
            // the cell itself. Its start is the straightened cell.
            let gprod = ProductPresentation::build(simplex_n.clone(), d1t.clone());
            let mut pins = BTreeMap::new();
            for g in gprod.result.all_generators() {
                let (u, t) = gprod.pair_of(&SimplexRef::generator(g));
                if u.base != top {
                    // Boundary cells above the cap are left to the search;
                    // nothing downstream reads them.
                    if g.dim <= d {
                        let a = zbar.apply(&u);
                        pins.insert(g, eval_partial(&cylinder, &hassign, &x, c, &a, &t));
                    }
                } else if t.base == v1t {
                    pins.insert(g, zbar.apply(&u));
                }
            }
            let qg = fibrewise_projection(&gprod, &zbar, pc);
            let square = LiftingProblem {
                domain: gprod.result.clone(),
                target: xc.clone(),
                pins,
                over: Some((pc, &qg)),
            };
            let gmap = match square.solve(budget) {
                SearchOutcome::Found(m) => m,
                SearchOutcome::Refuted => return Err(MinimalError::LiftRefuted(n)),
                SearchOutcome::Exhausted => {
                    return Err(MinimalError::Exhausted("straightening lift"))
                }
            };
            let z1 =
                gmap.apply(&gprod.ref_of(&SimplexRef::generator(top), &vertex_tower(v0t, n)));

            // Target search: a span simplex with the same boundary and base
            // image as the straightened cell, fibrewise homotopic to it.
            let mut found: Option<(SimplexRef, PrismHomotopy)> = None;
            let mut ran_out = false;
            for y in xc.simplices(n) {
                if !marked[c].contains(&y.base) {
                    continue;
                }
                if n >= 1 && (0..=n).any(|i| xc.face(&y, i) != xc.face(&z1, i)) {
                    continue;
                }
                if pc.apply(&y) != pc.apply(&z1) {
                    continue;
                }
                match prism_homotopy(&xc, &z1, &y, true, Some(pc), budget) {
                    SearchOutcome::Found(f) => {
                        found = Some((y, f));
                        break;
                    }
                    SearchOutcome::Refuted => {}
                    SearchOutcome::Exhausted => ran_out = true,
                }
            }
            let Some((y, fprism)) = found else {
                return Err(if ran_out {
                    MinimalError::Exhausted("target search")
                } else {
                    MinimalError::NoTarget(n)
                });
            };
            let ybar = characteristic_map(xc.clone(), &y);
            let z1bar = characteristic_map(xc.clone(), &z1);

            // Composition square over the triangle: the first two edges
            // carry the target homotopy and the straightening, the solved
            // last edge runs from the target to the cell and becomes the
            // homotopy segment for the cell.
            let jprod = ProductPresentation::build(simplex_n.clone(), d2t.clone());
            let mut pins = BTreeMap::new();
            for g in jprod.result.all_generators() {
                let (u, t) = jprod.pair_of(&SimplexRef::generator(g));
                if u.base != top {
                    if g.dim <= d {
                        let a = zbar.apply(&u);
                        let ti = sigma01.apply(&t);
                        pins.insert(g, eval_partial(&cylinder, &hassign, &x, c, &a, &ti));
                    }
                } else if t.base == w0 {
                    pins.insert(g, z1bar.apply(&u));
                } else if t.base == w1 {
                    pins.insert(g, ybar.apply(&u));
                } else if t.base == w2 {
                    pins.insert(g, zbar.apply(&u));
                } else if t.base == e01 {
                    let ti = SimplexRef { base: edge1, word: t.word.clone() };
                    pins.insert(g, fprism.eval(&u, &ti));
                } else if t.base == e02 {
                    let ti = SimplexRef { base: edge1, word: t.word.clone() };
                    pins.insert(g, gmap.apply(&gprod.ref_of(&u, &ti)));
                }
            }
            let qj = fibrewise_projection(&jprod, &zbar, pc);
            let square = LiftingProblem {
                domain: jprod.result.clone(),
                target: xc.clone(),
                pins,
                over: Some((pc, &qj)),
            };
            let jmap = match square.solve(budget) {
                SearchOutcome::Found(m) => m,
                SearchOutcome::Refuted => return Err(MinimalError::LiftRefuted(n)),
                SearchOutcome::Exhausted => {
                    return Err(MinimalError::Exhausted("composition lift"))
                }
            };

            // Push the solved segment along the orbit of the cell. Freeness
            // routes every non-degenerate base through exactly one orbit,
            // so first assignment wins and nothing is ever contested.
            for dst in 0..nob {
                for f in cat.hom(c, dst) {
                    let fz = x.action(f).apply(&z.simplex);
                    if !fz.word.is_empty() {
                        // Degenerate images follow from lower assignments.
                        continue;
                    }
                    let prod = cylinder.product_at(dst);
                    for m in 0..=d {
                        for idx in 0..prod.result.generator_count(m) {
                            if hassign[dst][m][idx].is_some() {
                                continue;
                            }
                            let (a, t) =
                                prod.pair_of(&SimplexRef::generator(GenId { dim: m, idx }));
                            if a.base != fz.base {
                                continue;
                            }
                            let cell = SimplexRef { base: top, word: a.word.clone() };
                            let t2 = dmap0.apply(&t);
                            let val =
                                x.action(f).apply(&jmap.apply(&jprod.ref_of(&cell, &t2)));
                            hassign[dst][m][idx] = Some(val);
                        }
                    }
                }
            }
        }
    }

    for c in 0..nob {
        for level in &hassign[c] {
            if level.iter().any(|v| v.is_none()) {
                return Err(MinimalError::Invalid(
                    "homotopy assignment left a cylinder generator unset".into(),
                ));
            }
        }
    }
    let homotopy = DiagramMap::new(
        cylinder.diagram.clone(),
        xd.clone(),
        (0..nob)
            .map(|c| {
                let assign = hassign[c]
                    .iter()
                    .map(|level| level.iter().map(|v| v.clone().unwrap()).collect())
                    .collect();
                SimplicialMap::new(
                    cylinder.product_at(c).result.clone(),
                    xd.value(c).clone(),
                    assign,
                )
            })
            .collect(),
    );

    // The span as a subdiagram, at the full truncation for certification
    // and at the cap for the delivered model.
    let members_full: Vec<BTreeSet<SimplexRef>> = (0..nob)
        .map(|c| {
            (0..=trunc)
                .flat_map(|m| x.value(c).simplices(m))
                .filter(|r| marked[c].contains(&r.base))
                .collect()
        })
        .collect();
    let sub_full = SubDiagram::new(x.clone(), &members_full)
        .map_err(|e| MinimalError::Invalid(format!("restriction: {e}")))?;
    let members_d: Vec<BTreeSet<SimplexRef>> = (0..nob)
        .map(|c| members_full[c].iter().filter(|r| r.dim() <= d).cloned().collect())
        .collect();
    let sub_d = SubDiagram::new(xd.clone(), &members_d)
        .map_err(|e| MinimalError::Invalid(format!("restriction: {e}")))?;

    // Retraction: the time-0 end of the homotopy, read into the span.
    let v0g = interval_d.generator_by_name("0").expect("interval vertex");
    let mut rcomps = Vec::with_capacity(nob);
    for c in 0..nob {
        let mut assign = Vec::with_capacity(d + 1);
        for m in 0..=d {
            let mut level = Vec::new();
            for g in xd.value(c).generators(m) {
                let cell = cylinder.ref_of(c, &SimplexRef::generator(g), &vertex_tower(v0g, m));
                let img = homotopy.components[c].apply(&cell);
                let Some(r) = sub_d.pull(c, &img) else {
                    return Err(MinimalError::Invalid(
                        "retraction image leaves the restriction".into(),
                    ));
                };
                level.push(r);
            }
            assign.push(level);
        }
        rcomps.push(SimplicialMap::new(
            xd.value(c).clone(),
            sub_d.diagram.value(c).clone(),
            assign,
        ));
    }
    let retraction = DiagramMap::new(xd.clone(), sub_d.diagram.clone(), rcomps);

    let bd = Arc::new(p.target.truncate(d));
    let total_projection = truncate_onto(p, xd.clone(), bd, d);
    let projection = sub_d.inclusion.then(&total_projection);

    let basis_hat = match compute_basis(&sub_d.diagram, budget) {
        SearchOutcome::Found(b) => b,
        SearchOutcome::Refuted => {
            return Err(MinimalError::Invalid("restriction is not free".into()))
        }
        SearchOutcome::Exhausted => {
            return Err(MinimalError::Exhausted("restricted basis search"))
        }
    };
    basis_hat
        .verify(&sub_d.diagram)
        .map_err(|e| MinimalError::Invalid(format!("restricted basis: {e}")))?;

    let p_hat = sub_full.inclusion.then(p);
    let certification = is_minimal(&p_hat, d, budget)?;

    let report = ExtractionReport {
        dim_cap: d,
        basis_size: basis.gens.len(),
        selected,
        retracted,
        unknown_pairs: pre.unknown.len(),
        certification,
    };
    let model = MinimalModel {
        sub: sub_d,
        basis: basis_hat,
        retraction,
        homotopy,
        cylinder,
        projection,
        total_projection,
        dim_cap: d,
        report,
    };
    model.validate()?;
    Ok(model)
}

impl MinimalModel {
    /// Re-checks every structural identity the extraction promises:
    /// naturality and simpliciality of all maps, the retraction fixing the
    /// restriction, the homotopy running from the retraction to the
    /// identity without moving base images or span cells, and the
    /// restricted projection factoring the ambient one.
    pub fn validate(&self) -> Result<(), MinimalError> {
        let bad = |what: String| MinimalError::Invalid(what);
        self.sub
            .diagram
            .validate()
            .map_err(|e| bad(format!("restriction: {e}")))?;
        self.sub
            .inclusion
            .validate()
            .map_err(|e| bad(format!("inclusion: {e}")))?;
        self.retraction.validate().map_err(|e| bad(format!("retraction: {e}")))?;
        self.homotopy.validate().map_err(|e| bad(format!("homotopy: {e}")))?;
        self.projection.validate().map_err(|e| bad(format!("projection: {e}")))?;
        self.total_projection
            .validate()
            .map_err(|e| bad(format!("ambient projection: {e}")))?;
        let xd = self.retraction.source.clone();
        if !self
            .sub
            .inclusion
            .then(&self.retraction)
            .same_assignment(&DiagramMap::identity(self.sub.diagram.clone()))
        {
            return Err(bad("retraction does not fix the restriction".into()));
        }
        if !self
            .projection
            .same_assignment(&self.sub.inclusion.then(&self.total_projection))
        {
            return Err(bad("restricted projection disagrees with the ambient one".into()));
        }
        let d = xd.truncation();
        let interval = self.cylinder.factor.clone();
        let v0 = interval.generator_by_name("0").expect("interval vertex");
        let v1 = interval.generator_by_name("1").expect("interval vertex");
        let section = |v: GenId| -> DiagramMap {
            let comps = (0..xd.cat.object_count())
                .map(|c| {
                    let assign = (0..=d)
                        .map(|m| {
                            xd.value(c)
                                .generators(m)
                                .map(|g| {
                                    self.cylinder.ref_of(
                                        c,
                                        &SimplexRef::generator(g),
                                        &vertex_tower(v, m),
                                    )
                                })
                                .collect()
                        })
                        .collect();
                    SimplicialMap::new(
                        xd.value(c).clone(),
                        self.cylinder.diagram.value(c).clone(),
                        assign,
                    )
                })
                .collect();
            DiagramMap::new(xd.clone(), self.cylinder.diagram.clone(), comps)
        };
        if !section(v1)
            .then(&self.homotopy)
            .same_assignment(&DiagramMap::identity(xd.clone()))
        {
            return Err(bad("homotopy does not end at the identity".into()));
        }
        if !section(v0)
            .then(&self.homotopy)
            .same_assignment(&self.retraction.then(&self.sub.inclusion))
        {
            return Err(bad("homotopy does not start at the retraction".into()));
        }
        if !self
            .homotopy
            .then(&self.total_projection)
            .same_assignment(&self.cylinder.to_left().then(&self.total_projection))
        {
            return Err(bad("homotopy moves the base image".into()));
        }
        for c in 0..xd.cat.object_count() {
            let prod = self.cylinder.product_at(c);
            for g in prod.result.all_generators() {
                let (a, _) = prod.pair_of(&SimplexRef::generator(g));
                if self.sub.contains(c, &a)
                    && self.homotopy.components[c].generator_image(g.dim, g.idx) != &a
                {
                    return Err(bad("homotopy moves the restriction".into()));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FiniteCategory;
    use crate::simplicial::{codiscrete_nerve, group_nerve};

    fn over_point(x: Arc<Diagram>) -> DiagramMap {
        let cat = x.cat.clone();
        let trunc = x.truncation();
        let point = Arc::new(Diagram::constant(cat, Arc::new(standard_simplex(0, trunc))));
        let components = (0..x.cat.object_count())
            .map(|c| {
                SimplicialMap::constant(
                    x.value(c).clone(),
                    point.value(c).clone(),
                    SimplexRef::generator(GenId { dim: 0, idx: 0 }),
                )
            })
            .collect();
        DiagramMap::new(x, point, components)
    }

    #[test]
    fn already_minimal_group_nerve_is_returned_unchanged() {
        let n = Arc::new(group_nerve(&["e", "g"], 0, &[vec![0, 1], vec![1, 0]], 4));
        let cat = Arc::new(FiniteCategory::terminal());
        let p = over_point(Arc::new(Diagram::constant(cat, n)));
        let mut b = Budget::limited(4_000_000);
        let model = extract_minimal(&p, 2, &mut b).unwrap();
        assert_eq!(model.report.retracted, 0);
        assert_eq!(
            model.sub.diagram.value(0).generator_counts(),
            p.source.truncate(2).value(0).generator_counts()
        );
        // Retraction composed with inclusion is the identity on the total
        // diagram, so nothing was moved.
        let r_incl = model.retraction.then(&model.sub.inclusion);
        assert!(r_incl.same_assignment(&DiagramMap::identity(model.retraction.source.clone())));
        // The homotopy is the constant one.
        assert!(model.homotopy.same_assignment(&model.cylinder.to_left()));
        assert!(
            model.report.certification.passed(),
            "{}",
            model.report.certification.verdict()
        );
    }

    #[test]
    fn contractible_codiscrete_nerve_collapses_to_a_point() {
        let e = Arc::new(codiscrete_nerve(&["e", "g"], 4));
        let cat = Arc::new(FiniteCategory::terminal());
        let p = over_point(Arc::new(Diagram::constant(cat, e.clone())));
        let mut b = Budget::limited(8_000_000);
        let model = extract_minimal(&p, 2, &mut b).unwrap();
        assert_eq!(model.sub.diagram.value(0).generator_counts(), vec![1, 0, 0]);
        // One vertex, two edges and two triangles get retracted.
        assert_eq!(model.report.retracted, 5);
        let ve = e.generator_by_name("[e]").unwrap();
        let vg = e.generator_by_name("[g]").unwrap();
        let r = &model.retraction.components[0];
        assert_eq!(r.generator_image(0, ve.idx), r.generator_image(0, vg.idx));
        assert!(
            model.report.certification.passed(),
            "{}",
            model.report.certification.verdict()
        );
        model.validate().unwrap();
    }

    #[test]
    fn constant_diagram_over_the_arrow_collapses_naturally() {
        // The same contractible value at both ends of an arrow: the span is
        // generated at the source object and pushed forward, and the
        // homotopy must come out natural.
        let e = Arc::new(codiscrete_nerve(&["e", "g"], 3));
        let cat = Arc::new(FiniteCategory::arrow());
        let p = over_point(Arc::new(Diagram::constant(cat, e)));
        let mut b = Budget::limited(8_000_000);
        let model = extract_minimal(&p, 1, &mut b).unwrap();
        for c in 0..2 {
            assert_eq!(model.sub.diagram.value(c).generator_counts(), vec![1, 0]);
        }
        assert_eq!(model.report.retracted, 3);
        assert!(model.report.certification.passed());
    }

    #[test]
    fn rejects_unsuitable_inputs() {
        let n = Arc::new(group_nerve(&["e", "g"], 0, &[vec![0, 1], vec![1, 0]], 3));
        let cat = Arc::new(FiniteCategory::terminal());
        let p = over_point(Arc::new(Diagram::constant(cat, n.clone())));
        let mut b = Budget::limited(1_000_000);
        assert!(matches!(
            extract_minimal(&p, 2, &mut b),
            Err(MinimalError::Truncation { need: 4, have: 3 })
        ));
        // An idempotent endomorphism breaks the EI requirement.
        let mut builder = FiniteCategory::builder();
        builder.object("a");
        let m = builder.morphism("m", 0, 0);
        builder.composite(m, m, m);
        let bad = Arc::new(builder.finish().unwrap());
        let q = over_point(Arc::new(Diagram::constant(bad, n)));
        assert!(matches!(extract_minimal(&q, 1, &mut b), Err(MinimalError::NotEi)));
    }
}
