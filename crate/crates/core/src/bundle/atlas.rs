//! Atlases of fibre bundles over a constant base: one chart per base
//! simplex embedding the cylinder on the fibre, transformation elements
//! measuring how charts disagree across faces, and regularization that
//! turns a chart family into a twisting function.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::group::{GroupAction, SimplicialGroup};
use super::tcp::Tcp;
use super::twisting::TwistingFunction;
use super::BundleError;
use crate::budget::Budget;
use crate::diagram::{external_product, Diagram, DiagramMap, DiagramProduct};
use crate::simplicial::{
    characteristic_map, codegeneracy, coface, monotone_map, monotone_simplex, standard_simplex,
    Presentation, SimplexRef, SimplicialMap,
};

/// Charts for a map to a constant base: for every base simplex `v` of dim
/// n an embedding of `fibre x Delta[n]` onto the part of the total space
/// sitting over `v`.
#[derive(Clone)]
pub struct Atlas {
    /// The bundle projection to the constant diagram on the base.
    pub bundle: DiagramMap,
    pub base: Arc<Presentation>,
    pub fibre: Arc<Diagram>,
    cylinders: Vec<DiagramProduct>,
    charts: Vec<Vec<DiagramMap>>,
    simplices: Vec<Vec<SimplexRef>>,
    index: Vec<BTreeMap<SimplexRef, usize>>,
}

impl Atlas {
    /// Assembles an atlas and checks every chart: independence of the
    /// cylinder copies, simpliciality, lying over its base simplex, and
    /// the levelwise bijection onto the fibre of the projection.
    pub fn new(
        bundle: DiagramMap,
        fibre: Arc<Diagram>,
        charts: Vec<Vec<DiagramMap>>,
    ) -> Result<Atlas, BundleError> {
        if !bundle.target.is_constant() {
            return Err(BundleError::Atlas("projection target is not constant".into()));
        }
        let base = bundle.target.value(0).clone();
        let trunc = base.truncation();
        if bundle.source.truncation() != trunc || fibre.truncation() != trunc {
            return Err(BundleError::Truncation { need: trunc, have: fibre.truncation() });
        }
        let cylinders: Vec<DiagramProduct> = (0..=trunc)
            .map(|n| external_product(fibre.clone(), Arc::new(standard_simplex(n, trunc))))
            .collect();
        let simplices: Vec<Vec<SimplexRef>> = (0..=trunc).map(|n| base.simplices(n)).collect();
        let index: Vec<BTreeMap<SimplexRef, usize>> = simplices
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect())
            .collect();
        if charts.len() != trunc + 1
            || charts.iter().zip(&simplices).any(|(cs, ss)| cs.len() != ss.len())
        {
            return Err(BundleError::Atlas("one chart per base simplex".into()));
        }
        let atlas = Atlas { bundle, base, fibre, cylinders, charts, simplices, index };
        atlas.validate()?;
        Ok(atlas)
    }

    fn validate(&self) -> Result<(), BundleError> {
        let trunc = self.base.truncation();
        let objects = self.fibre.cat.object_count();
        for n in 0..=trunc {
            let cyl = &self.cylinders[n];
            for (pos, v) in self.simplices[n].iter().enumerate() {
                let chart = &self.charts[n][pos];
                for c in 0..objects {
                    if chart.source.value(c) != cyl.diagram.value(c) {
                        return Err(BundleError::Atlas(format!(
                            "chart over {} does not read the cylinder",
                            self.base.display_ref(v)
                        )));
                    }
                }
                chart.validate().map_err(|e| {
                    BundleError::Atlas(format!(
                        "chart over {} is not a map of diagrams: {e}",
                        self.base.display_ref(v)
                    ))
                })?;
                let chi = characteristic_map(self.base.clone(), v);
                for c in 0..objects {
                    let p = cyl.diagram.value(c);
                    for dim in 0..=trunc {
                        for g in p.generators(dim) {
                            let gref = SimplexRef::generator(g);
                            let (_, u) = cyl.pair_of(c, &gref);
                            let image = self.charts[n][pos].components[c].apply(&gref);
                            if self.bundle.components[c].apply(&image) != chi.apply(&u) {
                                return Err(BundleError::Atlas(format!(
                                    "chart over {} does not lie over it",
                                    self.base.display_ref(v)
                                )));
                            }
                        }
                    }
                    // Levelwise, fixing the simplex of Delta[n], the chart
                    // must biject the fibre onto the matching fibre of the
                    // projection.
                    let fc = self.fibre.value(c);
                    let total = self.bundle.source.value(c);
                    for m in 0..=trunc {
                        for u in self.cylinders[n].factor.simplices(m) {
                            let over = chi.apply(&u);
                            let mut seen = BTreeSet::new();
                            for y in fc.simplices(m) {
                                let image = self.charts[n][pos].components[c]
                                    .apply(&cyl.ref_of(c, &y, &u));
                                if !seen.insert(image) {
                                    return Err(BundleError::Atlas(format!(
                                        "chart over {} is not injective",
                                        self.base.display_ref(v)
                                    )));
                                }
                            }
                            let fibre_of_p: BTreeSet<SimplexRef> = total
                                .simplices(m)
                                .into_iter()
                                .filter(|x| self.bundle.components[c].apply(x) == over)
                                .collect();
                            if seen != fibre_of_p {
                                return Err(BundleError::Atlas(format!(
                                    "chart over {} misses part of the fibre",
                                    self.base.display_ref(v)
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn truncation(&self) -> usize {
        self.base.truncation()
    }

    pub fn chart(&self, v: &SimplexRef) -> &DiagramMap {
        &self.charts[v.dim()][self.index[v.dim()][v]]
    }

    pub fn cylinder(&self, n: usize) -> &DiagramProduct {
        &self.cylinders[n]
    }

    /// The chart of `v` precomposed with a monotone reindexing of the
    /// simplex factor.
    fn reindexed_chart(&self, v: &SimplexRef, from: usize, theta: &[usize]) -> DiagramMap {
        let step = monotone_map(
            theta,
            self.cylinders[from].factor.clone(),
            self.cylinders[v.dim()].factor.clone(),
        );
        self.cylinders[from]
            .map_factor(&self.cylinders[v.dim()], &step)
            .then(self.chart(v))
    }

    /// Whether every chart of a degenerate simplex is the degenerated
    /// chart of its face, for every degeneracy witness.
    pub fn is_normal(&self) -> bool {
        let trunc = self.base.truncation();
        for m in 0..trunc {
            for v in &self.simplices[m] {
                for i in 0..=m {
                    let sv = self.base.degeneracy(v, i);
                    let wanted = self.reindexed_chart(v, m + 1, &codegeneracy(m, i));
                    if !self.chart(&sv).same_assignment(&wanted) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Rebuilds the charts of degenerate base simplices from their
/// non-degenerate cores so the atlas commutes with degeneracies. Charts of
/// non-degenerate simplices are kept as they are.
pub fn normalize_atlas(a: &Atlas) -> Result<Atlas, BundleError> {
    let trunc = a.base.truncation();
    let mut charts: Vec<Vec<DiagramMap>> = vec![a.charts[0].clone()];
    for n in 1..=trunc {
        let mut level = Vec::with_capacity(a.simplices[n].len());
        for v in &a.simplices[n] {
            if v.word.is_empty() {
                level.push(a.chart(v).clone());
            } else {
                let j = v.word[0];
                let parent = SimplexRef { base: v.base, word: v.word[1..].to_vec() };
                let step = monotone_map(
                    &codegeneracy(n - 1, j),
                    a.cylinders[n].factor.clone(),
                    a.cylinders[n - 1].factor.clone(),
                );
                let lowered = a.cylinders[n].map_factor(&a.cylinders[n - 1], &step);
                let below: &DiagramMap = &charts[n - 1][a.index[n - 1][&parent]];
                level.push(lowered.then(below));
            }
        }
        charts.push(level);
    }
    let out = Atlas::new(a.bundle.clone(), a.fibre.clone(), charts)?;
    if !out.is_normal() {
        return Err(BundleError::Atlas(
            "degeneracy witnesses disagree after normalization".into(),
        ));
    }
    Ok(out)
}

/// The transformation elements of a normal atlas, written in the
/// designated group.
pub struct TransformationElements {
    pub group: Arc<SimplicialGroup>,
    /// xi[n][pos][i] is the level n-1 element solving the face equation of
    /// the chart at base simplex `pos` of dim n; n >= 1.
    pub xi: Vec<Vec<Vec<usize>>>,
}

impl TransformationElements {
    /// Whether every element away from the zeroth face is the unit.
    pub fn is_regular(&self) -> bool {
        self.xi.iter().enumerate().all(|(n, level)| {
            level
                .iter()
                .all(|per| per.iter().skip(1).all(|&g| g == self.group.unit(n - 1)))
        })
    }

    /// The zeroth-face elements as a twisting function; valid once the
    /// atlas is regular.
    pub fn twisting(&self, base: &Arc<Presentation>) -> Result<TwistingFunction, BundleError> {
        let values = self
            .xi
            .iter()
            .enumerate()
            .map(|(n, level)| if n == 0 { Vec::new() } else { level.iter().map(|per| per[0]).collect() })
            .collect();
        TwistingFunction::new(base.clone(), self.group.clone(), values)
    }
}

/// Solves `chart(d_i v) . xi = d_i chart(v)` for every base simplex and
/// face, and expresses each solution as a group element acting through the
/// cylinder.
pub fn transformation_elements(
    a: &Atlas,
    action: &GroupAction,
) -> Result<TransformationElements, BundleError> {
    let trunc = a.base.truncation();
    let objects = a.fibre.cat.object_count();
    for c in 0..objects {
        if action.space.value(c) != a.fibre.value(c) {
            return Err(BundleError::Mismatch);
        }
    }
    let mut xi: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for n in 1..=trunc {
        let mut per_level = Vec::with_capacity(a.simplices[n].len());
        for v in &a.simplices[n] {
            let mut per_face = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let rhs = a.reindexed_chart(v, n - 1, &coface(n, i));
                let lhs = a.chart(&a.base.face(v, i));
                let cyl = &a.cylinders[n - 1];
                let comps = (0..objects)
                    .map(|c| {
                        let p = cyl.diagram.value(c);
                        let fc = a.fibre.value(c);
                        let assign = (0..=trunc)
                            .map(|dim| {
                                p.generators(dim)
                                    .map(|g| {
                                        let gref = SimplexRef::generator(g);
                                        // The correction fixes the simplex
                                        // coordinate, so only the fibre
                                        // coordinate is searched.
                                        let (_, u) = cyl.pair_of(c, &gref);
                                        let target = rhs.components[c].apply(&gref);
                                        let mut hits = fc
                                            .simplices(dim)
                                            .into_iter()
                                            .map(|y| cyl.ref_of(c, &y, &u))
                                            .filter(|z| lhs.components[c].apply(z) == target);
                                        let z = hits.next().ok_or(BundleError::ChartSolve {
                                            object: c,
                                            dim,
                                            what: format!(
                                                "no preimage under the chart of d_{i} {}",
                                                a.base.display_ref(v)
                                            ),
                                        })?;
                                        if hits.next().is_some() {
                                            return Err(BundleError::ChartSolve {
                                                object: c,
                                                dim,
                                                what: "chart is not injective".into(),
                                            });
                                        }
                                        Ok(z)
                                    })
                                    .collect::<Result<Vec<_>, BundleError>>()
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(SimplicialMap::new(p.clone(), p.clone(), assign))
                    })
                    .collect::<Result<Vec<_>, BundleError>>()?;
                let endo = DiagramMap::new(cyl.diagram.clone(), cyl.diagram.clone(), comps);
                endo.validate().map_err(|e| {
                    BundleError::Atlas(format!(
                        "face correction at {} is not simplicial: {e}",
                        a.base.display_ref(v)
                    ))
                })?;
                let g = (0..action.group.order(n - 1))
                    .find(|&g| action.rho_endo(cyl, n - 1, g).same_assignment(&endo))
                    .ok_or(BundleError::NotGAtlas {
                        simplex: a.base.display_ref(v),
                        face: i,
                    })?;
                per_face.push(g);
            }
            per_level.push(per_face);
        }
        xi.push(per_level);
    }
    Ok(TransformationElements { group: action.group.clone(), xi })
}

/// Transport of the twisting along a base simplex: for every simplex `u`
/// of `Delta[n]` the group element carrying the fibre copy at `u` back to
/// the lead vertex, per the rules `w(top) = e`, `w(d_0 u) = t(u) . d_0
/// w(u)`, `w(d_i u) = d_i w(u)`, and `w(s_i u) = s_i w(u)`.
fn transport(
    t: &TwistingFunction,
    v: &SimplexRef,
    delta: &Presentation,
    chi: &SimplicialMap,
) -> Result<Vec<BTreeMap<SimplexRef, usize>>, BundleError> {
    let n = v.dim();
    let trunc = delta.truncation();
    let g = &t.group;
    let mut w: Vec<BTreeMap<SimplexRef, usize>> = vec![BTreeMap::new(); trunc + 1];
    let full: Vec<usize> = (0..=n).collect();
    w[n].insert(monotone_simplex(delta, &full), g.unit(n));
    for m in (0..n).rev() {
        let subsets: Vec<Vec<usize>> = (0..1u32 << (n + 1))
            .filter(|mask| mask.count_ones() as usize == m + 1)
            .map(|mask| (0..=n).filter(|&b| mask >> b & 1 == 1).collect())
            .collect();
        for s in subsets {
            let u = monotone_simplex(delta, &s);
            let mut value = None;
            for j in 0..=n {
                if s.contains(&j) {
                    continue;
                }
                let mut parent = s.clone();
                let pos = parent.iter().position(|&b| b > j).unwrap_or(parent.len());
                parent.insert(pos, j);
                let pref = monotone_simplex(delta, &parent);
                let wp = w[m + 1][&pref];
                let candidate = if pos == 0 {
                    g.mult(m, t.value(&chi.apply(&pref)), g.face(m + 1, 0, wp))
                } else {
                    g.face(m + 1, pos, wp)
                };
                if *value.get_or_insert(candidate) != candidate {
                    return Err(BundleError::Atlas(format!(
                        "transport is inconsistent over {}",
                        t.base.display_ref(v)
                    )));
                }
            }
            w[m].insert(u, value.expect("a proper subset has a parent"));
        }
    }
    for m in 1..=trunc {
        for u in delta.simplices(m) {
            if u.word.is_empty() {
                continue;
            }
            let parent = SimplexRef { base: u.base, word: u.word[1..].to_vec() };
            let below = w[m - 1][&parent];
            let outer = u.word[0];
            w[m].insert(u, g.degeneracy(m - 1, outer, below));
        }
    }
    Ok(w)
}

/// The atlas a twisted product carries by construction: the chart of `v`
/// sends `(y, u)` to the pair of the base restriction of `u` and the
/// transported fibre point.
pub fn tautological_atlas(tcp: &Tcp) -> Result<Atlas, BundleError> {
    let t = &tcp.twisting;
    let action = &tcp.action;
    let base = tcp.base().clone();
    let trunc = base.truncation();
    let fibre = action.space.clone();
    let objects = fibre.cat.object_count();
    let cylinders: Vec<DiagramProduct> = (0..=trunc)
        .map(|n| external_product(fibre.clone(), Arc::new(standard_simplex(n, trunc))))
        .collect();
    let charts = (0..=trunc)
        .map(|n| {
            let cyl = &cylinders[n];
            base.simplices(n)
                .iter()
                .map(|v| {
                    let chi = characteristic_map(base.clone(), v);
                    let w = transport(t, v, &cyl.factor, &chi)?;
                    let comps = (0..objects)
                        .map(|c| {
                            let p = cyl.diagram.value(c);
                            let assign = (0..=trunc)
                                .map(|dim| {
                                    p.generators(dim)
                                        .map(|gen| {
                                            let (y, u) = cyl.pair_of(c, &SimplexRef::generator(gen));
                                            let b = chi.apply(&u);
                                            let x = action.apply(c, dim, w[dim][&u], &y);
                                            tcp.ref_of(c, &b, &x)
                                        })
                                        .collect()
                                })
                                .collect();
                            SimplicialMap::new(p.clone(), tcp.total.value(c).clone(), assign)
                        })
                        .collect();
                    Ok(DiagramMap::new(cyl.diagram.clone(), tcp.total.clone(), comps))
                })
                .collect::<Result<Vec<_>, BundleError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Atlas::new(tcp.projection.clone(), fibre, charts)
}

/// Rewrites a normal atlas within its translation class until every
/// transformation element away from the zeroth face is the unit. The
/// zeroth-face elements of the result form a twisting function.
pub fn regularize(
    a: &Atlas,
    action: &GroupAction,
    budget: &mut Budget,
) -> Result<Atlas, BundleError> {
    let elements = transformation_elements(a, action)?;
    if elements.is_regular() {
        return Ok(a.clone());
    }
    let trunc = a.base.truncation();
    let group = &action.group;
    let mut gamma: Vec<Vec<usize>> = Vec::with_capacity(trunc + 1);
    for n in 0..=trunc {
        let mut level = Vec::with_capacity(a.simplices[n].len());
        for (pos, v) in a.simplices[n].iter().enumerate() {
            if let Some(&j) = v.word.first() {
                let parent = SimplexRef { base: v.base, word: v.word[1..].to_vec() };
                let below = gamma[n - 1][a.index[n - 1][&parent]];
                level.push(group.degeneracy(n - 1, j, below));
                continue;
            }
            let mut found = None;
            for g in 0..group.order(n) {
                budget.tick()?;
                let fits = (1..=n).all(|i| {
                    let prior = gamma[n - 1][a.index[n - 1][&a.base.face(v, i)]];
                    group.face(n, i, g)
                        == group.mult(n - 1, group.inverse(n - 1, elements.xi[n][pos][i]), prior)
                });
                if fits {
                    found = Some(g);
                    break;
                }
            }
            match found {
                Some(g) => level.push(g),
                None => {
                    return Err(BundleError::NotRegularizable {
                        simplex: a.base.display_ref(v),
                    })
                }
            }
        }
        gamma.push(level);
    }
    let charts = (0..=trunc)
        .map(|n| {
            a.simplices[n]
                .iter()
                .enumerate()
                .map(|(pos, v)| {
                    action
                        .rho_endo(&a.cylinders[n], n, gamma[n][pos])
                        .then(a.chart(v))
                })
                .collect()
        })
        .collect();
    let out = Atlas::new(a.bundle.clone(), a.fibre.clone(), charts)?;
    let after = transformation_elements(&out, action)?;
    if !after.is_regular() {
        return Err(BundleError::Atlas("rewrite left a non-unit transformation element".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::bundle::group::two_point_swap;
    use crate::bundle::tcp::build_tcp;
    use crate::bundle::twisting::twisting_equivalent;
    use crate::category::FiniteCategory;
    use crate::simplicial::circle;

    fn setup(base: Presentation, twist_edge: Option<&str>) -> (TwistingFunction, GroupAction) {
        let cat = Arc::new(FiniteCategory::terminal());
        let (group, action) = two_point_swap(cat, base.truncation()).unwrap();
        let base = Arc::new(base);
        let t = match twist_edge {
            Some(name) => {
                let e = base.generator_by_name(name).unwrap();
                let assign = [(e, 1)].into_iter().collect();
                TwistingFunction::from_nondegenerate(base, group, &assign).unwrap()
            }
            None => TwistingFunction::units(base, group),
        };
        (t, action)
    }

    #[test]
    fn product_bundle_atlas_has_unit_elements() {
        let (t, action) = setup(circle(2), None);
        let tcp = build_tcp(&t, &action).unwrap();
        let atlas = tautological_atlas(&tcp).unwrap();
        assert!(atlas.is_normal());
        let elements = transformation_elements(&atlas, &action).unwrap();
        assert!(elements.is_regular());
        let all_units = elements
            .xi
            .iter()
            .enumerate()
            .skip(1)
            .all(|(n, level)| level.iter().flatten().all(|&g| g == elements.group.unit(n - 1)));
        assert!(all_units);
        assert!(elements.twisting(tcp.base()).unwrap().same_values(&t));
    }

    #[test]
    fn tautological_atlas_recovers_the_twisting() {
        let (t, action) = setup(circle(2), Some("e"));
        let tcp = build_tcp(&t, &action).unwrap();
        let atlas = tautological_atlas(&tcp).unwrap();
        assert!(atlas.is_normal());
        let elements = transformation_elements(&atlas, &action).unwrap();
        assert!(elements.is_regular());
        let recovered = elements.twisting(tcp.base()).unwrap();
        assert!(recovered.same_values(&t));
    }

    #[test]
    fn normalization_repairs_a_perturbed_degenerate_chart() {
        let (t, action) = setup(standard_simplex(1, 2), None);
        let tcp = build_tcp(&t, &action).unwrap();
        let atlas = tautological_atlas(&tcp).unwrap();

        let v0 = SimplexRef::generator(atlas.base.generator_by_name("0").unwrap());
        let s0v = atlas.base.degeneracy(&v0, 0);
        let mut charts = atlas.charts.clone();
        let pos = atlas.index[1][&s0v];
        charts[1][pos] = action.rho_endo(&atlas.cylinders[1], 1, 1).then(&charts[1][pos]);
        let perturbed = Atlas::new(atlas.bundle.clone(), atlas.fibre.clone(), charts).unwrap();
        assert!(!perturbed.is_normal());

        let repaired = normalize_atlas(&perturbed).unwrap();
        assert!(repaired.is_normal());
        let e01 = SimplexRef::generator(atlas.base.generator_by_name("01").unwrap());
        assert!(repaired.chart(&e01).same_assignment(atlas.chart(&e01)));
    }

    #[test]
    fn normalization_is_consistent_across_double_degeneracies() {
        let (t, action) = setup(standard_simplex(2, 2), None);
        let tcp = build_tcp(&t, &action).unwrap();
        let atlas = tautological_atlas(&tcp).unwrap();
        let mut charts = atlas.charts.clone();
        // Perturb every chart of a degenerate simplex, then rebuild.
        for n in 1..=2 {
            for (pos, v) in atlas.simplices[n].iter().enumerate() {
                if !v.word.is_empty() {
                    charts[n][pos] =
                        action.rho_endo(&atlas.cylinders[n], n, 1).then(&charts[n][pos]);
                }
            }
        }
        let perturbed = Atlas::new(atlas.bundle.clone(), atlas.fibre.clone(), charts).unwrap();
        assert!(!perturbed.is_normal());
        let repaired = normalize_atlas(&perturbed).unwrap();
        assert!(repaired.is_normal());
    }

    #[test]
    fn regularization_recovers_an_equivalent_twisting() {
        let (t, action) = setup(circle(2), Some("e"));
        let tcp = build_tcp(&t, &action).unwrap();
        let atlas = tautological_atlas(&tcp).unwrap();

        // Plant a conjugating family extended degenerately from the
        // vertex, so the perturbed atlas stays normal but irregular.
        let group = &action.group;
        let mut planted: Vec<Vec<usize>> = Vec::new();
        for n in 0..=2 {
            let level = atlas.simplices[n]
                .iter()
                .map(|v| {
                    if let Some(&j) = v.word.first() {
                        let parent = SimplexRef { base: v.base, word: v.word[1..].to_vec() };
                        group.degeneracy(n - 1, j, planted[n - 1][atlas.index[n - 1][&parent]])
                    } else if v.dim() == 0 {
                        1
                    } else {
                        0
                    }
                })
                .collect();
            planted.push(level);
        }
        let charts = (0..=2usize)
            .map(|n| {
                atlas.simplices[n]
                    .iter()
                    .enumerate()
                    .map(|(pos, v)| {
                        action
                            .rho_endo(&atlas.cylinders[n], n, planted[n][pos])
                            .then(atlas.chart(v))
                    })
                    .collect()
            })
            .collect();
        let perturbed = Atlas::new(atlas.bundle.clone(), atlas.fibre.clone(), charts).unwrap();
        assert!(perturbed.is_normal());
        let before = transformation_elements(&perturbed, &action).unwrap();
        assert!(!before.is_regular());

        let mut budget = Budget::limited(1_000_000);
        let regular = regularize(&perturbed, &action, &mut budget).unwrap();
        let recovered = transformation_elements(&regular, &action)
            .unwrap()
            .twisting(tcp.base())
            .unwrap();
        let found = twisting_equivalent(&t, &recovered, &mut budget).unwrap();
        assert!(found.is_found());
    }
}
