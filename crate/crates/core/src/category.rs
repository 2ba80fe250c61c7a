//! Finite index categories with explicit composition tables.
//!
//! Objects and morphisms are stored by index. The composition table is total
//! on composable pairs and absent elsewhere, which `validate` enforces along
//! with identity and associativity laws. The EI property (every endomorphism
//! is invertible) and the component preorder are decided by table scans.

use serde::{Deserialize, Serialize};

/// Errors raised while assembling or validating a finite category.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CategoryError {
    #[error("object index {0} out of range")]
    UnknownObject(usize),
    #[error("morphism index {0} out of range")]
    UnknownMorphism(usize),
    #[error("duplicate morphism name {0:?}")]
    DuplicateMorphism(String),
    #[error("duplicate object name {0:?}")]
    DuplicateObject(String),
    #[error("composite of {g} after {f} missing")]
    MissingComposite { g: usize, f: usize },
    #[error("composite defined for non-composable pair ({g}, {f})")]
    SpuriousComposite { g: usize, f: usize },
    #[error("composite of {g} after {f} has wrong endpoints")]
    CompositeEndpoints { g: usize, f: usize },
    #[error("identity law fails for morphism {0}")]
    IdentityLaw(usize),
    #[error("associativity fails on ({h}, {g}, {f})")]
    Associativity { h: usize, g: usize, f: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// A finite category: named objects, named morphisms, composition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    /// `compose[g][f]` is `g o f` when `dst(f) = src(g)`.
    compose: Vec<Vec<Option<usize>>>,
    /// Identity morphism index per object.
    identities: Vec<usize>,
}

impl FiniteCategory {
    /// Starts a category; identities are created automatically per object.
    pub fn builder() -> CategoryBuilder {
        CategoryBuilder { objects: Vec::new(), morphisms: Vec::new(), pairs: Vec::new() }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn object_by_name(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|n| n == name)
    }

    pub fn morphism(&self, m: usize) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.morphisms[m].src] == m
    }

    /// `g o f`, defined when `dst(f) = src(g)`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g][f]
    }

    /// All morphisms from `a` to `b`.
    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&m| self.morphisms[m].src == a && self.morphisms[m].dst == b)
            .collect()
    }

    /// All morphisms out of `a`.
    pub fn from_object(&self, a: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&m| self.morphisms[m].src == a).collect()
    }

    /// Checks identity, composability and associativity laws.
    pub fn validate(&self) -> Result<(), CategoryError> {
        let mut names = std::collections::BTreeSet::new();
        for o in &self.objects {
            if !names.insert(format!("ob:{}", o)) {
                return Err(CategoryError::DuplicateObject(o.clone()));
            }
        }
        let mut mnames = std::collections::BTreeSet::new();
        for m in &self.morphisms {
            if !mnames.insert(m.name.clone()) {
                return Err(CategoryError::DuplicateMorphism(m.name.clone()));
            }
            if m.src >= self.objects.len() || m.dst >= self.objects.len() {
                return Err(CategoryError::UnknownObject(m.src.max(m.dst)));
            }
        }
        for (o, &id) in self.identities.iter().enumerate() {
            if id >= self.morphisms.len()
                || self.morphisms[id].src != o
                || self.morphisms[id].dst != o
            {
                return Err(CategoryError::UnknownMorphism(id));
            }
        }
        let n = self.morphisms.len();
        for g in 0..n {
            for f in 0..n {
                let composable = self.morphisms[f].dst == self.morphisms[g].src;
                match self.compose[g][f] {
                    None if composable => return Err(CategoryError::MissingComposite { g, f }),
                    Some(_) if !composable => {
                        return Err(CategoryError::SpuriousComposite { g, f })
                    }
                    Some(h) => {
                        let hm = &self.morphisms[h];
                        if hm.src != self.morphisms[f].src || hm.dst != self.morphisms[g].dst {
                            return Err(CategoryError::CompositeEndpoints { g, f });
                        }
                    }
                    None => {}
                }
            }
        }
        for f in 0..n {
            let id_dst = self.identities[self.morphisms[f].dst];
            let id_src = self.identities[self.morphisms[f].src];
            if self.compose[id_dst][f] != Some(f) || self.compose[f][id_src] != Some(f) {
                return Err(CategoryError::IdentityLaw(f));
            }
        }
        for h in 0..n {
            for g in 0..n {
                if let Some(gf) = self.compose[h][g] {
                    let _ = gf;
                    for f in 0..n {
                        if let Some(inner) = self.compose[g][f] {
                            let left = self.compose[h][inner];
                            let right = self.compose[self.compose[h][g].unwrap()][f];
                            if left != right {
                                return Err(CategoryError::Associativity { h, g, f });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// True when every endomorphism has a two-sided inverse.
    pub fn is_ei(&self) -> bool {
        for f in 0..self.morphisms.len() {
            let m = &self.morphisms[f];
            if m.src != m.dst {
                continue;
            }
            let id = self.identities[m.src];
            let invertible = (0..self.morphisms.len()).any(|g| {
                self.compose(g, f) == Some(id) && self.compose(f, g) == Some(id)
            });
            if !invertible {
                return false;
            }
        }
        true
    }

    /// The preorder `a <= b` iff some morphism `a -> b` exists, quotiented
    /// to a partial order on mutual-reachability classes.
    pub fn component_poset(&self) -> ComponentPoset {
        let n = self.objects.len();
        let mut reach = vec![vec![false; n]; n];
        for (a, row) in reach.iter_mut().enumerate() {
            row[a] = true;
            for m in &self.morphisms {
                if m.src == a {
                    row[m.dst] = true;
                }
            }
        }
        // Composition makes reachability transitive already, but closing is
        // harmless and guards against partially assembled tables in tests.
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if reach[a][k] && reach[k][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let members: Vec<usize> =
                (0..n).filter(|&b| reach[a][b] && reach[b][a]).collect();
            let c = classes.len();
            for &b in &members {
                class_of[b] = c;
            }
            classes.push(members);
        }
        let k = classes.len();
        let mut leq = vec![vec![false; k]; k];
        for (i, row) in leq.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = reach[classes[i][0]][classes[j][0]];
            }
        }
        ComponentPoset { class_of, classes, leq }
    }

    /// Finite categories always satisfy the descending chain condition on
    /// their component poset.
    pub fn is_artinian(&self) -> bool {
        true
    }
}

/// The poset of mutual-reachability classes of objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPoset {
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    /// `leq[i][j]` iff class `i <= j`.
    pub leq: Vec<Vec<bool>>,
}

impl ComponentPoset {
    /// Antisymmetry check; holds by construction, kept as a test hook.
    pub fn is_partial_order(&self) -> bool {
        let k = self.classes.len();
        for i in 0..k {
            if !self.leq[i][i] {
                return false;
            }
            for j in 0..k {
                if i != j && self.leq[i][j] && self.leq[j][i] {
                    return false;
                }
                for l in 0..k {
                    if self.leq[i][j] && self.leq[j][l] && !self.leq[i][l] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Classes that are minimal in the order.
    pub fn minimal_classes(&self) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| (0..self.classes.len()).all(|j| j == i || !self.leq[j][i]))
            .collect()
    }

    /// Classes that are maximal in the order.
    pub fn maximal_classes(&self) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| (0..self.classes.len()).all(|j| j == i || !self.leq[i][j]))
            .collect()
    }
}

/// Incremental construction of a [`FiniteCategory`].
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    pairs: Vec<(usize, usize, usize)>,
}

impl CategoryBuilder {
    /// Adds an object together with its identity morphism `id_<name>`.
    pub fn object(&mut self, name: impl Into<String>) -> usize {
        let name = name.into();
        let o = self.objects.len();
        self.morphisms.push(Morphism { name: format!("id_{}", name), src: o, dst: o });
        self.objects.push(name);
        o
    }

    /// Adds a named morphism and returns its index.
    pub fn morphism(&mut self, name: impl Into<String>, src: usize, dst: usize) -> usize {
        self.morphisms.push(Morphism { name: name.into(), src, dst });
        self.morphisms.len() - 1
    }

    /// Records `g o f = h` for non-identity data.
    pub fn composite(&mut self, g: usize, f: usize, h: usize) {
        self.pairs.push((g, f, h));
    }

    /// Index of the identity of object `o` among the recorded morphisms.
    pub fn identity_of(&self, o: usize) -> usize {
        self.morphisms
            .iter()
            .position(|m| m.src == o && m.dst == o && m.name == format!("id_{}", self.objects[o]))
            .expect("identity exists by construction")
    }

    /// Fills identity composites, then validates.
    pub fn finish(self) -> Result<FiniteCategory, CategoryError> {
        let n = self.morphisms.len();
        let identities: Vec<usize> = (0..self.objects.len()).map(|o| self.identity_of(o)).collect();
        let mut compose = vec![vec![None; n]; n];
        for (g, f, h) in self.pairs {
            if g >= n || f >= n || h >= n {
                return Err(CategoryError::UnknownMorphism(g.max(f).max(h)));
            }
            compose[g][f] = Some(h);
        }
        for f in 0..n {
            let m = &self.morphisms[f];
            compose[identities[m.dst]][f] = Some(f);
            compose[f][identities[m.src]] = Some(f);
        }
        let cat = FiniteCategory {
            objects: self.objects,
            morphisms: self.morphisms,
            compose,
            identities,
        };
        cat.validate()?;
        Ok(cat)
    }
}

impl FiniteCategory {
    /// The one-object, one-morphism category.
    pub fn terminal() -> Self {
        let mut b = FiniteCategory::builder();
        b.object("pt");
        b.finish().expect("terminal category is valid")
    }

    /// Two objects and a single non-identity morphism `f: a -> b`.
    pub fn arrow() -> Self {
        let mut b = FiniteCategory::builder();
        let _a = b.object("a");
        let _b = b.object("b");
        b.morphism("f", 0, 1);
        b.finish().expect("arrow category is valid")
    }

    /// One object with morphisms a finite group, composed by `mult`.
    /// `mult[g][f]` is the composite `g o f`; `unit` indexes the identity.
    pub fn one_object_group(
        obj: impl Into<String>,
        elems: &[&str],
        unit: usize,
        mult: &[Vec<usize>],
    ) -> Self {
        let obj = obj.into();
        let mut b = FiniteCategory::builder();
        b.object(obj);
        // The auto identity stands for the unit; other elements follow.
        let mut index = vec![0usize; elems.len()];
        for (i, e) in elems.iter().enumerate() {
            if i != unit {
                index[i] = b.morphism(*e, 0, 0);
            }
        }
        index[unit] = 0;
        for g in 0..elems.len() {
            for f in 0..elems.len() {
                if g != unit && f != unit {
                    b.composite(index[g], index[f], index[mult[g][f]]);
                }
            }
        }
        b.finish().expect("group composition table is a category")
    }

    /// The codiscrete category on the given labels: exactly one morphism
    /// between every ordered pair of objects.
    pub fn codiscrete(labels: &[&str]) -> Self {
        let mut b = FiniteCategory::builder();
        for l in labels {
            b.object(*l);
        }
        let n = labels.len();
        let mut arrow = vec![vec![0usize; n]; n];
        for (i, row) in arrow.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                if i == j {
                    *cell = b.identity_of(i);
                } else {
                    *cell = b.morphism(format!("{}_to_{}", labels[i], labels[j]), i, j);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // g: j -> k after f: i -> j.
                    let g = arrow[j][k];
                    let f = arrow[i][j];
                    if i != j && j != k {
                        b.composite(g, f, arrow[i][k]);
                    }
                }
            }
        }
        b.finish().expect("codiscrete category is valid")
    }

    /// B(Z/2): one object, morphisms {e, g} with g o g = e.
    pub fn z2() -> Self {
        FiniteCategory::one_object_group("o", &["e", "g"], 0, &[vec![0, 1], vec![1, 0]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_and_arrow_validate() {
        let t = FiniteCategory::terminal();
        assert_eq!(t.object_count(), 1);
        assert_eq!(t.morphism_count(), 1);
        assert!(t.is_ei());
        let a = FiniteCategory::arrow();
        assert_eq!(a.morphism_count(), 3);
        assert!(a.is_ei());
        let poset = a.component_poset();
        assert_eq!(poset.classes.len(), 2);
        assert!(poset.is_partial_order());
        assert!(poset.leq[poset.class_of[0]][poset.class_of[1]]);
        assert!(!poset.leq[poset.class_of[1]][poset.class_of[0]]);
    }

    #[test]
    fn z2_is_ei_group() {
        let c = FiniteCategory::z2();
        assert_eq!(c.morphism_count(), 2);
        assert!(c.is_ei());
        assert_eq!(c.component_poset().classes.len(), 1);
        let g = c.morphism_by_name("g").unwrap();
        assert_eq!(c.compose(g, g), Some(c.identity(0)));
    }

    #[test]
    fn idempotent_breaks_ei() {
        let mut b = FiniteCategory::builder();
        b.object("a");
        let e = b.morphism("e", 0, 0);
        b.composite(e, e, e);
        let c = b.finish().unwrap();
        assert!(!c.is_ei());
    }

    #[test]
    fn cospan_component_poset() {
        // a -> b <- c: three singleton classes, b maximal.
        let mut bld = FiniteCategory::builder();
        let a = bld.object("a");
        let b = bld.object("b");
        let c = bld.object("c");
        bld.morphism("f", a, b);
        bld.morphism("g", c, b);
        let cat = bld.finish().unwrap();
        let poset = cat.component_poset();
        assert_eq!(poset.classes.len(), 3);
        assert_eq!(poset.maximal_classes(), vec![poset.class_of[b]]);
        let mins = poset.minimal_classes();
        assert!(mins.contains(&poset.class_of[a]) && mins.contains(&poset.class_of[c]));
        assert!(cat.is_artinian());
    }

    #[test]
    fn codiscrete_on_two_labels() {
        let c = FiniteCategory::codiscrete(&["e", "g"]);
        c.validate().unwrap();
        assert_eq!(c.morphism_count(), 4);
        assert!(c.is_ei());
        assert_eq!(c.component_poset().classes.len(), 1);
        // Every hom set is a singleton.
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(c.hom(i, j).len(), 1);
            }
        }
    }

    #[test]
    fn renaming_preserves_ei_and_poset_shape() {
        let c1 = FiniteCategory::codiscrete(&["x", "y"]);
        let c2 = FiniteCategory::codiscrete(&["p", "q"]);
        assert_eq!(c1.is_ei(), c2.is_ei());
        assert_eq!(c1.component_poset().classes.len(), c2.component_poset().classes.len());
    }
}
