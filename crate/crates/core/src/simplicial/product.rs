//! Binary products of presented simplicial sets.
//!
//! An `m`-simplex of `X x Y` is a pair of `m`-simplices. The pair is
//! non-degenerate exactly when the two degeneracy words share no letter, so
//! the product presentation has one generator per such pair. Normal forms of
//! pairs are computed by splitting off the common part of the two words.

use super::{GenId, Presentation, SimplexRef, SimplicialMap};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Product presentation together with translation to and from coordinates.
#[derive(Debug, Clone)]
pub struct ProductPresentation {
    pub left: Arc<Presentation>,
    pub right: Arc<Presentation>,
    pub result: Arc<Presentation>,
    /// Coordinates of each generator, indexed by dimension then generator.
    pairs: Vec<Vec<(SimplexRef, SimplexRef)>>,
    index: BTreeMap<(SimplexRef, SimplexRef), GenId>,
}

/// Sorted-descending intersection of two strictly decreasing words.
fn common_letters(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

/// Removes the letters of `common` from `word`, shifting the survivors down
/// past each removed letter.
fn strip_letters(word: &[usize], common: &[usize]) -> Vec<usize> {
    word.iter()
        .copied()
        .filter(|x| !common.contains(x))
        .map(|x| x - common.iter().filter(|&&c| c < x).count())
        .collect()
}

impl ProductPresentation {
    /// Builds the product, truncated at the smaller truncation.
    pub fn build(left: Arc<Presentation>, right: Arc<Presentation>) -> Self {
        let trunc = left.truncation().min(right.truncation());
        let mut result = Presentation::new(trunc);
        let mut pairs: Vec<Vec<(SimplexRef, SimplexRef)>> = vec![Vec::new(); trunc + 1];
        let mut index: BTreeMap<(SimplexRef, SimplexRef), GenId> = BTreeMap::new();
        for n in 0..=trunc {
            let ls = left.simplices(n);
            let rs = right.simplices(n);
            for a in &ls {
                for b in &rs {
                    if !common_letters(&a.word, &b.word).is_empty() {
                        continue;
                    }
                    let name = format!(
                        "({},{})",
                        left.display_ref(a),
                        right.display_ref(b)
                    );
                    let gid = if n == 0 {
                        result.add_vertex(name)
                    } else {
                        let faces = (0..=n)
                            .map(|i| {
                                let fa = left.face(a, i);
                                let fb = right.face(b, i);
                                normal_form(&index, &fa, &fb)
                            })
                            .collect();
                        result.add_generator(name, faces).expect("face dimensions agree")
                    };
                    pairs[n].push((a.clone(), b.clone()));
                    index.insert((a.clone(), b.clone()), gid);
                }
            }
        }
        ProductPresentation {
            left,
            right,
            result: Arc::new(result),
            pairs,
            index,
        }
    }

    /// Normal form of an arbitrary coordinate pair of equal dimension.
    pub fn ref_of(&self, a: &SimplexRef, b: &SimplexRef) -> SimplexRef {
        debug_assert_eq!(a.dim(), b.dim());
        normal_form(&self.index, a, b)
    }

    /// Coordinates of an arbitrary simplex of the product.
    pub fn pair_of(&self, r: &SimplexRef) -> (SimplexRef, SimplexRef) {
        let (a0, b0) = &self.pairs[r.base.dim][r.base.idx];
        let mut a = a0.clone();
        let mut b = b0.clone();
        for &j in r.word.iter().rev() {
            a = self.left.degeneracy(&a, j);
            b = self.right.degeneracy(&b, j);
        }
        (a, b)
    }

    /// First projection as a simplicial map.
    pub fn projection_left(&self) -> SimplicialMap {
        let assign = self
            .pairs
            .iter()
            .map(|level| level.iter().map(|(a, _)| a.clone()).collect())
            .collect();
        SimplicialMap::new(self.result.clone(), self.left.clone(), assign)
    }

    /// Second projection as a simplicial map.
    pub fn projection_right(&self) -> SimplicialMap {
        let assign = self
            .pairs
            .iter()
            .map(|level| level.iter().map(|(_, b)| b.clone()).collect())
            .collect();
        SimplicialMap::new(self.result.clone(), self.right.clone(), assign)
    }

    /// Pairs `f x g` of maps into the two factors, where `f` and `g` share a
    /// source, into a map into the product.
    pub fn tuple(&self, f: &SimplicialMap, g: &SimplicialMap) -> SimplicialMap {
        let src = f.source.clone();
        let assign = (0..=src.truncation())
            .map(|d| {
                src.generators(d)
                    .map(|gen| {
                        let r = SimplexRef::generator(gen);
                        self.ref_of(&f.apply(&r), &g.apply(&r))
                    })
                    .collect()
            })
            .collect();
        SimplicialMap::new(src, self.result.clone(), assign)
    }

    /// The map `u x v` induced on products by maps of the factors, where
    /// `other` is the product of the targets.
    pub fn map_between(
        &self,
        other: &ProductPresentation,
        u: &SimplicialMap,
        v: &SimplicialMap,
    ) -> SimplicialMap {
        let assign = self
            .pairs
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|(a, b)| other.ref_of(&u.apply(a), &v.apply(b)))
                    .collect()
            })
            .collect();
        SimplicialMap::new(self.result.clone(), other.result.clone(), assign)
    }
}

fn normal_form(
    index: &BTreeMap<(SimplexRef, SimplexRef), GenId>,
    a: &SimplexRef,
    b: &SimplexRef,
) -> SimplexRef {
    let common = common_letters(&a.word, &b.word);
    let a0 = SimplexRef { base: a.base, word: strip_letters(&a.word, &common) };
    let b0 = SimplexRef { base: b.base, word: strip_letters(&b.word, &common) };
    let base = *index
        .get(&(a0, b0))
        .expect("jointly non-degenerate pair is a product generator");
    SimplexRef { base, word: common }
}

#[cfg(test)]
mod tests {
    use super::super::{check_simplicial_identities, standard_simplex};
    use super::*;

    #[test]
    fn square_generator_counts() {
        let e = Arc::new(standard_simplex(1, 2));
        let sq = ProductPresentation::build(e.clone(), e.clone());
        sq.result.validate().unwrap();
        check_simplicial_identities(&sq.result, 2).unwrap();
        // The square: 4 vertices, 5 edges, 2 triangles.
        assert_eq!(sq.result.generator_counts(), vec![4, 5, 2]);
    }

    #[test]
    fn product_with_point_is_identity_shaped() {
        let d2 = Arc::new(standard_simplex(2, 2));
        let pt = Arc::new(standard_simplex(0, 2));
        let p = ProductPresentation::build(d2.clone(), pt);
        assert_eq!(p.result.generator_counts(), d2.generator_counts());
        for n in 0..=2 {
            assert_eq!(p.result.simplex_count(n), d2.simplex_count(n));
        }
    }

    #[test]
    fn projections_are_simplicial() {
        let e = Arc::new(standard_simplex(1, 2));
        let d2 = Arc::new(standard_simplex(2, 2));
        let p = ProductPresentation::build(e, d2);
        p.projection_left().validate().unwrap();
        p.projection_right().validate().unwrap();
    }

    #[test]
    fn round_trip_pair_normal_form() {
        let e = Arc::new(standard_simplex(1, 3));
        let p = ProductPresentation::build(e.clone(), e.clone());
        for n in 0..=2 {
            for a in e.simplices(n) {
                for b in e.simplices(n) {
                    let r = p.ref_of(&a, &b);
                    assert_eq!(p.pair_of(&r), (a.clone(), b.clone()));
                    // Faces commute with coordinates.
                    if n >= 1 {
                        for i in 0..=n {
                            let fr = p.result.face(&r, i);
                            let (fa, fb) = p.pair_of(&fr);
                            assert_eq!(fa, e.face(&a, i));
                            assert_eq!(fb, e.face(&b, i));
                        }
                    }
                }
            }
        }
    }
}
