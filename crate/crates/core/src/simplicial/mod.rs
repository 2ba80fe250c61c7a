//! Truncated simplicial sets presented by non-degenerate generators.
//!
//! A presentation stores, for each dimension up to the truncation, the list
//! of non-degenerate generators and, for positive dimensions, the faces of
//! each generator. Faces are written in Eilenberg-Zilber normal form: every
//! simplex is `s_{j_t} ... s_{j_1} g` for a unique generator `g` and a unique
//! strictly decreasing degeneracy word `j_t > ... > j_1`. All operator
//! algebra is done symbolically on these normal forms, so the simplicial
//! identities involving degeneracies hold by construction; the only identity
//! carried by data is `d_i d_j = d_{j-1} d_i` on generator face tables, which
//! [`Presentation::validate`] checks.

mod horn;
mod levelwise;
mod map;
mod product;
mod standard;

pub use horn::{fill_horn, is_kan_complex_upto, is_kan_fibration_upto, FibrationFailure, FibrationReport, HornError, HornProblem};
pub use levelwise::{presentation_from_levels, LevelwiseData, LevelwiseError, LevelwiseResult};
pub use map::{MapError, SimplicialMap};
pub use product::ProductPresentation;
pub use standard::{
    boundary_simplex, characteristic_map, circle, codegeneracy, codiscrete_nerve, coface,
    group_nerve, horn_complex, monotone_map, monotone_simplex, nerve, standard_simplex,
    vertex_components,
};

use serde::{Deserialize, Serialize};
use std::fmt;

/// Identifier of a non-degenerate generator: dimension plus index within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenId {
    pub dim: usize,
    pub idx: usize,
}

/// A simplex in normal form: a generator with a strictly decreasing
/// degeneracy word applied to it. The word is stored outermost first, so
/// `word = [3, 1]` means `s_3 s_1 base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplexRef {
    pub base: GenId,
    pub word: Vec<usize>,
}

impl SimplexRef {
    /// The generator itself, with empty degeneracy word.
    pub fn generator(base: GenId) -> Self {
        SimplexRef { base, word: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.base.dim + self.word.len()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.word.is_empty()
    }

    /// Checks that the word is strictly decreasing and stays in range when
    /// applied to the base dimension.
    pub fn word_is_valid(&self) -> bool {
        let r = self.word.len();
        for (pos, &j) in self.word.iter().enumerate() {
            // Applied position counts from the innermost letter.
            let applied = r - pos;
            if j > self.base.dim + applied - 1 {
                return false;
            }
            if pos + 1 < r && self.word[pos + 1] >= j {
                return false;
            }
        }
        true
    }
}

impl PartialOrd for SimplexRef {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SimplexRef {
    /// Canonical order: total dimension, then generator id, then word.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.base.cmp(&other.base))
            .then_with(|| self.word.cmp(&other.word))
    }
}

/// Inserts `s_i` on the outside of a strictly decreasing degeneracy word,
/// renormalizing with `s_i s_j = s_{j+1} s_i` for `i <= j`.
pub(crate) fn word_insert(word: &mut Vec<usize>, i: usize) {
    let mut pos = 0;
    while pos < word.len() && i <= word[pos] {
        word[pos] += 1;
        pos += 1;
    }
    word.insert(pos, i);
}

/// Pushes `d_i` through a degeneracy word. Returns the renormalized prefix
/// word together with `Some(i')` if the face reaches the base as `d_{i'}`,
/// or `None` if it cancelled against a degeneracy.
pub(crate) fn word_push_face(word: &[usize], i: usize) -> (Vec<usize>, Option<usize>) {
    let mut out = Vec::with_capacity(word.len());
    let mut cur = i;
    for (pos, &j) in word.iter().enumerate() {
        if cur < j {
            out.push(j - 1);
        } else if cur == j || cur == j + 1 {
            out.extend_from_slice(&word[pos + 1..]);
            return (out, None);
        } else {
            out.push(j);
            cur -= 1;
        }
    }
    (out, Some(cur))
}

/// A single face or degeneracy operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Op {
    D(usize),
    S(usize),
}

/// Errors arising while building or validating a presentation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("truncation {0} too small for a generator of dimension {1}")]
    TruncationTooSmall(usize, usize),
    #[error("generator {0:?} out of range")]
    UnknownGenerator(GenId),
    #[error("face table of {gen:?} has {got} entries, expected {expected}")]
    FaceArity { gen: GenId, got: usize, expected: usize },
    #[error("face {index} of {gen:?} has dimension {got}, expected {expected}")]
    FaceDimension { gen: GenId, index: usize, got: usize, expected: usize },
    #[error("invalid degeneracy word on {0:?}")]
    InvalidWord(GenId),
    #[error("face identity fails on {gen:?}: d_{i} d_{j} != d_{jm1} d_{i}", jm1 = .j - 1)]
    FaceIdentity { gen: GenId, i: usize, j: usize },
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
}

/// A truncated simplicial set presented by generators and face tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    truncation: usize,
    /// Generator names per dimension, `0 ..= truncation`.
    gen_names: Vec<Vec<String>>,
    /// `faces[n][g][i]` is `d_i` of generator `g` in dimension `n >= 1`.
    faces: Vec<Vec<Vec<SimplexRef>>>,
}

impl Presentation {
    /// An empty presentation truncated at `truncation`.
    pub fn new(truncation: usize) -> Self {
        Presentation {
            truncation,
            gen_names: vec![Vec::new(); truncation + 1],
            faces: vec![Vec::new(); truncation + 1],
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// The same generators up to dimension `d`, re-truncated there.
    pub fn truncate(&self, d: usize) -> Presentation {
        let mut out = Presentation::new(d);
        for dim in 0..=d.min(self.truncation) {
            for g in self.generators(dim) {
                if dim == 0 {
                    out.add_vertex(self.generator_name(g));
                } else {
                    out.add_generator(self.generator_name(g), self.generator_faces(g).to_vec())
                        .expect("faces live below the cut");
                }
            }
        }
        out
    }

    /// Adds a vertex generator and returns its id.
    pub fn add_vertex(&mut self, name: impl Into<String>) -> GenId {
        self.gen_names[0].push(name.into());
        GenId { dim: 0, idx: self.gen_names[0].len() - 1 }
    }

    /// Adds a generator of dimension `faces.len() - 1` with the given face
    /// tuple `[d_0, ..., d_n]`.
    pub fn add_generator(
        &mut self,
        name: impl Into<String>,
        faces: Vec<SimplexRef>,
    ) -> Result<GenId, PresentationError> {
        let n = faces.len().checked_sub(1).expect("face tuple must be non-empty");
        assert!(n >= 1, "vertices are added with add_vertex");
        if n > self.truncation {
            return Err(PresentationError::TruncationTooSmall(self.truncation, n));
        }
        let gen = GenId { dim: n, idx: self.gen_names[n].len() };
        for (i, f) in faces.iter().enumerate() {
            if f.dim() != n - 1 {
                return Err(PresentationError::FaceDimension {
                    gen,
                    index: i,
                    got: f.dim(),
                    expected: n - 1,
                });
            }
        }
        self.gen_names[n].push(name.into());
        self.faces[n].push(faces);
        Ok(gen)
    }

    pub fn generator_count(&self, dim: usize) -> usize {
        if dim > self.truncation {
            0
        } else {
            self.gen_names[dim].len()
        }
    }

    /// Generator counts for dimensions `0 ..= truncation`.
    pub fn generator_counts(&self) -> Vec<usize> {
        (0..=self.truncation).map(|d| self.generator_count(d)).collect()
    }

    pub fn generator_name(&self, id: GenId) -> &str {
        &self.gen_names[id.dim][id.idx]
    }

    pub fn generators(&self, dim: usize) -> impl Iterator<Item = GenId> + '_ {
        let count = self.generator_count(dim);
        (0..count).map(move |idx| GenId { dim, idx })
    }

    /// All generators, dimension ascending.
    pub fn all_generators(&self) -> impl Iterator<Item = GenId> + '_ {
        (0..=self.truncation).flat_map(move |d| self.generators(d))
    }

    pub fn contains(&self, id: GenId) -> bool {
        id.dim <= self.truncation && id.idx < self.gen_names[id.dim].len()
    }

    /// Looks a generator up by name.
    pub fn generator_by_name(&self, name: &str) -> Option<GenId> {
        for dim in 0..=self.truncation {
            if let Some(idx) = self.gen_names[dim].iter().position(|n| n == name) {
                return Some(GenId { dim, idx });
            }
        }
        None
    }

    /// The stored face tuple of a generator of positive dimension.
    pub fn generator_faces(&self, id: GenId) -> &[SimplexRef] {
        &self.faces[id.dim][id.idx]
    }

    /// `d_i` of an arbitrary simplex in normal form.
    pub fn face(&self, r: &SimplexRef, i: usize) -> SimplexRef {
        debug_assert!(r.dim() >= 1 && i <= r.dim());
        let (prefix, hit) = word_push_face(&r.word, i);
        match hit {
            None => SimplexRef { base: r.base, word: prefix },
            Some(i0) => {
                let stored = &self.faces[r.base.dim][r.base.idx][i0];
                let mut word = stored.word.clone();
                for &k in prefix.iter().rev() {
                    word_insert(&mut word, k);
                }
                SimplexRef { base: stored.base, word }
            }
        }
    }

    /// `s_i` of an arbitrary simplex in normal form.
    pub fn degeneracy(&self, r: &SimplexRef, i: usize) -> SimplexRef {
        debug_assert!(i <= r.dim());
        let mut word = r.word.clone();
        word_insert(&mut word, i);
        SimplexRef { base: r.base, word }
    }

    /// Applies an operator word, outermost first, to a simplex.
    pub fn apply_ops(&self, ops: &[Op], r: &SimplexRef) -> SimplexRef {
        let mut cur = r.clone();
        for op in ops.iter().rev() {
            cur = match *op {
                Op::D(i) => self.face(&cur, i),
                Op::S(i) => self.degeneracy(&cur, i),
            };
        }
        cur
    }

    /// All simplices of dimension `n` in canonical order. Includes the
    /// degenerate ones; `n` may not exceed the truncation.
    pub fn simplices(&self, n: usize) -> Vec<SimplexRef> {
        assert!(n <= self.truncation, "dimension beyond truncation");
        let mut out = Vec::new();
        for m in 0..=n {
            for g in self.generators(m) {
                let mut word = Vec::new();
                collect_words(m, n - m, n, &mut word, &mut |w| {
                    out.push(SimplexRef { base: g, word: w.to_vec() });
                });
            }
        }
        out
    }

    /// Number of simplices in dimension `n`, by the closed count
    /// `sum_m gens(m) * C(n, m)`.
    pub fn simplex_count(&self, n: usize) -> usize {
        (0..=n.min(self.truncation))
            .map(|m| self.generator_count(m) * binomial(n, m))
            .sum()
    }

    /// Recovers the normal form of a simplex known only through a generator
    /// and word that may be out of normal form is not supported; refs are
    /// normal by construction. This checks a ref points at real data.
    pub fn check_ref(&self, r: &SimplexRef) -> Result<(), PresentationError> {
        if !self.contains(r.base) {
            return Err(PresentationError::UnknownGenerator(r.base));
        }
        if !r.word_is_valid() || r.dim() > self.truncation {
            return Err(PresentationError::InvalidWord(r.base));
        }
        Ok(())
    }

    /// Full structural validation: face arities, dimensions, ref validity,
    /// uniqueness of names, and the face-face identity on every generator.
    pub fn validate(&self) -> Result<(), PresentationError> {
        let mut seen = std::collections::BTreeSet::new();
        for dim in 0..=self.truncation {
            for (idx, name) in self.gen_names[dim].iter().enumerate() {
                if !seen.insert(name.clone()) {
                    return Err(PresentationError::DuplicateName(name.clone()));
                }
                let gen = GenId { dim, idx };
                if dim == 0 {
                    continue;
                }
                let faces = &self.faces[dim][idx];
                if faces.len() != dim + 1 {
                    return Err(PresentationError::FaceArity {
                        gen,
                        got: faces.len(),
                        expected: dim + 1,
                    });
                }
                for (i, f) in faces.iter().enumerate() {
                    self.check_ref(f)?;
                    if f.dim() != dim - 1 {
                        return Err(PresentationError::FaceDimension {
                            gen,
                            index: i,
                            got: f.dim(),
                            expected: dim - 1,
                        });
                    }
                }
            }
        }
        for dim in 2..=self.truncation {
            for gen in self.generators(dim).collect::<Vec<_>>() {
                let r = SimplexRef::generator(gen);
                for j in 1..=dim {
                    for i in 0..j {
                        let lhs = self.face(&self.face(&r, j), i);
                        let rhs = self.face(&self.face(&r, i), j - 1);
                        if lhs != rhs {
                            return Err(PresentationError::FaceIdentity { gen, i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Renders a simplex as `s_3 s_1 name`.
    pub fn display_ref(&self, r: &SimplexRef) -> String {
        let mut s = String::new();
        for &j in &r.word {
            s.push_str(&format!("s{} ", j));
        }
        s.push_str(self.generator_name(r.base));
        s
    }
}

/// Enumerates strictly decreasing words of length `len` applicable to base
/// dimension `m`, in lexicographic order of the stored (outermost first)
/// representation. `top` bounds the outermost letter.
fn collect_words(m: usize, len: usize, top: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if len == 0 {
        f(acc);
        return;
    }
    // Outermost letter j satisfies j <= m + len - 1 and leaves room for the
    // len - 1 smaller letters below it.
    let hi = (m + len - 1).min(top.saturating_sub(1));
    let lo = len - 1;
    for j in lo..=hi {
        acc.push(j);
        collect_words(m, len - 1, j, acc, f);
        acc.pop();
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1usize;
    for i in 0..k {
        num = num * (n - i) / (i + 1);
    }
    num
}

/// A witness that some simplicial identity fails on concrete data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityViolation {
    pub simplex: SimplexRef,
    pub description: String,
}

impl fmt::Display for IdentityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {:?}", self.description, self.simplex)
    }
}

/// Exhaustively checks all five simplicial identity families on every
/// simplex of every dimension up to `dim_cap`, staying inside the
/// truncation. Returns the first violation found.
pub fn check_simplicial_identities(
    p: &Presentation,
    dim_cap: usize,
) -> Result<usize, IdentityViolation> {
    let cap = dim_cap.min(p.truncation());
    let mut checked = 0usize;
    for n in 0..=cap {
        for x in p.simplices(n) {
            // d_i d_j = d_{j-1} d_i for i < j.
            if n >= 2 {
                for j in 1..=n {
                    for i in 0..j {
                        checked += 1;
                        if p.face(&p.face(&x, j), i) != p.face(&p.face(&x, i), j - 1) {
                            return Err(IdentityViolation {
                                simplex: x,
                                description: format!("d_{} d_{} != d_{} d_{}", i, j, j - 1, i),
                            });
                        }
                    }
                }
            }
            // s_i s_j = s_{j+1} s_i for i <= j.
            if n + 2 <= p.truncation() {
                for j in 0..=n {
                    for i in 0..=j {
                        checked += 1;
                        let lhs = p.degeneracy(&p.degeneracy(&x, j), i);
                        let rhs = p.degeneracy(&p.degeneracy(&x, i), j + 1);
                        if lhs != rhs {
                            return Err(IdentityViolation {
                                simplex: x,
                                description: format!("s_{} s_{} != s_{} s_{}", i, j, j + 1, i),
                            });
                        }
                    }
                }
            }
            // Mixed identities through s_j, for each face index of s_j x.
            if n + 1 <= p.truncation() {
                for j in 0..=n {
                    let sj = p.degeneracy(&x, j);
                    for i in 0..=n + 1 {
                        checked += 1;
                        let lhs = p.face(&sj, i);
                        let ok = if i < j {
                            lhs == p.degeneracy(&p.face(&x, i), j - 1)
                        } else if i == j || i == j + 1 {
                            lhs == x
                        } else {
                            lhs == p.degeneracy(&p.face(&x, i - 1), j)
                        };
                        if !ok {
                            return Err(IdentityViolation {
                                simplex: x,
                                description: format!("d_{} s_{} identity", i, j),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_insert_normalizes() {
        let mut w = vec![];
        word_insert(&mut w, 0);
        assert_eq!(w, vec![0]);
        word_insert(&mut w, 0);
        assert_eq!(w, vec![1, 0]);
        word_insert(&mut w, 0);
        assert_eq!(w, vec![2, 1, 0]);
        let mut w = vec![3, 1];
        word_insert(&mut w, 2);
        assert_eq!(w, vec![4, 2, 1]);
    }

    #[test]
    fn word_push_face_cases() {
        // d_1 s_1 = id and d_2 s_1 = id.
        assert_eq!(word_push_face(&[1], 1), (vec![], None));
        assert_eq!(word_push_face(&[1], 2), (vec![], None));
        // d_0 s_1 = s_0 d_0.
        assert_eq!(word_push_face(&[1], 0), (vec![0], Some(0)));
        // d_3 s_1 = s_1 d_2.
        assert_eq!(word_push_face(&[1], 3), (vec![1], Some(2)));
        // Through a longer word: d_2 s_3 s_1 = s_2 d_2 s_1 = s_2 (cancel).
        assert_eq!(word_push_face(&[3, 1], 2), (vec![2], None));
    }

    #[test]
    fn ref_validity() {
        let v = GenId { dim: 0, idx: 0 };
        assert!(SimplexRef { base: v, word: vec![1, 0] }.word_is_valid());
        assert!(!SimplexRef { base: v, word: vec![0, 1] }.word_is_valid());
        assert!(!SimplexRef { base: v, word: vec![2, 0] }.word_is_valid());
        assert!(SimplexRef { base: GenId { dim: 1, idx: 0 }, word: vec![1] }.word_is_valid());
    }

    #[test]
    fn simplex_enumeration_matches_count() {
        let p = standard_simplex(2, 4);
        for n in 0..=4 {
            let listed = p.simplices(n);
            assert_eq!(listed.len(), p.simplex_count(n), "dim {}", n);
            // Canonical order is strict.
            for w in listed.windows(2) {
                assert!(w[0] < w[1]);
            }
        }
        // Unique vertex of the 0-simplex has one double degeneracy in dim 2.
        let pt = standard_simplex(0, 3);
        assert_eq!(pt.simplices(2).len(), 1);
        assert_eq!(pt.simplices(2)[0].word, vec![1, 0]);
        // The 1-simplex has three 1-simplices: two degenerate, one not.
        let e = standard_simplex(1, 3);
        assert_eq!(e.simplices(1).len(), 3);
    }

    #[test]
    fn identities_hold_on_standard_simplices() {
        for n in 0..=3 {
            let p = standard_simplex(n, n + 1);
            p.validate().unwrap();
            check_simplicial_identities(&p, n + 1).unwrap();
        }
    }

    #[test]
    fn validate_rejects_bad_face_identity() {
        // A fake 2-generator whose faces do not satisfy d_0 d_2 = d_1 d_0.
        let mut p = Presentation::new(2);
        let a = p.add_vertex("a");
        let b = p.add_vertex("b");
        let c = p.add_vertex("c");
        let ab = p
            .add_generator("ab", vec![SimplexRef::generator(b), SimplexRef::generator(a)])
            .unwrap();
        let cc = p
            .add_generator("cc", vec![SimplexRef::generator(c), SimplexRef::generator(c)])
            .unwrap();
        let bad = p
            .add_generator(
                "t",
                vec![
                    SimplexRef::generator(cc),
                    SimplexRef::generator(ab),
                    SimplexRef::generator(ab),
                ],
            )
            .unwrap();
        assert!(matches!(
            p.validate(),
            Err(PresentationError::FaceIdentity { gen, .. }) if gen == bad
        ));
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 3), 1);
        assert_eq!(binomial(2, 3), 0);
    }
}
