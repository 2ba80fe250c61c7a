//! Stock simplicial sets: standard simplices, boundaries, horns, the
//! circle, and nerves of finite categories, plus the simplicial maps
//! induced by monotone vertex assignments.

use super::levelwise::{presentation_from_levels, LevelwiseData};
use super::map::SimplicialMap;
use super::{GenId, Presentation, SimplexRef};
use crate::category::FiniteCategory;
use std::collections::BTreeMap;
use std::sync::Arc;

fn vertex_list_name(vs: &[usize], n: usize) -> String {
    if n < 10 {
        vs.iter().map(|v| v.to_string()).collect()
    } else {
        vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Order-preserving injections into `[n]` of a given arity, in
/// lexicographic order.
fn injections(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, arity: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == arity {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(n, arity, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, arity, 0, &mut cur, &mut out);
    out
}

/// Builds the subcomplex of the standard `n`-simplex spanned by the listed
/// injections, truncated at `trunc`. The list must be face-closed.
fn simplex_like(
    n: usize,
    trunc: usize,
    keep: impl Fn(&[usize]) -> bool,
) -> Presentation {
    let mut p = Presentation::new(trunc);
    let mut ids: BTreeMap<Vec<usize>, GenId> = BTreeMap::new();
    for m in 0..=trunc.min(n) {
        for vs in injections(n, m + 1) {
            if !keep(&vs) {
                continue;
            }
            let name = vertex_list_name(&vs, n);
            let gid = if m == 0 {
                p.add_vertex(name)
            } else {
                let faces = (0..=m)
                    .map(|i| {
                        let mut f = vs.clone();
                        f.remove(i);
                        SimplexRef::generator(ids[&f])
                    })
                    .collect();
                p.add_generator(name, faces).expect("faces stay inside the complex")
            };
            ids.insert(vs, gid);
        }
    }
    p
}

/// The standard `n`-simplex truncated at `trunc`: one generator per
/// order-preserving injection into `[n]`.
pub fn standard_simplex(n: usize, trunc: usize) -> Presentation {
    simplex_like(n, trunc, |_| true)
}

/// The boundary of the standard `n`-simplex: all proper faces.
pub fn boundary_simplex(n: usize, trunc: usize) -> Presentation {
    simplex_like(n, trunc, |vs| vs.len() < n + 1)
}

/// The horn obtained from the boundary by also removing the face opposite
/// vertex `k`.
pub fn horn_complex(n: usize, k: usize, trunc: usize) -> Presentation {
    assert!(k <= n);
    simplex_like(n, trunc, |vs| {
        vs.len() < n + 1 && !(vs.len() == n && !vs.contains(&k))
    })
}

/// The simplicial circle: one vertex, one edge with both faces at it.
pub fn circle(trunc: usize) -> Presentation {
    let mut p = Presentation::new(trunc);
    let v = p.add_vertex("v");
    p.add_generator("e", vec![SimplexRef::generator(v), SimplexRef::generator(v)])
        .expect("circle edge");
    p
}

fn parse_vertices(name: &str) -> Vec<usize> {
    if name.contains('.') {
        name.split('.').map(|s| s.parse().expect("vertex number")).collect()
    } else {
        name.chars().map(|c| c.to_digit(10).expect("vertex digit") as usize).collect()
    }
}

/// The simplex of a standard-simplex-style presentation picked out by a
/// monotone vertex list, possibly with repeats. Repeats turn into
/// degeneracies; the injective core must name a generator.
pub fn monotone_simplex(p: &Presentation, vertices: &[usize]) -> SimplexRef {
    assert!(!vertices.is_empty());
    if let Some(q) = (0..vertices.len() - 1).find(|&q| vertices[q] == vertices[q + 1]) {
        let mut shorter = vertices.to_vec();
        shorter.remove(q + 1);
        return p.degeneracy(&monotone_simplex(p, &shorter), q);
    }
    let plain: String = vertices.iter().map(|v| v.to_string()).collect();
    let dotted = vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".");
    let gid = p
        .generator_by_name(&plain)
        .or_else(|| p.generator_by_name(&dotted))
        .expect("vertex list names a generator");
    SimplexRef::generator(gid)
}

/// The simplicial map between standard-style complexes induced by a
/// monotone vertex assignment: the generator on vertices `v_0 .. v_m` goes
/// to the simplex on `theta[v_0] .. theta[v_m]`.
pub fn monotone_map(
    theta: &[usize],
    source: Arc<Presentation>,
    target: Arc<Presentation>,
) -> SimplicialMap {
    assert!(source.truncation() <= target.truncation());
    let assign = (0..=source.truncation())
        .map(|dim| {
            source
                .generators(dim)
                .map(|g| {
                    let vs = parse_vertices(source.generator_name(g));
                    let image: Vec<usize> = vs.iter().map(|&v| theta[v]).collect();
                    monotone_simplex(&target, &image)
                })
                .collect()
        })
        .collect();
    SimplicialMap::new(source, target, assign)
}

/// The characteristic map of a simplex: the standard simplex of its
/// dimension mapped in by sending the top cell to it.
pub fn characteristic_map(target: Arc<Presentation>, x: &SimplexRef) -> SimplicialMap {
    let n = x.dim();
    let source = Arc::new(standard_simplex(n, target.truncation()));
    let assign = (0..=source.truncation())
        .map(|d| {
            source
                .generators(d)
                .map(|g| {
                    let vs = parse_vertices(source.generator_name(g));
                    let mut r = x.clone();
                    // Delete missing vertices; top down keeps positions equal
                    // to values.
                    for v in (0..=n).rev() {
                        if !vs.contains(&v) {
                            r = target.face(&r, v);
                        }
                    }
                    r
                })
                .collect()
        })
        .collect();
    SimplicialMap::new(source, target, assign)
}

/// Vertex assignment of the face inclusion into `[n]` that misses `i`.
pub fn coface(n: usize, i: usize) -> Vec<usize> {
    (0..=n).filter(|&v| v != i).collect()
}

/// Vertex assignment of the collapse onto `[n]` that repeats `i`.
pub fn codegeneracy(n: usize, i: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..=n).collect();
    out.insert(i, i);
    out
}

/// Composable chains of morphisms in a finite category.
struct NerveLevels<'a> {
    cat: &'a FiniteCategory,
    trunc: usize,
}

/// A chain `c_0 -> c_1 -> ... -> c_n` stored as start object plus the
/// morphism indices along it.
type Chain = (usize, Vec<usize>);

impl LevelwiseData for NerveLevels<'_> {
    type Elem = Chain;

    fn truncation(&self) -> usize {
        self.trunc
    }

    fn level(&self, n: usize) -> Vec<Chain> {
        let mut out: Vec<Chain> =
            (0..self.cat.object_count()).map(|o| (o, Vec::new())).collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for (start, chain) in out {
                let tail = chain
                    .last()
                    .map(|&m| self.cat.morphism(m).dst)
                    .unwrap_or(start);
                for m in self.cat.from_object(tail) {
                    let mut c = chain.clone();
                    c.push(m);
                    next.push((start, c));
                }
            }
            out = next;
        }
        out
    }

    fn face(&self, n: usize, i: usize, e: &Chain) -> Chain {
        let (start, chain) = e;
        debug_assert_eq!(chain.len(), n);
        if i == 0 {
            let new_start = self.cat.morphism(chain[0]).dst;
            (new_start, chain[1..].to_vec())
        } else if i == n {
            (*start, chain[..n - 1].to_vec())
        } else {
            let mut c = chain.clone();
            let merged = self
                .cat
                .compose(chain[i], chain[i - 1])
                .expect("chain is composable");
            c[i - 1] = merged;
            c.remove(i);
            (*start, c)
        }
    }

    fn degeneracy(&self, _n: usize, i: usize, e: &Chain) -> Chain {
        let (start, chain) = e;
        let obj = if i == 0 {
            *start
        } else {
            self.cat.morphism(chain[i - 1]).dst
        };
        let mut c = chain.clone();
        c.insert(i, self.cat.identity(obj));
        (*start, c)
    }

    fn label(&self, _n: usize, e: &Chain) -> String {
        let (start, chain) = e;
        if chain.is_empty() {
            format!("[{}]", self.cat.object_name(*start))
        } else {
            let names: Vec<&str> =
                chain.iter().map(|&m| self.cat.morphism(m).name.as_str()).collect();
            format!("[{}]", names.join("|"))
        }
    }
}

/// The nerve of a finite category, truncated at `trunc`.
pub fn nerve(cat: &FiniteCategory, trunc: usize) -> Presentation {
    presentation_from_levels(&NerveLevels { cat, trunc })
        .expect("nerve levels satisfy the simplicial identities")
        .presentation
}

/// Nerve of the one-object category on a finite group; `mult[g][f]` is the
/// composite. Simplices in dimension n are n-tuples of elements.
pub fn group_nerve(elems: &[&str], unit: usize, mult: &[Vec<usize>], trunc: usize) -> Presentation {
    nerve(&FiniteCategory::one_object_group("o", elems, unit, mult), trunc)
}

/// Nerve of the codiscrete category on the labels: the contractible
/// complex whose n-simplices are all (n+1)-tuples of labels.
pub fn codiscrete_nerve(labels: &[&str], trunc: usize) -> Presentation {
    nerve(&FiniteCategory::codiscrete(labels), trunc)
}

/// Number of connected components of the vertex set under the edge
/// relation.
pub fn vertex_components(p: &Presentation) -> usize {
    let n = p.generator_count(0);
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut Vec<usize>, mut a: usize) -> usize {
        while root[a] != a {
            root[a] = root[root[a]];
            a = root[a];
        }
        a
    }
    if p.truncation() >= 1 {
        for e in p.generators(1) {
            let ends: Vec<usize> = p
                .generator_faces(e)
                .iter()
                .map(|f| {
                    assert!(f.word.is_empty() && f.base.dim == 0);
                    f.base.idx
                })
                .collect();
            let (a, b) = (find(&mut root, ends[0]), find(&mut root, ends[1]));
            root[a] = b;
        }
    }
    (0..n).filter(|&v| find(&mut root, v) == v).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::check_simplicial_identities;

    #[test]
    fn standard_simplex_counts() {
        let d2 = standard_simplex(2, 2);
        assert_eq!(d2.generator_counts(), vec![3, 3, 1]);
        let d3 = standard_simplex(3, 3);
        assert_eq!(d3.generator_counts(), vec![4, 6, 4, 1]);
        // Total simplex counts match the monotone maps [m] -> [2].
        assert_eq!(d2.simplex_count(0), 3);
        assert_eq!(d2.simplex_count(1), 6);
        assert_eq!(d2.simplex_count(2), 10);
    }

    #[test]
    fn component_counts_follow_the_edges() {
        assert_eq!(vertex_components(&circle(2)), 1);
        assert_eq!(vertex_components(&standard_simplex(2, 2)), 1);
        let mut two = Presentation::new(1);
        two.add_vertex("a");
        two.add_vertex("b");
        assert_eq!(vertex_components(&two), 2);
        assert_eq!(vertex_components(&boundary_simplex(2, 2)), 1);
    }

    #[test]
    fn boundary_and_horn_counts() {
        let b2 = boundary_simplex(2, 2);
        assert_eq!(b2.generator_counts(), vec![3, 3, 0]);
        for k in 0..=2 {
            let h = horn_complex(2, k, 2);
            assert_eq!(h.generator_counts(), vec![3, 2, 0], "horn {}", k);
            h.validate().unwrap();
        }
        let h31 = horn_complex(3, 1, 3);
        assert_eq!(h31.generator_counts(), vec![4, 6, 3, 0]);
    }

    #[test]
    fn circle_validates() {
        let c = circle(3);
        c.validate().unwrap();
        check_simplicial_identities(&c, 3).unwrap();
        assert_eq!(c.generator_counts(), vec![1, 1, 0, 0]);
        // Two 1-simplices total: the edge and the degenerate vertex.
        assert_eq!(c.simplex_count(1), 2);
    }

    #[test]
    fn z2_nerve_shape() {
        let n = group_nerve(&["e", "g"], 0, &[vec![0, 1], vec![1, 0]], 4);
        n.validate().unwrap();
        check_simplicial_identities(&n, 4).unwrap();
        // One non-degenerate simplex per dimension: (g, g, ..., g) fails;
        // the non-degenerate chains are exactly those avoiding the unit.
        assert_eq!(n.generator_counts(), vec![1, 1, 1, 1, 1]);
        assert_eq!(n.simplex_count(1), 2);
        // Faces of the non-degenerate 2-chain [g|g]: g, s_0 of the vertex, g.
        let gg = n.generator_by_name("[g|g]").unwrap();
        let faces = n.generator_faces(gg);
        assert_eq!(faces[0], faces[2]);
        assert!(faces[1].is_degenerate());
    }

    #[test]
    fn z3_nerve_shape() {
        let mult = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let n = group_nerve(&["e", "a", "b"], 0, &mult, 4);
        n.validate().unwrap();
        check_simplicial_identities(&n, 4).unwrap();
        // Non-degenerate n-chains avoid the unit: 2^n of them.
        assert_eq!(n.generator_counts(), vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn codiscrete_nerve_on_two_labels() {
        let e = codiscrete_nerve(&["e", "g"], 3);
        e.validate().unwrap();
        check_simplicial_identities(&e, 3).unwrap();
        // Level n has 2^{n+1} chains; the non-degenerate ones alternate, so
        // there are exactly two per dimension.
        assert_eq!(e.generator_counts(), vec![2, 2, 2, 2]);
        assert_eq!(e.simplex_count(1), 4);
        assert_eq!(e.simplex_count(2), 8);
    }

    #[test]
    fn nerve_of_arrow_is_triangle_like() {
        let n = nerve(&FiniteCategory::arrow(), 2);
        n.validate().unwrap();
        // Two vertices, one non-degenerate edge, nothing above.
        assert_eq!(n.generator_counts(), vec![2, 1, 0]);
    }

    #[test]
    fn monotone_maps_between_simplices() {
        let d1 = Arc::new(standard_simplex(1, 2));
        let d2 = Arc::new(standard_simplex(2, 2));
        // Face inclusion missing vertex 1.
        let f = monotone_map(&coface(2, 1), d1.clone(), d2.clone());
        f.validate().unwrap();
        let e01 = SimplexRef::generator(d1.generator_by_name("01").unwrap());
        let e02 = SimplexRef::generator(d2.generator_by_name("02").unwrap());
        assert_eq!(f.apply(&e01), e02);
        // Collapse repeating vertex 0 sends the top cell to a degeneracy.
        assert_eq!(codegeneracy(1, 0), vec![0, 0, 1]);
        let c = monotone_map(&codegeneracy(1, 0), d2.clone(), d1.clone());
        c.validate().unwrap();
        let top = SimplexRef::generator(d2.generator_by_name("012").unwrap());
        assert_eq!(c.apply(&top), d1.degeneracy(&e01, 0));
        // Identity assignment gives the identity map.
        let id = monotone_map(&[0, 1, 2], d2.clone(), d2.clone());
        assert_eq!(id, SimplicialMap::identity(d2));
    }
}
