//! Finite preordered sets and the selection of a minimal generating subset.

/// A finite set `{0 .. size}` with a preorder given as the
/// reflexive-transitive closure of supplied pairs.
#[derive(Debug, Clone)]
pub struct PreorderedSet {
    size: usize,
    rel: Vec<Vec<bool>>,
}

impl PreorderedSet {
    /// Closes the supplied pairs `(i, j)` meaning `i` precedes `j` under
    /// reflexivity and transitivity.
    pub fn new(size: usize, pairs: &[(usize, usize)]) -> PreorderedSet {
        let mut rel = vec![vec![false; size]; size];
        for i in 0..size {
            rel[i][i] = true;
        }
        for &(i, j) in pairs {
            rel[i][j] = true;
        }
        for k in 0..size {
            for i in 0..size {
                if rel[i][k] {
                    for j in 0..size {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        PreorderedSet { size, rel }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Whether `i` precedes `j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rel[i][j]
    }

    /// Equivalence classes under mutual precedence, each sorted, listed by
    /// least member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for i in 0..self.size {
            if seen[i] {
                continue;
            }
            let class: Vec<usize> =
                (0..self.size).filter(|&j| self.rel[i][j] && self.rel[j][i]).collect();
            for &j in &class {
                seen[j] = true;
            }
            out.push(class);
        }
        out
    }

    /// Whether every element is preceded by a member of `subset`.
    pub fn covers(&self, subset: &[usize]) -> bool {
        (0..self.size).all(|w| subset.iter().any(|&x| self.rel[x][w]))
    }

    /// A covering subset no proper subset of which still covers: one
    /// representative per minimal equivalence class. Within a class the
    /// least degenerate member is preferred when the class has one,
    /// otherwise the least member.
    pub fn minimal_subset(&self, degenerate: &[bool]) -> Vec<usize> {
        assert_eq!(degenerate.len(), self.size);
        let mut out = Vec::new();
        for class in self.classes() {
            let rep = class[0];
            let minimal = (0..self.size)
                .all(|j| !self.rel[j][rep] || (self.rel[rep][j] && self.rel[j][rep]));
            if !minimal {
                continue;
            }
            let pick = class
                .iter()
                .copied()
                .find(|&x| degenerate[x])
                .unwrap_or(rep);
            out.push(pick);
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Splitmix64; identical sequences on every platform.
    pub struct Rng(u64);

    impl Rng {
        pub fn new(seed: u64) -> Rng {
            Rng(seed)
        }

        pub fn next(&mut self) -> u64 {
            self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        }

        pub fn below(&mut self, n: usize) -> usize {
            (self.next() % n as u64) as usize
        }
    }

    fn brute_is_r1_minimal(a: &PreorderedSet, subset: &[usize]) -> bool {
        if !a.covers(subset) {
            return false;
        }
        // Covering is monotone, so dropping each element in turn suffices.
        (0..subset.len()).all(|k| {
            let rest: Vec<usize> =
                subset.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).collect();
            !a.covers(&rest)
        })
    }

    /// Every subset of `{0..n}` that covers and is minimal by inclusion.
    fn brute_all_minimal(a: &PreorderedSet) -> Vec<Vec<usize>> {
        let n = a.size();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if brute_is_r1_minimal(a, &subset) {
                out.push(subset);
            }
        }
        out
    }

    #[test]
    fn antichain_is_its_own_minimal_subset() {
        let a = PreorderedSet::new(4, &[]);
        assert_eq!(a.minimal_subset(&[false; 4]), vec![0, 1, 2, 3]);
    }

    #[test]
    fn class_and_tail_pick_the_least_representative() {
        // 0 and 1 are mutually related, 0 precedes 2.
        let a = PreorderedSet::new(3, &[(0, 1), (1, 0), (0, 2)]);
        assert!(a.leq(1, 2), "closure through the class");
        assert_eq!(a.minimal_subset(&[false; 3]), vec![0]);
        let brute = brute_all_minimal(&a);
        assert_eq!(brute, vec![vec![0], vec![1]]);
    }

    #[test]
    fn degenerate_member_is_preferred() {
        let a = PreorderedSet::new(3, &[(0, 1), (1, 0), (0, 2)]);
        assert_eq!(a.minimal_subset(&[false, true, false]), vec![1]);
    }

    #[test]
    fn random_preorders_match_brute_force() {
        let mut rng = Rng::new(0x5eed);
        for _ in 0..120 {
            let n = 1 + rng.below(8);
            let npairs = rng.below(2 * n);
            let pairs: Vec<(usize, usize)> =
                (0..npairs).map(|_| (rng.below(n), rng.below(n))).collect();
            let degenerate: Vec<bool> = (0..n).map(|_| rng.below(3) == 0).collect();
            let a = PreorderedSet::new(n, &pairs);
            let picked = a.minimal_subset(&degenerate);
            assert!(brute_is_r1_minimal(&a, &picked), "{pairs:?} -> {picked:?}");
            // Preference: a pick from a class with a degenerate member is
            // degenerate.
            for &x in &picked {
                let class: Vec<usize> =
                    (0..n).filter(|&j| a.leq(x, j) && a.leq(j, x)).collect();
                if class.iter().any(|&j| degenerate[j]) {
                    assert!(degenerate[x], "{pairs:?} class {class:?} picked {x}");
                }
            }
            // The canonical choice is reproducible from the classes alone.
            let expected: Vec<usize> = a
                .classes()
                .into_iter()
                .filter(|c| {
                    (0..n).all(|j| !a.leq(j, c[0]) || c.contains(&j))
                })
                .map(|c| c.iter().copied().find(|&x| degenerate[x]).unwrap_or(c[0]))
                .collect();
            let mut expected = expected;
            expected.sort_unstable();
            assert_eq!(picked, expected);
        }
    }
}
