use serde::{Deserialize, Serialize};

use super::OpTableSemigroup;
use crate::report::Witness;

/// Disjoint sets over `0..n` with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// A partition of the elements, stored as a normalized class label per
/// element: classes are numbered in order of their smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Congruence {
    class_of: Vec<usize>,
    classes: usize,
}

impl Congruence {
    /// Normalizes an arbitrary labelling into a partition.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut rename = std::collections::HashMap::new();
        let class_of: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = rename.len();
                *rename.entry(*l).or_insert(next)
            })
            .collect();
        Congruence {
            classes: rename.len(),
            class_of,
        }
    }

    pub fn identity(n: usize) -> Self {
        Congruence {
            class_of: (0..n).collect(),
            classes: n,
        }
    }

    fn from_union_find(uf: &mut UnionFind, n: usize) -> Self {
        let roots: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
        Self::from_labels(&roots)
    }

    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.class_of
    }

    pub fn num_classes(&self) -> usize {
        self.classes
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Members of each class, classes in label order, members ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.classes];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    /// Whether every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        let n = self.class_of.len();
        (0..n).all(|a| (0..n).all(|b| !self.same(a, b) || other.same(a, b)))
    }

    /// First violation of compatibility with `.`, `+`, `*`.
    pub fn compatibility_violation(&self, s: &OpTableSemigroup) -> Option<Witness> {
        let n = s.len();
        for x in 0..n {
            for y in (x + 1)..n {
                if !self.same(x, y) {
                    continue;
                }
                if !self.same(s.plus(x), s.plus(y)) || !self.same(s.star(x), s.star(y)) {
                    return Some(Witness::new(vec![x, y], "related pair with unrelated projections"));
                }
                for z in 0..n {
                    if !self.same(s.mul(x, z), s.mul(y, z)) {
                        return Some(Witness::new(vec![x, y, z], "not right compatible"));
                    }
                    if !self.same(s.mul(z, x), s.mul(z, y)) {
                        return Some(Witness::new(vec![x, y, z], "not left compatible"));
                    }
                }
            }
        }
        None
    }

    /// The quotient algebra on class representatives. Requires compatibility.
    pub fn quotient(&self, s: &OpTableSemigroup) -> OpTableSemigroup {
        let classes = self.classes();
        let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        let mult = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| self.class_of(s.mul(a, b))).collect())
            .collect();
        let plus = reps.iter().map(|&a| self.class_of(s.plus(a))).collect();
        let star = reps.iter().map(|&a| self.class_of(s.star(a))).collect();
        let names = classes
            .iter()
            .map(|c| {
                let inner: Vec<&str> = c.iter().map(|&x| s.name(x)).collect();
                format!("[{}]", inner.join(","))
            })
            .collect();
        OpTableSemigroup::new(names, mult, plus, star)
            .expect("quotient tables are in range by construction")
    }
}

impl OpTableSemigroup {
    /// Least congruence generated by `pairs`, closing only under left and
    /// right translations.
    pub fn congruence_closure(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Congruence {
        let n = self.len();
        let mut uf = UnionFind::new(n);
        let mut work: Vec<(usize, usize)> = Vec::new();
        for (a, b) in pairs {
            if uf.union(a, b) {
                work.push((a, b));
            }
        }
        while let Some((a, b)) = work.pop() {
            for z in 0..n {
                for (x, y) in [(self.mul(a, z), self.mul(b, z)), (self.mul(z, a), self.mul(z, b))] {
                    if uf.union(x, y) {
                        work.push((x, y));
                    }
                }
            }
        }
        Congruence::from_union_find(&mut uf, n)
    }

    /// The least congruence identifying all projections.
    ///
    /// Only multiplicative closure is needed: once all projections share a
    /// class, `x ~ y` gives `x+ ~ y+` and `x* ~ y*` because both sides are
    /// projections. The result is asserted compatible with `+` and `*` in
    /// debug builds.
    pub fn sigma(&self) -> Congruence {
        let mut projections: Vec<usize> = self.elements().map(|x| self.plus(x)).collect();
        projections.extend(self.elements().map(|x| self.star(x)));
        projections.sort_unstable();
        projections.dedup();
        let seed = projections.windows(2).map(|w| (w[0], w[1]));
        let sigma = self.congruence_closure(seed);
        debug_assert!(sigma.compatibility_violation(self).is_none());
        sigma
    }

    /// `S / sigma`, a reduced Ehresmann semigroup.
    pub fn sigma_quotient(&self) -> (Congruence, OpTableSemigroup) {
        let sigma = self.sigma();
        let q = sigma.quotient(self);
        (sigma, q)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::two_chain;
    use super::*;

    #[test]
    fn sigma_on_semilattice_is_universal() {
        let s = two_chain();
        assert_eq!(s.sigma().num_classes(), 1);
    }

    #[test]
    fn sigma_on_reduced_monoid_is_identity() {
        let z4 = OpTableSemigroup::cyclic_group(4);
        assert_eq!(z4.sigma(), Congruence::identity(4));
        let (_, q) = z4.sigma_quotient();
        assert_eq!(q.len(), 4);
        assert!(q.verify_ehresmann().all_pass());
    }

    #[test]
    fn from_labels_normalizes() {
        let c = Congruence::from_labels(&[7, 3, 7, 9]);
        assert_eq!(c.labels(), &[0, 1, 0, 2]);
        assert_eq!(c.classes(), vec![vec![0, 2], vec![1], vec![3]]);
        assert!(Congruence::identity(4).refines(&c));
        assert!(!c.refines(&Congruence::identity(4)));
    }

    #[test]
    fn union_find_merges() {
        let mut uf = UnionFind::new(4);
        assert!(uf.union(0, 1));
        assert!(!uf.union(1, 0));
        assert!(uf.union(2, 3));
        assert_ne!(uf.find(0), uf.find(3));
        uf.union(1, 2);
        assert_eq!(uf.find(0), uf.find(3));
    }
}
