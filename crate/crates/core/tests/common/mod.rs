//! Brute-force oracles that only read multiplication and unary tables.
#![allow(dead_code)]

use ehresmann::OpTableSemigroup;

pub fn projections(s: &OpTableSemigroup) -> Vec<usize> {
    let mut p: Vec<usize> = s.elements().map(|x| s.plus(x)).collect();
    p.sort_unstable();
    p.dedup();
    p
}

/// Calls `f` on every set partition of `0..n`, as restricted growth strings.
pub fn for_each_partition(n: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(i: usize, max: usize, cur: &mut Vec<usize>, n: usize, f: &mut impl FnMut(&[usize])) {
        if i == n {
            f(cur);
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            rec(i + 1, max.max(b), cur, n, f);
            cur.pop();
        }
    }
    if n == 0 {
        f(&[]);
        return;
    }
    let mut cur = vec![0];
    rec(1, 0, &mut cur, n, f);
}

/// The least semigroup congruence collapsing the projections: the
/// intersection of every partition that is such a congruence. Returns block
/// labels.
pub fn brute_sigma(s: &OpTableSemigroup) -> Vec<usize> {
    let n = s.len();
    let p = projections(s);
    let mut together = vec![vec![true; n]; n];
    for_each_partition(n, &mut |part| {
        if p.iter().any(|&e| part[e] != part[p[0]]) {
            return;
        }
        for a in 0..n {
            for b in a + 1..n {
                if part[a] == part[b] {
                    for c in 0..n {
                        if part[s.mul(a, c)] != part[s.mul(b, c)] || part[s.mul(c, a)] != part[s.mul(c, b)] {
                            return;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if part[a] != part[b] {
                    together[a][b] = false;
                }
            }
        }
    });
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    for a in 0..n {
        if labels[a] == usize::MAX {
            for b in a..n {
                if together[a][b] {
                    labels[b] = next;
                }
            }
            next += 1;
        }
    }
    labels
}

/// Same block structure.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

/// `a <= b` iff `a = e b f` for projections `e`, `f`.
pub fn natural_le(s: &OpTableSemigroup, a: usize, b: usize) -> bool {
    let p = projections(s);
    p.iter().any(|&e| p.iter().any(|&f| s.mul(s.mul(e, b), f) == a))
}

pub fn associative(s: &OpTableSemigroup) -> bool {
    s.elements()
        .all(|a| s.elements().all(|b| s.elements().all(|c| s.mul(s.mul(a, b), c) == s.mul(a, s.mul(b, c)))))
}

/// Composition of pair lists, left to right.
pub fn compose(a: &[(usize, usize)], b: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = a
        .iter()
        .flat_map(|&(x, y)| b.iter().filter(move |&&(y2, _)| y2 == y).map(move |&(_, z)| (x, z)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}
