//! Matching factorizations and bounded verification of proper generating
//! ideals.

use std::collections::{HashMap, VecDeque};

use super::OpTableSemigroup;
use crate::error::{Error, Result};
use crate::report::{Outcome, Report};

/// Limits for the factorization searches in
/// [`OpTableSemigroup::check_proper_ideal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorizationBudget {
    /// Longest factorization whose existence and equivalence is examined.
    pub max_len: usize,
    /// Extra length allowed for intermediate factorizations while searching
    /// for contract/expand chains.
    pub slack: usize,
    /// Cap on the number of factorizations enumerated in total.
    pub max_sequences: usize,
}

impl FactorizationBudget {
    pub fn new(max_len: usize) -> Self {
        FactorizationBudget {
            max_len,
            slack: 2,
            max_sequences: 400_000,
        }
    }
}

/// Per-condition outcome of a proper generating ideal check.
pub type ProperIdealReport = Report;

impl OpTableSemigroup {
    /// Rewrites `seq` into a matching factorization of the same product with
    /// every new factor below the old one in the natural order.
    ///
    /// Follows the inductive construction: the last factor `s_n` becomes
    /// `t* s_n` where `t` is the product of the earlier factors, and the
    /// already matched prefix is cut down on the right to `t* s_n+`.
    pub fn matchify(&self, seq: &[usize]) -> Result<Vec<usize>> {
        let (&first, rest) = seq
            .split_first()
            .ok_or_else(|| Error::Input("cannot matchify an empty sequence".into()))?;
        let mut out = Vec::with_capacity(seq.len());
        out.push(first);
        let mut prefix = first;
        for &s in rest {
            let t_star = self.star(prefix);
            let e = self.mul(t_star, self.plus(s));
            self.cut_right(&mut out, e);
            out.push(self.mul(t_star, s));
            prefix = self.mul(prefix, s);
        }
        Ok(out)
    }

    fn cut_right(&self, seq: &mut [usize], e: usize) {
        let Some(last) = seq.len().checked_sub(1) else {
            return;
        };
        seq[last] = self.mul(seq[last], e);
        for i in (0..last).rev() {
            seq[i] = self.mul(seq[i], self.plus(seq[i + 1]));
        }
    }

    fn cut_left(&self, e: usize, seq: &mut [usize]) {
        if seq.is_empty() {
            return;
        }
        seq[0] = self.mul(e, seq[0]);
        for i in 1..seq.len() {
            seq[i] = self.mul(self.star(seq[i - 1]), seq[i]);
        }
    }

    /// Given a matching factorization of `s` and a projection `e <= s*`,
    /// returns the matching factorization `s_1' ... s_n'` of `s e` with
    /// `s_n' = s_n e` and `s_i' = s_i (s_{i+1}')+`.
    pub fn corestrict_matching(&self, seq: &[usize], e: usize) -> Result<Vec<usize>> {
        let s = self.check_matching_with_projection(seq, e)?;
        if self.mul(e, self.star(s)) != e {
            return Err(Error::Precondition(format!(
                "{} is not below the range projection of the product",
                self.name(e)
            )));
        }
        let mut out = seq.to_vec();
        self.cut_right(&mut out, e);
        Ok(out)
    }

    /// Dual of [`Self::corestrict_matching`]: a matching factorization of `e s`
    /// for a projection `e <= s+`.
    pub fn restrict_matching(&self, e: usize, seq: &[usize]) -> Result<Vec<usize>> {
        let s = self.check_matching_with_projection(seq, e)?;
        if self.mul(e, self.plus(s)) != e {
            return Err(Error::Precondition(format!(
                "{} is not below the domain projection of the product",
                self.name(e)
            )));
        }
        let mut out = seq.to_vec();
        self.cut_left(e, &mut out);
        Ok(out)
    }

    fn check_matching_with_projection(&self, seq: &[usize], e: usize) -> Result<usize> {
        let s = self
            .product(seq)
            .ok_or_else(|| Error::Input("empty factorization".into()))?;
        if !self.is_matching(seq) {
            return Err(Error::Precondition("factorization is not matching".into()));
        }
        if self.plus(e) != e || self.star(e) != e {
            return Err(Error::Precondition(format!("{} is not a projection", self.name(e))));
        }
        Ok(s)
    }

    /// Bounded check that `ideal` is a proper generating ideal.
    ///
    /// Conditions: (1) every projection lies in the ideal; (2) it is an order
    /// ideal of the natural partial order; (3) all its members are proper;
    /// (4) every element has a matching factorization over the ideal of length
    /// at most `max_len`; (5) the factorizations of length at most `max_len`
    /// of each element are pairwise equivalent under contracting a block whose
    /// product lies in the ideal, and the reverse expansion, with
    /// intermediates of length at most `max_len + slack`.
    ///
    /// Condition (5) is only semi-decidable here: a missing connection within
    /// the bound is reported as inconclusive, never as a failure.
    pub fn check_proper_ideal(
        &self,
        ideal: &[usize],
        budget: FactorizationBudget,
    ) -> Result<ProperIdealReport> {
        if budget.max_len < 1 {
            return Err(Error::Input("max_len must be at least 1".into()));
        }
        let n = self.len();
        let mut in_y = vec![false; n];
        for &y in ideal {
            crate::error::check_index("ideal member", y, n)?;
            in_y[y] = true;
        }
        let members: Vec<usize> = (0..n).filter(|&x| in_y[x]).collect();
        let mut r = Report::new("proper generating ideal");

        let missing = self.elements().map(|x| self.plus(x)).find(|&e| !in_y[e]);
        r.push(
            "(1) projections in Y",
            match missing {
                None => Outcome::Pass,
                Some(e) => Outcome::fail(vec![e], format!("projection {} missing", self.name(e))),
            },
        );

        let le = self.natural_orders().le;
        let mut below_outside = None;
        'outer: for &y in &members {
            for a in 0..n {
                if le.get(a, y) && !in_y[a] {
                    below_outside = Some((a, y));
                    break 'outer;
                }
            }
        }
        r.push(
            "(2) order ideal",
            match below_outside {
                None => Outcome::Pass,
                Some((a, y)) => Outcome::fail(
                    vec![a, y],
                    format!("{} <= {} but is not in Y", self.name(a), self.name(y)),
                ),
            },
        );

        let sigma = self.sigma();
        let mut collision = None;
        'fibres: for &y in &members {
            for x in self.elements() {
                if x != y
                    && self.plus(x) == self.plus(y)
                    && self.star(x) == self.star(y)
                    && sigma.same(x, y)
                {
                    collision = Some((y, x));
                    break 'fibres;
                }
            }
        }
        r.push(
            "(3) members proper",
            match collision {
                None => Outcome::Pass,
                Some((a, b)) => Outcome::fail(
                    vec![a, b],
                    format!(
                        "{} and {} share (+, *, sigma-class)",
                        self.name(a),
                        self.name(b)
                    ),
                ),
            },
        );

        // Shortest matching factorization length of each element, exactly:
        // extending a matching sequence only depends on the star of its
        // product.
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &y in &members {
            if dist[y] == usize::MAX {
                dist[y] = 1;
                queue.push_back(y);
            }
        }
        while let Some(a) = queue.pop_front() {
            for &y in &members {
                if self.plus(y) == self.star(a) {
                    let ay = self.mul(a, y);
                    if dist[ay] == usize::MAX {
                        dist[ay] = dist[a] + 1;
                        queue.push_back(ay);
                    }
                }
            }
        }
        let unreachable = self.elements().find(|&s| dist[s] == usize::MAX);
        let too_long = self.elements().find(|&s| dist[s] != usize::MAX && dist[s] > budget.max_len);
        r.push(
            "(4) matching factorizations exist",
            match (unreachable, too_long) {
                (Some(s), _) => Outcome::fail(
                    vec![s],
                    format!("{} is not a product of a matching sequence over Y", self.name(s)),
                ),
                (None, Some(s)) => Outcome::inconclusive(format!(
                    "shortest factorization of {} has length {} > {}",
                    self.name(s),
                    dist[s],
                    budget.max_len
                )),
                (None, None) => Outcome::Pass,
            },
        );

        r.push("(5) factorizations equivalent", self.check_factorization_equivalence(&members, &in_y, budget));
        Ok(r)
    }

    fn check_factorization_equivalence(
        &self,
        members: &[usize],
        in_y: &[bool],
        budget: FactorizationBudget,
    ) -> Outcome {
        let cap = budget.max_len + budget.slack;
        let n = self.len();
        // All matching sequences over Y up to length cap, grouped by product.
        let mut by_product: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
        let mut layer: Vec<(Vec<usize>, usize)> = members.iter().map(|&y| (vec![y], y)).collect();
        let mut total = 0usize;
        for len in 1..=cap {
            for (seq, p) in &layer {
                by_product[*p].push(seq.clone());
            }
            total += layer.len();
            if total > budget.max_sequences {
                return Outcome::inconclusive(format!(
                    "more than {} factorizations of length <= {len}",
                    budget.max_sequences
                ));
            }
            if len == cap {
                break;
            }
            let mut next = Vec::new();
            for (seq, p) in &layer {
                for &y in members {
                    if self.plus(y) == self.star(*p) {
                        let mut s = seq.clone();
                        s.push(y);
                        next.push((s, self.mul(*p, y)));
                    }
                }
            }
            layer = next;
        }

        for s in self.elements() {
            let nodes = &by_product[s];
            let short: Vec<usize> = (0..nodes.len())
                .filter(|&i| nodes[i].len() <= budget.max_len)
                .collect();
            if short.len() <= 1 {
                continue;
            }
            let index: HashMap<&[usize], usize> =
                nodes.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
            let mut uf = super::UnionFind::new(nodes.len());
            for (i, seq) in nodes.iter().enumerate() {
                for a in 0..seq.len() {
                    let mut block = seq[a];
                    for b in (a + 1)..seq.len() {
                        block = self.mul(block, seq[b]);
                        if in_y[block] {
                            let mut contracted = seq[..a].to_vec();
                            contracted.push(block);
                            contracted.extend_from_slice(&seq[b + 1..]);
                            if let Some(&j) = index.get(contracted.as_slice()) {
                                uf.union(i, j);
                            }
                        }
                    }
                }
            }
            let root = uf.find(short[0]);
            if let Some(&other) = short.iter().find(|&&i| uf.find(i) != root) {
                return Outcome::inconclusive(format!(
                    "factorizations {:?} and {:?} of {} not connected within length {cap}",
                    nodes[short[0]],
                    nodes[other],
                    self.name(s)
                ));
            }
        }
        Outcome::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::two_chain;
    use super::*;

    #[test]
    fn matchify_projections_meet() {
        let s = two_chain();
        assert_eq!(s.matchify(&[0, 1]).unwrap(), vec![1, 1]);
        assert_eq!(s.matchify(&[1, 0]).unwrap(), vec![1, 1]);
        assert_eq!(s.matchify(&[0]).unwrap(), vec![0]);
        assert!(s.matchify(&[]).is_err());
    }

    #[test]
    fn corestrict_requires_projection_below() {
        let s = two_chain();
        assert_eq!(s.corestrict_matching(&[0, 0], 1).unwrap(), vec![1, 1]);
        assert_eq!(s.restrict_matching(1, &[0, 0]).unwrap(), vec![1, 1]);
        assert!(s.corestrict_matching(&[1], 0).is_err());
    }

    #[test]
    fn ideal_missing_projection_fails_condition_one() {
        let s = two_chain();
        let r = s.check_proper_ideal(&[0], FactorizationBudget::new(2)).unwrap();
        assert!(r.get("(1) projections in Y").unwrap().is_fail());
    }

    #[test]
    fn whole_semilattice_is_proper_ideal() {
        let s = two_chain();
        let r = s.check_proper_ideal(&[0, 1], FactorizationBudget::new(3)).unwrap();
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn max_len_zero_is_an_error() {
        let s = two_chain();
        assert!(s.check_proper_ideal(&[0, 1], FactorizationBudget::new(0)).is_err());
    }
}
