//! Finite meet-semilattices given by their meet table.

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Semilattice {
    names: Vec<String>,
    meet: Vec<Vec<usize>>,
}

impl Semilattice {
    /// Validates that `meet` is a commutative, associative, idempotent table.
    pub fn new(names: Vec<String>, meet: Vec<Vec<usize>>) -> Result<Self> {
        let n = meet.len();
        if n == 0 {
            return Err(Error::Input("semilattice must be nonempty".into()));
        }
        if names.len() != n {
            return Err(Error::Input(format!(
                "{} names for {} semilattice elements",
                names.len(),
                n
            )));
        }
        for row in &meet {
            if row.len() != n {
                return Err(Error::Input("meet table is not square".into()));
            }
            for &x in row {
                check_index("meet table entry", x, n)?;
            }
        }
        for a in 0..n {
            if meet[a][a] != a {
                return Err(Error::Input(format!("meet is not idempotent at {a}")));
            }
            for b in 0..n {
                if meet[a][b] != meet[b][a] {
                    return Err(Error::Input(format!(
                        "meet is not commutative at ({a},{b})"
                    )));
                }
                for c in 0..n {
                    if meet[meet[a][b]][c] != meet[a][meet[b][c]] {
                        return Err(Error::Input(format!(
                            "meet is not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(Semilattice { names, meet })
    }

    /// The chain `0 > 1 > ... > k-1`: element `i` lies above `j` when `i < j`.
    pub fn chain(k: usize) -> Self {
        let meet = (0..k)
            .map(|a| (0..k).map(|b| a.max(b)).collect())
            .collect();
        let names = (0..k).map(|i| format!("c{i}")).collect();
        Semilattice { names, meet }
    }

    /// Subsets of a `k`-element set under intersection; element `i` is the
    /// subset with bitmask `i`.
    pub fn powerset(k: usize) -> Self {
        let n = 1usize << k;
        let meet = (0..n).map(|a| (0..n).map(|b| a & b).collect()).collect();
        let names = (0..n).map(|i| format!("{{{i:0k$b}}}")).collect();
        Semilattice { names, meet }
    }

    pub fn len(&self) -> usize {
        self.meet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.meet.is_empty()
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet[a][b] == a
    }

    /// All `g` with `g <= e`, in index order.
    pub fn below(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&g| self.leq(g, e))
    }

    pub fn name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn meet_table(&self) -> &[Vec<usize>] {
        &self.meet
    }

    /// Whether `set` is downward closed.
    pub fn is_order_ideal(&self, set: &[bool]) -> Option<(usize, usize)> {
        for e in 0..self.len() {
            if set[e] {
                if let Some(g) = self.below(e).find(|&g| !set[g]) {
                    return Some((g, e));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_order() {
        let c = Semilattice::chain(3);
        assert!(c.leq(2, 0));
        assert!(!c.leq(0, 2));
        assert_eq!(c.meet(0, 1), 1);
        assert_eq!(c.below(1).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn powerset_is_valid() {
        let p = Semilattice::powerset(2);
        let again = Semilattice::new(p.names().to_vec(), p.meet_table().to_vec()).unwrap();
        assert_eq!(again.len(), 4);
        assert!(again.leq(0, 3));
        assert!(!again.leq(1, 2));
    }

    #[test]
    fn rejects_non_idempotent() {
        let err = Semilattice::new(vec!["a".into(), "b".into()], vec![vec![1, 1], vec![1, 1]]);
        assert!(err.is_err());
    }

    #[test]
    fn order_ideal_witness() {
        let c = Semilattice::chain(3);
        assert_eq!(c.is_order_ideal(&[false, true, true]), None);
        assert_eq!(c.is_order_ideal(&[false, true, false]), Some((2, 1)));
    }
}
