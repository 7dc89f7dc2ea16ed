use serde::{Deserialize, Serialize};

use super::OpTableSemigroup;

/// A square boolean matrix indexed by element pairs.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoolTable {
    n: usize,
    bits: Vec<bool>,
}

impl std::fmt::Debug for BoolTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BoolTable({}x{}, {} set)", self.n, self.n, self.count())
    }
}

impl BoolTable {
    pub fn new(n: usize) -> Self {
        BoolTable {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let bits = (0..n * n).map(|i| f(i / n, i % n)).collect();
        BoolTable { n, bits }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize) {
        self.bits[a * self.n + b] = true;
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Number of related pairs.
    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Relational composition: `a (self ; other) b` iff some `c` has
    /// `a self c` and `c other b`.
    pub fn compose(&self, other: &BoolTable) -> BoolTable {
        let n = self.n;
        BoolTable::from_fn(n, |a, b| (0..n).any(|c| self.get(a, c) && other.get(c, b)))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|a| self.get(a, a))
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| a == b || !(self.get(a, b) && self.get(b, a))))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| {
            (0..n).all(|b| !self.get(a, b) || (0..n).all(|c| !self.get(b, c) || self.get(a, c)))
        })
    }

    pub fn is_partial_order(&self) -> bool {
        self.is_reflexive() && self.is_antisymmetric() && self.is_transitive()
    }
}

/// The natural left, right and two-sided partial orders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRelations {
    pub le_l: BoolTable,
    pub le_r: BoolTable,
    pub le: BoolTable,
}

impl OpTableSemigroup {
    /// `a <=_l b` iff `a = a+ b`; `a <=_r b` iff `a = b a*`; `a <= b` iff
    /// `a = e b f` for projections `e`, `f`.
    ///
    /// The two-sided order is computed from its definition over all projection
    /// pairs, independently of the one-sided orders.
    pub fn natural_orders(&self) -> OrderRelations {
        let n = self.len();
        let le_l = BoolTable::from_fn(n, |a, b| a == self.mul(self.plus(a), b));
        let le_r = BoolTable::from_fn(n, |a, b| a == self.mul(b, self.star(a)));
        let mut projections: Vec<usize> = self.elements().map(|x| self.plus(x)).collect();
        projections.sort_unstable();
        projections.dedup();
        let mut le = BoolTable::new(n);
        for b in 0..n {
            for &e in &projections {
                let eb = self.mul(e, b);
                for &f in &projections {
                    le.set(self.mul(eb, f), b);
                }
            }
        }
        OrderRelations { le_l, le_r, le }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::two_chain;
    use super::*;

    #[test]
    fn orders_on_chain() {
        let s = two_chain();
        let o = s.natural_orders();
        assert!(o.le.get(1, 0));
        assert!(!o.le.get(0, 1));
        assert!(o.le_l.is_partial_order() && o.le_r.is_partial_order() && o.le.is_partial_order());
        assert_eq!(o.le_l.compose(&o.le_r), o.le);
    }

    #[test]
    fn compose_is_relational() {
        let a = BoolTable::from_fn(3, |x, y| y == (x + 1) % 3);
        let aa = a.compose(&a);
        assert!(aa.get(0, 2) && aa.get(2, 1) && !aa.get(0, 1));
    }
}
