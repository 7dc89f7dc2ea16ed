//! Binary relations on a finite set and the Ehresmann monoids they form:
//! `B(X)`, the partial transformations `PT(X)`, their duals `PT^c(X)`, and the
//! symmetric inverse monoid `I(X)`.
//!
//! Points of `X` are `0..ground_size`. A relation is a bit matrix packed one
//! `u64` per row, so `ground_size` is at most 64.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::semigroup::OpTableSemigroup;

pub const MAX_GROUND: usize = 64;

/// Default cap on the size of a generated subalgebra.
pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryRelation {
    ground: usize,
    rows: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub in_pt: bool,
    pub in_ptc: bool,
    pub in_i: bool,
}

impl BinaryRelation {
    pub fn empty(ground: usize) -> Self {
        assert!(ground <= MAX_GROUND, "ground set too large");
        BinaryRelation {
            ground,
            rows: vec![0; ground],
        }
    }

    pub fn identity(ground: usize) -> Self {
        let mut r = Self::empty(ground);
        for x in 0..ground {
            r.rows[x] = 1 << x;
        }
        r
    }

    pub fn from_pairs(ground: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if ground == 0 || ground > MAX_GROUND {
            return Err(Error::Input(format!("ground size {ground} not in 1..={MAX_GROUND}")));
        }
        let mut r = Self::empty(ground);
        for &(x, y) in pairs {
            check_index("relation point", x, ground)?;
            check_index("relation point", y, ground)?;
            r.rows[x] |= 1 << y;
        }
        Ok(r)
    }

    /// The partial map sending `x` to `map[x]` where defined.
    pub fn from_partial_map(map: &[Option<usize>]) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = map
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
            .collect();
        Self::from_pairs(map.len(), &pairs)
    }

    /// Relation with row `x` given by bitmask `rows[x]`.
    pub fn from_rows(ground: usize, rows: Vec<u64>) -> Result<Self> {
        if rows.len() != ground || ground > MAX_GROUND {
            return Err(Error::Input("row count must equal ground size".into()));
        }
        let mask = if ground == 64 { u64::MAX } else { (1u64 << ground) - 1 };
        if rows.iter().any(|r| r & !mask != 0) {
            return Err(Error::Input("row bit outside ground set".into()));
        }
        Ok(BinaryRelation { ground, rows })
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x] >> y & 1 == 1
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.ground {
            for y in 0..self.ground {
                if self.contains(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn is_subset(&self, other: &BinaryRelation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    /// `(x, z)` is related iff `x a y` and `y b z` for some `y`.
    pub fn compose(&self, other: &BinaryRelation) -> Result<BinaryRelation> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch {
                left: self.ground,
                right: other.ground,
            });
        }
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &BinaryRelation) -> BinaryRelation {
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                let mut acc = 0u64;
                let mut bits = row;
                while bits != 0 {
                    let y = bits.trailing_zeros() as usize;
                    acc |= other.rows[y];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        BinaryRelation {
            ground: self.ground,
            rows,
        }
    }

    /// Domain projection: `{(x, x) : x relates to something}`.
    pub fn dom(&self) -> BinaryRelation {
        let mut r = Self::empty(self.ground);
        for x in 0..self.ground {
            if self.rows[x] != 0 {
                r.rows[x] = 1 << x;
            }
        }
        r
    }

    /// Range projection: `{(y, y) : something relates to y}`.
    pub fn ran(&self) -> BinaryRelation {
        let image = self.rows.iter().fold(0u64, |a, &r| a | r);
        let mut r = Self::empty(self.ground);
        for y in 0..self.ground {
            if image >> y & 1 == 1 {
                r.rows[y] = 1 << y;
            }
        }
        r
    }

    pub fn dom_ran(&self) -> (BinaryRelation, BinaryRelation) {
        (self.dom(), self.ran())
    }

    pub fn converse(&self) -> BinaryRelation {
        let mut r = Self::empty(self.ground);
        for (x, y) in self.pairs() {
            r.rows[y] |= 1 << x;
        }
        r
    }

    pub fn is_projection(&self) -> bool {
        self.is_subset(&Self::identity(self.ground))
    }

    pub fn classify(&self) -> Classification {
        let in_pt = self.rows.iter().all(|r| r.count_ones() <= 1);
        let in_ptc = self.converse().rows.iter().all(|r| r.count_ones() <= 1);
        Classification {
            in_pt,
            in_ptc,
            in_i: in_pt && in_ptc,
        }
    }

    /// The natural partial order of `B(X)`: `self = e other f` for some
    /// projections `e`, `f`. Decided by trying every pair of subsets of the
    /// identity, so only practical for small ground sets.
    pub fn natural_le(&self, other: &BinaryRelation) -> bool {
        assert!(self.ground <= 16, "natural_le enumerates all projection pairs");
        let projections: Vec<BinaryRelation> = (0u64..1 << self.ground)
            .map(|mask| {
                let mut e = Self::empty(self.ground);
                for x in 0..self.ground {
                    if mask >> x & 1 == 1 {
                        e.rows[x] = 1 << x;
                    }
                }
                e
            })
            .collect();
        projections.iter().any(|e| {
            let eb = e.compose_unchecked(other);
            projections.iter().any(|f| eb.compose_unchecked(f) == *self)
        })
    }
}

impl fmt::Debug for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.pairs().iter().map(|(x, y)| format!("({x},{y})")).collect();
        write!(f, "{{{}}}", inner.join(","))
    }
}

/// A finite `(., +, *)`-subalgebra of `B(X)` with its operation tables.
#[derive(Debug, Clone)]
pub struct RelationAlgebra {
    ground: usize,
    elements: Vec<BinaryRelation>,
    index: HashMap<BinaryRelation, usize>,
    table: OpTableSemigroup,
}

impl RelationAlgebra {
    /// Least set containing `generators` closed under composition, domain and
    /// range. Elements appear in discovery order, generators first.
    pub fn generate(ground: usize, generators: &[BinaryRelation], cap: usize) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Input("at least one generator is required".into()));
        }
        if ground == 0 || ground > MAX_GROUND {
            return Err(Error::Input(format!("ground size {ground} not in 1..={MAX_GROUND}")));
        }
        let mut elements: Vec<BinaryRelation> = Vec::new();
        let mut index: HashMap<BinaryRelation, usize> = HashMap::new();
        let mut add = |r: BinaryRelation, elements: &mut Vec<BinaryRelation>| -> Result<()> {
            if !index.contains_key(&r) {
                if elements.len() >= cap {
                    return Err(Error::ClosureOverflow { cap });
                }
                index.insert(r.clone(), elements.len());
                elements.push(r);
            }
            Ok(())
        };
        for g in generators {
            if g.ground != ground {
                return Err(Error::GroundMismatch {
                    left: ground,
                    right: g.ground,
                });
            }
            add(g.clone(), &mut elements)?;
        }
        let mut done = 0;
        while done < elements.len() {
            let x = elements[done].clone();
            add(x.dom(), &mut elements)?;
            add(x.ran(), &mut elements)?;
            let mut j = 0;
            while j <= done {
                let y = elements[j].clone();
                add(x.compose_unchecked(&y), &mut elements)?;
                add(y.compose_unchecked(&x), &mut elements)?;
                j += 1;
            }
            done += 1;
        }
        let index: HashMap<BinaryRelation, usize> =
            elements.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let n = elements.len();
        let mult = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&a.compose_unchecked(b)]).collect())
            .collect();
        let plus = elements.iter().map(|a| index[&a.dom()]).collect();
        let star = elements.iter().map(|a| index[&a.ran()]).collect();
        let names = elements.iter().map(|r| r.to_string()).collect();
        let table = OpTableSemigroup::new(names, mult, plus, star)?;
        debug_assert_eq!(table.len(), n);
        Ok(RelationAlgebra {
            ground,
            elements,
            index,
            table,
        })
    }

    /// Builds the algebra whose elements are exactly `all`, which must already
    /// be closed.
    fn from_closed(ground: usize, all: Vec<BinaryRelation>) -> Self {
        Self::generate(ground, &all, all.len()).expect("enumerated monoid is closed")
    }

    /// All `2^(n^2)` relations on an `n`-element set.
    pub fn full_b(n: usize) -> Result<Self> {
        check_small(n, 4)?;
        let all = (0u64..1 << (n * n))
            .map(|bits| {
                let rows = (0..n).map(|x| bits >> (x * n) & ((1 << n) - 1)).collect();
                BinaryRelation { ground: n, rows }
            })
            .collect();
        Ok(Self::from_closed(n, all))
    }

    /// All `(n+1)^n` partial maps.
    pub fn full_pt(n: usize) -> Result<Self> {
        check_small(n, 6)?;
        Ok(Self::from_closed(n, partial_maps(n, false)))
    }

    /// Converses of partial maps.
    pub fn full_ptc(n: usize) -> Result<Self> {
        check_small(n, 6)?;
        let all = partial_maps(n, false).iter().map(|r| r.converse()).collect();
        Ok(Self::from_closed(n, all))
    }

    /// All partial bijections.
    pub fn full_i(n: usize) -> Result<Self> {
        check_small(n, 6)?;
        Ok(Self::from_closed(n, partial_maps(n, true)))
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn elements(&self) -> &[BinaryRelation] {
        &self.elements
    }

    pub fn index_of(&self, r: &BinaryRelation) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn relation(&self, i: usize) -> &BinaryRelation {
        &self.elements[i]
    }

    pub fn semigroup(&self) -> &OpTableSemigroup {
        &self.table
    }

    pub fn into_semigroup(self) -> OpTableSemigroup {
        self.table
    }
}

fn check_small(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        Err(Error::Input(format!("ground size {n} not in 1..={max}")))
    } else {
        Ok(())
    }
}

fn partial_maps(n: usize, injective: bool) -> Vec<BinaryRelation> {
    let mut out = Vec::new();
    let total = (n + 1).pow(n as u32);
    'maps: for code in 0..total {
        let mut c = code;
        let mut map = Vec::with_capacity(n);
        let mut used = 0u64;
        for _ in 0..n {
            let v = c % (n + 1);
            c /= n + 1;
            if v == n {
                map.push(None);
            } else {
                if injective && used >> v & 1 == 1 {
                    continue 'maps;
                }
                used |= 1 << v;
                map.push(Some(v));
            }
        }
        out.push(BinaryRelation::from_partial_map(&map).expect("points in range"));
    }
    out
}
