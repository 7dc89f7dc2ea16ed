//! Finite Ehresmann semigroups given by operation tables.
//!
//! An [`OpTableSemigroup`] carries a multiplication table and the two unary
//! tables `s -> s^+` and `s -> s^*`. Elements are table indices; names are for
//! display only.

mod congruence;
mod factor;
mod order;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::report::{Outcome, Report, Witness};
use crate::semilattice::Semilattice;

pub use congruence::{Congruence, UnionFind};
pub use factor::{FactorizationBudget, ProperIdealReport};
pub use order::{BoolTable, OrderRelations};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTableSemigroup {
    names: Vec<String>,
    mult: Vec<usize>,
    plus: Vec<usize>,
    star: Vec<usize>,
}

impl fmt::Debug for OpTableSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OpTableSemigroup")
            .field("n", &self.len())
            .field("names", &self.names)
            .finish()
    }
}

/// Which ample identities [`OpTableSemigroup::verify_restriction`] checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Both,
}

impl OpTableSemigroup {
    /// Builds a table semigroup, checking shapes and index ranges only.
    /// Algebraic laws are checked separately by [`Self::verify_ehresmann`].
    pub fn new(
        names: Vec<String>,
        mult: Vec<Vec<usize>>,
        plus: Vec<usize>,
        star: Vec<usize>,
    ) -> Result<Self> {
        let n = mult.len();
        if n == 0 {
            return Err(Error::Input("semigroup must be nonempty".into()));
        }
        if plus.len() != n || star.len() != n {
            return Err(Error::Input(format!(
                "unary tables have lengths {} and {}, expected {n}",
                plus.len(),
                star.len()
            )));
        }
        let names = if names.is_empty() {
            (0..n).map(|i| i.to_string()).collect()
        } else if names.len() == n {
            names
        } else {
            return Err(Error::Input(format!(
                "{} names for {n} elements",
                names.len()
            )));
        };
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in mult.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!(
                    "row {i} of mult has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &x in row {
                check_index("mult entry", x, n)?;
                flat.push(x);
            }
        }
        for &x in plus.iter().chain(star.iter()) {
            check_index("unary table entry", x, n)?;
        }
        Ok(OpTableSemigroup {
            names,
            mult: flat,
            plus,
            star,
        })
    }

    /// Semilattice with `s^+ = s^* = s`.
    pub fn from_semilattice(sl: &Semilattice) -> Self {
        let n = sl.len();
        let mult = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| sl.meet(a, b))
            .collect();
        OpTableSemigroup {
            names: sl.names().to_vec(),
            mult,
            plus: (0..n).collect(),
            star: (0..n).collect(),
        }
    }

    /// A monoid as a reduced Ehresmann semigroup: `s^+ = s^* = 1`.
    pub fn reduced_monoid(names: Vec<String>, mult: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = mult.len();
        check_index("identity", identity, n.max(1))?;
        Self::new(names, mult, vec![identity; n], vec![identity; n])
    }

    /// The cyclic group `Z_k` as a reduced Ehresmann semigroup.
    pub fn cyclic_group(k: usize) -> Self {
        let mult = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        let names = (0..k).map(|i| format!("z{i}")).collect();
        Self::reduced_monoid(names, mult, 0).expect("cyclic group table is well formed")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.plus.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.len() + b]
    }

    #[inline]
    pub fn plus(&self, a: usize) -> usize {
        self.plus[a]
    }

    #[inline]
    pub fn star(&self, a: usize) -> usize {
        self.star[a]
    }

    /// Product of a nonempty sequence; `None` for the empty sequence.
    pub fn product(&self, seq: &[usize]) -> Option<usize> {
        let (&first, rest) = seq.split_first()?;
        Some(rest.iter().fold(first, |acc, &x| self.mul(acc, x)))
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn mult_rows(&self) -> Vec<Vec<usize>> {
        self.mult.chunks(self.len()).map(|r| r.to_vec()).collect()
    }

    pub fn plus_table(&self) -> &[usize] {
        &self.plus
    }

    pub fn star_table(&self) -> &[usize] {
        &self.star
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.len() {
            return Err(Error::Input("name count mismatch".into()));
        }
        self.names = names;
        Ok(self)
    }

    /// The semigroup with multiplication reversed and `^+`, `^*` swapped.
    /// Left and right notions trade places under this duality.
    pub fn opposite(&self) -> Self {
        let n = self.len();
        let mult = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| self.mul(b, a))
            .collect();
        OpTableSemigroup {
            names: self.names.clone(),
            mult,
            plus: self.star.clone(),
            star: self.plus.clone(),
        }
    }

    pub fn check_associativity(&self) -> Outcome {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Outcome::fail(
                            vec![a, b, c],
                            format!("(ab)c != a(bc) for a={a}, b={b}, c={c}"),
                        );
                    }
                }
            }
        }
        Outcome::Pass
    }

    fn unary_law(&self, name: &str, law: impl Fn(usize) -> bool) -> Outcome {
        match self.elements().find(|&x| !law(x)) {
            None => Outcome::Pass,
            Some(x) => Outcome::fail(vec![x], format!("{name} fails at x={}", self.name(x))),
        }
    }

    fn binary_law(&self, name: &str, law: impl Fn(usize, usize) -> bool) -> Outcome {
        for x in self.elements() {
            for y in self.elements() {
                if !law(x, y) {
                    return Outcome::fail(
                        vec![x, y],
                        format!("{name} fails at x={}, y={}", self.name(x), self.name(y)),
                    );
                }
            }
        }
        Outcome::Pass
    }

    /// Associativity plus the eight defining identities of a two-sided
    /// Ehresmann semigroup, each reported with a witness on failure.
    pub fn verify_ehresmann(&self) -> Report {
        let (m, p, s) = (|a, b| self.mul(a, b), |a| self.plus(a), |a| self.star(a));
        let mut r = Report::new("Ehresmann identities");
        r.push("associativity", self.check_associativity());
        r.push("x+ x = x", self.unary_law("x+ x = x", |x| m(p(x), x) == x));
        r.push(
            "x+ y+ = y+ x+",
            self.binary_law("x+ y+ = y+ x+", |x, y| m(p(x), p(y)) == m(p(y), p(x))),
        );
        r.push(
            "(xy)+ = (x y+)+",
            self.binary_law("(xy)+ = (x y+)+", |x, y| p(m(x, y)) == p(m(x, p(y)))),
        );
        r.push("x x* = x", self.unary_law("x x* = x", |x| m(x, s(x)) == x));
        r.push(
            "x* y* = y* x*",
            self.binary_law("x* y* = y* x*", |x, y| m(s(x), s(y)) == m(s(y), s(x))),
        );
        r.push(
            "(xy)* = (x* y)*",
            self.binary_law("(xy)* = (x* y)*", |x, y| s(m(x, y)) == s(m(s(x), y))),
        );
        r.push("(x+)* = x+", self.unary_law("(x+)* = x+", |x| s(p(x)) == p(x)));
        r.push("(x*)+ = x*", self.unary_law("(x*)+ = x*", |x| p(s(x)) == s(x)));
        r
    }

    pub fn is_ehresmann(&self) -> bool {
        self.verify_ehresmann().all_pass()
    }

    /// Left ample identity `x y+ = (xy)+ x` and/or right ample identity
    /// `x* y = y (xy)*`.
    pub fn verify_restriction(&self, side: Side) -> Report {
        let (m, p, s) = (|a, b| self.mul(a, b), |a| self.plus(a), |a| self.star(a));
        let mut r = Report::new("restriction (ample) identities");
        if matches!(side, Side::Left | Side::Both) {
            r.push(
                "left ample: x y+ = (xy)+ x",
                self.binary_law("left ample", |x, y| m(x, p(y)) == m(p(m(x, y)), x)),
            );
        }
        if matches!(side, Side::Right | Side::Both) {
            r.push(
                "right ample: x* y = y (xy)*",
                self.binary_law("right ample", |x, y| m(s(x), y) == m(y, s(m(x, y)))),
            );
        }
        r
    }

    pub fn is_left_restriction(&self) -> bool {
        self.verify_restriction(Side::Left).all_pass()
    }

    pub fn is_right_restriction(&self) -> bool {
        self.verify_restriction(Side::Right).all_pass()
    }

    /// The semilattice of projections. Fails when the images of `^+` and `^*`
    /// differ or some member is not fixed by both operations.
    pub fn projections(&self) -> Result<ProjectionSet> {
        let mut from_plus = vec![false; self.len()];
        let mut from_star = vec![false; self.len()];
        for x in self.elements() {
            from_plus[self.plus(x)] = true;
            from_star[self.star(x)] = true;
        }
        if let Some(x) = self.elements().find(|&x| from_plus[x] != from_star[x]) {
            return Err(Error::Projections(format!(
                "element {} lies in exactly one of the images of + and *",
                self.name(x)
            )));
        }
        let members: Vec<usize> = self.elements().filter(|&x| from_plus[x]).collect();
        if let Some(&e) = members
            .iter()
            .find(|&&e| self.plus(e) != e || self.star(e) != e)
        {
            return Err(Error::Projections(format!(
                "projection {} is not fixed by + and *",
                self.name(e)
            )));
        }
        ProjectionSet::new(self, members)
    }

    /// Whether some `t != s` shares `(t+, t*, [t])` with `s`, per element.
    pub fn proper_elements(&self, sigma: &Congruence) -> Vec<bool> {
        let mut seen = std::collections::HashMap::new();
        for x in self.elements() {
            *seen
                .entry((self.plus(x), self.star(x), sigma.class_of(x)))
                .or_insert(0usize) += 1;
        }
        self.elements()
            .map(|x| seen[&(self.plus(x), self.star(x), sigma.class_of(x))] == 1)
            .collect()
    }

    /// A pair of distinct elements with equal `(+, *, sigma-class)`, if any.
    pub fn improper_pair(&self, sigma: &Congruence) -> Option<(usize, usize)> {
        let mut seen = std::collections::HashMap::new();
        for x in self.elements() {
            let key = (self.plus(x), self.star(x), sigma.class_of(x));
            if let Some(&y) = seen.get(&key) {
                return Some((y, x));
            }
            seen.insert(key, x);
        }
        None
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.improper_pair(&self.sigma()).is_none()
    }

    /// Proper left restriction: a left restriction semigroup in which
    /// `a+ = b+` and `a sigma b` force `a = b`.
    pub fn proper_left_restriction(&self) -> Option<Witness> {
        self.proper_one_sided(true)
    }

    pub fn proper_right_restriction(&self) -> Option<Witness> {
        self.proper_one_sided(false)
    }

    fn proper_one_sided(&self, left: bool) -> Option<Witness> {
        let side = if left { Side::Left } else { Side::Right };
        let report = self.verify_restriction(side);
        if let Some(check) = report.first_failure() {
            return check.outcome.witness().cloned();
        }
        let sigma = self.sigma();
        let mut seen = std::collections::HashMap::new();
        for x in self.elements() {
            let end = if left { self.plus(x) } else { self.star(x) };
            if let Some(&y) = seen.get(&(end, sigma.class_of(x))) {
                return Some(Witness::new(
                    vec![y, x],
                    "distinct elements share projection and sigma-class",
                ));
            }
            seen.insert((end, sigma.class_of(x)), x);
        }
        None
    }

    /// Whether consecutive factors satisfy `s_i* = s_{i+1}+`.
    pub fn is_matching(&self, seq: &[usize]) -> bool {
        seq.windows(2).all(|w| self.star(w[0]) == self.plus(w[1]))
    }
}

/// The projections `P(S)` with their induced meet-semilattice.
///
/// Vertex `v` of [`Self::semilattice`] corresponds to element
/// `members()[v]` of the semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionSet {
    members: Vec<usize>,
    vertex_of: Vec<Option<usize>>,
    semilattice: Semilattice,
}

impl ProjectionSet {
    fn new(s: &OpTableSemigroup, members: Vec<usize>) -> Result<Self> {
        let mut vertex_of = vec![None; s.len()];
        for (v, &e) in members.iter().enumerate() {
            vertex_of[e] = Some(v);
        }
        let mut meet = Vec::with_capacity(members.len());
        for &e in &members {
            let mut row = Vec::with_capacity(members.len());
            for &f in &members {
                let ef = s.mul(e, f);
                match vertex_of[ef] {
                    Some(v) => row.push(v),
                    None => {
                        return Err(Error::Projections(format!(
                            "product of projections {} and {} is not a projection",
                            s.name(e),
                            s.name(f)
                        )))
                    }
                }
            }
            meet.push(row);
        }
        let names = members.iter().map(|&e| s.name(e).to_string()).collect();
        let semilattice = Semilattice::new(names, meet)
            .map_err(|e| Error::Projections(format!("projections do not form a semilattice: {e}")))?;
        Ok(ProjectionSet {
            members,
            vertex_of,
            semilattice,
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.vertex_of.get(x).is_some_and(|v| v.is_some())
    }

    /// Semilattice index of a projection.
    pub fn vertex(&self, x: usize) -> Option<usize> {
        self.vertex_of.get(x).copied().flatten()
    }

    /// Semigroup element of a semilattice index.
    pub fn element(&self, v: usize) -> usize {
        self.members[v]
    }

    pub fn semilattice(&self) -> &Semilattice {
        &self.semilattice
    }
}
