//! Labelled directed graphs over a semilattice with restriction and
//! corestriction, their axiom checks, and paths up to the congruence `~`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{check_index, Error, Result};
use crate::report::{Outcome, Report, Witness};
use crate::semigroup::{BoolTable, OpTableSemigroup};
use crate::semilattice::Semilattice;

/// An edge label: an element index of a finite monoid, or a word over the
/// alphabet of a free monoid (the empty word is `1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Elem(usize),
    Word(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelMonoid {
    Finite {
        names: Vec<String>,
        mult: Vec<Vec<usize>>,
        identity: usize,
    },
    Free {
        alphabet: Vec<String>,
    },
}

impl LabelMonoid {
    pub fn finite(names: Vec<String>, mult: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = mult.len();
        if n == 0 {
            return Err(Error::Input("label monoid is empty".into()));
        }
        let names = if names.is_empty() {
            (0..n).map(|i| i.to_string()).collect()
        } else {
            names
        };
        if names.len() != n || mult.iter().any(|row| row.len() != n) {
            return Err(Error::Input("label monoid table is not square".into()));
        }
        for row in &mult {
            for &v in row {
                check_index("label monoid entry", v, n)?;
            }
        }
        check_index("label monoid identity", identity, n)?;
        for a in 0..n {
            if mult[identity][a] != a || mult[a][identity] != a {
                return Err(Error::Input(format!("{identity} is not a two-sided identity (fails at {a})")));
            }
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(Error::Input(format!("label monoid not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(LabelMonoid::Finite { names, mult, identity })
    }

    pub fn free(alphabet: Vec<String>) -> Self {
        LabelMonoid::Free { alphabet }
    }

    /// A reduced Ehresmann semigroup viewed as a monoid; its single projection
    /// is the identity.
    pub fn from_reduced(s: &OpTableSemigroup) -> Result<Self> {
        let p = s.projections()?;
        if p.len() != 1 {
            return Err(Error::Input(format!("expected one projection, found {}", p.len())));
        }
        Self::finite(s.names().to_vec(), s.mult_rows(), p.members()[0])
    }

    pub fn is_free(&self) -> bool {
        matches!(self, LabelMonoid::Free { .. })
    }

    /// Number of elements, or `None` for a free monoid.
    pub fn size(&self) -> Option<usize> {
        match self {
            LabelMonoid::Finite { mult, .. } => Some(mult.len()),
            LabelMonoid::Free { .. } => None,
        }
    }

    pub fn one(&self) -> Label {
        match self {
            LabelMonoid::Finite { identity, .. } => Label::Elem(*identity),
            LabelMonoid::Free { .. } => Label::Word(Vec::new()),
        }
    }

    pub fn is_one(&self, l: &Label) -> bool {
        *l == self.one()
    }

    pub fn mul(&self, a: &Label, b: &Label) -> Label {
        match (self, a, b) {
            (LabelMonoid::Finite { mult, .. }, Label::Elem(x), Label::Elem(y)) => Label::Elem(mult[*x][*y]),
            (LabelMonoid::Free { .. }, Label::Word(x), Label::Word(y)) => {
                let mut w = x.clone();
                w.extend_from_slice(y);
                Label::Word(w)
            }
            _ => panic!("label kind does not match the monoid"),
        }
    }

    pub fn product<'a>(&self, labels: impl IntoIterator<Item = &'a Label>) -> Label {
        labels.into_iter().fold(self.one(), |acc, l| self.mul(&acc, l))
    }

    pub fn validate(&self, l: &Label) -> Result<()> {
        match (self, l) {
            (LabelMonoid::Finite { mult, .. }, Label::Elem(x)) => check_index("label", *x, mult.len()),
            (LabelMonoid::Free { alphabet }, Label::Word(w)) => {
                for &x in w {
                    check_index("letter", x, alphabet.len())?;
                }
                Ok(())
            }
            _ => Err(Error::Input("label kind does not match the monoid".into())),
        }
    }

    pub fn display(&self, l: &Label) -> String {
        match (self, l) {
            (LabelMonoid::Finite { names, .. }, Label::Elem(x)) => names[*x].clone(),
            (LabelMonoid::Free { alphabet }, Label::Word(w)) => {
                if w.is_empty() {
                    "1".into()
                } else {
                    w.iter().map(|&x| alphabet[x].as_str()).collect::<Vec<_>>().join("")
                }
            }
            (_, l) => format!("{l:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub d: usize,
    pub l: Label,
    pub r: usize,
}

impl Edge {
    pub fn new(d: usize, l: Label, r: usize) -> Self {
        Edge { d, l, r }
    }
}

/// A non-empty path, as a sequence of edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GPath {
    edges: Vec<usize>,
}

impl GPath {
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Search limits for `equivalent_paths`.
#[derive(Debug, Clone, Copy)]
pub struct PathBudget {
    pub max_nodes: usize,
    pub max_len: usize,
}

impl Default for PathBudget {
    fn default() -> Self {
        PathBudget {
            max_nodes: 20_000,
            max_len: 6,
        }
    }
}

/// Caps on exhaustive enumeration inside the axiom checks.
const MAX_CHAINS: usize = 2_000_000;
const MAX_PATHS: usize = 200_000;
const MAX_WORDS: usize = 100_000;

#[derive(Debug, Clone)]
pub struct ResGraph {
    sl: Semilattice,
    mon: LabelMonoid,
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
    restrict: Vec<Vec<Option<usize>>>,
    corestrict: Vec<Vec<Option<usize>>>,
}

impl ResGraph {
    /// A graph with the given edges and no restrictions or corestrictions yet.
    pub fn new(sl: Semilattice, mon: LabelMonoid, edges: Vec<Edge>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            check_index("edge source", e.d, sl.len())?;
            check_index("edge target", e.r, sl.len())?;
            mon.validate(&e.l)?;
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate edge {}", i)));
            }
        }
        let v = sl.len();
        let m = edges.len();
        Ok(ResGraph {
            sl,
            mon,
            edges,
            index,
            restrict: vec![vec![None; v]; m],
            corestrict: vec![vec![None; v]; m],
        })
    }

    /// Builds a graph and fills both tables from functions giving the target
    /// triple for each admissible `(edge, vertex)` pair.
    pub fn with_maps(
        sl: Semilattice,
        mon: LabelMonoid,
        edges: Vec<Edge>,
        restrict: impl Fn(&Edge, usize) -> Edge,
        corestrict: impl Fn(&Edge, usize) -> Edge,
    ) -> Result<Self> {
        let mut g = Self::new(sl, mon, edges)?;
        for c in 0..g.edges.len() {
            let e = g.edges[c].clone();
            for v in 0..g.sl.len() {
                if g.sl.leq(v, e.d) {
                    let to = restrict(&e, v);
                    let to = g.index_of(&to, "restriction")?;
                    g.restrict[c][v] = Some(to);
                }
                if g.sl.leq(v, e.r) {
                    let to = corestrict(&e, v);
                    let to = g.index_of(&to, "corestriction")?;
                    g.corestrict[c][v] = Some(to);
                }
            }
        }
        Ok(g)
    }

    fn index_of(&self, e: &Edge, what: &str) -> Result<usize> {
        self.index.get(e).copied().ok_or_else(|| {
            Error::Restriction(format!(
                "{what} target {} is not an edge",
                self.edge_string_raw(e)
            ))
        })
    }

    pub fn set_restrict(&mut self, edge: usize, g: usize, to: usize) -> Result<()> {
        check_index("edge", edge, self.edges.len())?;
        check_index("vertex", g, self.sl.len())?;
        check_index("edge", to, self.edges.len())?;
        self.restrict[edge][g] = Some(to);
        Ok(())
    }

    pub fn set_corestrict(&mut self, edge: usize, h: usize, to: usize) -> Result<()> {
        check_index("edge", edge, self.edges.len())?;
        check_index("vertex", h, self.sl.len())?;
        check_index("edge", to, self.edges.len())?;
        self.corestrict[edge][h] = Some(to);
        Ok(())
    }

    pub fn semilattice(&self) -> &Semilattice {
        &self.sl
    }

    pub fn monoid(&self) -> &LabelMonoid {
        &self.mon
    }

    pub fn num_vertices(&self) -> usize {
        self.sl.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, c: usize) -> &Edge {
        &self.edges[c]
    }

    pub fn find_edge(&self, d: usize, l: &Label, r: usize) -> Option<usize> {
        self.index.get(&Edge::new(d, l.clone(), r)).copied()
    }

    pub fn loop_edge(&self, e: usize) -> Option<usize> {
        self.find_edge(e, &self.mon.one(), e)
    }

    pub fn restrict(&self, c: usize, g: usize) -> Option<usize> {
        self.restrict[c][g]
    }

    pub fn corestrict(&self, c: usize, h: usize) -> Option<usize> {
        self.corestrict[c][h]
    }

    /// Defined restriction entries as `(edge, g, to)`, in index order.
    pub fn restrict_entries(&self) -> Vec<(usize, usize, usize)> {
        table_entries(&self.restrict)
    }

    pub fn corestrict_entries(&self) -> Vec<(usize, usize, usize)> {
        table_entries(&self.corestrict)
    }

    fn edge_string_raw(&self, e: &Edge) -> String {
        format!("({},{},{})", self.sl.name(e.d), self.mon.display(&e.l), self.sl.name(e.r))
    }

    pub fn edge_string(&self, c: usize) -> String {
        self.edge_string_raw(&self.edges[c])
    }

    /// Whether `(x,t,y)` and `(y,s,z)` always give an edge `(x,ts,z)`.
    pub fn pm_violation(&self) -> Option<Witness> {
        let out = self.out_edges();
        for (c, e) in self.edges.iter().enumerate() {
            for &c2 in &out[e.r] {
                let e2 = &self.edges[c2];
                if self.find_edge(e.d, &self.mon.mul(&e.l, &e2.l), e2.r).is_none() {
                    return Some(Witness::new(
                        vec![c, c2],
                        format!(
                            "composite of {} and {} is not an edge",
                            self.edge_string(c),
                            self.edge_string(c2)
                        ),
                    ));
                }
            }
        }
        None
    }

    pub fn is_partial_multiaction(&self) -> bool {
        self.pm_violation().is_none()
    }

    /// Free labels that are letters or `1`, with the `1`-edges exactly the
    /// loops `(e,1,e)`.
    pub fn is_letter_graph(&self) -> bool {
        if !self.mon.is_free() {
            return false;
        }
        self.edges.iter().all(|e| match &e.l {
            Label::Word(w) if w.is_empty() => e.d == e.r,
            Label::Word(w) => w.len() == 1,
            Label::Elem(_) => false,
        }) && (0..self.num_vertices()).all(|v| self.loop_edge(v).is_some())
    }

    /// Edges leaving each vertex.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.sl.len()];
        for (c, e) in self.edges.iter().enumerate() {
            out[e.d].push(c);
        }
        out
    }

    // ---- axioms ----

    pub fn check_axioms(&self, max_chain: usize) -> Report {
        let mut rep = Report::new("graph axioms");
        rep.push("loops (e,1,e)", self.check_loops());
        rep.push("restriction defined exactly below d", self.check_domain(true));
        rep.push("corestriction defined exactly below r", self.check_domain(false));
        rep.push("R1", self.check_r1(true));
        rep.push("R2", self.check_r2(true));
        rep.push("R3", self.check_r3(true));
        rep.push("R4", self.check_r4(max_chain, true));
        rep.push("R5", self.check_r5(true));
        rep.push("CR1", self.check_r1(false));
        rep.push("CR2", self.check_r2(false));
        rep.push("CR3", self.check_r3(false));
        rep.push("CR4", self.check_r4(max_chain, false));
        rep.push("CR5", self.check_r5(false));
        rep.push("C", self.check_c());
        rep.push("path labels", self.check_path_labels(max_chain));
        rep
    }

    fn check_loops(&self) -> Outcome {
        for v in 0..self.sl.len() {
            if self.loop_edge(v).is_none() {
                return Outcome::fail(vec![v], format!("no loop (e,1,e) at {}", self.sl.name(v)));
            }
        }
        Outcome::Pass
    }

    fn table(&self, left: bool) -> &Vec<Vec<Option<usize>>> {
        if left {
            &self.restrict
        } else {
            &self.corestrict
        }
    }

    /// The vertex a (co)restriction is taken along: `d` for restriction.
    fn anchor(&self, c: usize, left: bool) -> usize {
        if left {
            self.edges[c].d
        } else {
            self.edges[c].r
        }
    }

    fn far(&self, c: usize, left: bool) -> usize {
        if left {
            self.edges[c].r
        } else {
            self.edges[c].d
        }
    }

    fn check_domain(&self, left: bool) -> Outcome {
        let table = self.table(left);
        for c in 0..self.edges.len() {
            let a = self.anchor(c, left);
            for g in 0..self.sl.len() {
                if self.sl.leq(g, a) != table[c][g].is_some() {
                    let what = if table[c][g].is_some() {
                        "defined although not below"
                    } else {
                        "undefined although below"
                    };
                    return Outcome::fail(vec![c, g], format!("{} at vertex {}: {what}", self.edge_string(c), self.sl.name(g)));
                }
            }
        }
        Outcome::Pass
    }

    fn lookup(&self, c: usize, g: usize, left: bool) -> std::result::Result<usize, Witness> {
        self.table(left)[c][g].ok_or_else(|| {
            Witness::new(
                vec![c, g],
                format!(
                    "{} of {} to {} undefined",
                    if left { "restriction" } else { "corestriction" },
                    self.edge_string(c),
                    self.sl.name(g)
                ),
            )
        })
    }

    fn check_r1(&self, left: bool) -> Outcome {
        let run = || -> std::result::Result<(), Witness> {
            for c in 0..self.edges.len() {
                for g in self.sl.below(self.anchor(c, left)) {
                    let to = self.lookup(c, g, left)?;
                    let ok = self.anchor(to, left) == g
                        && self.edges[to].l == self.edges[c].l
                        && self.sl.leq(self.far(to, left), self.far(c, left));
                    if !ok {
                        return Err(Witness::new(
                            vec![c, g],
                            format!("{} to {} gave {}", self.edge_string(c), self.sl.name(g), self.edge_string(to)),
                        ));
                    }
                }
            }
            Ok(())
        };
        Outcome::from_failure(run().err())
    }

    fn check_r2(&self, left: bool) -> Outcome {
        let run = || -> std::result::Result<(), Witness> {
            for c in 0..self.edges.len() {
                let to = self.lookup(c, self.anchor(c, left), left)?;
                if to != c {
                    return Err(Witness::new(vec![c], format!("{} does not fix itself", self.edge_string(c))));
                }
            }
            Ok(())
        };
        Outcome::from_failure(run().err())
    }

    fn check_r3(&self, left: bool) -> Outcome {
        let run = || -> std::result::Result<(), Witness> {
            for c in 0..self.edges.len() {
                for g in self.sl.below(self.anchor(c, left)) {
                    let cg = self.lookup(c, g, left)?;
                    for h in self.sl.below(g) {
                        let direct = self.lookup(c, h, left)?;
                        if self.anchor(cg, left) != g {
                            // R1 reports this; avoid an out-of-domain lookup here.
                            continue;
                        }
                        let twice = self.lookup(cg, h, left)?;
                        if twice != direct {
                            return Err(Witness::new(
                                vec![c, g, h],
                                format!(
                                    "{} via {} then {} differs from direct",
                                    self.edge_string(c),
                                    self.sl.name(g),
                                    self.sl.name(h)
                                ),
                            ));
                        }
                    }
                }
            }
            Ok(())
        };
        Outcome::from_failure(run().err())
    }

    fn check_r5(&self, left: bool) -> Outcome {
        let run = || -> std::result::Result<(), Witness> {
            for e in 0..self.sl.len() {
                let Some(c) = self.loop_edge(e) else { continue };
                for f in self.sl.below(e) {
                    let to = self.lookup(c, f, left)?;
                    if Some(to) != self.loop_edge(f) {
                        return Err(Witness::new(
                            vec![e, f],
                            format!("loop at {} to {} gave {}", self.sl.name(e), self.sl.name(f), self.edge_string(to)),
                        ));
                    }
                }
            }
            Ok(())
        };
        Outcome::from_failure(run().err())
    }

    /// R4 (or CR4) over every chain of 2..=max_chain edges whose composite
    /// triple is an edge.
    fn check_r4(&self, max_chain: usize, left: bool) -> Outcome {
        if max_chain < 2 {
            return Outcome::Pass;
        }
        let out = self.out_edges();
        let mut chains = 0usize;
        let mut failure = None;
        let mut stack: Vec<usize> = Vec::new();
        for start in 0..self.edges.len() {
            stack.clear();
            stack.push(start);
            if let Err(stop) = self.r4_extend(&out, &mut stack, max_chain, left, &mut chains) {
                match stop {
                    R4Stop::Fail(w) => failure = Some(w),
                    R4Stop::Budget => {
                        return Outcome::inconclusive(format!("more than {MAX_CHAINS} chains"));
                    }
                }
                break;
            }
        }
        Outcome::from_failure(failure)
    }

    fn r4_extend(
        &self,
        out: &[Vec<usize>],
        stack: &mut Vec<usize>,
        max_chain: usize,
        left: bool,
        chains: &mut usize,
    ) -> std::result::Result<(), R4Stop> {
        if stack.len() >= 2 {
            *chains += 1;
            if *chains > MAX_CHAINS {
                return Err(R4Stop::Budget);
            }
            self.r4_chain(stack, left).map_err(R4Stop::Fail)?;
        }
        if stack.len() == max_chain {
            return Ok(());
        }
        let last = *stack.last().expect("nonempty");
        for &next in &out[self.edges[last].r] {
            stack.push(next);
            self.r4_extend(out, stack, max_chain, left, chains)?;
            stack.pop();
        }
        Ok(())
    }

    fn r4_chain(&self, chain: &[usize], left: bool) -> std::result::Result<(), Witness> {
        let first = &self.edges[chain[0]];
        let last = &self.edges[*chain.last().expect("nonempty")];
        let label = self.mon.product(chain.iter().map(|&c| &self.edges[c].l));
        let Some(whole) = self.find_edge(first.d, &label, last.r) else {
            return Ok(());
        };
        let path = GPath { edges: chain.to_vec() };
        let anchor = if left { first.d } else { last.r };
        for v in self.sl.below(anchor) {
            let folded = if left {
                self.restrict_path(&path, v)
            } else {
                self.corestrict_path(&path, v)
            };
            let folded = folded.map_err(|e| Witness::new(chain.to_vec(), e.to_string()))?;
            let expect_d = self.path_d(&folded);
            let expect_r = self.path_r(&folded);
            let got = self.lookup(whole, v, left)?;
            if self.edges[got].d != expect_d || self.edges[got].r != expect_r || self.edges[got].l != label {
                let mut idx = chain.to_vec();
                idx.push(v);
                return Err(Witness::new(
                    idx,
                    format!(
                        "composite {} at {} gave {}, chain fold ends at ({},{})",
                        self.edge_string(whole),
                        self.sl.name(v),
                        self.edge_string(got),
                        self.sl.name(expect_d),
                        self.sl.name(expect_r)
                    ),
                ));
            }
        }
        Ok(())
    }

    fn check_c(&self) -> Outcome {
        let run = || -> std::result::Result<(), Witness> {
            for c in 0..self.edges.len() {
                let e = &self.edges[c];
                for g in self.sl.below(e.d) {
                    let gc = self.lookup(c, g, true)?;
                    for h in self.sl.below(e.r) {
                        let ch = self.lookup(c, h, false)?;
                        let m1 = self.sl.meet(self.edges[gc].r, h);
                        let m2 = self.sl.meet(self.edges[ch].d, g);
                        let left_side = self.lookup(gc, m1, false)?;
                        let right_side = self.lookup(ch, m2, true)?;
                        let expect = Edge::new(m2, e.l.clone(), m1);
                        if left_side != right_side || self.edges[left_side] != expect {
                            return Err(Witness::new(
                                vec![c, g, h],
                                format!(
                                    "{} with g={}, h={}: {} vs {}",
                                    self.edge_string(c),
                                    self.sl.name(g),
                                    self.sl.name(h),
                                    self.edge_string(left_side),
                                    self.edge_string(right_side)
                                ),
                            ));
                        }
                    }
                }
            }
            Ok(())
        };
        Outcome::from_failure(run().err())
    }

    /// Every monoid element labels some path. For free monoids only words up
    /// to length `max_len` are checked.
    fn check_path_labels(&self, max_len: usize) -> Outcome {
        match &self.mon {
            LabelMonoid::Finite { mult, .. } => {
                let n = mult.len();
                let v = self.sl.len();
                // Reachable (start, label, end) triples of paths.
                let mut seen = vec![false; v * n * v];
                let mut queue = VecDeque::new();
                for e in &self.edges {
                    let Label::Elem(t) = e.l else { unreachable!() };
                    let key = (e.d * n + t) * v + e.r;
                    if !seen[key] {
                        seen[key] = true;
                        queue.push_back((e.d, t, e.r));
                    }
                }
                let out = self.out_edges();
                while let Some((d, t, r)) = queue.pop_front() {
                    for &c in &out[r] {
                        let Label::Elem(s) = self.edges[c].l else { unreachable!() };
                        let u = mult[t][s];
                        let key = (d * n + u) * v + self.edges[c].r;
                        if !seen[key] {
                            seen[key] = true;
                            queue.push_back((d, u, self.edges[c].r));
                        }
                    }
                }
                let mut labels = vec![false; n];
                for d in 0..v {
                    for t in 0..n {
                        for r in 0..v {
                            labels[t] |= seen[(d * n + t) * v + r];
                        }
                    }
                }
                match labels.iter().position(|&b| !b) {
                    None => Outcome::Pass,
                    Some(t) => Outcome::fail(vec![t], format!("no path labelled {}", self.mon.display(&Label::Elem(t)))),
                }
            }
            LabelMonoid::Free { alphabet } => {
                let k = alphabet.len();
                let mut words: Vec<Vec<usize>> = vec![Vec::new()];
                let mut frontier = words.clone();
                for _ in 0..max_len.max(1) {
                    let mut next = Vec::new();
                    for w in &frontier {
                        for x in 0..k {
                            let mut w2 = w.clone();
                            w2.push(x);
                            next.push(w2);
                        }
                    }
                    if words.len() + next.len() > MAX_WORDS {
                        return Outcome::inconclusive(format!("more than {MAX_WORDS} words"));
                    }
                    words.extend(next.iter().cloned());
                    frontier = next;
                }
                for w in &words {
                    if !self.word_is_path_label(w) {
                        return Outcome::fail(w.clone(), format!("no path labelled {}", self.mon.display(&Label::Word(w.clone()))));
                    }
                }
                Outcome::Pass
            }
        }
    }

    fn word_is_path_label(&self, w: &[usize]) -> bool {
        let v = self.sl.len();
        if w.is_empty() {
            return self.edges.iter().any(|e| matches!(&e.l, Label::Word(x) if x.is_empty()));
        }
        // ends[k]: vertices where a path labelled w[..k] can end.
        let mut ends = vec![vec![false; v]; w.len() + 1];
        ends[0] = vec![true; v];
        for k in 1..=w.len() {
            for e in &self.edges {
                if let Label::Word(x) = &e.l {
                    if !x.is_empty() && x.len() <= k && w[k - x.len()..k] == x[..] && ends[k - x.len()][e.d] {
                        ends[k][e.r] = true;
                    }
                }
            }
        }
        ends[w.len()].iter().any(|&b| b)
    }

    // ---- paths ----

    pub fn path(&self, edges: Vec<usize>) -> Result<GPath> {
        if edges.is_empty() {
            return Err(Error::Input("paths have at least one edge".into()));
        }
        for &c in &edges {
            check_index("edge", c, self.edges.len())?;
        }
        for w in edges.windows(2) {
            if self.edges[w[0]].r != self.edges[w[1]].d {
                return Err(Error::Input(format!(
                    "edges {} and {} are not composable",
                    self.edge_string(w[0]),
                    self.edge_string(w[1])
                )));
            }
        }
        Ok(GPath { edges })
    }

    /// The path through `(e_0,t_1,e_1,...,t_n,e_n)`.
    pub fn path_from_triples(&self, vertices: &[usize], labels: &[Label]) -> Result<GPath> {
        if vertices.len() != labels.len() + 1 || labels.is_empty() {
            return Err(Error::Input("need n labels and n+1 vertices, n >= 1".into()));
        }
        let edges = labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                self.find_edge(vertices[i], l, vertices[i + 1])
                    .ok_or_else(|| Error::Input(format!("step {i} is not an edge")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GPath { edges })
    }

    pub fn path_d(&self, p: &GPath) -> usize {
        self.edges[p.edges[0]].d
    }

    pub fn path_r(&self, p: &GPath) -> usize {
        self.edges[*p.edges.last().expect("nonempty path")].r
    }

    pub fn path_label(&self, p: &GPath) -> Label {
        self.mon.product(p.edges.iter().map(|&c| &self.edges[c].l))
    }

    pub fn path_vertices(&self, p: &GPath) -> Vec<usize> {
        let mut v = vec![self.path_d(p)];
        v.extend(p.edges.iter().map(|&c| self.edges[c].r));
        v
    }

    pub fn concat(&self, p: &GPath, q: &GPath) -> Result<GPath> {
        if self.path_r(p) != self.path_d(q) {
            return Err(Error::Input("paths are not composable".into()));
        }
        let mut edges = p.edges.clone();
        edges.extend_from_slice(&q.edges);
        Ok(GPath { edges })
    }

    /// `_e|p`: restrict the first edge to `e`, each later edge to the end of
    /// the previous one.
    pub fn restrict_path(&self, p: &GPath, e: usize) -> Result<GPath> {
        if !self.sl.leq(e, self.path_d(p)) {
            return Err(Error::Precondition(format!(
                "{} is not below the start {}",
                self.sl.name(e),
                self.sl.name(self.path_d(p))
            )));
        }
        let mut v = e;
        let mut out = Vec::with_capacity(p.len());
        for &c in &p.edges {
            if !self.sl.leq(v, self.edges[c].d) {
                return Err(Error::Restriction(format!("restriction leaves the domain of {}", self.edge_string(c))));
            }
            let to = self.restrict[c][v]
                .ok_or_else(|| Error::Restriction(format!("restriction of {} to {} undefined", self.edge_string(c), self.sl.name(v))))?;
            out.push(to);
            v = self.edges[to].r;
        }
        Ok(GPath { edges: out })
    }

    /// `p|_f`: corestrict the last edge to `f`, each earlier edge to the start
    /// of the next one.
    pub fn corestrict_path(&self, p: &GPath, f: usize) -> Result<GPath> {
        if !self.sl.leq(f, self.path_r(p)) {
            return Err(Error::Precondition(format!(
                "{} is not below the end {}",
                self.sl.name(f),
                self.sl.name(self.path_r(p))
            )));
        }
        let mut v = f;
        let mut out = vec![0; p.len()];
        for (i, &c) in p.edges.iter().enumerate().rev() {
            if !self.sl.leq(v, self.edges[c].r) {
                return Err(Error::Restriction(format!("corestriction leaves the range of {}", self.edge_string(c))));
            }
            let to = self.corestrict[c][v]
                .ok_or_else(|| Error::Restriction(format!("corestriction of {} to {} undefined", self.edge_string(c), self.sl.name(v))))?;
            out[i] = to;
            v = self.edges[to].d;
        }
        Ok(GPath { edges: out })
    }

    /// Replace edges `i..=j` (1-based) by the single edge from the start of
    /// `p_i` to the end of `p_j` carrying their label product, if it exists.
    pub fn contract_step(&self, p: &GPath, i: usize, j: usize) -> Option<GPath> {
        if i < 1 || j <= i || j > p.len() {
            return None;
        }
        let block = &p.edges[i - 1..j];
        let label = self.mon.product(block.iter().map(|&c| &self.edges[c].l));
        let c = self.find_edge(self.edges[block[0]].d, &label, self.edges[block[block.len() - 1]].r)?;
        let mut edges = p.edges[..i - 1].to_vec();
        edges.push(c);
        edges.extend_from_slice(&p.edges[j..]);
        Some(GPath { edges })
    }

    /// `p` with every `1`-labelled loop removed; `None` if nothing remains.
    pub fn strip_unit_loops(&self, p: &GPath) -> Option<GPath> {
        let edges: Vec<usize> = p
            .edges
            .iter()
            .copied()
            .filter(|&c| {
                let e = &self.edges[c];
                !(e.d == e.r && self.mon.is_one(&e.l))
            })
            .collect();
        if edges.is_empty() {
            None
        } else {
            Some(GPath { edges })
        }
    }

    /// Decides `p ~ q` exactly for partial multiactions and letter graphs,
    /// and by bounded search otherwise.
    pub fn equivalent_paths(&self, p: &GPath, q: &GPath, budget: PathBudget) -> Outcome {
        if self.path_d(p) != self.path_d(q) || self.path_r(p) != self.path_r(q) {
            return Outcome::fail(Vec::new(), "endpoints differ");
        }
        if self.path_label(p) != self.path_label(q) {
            return Outcome::fail(Vec::new(), "labels differ");
        }
        if p == q || self.is_partial_multiaction() {
            return Outcome::Pass;
        }
        if self.is_letter_graph() {
            return if self.strip_unit_loops(p) == self.strip_unit_loops(q) {
                Outcome::Pass
            } else {
                Outcome::fail(Vec::new(), "different loop-free forms")
            };
        }
        self.search_equivalence(p, q, budget)
    }

    fn search_equivalence(&self, p: &GPath, q: &GPath, budget: PathBudget) -> Outcome {
        let out = self.out_edges();
        let mut seen: [HashMap<GPath, ()>; 2] = [HashMap::new(), HashMap::new()];
        let mut frontier: [Vec<GPath>; 2] = [vec![p.clone()], vec![q.clone()]];
        seen[0].insert(p.clone(), ());
        seen[1].insert(q.clone(), ());
        loop {
            let side = if frontier[0].len() <= frontier[1].len() { 0 } else { 1 };
            if frontier[side].is_empty() {
                break;
            }
            let mut next = Vec::new();
            for path in std::mem::take(&mut frontier[side]) {
                for n in self.neighbours(&path, &out, budget.max_len) {
                    if seen[1 - side].contains_key(&n) {
                        return Outcome::Pass;
                    }
                    if !seen[side].contains_key(&n) {
                        if seen[0].len() + seen[1].len() >= budget.max_nodes {
                            return Outcome::inconclusive(format!("node budget {} exhausted", budget.max_nodes));
                        }
                        seen[side].insert(n.clone(), ());
                        next.push(n);
                    }
                }
            }
            frontier[side] = next;
        }
        // Longer expansions may still connect the two paths.
        Outcome::inconclusive(format!("no connection within length {}", budget.max_len))
    }

    fn neighbours(&self, p: &GPath, out: &[Vec<usize>], max_len: usize) -> Vec<GPath> {
        let mut res = Vec::new();
        let n = p.len();
        for i in 1..=n {
            for j in i + 1..=n {
                if let Some(c) = self.contract_step(p, i, j) {
                    res.push(c);
                }
            }
        }
        for (k, &c) in p.edges.iter().enumerate() {
            let room = max_len.saturating_sub(n - 1);
            if room < 2 {
                continue;
            }
            let e = &self.edges[c];
            for expansion in self.expansions(e, room, out) {
                let mut edges = p.edges[..k].to_vec();
                edges.extend(expansion);
                edges.extend_from_slice(&p.edges[k + 1..]);
                res.push(GPath { edges });
            }
        }
        res
    }

    /// Paths of length 2..=max_len from `e.d` to `e.r` with label `e.l`.
    fn expansions(&self, e: &Edge, max_len: usize, out: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let mut res = Vec::new();
        let mut stack = Vec::new();
        self.expand_dfs(e, max_len, out, e.d, self.mon.one(), &mut stack, &mut res);
        res
    }

    #[allow(clippy::too_many_arguments)]
    fn expand_dfs(
        &self,
        target: &Edge,
        max_len: usize,
        out: &[Vec<usize>],
        at: usize,
        label: Label,
        stack: &mut Vec<usize>,
        res: &mut Vec<Vec<usize>>,
    ) {
        if stack.len() >= 2 && at == target.r && label == target.l {
            res.push(stack.clone());
        }
        if stack.len() == max_len {
            return;
        }
        for &c in &out[at] {
            let l = self.mon.mul(&label, &self.edges[c].l);
            if let (Label::Word(w), Label::Word(t)) = (&l, &target.l) {
                if w.len() > t.len() || t[..w.len()] != w[..] {
                    continue;
                }
            }
            stack.push(c);
            self.expand_dfs(target, max_len, out, self.edges[c].r, l, stack, res);
            stack.pop();
        }
    }

    /// All paths of length 1..=max_len, or `None` past the enumeration cap.
    pub fn enumerate_paths(&self, max_len: usize) -> Option<Vec<GPath>> {
        let out = self.out_edges();
        let mut all: Vec<GPath> = (0..self.edges.len()).map(|c| GPath { edges: vec![c] }).collect();
        let mut frontier = all.clone();
        for _ in 1..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for &c in &out[self.path_r(p)] {
                    let mut edges = p.edges.clone();
                    edges.push(c);
                    next.push(GPath { edges });
                }
            }
            if all.len() + next.len() > MAX_PATHS {
                return None;
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        Some(all)
    }

    /// The path forms of the axioms over all paths up to `bound` edges.
    pub fn check_path_axioms(&self, bound: usize) -> Report {
        let mut rep = Report::new("path axioms");
        let Some(paths) = self.enumerate_paths(bound) else {
            for name in ["R1a", "R2a", "R3a", "R4a", "R5a", "CR1a", "CR2a", "CR3a", "CR4a", "CR5a", "Ca"] {
                rep.push(name, Outcome::inconclusive(format!("more than {MAX_PATHS} paths")));
            }
            return rep;
        };
        let mut fails: HashMap<&'static str, Witness> = HashMap::new();
        let mut record = |name: &'static str, p: &GPath, detail: String| {
            fails.entry(name).or_insert_with(|| Witness::new(p.edges.clone(), detail));
        };
        for p in &paths {
            let (d, r) = (self.path_d(p), self.path_r(p));
            for e in self.sl.below(d) {
                let Ok(ep) = self.restrict_path(p, e) else {
                    record("R1a", p, format!("restriction to {} undefined", self.sl.name(e)));
                    continue;
                };
                if !self.sl.leq(self.path_r(&ep), r) {
                    record("R1a", p, format!("end rises when restricting to {}", self.sl.name(e)));
                }
                for g in self.sl.below(e) {
                    if self.restrict_path(&ep, g).ok() != self.restrict_path(p, g).ok() {
                        record("R3a", p, format!("via {} then {}", self.sl.name(e), self.sl.name(g)));
                    }
                }
                for k in 1..p.len() {
                    let (a, b) = (GPath { edges: p.edges[..k].to_vec() }, GPath { edges: p.edges[k..].to_vec() });
                    let split = self
                        .restrict_path(&a, e)
                        .and_then(|ea| self.restrict_path(&b, self.path_r(&ea)).and_then(|eb| self.concat(&ea, &eb)));
                    if split.ok().as_ref() != Some(&ep) {
                        record("R4a", p, format!("split at {k}, restricting to {}", self.sl.name(e)));
                    }
                }
                for f in self.sl.below(r) {
                    if let Err(detail) = self.check_ca(p, e, f) {
                        record("Ca", p, detail);
                    }
                }
            }
            if self.restrict_path(p, d).ok().as_ref() != Some(p) {
                record("R2a", p, "restriction to the start changes the path".into());
            }
            if self.corestrict_path(p, r).ok().as_ref() != Some(p) {
                record("CR2a", p, "corestriction to the end changes the path".into());
            }
            for f in self.sl.below(r) {
                let Ok(pf) = self.corestrict_path(p, f) else {
                    record("CR1a", p, format!("corestriction to {} undefined", self.sl.name(f)));
                    continue;
                };
                if !self.sl.leq(self.path_d(&pf), d) {
                    record("CR1a", p, format!("start rises when corestricting to {}", self.sl.name(f)));
                }
                for g in self.sl.below(f) {
                    if self.corestrict_path(&pf, g).ok() != self.corestrict_path(p, g).ok() {
                        record("CR3a", p, format!("via {} then {}", self.sl.name(f), self.sl.name(g)));
                    }
                }
                for k in 1..p.len() {
                    let (a, b) = (GPath { edges: p.edges[..k].to_vec() }, GPath { edges: p.edges[k..].to_vec() });
                    let split = self
                        .corestrict_path(&b, f)
                        .and_then(|bf| self.corestrict_path(&a, self.path_d(&bf)).and_then(|af| self.concat(&af, &bf)));
                    if split.ok().as_ref() != Some(&pf) {
                        record("CR4a", p, format!("split at {k}, corestricting to {}", self.sl.name(f)));
                    }
                }
            }
        }
        for e in 0..self.sl.len() {
            let Some(l) = self.loop_edge(e) else { continue };
            for n in 1..=bound {
                let p = GPath { edges: vec![l; n] };
                for g in self.sl.below(e) {
                    let expect = self.loop_edge(g).map(|lg| GPath { edges: vec![lg; n] });
                    if self.restrict_path(&p, g).ok() != expect {
                        record("R5a", &p, format!("loop power at {} to {}", self.sl.name(e), self.sl.name(g)));
                    }
                    if self.corestrict_path(&p, g).ok() != expect {
                        record("CR5a", &p, format!("loop power at {} to {}", self.sl.name(e), self.sl.name(g)));
                    }
                }
            }
        }
        for name in ["R1a", "R2a", "R3a", "R4a", "R5a", "CR1a", "CR2a", "CR3a", "CR4a", "CR5a", "Ca"] {
            rep.push(name, Outcome::from_failure(fails.remove(name)));
        }
        rep
    }

    fn check_ca(&self, p: &GPath, e: usize, f: usize) -> std::result::Result<(), String> {
        let ep = self.restrict_path(p, e).map_err(|x| x.to_string())?;
        let pf = self.corestrict_path(p, f).map_err(|x| x.to_string())?;
        let lhs = self.corestrict_path(&ep, self.sl.meet(self.path_r(&ep), f));
        let rhs = self.restrict_path(&pf, self.sl.meet(self.path_d(&pf), e));
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if a == b => Ok(()),
            _ => Err(format!("e={}, f={}", self.sl.name(e), self.sl.name(f))),
        }
    }

    // ---- orders on edges ----

    /// `u <=_l v` iff `u` is a restriction of `v`; `u <=_r v` iff `u` is a
    /// corestriction of `v`; `<=` is their composite.
    pub fn edge_orders(&self) -> (BoolTable, BoolTable, BoolTable) {
        let m = self.edges.len();
        let mut le_l = BoolTable::new(m);
        let mut le_r = BoolTable::new(m);
        for v in 0..m {
            for g in 0..self.sl.len() {
                if let Some(u) = self.restrict[v][g] {
                    le_l.set(u, v);
                }
                if let Some(u) = self.corestrict[v][g] {
                    le_r.set(u, v);
                }
            }
        }
        let le = le_l.compose(&le_r);
        (le_l, le_r, le)
    }

    pub fn check_edge_orders(&self) -> Report {
        let (le_l, le_r, le) = self.edge_orders();
        let mut rep = Report::new("edge orders");
        rep.push("<=_l partial order", bool_outcome(le_l.is_partial_order(), "not a partial order"));
        rep.push("<=_r partial order", bool_outcome(le_r.is_partial_order(), "not a partial order"));
        rep.push(
            "<=_l;<=_r = <=_r;<=_l",
            bool_outcome(le == le_r.compose(&le_l), "compositions differ"),
        );
        rep
    }

    /// Renames vertices and labels through the given maps; used for
    /// isomorphism tests.
    pub fn edge_set_under(&self, vmap: &[usize], lmap: impl Fn(&Label) -> Label) -> HashSet<Edge> {
        self.edges
            .iter()
            .map(|e| Edge::new(vmap[e.d], lmap(&e.l), vmap[e.r]))
            .collect()
    }
}

enum R4Stop {
    Fail(Witness),
    Budget,
}

fn bool_outcome(ok: bool, detail: &str) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::fail(Vec::new(), detail)
    }
}

fn table_entries(t: &[Vec<Option<usize>>]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (c, row) in t.iter().enumerate() {
        for (g, to) in row.iter().enumerate() {
            if let Some(to) = to {
                out.push((c, g, *to));
            }
        }
    }
    out
}

impl fmt::Display for ResGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} vertices, {} edges", self.num_vertices(), self.num_edges())?;
        for c in 0..self.edges.len() {
            writeln!(f, "  {c}: {}", self.edge_string(c))?;
        }
        Ok(())
    }
}
