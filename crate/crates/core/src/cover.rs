//! The cover graph of an Ehresmann semigroup over a generating set, its
//! canonical forms, the covering map `phi`, and a separating interpretation
//! of two free terms in `B(X)`.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::product;
use crate::relation::RelationAlgebra;
use crate::report::{Outcome, Report, Witness};
use crate::resgraph::{Edge, GPath, Label, LabelMonoid, ResGraph};
use crate::semigroup::{OpTableSemigroup, ProjectionSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Token {
    /// Index into the generator list.
    Letter(usize),
    /// Element of `P(S)`.
    Proj(usize),
}

/// A cover element: `Loop(e)` or `e_0 x_1 e_1 ... x_n e_n` with every
/// `(e_{i-1}, x_i, e_i)` an edge. Vertices are elements of `S`, letters are
/// indices into the generator list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CanonicalPath {
    Loop(usize),
    Seq { vertices: Vec<usize>, letters: Vec<usize> },
}

impl CanonicalPath {
    pub fn len(&self) -> usize {
        match self {
            CanonicalPath::Loop(_) => 0,
            CanonicalPath::Seq { letters, .. } => letters.len(),
        }
    }

    pub fn is_loop(&self) -> bool {
        matches!(self, CanonicalPath::Loop(_))
    }

    /// First and last vertex.
    pub fn ends(&self) -> (usize, usize) {
        match self {
            CanonicalPath::Loop(e) => (*e, *e),
            CanonicalPath::Seq { vertices, .. } => (vertices[0], vertices[vertices.len() - 1]),
        }
    }

    pub fn word(&self) -> &[usize] {
        match self {
            CanonicalPath::Loop(_) => &[],
            CanonicalPath::Seq { letters, .. } => letters,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoverGraph {
    s: OpTableSemigroup,
    gens: Vec<usize>,
    proj: ProjectionSet,
    graph: ResGraph,
    decomposition: Vec<Vec<Token>>,
}

/// The lexicographically first 3-element generating set, if any.
pub fn three_generators(s: &OpTableSemigroup) -> Option<Vec<usize>> {
    let n = s.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if generated(s, &[a, b, c]).iter().all(|&x| x) {
                    return Some(vec![a, b, c]);
                }
            }
        }
    }
    None
}

/// Elements reachable from `gens` under product, `+` and `*`.
pub fn generated(s: &OpTableSemigroup, gens: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; s.len()];
    let mut list = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let visit = |x: usize, seen: &mut Vec<bool>, queue: &mut VecDeque<usize>| {
        if !seen[x] {
            seen[x] = true;
            queue.push_back(x);
        }
    };
    for &g in gens {
        visit(g, &mut seen, &mut queue);
    }
    while let Some(a) = queue.pop_front() {
        list.push(a);
        visit(s.plus(a), &mut seen, &mut queue);
        visit(s.star(a), &mut seen, &mut queue);
        for i in 0..list.len() {
            let b = list[i];
            visit(s.mul(a, b), &mut seen, &mut queue);
            visit(s.mul(b, a), &mut seen, &mut queue);
        }
    }
    seen
}

pub fn build_cover_graph(s: &OpTableSemigroup, gens: &[usize]) -> Result<CoverGraph> {
    if gens.is_empty() {
        return Err(Error::NotGenerating("empty generating set".into()));
    }
    for (i, &g) in gens.iter().enumerate() {
        check_index("generator", g, s.len())?;
        if gens[..i].contains(&g) {
            return Err(Error::Input(format!("generator {} listed twice", s.name(g))));
        }
    }
    let reach = generated(s, gens);
    let missing: Vec<&str> = s.elements().filter(|&x| !reach[x]).map(|x| s.name(x)).collect();
    if !missing.is_empty() {
        return Err(Error::NotGenerating(format!("not generated: {}", missing.join(", "))));
    }
    let proj = s.projections()?;

    // Shortest products of letters and projections, by breadth-first search.
    let tokens: Vec<(Token, usize)> = gens
        .iter()
        .enumerate()
        .map(|(i, &g)| (Token::Letter(i), g))
        .chain(proj.members().iter().map(|&p| (Token::Proj(p), p)))
        .collect();
    let mut decomposition: Vec<Option<Vec<Token>>> = vec![None; s.len()];
    let mut queue = VecDeque::new();
    for &(t, x) in &tokens {
        if decomposition[x].is_none() {
            decomposition[x] = Some(vec![t]);
            queue.push_back(x);
        }
    }
    while let Some(a) = queue.pop_front() {
        for &(t, x) in &tokens {
            let b = s.mul(a, x);
            if decomposition[b].is_none() {
                let mut d = decomposition[a].clone().expect("visited");
                d.push(t);
                decomposition[b] = Some(d);
                queue.push_back(b);
            }
        }
    }
    let decomposition = decomposition
        .into_iter()
        .enumerate()
        .map(|(x, d)| d.ok_or_else(|| Error::NotGenerating(format!("{} has no decomposition", s.name(x)))))
        .collect::<Result<Vec<_>>>()?;

    let sl = proj.semilattice().clone();
    let n = sl.len();
    let mut edges: Vec<Edge> = (0..n).map(|v| Edge::new(v, Label::Word(Vec::new()), v)).collect();
    for (i, &a) in gens.iter().enumerate() {
        for e in 0..n {
            for f in 0..n {
                let x = s.mul(s.mul(proj.element(e), a), proj.element(f));
                if s.plus(x) == proj.element(e) && s.star(x) == proj.element(f) {
                    edges.push(Edge::new(e, Label::Word(vec![i]), f));
                }
            }
        }
    }
    let alphabet = gens.iter().map(|&g| s.name(g).to_string()).collect();
    let vtx = |x: usize| proj.vertex(x).expect("projection");
    let letter = |c: &Edge| match &c.l {
        Label::Word(w) => w.first().map(|&i| gens[i]),
        Label::Elem(_) => None,
    };
    let restrict = |c: &Edge, g: usize| match letter(c) {
        None => Edge::new(g, c.l.clone(), g),
        Some(a) => {
            let x = s.mul(s.mul(proj.element(g), a), proj.element(c.r));
            Edge::new(vtx(s.plus(x)), c.l.clone(), vtx(s.star(x)))
        }
    };
    let corestrict = |c: &Edge, h: usize| match letter(c) {
        None => Edge::new(h, c.l.clone(), h),
        Some(a) => {
            let x = s.mul(s.mul(proj.element(c.d), a), proj.element(h));
            Edge::new(vtx(s.plus(x)), c.l.clone(), vtx(s.star(x)))
        }
    };
    let graph = ResGraph::with_maps(sl, LabelMonoid::free(alphabet), edges, restrict, corestrict)?;
    Ok(CoverGraph {
        s: s.clone(),
        gens: gens.to_vec(),
        proj,
        graph,
        decomposition,
    })
}

impl CoverGraph {
    pub fn semigroup(&self) -> &OpTableSemigroup {
        &self.s
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn graph(&self) -> &ResGraph {
        &self.graph
    }

    pub fn projections(&self) -> &ProjectionSet {
        &self.proj
    }

    fn vtx(&self, x: usize) -> Result<usize> {
        self.proj
            .vertex(x)
            .ok_or_else(|| Error::Input(format!("{} is not a projection", self.s.name(x))))
    }

    /// The edge `(e, a, f)` as a one-letter canonical form; vertices are
    /// elements of `S`.
    pub fn edge_form(&self, c: usize) -> CanonicalPath {
        let e = self.graph.edge(c);
        let (d, r) = (self.proj.element(e.d), self.proj.element(e.r));
        match &e.l {
            Label::Word(w) if w.len() == 1 => CanonicalPath::Seq {
                vertices: vec![d, r],
                letters: w.clone(),
            },
            _ => CanonicalPath::Loop(d),
        }
    }

    /// The edge `(a+, a, a*)` for generator index `i`.
    pub fn top_edge(&self, i: usize) -> Result<usize> {
        check_index("letter", i, self.gens.len())?;
        let a = self.gens[i];
        self.graph
            .find_edge(self.vtx(self.s.plus(a))?, &Label::Word(vec![i]), self.vtx(self.s.star(a))?)
            .ok_or_else(|| Error::Input(format!("no top edge for {}", self.s.name(a))))
    }

    pub fn check_canonical(&self, u: &CanonicalPath) -> Result<()> {
        self.to_path(u).map(|_| ())
    }

    pub fn to_path(&self, u: &CanonicalPath) -> Result<GPath> {
        match u {
            CanonicalPath::Loop(e) => {
                let v = self.vtx(*e)?;
                self.graph.path(vec![self.graph.loop_edge(v).expect("loop")])
            }
            CanonicalPath::Seq { vertices, letters } => {
                if letters.is_empty() {
                    return Err(Error::Input("a sequence needs at least one letter".into()));
                }
                let vs = vertices.iter().map(|&x| self.vtx(x)).collect::<Result<Vec<_>>>()?;
                for &i in letters {
                    check_index("letter", i, self.gens.len())?;
                }
                let labels: Vec<Label> = letters.iter().map(|&i| Label::Word(vec![i])).collect();
                self.graph.path_from_triples(&vs, &labels)
            }
        }
    }

    /// Drops all `1`-labelled loops.
    pub fn canonicalize(&self, p: &GPath) -> CanonicalPath {
        match self.graph.strip_unit_loops(p) {
            None => CanonicalPath::Loop(self.proj.element(self.graph.path_d(p))),
            Some(q) => {
                let vertices = self.graph.path_vertices(&q).into_iter().map(|v| self.proj.element(v)).collect();
                let letters = q
                    .edges()
                    .iter()
                    .map(|&c| match &self.graph.edge(c).l {
                        Label::Word(w) => w[0],
                        Label::Elem(_) => unreachable!("cover labels are words"),
                    })
                    .collect();
                CanonicalPath::Seq { vertices, letters }
            }
        }
    }

    pub fn cover_mult(&self, u: &CanonicalPath, v: &CanonicalPath) -> Result<CanonicalPath> {
        let p = self.to_path(u)?;
        let q = self.to_path(v)?;
        let m = self.graph.semilattice().meet(self.graph.path_r(&p), self.graph.path_d(&q));
        let p = self.graph.corestrict_path(&p, m)?;
        let q = self.graph.restrict_path(&q, m)?;
        Ok(self.canonicalize(&self.graph.concat(&p, &q)?))
    }

    pub fn cover_plus_star(&self, u: &CanonicalPath) -> (CanonicalPath, CanonicalPath) {
        let (d, r) = u.ends();
        (CanonicalPath::Loop(d), CanonicalPath::Loop(r))
    }

    pub fn phi(&self, u: &CanonicalPath) -> usize {
        match u {
            CanonicalPath::Loop(e) => *e,
            CanonicalPath::Seq { vertices, letters } => {
                let mut x = vertices[0];
                for (i, &l) in letters.iter().enumerate() {
                    x = self.s.mul(self.s.mul(x, self.gens[l]), vertices[i + 1]);
                }
                x
            }
        }
    }

    /// A canonical form mapping to `s` under `phi`.
    pub fn canonical_preimage(&self, s: usize) -> Result<CanonicalPath> {
        check_index("element", s, self.s.len())?;
        let sg = &self.s;
        if self.proj.contains(s) {
            return Ok(CanonicalPath::Loop(s));
        }
        // s = p_0 x_1 p_1 ... x_n p_n with every gap filled.
        let mut letters = Vec::new();
        let mut gaps: Vec<Option<usize>> = vec![None];
        for &t in &self.decomposition[s] {
            match t {
                Token::Letter(i) => {
                    letters.push(i);
                    gaps.push(None);
                }
                Token::Proj(p) => {
                    let slot = gaps.last_mut().expect("nonempty");
                    *slot = Some(slot.map_or(p, |q| sg.mul(q, p)));
                }
            }
        }
        if letters.is_empty() {
            return Err(Error::Input(format!("{} decomposes into projections only", sg.name(s))));
        }
        let xs: Vec<usize> = letters.iter().map(|&i| self.gens[i]).collect();
        let n = xs.len();
        let gaps: Vec<usize> = (0..=n)
            .map(|k| match gaps[k] {
                Some(p) => p,
                None if k == 0 => sg.plus(xs[0]),
                None if k == n => sg.star(xs[n - 1]),
                None => sg.mul(sg.star(xs[k - 1]), sg.plus(xs[k])),
            })
            .collect();
        let factors: Vec<usize> = (0..n).map(|i| sg.mul(sg.mul(gaps[i], xs[i]), gaps[i + 1])).collect();
        let matched = sg.matchify(&factors)?;
        let mut vertices = vec![sg.plus(matched[0])];
        vertices.extend(matched.iter().map(|&m| sg.star(m)));
        let u = CanonicalPath::Seq { vertices, letters };
        self.check_canonical(&u)
            .map_err(|e| Error::Input(format!("preimage of {} is not a path: {e}", sg.name(s))))?;
        if self.phi(&u) != s {
            return Err(Error::Input(format!("preimage of {} maps elsewhere", sg.name(s))));
        }
        Ok(u)
    }

    /// All canonical forms with at most `max_len` letters, loops first, then
    /// by length.
    pub fn enumerate_canonical(&self, max_len: usize) -> Vec<CanonicalPath> {
        let mut out: Vec<CanonicalPath> = self.proj.members().iter().map(|&e| CanonicalPath::Loop(e)).collect();
        let letter_edges: Vec<Vec<usize>> = {
            let mut v = vec![Vec::new(); self.graph.num_vertices()];
            for (c, e) in self.graph.edges().iter().enumerate() {
                if !self.graph.monoid().is_one(&e.l) {
                    v[e.d].push(c);
                }
            }
            v
        };
        let mut layer: Vec<Vec<usize>> = letter_edges.iter().flatten().map(|&c| vec![c]).collect();
        for _ in 0..max_len {
            for p in &layer {
                out.push(self.canonicalize(&self.graph.path(p.clone()).expect("path")));
            }
            let mut next = Vec::new();
            for p in &layer {
                let end = self.graph.edge(*p.last().expect("nonempty")).r;
                for &c in &letter_edges[end] {
                    let mut q = p.clone();
                    q.push(c);
                    next.push(q);
                }
            }
            layer = next;
        }
        out
    }

    /// Associativity and the Ehresmann identities on canonical forms with
    /// at most `max_len` letters.
    pub fn check_cover_algebra(&self, max_len: usize) -> Report {
        let mut rep = Report::new("cover algebra");
        let forms = self.enumerate_canonical(max_len);
        let mul = |a: &CanonicalPath, b: &CanonicalPath| self.cover_mult(a, b).expect("canonical");
        let plus = |a: &CanonicalPath| self.cover_plus_star(a).0;
        let star = |a: &CanonicalPath| self.cover_plus_star(a).1;
        let assoc = forms.par_iter().enumerate().find_map_first(|(i, a)| {
            for (j, b) in forms.iter().enumerate() {
                let ab = mul(a, b);
                for (k, c) in forms.iter().enumerate() {
                    if mul(&ab, c) != mul(a, &mul(b, c)) {
                        return Some(Witness::new(vec![i, j, k], "(ab)c != a(bc)"));
                    }
                }
            }
            None
        });
        rep.push("associativity", Outcome::from_failure(assoc));
        let pairs = forms.par_iter().enumerate().find_map_first(|(i, x)| {
            if mul(&plus(x), x) != *x || mul(x, &star(x)) != *x {
                return Some(Witness::new(vec![i], "x+ x = x or x x* = x fails"));
            }
            if star(&plus(x)) != plus(x) || plus(&star(x)) != star(x) {
                return Some(Witness::new(vec![i], "projections not fixed"));
            }
            for (j, y) in forms.iter().enumerate() {
                let xy = mul(x, y);
                if mul(&plus(x), &plus(y)) != mul(&plus(y), &plus(x)) || mul(&star(x), &star(y)) != mul(&star(y), &star(x)) {
                    return Some(Witness::new(vec![i, j], "projections do not commute"));
                }
                if plus(&xy) != plus(&mul(x, &plus(y))) || star(&xy) != star(&mul(&star(x), y)) {
                    return Some(Witness::new(vec![i, j], "congruence identity fails"));
                }
            }
            None
        });
        rep.push("Ehresmann identities", Outcome::from_failure(pairs));
        rep
    }

    /// Checks `phi` is a surjective projection-separating morphism from a
    /// proper semigroup, on canonical forms with at most `len_bound` letters.
    pub fn verify(&self, len_bound: usize) -> Report {
        let mut rep = Report::new("cover");
        let s = &self.s;
        let forms = self.enumerate_canonical(len_bound);
        rep.note(format!("{} canonical forms with at most {} letters", forms.len(), len_bound));
        let images: Vec<usize> = forms.iter().map(|u| self.phi(u)).collect();

        let morphism = forms.par_iter().enumerate().find_map_first(|(i, u)| {
            let (up, us) = self.cover_plus_star(u);
            if self.phi(&up) != s.plus(images[i]) || self.phi(&us) != s.star(images[i]) {
                return Some(Witness::new(vec![i], format!("phi does not preserve +/* at {u:?}")));
            }
            for (j, v) in forms.iter().enumerate() {
                let uv = self.cover_mult(u, v).expect("canonical");
                if self.phi(&uv) != s.mul(images[i], images[j]) {
                    return Some(Witness::new(vec![i, j], format!("phi({u:?} {v:?}) != phi(u) phi(v)")));
                }
            }
            None
        });
        rep.push("(i) phi is a (2,1,1)-morphism", Outcome::from_failure(morphism));

        let mut seen = vec![false; s.len()];
        let mut separating = Outcome::Pass;
        for &e in self.proj.members() {
            let x = self.phi(&CanonicalPath::Loop(e));
            if seen[x] || x != e {
                separating = Outcome::fail(vec![e], "phi identifies projections");
                break;
            }
            seen[x] = true;
        }
        rep.push("(ii) phi is projection separating", separating);

        let mut surjective = Outcome::Pass;
        for x in s.elements() {
            if let Err(e) = self.canonical_preimage(x) {
                surjective = Outcome::fail(vec![x], e.to_string());
                break;
            }
        }
        rep.push("(iii) phi is surjective", surjective);

        rep.push(
            "(iv) properness criterion",
            product::check_properness_criterion(&self.graph).unwrap_or_else(|e| Outcome::fail(Vec::new(), e.to_string())),
        );
        let (_, _, le) = self.graph.edge_orders();
        let mut below_top = Outcome::Pass;
        for (c, e) in self.graph.edges().iter().enumerate() {
            if let Label::Word(w) = &e.l {
                if let Some(&i) = w.first() {
                    let top = self.top_edge(i).expect("top edge");
                    if !le.get(c, top) {
                        below_top = Outcome::fail(vec![c, top], format!("{} is not below {}", self.graph.edge_string(c), self.graph.edge_string(top)));
                        break;
                    }
                }
            }
        }
        rep.push("(iv) every edge lies below its top edge", below_top);

        // sigma is word equality: the word map is a morphism to the free
        // monoid that kills projections, and every form is sigma-related to
        // the product of the top edges along its word.
        let words = forms.par_iter().enumerate().find_map_first(|(i, u)| {
            for (j, v) in forms.iter().enumerate() {
                let uv = self.cover_mult(u, v).expect("canonical");
                let mut w = u.word().to_vec();
                w.extend_from_slice(v.word());
                if uv.word() != w.as_slice() {
                    return Some(Witness::new(vec![i, j], "word of a product is not the concatenation"));
                }
            }
            None
        });
        rep.push("(v) words are multiplicative", Outcome::from_failure(words));
        let mut edges_to_top = Outcome::Pass;
        for c in 0..self.graph.num_edges() {
            let form = self.edge_form(c);
            if let CanonicalPath::Seq { vertices, letters } = &form {
                let top = self.edge_form(self.top_edge(letters[0]).expect("top edge"));
                let sandwich = self
                    .cover_mult(&self.cover_mult(&CanonicalPath::Loop(vertices[0]), &top).expect("canonical"), &CanonicalPath::Loop(vertices[1]))
                    .expect("canonical");
                if sandwich != form {
                    edges_to_top = Outcome::fail(vec![c], "edge is not its top edge cut by projections");
                    break;
                }
            }
        }
        rep.push("(v) edges are projection multiples of top edges", edges_to_top);
        let mut factor = Outcome::Pass;
        for (i, u) in forms.iter().enumerate() {
            if let CanonicalPath::Seq { vertices, letters } = u {
                let mut acc = CanonicalPath::Seq {
                    vertices: vertices[..2].to_vec(),
                    letters: vec![letters[0]],
                };
                for k in 1..letters.len() {
                    let step = CanonicalPath::Seq {
                        vertices: vertices[k..k + 2].to_vec(),
                        letters: vec![letters[k]],
                    };
                    acc = self.cover_mult(&acc, &step).expect("canonical");
                }
                if acc != *u {
                    factor = Outcome::fail(vec![i], "form is not the product of its edges");
                    break;
                }
            }
        }
        rep.push("(v) forms are products of their edges", factor);

        let mut collide = None;
        let mut by_triple = std::collections::HashMap::new();
        for (i, u) in forms.iter().enumerate() {
            let (d, r) = u.ends();
            if let Some(j) = by_triple.insert((d, r, u.word().to_vec()), i) {
                collide = Some((j, i));
                break;
            }
        }
        match collide {
            None => rep.note("strictly proper on the enumerated forms"),
            Some((a, b)) => rep.note(format!("forms {a} and {b} share ends and word: not strictly proper")),
        }
        rep
    }

    /// JSON form: `{"loop": e}` or `{"seq": [e0, "x1", e1, ...]}`.
    pub fn to_json(&self, u: &CanonicalPath) -> serde_json::Value {
        match u {
            CanonicalPath::Loop(e) => serde_json::json!({ "loop": e }),
            CanonicalPath::Seq { vertices, letters } => {
                let mut seq = vec![serde_json::json!(vertices[0])];
                for (i, &l) in letters.iter().enumerate() {
                    seq.push(serde_json::json!(self.s.name(self.gens[l])));
                    seq.push(serde_json::json!(vertices[i + 1]));
                }
                serde_json::json!({ "seq": seq })
            }
        }
    }

    pub fn from_json(&self, v: &serde_json::Value) -> Result<CanonicalPath> {
        let bad = || Error::Input(format!("not a canonical form: {v}"));
        let index = |x: &serde_json::Value| x.as_u64().map(|n| n as usize).ok_or_else(bad);
        let u = if let Some(e) = v.get("loop") {
            CanonicalPath::Loop(index(e)?)
        } else {
            let seq = v.get("seq").and_then(|s| s.as_array()).ok_or_else(bad)?;
            if seq.len() < 3 || seq.len() % 2 == 0 {
                return Err(bad());
            }
            let mut vertices = Vec::new();
            let mut letters = Vec::new();
            for (k, x) in seq.iter().enumerate() {
                if k % 2 == 0 {
                    vertices.push(index(x)?);
                } else {
                    let name = x.as_str().ok_or_else(bad)?;
                    let i = self
                        .gens
                        .iter()
                        .position(|&g| self.s.name(g) == name)
                        .ok_or_else(|| Error::Input(format!("unknown generator {name}")))?;
                    letters.push(i);
                }
            }
            CanonicalPath::Seq { vertices, letters }
        };
        self.check_canonical(&u)?;
        Ok(u)
    }

    pub fn display(&self, u: &CanonicalPath) -> String {
        match u {
            CanonicalPath::Loop(e) => format!("({},1,{})", self.s.name(*e), self.s.name(*e)),
            CanonicalPath::Seq { vertices, letters } => {
                let mut out = format!("({}", self.s.name(vertices[0]));
                for (i, &l) in letters.iter().enumerate() {
                    out.push_str(&format!(",{},{}", self.s.name(self.gens[l]), self.s.name(vertices[i + 1])));
                }
                out.push(')');
                out
            }
        }
    }
}

pub fn verify_cover(s: &OpTableSemigroup, gens: &[usize], len_bound: usize) -> Result<Report> {
    let cover = build_cover_graph(s, gens)?;
    let mut rep = Report::new("cover");
    rep.absorb("graph: ", cover.graph.check_axioms(3));
    rep.absorb("", cover.verify(len_bound));
    Ok(rep)
}

/// An interpretation of `x`, `y` in `B(n)` separating `xy+` from `(xy)+x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FesWitness {
    pub ground: usize,
    pub x: crate::BinaryRelation,
    pub y: crate::BinaryRelation,
    pub left: crate::BinaryRelation,
    pub right: crate::BinaryRelation,
}

fn separates(b: &OpTableSemigroup, x: usize, y: usize) -> bool {
    let left = b.mul(x, b.plus(y));
    let right = b.mul(b.plus(b.mul(x, y)), x);
    b.plus(left) == b.plus(right) && b.star(left) != b.star(right)
}

/// Searches `B(2)`, then `B(3)`, for `x`, `y` with `(xy+)+ = ((xy)+x)+` and
/// `(xy+)* != ((xy)+x)*`.
pub fn fes_witness_check() -> Result<(Report, Option<FesWitness>)> {
    let mut rep = Report::new("separating interpretation");
    let mut found = None;
    for n in 2..=3 {
        let alg = RelationAlgebra::full_b(n)?;
        let b = alg.semigroup();
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        if n == 2 {
            let x = crate::BinaryRelation::from_pairs(2, &[(0, 0), (0, 1)])?;
            let y = crate::BinaryRelation::from_pairs(2, &[(1, 1)])?;
            candidates.push((alg.index_of(&x).expect("in B(2)"), alg.index_of(&y).expect("in B(2)")));
        }
        let hit = candidates
            .into_iter()
            .find(|&(x, y)| separates(b, x, y))
            .or_else(|| b.elements().flat_map(|x| b.elements().map(move |y| (x, y))).find(|&(x, y)| separates(b, x, y)));
        if let Some((x, y)) = hit {
            let left = b.mul(x, b.plus(y));
            let right = b.mul(b.plus(b.mul(x, y)), x);
            found = Some(FesWitness {
                ground: n,
                x: alg.relation(x).clone(),
                y: alg.relation(y).clone(),
                left: alg.relation(left).clone(),
                right: alg.relation(right).clone(),
            });
            break;
        }
        rep.note(format!("no interpretation in B({n})"));
    }
    let Some(w) = found else {
        rep.push("witness", Outcome::inconclusive("none in B(2) or B(3); enlarge the ground set"));
        return Ok((rep, None));
    };
    rep.note(format!("x = {}, y = {} in B({})", w.x, w.y, w.ground));
    let alg = RelationAlgebra::generate(w.ground, &[w.x.clone(), w.y.clone()], crate::relation::DEFAULT_CLOSURE_CAP)?;
    let t = alg.semigroup();
    let (x, y) = (0, alg.index_of(&w.y).expect("generator"));
    let left = t.mul(x, t.plus(y));
    let right = t.mul(t.plus(t.mul(x, y)), x);
    rep.push(
        "(xy+)+ = ((xy)+x)+",
        if t.plus(left) == t.plus(right) {
            Outcome::Pass
        } else {
            Outcome::fail(vec![left, right], "plus differs")
        },
    );
    rep.push(
        "(xy+)* != ((xy)+x)*",
        if t.star(left) != t.star(right) {
            Outcome::Pass
        } else {
            Outcome::fail(vec![left, right], "star agrees")
        },
    );
    rep.push(
        "xy+ sigma (xy)+x in <x,y>",
        if t.sigma().same(left, right) {
            Outcome::Pass
        } else {
            Outcome::fail(vec![left, right], "not sigma related")
        },
    );
    Ok((rep, Some(w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilattice::Semilattice;

    fn e2() -> OpTableSemigroup {
        OpTableSemigroup::from_semilattice(&Semilattice::chain(2))
    }

    fn letter_edges(c: &CoverGraph, i: usize) -> Vec<(usize, usize)> {
        c.graph()
            .edges()
            .iter()
            .filter(|e| e.l == Label::Word(vec![i]))
            .map(|e| (e.d, e.r))
            .collect()
    }

    #[test]
    fn e2_cover_edges() {
        let c = build_cover_graph(&e2(), &[0, 1]).unwrap();
        assert_eq!(letter_edges(&c, 0), vec![(0, 0), (1, 1)]);
        assert_eq!(letter_edges(&c, 1), vec![(1, 1)]);
        assert!(c.graph().check_axioms(3).all_pass());
    }

    #[test]
    fn e2_cover_product_and_phi() {
        let c = build_cover_graph(&e2(), &[0, 1]).unwrap();
        let ee = CanonicalPath::Seq { vertices: vec![0, 0], letters: vec![0] };
        let ff = CanonicalPath::Seq { vertices: vec![1, 1], letters: vec![1] };
        let prod = c.cover_mult(&ee, &ff).unwrap();
        assert_eq!(prod, CanonicalPath::Seq { vertices: vec![1, 1, 1], letters: vec![0, 1] });
        assert_eq!(c.phi(&prod), 1);
        assert_eq!(c.cover_mult(&CanonicalPath::Loop(0), &CanonicalPath::Loop(1)).unwrap(), CanonicalPath::Loop(1));
        assert_eq!(c.cover_plus_star(&ee), (CanonicalPath::Loop(0), CanonicalPath::Loop(0)));
    }

    #[test]
    fn canonicalize_drops_unit_loops() {
        let c = build_cover_graph(&e2(), &[0, 1]).unwrap();
        let g = c.graph();
        let e_loop = g.loop_edge(0).unwrap();
        let p = g.path(vec![e_loop]).unwrap();
        assert_eq!(c.canonicalize(&p), CanonicalPath::Loop(0));
        let ee = g.find_edge(0, &Label::Word(vec![0]), 0).unwrap();
        let p = g.path(vec![e_loop, ee, e_loop]).unwrap();
        let u = c.canonicalize(&p);
        assert_eq!(u, CanonicalPath::Seq { vertices: vec![0, 0], letters: vec![0] });
        assert_eq!(c.canonicalize(&c.to_path(&u).unwrap()), u);
    }

    #[test]
    fn e2_cover_verifies() {
        let rep = verify_cover(&e2(), &[0, 1], 3).unwrap();
        assert!(rep.all_pass(), "{rep}");
        let c = build_cover_graph(&e2(), &[0, 1]).unwrap();
        assert!(c.check_cover_algebra(2).all_pass());
    }

    #[test]
    fn preimage_of_generator_is_top_edge() {
        let s = RelationAlgebra::full_pt(2).unwrap().into_semigroup();
        let gens = three_generators(&s).expect("PT(2) has a 3-element generating set");
        let c = build_cover_graph(&s, &gens).unwrap();
        for (i, &g) in gens.iter().enumerate() {
            if c.projections().contains(g) {
                continue;
            }
            let u = c.canonical_preimage(g).unwrap();
            assert_eq!(u, c.edge_form(c.top_edge(i).unwrap()));
        }
    }

    #[test]
    fn not_generating_is_an_error() {
        assert!(matches!(build_cover_graph(&e2(), &[1]), Err(Error::NotGenerating(_))));
    }

    #[test]
    fn json_round_trip() {
        let c = build_cover_graph(&e2(), &[0, 1]).unwrap();
        let u = CanonicalPath::Seq { vertices: vec![1, 1, 1], letters: vec![0, 1] };
        let v = c.to_json(&u);
        assert_eq!(v, serde_json::json!({"seq": [1, "c0", 1, "c1", 1]}));
        assert_eq!(c.from_json(&v).unwrap(), u);
    }

    #[test]
    fn fes_witness_found_in_b2() {
        let (rep, w) = fes_witness_check().unwrap();
        assert!(rep.all_pass(), "{rep}");
        let w = w.unwrap();
        assert_eq!(w.ground, 2);
        assert_eq!(w.x.pairs(), vec![(0, 0), (0, 1)]);
        assert_eq!(w.y.pairs(), vec![(1, 1)]);
    }
}
