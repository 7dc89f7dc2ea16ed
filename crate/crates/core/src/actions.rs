//! Premorphisms of a finite monoid into the binary relations on a
//! semilattice, the partial multiactions they correspond to, left and right
//! determinism, and the pair form of a partial action.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::product::{self, check_bijection, check_morphism};
use crate::relation::BinaryRelation;
use crate::report::{Outcome, Report, Witness};
use crate::resgraph::{Edge, Label, LabelMonoid, ResGraph};
use crate::semigroup::OpTableSemigroup;
use crate::semilattice::Semilattice;

/// `t -> phi_t` with `id <= phi_1` and `phi_s phi_t <= phi_st`; relations
/// compose left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Premorphism {
    monoid: LabelMonoid,
    ground: Semilattice,
    phi: Vec<BinaryRelation>,
}

impl Premorphism {
    pub fn new(monoid: LabelMonoid, ground: Semilattice, phi: Vec<BinaryRelation>) -> Result<Self> {
        let size = monoid
            .size()
            .ok_or_else(|| Error::Input("premorphisms need a finite monoid".into()))?;
        if phi.len() != size {
            return Err(Error::Input(format!("{} relations for {} monoid elements", phi.len(), size)));
        }
        if let Some(r) = phi.iter().find(|r| r.ground_size() != ground.len()) {
            return Err(Error::GroundMismatch {
                left: r.ground_size(),
                right: ground.len(),
            });
        }
        let p = Premorphism { monoid, ground, phi };
        if let Some(w) = p.violation() {
            return Err(Error::Premorphism(format!("{} {:?}", w.detail, w.indices)));
        }
        Ok(p)
    }

    pub fn monoid(&self) -> &LabelMonoid {
        &self.monoid
    }

    pub fn ground(&self) -> &Semilattice {
        &self.ground
    }

    pub fn phi(&self, t: usize) -> &BinaryRelation {
        &self.phi[t]
    }

    pub fn relations(&self) -> &[BinaryRelation] {
        &self.phi
    }

    fn one(&self) -> usize {
        match self.monoid.one() {
            Label::Elem(i) => i,
            Label::Word(_) => unreachable!("finite monoid"),
        }
    }

    fn mul(&self, s: usize, t: usize) -> usize {
        match self.monoid.mul(&Label::Elem(s), &Label::Elem(t)) {
            Label::Elem(i) => i,
            Label::Word(_) => unreachable!("finite monoid"),
        }
    }

    /// First failure of nonemptiness, Prem1 or Prem2.
    pub fn violation(&self) -> Option<Witness> {
        if let Some(t) = self.phi.iter().position(|r| r.is_empty()) {
            return Some(Witness::new(vec![t], "phi_t is empty"));
        }
        let id = BinaryRelation::identity(self.ground.len());
        if !id.is_subset(&self.phi[self.one()]) {
            return Some(Witness::new(vec![self.one()], "identity not contained in phi_1"));
        }
        for s in 0..self.phi.len() {
            for t in 0..self.phi.len() {
                let st = self.phi[s].compose(&self.phi[t]).expect("same ground");
                if !st.is_subset(&self.phi[self.mul(s, t)]) {
                    return Some(Witness::new(vec![s, t], "phi_s phi_t not contained in phi_st"));
                }
            }
        }
        None
    }

    /// Every `phi_t` is a partial bijection between order ideals that
    /// preserves order both ways.
    pub fn is_partial_action(&self) -> bool {
        check_partial_action_laws(self).all_pass()
            && self.phi.iter().all(|r| r.classify().in_i)
    }
}

pub fn graph_to_premorphism(g: &ResGraph) -> Result<Premorphism> {
    if let Some(w) = g.pm_violation() {
        return Err(Error::NotMultiaction(w.detail));
    }
    let size = g
        .monoid()
        .size()
        .ok_or_else(|| Error::Input("premorphisms need a finite label monoid".into()))?;
    let n = g.num_vertices();
    let mut pairs = vec![Vec::new(); size];
    for e in g.edges() {
        if let Label::Elem(t) = e.l {
            pairs[t].push((e.d, e.r));
        }
    }
    let phi = pairs
        .iter()
        .map(|p| BinaryRelation::from_pairs(n, p))
        .collect::<Result<Vec<_>>>()?;
    Premorphism::new(g.monoid().clone(), g.semilattice().clone(), phi)
}

/// The graph with edges `(x,t,y)` for `(x,y)` in `phi_t`, ordered by `t`
/// then `(x,y)`. The restriction of `(e,t,f)` to `g` is the greatest
/// `(g,t,f')` with `f' <= f`, and dually for corestriction; entries stay
/// undefined when no greatest candidate exists.
pub fn premorphism_to_graph(p: &Premorphism) -> Result<ResGraph> {
    if let Some(w) = p.violation() {
        return Err(Error::Premorphism(w.detail));
    }
    let sl = &p.ground;
    let mut edges = Vec::new();
    for (t, r) in p.phi.iter().enumerate() {
        for (x, y) in r.pairs() {
            edges.push(Edge::new(x, Label::Elem(t), y));
        }
    }
    let mut g = ResGraph::new(sl.clone(), p.monoid.clone(), edges.clone())?;
    let greatest = |cands: Vec<usize>, key: &dyn Fn(usize) -> usize| -> Option<usize> {
        cands
            .iter()
            .copied()
            .find(|&c| cands.iter().all(|&o| sl.leq(key(o), key(c))))
    };
    for (c, e) in edges.iter().enumerate() {
        for v in sl.below(e.d) {
            let to = if v == e.d {
                Some(c)
            } else {
                let cands: Vec<usize> = (0..edges.len())
                    .filter(|&o| edges[o].l == e.l && edges[o].d == v && sl.leq(edges[o].r, e.r))
                    .collect();
                greatest(cands, &|o| edges[o].r)
            };
            if let Some(to) = to {
                g.set_restrict(c, v, to)?;
            }
        }
        for v in sl.below(e.r) {
            let to = if v == e.r {
                Some(c)
            } else {
                let cands: Vec<usize> = (0..edges.len())
                    .filter(|&o| edges[o].l == e.l && edges[o].r == v && sl.leq(edges[o].d, e.d))
                    .collect();
                greatest(cands, &|o| edges[o].d)
            };
            if let Some(to) = to {
                g.set_corestrict(c, v, to)?;
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Determinism {
    pub ld: bool,
    pub rd: bool,
}

/// LD: at most one `t`-edge out of each vertex; RD: at most one into it.
pub fn check_determinism(g: &ResGraph) -> Determinism {
    let edges = g.edges();
    let clash = |same_end: &dyn Fn(&Edge, &Edge) -> bool| {
        edges
            .iter()
            .enumerate()
            .any(|(i, a)| edges[i + 1..].iter().any(|b| a.l == b.l && same_end(a, b)))
    };
    Determinism {
        ld: !clash(&|a, b| a.d == b.d && a.r != b.r),
        rd: !clash(&|a, b| a.r == b.r && a.d != b.d),
    }
}

/// Whether sigma on the product is exactly label equality.
pub fn check_sigma_iff_label(g: &ResGraph) -> Result<Outcome> {
    let s = product::build_product(g)?;
    Ok(Outcome::from_failure(product::sigma_label_violation(g, &s.sigma())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RestrictionClass {
    pub determinism: Determinism,
    pub left: bool,
    pub right: bool,
    pub proper_left: bool,
    pub proper_right: bool,
    pub strictly_proper: bool,
    /// Determinism of the graph recovered from the product, when it is
    /// strictly proper.
    pub recovered: Option<Determinism>,
}

impl RestrictionClass {
    /// LD iff proper left restriction and RD iff proper right restriction.
    pub fn agrees(&self) -> bool {
        self.determinism.ld == self.proper_left && self.determinism.rd == self.proper_right
    }

    /// Proper left restriction iff strictly proper with an LD underlying
    /// graph, and dually.
    pub fn recovery_agrees(&self) -> bool {
        let ld = self.recovered.is_some_and(|d| d.ld);
        let rd = self.recovered.is_some_and(|d| d.rd);
        self.proper_left == (self.strictly_proper && ld) && self.proper_right == (self.strictly_proper && rd)
    }
}

pub fn classify_restriction(g: &ResGraph) -> Result<RestrictionClass> {
    let s = product::build_product(g)?;
    let strictly_proper = s.is_strictly_proper();
    let recovered = if strictly_proper {
        Some(check_determinism(&product::underlying_graph(&s, &vec![true; s.len()])?.graph))
    } else {
        None
    };
    Ok(RestrictionClass {
        determinism: check_determinism(g),
        left: s.is_left_restriction(),
        right: s.is_right_restriction(),
        proper_left: s.proper_left_restriction().is_none(),
        proper_right: s.proper_right_restriction().is_none(),
        strictly_proper,
        recovered,
    })
}

/// Order ideal domains and order preserving `phi_t` when LD; ranges and
/// `phi_t^-1` when RD.
pub fn check_partial_action_laws(p: &Premorphism) -> Report {
    let mut rep = Report::new("partial action laws");
    let sl = &p.ground;
    let classes: Vec<_> = p.phi.iter().map(|r| r.classify()).collect();
    let ld = classes.iter().all(|c| c.in_pt);
    let rd = classes.iter().all(|c| c.in_ptc);
    if !ld && !rd {
        rep.push("deterministic", Outcome::fail(Vec::new(), "neither LD nor RD"));
        return rep;
    }
    let mut sides = Vec::new();
    if ld {
        sides.push(("dom", false));
    }
    if rd {
        sides.push(("ran", true));
    }
    for (name, flip) in sides {
        let mut ideal = Outcome::Pass;
        let mut monotone = Outcome::Pass;
        'labels: for (t, r) in p.phi.iter().enumerate() {
            let r = if flip { r.converse() } else { r.clone() };
            let pairs = r.pairs();
            let image = |x: usize| pairs.iter().find(|&&(a, _)| a == x).map(|&(_, b)| b);
            for &(e, fe) in &pairs {
                for g in sl.below(e) {
                    match image(g) {
                        None => {
                            ideal = Outcome::fail(vec![t, g, e], format!("{} below {} but outside {name}(phi_{t})", sl.name(g), sl.name(e)));
                            break 'labels;
                        }
                        Some(fg) if !sl.leq(fg, fe) => {
                            monotone = Outcome::fail(vec![t, g, e], format!("phi_{t} does not preserve {} <= {}", sl.name(g), sl.name(e)));
                            break 'labels;
                        }
                        _ => {}
                    }
                }
            }
        }
        rep.push(format!("{name}(phi_t) order ideals"), ideal);
        rep.push(format!("{name}-side order preserving"), monotone);
    }
    rep
}

/// The pair form of a partial action: pairs `(e,s)` with `e` in
/// `dom(phi_s)`, ordered by `s` then `e`.
#[derive(Debug, Clone)]
pub struct PairForm {
    pub semigroup: OpTableSemigroup,
    pub pairs: Vec<(usize, usize)>,
}

pub fn build_pair_form(p: &Premorphism) -> Result<PairForm> {
    if !p.is_partial_action() {
        return Err(Error::Precondition(
            "every phi_t must be an order isomorphism between order ideals".into(),
        ));
    }
    let sl = &p.ground;
    let size = p.phi.len();
    let apply = |s: usize, e: usize| p.phi[s].pairs().into_iter().find(|&(a, _)| a == e).map(|(_, b)| b);
    let unapply = |s: usize, f: usize| p.phi[s].pairs().into_iter().find(|&(_, b)| b == f).map(|(a, _)| a);
    let mut pairs = Vec::new();
    for s in 0..size {
        for (e, _) in p.phi[s].pairs() {
            pairs.push((e, s));
        }
    }
    let index = |pair: (usize, usize)| pairs.iter().position(|&q| q == pair);
    let one = p.one();
    let m = pairs.len();
    let mut mult = vec![vec![0; m]; m];
    for (i, &(e, s)) in pairs.iter().enumerate() {
        let es = apply(s, e).expect("e in dom phi_s");
        for (j, &(f, t)) in pairs.iter().enumerate() {
            let meet = sl.meet(es, f);
            let g = unapply(s, meet).ok_or_else(|| Error::Precondition("meet outside ran(phi_s)".into()))?;
            mult[i][j] = index((g, p.mul(s, t))).ok_or_else(|| Error::Precondition("product leaves the pair set".into()))?;
        }
    }
    let plus = pairs.iter().map(|&(e, _)| index((e, one)).expect("phi_1 is the identity")).collect::<Vec<_>>();
    let star = pairs
        .iter()
        .map(|&(e, s)| index((apply(s, e).expect("in dom"), one)).expect("phi_1 is the identity"))
        .collect::<Vec<_>>();
    let names = pairs
        .iter()
        .map(|&(e, s)| format!("({},{})", sl.name(e), p.monoid.display(&Label::Elem(s))))
        .collect();
    Ok(PairForm {
        semigroup: OpTableSemigroup::new(names, mult, plus, star)?,
        pairs,
    })
}

/// Compares the pair form with the product of the induced graph through
/// `(e,s) -> (e,s,e phi_s)`.
pub fn pair_form_iso(p: &Premorphism) -> Result<Report> {
    let mut rep = Report::new("pair form");
    let pf = build_pair_form(p)?;
    let s = &pf.semigroup;
    rep.push(
        "left ample",
        Outcome::from_failure(s.verify_restriction(crate::Side::Left).first_failure().and_then(|c| c.outcome.witness().cloned())),
    );
    rep.push(
        "right ample",
        Outcome::from_failure(s.verify_restriction(crate::Side::Right).first_failure().and_then(|c| c.outcome.witness().cloned())),
    );
    let sigma = s.sigma();
    let mut seen = std::collections::HashMap::new();
    let mut determined = Outcome::Pass;
    for a in s.elements() {
        if let Some(b) = seen.insert((s.plus(a), sigma.class_of(a)), a) {
            determined = Outcome::fail(vec![b, a], "a+ and the sigma class do not determine a");
            break;
        }
    }
    rep.push("a -> (a+, [a]) injective", determined);
    let g = premorphism_to_graph(p)?;
    rep.absorb("graph: ", g.check_axioms(3));
    let prod = product::build_product(&g)?;
    let map = pf
        .pairs
        .iter()
        .map(|&(e, t)| {
            let f = p.phi[t].pairs().into_iter().find(|&(a, _)| a == e).expect("in dom").1;
            g.find_edge(e, &Label::Elem(t), f).expect("edge")
        })
        .collect::<Vec<_>>();
    rep.push("(e,s) -> (e,s,e phi_s) bijective", check_bijection(&map, prod.len()));
    rep.push("(e,s) -> (e,s,e phi_s) is a morphism", check_morphism(s, &prod, &map));
    Ok(rep)
}

/// Outcome of a seeded random search for partial multiactions whose product
/// has sigma strictly coarser than label equality.
#[derive(Debug, Clone)]
pub struct SigmaSearch {
    pub trials: usize,
    /// Sampled graphs satisfying all restriction axioms.
    pub valid: usize,
    pub deterministic: usize,
    pub violation: Option<(ResGraph, Witness)>,
}

fn small_monoids() -> Vec<LabelMonoid> {
    let t2 = LabelMonoid::finite(vec!["1".into(), "t".into()], vec![vec![0, 1], vec![1, 1]], 0);
    let z2 = LabelMonoid::finite(vec!["1".into(), "a".into()], vec![vec![0, 1], vec![1, 0]], 0);
    let z3 = LabelMonoid::finite(vec![], vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]], 0);
    let with_zero = LabelMonoid::finite(
        vec!["1".into(), "a".into(), "0".into()],
        vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]],
        0,
    );
    let left_zeros = LabelMonoid::finite(
        vec!["1".into(), "a".into(), "b".into()],
        vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]],
        0,
    );
    [t2, z2, z3, with_zero, left_zeros].into_iter().map(|m| m.expect("valid monoid")).collect()
}

/// Closes random relations under the premorphism laws.
fn random_premorphism(rng: &mut ChaCha8Rng, mon: &LabelMonoid, sl: &Semilattice) -> Option<Premorphism> {
    let n = sl.len();
    let size = mon.size()?;
    let one = match mon.one() {
        Label::Elem(i) => i,
        Label::Word(_) => return None,
    };
    let mut phi: Vec<BinaryRelation> = (0..size)
        .map(|_| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .filter(|_| rng.gen_bool(0.3))
                .collect();
            BinaryRelation::from_pairs(n, &pairs).expect("in range")
        })
        .collect();
    phi[one] = BinaryRelation::identity(n);
    loop {
        let mut changed = false;
        for s in 0..size {
            for t in 0..size {
                let st = match mon.mul(&Label::Elem(s), &Label::Elem(t)) {
                    Label::Elem(i) => i,
                    Label::Word(_) => return None,
                };
                let add = phi[s].compose(&phi[t]).ok()?;
                if !add.is_subset(&phi[st]) {
                    let mut pairs = phi[st].pairs();
                    pairs.extend(add.pairs());
                    phi[st] = BinaryRelation::from_pairs(n, &pairs).ok()?;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Premorphism::new(mon.clone(), sl.clone(), phi).ok()
}

pub fn search_sigma_violation(seed: u64, trials: usize) -> SigmaSearch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monoids = small_monoids();
    let lattices = [Semilattice::chain(2), Semilattice::chain(3), Semilattice::powerset(2)];
    let mut out = SigmaSearch {
        trials,
        valid: 0,
        deterministic: 0,
        violation: None,
    };
    for _ in 0..trials {
        let mon = &monoids[rng.gen_range(0..monoids.len())];
        let sl = &lattices[rng.gen_range(0..lattices.len())];
        let Some(p) = random_premorphism(&mut rng, mon, sl) else { continue };
        let Ok(g) = premorphism_to_graph(&p) else { continue };
        if !g.check_axioms(3).all_pass() {
            continue;
        }
        out.valid += 1;
        let det = check_determinism(&g);
        if det.ld || det.rd {
            out.deterministic += 1;
        }
        let Ok(s) = product::build_product(&g) else { continue };
        if let Some(w) = product::sigma_label_violation(&g, &s.sigma()) {
            out.violation = Some((g, w));
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resgraph::tests::e2_t2;

    fn t2() -> LabelMonoid {
        LabelMonoid::finite(vec!["1".into(), "t".into()], vec![vec![0, 1], vec![1, 1]], 0).unwrap()
    }

    #[test]
    fn e2_t2_premorphism() {
        let p = graph_to_premorphism(&e2_t2()).unwrap();
        assert_eq!(p.phi(0).pairs(), vec![(0, 0), (1, 1)]);
        assert_eq!(p.phi(1).pairs(), vec![(0, 1), (1, 1)]);
        let g = premorphism_to_graph(&p).unwrap();
        assert!(g.check_axioms(3).all_pass());
        let original: std::collections::HashSet<Edge> = e2_t2().edges().iter().cloned().collect();
        let back: std::collections::HashSet<Edge> = g.edges().iter().cloned().collect();
        assert_eq!(original, back);
        for c in 0..g.num_edges() {
            let e = g.edge(c);
            let o = e2_t2().find_edge(e.d, &e.l, e.r).unwrap();
            for v in g.semilattice().below(e.d) {
                assert_eq!(g.restrict(c, v).map(|x| g.edge(x).clone()), e2_t2().restrict(o, v).map(|x| e2_t2().edge(x).clone()));
            }
        }
    }

    #[test]
    fn e2_t2_determinism_and_class() {
        let g = e2_t2();
        assert_eq!(check_determinism(&g), Determinism { ld: true, rd: false });
        let c = classify_restriction(&g).unwrap();
        assert!(c.left && !c.right && c.proper_left && !c.proper_right);
        assert!(c.agrees() && c.recovery_agrees());
        assert!(check_sigma_iff_label(&g).unwrap().is_pass());
    }

    #[test]
    fn prem2_violation_rejected() {
        let sl = Semilattice::chain(2);
        let phi = vec![BinaryRelation::identity(2), BinaryRelation::from_pairs(2, &[(0, 1), (1, 0)]).unwrap()];
        assert!(matches!(Premorphism::new(t2(), sl, phi), Err(Error::Premorphism(_))));
    }

    #[test]
    fn pair_form_on_chain() {
        let sl = Semilattice::chain(2);
        let bad = Premorphism::new(t2(), sl.clone(), vec![BinaryRelation::identity(2), BinaryRelation::from_pairs(2, &[(0, 1), (1, 1)]).unwrap()]).unwrap();
        assert!(build_pair_form(&bad).is_err());
        let p = Premorphism::new(t2(), sl, vec![BinaryRelation::identity(2), BinaryRelation::from_pairs(2, &[(1, 1)]).unwrap()]).unwrap();
        let pf = build_pair_form(&p).unwrap();
        assert_eq!(pf.semigroup.len(), 3);
        assert!(pf.semigroup.is_left_restriction() && pf.semigroup.is_right_restriction());
        let rep = pair_form_iso(&p).unwrap();
        assert!(rep.all_pass(), "{rep}");
    }

    #[test]
    fn partial_action_law_violation() {
        let sl = Semilattice::chain(2);
        // dom(phi_t) = {e} is not an order ideal: f <= e is missing.
        let phi = vec![BinaryRelation::identity(2), BinaryRelation::from_pairs(2, &[(0, 0)]).unwrap()];
        let p = Premorphism::new(t2(), sl, phi).unwrap();
        let rep = check_partial_action_laws(&p);
        assert!(rep.first_failure().unwrap().outcome.witness().unwrap().indices == vec![1, 1, 0]);
    }

    #[test]
    fn search_is_deterministic() {
        let a = search_sigma_violation(7, 50);
        let b = search_sigma_violation(7, 50);
        assert_eq!((a.valid, a.deterministic, a.violation.is_some()), (b.valid, b.deterministic, b.violation.is_some()));
    }
}
