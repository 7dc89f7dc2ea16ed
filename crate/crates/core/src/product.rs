//! The Ehresmann semigroup `E x_G T` of a partial multiaction, the
//! underlying graph `G_{S,Y}` of a semigroup, and the structure checks
//! relating the two.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::report::{Outcome, Report, Witness};
use crate::resgraph::{Edge, Label, LabelMonoid, ResGraph};
use crate::semigroup::{Congruence, OpTableSemigroup, ProjectionSet};

/// The table of `E x_G T` on the edge set of a partial multiaction. Element
/// `i` of the result is edge `i` of `g`.
pub fn build_product(g: &ResGraph) -> Result<OpTableSemigroup> {
    if let Some(w) = g.pm_violation() {
        return Err(Error::NotMultiaction(w.detail));
    }
    let sl = g.semilattice();
    let m = g.num_edges();
    let mut mult = vec![vec![0; m]; m];
    for (c, row) in mult.iter_mut().enumerate() {
        let ec = g.edge(c);
        for (d, slot) in row.iter_mut().enumerate() {
            let ed = g.edge(d);
            let meet = sl.meet(ec.r, ed.d);
            let left = g
                .corestrict(c, meet)
                .ok_or_else(|| Error::Restriction(format!("{} has no corestriction to {}", g.edge_string(c), sl.name(meet))))?;
            let right = g
                .restrict(d, meet)
                .ok_or_else(|| Error::Restriction(format!("{} has no restriction to {}", g.edge_string(d), sl.name(meet))))?;
            let label = g.monoid().mul(&ec.l, &ed.l);
            *slot = g
                .find_edge(g.edge(left).d, &label, g.edge(right).r)
                .ok_or_else(|| Error::NotMultiaction(format!("no composite of {} and {}", g.edge_string(left), g.edge_string(right))))?;
        }
    }
    let loop_at = |v: usize| {
        g.loop_edge(v)
            .ok_or_else(|| Error::Input(format!("no loop at {}", sl.name(v))))
    };
    let plus = (0..m).map(|c| loop_at(g.edge(c).d)).collect::<Result<Vec<_>>>()?;
    let star = (0..m).map(|c| loop_at(g.edge(c).r)).collect::<Result<Vec<_>>>()?;
    let names = (0..m).map(|c| g.edge_string(c)).collect();
    OpTableSemigroup::new(names, mult, plus, star)
}

/// Checks the structural claims about `s = build_product(g)`.
pub fn check_construction_claims(g: &ResGraph, s: &OpTableSemigroup) -> Report {
    let mut rep = Report::new("product construction");
    let ehr = s.verify_ehresmann();
    rep.push(
        "Ehresmann semigroup",
        match ehr.first_failure() {
            None => Outcome::Pass,
            Some(c) => Outcome::fail(c.outcome.witness().map(|w| w.indices.clone()).unwrap_or_default(), c.name.clone()),
        },
    );
    rep.push("projections are the loops", check_projections(g, s));
    let sigma = s.sigma();
    rep.push(
        "sigma implies equal labels",
        Outcome::from_failure(first_pair(s.len(), |c, d| sigma.same(c, d) && g.edge(c).l != g.edge(d).l).map(|(c, d)| {
            Witness::new(vec![c, d], format!("{} sigma {} with different labels", g.edge_string(c), g.edge_string(d)))
        })),
    );
    let orders = s.natural_orders();
    let (le_l, le_r, _) = g.edge_orders();
    let mut order_check = |name: &str, semi: &crate::semigroup::BoolTable, graph: &crate::semigroup::BoolTable| {
        let bad = first_pair(s.len(), |c, d| semi.get(c, d) != graph.get(c, d));
        rep.push(
            name,
            Outcome::from_failure(bad.map(|(c, d)| {
                Witness::new(
                    vec![c, d],
                    format!(
                        "{} vs {}: natural order {}, graph order {}",
                        g.edge_string(c),
                        g.edge_string(d),
                        semi.get(c, d),
                        graph.get(c, d)
                    ),
                )
            })),
        );
    };
    order_check("<=_l is restriction", &orders.le_l, &le_l);
    order_check("<=_r is corestriction", &orders.le_r, &le_r);
    order_check("<= is restriction then corestriction", &orders.le, &le_l.compose(&le_r));
    let iff = sigma_label_violation(g, &sigma);
    if iff.is_none() {
        rep.push("quotient by sigma is the label monoid", check_quotient_is_labels(g, s, &sigma));
    } else {
        rep.note("sigma differs from label equality; the quotient claim does not apply");
    }
    rep
}

fn check_projections(g: &ResGraph, s: &OpTableSemigroup) -> Outcome {
    let p = match s.projections() {
        Ok(p) => p,
        Err(e) => return Outcome::fail(Vec::new(), e.to_string()),
    };
    let sl = g.semilattice();
    let mut loops = Vec::new();
    for v in 0..sl.len() {
        match g.loop_edge(v) {
            Some(c) => loops.push(c),
            None => return Outcome::fail(vec![v], "missing loop"),
        }
    }
    let mut sorted = loops.clone();
    sorted.sort_unstable();
    if sorted != p.members() {
        return Outcome::fail(p.members().to_vec(), "projection set differs from the loops");
    }
    for a in 0..sl.len() {
        for b in 0..sl.len() {
            if s.mul(loops[a], loops[b]) != loops[sl.meet(a, b)] {
                return Outcome::fail(vec![a, b], "loop product is not the loop at the meet");
            }
        }
    }
    Outcome::Pass
}

fn check_quotient_is_labels(g: &ResGraph, s: &OpTableSemigroup, sigma: &Congruence) -> Outcome {
    let mon = g.monoid();
    let mut label_of_class: HashMap<usize, Label> = HashMap::new();
    for c in 0..s.len() {
        label_of_class.insert(sigma.class_of(c), g.edge(c).l.clone());
    }
    let covered: std::collections::HashSet<&Label> = label_of_class.values().collect();
    if let Some(n) = mon.size() {
        if covered.len() != n {
            return Outcome::fail(Vec::new(), format!("{} of {} labels occur on edges", covered.len(), n));
        }
    }
    for a in 0..s.len() {
        for b in 0..s.len() {
            let lab = mon.mul(&g.edge(a).l, &g.edge(b).l);
            if label_of_class[&sigma.class_of(s.mul(a, b))] != lab {
                return Outcome::fail(vec![a, b], "class label is not multiplicative");
            }
        }
    }
    Outcome::Pass
}

fn first_pair(n: usize, bad: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| bad(a, b))
}

/// First pair of edges where sigma-relatedness and label equality disagree.
pub fn sigma_label_violation(g: &ResGraph, sigma: &Congruence) -> Option<Witness> {
    first_pair(g.num_edges(), |c, d| sigma.same(c, d) != (g.edge(c).l == g.edge(d).l)).map(|(c, d)| {
        Witness::new(
            vec![c, d],
            format!(
                "{} and {}: sigma {}, labels equal {}",
                g.edge_string(c),
                g.edge_string(d),
                sigma.same(c, d),
                g.edge(c).l == g.edge(d).l
            ),
        )
    })
}

/// For a letter graph: every two edges with the same letter lie below a
/// common edge. Returns `Err(Error::Precondition)` when the graph is not a
/// letter graph.
pub fn check_properness_criterion(g: &ResGraph) -> Result<Outcome> {
    if !g.is_letter_graph() {
        return Err(Error::Precondition(
            "needs free labels that are letters or 1, with the 1-edges exactly the loops".into(),
        ));
    }
    let (_, _, le) = g.edge_orders();
    let m = g.num_edges();
    let mut by_label: HashMap<&Label, Vec<usize>> = HashMap::new();
    for c in 0..m {
        if !g.monoid().is_one(&g.edge(c).l) {
            by_label.entry(&g.edge(c).l).or_default().push(c);
        }
    }
    let mut labels: Vec<_> = by_label.into_iter().collect();
    labels.sort();
    for (_, edges) in labels {
        for &u in &edges {
            for &v in &edges {
                if v < u {
                    continue;
                }
                if !(0..m).any(|w| le.get(u, w) && le.get(v, w)) {
                    return Ok(Outcome::fail(
                        vec![u, v],
                        format!("{} and {} have no common upper bound", g.edge_string(u), g.edge_string(v)),
                    ));
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

/// `G_{S,Y}` together with the correspondence between `Y` and its edges.
#[derive(Debug, Clone)]
pub struct UnderlyingGraph {
    pub graph: ResGraph,
    pub sigma: Congruence,
    pub quotient: OpTableSemigroup,
    pub projections: ProjectionSet,
    /// Edge of each member of `Y`.
    pub edge_of: Vec<Option<usize>>,
    /// Member of `Y` behind each edge.
    pub element_of: Vec<usize>,
}

/// Checks conditions (1)-(3) of a proper generating ideal: contains the
/// projections, is an order ideal, and consists of proper elements.
pub fn check_ideal_basics(s: &OpTableSemigroup, y: &[bool], sigma: &Congruence) -> Result<()> {
    if y.len() != s.len() {
        return Err(Error::Input("membership vector has the wrong length".into()));
    }
    for x in s.elements() {
        if !y[s.plus(x)] {
            return Err(Error::Precondition(format!("projection {} not in Y", s.name(s.plus(x)))));
        }
    }
    let le = s.natural_orders().le;
    for a in s.elements() {
        for b in s.elements() {
            if le.get(a, b) && y[b] && !y[a] {
                return Err(Error::Precondition(format!(
                    "Y is not an order ideal: {} <= {}",
                    s.name(a),
                    s.name(b)
                )));
            }
        }
    }
    let proper = s.proper_elements(sigma);
    if let Some(a) = s.elements().find(|&a| y[a] && !proper[a]) {
        return Err(Error::Precondition(format!("{} is not proper", s.name(a))));
    }
    Ok(())
}

pub fn underlying_graph(s: &OpTableSemigroup, y: &[bool]) -> Result<UnderlyingGraph> {
    let (sigma, quotient) = s.sigma_quotient();
    check_ideal_basics(s, y, &sigma)?;
    let projections = s.projections()?;
    let mon = LabelMonoid::from_reduced(&quotient)?;
    let vtx = |x: usize| projections.vertex(x).expect("projection");
    let mut edges = Vec::new();
    let mut element_of = Vec::new();
    let mut edge_of = vec![None; s.len()];
    for a in s.elements().filter(|&a| y[a]) {
        edge_of[a] = Some(edges.len());
        element_of.push(a);
        edges.push(Edge::new(vtx(s.plus(a)), Label::Elem(sigma.class_of(a)), vtx(s.star(a))));
    }
    let mut graph = ResGraph::new(projections.semilattice().clone(), mon, edges)?;
    for (c, &a) in element_of.iter().enumerate() {
        for g in projections.semilattice().below(vtx(s.plus(a))) {
            let ga = s.mul(projections.element(g), a);
            let to = edge_of[ga].ok_or_else(|| Error::Precondition(format!("{} not in Y", s.name(ga))))?;
            graph.set_restrict(c, g, to)?;
        }
        for h in projections.semilattice().below(vtx(s.star(a))) {
            let ah = s.mul(a, projections.element(h));
            let to = edge_of[ah].ok_or_else(|| Error::Precondition(format!("{} not in Y", s.name(ah))))?;
            graph.set_corestrict(c, h, to)?;
        }
    }
    Ok(UnderlyingGraph {
        graph,
        sigma,
        quotient,
        projections,
        edge_of,
        element_of,
    })
}

/// Checks `a -> (a+, [a]_sigma, a*)` is an isomorphism from `s` onto the
/// product of its underlying graph. Decided when `Y` is all of `s`.
pub fn structure_iso_check(s: &OpTableSemigroup, y: &[bool]) -> Result<Report> {
    let mut rep = Report::new("structure isomorphism");
    if y.len() != s.len() {
        return Err(Error::Input("membership vector has the wrong length".into()));
    }
    if !y.iter().all(|&b| b) {
        rep.push(
            "psi is an isomorphism",
            Outcome::inconclusive("only Y = S is decided; general Y needs factorization search"),
        );
        return Ok(rep);
    }
    let sigma = s.sigma();
    if let Some((a, b)) = s.improper_pair(&sigma) {
        rep.push(
            "psi injective",
            Outcome::fail(vec![a, b], format!("{} and {} share (a+, a*, [a])", s.name(a), s.name(b))),
        );
        return Ok(rep);
    }
    rep.push("psi injective", Outcome::Pass);
    let u = underlying_graph(s, y)?;
    rep.absorb("graph: ", u.graph.check_axioms(3));
    let p = match build_product(&u.graph) {
        Ok(p) => p,
        Err(e) => {
            rep.push("underlying graph is a partial multiaction", Outcome::fail(Vec::new(), e.to_string()));
            return Ok(rep);
        }
    };
    rep.push("underlying graph is a partial multiaction", Outcome::Pass);
    let psi: Vec<usize> = s.elements().map(|a| u.edge_of[a].expect("Y = S")).collect();
    rep.push("psi bijective", check_bijection(&psi, p.len()));
    rep.push("psi is a (2,1,1)-morphism", check_morphism(s, &p, &psi));
    Ok(rep)
}

/// `map` is a bijection onto `0..n`.
pub(crate) fn check_bijection(map: &[usize], n: usize) -> Outcome {
    if map.len() != n {
        return Outcome::fail(Vec::new(), format!("{} elements map onto {}", map.len(), n));
    }
    let mut hit = vec![None; n];
    for (a, &x) in map.iter().enumerate() {
        if let Some(b) = hit[x] {
            return Outcome::fail(vec![b, a], "collision");
        }
        hit[x] = Some(a);
    }
    Outcome::Pass
}

/// `map` preserves `.`, `+` and `*` from `s` to `t`.
pub(crate) fn check_morphism(s: &OpTableSemigroup, t: &OpTableSemigroup, map: &[usize]) -> Outcome {
    for a in s.elements() {
        if map[s.plus(a)] != t.plus(map[a]) {
            return Outcome::fail(vec![a], "+ not preserved");
        }
        if map[s.star(a)] != t.star(map[a]) {
            return Outcome::fail(vec![a], "* not preserved");
        }
        for b in s.elements() {
            if map[s.mul(a, b)] != t.mul(map[a], map[b]) {
                return Outcome::fail(vec![a, b], "product not preserved");
            }
        }
    }
    Outcome::Pass
}

/// Builds the product of `g`, recovers its underlying graph, and checks the
/// result is isomorphic to `g` (vertices through the loops, labels through
/// sigma classes).
pub fn round_trip_check(g: &ResGraph) -> Result<Report> {
    let mut rep = Report::new("round trip");
    let s = build_product(g)?;
    let u = underlying_graph(&s, &vec![true; s.len()])?;
    let sigma = &u.sigma;
    if let Some(w) = sigma_label_violation(g, sigma) {
        rep.push("sigma is label equality", Outcome::Fail { witness: w });
        return Ok(rep);
    }
    rep.push("sigma is label equality", Outcome::Pass);
    let vmap: Vec<usize> = (0..g.num_vertices())
        .map(|v| u.projections.vertex(g.loop_edge(v).expect("loop")).expect("projection"))
        .collect();
    rep.push("vertex map bijective", check_bijection(&vmap, u.graph.num_vertices()));
    let lmap = |l: &Label| -> Label {
        let c = (0..g.num_edges()).find(|&c| g.edge(c).l == *l).expect("label occurs");
        Label::Elem(sigma.class_of(c))
    };
    let mut edge_ok = Outcome::Pass;
    let mut tables_ok = Outcome::Pass;
    for c in 0..g.num_edges() {
        let e = g.edge(c);
        let image = Edge::new(vmap[e.d], lmap(&e.l), vmap[e.r]);
        let uc = u.edge_of[c].expect("all elements");
        if *u.graph.edge(uc) != image {
            edge_ok = Outcome::fail(vec![c], format!("{} maps to {}", g.edge_string(c), u.graph.edge_string(uc)));
            break;
        }
        for v in g.semilattice().below(e.d) {
            let ours = g.restrict(c, v).and_then(|t| u.edge_of[t]);
            if ours != u.graph.restrict(uc, vmap[v]) && tables_ok.is_pass() {
                tables_ok = Outcome::fail(vec![c, v], "restriction differs");
            }
        }
        for v in g.semilattice().below(e.r) {
            let ours = g.corestrict(c, v).and_then(|t| u.edge_of[t]);
            if ours != u.graph.corestrict(uc, vmap[v]) && tables_ok.is_pass() {
                tables_ok = Outcome::fail(vec![c, v], "corestriction differs");
            }
        }
    }
    rep.push("edges correspond", edge_ok);
    rep.push("restrictions correspond", tables_ok);
    rep.push(
        "edge counts agree",
        if g.num_edges() == u.graph.num_edges() {
            Outcome::Pass
        } else {
            Outcome::fail(Vec::new(), "edge counts differ")
        },
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resgraph::tests::e2_t2;
    use crate::semilattice::Semilattice;

    #[test]
    fn e2_t2_product() {
        let g = e2_t2();
        let s = build_product(&g).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.verify_ehresmann().all_pass());
        assert!(s.is_left_restriction());
        assert!(!s.is_right_restriction());
        let sigma = s.sigma();
        assert_eq!(sigma.classes(), vec![vec![0, 1], vec![2, 3]]);
        assert!(s.is_strictly_proper());
        let rep = check_construction_claims(&g, &s);
        assert!(rep.all_pass(), "{rep}");
    }

    #[test]
    fn singleton_vertex_product_is_the_monoid() {
        let sl = Semilattice::chain(1);
        let mon = LabelMonoid::finite(vec![], vec![vec![0, 1], vec![1, 0]], 0).unwrap();
        let edges = vec![Edge::new(0, Label::Elem(0), 0), Edge::new(0, Label::Elem(1), 0)];
        let g = ResGraph::with_maps(sl, mon, edges, |c, _| c.clone(), |c, _| c.clone()).unwrap();
        let s = build_product(&g).unwrap();
        assert_eq!(s.mul(1, 1), 0);
        assert_eq!(s.plus_table(), &[0, 0]);
        assert!(check_construction_claims(&g, &s).all_pass());
    }

    #[test]
    fn missing_composite_is_reported() {
        let sl = Semilattice::chain(1);
        let mon = LabelMonoid::finite(vec![], vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]], 0).unwrap();
        let edges = vec![Edge::new(0, Label::Elem(0), 0), Edge::new(0, Label::Elem(1), 0)];
        let g = ResGraph::with_maps(sl, mon, edges, |c, _| c.clone(), |c, _| c.clone()).unwrap();
        assert!(matches!(build_product(&g), Err(Error::NotMultiaction(_))));
    }

    #[test]
    fn e2_t2_round_trip_and_structure() {
        let g = e2_t2();
        let rep = round_trip_check(&g).unwrap();
        assert!(rep.all_pass(), "{rep}");
        let s = build_product(&g).unwrap();
        let rep = structure_iso_check(&s, &[true; 4]).unwrap();
        assert!(rep.all_pass(), "{rep}");
    }

    #[test]
    fn semilattice_underlying_graph_is_loops() {
        let s = OpTableSemigroup::from_semilattice(&Semilattice::powerset(2));
        let u = underlying_graph(&s, &[true; 4]).unwrap();
        assert!(u.graph.edges().iter().all(|e| e.d == e.r));
        assert!(structure_iso_check(&s, &[true; 4]).unwrap().all_pass());
    }

    #[test]
    fn properness_criterion_requires_letters() {
        assert!(matches!(check_properness_criterion(&e2_t2()), Err(Error::Precondition(_))));
    }
}
