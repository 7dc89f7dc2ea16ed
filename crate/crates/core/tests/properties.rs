mod common;

use proptest::prelude::*;

use ehresmann::actions::{self, Premorphism};
use ehresmann::corpus;
use ehresmann::cover;
use ehresmann::product;
use ehresmann::relation::{BinaryRelation, RelationAlgebra};
use ehresmann::resgraph::{Label, LabelMonoid};
use ehresmann::{OpTableSemigroup, Semilattice};

fn relation(n: usize) -> impl Strategy<Value = BinaryRelation> {
    proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
        let pairs: Vec<(usize, usize)> = (0..n * n).filter(|&k| bits[k]).map(|k| (k / n, k % n)).collect();
        BinaryRelation::from_pairs(n, &pairs).unwrap()
    })
}

/// Subalgebras of `B(2)` and small subalgebras of `B(3)`.
fn subalgebra() -> impl Strategy<Value = OpTableSemigroup> {
    prop_oneof![
        proptest::collection::vec(relation(2), 1..4),
        proptest::collection::vec(relation(3), 1..3),
    ]
    .prop_filter_map("too large", |gens| {
        let n = gens[0].ground_size();
        let alg = RelationAlgebra::generate(n, &gens, 40).ok()?;
        Some(alg.into_semigroup())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(a in relation(4), b in relation(4), c in relation(4)) {
        let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
        let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn relation_operations_match_pair_lists(a in relation(4), b in relation(4)) {
        prop_assert_eq!(a.compose(&b).unwrap().pairs(), common::compose(&a.pairs(), &b.pairs()));
        prop_assert!(a.dom().is_projection() && a.ran().is_projection());
        prop_assert_eq!(a.converse().converse(), a.clone());
        let c = a.classify();
        prop_assert_eq!(c.in_i, c.in_pt && c.in_ptc);
        prop_assert_eq!(a.dom().compose(&a).unwrap(), a.clone());
        prop_assert_eq!(a.compose(&a.ran()).unwrap(), a);
    }

    #[test]
    fn subalgebras_are_ehresmann(s in subalgebra()) {
        prop_assert!(common::associative(&s));
        prop_assert!(s.verify_ehresmann().all_pass());
        let orders = s.natural_orders();
        prop_assert!(orders.le_l.is_partial_order() && orders.le_r.is_partial_order() && orders.le.is_partial_order());
        for a in s.elements() {
            for b in s.elements() {
                prop_assert_eq!(orders.le.get(a, b), common::natural_le(&s, a, b));
            }
        }
    }

    #[test]
    fn sigma_is_a_projection_collapsing_congruence(s in subalgebra()) {
        let sigma = s.sigma();
        prop_assert!(sigma.compatibility_violation(&s).is_none());
        let p = common::projections(&s);
        prop_assert!(p.iter().all(|&e| sigma.same(e, p[0])));
        let q = sigma.quotient(&s);
        prop_assert_eq!(q.projections().unwrap().len(), 1);
        if s.len() <= 9 {
            prop_assert!(common::same_partition(sigma.labels(), &common::brute_sigma(&s)));
        }
    }

    #[test]
    fn matchify_laws(s in subalgebra(), raw in proptest::collection::vec(any::<prop::sample::Index>(), 1..7)) {
        let seq: Vec<usize> = raw.iter().map(|i| i.index(s.len())).collect();
        let m = s.matchify(&seq).unwrap();
        prop_assert!(s.is_matching(&m));
        prop_assert_eq!(s.product(&m), s.product(&seq));
        for (&a, &b) in m.iter().zip(&seq) {
            prop_assert!(common::natural_le(&s, a, b));
        }
        let p = s.product(&m).unwrap();
        prop_assert_eq!(s.plus(p), s.plus(m[0]));
        prop_assert_eq!(s.star(p), s.star(*m.last().unwrap()));
        let e = s.star(p);
        let cut = s.corestrict_matching(&m, e).unwrap();
        prop_assert!(s.is_matching(&cut));
    }

    #[test]
    fn strictly_proper_subalgebras_rebuild(s in subalgebra()) {
        if s.is_strictly_proper() {
            prop_assert!(product::structure_iso_check(&s, &vec![true; s.len()]).unwrap().all_pass());
        }
    }
}

/// Random relations for each monoid element, closed under the premorphism
/// laws.
fn premorphism_from_bits(mon: LabelMonoid, sl: Semilattice, bits: &[bool]) -> Option<Premorphism> {
    let n = sl.len();
    let size = mon.size().unwrap();
    let mut phi: Vec<Vec<(usize, usize)>> = (0..size)
        .map(|t| (0..n * n).filter(|&k| bits[(t * n * n + k) % bits.len()]).map(|k| (k / n, k % n)).collect())
        .collect();
    phi[0].extend((0..n).map(|i| (i, i)));
    loop {
        let mut changed = false;
        for s in 0..size {
            for t in 0..size {
                let Label::Elem(st) = mon.mul(&Label::Elem(s), &Label::Elem(t)) else { unreachable!() };
                for p in common::compose(&phi[s], &phi[t]) {
                    if !phi[st].contains(&p) {
                        phi[st].push(p);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let rels = phi.iter().map(|p| BinaryRelation::from_pairs(n, p).unwrap()).collect();
    Premorphism::new(mon, sl, rels).ok()
}

fn monoid() -> impl Strategy<Value = LabelMonoid> {
    prop_oneof![
        Just(corpus::t2()),
        Just(corpus::z2()),
        Just(LabelMonoid::finite(vec![], vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]], 0).unwrap()),
    ]
}

fn semilattice() -> impl Strategy<Value = Semilattice> {
    prop_oneof![Just(corpus::e2()), Just(Semilattice::chain(3)), Just(Semilattice::powerset(2))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn premorphism_graph_round_trip(mon in monoid(), sl in semilattice(), bits in proptest::collection::vec(prop::bool::weighted(0.1), 48)) {
        let Some(p) = premorphism_from_bits(mon, sl, &bits) else { return Ok(()) };
        let g = actions::premorphism_to_graph(&p).unwrap();
        prop_assert!(g.is_partial_multiaction());
        let back = actions::graph_to_premorphism(&g).unwrap();
        prop_assert_eq!(back, p.clone());
        if !g.check_axioms(3).all_pass() {
            return Ok(());
        }
        let s = product::build_product(&g).unwrap();
        prop_assert!(common::associative(&s));
        prop_assert!(s.verify_ehresmann().all_pass());
        prop_assert!(product::check_construction_claims(&g, &s).all_pass());
        let det = actions::check_determinism(&g);
        if det.ld || det.rd {
            prop_assert!(actions::check_sigma_iff_label(&g).unwrap().is_pass());
        }
        if det.ld {
            prop_assert!(s.proper_left_restriction().is_none());
        }
        if det.rd {
            prop_assert!(s.proper_right_restriction().is_none());
        }
        if p.is_partial_action() {
            let pf = actions::build_pair_form(&p).unwrap();
            let sg = &pf.semigroup;
            for (i, &(e, _)) in pf.pairs.iter().enumerate() {
                prop_assert_eq!(pf.pairs[sg.plus(i)], (e, 0));
            }
            prop_assert!(actions::pair_form_iso(&p).unwrap().all_pass());
        }
    }
}

fn cover_case() -> impl Strategy<Value = (OpTableSemigroup, Vec<usize>)> {
    prop_oneof![
        Just((OpTableSemigroup::from_semilattice(&corpus::e2()), vec![0, 1])),
        Just((corpus::ehresmann7(), vec![0, 1])),
        Just({
            let s = RelationAlgebra::full_pt(2).unwrap().into_semigroup();
            let g = cover::three_generators(&s).unwrap();
            (s, g)
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cover_forms((s, gens) in cover_case(), picks in proptest::collection::vec(any::<prop::sample::Index>(), 3), loops in proptest::collection::vec(any::<bool>(), 8)) {
        let c = cover::build_cover_graph(&s, &gens).unwrap();
        let forms = c.enumerate_canonical(2);
        let u = &forms[picks[0].index(forms.len())];
        let v = &forms[picks[1].index(forms.len())];
        let w = &forms[picks[2].index(forms.len())];
        let uv = c.cover_mult(u, v).unwrap();
        prop_assert_eq!(c.cover_mult(&uv, w).unwrap(), c.cover_mult(u, &c.cover_mult(v, w).unwrap()).unwrap());
        prop_assert_eq!(c.phi(&uv), s.mul(c.phi(u), c.phi(v)));
        let (up, us) = c.cover_plus_star(u);
        prop_assert_eq!(c.phi(&up), s.plus(c.phi(u)));
        prop_assert_eq!(c.phi(&us), s.star(c.phi(u)));

        // Pad a raw path with unit loops; canonicalize must undo it.
        let g = c.graph();
        let p = c.to_path(u).unwrap();
        let mut raw = Vec::new();
        for (i, &e) in p.edges().iter().enumerate() {
            if loops[i % loops.len()] {
                raw.push(g.loop_edge(g.edge(e).d).unwrap());
            }
            raw.push(e);
        }
        if loops[7] {
            raw.push(g.loop_edge(g.path_r(&p)).unwrap());
        }
        let raw = g.path(raw).unwrap();
        let canon = c.canonicalize(&raw);
        prop_assert_eq!(&canon, u);
        prop_assert_eq!(c.canonicalize(&c.to_path(&canon).unwrap()), canon);
    }
}
