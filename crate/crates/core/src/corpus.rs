//! A built-in corpus of small semigroups, graphs and premorphisms, each with
//! the expected outcome of a set of named checks.

use std::collections::BTreeMap;

use crate::actions::{self, Premorphism};
use crate::error::{Error, Result};
use crate::io::{self, CorpusDoc, CorpusEntryDoc, Document};
use crate::product;
use crate::relation::{BinaryRelation, RelationAlgebra, DEFAULT_CLOSURE_CAP};
use crate::report::{Outcome, Report};
use crate::resgraph::{LabelMonoid, ResGraph};
use crate::semigroup::OpTableSemigroup;
use crate::semilattice::Semilattice;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub payload: Document,
    pub expect: BTreeMap<String, bool>,
}

/// Checks understood by [`evaluate`], per payload kind.
pub const SEMIGROUP_CHECKS: &[&str] = &[
    "ehresmann",
    "left_restriction",
    "right_restriction",
    "strictly_proper",
    "proper_left_restriction",
    "proper_right_restriction",
    "reduced",
    "structure_iso",
];
pub const GRAPH_CHECKS: &[&str] = &[
    "axioms",
    "partial_multiaction",
    "letter_graph",
    "ld",
    "rd",
    "sigma_iff_label",
    "construction",
    "round_trip",
    "proper_left_restriction",
    "proper_right_restriction",
    "determinism_agrees",
];
pub const PREMORPHISM_CHECKS: &[&str] = &["graph_axioms", "ld", "rd", "partial_action", "pair_form"];

pub fn e2() -> Semilattice {
    Semilattice::new(vec!["e".into(), "f".into()], Semilattice::chain(2).meet_table().to_vec()).expect("2-chain")
}

/// `{1, t}` with `t t = t`.
pub fn t2() -> LabelMonoid {
    LabelMonoid::finite(vec!["1".into(), "t".into()], vec![vec![0, 1], vec![1, 1]], 0).expect("monoid")
}

pub fn z2() -> LabelMonoid {
    LabelMonoid::finite(vec!["1".into(), "a".into()], vec![vec![0, 1], vec![1, 0]], 0).expect("monoid")
}

fn z3() -> LabelMonoid {
    LabelMonoid::finite(
        vec!["1".into(), "a".into(), "b".into()],
        vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        0,
    )
    .expect("monoid")
}

/// `{1, a, 0}` with `a a = 0`.
fn nil2() -> LabelMonoid {
    LabelMonoid::finite(
        vec!["1".into(), "a".into(), "0".into()],
        vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]],
        0,
    )
    .expect("monoid")
}

fn rel(n: usize, pairs: &[(usize, usize)]) -> BinaryRelation {
    BinaryRelation::from_pairs(n, pairs).expect("pairs in range")
}

fn prem(mon: LabelMonoid, sl: Semilattice, phi: &[&[(usize, usize)]]) -> Premorphism {
    let n = sl.len();
    Premorphism::new(mon, sl, phi.iter().map(|p| rel(n, p)).collect()).expect("premorphism")
}

/// The LD premorphism behind the E2/T2 graph: `phi_t = {(e,f),(f,f)}`.
pub fn e2_t2_premorphism() -> Premorphism {
    prem(t2(), e2(), &[&[(0, 0), (1, 1)], &[(0, 1), (1, 1)]])
}

/// The graph on the 2-chain `e > f` labelled by `{1,t}` with edges
/// `(e,1,e), (f,1,f), (e,t,f), (f,t,f)`.
pub fn e2_t2_graph() -> ResGraph {
    actions::premorphism_to_graph(&e2_t2_premorphism()).expect("graph")
}

/// Named premorphisms. `e2-t2`, `e2-t2-reversed`, `nil2-e2` and
/// `t2-e2-full` are not partial actions; the last is neither LD nor RD.
pub fn premorphisms() -> Vec<(String, Premorphism)> {
    let p2 = Semilattice::powerset(2);
    let c3 = Semilattice::chain(3);
    let full_p2: Vec<(usize, usize)> = (0..4).map(|i| (i, i)).collect();
    let swap: Vec<(usize, usize)> = (0..4).map(|i| (i, ((i & 1) << 1) | (i >> 1))).collect();
    let id3: Vec<(usize, usize)> = (0..3).map(|i| (i, i)).collect();
    vec![
        ("e2-t2".into(), e2_t2_premorphism()),
        ("e2-t2-reversed".into(), prem(t2(), e2(), &[&[(0, 0), (1, 1)], &[(1, 0), (1, 1)]])),
        ("e2-t2-ideal".into(), prem(t2(), e2(), &[&[(0, 0), (1, 1)], &[(1, 1)]])),
        ("z2-swap-p2".into(), prem(z2(), p2.clone(), &[&full_p2, &swap])),
        ("z2-bottom-c3".into(), prem(z2(), c3, &[&id3, &[(2, 2)]])),
        ("t2-ideal-p2".into(), prem(t2(), p2, &[&full_p2, &[(0, 0), (1, 1)]])),
        ("z3-point".into(), prem(z3(), Semilattice::chain(1), &[&[(0, 0)], &[(0, 0)], &[(0, 0)]])),
        ("nil2-e2".into(), prem(nil2(), e2(), &[&[(0, 0), (1, 1)], &[(0, 1), (1, 1)], &[(0, 1), (1, 1)]])),
        ("t2-e2-full".into(), prem(t2(), e2(), &[&[(0, 0), (1, 1)], &[(0, 0), (0, 1), (1, 1)]])),
    ]
}

/// Two-generator subalgebras of `B(2)`.
fn b2_sub(gens: &[&[(usize, usize)]]) -> OpTableSemigroup {
    let g: Vec<BinaryRelation> = gens.iter().map(|p| rel(2, p)).collect();
    RelationAlgebra::generate(2, &g, DEFAULT_CLOSURE_CAP).expect("small").into_semigroup()
}

/// The 7-element strictly proper Ehresmann semigroup generated by
/// `{(0,0),(0,1)}` and `{(0,1),(1,1)}` in `B(2)`; neither left nor right
/// restriction.
pub fn ehresmann7() -> OpTableSemigroup {
    b2_sub(&[&[(0, 0), (0, 1)], &[(0, 1), (1, 1)]])
}

/// Named semigroups, each of size at most 9.
pub fn semigroups() -> Vec<(String, OpTableSemigroup)> {
    let mono = |names: &[&str], mult: Vec<Vec<usize>>| {
        OpTableSemigroup::reduced_monoid(names.iter().map(|s| s.to_string()).collect(), mult, 0).expect("monoid")
    };
    let mut out: Vec<(String, OpTableSemigroup)> = vec![
        ("chain1".into(), OpTableSemigroup::from_semilattice(&Semilattice::chain(1))),
        ("e2".into(), OpTableSemigroup::from_semilattice(&e2())),
        ("chain3".into(), OpTableSemigroup::from_semilattice(&Semilattice::chain(3))),
        ("powerset2".into(), OpTableSemigroup::from_semilattice(&Semilattice::powerset(2))),
        ("powerset3".into(), OpTableSemigroup::from_semilattice(&Semilattice::powerset(3))),
        ("z2".into(), OpTableSemigroup::cyclic_group(2)),
        ("z3".into(), OpTableSemigroup::cyclic_group(3)),
        ("z5".into(), OpTableSemigroup::cyclic_group(5)),
        ("t2-monoid".into(), mono(&["1", "t"], vec![vec![0, 1], vec![1, 1]])),
        ("nil2-monoid".into(), mono(&["1", "a", "0"], vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]])),
        ("pt2".into(), RelationAlgebra::full_pt(2).expect("PT(2)").into_semigroup()),
        ("ptc2".into(), RelationAlgebra::full_ptc(2).expect("PTc(2)").into_semigroup()),
        ("i2".into(), RelationAlgebra::full_i(2).expect("I(2)").into_semigroup()),
        ("b2-sub6".into(), b2_sub(&[&[(0, 0)], &[(0, 0), (0, 1), (1, 0)]])),
        ("b2-sub7".into(), ehresmann7()),
        ("b2-sub6-left".into(), b2_sub(&[&[(0, 0)], &[(0, 1), (1, 1)]])),
        ("b2-sub8-left".into(), b2_sub(&[&[(0, 1)], &[(0, 0), (1, 0)]])),
        ("b2-sub7-both".into(), b2_sub(&[&[(0, 1), (1, 0)], &[(0, 0), (0, 1), (1, 0)]])),
    ];
    let e2t2 = product::build_product(&e2_t2_graph()).expect("product");
    out.push(("e2-t2-product-op".into(), e2t2.opposite()));
    out.push(("e2-t2-product".into(), e2t2));
    for name in ["e2-t2-ideal", "z2-swap-p2"] {
        let p = premorphisms().into_iter().find(|(n, _)| n == name).expect("named").1;
        out.push((format!("{name}-pairs"), actions::build_pair_form(&p).expect("partial action").semigroup));
    }
    out
}

/// Named restriction graphs: the graphs of all premorphisms, plus the
/// cover graph of the 2-chain over both of its elements.
pub fn graphs() -> Vec<(String, ResGraph)> {
    let mut out: Vec<(String, ResGraph)> = premorphisms()
        .into_iter()
        .map(|(n, p)| (n, actions::premorphism_to_graph(&p).expect("graph")))
        .collect();
    let e2s = OpTableSemigroup::from_semilattice(&e2());
    let cover = crate::cover::build_cover_graph(&e2s, &[0, 1]).expect("generates");
    out.push(("e2-cover".into(), cover.graph().clone()));
    out
}

fn expect(pairs: &[(&str, bool)]) -> BTreeMap<String, bool> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Semigroup expectations: Ehresmann, left, right, strictly proper, proper
/// left, proper right, reduced.
fn semigroup_expect(name: &str) -> BTreeMap<String, bool> {
    let row = match name {
        "chain1" | "z2" | "z3" | "z5" | "t2-monoid" | "nil2-monoid" => [true, true, true, true, true, true, true],
        "e2" | "chain3" | "powerset2" | "powerset3" => [true, true, true, true, true, true, false],
        "pt2" => [true, true, false, false, false, false, false],
        "ptc2" => [true, false, true, false, false, false, false],
        "i2" => [true, true, true, false, false, false, false],
        "b2-sub6" => [true, false, false, false, false, false, false],
        "b2-sub7" => [true, false, false, true, false, false, false],
        "b2-sub6-left" | "b2-sub8-left" => [true, true, false, true, false, false, false],
        "e2-t2-product" => [true, true, false, true, true, false, false],
        "e2-t2-product-op" => [true, false, true, true, false, true, false],
        "b2-sub7-both" => [true, true, true, true, true, true, true],
        "e2-t2-ideal-pairs" | "z2-swap-p2-pairs" => [true, true, true, true, true, true, false],
        _ => return BTreeMap::new(),
    };
    let mut m = BTreeMap::new();
    for (k, v) in SEMIGROUP_CHECKS.iter().zip(row) {
        m.insert(k.to_string(), v);
    }
    // Every strictly proper instance is its own structure graph's product.
    m.insert("structure_iso".into(), row[3]);
    m
}

fn graph_expect(name: &str) -> BTreeMap<String, bool> {
    // ld, rd
    let (ld, rd) = match name {
        "e2-t2" | "nil2-e2" => (true, false),
        "e2-t2-reversed" => (false, true),
        "t2-e2-full" => (false, false),
        "e2-cover" => {
            return expect(&[("axioms", true), ("partial_multiaction", false), ("letter_graph", true)]);
        }
        _ => (true, true),
    };
    expect(&[
        ("axioms", true),
        ("partial_multiaction", true),
        ("letter_graph", false),
        ("ld", ld),
        ("rd", rd),
        ("sigma_iff_label", true),
        ("construction", true),
        ("round_trip", true),
        ("proper_left_restriction", ld),
        ("proper_right_restriction", rd),
        ("determinism_agrees", true),
    ])
}

fn premorphism_expect(name: &str) -> BTreeMap<String, bool> {
    let (ld, rd) = match name {
        "e2-t2" | "nil2-e2" => (true, false),
        "e2-t2-reversed" => (false, true),
        "t2-e2-full" => (false, false),
        _ => (true, true),
    };
    let action = ld && rd;
    expect(&[
        ("graph_axioms", true),
        ("ld", ld),
        ("rd", rd),
        ("partial_action", action),
        ("pair_form", action),
    ])
}

pub fn builtin() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for (name, s) in semigroups() {
        out.push(CorpusEntry {
            expect: semigroup_expect(&name),
            name,
            payload: Document::Semigroup(io::semigroup_doc(&s)),
        });
    }
    out.push(CorpusEntry {
        name: "b2".into(),
        payload: Document::Relgen(io::RelgenDoc {
            ground_size: 2,
            generators: RelationAlgebra::full_b(2)
                .expect("B(2)")
                .elements()
                .iter()
                .map(|r| r.pairs().into_iter().map(|(x, y)| [x, y]).collect())
                .collect(),
        }),
        expect: expect(&[("ehresmann", true), ("left_restriction", false), ("right_restriction", false)]),
    });
    for (name, g) in graphs() {
        out.push(CorpusEntry {
            expect: graph_expect(&name),
            name: format!("graph:{name}"),
            payload: Document::Resgraph(io::resgraph_doc(&g)),
        });
    }
    for (name, p) in premorphisms() {
        out.push(CorpusEntry {
            expect: premorphism_expect(&name),
            name: format!("premorphism:{name}"),
            payload: Document::Premorphism(io::premorphism_doc(&p)),
        });
    }
    out
}

pub fn to_doc(entries: &[CorpusEntry]) -> Document {
    Document::Corpus(CorpusDoc {
        entries: entries
            .iter()
            .map(|e| CorpusEntryDoc {
                name: e.name.clone(),
                payload: Box::new(e.payload.clone()),
                expect: e.expect.clone(),
            })
            .collect(),
    })
}

pub fn from_doc(doc: &Document) -> Result<Vec<CorpusEntry>> {
    match doc {
        Document::Corpus(c) => Ok(c
            .entries
            .iter()
            .map(|e| CorpusEntry {
                name: e.name.clone(),
                payload: (*e.payload).clone(),
                expect: e.expect.clone(),
            })
            .collect()),
        other => Err(Error::Input(format!("expected a corpus, found {}", other.kind()))),
    }
}

/// The actual value of a named check on a payload.
pub fn evaluate(doc: &Document, check: &str, cap: usize) -> Result<bool> {
    match doc {
        Document::Semigroup(_) | Document::Relgen(_) => {
            let s = io::load_semigroup(doc, cap)?;
            Ok(match check {
                "ehresmann" => s.is_ehresmann(),
                "left_restriction" => s.is_left_restriction(),
                "right_restriction" => s.is_right_restriction(),
                "strictly_proper" => s.is_strictly_proper(),
                "proper_left_restriction" => s.proper_left_restriction().is_none(),
                "proper_right_restriction" => s.proper_right_restriction().is_none(),
                "reduced" => s.projections()?.len() == 1,
                "structure_iso" => product::structure_iso_check(&s, &vec![true; s.len()])?.all_pass(),
                _ => return Err(Error::Input(format!("unknown semigroup check {check}"))),
            })
        }
        Document::Resgraph(d) => {
            let g = io::resgraph_from_doc(d)?;
            let det = actions::check_determinism(&g);
            Ok(match check {
                "axioms" => g.check_axioms(3).all_pass(),
                "partial_multiaction" => g.is_partial_multiaction(),
                "letter_graph" => g.is_letter_graph(),
                "ld" => det.ld,
                "rd" => det.rd,
                "sigma_iff_label" => actions::check_sigma_iff_label(&g)?.is_pass(),
                "construction" => product::check_construction_claims(&g, &product::build_product(&g)?).all_pass(),
                "round_trip" => product::round_trip_check(&g)?.all_pass(),
                "proper_left_restriction" => actions::classify_restriction(&g)?.proper_left,
                "proper_right_restriction" => actions::classify_restriction(&g)?.proper_right,
                "determinism_agrees" => {
                    let c = actions::classify_restriction(&g)?;
                    c.agrees() && c.recovery_agrees()
                }
                _ => return Err(Error::Input(format!("unknown graph check {check}"))),
            })
        }
        Document::Premorphism(d) => {
            let p = io::premorphism_from_doc(d)?;
            let classes: Vec<_> = p.relations().iter().map(|r| r.classify()).collect();
            Ok(match check {
                "graph_axioms" => actions::premorphism_to_graph(&p)?.check_axioms(3).all_pass(),
                "ld" => classes.iter().all(|c| c.in_pt),
                "rd" => classes.iter().all(|c| c.in_ptc),
                "partial_action" => p.is_partial_action(),
                "pair_form" => p.is_partial_action() && actions::pair_form_iso(&p)?.all_pass(),
                _ => return Err(Error::Input(format!("unknown premorphism check {check}"))),
            })
        }
        Document::Corpus(_) => Err(Error::Input("nested corpus".into())),
    }
}

/// One check per expectation: PASS when the actual value matches.
pub fn run_entry(entry: &CorpusEntry, cap: usize) -> Report {
    let mut rep = Report::new(entry.name.clone());
    for (check, &want) in &entry.expect {
        let outcome = match evaluate(&entry.payload, check, cap) {
            Ok(got) if got == want => Outcome::Pass,
            Ok(got) => Outcome::fail(Vec::new(), format!("expected {want}, got {got}")),
            Err(e) => Outcome::fail(Vec::new(), format!("error: {e}")),
        };
        rep.push(check.clone(), outcome);
    }
    rep
}

pub fn run_corpus(entries: &[CorpusEntry], cap: usize) -> Report {
    let mut rep = Report::new("corpus");
    for e in entries {
        rep.absorb(&format!("{}: ", e.name), run_entry(e, cap));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let s = semigroups();
        assert!(s.len() >= 20);
        assert!(s.iter().all(|(_, s)| s.len() <= 9));
        let find = |n: &str| s.iter().find(|(m, _)| m == n).unwrap().1.len();
        assert_eq!(find("pt2"), 9);
        assert_eq!(find("i2"), 7);
        assert_eq!(find("b2-sub7"), 7);
        assert_eq!(find("e2-t2-ideal-pairs"), 3);
        assert_eq!(find("z2-swap-p2-pairs"), 8);
    }

    #[test]
    fn e2_t2_graph_matches_hand_tables() {
        let g = e2_t2_graph();
        assert_eq!(g.num_edges(), 4);
        assert!(g.check_axioms(3).all_pass());
    }

    #[test]
    fn builtin_corpus_meets_expectations() {
        let rep = run_corpus(&builtin(), DEFAULT_CLOSURE_CAP);
        assert!(rep.all_pass(), "{rep}");
    }

    #[test]
    fn corpus_document_round_trip() {
        let entries = builtin();
        let text = io::to_string(&to_doc(&entries));
        let back = from_doc(&io::parse(&text).unwrap()).unwrap();
        assert_eq!(back, entries);
    }
}
