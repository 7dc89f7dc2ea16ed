//! JSON interchange documents. Every file is an object with `"version": 1`
//! and a `"kind"` discriminator; all indices are 0-based.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::actions::Premorphism;
use crate::error::{Error, Result};
use crate::relation::{BinaryRelation, RelationAlgebra};
use crate::resgraph::{Edge, Label, LabelMonoid, ResGraph};
use crate::semigroup::OpTableSemigroup;
use crate::semilattice::Semilattice;

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub version: u32,
    #[serde(flatten)]
    pub doc: Document,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Semigroup(SemigroupDoc),
    Relgen(RelgenDoc),
    Resgraph(ResGraphDoc),
    Premorphism(PremorphismDoc),
    Corpus(CorpusDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Semigroup(_) => "semigroup",
            Document::Relgen(_) => "relgen",
            Document::Resgraph(_) => "resgraph",
            Document::Premorphism(_) => "premorphism",
            Document::Corpus(_) => "corpus",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupDoc {
    pub elements: Vec<String>,
    pub mult: Vec<Vec<usize>>,
    pub plus: Vec<usize>,
    pub star: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelgenDoc {
    pub ground_size: usize,
    pub generators: Vec<Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemilatticeDoc {
    pub elements: Vec<String>,
    pub meet: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MonoidDoc {
    Finite {
        elements: Vec<String>,
        mult: Vec<Vec<usize>>,
        identity: usize,
    },
    Free {
        alphabet: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelDoc {
    Elem(usize),
    Word(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub d: usize,
    pub l: LabelDoc,
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictDoc {
    pub edge: usize,
    pub g: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorestrictDoc {
    pub edge: usize,
    pub h: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResGraphDoc {
    pub semilattice: SemilatticeDoc,
    pub monoid: MonoidDoc,
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub restrict: Vec<RestrictDoc>,
    #[serde(default)]
    pub corestrict: Vec<CorestrictDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundDoc {
    pub semilattice: SemilatticeDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremorphismDoc {
    pub monoid: MonoidDoc,
    pub ground: GroundDoc,
    /// Pairs of `phi_t`, keyed by the decimal index of `t`.
    pub phi: BTreeMap<String, Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusDoc {
    pub entries: Vec<CorpusEntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntryDoc {
    pub name: String,
    pub payload: Box<Document>,
    /// Expected result of each named check.
    pub expect: BTreeMap<String, bool>,
}

pub fn parse(text: &str) -> Result<Document> {
    let env: Envelope = serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid document: {e}")))?;
    if env.version != VERSION {
        return Err(Error::Input(format!("unsupported version {}", env.version)));
    }
    Ok(env.doc)
}

pub fn read(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn to_string(doc: &Document) -> String {
    let env = Envelope {
        version: VERSION,
        doc: doc.clone(),
    };
    serde_json::to_string_pretty(&env).expect("serializable")
}

pub fn write(path: &Path, doc: &Document) -> Result<()> {
    std::fs::write(path, to_string(doc) + "\n").map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

// ---- semigroups ----

pub fn semigroup_doc(s: &OpTableSemigroup) -> SemigroupDoc {
    SemigroupDoc {
        elements: s.names().to_vec(),
        mult: s.mult_rows(),
        plus: s.plus_table().to_vec(),
        star: s.star_table().to_vec(),
    }
}

pub fn semigroup_from_doc(d: &SemigroupDoc) -> Result<OpTableSemigroup> {
    OpTableSemigroup::new(d.elements.clone(), d.mult.clone(), d.plus.clone(), d.star.clone())
}

pub fn relgen_doc(alg: &RelationAlgebra, generators: &[BinaryRelation]) -> RelgenDoc {
    RelgenDoc {
        ground_size: alg.ground_size(),
        generators: generators.iter().map(|r| r.pairs().into_iter().map(|(x, y)| [x, y]).collect()).collect(),
    }
}

pub fn relgen_from_doc(d: &RelgenDoc, cap: usize) -> Result<RelationAlgebra> {
    let gens = d
        .generators
        .iter()
        .map(|g| BinaryRelation::from_pairs(d.ground_size, &g.iter().map(|p| (p[0], p[1])).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    RelationAlgebra::generate(d.ground_size, &gens, cap)
}

/// The semigroup described by a `semigroup` or `relgen` document.
pub fn load_semigroup(doc: &Document, cap: usize) -> Result<OpTableSemigroup> {
    match doc {
        Document::Semigroup(d) => semigroup_from_doc(d),
        Document::Relgen(d) => Ok(relgen_from_doc(d, cap)?.into_semigroup()),
        other => Err(Error::Input(format!("expected a semigroup, found {}", other.kind()))),
    }
}

// ---- graphs ----

pub fn semilattice_doc(sl: &Semilattice) -> SemilatticeDoc {
    SemilatticeDoc {
        elements: sl.names().to_vec(),
        meet: sl.meet_table().to_vec(),
    }
}

pub fn semilattice_from_doc(d: &SemilatticeDoc) -> Result<Semilattice> {
    Semilattice::new(d.elements.clone(), d.meet.clone())
}

pub fn monoid_doc(m: &LabelMonoid) -> MonoidDoc {
    match m {
        LabelMonoid::Finite { mult, identity, .. } => MonoidDoc::Finite {
            elements: (0..mult.len()).map(|i| m.display(&Label::Elem(i))).collect(),
            mult: mult.clone(),
            identity: *identity,
        },
        LabelMonoid::Free { alphabet } => MonoidDoc::Free {
            alphabet: alphabet.clone(),
        },
    }
}

pub fn monoid_from_doc(d: &MonoidDoc) -> Result<LabelMonoid> {
    match d {
        MonoidDoc::Finite { elements, mult, identity } => LabelMonoid::finite(elements.clone(), mult.clone(), *identity),
        MonoidDoc::Free { alphabet } => {
            let mut seen = std::collections::HashSet::new();
            if let Some(a) = alphabet.iter().find(|a| !seen.insert(*a)) {
                return Err(Error::Input(format!("letter {a} repeated")));
            }
            Ok(LabelMonoid::free(alphabet.clone()))
        }
    }
}

fn label_doc(m: &LabelMonoid, l: &Label) -> LabelDoc {
    match (m, l) {
        (LabelMonoid::Free { alphabet }, Label::Word(w)) => LabelDoc::Word(w.iter().map(|&i| alphabet[i].clone()).collect()),
        (_, Label::Elem(i)) => LabelDoc::Elem(*i),
        (_, Label::Word(_)) => unreachable!("word label over a finite monoid"),
    }
}

fn label_from_doc(m: &LabelMonoid, l: &LabelDoc) -> Result<Label> {
    let label = match (m, l) {
        (LabelMonoid::Finite { .. }, LabelDoc::Elem(i)) => Label::Elem(*i),
        (LabelMonoid::Free { alphabet }, LabelDoc::Word(w)) => Label::Word(
            w.iter()
                .map(|a| {
                    alphabet
                        .iter()
                        .position(|b| b == a)
                        .ok_or_else(|| Error::Input(format!("unknown letter {a}")))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => return Err(Error::Input("label does not match the monoid kind".into())),
    };
    m.validate(&label)?;
    Ok(label)
}

pub fn resgraph_doc(g: &ResGraph) -> ResGraphDoc {
    ResGraphDoc {
        semilattice: semilattice_doc(g.semilattice()),
        monoid: monoid_doc(g.monoid()),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                d: e.d,
                l: label_doc(g.monoid(), &e.l),
                r: e.r,
            })
            .collect(),
        restrict: g
            .restrict_entries()
            .into_iter()
            .map(|(edge, g, to)| RestrictDoc { edge, g, to })
            .collect(),
        corestrict: g
            .corestrict_entries()
            .into_iter()
            .map(|(edge, h, to)| CorestrictDoc { edge, h, to })
            .collect(),
    }
}

pub fn resgraph_from_doc(d: &ResGraphDoc) -> Result<ResGraph> {
    let sl = semilattice_from_doc(&d.semilattice)?;
    let mon = monoid_from_doc(&d.monoid)?;
    let edges = d
        .edges
        .iter()
        .map(|e| Ok(Edge::new(e.d, label_from_doc(&mon, &e.l)?, e.r)))
        .collect::<Result<Vec<_>>>()?;
    let mut g = ResGraph::new(sl, mon, edges)?;
    for r in &d.restrict {
        g.set_restrict(r.edge, r.g, r.to)?;
    }
    for r in &d.corestrict {
        g.set_corestrict(r.edge, r.h, r.to)?;
    }
    Ok(g)
}

pub fn premorphism_doc(p: &Premorphism) -> PremorphismDoc {
    PremorphismDoc {
        monoid: monoid_doc(p.monoid()),
        ground: GroundDoc {
            semilattice: semilattice_doc(p.ground()),
        },
        phi: p
            .relations()
            .iter()
            .enumerate()
            .map(|(t, r)| (t.to_string(), r.pairs().into_iter().map(|(x, y)| [x, y]).collect()))
            .collect(),
    }
}

pub fn premorphism_from_doc(d: &PremorphismDoc) -> Result<Premorphism> {
    let mon = monoid_from_doc(&d.monoid)?;
    let sl = semilattice_from_doc(&d.ground.semilattice)?;
    let size = mon
        .size()
        .ok_or_else(|| Error::Input("premorphisms need a finite monoid".into()))?;
    let mut phi = vec![BinaryRelation::empty(sl.len()); size];
    for (key, pairs) in &d.phi {
        let t: usize = key
            .parse()
            .map_err(|_| Error::Input(format!("phi key {key} is not an index")))?;
        crate::error::check_index("monoid element", t, size)?;
        phi[t] = BinaryRelation::from_pairs(sl.len(), &pairs.iter().map(|p| (p[0], p[1])).collect::<Vec<_>>())?;
    }
    Premorphism::new(mon, sl, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resgraph::tests::e2_t2;

    #[test]
    fn semigroup_round_trip() {
        let s = OpTableSemigroup::cyclic_group(3);
        let doc = Document::Semigroup(semigroup_doc(&s));
        let text = to_string(&doc);
        assert!(text.contains("\"kind\": \"semigroup\""));
        assert!(text.contains("\"version\": 1"));
        let back = load_semigroup(&parse(&text).unwrap(), 10).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn resgraph_round_trip() {
        let g = e2_t2();
        let doc = Document::Resgraph(resgraph_doc(&g));
        let back = match parse(&to_string(&doc)).unwrap() {
            Document::Resgraph(d) => resgraph_from_doc(&d).unwrap(),
            _ => panic!("wrong kind"),
        };
        assert_eq!(back.to_string(), g.to_string());
        assert_eq!(back.restrict_entries(), g.restrict_entries());
    }

    #[test]
    fn free_labels_are_letter_lists() {
        let v = serde_json::json!({"d": 0, "l": ["a", "b"], "r": 1});
        let e: EdgeDoc = serde_json::from_value(v).unwrap();
        assert_eq!(e.l, LabelDoc::Word(vec!["a".into(), "b".into()]));
        let e: EdgeDoc = serde_json::from_value(serde_json::json!({"d": 0, "l": 2, "r": 1})).unwrap();
        assert_eq!(e.l, LabelDoc::Elem(2));
    }

    #[test]
    fn wrong_version_rejected() {
        let text = r#"{"version": 2, "kind": "relgen", "ground_size": 2, "generators": []}"#;
        assert!(matches!(parse(text), Err(Error::Input(_))));
        assert!(parse(r#"{"version": 1, "kind": "nope"}"#).is_err());
    }

    #[test]
    fn relgen_generates() {
        let text = r#"{"version": 1, "kind": "relgen", "ground_size": 2, "generators": [[[0,0],[0,1]], [[1,1]]]}"#;
        let s = load_semigroup(&parse(text).unwrap(), 1000).unwrap();
        assert!(s.is_ehresmann());
    }
}
