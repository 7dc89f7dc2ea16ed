use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ehresmann::actions;
use ehresmann::corpus;
use ehresmann::cover;
use ehresmann::io::{self, Document};
use ehresmann::product;
use ehresmann::relation::{BinaryRelation, RelationAlgebra, DEFAULT_CLOSURE_CAP};
use ehresmann::semigroup::FactorizationBudget;
use ehresmann::{Error, OpTableSemigroup, Report, Result, Side, Verdict};

#[derive(Parser)]
#[command(name = "ehresmann", version, about = "Finite Ehresmann semigroups, restriction graphs and covers")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms appropriate to the file's kind.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_chain: usize,
        /// Also check one or both ample identities (semigroups only).
        #[arg(long, value_enum)]
        restriction: Option<SideArg>,
    },
    /// Projections, natural orders, sigma and properness of a semigroup.
    Analyze { file: PathBuf },
    /// Sigma classes and the quotient table.
    Sigma {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Matching factorizations, or a bounded proper-ideal check with --ideal.
    Factorize {
        file: PathBuf,
        /// Comma-separated element indices to rewrite.
        #[arg(long, value_delimiter = ',')]
        seq: Vec<usize>,
        /// Comma-separated members of a candidate generating ideal.
        #[arg(long, value_delimiter = ',')]
        ideal: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
    /// Restriction axioms, path axioms and edge orders of a graph.
    GraphCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_chain: usize,
        /// Longest path examined by the path axioms.
        #[arg(long, default_value_t = 2)]
        paths: usize,
    },
    /// The product of a partial multiaction.
    Product {
        #[command(subcommand)]
        action: ProductCmd,
    },
    /// Cover graphs over a generating set.
    Cover {
        #[command(subcommand)]
        action: CoverCmd,
    },
    /// Checks a semigroup is isomorphic to the product of its underlying graph.
    Iso {
        file: PathBuf,
        /// Comma-separated members of Y; all of S when omitted.
        #[arg(long, value_delimiter = ',')]
        ideal: Vec<usize>,
    },
    /// A canonical cover form mapping to an element.
    Preimage(PreimageArgs),
    /// Determinism, restriction class and pair form of a graph or premorphism.
    Actions {
        file: PathBuf,
    },
    /// Seeded random search for graphs where sigma is not label equality.
    SigmaSearch {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Searches B(2) and B(3) for x, y with (xy+)+ = ((xy)+x)+ and (xy+)* != ((xy)+x)*.
    FesWitness,
    /// Runs a corpus file, or the built-in corpus.
    CorpusRun {
        file: Option<PathBuf>,
        /// Write the built-in corpus to this file instead of running.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Generates a relation algebra and writes it as a semigroup document.
    Relgen {
        file: Option<PathBuf>,
        #[arg(long = "full-B", value_name = "N")]
        full_b: Option<usize>,
        #[arg(long = "full-PT", value_name = "N")]
        full_pt: Option<usize>,
        #[arg(long = "full-PTc", value_name = "N")]
        full_ptc: Option<usize>,
        #[arg(long = "full-I", value_name = "N")]
        full_i: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Subcommand)]
enum ProductCmd {
    Build {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum CoverCmd {
    Build {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Verify {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        len: usize,
    },
    Preimage(PreimageArgs),
}

#[derive(Args)]
struct PreimageArgs {
    file: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    gens: Vec<usize>,
    #[arg(long)]
    element: usize,
}

fn closure_cap() -> usize {
    std::env::var("EHRESMANN_MAX_CLOSURE")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_CLOSURE_CAP)
}

struct Out {
    json: bool,
}

impl Out {
    fn report(&self, rep: &Report) -> Verdict {
        if self.json {
            println!("{}", serde_json::to_string_pretty(rep).expect("serializable"));
        } else {
            print!("{rep}");
            println!("verdict: {:?}", rep.verdict());
        }
        rep.verdict()
    }

    fn reports(&self, reps: &[Report]) -> Verdict {
        if self.json {
            println!("{}", serde_json::to_string_pretty(reps).expect("serializable"));
        } else {
            for r in reps {
                print!("{r}");
            }
        }
        let v = reps.iter().map(|r| r.verdict()).max().unwrap_or(Verdict::Pass);
        if !self.json {
            println!("verdict: {v:?}");
        }
        v
    }

    fn value(&self, v: &Value, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
        } else {
            print!("{}", text());
        }
    }
}

fn load_semigroup(path: &Path) -> Result<OpTableSemigroup> {
    io::load_semigroup(&io::read(path)?, closure_cap())
}

fn load_graph(path: &Path) -> Result<ehresmann::resgraph::ResGraph> {
    match io::read(path)? {
        Document::Resgraph(d) => io::resgraph_from_doc(&d),
        Document::Premorphism(d) => actions::premorphism_to_graph(&io::premorphism_from_doc(&d)?),
        other => Err(Error::Input(format!("expected a graph, found {}", other.kind()))),
    }
}

fn membership(n: usize, ideal: &[usize]) -> Result<Vec<bool>> {
    if ideal.is_empty() {
        return Ok(vec![true; n]);
    }
    let mut y = vec![false; n];
    for &i in ideal {
        if i >= n {
            return Err(Error::OutOfRange {
                what: "element",
                index: i,
                size: n,
            });
        }
        y[i] = true;
    }
    Ok(y)
}

fn emit_doc(doc: &Document, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => io::write(p, doc),
        None => {
            println!("{}", io::to_string(doc));
            Ok(())
        }
    }
}

fn table_text(s: &OpTableSemigroup) -> String {
    let mut out = String::new();
    for a in s.elements() {
        let row: Vec<&str> = s.elements().map(|b| s.name(s.mul(a, b))).collect();
        out.push_str(&format!("  {:>8} | {}\n", s.name(a), row.join(" ")));
    }
    out
}

fn run(cli: Cli) -> Result<Verdict> {
    let out = Out { json: cli.json };
    match cli.command {
        Command::Verify {
            file,
            max_chain,
            restriction,
        } => {
            let doc = io::read(&file)?;
            let rep = match &doc {
                Document::Semigroup(_) | Document::Relgen(_) => {
                    let s = io::load_semigroup(&doc, closure_cap())?;
                    let mut rep = s.verify_ehresmann();
                    if let Some(side) = restriction {
                        let side = match side {
                            SideArg::Left => Side::Left,
                            SideArg::Right => Side::Right,
                            SideArg::Both => Side::Both,
                        };
                        rep.absorb("", s.verify_restriction(side));
                    }
                    rep
                }
                Document::Resgraph(d) => io::resgraph_from_doc(d)?.check_axioms(max_chain),
                Document::Premorphism(d) => {
                    let p = io::premorphism_from_doc(d)?;
                    actions::premorphism_to_graph(&p)?.check_axioms(max_chain)
                }
                Document::Corpus(_) => corpus::run_corpus(&corpus::from_doc(&doc)?, closure_cap()),
            };
            Ok(out.report(&rep))
        }
        Command::Analyze { file } => {
            let s = load_semigroup(&file)?;
            let proj = s.projections()?;
            let orders = s.natural_orders();
            let (sigma, quotient) = s.sigma_quotient();
            let proper = s.proper_elements(&sigma);
            let ehr = s.is_ehresmann();
            let left = s.is_left_restriction();
            let right = s.is_right_restriction();
            let strictly = s.is_strictly_proper();
            let v = json!({
                "size": s.len(),
                "ehresmann": ehr,
                "left_restriction": left,
                "right_restriction": right,
                "projections": proj.members(),
                "order_sizes": {"le_l": orders.le_l.count(), "le_r": orders.le_r.count(), "le": orders.le.count()},
                "sigma_classes": sigma.classes(),
                "quotient": io::semigroup_doc(&quotient),
                "proper": proper,
                "strictly_proper": strictly,
            });
            out.value(&v, || {
                let names = |xs: &[usize]| xs.iter().map(|&x| s.name(x)).collect::<Vec<_>>().join(", ");
                let mut t = format!("elements: {}\n", s.len());
                t += &format!("Ehresmann: {ehr}\nleft restriction: {left}\nright restriction: {right}\n");
                t += &format!("P(S) ({}): {}\n", proj.len(), names(proj.members()));
                t += &format!(
                    "order sizes: <=_l {}, <=_r {}, <= {}\n",
                    orders.le_l.count(),
                    orders.le_r.count(),
                    orders.le.count()
                );
                t += &format!("sigma classes ({}):\n", sigma.num_classes());
                for c in sigma.classes() {
                    t += &format!("  {{{}}}\n", names(&c));
                }
                t += "S/sigma:\n";
                t += &table_text(&quotient);
                let prop: Vec<usize> = s.elements().filter(|&x| proper[x]).collect();
                t += &format!("proper elements: {}\n", names(&prop));
                t += &format!("strictly proper: {strictly}\n");
                t
            });
            Ok(if ehr { Verdict::Pass } else { Verdict::Fail })
        }
        Command::Sigma { file, output } => {
            let s = load_semigroup(&file)?;
            let (sigma, quotient) = s.sigma_quotient();
            if let Some(p) = output {
                io::write(&p, &Document::Semigroup(io::semigroup_doc(&quotient)))?;
            }
            let v = json!({"classes": sigma.classes(), "quotient": io::semigroup_doc(&quotient)});
            out.value(&v, || {
                let mut t = format!("{} classes\n", sigma.num_classes());
                for (i, c) in sigma.classes().iter().enumerate() {
                    let names: Vec<&str> = c.iter().map(|&x| s.name(x)).collect();
                    t += &format!("  [{i}] {{{}}}\n", names.join(", "));
                }
                t + &table_text(&quotient)
            });
            Ok(Verdict::Pass)
        }
        Command::Factorize { file, seq, ideal, len } => {
            let s = load_semigroup(&file)?;
            if !ideal.is_empty() {
                membership(s.len(), &ideal)?;
                let rep = s.check_proper_ideal(&ideal, FactorizationBudget::new(len))?;
                return Ok(out.report(&rep));
            }
            if seq.is_empty() {
                return Err(Error::Input("give --seq or --ideal".into()));
            }
            for &x in &seq {
                if x >= s.len() {
                    return Err(Error::OutOfRange {
                        what: "element",
                        index: x,
                        size: s.len(),
                    });
                }
            }
            let m = s.matchify(&seq)?;
            let v = json!({"input": seq, "matching": m, "product": s.product(&m)});
            out.value(&v, || {
                let names: Vec<&str> = m.iter().map(|&x| s.name(x)).collect();
                format!(
                    "matching: {}\nproduct: {}\n",
                    names.join(" . "),
                    s.name(s.product(&m).expect("nonempty"))
                )
            });
            Ok(Verdict::Pass)
        }
        Command::GraphCheck { file, max_chain, paths } => {
            let g = load_graph(&file)?;
            Ok(out.reports(&[g.check_axioms(max_chain), g.check_path_axioms(paths), g.check_edge_orders()]))
        }
        Command::Product { action } => match action {
            ProductCmd::Build { file, output } => {
                let g = load_graph(&file)?;
                let s = product::build_product(&g)?;
                emit_doc(&Document::Semigroup(io::semigroup_doc(&s)), output.as_deref())?;
                Ok(Verdict::Pass)
            }
            ProductCmd::Check { file } => {
                let g = load_graph(&file)?;
                let s = product::build_product(&g)?;
                let mut rep = product::check_construction_claims(&g, &s);
                match product::check_properness_criterion(&g) {
                    Ok(o) => rep.push("properness criterion", o),
                    Err(e) => rep.note(format!("properness criterion not applicable: {e}")),
                }
                Ok(out.report(&rep))
            }
        },
        Command::Cover { action } => match action {
            CoverCmd::Build { file, gens, output } => {
                let s = load_semigroup(&file)?;
                let c = cover::build_cover_graph(&s, &gens)?;
                emit_doc(&Document::Resgraph(io::resgraph_doc(c.graph())), output.as_deref())?;
                Ok(Verdict::Pass)
            }
            CoverCmd::Verify { file, gens, len } => {
                let s = load_semigroup(&file)?;
                Ok(out.report(&cover::verify_cover(&s, &gens, len)?))
            }
            CoverCmd::Preimage(args) => preimage(&out, args),
        },
        Command::Iso { file, ideal } => {
            let s = load_semigroup(&file)?;
            let y = membership(s.len(), &ideal)?;
            Ok(out.report(&product::structure_iso_check(&s, &y)?))
        }
        Command::Preimage(args) => preimage(&out, args),
        Command::Actions { file } => {
            let g = load_graph(&file)?;
            let mut rep = Report::new("actions");
            let det = actions::check_determinism(&g);
            rep.note(format!("LD: {}, RD: {}", det.ld, det.rd));
            rep.push("sigma iff label", actions::check_sigma_iff_label(&g)?);
            let c = actions::classify_restriction(&g)?;
            rep.note(format!(
                "left restriction: {}, right restriction: {}, proper left: {}, proper right: {}, strictly proper: {}",
                c.left, c.right, c.proper_left, c.proper_right, c.strictly_proper
            ));
            rep.push(
                "LD iff proper left, RD iff proper right",
                if c.agrees() {
                    ehresmann::Outcome::Pass
                } else {
                    ehresmann::Outcome::fail(Vec::new(), "determinism and restriction class disagree")
                },
            );
            let p = actions::graph_to_premorphism(&g)?;
            let mut reps = vec![rep];
            if p.is_partial_action() {
                reps.push(actions::check_partial_action_laws(&p));
                reps.push(actions::pair_form_iso(&p)?);
            }
            Ok(out.reports(&reps))
        }
        Command::SigmaSearch { seed, trials } => {
            let r = actions::search_sigma_violation(seed, trials);
            let mut rep = Report::new("sigma search");
            rep.note(format!(
                "seed {seed}: {} trials, {} valid graphs, {} deterministic",
                r.trials, r.valid, r.deterministic
            ));
            match r.violation {
                Some((g, w)) => {
                    rep.note(format!("graph:\n{g}"));
                    rep.push("sigma iff label on sampled graphs", ehresmann::Outcome::Fail { witness: w });
                }
                None => rep.note("no graph with sigma coarser than label equality found"),
            }
            Ok(out.report(&rep))
        }
        Command::FesWitness => {
            let (rep, _) = cover::fes_witness_check()?;
            Ok(out.report(&rep))
        }
        Command::CorpusRun { file, write } => {
            if let Some(p) = write {
                io::write(&p, &corpus::to_doc(&corpus::builtin()))?;
                return Ok(Verdict::Pass);
            }
            let entries = match file {
                Some(f) => corpus::from_doc(&io::read(&f)?)?,
                None => corpus::builtin(),
            };
            Ok(out.report(&corpus::run_corpus(&entries, closure_cap())))
        }
        Command::Relgen {
            file,
            full_b,
            full_pt,
            full_ptc,
            full_i,
            output,
        } => {
            let alg = match (file, full_b, full_pt, full_ptc, full_i) {
                (Some(f), None, None, None, None) => match io::read(&f)? {
                    Document::Relgen(d) => io::relgen_from_doc(&d, closure_cap())?,
                    other => return Err(Error::Input(format!("expected relgen, found {}", other.kind()))),
                },
                (None, Some(n), None, None, None) => full(n, RelationAlgebra::full_b)?,
                (None, None, Some(n), None, None) => full(n, RelationAlgebra::full_pt)?,
                (None, None, None, Some(n), None) => full(n, RelationAlgebra::full_ptc)?,
                (None, None, None, None, Some(n)) => full(n, RelationAlgebra::full_i)?,
                _ => return Err(Error::Input("give exactly one of FILE, --full-B, --full-PT, --full-PTc, --full-I".into())),
            };
            let s = alg.semigroup().clone().with_names(alg.elements().iter().map(BinaryRelation::to_string).collect())?;
            emit_doc(&Document::Semigroup(io::semigroup_doc(&s)), output.as_deref())?;
            Ok(Verdict::Pass)
        }
    }
}

fn full(n: usize, make: fn(usize) -> Result<RelationAlgebra>) -> Result<RelationAlgebra> {
    if n > 3 {
        return Err(Error::Input("full algebras are limited to ground size 3".into()));
    }
    make(n)
}

fn preimage(out: &Out, args: PreimageArgs) -> Result<Verdict> {
    let s = load_semigroup(&args.file)?;
    let c = cover::build_cover_graph(&s, &args.gens)?;
    let u = c.canonical_preimage(args.element)?;
    let image = c.phi(&u);
    let ok = image == args.element;
    let v = json!({"element": args.element, "form": c.to_json(&u), "phi": image, "verified": ok});
    out.value(&v, || format!("{}\nphi = {} ({})\n", c.display(&u), s.name(image), if ok { "verified" } else { "MISMATCH" }));
    Ok(if ok { Verdict::Pass } else { Verdict::Fail })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(v) => ExitCode::from(v.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
