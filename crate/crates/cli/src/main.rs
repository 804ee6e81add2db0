//! `khtree`: spanning-tree models of Khovanov homology from the command line.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use khtree::diagram::{medial, parse_pd, Diagram, SignedPlanarGraph};
use khtree::fixtures;
use khtree::khovanov::{bracket_state_sum, homology, KhComplex};
use khtree::matroid::{compare_e2, conjecture_probe};
use khtree::tree_complex::{collapse_to_tree_complex, ladders, poset, CycleTable, LadderLimits, SpectralSequence, TreeModel, Variant};
use khtree::trees::{bracket_by_trees, canonical_graph, jones, tree_table};
use khtree::verify::{self, FixtureSet, CRITERIA};
use khtree::Error;

#[derive(Parser, Debug)]
#[command(name = "khtree", version, about = "Khovanov homology through spanning trees of the Tait graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input files: PD codes (`X a b c d` lines) or signed plane graphs
    /// (`.graph`). A built-in fixture name such as `4_1` or `figure8` also works.
    #[arg(long, short, global = true, env = "KHTREE_INPUT", value_delimiter = ',')]
    input: Vec<String>,

    /// Arc label carrying the basepoint.
    #[arg(long, global = true, env = "KHTREE_BASEPOINT")]
    basepoint: Option<u32>,

    /// Edge order as a 1-based permutation, e.g. `2,1,4,3`: new edge i is old edge order[i].
    #[arg(long, global = true, env = "KHTREE_EDGE_ORDER")]
    edge_order: Option<String>,

    /// Use the reduced complex.
    #[arg(long, global = true, env = "KHTREE_REDUCED", overrides_with = "unreduced")]
    reduced: bool,

    /// Use the unreduced complex (the default).
    #[arg(long, global = true, overrides_with = "reduced")]
    unreduced: bool,

    /// Spectral sequence page.
    #[arg(long, global = true, env = "KHTREE_PAGE", default_value_t = 2)]
    page: usize,

    /// Maximum ladder length.
    #[arg(long, global = true, env = "KHTREE_KMAX", default_value_t = 3)]
    kmax: usize,

    #[arg(long, global = true, env = "KHTREE_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for randomized checks.
    #[arg(long, global = true, env = "KHTREE_SEED", default_value_t = 2024)]
    seed: u64,

    /// Refuse diagrams with more crossings than this.
    #[arg(long, global = true, env = "KHTREE_MAX_CROSSINGS", default_value_t = 14)]
    max_crossings: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spanning trees with activity words, gradings and monomials.
    Trees,
    /// Kauffman bracket as a sum over spanning trees.
    Bracket,
    /// Jones polynomial.
    Jones,
    /// Khovanov homology from enhanced states.
    Homology,
    /// A page of the spanning-tree spectral sequence (reduced).
    Ss,
    /// The complex spanned by fundamental cycles, with its induced differential.
    Collapse,
    /// Ladders between two trees of the reduced complex.
    Ladders {
        /// Upper tree (1-based). With `--to`; otherwise every nonzero induced entry is explained.
        #[arg(long, requires = "to")]
        from: Option<usize>,
        /// Lower tree (1-based).
        #[arg(long, requires = "from")]
        to: Option<usize>,
        /// Follow collapse pivots instead of original incidences.
        #[arg(long)]
        pivots: bool,
        /// Search node budget.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Whether two diagrams have isomorphic colored Tait matroids. Exit 1 if not.
    Mutants,
    /// Compare collapsed differentials of two mutants entry by entry. Without inputs, runs the built-in pairs.
    Probe,
    /// Run the acceptance suite.
    Verify {
        /// Run one criterion.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(CRITERIA))]
        only: Option<String>,
        /// Directory of `*.pd` fixtures and `figure8.graph`, instead of the built-in set.
        #[arg(long, env = "KHTREE_FIXTURES")]
        fixtures: Option<PathBuf>,
    },
}

enum Input {
    Pd(Diagram),
    Graph(SignedPlanarGraph),
}

impl Input {
    fn crossings(&self) -> usize {
        match self {
            Input::Pd(d) => d.crossing_count(),
            Input::Graph(g) => g.edge_count(),
        }
    }
}

fn read_input(name: &str) -> anyhow::Result<Input> {
    let path = Path::new(name);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {name}"))?;
        return if path.extension().is_some_and(|e| e == "graph") {
            Ok(Input::Graph(SignedPlanarGraph::parse(&text).with_context(|| name.to_string())?))
        } else {
            Ok(Input::Pd(parse_pd(&text).with_context(|| name.to_string())?))
        };
    }
    if name == "figure8" {
        return Ok(Input::Graph(fixtures::figure8_graph()));
    }
    match fixtures::pd_text(name) {
        Some(text) => Ok(Input::Pd(parse_pd(text)?)),
        None => bail!("{name}: no such file or built-in fixture"),
    }
}

fn parse_order(text: &str) -> anyhow::Result<Vec<usize>> {
    text.split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k - 1),
            _ => Err(anyhow!("edge order entry `{s}` is not a positive integer")),
        })
        .collect()
}

impl Cli {
    fn reduced(&self) -> bool {
        self.reduced && !self.unreduced
    }

    fn inputs(&self) -> anyhow::Result<Vec<Input>> {
        let inputs: Vec<Input> = self.input.iter().map(|s| read_input(s)).collect::<anyhow::Result<_>>()?;
        for i in &inputs {
            if i.crossings() > self.max_crossings {
                return Err(Error::TooLarge {
                    crossings: i.crossings(),
                    limit: self.max_crossings,
                }
                .into());
            }
        }
        Ok(inputs)
    }

    fn one_input(&self) -> anyhow::Result<Input> {
        let mut inputs = self.inputs()?;
        if inputs.len() != 1 {
            bail!("expected one --input, got {}", inputs.len());
        }
        Ok(inputs.remove(0))
    }

    /// Diagram and Tait graph with the edge order and basepoint applied.
    fn model(&self) -> anyhow::Result<TreeModel> {
        let (mut d, mut g) = match self.one_input()? {
            Input::Pd(d) => {
                let g = canonical_graph(&d);
                (d, g)
            }
            Input::Graph(g) => (medial(&g), g),
        };
        if let Some(text) = &self.edge_order {
            let order = parse_order(text)?;
            g = g.reorder_edges(&order)?;
            d = d.reorder_crossings(&order)?;
        }
        if let Some(label) = self.basepoint {
            d = d.with_basepoint(label)?;
        }
        Ok(TreeModel::with_graph(d, g)?)
    }

    fn diagram(&self) -> anyhow::Result<Diagram> {
        Ok(self.model()?.diagram)
    }

    fn pair(&self) -> anyhow::Result<Option<(Diagram, Diagram)>> {
        let inputs = self.inputs()?;
        let diagram = |i: Input| -> anyhow::Result<Diagram> {
            let d = match i {
                Input::Pd(d) => d,
                Input::Graph(g) => medial(&g),
            };
            Ok(match self.basepoint {
                Some(label) => d.with_basepoint(label)?,
                None => d,
            })
        };
        match inputs.len() {
            0 => Ok(None),
            2 => {
                let mut it = inputs.into_iter();
                let a = diagram(it.next().unwrap())?;
                let b = diagram(it.next().unwrap())?;
                Ok(Some((a, b)))
            }
            n => bail!("expected two --input values, got {n}"),
        }
    }
}

/// What a subcommand prints, and its exit status.
struct Emission {
    json: Value,
    table: String,
    code: u8,
}

impl Emission {
    fn ok(json: Value, table: String) -> Self {
        Emission { json, table, code: 0 }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Emission> {
    match &cli.command {
        Command::Trees => {
            let m = cli.model()?;
            let rows = tree_table(&m.graph)?;
            let mut t = format!(
                "{:>5}  {:<w$}  {:>4} {:>4}  {:<12} {}\n",
                "tree",
                "word",
                "u",
                "v",
                "monomial",
                "smoothing",
                w = m.crossing_count().max(4)
            );
            for r in &rows {
                let _ = writeln!(
                    t,
                    "{:>5}  {:<w$}  {:>4} {:>4}  {:<12} {}",
                    r.index,
                    r.word,
                    r.u,
                    r.v,
                    r.monomial,
                    r.smoothing,
                    w = m.crossing_count().max(4)
                );
            }
            Ok(Emission::ok(serde_json::to_value(&rows)?, t))
        }
        Command::Bracket => {
            let m = cli.model()?;
            let b = bracket_by_trees(&m.graph)?;
            let agrees = b == bracket_state_sum(&m.diagram);
            let table = format!("<D> = {b}\nwrithe {}\nstate sum agrees: {agrees}\n", m.diagram.writhe());
            Ok(Emission::ok(
                json!({ "bracket": b, "text": b.to_string(), "writhe": m.diagram.writhe(), "state_sum_agrees": agrees }),
                table,
            ))
        }
        Command::Jones => {
            let v = jones(&cli.diagram()?)?;
            Ok(Emission::ok(json!({ "jones_half_t": v, "text": v.to_string() }), format!("V(t) = {v}\n")))
        }
        Command::Homology => {
            let d = cli.diagram()?;
            let h = homology(&KhComplex::new(&d, cli.reduced()))?;
            let chi = h.euler_characteristic();
            let table = format!("{}chi = {chi}\n", h.to_table());
            Ok(Emission::ok(
                json!({ "reduced": cli.reduced(), "groups": h, "total_rank": h.total_rank(), "euler_characteristic": chi }),
                table,
            ))
        }
        Command::Ss => {
            let m = cli.model()?;
            let ss = SpectralSequence::new(&m)?;
            let page = ss.page(cli.page)?;
            let shift = m.grading_shift();
            let deltas: BTreeSet<i64> = page
                .ranks()
                .keys()
                .map(|&(_, u, v)| {
                    let (i, j) = shift.to_kh((u, v));
                    j - 2 * i
                })
                .collect();
            let mut t = format!("E_{}: {} generators, delta = j - 2i in {:?}\n", page.r, page.total_rank(), deltas);
            for (&(p, u, v), g) in &page.groups {
                if !g.is_zero() {
                    let _ = write!(t, "p {p:>2}  u {u:>4}  v {v:>4}  Z^{}", g.rank);
                    for x in &g.torsion {
                        let _ = write!(t, " + Z/{x}");
                    }
                    t.push('\n');
                }
            }
            Ok(Emission::ok(json!({ "page": page, "total_rank": page.total_rank(), "deltas": deltas }), t))
        }
        Command::Collapse => {
            let m = cli.model()?;
            let c = collapse_to_tree_complex(&m, cli.reduced())?;
            let mut t = format!("{} generators, {} nonzero entries\n", c.generators.len(), c.differential.len());
            for &(a, b, v) in &c.differential {
                let (x, y) = (&c.generators[a], &c.generators[b]);
                let _ = writeln!(t, "T{}{:?} -> T{}{:?}: {v}", x.tree + 1, x.variant, y.tree + 1, y.variant);
            }
            Ok(Emission::ok(serde_json::to_value(&c)?, t))
        }
        Command::Ladders { from, to, pivots, budget } => {
            let m = cli.model()?;
            let table = CycleTable::new(&m, true)?;
            let p = poset(&m)?;
            let collapsed = collapse_to_tree_complex(&m, true)?;
            let pairs: Vec<(usize, usize)> = match (from, to) {
                (Some(a), Some(b)) => {
                    let n = m.tree_count();
                    if *a == 0 || *b == 0 || *a > n || *b > n {
                        bail!("trees are numbered 1..={n}");
                    }
                    vec![(a - 1, b - 1)]
                }
                _ => collapsed
                    .differential
                    .iter()
                    .map(|&(a, b, _)| (collapsed.generators[a].tree, collapsed.generators[b].tree))
                    .collect(),
            };
            let limits = LadderLimits {
                kmax: cli.kmax,
                budget: *budget,
                pivots_only: *pivots,
            };
            let mut reports = Vec::new();
            let mut t = String::new();
            for (a, b) in pairs {
                let r = ladders(&m, &table, &p, &collapsed, (a, b), limits)?;
                let entry = collapsed.entry(collapsed.index_of(a, Variant::Plus), collapsed.index_of(b, Variant::Plus));
                let _ = writeln!(
                    t,
                    "T{} {} -> T{} {}: {} ladders, sum {}, induced entry {entry}{}",
                    a + 1,
                    m.words[a],
                    b + 1,
                    m.words[b],
                    r.ladders.len(),
                    r.matched_sum,
                    if r.truncated { " (truncated)" } else { "" }
                );
                reports.push(json!({ "report": r, "induced_entry": entry }));
            }
            Ok(Emission::ok(Value::Array(reports), t))
        }
        Command::Mutants => {
            let (a, b) = cli.pair()?.ok_or_else(|| anyhow!("mutants needs two --input values"))?;
            let r = compare_e2(&a, &b)?;
            let mutants = r.witness.is_some();
            let table = match &r.witness {
                Some(w) => format!(
                    "mutants: yes\nwitness (edge i -> edge w[i], 1-based): {:?}\nE2 equal: {}\n",
                    w.iter().map(|x| x + 1).collect::<Vec<_>>(),
                    r.equal
                ),
                None => format!("mutants: no\nE2 equal: {}\n", r.equal),
            };
            Ok(Emission {
                json: json!({ "mutants": mutants, "e2": r }),
                table,
                code: if mutants { 0 } else { 1 },
            })
        }
        Command::Probe => match cli.pair()? {
            Some((a, b)) => {
                let r = match conjecture_probe(&a, &b) {
                    Err(Error::NotIsomorphic) => {
                        return Ok(Emission {
                            json: json!({ "mutants": false }),
                            table: "not mutants; nothing to compare\n".into(),
                            code: 1,
                        })
                    }
                    r => r?,
                };
                let table = format!(
                    "{} trees, {} entries compared: {} agree, {} differ in sign, {} differ otherwise, {} unmatched trees\n",
                    r.trees,
                    r.compared,
                    r.agreements,
                    r.sign_differences.len(),
                    r.disagreements.len(),
                    r.unmatched_trees
                );
                Ok(Emission::ok(serde_json::to_value(&r)?, table))
            }
            None => {
                let e = verify::probe_evidence(&FixtureSet::builtin())?;
                let mut t = String::new();
                for x in &e {
                    let _ = writeln!(
                        t,
                        "{:<16} compared {:>4}  agree {:>4}  sign {:>3}  other {:>3}  unmatched {}",
                        x.pair, x.compared, x.agreements, x.sign_differences, x.disagreements, x.unmatched_trees
                    );
                }
                Ok(Emission::ok(serde_json::to_value(&e)?, t))
            }
        },
        Command::Verify { only, fixtures } => {
            let fx = match fixtures {
                Some(dir) => FixtureSet::from_dir(dir).with_context(|| format!("reading {}", dir.display()))?,
                None => FixtureSet::builtin(),
            };
            let reports = match only {
                Some(key) => verify::run_criterion(key, &fx, cli.seed).into_iter().collect(),
                None => verify::run_all(&fx, cli.seed),
            };
            let all = reports.iter().all(|r| r.passed);
            Ok(Emission {
                json: json!({ "passed": all, "criteria": reports }),
                table: verify::summary(&reports),
                code: if all { 0 } else { 1 },
            })
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::TooLarge { .. }) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("values serialize")),
                Format::Table => print!("{}", out.table),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("khtree: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
