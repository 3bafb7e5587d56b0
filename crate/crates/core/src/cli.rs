//! Command-line front end. Every command produces a [`Report`], printed as
//! sorted-key JSON with `--json` and as aligned text otherwise.
//!
//! Exit codes: 0 on success or pass, 1 on a verification mismatch, 2 on
//! usage or input errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::catalog::{build_presentation, catalog_entries, forbidden_first, forbidden_second, named_endo, named_homs, Family, NamedHom};
use crate::crystal::{conjugate_test, element_order, eval_affine, order_three_box, verify_identity, AffineElement, CrystModel};
use crate::error::{Error, Result};
use crate::golden::{self, model_for, parse_list, parse_matrix};
use crate::homsearch::{classify_presentation, descends, HomFilter, Homomorphism, Verdict};
use crate::intlin::IntMatrix;
use crate::kernelab::{abelianization, certify, kernel_abelianization_report};
use crate::perms::Permutation;
use crate::reptheory::{
    complement_index, decompose, inner_product, isotypic_sublattice, permutation_character, quotient_action, render_rational,
    s4_character_table, ClassFunction,
};
use crate::twisted::{
    abelian_twisted_count, quotient_tower, random_abelian_instance, reidemeister_lattice, twisted_classes_finite, FiniteGroupTable,
};
use crate::words::{parse_presentation, Presentation};

#[derive(Debug, Parser)]
#[command(
    name = "virtbraid",
    version,
    about = "Exact computations for virtual, welded and twin braid groups"
)]
struct Cli {
    /// Emit JSON (sorted keys) instead of aligned text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel stages.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Include wall-clock time in the report (output is then not reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GroupArgs {
    /// Catalog family (VB, WB, UVB, VT, SYM, VB3_MOD_VP3COMM, VB3_MOD_KB3COMM, WALLPAPER_G).
    #[arg(long)]
    family: Option<String>,
    /// Number of strands.
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Read the presentation from a DSL file instead of the catalog.
    #[arg(long, value_name = "FILE")]
    dsl: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List catalog presentations or show one.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Homomorphisms to S_k up to conjugacy (k <= 4).
    Homs {
        #[command(flatten)]
        group: GroupArgs,
        /// Target degree; defaults to n.
        #[arg(long)]
        target: Option<usize>,
        /// all, nonabelian or surjective.
        #[arg(long, default_value = "all")]
        filter: String,
    },
    /// Abelian invariants of the kernel of a homomorphism.
    KernelAb {
        #[command(flatten)]
        group: GroupArgs,
        /// Catalog name of the homomorphism.
        #[arg(long)]
        hom: Option<String>,
        /// Generator images as cycles separated by `;`, e.g. "(1,2);(2,3)".
        #[arg(long)]
        images: Option<String>,
        /// Degree of the images.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Which named homomorphisms of VB_n kill the forbidden relators.
    Descend {
        #[arg(long)]
        n: usize,
    },
    /// Certificate that the kernel of a named homomorphism is characteristic.
    Characteristic {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        hom: String,
        /// Class set to compare against: surjective, nonabelian or all.
        #[arg(long, default_value = "surjective")]
        filter: String,
    },
    /// Character theory of the pair module.
    Character {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[command(subcommand)]
        action: CharacterAction,
    },
    /// Isotypic sublattice of the degree-4 pair module and the induced quotient action.
    Isotypic {
        /// Components among 1..5, e.g. 1,3,4.
        #[arg(long)]
        components: String,
    },
    /// Crystallographic quotient models.
    Crystal {
        #[command(flatten)]
        group: GroupArgs,
        #[command(subcommand)]
        action: CrystalAction,
    },
    /// Twisted conjugacy classes. Quotient towers are capped at 20000 elements
    /// (k <= 3 for the 6-dimensional model, k <= 100 for the wallpaper model).
    Reidemeister {
        #[command(subcommand)]
        action: ReidemeisterAction,
    },
    /// Recompute the reference values, optionally one section.
    VerifyPaper {
        /// 1, 3, 4.1, 4.2, 4.3 or appendix.
        #[arg(long)]
        section: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    List,
    Show {
        #[command(flatten)]
        group: GroupArgs,
    },
}

#[derive(Debug, Subcommand)]
enum CharacterAction {
    Table,
    PermChar,
    Decompose,
    Isotypic { components: String },
}

#[derive(Debug, Subcommand)]
enum CrystalAction {
    /// Solve or build the model and re-check every relator.
    Relcheck,
    /// Order of the element represented by a word.
    Order { word: String },
    /// Conjugacy of two words' elements, with a witness.
    Conj { w1: String, w2: String },
    /// Equality of two words in the model.
    Identity { w1: String, w2: String },
    /// Every order-3 element with coordinates in [-bound, bound] is conjugate to v1 v2.
    Box {
        #[arg(long, default_value_t = 2)]
        bound: i64,
    },
}

#[derive(Debug, Subcommand)]
enum ReidemeisterAction {
    /// Brute force on S_n (identity endomorphism) or on a finite abelian group.
    Finite {
        #[arg(long, conflicts_with = "abelian")]
        symmetric: Option<usize>,
        /// Factor orders, e.g. 2,2.
        #[arg(long, requires = "matrix")]
        abelian: Option<String>,
        /// Endomorphism matrix on the factors, rows separated by `;`.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// |det(I - A)| or INFINITE.
    Lattice {
        #[arg(long)]
        matrix: String,
    },
    /// Counts on (Z_k)^m x| S_n for each k.
    Tower {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value = "identity")]
        endo: String,
        #[arg(long, default_value = "2,3,4,5")]
        ks: String,
    },
    /// Random abelian instances: union-find count against the Smith form.
    AbelianCheck {
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "n/a",
        }
    }
}

/// Output of one command.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub status: Status,
    pub elapsed_ms: Option<u128>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "status": self.status.label(),
        });
        if let Some(ms) = self.elapsed_ms {
            v["elapsed_ms"] = json!(ms as u64);
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        render_text(&self.to_json(), 0, &mut out);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.is_empty() => Some("[]".into()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            Some(items.iter().map(|i| scalar(i).expect("scalar")).collect::<Vec<_>>().join(", "))
        }
        _ => None,
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k:<width$}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(item, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).expect("scalar"))),
    }
}

/// Parses `argv` (program name first), runs the command and writes the
/// report to standard output.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let start = Instant::now();
    match execute(&cli) {
        Ok(mut report) => {
            if cli.timing {
                report.elapsed_ms = Some(start.elapsed().as_millis());
            }
            let text = if cli.json {
                serde_json::to_string_pretty(&report.to_json()).expect("serializable") + "\n"
            } else {
                report.to_text()
            };
            let _ = out.write_all(text.as_bytes());
            match report.status {
                Status::Fail => 1,
                _ => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn family(name: &Option<String>) -> Result<Family> {
    name.as_deref()
        .ok_or_else(|| Error::Unsupported("--family is required".into()))?
        .parse()
}

fn read_dsl(path: &str) -> Result<Presentation> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Unsupported(format!("cannot read {path}: {e}")))?;
    parse_presentation(&text)
}

/// The presentation and its catalog names (empty for DSL input).
fn group(g: &GroupArgs) -> Result<(Presentation, Vec<NamedHom>)> {
    if let Some(path) = &g.dsl {
        return Ok((read_dsl(path)?, Vec::new()));
    }
    let f = family(&g.family)?;
    let p = build_presentation(f, g.n)?;
    let named = named_homs(f, g.n).unwrap_or_default();
    Ok((p, named))
}

fn group_inputs(g: &GroupArgs) -> Value {
    match &g.dsl {
        Some(path) => json!({ "dsl": path }),
        None => json!({ "family": g.family, "n": g.n }),
    }
}

fn hom_json(p: &Presentation, h: &Homomorphism) -> Value {
    let images: BTreeMap<String, String> = h.describe(p).into_iter().collect();
    json!(images)
}

fn vector_json(m: &CrystModel, e: &AffineElement) -> Value {
    let labels: Vec<String> = (0..m.dimension()).map(|k| m.module.label(k)).collect();
    json!({ "basis": labels, "vector": e.vector, "perm": e.perm.to_string() })
}

fn class_function_json(c: &ClassFunction) -> Value {
    json!(c.rendered())
}

fn matrix_json(m: &IntMatrix) -> Value {
    json!(m
        .row_vecs()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn report(command: &str, inputs: Value, results: Value, status: Status) -> Report {
    Report {
        command: command.into(),
        inputs,
        results,
        status,
        elapsed_ms: None,
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Catalog {
            action: CatalogAction::List,
        } => {
            let entries: Vec<Value> = catalog_entries()
                .into_iter()
                .map(|(f, n)| {
                    let p = build_presentation(f, n).expect("catalog entry");
                    json!({ "family": f.as_str(), "n": n, "name": p.name, "generators": p.generator_count(), "relators": p.relator_count() })
                })
                .collect();
            Ok(report(
                "catalog list",
                json!({}),
                json!({ "entries": entries }),
                Status::NotApplicable,
            ))
        }
        Command::Catalog {
            action: CatalogAction::Show { group: g },
        } => {
            let (p, named) = group(g)?;
            let relators: Vec<String> = p.relators.iter().map(|r| p.render_word(r)).collect();
            let homs: Vec<Value> = named
                .iter()
                .map(|h| json!({ "name": h.name, "images": hom_json(&p, &h.hom) }))
                .collect();
            Ok(report(
                "catalog show",
                group_inputs(g),
                json!({
                    "name": p.name,
                    "generators": p.generator_names(),
                    "relators": relators,
                    "abelianization": abelianization(&p).gap_format(),
                    "named_homs": homs,
                    "dsl": p.to_dsl(),
                }),
                Status::NotApplicable,
            ))
        }
        Command::Homs { group: g, target, filter } => {
            let (p, named) = group(g)?;
            let k = target.unwrap_or(g.n);
            let filter: HomFilter = filter.parse()?;
            let named = if k == g.n { named } else { Vec::new() };
            let (classes, total) = classify_presentation(&p, k, &named)?;
            let kept: Vec<Value> = classes
                .iter()
                .filter(|c| filter.keeps(c))
                .map(|c| {
                    json!({
                        "images": hom_json(&p, &c.representative),
                        "orbit_size": c.orbit_size,
                        "surjective": c.surjective,
                        "abelian_image": c.abelian_image,
                        "name": c.matched_name,
                    })
                })
                .collect();
            let mut inputs = group_inputs(g);
            inputs["target"] = json!(k);
            inputs["filter"] = json!(format!("{filter:?}").to_lowercase());
            Ok(report(
                "homs",
                inputs,
                json!({ "homomorphisms": total, "classes_total": classes.len(), "count": kept.len(), "classes": kept }),
                Status::NotApplicable,
            ))
        }
        Command::KernelAb {
            group: g,
            hom,
            images,
            degree,
        } => {
            let (p, named) = group(g)?;
            let h = match (hom, images) {
                (Some(name), None) => named
                    .iter()
                    .find(|h| &h.name == name)
                    .ok_or_else(|| Error::UnknownName(name.clone()))?
                    .hom
                    .clone(),
                (None, Some(text)) => {
                    let d = degree.ok_or_else(|| Error::Unsupported("--images needs --degree".into()))?;
                    let perms = text
                        .split(';')
                        .map(|t| Permutation::parse_cycles(d, t.trim()))
                        .collect::<Result<Vec<_>>>()?;
                    Homomorphism::new(&p, perms)?
                }
                _ => return Err(Error::Unsupported("give exactly one of --hom and --images".into())),
            };
            let r = kernel_abelianization_report(&p, &h)?;
            let mut inputs = group_inputs(g);
            inputs["hom"] = hom_json(&p, &h);
            Ok(report(
                "kernel-ab",
                inputs,
                json!({
                    "invariants": r.invariants.gap_format(),
                    "group": r.invariants.to_string(),
                    "index": r.index,
                    "schreier_generators": r.schreier_generators,
                    "matrix_shape": [r.matrix_shape.0, r.matrix_shape.1],
                }),
                Status::NotApplicable,
            ))
        }
        Command::Descend { n } => {
            let p = build_presentation(Family::VB, *n)?;
            let first = forbidden_first(&p, *n);
            let both: Vec<_> = first.iter().cloned().chain(forbidden_second(&p, *n)).collect();
            let rows: Vec<Value> = named_homs(Family::VB, *n)?
                .iter()
                .map(|h| json!({ "name": h.name, "welded": descends(&h.hom, &first), "unrestricted": descends(&h.hom, &both) }))
                .collect();
            Ok(report("descend", json!({ "n": n }), json!({ "homs": rows }), Status::NotApplicable))
        }
        Command::Characteristic { group: g, hom, filter } => {
            let (p, named) = group(g)?;
            let filter: HomFilter = filter.parse()?;
            let c = certify(&p, g.n, &named, hom, filter)?;
            let classes: Vec<Value> = c
                .classes
                .iter()
                .zip(&c.invariants)
                .map(|(cl, inv)| json!({ "name": cl.matched_name, "images": hom_json(&p, &cl.representative), "invariants": inv.gap_format() }))
                .collect();
            let offenders: Vec<Value> = match &c.verdict {
                Verdict::Certified => Vec::new(),
                Verdict::NotCertified(o) => o
                    .iter()
                    .map(|x| json!({ "class": x.index, "name": x.name, "reason": x.reason }))
                    .collect(),
            };
            let mut inputs = group_inputs(g);
            inputs["hom"] = json!(hom);
            inputs["filter"] = json!(format!("{filter:?}").to_lowercase());
            Ok(report(
                "characteristic",
                inputs,
                json!({ "verdict": c.verdict.label(), "target_class": c.target, "classes": classes, "offenders": offenders }),
                Status::NotApplicable,
            ))
        }
        Command::Character { n, action } => character(*n, action),
        Command::Isotypic { components } => isotypic(components),
        Command::Crystal { group: g, action } => crystal(g, action),
        Command::Reidemeister { action } => reidemeister(action, cli.seed),
        Command::VerifyPaper { section } => {
            let g = golden::load()?;
            let outcomes = golden::run(&g, section.as_deref())?;
            let failed = outcomes.iter().filter(|o| !o.pass).count();
            let checks: Vec<Value> = outcomes.iter().map(|o| serde_json::to_value(o).expect("serializable")).collect();
            Ok(report(
                "verify-paper",
                json!({ "section": section.clone().unwrap_or_else(|| "all".into()) }),
                json!({ "checks": checks, "passed": outcomes.len() - failed, "failed": failed }),
                if failed == 0 { Status::Pass } else { Status::Fail },
            ))
        }
    }
}

fn character(n: usize, action: &CharacterAction) -> Result<Report> {
    let module = crate::crystal::perm_module(n)?;
    let chi = permutation_character(&module);
    let classes: Vec<String> = crate::perms::conjugacy_classes(n)
        .iter()
        .map(|c| c.representative.to_string())
        .collect();
    let results = match action {
        CharacterAction::Table => {
            if n != 4 {
                return Err(Error::Unsupported("the character table is available for n = 4 only".into()));
            }
            let rows: Vec<Value> = s4_character_table().iter().map(class_function_json).collect();
            json!({ "classes": classes, "characters": rows })
        }
        CharacterAction::PermChar => json!({ "classes": classes, "character": class_function_json(&chi) }),
        CharacterAction::Decompose => {
            let products: Vec<String> = s4_character_table()
                .iter()
                .map(|c| inner_product(&chi, c).map(|q| render_rational(&q)))
                .collect::<Result<_>>()?;
            json!({ "character": class_function_json(&chi), "inner_products": products, "multiplicities": decompose(&chi)? })
        }
        CharacterAction::Isotypic { components } => {
            if n != 4 {
                return Err(Error::Unsupported("isotypic sublattices need n = 4".into()));
            }
            return isotypic(components);
        }
    };
    Ok(report("character", json!({ "n": n }), results, Status::NotApplicable))
}

fn isotypic(components: &str) -> Result<Report> {
    let module = crate::crystal::perm_module(4)?;
    let comps = parse_list(components)?;
    let v = isotypic_sublattice(&module, &comps)?;
    let q = quotient_action(&module, &v)?;
    let matrices: BTreeMap<String, Value> = q.matrices.iter().map(|(g, m)| (g.to_string(), matrix_json(m))).collect();
    Ok(report(
        "isotypic",
        json!({ "components": comps }),
        json!({
            "rank": v.rows(),
            "basis": matrix_json(&v),
            "quotient_rank": q.rank,
            "complement_index": complement_index(&module, &comps)?.to_string(),
            "quotient_matrices": matrices,
            "faithful": q.faithful,
            "quotient_character": class_function_json(&q.character),
            "sublattice_character": class_function_json(&q.sub_character),
        }),
        Status::NotApplicable,
    ))
}

fn crystal(g: &GroupArgs, action: &CrystalAction) -> Result<Report> {
    let f = family(&g.family)?;
    let m = model_for(f, g.n)?;
    let inputs = group_inputs(g);
    let meta = json!({
        "dimension": m.dimension(),
        "solution_rank": m.info.solution_rank,
        "underdetermined": m.info.underdetermined,
        "generates_lattice": m.info.generates_lattice,
    });
    let eval = |w: &str| -> Result<AffineElement> { eval_affine(&m.parse(w)?, &m) };
    let results = match action {
        CrystalAction::Relcheck => {
            let assignment: BTreeMap<String, Value> = m
                .presentation
                .generator_names()
                .iter()
                .enumerate()
                .map(|(i, name)| (name.to_string(), vector_json(&m, m.generator(i).expect("assigned"))))
                .collect();
            let failing = m.failing_relators()?;
            json!({ "model": meta, "relators": m.presentation.relator_count(), "failing": failing, "assignment": assignment })
        }
        CrystalAction::Order { word } => {
            let e = eval(word)?;
            json!({ "model": meta, "element": vector_json(&m, &e), "order": element_order(&e, &m).to_string() })
        }
        CrystalAction::Conj { w1, w2 } => {
            let (a, b) = (eval(w1)?, eval(w2)?);
            let w = conjugate_test(&a, &b, &m);
            json!({
                "model": meta,
                "conjugate": w.is_some(),
                "witness": w.map(|w| json!({ "perm": w.u.to_string(), "vector": w.t })),
            })
        }
        CrystalAction::Identity { w1, w2 } => {
            json!({ "model": meta, "equal": verify_identity(&m.parse(w1)?, &m.parse(w2)?, &m)? })
        }
        CrystalAction::Box { bound } => {
            let gamma = eval("v1 v2")?;
            let r = order_three_box(&m, &gamma, *bound);
            json!({
                "model": meta,
                "scanned": r.scanned,
                "order_three": r.order_three,
                "conjugate": r.conjugate,
                "passed": r.passed(),
                "failures": r.failures.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            })
        }
    };
    Ok(report("crystal", inputs, results, Status::NotApplicable))
}

fn reidemeister(action: &ReidemeisterAction, seed: u64) -> Result<Report> {
    match action {
        ReidemeisterAction::Finite {
            symmetric,
            abelian,
            matrix,
        } => {
            let (inputs, table) = match (symmetric, abelian, matrix) {
                (Some(n), None, None) => (json!({ "symmetric": n }), FiniteGroupTable::symmetric(*n, None)?),
                (None, Some(orders), Some(a)) => {
                    let o: Vec<u64> = parse_list(orders)?.into_iter().map(|x| x as u64).collect();
                    (
                        json!({ "abelian": orders, "matrix": a }),
                        FiniteGroupTable::abelian(&o, &parse_matrix(a)?)?,
                    )
                }
                _ => return Err(Error::Unsupported("give --symmetric N or --abelian ORDERS --matrix M".into())),
            };
            let classes = twisted_classes_finite(&table);
            Ok(report(
                "reidemeister finite",
                inputs,
                json!({ "elements": table.mul.len(), "classes": classes }),
                Status::NotApplicable,
            ))
        }
        ReidemeisterAction::Lattice { matrix } => {
            let rows = parse_matrix(matrix)?;
            let width = rows.first().map_or(0, Vec::len);
            let r = reidemeister_lattice(&IntMatrix::from_i64(width, &rows)?)?;
            Ok(report(
                "reidemeister lattice",
                json!({ "matrix": matrix }),
                json!({ "classes": r.to_string() }),
                Status::NotApplicable,
            ))
        }
        ReidemeisterAction::Tower { family: f, n, endo, ks } => {
            let fam: Family = f.parse()?;
            let m = model_for(fam, *n)?;
            let e = named_endo(fam, *n, endo)?;
            let t = quotient_tower(&m, &e, &parse_list(ks)?)?;
            let entries: Vec<Value> = t
                .entries
                .iter()
                .map(|x| json!({ "k": x.k, "elements": x.elements, "classes": x.classes }))
                .collect();
            Ok(report(
                "reidemeister tower",
                json!({ "family": fam.as_str(), "n": n, "endo": endo, "ks": ks }),
                json!({ "tower": entries, "monotone": t.monotone, "increasing": t.increasing, "verdict": t.verdict.label() }),
                Status::NotApplicable,
            ))
        }
        ReidemeisterAction::AbelianCheck { count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut mismatches = Vec::new();
            for i in 0..*count {
                let factors = 1 + i % 3;
                let (orders, a) = random_abelian_instance(&mut rng, factors, 6);
                let brute = twisted_classes_finite(&FiniteGroupTable::abelian(&orders, &a)?);
                let snf = abelian_twisted_count(&orders, &a)?;
                if num_bigint::BigInt::from(brute) != snf {
                    mismatches.push(json!({ "orders": orders, "matrix": a, "union_find": brute, "smith": snf.to_string() }));
                }
            }
            let status = if mismatches.is_empty() { Status::Pass } else { Status::Fail };
            Ok(report(
                "reidemeister abelian-check",
                json!({ "count": count, "seed": seed }),
                json!({ "mismatches": mismatches }),
                status,
            ))
        }
    }
}
