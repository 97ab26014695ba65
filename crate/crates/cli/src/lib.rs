//! The `aisr` command line: argument parsing, dispatch and report rendering.
//!
//! [`run`] never touches the process; it returns the exit code and the text
//! for each stream so tests can drive it directly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use aisr_core::algebra::format as algfile;
use aisr_core::derive::{
    derive_bounded, replay_proof, soundness_violations, DeriveConfig, DeriveOutcome, Proof, ReplayOutcome,
    DEFAULT_DEPTH, DEFAULT_NODE_LIMIT, DEFAULT_SIZE_FACTOR,
};
use aisr_core::enumerate::{
    count_restricted_union, enumerate_ai_semirings, enumerate_column_constant, enumerate_constant,
    enumerate_row_constant, enumerate_semilattices, EnumClass, EnumConfig, EnumerationReport, DEFAULT_NODE_BUDGET,
    MAX_UNION_ORDER,
};
use aisr_core::satisfaction::satisfies;
use aisr_core::variety::{
    build_lattice_with_budget, classify_generated, compare_with_budget, dual_specs, free_algebra_with_budget,
    member_with_budget, standard_specs, Budget, VarietyLattice, VarietySpec,
};
use aisr_core::{canonical_form, catalog, Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub mod figure1;
pub mod inputs;

pub const SCHEMA: &str = "aisr-report/1";
pub const PROOF_SCHEMA: &str = "aisr-proof/1";

/// Isomorphism-class counts of ai-semirings by order, as published.
pub const KNOWN_COUNTS: [(usize, u64); 3] = [(2, 6), (3, 61), (4, 866)];
/// Published number of ai-semirings satisfying `xy = xz` or `yx = zx` up to order 5.
pub const RESTRICTED_CLAIM: u64 = 789;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Parser, Debug)]
#[command(name = "aisr", version, about = "Finite ai-semirings: enumeration, identities, varieties, derivations")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for parallel searches.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
    /// Print elapsed wall time to stderr.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the ai-semiring laws; without --algebra, checks the whole catalog.
    Verify {
        #[arg(long)]
        algebra: Vec<String>,
    },
    /// Decide whether an algebra satisfies an identity.
    Check {
        #[arg(long)]
        algebra: String,
        /// Identity text or catalog label.
        #[arg(long)]
        identity: String,
    },
    /// Enumerate algebras of one order up to isomorphism.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = ClassArg::All)]
        class: ClassArg,
        #[arg(long)]
        count_only: bool,
        /// Write each algebra to DIR/<sha256 of canonical form>.alg.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        node_budget: u64,
    },
    /// Count algebras satisfying xy = xz or yx = zx, by order.
    CountRestricted {
        #[arg(long, default_value_t = MAX_UNION_ORDER)]
        max_order: usize,
        /// Total the counts must reproduce under some convention.
        #[arg(long, default_value_t = RESTRICTED_CLAIM)]
        expect: u64,
    },
    /// Decide membership of an algebra in a finitely generated variety.
    Member {
        #[arg(long)]
        algebra: String,
        /// Comma-separated generators.
        #[arg(long)]
        variety: String,
        /// Exit 1 unless the verdict is this.
        #[arg(long)]
        expect: Option<bool>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Build the relatively free algebra of a given rank.
    Free {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        rank: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Compare two finitely generated varieties.
    Compare {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Inclusion lattice of the ten subvarieties of xy = xz (or yx = zx with --dual).
    Lattice {
        #[arg(long)]
        dual: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Name the variety an algebra satisfying xy = xz generates.
    Classify {
        #[arg(long)]
        algebra: String,
    },
    /// Search for an equational proof of a target from a basis.
    Derive {
        /// Basis identities or catalog labels; repeatable.
        #[arg(long, required_unless_present = "replay")]
        basis: Vec<String>,
        #[arg(long, required_unless_present = "replay")]
        target: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_SIZE_FACTOR)]
        size_factor: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: usize,
        /// Do not fall back to proving the decomposed pieces.
        #[arg(long)]
        no_decompose: bool,
        /// Write the proof as JSON.
        #[arg(long)]
        proof_out: Option<PathBuf>,
        /// Check a JSON proof file instead of searching.
        #[arg(long, conflicts_with_all = ["target", "proof_out"])]
        replay: Option<PathBuf>,
    },
    /// Check the ten-variety lattice claims and print its Hasse diagram.
    Figure1 {
        #[arg(long)]
        dual: bool,
        /// Replace a catalog generator, e.g. S58=S56.
        #[arg(long, value_parser = parse_substitution)]
        substitute: Vec<(String, String)>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub closure_budget: u64,
    #[arg(long, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub vector_budget: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget { closure_elements: self.closure_budget as usize, vector_length: self.vector_budget as usize }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    All,
    Semilattice,
    RowConstant,
    ColumnConstant,
    Both,
}

fn parse_substitution(s: &str) -> std::result::Result<(String, String), String> {
    match s.split_once('=') {
        Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() => Ok((a.trim().into(), b.trim().into())),
        _ => Err(format!("expected OLD=NEW, got `{s}`")),
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn with_code(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }
}

/// Exit status for a library error: findings are falsified claims.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Finding(_) => 1,
        _ => 2,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Outcome::ok(text) } else { Outcome { code, stdout: String::new(), stderr: text } };
        }
    };
    let start = Instant::now();
    let result = match cli.workers {
        None => dispatch(&cli),
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w as usize).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::Config(e.to_string())),
        },
    };
    let mut out = match result {
        Ok(o) => o,
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    if cli.timing {
        let _ = writeln!(out.stderr, "elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    out
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    if fmt == Format::Dot && !matches!(cli.command, Command::Lattice { .. } | Command::Figure1 { .. }) {
        return Err(Error::Config("dot output is only available for lattice and figure1".into()));
    }
    match &cli.command {
        Command::Verify { algebra } => cmd_verify(fmt, algebra),
        Command::Check { algebra, identity } => cmd_check(fmt, algebra, identity),
        Command::Enumerate { order, class, count_only, out_dir, node_budget } => {
            cmd_enumerate(fmt, *order, *class, *count_only, out_dir.as_deref(), *node_budget)
        }
        Command::CountRestricted { max_order, expect } => cmd_count_restricted(fmt, *max_order, *expect),
        Command::Member { algebra, variety, expect, budget } => {
            cmd_member(fmt, algebra, variety, *expect, &budget.budget())
        }
        Command::Free { variety, rank, budget } => cmd_free(fmt, variety, *rank, &budget.budget()),
        Command::Compare { first, second, budget } => cmd_compare(fmt, first, second, &budget.budget()),
        Command::Lattice { dual, budget } => cmd_lattice(fmt, *dual, &budget.budget()),
        Command::Classify { algebra } => cmd_classify(fmt, algebra),
        Command::Derive { basis, target, depth, size_factor, node_limit, no_decompose, proof_out, replay } => {
            match replay {
                Some(path) => cmd_replay(fmt, path),
                None => {
                    let config = DeriveConfig {
                        depth: *depth,
                        size_factor: *size_factor,
                        node_limit: *node_limit,
                        decompose: !no_decompose,
                    };
                    let target = target.as_deref().expect("clap requires a target without --replay");
                    cmd_derive(fmt, basis, target, &config, proof_out.as_deref())
                }
            }
        }
        Command::Figure1 { dual, substitute } => cmd_figure1(fmt, *dual, substitute),
    }
}

fn report(kind: &str, body: Value) -> String {
    let mut v = json!({ "schema": SCHEMA, "command": kind });
    if let (Some(m), Value::Object(b)) = (v.as_object_mut(), body) {
        m.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
    s.push('\n');
    s
}

fn cmd_verify(fmt: Format, specs: &[String]) -> Result<Outcome> {
    let targets: Vec<String> = if specs.is_empty() {
        let mut v: Vec<String> = catalog::names().iter().map(|n| format!("builtin:{n}")).collect();
        v.insert(0, "builtin:trivial".into());
        v
    } else {
        specs.to_vec()
    };
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut all_ok = true;
    for spec in &targets {
        let a = inputs::raw_algebra(spec)?;
        let axioms = a.verify_axioms();
        let ok = axioms.is_ai_semiring();
        // Writing and re-reading must give back the same tables.
        let round_trip = algfile::parse(&algfile::to_text(&a)).map(|b| b.same_tables(&a)).unwrap_or(false);
        all_ok &= ok && round_trip;
        let order_pairs = if ok { a.clone().validate()?.natural_order()?.pairs() } else { Vec::new() };
        let cf = canonical_form(&a);
        let _ = writeln!(
            text,
            "{}: order {}, {}, round trip {}",
            a.display_name(),
            a.order(),
            if ok { "ai-semiring".to_string() } else { axioms.to_string() },
            if round_trip { "ok" } else { "FAILED" }
        );
        if ok {
            let pairs: Vec<String> = order_pairs
                .iter()
                .filter(|(x, y)| x != y)
                .map(|(x, y)| format!("{}<{}", a.label(*x), a.label(*y)))
                .collect();
            let _ = writeln!(text, "  order: {}", if pairs.is_empty() { "-".into() } else { pairs.join(" ") });
        }
        rows.push(json!({
            "algebra": a.display_name(),
            "order": a.order(),
            "ai_semiring": ok,
            "axioms": axioms,
            "round_trip": round_trip,
            "natural_order": order_pairs,
            "canonical_form": cf.tables,
        }));
    }
    let code = if all_ok { 0 } else { 1 };
    Ok(Outcome::with_code(
        code,
        match fmt {
            Format::Json => report("verify", json!({ "ok": all_ok, "algebras": rows })),
            _ => text,
        },
    ))
}

fn cmd_check(fmt: Format, alg: &str, ident: &str) -> Result<Outcome> {
    let a = inputs::algebra(alg)?;
    let id = inputs::identity(ident)?;
    let r = satisfies(&a, &id)?;
    let text = match &r.counterexample {
        None => format!("holds: {} satisfies {id}\n", a.display_name()),
        Some(cx) => {
            let at: Vec<String> = cx.assignment.iter().map(|(v, e)| format!("{v}={}", a.label(*e))).collect();
            format!(
                "fails: {} does not satisfy {id}\n  counterexample {} gives {} vs {}\n",
                a.display_name(),
                at.join(", "),
                a.label(cx.lhs_value),
                a.label(cx.rhs_value)
            )
        }
    };
    let body = match fmt {
        Format::Json => report(
            "check",
            json!({ "algebra": a.display_name(), "identity": id, "holds": r.holds, "counterexample": r.counterexample }),
        ),
        _ => text,
    };
    Ok(Outcome::with_code(if r.holds { 0 } else { 1 }, body))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(bytes.len() * 2), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// File name of an algebra in an enumeration directory.
pub fn digest_name(a: &aisr_core::FiniteAlgebra) -> String {
    let cf = canonical_form(a);
    let mut h = Sha256::new();
    h.update([cf.order as u8]);
    h.update(&cf.tables);
    format!("{}.alg", hex(&h.finalize()))
}

fn cmd_enumerate(
    fmt: Format,
    order: usize,
    class: ClassArg,
    count_only: bool,
    out_dir: Option<&Path>,
    node_budget: u64,
) -> Result<Outcome> {
    let config = EnumConfig { workers: None, node_budget, keep_algebras: out_dir.is_some() || !count_only };
    let rep: EnumerationReport = match class {
        ClassArg::All => enumerate_ai_semirings(order, &config)?,
        ClassArg::Semilattice => enumerate_semilattices(order)?,
        ClassArg::RowConstant => enumerate_row_constant(order, &config)?,
        ClassArg::ColumnConstant => enumerate_column_constant(order, &config)?,
        ClassArg::Both => enumerate_constant(order, &config)?,
    };
    let mut written = 0usize;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
        for (i, a) in rep.algebras.iter().enumerate() {
            let named = a.clone().with_name(format!("{}{}_{}", prefix(rep.class), order, i + 1));
            let path = dir.join(digest_name(a));
            fs::write(&path, algfile::to_text(&named))
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            written += 1;
        }
    }
    let expected = if rep.class == EnumClass::All {
        KNOWN_COUNTS.iter().find(|(n, _)| *n == order).map(|&(_, c)| c)
    } else {
        None
    };
    let matches = expected.map(|e| e == rep.count);
    let mut text = format!("order {order}, class {}: {} isomorphism classes\n", rep.class.name(), rep.count);
    if let Some(e) = expected {
        let _ = writeln!(text, "published count {e}: {}", if matches == Some(true) { "match" } else { "MISMATCH" });
    }
    if out_dir.is_some() {
        let _ = writeln!(text, "wrote {written} files");
    }
    if !count_only && out_dir.is_none() {
        for a in &rep.algebras {
            text.push('\n');
            text.push_str(&algfile::to_text(a));
        }
    }
    let body = match fmt {
        Format::Json => {
            let mut extra = json!({
                "order": order,
                "class": rep.class,
                "count": rep.count,
                "nodes": rep.nodes,
                "expected": expected,
                "matches": matches,
            });
            if !count_only {
                extra["canonical_forms"] =
                    json!(rep.algebras.iter().map(|a| canonical_form(a).tables).collect::<Vec<_>>());
            }
            report("enumerate", extra)
        }
        _ => text,
    };
    Ok(Outcome::with_code(if matches == Some(false) { 1 } else { 0 }, body))
}

fn prefix(class: EnumClass) -> &'static str {
    match class {
        EnumClass::Semilattice => "SL",
        EnumClass::All => "A",
        EnumClass::RowConstant => "RC",
        EnumClass::ColumnConstant => "CC",
        EnumClass::Both => "K",
    }
}

fn cmd_count_restricted(fmt: Format, max_order: usize, expect: u64) -> Result<Outcome> {
    let rep = count_restricted_union(max_order, &EnumConfig { keep_algebras: false, ..EnumConfig::default() })?;
    let conventions = [
        ("orders 1..max (trivial algebra counted)", rep.total_with_trivial),
        ("orders 2..max (trivial algebra excluded)", rep.total_without_trivial),
    ];
    let matching: Vec<&str> = conventions.iter().filter(|(_, t)| *t == expect).map(|(n, _)| *n).collect();
    let mut text = String::from("order  xy=xz  yx=zx  both  union\n");
    for r in &rep.per_order {
        let _ = writeln!(
            text,
            "{:>5}  {:>5}  {:>5}  {:>4}  {:>5}",
            r.order, r.row_constant, r.column_constant, r.both, r.union
        );
    }
    for (name, t) in &conventions {
        let _ = writeln!(text, "total, {name}: {t}");
    }
    match matching.first() {
        Some(n) => {
            let _ = writeln!(text, "expected {expect}: matches {n}");
        }
        None => {
            let _ = writeln!(text, "expected {expect}: MISMATCH under both conventions");
        }
    }
    let body = match fmt {
        Format::Json => report(
            "count-restricted",
            json!({
                "max_order": rep.max_order,
                "per_order": rep.per_order,
                "total_with_trivial": rep.total_with_trivial,
                "total_without_trivial": rep.total_without_trivial,
                "expected": expect,
                "matching_conventions": matching,
            }),
        ),
        _ => text,
    };
    Ok(Outcome::with_code(if matching.is_empty() { 1 } else { 0 }, body))
}

fn cmd_member(fmt: Format, alg: &str, var: &str, expect: Option<bool>, budget: &Budget) -> Result<Outcome> {
    let a = inputs::algebra(alg)?;
    let v = inputs::variety(var)?;
    let r = member_with_budget(&a, &v, budget)?;
    let mut text = if r.member {
        format!("member: {} is in {}\n", a.display_name(), v.label)
    } else {
        format!("not a member: {} is not in {}\n", a.display_name(), v.label)
    };
    if let Some(id) = &r.separating_identity {
        let _ = writeln!(text, "  separating identity: {id}");
    }
    if let Some(c) = &r.certificate {
        let asg: Vec<String> = c.assignment.iter().map(|(x, e)| format!("{x}->{e}")).collect();
        let _ = writeln!(text, "  onto map from the free algebra of size {}: {}", c.closure_size, asg.join(", "));
    }
    let code = match expect {
        Some(e) if e != r.member => 1,
        _ => 0,
    };
    let body = match fmt {
        Format::Json => report(
            "member",
            json!({
                "algebra": a.display_name(),
                "variety": v.label,
                "member": r.member,
                "separating_identity": r.separating_identity,
                "certificate": r.certificate,
            }),
        ),
        _ => text,
    };
    Ok(Outcome::with_code(code, body))
}

fn cmd_free(fmt: Format, var: &str, rank: usize, budget: &Budget) -> Result<Outcome> {
    let v = inputs::variety(var)?;
    let f = free_algebra_with_budget(&v, rank, budget)?;
    let elements: Vec<String> = f.witnesses.iter().map(|t| t.to_string()).collect();
    let vars: Vec<String> = f.variables.iter().map(|x| x.to_string()).collect();
    let body = match fmt {
        Format::Json => report(
            "free",
            json!({
                "variety": v.label,
                "rank": rank,
                "variables": vars,
                "size": elements.len(),
                "elements": elements,
                "add": f.algebra.add_table(),
                "mul": f.algebra.mul_table(),
            }),
        ),
        _ => {
            let mut t = format!(
                "free algebra of rank {rank} in {} on {}: {} elements\n",
                v.label,
                vars.join(", "),
                elements.len()
            );
            for (i, e) in elements.iter().enumerate() {
                let _ = writeln!(t, "  {i}: {e}");
            }
            t.push('\n');
            t.push_str(&algfile::to_text(&f.algebra));
            t
        }
    };
    Ok(Outcome::ok(body))
}

fn cmd_compare(fmt: Format, first: &str, second: &str, budget: &Budget) -> Result<Outcome> {
    let v1 = inputs::variety(first)?;
    let v2 = inputs::variety(second)?;
    let c = compare_with_budget(&v1, &v2, budget)?;
    let body = match fmt {
        Format::Json => report(
            "compare",
            json!({ "first": v1.label, "second": v2.label, "relation": c.relation, "evidence": c.evidence }),
        ),
        _ => {
            let mut t = format!("{}\n", c.relation.describe(&v1.label, &v2.label));
            for e in &c.evidence {
                let _ = writeln!(t, "  {} is not in {}: fails {}", e.generator, e.outside, e.identity);
            }
            t
        }
    };
    Ok(Outcome::ok(body))
}

fn lattice_text(lat: &VarietyLattice) -> String {
    let mut t = String::new();
    let w = lat.labels.iter().map(String::len).max().unwrap_or(1);
    let _ = writeln!(t, "inclusion (row contained in column):");
    for (i, l) in lat.labels.iter().enumerate() {
        let row: String = lat.includes[i].iter().map(|&b| if b { '1' } else { '.' }).collect();
        let _ = writeln!(t, "  {l:<w$}  {row}");
    }
    let _ = writeln!(t, "covering pairs:");
    for (a, b) in lat.hasse_labels() {
        let _ = writeln!(t, "  {a} < {b}");
    }
    let names = |idx: &[usize]| idx.iter().map(|&i| lat.labels[i].clone()).collect::<Vec<_>>().join(", ");
    let _ = writeln!(t, "atoms: {}", names(&lat.atoms));
    let _ = writeln!(t, "coatoms: {}", names(&lat.coatoms));
    let _ = writeln!(t, "lattice: {}", lat.is_lattice());
    let _ = writeln!(
        t,
        "distributive: {}",
        match lat.distributive {
            Some(b) => b.to_string(),
            None => "n/a".into(),
        }
    );
    t
}

fn cmd_lattice(fmt: Format, dual: bool, budget: &Budget) -> Result<Outcome> {
    let specs: Vec<VarietySpec> = if dual { dual_specs() } else { standard_specs() };
    let lat = build_lattice_with_budget(&specs, budget)?;
    let body = match fmt {
        Format::Json => report("lattice", json!({ "dual": dual, "lattice": lat })),
        Format::Dot => lat.to_dot(),
        Format::Text => lattice_text(&lat),
    };
    Ok(Outcome::ok(body))
}

fn cmd_classify(fmt: Format, alg: &str) -> Result<Outcome> {
    let a = inputs::algebra(alg)?;
    let c = classify_generated(&a)?;
    let body = match fmt {
        Format::Json => report("classify", json!({ "algebra": a.display_name(), "classification": c })),
        _ => {
            let pat: Vec<String> = c.pattern.iter().map(|(l, b)| format!("{l}={}", if *b { 1 } else { 0 })).collect();
            format!(
                "{} generates {}\n  pattern: {}\n  least containing variety by membership: {}\n",
                a.display_name(),
                c.label,
                pat.join(" "),
                c.by_membership
            )
        }
    };
    Ok(Outcome::ok(body))
}

/// On-disk proof file.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProofFile {
    pub schema: String,
    pub proof: Proof,
}

/// Replays a proof and re-checks it against every catalog algebra.
pub fn audit_proof(p: &Proof) -> Result<(ReplayOutcome, Vec<String>)> {
    let mut models = vec![catalog::get("trivial")?];
    models.extend(catalog::all());
    Ok((replay_proof(p), soundness_violations(p, &models)?))
}

fn audit_text(replay: ReplayOutcome, unsound: &[String]) -> String {
    let mut t = match replay {
        ReplayOutcome::Valid => "replay: valid\n".to_string(),
        ReplayOutcome::InvalidStep(i) => format!("replay: step {i} does not follow\n"),
        ReplayOutcome::WrongConclusion => "replay: the last step is not the target\n".to_string(),
    };
    if unsound.is_empty() {
        t.push_str("soundness: no catalog algebra satisfies the basis but not the target\n");
    } else {
        let _ = writeln!(t, "soundness: VIOLATED by {}", unsound.join(", "));
    }
    t
}

fn cmd_derive(
    fmt: Format,
    basis: &[String],
    target: &str,
    config: &DeriveConfig,
    proof_out: Option<&Path>,
) -> Result<Outcome> {
    let basis: Vec<_> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| inputs::labelled_identity(b, &format!("b{}", i + 1)))
        .collect::<Result<_>>()?;
    let target = inputs::identity(target)?;
    match derive_bounded(&basis, &target, config)? {
        DeriveOutcome::NotFound { nodes } => {
            let body = match fmt {
                Format::Json => report("derive", json!({ "target": target, "found": false, "nodes": nodes })),
                _ => format!("no proof of {target} within depth {} ({nodes} terms visited)\n", config.depth),
            };
            Ok(Outcome::with_code(1, body))
        }
        DeriveOutcome::Found { proof } => {
            let (replay, unsound) = audit_proof(&proof)?;
            let sound = replay.is_valid() && unsound.is_empty();
            if let Some(path) = proof_out {
                let file = ProofFile { schema: PROOF_SCHEMA.into(), proof: (*proof).clone() };
                let mut s = serde_json::to_string_pretty(&file).expect("proofs serialize");
                s.push('\n');
                fs::write(path, s).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            }
            let body = match fmt {
                Format::Json => report(
                    "derive",
                    json!({
                        "target": target,
                        "found": true,
                        "links": proof.links(),
                        "replay_valid": replay.is_valid(),
                        "unsound_in": unsound,
                        "proof": proof,
                    }),
                ),
                _ => {
                    let mut t = String::from("basis:\n");
                    for (l, id) in &proof.basis {
                        let _ = writeln!(t, "  ({l}) {id}");
                    }
                    let _ = writeln!(
                        t,
                        "proof of {target} in {} links ({} inference steps):",
                        proof.links(),
                        proof.steps.len()
                    );
                    t.push_str(&proof.chain_text());
                    t.push_str(&audit_text(replay, &unsound));
                    t
                }
            };
            Ok(Outcome::with_code(if sound { 0 } else { 1 }, body))
        }
    }
}

fn cmd_replay(fmt: Format, path: &Path) -> Result<Outcome> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let file: ProofFile = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{} is not a proof file: {e}", path.display())))?;
    if file.schema != PROOF_SCHEMA {
        return Err(Error::Config(format!("unsupported proof schema `{}`", file.schema)));
    }
    let (replay, unsound) = audit_proof(&file.proof)?;
    let ok = replay.is_valid() && unsound.is_empty();
    let body = match fmt {
        Format::Json => report(
            "replay",
            json!({
                "target": file.proof.target,
                "replay": format!("{replay:?}"),
                "replay_valid": replay.is_valid(),
                "unsound_in": unsound,
            }),
        ),
        _ => format!("proof of {}\n{}", file.proof.target, audit_text(replay, &unsound)),
    };
    Ok(Outcome::with_code(if ok { 0 } else { 1 }, body))
}

fn cmd_figure1(fmt: Format, dual: bool, subs: &[(String, String)]) -> Result<Outcome> {
    let f = figure1::run(dual, subs)?;
    let code = if f.passed() { 0 } else { 1 };
    let body = match fmt {
        Format::Json => report("figure1", json!({ "passed": f.passed(), "report": f, "dot": f.dot })),
        Format::Dot => f.dot.clone(),
        Format::Text => format!("{}\n{}", f.dot, f.claim_lines()),
    };
    Ok(Outcome::with_code(code, body))
}
