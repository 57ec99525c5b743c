use std::collections::BTreeMap;
use std::fmt::Write;
use std::fs;
use std::path::Path;

use ifol::corpus;
use ifol::gen::{random_formulas, GenConfig};
use ifol::relalg::complement;
use ifol::semantics::{
    check_diagram, check_tarski_constraint, interpret, interpret_abstraction, parse_world_file, parse_world_set_file,
};
use ifol::syntax::{parse_abstraction, PredicateSymbol, Term};
use ifol::worlds::{enumerate_worlds, strong_equiv, weak_equiv, WorldSet};
use ifol::{parse_formula, parse_term, Abstraction, Assignment, ConceptStore, DomainElement, Formula, Signature};

use crate::render::{self, Labels};
use crate::{Cli, Command, FormulaSource, Format, WorldArgs, WorldsCommand};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

type Outcome = Result<u8, Failure>;

macro_rules! line {
    ($out:expr) => {
        $out.push('\n')
    };
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).expect("write to string")
    };
}

struct Loaded {
    ws: WorldSet,
    names: BTreeMap<String, DomainElement>,
    labels: Labels,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn signature(cli: &Cli) -> Result<Signature, Failure> {
    match &cli.sig {
        Some(p) => Signature::parse(&read(p)?).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => Ok(Signature::open()),
    }
}

/// `x=a,y=b` into pairs, resolving values through `resolve`.
fn pairs<T>(text: &str, mut resolve: impl FnMut(&str) -> Result<T, Failure>) -> Result<Vec<(String, T)>, Failure> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| usage(format!("expected name=value, found `{item}`")))?;
        out.push((k.trim().to_string(), resolve(v.trim())?));
    }
    Ok(out)
}

fn element(names: &BTreeMap<String, DomainElement>, word: &str) -> Result<DomainElement, Failure> {
    let word = word.strip_prefix('#').unwrap_or(word);
    if let Some(e) = names.get(word) {
        return Ok(e.clone());
    }
    if let Some(id) = word.strip_prefix('@').and_then(|n| n.parse().ok()) {
        return Ok(DomainElement::Concept(ifol::ConceptId(id)));
    }
    Err(usage(format!("`{word}` is not an element of the domain")))
}

fn assignment(text: &Option<String>, loaded: &Loaded) -> Result<Assignment, Failure> {
    match text {
        Some(t) => Ok(pairs(t, |v| element(&loaded.names, v))?.into_iter().collect()),
        None => Ok(Assignment::new()),
    }
}

fn load_worlds(
    args: &WorldArgs,
    cli: &Cli,
    sig: &Signature,
    store: &ConceptStore,
    formulas: &[Formula],
) -> Result<Option<Loaded>, Failure> {
    let from_file = |path: &Path, set: bool| -> Result<Loaded, Failure> {
        let text = read(path)?;
        let file = if set { parse_world_set_file(&text, store, sig) } else { parse_world_file(&text, store, sig) }
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let labels = file.worlds[0].labels().clone();
        let ws = WorldSet::new(file.worlds).map_err(usage)?;
        Ok(Loaded { ws, names: file.names, labels })
    };
    if let Some(p) = &args.world {
        return from_file(p, false).map(Some);
    }
    if let Some(p) = &args.worlds {
        return from_file(p, true).map(Some);
    }
    if !args.enumerate {
        return Ok(None);
    }
    let mut preds: Vec<PredicateSymbol> = if cli.sig.is_some() {
        sig.predicates().cloned().collect()
    } else {
        formulas.iter().flat_map(Formula::predicates).collect()
    };
    preds.retain(|p| !p.is_builtin());
    enumerated(&args.domain, &args.consts, args.limit, &preds).map(Some)
}

fn enumerated(domain: &[String], consts: &Option<String>, limit: u64, preds: &[PredicateSymbol]) -> Result<Loaded, Failure> {
    let names: BTreeMap<String, DomainElement> =
        domain.iter().map(|n| (n.clone(), DomainElement::particular(n.as_str()))).collect();
    if names.len() != domain.len() || domain.iter().any(|n| n.is_empty()) {
        return Err(usage("domain names must be distinct and non-empty"));
    }
    let consts: BTreeMap<String, DomainElement> = match consts {
        Some(c) => pairs(c, |v| element(&names, v))?.into_iter().collect(),
        None => BTreeMap::new(),
    };
    let ws = enumerate_worlds(preds, names.values().cloned().collect(), consts, limit).map_err(usage)?;
    Ok(Loaded { ws, names, labels: Labels::new() })
}

fn require(loaded: Option<Loaded>) -> Result<Loaded, Failure> {
    loaded.ok_or_else(|| usage("one of --world, --worlds or --enumerate is required"))
}

fn parse_formula_text(text: &str, sig: &Signature) -> Result<Formula, Failure> {
    parse_formula(text, sig).map_err(usage)
}

/// Formulas from files, the corpus and `--formula`, before random ones.
fn fixed_formulas(src: &FormulaSource, sig: &Signature) -> Result<Vec<Formula>, Failure> {
    let mut out = Vec::new();
    if let Some(p) = &src.formulas {
        let text = read(p)?;
        for (n, l) in corpus::entries(&text) {
            out.push(parse_formula(l, sig).map_err(|e| usage(format!("{}:{n}: {e}", p.display())))?);
        }
    }
    for t in &src.inline {
        out.push(parse_formula_text(t, sig)?);
    }
    if src.corpus || (out.is_empty() && src.random == 0) {
        out.extend(corpus::formulas().map_err(|(n, e)| usage(format!("corpus line {n}: {e}")))?);
    }
    Ok(out)
}

fn gen_config(src: &FormulaSource, cli: &Cli, sig: &Signature, domain: &[DomainElement]) -> Result<GenConfig, Failure> {
    if !(0.0..=1.0).contains(&src.abs_prob) {
        return Err(usage("--abs-prob must lie in [0, 1]"));
    }
    let mut cfg = GenConfig {
        depth: src.depth,
        abstraction_probability: src.abs_prob,
        elements: domain.iter().filter(|e| !e.is_concept()).cloned().collect(),
        ..GenConfig::default()
    };
    if cli.sig.is_some() {
        cfg.predicates = sig.predicates().filter(|p| !p.is_builtin()).cloned().collect();
        if cfg.predicates.is_empty() {
            return Err(usage("the signature declares no predicates to generate from"));
        }
    }
    Ok(cfg)
}

/// All formulas for a sweep together with the worlds they run over.
fn sweep_inputs(
    cli: &Cli,
    src: &FormulaSource,
    args: &WorldArgs,
    sig: &Signature,
    store: &ConceptStore,
) -> Result<(Vec<Formula>, Loaded), Failure> {
    let mut formulas = fixed_formulas(src, sig)?;
    let mut probe = formulas.clone();
    if src.random > 0 && cli.sig.is_none() {
        probe.push(parse_formula_text("p(x) & q(x, y)", &Signature::open())?);
    }
    let loaded = require(load_worlds(args, cli, sig, store, &probe)?)?;
    if src.random > 0 {
        let cfg = gen_config(src, cli, sig, loaded.ws.domain())?;
        formulas.extend(random_formulas(&cfg, src.seed, src.random));
    }
    Ok((formulas, loaded))
}

pub fn run(cli: &Cli, out: &mut String) -> Outcome {
    let sig = signature(cli)?;
    let store = ConceptStore::new();
    let records = cli.format == Format::Records;
    match &cli.command {
        Command::Parse { text } => parse(text, &sig, records, out),
        Command::Intension { text, worlds } => {
            let loaded = load_worlds(worlds, cli, &sig, &store, &[])?;
            intension(text, &sig, &store, loaded, records, out)
        }
        Command::Eval { formula, worlds, in_world, assign } => {
            let target = match parse_formula(formula, &sig) {
                Ok(f) => Evaluand::Formula(f),
                Err(formula_err) => match parse_term(formula, &sig) {
                    Ok(Term::Abs(a)) => Evaluand::Term(*a),
                    _ => return Err(usage(formula_err)),
                },
            };
            let body = match &target {
                Evaluand::Formula(f) => f.clone(),
                Evaluand::Term(a) => a.body.clone(),
            };
            let loaded = require(load_worlds(worlds, cli, &sig, &store, &[body])?)?;
            eval(&target, &store, &loaded, in_world, assign, records, out)
        }
        Command::CheckDiagram { source, worlds, inject_fault } => {
            let (formulas, loaded) = sweep_inputs(cli, source, worlds, &sig, &store)?;
            diagram(&formulas, &store, &loaded, *inject_fault, records, out)
        }
        Command::CheckConstraint { source, worlds, inject_fault } => {
            let (formulas, loaded) = sweep_inputs(cli, source, worlds, &sig, &store)?;
            constraint(&formulas, &store, &loaded, *inject_fault, records, out)
        }
        Command::Equiv { left, right, worlds, assign, weak, .. } => {
            let l = equiv_operand(left, &sig)?;
            let r = equiv_operand(right, &sig)?;
            let probe = [l.body.clone(), r.body.clone()];
            let loaded = require(load_worlds(worlds, cli, &sig, &store, &probe)?)?;
            let g = assignment(assign, &loaded)?;
            let report = if *weak { weak_equiv(&store, &l, &r, &g, &loaded.ws) } else { strong_equiv(&store, &l, &r, &g, &loaded.ws) }
                .map_err(usage)?;
            let mode = if *weak { "weak" } else { "strong" };
            let identical = if report.concepts_identical { "identical" } else { "distinct" };
            if records {
                let (ww, wt) = match &report.witness {
                    Some(w) => (w.world.clone().unwrap_or_default(), render::tuple(&w.tuple, &loaded.labels)),
                    None => (String::new(), String::new()),
                };
                line!(
                    out,
                    "check=equiv mode={mode} equivalent={} concepts={identical} worlds={} witness_world={ww} witness_tuple={wt}",
                    report.equivalent,
                    report.worlds
                );
            } else {
                match &report.witness {
                    None => line!(out, "equivalent ({mode}); concepts {identical}"),
                    Some(w) => {
                        let tuple = render::tuple(&w.tuple, &loaded.labels);
                        let verdict = match &w.world {
                            Some(n) => format!("not equivalent (witness: world {n}, tuple {tuple})"),
                            None => format!("not equivalent ({mode}; witness: tuple {tuple})"),
                        };
                        line!(out, "{verdict}; concepts {identical}");
                    }
                }
                line!(out, "relative to {} worlds", report.worlds);
            }
            Ok(if report.equivalent { 0 } else { 1 })
        }
        Command::Worlds { command: WorldsCommand::Enumerate { domain, consts, limit, count } } => {
            if cli.sig.is_none() {
                return Err(usage("worlds enumerate needs --sig"));
            }
            let preds: Vec<PredicateSymbol> = sig.predicates().filter(|p| !p.is_builtin()).cloned().collect();
            let loaded = enumerated(domain, consts, *limit, &preds)?;
            enumerate(&loaded, *count, records, out)
        }
    }
}

/// An abstraction term, or a formula read as `<< φ >>_{free vars}`.
fn equiv_operand(text: &str, sig: &Signature) -> Result<Abstraction, Failure> {
    match parse_abstraction(text, sig) {
        Ok(a) => Ok(a),
        Err(term_err) => match parse_formula(text, sig) {
            Ok(f) => {
                let alpha = f.free_vars().into_vec();
                Abstraction::new(f, alpha).map_err(usage)
            }
            Err(_) => Err(usage(term_err)),
        },
    }
}

fn parse(text: &str, sig: &Signature, records: bool, out: &mut String) -> Outcome {
    let f = match parse_formula(text, sig) {
        Ok(f) => f,
        Err(formula_err) => match parse_term(text, sig) {
            Ok(Term::Abs(a)) => {
                if records {
                    line!(
                        out,
                        "kind=abstraction text={} alpha={} beta={} free={}",
                        render::quoted(&a.to_string()),
                        a.alpha.join(","),
                        a.beta.join(","),
                        a.beta.join(",")
                    );
                } else {
                    line!(out, "abstraction: {a}");
                    line!(out, "body: {}", a.body);
                    line!(out, "alpha: ({})", a.alpha.join(", "));
                    line!(out, "beta: ({})", a.beta.join(", "));
                }
                return Ok(0);
            }
            _ => return Err(usage(formula_err)),
        },
    };
    let fv = f.free_vars();
    if records {
        line!(out, "kind=formula text={} free={}", render::quoted(&f.to_string()), fv.as_slice().join(","));
    } else {
        line!(out, "formula: {f}");
        line!(out, "free: ({})", fv.as_slice().join(", "));
        for a in f.abstractions() {
            line!(out, "abstraction: {a} alpha=({}) beta=({})", a.alpha.join(", "), a.beta.join(", "));
        }
    }
    Ok(0)
}

fn intension(
    text: &str,
    sig: &Signature,
    store: &ConceptStore,
    loaded: Option<Loaded>,
    records: bool,
    out: &mut String,
) -> Outcome {
    let concept = match parse_formula(text, sig) {
        Ok(f) => interpret(store, &f).map_err(usage)?,
        Err(formula_err) => match parse_term(text, sig) {
            Ok(Term::Abs(a)) => {
                let domain = match (&loaded, a.beta.is_empty()) {
                    (Some(l), _) => l.ws.domain().to_vec(),
                    (None, true) => Vec::new(),
                    (None, false) => return Err(usage("an abstraction with free variables needs --world, --worlds or --enumerate")),
                };
                interpret_abstraction(store, &a, &domain).map_err(usage)?
            }
            _ => return Err(usage(formula_err)),
        },
    };
    if records {
        line!(out, "id={} degree={} concept={}", concept.id(), concept.degree(), render::quoted(&concept.to_string()));
    } else {
        line!(out, "{concept}");
        line!(out, "degree: {}", concept.degree());
        line!(out, "id: {}", concept.id());
    }
    Ok(0)
}

enum Evaluand {
    Formula(Formula),
    Term(Abstraction),
}

fn eval(
    target: &Evaluand,
    store: &ConceptStore,
    loaded: &Loaded,
    in_world: &Option<String>,
    assign: &Option<String>,
    records: bool,
    out: &mut String,
) -> Outcome {
    let ws = &loaded.ws;
    let targets: Vec<usize> = match in_world {
        Some(name) => vec![ws.index_of(name).map_err(usage)?],
        None => (0..ws.len()).collect(),
    };
    let ext = ws.extensionalizer(store);
    let g = match assign {
        Some(_) => Some(assignment(assign, loaded)?),
        None => None,
    };
    let (concept, attrs) = match (target, &g) {
        (Evaluand::Formula(f), Some(g)) => (interpret(store, &f.ground(g).map_err(usage)?).map_err(usage)?, Vec::new()),
        (Evaluand::Formula(f), None) => (interpret(store, f).map_err(usage)?, f.free_vars().into_vec()),
        (Evaluand::Term(a), None) => {
            let cols = a.body.free_vars().into_vec().into_iter().filter(|v| !a.beta.contains(v)).collect();
            (interpret_abstraction(store, a, ws.domain()).map_err(usage)?, cols)
        }
        (Evaluand::Term(_), Some(_)) => return Err(usage("--assign applies to formulas, not abstraction terms")),
    };
    let headed = targets.len() > 1 || ws.len() > 1;
    for w in targets {
        let name = ws.worlds()[w].name();
        let mut r = ext.extensionalize(&concept, w).map_err(usage)?.with_attrs(attrs.clone()).map_err(usage)?;
        if let Evaluand::Term(a) = target {
            r = r.permute_to(&a.alpha).map_err(usage)?;
        }
        if records {
            if r.arity() == 0 {
                line!(out, "world={name} value={}", render::truth(r.is_true()));
            } else {
                line!(out, "world={name} attrs={} tuples={}", r.attrs().unwrap_or_default().join(","), render::quoted(&render::tuples(&r, &loaded.labels)));
            }
        } else {
            if headed {
                line!(out, "world {name}");
            }
            line!(out, "{}", render::relation(&r, &loaded.labels));
        }
    }
    Ok(0)
}

fn diagram(formulas: &[Formula], store: &ConceptStore, loaded: &Loaded, fault: bool, records: bool, out: &mut String) -> Outcome {
    let ws = &loaded.ws;
    let ext = ws.extensionalizer(store);
    let mut failures = 0usize;
    for f in formulas {
        for w in 0..ws.len() {
            let mut report = check_diagram(&ext, w, f).map_err(|e| usage(format!("{f}: {e}")))?;
            if fault {
                report.algebraic = complement(&report.algebraic, ws.domain()).map_err(usage)?;
                report.witness = report.tarski.symmetric_difference(&report.algebraic).into_iter().next();
                report.commutes = report.witness.is_none();
            }
            if report.commutes {
                continue;
            }
            failures += 1;
            let witness = report.witness.unwrap_or_default();
            let side = if report.tarski.contains(&witness) { "tarski" } else { "algebraic" };
            let name = ws.worlds()[w].name();
            let shown = render::tuple(&witness, &loaded.labels);
            if records {
                line!(out, "check=diagram result=fail world={name} witness={shown} only_in={side} formula={}", render::quoted(&f.to_string()));
            } else {
                line!(out, "FAIL {f} in world {name}: witness {shown} only in the {side} extension");
            }
        }
    }
    let pairs = formulas.len() * ws.len();
    if records {
        line!(out, "check=diagram formulas={} worlds={} pairs={pairs} failures={failures}", formulas.len(), ws.len());
    } else if failures == 0 {
        line!(out, "all {pairs} (formula, world) pairs commute ({} formulas, {} worlds)", formulas.len(), ws.len());
    } else {
        line!(out, "{failures} of {pairs} (formula, world) pairs do not commute");
    }
    Ok(if failures == 0 { 0 } else { 1 })
}

fn constraint(formulas: &[Formula], store: &ConceptStore, loaded: &Loaded, fault: bool, records: bool, out: &mut String) -> Outcome {
    let ws = &loaded.ws;
    let ext = ws.extensionalizer(store);
    let (mut checked, mut failures) = (0usize, 0usize);
    for f in formulas {
        for w in 0..ws.len() {
            let report = check_tarski_constraint(&ext, w, f).map_err(|e| usage(format!("{f}: {e}")))?;
            checked += report.assignments;
            let mut bad = report.failures;
            if fault && report.assignments > 0 && bad.is_empty() {
                let fv = f.free_vars().into_vec();
                let g: Assignment = fv.iter().cloned().zip(ws.domain().iter().cloned()).collect();
                if g.len() == fv.len() {
                    let (l, r) = ifol::semantics::tarski_constraint_sides(&ext, w, f, &g).map_err(usage)?;
                    bad.push((g, l, !r));
                }
            }
            for (g, left, right) in bad {
                failures += 1;
                let name = ws.worlds()[w].name();
                let shown = render::assignment(&g, &loaded.labels);
                if records {
                    line!(
                        out,
                        "check=constraint result=fail world={name} assignment={shown} grounded={} member={} formula={}",
                        render::truth(left),
                        render::truth(right),
                        render::quoted(&f.to_string())
                    );
                } else {
                    line!(
                        out,
                        "FAIL {f} in world {name} under [{shown}]: h(I(phi/g)) = {}, tuple membership = {}",
                        render::truth(left),
                        render::truth(right)
                    );
                }
            }
        }
    }
    if records {
        line!(out, "check=constraint formulas={} worlds={} assignments={checked} failures={failures}", formulas.len(), ws.len());
    } else if failures == 0 {
        line!(out, "constraint holds for all {checked} (formula, world, assignment) triples");
    } else {
        line!(out, "{failures} of {checked} (formula, world, assignment) triples violate the constraint");
    }
    Ok(if failures == 0 { 0 } else { 1 })
}

fn enumerate(loaded: &Loaded, count: bool, records: bool, out: &mut String) -> Outcome {
    let ws = &loaded.ws;
    if count {
        if records {
            line!(out, "worlds={}", ws.len());
        } else {
            line!(out, "{}", ws.len());
        }
        return Ok(0);
    }
    let first = &ws.worlds()[0];
    if records {
        for w in ws.worlds() {
            let mut rec = format!("world={}", w.name());
            for (p, r) in w.predicates() {
                write!(rec, " {p}={}", render::quoted(&render::tuples(r, &loaded.labels))).expect("write to string");
            }
            line!(out, "{rec}");
        }
        return Ok(0);
    }
    line!(out, "worlds");
    let names: Vec<String> = ws.domain().iter().map(|e| render::element(e, &loaded.labels)).collect();
    line!(out, "domain {}", names.join(" "));
    for (c, e) in first.constants() {
        line!(out, "const {c} = {}", render::element(e, &loaded.labels));
    }
    for w in ws.worlds() {
        line!(out);
        line!(out, "{}", render::world_block(w, &loaded.labels));
    }
    Ok(0)
}
