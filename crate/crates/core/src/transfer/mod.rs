//! Verification suites for the set-theoretic metatheorems, run over
//! truncated fragments of the universe.
//!
//! Every suite returns a [`VerificationReport`]. Suites are pure given
//! their inputs; [`verify_many`] runs logics in parallel and returns
//! reports in input order.

mod corpus;
mod demonstrator;

pub use corpus::{
    all_tuples, delta0_corpus, hf_eval, pi2_corpus, vet_corpus, CorpusItem, Prefix, Scheduled, CORPUS, SCHEDULE,
};
pub use demonstrator::{Demonstrator, DemonstratorTrace, Outcome, TraceStep};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::commutator::{direct_product_check, maximal_boolean_sublogics, verify_commutator_equivalence};
use crate::formula::{self, parse, EvalContext, Formula, Term};
use crate::hf::stage;
use crate::implication::{
    check_axioms, deduction_checks, le_checks, mp_characterization, verify_implication_equivalences, Checklist,
    ImplSpec, Implication,
};
use crate::lattice::GeneratorSpec;
use crate::report::{VerificationReport, Witness};
use crate::universe::{build_fragment, Fragment, FragmentParams, NodeId, NodeStore};
use crate::{ElemSet, Element, Error, Logic, Result};

pub const SCOPE_NOTE: &str = "transfer for arbitrary quantifier prefixes is not asserted over truncated \
fragments; checked are the per-tuple Δ0 inequality and the Π₂ demonstrator";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Commutator,
    Implication,
    Equality,
    Elementary,
    Absoluteness,
    Restriction,
    Range,
    Transfer,
    BooleanMax,
    Demonstrator,
    Demorgan,
    BooleanBounded,
    Truncation,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Commutator,
        Suite::Implication,
        Suite::Equality,
        Suite::Elementary,
        Suite::Absoluteness,
        Suite::Restriction,
        Suite::Range,
        Suite::Transfer,
        Suite::BooleanMax,
        Suite::Demonstrator,
        Suite::Demorgan,
        Suite::BooleanBounded,
        Suite::Truncation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Commutator => "commutator",
            Suite::Implication => "implication",
            Suite::Equality => "equality",
            Suite::Elementary => "elementary",
            Suite::Absoluteness => "absoluteness",
            Suite::Restriction => "restriction",
            Suite::Range => "range",
            Suite::Transfer => "transfer",
            Suite::BooleanMax => "boolean-max",
            Suite::Demonstrator => "demonstrator",
            Suite::Demorgan => "demorgan-bounded",
            Suite::BooleanBounded => "boolean-bounded",
            Suite::Truncation => "truncation",
        }
    }

    /// Suites that evaluate formulas over a fragment and so sit behind the
    /// equality gate.
    pub fn uses_fragment(self) -> bool {
        !matches!(self, Suite::Commutator | Suite::Implication)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        if s == "demorgan" {
            return Ok(Suite::Demorgan);
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub fragment: FragmentParams,
    pub impls: Vec<ImplSpec>,
    pub seed: u64,
    /// Above this many tuples per formula, tuples are sampled.
    pub tuple_limit: usize,
    /// Seeded three-element sets for the commutator suite.
    pub commutator_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            fragment: FragmentParams::new(2, 2),
            impls: (0..6).map(ImplSpec::poly).collect(),
            seed: 1,
            tuple_limit: 30_000,
            commutator_samples: 500,
        }
    }
}

impl SuiteConfig {
    fn base_report(&self, suite: Suite, label: &str) -> VerificationReport {
        let impls: Vec<String> = self.impls.iter().map(|i| i.to_string()).collect();
        let mut r = VerificationReport::new(suite.name()).param("logic", label).param("seed", self.seed);
        if suite != Suite::Commutator {
            r.set_param("implications", impls);
        }
        if suite.uses_fragment() {
            r.set_param("rank_bound", self.fragment.rank_bound);
            r.set_param("dom_cap", self.fragment.dom_cap);
        }
        r
    }

    fn resolve(&self, l: &Logic) -> Result<Vec<Implication>> {
        self.impls.iter().map(|s| s.resolve(l)).collect()
    }
}

/// Tuples of length `k` over `nodes`: all of them, or a seeded sample when
/// there are more than the limit.
fn tuples(nodes: &[NodeId], k: usize, cfg: &SuiteConfig, salt: u64) -> (Vec<Vec<NodeId>>, Option<String>) {
    let total = (nodes.len() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total <= cfg.tuple_limit as u128 {
        return (all_tuples(nodes, k), None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(salt);
    let sample = (0..cfg.tuple_limit)
        .map(|_| (0..k).map(|_| nodes[rng.random_range(0..nodes.len())]).collect())
        .collect();
    (sample, Some(format!("sampled {} of {total} {k}-tuples", cfg.tuple_limit)))
}

fn note_sampling(r: &mut VerificationReport, note: Option<String>) {
    if let Some(n) = note {
        r.set_param("tuples", n);
    }
}

/// `f` with its variables replaced by node literals.
fn close(f: &Formula, vars: &[&str], tuple: &[NodeId], store: &NodeStore, l: &Logic) -> String {
    let sub: Vec<(&str, Term)> = vars.iter().copied().zip(tuple.iter().map(|&u| Term::Node(u))).collect();
    f.substitute(&sub).display_with(store, l).to_string()
}

fn env<'a>(vars: &[&'a str], tuple: &[NodeId]) -> Vec<(&'a str, NodeId)> {
    vars.iter().copied().zip(tuple.iter().copied()).collect()
}

fn schedule_formulas() -> Vec<(Formula, &'static [&'static str])> {
    SCHEDULE.iter().map(|s| (s.formula(), s.vars)).collect()
}

fn fragment(l: &Logic, cfg: &SuiteConfig) -> Result<(NodeStore, Fragment)> {
    let mut store = NodeStore::new();
    let frag = build_fragment(&mut store, l, cfg.fragment)?;
    Ok((store, frag))
}

pub fn run_suite(suite: Suite, label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    match suite {
        Suite::Commutator => commutator_suite(label, l, cfg),
        Suite::Implication => implication_suite(label, l, cfg),
        Suite::Equality => equality_suite(label, l, cfg),
        Suite::Elementary => elementary_suite(label, l, cfg),
        Suite::Absoluteness => absoluteness_suite(label, l, cfg),
        Suite::Restriction => restriction_suite(label, l, cfg),
        Suite::Range => range_suite(label, l, cfg),
        Suite::Transfer => transfer_suite(label, l, cfg),
        Suite::BooleanMax => boolean_max_suite(label, l, cfg),
        Suite::Demonstrator => demonstrator_suite(label, l, cfg),
        Suite::Demorgan => demorgan_suite(label, l, cfg),
        Suite::BooleanBounded => boolean_bounded_suite(label, l, cfg),
        Suite::Truncation => truncation_suite(label, l, cfg),
    }
}

/// Runs the selected suites on one logic. Fragment suites run only after
/// the equality suite passes; otherwise each is reported as failed.
pub fn verify(label: &str, l: &Logic, suites: &[Suite], cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let mut gate: Option<bool> = None;
    for &s in suites {
        if s.uses_fragment() && s != Suite::Equality {
            let open = match gate {
                Some(g) => g,
                None => {
                    let g = equality_suite(label, l, cfg)?;
                    let ok = g.passed();
                    if !suites.contains(&Suite::Equality) && !ok {
                        out.push(g);
                    }
                    gate = Some(ok);
                    ok
                }
            };
            if !open {
                let mut r = cfg.base_report(s, label).param("skipped", "equality gate failed");
                r.check(false, || Witness::new(label, "-", "equality gate failed"));
                out.push(r);
                continue;
            }
        }
        let r = run_suite(s, label, l, cfg)?;
        if s == Suite::Equality {
            gate = Some(r.passed());
        }
        out.push(r);
    }
    Ok(out)
}

/// [`verify`] over several logics in parallel; reports come back grouped
/// by logic in input order.
pub fn verify_many(logics: &[(String, Logic)], suites: &[Suite], cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let per: Vec<Result<Vec<VerificationReport>>> =
        logics.par_iter().map(|(name, l)| verify(name, l, suites, cfg)).collect();
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}

fn checklist_into(r: &mut VerificationReport, label: &str, imp: &str, l: &Logic, list: &Checklist) {
    for (name, v) in &list.0 {
        r.check(v.holds, || {
            let w = v.witness.as_deref().map(|w| crate::implication::format_witness(l, w)).unwrap_or_default();
            Witness::new(label, imp, format!("{name} {w}"))
        });
    }
}

/// Four-way commutator agreement and the direct-product structure, over
/// every subset of size at most 2 plus seeded 3-element subsets.
pub fn commutator_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::Commutator, label);
    let elems: Vec<Element> = l.elements().collect();
    let mut sets = vec![ElemSet::EMPTY];
    for (i, &a) in elems.iter().enumerate() {
        sets.push(ElemSet::singleton(a));
        for &b in &elems[i + 1..] {
            sets.push([a, b].into_iter().collect());
        }
    }
    let exhaustive = sets.len();
    if elems.len() >= 3 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        while sets.len() < exhaustive + cfg.commutator_samples {
            let s: ElemSet = (0..3).map(|_| elems[rng.random_range(0..elems.len())]).collect();
            if s.len() == 3 {
                sets.push(s);
            }
        }
    }
    r.set_param("subsets", format!("{exhaustive} exhaustive, {} sampled", sets.len() - exhaustive));
    for a in sets {
        let rep = verify_commutator_equivalence(l, a)?;
        r.check(rep.agree(), || {
            Witness::new(label, "-", format!("routes disagree on {}: {rep:?}", l.format_set(a)))
        });
        let dp = direct_product_check(l, a);
        r.check(dp.holds(), || Witness::new(label, "-", format!("direct product fails on {}: {dp:?}", l.format_set(a))));
    }
    Ok(r)
}

/// Axioms, characterizations and the deduction theorem for each implication.
pub fn implication_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::Implication, label);
    for imp in cfg.resolve(l)? {
        let lab = imp.label().to_string();
        let ax = check_axioms(l, &imp);
        r.check(ax.is_generalized_implication(), || Witness::new(label, &lab, "not a generalized implication"));
        let eq = verify_implication_equivalences(l, &imp);
        r.check(eq.holds(), || Witness::new(label, &lab, format!("equivalent conditions disagree: {eq:?}")));
        checklist_into(&mut r, label, &lab, l, &deduction_checks(l, &imp));
        checklist_into(&mut r, label, &lab, l, &mp_characterization(l, &imp));
        checklist_into(&mut r, label, &lab, l, &le_checks(l, &imp));
    }
    Ok(r)
}

/// `⟦u=u⟧ = 1`, `⟦u=v⟧ = ⟦v=u⟧` and `u(x) ≤ ⟦x∈u⟧` on every node.
pub fn equality_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::Equality, label);
    let (store, frag) = fragment(l, cfg)?;
    let (pairs, note) = tuples(frag.nodes(), 2, cfg, 0x45);
    note_sampling(&mut r, note);
    let lit = |u: NodeId| store.literal(l, u);
    for imp in cfg.resolve(l)? {
        let lab = imp.label();
        let mut cx = EvalContext::new(l, &imp, &store, &[]);
        for &u in frag.nodes() {
            let e = cx.eq(u, u);
            r.check(e == l.one(), || Witness::new(label, lab, "u = u").eval(format!("{0} = {0}", lit(u)), l.name(e)));
            for &(x, ux) in store.entries(u) {
                let m = cx.mem(x, u);
                r.check(l.leq(ux, m), || {
                    Witness::new(label, lab, format!("u(x) = {} <= [[x in u]]", l.name(ux)))
                        .eval(format!("{} in {}", lit(x), lit(u)), l.name(m))
                });
            }
        }
        for t in &pairs {
            let (a, b) = (cx.eq(t[0], t[1]), cx.eq(t[1], t[0]));
            r.check(a == b, || {
                Witness::new(label, lab, "[[u = v]] = [[v = u]]")
                    .eval(format!("{} = {}", lit(t[0]), lit(t[1])), l.name(a))
                    .eval(format!("{} = {}", lit(t[1]), lit(t[0])), l.name(b))
            });
        }
    }
    Ok(r)
}

/// HF truth agrees with `⟦φ(ǔ..)⟧ = 1` on every scheduled formula and every
/// tuple from `V_4`.
pub fn elementary_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::Elementary, label).param("hf_sets", "V_4 (16 sets)");
    r.params.remove("rank_bound");
    r.params.remove("dom_cap");
    let v4 = stage(4);
    let mut store = NodeStore::new();
    let checks: Vec<NodeId> = v4.iter().map(|&s| store.check_embed(l, s)).collect();
    let idx: Vec<usize> = (0..v4.len()).collect();
    let sched = schedule_formulas();
    for imp in cfg.resolve(l)? {
        let lab = imp.label();
        let mut cx = EvalContext::new(l, &imp, &store, &[]);
        for (f, vars) in &sched {
            for t in all_tuples(&idx, vars.len()) {
                let hf_env: Vec<_> = vars.iter().copied().zip(t.iter().map(|&i| v4[i])).collect();
                let truth = hf_eval(f, &hf_env, &[])?;
                let nodes: Vec<NodeId> = t.iter().map(|&i| checks[i]).collect();
                let v = cx.value(f, &env(vars, &nodes))?;
                let ok = (v == l.one()) == truth && (v == l.one() || v == l.zero());
                r.check(ok, || {
                    let sets: Vec<String> = t.iter().map(|&i| v4[i].to_string()).collect();
                    Witness::new(label, lab, format!("HF says {truth} at ({})", sets.join(", ")))
                        .eval(close(f, vars, &nodes, &store, l), l.name(v))
                });
            }
        }
    }
    Ok(r)
}

/// Sublogics used by the absoluteness suite: `{0,1}`, the center, every
/// `Q({a})`, every maximal Boolean sublogic and the whole logic.
pub fn sublogics(l: &Logic) -> Vec<(String, ElemSet)> {
    let mut out: Vec<(String, ElemSet)> = Vec::new();
    let mut push = |name: String, s: ElemSet| {
        if !out.iter().any(|(_, t)| *t == s) {
            out.push((name, s));
        }
    };
    push("{0,1}".into(), l.sublogic_generated(ElemSet::EMPTY));
    push("center".into(), l.center(l.carrier()));
    for a in l.elements() {
        push(format!("Q({})", l.name(a)), l.sublogic_generated(ElemSet::singleton(a)));
    }
    for (i, b) in maximal_boolean_sublogics(l).into_iter().enumerate() {
        push(format!("B{i}"), b);
    }
    push("whole".into(), l.carrier());
    out
}

struct SubCase {
    name: String,
    logic: Logic,
    embedding: Vec<Element>,
    store: NodeStore,
    nodes: Vec<NodeId>,
    images: Vec<NodeId>,
}

/// Values computed inside a sublogic's fragment equal the values of the
/// same names computed in the whole logic.
pub fn absoluteness_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::Absoluteness, label);
    let mut store = NodeStore::new();
    let mut cases = Vec::new();
    for (name, s) in sublogics(l) {
        let (sub, embedding) = l.extract(s)?;
        let mut sstore = NodeStore::new();
        let frag = build_fragment(&mut sstore, &sub, cfg.fragment)?;
        let nodes = frag.nodes().to_vec();
        let images = nodes
            .iter()
            .map(|&u| store.transport(&sstore, u, &|e| Some(embedding[e.index()])).unwrap())
            .collect();
        cases.push(SubCase { name, logic: sub, embedding, store: sstore, nodes, images });
    }
    r.set_param("sublogics", cases.iter().map(|c| format!("{} ({})", c.name, c.logic.size())).collect::<Vec<_>>());
    let sched = schedule_formulas();
    for imp in cfg.resolve(l)? {
        let lab = imp.label();
        let mut cl = EvalContext::new(l, &imp, &store, &[]);
        for case in &cases {
            let simp = imp.restrict(&case.logic, &case.embedding)?;
            let mut cs = EvalContext::new(&case.logic, &simp, &case.store, &[]);
            let idx: Vec<usize> = (0..case.nodes.len()).collect();
            for (n, (f, vars)) in sched.iter().enumerate() {
                let pos: Vec<NodeId> = idx.iter().map(|&i| NodeId::from_raw(i as u32)).collect();
                let (ts, note) = tuples(&pos, vars.len(), cfg, n as u64);
                note_sampling(&mut r, note);
                for t in ts {
                    let t: Vec<usize> = t.iter().map(|x| x.index()).collect();
                    let sub_nodes: Vec<NodeId> = t.iter().map(|&i| case.nodes[i]).collect();
                    let nodes: Vec<NodeId> = t.iter().map(|&i| case.images[i]).collect();
                    let vs = cs.value(f, &env(vars, &sub_nodes))?;
                    let vl = cl.value(f, &env(vars, &nodes))?;
                    r.check(case.embedding[vs.index()] == vl, || {
                        Witness::new(label, lab, format!("in {} the value is {}", case.name, case.logic.name(vs)))
                            .eval(close(f, vars, &nodes, &store, l), l.name(vl))
                    });
                }
            }
        }
    }
    Ok(r)
}

/// Every fragment node restricted to every element, so evaluation can
/// borrow the store immutably afterwards.
fn restriction_table(store: &mut NodeStore, l: &Logic, frag: &Fragment) -> std::collections::HashMap<(NodeId, Element), NodeId> {
    let mut t = std::collections::HashMap::new();
    for &u in frag.nodes() {
        for p in l.elements() {
            t.insert((u, p), store.restrict(l, u, p));
        }
    }
    t
}

/// Atom identities for restricted names, and `⟦φ(ū)⟧∧p = ⟦φ(ū|p)⟧∧p` for
/// every scheduled formula, tuple and `p` in the commutant of the tuple's
/// support.
pub fn restriction_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::Restriction, label);
    let (mut store, frag) = fragment(l, cfg)?;
    let rt = restriction_table(&mut store, l, &frag);
    let store = store;
    let lit = |u: NodeId| store.literal(l, u);
    let sched = schedule_formulas();
    let (pairs, note) = tuples(frag.nodes(), 2, cfg, 0x52);
    note_sampling(&mut r, note);
    for imp in cfg.resolve(l)? {
        let lab = imp.label();
        let mut cx = EvalContext::new(l, &imp, &store, &[]);
        for t in &pairs {
            let (u, v) = (t[0], t[1]);
            for p in l.commutant(store.support_of(t)) {
                let (up, vp) = (rt[&(u, p)], rt[&(v, p)]);
                let checks = [
                    ("(i) [[u|p in v|p]] = [[u in v]] ∧ p", cx.mem(up, vp), l.meet(cx.mem(u, v), p), "in"),
                    ("(ii) [[u|p sub v|p]] ∧ p = [[u sub v]] ∧ p", l.meet(cx.sub(up, vp), p), l.meet(cx.sub(u, v), p), "sub"),
                    ("(iii) [[u|p = v|p]] ∧ p = [[u = v]] ∧ p", l.meet(cx.eq(up, vp), p), l.meet(cx.eq(u, v), p), "="),
                ];
                for (claim, a, b, op) in checks {
                    r.check(a == b, || {
                        Witness::new(label, lab, format!("{claim} at p = {}: {} vs {}", l.name(p), l.name(a), l.name(b)))
                            .eval(format!("{} {op} {}", lit(up), lit(vp)), l.name(a))
                            .eval(format!("{} {op} {}", lit(u), lit(v)), l.name(b))
                    });
                }
            }
        }
        for (n, (f, vars)) in sched.iter().enumerate() {
            let (ts, note) = tuples(frag.nodes(), vars.len(), cfg, 0x100 + n as u64);
            note_sampling(&mut r, note);
            for t in ts {
                let plain = cx.value(f, &env(vars, &t))?;
                for p in l.commutant(store.support_of(&t)) {
                    let rest: Vec<NodeId> = t.iter().map(|&u| rt[&(u, p)]).collect();
                    let restricted = cx.value(f, &env(vars, &rest))?;
                    let (a, b) = (l.meet(plain, p), l.meet(restricted, p));
                    r.check(a == b, || {
                        Witness::new(label, lab, format!("[[phi(u)]] ∧ p = [[phi(u|p)]] ∧ p at p = {}", l.name(p)))
                            .eval(close(f, vars, &t, &store, l), l.name(plain))
                            .eval(close(f, vars, &rest, &store, l), l.name(restricted))
                    });
                }
            }
        }
    }
    Ok(r)
}

/// Truth values lie in the logic generated by the supports and commute
/// with every `p` in the commutant, before and after restriction.
pub fn range_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::Range, label);
    let (mut store, frag) = fragment(l, cfg)?;
    let rt = restriction_table(&mut store, l, &frag);
    let store = store;
    let sched = schedule_formulas();
    for imp in cfg.resolve(l)? {
        let lab = imp.label();
        let mut cx = EvalContext::new(l, &imp, &store, &[]);
        for (n, (f, vars)) in sched.iter().enumerate() {
            let (ts, note) = tuples(frag.nodes(), vars.len(), cfg, 0x200 + n as u64);
            note_sampling(&mut r, note);
            for t in ts {
                let v = cx.value(f, &env(vars, &t))?;
                let q = store.generated_logic(l, &t);
                r.check(q.contains(v), || {
                    Witness::new(label, lab, format!("value outside Q(u) = {}", l.format_set(q)))
                        .eval(close(f, vars, &t, &store, l), l.name(v))
                });
                for p in l.commutant(store.support_of(&t)) {
                    let rest: Vec<NodeId> = t.iter().map(|&u| rt[&(u, p)]).collect();
                    let vr = cx.value(f, &env(vars, &rest))?;
                    r.check(l.commutes(p, v) && l.commutes(p, vr), || {
                        Witness::new(label, lab, format!("p = {} fails to commute", l.name(p)))
                            .eval(close(f, vars, &t, &store, l), l.name(v))
                            .eval(close(f, vars, &rest, &store, l), l.name(vr))
                    });
                }
            }
        }
    }
    Ok(r)
}

/// `⌀(ū) ≤ ⟦φ(ū)⟧` for every Δ0 corpus item and tuple.
pub fn transfer_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::Transfer, label).param("scope", SCOPE_NOTE);
    let (store, frag) = fragment(l, cfg)?;
    for imp in cfg.resolve(l)? {
        let lab = imp.label();
        let mut cx = EvalContext::new(l, &imp, &store, &[]);
        for (n, item) in delta0_corpus().enumerate() {
            let f = item.formula();
            let (ts, note) = tuples(frag.nodes(), item.vars.len(), cfg, 0x300 + n as u64);
            note_sampling(&mut r, note);
            for t in ts {
                let c = cx.com(&t);
                let v = cx.value(&f, &env(item.vars, &t))?;
                r.check(l.leq(c, v), || {
                    Witness::new(label, lab, format!("{}: com = {} not below value", item.name, l.name(c)))
                        .eval(close(&f, item.vars, &t, &store, l), l.name(v))
                });
            }
        }
    }
    Ok(r)
}

/// Σ₁ sentences `∃x φ(x, y)` for the Boolean maximum suite, with whether
/// the fragment is expected to contain a witness.
pub const SIGMA1: &[(&str, bool)] = &[
    ("exists x (x = x)", true),
    ("exists x (x in check(1))", true),
    ("exists x (x = y)", true),
    ("exists x (x sub y and y sub x)", true),
    ("exists x (forall t in x (t in y))", true),
    ("exists x (x in y)", false),
    ("exists x (y in x)", false),
];

/// On a Boolean logic, the supremum of `∃x φ` over the fragment is
/// attained by a node. Non-Boolean logics are skipped.
pub fn boolean_max_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::BooleanMax, label);
    if !l.is_boolean_logic() {
        r.set_param("skipped", "logic is not Boolean");
        return Ok(r);
    }
    r.set_param("quantifiers", "unbounded quantifiers are fragment-relative");
    let (mut store, frag) = fragment(l, cfg)?;
    let sentences: Vec<(Formula, bool)> = SIGMA1
        .iter()
        .map(|&(t, w)| Ok((parse(t, &["y"])?.resolve(&mut store, l)?, w)))
        .collect::<Result<_>>()?;
    let store = store;
    let (mut attained, mut missed) = (0u64, 0u64);
    for imp in cfg.resolve(l)? {
        let lab = imp.label();
        let mut cx = EvalContext::new(l, &imp, &store, frag.nodes());
        for (f, witnessable) in &sentences {
            let Formula::Exists { var, body, .. } = f else { unreachable!() };
            for &y in frag.nodes() {
                let sup = cx.value(f, &[("y", y)])?;
                let mut hit = None;
                for &x in frag.nodes() {
                    if cx.value(body, &[("y", y), (var.as_str(), x)])? == sup {
                        hit = Some(x);
                        break;
                    }
                }
                match hit {
                    Some(_) => attained += 1,
                    None => missed += 1,
                }
                if *witnessable {
                    r.check(hit.is_some(), || {
                        Witness::new(label, lab, "supremum not attained in the fragment")
                            .eval(close(f, &["y"], &[y], &store, l), l.name(sup))
                    });
                }
            }
        }
    }
    r.set_param("attained", attained);
    r.set_param("not_attained", missed);
    Ok(r)
}

/// The Π₂ demonstrator for every corpus Π₂ item and every fragment node.
pub fn demonstrator_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::Demonstrator, label).param("scope", SCOPE_NOTE);
    let (mut store, frag) = fragment(l, cfg)?;
    for imp in cfg.resolve(l)? {
        let lab = imp.label().to_string();
        let mut d = Demonstrator::new(l, &imp, cfg.fragment);
        for item in pi2_corpus() {
            let mut shown = false;
            for &u in frag.nodes() {
                let t = d.run(&mut store, item, u)?;
                let ok = t.succeeded();
                let describe = |t: &DemonstratorTrace, w: Witness| {
                    t.steps.iter().fold(w, |w, s| {
                        w.eval(format!("{}{}", if s.ok { "" } else { "FAILED " }, s.label), s.detail.clone())
                    })
                };
                r.check(ok, || {
                    describe(&t, Witness::new(label, &lab, format!("{} at u = {}: {:?}", item.name, t.u, t.outcome)))
                });
                if ok && !shown && store.qset_commutator(l, &[u]) != l.one() {
                    r.record(describe(&t, Witness::new(label, &lab, format!("{} at u = {}", item.name, t.u)).found()));
                    shown = true;
                }
            }
        }
    }
    Ok(r)
}

pub fn demorgan_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::Demorgan, label);
    let (store, frag) = fragment(l, cfg)?;
    for imp in cfg.resolve(l)? {
        let sub = formula::demorgan_checks(l, &imp, &store, &frag, label)?;
        r.set_param(
            &format!("{} bounded law", imp.label()),
            match (sub.params.get("bounded_law_expected"), sub.params.get("bounded_counterexample_found")) {
                (Some(serde_json::Value::Bool(true)), _) => "expected to hold",
                (_, Some(serde_json::Value::Bool(true))) => "counterexample found",
                _ => "counterexample not found",
            },
        );
        r.absorb(sub);
    }
    Ok(r)
}

pub fn boolean_bounded_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::BooleanBounded, label);
    if !l.is_boolean_logic() {
        r.set_param("skipped", "logic is not Boolean");
        return Ok(r);
    }
    let (store, frag) = fragment(l, cfg)?;
    for imp in cfg.resolve(l)? {
        r.absorb(formula::boolean_bounded_equivalence(l, &imp, &store, &frag, label)?);
    }
    Ok(r)
}

/// Compares unbounded quantifiers over the configured fragment and over
/// one a rank higher (or, over budget, with a larger domain cap).
pub fn truncation_suite(label: &str, l: &Logic, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = cfg.base_report(Suite::Truncation, label);
    let mut store = NodeStore::new();
    let small = build_fragment(&mut store, l, cfg.fragment)?;
    let p = cfg.fragment;
    let large = build_fragment(&mut store, l, FragmentParams { rank_bound: p.rank_bound + 1, ..p })
        .or_else(|_| build_fragment(&mut store, l, FragmentParams { dom_cap: p.dom_cap + 1, ..p }))?;
    for imp in cfg.resolve(l)? {
        let sub = formula::monotone_truncation_check(l, &imp, &store, &small, &large, label)?;
        r.set_param("large", sub.params["large"].clone());
        r.absorb(sub);
    }
    Ok(r)
}

/// Re-evaluates every recorded sentence of a witness. Returns whether all
/// recorded values reproduce. Unbounded quantifiers range over the
/// fragment built from `params`.
pub fn replay(w: &Witness, params: FragmentParams) -> Result<bool> {
    let l = w.logic.parse::<GeneratorSpec>()?.build()?;
    let imp = w.implication.parse::<ImplSpec>()?.resolve(&l)?;
    let mut store = NodeStore::new();
    let frag = build_fragment(&mut store, &l, params)?;
    let mut resolved = Vec::new();
    for e in &w.evaluations {
        resolved.push((parse(&e.sentence, &[])?.resolve(&mut store, &l)?, &e.value));
    }
    let mut cx = EvalContext::new(&l, &imp, &store, frag.nodes());
    for (f, value) in resolved {
        if l.name(cx.sentence(&f)?) != value.as_str() {
            return Ok(false);
        }
    }
    Ok(true)
}
