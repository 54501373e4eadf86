//! Guided transfer of a `∀x ∃y ψ(x, y)` theorem into the
//! orthomodular-valued universe for one name `u`.

use std::collections::HashMap;

use serde::Serialize;

use super::corpus::{CorpusItem, Prefix};
use crate::formula::EvalContext;
use crate::implication::Implication;
use crate::universe::{build_fragment, Fragment, FragmentParams, NodeId, NodeStore};
use crate::{ElemSet, Element, Error, Logic, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub label: String,
    pub detail: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Success,
    WitnessBeyondFragment,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemonstratorTrace {
    pub item: String,
    pub u: String,
    pub p: String,
    pub outcome: Outcome,
    pub steps: Vec<TraceStep>,
}

impl DemonstratorTrace {
    pub fn succeeded(&self) -> bool {
        self.outcome == Outcome::Success
    }
}

/// A Boolean sublogic as a standalone logic with its own fragment.
struct BooleanIsland {
    logic: Logic,
    embedding: Vec<Element>,
    store: NodeStore,
    fragments: HashMap<u32, Option<Fragment>>,
}

/// Runs the demonstrator, caching Boolean sublogics and their fragments
/// across calls.
pub struct Demonstrator<'a> {
    pub logic: &'a Logic,
    pub imp: &'a Implication,
    pub params: FragmentParams,
    islands: HashMap<ElemSet, BooleanIsland>,
}

impl<'a> Demonstrator<'a> {
    pub fn new(logic: &'a Logic, imp: &'a Implication, params: FragmentParams) -> Self {
        Demonstrator { logic, imp, params, islands: HashMap::new() }
    }

    pub fn run(&mut self, store: &mut NodeStore, item: &CorpusItem, u: NodeId) -> Result<DemonstratorTrace> {
        if item.prefix != Prefix::Pi2 {
            return Err(Error::InvalidArgument(format!("{} is not a Π₂ item", item.name)));
        }
        let (l, imp, params) = (self.logic, self.imp, self.params);
        let psi = item.formula();
        let (xv, yv) = (item.vars[0], item.vars[1]);
        let mut t = Trace { steps: Vec::new() };
        let finish = |t: Trace, outcome: Outcome, p: Element, store: &NodeStore| DemonstratorTrace {
            item: item.name.to_string(),
            u: store.literal(l, u),
            p: l.name(p).to_string(),
            outcome,
            steps: t.steps,
        };

        // (1) p = ⌀(u)
        let p = store.qset_commutator(l, &[u]);
        t.step("p = com(u)", l.name(p).to_string(), true);

        // (2) B ⊇ L(u)^! ∩ L(u)^!!
        let lu = store.support(u);
        let z = l.center(lu);
        let b = l.maximal_boolean_sublogic_containing(z)?;
        t.step(
            "B maximal Boolean over L(u)^! ∩ L(u)^!!",
            format!("center {} in B = {}", l.format_set(z), l.format_set(b)),
            b.contains(p) && l.is_boolean(b) && l.commutant(b) == b,
        );

        // (3) u|p has support L(u) ∧ p inside B
        let up = store.restrict(l, u, p);
        let lup = store.support(up);
        let expect: ElemSet = lu.iter().map(|x| l.meet(x, p)).collect();
        if !t.step("u|p in V(B)", format!("L(u|p) = {}", l.format_set(lup)), lup == expect && lup.is_subset(b)) {
            return Ok(finish(t, Outcome::Failed, p, store));
        }

        // (4) witness v' in the B-fragment
        let island = self.island(b)?;
        let emb = island.embedding.clone();
        let back = |e: Element| emb.iter().position(|&x| x == e).map(Element::from_index);
        let up_b = island.store.transport(store, up, &back).expect("support inside B");
        let want = store.rank(up) + 1;
        let frag_rank = [want.max(params.rank_bound), params.rank_bound]
            .into_iter()
            .find(|&r| island.fragment(r, params).is_some());
        let Some(frag_rank) = frag_rank else {
            t.step("search B-fragment", "fragment over budget".into(), false);
            return Ok(finish(t, Outcome::WitnessBeyondFragment, p, store));
        };
        let b_imp = imp.restrict(&island.logic, &island.embedding)?;
        let candidates = island.fragment(frag_rank, params).unwrap().nodes().to_vec();
        let ubs: Vec<NodeId> = island.logic.elements().map(|e| island.store.make_ub(e)).collect();
        let bl = &island.logic;
        let mut cx = EvalContext::new(bl, &b_imp, &island.store, &[]);
        let mut found = None;
        for &c in &candidates {
            if cx.value(&psi, &[(xv, up_b), (yv, c)])? == bl.one() {
                found = Some(c);
                break;
            }
        }
        let Some(vprime) = found else {
            t.step(
                "search B-fragment",
                format!("no witness among {} names of rank <= {frag_rank}", candidates.len()),
                false,
            );
            return Ok(finish(t, Outcome::WitnessBeyondFragment, p, store));
        };
        t.step("witness v' in B-fragment", island.store.literal(bl, vprime), true);

        // (5) v(x) = ⟦x ∈ v'⟧_B on dom(v') ∪ {u_b}
        let mut dom: Vec<NodeId> = island.store.entries(vprime).iter().map(|e| e.0).collect();
        dom.extend(&ubs);
        dom.sort();
        dom.dedup();
        let entries: Vec<_> = dom.iter().map(|&x| (x, cx.mem(x, vprime))).collect();
        drop(cx);
        let vb = island.store.intern(entries);
        let bl = &island.logic;
        let mut cx = EvalContext::new(bl, &b_imp, &island.store, &[]);
        let eq_b = cx.eq(vb, vprime);
        let psi_b = cx.value(&psi, &[(xv, up_b), (yv, vb)])?;
        let ok = t.step(
            "v with [[v = v']]_B = 1 and [[psi(u|p, v)]]_B = 1",
            format!("[[v = v']]_B = {}, [[psi]]_B = {}", bl.name(eq_b), bl.name(psi_b)),
            eq_b == bl.one() && psi_b == bl.one(),
        );
        let v = store.transport(&island.store, vb, &|e| Some(emb[e.index()])).expect("embedding is total");
        if !ok {
            return Ok(finish(t, Outcome::Failed, p, store));
        }

        // (6) back in V(Q)
        let vp = store.restrict(l, v, p);
        let lv = store.support(v);
        let c_v = store.qset_commutator(l, &[v]);
        let c_uv = store.qset_commutator(l, &[u, v]);
        let mut cq = EvalContext::new(l, imp, store, &[]);
        let mut val = |a: NodeId, bb: NodeId| cq.value(&psi, &[(xv, a), (yv, bb)]);
        let psi_upv = val(up, v)?;
        let psi_uv = val(u, v)?;
        let psi_res = val(up, vp)?;
        let mut all = t.step(
            "L(v) = B, com(v) = 1, com(u, v) = p",
            format!("L(v) = {}, com(v) = {}, com(u, v) = {}", l.format_set(lv), l.name(c_v), l.name(c_uv)),
            lv == b && c_v == l.one() && c_uv == p,
        );
        all &= t.step("[[psi(u|p, v)]] = 1", l.name(psi_upv).to_string(), psi_upv == l.one());
        let chain = [l.meet(psi_uv, p), l.meet(psi_res, p), l.meet(psi_upv, p)];
        all &= t.step(
            "[[psi(u, v)]] ∧ p = [[psi(u|p, v|p)]] ∧ p = [[psi(u|p, v)]] ∧ p = p",
            chain.iter().map(|&e| l.name(e)).collect::<Vec<_>>().join(" = "),
            chain.iter().all(|&e| e == p),
        );
        let conj = l.meet(c_uv, psi_uv);
        let arrow = imp.eval(c_uv, psi_uv);
        all &= t.step(
            "p <= com(u, v) ∧ [[psi(u, v)]], com(u, v) => [[psi(u, v)]] = 1",
            format!("com ∧ psi = {}, com => psi = {}", l.name(conj), l.name(arrow)),
            l.leq(p, conj) && arrow == l.one(),
        );
        let outcome = if all { Outcome::Success } else { Outcome::Failed };
        Ok(finish(t, outcome, p, store))
    }

    fn island(&mut self, b: ElemSet) -> Result<&mut BooleanIsland> {
        if !self.islands.contains_key(&b) {
            let (logic, embedding) = self.logic.extract(b)?;
            self.islands.insert(
                b,
                BooleanIsland { logic, embedding, store: NodeStore::new(), fragments: HashMap::new() },
            );
        }
        Ok(self.islands.get_mut(&b).unwrap())
    }
}

impl BooleanIsland {
    fn fragment(&mut self, rank: u32, params: FragmentParams) -> Option<&Fragment> {
        if !self.fragments.contains_key(&rank) {
            let p = FragmentParams { rank_bound: rank, ..params };
            let f = build_fragment(&mut self.store, &self.logic, p).ok();
            self.fragments.insert(rank, f);
        }
        self.fragments[&rank].as_ref()
    }
}

struct Trace {
    steps: Vec<TraceStep>,
}

impl Trace {
    fn step(&mut self, label: &str, detail: String, ok: bool) -> bool {
        self.steps.push(TraceStep { label: label.to_string(), detail, ok });
        ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_node_literal;
    use crate::implication::ImplSpec;
    use crate::transfer::corpus::pi2_corpus;

    #[test]
    fn spec_examples() {
        let l = Logic::mo(2).unwrap();
        let imp = ImplSpec::poly(3).resolve(&l).unwrap();
        let mut s = NodeStore::new();
        let frag = build_fragment(&mut s, &l, FragmentParams::new(2, 2)).unwrap();
        let mut d = Demonstrator::new(&l, &imp, FragmentParams::new(2, 2));
        let items: Vec<_> = pi2_corpus().collect();
        let e = s.empty();
        let t = d.run(&mut s, items[1], e).unwrap();
        assert!(t.succeeded(), "{t:#?}");
        let v_step = t.steps.iter().find(|st| st.label.starts_with("witness")).unwrap();
        assert_eq!(v_step.detail, "{{}: 1}");
        let zero_com = parse_node_literal("{{}: a, {{}: b}: 1}", &mut s, &l).unwrap();
        assert_eq!(s.qset_commutator(&l, &[zero_com]), l.zero());
        for item in &items {
            let t = d.run(&mut s, item, zero_com).unwrap();
            assert!(t.succeeded(), "{t:#?}");
            assert_eq!(t.p, "0");
            for &u in frag.nodes() {
                let t = d.run(&mut s, item, u).unwrap();
                assert!(t.succeeded(), "{t:#?}");
            }
        }
    }
}
