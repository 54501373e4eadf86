use std::collections::HashMap;

use super::{Formula, Term};
use crate::commutator::commutator;
use crate::implication::Implication;
use crate::universe::{NodeId, NodeStore};
use crate::{ElemSet, Element, Error, Logic, Result};

/// Truth values over a fixed logic, implication and store.
///
/// Atom values are memoized by node identity and persist across calls, so
/// one context should be reused for many sentences. Unbounded quantifiers
/// range over `domain`.
pub struct EvalContext<'a> {
    pub logic: &'a Logic,
    pub imp: &'a Implication,
    pub store: &'a NodeStore,
    pub domain: &'a [NodeId],
    eq_memo: HashMap<(NodeId, NodeId), Element>,
    in_memo: HashMap<(NodeId, NodeId), Element>,
    com_memo: HashMap<ElemSet, Element>,
}

impl<'a> EvalContext<'a> {
    pub fn new(logic: &'a Logic, imp: &'a Implication, store: &'a NodeStore, domain: &'a [NodeId]) -> Self {
        EvalContext {
            logic,
            imp,
            store,
            domain,
            eq_memo: HashMap::new(),
            in_memo: HashMap::new(),
            com_memo: HashMap::new(),
        }
    }

    fn imp(&self, p: Element, q: Element) -> Element {
        self.imp.eval(p, q)
    }

    /// `⟦u = v⟧`.
    pub fn eq(&mut self, u: NodeId, v: NodeId) -> Element {
        if let Some(&r) = self.eq_memo.get(&(u, v)) {
            return r;
        }
        let l = self.logic;
        let mut acc = l.one();
        for &(x, ux) in self.store.entries(u) {
            let m = self.mem(x, v);
            acc = l.meet(acc, self.imp(ux, m));
        }
        for &(y, vy) in self.store.entries(v) {
            let m = self.mem(y, u);
            acc = l.meet(acc, self.imp(vy, m));
        }
        self.eq_memo.insert((u, v), acc);
        acc
    }

    /// `⟦u ∈ v⟧`.
    pub fn mem(&mut self, u: NodeId, v: NodeId) -> Element {
        if let Some(&r) = self.in_memo.get(&(u, v)) {
            return r;
        }
        debug_assert!(self.store.entries(v).iter().all(|&(y, _)| self.store.rank(y) < self.store.rank(v)));
        let l = self.logic;
        let mut acc = l.zero();
        for &(y, vy) in self.store.entries(v) {
            let e = self.eq(u, y);
            acc = l.join(acc, l.meet(vy, e));
        }
        self.in_memo.insert((u, v), acc);
        acc
    }

    /// `⟦u ⊆ v⟧ = ⟦∀x∈u (x ∈ v)⟧`.
    pub fn sub(&mut self, u: NodeId, v: NodeId) -> Element {
        let l = self.logic;
        let mut acc = l.one();
        for &(x, ux) in self.store.entries(u) {
            let m = self.mem(x, v);
            acc = l.meet(acc, self.imp(ux, m));
        }
        acc
    }

    /// `⟦⌀(u₁,..,uₙ)⟧`.
    pub fn com(&mut self, us: &[NodeId]) -> Element {
        let s = self.store.support_of(us);
        let l = self.logic;
        *self.com_memo.entry(s).or_insert_with(|| commutator(l, s))
    }

    /// Value of a closed formula.
    pub fn sentence(&mut self, f: &Formula) -> Result<Element> {
        let free = f.free_vars();
        if !free.is_empty() {
            return Err(Error::OpenFormula(free));
        }
        self.truth(f, &mut Vec::new())
    }

    /// Value of `f` with its free variables bound in `env` (later entries
    /// shadow earlier ones).
    pub fn value(&mut self, f: &Formula, env: &[(&str, NodeId)]) -> Result<Element> {
        let mut env: Vec<(&str, NodeId)> = env.to_vec();
        self.truth(f, &mut env)
    }

    fn term(&self, t: &Term, env: &[(&str, NodeId)]) -> Result<NodeId> {
        match t {
            Term::Var(v) => env
                .iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|&(_, id)| id)
                .ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::Node(id) if id.index() < self.store.len() => Ok(*id),
            Term::Node(id) => Err(Error::UnknownConstant(id.to_string())),
            Term::Lit(lit) => Err(Error::InvalidArgument(format!("unresolved literal {lit}"))),
        }
    }

    fn truth<'f>(&mut self, f: &'f Formula, env: &mut Vec<(&'f str, NodeId)>) -> Result<Element> {
        let l = self.logic;
        Ok(match f {
            Formula::In(a, b) => {
                let (a, b) = (self.term(a, env)?, self.term(b, env)?);
                self.mem(a, b)
            }
            Formula::Eq(a, b) => {
                let (a, b) = (self.term(a, env)?, self.term(b, env)?);
                self.eq(a, b)
            }
            Formula::Sub(a, b) => {
                let (a, b) = (self.term(a, env)?, self.term(b, env)?);
                self.sub(a, b)
            }
            Formula::Com(ts) => {
                let us = ts.iter().map(|t| self.term(t, env)).collect::<Result<Vec<_>>>()?;
                self.com(&us)
            }
            Formula::Not(a) => l.ortho(self.truth(a, env)?),
            Formula::And(a, b) => l.meet(self.truth(a, env)?, self.truth(b, env)?),
            Formula::Or(a, b) => l.join(self.truth(a, env)?, self.truth(b, env)?),
            Formula::Implies(a, b) => {
                let (p, q) = (self.truth(a, env)?, self.truth(b, env)?);
                self.imp(p, q)
            }
            Formula::Iff(a, b) => {
                let (p, q) = (self.truth(a, env)?, self.truth(b, env)?);
                l.meet(self.imp(p, q), self.imp(q, p))
            }
            Formula::Forall { var, bound, body } | Formula::Exists { var, bound, body } => {
                let universal = matches!(f, Formula::Forall { .. });
                let mut acc = if universal { l.one() } else { l.zero() };
                let range: Vec<(NodeId, Option<Element>)> = match bound {
                    Some(t) => {
                        let u = self.term(t, env)?;
                        self.store.entries(u).iter().map(|&(x, v)| (x, Some(v))).collect()
                    }
                    None => self.domain.iter().map(|&x| (x, None)).collect(),
                };
                for (x, weight) in range {
                    env.push((var.as_str(), x));
                    let r = self.truth(body, env);
                    env.pop();
                    let r = r?;
                    acc = match (universal, weight) {
                        (true, Some(w)) => l.meet(acc, self.imp(w, r)),
                        (true, None) => l.meet(acc, r),
                        (false, Some(w)) => l.join(acc, l.meet(w, r)),
                        (false, None) => l.join(acc, r),
                    };
                    if (universal && acc == l.zero()) || (!universal && acc == l.one()) {
                        break;
                    }
                }
                acc
            }
        })
    }
}
