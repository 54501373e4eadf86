//! Formulas of set theory with a commutator predicate, evaluated in the
//! orthomodular-valued universe.

mod checks;
mod eval;
mod parse;

pub use checks::{
    boolean_bounded_equivalence, demorgan_checks, is_maximum_implication, monotone_truncation_check, PARAM_SCHEDULE,
};
pub use eval::EvalContext;
pub use parse::{parse, parse_node_literal};

use std::fmt;

use crate::hf::Hf;
use crate::universe::{NodeId, NodeStore};
use crate::{Error, Logic, Result};

/// A name literal as written in formula text, resolved against a store
/// before evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NodeLit {
    Map(Vec<(NodeLit, String)>),
    Check(Hf),
    Ub(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Node(NodeId),
    Lit(NodeLit),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    In(Term, Term),
    Eq(Term, Term),
    Sub(Term, Term),
    Com(Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall { var: String, bound: Option<Term>, body: Box<Formula> },
    Exists { var: String, bound: Option<Term>, body: Box<Formula> },
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(var: &str, bound: Option<Term>, body: Formula) -> Formula {
        Formula::Forall { var: var.to_string(), bound, body: Box::new(body) }
    }

    pub fn exists(var: &str, bound: Option<Term>, body: Formula) -> Formula {
        Formula::Exists { var: var.to_string(), bound, body: Box::new(body) }
    }

    /// No unbounded quantifier occurs.
    pub fn is_delta0(&self) -> bool {
        match self {
            Formula::In(..) | Formula::Eq(..) | Formula::Sub(..) | Formula::Com(_) => true,
            Formula::Not(a) => a.is_delta0(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_delta0() && b.is_delta0()
            }
            Formula::Forall { bound, body, .. } | Formula::Exists { bound, body, .. } => {
                bound.is_some() && body.is_delta0()
            }
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut Vec<String>) {
        let mut term = |t: &Term, bound: &Vec<&str>| {
            if let Term::Var(v) = t {
                if !bound.contains(&v.as_str()) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
        };
        match self {
            Formula::In(a, b) | Formula::Eq(a, b) | Formula::Sub(a, b) => {
                term(a, bound);
                term(b, bound);
            }
            Formula::Com(ts) => ts.iter().for_each(|t| term(t, bound)),
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall { var, bound: t, body } | Formula::Exists { var, bound: t, body } => {
                if let Some(t) = t {
                    term(t, bound);
                }
                bound.push(var);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Replaces free occurrences of variables by terms.
    pub fn substitute(&self, sub: &[(&str, Term)]) -> Formula {
        let mut term = |t: &Term, shadow: &[&str]| -> Result<Term> {
            if let Term::Var(v) = t {
                if !shadow.contains(&v.as_str()) {
                    if let Some((_, r)) = sub.iter().find(|(n, _)| n == v) {
                        return Ok(r.clone());
                    }
                }
            }
            Ok(t.clone())
        };
        self.map_terms(&mut Vec::new(), &mut term).expect("substitution is infallible")
    }

    /// Interns every literal term into `store`.
    pub fn resolve(&self, store: &mut NodeStore, l: &Logic) -> Result<Formula> {
        self.map_terms(&mut Vec::new(), &mut |t, _| match t {
            Term::Lit(lit) => resolve_lit(store, l, lit).map(Term::Node),
            Term::Node(id) if id.index() >= store.len() => Err(Error::UnknownConstant(id.to_string())),
            _ => Ok(t.clone()),
        })
    }

    fn map_terms<'a>(
        &'a self,
        shadow: &mut Vec<&'a str>,
        f: &mut dyn FnMut(&Term, &[&str]) -> Result<Term>,
    ) -> Result<Formula> {
        let bin = |a: &'a Formula, b: &'a Formula, shadow: &mut Vec<&'a str>, f: &mut dyn FnMut(&Term, &[&str]) -> Result<Term>| -> Result<(Box<Formula>, Box<Formula>)> {
            Ok((Box::new(a.map_terms(shadow, f)?), Box::new(b.map_terms(shadow, f)?)))
        };
        Ok(match self {
            Formula::In(a, b) => Formula::In(f(a, shadow)?, f(b, shadow)?),
            Formula::Eq(a, b) => Formula::Eq(f(a, shadow)?, f(b, shadow)?),
            Formula::Sub(a, b) => Formula::Sub(f(a, shadow)?, f(b, shadow)?),
            Formula::Com(ts) => Formula::Com(ts.iter().map(|t| f(t, shadow)).collect::<Result<_>>()?),
            Formula::Not(a) => Formula::Not(Box::new(a.map_terms(shadow, f)?)),
            Formula::And(a, b) => {
                let (a, b) = bin(a, b, shadow, f)?;
                Formula::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = bin(a, b, shadow, f)?;
                Formula::Or(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = bin(a, b, shadow, f)?;
                Formula::Implies(a, b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = bin(a, b, shadow, f)?;
                Formula::Iff(a, b)
            }
            Formula::Forall { var, bound, body } | Formula::Exists { var, bound, body } => {
                let bound = match bound {
                    Some(t) => Some(f(t, shadow)?),
                    None => None,
                };
                shadow.push(var);
                let body = body.map_terms(shadow, f);
                shadow.pop();
                let body = Box::new(body?);
                if matches!(self, Formula::Forall { .. }) {
                    Formula::Forall { var: var.clone(), bound, body }
                } else {
                    Formula::Exists { var: var.clone(), bound, body }
                }
            }
        })
    }

    /// Text with every node printed as a literal, so it parses in a fresh
    /// store.
    pub fn display_with<'a>(&'a self, store: &'a NodeStore, l: &'a Logic) -> impl fmt::Display + 'a {
        Printer { f: self, ctx: Some((store, l)) }
    }
}

pub(crate) fn resolve_lit(store: &mut NodeStore, l: &Logic, lit: &NodeLit) -> Result<NodeId> {
    let elem = |name: &str| l.by_name(name).ok_or_else(|| Error::UnknownConstant(name.to_string()));
    match lit {
        NodeLit::Check(s) => Ok(store.check_embed(l, *s)),
        NodeLit::Ub(name) => Ok(store.make_ub(elem(name)?)),
        NodeLit::Map(entries) => {
            let mut out = Vec::with_capacity(entries.len());
            for (c, v) in entries {
                out.push((resolve_lit(store, l, c)?, elem(v)?));
            }
            Ok(store.intern(out))
        }
    }
}

struct Printer<'a> {
    f: &'a Formula,
    ctx: Option<(&'a NodeStore, &'a Logic)>,
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer { f: self, ctx: None }.fmt(f)
    }
}

impl fmt::Display for NodeLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeLit::Check(s) => write!(f, "check({s})"),
            NodeLit::Ub(e) => write!(f, "ub({e})"),
            NodeLit::Map(entries) => {
                f.write_str("{")?;
                for (i, (c, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}: {v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        _ => 5,
    }
}

impl Printer<'_> {
    fn term(&self, t: &Term, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (t, self.ctx) {
            (Term::Var(v), _) => out.write_str(v),
            (Term::Node(id), Some((s, l))) if id.index() < s.len() => out.write_str(&s.literal(l, *id)),
            (Term::Node(id), _) => write!(out, "{id}"),
            (Term::Lit(lit), _) => write!(out, "{lit}"),
        }
    }

    fn at(&self, f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if prec(f) < min {
            out.write_str("(")?;
            self.go(f, out)?;
            out.write_str(")")
        } else {
            self.go(f, out)
        }
    }

    fn go(&self, f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bin = |a: &Formula, op: &str, lmin: u8, b: &Formula, rmin: u8, out: &mut fmt::Formatter<'_>| {
            self.at(a, lmin, out)?;
            write!(out, " {op} ")?;
            self.at(b, rmin, out)
        };
        match f {
            Formula::In(a, b) | Formula::Eq(a, b) | Formula::Sub(a, b) => {
                self.term(a, out)?;
                out.write_str(match f {
                    Formula::In(..) => " in ",
                    Formula::Eq(..) => " = ",
                    _ => " sub ",
                })?;
                self.term(b, out)
            }
            Formula::Com(ts) => {
                out.write_str("com(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        out.write_str(", ")?;
                    }
                    self.term(t, out)?;
                }
                out.write_str(")")
            }
            Formula::Not(a) => {
                out.write_str("not ")?;
                self.at(a, 5, out)
            }
            Formula::And(a, b) => bin(a, "and", 4, b, 5, out),
            Formula::Or(a, b) => bin(a, "or", 3, b, 4, out),
            Formula::Implies(a, b) => bin(a, "->", 3, b, 2, out),
            Formula::Iff(a, b) => bin(a, "<->", 1, b, 2, out),
            Formula::Forall { var, bound, body } | Formula::Exists { var, bound, body } => {
                let q = if matches!(f, Formula::Forall { .. }) { "forall" } else { "exists" };
                write!(out, "{q} {var} ")?;
                if let Some(t) = bound {
                    out.write_str("in ")?;
                    self.term(t, out)?;
                    out.write_str(" ")?;
                }
                out.write_str("(")?;
                self.go(body, out)?;
                out.write_str(")")
            }
        }
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.go(self.f, out)
    }
}
