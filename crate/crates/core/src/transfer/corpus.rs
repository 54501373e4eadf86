//! Curated sentences and the HF oracle that vets them.

use crate::formula::{parse, Formula, Term};
use crate::hf::{stage, Hf};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefix {
    /// Free variables are read universally.
    Delta0,
    /// `∀x ∃y ψ(x, y)` with `ψ` the matrix.
    Pi2,
}

#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub name: &'static str,
    /// The Δ0 matrix; its free variables are `vars`.
    pub matrix: &'static str,
    pub vars: &'static [&'static str],
    pub prefix: Prefix,
    /// Why the universal closure is a ZFC theorem.
    pub note: &'static str,
}

impl CorpusItem {
    pub fn formula(&self) -> Formula {
        parse(self.matrix, self.vars).expect("corpus matrix parses")
    }

    /// The full sentence, with the quantifier prefix for Π₂ items.
    pub fn sentence_text(&self) -> String {
        match self.prefix {
            Prefix::Delta0 => self.matrix.to_string(),
            Prefix::Pi2 => format!("forall {} (exists {} ({}))", self.vars[0], self.vars[1], self.matrix),
        }
    }
}

pub const CORPUS: &[CorpusItem] = &[
    CorpusItem {
        name: "subset-reflexive",
        matrix: "x sub x",
        vars: &["x"],
        prefix: Prefix::Delta0,
        note: "every member of x is a member of x",
    },
    CorpusItem {
        name: "equality-reflexive",
        matrix: "x = x",
        vars: &["x"],
        prefix: Prefix::Delta0,
        note: "logical axiom of equality",
    },
    CorpusItem {
        name: "equality-symmetric",
        matrix: "x = y -> y = x",
        vars: &["x", "y"],
        prefix: Prefix::Delta0,
        note: "logical axiom of equality",
    },
    CorpusItem {
        name: "subset-transitive",
        matrix: "(x sub y and y sub z) -> x sub z",
        vars: &["x", "y", "z"],
        prefix: Prefix::Delta0,
        note: "unfold the definition of inclusion twice",
    },
    CorpusItem {
        name: "equality-gives-inclusions",
        matrix: "x = y -> (x sub y and y sub x)",
        vars: &["x", "y"],
        prefix: Prefix::Delta0,
        note: "substitutivity of equality",
    },
    CorpusItem {
        name: "inclusion-unfolded",
        matrix: "(forall t in x (t in y)) <-> x sub y",
        vars: &["x", "y"],
        prefix: Prefix::Delta0,
        note: "definition of inclusion",
    },
    CorpusItem {
        name: "has-superset",
        matrix: "x sub y",
        vars: &["x", "y"],
        prefix: Prefix::Pi2,
        note: "take y = x",
    },
    CorpusItem {
        name: "is-member",
        matrix: "x in y",
        vars: &["x", "y"],
        prefix: Prefix::Pi2,
        note: "pairing gives y = {x}",
    },
];

pub fn delta0_corpus() -> impl Iterator<Item = &'static CorpusItem> {
    CORPUS.iter().filter(|c| c.prefix == Prefix::Delta0)
}

pub fn pi2_corpus() -> impl Iterator<Item = &'static CorpusItem> {
    CORPUS.iter().filter(|c| c.prefix == Prefix::Pi2)
}

/// A scheduled Δ0 formula with free variables `vars`.
#[derive(Clone, Debug)]
pub struct Scheduled {
    pub text: &'static str,
    pub vars: &'static [&'static str],
}

impl Scheduled {
    pub fn formula(&self) -> Formula {
        parse(self.text, self.vars).expect("schedule parses")
    }
}

const X: &[&str] = &["x"];
const XY: &[&str] = &["x", "y"];
const XYZ: &[&str] = &["x", "y", "z"];

/// Theorems and non-theorems alike.
pub const SCHEDULE: &[Scheduled] = &[
    Scheduled { text: "x = x", vars: X },
    Scheduled { text: "x sub x", vars: X },
    Scheduled { text: "x in x", vars: X },
    Scheduled { text: "not (x = x)", vars: X },
    Scheduled { text: "exists t in x (t = t)", vars: X },
    Scheduled { text: "forall t in x (forall s in t (s in x))", vars: X },
    Scheduled { text: "exists t in x (exists s in t (s = s))", vars: X },
    Scheduled { text: "com(x) and x sub x", vars: X },
    Scheduled { text: "x in y", vars: XY },
    Scheduled { text: "x = y", vars: XY },
    Scheduled { text: "x sub y", vars: XY },
    Scheduled { text: "x = y -> y = x", vars: XY },
    Scheduled { text: "x in y -> y in x", vars: XY },
    Scheduled { text: "x in y or y in x or x = y", vars: XY },
    Scheduled { text: "exists t in y (t = x)", vars: XY },
    Scheduled { text: "forall t in x (exists s in y (t = s))", vars: XY },
    Scheduled { text: "x = y <-> (x sub y and y sub x)", vars: XY },
    Scheduled { text: "(forall t in x (t in y)) <-> x sub y", vars: XY },
    Scheduled { text: "not (x in y and y in x)", vars: XY },
    Scheduled { text: "com(x, y) -> x = y", vars: XY },
    Scheduled { text: "(x sub y and y sub z) -> x sub z", vars: XYZ },
    Scheduled { text: "x = y -> (x in z -> y in z)", vars: XYZ },
    Scheduled { text: "x in y and y in z -> x in z", vars: XYZ },
    Scheduled { text: "exists t in z (t = x or t = y)", vars: XYZ },
    Scheduled { text: "forall t in z (t = x or t = y)", vars: XYZ },
    Scheduled { text: "com(x, y, z) -> (x in y -> x in y)", vars: XYZ },
];

/// Classical truth over hereditarily finite sets. Unbounded quantifiers
/// range over `universe`; `⌀` is always true.
pub fn hf_eval(f: &Formula, env: &[(&str, Hf)], universe: &[Hf]) -> Result<bool> {
    let mut env = env.to_vec();
    hf_go(f, &mut env, universe)
}

fn hf_term(t: &Term, env: &[(&str, Hf)]) -> Result<Hf> {
    match t {
        Term::Var(v) => env
            .iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|&(_, s)| s)
            .ok_or_else(|| Error::UnboundVariable(v.clone())),
        Term::Lit(crate::formula::NodeLit::Check(s)) => Ok(*s),
        other => Err(Error::InvalidArgument(format!("{other:?} has no HF value"))),
    }
}

fn hf_go<'f>(f: &'f Formula, env: &mut Vec<(&'f str, Hf)>, universe: &[Hf]) -> Result<bool> {
    Ok(match f {
        Formula::In(a, b) => hf_term(b, env)?.contains(hf_term(a, env)?),
        Formula::Eq(a, b) => hf_term(a, env)? == hf_term(b, env)?,
        Formula::Sub(a, b) => hf_term(a, env)?.is_subset(hf_term(b, env)?),
        Formula::Com(ts) => {
            for t in ts {
                hf_term(t, env)?;
            }
            true
        }
        Formula::Not(a) => !hf_go(a, env, universe)?,
        Formula::And(a, b) => hf_go(a, env, universe)? && hf_go(b, env, universe)?,
        Formula::Or(a, b) => hf_go(a, env, universe)? || hf_go(b, env, universe)?,
        Formula::Implies(a, b) => !hf_go(a, env, universe)? || hf_go(b, env, universe)?,
        Formula::Iff(a, b) => hf_go(a, env, universe)? == hf_go(b, env, universe)?,
        Formula::Forall { var, bound, body } | Formula::Exists { var, bound, body } => {
            let universal = matches!(f, Formula::Forall { .. });
            let range: Vec<Hf> = match bound {
                Some(t) => hf_term(t, env)?.members().collect(),
                None => universe.to_vec(),
            };
            let mut acc = universal;
            for x in range {
                env.push((var.as_str(), x));
                let r = hf_go(body, env, universe);
                env.pop();
                if r? != universal {
                    acc = !universal;
                    break;
                }
            }
            acc
        }
    })
}

/// Every k-tuple over `pool` in lexicographic order.
pub fn all_tuples<T: Copy>(pool: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                pool.iter().map(move |&x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Checks every corpus item against the HF oracle: Δ0 items on all tuples
/// from `V_4`, Π₂ items as `∀x∈V_4 ∃y∈V_5`. Returns the first failure.
pub fn vet_corpus() -> std::result::Result<(), String> {
    let v4 = stage(4);
    let v5 = stage(5);
    for item in CORPUS {
        let f = item.formula();
        if !f.is_delta0() {
            return Err(format!("{}: matrix is not Δ0", item.name));
        }
        match item.prefix {
            Prefix::Delta0 => {
                for t in all_tuples(&v4, item.vars.len()) {
                    let env: Vec<_> = item.vars.iter().copied().zip(t.iter().copied()).collect();
                    if !hf_eval(&f, &env, &[]).map_err(|e| e.to_string())? {
                        return Err(format!("{}: false at {t:?}", item.name));
                    }
                }
            }
            Prefix::Pi2 => {
                for &x in &v4 {
                    let mut found = false;
                    for &y in &v5 {
                        if hf_eval(&f, &[(item.vars[0], x), (item.vars[1], y)], &[]).map_err(|e| e.to_string())? {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return Err(format!("{}: no witness for {x}", item.name));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hf(s: &str) -> Hf {
        s.parse().unwrap()
    }

    #[test]
    fn oracle_examples() {
        let f = parse("x sub y", XY).unwrap();
        assert!(hf_eval(&f, &[("x", Hf::EMPTY), ("y", hf("{{}}"))], &[]).unwrap());
        let g = parse("x in y", XY).unwrap();
        assert!(!hf_eval(&g, &[("x", hf("{{}}")), ("y", hf("{{}}"))], &[]).unwrap());
        let t = parse("(x sub y and y sub z) -> x sub z", XYZ).unwrap();
        let env = [("x", hf("1")), ("y", hf("2")), ("z", hf("{{}, {{}}, {{{}}}}"))];
        assert!(hf_eval(&t, &env, &[]).unwrap());
        let ex = parse("exists y (x in y)", X).unwrap();
        assert!(hf_eval(&ex, &[("x", hf("1"))], &stage(3)).unwrap());
        assert!(!hf_eval(&ex, &[("x", hf("{{{}}}"))], &stage(3)).unwrap());
    }

    #[test]
    fn corpus_is_vetted() {
        assert_eq!(vet_corpus(), Ok(()));
        assert_eq!(pi2_corpus().count(), 2);
        for s in SCHEDULE {
            assert!(s.formula().is_delta0(), "{}", s.text);
        }
    }
}
