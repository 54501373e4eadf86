use super::{parse, EvalContext, Formula, Term};
use crate::implication::{poly, Implication};
use crate::report::{VerificationReport, Witness};
use crate::universe::{Fragment, NodeId, NodeStore};
use crate::{Error, Logic, Result};

/// Formulas `φ(x, y)`; `x` gets quantified, `y` is a parameter.
pub const PARAM_SCHEDULE: &[&str] = &[
    "x in y",
    "y in x",
    "x = y",
    "x sub y",
    "y sub x",
    "com(x, y)",
    "x = x",
    "exists s in x (s = y)",
    "forall s in x (s in y)",
];

fn schedule() -> Vec<Formula> {
    PARAM_SCHEDULE.iter().map(|t| parse(t, &["x", "y"]).expect("schedule parses")).collect()
}

fn var(v: &str) -> Term {
    Term::Var(v.to_string())
}

struct Labels<'a> {
    logic: &'a str,
    imp: &'a str,
}

fn close(f: &Formula, env: &[(&str, NodeId)], store: &NodeStore, l: &Logic) -> String {
    let sub: Vec<(&str, Term)> = env.iter().map(|&(n, id)| (n, Term::Node(id))).collect();
    f.substitute(&sub).display_with(store, l).to_string()
}

fn pair_witness(
    lb: &Labels,
    claim: &str,
    lhs: (&Formula, crate::Element),
    rhs: (&Formula, crate::Element),
    env: &[(&str, NodeId)],
    store: &NodeStore,
    l: &Logic,
) -> Witness {
    Witness::new(lb.logic, lb.imp, claim)
        .eval(close(lhs.0, env, store, l), l.name(lhs.1))
        .eval(close(rhs.0, env, store, l), l.name(rhs.1))
}

/// Whether `imp` is the maximum implication `P⊥ ∨ Q` on `l`.
pub fn is_maximum_implication(l: &Logic, imp: &Implication) -> bool {
    l.elements().all(|p| l.elements().all(|q| imp.eval(p, q) == poly(l, 0, p, q)))
}

/// The three de Morgan families over the fragment.
///
/// Connective (i) and unbounded (ii) laws are checked on every scheduled
/// instance. The bounded law (iii) is checked on every instance when the
/// implication is the maximum one or the logic is Boolean; otherwise a
/// counterexample is searched for and the check fails if none exists.
pub fn demorgan_checks(
    l: &Logic,
    imp: &Implication,
    store: &NodeStore,
    frag: &Fragment,
    logic_label: &str,
) -> Result<VerificationReport> {
    let lb = Labels { logic: logic_label, imp: imp.label() };
    let expect_bounded = is_maximum_implication(l, imp) || l.is_boolean_logic();
    let mut r = VerificationReport::new("demorgan")
        .param("logic", logic_label)
        .param("implication", imp.label())
        .param("rank_bound", frag.params.rank_bound)
        .param("dom_cap", frag.params.dom_cap)
        .param("bounded_law_expected", expect_bounded)
        .param("quantifiers", "unbounded quantifiers are fragment-relative");
    let sched = schedule();
    let mut cx = EvalContext::new(l, imp, store, frag.nodes());
    let nodes = frag.nodes();

    // (i)
    let atoms = &sched[..6];
    for (i, phi) in atoms.iter().enumerate() {
        for psi in &atoms[i..] {
            let n = |f: &Formula| Formula::not(f.clone());
            let pairs = [
                (Formula::not(Formula::or(phi.clone(), psi.clone())), Formula::and(n(phi), n(psi))),
                (Formula::not(Formula::and(phi.clone(), psi.clone())), Formula::or(n(phi), n(psi))),
            ];
            for &u in nodes {
                for &v in nodes {
                    let env = [("x", u), ("y", v)];
                    for (a, b) in &pairs {
                        let (va, vb) = (cx.value(a, &env)?, cx.value(b, &env)?);
                        r.check(va == vb, || {
                            pair_witness(&lb, "(i) connective de Morgan", (a, va), (b, vb), &env, store, l)
                        });
                    }
                }
            }
        }
    }

    // (ii)
    for phi in &sched {
        let nphi = Formula::not(phi.clone());
        let pairs = [
            (Formula::not(Formula::exists("x", None, phi.clone())), Formula::forall("x", None, nphi.clone())),
            (Formula::not(Formula::forall("x", None, phi.clone())), Formula::exists("x", None, nphi.clone())),
        ];
        for &v in nodes {
            let env = [("y", v)];
            for (a, b) in &pairs {
                let (va, vb) = (cx.value(a, &env)?, cx.value(b, &env)?);
                r.check(va == vb, || {
                    pair_witness(&lb, "(ii) unbounded de Morgan", (a, va), (b, vb), &env, store, l)
                });
            }
        }
    }

    // (iii)
    let mut counterexample = None;
    for phi in &sched {
        let nphi = Formula::not(phi.clone());
        let pairs = [
            (
                Formula::not(Formula::exists("x", Some(var("u")), phi.clone())),
                Formula::forall("x", Some(var("u")), nphi.clone()),
            ),
            (
                Formula::not(Formula::forall("x", Some(var("u")), phi.clone())),
                Formula::exists("x", Some(var("u")), nphi.clone()),
            ),
        ];
        for &u in nodes {
            for &v in nodes {
                let env = [("u", u), ("y", v)];
                for (a, b) in &pairs {
                    let (va, vb) = (cx.value(a, &env)?, cx.value(b, &env)?);
                    if expect_bounded {
                        r.check(va == vb, || {
                            pair_witness(&lb, "(iii) bounded de Morgan", (a, va), (b, vb), &env, store, l)
                        });
                    } else if va != vb && counterexample.is_none() {
                        counterexample = Some(
                            pair_witness(&lb, "(iii) bounded de Morgan counterexample", (a, va), (b, vb), &env, store, l)
                                .found(),
                        );
                    }
                }
            }
        }
    }
    if !expect_bounded {
        let found = counterexample.is_some();
        r.set_param("bounded_counterexample_found", found);
        match counterexample {
            Some(w) => {
                r.checked += 1;
                r.record(w);
            }
            None => {
                r.check(false, || {
                    Witness::new(lb.logic, lb.imp, "(iii) no bounded de Morgan counterexample in the fragment")
                });
            }
        }
    }
    Ok(r)
}

/// On a Boolean logic, bounded quantifiers agree with their relativized
/// unbounded forms, the latter ranging over the fragment.
pub fn boolean_bounded_equivalence(
    l: &Logic,
    imp: &Implication,
    store: &NodeStore,
    frag: &Fragment,
    logic_label: &str,
) -> Result<VerificationReport> {
    if !l.is_boolean_logic() {
        return Err(Error::InvalidArgument(format!("{logic_label} is not Boolean")));
    }
    let lb = Labels { logic: logic_label, imp: imp.label() };
    let mut r = VerificationReport::new("boolean-bounded")
        .param("logic", logic_label)
        .param("implication", imp.label())
        .param("rank_bound", frag.params.rank_bound)
        .param("dom_cap", frag.params.dom_cap)
        .param("quantifiers", "unbounded quantifiers are fragment-relative");
    let mut cx = EvalContext::new(l, imp, store, frag.nodes());
    let xin = Formula::In(var("x"), var("u"));
    for phi in &schedule() {
        let pairs = [
            (
                Formula::forall("x", Some(var("u")), phi.clone()),
                Formula::forall("x", None, Formula::implies(xin.clone(), phi.clone())),
            ),
            (
                Formula::exists("x", Some(var("u")), phi.clone()),
                Formula::exists("x", None, Formula::and(xin.clone(), phi.clone())),
            ),
        ];
        for &u in frag.nodes() {
            for &v in frag.nodes() {
                let env = [("u", u), ("y", v)];
                for (a, b) in &pairs {
                    let (va, vb) = (cx.value(a, &env)?, cx.value(b, &env)?);
                    r.check(va == vb, || {
                        pair_witness(&lb, "bounded vs relativized", (a, va), (b, vb), &env, store, l)
                    });
                }
            }
        }
    }
    Ok(r)
}

/// Enlarging the quantifier domain can only lower `∀x φ` and raise `∃x φ`.
/// `small` must be contained in `large`; parameters range over `small`.
pub fn monotone_truncation_check(
    l: &Logic,
    imp: &Implication,
    store: &NodeStore,
    small: &Fragment,
    large: &Fragment,
    logic_label: &str,
) -> Result<VerificationReport> {
    if !small.nodes().iter().all(|&u| large.contains(u)) {
        return Err(Error::InvalidArgument("small fragment is not contained in the large one".into()));
    }
    let lb = Labels { logic: logic_label, imp: imp.label() };
    let mut r = VerificationReport::new("monotone-truncation")
        .param("logic", logic_label)
        .param("implication", imp.label())
        .param("small", format!("rank {} cap {}", small.params.rank_bound, small.params.dom_cap))
        .param("large", format!("rank {} cap {}", large.params.rank_bound, large.params.dom_cap));
    let mut cs = EvalContext::new(l, imp, store, small.nodes());
    let mut cl = EvalContext::new(l, imp, store, large.nodes());
    for phi in &schedule() {
        let all = Formula::forall("x", None, phi.clone());
        let any = Formula::exists("x", None, phi.clone());
        for &v in small.nodes() {
            let env = [("y", v)];
            let (a_s, a_l) = (cs.value(&all, &env)?, cl.value(&all, &env)?);
            r.check(l.leq(a_l, a_s), || {
                pair_witness(&lb, "forall over large <= forall over small", (&all, a_l), (&all, a_s), &env, store, l)
            });
            let (e_s, e_l) = (cs.value(&any, &env)?, cl.value(&any, &env)?);
            r.check(l.leq(e_s, e_l), || {
                pair_witness(&lb, "exists over small <= exists over large", (&any, e_s), (&any, e_l), &env, store, l)
            });
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::implication::ImplSpec;
    use crate::universe::{build_fragment, FragmentParams};

    #[test]
    fn demorgan_dichotomy_on_mo2() {
        let l = Logic::mo(2).unwrap();
        let mut s = NodeStore::new();
        let f = build_fragment(&mut s, &l, FragmentParams::new(2, 2)).unwrap();
        let max = ImplSpec::poly(0).resolve(&l).unwrap();
        let r = demorgan_checks(&l, &max, &s, &f, "mo:2").unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let sasaki = ImplSpec::poly(3).resolve(&l).unwrap();
        let r = demorgan_checks(&l, &sasaki, &s, &f, "mo:2").unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.params["bounded_counterexample_found"], true);
        assert!(r.witnesses.iter().any(|w| !w.failure));
    }

    #[test]
    fn boolean_equivalence_and_truncation() {
        let l = Logic::boolean(2).unwrap();
        let imp = ImplSpec::poly(3).resolve(&l).unwrap();
        let mut s = NodeStore::new();
        let small = build_fragment(&mut s, &l, FragmentParams::new(2, 2)).unwrap();
        let r = boolean_bounded_equivalence(&l, &imp, &s, &small, "boolean:2").unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let deep = build_fragment(&mut s, &l, FragmentParams::new(3, 1)).unwrap();
        assert!(monotone_truncation_check(&l, &imp, &s, &deep, &small, "boolean:2").is_err());
        let large = build_fragment(&mut s, &l, FragmentParams::new(3, 2)).unwrap();
        let r = monotone_truncation_check(&l, &imp, &s, &small, &large, "boolean:2").unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let mo = Logic::mo(2).unwrap();
        assert!(boolean_bounded_equivalence(&mo, &ImplSpec::poly(0).resolve(&mo).unwrap(), &s, &small, "mo:2").is_err());
    }
}
