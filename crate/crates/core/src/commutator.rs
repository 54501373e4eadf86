//! Commutators of subsets of a logic.
//!
//! Four independent constructions are provided: the supremum of the
//! subcommutators, Takeuti's join over the commutant, Pulmannová's meet of
//! finite Bruns–Kalmbach commutators, and the meet of Marsden commutators over
//! the generated subalgebra. On every logic they agree; see
//! [`verify_commutator_equivalence`].
//!
//! Empty-set conventions: `⋁∅ = 0`, `⋀∅ = 1`, and `finite_com(∅) = 1`.
//! The commutator of the empty set is 1 under all four routes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{ElemSet, Element, Logic};

/// Largest set for which the exhaustive finite-subset construction runs.
pub const MAX_FINITE_SUBSET: usize = 16;

/// Marsden's commutator `(p^q) v (p^q') v (p'^q) v (p'^q')`.
pub fn marsden_com(l: &Logic, p: Element, q: Element) -> Element {
    let (op, oq) = (l.ortho(p), l.ortho(q));
    l.big_join([l.meet(p, q), l.meet(p, oq), l.meet(op, q), l.meet(op, oq)])
}

/// Bruns–Kalmbach commutator of a finite set: the join, over all ways of
/// complementing some members, of the meet of the signed members.
pub fn finite_com(l: &Logic, f: ElemSet) -> Result<Element> {
    if f.len() > MAX_FINITE_SUBSET {
        return Err(Error::TooManyMembers { got: f.len(), max: MAX_FINITE_SUBSET });
    }
    let members: Vec<Element> = f.iter().collect();
    let mut acc = l.zero();
    for signs in 0u32..(1u32 << members.len()) {
        let term = members.iter().enumerate().fold(l.one(), |m, (i, &p)| {
            let signed = if signs >> i & 1 == 1 { l.ortho(p) } else { p };
            l.meet(m, signed)
        });
        acc = l.join(acc, term);
    }
    Ok(acc)
}

/// `S(A)`: central elements `E` of `L(A)` below which the members of `A`
/// pairwise commute, computed as `{E ∈ Z(A) | P ^ E ∈ Z(A) for all P ∈ A}`.
pub fn subcommutators(l: &Logic, a: ElemSet) -> ElemSet {
    let z = l.center(a);
    z.iter()
        .filter(|&e| a.iter().all(|p| z.contains(l.meet(p, e))))
        .collect()
}

/// `S(A)` straight from its definition: `E ∈ Z(A)` with
/// `P1 ^ E` commuting with `P2 ^ E` for all `P1, P2 ∈ A`.
pub fn subcommutators_by_definition(l: &Logic, a: ElemSet) -> ElemSet {
    l.center(a)
        .iter()
        .filter(|&e| {
            a.iter()
                .all(|p1| a.iter().all(|p2| l.commutes(l.meet(p1, e), l.meet(p2, e))))
        })
        .collect()
}

/// The commutator `⋁ S(A)`.
pub fn commutator(l: &Logic, a: ElemSet) -> Element {
    l.big_join(subcommutators(l, a))
}

/// Takeuti's construction: the join of all `E ∈ A^!` with
/// `P1 ^ E` commuting with `P2 ^ E` for all `P1, P2 ∈ A`.
pub fn takeuti_com(l: &Logic, a: ElemSet) -> Element {
    l.big_join(l.commutant(a).iter().filter(|&e| {
        a.iter()
            .all(|p1| a.iter().all(|p2| l.commutes(l.meet(p1, e), l.meet(p2, e))))
    }))
}

/// Pulmannová's construction: the meet of `finite_com(F)` over every finite
/// `F ⊆ A`. A join here would be 1 whenever `A` is nonempty, since every
/// singleton has commutator 1.
pub fn pulmannova_com(l: &Logic, a: ElemSet) -> Result<Element> {
    if a.len() > MAX_FINITE_SUBSET {
        return Err(Error::TooManyMembers { got: a.len(), max: MAX_FINITE_SUBSET });
    }
    let members: Vec<Element> = a.iter().collect();
    let mut acc = l.one();
    for mask in 0u32..(1u32 << members.len()) {
        let f: ElemSet = members
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        acc = l.meet(acc, finite_com(l, f)?);
    }
    Ok(acc)
}

/// `⋀ {marsden_com(P, Q) | P, Q in the subalgebra generated by A}`.
pub fn pairwise_meet_com(l: &Logic, a: ElemSet) -> Element {
    let gen = l.subalgebra_generated(a);
    let mut acc = l.one();
    for p in gen {
        for q in gen {
            acc = l.meet(acc, marsden_com(l, p, q));
        }
    }
    acc
}

/// Splits `x ∈ L(A)` into its Boolean part `x ^ c` and its non-Boolean part
/// `x ^ c'`, where `c` is the commutator of `A`.
pub fn bn_decompose(l: &Logic, a: ElemSet, x: Element) -> Result<(Element, Element)> {
    if !l.sublogic_generated(a).contains(x) {
        return Err(Error::OutsideSublogic(l.name(x).to_string()));
    }
    let c = commutator(l, a);
    let parts = (l.meet(x, c), l.meet(x, l.ortho(c)));
    debug_assert_eq!(l.join(parts.0, parts.1), x);
    Ok(parts)
}

/// The commutator computed four ways, plus the subcommutator set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutatorReport {
    pub via_subcommutators: Element,
    pub via_takeuti: Element,
    pub via_pulmannova: Element,
    pub via_pairwise_meet: Element,
    pub subcommutator_set: ElemSet,
}

impl CommutatorReport {
    pub fn agree(&self) -> bool {
        let c = self.via_subcommutators;
        self.via_takeuti == c && self.via_pulmannova == c && self.via_pairwise_meet == c
    }
}

pub fn verify_commutator_equivalence(l: &Logic, a: ElemSet) -> Result<CommutatorReport> {
    let subcommutator_set = subcommutators(l, a);
    Ok(CommutatorReport {
        via_subcommutators: l.big_join(subcommutator_set),
        via_takeuti: takeuti_com(l, a),
        via_pulmannova: pulmannova_com(l, a)?,
        via_pairwise_meet: pairwise_meet_com(l, a),
        subcommutator_set,
    })
}

/// Outcome of [`direct_product_check`]; every flag is `true` on success.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectProductReport {
    pub commutator: Element,
    /// The commutator is itself a subcommutator.
    pub is_maximum_subcommutator: bool,
    /// `S(A) = [0, c] ∩ L(A)`.
    pub subcommutators_form_interval: bool,
    /// `[0, c] ∩ L(A)` is pairwise commuting.
    pub lower_interval_boolean: bool,
    /// `x ↦ (x ^ c, x ^ c')` is an order isomorphism of `L(A)` onto the
    /// product of the two intervals.
    pub splits_as_product: bool,
    /// For every maximal Boolean sublogic `B`, with `A' = A ∪ B`: the
    /// commutator of `A'` lies in `B` and so does `[0, ⌀(A')] ∩ A'`.
    pub maximal_boolean_absorbs: bool,
}

impl DirectProductReport {
    pub fn holds(&self) -> bool {
        self.is_maximum_subcommutator
            && self.subcommutators_form_interval
            && self.lower_interval_boolean
            && self.splits_as_product
            && self.maximal_boolean_absorbs
    }
}

pub fn direct_product_check(l: &Logic, a: ElemSet) -> DirectProductReport {
    let la = l.sublogic_generated(a);
    let s = subcommutators(l, a);
    let c = l.big_join(s);
    let oc = l.ortho(c);
    let lower = l.interval(l.zero(), c, la);
    let upper = l.interval(l.zero(), oc, la);

    let mut splits = lower.len() * upper.len() == la.len();
    for x in la {
        let (xb, xn) = (l.meet(x, c), l.meet(x, oc));
        splits &= lower.contains(xb) && upper.contains(xn) && l.join(xb, xn) == x;
        for y in la {
            let (yb, yn) = (l.meet(y, c), l.meet(y, oc));
            splits &= l.leq(x, y) == (l.leq(xb, yb) && l.leq(xn, yn));
        }
    }
    for y in lower {
        for z in upper {
            splits &= la.contains(l.join(y, z));
        }
    }

    let maximal_boolean_absorbs = maximal_boolean_sublogics(l).into_iter().all(|b| {
        let wide = a.union(b);
        let cw = commutator(l, wide);
        b.contains(cw) && l.interval(l.zero(), cw, wide).is_subset(b)
    });

    DirectProductReport {
        commutator: c,
        is_maximum_subcommutator: s.contains(c),
        subcommutators_form_interval: s == lower,
        lower_interval_boolean: l.is_boolean(lower),
        splits_as_product: splits,
        maximal_boolean_absorbs,
    }
}

/// Every maximal Boolean sublogic, i.e. every maximal pairwise-commuting
/// subset, in lexicographic order of membership masks.
pub fn maximal_boolean_sublogics(l: &Logic) -> Vec<ElemSet> {
    fn bron_kerbosch(l: &Logic, r: ElemSet, mut p: ElemSet, mut x: ElemSet, out: &mut Vec<ElemSet>) {
        if p.is_empty() && x.is_empty() {
            out.push(r);
            return;
        }
        for v in p {
            let mut nbrs = l.commuting_with(v);
            nbrs.remove(v);
            let mut r2 = r;
            r2.insert(v);
            bron_kerbosch(l, r2, p.intersection(nbrs), x.intersection(nbrs), out);
            p.remove(v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    bron_kerbosch(l, ElemSet::EMPTY, l.carrier(), ElemSet::EMPTY, &mut out);
    out.sort_by_key(|s| s.bits());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(l: &Logic, names: &[&str]) -> ElemSet {
        names.iter().map(|n| l.by_name(n).unwrap()).collect()
    }

    fn el(l: &Logic, name: &str) -> Element {
        l.by_name(name).unwrap()
    }

    #[test]
    fn marsden_examples() {
        let l = Logic::mo(2).unwrap();
        assert_eq!(marsden_com(&l, el(&l, "a"), el(&l, "b")), l.zero());
        for p in l.elements() {
            assert_eq!(marsden_com(&l, p, p), l.one());
        }
        let b2 = Logic::boolean(2).unwrap();
        for p in b2.elements() {
            for q in b2.elements() {
                assert_eq!(marsden_com(&b2, p, q), b2.one());
            }
        }
    }

    #[test]
    fn finite_com_examples() {
        let l = Logic::mo(2).unwrap();
        for p in l.elements() {
            assert_eq!(finite_com(&l, ElemSet::singleton(p)).unwrap(), l.one());
        }
        assert_eq!(finite_com(&l, set(&l, &["a", "b"])).unwrap(), l.zero());
        assert_eq!(finite_com(&l, ElemSet::EMPTY).unwrap(), l.one());
        let b3 = Logic::boolean(3).unwrap();
        for mask in 0u64..256 {
            assert_eq!(finite_com(&b3, ElemSet::from_bits(mask)).unwrap(), b3.one());
        }
        for p in l.elements() {
            for q in l.elements() {
                let f: ElemSet = [p, q].into_iter().collect();
                assert_eq!(finite_com(&l, f).unwrap(), marsden_com(&l, p, q));
            }
        }
    }

    #[test]
    fn subcommutator_examples() {
        let l = Logic::mo(2).unwrap();
        assert_eq!(subcommutators(&l, set(&l, &["a", "b"])), set(&l, &["0"]));
        assert_eq!(
            subcommutators(&l, set(&l, &["a"])),
            set(&l, &["0", "a", "a'", "1"])
        );
        let b2 = Logic::boolean(2).unwrap();
        for mask in 0u64..16 {
            let a = ElemSet::from_bits(mask);
            assert_eq!(subcommutators(&b2, a), b2.center(a));
        }
    }

    #[test]
    fn characterization_matches_definition() {
        let logics = [
            Logic::mo(2).unwrap(),
            Logic::mo(3).unwrap(),
            Logic::product(&Logic::boolean(1).unwrap(), &Logic::mo(2).unwrap()).unwrap(),
        ];
        for l in &logics {
            for p in l.elements() {
                for q in l.elements() {
                    for r in l.elements() {
                        let a: ElemSet = [p, q, r].into_iter().collect();
                        assert_eq!(subcommutators(l, a), subcommutators_by_definition(l, a));
                        for e in l.commutant(a) {
                            for p1 in a {
                                for p2 in a {
                                    let (x, y) = (l.meet(p1, e), l.meet(p2, e));
                                    assert_eq!(l.commutes(x, y), l.commutes(x, p2));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn commutator_examples() {
        let l = Logic::mo(2).unwrap();
        assert_eq!(commutator(&l, set(&l, &["a", "b"])), l.zero());
        assert_eq!(commutator(&l, set(&l, &["a"])), l.one());
        let b3 = Logic::boolean(3).unwrap();
        for mask in 0u64..256 {
            assert_eq!(commutator(&b3, ElemSet::from_bits(mask)), b3.one());
        }
    }

    #[test]
    fn empty_set_conventions() {
        for l in [Logic::mo(2).unwrap(), Logic::boolean(2).unwrap()] {
            let r = verify_commutator_equivalence(&l, ElemSet::EMPTY).unwrap();
            assert_eq!(r.via_pulmannova, l.one());
            assert_eq!(r.via_takeuti, l.one());
            assert!(r.agree());
        }
    }

    #[test]
    fn takeuti_and_pulmannova_examples() {
        let l = Logic::mo(2).unwrap();
        let ab = set(&l, &["a", "b"]);
        assert_eq!(takeuti_com(&l, ab), l.zero());
        assert_eq!(pulmannova_com(&l, ab).unwrap(), l.zero());
        let b2 = Logic::boolean(2).unwrap();
        let pq = set(&b2, &["p", "q"]);
        assert_eq!(takeuti_com(&b2, pq), b2.one());
        assert_eq!(pulmannova_com(&b2, pq).unwrap(), b2.one());
        assert!(matches!(
            pulmannova_com(&Logic::mo(10).unwrap(), ElemSet::full(17)),
            Err(Error::TooManyMembers { got: 17, max: 16 })
        ));
    }

    #[test]
    fn decomposition() {
        let l = Logic::mo(2).unwrap();
        let ab = set(&l, &["a", "b"]);
        let c = commutator(&l, ab);
        assert_eq!(bn_decompose(&l, ab, c).unwrap(), (c, l.zero()));
        assert_eq!(bn_decompose(&l, ab, el(&l, "a")).unwrap(), (l.zero(), el(&l, "a")));
        let b2 = Logic::boolean(2).unwrap();
        let p = el(&b2, "p");
        assert_eq!(bn_decompose(&b2, set(&b2, &["p", "q"]), p).unwrap(), (p, b2.zero()));
        assert!(matches!(
            bn_decompose(&l, set(&l, &["a"]), el(&l, "b")),
            Err(Error::OutsideSublogic(_))
        ));
    }

    #[test]
    fn four_routes_agree_on_small_examples() {
        let l = Logic::mo(2).unwrap();
        let r = verify_commutator_equivalence(&l, set(&l, &["a", "b"])).unwrap();
        assert!(r.agree());
        assert_eq!(r.via_subcommutators, l.zero());
        let b3 = Logic::boolean(3).unwrap();
        for p in b3.elements() {
            for q in b3.elements() {
                let r = verify_commutator_equivalence(&b3, [p, q].into_iter().collect()).unwrap();
                assert!(r.agree());
                assert_eq!(r.via_subcommutators, b3.one());
            }
        }
    }

    #[test]
    fn direct_products() {
        let l = Logic::mo(2).unwrap();
        let r = direct_product_check(&l, set(&l, &["a", "b"]));
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.commutator, l.zero());

        let b2 = Logic::boolean(2).unwrap();
        assert!(direct_product_check(&b2, set(&b2, &["p"])).holds());

        let prod = Logic::product(&Logic::boolean(1).unwrap(), &Logic::mo(2).unwrap()).unwrap();
        for first in ["0", "1"] {
            let a = set(&prod, &[&format!("{first}.a"), &format!("{first}.b")]);
            let r = direct_product_check(&prod, a);
            assert!(r.holds(), "{r:?}");
            assert_eq!(prod.name(r.commutator), "1.0");
        }
    }

    #[test]
    fn maximal_boolean_enumeration() {
        let l = Logic::mo(2).unwrap();
        let all = maximal_boolean_sublogics(&l);
        assert_eq!(all, vec![set(&l, &["0", "a", "a'", "1"]), set(&l, &["0", "b", "b'", "1"])]);
        for b in all {
            assert_eq!(l.commutant(b), b);
        }
        assert_eq!(maximal_boolean_sublogics(&Logic::boolean(3).unwrap()).len(), 1);
    }
}
