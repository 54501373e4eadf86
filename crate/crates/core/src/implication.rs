//! Generalized implications on finite logics.
//!
//! An [`ImplSpec`] names an implication (one of the six Kotas polynomials, an
//! explicit table, or a twisted matrix operation). Resolving it against a
//! logic yields an [`Implication`], a cached `n x n` table that the checkers
//! and the set-theoretic evaluator use.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::commutator::commutator;
use crate::error::{Error, Result};
use crate::lattice::{ElemSet, Element, Logic};

/// The ortholattice operations the implication polynomials are built from.
pub trait OrthoOps {
    type Elem: Clone;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn ortho(&self, a: &Self::Elem) -> Self::Elem;
}

impl OrthoOps for Logic {
    type Elem = Element;

    fn meet(&self, a: &Element, b: &Element) -> Element {
        Logic::meet(self, *a, *b)
    }

    fn join(&self, a: &Element, b: &Element) -> Element {
        Logic::join(self, *a, *b)
    }

    fn ortho(&self, a: &Element) -> Element {
        Logic::ortho(self, *a)
    }
}

/// `P =>_j Q` for `j` in `0..=5` over any ortholattice.
///
/// # Panics
/// If `j > 5`.
pub fn poly_with<O: OrthoOps>(o: &O, j: u8, p: &O::Elem, q: &O::Elem) -> O::Elem {
    let (op, oq) = (o.ortho(p), o.ortho(q));
    let join3 = |a, b, c| o.join(&o.join(&a, &b), &c);
    match j {
        0 => o.join(&op, q),
        1 => join3(o.meet(&op, &oq), o.meet(&op, q), o.meet(p, &o.join(&op, q))),
        2 => join3(o.meet(&o.join(&op, q), &oq), o.meet(&op, q), o.meet(p, q)),
        3 => o.join(&op, &o.meet(p, q)),
        4 => o.join(&o.meet(&op, &oq), q),
        5 => join3(o.meet(&op, &oq), o.meet(&op, q), o.meet(p, q)),
        _ => panic!("no polynomial implication with index {j}"),
    }
}

/// `P =>_j Q` on a finite logic.
pub fn poly(l: &Logic, j: u8, p: Element, q: Element) -> Element {
    poly_with(l, j, &p, &q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ImplSpec {
    Poly { j: u8 },
    /// Row-major table of element indices; `table[p][q]` is `p => q`.
    Table { table: Vec<Vec<usize>> },
    /// `=>_{j,theta,i}`; only meaningful on projection lattices.
    Twisted { j: u8, theta: f64, i: u8 },
}

impl ImplSpec {
    pub fn poly(j: u8) -> ImplSpec {
        ImplSpec::Poly { j }
    }

    /// Reads a table file: a JSON array of `n` rows of `n` element indices.
    pub fn table_from_json(text: &str) -> Result<ImplSpec> {
        let table: Vec<Vec<usize>> =
            serde_json::from_str(text).map_err(|e| Error::ImplTable(e.to_string()))?;
        Ok(ImplSpec::Table { table })
    }

    /// Resolves against `l`. Tables must pass (I1), (I2) and (LB).
    pub fn resolve(&self, l: &Logic) -> Result<Implication> {
        let imp = self.resolve_unchecked(l)?;
        if let ImplSpec::Table { .. } = self {
            let r = check_axioms(l, &imp);
            for (name, v) in [("I1", &r.i1), ("I2", &r.i2), ("LB", &r.lb)] {
                if !v.holds {
                    return Err(Error::ImplTable(format!(
                        "not a generalized implication: ({name}) fails at {}",
                        format_witness(l, v.witness.as_deref().unwrap_or(&[]))
                    )));
                }
            }
        }
        Ok(imp)
    }

    /// Resolves without certifying tables.
    pub fn resolve_unchecked(&self, l: &Logic) -> Result<Implication> {
        let n = l.size();
        let table = match self {
            ImplSpec::Poly { j } => {
                if *j > 5 {
                    return Err(Error::InvalidArgument(format!("polynomial index {j} is not in 0..=5")));
                }
                let mut t = Vec::with_capacity(n * n);
                for p in l.elements() {
                    for q in l.elements() {
                        t.push(poly(l, *j, p, q));
                    }
                }
                t
            }
            ImplSpec::Table { table } => {
                if table.len() != n {
                    return Err(Error::ImplTable(format!("{} rows for a carrier of {n}", table.len())));
                }
                let mut t = Vec::with_capacity(n * n);
                for (i, row) in table.iter().enumerate() {
                    if row.len() != n {
                        return Err(Error::ImplTable(format!("row {i} has {} entries, expected {n}", row.len())));
                    }
                    for &x in row {
                        t.push(l.element(x).ok_or_else(|| {
                            Error::ImplTable(format!("entry {x} in row {i} is not an element"))
                        })?);
                    }
                }
                t
            }
            ImplSpec::Twisted { .. } => return Err(Error::TwistedOnFiniteLogic),
        };
        Ok(Implication { n, table, label: self.to_string() })
    }
}

impl fmt::Display for ImplSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImplSpec::Poly { j } => write!(f, "poly:{j}"),
            ImplSpec::Table { .. } => write!(f, "table"),
            ImplSpec::Twisted { j, theta, i } => write!(f, "twisted:{j},{theta},{i}"),
        }
    }
}

/// Accepts `poly:J` (or a bare `J`) and `twisted:J,THETA,I`.
impl FromStr for ImplSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unrecognized implication `{s}`"));
        let s = s.trim();
        let (tag, rest) = s.split_once(':').unwrap_or(("poly", s));
        match tag {
            "poly" => {
                let j: u8 = rest.trim().parse().map_err(|_| bad())?;
                if j > 5 {
                    return Err(bad());
                }
                Ok(ImplSpec::Poly { j })
            }
            "twisted" => {
                let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
                let [j, theta, i] = parts[..] else { return Err(bad()) };
                Ok(ImplSpec::Twisted {
                    j: j.parse().map_err(|_| bad())?,
                    theta: theta.parse().map_err(|_| bad())?,
                    i: i.parse().map_err(|_| bad())?,
                })
            }
            _ => Err(bad()),
        }
    }
}

/// A resolved implication: an `n x n` table over one logic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Implication {
    n: usize,
    table: Vec<Element>,
    label: String,
}

impl Implication {
    #[inline]
    pub fn eval(&self, p: Element, q: Element) -> Element {
        self.table[p.index() * self.n + q.index()]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Overwrites one entry. Meant for building counterexamples.
    pub fn with_entry(mut self, p: Element, q: Element, value: Element) -> Implication {
        self.table[p.index() * self.n + q.index()] = value;
        self.label = format!("{}*", self.label);
        self
    }

    /// Reads the table back as element indices.
    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.iter().map(|e| e.index()).collect()).collect()
    }

    /// Pulls the table back along an embedding of a sublogic. The sublogic
    /// must be closed under this implication.
    pub fn restrict(&self, sub: &Logic, embedding: &[Element]) -> Result<Implication> {
        let mut back = vec![None; self.n];
        for (i, e) in embedding.iter().enumerate() {
            back[e.index()] = Some(Element::from_index(i));
        }
        let mut table = Vec::with_capacity(sub.size() * sub.size());
        for &p in embedding {
            for &q in embedding {
                let v = self.eval(p, q);
                table.push(back[v.index()].ok_or_else(|| {
                    Error::OutsideSublogic(format!("implication value #{} at (#{}, #{})", v.index(), p.index(), q.index()))
                })?);
            }
        }
        Ok(Implication { n: sub.size(), table, label: self.label.clone() })
    }
}

pub fn impl_eval(l: &Logic, spec: &ImplSpec, p: Element, q: Element) -> Result<Element> {
    Ok(spec.resolve(l)?.eval(p, q))
}

/// Result of an exhaustive scan: the first counterexample, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Vec<Element>>,
}

impl Verdict {
    pub const PASS: Verdict = Verdict { holds: true, witness: None };

    pub fn fail(witness: Vec<Element>) -> Verdict {
        Verdict { holds: false, witness: Some(witness) }
    }

}

/// Scans every `K`-tuple of elements in lexicographic order.
fn scan<const K: usize>(l: &Logic, mut pred: impl FnMut([Element; K]) -> bool) -> Verdict {
    let n = l.size();
    let total = n.pow(K as u32);
    for code in 0..total {
        let mut t = [l.zero(); K];
        let mut c = code;
        for slot in t.iter_mut().rev() {
            *slot = Element::from_index(c % n);
            c /= n;
        }
        if !pred(t) {
            return Verdict::fail(t.to_vec());
        }
    }
    Verdict::PASS
}

pub fn format_witness(l: &Logic, w: &[Element]) -> String {
    let names: Vec<&str> = w.iter().map(|&e| l.name(e)).collect();
    format!("({})", names.join(", "))
}

/// A named list of verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Checklist(pub Vec<(String, Verdict)>);

impl Checklist {
    fn new() -> Checklist {
        Checklist(Vec::new())
    }

    fn push(&mut self, name: impl Into<String>, v: Verdict) {
        self.0.push((name.into(), v));
    }

    pub fn holds(&self) -> bool {
        self.0.iter().all(|(_, v)| v.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &(String, Verdict)> {
        self.0.iter().filter(|(_, v)| !v.holds)
    }

    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

/// `⌀(p, q)` for every pair, indexed `p * n + q`.
#[derive(Debug, Clone)]
pub struct PairCommutators {
    n: usize,
    table: Vec<Element>,
}

impl PairCommutators {
    pub fn new(l: &Logic) -> PairCommutators {
        let mut table = Vec::with_capacity(l.size() * l.size());
        for p in l.elements() {
            for q in l.elements() {
                table.push(commutator(l, [p, q].into_iter().collect()));
            }
        }
        PairCommutators { n: l.size(), table }
    }

    #[inline]
    pub fn get(&self, p: Element, q: Element) -> Element {
        self.table[p.index() * self.n + q.index()]
    }
}

fn max_of(l: &Logic, s: ElemSet) -> Option<Element> {
    let j = l.big_join(s);
    s.contains(j).then_some(j)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub i1: Verdict,
    pub i2: Verdict,
    pub lb: Verdict,
    pub e: Verdict,
    pub mp: Verdict,
    pub mt: Verdict,
    pub ng: Verdict,
    pub le: Verdict,
}

impl AxiomReport {
    /// (I1), (I2) and (LB) together.
    pub fn is_generalized_implication(&self) -> bool {
        self.i1.holds && self.i2.holds && self.lb.holds
    }

    pub fn checklist(&self) -> Checklist {
        Checklist(
            [
                ("I1", &self.i1),
                ("I2", &self.i2),
                ("LB", &self.lb),
                ("E", &self.e),
                ("MP", &self.mp),
                ("MT", &self.mt),
                ("NG", &self.ng),
                ("LE", &self.le),
            ]
            .into_iter()
            .map(|(n, v)| (n.to_string(), v.clone()))
            .collect(),
        )
    }
}

pub fn check_axioms(l: &Logic, imp: &Implication) -> AxiomReport {
    let i = |p, q| imp.eval(p, q);
    AxiomReport {
        i1: scan(l, |[p, q]| l.sublogic_generated([p, q].into_iter().collect()).contains(i(p, q))),
        i2: scan(l, |[p, q, e]| {
            !(l.commutes(p, e) && l.commutes(q, e))
                || l.meet(i(p, q), e) == l.meet(i(l.meet(p, e), l.meet(q, e)), e)
        }),
        lb: scan(l, |[p, q]| !l.commutes(p, q) || i(p, q) == l.join(l.ortho(p), q)),
        e: scan(l, |[p, q]| (i(p, q) == l.one()) == l.leq(p, q)),
        mp: scan(l, |[p, q]| l.leq(l.meet(p, i(p, q)), q)),
        mt: scan(l, |[p, q]| l.leq(l.meet(l.ortho(q), i(p, q)), l.ortho(p))),
        ng: scan(l, |[p, q]| l.leq(l.meet(p, l.ortho(q)), l.ortho(i(p, q)))),
        le: scan(l, |[p, q]| {
            logical_equiv(l, imp, p, q)
                == l.join(l.meet(p, q), l.meet(l.ortho(p), l.ortho(q)))
        }),
    }
}

/// The four conditions that are equivalent for any operation satisfying
/// (I1) and (I2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    /// (LB).
    pub lb: Verdict,
    /// `(P => Q) ^ ⌀(P,Q) = P =>_5 Q`.
    pub boolean_part_is_min: Verdict,
    /// `(P => Q) v ⌀(P,Q)' = P =>_0 Q`.
    pub join_with_co_commutator_is_max: Verdict,
    /// `P =>_5 Q <= P => Q <= P =>_0 Q`.
    pub sandwich: Verdict,
}

impl EquivalenceReport {
    /// All four verdicts coincide.
    pub fn agree(&self) -> bool {
        let b = self.lb.holds;
        self.boolean_part_is_min.holds == b
            && self.join_with_co_commutator_is_max.holds == b
            && self.sandwich.holds == b
    }

    pub fn holds(&self) -> bool {
        self.agree() && self.lb.holds
    }
}

pub fn verify_implication_equivalences(l: &Logic, imp: &Implication) -> EquivalenceReport {
    let com = PairCommutators::new(l);
    let i = |p, q| imp.eval(p, q);
    EquivalenceReport {
        lb: scan(l, |[p, q]| !l.commutes(p, q) || i(p, q) == l.join(l.ortho(p), q)),
        boolean_part_is_min: scan(l, |[p, q]| l.meet(i(p, q), com.get(p, q)) == poly(l, 5, p, q)),
        join_with_co_commutator_is_max: scan(l, |[p, q]| {
            l.join(i(p, q), l.ortho(com.get(p, q))) == poly(l, 0, p, q)
        }),
        sandwich: scan(l, |[p, q]| {
            l.leq(poly(l, 5, p, q), i(p, q)) && l.leq(i(p, q), poly(l, 0, p, q))
        }),
    }
}

/// `P =>_j Q = (P =>_5 Q) v (X ^ ⌀(P,Q)')` for `j = 0..4`, with
/// `X = 1, P, Q', P', Q` respectively.
pub fn verify_six_relations(l: &Logic) -> Checklist {
    let com = PairCommutators::new(l);
    let mut out = Checklist::new();
    for j in 0..5u8 {
        let v = scan(l, |[p, q]| {
            let x = match j {
                0 => l.one(),
                1 => p,
                2 => l.ortho(q),
                3 => l.ortho(p),
                _ => q,
            };
            poly(l, j, p, q) == l.join(poly(l, 5, p, q), l.meet(x, l.ortho(com.get(p, q))))
        });
        out.push(format!("relation for j={j}"), v);
    }
    out
}

/// (MP) holds exactly when `P ^ (P => Q) ^ ⌀(P,Q)' = 0` for all pairs.
pub fn mp_characterization(l: &Logic, imp: &Implication) -> Checklist {
    let com = PairCommutators::new(l);
    let mp = scan(l, |[p, q]| l.leq(l.meet(p, imp.eval(p, q)), q));
    let npart = scan(l, |[p, q]| {
        l.meet(p, l.meet(imp.eval(p, q), l.ortho(com.get(p, q)))) == l.zero()
    });
    let mut out = Checklist::new();
    out.push(
        format!("MP ({}) iff non-Boolean part vanishes ({})", mp.holds, npart.holds),
        agreement(&mp, &npart),
    );
    out
}

/// Passes when both verdicts agree; otherwise carries the witness of the
/// one that failed.
fn agreement(a: &Verdict, b: &Verdict) -> Verdict {
    if a.holds == b.holds {
        Verdict::PASS
    } else {
        Verdict::fail(a.witness.clone().or_else(|| b.witness.clone()).unwrap_or_default())
    }
}

/// The non-Boolean parts behind the classification of polynomial
/// implications with (MP): `P ^ (P =>_j Q)_N` is `P ^ ⌀'` for `j = 0, 1` and
/// 0 otherwise, so (MP) holds for `j >= 2` always and for `j < 2` only on
/// Boolean logics.
pub fn mp_classification(l: &Logic) -> Checklist {
    let com = PairCommutators::new(l);
    let boolean = l.is_boolean_logic();
    let mut out = Checklist::new();
    for j in 0..=5u8 {
        let parts = scan(l, |[p, q]| {
            let oc = l.ortho(com.get(p, q));
            let expected = if j < 2 { l.meet(p, oc) } else { l.zero() };
            l.meet(p, l.meet(poly(l, j, p, q), oc)) == expected
        });
        out.push(format!("non-Boolean part for j={j}"), parts);
        let mp = scan(l, |[p, q]| l.leq(l.meet(p, poly(l, j, p, q)), q));
        let expected = j >= 2 || boolean;
        out.push(
            format!("MP for j={j} is {expected}"),
            if mp.holds == expected { Verdict::PASS } else { Verdict { holds: false, witness: mp.witness } },
        );
    }
    out
}

/// The Sasaki-arrow characterizations (i)–(vi).
pub fn sasaki_characterizations(l: &Logic) -> Checklist {
    let i = |j, p, q| poly(l, j, p, q);
    let mut out = Checklist::new();
    out.push(
        "(i) residuation",
        scan(l, |[p, q, x]| l.leq(x, i(3, p, q)) == l.leq(l.meet(p, i(0, p, x)), q)),
    );
    out.push(
        "(ii) =>3 as maximum",
        scan(l, |[p, q]| {
            let s: ElemSet = l
                .commuting_with(p)
                .iter()
                .filter(|&x| l.leq(l.meet(p, x), l.meet(q, x)))
                .collect();
            max_of(l, s) == Some(i(3, p, q))
        }),
    );
    out.push(
        "(iii) contraposition",
        scan(l, |[p, q]| i(4, p, q) == i(3, l.ortho(q), l.ortho(p))),
    );
    out.push(
        "(iv) =>4 as maximum",
        scan(l, |[p, q]| {
            let s: ElemSet = l
                .commuting_with(q)
                .iter()
                .filter(|&x| l.leq(l.meet(l.ortho(q), x), l.meet(l.ortho(p), x)))
                .collect();
            max_of(l, s) == Some(i(4, p, q))
        }),
    );
    out.push("(v) =>5 = =>3 ^ =>4", scan(l, |[p, q]| i(5, p, q) == l.meet(i(3, p, q), i(4, p, q))));
    out.push(
        "(vi) =>5 as maximum",
        scan(l, |[p, q]| {
            let s: ElemSet = l
                .commutant([p, q].into_iter().collect())
                .iter()
                .filter(|&x| l.leq(l.meet(p, x), l.meet(q, x)))
                .collect();
            max_of(l, s) == Some(i(5, p, q))
        }),
    );
    out
}

/// The deduction theorem, parts (i) to (iii).
pub fn deduction_checks(l: &Logic, imp: &Implication) -> Checklist {
    let com = PairCommutators::new(l);
    let i = |p, q| imp.eval(p, q);
    let in_commutant = |p: Element, q: Element, x: Element| l.commutes(x, p) && l.commutes(x, q);
    let mut out = Checklist::new();
    out.push(
        "(i) deduction",
        scan(l, |[p, q, x]| {
            !in_commutant(p, q, x) || !l.leq(l.meet(p, x), q) || l.leq(x, i(p, q))
        }),
    );
    out.push(
        "(ii) relativized deduction",
        scan(l, |[p, q, x]| {
            let c = com.get(p, q);
            !in_commutant(p, q, x)
                || l.leq(l.meet(c, l.meet(p, x)), q) == l.leq(l.meet(c, x), i(p, q))
        }),
    );
    out.push(
        "(iii) relativized modus ponens",
        scan(l, |[p, q]| l.leq(l.meet(com.get(p, q), l.meet(p, i(p, q))), q)),
    );
    out
}

/// `(P => Q) ^ (Q => P)`.
pub fn logical_equiv(l: &Logic, imp: &Implication, p: Element, q: Element) -> Element {
    l.meet(imp.eval(p, q), imp.eval(q, p))
}

/// (LE), its maximum form and the bound by the commutator agree; when they
/// hold, `<=>` also gives modus ponens and transitivity.
pub fn le_checks(l: &Logic, imp: &Implication) -> Checklist {
    let com = PairCommutators::new(l);
    let eq = |p, q| logical_equiv(l, imp, p, q);
    let le = scan(l, |[p, q]| eq(p, q) == l.join(l.meet(p, q), l.meet(l.ortho(p), l.ortho(q))));
    let max_form = scan(l, |[p, q]| {
        let s: ElemSet = l
            .commutant([p, q].into_iter().collect())
            .iter()
            .filter(|&x| l.meet(p, x) == l.meet(q, x))
            .collect();
        max_of(l, s) == Some(eq(p, q))
    });
    let bounded = scan(l, |[p, q]| l.leq(eq(p, q), com.get(p, q)));
    let mut out = Checklist::new();
    out.push(
        format!(
            "LE ({}), maximum form ({}) and commutator bound ({}) agree",
            le.holds, max_form.holds, bounded.holds
        ),
        if le.holds == max_form.holds { agreement(&le, &bounded) } else { agreement(&le, &max_form) },
    );
    if le.holds {
        out.push("(iv) modus ponens", scan(l, |[p, q]| l.leq(l.meet(p, eq(p, q)), q)));
        out.push("(v) transitivity", scan(l, |[p, q, r]| l.leq(l.meet(eq(p, q), eq(q, r)), eq(p, r))));
    }
    out
}

/// `(P <=>_j Q)_N` is `⌀'` for `j = 0` and 0 otherwise, so (LE) holds for
/// `j >= 1` always and for `j = 0` only on Boolean logics.
pub fn le_classification(l: &Logic) -> Checklist {
    let com = PairCommutators::new(l);
    let boolean = l.is_boolean_logic();
    let mut out = Checklist::new();
    for j in 0..=5u8 {
        let imp = ImplSpec::poly(j).resolve(l).expect("polynomials resolve");
        let parts = scan(l, |[p, q]| {
            let oc = l.ortho(com.get(p, q));
            let expected = if j == 0 { oc } else { l.zero() };
            l.meet(logical_equiv(l, &imp, p, q), oc) == expected
        });
        out.push(format!("non-Boolean part of <=> for j={j}"), parts);
        let le = scan(l, |[p, q]| {
            logical_equiv(l, &imp, p, q) == l.join(l.meet(p, q), l.meet(l.ortho(p), l.ortho(q)))
        });
        let expected = j >= 1 || boolean;
        out.push(
            format!("LE for j={j} is {expected}"),
            if le.holds == expected { Verdict::PASS } else { Verdict { holds: false, witness: le.witness } },
        );
    }
    out
}

/// `P => Q = 1` whenever `P <= Q`, and restriction of meets of families of
/// at most `max_family` implications to any `Q` commuting with all members.
pub fn implication_theorem(l: &Logic, imp: &Implication, max_family: usize) -> Checklist {
    let mut out = Checklist::new();
    out.push("(i) P <= Q gives 1", scan(l, |[p, q]| !l.leq(p, q) || imp.eval(p, q) == l.one()));

    let mut restriction = Verdict::PASS;
    'outer: for q in l.elements() {
        let c = l.commuting_with(q);
        let pairs: Vec<(Element, Element)> =
            c.iter().flat_map(|a| c.iter().map(move |b| (a, b))).collect();
        let mut idx: Vec<usize> = Vec::new();
        for len in 1..=max_family {
            // Multisets of size `len`, as non-decreasing index sequences.
            idx.clear();
            idx.resize(len, 0);
            loop {
                let lhs = l.meet(l.big_meet(idx.iter().map(|&k| imp.eval(pairs[k].0, pairs[k].1))), q);
                let rhs = l.meet(
                    l.big_meet(idx.iter().map(|&k| imp.eval(l.meet(pairs[k].0, q), l.meet(pairs[k].1, q)))),
                    q,
                );
                if lhs != rhs {
                    let mut w = vec![q];
                    w.extend(idx.iter().flat_map(|&k| [pairs[k].0, pairs[k].1]));
                    restriction = Verdict::fail(w);
                    break 'outer;
                }
                // Advance to the next non-decreasing sequence.
                let mut pos = len;
                while pos > 0 && idx[pos - 1] == pairs.len() - 1 {
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
                idx[pos - 1] += 1;
                let v = idx[pos - 1];
                for slot in &mut idx[pos..] {
                    *slot = v;
                }
            }
        }
    }
    out.push("(ii) family restriction", restriction);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::sweep;

    fn el(l: &Logic, name: &str) -> Element {
        l.by_name(name).unwrap()
    }

    fn resolve(l: &Logic, j: u8) -> Implication {
        ImplSpec::poly(j).resolve(l).unwrap()
    }

    #[test]
    fn kotas_values_on_mo2() {
        let l = Logic::mo(2).unwrap();
        let (a, b) = (el(&l, "a"), el(&l, "b"));
        let got: Vec<&str> = (0..=5).map(|j| l.name(poly(&l, j, a, b))).collect();
        assert_eq!(got, ["1", "a", "b'", "a'", "b", "0"]);
        assert_eq!(impl_eval(&l, &ImplSpec::poly(3), a, b).unwrap(), el(&l, "a'"));
    }

    #[test]
    fn below_gives_one() {
        for (_, l) in sweep() {
            for j in 0..=5 {
                for p in l.elements() {
                    for q in l.up_set(p) {
                        assert_eq!(poly(&l, j, p, q), l.one());
                    }
                }
            }
        }
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("poly:3".parse::<ImplSpec>().unwrap(), ImplSpec::poly(3));
        assert_eq!("4".parse::<ImplSpec>().unwrap(), ImplSpec::poly(4));
        assert!("poly:6".parse::<ImplSpec>().is_err());
        assert_eq!(
            "twisted:3,1.5,0".parse::<ImplSpec>().unwrap(),
            ImplSpec::Twisted { j: 3, theta: 1.5, i: 0 }
        );
        let l = Logic::mo(2).unwrap();
        assert_eq!(
            ImplSpec::Twisted { j: 3, theta: 1.0, i: 0 }.resolve(&l),
            Err(Error::TwistedOnFiniteLogic)
        );
    }

    #[test]
    fn tables() {
        let l = Logic::mo(2).unwrap();
        let rows = resolve(&l, 3).to_rows();
        let text = serde_json::to_string(&rows).unwrap();
        let spec = ImplSpec::table_from_json(&text).unwrap();
        assert_eq!(spec.resolve(&l).unwrap().to_rows(), rows);

        let mut short = rows.clone();
        short.pop();
        assert!(matches!(
            ImplSpec::Table { table: short }.resolve(&l),
            Err(Error::ImplTable(_))
        ));
        let mut bad = rows.clone();
        bad[0][0] = 9;
        assert!(matches!(ImplSpec::Table { table: bad }.resolve(&l), Err(Error::ImplTable(_))));

        let a = el(&l, "a");
        let mut corrupt = rows;
        corrupt[a.index()][a.index()] = a.index();
        let err = ImplSpec::Table { table: corrupt }.resolve(&l).unwrap_err();
        assert!(err.to_string().contains("not a generalized implication"), "{err}");
    }

    #[test]
    fn axioms_of_polynomials() {
        for (name, l) in sweep() {
            for j in 0..=5 {
                let r = check_axioms(&l, &resolve(&l, j));
                assert!(r.is_generalized_implication(), "{name} j={j}: {r:?}");
                if j >= 3 {
                    assert!(r.e.holds && r.mp.holds && r.mt.holds && r.ng.holds, "{name} j={j}");
                }
                if j >= 1 {
                    assert!(r.e.holds, "{name} j={j}");
                }
            }
        }
    }

    #[test]
    fn axiom_witnesses_on_mo2() {
        let l = Logic::mo(2).unwrap();
        let r = check_axioms(&l, &resolve(&l, 0));
        assert!(!r.mp.holds && !r.e.holds && !r.le.holds);
        // Witnesses re-verify.
        let w = r.mp.witness.clone().unwrap();
        assert!(!l.leq(l.meet(w[0], poly(&l, 0, w[0], w[1])), w[1]));
        let a = el(&l, "a");
        let b = el(&l, "b");
        assert!(!l.leq(l.meet(a, poly(&l, 0, a, b)), b));
        let e = r.e.witness.unwrap();
        assert_eq!(poly(&l, 0, e[0], e[1]) == l.one(), !l.leq(e[0], e[1]));
    }

    #[test]
    fn equivalences() {
        for (name, l) in sweep() {
            for j in 0..=5 {
                let r = verify_implication_equivalences(&l, &resolve(&l, j));
                assert!(r.holds(), "{name} j={j}: {r:?}");
            }
        }
        let l = Logic::mo(2).unwrap();
        let a = el(&l, "a");
        let corrupt = resolve(&l, 3).with_entry(a, a, a);
        let r = verify_implication_equivalences(&l, &corrupt);
        assert!(r.agree() && !r.holds(), "{r:?}");
        assert_eq!(r.sandwich.witness, Some(vec![a, a]));
    }

    #[test]
    fn relations_and_characterizations() {
        for (name, l) in sweep() {
            let six = verify_six_relations(&l);
            assert!(six.holds(), "{name}: {six:?}");
            let sasaki = sasaki_characterizations(&l);
            assert!(sasaki.holds(), "{name}: {sasaki:?}");
            assert!(mp_classification(&l).holds(), "{name}");
            assert!(le_classification(&l).holds(), "{name}");
            for j in 0..=5 {
                let imp = resolve(&l, j);
                assert!(mp_characterization(&l, &imp).holds(), "{name} j={j}");
                assert!(deduction_checks(&l, &imp).holds(), "{name} j={j}");
                assert!(le_checks(&l, &imp).holds(), "{name} j={j}");
            }
        }
    }

    #[test]
    fn mp_and_le_on_mo2() {
        let l = Logic::mo(2).unwrap();
        let mps: Vec<bool> = (0..=5).map(|j| check_axioms(&l, &resolve(&l, j)).mp.holds).collect();
        assert_eq!(mps, [false, false, true, true, true, true]);
        let les: Vec<bool> = (0..=5).map(|j| check_axioms(&l, &resolve(&l, j)).le.holds).collect();
        assert_eq!(les, [false, true, true, true, true, true]);
        let es: Vec<bool> = (0..=5).map(|j| check_axioms(&l, &resolve(&l, j)).e.holds).collect();
        assert_eq!(es, [false, true, true, true, true, true]);
        let (a, b) = (el(&l, "a"), el(&l, "b"));
        assert_eq!(logical_equiv(&l, &resolve(&l, 0), a, b), l.one());
        assert_eq!(logical_equiv(&l, &resolve(&l, 3), a, b), l.zero());
    }

    #[test]
    fn family_restriction() {
        for name in ["mo:2", "boolean:2", "hsum:boolean:2,boolean:2"] {
            let l: Logic = name.parse::<crate::lattice::GeneratorSpec>().unwrap().build().unwrap();
            for j in 0..=5 {
                let r = implication_theorem(&l, &resolve(&l, j), 3);
                assert!(r.holds(), "{name} j={j}: {r:?}");
            }
        }
    }

    #[test]
    fn restrict_to_sublogic() {
        let l = Logic::mo(2).unwrap();
        let imp = resolve(&l, 3);
        let b = l.maximal_boolean_sublogic_containing(ElemSet::singleton(el(&l, "a"))).unwrap();
        let (sub, emb) = l.extract(b).unwrap();
        let r = imp.restrict(&sub, &emb).unwrap();
        for p in sub.elements() {
            for q in sub.elements() {
                assert_eq!(emb[r.eval(p, q).index()], imp.eval(emb[p.index()], emb[q.index()]));
                assert_eq!(r.eval(p, q), sub.join(sub.ortho(p), q));
            }
        }
    }
}
