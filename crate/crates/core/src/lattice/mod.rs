//! Finite complete orthomodular lattices ("logics").
//!
//! A [`Logic`] is built once from a [`RawLattice`] description, validated
//! against the ortholattice axioms and the orthomodular law, and then frozen:
//! meet, join and commutation tables are cached so every query is a lookup.

mod generators;
mod json;
mod set;

pub use generators::{sweep, GeneratorSpec, SWEEP};
pub use json::RawLattice;
pub use set::{ElemSet, ElemSetIter, Element};

use thiserror::Error;

/// Largest carrier the bitset representation supports.
pub const MAX_CARRIER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("carrier must have between 1 and {MAX_CARRIER} elements, got {0}")]
    CarrierSize(usize),
    #[error("element index {index} out of range for carrier of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("orthocomplement table has {got} entries, expected {n}")]
    OrthoLength { got: usize, n: usize },
    #[error("names table has {got} entries, expected {n}")]
    NamesLength { got: usize, n: usize },
    #[error("invalid element name {0:?}")]
    InvalidName(String),
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
    #[error("order is not antisymmetric: {a} <= {b} and {b} <= {a}")]
    NotPartialOrder { a: String, b: String },
    #[error("order has no least element")]
    NoBottom,
    #[error("order has no greatest element")]
    NoTop,
    #[error("not a lattice: {a} and {b} have no greatest lower bound")]
    NoMeet { a: String, b: String },
    #[error("not a lattice: {a} and {b} have no least upper bound")]
    NoJoin { a: String, b: String },
    #[error("orthocomplement is not involutive at {a} (C2)")]
    NotInvolutive { a: String },
    #[error("orthocomplement is not antitone: {a} <= {b} but not {b}' <= {a}' (C1)")]
    NotAntitone { a: String, b: String },
    #[error("{a} and {a}' are not complements (C3)")]
    NotComplement { a: String },
    #[error("orthomodular law fails: {p} <= {q} but {p} v ({p}' ^ {q}) != {q}")]
    NotOrthomodular { p: String, q: String },
    #[error("subset is not closed under the lattice operations")]
    NotClosed,
    #[error("elements {a} and {b} do not commute")]
    NotCommuting { a: String, b: String },
    #[error("generator result would have {0} elements (limit {MAX_CARRIER})")]
    GeneratorTooLarge(usize),
    #[error("bad generator spec {0:?}")]
    BadGenerator(String),
    #[error("lattice file: {0}")]
    Parse(String),
}

/// A finite complete orthomodular lattice with cached operation tables.
///
/// Immutable after construction; share it behind an `Arc` across threads.
#[derive(Clone)]
pub struct Logic {
    n: usize,
    // leq[i] has bit j set iff i <= j.
    leq: Vec<u64>,
    ortho: Vec<Element>,
    names: Vec<String>,
    meet: Vec<Element>,
    join: Vec<Element>,
    // commutes[i] has bit j set iff i and j commute.
    commutes: Vec<u64>,
    bottom: Element,
    top: Element,
}

impl std::fmt::Debug for Logic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Logic")
            .field("n", &self.n)
            .field("names", &self.names)
            .finish_non_exhaustive()
    }
}

pub(crate) fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '.' | '~'))
}

impl Logic {
    /// Validates a raw description and builds the logic, or reports the first
    /// violated axiom together with a concrete witness.
    pub fn validate(raw: &RawLattice) -> Result<Logic, LatticeError> {
        let n = raw.n;
        if n == 0 || n > MAX_CARRIER {
            return Err(LatticeError::CarrierSize(n));
        }
        let names: Vec<String> = match &raw.names {
            Some(names) => {
                if names.len() != n {
                    return Err(LatticeError::NamesLength { got: names.len(), n });
                }
                names.clone()
            }
            None => (0..n).map(|i| format!("e{i}")).collect(),
        };
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if !valid_name(name) {
                return Err(LatticeError::InvalidName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(LatticeError::DuplicateName(name.clone()));
            }
        }
        let nm = |i: usize| names[i].clone();

        // Reflexive-transitive closure of the supplied pairs.
        let mut leq: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for &[a, b] in &raw.leq {
            for idx in [a, b] {
                if idx >= n {
                    return Err(LatticeError::IndexOutOfRange { index: idx, n });
                }
            }
            leq[a] |= 1u64 << b;
        }
        for k in 0..n {
            let row_k = leq[k];
            for row in leq.iter_mut() {
                if *row >> k & 1 == 1 {
                    *row |= row_k;
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if leq[a] >> b & 1 == 1 && leq[b] >> a & 1 == 1 {
                    return Err(LatticeError::NotPartialOrder { a: nm(a), b: nm(b) });
                }
            }
        }
        let full = ElemSet::full(n).bits();
        let bottom = (0..n).find(|&i| leq[i] == full).ok_or(LatticeError::NoBottom)?;
        let top = (0..n)
            .find(|&i| leq.iter().all(|row| row >> i & 1 == 1))
            .ok_or(LatticeError::NoTop)?;

        // geq[i] has bit j set iff j <= i.
        let mut geq = vec![0u64; n];
        for i in 0..n {
            for j in ElemSet::from_bits(leq[i]) {
                geq[j.index()] |= 1u64 << i;
            }
        }
        let mut meet = vec![Element::from_index(0); n * n];
        let mut join = vec![Element::from_index(0); n * n];
        for a in 0..n {
            for b in a..n {
                let lower = geq[a] & geq[b];
                let glb = ElemSet::from_bits(lower)
                    .iter()
                    .find(|x| lower & !geq[x.index()] == 0)
                    .ok_or_else(|| LatticeError::NoMeet { a: nm(a), b: nm(b) })?;
                let upper = leq[a] & leq[b];
                let lub = ElemSet::from_bits(upper)
                    .iter()
                    .find(|x| upper & !leq[x.index()] == 0)
                    .ok_or_else(|| LatticeError::NoJoin { a: nm(a), b: nm(b) })?;
                meet[a * n + b] = glb;
                meet[b * n + a] = glb;
                join[a * n + b] = lub;
                join[b * n + a] = lub;
            }
        }

        if raw.ortho.len() != n {
            return Err(LatticeError::OrthoLength { got: raw.ortho.len(), n });
        }
        for &o in &raw.ortho {
            if o >= n {
                return Err(LatticeError::IndexOutOfRange { index: o, n });
            }
        }
        let ortho: Vec<Element> = raw.ortho.iter().map(|&o| Element::from_index(o)).collect();
        for a in 0..n {
            if ortho[ortho[a].index()].index() != a {
                return Err(LatticeError::NotInvolutive { a: nm(a) });
            }
        }
        for a in 0..n {
            for b in ElemSet::from_bits(leq[a]) {
                let (oa, ob) = (ortho[a].index(), ortho[b.index()].index());
                if leq[ob] >> oa & 1 == 0 {
                    return Err(LatticeError::NotAntitone { a: nm(a), b: nm(b.index()) });
                }
            }
        }
        for a in 0..n {
            let o = ortho[a].index();
            if meet[a * n + o].index() != bottom || join[a * n + o].index() != top {
                return Err(LatticeError::NotComplement { a: nm(a) });
            }
        }
        for p in 0..n {
            let op = ortho[p].index();
            for q in ElemSet::from_bits(leq[p]) {
                let q = q.index();
                let inner = meet[op * n + q].index();
                if join[p * n + inner].index() != q {
                    return Err(LatticeError::NotOrthomodular { p: nm(p), q: nm(q) });
                }
            }
        }

        let mut commutes = vec![0u64; n];
        for p in 0..n {
            for q in 0..n {
                let oq = ortho[q].index();
                let lhs = join[meet[p * n + q].index() * n + meet[p * n + oq].index()];
                if lhs.index() == p {
                    commutes[p] |= 1u64 << q;
                }
            }
        }

        Ok(Logic {
            n,
            leq,
            ortho,
            names,
            meet,
            join,
            commutes,
            bottom: Element::from_index(bottom),
            top: Element::from_index(top),
        })
    }

    /// Carrier size.
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> Element {
        self.bottom
    }

    pub fn one(&self) -> Element {
        self.top
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.n).map(Element::from_index)
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    pub fn element(&self, idx: usize) -> Option<Element> {
        (idx < self.n).then(|| Element::from_index(idx))
    }

    pub fn name(&self, e: Element) -> &str {
        &self.names[e.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn by_name(&self, name: &str) -> Option<Element> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(Element::from_index)
    }

    /// Renders a subset as `{a, b, ..}` using element names.
    pub fn format_set(&self, s: ElemSet) -> String {
        let parts: Vec<&str> = s.iter().map(|e| self.name(e)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    #[inline]
    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.leq[a.index()] >> b.index() & 1 == 1
    }

    /// Elements above `a`.
    pub fn up_set(&self, a: Element) -> ElemSet {
        ElemSet::from_bits(self.leq[a.index()])
    }

    #[inline]
    pub fn meet(&self, a: Element, b: Element) -> Element {
        self.meet[a.index() * self.n + b.index()]
    }

    #[inline]
    pub fn join(&self, a: Element, b: Element) -> Element {
        self.join[a.index() * self.n + b.index()]
    }

    #[inline]
    pub fn ortho(&self, a: Element) -> Element {
        self.ortho[a.index()]
    }

    /// Infimum of a subset; the empty meet is 1.
    pub fn big_meet(&self, s: impl IntoIterator<Item = Element>) -> Element {
        s.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Supremum of a subset; the empty join is 0.
    pub fn big_join(&self, s: impl IntoIterator<Item = Element>) -> Element {
        s.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// `p` commutes with `q` iff `p = (p ^ q) v (p ^ q')`.
    #[inline]
    pub fn commutes(&self, p: Element, q: Element) -> bool {
        self.commutes[p.index()] >> q.index() & 1 == 1
    }

    /// All elements commuting with `p`.
    pub fn commuting_with(&self, p: Element) -> ElemSet {
        ElemSet::from_bits(self.commutes[p.index()])
    }

    /// The commutant `A^!`: elements commuting with every member of `a`.
    pub fn commutant(&self, a: ElemSet) -> ElemSet {
        a.iter()
            .fold(self.carrier(), |acc, q| acc.intersection(self.commuting_with(q)))
    }

    /// The sublogic generated by `a`, i.e. the double commutant `A^!!`.
    pub fn sublogic_generated(&self, a: ElemSet) -> ElemSet {
        self.commutant(self.commutant(a))
    }

    /// The center `Z(A) = A^! ∩ A^!!` of the sublogic generated by `a`.
    pub fn center(&self, a: ElemSet) -> ElemSet {
        let once = self.commutant(a);
        once.intersection(self.commutant(once))
    }

    /// Whether the members of `s` pairwise commute.
    pub fn is_boolean(&self, s: ElemSet) -> bool {
        s.is_subset(self.commutant(s))
    }

    /// Whether the whole logic is a Boolean algebra.
    pub fn is_boolean_logic(&self) -> bool {
        self.is_boolean(self.carrier())
    }

    /// A maximal Boolean sublogic containing the pairwise-commuting set `s`.
    ///
    /// Extends `s` greedily in ascending index order, so the result is
    /// deterministic. The result `B` satisfies `B = B^!`.
    pub fn maximal_boolean_sublogic_containing(&self, s: ElemSet) -> Result<ElemSet, LatticeError> {
        for a in s {
            for b in s {
                if !self.commutes(a, b) {
                    return Err(LatticeError::NotCommuting {
                        a: self.name(a).to_string(),
                        b: self.name(b).to_string(),
                    });
                }
            }
        }
        let mut b = s;
        for x in self.elements() {
            if !b.contains(x) && b.is_subset(self.commuting_with(x)) {
                b.insert(x);
            }
        }
        debug_assert_eq!(self.commutant(b), b);
        Ok(b)
    }

    /// The subalgebra generated by `a` (closure under meet, join and
    /// orthocomplement, always containing 0 and 1).
    pub fn subalgebra_generated(&self, a: ElemSet) -> ElemSet {
        let mut s = a;
        s.insert(self.bottom);
        s.insert(self.top);
        loop {
            let mut next = s;
            for x in s {
                next.insert(self.ortho(x));
                for y in s {
                    next.insert(self.meet(x, y));
                    next.insert(self.join(x, y));
                }
            }
            if next == s {
                return s;
            }
            s = next;
        }
    }

    /// `[p, q] ∩ a`.
    pub fn interval(&self, p: Element, q: Element, a: ElemSet) -> ElemSet {
        a.iter()
            .filter(|&x| self.leq(p, x) && self.leq(x, q))
            .collect()
    }

    /// Whether `s` is closed under meet, join and orthocomplement.
    pub fn is_subalgebra(&self, s: ElemSet) -> bool {
        s.iter().all(|x| {
            s.contains(self.ortho(x))
                && s.iter()
                    .all(|y| s.contains(self.meet(x, y)) && s.contains(self.join(x, y)))
        })
    }

    /// Extracts a subalgebra as a standalone logic.
    ///
    /// Returns the new logic and the embedding from its carrier into this
    /// one (`embedding[i]` is the image of the new element `i`).
    pub fn extract(&self, s: ElemSet) -> Result<(Logic, Vec<Element>), LatticeError> {
        if !s.contains(self.bottom) || !s.contains(self.top) || !self.is_subalgebra(s) {
            return Err(LatticeError::NotClosed);
        }
        let embedding: Vec<Element> = s.iter().collect();
        let pos = |e: Element| embedding.iter().position(|&x| x == e).unwrap();
        let mut leq = Vec::new();
        for (i, &a) in embedding.iter().enumerate() {
            for (j, &b) in embedding.iter().enumerate() {
                if i != j && self.leq(a, b) {
                    leq.push([i, j]);
                }
            }
        }
        let raw = RawLattice {
            n: embedding.len(),
            names: Some(embedding.iter().map(|&e| self.name(e).to_string()).collect()),
            leq,
            ortho: embedding.iter().map(|&e| pos(self.ortho(e))).collect(),
        };
        Ok((Logic::validate(&raw)?, embedding))
    }

    /// The raw description of this logic, listing every strict order pair.
    pub fn to_raw(&self) -> RawLattice {
        let mut leq = Vec::new();
        for a in 0..self.n {
            for b in ElemSet::from_bits(self.leq[a]) {
                if b.index() != a {
                    leq.push([a, b.index()]);
                }
            }
        }
        RawLattice {
            n: self.n,
            names: Some(self.names.clone()),
            leq,
            ortho: self.ortho.iter().map(|e| e.index()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mo2() -> Logic {
        Logic::mo(2).unwrap()
    }

    fn el(l: &Logic, name: &str) -> Element {
        l.by_name(name).unwrap()
    }

    fn set(l: &Logic, names: &[&str]) -> ElemSet {
        names.iter().map(|n| el(l, n)).collect()
    }

    #[test]
    fn two_element_chain_is_boolean() {
        let raw = RawLattice {
            n: 2,
            names: None,
            leq: vec![[0, 1]],
            ortho: vec![1, 0],
        };
        let l = Logic::validate(&raw).unwrap();
        assert!(l.is_boolean_logic());
        assert_eq!(l.zero().index(), 0);
        assert_eq!(l.one().index(), 1);
    }

    #[test]
    fn mo2_from_description() {
        // 0, a, a', b, b', 1 with the four atoms pairwise incomparable.
        let raw = RawLattice {
            n: 6,
            names: Some(["0", "a", "a'", "b", "b'", "1"].map(String::from).to_vec()),
            leq: (1..5).flat_map(|i| [[0, i], [i, 5]]).collect(),
            ortho: vec![5, 2, 1, 4, 3, 0],
        };
        let l = Logic::validate(&raw).unwrap();
        assert!(!l.is_boolean_logic());
    }

    #[test]
    fn hexagon_violates_orthomodularity() {
        // 0 < a < b < 1 and 0 < b' < a' < 1.
        let raw = RawLattice {
            n: 6,
            names: Some(["0", "a", "b", "b'", "a'", "1"].map(String::from).to_vec()),
            leq: vec![[0, 1], [1, 2], [2, 5], [0, 3], [3, 4], [4, 5]],
            ortho: vec![5, 4, 3, 2, 1, 0],
        };
        match Logic::validate(&raw) {
            Err(LatticeError::NotOrthomodular { p, q }) => {
                assert_eq!((p.as_str(), q.as_str()), ("a", "b"));
            }
            other => panic!("expected OM violation, got {other:?}"),
        }
    }

    #[test]
    fn distinct_diagnostics() {
        // Missing meet: two incomparable minimal elements under a top.
        let raw = RawLattice {
            n: 3,
            names: None,
            leq: vec![[0, 2], [1, 2]],
            ortho: vec![1, 0, 2],
        };
        assert_eq!(Logic::validate(&raw).unwrap_err(), LatticeError::NoBottom);

        // Two incomparable middle elements with two common upper bounds.
        let raw = RawLattice {
            n: 6,
            names: None,
            leq: vec![[0, 1], [0, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 5], [4, 5]],
            ortho: vec![5, 4, 3, 2, 1, 0],
        };
        assert!(matches!(
            Logic::validate(&raw),
            Err(LatticeError::NoJoin { .. }) | Err(LatticeError::NoMeet { .. })
        ));

        let raw = RawLattice {
            n: 4,
            names: None,
            leq: vec![[0, 1], [0, 2], [1, 3], [2, 3]],
            ortho: vec![3, 1, 1, 0],
        };
        assert!(matches!(
            Logic::validate(&raw),
            Err(LatticeError::NotInvolutive { .. })
        ));

        // Identity "complement" on a 4-element Boolean algebra.
        let raw = RawLattice {
            n: 4,
            names: None,
            leq: vec![[0, 1], [0, 2], [1, 3], [2, 3]],
            ortho: vec![3, 1, 2, 0],
        };
        assert!(matches!(
            Logic::validate(&raw),
            Err(LatticeError::NotComplement { .. })
        ));

        // 3-chain with the middle fixed: antitone and involutive but not a complement.
        let raw = RawLattice {
            n: 4,
            names: None,
            leq: vec![[0, 1], [1, 2], [2, 3]],
            ortho: vec![3, 2, 1, 0],
        };
        assert!(matches!(
            Logic::validate(&raw),
            Err(LatticeError::NotComplement { .. })
        ));

        let raw = RawLattice {
            n: 2,
            names: None,
            leq: vec![[0, 1], [1, 0]],
            ortho: vec![1, 0],
        };
        assert!(matches!(
            Logic::validate(&raw),
            Err(LatticeError::NotPartialOrder { .. })
        ));
    }

    #[test]
    fn mo2_meets_and_joins() {
        let l = mo2();
        let (a, b) = (el(&l, "a"), el(&l, "b"));
        assert_eq!(l.meet(a, b), l.zero());
        assert_eq!(l.join(a, b), l.one());
        for x in l.elements() {
            assert_eq!(l.meet(x, l.one()), x);
        }
        assert_eq!(l.big_join(ElemSet::EMPTY), l.zero());
        assert_eq!(l.big_meet(ElemSet::EMPTY), l.one());
    }

    #[test]
    fn commutation() {
        let l = mo2();
        let (a, b) = (el(&l, "a"), el(&l, "b"));
        assert!(!l.commutes(a, b));
        for p in l.elements() {
            assert!(l.commutes(p, p));
            for q in l.elements() {
                let c = l.commutes(p, q);
                assert_eq!(c, l.commutes(q, p));
                assert_eq!(c, l.commutes(l.ortho(p), q));
                assert_eq!(c, l.commutes(p, l.ortho(q)));
                assert_eq!(c, l.commutes(l.ortho(p), l.ortho(q)));
            }
        }
        let b2 = Logic::boolean(2).unwrap();
        for p in b2.elements() {
            for q in b2.elements() {
                assert!(b2.commutes(p, q));
            }
        }
    }

    #[test]
    fn commutants_and_centers() {
        let l = mo2();
        assert_eq!(
            l.commutant(set(&l, &["a"])),
            set(&l, &["0", "a", "a'", "1"])
        );
        assert_eq!(l.commutant(ElemSet::EMPTY), l.carrier());
        assert_eq!(l.sublogic_generated(set(&l, &["a", "b"])), l.carrier());
        assert_eq!(l.sublogic_generated(l.carrier()), l.carrier());
        assert_eq!(l.center(set(&l, &["a", "b"])), set(&l, &["0", "1"]));
        assert_eq!(l.center(set(&l, &["a"])), set(&l, &["0", "a", "a'", "1"]));

        let b2 = Logic::boolean(2).unwrap();
        let p = set(&b2, &["p"]);
        assert_eq!(b2.commutant(p), b2.carrier());
        assert_eq!(b2.sublogic_generated(p), b2.carrier());
        assert_eq!(b2.center(p), b2.sublogic_generated(p));
    }

    #[test]
    fn maximal_boolean_sublogics() {
        let l = mo2();
        assert_eq!(
            l.maximal_boolean_sublogic_containing(set(&l, &["a"])).unwrap(),
            set(&l, &["0", "a", "a'", "1"])
        );
        assert!(matches!(
            l.maximal_boolean_sublogic_containing(set(&l, &["a", "b"])),
            Err(LatticeError::NotCommuting { .. })
        ));
        let b2 = Logic::boolean(2).unwrap();
        assert_eq!(
            b2.maximal_boolean_sublogic_containing(ElemSet::EMPTY).unwrap(),
            b2.carrier()
        );
    }

    #[test]
    fn extract_sublogic() {
        let l = mo2();
        let s = set(&l, &["0", "a", "a'", "1"]);
        let (sub, emb) = l.extract(s).unwrap();
        assert_eq!(sub.size(), 4);
        assert!(sub.is_boolean_logic());
        for x in sub.elements() {
            for y in sub.elements() {
                assert_eq!(emb[sub.meet(x, y).index()], l.meet(emb[x.index()], emb[y.index()]));
            }
        }
        assert_eq!(l.extract(set(&l, &["0", "a", "1"])).unwrap_err(), LatticeError::NotClosed);
    }
}
