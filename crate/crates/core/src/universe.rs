//! Names of the orthomodular-valued universe, built to bounded rank.
//!
//! A name is a finite list of `(child, value)` entries. Names are
//! hash-consed in a [`NodeStore`], so structural equality is identity and
//! a [`NodeId`] can be compared and hashed directly. Restricted names may
//! list the same child twice with different values; see [`NodeStore::restrict`].

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::commutator::commutator;
use crate::hf::Hf;
use crate::{ElemSet, Element, Error, Logic, Result};

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_RANK_BOUND: u32 = 3;
pub const DEFAULT_DOM_CAP: usize = 2;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    /// An unchecked handle; stores reject indices they did not issue.
    pub const fn from_raw(n: u32) -> NodeId {
        NodeId(n)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

type Entries = Box<[(NodeId, Element)]>;

#[derive(Clone, Debug)]
struct NodeData {
    entries: Entries,
    rank: u32,
    support: ElemSet,
}

/// Interning store for names. Node 0 is always the empty name.
#[derive(Clone, Debug)]
pub struct NodeStore {
    nodes: Vec<NodeData>,
    index: HashMap<Entries, NodeId>,
    restricted: HashMap<(NodeId, Element), NodeId>,
    checks: HashMap<Hf, NodeId>,
}

impl Default for NodeStore {
    fn default() -> Self {
        NodeStore::new()
    }
}

impl NodeStore {
    pub fn new() -> NodeStore {
        let mut s = NodeStore {
            nodes: Vec::new(),
            index: HashMap::new(),
            restricted: HashMap::new(),
            checks: HashMap::new(),
        };
        s.intern(Vec::new());
        s
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn empty(&self) -> NodeId {
        NodeId(0)
    }

    pub fn get(&self, idx: usize) -> Option<NodeId> {
        (idx < self.nodes.len()).then_some(NodeId(idx as u32))
    }

    /// Interns a name. Entries are sorted and identical pairs merged.
    pub fn intern(&mut self, mut entries: Vec<(NodeId, Element)>) -> NodeId {
        entries.sort_unstable();
        entries.dedup();
        let entries: Entries = entries.into_boxed_slice();
        if let Some(&id) = self.index.get(&entries) {
            return id;
        }
        let mut rank = 1;
        let mut support = ElemSet::EMPTY;
        for &(c, v) in entries.iter() {
            let d = &self.nodes[c.index()];
            rank = rank.max(d.rank + 1);
            support = support.union(d.support);
            support.insert(v);
        }
        let id = NodeId(u32::try_from(self.nodes.len()).expect("node store overflow"));
        self.nodes.push(NodeData { entries: entries.clone(), rank, support });
        self.index.insert(entries, id);
        id
    }

    pub fn entries(&self, u: NodeId) -> &[(NodeId, Element)] {
        &self.nodes[u.index()].entries
    }

    /// Rank with the empty name at rank 1.
    pub fn rank(&self, u: NodeId) -> u32 {
        self.nodes[u.index()].rank
    }

    /// `L(u)`: every value occurring hereditarily in `u`.
    pub fn support(&self, u: NodeId) -> ElemSet {
        self.nodes[u.index()].support
    }

    pub fn support_of(&self, us: &[NodeId]) -> ElemSet {
        us.iter().fold(ElemSet::EMPTY, |s, &u| s.union(self.support(u)))
    }

    /// `u(x)` for every entry with child `x` (several after a restriction).
    pub fn values_at(&self, u: NodeId, x: NodeId) -> impl Iterator<Item = Element> + '_ {
        self.entries(u).iter().filter(move |e| e.0 == x).map(|e| e.1)
    }

    /// `u|_p`: every value meets `p`, hereditarily.
    ///
    /// The result keeps one entry per entry of `u`. When two children of
    /// `u` restrict to the same name the entries stay separate unless
    /// their restricted values agree.
    pub fn restrict(&mut self, l: &Logic, u: NodeId, p: Element) -> NodeId {
        if let Some(&r) = self.restricted.get(&(u, p)) {
            return r;
        }
        let entries: Vec<_> = self.entries(u).to_vec();
        let mut out = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            let rc = self.restrict(l, c, p);
            out.push((rc, l.meet(v, p)));
        }
        let r = self.intern(out);
        self.restricted.insert((u, p), r);
        r
    }

    /// The check embedding of an HF set: every child gets value 1.
    pub fn check_embed(&mut self, l: &Logic, s: Hf) -> NodeId {
        if let Some(&id) = self.checks.get(&s) {
            return id;
        }
        let one = l.one();
        let entries = s.members().map(|x| (self.check_embed(l, x), one)).collect();
        let id = self.intern(entries);
        self.checks.insert(s, id);
        id
    }

    /// `u_b = {∅̌ ↦ b}`.
    pub fn make_ub(&mut self, b: Element) -> NodeId {
        let e = self.empty();
        self.intern(vec![(e, b)])
    }

    /// Copies a name from another store, mapping every value. Returns
    /// `None` if some value has no image.
    pub fn transport(
        &mut self,
        src: &NodeStore,
        u: NodeId,
        map: &impl Fn(Element) -> Option<Element>,
    ) -> Option<NodeId> {
        let mut memo = HashMap::new();
        self.transport_memo(src, u, map, &mut memo)
    }

    fn transport_memo(
        &mut self,
        src: &NodeStore,
        u: NodeId,
        map: &impl Fn(Element) -> Option<Element>,
        memo: &mut HashMap<NodeId, NodeId>,
    ) -> Option<NodeId> {
        if let Some(&r) = memo.get(&u) {
            return Some(r);
        }
        let mut out = Vec::with_capacity(src.entries(u).len());
        for &(c, v) in src.entries(u) {
            out.push((self.transport_memo(src, c, map, memo)?, map(v)?));
        }
        let r = self.intern(out);
        memo.insert(u, r);
        Some(r)
    }

    /// `⌀(A)` for a tuple of names: the commutator of the union of supports.
    pub fn qset_commutator(&self, l: &Logic, us: &[NodeId]) -> Element {
        commutator(l, self.support_of(us))
    }

    /// `Q(A) = L(A)^{!!}`.
    pub fn generated_logic(&self, l: &Logic, us: &[NodeId]) -> ElemSet {
        l.sublogic_generated(self.support_of(us))
    }

    /// Literal syntax `{child: value, ..}` accepted by the formula parser.
    pub fn literal(&self, l: &Logic, u: NodeId) -> String {
        let mut s = String::new();
        self.write_literal(l, u, &mut s);
        s
    }

    fn write_literal(&self, l: &Logic, u: NodeId, out: &mut String) {
        out.push('{');
        for (i, &(c, v)) in self.entries(u).iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            self.write_literal(l, c, out);
            out.push_str(": ");
            out.push_str(l.name(v));
        }
        out.push('}');
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FragmentParams {
    pub rank_bound: u32,
    pub dom_cap: usize,
    pub budget: u64,
}

impl Default for FragmentParams {
    fn default() -> Self {
        FragmentParams {
            rank_bound: DEFAULT_RANK_BOUND,
            dom_cap: DEFAULT_DOM_CAP,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl FragmentParams {
    pub fn new(rank_bound: u32, dom_cap: usize) -> FragmentParams {
        FragmentParams { rank_bound, dom_cap, budget: DEFAULT_BUDGET }
    }

    pub fn with_budget(self, budget: u64) -> FragmentParams {
        FragmentParams { budget, ..self }
    }
}

/// Number of names of rank at most `rank_bound` with at most `dom_cap`
/// children and values drawn from `values` elements. Saturates at
/// `u128::MAX`.
pub fn predicted_size(values: usize, rank_bound: u32, dom_cap: usize) -> u128 {
    if rank_bound == 0 {
        return 0;
    }
    let q = values as u128;
    let mut count: u128 = 1;
    for _ in 1..rank_bound {
        let mut next: u128 = 0;
        let mut binom: u128 = 1;
        let mut qk: u128 = 1;
        for k in 0..=dom_cap as u128 {
            if k > count {
                break;
            }
            if k > 0 {
                binom = match binom.checked_mul(count - k + 1) {
                    Some(b) => b / k,
                    None => return u128::MAX,
                };
                qk = match qk.checked_mul(q) {
                    Some(x) => x,
                    None => return u128::MAX,
                };
            }
            next = match binom.checked_mul(qk).and_then(|t| next.checked_add(t)) {
                Some(n) => n,
                None => return u128::MAX,
            };
        }
        count = next;
    }
    count
}

/// All names of rank at most `rank_bound` with at most `dom_cap` children
/// and values in `values`, children before parents.
#[derive(Clone, Debug)]
pub struct Fragment {
    pub params: FragmentParams,
    pub values: ElemSet,
    nodes: Vec<NodeId>,
    members: HashSet<NodeId>,
    strata: Vec<usize>,
}

impl Fragment {
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, u: NodeId) -> bool {
        self.members.contains(&u)
    }

    /// `#V_α` for `α = 1..=rank_bound`.
    pub fn strata(&self) -> &[usize] {
        &self.strata
    }
}

pub fn build_fragment(store: &mut NodeStore, l: &Logic, params: FragmentParams) -> Result<Fragment> {
    build_fragment_over(store, l.carrier(), params)
}

/// Builds the fragment whose values are restricted to `values`.
pub fn build_fragment_over(
    store: &mut NodeStore,
    values: ElemSet,
    params: FragmentParams,
) -> Result<Fragment> {
    let FragmentParams { rank_bound, dom_cap, budget } = params;
    if rank_bound == 0 {
        return Err(Error::InvalidArgument("rank bound must be at least 1".into()));
    }
    if rank_bound > DEFAULT_RANK_BOUND && dom_cap > 2 {
        return Err(Error::InvalidArgument(format!(
            "rank bound {rank_bound} needs dom cap at most 2 (got {dom_cap})"
        )));
    }
    let count = predicted_size(values.len(), rank_bound, dom_cap);
    if count > budget as u128 {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let vals: Vec<Element> = values.iter().collect();
    let mut prev = vec![store.empty()];
    let mut strata = vec![1];
    for _ in 1..rank_bound {
        let mut next = Vec::new();
        for k in 0..=dom_cap.min(prev.len()) {
            for_each_combination(prev.len(), k, |idx| {
                if k > 0 && vals.is_empty() {
                    return;
                }
                let mut digits = vec![0usize; k];
                loop {
                    let entries = idx.iter().zip(&digits).map(|(&i, &d)| (prev[i], vals[d])).collect();
                    next.push(store.intern(entries));
                    let mut pos = k;
                    loop {
                        if pos == 0 {
                            return;
                        }
                        pos -= 1;
                        digits[pos] += 1;
                        if digits[pos] < vals.len() {
                            break;
                        }
                        digits[pos] = 0;
                    }
                }
            });
        }
        next.sort_unstable();
        debug_assert!(next.windows(2).all(|w| w[0] != w[1]));
        strata.push(next.len());
        prev = next;
    }
    debug_assert_eq!(prev.len() as u128, count);
    let members = prev.iter().copied().collect();
    Ok(Fragment { params, values, nodes: prev, members, strata })
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
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

    #[test]
    fn fragment_counts() {
        let l = mo2();
        let mut s = NodeStore::new();
        let f1 = build_fragment(&mut s, &l, FragmentParams::new(1, 2)).unwrap();
        assert_eq!(f1.len(), 1);
        let f = build_fragment(&mut s, &l, FragmentParams::new(2, 1)).unwrap();
        assert_eq!(f.len(), 7);
        let f = build_fragment(&mut s, &l, FragmentParams::new(3, 2)).unwrap();
        assert_eq!(f.len(), 799);
        assert_eq!(f.strata(), &[1, 7, 799]);
        assert_eq!(predicted_size(6, 3, 2), 799);

        let b = Logic::boolean(1).unwrap();
        let mut s = NodeStore::new();
        let f = build_fragment(&mut s, &b, FragmentParams::new(2, 1)).unwrap();
        assert_eq!(f.len(), 3);
        let lits: Vec<_> = f.nodes().iter().map(|&u| s.literal(&b, u)).collect();
        assert_eq!(lits, ["{}", "{{}: 0}", "{{}: 1}"]);
    }

    #[test]
    fn children_precede_parents() {
        let l = mo2();
        let mut s = NodeStore::new();
        let f = build_fragment(&mut s, &l, FragmentParams::new(3, 2)).unwrap();
        let pos: HashMap<_, _> = f.nodes().iter().enumerate().map(|(i, &u)| (u, i)).collect();
        for &u in f.nodes() {
            assert!(s.rank(u) <= 3);
            assert!(s.entries(u).len() <= 2);
            for &(c, _) in s.entries(u) {
                assert!(pos[&c] < pos[&u]);
            }
        }
    }

    #[test]
    fn budget_and_limits() {
        let l = mo2();
        let mut s = NodeStore::new();
        let err = build_fragment(&mut s, &l, FragmentParams::new(3, 2).with_budget(100)).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { count: 799, budget: 100 });
        assert!(build_fragment(&mut s, &l, FragmentParams::new(4, 3)).is_err());
        assert_eq!(predicted_size(6, 7, 2), u128::MAX);
    }

    #[test]
    fn supports_and_commutators() {
        let l = mo2();
        let mut s = NodeStore::new();
        let e = s.empty();
        assert_eq!(s.support(e), ElemSet::EMPTY);
        assert_eq!(s.qset_commutator(&l, &[e]), l.one());
        let u = s.make_ub(el(&l, "a"));
        let v = s.make_ub(el(&l, "b"));
        assert_eq!(s.support(u), ElemSet::singleton(el(&l, "a")));
        assert_eq!(s.qset_commutator(&l, &[u]), l.one());
        assert_eq!(s.qset_commutator(&l, &[u, v]), l.zero());
        assert_eq!(s.literal(&l, u), "{{}: a}");
        assert_eq!(s.rank(u), 2);
    }

    #[test]
    fn generated_logic_examples() {
        let l = mo2();
        let mut s = NodeStore::new();
        let c = s.check_embed(&l, Hf::numeral(2).unwrap());
        assert_eq!(s.generated_logic(&l, &[c]), [l.zero(), l.one()].into_iter().collect());
        let u = s.make_ub(el(&l, "a"));
        let v = s.make_ub(el(&l, "b"));
        let expect: ElemSet = ["0", "a", "a'", "1"].iter().map(|n| el(&l, n)).collect();
        assert_eq!(s.generated_logic(&l, &[u]), expect);
        assert_eq!(s.generated_logic(&l, &[u, v]), l.carrier());
    }

    #[test]
    fn check_embeddings() {
        let l = mo2();
        let mut s = NodeStore::new();
        assert_eq!(s.check_embed(&l, Hf::EMPTY), s.empty());
        let one = s.check_embed(&l, Hf::numeral(1).unwrap());
        assert_eq!(s.literal(&l, one), "{{}: 1}");
        let two = s.check_embed(&l, Hf::numeral(2).unwrap());
        assert_eq!(s.literal(&l, two), "{{}: 1, {{}: 1}: 1}");
        assert_eq!(s.support(two), ElemSet::singleton(l.one()));
    }

    #[test]
    fn restriction_laws() {
        let l = mo2();
        let mut s = NodeStore::new();
        let f = build_fragment(&mut s, &l, FragmentParams::new(3, 2)).unwrap();
        let u = s.make_ub(el(&l, "a"));
        let a = el(&l, "a");
        assert_eq!(s.restrict(&l, u, a), u);
        for &u in f.nodes() {
            assert_eq!(s.restrict(&l, u, l.one()), u);
            let z = s.restrict(&l, u, l.zero());
            assert!(s.support(z).iter().all(|v| v == l.zero()));
            for p in l.elements() {
                let up = s.restrict(&l, u, p);
                let expect: ElemSet = s.support(u).iter().map(|x| l.meet(x, p)).collect();
                assert_eq!(s.support(up), expect);
                for q in l.elements().filter(|&q| l.leq(q, p)) {
                    let upq = s.restrict(&l, up, q);
                    assert_eq!(upq, s.restrict(&l, u, q));
                }
            }
        }
    }

    #[test]
    fn sublogic_fragment_membership() {
        let l = mo2();
        let mut s = NodeStore::new();
        let sub: ElemSet = ["0", "a", "a'", "1"].iter().map(|n| el(&l, n)).collect();
        let full = build_fragment(&mut s, &l, FragmentParams::new(3, 2)).unwrap();
        let part = build_fragment_over(&mut s, sub, FragmentParams::new(3, 2)).unwrap();
        let filtered: Vec<_> =
            full.nodes().iter().copied().filter(|&u| s.support(u).is_subset(sub)).collect();
        assert_eq!(part.nodes(), filtered.as_slice());
        assert_eq!(part.len() as u128, predicted_size(4, 3, 2));
    }

    #[test]
    fn transport_maps_values() {
        let l = mo2();
        let (b, emb) = l.extract(l.sublogic_generated(ElemSet::singleton(el(&l, "a")))).unwrap();
        let mut sb = NodeStore::new();
        let fb = build_fragment(&mut sb, &b, FragmentParams::new(2, 2)).unwrap();
        let mut s = NodeStore::new();
        for &u in fb.nodes() {
            let t = s.transport(&sb, u, &|e| Some(emb[e.index()])).unwrap();
            assert_eq!(s.literal(&l, t), sb.literal(&b, u));
            let back = sb.transport(&s, t, &|e| emb.iter().position(|&x| x == e).map(Element::from_index));
            assert_eq!(back, Some(u));
        }
    }
}
