use std::fmt;
use std::str::FromStr;

use super::{LatticeError, Logic, RawLattice, MAX_CARRIER};

const ATOM_LETTERS: &[u8] = b"pqrstuvwxyz";
const MO_LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDE";

impl Logic {
    /// The Boolean algebra of subsets of a `k`-element set (`2^k` elements).
    ///
    /// Element `i` is the subset with bitmask `i`; atoms are named
    /// `p, q, r, ..` and other elements by concatenating their atoms, with
    /// `0` and `1` for the bounds.
    pub fn boolean(k: usize) -> Result<Logic, LatticeError> {
        if k == 0 {
            return Err(LatticeError::BadGenerator("boolean:0".into()));
        }
        if k > 6 {
            return Err(LatticeError::GeneratorTooLarge(1usize << k.min(20)));
        }
        let n = 1usize << k;
        let full = n - 1;
        let names = (0..n)
            .map(|m| match m {
                0 => "0".to_string(),
                m if m == full => "1".to_string(),
                m => (0..k)
                    .filter(|b| m >> b & 1 == 1)
                    .map(|b| ATOM_LETTERS[b] as char)
                    .collect(),
            })
            .collect();
        let mut leq = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && a & b == a {
                    leq.push([a, b]);
                }
            }
        }
        Logic::validate(&RawLattice {
            n,
            names: Some(names),
            leq,
            ortho: (0..n).map(|m| full & !m).collect(),
        })
    }

    /// The orthomodular lattice `MO_k`: `k` pairs of complementary atoms
    /// `a, a', b, b', ..` between 0 and 1 (`2k + 2` elements).
    pub fn mo(k: usize) -> Result<Logic, LatticeError> {
        if k == 0 {
            return Err(LatticeError::BadGenerator("mo:0".into()));
        }
        let n = 2 * k + 2;
        if n > MAX_CARRIER {
            return Err(LatticeError::GeneratorTooLarge(n));
        }
        let mut names = vec!["0".to_string()];
        for i in 0..k {
            let c = MO_LETTERS[i] as char;
            names.push(c.to_string());
            names.push(format!("{c}'"));
        }
        names.push("1".to_string());
        let top = n - 1;
        let leq = (1..top).flat_map(|i| [[0, i], [i, top]]).collect();
        let mut ortho = vec![top];
        for i in 0..k {
            ortho.push(2 * i + 2);
            ortho.push(2 * i + 1);
        }
        ortho.push(0);
        Logic::validate(&RawLattice {
            n,
            names: Some(names),
            leq,
            ortho,
        })
    }

    /// Direct product with componentwise order and orthocomplement.
    ///
    /// The pair `(x, y)` has index `x * |rhs| + y` and name `x.y`.
    pub fn product(lhs: &Logic, rhs: &Logic) -> Result<Logic, LatticeError> {
        let (n1, n2) = (lhs.size(), rhs.size());
        let n = n1 * n2;
        if n > MAX_CARRIER {
            return Err(LatticeError::GeneratorTooLarge(n));
        }
        let mut names = Vec::with_capacity(n);
        let mut ortho = Vec::with_capacity(n);
        let mut leq = Vec::new();
        for x in lhs.elements() {
            for y in rhs.elements() {
                names.push(format!("{}.{}", lhs.name(x), rhs.name(y)));
                ortho.push(lhs.ortho(x).index() * n2 + rhs.ortho(y).index());
                for x2 in lhs.elements() {
                    for y2 in rhs.elements() {
                        if (x, y) != (x2, y2) && lhs.leq(x, x2) && rhs.leq(y, y2) {
                            leq.push([x.index() * n2 + y.index(), x2.index() * n2 + y2.index()]);
                        }
                    }
                }
            }
        }
        Logic::validate(&RawLattice {
            n,
            names: Some(names),
            leq,
            ortho,
        })
    }

    /// Horizontal sum: the two bottoms and the two tops are identified and
    /// every other element of one summand is incomparable with every other
    /// element of the other.
    ///
    /// Carrier order is `0`, the inner elements of `lhs`, the inner elements
    /// of `rhs`, `1`. A name of `rhs` that clashes with one already taken gets
    /// a numeric suffix.
    pub fn horizontal_sum(lhs: &Logic, rhs: &Logic) -> Result<Logic, LatticeError> {
        let inner = |l: &Logic| -> Vec<_> {
            l.elements()
                .filter(|&e| e != l.zero() && e != l.one())
                .collect()
        };
        let (in1, in2) = (inner(lhs), inner(rhs));
        let n = in1.len() + in2.len() + 2;
        if n > MAX_CARRIER {
            return Err(LatticeError::GeneratorTooLarge(n));
        }
        let top = n - 1;
        let pos1 = |e| if e == lhs.zero() { 0 } else if e == lhs.one() { top } else {
            1 + in1.iter().position(|&x| x == e).unwrap()
        };
        let pos2 = |e| if e == rhs.zero() { 0 } else if e == rhs.one() { top } else {
            1 + in1.len() + in2.iter().position(|&x| x == e).unwrap()
        };
        let mut names = vec!["0".to_string()];
        let mut taken: std::collections::HashSet<String> =
            ["0".to_string(), "1".to_string()].into_iter().collect();
        for &e in &in1 {
            let name = lhs.name(e).to_string();
            taken.insert(name.clone());
            names.push(name);
        }
        for &e in &in2 {
            let base = rhs.name(e).to_string();
            let mut name = base.clone();
            let mut k = 2;
            while taken.contains(&name) {
                name = format!("{base}_{k}");
                k += 1;
            }
            taken.insert(name.clone());
            names.push(name);
        }
        names.push("1".to_string());

        let mut leq = Vec::new();
        let mut ortho = vec![0; n];
        ortho[0] = top;
        ortho[top] = 0;
        for &x in &in1 {
            leq.push([0, pos1(x)]);
            leq.push([pos1(x), top]);
            ortho[pos1(x)] = pos1(lhs.ortho(x));
            for &y in &in1 {
                if x != y && lhs.leq(x, y) {
                    leq.push([pos1(x), pos1(y)]);
                }
            }
        }
        for &x in &in2 {
            leq.push([0, pos2(x)]);
            leq.push([pos2(x), top]);
            ortho[pos2(x)] = pos2(rhs.ortho(x));
            for &y in &in2 {
                if x != y && rhs.leq(x, y) {
                    leq.push([pos2(x), pos2(y)]);
                }
            }
        }
        Logic::validate(&RawLattice {
            n,
            names: Some(names),
            leq,
            ortho,
        })
    }
}

/// A textual generator recipe: `boolean:k`, `mo:k`, `prod:A,B`, `hsum:A,B`.
///
/// Operands of `prod`/`hsum` may themselves be recipes; wrap nested ones in
/// parentheses, e.g. `prod:(hsum:boolean:2,boolean:2),boolean:1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    Boolean(usize),
    Mo(usize),
    Product(Box<GeneratorSpec>, Box<GeneratorSpec>),
    HorizontalSum(Box<GeneratorSpec>, Box<GeneratorSpec>),
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<Logic, LatticeError> {
        match self {
            GeneratorSpec::Boolean(k) => Logic::boolean(*k),
            GeneratorSpec::Mo(k) => Logic::mo(*k),
            GeneratorSpec::Product(a, b) => Logic::product(&a.build()?, &b.build()?),
            GeneratorSpec::HorizontalSum(a, b) => Logic::horizontal_sum(&a.build()?, &b.build()?),
        }
    }
}

/// The standard test sweep: `boolean:1..=3`, `mo:2`, `mo:3`,
/// `prod:boolean:1,mo:2` and `hsum:boolean:2,boolean:2`.
pub const SWEEP: [&str; 7] = [
    "boolean:1",
    "boolean:2",
    "boolean:3",
    "mo:2",
    "mo:3",
    "prod:boolean:1,mo:2",
    "hsum:boolean:2,boolean:2",
];

/// Builds every logic of [`SWEEP`], paired with its recipe.
pub fn sweep() -> Vec<(String, Logic)> {
    SWEEP
        .iter()
        .map(|s| {
            let l = s.parse::<GeneratorSpec>().and_then(|g| g.build()).expect("sweep recipes are valid");
            (s.to_string(), l)
        })
        .collect()
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(f: &mut fmt::Formatter<'_>, g: &GeneratorSpec) -> fmt::Result {
            match g {
                GeneratorSpec::Product(..) | GeneratorSpec::HorizontalSum(..) => write!(f, "({g})"),
                _ => write!(f, "{g}"),
            }
        }
        match self {
            GeneratorSpec::Boolean(k) => write!(f, "boolean:{k}"),
            GeneratorSpec::Mo(k) => write!(f, "mo:{k}"),
            GeneratorSpec::Product(a, b) | GeneratorSpec::HorizontalSum(a, b) => {
                let tag = if matches!(self, GeneratorSpec::Product(..)) { "prod" } else { "hsum" };
                write!(f, "{tag}:")?;
                operand(f, a)?;
                write!(f, ",")?;
                operand(f, b)
            }
        }
    }
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') {
        // Only strip when the outer pair matches.
        let mut depth = 0;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i != s.len() - 1 {
                        return s;
                    }
                }
                _ => {}
            }
        }
        return &s[1..s.len() - 1];
    }
    s
}

impl FromStr for GeneratorSpec {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LatticeError::BadGenerator(s.to_string());
        let s = strip_parens(s);
        let (tag, rest) = s.split_once(':').ok_or_else(bad)?;
        match tag.trim() {
            "boolean" | "mo" => {
                let k: usize = rest.trim().parse().map_err(|_| bad())?;
                Ok(if tag.trim() == "boolean" { GeneratorSpec::Boolean(k) } else { GeneratorSpec::Mo(k) })
            }
            "prod" | "hsum" => {
                // Split at the first top-level comma.
                let mut depth = 0i32;
                let mut split = None;
                for (i, c) in rest.char_indices() {
                    match c {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        ',' if depth == 0 => {
                            split = Some(i);
                            break;
                        }
                        _ => {}
                    }
                }
                let i = split.ok_or_else(bad)?;
                let a: GeneratorSpec = rest[..i].parse()?;
                let b: GeneratorSpec = rest[i + 1..].parse()?;
                Ok(if tag.trim() == "prod" {
                    GeneratorSpec::Product(Box::new(a), Box::new(b))
                } else {
                    GeneratorSpec::HorizontalSum(Box::new(a), Box::new(b))
                })
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(Logic::boolean(2).unwrap().size(), 4);
        assert_eq!(Logic::boolean(3).unwrap().size(), 8);
        assert_eq!(Logic::mo(2).unwrap().size(), 6);
        assert_eq!(Logic::mo(3).unwrap().size(), 8);
        let p = Logic::product(&Logic::boolean(1).unwrap(), &Logic::mo(2).unwrap()).unwrap();
        assert_eq!(p.size(), 12);
        assert!(!p.is_boolean_logic());
    }

    #[test]
    fn mo2_names() {
        let l = Logic::mo(2).unwrap();
        assert_eq!(l.names(), &["0", "a", "a'", "b", "b'", "1"]);
        let a = l.by_name("a").unwrap();
        assert_eq!(l.name(l.ortho(a)), "a'");
    }

    #[test]
    fn hsum_of_two_squares_is_mo2() {
        let b2 = Logic::boolean(2).unwrap();
        let h = Logic::horizontal_sum(&b2, &b2).unwrap();
        assert_eq!(h.size(), 6);
        assert_eq!(h.names(), &["0", "p", "q", "p_2", "q_2", "1"]);
        let (p, p2) = (h.by_name("p").unwrap(), h.by_name("p_2").unwrap());
        assert!(!h.commutes(p, p2));
        assert_eq!(h.meet(p, p2), h.zero());
    }

    #[test]
    fn refuses_oversized() {
        assert!(matches!(Logic::boolean(7), Err(LatticeError::GeneratorTooLarge(_))));
        assert!(matches!(Logic::mo(32), Err(LatticeError::GeneratorTooLarge(66))));
        let m = Logic::mo(4).unwrap();
        assert!(matches!(Logic::product(&m, &m), Err(LatticeError::GeneratorTooLarge(100))));
    }

    #[test]
    fn spec_strings() {
        for s in ["boolean:3", "mo:2", "prod:boolean:1,mo:2", "hsum:boolean:2,boolean:2",
                  "prod:(hsum:boolean:2,boolean:2),boolean:1"] {
            let g: GeneratorSpec = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
            g.build().unwrap();
        }
        assert!("mo".parse::<GeneratorSpec>().is_err());
        assert!("prod:mo:2".parse::<GeneratorSpec>().is_err());
        assert!("cube:3".parse::<GeneratorSpec>().is_err());
    }
}
