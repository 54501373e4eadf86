use super::{resolve_lit, Formula, NodeLit, Term};
use crate::hf;
use crate::universe::{NodeId, NodeStore};
use crate::{Error, Logic, Result};

const KEYWORDS: &[&str] = &["forall", "exists", "in", "sub", "not", "and", "or", "com", "check", "ub"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    At(u32),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Colon,
    Eq,
    And,
    Or,
    Not,
    Arrow,
    Iff,
    In,
    Sub,
    Forall,
    Exists,
    End,
}

/// Parses formula text. Identifiers not bound by a quantifier must appear
/// in `scope`.
pub fn parse(text: &str, scope: &[&str]) -> Result<Formula> {
    let mut p = Parser::new(text)?;
    let mut bound: Vec<String> = scope.iter().map(|s| s.to_string()).collect();
    let f = p.iff(&mut bound)?;
    p.expect(Tok::End, "end of input")?;
    Ok(f)
}

/// Parses a name literal (`{}`, `{child: elem, ..}`, `check(..)`,
/// `ub(elem)` or `@N`) and interns it.
pub fn parse_node_literal(text: &str, store: &mut NodeStore, l: &Logic) -> Result<NodeId> {
    let mut p = Parser::new(text)?;
    let t = p.term(&mut Vec::new())?;
    p.expect(Tok::End, "end of input")?;
    match t {
        Term::Lit(lit) => resolve_lit(store, l, &lit),
        Term::Node(id) if id.index() < store.len() => Ok(id),
        Term::Node(id) => Err(Error::UnknownConstant(id.to_string())),
        Term::Var(v) => Err(Error::UnboundVariable(v)),
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn is_elem_char(c: char) -> bool {
    !c.is_whitespace() && !",:{}()".contains(c)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || "_'.".contains(c)
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = src[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        let two = src.get(i..i + 2);
        let three = src.get(i..i + 3);
        let (tok, len) = if three == Some("<->") {
            (Tok::Iff, 3)
        } else if two == Some("->") {
            (Tok::Arrow, 2)
        } else {
            match c {
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                ':' => (Tok::Colon, 1),
                '=' => (Tok::Eq, 1),
                '&' | '∧' => (Tok::And, c.len_utf8()),
                '|' | '∨' => (Tok::Or, c.len_utf8()),
                '!' | '¬' => (Tok::Not, c.len_utf8()),
                '→' => (Tok::Arrow, c.len_utf8()),
                '↔' => (Tok::Iff, c.len_utf8()),
                '∈' => (Tok::In, c.len_utf8()),
                '⊆' => (Tok::Sub, c.len_utf8()),
                '∀' => (Tok::Forall, c.len_utf8()),
                '∃' => (Tok::Exists, c.len_utf8()),
                '@' => {
                    let digits: String = src[i + 1..].chars().take_while(|c| c.is_ascii_digit()).collect();
                    let n = digits.parse().map_err(|_| Error::Syntax {
                        offset: i,
                        message: "expected node index after '@'".into(),
                    })?;
                    (Tok::At(n), 1 + digits.len())
                }
                c if is_word_char(c) => {
                    let word: String = src[i..].chars().take_while(|&c| is_word_char(c)).collect();
                    let len = word.len();
                    let tok = match word.as_str() {
                        "forall" => Tok::Forall,
                        "exists" => Tok::Exists,
                        "in" => Tok::In,
                        "sub" => Tok::Sub,
                        "not" => Tok::Not,
                        "and" => Tok::And,
                        "or" => Tok::Or,
                        _ => Tok::Ident(word),
                    };
                    (tok, len)
                }
                _ => {
                    return Err(Error::Syntax { offset: i, message: format!("unexpected character {c:?}") })
                }
            }
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Parser<'a>> {
        Ok(Parser { src, toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax { offset: self.offset(), message: message.into() }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn iff(&mut self, scope: &mut Vec<String>) -> Result<Formula> {
        let mut f = self.implies(scope)?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let g = self.implies(scope)?;
            f = Formula::Iff(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn implies(&mut self, scope: &mut Vec<String>) -> Result<Formula> {
        let f = self.or(scope)?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let g = self.implies(scope)?;
            return Ok(Formula::implies(f, g));
        }
        Ok(f)
    }

    fn or(&mut self, scope: &mut Vec<String>) -> Result<Formula> {
        let mut f = self.and(scope)?;
        while *self.peek() == Tok::Or {
            self.bump();
            f = Formula::or(f, self.and(scope)?);
        }
        Ok(f)
    }

    fn and(&mut self, scope: &mut Vec<String>) -> Result<Formula> {
        let mut f = self.unary(scope)?;
        while *self.peek() == Tok::And {
            self.bump();
            f = Formula::and(f, self.unary(scope)?);
        }
        Ok(f)
    }

    fn unary(&mut self, scope: &mut Vec<String>) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary(scope)?))
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.bump() == Tok::Forall;
                let var = match self.bump() {
                    Tok::Ident(v) if !KEYWORDS.contains(&v.as_str()) => v,
                    _ => {
                        self.pos -= 1;
                        return Err(self.err("expected variable after quantifier"));
                    }
                };
                let bound = if *self.peek() == Tok::In {
                    self.bump();
                    Some(self.term(scope)?)
                } else {
                    None
                };
                scope.push(var.clone());
                let body = self.unary(scope);
                scope.pop();
                let body = Box::new(body?);
                Ok(if universal {
                    Formula::Forall { var, bound, body }
                } else {
                    Formula::Exists { var, bound, body }
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.iff(scope)?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(w) if w == "com" && self.toks[self.pos + 1].0 == Tok::LParen => {
                self.bump();
                self.bump();
                let mut ts = vec![self.term(scope)?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    ts.push(self.term(scope)?);
                }
                self.expect(Tok::RParen, "')' closing com")?;
                Ok(Formula::Com(ts))
            }
            _ => {
                let a = self.term(scope)?;
                let op = self.bump();
                let b = self.term(scope);
                match op {
                    Tok::In => Ok(Formula::In(a, b?)),
                    Tok::Eq => Ok(Formula::Eq(a, b?)),
                    Tok::Sub => Ok(Formula::Sub(a, b?)),
                    _ => {
                        self.pos -= 1;
                        Err(self.err("expected 'in', '=' or 'sub'"))
                    }
                }
            }
        }
    }

    fn term(&mut self, scope: &mut Vec<String>) -> Result<Term> {
        let off = self.offset();
        match self.bump() {
            Tok::At(n) => Ok(Term::Node(NodeId::from_raw(n))),
            Tok::Ident(w) if w == "check" || w == "ub" => {
                self.pos -= 1;
                Ok(Term::Lit(self.literal()?))
            }
            Tok::LBrace => {
                self.pos -= 1;
                Ok(Term::Lit(self.literal()?))
            }
            Tok::Ident(v) if !KEYWORDS.contains(&v.as_str()) => {
                if scope.contains(&v) {
                    Ok(Term::Var(v))
                } else {
                    Err(Error::UnboundVariable(v))
                }
            }
            _ => Err(Error::Syntax { offset: off, message: "expected term".into() }),
        }
    }

    fn literal(&mut self) -> Result<NodeLit> {
        match self.bump() {
            Tok::Ident(w) if w == "check" => {
                self.expect(Tok::LParen, "'(' after check")?;
                let (s, end) = hf::parse_prefix(self.src, self.offset())?;
                while self.offset() < end {
                    self.bump();
                }
                self.expect(Tok::RParen, "')' closing check")?;
                Ok(NodeLit::Check(s))
            }
            Tok::Ident(w) if w == "ub" => {
                self.expect(Tok::LParen, "'(' after ub")?;
                let e = self.elem()?;
                self.expect(Tok::RParen, "')' closing ub")?;
                Ok(NodeLit::Ub(e))
            }
            Tok::LBrace => {
                let mut entries = Vec::new();
                if *self.peek() == Tok::RBrace {
                    self.bump();
                    return Ok(NodeLit::Map(entries));
                }
                loop {
                    let child = self.literal()?;
                    self.expect(Tok::Colon, "':' after child")?;
                    entries.push((child, self.elem()?));
                    match self.bump() {
                        Tok::Comma => {}
                        Tok::RBrace => return Ok(NodeLit::Map(entries)),
                        _ => {
                            self.pos -= 1;
                            return Err(self.err("expected ',' or '}'"));
                        }
                    }
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected name literal"))
            }
        }
    }

    /// Element names are raw words; keywords are accepted here.
    fn elem(&mut self) -> Result<String> {
        let start = self.offset();
        let word: String = self.src[start..].chars().take_while(|&c| is_elem_char(c)).collect();
        if word.is_empty() {
            return Err(self.err("expected element name"));
        }
        let end = start + word.len();
        while self.offset() < end {
            self.bump();
        }
        if self.offset() != end {
            return Err(self.err("malformed element name"));
        }
        Ok(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_shapes() {
        let f = parse("forall x in u (x in v)", &["u", "v"]).unwrap();
        assert!(matches!(f, Formula::Forall { bound: Some(_), .. }));
        assert!(f.is_delta0());
        let g = parse("com(u,v) -> u = v", &["u", "v"]).unwrap();
        assert!(matches!(g, Formula::Implies(ref a, _) if matches!(**a, Formula::Com(_))));
        let h = parse("forall x (x in u)", &["u"]).unwrap();
        assert!(!h.is_delta0());
        assert!(parse("u sub v", &["u", "v"]).unwrap().is_delta0());
        let deep = parse(
            "forall a in u (exists b in a (forall c in b (exists d in c (d = d))))",
            &["u"],
        )
        .unwrap();
        assert!(deep.is_delta0());
    }

    #[test]
    fn errors() {
        assert_eq!(parse("x in y", &["x"]), Err(Error::UnboundVariable("y".into())));
        assert!(matches!(parse("x in", &["x"]), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse("(x = x", &["x"]), Err(Error::Syntax { .. })));
        let l = Logic::mo(2).unwrap();
        let mut s = NodeStore::new();
        assert_eq!(
            parse_node_literal("ub(zz)", &mut s, &l),
            Err(Error::UnknownConstant("zz".into()))
        );
        assert!(parse_node_literal("@99", &mut s, &l).is_err());
    }

    #[test]
    fn round_trips() {
        let texts = [
            "x = x",
            "not (x = y) or x in y",
            "x in y and y in z -> x in z",
            "(x sub y and y sub z) -> x sub z",
            "x = y -> y = x <-> (y = x -> x = y)",
            "forall t in x (exists s in y (t = s))",
            "exists t (t in x & !(t = y))",
            "com(x, {{}: a}, check({{}}), ub(a')) -> x = {}",
            "x = @0 -> (x = y -> z = x)",
            "∀t∈x (t ⊆ y) ↔ x ⊆ y",
        ];
        for t in texts {
            let f = parse(t, &["x", "y", "z"]).unwrap();
            let printed = f.to_string();
            assert_eq!(parse(&printed, &["x", "y", "z"]).unwrap(), f, "{t} -> {printed}");
        }
    }

    #[test]
    fn literals_intern() {
        let l = Logic::mo(2).unwrap();
        let mut s = NodeStore::new();
        let u = parse_node_literal("{{}: a}", &mut s, &l).unwrap();
        assert_eq!(parse_node_literal("ub(a)", &mut s, &l).unwrap(), u);
        let c = parse_node_literal("check(2)", &mut s, &l).unwrap();
        assert_eq!(s.literal(&l, c), "{{}: 1, {{}: 1}: 1}");
        assert_eq!(parse_node_literal(&s.literal(&l, c), &mut s, &l).unwrap(), c);
        assert_eq!(parse_node_literal("@0", &mut s, &l).unwrap(), s.empty());
        let v = parse_node_literal("{{}: a', {{}: b}: 0}", &mut s, &l).unwrap();
        assert_eq!(s.entries(v).len(), 2);
    }
}
