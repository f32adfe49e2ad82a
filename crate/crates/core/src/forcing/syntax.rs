//! Formula syntax: AST, parser, printer and sort checking.
//!
//! ```text
//! formula := "false" | atom | "(" formula ")" | formula "&" formula
//!          | formula "|" formula | formula "->" formula
//!          | ("exists" | "forall") ident ":" sort "." formula
//! sort    := "Nat" | "FinSeq" | "Seq2" | "SeqN"
//! term    := ident | numeral | "pi" | "<" [numeral {"," numeral}] ">" | term "+" term
//! ```
//! Quantifiers bind weakest, then `->` (right associative), `|`, `&`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sort {
    Nat,
    FinSeq,
    Seq2,
    SeqN,
}

impl Sort {
    pub fn is_section(self) -> bool {
        matches!(self, Sort::Seq2 | Sort::SeqN)
    }

    fn compatible(self, other: Sort) -> bool {
        self == other || (self.is_section() && other.is_section())
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Nat => "Nat",
            Sort::FinSeq => "FinSeq",
            Sort::Seq2 => "Seq2",
            Sort::SeqN => "SeqN",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Num(u32),
    Seq(Vec<u32>),
    Add(Box<Term>, Box<Term>),
    /// The generic sequence of the double.
    Pi,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    Bot,
    Atom { name: String, args: Vec<Term> },
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Exists { var: String, sort: Sort, body: Box<Formula> },
    Forall { var: String, sort: Sort, body: Box<Formula> },
}

impl Formula {
    pub fn atom(name: &str, args: Vec<Term>) -> Formula {
        Formula::Atom {
            name: name.to_string(),
            args,
        }
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn exists(var: &str, sort: Sort, body: Formula) -> Formula {
        Formula::Exists {
            var: var.to_string(),
            sort,
            body: Box::new(body),
        }
    }

    pub fn forall(var: &str, sort: Sort, body: Formula) -> Formula {
        Formula::Forall {
            var: var.to_string(),
            sort,
            body: Box::new(body),
        }
    }

    /// Number of nested connective and quantifier layers; atoms and `false` have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Bot | Formula::Atom { .. } => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Exists { body, .. } | Formula::Forall { body, .. } => 1 + body.depth(),
        }
    }

    /// Whether `pi` or a section-sorted quantifier occurs.
    pub fn mentions_sections(&self) -> bool {
        fn term(t: &Term) -> bool {
            match t {
                Term::Pi => true,
                Term::Add(a, b) => term(a) || term(b),
                _ => false,
            }
        }
        match self {
            Formula::Bot => false,
            Formula::Atom { args, .. } => args.iter().any(term),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.mentions_sections() || b.mentions_sections()
            }
            Formula::Exists { sort, body, .. } | Formula::Forall { sort, body, .. } => {
                sort.is_section() || body.mentions_sections()
            }
        }
    }
}

/// Argument sorts of the atoms a formula may use beyond the built-in ones.
pub type Signature = BTreeMap<String, Vec<Sort>>;

/// Built-in atoms: `Eq`, `Leq`, `Prefix(a, u)` (`a ∈ u`), `App(a, n, m)` (`a(n) = m`).
pub fn sort_check(phi: &Formula, sig: &Signature) -> Result<()> {
    sort_check_with(phi, sig, &[])
}

/// As [`sort_check`], with `free` variables already in scope.
pub fn sort_check_with(phi: &Formula, sig: &Signature, free: &[(String, Sort)]) -> Result<()> {
    let mut scope = free.to_vec();
    check(phi, sig, &mut scope)
}

fn term_sort(t: &Term, scope: &[(String, Sort)]) -> Result<Sort> {
    match t {
        Term::Var(v) => scope
            .iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|(_, s)| *s)
            .ok_or_else(|| Error::Sort(format!("free variable {v}"))),
        Term::Num(_) => Ok(Sort::Nat),
        Term::Seq(_) => Ok(Sort::FinSeq),
        Term::Pi => Ok(Sort::SeqN),
        Term::Add(a, b) => {
            for x in [a, b] {
                let s = term_sort(x, scope)?;
                if s != Sort::Nat {
                    return Err(Error::Sort(format!("{x} is {s}, expected Nat in a sum")));
                }
            }
            Ok(Sort::Nat)
        }
    }
}

fn check(phi: &Formula, sig: &Signature, scope: &mut Vec<(String, Sort)>) -> Result<()> {
    match phi {
        Formula::Bot => Ok(()),
        Formula::Atom { name, args } => {
            let sorts = args
                .iter()
                .map(|t| term_sort(t, scope))
                .collect::<Result<Vec<_>>>()?;
            let ok = match name.as_str() {
                "Eq" => sorts.len() == 2 && sorts[0].compatible(sorts[1]),
                "Leq" => {
                    sorts.len() == 2
                        && sorts[0] == sorts[1]
                        && matches!(sorts[0], Sort::Nat | Sort::FinSeq)
                }
                "Prefix" => sorts.len() == 2 && sorts[0].is_section() && sorts[1] == Sort::FinSeq,
                "App" => {
                    sorts.len() == 3
                        && sorts[0].is_section()
                        && sorts[1] == Sort::Nat
                        && sorts[2] == Sort::Nat
                }
                other => match sig.get(other) {
                    Some(want) => {
                        want.len() == sorts.len()
                            && want.iter().zip(&sorts).all(|(w, s)| w.compatible(*s))
                    }
                    None => return Err(Error::Sort(format!("unknown atom {other}"))),
                },
            };
            if ok {
                Ok(())
            } else {
                let shown: Vec<String> = sorts.iter().map(|s| s.to_string()).collect();
                Err(Error::Sort(format!(
                    "{name} does not accept ({})",
                    shown.join(", ")
                )))
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            check(a, sig, scope)?;
            check(b, sig, scope)
        }
        Formula::Exists { var, sort, body } | Formula::Forall { var, sort, body } => {
            scope.push((var.clone(), *sort));
            let r = check(body, sig, scope);
            scope.pop();
            r
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Num(n) => write!(f, "{n}"),
            Term::Pi => f.write_str("pi"),
            Term::Seq(s) => {
                let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                write!(f, "<{}>", parts.join(","))
            }
            Term::Add(a, b) => match **b {
                Term::Add(..) => write!(f, "{a} + ({b})"),
                _ => write!(f, "{a} + {b}"),
            },
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Bot => f.write_str("false"),
            Formula::Atom { name, args } => {
                let parts: Vec<String> = args.iter().map(|t| t.to_string()).collect();
                write!(f, "{name}({})", parts.join(", "))
            }
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Imp(a, b) => write!(f, "({a} -> {b})"),
            Formula::Exists { var, sort, body } => write!(f, "(exists {var}:{sort}. {body})"),
            Formula::Forall { var, sort, body } => write!(f, "(forall {var}:{sort}. {body})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u32),
    Sym(&'static str),
}

struct Lexed {
    toks: Vec<(usize, Tok)>,
    end: usize,
}

fn lex(text: &str) -> Result<Lexed> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<u32>().map_err(|_| Error::Syntax {
                pos: start,
                msg: format!("numeral {s} out of range"),
            })?;
            toks.push((start, Tok::Num(n)));
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            toks.push((i, Tok::Sym("->")));
            i += 2;
        } else {
            let sym = match c {
                '(' => "(",
                ')' => ")",
                ',' => ",",
                '.' => ".",
                ':' => ":",
                '&' => "&",
                '|' => "|",
                '<' => "<",
                '>' => ">",
                '+' => "+",
                _ => {
                    return Err(Error::Syntax {
                        pos: i,
                        msg: format!("unexpected character {c:?}"),
                    })
                }
            };
            toks.push((i, Tok::Sym(sym)));
            i += 1;
        }
    }
    Ok(Lexed {
        toks,
        end: chars.len(),
    })
}

struct Parser {
    lexed: Lexed,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.lexed.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.lexed
            .toks
            .get(self.at)
            .map(|(p, _)| *p)
            .unwrap_or(self.lexed.end)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.fail(format!("expected {sym:?}"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.fail("expected an identifier"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        if let Some(q) = self.quantifier()? {
            return Ok(q);
        }
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn quantifier(&mut self) -> Result<Option<Formula>> {
        let universal = match self.peek() {
            Some(Tok::Ident(k)) if k == "forall" => true,
            Some(Tok::Ident(k)) if k == "exists" => false,
            _ => return Ok(None),
        };
        self.at += 1;
        let var = self.ident()?;
        if is_keyword(&var) {
            self.at -= 1;
            return self.fail(format!("{var} cannot be bound"));
        }
        self.expect(":")?;
        let sort = match self.ident()?.as_str() {
            "Nat" => Sort::Nat,
            "FinSeq" => Sort::FinSeq,
            "Seq2" => Sort::Seq2,
            "SeqN" => Sort::SeqN,
            other => {
                self.at -= 1;
                return self.fail(format!("unknown sort {other}"));
            }
        };
        self.expect(".")?;
        let body = self.formula()?;
        Ok(Some(if universal {
            Formula::forall(&var, sort, body)
        } else {
            Formula::exists(&var, sort, body)
        }))
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat("|") {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat("&") {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if let Some(q) = self.quantifier()? {
            return Ok(q);
        }
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        match self.peek() {
            Some(Tok::Ident(k)) if k == "false" => {
                self.at += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::Ident(k)) if is_keyword(k) => self.fail(format!("unexpected {k}")),
            Some(Tok::Ident(_)) => {
                let name = self.ident()?;
                self.expect("(")?;
                let mut args = Vec::new();
                if !self.eat(")") {
                    loop {
                        args.push(self.term()?);
                        if self.eat(")") {
                            break;
                        }
                        self.expect(",")?;
                    }
                }
                Ok(Formula::Atom { name, args })
            }
            None => self.fail("unexpected end of input"),
            Some(_) => self.fail("expected a formula"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut lhs = self.primary_term()?;
        while self.eat("+") {
            let rhs = self.primary_term()?;
            lhs = Term::Add(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn primary_term(&mut self) -> Result<Term> {
        if self.eat("(") {
            let t = self.term()?;
            self.expect(")")?;
            return Ok(t);
        }
        if self.eat("<") {
            let mut xs = Vec::new();
            if !self.eat(">") {
                loop {
                    match self.peek() {
                        Some(Tok::Num(n)) => {
                            xs.push(*n);
                            self.at += 1;
                        }
                        _ => return self.fail("expected a numeral"),
                    }
                    if self.eat(">") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            return Ok(Term::Seq(xs));
        }
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.at += 1;
                Ok(Term::Num(n))
            }
            Some(Tok::Ident(k)) if k == "pi" => {
                self.at += 1;
                Ok(Term::Pi)
            }
            Some(Tok::Ident(k)) if is_keyword(k) => self.fail(format!("unexpected {k}")),
            Some(Tok::Ident(_)) => Ok(Term::Var(self.ident()?)),
            None => self.fail("unexpected end of input"),
            Some(_) => self.fail("expected a term"),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "false" | "exists" | "forall" | "pi")
}

/// Parses a formula; positions in errors count characters from the start.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        lexed: lex(text)?,
        at: 0,
    };
    let f = p.formula()?;
    if p.at < p.lexed.toks.len() {
        return p.fail("trailing input");
    }
    Ok(f)
}

/// Parses and sort-checks against `sig`.
pub fn parse_checked(text: &str, sig: &Signature) -> Result<Formula> {
    let f = parse_formula(text)?;
    sort_check(&f, sig)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bar_sig() -> Signature {
        [("InBar".to_string(), vec![Sort::FinSeq])].into_iter().collect()
    }

    #[test]
    fn exists_node() {
        let f = parse_checked("exists n:Nat. Eq(n, 2)", &Signature::new()).unwrap();
        assert!(matches!(f, Formula::Exists { sort: Sort::Nat, .. }));
    }

    #[test]
    fn fan_premise() {
        let f = parse_checked(
            "forall a:Seq2. exists u:FinSeq. Prefix(a,u) & InBar(u)",
            &bar_sig(),
        )
        .unwrap();
        let want = Formula::forall(
            "a",
            Sort::Seq2,
            Formula::exists(
                "u",
                Sort::FinSeq,
                Formula::and(
                    Formula::atom("Prefix", vec![Term::Var("a".into()), Term::Var("u".into())]),
                    Formula::atom("InBar", vec![Term::Var("u".into())]),
                ),
            ),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn dangling_arrow() {
        match parse_formula("false ->") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let f = parse_formula("false | false & false -> false -> false").unwrap();
        let bot = || Formula::Bot;
        assert_eq!(
            f,
            Formula::imp(
                Formula::or(bot(), Formula::and(bot(), bot())),
                Formula::imp(bot(), bot())
            )
        );
    }

    #[test]
    fn sort_errors() {
        let s = Signature::new();
        assert!(matches!(
            parse_checked("Eq(n, 2)", &s),
            Err(Error::Sort(_))
        ));
        assert!(matches!(
            parse_checked("exists u:FinSeq. Leq(u, 2)", &s),
            Err(Error::Sort(_))
        ));
        assert!(matches!(parse_checked("InBar(<0>)", &s), Err(Error::Sort(_))));
        assert!(parse_checked("App(pi, 0 + 1, 1)", &s).is_ok());
    }

    #[test]
    fn printer_round_trips() {
        for text in [
            "exists n:Nat. Eq(n + 0, 2)",
            "forall a:SeqN. Prefix(a, <0,1>) -> App(a, 1, 1) | false",
            "Eq(1 + (2 + 3), 6)",
        ] {
            let f = parse_formula(text).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }
}
