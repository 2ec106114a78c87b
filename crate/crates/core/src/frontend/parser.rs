use std::collections::HashSet;

use super::kb::{DefaultDecl, KnowledgeBase, NumericRule};
use super::lexer::{tokenize, Spanned, Tok};
use super::{ParseError, ParseErrorKind, KEYWORDS};
use crate::logic::{Atom, Formula, RESERVED_PREFIX};

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser { toks: tokenize(src)?, pos: 0 })
    }

    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, at: &Spanned, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        ParseError::new(at.line, at.column, kind, message, at.tok.text())
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let at = self.peek();
        self.error_at(at, ParseErrorKind::Syntax, format!("expected {expected}, found {}", at.tok.describe()))
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<Spanned> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn at_keyword(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == word)
    }

    fn keyword(&mut self, word: &str) -> PResult<Spanned> {
        if self.at_keyword(word) {
            Ok(self.next())
        } else {
            Err(self.unexpected(&format!("`{word}`")))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.peek().tok == Tok::Arrow {
            self.next();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut f = self.conjunction()?;
        while self.peek().tok == Tok::Pipe {
            self.next();
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut f = self.unary()?;
        while self.peek().tok == Tok::Amp {
            self.next();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.peek().tok == Tok::Bang {
            self.next();
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Formula> {
        let at = self.peek().clone();
        match &at.tok {
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(s) if s == "true" => {
                self.next();
                Ok(Formula::Top)
            }
            Tok::Ident(s) if s == "false" => {
                self.next();
                Ok(Formula::Bottom)
            }
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => {
                Err(self.error_at(&at, ParseErrorKind::Syntax, format!("expected a formula, found keyword `{s}`")))
            }
            Tok::Ident(s) if s.starts_with(RESERVED_PREFIX) => Err(self.error_at(
                &at,
                ParseErrorKind::ReservedAtom,
                format!("atom names starting with `{RESERVED_PREFIX}` are reserved"),
            )),
            Tok::Ident(s) => {
                let atom = Atom::new(s).expect("lexer only yields identifiers");
                self.next();
                Ok(Formula::Var(atom))
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn name(&mut self) -> PResult<(String, Spanned)> {
        let at = self.peek().clone();
        match &at.tok {
            Tok::Ident(s) => {
                self.next();
                Ok((s.clone(), at.clone()))
            }
            _ => Err(self.unexpected("a rule name")),
        }
    }

    fn statement(&mut self, kb: &mut KnowledgeBase, names: &mut HashSet<String>) -> PResult<()> {
        let start = self.peek().clone();
        let Tok::Ident(word) = &start.tok else {
            return Err(self.unexpected("`fact`, `rule` or `default`"));
        };
        match word.as_str() {
            "fact" => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::Dot, "`.` ending the fact")?;
                kb.facts.push(f);
            }
            "rule" => {
                self.next();
                let (name, name_at) = self.name()?;
                self.expect(Tok::Colon, "`:` after the rule name")?;
                self.keyword("if")?;
                let antecedent = self.formula()?;
                self.keyword("then")?;
                let consequent = self.formula()?;
                self.keyword("weight")?;
                let weight = self.weight()?;
                let mut contraposition = true;
                if self.at_keyword("contra") {
                    self.next();
                } else if self.at_keyword("nocontra") {
                    self.next();
                    contraposition = false;
                }
                let mut priority = 0;
                if self.at_keyword("priority") {
                    self.next();
                    priority = self.priority()?;
                }
                self.expect(Tok::Dot, "`contra`, `nocontra`, `priority` or `.`")?;
                self.claim(names, &name, &name_at)?;
                kb.rules.push(NumericRule { name, antecedent, consequent, weight, contraposition, priority });
            }
            "default" => {
                self.next();
                let (name, name_at) = self.name()?;
                self.expect(Tok::Colon, "`:` after the default name")?;
                let prerequisite = if self.peek().tok == Tok::Colon { Formula::Top } else { self.formula()? };
                self.expect(Tok::Colon, "`:` before the justification")?;
                let justification = self.formula()?;
                self.expect(Tok::Slash, "`/` before the consequent")?;
                let consequent = self.formula()?;
                self.expect(Tok::Dot, "`.` ending the default")?;
                self.claim(names, &name, &name_at)?;
                kb.defaults.push(DefaultDecl { name, prerequisite, justification, consequent });
            }
            _ => return Err(self.unexpected("`fact`, `rule` or `default`")),
        }
        Ok(())
    }

    fn claim(&self, names: &mut HashSet<String>, name: &str, at: &Spanned) -> PResult<()> {
        if names.insert(name.to_owned()) {
            Ok(())
        } else {
            Err(self.error_at(at, ParseErrorKind::DuplicateName, format!("rule name `{name}` is already used")))
        }
    }

    fn weight(&mut self) -> PResult<f64> {
        let at = self.peek().clone();
        let Tok::Number(text) = &at.tok else {
            return Err(self.unexpected("a weight between 0 and 1"));
        };
        let w: f64 = text.parse().map_err(|_| self.unexpected("a weight between 0 and 1"))?;
        if !(0.0..=1.0).contains(&w) {
            return Err(self.error_at(
                &at,
                ParseErrorKind::WeightOutOfRange,
                format!("weight {text} is outside [0, 1]"),
            ));
        }
        self.next();
        Ok(w)
    }

    fn priority(&mut self) -> PResult<u32> {
        let at = self.peek().clone();
        match &at.tok {
            Tok::Number(text) if !text.contains('.') => {
                let p = text
                    .parse()
                    .map_err(|_| self.error_at(&at, ParseErrorKind::Syntax, format!("priority {text} is too large")))?;
                self.next();
                Ok(p)
            }
            _ => Err(self.unexpected("a non-negative integer priority")),
        }
    }
}

/// Parses a single formula; the whole input must be consumed.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(f)
}

/// Parses and validates a knowledge base.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    let mut p = Parser::new(text)?;
    let mut kb = KnowledgeBase::default();
    let mut names = HashSet::new();
    while p.peek().tok != Tok::Eof {
        p.statement(&mut kb, &mut names)?;
    }
    Ok(kb)
}
