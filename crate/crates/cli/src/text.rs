//! Text formats: formulas, terms, points, CSP instances and One-In-Three
//! instances.
//!
//! ```text
//! formula := 'true' | clause ('&' clause)*
//! clause  := '(' ')' | '(' literal ('|' literal)* ')'
//! literal := term rel '0'            rel := '<=' | '<' | '=' | '!='
//! term    := ['-'] monomial (('+' | '-') monomial)*
//! monomial:= coeff '*' ident | coeff | ident
//! coeff   := int ['/' posint]
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::fmt::{self, Write as _};

use dlrkit::formula::{Clause, CnfFormula, Formula, Literal, Point, Relation};
use dlrkit::reductions::{Atom, CspInstance, OneInThreeInstance, UserRelation};
use dlrkit::{LinearTerm, Rational, VarPool};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: expected {expected}, found {found}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Slash,
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
    Bar,
    Amp,
    Comma,
    Define,
    Rel(Relation),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(s) => write!(f, "`{s}`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Define => f.write_str("`:=`"),
            Tok::Rel(r) => write!(f, "`{}`", r.symbol()),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Lexer {
    /// `line` and `column` give the position of the first character.
    fn new(text: &str, line: usize, column: usize) -> Result<Self, SyntaxError> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let (mut ln, mut col) = (line, column);
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (start_ln, start_col) = (ln, col);
            let mut take = 1;
            let tok = match c {
                '\n' => {
                    ln += 1;
                    col = 1;
                    i += 1;
                    continue;
                }
                c if c.is_whitespace() => None,
                '#' => {
                    while i + take < chars.len() && chars[i + take] != '\n' {
                        take += 1;
                    }
                    None
                }
                '/' => Some(Tok::Slash),
                '*' => Some(Tok::Star),
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '|' => Some(Tok::Bar),
                '&' => Some(Tok::Amp),
                ',' => Some(Tok::Comma),
                '=' => Some(Tok::Rel(Relation::EqZero)),
                '<' if chars.get(i + 1) == Some(&'=') => {
                    take = 2;
                    Some(Tok::Rel(Relation::LeqZero))
                }
                '<' => Some(Tok::Rel(Relation::LtZero)),
                '!' if chars.get(i + 1) == Some(&'=') => {
                    take = 2;
                    Some(Tok::Rel(Relation::NeqZero))
                }
                ':' if chars.get(i + 1) == Some(&'=') => {
                    take = 2;
                    Some(Tok::Define)
                }
                c if c.is_ascii_digit() => {
                    while chars.get(i + take).is_some_and(|d| d.is_ascii_digit()) {
                        take += 1;
                    }
                    Some(Tok::Num(chars[i..i + take].iter().collect()))
                }
                c if c.is_alphabetic() || c == '_' => {
                    while chars.get(i + take).is_some_and(|d| d.is_alphanumeric() || *d == '_') {
                        take += 1;
                    }
                    Some(Tok::Ident(chars[i..i + take].iter().collect()))
                }
                other => {
                    return Err(SyntaxError {
                        line: start_ln,
                        column: start_col,
                        expected: "a token".into(),
                        found: format!("`{other}`"),
                    })
                }
            };
            if let Some(t) = tok {
                toks.push((t, start_ln, start_col));
            }
            i += take;
            col += take;
        }
        toks.push((Tok::End, ln, col));
        Ok(Lexer { toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> SyntaxError {
        let (t, line, column) = &self.toks[self.pos];
        SyntaxError {
            line: *line,
            column: *column,
            expected: expected.into(),
            found: t.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn end(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => Err(self.error("end of input")),
        }
    }
}

struct Parser<'p> {
    lex: Lexer,
    pool: &'p mut VarPool,
}

impl Parser<'_> {
    fn formula(&mut self) -> Result<CnfFormula, SyntaxError> {
        if *self.lex.peek() == Tok::Ident("true".into()) {
            self.lex.next();
            return Ok(CnfFormula::truth());
        }
        let mut clauses = vec![self.clause()?];
        while *self.lex.peek() == Tok::Amp {
            self.lex.next();
            clauses.push(self.clause()?);
        }
        Ok(CnfFormula(clauses))
    }

    fn clause(&mut self) -> Result<Clause, SyntaxError> {
        self.lex.expect(Tok::LParen, "`(` opening a clause")?;
        let mut lits = Vec::new();
        if *self.lex.peek() != Tok::RParen {
            lits.push(self.literal()?);
            while *self.lex.peek() == Tok::Bar {
                self.lex.next();
                lits.push(self.literal()?);
            }
        }
        self.lex.expect(Tok::RParen, "`|` or `)`")?;
        Ok(Clause(lits))
    }

    fn literal(&mut self) -> Result<Literal, SyntaxError> {
        let term = self.term()?;
        let rel = match self.lex.peek() {
            Tok::Rel(r) => *r,
            _ => return Err(self.lex.error("a relation (`<=`, `<`, `=`, `!=`)")),
        };
        self.lex.next();
        match self.lex.peek() {
            Tok::Num(n) if n.bytes().all(|b| b == b'0') => {
                self.lex.next();
            }
            _ => return Err(self.lex.error("`0` on the right-hand side")),
        }
        Ok(Literal::new(term, rel))
    }

    fn term(&mut self) -> Result<LinearTerm, SyntaxError> {
        let mut t = LinearTerm::zero();
        let mut negative = false;
        if *self.lex.peek() == Tok::Minus {
            self.lex.next();
            negative = true;
        }
        loop {
            let (c, v) = self.monomial()?;
            let c = if negative { -c } else { c };
            match v {
                Some(name) => {
                    let var = self.pool.var(&name);
                    t.add_coeff(&var, c);
                }
                None => t.add_constant(&c),
            }
            match self.lex.peek() {
                Tok::Plus => negative = false,
                Tok::Minus => negative = true,
                _ => return Ok(t),
            }
            self.lex.next();
        }
    }

    fn monomial(&mut self) -> Result<(Rational, Option<String>), SyntaxError> {
        let mut sign = Rational::one();
        while *self.lex.peek() == Tok::Minus {
            self.lex.next();
            sign = -sign;
        }
        match self.lex.peek().clone() {
            Tok::Ident(name) if name != "true" => {
                self.lex.next();
                Ok((sign, Some(name)))
            }
            Tok::Num(_) => {
                let c = self.coeff()? * sign;
                if *self.lex.peek() == Tok::Star {
                    self.lex.next();
                    match self.lex.next() {
                        Tok::Ident(name) if name != "true" => Ok((c, Some(name))),
                        _ => {
                            self.lex.pos -= 1;
                            Err(self.lex.error("a variable name after `*`"))
                        }
                    }
                } else {
                    Ok((c, None))
                }
            }
            _ => Err(self.lex.error("a coefficient or variable")),
        }
    }

    fn coeff(&mut self) -> Result<Rational, SyntaxError> {
        let Tok::Num(n) = self.lex.next() else {
            unreachable!("checked by the caller")
        };
        let mut text = n;
        if *self.lex.peek() == Tok::Slash {
            self.lex.next();
            match self.lex.peek().clone() {
                Tok::Num(d) if !d.bytes().all(|b| b == b'0') => {
                    self.lex.next();
                    text = format!("{text}/{d}");
                }
                _ => return Err(self.lex.error("a positive denominator")),
            }
        }
        Ok(dlrkit::rational::parse_rational(&text).expect("digits only"))
    }

    fn signed_rational(&mut self) -> Result<Rational, SyntaxError> {
        let mut sign = Rational::one();
        while *self.lex.peek() == Tok::Minus {
            self.lex.next();
            sign = -sign;
        }
        match self.lex.peek() {
            Tok::Num(_) => Ok(self.coeff()? * sign),
            _ => Err(self.lex.error("a rational number")),
        }
    }

    fn ident(&mut self, expected: &str) -> Result<String, SyntaxError> {
        match self.lex.peek().clone() {
            Tok::Ident(name) => {
                self.lex.next();
                Ok(name)
            }
            _ => Err(self.lex.error(expected)),
        }
    }
}

fn parser<'p>(text: &str, pool: &'p mut VarPool) -> Result<Parser<'p>, SyntaxError> {
    Ok(Parser {
        lex: Lexer::new(text, 1, 1)?,
        pool,
    })
}

pub fn parse_formula(text: &str, pool: &mut VarPool) -> Result<CnfFormula, SyntaxError> {
    let mut p = parser(text, pool)?;
    let f = p.formula()?;
    p.lex.end()?;
    Ok(f)
}

pub fn parse_term(text: &str, pool: &mut VarPool) -> Result<LinearTerm, SyntaxError> {
    let mut p = parser(text, pool)?;
    let t = p.term()?;
    p.lex.end()?;
    Ok(t)
}

pub fn parse_rational(text: &str) -> Result<Rational, SyntaxError> {
    let mut pool = VarPool::new();
    let mut p = parser(text, &mut pool)?;
    let r = p.signed_rational()?;
    p.lex.end()?;
    Ok(r)
}

/// `x=1/2,y=-3` (commas optional).
pub fn parse_point(text: &str, pool: &mut VarPool) -> Result<Point, SyntaxError> {
    let mut p = parser(text, pool)?;
    let mut point = Point::new();
    while *p.lex.peek() != Tok::End {
        let name = p.ident("a variable name")?;
        p.lex.expect(Tok::Rel(Relation::EqZero), "`=`")?;
        let value = p.signed_rational()?;
        point.insert(p.pool.var(&name), value);
        if *p.lex.peek() == Tok::Comma {
            p.lex.next();
        }
    }
    Ok(point)
}

/// Whether `text` looks like a CSP instance rather than a formula.
pub fn is_csp_text(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.split_whitespace().next())
        .is_some_and(|w| matches!(w, "plus" | "one" | "leq" | "rel" | "def"))
}

/// One atom per line; an optional `def NAME p1 p2 ... := formula` line
/// declares the user relation.
pub fn parse_csp(text: &str, pool: &mut VarPool) -> Result<CspInstance, SyntaxError> {
    let mut atoms = Vec::new();
    let mut relation: Option<(UserRelation, usize)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut p = Parser {
            lex: Lexer::new(raw, line_no, 1)?,
            pool: &mut *pool,
        };
        if *p.lex.peek() == Tok::End {
            continue;
        }
        let head = p.ident("`plus`, `one`, `leq`, `rel` or `def`")?;
        let mut args = Vec::new();
        let atom = match head.as_str() {
            "def" => {
                let name = p.ident("a relation name")?;
                while let Tok::Ident(_) = p.lex.peek() {
                    let a = p.ident("a parameter")?;
                    args.push(p.pool.var(&a));
                }
                p.lex.expect(Tok::Define, "`:=`")?;
                let f = p.formula()?;
                p.lex.end()?;
                if relation.is_some() {
                    return Err(SyntaxError {
                        line: line_no,
                        column: 1,
                        expected: "a single relation definition".into(),
                        found: "a second `def`".into(),
                    });
                }
                let r = UserRelation::new(name, args, Formula::Cnf(f)).map_err(|e| SyntaxError {
                    line: line_no,
                    column: 1,
                    expected: "a relation over its parameters".into(),
                    found: e.to_string(),
                })?;
                relation = Some((r, line_no));
                continue;
            }
            "rel" => {
                let name = p.ident("a relation name")?;
                match &relation {
                    Some((r, _)) if r.name == name => {}
                    _ => {
                        return Err(SyntaxError {
                            line: line_no,
                            column: 5,
                            expected: "a relation declared by an earlier `def`".into(),
                            found: format!("`{name}`"),
                        })
                    }
                }
                while let Tok::Ident(_) = p.lex.peek() {
                    let a = p.ident("an argument")?;
                    args.push(p.pool.var(&a));
                }
                Atom::Rel(args)
            }
            "plus" | "one" | "leq" => {
                let arity = match head.as_str() {
                    "plus" => 3,
                    "one" => 1,
                    _ => 2,
                };
                for _ in 0..arity {
                    let a = p.ident("a variable name")?;
                    args.push(p.pool.var(&a));
                }
                match head.as_str() {
                    "plus" => Atom::Plus(args[0].clone(), args[1].clone(), args[2].clone()),
                    "one" => Atom::One(args[0].clone()),
                    _ => Atom::Leq(args[0].clone(), args[1].clone()),
                }
            }
            other => {
                return Err(SyntaxError {
                    line: line_no,
                    column: 1,
                    expected: "`plus`, `one`, `leq`, `rel` or `def`".into(),
                    found: format!("`{other}`"),
                })
            }
        };
        p.lex.end()?;
        atoms.push(atom);
    }
    CspInstance::new(atoms, relation.map(|(r, _)| r)).map_err(|e| SyntaxError {
        line: 1,
        column: 1,
        expected: "a well-formed instance".into(),
        found: e.to_string(),
    })
}

/// Whitespace-separated triples, one clause per line.
pub fn parse_one_in_three(text: &str) -> Result<OneInThreeInstance, SyntaxError> {
    let mut clauses = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        if words.len() != 3 {
            let column = raw
                .find(words.get(3).copied().unwrap_or(words[words.len() - 1]))
                .unwrap_or(0)
                + 1;
            return Err(SyntaxError {
                line: i + 1,
                column,
                expected: "exactly three variable names".into(),
                found: format!("{} names", words.len()),
            });
        }
        for w in &words {
            if !w.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(SyntaxError {
                    line: i + 1,
                    column: raw.find(w).unwrap_or(0) + 1,
                    expected: "a variable name".into(),
                    found: format!("`{w}`"),
                });
            }
        }
        clauses.push([words[0], words[1], words[2]]);
    }
    Ok(OneInThreeInstance::new(clauses))
}

fn write_coeff(out: &mut String, c: &Rational) {
    if c.is_integer() {
        write!(out, "{}", c.numer()).expect("string write");
    } else {
        write!(out, "{}/{}", c.numer(), c.denom()).expect("string write");
    }
}

pub fn print_term(t: &LinearTerm) -> String {
    let mut out = String::new();
    let mut first = true;
    let mut push = |out: &mut String, c: &Rational, var: Option<&str>| {
        if first {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        write_coeff(out, &c.abs());
        if let Some(v) = var {
            out.push('*');
            out.push_str(v);
        }
        first = false;
    };
    for (v, c) in t.coeffs() {
        push(&mut out, c, Some(v.name()));
    }
    let k = t.constant_part();
    if !k.is_zero() || out.is_empty() {
        push(&mut out, k, None);
    }
    out
}

pub fn print_literal(l: &Literal) -> String {
    format!("{} {} 0", print_term(&l.term), l.rel.symbol())
}

pub fn print_formula(f: &CnfFormula) -> String {
    if f.0.is_empty() {
        return "true".into();
    }
    f.0.iter()
        .map(|c| {
            let lits: Vec<String> = c.0.iter().map(print_literal).collect();
            format!("({})", lits.join(" | "))
        })
        .collect::<Vec<_>>()
        .join(" & ")
}

pub fn print_csp(csp: &CspInstance) -> Result<String, dlrkit::Error> {
    let mut out = String::new();
    if let Some(r) = &csp.relation {
        let cnf = match &r.formula {
            Formula::Cnf(c) => c.clone(),
            Formula::Dnf(d) => dlrkit::qe::to_cnf(d, &dlrkit::Limits::default())?,
        };
        let params: Vec<&str> = r.params.iter().map(|v| v.name()).collect();
        writeln!(out, "def {} {} := {}", r.name, params.join(" "), print_formula(&cnf)).expect("string write");
    }
    for a in &csp.constraints {
        match (a, &csp.relation) {
            (Atom::Rel(args), Some(r)) => {
                let names: Vec<&str> = args.iter().map(|v| v.name()).collect();
                writeln!(out, "rel {} {}", r.name, names.join(" ")).expect("string write");
            }
            _ => writeln!(out, "{a}").expect("string write"),
        }
    }
    Ok(out)
}
