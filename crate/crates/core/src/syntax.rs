//! Concrete syntax for `.mdfy` programs.
//!
//! ```text
//! program := seq EOF
//! seq     := stmt (";" stmt)*
//! stmt    := "var" IDENT ":=" stmt "in" stmt | IDENT ":=" stmt | add
//! add     := mul ("+" mul)*
//! mul     := atom ("*" atom)*
//! atom    := INT | IDENT | "skip" | "(" seq ")"
//! ```
//!
//! Whitespace is insignificant and `//` starts a comment running to the end
//! of the line. A `seq` with one element is that element; with two or more it
//! is a `Seq` node, so [`parse`] and [`pretty_print`] are inverse on
//! normal-form trees.

use std::fmt;

use thiserror::Error;

use crate::ast::{Op, Stmt, VarName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourcePos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: SourcePos,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    fn expected(pos: SourcePos, found: &Tok, expected: &[&str]) -> Self {
        let list = expected.join(", ");
        ParseError {
            pos,
            message: format!("expected {list}, found {}", found.describe()),
            expected: expected.iter().map(|e| e.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Var,
    In,
    Skip,
    Walrus,
    Plus,
    Star,
    Semi,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Var => "`var`".into(),
            Tok::In => "`in`".into(),
            Tok::Skip => "`skip`".into(),
            Tok::Walrus => "`:=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::Semi => "`;`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourcePos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);

    let err = |pos: SourcePos, message: String| ParseError {
        pos,
        message,
        expected: Vec::new(),
    };

    while i < chars.len() {
        let c = chars[i];
        let pos = SourcePos { line, column };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            let n = lit
                .parse::<i64>()
                .map_err(|_| err(pos, format!("integer literal `{lit}` out of range")))?;
            Tok::Int(n)
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match word.as_str() {
                "var" => Tok::Var,
                "in" => Tok::In,
                "skip" => Tok::Skip,
                _ => Tok::Ident(word),
            }
        } else {
            i += 1;
            match c {
                ':' if chars.get(i) == Some(&'=') => {
                    i += 1;
                    Tok::Walrus
                }
                '+' => Tok::Plus,
                '*' => Tok::Star,
                ';' => Tok::Semi,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '-' => return Err(err(pos, "`-` is only allowed as an integer literal prefix".into())),
                _ => return Err(err(pos, format!("unexpected character {c:?}"))),
            }
        };
        column += i - start;
        toks.push((tok, pos));
    }
    toks.push((Tok::Eof, SourcePos { line, column }));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, SourcePos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        let i = (self.at + 1).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> SourcePos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        tok
    }

    fn expect(&mut self, want: Tok, label: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::expected(self.pos(), self.peek(), &[label]))
        }
    }

    fn ident(&mut self) -> Result<VarName, ParseError> {
        let pos = self.pos();
        match self.bump() {
            // Keywords never lex as identifiers, and the lexer only produces
            // valid identifier characters.
            Tok::Ident(name) => Ok(VarName::new(name).expect("lexer produced an invalid identifier")),
            other => Err(ParseError::expected(pos, &other, &["identifier"])),
        }
    }

    fn seq(&mut self) -> Result<Stmt, ParseError> {
        let mut stmts = vec![self.stmt()?];
        while *self.peek() == Tok::Semi {
            self.bump();
            stmts.push(self.stmt()?);
        }
        Ok(Stmt::seq(stmts))
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        match (self.peek(), self.peek2()) {
            (Tok::Var, _) => {
                self.bump();
                let bvar = self.ident()?;
                self.expect(Tok::Walrus, "`:=`")?;
                let bval = self.stmt()?;
                self.expect(Tok::In, "`in`")?;
                let body = self.stmt()?;
                Ok(Stmt::Bind(bvar, Box::new(bval), Box::new(body)))
            }
            (Tok::Ident(_), Tok::Walrus) => {
                let avar = self.ident()?;
                self.bump();
                let aval = self.stmt()?;
                Ok(Stmt::Assign(avar, Box::new(aval)))
            }
            _ => self.add(),
        }
    }

    fn add(&mut self) -> Result<Stmt, ParseError> {
        let mut lhs = self.mul()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.mul()?;
            lhs = Stmt::add(lhs, rhs);
        }
        Ok(lhs)
    }

    fn mul(&mut self) -> Result<Stmt, ParseError> {
        let mut lhs = self.atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.atom()?;
            lhs = Stmt::mul(lhs, rhs);
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Stmt, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Stmt::Const(n))
            }
            Tok::Ident(_) => Ok(Stmt::Var(self.ident()?)),
            Tok::Skip => {
                self.bump();
                Ok(Stmt::skip())
            }
            Tok::LParen => {
                self.bump();
                let inner = self.seq()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => Err(ParseError::expected(
                pos,
                &other,
                &["integer", "identifier", "`skip`", "`(`"],
            )),
        }
    }
}

/// Parses a whole program.
pub fn parse(text: &str) -> Result<Stmt, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, at: 0 };
    let stmt = parser.seq()?;
    match parser.peek() {
        Tok::Eof => Ok(stmt),
        other => Err(ParseError::expected(parser.pos(), other, &["`;`", "end of input"])),
    }
}

// Binding strength of each syntactic level, loosest first.
const SEQ: u8 = 0;
const STMT: u8 = 1;
const ADD: u8 = 2;
const MUL: u8 = 3;
const ATOM: u8 = 4;

fn level(s: &Stmt) -> u8 {
    match s {
        Stmt::Const(_) | Stmt::Var(_) => ATOM,
        Stmt::Seq(stmts) if stmts.is_empty() => ATOM,
        Stmt::Seq(_) => SEQ,
        Stmt::Assign(..) | Stmt::Bind(..) => STMT,
        Stmt::BinOp(Op::Add, ..) => ADD,
        Stmt::BinOp(Op::Mul, ..) => MUL,
    }
}

/// Prints with the fewest parentheses the grammar needs.
pub fn pretty_print(s: &Stmt) -> String {
    let mut out = String::new();
    write_at(s, SEQ, &mut out);
    out
}

fn write_at(s: &Stmt, min_level: u8, out: &mut String) {
    if level(s) < min_level {
        out.push('(');
        write_stmt(s, out);
        out.push(')');
    } else {
        write_stmt(s, out);
    }
}

fn write_stmt(s: &Stmt, out: &mut String) {
    match s {
        Stmt::Const(n) => out.push_str(&n.to_string()),
        Stmt::Var(x) => out.push_str(x.as_str()),
        Stmt::BinOp(op, lhs, rhs) => {
            let lvl = level(s);
            write_at(lhs, lvl, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_at(rhs, lvl + 1, out);
        }
        Stmt::Assign(avar, aval) => {
            out.push_str(avar.as_str());
            out.push_str(" := ");
            write_at(aval, STMT, out);
        }
        Stmt::Bind(bvar, bval, body) => {
            out.push_str("var ");
            out.push_str(bvar.as_str());
            out.push_str(" := ");
            write_at(bval, STMT, out);
            out.push_str(" in ");
            write_at(body, STMT, out);
        }
        Stmt::Seq(stmts) if stmts.is_empty() => out.push_str("skip"),
        Stmt::Seq(stmts) => {
            for (i, stmt) in stmts.iter().enumerate() {
                if i > 0 {
                    out.push_str("; ");
                }
                write_at(stmt, STMT, out);
            }
        }
    }
}
