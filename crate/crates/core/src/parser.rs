//! Text front end: a hand-written lexer and recursive-descent parser for the
//! ground dialect, the canonical renderer, and the ASP-Core-2 emitter.
//!
//! ```text
//! program    := { rule } ;
//! rule       := [ head ] ":-" [ body ] "." | head "." ;
//! head       := atom { "|" atom } ;
//! body       := literal { "," literal } ;
//! literal    := { "not" } atom | aggregate ;
//! aggregate  := ("count"|"sum"|"avg"|"min"|"max") "{" [ elems ] "}" cmp int
//!             | ("odd"|"even") "{" [ elems ] "}" ;
//! elem       := [ int ":" ] atom ;
//! ```
//!
//! `%` starts a comment that runs to the end of the line.

use std::fmt::Write as _;

use thiserror::Error;

use crate::ast::{
    AggregateFunction, AggregateSpec, AstError, Atom, Comparator, Literal, Program, Rule,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: expected {expected}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
    },
    #[error("line {line}, column {column}: atom `{name}` uses the reserved marker `__`")]
    ReservedName {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("line {line}, column {column}: aggregates cannot be negated")]
    NegatedAggregate { line: usize, column: usize },
    #[error("line {line}, column {column}: atom `{atom}` occurs more than once in one aggregate")]
    DuplicateAggregateElement {
        line: usize,
        column: usize,
        atom: String,
    },
    #[error("line {line}, column {column}: {source}")]
    InvalidAggregate {
        line: usize,
        column: usize,
        source: AstError,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. }
            | ParseError::ReservedName { line, column, .. }
            | ParseError::NegatedAggregate { line, column }
            | ParseError::DuplicateAggregateElement { line, column, .. }
            | ParseError::InvalidAggregate { line, column, .. } => (*line, *column),
        }
    }
}

/// Whether atoms carrying the reserved `__` marker are accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NameMode {
    /// User input: reserved names are rejected.
    #[default]
    User,
    /// Rewriter output: generated names such as `p__t` and `__bot` are legal.
    Generated,
}

/// Parses user input.
pub fn parse(text: &str) -> Result<Program, ParseError> {
    parse_with(text, NameMode::User)
}

pub fn parse_with(text: &str, mode: NameMode) -> Result<Program, ParseError> {
    let tokens = Lexer::new(text).tokenize()?;
    Parser {
        tokens,
        pos: 0,
        mode,
    }
    .program()
}

/// Parses raw bytes; invalid UTF-8 is reported as a syntax error at the
/// offending byte.
pub fn parse_bytes(bytes: &[u8], mode: NameMode) -> Result<Program, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_with(text, mode),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let (line, column) = end_position(valid);
            Err(ParseError::Syntax {
                line,
                column,
                expected: "valid UTF-8".to_string(),
            })
        }
    }
}

fn end_position(text: &str) -> (usize, usize) {
    let mut line = 1;
    let mut column = 1;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    (line, column)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    If,
    Dot,
    Bar,
    Comma,
    Colon,
    LBrace,
    RBrace,
    Cmp(Comparator),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::If => "`:-`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Cmp(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, expected: &str) -> ParseError {
        ParseError::Syntax {
            line,
            column,
            expected: expected.to_string(),
        }
    }

    fn tokenize(mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '%' {
                    while matches!(self.chars.peek(), Some(&c) if c != '\n') {
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let (line, column) = (self.line, self.column);
            let Some(c) = self.bump() else {
                out.push(Token {
                    tok: Tok::Eof,
                    line,
                    column,
                });
                return Ok(out);
            };
            let tok = match c {
                '.' => Tok::Dot,
                '|' => Tok::Bar,
                ',' => Tok::Comma,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ':' => {
                    if self.chars.peek() == Some(&'-') {
                        self.bump();
                        Tok::If
                    } else {
                        Tok::Colon
                    }
                }
                '<' | '>' => {
                    let eq = self.chars.peek() == Some(&'=');
                    if eq {
                        self.bump();
                    }
                    Tok::Cmp(match (c, eq) {
                        ('<', false) => Comparator::Lt,
                        ('<', true) => Comparator::Le,
                        ('>', false) => Comparator::Gt,
                        _ => Comparator::Ge,
                    })
                }
                '=' => Tok::Cmp(Comparator::Eq),
                '!' => {
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::Cmp(Comparator::Ne)
                    } else {
                        return Err(self.error(line, column + 1, "`=` after `!`"));
                    }
                }
                '-' | '0'..='9' => {
                    let mut digits = String::from(c);
                    while let Some(&d) = self.chars.peek() {
                        if !d.is_ascii_digit() {
                            break;
                        }
                        digits.push(d);
                        self.bump();
                    }
                    if digits == "-" {
                        return Err(self.error(line, column + 1, "digit after `-`"));
                    }
                    match digits.parse::<i64>() {
                        Ok(i) => Tok::Int(i),
                        Err(_) => return Err(self.error(line, column, "64-bit integer")),
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut ident = String::from(c);
                    while let Some(&d) = self.chars.peek() {
                        if !(d.is_ascii_alphanumeric() || d == '_') {
                            break;
                        }
                        ident.push(d);
                        self.bump();
                    }
                    Tok::Ident(ident)
                }
                _ => return Err(self.error(line, column, "rule, literal or punctuation")),
            };
            out.push(Token { tok, line, column });
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    mode: NameMode,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            line: t.line,
            column: t.column,
            expected: format!("{expected}, found {}", t.tok.describe()),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn program(mut self) -> Result<Program, ParseError> {
        let mut rules = Vec::new();
        while self.peek().tok != Tok::Eof {
            rules.push(self.rule()?);
        }
        Ok(Program::new(rules))
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let mut head = Vec::new();
        if self.peek().tok != Tok::If {
            head.push(self.atom()?);
            while self.peek().tok == Tok::Bar {
                self.next();
                head.push(self.atom()?);
            }
            if self.peek().tok == Tok::Dot {
                self.next();
                return Ok(Rule::new(head, []));
            }
            if self.peek().tok != Tok::If {
                return Err(self.unexpected("`|`, `:-` or `.`"));
            }
        }
        self.next();
        let mut body = Vec::new();
        if self.peek().tok != Tok::Dot {
            body.push(self.literal()?);
            while self.peek().tok == Tok::Comma {
                self.next();
                body.push(self.literal()?);
            }
        }
        self.expect(Tok::Dot, "`,` or `.`")?;
        Ok(Rule::new(head, body))
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let t = self.peek().clone();
        let Tok::Ident(name) = &t.tok else {
            return Err(self.unexpected("atom"));
        };
        let result = match self.mode {
            NameMode::User => Atom::new(name),
            NameMode::Generated => Atom::generated(name),
        };
        match result {
            Ok(atom) => {
                self.next();
                Ok(atom)
            }
            Err(AstError::ReservedName(name)) => Err(ParseError::ReservedName {
                line: t.line,
                column: t.column,
                name,
            }),
            Err(_) if self.mode == NameMode::User && name.starts_with("__") => {
                Err(ParseError::ReservedName {
                    line: t.line,
                    column: t.column,
                    name: name.clone(),
                })
            }
            Err(_) => Err(self.unexpected("atom")),
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let start = self.peek().clone();
        let mut depth: u32 = 0;
        while matches!(&self.peek().tok, Tok::Ident(s) if s == "not") {
            self.next();
            depth = depth
                .checked_add(1)
                .ok_or_else(|| self.unexpected("fewer `not` symbols"))?;
        }
        if let Tok::Ident(word) = &self.peek().tok {
            if let Some(func) = AggregateFunction::from_keyword(word) {
                if *self.peek_at(1) == Tok::LBrace {
                    if depth > 0 {
                        return Err(ParseError::NegatedAggregate {
                            line: start.line,
                            column: start.column,
                        });
                    }
                    return self.aggregate(func).map(Literal::Aggregate);
                }
            }
        }
        let atom = self.atom()?;
        Ok(Literal::negated(atom, depth))
    }

    fn aggregate(&mut self, func: AggregateFunction) -> Result<AggregateSpec, ParseError> {
        let start = self.next();
        self.expect(Tok::LBrace, "`{`")?;
        let mut elements = Vec::new();
        if self.peek().tok != Tok::RBrace {
            loop {
                let weight = if let Tok::Int(w) = self.peek().tok {
                    self.next();
                    self.expect(Tok::Colon, "`:` after element weight")?;
                    w
                } else {
                    1
                };
                let at = self.peek().clone();
                let atom = self.atom()?;
                elements.push((weight, atom, at));
                if self.peek().tok == Tok::Comma {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace, "`,` or `}`")?;
        let guard = if func.is_parity() {
            None
        } else {
            let Tok::Cmp(cmp) = self.peek().tok else {
                return Err(self.unexpected("comparator"));
            };
            self.next();
            let Tok::Int(bound) = self.peek().tok else {
                return Err(self.unexpected("integer bound"));
            };
            self.next();
            Some((cmp, bound))
        };
        for (i, (_, atom, at)) in elements.iter().enumerate() {
            if elements[..i].iter().any(|(_, other, _)| other == atom) {
                return Err(ParseError::DuplicateAggregateElement {
                    line: at.line,
                    column: at.column,
                    atom: atom.to_string(),
                });
            }
        }
        AggregateSpec::new(func, elements.into_iter().map(|(w, a, _)| (w, a)), guard).map_err(
            |source| ParseError::InvalidAggregate {
                line: start.line,
                column: start.column,
                source,
            },
        )
    }
}

/// Canonical text: one rule per line, head atoms and aggregate elements in
/// canonical atom order. `parse_with(render(p), NameMode::Generated) == p`
/// for every program, and `parse(render(p)) == p` when `p` has no generated
/// atoms.
pub fn render(program: &Program) -> String {
    let mut out = String::new();
    for rule in &program.rules {
        out.push_str(&render_rule(rule));
        out.push('\n');
    }
    out
}

pub fn render_rule(rule: &Rule) -> String {
    let mut out = String::new();
    let head: Vec<&str> = rule.head.iter().map(Atom::name).collect();
    out.push_str(&head.join(" | "));
    if !rule.body.is_empty() || rule.head.is_empty() {
        if !rule.head.is_empty() {
            out.push(' ');
        }
        out.push_str(":- ");
        let body: Vec<String> = rule.body.iter().map(render_literal).collect();
        out.push_str(&body.join(", "));
    }
    out.push('.');
    out
}

pub fn render_literal(literal: &Literal) -> String {
    match literal {
        Literal::Atom {
            atom,
            negation_depth,
        } => {
            let mut s = "not ".repeat(*negation_depth as usize);
            s.push_str(atom.name());
            s
        }
        Literal::Aggregate(spec) => render_aggregate(spec),
    }
}

pub fn render_aggregate(spec: &AggregateSpec) -> String {
    let func = spec.func();
    let elems: Vec<String> = spec
        .elements()
        .iter()
        .map(|e| {
            if func.ignores_weights() {
                e.atom.to_string()
            } else {
                format!("{}:{}", e.weight, e.atom)
            }
        })
        .collect();
    let mut s = format!("{}{{{}}}", func.keyword(), elems.join(", "));
    if let Some((cmp, bound)) = spec.guard() {
        let _ = write!(s, " {cmp} {bound}");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("rule {rule}: {func} aggregates have no ASP-Core-2 counterpart")]
    UnsupportedAggregate {
        rule: usize,
        func: AggregateFunction,
    },
    #[error("rule {rule}: negation depth {depth} exceeds 2")]
    UnsupportedNegationDepth { rule: usize, depth: u32 },
}

/// Emits ASP-Core-2 text for programs using only COUNT/SUM aggregates and
/// negation depth at most 2. Rule numbers in errors are 1-based.
pub fn emit_core2(program: &Program) -> Result<String, EmitError> {
    let mut out = String::new();
    for (i, rule) in program.rules.iter().enumerate() {
        let mut body = Vec::with_capacity(rule.body.len());
        for literal in &rule.body {
            body.push(match literal {
                Literal::Atom { negation_depth, .. } if *negation_depth > 2 => {
                    return Err(EmitError::UnsupportedNegationDepth {
                        rule: i + 1,
                        depth: *negation_depth,
                    })
                }
                Literal::Atom { .. } => render_literal(literal),
                Literal::Aggregate(spec) => {
                    let func = spec.func();
                    if !matches!(func, AggregateFunction::Count | AggregateFunction::Sum) {
                        return Err(EmitError::UnsupportedAggregate { rule: i + 1, func });
                    }
                    let elems: Vec<String> = spec
                        .elements()
                        .iter()
                        .map(|e| format!("{},{} : {}", e.weight, e.atom, e.atom))
                        .collect();
                    let (cmp, bound) = spec.guard().expect("count/sum carry a guard");
                    format!("#{}{{{}}} {cmp} {bound}", func.keyword(), elems.join("; "))
                }
            });
        }
        let head: Vec<&str> = rule.head.iter().map(Atom::name).collect();
        out.push_str(&head.join(" | "));
        if !body.is_empty() || rule.head.is_empty() {
            if !rule.head.is_empty() {
                out.push(' ');
            }
            out.push_str(":- ");
            out.push_str(&body.join(", "));
        }
        out.push_str(".\n");
    }
    Ok(out)
}
