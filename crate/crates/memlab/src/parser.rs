//! Lexer and recursive-descent parser for the `.mem` format.
//!
//! ```text
//! system  := "system" IDENT "{" ("kind" ("plain"|"surface"))? membrane
//!            ("rules" "{" rule* "}")? "}"
//! membrane := IDENT timer? surf? "{" objlist? (";" membrane*)? "}"
//! surf    := "(" objlist ")"
//! objlist := obj ("," obj)*
//! obj     := "~"? IDENT timer?
//! timer   := "@" NAT
//! rule    := evo | endo | exo | fendo | fexo | mendo | mexo | pino | sexo | phago
//! ```
//!
//! `#` starts a comment running to end of line. The `kind` clause defaults to
//! `plain`; target files may omit the `rules` block.

use std::fmt;

use crate::multiset::{Multiset, Obj, Symbol, Timer};
use crate::rules::{Rule, Span, SystemKind};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Severity {
    Error,
    Note,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Note => "note",
        })
    }
}

/// A located parser or validation message.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, span: Span) -> Self {
        Diagnostic { severity: Severity::Error, message: message.into(), span }
    }

    pub fn note(message: impl Into<String>, span: Span) -> Self {
        Diagnostic { severity: Severity::Note, message: message.into(), span }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} at {}", self.severity, self.message, self.span)
    }
}

/// Parse output before validation: the raw membrane tree keeps per-membrane
/// spans so the validator can point at offending nodes.
#[derive(Clone, Debug)]
pub struct RawSystem {
    pub name: String,
    pub kind: Option<SystemKind>,
    pub skin: RawMembrane,
    pub rules: Vec<(Rule, Span)>,
}

#[derive(Clone, Debug)]
pub struct RawMembrane {
    pub label: String,
    pub timer: Timer,
    pub contents: Multiset,
    pub surface: Multiset,
    pub children: Vec<RawMembrane>,
    pub span: Span,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Nat(u32),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    At,
    Tilde,
    Colon,
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Nat(n) => write!(f, "number `{n}`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::At => f.write_str("`@`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn next_token(&mut self) -> Result<(Tok, Span), Diagnostic> {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'#') => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let span = Span { line: self.line, col: self.col };
        let c = match self.bump() {
            None => return Ok((Tok::Eof, span)),
            Some(c) => c,
        };
        let tok = match c {
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b';' => Tok::Semi,
            b'@' => Tok::At,
            b'~' => Tok::Tilde,
            b':' => Tok::Colon,
            b'-' => {
                if self.peek() == Some(b'>') {
                    self.bump();
                    Tok::Arrow
                } else {
                    return Err(Diagnostic::error("expected `->`", span));
                }
            }
            c if c.is_ascii_digit() => {
                let mut n: u64 = (c - b'0') as u64;
                while let Some(d) = self.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    n = n * 10 + (d - b'0') as u64;
                    if n > u32::MAX as u64 {
                        return Err(Diagnostic::error("number too large", span));
                    }
                    self.bump();
                }
                Tok::Nat(n as u32)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos - 1;
                while let Some(d) = self.peek() {
                    if d.is_ascii_alphanumeric() || d == b'_' {
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
            }
            other => {
                return Err(Diagnostic::error(
                    format!("unexpected character `{}`", other as char),
                    span,
                ))
            }
        };
        Ok((tok, span))
    }
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<Span, Diagnostic> {
        let (tok, span) = self.bump();
        if &tok == want {
            Ok(span)
        } else {
            Err(Diagnostic::error(format!("expected {want}, found {tok}"), span))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Span), Diagnostic> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Ident(s) => Ok((s, span)),
            other => Err(Diagnostic::error(format!("expected identifier, found {other}"), span)),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Span, Diagnostic> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Ident(s) if s == kw => Ok(span),
            other => Err(Diagnostic::error(format!("expected `{kw}`, found {other}"), span)),
        }
    }

    fn at_object_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Tilde)
    }

    /// `"~"? IDENT timer?`
    fn parse_obj(&mut self, allow_timer: bool) -> Result<(Obj, Span), Diagnostic> {
        let barred = if self.peek() == &Tok::Tilde {
            self.bump();
            true
        } else {
            false
        };
        let (name, span) = self.expect_ident()?;
        let symbol = Symbol { name, barred };
        let timer = if self.peek() == &Tok::At {
            let at_span = self.peek_span();
            if !allow_timer {
                return Err(Diagnostic::error(
                    "timers are not allowed on rule triggers",
                    at_span,
                ));
            }
            self.bump();
            let (tok, tspan) = self.bump();
            match tok {
                Tok::Nat(t) => Timer::Finite(t),
                other => {
                    return Err(Diagnostic::error(
                        format!("expected timer value, found {other}"),
                        tspan,
                    ))
                }
            }
        } else {
            Timer::Infinite
        };
        Ok((Obj { symbol, timer }, span))
    }

    fn parse_objlist(&mut self) -> Result<Multiset, Diagnostic> {
        let mut m = Multiset::new();
        if !self.at_object_start() {
            return Ok(m);
        }
        loop {
            let (obj, _) = self.parse_obj(true)?;
            m.insert(obj, 1);
            if self.peek() == &Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        Ok(m)
    }

    /// Trigger position: a bare symbol, no timer.
    fn parse_trigger(&mut self) -> Result<Symbol, Diagnostic> {
        let (obj, _) = self.parse_obj(false)?;
        Ok(obj.symbol)
    }

    fn parse_membrane(&mut self) -> Result<RawMembrane, Diagnostic> {
        let (label, span) = self.expect_ident()?;
        let mut timer = Timer::Infinite;
        let mut timer_span = span;
        if self.peek() == &Tok::At {
            timer_span = self.peek_span();
            self.bump();
            let (tok, tspan) = self.bump();
            match tok {
                Tok::Nat(t) => timer = Timer::Finite(t),
                other => {
                    return Err(Diagnostic::error(
                        format!("expected timer value, found {other}"),
                        tspan,
                    ))
                }
            }
        }
        let mut surface = Multiset::new();
        if self.peek() == &Tok::LParen {
            self.bump();
            surface = self.parse_objlist()?;
            self.expect(&Tok::RParen)?;
        }
        self.expect(&Tok::LBrace)?;
        let contents = self.parse_objlist()?;
        let mut children = Vec::new();
        if self.peek() == &Tok::Semi {
            self.bump();
            while matches!(self.peek(), Tok::Ident(_)) {
                children.push(self.parse_membrane()?);
            }
        }
        self.expect(&Tok::RBrace)?;
        Ok(RawMembrane { label, timer, contents, surface, children, span: timer_span })
    }

    /// `IDENT "(" trigger "->" objlist? ")"`
    fn parse_site(&mut self) -> Result<(String, Symbol, Multiset), Diagnostic> {
        let (label, _) = self.expect_ident()?;
        self.expect(&Tok::LParen)?;
        let trigger = self.parse_trigger()?;
        self.expect(&Tok::Arrow)?;
        let output = self.parse_objlist()?;
        self.expect(&Tok::RParen)?;
        Ok((label, trigger, output))
    }

    fn parse_rule(&mut self) -> Result<(Rule, Span), Diagnostic> {
        let (kw, span) = self.expect_ident()?;
        let rule = match kw.as_str() {
            "evo" => {
                let (at, trigger, output) = self.parse_site()?;
                Rule::Evo { at, trigger, output }
            }
            "endo" => {
                let (mover, trigger, output) = self.parse_site()?;
                self.expect_keyword("into")?;
                let (target, _) = self.expect_ident()?;
                Rule::Endo { mover, trigger, target, output }
            }
            "exo" => {
                let (mover, trigger, output) = self.parse_site()?;
                self.expect_keyword("from")?;
                let (host, _) = self.expect_ident()?;
                Rule::Exo { mover, trigger, host, output }
            }
            "fendo" => {
                let (mover, _) = self.expect_ident()?;
                self.expect_keyword("into")?;
                let (target, trigger, output) = self.parse_site()?;
                Rule::Fendo { mover, target, trigger, output }
            }
            "fexo" => {
                let (mover, _) = self.expect_ident()?;
                self.expect_keyword("from")?;
                let (host, trigger, output) = self.parse_site()?;
                Rule::Fexo { mover, host, trigger, output }
            }
            "mendo" | "mexo" => {
                let (mover, trigger, mover_output) = self.parse_site()?;
                let partner_span = self.peek_span();
                let (partner, co_trigger, partner_output) = self.parse_site()?;
                if co_trigger != trigger.dual() {
                    return Err(Diagnostic::error(
                        format!(
                            "mutual rules consume a dual pair: expected `{}`, found `{}`",
                            trigger.dual(),
                            co_trigger
                        ),
                        partner_span,
                    ));
                }
                if kw == "mendo" {
                    Rule::MutualEndo {
                        mover,
                        trigger,
                        mover_output,
                        target: partner,
                        target_output: partner_output,
                    }
                } else {
                    Rule::MutualExo {
                        mover,
                        trigger,
                        mover_output,
                        host: partner,
                        host_output: partner_output,
                    }
                }
            }
            "pino" => {
                let (at, _) = self.expect_ident()?;
                self.expect(&Tok::LParen)?;
                let trigger = self.parse_trigger()?;
                let inner = if self.peek() == &Tok::Colon {
                    self.bump();
                    self.parse_objlist()?
                } else {
                    Multiset::new()
                };
                self.expect(&Tok::Arrow)?;
                let fresh = self.parse_objlist()?;
                self.expect(&Tok::RParen)?;
                Rule::Pino { at, trigger, inner, fresh }
            }
            "sexo" => {
                let (inner, trigger, fresh) = self.parse_site()?;
                self.expect_keyword("from")?;
                let (outer, _) = self.expect_ident()?;
                Rule::SurfaceExo { inner, trigger, outer, fresh }
            }
            "phago" => {
                let (victim, _) = self.expect_ident()?;
                self.expect(&Tok::LParen)?;
                let trigger = self.parse_trigger()?;
                self.expect(&Tok::RParen)?;
                self.expect_keyword("by")?;
                let (engulfer, _) = self.expect_ident()?;
                self.expect_keyword("wrap")?;
                let (wrap_label, _) = self.expect_ident()?;
                self.expect(&Tok::LParen)?;
                let fresh = self.parse_objlist()?;
                self.expect(&Tok::RParen)?;
                Rule::Phago { victim, trigger, engulfer, wrap_label, fresh }
            }
            other => {
                return Err(Diagnostic::error(format!("unknown rule keyword `{other}`"), span))
            }
        };
        Ok((rule, span))
    }
}

/// Parses `.mem` source. Returns the raw system or the first syntax error.
pub fn parse(text: &str) -> Result<RawSystem, Diagnostic> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    loop {
        let (tok, span) = lexer.next_token()?;
        let done = tok == Tok::Eof;
        toks.push((tok, span));
        if done {
            break;
        }
    }
    let mut p = Parser { toks, pos: 0 };
    p.expect_keyword("system")?;
    let (name, _) = p.expect_ident()?;
    p.expect(&Tok::LBrace)?;
    let mut kind = None;
    if p.peek() == &Tok::Ident("kind".to_string()) {
        p.bump();
        let (kw, kspan) = p.expect_ident()?;
        kind = Some(match kw.as_str() {
            "plain" => SystemKind::Plain,
            "surface" => SystemKind::Surface,
            other => {
                return Err(Diagnostic::error(
                    format!("expected `plain` or `surface`, found `{other}`"),
                    kspan,
                ))
            }
        });
    }
    let skin = p.parse_membrane()?;
    if skin.timer.is_finite() {
        return Err(Diagnostic::error("the skin membrane cannot carry a timer", skin.span));
    }
    let mut rules = Vec::new();
    if p.peek() == &Tok::Ident("rules".to_string()) {
        p.bump();
        p.expect(&Tok::LBrace)?;
        while p.peek() != &Tok::RBrace {
            rules.push(p.parse_rule()?);
        }
        p.expect(&Tok::RBrace)?;
    }
    p.expect(&Tok::RBrace)?;
    let (tok, span) = p.bump();
    if tok != Tok::Eof {
        return Err(Diagnostic::error(format!("expected end of input, found {tok}"), span));
    }
    Ok(RawSystem { name, kind, skin, rules })
}
