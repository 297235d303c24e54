//! Concrete syntax: a hand-written lexer and recursive-descent parser, and
//! the matching pretty-printer.
//!
//! ```text
//! proc    := seq ("|" seq)*
//! seq     := prefix ("." seq)? | unary
//! unary   := "0" | "!" seq | "(" "new" ident ")" seq
//!          | "(" "hide" ident ")" seq | "(" proc ")"
//! prefix  := ident "(" ident ("/" nameset)? ")"     input, "/" gives the blocked set
//!          | ident "[" ident ":" nameset "]"         trusted input
//!          | ident "!" "<" ident ">"                 output
//!          | "spy" (":" (ident | "{" ident? "}"))?
//! nameset := "{" (ident ("," ident)*)? "}" | ident
//! ident   := [a-zA-Z_][a-zA-Z0-9_']*   except new, hide, spy, nu
//! ```
//!
//! Binders and prefixes bind tighter than `|`. Line comments start with `--`.

use std::fmt;

use thiserror::Error;

use crate::name::{Name, NameSet, NU_TEXT};
use crate::process::Process;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    New,
    Hide,
    Spy,
    Bang,
    Lt,
    Gt,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Colon,
    Comma,
    Dot,
    Bar,
    Slash,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::New => "`new`".into(),
            Tok::Hide => "`hide`".into(),
            Tok::Spy => "`spy`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '-' {
            bump(&mut chars);
            if chars.peek() == Some(&'-') {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
                continue;
            }
            return Err(ParseError {
                line: tl,
                column: tc,
                expected: vec!["`--` comment".into()],
                found: "`-`".into(),
            });
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                    word.push(c);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            let tok = match word.as_str() {
                "new" => Tok::New,
                "hide" => Tok::Hide,
                "spy" => Tok::Spy,
                w if w == NU_TEXT => {
                    return Err(ParseError {
                        line: tl,
                        column: tc,
                        expected: vec!["identifier".into()],
                        found: "reserved name `nu`".into(),
                    })
                }
                _ => Tok::Ident(word),
            };
            out.push(Spanned {
                tok,
                line: tl,
                column: tc,
            });
            continue;
        }
        let tok = match c {
            '0' => Tok::Zero,
            '!' => Tok::Bang,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '|' => Tok::Bar,
            '/' => Tok::Slash,
            other => {
                return Err(ParseError {
                    line: tl,
                    column: tc,
                    expected: vec!["a process".into()],
                    found: format!("character {other:?}"),
                })
            }
        };
        bump(&mut chars);
        out.push(Spanned {
            tok,
            line: tl,
            column: tc,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let here = &self.toks[self.pos];
        Err(ParseError {
            line: here.line,
            column: here.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: here.tok.describe(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            self.error(&[&tok.describe()])
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(Name::new(s))
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn name_set(&mut self) -> Result<NameSet, ParseError> {
        match self.peek() {
            Tok::Ident(_) => Ok(std::iter::once(self.ident()?).collect()),
            Tok::LBrace => {
                self.advance();
                let mut set = NameSet::new();
                if *self.peek() == Tok::RBrace {
                    self.advance();
                    return Ok(set);
                }
                loop {
                    set.insert(self.ident()?);
                    match self.peek() {
                        Tok::Comma => {
                            self.advance();
                        }
                        Tok::RBrace => {
                            self.advance();
                            return Ok(set);
                        }
                        _ => return self.error(&["`,`", "`}`"]),
                    }
                }
            }
            _ => self.error(&["identifier", "`{`"]),
        }
    }

    fn proc(&mut self) -> Result<Process, ParseError> {
        let mut acc = self.seq()?;
        while *self.peek() == Tok::Bar {
            self.advance();
            let rhs = self.seq()?;
            acc = Process::par(acc, rhs);
        }
        Ok(acc)
    }

    fn continuation(&mut self) -> Result<Process, ParseError> {
        if *self.peek() == Tok::Dot {
            self.advance();
            self.seq()
        } else {
            Ok(Process::Nil)
        }
    }

    fn seq(&mut self) -> Result<Process, ParseError> {
        match self.peek().clone() {
            Tok::Ident(_) => {
                let subject = self.ident()?;
                match self.peek() {
                    Tok::LParen => {
                        self.advance();
                        let param = self.ident()?;
                        let blocked = if *self.peek() == Tok::Slash {
                            self.advance();
                            self.name_set()?
                        } else {
                            NameSet::new()
                        };
                        if *self.peek() != Tok::RParen {
                            return self.error(&["`/`", "`)`"]);
                        }
                        self.advance();
                        let body = self.continuation()?;
                        Ok(Process::input_blocking(subject, param, blocked, body))
                    }
                    Tok::LBracket => {
                        self.advance();
                        let param = self.ident()?;
                        self.expect(Tok::Colon)?;
                        let accepted = self.name_set()?;
                        self.expect(Tok::RBracket)?;
                        let body = self.continuation()?;
                        Ok(Process::trusted(subject, param, accepted, body))
                    }
                    Tok::Bang => {
                        self.advance();
                        self.expect(Tok::Lt)?;
                        let object = self.ident()?;
                        self.expect(Tok::Gt)?;
                        let body = self.continuation()?;
                        Ok(Process::output(subject, object, body))
                    }
                    _ => self.error(&["`(`", "`[`", "`!`"]),
                }
            }
            Tok::Spy => {
                self.advance();
                let spied = if *self.peek() == Tok::Colon {
                    self.advance();
                    match self.peek() {
                        Tok::LBrace => {
                            self.advance();
                            let s = match self.peek() {
                                Tok::Ident(_) => Some(self.ident()?),
                                _ => None,
                            };
                            self.expect(Tok::RBrace)?;
                            s
                        }
                        _ => Some(self.ident()?),
                    }
                } else {
                    None
                };
                let body = self.continuation()?;
                Ok(Process::spy(spied, body))
            }
            _ => self.unary(),
        }
    }

    fn unary(&mut self) -> Result<Process, ParseError> {
        match self.peek() {
            Tok::Zero => {
                self.advance();
                Ok(Process::Nil)
            }
            Tok::Bang => {
                self.advance();
                Ok(Process::repl(self.seq()?))
            }
            Tok::LParen => match self.peek_at(1) {
                Tok::New | Tok::Hide => {
                    self.advance();
                    let is_new = self.advance() == Tok::New;
                    let binder = self.ident()?;
                    self.expect(Tok::RParen)?;
                    let body = self.seq()?;
                    Ok(if is_new {
                        Process::new_(binder, body)
                    } else {
                        Process::hide(binder, body)
                    })
                }
                _ => {
                    self.advance();
                    let p = self.proc()?;
                    self.expect(Tok::RParen)?;
                    Ok(p)
                }
            },
            _ => self.error(&["a process"]),
        }
    }
}

/// Parses a process from concrete syntax.
pub fn parse(src: &str) -> Result<Process, ParseError> {
    let toks = lex(src)?;
    let mut parser = Parser { toks, pos: 0 };
    let p = parser.proc()?;
    if *parser.peek() != Tok::Eof {
        return parser.error(&["`|`", "end of input"]);
    }
    Ok(p)
}

/// Parses raw bytes, reporting invalid UTF-8 as a positioned error.
pub fn parse_bytes(bytes: &[u8]) -> Result<Process, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(s) => parse(s),
        Err(e) => {
            let prefix = &bytes[..e.valid_up_to()];
            let line = 1 + prefix.iter().filter(|&&b| b == b'\n').count();
            let column = 1 + prefix.iter().rev().take_while(|&&b| b != b'\n').count();
            Err(ParseError {
                line,
                column,
                expected: vec!["UTF-8 text".into()],
                found: "invalid byte sequence".into(),
            })
        }
    }
}

fn fmt_set(f: &mut fmt::Formatter<'_>, set: &NameSet) -> fmt::Result {
    f.write_str("{")?;
    for (i, n) in set.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{n}")?;
    }
    f.write_str("}")
}

fn fmt_cont(f: &mut fmt::Formatter<'_>, body: &Process) -> fmt::Result {
    if body.is_nil() {
        Ok(())
    } else {
        f.write_str(".")?;
        fmt_seq(f, body)
    }
}

fn fmt_seq(f: &mut fmt::Formatter<'_>, p: &Process) -> fmt::Result {
    match p {
        Process::Nil => f.write_str("0"),
        Process::Input {
            subject,
            param,
            blocked,
            body,
        } => {
            write!(f, "{subject}({param}")?;
            if !blocked.is_empty() {
                f.write_str("/")?;
                fmt_set(f, blocked)?;
            }
            f.write_str(")")?;
            fmt_cont(f, body)
        }
        Process::TrustedInput {
            subject,
            param,
            accepted,
            body,
        } => {
            write!(f, "{subject}[{param}:")?;
            fmt_set(f, accepted)?;
            f.write_str("]")?;
            fmt_cont(f, body)
        }
        Process::Output {
            subject,
            object,
            body,
        } => {
            write!(f, "{subject}!<{object}>")?;
            fmt_cont(f, body)
        }
        Process::Par(..) => {
            f.write_str("(")?;
            fmt_par(f, p)?;
            f.write_str(")")
        }
        Process::New(x, body) => {
            write!(f, "(new {x}) ")?;
            fmt_seq(f, body)
        }
        Process::Hide(x, body) => {
            write!(f, "(hide {x}) ")?;
            fmt_seq(f, body)
        }
        Process::Repl(body) => {
            f.write_str("!")?;
            fmt_seq(f, body)
        }
        Process::Spy { spied, body } => {
            f.write_str("spy")?;
            if let Some(s) = spied {
                write!(f, ":{s}")?;
            }
            fmt_cont(f, body)
        }
    }
}

fn fmt_par(f: &mut fmt::Formatter<'_>, p: &Process) -> fmt::Result {
    match p {
        Process::Par(l, r) => {
            fmt_par(f, l)?;
            f.write_str(" | ")?;
            fmt_seq(f, r)
        }
        other => fmt_seq(f, other),
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_par(f, self)
    }
}

/// Deterministic, minimally parenthesised concrete syntax.
pub fn pretty(p: &Process) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::name_set;

    #[test]
    fn parses_hide_output() {
        assert_eq!(
            parse("(hide z) x!<v>").unwrap(),
            Process::hide("z", Process::output("x", "v", Process::Nil))
        );
    }

    #[test]
    fn parses_blocked_input() {
        assert_eq!(
            parse("x(y/{b}).0").unwrap(),
            Process::input_blocking("x", "y", name_set(["b"]), Process::Nil)
        );
        assert_eq!(
            parse("x(y/b)").unwrap(),
            Process::input_blocking("x", "y", name_set(["b"]), Process::Nil)
        );
    }

    #[test]
    fn parses_trusted_par_output() {
        assert_eq!(
            parse("x[y:{a}].0 | x!<a>").unwrap(),
            Process::par(
                Process::trusted("x", "y", name_set(["a"]), Process::Nil),
                Process::output("x", "a", Process::Nil)
            )
        );
    }

    #[test]
    fn binders_bind_tighter_than_par() {
        let p = parse("(new x) x!<a> | b!<c>").unwrap();
        assert!(matches!(p, Process::Par(ref l, _) if matches!(**l, Process::New(..))));
        let q = parse("(new x) (x!<a> | b!<c>)").unwrap();
        assert!(matches!(q, Process::New(..)));
    }

    #[test]
    fn parses_spy_forms_and_repl() {
        assert_eq!(
            parse("spy.a!<b>").unwrap(),
            Process::spy(None, Process::output("a", "b", Process::Nil))
        );
        assert_eq!(
            parse("spy:x").unwrap(),
            Process::spy(Some(Name::new("x")), Process::Nil)
        );
        assert_eq!(parse("spy:{}").unwrap(), Process::spy(None, Process::Nil));
        assert_eq!(
            parse("!x!<a>").unwrap(),
            Process::repl(Process::output("x", "a", Process::Nil))
        );
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(
            parse("-- a comment\nx!<a> -- trailing\n").unwrap(),
            Process::output("x", "a", Process::Nil)
        );
    }

    #[test]
    fn pretty_shorthands() {
        assert_eq!(pretty(&Process::Nil), "0");
        assert_eq!(pretty(&Process::input("x", "y", Process::Nil)), "x(y)");
        let p = Process::input(
            "x",
            "y",
            Process::par(
                Process::output("a", "b", Process::Nil),
                Process::output("c", "d", Process::Nil),
            ),
        );
        assert_eq!(pretty(&p), "x(y).(a!<b> | c!<d>)");
        let right_nested = Process::par(Process::Nil, Process::par(Process::Nil, Process::Nil));
        assert_eq!(pretty(&right_nested), "0 | (0 | 0)");
        assert_eq!(parse(&pretty(&right_nested)).unwrap(), right_nested);
    }

    #[test]
    fn errors_carry_position() {
        let e = parse("x(y").unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        assert!(e.expected.iter().any(|s| s.contains(')')));
        let e = parse("a!<b>\n  | nu!<c>").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        let e = parse("x#1!<a>").unwrap_err();
        assert_eq!((e.line, e.column), (1, 2));
        assert!(parse("").is_err());
        assert!(parse("(new new) 0").is_err());
    }

    #[test]
    fn invalid_utf8_is_positioned() {
        let e = parse_bytes(b"a!<b>\n\xff").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
    }
}
