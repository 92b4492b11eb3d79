//! Recursive-descent parser for the textual process syntax.
//!
//! ```text
//! par  ::= seq ( "|" par )?
//! seq  ::= "0"
//!        | "new" ident "." par
//!        | ident "<" ident ">" ( "." seq )?
//!        | ident "(" ident ")" ( "." seq )?
//!        | "(" par ")"
//! ```
//!
//! `|` associates to the right, prefixes bind tighter than `|`, and the body
//! of `new` extends as far right as possible. A prefix without a
//! continuation stands for a prefix followed by `0`.

use thiserror::Error;

use super::{Ident, Process};

/// Deepest nesting of prefixes, parentheses and restrictions accepted.
pub const MAX_NESTING: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: {message}")]
pub struct ParseError {
    /// 1-based line.
    pub line: usize,
    /// 1-based column, counted in characters.
    pub column: usize,
    /// 0-based byte offset.
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(Ident),
    Zero,
    New,
    Lt,
    Gt,
    LParen,
    RParen,
    Dot,
    Bar,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::New => "`new`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl<'a> Lexer<'a> {
    fn error_at(&self, offset: usize, message: impl Into<String>) -> ParseError {
        let before = &self.src[..offset];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |n| n + 1);
        let column = before[line_start..].chars().count() + 1;
        ParseError {
            line,
            column,
            offset,
            message: message.into(),
        }
    }

    /// Returns the next token and its starting offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
        let start = self.pos;
        let mut chars = trimmed.chars();
        let Some(c) = chars.next() else {
            return Ok((Tok::Eof, start));
        };
        let single = match c {
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '.' => Some(Tok::Dot),
            '|' => Some(Tok::Bar),
            '0' => Some(Tok::Zero),
            _ => None,
        };
        if let Some(tok) = single {
            self.pos += c.len_utf8();
            if tok == Tok::Zero
                && self.src[self.pos..]
                    .chars()
                    .next()
                    .is_some_and(is_ident_continue)
            {
                return Err(self.error_at(start, "identifiers cannot start with a digit"));
            }
            return Ok((tok, start));
        }
        if is_ident_start(c) {
            let len = trimmed
                .char_indices()
                .find(|&(_, ch)| !is_ident_continue(ch))
                .map_or(trimmed.len(), |(n, _)| n);
            let word = &trimmed[..len];
            self.pos += len;
            let tok = if word == "new" {
                Tok::New
            } else {
                Tok::Ident(word.into())
            };
            return Ok((tok, start));
        }
        Err(self.error_at(start, format!("unexpected character {c:?}")))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    tok_start: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, tok_start) = lexer.next()?;
        Ok(Parser {
            lexer,
            tok,
            tok_start,
            depth: 0,
        })
    }

    fn bump(&mut self) -> Result<Tok, ParseError> {
        let (next, start) = self.lexer.next()?;
        self.tok_start = start;
        Ok(std::mem::replace(&mut self.tok, next))
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.lexer.error_at(
            self.tok_start,
            format!("expected {expected}, found {}", self.tok.describe()),
        )
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if self.tok == want {
            self.bump()?;
            Ok(())
        } else {
            Err(self.unexpected(&want.describe()))
        }
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        match &self.tok {
            Tok::Ident(name) => {
                let name = name.clone();
                self.bump()?;
                Ok(name)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(self
                .lexer
                .error_at(self.tok_start, "term nested too deeply"));
        }
        Ok(())
    }

    fn par(&mut self) -> Result<Process, ParseError> {
        self.enter()?;
        let left = self.seq()?;
        let result = if self.tok == Tok::Bar {
            self.bump()?;
            let right = self.par()?;
            Process::par(left, right)
        } else {
            left
        };
        self.depth -= 1;
        Ok(result)
    }

    fn seq(&mut self) -> Result<Process, ParseError> {
        self.enter()?;
        let result = match self.tok.clone() {
            Tok::Zero => {
                self.bump()?;
                Process::Nil
            }
            Tok::New => {
                self.bump()?;
                let name = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.par()?;
                Process::New {
                    name,
                    body: Box::new(body),
                }
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.par()?;
                self.expect(Tok::RParen)?;
                inner
            }
            Tok::Ident(subj) => {
                self.bump()?;
                match self.tok {
                    Tok::Lt => {
                        self.bump()?;
                        let obj = self.ident()?;
                        self.expect(Tok::Gt)?;
                        let cont = self.continuation()?;
                        Process::Out {
                            subj,
                            obj,
                            cont: Box::new(cont),
                        }
                    }
                    Tok::LParen => {
                        self.bump()?;
                        let binder = self.ident()?;
                        self.expect(Tok::RParen)?;
                        let cont = self.continuation()?;
                        Process::In {
                            subj,
                            binder,
                            cont: Box::new(cont),
                        }
                    }
                    _ => return Err(self.unexpected("`<` or `(` after a channel name")),
                }
            }
            _ => return Err(self.unexpected("a process")),
        };
        self.depth -= 1;
        Ok(result)
    }

    fn continuation(&mut self) -> Result<Process, ParseError> {
        if self.tok == Tok::Dot {
            self.bump()?;
            self.seq()
        } else {
            Ok(Process::Nil)
        }
    }
}

/// Parses a process. Free names are allowed.
pub fn parse_process(text: &str) -> Result<Process, ParseError> {
    let mut parser = Parser::new(text)?;
    let process = parser.par()?;
    if parser.tok != Tok::Eof {
        return Err(parser.unexpected("end of input"));
    }
    Ok(process)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_prefix() {
        assert_eq!(
            parse_process("b<a>.0").unwrap(),
            Process::out("b", "a", Process::Nil)
        );
    }

    #[test]
    fn restriction_scopes_right_and_par_is_right_associative() {
        let p = parse_process("new a.(b<a> | c<a> | a(z))").unwrap();
        let expected = Process::new(
            "a",
            Process::par(
                Process::out("b", "a", Process::Nil),
                Process::par(
                    Process::out("c", "a", Process::Nil),
                    Process::input("a", "z", Process::Nil),
                ),
            ),
        );
        assert_eq!(p, expected);
        assert_eq!(parse_process("new a.b<a> | c<a> | a(z)").unwrap(), expected);
    }

    #[test]
    fn prefix_binds_tighter_than_par() {
        let p = parse_process("b<a>.c<d>.0 | e(x).x<f>").unwrap();
        assert_eq!(
            p,
            Process::par(
                Process::out("b", "a", Process::out("c", "d", Process::Nil)),
                Process::input("e", "x", Process::out("x", "f", Process::Nil)),
            )
        );
    }

    #[test]
    fn truncated_output_reports_position() {
        let err = parse_process("b<a.").unwrap_err();
        assert_eq!((err.line, err.column, err.offset), (1, 4, 3));
        assert!(err.message.contains("`>`"));
    }

    #[test]
    fn multiline_positions() {
        let err = parse_process("b<a>.0 |\n  c(x).$").unwrap_err();
        assert_eq!((err.line, err.column), (2, 8));
    }

    #[test]
    fn rejects_trailing_garbage_and_deep_nesting() {
        assert!(parse_process("0 0").is_err());
        assert!(parse_process("").is_err());
        assert!(parse_process("new new.0").is_err());
        assert!(parse_process("0a").is_err());
        let deep = format!("{}0{}", "(".repeat(2000), ")".repeat(2000));
        assert!(parse_process(&deep)
            .unwrap_err()
            .message
            .contains("nested too deeply"));
    }
}
