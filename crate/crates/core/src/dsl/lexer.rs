use super::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    /// `=[`
    ArrowOpen,
    /// `<=[`
    TwoWayOpen,
    /// `]=>`
    ArrowClose,
    /// `=>`
    Bare,
    /// `=:`
    Bind,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Str(_) => "string".to_string(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::ArrowOpen => "`=[`".into(),
            Tok::TwoWayOpen => "`<=[`".into(),
            Tok::ArrowClose => "`]=>`".into(),
            Tok::Bare => "`=>`".into(),
            Tok::Bind => "`=:`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn pos(&self) -> (usize, usize) {
        (self.line, self.col)
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor {
        chars: src.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '#' {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            } else {
                break;
            }
        }
        let start = cur.pos();
        let Some(c) = cur.bump() else {
            out.push(Token {
                tok: Tok::Eof,
                span: Span::new(start, start),
            });
            return Ok(out);
        };
        let err = |cur: &Cursor, msg: String| Diagnostic::syntax(Span::new(start, cur.pos()), msg);
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '[' => Tok::LBracket,
            ']' => {
                if cur.eat('=') {
                    if !cur.eat('>') {
                        return Err(err(&cur, "expected `]=>`".into()));
                    }
                    Tok::ArrowClose
                } else {
                    Tok::RBracket
                }
            }
            '=' => match cur.peek() {
                Some('[') => {
                    cur.bump();
                    Tok::ArrowOpen
                }
                Some('>') => {
                    cur.bump();
                    Tok::Bare
                }
                Some(':') => {
                    cur.bump();
                    Tok::Bind
                }
                _ => return Err(err(&cur, "expected `=[`, `=>` or `=:`".into())),
            },
            '<' => {
                if !(cur.eat('=') && cur.eat('[')) {
                    return Err(err(&cur, "expected `<=[`".into()));
                }
                Tok::TwoWayOpen
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match cur.bump() {
                        None | Some('\n') => return Err(err(&cur, "unterminated string".into())),
                        Some('"') => break,
                        Some('\\') => match cur.bump() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some(other) => {
                                return Err(err(&cur, format!("unknown escape `\\{other}`")))
                            }
                            None => return Err(err(&cur, "unterminated string".into())),
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Str(s)
            }
            c if c == '-' || c.is_ascii_digit() => {
                let mut s = String::from(c);
                while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                    s.push(d);
                    cur.bump();
                }
                if cur.peek() == Some('.') {
                    s.push('.');
                    cur.bump();
                    while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                        s.push(d);
                        cur.bump();
                    }
                }
                if !is_number(&s) {
                    return Err(err(&cur, format!("malformed number `{s}`")));
                }
                Tok::Number(s)
            }
            c if is_ident_start(c) => {
                let mut s = String::from(c);
                while let Some(d) = cur.peek().filter(|&d| is_ident_continue(d)) {
                    s.push(d);
                    cur.bump();
                }
                Tok::Ident(s)
            }
            other => {
                return Err(err(
                    &cur,
                    format!("unexpected character `{}`", other.escape_debug()),
                ))
            }
        };
        out.push(Token {
            tok,
            span: Span::new(start, cur.pos()),
        });
    }
}

/// `-?digits(.digits)?`
pub(crate) fn is_number(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    !int.is_empty()
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.is_none_or(|f| !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()))
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_ident_start) && chars.all(is_ident_continue)
}
