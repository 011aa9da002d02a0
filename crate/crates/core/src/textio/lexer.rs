use super::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Star,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Dot,
    Amp,
    Subsumed,
    Sharpens,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Star => "`*`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Subsumed => "`<:`".into(),
            Tok::Sharpens => "`<=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub(crate) fn lex(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let span = Span { line, column };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next().unwrap();
            if c == '\n' {
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
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    ident.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            tokens.push(Token { tok: Tok::Ident(ident), span });
            continue;
        }

        bump(&mut chars);
        let tok = match c {
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '&' => Tok::Amp,
            '<' => match chars.peek() {
                Some(':') => {
                    bump(&mut chars);
                    Tok::Subsumed
                }
                Some('=') => {
                    bump(&mut chars);
                    Tok::Sharpens
                }
                _ => {
                    diags.push(Diagnostic::error(span, "unknown token `<`; expected `<:` or `<=`"));
                    continue;
                }
            },
            other => {
                diags.push(Diagnostic::error(span, format!("unknown token `{other}`")));
                continue;
            }
        };
        tokens.push(Token { tok, span });
    }
    tokens.push(Token { tok: Tok::Eof, span: Span { line, column } });
    check_brackets(&tokens, &mut diags);
    (tokens, diags)
}

fn check_brackets(tokens: &[Token], diags: &mut Vec<Diagnostic>) {
    let mut stack: Vec<&Token> = Vec::new();
    for t in tokens {
        let closer = match t.tok {
            Tok::LParen | Tok::LBracket | Tok::LBrace => {
                stack.push(t);
                continue;
            }
            Tok::RParen => Tok::LParen,
            Tok::RBracket => Tok::LBracket,
            Tok::RBrace => Tok::LBrace,
            _ => continue,
        };
        match stack.pop() {
            Some(open) if open.tok == closer => {}
            Some(open) => {
                diags.push(Diagnostic::error(
                    t.span,
                    format!(
                        "unbalanced brackets: {} does not close {} opened at {}:{}",
                        t.tok.describe(),
                        open.tok.describe(),
                        open.span.line,
                        open.span.column
                    ),
                ));
                return;
            }
            None => {
                diags.push(Diagnostic::error(
                    t.span,
                    format!("unbalanced brackets: unexpected {}", t.tok.describe()),
                ));
                return;
            }
        }
    }
    if let Some(open) = stack.pop() {
        diags.push(Diagnostic::error(
            open.span,
            format!("unbalanced brackets: {} is never closed", open.tok.describe()),
        ));
    }
}
