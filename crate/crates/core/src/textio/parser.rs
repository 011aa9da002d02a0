use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, ParseOptions, Span};
use crate::syntax::{
    name, universal, Axiom, Body, Concept, Document, Modality, Mode, Name, Statement, RESERVED_PREFIX,
};

type PResult<T> = Result<T, Diagnostic>;

pub(crate) struct Parser<'o> {
    tokens: Vec<Token>,
    pos: usize,
    options: &'o ParseOptions,
}

/// What a bracketed modality `B(s)[ … ]` turned out to contain.
enum Bracketed {
    Body(Body),
    Concept(Concept),
}

impl<'o> Parser<'o> {
    pub(crate) fn new(text: &str, options: &'o ParseOptions) -> Result<Self, Vec<Diagnostic>> {
        let (tokens, diags) = lex(text);
        if !diags.is_empty() {
            return Err(diags);
        }
        Ok(Parser { tokens, pos: 0, options })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn advance(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, context: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(Diagnostic::error(
                self.span(),
                format!("expected {} {context}, found {}", tok.describe(), self.peek().describe()),
            ))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Name> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(s) => {
                if is_keyword(&s) {
                    return Err(Diagnostic::error(span, format!("`{s}` is reserved and cannot be used as {what}")));
                }
                if s.starts_with(RESERVED_PREFIX) && !self.options.allow_reserved {
                    return Err(Diagnostic::error(
                        span,
                        format!("identifier `{s}` uses the reserved prefix `{RESERVED_PREFIX}`"),
                    ));
                }
                self.advance();
                Ok(name(&s))
            }
            other => Err(Diagnostic::error(span, format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn standpoint(&mut self) -> PResult<Name> {
        if *self.peek() == Tok::Star {
            self.advance();
            Ok(universal())
        } else {
            self.ident("a standpoint name")
        }
    }

    fn is_standpoint_tok(t: &Tok) -> bool {
        matches!(t, Tok::Star | Tok::Ident(_))
    }

    /// `B(` SP `)` or `D(` SP `)` followed by `[` or `{`.
    fn at_modality(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "B" || s == "D")
            && *self.peek_at(1) == Tok::LParen
            && Self::is_standpoint_tok(self.peek_at(2))
            && *self.peek_at(3) == Tok::RParen
            && matches!(self.peek_at(4), Tok::LBracket | Tok::LBrace)
    }

    fn at_sharpening(&self) -> bool {
        Self::is_standpoint_tok(self.peek()) && *self.peek_at(1) == Tok::Sharpens
    }

    fn modality(&mut self) -> PResult<Modality> {
        let mode = match self.peek() {
            Tok::Ident(s) if s == "B" => Mode::Box,
            _ => Mode::Diamond,
        };
        self.advance();
        self.expect(Tok::LParen, "after modality")?;
        let standpoint = self.standpoint()?;
        self.expect(Tok::RParen, "to close the modality")?;
        Ok(Modality { mode, standpoint })
    }

    pub(crate) fn document(&mut self) -> Result<Document, Vec<Diagnostic>> {
        let mut statements = Vec::new();
        let mut diags = Vec::new();
        while *self.peek() != Tok::Eof {
            match self.statement().and_then(|s| {
                self.expect(Tok::Semi, "after statement")?;
                Ok(s)
            }) {
                Ok(s) => statements.push(s),
                Err(d) => {
                    diags.push(d);
                    self.recover();
                }
            }
        }
        if diags.is_empty() {
            Ok(Document { statements })
        } else {
            Err(diags)
        }
    }

    /// Skips to just after the next top-level `;`.
    fn recover(&mut self) {
        let mut depth = 0i32;
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::LParen | Tok::LBracket | Tok::LBrace => depth += 1,
                Tok::RParen | Tok::RBracket | Tok::RBrace => depth -= 1,
                Tok::Semi if depth <= 0 => {
                    self.advance();
                    return;
                }
                _ => {}
            }
            self.advance();
        }
    }

    pub(crate) fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Semi {
            self.advance();
        }
        if *self.peek() != Tok::Eof {
            return Err(Diagnostic::error(
                self.span(),
                format!("unexpected {} after end of input", self.peek().describe()),
            ));
        }
        Ok(())
    }

    pub(crate) fn statement(&mut self) -> PResult<Statement> {
        if self.at_sharpening() {
            return self.sharpening().map(Statement::Axiom);
        }
        if self.at_modality() {
            let modality = self.modality()?;
            if *self.peek() == Tok::LBrace {
                return self.block(modality);
            }
            return match self.bracketed(&modality)? {
                Bracketed::Body(body) => Ok(Statement::Axiom(Axiom::modal(modality, body))),
                Bracketed::Concept(inner) => {
                    let first = Concept::Modal(modality, Box::new(inner));
                    let lhs = self.conjunction_from(first)?;
                    let body = self.body_tail(lhs)?;
                    Ok(Statement::Axiom(Axiom::global(body)))
                }
            };
        }
        let body = self.body()?;
        Ok(Statement::Axiom(Axiom::global(body)))
    }

    pub(crate) fn axiom(&mut self) -> PResult<Axiom> {
        let span = self.span();
        match self.statement()? {
            Statement::Axiom(ax) => Ok(ax),
            Statement::Block { .. } => Err(Diagnostic::error(span, "expected a single axiom, found a block")),
        }
    }

    fn sharpening(&mut self) -> PResult<Axiom> {
        let lower = self.standpoint()?;
        self.expect(Tok::Sharpens, "in sharpening statement")?;
        let upper = self.standpoint()?;
        Ok(Axiom::sharpening(lower, upper))
    }

    fn reject_nested_sharpening(&self) -> PResult<()> {
        if self.at_sharpening() {
            return Err(Diagnostic::error(
                self.span(),
                "a sharpening statement cannot appear inside a modality",
            ));
        }
        Ok(())
    }

    fn block(&mut self, modality: Modality) -> PResult<Statement> {
        self.expect(Tok::LBrace, "to open block")?;
        let mut bodies = Vec::new();
        while *self.peek() != Tok::RBrace {
            self.reject_nested_sharpening()?;
            if self.at_modality() {
                return Err(Diagnostic::error(
                    self.span(),
                    "axioms inside a block cannot carry their own modality",
                ));
            }
            bodies.push(self.body()?);
            self.expect(Tok::Semi, "after axiom in block")?;
        }
        self.expect(Tok::RBrace, "to close block")?;
        Ok(Statement::Block { modality, bodies })
    }

    /// Contents of `[ … ]` after a modality: either an axiom body or a concept.
    fn bracketed(&mut self, modality: &Modality) -> PResult<Bracketed> {
        self.expect(Tok::LBracket, "after modality")?;
        self.reject_nested_sharpening()?;
        let concept = self.concept()?;
        let out = match self.peek() {
            Tok::RBracket => Bracketed::Concept(concept),
            Tok::Subsumed | Tok::LParen => Bracketed::Body(self.body_tail(concept)?),
            other => {
                return Err(Diagnostic::error(
                    self.span(),
                    format!(
                        "expected `]`, `<:` or `(` inside {}({}), found {}",
                        modality.mode,
                        modality.standpoint,
                        other.describe()
                    ),
                ))
            }
        };
        self.expect(Tok::RBracket, "to close modality")?;
        Ok(out)
    }

    fn body(&mut self) -> PResult<Body> {
        let c = self.concept()?;
        self.body_tail(c)
    }

    fn body_tail(&mut self, first: Concept) -> PResult<Body> {
        let span = self.span();
        match self.peek() {
            Tok::Subsumed => {
                self.advance();
                let rhs = self.concept()?;
                Ok(Body::gci(first, rhs))
            }
            Tok::LParen => {
                self.advance();
                let a = self.ident("an individual name")?;
                if *self.peek() == Tok::Comma {
                    self.advance();
                    let b = self.ident("an individual name")?;
                    self.expect(Tok::RParen, "to close role assertion")?;
                    match first {
                        Concept::Atom(role) => Ok(Body::role_assertion(role, a, b)),
                        _ => Err(Diagnostic::error(span, "a role assertion needs a role name before `(`")),
                    }
                } else {
                    self.expect(Tok::RParen, "to close concept assertion")?;
                    Ok(Body::concept_assertion(first, a))
                }
            }
            other => Err(Diagnostic::error(span, format!("expected `<:` or `(`, found {}", other.describe()))),
        }
    }

    pub(crate) fn concept(&mut self) -> PResult<Concept> {
        let first = self.primary()?;
        self.conjunction_from(first)
    }

    fn conjunction_from(&mut self, first: Concept) -> PResult<Concept> {
        let mut acc = first;
        while *self.peek() == Tok::Amp {
            self.advance();
            let next = self.primary()?;
            acc = Concept::and(acc, next);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> PResult<Concept> {
        let span = self.span();
        if self.at_modality() {
            if *self.peek_at(4) == Tok::LBrace {
                return Err(Diagnostic::error(span, "a block cannot be used as a concept"));
            }
            let modality = self.modality()?;
            self.expect(Tok::LBracket, "after modality")?;
            let inner = self.concept()?;
            self.expect(Tok::RBracket, "to close modal concept")?;
            return Ok(Concept::Modal(modality, Box::new(inner)));
        }
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let c = self.concept()?;
                self.expect(Tok::RParen, "to close parenthesised concept")?;
                Ok(c)
            }
            Tok::Ident(s) if s == "Top" => {
                self.advance();
                Ok(Concept::Top)
            }
            Tok::Ident(s) if s == "Bot" => {
                self.advance();
                Ok(Concept::Bot)
            }
            Tok::Ident(s)
                if s == "ex" && matches!(self.peek_at(1), Tok::Ident(_)) && *self.peek_at(2) == Tok::Dot =>
            {
                self.advance();
                let role = self.ident("a role name")?;
                self.expect(Tok::Dot, "after role in existential")?;
                let filler = self.concept()?;
                Ok(Concept::Exists(role, Box::new(filler)))
            }
            Tok::Ident(_) => Ok(Concept::Atom(self.ident("a concept name")?)),
            other => Err(Diagnostic::error(span, format!("expected a concept, found {}", other.describe()))),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    s == "Top" || s == "Bot"
}
