//! Concrete `.sel` syntax, canonical printing, JSON reports and DOT output.
//!
//! ```text
//! kb        := (stmt ";")*
//! stmt      := sharpening | modality "[" axiom "]" | axiom | block
//! sharpening:= SP "<=" SP
//! block     := modality "{" (axiom ";")* "}"
//! modality  := "B(" SP ")" | "D(" SP ")"
//! axiom     := concept "<:" concept | concept "(" IDENT ")" | IDENT "(" IDENT "," IDENT ")"
//! concept   := "Top" | "Bot" | IDENT | concept "&" concept | "ex" IDENT "." concept
//!            | modality "[" concept "]" | "(" concept ")"
//! ```
//!
//! `&` is left-associative, `ex R.` extends as far right as possible, and `#`
//! starts a line comment. Axioms written without a modality are read as `□_*`.

mod dot;
mod lexer;
mod parser;
mod printer;
mod report;

use std::fmt;

use serde::Serialize;

use crate::syntax::{Axiom, Concept, Document, KnowledgeBase};

pub use dot::emit_dot;
pub use printer::{axiom_to_string, concept_to_string, serialize, serialize_document};
pub use report::{emit_json, Answer, ClashReport, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub kind: Severity,
}

impl Diagnostic {
    pub(crate) fn error(span: Span, message: impl Into<String>) -> Self {
        Diagnostic { line: span.line, column: span.column, message: message.into(), kind: Severity::Error }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {kind}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ParseOptions {
    /// Accept identifiers with the reserved `__f` prefix, e.g. when reading
    /// back the output of `normalize`.
    pub allow_reserved: bool,
}

pub fn parse(text: &str) -> Result<Document, Vec<Diagnostic>> {
    parse_with(text, &ParseOptions::default())
}

pub fn parse_with(text: &str, options: &ParseOptions) -> Result<Document, Vec<Diagnostic>> {
    parser::Parser::new(text, options)?.document()
}

/// Parses a document and desugars its blocks.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, Vec<Diagnostic>> {
    parse(text).map(|d| d.desugar())
}

/// Parses a single axiom; a trailing `;` is optional.
pub fn parse_axiom(text: &str) -> Result<Axiom, Vec<Diagnostic>> {
    let opts = ParseOptions::default();
    let mut p = parser::Parser::new(text, &opts)?;
    let ax = p.axiom().map_err(|d| vec![d])?;
    p.finish().map_err(|d| vec![d])?;
    Ok(ax)
}

pub fn parse_concept(text: &str) -> Result<Concept, Vec<Diagnostic>> {
    let opts = ParseOptions::default();
    let mut p = parser::Parser::new(text, &opts)?;
    let c = p.concept().map_err(|d| vec![d])?;
    p.finish().map_err(|d| vec![d])?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Body, Modality, Statement};

    fn one(text: &str) -> Axiom {
        let doc = parse(text).unwrap();
        assert_eq!(doc.statements.len(), 1);
        match &doc.statements[0] {
            Statement::Axiom(a) => a.clone(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn modal_gci() {
        assert_eq!(
            one("B(TT)[Tumour <: Tissue];"),
            Axiom::boxed("TT", Body::gci(Concept::atom("Tumour"), Concept::atom("Tissue")))
        );
    }

    #[test]
    fn unmodalised_is_global_box() {
        assert_eq!(
            one("Tumour <: Tissue;"),
            Axiom::global(Body::gci(Concept::atom("Tumour"), Concept::atom("Tissue")))
        );
    }

    #[test]
    fn sharpening() {
        assert_eq!(one("TT <= SN;"), Axiom::sharpening("TT", "SN"));
        assert_eq!(one("s <= *;"), Axiom::sharpening("s", "*"));
    }

    #[test]
    fn modal_concepts_on_both_sides() {
        let ax = one("D(SN)[Tumour & PhysicalObject] <: B(TT)[Tumour];");
        let lhs = Concept::diamond("SN", Concept::and(Concept::atom("Tumour"), Concept::atom("PhysicalObject")));
        let rhs = Concept::boxed("TT", Concept::atom("Tumour"));
        assert_eq!(ax, Axiom::global(Body::gci(lhs, rhs)));
    }

    #[test]
    fn exists_extends_right_and_and_is_left_assoc() {
        let c = parse_concept("A & ex R.B & C").unwrap();
        let expected = Concept::and(
            Concept::atom("A"),
            Concept::exists("R", Concept::and(Concept::atom("B"), Concept::atom("C"))),
        );
        assert_eq!(c, expected);
        let c = parse_concept("A & B & C").unwrap();
        assert_eq!(
            c,
            Concept::and(Concept::and(Concept::atom("A"), Concept::atom("B")), Concept::atom("C"))
        );
    }

    #[test]
    fn assertions_by_arity() {
        assert_eq!(
            one("B(SN)[HasPart(p1, a)];"),
            Axiom::boxed("SN", Body::role_assertion("HasPart", "p1", "a"))
        );
        assert_eq!(
            one("B(SN)[(Tumour & Process)(d)];"),
            Axiom::boxed(
                "SN",
                Body::concept_assertion(Concept::and(Concept::atom("Tumour"), Concept::atom("Process")), "d")
            )
        );
    }

    #[test]
    fn modality_letters_can_still_be_names() {
        assert_eq!(one("B(x);"), Axiom::global(Body::concept_assertion(Concept::atom("B"), "x")));
        assert_eq!(one("D(x, y);"), Axiom::global(Body::role_assertion("D", "x", "y")));
        assert_eq!(
            one("ex <: B;"),
            Axiom::global(Body::gci(Concept::atom("ex"), Concept::atom("B")))
        );
    }

    #[test]
    fn blocks() {
        let doc = parse("D(SN){HasPart(a, b); Tumour(b);};").unwrap();
        assert_eq!(
            doc.statements,
            vec![Statement::Block {
                modality: Modality::diamond("SN"),
                bodies: vec![
                    Body::role_assertion("HasPart", "a", "b"),
                    Body::concept_assertion(Concept::atom("Tumour"), "b")
                ]
            }]
        );
    }

    #[test]
    fn comments_and_whitespace() {
        let doc = parse("# header\nA <: B; # trailing\n\n  C <: D;").unwrap();
        assert_eq!(doc.statements.len(), 2);
    }

    #[test]
    fn diagnostics() {
        let e = parse("A <: B $;").unwrap_err();
        assert!(e[0].message.contains("unknown token"), "{e:?}");
        assert_eq!((e[0].line, e[0].column), (1, 8));

        let e = parse("B(s)[A <: B;").unwrap_err();
        assert!(e[0].message.contains("unbalanced"), "{e:?}");

        let e = parse("A <: __fA0;").unwrap_err();
        assert!(e[0].message.contains("reserved"), "{e:?}");

        let e = parse("B(s)[t <= u];").unwrap_err();
        assert!(e[0].message.contains("sharpening"), "{e:?}");

        let e = parse("B(s){t <= u;};").unwrap_err();
        assert!(e[0].message.contains("sharpening"), "{e:?}");

        let e = parse("A <: B\nC <: D;").unwrap_err();
        assert_eq!(e[0].line, 2);
    }

    #[test]
    fn several_errors_are_collected() {
        let e = parse("A <: ;\nB <: C;\n<: D;").unwrap_err();
        assert_eq!(e.len(), 2);
        assert_eq!(e[1].line, 3);
    }

    #[test]
    fn reserved_names_with_option() {
        let opts = ParseOptions { allow_reserved: true };
        assert!(parse_with("A <: __fA0;", &opts).is_ok());
    }

    #[test]
    fn serialize_canonical() {
        assert_eq!(serialize(&KnowledgeBase::new()), "");
        let kb: KnowledgeBase = [Axiom::global(Body::gci(Concept::Top, Concept::Bot))].into_iter().collect();
        assert_eq!(serialize(&kb), "Top <: Bot;\n");
    }

    #[test]
    fn printer_brackets_existentials() {
        let c = Concept::and(Concept::exists("R", Concept::atom("A")), Concept::atom("B"));
        let s = concept_to_string(&c);
        assert_eq!(s, "(ex R.A) & B");
        assert_eq!(parse_concept(&s).unwrap(), c);

        let c = Concept::and(
            Concept::and(Concept::atom("X"), Concept::exists("R", Concept::atom("A"))),
            Concept::atom("B"),
        );
        assert_eq!(parse_concept(&concept_to_string(&c)).unwrap(), c);
    }

    #[test]
    fn parse_single_axiom() {
        assert_eq!(
            parse_axiom("B(TT)[Tumour(b)]").unwrap(),
            Axiom::boxed("TT", Body::concept_assertion(Concept::atom("Tumour"), "b"))
        );
        assert!(parse_axiom("A <: B; C <: D;").is_err());
    }
}
