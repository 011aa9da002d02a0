//! `sel`: command-line front end for the Standpoint EL reasoner.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sel_core::normalize::normalize;
use sel_core::oracle::{search_model, OracleError};
use sel_core::syntax::KnowledgeBase;
use sel_core::tableau::{saturate_with, SaturationOptions, TableauError, Verdict};
use sel_core::tasks::{concept_unsatisfiability_axiom, entailment_query, instances};
use sel_core::textio::{
    axiom_to_string, emit_dot, emit_json, parse_axiom, parse_concept, parse_with, serialize, ClashReport,
    Diagnostic, ParseOptions, Report,
};

#[derive(Parser)]
#[command(name = "sel", version, about = "Reasoning in standpoint EL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Stream rule applications to stderr as JSON lines.
    #[arg(long, global = true)]
    trace: bool,
    /// Accept names with the reserved `__f` prefix, e.g. normalizer output.
    #[arg(long, global = true)]
    allow_reserved: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability of a knowledge base.
    Sat { kb: PathBuf },
    /// Decide whether the knowledge base entails an axiom.
    Entails {
        kb: PathBuf,
        #[arg(long)]
        axiom: String,
    },
    /// Decide whether a concept can have instances.
    ConceptSat {
        kb: PathBuf,
        #[arg(long)]
        concept: String,
    },
    /// List the individuals that are instances of a concept.
    Instances {
        kb: PathBuf,
        #[arg(long)]
        concept: String,
    },
    /// Print the normal form of a knowledge base.
    Normalize { kb: PathBuf },
    /// Search for a small model directly.
    Oracle {
        kb: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_domain: usize,
        #[arg(long, default_value_t = 4)]
        max_precisifications: usize,
    },
    /// Saturate and write the completion graph as DOT.
    DumpGraph {
        kb: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<TableauError> for Failure {
    fn from(e: TableauError) -> Self {
        match e {
            TableauError::NotNormalForm(_) => Failure::Input(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn diagnostics(origin: &str, ds: Vec<Diagnostic>) -> Failure {
    let mut msg = String::new();
    for (i, d) in ds.iter().enumerate() {
        if i > 0 {
            msg.push('\n');
        }
        let _ = write!(msg, "{origin}:{d}");
    }
    Failure::Input(msg)
}

/// What a command produced: text for stdout and, for yes/no questions in
/// text mode, whether the answer was no.
struct Output {
    text: String,
    negative: bool,
}

struct App {
    format: Format,
    trace: bool,
    parse: ParseOptions,
}

impl App {
    fn load(&self, path: &Path) -> Result<KnowledgeBase, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        parse_with(&text, &self.parse)
            .map(|d| d.desugar())
            .map_err(|ds| diagnostics(&path.display().to_string(), ds))
    }

    fn saturate(&self, kb: &KnowledgeBase) -> Result<Verdict, Failure> {
        let options = SaturationOptions { trace: self.trace, ..SaturationOptions::from_env() };
        let verdict = saturate_with(kb, &options)?;
        if self.trace {
            let stderr = std::io::stderr();
            let mut lock = stderr.lock();
            for event in verdict.graph().trace() {
                let _ = writeln!(lock, "{}", serde_json::to_string(event).expect("trace events serialise"));
            }
        }
        Ok(verdict)
    }

    fn boolean(&self, report: Report, yes: &str, no: &str) -> Output {
        let answer = matches!(report.answer, sel_core::textio::Answer::Bool(true));
        match self.format {
            Format::Json => Output { text: emit_json(&report) + "\n", negative: false },
            Format::Text => Output { text: format!("{}\n", if answer { yes } else { no }), negative: !answer },
        }
    }

    fn decided(&self, task: &str, verdict: &Verdict, answer: bool) -> Report {
        let g = verdict.graph();
        let clash = match verdict {
            Verdict::Unsatisfiable { clash, .. } => Some(ClashReport {
                element: g.element_name(clash.element),
                variable: g.var_name(clash.variable),
            }),
            Verdict::Satisfiable(_) => None,
        };
        Report {
            rule_applications: Some(g.rule_applications()),
            elements: Some(g.num_elements()),
            clash,
            ..Report::boolean(task, answer)
        }
    }

    fn run(&self, command: Command) -> Result<Output, Failure> {
        match command {
            Command::Sat { kb } => {
                let nf = normalize(&self.load(&kb)?).kb;
                let verdict = self.saturate(&nf)?;
                let report = self.decided("sat", &verdict, verdict.is_satisfiable());
                Ok(self.boolean(report, "satisfiable", "unsatisfiable"))
            }
            Command::Entails { kb, axiom } => {
                let kb = self.load(&kb)?;
                let phi = parse_axiom(&axiom).map_err(|ds| diagnostics("--axiom", ds))?;
                let verdict = self.saturate(&entailment_query(&kb, &phi))?;
                let report = Report {
                    axiom: Some(axiom_to_string(&phi)),
                    ..self.decided("entails", &verdict, !verdict.is_satisfiable())
                };
                Ok(self.boolean(report, "entailed", "not entailed"))
            }
            Command::ConceptSat { kb, concept } => {
                let kb = self.load(&kb)?;
                let c = parse_concept(&concept).map_err(|ds| diagnostics("--concept", ds))?;
                let verdict = self.saturate(&entailment_query(&kb, &concept_unsatisfiability_axiom(&c)))?;
                let report = self.decided("concept-sat", &verdict, verdict.is_satisfiable());
                Ok(self.boolean(report, "satisfiable", "unsatisfiable"))
            }
            Command::Instances { kb, concept } => {
                let kb = self.load(&kb)?;
                let c = parse_concept(&concept).map_err(|ds| diagnostics("--concept", ds))?;
                let names: Vec<String> = instances(&kb, &c)?.iter().map(|n| n.to_string()).collect();
                let text = match self.format {
                    Format::Json => emit_json(&Report::names("instances", names)) + "\n",
                    Format::Text => names.iter().map(|n| format!("{n}\n")).collect(),
                };
                Ok(Output { text, negative: false })
            }
            Command::Normalize { kb } => {
                let result = normalize(&self.load(&kb)?);
                if self.trace {
                    let stderr = std::io::stderr();
                    let mut lock = stderr.lock();
                    for step in &result.trace {
                        let _ = writeln!(lock, "{}", step.to_json_line());
                    }
                }
                let text = match self.format {
                    Format::Text => serialize(&result.kb),
                    Format::Json => {
                        let axioms: Vec<String> = result.kb.iter().map(axiom_to_string).collect();
                        let counts: serde_json::Map<String, serde_json::Value> = sel_core::normalize::RULES
                            .iter()
                            .zip(result.rule_counts())
                            .map(|(r, n)| (r.to_string(), json!(n)))
                            .collect();
                        let v = json!({
                            "task": "normalize",
                            "axioms": axioms,
                            "introducedConcepts": result.introduced_concepts.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
                            "introducedStandpoints": result.introduced_standpoints.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
                            "ruleCounts": counts,
                        });
                        v.to_string() + "\n"
                    }
                };
                Ok(Output { text, negative: false })
            }
            Command::Oracle { kb, max_domain, max_precisifications } => {
                let kb = self.load(&kb)?;
                let model = search_model(&kb, max_domain, max_precisifications)?;
                match self.format {
                    Format::Json => {
                        let v = json!({
                            "task": "oracle",
                            "answer": model.is_some(),
                            "model": model.as_ref().map(|m| m.to_json()),
                        });
                        Ok(Output { text: v.to_string() + "\n", negative: false })
                    }
                    Format::Text => Ok(match model {
                        Some(m) => Output {
                            text: format!(
                                "model found with {} elements and {} precisifications\n{}\n",
                                m.domain,
                                m.precisifications,
                                serde_json::to_string_pretty(&m.to_json()).expect("models serialise")
                            ),
                            negative: false,
                        },
                        None => Output {
                            text: format!("no model with at most {max_domain} elements and {max_precisifications} precisifications\n"),
                            negative: true,
                        },
                    }),
                }
            }
            Command::DumpGraph { kb, dot } => {
                let nf = normalize(&self.load(&kb)?).kb;
                let verdict = self.saturate(&nf)?;
                let rendered = emit_dot(verdict.graph());
                match dot {
                    Some(path) => {
                        std::fs::write(&path, rendered)
                            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                        Ok(Output { text: String::new(), negative: false })
                    }
                    None => Ok(Output { text: rendered, negative: false }),
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let app = App {
        format: cli.format,
        trace: cli.trace,
        parse: ParseOptions { allow_reserved: cli.allow_reserved },
    };
    match app.run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            if out.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
