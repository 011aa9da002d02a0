//! Acceptance criteria, one PASS/FAIL line each.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use sel_core::gen::{chain_kb, random_kb, GenConfig};
use sel_core::normalize::{normalize, RULES};
use sel_core::oracle::{search_model_with, SearchConfig};
use sel_core::syntax::KnowledgeBase;
use sel_core::tableau::{saturate_with, CompletionGraph, Rule, SaturationOptions, Verdict};
use sel_core::textio::parse_kb;

const FUZZ_SEEDS: u64 = 500;
const QUERY_LIMIT: Duration = Duration::from_secs(1);
const SCALING_SIZES: [usize; 5] = [50, 100, 200, 400, 800];
const SCALING_SLOPE: f64 = 7.0;
const SCALING_LIMIT: Duration = Duration::from_secs(60);
const SIZE_RATIO: f64 = 10.0;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(root().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "sel"))
        .collect();
    files.sort();
    files
}

fn sel(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_sel")).args(args).current_dir(root()).output().unwrap();
    (out, start.elapsed())
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

fn saturate(kb: &KnowledgeBase) -> Verdict {
    saturate_with(kb, &SaturationOptions::default()).expect("saturation within the bounds")
}

/// Rule counters and bound checks gathered over every saturation.
#[derive(Default)]
struct Stats {
    tableau: BTreeMap<&'static str, u64>,
    normalization: BTreeMap<u8, usize>,
    bound_violations: Vec<String>,
    saturations: usize,
}

impl Stats {
    fn graph(&mut self, label: &str, g: &CompletionGraph) {
        self.saturations += 1;
        for (rule, n) in g.counters() {
            *self.tableau.entry(rule.name()).or_default() += n;
        }
        let (steps, elements, constraints) = g.bounds();
        let worst = g.elements().map(|e| g.constraint_count(e)).max().unwrap_or(0) as u64;
        if g.rule_applications() > steps || g.num_elements() as u64 > elements || worst > constraints {
            self.bound_violations.push(label.to_string());
        }
    }

    fn normalized(&mut self, kb: &KnowledgeBase) -> KnowledgeBase {
        let result = normalize(kb);
        for (rule, n) in RULES.iter().zip(result.rule_counts()) {
            *self.normalization.entry(*rule).or_default() += n;
        }
        result.kb
    }
}

struct Criterion {
    id: u8,
    pass: bool,
    detail: String,
}

fn criterion1() -> Criterion {
    let (out, took) = sel(&["sat", "corpus/example1.sel"]);
    let pass = out.status.success() && stdout(&out) == "satisfiable" && took < QUERY_LIMIT;
    Criterion { id: 1, pass, detail: format!("example1.sel is {} in {took:.2?}", stdout(&out)) }
}

fn criterion2() -> Criterion {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut expect = |args: &[&str], answer: &str| {
        let (out, took) = sel(args);
        slowest = slowest.max(took);
        if stdout(&out) != answer || took >= QUERY_LIMIT {
            failures.push(format!("{} -> {:?} in {took:.2?}", args.join(" "), stdout(&out)));
        }
    };
    for phi in [
        "B(TT)[Tumour(b)]",
        "B(TT)[Tissue(b)]",
        "B(TP)[Tissue(b)]",
        "B(TP)[(ex ProductOf.Tumour)(b)]",
        "B(TP)[(ex ProductOf.(Tumour & AbnormalGrowthProcess))(b)]",
    ] {
        expect(&["entails", "corpus/example1.sel", "--axiom", phi], "entailed");
    }
    expect(
        &["entails", "corpus/clinic.sel", "--axiom", "B(CL)[(ex AssociatedWith.ColonCancerRisk)(p1)]"],
        "entailed",
    );
    expect(
        &["instances", "corpus/clinic.sel", "--concept", "B(CL)[ex AssociatedWith.ColonCancerRisk]"],
        "p1",
    );
    expect(&["sat", "corpus/inconsistent.sel"], "unsatisfiable");
    let pass = failures.is_empty();
    let detail = if pass {
        format!("8 tumour and clinic queries answered as expected, slowest {slowest:.2?}")
    } else {
        failures.join("; ")
    };
    Criterion { id: 2, pass, detail }
}

fn criterion3(stats: &mut Stats) -> Criterion {
    let cfg = GenConfig::default();
    let (mut not_normal, mut too_big, mut disagree, mut escalated) = (0, 0, Vec::new(), 0);
    let mut worst_ratio: f64 = 0.0;
    for seed in 0..FUZZ_SEEDS {
        let kb = random_kb(seed, &cfg);
        let nf = stats.normalized(&kb);
        if !nf.is_normal_form() {
            not_normal += 1;
        }
        let ratio = nf.size() as f64 / kb.size().max(1) as f64;
        worst_ratio = worst_ratio.max(ratio);
        if ratio > SIZE_RATIO {
            too_big += 1;
        }
        let original = search_model_with(&kb, None, &SearchConfig::new(4, 4)).unwrap().is_some();
        let mut normal = search_model_with(&nf, None, &SearchConfig::new(4, 8)).unwrap().is_some();
        if original != normal {
            escalated += 1;
            normal = search_model_with(&nf, None, &SearchConfig::new(5, 12)).unwrap().is_some();
        }
        if original != normal {
            disagree.push(seed);
        }
    }
    let pass = not_normal == 0 && too_big == 0 && disagree.is_empty();
    let detail = format!(
        "{FUZZ_SEEDS} KBs: {not_normal} not normal, worst size ratio {worst_ratio:.2}, \
         {} oracle disagreements {disagree:?}, {escalated} escalated",
        disagree.len()
    );
    Criterion { id: 3, pass, detail }
}

fn criterion4(stats: &mut Stats) -> Criterion {
    let cfg = GenConfig::default();
    let start = Instant::now();
    let (mut sat, mut unsat, mut unsound, mut bad_models, mut misses) = (0, 0, Vec::new(), Vec::new(), Vec::new());
    for seed in 0..FUZZ_SEEDS {
        let kb = random_kb(seed, &cfg);
        let nf = stats.normalized(&kb);
        let verdict = saturate(&nf);
        stats.graph(&format!("fuzz seed {seed}"), verdict.graph());
        let oracle = search_model_with(&kb, None, &SearchConfig::new(4, 4)).unwrap().is_some();
        if verdict.is_satisfiable() {
            sat += 1;
            let model = verdict.graph().extract_model(&kb.vocabulary(), 1_000_000);
            let ok = model.is_ok_and(|m| m.validate(true).is_ok() && m.satisfies(&kb).unwrap_or(false));
            if !ok {
                bad_models.push(seed);
            }
            if !oracle {
                misses.push(seed);
            }
        } else {
            unsat += 1;
            if oracle {
                unsound.push(seed);
            }
        }
    }
    let pass = unsound.is_empty() && bad_models.is_empty();
    let detail = format!(
        "{sat} satisfiable, {unsat} unsatisfiable; unsat with oracle model {unsound:?}; \
         failed extracted models {bad_models:?}; satisfiable without an oracle model at (4,4) {misses:?}; {:.2?}",
        start.elapsed()
    );
    Criterion { id: 4, pass, detail }
}

fn criterion5(stats: &mut Stats) -> Criterion {
    for file in corpus_files() {
        let kb = parse_kb(&std::fs::read_to_string(&file).unwrap()).unwrap();
        let nf = stats.normalized(&kb);
        let verdict = saturate(&nf);
        stats.graph(&file.display().to_string(), verdict.graph());
    }
    let pass = stats.bound_violations.is_empty();
    let detail = format!(
        "{} saturations checked against 27k^6 steps, 3k^2 elements, 2k^3 constraints; violations {:?}",
        stats.saturations, stats.bound_violations
    );
    Criterion { id: 5, pass, detail }
}

fn criterion6(stats: &mut Stats) -> Criterion {
    let mut points = Vec::new();
    let mut slowest = Duration::ZERO;
    for n in SCALING_SIZES {
        let kb = chain_kb(n);
        let start = Instant::now();
        let verdict = saturate(&kb);
        let took = start.elapsed();
        stats.graph(&format!("chain {n}"), verdict.graph());
        slowest = slowest.max(took);
        points.push(((n as f64).ln(), took.as_secs_f64().max(1e-6).ln()));
    }
    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let cov: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let slope = cov / var;
    let pass = slope <= SCALING_SLOPE && slowest <= SCALING_LIMIT;
    Criterion { id: 6, pass, detail: format!("log-log slope {slope:.2}, n=800 in {slowest:.2?}") }
}

fn criterion7() -> Criterion {
    let mut differing = Vec::new();
    let mut runs = 0;
    for file in corpus_files() {
        let f = file.to_str().unwrap();
        let commands: Vec<Vec<&str>> = vec![
            vec!["sat", f],
            vec!["--format", "json", "sat", f],
            vec!["--trace", "sat", f],
            vec!["normalize", f],
            vec!["--format", "json", "normalize", f],
            vec!["entails", f, "--axiom", "B(TT)[Tumour(b)]"],
            vec!["concept-sat", f, "--concept", "B(SN)[Tumour & Process]"],
            vec!["instances", f, "--concept", "D(SN)[Tumour]"],
            vec!["oracle", f, "--max-domain", "2", "--max-precisifications", "2"],
            vec!["dump-graph", f],
        ];
        for args in commands {
            let (a, _) = sel(&args);
            let (b, _) = sel(&args);
            runs += 1;
            if a.stdout != b.stdout || a.stderr != b.stderr || a.status != b.status {
                differing.push(args.join(" "));
            }
        }
    }
    let pass = differing.is_empty();
    Criterion { id: 7, pass, detail: format!("{runs} commands run twice; differing {differing:?}") }
}

fn criterion8(stats: &Stats) -> Criterion {
    let missing_norm: Vec<u8> = RULES.iter().copied().filter(|r| stats.normalization.get(r).copied().unwrap_or(0) == 0).collect();
    let missing_tab: Vec<&str> =
        Rule::ALL.iter().map(|r| r.name()).filter(|r| stats.tableau.get(r).copied().unwrap_or(0) == 0).collect();
    let pass = missing_norm.is_empty() && missing_tab.is_empty();
    let detail = format!(
        "normalization rules never applied {missing_norm:?}; tableau rules never applied {missing_tab:?}; counts {:?}",
        stats.tableau
    );
    Criterion { id: 8, pass, detail }
}

fn main() -> ExitCode {
    let mut stats = Stats::default();
    let results = [
        criterion1(),
        criterion2(),
        criterion3(&mut stats),
        criterion4(&mut stats),
        criterion5(&mut stats),
        criterion6(&mut stats),
        criterion7(),
    ];
    let coverage = criterion8(&stats);
    let mut all = true;
    for c in results.iter().chain(std::iter::once(&coverage)) {
        println!("criterion {}: {}: {}", c.id, if c.pass { "PASS" } else { "FAIL" }, c.detail);
        all &= c.pass;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
