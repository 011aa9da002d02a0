use sel_core::gen::{random_kb, GenConfig};
use sel_core::oracle::{entails_within, SearchConfig};
use sel_core::syntax::{name, KnowledgeBase};
use sel_core::tasks::{concept_satisfiable, entails, instances, is_satisfiable};
use sel_core::textio::{parse_axiom, parse_concept, parse_kb};

fn corpus(file: &str) -> KnowledgeBase {
    let path = format!("{}/../../corpus/{file}", env!("CARGO_MANIFEST_DIR"));
    parse_kb(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn example2_inferences() {
    let k = corpus("example1.sel");
    assert!(is_satisfiable(&k).unwrap());
    for phi in [
        "B(TT)[Tumour(b)]",
        "B(TT)[Tissue(b)]",
        "B(TP)[Tissue(b)]",
        "B(TP)[(ex ProductOf.Tumour)(b)]",
        "B(TP)[(ex ProductOf.(Tumour & AbnormalGrowthProcess))(b)]",
    ] {
        assert!(entails(&k, &parse_axiom(phi).unwrap()).unwrap(), "{phi}");
    }
    for phi in ["B(TP)[Tumour(b)]", "B(SN)[Tumour(b)]", "Colon(b)"] {
        assert!(!entails(&k, &parse_axiom(phi).unwrap()).unwrap(), "{phi}");
    }
    let both = parse_concept("B(SN)[Tumour & Process]").unwrap();
    assert!(!concept_satisfiable(&k, &both).unwrap());
    assert!(concept_satisfiable(&k, &parse_concept("Tumour").unwrap()).unwrap());
}

#[test]
fn clinic_risk() {
    let k = corpus("clinic.sel");
    let phi = parse_axiom("B(CL)[(ex AssociatedWith.ColonCancerRisk)(p1)]").unwrap();
    assert!(entails(&k, &phi).unwrap());
    let c = parse_concept("B(CL)[ex AssociatedWith.ColonCancerRisk]").unwrap();
    assert_eq!(instances(&k, &c).unwrap(), vec![name("p1")]);
}

#[test]
fn inconsistency_entails_everything() {
    let k = corpus("inconsistent.sel");
    assert!(!is_satisfiable(&k).unwrap());
    assert!(entails(&k, &parse_axiom("Top <: Bot").unwrap()).unwrap());
    assert!(entails(&k, &parse_axiom("s <= t").unwrap()).unwrap());
}

#[test]
fn instances_agree_with_entailment() {
    let k = corpus("example1.sel");
    let c = parse_concept("D(SN)[Tumour]").unwrap();
    let got = instances(&k, &c).unwrap();
    let expected: Vec<_> = ["a", "b", "p1"]
        .into_iter()
        .filter(|a| entails(&k, &parse_axiom(&format!("(D(SN)[Tumour])({a})")).unwrap()).unwrap())
        .map(name)
        .collect();
    assert_eq!(got, expected);
    assert_eq!(got, vec![name("b")]);
}

#[test]
fn entailment_agrees_with_the_oracle() {
    let cfg = GenConfig::default();
    let phi_cfg = GenConfig { max_axioms: 1, ..cfg.clone() };
    let bounds = SearchConfig::new(4, 4);
    let mut checked = 0;
    for seed in 0..200 {
        let k = random_kb(seed, &GenConfig { max_axioms: 4, ..cfg.clone() });
        let phi = random_kb(10_000 + seed, &phi_cfg).iter().next().unwrap().clone();
        let tableau = entails(&k, &phi).unwrap();
        let oracle = entails_within(&k, &phi, &bounds).unwrap();
        // A model refuting φ within the bounds is a real counter-model.
        assert!(oracle || !tableau, "seed {seed}: tableau entails but the oracle refutes");
        checked += 1;
    }
    assert_eq!(checked, 200);
}
