use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Answer {
    Bool(bool),
    Names(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClashReport {
    pub element: String,
    pub variable: String,
}

/// Machine-readable result of one reasoning task.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub task: String,
    pub answer: Answer,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axiom: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule_applications: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clash: Option<ClashReport>,
}

impl Report {
    pub fn boolean(task: &str, answer: bool) -> Self {
        Report {
            task: task.to_string(),
            answer: Answer::Bool(answer),
            axiom: None,
            rule_applications: None,
            elements: None,
            clash: None,
        }
    }

    pub fn names(task: &str, names: Vec<String>) -> Self {
        Report { answer: Answer::Names(names), ..Report::boolean(task, false) }
    }
}

pub fn emit_json(report: &Report) -> String {
    serde_json::to_string(report).expect("reports always serialise")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sat_report() {
        let r = Report { rule_applications: Some(12), ..Report::boolean("sat", true) };
        assert_eq!(emit_json(&r), r#"{"task":"sat","answer":true,"ruleApplications":12}"#);
    }

    #[test]
    fn entails_report() {
        let r = Report { axiom: Some("B(TT)[Tumour(b)]".into()), ..Report::boolean("entails", true) };
        assert_eq!(emit_json(&r), r#"{"task":"entails","answer":true,"axiom":"B(TT)[Tumour(b)]"}"#);
    }

    #[test]
    fn instances_report() {
        let r = Report::names("instances", vec!["p1".into()]);
        assert_eq!(emit_json(&r), r#"{"task":"instances","answer":["p1"]}"#);
    }

    #[test]
    fn clash_report() {
        let r = Report {
            clash: Some(ClashReport { element: "eps_top".into(), variable: "x_*".into() }),
            ..Report::boolean("sat", false)
        };
        let v: serde_json::Value = serde_json::from_str(&emit_json(&r)).unwrap();
        assert_eq!(v["clash"]["variable"], "x_*");
    }
}
