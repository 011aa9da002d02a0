use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use super::OracleError;
use crate::syntax::{Name, UNIVERSAL};

/// Interpretation of concept and role names at one precisification.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub concepts: BTreeMap<Name, BTreeSet<usize>>,
    pub roles: BTreeMap<Name, BTreeSet<(usize, usize)>>,
}

/// A finite standpoint structure `⟨Δ, Π, σ, γ⟩` with `Δ = 0..domain` and
/// `Π = 0..precisifications`. Individuals are rigid, so they are mapped once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandpointStructure {
    pub domain: usize,
    pub precisifications: usize,
    pub sigma: BTreeMap<Name, BTreeSet<usize>>,
    pub gamma: Vec<Interpretation>,
    pub individuals: BTreeMap<Name, usize>,
}

impl StandpointStructure {
    /// One element, the given number of precisifications, `σ(*) = Π` and all
    /// names empty.
    pub fn trivial(precisifications: usize) -> Self {
        let all: BTreeSet<usize> = (0..precisifications).collect();
        StandpointStructure {
            domain: 1,
            precisifications,
            sigma: [(crate::syntax::universal(), all)].into_iter().collect(),
            gamma: vec![Interpretation::default(); precisifications],
            individuals: BTreeMap::new(),
        }
    }

    /// Checks the structural requirements: non-empty Δ and Π, non-empty
    /// standpoint extensions inside Π, values inside Δ, and `σ(*) = Π` when
    /// `universal_is_everything` holds.
    pub fn validate(&self, universal_is_everything: bool) -> Result<(), OracleError> {
        let bad = |m: String| Err(OracleError::InvalidStructure(m));
        if self.domain == 0 || self.precisifications == 0 {
            return bad("the domain and the set of precisifications must be non-empty".into());
        }
        if self.gamma.len() != self.precisifications {
            return bad(format!("{} interpretations for {} precisifications", self.gamma.len(), self.precisifications));
        }
        for (s, ext) in &self.sigma {
            if ext.is_empty() {
                return bad(format!("standpoint {s} has an empty extension"));
            }
            if ext.iter().any(|&p| p >= self.precisifications) {
                return bad(format!("standpoint {s} mentions an unknown precisification"));
            }
        }
        match self.sigma.get(UNIVERSAL) {
            None => return bad("σ(*) is missing".into()),
            Some(ext) if universal_is_everything && ext.len() != self.precisifications => {
                return bad("σ(*) must be the set of all precisifications".into())
            }
            _ => {}
        }
        if self.individuals.values().any(|&d| d >= self.domain) {
            return bad("an individual is mapped outside the domain".into());
        }
        let first = &self.gamma[0];
        for g in &self.gamma {
            if !g.concepts.keys().eq(first.concepts.keys()) || !g.roles.keys().eq(first.roles.keys()) {
                return bad("interpretations disagree on their vocabulary".into());
            }
            if g.concepts.values().flatten().any(|&d| d >= self.domain)
                || g.roles.values().flatten().any(|&(d, e)| d >= self.domain || e >= self.domain)
            {
                return bad("an extension leaves the domain".into());
            }
        }
        Ok(())
    }

    pub fn sigma_of(&self, s: &str) -> Result<&BTreeSet<usize>, OracleError> {
        self.sigma.get(s).ok_or_else(|| OracleError::unknown("standpoint", s))
    }

    pub fn individual(&self, a: &str) -> Result<usize, OracleError> {
        self.individuals.get(a).copied().ok_or_else(|| OracleError::unknown("individual", a))
    }

    pub fn to_json(&self) -> Value {
        let sigma: BTreeMap<&str, &BTreeSet<usize>> = self.sigma.iter().map(|(k, v)| (&**k, v)).collect();
        let individuals: BTreeMap<&str, usize> = self.individuals.iter().map(|(k, v)| (&**k, *v)).collect();
        let gamma: Vec<Value> = self
            .gamma
            .iter()
            .map(|g| {
                let concepts: BTreeMap<&str, &BTreeSet<usize>> =
                    g.concepts.iter().map(|(k, v)| (&**k, v)).collect();
                let roles: BTreeMap<&str, Vec<[usize; 2]>> =
                    g.roles.iter().map(|(k, v)| (&**k, v.iter().map(|&(a, b)| [a, b]).collect())).collect();
                json!({ "concepts": concepts, "roles": roles })
            })
            .collect();
        json!({
            "domain": self.domain,
            "precisifications": self.precisifications,
            "sigma": sigma,
            "individuals": individuals,
            "extensions": gamma,
        })
    }
}
