//! Direct evaluation of concepts and axioms in a standpoint structure.

use std::collections::BTreeSet;

use super::{OracleError, StandpointStructure};
use crate::syntax::{Axiom, Body, Concept, KnowledgeBase, Mode};

impl StandpointStructure {
    /// Extension of `c` at precisification `p`.
    pub fn eval_concept(&self, p: usize, c: &Concept) -> Result<BTreeSet<usize>, OracleError> {
        if p >= self.precisifications {
            return Err(OracleError::InvalidStructure(format!("no precisification {p}")));
        }
        Ok(self.ext(p, c)?.into_iter().enumerate().filter(|&(_, b)| b).map(|(d, _)| d).collect())
    }

    fn ext(&self, p: usize, c: &Concept) -> Result<Vec<bool>, OracleError> {
        let n = self.domain;
        Ok(match c {
            Concept::Top => vec![true; n],
            Concept::Bot => vec![false; n],
            Concept::Atom(a) => {
                let set = self.gamma[p].concepts.get(a).ok_or_else(|| OracleError::unknown("concept", a))?;
                (0..n).map(|d| set.contains(&d)).collect()
            }
            Concept::And(l, r) => {
                let l = self.ext(p, l)?;
                let r = self.ext(p, r)?;
                l.iter().zip(&r).map(|(a, b)| *a && *b).collect()
            }
            Concept::Exists(role, filler) => {
                let f = self.ext(p, filler)?;
                let rel = self.gamma[p].roles.get(role).ok_or_else(|| OracleError::unknown("role", role))?;
                let mut out = vec![false; n];
                for &(d, e) in rel {
                    if f[e] {
                        out[d] = true;
                    }
                }
                out
            }
            Concept::Modal(m, inner) => {
                let ps = self.sigma_of(&m.standpoint)?;
                let mut out = vec![m.mode == Mode::Box; n];
                for &q in ps {
                    let e = self.ext(q, inner)?;
                    for d in 0..n {
                        out[d] = match m.mode {
                            Mode::Box => out[d] && e[d],
                            Mode::Diamond => out[d] || e[d],
                        };
                    }
                }
                out
            }
        })
    }

    fn body_holds(&self, p: usize, body: &Body) -> Result<bool, OracleError> {
        Ok(match body {
            Body::Gci { lhs, rhs } => {
                let l = self.ext(p, lhs)?;
                let r = self.ext(p, rhs)?;
                l.iter().zip(&r).all(|(a, b)| !a || *b)
            }
            Body::ConceptAssertion { concept, individual } => {
                let d = self.individual(individual)?;
                self.ext(p, concept)?[d]
            }
            Body::RoleAssertion { role, subject, object } => {
                let pair = (self.individual(subject)?, self.individual(object)?);
                let rel = self.gamma[p].roles.get(role).ok_or_else(|| OracleError::unknown("role", role))?;
                rel.contains(&pair)
            }
        })
    }

    pub fn satisfies_axiom(&self, ax: &Axiom) -> Result<bool, OracleError> {
        match ax {
            Axiom::Sharpening { lower, upper } => Ok(self.sigma_of(lower)?.is_subset(self.sigma_of(upper)?)),
            Axiom::Modal { body, modality } => {
                let ps = self.sigma_of(&modality.standpoint)?;
                let mut holds = Vec::with_capacity(ps.len());
                for &p in ps {
                    holds.push(self.body_holds(p, body)?);
                }
                Ok(match modality.mode {
                    Mode::Box => holds.iter().all(|&h| h),
                    Mode::Diamond => holds.iter().any(|&h| h),
                })
            }
        }
    }

    pub fn satisfies(&self, kb: &KnowledgeBase) -> Result<bool, OracleError> {
        for ax in kb {
            if !self.satisfies_axiom(ax)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Interpretation;
    use crate::syntax::name;
    use crate::textio::{parse_concept, parse_kb};

    fn two_precisifications() -> StandpointStructure {
        let mut s = StandpointStructure::trivial(2);
        s.domain = 2;
        s.sigma.insert(name("s"), [0, 1].into());
        let mut g0 = Interpretation::default();
        g0.concepts.insert(name("A"), [1].into());
        g0.concepts.insert(name("C"), [1].into());
        g0.roles.insert(name("R"), [(0, 1)].into());
        let mut g1 = Interpretation::default();
        g1.concepts.insert(name("A"), BTreeSet::new());
        g1.concepts.insert(name("C"), [1].into());
        g1.roles.insert(name("R"), BTreeSet::new());
        s.gamma = vec![g0, g1];
        s.validate(true).unwrap();
        s
    }

    #[test]
    fn top_is_domain() {
        let s = two_precisifications();
        assert_eq!(s.eval_concept(0, &Concept::Top).unwrap(), [0, 1].into());
    }

    #[test]
    fn modal_concepts() {
        let s = two_precisifications();
        for p in 0..2 {
            assert_eq!(s.eval_concept(p, &parse_concept("D(s)[A]").unwrap()).unwrap(), [1].into());
            assert_eq!(s.eval_concept(p, &parse_concept("B(s)[A]").unwrap()).unwrap(), BTreeSet::new());
        }
    }

    #[test]
    fn existential() {
        let s = two_precisifications();
        assert_eq!(s.eval_concept(0, &parse_concept("ex R.C").unwrap()).unwrap(), [0].into());
        assert_eq!(s.eval_concept(1, &parse_concept("ex R.C").unwrap()).unwrap(), BTreeSet::new());
    }

    #[test]
    fn unknown_names() {
        let s = two_precisifications();
        assert!(s.eval_concept(0, &Concept::atom("Z")).is_err());
        assert!(s.satisfies(&parse_kb("B(t)[A <: C];").unwrap()).is_err());
    }

    #[test]
    fn satisfaction() {
        let s = two_precisifications();
        assert!(s.satisfies(&KnowledgeBase::new()).unwrap());
        assert!(s.satisfies(&parse_kb("B(s)[A <: C]; s <= *; * <= s;").unwrap()).unwrap());
        assert!(!s.satisfies(&parse_kb("B(s)[C <: A];").unwrap()).unwrap());
        assert!(s.satisfies(&parse_kb("D(s)[C <: A];").unwrap()).unwrap());
        assert!(!s.satisfies(&parse_kb("Top <: Bot;").unwrap()).unwrap());
    }

    #[test]
    fn tumour_structure() {
        let mut s = StandpointStructure::trivial(1);
        s.sigma.insert(name("TT"), [0].into());
        s.gamma[0].concepts.insert(name("Tumour"), [0].into());
        s.gamma[0].concepts.insert(name("Tissue"), [0].into());
        assert!(s.satisfies(&parse_kb("B(TT)[Tumour <: Tissue]; TT <= *;").unwrap()).unwrap());
    }

    #[test]
    fn validation() {
        let mut s = StandpointStructure::trivial(2);
        s.sigma.insert(name("*"), [0].into());
        assert!(s.validate(true).is_err());
        assert!(s.validate(false).is_ok());
        s.sigma.insert(name("s"), BTreeSet::new());
        assert!(s.validate(false).is_err());
    }
}
