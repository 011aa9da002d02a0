use std::collections::HashSet;

use crate::syntax::{name, Name, Vocabulary, RESERVED_PREFIX};

/// Deterministic supply of names that do not occur in a given vocabulary.
///
/// Each supply is local to one transformation; two supplies built from the same
/// vocabulary hand out the same sequence of names.
#[derive(Clone, Debug)]
pub struct FreshNames {
    used: HashSet<Name>,
    next: usize,
}

impl FreshNames {
    pub fn avoiding(vocab: &Vocabulary) -> Self {
        FreshNames { used: vocab.all_names().cloned().collect(), next: 0 }
    }

    pub fn avoid(&mut self, vocab: &Vocabulary) {
        self.used.extend(vocab.all_names().cloned());
    }

    fn make(&mut self, kind: &str) -> Name {
        loop {
            let candidate = name(&format!("{RESERVED_PREFIX}{kind}{}", self.next));
            self.next += 1;
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
        }
    }

    pub fn concept(&mut self) -> Name {
        self.make("A")
    }

    pub fn standpoint(&mut self) -> Name {
        self.make("S")
    }

    pub fn role(&mut self) -> Name {
        self.make("R")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_names_in_use() {
        let mut vocab = Vocabulary::default();
        vocab.concepts.insert(name("__fA0"));
        let mut fresh = FreshNames::avoiding(&vocab);
        assert_eq!(&*fresh.concept(), "__fA1");
        assert_eq!(&*fresh.standpoint(), "__fS2");
        assert_eq!(&*fresh.role(), "__fR3");
    }

    #[test]
    fn deterministic() {
        let vocab = Vocabulary::default();
        let mut a = FreshNames::avoiding(&vocab);
        let mut b = FreshNames::avoiding(&vocab);
        for _ in 0..5 {
            assert_eq!(a.concept(), b.concept());
        }
    }
}
