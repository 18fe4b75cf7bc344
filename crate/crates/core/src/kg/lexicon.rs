//! Word-sense lexicon and gloss-overlap disambiguation.
//!
//! Each surface word maps to an ordered list of senses. A sense carries a
//! bag of signal words, the canonical concept it denotes, and the concepts
//! it rules out. Sense selection scores each candidate by the size of the
//! overlap between its gloss bag and the prompt context; ties go to the
//! earlier sense in lexicon order (the prior rank).

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One candidate meaning of a surface word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sense {
    pub id: String,
    pub gloss_bag: BTreeSet<String>,
    pub canonical_concept: String,
    #[serde(default)]
    pub excludes: Vec<String>,
}

/// Versioned sense inventory. Sense order within a word is the prior order
/// used for tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lexicon {
    pub version: String,
    pub words: BTreeMap<String, Vec<Sense>>,
}

const BUNDLED: &str = include_str!("../../assets/lexicon.json");

impl Lexicon {
    /// The lexicon shipped with the crate.
    pub fn bundled() -> Lexicon {
        let lex: Lexicon =
            serde_json::from_str(BUNDLED).expect("bundled lexicon must deserialize");
        debug_assert!(lex.validate().is_empty(), "bundled lexicon must validate");
        lex
    }

    pub fn from_json(text: &str) -> Result<Lexicon> {
        let lex: Lexicon = serde_json::from_str(text)?;
        let violations = lex.validate();
        if violations.is_empty() {
            Ok(lex)
        } else {
            Err(Error::Validation(violations))
        }
    }

    pub fn from_path(path: &Path) -> Result<Lexicon> {
        Lexicon::from_json(&std::fs::read_to_string(path)?)
    }

    /// Names every violated invariant; empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        for (word, senses) in &self.words {
            if senses.is_empty() {
                violations.push(format!("{word}: no senses"));
                continue;
            }
            let mut ids = BTreeSet::new();
            for sense in senses {
                if !ids.insert(sense.id.as_str()) {
                    violations.push(format!("{word}: duplicate sense id `{}`", sense.id));
                }
                if sense.gloss_bag.is_empty() {
                    violations.push(format!("{word}/{}: empty gloss bag", sense.id));
                }
                if sense.canonical_concept.is_empty() {
                    violations.push(format!("{word}/{}: empty canonical concept", sense.id));
                }
            }
            let known: BTreeSet<&str> = senses
                .iter()
                .flat_map(|s| [s.id.as_str(), s.canonical_concept.as_str()])
                .collect();
            for sense in senses {
                for excluded in &sense.excludes {
                    if !known.contains(excluded.as_str()) {
                        violations.push(format!(
                            "{word}/{}: exclude `{excluded}` is not a sense of this word",
                            sense.id
                        ));
                    }
                }
            }
        }
        violations
    }

    /// All senses registered for `word`; empty for unknown words, which are
    /// treated as unambiguous content words downstream.
    pub fn candidate_senses(&self, word: &str) -> &[Sense] {
        self.words.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Overlap between a sense's gloss bag and the context.
    pub fn overlap_score(sense: &Sense, context: &BTreeSet<String>) -> usize {
        sense
            .gloss_bag
            .iter()
            .filter(|w| context.contains(*w))
            .count()
    }

    /// Picks the contextually best sense of `word`: argmax of gloss-bag
    /// overlap, ties broken by lexicon order. The selection depends only on
    /// the ordering of overlap counts, so scaling all scores by a positive
    /// constant cannot change it.
    pub fn disambiguate(&self, word: &str, context: &BTreeSet<String>) -> Result<&Sense> {
        let candidates = self.candidate_senses(word);
        let mut best: Option<(&Sense, usize)> = None;
        for sense in candidates {
            let score = Self::overlap_score(sense, context);
            match best {
                Some((_, top)) if score <= top => {}
                _ => best = Some((sense, score)),
            }
        }
        best.map(|(s, _)| s)
            .ok_or_else(|| Error::NoSenses(word.to_string()))
    }
}
