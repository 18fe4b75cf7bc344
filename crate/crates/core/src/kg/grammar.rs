//! Deterministic triplet-extraction grammar.
//!
//! An ordered set of rewrite rules over the token stream:
//!   1. resolved senses emit identity and negative-constraint triplets,
//!   2. attribute phrases ("embroidered with ...") bind merged values,
//!   3. spatial prepositions link subject and object nouns,
//!   4. leftover "with" emits a scene-level containment,
//!   5. copulas link a subject to an object concept,
//!   6. adjective runs before a noun become attribute triplets, with color
//!      adjectives merged into a following material ("black velvet" ->
//!      black_velvet).
//!
//! Unmatched fragments are dropped. Everything is pure and deterministic.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Triplet, TripletGroupKind, TripletGroups};
use crate::kg::lexicon::Sense;

/// Lowercase, punctuation-stripped, order-preserving tokens.
pub fn tokenize(prompt: &str) -> Vec<String> {
    prompt
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeClass {
    Color,
    Material,
    Generic,
}

impl AttributeClass {
    fn predicate(self) -> &'static str {
        match self {
            AttributeClass::Color => "has_color",
            AttributeClass::Material => "has_material",
            AttributeClass::Generic => "has_attribute",
        }
    }
}

/// Rule tables for the extraction passes.
#[derive(Debug, Clone)]
pub struct Grammar {
    pub stop_words: BTreeSet<String>,
    pub adjective_classes: BTreeMap<String, AttributeClass>,
    /// multi-token surface forms merged into a single node token
    pub compound_nouns: Vec<(Vec<String>, String)>,
    /// phrase -> predicate; the value tokens after the phrase are consumed
    pub attribute_phrases: Vec<(Vec<String>, String)>,
    /// phrase -> predicate; only the preposition tokens are consumed
    pub spatial_predicates: Vec<(Vec<String>, String)>,
    pub copulas: BTreeSet<String>,
    /// participles and other verb forms that never become nodes
    pub non_nominal: BTreeSet<String>,
}

fn words(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn phrase(p: &str, pred: &str) -> (Vec<String>, String) {
    (
        p.split_whitespace().map(str::to_string).collect(),
        pred.to_string(),
    )
}

impl Grammar {
    /// The rule set shipped with the crate.
    pub fn bundled() -> Grammar {
        let mut adjective_classes = BTreeMap::new();
        for color in ["black", "white", "red", "blue", "green", "golden", "silver"] {
            adjective_classes.insert(color.to_string(), AttributeClass::Color);
        }
        for material in ["velvet", "copper", "silk", "leather", "wooden", "iron", "steel", "pearl"] {
            adjective_classes.insert(material.to_string(), AttributeClass::Material);
        }
        for generic in ["heavy", "weathered", "shimmering", "old", "large", "small", "bright", "ancient"] {
            adjective_classes.insert(generic.to_string(), AttributeClass::Generic);
        }
        let mut spatial: Vec<(Vec<String>, String)> = vec![
            phrase("draped over", "draped_over"),
            phrase("perched on", "perched_on"),
        ];
        for single in ["over", "on", "under", "above", "below", "beside", "near", "behind"] {
            spatial.push(phrase(single, single));
        }
        Grammar {
            stop_words: words(&[
                "a", "an", "the", "with", "many", "some", "several", "few", "and", "of",
                "very", "its", "their",
            ]),
            adjective_classes,
            compound_nouns: vec![
                phrase("armor stand", "armor_stand"),
                phrase("pearl stars", "pearl_stars"),
            ],
            attribute_phrases: vec![
                phrase("embroidered with", "has_embroidery"),
                phrase("adorned with", "has_adornment"),
                phrase("made of", "has_material"),
            ],
            spatial_predicates: spatial,
            copulas: words(&["is", "are"]),
            non_nominal: words(&[
                "draped", "embroidered", "adorned", "made", "perched", "placed", "covered",
            ]),
        }
    }

    fn is_spatial_word(&self, token: &str) -> bool {
        self.spatial_predicates
            .iter()
            .any(|(seq, _)| seq.iter().any(|t| t == token))
    }

    fn is_content_noun(&self, token: &str) -> bool {
        !self.stop_words.contains(token)
            && !self.adjective_classes.contains_key(token)
            && !self.copulas.contains(token)
            && !self.non_nominal.contains(token)
            && !self.is_spatial_word(token)
    }

    /// Replaces multi-token surface forms by their merged node token,
    /// longest form first.
    pub fn merge_compounds(&self, tokens: &[String]) -> Vec<String> {
        let mut compounds = self.compound_nouns.clone();
        compounds.sort_by_key(|(seq, _)| std::cmp::Reverse(seq.len()));
        let mut out = Vec::with_capacity(tokens.len());
        let mut i = 0;
        'outer: while i < tokens.len() {
            for (seq, merged) in &compounds {
                if tokens[i..].starts_with(seq.as_slice()) {
                    out.push(merged.clone());
                    i += seq.len();
                    continue 'outer;
                }
            }
            out.push(tokens[i].clone());
            i += 1;
        }
        out
    }
}

/// Senses resolved per surface word, keyed by the word.
pub type ResolvedSenses = BTreeMap<String, Sense>;

fn match_at(tokens: &[String], consumed: &[bool], i: usize, seq: &[String]) -> bool {
    i + seq.len() <= tokens.len()
        && tokens[i..i + seq.len()] == *seq
        && consumed[i..i + seq.len()].iter().all(|c| !c)
}

fn preceding_noun(
    grammar: &Grammar,
    tokens: &[String],
    consumed: &[bool],
    before: usize,
) -> Option<usize> {
    (0..before)
        .rev()
        .find(|&j| !consumed[j] && grammar.is_content_noun(&tokens[j]))
}

fn following_noun(
    grammar: &Grammar,
    tokens: &[String],
    consumed: &[bool],
    from: usize,
) -> Option<usize> {
    (from..tokens.len()).find(|&j| !consumed[j] && grammar.is_content_noun(&tokens[j]))
}

/// Applies the ordered rewrite rules and returns the extracted triplets.
pub fn extract_triplets(
    tokens: &[String],
    senses: &ResolvedSenses,
    grammar: &Grammar,
) -> Vec<Triplet> {
    let tokens = grammar.merge_compounds(tokens);
    let mut consumed = vec![false; tokens.len()];
    let mut out = Vec::new();

    // 1. resolved senses: identity plus negative constraints, once per word
    let mut seen = BTreeSet::new();
    for token in &tokens {
        if let Some(sense) = senses.get(token) {
            if seen.insert(token.clone()) {
                out.push(Triplet::new(token, "is", &sense.canonical_concept));
                for excluded in &sense.excludes {
                    out.push(Triplet::new(token, "not_instance_of", excluded));
                }
            }
        }
    }

    // 2. attribute phrases: value = adjective run + noun, all consumed
    let mut attr_phrases = grammar.attribute_phrases.clone();
    attr_phrases.sort_by_key(|(seq, _)| std::cmp::Reverse(seq.len()));
    for i in 0..tokens.len() {
        for (seq, predicate) in &attr_phrases {
            if !match_at(&tokens, &consumed, i, seq) {
                continue;
            }
            let Some(subject) = preceding_noun(grammar, &tokens, &consumed, i) else {
                continue;
            };
            let mut j = i + seq.len();
            let mut value_parts = Vec::new();
            while j < tokens.len()
                && !consumed[j]
                && grammar.adjective_classes.contains_key(&tokens[j])
            {
                value_parts.push(tokens[j].clone());
                j += 1;
            }
            // the value may end in a compound noun rather than an adjective
            if j < tokens.len() && !consumed[j] && grammar.is_content_noun(&tokens[j]) {
                value_parts.push(tokens[j].clone());
            } else if value_parts.is_empty() {
                continue;
            } else {
                j -= 1;
            }
            out.push(Triplet::new(
                &tokens[subject],
                predicate,
                &value_parts.join("_"),
            ));
            for c in consumed.iter_mut().take(j + 1).skip(i) {
                *c = true;
            }
            break;
        }
    }

    // 3. spatial prepositions: link nouns, consume only the preposition
    let mut spatial = grammar.spatial_predicates.clone();
    spatial.sort_by_key(|(seq, _)| std::cmp::Reverse(seq.len()));
    for i in 0..tokens.len() {
        for (seq, predicate) in &spatial {
            if !match_at(&tokens, &consumed, i, seq) {
                continue;
            }
            let subject = preceding_noun(grammar, &tokens, &consumed, i);
            let object = following_noun(grammar, &tokens, &consumed, i + seq.len());
            if let (Some(s), Some(o)) = (subject, object) {
                out.push(Triplet::new(&tokens[s], predicate, &tokens[o]));
                for c in consumed.iter_mut().take(i + seq.len()).skip(i) {
                    *c = true;
                }
            }
            break;
        }
    }

    // 4. leftover "with": scene-level containment
    for i in 0..tokens.len() {
        if consumed[i] || tokens[i] != "with" {
            continue;
        }
        if let Some(o) = following_noun(grammar, &tokens, &consumed, i + 1) {
            out.push(Triplet::new("scene", "contains", &tokens[o]));
            consumed[i] = true;
        }
    }

    // 5. copulas: subject is object-concept
    for i in 0..tokens.len() {
        if consumed[i] || !grammar.copulas.contains(&tokens[i]) {
            continue;
        }
        let subject = preceding_noun(grammar, &tokens, &consumed, i);
        let object = following_noun(grammar, &tokens, &consumed, i + 1);
        if let (Some(s), Some(o)) = (subject, object) {
            let concept = senses
                .get(&tokens[o])
                .map(|sense| sense.canonical_concept.clone())
                .unwrap_or_else(|| tokens[o].clone());
            out.push(Triplet::new(&tokens[s], "is", &concept));
            consumed[i] = true;
        }
    }

    // 6. adjective runs before each remaining noun
    for i in 0..tokens.len() {
        if consumed[i] || !grammar.is_content_noun(&tokens[i]) {
            continue;
        }
        let mut start = i;
        while start > 0
            && !consumed[start - 1]
            && grammar.adjective_classes.contains_key(&tokens[start - 1])
        {
            start -= 1;
        }
        if start == i {
            continue;
        }
        let run: Vec<(usize, AttributeClass)> = (start..i)
            .map(|j| (j, grammar.adjective_classes[&tokens[j]]))
            .collect();
        let mut used = vec![false; run.len()];
        // materials absorb contiguous preceding colors, rightmost first
        for r in (0..run.len()).rev() {
            if used[r] || run[r].1 != AttributeClass::Material {
                continue;
            }
            let mut parts = vec![tokens[run[r].0].clone()];
            let mut l = r;
            while l > 0 && !used[l - 1] && run[l - 1].1 == AttributeClass::Color {
                l -= 1;
                parts.insert(0, tokens[run[l].0].clone());
            }
            for u in used.iter_mut().take(r + 1).skip(l) {
                *u = true;
            }
            out.push(Triplet::new(&tokens[i], "has_material", &parts.join("_")));
        }
        for (slot, (j, class)) in run.iter().enumerate() {
            if !used[slot] {
                out.push(Triplet::new(&tokens[i], class.predicate(), &tokens[*j]));
            }
        }
        for (j, _) in &run {
            consumed[*j] = true;
        }
    }

    out
}

/// Maps predicates to the four semantic groups.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredicateVocabulary {
    pub id: BTreeSet<String>,
    pub rel: BTreeSet<String>,
    pub attr: BTreeSet<String>,
    pub neg: BTreeSet<String>,
}

impl Default for PredicateVocabulary {
    fn default() -> Self {
        PredicateVocabulary {
            id: words(&["is", "instance_of", "same_as"]),
            rel: words(&[
                "draped_over", "perched_on", "over", "on", "under", "above", "below",
                "beside", "near", "behind", "contains", "holds",
            ]),
            attr: words(&[
                "has_attribute", "has_color", "has_material", "has_embroidery",
                "has_adornment",
            ]),
            neg: words(&["not_instance_of", "not_attribute", "not_has_material", "not_has_color"]),
        }
    }
}

impl PredicateVocabulary {
    /// Group of a known predicate, or `None` for unknown ones.
    pub fn group_of(&self, predicate: &str) -> Option<TripletGroupKind> {
        if self.id.contains(predicate) {
            Some(TripletGroupKind::Id)
        } else if self.rel.contains(predicate) {
            Some(TripletGroupKind::Rel)
        } else if self.attr.contains(predicate) {
            Some(TripletGroupKind::Attr)
        } else if self.neg.contains(predicate) {
            Some(TripletGroupKind::Neg)
        } else {
            None
        }
    }

    pub fn is_known(&self, predicate: &str) -> bool {
        self.group_of(predicate).is_some()
    }

    /// Predicates of attribute flavor among the negative vocabulary
    /// ("not_attribute", "not_" + attribute predicate).
    pub fn is_attribute_negation(&self, predicate: &str) -> bool {
        predicate == "not_attribute"
            || predicate
                .strip_prefix("not_")
                .is_some_and(|rest| self.attr.contains(rest))
    }
}

/// Partitions triplets into the four groups; duplicates are dropped,
/// unknown predicates default to the relational group.
pub fn group_triplets(triplets: &[Triplet], vocab: &PredicateVocabulary) -> TripletGroups {
    let mut groups = TripletGroups::default();
    let mut seen = BTreeSet::new();
    for triplet in triplets {
        if !seen.insert(triplet.clone()) {
            continue;
        }
        let kind = vocab
            .group_of(&triplet.predicate)
            .unwrap_or(TripletGroupKind::Rel);
        groups.group_mut(kind).push(triplet.clone());
    }
    groups
}
