//! Prompt semantics as a disambiguated, four-group knowledge graph.

pub mod grammar;
pub mod lexicon;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use grammar::{extract_triplets, group_triplets, tokenize, Grammar, PredicateVocabulary, ResolvedSenses};
use lexicon::Lexicon;

/// Subject-predicate-object statement.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triplet {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

impl Triplet {
    pub fn new(
        subject: impl Into<String>,
        predicate: impl Into<String>,
        object: impl Into<String>,
    ) -> Self {
        Triplet {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }
}

impl std::fmt::Display for Triplet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.subject, self.predicate, self.object)
    }
}

/// The four semantic groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripletGroupKind {
    Id,
    Rel,
    Attr,
    Neg,
}

impl TripletGroupKind {
    pub const ALL: [TripletGroupKind; 4] = [
        TripletGroupKind::Id,
        TripletGroupKind::Rel,
        TripletGroupKind::Attr,
        TripletGroupKind::Neg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TripletGroupKind::Id => "id",
            TripletGroupKind::Rel => "rel",
            TripletGroupKind::Attr => "attr",
            TripletGroupKind::Neg => "neg",
        }
    }
}

/// Triplets partitioned into identity, relation, attribute, and negative
/// constraint groups. The groups are disjoint and jointly exhaustive over
/// the grouped triplets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripletGroups {
    pub t_id: Vec<Triplet>,
    pub t_rel: Vec<Triplet>,
    pub t_attr: Vec<Triplet>,
    pub t_neg: Vec<Triplet>,
}

impl TripletGroups {
    pub fn group(&self, kind: TripletGroupKind) -> &[Triplet] {
        match kind {
            TripletGroupKind::Id => &self.t_id,
            TripletGroupKind::Rel => &self.t_rel,
            TripletGroupKind::Attr => &self.t_attr,
            TripletGroupKind::Neg => &self.t_neg,
        }
    }

    pub fn group_mut(&mut self, kind: TripletGroupKind) -> &mut Vec<Triplet> {
        match kind {
            TripletGroupKind::Id => &mut self.t_id,
            TripletGroupKind::Rel => &mut self.t_rel,
            TripletGroupKind::Attr => &mut self.t_attr,
            TripletGroupKind::Neg => &mut self.t_neg,
        }
    }

    pub fn len(&self) -> usize {
        TripletGroupKind::ALL
            .iter()
            .map(|&k| self.group(k).len())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn all_triplets(&self) -> impl Iterator<Item = &Triplet> {
        TripletGroupKind::ALL
            .into_iter()
            .flat_map(move |k| self.group(k).iter())
    }

    /// Copy with one group removed (ablation arms).
    pub fn without(&self, kind: TripletGroupKind) -> TripletGroups {
        let mut out = self.clone();
        out.group_mut(kind).clear();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
}

/// What role a node plays, derived from the predicates that introduced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Entity,
    Concept,
    Attribute,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub s: String,
    pub p: String,
    pub o: String,
    pub polarity: Polarity,
}

/// Nodes and polarized edges; edges are kept sorted and deduplicated so the
/// graph has one canonical form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeGraph {
    pub nodes: BTreeSet<String>,
    pub edges: Vec<Edge>,
}

/// Builds the graph from triplets: nodes are all subjects and objects,
/// edges carry negative polarity exactly when the predicate belongs to the
/// negative vocabulary. Duplicate triplets collapse to one edge.
pub fn build_graph(triplets: &[Triplet], vocab: &PredicateVocabulary) -> KnowledgeGraph {
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for t in triplets {
        nodes.insert(t.subject.clone());
        nodes.insert(t.object.clone());
        let polarity = match vocab.group_of(&t.predicate) {
            Some(TripletGroupKind::Neg) => Polarity::Negative,
            _ => Polarity::Positive,
        };
        edges.insert(Edge {
            s: t.subject.clone(),
            p: t.predicate.clone(),
            o: t.object.clone(),
            polarity,
        });
    }
    KnowledgeGraph {
        nodes,
        edges: edges.into_iter().collect(),
    }
}

impl KnowledgeGraph {
    /// Node role by introducing predicate: objects of attribute predicates
    /// are attributes, objects of identity or negative predicates are
    /// concepts, everything else (subjects, relation objects) is an entity.
    pub fn node_kind(&self, node: &str, vocab: &PredicateVocabulary) -> Option<NodeKind> {
        if !self.nodes.contains(node) {
            return None;
        }
        let mut kind = None;
        for edge in &self.edges {
            if edge.o == node {
                match vocab.group_of(&edge.p) {
                    Some(TripletGroupKind::Attr) => return Some(NodeKind::Attribute),
                    Some(TripletGroupKind::Id) | Some(TripletGroupKind::Neg) => {
                        kind = Some(NodeKind::Concept);
                    }
                    _ => kind = kind.or(Some(NodeKind::Entity)),
                }
            }
            if edge.s == node {
                kind = kind.or(Some(NodeKind::Entity));
            }
        }
        kind.or(Some(NodeKind::Entity))
    }

    pub fn negative_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.polarity == Polarity::Negative)
    }
}

/// Serialized form of a graph plus its grouped triplets. Keys and arrays
/// are in deterministic sorted order so exports are byte-stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub edges: Vec<Edge>,
    pub groups: BTreeMap<String, Vec<Triplet>>,
    pub nodes: Vec<String>,
    pub version: String,
}

pub const GRAPH_DOCUMENT_VERSION: &str = "1";

/// Stable-ordered structured document for a graph and its groups.
pub fn export_graph(graph: &KnowledgeGraph, groups: &TripletGroups) -> String {
    let mut doc_groups = BTreeMap::new();
    for kind in TripletGroupKind::ALL {
        let mut list = groups.group(kind).to_vec();
        list.sort();
        doc_groups.insert(kind.name().to_string(), list);
    }
    let doc = GraphDocument {
        edges: graph.edges.clone(),
        groups: doc_groups,
        nodes: graph.nodes.iter().cloned().collect(),
        version: GRAPH_DOCUMENT_VERSION.to_string(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("graph document serializes");
    text.push('\n');
    text
}

/// Parses a document produced by [`export_graph`].
pub fn parse_graph_document(text: &str) -> Result<(KnowledgeGraph, TripletGroups)> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    if doc.version != GRAPH_DOCUMENT_VERSION {
        return Err(Error::Validation(vec![format!(
            "unsupported graph document version `{}`",
            doc.version
        )]));
    }
    let graph = KnowledgeGraph {
        nodes: doc.nodes.into_iter().collect(),
        edges: doc.edges,
    };
    for edge in &graph.edges {
        if !graph.nodes.contains(&edge.s) || !graph.nodes.contains(&edge.o) {
            return Err(Error::Validation(vec![format!(
                "edge ({}, {}, {}) references a missing node",
                edge.s, edge.p, edge.o
            )]));
        }
    }
    let mut groups = TripletGroups::default();
    for kind in TripletGroupKind::ALL {
        if let Some(list) = doc.groups.get(kind.name()) {
            *groups.group_mut(kind) = list.clone();
        }
    }
    Ok((graph, groups))
}

/// Everything derived from one prompt.
#[derive(Debug, Clone)]
pub struct PromptAnalysis {
    pub tokens: Vec<String>,
    pub senses: ResolvedSenses,
    pub triplets: Vec<Triplet>,
    pub groups: TripletGroups,
    pub graph: KnowledgeGraph,
}

/// Full pipeline: tokenize, disambiguate every lexicon word against the
/// rest of the prompt, extract, group, and build the graph.
pub fn analyze_prompt(
    prompt: &str,
    lexicon: &Lexicon,
    grammar: &Grammar,
    vocab: &PredicateVocabulary,
) -> Result<PromptAnalysis> {
    let tokens = tokenize(prompt);
    let mut senses = ResolvedSenses::new();
    for token in &tokens {
        if senses.contains_key(token) || lexicon.candidate_senses(token).is_empty() {
            continue;
        }
        let context: BTreeSet<String> = tokens.iter().filter(|t| *t != token).cloned().collect();
        let sense = lexicon.disambiguate(token, &context)?.clone();
        senses.insert(token.clone(), sense);
    }
    let triplets = extract_triplets(&tokens, &senses, grammar);
    let groups = group_triplets(&triplets, vocab);
    let graph = build_graph(&triplets, vocab);
    Ok(PromptAnalysis {
        tokens,
        senses,
        triplets,
        groups,
        graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bank_analysis() -> PromptAnalysis {
        analyze_prompt(
            "A bank with many birds",
            &Lexicon::bundled(),
            &Grammar::bundled(),
            &PredicateVocabulary::default(),
        )
        .unwrap()
    }

    #[test]
    fn empty_graph_from_no_triplets() {
        let g = build_graph(&[], &PredicateVocabulary::default());
        assert!(g.nodes.is_empty());
        assert!(g.edges.is_empty());
    }

    #[test]
    fn bank_graph_counts() {
        let analysis = bank_analysis();
        let g = &analysis.graph;
        // nodes: bank, riverbank, financial_institution, scene, birds
        assert_eq!(g.nodes.len(), 5);
        assert_eq!(g.negative_edges().count(), 1);
        let neg = g.negative_edges().next().unwrap();
        assert_eq!((neg.s.as_str(), neg.o.as_str()), ("bank", "financial_institution"));
    }

    #[test]
    fn duplicate_triplets_collapse() {
        let t = Triplet::new("a", "is", "b");
        let g = build_graph(&[t.clone(), t.clone()], &PredicateVocabulary::default());
        assert_eq!(g.edges.len(), 1);
    }

    #[test]
    fn every_edge_endpoint_is_a_node() {
        let analysis = bank_analysis();
        for edge in &analysis.graph.edges {
            assert!(analysis.graph.nodes.contains(&edge.s));
            assert!(analysis.graph.nodes.contains(&edge.o));
        }
    }

    #[test]
    fn negative_edges_match_neg_group() {
        let analysis = bank_analysis();
        let neg_from_groups: BTreeSet<_> = analysis
            .groups
            .t_neg
            .iter()
            .map(|t| (t.subject.clone(), t.predicate.clone(), t.object.clone()))
            .collect();
        let neg_from_graph: BTreeSet<_> = analysis
            .graph
            .negative_edges()
            .map(|e| (e.s.clone(), e.p.clone(), e.o.clone()))
            .collect();
        assert_eq!(neg_from_groups, neg_from_graph);
    }

    #[test]
    fn node_kinds_by_introducing_predicate() {
        let vocab = PredicateVocabulary::default();
        let triplets = vec![
            Triplet::new("cloak", "is", "garment_cloak"),
            Triplet::new("cloak", "has_material", "black_velvet"),
            Triplet::new("cloak", "draped_over", "armor_stand"),
        ];
        let g = build_graph(&triplets, &vocab);
        assert_eq!(g.node_kind("cloak", &vocab), Some(NodeKind::Entity));
        assert_eq!(g.node_kind("garment_cloak", &vocab), Some(NodeKind::Concept));
        assert_eq!(g.node_kind("black_velvet", &vocab), Some(NodeKind::Attribute));
        assert_eq!(g.node_kind("armor_stand", &vocab), Some(NodeKind::Entity));
        assert_eq!(g.node_kind("absent", &vocab), None);
    }

    #[test]
    fn export_empty_graph() {
        let doc = export_graph(&KnowledgeGraph::default(), &TripletGroups::default());
        let (graph, groups) = parse_graph_document(&doc).unwrap();
        assert!(graph.nodes.is_empty());
        assert!(graph.edges.is_empty());
        assert!(groups.is_empty());
    }

    #[test]
    fn export_round_trips_and_is_stable() {
        let analysis = bank_analysis();
        let doc = export_graph(&analysis.graph, &analysis.groups);
        let (graph, groups) = parse_graph_document(&doc).unwrap();
        assert_eq!(graph, analysis.graph);
        let doc2 = export_graph(&graph, &groups);
        assert_eq!(doc, doc2);
        // four named group arrays present
        for name in ["\"id\"", "\"rel\"", "\"attr\"", "\"neg\""] {
            assert!(doc.contains(name), "missing group key {name}");
        }
    }

    #[test]
    fn determinism_same_inputs_same_bytes() {
        let a = bank_analysis();
        let b = bank_analysis();
        assert_eq!(a.groups, b.groups);
        assert_eq!(
            export_graph(&a.graph, &a.groups),
            export_graph(&b.graph, &b.groups)
        );
    }
}
