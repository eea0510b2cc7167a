use std::collections::BTreeSet;

use serde::Serialize;

use super::{Edge, LatticeAnimal, Site};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SequenceClass {
    Invalid,
    CommutatorSequence,
    History,
}

/// Classify an ordered edge list.
///
/// A commutator sequence starts at the origin and every later edge touches a
/// site visited before it. A history additionally adds a new site with every
/// edge. The empty list is the history of length zero.
pub fn classify_sequence(edges: &[Edge]) -> SequenceClass {
    let Some(first) = edges.first() else {
        return SequenceClass::History;
    };
    let d = first.dim();
    if edges.iter().any(|e| e.dim() != d) || !(first.a().is_origin() || first.b().is_origin()) {
        return SequenceClass::Invalid;
    }
    let mut seen = BTreeSet::from([first.a(), first.b()]);
    let mut history = true;
    for e in &edges[1..] {
        let (ina, inb) = (seen.contains(&e.a()), seen.contains(&e.b()));
        if !ina && !inb {
            return SequenceClass::Invalid;
        }
        history &= ina != inb;
        seen.insert(e.a());
        seen.insert(e.b());
    }
    if history {
        SequenceClass::History
    } else {
        SequenceClass::CommutatorSequence
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSequence {
    d: usize,
    edges: Vec<Edge>,
    class: SequenceClass,
}

impl EdgeSequence {
    pub fn new(d: usize, edges: Vec<Edge>) -> Result<EdgeSequence> {
        Site::origin(d)?;
        if edges.iter().any(|e| e.dim() != d) {
            return Err(invalid(format!("edge of the wrong dimension in a {d}-dimensional sequence")));
        }
        let class = classify_sequence(&edges);
        Ok(EdgeSequence { d, edges, class })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn class(&self) -> SequenceClass {
        self.class
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_commutator_sequence(&self) -> bool {
        self.class != SequenceClass::Invalid
    }
}

/// The set of endpoints visited by a valid sequence; `{origin}` when empty.
pub fn animal_of(seq: &EdgeSequence) -> Result<LatticeAnimal> {
    if !seq.is_commutator_sequence() {
        return Err(invalid("animal_of needs a commutator sequence"));
    }
    let mut sites = vec![Site::origin(seq.d)?];
    for e in &seq.edges {
        sites.push(e.a());
        sites.push(e.b());
    }
    LatticeAnimal::new(sites)
}
