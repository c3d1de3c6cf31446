//! Variable contexts: ordered variable names with one or two integer weight vectors.
//!
//! A context fixes the ambient polynomial ring once and for all: the variable order,
//! the grading weights, and (optionally) a second grading. Contexts are immutable
//! after construction and are shared by reference-counted pointer; two contexts are
//! interchangeable when they are structurally equal.

use std::sync::Arc;

/// Ordered variable list with a primary weight per variable and an optional second
/// weight vector (bigrading).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableContext {
    names: Vec<String>,
    weight1: Vec<i64>,
    weight2: Option<Vec<i64>>,
}

impl VariableContext {
    /// Singly graded context from (name, weight) pairs.
    pub fn new(vars: &[(&str, i64)]) -> Arc<Self> {
        let names: Vec<String> = vars.iter().map(|(n, _)| n.to_string()).collect();
        assert_unique(&names);
        Arc::new(Self {
            names,
            weight1: vars.iter().map(|&(_, w)| w).collect(),
            weight2: None,
        })
    }

    /// Bigraded context from (name, weight1, weight2) triples.
    pub fn new_bigraded(vars: &[(&str, i64, i64)]) -> Arc<Self> {
        let names: Vec<String> = vars.iter().map(|(n, _, _)| n.to_string()).collect();
        assert_unique(&names);
        Arc::new(Self {
            names,
            weight1: vars.iter().map(|&(_, w, _)| w).collect(),
            weight2: Some(vars.iter().map(|&(_, _, w)| w).collect()),
        })
    }

    /// Number of variables.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// True when the context has no variables.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Variable name at `i`.
    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// All variable names in order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of a variable by name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Primary weight vector.
    pub fn weights1(&self) -> &[i64] {
        &self.weight1
    }

    /// Second weight vector, when bigraded.
    pub fn weights2(&self) -> Option<&[i64]> {
        self.weight2.as_deref()
    }

    /// True when a second grading is present.
    pub fn is_bigraded(&self) -> bool {
        self.weight2.is_some()
    }

    /// Primary degree of an exponent vector.
    pub fn degree1(&self, exps: &[u32]) -> i64 {
        dot(exps, &self.weight1)
    }

    /// Second degree of an exponent vector; `None` when singly graded.
    pub fn degree2(&self, exps: &[u32]) -> Option<i64> {
        self.weight2.as_ref().map(|w| dot(exps, w))
    }
}

fn dot(exps: &[u32], weights: &[i64]) -> i64 {
    assert!(exps.len() == weights.len(), "exponent length mismatch");
    exps.iter()
        .zip(weights)
        .map(|(&e, &w)| i64::from(e) * w)
        .sum()
}

fn assert_unique(names: &[String]) {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        assert!(seen.insert(n.clone()), "duplicate variable name {n}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_and_lookup() {
        let ctx = VariableContext::new(&[("e2", 2), ("e3", 3)]);
        assert_eq!(ctx.len(), 2);
        assert_eq!(ctx.index_of("e3"), Some(1));
        assert_eq!(ctx.degree1(&[2, 1]), 7);
        assert!(!ctx.is_bigraded());
    }

    #[test]
    fn bigraded_degrees() {
        let ctx = VariableContext::new_bigraded(&[("eps", 1, 0), ("s", 0, 1), ("e2", 1, 2)]);
        assert_eq!(ctx.degree1(&[1, 1, 2]), 3);
        assert_eq!(ctx.degree2(&[1, 1, 2]), Some(5));
    }

    #[test]
    #[should_panic(expected = "duplicate variable name")]
    fn rejects_duplicate_names() {
        VariableContext::new(&[("a", 1), ("a", 2)]);
    }
}
