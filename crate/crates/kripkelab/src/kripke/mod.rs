//! Finite Kripke frames and models, first-order structures, and the basic
//! frame operations (generated subframes, disjoint unions, restrictions,
//! Gaifman neighbourhoods, model pairs).
//!
//! Worlds and elements are dense ids `0..n` with display names kept
//! alongside. Relations are stored both as ordered pair sets and as
//! per-world successor/predecessor bit rows; the bit rows are the hot path
//! for model checking and valuation sweeps. All structures are immutable
//! after construction in practice: the mutating methods are builders.

mod bisim;
mod check;
mod enumerate;
mod fileio;
mod morphism;
mod ue;

pub use bisim::{
    bisimilar, bisimilar_naive, bisimilarity_partition, quotient_by_bisimilarity, tree_unravel,
};
pub use check::{model_check, truth_set, CompiledModal};
pub use enumerate::{
    all_frames, all_models, all_valuations, canonical_frame_key, frames_up_to_iso,
};
pub use fileio::{parse_structures, to_dot, NamedStructure};
pub use morphism::{
    find_bounded_morphism_onto, is_bounded_model_morphism, is_bounded_morphism, MorphismSearch,
};
pub use ue::ultrafilter_extension_finite;

use crate::bitset::BitSet;
use crate::syntax::UNIVERSAL_LABEL;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KripkeError {
    #[error("unknown world id {0}")]
    UnknownWorld(usize),
    #[error("label '{0}' is reserved")]
    ReservedLabel(String),
    #[error("world set is not closed under relation '{label}': edge to world {target} outside the set")]
    NotGeneratedClosed { label: String, target: usize },
    #[error("map is not total on the source frame")]
    MapNotTotal,
    #[error("predicate '{0}' already present in the signature")]
    PredicateExists(String),
    #[error("structure too large for this operation: {0} elements (limit {1})")]
    TooLarge(usize, usize),
    #[error("file format error at line {line}: {msg}")]
    FileFormat { line: usize, msg: String },
}

/// A binary relation over `0..n`, kept as a pair set plus bit rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
    succ: Vec<BitSet>,
    pred: Vec<BitSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            pairs: BTreeSet::new(),
            succ: vec![BitSet::empty(n); n],
            pred: vec![BitSet::empty(n); n],
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, iter: I) -> Self {
        let mut r = Self::empty(n);
        for (u, v) in iter {
            r.insert(u, v);
        }
        r
    }

    pub fn insert(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "edge out of range");
        self.pairs.insert((u, v));
        self.succ[u].insert(v);
        self.pred[v].insert(u);
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        u < self.n && self.succ[u].contains(v)
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn succ(&self, u: usize) -> &BitSet {
        &self.succ[u]
    }

    pub fn pred(&self, v: usize) -> &BitSet {
        &self.pred[v]
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Reflexive-transitive closure.
    pub fn rt_closure(&self) -> Relation {
        let mut r = Relation::empty(self.n);
        for s in 0..self.n {
            // BFS rooted at s, s itself included.
            let mut seen = BitSet::singleton(self.n, s);
            let mut queue = vec![s];
            while let Some(u) = queue.pop() {
                for v in self.succ[u].iter() {
                    if !seen.contains(v) {
                        seen.insert(v);
                        queue.push(v);
                    }
                }
            }
            for v in seen.iter() {
                r.insert(s, v);
            }
        }
        r
    }

    pub fn is_transitive(&self) -> bool {
        self.pairs.iter().all(|&(u, v)| {
            self.succ[v]
                .iter()
                .all(|w| self.succ[u].contains(w))
        })
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.n).all(|u| !self.succ[u].contains(u))
    }

    pub fn is_functional(&self) -> bool {
        (0..self.n).all(|u| self.succ[u].count() <= 1)
    }
}

/// Finite Kripke frame: worlds with display names and labeled relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    names: Vec<String>,
    relations: BTreeMap<String, Relation>,
}

impl Frame {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Self {
        Frame {
            names: names.into_iter().map(Into::into).collect(),
            relations: BTreeMap::new(),
        }
    }

    /// A frame with `n` anonymous worlds `w0..w{n-1}`.
    pub fn with_worlds(n: usize) -> Self {
        Frame::new((0..n).map(|i| format!("w{i}")))
    }

    pub fn n_worlds(&self) -> usize {
        self.names.len()
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn world_names(&self) -> &[String] {
        &self.names
    }

    pub fn world_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.relations.keys().map(|s| s.as_str())
    }

    pub fn add_edge(&mut self, label: &str, u: usize, v: usize) {
        assert_ne!(label, UNIVERSAL_LABEL, "label 'U' is reserved");
        assert!(u < self.n_worlds() && v < self.n_worlds(), "edge out of range");
        let n = self.n_worlds();
        self.relations
            .entry(label.to_string())
            .or_insert_with(|| Relation::empty(n))
            .insert(u, v);
    }

    /// The relation for `label`; absent labels denote the empty relation.
    pub fn relation(&self, label: &str) -> Option<&Relation> {
        self.relations.get(label)
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn has_edge(&self, label: &str, u: usize, v: usize) -> bool {
        self.relations
            .get(label)
            .map(|r| r.contains(u, v))
            .unwrap_or(false)
    }

    /// Declares a label so it appears in the signature even when empty.
    pub fn ensure_label(&mut self, label: &str) {
        assert_ne!(label, UNIVERSAL_LABEL, "label 'U' is reserved");
        let n = self.n_worlds();
        self.relations
            .entry(label.to_string())
            .or_insert_with(|| Relation::empty(n));
    }

    /// Worlds reachable from `w` by forward steps along any relation,
    /// including `w` itself.
    pub fn reachable_set(&self, w: usize) -> Result<BitSet, KripkeError> {
        if w >= self.n_worlds() {
            return Err(KripkeError::UnknownWorld(w));
        }
        let mut seen = BitSet::singleton(self.n_worlds(), w);
        let mut queue = vec![w];
        while let Some(u) = queue.pop() {
            for rel in self.relations.values() {
                for v in rel.succ(u).iter() {
                    if !seen.contains(v) {
                        seen.insert(v);
                        queue.push(v);
                    }
                }
            }
        }
        Ok(seen)
    }

    /// Induced subframe on `keep`, which must be closed under every
    /// relation. Returns the subframe and the kept world ids in order.
    pub fn generated_subframe(&self, keep: &BitSet) -> Result<(Frame, Vec<usize>), KripkeError> {
        for (label, rel) in &self.relations {
            for &(u, v) in rel.pairs() {
                if keep.contains(u) && !keep.contains(v) {
                    return Err(KripkeError::NotGeneratedClosed {
                        label: label.clone(),
                        target: v,
                    });
                }
            }
        }
        Ok(self.induced_subframe(keep))
    }

    /// Induced subframe on an arbitrary world set (no closure required).
    pub fn induced_subframe(&self, keep: &BitSet) -> (Frame, Vec<usize>) {
        let kept: Vec<usize> = keep.iter().collect();
        let index: BTreeMap<usize, usize> =
            kept.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let mut frame = Frame::new(kept.iter().map(|&w| self.names[w].clone()));
        for (label, rel) in &self.relations {
            frame.ensure_label(label);
            for &(u, v) in rel.pairs() {
                if let (Some(&nu), Some(&nv)) = (index.get(&u), index.get(&v)) {
                    frame.add_edge(label, nu, nv);
                }
            }
        }
        (frame, kept)
    }

    pub fn to_fostructure(&self) -> FOStructure {
        let mut s = FOStructure::new(self.names.clone());
        for (label, rel) in &self.relations {
            s.ensure_binary(label);
            for &(u, v) in rel.pairs() {
                s.add_pair(label, u, v);
            }
        }
        s
    }
}

/// Disjoint union of frames; world `w` of frame `i` becomes
/// `offsets[i] + w`. World names are made unique with an index prefix when
/// they clash.
pub fn disjoint_union(frames: &[Frame]) -> (Frame, Vec<usize>) {
    let total: usize = frames.iter().map(|f| f.n_worlds()).sum();
    let mut names: Vec<String> = Vec::with_capacity(total);
    let mut offsets = Vec::with_capacity(frames.len());
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (i, f) in frames.iter().enumerate() {
        offsets.push(names.len());
        for n in f.world_names() {
            let name = if seen.contains(n) {
                format!("u{i}_{n}")
            } else {
                n.clone()
            };
            seen.insert(name.clone());
            names.push(name);
        }
    }
    let mut out = Frame::new(names);
    for (i, f) in frames.iter().enumerate() {
        for (label, rel) in f.relations() {
            out.ensure_label(label);
            for &(u, v) in rel.pairs() {
                out.add_edge(label, offsets[i] + u, offsets[i] + v);
            }
        }
    }
    (out, offsets)
}

/// Kripke model: a frame plus a valuation. Propositions absent from the
/// valuation are interpreted as the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub frame: Frame,
    valuation: BTreeMap<String, BitSet>,
}

impl Model {
    pub fn new(frame: Frame) -> Self {
        Model {
            frame,
            valuation: BTreeMap::new(),
        }
    }

    pub fn n_worlds(&self) -> usize {
        self.frame.n_worlds()
    }

    pub fn set_prop(&mut self, p: &str, w: usize) {
        assert!(w < self.n_worlds(), "world out of range");
        let n = self.n_worlds();
        self.valuation
            .entry(p.to_string())
            .or_insert_with(|| BitSet::empty(n))
            .insert(w);
    }

    pub fn with_prop_set(mut self, p: &str, set: BitSet) -> Self {
        assert_eq!(set.universe(), self.n_worlds());
        self.valuation.insert(p.to_string(), set);
        self
    }

    /// Replaces the extension of `p`, returning the modified copy
    /// (`M[p -> X]`).
    pub fn override_prop(&self, p: &str, set: BitSet) -> Model {
        self.clone().with_prop_set(p, set)
    }

    pub fn prop_set(&self, p: &str) -> BitSet {
        self.valuation
            .get(p)
            .cloned()
            .unwrap_or_else(|| BitSet::empty(self.n_worlds()))
    }

    pub fn satisfies_prop(&self, p: &str, w: usize) -> bool {
        self.valuation.get(p).map(|s| s.contains(w)).unwrap_or(false)
    }

    pub fn valuation(&self) -> &BTreeMap<String, BitSet> {
        &self.valuation
    }

    /// Props with nonempty extension plus declared ones.
    pub fn props(&self) -> impl Iterator<Item = &str> {
        self.valuation.keys().map(|s| s.as_str())
    }

    /// Restriction `M|X` to an arbitrary world set.
    pub fn induced_submodel(&self, keep: &BitSet) -> (Model, Vec<usize>) {
        let (frame, kept) = self.frame.induced_subframe(keep);
        let mut m = Model::new(frame);
        for (p, set) in &self.valuation {
            let mut new_set = BitSet::empty(m.n_worlds());
            for (new_id, &old_id) in kept.iter().enumerate() {
                if set.contains(old_id) {
                    new_set.insert(new_id);
                }
            }
            m.valuation.insert(p.clone(), new_set);
        }
        (m, kept)
    }

    pub fn to_fostructure(&self) -> FOStructure {
        let mut s = self.frame.to_fostructure();
        for (p, set) in &self.valuation {
            s.ensure_unary(p);
            for w in set.iter() {
                s.add_unary(p, w);
            }
        }
        s
    }
}

/// Disjoint union of models.
pub fn disjoint_union_models(models: &[Model]) -> (Model, Vec<usize>) {
    let frames: Vec<Frame> = models.iter().map(|m| m.frame.clone()).collect();
    let (frame, offsets) = disjoint_union(&frames);
    let n = frame.n_worlds();
    let mut out = Model::new(frame);
    for (i, m) in models.iter().enumerate() {
        for (p, set) in m.valuation() {
            let entry = out
                .valuation
                .entry(p.clone())
                .or_insert_with(|| BitSet::empty(n));
            for w in set.iter() {
                entry.insert(offsets[i] + w);
            }
        }
    }
    (out, offsets)
}

/// Finite relational structure with named unary and binary relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FOStructure {
    names: Vec<String>,
    unary: BTreeMap<String, BitSet>,
    binary: BTreeMap<String, Relation>,
}

impl FOStructure {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Self {
        FOStructure {
            names: names.into_iter().map(Into::into).collect(),
            unary: BTreeMap::new(),
            binary: BTreeMap::new(),
        }
    }

    pub fn with_elements(n: usize) -> Self {
        FOStructure::new((0..n).map(|i| format!("e{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn element_name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn element_names(&self) -> &[String] {
        &self.names
    }

    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn ensure_unary(&mut self, name: &str) {
        let n = self.len();
        self.unary
            .entry(name.to_string())
            .or_insert_with(|| BitSet::empty(n));
    }

    pub fn ensure_binary(&mut self, name: &str) {
        let n = self.len();
        self.binary
            .entry(name.to_string())
            .or_insert_with(|| Relation::empty(n));
    }

    pub fn add_unary(&mut self, name: &str, e: usize) {
        assert!(e < self.len(), "element out of range");
        self.ensure_unary(name);
        self.unary.get_mut(name).unwrap().insert(e);
    }

    pub fn add_pair(&mut self, name: &str, u: usize, v: usize) {
        self.ensure_binary(name);
        self.binary.get_mut(name).unwrap().insert(u, v);
    }

    pub fn unary(&self, name: &str) -> Option<&BitSet> {
        self.unary.get(name)
    }

    pub fn binary(&self, name: &str) -> Option<&Relation> {
        self.binary.get(name)
    }

    pub fn unary_relations(&self) -> &BTreeMap<String, BitSet> {
        &self.unary
    }

    pub fn binary_relations(&self) -> &BTreeMap<String, Relation> {
        &self.binary
    }

    pub fn has_unary(&self, name: &str, e: usize) -> bool {
        self.unary.get(name).map(|s| s.contains(e)).unwrap_or(false)
    }

    pub fn has_pair(&self, name: &str, u: usize, v: usize) -> bool {
        self.binary
            .get(name)
            .map(|r| r.contains(u, v))
            .unwrap_or(false)
    }

    /// Induced substructure on `keep`; returns the kept old ids in order.
    pub fn induced_substructure(&self, keep: &BitSet) -> (FOStructure, Vec<usize>) {
        let kept: Vec<usize> = keep.iter().collect();
        let index: BTreeMap<usize, usize> =
            kept.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut s = FOStructure::new(kept.iter().map(|&e| self.names[e].clone()));
        for (name, set) in &self.unary {
            s.ensure_unary(name);
            for (new_id, &old_id) in kept.iter().enumerate() {
                if set.contains(old_id) {
                    s.add_unary(name, new_id);
                }
            }
        }
        for (name, rel) in &self.binary {
            s.ensure_binary(name);
            for &(u, v) in rel.pairs() {
                if let (Some(&nu), Some(&nv)) = (index.get(&u), index.get(&v)) {
                    s.add_pair(name, nu, nv);
                }
            }
        }
        (s, kept)
    }

    /// Pairwise Gaifman distances from `a` (usize::MAX when unreachable).
    pub fn gaifman_distances(&self, a: usize) -> Vec<usize> {
        let n = self.len();
        let mut adj = vec![BitSet::empty(n); n];
        for rel in self.binary.values() {
            for &(u, v) in rel.pairs() {
                if u != v {
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
        }
        let mut dist = vec![usize::MAX; n];
        dist[a] = 0;
        let mut frontier = vec![a];
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for &u in &frontier {
                for v in adj[u].iter() {
                    if dist[v] == usize::MAX {
                        dist[v] = d;
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        dist
    }

    /// Substructure induced by the elements at Gaifman distance at most
    /// `r` from `a`.
    pub fn gaifman_r_neighbourhood(&self, a: usize, r: usize) -> (FOStructure, Vec<usize>) {
        let dist = self.gaifman_distances(a);
        let keep = BitSet::from_iter(
            self.len(),
            (0..self.len()).filter(|&e| dist[e] <= r),
        );
        self.induced_substructure(&keep)
    }
}

/// Disjoint union of FO structures.
pub fn disjoint_union_structures(structs: &[FOStructure]) -> (FOStructure, Vec<usize>) {
    let total: usize = structs.iter().map(|s| s.len()).sum();
    let mut names = Vec::with_capacity(total);
    let mut offsets = Vec::with_capacity(structs.len());
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (i, s) in structs.iter().enumerate() {
        offsets.push(names.len());
        for n in s.element_names() {
            let name = if seen.contains(n) {
                format!("u{i}_{n}")
            } else {
                n.clone()
            };
            seen.insert(name.clone());
            names.push(name);
        }
    }
    let mut out = FOStructure::new(names);
    for (i, s) in structs.iter().enumerate() {
        for (name, set) in s.unary_relations() {
            out.ensure_unary(name);
            for e in set.iter() {
                out.add_unary(name, offsets[i] + e);
            }
        }
        for (name, rel) in s.binary_relations() {
            out.ensure_binary(name);
            for &(u, v) in rel.pairs() {
                out.add_pair(name, offsets[i] + u, offsets[i] + v);
            }
        }
    }
    (out, offsets)
}

/// The model pair `[K,M]`: disjoint union of `K` and `M` expanded with
/// fresh unary predicates `P` (left part) and `Q` (right part).
pub fn model_pair(k: &FOStructure, m: &FOStructure) -> Result<FOStructure, KripkeError> {
    for name in ["P", "Q"] {
        if k.unary(name).is_some() || m.unary(name).is_some() {
            return Err(KripkeError::PredicateExists(name.to_string()));
        }
    }
    let (mut out, offsets) = disjoint_union_structures(&[k.clone(), m.clone()]);
    out.ensure_unary("P");
    out.ensure_unary("Q");
    for e in 0..k.len() {
        out.add_unary("P", offsets[0] + e);
    }
    for e in 0..m.len() {
        out.add_unary("Q", offsets[1] + e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_chain() -> Frame {
        let mut f = Frame::new(["w", "v"]);
        f.add_edge("a", 0, 1);
        f
    }

    #[test]
    fn generated_subframe_requires_closure() {
        let f = two_chain();
        let err = f
            .generated_subframe(&BitSet::singleton(2, 0))
            .unwrap_err();
        assert!(matches!(err, KripkeError::NotGeneratedClosed { .. }));
        let (sub, kept) = f.generated_subframe(&BitSet::singleton(2, 1)).unwrap();
        assert_eq!(sub.n_worlds(), 1);
        assert_eq!(kept, vec![1]);
        assert!(sub.relation("a").unwrap().is_empty());
    }

    #[test]
    fn disjoint_union_renumbers() {
        let (u, offsets) = disjoint_union(&[two_chain(), two_chain()]);
        assert_eq!(u.n_worlds(), 4);
        assert_eq!(offsets, vec![0, 2]);
        assert!(u.has_edge("a", 0, 1));
        assert!(u.has_edge("a", 2, 3));
        assert!(!u.has_edge("a", 1, 2));
    }

    #[test]
    fn model_pair_adds_parts() {
        let k = FOStructure::with_elements(1);
        let m = FOStructure::with_elements(1);
        let pair = model_pair(&k, &m).unwrap();
        assert_eq!(pair.len(), 2);
        assert!(pair.has_unary("P", 0));
        assert!(pair.has_unary("Q", 1));
        assert!(!pair.has_unary("P", 1));

        let mut k2 = FOStructure::with_elements(1);
        k2.add_unary("P", 0);
        assert!(matches!(
            model_pair(&k2, &m),
            Err(KripkeError::PredicateExists(_))
        ));
    }

    #[test]
    fn gaifman_neighbourhood_radius_zero() {
        let mut s = FOStructure::with_elements(3);
        s.add_pair("R", 0, 1);
        s.add_pair("R", 1, 2);
        let (n0, kept) = s.gaifman_r_neighbourhood(0, 0);
        assert_eq!(n0.len(), 1);
        assert_eq!(kept, vec![0]);
        let (n1, kept1) = s.gaifman_r_neighbourhood(0, 1);
        assert_eq!(n1.len(), 2);
        assert_eq!(kept1, vec![0, 1]);
    }

    #[test]
    fn rt_closure_of_chain() {
        let r = Relation::from_pairs(3, [(0, 1), (1, 2)]);
        let c = r.rt_closure();
        assert!(c.contains(0, 0) && c.contains(0, 2) && c.contains(1, 2));
        assert!(!c.contains(2, 0));
        assert_eq!(c.len(), 6);
    }
}
