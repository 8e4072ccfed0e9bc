//! Exhaustive enumeration of small frames, valuations, and models, plus
//! isomorphism-reduced frame enumeration by canonical-form hashing.

use super::{Frame, Model};
use crate::bitset::BitSet;
use std::collections::BTreeSet;

/// All frames on `n` named worlds over the given labels, as an iterator
/// over the `2^(n*n*labels)` relation choices (lexicographic in the edge
/// bit vector).
pub fn all_frames(n: usize, labels: &[&str]) -> impl Iterator<Item = Frame> {
    let bits = n * n * labels.len();
    assert!(bits < 48, "frame space too large to enumerate");
    let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    (0..1u64 << bits).map(move |mask| {
        let mut f = Frame::with_worlds(n);
        for l in &labels {
            f.ensure_label(l);
        }
        for (i, l) in labels.iter().enumerate() {
            for u in 0..n {
                for v in 0..n {
                    let bit = i * n * n + u * n + v;
                    if mask >> bit & 1 == 1 {
                        f.add_edge(l, u, v);
                    }
                }
            }
        }
        f
    })
}

/// All valuations of the given props over `n` worlds.
pub fn all_valuations(n: usize, props: &[&str]) -> impl Iterator<Item = Vec<(String, BitSet)>> {
    let bits = n * props.len();
    assert!(bits < 48, "valuation space too large to enumerate");
    let props: Vec<String> = props.iter().map(|s| s.to_string()).collect();
    (0..1u64 << bits).map(move |mask| {
        props
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let set = BitSet::from_iter(
                    n,
                    (0..n).filter(|w| mask >> (i * n + w) & 1 == 1),
                );
                (p.clone(), set)
            })
            .collect()
    })
}

/// All models on `n` worlds over the given labels and props.
pub fn all_models<'a>(
    n: usize,
    labels: &'a [&'a str],
    props: &'a [&'a str],
) -> impl Iterator<Item = Model> + 'a {
    all_frames(n, labels).flat_map(move |frame| {
        all_valuations(n, props).map(move |val| {
            let mut m = Model::new(frame.clone());
            for (p, set) in val {
                m = m.with_prop_set(&p, set);
            }
            m
        })
    })
}

/// Canonical key of a frame: the minimum, over all world permutations, of
/// the concatenated adjacency bit matrices (one per label, labels in
/// sorted order). Two frames over the same labels get equal keys iff they
/// are isomorphic.
pub fn canonical_frame_key(f: &Frame) -> Vec<u64> {
    let n = f.n_worlds();
    let labels: Vec<&str> = f.labels().collect();
    let mut best: Option<Vec<u64>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |perm| {
        let bits = n * n * labels.len();
        let mut key = vec![0u64; bits.div_ceil(64).max(1)];
        for (i, l) in labels.iter().enumerate() {
            if let Some(rel) = f.relation(l) {
                for &(u, v) in rel.pairs() {
                    let bit = i * n * n + perm[u] * n + perm[v];
                    key[bit / 64] |= 1 << (bit % 64);
                }
            }
        }
        if best.as_ref().map_or(true, |b| key < *b) {
            best = Some(key);
        }
    });
    best.unwrap_or_default()
}

fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// One representative frame per isomorphism class, for every world count
/// `1..=max_worlds`, over the given labels. Feasible up to four or five
/// worlds.
pub fn frames_up_to_iso(max_worlds: usize, labels: &[&str]) -> Vec<Frame> {
    let mut out = Vec::new();
    for n in 1..=max_worlds {
        let mut seen: BTreeSet<(usize, Vec<u64>)> = BTreeSet::new();
        for f in all_frames(n, labels) {
            let key = (n, canonical_frame_key(&f));
            if seen.insert(key) {
                out.push(f);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_counts() {
        assert_eq!(all_frames(1, &["a"]).count(), 2);
        assert_eq!(all_frames(2, &["a"]).count(), 16);
        assert_eq!(all_frames(2, &["a", "b"]).count(), 256);
    }

    #[test]
    fn iso_reduction_two_worlds() {
        // 16 digraphs on 2 nodes fall into 10 isomorphism classes.
        let frames = frames_up_to_iso(2, &["a"]);
        let two: Vec<_> = frames.iter().filter(|f| f.n_worlds() == 2).collect();
        assert_eq!(two.len(), 10);
    }

    #[test]
    fn canonical_key_identifies_isomorphic_frames() {
        let mut f = Frame::with_worlds(3);
        f.add_edge("a", 0, 1);
        f.add_edge("a", 1, 2);
        let mut g = Frame::with_worlds(3);
        g.add_edge("a", 2, 0);
        g.add_edge("a", 0, 1);
        assert_eq!(canonical_frame_key(&f), canonical_frame_key(&g));
        let mut h = Frame::with_worlds(3);
        h.add_edge("a", 0, 1);
        h.add_edge("a", 2, 1);
        assert_ne!(canonical_frame_key(&f), canonical_frame_key(&h));
    }
}
