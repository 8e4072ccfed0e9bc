//! Bounded morphisms: the frame-level check, the model-level check with
//! valuation preservation, and a backtracking search for surjective
//! model morphisms (functional bisimulations).

use super::{Frame, KripkeError, Model};
use std::collections::BTreeSet;

/// Checks the two bounded-morphism clauses for a total map `f` from the
/// worlds of `from` to the worlds of `to`:
/// forth, `(w,v) in R_a` implies `(f(w),f(v)) in R'_a`; and back,
/// `(f(w),u) in R'_a` implies `(w,v) in R_a` for some `v` with `f(v)=u`.
pub fn is_bounded_morphism(from: &Frame, to: &Frame, f: &[usize]) -> Result<bool, KripkeError> {
    if f.len() != from.n_worlds() || f.iter().any(|&u| u >= to.n_worlds()) {
        return Err(KripkeError::MapNotTotal);
    }
    let mut labels: BTreeSet<&str> = from.labels().collect();
    labels.extend(to.labels());
    for label in labels {
        let r_from = from.relation(label);
        let r_to = to.relation(label);
        // forth
        if let Some(rf) = r_from {
            for &(w, v) in rf.pairs() {
                if !r_to.map_or(false, |rt| rt.contains(f[w], f[v])) {
                    return Ok(false);
                }
            }
        }
        // back
        if let Some(rt) = r_to {
            for (w, &fw) in f.iter().enumerate() {
                for u in rt.succ(fw).iter() {
                    let lifted = r_from.map_or(false, |rf| {
                        rf.succ(w).iter().any(|v| f[v] == u)
                    });
                    if !lifted {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Model-level bounded morphism: the frame clauses plus agreement of `w`
/// and `f(w)` on every proposition of either model.
pub fn is_bounded_model_morphism(
    from: &Model,
    to: &Model,
    f: &[usize],
) -> Result<bool, KripkeError> {
    if !is_bounded_morphism(&from.frame, &to.frame, f)? {
        return Ok(false);
    }
    let mut props: BTreeSet<&str> = from.props().collect();
    props.extend(to.props());
    for p in props {
        for (w, &fw) in f.iter().enumerate() {
            if from.satisfies_prop(p, w) != to.satisfies_prop(p, fw) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of [`find_bounded_morphism_onto`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismSearch {
    Found(Vec<usize>),
    NotFound,
    /// The node budget ran out before the search space was exhausted;
    /// deliberately distinct from a definite `NotFound`.
    BudgetExceeded,
}

/// Backtracking search for a surjective bounded model morphism from `n`
/// onto `m` (a surjective functional bisimulation). Source worlds are
/// assigned in decreasing-degree order; intended for a dozen worlds or so.
pub fn find_bounded_morphism_onto(n: &Model, m: &Model, budget: usize) -> MorphismSearch {
    let nn = n.n_worlds();
    let nm = m.n_worlds();
    if nm == 0 {
        return if nn == 0 {
            MorphismSearch::Found(vec![])
        } else {
            MorphismSearch::NotFound
        };
    }
    if nn < nm {
        // Too few worlds to cover the target.
        return MorphismSearch::NotFound;
    }
    let mut props: Vec<String> = n.props().map(String::from).collect();
    props.extend(m.props().map(String::from));
    props.sort();
    props.dedup();

    let mut order: Vec<usize> = (0..nn).collect();
    let degree = |w: usize| -> usize {
        n.frame
            .relations()
            .values()
            .map(|r| r.succ(w).count() + r.pred(w).count())
            .sum()
    };
    order.sort_by_key(|&w| std::cmp::Reverse(degree(w)));

    // Candidate images per source world: propositional agreement.
    let candidates: Vec<Vec<usize>> = (0..nn)
        .map(|w| {
            (0..nm)
                .filter(|&u| {
                    props
                        .iter()
                        .all(|p| n.satisfies_prop(p, w) == m.satisfies_prop(p, u))
                })
                .collect()
        })
        .collect();

    struct Search<'a> {
        n: &'a Model,
        m: &'a Model,
        order: &'a [usize],
        candidates: &'a [Vec<usize>],
        f: Vec<usize>,
        covered: Vec<usize>,
        uncovered: usize,
        nodes_left: usize,
    }

    const UNASSIGNED: usize = usize::MAX;

    impl Search<'_> {
        fn consistent(&self, w: usize, u: usize) -> bool {
            // Forth clause against already-assigned neighbours, both
            // directions. The back clause is only checkable at the leaves.
            for (label, rel) in self.n.frame.relations() {
                let rt = self.m.frame.relation(label);
                for v in rel.succ(w).iter() {
                    let fv = self.f[v];
                    if fv != UNASSIGNED && !rt.map_or(false, |r| r.contains(u, fv)) {
                        return false;
                    }
                }
                for v in rel.pred(w).iter() {
                    let fv = self.f[v];
                    if fv != UNASSIGNED && !rt.map_or(false, |r| r.contains(fv, u)) {
                        return false;
                    }
                }
            }
            true
        }

        fn run(&mut self, depth: usize) -> MorphismSearch {
            if self.nodes_left == 0 {
                return MorphismSearch::BudgetExceeded;
            }
            self.nodes_left -= 1;
            if depth == self.order.len() {
                if self.uncovered > 0 {
                    return MorphismSearch::NotFound;
                }
                return match is_bounded_model_morphism(self.n, self.m, &self.f) {
                    Ok(true) => MorphismSearch::Found(self.f.clone()),
                    _ => MorphismSearch::NotFound,
                };
            }
            // Surjectivity pruning: remaining sources must cover the gap.
            if self.order.len() - depth < self.uncovered {
                return MorphismSearch::NotFound;
            }
            let w = self.order[depth];
            for &u in &self.candidates[w] {
                if !self.consistent(w, u) {
                    continue;
                }
                self.f[w] = u;
                self.covered[u] += 1;
                if self.covered[u] == 1 {
                    self.uncovered -= 1;
                }
                match self.run(depth + 1) {
                    MorphismSearch::NotFound => {}
                    hit => return hit,
                }
                self.covered[u] -= 1;
                if self.covered[u] == 0 {
                    self.uncovered += 1;
                }
                self.f[w] = UNASSIGNED;
            }
            MorphismSearch::NotFound
        }
    }

    let mut search = Search {
        n,
        m,
        order: &order,
        candidates: &candidates,
        f: vec![UNASSIGNED; nn],
        covered: vec![0; nm],
        uncovered: nm,
        nodes_left: budget,
    };
    search.run(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::BitSet;

    #[test]
    fn collapse_two_cycle_onto_reflexive_point() {
        let mut f = Frame::new(["x", "y"]);
        f.add_edge("a", 0, 1);
        f.add_edge("a", 1, 0);
        let mut g = Frame::new(["r"]);
        g.add_edge("a", 0, 0);
        assert!(is_bounded_morphism(&f, &g, &[0, 0]).unwrap());
    }

    #[test]
    fn back_clause_fails_without_successor() {
        let f = Frame::new(["x"]);
        let mut g = Frame::new(["r"]);
        g.add_edge("a", 0, 0);
        // x has no successor but its image does.
        assert!(!is_bounded_morphism(&f, &g, &[0]).unwrap());
    }

    #[test]
    fn partial_map_rejected() {
        let f = Frame::new(["x", "y"]);
        let g = Frame::new(["r"]);
        assert!(matches!(
            is_bounded_morphism(&f, &g, &[0]),
            Err(KripkeError::MapNotTotal)
        ));
    }

    #[test]
    fn finds_constant_morphism() {
        // Two bisimilar p-worlds with matching loops map onto one.
        let mut nf = Frame::new(["u", "v"]);
        nf.add_edge("a", 0, 1);
        nf.add_edge("a", 1, 0);
        let n = Model::new(nf).with_prop_set("p", BitSet::full(2));
        let mut mf = Frame::new(["r"]);
        mf.add_edge("a", 0, 0);
        let m = Model::new(mf).with_prop_set("p", BitSet::full(1));
        match find_bounded_morphism_onto(&n, &m, 10_000) {
            MorphismSearch::Found(f) => assert_eq!(f, vec![0, 0]),
            other => panic!("expected morphism, got {other:?}"),
        }
    }

    #[test]
    fn exhaustive_map_enumeration_agrees_with_search() {
        // Oracle: try every total map and compare with the backtracker.
        let mut models = Vec::new();
        for bits in 0..16u32 {
            let mut f = Frame::new(["x", "y"]);
            for (i, (u, v)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
                if bits >> i & 1 == 1 {
                    f.add_edge("a", u, v);
                }
            }
            models.push(Model::new(f));
        }
        for n in &models {
            for m in &models {
                let brute = {
                    let mut found = false;
                    for f0 in 0..2 {
                        for f1 in 0..2 {
                            let f = [f0, f1];
                            let onto = f.contains(&0) && f.contains(&1);
                            if onto && is_bounded_model_morphism(n, m, &f).unwrap() {
                                found = true;
                            }
                        }
                    }
                    found
                };
                let searched = matches!(
                    find_bounded_morphism_onto(n, m, 100_000),
                    MorphismSearch::Found(_)
                );
                assert_eq!(brute, searched);
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let n = Model::new(Frame::with_worlds(3));
        let m = Model::new(Frame::with_worlds(3));
        assert_eq!(
            find_bounded_morphism_onto(&n, &m, 1),
            MorphismSearch::BudgetExceeded
        );
    }
}
