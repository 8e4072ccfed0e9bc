//! Seeded random generators for structures and formulas, used by the
//! sampling-style checks (bisimulation safety, disjoint-union
//! preservation) and by randomized tests. Everything is driven by a
//! caller-supplied ChaCha RNG so reports are reproducible.

use crate::bitset::BitSet;
use crate::kripke::{FOStructure, Frame, Model};
use crate::syntax::ModalFormula;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random frame with `n` worlds; each edge present with probability
/// `density` per label.
pub fn random_frame(rng: &mut ChaCha8Rng, n: usize, labels: &[&str], density: f64) -> Frame {
    let mut f = Frame::with_worlds(n);
    for l in labels {
        f.ensure_label(l);
        for u in 0..n {
            for v in 0..n {
                if rng.gen_bool(density) {
                    f.add_edge(l, u, v);
                }
            }
        }
    }
    f
}

/// Random model over a random frame; each prop holds at a world with
/// probability 1/2.
pub fn random_model(
    rng: &mut ChaCha8Rng,
    n: usize,
    labels: &[&str],
    props: &[&str],
    density: f64,
) -> Model {
    let mut m = Model::new(random_frame(rng, n, labels, density));
    for p in props {
        let set = BitSet::from_iter(n, (0..n).filter(|_| rng.gen_bool(0.5)));
        m = m.with_prop_set(p, set);
    }
    m
}

/// Random FO structure with the given unary/binary relation names.
pub fn random_fostructure(
    rng: &mut ChaCha8Rng,
    n: usize,
    unary: &[&str],
    binary: &[&str],
    density: f64,
) -> FOStructure {
    let mut s = FOStructure::with_elements(n);
    for name in unary {
        s.ensure_unary(name);
        for e in 0..n {
            if rng.gen_bool(0.5) {
                s.add_unary(name, e);
            }
        }
    }
    for name in binary {
        s.ensure_binary(name);
        for u in 0..n {
            for v in 0..n {
                if rng.gen_bool(density) {
                    s.add_pair(name, u, v);
                }
            }
        }
    }
    s
}

/// Random modal formula of the given maximal depth (modal and boolean
/// nesting combined).
pub fn random_modal_formula(
    rng: &mut ChaCha8Rng,
    depth: usize,
    props: &[&str],
    labels: &[&str],
) -> ModalFormula {
    if depth == 0 || rng.gen_ratio(1, 6) {
        return match rng.gen_range(0..6) {
            0 => ModalFormula::True,
            1 => ModalFormula::False,
            _ => ModalFormula::prop(*props.choose(rng).expect("nonempty props")),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_modal_formula(rng, depth - 1, props, labels);
    match rng.gen_range(0..8) {
        0 => ModalFormula::not(sub(rng)),
        1 => ModalFormula::and(sub(rng), sub(rng)),
        2 => ModalFormula::or(sub(rng), sub(rng)),
        3 => ModalFormula::implies(sub(rng), sub(rng)),
        4 => ModalFormula::iff(sub(rng), sub(rng)),
        5 | 6 => ModalFormula::diamond(*labels.choose(rng).expect("nonempty labels"), sub(rng)),
        _ => ModalFormula::bx(*labels.choose(rng).expect("nonempty labels"), sub(rng)),
    }
}

/// Random formula positive in `p`: NNF built without `~p`.
pub fn random_positive_formula(
    rng: &mut ChaCha8Rng,
    depth: usize,
    p: &str,
    other_props: &[&str],
    labels: &[&str],
) -> ModalFormula {
    if depth == 0 || rng.gen_ratio(1, 6) {
        return match rng.gen_range(0..8) {
            0 => ModalFormula::True,
            1 => ModalFormula::False,
            2 | 3 | 4 => ModalFormula::prop(p),
            _ => match other_props.choose(rng) {
                Some(q) => {
                    if rng.gen_bool(0.5) {
                        ModalFormula::not(ModalFormula::prop(*q))
                    } else {
                        ModalFormula::prop(*q)
                    }
                }
                None => ModalFormula::prop(p),
            },
        };
    }
    let sub =
        |rng: &mut ChaCha8Rng| random_positive_formula(rng, depth - 1, p, other_props, labels);
    match rng.gen_range(0..6) {
        0 | 1 => ModalFormula::and(sub(rng), sub(rng)),
        2 | 3 => ModalFormula::or(sub(rng), sub(rng)),
        4 => ModalFormula::diamond(*labels.choose(rng).expect("nonempty labels"), sub(rng)),
        _ => ModalFormula::bx(*labels.choose(rng).expect("nonempty labels"), sub(rng)),
    }
}

/// Random NNF formula with no diamond at all.
pub fn random_box_only_formula(
    rng: &mut ChaCha8Rng,
    depth: usize,
    props: &[&str],
    labels: &[&str],
) -> ModalFormula {
    if depth == 0 || rng.gen_ratio(1, 5) {
        let p = *props.choose(rng).expect("nonempty props");
        return if rng.gen_bool(0.5) {
            ModalFormula::prop(p)
        } else {
            ModalFormula::not(ModalFormula::prop(p))
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_box_only_formula(rng, depth - 1, props, labels);
    match rng.gen_range(0..3) {
        0 => ModalFormula::and(sub(rng), sub(rng)),
        1 => ModalFormula::or(sub(rng), sub(rng)),
        _ => ModalFormula::bx(*labels.choose(rng).expect("nonempty labels"), sub(rng)),
    }
}

/// Random p-free modal formula (for grammar side conditions).
pub fn random_p_free_formula(
    rng: &mut ChaCha8Rng,
    depth: usize,
    other_props: &[&str],
    labels: &[&str],
) -> ModalFormula {
    if other_props.is_empty() {
        return if rng.gen_bool(0.7) {
            ModalFormula::True
        } else {
            ModalFormula::False
        };
    }
    random_modal_formula(rng, depth, other_props, labels)
}

/// Random term of the completely-additive grammar
/// `t := p&f | f&<a>t` (`f` p-free), possibly as a small disjunction.
pub fn random_ca_grammar_formula(
    rng: &mut ChaCha8Rng,
    p: &str,
    other_props: &[&str],
    labels: &[&str],
) -> ModalFormula {
    fn term(
        rng: &mut ChaCha8Rng,
        nest: usize,
        p: &str,
        other: &[&str],
        labels: &[&str],
    ) -> ModalFormula {
        let side = random_p_free_formula(rng, 1, other, labels);
        if nest == 0 || rng.gen_bool(0.5) {
            ModalFormula::and(ModalFormula::prop(p), side)
        } else {
            let label = *labels.choose(rng).expect("nonempty labels");
            let inner = term(rng, nest - 1, p, other, labels);
            ModalFormula::and(side, ModalFormula::diamond(label, inner))
        }
    }
    let disjuncts = rng.gen_range(1..=2);
    ModalFormula::big_or(
        (0..disjuncts).map(|_| term(rng, rng.gen_range(0..=2), p, other_props, labels)),
    )
}

/// Random NNF formula in which `p` never occurs negated or under a box.
pub fn random_continuous_formula(
    rng: &mut ChaCha8Rng,
    depth: usize,
    p: &str,
    other_props: &[&str],
    labels: &[&str],
) -> ModalFormula {
    if depth == 0 || rng.gen_ratio(1, 6) {
        return if rng.gen_bool(0.5) {
            ModalFormula::prop(p)
        } else {
            random_p_free_formula(rng, 0, other_props, labels)
        };
    }
    let sub =
        |rng: &mut ChaCha8Rng| random_continuous_formula(rng, depth - 1, p, other_props, labels);
    match rng.gen_range(0..6) {
        0 | 1 => ModalFormula::and(sub(rng), sub(rng)),
        2 | 3 => ModalFormula::or(sub(rng), sub(rng)),
        4 => ModalFormula::diamond(*labels.choose(rng).expect("nonempty labels"), sub(rng)),
        // boxes only over p-free bodies
        _ => ModalFormula::bx(
            *labels.choose(rng).expect("nonempty labels"),
            random_p_free_formula(rng, depth - 1, other_props, labels),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::shape;

    #[test]
    fn generators_hit_their_grammars() {
        let mut rng = rng_from_seed(7);
        for _ in 0..200 {
            let pos = random_positive_formula(&mut rng, 3, "p", &["q"], &["a"]);
            assert!(shape::is_positive_in(&pos, "p"), "not positive: {pos}");
            let bo = random_box_only_formula(&mut rng, 3, &["p", "q"], &["a"]);
            assert!(shape::is_box_only_nnf(&bo), "not box-only: {bo}");
            let ca = random_ca_grammar_formula(&mut rng, "p", &["q"], &["a"]);
            assert!(shape::is_ca_grammar(&ca, "p"), "not in CA grammar: {ca}");
            let cont = random_continuous_formula(&mut rng, 3, "p", &["q"], &["a"]);
            assert!(
                shape::is_continuous_shape(&cont, "p"),
                "not continuous-shaped: {cont}"
            );
        }
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let mut a = rng_from_seed(42);
        let mut b = rng_from_seed(42);
        let fa = random_modal_formula(&mut a, 3, &["p", "q"], &["a"]);
        let fb = random_modal_formula(&mut b, 3, &["p", "q"], &["a"]);
        assert_eq!(fa, fb);
    }
}
