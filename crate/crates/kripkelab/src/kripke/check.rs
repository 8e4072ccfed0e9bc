//! Kripke model checking via a compiled bottom-up evaluator.
//!
//! A formula is flattened once per frame into a postorder instruction
//! list over world bit sets; evaluating a valuation is then a linear pass
//! with no allocation. Missing propositions denote the empty set and
//! missing labels the empty relation; the reserved label `U` is evaluated
//! as the total relation `W x W`.

use super::{Frame, KripkeError, Model, Relation};
use crate::bitset::BitSet;
use crate::syntax::{ModalFormula, UNIVERSAL_LABEL};
use std::collections::BTreeMap;

enum Op {
    True,
    False,
    Prop(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Iff(usize, usize),
    Diamond(Option<usize>, usize),
    Box(Option<usize>, usize),
    DiamondU(usize),
    BoxU(usize),
}

/// A modal formula compiled against a fixed frame.
pub struct CompiledModal {
    n: usize,
    ops: Vec<Op>,
    relations: Vec<Relation>,
    props: Vec<String>,
    bufs: Vec<BitSet>,
}

impl CompiledModal {
    pub fn new(frame: &Frame, formula: &ModalFormula) -> Self {
        let mut props: Vec<String> = formula.props().into_iter().collect();
        props.sort();
        Self::with_props(frame, formula, props)
    }

    /// Compiles with a caller-chosen proposition order (useful when the
    /// same valuation buffers are shared across several formulas).
    pub fn with_props(frame: &Frame, formula: &ModalFormula, props: Vec<String>) -> Self {
        let mut relations = Vec::new();
        let mut rel_index: BTreeMap<String, usize> = BTreeMap::new();
        let mut ops = Vec::new();
        let prop_index: BTreeMap<&str, usize> = props
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_str(), i))
            .collect();
        compile(
            formula,
            frame,
            &prop_index,
            &mut rel_index,
            &mut relations,
            &mut ops,
        );
        let n = frame.n_worlds();
        let bufs = vec![BitSet::empty(n); ops.len()];
        CompiledModal {
            n,
            ops,
            relations,
            props,
            bufs,
        }
    }

    /// Proposition order expected by [`CompiledModal::eval`].
    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn n_worlds(&self) -> usize {
        self.n
    }

    /// Evaluates under the given valuation (one world set per proposition,
    /// in `props()` order) and returns the truth set of the root.
    pub fn eval(&mut self, valuation: &[BitSet]) -> &BitSet {
        assert_eq!(valuation.len(), self.props.len());
        let n = self.n;
        for i in 0..self.ops.len() {
            // Split the buffer slice so earlier results can be read while
            // writing entry i.
            let (done, rest) = self.bufs.split_at_mut(i);
            let out = &mut rest[0];
            match &self.ops[i] {
                Op::True => out.set_all(),
                Op::False => out.clear(),
                Op::Prop(p) => out.assign(&valuation[*p]),
                Op::Not(a) => {
                    out.assign(&done[*a]);
                    out.complement();
                }
                Op::And(a, b) => {
                    out.assign(&done[*a]);
                    out.intersect_with(&done[*b]);
                }
                Op::Or(a, b) => {
                    out.assign(&done[*a]);
                    out.union_with(&done[*b]);
                }
                Op::Implies(a, b) => {
                    out.assign(&done[*a]);
                    out.complement();
                    out.union_with(&done[*b]);
                }
                Op::Iff(a, b) => {
                    // (a & b) | (~a & ~b)
                    out.clear();
                    for w in 0..n {
                        if done[*a].contains(w) == done[*b].contains(w) {
                            out.insert(w);
                        }
                    }
                }
                Op::Diamond(rel, a) => {
                    out.clear();
                    if let Some(r) = rel {
                        let rel = &self.relations[*r];
                        for w in 0..n {
                            if rel.succ(w).intersects(&done[*a]) {
                                out.insert(w);
                            }
                        }
                    }
                }
                Op::Box(rel, a) => {
                    match rel {
                        Some(r) => {
                            out.clear();
                            let rel = &self.relations[*r];
                            for w in 0..n {
                                if rel.succ(w).is_subset(&done[*a]) {
                                    out.insert(w);
                                }
                            }
                        }
                        // Empty relation: box holds vacuously.
                        None => out.set_all(),
                    }
                }
                Op::DiamondU(a) => {
                    if done[*a].is_empty() {
                        out.clear();
                    } else {
                        out.set_all();
                    }
                }
                Op::BoxU(a) => {
                    if done[*a].count() == n {
                        out.set_all();
                    } else {
                        out.clear();
                    }
                }
            }
        }
        self.bufs.last().expect("nonempty program")
    }

    /// Evaluates under a model's valuation.
    pub fn eval_model(&mut self, model: &Model) -> &BitSet {
        let valuation: Vec<BitSet> = self
            .props
            .iter()
            .map(|p| model.prop_set(p))
            .collect();
        self.eval(&valuation)
    }
}

fn compile(
    f: &ModalFormula,
    frame: &Frame,
    props: &BTreeMap<&str, usize>,
    rel_index: &mut BTreeMap<String, usize>,
    relations: &mut Vec<Relation>,
    ops: &mut Vec<Op>,
) -> usize {
    let op = match f {
        ModalFormula::True => Op::True,
        ModalFormula::False => Op::False,
        ModalFormula::Prop(p) => Op::Prop(props[p.as_str()]),
        ModalFormula::Not(g) => Op::Not(compile(g, frame, props, rel_index, relations, ops)),
        ModalFormula::And(a, b) => {
            let ia = compile(a, frame, props, rel_index, relations, ops);
            let ib = compile(b, frame, props, rel_index, relations, ops);
            Op::And(ia, ib)
        }
        ModalFormula::Or(a, b) => {
            let ia = compile(a, frame, props, rel_index, relations, ops);
            let ib = compile(b, frame, props, rel_index, relations, ops);
            Op::Or(ia, ib)
        }
        ModalFormula::Implies(a, b) => {
            let ia = compile(a, frame, props, rel_index, relations, ops);
            let ib = compile(b, frame, props, rel_index, relations, ops);
            Op::Implies(ia, ib)
        }
        ModalFormula::Iff(a, b) => {
            let ia = compile(a, frame, props, rel_index, relations, ops);
            let ib = compile(b, frame, props, rel_index, relations, ops);
            Op::Iff(ia, ib)
        }
        ModalFormula::Diamond(l, g) => {
            let ig = compile(g, frame, props, rel_index, relations, ops);
            if l == UNIVERSAL_LABEL {
                Op::DiamondU(ig)
            } else {
                Op::Diamond(resolve(l, frame, rel_index, relations), ig)
            }
        }
        ModalFormula::Box(l, g) => {
            let ig = compile(g, frame, props, rel_index, relations, ops);
            if l == UNIVERSAL_LABEL {
                Op::BoxU(ig)
            } else {
                Op::Box(resolve(l, frame, rel_index, relations), ig)
            }
        }
    };
    ops.push(op);
    ops.len() - 1
}

fn resolve(
    label: &str,
    frame: &Frame,
    rel_index: &mut BTreeMap<String, usize>,
    relations: &mut Vec<Relation>,
) -> Option<usize> {
    if let Some(&i) = rel_index.get(label) {
        return Some(i);
    }
    let rel = frame.relation(label)?;
    relations.push(rel.clone());
    rel_index.insert(label.to_string(), relations.len() - 1);
    Some(relations.len() - 1)
}

/// Truth set of `formula` in `model`.
pub fn truth_set(model: &Model, formula: &ModalFormula) -> BitSet {
    let mut c = CompiledModal::new(&model.frame, formula);
    c.eval_model(model).clone()
}

/// Standard Kripke satisfaction at a world.
pub fn model_check(model: &Model, w: usize, formula: &ModalFormula) -> Result<bool, KripkeError> {
    if w >= model.n_worlds() {
        return Err(KripkeError::UnknownWorld(w));
    }
    Ok(truth_set(model, formula).contains(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_modal;

    #[test]
    fn single_reflexive_world() {
        let mut f = Frame::new(["w"]);
        f.add_edge("a", 0, 0);
        let mut m = Model::new(f);
        m.set_prop("p", 0);
        assert!(model_check(&m, 0, &parse_modal("[a]p").unwrap()).unwrap());
        assert!(model_check(&m, 0, &parse_modal("<a>p").unwrap()).unwrap());
    }

    #[test]
    fn two_worlds_diamond() {
        let mut f = Frame::new(["w", "v"]);
        f.add_edge("a", 0, 1);
        let mut m = Model::new(f);
        m.set_prop("p", 1);
        assert!(model_check(&m, 0, &parse_modal("<a>p").unwrap()).unwrap());
        assert!(!model_check(&m, 1, &parse_modal("<a>p").unwrap()).unwrap());
        // dead end validates any box
        assert!(model_check(&m, 1, &parse_modal("[a]false").unwrap()).unwrap());
    }

    #[test]
    fn universal_modality() {
        let f = Frame::new(["w", "v"]);
        let mut m = Model::new(f);
        m.set_prop("p", 1);
        assert!(model_check(&m, 0, &parse_modal("<U>p").unwrap()).unwrap());
        assert!(!model_check(&m, 0, &parse_modal("[U]p").unwrap()).unwrap());
    }

    #[test]
    fn missing_props_are_empty() {
        let f = Frame::new(["w"]);
        let m = Model::new(f);
        assert!(!model_check(&m, 0, &parse_modal("p").unwrap()).unwrap());
        assert!(model_check(&m, 0, &parse_modal("~p").unwrap()).unwrap());
    }

    #[test]
    fn unknown_world_errors() {
        let m = Model::new(Frame::new(["w"]));
        assert!(matches!(
            model_check(&m, 3, &ModalFormula::True),
            Err(KripkeError::UnknownWorld(3))
        ));
    }
}
