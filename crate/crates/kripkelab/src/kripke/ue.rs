//! Ultrafilter extension of a finite frame. Every ultrafilter over a
//! finite set is principal, so the extension is computed over the
//! generators, and the relation membership condition is evaluated
//! literally by quantifying over all subsets of the world set.

use super::{Frame, KripkeError};

/// Largest frame accepted; the literal subset quantification is
/// exponential in the number of worlds.
pub const UE_MAX_WORLDS: usize = 16;

/// Builds `ue F` over principal ultrafilters and returns it together with
/// the isomorphism `w -> principal(w)` (identically indexed).
///
/// The returned frame has an edge `(u, v)` for label `a` exactly when, for
/// every subset `X` of the worlds with `gen(v) in X`, the set
/// `{w : (w, y) in R_a for some y in X}` belongs to the principal
/// ultrafilter at `gen(u)`, i.e. contains `gen(u)`.
pub fn ultrafilter_extension_finite(f: &Frame) -> Result<(Frame, Vec<usize>), KripkeError> {
    let n = f.n_worlds();
    if n > UE_MAX_WORLDS {
        return Err(KripkeError::TooLarge(n, UE_MAX_WORLDS));
    }
    let mut out = Frame::new(f.world_names().iter().map(|w| format!("uf_{w}")));
    for label in f.labels().collect::<Vec<_>>() {
        out.ensure_label(label);
    }
    for (label, rel) in f.relations() {
        for u in 0..n {
            'pair: for v in 0..n {
                // All subsets X with v in X.
                for x_mask in 0..1u32 << n {
                    if x_mask >> v & 1 == 0 {
                        continue;
                    }
                    // u must see some member of X.
                    let sees = rel.succ(u).iter().any(|y| x_mask >> y & 1 == 1);
                    if !sees {
                        continue 'pair;
                    }
                }
                out.add_edge(label, u, v);
            }
        }
    }
    Ok((out, (0..n).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frames_equal_up_to_rename(a: &Frame, b: &Frame) -> bool {
        a.n_worlds() == b.n_worlds()
            && a.labels().collect::<Vec<_>>() == b.labels().collect::<Vec<_>>()
            && a.relations()
                .iter()
                .all(|(l, r)| b.relation(l).map_or(false, |r2| r.pairs() == r2.pairs()))
    }

    #[test]
    fn one_point_irreflexive() {
        let mut f = Frame::new(["w"]);
        f.ensure_label("a");
        let (ue, iso) = ultrafilter_extension_finite(&f).unwrap();
        assert_eq!(iso, vec![0]);
        assert!(frames_equal_up_to_rename(&f, &ue));
    }

    #[test]
    fn two_chain_identity() {
        let mut f = Frame::new(["w", "v"]);
        f.add_edge("a", 0, 1);
        let (ue, _) = ultrafilter_extension_finite(&f).unwrap();
        assert!(frames_equal_up_to_rename(&f, &ue));
    }

    #[test]
    fn too_large_rejected() {
        let f = Frame::with_worlds(UE_MAX_WORLDS + 1);
        assert!(matches!(
            ultrafilter_extension_finite(&f),
            Err(KripkeError::TooLarge(..))
        ));
    }
}
