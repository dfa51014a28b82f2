//! Ballots written as sequences of candidates and candidate sets.

use std::collections::BTreeSet;

use super::{CandidateId, ElectionError};

/// One item of an order specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderItem {
    One(CandidateId),
    /// All members of the set, in the fixed set order.
    Set(Vec<CandidateId>),
    /// All members of the set, in the reverse of the fixed set order.
    Rev(Vec<CandidateId>),
}

/// The fixed order in which a set item is expanded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SetOrder {
    #[default]
    Ascending,
    Descending,
}

/// Expands `items` with sets listed in ascending id order.
pub fn build_order(
    universe: &[CandidateId],
    items: &[OrderItem],
) -> Result<Vec<CandidateId>, ElectionError> {
    build_order_with(universe, items, SetOrder::Ascending)
}

/// Expands `items` into a linear order over `universe`.
///
/// The items must partition `universe`.
pub fn build_order_with(
    universe: &[CandidateId],
    items: &[OrderItem],
    set_order: SetOrder,
) -> Result<Vec<CandidateId>, ElectionError> {
    let mut out = Vec::with_capacity(universe.len());
    for item in items {
        match item {
            OrderItem::One(c) => out.push(*c),
            OrderItem::Set(s) | OrderItem::Rev(s) => {
                let mut s = s.clone();
                s.sort_unstable();
                let reversed = matches!(item, OrderItem::Rev(_)) ^ (set_order == SetOrder::Descending);
                if reversed {
                    s.reverse();
                }
                out.extend(s);
            }
        }
    }
    let allowed: BTreeSet<_> = universe.iter().copied().collect();
    let mut seen = BTreeSet::new();
    for &c in &out {
        if !allowed.contains(&c) {
            return Err(ElectionError::UnknownCandidate(c));
        }
        if !seen.insert(c) {
            return Err(ElectionError::OrderOverlap(c));
        }
    }
    if let Some(&missing) = allowed.difference(&seen).next() {
        return Err(ElectionError::OrderOmits(missing));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u32]) -> Vec<CandidateId> {
        v.iter().map(|&i| CandidateId(i)).collect()
    }

    #[test]
    fn sets_expand_ascending() {
        // p = 0, b1 = 1, b2 = 2, d = 3
        let u = ids(&[0, 1, 2, 3]);
        let o = build_order(
            &u,
            &[
                OrderItem::One(CandidateId(0)),
                OrderItem::Set(ids(&[2, 1])),
                OrderItem::One(CandidateId(3)),
            ],
        )
        .unwrap();
        assert_eq!(o, ids(&[0, 1, 2, 3]));
    }

    #[test]
    fn reversed_sets_expand_descending() {
        let u = ids(&[0, 1, 2]);
        let o = build_order(&u, &[OrderItem::Rev(ids(&[1, 2])), OrderItem::One(CandidateId(0))])
            .unwrap();
        assert_eq!(o, ids(&[2, 1, 0]));
        let alt = build_order_with(
            &u,
            &[OrderItem::Rev(ids(&[1, 2])), OrderItem::One(CandidateId(0))],
            SetOrder::Descending,
        )
        .unwrap();
        assert_eq!(alt, ids(&[1, 2, 0]));
    }

    #[test]
    fn items_must_partition() {
        let u = ids(&[0, 1, 2]);
        assert_eq!(
            build_order(&u, &[OrderItem::Set(ids(&[0, 1])), OrderItem::One(CandidateId(1))]),
            Err(ElectionError::OrderOverlap(CandidateId(1)))
        );
        assert_eq!(
            build_order(&u, &[OrderItem::Set(ids(&[0, 1]))]),
            Err(ElectionError::OrderOmits(CandidateId(2)))
        );
    }

    #[test]
    fn av_reduction_voter_shape() {
        // B = {1..6}, p = 0, d = 7, S_i = {2, 4, 6}: B - S_i > p > S_i > d
        let u = ids(&[0, 1, 2, 3, 4, 5, 6, 7]);
        let s = ids(&[2, 4, 6]);
        let rest = ids(&[1, 3, 5]);
        let o = build_order(
            &u,
            &[
                OrderItem::Set(rest),
                OrderItem::One(CandidateId(0)),
                OrderItem::Set(s.clone()),
                OrderItem::One(CandidateId(7)),
            ],
        )
        .unwrap();
        let p_pos = o.iter().position(|&c| c == CandidateId(0)).unwrap();
        let below: BTreeSet<_> = o[p_pos + 1..].iter().copied().collect();
        let b_below: Vec<_> = (1..=6).map(CandidateId).filter(|c| below.contains(c)).collect();
        assert_eq!(b_below, s);
    }
}
