//! Subsets of `[k]` as bit masks. Bit `i` stands for index `i + 1`.

/// A subset of `{1, ..., k}` with bit `i` set when `i + 1` is a member.
pub type Mask = u64;

/// Largest arity representable by [`Mask`].
pub const MAX_ARITY: usize = 63;

#[inline]
pub fn full(k: usize) -> Mask {
    debug_assert!(k <= MAX_ARITY);
    (1u64 << k) - 1
}

#[inline]
pub fn len(mask: Mask) -> usize {
    mask.count_ones() as usize
}

#[inline]
pub fn is_subset(small: Mask, big: Mask) -> bool {
    small & !big == 0
}

/// Index (0-based) of the lowest member; `None` for the empty set.
#[inline]
pub fn min_index(mask: Mask) -> Option<usize> {
    if mask == 0 {
        None
    } else {
        Some(mask.trailing_zeros() as usize)
    }
}

/// 0-based indices of the members, ascending.
pub fn indices(mask: Mask) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(i)
    })
}

/// All submasks of `mask`, including `0` and `mask` itself, in decreasing order.
pub fn submasks(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

/// Builds a mask from 1-based indices.
pub fn from_one_based<I: IntoIterator<Item = usize>>(items: I) -> Mask {
    items.into_iter().fold(0, |m, i| m | (1u64 << (i - 1)))
}

/// Renders a mask in the compact `13` style used for `{1, 3}`; falls back to
/// comma separation once an index has more than one digit.
pub fn label(mask: Mask) -> String {
    let idx: Vec<usize> = indices(mask).map(|i| i + 1).collect();
    if idx.iter().all(|&i| i < 10) {
        idx.iter().map(|i| i.to_string()).collect()
    } else {
        idx.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Unordered pairs `{I, J}` of disjoint nonempty proper subsets of `[k]`,
/// each reported once with `min(I) < min(J)`.
///
/// Iterates lazily; nothing proportional to `3^k` is held in memory.
pub fn disjoint_pairs(k: usize) -> impl Iterator<Item = (Mask, Mask)> {
    let all = full(k);
    (1..all).flat_map(move |i| {
        let rest = all & !i;
        submasks(rest)
            .filter(move |&j| j != 0 && j != all && i.trailing_zeros() < j.trailing_zeros())
            .map(move |j| (i, j))
    })
}

/// Ordered pairs `(I, J)` of disjoint nonempty proper subsets of `[k]`.
pub fn ordered_disjoint_pairs(k: usize) -> impl Iterator<Item = (Mask, Mask)> {
    let all = full(k);
    (1..all).flat_map(move |i| {
        let rest = all & !i;
        submasks(rest).filter(move |&j| j != 0).map(move |j| (i, j))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submasks_cover_powerset() {
        let m = 0b1011;
        let subs: Vec<Mask> = submasks(m).collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|&s| is_subset(s, m)));
    }

    #[test]
    fn disjoint_pair_counts() {
        for k in 2..=8usize {
            let expected = (3usize.pow(k as u32) + 1 - 2usize.pow(k as u32 + 1)) / 2;
            assert_eq!(disjoint_pairs(k).count(), expected, "k = {k}");
            assert_eq!(ordered_disjoint_pairs(k).count(), 2 * expected, "k = {k}");
        }
    }

    #[test]
    fn labels() {
        assert_eq!(label(from_one_based([1, 3])), "13");
        assert_eq!(label(from_one_based([2, 11])), "2,11");
        assert_eq!(indices(0b10110).collect::<Vec<_>>(), vec![1, 2, 4]);
    }
}
