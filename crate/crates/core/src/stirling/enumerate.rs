//! Exhaustive enumeration oracles. These never consult a closed form: every
//! structure is generated and counted.

use crate::error::{Error, Result};

/// Largest ground-set size accepted by [`enumerate_oracle`].
pub const ENUMERATION_LIMIT: usize = 10;

const DISTINGUISHED_LIMIT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    /// Set partitions of `{1..n}`, optionally restricted to a block count.
    SetPartitions { blocks: Option<usize> },
    /// Ordered set partitions (preferential arrangements) of `{1..n}`.
    OrderedSetPartitions,
    /// Preferential arrangements of `{1..n}` with `bars` separating bars
    /// placed among the blocks.
    BarredPreferential { bars: usize },
    /// Partitions of `n + distinguished` elements into
    /// `blocks + distinguished` blocks keeping the distinguished elements
    /// in distinct blocks.
    RStirlingPartitions { blocks: usize, distinguished: usize },
}

/// Calls `visit(block_count)` once per set partition of `n` free elements
/// added to `seeded` pre-existing singleton blocks, generated as restricted
/// growth strings.
fn for_each_partition(n: usize, seeded: usize, visit: &mut impl FnMut(usize)) {
    fn extend(remaining: usize, blocks: usize, visit: &mut impl FnMut(usize)) {
        if remaining == 0 {
            visit(blocks);
            return;
        }
        for target in 0..=blocks {
            let next = if target == blocks { blocks + 1 } else { blocks };
            extend(remaining - 1, next, visit);
        }
    }
    extend(n, seeded, visit);
}

/// Calls `visit()` once per linear ordering of `k` labelled blocks.
fn for_each_ordering(k: usize, visit: &mut impl FnMut()) {
    fn place(used: u32, k: usize, visit: &mut impl FnMut()) {
        if used.count_ones() as usize == k {
            visit();
            return;
        }
        for b in 0..k {
            if used & (1 << b) == 0 {
                place(used | (1 << b), k, visit);
            }
        }
    }
    place(0, k, visit);
}

/// Number of ways to interleave `bars` identical bars with `k` ordered
/// blocks, by listing the bar position sets.
fn bar_placements(k: usize, bars: usize) -> u64 {
    fn choose(start: usize, slots: usize, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        (start..slots).map(|p| choose(p + 1, slots, left - 1)).sum()
    }
    choose(0, k + bars, bars)
}

pub fn enumerate_oracle(kind: Enumeration, n: usize) -> Result<u64> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut count = 0u64;
    match kind {
        Enumeration::SetPartitions { blocks } => {
            for_each_partition(n, 0, &mut |b| {
                if blocks.is_none_or(|want| want == b) {
                    count += 1;
                }
            });
        }
        Enumeration::OrderedSetPartitions => {
            for_each_partition(n, 0, &mut |b| for_each_ordering(b, &mut || count += 1));
        }
        Enumeration::BarredPreferential { bars } => {
            if bars > ENUMERATION_LIMIT {
                return Err(Error::EnumerationTooLarge {
                    n: bars,
                    limit: ENUMERATION_LIMIT,
                });
            }
            let placements: Vec<u64> = (0..=n).map(|k| bar_placements(k, bars)).collect();
            for_each_partition(n, 0, &mut |b| {
                for_each_ordering(b, &mut || count += placements[b]);
            });
        }
        Enumeration::RStirlingPartitions {
            blocks,
            distinguished,
        } => {
            if distinguished > DISTINGUISHED_LIMIT {
                return Err(Error::EnumerationTooLarge {
                    n: distinguished,
                    limit: DISTINGUISHED_LIMIT,
                });
            }
            for_each_partition(n, distinguished, &mut |b| {
                if b == blocks + distinguished {
                    count += 1;
                }
            });
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(kind: Enumeration, n: usize) -> u64 {
        enumerate_oracle(kind, n).unwrap()
    }

    #[test]
    fn bell_numbers() {
        let bell: Vec<u64> = (0..=8)
            .map(|n| count(Enumeration::SetPartitions { blocks: None }, n))
            .collect();
        assert_eq!(bell, [1, 1, 2, 5, 15, 52, 203, 877, 4140]);
    }

    #[test]
    fn fubini_numbers() {
        let fubini: Vec<u64> = (0..=6)
            .map(|n| count(Enumeration::OrderedSetPartitions, n))
            .collect();
        assert_eq!(fubini, [1, 1, 3, 13, 75, 541, 4683]);
    }

    #[test]
    fn barred_arrangements() {
        assert_eq!(count(Enumeration::BarredPreferential { bars: 1 }, 2), 8);
        assert_eq!(count(Enumeration::BarredPreferential { bars: 0 }, 3), 13);
        // A lone bar with no elements: one arrangement.
        assert_eq!(count(Enumeration::BarredPreferential { bars: 1 }, 0), 1);
    }

    #[test]
    fn r_stirling_partitions() {
        // {4 2}_1 with one distinguished element equals {4 2} = 7 when
        // counted as n = 3 free elements and k = 1 extra block.
        assert_eq!(
            count(
                Enumeration::RStirlingPartitions {
                    blocks: 1,
                    distinguished: 1
                },
                3
            ),
            7
        );
        // {3 2}_2 = 2: element 3 joins the block of 1 or of 2.
        assert_eq!(
            count(
                Enumeration::RStirlingPartitions {
                    blocks: 0,
                    distinguished: 2
                },
                1
            ),
            2
        );
    }

    #[test]
    fn guard() {
        assert_eq!(
            enumerate_oracle(Enumeration::OrderedSetPartitions, 11),
            Err(Error::EnumerationTooLarge { n: 11, limit: 10 })
        );
        assert_eq!(count(Enumeration::SetPartitions { blocks: None }, 0), 1);
    }
}
