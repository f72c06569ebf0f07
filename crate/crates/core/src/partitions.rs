//! Exact combinatorics over partitions of `{1..n}`: streaming enumeration of
//! set partitions with a fixed block count, integer-partition shapes and
//! their multiplicities, and Stirling numbers of the second kind with
//! log-domain asymptotics.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::state::QubitSubset;

/// Largest `n` for which exact Stirling numbers, shapes and multiplicities
/// are available.
pub const MAX_COMBINATORICS_N: usize = 64;

/// Largest `n` for which set partitions can be enumerated exhaustively.
pub const MAX_ENUMERATION_N: usize = 16;

/// A partition of `{1..n}` into disjoint nonempty blocks, canonically
/// ordered by each block's minimum element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<QubitSubset>,
}

impl SetPartition {
    pub fn new(n: usize, blocks: Vec<QubitSubset>) -> Result<Self> {
        let mut union = 0u32;
        for b in &blocks {
            if b.n() != n {
                return Err(Error::SubsetSystemMismatch { expected: n, got: b.n() });
            }
            if b.is_empty() || union & b.mask() != 0 {
                return Err(Error::InvalidPartition { n });
            }
            union |= b.mask();
        }
        if union != crate::state::full_mask(n) {
            return Err(Error::InvalidPartition { n });
        }
        let mut blocks = blocks;
        blocks.sort_by_key(|b| b.mask().trailing_zeros());
        Ok(Self { n, blocks })
    }

    /// Builds from a restricted growth string: position `i` (0-based) is
    /// qubit `i+1`, and equal labels share a block.
    pub fn from_rgs(rgs: &[u8]) -> Result<Self> {
        let n = rgs.len();
        if n == 0 || n > 32 {
            return Err(Error::InvalidPartition { n });
        }
        let m = rgs.iter().copied().max().unwrap() as usize + 1;
        let mut masks = vec![0u32; m];
        for (i, &label) in rgs.iter().enumerate() {
            masks[label as usize] |= 1 << i;
        }
        let blocks = masks
            .into_iter()
            .map(|mask| QubitSubset::from_mask(n, mask))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[QubitSubset] {
        &self.blocks
    }

    /// The shape `|P|`: block sizes sorted ascending.
    pub fn shape(&self) -> PartitionShape {
        let mut sizes: Vec<usize> = self.blocks.iter().map(|b| b.size()).collect();
        sizes.sort_unstable();
        PartitionShape { sizes }
    }
}

/// An integer partition of `n`: nondecreasing positive block sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct PartitionShape {
    sizes: Vec<usize>,
}

impl PartitionShape {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty()
            || sizes.iter().any(|&s| s == 0)
            || sizes.windows(2).any(|w| w[0] > w[1])
        {
            return Err(Error::InvalidShape);
        }
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn parts(&self) -> usize {
        self.sizes.len()
    }
}

impl std::fmt::Display for PartitionShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, s) in self.sizes.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

fn stirling_table() -> &'static Vec<Vec<BigUint>> {
    static TABLE: OnceLock<Vec<Vec<BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n_max = MAX_COMBINATORICS_N;
        let mut t: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        t.push(vec![BigUint::one()]); // S(0,0) = 1
        for n in 1..=n_max {
            let mut row = vec![BigUint::zero(); n + 1];
            for m in 1..=n {
                // S(n,m) = S(n-1,m-1) + m*S(n-1,m)
                let carry = t[n - 1][m - 1].clone();
                let grow = if m < n { &t[n - 1][m] * BigUint::from(m) } else { BigUint::zero() };
                row[m] = carry + grow;
            }
            t.push(row);
        }
        t
    })
}

fn factorials() -> &'static Vec<BigUint> {
    static TABLE: OnceLock<Vec<BigUint>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![BigUint::one()];
        for i in 1..=MAX_COMBINATORICS_N {
            let next = &t[i - 1] * BigUint::from(i);
            t.push(next);
        }
        t
    })
}

fn check_range(n: usize, m: usize) -> Result<()> {
    if n == 0 || n > MAX_COMBINATORICS_N {
        return Err(Error::CombinatoricsCap { n, cap: MAX_COMBINATORICS_N });
    }
    if m == 0 || m > n {
        return Err(Error::BlockCountRange { n, m });
    }
    Ok(())
}

/// Exact Stirling number of the second kind `S(n, m)` for `n <= 64`.
pub fn stirling2(n: usize, m: usize) -> Result<BigUint> {
    check_range(n, m)?;
    Ok(stirling_table()[n][m].clone())
}

/// Exact binomial coefficient for `n <= 64`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let f = factorials();
    &f[n] / (&f[k] * &f[n - k])
}

/// All integer partitions of `n` into exactly `m` positive parts, each with
/// ascending parts, listed lexicographically.
pub fn shapes(n: usize, m: usize) -> Result<Vec<PartitionShape>> {
    check_range(n, m)?;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m);
    fn rec(remaining: usize, parts_left: usize, min_part: usize, current: &mut Vec<usize>, out: &mut Vec<PartitionShape>) {
        if parts_left == 1 {
            if remaining >= min_part {
                current.push(remaining);
                out.push(PartitionShape { sizes: current.clone() });
                current.pop();
            }
            return;
        }
        let max_first = remaining / parts_left;
        for first in min_part..=max_first {
            current.push(first);
            rec(remaining - first, parts_left - 1, first, current, out);
            current.pop();
        }
    }
    rec(n, m, 1, &mut current, &mut out);
    Ok(out)
}

/// Number of set partitions realizing the given shape:
/// `n! / (prod sizes_i! * prod count_j!)` where `count_j` is the number of
/// blocks of size `j`.
pub fn multiplicity(shape: &PartitionShape) -> BigUint {
    let n = shape.total();
    debug_assert!(n <= MAX_COMBINATORICS_N);
    let f = factorials();
    let mut denom = BigUint::one();
    let mut run = 0usize;
    let mut prev = 0usize;
    for &s in shape.sizes() {
        denom *= &f[s];
        if s == prev {
            run += 1;
        } else {
            denom *= &f[run];
            prev = s;
            run = 1;
        }
    }
    denom *= &f[run];
    &f[n] / denom
}

/// `ln` of the large-`n` approximation `S(n, m) ~ m^n / m!` for fixed `m`.
pub fn stirling_asym_large_n(n: usize, m: usize) -> f64 {
    debug_assert!(m >= 1 && n > m);
    n as f64 * (m as f64).ln() - ln_factorial(m)
}

/// `ln` of the small-gap approximation `S(n, n-l) ~ (m^2/2)^l / l!` with
/// `m = n - l`, for large `n` and small `l`.
pub fn stirling_asym_small_gap(n: usize, l: usize) -> f64 {
    debug_assert!(l < n);
    let m = (n - l) as f64;
    l as f64 * (m * m / 2.0).ln() - ln_factorial(l)
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Exact operation-count estimate `m * S(n, m)` for assembling the measure
/// from precomputed subset entropies.
pub fn op_count_estimate(n: usize, m: usize) -> Result<BigUint> {
    Ok(stirling2(n, m)? * BigUint::from(m))
}

/// Correctly-rounded `f64` value of a big integer. Adequate for the whole
/// `n <= 64` range of this crate (values stay far below f64 overflow).
pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Natural log of a big integer, via bit-shifted conversion so the result
/// stays accurate even when `x` itself would overflow an `f64`.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1023 {
        big_to_f64(x).ln()
    } else {
        let shift = bits - 1000;
        big_to_f64(&(x >> shift)).ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Streaming enumeration of all partitions of `{1..n}` into exactly `m`
/// blocks, in restricted-growth-string lexicographic order.
///
/// Generation is reject-free: a completion-count table prunes every prefix
/// that cannot reach exactly `m` blocks, and the same table ranks/unranks
/// strings so the stream can be split into deterministic chunks.
pub struct BlockPartitionIter {
    n: usize,
    m: usize,
    rgs: Vec<u8>,
    // used[i] = number of distinct labels in rgs[0..=i]
    used: Vec<u8>,
    // ways[i * (m+1) + k] = completions of positions i..n given k labels used
    ways: Vec<u64>,
    started: bool,
    exhausted: bool,
}

impl BlockPartitionIter {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n > MAX_ENUMERATION_N {
            return Err(Error::EnumerationCap { n, cap: MAX_ENUMERATION_N });
        }
        if n == 0 {
            return Err(Error::EnumerationCap { n, cap: MAX_ENUMERATION_N });
        }
        if m == 0 || m > n {
            return Err(Error::BlockCountRange { n, m });
        }
        let mut ways = vec![0u64; (n + 1) * (m + 1)];
        for k in 0..=m {
            ways[n * (m + 1) + k] = u64::from(k == m);
        }
        for i in (1..n).rev() {
            for k in 1..=m {
                let keep = k as u64 * ways[(i + 1) * (m + 1) + k];
                let open = if k < m { ways[(i + 1) * (m + 1) + k + 1] } else { 0 };
                ways[i * (m + 1) + k] = keep + open;
            }
        }
        let mut it = Self {
            n,
            m,
            rgs: vec![0; n],
            used: vec![0; n],
            ways,
            started: false,
            exhausted: false,
        };
        it.fill_min_from(0, 0);
        Ok(it)
    }

    /// Total number of strings in the stream, `S(n, m)`.
    pub fn total_count(&self) -> u64 {
        if self.n == 1 {
            1
        } else {
            self.ways[(self.m + 1) + 1]
        }
    }

    fn ways_at(&self, i: usize, k: usize) -> u64 {
        self.ways[i * (self.m + 1) + k]
    }

    /// Fills positions `from..n` with the lexicographically smallest valid
    /// completion; `used_before` labels are in use before `from`.
    fn fill_min_from(&mut self, from: usize, used_before: usize) {
        let mut u = used_before;
        for i in from..self.n {
            if self.m - u == self.n - i {
                self.rgs[i] = u as u8;
                u += 1;
            } else {
                self.rgs[i] = 0;
                if u == 0 {
                    u = 1;
                }
            }
            self.used[i] = u as u8;
        }
    }

    /// Advances to the next string; `false` when the stream is exhausted.
    fn step(&mut self) -> bool {
        let n = self.n;
        for j in (1..n).rev() {
            let labels_before = self.used[j - 1] as usize;
            let max_label = labels_before.min(self.m - 1);
            let mut label = self.rgs[j] as usize + 1;
            while label <= max_label {
                let used_after = labels_before.max(label + 1);
                if self.m - used_after <= n - 1 - j {
                    self.rgs[j] = label as u8;
                    self.used[j] = used_after as u8;
                    self.fill_min_from(j + 1, used_after);
                    return true;
                }
                label += 1;
            }
        }
        false
    }

    /// Repositions the stream at the string of the given lexicographic rank.
    pub(crate) fn seek(&mut self, rank: u64) {
        debug_assert!(rank < self.total_count());
        self.rgs[0] = 0;
        self.used[0] = 1;
        let mut r = rank;
        let mut k = 1usize;
        for i in 1..self.n {
            let keep = self.ways_at(i + 1, k);
            if (k as u64) * keep > r {
                self.rgs[i] = (r / keep) as u8;
                r %= keep;
            } else {
                r -= k as u64 * keep;
                self.rgs[i] = k as u8;
                k += 1;
            }
            self.used[i] = k as u8;
        }
        self.started = false;
        self.exhausted = false;
    }

    /// Streaming access to the current string without allocation. Returns
    /// the current string first, then successors.
    pub(crate) fn next_rgs(&mut self) -> Option<&[u8]> {
        if self.exhausted {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.rgs);
        }
        if self.step() {
            Some(&self.rgs)
        } else {
            self.exhausted = true;
            None
        }
    }
}

impl Iterator for BlockPartitionIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_rgs()
            .map(|rgs| SetPartition::from_rgs(rgs).expect("generated string is valid"))
    }
}

/// All partitions of `{1..n}` into exactly `m` blocks as a stream; the total
/// count equals `S(n, m)`.
pub fn enumerate_set_partitions(n: usize, m: usize) -> Result<BlockPartitionIter> {
    BlockPartitionIter::new(n, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_bigint::BigInt;
    use std::collections::BTreeSet;

    /// Brute-force oracle: recursively assign each element to an existing or
    /// a new block, then filter on the block count.
    fn brute_force_partitions(n: usize, m: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut blocks: Vec<u32> = Vec::new();
        fn rec(elem: usize, n: usize, m: usize, blocks: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if elem == n {
                if blocks.len() == m {
                    out.push(blocks.clone());
                }
                return;
            }
            for i in 0..blocks.len() {
                blocks[i] |= 1 << elem;
                rec(elem + 1, n, m, blocks, out);
                blocks[i] &= !(1 << elem);
            }
            blocks.push(1 << elem);
            rec(elem + 1, n, m, blocks, out);
            blocks.pop();
        }
        rec(0, n, m, &mut blocks, &mut out);
        out
    }

    /// Bell numbers via the Bell triangle, independent of the Stirling table.
    fn bell_triangle(n_max: usize) -> Vec<BigUint> {
        let mut bells = vec![BigUint::one()];
        let mut row = vec![BigUint::one()];
        for _ in 1..=n_max {
            let mut next = vec![row.last().unwrap().clone()];
            for v in &row {
                let last = next.last().unwrap().clone();
                next.push(last + v);
            }
            bells.push(next[0].clone());
            row = next;
        }
        bells
    }

    #[test]
    fn stirling_golden_values() {
        assert_eq!(stirling2(4, 2).unwrap(), BigUint::from(7u32));
        assert_eq!(stirling2(3, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(stirling2(8, 3).unwrap(), BigUint::from(966u32));
        for n in 1..=20 {
            assert_eq!(stirling2(n, n).unwrap(), BigUint::one());
            assert_eq!(stirling2(n, 1).unwrap(), BigUint::one());
        }
        assert!(stirling2(5, 0).is_err());
        assert!(stirling2(5, 6).is_err());
        assert!(stirling2(65, 2).is_err());
    }

    #[test]
    fn stirling_matches_brute_force_count() {
        for n in 1..=8 {
            for m in 1..=n {
                let brute = brute_force_partitions(n, m).len();
                assert_eq!(stirling2(n, m).unwrap(), BigUint::from(brute));
            }
        }
    }

    #[test]
    fn stirling_recurrence_and_closed_forms() {
        for n in 2..=40usize {
            for m in 2..=n {
                let lhs = stirling2(n, m).unwrap() - stirling2(n - 1, m - 1).unwrap();
                let rhs = if m <= n - 1 {
                    stirling2(n - 1, m).unwrap() * BigUint::from(m)
                } else {
                    BigUint::zero()
                };
                assert_eq!(lhs, rhs, "recurrence failed at ({n},{m})");
            }
            assert_eq!(
                stirling2(n, 2).unwrap(),
                (BigUint::one() << (n - 1)) - BigUint::one()
            );
            if n >= 4 {
                let closed = n * (n - 1) * (n - 2) * (3 * n - 5) / 24;
                assert_eq!(stirling2(n, n - 2).unwrap(), BigUint::from(closed));
            }
        }
    }

    #[test]
    fn stirling_exponential_lower_bound() {
        for n in 3..=30usize {
            for m in 2..n {
                let bound = BigUint::from(m).pow((n - m) as u32);
                assert!(stirling2(n, m).unwrap() > bound, "bound failed at ({n},{m})");
            }
        }
    }

    #[test]
    fn stirling_explicit_sum_oracle() {
        // Alternating-sum formula: S(n,m) = sum_k (-1)^(m-k) k^(n-1) / ((k-1)!(m-k)!).
        let f = factorials();
        for n in 1..=30usize {
            for m in 1..=n {
                let mut acc = BigRational::from(BigInt::from(0));
                for k in 1..=m {
                    let num = BigInt::from(k).pow((n - 1) as u32);
                    let den = BigInt::from(&f[k - 1] * &f[m - k]);
                    let term = BigRational::new(num, den);
                    if (m - k) % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                assert!(acc.is_integer());
                assert_eq!(
                    acc.to_integer().to_biguint().unwrap(),
                    stirling2(n, m).unwrap()
                );
            }
        }
    }

    #[test]
    fn bell_consistency() {
        let bells = bell_triangle(20);
        for n in 1..=20usize {
            let total: BigUint = (1..=n).map(|m| stirling2(n, m).unwrap()).sum();
            assert_eq!(total, bells[n]);
        }
    }

    #[test]
    fn enumeration_small_cases() {
        let three_two: Vec<SetPartition> =
            enumerate_set_partitions(3, 2).unwrap().collect();
        assert_eq!(three_two.len(), 3);
        // RGS-lex order 001, 010, 011: {12}{3}, {13}{2}, {1}{23}.
        let masks: Vec<Vec<u32>> = three_two
            .iter()
            .map(|p| p.blocks().iter().map(|b| b.mask()).collect())
            .collect();
        assert_eq!(masks[0], vec![0b011, 0b100]);
        assert_eq!(masks[1], vec![0b101, 0b010]);
        assert_eq!(masks[2], vec![0b001, 0b110]);

        assert_eq!(enumerate_set_partitions(4, 2).unwrap().count(), 7);

        let singletons: Vec<SetPartition> =
            enumerate_set_partitions(5, 5).unwrap().collect();
        assert_eq!(singletons.len(), 1);
        assert!(singletons[0].blocks().iter().all(|b| b.size() == 1));

        let whole: Vec<SetPartition> = enumerate_set_partitions(4, 1).unwrap().collect();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole[0].blocks()[0].size(), 4);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 1..=8usize {
            for m in 1..=n {
                let brute: BTreeSet<Vec<u32>> = brute_force_partitions(n, m)
                    .into_iter()
                    .map(|mut blocks| {
                        blocks.sort_unstable();
                        blocks
                    })
                    .collect();
                let enumerated: Vec<Vec<u32>> = enumerate_set_partitions(n, m)
                    .unwrap()
                    .map(|p| {
                        let mut masks: Vec<u32> =
                            p.blocks().iter().map(|b| b.mask()).collect();
                        masks.sort_unstable();
                        masks
                    })
                    .collect();
                let unique: BTreeSet<Vec<u32>> = enumerated.iter().cloned().collect();
                assert_eq!(unique.len(), enumerated.len(), "duplicates at ({n},{m})");
                assert_eq!(unique, brute, "set mismatch at ({n},{m})");
            }
        }
    }

    #[test]
    fn enumeration_counts_match_stirling() {
        for n in 1..=11usize {
            for m in 1..=n {
                let it = enumerate_set_partitions(n, m).unwrap();
                assert_eq!(BigUint::from(it.total_count()), stirling2(n, m).unwrap());
                let streamed = enumerate_set_partitions(n, m).unwrap().fold(0u64, |acc, _| acc + 1);
                assert_eq!(BigUint::from(streamed), stirling2(n, m).unwrap());
            }
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_seekable() {
        for (n, m) in [(6, 3), (7, 2), (8, 4), (9, 9), (9, 1)] {
            let mut it = BlockPartitionIter::new(n, m).unwrap();
            let mut strings = Vec::new();
            while let Some(rgs) = it.next_rgs() {
                strings.push(rgs.to_vec());
            }
            for w in strings.windows(2) {
                assert!(w[0] < w[1], "not lexicographic at ({n},{m})");
            }
            // seek(r) must land on the r-th string.
            let mut it = BlockPartitionIter::new(n, m).unwrap();
            for (r, expect) in strings.iter().enumerate() {
                it.seek(r as u64);
                assert_eq!(it.next_rgs().unwrap(), expect.as_slice());
            }
        }
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            enumerate_set_partitions(17, 2),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn shapes_examples() {
        let s42 = shapes(4, 2).unwrap();
        assert_eq!(s42.len(), 2);
        assert_eq!(s42[0].sizes(), &[1, 3]);
        assert_eq!(s42[1].sizes(), &[2, 2]);

        let s82 = shapes(8, 2).unwrap();
        let expect: Vec<Vec<usize>> =
            vec![vec![1, 7], vec![2, 6], vec![3, 5], vec![4, 4]];
        assert_eq!(
            s82.iter().map(|s| s.sizes().to_vec()).collect::<Vec<_>>(),
            expect
        );

        let s51 = shapes(5, 1).unwrap();
        assert_eq!(s51.len(), 1);
        assert_eq!(s51[0].sizes(), &[5]);
    }

    #[test]
    fn multiplicity_examples() {
        let h13 = multiplicity(&PartitionShape::new(vec![1, 3]).unwrap());
        assert_eq!(h13, BigUint::from(4u32));
        let h22 = multiplicity(&PartitionShape::new(vec![2, 2]).unwrap());
        assert_eq!(h22, BigUint::from(3u32));
        let ones = multiplicity(&PartitionShape::new(vec![1; 9]).unwrap());
        assert_eq!(ones, BigUint::one());
    }

    #[test]
    fn multiplicities_sum_to_stirling() {
        for n in 1..=30usize {
            for m in 1..=n {
                let total: BigUint =
                    shapes(n, m).unwrap().iter().map(multiplicity).sum();
                assert_eq!(total, stirling2(n, m).unwrap(), "mismatch at ({n},{m})");
            }
        }
    }

    #[test]
    fn enumerated_shapes_appear_in_shape_list() {
        for (n, m) in [(7, 3), (8, 4), (6, 2)] {
            let listed: BTreeSet<Vec<usize>> = shapes(n, m)
                .unwrap()
                .into_iter()
                .map(|s| s.sizes().to_vec())
                .collect();
            for p in enumerate_set_partitions(n, m).unwrap() {
                assert!(listed.contains(&p.shape().sizes().to_vec()));
            }
        }
    }

    #[test]
    fn asymptotic_large_n() {
        // Fixed m, large n: exact/approx within 10% for (50, 3).
        let exact = ln_big(&stirling2(50, 3).unwrap());
        let approx = stirling_asym_large_n(50, 3);
        let ratio = (exact - approx).exp();
        assert!((0.9..=1.1).contains(&ratio), "ratio {ratio}");

        // (40, 2): log error below 0.15.
        let exact = ln_big(&stirling2(40, 2).unwrap());
        assert!((exact - stirling_asym_large_n(40, 2)).abs() < 0.15);

        // m = 1 is reproduced exactly: ln approx = 0 = ln S(n, 1).
        for n in 2..=50 {
            assert_eq!(stirling_asym_large_n(n, 1), 0.0);
        }
    }

    #[test]
    fn asymptotic_small_gap() {
        for n in 2..=50 {
            assert_eq!(stirling_asym_small_gap(n, 0), 0.0);
        }

        // S(50, 48) = 50*49*48*145/24 = 710500 against (48^2/2)^2/2!.
        let exact = ln_big(&stirling2(50, 48).unwrap());
        assert_eq!(stirling2(50, 48).unwrap(), BigUint::from(710_500u32));
        let approx = stirling_asym_small_gap(50, 2);
        let ratio = (exact - approx).exp();
        assert!((ratio - 1.0).abs() < 0.1, "ratio {ratio}");

        // S(30, 29) = C(30, 2) = 435 against 29^2/2 = 420.5.
        assert_eq!(stirling2(30, 29).unwrap(), BigUint::from(435u32));
        let ratio =
            (ln_big(&stirling2(30, 29).unwrap()) - stirling_asym_small_gap(30, 1)).exp();
        assert!((ratio - 435.0 / 420.5).abs() < 1e-10);
    }

    #[test]
    fn op_count_examples() {
        assert_eq!(op_count_estimate(4, 2).unwrap(), BigUint::from(14u32));
        assert_eq!(op_count_estimate(8, 2).unwrap(), BigUint::from(254u32));
        for n in 1..=10 {
            assert_eq!(op_count_estimate(n, n).unwrap(), BigUint::from(n));
        }
    }

    #[test]
    fn ln_big_handles_huge_values() {
        // 2^2000 exceeds f64 range; ln must still be accurate.
        let x = BigUint::one() << 2000;
        let expect = 2000.0 * std::f64::consts::LN_2;
        assert!((ln_big(&x) - expect).abs() < 1e-9);
    }

    #[test]
    fn set_partition_validation() {
        let b1 = QubitSubset::from_mask(3, 0b011).unwrap();
        let b2 = QubitSubset::from_mask(3, 0b100).unwrap();
        let p = SetPartition::new(3, vec![b2, b1]).unwrap();
        assert_eq!(p.blocks()[0].mask(), 0b011); // sorted by min element
        assert_eq!(p.shape().sizes(), &[1, 2]);

        let overlap = QubitSubset::from_mask(3, 0b110).unwrap();
        assert!(SetPartition::new(3, vec![b1, overlap]).is_err());
        assert!(SetPartition::new(3, vec![b1]).is_err());
    }
}
