//! The separability measure family for arbitrary pure states.
//!
//! For a subset `s`, the normalized linear entropy
//! `eta_s = N(|s|) (1 - tr rho_s^2)` with `N(a) = 2^a / (2^a - 1)` vanishes
//! exactly when the state factorizes across `(s, complement)` and equals 1
//! when the marginal is maximally mixed. A partition `P` of the qubits gets
//! the arithmetic mean `xi_P` of its blocks' entropies, and the measure
//! `R_m` is the geometric mean of `xi_P` over every partition into exactly
//! `m` blocks. `R_m = 0` iff the state is separable into at least `m`
//! subsystems; `R_n` is the Meyer-Wallach measure.
//!
//! Products over up to millions of partitions are accumulated in the log
//! domain, and the `1/S(n,m)` exponent is applied by dividing the log sum.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::partitions::{
    big_to_f64, stirling2, BlockPartitionIter, PartitionShape, SetPartition,
    MAX_ENUMERATION_N,
};
use crate::state::{full_mask, gram_purity, reduced_purity, QubitSubset, StateVector};

/// Entropies below this threshold are clamped to exactly zero, turning the
/// numerically tiny purity defect of a product state into exact separability.
pub const DEFAULT_EPS_SEP: f64 = 1e-9;

/// Exhaustive enumeration over all block counts is allowed up to this `n`.
pub const GENERIC_CAP: usize = 12;

/// Beyond [`GENERIC_CAP`], single measures remain exhaustive up to
/// `n <=` [`MAX_ENUMERATION_N`] when `n - m <=` this gap, where the
/// partition count grows only polynomially.
pub const NEAR_DIAGONAL_GAP: usize = 4;

/// Normalization factor `N(a) = 2^a / (2^a - 1)`, written as
/// `1 / (1 - 2^-a)` for accuracy at large `a`.
pub fn normalization(size: usize) -> f64 {
    1.0 / (1.0 - 0.5f64.powi(size as i32))
}

fn clamp_eta(raw: f64, eps_sep: f64) -> f64 {
    if raw < eps_sep {
        0.0
    } else {
        raw
    }
}

/// Normalized linear entropy of the subsystem `s`; zero (after clamping at
/// `eps_sep`) iff the state is separable across `(s, complement)`.
pub fn linear_entropy(psi: &StateVector, s: &QubitSubset, eps_sep: f64) -> Result<f64> {
    let purity = reduced_purity(psi, s)?;
    Ok(clamp_eta(normalization(s.size()) * (1.0 - purity), eps_sep))
}

/// Arithmetic mean of the block entropies of `p`; zero iff the state is
/// separable according exactly to this partition.
pub fn partition_entropy(psi: &StateVector, p: &SetPartition, eps_sep: f64) -> Result<f64> {
    if p.n() != psi.n() {
        return Err(Error::QubitCountMismatch { left: psi.n(), right: p.n() });
    }
    let mut sum = 0.0;
    for block in p.blocks() {
        sum += linear_entropy(psi, block, eps_sep)?;
    }
    Ok(sum / p.block_count() as f64)
}

/// Whether `(n, m)` is within reach of exhaustive enumeration.
pub fn generic_path_allowed(n: usize, m: usize) -> bool {
    n <= GENERIC_CAP || (n <= MAX_ENUMERATION_N && n - m <= NEAR_DIAGONAL_GAP)
}

fn require_generic(n: usize, m: usize) -> Result<()> {
    if m < 2 || m > n {
        return Err(Error::BlockCountRange { n, m });
    }
    if !generic_path_allowed(n, m) {
        return Err(Error::GenericPathCap {
            n,
            m,
            cap: GENERIC_CAP,
            ext_cap: MAX_ENUMERATION_N,
            gap: NEAR_DIAGONAL_GAP,
        });
    }
    Ok(())
}

/// Precomputed subset entropies, keyed by label mask.
///
/// Each bipartition's purity is computed once, on the smaller side, and the
/// entropies of both `s` and its complement are derived from it, so the
/// symmetry `eta(s) / N(|s|) = eta(comp) / N(n - |s|)` holds exactly for
/// unclamped entries. Per-value clamping can break that relation only inside
/// the narrow band `[eps/2, 2 eps]` around the threshold.
///
/// The table is fully populated at construction; afterwards it is read-only
/// and safe to share across threads.
pub struct EntropyCache {
    n: usize,
    eps_sep: f64,
    max_block: usize,
    table: Vec<f64>,
}

impl EntropyCache {
    /// Entropies for every subset of size up to `max_block`.
    pub fn build(psi: &StateVector, max_block: usize, eps_sep: f64) -> Self {
        let n = psi.n();
        let max_block = max_block.min(n - 1).max(1);
        let full = full_mask(n);
        let purities = exec::map_indexed(1usize << n, |mask| {
            let mask = mask as u32;
            if mask == 0 || mask == full {
                return f64::NAN;
            }
            let a = mask.count_ones() as usize;
            let b = n - a;
            let comp = mask ^ full;
            let canonical = a < b || (a == b && mask < comp);
            if !canonical {
                return f64::NAN;
            }
            if a > max_block && b > max_block {
                return f64::NAN;
            }
            gram_purity(psi, mask)
        });
        let mut table = vec![f64::NAN; 1usize << n];
        for (mask, &purity) in purities.iter().enumerate() {
            if purity.is_nan() {
                continue;
            }
            let mask = mask as u32;
            let a = mask.count_ones() as usize;
            let b = n - a;
            let comp = mask ^ full;
            if a <= max_block {
                table[mask as usize] =
                    clamp_eta(normalization(a) * (1.0 - purity), eps_sep);
            }
            if b <= max_block {
                table[comp as usize] =
                    clamp_eta(normalization(b) * (1.0 - purity), eps_sep);
            }
        }
        Self { n, eps_sep, max_block, table }
    }

    /// Entropies for every proper subset.
    pub fn full(psi: &StateVector, eps_sep: f64) -> Self {
        Self::build(psi, psi.n().saturating_sub(1).max(1), eps_sep)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps_sep(&self) -> f64 {
        self.eps_sep
    }

    pub fn max_block(&self) -> usize {
        self.max_block
    }

    /// Entropy for the subset with the given label mask.
    pub fn eta(&self, mask: u32) -> f64 {
        let v = self.table[mask as usize];
        debug_assert!(!v.is_nan(), "mask {mask:#x} outside cached range");
        v
    }
}

/// Per-shape summary attached to a measure value: the geometric mean of
/// `xi_P` over all partitions sharing the shape (for permutation-symmetric
/// states this is the constant shape value itself).
#[derive(Debug, Clone, Serialize)]
pub struct ShapeEntropy {
    pub shape: PartitionShape,
    pub xi: f64,
    pub zero: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureRow {
    pub m: usize,
    pub value: f64,
    pub zero: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub per_shape: Vec<ShapeEntropy>,
}

/// The measure family `R_m` over a range of block counts, plus metadata.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    pub n: usize,
    pub eps_sep: f64,
    pub rows: Vec<MeasureRow>,
}

impl MeasureReport {
    pub fn value(&self, m: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.m == m).map(|r| r.value)
    }

    pub fn zero_flag(&self, m: usize) -> Option<bool> {
        self.rows.iter().find(|r| r.m == m).map(|r| r.zero)
    }
}

#[derive(Default)]
struct ShapeStat {
    ln_sum: f64,
    count: u64,
    zero: bool,
}

#[derive(Default)]
struct ChunkAcc {
    ln_sum: f64,
    zero: bool,
    shapes: BTreeMap<u64, ShapeStat>,
}

fn shape_key(sizes: &mut [u8]) -> u64 {
    sizes.sort_unstable();
    sizes
        .iter()
        .enumerate()
        .fold(0u64, |key, (i, &s)| key | (u64::from(s - 1) << (4 * i)))
}

/// Evaluates one `R_m` from cached entropies by streaming over all
/// partitions in fixed-size chunks. Chunk boundaries and the final fold
/// order are independent of the worker count, so the result is
/// bit-identical in parallel and sequential runs.
fn eval_measure(
    n: usize,
    m: usize,
    cache: &EntropyCache,
    collect_shapes: bool,
) -> Result<MeasureRow> {
    require_generic(n, m)?;
    debug_assert!(n - m + 1 <= cache.max_block);
    let total = BlockPartitionIter::new(n, m)?.total_count();
    let chunk = exec::PARTITION_CHUNK;
    let n_chunks = total.div_ceil(chunk) as usize;
    let zero_seen = AtomicBool::new(false);

    let chunks: Vec<ChunkAcc> = exec::map_indexed(n_chunks, |ci| {
        let mut acc = ChunkAcc::default();
        if !collect_shapes && zero_seen.load(Ordering::Relaxed) {
            return acc;
        }
        let start = ci as u64 * chunk;
        let len = chunk.min(total - start);
        let mut it = BlockPartitionIter::new(n, m).expect("validated above");
        it.seek(start);
        let mut masks = [0u32; MAX_ENUMERATION_N];
        let mut sizes = [0u8; MAX_ENUMERATION_N];
        for _ in 0..len {
            let rgs = it.next_rgs().expect("rank within count");
            masks[..m].fill(0);
            for (i, &label) in rgs.iter().enumerate() {
                masks[label as usize] |= 1 << i;
            }
            let mut sum = 0.0;
            for &mask in &masks[..m] {
                sum += cache.eta(mask);
            }
            let xi = sum / m as f64;
            let is_zero = xi == 0.0;
            if is_zero {
                acc.zero = true;
                zero_seen.store(true, Ordering::Relaxed);
            } else {
                acc.ln_sum += xi.ln();
            }
            if collect_shapes {
                for (slot, &mask) in sizes[..m].iter_mut().zip(&masks[..m]) {
                    *slot = mask.count_ones() as u8;
                }
                let key = shape_key(&mut sizes[..m]);
                let stat = acc.shapes.entry(key).or_default();
                stat.count += 1;
                if is_zero {
                    stat.zero = true;
                } else {
                    stat.ln_sum += xi.ln();
                }
            } else if is_zero {
                break;
            }
        }
        acc
    });

    let mut ln_total = 0.0;
    let mut zero = false;
    let mut shape_stats: BTreeMap<u64, ShapeStat> = BTreeMap::new();
    for acc in chunks {
        ln_total += acc.ln_sum;
        zero |= acc.zero;
        for (key, stat) in acc.shapes {
            let slot = shape_stats.entry(key).or_default();
            slot.ln_sum += stat.ln_sum;
            slot.count += stat.count;
            slot.zero |= stat.zero;
        }
    }

    let per_shape = if collect_shapes {
        let listed = crate::partitions::shapes(n, m)?;
        listed
            .into_iter()
            .map(|shape| {
                let mut sizes: Vec<u8> =
                    shape.sizes().iter().map(|&s| s as u8).collect();
                let key = shape_key(&mut sizes);
                let stat = shape_stats.get(&key);
                let (xi, shape_zero) = match stat {
                    Some(s) if s.zero => (0.0, true),
                    Some(s) => ((s.ln_sum / s.count as f64).exp(), false),
                    None => (f64::NAN, false),
                };
                ShapeEntropy { shape, xi, zero: shape_zero }
            })
            .collect()
    } else {
        Vec::new()
    };

    if zero {
        return Ok(MeasureRow { m, value: 0.0, zero: true, per_shape });
    }
    let value = (ln_total / big_to_f64(&stirling2(n, m)?)).exp();
    if !value.is_finite() {
        return Err(Error::NonFinite("separability measure"));
    }
    Ok(MeasureRow { m, value, zero: false, per_shape })
}

/// The measure `R_m` by exhaustive enumeration of all partitions into `m`
/// blocks. Returns exactly 0 (separability detected) when any partition's
/// mean entropy clamps to zero.
pub fn separability_measure(psi: &StateVector, m: usize, eps_sep: f64) -> Result<f64> {
    let report = separability_report(psi, m, m, eps_sep, false)?;
    Ok(report.rows[0].value)
}

/// `R_m` for every `m` in `m_lo..=m_hi`, sharing one entropy cache.
/// With `with_shapes`, each row carries per-shape geometric means.
pub fn separability_report(
    psi: &StateVector,
    m_lo: usize,
    m_hi: usize,
    eps_sep: f64,
    with_shapes: bool,
) -> Result<MeasureReport> {
    let n = psi.n();
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    if m_lo < 2 || m_hi > n || m_lo > m_hi {
        return Err(Error::BlockCountRange { n, m: if m_lo < 2 { m_lo } else { m_hi } });
    }
    for m in m_lo..=m_hi {
        require_generic(n, m)?;
    }
    let max_block = n - m_lo + 1;
    let cache = EntropyCache::build(psi, max_block, eps_sep);
    let rows = (m_lo..=m_hi)
        .map(|m| eval_measure(n, m, &cache, with_shapes))
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasureReport { n, eps_sep, rows })
}

/// The full family `R_2..R_n` with per-shape summaries.
pub fn separability_profile(psi: &StateVector, eps_sep: f64) -> Result<MeasureReport> {
    separability_report(psi, 2, psi.n(), eps_sep, true)
}

/// The Meyer-Wallach measure: the mean single-qubit entropy, equal to `R_n`.
pub fn meyer_wallach(psi: &StateVector, eps_sep: f64) -> Result<f64> {
    let n = psi.n();
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    let mut sum = 0.0;
    for q in 1..=n {
        let s = QubitSubset::from_qubits(n, &[q])?;
        sum += linear_entropy(psi, &s, eps_sep)?;
    }
    Ok(sum / n as f64)
}

/// Complement-weight coefficient of the closed-form bipartite product:
/// `c(s) = 1 - (2^(n-a) - 2^a) / (2 (2^n - 2^a))` for `a = |s| <= n/2`,
/// equal to 1 at an even split.
pub fn complement_weight(n: usize, size: usize) -> f64 {
    debug_assert!(size <= n - size);
    let pa = (size as f64).exp2();
    let pb = ((n - size) as f64).exp2();
    let pn = (n as f64).exp2();
    1.0 - 0.5 * (pb - pa) / (pn - pa)
}

/// Closed-form evaluation of `R_2`: a single product over bipartitions with
/// `|s| <= |complement|`, folding the complement entropy into the weight
/// `c(s)`. Agrees with `separability_measure(psi, 2, ..)` to float accuracy.
pub fn bipartition_closed_form(psi: &StateVector, eps_sep: f64) -> Result<f64> {
    let n = psi.n();
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::GenericPathCap {
            n,
            m: 2,
            cap: GENERIC_CAP,
            ext_cap: MAX_ENUMERATION_N,
            gap: NEAR_DIAGONAL_GAP,
        });
    }
    let full = full_mask(n);
    let terms = exec::map_indexed((1usize << n) - 1, |raw| {
        let mask = raw as u32 + 1;
        let a = mask.count_ones() as usize;
        let b = n - a;
        let comp = mask ^ full;
        let canonical = a < b || (a == b && mask < comp);
        if !canonical {
            return f64::NAN;
        }
        let purity = gram_purity(psi, mask);
        let eta = clamp_eta(normalization(a) * (1.0 - purity), eps_sep);
        if eta == 0.0 {
            f64::NEG_INFINITY
        } else {
            (complement_weight(n, a) * eta).ln()
        }
    });
    let mut ln_sum = 0.0;
    let mut count = 0u64;
    for t in terms {
        if t.is_nan() {
            continue;
        }
        if t == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        ln_sum += t;
        count += 1;
    }
    debug_assert_eq!(count, (1u64 << (n - 1)) - 1);
    let value = (ln_sum / count as f64).exp();
    if !value.is_finite() {
        return Err(Error::NonFinite("bipartite closed form"));
    }
    Ok(value)
}
