//! Closed-form measure evaluation for permutation-symmetric states.
//!
//! For states invariant under all qubit permutations, the subset entropy
//! depends only on the subset size, so `xi_P` depends only on the partition
//! shape `|P|`. The measure becomes a product over integer partitions of `n`
//! weighted by shape multiplicities,
//! `R_m = prod_shapes xi_shape^(h(shape)/S(n,m))`,
//! which scales to `n = 50` and beyond where exhaustive enumeration is
//! hopeless.
//!
//! Entropies of the GHZ, W and Dicke families are evaluated in exact
//! integer/rational arithmetic (binomial sums first, one division at the
//! end) and rounded to `f64` once, so even `C(50,25)^2`-sized terms carry no
//! accumulated error.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::measures::{
    linear_entropy, MeasureReport, MeasureRow, ShapeEntropy, DEFAULT_EPS_SEP,
};
use crate::partitions::{
    big_to_f64, binomial, multiplicity, shapes, stirling2, MAX_COMBINATORICS_N,
};
use crate::state::{QubitSubset, StateVector};

/// Tolerance of the permutation-symmetry check: amplitudes within one
/// Hamming-weight class may differ by at most this much.
pub const SYMMETRY_TOL: f64 = 1e-10;

fn check_size(n: usize, size: usize) -> Result<()> {
    if n < 2 || n > MAX_COMBINATORICS_N {
        return Err(Error::CombinatoricsCap { n, cap: MAX_COMBINATORICS_N });
    }
    if size == 0 || size >= n {
        return Err(Error::ImproperSubset { n, size });
    }
    Ok(())
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("in-range rational")
}

/// `N(a) = 2^a / (2^a - 1)` as an exact rational.
fn normalization_exact(size: usize) -> BigRational {
    let two_a = BigInt::one() << size;
    BigRational::new(two_a.clone(), two_a - BigInt::one())
}

/// Exact subset entropy of the GHZ state: `N(a) / 2` for any proper subset
/// size `a` (every GHZ marginal has purity 1/2).
pub fn eta_ghz_exact(n: usize, size: usize) -> Result<BigRational> {
    check_size(n, size)?;
    Ok(normalization_exact(size) / BigRational::from(BigInt::from(2)))
}

/// Exact subset entropy of the W state: `N(a) * 2a(n-a) / n^2`.
pub fn eta_w_exact(n: usize, size: usize) -> Result<BigRational> {
    check_size(n, size)?;
    let num = BigInt::from(2 * size * (n - size));
    let den = BigInt::from(n * n);
    Ok(normalization_exact(size) * BigRational::new(num, den))
}

/// Exact subset entropy of the Dicke state with `k` excitations:
/// `N(a) * (1 - C(n,k)^-2 * sum_r C(a,r)^2 C(n-a,k-r)^2)` with `r` running
/// over `max(a-(n-k), 0) ..= min(a, k)`.
///
/// Valid for any `0 <= k <= n`; `k` and `n - k` give identical entropies,
/// and `k = 1` reduces exactly to the W formula.
pub fn eta_dicke_exact(n: usize, k: usize, size: usize) -> Result<BigRational> {
    check_size(n, size)?;
    if k > n {
        return Err(Error::ExcitationRange { n, k });
    }
    let c_nk = binomial(n, k);
    let c_sq = &c_nk * &c_nk;
    let r_lo = size.saturating_sub(n - k);
    let r_hi = size.min(k);
    let mut sum = BigUint::zero();
    for r in r_lo..=r_hi {
        let a = binomial(size, r);
        let b = binomial(n - size, k - r);
        sum += &a * &a * &b * &b;
    }
    let defect = BigRational::new(
        BigInt::from(&c_sq - &sum),
        BigInt::from(c_sq),
    );
    Ok(normalization_exact(size) * defect)
}

/// Subset entropy of the GHZ state as `f64`.
pub fn eta_ghz(n: usize, size: usize) -> Result<f64> {
    Ok(rational_to_f64(&eta_ghz_exact(n, size)?))
}

/// Subset entropy of the W state as `f64`.
pub fn eta_w(n: usize, size: usize) -> Result<f64> {
    Ok(rational_to_f64(&eta_w_exact(n, size)?))
}

/// Subset entropy of the Dicke state as `f64`.
pub fn eta_dicke(n: usize, k: usize, size: usize) -> Result<f64> {
    Ok(rational_to_f64(&eta_dicke_exact(n, k, size)?))
}

/// Subset entropies of a permutation-symmetric state, indexed by subset
/// size. Everything the fast path needs to know about the state.
#[derive(Debug, Clone)]
pub struct SymmetricProfile {
    n: usize,
    label: String,
    eps_sep: f64,
    eta_by_size: Vec<f64>,
}

impl SymmetricProfile {
    fn from_exact<F>(n: usize, label: String, eps_sep: f64, eta: F) -> Result<Self>
    where
        F: Fn(usize) -> Result<BigRational>,
    {
        let mut eta_by_size = Vec::with_capacity(n - 1);
        for size in 1..n {
            let raw = rational_to_f64(&eta(size)?);
            eta_by_size.push(if raw < eps_sep { 0.0 } else { raw });
        }
        Ok(Self { n, label, eps_sep, eta_by_size })
    }

    pub fn ghz(n: usize) -> Result<Self> {
        Self::from_exact(n, format!("ghz:{n}"), DEFAULT_EPS_SEP, |s| {
            eta_ghz_exact(n, s)
        })
    }

    pub fn w(n: usize) -> Result<Self> {
        Self::from_exact(n, format!("w:{n}"), DEFAULT_EPS_SEP, |s| eta_w_exact(n, s))
    }

    pub fn dicke(n: usize, k: usize) -> Result<Self> {
        Self::from_exact(n, format!("dicke:{n},{k}"), DEFAULT_EPS_SEP, |s| {
            eta_dicke_exact(n, k, s)
        })
    }

    /// Profile of an explicit state vector, after verifying permutation
    /// symmetry: amplitudes must be constant on every Hamming-weight class
    /// within [`SYMMETRY_TOL`]. Each entropy is then computed once, from the
    /// subset `{1..size}`.
    pub fn from_state(psi: &StateVector, eps_sep: f64) -> Result<Self> {
        let n = psi.n();
        if n < 2 {
            return Err(Error::TooFewQubits { n, min: 2 });
        }
        let mut class_ref = vec![None; n + 1];
        for (i, amp) in psi.amps().iter().enumerate() {
            let w = i.count_ones() as usize;
            match class_ref[w] {
                None => class_ref[w] = Some(*amp),
                Some(r) => {
                    let spread = (*amp - r).norm();
                    if spread > SYMMETRY_TOL {
                        return Err(Error::NotSymmetric { weight: w, spread });
                    }
                }
            }
        }
        let etas = exec::map_indexed(n - 1, |i| {
            let size = i + 1;
            let s = QubitSubset::from_mask(n, (1u32 << size) - 1)
                .expect("contiguous prefix mask");
            linear_entropy(psi, &s, eps_sep)
        });
        let eta_by_size = etas.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(Self { n, label: format!("state:{n}"), eps_sep, eta_by_size })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eps_sep(&self) -> f64 {
        self.eps_sep
    }

    /// Entropy for any subset of the given size, `1 <= size <= n-1`.
    pub fn eta_by_size(&self, size: usize) -> f64 {
        self.eta_by_size[size - 1]
    }
}

/// One `R_m` from a symmetric profile: iterate the shapes of `n` into `m`
/// parts, weight each `ln xi_shape` by the exact ratio
/// `multiplicity(shape) / S(n, m)`, and exponentiate. Exactly 0 as soon as
/// any shape's mean entropy clamps to zero.
pub fn symmetric_row(profile: &SymmetricProfile, m: usize, with_shapes: bool) -> Result<MeasureRow> {
    let n = profile.n;
    if m < 2 || m > n {
        return Err(Error::BlockCountRange { n, m });
    }
    let shape_list = shapes(n, m)?;
    let s_nm = big_to_f64(&stirling2(n, m)?);
    let mut acc = 0.0;
    let mut zero = false;
    let mut per_shape = Vec::new();
    for shape in shape_list {
        let mut sum = 0.0;
        for &size in shape.sizes() {
            sum += profile.eta_by_size(size);
        }
        let xi = sum / m as f64;
        let shape_zero = xi == 0.0;
        if shape_zero {
            zero = true;
        } else {
            let weight = big_to_f64(&multiplicity(&shape)) / s_nm;
            acc += weight * xi.ln();
        }
        if with_shapes {
            per_shape.push(ShapeEntropy { shape, xi, zero: shape_zero });
        } else if zero {
            break;
        }
    }
    if zero {
        return Ok(MeasureRow { m, value: 0.0, zero: true, per_shape });
    }
    let value = acc.exp();
    if !value.is_finite() {
        return Err(Error::NonFinite("symmetric measure"));
    }
    Ok(MeasureRow { m, value, zero: false, per_shape })
}

/// `R_m` from a symmetric profile.
pub fn symmetric_measure(profile: &SymmetricProfile, m: usize) -> Result<f64> {
    Ok(symmetric_row(profile, m, false)?.value)
}

/// The family `R_{m_lo}..R_{m_hi}` from one profile.
pub fn symmetric_report(
    profile: &SymmetricProfile,
    m_lo: usize,
    m_hi: usize,
    with_shapes: bool,
) -> Result<MeasureReport> {
    let n = profile.n;
    if m_lo < 2 || m_hi > n || m_lo > m_hi {
        return Err(Error::BlockCountRange { n, m: if m_lo < 2 { m_lo } else { m_hi } });
    }
    let rows = (m_lo..=m_hi)
        .map(|m| symmetric_row(profile, m, with_shapes))
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasureReport { n, eps_sep: profile.eps_sep, rows })
}

/// Closed-form state family for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Ghz,
    W,
    Dicke { k: usize },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Ghz => "ghz",
            Family::W => "w",
            Family::Dicke { .. } => "dicke",
        }
    }

    /// The `k` column value; 0 marks the parameter-free families.
    pub fn k(&self) -> usize {
        match self {
            Family::Dicke { k } => *k,
            _ => 0,
        }
    }

    fn min_n(&self) -> usize {
        match self {
            Family::Dicke { k } => (*k + 1).max(2),
            _ => 2,
        }
    }

    fn profile(&self, n: usize) -> Result<SymmetricProfile> {
        match self {
            Family::Ghz => SymmetricProfile::ghz(n),
            Family::W => SymmetricProfile::w(n),
            Family::Dicke { k } => SymmetricProfile::dicke(n, *k),
        }
    }
}

/// One sweep point.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub family: &'static str,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub value: f64,
    pub zero: bool,
}

/// Measure curves for a closed-form family over a grid of `n` and `m`,
/// one row per `(n, m)` point, ordered by `n` then `m`. The `m` filter, when
/// present, intersects `2..=n`.
pub fn sweep(
    family: Family,
    n_lo: usize,
    n_hi: usize,
    m_filter: Option<(usize, usize)>,
) -> Result<Vec<SweepRow>> {
    if n_lo > n_hi || n_hi > MAX_COMBINATORICS_N {
        return Err(Error::InvalidRange(format!(
            "sweep needs n_lo <= n_hi <= {MAX_COMBINATORICS_N}, got {n_lo}..{n_hi}"
        )));
    }
    if n_lo < family.min_n() {
        return Err(Error::InvalidRange(format!(
            "family {} (k = {}) needs n >= {}, got n_lo = {n_lo}",
            family.tag(),
            family.k(),
            family.min_n()
        )));
    }
    let per_n = exec::map_indexed(n_hi - n_lo + 1, |i| -> Result<Vec<SweepRow>> {
        let n = n_lo + i;
        let profile = family.profile(n)?;
        let (m_lo, m_hi) = match m_filter {
            Some((lo, hi)) => (lo.max(2), hi.min(n)),
            None => (2, n),
        };
        let mut rows = Vec::new();
        for m in m_lo..=m_hi {
            let row = symmetric_row(&profile, m, false)?;
            rows.push(SweepRow {
                family: family.tag(),
                n,
                k: family.k(),
                m,
                value: row.value,
                zero: row.zero,
            });
        }
        Ok(rows)
    });
    let mut out = Vec::new();
    for rows in per_n {
        out.extend(rows?);
    }
    Ok(out)
}
