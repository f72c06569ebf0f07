//! Pure n-qubit states and reduced-subsystem purities.
//!
//! Basis convention: basis index `i` spells the outcomes of qubits `1..=n`
//! with qubit 1 as the most significant bit, so `|q1 q2 ... qn>` has index
//! `q1*2^(n-1) + ... + qn`. Subset masks use the opposite, label-oriented
//! layout: bit `j-1` of [`QubitSubset::mask`] is set iff qubit `j` belongs
//! to the subset.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Hard cap on the qubit count of an explicit state vector.
pub const MAX_QUBITS: usize = 28;

/// Largest subsystem for which [`reduced_density`] materializes the matrix.
pub const MAX_DENSITY_QUBITS: usize = 12;

/// Norm deviation above which [`StateVector::new`] flags the input.
pub const RENORM_WARN_THRESHOLD: f64 = 1e-6;

/// A normalized pure state of `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
    renorm_warning: bool,
}

impl StateVector {
    /// Builds a state from raw amplitudes, renormalizing to unit norm.
    ///
    /// Inputs whose norm deviates from 1 by more than
    /// [`RENORM_WARN_THRESHOLD`] are accepted but flagged via
    /// [`renorm_warning`](Self::renorm_warning).
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::QubitCap { n, cap: MAX_QUBITS });
        }
        let expected = 1usize << n;
        if amps.len() != expected {
            return Err(Error::AmplitudeLength { n, got: amps.len(), expected });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr <= 0.0 || !norm_sqr.is_finite() {
            return Err(Error::ZeroVector);
        }
        let norm = norm_sqr.sqrt();
        let renorm_warning = (norm - 1.0).abs() > RENORM_WARN_THRESHOLD;
        let mut amps = amps;
        if norm != 1.0 {
            let inv = 1.0 / norm;
            for a in &mut amps {
                *a *= inv;
            }
        }
        Ok(Self { n, amps, renorm_warning })
    }

    /// The computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::QubitCap { n, cap: MAX_QUBITS });
        }
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::StateSpec(format!(
                "basis index {index} out of range for n = {n}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps, renorm_warning: false })
    }

    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// The n-qubit GHZ state `(|0...0> + |1...1>)/sqrt(2)`.
    pub fn ghz(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewQubits { n, min: 2 });
        }
        if n > MAX_QUBITS {
            return Err(Error::QubitCap { n, cap: MAX_QUBITS });
        }
        let dim = 1usize << n;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0] = a;
        amps[dim - 1] = a;
        Ok(Self { n, amps, renorm_warning: false })
    }

    /// The Dicke state with `k` excitations: the equal superposition of all
    /// basis states of Hamming weight `k`. `dicke(n, 1)` is the W state.
    pub fn dicke(n: usize, k: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::QubitCap { n, cap: MAX_QUBITS });
        }
        if k > n {
            return Err(Error::ExcitationRange { n, k });
        }
        let dim = 1usize << n;
        let count = binomial_usize(n, k);
        let amp = Complex64::new(1.0 / (count as f64).sqrt(), 0.0);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for (i, a) in amps.iter_mut().enumerate() {
            if i.count_ones() as usize == k {
                *a = amp;
            }
        }
        Ok(Self { n, amps, renorm_warning: false })
    }

    /// The W state, an alias for `dicke(n, 1)`.
    pub fn w(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewQubits { n, min: 2 });
        }
        Self::dicke(n, 1)
    }

    /// Tensor product of the given factors, first factor on the most
    /// significant qubits.
    pub fn product(parts: &[StateVector]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::StateSpec("product of zero factors".into()));
        }
        let n: usize = parts.iter().map(|p| p.n).sum();
        if n > MAX_QUBITS {
            return Err(Error::QubitCap { n, cap: MAX_QUBITS });
        }
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for part in parts {
            let dim = part.amps.len();
            let mut next = Vec::with_capacity(amps.len() * dim);
            for a in &amps {
                for b in &part.amps {
                    next.push(a * b);
                }
            }
            amps = next;
        }
        Ok(Self { n, amps, renorm_warning: false })
    }

    /// A Haar-random pure state drawn from the given generator.
    pub fn haar_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::QubitCap { n, cap: MAX_QUBITS });
        }
        let dim = 1usize << n;
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::new(n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// True when the input to [`new`](Self::new) needed more than
    /// [`RENORM_WARN_THRESHOLD`] of renormalization.
    pub fn renorm_warning(&self) -> bool {
        self.renorm_warning
    }

    /// Sums of amplitudes over each Hamming-weight class, used by the
    /// symmetric-ansatz overlap.
    pub(crate) fn weight_class_sums(&self) -> Vec<Complex64> {
        let mut sums = vec![Complex64::new(0.0, 0.0); self.n + 1];
        for (i, a) in self.amps.iter().enumerate() {
            sums[i.count_ones() as usize] += a;
        }
        sums
    }
}

/// A subsystem of an `n`-qubit register, encoded as a label mask: bit `j-1`
/// set iff qubit `j` belongs to the subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QubitSubset {
    n: usize,
    mask: u32,
}

impl QubitSubset {
    pub fn from_mask(n: usize, mask: u32) -> Result<Self> {
        if n == 0 || n > 32 {
            return Err(Error::QubitCap { n, cap: 32 });
        }
        let full = full_mask(n);
        if mask & !full != 0 {
            return Err(Error::MaskRange { n, mask: mask as u64 });
        }
        Ok(Self { n, mask })
    }

    /// Subset from 1-based qubit labels.
    pub fn from_qubits(n: usize, qubits: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &q in qubits {
            if q == 0 || q > n {
                return Err(Error::MaskRange { n, mask: 1u64 << 63 });
            }
            mask |= 1 << (q - 1);
        }
        Self::from_mask(n, mask)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Proper means nonempty and not the full register.
    pub fn is_proper(&self) -> bool {
        self.mask != 0 && self.mask != full_mask(self.n)
    }

    /// Complementary subsystem; an involution.
    pub fn complement(&self) -> Self {
        Self { n: self.n, mask: self.mask ^ full_mask(self.n) }
    }

    /// 1-based qubit labels, ascending.
    pub fn qubits(&self) -> Vec<usize> {
        (1..=self.n).filter(|q| self.mask >> (q - 1) & 1 == 1).collect()
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Explicit reduced density matrix on a subsystem, row-major.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `tr(rho^2)`, using Hermiticity.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        for i in 0..self.dim {
            for j in i..self.dim {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// Maps sub-indices of the masked qubits to their basis-index bits.
///
/// Bit `u` of the sub-index corresponds to the `u`-th smallest qubit label
/// in the mask; qubit `q` sits at basis-index bit `n - q`.
fn spread_table(n: usize, mask: u32) -> Vec<usize> {
    let qubits: Vec<usize> = (1..=n).filter(|q| mask >> (q - 1) & 1 == 1).collect();
    let d = 1usize << qubits.len();
    let mut table = vec![0usize; d];
    for (sub, slot) in table.iter_mut().enumerate() {
        let mut idx = 0usize;
        for (u, &q) in qubits.iter().enumerate() {
            if sub >> u & 1 == 1 {
                idx |= 1 << (n - q);
            }
        }
        *slot = idx;
    }
    table
}

/// `tr(rho_s^2)` for the reduced state on subset `s`.
///
/// Evaluated through the Gram matrix of the state reshaped over the smaller
/// side of the bipartition, so the cost is `O(4^a * 2^b)` with
/// `a = min(|s|, n-|s|)` and a 2^a-dimensional workspace; the larger side is
/// never materialized as a matrix.
pub fn reduced_purity(psi: &StateVector, s: &QubitSubset) -> Result<f64> {
    check_subset(psi, s)?;
    let n = psi.n;
    let small = if s.size() * 2 <= n { *s } else { s.complement() };
    Ok(gram_purity(psi, small.mask))
}

fn check_subset(psi: &StateVector, s: &QubitSubset) -> Result<()> {
    if s.n != psi.n {
        return Err(Error::SubsetSystemMismatch { expected: psi.n, got: s.n });
    }
    if !s.is_proper() {
        return Err(Error::ImproperSubset { n: psi.n, size: s.size() });
    }
    Ok(())
}

/// Purity via the Gram matrix with rows indexed by `mask`'s qubits.
/// Requires `|mask| <= n/2` for the advertised cost; correct for any proper
/// mask.
pub(crate) fn gram_purity(psi: &StateVector, mask: u32) -> f64 {
    let n = psi.n;
    let rows = spread_table(n, mask);
    let dr = rows.len();
    let comp = mask ^ full_mask(n);
    let cols = spread_table(n, comp);
    // Upper triangle of G = M M^dagger, accumulated column by column.
    let mut gram = vec![Complex64::new(0.0, 0.0); dr * (dr + 1) / 2];
    let mut colbuf = vec![Complex64::new(0.0, 0.0); dr];
    for &cbits in &cols {
        for (buf, &rbits) in colbuf.iter_mut().zip(rows.iter()) {
            *buf = psi.amps[rbits | cbits];
        }
        let mut t = 0usize;
        for b in 0..dr {
            let vb = colbuf[b].conj();
            for va in colbuf.iter().take(b + 1) {
                gram[t] += va * vb;
                t += 1;
            }
        }
    }
    let mut purity = 0.0;
    let mut t = 0usize;
    for b in 0..dr {
        for a in 0..=b {
            let w = if a == b { 1.0 } else { 2.0 };
            purity += w * gram[t].norm_sqr();
            t += 1;
        }
    }
    purity
}

/// The reduced density matrix `rho_s`, materialized explicitly.
/// Capped at [`MAX_DENSITY_QUBITS`] kept qubits.
pub fn reduced_density(psi: &StateVector, s: &QubitSubset) -> Result<DensityMatrix> {
    check_subset(psi, s)?;
    if s.size() > MAX_DENSITY_QUBITS {
        return Err(Error::DensityCap { size: s.size(), cap: MAX_DENSITY_QUBITS });
    }
    let n = psi.n;
    let rows = spread_table(n, s.mask);
    let cols = spread_table(n, s.complement().mask);
    let dim = rows.len();
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for &cbits in &cols {
        for (a, &abits) in rows.iter().enumerate() {
            let va = psi.amps[abits | cbits];
            if va == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (b, &bbits) in rows.iter().enumerate() {
                entries[a * dim + b] += va * psi.amps[bbits | cbits].conj();
            }
        }
    }
    Ok(DensityMatrix { dim, entries })
}

pub(crate) fn binomial_usize(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
