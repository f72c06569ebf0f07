//! Shared helpers for the integration suites: independent brute-force
//! oracles and the state transformations the invariants quantify over.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use entsep::state::StateVector;

pub type SingleQubitGate = [[Complex64; 2]; 2];

/// Haar-random SU(2) via a normalized quaternion.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> SingleQubitGate {
    let mut q = [0.0f64; 4];
    loop {
        for v in &mut q {
            *v = rng.sample(StandardNormal);
        }
        let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for v in &mut q {
                *v /= norm;
            }
            break;
        }
    }
    let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
    [
        [Complex64::new(a, b), Complex64::new(c, d)],
        [Complex64::new(-c, d), Complex64::new(a, -b)],
    ]
}

/// Applies a single-qubit gate on qubit `q` (1-based, qubit 1 = most
/// significant index bit).
pub fn apply_single_qubit(psi: &StateVector, q: usize, u: &SingleQubitGate) -> StateVector {
    let n = psi.n();
    assert!(q >= 1 && q <= n);
    let bit = 1usize << (n - q);
    let mut amps = psi.amps().to_vec();
    for idx in 0..amps.len() {
        if idx & bit == 0 {
            let a0 = amps[idx];
            let a1 = amps[idx | bit];
            amps[idx] = u[0][0] * a0 + u[0][1] * a1;
            amps[idx | bit] = u[1][0] * a0 + u[1][1] * a1;
        }
    }
    StateVector::new(n, amps).expect("unitary preserves the norm")
}

/// Relabels qubit `j` as `perm[j-1]` (a permutation of `1..=n`).
pub fn permute_qubits(psi: &StateVector, perm: &[usize]) -> StateVector {
    let n = psi.n();
    assert_eq!(perm.len(), n);
    let mut amps = vec![Complex64::new(0.0, 0.0); psi.dim()];
    for (idx, &a) in psi.amps().iter().enumerate() {
        let mut target = 0usize;
        for j in 1..=n {
            let bit = (idx >> (n - j)) & 1;
            target |= bit << (n - perm[j - 1]);
        }
        amps[target] = a;
    }
    StateVector::new(n, amps).expect("permutation preserves the norm")
}

/// Uniformly random permutation of `1..=n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Collects named sub-checks of one acceptance criterion and prints the
/// single pass/fail line.
pub struct Criterion {
    id: &'static str,
    start: std::time::Instant,
    budget: std::time::Duration,
    failures: Vec<String>,
}

impl Criterion {
    pub fn new(id: &'static str, budget_secs: u64) -> Self {
        Self {
            id,
            start: std::time::Instant::now(),
            budget: std::time::Duration::from_secs(budget_secs),
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, pass: bool) {
        if !pass {
            self.failures.push(name.to_string());
        }
    }

    pub fn finish(mut self) {
        let elapsed = self.start.elapsed();
        if elapsed > self.budget {
            self.failures.push(format!(
                "time budget exceeded: {elapsed:.2?} > {:?}",
                self.budget
            ));
        }
        if self.failures.is_empty() {
            println!("{}: PASS ({elapsed:.2?})", self.id);
        } else {
            println!("{}: FAIL ({elapsed:.2?}) — {}", self.id, self.failures.join("; "));
        }
        assert!(self.failures.is_empty(), "{}: {}", self.id, self.failures.join("; "));
    }
}
