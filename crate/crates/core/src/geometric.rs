//! Geometric measure of entanglement: one minus the maximal squared overlap
//! with a fully separable product state.
//!
//! The maximization runs a multi-start block-coordinate ascent over the
//! per-qubit Bloch angles `(theta_i, phi_i)` of the product ansatz
//! `prod_i (cos theta_i |0> + e^(i phi_i) sin theta_i |1>)`. Each qubit
//! update is exact: contracting out qubit `i` leaves
//! `<chi|psi> = cos theta_i A + e^(-i phi_i) sin theta_i B`, whose global
//! maximizer over the Bloch sphere is closed-form. Pure 1-D ascent on the
//! angles separately stalls at pole artifacts (`theta = 0` flattens the
//! `phi` slice), so the joint per-qubit step is load-bearing. The tied
//! (symmetric) ansatz has only two angles and uses a grid-bracketed
//! golden-section line search with grid density scaled to the `n` harmonics
//! of its `phi` slice.
//!
//! Every restart is seeded independently from the master seed, so results
//! are reproducible and monotone in the number of restarts. The reported
//! value is an upper bound on the true measure: the ascent is local, and
//! global optimality is only claimed where a closed form exists.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::state::StateVector;

const GOLDEN_ITERS: usize = 48;

/// A fully separable product state, one `(theta, phi)` pair per qubit with
/// `theta` in `[0, pi/2]` and `phi` in `[0, 2 pi)`. Each factor
/// `cos theta |0> + e^(i phi) sin theta |1>` has unit norm by construction.
#[derive(Debug, Clone, Serialize)]
pub struct ProductAnsatz {
    pub n: usize,
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    /// Set when the angles were optimized as a single shared pair.
    pub symmetric: bool,
}

impl ProductAnsatz {
    pub fn new(n: usize, thetas: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if thetas.len() != n || phis.len() != n {
            return Err(Error::OptimizerSettings(format!(
                "expected {n} angle pairs, got {} thetas / {} phis",
                thetas.len(),
                phis.len()
            )));
        }
        Ok(Self { n, thetas, phis, symmetric: false })
    }

    /// All qubits share one `(theta, phi)` pair.
    pub fn symmetric(n: usize, theta: f64, phi: f64) -> Self {
        Self { n, thetas: vec![theta; n], phis: vec![phi; n], symmetric: true }
    }

    /// Uniform random angles.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let thetas = (0..n)
            .map(|_| rng.random_range(0.0..std::f64::consts::FRAC_PI_2))
            .collect();
        let phis =
            (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        Self { n, thetas, phis, symmetric: false }
    }

    /// Materializes the product state vector.
    pub fn state_vector(&self) -> Result<StateVector> {
        let factors: Vec<StateVector> = self
            .thetas
            .iter()
            .zip(&self.phis)
            .map(|(&t, &p)| {
                StateVector::new(
                    1,
                    vec![
                        Complex64::new(t.cos(), 0.0),
                        Complex64::from_polar(t.sin(), p),
                    ],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        StateVector::product(&factors)
    }
}

/// `|<chi|psi>|^2`, contracting one qubit at a time (cost `O(2^n)` and a
/// single scratch vector; the product state is never materialized).
pub fn overlap(psi: &StateVector, chi: &ProductAnsatz) -> Result<f64> {
    if chi.n != psi.n() {
        return Err(Error::QubitCountMismatch { left: psi.n(), right: chi.n });
    }
    let mut scratch = psi.amps().to_vec();
    Ok(overlap_in_place(&mut scratch, &chi.thetas, &chi.phis))
}

/// Contracts qubits from least significant upward, halving the buffer
/// logically each step; the write index never catches up with the reads.
fn overlap_in_place(buf: &mut [Complex64], thetas: &[f64], phis: &[f64]) -> f64 {
    let n = thetas.len();
    let mut len = buf.len();
    for j in (0..n).rev() {
        let c0 = Complex64::new(thetas[j].cos(), 0.0);
        let c1 = Complex64::from_polar(thetas[j].sin(), -phis[j]);
        len /= 2;
        for p in 0..len {
            buf[p] = c0 * buf[2 * p] + c1 * buf[2 * p + 1];
        }
    }
    buf[0].norm_sqr()
}

/// Closed-form geometric measure of the W state: `1 - (1 - 1/n)^(n-1)`,
/// approaching `1 - 1/e` for large `n`.
pub fn closed_form_w(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    let nf = n as f64;
    Ok(1.0 - ((nf - 1.0) * (-1.0 / nf).ln_1p()).exp())
}

/// Settings for [`optimize`].
#[derive(Debug, Clone)]
pub struct OptimizeOptions {
    /// Independent random starts; results are monotone in this count.
    pub restarts: usize,
    /// Stop a start once a full coordinate sweep improves the overlap by
    /// less than this.
    pub tol: f64,
    /// Master seed; restart `r` derives its own stream from `seed + r`.
    pub seed: u64,
    /// Tie all qubits to one shared `(theta, phi)` pair.
    pub symmetric: bool,
    /// Hard cap on coordinate sweeps per start.
    pub max_sweeps: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self { restarts: 32, tol: 1e-10, seed: 0, symmetric: false, max_sweeps: 500 }
    }
}

/// Result of a geometric-measure optimization.
#[derive(Debug, Clone, Serialize)]
pub struct GeometricResult {
    /// `1 - overlap`; an upper bound on the true measure.
    pub e_g: f64,
    /// Best squared overlap found.
    pub overlap: f64,
    pub ansatz: ProductAnsatz,
    pub restarts_used: usize,
    /// Sweeps consumed by the winning start.
    pub sweeps_used: usize,
}

/// Objective wrapper: either the generic contraction or, for the tied
/// ansatz, a weight-class form that costs `O(n)` per evaluation after an
/// `O(2^n)` precomputation.
enum Objective<'a> {
    General { amps: &'a [Complex64] },
    Symmetric { class_sums: Vec<Complex64>, n: usize },
}

impl Objective<'_> {
    fn eval(&self, thetas: &[f64], phis: &[f64], scratch: &mut Vec<Complex64>) -> f64 {
        match self {
            Objective::General { amps } => {
                scratch.clear();
                scratch.extend_from_slice(amps);
                overlap_in_place(scratch, thetas, phis)
            }
            Objective::Symmetric { class_sums, n } => {
                let (theta, phi) = (thetas[0], phis[0]);
                let (s, c) = theta.sin_cos();
                // The weight-w classes contribute c^(n-w) s^w e^(-i w phi);
                // direct powers keep the extremes (theta near 0 or pi/2)
                // from underflowing through a running ratio.
                let mut acc = Complex64::new(0.0, 0.0);
                for (w, sum) in class_sums.iter().enumerate() {
                    let radial = c.powi((*n - w) as i32) * s.powi(w as i32);
                    if radial == 0.0 {
                        continue;
                    }
                    acc += Complex64::from_polar(radial, -(w as f64) * phi) * sum;
                }
                acc.norm_sqr()
            }
        }
    }
}

struct Start {
    overlap: f64,
    thetas: Vec<f64>,
    phis: Vec<f64>,
    sweeps: usize,
}

/// Maximizes the overlap with a product state and returns
/// `(1 - best overlap, maximizing ansatz)`. Deterministic for a fixed seed;
/// the objective for any single start never decreases between sweeps.
pub fn optimize(psi: &StateVector, opts: &OptimizeOptions) -> Result<GeometricResult> {
    if opts.restarts == 0 {
        return Err(Error::OptimizerSettings("restarts must be >= 1".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::OptimizerSettings("tol must be positive".into()));
    }
    if opts.max_sweeps == 0 {
        return Err(Error::OptimizerSettings("max_sweeps must be >= 1".into()));
    }
    let n = psi.n();
    let objective = if opts.symmetric {
        Objective::Symmetric { class_sums: psi.weight_class_sums(), n }
    } else {
        Objective::General { amps: psi.amps() }
    };

    let starts: Vec<Start> = exec::map_indexed(opts.restarts, |r| {
        let mut rng = ChaCha12Rng::seed_from_u64(opts.seed.wrapping_add(r as u64));
        run_start(&objective, n, opts, &mut rng)
    });

    let mut best: Option<Start> = None;
    for s in starts {
        let better = match &best {
            None => true,
            Some(b) => s.overlap > b.overlap,
        };
        if better {
            best = Some(s);
        }
    }
    let best = best.expect("at least one restart");
    if !best.overlap.is_finite() {
        return Err(Error::NonFinite("overlap optimization"));
    }
    let mut ansatz = ProductAnsatz {
        n,
        thetas: best.thetas,
        phis: best.phis,
        symmetric: opts.symmetric,
    };
    for phi in &mut ansatz.phis {
        *phi = phi.rem_euclid(std::f64::consts::TAU);
    }
    Ok(GeometricResult {
        e_g: 1.0 - best.overlap,
        overlap: best.overlap,
        ansatz,
        restarts_used: opts.restarts,
        sweeps_used: best.sweeps,
    })
}

fn run_start(
    objective: &Objective<'_>,
    n: usize,
    opts: &OptimizeOptions,
    rng: &mut ChaCha12Rng,
) -> Start {
    if opts.symmetric {
        run_start_symmetric(objective, n, opts, rng)
    } else {
        run_start_general(objective, n, opts, rng)
    }
}

/// Block-coordinate ascent with exact per-qubit updates. Contracting out
/// qubit `i` gives `<chi|psi> = cos theta A + e^(-i phi) sin theta B`; the
/// sphere point maximizing it is `tan theta = |B| / |A|`,
/// `phi = arg B - arg A`, with objective value `|A|^2 + |B|^2`.
fn run_start_general(
    objective: &Objective<'_>,
    n: usize,
    opts: &OptimizeOptions,
    rng: &mut ChaCha12Rng,
) -> Start {
    let amps = match objective {
        Objective::General { amps } => *amps,
        Objective::Symmetric { .. } => unreachable!("general start"),
    };
    let mut thetas: Vec<f64> = (0..n)
        .map(|_| rng.random_range(0.0..std::f64::consts::FRAC_PI_2))
        .collect();
    let mut phis: Vec<f64> =
        (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    let mut scratch = Vec::new();
    let mut current = objective.eval(&thetas, &phis, &mut scratch);
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        let before = current;
        for i in 0..n {
            let (a, b) = basis_contractions(amps, &thetas, &phis, i, &mut scratch);
            let value = a.norm_sqr() + b.norm_sqr();
            if value > current {
                let (na, nb) = (a.norm(), b.norm());
                thetas[i] = nb.atan2(na);
                if na > 0.0 && nb > 0.0 {
                    phis[i] = (b.arg() - a.arg()).rem_euclid(std::f64::consts::TAU);
                }
                current = value;
            }
        }
        if current - before < opts.tol {
            break;
        }
    }
    // Report the objective of the returned angles, not the analytic step
    // value, so the ansatz and the overlap agree to the bit.
    current = current.max(objective.eval(&thetas, &phis, &mut scratch));
    Start { overlap: current, thetas, phis, sweeps }
}

/// `(A, B)` with `<chi|psi> = cos theta_i A + e^(-i phi_i) sin theta_i B`:
/// the contractions of every other qubit against the state, with qubit `i`
/// projected on `|0>` and `|1>` respectively.
fn basis_contractions(
    amps: &[Complex64],
    thetas: &[f64],
    phis: &[f64],
    i: usize,
    scratch: &mut Vec<Complex64>,
) -> (Complex64, Complex64) {
    let n = thetas.len();
    let mut project = |bit: usize| {
        scratch.clear();
        let keep = 1usize << (n - 1 - i);
        scratch.extend(
            amps.iter()
                .enumerate()
                .filter(|(idx, _)| idx / keep % 2 == bit)
                .map(|(_, a)| *a),
        );
        let mut len = scratch.len();
        for j in (0..n).rev() {
            if j == i {
                continue;
            }
            let c0 = Complex64::new(thetas[j].cos(), 0.0);
            let c1 = Complex64::from_polar(thetas[j].sin(), -phis[j]);
            len /= 2;
            for p in 0..len {
                scratch[p] = c0 * scratch[2 * p] + c1 * scratch[2 * p + 1];
            }
        }
        scratch[0]
    };
    let a = project(0);
    let b = project(1);
    (a, b)
}

/// Tied-ansatz ascent: two angles, each updated by a grid-bracketed
/// golden-section line search. The `phi` slice carries harmonics up to the
/// qubit count, so the bracketing grid is scaled with `n`.
fn run_start_symmetric(
    objective: &Objective<'_>,
    n: usize,
    opts: &OptimizeOptions,
    rng: &mut ChaCha12Rng,
) -> Start {
    let mut thetas = vec![rng.random_range(0.0..std::f64::consts::FRAC_PI_2)];
    let mut phis = vec![rng.random_range(0.0..std::f64::consts::TAU)];
    let mut scratch = Vec::new();
    let mut current = objective.eval(&thetas, &phis, &mut scratch);
    let grid = (4 * n).max(8);
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        let before = current;
        current =
            line_search(objective, &mut thetas, &mut phis, true, grid, current, &mut scratch);
        current =
            line_search(objective, &mut thetas, &mut phis, false, grid, current, &mut scratch);
        if current - before < opts.tol {
            break;
        }
    }
    Start { overlap: current, thetas, phis, sweeps }
}

/// Grid-bracketed golden-section ascent on one tied angle; the move is kept
/// only if it improves.
#[allow(clippy::too_many_arguments)]
fn line_search(
    objective: &Objective<'_>,
    thetas: &mut [f64],
    phis: &mut [f64],
    is_theta: bool,
    grid: usize,
    current: f64,
    scratch: &mut Vec<Complex64>,
) -> f64 {
    let coord = 0;
    let span = if is_theta { std::f64::consts::FRAC_PI_2 } else { std::f64::consts::TAU };
    let saved = if is_theta { thetas[coord] } else { phis[coord] };
    let eval_at = |x: f64, thetas: &mut [f64], phis: &mut [f64], scratch: &mut Vec<Complex64>| {
        if is_theta {
            thetas[coord] = x;
        } else {
            phis[coord] = x;
        }
        objective.eval(thetas, phis, scratch)
    };

    // Coarse scan. For theta both endpoints are genuine boundary candidates;
    // phi is periodic so the endpoint duplicate is skipped.
    let samples = if is_theta { grid + 1 } else { grid };
    let step = span / grid as f64;
    let mut best_x = saved;
    let mut best_f = current;
    for j in 0..samples {
        let x = j as f64 * step;
        let f = eval_at(x, thetas, phis, scratch);
        if f > best_f {
            best_f = f;
            best_x = x;
        }
    }

    // Golden-section refinement around the best sample.
    let (mut lo, mut hi) = if is_theta {
        ((best_x - step).max(0.0), (best_x + step).min(span))
    } else {
        (best_x - step, best_x + step) // periodic; wrapping is harmless
    };
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval_at(x1, thetas, phis, scratch);
    let mut f2 = eval_at(x2, thetas, phis, scratch);
    for _ in 0..GOLDEN_ITERS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval_at(x2, thetas, phis, scratch);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval_at(x1, thetas, phis, scratch);
        }
    }
    let (cand_x, cand_f) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    let (new_x, new_f) = if cand_f > best_f { (cand_x, cand_f) } else { (best_x, best_f) };
    let (keep_x, keep_f) = if new_f > current { (new_x, new_f) } else { (saved, current) };
    if is_theta {
        thetas[coord] = keep_x;
    } else {
        phis[coord] = keep_x;
    }
    keep_f
}
