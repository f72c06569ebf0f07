use thiserror::Error;

/// Errors produced by state construction, combinatorics and measure evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude vector has length {got}, expected 2^{n} = {expected}")]
    AmplitudeLength { n: usize, got: usize, expected: usize },
    #[error("state vector has zero norm")]
    ZeroVector,
    #[error("qubit count {n} exceeds the cap of {cap}")]
    QubitCap { n: usize, cap: usize },
    #[error("qubit count must be at least {min}, got {n}")]
    TooFewQubits { n: usize, min: usize },
    #[error("excitation number k={k} out of range for n={n}")]
    ExcitationRange { n: usize, k: usize },
    #[error("subset does not belong to an {expected}-qubit system (subset n = {got})")]
    SubsetSystemMismatch { expected: usize, got: usize },
    #[error("subset must be a proper nonempty subsystem (|s| = {size} of n = {n})")]
    ImproperSubset { n: usize, size: usize },
    #[error("subset mask {mask:#x} has bits outside the {n}-qubit range")]
    MaskRange { n: usize, mask: u64 },
    #[error("explicit density matrix limited to {cap} qubits, requested {size}")]
    DensityCap { size: usize, cap: usize },
    #[error("blocks do not form a partition of {{1..{n}}}")]
    InvalidPartition { n: usize },
    #[error("partition shape is invalid")]
    InvalidShape,
    #[error("block count m={m} out of range for n={n}")]
    BlockCountRange { n: usize, m: usize },
    #[error("n={n} exceeds the combinatorics cap of {cap}")]
    CombinatoricsCap { n: usize, cap: usize },
    #[error("set-partition enumeration capped at n = {cap}, requested n = {n}")]
    EnumerationCap { n: usize, cap: usize },
    #[error(
        "exhaustive evaluation for n={n}, m={m} exceeds the generic cap \
         (n <= {cap} for all m, or n <= {ext_cap} when n-m <= {gap})"
    )]
    GenericPathCap { n: usize, m: usize, cap: usize, ext_cap: usize, gap: usize },
    #[error("state is not permutation symmetric (weight class {weight} varies by {spread:e})")]
    NotSymmetric { weight: usize, spread: f64 },
    #[error("states have different qubit counts: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },
    #[error("invalid optimizer settings: {0}")]
    OptimizerSettings(String),
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("invalid state specification: {0}")]
    StateSpec(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
