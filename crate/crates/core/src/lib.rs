//! Numerical kernels for partially hyperbolic dynamics on tori: map
//! families and suspensions, induced homology actions, unstable-leaf volume
//! growth and currents, separated-set and partition entropies, and Lyapunov
//! spectra.
//!
//! The crate is `no_std` (alloc only); every estimator is a pure function
//! of its inputs and a seed, deterministic across runs and platforms. IO,
//! scenario configuration, and report formats live in the companion CLI
//! crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

use alloc::vec::Vec;

pub mod circle;
pub mod diffeo;
pub mod entropy;
pub mod fit;
pub mod foliation;
pub mod forms;
pub mod homology;
pub mod intmat;
pub mod linalg;
pub mod lyapunov;
pub mod math;
pub mod ph;
pub mod rng;
pub mod skew;
pub mod suspension;
pub mod torus;
pub mod trig;

pub use circle::{CircleFixedPoint, CircleMap};
pub use diffeo::{MapDirection, ToralDiffeo, TrackedMap};
pub use entropy::{
    CircleDynamics, Dynamics, EntropyEstimate, EntropyParams, GridPartition,
    MeasureEntropyEstimate, MeasureEntropyParams, SampleSpec, SeparatedSetTable,
    SuspensionTimeT, ToralDynamics,
};
pub use foliation::{GrowthEstimate, JacobianGap, PolyPatch};
pub use forms::{CurrentSample, DifferentialForm};
pub use homology::{HomologyAction, HomologyClass, SpectrumReport, TopologicalGrowth};
pub use intmat::IntegerMatrix;
pub use lyapunov::{ClassifiedExponents, ExponentBands, LyapunovSpectrum};
pub use ph::PHConstants;
pub use skew::SkewProductMap;
pub use suspension::{MappingTorusPoint, SuspensionFlow};
pub use torus::TorusPoint;
pub use trig::{Phase, ScalarTrigPoly, TrigPerturbation, TrigTerm};

/// Errors across the numeric kernels. Estimators fail loudly instead of
/// degrading silently: budget overruns, broken certificates, and
/// non-convergence all surface here.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Incompatible dimensions or an out-of-range degree.
    Dimension,
    /// Matrix determinant is not ±1, so it induces no automorphism.
    NotUnimodular { det: i64 },
    /// The perturbation's Lipschitz bound reaches 1/‖A⁻¹‖; the map may not
    /// be a diffeomorphism.
    DiffeoBound { lipschitz: f64, limit: f64 },
    /// Inverse iteration missed its residual within the budget.
    InverseDiverged { budget: usize },
    /// The differential was numerically singular.
    SingularDifferential,
    /// Suspension base map has an eigenvalue on the unit circle.
    NotHyperbolic { trace: i64 },
    /// Circle-map derivative loses positivity; not a diffeomorphism.
    CircleMapShape,
    /// Rate constants violate 0 < λ_s < λ'_c ≤ 1 ≤ λ''_c < λ_u, c₁ ≥ 1.
    RateChain,
    /// Polynomial root finder did not converge.
    RootFinder,
    /// Expanding eigenvalues don't span a k-dimensional bundle.
    UnstableDimension {
        expected: usize,
        actual: usize,
        moduli: Vec<f64>,
    },
    /// Dominant eigenvalue is not simple; no unique carried class.
    DominantNotSimple,
    /// Power iteration kept oscillating; no dominant invariant subspace.
    FrameNotConverged { oscillation: f64 },
    /// Refinement would exceed the vertex budget.
    VertexBudget { budget: usize },
    /// Mesh refinement failed to shorten every edge within its round cap.
    RefinementStuck,
    /// Growth fits need more iterates.
    TooFewIterates { n_max: usize, min: usize },
    /// Every ε in the ladder saturated the sample; sampling is too coarse.
    AllScalesSaturated,
    /// Tangent vectors overflowed between re-orthonormalizations.
    TangentOverflow { step: usize },
    /// Form degree does not match the patch or term multi-indices.
    DegreeMismatch,
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::Dimension => write!(f, "incompatible dimensions"),
            Error::NotUnimodular { det } => {
                write!(f, "matrix determinant {det} is not ±1")
            }
            Error::DiffeoBound { lipschitz, limit } => write!(
                f,
                "perturbation Lipschitz bound {lipschitz:.6} reaches the diffeomorphism limit {limit:.6}"
            ),
            Error::InverseDiverged { budget } => write!(
                f,
                "inverse iteration exceeded {budget} steps; diffeomorphism bound violated"
            ),
            Error::SingularDifferential => write!(f, "differential is numerically singular"),
            Error::NotHyperbolic { trace } => write!(
                f,
                "base map with trace {trace} has spectrum on the unit circle"
            ),
            Error::CircleMapShape => {
                write!(f, "circle map is not an orientation-preserving diffeomorphism")
            }
            Error::RateChain => write!(
                f,
                "rate constants must satisfy 0 < λ_s < λ'_c ≤ 1 ≤ λ''_c < λ_u with c₁ ≥ 1"
            ),
            Error::RootFinder => write!(f, "polynomial root finder did not converge"),
            Error::UnstableDimension {
                expected,
                actual,
                moduli,
            } => write!(
                f,
                "expected a {expected}-dimensional expanding bundle, found {actual} (moduli {moduli:?})"
            ),
            Error::DominantNotSimple => {
                write!(f, "dominant eigenvalue is not simple; carried class not unique")
            }
            Error::FrameNotConverged { oscillation } => write!(
                f,
                "unstable-frame iteration oscillates (gap {oscillation:.3e}); map may not be partially hyperbolic at this strength"
            ),
            Error::VertexBudget { budget } => {
                write!(f, "refinement exceeded the vertex budget of {budget}")
            }
            Error::RefinementStuck => write!(f, "mesh refinement exceeded its round cap"),
            Error::TooFewIterates { n_max, min } => {
                write!(f, "growth fit needs at least {min} iterates, got {n_max}")
            }
            Error::AllScalesSaturated => write!(
                f,
                "every ε saturated the sample; use finer sampling or a coarser ladder"
            ),
            Error::TangentOverflow { step } => write!(
                f,
                "tangent frame overflowed at step {step}; use a smaller reorthonormalization interval"
            ),
            Error::DegreeMismatch => write!(f, "form degree does not match the patch"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
