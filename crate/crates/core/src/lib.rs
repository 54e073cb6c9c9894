//! Perfect discrimination of separable pure states when the allowed
//! measurements are all decompositions of the identity into elements of the
//! dual of the separable cone (block-positive operators).
//!
//! * [`linalg`]: dense Hermitian kernel (tensor, partial transpose, Jacobi).
//! * [`states`]: product states and their canonical two-qubit form.
//! * [`discrimination`]: the distinguishability test, explicit
//!   measurements, multicopy thresholds, capacity family.
//! * [`cone`]: dual-cone membership and necessary structure of
//!   discriminating measurements.
//! * [`sweep`]: region grids and random soundness sweeps.
//! * [`json`]: file formats.

pub mod cone;
pub mod discrimination;
pub mod error;
pub mod json;
pub mod linalg;
pub mod par;
pub mod states;
pub mod sweep;

pub use cone::{
    block_positivity_min, extract_t_params, is_in_dual_cone, is_in_dual_cone_with, necessity_bound, symmetrize, verify_certificate,
    verify_overlap_identity, ConeMembership, DecompositionCertificate, MembershipMethod, NecessityReport, SeeSawOptions, TParams,
};
pub use discrimination::{
    capacity_family, construct_for_states, construct_measurement, decide_canonical, decide_sep, extend_to_full,
    min_copies, multicopy_measurement, verify_perfect, verify_states, verify_states_with, DiscriminationReport, Effect, Measurement, Verdict,
};
pub use error::{Error, Result};
pub use linalg::{HermitianMatrix, C64};
pub use par::Parallelism;
pub use states::{
    canonicalize, from_bloch, mixed_density, random_pure_product, BlochAngle, CanonicalPair, ProductMixedState,
    PureProductState, PureState,
};
