//! Spectral objects of complex tensors.
//!
//! A tensor of order `m` and dimension `n + 1` acts on vectors through
//! the contraction `x ↦ T x^{m−1}`; this crate computes the objects that
//! action generates:
//!
//! * eigenvector classes — projective fixed points of the contraction —
//!   found by polynomial homotopy continuation, classified by whether
//!   they admit a unit normalization (`xᵀx = 1`, transpose without
//!   conjugation), are isotropic (`xᵀx = 0`), or are annihilated
//!   (`T x^{m−1} = 0`);
//! * the tensor determinant, as a Macaulay resultant of the contraction
//!   forms, with singularity detection;
//! * the characteristic polynomial in the spectral parameter `λ`, via
//!   resultant sampling and interpolation, whose roots are the
//!   E-eigenvalues;
//! * the discriminant of the associated variational problem on the unit
//!   quadric, both in factored closed form and by direct resultant
//!   evaluation;
//! * congruence invariants of 2×2×2 pencils, including a trace formula
//!   for the determinant audited against the resultant definition.
//!
//! The layering is bottom-up: [`linalg`] (dense complex linear algebra),
//! [`tensor`] (the tensor type and its contractions), [`poly`]
//! (univariate and sparse multivariate polynomials), [`resultant`]
//! (Macaulay and Sylvester matrices), [`homotopy`] (path tracking),
//! then the spectral layers [`spectra`], [`geometry`], [`invariants`].

pub mod geometry;
pub mod homotopy;
pub mod invariants;
pub mod linalg;
pub mod poly;
pub mod resultant;
pub mod spectra;
pub mod tensor;

pub use geometry::{
    discriminant_check, discriminant_closed_form, discriminant_direct_sample, gradient_system,
    DiscReport, GeometryError, HypersurfaceSpec, SingularPointReport,
};
pub use homotopy::{solve_projective, solve_square, HomotopyError, SolutionSet, TrackerConfig};
pub use invariants::{
    congruence_action, crosscheck_sweep, det_trace_crosscheck, det_trace_formula, CrosscheckReport,
    InvariantsError, MatrixPair, SlotConvention,
};
pub use linalg::{c64, CMatrix, LogDet, LuFactors};
pub use poly::{interpolate, MultiPoly, MultiPolySystem, PolyError, UniPoly};
pub use resultant::{
    build_layout, macaulay_resultant, sylvester_resultant, DegreeProfile, MacaulayLayout,
    ResultantError, ResultantValue,
};
pub use spectra::{
    determinant, determinant_full, e_eigenvalues, echar_poly, eigenpairs, expected_class_count,
    is_singular, minors_residual, projective_map_step, CharPoly, EigenClass, EigenConfig,
    EigenKind, EigenReport, SpectraError,
};
pub use tensor::{random_tensor, singular_tensor, Tensor, TensorError};
