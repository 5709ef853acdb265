//! Exact Clifford algebras of diagonal quadratic forms, involutions induced
//! by orthogonal symmetries, and machine-checked isomorphism certificates
//! for the structure theory connecting them to (multi)quaternion algebras.

pub mod algebra;
pub mod clifford;
pub mod field;
pub mod linalg;
pub mod qspace;
pub mod report;
pub mod rng;
pub mod suite;
pub mod structure;
pub mod universal;

pub use algebra::{
    from_clifford, from_even_clifford, quaternion, tensor, verify_certificate, AlgebraError,
    CertChecks, CheckOutcome, InvolutionClass, InvolutionKind, InvolutionType, InvolutiveAlgebra,
    IsoCertificate, LinearMapTable, QuaternionInvolution,
};
pub use clifford::{blade_mul, center_basis, parse_element, z_element, CliffordElement, CliffordError};
pub use field::{FieldDescriptor, FieldError, FieldScalar};
pub use qspace::{FormError, OrthSymmetry, QuadForm, Sign};
pub use universal::{
    canonical_even_map, clifford_map_factor, even_universal_factor, EvenMapTable, UniversalError,
    ValidationOutcome,
};
