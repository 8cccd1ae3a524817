//! Conditional expectations on twisted group Kac algebras and the quantum
//! hypergroups `(B, (P⊗P)Δ)` they induce on their ranges.

mod bundle;
mod dual;
mod expectation;

pub use bundle::{
    haar_solutions, induced_coproduct, positive_definite_gram, strong_invariance_residual,
    symmetry_witness, verify_hypergroup, HypergroupBundle, SymmetryWitness, DEFAULT_CP_LIMIT,
};
pub use dual::{
    djs_property, dual_pushforward_check, dual_pushforward_residuals, minimal_projections,
    structure_constants, DjsReport, DualFunctional, StructureConstants,
};
pub use expectation::{
    check_expectation_hypotheses, counit_projection, delsart_expectation,
    delsart_expectation_unchecked, double_coset_expectation, kernel_coideal_residual,
    orbital_expectation, quotient_epimorphism, ConditionalExpectation, Provenance, MAX_CLOSURE,
};
