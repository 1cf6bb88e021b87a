//! Finite rings, Peirce corners and unit regularity.
//!
//! Rings are built from a small construction language (`Z6`, `M2(Z3)`,
//! `T2(Z2)`, `Z2xZ4`) and every element is a [`Element`] code. Corner rings
//! `eRe` share codes with the ambient ring. The [`theorem`] module decides the
//! corner unit-regularity conditions with witnesses, and [`shift`] models the
//! infinite-dimensional shift operators over `F2` symbolically.

pub mod corner;
pub mod error;
pub mod regularity;
pub mod ring;
pub mod ringspec;
pub mod shift;
pub mod theorem;

pub use corner::{
    corner_ring, idempotents, peirce_decompose, product_subring_embed, CornerRing, Idempotent, PeirceParts,
    SubringEmbedding,
};
pub use error::RingError;
pub use regularity::{
    classify, one_sided_unit_regular_witness, regular_set, regular_witness, unit_regular_witness, ur_set,
    zero_divisor_status, RegularityKind, RegularityWitness, Side, UrSet, ZeroDivisorStatus,
};
pub use ring::{
    check_ring_axioms, make_matrix_ring, make_product_ring, make_triangular_ring, make_zmod, make_zmod_with, Axiom,
    AxiomCheck, AxiomReport, Element, FiniteRing, Limits, RingView, UnitTable, DEFAULT_AXIOM_CAP, DEFAULT_SIZE_CAP,
};
pub use ringspec::{parse_ring_spec, ParseError, ParseErrorKind, RingSpec};
pub use shift::{run_shift_demo, BandOperator, ShiftDemoReport, ShiftError};
pub use theorem::{
    build_m2_counterexample, condition_check, corner_one_sided_witness, corner_witness_from_global, find_unsound,
    verify_equivalences, verify_star_and_corollary, Condition, CornerMembership, CornerSetting, CornerWitness,
    CounterexampleBase, EngineError, OneSidedWitness, Precondition, ReproBundle, ScaffoldReport, StarCorollaryReport,
    VerdictReport, CURATED_FAMILY,
};
