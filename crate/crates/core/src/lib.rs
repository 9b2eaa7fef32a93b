//! Exact cluster-mutation combinatorics: exchange matrices and valued ice
//! quivers, c-vectors, layered T-systems, contiguous paths in the symmetric
//! group, and harnesses that certify maximal green sequences.

pub mod error;
pub mod exchange;
pub mod generate;
pub mod layering;
pub mod permpath;
pub mod quiver;
pub mod verify;
pub mod vertex;

pub use error::{Error, Result};
pub use exchange::{
    compute_symmetrizer, frame, run_sequence, verdict, CVector, Color, ExchangeMatrix,
    FramedState, MutationSequence, Symmetrizer, Verdict, VerdictReport,
};
pub use generate::{generate, Generated, InstanceFamily};
pub use layering::{
    chain_quiver, check_layered_step, enumerate_full_shuffles, expected_length, is_full,
    FullShuffles, FullnessViolation, LayeredViolation, Layering, LayeringMode, ViolationKind,
};
pub use permpath::{
    enumerate_contiguous_paths, enumerate_xi, path_to_word, seq_from_path, tau_bullet,
    word_to_path, xi_contains, ContiguousPath, Permutation, ReducedWord, TauPresentation,
};
pub use quiver::{
    export_dot, framed_quiver, mutate_quiver, to_matrix, to_quiver, truncate, ValuedArrow,
    ValuedIceQuiver,
};
pub use verify::{
    verify_an_lemma, verify_theorem_a, verify_theorem_b, verify_truncations, Certificate,
    FamilyKind, Instance,
};
pub use vertex::VertexId;
