//! Combinatorial theory of modifying modules over complete local cA_n
//! singularities `R = k[[x,y,u,v]]/(f_1...f_n - uv)`.
//!
//! Given the prime factorization of f (as ideal-class labels plus optional
//! polynomial representatives), this crate computes:
//!
//! - the classification of modifying / maximal modifying / cluster-tilting
//!   generators by flags of subsets of {1..n};
//! - mutation of modifying generators as reflection of the combinatorial
//!   picture of a flag, and exchange graphs of MM generators with loops;
//! - weak-order Hasse graphs on the symmetric group and desk-scale graph
//!   isomorphism;
//! - the divisor class group Z^t/<(a_1,...,a_t)> with canonical
//!   representatives, and module-isomorphism tests;
//! - Calabi-Yau reduction as a splitting into residual singularities;
//! - endomorphism quivers with loop rules read off linear parts;
//! - matrix factorizations presenting the ideals (u, f_I), verified as
//!   exact polynomial identities;
//! - a sufficient derived-equivalence criterion for partial resolutions.
//!
//! All arithmetic is exact over the rationals.

pub mod error;
pub mod graph;
pub mod model;
pub mod mutation;
pub mod poly;
pub mod present;

pub use error::{Error, Result};
pub use graph::{
    all_words, bfs_closure, build_exchange_graph, build_exchange_graph_with_threads,
    graphs_isomorphic, hasse_weak_order, inversions, to_dot, LabeledGraph,
};
pub use model::{
    class_normal_form, class_of_subset, flag_of_word, iso_class, picture_of_flag,
    word_of_maximal_flag, ClassVector, FactorData, Flag, GroupSequence, ModuleIsoClass, Word,
};
pub use mutation::{
    connected_components, is_fixed, mu_adjacent, mu_minus, mu_plus, reflect,
    ComponentDecomposition, SummandSet,
};
pub use poly::{
    is_in_m2, is_unit_multiple, linear_part, parse_poly, span_dim, verify_mf, LinForm, Mat2, Poly,
};
pub use present::{
    build_quiver, count_mm, cy_reduce, derived_equiv_diagnostic, derived_equiv_sufficient, is_ct,
    is_mm, is_modifying, mf_pair, mm_params, morita_class_count, Arrow, DerivedEquivReport,
    MMParam, Quiver, ReductionResult,
};
