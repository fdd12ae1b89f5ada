//! Vojtáš triples `(A₋, A₊, 𝖠)`: finite ones decided exhaustively, coded
//! ones over decidable representations, morphism candidates as machines,
//! the catalog of combinatorial invariants and refutation gadgets.

mod builtin;
mod coded;
mod diagram;
mod finite;
mod gadgets;
mod machine;
mod morphism;
mod probes;
mod rep;

pub use builtin::{builtin, builtin_morphisms, next_element_func};
pub use coded::{catalog, lookup, Carrier, CodedTriple, Property, Relation};
pub use diagram::{vd_diagram, Diagram, DiagramKind, EdgeRecord, Evidence, Verdict};
pub use finite::{
    all_triples, finite_morphisms, subsets_of_size, FiniteMorphism, FiniteTriple, NORM_SEARCH_BOUND,
};
pub use gadgets::{
    refute_filterclass_to_b, refute_p_to_t, FilterClassViolation, FilterRelation, PtViolation, TripleSets,
};
pub use machine::{Composed, FnMachine, LineProcess, Machine, ProcessMachine, DEFAULT_TIMEOUT};
pub use morphism::{
    check_morphism, compose, dual_morphism, MorphismCandidate, MorphismReport, ProbeSet, PropertyViolation,
    RelationViolation,
};
pub use probes::{families as default_families, probes as default_probes};
pub use rep::{Kind, Rep};
