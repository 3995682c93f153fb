//! Propositional answer set programming with aggregates under two stable
//! model semantics:
//!
//! * **F-stable** models, where the reduct keeps aggregates as they are (the
//!   semantics of mainstream ASP solvers);
//! * **G-stable** models, where the reduct replaces every aggregate by the
//!   conjunction of its true domain atoms, so that an atom can never support
//!   itself through an aggregate.
//!
//! The crate parses and renders a small ground dialect, evaluates both
//! semantics by exact enumeration, decides ASP(M) programs under G-semantics
//! by a fixpoint, and compiles G-semantics into F-semantics with two
//! faithful, modular rewritings.
//!
//! ```
//! use gzasp_core::{parse, Reasoner, Semantics};
//!
//! let program = parse("a :- not not a.  b | c :- count{a, b} >= 1.").unwrap();
//! let models = Reasoner::default().stable_models(&program, Semantics::G).unwrap();
//! let shown: Vec<String> = models.iter().map(|m| m.to_string()).collect();
//! assert_eq!(shown, ["{}", "{a,c}"]);
//! ```

pub mod ast;
mod compiled;
pub mod parser;
pub mod reasoner;
pub mod rewriter;
pub mod semantics;

pub use ast::{
    atoms_of, equivalent_in_context, size, AggregateElement, AggregateFunction, AggregateSpec,
    AstError, Atom, Comparator, Interpretation, Literal, Program, Rule,
};
pub use parser::{
    emit_core2, parse, parse_bytes, parse_with, render, EmitError, NameMode, ParseError,
};
pub use reasoner::{
    gsm_asp_m, is_stable, ModelSet, ReasonError, Reasoner, Semantics, DEFAULT_MAX_ATOMS,
};
pub use rewriter::{
    check_size_bounds, dependency_graph, is_aggregate_stratified, rewrite, rewrite_c, rewrite_m,
    rewrite_n, rewrite_rew, rewrite_rew_with, rewrite_str, rewrite_str_with, CopyRole,
    DependencyGraph, Method, RewriteError, RewriteOptions, SizeReport,
};
pub use semantics::{
    classify_aggregate, eval_aggregate, f_reduct, g_reduct, is_minimal_model, satisfies,
    tp_least_fixpoint, tp_step, AggregateClass, SemanticsError,
};
