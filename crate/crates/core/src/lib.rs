//! Semantics engine for the secret π-calculus.
//!
//! The calculus extends the π-calculus with a `hide` binder whose scope
//! cannot be extruded, inputs that refuse a set of blocked names, trusted
//! inputs that accept only a whitelist, and spy prefixes that observe
//! communications on a channel without learning the message.

pub mod congruence;
pub mod encodings;
pub mod equivalence;
pub mod gen;
pub mod lts;
pub mod name;
pub mod parser;
pub mod process;
pub mod reduction;
pub mod suite;

pub use congruence::{
    congruent_bounded, from_standard_form, normalize, to_standard_form, unfold_repl, Answer,
    Binder, StandardForm,
};
pub use encodings::{encode_match, EncodingError, MatchSpec};
pub use equivalence::{
    barbs, bisim_report, bisimilar, weak_barb, weak_barbs, Barb, BisimReport, BisimVerdict,
    InconclusiveReason, Polarity, Side, TraceStep,
};
pub use lts::{build_graph, transitions, Action, LtsError, LtsGraph, Mode, NameBudget};
pub use name::{name_set, FreshSupply, Name, NameSet};
pub use parser::{parse, parse_bytes, pretty, ParseError};
pub use process::{
    alpha_canonicalize, alpha_eq, alpha_key, block_name, readable, substitute, BinderKind, Process,
};
pub use reduction::{reach, step, Bounds, Reach, Redex, RedexKind};
