//! Desk-scale wiretap code constructions: typicality, random codebooks and
//! typicality decoding, exact error and leakage evaluation, concentration
//! checks, robustification by coordinate permutations, random-code reduction
//! and elimination of randomness.

pub mod code;
pub mod eval;
pub mod reduction;
pub mod robust;
pub mod secrecy;
pub mod typicality;

pub use code::{
    build_random_codebook, codebook_sizes, decode_rule, CodeOrigin, CodebookParams, CodebookSizes,
    DecoderGrid, RandomCode, WiretapCode,
};
pub use eval::{
    evaluate_code, mixture_error, mixture_leakage, sequence_error, sequence_leakage,
    worst_state_search, EvalMode, EvalReport, Objective, SearchMode, SequenceEval,
};
pub use reduction::{
    eliminate_randomness, k_from_preset, reduce_random_code, search_prefix_code, Elimination,
    EliminationReport, KPreset, PrefixChoice, PrefixCode, Reduction, ReductionOptions,
};
pub use robust::{
    mean_member_table, robustify, verify_robustification, AverageMethod, RobustificationReport,
};
pub use secrecy::{chernoff_bound, check_secrecy_events, SecrecyEventsReport};
pub use typicality::{
    cond_typical_set, typical_set, verify_typicality_bounds, Slack, TypicalityParams,
    TypicalityReport,
};
