//! Families of minimal unique-cause MC/DC test suites.
//!
//! A single N+1 suite for a singular boolean expression can be ruined by one
//! input the system under test cannot accept. This crate rearranges the
//! expression into every structurally distinct equivalent form, builds the
//! N+1 suite of each form, and then picks a suite that avoids forbidden
//! inputs and is cheapest under a cost model.
//!
//! ```
//! use eqrobin::{parse, generate_family, check_unique_cause, VariantOptions};
//!
//! let d = parse("a && (!b || !c) && d || e").unwrap();
//! let family = generate_family(&d, &VariantOptions::default()).unwrap();
//! assert_eq!(family.variant_count, 16);
//! for m in &family.members {
//!     assert_eq!(m.suite.size(), 6);
//!     assert!(check_unique_cause(&m.suite.expression, m.suite.vectors()).unwrap().pass());
//! }
//! ```

pub mod coverage;
pub mod equiv;
pub mod error;
pub mod experiment;
pub mod expr;
pub mod formats;
pub mod par;
pub mod parse;
pub mod random;
pub mod selection;
pub mod suite;
pub mod variants;
pub mod vector;

pub use coverage::{
    check_unique_cause, find_pair, verify_minimal, CoverageReport, IndependencePair,
};
pub use equiv::{equivalent, find_counterexample, truth_table, EquivalenceMode, EXHAUSTIVE_LIMIT};
pub use error::{Error, Result};
pub use experiment::{
    load_benchmark, run_rq1, run_rq2, Benchmark, DiversityReport, ResilienceReport,
};
pub use expr::{validate_sbe, BinOp, Condition, ConditionTable, Expr};
pub use parse::parse;
pub use selection::{
    cost_of, filter_family, is_illegal, select, ConstraintSet, CostModel, Rationale,
    SelectionReport,
};
pub use suite::{
    baseline_normalize, generate_family, generate_suite, SuiteFamily, TestCase, TestSuite,
};
pub use variants::{generate_variants, predicted_variant_count, VariantFamily, VariantOptions};
pub use vector::{TestVector, VarSet};
