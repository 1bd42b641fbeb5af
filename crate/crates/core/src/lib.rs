//! Algorithms for Artin groups whose defining exponents are large, built
//! around explicitly solvable two-generator subgroups.
//!
//! The crate is organized bottom-up:
//!
//! - [`words`]: freely reduced words, syllables, group presentations, and
//!   the group-file format shared by the command-line tools.
//! - [`dihedral`]: two-generator Artin groups, solved twice over — a
//!   Garside normal form and an independent normal form through the
//!   central quotient — plus syllable-minimal rewriting and the
//!   relator-completion search.
//! - [`artin`]: Dehn-style reduction in the full group; word problem and
//!   equality for presentations with all exponents at least 4.
//! - [`coned`]: certified Cayley-ball construction, the coned-off graph
//!   with its subdivided metric, geodesics and Hausdorff distances.
//! - [`relhyp`]: geodesic pipelines (block decomposition, syllable-minimal
//!   rewriting, condensation) and thin-bigon scans over coned-off balls.
//! - [`sampling`]: seeded random word generators shared by tests, scans,
//!   and the command-line interface.
//! - [`acceptance`]: the runnable acceptance checks, shared by the
//!   integration test and the `accept` subcommand.

pub mod acceptance;
pub mod artin;
pub mod coned;
pub mod dihedral;
pub mod relhyp;
pub mod sampling;
pub mod words;

pub use acceptance::{
    run_acceptance, run_selected, AcceptanceConfig, CriterionOutcome, Status, DEFAULT_SEED,
};
pub use artin::{
    DehnOptions, IntersectionReport, ReductionStep, ReductionTrace, Violation, WpVerdict,
};
pub use coned::{BallOptions, Cone, ConedBall, GeodesicSet, NodeId, XPath};
pub use relhyp::{
    bigon_scan, bigon_scan_records, build_beta, condense, decompose_blocks, delta_report,
    run_pipeline_sample_records, run_pipeline_samples, verify_pipeline, Block, BlockDecomposition,
    CondensedPath, DeltaReport, DeltaRow, PairRecord, PipelineBatch, PipelineReport, RunRecord,
    ScanCaps, ScanMode, ScanReport, ScanWitness,
};
pub use dihedral::{
    AmalgamNf, Completion, DihedralPair, DihedralScanState, GarsideNf, MinSyllResult,
    MinSyllStatus, SearchBounds, Simple,
};
pub use sampling::{
    random_artin_reduced, random_pair_word, random_reduced_word, relator_conjugate_product,
};
pub use words::{Error, GroupSpec, MCoeff, Syllable, Word};
