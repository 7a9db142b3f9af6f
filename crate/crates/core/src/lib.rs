//! Non-adaptive quantitative group testing with sparse graph codes.
//!
//! Items are the left nodes of a random left-regular bipartite graph. Each
//! right node owns a bundle of tests described by a signature matrix: an
//! all-ones counting row stacked on the binary parity-check matrix of a
//! t-error-correcting BCH code. A peeling decoder resolves right nodes with
//! at most t unidentified defectives through BCH syndrome decoding, subtracts
//! what it finds, and repeats.
//!
//! Modules:
//!
//! * [`field`]: GF(2^b) arithmetic.
//! * [`bch`]: parity-check columns, syndromes, Berlekamp-Massey, root finding.
//! * [`graph`]: configuration-model sampling of the test-assignment graph.
//! * [`codec`]: design parameters, signature matrix, encoder, peeling decoder.
//! * [`density`]: density evolution, thresholds and the c(t) constants.
//! * [`sim`]: seeded Monte Carlo campaigns.

pub mod bch;
pub mod codec;
pub mod density;
pub mod error;
pub mod field;
pub mod golden;
pub mod graph;
pub mod sim;

pub use bch::{BchSpec, ParityColumns, RootMethod, Syndrome};
pub use codec::{decode, encode, DecodeOutcome, DecoderOptions, DesignParams, EllChoice, SignatureMatrix, TestVector};
pub use density::{c_of_t, lambda_threshold, tests_needed, DeConfig, DeResult};
pub use error::{BchError, CodecError, DecodeFailure, FieldError, GraphError};
pub use field::{FieldElement, FieldSpec};
pub use graph::BiRegularGraph;
pub use sim::{run_sweep, run_trial, SweepPoint, SweepStats, TrialConfig, TrialOutcome};
