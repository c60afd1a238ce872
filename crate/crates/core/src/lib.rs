//! Skeleton-based gesture recognition.
//!
//! The pipeline reads 20-joint skeleton streams ([`skeleton`]), turns each
//! frame into either six depth-normalized centroid distances (one person)
//! or twelve direction-cosine angles of weighted mean joints (one person of
//! an interacting pair) ([`features`]), and classifies the flattened
//! sequence with an SVM, a bagged tree ensemble or kNN ([`classifiers`]).
//! [`evaluation`] provides confusion matrices, per-class metrics and the
//! Friedman test; [`harness`] generates synthetic data and runs whole
//! experiments; [`cli`] backs the `skelgest` binary.
//!
//! ```
//! use skelgest::features::FeatureKind;
//! use skelgest::harness::{generate_sequence, single_person_template};
//!
//! let t = single_person_template("waving").unwrap();
//! let seq = generate_sequence(&t, 90, 7).unwrap();
//! let feats = FeatureKind::Single.extract(&seq).unwrap();
//! assert_eq!(feats.as_slice().len(), 540);
//! ```

// NaN-rejecting checks are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifiers;
pub mod cli;
pub mod evaluation;
pub mod features;
pub mod harness;
pub mod skeleton;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The crate's portable RNG: ChaCha8 seeded from `seed` on stream `stream`.
///
/// Output depends only on `(seed, stream)`, never on platform or thread
/// count.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}
