//! Exact submodularity certification for Jaccard-index set functions.
//!
//! The crate evaluates the Jaccard index both as a function of the prediction
//! `A` and as a function of the misprediction set `M = A △ G`, certifies
//! submodularity or supermodularity of any finite set function by exhaustive
//! enumeration, builds explicit counterexamples, and computes Lovász-extension
//! surrogates with empirical convexity probes.
//!
//! ```
//! use jaccard_submod::{certify_local, GroundSet, JaccardFamily, SubsetMask, Verdict};
//!
//! let fam = JaccardFamily::new(GroundSet::new(6)?, SubsetMask::from_bits(0b101))?;
//! assert_eq!(certify_local(&fam.misprediction())?.verdict, Verdict::Supermodular);
//! assert_eq!(certify_local(&fam.direct())?.verdict, Verdict::Neither);
//! assert_eq!(certify_local(&fam.loss())?.verdict, Verdict::Submodular);
//! # Ok::<(), jaccard_submod::Error>(())
//! ```
//!
//! Parallel work runs on the current rayon pool; see [`with_threads`].

pub mod certify;
pub mod cli;
pub mod error;
pub mod jaccard;
pub mod lovasz;
pub mod mask;
pub mod setfn;
pub mod value;

pub use certify::{
    certify_definitional, certify_local, find_counterexample, paper_counterexample_case_i,
    paper_counterexample_case_ii, CertificationReport, Counterexample, Method, Property, Verdict,
};
pub use error::{Error, Result};
pub use jaccard::{EmptyConvention, JaccardFamily};
pub use lovasz::{lovasz_extension, LovaszResult, RelaxedPoint};
pub use mask::{GroundSet, SubsetMask};
pub use setfn::{FunctionKind, SetFunction};
pub use value::{Rational, Value};

/// Runs `op` on a dedicated rayon pool with `threads` workers.
pub fn with_threads<R, F>(threads: usize, op: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(op)
}
