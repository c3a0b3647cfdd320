//! Crowd-sourced feature-importance rankings, aggregated into a consensus
//! order and turned into signed initial weight vectors for binary
//! classifiers, plus attribution tooling and a benchmarking grid over
//! class-skewed subsamples.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`rank`] collects per-user rankings into a [`rank::RankingProfile`] and
//!    aggregates them with exact Kemeny-Young, Markov-chain (MC4) or Borda
//!    consensus.
//! 2. [`seed`] combines the aggregate scores with majority direction votes
//!    into a [`seed::SeedWeights`] vector in `[-1, 1]`.
//! 3. [`models`] trains a linear SVM or a small feed-forward network from
//!    either random or seeded initial weights.
//! 4. [`interpret`] attributes trained-network outputs to inputs and hidden
//!    neurons; [`harness`] compares seeded against random initialization over
//!    a grid of sample sizes and class skews.
//!
//! Everything downstream of a `u64` seed is deterministic: the same inputs
//! and seed produce byte-identical outputs.
//!
//! # Example
//!
//! ```
//! use rankseed::rank::{aggregate, AggregationMethod, Ranking, RankingProfile};
//! use rankseed::seed::{resolve_directions, seed_from_aggregate, DirectionVotes};
//!
//! // three users rank three features; two prefer the order 0 > 1 > 2
//! let profile = RankingProfile::new(
//!     vec![
//!         Ranking::new(vec![0, 1, 2])?,
//!         Ranking::new(vec![0, 1, 2])?,
//!         Ranking::new(vec![1, 0, 2])?,
//!     ],
//!     vec!["ann".into(), "bo".into(), "cy".into()],
//! )?;
//! let agg = aggregate(&profile, AggregationMethod::KemenyYoung)?;
//! assert_eq!(agg.ranking.order(), &[0, 1, 2]);
//!
//! // everyone marks the last feature as negatively important
//! let votes = DirectionVotes::from_user_signs(&[
//!     vec![1, 1, -1],
//!     vec![1, 1, -1],
//!     vec![1, 1, -1],
//! ])?;
//! let signs = resolve_directions(&votes)?;
//! let names: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
//! let sw = seed_from_aggregate(&agg, &signs, &names)?;
//! assert_eq!(sw.values, vec![1.0, 0.5, -1.0]);
//! # Ok::<(), rankseed::Error>(())
//! ```

pub mod dataset;
pub mod error;
pub mod harness;
pub mod interpret;
pub mod models;
pub mod rank;
pub mod seed;

pub use error::{Error, Result};

// The guide's code blocks run as doc-tests so book and crate cannot drift.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/index.md")]
    mod index {}
    #[doc = include_str!("../../../book/src/elicitation.md")]
    mod elicitation {}
    #[doc = include_str!("../../../book/src/aggregation.md")]
    mod aggregation {}
    #[doc = include_str!("../../../book/src/seeding.md")]
    mod seeding {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/attribution.md")]
    mod attribution {}
    #[doc = include_str!("../../../book/src/grid.md")]
    mod grid {}
}
