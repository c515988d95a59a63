//! Fixed strategies: the decision tree, its document form, replay and
//! verification, and guess-count analytics.

mod distribution;
mod document;
mod session;
mod tree;
mod verify;

pub use distribution::{match_winrate, DistributionError, GuessDistribution};
pub use document::{from_document, to_document, DocumentError};
pub use session::{Session, SessionError, Step};
pub use tree::StrategyTree;
pub use verify::{distribution, replay, verify, ReplayError, Transcript, VerifyReport, Violation, DEPTH_CAP};
