//! Automation bots. Bots only ever propose; a human approves a run before
//! anything in the store changes.

mod bundle;
mod negotiate;
mod policy;
mod proposal;
mod runner;

pub use bundle::bundle_rfqs;
pub use negotiate::negotiate_low_risk;
pub use policy::{BundlePolicy, GroupBy, NegotiationPolicy};
pub use proposal::{BotProposal, ProposalKind};
pub use runner::{
    approve_run, execute_bot, reference_price, reject_run, BotRun, RunStatus, BOT_IDS, BUNDLER,
    NEGOTIATOR,
};
