//! Domain entities, identifiers and units shared by every engine.

mod graph;
mod ids;
mod layout;
mod master;
mod money;
mod news;
mod process;
mod procurement;
mod user;

pub use graph::detect_cycle;
pub use ids::*;
pub use layout::{LayoutEntry, WidgetLayout};
pub use master::{Material, MaterialGroup, SubSupplierLink, Supplier};
pub use money::{Money, MoneyUnit};
pub use news::NewsItem;
pub use process::{ProcessInstance, ProcessStep, StepState, Task, TaskState};
pub use procurement::{
    validate_transition, Auction, AuctionStatus, Contract, PurchaseOrder, Rfq, RfqStatus,
    SupplierBid,
};
pub use user::{ReadEntry, SubjectRef, User};
