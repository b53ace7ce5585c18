pub mod analysis;
pub mod cost;
pub mod dynamics;
pub mod ea;
pub mod error;
pub mod experiment;
pub mod instance;
pub mod plan;
pub mod seed;
pub mod tour;
pub mod ttpio;

pub use cost::{node_weight, tour_cost, Budget, CostModel, NodeWeights};
pub use error::{Error, Result};
pub use instance::{Instance, Item, Metric};
pub use plan::PackingPlan;
pub use tour::Tour;
