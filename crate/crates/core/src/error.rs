use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid network: {}", .0.join("; "))]
    InvalidNetwork(Vec<String>),
    #[error("step {step} does not divide {what}")]
    Misaligned { step: String, what: String },
    #[error("time-expanded graph needs {needed} nodes, budget is {budget}")]
    NodeBudget { needed: u128, budget: u128 },
    #[error("flow is not maximum: residual path to the sink exists")]
    NotMaximum,
    #[error("infinite-horizon solve did not stabilize after {0} doublings")]
    NotStabilized(u32),
    #[error("integer scaling of capacities overflows 128 bits")]
    CapacityOverflow,
    #[error("conservation violated: excess at t is {at_target}, excess at s is {at_source}")]
    ValueMismatch { at_target: String, at_source: String },
    #[error("gadget constraint violated: {0}")]
    Gadget(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
