use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("body is not strictly convex: radii eigenvalue {eigenvalue:e} at node {node}")]
    NonConvex { node: usize, eigenvalue: f64 },
    #[error("support function is not positive: S = {value:e} at node {node}")]
    NonPositiveSupport { node: usize, value: f64 },
    #[error("point cloud has a degenerate hull")]
    DegenerateHull,
    #[error("step failed after {halvings} halvings at t = {time}")]
    StepFailure { halvings: usize, time: f64 },
    #[error("run stopped at t = {time} after {steps} steps before reaching the volume threshold")]
    Timeout { time: f64, steps: usize },
    #[error("series is not strictly decreasing at index {index}")]
    NonMonotone { index: usize },
    #[error("time {time} is at or past the extinction time {extinction}")]
    PastExtinction { time: f64, extinction: f64 },
    #[error("support fields live on different grids")]
    GridMismatch,
    #[error("body is not volume-normalised (V = {volume})")]
    NotNormalized { volume: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("snapshot does not match the grid: {0}")]
    SnapshotMismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
