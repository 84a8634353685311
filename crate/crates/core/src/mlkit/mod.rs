//! Feature encodings, a dense network trained with Adam, a random forest,
//! splits and regression metrics.

mod dataset;
pub mod encode;
pub mod forest;
pub mod metrics;
pub mod mlp;
pub mod split;

pub use dataset::Dataset;
pub use encode::{encode_plucker, encode_vertices, inverse_target, Encoding};
pub use forest::{ForestConfig, RandomForest};
pub use metrics::{evaluate_regression, Bin, RegressionMetrics};
pub use mlp::{fine_tune, train_mlp, AdamConfig, Architecture, EpochLog, Loss, MlpModel, Task, TrainConfig};
pub use split::{group_kfold_split, kfold_split, train_test_split};

#[cfg(test)]
mod tests;
