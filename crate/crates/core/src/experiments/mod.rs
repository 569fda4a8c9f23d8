//! Simulation studies and the prediction workflow built on the samplers.

pub mod generate;
pub mod metrics;
pub mod predict;
pub mod screen;
pub mod simulate;

pub use generate::{generate, theoretical_r2, Setup, SimData};
pub use metrics::{auc_from_tstats, ordering_agreement, rank_by_magnitude, sse_decompose, SseDecomposition};
pub use predict::{
    permuted_response, synthetic_expression, train_test_evaluate, ExpressionData, MspeRow, MspeTable, SplitConfig,
};
pub use screen::screen_by_marginal_correlation;
pub use simulate::{run_simulation, PriorSummary, ReplicationOutcome, SimulationConfig, SimulationReport};

/// Quote a CSV field when it holds a comma, quote or line break.
pub fn csv_field(s: &str) -> std::borrow::Cow<'_, str> {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\"")).into()
    } else {
        s.into()
    }
}
