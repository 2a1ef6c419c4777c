//! Modeling and auditing toolkit for risk-scoring schemes built on ordinal
//! scales and risk matrices, together with the quantitative alternative:
//! probability distributions, Monte-Carlo simulation, and loss exceedance
//! curves compared against a risk appetite.
//!
//! The crate is generic over the scalar type via [`Scalar`] (`f32` or
//! `f64`); the `*64` aliases at the crate root pin `f64` for everyday use.

pub mod coherence;
pub mod consistency;
pub mod engine;
pub mod portfolio;
pub mod scalar;
pub mod scales;
pub mod scheme;

pub use scalar::Scalar;
pub use scales::{
    Direction, DistributionKind, NumberAssignment, OrdinalScale, QuantRange, RankLevel,
    ScaleError, ScaleFinding, ScaleFindingKind,
};
pub use scheme::{
    check_zero_annihilation, combination_table, combine, factor_influence, preset,
    CombinationRule, CombinationTable, FactorInfluence, MatrixColoring, OutputCategory, Preset,
    RiskModel, RiskScheme, SchemeError, SchemeFinding, ScoreResult, ThresholdMap,
};
pub use consistency::{
    audit_matrix, cell_extremes, check_betweenness, check_consistent_coloring,
    check_weak_consistency, enumerate_consistent_colorings, AuditError, AuditFinding,
    CellRegion, ColoringGrid, CoxProperty, MatrixAuditReport,
};
pub use coherence::{
    check_axiom, expected_loss_metric, run_coherence_suite, run_scheme_coherence_suite,
    scheme_induced_metric, Axiom, AxiomCase, AxiomResult, AxiomSummary, AxiomVerdict,
    CoherenceError, CoherenceSuiteReport, ExpectedLoss, LossProspect, RiskMetric,
    SchemeAxiomSummary, SchemeCoherenceReport, SchemeMetric, SchemeViolation,
};
pub use portfolio::{
    adversarial_portfolio, analyze, detect_inversions, detect_ties, kendall_tau,
    range_compression, true_risk, AnalysisReport, CompressionGroup, CompressionReport,
    InversionPair, KendallTau, Period, PortfolioError, Portfolio, QuantEvent, Rate, TieGroup,
};
pub use engine::{
    closed_form_eal, compare_appetite, exceedance, percentile_loss, simulate, AppetitePoint,
    AppetiteVerdict, DistributionSpec, EngineError, EventModel, FrequencyModel,
    LossExceedanceCurve, RiskAppetite,
};

/// Severity attached to findings across all analyses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Info,
    Warning,
    Violation,
}

impl std::fmt::Display for Severity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Violation => "violation",
        };
        f.write_str(s)
    }
}

/// Concrete `f64` aliases for the main domain types.
pub type QuantRange64 = QuantRange<f64>;
pub type OrdinalScale64 = OrdinalScale<f64>;
pub type RiskScheme64 = RiskScheme<f64>;
pub type MatrixColoring64 = MatrixColoring<f64>;
pub type RiskModel64 = RiskModel<f64>;
pub type LossProspect64 = LossProspect<f64>;
pub type QuantEvent64 = QuantEvent<f64>;
pub type Portfolio64 = Portfolio<f64>;
pub type EventModel64 = EventModel<f64>;
pub type LossExceedanceCurve64 = LossExceedanceCurve<f64>;
pub type RiskAppetite64 = RiskAppetite<f64>;
