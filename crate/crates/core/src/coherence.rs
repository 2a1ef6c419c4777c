//! Property checks of risk metrics against the five coherence axioms:
//! relevance, monotonicity, translation invariance, subadditivity, and
//! positive homogeneity.
//!
//! Two kinds of metric are covered: prospect metrics (a mapping from a
//! discrete loss distribution to a real number, e.g. expected loss) and
//! scheme-induced metrics (the semi-quantitative combined score of a
//! scoring scheme, evaluated on quantitative events). For scheme metrics
//! the axioms are translated to event level: monotonicity compares metric
//! order against expected-annual-loss order, homogeneity scales the impact
//! magnitude, translation reduces the expected annual loss by mitigation,
//! and subadditivity pools two occurrence streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::portfolio::{true_risk, QuantEvent, Rate};
use crate::scalar::{num, Scalar};
use crate::scheme::{RiskScheme, SchemeError};

/// A discrete loss distribution: `(probability, loss)` outcomes.
///
/// Constructed prospects have non-negative losses; mitigation
/// ([`LossProspect::translated`]) may push losses negative, which is kept
/// deliberately so the translation identity stays checkable.
#[derive(Debug, Clone, PartialEq)]
pub struct LossProspect<F> {
    outcomes: Vec<(F, F)>,
}

#[derive(Debug, Error, PartialEq)]
pub enum CoherenceError {
    #[error("prospect needs at least one outcome")]
    EmptyProspect,
    #[error("outcome probabilities must lie in [0, 1] (got {value})")]
    BadProbability { value: String },
    #[error("outcome probabilities must sum to 1 within 1e-9 (got {sum})")]
    ProbabilitiesDoNotSum { sum: String },
    #[error("losses must be finite and non-negative (got {value})")]
    BadLoss { value: String },
    #[error("axiom case is malformed: {0}")]
    MalformedCase(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("trial count must be at least 1")]
    NoTrials,
}

impl<F: Scalar> LossProspect<F> {
    pub fn new(outcomes: Vec<(F, F)>) -> Result<Self, CoherenceError> {
        if outcomes.is_empty() {
            return Err(CoherenceError::EmptyProspect);
        }
        let mut sum = F::zero();
        for &(p, l) in &outcomes {
            if !p.is_finite() || p < F::zero() || p > F::one() {
                return Err(CoherenceError::BadProbability {
                    value: p.to_string(),
                });
            }
            if !l.is_finite() || l < F::zero() {
                return Err(CoherenceError::BadLoss {
                    value: l.to_string(),
                });
            }
            sum += p;
        }
        if (sum - F::one()).abs() > num(1e-9) {
            return Err(CoherenceError::ProbabilitiesDoNotSum {
                sum: sum.to_string(),
            });
        }
        Ok(Self { outcomes })
    }

    pub fn certain(loss: F) -> Result<Self, CoherenceError> {
        Self::new(vec![(F::one(), loss)])
    }

    pub fn outcomes(&self) -> &[(F, F)] {
        &self.outcomes
    }

    /// Has any strictly positive loss with strictly positive probability.
    pub fn is_positive(&self) -> bool {
        self.outcomes
            .iter()
            .any(|&(p, l)| p > F::zero() && l > F::zero())
    }

    /// Deterministic mitigation: every loss reduced by `alpha`, no flooring.
    pub fn translated(&self, alpha: F) -> Self {
        Self {
            outcomes: self.outcomes.iter().map(|&(p, l)| (p, l - alpha)).collect(),
        }
    }

    /// Every loss scaled by `lambda`.
    pub fn scaled(&self, lambda: F) -> Self {
        Self {
            outcomes: self
                .outcomes
                .iter()
                .map(|&(p, l)| (p, l * lambda))
                .collect(),
        }
    }

    /// Independent sum of two prospects (full outer convolution).
    pub fn convolve(&self, other: &Self) -> Self {
        let mut outcomes = Vec::with_capacity(self.outcomes.len() * other.outcomes.len());
        for &(pa, la) in &self.outcomes {
            for &(pb, lb) in &other.outcomes {
                outcomes.push((pa * pb, la + lb));
            }
        }
        Self { outcomes }
    }
}

/// Probability-weighted mean loss.
pub fn expected_loss_metric<F: Scalar>(prospect: &LossProspect<F>) -> F {
    prospect
        .outcomes
        .iter()
        .fold(F::zero(), |acc, &(p, l)| acc + p * l)
}

/// An evaluable risk metric over loss prospects.
pub trait RiskMetric<F: Scalar> {
    fn name(&self) -> &str;
    fn evaluate(&self, prospect: &LossProspect<F>) -> F;
}

/// The expected-loss metric; linear, hence coherent.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExpectedLoss;

impl<F: Scalar> RiskMetric<F> for ExpectedLoss {
    fn name(&self) -> &str {
        "expected-loss"
    }

    fn evaluate(&self, prospect: &LossProspect<F>) -> F {
        expected_loss_metric(prospect)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Relevance,
    Monotonicity,
    TranslationInvariance,
    Subadditivity,
    PositiveHomogeneity,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [
        Axiom::Relevance,
        Axiom::Monotonicity,
        Axiom::TranslationInvariance,
        Axiom::Subadditivity,
        Axiom::PositiveHomogeneity,
    ];
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Axiom::Relevance => "relevance",
            Axiom::Monotonicity => "monotonicity",
            Axiom::TranslationInvariance => "translation-invariance",
            Axiom::Subadditivity => "subadditivity",
            Axiom::PositiveHomogeneity => "positive-homogeneity",
        };
        f.write_str(s)
    }
}

/// One concrete axiom instance: operands plus the scalar parameter where the
/// axiom takes one (alpha for translation, lambda for homogeneity).
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCase<F> {
    pub axiom: Axiom,
    pub x: LossProspect<F>,
    pub y: Option<LossProspect<F>>,
    pub param: Option<F>,
}

impl<F: Scalar> AxiomCase<F> {
    pub fn relevance(x: LossProspect<F>) -> Result<Self, CoherenceError> {
        if !x.is_positive() {
            return Err(CoherenceError::MalformedCase(
                "relevance needs a prospect with positive loss mass".into(),
            ));
        }
        Ok(Self {
            axiom: Axiom::Relevance,
            x,
            y: None,
            param: None,
        })
    }

    /// `x` must dominate `y` statewise: same outcome probabilities, every
    /// loss of `x` at least the matching loss of `y`.
    pub fn monotonicity(x: LossProspect<F>, y: LossProspect<F>) -> Result<Self, CoherenceError> {
        if x.outcomes.len() != y.outcomes.len()
            || x.outcomes
                .iter()
                .zip(&y.outcomes)
                .any(|(&(pa, la), &(pb, lb))| pa != pb || la < lb)
        {
            return Err(CoherenceError::MalformedCase(
                "monotonicity needs statewise dominance on a shared outcome space".into(),
            ));
        }
        Ok(Self {
            axiom: Axiom::Monotonicity,
            x,
            y: Some(y),
            param: None,
        })
    }

    pub fn translation(x: LossProspect<F>, alpha: F) -> Result<Self, CoherenceError> {
        if !(alpha >= F::zero()) {
            return Err(CoherenceError::MalformedCase(
                "translation needs alpha >= 0".into(),
            ));
        }
        Ok(Self {
            axiom: Axiom::TranslationInvariance,
            x,
            y: None,
            param: Some(alpha),
        })
    }

    pub fn subadditivity(x: LossProspect<F>, y: LossProspect<F>) -> Self {
        Self {
            axiom: Axiom::Subadditivity,
            x,
            y: Some(y),
            param: None,
        }
    }

    pub fn homogeneity(x: LossProspect<F>, lambda: F) -> Result<Self, CoherenceError> {
        if !(lambda > F::zero()) {
            return Err(CoherenceError::MalformedCase(
                "homogeneity needs lambda > 0".into(),
            ));
        }
        Ok(Self {
            axiom: Axiom::PositiveHomogeneity,
            x,
            y: None,
            param: Some(lambda),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomVerdict {
    Holds,
    Violated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomResult<F> {
    pub axiom: Axiom,
    pub verdict: AxiomVerdict,
    pub witness: AxiomCase<F>,
    pub lhs: F,
    pub rhs: F,
}

/// Evaluate both sides of an axiom instance. Equality axioms compare within
/// `tolerance`; inequality axioms allow a `tolerance` slack in the permitted
/// direction.
pub fn check_axiom<F: Scalar>(
    metric: &dyn RiskMetric<F>,
    case: &AxiomCase<F>,
    tolerance: F,
) -> Result<AxiomResult<F>, CoherenceError> {
    let need_y = || {
        case.y
            .as_ref()
            .ok_or_else(|| CoherenceError::MalformedCase("missing second operand".into()))
    };
    let need_param = || {
        case.param
            .ok_or_else(|| CoherenceError::MalformedCase("missing parameter".into()))
    };
    let (lhs, rhs, holds) = match case.axiom {
        Axiom::Relevance => {
            if !case.x.is_positive() {
                return Err(CoherenceError::MalformedCase(
                    "relevance needs a positive prospect".into(),
                ));
            }
            let lhs = metric.evaluate(&case.x);
            (lhs, F::zero(), lhs > F::zero())
        }
        Axiom::Monotonicity => {
            let y = need_y()?;
            let lhs = metric.evaluate(&case.x);
            let rhs = metric.evaluate(y);
            (lhs, rhs, lhs >= rhs - tolerance)
        }
        Axiom::TranslationInvariance => {
            let alpha = need_param()?;
            let lhs = metric.evaluate(&case.x.translated(alpha));
            let rhs = metric.evaluate(&case.x) - alpha;
            (lhs, rhs, (lhs - rhs).abs() <= tolerance)
        }
        Axiom::Subadditivity => {
            let y = need_y()?;
            let lhs = metric.evaluate(&case.x.convolve(y));
            let rhs = metric.evaluate(&case.x) + metric.evaluate(y);
            (lhs, rhs, lhs <= rhs + tolerance)
        }
        Axiom::PositiveHomogeneity => {
            let lambda = need_param()?;
            let lhs = metric.evaluate(&case.x.scaled(lambda));
            let rhs = lambda * metric.evaluate(&case.x);
            (lhs, rhs, (lhs - rhs).abs() <= tolerance)
        }
    };
    Ok(AxiomResult {
        axiom: case.axiom,
        verdict: if holds {
            AxiomVerdict::Holds
        } else {
            AxiomVerdict::Violated
        },
        witness: case.clone(),
        lhs,
        rhs,
    })
}

/// Aggregated verdict for one axiom across a suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomSummary<F> {
    pub axiom: Axiom,
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<AxiomResult<F>>,
}

/// Suite report over all five axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceSuiteReport<F> {
    pub metric: String,
    pub trials: usize,
    pub per_axiom: Vec<AxiomSummary<F>>,
}

impl<F: Scalar> CoherenceSuiteReport<F> {
    pub fn all_hold(&self) -> bool {
        self.per_axiom.iter().all(|s| s.violations == 0)
    }

    pub fn summary_for(&self, axiom: Axiom) -> &AxiomSummary<F> {
        self.per_axiom
            .iter()
            .find(|s| s.axiom == axiom)
            .expect("all five axioms present")
    }
}

const LAMBDAS: [f64; 3] = [0.5, 2.0, 10.0];

fn random_prospect<F: Scalar>(rng: &mut ChaCha8Rng) -> LossProspect<F> {
    let k = rng.gen_range(1..=4usize);
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let outcomes = raw
        .into_iter()
        .map(|p| {
            // losses on a 0.25 grid, strictly positive
            let loss = (rng.gen_range(1u32..=400) as f64) * 0.25;
            (num::<F>(p / total), num::<F>(loss))
        })
        .collect();
    LossProspect::new(outcomes).expect("generated prospect is valid")
}

/// Deterministically generate axiom cases from `seed` and run every axiom
/// `trials` times against the metric.
pub fn run_coherence_suite<F: Scalar>(
    metric: &dyn RiskMetric<F>,
    seed: u64,
    trials: usize,
    tolerance: F,
) -> Result<CoherenceSuiteReport<F>, CoherenceError> {
    if trials == 0 {
        return Err(CoherenceError::NoTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summaries: Vec<AxiomSummary<F>> = Axiom::ALL
        .iter()
        .map(|&axiom| AxiomSummary {
            axiom,
            checked: 0,
            violations: 0,
            first_violation: None,
        })
        .collect();
    for trial in 0..trials {
        let base = random_prospect::<F>(&mut rng);
        let max_loss = base
            .outcomes()
            .iter()
            .fold(F::zero(), |acc, &(_, l)| acc.max(l));
        let alpha = num::<F>(rng.gen_range(0.0..1.0)) * max_loss;
        let lambda = num::<F>(LAMBDAS[trial % LAMBDAS.len()]);
        let dominated = LossProspect::new(
            base.outcomes()
                .iter()
                .map(|&(p, l)| {
                    let cut = num::<F>((rng.gen_range(0u32..=100) as f64) * 0.01);
                    (p, l * (F::one() - cut * num(0.5)))
                })
                .collect(),
        )
        .expect("dominated prospect is valid");
        let other = random_prospect::<F>(&mut rng);

        let cases = [
            AxiomCase::relevance(base.clone())?,
            AxiomCase::monotonicity(base.clone(), dominated)?,
            AxiomCase::translation(base.clone(), alpha)?,
            AxiomCase::subadditivity(base.clone(), other),
            AxiomCase::homogeneity(base, lambda)?,
        ];
        for case in cases {
            let result = check_axiom(metric, &case, tolerance)?;
            let summary = summaries
                .iter_mut()
                .find(|s| s.axiom == result.axiom)
                .expect("summary exists");
            summary.checked += 1;
            if result.verdict == AxiomVerdict::Violated {
                summary.violations += 1;
                if summary.first_violation.is_none() {
                    summary.first_violation = Some(result);
                }
            }
        }
    }
    Ok(CoherenceSuiteReport {
        metric: metric.name().to_string(),
        trials,
        per_axiom: summaries,
    })
}

/// The combined semi-quantitative score of a scheme, exposed as a metric
/// over quantitative events.
#[derive(Debug, Clone)]
pub struct SchemeMetric<'a, F> {
    pub scheme: &'a RiskScheme<F>,
}

impl<'a, F: Scalar> SchemeMetric<'a, F> {
    pub fn new(scheme: &'a RiskScheme<F>) -> Self {
        Self { scheme }
    }

    /// The combined score (not the output category) of an event, evaluated
    /// on `[impact, annual frequency]`.
    pub fn evaluate_event(&self, event: &QuantEvent<F>) -> Result<F, SchemeError> {
        Ok(self
            .scheme
            .score_event(&[event.impact, event.frequency.annualized()])?
            .score)
    }
}

/// The combined semi-quantitative score of `scheme` on `event`.
pub fn scheme_induced_metric<F: Scalar>(
    scheme: &RiskScheme<F>,
    event: &QuantEvent<F>,
) -> Result<F, SchemeError> {
    SchemeMetric::new(scheme).evaluate_event(event)
}

/// A concrete axiom violation at event level.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeViolation<F> {
    pub axiom: Axiom,
    pub event_ids: Vec<String>,
    pub lhs: F,
    pub rhs: F,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeAxiomSummary<F> {
    pub axiom: Axiom,
    pub checked: usize,
    pub violations: usize,
    /// Cases that could not be evaluated (e.g. a scaled event leaving the
    /// scheme's bound domain).
    pub skipped: usize,
    pub first_violation: Option<SchemeViolation<F>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeCoherenceReport<F> {
    pub scheme: String,
    pub trials: usize,
    pub per_axiom: Vec<SchemeAxiomSummary<F>>,
}

impl<F: Scalar> SchemeCoherenceReport<F> {
    pub fn summary_for(&self, axiom: Axiom) -> &SchemeAxiomSummary<F> {
        self.per_axiom
            .iter()
            .find(|s| s.axiom == axiom)
            .expect("all five axioms present")
    }

    pub fn all_hold(&self) -> bool {
        self.per_axiom.iter().all(|s| s.violations == 0)
    }
}

/// Log-uniform sample across a bound scale's effective domain.
fn sample_in_domain<F: Scalar>(scale: &crate::scales::OrdinalScale<F>, rng: &mut ChaCha8Rng) -> F {
    let (lo, hi) = scale.domain().expect("bound scale");
    let hi_eff = if hi.is_finite() {
        hi
    } else {
        let top = scale.rank_range(scale.len()).expect("bound scale");
        top.lo * num(10.0)
    };
    let lo_eff = if lo > F::zero() {
        lo
    } else {
        hi_eff * num(1e-5)
    };
    let t = num::<F>(rng.gen_range(0.0..1.0));
    lo_eff * (hi_eff / lo_eff).powf(t)
}

/// Run the five coherence axioms against a scheme-induced metric on
/// quantitative events: `witnesses` are checked first (every ordered pair
/// for monotonicity, each event for the unary axioms), then `trials`
/// seeded random events drawn from the scheme's bound factor domains.
///
/// Requires a 2-factor scheme with bound ranges, factor order
/// `[impact, frequency]`.
pub fn run_scheme_coherence_suite<F: Scalar>(
    scheme: &RiskScheme<F>,
    witnesses: &[QuantEvent<F>],
    seed: u64,
    trials: usize,
    tolerance: F,
) -> Result<SchemeCoherenceReport<F>, CoherenceError> {
    if trials == 0 && witnesses.is_empty() {
        return Err(CoherenceError::NoTrials);
    }
    if scheme.factors().len() != 2 || !scheme.factors().iter().all(|f| f.is_bound()) {
        return Err(CoherenceError::MalformedCase(
            "scheme coherence needs a 2-factor scheme with bound ranges".into(),
        ));
    }
    let metric = SchemeMetric::new(scheme);
    let mut summaries: Vec<SchemeAxiomSummary<F>> = Axiom::ALL
        .iter()
        .map(|&axiom| SchemeAxiomSummary {
            axiom,
            checked: 0,
            violations: 0,
            skipped: 0,
            first_violation: None,
        })
        .collect();

    let mut record = |axiom: Axiom, violation: Option<SchemeViolation<F>>, skipped: bool| {
        let summary = summaries
            .iter_mut()
            .find(|s| s.axiom == axiom)
            .expect("summary exists");
        if skipped {
            summary.skipped += 1;
            return;
        }
        summary.checked += 1;
        if let Some(v) = violation {
            summary.violations += 1;
            if summary.first_violation.is_none() {
                summary.first_violation = Some(v);
            }
        }
    };

    let check_unary =
        |record: &mut dyn FnMut(Axiom, Option<SchemeViolation<F>>, bool),
         event: &QuantEvent<F>,
         alpha_frac: F,
         lambda: F|
         -> Result<(), CoherenceError> {
            let score = metric.evaluate_event(event)?;
            let risk = true_risk(event);

            // relevance: positive true risk must map to a positive metric
            if risk > F::zero() {
                let violation = (score <= F::zero()).then(|| SchemeViolation {
                    axiom: Axiom::Relevance,
                    event_ids: vec![event.id.clone()],
                    lhs: score,
                    rhs: F::zero(),
                    description: format!(
                        "event '{}' has positive annual loss {risk} but metric {score}",
                        event.id
                    ),
                });
                record(Axiom::Relevance, violation, false);
            }

            // translation invariance: reduce annual loss by alpha via impact
            // mitigation; the metric should drop by exactly alpha
            let annual_rate = event.frequency.annualized();
            if annual_rate > F::zero() && risk > F::zero() {
                let alpha = alpha_frac * risk;
                let mitigated = QuantEvent {
                    id: format!("{}~mitigated", event.id),
                    frequency: event.frequency,
                    impact: event.impact - alpha / annual_rate,
                };
                match metric.evaluate_event(&mitigated) {
                    Ok(mitigated_score) => {
                        let expected = score - alpha;
                        let violation = ((mitigated_score - expected).abs() > tolerance).then(|| {
                            SchemeViolation {
                                axiom: Axiom::TranslationInvariance,
                                event_ids: vec![event.id.clone()],
                                lhs: mitigated_score,
                                rhs: expected,
                                description: format!(
                                    "mitigating '{}' by {alpha} changes the metric from {score} to {mitigated_score}, not to {expected}",
                                    event.id
                                ),
                            }
                        });
                        record(Axiom::TranslationInvariance, violation, false);
                    }
                    Err(_) => record(Axiom::TranslationInvariance, None, true),
                }
            }

            // positive homogeneity: scaling the impact by lambda should
            // scale the metric by lambda
            let scaled = QuantEvent {
                id: format!("{}~x{lambda}", event.id),
                frequency: event.frequency,
                impact: event.impact * lambda,
            };
            match metric.evaluate_event(&scaled) {
                Ok(scaled_score) => {
                    let expected = lambda * score;
                    let violation = ((scaled_score - expected).abs() > tolerance).then(|| {
                        SchemeViolation {
                            axiom: Axiom::PositiveHomogeneity,
                            event_ids: vec![event.id.clone()],
                            lhs: scaled_score,
                            rhs: expected,
                            description: format!(
                                "scaling '{}' impact by {lambda} moves the metric from {score} to {scaled_score}, expected {expected}",
                                event.id
                            ),
                        }
                    });
                    record(Axiom::PositiveHomogeneity, violation, false);
                }
                Err(_) => record(Axiom::PositiveHomogeneity, None, true),
            }
            Ok(())
        };

    let check_pair = |record: &mut dyn FnMut(Axiom, Option<SchemeViolation<F>>, bool),
                          a: &QuantEvent<F>,
                          b: &QuantEvent<F>|
     -> Result<(), CoherenceError> {
        let (risk_a, risk_b) = (true_risk(a), true_risk(b));
        let (hi, lo) = if risk_a >= risk_b { (a, b) } else { (b, a) };
        let score_hi = metric.evaluate_event(hi)?;
        let score_lo = metric.evaluate_event(lo)?;
        let violation = (score_hi < score_lo - tolerance).then(|| SchemeViolation {
            axiom: Axiom::Monotonicity,
            event_ids: vec![hi.id.clone(), lo.id.clone()],
            lhs: score_hi,
            rhs: score_lo,
            description: format!(
                "'{}' carries at least the annual loss of '{}' ({} vs {}) but scores lower ({score_hi} vs {score_lo})",
                hi.id,
                lo.id,
                true_risk(hi),
                true_risk(lo),
            ),
        });
        record(Axiom::Monotonicity, violation, false);

        // subadditivity: pool the two occurrence streams into one event
        let (fa, fb) = (a.frequency.annualized(), b.frequency.annualized());
        if fa + fb > F::zero() {
            let pooled = QuantEvent {
                id: format!("{}+{}", a.id, b.id),
                frequency: Rate {
                    count: fa + fb,
                    per: crate::portfolio::Period::Year,
                },
                impact: (fa * a.impact + fb * b.impact) / (fa + fb),
            };
            match metric.evaluate_event(&pooled) {
                Ok(pooled_score) => {
                    let score_a = metric.evaluate_event(a)?;
                    let score_b = metric.evaluate_event(b)?;
                    let rhs = score_a + score_b;
                    let violation = (pooled_score > rhs + tolerance).then(|| SchemeViolation {
                        axiom: Axiom::Subadditivity,
                        event_ids: vec![a.id.clone(), b.id.clone()],
                        lhs: pooled_score,
                        rhs,
                        description: format!(
                            "pooling '{}' and '{}' scores {pooled_score}, above the sum {rhs}",
                            a.id, b.id
                        ),
                    });
                    record(Axiom::Subadditivity, violation, false);
                }
                Err(_) => record(Axiom::Subadditivity, None, true),
            }
        }
        Ok(())
    };

    // witnesses first: all ordered pairs, then per-event unary axioms
    for (i, a) in witnesses.iter().enumerate() {
        for b in witnesses.iter().skip(i + 1) {
            check_pair(&mut record, a, b)?;
        }
    }
    for (i, event) in witnesses.iter().enumerate() {
        let lambda = num::<F>(LAMBDAS[i % LAMBDAS.len()]);
        check_unary(&mut record, event, num(0.5), lambda)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let impact_scale = &scheme.factors()[0];
    let freq_scale = &scheme.factors()[1];
    for trial in 0..trials {
        let make = |rng: &mut ChaCha8Rng, tag: &str| QuantEvent {
            id: format!("gen-{trial}-{tag}"),
            frequency: Rate {
                count: sample_in_domain(freq_scale, rng),
                per: crate::portfolio::Period::Year,
            },
            impact: sample_in_domain(impact_scale, rng),
        };
        let a = make(&mut rng, "a");
        let b = make(&mut rng, "b");
        let alpha_frac = num::<F>(rng.gen_range(0.05..0.9));
        let lambda = num::<F>(LAMBDAS[trial % LAMBDAS.len()]);
        check_pair(&mut record, &a, &b)?;
        check_unary(&mut record, &a, alpha_frac, lambda)?;
    }

    Ok(SchemeCoherenceReport {
        scheme: scheme.name.clone(),
        trials,
        per_axiom: summaries,
    })
}
