//! Quantitative risk pipeline: per-event frequency/impact distributions,
//! Monte-Carlo simulation of annual total loss, loss exceedance curves, and
//! comparison against a risk appetite.
//!
//! Reproducibility contract: trial `t` draws from an independent ChaCha
//! substream derived from `(seed, t)`, so the sorted sample vector is
//! bitwise identical for a fixed `(models, trials, seed)` no matter how
//! many workers execute the trials.

use rand::distributions::{Distribution, Standard};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{LogNormal, Poisson, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use crate::scalar::{num, Scalar};

/// z-value of the 90% central interval of the standard normal; used to
/// back out lognormal parameters from a subjective 90% credible range.
const Z90: f64 = 1.645;

/// Raw samples are kept up to this many trials; larger runs are compressed
/// to an equi-probable summary.
const MAX_RAW_SAMPLES: usize = 10_000_000;
const SUMMARY_POINTS: usize = 10_000;

/// Loss-per-occurrence distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec<F> {
    Point(F),
    Uniform { lo: F, hi: F },
    /// Lognormal parameterized by a 90% credible interval `[lo, hi]`:
    /// log-mean `(ln lo + ln hi) / 2`, log-sd `(ln hi - ln lo) / (2 * 1.645)`.
    LognormalCi90 { lo: F, hi: F },
    Discrete(Vec<(F, F)>),
}

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("distribution is invalid: {0}")]
    BadDistribution(String),
    #[error("frequency model is invalid: {0}")]
    BadFrequency(String),
    #[error("simulation needs at least one trial")]
    NoTrials,
    #[error("loss exceedance curve is empty")]
    EmptyCurve,
    #[error("percentile must lie strictly between 0 and 1 (got {0})")]
    BadPercentile(String),
    #[error("risk appetite is invalid: {0}")]
    BadAppetite(String),
    #[error("lognormal-ci90 has no exact closed form here; approximate mean is {approx}")]
    LognormalNotExact { approx: String },
}

impl<F: Scalar> DistributionSpec<F> {
    pub fn validate(&self) -> Result<(), EngineError> {
        match self {
            DistributionSpec::Point(v) => {
                if !v.is_finite() || *v < F::zero() {
                    return Err(EngineError::BadDistribution(format!(
                        "point value must be finite and non-negative (got {v})"
                    )));
                }
            }
            DistributionSpec::Uniform { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() || !(lo < hi) || *lo < F::zero() {
                    return Err(EngineError::BadDistribution(format!(
                        "uniform needs 0 <= lo < hi (got {lo}, {hi})"
                    )));
                }
            }
            DistributionSpec::LognormalCi90 { lo, hi } => {
                if !(F::zero() < *lo) || !(lo < hi) || !hi.is_finite() {
                    return Err(EngineError::BadDistribution(format!(
                        "lognormal-ci90 needs 0 < lo < hi (got {lo}, {hi})"
                    )));
                }
            }
            DistributionSpec::Discrete(outcomes) => {
                if outcomes.is_empty() {
                    return Err(EngineError::BadDistribution(
                        "discrete distribution needs outcomes".into(),
                    ));
                }
                let mut sum = F::zero();
                for &(p, v) in outcomes {
                    if !p.is_finite() || p < F::zero() || p > F::one() {
                        return Err(EngineError::BadDistribution(format!(
                            "discrete probability out of range (got {p})"
                        )));
                    }
                    if !v.is_finite() {
                        return Err(EngineError::BadDistribution(format!(
                            "discrete value must be finite (got {v})"
                        )));
                    }
                    sum += p;
                }
                if (sum - F::one()).abs() > num(1e-9) {
                    return Err(EngineError::BadDistribution(format!(
                        "discrete probabilities must sum to 1 (got {sum})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Mean loss per occurrence. Exact for point/uniform/discrete; the
    /// lognormal mean `exp(mu + sigma^2 / 2)` is flagged approximate because
    /// it inherits the subjective interval encoding.
    pub fn approx_mean(&self) -> F {
        match self {
            DistributionSpec::Point(v) => *v,
            DistributionSpec::Uniform { lo, hi } => (*lo + *hi) / num(2.0),
            DistributionSpec::LognormalCi90 { lo, hi } => {
                let (mu, sigma) = lognormal_params(*lo, *hi);
                (mu + sigma * sigma / num(2.0)).exp()
            }
            DistributionSpec::Discrete(outcomes) => outcomes
                .iter()
                .fold(F::zero(), |acc, &(p, v)| acc + p * v),
        }
    }

    fn exact_mean(&self) -> Result<F, EngineError> {
        match self {
            DistributionSpec::LognormalCi90 { .. } => Err(EngineError::LognormalNotExact {
                approx: format!("{}", self.approx_mean()),
            }),
            other => Ok(other.approx_mean()),
        }
    }
}

fn lognormal_params<F: Scalar>(lo: F, hi: F) -> (F, F) {
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    ((ln_lo + ln_hi) / num(2.0), (ln_hi - ln_lo) / num(2.0 * Z90))
}

impl<F> DistributionSpec<F>
where
    F: Scalar,
    Standard: Distribution<F>,
    StandardNormal: Distribution<F>,
{
    /// One loss draw. Point impacts consume no randomness.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> F {
        match self {
            DistributionSpec::Point(v) => *v,
            DistributionSpec::Uniform { lo, hi } => {
                let u: F = rng.gen();
                *lo + u * (*hi - *lo)
            }
            DistributionSpec::LognormalCi90 { lo, hi } => {
                let (mu, sigma) = lognormal_params(*lo, *hi);
                LogNormal::new(mu, sigma)
                    .expect("validated parameters")
                    .sample(rng)
            }
            DistributionSpec::Discrete(outcomes) => {
                let u: F = rng.gen();
                let mut acc = F::zero();
                for &(p, v) in outcomes {
                    acc += p;
                    if u < acc {
                        return v;
                    }
                }
                outcomes.last().expect("nonempty").1
            }
        }
    }
}

/// Annual occurrence-count model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrequencyModel<F> {
    /// Occurrences per year follow a Poisson law with this rate.
    Poisson { rate: F },
    /// At most one occurrence per year, with this probability.
    Bernoulli { prob: F },
}

impl<F: Scalar> FrequencyModel<F> {
    pub fn validate(&self) -> Result<(), EngineError> {
        match self {
            FrequencyModel::Poisson { rate } => {
                if !rate.is_finite() || *rate < F::zero() {
                    return Err(EngineError::BadFrequency(format!(
                        "poisson rate must be finite and non-negative (got {rate})"
                    )));
                }
            }
            FrequencyModel::Bernoulli { prob } => {
                if !prob.is_finite() || *prob < F::zero() || *prob > F::one() {
                    return Err(EngineError::BadFrequency(format!(
                        "bernoulli probability must lie in [0, 1] (got {prob})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> F {
        match self {
            FrequencyModel::Poisson { rate } => *rate,
            FrequencyModel::Bernoulli { prob } => *prob,
        }
    }
}

impl<F> FrequencyModel<F>
where
    F: Scalar,
    Standard: Distribution<F>,
{
    fn sample_count<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            FrequencyModel::Poisson { rate } => {
                if *rate == F::zero() {
                    0
                } else {
                    let draws: F = Poisson::new(*rate).expect("validated rate").sample(rng);
                    draws.to_u64().unwrap_or(u64::MAX)
                }
            }
            FrequencyModel::Bernoulli { prob } => {
                if *prob == F::zero() {
                    return 0;
                }
                let u: F = rng.gen();
                u64::from(u < *prob)
            }
        }
    }
}

/// One modeled risk: how often it occurs and how much each occurrence costs.
#[derive(Debug, Clone, PartialEq)]
pub struct EventModel<F> {
    pub id: String,
    pub frequency: FrequencyModel<F>,
    pub impact: DistributionSpec<F>,
}

impl<F: Scalar> EventModel<F> {
    pub fn new(
        id: impl Into<String>,
        frequency: FrequencyModel<F>,
        impact: DistributionSpec<F>,
    ) -> Result<Self, EngineError> {
        frequency.validate()?;
        impact.validate()?;
        Ok(Self {
            id: id.into(),
            frequency,
            impact,
        })
    }
}

impl<F> EventModel<F>
where
    F: Scalar,
    Standard: Distribution<F>,
    StandardNormal: Distribution<F>,
{
    /// Draw one simulated year: occurrence count, then that many impact
    /// draws summed. Zero occurrences cost zero.
    pub fn sample_annual_loss<R: Rng + ?Sized>(&self, rng: &mut R) -> F {
        let count = self.frequency.sample_count(rng);
        let mut total = F::zero();
        for _ in 0..count {
            total += self.impact.sample(rng);
        }
        total
    }
}

/// Expected annual loss in closed form: mean occurrence count times mean
/// impact. Lognormal impacts are rejected here (only an approximate mean
/// exists; see [`DistributionSpec::approx_mean`]).
pub fn closed_form_eal<F: Scalar>(model: &EventModel<F>) -> Result<F, EngineError> {
    Ok(model.frequency.mean() * model.impact.exact_mean()?)
}

/// Sorted simulated annual total losses.
#[derive(Debug, Clone, PartialEq)]
pub struct LossExceedanceCurve<F> {
    samples: Vec<F>,
    trials: usize,
    summarized: bool,
}

impl<F: Scalar> LossExceedanceCurve<F> {
    /// Ascending samples; one per trial unless the curve was summarized.
    pub fn samples(&self) -> &[F] {
        &self.samples
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn is_summarized(&self) -> bool {
        self.summarized
    }

    pub fn mean(&self) -> F {
        let n = num::<F>(self.samples.len() as f64);
        self.samples.iter().copied().sum::<F>() / n
    }

    /// Render the curve as CSV: header plus one row per distinct sample
    /// value with its strict exceedance probability.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("loss,exceedance_probability\n");
        let mut i = 0;
        while i < self.samples.len() {
            let value = self.samples[i];
            while i < self.samples.len() && self.samples[i] == value {
                i += 1;
            }
            out.push_str(&format!("{},{}\n", value, exceedance(self, value)));
        }
        out
    }
}

/// Simulate `trials` years of total loss across all models.
pub fn simulate<F>(
    models: &[EventModel<F>],
    trials: usize,
    seed: u64,
) -> Result<LossExceedanceCurve<F>, EngineError>
where
    F: Scalar,
    Standard: Distribution<F>,
    StandardNormal: Distribution<F>,
{
    if trials == 0 {
        return Err(EngineError::NoTrials);
    }
    for model in models {
        model.frequency.validate()?;
        model.impact.validate()?;
    }
    let mut samples: Vec<F> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64 + 1);
            models
                .iter()
                .map(|m| m.sample_annual_loss(&mut rng))
                .fold(F::zero(), |acc, loss| acc + loss)
        })
        .collect();
    samples.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite losses"));
    let summarized = samples.len() > MAX_RAW_SAMPLES;
    if summarized {
        let n = samples.len() as f64;
        samples = (0..SUMMARY_POINTS)
            .map(|k| samples[(((k as f64 + 0.5) / SUMMARY_POINTS as f64) * n) as usize])
            .collect();
    }
    Ok(LossExceedanceCurve {
        samples,
        trials,
        summarized,
    })
}

/// Fraction of simulated years with total loss strictly above `threshold`.
pub fn exceedance<F: Scalar>(curve: &LossExceedanceCurve<F>, threshold: F) -> F {
    let below_or_equal = curve.samples.partition_point(|&s| s <= threshold);
    num::<F>((curve.samples.len() - below_or_equal) as f64)
        / num::<F>(curve.samples.len() as f64)
}

/// Order statistic at `ceil(percentile * n)` (lower-neighbor convention).
pub fn percentile_loss<F: Scalar>(
    curve: &LossExceedanceCurve<F>,
    percentile: F,
) -> Result<F, EngineError> {
    if curve.samples.is_empty() {
        return Err(EngineError::EmptyCurve);
    }
    if !(percentile > F::zero() && percentile < F::one()) {
        return Err(EngineError::BadPercentile(percentile.to_string()));
    }
    let n = curve.samples.len();
    let rank = (percentile * num(n as f64))
        .ceil()
        .to_usize()
        .unwrap_or(n)
        .clamp(1, n);
    Ok(curve.samples[rank - 1])
}

/// Tolerance curve: per loss threshold, the maximum tolerable probability
/// of exceeding it.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskAppetite<F> {
    points: Vec<(F, F)>,
}

impl<F: Scalar> RiskAppetite<F> {
    pub fn new(points: Vec<(F, F)>) -> Result<Self, EngineError> {
        if points.is_empty() {
            return Err(EngineError::BadAppetite("needs at least one point".into()));
        }
        for w in points.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(EngineError::BadAppetite(
                    "loss thresholds must be strictly increasing".into(),
                ));
            }
            if w[1].1 > w[0].1 {
                return Err(EngineError::BadAppetite(
                    "tolerable probabilities must be non-increasing".into(),
                ));
            }
        }
        for &(threshold, prob) in &points {
            if !threshold.is_finite() || !prob.is_finite() || prob < F::zero() || prob > F::one() {
                return Err(EngineError::BadAppetite(format!(
                    "point ({threshold}, {prob}) out of range"
                )));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(F, F)] {
        &self.points
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppetitePoint<F> {
    pub threshold: F,
    pub max_probability: F,
    pub exceedance: F,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppetiteVerdict<F> {
    pub points: Vec<AppetitePoint<F>>,
    pub tolerable: bool,
}

/// Check the simulated curve against every appetite point: a point is
/// violated when the simulated exceedance probability is above the
/// tolerable maximum.
pub fn compare_appetite<F: Scalar>(
    curve: &LossExceedanceCurve<F>,
    appetite: &RiskAppetite<F>,
) -> AppetiteVerdict<F> {
    let points: Vec<AppetitePoint<F>> = appetite
        .points
        .iter()
        .map(|&(threshold, max_probability)| {
            let exceedance = exceedance(curve, threshold);
            AppetitePoint {
                threshold,
                max_probability,
                exceedance,
                violated: exceedance > max_probability,
            }
        })
        .collect();
    let tolerable = points.iter().all(|p| !p.violated);
    AppetiteVerdict { points, tolerable }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn point_model(rate: f64, value: f64) -> EventModel<f64> {
        EventModel::new(
            format!("poisson-{rate}-point-{value}"),
            FrequencyModel::Poisson { rate },
            DistributionSpec::Point(value),
        )
        .unwrap()
    }

    #[test]
    fn zero_rate_never_loses() {
        let curve = simulate(&[point_model(0.0, 100.0)], 500, 1).unwrap();
        assert!(curve.samples().iter().all(|&s| s == 0.0));
        assert_eq!(exceedance(&curve, 0.0), 0.0);
    }

    #[test]
    fn certain_bernoulli_always_loses_the_point_value() {
        let model = EventModel::new(
            "certain",
            FrequencyModel::Bernoulli { prob: 1.0 },
            DistributionSpec::Point(100.0),
        )
        .unwrap();
        let curve = simulate(&[model], 200, 3).unwrap();
        assert!(curve.samples().iter().all(|&s| s == 100.0));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_eal(&point_model(1.0, 100.0)).unwrap(), 100.0);
        let bern = EventModel::new(
            "b",
            FrequencyModel::Bernoulli { prob: 0.1 },
            DistributionSpec::Point(100.0),
        )
        .unwrap();
        assert_relative_eq!(closed_form_eal(&bern).unwrap(), 10.0);
        let unif = EventModel::new(
            "u",
            FrequencyModel::Poisson { rate: 2.0 },
            DistributionSpec::Uniform { lo: 0.0, hi: 10.0 },
        )
        .unwrap();
        assert_relative_eq!(closed_form_eal(&unif).unwrap(), 10.0);
        let lognormal = EventModel::new(
            "l",
            FrequencyModel::Poisson { rate: 1.0 },
            DistributionSpec::LognormalCi90 { lo: 1.0, hi: 10.0 },
        )
        .unwrap();
        assert!(matches!(
            closed_form_eal(&lognormal),
            Err(EngineError::LognormalNotExact { .. })
        ));
    }

    #[test]
    fn lognormal_params_from_ci90() {
        let (mu, sigma) = lognormal_params(1.0f64, 10.0);
        assert_relative_eq!(mu, (10.0f64.ln()) / 2.0);
        assert_relative_eq!(sigma, 10.0f64.ln() / (2.0 * 1.645));
    }

    #[test]
    fn same_seed_is_identical() {
        let models = [point_model(1.0, 100.0)];
        let a = simulate(&models, 2_000, 42).unwrap();
        let b = simulate(&models, 2_000, 42).unwrap();
        assert_eq!(a, b);
        let c = simulate(&models, 2_000, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn exceedance_and_percentile_conventions() {
        let curve = LossExceedanceCurve {
            samples: vec![10.0, 20.0, 30.0, 40.0],
            trials: 4,
            summarized: false,
        };
        assert_eq!(percentile_loss(&curve, 0.5).unwrap(), 20.0);
        assert_eq!(percentile_loss(&curve, 0.999).unwrap(), 40.0);
        assert!(percentile_loss(&curve, 1.5).is_err());
        assert_eq!(exceedance(&curve, 40.0), 0.0); // strict
        assert_relative_eq!(exceedance(&curve, 10.0), 0.75);
        assert_relative_eq!(exceedance(&curve, 5.0), 1.0);
    }

    #[test]
    fn poisson_exceedance_of_zero_matches_closed_form() {
        let curve = simulate(&[point_model(1.0, 100.0)], 100_000, 7).unwrap();
        let p_any = exceedance(&curve, 0.0);
        assert_relative_eq!(p_any, 1.0 - (-1.0f64).exp(), epsilon = 6e-3);
        assert_relative_eq!(curve.mean(), 100.0, max_relative = 0.02);
    }

    #[test]
    fn appetite_verdict_example() {
        let curve = simulate(&[point_model(1.0, 200.0)], 100_000, 11).unwrap();
        let appetite = RiskAppetite::new(vec![(100.0, 0.5), (1000.0, 0.1)]).unwrap();
        let verdict = compare_appetite(&curve, &appetite);
        assert!(verdict.points[0].violated); // ~0.632 > 0.5
        assert!(!verdict.points[1].violated);
        assert!(!verdict.tolerable);

        let zero = simulate(&[point_model(0.0, 1.0)], 100, 1).unwrap();
        assert!(compare_appetite(&zero, &appetite).tolerable);
    }

    #[test]
    fn appetite_validation() {
        assert!(RiskAppetite::<f64>::new(vec![]).is_err());
        assert!(RiskAppetite::new(vec![(1.0, 0.5), (1.0, 0.4)]).is_err());
        assert!(RiskAppetite::new(vec![(1.0, 0.4), (2.0, 0.5)]).is_err());
        assert!(RiskAppetite::new(vec![(1.0, 0.5), (2.0, 0.4)]).is_ok());
    }

    #[test]
    fn scaling_impacts_by_two_scales_samples_exactly() {
        let base = [point_model(1.3, 37.5)];
        let doubled = [point_model(1.3, 75.0)];
        let a = simulate(&base, 5_000, 99).unwrap();
        let b = simulate(&doubled, 5_000, 99).unwrap();
        for (&x, &y) in a.samples().iter().zip(b.samples()) {
            assert_eq!(2.0 * x, y);
        }
    }

    #[test]
    fn csv_has_header_and_distinct_rows() {
        let curve = LossExceedanceCurve {
            samples: vec![0.0, 0.0, 100.0, 100.0, 200.0],
            trials: 5,
            summarized: false,
        };
        let csv = curve.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "loss,exceedance_probability");
        assert_eq!(lines.len(), 4); // header + 3 distinct values
        assert_eq!(lines[1], "0,0.6");
        assert_eq!(lines[3], "200,0");
    }

    #[test]
    fn validation_rejects_bad_specs() {
        assert!(DistributionSpec::Uniform { lo: 5.0, hi: 1.0 }.validate().is_err());
        assert!(DistributionSpec::LognormalCi90 { lo: 0.0, hi: 1.0 }
            .validate()
            .is_err());
        assert!(DistributionSpec::Discrete(vec![(0.5, 1.0)]).validate().is_err());
        assert!(FrequencyModel::Poisson { rate: -1.0 }.validate().is_err());
        assert!(FrequencyModel::Bernoulli { prob: 1.5 }.validate().is_err());
        assert!(simulate(&[point_model(1.0, 1.0)], 0, 0).is_err());
    }
}
