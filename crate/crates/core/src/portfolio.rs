//! Compares ordinal scheme outputs against ground-truth quantitative risk on
//! event portfolios: risk inversions, rank correlation, range compression,
//! tie groups, and adversarially correlated portfolios.
//!
//! Ground truth is expected annual loss: occurrence rate (per year) times
//! impact magnitude (loss per occurrence). Time normalization: a year is 52
//! weeks or 365 days or 12 months; hourly rates annualize via 24*7*52.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scalar::{num, Scalar};
use crate::scheme::{CombinationRule, RiskModel, RiskScheme, SchemeError, ScoreResult};

/// Time base of an occurrence rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Period {
    Hour,
    Day,
    Week,
    Month,
    #[default]
    Year,
}

impl Period {
    /// Number of periods in a year under the toolkit's normalization.
    pub fn per_year<F: Scalar>(&self) -> F {
        num(match self {
            Period::Hour => 24.0 * 7.0 * 52.0,
            Period::Day => 365.0,
            Period::Week => 52.0,
            Period::Month => 12.0,
            Period::Year => 1.0,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Period::Hour => "hour",
            Period::Day => "day",
            Period::Week => "week",
            Period::Month => "month",
            Period::Year => "year",
        }
    }
}

/// An occurrence rate: `count` events per `per`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rate<F> {
    pub count: F,
    pub per: Period,
}

impl<F: Scalar> Rate<F> {
    pub fn new(count: F, per: Period) -> Result<Self, PortfolioError> {
        if !(count >= F::zero()) || !count.is_finite() {
            return Err(PortfolioError::NegativeFrequency {
                value: count.to_string(),
            });
        }
        Ok(Self { count, per })
    }

    pub fn per_year(count: F) -> Result<Self, PortfolioError> {
        Self::new(count, Period::Year)
    }

    /// Events per year.
    pub fn annualized(&self) -> F {
        self.count * self.per.per_year()
    }
}

/// A ground-truth quantitative risk event.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantEvent<F> {
    pub id: String,
    pub frequency: Rate<F>,
    /// Loss magnitude per occurrence, in the portfolio's common unit.
    pub impact: F,
}

#[derive(Debug, Error, PartialEq)]
pub enum PortfolioError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("frequency must be a finite non-negative rate (got {value})")]
    NegativeFrequency { value: String },
    #[error("impact must be finite and non-negative (got {value})")]
    NegativeImpact { value: String },
    #[error("duplicate event id '{id}'")]
    DuplicateId { id: String },
    #[error("need at least {required} events (got {got})")]
    TooFewEvents { required: usize, got: usize },
    #[error("adversarial construction needs {0}")]
    UnsupportedShape(String),
    #[error("adversarial construction failed verification: {0}")]
    ConstructionFailed(String),
}

impl<F: Scalar> QuantEvent<F> {
    pub fn new(id: impl Into<String>, frequency: Rate<F>, impact: F) -> Result<Self, PortfolioError> {
        if !(impact >= F::zero()) || !impact.is_finite() {
            return Err(PortfolioError::NegativeImpact {
                value: impact.to_string(),
            });
        }
        Ok(Self {
            id: id.into(),
            frequency,
            impact,
        })
    }
}

/// Events sharing a common impact unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Portfolio<F> {
    pub unit: String,
    events: Vec<QuantEvent<F>>,
}

impl<F: Scalar> Portfolio<F> {
    pub fn new(unit: impl Into<String>, events: Vec<QuantEvent<F>>) -> Result<Self, PortfolioError> {
        let mut seen = std::collections::BTreeSet::new();
        for event in &events {
            if !seen.insert(event.id.as_str()) {
                return Err(PortfolioError::DuplicateId {
                    id: event.id.clone(),
                });
            }
        }
        Ok(Self {
            unit: unit.into(),
            events,
        })
    }

    pub fn events(&self) -> &[QuantEvent<F>] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// Expected annual loss of an event: annualized rate times impact.
pub fn true_risk<F: Scalar>(event: &QuantEvent<F>) -> F {
    event.frequency.annualized() * event.impact
}

/// Score an event under a model: inputs are `[impact, annual frequency]`.
pub fn score_event<F: Scalar>(
    model: &RiskModel<F>,
    event: &QuantEvent<F>,
) -> Result<ScoreResult<F>, SchemeError> {
    model.score_values(&[event.impact, event.frequency.annualized()])
}

/// A pair of events whose true-risk and score orderings strictly oppose.
#[derive(Debug, Clone, PartialEq)]
pub struct InversionPair<F> {
    pub id_a: String,
    pub id_b: String,
    pub true_risk_a: F,
    pub true_risk_b: F,
    pub score_a: F,
    pub score_b: F,
}

/// All unordered event pairs with strictly opposite orderings of true risk
/// and combined score, sorted by `(id_a, id_b)`.
pub fn detect_inversions<F: Scalar>(
    portfolio: &Portfolio<F>,
    model: &RiskModel<F>,
) -> Result<Vec<InversionPair<F>>, PortfolioError> {
    let mut scored: Vec<(&QuantEvent<F>, F, F)> = portfolio
        .events()
        .iter()
        .map(|e| score_event(model, e).map(|s| (e, true_risk(e), s.score)))
        .collect::<Result<_, _>>()?;
    scored.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    let mut inversions = Vec::new();
    for i in 0..scored.len() {
        for j in (i + 1)..scored.len() {
            let (ea, risk_a, score_a) = (&scored[i].0, scored[i].1, scored[i].2);
            let (eb, risk_b, score_b) = (&scored[j].0, scored[j].1, scored[j].2);
            let opposite = (risk_a > risk_b && score_a < score_b)
                || (risk_a < risk_b && score_a > score_b);
            if opposite {
                inversions.push(InversionPair {
                    id_a: ea.id.clone(),
                    id_b: eb.id.clone(),
                    true_risk_a: risk_a,
                    true_risk_b: risk_b,
                    score_a,
                    score_b,
                });
            }
        }
    }
    Ok(inversions)
}

/// Tie-corrected Kendall rank correlation between score order and true-risk
/// order, with the pair counts behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct KendallTau<F> {
    /// `None` when either ranking is all ties (tau-b undefined).
    pub tau: Option<F>,
    pub concordant: u64,
    pub discordant: u64,
    /// Pairs tied in true risk (including pairs tied in both).
    pub tied_risk: u64,
    /// Pairs tied in score (including pairs tied in both).
    pub tied_score: u64,
    pub total_pairs: u64,
}

/// Kendall tau-b between the score ranking and the true-risk ranking:
/// `(C - D) / sqrt((n0 - n1)(n0 - n2))` with tie corrections `n1`, `n2`.
pub fn kendall_tau<F: Scalar>(
    portfolio: &Portfolio<F>,
    model: &RiskModel<F>,
) -> Result<KendallTau<F>, PortfolioError> {
    if portfolio.len() < 2 {
        return Err(PortfolioError::TooFewEvents {
            required: 2,
            got: portfolio.len(),
        });
    }
    let scored: Vec<(F, F)> = portfolio
        .events()
        .iter()
        .map(|e| score_event(model, e).map(|s| (true_risk(e), s.score)))
        .collect::<Result<_, _>>()?;
    let n = scored.len() as u64;
    let n0 = n * (n - 1) / 2;
    let (mut c, mut d, mut tied_risk, mut tied_score) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..scored.len() {
        for j in (i + 1)..scored.len() {
            let (risk_i, score_i) = scored[i];
            let (risk_j, score_j) = scored[j];
            let risk_tie = risk_i == risk_j;
            let score_tie = score_i == score_j;
            if risk_tie {
                tied_risk += 1;
            }
            if score_tie {
                tied_score += 1;
            }
            if !risk_tie && !score_tie {
                let agree = (risk_i < risk_j) == (score_i < score_j);
                if agree {
                    c += 1;
                } else {
                    d += 1;
                }
            }
        }
    }
    let denom_risk = n0 - tie_correction(&scored, |p| p.0);
    let denom_score = n0 - tie_correction(&scored, |p| p.1);
    let tau = if denom_risk == 0 || denom_score == 0 {
        None
    } else {
        let num_cd = num::<F>(c as f64) - num::<F>(d as f64);
        Some(num_cd / (num::<F>(denom_risk as f64) * num::<F>(denom_score as f64)).sqrt())
    };
    Ok(KendallTau {
        tau,
        concordant: c,
        discordant: d,
        tied_risk,
        tied_score,
        total_pairs: n0,
    })
}

/// Sum over tie groups of `t * (t - 1) / 2` for one coordinate.
fn tie_correction<F: Scalar>(pairs: &[(F, F)], key: impl Fn(&(F, F)) -> F) -> u64 {
    let mut values: Vec<F> = pairs.iter().map(&key).collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let mut total = 0u64;
    let mut run = 1u64;
    for w in values.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Events collapsed into one output group, with the true-risk spread lost.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressionGroup<F> {
    /// Category label when the model yields categories, otherwise the score.
    pub key: String,
    pub ids: Vec<String>,
    pub min_risk: F,
    pub max_risk: F,
    /// `max_risk / min_risk`; `None` means infinite (zero minimum).
    pub ratio: Option<F>,
}

/// Per-group compression ratios plus the group pairs whose true-risk ranges
/// overlap despite landing in different output groups.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressionReport<F> {
    pub groups: Vec<CompressionGroup<F>>,
    pub overlapping: Vec<(String, String)>,
}

/// Group events by output category (or by score when the model has no
/// category mapping) and report the true-risk spread per group.
pub fn range_compression<F: Scalar>(
    portfolio: &Portfolio<F>,
    model: &RiskModel<F>,
) -> Result<CompressionReport<F>, PortfolioError> {
    let mut keyed: Vec<(String, F, F, String)> = Vec::new(); // key, sort score, risk, id
    for event in portfolio.events() {
        let result = score_event(model, event)?;
        let key = match &result.category {
            Some(cat) => cat.label.clone(),
            None => format!("score {}", result.score),
        };
        keyed.push((key, result.score, true_risk(event), event.id.clone()));
    }
    keyed.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .expect("finite scores")
            .then_with(|| a.3.cmp(&b.3))
    });
    let mut groups: Vec<CompressionGroup<F>> = Vec::new();
    for (key, _, risk, id) in keyed {
        match groups.last_mut() {
            Some(group) if group.key == key => {
                group.ids.push(id);
                group.min_risk = group.min_risk.min(risk);
                group.max_risk = group.max_risk.max(risk);
            }
            _ => groups.push(CompressionGroup {
                key,
                ids: vec![id],
                min_risk: risk,
                max_risk: risk,
                ratio: None,
            }),
        }
    }
    for group in &mut groups {
        group.ratio = if group.min_risk > F::zero() {
            Some(group.max_risk / group.min_risk)
        } else {
            None
        };
    }
    let mut overlapping = Vec::new();
    for i in 0..groups.len() {
        for j in (i + 1)..groups.len() {
            if groups[i].min_risk <= groups[j].max_risk && groups[j].min_risk <= groups[i].max_risk
            {
                overlapping.push((groups[i].key.clone(), groups[j].key.clone()));
            }
        }
    }
    Ok(CompressionReport {
        groups,
        overlapping,
    })
}

/// Two or more events with identical combined scores.
#[derive(Debug, Clone, PartialEq)]
pub struct TieGroup<F> {
    pub score: F,
    pub ids: Vec<String>,
    pub min_risk: F,
    pub max_risk: F,
    /// True-risk spread `max / min` inside the tie; `None` means infinite.
    pub spread: Option<F>,
}

/// Groups of events that can no longer be prioritized because their scores
/// tie, annotated with the true-risk spread hidden inside each group.
pub fn detect_ties<F: Scalar>(
    portfolio: &Portfolio<F>,
    model: &RiskModel<F>,
) -> Result<Vec<TieGroup<F>>, PortfolioError> {
    let mut scored: Vec<(F, F, String)> = Vec::new();
    for event in portfolio.events() {
        let result = score_event(model, event)?;
        scored.push((result.score, true_risk(event), event.id.clone()));
    }
    scored.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite scores")
            .then_with(|| a.2.cmp(&b.2))
    });
    let mut groups: Vec<TieGroup<F>> = Vec::new();
    for (score, risk, id) in scored {
        match groups.last_mut() {
            Some(group) if group.score == score => {
                group.ids.push(id);
                group.min_risk = group.min_risk.min(risk);
                group.max_risk = group.max_risk.max(risk);
            }
            _ => groups.push(TieGroup {
                score,
                ids: vec![id],
                min_risk: risk,
                max_risk: risk,
                spread: None,
            }),
        }
    }
    groups.retain(|g| g.ids.len() >= 2);
    for group in &mut groups {
        group.spread = if group.min_risk > F::zero() {
            Some(group.max_risk / group.min_risk)
        } else {
            None
        };
    }
    Ok(groups)
}

/// Everything `compare` reports in one bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport<F> {
    pub kendall: KendallTau<F>,
    pub inversions: Vec<InversionPair<F>>,
    pub compression: CompressionReport<F>,
    pub ties: Vec<TieGroup<F>>,
}

pub fn analyze<F: Scalar>(
    portfolio: &Portfolio<F>,
    model: &RiskModel<F>,
) -> Result<AnalysisReport<F>, PortfolioError> {
    Ok(AnalysisReport {
        kendall: kendall_tau(portfolio, model)?,
        inversions: detect_inversions(portfolio, model)?,
        compression: range_compression(portfolio, model)?,
        ties: detect_ties(portfolio, model)?,
    })
}

/// Largest in-range value of a bound level: the finite top, or ten times the
/// lower bound when the level is unbounded.
fn hi_anchor<F: Scalar>(range: &crate::scales::QuantRange<F>) -> F {
    if range.hi.is_finite() {
        range.hi
    } else {
        range.lo * num(10.0)
    }
}

/// Deterministically build a portfolio whose impact and frequency are
/// negatively correlated across rank cells: true risk strictly increases
/// event by event while the additive reading of the scheme's score never
/// increases (and strictly decreases at least once for sizes >= 3), so the
/// rank correlation against additive scoring is never positive.
///
/// A size-2 portfolio reproduces the car/plane pattern structurally (lowest
/// impact rank + highest frequency rank, then the reverse); its additive
/// scores tie, which leaves tau undefined, so the tau guarantee applies
/// from size 3 up.
pub fn adversarial_portfolio<F: Scalar>(
    scheme: &RiskScheme<F>,
    size: usize,
    seed: u64,
) -> Result<Portfolio<F>, PortfolioError> {
    if size < 2 {
        return Err(PortfolioError::TooFewEvents {
            required: 2,
            got: size,
        });
    }
    if scheme.factors().len() != 2 {
        return Err(PortfolioError::UnsupportedShape(
            "a 2-factor scheme (impact, frequency)".to_string(),
        ));
    }
    let impact_scale = &scheme.factors()[0];
    let freq_scale = &scheme.factors()[1];
    if !impact_scale.is_bound() || !freq_scale.is_bound() {
        return Err(PortfolioError::UnsupportedShape(
            "quantitative range bindings on both factors".to_string(),
        ));
    }
    let ki = impact_scale.len();
    let kf = freq_scale.len();
    if ki < 2 || kf < 2 {
        return Err(PortfolioError::UnsupportedShape(
            "at least two ranks per factor".to_string(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter: F = num(10f64.powf(-0.2 * rng.gen::<f64>()));

    let impact_range = |rank: usize| impact_scale.rank_range(rank).expect("bound scale");
    let freq_range = |rank: usize| freq_scale.rank_range(rank).expect("bound scale");

    let mut events: Vec<QuantEvent<F>> = Vec::with_capacity(size);
    let push = |events: &mut Vec<QuantEvent<F>>, impact: F, freq: F| {
        let id = format!("adv-{:03}", events.len());
        events.push(QuantEvent {
            id,
            frequency: Rate {
                count: freq,
                per: Period::Year,
            },
            impact,
        });
    };

    if size == 2 {
        push(
            &mut events,
            hi_anchor(&impact_range(1)) * jitter,
            hi_anchor(&freq_range(kf)),
        );
        push(
            &mut events,
            hi_anchor(&impact_range(ki)),
            hi_anchor(&freq_range(1)),
        );
    } else {
        let steps = size - 1;
        let moves = (kf - 1).min(steps);
        let a_moves = (ki - 1).min(moves - 1);
        let b_moves = moves - a_moves; // >= 1
        let climbs = steps - moves;

        // start low inside the first impact cell with room for every climb
        // and impact-preserving frequency drop
        let climb_factor: F = num(1.5);
        let b_factor: F = num(12.0);
        let first = impact_range(1);
        let top = hi_anchor(&first);
        let mut impact =
            top / (b_factor.powi(b_moves as i32) * climb_factor.powi(climbs as i32)) * jitter;
        if impact <= first.lo {
            impact = first.lo + (top - first.lo) * num(1e-6);
        }
        let mut ri = 1usize;
        let mut rf = kf;
        push(&mut events, impact, hi_anchor(&freq_range(rf)));
        for step in 0..steps {
            if step < climbs {
                impact = impact * climb_factor;
            } else if step < climbs + b_moves {
                rf -= 1;
                impact = impact * b_factor;
            } else {
                rf -= 1;
                ri += 1;
                impact = hi_anchor(&impact_range(ri));
            }
            push(&mut events, impact, hi_anchor(&freq_range(rf)));
        }
    }

    // verify the construction end to end against this scheme
    let additive = scheme.with_rule(CombinationRule::Additive).map_err(|e| {
        PortfolioError::ConstructionFailed(format!("additive reading rejected: {e}"))
    })?;
    let mut prev_risk = F::neg_infinity();
    let mut prev_score = F::infinity();
    let mut strict_drop = false;
    for event in &events {
        let risk = true_risk(event);
        if !(risk > prev_risk) {
            return Err(PortfolioError::ConstructionFailed(format!(
                "true risk not strictly increasing at '{}'",
                event.id
            )));
        }
        let score = additive
            .score_event(&[event.impact, event.frequency.annualized()])?
            .score;
        if score > prev_score {
            return Err(PortfolioError::ConstructionFailed(format!(
                "additive score increased at '{}'",
                event.id
            )));
        }
        if score < prev_score && prev_score.is_finite() {
            strict_drop = true;
        }
        prev_risk = risk;
        prev_score = score;
    }
    if size >= 3 && !strict_drop {
        return Err(PortfolioError::ConstructionFailed(
            "no strict score decrease; tau would be undefined".to_string(),
        ));
    }
    Portfolio::new("unit", events)
}
