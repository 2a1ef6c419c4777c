//! Risk scoring schemes: per-factor rating scales, a combination rule, and a
//! threshold map onto output categories; plus directly colored risk matrices
//! and the presets used throughout the toolkit.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::scalar::{num, Scalar};
use crate::scales::{
    Direction, DistributionKind, OrdinalScale, QuantRange, RankLevel, ScaleError,
};
use crate::Severity;

/// How per-factor ratings are folded into one score.
#[derive(Debug, Clone, PartialEq)]
pub enum CombinationRule<F> {
    Additive,
    Multiplicative,
    WeightedAdditive { weights: Vec<F> },
    /// Sum of all other ratings minus the rating of the deduction factor
    /// (0-based index into the factor list).
    AdditiveWithDeduction { deduction_index: usize },
}

impl<F> CombinationRule<F> {
    pub fn name(&self) -> &'static str {
        match self {
            CombinationRule::Additive => "additive",
            CombinationRule::Multiplicative => "multiplicative",
            CombinationRule::WeightedAdditive { .. } => "weighted-additive",
            CombinationRule::AdditiveWithDeduction { .. } => "additive-with-deduction",
        }
    }
}

/// An output risk category (ASIL level, matrix color, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputCategory {
    /// 1-based ordinal position, higher means riskier.
    pub index: usize,
    pub label: String,
    pub color: String,
}

impl fmt::Display for OutputCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Ordered `(inclusive upper bound, category)` pairs mapping scores to
/// categories: a score belongs to the first entry whose bound is >= score.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdMap<F> {
    entries: Vec<(F, OutputCategory)>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SchemeError {
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error("threshold map needs at least one entry")]
    EmptyThresholds,
    #[error("threshold upper bounds must be strictly increasing")]
    UnorderedThresholds,
    #[error("threshold categories must have distinct, consecutive indices starting at 1")]
    BadThresholdCategories,
    #[error("score {score} exceeds the last threshold bound {last}")]
    ScoreAboveThresholds { score: String, last: String },
    #[error("rating count {got} does not match expected factor count {expected}")]
    RatingCountMismatch { expected: usize, got: usize },
    #[error("weight count {got} does not match factor count {expected}")]
    WeightCountMismatch { expected: usize, got: usize },
    #[error("weights must be finite")]
    NonFiniteWeight,
    #[error("deduction factor index {index} is out of bounds for {factors} factors")]
    BadDeductionIndex { index: usize, factors: usize },
    #[error("scheme needs at least two factors (got {got})")]
    TooFewFactors { got: usize },
    #[error("rank {rank} is out of bounds for factor {factor} ({levels} levels)")]
    BadRank {
        factor: usize,
        rank: usize,
        levels: usize,
    },
    #[error("thresholds do not cover the attainable score range (max attainable {max}, last bound {last})")]
    ThresholdsDoNotCover { max: String, last: String },
    #[error("combination table supports 2 or 3 factors (got {got})")]
    BadFactorCount { got: usize },
    #[error("rank combination space too large ({combinations} > {limit})")]
    CombinationSpaceTooLarge { combinations: u128, limit: u128 },
    #[error("scheme has no threshold map; categories are undefined")]
    NoThresholds,
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("matrix grid shape {rows}x{cols} does not match scales {expected_rows}x{expected_cols}")]
    GridShapeMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("matrix cell ({row},{col}) holds invalid category index {index}")]
    BadCellCategory { row: usize, col: usize, index: usize },
    #[error("matrix categories must have consecutive indices starting at 1")]
    BadMatrixCategories,
}

impl<F: Scalar> ThresholdMap<F> {
    pub fn new(entries: Vec<(F, OutputCategory)>) -> Result<Self, SchemeError> {
        if entries.is_empty() {
            return Err(SchemeError::EmptyThresholds);
        }
        if !entries.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(SchemeError::UnorderedThresholds);
        }
        for (i, (_, cat)) in entries.iter().enumerate() {
            if cat.index != i + 1 {
                return Err(SchemeError::BadThresholdCategories);
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(F, OutputCategory)] {
        &self.entries
    }

    pub fn last_bound(&self) -> F {
        self.entries.last().expect("nonempty").0
    }

    pub fn categories(&self) -> impl Iterator<Item = &OutputCategory> {
        self.entries.iter().map(|(_, c)| c)
    }

    /// Category of the first entry whose upper bound is >= score.
    pub fn categorize(&self, score: F) -> Result<&OutputCategory, SchemeError> {
        self.entries
            .iter()
            .find(|(bound, _)| score <= *bound)
            .map(|(_, cat)| cat)
            .ok_or_else(|| SchemeError::ScoreAboveThresholds {
                score: score.to_string(),
                last: self.last_bound().to_string(),
            })
    }
}

/// Combine ratings under a rule. The deduction rule returns the raw
/// difference here; the scheme-level floor is applied by
/// [`RiskScheme::score_ranks`].
pub fn combine<F: Scalar>(rule: &CombinationRule<F>, ratings: &[F]) -> Result<F, SchemeError> {
    if ratings.is_empty() {
        return Err(SchemeError::RatingCountMismatch { expected: 1, got: 0 });
    }
    match rule {
        CombinationRule::Additive => Ok(ratings.iter().copied().fold(F::zero(), |a, x| a + x)),
        CombinationRule::Multiplicative => {
            Ok(ratings.iter().copied().fold(F::one(), |a, x| a * x))
        }
        CombinationRule::WeightedAdditive { weights } => {
            if weights.len() != ratings.len() {
                return Err(SchemeError::WeightCountMismatch {
                    expected: weights.len(),
                    got: ratings.len(),
                });
            }
            Ok(weights
                .iter()
                .zip(ratings)
                .fold(F::zero(), |a, (&w, &x)| a + w * x))
        }
        CombinationRule::AdditiveWithDeduction { deduction_index } => {
            if *deduction_index >= ratings.len() {
                return Err(SchemeError::BadDeductionIndex {
                    index: *deduction_index,
                    factors: ratings.len(),
                });
            }
            let mut sum = F::zero();
            for (i, &x) in ratings.iter().enumerate() {
                if i == *deduction_index {
                    sum -= x;
                } else {
                    sum += x;
                }
            }
            Ok(sum)
        }
    }
}

/// The result of scoring one event or rank vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreResult<F> {
    pub ranks: Vec<usize>,
    pub score: F,
    pub category: Option<OutputCategory>,
}

/// Per-factor rating scales plus a combination rule and (optionally) output
/// category thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskScheme<F> {
    pub name: String,
    factors: Vec<OrdinalScale<F>>,
    rule: CombinationRule<F>,
    thresholds: Option<ThresholdMap<F>>,
}

impl<F: Scalar> RiskScheme<F> {
    pub fn new(
        name: impl Into<String>,
        factors: Vec<OrdinalScale<F>>,
        rule: CombinationRule<F>,
        thresholds: Option<ThresholdMap<F>>,
    ) -> Result<Self, SchemeError> {
        if factors.len() < 2 {
            return Err(SchemeError::TooFewFactors { got: factors.len() });
        }
        if let CombinationRule::WeightedAdditive { weights } = &rule {
            if weights.len() != factors.len() {
                return Err(SchemeError::WeightCountMismatch {
                    expected: factors.len(),
                    got: weights.len(),
                });
            }
            if weights.iter().any(|w| !w.is_finite()) {
                return Err(SchemeError::NonFiniteWeight);
            }
        }
        if let CombinationRule::AdditiveWithDeduction { deduction_index } = &rule {
            if *deduction_index >= factors.len() {
                return Err(SchemeError::BadDeductionIndex {
                    index: *deduction_index,
                    factors: factors.len(),
                });
            }
        }
        let scheme = Self {
            name: name.into(),
            factors,
            rule,
            thresholds,
        };
        if let Some(map) = &scheme.thresholds {
            let max = scheme.max_attainable_score();
            if max > map.last_bound() {
                return Err(SchemeError::ThresholdsDoNotCover {
                    max: max.to_string(),
                    last: map.last_bound().to_string(),
                });
            }
        }
        Ok(scheme)
    }

    pub fn factors(&self) -> &[OrdinalScale<F>] {
        &self.factors
    }

    pub fn rule(&self) -> &CombinationRule<F> {
        &self.rule
    }

    pub fn thresholds(&self) -> Option<&ThresholdMap<F>> {
        self.thresholds.as_ref()
    }

    /// Same factors and thresholds, different combination rule.
    pub fn with_rule(&self, rule: CombinationRule<F>) -> Result<Self, SchemeError> {
        Self::new(self.name.clone(), self.factors.clone(), rule, self.thresholds.clone())
    }

    /// Exact maximum attainable score via interval propagation over the
    /// per-factor semi-quantitative number ranges.
    pub fn max_attainable_score(&self) -> F {
        let spans: Vec<(F, F)> = self
            .factors
            .iter()
            .map(|f| {
                let lo = f.semi_quants().fold(F::infinity(), |a, x| a.min(x));
                let hi = f.semi_quants().fold(F::neg_infinity(), |a, x| a.max(x));
                (lo, hi)
            })
            .collect();
        match &self.rule {
            CombinationRule::Additive => spans.iter().fold(F::zero(), |a, (_, hi)| a + *hi),
            CombinationRule::WeightedAdditive { weights } => weights
                .iter()
                .zip(&spans)
                .fold(F::zero(), |a, (&w, &(lo, hi))| {
                    a + (w * lo).max(w * hi)
                }),
            CombinationRule::Multiplicative => {
                let (mut lo, mut hi) = (F::one(), F::one());
                for &(flo, fhi) in &spans {
                    let cands = [lo * flo, lo * fhi, hi * flo, hi * fhi];
                    lo = cands.iter().copied().fold(F::infinity(), |a, x| a.min(x));
                    hi = cands
                        .iter()
                        .copied()
                        .fold(F::neg_infinity(), |a, x| a.max(x));
                }
                hi
            }
            CombinationRule::AdditiveWithDeduction { deduction_index } => spans
                .iter()
                .enumerate()
                .fold(F::zero(), |a, (i, &(lo, hi))| {
                    if i == *deduction_index {
                        a - lo
                    } else {
                        a + hi
                    }
                }),
        }
    }

    /// Minimum attainable sum of the non-deduction ratings; used as the
    /// floor for the deduction rule so the threshold map stays total.
    fn deduction_floor(&self, deduction_index: usize) -> F {
        self.factors
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != deduction_index)
            .map(|(_, f)| f.semi_quants().fold(F::infinity(), |a, x| a.min(x)))
            .fold(F::zero(), |a, x| a + x)
    }

    /// Score a vector of per-factor ranks.
    pub fn score_ranks(&self, ranks: &[usize]) -> Result<ScoreResult<F>, SchemeError> {
        if ranks.len() != self.factors.len() {
            return Err(SchemeError::RatingCountMismatch {
                expected: self.factors.len(),
                got: ranks.len(),
            });
        }
        let mut ratings = Vec::with_capacity(ranks.len());
        for (i, (&rank, factor)) in ranks.iter().zip(&self.factors).enumerate() {
            if rank == 0 || rank > factor.len() {
                return Err(SchemeError::BadRank {
                    factor: i,
                    rank,
                    levels: factor.len(),
                });
            }
            ratings.push(factor.semi_quant(rank)?);
        }
        let mut score = combine(&self.rule, &ratings)?;
        if let CombinationRule::AdditiveWithDeduction { deduction_index } = &self.rule {
            score = score.max(self.deduction_floor(*deduction_index));
        }
        let category = match &self.thresholds {
            Some(map) => Some(map.categorize(score)?.clone()),
            None => None,
        };
        Ok(ScoreResult {
            ranks: ranks.to_vec(),
            score,
            category,
        })
    }

    /// Classify quantitative per-factor values, then score the rank vector.
    pub fn score_event(&self, values: &[F]) -> Result<ScoreResult<F>, SchemeError> {
        if values.len() != self.factors.len() {
            return Err(SchemeError::RatingCountMismatch {
                expected: self.factors.len(),
                got: values.len(),
            });
        }
        let ranks = values
            .iter()
            .zip(&self.factors)
            .map(|(&v, f)| f.classify(v))
            .collect::<Result<Vec<_>, _>>()?;
        self.score_ranks(&ranks)
    }

    /// All rank combinations, in row-major order over factor ranks.
    fn rank_combinations(&self, limit: u128) -> Result<Vec<Vec<usize>>, SchemeError> {
        let counts: Vec<usize> = self.factors.iter().map(|f| f.len()).collect();
        let total: u128 = counts.iter().map(|&c| c as u128).product();
        if total > limit {
            return Err(SchemeError::CombinationSpaceTooLarge {
                combinations: total,
                limit,
            });
        }
        let mut combos = vec![vec![]];
        for &count in &counts {
            let mut next = Vec::with_capacity(combos.len() * count);
            for combo in &combos {
                for rank in 1..=count {
                    let mut c = combo.clone();
                    c.push(rank);
                    next.push(c);
                }
            }
            combos = next;
        }
        Ok(combos)
    }
}

/// Finding emitted by [`check_zero_annihilation`].
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeFinding {
    pub severity: Severity,
    pub message: String,
}

/// A multiplicative scheme with a 0 among some factor's semi-quantitative
/// numbers lets one rating wipe out every other factor.
pub fn check_zero_annihilation<F: Scalar>(scheme: &RiskScheme<F>) -> Option<SchemeFinding> {
    if !matches!(scheme.rule(), CombinationRule::Multiplicative) {
        return None;
    }
    let zeroed: Vec<&str> = scheme
        .factors()
        .iter()
        .filter(|f| f.semi_quants().any(|x| x == F::zero()))
        .map(|f| f.name.as_str())
        .collect();
    if zeroed.is_empty() {
        None
    } else {
        Some(SchemeFinding {
            severity: Severity::Violation,
            message: format!(
                "multiplicative scheme '{}' has factor(s) with a 0 rating ({}); a single 0 annihilates every other rating",
                scheme.name,
                zeroed.join(", ")
            ),
        })
    }
}

/// Per-factor relevance report from exhaustive rank enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorInfluence {
    pub factor: usize,
    pub factor_name: String,
    /// Some rank change of this factor changes the output category.
    pub relevant: bool,
    /// Largest category-index change induced by a single-step rank change.
    pub max_category_shift: usize,
}

const INFLUENCE_LIMIT: u128 = 1_000_000;

/// Exhaustively varies each factor with all others fixed and reports whether
/// it can move the output category at all, and by how much per single step.
pub fn factor_influence<F: Scalar>(
    scheme: &RiskScheme<F>,
) -> Result<Vec<FactorInfluence>, SchemeError> {
    if scheme.thresholds().is_none() {
        return Err(SchemeError::NoThresholds);
    }
    let combos = scheme.rank_combinations(INFLUENCE_LIMIT)?;
    let mut reports = Vec::with_capacity(scheme.factors().len());
    for (fi, factor) in scheme.factors().iter().enumerate() {
        let mut relevant = false;
        let mut max_shift = 0usize;
        for combo in &combos {
            if combo[fi] != 1 {
                continue; // enumerate each "others fixed" slice once
            }
            let mut prev = None;
            for rank in 1..=factor.len() {
                let mut ranks = combo.clone();
                ranks[fi] = rank;
                let cat = scheme
                    .score_ranks(&ranks)?
                    .category
                    .expect("thresholds checked above")
                    .index;
                if let Some(p) = prev {
                    let shift = cat.abs_diff(p);
                    if shift > 0 {
                        relevant = true;
                        max_shift = max_shift.max(shift);
                    }
                }
                prev = Some(cat);
            }
        }
        reports.push(FactorInfluence {
            factor: fi,
            factor_name: factor.name.clone(),
            relevant,
            max_category_shift: max_shift,
        });
    }
    Ok(reports)
}

/// One row of [`CombinationTable`]: a rank combination with both scores.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinationRow<F> {
    pub ranks: Vec<usize>,
    pub additive: F,
    pub multiplicative: F,
}

/// Side-by-side additive vs multiplicative combination of every rank tuple,
/// with the number of distinct values each rule produces.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinationTable<F> {
    pub rows: Vec<CombinationRow<F>>,
    pub distinct_additive: usize,
    pub distinct_multiplicative: usize,
}

/// Enumerate all rank combinations of 2 or 3 factors (ranks numbered 1..=n)
/// and combine them additively and multiplicatively.
pub fn combination_table<F: Scalar>(
    rank_counts: &[usize],
) -> Result<CombinationTable<F>, SchemeError> {
    if !(rank_counts.len() == 2 || rank_counts.len() == 3) && rank_counts.len() != 1 {
        return Err(SchemeError::BadFactorCount {
            got: rank_counts.len(),
        });
    }
    let mut combos: Vec<Vec<u64>> = vec![vec![]];
    for &count in rank_counts {
        let mut next = Vec::with_capacity(combos.len() * count);
        for combo in &combos {
            for rank in 1..=count as u64 {
                let mut c = combo.clone();
                c.push(rank);
                next.push(c);
            }
        }
        combos = next;
    }
    let mut rows = Vec::with_capacity(combos.len());
    let mut sums = BTreeSet::new();
    let mut products = BTreeSet::new();
    for combo in combos {
        let sum: u64 = combo.iter().sum();
        let product: u64 = combo.iter().product();
        sums.insert(sum);
        products.insert(product);
        rows.push(CombinationRow {
            ranks: combo.iter().map(|&r| r as usize).collect(),
            additive: num(sum as f64),
            multiplicative: num(product as f64),
        });
    }
    Ok(CombinationTable {
        rows,
        distinct_additive: sums.len(),
        distinct_multiplicative: products.len(),
    })
}

/// A directly colored risk grid over two input scales.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixColoring<F> {
    pub name: String,
    row_scale: OrdinalScale<F>,
    col_scale: OrdinalScale<F>,
    categories: Vec<OutputCategory>,
    /// `grid[row_rank - 1][col_rank - 1]` = 1-based category index.
    grid: Vec<Vec<usize>>,
}

impl<F: Scalar> MatrixColoring<F> {
    pub fn new(
        name: impl Into<String>,
        row_scale: OrdinalScale<F>,
        col_scale: OrdinalScale<F>,
        categories: Vec<OutputCategory>,
        grid: Vec<Vec<usize>>,
    ) -> Result<Self, SchemeError> {
        for (i, cat) in categories.iter().enumerate() {
            if cat.index != i + 1 {
                return Err(SchemeError::BadMatrixCategories);
            }
        }
        if grid.len() != row_scale.len() || grid.iter().any(|r| r.len() != col_scale.len()) {
            return Err(SchemeError::GridShapeMismatch {
                rows: grid.len(),
                cols: grid.first().map_or(0, |r| r.len()),
                expected_rows: row_scale.len(),
                expected_cols: col_scale.len(),
            });
        }
        for (ri, row) in grid.iter().enumerate() {
            for (ci, &cat) in row.iter().enumerate() {
                if cat == 0 || cat > categories.len() {
                    return Err(SchemeError::BadCellCategory {
                        row: ri + 1,
                        col: ci + 1,
                        index: cat,
                    });
                }
            }
        }
        Ok(Self {
            name: name.into(),
            row_scale,
            col_scale,
            categories,
            grid,
        })
    }

    pub fn row_scale(&self) -> &OrdinalScale<F> {
        &self.row_scale
    }

    pub fn col_scale(&self) -> &OrdinalScale<F> {
        &self.col_scale
    }

    pub fn categories(&self) -> &[OutputCategory] {
        &self.categories
    }

    pub fn category_at(&self, row_rank: usize, col_rank: usize) -> Result<&OutputCategory, SchemeError> {
        let idx = *self
            .grid
            .get(row_rank.wrapping_sub(1))
            .and_then(|r| r.get(col_rank.wrapping_sub(1)))
            .ok_or(SchemeError::GridShapeMismatch {
                rows: row_rank,
                cols: col_rank,
                expected_rows: self.row_scale.len(),
                expected_cols: self.col_scale.len(),
            })?;
        Ok(&self.categories[idx - 1])
    }

    /// Classify `(row value, col value)` and look up the cell category. The
    /// score of a matrix cell is its category index (the matrix output is
    /// itself ordinal).
    pub fn score_event(&self, row_value: F, col_value: F) -> Result<ScoreResult<F>, SchemeError> {
        let row_rank = self.row_scale.classify(row_value)?;
        let col_rank = self.col_scale.classify(col_value)?;
        let category = self.category_at(row_rank, col_rank)?.clone();
        Ok(ScoreResult {
            ranks: vec![row_rank, col_rank],
            score: num(category.index as f64),
            category: Some(category),
        })
    }
}

/// Either kind of scorable risk model.
#[derive(Debug, Clone, PartialEq)]
pub enum RiskModel<F> {
    Scheme(RiskScheme<F>),
    Matrix(MatrixColoring<F>),
}

impl<F: Scalar> RiskModel<F> {
    pub fn name(&self) -> &str {
        match self {
            RiskModel::Scheme(s) => &s.name,
            RiskModel::Matrix(m) => &m.name,
        }
    }

    /// Number of quantitative input values expected by [`score_values`].
    ///
    /// [`score_values`]: RiskModel::score_values
    pub fn arity(&self) -> usize {
        match self {
            RiskModel::Scheme(s) => s.factors().len(),
            RiskModel::Matrix(_) => 2,
        }
    }

    /// Score quantitative per-factor values. For matrices the expected order
    /// is `[row value, col value]`.
    pub fn score_values(&self, values: &[F]) -> Result<ScoreResult<F>, SchemeError> {
        match self {
            RiskModel::Scheme(s) => s.score_event(values),
            RiskModel::Matrix(m) => {
                if values.len() != 2 {
                    return Err(SchemeError::RatingCountMismatch {
                        expected: 2,
                        got: values.len(),
                    });
                }
                m.score_event(values[0], values[1])
            }
        }
    }
}

/// The named presets shipped with the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Hara,
    Fmea,
    Mil882c,
    ProblemU,
}

impl Preset {
    pub fn parse(name: &str) -> Result<Self, SchemeError> {
        match name {
            "hara" => Ok(Preset::Hara),
            "fmea" => Ok(Preset::Fmea),
            "mil882c" => Ok(Preset::Mil882c),
            "problem-u" => Ok(Preset::ProblemU),
            other => Err(SchemeError::UnknownPreset(other.to_string())),
        }
    }

    pub const ALL: [&'static str; 4] = ["hara", "fmea", "mil882c", "problem-u"];
}

/// Build a preset risk model by name.
pub fn preset<F: Scalar>(which: Preset) -> RiskModel<F> {
    match which {
        Preset::Hara => RiskModel::Scheme(hara()),
        Preset::Fmea => RiskModel::Scheme(fmea()),
        Preset::ProblemU => RiskModel::Scheme(problem_u()),
        Preset::Mil882c => RiskModel::Matrix(mil882c()),
    }
}

fn rank_numbers<F: Scalar>(n: usize) -> Vec<F> {
    NumberAssignment::numbers(&NumberAssignment::Increasing, n)
}

use crate::scales::NumberAssignment;

/// Hazard analysis scheme: severity (1..3) + exposure (1..4) +
/// controllability (1..3), additive, sums <= 6 map to QM and 7..10 map to
/// ASIL A..D.
pub fn hara<F: Scalar>() -> RiskScheme<F> {
    let severity =
        OrdinalScale::unbound("severity", &["S1", "S2", "S3"], &rank_numbers(3)).unwrap();
    let exposure =
        OrdinalScale::unbound("exposure", &["E1", "E2", "E3", "E4"], &rank_numbers(4)).unwrap();
    let controllability =
        OrdinalScale::unbound("controllability", &["C1", "C2", "C3"], &rank_numbers(3)).unwrap();
    let cats = [
        ("QM", "green"),
        ("ASIL A", "yellow"),
        ("ASIL B", "amber"),
        ("ASIL C", "orange"),
        ("ASIL D", "red"),
    ];
    let bounds = [6.0, 7.0, 8.0, 9.0, 10.0];
    let entries = bounds
        .iter()
        .zip(cats.iter())
        .enumerate()
        .map(|(i, (&b, &(label, color)))| {
            (
                num(b),
                OutputCategory {
                    index: i + 1,
                    label: label.to_string(),
                    color: color.to_string(),
                },
            )
        })
        .collect();
    RiskScheme::new(
        "hara",
        vec![severity, exposure, controllability],
        CombinationRule::Additive,
        Some(ThresholdMap::new(entries).unwrap()),
    )
    .unwrap()
}

/// Failure mode scoring: severity, occurrence and detection ranks 1..10
/// multiplied into a risk priority number 1..1000. No standardized
/// thresholds exist, so the preset ships score-only.
pub fn fmea<F: Scalar>() -> RiskScheme<F> {
    let labels: Vec<String> = (1..=10).map(|i| format!("{i}")).collect();
    let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let make = |name: &str| {
        OrdinalScale::unbound(name, &label_refs, &rank_numbers::<F>(10)).unwrap()
    };
    RiskScheme::new(
        "fmea",
        vec![make("severity"), make("occurrence"), make("detection")],
        CombinationRule::Multiplicative,
        None,
    )
    .unwrap()
}

/// Oil-leakage comparison scheme: impact in liters per event and frequency
/// in occurrences per year, multiplied.
///
/// The impact bins are quoted ranges; the frequency scale names rates
/// (yearly/monthly/weekly/daily = 1, 12, 52, 365 per year) and its bin
/// boundaries sit at the geometric means of adjacent named rates.
pub fn problem_u<F: Scalar>() -> RiskScheme<F> {
    let impact = OrdinalScale::from_levels(
        "impact",
        Direction::HigherIsRiskier,
        DistributionKind::Logarithmic,
        vec![
            RankLevel {
                index: 1,
                label: "Low impact".into(),
                semi_quant: num(1.0),
                range: Some(QuantRange::closed(num(0.0), num(0.1)).unwrap()),
            },
            RankLevel {
                index: 2,
                label: "Medium impact".into(),
                semi_quant: num(2.0),
                range: Some(QuantRange::half_open(num(0.1), num(1.0)).unwrap()),
            },
            RankLevel {
                index: 3,
                label: "High impact".into(),
                semi_quant: num(3.0),
                range: Some(QuantRange::half_open(num(1.0), num(10.0)).unwrap()),
            },
            RankLevel {
                index: 4,
                label: "Very high impact".into(),
                semi_quant: num(4.0),
                range: Some(QuantRange::above(num(10.0)).unwrap()),
            },
        ],
    )
    .unwrap();
    let rates = [1.0f64, 12.0, 52.0, 365.0];
    let b: Vec<f64> = rates.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect();
    let freq = OrdinalScale::from_levels(
        "frequency",
        Direction::HigherIsRiskier,
        DistributionKind::Logarithmic,
        vec![
            RankLevel {
                index: 1,
                label: "Yearly".into(),
                semi_quant: num(1.0),
                range: Some(QuantRange::closed(num(0.0), num(b[0])).unwrap()),
            },
            RankLevel {
                index: 2,
                label: "Monthly".into(),
                semi_quant: num(2.0),
                range: Some(QuantRange::half_open(num(b[0]), num(b[1])).unwrap()),
            },
            RankLevel {
                index: 3,
                label: "Weekly".into(),
                semi_quant: num(3.0),
                range: Some(QuantRange::half_open(num(b[1]), num(b[2])).unwrap()),
            },
            RankLevel {
                index: 4,
                label: "Daily".into(),
                semi_quant: num(4.0),
                range: Some(QuantRange::above(num(b[2])).unwrap()),
            },
        ],
    )
    .unwrap();
    RiskScheme::new(
        "problem-u",
        vec![impact, freq],
        CombinationRule::Multiplicative,
        None,
    )
    .unwrap()
}

/// MIL-STD-882C style 4x5 matrix: severity rows (pounds leaked per event,
/// decade bins anchored at 1) by frequency columns (events per year, decade
/// bins anchored at 10 as the frequent threshold).
///
/// Cells follow the standard's hazard risk index with groupings arranged so
/// (Negligible, Frequent) lands on MEDIUM while (Marginal or Critical,
/// Frequent) land on HIGH; all other cells are editable defaults.
pub fn mil882c<F: Scalar>() -> MatrixColoring<F> {
    let severity = OrdinalScale::from_levels(
        "severity",
        Direction::HigherIsRiskier,
        DistributionKind::Logarithmic,
        vec![
            RankLevel {
                index: 1,
                label: "Negligible".into(),
                semi_quant: num(1.0),
                range: Some(QuantRange::closed(num(0.0), num(1.0)).unwrap()),
            },
            RankLevel {
                index: 2,
                label: "Marginal".into(),
                semi_quant: num(2.0),
                range: Some(QuantRange::half_open(num(1.0), num(10.0)).unwrap()),
            },
            RankLevel {
                index: 3,
                label: "Critical".into(),
                semi_quant: num(3.0),
                range: Some(QuantRange::half_open(num(10.0), num(100.0)).unwrap()),
            },
            RankLevel {
                index: 4,
                label: "Catastrophic".into(),
                semi_quant: num(4.0),
                range: Some(QuantRange::above(num(100.0)).unwrap()),
            },
        ],
    )
    .unwrap();
    let frequency = OrdinalScale::from_levels(
        "frequency",
        Direction::HigherIsRiskier,
        DistributionKind::Logarithmic,
        vec![
            RankLevel {
                index: 1,
                label: "Improbable".into(),
                semi_quant: num(1.0),
                range: Some(QuantRange::closed(num(0.0), num(0.01)).unwrap()),
            },
            RankLevel {
                index: 2,
                label: "Remote".into(),
                semi_quant: num(2.0),
                range: Some(QuantRange::half_open(num(0.01), num(0.1)).unwrap()),
            },
            RankLevel {
                index: 3,
                label: "Occasional".into(),
                semi_quant: num(3.0),
                range: Some(QuantRange::half_open(num(0.1), num(1.0)).unwrap()),
            },
            RankLevel {
                index: 4,
                label: "Probable".into(),
                semi_quant: num(4.0),
                range: Some(QuantRange::half_open(num(1.0), num(10.0)).unwrap()),
            },
            RankLevel {
                index: 5,
                label: "Frequent".into(),
                semi_quant: num(5.0),
                range: Some(QuantRange::above(num(10.0)).unwrap()),
            },
        ],
    )
    .unwrap();
    let categories = vec![
        OutputCategory {
            index: 1,
            label: "LOW".into(),
            color: "green".into(),
        },
        OutputCategory {
            index: 2,
            label: "MEDIUM".into(),
            color: "yellow".into(),
        },
        OutputCategory {
            index: 3,
            label: "SERIOUS".into(),
            color: "orange".into(),
        },
        OutputCategory {
            index: 4,
            label: "HIGH".into(),
            color: "red".into(),
        },
    ];
    // rows: Negligible..Catastrophic; cols: Improbable..Frequent
    let grid = vec![
        vec![1, 1, 1, 1, 2],
        vec![2, 2, 2, 3, 4],
        vec![2, 2, 4, 4, 4],
        vec![2, 3, 4, 4, 4],
    ];
    MatrixColoring::new("mil882c", severity, frequency, categories, grid).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_matches_worked_examples() {
        let mult = CombinationRule::<f64>::Multiplicative;
        assert_eq!(combine(&mult, &[3.0, 2.0]).unwrap(), 6.0);
        assert_eq!(combine(&mult, &[3.0, 1.0]).unwrap(), 3.0);
        let add = CombinationRule::<f64>::Additive;
        assert_eq!(combine(&add, &[3.0, 4.0, 3.0]).unwrap(), 10.0);
        let weighted = CombinationRule::WeightedAdditive {
            weights: vec![1.0, 1.0, 1.0],
        };
        assert_eq!(
            combine(&weighted, &[3.0, 4.0, 3.0]).unwrap(),
            combine(&add, &[3.0, 4.0, 3.0]).unwrap()
        );
        assert!(matches!(
            combine(&CombinationRule::WeightedAdditive { weights: vec![1.0] }, &[1.0, 2.0]),
            Err(SchemeError::WeightCountMismatch { .. })
        ));
    }

    #[test]
    fn deduction_rule_subtracts_and_scheme_floors() {
        let rule = CombinationRule::AdditiveWithDeduction { deduction_index: 2 };
        assert_eq!(combine(&rule, &[3.0, 4.0, 2.0]).unwrap(), 5.0);
        let factors: Vec<OrdinalScale<f64>> = (0..3)
            .map(|i| {
                OrdinalScale::unbound(
                    format!("f{i}"),
                    &["a", "b", "c"],
                    &[1.0, 2.0, 3.0],
                )
                .unwrap()
            })
            .collect();
        let scheme = RiskScheme::new("deduct", factors, rule, None).unwrap();
        // raw 1 + 1 - 3 = -1 floors at the minimum additive sum 2
        assert_eq!(scheme.score_ranks(&[1, 1, 3]).unwrap().score, 2.0);
        assert_eq!(scheme.score_ranks(&[3, 3, 1]).unwrap().score, 5.0);
    }

    #[test]
    fn hara_categorization_matches_thresholds() {
        let scheme = hara::<f64>();
        let map = scheme.thresholds().unwrap();
        assert_eq!(map.categorize(6.0).unwrap().label, "QM");
        assert_eq!(map.categorize(7.0).unwrap().label, "ASIL A");
        assert_eq!(map.categorize(10.0).unwrap().label, "ASIL D");
        assert_eq!(map.categorize(3.0).unwrap().label, "QM");
        assert!(matches!(
            map.categorize(10.5),
            Err(SchemeError::ScoreAboveThresholds { .. })
        ));
        let top = scheme.score_ranks(&[3, 4, 3]).unwrap();
        assert_eq!(top.score, 10.0);
        assert_eq!(top.category.unwrap().label, "ASIL D");
    }

    #[test]
    fn problem_u_scores_car_and_plane_as_printed() {
        let scheme = problem_u::<f64>();
        let car = scheme.score_event(&[0.5, 52.0]).unwrap();
        assert_eq!(car.ranks, vec![2, 3]);
        assert_eq!(car.score, 6.0);
        let plane = scheme.score_event(&[100.0, 2.0]).unwrap();
        assert_eq!(plane.ranks, vec![4, 1]);
        assert_eq!(plane.score, 4.0);
    }

    #[test]
    fn fmea_multiplies_ranks_into_rpn() {
        let scheme = fmea::<f64>();
        assert_eq!(scheme.score_ranks(&[10, 1, 1]).unwrap().score, 10.0);
        assert_eq!(scheme.score_ranks(&[10, 10, 10]).unwrap().score, 1000.0);
        assert!(scheme.score_ranks(&[10, 1, 1]).unwrap().category.is_none());
    }

    #[test]
    fn mil882c_reproduces_oil_example_cells() {
        let matrix = mil882c::<f64>();
        // 1 oz = 0.0625 lb, 5/hour = 43680/year
        let small = matrix.score_event(0.0625, 43_680.0).unwrap();
        assert_eq!(small.category.as_ref().unwrap().label, "MEDIUM");
        let big = matrix.score_event(10.0, 52.0).unwrap();
        assert_eq!(big.category.as_ref().unwrap().label, "HIGH");
        assert!(small.score < big.score);
    }

    #[test]
    fn combination_table_matches_brute_force_for_hara_ranks() {
        let table = combination_table::<f64>(&[3, 4, 3]).unwrap();
        assert_eq!(table.rows.len(), 36);
        // independent brute force
        let mut sums = std::collections::BTreeSet::new();
        let mut prods = std::collections::BTreeSet::new();
        for s in 1..=3u64 {
            for e in 1..=4u64 {
                for c in 1..=3u64 {
                    sums.insert(s + e + c);
                    prods.insert(s * e * c);
                }
            }
        }
        assert_eq!(table.distinct_additive, sums.len());
        assert_eq!(table.distinct_additive, 8);
        assert_eq!(table.distinct_multiplicative, prods.len());
        assert_eq!(table.distinct_multiplicative, 13);
        let expected: std::collections::BTreeSet<u64> =
            [1, 2, 3, 4, 6, 8, 9, 12, 16, 18, 24, 27, 36].into_iter().collect();
        assert_eq!(prods, expected);
    }

    #[test]
    fn degenerate_combination_table() {
        let table = combination_table::<f64>(&[1]).unwrap();
        assert_eq!(table.distinct_additive, 1);
        assert_eq!(table.distinct_multiplicative, 1);
    }

    #[test]
    fn zero_annihilation_detected_only_for_multiplicative_schemes() {
        let zero_scale = |name: &str| {
            OrdinalScale::unbound(name, &["a", "b", "c"], &[0.0f64, 1.0, 2.0]).unwrap()
        };
        let mult = RiskScheme::new(
            "zmult",
            vec![zero_scale("x"), zero_scale("y")],
            CombinationRule::Multiplicative,
            None,
        )
        .unwrap();
        assert!(check_zero_annihilation(&mult).is_some());
        let add = RiskScheme::new(
            "zadd",
            vec![zero_scale("x"), zero_scale("y")],
            CombinationRule::Additive,
            None,
        )
        .unwrap();
        assert!(check_zero_annihilation(&add).is_none());
        let clean = RiskScheme::new(
            "clean",
            vec![
                OrdinalScale::unbound("x", &["a", "b"], &[1.0f64, 2.0]).unwrap(),
                OrdinalScale::unbound("y", &["a", "b"], &[1.0f64, 2.0]).unwrap(),
            ],
            CombinationRule::Multiplicative,
            None,
        )
        .unwrap();
        assert!(check_zero_annihilation(&clean).is_none());
    }

    #[test]
    fn factor_influence_on_hara_finds_all_factors_relevant() {
        let reports = factor_influence(&hara::<f64>()).unwrap();
        assert!(reports.iter().all(|r| r.relevant));
        // single-step rank changes move the ASIL by exactly one level
        assert!(reports.iter().all(|r| r.max_category_shift == 1));
    }

    #[test]
    fn factor_influence_constant_thresholds_mean_irrelevant_factors() {
        let one_cat = ThresholdMap::new(vec![(
            100.0f64,
            OutputCategory {
                index: 1,
                label: "only".into(),
                color: "gray".into(),
            },
        )])
        .unwrap();
        let scheme = RiskScheme::new(
            "flat",
            vec![
                OrdinalScale::unbound("x", &["a", "b", "c"], &[1.0, 2.0, 3.0]).unwrap(),
                OrdinalScale::unbound("y", &["a", "b", "c"], &[1.0, 2.0, 3.0]).unwrap(),
            ],
            CombinationRule::Additive,
            Some(one_cat),
        )
        .unwrap();
        let reports = factor_influence(&scheme).unwrap();
        assert!(reports.iter().all(|r| !r.relevant && r.max_category_shift == 0));
    }

    #[test]
    fn zero_rank_multiplicative_factor_shifts_to_bottom_category() {
        let cats: Vec<OutputCategory> = ["low", "mid", "high"]
            .iter()
            .enumerate()
            .map(|(i, l)| OutputCategory {
                index: i + 1,
                label: (*l).into(),
                color: String::new(),
            })
            .collect();
        let map = ThresholdMap::new(vec![
            (0.0f64, cats[0].clone()),
            (4.0, cats[1].clone()),
            (9.0, cats[2].clone()),
        ])
        .unwrap();
        let scheme = RiskScheme::new(
            "zdom",
            vec![
                OrdinalScale::unbound("z", &["0", "1", "3"], &[0.0, 1.0, 3.0]).unwrap(),
                OrdinalScale::unbound("y", &["1", "3"], &[1.0, 3.0]).unwrap(),
            ],
            CombinationRule::Multiplicative,
            Some(map),
        )
        .unwrap();
        let reports = factor_influence(&scheme).unwrap();
        // dropping z from 1 to 0 at y=3 collapses 3 -> 0: mid to low; raising
        // z from 1 to 3 at y=3 jumps 3 -> 9: mid to high
        assert_eq!(reports[0].max_category_shift, 1);
        assert!(reports[0].relevant);
        let top = scheme.score_ranks(&[1, 2]).unwrap();
        assert_eq!(top.category.unwrap().index, 1);
    }

    #[test]
    fn thresholds_must_cover_attainable_scores() {
        let err = RiskScheme::new(
            "uncovered",
            vec![
                OrdinalScale::unbound("x", &["a", "b"], &[1.0f64, 2.0]).unwrap(),
                OrdinalScale::unbound("y", &["a", "b"], &[1.0f64, 2.0]).unwrap(),
            ],
            CombinationRule::Additive,
            Some(
                ThresholdMap::new(vec![(
                    3.0,
                    OutputCategory {
                        index: 1,
                        label: "low".into(),
                        color: String::new(),
                    },
                )])
                .unwrap(),
            ),
        )
        .unwrap_err();
        assert!(matches!(err, SchemeError::ThresholdsDoNotCover { .. }));
    }

    #[test]
    fn preset_lookup_by_name() {
        assert!(matches!(
            preset::<f64>(Preset::parse("hara").unwrap()),
            RiskModel::Scheme(_)
        ));
        assert!(matches!(
            preset::<f64>(Preset::parse("mil882c").unwrap()),
            RiskModel::Matrix(_)
        ));
        assert!(Preset::parse("nope").is_err());
    }
}
