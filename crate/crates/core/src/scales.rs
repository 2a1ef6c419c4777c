//! Ordinal scales: rank levels with semi-quantitative numbers and optional
//! quantitative range bindings, plus classification (quantization) of values
//! and intervals.
//!
//! Boundary convention, applied uniformly: ranges are lo-exclusive and
//! hi-inclusive, except that the lowest level is closed at the domain's lower
//! bound. An unbounded top level is expressed with `hi = +inf` (exclusive).

use std::fmt;

use thiserror::Error;

use crate::scalar::{num, Scalar};
use crate::Severity;

/// A half-open or closed interval of quantitative values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantRange<F> {
    pub lo: F,
    pub hi: F,
    pub lo_inclusive: bool,
    pub hi_inclusive: bool,
}

#[derive(Debug, Error, PartialEq)]
pub enum ScaleError {
    #[error("range bounds must satisfy lo < hi (got {lo} .. {hi})")]
    EmptyRange { lo: String, hi: String },
    #[error("infinity is only allowed as an exclusive upper bound")]
    BadInfinity,
    #[error("scale must have at least one level")]
    NoLevels,
    #[error("scale must have at least {required} levels (got {got})")]
    TooFewLevels { required: usize, got: usize },
    #[error("level {index} has an empty label")]
    EmptyLabel { index: usize },
    #[error("level indices must run 1..=N consecutively (level {position} has index {index})")]
    BadIndex { position: usize, index: usize },
    #[error("custom label count {got} does not match level count {expected}")]
    LabelCountMismatch { expected: usize, got: usize },
    #[error("{kind} partitioning is only tabulated for {expected} levels (got {got})")]
    UnsupportedLevelCount {
        kind: DistributionKind,
        expected: usize,
        got: usize,
    },
    #[error("arbitrary scales cannot be auto-partitioned; build them level by level")]
    ArbitraryPartition,
    #[error("{kind} partitioning needs a finite domain")]
    InfiniteDomain { kind: DistributionKind },
    #[error("logarithmic partitioning needs a positive domain top and non-negative lower bound")]
    NonPositiveLogDomain,
    #[error("logarithmic partitioning with {levels} levels puts a boundary below the domain lower bound")]
    LogBoundaryBelowDomain { levels: usize },
    #[error("scale has no quantitative range bindings")]
    Unbound,
    #[error("value {value} is outside the scale domain")]
    OutOfDomain { value: String },
    #[error("value {value} falls in a definition gap between levels")]
    ValueInGap { value: String },
    #[error("interval bounds must satisfy lo <= hi")]
    BadInterval,
    #[error("rank {rank} does not exist (scale has {levels} levels)")]
    BadRank { rank: usize, levels: usize },
    #[error("relative sensitivity is undefined for non-positive values; nearest boundary is {absolute} away")]
    NonPositiveValue { absolute: String },
}

impl<F: Scalar> QuantRange<F> {
    pub fn new(lo: F, hi: F, lo_inclusive: bool, hi_inclusive: bool) -> Result<Self, ScaleError> {
        if !(lo < hi) {
            return Err(ScaleError::EmptyRange {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        // +inf only as an exclusive upper bound; at least one endpoint finite.
        if lo.is_infinite() || (hi.is_infinite() && (hi < F::zero() || hi_inclusive)) {
            return Err(ScaleError::BadInfinity);
        }
        Ok(Self {
            lo,
            hi,
            lo_inclusive,
            hi_inclusive,
        })
    }

    /// Closed range `[lo, hi]`.
    pub fn closed(lo: F, hi: F) -> Result<Self, ScaleError> {
        Self::new(lo, hi, true, true)
    }

    /// The toolkit's default binding shape `(lo, hi]`.
    pub fn half_open(lo: F, hi: F) -> Result<Self, ScaleError> {
        Self::new(lo, hi, false, true)
    }

    /// Unbounded top range `(lo, +inf)`.
    pub fn above(lo: F) -> Result<Self, ScaleError> {
        Self::new(lo, F::infinity(), false, false)
    }

    pub fn contains(&self, v: F) -> bool {
        let lo_ok = if self.lo_inclusive { v >= self.lo } else { v > self.lo };
        let hi_ok = if self.hi_inclusive { v <= self.hi } else { v < self.hi };
        lo_ok && hi_ok
    }

    /// Intersection with the closed interval `[lo, hi]` is nonempty.
    pub fn intersects_closed(&self, lo: F, hi: F) -> bool {
        let above_lo = if self.lo_inclusive { hi >= self.lo } else { hi > self.lo };
        let below_hi = if self.hi_inclusive { lo <= self.hi } else { lo < self.hi };
        above_lo && below_hi
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }
}

impl<F: Scalar> fmt::Display for QuantRange<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo_b = if self.lo_inclusive { '[' } else { '(' };
        if self.hi.is_finite() {
            let hi_b = if self.hi_inclusive { ']' } else { ')' };
            write!(f, "{}{}, {}{}", lo_b, self.lo, self.hi, hi_b)
        } else {
            write!(f, "{}{}, inf)", lo_b, self.lo)
        }
    }
}

/// One level of an ordinal scale.
#[derive(Debug, Clone, PartialEq)]
pub struct RankLevel<F> {
    /// 1-based ordinal position.
    pub index: usize,
    pub label: String,
    /// The "semi-quantitative" number assigned to this rank.
    pub semi_quant: F,
    /// Optional binding to a quantitative value range.
    pub range: Option<QuantRange<F>>,
}

/// Whether a higher rank means more or less risk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    HigherIsRiskier,
    HigherIsSafer,
}

/// How the quantitative domain is carved into ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistributionKind {
    Linear,
    Logarithmic,
    Gaussian,
    InverseGaussian,
    #[default]
    Arbitrary,
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DistributionKind::Linear => "linear",
            DistributionKind::Logarithmic => "logarithmic",
            DistributionKind::Gaussian => "gaussian",
            DistributionKind::InverseGaussian => "inverse-gaussian",
            DistributionKind::Arbitrary => "arbitrary",
        };
        f.write_str(s)
    }
}

/// Semi-quantitative number assignment variants for N ranks.
///
/// `Increasing` is 1..=N, `StartAtZero` is 0..=N-1, `Decreasing` is N..=1,
/// `Centered` places 0 in the middle for odd N (and skips 0 for even N),
/// `SpacedOut` is 2,4,..,2N and `Exponential` is 1,2,4,..,2^(N-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumberAssignment {
    #[default]
    Increasing,
    StartAtZero,
    Decreasing,
    Centered,
    SpacedOut,
    Exponential,
}

impl NumberAssignment {
    pub fn numbers<F: Scalar>(&self, n: usize) -> Vec<F> {
        match self {
            NumberAssignment::Increasing => (1..=n).map(|i| num(i as f64)).collect(),
            NumberAssignment::StartAtZero => (0..n).map(|i| num(i as f64)).collect(),
            NumberAssignment::Decreasing => (1..=n).rev().map(|i| num(i as f64)).collect(),
            NumberAssignment::Centered => {
                if n % 2 == 1 {
                    let k = (n as i64 - 1) / 2;
                    (-k..=k).map(|i| num(i as f64)).collect()
                } else {
                    let k = n as i64 / 2;
                    (-k..=k).filter(|&i| i != 0).map(|i| num(i as f64)).collect()
                }
            }
            NumberAssignment::SpacedOut => (1..=n).map(|i| num(2.0 * i as f64)).collect(),
            NumberAssignment::Exponential => {
                (0..n).map(|i| num((1u64 << i) as f64)).collect()
            }
        }
    }
}

/// An ordered rating scale with semi-quantitative numbers and optional
/// quantitative range bindings.
#[derive(Debug, Clone, PartialEq)]
pub struct OrdinalScale<F> {
    pub name: String,
    pub direction: Direction,
    pub kind: DistributionKind,
    levels: Vec<RankLevel<F>>,
}

/// A single problem found by [`OrdinalScale::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleFinding {
    pub kind: ScaleFindingKind,
    pub severity: Severity,
    /// Levels involved, by 1-based index.
    pub levels: Vec<usize>,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleFindingKind {
    NonMonotoneNumbers,
    DuplicateNumbers,
    PartialBindings,
    RangeGap,
    RangeOverlap,
    ZeroNumber,
}

impl<F: Scalar> OrdinalScale<F> {
    /// Build a scale from explicit levels. Only basic well-formedness is a
    /// hard error here; the softer invariants are reported by [`validate`].
    ///
    /// [`validate`]: OrdinalScale::validate
    pub fn from_levels(
        name: impl Into<String>,
        direction: Direction,
        kind: DistributionKind,
        levels: Vec<RankLevel<F>>,
    ) -> Result<Self, ScaleError> {
        if levels.is_empty() {
            return Err(ScaleError::NoLevels);
        }
        for (pos, level) in levels.iter().enumerate() {
            if level.index != pos + 1 {
                return Err(ScaleError::BadIndex {
                    position: pos + 1,
                    index: level.index,
                });
            }
            if level.label.trim().is_empty() {
                return Err(ScaleError::EmptyLabel { index: level.index });
            }
        }
        Ok(Self {
            name: name.into(),
            direction,
            kind,
            levels,
        })
    }

    /// Convenience constructor for unbound rating scales (labels + numbers).
    pub fn unbound(
        name: impl Into<String>,
        labels: &[&str],
        numbers: &[F],
    ) -> Result<Self, ScaleError> {
        let levels = labels
            .iter()
            .zip(numbers)
            .enumerate()
            .map(|(i, (label, &semi_quant))| RankLevel {
                index: i + 1,
                label: (*label).to_string(),
                semi_quant,
                range: None,
            })
            .collect();
        Self::from_levels(name, Direction::HigherIsRiskier, DistributionKind::Arbitrary, levels)
    }

    /// Partition a quantitative domain into `levels` ranks.
    ///
    /// The linear kind splits the domain evenly. The logarithmic kind is a
    /// decade partition anchored at the domain top, one decade per level, the
    /// lowest level absorbing the remainder down to the lower bound. The
    /// gaussian and inverse-gaussian kinds are fixed 5-level breakpoint
    /// tables (fractions 0/.1/.3/.7/.9/1 and 0/.3/.45/.55/.7/1 of the
    /// domain).
    pub fn partitioned(
        name: impl Into<String>,
        kind: DistributionKind,
        domain: QuantRange<F>,
        levels: usize,
        labels: Option<&[String]>,
        numbers: NumberAssignment,
    ) -> Result<Self, ScaleError> {
        if levels < 2 {
            return Err(ScaleError::TooFewLevels {
                required: 2,
                got: levels,
            });
        }
        if let Some(custom) = labels {
            if custom.len() != levels {
                return Err(ScaleError::LabelCountMismatch {
                    expected: levels,
                    got: custom.len(),
                });
            }
        }
        let boundaries = match kind {
            DistributionKind::Linear => {
                if !domain.is_bounded() {
                    return Err(ScaleError::InfiniteDomain { kind });
                }
                let width = domain.hi - domain.lo;
                (1..levels)
                    .map(|k| domain.lo + width * num::<F>(k as f64) / num(levels as f64))
                    .collect::<Vec<_>>()
            }
            DistributionKind::Logarithmic => {
                if !domain.is_bounded() {
                    return Err(ScaleError::InfiniteDomain { kind });
                }
                if domain.lo < F::zero() || domain.hi <= F::zero() {
                    return Err(ScaleError::NonPositiveLogDomain);
                }
                let ten = num::<F>(10.0);
                let bs: Vec<F> = (1..levels)
                    .map(|k| domain.hi / ten.powi((levels - k) as i32))
                    .collect();
                if bs[0] <= domain.lo {
                    return Err(ScaleError::LogBoundaryBelowDomain { levels });
                }
                bs
            }
            DistributionKind::Gaussian | DistributionKind::InverseGaussian => {
                if levels != 5 {
                    return Err(ScaleError::UnsupportedLevelCount {
                        kind,
                        expected: 5,
                        got: levels,
                    });
                }
                if !domain.is_bounded() {
                    return Err(ScaleError::InfiniteDomain { kind });
                }
                // tabulated breakpoints as integer hundredths of the domain
                let hundredths: [f64; 4] = if kind == DistributionKind::Gaussian {
                    [10.0, 30.0, 70.0, 90.0]
                } else {
                    [30.0, 45.0, 55.0, 70.0]
                };
                let width = domain.hi - domain.lo;
                hundredths
                    .iter()
                    .map(|&h| domain.lo + width * num::<F>(h) / num(100.0))
                    .collect()
            }
            DistributionKind::Arbitrary => return Err(ScaleError::ArbitraryPartition),
        };

        let semi = numbers.numbers::<F>(levels);
        let mut level_vec = Vec::with_capacity(levels);
        for i in 0..levels {
            let lo = if i == 0 { domain.lo } else { boundaries[i - 1] };
            let hi = if i == levels - 1 { domain.hi } else { boundaries[i] };
            let range = QuantRange::new(lo, hi, i == 0, true)?;
            let label = match labels {
                Some(custom) => custom[i].clone(),
                None => default_label(i, levels),
            };
            level_vec.push(RankLevel {
                index: i + 1,
                label,
                semi_quant: semi[i],
                range: Some(range),
            });
        }
        Self::from_levels(name, Direction::HigherIsRiskier, kind, level_vec)
    }

    pub fn levels(&self) -> &[RankLevel<F>] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn is_bound(&self) -> bool {
        self.levels.iter().all(|l| l.range.is_some())
    }

    pub fn level(&self, rank: usize) -> Result<&RankLevel<F>, ScaleError> {
        self.levels.get(rank.wrapping_sub(1)).ok_or(ScaleError::BadRank {
            rank,
            levels: self.levels.len(),
        })
    }

    pub fn semi_quant(&self, rank: usize) -> Result<F, ScaleError> {
        Ok(self.level(rank)?.semi_quant)
    }

    pub fn semi_quants(&self) -> impl Iterator<Item = F> + '_ {
        self.levels.iter().map(|l| l.semi_quant)
    }

    /// The declared domain `[first.lo, last.hi]`, when bound.
    pub fn domain(&self) -> Option<(F, F)> {
        let first = self.levels.first()?.range?;
        let last = self.levels.last()?.range?;
        Some((first.lo, last.hi))
    }

    /// Checks the soft invariants and returns findings (empty means the
    /// scale is fully well-formed, apart from warning-severity notes).
    pub fn validate(&self) -> Vec<ScaleFinding> {
        let mut findings = Vec::new();

        // semi-quantitative numbers: pairwise distinct, strictly monotone
        let numbers: Vec<F> = self.levels.iter().map(|l| l.semi_quant).collect();
        let increasing = numbers.windows(2).all(|w| w[0] < w[1]);
        let decreasing = numbers.windows(2).all(|w| w[0] > w[1]);
        if !increasing && !decreasing {
            let dup = numbers.windows(2).any(|w| w[0] == w[1]);
            findings.push(ScaleFinding {
                kind: if dup {
                    ScaleFindingKind::DuplicateNumbers
                } else {
                    ScaleFindingKind::NonMonotoneNumbers
                },
                severity: Severity::Violation,
                levels: (1..=self.levels.len()).collect(),
                message: format!(
                    "semi-quantitative numbers of '{}' are not strictly monotone",
                    self.name
                ),
            });
        }
        if numbers.iter().any(|&x| x == F::zero()) {
            findings.push(ScaleFinding {
                kind: ScaleFindingKind::ZeroNumber,
                severity: Severity::Warning,
                levels: self
                    .levels
                    .iter()
                    .filter(|l| l.semi_quant == F::zero())
                    .map(|l| l.index)
                    .collect(),
                message: format!(
                    "scale '{}' assigns 0 to a rank; a multiplicative combination would wipe out all other factors",
                    self.name
                ),
            });
        }

        // range bindings: all or none, contiguous, disjoint
        let bound = self.levels.iter().filter(|l| l.range.is_some()).count();
        if bound > 0 && bound < self.levels.len() {
            findings.push(ScaleFinding {
                kind: ScaleFindingKind::PartialBindings,
                severity: Severity::Violation,
                levels: self
                    .levels
                    .iter()
                    .filter(|l| l.range.is_none())
                    .map(|l| l.index)
                    .collect(),
                message: format!(
                    "scale '{}' binds ranges on some levels but not all",
                    self.name
                ),
            });
        }
        if bound == self.levels.len() {
            for w in self.levels.windows(2) {
                let cur = w[0].range.unwrap();
                let next = w[1].range.unwrap();
                let pair = vec![w[0].index, w[1].index];
                if next.lo > cur.hi || (next.lo == cur.hi && !cur.hi_inclusive && !next.lo_inclusive)
                {
                    findings.push(ScaleFinding {
                        kind: ScaleFindingKind::RangeGap,
                        severity: Severity::Violation,
                        levels: pair,
                        message: format!(
                            "gap between level {} and level {} of '{}': {} then {}",
                            w[0].index, w[1].index, self.name, cur, next
                        ),
                    });
                } else if next.lo < cur.hi
                    || (next.lo == cur.hi && cur.hi_inclusive && next.lo_inclusive)
                {
                    findings.push(ScaleFinding {
                        kind: ScaleFindingKind::RangeOverlap,
                        severity: Severity::Violation,
                        levels: pair,
                        message: format!(
                            "overlap between level {} and level {} of '{}': {} then {}",
                            w[0].index, w[1].index, self.name, cur, next
                        ),
                    });
                }
            }
        }
        findings
    }

    /// Classify a quantitative value to its rank. Values outside the domain
    /// are a hard error, never clamped.
    pub fn classify(&self, value: F) -> Result<usize, ScaleError> {
        if !self.is_bound() {
            return Err(ScaleError::Unbound);
        }
        for level in &self.levels {
            if level.range.unwrap().contains(value) {
                return Ok(level.index);
            }
        }
        let (lo, hi) = self.domain().unwrap();
        if value < lo || value > hi {
            Err(ScaleError::OutOfDomain {
                value: value.to_string(),
            })
        } else {
            Err(ScaleError::ValueInGap {
                value: value.to_string(),
            })
        }
    }

    /// Every rank whose range intersects the closed interval `[lo, hi]`.
    /// More than one rank signals uncertainty that single-rank
    /// classification would silently drop.
    pub fn classify_interval(&self, lo: F, hi: F) -> Result<Vec<usize>, ScaleError> {
        if !self.is_bound() {
            return Err(ScaleError::Unbound);
        }
        if !(lo <= hi) {
            return Err(ScaleError::BadInterval);
        }
        let (dlo, dhi) = self.domain().unwrap();
        if lo < dlo || hi > dhi {
            return Err(ScaleError::OutOfDomain {
                value: format!("[{lo}, {hi}]"),
            });
        }
        let ranks: Vec<usize> = self
            .levels
            .iter()
            .filter(|l| l.range.unwrap().intersects_closed(lo, hi))
            .map(|l| l.index)
            .collect();
        Ok(ranks)
    }

    /// The quantitative range bound to `rank`.
    pub fn rank_range(&self, rank: usize) -> Result<QuantRange<F>, ScaleError> {
        let level = self.level(rank)?;
        level.range.ok_or(ScaleError::Unbound)
    }

    /// Smallest relative perturbation `eps` such that scaling the value by
    /// `1 + eps` or `1 - eps` changes its classification. Returns 0 exactly
    /// when the value sits on an inclusive upper boundary.
    ///
    /// When no rank flip is reachable in either direction (single-level
    /// scales), the relative distance to leaving the domain is reported
    /// instead.
    pub fn boundary_sensitivity(&self, value: F) -> Result<F, ScaleError> {
        let rank = self.classify(value)?;
        if value <= F::zero() {
            let range = self.rank_range(rank)?;
            let d_lo = (value - range.lo).abs();
            let d_hi = if range.hi.is_finite() {
                (range.hi - value).abs()
            } else {
                F::infinity()
            };
            return Err(ScaleError::NonPositiveValue {
                absolute: d_lo.min(d_hi).to_string(),
            });
        }
        let range = self.rank_range(rank)?;
        let mut candidates: Vec<F> = Vec::new();
        if rank < self.levels.len() && range.hi.is_finite() {
            // moving up: the hi boundary belongs to this rank, so any
            // increase past it flips; at the boundary itself eps is 0
            candidates.push((range.hi - value) / value);
        }
        if rank > 1 {
            // moving down: the lo boundary belongs to the rank below
            candidates.push((value - range.lo) / value);
        }
        if candidates.is_empty() {
            let (dlo, dhi) = self.domain().unwrap();
            candidates.push((value - dlo) / value);
            if dhi.is_finite() {
                candidates.push((dhi - value) / value);
            }
        }
        Ok(candidates
            .into_iter()
            .fold(F::infinity(), |acc, x| acc.min(x)))
    }
}

fn default_label(i: usize, n: usize) -> String {
    let table: &[&str] = match n {
        3 => &["Low", "Medium", "High"],
        4 => &["Very Low", "Low", "High", "Very High"],
        5 => &["Very Low", "Low", "Medium", "High", "Very High"],
        _ => return format!("Level {}", i + 1),
    };
    table[i].to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn table2(kind: DistributionKind) -> OrdinalScale<f64> {
        OrdinalScale::partitioned(
            format!("{kind}"),
            kind,
            QuantRange::closed(0.0, 100.0).unwrap(),
            5,
            None,
            NumberAssignment::Increasing,
        )
        .unwrap()
    }

    #[test]
    fn linear_partition_reproduces_tabulated_ranges() {
        let scale = table2(DistributionKind::Linear);
        let r3 = scale.rank_range(3).unwrap();
        assert_eq!((r3.lo, r3.hi), (40.0, 60.0));
        assert!(!r3.lo_inclusive && r3.hi_inclusive);
        let r1 = scale.rank_range(1).unwrap();
        assert_eq!((r1.lo, r1.hi), (0.0, 20.0));
        assert!(r1.lo_inclusive);
    }

    #[test]
    fn logarithmic_partition_reproduces_tabulated_ranges() {
        let scale = table2(DistributionKind::Logarithmic);
        let r2 = scale.rank_range(2).unwrap();
        assert_relative_eq!(r2.lo, 0.01);
        assert_relative_eq!(r2.hi, 0.1);
        let r1 = scale.rank_range(1).unwrap();
        assert_relative_eq!(r1.hi, 0.01);
        assert_eq!(scale.rank_range(5).unwrap().hi, 100.0);
    }

    #[test]
    fn gaussian_partitions_reproduce_tabulated_ranges() {
        let g3 = table2(DistributionKind::Gaussian).rank_range(3).unwrap();
        assert_eq!((g3.lo, g3.hi), (30.0, 70.0));
        let ig3 = table2(DistributionKind::InverseGaussian)
            .rank_range(3)
            .unwrap();
        assert_eq!((ig3.lo, ig3.hi), (45.0, 55.0));
    }

    #[test]
    fn single_level_partition_is_rejected() {
        let err = OrdinalScale::<f64>::partitioned(
            "one",
            DistributionKind::Linear,
            QuantRange::closed(0.0, 100.0).unwrap(),
            1,
            None,
            NumberAssignment::Increasing,
        )
        .unwrap_err();
        assert_eq!(err, ScaleError::TooFewLevels { required: 2, got: 1 });
    }

    #[test]
    fn gaussian_needs_five_levels() {
        let err = OrdinalScale::<f64>::partitioned(
            "g4",
            DistributionKind::Gaussian,
            QuantRange::closed(0.0, 100.0).unwrap(),
            4,
            None,
            NumberAssignment::Increasing,
        )
        .unwrap_err();
        assert!(matches!(err, ScaleError::UnsupportedLevelCount { .. }));
    }

    #[test]
    fn classification_follows_boundary_convention() {
        let log = table2(DistributionKind::Logarithmic);
        assert_eq!(log.classify(0.5).unwrap(), 3);
        assert_eq!(log.classify(0.1).unwrap(), 2); // hi-inclusive
        let lin = table2(DistributionKind::Linear);
        assert_eq!(lin.classify(0.0).unwrap(), 1); // domain lo belongs to level 1
        assert_eq!(lin.classify(20.0).unwrap(), 1);
        assert!(matches!(
            lin.classify(100.5),
            Err(ScaleError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn interval_classification_collects_intersecting_ranks() {
        let log = table2(DistributionKind::Logarithmic);
        assert_eq!(log.classify_interval(0.05, 5.0).unwrap(), vec![2, 3, 4]);
        assert_eq!(log.classify_interval(0.5, 0.5).unwrap(), vec![3]);
        let lin = table2(DistributionKind::Linear);
        assert_eq!(
            lin.classify_interval(0.0, 100.0).unwrap(),
            vec![1, 2, 3, 4, 5]
        );
        assert!(lin.classify_interval(-1.0, 5.0).is_err());
    }

    #[test]
    fn unbounded_top_level_range() {
        let scale = OrdinalScale::from_levels(
            "leakage",
            Direction::HigherIsRiskier,
            DistributionKind::Arbitrary,
            vec![
                RankLevel {
                    index: 1,
                    label: "Low".into(),
                    semi_quant: 1.0,
                    range: Some(QuantRange::closed(0.0, 0.1).unwrap()),
                },
                RankLevel {
                    index: 2,
                    label: "High".into(),
                    semi_quant: 2.0,
                    range: Some(QuantRange::above(0.1).unwrap()),
                },
            ],
        )
        .unwrap();
        assert!(scale.validate().is_empty());
        assert_eq!(scale.classify(1e9).unwrap(), 2);
        assert_eq!(scale.rank_range(2).unwrap().hi, f64::INFINITY);
    }

    #[test]
    fn validate_reports_gap_between_levels() {
        let scale = OrdinalScale::from_levels(
            "exposure",
            Direction::HigherIsRiskier,
            DistributionKind::Arbitrary,
            vec![
                RankLevel {
                    index: 1,
                    label: "E2".into(),
                    semi_quant: 1.0,
                    range: Some(QuantRange::closed(0.0, 6.0).unwrap()),
                },
                RankLevel {
                    index: 2,
                    label: "E3".into(),
                    semi_quant: 2.0,
                    range: Some(QuantRange::new(12.0, f64::INFINITY, true, false).unwrap()),
                },
            ],
        )
        .unwrap();
        let findings = scale.validate();
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].kind, ScaleFindingKind::RangeGap);
        assert_eq!(findings[0].levels, vec![1, 2]);
        assert!(matches!(
            scale.classify(9.0),
            Err(ScaleError::ValueInGap { .. })
        ));
    }

    #[test]
    fn validate_accepts_tabulated_scales_and_flags_zero_numbers() {
        assert!(table2(DistributionKind::Linear).validate().is_empty());
        let zero = OrdinalScale::partitioned(
            "zero",
            DistributionKind::Linear,
            QuantRange::closed(0.0, 100.0).unwrap(),
            5,
            None,
            NumberAssignment::StartAtZero,
        )
        .unwrap();
        let findings = zero.validate();
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].kind, ScaleFindingKind::ZeroNumber);
        assert_eq!(findings[0].severity, Severity::Warning);
    }

    #[test]
    fn validate_reports_overlap() {
        let scale = OrdinalScale::from_levels(
            "overlapping",
            Direction::HigherIsRiskier,
            DistributionKind::Arbitrary,
            vec![
                RankLevel {
                    index: 1,
                    label: "a".into(),
                    semi_quant: 1.0,
                    range: Some(QuantRange::closed(0.0, 10.0).unwrap()),
                },
                RankLevel {
                    index: 2,
                    label: "b".into(),
                    semi_quant: 2.0,
                    range: Some(QuantRange::half_open(5.0, 20.0).unwrap()),
                },
            ],
        )
        .unwrap();
        assert_eq!(scale.validate()[0].kind, ScaleFindingKind::RangeOverlap);
    }

    #[test]
    fn boundary_sensitivity_examples() {
        let lin = table2(DistributionKind::Linear);
        assert_relative_eq!(lin.boundary_sensitivity(30.0).unwrap(), 1.0 / 3.0);
        assert_eq!(lin.boundary_sensitivity(20.0).unwrap(), 0.0);
        let log = table2(DistributionKind::Logarithmic);
        assert_relative_eq!(
            log.boundary_sensitivity(0.11).unwrap(),
            (0.11 - 0.1) / 0.11,
            epsilon = 1e-12
        );
        assert!(matches!(
            lin.boundary_sensitivity(0.0),
            Err(ScaleError::NonPositiveValue { .. })
        ));
    }

    #[test]
    fn number_assignments_match_tabulated_columns() {
        assert_eq!(
            NumberAssignment::Increasing.numbers::<f64>(5),
            vec![1.0, 2.0, 3.0, 4.0, 5.0]
        );
        assert_eq!(
            NumberAssignment::StartAtZero.numbers::<f64>(5),
            vec![0.0, 1.0, 2.0, 3.0, 4.0]
        );
        assert_eq!(
            NumberAssignment::Decreasing.numbers::<f64>(5),
            vec![5.0, 4.0, 3.0, 2.0, 1.0]
        );
        assert_eq!(
            NumberAssignment::Centered.numbers::<f64>(5),
            vec![-2.0, -1.0, 0.0, 1.0, 2.0]
        );
        assert_eq!(
            NumberAssignment::SpacedOut.numbers::<f64>(5),
            vec![2.0, 4.0, 6.0, 8.0, 10.0]
        );
        assert_eq!(
            NumberAssignment::Exponential.numbers::<f64>(5),
            vec![1.0, 2.0, 4.0, 8.0, 16.0]
        );
    }
}
