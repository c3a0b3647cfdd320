//! Turning an aggregated ranking plus per-user direction votes into a signed
//! initial weight vector in [-1, 1]: negate the scores of features the
//! majority marked as negatively important, then min-max rescale the signed
//! vector into [-1, 1], in exactly that order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rank::{AggregateResult, AggregationMethod};

/// Per-feature tallies of {+1, -1} direction votes across users.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionVotes {
    positive: Vec<u32>,
    negative: Vec<u32>,
}

impl DirectionVotes {
    /// Build tallies from per-user sign rows (one row per user, schema feature
    /// order, entries in {+1, -1}).
    pub fn from_user_signs(rows: &[Vec<i8>]) -> Result<Self> {
        let f = rows
            .first()
            .ok_or_else(|| Error::InvalidArgument("no direction votes".into()))?
            .len();
        let mut positive = vec![0u32; f];
        let mut negative = vec![0u32; f];
        for row in rows {
            if row.len() != f {
                return Err(Error::DimensionMismatch {
                    expected: f,
                    got: row.len(),
                });
            }
            for (j, &sign) in row.iter().enumerate() {
                match sign {
                    1 => positive[j] += 1,
                    -1 => negative[j] += 1,
                    other => {
                        return Err(Error::InvalidArgument(format!(
                            "direction vote must be +1 or -1, got {other}"
                        )))
                    }
                }
            }
        }
        Ok(Self { positive, negative })
    }

    pub fn feature_count(&self) -> usize {
        self.positive.len()
    }

    pub fn tallies(&self, feature: usize) -> (u32, u32) {
        (self.positive[feature], self.negative[feature])
    }
}

/// Per-feature majority vote: -1 only when strictly more than half of a
/// feature's voters marked it negative; ties go to +1.
pub fn resolve_directions(votes: &DirectionVotes) -> Result<Vec<i8>> {
    let mut signs = Vec::with_capacity(votes.feature_count());
    for j in 0..votes.feature_count() {
        let (pos, neg) = votes.tallies(j);
        let total = pos + neg;
        if total == 0 {
            return Err(Error::InvalidArgument(format!(
                "feature {j} has no direction votes"
            )));
        }
        signs.push(if 2 * neg > total { -1 } else { 1 });
    }
    Ok(signs)
}

/// Aggregated, sign-adjusted, min-max-scaled weight vector in [-1, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedWeights {
    pub feature_names: Vec<String>,
    pub values: Vec<f64>,
    pub provenance: AggregationMethod,
    /// True when the signed scores were all equal and the zero-vector
    /// fallback fired.
    pub degenerate: bool,
}

impl SeedWeights {
    pub fn feature_count(&self) -> usize {
        self.values.len()
    }

    fn check_invariants(&self) -> Result<()> {
        if self.values.len() != self.feature_names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_names.len(),
                got: self.values.len(),
            });
        }
        if self.values.len() < 2 {
            return Err(Error::InvalidArgument(
                "seed weights need at least two features".into(),
            ));
        }
        for &v in &self.values {
            if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "seed weight {v} outside [-1, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Apply direction signs to the aggregate scores, then min-max rescale the
/// signed vector into [-1, 1].
///
/// All-equal signed scores cannot be rescaled; they fall back to the zero
/// vector with the `degenerate` flag set.
pub fn seed_from_aggregate(
    agg: &AggregateResult,
    signs: &[i8],
    feature_names: &[String],
) -> Result<SeedWeights> {
    let f = agg.scores.len();
    if f < 2 {
        return Err(Error::InvalidArgument(
            "seeding needs at least two features".into(),
        ));
    }
    if signs.len() != f {
        return Err(Error::DimensionMismatch {
            expected: f,
            got: signs.len(),
        });
    }
    if feature_names.len() != f {
        return Err(Error::DimensionMismatch {
            expected: f,
            got: feature_names.len(),
        });
    }
    if agg.scores.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite aggregate score".into()));
    }
    let mut signed: Vec<f64> = agg
        .scores
        .iter()
        .zip(signs)
        .map(|(&s, &sign)| if sign < 0 { -s } else { s })
        .collect();
    let cur_min = signed.iter().cloned().fold(f64::INFINITY, f64::min);
    let cur_max = signed.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let degenerate = cur_max == cur_min;
    if degenerate {
        signed.iter_mut().for_each(|v| *v = 0.0);
    } else {
        for v in &mut signed {
            *v = -1.0 + 2.0 * (*v - cur_min) / (cur_max - cur_min);
        }
    }
    let sw = SeedWeights {
        feature_names: feature_names.to_vec(),
        values: signed,
        provenance: agg.method,
        degenerate,
    };
    sw.check_invariants()?;
    Ok(sw)
}

/// Write a seed-weight file (JSON; f64 values round-trip losslessly).
pub fn seed_to_file(sw: &SeedWeights, path: impl AsRef<Path>) -> Result<()> {
    sw.check_invariants()?;
    let text = serde_json::to_string_pretty(sw)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Read a seed-weight file, validating range and arity. When
/// `expected_features` is given, the stored name list must match it exactly.
pub fn seed_from_file(
    path: impl AsRef<Path>,
    expected_features: Option<&[String]>,
) -> Result<SeedWeights> {
    let text = std::fs::read_to_string(path)?;
    let sw: SeedWeights = serde_json::from_str(&text)?;
    sw.check_invariants()?;
    if let Some(expected) = expected_features {
        if sw.feature_names != expected {
            return Err(Error::InvalidSchema(format!(
                "seed file features {:?} do not match schema {:?}",
                sw.feature_names, expected
            )));
        }
    }
    Ok(sw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::Ranking;

    fn names(f: usize) -> Vec<String> {
        (0..f).map(|i| format!("f{i}")).collect()
    }

    fn agg(scores: &[f64]) -> AggregateResult {
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
        AggregateResult {
            ranking: Ranking::new(order).unwrap(),
            scores: scores.to_vec(),
            method: AggregationMethod::Borda,
            cost: None,
        }
    }

    #[test]
    fn resolve_directions_majority_and_ties() {
        // 4 of 5 negative -> -1
        let votes = DirectionVotes::from_user_signs(&[
            vec![-1, 1],
            vec![-1, 1],
            vec![-1, 1],
            vec![-1, -1],
            vec![1, 1],
        ])
        .unwrap();
        assert_eq!(resolve_directions(&votes).unwrap(), vec![-1, 1]);
        // 2 vs 2 tie -> +1
        let votes =
            DirectionVotes::from_user_signs(&[vec![-1], vec![-1], vec![1], vec![1]]).unwrap();
        assert_eq!(resolve_directions(&votes).unwrap(), vec![1]);
        // all positive
        let votes = DirectionVotes::from_user_signs(&[vec![1, 1, 1]]).unwrap();
        assert_eq!(resolve_directions(&votes).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn seed_worked_examples() {
        let sw = seed_from_aggregate(&agg(&[2.0, 4.0, 6.0]), &[1, 1, 1], &names(3)).unwrap();
        assert_eq!(sw.values, vec![-1.0, 0.0, 1.0]);
        assert!(!sw.degenerate);

        // negate first, then scale: (3,2,1) with signs (+,+,-) -> (3,2,-1) -> (1,0.5,-1)
        let sw = seed_from_aggregate(&agg(&[3.0, 2.0, 1.0]), &[1, 1, -1], &names(3)).unwrap();
        assert_eq!(sw.values, vec![1.0, 0.5, -1.0]);
    }

    #[test]
    fn seed_degenerate_all_equal() {
        let sw = seed_from_aggregate(&agg(&[2.0, 2.0, 2.0]), &[1, 1, 1], &names(3)).unwrap();
        assert_eq!(sw.values, vec![0.0, 0.0, 0.0]);
        assert!(sw.degenerate);
    }

    #[test]
    fn seed_scale_invariance() {
        let signs = [1, 1, -1, 1];
        let scores = [5.0, 1.0, 3.0, 2.0];
        let base = seed_from_aggregate(&agg(&scores), &signs, &names(4)).unwrap();
        // positive rescaling of the raw scores leaves the output unchanged
        let scaled: Vec<f64> = scores.iter().map(|v| 7.25 * v).collect();
        let other = seed_from_aggregate(&agg(&scaled), &signs, &names(4)).unwrap();
        for (a, b) in base.values.iter().zip(&other.values) {
            assert!((a - b).abs() < 1e-12);
        }
        // affine shifts are also absorbed when every sign is positive
        let shifted: Vec<f64> = scores.iter().map(|v| 3.0 * v + 11.0).collect();
        let base_pos = seed_from_aggregate(&agg(&scores), &[1; 4], &names(4)).unwrap();
        let other_pos = seed_from_aggregate(&agg(&shifted), &[1; 4], &names(4)).unwrap();
        for (a, b) in base_pos.values.iter().zip(&other_pos.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn seed_endpoints_attained() {
        let sw = seed_from_aggregate(&agg(&[9.0, 4.0, 1.0, 7.0]), &[1, -1, 1, 1], &names(4))
            .unwrap();
        let max = sw.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = sw.values.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(max, 1.0);
        assert_eq!(min, -1.0);
    }

    #[test]
    fn seed_file_roundtrip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("seeds.json");
        let sw = seed_from_aggregate(&agg(&[3.0, 1.0, 2.0]), &[1, -1, 1], &names(3)).unwrap();
        seed_to_file(&sw, &path).unwrap();
        let back = seed_from_file(&path, Some(&names(3))).unwrap();
        assert_eq!(sw, back);

        // out-of-range value
        let mut bad = sw.clone();
        bad.values[0] = 1.5;
        let text = serde_json::to_string(&bad).unwrap();
        std::fs::write(&path, text).unwrap();
        assert!(seed_from_file(&path, None).is_err());

        // arity mismatch against the expected schema
        seed_to_file(&sw, &path).unwrap();
        assert!(seed_from_file(&path, Some(&names(4))).is_err());
    }
}
