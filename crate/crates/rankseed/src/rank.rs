//! Ranking profiles and rank aggregation: exact Kemeny-Young via bitmask
//! dynamic programming, the MC4 Markov-chain aggregator and a Borda baseline,
//! all on top of the Kendall-tau distance.
//!
//! Aggregators are deterministic: ties are always broken towards the smaller
//! feature index, and Kemeny returns the lexicographically smallest optimal
//! permutation.

use std::collections::BTreeMap;
use std::path::Path;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::dataset::FeatureSchema;
use crate::error::{Error, Result};

/// Feature count bound for the exact Kemeny solver (2^F DP table).
pub const KEMENY_MAX_FEATURES: usize = 20;
/// Feature count bound for the brute-force Kemeny oracle (F! permutations).
pub const BRUTE_FORCE_MAX_FEATURES: usize = 8;

/// One user's strict ordering of the feature indices, position 0 = most
/// important.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranking {
    order: Vec<usize>,
}

impl Ranking {
    /// `order` must be a permutation of `0..F`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let f = order.len();
        if f == 0 {
            return Err(Error::InvalidArgument("empty ranking".into()));
        }
        let mut seen = vec![false; f];
        for &item in &order {
            if item >= f || seen[item] {
                return Err(Error::InvalidArgument(format!(
                    "ranking {order:?} is not a permutation of 0..{f}"
                )));
            }
            seen[item] = true;
        }
        Ok(Self { order })
    }

    pub fn identity(f: usize) -> Self {
        Self {
            order: (0..f).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Items from most to least important.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `positions()[item]` = rank position of `item` (0 = top).
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &item) in self.order.iter().enumerate() {
            pos[item] = p;
        }
        pos
    }
}

/// The multiset of all users' rankings over one feature set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingProfile {
    rankings: Vec<Ranking>,
    user_ids: Vec<String>,
}

impl RankingProfile {
    pub fn new(rankings: Vec<Ranking>, user_ids: Vec<String>) -> Result<Self> {
        if rankings.is_empty() {
            return Err(Error::InvalidArgument("profile needs at least one ranking".into()));
        }
        if rankings.len() != user_ids.len() {
            return Err(Error::DimensionMismatch {
                expected: rankings.len(),
                got: user_ids.len(),
            });
        }
        let f = rankings[0].len();
        for r in &rankings {
            if r.len() != f {
                return Err(Error::DimensionMismatch {
                    expected: f,
                    got: r.len(),
                });
            }
        }
        Ok(Self { rankings, user_ids })
    }

    pub fn feature_count(&self) -> usize {
        self.rankings[0].len()
    }

    pub fn user_count(&self) -> usize {
        self.rankings.len()
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    pub fn user_ids(&self) -> &[String] {
        &self.user_ids
    }

    /// `counts[i][j]` = number of users ranking item `i` above item `j`.
    pub fn pairwise_counts(&self) -> Vec<Vec<u64>> {
        let f = self.feature_count();
        let mut counts = vec![vec![0u64; f]; f];
        for r in &self.rankings {
            let pos = r.positions();
            for i in 0..f {
                for j in 0..f {
                    if i != j && pos[i] < pos[j] {
                        counts[i][j] += 1;
                    }
                }
            }
        }
        counts
    }
}

/// Which aggregator produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AggregationMethod {
    KemenyYoung,
    Mc4,
    Borda,
}

impl AggregationMethod {
    pub fn name(&self) -> &'static str {
        match self {
            AggregationMethod::KemenyYoung => "kemeny_young",
            AggregationMethod::Mc4 => "mc4",
            AggregationMethod::Borda => "borda",
        }
    }
}

impl std::str::FromStr for AggregationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kemeny" | "kemeny_young" => Ok(AggregationMethod::KemenyYoung),
            "mc4" => Ok(AggregationMethod::Mc4),
            "borda" | "majority" => Ok(AggregationMethod::Borda),
            other => Err(Error::InvalidArgument(format!(
                "unknown aggregation method {other:?} (expected kemeny, mc4 or borda)"
            ))),
        }
    }
}

/// An aggregated ranking with per-feature scores (higher = more important).
///
/// Sorting `scores` descending with ties to the smaller index always
/// reproduces `ranking`.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateResult {
    pub ranking: Ranking,
    pub scores: Vec<f64>,
    pub method: AggregationMethod,
    /// Total Kendall-tau distance to the profile (Kemeny only).
    pub cost: Option<u64>,
}

fn ranking_from_scores(scores: &[f64]) -> Ranking {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    Ranking { order }
}

/// Positional scores for a pure ranking: top item gets F, last gets 1.
fn positional_scores(ranking: &Ranking) -> Vec<f64> {
    let f = ranking.len();
    let pos = ranking.positions();
    (0..f).map(|i| (f - pos[i]) as f64).collect()
}

/// Number of unordered item pairs on which two rankings disagree.
pub fn kendall_tau(a: &Ranking, b: &Ranking) -> Result<u64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let pa = a.positions();
    let pb = b.positions();
    let f = a.len();
    let mut disagreements = 0;
    for i in 0..f {
        for j in (i + 1)..f {
            let da = pa[i] < pa[j];
            let db = pb[i] < pb[j];
            if da != db {
                disagreements += 1;
            }
        }
    }
    Ok(disagreements)
}

/// Sum of Kendall-tau distances from `a` to every ranking of the profile.
pub fn profile_distance(a: &Ranking, profile: &RankingProfile) -> Result<u64> {
    let mut total = 0;
    for r in profile.rankings() {
        total += kendall_tau(a, r)?;
    }
    Ok(total)
}

/// Positionally weighted Kendall-tau disagreement.
///
/// Each disagreeing pair `(f, f')` (f above f' in `a`, f' above f in `b`)
/// contributes `(k - 2) * |below_f(a) ∪ below_f'(b)|`, where `below_c(r)` is
/// the set of items ranked under `c` in `r`. With `k = 2` the inner sum is
/// empty and the plain Kendall-tau count is returned instead.
pub fn weighted_kendall_tau(a: &Ranking, b: &Ranking, k: usize) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let f = a.len();
    if k < 2 || k > f.max(2) {
        return Err(Error::InvalidArgument(format!(
            "k must lie in 2..={}, got {k}",
            f.max(2)
        )));
    }
    if k == 2 {
        return Ok(kendall_tau(a, b)? as f64);
    }
    let pa = a.positions();
    let pb = b.positions();
    let mut total = 0.0;
    for i in 0..f {
        for j in 0..f {
            if i == j {
                continue;
            }
            // disagree: i above j in a, j above i in b
            if pa[i] < pa[j] && pb[j] < pb[i] {
                let union = (0..f)
                    .filter(|&c| pa[c] > pa[i] || pb[c] > pb[j])
                    .count();
                total += (k - 2) as f64 * union as f64;
            }
        }
    }
    Ok(total)
}

/// Exact Kemeny-Young aggregation by Held-Karp style dynamic programming over
/// feature subsets.
///
/// `best[S]` is the cheapest way to order the complement of `S` after a prefix
/// containing exactly the items of `S`; appending item `f` behind `S` costs one
/// disagreement per (voter, g ∈ S) pair where the voter ranks `f` above `g`.
/// The optimal permutation is reconstructed front-to-back, preferring the
/// smallest feature index, which yields the lexicographically smallest
/// minimizer.
pub fn kemeny_young(profile: &RankingProfile) -> Result<AggregateResult> {
    let f = profile.feature_count();
    if f > KEMENY_MAX_FEATURES {
        return Err(Error::FeatureCountBound {
            got: f,
            bound: KEMENY_MAX_FEATURES,
        });
    }
    let counts = profile.pairwise_counts();
    let full: usize = (1usize << f) - 1;
    // append_cost(S, f) = sum over g in S of counts[f][g]
    let mut best = vec![u64::MAX; 1 << f];
    best[full] = 0;
    for s in (0..full).rev() {
        let mut m = u64::MAX;
        for item in 0..f {
            if s & (1 << item) != 0 {
                continue;
            }
            let mut cost = 0;
            for g in 0..f {
                if s & (1 << g) != 0 {
                    cost += counts[item][g];
                }
            }
            let total = cost + best[s | (1 << item)];
            if total < m {
                m = total;
            }
        }
        best[s] = m;
    }

    let mut order = Vec::with_capacity(f);
    let mut s = 0usize;
    while s != full {
        for item in 0..f {
            if s & (1 << item) != 0 {
                continue;
            }
            let mut cost = 0;
            for g in 0..f {
                if s & (1 << g) != 0 {
                    cost += counts[item][g];
                }
            }
            if cost + best[s | (1 << item)] == best[s] {
                order.push(item);
                s |= 1 << item;
                break;
            }
        }
    }
    let ranking = Ranking { order };
    let scores = positional_scores(&ranking);
    Ok(AggregateResult {
        ranking,
        scores,
        method: AggregationMethod::KemenyYoung,
        cost: Some(best[0]),
    })
}

/// Exhaustive Kemeny minimizer over all F! permutations, same tie-break rule
/// as `kemeny_young`. Test oracle; F ≤ 8.
pub fn kemeny_brute_force(profile: &RankingProfile) -> Result<AggregateResult> {
    let f = profile.feature_count();
    if f > BRUTE_FORCE_MAX_FEATURES {
        return Err(Error::FeatureCountBound {
            got: f,
            bound: BRUTE_FORCE_MAX_FEATURES,
        });
    }
    let counts = profile.pairwise_counts();
    let mut best_order: Option<Vec<usize>> = None;
    let mut best_cost = u64::MAX;
    for perm in (0..f).permutations(f) {
        // cost = disagreements: for each ordered pair (earlier e, later l),
        // voters ranking l above e disagree.
        let mut cost = 0;
        for i in 0..f {
            for j in (i + 1)..f {
                cost += counts[perm[j]][perm[i]];
            }
        }
        // `permutations` yields lexicographic order, so strict improvement
        // keeps the lexicographically smallest minimizer.
        if cost < best_cost {
            best_cost = cost;
            best_order = Some(perm);
        }
    }
    let ranking = Ranking {
        order: best_order.expect("at least one permutation"),
    };
    let scores = positional_scores(&ranking);
    Ok(AggregateResult {
        ranking,
        scores,
        method: AggregationMethod::KemenyYoung,
        cost: Some(best_cost),
    })
}

/// Row-stochastic F×F transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    entries: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        let f = entries.len();
        for row in &entries {
            if row.len() != f {
                return Err(Error::DimensionMismatch {
                    expected: f,
                    got: row.len(),
                });
            }
            if row.iter().any(|&v| v < 0.0) {
                return Err(Error::InvalidArgument("negative transition probability".into()));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "row sum {sum} deviates from 1 by more than 1e-12"
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }
}

/// MC4 transition matrix: from state `i`, move to state `j ≠ i` with
/// probability 1/F when a strict majority of the profile ranks `j` above `i`,
/// otherwise stay.
pub fn mc4_transition_matrix(profile: &RankingProfile) -> TransitionMatrix {
    let f = profile.feature_count();
    let h = profile.user_count() as u64;
    let counts = profile.pairwise_counts();
    let mut entries = vec![vec![0.0; f]; f];
    for i in 0..f {
        let mut stay = 1.0;
        for j in 0..f {
            if i != j && 2 * counts[j][i] > h {
                entries[i][j] = 1.0 / f as f64;
                stay -= 1.0 / f as f64;
            }
        }
        entries[i][i] = stay;
    }
    TransitionMatrix::new(entries).expect("construction is row-stochastic")
}

/// Left power iteration `r ← r T` starting from the uniform vector, returning
/// every iterate including the start. Stops after `iterations` steps or once
/// the L1 change falls below `tol`.
pub fn power_iteration_trace(
    matrix: &TransitionMatrix,
    iterations: usize,
    tol: f64,
) -> Vec<Vec<f64>> {
    let f = matrix.size();
    let mut r = vec![1.0 / f as f64; f];
    let mut trace = vec![r.clone()];
    for _ in 0..iterations {
        let mut next = vec![0.0; f];
        for (i, weight) in r.iter().enumerate() {
            for (j, p) in matrix.entries[i].iter().enumerate() {
                next[j] += weight * p;
            }
        }
        let change: f64 = r.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        r = next;
        trace.push(r.clone());
        if change < tol {
            break;
        }
    }
    trace
}

/// Default iteration cap for `mc4`.
pub const MC4_DEFAULT_ITERATIONS: usize = 100;
/// L1 early-exit threshold for the MC4 power iteration.
pub const MC4_CONVERGENCE_TOL: f64 = 1e-10;

/// MC4 aggregation: majority-preference Markov chain, scored by the power
/// iteration vector after at most `iterations` steps.
pub fn mc4(profile: &RankingProfile, iterations: usize) -> Result<AggregateResult> {
    if iterations == 0 {
        return Err(Error::InvalidArgument("iterations must be positive".into()));
    }
    let matrix = mc4_transition_matrix(profile);
    let trace = power_iteration_trace(&matrix, iterations, MC4_CONVERGENCE_TOL);
    let scores = trace.last().expect("trace is non-empty").clone();
    Ok(AggregateResult {
        ranking: ranking_from_scores(&scores),
        scores,
        method: AggregationMethod::Mc4,
        cost: None,
    })
}

/// Borda baseline: score of an item is its mean positional score
/// `F - position` across users.
pub fn borda(profile: &RankingProfile) -> Result<AggregateResult> {
    let f = profile.feature_count();
    let h = profile.user_count() as f64;
    let mut scores = vec![0.0; f];
    for r in profile.rankings() {
        let pos = r.positions();
        for i in 0..f {
            scores[i] += (f - pos[i]) as f64;
        }
    }
    for s in &mut scores {
        *s /= h;
    }
    Ok(AggregateResult {
        ranking: ranking_from_scores(&scores),
        scores,
        method: AggregationMethod::Borda,
        cost: None,
    })
}

/// Run the chosen aggregator with its default settings.
pub fn aggregate(profile: &RankingProfile, method: AggregationMethod) -> Result<AggregateResult> {
    match method {
        AggregationMethod::KemenyYoung => kemeny_young(profile),
        AggregationMethod::Mc4 => mc4(profile, MC4_DEFAULT_ITERATIONS),
        AggregationMethod::Borda => borda(profile),
    }
}

/// One user's entry in a profile file: ranking by feature name (most important
/// first) plus a per-feature direction flag in {+1, -1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub user_id: String,
    pub ranking: Vec<String>,
    pub directions: BTreeMap<String, i8>,
}

/// On-disk ranking-profile document (JSON).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ProfileDocument {
    pub features: Vec<String>,
    pub users: Vec<ProfileEntry>,
}

impl ProfileDocument {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Validate one entry against the document's feature list: complete
    /// permutation, no unknown names, every feature carries a direction flag.
    pub fn validate_entry(&self, entry: &ProfileEntry) -> Result<()> {
        if entry.ranking.len() != self.features.len() {
            return Err(Error::InvalidArgument(format!(
                "ranking lists {} features, schema has {}",
                entry.ranking.len(),
                self.features.len()
            )));
        }
        let mut seen = vec![false; self.features.len()];
        for name in &entry.ranking {
            let idx = self
                .features
                .iter()
                .position(|f| f == name)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("unknown feature {name:?} in ranking"))
                })?;
            if seen[idx] {
                return Err(Error::InvalidArgument(format!(
                    "feature {name:?} listed twice in ranking"
                )));
            }
            seen[idx] = true;
        }
        for name in &self.features {
            match entry.directions.get(name) {
                Some(&d) if d == 1 || d == -1 => {}
                Some(&d) => {
                    return Err(Error::InvalidArgument(format!(
                        "direction for {name:?} must be +1 or -1, got {d}"
                    )))
                }
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "missing direction flag for feature {name:?}"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn push_entry(&mut self, entry: ProfileEntry) -> Result<()> {
        self.validate_entry(&entry)?;
        self.users.push(entry);
        Ok(())
    }

    /// Convert to an index-based profile plus per-user direction sign rows
    /// (schema feature order). `schema`, when given, must match the document's
    /// feature list.
    pub fn to_profile(
        &self,
        schema: Option<&FeatureSchema>,
    ) -> Result<(RankingProfile, Vec<Vec<i8>>)> {
        if let Some(schema) = schema {
            if schema.feature_names() != self.features.as_slice() {
                return Err(Error::InvalidSchema(format!(
                    "profile features {:?} do not match schema {:?}",
                    self.features,
                    schema.feature_names()
                )));
            }
        }
        if self.users.is_empty() {
            return Err(Error::InvalidArgument("profile file has no users".into()));
        }
        let mut rankings = Vec::new();
        let mut user_ids = Vec::new();
        let mut signs = Vec::new();
        for entry in &self.users {
            self.validate_entry(entry)?;
            let order = entry
                .ranking
                .iter()
                .map(|name| self.features.iter().position(|f| f == name).unwrap())
                .collect();
            rankings.push(Ranking::new(order)?);
            user_ids.push(entry.user_id.clone());
            signs.push(
                self.features
                    .iter()
                    .map(|name| entry.directions[name])
                    .collect(),
            );
        }
        Ok((RankingProfile::new(rankings, user_ids)?, signs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn ranking(order: &[usize]) -> Ranking {
        Ranking::new(order.to_vec()).unwrap()
    }

    pub(crate) fn profile(orders: &[&[usize]]) -> RankingProfile {
        let rankings = orders.iter().map(|o| ranking(o)).collect();
        let ids = (0..orders.len()).map(|i| format!("u{i}")).collect();
        RankingProfile::new(rankings, ids).unwrap()
    }

    pub(crate) fn random_profile(rng: &mut ChaCha8Rng, f: usize, h: usize) -> RankingProfile {
        let mut rankings = Vec::with_capacity(h);
        for _ in 0..h {
            let mut order: Vec<usize> = (0..f).collect();
            order.shuffle(rng);
            rankings.push(Ranking::new(order).unwrap());
        }
        let ids = (0..h).map(|i| format!("u{i}")).collect();
        RankingProfile::new(rankings, ids).unwrap()
    }

    #[test]
    fn ranking_validation() {
        assert!(Ranking::new(vec![0, 1, 2]).is_ok());
        assert!(Ranking::new(vec![0, 0, 2]).is_err());
        assert!(Ranking::new(vec![0, 3]).is_err());
        assert!(Ranking::new(vec![]).is_err());
    }

    #[test]
    fn kendall_tau_basics() {
        // (A,B,C) vs itself, reversal, one swap
        let abc = ranking(&[0, 1, 2]);
        assert_eq!(kendall_tau(&abc, &abc).unwrap(), 0);
        assert_eq!(kendall_tau(&abc, &ranking(&[2, 1, 0])).unwrap(), 3);
        assert_eq!(kendall_tau(&abc, &ranking(&[1, 0, 2])).unwrap(), 1);
        assert!(kendall_tau(&abc, &ranking(&[0, 1])).is_err());
    }

    #[test]
    fn profile_distance_examples() {
        let abc = ranking(&[0, 1, 2]);
        assert_eq!(
            profile_distance(&abc, &profile(&[&[0, 1, 2], &[0, 1, 2]])).unwrap(),
            0
        );
        assert_eq!(
            profile_distance(&abc, &profile(&[&[0, 1, 2], &[1, 0, 2]])).unwrap(),
            1
        );
        assert_eq!(
            profile_distance(&ranking(&[2, 1, 0]), &profile(&[&[0, 1, 2], &[0, 1, 2]])).unwrap(),
            6
        );
    }

    #[test]
    fn kemeny_unanimity_and_majority() {
        let unanimous = profile(&[&[2, 0, 1], &[2, 0, 1]]);
        let res = kemeny_young(&unanimous).unwrap();
        assert_eq!(res.ranking.order(), &[2, 0, 1]);
        assert_eq!(res.cost, Some(0));

        let p = profile(&[&[0, 1, 2], &[0, 1, 2], &[1, 0, 2]]);
        let res = kemeny_young(&p).unwrap();
        assert_eq!(res.ranking.order(), &[0, 1, 2]);
        assert_eq!(res.cost, Some(1));
    }

    #[test]
    fn kemeny_tie_break_lexicographic() {
        // {(A,B),(B,A)}: both orders cost 1, pick (A,B)
        let p = profile(&[&[0, 1], &[1, 0]]);
        for res in [kemeny_young(&p).unwrap(), kemeny_brute_force(&p).unwrap()] {
            assert_eq!(res.ranking.order(), &[0, 1]);
            assert_eq!(res.cost, Some(1));
        }
    }

    #[test]
    fn brute_force_single_item() {
        let p = profile(&[&[0]]);
        let res = kemeny_brute_force(&p).unwrap();
        assert_eq!(res.ranking.order(), &[0]);
        assert_eq!(res.cost, Some(0));
    }

    #[test]
    fn kemeny_agrees_with_oracle_on_random_profiles() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..200 {
            let f = 3 + trial % 5; // 3..=7
            let h = 1 + trial % 9;
            let p = random_profile(&mut rng, f, h);
            let fast = kemeny_young(&p).unwrap();
            let slow = kemeny_brute_force(&p).unwrap();
            assert_eq!(fast.cost, slow.cost, "profile {p:?}");
            assert_eq!(fast.ranking, slow.ranking, "profile {p:?}");
        }
    }

    #[test]
    fn kemeny_feature_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = random_profile(&mut rng, 9, 2);
        assert!(kemeny_brute_force(&p).is_err());
    }

    #[test]
    fn mc4_two_feature_majority() {
        // 2 of 3 users put A first; the chain drains B into A.
        let p = profile(&[&[0, 1], &[0, 1], &[1, 0]]);
        let res = mc4(&p, 100).unwrap();
        assert_eq!(res.ranking.order()[0], 0);
        assert!(res.scores[0] > res.scores[1]);
    }

    #[test]
    fn mc4_single_feature() {
        let p = profile(&[&[0]]);
        let res = mc4(&p, 10).unwrap();
        assert_eq!(res.scores, vec![1.0]);
        assert_eq!(res.ranking.order(), &[0]);
    }

    #[test]
    fn mc4_unanimous_reproduces_input() {
        let p = profile(&[&[3, 1, 0, 2], &[3, 1, 0, 2], &[3, 1, 0, 2]]);
        let res = mc4(&p, 100).unwrap();
        assert_eq!(res.ranking.order(), &[3, 1, 0, 2]);
    }

    #[test]
    fn mc4_transition_rows_stochastic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let p = random_profile(&mut rng, 6, 5);
            let t = mc4_transition_matrix(&p);
            for row in t.entries() {
                let sum: f64 = row.iter().sum();
                assert!((sum - 1.0).abs() <= 1e-12);
                assert!(row.iter().all(|&v| v >= 0.0));
            }
        }
    }

    #[test]
    fn borda_examples() {
        let res = borda(&profile(&[&[0, 1, 2], &[2, 1, 0]])).unwrap();
        assert_eq!(res.scores, vec![2.0, 2.0, 2.0]);
        assert_eq!(res.ranking.order(), &[0, 1, 2]);

        let res = borda(&profile(&[&[0, 1, 2], &[1, 0, 2]])).unwrap();
        assert_eq!(res.scores, vec![2.5, 2.5, 1.0]);
        assert_eq!(res.ranking.order(), &[0, 1, 2]);

        let res = borda(&profile(&[&[1, 2, 0]])).unwrap();
        assert_eq!(res.ranking.order(), &[1, 2, 0]);
    }

    #[test]
    fn weighted_kendall_tau_cases() {
        let a = ranking(&[0, 1, 2]);
        let b = ranking(&[1, 0, 2]);
        assert_eq!(weighted_kendall_tau(&a, &a, 3).unwrap(), 0.0);
        // k = 2 falls back to the unweighted count
        assert_eq!(weighted_kendall_tau(&a, &b, 2).unwrap(), 1.0);
        // disagreeing pair (A,B): below_A(a) = {B,C}, below_B(b) = {A,C},
        // union {A,B,C} has size 3
        assert_eq!(weighted_kendall_tau(&a, &b, 3).unwrap(), 3.0);
        assert!(weighted_kendall_tau(&a, &b, 1).is_err());
        assert!(weighted_kendall_tau(&a, &b, 4).is_err());
        // F = 4: the (k - 2) multiplier kicks in
        let a4 = ranking(&[0, 1, 2, 3]);
        let b4 = ranking(&[1, 0, 2, 3]);
        // pair (A,B): below_A(a4) = {B,C,D}, below_B(b4) = {A,C,D}, union size 4
        assert_eq!(weighted_kendall_tau(&a4, &b4, 3).unwrap(), 4.0);
        assert_eq!(weighted_kendall_tau(&a4, &b4, 4).unwrap(), 8.0);
    }

    #[test]
    fn aggregate_result_scores_consistent_with_ranking() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let p = random_profile(&mut rng, 5, 4);
            for method in [
                AggregationMethod::KemenyYoung,
                AggregationMethod::Mc4,
                AggregationMethod::Borda,
            ] {
                let res = aggregate(&p, method).unwrap();
                assert_eq!(ranking_from_scores(&res.scores), res.ranking);
            }
        }
    }

    #[test]
    fn profile_document_roundtrip_and_validation() {
        let mut doc = ProfileDocument {
            features: vec!["a".into(), "b".into(), "c".into()],
            users: vec![],
        };
        let entry = ProfileEntry {
            user_id: "u1".into(),
            ranking: vec!["c".into(), "a".into(), "b".into()],
            directions: [("a".into(), 1), ("b".into(), -1), ("c".into(), 1)]
                .into_iter()
                .collect(),
        };
        doc.push_entry(entry.clone()).unwrap();

        // duplicate in ranking
        let mut bad = entry.clone();
        bad.ranking = vec!["c".into(), "c".into(), "b".into()];
        assert!(doc.validate_entry(&bad).is_err());
        // missing direction
        let mut bad = entry.clone();
        bad.directions.remove("b");
        assert!(doc.validate_entry(&bad).is_err());
        // unknown feature
        let mut bad = entry;
        bad.ranking = vec!["c".into(), "a".into(), "zz".into()];
        assert!(doc.validate_entry(&bad).is_err());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("profile.json");
        doc.save(&path).unwrap();
        let back = ProfileDocument::load(&path).unwrap();
        assert_eq!(doc, back);

        let (profile, signs) = back.to_profile(None).unwrap();
        assert_eq!(profile.user_count(), 1);
        assert_eq!(profile.rankings()[0].order(), &[2, 0, 1]);
        assert_eq!(signs, vec![vec![1, -1, 1]]);
    }
}
