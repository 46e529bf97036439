// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use rand::seq::index;
use rand::Rng;

use super::{Measure, NodeScores};

/// Number of stubborn agents for a fraction of `n` nodes: `max(1, round(f n))`.
pub fn stubborn_count(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64).round() as usize).clamp(1, n.max(1))
}

/// The `max(1, round(fraction * n))` highest-scoring nodes, ties broken by
/// ascending id. For [`Measure::Random`] the nodes are drawn uniformly
/// without replacement from `rng`. The result is sorted by node id.
pub fn rank_top_fraction<R: Rng + ?Sized>(scores: &NodeScores, fraction: f64, rng: &mut R) -> Vec<usize> {
    assert!(
        fraction > 0.0 && fraction <= 1.0,
        "fraction must lie in (0, 1], got {fraction}"
    );
    let n = scores.len();
    if n == 0 {
        return Vec::new();
    }
    let count = stubborn_count(n, fraction);
    let mut chosen = if scores.measure == Measure::Random {
        index::sample(rng, n, count).into_vec()
    } else {
        let mut ids: Vec<usize> = (0..n).collect();
        ids.sort_by(|&a, &b| {
            scores.values[b]
                .total_cmp(&scores.values[a])
                .then(a.cmp(&b))
        });
        ids.truncate(count);
        ids
    };
    chosen.sort_unstable();
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng() -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(5)
    }

    #[test]
    fn single_agent_for_smallest_fraction() {
        let scores = NodeScores::new(Measure::Degree, (0..1000).map(f64::from).collect());
        assert_eq!(rank_top_fraction(&scores, 0.001, &mut rng()), vec![999]);
    }

    #[test]
    fn ties_go_to_lower_ids() {
        let scores = NodeScores::new(Measure::Degree, vec![5.0, 5.0, 3.0]);
        assert_eq!(rank_top_fraction(&scores, 1.0 / 3.0, &mut rng()), vec![0]);
    }

    #[test]
    fn full_fraction_selects_everyone() {
        let scores = NodeScores::new(Measure::Pagerank, vec![0.1, 0.7, 0.2]);
        assert_eq!(rank_top_fraction(&scores, 1.0, &mut rng()), vec![0, 1, 2]);
    }

    #[test]
    fn random_selection_is_seeded() {
        let scores = NodeScores::random(100);
        let a = rank_top_fraction(&scores, 0.05, &mut rng());
        let b = rank_top_fraction(&scores, 0.05, &mut rng());
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn count_rule() {
        assert_eq!(stubborn_count(1000, 0.001), 1);
        assert_eq!(stubborn_count(1000, 0.0001), 1);
        assert_eq!(stubborn_count(1000, 0.02), 20);
        assert_eq!(stubborn_count(1000, 0.0025), 3);
    }
}
