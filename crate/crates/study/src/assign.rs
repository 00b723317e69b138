//! Least-filled assignment over the condition × dataset grid.

use belief_core::{Condition, Dataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[derive(Debug, Clone)]
pub struct Balancer {
    seed: u64,
    counts: [[usize; 4]; 6],
    assigned: u64,
}

impl Balancer {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            counts: [[0; 4]; 6],
            assigned: 0,
        }
    }

    /// Pick a least-filled cell, breaking ties uniformly. Each draw uses its
    /// own stream of the seed, so replaying a log reproduces later choices.
    pub fn assign(&mut self) -> (Condition, Dataset) {
        let min = self.counts.iter().flatten().min().copied().unwrap_or(0);
        let ties: Vec<(usize, usize)> = (0..6)
            .flat_map(|c| (0..4).map(move |d| (c, d)))
            .filter(|&(c, d)| self.counts[c][d] == min)
            .collect();
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.assigned);
        let (c, d) = ties[rng.random_range(0..ties.len())];
        let cell = (Condition::ALL[c], Dataset::ALL[d]);
        self.record(cell);
        cell
    }

    /// Count an assignment made earlier (log replay).
    pub fn record(&mut self, (condition, dataset): (Condition, Dataset)) {
        let c = Condition::ALL.iter().position(|&x| x == condition).expect("known condition");
        let d = Dataset::ALL.iter().position(|&x| x == dataset).expect("known dataset");
        self.counts[c][d] += 1;
        self.assigned += 1;
    }

    pub fn count(&self, condition: Condition, dataset: Dataset) -> usize {
        let c = Condition::ALL.iter().position(|&x| x == condition).expect("known condition");
        let d = Dataset::ALL.iter().position(|&x| x == dataset).expect("known dataset");
        self.counts[c][d]
    }

    pub fn spread(&self) -> usize {
        let cells = self.counts.iter().flatten();
        cells.clone().max().unwrap_or(&0) - cells.min().unwrap_or(&0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn first_24_fill_every_cell() {
        let mut b = Balancer::new(5);
        let cells: HashSet<_> = (0..24).map(|_| b.assign()).collect();
        assert_eq!(cells.len(), 24);
    }

    #[test]
    fn full_study_gives_200_per_cell() {
        let mut b = Balancer::new(6);
        for i in 0..4800 {
            b.assign();
            assert!(b.spread() <= 1, "after {i}");
        }
        for c in Condition::ALL {
            let total: usize = Dataset::ALL.iter().map(|&d| b.count(c, d)).sum();
            assert_eq!(total, 800);
            for d in Dataset::ALL {
                assert_eq!(b.count(c, d), 200);
            }
        }
    }

    #[test]
    fn seeded() {
        let run = |seed| {
            let mut b = Balancer::new(seed);
            (0..30).map(|_| b.assign()).collect::<Vec<_>>()
        };
        assert_eq!(run(1), run(1));
        assert_ne!(run(1), run(2));
    }
}
