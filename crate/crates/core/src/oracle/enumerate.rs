//! Exact enumeration of the output joint distribution over every retained
//! input pair, written out case by case.

use std::collections::BTreeMap;

/// Joint probability of `(r, s)` photons at the output ports.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct JointDistribution {
    entries: BTreeMap<(u32, u32), f64>,
}

impl JointDistribution {
    pub fn get(&self, r: u32, s: u32) -> f64 {
        self.entries.get(&(r, s)).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    fn add(&mut self, r: u32, s: u32, p: f64) {
        *self.entries.entry((r, s)).or_insert(0.0) += p;
    }
}

/// `(r, s, probability)` outcomes of one input.
type Outcomes = Vec<(u32, u32, f64)>;

const FACTORIAL: [f64; 4] = [1.0, 1.0, 2.0, 6.0];

/// Every input `|m, n>` with `m + n <= 3`, each paired with its full list of
/// `(r, s, probability)` outcomes at interference `beta`.
pub(crate) fn retyped_tables(beta: f64) -> Vec<((u32, u32), Outcomes)> {
    let b = beta;
    vec![
        ((0, 0), vec![(0, 0, 1.0)]),
        ((1, 0), vec![(1, 0, 0.5), (0, 1, 0.5)]),
        ((0, 1), vec![(1, 0, 0.5), (0, 1, 0.5)]),
        ((2, 0), vec![(2, 0, 0.25), (0, 2, 0.25), (1, 1, 0.5)]),
        ((0, 2), vec![(2, 0, 0.25), (0, 2, 0.25), (1, 1, 0.5)]),
        ((3, 0), vec![(3, 0, 0.125), (0, 3, 0.125), (2, 1, 0.375), (1, 2, 0.375)]),
        ((0, 3), vec![(3, 0, 0.125), (0, 3, 0.125), (2, 1, 0.375), (1, 2, 0.375)]),
        (
            (1, 1),
            vec![
                (1, 1, (1.0 - b) / 2.0),
                (2, 0, (1.0 + b) / 4.0),
                (0, 2, (1.0 + b) / 4.0),
            ],
        ),
        (
            (2, 1),
            vec![
                (3, 0, (1.0 + b) / 8.0),
                (0, 3, (1.0 + b) / 8.0),
                (2, 1, (3.0 - b) / 8.0),
                (1, 2, (3.0 - b) / 8.0),
            ],
        ),
        (
            (1, 2),
            vec![
                (3, 0, (1.0 + b) / 8.0),
                (0, 3, (1.0 + b) / 8.0),
                (2, 1, (3.0 - b) / 8.0),
                (1, 2, (3.0 - b) / 8.0),
            ],
        ),
    ]
}

pub(crate) fn poisson_pair(m: u32, n: u32, mu: f64) -> f64 {
    let mut w = (-2.0 * mu).exp();
    for _ in 0..m + n {
        w *= mu;
    }
    w / (FACTORIAL[m as usize] * FACTORIAL[n as usize])
}

/// Output joint distribution of the two Poisson sources through the beam
/// splitter, by direct loop over inputs and outcomes.
pub fn enumerate_output_distribution(mu: f64, beta: f64) -> JointDistribution {
    let mut joint = JointDistribution::default();
    for ((m, n), outcomes) in retyped_tables(beta) {
        let weight = poisson_pair(m, n, mu);
        for (r, s, p) in outcomes {
            joint.add(r, s, p * weight);
        }
    }
    joint
}

/// Distinguishable-photon case: each of the `k = m + n` photons leaves by
/// either port with probability ½, independently.
pub fn independent_routing_distribution(mu: f64) -> JointDistribution {
    let mut joint = JointDistribution::default();
    for m in 0..=3u32 {
        for n in 0..=3 - m {
            let k = m + n;
            let weight = poisson_pair(m, n, mu);
            for r in 0..=k {
                let choose = FACTORIAL[k as usize] / (FACTORIAL[r as usize] * FACTORIAL[(k - r) as usize]);
                joint.add(r, k - r, weight * choose * 0.5f64.powi(k as i32));
            }
        }
    }
    joint
}
