//! Breadth-first exploration of the exchange graph, periodicity of alternating
//! mutation sequences and positivity scans.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::seed::QuantumSeed;
use crate::torus::TorusElement;

/// A distinct seed together with the first word (0-based directions) reaching it.
#[derive(Clone, Debug)]
pub struct Visited {
    pub word: Vec<usize>,
    pub seed: QuantumSeed,
}

/// A word whose seed coincides with the seed of an earlier word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coincidence {
    pub word: Vec<usize>,
    pub earlier: Vec<usize>,
}

/// A mutation whose exchange numerator was not right-divisible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub word: Vec<usize>,
    pub direction: usize,
    pub error: Error,
}

#[derive(Clone, Debug)]
pub struct ExplorationReport {
    pub depth: usize,
    /// Distinct seeds in order of discovery (by word length, then lexicographically).
    pub seeds: Vec<Visited>,
    pub words_explored: usize,
    pub coincidences: Vec<Coincidence>,
    pub violations: Vec<Violation>,
}

impl Coincidence {
    /// The closed walk `word` followed by `earlier` reversed, with the common
    /// prefix removed.
    pub fn closed_walk(&self) -> Vec<usize> {
        let common = self
            .word
            .iter()
            .zip(&self.earlier)
            .take_while(|(a, b)| a == b)
            .count();
        let mut walk = self.word[common..].to_vec();
        walk.extend(self.earlier[common..].iter().rev());
        walk
    }
}

impl ExplorationReport {
    /// Distinct closed walks found, shortest first.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut walks: Vec<Vec<usize>> = self
            .coincidences
            .iter()
            .map(Coincidence::closed_walk)
            .collect();
        walks.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        walks.dedup();
        walks
    }
}

/// Visits every seed reachable by a word of length at most `depth` that never
/// repeats the preceding direction. Words reaching an already seen seed are
/// recorded and not extended further.
pub fn bfs_explore(seed: &QuantumSeed, depth: usize) -> ExplorationReport {
    let mut seen: HashMap<QuantumSeed, Vec<usize>> = HashMap::new();
    seen.insert(seed.clone(), Vec::new());
    let mut report = ExplorationReport {
        depth,
        seeds: vec![Visited {
            word: Vec::new(),
            seed: seed.clone(),
        }],
        words_explored: 1,
        coincidences: Vec::new(),
        violations: Vec::new(),
    };
    let mut frontier = vec![(Vec::<usize>::new(), seed.clone())];
    for _ in 0..depth {
        let mut steps: Vec<(Vec<usize>, usize, &QuantumSeed)> = Vec::new();
        for (word, s) in &frontier {
            for i in (0..s.n()).filter(|&i| word.last() != Some(&i)) {
                steps.push((word.clone(), i, s));
            }
        }
        let mut results: Vec<(Vec<usize>, usize, Result<QuantumSeed>)> = steps
            .into_par_iter()
            .map(|(word, i, s)| (word, i, s.mutate(i)))
            .collect();
        results.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
        let mut next = Vec::new();
        for (mut word, i, result) in results {
            report.words_explored += 1;
            match result {
                Err(error) => report.violations.push(Violation {
                    word,
                    direction: i,
                    error,
                }),
                Ok(s) => {
                    word.push(i);
                    if let Some(earlier) = seen.get(&s) {
                        report.coincidences.push(Coincidence {
                            word,
                            earlier: earlier.clone(),
                        });
                    } else {
                        seen.insert(s.clone(), word.clone());
                        report.seeds.push(Visited {
                            word: word.clone(),
                            seed: s.clone(),
                        });
                        next.push((word, s));
                    }
                }
            }
        }
        frontier = next;
    }
    report
}

/// Periodicity of the alternating word `i, j, i, j, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Periodicity {
    pub directions: (usize, usize),
    /// Smallest positive length of the alternating word returning to the seed.
    pub seed_period: Option<usize>,
    /// Smallest `p` with `x_{t+p} = x_t` on the whole computed sequence, where
    /// `x_0 = X_i`, `x_1 = X_j` and `x_{t+2}` is the variable created by the
    /// `(t+1)`-th mutation.
    pub variable_period: Option<usize>,
    pub variables: Vec<TorusElement>,
}

/// Iterates the alternating word for at most `max_depth` mutations.
pub fn alternating_period(
    seed: &QuantumSeed,
    i: usize,
    j: usize,
    max_depth: usize,
) -> Result<Periodicity> {
    let mut s = seed.clone();
    let mut variables = vec![seed.var(i).clone(), seed.var(j).clone()];
    let mut seed_period = None;
    for t in 0..max_depth {
        let dir = if t % 2 == 0 { i } else { j };
        s = s.mutate(dir)?;
        variables.push(s.var(dir).clone());
        if s == *seed {
            seed_period = Some(t + 1);
            break;
        }
    }
    let len = variables.len();
    let variable_period = (1..len.saturating_sub(1))
        .find(|&p| (0..len - p).all(|t| variables[t] == variables[t + p]));
    Ok(Periodicity {
        directions: (i, j),
        seed_period,
        variable_period,
        variables,
    })
}

/// Periodicity of every pair of distinct directions `i < j`.
pub fn all_alternating_periods(seed: &QuantumSeed, max_depth: usize) -> Result<Vec<Periodicity>> {
    let n = seed.n();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(i, j)| alternating_period(seed, i, j, max_depth))
        .collect()
}

/// A cluster variable with a coefficient outside `ℕ[q^{±1/2}, h]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityFailure {
    pub word: Vec<usize>,
    pub index: usize,
    pub element: TorusElement,
}

#[derive(Clone, Debug)]
pub struct PositivityReport {
    pub variables_checked: usize,
    pub failures: Vec<PositivityFailure>,
    pub violations: Vec<Violation>,
}

/// Checks every distinct cluster variable of every seed within `depth`.
pub fn positivity_scan(seed: &QuantumSeed, depth: usize) -> PositivityReport {
    let explored = bfs_explore(seed, depth);
    let mut checked: Vec<&TorusElement> = Vec::new();
    let mut failures = Vec::new();
    for visited in &explored.seeds {
        for (k, x) in visited.seed.vars().iter().enumerate() {
            if checked.contains(&x) {
                continue;
            }
            checked.push(x);
            if !x.terms().all(|(_, c)| c.is_nonneg()) {
                failures.push(PositivityFailure {
                    word: visited.word.clone(),
                    index: k,
                    element: x.clone(),
                });
            }
        }
    }
    PositivityReport {
        variables_checked: checked.len(),
        failures,
        violations: explored.violations,
    }
}
