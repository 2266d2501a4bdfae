//! Test support: a one-step k-armed bandit behind the forward-model API.
//!
//! Every arm is a finite value distribution; playing an arm draws one value
//! and ends the episode with that score. Bandits terminate in a formal
//! `Win`, so rate them with zero win/loss offsets. Drawing consumes exactly
//! one uniform variate per step regardless of the arm's values, which keeps
//! RNG streams aligned when a test transforms arm values monotonically.

use std::sync::Arc;

use rand::Rng;

use crate::env::{Action, EnvError, ForwardModel, Outcome};

static ARM_ACTIONS: [Action; 6] = [
    Action::Up,
    Action::Down,
    Action::Left,
    Action::Right,
    Action::Use,
    Action::Idle,
];

/// A k-armed (k <= 6) single-decision episode.
#[derive(Debug, Clone)]
pub struct BanditModel {
    arms: Arc<Vec<Vec<(f64, f64)>>>,
    score: f64,
    done: bool,
}

impl BanditModel {
    /// `arms[i]` lists `(value, probability)` outcomes of arm `i`.
    pub fn new(arms: Vec<Vec<(f64, f64)>>) -> Self {
        assert!(!arms.is_empty() && arms.len() <= ARM_ACTIONS.len());
        for arm in &arms {
            assert!(!arm.is_empty());
            let mass: f64 = arm.iter().map(|(_, p)| p).sum();
            assert!((mass - 1.0).abs() < 1e-9, "arm mass {mass}");
        }
        BanditModel {
            arms: Arc::new(arms),
            score: 0.0,
            done: false,
        }
    }

    /// The same bandit with every arm value passed through `f`. With a
    /// strictly increasing `f`, draws stay aligned step for step.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        let arms = self
            .arms
            .iter()
            .map(|arm| arm.iter().map(|(v, p)| (f(*v), *p)).collect())
            .collect();
        BanditModel {
            arms: Arc::new(arms),
            score: self.score,
            done: self.done,
        }
    }

    pub fn arm_count(&self) -> usize {
        self.arms.len()
    }
}

impl ForwardModel for BanditModel {
    fn legal_actions(&self) -> Result<&'static [Action], EnvError> {
        if self.done {
            return Err(EnvError::Terminal);
        }
        Ok(&ARM_ACTIONS[..self.arms.len()])
    }

    fn advance<R: Rng>(&self, action: Action, rng: &mut R) -> Result<(Self, f64), EnvError> {
        if self.done {
            return Err(EnvError::Terminal);
        }
        let arm = ARM_ACTIONS
            .iter()
            .position(|a| *a == action)
            .filter(|i| *i < self.arms.len())
            .ok_or(EnvError::Terminal)?;
        let r: f64 = rng.gen();
        let mut acc = 0.0;
        let outcomes = &self.arms[arm];
        let mut value = outcomes[outcomes.len() - 1].0;
        for (v, p) in outcomes {
            acc += p;
            if r <= acc {
                value = *v;
                break;
            }
        }
        Ok((
            BanditModel {
                arms: Arc::clone(&self.arms),
                score: value,
                done: true,
            },
            value,
        ))
    }

    fn outcome(&self) -> Outcome {
        if self.done {
            Outcome::Win
        } else {
            Outcome::Running
        }
    }

    fn score(&self) -> f64 {
        self.score
    }
}
