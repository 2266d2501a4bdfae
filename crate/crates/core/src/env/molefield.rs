//! Mole-field game: dense benign scoring with a single hazard.
//!
//! Items spawn at random empty cells and score +1 when collected. The cat
//! is the only way to lose; surviving to the tick limit wins.

use rand::Rng;

use super::{is_wall, move_player, wander, Action, EnvError, EnvSpec, ForwardModel, Outcome, Pos};

const ACTIONS: [Action; 5] = [
    Action::Up,
    Action::Down,
    Action::Left,
    Action::Right,
    Action::Idle,
];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MoleFieldState {
    width: u8,
    height: u8,
    player: Pos,
    items: Vec<Pos>,
    cat: Option<Pos>,
    /// Spawn probability in thousandths, so states stay hashable.
    spawn_per_mille: u16,
    score: i64,
    tick: u32,
    tick_limit: u32,
    outcome: Outcome,
}

impl MoleFieldState {
    pub fn new(spec: &EnvSpec) -> Self {
        let (w, h) = (spec.width, spec.height);
        MoleFieldState {
            width: w,
            height: h,
            player: (w / 2, h / 2),
            items: vec![(1, h - 2), (w - 2, 1)],
            cat: (spec.enemies > 0).then_some((w - 2, h - 2)),
            spawn_per_mille: (spec.spawn_rate * 1000.0).round() as u16,
            score: 0,
            tick: 0,
            tick_limit: spec.tick_limit,
            outcome: Outcome::Running,
        }
    }

    pub fn player(&self) -> Pos {
        self.player
    }

    pub fn items(&self) -> &[Pos] {
        &self.items
    }

    pub fn cat(&self) -> Option<Pos> {
        self.cat
    }

    pub fn tick(&self) -> u32 {
        self.tick
    }
}

impl ForwardModel for MoleFieldState {
    fn legal_actions(&self) -> Result<&'static [Action], EnvError> {
        if self.outcome != Outcome::Running {
            return Err(EnvError::Terminal);
        }
        Ok(&ACTIONS)
    }

    fn advance<R: Rng>(&self, action: Action, rng: &mut R) -> Result<(Self, f64), EnvError> {
        if self.outcome != Outcome::Running {
            return Err(EnvError::Terminal);
        }
        let mut next = self.clone();
        let mut delta = 0i64;

        next.player = move_player(next.width, next.height, next.player, action);
        if next.cat == Some(next.player) {
            next.outcome = Outcome::Loss;
        }

        if next.outcome == Outcome::Running {
            if let Some(i) = next.items.iter().position(|p| *p == next.player) {
                next.items.remove(i);
                delta += 1;
            }
            if next.spawn_per_mille > 0 && rng.gen_range(0..1000) < next.spawn_per_mille {
                let free: Vec<Pos> = (1..next.width - 1)
                    .flat_map(|x| (1..next.height - 1).map(move |y| (x, y)))
                    .filter(|p| {
                        !is_wall(next.width, next.height, *p)
                            && *p != next.player
                            && next.cat != Some(*p)
                            && !next.items.contains(p)
                    })
                    .collect();
                if !free.is_empty() {
                    next.items.push(free[rng.gen_range(0..free.len())]);
                }
            }
        }

        if next.outcome == Outcome::Running {
            if let Some(cat) = next.cat {
                let moved = wander(next.width, next.height, cat, rng);
                next.cat = Some(moved);
                if moved == next.player {
                    next.outcome = Outcome::Loss;
                }
            }
        }

        next.tick += 1;
        if next.outcome == Outcome::Running && next.tick >= next.tick_limit {
            next.outcome = Outcome::Win;
        }
        next.score += delta;
        Ok((next, delta as f64))
    }

    fn outcome(&self) -> Outcome {
        self.outcome
    }

    fn score(&self) -> f64 {
        self.score as f64
    }
}
