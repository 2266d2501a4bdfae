//! Hunter game: high risk, high bonus.
//!
//! Enemies roam the grid and kill on contact — unless the player has picked
//! up the power-up, in which case contact kills the enemy instead (+2).
//! After enough kills the boss appears; taking it scores +1000 and wins the
//! game. The tick limit loses.

use rand::Rng;

use super::{move_player, wander, Action, EnvError, EnvSpec, ForwardModel, Outcome, Pos};

const ACTIONS: [Action; 5] = [
    Action::Up,
    Action::Down,
    Action::Left,
    Action::Right,
    Action::Idle,
];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HunterState {
    width: u8,
    height: u8,
    player: Pos,
    powered: bool,
    power_up: Option<Pos>,
    enemies: Vec<Pos>,
    kills: u32,
    kills_for_boss: u32,
    boss: Option<Pos>,
    boss_spawned: bool,
    score: i64,
    tick: u32,
    tick_limit: u32,
    outcome: Outcome,
}

impl HunterState {
    pub fn new(spec: &EnvSpec) -> Self {
        let (w, h) = (spec.width, spec.height);
        let spots = [
            (w - 2, 1),
            (w - 2, h - 2),
            (w / 2, h / 2),
            (w / 2, 1),
        ];
        HunterState {
            width: w,
            height: h,
            player: (1, 1),
            powered: false,
            power_up: Some((1, h - 2)),
            enemies: spots[..spec.enemies as usize].to_vec(),
            kills: 0,
            kills_for_boss: spec.kills_for_boss,
            boss: None,
            boss_spawned: false,
            score: 0,
            tick: 0,
            tick_limit: spec.tick_limit,
            outcome: Outcome::Running,
        }
    }

    pub fn player(&self) -> Pos {
        self.player
    }

    pub fn powered(&self) -> bool {
        self.powered
    }

    pub fn enemies(&self) -> &[Pos] {
        &self.enemies
    }

    pub fn boss(&self) -> Option<Pos> {
        self.boss
    }

    pub fn tick(&self) -> u32 {
        self.tick
    }

    /// Enemy contact: kills the enemy when powered, otherwise the player.
    fn contact(&mut self, enemy_idx: usize, delta: &mut i64) {
        if self.powered {
            self.enemies.remove(enemy_idx);
            self.kills += 1;
            *delta += 2;
        } else {
            self.outcome = Outcome::Loss;
        }
    }

    fn maybe_spawn_boss(&mut self, delta: &mut i64) {
        if !self.boss_spawned && self.kills >= self.kills_for_boss {
            self.boss_spawned = true;
            let cell = (self.width - 2, self.height / 2);
            if cell == self.player {
                // Spawning onto the player resolves immediately; only a
                // powered player can have triggered the spawn.
                self.outcome = Outcome::Win;
                *delta += 1000;
            } else {
                self.boss = Some(cell);
            }
        }
    }
}

impl ForwardModel for HunterState {
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

        if next.boss == Some(next.player) {
            if next.powered {
                delta += 1000;
                next.boss = None;
                next.outcome = Outcome::Win;
            } else {
                next.outcome = Outcome::Loss;
            }
        }

        if next.outcome == Outcome::Running {
            if let Some(i) = next.enemies.iter().position(|e| *e == next.player) {
                next.contact(i, &mut delta);
            }
        }

        if next.outcome == Outcome::Running && next.power_up == Some(next.player) {
            next.powered = true;
            next.power_up = None;
        }

        if next.outcome == Outcome::Running {
            let mut i = 0;
            while i < next.enemies.len() {
                next.enemies[i] = wander(next.width, next.height, next.enemies[i], rng);
                if next.enemies[i] == next.player {
                    next.contact(i, &mut delta);
                    if next.outcome != Outcome::Running {
                        break;
                    }
                    // contact removed the enemy at i; do not advance i
                } else {
                    i += 1;
                }
            }
        }

        if next.outcome == Outcome::Running {
            next.maybe_spawn_boss(&mut delta);
        }

        next.tick += 1;
        if next.outcome == Outcome::Running && next.tick >= next.tick_limit {
            next.outcome = Outcome::Loss;
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
