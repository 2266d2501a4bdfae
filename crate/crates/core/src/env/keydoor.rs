//! Key-and-door game: a sparse, necessary-for-win pickup.
//!
//! The player starts in one corner, the key sits in the far corner and the
//! door in a third. Collecting the key scores +1 and is required to win;
//! swinging the sword kills adjacent enemies for +2 each but is optional.
//! Touching an enemy loses, as does reaching the tick limit without
//! exiting.

use rand::Rng;

use super::{
    is_wall, move_player, step, wander, Action, EnvError, EnvSpec, ForwardModel, Outcome, Pos,
};

const ACTIONS: [Action; 6] = [
    Action::Up,
    Action::Down,
    Action::Left,
    Action::Right,
    Action::Use,
    Action::Idle,
];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KeyDoorState {
    width: u8,
    height: u8,
    player: Pos,
    key: Option<Pos>,
    has_key: bool,
    door: Pos,
    enemies: Vec<Pos>,
    score: i64,
    tick: u32,
    tick_limit: u32,
    outcome: Outcome,
}

impl KeyDoorState {
    pub fn new(spec: &EnvSpec) -> Self {
        let (w, h) = (spec.width, spec.height);
        // The first enemy guards the key corner; later ones spread out.
        let spots = [
            (w - 3, h - 3),
            (1, h - 2),
            (w - 2, h / 2),
            (w / 2, 1),
        ];
        KeyDoorState {
            width: w,
            height: h,
            player: (1, 1),
            key: Some((w - 2, h - 2)),
            has_key: false,
            door: (w - 2, 1),
            enemies: spots[..spec.enemies as usize].to_vec(),
            score: 0,
            tick: 0,
            tick_limit: spec.tick_limit,
            outcome: Outcome::Running,
        }
    }

    pub fn player(&self) -> Pos {
        self.player
    }

    pub fn has_key(&self) -> bool {
        self.has_key
    }

    pub fn enemies(&self) -> &[Pos] {
        &self.enemies
    }

    pub fn tick(&self) -> u32 {
        self.tick
    }
}

impl ForwardModel for KeyDoorState {
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

        match action {
            Action::Use => {
                // Sword: fells every enemy in the four-neighbourhood.
                let p = next.player;
                next.enemies.retain(|e| {
                    let adjacent = Action::MOVES
                        .iter()
                        .any(|a| !is_wall(next.width, next.height, step(p, *a)) && step(p, *a) == *e);
                    if adjacent {
                        delta += 2;
                    }
                    !adjacent
                });
            }
            a => {
                next.player = move_player(next.width, next.height, next.player, a);
                if next.enemies.contains(&next.player) {
                    next.outcome = Outcome::Loss;
                }
            }
        }

        if next.outcome == Outcome::Running {
            if !next.has_key && next.key == Some(next.player) {
                next.has_key = true;
                next.key = None;
                delta += 1;
            }
            if next.player == next.door && next.has_key {
                next.outcome = Outcome::Win;
            }
        }

        if next.outcome == Outcome::Running {
            for i in 0..next.enemies.len() {
                next.enemies[i] = wander(next.width, next.height, next.enemies[i], rng);
                if next.enemies[i] == next.player {
                    next.outcome = Outcome::Loss;
                    break;
                }
            }
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
