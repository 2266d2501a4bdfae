//! Grid-world forward models.
//!
//! Three small games with the same API shape: a bordered grid, a player, a
//! score that only moves through discrete events, and a terminal outcome.
//! States are cheap values; [`ForwardModel::advance`] returns a fresh state
//! and never touches its input, so search code can fan out freely.
//!
//! - [`GameKind::KeyDoor`]: collect the key (+1), optionally slay wandering
//!   enemies with the sword (+2 each), and exit through the door to win.
//!   Enemy contact loses; so does running out of ticks.
//! - [`GameKind::MoleField`]: items keep spawning (+1 each); the single cat
//!   is the only way to lose. Surviving to the tick limit wins.
//! - [`GameKind::Hunter`]: grab the power-up, kill enemies by contact
//!   (+2 each) until the boss appears, then take the boss for +1000 and the
//!   win. Unpowered contact loses, as does the tick limit.
//!
//! Moves into walls are legal no-ops, so every state of a game offers the
//! same action set.

mod hunter;
mod keydoor;
mod molefield;

pub use hunter::HunterState;
pub use keydoor::KeyDoorState;
pub use molefield::MoleFieldState;

use rand::Rng;
use thiserror::Error;

use crate::distributions::add_noise;

/// Default number of ticks before a game is called.
pub const DEFAULT_TICK_LIMIT: u32 = 2000;
/// Default terminal offsets folded into observed values.
pub const DEFAULT_WIN_BONUS: f64 = 1000.0;
pub const DEFAULT_LOSS_PENALTY: f64 = 1000.0;

/// Player action. Games expose a fixed subset as their legal set; an action
/// outside that set (or a move into a wall) is a no-op.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Up,
    Down,
    Left,
    Right,
    Use,
    Idle,
}

impl Action {
    pub const MOVES: [Action; 4] = [Action::Up, Action::Down, Action::Left, Action::Right];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Running,
    Win,
    Loss,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnvError {
    #[error("state is terminal")]
    Terminal,
    #[error("invalid environment spec: {0}")]
    InvalidSpec(String),
}

/// A copyable simulator: applying an action yields a successor state and
/// the score delta of that tick.
pub trait ForwardModel: Clone {
    /// The game's fixed action set; an error on terminal states.
    fn legal_actions(&self) -> Result<&'static [Action], EnvError>;

    /// Pure transition: builds the successor without mutating `self`.
    fn advance<R: Rng>(&self, action: Action, rng: &mut R) -> Result<(Self, f64), EnvError>
    where
        Self: Sized;

    fn outcome(&self) -> Outcome;

    /// True accumulated score (noise-free).
    fn score(&self) -> f64;
}

/// Which game to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameKind {
    KeyDoor,
    MoleField,
    Hunter,
}

/// Everything needed to construct an initial state. Layouts are fixed
/// functions of the dimensions; randomness enters only through the RNG
/// passed to `advance` (enemy walks, item spawns).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvSpec {
    pub game: GameKind,
    pub width: u8,
    pub height: u8,
    pub tick_limit: u32,
    /// Enemy count: up to 4 for KeyDoor/Hunter, 0 or 1 (the cat) for MoleField.
    pub enemies: u8,
    /// Per-tick item spawn probability (MoleField only).
    pub spawn_rate: f64,
    /// Kills required before the Hunter boss appears.
    pub kills_for_boss: u32,
    /// Seed for the environment RNG stream in standalone runs.
    pub seed: u64,
}

impl EnvSpec {
    pub fn new(game: GameKind) -> Self {
        EnvSpec {
            game,
            width: 7,
            height: 7,
            tick_limit: DEFAULT_TICK_LIMIT,
            enemies: match game {
                GameKind::MoleField => 1,
                _ => 2,
            },
            spawn_rate: 0.1,
            kills_for_boss: 2,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let fail = |msg: String| Err(EnvError::InvalidSpec(msg));
        if self.width < 5 || self.height < 5 {
            return fail(format!(
                "grid must be at least 5x5 (got {}x{})",
                self.width, self.height
            ));
        }
        if self.tick_limit == 0 {
            return fail("tick_limit must be >= 1".into());
        }
        let enemy_cap = match self.game {
            GameKind::MoleField => 1,
            _ => 4,
        };
        if self.enemies > enemy_cap {
            return fail(format!(
                "{:?} supports at most {enemy_cap} enemies (got {})",
                self.game, self.enemies
            ));
        }
        if !(0.0..=1.0).contains(&self.spawn_rate) {
            return fail(format!("spawn_rate must be in [0, 1] (got {})", self.spawn_rate));
        }
        if self.game == GameKind::Hunter && self.kills_for_boss == 0 {
            return fail("kills_for_boss must be >= 1".into());
        }
        Ok(())
    }
}

/// State of any of the three games behind one type, for config-driven runs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GameState {
    KeyDoor(KeyDoorState),
    MoleField(MoleFieldState),
    Hunter(HunterState),
}

impl GameState {
    pub fn new(spec: &EnvSpec) -> Result<Self, EnvError> {
        spec.validate()?;
        Ok(match spec.game {
            GameKind::KeyDoor => GameState::KeyDoor(KeyDoorState::new(spec)),
            GameKind::MoleField => GameState::MoleField(MoleFieldState::new(spec)),
            GameKind::Hunter => GameState::Hunter(HunterState::new(spec)),
        })
    }

    pub fn tick(&self) -> u32 {
        match self {
            GameState::KeyDoor(s) => s.tick(),
            GameState::MoleField(s) => s.tick(),
            GameState::Hunter(s) => s.tick(),
        }
    }
}

impl ForwardModel for GameState {
    fn legal_actions(&self) -> Result<&'static [Action], EnvError> {
        match self {
            GameState::KeyDoor(s) => s.legal_actions(),
            GameState::MoleField(s) => s.legal_actions(),
            GameState::Hunter(s) => s.legal_actions(),
        }
    }

    fn advance<R: Rng>(&self, action: Action, rng: &mut R) -> Result<(Self, f64), EnvError> {
        Ok(match self {
            GameState::KeyDoor(s) => {
                let (next, d) = s.advance(action, rng)?;
                (GameState::KeyDoor(next), d)
            }
            GameState::MoleField(s) => {
                let (next, d) = s.advance(action, rng)?;
                (GameState::MoleField(next), d)
            }
            GameState::Hunter(s) => {
                let (next, d) = s.advance(action, rng)?;
                (GameState::Hunter(next), d)
            }
        })
    }

    fn outcome(&self) -> Outcome {
        match self {
            GameState::KeyDoor(s) => s.outcome(),
            GameState::MoleField(s) => s.outcome(),
            GameState::Hunter(s) => s.outcome(),
        }
    }

    fn score(&self) -> f64 {
        match self {
            GameState::KeyDoor(s) => s.score(),
            GameState::MoleField(s) => s.score(),
            GameState::Hunter(s) => s.score(),
        }
    }
}

/// Terminal offsets folded into the scalar the agent compares on: a win is
/// worth `score + win_bonus`, a loss `score - loss_penalty`, and a running
/// state is just its score.
pub fn heuristic_value(outcome: Outcome, score: f64, win_bonus: f64, loss_penalty: f64) -> f64 {
    match outcome {
        Outcome::Win => score + win_bonus,
        Outcome::Loss => score - loss_penalty,
        Outcome::Running => score,
    }
}

/// The agent's view of a state: heuristic value plus one Gaussian
/// observation-noise draw.
pub fn observe_score<M: ForwardModel, R: Rng>(
    state: &M,
    sigma: f64,
    win_bonus: f64,
    loss_penalty: f64,
    rng: &mut R,
) -> f64 {
    add_noise(
        heuristic_value(state.outcome(), state.score(), win_bonus, loss_penalty),
        sigma,
        rng,
    )
}

// ---- grid helpers shared by the games ----

pub(crate) type Pos = (u8, u8);

pub(crate) fn is_wall(width: u8, height: u8, pos: Pos) -> bool {
    pos.0 == 0 || pos.1 == 0 || pos.0 == width - 1 || pos.1 == height - 1
}

/// Candidate cell for a move; walls are handled by the caller.
pub(crate) fn step(pos: Pos, action: Action) -> Pos {
    match action {
        Action::Up => (pos.0, pos.1 - 1),
        Action::Down => (pos.0, pos.1 + 1),
        Action::Left => (pos.0 - 1, pos.1),
        Action::Right => (pos.0 + 1, pos.1),
        Action::Use | Action::Idle => pos,
    }
}

/// Moves the player, treating walls as no-ops.
pub(crate) fn move_player(width: u8, height: u8, pos: Pos, action: Action) -> Pos {
    let target = step(pos, action);
    if is_wall(width, height, target) {
        pos
    } else {
        target
    }
}

/// One uniformly random enemy step among {stay, the legal moves}.
pub(crate) fn wander<R: Rng>(width: u8, height: u8, pos: Pos, rng: &mut R) -> Pos {
    let mut options = [pos; 5];
    let mut len = 1;
    for a in Action::MOVES {
        let target = step(pos, a);
        if !is_wall(width, height, target) {
            options[len] = target;
            len += 1;
        }
    }
    options[rng.gen_range(0..len)]
}
