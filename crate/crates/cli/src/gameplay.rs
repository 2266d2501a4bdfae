//! The game-play sweep: full episodes, a fresh search per move, one CSV
//! row per (variant, game, sigma, budget, repetition).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use ordsketch::env::{EnvSpec, ForwardModel, GameState, Outcome};
use ordsketch::search::{SearchConfig, Searcher, Variant, ENV_STREAM};

use crate::config::{GameName, GameplayConfig, VariantName};
use crate::{write_rows, HarnessError, SweepSummary};

#[derive(Debug, Clone)]
pub struct GameplayPoint {
    pub variant: VariantName,
    pub game: GameName,
    pub sigma: f64,
    pub budget: u32,
}

pub fn expand_grid(cfg: &GameplayConfig) -> Vec<GameplayPoint> {
    let g = &cfg.grid;
    let mut points = Vec::with_capacity(cfg.grid_len());
    for variant in &g.variants {
        for game in &g.games {
            for sigma in &g.sigmas {
                for budget in &g.budgets {
                    points.push(GameplayPoint {
                        variant: *variant,
                        game: *game,
                        sigma: *sigma,
                        budget: *budget,
                    });
                }
            }
        }
    }
    points
}

/// What one full episode produced.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeOutcome {
    pub win: bool,
    /// True (noise-free) final score.
    pub score: f64,
    pub moves: u32,
    pub mean_iterations: f64,
}

/// Plays a whole episode: the agent recomputes a fresh search for every
/// move; the real environment, the search rollouts and the observation
/// noise draw from three independent streams of `run_seed`.
pub fn play_episode(
    spec: &EnvSpec,
    variant: Variant,
    sigma: f64,
    budget: u32,
    search: &crate::config::SearchParams,
    run_seed: u64,
) -> Result<EpisodeOutcome, String> {
    let mut cfg = SearchConfig::new(variant);
    cfg.exploration = search.exploration;
    cfg.rollout_depth = search.rollout_depth;
    cfg.win_bonus = search.win_bonus;
    cfg.loss_penalty = search.loss_penalty;
    cfg.noise_sigma = sigma;
    cfg.budget = budget;
    cfg.seed = run_seed;

    let mut env_rng = ChaCha8Rng::seed_from_u64(run_seed);
    env_rng.set_stream(ENV_STREAM);
    let mut searcher = Searcher::new(cfg);
    let mut state = GameState::new(spec).map_err(|e| e.to_string())?;

    let mut iterations: u64 = 0;
    let mut moves: u32 = 0;
    while state.outcome() == Outcome::Running {
        let report = searcher.choose_move(&state).map_err(|e| e.to_string())?;
        let actions = state.legal_actions().map_err(|e| e.to_string())?;
        state = state
            .advance(actions[report.action], &mut env_rng)
            .map_err(|e| e.to_string())?
            .0;
        iterations += report.iterations as u64;
        moves += 1;
    }
    Ok(EpisodeOutcome {
        win: state.outcome() == Outcome::Win,
        score: state.score(),
        moves,
        mean_iterations: iterations as f64 / moves as f64,
    })
}

pub const HEADER: &str = "variant,game,sigma,budget,seed,win,score,mean_iterations,error";

pub fn run_gameplay(cfg: &GameplayConfig) -> Result<SweepSummary, HarnessError> {
    let errors = cfg.validate();
    if !errors.is_empty() {
        return Err(HarnessError::Config(errors));
    }
    let points = expand_grid(cfg);
    let reps = cfg.repetitions as u64;

    let results: Vec<Result<EpisodeOutcome, String>> = (0..points.len() as u64 * reps)
        .into_par_iter()
        .map(|run_index| {
            let point = &points[(run_index / reps) as usize];
            let seed = cfg.base_seed.wrapping_add(run_index);
            let spec = cfg.env.spec_for(point.game.kind());
            play_episode(
                &spec,
                point.variant.variant(),
                point.sigma,
                point.budget,
                &cfg.search,
                seed,
            )
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut failures = 0usize;
    for (p_idx, point) in points.iter().enumerate() {
        for r in 0..reps {
            let run_index = p_idx as u64 * reps + r;
            let seed = cfg.base_seed.wrapping_add(run_index);
            let prefix = vec![
                point.variant.to_string(),
                point.game.to_string(),
                point.sigma.to_string(),
                point.budget.to_string(),
                seed.to_string(),
            ];
            match &results[run_index as usize] {
                Ok(ep) => rows.push(
                    [
                        prefix,
                        vec![
                            if ep.win { "1".into() } else { "0".into() },
                            ep.score.to_string(),
                            ep.mean_iterations.to_string(),
                            String::new(),
                        ],
                    ]
                    .concat(),
                ),
                Err(msg) => {
                    failures += 1;
                    rows.push(
                        [prefix, vec![String::new(), String::new(), String::new(), msg.clone()]]
                            .concat(),
                    );
                }
            }
        }
    }

    write_rows(&cfg.out, HEADER, &rows)?;
    Ok(SweepSummary {
        rows: rows.len(),
        failures,
        out: cfg.out.clone(),
        aggregate_out: None,
    })
}

/// Fraction of winning episodes over `reps` seeds; used by the robustness
/// tests and handy for quick calibration.
pub fn win_rate(
    spec: &EnvSpec,
    variant: Variant,
    sigma: f64,
    budget: u32,
    search: &crate::config::SearchParams,
    base_seed: u64,
    reps: u32,
) -> f64 {
    let wins: u32 = (0..reps)
        .into_par_iter()
        .map(|r| {
            match play_episode(spec, variant, sigma, budget, search, base_seed.wrapping_add(r as u64))
            {
                Ok(ep) if ep.win => 1,
                _ => 0,
            }
        })
        .sum();
    wins as f64 / reps as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SearchParams;
    use ordsketch::env::GameKind;

    fn tiny_spec() -> EnvSpec {
        let mut spec = EnvSpec::new(GameKind::MoleField);
        spec.tick_limit = 15;
        spec.enemies = 1;
        spec
    }

    #[test]
    fn episodes_terminate_and_are_deterministic() {
        let spec = tiny_spec();
        let params = SearchParams::default();
        let a = play_episode(&spec, Variant::Mcts, 0.0, 20, &params, 5).unwrap();
        let b = play_episode(&spec, Variant::Mcts, 0.0, 20, &params, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.moves <= 15);
        assert_eq!(a.mean_iterations, 20.0);
    }

    #[test]
    fn budget_one_still_finishes() {
        let spec = tiny_spec();
        let params = SearchParams::default();
        let ep = play_episode(&spec, Variant::Omcts2Log3, 0.0, 1, &params, 3).unwrap();
        assert!(ep.moves >= 1);
    }

    #[test]
    fn all_variants_play_all_games() {
        let params = SearchParams::default();
        for game in [GameKind::KeyDoor, GameKind::MoleField, GameKind::Hunter] {
            let mut spec = EnvSpec::new(game);
            spec.tick_limit = 10;
            for variant in Variant::ALL {
                let ep = play_episode(&spec, variant, 1.0, 10, &params, 1).unwrap();
                assert!(ep.moves >= 1, "{game:?}/{variant:?}");
            }
        }
    }
}
