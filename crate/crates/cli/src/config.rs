//! Declarative experiment plans.
//!
//! A plan is one TOML file mirroring the structures below; unknown keys are
//! rejected. The same file drives `quantile-sweep` and `gameplay` runs, and
//! the whole output CSV is a pure function of (config, base seed): run
//! seeds derive as `base_seed + run_index`, where runs enumerate the grid
//! in declaration order with repetitions innermost.

use std::fmt;
use std::path::PathBuf;

use serde::Deserialize;

use ordsketch::bucketing::GrowthPolicy;
use ordsketch::distributions::SourceKind;
use ordsketch::env::{EnvSpec, GameKind};
use ordsketch::search::Variant;

/// Experiment family; must match the subcommand the plan is passed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Family {
    #[serde(rename = "quantile-error")]
    QuantileError,
    #[serde(rename = "gameplay")]
    GamePlay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum PolicyName {
    #[serde(rename = "first-n")]
    FirstN,
    #[serde(rename = "k-log-growing")]
    KLogGrowing,
    #[serde(rename = "k-log-growing-first-n")]
    KLogGrowingFirstN,
}

impl PolicyName {
    pub fn build(&self, k: f64, n: usize, m: usize) -> GrowthPolicy {
        match self {
            PolicyName::FirstN => GrowthPolicy::FirstN { n },
            PolicyName::KLogGrowing => GrowthPolicy::KLogGrowing { k, m },
            PolicyName::KLogGrowingFirstN => GrowthPolicy::KLogGrowingFirstN { k, n, m },
        }
    }
}

impl fmt::Display for PolicyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolicyName::FirstN => "first-n",
            PolicyName::KLogGrowing => "k-log-growing",
            PolicyName::KLogGrowingFirstN => "k-log-growing-first-n",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistributionName {
    Gaussian,
    Exponential,
    CustomStep,
}

impl DistributionName {
    pub fn kind(&self) -> SourceKind {
        match self {
            DistributionName::Gaussian => SourceKind::gaussian_default(),
            DistributionName::Exponential => SourceKind::exponential_default(),
            DistributionName::CustomStep => SourceKind::CustomStep,
        }
    }
}

impl fmt::Display for DistributionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistributionName::Gaussian => "gaussian",
            DistributionName::Exponential => "exponential",
            DistributionName::CustomStep => "custom-step",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum VariantName {
    #[serde(rename = "mcts")]
    Mcts,
    #[serde(rename = "omcts-exact")]
    OmctsExact,
    #[serde(rename = "omcts-fix2")]
    OmctsFix2,
    #[serde(rename = "omcts-2log")]
    Omcts2Log,
    #[serde(rename = "omcts-2log3")]
    Omcts2Log3,
}

impl VariantName {
    pub fn variant(&self) -> Variant {
        match self {
            VariantName::Mcts => Variant::Mcts,
            VariantName::OmctsExact => Variant::OmctsExact,
            VariantName::OmctsFix2 => Variant::OmctsFix2,
            VariantName::Omcts2Log => Variant::Omcts2Log,
            VariantName::Omcts2Log3 => Variant::Omcts2Log3,
        }
    }
}

impl fmt::Display for VariantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VariantName::Mcts => "mcts",
            VariantName::OmctsExact => "omcts-exact",
            VariantName::OmctsFix2 => "omcts-fix2",
            VariantName::Omcts2Log => "omcts-2log",
            VariantName::Omcts2Log3 => "omcts-2log3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameName {
    KeyDoor,
    MoleField,
    Hunter,
}

impl GameName {
    pub fn kind(&self) -> GameKind {
        match self {
            GameName::KeyDoor => GameKind::KeyDoor,
            GameName::MoleField => GameKind::MoleField,
            GameName::Hunter => GameKind::Hunter,
        }
    }
}

impl fmt::Display for GameName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameName::KeyDoor => "key-door",
            GameName::MoleField => "mole-field",
            GameName::Hunter => "hunter",
        })
    }
}

fn default_ks() -> Vec<f64> {
    vec![2.0]
}
fn default_ns() -> Vec<usize> {
    vec![5]
}
fn default_ms() -> Vec<usize> {
    vec![3]
}

/// Plan for the quantile-error family.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantileConfig {
    pub family: Family,
    pub repetitions: u32,
    pub base_seed: u64,
    pub out: PathBuf,
    pub grid: QuantileGrid,
}

/// Cross product of all axes; axes irrelevant to a policy (e.g. `ns` for
/// k-log-growing) still enumerate, so keep them single-valued unless the
/// duplication is wanted.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantileGrid {
    pub policies: Vec<PolicyName>,
    #[serde(default = "default_ks")]
    pub ks: Vec<f64>,
    #[serde(default = "default_ns")]
    pub ns: Vec<usize>,
    #[serde(default = "default_ms")]
    pub ms: Vec<usize>,
    pub sample_counts: Vec<u64>,
    pub distributions: Vec<DistributionName>,
}

/// Plan for the game-play family.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameplayConfig {
    pub family: Family,
    pub repetitions: u32,
    pub base_seed: u64,
    pub out: PathBuf,
    pub grid: GameplayGrid,
    #[serde(default)]
    pub search: SearchParams,
    #[serde(default)]
    pub env: EnvParams,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameplayGrid {
    pub variants: Vec<VariantName>,
    pub games: Vec<GameName>,
    pub sigmas: Vec<f64>,
    pub budgets: Vec<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchParams {
    pub exploration: f64,
    pub rollout_depth: u32,
    pub win_bonus: f64,
    pub loss_penalty: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            exploration: 0.5,
            rollout_depth: 15,
            win_bonus: ordsketch::env::DEFAULT_WIN_BONUS,
            loss_penalty: ordsketch::env::DEFAULT_LOSS_PENALTY,
        }
    }
}

/// Environment overrides; unset fields fall back to the per-game defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvParams {
    pub width: Option<u8>,
    pub height: Option<u8>,
    pub tick_limit: Option<u32>,
    pub enemies: Option<u8>,
    pub spawn_rate: Option<f64>,
    pub kills_for_boss: Option<u32>,
}

impl EnvParams {
    pub fn spec_for(&self, game: GameKind) -> EnvSpec {
        let mut spec = EnvSpec::new(game);
        if let Some(w) = self.width {
            spec.width = w;
        }
        if let Some(h) = self.height {
            spec.height = h;
        }
        if let Some(t) = self.tick_limit {
            spec.tick_limit = t;
        }
        if let Some(e) = self.enemies {
            spec.enemies = e;
        }
        if let Some(s) = self.spawn_rate {
            spec.spawn_rate = s;
        }
        if let Some(k) = self.kills_for_boss {
            spec.kills_for_boss = k;
        }
        spec
    }
}

impl QuantileConfig {
    /// Every violation with the offending key; empty means runnable.
    pub fn validate(&self) -> Vec<String> {
        let mut errors = Vec::new();
        if self.family != Family::QuantileError {
            errors.push("family: expected \"quantile-error\" for this subcommand".into());
        }
        if self.repetitions == 0 {
            errors.push("repetitions: must be >= 1".into());
        }
        let g = &self.grid;
        for (key, empty) in [
            ("grid.policies", g.policies.is_empty()),
            ("grid.ks", g.ks.is_empty()),
            ("grid.ns", g.ns.is_empty()),
            ("grid.ms", g.ms.is_empty()),
            ("grid.sample_counts", g.sample_counts.is_empty()),
            ("grid.distributions", g.distributions.is_empty()),
        ] {
            if empty {
                errors.push(format!("{key}: must not be empty"));
            }
        }
        for (i, k) in g.ks.iter().enumerate() {
            if !(k.is_finite() && *k > 0.0) {
                errors.push(format!("grid.ks[{i}]: k must be finite and > 0 (got {k})"));
            }
        }
        for (i, m) in g.ms.iter().enumerate() {
            if *m == 0 || m % 2 == 0 {
                errors.push(format!("grid.ms[{i}]: m must be odd and >= 1 (got {m})"));
            }
        }
        for (i, t) in g.sample_counts.iter().enumerate() {
            // Comparing q buckets against q-quantiles needs at least q <= t
            // samples; t < 2 cannot even hold the minimal two buckets.
            if *t < 2 {
                errors.push(format!(
                    "grid.sample_counts[{i}]: need at least 2 samples per run (got {t})"
                ));
            }
        }
        errors
    }

    pub fn grid_len(&self) -> usize {
        let g = &self.grid;
        g.policies.len()
            * g.ks.len()
            * g.ns.len()
            * g.ms.len()
            * g.distributions.len()
            * g.sample_counts.len()
    }
}

impl GameplayConfig {
    pub fn validate(&self) -> Vec<String> {
        let mut errors = Vec::new();
        if self.family != Family::GamePlay {
            errors.push("family: expected \"gameplay\" for this subcommand".into());
        }
        if self.repetitions == 0 {
            errors.push("repetitions: must be >= 1".into());
        }
        let g = &self.grid;
        for (key, empty) in [
            ("grid.variants", g.variants.is_empty()),
            ("grid.games", g.games.is_empty()),
            ("grid.sigmas", g.sigmas.is_empty()),
            ("grid.budgets", g.budgets.is_empty()),
        ] {
            if empty {
                errors.push(format!("{key}: must not be empty"));
            }
        }
        for (i, s) in g.sigmas.iter().enumerate() {
            if !(s.is_finite() && *s >= 0.0) {
                errors.push(format!("grid.sigmas[{i}]: sigma must be >= 0 (got {s})"));
            }
        }
        for (i, b) in g.budgets.iter().enumerate() {
            if *b == 0 {
                errors.push(format!("grid.budgets[{i}]: budget must be >= 1"));
            }
        }
        if !(self.search.exploration.is_finite() && self.search.exploration >= 0.0) {
            errors.push(format!(
                "search.exploration: must be >= 0 (got {})",
                self.search.exploration
            ));
        }
        for game in &g.games {
            if let Err(e) = self.env.spec_for(game.kind()).validate() {
                errors.push(format!("env ({game}): {e}"));
            }
        }
        errors
    }

    pub fn grid_len(&self) -> usize {
        let g = &self.grid;
        g.variants.len() * g.games.len() * g.sigmas.len() * g.budgets.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUANTILE_TOML: &str = r#"
        family = "quantile-error"
        repetitions = 3
        base_seed = 42
        out = "sweep.csv"

        [grid]
        policies = ["k-log-growing", "first-n"]
        ks = [1.0, 2.0]
        ms = [3]
        sample_counts = [1000]
        distributions = ["gaussian", "custom-step"]
    "#;

    #[test]
    fn quantile_plan_parses_with_defaults() {
        let cfg: QuantileConfig = toml::from_str(QUANTILE_TOML).unwrap();
        assert!(cfg.validate().is_empty());
        assert_eq!(cfg.grid.ns, vec![5], "ns defaults to 5");
        assert_eq!(cfg.grid_len(), 2 * 2 * 1 * 1 * 2 * 1);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = QUANTILE_TOML.replace("base_seed = 42", "base_seed = 42\nextra_knob = 1");
        let err = toml::from_str::<QuantileConfig>(&bad).unwrap_err();
        assert!(err.to_string().contains("extra_knob"), "{err}");
    }

    #[test]
    fn offending_keys_are_named() {
        let bad = QUANTILE_TOML
            .replace("ks = [1.0, 2.0]", "ks = [-1.0]")
            .replace("ms = [3]", "ms = [4]")
            .replace("sample_counts = [1000]", "sample_counts = [1]");
        let cfg: QuantileConfig = toml::from_str(&bad).unwrap();
        let errors = cfg.validate();
        assert!(errors.iter().any(|e| e.starts_with("grid.ks[0]")), "{errors:?}");
        assert!(errors.iter().any(|e| e.starts_with("grid.ms[0]")), "{errors:?}");
        assert!(
            errors.iter().any(|e| e.starts_with("grid.sample_counts[0]")),
            "{errors:?}"
        );
    }

    const GAMEPLAY_TOML: &str = r#"
        family = "gameplay"
        repetitions = 2
        base_seed = 7
        out = "games.csv"

        [grid]
        variants = ["mcts", "omcts-exact", "omcts-2log3"]
        games = ["key-door"]
        sigmas = [0.0, 10.0]
        budgets = [50]

        [search]
        exploration = 0.5

        [env]
        tick_limit = 100
    "#;

    #[test]
    fn gameplay_plan_parses() {
        let cfg: GameplayConfig = toml::from_str(GAMEPLAY_TOML).unwrap();
        assert!(cfg.validate().is_empty());
        assert_eq!(cfg.grid_len(), 3 * 1 * 2 * 1);
        assert_eq!(cfg.search.rollout_depth, 15, "defaults fill in");
        let spec = cfg.env.spec_for(GameKind::KeyDoor);
        assert_eq!(spec.tick_limit, 100);
        assert_eq!(spec.width, 7);
    }

    #[test]
    fn family_mismatch_is_flagged() {
        let cfg: GameplayConfig =
            toml::from_str(&GAMEPLAY_TOML.replace("\"gameplay\"", "\"quantile-error\"")).unwrap();
        assert!(cfg.validate().iter().any(|e| e.starts_with("family")));
    }

    #[test]
    fn env_errors_carry_the_game() {
        let cfg: GameplayConfig =
            toml::from_str(&GAMEPLAY_TOML.replace("tick_limit = 100", "enemies = 9")).unwrap();
        let errors = cfg.validate();
        assert!(
            errors.iter().any(|e| e.starts_with("env (key-door)")),
            "{errors:?}"
        );
    }
}
