use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rfa_core::agents::EntropySite;
use rfa_core::game::Player;
use rfa_core::pipeline::PipelineConfig;

#[derive(Debug, Parser)]
#[command(name = "rfa", version, about = "Reward-free attacks on tabular game-playing agents")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a tabular agent against a uniform-random opponent.
    TrainVictim(TrainArgs),
    /// Train a tabular attacker against a frozen victim table.
    TrainAttacker(TrainArgs),
    /// Run the explore, rollout and plan phases.
    Pipeline(PipelineArgs),
    /// Swap-in evaluation of an attacker against a victim.
    Evaluate(EvaluateArgs),
    /// Check the discounted-value identity on every winning state.
    #[command(name = "verify-theorem1")]
    VerifyTheorem1(VerifyArgs),
    /// Evaluate the trajectory-count bound.
    SampleBound(BoundArgs),
    /// Summarize match or curve CSV files.
    Report(ReportArgs),
}

/// Flags shared by every subcommand that plays games.
#[derive(Debug, Args)]
pub struct Common {
    /// Game preset: connect-k, connect-k-3x3, breakthrough-variant,
    /// breakthrough-variant-3x3, or `connect-k:R,C,K` and
    /// `breakthrough-variant:R,C,P`.
    #[arg(long, default_value = "connect-k")]
    pub game: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on this value.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    /// key=value file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Seat {
    P1,
    P2,
}

impl From<Seat> for Player {
    fn from(s: Seat) -> Player {
        match s {
            Seat::P1 => Player::P1,
            Seat::P2 => Player::P2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RewardKind {
    Game,
    AntagonisticValue,
    MoveMax,
    VictimEntropy,
    EmpiricalVictimEntropy,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Site {
    Faced,
    Next,
}

impl From<Site> for EntropySite {
    fn from(s: Site) -> EntropySite {
        match s {
            Site::Faced => EntropySite::Faced,
            Site::Next => EntropySite::Next,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: Common,
    /// Defaults to `game` for train-victim; required for train-attacker.
    #[arg(long, value_enum)]
    pub reward: Option<RewardKind>,
    #[arg(long, default_value_t = 20_000)]
    pub episodes: u64,
    /// Defaults to 0.5 for entropy rewards and 0.9 otherwise.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    pub lr: f64,
    #[arg(long, default_value_t = 1.0)]
    pub epsilon_start: f64,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon_end: f64,
    /// Learner seat; p1 for train-victim and p2 for train-attacker.
    #[arg(long, value_enum)]
    pub seat: Option<Seat>,
    /// Uniformly random learner moves at the start of every episode.
    #[arg(long, default_value_t = 0)]
    pub opening_moves: u32,
    /// Frozen opponent table; also the source of victim-derived rewards.
    #[arg(long)]
    pub victim_table: Option<PathBuf>,
    /// How the opponent table picks moves: greedy, softmax or
    /// epsilon-greedy:<e>.
    #[arg(long, default_value = "greedy")]
    pub victim_behavior: String,
    /// Victim action counts for the empirical entropy reward.
    #[arg(long)]
    pub counts: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub order: f64,
    #[arg(long, value_enum, default_value = "faced")]
    pub site: Site,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub penalty: f64,
    /// Episodes between curve points (0 disables the curve).
    #[arg(long, default_value_t = 500)]
    pub eval_every: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub eval_games: u64,
    /// Random opening moves per side in curve evaluation.
    #[arg(long, default_value_t = 0)]
    pub eval_opening: u32,
    #[arg(long, default_value = "rfa-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Phase {
    Explore,
    Rollout,
    Plan,
    All,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Explore => "explore",
            Phase::Rollout => "rollout",
            Phase::Plan => "plan",
            Phase::All => "all",
        }
    }
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "all")]
    pub phase: Phase,
    #[arg(long)]
    pub victim_table: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "p1")]
    pub victim_seat: Seat,
    /// greedy, softmax or epsilon-greedy:<e>.
    #[arg(long, default_value = "softmax")]
    pub victim_behavior: String,
    /// Explorer table read by the rollout phase (default: <out>/explorer.txt).
    #[arg(long)]
    pub explorer: Option<PathBuf>,
    /// Dataset read by the plan phase (default: <out>/dataset.txt).
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Count table read by the plan phase (default: <out>/counts.txt).
    #[arg(long)]
    pub counts: Option<PathBuf>,
    #[arg(long, default_value_t = PipelineConfig::default().explore_episodes)]
    pub explore_episodes: u64,
    #[arg(long, default_value_t = PipelineConfig::default().explore_lr)]
    pub explore_lr: f64,
    #[arg(long, default_value_t = PipelineConfig::default().explore_gamma)]
    pub explore_gamma: f64,
    /// Attacker transitions to store.
    #[arg(long, default_value_t = PipelineConfig::default().rollout_transitions)]
    pub transitions: u64,
    /// Victim actions to record.
    #[arg(long, default_value_t = PipelineConfig::default().victim_action_target)]
    pub victim_actions: u64,
    #[arg(long, default_value_t = PipelineConfig::default().rollout_epsilon)]
    pub rollout_epsilon: f64,
    #[arg(long, default_value_t = PipelineConfig::default().rollout_shards)]
    pub shards: usize,
    #[arg(long, default_value_t = PipelineConfig::default().renyi_order)]
    pub order: f64,
    #[arg(long, default_value_t = PipelineConfig::default().unobserved_penalty, allow_negative_numbers = true)]
    pub penalty: f64,
    #[arg(long, default_value_t = PipelineConfig::default().plan_epochs)]
    pub plan_epochs: u64,
    #[arg(long, default_value_t = PipelineConfig::default().plan_lr)]
    pub plan_lr: f64,
    #[arg(long, default_value_t = PipelineConfig::default().plan_gamma)]
    pub plan_gamma: f64,
    #[arg(long, default_value_t = PipelineConfig::default().opening_moves)]
    pub opening_moves: u32,
    #[arg(long, default_value = "rfa-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub victim: PathBuf,
    /// Attacker table, or `uniform` for the random baseline.
    #[arg(long)]
    pub attacker: String,
    #[arg(long, value_enum, default_value = "p1")]
    pub victim_seat: Seat,
    #[arg(long, default_value_t = 5)]
    pub opening_moves: u32,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub games: u64,
    #[arg(long, default_value_t = 1000)]
    pub max_attempts: u64,
    /// Match records.
    #[arg(long, default_value = "matches.csv")]
    pub out: PathBuf,
    /// One-row summary CSV.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Row label in the summary; defaults to the attacker argument.
    #[arg(long)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Seats {
    Both,
    P1,
    P2,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Discount, strictly between 0 and 1.
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value = "both")]
    pub seats: Seats,
    #[arg(long, default_value_t = rfa_core::eval::DEFAULT_STATE_CAP)]
    pub state_cap: usize,
    #[arg(long, default_value = "theorem.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Horizon.
    #[arg(long = "H")]
    pub horizon: u64,
    /// Number of states.
    #[arg(long = "S")]
    pub states: u64,
    /// Number of actions.
    #[arg(long = "A")]
    pub actions: u64,
    #[arg(long)]
    pub eps: f64,
    /// Failure probability.
    #[arg(long)]
    pub p: f64,
    /// Renyi order in (0, 1).
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Match or curve CSV files, all of one kind and one game.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Seat of the victim in the match files.
    #[arg(long, value_enum, default_value = "p1")]
    pub victim_seat: Seat,
    /// Summary CSV (match inputs only).
    #[arg(long, default_value = "summary.csv")]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub title: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}
