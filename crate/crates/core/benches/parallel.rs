//! Sequential against rayon execution for the fan-out points: swap-in
//! evaluation, value-iteration sweeps and sharded rollout.
//!
//! Without the `parallel` feature both variants run sequentially.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rfa_core::agents::{train_q_agent, Greedy, RewardSpec, TrainConfig, UniformRandom};
use rfa_core::eval::{evaluate_swap_in, value_iteration, EvalConfig, SolveOptions};
use rfa_core::exec::Exec;
use rfa_core::game::{Game, GameConfig, Player};
use rfa_core::pipeline::{explore_phase, rollout_phase, PipelineConfig};
use rfa_core::seed;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn connect_k() -> Game {
    Game::new(GameConfig::connect_k(4, 4, 3)).unwrap()
}

fn swap_in(c: &mut Criterion) {
    let game = connect_k();
    let victim = train_q_agent(
        &game,
        &UniformRandom,
        &RewardSpec::GameReward,
        &TrainConfig::new(5_000, 0.9, 0),
        &mut seed::stream(0, "bench", 0),
    )
    .unwrap();
    let mut cfg = EvalConfig::new(2_000, 1);
    cfg.opening_moves = 1;
    let mut group = c.benchmark_group("swap_in_2000_games");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| evaluate_swap_in(&game, &Greedy(&victim), &UniformRandom, &cfg, exec).unwrap())
        });
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let game = connect_k();
    let mut group = c.benchmark_group("value_iteration_connect_4x4");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = SolveOptions { exec, ..SolveOptions::new(0.9) };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| value_iteration(&game, Player::P1, &opts).unwrap())
        });
    }
    group.finish();
}

fn rollout(c: &mut Criterion) {
    let game = connect_k();
    let victim = train_q_agent(
        &game,
        &UniformRandom,
        &RewardSpec::GameReward,
        &TrainConfig::new(5_000, 0.9, 0),
        &mut seed::stream(0, "bench", 0),
    )
    .unwrap();
    let cfg = PipelineConfig {
        explore_episodes: 2_000,
        rollout_transitions: 20_000,
        victim_action_target: 100_000,
        ..PipelineConfig::default()
    };
    let explorer = explore_phase(&game, &victim, &cfg, &mut seed::stream(0, "bench-explore", 0)).unwrap();
    let mut group = c.benchmark_group("rollout_8_shards");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| rollout_phase(&game, &explorer, &victim, &cfg, &mut seed::stream(0, "bench-rollout", 0), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, swap_in, solve, rollout);
criterion_main!(benches);
