#![allow(dead_code)]

use num::BigRational;
use rand::seq::index;
use rand::Rng;

use congestion_core::game::{Game, Profile, Resource};
use congestion_core::network::{enumerate_paths, Arc, NetworkGame};
use congestion_core::rational::rat;

pub fn random_rational<R: Rng>(rng: &mut R, max: i64) -> BigRational {
    let q = rng.random_range(1..=3i64);
    rat(rng.random_range(0..=max * q), q)
}

pub fn random_game<R: Rng>(
    rng: &mut R,
    max_players: usize,
    max_resources: usize,
    max_strategies: usize,
    zero_b: bool,
) -> Game {
    loop {
        let m = rng.random_range(1..=max_resources);
        let n = rng.random_range(1..=max_players);
        let resources = (0..m)
            .map(|_| {
                let a = random_rational(rng, 10);
                let b = if zero_b { rat(0, 1) } else { random_rational(rng, 10) };
                Resource::new(a, b)
            })
            .collect();
        let strategies = (0..n)
            .map(|_| {
                let count = rng.random_range(1..=max_strategies);
                let mut set: Vec<Vec<usize>> = Vec::new();
                for _ in 0..count {
                    let size = rng.random_range(1..=m);
                    let mut s = index::sample(rng, m, size).into_vec();
                    s.sort_unstable();
                    if !set.contains(&s) {
                        set.push(s);
                    }
                }
                set
            })
            .collect();
        if let Ok(game) = Game::new(resources, strategies) {
            return game;
        }
    }
}

pub fn random_profile<R: Rng>(rng: &mut R, game: &Game) -> Profile {
    (0..game.n())
        .map(|i| rng.random_range(0..game.strategies[i].len()))
        .collect()
}

/// Small random s-t network with at most 6 simple paths, or None when the
/// sampled arcs leave the sink unreachable.
pub fn random_network<R: Rng>(rng: &mut R) -> Option<(NetworkGame, Vec<Vec<usize>>)> {
    let nodes = rng.random_range(2..=4usize);
    let arc_count = rng.random_range(1..=8usize);
    let arcs = (0..arc_count)
        .map(|_| {
            let tail = rng.random_range(0..nodes);
            let head = loop {
                let h = rng.random_range(0..nodes);
                if h != tail {
                    break h;
                }
            };
            Arc {
                tail,
                head,
                a: random_rational(rng, 3),
                b: random_rational(rng, 3),
            }
        })
        .collect();
    let net = NetworkGame {
        nodes,
        source: 0,
        sink: nodes - 1,
        n: rng.random_range(1..=3usize),
        arcs,
    };
    match enumerate_paths(&net, 64) {
        Ok(paths) if paths.len() <= 6 => Some((net, paths)),
        _ => None,
    }
}
