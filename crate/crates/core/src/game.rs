use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resource {
    pub a: BigRational,
    pub b: BigRational,
}

impl Resource {
    pub fn new(a: BigRational, b: BigRational) -> Resource {
        Resource { a, b }
    }
}

/// A strategy is a set of resource indices, kept sorted.
pub type Strategy = Vec<usize>;
/// A profile assigns each player a strategy index.
pub type Profile = Vec<usize>;
pub type LoadVector = Vec<u64>;

/// Atomic congestion game with affine resource costs a_e*x + b_e.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    pub resources: Vec<Resource>,
    pub strategies: Vec<Vec<Strategy>>,
}

impl Game {
    /// Builds a game, sorting each strategy and validating all invariants.
    pub fn new(resources: Vec<Resource>, strategies: Vec<Vec<Strategy>>) -> Result<Game> {
        let mut game = Game { resources, strategies };
        for per_player in &mut game.strategies {
            for strategy in per_player {
                strategy.sort_unstable();
            }
        }
        game.validate()?;
        Ok(game)
    }

    pub fn n(&self) -> usize {
        self.strategies.len()
    }

    pub fn num_resources(&self) -> usize {
        self.resources.len()
    }

    pub fn validate(&self) -> Result<()> {
        for (index, r) in self.resources.iter().enumerate() {
            if r.a.is_negative() || r.b.is_negative() {
                return Err(Error::InvalidResource {
                    index,
                    reason: format!(
                        "negative coefficients a={}, b={}",
                        format_rational(&r.a),
                        format_rational(&r.b)
                    ),
                });
            }
        }
        if self.strategies.is_empty() {
            return Err(Error::NoPlayers);
        }
        for (player, per_player) in self.strategies.iter().enumerate() {
            if per_player.is_empty() {
                return Err(Error::InvalidStrategy {
                    player,
                    reason: "no strategies".into(),
                });
            }
            for strategy in per_player {
                if strategy.is_empty() {
                    return Err(Error::InvalidStrategy {
                        player,
                        reason: "empty strategy set".into(),
                    });
                }
                for pair in strategy.windows(2) {
                    if pair[0] >= pair[1] {
                        return Err(Error::InvalidStrategy {
                            player,
                            reason: format!("duplicate or unsorted resource {}", pair[1]),
                        });
                    }
                }
                if let Some(&last) = strategy.last() {
                    if last >= self.resources.len() {
                        return Err(Error::InvalidStrategy {
                            player,
                            reason: format!("resource index {last} out of range"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_profile(&self, profile: &[usize]) -> Result<()> {
        if profile.len() != self.n() {
            return Err(Error::ProfileLength {
                got: profile.len(),
                expected: self.n(),
            });
        }
        for (player, &index) in profile.iter().enumerate() {
            let count = self.strategies[player].len();
            if index >= count {
                return Err(Error::StrategyOutOfRange { player, index, count });
            }
        }
        Ok(())
    }
}

fn check_nonnegative(name: &'static str, value: &BigRational) -> Result<()> {
    if value.is_negative() {
        return Err(Error::ParamDomain {
            name,
            value: format_rational(value),
            domain: ">= 0",
        });
    }
    Ok(())
}

/// Number of players using each resource under `profile`.
pub fn load_vector(game: &Game, profile: &[usize]) -> Result<LoadVector> {
    game.check_profile(profile)?;
    let mut loads = vec![0u64; game.num_resources()];
    for (player, &choice) in profile.iter().enumerate() {
        for &e in &game.strategies[player][choice] {
            loads[e] += 1;
        }
    }
    Ok(loads)
}

fn rational_load(x: u64) -> BigRational {
    rat(x as i64, 1)
}

/// Cost perceived by player i: sum over used resources of
/// a_e*(1 + rho*(x_e - 1)) + b_e.
pub fn perceived_cost(
    game: &Game,
    profile: &[usize],
    player: usize,
    rho: &BigRational,
) -> Result<BigRational> {
    check_nonnegative("rho", rho)?;
    let loads = load_vector(game, profile)?;
    if player >= game.n() {
        return Err(Error::StrategyOutOfRange {
            player,
            index: 0,
            count: 0,
        });
    }
    let mut total = BigRational::zero();
    for &e in &game.strategies[player][profile[player]] {
        let r = &game.resources[e];
        let x = rational_load(loads[e]);
        total += &r.a * (BigRational::one() + rho * (&x - BigRational::one())) + &r.b;
    }
    Ok(total)
}

/// Social cost at perception sigma: sum over resources of
/// x_e * (a_e*(1 + sigma*(x_e - 1)) + b_e).
pub fn social_cost(game: &Game, profile: &[usize], sigma: &BigRational) -> Result<BigRational> {
    check_nonnegative("sigma", sigma)?;
    let loads = load_vector(game, profile)?;
    let mut total = BigRational::zero();
    for (e, r) in game.resources.iter().enumerate() {
        if loads[e] == 0 {
            continue;
        }
        let x = rational_load(loads[e]);
        total += &x * (&r.a * (BigRational::one() + sigma * (&x - BigRational::one())) + &r.b);
    }
    Ok(total)
}

/// Exact potential: sum_e a_e*x(x+1)/2 + b_e*x + (rho-1)*sum_e a_e*(x-1)x/2.
/// Deviations change this by exactly the deviating player's perceived cost
/// difference.
pub fn potential(game: &Game, profile: &[usize], rho: &BigRational) -> Result<BigRational> {
    check_nonnegative("rho", rho)?;
    let loads = load_vector(game, profile)?;
    let half = rat(1, 2);
    let mut total = BigRational::zero();
    for (e, r) in game.resources.iter().enumerate() {
        if loads[e] == 0 {
            continue;
        }
        let x = rational_load(loads[e]);
        let pairs = &half * &x * (&x - BigRational::one());
        total += &r.a * (&half * &x * (&x + BigRational::one())) + &r.b * &x;
        total += (rho - BigRational::one()) * &r.a * pairs;
    }
    Ok(total)
}

/// Altruistic objective for rho in [1,2]: a (2-rho) weighting of own cost
/// plus (rho-1) of the classical social cost.
pub fn altruistic_cost(
    game: &Game,
    profile: &[usize],
    player: usize,
    rho: &BigRational,
) -> Result<BigRational> {
    let one = BigRational::one();
    let two = rat(2, 1);
    if rho < &one || rho > &two {
        return Err(Error::ParamDomain {
            name: "rho",
            value: format_rational(rho),
            domain: "[1, 2]",
        });
    }
    let own = perceived_cost(game, profile, player, &one)?;
    let social = social_cost(game, profile, &one)?;
    Ok((&two - rho) * own + (rho - &one) * social)
}

/// Cost under the tax interpretation for rho > 0: each used resource charges
/// a_e*x_e + b_e/rho + a_e*(1-rho)/rho.
pub fn tax_cost(
    game: &Game,
    profile: &[usize],
    player: usize,
    rho: &BigRational,
) -> Result<BigRational> {
    if !rho.is_positive() {
        return Err(Error::ParamDomain {
            name: "rho",
            value: format_rational(rho),
            domain: "> 0",
        });
    }
    let loads = load_vector(game, profile)?;
    if player >= game.n() {
        return Err(Error::StrategyOutOfRange {
            player,
            index: 0,
            count: 0,
        });
    }
    let one = BigRational::one();
    let mut total = BigRational::zero();
    for &e in &game.strategies[player][profile[player]] {
        let r = &game.resources[e];
        let x = rational_load(loads[e]);
        total += &r.a * &x + &r.b / rho + (&one - rho) / rho * &r.a;
    }
    Ok(total)
}
