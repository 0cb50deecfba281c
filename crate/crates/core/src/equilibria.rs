use std::fmt;

use num::{BigRational, BigUint, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::game::{perceived_cost, potential, social_cost, Game, Profile};
use crate::rational::{format_rational, rational_f64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_profiles: u64,
}

impl EnumerationBudget {
    pub fn new(max_profiles: u64) -> EnumerationBudget {
        EnumerationBudget { max_profiles }
    }
}

impl Default for EnumerationBudget {
    fn default() -> EnumerationBudget {
        EnumerationBudget { max_profiles: 10_000_000 }
    }
}

/// Iterates all profiles in lexicographic order (last player fastest).
pub struct ProfileIter {
    sizes: Vec<usize>,
    next: Option<Profile>,
}

impl ProfileIter {
    pub fn new(game: &Game) -> ProfileIter {
        ProfileIter {
            sizes: game.strategies.iter().map(|s| s.len()).collect(),
            next: Some(vec![0; game.n()]),
        }
    }
}

impl Iterator for ProfileIter {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for pos in (0..succ.len()).rev() {
            succ[pos] += 1;
            if succ[pos] < self.sizes[pos] {
                self.next = Some(succ);
                return Some(current);
            }
            succ[pos] = 0;
        }
        Some(current)
    }
}

pub fn profile_space_size(game: &Game) -> BigUint {
    game.strategies
        .iter()
        .map(|s| BigUint::from(s.len()))
        .product()
}

/// Number of profiles if it fits the budget, an error otherwise.
pub fn check_budget(game: &Game, budget: &EnumerationBudget) -> Result<u64> {
    let size = profile_space_size(game);
    match size.to_u64() {
        Some(k) if k <= budget.max_profiles => Ok(k),
        _ => Err(Error::BudgetExceeded {
            profiles: size.to_string(),
            budget: budget.max_profiles,
        }),
    }
}

/// Equilibrium test under an arbitrary per-player objective.
pub fn is_equilibrium_with<F>(game: &Game, profile: &[usize], mut cost: F) -> Result<bool>
where
    F: FnMut(&[usize], usize) -> Result<BigRational>,
{
    game.check_profile(profile)?;
    let mut work: Profile = profile.to_vec();
    for player in 0..game.n() {
        let current = cost(&work, player)?;
        let original = work[player];
        for alt in 0..game.strategies[player].len() {
            if alt == original {
                continue;
            }
            work[player] = alt;
            let deviated = cost(&work, player)?;
            work[player] = original;
            if deviated < current {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn enumerate_equilibria_with<F>(
    game: &Game,
    budget: &EnumerationBudget,
    mut cost: F,
) -> Result<Vec<Profile>>
where
    F: FnMut(&[usize], usize) -> Result<BigRational>,
{
    check_budget(game, budget)?;
    let mut out = Vec::new();
    for profile in ProfileIter::new(game) {
        if is_equilibrium_with(game, &profile, &mut cost)? {
            out.push(profile);
        }
    }
    Ok(out)
}

/// Pure Nash test under perceived costs: no player can strictly improve.
pub fn is_nash(game: &Game, profile: &[usize], rho: &BigRational) -> Result<bool> {
    is_equilibrium_with(game, profile, |p, i| perceived_cost(game, p, i, rho))
}

/// lambda-approximate Nash under classical costs (rho = 1).
pub fn is_approx_nash(game: &Game, profile: &[usize], lambda: &BigRational) -> Result<bool> {
    if lambda < &BigRational::one() {
        return Err(Error::ParamDomain {
            name: "lambda",
            value: format_rational(lambda),
            domain: ">= 1",
        });
    }
    game.check_profile(profile)?;
    let one = BigRational::one();
    let mut work: Profile = profile.to_vec();
    for player in 0..game.n() {
        let current = perceived_cost(game, &work, player, &one)?;
        let original = work[player];
        for alt in 0..game.strategies[player].len() {
            if alt == original {
                continue;
            }
            work[player] = alt;
            let deviated = perceived_cost(game, &work, player, &one)?;
            work[player] = original;
            if current > lambda * deviated {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All pure Nash profiles in lexicographic order.
pub fn enumerate_nash(
    game: &Game,
    rho: &BigRational,
    budget: &EnumerationBudget,
) -> Result<Vec<Profile>> {
    enumerate_equilibria_with(game, budget, |p, i| perceived_cost(game, p, i, rho))
}

/// Lexicographically first profile minimizing social cost at sigma.
pub fn social_optimum(
    game: &Game,
    sigma: &BigRational,
    budget: &EnumerationBudget,
) -> Result<(Profile, BigRational)> {
    check_budget(game, budget)?;
    let mut best: Option<(Profile, BigRational)> = None;
    for profile in ProfileIter::new(game) {
        let cost = social_cost(game, &profile, sigma)?;
        if best.as_ref().map_or(true, |(_, c)| cost < *c) {
            best = Some((profile, cost));
        }
    }
    best.ok_or(Error::NoPlayers)
}

/// Lexicographically first global potential minimizer; always a Nash profile.
pub fn potential_minimizer(
    game: &Game,
    rho: &BigRational,
    budget: &EnumerationBudget,
) -> Result<(Profile, BigRational)> {
    check_budget(game, budget)?;
    let mut best: Option<(Profile, BigRational)> = None;
    for profile in ProfileIter::new(game) {
        let value = potential(game, &profile, rho)?;
        if best.as_ref().map_or(true, |(_, v)| value < *v) {
            best = Some((profile, value));
        }
    }
    best.ok_or(Error::NoPlayers)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioValue {
    Finite(BigRational),
    Infinite,
}

impl RatioValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            RatioValue::Finite(r) => rational_f64(r),
            RatioValue::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            RatioValue::Finite(r) => Some(r),
            RatioValue::Infinite => None,
        }
    }
}

impl fmt::Display for RatioValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioValue::Finite(r) => write!(f, "{}", format_rational(r)),
            RatioValue::Infinite => write!(f, "inf"),
        }
    }
}

/// Ratio of social costs. A zero denominator yields 1 when the numerator is
/// also zero and infinity otherwise.
pub fn cost_ratio(numerator: &BigRational, denominator: &BigRational) -> RatioValue {
    if denominator.is_zero() {
        if numerator.is_zero() {
            RatioValue::Finite(BigRational::one())
        } else {
            RatioValue::Infinite
        }
    } else {
        RatioValue::Finite(numerator / denominator)
    }
}

#[derive(Debug, Clone)]
pub struct RatioResult {
    pub value: RatioValue,
    pub numerator_profile: Profile,
    pub denominator_profile: Profile,
}

/// Everything a full enumeration of the profile space yields.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub ne_count: u64,
    pub worst_ne: Profile,
    pub worst_ne_cost: BigRational,
    pub best_ne: Profile,
    pub best_ne_cost: BigRational,
    pub optimum: Profile,
    pub optimum_cost: BigRational,
    pub potential_min: Profile,
    pub potential_value: BigRational,
    pub poa: RatioValue,
    pub pos: RatioValue,
}

/// Single sweep over all profiles computing equilibria, optimum, potential
/// minimizer, and both cost ratios.
pub fn analyze(
    game: &Game,
    rho: &BigRational,
    sigma: &BigRational,
    budget: &EnumerationBudget,
) -> Result<Analysis> {
    check_budget(game, budget)?;
    let mut ne_count = 0u64;
    let mut worst: Option<(Profile, BigRational)> = None;
    let mut best: Option<(Profile, BigRational)> = None;
    let mut opt: Option<(Profile, BigRational)> = None;
    let mut pot: Option<(Profile, BigRational)> = None;
    for profile in ProfileIter::new(game) {
        let cost = social_cost(game, &profile, sigma)?;
        let value = potential(game, &profile, rho)?;
        if opt.as_ref().map_or(true, |(_, c)| cost < *c) {
            opt = Some((profile.clone(), cost.clone()));
        }
        if pot.as_ref().map_or(true, |(_, v)| value < *v) {
            pot = Some((profile.clone(), value));
        }
        if is_nash(game, &profile, rho)? {
            ne_count += 1;
            if worst.as_ref().map_or(true, |(_, c)| cost > *c) {
                worst = Some((profile.clone(), cost.clone()));
            }
            if best.as_ref().map_or(true, |(_, c)| cost < *c) {
                best = Some((profile, cost));
            }
        }
    }
    let (optimum, optimum_cost) = opt.ok_or(Error::NoPlayers)?;
    let (potential_min, potential_value) = pot.ok_or(Error::NoPlayers)?;
    let (worst_ne, worst_ne_cost) = worst.ok_or(Error::NoEquilibrium)?;
    let (best_ne, best_ne_cost) = best.ok_or(Error::NoEquilibrium)?;
    let poa = cost_ratio(&worst_ne_cost, &optimum_cost);
    let pos = cost_ratio(&best_ne_cost, &optimum_cost);
    Ok(Analysis {
        ne_count,
        worst_ne,
        worst_ne_cost,
        best_ne,
        best_ne_cost,
        optimum,
        optimum_cost,
        potential_min,
        potential_value,
        poa,
        pos,
    })
}

/// Worst equilibrium cost over optimum cost.
pub fn price_of_anarchy(
    game: &Game,
    rho: &BigRational,
    sigma: &BigRational,
    budget: &EnumerationBudget,
) -> Result<RatioResult> {
    let analysis = analyze(game, rho, sigma, budget)?;
    Ok(RatioResult {
        value: analysis.poa,
        numerator_profile: analysis.worst_ne,
        denominator_profile: analysis.optimum,
    })
}

/// Best equilibrium cost over optimum cost.
pub fn price_of_stability(
    game: &Game,
    rho: &BigRational,
    sigma: &BigRational,
    budget: &EnumerationBudget,
) -> Result<RatioResult> {
    let analysis = analyze(game, rho, sigma, budget)?;
    Ok(RatioResult {
        value: analysis.pos,
        numerator_profile: analysis.best_ne,
        denominator_profile: analysis.optimum,
    })
}

/// Repeatedly moves the lowest-index improvable player to its lowest-index
/// best response; returns the reached profile and the number of moves.
pub fn best_response_dynamics(
    game: &Game,
    start: &[usize],
    rho: &BigRational,
    max_steps: u64,
) -> Result<(Profile, u64)> {
    game.check_profile(start)?;
    let mut profile: Profile = start.to_vec();
    let mut steps = 0u64;
    'search: loop {
        for player in 0..game.n() {
            let current = perceived_cost(game, &profile, player, rho)?;
            let original = profile[player];
            let mut best: Option<(BigRational, usize)> = None;
            for alt in 0..game.strategies[player].len() {
                if alt == original {
                    continue;
                }
                profile[player] = alt;
                let cost = perceived_cost(game, &profile, player, rho)?;
                if best.as_ref().map_or(true, |(c, _)| cost < *c) {
                    best = Some((cost, alt));
                }
            }
            profile[player] = original;
            if let Some((cost, alt)) = best {
                if cost < current {
                    if steps == max_steps {
                        return Err(Error::MaxStepsExceeded(max_steps));
                    }
                    steps += 1;
                    profile[player] = alt;
                    continue 'search;
                }
            }
        }
        return Ok((profile, steps));
    }
}
