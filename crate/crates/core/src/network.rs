use std::collections::BTreeSet;

use num::{BigRational, BigUint, One, Signed, Zero};

use crate::equilibria::EnumerationBudget;
use crate::error::{Error, Result};
use crate::game::{Game, Resource};
use crate::rational::{format_rational, rat};

pub const DEFAULT_PATH_CAP: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub a: BigRational,
    pub b: BigRational,
}

/// Symmetric network congestion game: n players each route one unit from
/// source to sink over a directed multigraph with affine arc costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkGame {
    pub nodes: usize,
    pub source: usize,
    pub sink: usize,
    pub n: usize,
    pub arcs: Vec<Arc>,
}

impl NetworkGame {
    pub fn validate(&self) -> Result<()> {
        if self.source >= self.nodes || self.sink >= self.nodes {
            return Err(Error::InvalidNetwork("terminal node out of range".into()));
        }
        if self.source == self.sink {
            return Err(Error::InvalidNetwork("source equals sink".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidNetwork("player count must be positive".into()));
        }
        for (idx, arc) in self.arcs.iter().enumerate() {
            if arc.tail >= self.nodes || arc.head >= self.nodes {
                return Err(Error::InvalidNetwork(format!("arc {idx} endpoint out of range")));
            }
            if arc.tail == arc.head {
                return Err(Error::InvalidNetwork(format!("arc {idx} is a self-loop")));
            }
            if arc.a.is_negative() || arc.b.is_negative() {
                return Err(Error::InvalidNetwork(format!(
                    "arc {idx} has negative coefficients a={}, b={}",
                    format_rational(&arc.a),
                    format_rational(&arc.b)
                )));
            }
        }
        Ok(())
    }
}

fn dfs_paths(
    net: &NetworkGame,
    adjacency: &[Vec<usize>],
    node: usize,
    visited: &mut [bool],
    current: &mut Vec<usize>,
    paths: &mut Vec<Vec<usize>>,
    cap: u64,
) -> Result<()> {
    if node == net.sink {
        if paths.len() as u64 >= cap {
            return Err(Error::PathCapExceeded(cap));
        }
        let mut path = current.clone();
        path.sort_unstable();
        paths.push(path);
        return Ok(());
    }
    for &arc_idx in &adjacency[node] {
        let head = net.arcs[arc_idx].head;
        if visited[head] {
            continue;
        }
        visited[head] = true;
        current.push(arc_idx);
        dfs_paths(net, adjacency, head, visited, current, paths, cap)?;
        current.pop();
        visited[head] = false;
    }
    Ok(())
}

/// All simple source-sink paths as sorted arc-index sets, in lexicographic
/// order.
pub fn enumerate_paths(net: &NetworkGame, cap: u64) -> Result<Vec<Vec<usize>>> {
    net.validate()?;
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); net.nodes];
    for (idx, arc) in net.arcs.iter().enumerate() {
        adjacency[arc.tail].push(idx);
    }
    let mut paths = Vec::new();
    let mut visited = vec![false; net.nodes];
    let mut current = Vec::new();
    visited[net.source] = true;
    dfs_paths(net, &adjacency, net.source, &mut visited, &mut current, &mut paths, cap)?;
    if paths.is_empty() {
        return Err(Error::NoPath);
    }
    paths.sort();
    Ok(paths)
}

/// Compiles the network into a symmetric congestion game whose resources are
/// the arcs and whose common strategy set is the path list.
pub fn to_congestion_game(net: &NetworkGame, cap: u64) -> Result<Game> {
    let paths = enumerate_paths(net, cap)?;
    let resources = net
        .arcs
        .iter()
        .map(|arc| Resource::new(arc.a.clone(), arc.b.clone()))
        .collect();
    Game::new(resources, vec![paths; net.n])
}

/// Arc loads induced by a profile over the given path list.
pub fn flow_of_profile(
    net: &NetworkGame,
    paths: &[Vec<usize>],
    profile: &[usize],
) -> Result<Vec<u64>> {
    if profile.len() != net.n {
        return Err(Error::ProfileLength {
            got: profile.len(),
            expected: net.n,
        });
    }
    let mut flow = vec![0u64; net.arcs.len()];
    for (player, &choice) in profile.iter().enumerate() {
        let path = paths.get(choice).ok_or(Error::StrategyOutOfRange {
            player,
            index: choice,
            count: paths.len(),
        })?;
        for &e in path {
            flow[e] += 1;
        }
    }
    Ok(flow)
}

/// Validates an integral source-sink flow of value n with acyclic support.
pub fn check_flow(net: &NetworkGame, flow: &[u64]) -> Result<()> {
    net.validate()?;
    if flow.len() != net.arcs.len() {
        return Err(Error::InfeasibleFlow(format!(
            "got {} arc loads, expected {}",
            flow.len(),
            net.arcs.len()
        )));
    }
    let mut balance = vec![0i128; net.nodes];
    for (idx, arc) in net.arcs.iter().enumerate() {
        balance[arc.tail] -= flow[idx] as i128;
        balance[arc.head] += flow[idx] as i128;
    }
    for v in 0..net.nodes {
        let expected = if v == net.source {
            -(net.n as i128)
        } else if v == net.sink {
            net.n as i128
        } else {
            0
        };
        if balance[v] != expected {
            return Err(Error::InfeasibleFlow(format!(
                "node {v} has net balance {}, expected {expected}",
                balance[v]
            )));
        }
    }
    // Kahn elimination on the support
    let mut indegree = vec![0usize; net.nodes];
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); net.nodes];
    for (idx, arc) in net.arcs.iter().enumerate() {
        if flow[idx] > 0 {
            indegree[arc.head] += 1;
            out_arcs[arc.tail].push(idx);
        }
    }
    let mut queue: Vec<usize> = (0..net.nodes).filter(|&v| indegree[v] == 0).collect();
    let mut processed = 0usize;
    while let Some(v) = queue.pop() {
        processed += 1;
        for &idx in &out_arcs[v] {
            let head = net.arcs[idx].head;
            indegree[head] -= 1;
            if indegree[head] == 0 {
                queue.push(head);
            }
        }
    }
    if processed < net.nodes {
        return Err(Error::CyclicFlow);
    }
    Ok(())
}

/// Potential of an arc-load vector under perception rho.
pub fn potential_of_flow(net: &NetworkGame, flow: &[u64], rho: &BigRational) -> Result<BigRational> {
    if rho.is_negative() {
        return Err(Error::ParamDomain {
            name: "rho",
            value: format_rational(rho),
            domain: ">= 0",
        });
    }
    if flow.len() != net.arcs.len() {
        return Err(Error::InfeasibleFlow(format!(
            "got {} arc loads, expected {}",
            flow.len(),
            net.arcs.len()
        )));
    }
    let half = rat(1, 2);
    let one = BigRational::one();
    let mut total = BigRational::zero();
    for (idx, arc) in net.arcs.iter().enumerate() {
        if flow[idx] == 0 {
            continue;
        }
        let x = rat(flow[idx] as i64, 1);
        total += &arc.a * (&half * &x * (&x + &one)) + &arc.b * &x;
        total += (rho - &one) * &arc.a * (&half * &x * (&x - &one));
    }
    Ok(total)
}

fn multiset_count(paths: usize, n: usize) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..n {
        num *= BigUint::from(paths + i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

fn collect_flows(
    paths: &[Vec<usize>],
    start: usize,
    remaining: usize,
    flow: &mut Vec<u64>,
    out: &mut BTreeSet<Vec<u64>>,
) {
    if remaining == 0 {
        out.insert(flow.clone());
        return;
    }
    for k in start..paths.len() {
        for &e in &paths[k] {
            flow[e] += 1;
        }
        collect_flows(paths, k, remaining - 1, flow, out);
        for &e in &paths[k] {
            flow[e] -= 1;
        }
    }
}

/// All distinct arc-load vectors of integral source-sink flows of value n,
/// enumerated through path combinations.
pub fn feasible_flows(
    net: &NetworkGame,
    paths: &[Vec<usize>],
    budget: &EnumerationBudget,
) -> Result<Vec<Vec<u64>>> {
    let count = multiset_count(paths.len(), net.n);
    if count > BigUint::from(budget.max_profiles) {
        return Err(Error::BudgetExceeded {
            profiles: count.to_string(),
            budget: budget.max_profiles,
        });
    }
    let mut set = BTreeSet::new();
    let mut flow = vec![0u64; net.arcs.len()];
    collect_flows(paths, 0, net.n, &mut flow, &mut set);
    Ok(set.into_iter().collect())
}

/// Local optimality of an acyclic flow f: for every feasible flow g,
/// sum over overloaded arcs of (f_e - g_e) * d_e(f_e) stays below the slack
/// sum over underloaded arcs of (g_e - f_e) * d_e(f_e + 1), where
/// d_e(x) = a_e*(1 + rho*(x-1)) + b_e. Holds exactly for the flows that
/// minimize the potential globally.
pub fn fotakis_condition(
    net: &NetworkGame,
    flow: &[u64],
    rho: &BigRational,
    cap: u64,
    budget: &EnumerationBudget,
) -> Result<bool> {
    if rho.is_negative() {
        return Err(Error::ParamDomain {
            name: "rho",
            value: format_rational(rho),
            domain: ">= 0",
        });
    }
    check_flow(net, flow)?;
    let paths = enumerate_paths(net, cap)?;
    let alternatives = feasible_flows(net, &paths, budget)?;
    let one = BigRational::one();
    let d = |e: usize, x: u64| -> BigRational {
        let arc = &net.arcs[e];
        &arc.a * (&one + rho * rat(x as i64 - 1, 1)) + &arc.b
    };
    for g in &alternatives {
        let mut delta = BigRational::zero();
        for e in 0..net.arcs.len() {
            if flow[e] > g[e] {
                delta += rat((flow[e] - g[e]) as i64, 1) * d(e, flow[e]);
            } else if flow[e] < g[e] {
                delta -= rat((g[e] - flow[e]) as i64, 1) * d(e, flow[e] + 1);
            }
        }
        if delta.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}
