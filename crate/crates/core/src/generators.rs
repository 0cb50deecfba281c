use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{Game, Profile, Resource};
use crate::network::{enumerate_paths, Arc, NetworkGame, DEFAULT_PATH_CAP};
use crate::rational::{format_rational, rat};

/// Social cost of a fixed profile as an affine function of sigma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaAffine {
    pub constant: BigRational,
    pub sigma_coeff: BigRational,
}

impl SigmaAffine {
    pub fn new(constant: BigRational, sigma_coeff: BigRational) -> SigmaAffine {
        SigmaAffine { constant, sigma_coeff }
    }

    pub fn eval(&self, sigma: &BigRational) -> BigRational {
        &self.constant + &self.sigma_coeff * sigma
    }
}

/// A lower-bound instance together with the profiles its analysis compares.
#[derive(Debug, Clone)]
pub struct ConstructionOutput {
    pub name: &'static str,
    pub game: Game,
    pub network: Option<NetworkGame>,
    pub paths: Option<Vec<Vec<usize>>>,
    pub rho: BigRational,
    pub designated_ne: Profile,
    pub comparison: Profile,
    pub predicted_ne_cost: SigmaAffine,
    pub predicted_comparison_cost: SigmaAffine,
}

pub fn default_eps() -> BigRational {
    rat(1, 1000)
}

fn nr(x: usize) -> BigRational {
    rat(x as i64, 1)
}

fn check_rho(rho: &BigRational) -> Result<()> {
    if rho.is_negative() {
        return Err(Error::ParamDomain {
            name: "rho",
            value: format_rational(rho),
            domain: ">= 0",
        });
    }
    Ok(())
}

fn check_eps(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() {
        return Err(Error::ParamDomain {
            name: "eps",
            value: format_rational(eps),
            domain: "> 0",
        });
    }
    Ok(())
}

/// Cyclic instance on 2n resources: n unit-slope resources h_i and n
/// rho-slope resources g_i. Player i chooses {h_i, g_i} or
/// {h_{i+1}, g_{i-1}, g_{i+1}}; everyone picking the second option is an
/// equilibrium with cost ratio (1+2*rho*(1+sigma))/(1+rho) against the first.
pub fn gen_poa_general(n: usize, rho: &BigRational) -> Result<ConstructionOutput> {
    if n < 3 {
        return Err(Error::ParamDomain {
            name: "n",
            value: n.to_string(),
            domain: ">= 3",
        });
    }
    check_rho(rho)?;
    let zero = BigRational::zero();
    let mut resources = Vec::with_capacity(2 * n);
    for _ in 0..n {
        resources.push(Resource::new(BigRational::one(), zero.clone()));
    }
    for _ in 0..n {
        resources.push(Resource::new(rho.clone(), zero.clone()));
    }
    let mut strategies = Vec::with_capacity(n);
    for i in 0..n {
        let own = vec![i, n + i];
        let shifted = vec![(i + 1) % n, n + (i + n - 1) % n, n + (i + 1) % n];
        strategies.push(vec![own, shifted]);
    }
    let game = Game::new(resources, strategies)?;
    let one = BigRational::one();
    let two = rat(2, 1);
    Ok(ConstructionOutput {
        name: "poa_general",
        game,
        network: None,
        paths: None,
        rho: rho.clone(),
        designated_ne: vec![1; n],
        comparison: vec![0; n],
        predicted_ne_cost: SigmaAffine::new(nr(n) * (&one + &two * rho), &two * rho * nr(n)),
        predicted_comparison_cost: SigmaAffine::new(nr(n) * (&one + rho), zero),
    })
}

/// Two players on four resources; the equilibrium ({1,3},{0,2}) costs
/// 2*(1+rho) against the optimum ({0},{1}) of cost 2.
pub fn gen_two_player_tight(rho: &BigRational) -> Result<ConstructionOutput> {
    check_rho(rho)?;
    let zero = BigRational::zero();
    let one = BigRational::one();
    let resources = vec![
        Resource::new(one.clone(), zero.clone()),
        Resource::new(one.clone(), zero.clone()),
        Resource::new(rho.clone(), zero.clone()),
        Resource::new(rho.clone(), zero.clone()),
    ];
    let strategies = vec![
        vec![vec![0], vec![1, 3]],
        vec![vec![1], vec![0, 2]],
    ];
    let game = Game::new(resources, strategies)?;
    let two = rat(2, 1);
    Ok(ConstructionOutput {
        name: "two_player_tight",
        game,
        network: None,
        paths: None,
        rho: rho.clone(),
        designated_ne: vec![1, 1],
        comparison: vec![0, 0],
        predicted_ne_cost: SigmaAffine::new(&two * (&one + rho), zero.clone()),
        predicted_comparison_cost: SigmaAffine::new(two, zero),
    })
}

fn beta_index(n1: usize, owner: usize, member: usize) -> usize {
    n1 + owner * (n1 - 1) + if member < owner { member } else { member - 1 }
}

/// Stability gap instance: n1 players alternate between a private bundle P_i
/// and a shared bundle A_i, n2 players sit on the shared resource. The eps
/// bump on the private resources makes all-A the unique equilibrium while
/// all-P stays nearly optimal.
pub fn gen_pos_general(
    n1: usize,
    n2: usize,
    rho: &BigRational,
    eps: &BigRational,
) -> Result<ConstructionOutput> {
    if n1 < 2 {
        return Err(Error::ParamDomain {
            name: "n1",
            value: n1.to_string(),
            domain: ">= 2",
        });
    }
    check_rho(rho)?;
    check_eps(eps)?;
    let one = BigRational::one();
    let zero = BigRational::zero();
    let half = rat(1, 2);
    // alpha = rho*(n1/2 + n2 - 1/2) + 1 + eps
    let alpha = rho * (rat(n1 as i64, 2) + nr(n2) - &half) + &one + eps;
    let gamma = n1 + n1 * (n1 - 1);
    let mut resources = Vec::with_capacity(gamma + 1);
    for _ in 0..n1 {
        resources.push(Resource::new(alpha.clone(), zero.clone()));
    }
    for _ in 0..n1 * (n1 - 1) {
        resources.push(Resource::new(half.clone(), zero.clone()));
    }
    resources.push(Resource::new(one.clone(), zero.clone()));

    let mut strategies = Vec::with_capacity(n1 + n2);
    for i in 0..n1 {
        let mut private = vec![i];
        let mut shared = Vec::with_capacity(n1);
        for j in 0..n1 {
            if j == i {
                continue;
            }
            private.push(beta_index(n1, j, i));
            shared.push(beta_index(n1, i, j));
        }
        shared.push(gamma);
        strategies.push(vec![private, shared]);
    }
    for _ in 0..n2 {
        strategies.push(vec![vec![gamma]]);
    }
    let game = Game::new(resources, strategies)?;

    let mut designated_ne = vec![1; n1];
    designated_ne.extend(vec![0; n2]);
    let comparison = vec![0; n1 + n2];
    let n_all = nr(n1 + n2);
    let ne_cost = SigmaAffine::new(
        nr(n1 * (n1 + 1)) / rat(2, 1) + nr(n2),
        &n_all * (&n_all - &one),
    );
    let comparison_cost = SigmaAffine::new(
        nr(n1) * &alpha + nr(n1 * (n1 - 1)) / rat(2, 1) + nr(n2),
        nr(n2) * (nr(n2) - &one),
    );
    Ok(ConstructionOutput {
        name: "pos_general",
        game,
        network: None,
        paths: None,
        rho: rho.clone(),
        designated_ne,
        comparison,
        predicted_ne_cost: ne_cost,
        predicted_comparison_cost: comparison_cost,
    })
}

/// Singleton instance pinned to rho = i/(n-1): one cheap resource and
/// n - i/2 expensive ones. All players crowding the cheap resource is the
/// unique equilibrium; spreading out is near-optimal.
pub fn gen_singleton_pos(n: usize, i: usize, eps: &BigRational) -> Result<ConstructionOutput> {
    if i % 2 != 0 || i < 1 || i + 1 > n {
        return Err(Error::ParamDomain {
            name: "i",
            value: i.to_string(),
            domain: "even, 1 <= i <= n-1",
        });
    }
    check_eps(eps)?;
    let rho = rat(i as i64, (n - 1) as i64);
    let one = BigRational::one();
    let zero = BigRational::zero();
    let m = n - i / 2;
    let expensive = nr(1 + i) + eps;
    let mut resources = Vec::with_capacity(1 + m);
    resources.push(Resource::new(one.clone(), zero.clone()));
    for _ in 0..m {
        resources.push(Resource::new(expensive.clone(), zero.clone()));
    }
    let singletons: Vec<Vec<usize>> = (0..=m).map(|e| vec![e]).collect();
    let game = Game::new(resources, vec![singletons; n])?;

    let mut comparison = vec![0; i / 2];
    comparison.extend(1..=m);
    let ne_cost = SigmaAffine::new(nr(n), nr(n * (n - 1)));
    let comparison_cost = SigmaAffine::new(
        nr(i / 2) + nr(m) * &expensive,
        nr(i / 2) * (nr(i / 2) - &one),
    );
    Ok(ConstructionOutput {
        name: "singleton_pos",
        game,
        network: None,
        paths: None,
        rho,
        designated_ne: vec![0; n],
        comparison,
        predicted_ne_cost: ne_cost,
        predicted_comparison_cost: comparison_cost,
    })
}

/// Layered routing instance: n principal chains of 2n-1 arcs with zero-cost
/// diagonal shortcuts. Each player's shifting path loads every even-layer arc
/// twice, which is an equilibrium costing n*((1+2*rho*(1+sigma))*n - 2*rho*sigma)
/// against n*((1+rho)*n + rho) for the disjoint chains.
pub fn gen_poa_network(n: usize, rho: &BigRational) -> Result<ConstructionOutput> {
    if n < 2 {
        return Err(Error::ParamDomain {
            name: "n",
            value: n.to_string(),
            domain: ">= 2",
        });
    }
    check_rho(rho)?;
    let one = BigRational::one();
    let zero = BigRational::zero();
    let width = 2 * n - 2; // internal nodes per chain
    let nodes = 2 + n * width;
    // 1-based position p along chain i: p=1 is the source, p=2n the sink
    let node_id = |i: usize, p: usize| -> usize {
        if p == 1 {
            0
        } else if p == 2 * n {
            1
        } else {
            2 + i * width + (p - 2)
        }
    };
    let principal = |i: usize, j: usize| -> usize { i * (2 * n - 1) + (j - 1) };
    let connecting = |i: usize, k: usize| -> usize { n * (2 * n - 1) + i * (n - 1) + (k - 1) };

    let mut arcs = Vec::with_capacity(n * (2 * n - 1) + n * (n - 1));
    for i in 0..n {
        for j in 1..=(2 * n - 1) {
            let a = if j == 1 || j == 2 * n - 1 {
                &one + rho
            } else if j % 2 == 0 {
                rho.clone()
            } else {
                one.clone()
            };
            arcs.push(Arc {
                tail: node_id(i, j),
                head: node_id(i, j + 1),
                a,
                b: zero.clone(),
            });
        }
    }
    for i in 0..n {
        for k in 1..=(n - 1) {
            arcs.push(Arc {
                tail: node_id(i, 2 * k + 1),
                head: node_id((i + 1) % n, 2 * k),
                a: zero.clone(),
                b: zero.clone(),
            });
        }
    }
    let net = NetworkGame {
        nodes,
        source: 0,
        sink: 1,
        n,
        arcs,
    };
    let paths = enumerate_paths(&net, DEFAULT_PATH_CAP)?;
    let resources = net
        .arcs
        .iter()
        .map(|arc| Resource::new(arc.a.clone(), arc.b.clone()))
        .collect();
    let game = Game::new(resources, vec![paths.clone(); n])?;

    let locate = |arc_set: &mut Vec<usize>| -> Result<usize> {
        arc_set.sort_unstable();
        paths
            .binary_search(arc_set)
            .map_err(|_| Error::InvalidNetwork("designated path not in path list".into()))
    };
    let mut designated_ne = Vec::with_capacity(n);
    for k in 0..n {
        let mut set = vec![principal(k, 1), principal(k, 2), connecting(k, 1)];
        for j in 1..=(n.saturating_sub(2)) {
            let p = (k + j) % n;
            set.extend([
                principal(p, 2 * j),
                principal(p, 2 * j + 1),
                principal(p, 2 * j + 2),
                connecting(p, j + 1),
            ]);
        }
        let last = (k + n - 1) % n;
        set.extend([principal(last, 2 * n - 2), principal(last, 2 * n - 1)]);
        designated_ne.push(locate(&mut set)?);
    }
    let mut comparison = Vec::with_capacity(n);
    for i in 0..n {
        let mut set: Vec<usize> = (1..=(2 * n - 1)).map(|j| principal(i, j)).collect();
        comparison.push(locate(&mut set)?);
    }

    let two = rat(2, 1);
    let ne_cost = SigmaAffine::new(
        nr(n * n) * (&one + &two * rho),
        &two * rho * nr(n * (n - 1)),
    );
    let comparison_cost = SigmaAffine::new(nr(n) * ((&one + rho) * nr(n) + rho), zero);
    Ok(ConstructionOutput {
        name: "poa_network",
        game,
        network: Some(net),
        paths: Some(paths),
        rho: rho.clone(),
        designated_ne,
        comparison,
        predicted_ne_cost: ne_cost,
        predicted_comparison_cost: comparison_cost,
    })
}
