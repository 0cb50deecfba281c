use num::{BigRational, One, Signed};

use crate::error::{Error, Result};
use crate::rational::{format_rational, rat};

/// Comparison tolerance for the floating-point closed forms.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub region_ok: bool,
    pub region_label: &'static str,
}

fn check_param(name: &'static str, value: f64, ok: bool, domain: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ParamDomain {
            name,
            value: value.to_string(),
            domain,
        })
    }
}

pub fn a_star(sigma: f64) -> f64 {
    1.0 + sigma + (sigma * (sigma + 2.0)).sqrt()
}

/// Worst-case ratio along the line x = a*y in the smoothness analysis.
pub fn g_fn(a: f64, sigma: f64) -> f64 {
    sigma * (a * a - 1.0)
        / ((1.0 + sigma) * a * a - (2.0 * sigma + 1.0) * a + 2.0 * sigma * (sigma + 1.0))
}

/// Smallest rho for which the smoothness argument still applies at this sigma.
pub fn h_sigma(sigma: f64) -> Result<f64> {
    check_param("sigma", sigma, sigma > 0.0, "> 0")?;
    Ok(g_fn(a_star(sigma), sigma))
}

pub fn b_star(sigma: f64) -> f64 {
    1.0 + sigma + (sigma * (sigma + 0.5)).sqrt()
}

fn h2_fn(a: f64, sigma: f64) -> f64 {
    sigma * (2.0 * a * a - 3.0 * a + 1.0)
        / (2.0 * (1.0 + sigma) * a * a - (5.0 * sigma + 4.0) * a
            + 2.0 * (1.0 + sigma) * (1.0 + sigma))
}

/// Margin between the two per-line maxima whose non-negativity closes the
/// upper-bound case analysis; checked numerically over a sigma sweep.
pub fn delta_sigma(sigma: f64) -> Result<f64> {
    check_param("sigma", sigma, sigma >= 0.5, ">= 1/2")?;
    Ok(g_fn(a_star(sigma), sigma) - h2_fn(b_star(sigma), sigma))
}

pub fn poa_upper_bound(rho: f64, sigma: f64) -> Result<BoundValue> {
    check_param("rho", rho, rho >= 0.0, ">= 0")?;
    check_param("sigma", sigma, sigma >= 0.0, ">= 0")?;
    let value = (rho + 1.0).max((2.0 * rho * (1.0 + sigma) + 1.0) / (rho + 1.0));
    let (region_ok, region_label) = if 0.5 <= sigma && sigma <= rho && rho <= 2.0 * sigma {
        (true, "1/2 <= sigma <= rho <= 2*sigma")
    } else if 1.0 <= 2.0 * sigma && 2.0 * sigma <= rho {
        (true, "rho >= 2*sigma >= 1")
    } else if sigma == 1.0 && h_sigma(1.0)? <= rho && rho <= 2.0 {
        (true, "sigma = 1, h(sigma) <= rho <= 2*sigma")
    } else {
        (false, "outside proven regions")
    };
    Ok(BoundValue {
        value,
        region_ok,
        region_label,
    })
}

pub fn pos_upper_bound(rho: f64, sigma: f64) -> Result<BoundValue> {
    check_param("sigma", sigma, sigma > 0.0, "> 0")?;
    check_param("rho", rho, rho >= 0.0, ">= 0")?;
    let w = (sigma * (sigma + 2.0)).sqrt();
    let value = (w + sigma) / (w + rho - sigma);
    let region_ok = 2.0 * sigma / (1.0 + sigma + w) <= rho && rho <= 2.0 * sigma;
    Ok(BoundValue {
        value,
        region_ok,
        region_label: if region_ok {
            "2*sigma/(1+sigma+sqrt(sigma*(sigma+2))) <= rho <= 2*sigma"
        } else {
            "outside proven region"
        },
    })
}

pub fn network_pos_bound(rho: f64) -> Result<BoundValue> {
    check_param("rho", rho, rho > 0.0, "> 0")?;
    let (value, region_label) = if rho <= 1.0 {
        (4.0 / (rho * (4.0 - rho)), "0 < rho <= 1")
    } else if rho <= 2.0 {
        (4.0 / (2.0 + rho), "1 <= rho <= 2")
    } else {
        ((2.0 + rho) / 4.0, "rho >= 2")
    };
    Ok(BoundValue {
        value,
        region_ok: true,
        region_label,
    })
}

/// Limit of the stability construction's cost ratio, maximized over the
/// player-count proportion a.
pub fn pos_lower_limit(rho: f64, sigma: f64) -> Result<f64> {
    check_param("sigma", sigma, sigma > 0.0, "> 0")?;
    check_param("rho", rho, rho >= 0.0, ">= 0")?;
    let a = -0.5 + (0.25 + 1.0 / (2.0 * sigma)).sqrt();
    Ok((2.0 * sigma * (1.0 + a) * (1.0 + a) + 1.0)
        / (rho * (1.0 + 2.0 * a) + 1.0 + 2.0 * sigma * a * a))
}

/// Exact finite-size cost ratios of the lower-bound constructions.
#[derive(Debug, Clone)]
pub enum RatioKind {
    PoaGeneral {
        rho: BigRational,
        sigma: BigRational,
    },
    PoaNetwork {
        n: usize,
        rho: BigRational,
        sigma: BigRational,
    },
    PosGeneral {
        n1: usize,
        n2: usize,
        rho: BigRational,
        sigma: BigRational,
        eps: BigRational,
    },
    TwoPlayerTight {
        rho: BigRational,
    },
    SingletonPos {
        n: usize,
        i: usize,
        sigma: BigRational,
        eps: BigRational,
    },
}

fn check_rational(name: &'static str, value: &BigRational, ok: bool, domain: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ParamDomain {
            name,
            value: format_rational(value),
            domain,
        })
    }
}

fn nr(x: usize) -> BigRational {
    rat(x as i64, 1)
}

pub fn finite_ratio(kind: &RatioKind) -> Result<BigRational> {
    let one = BigRational::one();
    let two = rat(2, 1);
    match kind {
        RatioKind::PoaGeneral { rho, sigma } => {
            check_rational("rho", rho, !rho.is_negative(), ">= 0")?;
            check_rational("sigma", sigma, !sigma.is_negative(), ">= 0")?;
            Ok((&one + &two * rho * (&one + sigma)) / (&one + rho))
        }
        RatioKind::PoaNetwork { n, rho, sigma } => {
            if *n < 2 {
                return Err(Error::ParamDomain {
                    name: "n",
                    value: n.to_string(),
                    domain: ">= 2",
                });
            }
            check_rational("rho", rho, !rho.is_negative(), ">= 0")?;
            check_rational("sigma", sigma, !sigma.is_negative(), ">= 0")?;
            let nn = nr(*n);
            let ne = &nn * ((&one + &two * rho * (&one + sigma)) * &nn - &two * rho * sigma);
            let comparison = &nn * ((&one + rho) * &nn + rho);
            Ok(ne / comparison)
        }
        RatioKind::PosGeneral {
            n1,
            n2,
            rho,
            sigma,
            eps,
        } => {
            if *n1 < 2 {
                return Err(Error::ParamDomain {
                    name: "n1",
                    value: n1.to_string(),
                    domain: ">= 2",
                });
            }
            check_rational("rho", rho, !rho.is_negative(), ">= 0")?;
            check_rational("sigma", sigma, !sigma.is_negative(), ">= 0")?;
            check_rational("eps", eps, !eps.is_negative(), ">= 0")?;
            let alpha = rho * (rat(*n1 as i64, 2) + nr(*n2) - rat(1, 2)) + &one + eps;
            let ne = nr(n1 * (n1 + 1)) / &two
                + nr(*n2)
                + sigma * nr(n1 + n2) * (nr(n1 + n2) - &one);
            let comparison = nr(*n1) * alpha
                + nr(n1 * (n1 - 1)) / &two
                + nr(*n2)
                + sigma * nr(*n2) * (nr(*n2) - &one);
            Ok(ne / comparison)
        }
        RatioKind::TwoPlayerTight { rho } => {
            check_rational("rho", rho, !rho.is_negative(), ">= 0")?;
            Ok(&one + rho)
        }
        RatioKind::SingletonPos { n, i, sigma, eps } => {
            if i % 2 != 0 || *i < 1 || i + 1 > *n {
                return Err(Error::ParamDomain {
                    name: "i",
                    value: i.to_string(),
                    domain: "even, 1 <= i <= n-1",
                });
            }
            check_rational("sigma", sigma, !sigma.is_negative(), ">= 0")?;
            check_rational("eps", eps, !eps.is_negative(), ">= 0")?;
            let half_i = i / 2;
            let m = n - half_i;
            let ne = nr(*n) + sigma * nr(n * (n - 1));
            let comparison = nr(half_i)
                + nr(m) * (nr(1 + i) + eps)
                + sigma * nr(half_i) * (nr(half_i) - &one);
            Ok(ne / comparison)
        }
    }
}
