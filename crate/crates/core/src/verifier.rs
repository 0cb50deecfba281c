use std::str::FromStr;

use num::{BigRational, One, Signed};

use crate::bounds;
use crate::error::{Error, Result};
use crate::rational::{format_rational, rat, rational_f64, sign_with_sqrt, sqrt_lower, sqrt_upper};

pub const DEFAULT_GRID: u64 = 100;
/// Float guard band for the delta sweep.
pub const SWEEP_TOLERANCE: f64 = -1e-9;
/// Decimal digits used for directed rational square-root approximations.
const SQRT_DIGITS: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inequality {
    /// Deviation-coupling inequality behind the anarchy upper bound.
    Smoothness,
    /// Non-negativity of its sigma-quadratic part away from (1,0).
    F1Nonneg,
    /// Square-root pair inequality behind the stability upper bound.
    PosCore,
    /// Per-resource inequality for the rho >= 2*sigma regime.
    TwoSigma,
    /// Grid inequality combining potential and cost bounds with K.
    PosProof,
    /// Routing stability inequality, x < y branch.
    NetworkPosA,
    /// Routing stability inequality, x >= y branch.
    NetworkPosB,
}

impl Inequality {
    pub const ALL: [Inequality; 7] = [
        Inequality::Smoothness,
        Inequality::F1Nonneg,
        Inequality::PosCore,
        Inequality::TwoSigma,
        Inequality::PosProof,
        Inequality::NetworkPosA,
        Inequality::NetworkPosB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Inequality::Smoothness => "smoothness",
            Inequality::F1Nonneg => "f1_nonneg",
            Inequality::PosCore => "pos_core",
            Inequality::TwoSigma => "two_sigma",
            Inequality::PosProof => "pos_proof",
            Inequality::NetworkPosA => "network_pos_a",
            Inequality::NetworkPosB => "network_pos_b",
        }
    }

    pub fn needs_rho(self) -> bool {
        !matches!(self, Inequality::F1Nonneg | Inequality::PosCore)
    }

    pub fn needs_sigma(self) -> bool {
        !matches!(self, Inequality::NetworkPosA | Inequality::NetworkPosB)
    }
}

impl FromStr for Inequality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Inequality> {
        Inequality::ALL
            .into_iter()
            .find(|ineq| ineq.name() == s)
            .ok_or_else(|| Error::UnknownInequality(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub x: u64,
    pub y: u64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub name: &'static str,
    pub rho: Option<BigRational>,
    pub sigma: Option<BigRational>,
    pub grid: u64,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub region_ok: bool,
    pub region_label: String,
    pub notes: Vec<String>,
}

fn missing(name: &'static str) -> Error {
    Error::ParamDomain {
        name,
        value: "missing".into(),
        domain: "required for this inequality",
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

/// Directed rational upper approximation of K = (w+sigma)/(w+rho-sigma) with
/// w = sqrt(sigma*(sigma+2)); error below 1e-15. K is monotone in w with the
/// sign of rho-2*sigma, so rounding w toward the adverse side bounds K from
/// above.
pub fn k_upper(rho: &BigRational, sigma: &BigRational) -> Result<BigRational> {
    let d = sigma * (sigma + rat(2, 1));
    let w = if rho <= &(rat(2, 1) * sigma) {
        sqrt_lower(&d, SQRT_DIGITS)?
    } else {
        sqrt_upper(&d, SQRT_DIGITS)?
    };
    let denom = &w + rho - sigma;
    if !denom.is_positive() {
        return Err(Error::ParamDomain {
            name: "rho",
            value: format_rational(rho),
            domain: "sqrt(sigma*(sigma+2)) + rho - sigma > 0",
        });
    }
    Ok((&w + sigma) / denom)
}

/// Coefficients (K, gamma, delta) used by the stability grid inequality,
/// with K rounded up as in k_upper.
pub fn pos_proof_coefficients(
    rho: &BigRational,
    sigma: &BigRational,
) -> Result<(BigRational, BigRational, BigRational)> {
    if !rho.is_positive() {
        return Err(Error::ParamDomain {
            name: "rho",
            value: format_rational(rho),
            domain: "> 0",
        });
    }
    check_nonnegative("sigma", sigma)?;
    let one = BigRational::one();
    let k = k_upper(rho, sigma)?;
    let gamma = ((rho - &one) * &k + &one) / (rat(2, 1) * rho);
    let delta = (&k - &one) / rho;
    Ok((k, gamma, delta))
}

struct GridParams {
    rho: Option<BigRational>,
    sigma: Option<BigRational>,
    // smoothness coefficients
    alpha: Option<BigRational>,
    beta: Option<BigRational>,
    // stability grid coefficients
    k: Option<BigRational>,
    gamma: Option<BigRational>,
    delta: Option<BigRational>,
}

fn f1_value(x: &BigRational, y: &BigRational, sigma: &BigRational) -> BigRational {
    let one = BigRational::one();
    let two = rat(2, 1);
    &two * sigma * sigma * y * (y - &one)
        + sigma * (x * x + &two * y * y - &two * x * y - x)
        + (x * x - x * y + &two * (y - x))
}

/// Evaluates one grid pair; Some((lhs, rhs)) marks a violation.
fn evaluate(
    ineq: Inequality,
    p: &GridParams,
    x: u64,
    y: u64,
) -> Result<Option<(String, String)>> {
    let one = BigRational::one();
    let two = rat(2, 1);
    let xr = rat(x as i64, 1);
    let yr = rat(y as i64, 1);
    match ineq {
        Inequality::Smoothness => {
            let rho = p.rho.as_ref().unwrap();
            let sigma = p.sigma.as_ref().unwrap();
            let alpha = p.alpha.as_ref().unwrap();
            let beta = p.beta.as_ref().unwrap();
            let lhs = (&one + rho * &xr) * &yr - rho * (&xr - &one) * &xr - &xr;
            let rhs = -beta * (&one + sigma * (&xr - &one)) * &xr
                + alpha * (&one + sigma * (&yr - &one)) * &yr;
            if lhs > rhs {
                return Ok(Some((format_rational(&lhs), format_rational(&rhs))));
            }
        }
        Inequality::F1Nonneg => {
            if x == 1 && y == 0 {
                return Ok(None);
            }
            let sigma = p.sigma.as_ref().unwrap();
            let value = f1_value(&xr, &yr, sigma);
            if value.is_negative() {
                return Ok(Some((format_rational(&value), "0".into())));
            }
        }
        Inequality::PosCore => {
            let sigma = p.sigma.as_ref().unwrap();
            let d = sigma * (sigma + &two);
            let a = (&xr - &yr + rat(1, 2)) * (&xr - &yr + rat(1, 2)) - rat(1, 4)
                + &two * sigma * &xr * (&xr - &one);
            let b = &yr * (&yr - &one) - &xr * (&xr - &one);
            let u = &a + sigma * &b;
            if sign_with_sqrt(&u, &b, &d)? < 0 {
                let lhs = format!(
                    "({}) + ({})*sqrt({})",
                    format_rational(&u),
                    format_rational(&b),
                    format_rational(&d)
                );
                return Ok(Some((lhs, "0".into())));
            }
        }
        Inequality::TwoSigma => {
            let rho = p.rho.as_ref().unwrap();
            let sigma = p.sigma.as_ref().unwrap();
            let value = rho
                * (&yr + sigma * &yr * (&yr - &one) - &xr * &yr + &xr * (&xr - &one))
                + sigma * (&yr * (&yr - &one) - &xr * (&xr - &one));
            if value.is_negative() {
                return Ok(Some((format_rational(&value), "0".into())));
            }
        }
        Inequality::PosProof => {
            let rho = p.rho.as_ref().unwrap();
            let sigma = p.sigma.as_ref().unwrap();
            let k = p.k.as_ref().unwrap();
            let gamma = p.gamma.as_ref().unwrap();
            let delta = p.delta.as_ref().unwrap();
            let potential_change = rho * &yr * &yr + (&two - rho) * &yr
                - rho * &xr * &xr
                - (&two - rho) * &xr;
            let cost_change = (&one + rho * &xr) * &yr - &xr * (&one + rho * (&xr - &one));
            let lhs = gamma * potential_change + delta * cost_change;
            let rhs = k * &yr * (&one + sigma * (&yr - &one))
                - &xr * (&one + sigma * (&xr - &one));
            if lhs > rhs {
                return Ok(Some((format_rational(&lhs), format_rational(&rhs))));
            }
        }
        Inequality::NetworkPosA => {
            if x >= y {
                return Ok(None);
            }
            let rho = p.rho.as_ref().unwrap();
            let lhs = rho * &xr * &yr + (&yr - &xr);
            let rhs = rho * rho / rat(4, 1) * &xr * &xr + &yr * &yr;
            if lhs > rhs {
                return Ok(Some((format_rational(&lhs), format_rational(&rhs))));
            }
        }
        Inequality::NetworkPosB => {
            if x < y {
                return Ok(None);
            }
            let rho = p.rho.as_ref().unwrap();
            let lhs = rho * &xr * &yr
                + (&one - rho) * (&yr - &xr)
                + (&one - rho) * &xr * &xr;
            let rhs = (&one - rho + rho * rho / rat(4, 1)) * &xr * &xr + &yr * &yr;
            if lhs > rhs {
                return Ok(Some((format_rational(&lhs), format_rational(&rhs))));
            }
        }
    }
    Ok(None)
}

/// Independent rearranged evaluation of the same inequality; true means the
/// pair violates it.
pub fn recheck_witness(
    ineq: Inequality,
    rho: Option<&BigRational>,
    sigma: Option<&BigRational>,
    x: u64,
    y: u64,
) -> Result<bool> {
    let one = BigRational::one();
    let two = rat(2, 1);
    let xr = rat(x as i64, 1);
    let yr = rat(y as i64, 1);
    match ineq {
        Inequality::Smoothness => {
            let rho = rho.ok_or_else(|| missing("rho"))?;
            let sigma = sigma.ok_or_else(|| missing("sigma"))?;
            let f1 = f1_value(&xr, &yr, sigma);
            let f2 = sigma * (&yr * &yr - &xr * &xr + rat(3, 1) * (&xr - &yr));
            Ok((rho * f1 + f2).is_negative())
        }
        Inequality::F1Nonneg => {
            if x == 1 && y == 0 {
                return Ok(false);
            }
            let sigma = sigma.ok_or_else(|| missing("sigma"))?;
            let diff = &xr - &yr;
            let value = &two * sigma * sigma * &yr * (&yr - &one)
                + sigma * (&diff * &diff + &yr * &yr - &xr)
                + (&xr * &diff - &two * &diff);
            Ok(value.is_negative())
        }
        Inequality::PosCore => {
            let sigma = sigma.ok_or_else(|| missing("sigma"))?;
            let d = sigma * (sigma + &two);
            let v = (&yr - &xr) * (&xr + &yr - &one);
            let u = (&xr - &yr) * (&xr - &yr + &one) + &two * sigma * &xr * (&xr - &one)
                + sigma * &v;
            Ok(sign_with_sqrt(&u, &v, &d)? < 0)
        }
        Inequality::TwoSigma => {
            let rho = rho.ok_or_else(|| missing("rho"))?;
            let sigma = sigma.ok_or_else(|| missing("sigma"))?;
            let value = rho * (&yr * (&one + sigma * (&yr - &one)) - &xr * &yr + &xr * (&xr - &one))
                + sigma * (&yr - &xr) * (&xr + &yr - &one);
            Ok(value.is_negative())
        }
        Inequality::PosProof => {
            let rho = rho.ok_or_else(|| missing("rho"))?;
            let sigma = sigma.ok_or_else(|| missing("sigma"))?;
            let (k, _, _) = pos_proof_coefficients(rho, sigma)?;
            let scaled = &two * rho * (&k * &yr * (&one + sigma * (&yr - &one))
                - &xr * (&one + sigma * (&xr - &one)))
                - ((rho - &one) * &k + &one)
                    * (rho * &yr * &yr + (&two - rho) * &yr - rho * &xr * &xr - (&two - rho) * &xr)
                - &two * (&k - &one) * ((&one + rho * &xr) * &yr - &xr * (&one + rho * &xr - rho));
            Ok(scaled.is_negative())
        }
        Inequality::NetworkPosA => {
            if x >= y {
                return Ok(false);
            }
            let rho = rho.ok_or_else(|| missing("rho"))?;
            let t = rho * &xr - &two * &yr;
            Ok((&t * &t + rat(4, 1) * (&xr - &yr)).is_negative())
        }
        Inequality::NetworkPosB => {
            if x < y {
                return Ok(false);
            }
            let rho = rho.ok_or_else(|| missing("rho"))?;
            let t = rho * &xr - &two * &yr;
            Ok((&t * &t + rat(4, 1) * (&one - rho) * (&xr - &yr)).is_negative())
        }
    }
}

fn region(
    ineq: Inequality,
    rho: Option<&BigRational>,
    sigma: Option<&BigRational>,
) -> Result<(bool, String)> {
    let half = rat(1, 2);
    let two = rat(2, 1);
    let ok_or = |ok: bool, label: &str| {
        (
            ok,
            if ok {
                label.to_string()
            } else {
                "outside proven region; grid pass is evidence, not proof".to_string()
            },
        )
    };
    Ok(match ineq {
        Inequality::Smoothness => {
            let rho = rho.unwrap();
            let sigma = sigma.unwrap();
            if *sigma >= half && sigma <= rho && *rho <= &two * sigma {
                (true, "1/2 <= sigma <= rho <= 2*sigma".to_string())
            } else if sigma.is_one() && *rho <= two {
                // h(1) = (4 + 6*sqrt(3))/23, so rho >= h(1) iff 23*rho - 4 >= 6*sqrt(3)
                let above = sign_with_sqrt(
                    &(rat(23, 1) * rho - rat(4, 1)),
                    &rat(-6, 1),
                    &rat(3, 1),
                )? >= 0;
                ok_or(above, "sigma = 1, h(sigma) <= rho <= 2*sigma")
            } else {
                ok_or(false, "")
            }
        }
        Inequality::F1Nonneg => ok_or(*sigma.unwrap() >= half, "sigma >= 1/2"),
        Inequality::PosCore => (true, "sigma >= 0".to_string()),
        Inequality::TwoSigma => {
            let rho = rho.unwrap();
            let sigma = sigma.unwrap();
            ok_or(
                *sigma >= half && *rho >= &two * sigma,
                "sigma >= 1/2 and rho >= 2*sigma",
            )
        }
        Inequality::PosProof => {
            let rho = rho.unwrap();
            let sigma = sigma.unwrap();
            let ok = if sigma.is_positive() && *rho <= &two * sigma {
                // rho >= 2*sigma/(1+sigma+w) iff rho*(1+sigma) - 2*sigma + rho*w >= 0
                sign_with_sqrt(
                    &(rho * (BigRational::one() + sigma) - &two * sigma),
                    rho,
                    &(sigma * (sigma + &two)),
                )? >= 0
            } else {
                false
            };
            ok_or(ok, "2*sigma/(1+sigma+sqrt(sigma*(sigma+2))) <= rho <= 2*sigma")
        }
        Inequality::NetworkPosA | Inequality::NetworkPosB => {
            let rho = rho.unwrap();
            ok_or(rho.is_positive() && *rho <= BigRational::one(), "0 < rho <= 1")
        }
    })
}

pub fn verify(
    name: &str,
    rho: Option<&BigRational>,
    sigma: Option<&BigRational>,
    grid: u64,
) -> Result<VerificationReport> {
    verify_inequality(name.parse()?, rho, sigma, grid)
}

pub fn verify_inequality(
    ineq: Inequality,
    rho: Option<&BigRational>,
    sigma: Option<&BigRational>,
    grid: u64,
) -> Result<VerificationReport> {
    if grid < 1 {
        return Err(Error::ParamDomain {
            name: "N",
            value: grid.to_string(),
            domain: ">= 1",
        });
    }
    let rho = if ineq.needs_rho() {
        let r = rho.ok_or_else(|| missing("rho"))?;
        check_nonnegative("rho", r)?;
        Some(r.clone())
    } else {
        None
    };
    let sigma = if ineq.needs_sigma() {
        let s = sigma.ok_or_else(|| missing("sigma"))?;
        check_nonnegative("sigma", s)?;
        Some(s.clone())
    } else {
        None
    };

    let mut notes = Vec::new();
    let mut params = GridParams {
        rho: rho.clone(),
        sigma: sigma.clone(),
        alpha: None,
        beta: None,
        k: None,
        gamma: None,
        delta: None,
    };
    match ineq {
        Inequality::Smoothness => {
            let r = params.rho.as_ref().unwrap();
            let s = params.sigma.as_ref().unwrap();
            let one = BigRational::one();
            let two = rat(2, 1);
            let denom = &one + &two * s;
            params.alpha = Some((&two * r * (&one + s) + &one) / &denom);
            params.beta = Some((&one + r) / &denom);
        }
        Inequality::PosProof => {
            let (k, gamma, delta) = pos_proof_coefficients(
                params.rho.as_ref().unwrap(),
                params.sigma.as_ref().unwrap(),
            )?;
            notes.push(format!("K upper approximation (error < 1e-15) ~ {:.16}", rational_f64(&k)));
            notes.push(format!(
                "gamma ~ {:.16}, nonneg: {}",
                rational_f64(&gamma),
                !gamma.is_negative()
            ));
            notes.push(format!(
                "delta ~ {:.16}, nonneg: {}",
                rational_f64(&delta),
                !delta.is_negative()
            ));
            params.k = Some(k);
            params.gamma = Some(gamma);
            params.delta = Some(delta);
        }
        _ => {}
    }

    let (region_ok, region_label) = region(ineq, params.rho.as_ref(), params.sigma.as_ref())?;
    let mut witness = None;
    'grid: for x in 0..=grid {
        for y in 0..=grid {
            if let Some((lhs, rhs)) = evaluate(ineq, &params, x, y)? {
                witness = Some(Witness { x, y, lhs, rhs });
                break 'grid;
            }
        }
    }
    Ok(VerificationReport {
        name: ineq.name(),
        rho,
        sigma,
        grid,
        holds: witness.is_none(),
        witness,
        region_ok,
        region_label,
        notes,
    })
}

#[derive(Debug, Clone)]
pub struct DeltaSweepReport {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub step: f64,
    pub points: u64,
    pub holds: bool,
    pub min_delta: f64,
    pub min_sigma: f64,
}

/// Evenly spaced sigma values covering [lo, hi] with the given step.
pub fn sigma_grid(lo: f64, hi: f64, step: f64) -> impl Iterator<Item = f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as u64 + 1;
    (0..count).map(move |k| lo + k as f64 * step)
}

/// Checks delta_sigma >= -1e-9 across a sigma grid and reports the minimum.
pub fn delta_sweep(sigma_lo: f64, sigma_hi: f64, step: f64) -> Result<DeltaSweepReport> {
    if !(sigma_lo >= 0.5) {
        return Err(Error::ParamDomain {
            name: "sigma_lo",
            value: sigma_lo.to_string(),
            domain: ">= 1/2",
        });
    }
    if !(sigma_hi > sigma_lo) {
        return Err(Error::ParamDomain {
            name: "sigma_hi",
            value: sigma_hi.to_string(),
            domain: "> sigma_lo",
        });
    }
    if !(step > 0.0) {
        return Err(Error::ParamDomain {
            name: "step",
            value: step.to_string(),
            domain: "> 0",
        });
    }
    let mut points = 0u64;
    let mut min_delta = f64::INFINITY;
    let mut min_sigma = sigma_lo;
    for sigma in sigma_grid(sigma_lo, sigma_hi, step) {
        let delta = bounds::delta_sigma(sigma)?;
        if delta < min_delta {
            min_delta = delta;
            min_sigma = sigma;
        }
        points += 1;
    }
    Ok(DeltaSweepReport {
        sigma_lo,
        sigma_hi,
        step,
        points,
        holds: min_delta >= SWEEP_TOLERANCE,
        min_delta,
        min_sigma,
    })
}
