//! Independent evaluation of the frequency-moment integrals.
//!
//! For integer `q` the integrands are expanded into polynomials against a
//! classical weight and integrated term by term with exact moments, so the
//! result is an `ExactScalar` comparable to the closed forms by equality.
//! For real `q` the same integrals are computed by adaptive quadrature.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::entropy::{ClosedForm, EntropyError, EntropyValue};
use crate::exactnum::{factorial, gamma_of, int, ratio, ExactError, ExactScalar, Rational};
use crate::polynomials::{gegenbauer, gegenbauer_f64, laguerre, laguerre_f64, poly_pow, real_zeros_f64, PolyExact};
use crate::quadrature::{integrate, integrate_tail, QuadError, QuadResult, Tolerance};
use crate::states::{enumerate_states, DensityProfile, HydrogenicState, StateError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("{0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Position,
    Momentum,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Position => "position",
            Space::Momentum => "momentum",
        })
    }
}

impl FromStr for Space {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "position" | "pos" | "r" => Ok(Space::Position),
            "momentum" | "mom" | "p" => Ok(Space::Momentum),
            other => Err(format!("unknown space {other:?} (expected position or momentum)")),
        }
    }
}

/// A weight on which every monomial moment is a factorial or a Beta function
/// at (half-)integer arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MomentBasis {
    /// `∫₀^∞ x^{k+shift} e^{−x} dx = Γ(k+shift+1)`.
    Laguerre { shift: Rational },
    /// `∫₋₁¹ (1−y)^a (1+y)^{b+k} dy`, i.e. monomials in `(1+y)`.
    Jacobi { a: Rational, b: Rational },
    /// `∫₋₁¹ t^k (1−t²)^s dt`, zero for odd `k`.
    GegenbauerEven { s: Rational },
}

impl MomentBasis {
    pub fn moment(&self, k: usize) -> Result<ExactScalar, ExactError> {
        let kr = int(k as i64);
        let one = Rational::one();
        match self {
            MomentBasis::Laguerre { shift } => gamma_of(&(shift + &kr + &one)),
            MomentBasis::Jacobi { a, b } => {
                // 2^{a+b+k+1} Γ(a+1) Γ(b+k+1) / Γ(a+b+k+2)
                let e = a + b + &kr + &one;
                if !e.is_integer() {
                    return Err(ExactError::Domain(format!(
                        "Jacobi moment needs an integer a+b, got a={a}, b={b}"
                    )));
                }
                let e = e.to_integer().to_i64().ok_or_else(|| ExactError::Domain("exponent overflow".into()))?;
                let two = if e >= 0 {
                    num_traits::pow(int(2), e as usize)
                } else {
                    num_traits::pow(ratio(1, 2), (-e) as usize)
                };
                let num = gamma_of(&(a + &one))? * gamma_of(&(b + &kr + &one))?;
                let den = gamma_of(&(a + b + &kr + int(2)))?;
                Ok(num.checked_div(&den)?.scale(&two))
            }
            MomentBasis::GegenbauerEven { s } => {
                if k % 2 == 1 {
                    return Ok(ExactScalar::zero());
                }
                // B((k+1)/2, s+1)
                let h = ratio(k as i64 + 1, 2);
                let num = gamma_of(&h)? * gamma_of(&(s + &one))?;
                let den = gamma_of(&(h + s + &one))?;
                num.checked_div(&den)
            }
        }
    }

    /// `∫ p · weight` with `p` given in this basis' monomials.
    pub fn integrate(&self, p: &PolyExact) -> Result<ExactScalar, ExactError> {
        let mut acc = ExactScalar::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &self.moment(k)?.scale(c);
        }
        Ok(acc)
    }
}

fn rpow(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

fn fact(n: i64) -> Rational {
    Rational::from_integer(factorial(n as u64))
}

fn check_exact_order(q: u32) -> Result<(), OracleError> {
    if q == 0 {
        return Err(OracleError::Domain("exact oracle needs q >= 1".into()));
    }
    Ok(())
}

/// `∫ ρ^q r^{D−1} dr` by expansion in the Laguerre weight after `x = s/q`.
pub fn radial_position_w_exact(state: &HydrogenicState, q: u32) -> Result<ExactScalar, OracleError> {
    check_exact_order(q)?;
    let dq = state.validate()?;
    let d = state.dim as i64;
    let (n, l, qi) = (state.n as i64, dq.l as i64, q as i64);
    let k = n - l - 1;
    let lag = laguerre(k as u32, &int(2 * l + d - 2));
    let p = poly_pow(&lag.scale_argument(&ratio(1, qi)), 2 * q);
    let shift = int(2 * l * qi + d - 1);
    let integral = MomentBasis::Laguerre { shift }.integrate(&p)?;
    // N²λ^D = k!/(2η Γ(η+L+1)), with η+L+1 = n+l+D−2
    let norm = fact(k) / (&dq.eta * int(2) * fact(n + l + d - 3));
    let scale = rpow(&dq.lambda, d * (1 - qi)) * rpow(&norm, qi) * rpow(&int(qi), -(2 * l * qi + d));
    Ok(integral.scale(&scale))
}

/// Gegenbauer normalization `π 2^{1−2λ} Γ(κ+2λ) / (κ! (κ+λ) Γ(λ)²)`.
fn gegenbauer_norm(kappa: u64, lambda: &Rational) -> Result<ExactScalar, ExactError> {
    let two_lambda = lambda * int(2);
    let e = (int(1) - &two_lambda).to_integer().to_i64().unwrap_or(0);
    let two = rpow(&int(2), e);
    let kr = int(kappa as i64);
    let num = gamma_of(&(&kr + &two_lambda))?.scale(&two);
    let den = gamma_of(lambda)?.pow(2)?.scale(&(fact(kappa as i64) * (&kr + lambda)));
    (&num * &ExactScalar::pi_power(2)).checked_div(&den)
}

/// `∫ |Y|^{2q} dΩ` factor by factor over the hyperangles.
pub fn angular_w_exact(dim: u32, mu: &[i64], q: u32) -> Result<ExactScalar, OracleError> {
    check_exact_order(q)?;
    let l = mu.first().map_or(0, |m| m.unsigned_abs()) as u32;
    let state = HydrogenicState::new(dim, l + 1, mu.to_vec(), Rational::one())?;
    let dq = state.validate()?;
    let qi = q as i64;
    let mut w = ExactScalar::monomial(int(2), 2).pow(1 - qi)?;
    for (j, alpha) in dq.alpha.iter().enumerate() {
        let mu_next = dq.mu_abs[j + 1];
        let kappa = dq.mu_abs[j] - mu_next;
        let lambda = alpha + int(mu_next as i64);
        let c = gegenbauer(kappa as u32, &lambda);
        let p = poly_pow(&c, 2 * q);
        if p.coeffs().iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return Err(OracleError::Domain(format!(
                "odd part in an even power of a Gegenbauer polynomial (κ={kappa}, λ={lambda})"
            )));
        }
        let s = int(qi * mu_next as i64) + alpha - ratio(1, 2);
        let integral = MomentBasis::GegenbauerEven { s }.integrate(&p)?;
        w = &w * &integral.checked_div(&gegenbauer_norm(kappa, &lambda)?.pow(qi)?)?;
    }
    Ok(w)
}

/// `∫ γ^q p^{D−1} dp` by expansion in powers of `(1+y)` with `y = (1−u²)/(1+u²)`, `u = ηp/Z`.
pub fn radial_momentum_w_exact(state: &HydrogenicState, q: u32) -> Result<ExactScalar, OracleError> {
    check_exact_order(q)?;
    let dq = state.validate()?;
    let d = state.dim as i64;
    let (n, l, qi) = (state.n as i64, dq.l as i64, q as i64);
    let k = n - l - 1;
    let lambda = &dq.big_l + int(1);
    let c = gegenbauer(k as u32, &lambda);
    let p = poly_pow(&c, 2 * q).taylor_shift(&int(-1));
    let half_d = ratio(d, 2);
    let a = int(qi * l) + &half_d - int(1);
    let b = int(qi * l + qi * (d + 1) - 1) - &half_d;
    let integral = MomentBasis::Jacobi { a, b }.integrate(&p)?;
    // K² = 2^{4L+5} k! η Γ(L+1)² / (π Γ(η+L+1)) with 4L+5 = 4l+2D−1
    let gl = gamma_of(&(&dq.big_l + int(1)))?.pow(2)?;
    let k2 = gl
        .scale(&(rpow(&int(2), 4 * l + 2 * d - 1) * fact(k) * &dq.eta / fact(n + l + d - 3)))
        .checked_div(&ExactScalar::pi_power(2))?;
    let lead = rpow(&(&state.z / &dq.eta), d * (1 - qi)) * rpow(&int(2), -qi * (2 * l + d + 1));
    Ok((&k2.pow(qi)? * &integral).scale(&lead))
}

pub fn position_w_exact(state: &HydrogenicState, q: u32) -> Result<ExactScalar, OracleError> {
    Ok(&radial_position_w_exact(state, q)? * &angular_w_exact(state.dim, &state.mu, q)?)
}

pub fn momentum_w_exact(state: &HydrogenicState, q: u32) -> Result<ExactScalar, OracleError> {
    Ok(&radial_momentum_w_exact(state, q)? * &angular_w_exact(state.dim, &state.mu, q)?)
}

/// A float Rényi entropy with the quadrature's error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FloatEstimate {
    pub value: f64,
    pub error: f64,
    pub ln_w: f64,
    pub ln_w_error: f64,
}

fn tolerance() -> Tolerance {
    Tolerance {
        rel: 1e-13,
        abs: 0.0,
        max_intervals: 20_000,
    }
}

fn sum_results(parts: &[QuadResult]) -> QuadResult {
    parts.iter().fold(QuadResult { value: 0.0, error: 0.0 }, |a, b| QuadResult {
        value: a.value + b.value,
        error: a.error + b.error,
    })
}

/// `ln ∫ ρ^q r^{D−1} dr` with the integrand written in `x = r/λ`.
fn radial_position_ln_w(p: &DensityProfile, q: f64) -> Result<(f64, f64), OracleError> {
    let d = p.dim as f64;
    let k = p.n - p.l as u32 - 1;
    let alpha = 2.0 * p.big_l + 1.0;
    let e = 2.0 * p.l as f64 * q + d - 1.0;
    let g = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let lag = laguerre_f64(k, alpha, x).abs();
        (e * x.ln() - q * x).exp() * lag.powf(2.0 * q)
    };
    let reach = 4.0 * k as f64 + 2.0 * alpha + 10.0;
    let zeros = real_zeros_f64(|x| laguerre_f64(k, alpha, x), 0.0, reach, 400 * (k as usize + 1));
    // truncate where the integrand has dropped below 1e-30 of its sampled peak
    let mut x_max = 2.0 * zeros.last().copied().unwrap_or(0.0).max(e / q) + 10.0;
    let peak = (1..=400).map(|i| g(x_max * i as f64 / 400.0)).fold(0.0, f64::max);
    while g(x_max) > 1e-30 * peak {
        x_max *= 1.5;
    }
    let mut cuts = zeros;
    cuts.push(e / q);
    let r = integrate(g, 0.0, x_max, &cuts, tolerance())?;
    let ln_w = d * p.lambda.ln() + q * p.ln_radial_norm() + r.value.ln();
    Ok((ln_w, r.error / r.value))
}

/// `ln ∫ γ^q p^{D−1} dp` in `u = ηp/Z`.
fn radial_momentum_ln_w(p: &DensityProfile, q: f64) -> Result<(f64, f64), OracleError> {
    let d = p.dim as f64;
    let k = p.n - p.l as u32 - 1;
    let lam = p.big_l + 1.0;
    let e = 2.0 * p.l as f64 * q + d - 1.0;
    let decay = q * (2.0 * p.big_l + 4.0);
    let g = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let u2 = u * u;
        let y = (1.0 - u2) / (1.0 + u2);
        let c = gegenbauer_f64(k, lam, y).abs();
        (e * u.ln() - decay * u2.ln_1p()).exp() * c.powf(2.0 * q)
    };
    let mut cuts: Vec<f64> = real_zeros_f64(|y| gegenbauer_f64(k, lam, y), -1.0, 1.0, 400 * (k as usize + 1))
        .into_iter()
        .map(|y| ((1.0 - y) / (1.0 + y)).sqrt())
        .collect();
    cuts.push(1.0);
    let u_max = 2.0 * cuts.iter().copied().fold(1.0, f64::max);
    let body = integrate(g, 0.0, u_max, &cuts, tolerance())?;
    let tail = integrate_tail(g, u_max, tolerance())?;
    let r = sum_results(&[body, tail]);
    let ln_w = d * (1.0 - q) * (p.z / p.eta).ln() + q * p.ln_momentum_norm() + r.value.ln();
    Ok((ln_w, r.error / r.value))
}

/// `ln Λ(q)`; factors with `μ_j = μ_{j+1}` are Beta functions, the rest use quadrature.
fn angular_ln_w(p: &DensityProfile, q: f64) -> Result<(f64, f64), OracleError> {
    let mut ln_w = (2.0 * std::f64::consts::PI).ln() + q * p.ln_angular_norm();
    let mut rel_err = 0.0;
    for &(kappa, lam, mu_next) in &p.angular_factors {
        let s = lam + (q - 1.0) * mu_next as f64 - 0.5;
        if kappa == 0 {
            ln_w += ln_gamma(0.5) + ln_gamma(s + 1.0) - ln_gamma(s + 1.5);
            continue;
        }
        let g = |t: f64| gegenbauer_f64(kappa, lam, t).abs().powf(2.0 * q) * (1.0 - t * t).max(0.0).powf(s);
        let zeros: Vec<f64> = real_zeros_f64(|t| gegenbauer_f64(kappa, lam, t), 0.0, 1.0, 400 * kappa as usize)
            .into_iter()
            .collect();
        let r = integrate(g, 0.0, 1.0, &zeros, tolerance())?;
        ln_w += (2.0 * r.value).ln();
        rel_err += r.error / r.value;
    }
    Ok((ln_w, rel_err))
}

fn check_float_order(q: f64) -> Result<(), OracleError> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(OracleError::Domain(format!("q must be positive, got {q}")));
    }
    Ok(())
}

/// `ln W_q` of the full density in float, for any real `q > 0` (including 1).
pub fn ln_w_float(state: &HydrogenicState, q: f64, space: Space) -> Result<(f64, f64), OracleError> {
    ln_w_float_at_charge(state, q, space, state.z.to_f64().unwrap_or(f64::NAN))
}

/// As [`ln_w_float`] with the nuclear charge replaced by a real `z`.
pub fn ln_w_float_at_charge(state: &HydrogenicState, q: f64, space: Space, z: f64) -> Result<(f64, f64), OracleError> {
    check_float_order(q)?;
    let p = DensityProfile::with_charge(state, z)?;
    let (rad, rad_err) = match space {
        Space::Position => radial_position_ln_w(&p, q)?,
        Space::Momentum => radial_momentum_ln_w(&p, q)?,
    };
    let (ang, ang_err) = angular_ln_w(&p, q)?;
    Ok((rad + ang, rad_err + ang_err))
}

/// `R_q` by adaptive quadrature, for real `q > 0`, `q ≠ 1`.
pub fn renyi_float(state: &HydrogenicState, q: f64, space: Space) -> Result<FloatEstimate, OracleError> {
    check_float_order(q)?;
    if q == 1.0 {
        return Err(OracleError::Domain("q = 1 is the Shannon limit, not a Rényi order handled here".into()));
    }
    let (ln_w, ln_w_error) = ln_w_float(state, q, space)?;
    let scale = 1.0 / (1.0 - q);
    Ok(FloatEstimate {
        value: ln_w * scale,
        error: (ln_w_error * scale).abs(),
        ln_w,
        ln_w_error,
    })
}

/// Closed form against oracle for one factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartCheck {
    pub closed_form: String,
    pub oracle: String,
    pub equal: bool,
}

impl PartCheck {
    fn new(closed: &ExactScalar, oracle: &ExactScalar) -> Self {
        PartCheck {
            closed_form: closed.to_string(),
            oracle: oracle.to_string(),
            equal: closed == oracle,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceReport {
    pub space: Space,
    pub radial: PartCheck,
    pub angular: PartCheck,
    pub total_equal: bool,
    /// The closed-form entropy, e.g. `ln(8*pi)`.
    pub entropy: String,
    pub value: f64,
    pub float_value: f64,
    pub float_residual: f64,
}

impl SpaceReport {
    pub fn all_equal(&self) -> bool {
        self.radial.equal && self.angular.equal && self.total_equal
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateReport {
    pub state: String,
    pub q: u32,
    pub spaces: Vec<SpaceReport>,
    pub all_equal: bool,
    pub elapsed_ms: f64,
}

/// Relative residual `|a − b|/max(|b|, 1)`.
fn residual(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

pub fn verify_state(state: &HydrogenicState, q: u32) -> Result<StateReport, EntropyError> {
    verify_state_with(state, q, &ClosedForm::default())
}

/// Runs every closed form of `forms` and every oracle for one state and order.
pub fn verify_state_with(state: &HydrogenicState, q: u32, forms: &ClosedForm) -> Result<StateReport, EntropyError> {
    let start = Instant::now();
    let ang_closed = forms.angular_w(state.dim, &state.mu, q)?;
    let ang_oracle = angular_w_exact(state.dim, &state.mu, q)?;
    let mut spaces = Vec::with_capacity(2);
    for space in [Space::Position, Space::Momentum] {
        let (rad_closed, rad_oracle) = match space {
            Space::Position => (forms.radial_position_w(state, q)?, radial_position_w_exact(state, q)?),
            Space::Momentum => (forms.radial_momentum_w(state, q)?, radial_momentum_w_exact(state, q)?),
        };
        let total_closed = &rad_closed * &ang_closed;
        let total_oracle = &rad_oracle * &ang_oracle;
        let entropy = EntropyValue::new(q, total_closed.clone())?;
        let value = entropy.value();
        let float_value = renyi_float(state, q as f64, space)?.value;
        spaces.push(SpaceReport {
            space,
            radial: PartCheck::new(&rad_closed, &rad_oracle),
            angular: PartCheck::new(&ang_closed, &ang_oracle),
            total_equal: total_closed == total_oracle,
            entropy: entropy.to_string(),
            value,
            float_value,
            float_residual: residual(float_value, value),
        });
    }
    let all_equal = spaces.iter().all(SpaceReport::all_equal);
    Ok(StateReport {
        state: state.to_string(),
        q,
        spaces,
        all_equal,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub dmax: u32,
    pub nmax: u32,
    pub orders: Vec<u32>,
    /// Number of (state, space, q) comparisons made.
    pub comparisons: usize,
    pub failures: Vec<String>,
    pub max_float_residual: f64,
    pub all_equal: bool,
    pub elapsed_ms: f64,
    pub reports: Vec<StateReport>,
}

/// Every admissible state with `2 ≤ D ≤ dmax`, `n ≤ nmax`, at each order in `orders`.
pub fn verify_sweep(dmax: u32, nmax: u32, orders: &[u32], forms: &ClosedForm) -> Result<SweepReport, EntropyError> {
    let start = Instant::now();
    let states = enumerate_states(2..=dmax, nmax, &Rational::one());
    let mut reports = Vec::with_capacity(states.len() * orders.len());
    let mut failures = Vec::new();
    let mut comparisons = 0;
    let mut max_res: f64 = 0.0;
    for s in &states {
        for &q in orders {
            let r = verify_state_with(s, q, forms)?;
            for sp in &r.spaces {
                comparisons += 1;
                max_res = max_res.max(sp.float_residual);
                if !sp.all_equal() {
                    failures.push(format!("{} q={} {}", r.state, q, sp.space));
                }
            }
            reports.push(r);
        }
    }
    Ok(SweepReport {
        dmax,
        nmax,
        orders: orders.to_vec(),
        comparisons,
        all_equal: failures.is_empty(),
        failures,
        max_float_residual: max_res,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{angular_entropy, momentum_entropy, position_entropy, radial_momentum_entropy, radial_position_entropy};

    fn st(s: &str) -> HydrogenicState {
        s.parse().unwrap()
    }

    #[test]
    fn normalization_at_order_one() {
        for s in ["D=3,n=1,mu=0,0", "D=3,n=4,mu=2,-1", "D=2,n=3,mu=-2", "D=5,n=3,mu=2,1,1,-1,Z=5/2"] {
            let s = st(s);
            assert_eq!(radial_position_w_exact(&s, 1).unwrap(), ExactScalar::one());
            assert_eq!(radial_momentum_w_exact(&s, 1).unwrap(), ExactScalar::one());
            assert_eq!(angular_w_exact(s.dim, &s.mu, 1).unwrap(), ExactScalar::one());
        }
    }

    #[test]
    fn ground_state_oracles() {
        let g = st("D=3,n=1,mu=0,0");
        assert_eq!(radial_position_w_exact(&g, 2).unwrap(), ExactScalar::rational(ratio(1, 2)));
        assert_eq!(
            radial_momentum_w_exact(&g, 2).unwrap(),
            ExactScalar::monomial(ratio(33, 4), -2)
        );
        assert_eq!(angular_w_exact(3, &[0, 0], 2).unwrap(), ExactScalar::monomial(ratio(1, 4), -2));
    }

    #[test]
    fn oracles_match_closed_forms() {
        for s in ["D=3,n=2,mu=0,0", "D=3,n=2,mu=1,1", "D=3,n=3,mu=2,1", "D=4,n=3,mu=1,1,0", "D=2,n=4,mu=1"] {
            let s = st(s);
            for q in [2, 3] {
                assert_eq!(radial_position_w_exact(&s, q).unwrap(), radial_position_entropy(&s, q).unwrap().w);
                assert_eq!(radial_momentum_w_exact(&s, q).unwrap(), radial_momentum_entropy(&s, q).unwrap().w);
                assert_eq!(angular_w_exact(s.dim, &s.mu, q).unwrap(), angular_entropy(s.dim, &s.mu, q).unwrap().w);
            }
        }
    }

    #[test]
    fn float_matches_exact() {
        for s in ["D=3,n=1,mu=0,0", "D=3,n=3,mu=1,0", "D=4,n=3,mu=2,1,-1", "D=2,n=2,mu=0"] {
            let s = st(s);
            for q in [2u32, 3] {
                let e = position_entropy(&s, q).unwrap().total.value();
                let f = renyi_float(&s, q as f64, Space::Position).unwrap();
                assert!(residual(f.value, e) < 1e-10, "{s} q={q}: {} vs {e}", f.value);
                assert!(f.error < 1e-9);
                let e = momentum_entropy(&s, q).unwrap().total.value();
                let f = renyi_float(&s, q as f64, Space::Momentum).unwrap();
                assert!(residual(f.value, e) < 1e-10, "{s} q={q}: {} vs {e}", f.value);
            }
        }
    }

    #[test]
    fn float_normalization_and_continuity() {
        let s = st("D=3,n=2,mu=1,0");
        for space in [Space::Position, Space::Momentum] {
            let (ln_w, _) = ln_w_float(&s, 1.0, space).unwrap();
            assert!(ln_w.abs() < 1e-11, "{space}: {ln_w}");
        }
        let g = st("D=3,n=1,mu=0,0");
        let lo = renyi_float(&g, 1.0 - 1e-3, Space::Position).unwrap().value;
        let hi = renyi_float(&g, 1.0 + 1e-3, Space::Position).unwrap().value;
        assert!(lo > hi && lo - hi < 1e-2);
        assert!(renyi_float(&g, 1.0, Space::Position).is_err());
        let m = renyi_float(&g, 2.0 / 3.0, Space::Momentum).unwrap();
        assert!(m.value.is_finite());
    }

    #[test]
    fn moment_basis_values() {
        assert_eq!(MomentBasis::Laguerre { shift: int(0) }.moment(3).unwrap(), ExactScalar::from_int(6));
        let j = MomentBasis::Jacobi { a: int(0), b: int(0) };
        assert_eq!(j.moment(1).unwrap(), ExactScalar::from_int(2)); // ∫(1+y) = 2
        assert!(MomentBasis::Jacobi { a: ratio(1, 2), b: int(0) }.moment(0).is_err());
        let g = MomentBasis::GegenbauerEven { s: ratio(-1, 2) };
        assert_eq!(g.moment(0).unwrap(), ExactScalar::pi_power(2));
        assert!(g.moment(3).unwrap().is_zero());
    }

    #[test]
    fn verify_report_shape() {
        let r = verify_state(&st("D=3,n=3,mu=2,1"), 2).unwrap();
        assert!(r.all_equal);
        assert_eq!(r.spaces.len(), 2);
        assert!(r.spaces.iter().all(|s| s.float_residual < 1e-9));
        let bad = verify_state_with(
            &st("D=3,n=2,mu=0,0"),
            2,
            &ClosedForm::with_fault(crate::entropy::Fault::RadialPochhammer),
        )
        .unwrap();
        assert!(!bad.all_equal);
    }
}
