//! Closed-form Rényi entropies of hydrogenic states in position and momentum
//! space, the nodeless-state shortcuts, and the position–momentum uncertainty sum.
//!
//! Every closed form assembles the frequency moment `W_q` as an exact monomial
//! and takes a single logarithm at the end: `R_q = ln(W_q)/(1−q)`.

use std::fmt;

use num_traits::{One, ToPrimitive};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::exactnum::{gamma_of, int, pochhammer, ratio, ExactError, ExactScalar, Rational, DEFAULT_PRECISION};
use crate::hyperfun::{lauricella_fa, srivastava_daoust, HyperError, LauricellaSpec, SrivastavaDaoustSpec};
use crate::oracle::{renyi_float, OracleError, Space};
use crate::states::{HydrogenicState, StateError};

/// Tolerance of the float comparison in the uncertainty inequality.
pub const UNCERTAINTY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EntropyError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Domain(String),
}

/// Where a reported number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    OracleExact,
    OracleFloat,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::OracleExact => "oracle-exact",
            Provenance::OracleFloat => "oracle-float",
        })
    }
}

/// `R_q = ln(W)/(1−q)` with `W` a positive exact monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyValue {
    pub q: u32,
    pub w: ExactScalar,
}

impl EntropyValue {
    pub fn new(q: u32, w: ExactScalar) -> Result<Self, EntropyError> {
        check_order(q)?;
        if !w.is_positive_monomial() {
            return Err(EntropyError::Exact(ExactError::Domain(format!(
                "frequency moment must be a positive monomial, got {w}"
            ))));
        }
        Ok(EntropyValue { q, w })
    }

    /// `1/(1−q)`.
    pub fn coef(&self) -> Rational {
        Rational::one() / (Rational::one() - int(self.q as i64))
    }

    pub fn value(&self) -> f64 {
        self.value_at(DEFAULT_PRECISION)
    }

    pub fn value_at(&self, precision: usize) -> f64 {
        let ln_w = self.w.ln(precision).expect("W is a positive monomial by construction");
        ln_w / (1.0 - self.q as f64)
    }

    /// The argument `W⁻¹` of the printed logarithm.
    pub fn log_argument(&self) -> ExactScalar {
        self.w.inverse().expect("W is a nonzero monomial")
    }

    pub fn times(&self, other: &EntropyValue) -> EntropyValue {
        assert_eq!(self.q, other.q, "orders must agree");
        EntropyValue { q: self.q, w: &self.w * &other.w }
    }
}

impl fmt::Display for EntropyValue {
    /// `ln(W⁻¹)` scaled by `1/(q−1)`, e.g. `ln(8*pi)` at `q = 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mult = -self.coef();
        if mult.is_one() {
            write!(f, "ln({})", self.log_argument())
        } else {
            write!(f, "{}*ln({})", mult, self.log_argument())
        }
    }
}

/// Splits `c*ln(X)` or `ln(X)` into `(c, X)`.
pub fn parse_log_form(s: &str) -> Result<(Rational, ExactScalar), ExactError> {
    let bad = |reason: &str| ExactError::Parse { input: s.to_string(), reason: reason.to_string() };
    let s_trim = s.trim();
    let (mult, rest) = match s_trim.find("ln(") {
        Some(0) => (Rational::one(), &s_trim[3..]),
        Some(i) => {
            let head = s_trim[..i].strip_suffix('*').ok_or_else(|| bad("expected '*' before ln("))?;
            let c = crate::exactnum::parse_rational(head).ok_or_else(|| bad("bad multiplier"))?;
            (c, &s_trim[i + 3..])
        }
        None => return Err(bad("missing ln(")),
    };
    let inner = rest.strip_suffix(')').ok_or_else(|| bad("missing closing parenthesis"))?;
    Ok((mult, inner.parse()?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenyiBreakdown {
    pub radial: EntropyValue,
    pub angular: EntropyValue,
    pub total: EntropyValue,
}

impl RenyiBreakdown {
    fn from_parts(radial: EntropyValue, angular: EntropyValue) -> Self {
        let total = radial.times(&angular);
        RenyiBreakdown { radial, angular, total }
    }
}

fn check_order(q: u32) -> Result<(), EntropyError> {
    if q < 2 {
        return Err(EntropyError::Domain(format!(
            "closed forms need an integer order q >= 2, got {q}"
        )));
    }
    Ok(())
}

fn rpow(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

fn gamma(x: Rational) -> Result<ExactScalar, EntropyError> {
    Ok(gamma_of(&x)?)
}

/// Deliberate corruptions of the closed forms, used to show that the
/// verification sweep catches a wrong formula.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Lengthens the `(η−L)_{2L+1}` Pochhammer symbol of the radial position factor by one.
    RadialPochhammer,
}

/// The closed-form evaluator. The default value is the correct formula set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClosedForm {
    fault: Option<Fault>,
}

impl ClosedForm {
    #[doc(hidden)]
    pub fn with_fault(fault: Fault) -> Self {
        ClosedForm { fault: Some(fault) }
    }

    /// Radial position moment `W_q[ρ_{n,l}] = ∫ ρ^q r^{D−1} dr`.
    pub fn radial_position_w(&self, state: &HydrogenicState, q: u32) -> Result<ExactScalar, EntropyError> {
        check_order(q)?;
        let dq = state.validate()?;
        let d = state.dim as i64;
        let (n, l) = (state.n as i64, dq.l as i64);
        let qi = q as i64;
        let mut len = (2 * l + d - 2) as u64;
        if self.fault == Some(Fault::RadialPochhammer) {
            len += 1;
        }
        let poch = pochhammer(&int(n - l), len);
        let factor = rpow(&(poch / (&dq.eta * int(2))), qi);
        let spec = LauricellaSpec::uniform(
            int(2 * l * qi + d),
            int(-(n - l - 1)),
            int(2 * l + d - 1),
            ratio(1, qi),
            2 * q as usize,
        );
        let f = lauricella_fa(&spec)?;
        // Γ(D+2lq) / (q^{D+2lq} Γ(2L+2)^{2q}) with 2L+2 = 2l+D−1
        let a = Rational::from_integer(crate::exactnum::factorial((d + 2 * l * qi - 1) as u64))
            / rpow(&int(qi), d + 2 * l * qi)
            / rpow(&Rational::from_integer(crate::exactnum::factorial((2 * l + d - 2) as u64)), 2 * qi);
        let w = rpow(&dq.lambda, d * (1 - qi)) * factor * f * a;
        Ok(ExactScalar::rational(w))
    }

    /// Angular moment `Λ_{l,{μ}}(q) = ∫ |Y|^{2q} dΩ`.
    pub fn angular_w(&self, dim: u32, mu: &[i64], q: u32) -> Result<ExactScalar, EntropyError> {
        check_order(q)?;
        let l = mu.first().map_or(0, |m| m.unsigned_abs()) as u32;
        let state = HydrogenicState::new(dim, l + 1, mu.to_vec(), Rational::one())?;
        let dq = state.validate()?;
        let (d, qi) = (dim as i64, q as i64);
        let l = dq.l as i64;
        let m = dq.m_abs as i64;
        let half_d = ratio(d, 2);
        let qr = int(qi);

        let base = ExactScalar::monomial(int(2), d).pow(1 - qi)?;
        let num = gamma(int(l) + &half_d)?.pow(qi)? * gamma(int(qi * m + 1))?;
        let den = gamma(int(qi * l) + &half_d)? * gamma(int(m + 1))?.pow(qi)?;
        let mut w = &base * &num.checked_div(&den)?;

        let one = Rational::one();
        let half = ratio(1, 2);
        for j in 0..dq.alpha.len() {
            let alpha = &dq.alpha[j];
            let mu_j = int(dq.mu_abs[j] as i64);
            let mu_n = int(dq.mu_abs[j + 1] as i64);
            let kappa = dq.mu_abs[j] - dq.mu_abs[j + 1];
            if kappa == 0 {
                continue;
            }
            let two_alpha = alpha * int(2);
            let b = rpow(&pochhammer(&one, kappa).recip(), qi)
                * rpow(&pochhammer(&(&two_alpha + &mu_n * int(2) + &one), 2 * kappa), qi)
                / rpow(&pochhammer(&(&two_alpha + &mu_j + &mu_n), kappa), qi)
                * pochhammer(&(&qr * &mu_n + alpha + &one), q as u64 * kappa)
                / rpow(&pochhammer(&(alpha + &mu_n + &one), kappa), qi);
            let spec = SrivastavaDaoustSpec::uniform_at_one(
                alpha + &qr * &mu_n + &half,
                -int(kappa as i64),
                &two_alpha + &mu_n + &mu_j,
                &qr * &mu_n * int(2) + &two_alpha + &one,
                alpha + &mu_n + &half,
                2 * q as usize,
            );
            let g = srivastava_daoust(&spec)?;
            w = w.scale(&(b * g));
        }
        Ok(w)
    }

    /// Radial momentum moment `W_q[γ_{n,l}] = ∫ γ^q p^{D−1} dp`.
    pub fn radial_momentum_w(&self, state: &HydrogenicState, q: u32) -> Result<ExactScalar, EntropyError> {
        check_order(q)?;
        let dq = state.validate()?;
        let d = state.dim as i64;
        let (n, l) = (state.n as i64, dq.l as i64);
        let qi = q as i64;
        let qr = int(qi);
        let big_l = &dq.big_l;
        let half_d = ratio(d, 2);
        let three_half = ratio(3, 2);

        let zpow = rpow(&(&state.z / &dq.eta), d * (1 - qi));
        let poch = pochhammer(&int(n - l), (2 * l + d - 2) as u64);
        let factor = rpow(&(&dq.eta * int(2) * poch), qi);
        let spec = SrivastavaDaoustSpec::uniform_at_one(
            (big_l + &three_half) * &qr + &half_d * int(1 - qi),
            int(-(n - l - 1)),
            &dq.eta + big_l + int(1),
            &qr * (big_l * int(2) + int(4)),
            big_l + &three_half,
            2 * q as usize,
        );
        let fbar = srivastava_daoust(&spec)?;
        // 2^{2q−1} Γ(D/2+ql) Γ(−D/2+q(D+l+1)) / (Γ(D/2+l)^{2q} Γ(q(D+2l+1)))
        let num = gamma(&half_d + int(qi * l))? * gamma(-&half_d + int(qi * (d + l + 1)))?;
        let den = gamma(&half_d + int(l))?.pow(2 * qi)? * gamma(int(qi * (d + 2 * l + 1)))?;
        let abar = num.checked_div(&den)?.scale(&rpow(&int(2), 2 * qi - 1));
        Ok(abar.scale(&(zpow * factor * fbar)))
    }

    pub fn position_entropy(&self, state: &HydrogenicState, q: u32) -> Result<RenyiBreakdown, EntropyError> {
        let radial = EntropyValue::new(q, self.radial_position_w(state, q)?)?;
        let angular = EntropyValue::new(q, self.angular_w(state.dim, &state.mu, q)?)?;
        Ok(RenyiBreakdown::from_parts(radial, angular))
    }

    pub fn momentum_entropy(&self, state: &HydrogenicState, q: u32) -> Result<RenyiBreakdown, EntropyError> {
        let radial = EntropyValue::new(q, self.radial_momentum_w(state, q)?)?;
        let angular = EntropyValue::new(q, self.angular_w(state.dim, &state.mu, q)?)?;
        Ok(RenyiBreakdown::from_parts(radial, angular))
    }
}

pub fn radial_position_entropy(state: &HydrogenicState, q: u32) -> Result<EntropyValue, EntropyError> {
    EntropyValue::new(q, ClosedForm::default().radial_position_w(state, q)?)
}

pub fn angular_entropy(dim: u32, mu: &[i64], q: u32) -> Result<EntropyValue, EntropyError> {
    EntropyValue::new(q, ClosedForm::default().angular_w(dim, mu, q)?)
}

pub fn position_entropy(state: &HydrogenicState, q: u32) -> Result<RenyiBreakdown, EntropyError> {
    ClosedForm::default().position_entropy(state, q)
}

pub fn radial_momentum_entropy(state: &HydrogenicState, q: u32) -> Result<EntropyValue, EntropyError> {
    EntropyValue::new(q, ClosedForm::default().radial_momentum_w(state, q)?)
}

pub fn momentum_entropy(state: &HydrogenicState, q: u32) -> Result<RenyiBreakdown, EntropyError> {
    ClosedForm::default().momentum_entropy(state, q)
}

pub fn entropy_in(space: Space, state: &HydrogenicState, q: u32) -> Result<RenyiBreakdown, EntropyError> {
    match space {
        Space::Position => position_entropy(state, q),
        Space::Momentum => momentum_entropy(state, q),
    }
}

/// Integer order `≥ 2` if `q` is one to within rounding.
pub fn as_integer_order(q: f64) -> Option<u32> {
    let r = q.round();
    if (2.0..=1.0e6).contains(&r) && (q - r).abs() <= 1e-12 * r {
        Some(r as u32)
    } else {
        None
    }
}

fn check_real_order(q: f64) -> Result<(), EntropyError> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(EntropyError::Domain(format!("q must be positive, got {q}")));
    }
    if (q - 1.0).abs() < 1e-12 {
        return Err(EntropyError::Domain("q = 1 is the Shannon limit, not a Rényi order handled here".into()));
    }
    Ok(())
}

/// Nodeless-state entropies in float for real `q`, plus the exact breakdown for integer `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct NsEntropy {
    pub q: f64,
    pub radial: f64,
    pub angular: f64,
    pub total: f64,
    pub exact: Option<RenyiBreakdown>,
}

fn ns_state(dim: u32, n: u32, z: &Rational) -> Result<HydrogenicState, EntropyError> {
    Ok(HydrogenicState::ns(dim, n, z.clone())?)
}

fn z_f64(z: &Rational) -> f64 {
    z.to_f64().unwrap_or(f64::NAN)
}

/// `ln(2π^{D/2}) + ln[Γ(l+D/2)^q Γ(ql+1)/(Γ(l+1)^q Γ(ql+D/2))]/(1−q)`.
fn ns_angular_float(dim: u32, l: f64, q: f64) -> f64 {
    let hd = dim as f64 / 2.0;
    let pi = std::f64::consts::PI;
    (2.0 * pi.powf(hd)).ln()
        + (q * ln_gamma(l + hd) + ln_gamma(q * l + 1.0) - q * ln_gamma(l + 1.0) - ln_gamma(q * l + hd)) / (1.0 - q)
}

fn ns_angular_exact(dim: u32, l: i64, q: u32) -> Result<ExactScalar, EntropyError> {
    let qi = q as i64;
    let hd = ratio(dim as i64, 2);
    let base = ExactScalar::monomial(int(2), dim as i64).pow(1 - qi)?;
    let num = gamma(int(l) + &hd)?.pow(qi)? * gamma(int(qi * l + 1))?;
    let den = gamma(int(l + 1))?.pow(qi)? * gamma(int(qi * l) + &hd)?;
    Ok(&base * &num.checked_div(&den)?)
}

/// Position-space entropy of the nodeless state `l = n−1`, all `μ_j = l`.
pub fn ns_position_entropy(dim: u32, n: u32, z: &Rational, q: f64) -> Result<NsEntropy, EntropyError> {
    check_real_order(q)?;
    let state = ns_state(dim, n, z)?;
    let d = dim as f64;
    let eta = n as f64 + (d - 3.0) / 2.0;
    let zf = z_f64(z);
    let e = d + 2.0 * n as f64 * q - 2.0 * q;
    let radial = d * (eta / (2.0 * zf)).ln() - q / (1.0 - q) * ln_gamma(2.0 * eta + 1.0)
        + (ln_gamma(e) - e * q.ln()) / (1.0 - q);
    let angular = ns_angular_float(dim, n as f64 - 1.0, q);
    let exact = match as_integer_order(q) {
        Some(qi) => {
            let dq = state.validate()?;
            let qq = qi as i64;
            let (di, ni) = (dim as i64, n as i64);
            let two_eta_plus_one = 2 * ni + di - 2;
            let e = di + 2 * ni * qq - 2 * qq;
            let w = rpow(&dq.lambda, di * (1 - qq))
                * rpow(&Rational::from_integer(crate::exactnum::factorial((two_eta_plus_one - 1) as u64)), -qq)
                * Rational::from_integer(crate::exactnum::factorial((e - 1) as u64))
                * rpow(&int(qq), -e);
            let r = EntropyValue::new(qi, ExactScalar::rational(w))?;
            let a = EntropyValue::new(qi, ns_angular_exact(dim, ni - 1, qi)?)?;
            Some(RenyiBreakdown::from_parts(r, a))
        }
        None => None,
    };
    Ok(NsEntropy { q, radial, angular, total: radial + angular, exact })
}

/// Momentum-space entropy of the nodeless state `l = n−1`, all `μ_j = l`.
pub fn ns_momentum_entropy(dim: u32, n: u32, z: &Rational, q: f64) -> Result<NsEntropy, EntropyError> {
    check_real_order(q)?;
    let state = ns_state(dim, n, z)?;
    let d = dim as f64;
    let nf = n as f64;
    let eta = nf + (d - 3.0) / 2.0;
    let zf = z_f64(z);
    let radial = d * (zf / eta).ln()
        + q / (1.0 - q) * (4f64.ln() + ln_gamma(2.0 * eta + 1.0))
        + (ln_gamma(d / 2.0 + q * nf - q) + ln_gamma(-d / 2.0 + q * (d + nf))
            - 2f64.ln()
            - 2.0 * q * ln_gamma(nf + d / 2.0 - 1.0)
            - ln_gamma(q * (d + 2.0 * nf - 1.0)))
            / (1.0 - q);
    let angular = ns_angular_float(dim, nf - 1.0, q);
    let exact = match as_integer_order(q) {
        Some(qi) => {
            let dq = state.validate()?;
            let qq = qi as i64;
            let (di, ni) = (dim as i64, n as i64);
            let hd = ratio(di, 2);
            let lead = rpow(&(z / &dq.eta), di * (1 - qq))
                * rpow(
                    &(Rational::from_integer(crate::exactnum::factorial((2 * ni + di - 3) as u64)) * int(4)),
                    qq,
                );
            let num = gamma(&hd + int(qq * ni - qq))? * gamma(-&hd + int(qq * (di + ni)))?;
            let den = gamma(int(ni - 1) + &hd)?.pow(2 * qq)?.scale(&int(2)) * gamma(int(qq * (di + 2 * ni - 1)))?;
            let w = num.checked_div(&den)?.scale(&lead);
            let r = EntropyValue::new(qi, w)?;
            let a = EntropyValue::new(qi, ns_angular_exact(dim, ni - 1, qi)?)?;
            Some(RenyiBreakdown::from_parts(r, a))
        }
        None => None,
    };
    Ok(NsEntropy { q, radial, angular, total: radial + angular, exact })
}

/// Ground-state radial position entropy `ln Γ(D) + D ln[(D−1)/(4Z q^{1/(1−q)})]`.
pub fn ground_radial_position_float(dim: u32, z: f64, q: f64) -> f64 {
    let d = dim as f64;
    ln_gamma(d) + d * ((d - 1.0) / (4.0 * z * q.powf(1.0 / (1.0 - q)))).ln()
}

/// Exact ground-state radial position moment `Γ(D)^{1−q} ((D−1)/(4Z))^{D(1−q)} q^{−D}`.
pub fn ground_radial_position_exact(dim: u32, z: &Rational, q: u32) -> Result<EntropyValue, EntropyError> {
    check_order(q)?;
    let (d, qi) = (dim as i64, q as i64);
    let w = rpow(&Rational::from_integer(crate::exactnum::factorial((d - 1) as u64)), 1 - qi)
        * rpow(&(int(d - 1) / (z * int(4))), d * (1 - qi))
        * rpow(&int(qi), -d);
    EntropyValue::new(q, ExactScalar::rational(w))
}

/// Ground-state radial momentum entropy with the `D ln(2Z/(D−1))` leading term.
pub fn ground_radial_momentum_float(dim: u32, z: f64, q: f64) -> f64 {
    let d = dim as f64;
    d * (2.0 * z / (d - 1.0)).ln()
        + q / (1.0 - q) * (4f64.ln() + ln_gamma(d))
        + ((1.0 - 2.0 * q) * ln_gamma(d / 2.0) + ln_gamma(d * (q - 0.5) + q) - 2f64.ln() - ln_gamma(d * q + q))
            / (1.0 - q)
}

/// Result of the position–momentum uncertainty check at conjugate orders.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncertaintySum {
    pub q: f64,
    pub p: f64,
    pub position: f64,
    pub momentum: f64,
    pub sum: f64,
    pub bound: f64,
    pub margin: f64,
    pub satisfied: bool,
    pub position_provenance: Provenance,
    pub momentum_provenance: Provenance,
}

/// Conjugate order `p = q/(2q−1)`, so that `1/p + 1/q = 2`.
pub fn conjugate_order(q: f64) -> Result<f64, EntropyError> {
    if !(q > 0.5 && q.is_finite()) {
        return Err(EntropyError::Domain(format!("conjugate order needs q > 1/2, got {q}")));
    }
    if (q - 1.0).abs() < 1e-12 {
        return Err(EntropyError::Domain("q = 1 is the Shannon limit, not a Rényi order handled here".into()));
    }
    Ok(q / (2.0 * q - 1.0))
}

/// `D ln(2π (2q)^{1/(2−2q)} (2p)^{1/(2−2p)})`.
pub fn uncertainty_bound(dim: u32, q: f64) -> Result<f64, EntropyError> {
    let p = conjugate_order(q)?;
    let inner = (2.0 * std::f64::consts::PI).ln() + (2.0 * q).ln() / (2.0 - 2.0 * q) + (2.0 * p).ln() / (2.0 - 2.0 * p);
    Ok(dim as f64 * inner)
}

fn side(state: &HydrogenicState, order: f64, space: Space) -> Result<(f64, Provenance), EntropyError> {
    match as_integer_order(order) {
        Some(qi) => Ok((entropy_in(space, state, qi)?.total.value(), Provenance::ClosedForm)),
        None => Ok((renyi_float(state, order, space)?.value, Provenance::OracleFloat)),
    }
}

fn assemble(
    dim: u32,
    q: f64,
    p: f64,
    position: (f64, Provenance),
    momentum: (f64, Provenance),
) -> Result<UncertaintySum, EntropyError> {
    let bound = uncertainty_bound(dim, q)?;
    let sum = position.0 + momentum.0;
    let margin = sum - bound;
    Ok(UncertaintySum {
        q,
        p,
        position: position.0,
        momentum: momentum.0,
        sum,
        bound,
        margin,
        satisfied: margin >= -UNCERTAINTY_TOLERANCE,
        position_provenance: position.1,
        momentum_provenance: momentum.1,
    })
}

/// `R_q[ρ] + R_p[γ]` against the sharp bound; integer orders use the closed
/// forms, other orders the float oracle.
pub fn uncertainty_sum(state: &HydrogenicState, q: f64) -> Result<UncertaintySum, EntropyError> {
    let p = conjugate_order(q)?;
    let position = side(state, q, Space::Position)?;
    let momentum = side(state, p, Space::Momentum)?;
    assemble(state.dim, q, p, position, momentum)
}

/// Uncertainty sum of a nodeless state evaluated entirely with the float shortcuts.
pub fn ns_uncertainty_sum(dim: u32, n: u32, z: &Rational, q: f64) -> Result<UncertaintySum, EntropyError> {
    let p = conjugate_order(q)?;
    let position = ns_position_entropy(dim, n, z, q)?.total;
    let momentum = ns_momentum_entropy(dim, n, z, p)?.total;
    assemble(
        dim,
        q,
        p,
        (position, Provenance::ClosedForm),
        (momentum, Provenance::ClosedForm),
    )
}

/// The π exponent (in halves) of a monomial frequency moment.
pub fn pi_half_exponent(w: &ExactScalar) -> Option<i64> {
    w.as_monomial().map(|(_, k)| k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> HydrogenicState {
        s.parse().unwrap()
    }

    fn pi(c: Rational, k: i64) -> ExactScalar {
        ExactScalar::monomial(c, k)
    }

    #[test]
    fn ground_state_parts() {
        let g = st("D=3,n=1,mu=0,0");
        let r = radial_position_entropy(&g, 2).unwrap();
        assert_eq!(r.w, ExactScalar::rational(ratio(1, 2)));
        assert_eq!(r.to_string(), "ln(2)");
        let a = angular_entropy(3, &[0, 0], 2).unwrap();
        assert_eq!(a.log_argument(), pi(int(4), 2));
        assert_eq!(position_entropy(&g, 2).unwrap().total.to_string(), "ln(8*pi)");
        let m = radial_momentum_entropy(&g, 2).unwrap();
        assert_eq!(m.log_argument(), pi(ratio(4, 33), 2));
        assert_eq!(momentum_entropy(&g, 2).unwrap().total.to_string(), "ln(16/33*pi^2)");
    }

    #[test]
    fn rendering_at_higher_order() {
        let g = st("D=3,n=1,mu=0,0");
        let v = position_entropy(&g, 3).unwrap().total;
        assert!(v.to_string().starts_with("1/2*ln("));
        let (c, x) = parse_log_form(&v.to_string()).unwrap();
        assert_eq!(c, ratio(1, 2));
        assert_eq!(x, v.log_argument());
        assert!((v.value() - 0.5 * v.log_argument().ln(128).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn ground_angular_any_dimension() {
        // Λ(0) is 1/|S^{D−1}| to the power q−1
        for d in 2..=7u32 {
            let mu = vec![0; d as usize - 1];
            let a = angular_entropy(d, &mu, 2).unwrap();
            let surface = 2.0 * std::f64::consts::PI.powf(d as f64 / 2.0) / ln_gamma(d as f64 / 2.0).exp();
            assert!((a.value() - surface.ln()).abs() < 1e-12, "D={d}");
        }
    }

    #[test]
    fn table_rows_through_parts() {
        let s = st("D=3,n=2,mu=1,0");
        let total = position_entropy(&s, 2).unwrap().total;
        assert_eq!(total.log_argument(), pi(ratio(2048, 9), 2));
        let s = st("D=3,n=2,mu=1,1");
        assert_eq!(momentum_entropy(&s, 2).unwrap().total.log_argument(), pi(ratio(1, 13), 4));
    }

    #[test]
    fn nodeless_radial_reduces() {
        // l = n−1 leaves the hypergeometric factors equal to one
        let s = st("D=4,n=3,mu=2,2,2");
        let r = radial_position_entropy(&s, 2).unwrap();
        let ns = ns_position_entropy(4, 3, &int(1), 2.0).unwrap();
        assert_eq!(ns.exact.unwrap().radial, r);
    }

    #[test]
    fn ns_real_order_matches_integer() {
        for (d, n) in [(2, 1), (3, 2), (5, 3), (6, 4)] {
            for q in [2u32, 3] {
                let p = ns_position_entropy(d, n, &int(1), q as f64).unwrap();
                let e = p.exact.as_ref().unwrap();
                assert!((p.radial - e.radial.value()).abs() < 1e-10);
                assert!((p.angular - e.angular.value()).abs() < 1e-10);
                let m = ns_momentum_entropy(d, n, &int(1), q as f64).unwrap();
                let e = m.exact.as_ref().unwrap();
                assert!((m.radial - e.radial.value()).abs() < 1e-10, "D={d} n={n} q={q}");
            }
        }
    }

    #[test]
    fn ground_formulas() {
        for d in 2..=8u32 {
            for q in [2u32, 3, 4] {
                let g = HydrogenicState::ground(d, int(1)).unwrap();
                let general = radial_position_entropy(&g, q).unwrap();
                assert_eq!(ground_radial_position_exact(d, &int(1), q).unwrap(), general);
                assert!((ground_radial_position_float(d, 1.0, q as f64) - general.value()).abs() < 1e-11);
                let mom = radial_momentum_entropy(&g, q).unwrap();
                assert!((ground_radial_momentum_float(d, 1.0, q as f64) - mom.value()).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn uncertainty_examples() {
        let b = uncertainty_bound(3, 2.0).unwrap();
        let direct = 3.0 * (2.0 * std::f64::consts::PI * 0.5 * (4.0f64 / 3.0).powf(1.5)).ln();
        assert!((b - direct).abs() < 1e-13);
        assert!((b - 4.72876).abs() < 1e-5);
        assert!(conjugate_order(0.5).is_err());
        assert!(conjugate_order(1.0).is_err());
        let u = ns_uncertainty_sum(3, 1, &int(1), 2.0).unwrap();
        assert!(u.satisfied && u.margin > 0.0);
    }

    #[test]
    fn z_scaling_is_exact() {
        for s in ["D=3,n=3,mu=1,-1", "D=4,n=2,mu=0,0,0", "D=2,n=2,mu=1"] {
            let base = st(s);
            let scaled = base.with_charge(ratio(5, 2)).unwrap();
            for q in [2u32, 3] {
                let d = base.dim as i64;
                let k = rpow(&ratio(5, 2), d * (1 - q as i64));
                let rp = radial_position_entropy(&base, q).unwrap().w;
                let rz = radial_position_entropy(&scaled, q).unwrap().w;
                assert_eq!(rz, rp.scale(&k.recip()));
                let mp = radial_momentum_entropy(&base, q).unwrap().w;
                let mz = radial_momentum_entropy(&scaled, q).unwrap().w;
                assert_eq!(mz, mp.scale(&k));
            }
        }
    }

    #[test]
    fn monotone_in_order() {
        for s in ["D=3,n=3,mu=2,1", "D=5,n=2,mu=1,0,0,0", "D=2,n=3,mu=-1"] {
            let s = st(s);
            for space in [Space::Position, Space::Momentum] {
                let v: Vec<f64> = (2..=4).map(|q| entropy_in(space, &s, q).unwrap().total.value()).collect();
                assert!(v[0] > v[1] + 1e-12 && v[1] > v[2] + 1e-12, "{s} {space:?}: {v:?}");
            }
        }
    }

    #[test]
    fn fault_changes_the_value() {
        let s = st("D=3,n=2,mu=0,0");
        let good = ClosedForm::default().radial_position_w(&s, 2).unwrap();
        let bad = ClosedForm::with_fault(Fault::RadialPochhammer).radial_position_w(&s, 2).unwrap();
        assert_ne!(good, bad);
    }

    #[test]
    fn order_errors() {
        let g = st("D=3,n=1,mu=0,0");
        assert!(matches!(position_entropy(&g, 1), Err(EntropyError::Domain(_))));
        assert!(ns_position_entropy(3, 1, &int(1), 1.0).is_err());
        assert!(ns_position_entropy(3, 1, &int(1), -2.0).is_err());
        assert_eq!(as_integer_order(2.0000000000000004), Some(2));
        assert_eq!(as_integer_order(2.5), None);
        assert!(parse_log_form("8*pi").is_err());
    }
}
