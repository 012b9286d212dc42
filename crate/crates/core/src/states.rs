//! D-dimensional hydrogenic stationary states: quantum numbers, validation,
//! derived parameters and float evaluators for the probability densities.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive};
use statrs::function::gamma::ln_gamma;

use crate::exactnum::{int, parse_rational, ratio, Rational};
use crate::polynomials::{gegenbauer_f64, laguerre_f64};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StateError {
    #[error("invalid state: {0}")]
    Invalid(String),
    #[error("cannot parse state {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// A stationary state `(n, μ₁…μ_{D−1})` of the hydrogenic problem with nuclear charge `Z`.
///
/// `mu[0]` is the orbital number `l` and `mu[D−2]` the magnetic number `m`;
/// for `D = 2` there is a single entry with `l = |m|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HydrogenicState {
    pub dim: u32,
    pub n: u32,
    pub mu: Vec<i64>,
    pub z: Rational,
}

/// Parameters that every closed form and every oracle integral needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedQuantum {
    /// `η = n + (D−3)/2`.
    pub eta: Rational,
    /// Grand orbital number `L = l + (D−3)/2`.
    pub big_l: Rational,
    /// Length scale `λ = η/(2Z)`.
    pub lambda: Rational,
    pub l: u64,
    pub m_abs: u64,
    /// `α_j = (D−j−1)/2` for `j = 1…D−2`.
    pub alpha: Vec<Rational>,
    /// `|μ_j|` with the magnetic number taken in absolute value; `mu_abs[0] = l`.
    pub mu_abs: Vec<u64>,
}

impl DerivedQuantum {
    /// Number of radial nodes, `n − l − 1`.
    pub fn radial_degree(&self, n: u32) -> u64 {
        n as u64 - self.l - 1
    }
}

impl HydrogenicState {
    pub fn new(dim: u32, n: u32, mu: Vec<i64>, z: Rational) -> Result<Self, StateError> {
        let s = HydrogenicState { dim, n, mu, z };
        s.validate()?;
        Ok(s)
    }

    /// Nodeless state `l = n−1` with every `μ_j = l`.
    pub fn ns(dim: u32, n: u32, z: Rational) -> Result<Self, StateError> {
        if dim < 2 || n < 1 {
            return Err(StateError::Invalid(format!("D >= 2 and n >= 1 required (D={dim}, n={n})")));
        }
        let l = n as i64 - 1;
        HydrogenicState::new(dim, n, vec![l; dim as usize - 1], z)
    }

    pub fn ground(dim: u32, z: Rational) -> Result<Self, StateError> {
        HydrogenicState::ns(dim, 1, z)
    }

    pub fn l(&self) -> u64 {
        self.mu.first().map_or(0, |m| m.unsigned_abs())
    }

    /// Checks the admissibility chain and reports the first violated inequality.
    pub fn validate(&self) -> Result<DerivedQuantum, StateError> {
        let d = self.dim;
        if d < 2 {
            return Err(StateError::Invalid(format!("D >= 2 violated (D = {d})")));
        }
        if self.n < 1 {
            return Err(StateError::Invalid(format!("n >= 1 violated (n = {})", self.n)));
        }
        if !self.z.is_positive() {
            return Err(StateError::Invalid(format!("Z > 0 violated (Z = {})", self.z)));
        }
        let want = d as usize - 1;
        if self.mu.len() != want {
            return Err(StateError::Invalid(format!(
                "expected {want} hyperangular numbers for D = {d}, got {}",
                self.mu.len()
            )));
        }
        let l = if d == 2 {
            self.mu[0].unsigned_abs()
        } else {
            if self.mu[0] < 0 {
                return Err(StateError::Invalid(format!("mu_1 >= 0 violated (mu_1 = {})", self.mu[0])));
            }
            self.mu[0] as u64
        };
        if (self.n as u64) < l + 1 {
            return Err(StateError::Invalid(format!(
                "n - 1 >= mu_1 violated (n = {}, mu_1 = {l})",
                self.n
            )));
        }
        for j in 0..want.saturating_sub(1) {
            let a = self.mu[j];
            let b = self.mu[j + 1];
            let (rhs, label) = if j + 1 == want - 1 {
                (b.abs(), format!("mu_{} >= |mu_{}|", j + 1, j + 2))
            } else {
                (b, format!("mu_{} >= mu_{}", j + 1, j + 2))
            };
            if a < rhs {
                return Err(StateError::Invalid(format!("{label} violated ({a} < {rhs})")));
            }
        }
        let shift = ratio(d as i64 - 3, 2);
        let eta = int(self.n as i64) + &shift;
        let big_l = int(l as i64) + &shift;
        let lambda = &eta / (&self.z * int(2));
        let alpha = (1..=d as i64 - 2).map(|j| ratio(d as i64 - j - 1, 2)).collect();
        let mut mu_abs: Vec<u64> = self.mu.iter().map(|m| m.unsigned_abs()).collect();
        mu_abs[0] = l;
        Ok(DerivedQuantum {
            eta,
            big_l,
            lambda,
            l,
            m_abs: self.mu[want - 1].unsigned_abs(),
            alpha,
            mu_abs,
        })
    }

    /// Energy `−Z²/(2η²)` in atomic units.
    pub fn energy(&self) -> Result<Rational, StateError> {
        let dq = self.validate()?;
        Ok(-(&self.z * &self.z) / (&dq.eta * &dq.eta * int(2)))
    }

    pub fn is_ns(&self) -> bool {
        let l = self.n as i64 - 1;
        self.mu.iter().all(|&m| m.abs() == l) && self.mu[..self.mu.len() - 1].iter().all(|&m| m == l)
    }

    pub fn with_charge(&self, z: Rational) -> Result<Self, StateError> {
        HydrogenicState::new(self.dim, self.n, self.mu.clone(), z)
    }
}

impl fmt::Display for HydrogenicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mu: Vec<String> = self.mu.iter().map(ToString::to_string).collect();
        write!(f, "D={},n={},mu={},Z={}", self.dim, self.n, mu.join(","), self.z)
    }
}

impl FromStr for HydrogenicState {
    type Err = StateError;

    /// Parses `D=3,n=3,mu=2,1,Z=1`; bare tokens after `mu=` extend the chain
    /// and `Z` defaults to 1.
    fn from_str(s: &str) -> Result<Self, StateError> {
        let err = |reason: String| StateError::Parse { input: s.to_string(), reason };
        let (mut dim, mut n, mut z) = (None, None, None);
        let mut mu: Option<Vec<i64>> = None;
        let mut in_mu = false;
        for raw in s.split(',') {
            let tok = raw.trim();
            if tok.is_empty() {
                continue;
            }
            match tok.split_once('=') {
                Some((key, value)) => {
                    in_mu = false;
                    let value = value.trim();
                    match key.trim() {
                        "D" | "d" => {
                            dim = Some(value.parse::<u32>().map_err(|e| err(format!("D: {e}")))?)
                        }
                        "n" => n = Some(value.parse::<u32>().map_err(|e| err(format!("n: {e}")))?),
                        "Z" | "z" => {
                            z = Some(parse_rational(value).ok_or_else(|| err(format!("Z: bad rational {value:?}")))?)
                        }
                        "mu" => {
                            let mut v = Vec::new();
                            if !value.is_empty() {
                                v.push(value.parse::<i64>().map_err(|e| err(format!("mu: {e}")))?);
                            }
                            mu = Some(v);
                            in_mu = true;
                        }
                        other => return Err(err(format!("unknown key {other:?}"))),
                    }
                }
                None if in_mu => {
                    let v = tok.parse::<i64>().map_err(|e| err(format!("mu: {e}")))?;
                    mu.get_or_insert_with(Vec::new).push(v);
                }
                None => return Err(err(format!("stray token {tok:?}"))),
            }
        }
        let dim = dim.ok_or_else(|| err("missing D".into()))?;
        let n = n.ok_or_else(|| err("missing n".into()))?;
        let mu = mu.ok_or_else(|| err("missing mu".into()))?;
        HydrogenicState::new(dim, n, mu, z.unwrap_or_else(Rational::one))
    }
}

/// Every admissible hyperangular chain for `(D, n)`.
pub fn admissible_chains(dim: u32, n: u32) -> Vec<Vec<i64>> {
    if dim < 2 || n < 1 {
        return Vec::new();
    }
    let len = dim as usize - 1;
    let mut out = Vec::new();
    if dim == 2 {
        let l = n as i64 - 1;
        for m in -l..=l {
            out.push(vec![m]);
        }
        return out;
    }
    let mut chain = Vec::with_capacity(len);
    fn rec(chain: &mut Vec<i64>, len: usize, upper: i64, out: &mut Vec<Vec<i64>>) {
        if chain.len() == len - 1 {
            for m in -upper..=upper {
                chain.push(m);
                out.push(chain.clone());
                chain.pop();
            }
            return;
        }
        for v in (0..=upper).rev() {
            chain.push(v);
            rec(chain, len, v, out);
            chain.pop();
        }
    }
    rec(&mut chain, len, n as i64 - 1, &mut out);
    out
}

/// Every admissible state with `D` and `n` in the given ranges, at charge `z`.
pub fn enumerate_states(dims: std::ops::RangeInclusive<u32>, n_max: u32, z: &Rational) -> Vec<HydrogenicState> {
    let mut out = Vec::new();
    for d in dims {
        for n in 1..=n_max {
            for mu in admissible_chains(d, n) {
                out.push(HydrogenicState { dim: d, n, mu, z: z.clone() });
            }
        }
    }
    out
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Float evaluators for one state, optionally at a real nuclear charge.
#[derive(Debug, Clone)]
pub struct DensityProfile {
    pub dim: u32,
    pub n: u32,
    pub l: u64,
    pub eta: f64,
    pub big_l: f64,
    pub z: f64,
    pub lambda: f64,
    /// `(κ_j, λ_j = α_j + μ_{j+1}, μ_{j+1})` per hyperangle.
    pub angular_factors: Vec<(u32, f64, u64)>,
    pub m_abs: u64,
    ln_radial_norm: f64,
    ln_momentum_norm: f64,
    ln_angular_norm: f64,
}

impl DensityProfile {
    pub fn new(state: &HydrogenicState) -> Result<Self, StateError> {
        let z = to_f64(&state.z);
        Self::with_charge(state, z)
    }

    pub fn with_charge(state: &HydrogenicState, z: f64) -> Result<Self, StateError> {
        let dq = state.validate()?;
        if !(z > 0.0 && z.is_finite()) {
            return Err(StateError::Invalid(format!("Z > 0 violated (Z = {z})")));
        }
        let d = state.dim as f64;
        let eta = to_f64(&dq.eta);
        let big_l = to_f64(&dq.big_l);
        let lambda = eta / (2.0 * z);
        let nr = dq.radial_degree(state.n) as f64;
        // N² = λ^{−D} (η−L−1)! / (2η Γ(η+L+1))
        let ln_radial_norm = -d * lambda.ln() + ln_gamma(nr + 1.0) - (2.0 * eta).ln() - ln_gamma(eta + big_l + 1.0);
        // in u = ηp/Z the momentum normalization is
        // 2^{4L+5} (η−L−1)! η Γ(L+1)² / (π Γ(η+L+1))
        let ln_momentum_norm = (4.0 * big_l + 5.0) * 2f64.ln() + ln_gamma(nr + 1.0) + eta.ln()
            + 2.0 * ln_gamma(big_l + 1.0)
            - std::f64::consts::PI.ln()
            - ln_gamma(eta + big_l + 1.0);
        let mut angular_factors = Vec::new();
        let mut ln_ang = -(2.0 * std::f64::consts::PI).ln();
        for (j, alpha) in dq.alpha.iter().enumerate() {
            let a = to_f64(alpha);
            let mu_j = dq.mu_abs[j];
            let mu_next = dq.mu_abs[j + 1];
            let kappa = (mu_j - mu_next) as u32;
            let lam = a + mu_next as f64;
            angular_factors.push((kappa, lam, mu_next));
            // normalization of C_κ^{(λ)}(cos θ) sin^{μ'}θ against sin^{2α}θ dθ
            let k = kappa as f64;
            let ln_h = (1.0 - 2.0 * lam) * 2f64.ln() + std::f64::consts::PI.ln() + ln_gamma(k + 2.0 * lam)
                - ln_gamma(k + 1.0)
                - (k + lam).ln()
                - 2.0 * ln_gamma(lam);
            ln_ang -= ln_h;
        }
        Ok(DensityProfile {
            dim: state.dim,
            n: state.n,
            l: dq.l,
            eta,
            big_l,
            z,
            lambda,
            angular_factors,
            m_abs: dq.m_abs,
            ln_radial_norm,
            ln_momentum_norm,
            ln_angular_norm: ln_ang,
        })
    }

    fn radial_degree(&self) -> u32 {
        self.n - self.l as u32 - 1
    }

    /// `ρ_{n,l}(r)` such that `∫ ρ r^{D−1} dr = 1`.
    pub fn radial_position(&self, r: f64) -> f64 {
        let x = r / self.lambda;
        self.radial_position_scaled(x)
    }

    /// `ρ(λx)` as a function of `x = r/λ`.
    pub fn radial_position_scaled(&self, x: f64) -> f64 {
        let lag = laguerre_f64(self.radial_degree(), 2.0 * self.big_l + 1.0, x);
        let ln_core = self.ln_radial_norm - x + if self.l > 0 { 2.0 * self.l as f64 * x.ln() } else { 0.0 };
        ln_core.exp() * lag * lag
    }

    /// Radial momentum density `γ(p)` such that `∫ γ p^{D−1} dp = 1`.
    pub fn radial_momentum(&self, p: f64) -> f64 {
        let u = self.eta * p / self.z;
        self.radial_momentum_scaled(u) * (self.eta / self.z).powi(self.dim as i32)
    }

    /// Momentum density in `u = ηp/Z`, normalized so that `∫ γ̃ u^{D−1} du = 1`.
    pub fn radial_momentum_scaled(&self, u: f64) -> f64 {
        let y = (1.0 - u * u) / (1.0 + u * u);
        let g = gegenbauer_f64(self.radial_degree(), self.big_l + 1.0, y);
        let ln_core = self.ln_momentum_norm - (2.0 * self.big_l + 4.0) * (1.0 + u * u).ln()
            + if self.l > 0 { 2.0 * self.l as f64 * u.ln() } else { 0.0 };
        ln_core.exp() * g * g
    }

    /// `|Y_{l,{μ}}(Ω)|²` at hyperangles `θ₁…θ_{D−2}, φ`.
    pub fn angular(&self, angles: &[f64]) -> Result<f64, StateError> {
        let want = self.dim as usize - 1;
        if angles.len() != want {
            return Err(StateError::Invalid(format!("expected {want} angles, got {}", angles.len())));
        }
        let mut v = self.ln_angular_norm.exp();
        for (&(kappa, lam, mu_next), &theta) in self.angular_factors.iter().zip(angles) {
            let c = gegenbauer_f64(kappa, lam, theta.cos());
            v *= c * c * theta.sin().powi(2 * mu_next as i32);
        }
        Ok(v)
    }

    /// `ln N²` of the radial position density.
    pub fn ln_radial_norm(&self) -> f64 {
        self.ln_radial_norm
    }

    /// `ln` of the momentum normalization in the variable `u = ηp/Z`.
    pub fn ln_momentum_norm(&self) -> f64 {
        self.ln_momentum_norm
    }

    /// `ln` of the constant in front of the product of Gegenbauer factors in `|Y|²`.
    pub fn ln_angular_norm(&self) -> f64 {
        self.ln_angular_norm
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> HydrogenicState {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        let s = st("D=3,n=3,mu=2,1,Z=1");
        assert_eq!(s.dim, 3);
        assert_eq!(s.mu, vec![2, 1]);
        assert_eq!(s.to_string(), "D=3,n=3,mu=2,1,Z=1");
        let s = st("D=4, n=2, mu=1,1,-1, Z=5/2");
        assert_eq!(s.z, ratio(5, 2));
        assert_eq!(s.to_string().parse::<HydrogenicState>().unwrap(), s);
        assert_eq!(st("D=2,n=3,mu=-2").l(), 2);
        assert!("D=3,n=1".parse::<HydrogenicState>().is_err());
        assert!("D=3,n=1,mu=0,0,q=2".parse::<HydrogenicState>().is_err());
    }

    #[test]
    fn validation_names_first_violation() {
        let e = |s: &str| s.parse::<HydrogenicState>().unwrap_err().to_string();
        assert!(e("D=3,n=2,mu=2,0").contains("n - 1 >= mu_1"));
        assert!(e("D=4,n=3,mu=1,2,0").contains("mu_1 >= mu_2"));
        assert!(e("D=3,n=3,mu=1,-2").contains("mu_1 >= |mu_2|"));
        assert!(e("D=3,n=1,mu=0").contains("expected 2"));
        assert!(e("D=1,n=1,mu=0").contains("D >= 2"));
        assert!(e("D=3,n=0,mu=0,0").contains("n >= 1"));
        assert!(e("D=3,n=1,mu=0,0,Z=0").contains("Z > 0"));
        assert!(e("D=3,n=1,mu=-1,0").contains("mu_1 >= 0"));
    }

    #[test]
    fn derived_values() {
        let dq = st("D=5,n=3,mu=2,1,1,-1,Z=2").validate().unwrap();
        assert_eq!(dq.eta, int(4));
        assert_eq!(dq.big_l, int(3));
        assert_eq!(dq.lambda, int(1));
        assert_eq!(dq.alpha, vec![ratio(3, 2), int(1), ratio(1, 2)]);
        assert_eq!(dq.m_abs, 1);
        assert_eq!(dq.mu_abs, vec![2, 1, 1, 1]);
        assert_eq!(st("D=3,n=2,mu=1,0").energy().unwrap(), ratio(-1, 8));
        assert_eq!(st("D=2,n=1,mu=0").energy().unwrap(), int(-2));
    }

    fn brute_chains(dim: u32, n: u32) -> Vec<Vec<i64>> {
        let len = dim as usize - 1;
        let span = n as i64 - 1;
        let mut out = Vec::new();
        let total = (2 * span + 1).pow(len as u32);
        for code in 0..total {
            let mut c = code;
            let mut mu = Vec::with_capacity(len);
            for _ in 0..len {
                mu.push(c % (2 * span + 1) - span);
                c /= 2 * span + 1;
            }
            if HydrogenicState::new(dim, n, mu.clone(), int(1)).is_ok() {
                out.push(mu);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn chains_match_brute_force() {
        for dim in 2..=5 {
            for n in 1..=4 {
                let mut got = admissible_chains(dim, n);
                got.sort();
                assert_eq!(got, brute_chains(dim, n), "D={dim} n={n}");
            }
        }
        // in three dimensions the count is 2l+1 per l
        assert_eq!(admissible_chains(3, 3).len(), 9);
    }

    #[test]
    fn ns_detection() {
        assert!(st("D=4,n=3,mu=2,2,-2").is_ns());
        assert!(!st("D=4,n=3,mu=2,1,1").is_ns());
        assert!(HydrogenicState::ns(6, 2, int(1)).unwrap().is_ns());
    }

    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + h * i as f64);
        }
        s * h / 3.0
    }

    #[test]
    fn densities_are_normalized() {
        for s in ["D=3,n=1,mu=0,0", "D=3,n=3,mu=1,0", "D=4,n=2,mu=1,0,0,Z=2", "D=2,n=3,mu=1"] {
            let st = st(s);
            let p = DensityProfile::new(&st).unwrap();
            let d = st.dim as i32;
            let rad = simpson(|r| p.radial_position(r) * r.powi(d - 1), 0.0, 80.0 * p.lambda, 20000);
            assert!((rad - 1.0).abs() < 1e-9, "{s}: position {rad}");
            // u = tan(θ/2) maps the half-line to a bounded interval for the algebraic tail
            let mom = simpson(
                |t| {
                    let u = (t / 2.0).tan();
                    let jac = 0.5 / (t / 2.0).cos().powi(2);
                    p.radial_momentum_scaled(u) * u.powi(d - 1) * jac
                },
                0.0,
                std::f64::consts::PI - 1e-9,
                20000,
            );
            assert!((mom - 1.0).abs() < 1e-8, "{s}: momentum {mom}");
        }
    }

    #[test]
    fn three_dimensional_spherical_harmonic() {
        // |Y_{1,0}|² = 3cos²θ/(4π)
        let p = DensityProfile::new(&st("D=3,n=2,mu=1,0")).unwrap();
        let th = 0.7f64;
        let v = p.angular(&[th, 0.3]).unwrap();
        assert!((v - 3.0 * th.cos().powi(2) / (4.0 * std::f64::consts::PI)).abs() < 1e-14);
        let ground = DensityProfile::new(&st("D=3,n=1,mu=0,0")).unwrap();
        assert!((ground.angular(&[0.1, 0.2]).unwrap() - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert!(ground.angular(&[0.1]).is_err());
    }
}
