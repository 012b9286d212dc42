//! Exact classical orthogonal polynomials and the two power-linearization
//! formulas (Laguerre into Laguerre, Jacobi into Jacobi).
//!
//! Coefficients are dense, lowest degree first. Degrees stay small at desk
//! scale (a `2q`-th power of a degree-`n` polynomial), so no sparse storage.

use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Signed, Zero};

use crate::exactnum::{int, pochhammer, Rational};
use crate::hyperfun::{
    axis_table, check_cap, lauricella_fa, term_cap, HyperError, LauricellaSpec,
};

/// Dense polynomial with exact rational coefficients; `coeffs[k]` multiplies `x^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyExact {
    coeffs: Vec<Rational>,
}

impl PolyExact {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyExact { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        PolyExact::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        PolyExact { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        PolyExact::new(vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        PolyExact::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyExact::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(t·x)`.
    pub fn scale_argument(&self, t: &Rational) -> Self {
        let mut power = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &power);
            power *= t;
        }
        PolyExact::new(out)
    }

    /// `x^k · p(x)`.
    pub fn shift_degree(&self, k: usize) -> Self {
        if self.is_zero() {
            return PolyExact::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        PolyExact::new(coeffs)
    }

    /// Re-expands `p(x)` in powers of `(x − center)`.
    pub fn taylor_shift(&self, center: &Rational) -> Self {
        // Horner on polynomials: p(s + center) with s the new variable
        let lin = PolyExact::new(vec![center.clone(), Rational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(PolyExact::zero(), |acc, c| &(&acc * &lin) + &PolyExact::constant(c.clone()))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let cs: Vec<f64> = self.coeffs.iter().map(rational_to_f64).collect();
        cs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn pow(&self, r: u32) -> Self {
        poly_pow(self, r)
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl<'a> Add<&'a PolyExact> for &'a PolyExact {
    type Output = PolyExact;
    fn add(self, rhs: &PolyExact) -> PolyExact {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyExact::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a PolyExact> for &'a PolyExact {
    type Output = PolyExact;
    fn mul(self, rhs: &PolyExact) -> PolyExact {
        if self.is_zero() || rhs.is_zero() {
            return PolyExact::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyExact::new(out)
    }
}

impl fmt::Display for PolyExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `L_n^{(α)}(x)`; the coefficient of `x^k` is `(−1)^k binom(n+α, n−k)/k!`.
pub fn laguerre(n: u32, alpha: &Rational) -> PolyExact {
    let n = n as u64;
    let coeffs = (0..=n)
        .map(|k| {
            // binom(n+α, n−k) = (k+α+1)_{n−k} / (n−k)!
            let binom = pochhammer(&(alpha + int(k as i64 + 1)), n - k)
                / pochhammer(&Rational::one(), n - k);
            let c = binom / pochhammer(&Rational::one(), k);
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    PolyExact::new(coeffs)
}

/// `C_n^{(λ)}(x)` by `(n+1)C_{n+1} = 2(n+λ)x C_n − (n+2λ−1)C_{n−1}`.
pub fn gegenbauer(n: u32, lambda: &Rational) -> PolyExact {
    let x = PolyExact::monomial(Rational::one(), 1);
    let mut prev = PolyExact::constant(Rational::one());
    if n == 0 {
        return prev;
    }
    let two_lambda = lambda * int(2);
    let mut cur = x.scale(&two_lambda);
    for k in 1..n {
        let kr = int(k as i64);
        let a = (&kr + lambda) * int(2) / (&kr + int(1));
        let b = -(&kr + &two_lambda - int(1)) / (&kr + int(1));
        let next = &(&x * &cur).scale(&a) + &prev.scale(&b);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `P_n^{(α,β)}(x)` by the standard three-term recurrence.
pub fn jacobi(n: u32, alpha: &Rational, beta: &Rational) -> PolyExact {
    let one = Rational::one();
    let two = int(2);
    let mut prev = PolyExact::constant(one.clone());
    if n == 0 {
        return prev;
    }
    let ab = alpha + beta;
    // P₁ = (α+1) + (α+β+2)(x−1)/2
    let slope = (&ab + &two) / &two;
    let mut cur = PolyExact::new(vec![alpha + &one - &slope, slope]);
    let x = PolyExact::monomial(one.clone(), 1);
    for k in 2..=n {
        let kr = int(k as i64);
        let c = &kr * &two + &ab; // 2k+α+β
        let denom = &kr * &two * (&kr + &ab) * (&c - &two);
        let lin = (&c - &one) * &c * (&c - &two);
        let cst = (&c - &one) * (alpha * alpha - beta * beta);
        let back = (&kr + alpha - &one) * (&kr + beta - &one) * &c * &two;
        let term = &(&x.scale(&lin) + &PolyExact::constant(cst)) * &cur;
        let next = (&term + &prev.scale(&-back)).scale(&denom.recip());
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Gegenbauer polynomial as a scaled symmetric Jacobi polynomial:
/// `C_κ^{(λ)} = s·P_κ^{(λ−½, λ−½)}` with `s = Γ(λ+½)Γ(κ+2λ)/(Γ(2λ)Γ(κ+λ+½)) = (2λ)_κ/(λ+½)_κ`.
pub fn gegenbauer_as_jacobi(kappa: u32, lambda: &Rational) -> (Rational, PolyExact) {
    let half = Rational::new(1.into(), 2.into());
    let scale = pochhammer(&(lambda * int(2)), kappa as u64)
        / pochhammer(&(lambda + &half), kappa as u64);
    let ab = lambda - &half;
    (scale, jacobi(kappa, &ab, &ab))
}

/// r-th power by repeated convolution.
pub fn poly_pow(p: &PolyExact, r: u32) -> PolyExact {
    let mut out = PolyExact::constant(Rational::one());
    for _ in 0..r {
        out = &out * p;
    }
    out
}

/// `binom(k+α, k) = (α+1)_k / k!`.
fn binom_shifted(k: u32, alpha: &Rational) -> Rational {
    pochhammer(&(alpha + int(1)), k as u64) / pochhammer(&Rational::one(), k as u64)
}

/// Coefficients `c₀…c_{i_max}` of `y^a [L_k^{(α)}(t y)]^r = Σ cᵢ L_i^{(γ)}(y)`,
/// each obtained from an `(r+1)`-variable Lauricella `F_A` with arguments
/// `(t,…,t,1)`.
pub fn laguerre_power_linearization(
    a: u32,
    r: u32,
    t: &Rational,
    k: u32,
    alpha: &Rational,
    gamma: &Rational,
    i_max: u32,
) -> Result<Vec<Rational>, HyperError> {
    let one = Rational::one();
    let prefactor = pochhammer(&(gamma + &one), a as u64)
        * num_traits::pow(binom_shifted(k, alpha), r as usize);
    (0..=i_max)
        .map(|i| {
            let mut spec = LauricellaSpec::uniform(
                gamma + int(a as i64 + 1),
                int(-(k as i64)),
                alpha + &one,
                t.clone(),
                r as usize,
            );
            spec.b.push(int(-(i as i64)));
            spec.c.push(gamma + &one);
            spec.x.push(one.clone());
            Ok(&prefactor * lauricella_fa(&spec)?)
        })
        .collect()
}

/// Coefficients `c̃₀…c̃_{i_max}` of `[P_κ^{(α,β)}]^{2q} = Σ c̃ᵢ P_i^{(γ,δ)}`.
pub fn jacobi_power_linearization(
    kappa: u32,
    q: u32,
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
    delta: &Rational,
    i_max: u32,
) -> Result<Vec<Rational>, HyperError> {
    let one = Rational::one();
    let r = 2 * q as usize;
    let base = num_traits::pow(binom_shifted(kappa, alpha), r);
    // the κ-axes are shared by every i
    let kappa_axis = axis_table(
        &[&int(-(kappa as i64)), &(alpha + beta + int(kappa as i64 + 1))],
        &[&(alpha + &one)],
        &one,
        true,
        kappa as u64,
    );
    // Σ over the κ-axes grouped by their total J
    let mut by_total = vec![one.clone()];
    for _ in 0..r {
        let mut next = vec![Rational::zero(); by_total.len() + kappa as usize];
        for (j, a) in kappa_axis.iter().enumerate() {
            for (t, g) in by_total.iter().enumerate() {
                next[j + t] += a * g;
            }
        }
        by_total = next;
    }
    let top = r * kappa as usize + i_max as usize;
    let mut gamma_poch = Vec::with_capacity(top + 1);
    gamma_poch.push(one.clone());
    for s in 0..top {
        let next = &gamma_poch[s] * (gamma + int(s as i64 + 1));
        gamma_poch.push(next);
    }
    let cap = term_cap();
    let gd = gamma + delta;
    (0..=i_max)
        .map(|i| {
            let ir = int(i as i64);
            // (γ+δ+2i+1)/(γ+δ+i+1) is 1 at i = 0 even when γ+δ = −1
            let ratio = if i == 0 {
                one.clone()
            } else {
                (&gd + &ir * int(2) + &one) / (&gd + &ir + &one)
            };
            let i_axis = axis_table(&[&-&ir], &[&(gamma + &one)], &one, true, i as u64);
            let mut bounds = vec![kappa as u64; r];
            bounds.push(i as u64);
            check_cap(&bounds, cap)?;
            let lower = &gd + &ir + int(2);
            let mut lower_poch = one.clone();
            let mut sum = Rational::zero();
            for (big_j, e) in by_total.iter().enumerate() {
                if big_j > 0 {
                    lower_poch *= &lower + int(big_j as i64 - 1);
                }
                if e.is_zero() {
                    continue;
                }
                let inner: Rational = i_axis
                    .iter()
                    .enumerate()
                    .map(|(jj, c)| c * &gamma_poch[big_j + jj])
                    .sum();
                sum += e * inner / &lower_poch;
            }
            Ok(&base * &ratio * sum)
        })
        .collect()
}

/// `Σ cᵢ·basis(i)` for a family of basis polynomials.
pub fn expand_in_basis<F>(coeffs: &[Rational], mut basis: F) -> PolyExact
where
    F: FnMut(u32) -> PolyExact,
{
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(PolyExact::zero(), |acc, (i, c)| &acc + &basis(i as u32).scale(c))
}

/// Float evaluation of `L_n^{(α)}(x)` by the forward recurrence.
pub fn laguerre_f64(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Float evaluation of `C_n^{(λ)}(x)` by the forward recurrence.
pub fn gegenbauer_f64(n: u32, lambda: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * lambda * x;
    for k in 1..n {
        let k = k as f64;
        let next = (2.0 * (k + lambda) * x * cur - (k + 2.0 * lambda - 1.0) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Real zeros of a polynomial inside `(lo, hi)`, located by sign changes on a
/// uniform grid and refined by bisection.
pub fn real_zeros_f64<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, grid: usize) -> Vec<f64> {
    let mut zeros = Vec::new();
    let h = (hi - lo) / grid as f64;
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=grid {
        let x1 = lo + h * i as f64;
        let f1 = f(x1);
        if f0 == 0.0 && i > 1 {
            zeros.push(x0);
        } else if f0.signum() != f1.signum() && f0 != 0.0 && f1 != 0.0 {
            let (mut a, mut b, mut fa) = (x0, x1, f0);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fm == 0.0 || (b - a).abs() <= 4.0 * f64::EPSILON * m.abs().max(1.0) {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    zeros
}

/// Sign of the leading coefficient, used by callers that need `p(x) > 0` for large `x`.
pub fn leading_sign(p: &PolyExact) -> i32 {
    let c = p.leading();
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}
