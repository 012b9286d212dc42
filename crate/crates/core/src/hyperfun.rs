//! Terminating multivariate hypergeometric sums over exact rationals.
//!
//! Both the Lauricella `F_A^(s)` and the Srivastava–Daoust `F^{1:2;…;2}_{1:1;…;1}`
//! functions factor as a shared coefficient depending on `J = j₁+…+j_s` times
//! a product of per-axis factors depending on `jᵢ` alone. The engine tabulates
//! both by ratio recurrences and multiplies the per-axis generating
//! polynomials, so the box `[0,N₁]×…×[0,N_s]` is summed grouped by `J`.

use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::{int, is_nonpositive_integer, Rational};

/// Default cap on the number of multi-index points visited.
pub const DEFAULT_TERM_CAP: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_TERM_CAP`].
pub const TERM_CAP_ENV: &str = "HYDRENYI_TERM_CAP";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error("parameter lists have mismatched lengths ({0})")]
    Shape(String),
    #[error("axis {axis} does not terminate: no nonpositive integer numerator parameter")]
    NonTerminating { axis: usize },
    #[error("pole: denominator parameter {param} vanishes inside the summation range")]
    Pole { param: String },
    #[error("multi-index box has {terms} points, above the cap of {cap}")]
    TermCap { terms: u128, cap: u64 },
}

/// The cap in effect: `HYDRENYI_TERM_CAP` when set and parseable, else the default.
pub fn term_cap() -> u64 {
    std::env::var(TERM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_TERM_CAP)
}

fn box_size(bounds: &[u64]) -> u128 {
    bounds
        .iter()
        .fold(1u128, |acc, b| acc.saturating_mul(*b as u128 + 1))
}

pub(crate) fn check_cap(bounds: &[u64], cap: u64) -> Result<(), HyperError> {
    let terms = box_size(bounds);
    if terms > cap as u128 {
        Err(HyperError::TermCap { terms, cap })
    } else {
        Ok(())
    }
}

/// Advances `idx` lexicographically (last axis fastest). Returns the lowest
/// axis that changed, or `None` once the box is exhausted.
fn advance(idx: &mut [u64], bounds: &[u64]) -> Option<usize> {
    for axis in (0..idx.len()).rev() {
        if idx[axis] < bounds[axis] {
            idx[axis] += 1;
            return Some(axis);
        }
        idx[axis] = 0;
    }
    None
}

/// Exact sum of `term(j)` over the box `[0,b₁]×…×[0,b_s]`, using the cap from
/// [`term_cap`].
pub fn multi_index_sum<F>(bounds: &[u64], term: F) -> Result<Rational, HyperError>
where
    F: FnMut(&[u64]) -> Rational,
{
    multi_index_sum_capped(bounds, term_cap(), term)
}

pub fn multi_index_sum_capped<F>(bounds: &[u64], cap: u64, mut term: F) -> Result<Rational, HyperError>
where
    F: FnMut(&[u64]) -> Rational,
{
    check_cap(bounds, cap)?;
    let mut idx = vec![0u64; bounds.len()];
    let mut total = Rational::zero();
    loop {
        total += term(&idx);
        if advance(&mut idx, bounds).is_none() {
            return Ok(total);
        }
    }
}

/// Product-form sum: `Σ shared[J]·Π axes[i][jᵢ]` with `J = Σ jᵢ`.
///
/// `axes[i].len() - 1` is the bound on axis `i`; `shared` must cover `J` up to
/// the sum of all bounds.
pub(crate) fn product_form_sum(
    shared: &[Rational],
    axes: &[Vec<Rational>],
    cap: u64,
) -> Result<Rational, HyperError> {
    let bounds: Vec<u64> = axes.iter().map(|a| a.len() as u64 - 1).collect();
    check_cap(&bounds, cap)?;
    // Π_i (Σ_j axes[i][j] zʲ) collects every multi-index by its total J
    let mut by_total = vec![Rational::one()];
    for axis in axes {
        let mut next = vec![Rational::zero(); by_total.len() + axis.len() - 1];
        for (j, a) in axis.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, g) in by_total.iter().enumerate() {
                if !g.is_zero() {
                    next[j + k] += a * g;
                }
            }
        }
        by_total = next;
    }
    Ok(by_total
        .iter()
        .zip(shared)
        .filter(|(g, _)| !g.is_zero())
        .map(|(g, c)| g * c)
        .sum())
}

/// `t[j] = Π_p (num_p)_j / Π_q (den_p)_j · x^j / j!` for `j = 0..=bound`,
/// built by the ratio `t[j+1]/t[j]`.
pub(crate) fn axis_table(
    numer: &[&Rational],
    denom: &[&Rational],
    x: &Rational,
    with_factorial: bool,
    bound: u64,
) -> Vec<Rational> {
    let mut out = Vec::with_capacity(bound as usize + 1);
    let mut cur = Rational::one();
    out.push(cur.clone());
    for j in 0..bound {
        let jr = int(j as i64);
        let mut ratio = x.clone();
        for a in numer {
            ratio *= *a + &jr;
        }
        for d in denom {
            ratio /= *d + &jr;
        }
        if with_factorial {
            ratio /= int(j as i64 + 1);
        }
        cur *= ratio;
        out.push(cur.clone());
    }
    out
}

/// Largest index `j` such that `(b)_j` may be nonzero; `None` if `b` is not a
/// nonpositive integer.
fn termination_bound(b: &Rational) -> Option<u64> {
    if is_nonpositive_integer(b) {
        (-b).to_integer().to_u64()
    } else {
        None
    }
}

fn check_no_pole(name: &str, c: &Rational, max_index: u64) -> Result<(), HyperError> {
    // (c)_j vanishes for j > -c when c is a nonpositive integer
    if is_nonpositive_integer(c) {
        let reach = (-c).to_integer().to_u64().unwrap_or(u64::MAX);
        if max_index > reach {
            return Err(HyperError::Pole {
                param: format!("{name} = {c}"),
            });
        }
    }
    Ok(())
}

/// Parameters of `F_A^(s)(a; b₁…b_s; c₁…c_s; x₁…x_s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LauricellaSpec {
    pub a: Rational,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
    pub x: Vec<Rational>,
}

impl LauricellaSpec {
    /// All axes share the same `(b, c, x)`, as in the radial entropy.
    pub fn uniform(a: Rational, b: Rational, c: Rational, x: Rational, s: usize) -> Self {
        LauricellaSpec {
            a,
            b: vec![b; s],
            c: vec![c; s],
            x: vec![x; s],
        }
    }

    fn bounds(&self) -> Result<Vec<u64>, HyperError> {
        let s = self.b.len();
        if s == 0 || self.c.len() != s || self.x.len() != s {
            return Err(HyperError::Shape(format!(
                "b={}, c={}, x={}",
                self.b.len(),
                self.c.len(),
                self.x.len()
            )));
        }
        let mut bounds = Vec::with_capacity(s);
        for (axis, (b, c)) in self.b.iter().zip(&self.c).enumerate() {
            let n = termination_bound(b).ok_or(HyperError::NonTerminating { axis })?;
            check_no_pole(&format!("c[{axis}]"), c, n)?;
            bounds.push(n);
        }
        Ok(bounds)
    }
}

/// Lauricella function of type A, summed exactly over its terminating box.
pub fn lauricella_fa(spec: &LauricellaSpec) -> Result<Rational, HyperError> {
    lauricella_fa_capped(spec, term_cap())
}

pub fn lauricella_fa_capped(spec: &LauricellaSpec, cap: u64) -> Result<Rational, HyperError> {
    let bounds = spec.bounds()?;
    check_cap(&bounds, cap)?;
    let total: u64 = bounds.iter().sum();
    let one = Rational::one();
    let shared = axis_table(&[&spec.a], &[], &one, false, total);
    let axes: Vec<Vec<Rational>> = (0..bounds.len())
        .map(|i| axis_table(&[&spec.b[i]], &[&spec.c[i]], &spec.x[i], true, bounds[i]))
        .collect();
    product_form_sum(&shared, &axes, cap)
}

/// Parameters of the r-variate Srivastava–Daoust function
/// `F^{1:2;…;2}_{1:1;…;1}(a₀: b₁,c₁;…; d₀: e₁;…; x₁…x_r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SrivastavaDaoustSpec {
    pub a0: Rational,
    /// `(bⱼ, cⱼ)` numerator pairs; each `bⱼ` is a nonpositive integer.
    pub pairs: Vec<(Rational, Rational)>,
    pub d0: Rational,
    pub e: Vec<Rational>,
    pub x: Vec<Rational>,
}

impl SrivastavaDaoustSpec {
    /// Identical parameters on every axis and all arguments equal to one.
    pub fn uniform_at_one(
        a0: Rational,
        b: Rational,
        c: Rational,
        d0: Rational,
        e: Rational,
        r: usize,
    ) -> Self {
        SrivastavaDaoustSpec {
            a0,
            pairs: vec![(b, c); r],
            d0,
            e: vec![e; r],
            x: vec![Rational::one(); r],
        }
    }

    fn bounds(&self) -> Result<Vec<u64>, HyperError> {
        let r = self.pairs.len();
        if r == 0 || self.e.len() != r || self.x.len() != r {
            return Err(HyperError::Shape(format!(
                "pairs={}, e={}, x={}",
                r,
                self.e.len(),
                self.x.len()
            )));
        }
        let mut bounds = Vec::with_capacity(r);
        for (axis, ((b, c), e)) in self.pairs.iter().zip(&self.e).enumerate() {
            let n = match (termination_bound(b), termination_bound(c)) {
                (Some(nb), Some(nc)) => nb.min(nc),
                (Some(nb), None) => nb,
                (None, Some(nc)) => nc,
                (None, None) => return Err(HyperError::NonTerminating { axis }),
            };
            check_no_pole(&format!("e[{axis}]"), e, n)?;
            bounds.push(n);
        }
        let total: u64 = bounds.iter().sum();
        check_no_pole("d0", &self.d0, total)?;
        Ok(bounds)
    }
}

/// Srivastava–Daoust function summed exactly over its terminating box.
pub fn srivastava_daoust(spec: &SrivastavaDaoustSpec) -> Result<Rational, HyperError> {
    srivastava_daoust_capped(spec, term_cap())
}

pub fn srivastava_daoust_capped(
    spec: &SrivastavaDaoustSpec,
    cap: u64,
) -> Result<Rational, HyperError> {
    let bounds = spec.bounds()?;
    check_cap(&bounds, cap)?;
    let total: u64 = bounds.iter().sum();
    let one = Rational::one();
    let shared = axis_table(&[&spec.a0], &[&spec.d0], &one, false, total);
    let axes: Vec<Vec<Rational>> = (0..bounds.len())
        .map(|i| {
            let (b, c) = &spec.pairs[i];
            axis_table(&[b, c], &[&spec.e[i]], &spec.x[i], true, bounds[i])
        })
        .collect();
    product_form_sum(&shared, &axes, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{factorial, pochhammer, ratio};
    use proptest::prelude::*;

    fn fact(j: u64) -> Rational {
        Rational::from_integer(factorial(j))
    }

    /// Direct Lauricella sum with every Pochhammer recomputed from scratch.
    fn lauricella_brute(spec: &LauricellaSpec) -> Rational {
        let bounds: Vec<u64> = spec
            .b
            .iter()
            .map(|b| (-b).to_integer().to_u64().unwrap())
            .collect();
        multi_index_sum_capped(&bounds, u64::MAX, |j| {
            let total: u64 = j.iter().sum();
            let mut t = pochhammer(&spec.a, total);
            for (i, &ji) in j.iter().enumerate() {
                t *= pochhammer(&spec.b[i], ji) * num_traits::pow(spec.x[i].clone(), ji as usize);
                t /= pochhammer(&spec.c[i], ji) * fact(ji);
            }
            t
        })
        .unwrap()
    }

    #[test]
    fn multi_index_examples() {
        assert_eq!(multi_index_sum(&[], |_| int(7)).unwrap(), int(7));
        assert_eq!(multi_index_sum(&[1, 1], |_| int(1)).unwrap(), int(4));
        assert_eq!(
            multi_index_sum(&[2], |j| int((j[0] * j[0]) as i64)).unwrap(),
            int(5)
        );
    }

    #[test]
    fn cap_is_enforced() {
        let err = multi_index_sum_capped(&[9, 9, 9], 999, |_| int(1)).unwrap_err();
        assert_eq!(err, HyperError::TermCap { terms: 1000, cap: 999 });
        let spec = LauricellaSpec::uniform(int(3), int(-3), int(2), ratio(1, 2), 6);
        assert!(matches!(
            lauricella_fa_capped(&spec, 100),
            Err(HyperError::TermCap { terms: 4096, .. })
        ));
    }

    #[test]
    fn lauricella_trivial_axes() {
        let spec = LauricellaSpec {
            a: ratio(7, 3),
            b: vec![int(0), int(0)],
            c: vec![int(5), ratio(1, 2)],
            x: vec![int(9), int(-4)],
        };
        assert_eq!(lauricella_fa(&spec).unwrap(), int(1));
    }

    #[test]
    fn lauricella_2s_state_value() {
        // radial 2s, D=3, q=2: Σ_J C(4,J)(3)_J(-1/4)^J
        let spec = LauricellaSpec::uniform(int(3), int(-1), int(2), ratio(1, 2), 4);
        let value = lauricella_fa(&spec).unwrap();
        assert_eq!(value, lauricella_brute(&spec));
        assert_eq!(value, ratio(5, 32));
    }

    #[test]
    fn lauricella_errors() {
        let non_term = LauricellaSpec::uniform(int(1), ratio(1, 2), int(1), int(1), 2);
        assert_eq!(
            lauricella_fa(&non_term).unwrap_err(),
            HyperError::NonTerminating { axis: 0 }
        );
        let pole = LauricellaSpec::uniform(int(1), int(-3), int(-1), int(1), 1);
        assert!(matches!(lauricella_fa(&pole), Err(HyperError::Pole { .. })));
        let shape = LauricellaSpec {
            a: int(1),
            b: vec![int(-1)],
            c: vec![],
            x: vec![int(1)],
        };
        assert!(matches!(lauricella_fa(&shape), Err(HyperError::Shape(_))));
        // pole beyond the termination range is harmless
        let safe = LauricellaSpec::uniform(int(1), int(-1), int(-1), int(1), 1);
        assert!(lauricella_fa(&safe).is_ok());
    }

    #[test]
    fn srivastava_daoust_trivial() {
        let spec = SrivastavaDaoustSpec::uniform_at_one(
            ratio(3, 2),
            int(0),
            int(4),
            int(5),
            ratio(3, 2),
            4,
        );
        assert_eq!(srivastava_daoust(&spec).unwrap(), int(1));
    }

    #[test]
    fn srivastava_daoust_matches_brute_force() {
        // angular factor for D=3, l=1, m=0, q=2: a=1, b=-1, c=2, d=2, e=1
        let spec = SrivastavaDaoustSpec::uniform_at_one(int(1), int(-1), int(2), int(2), int(1), 4);
        let direct = multi_index_sum(&[1, 1, 1, 1], |j| {
            let total: u64 = j.iter().sum();
            let mut t = pochhammer(&int(1), total) / pochhammer(&int(2), total);
            for &ji in j {
                t *= pochhammer(&int(-1), ji) * pochhammer(&int(2), ji);
                t /= pochhammer(&int(1), ji) * fact(ji);
            }
            t
        })
        .unwrap();
        assert_eq!(srivastava_daoust(&spec).unwrap(), direct);
        assert_eq!(direct, ratio(1, 5));
    }

    #[test]
    fn srivastava_daoust_pole_in_d0() {
        let spec = SrivastavaDaoustSpec::uniform_at_one(int(1), int(-2), int(1), int(-1), int(1), 2);
        assert!(matches!(
            srivastava_daoust(&spec),
            Err(HyperError::Pole { .. })
        ));
    }

    fn arb_param() -> impl Strategy<Value = Rational> {
        (1i64..12, 1i64..4).prop_map(|(n, d)| ratio(n, d))
    }

    fn arb_spec(max_axes: usize) -> impl Strategy<Value = LauricellaSpec> {
        (
            arb_param(),
            prop::collection::vec((0i64..4, arb_param(), (-5i64..6, 1i64..4)), 1..=max_axes),
        )
            .prop_map(|(a, axes)| LauricellaSpec {
                a,
                b: axes.iter().map(|(b, _, _)| int(-b)).collect(),
                c: axes.iter().map(|(_, c, _)| c.clone()).collect(),
                x: axes.iter().map(|(_, _, (n, d))| ratio(*n, *d)).collect(),
            })
    }

    proptest! {
        #[test]
        fn single_axis_reduces_to_gauss_sum(spec in arb_spec(1)) {
            // direct term recursion of Σ (a)_j (b)_j x^j / ((c)_j j!)
            let n = (-&spec.b[0]).to_integer().to_u64().unwrap();
            let mut term = Rational::one();
            let mut sum = Rational::one();
            for j in 0..n {
                let jr = int(j as i64);
                term = term * (&spec.a + &jr) * (&spec.b[0] + &jr) * &spec.x[0]
                    / ((&spec.c[0] + &jr) * int(j as i64 + 1));
                sum += &term;
            }
            prop_assert_eq!(lauricella_fa(&spec).unwrap(), sum);
        }

        #[test]
        fn lauricella_axis_permutation(spec in arb_spec(3), rot in 0usize..3) {
            let s = spec.b.len();
            let k = rot % s;
            let mut rotated = spec.clone();
            rotated.b.rotate_left(k);
            rotated.c.rotate_left(k);
            rotated.x.rotate_left(k);
            prop_assert_eq!(lauricella_fa(&spec).unwrap(), lauricella_fa(&rotated).unwrap());
        }

        #[test]
        fn lauricella_matches_brute_force(spec in arb_spec(3)) {
            prop_assert_eq!(lauricella_fa(&spec).unwrap(), lauricella_brute(&spec));
        }

        #[test]
        fn axis_table_matches_pochhammer(b in 0i64..6, c in arb_param(), e in arb_param(), x in arb_param()) {
            let b = int(-b);
            let n = 5;
            let table = axis_table(&[&b, &c], &[&e], &x, true, n);
            for j in 0..=n {
                let direct = pochhammer(&b, j) * pochhammer(&c, j)
                    * num_traits::pow(x.clone(), j as usize)
                    / (pochhammer(&e, j) * fact(j));
                prop_assert_eq!(&table[j as usize], &direct);
            }
        }
    }
}
