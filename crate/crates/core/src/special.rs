//! Jacobi polynomials by their finite sum, plus exact combinatorics.
//!
//! The finite-sum form is used instead of a Gamma-function or recurrence
//! form because the su(2) closed forms need parameters such as `α = -2j`,
//! where Gamma-based normalizations have poles but the polynomial itself
//! is perfectly finite.

use crate::error::{Error, Result};
use crate::C64;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Largest supported Jacobi degree and combinatorial argument.
pub const MAX_DEGREE: u32 = 128;

fn check_bound(n: u64) -> Result<()> {
    if n > MAX_DEGREE as u64 {
        return Err(Error::Overflow { degree: n, bound: MAX_DEGREE as u64 });
    }
    Ok(())
}

/// Exact binomial coefficient `n choose k` (zero when `k > n`).
pub fn binomial(n: u32, k: u32) -> Result<BigUint> {
    check_bound(n as u64)?;
    if k > n {
        return Ok(BigUint::default());
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    Ok(acc)
}

/// Exact `a! / b!`.
pub fn factorial_ratio(a: u32, b: u32) -> Result<BigRational> {
    check_bound(a.max(b) as u64)?;
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    let mut prod = BigUint::one();
    for i in lo + 1..=hi {
        prod *= BigUint::from(i);
    }
    let prod = BigInt::from(prod);
    Ok(if a >= b {
        BigRational::from_integer(prod)
    } else {
        BigRational::new(BigInt::one(), prod)
    })
}

/// `binomial(n, k)` rounded once to `f64`.
pub fn binomial_f64(n: u32, k: u32) -> Result<f64> {
    Ok(binomial(n, k)?.to_f64().unwrap_or(f64::INFINITY))
}

/// `a! / b!` rounded once to `f64`.
pub fn factorial_ratio_f64(a: u32, b: u32) -> Result<f64> {
    Ok(factorial_ratio(a, b)?.to_f64().unwrap_or(f64::INFINITY))
}

/// Generalized binomial `a choose k` for real `a`.
pub fn gbinom(a: f64, k: u32) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r *= (a - i as f64) / (i as f64 + 1.0);
    }
    r
}

/// Jacobi polynomial `P_n^{(α,β)}(x)`.
///
/// Evaluated as `Σ_s C(n+α, n−s) C(n+β, s) ((x−1)/2)^s ((x+1)/2)^{n−s}`
/// with generalized binomials. Every `f64` input is an exact rational, so
/// the sum is carried out in rational arithmetic and rounded once; this
/// avoids the cancellation the alternating terms suffer in floating point.
/// A negative degree yields 0, which is the convention the ⟨J₃⟩ ratios
/// rely on at `|m| = j`. Degrees above [`MAX_DEGREE`] are rejected.
pub fn jacobi_p(n: i64, alpha: f64, beta: f64, x: C64) -> Result<C64> {
    if n < 0 {
        return Ok(C64::new(0.0, 0.0));
    }
    check_bound(n as u64)?;
    let (Some(a), Some(b), Some(xr), Some(xi)) = (rat(alpha), rat(beta), rat(x.re), rat(x.im)) else {
        return Err(Error::Numerical("non-finite Jacobi argument".into()));
    };
    let n_u = n as u32;
    let nr = BigRational::from_integer(BigInt::from(n));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let one = BigRational::one();
    let xm = Cr((&xr - &one) * &half, &xi * &half);
    let xp = Cr((&xr + &one) * &half, &xi * &half);
    let ca: Vec<BigRational> = (0..=n_u).map(|k| gbinom_exact(&(&nr + &a), k)).collect();
    let cb: Vec<BigRational> = (0..=n_u).map(|k| gbinom_exact(&(&nr + &b), k)).collect();
    let mut pm = vec![Cr::one()];
    let mut pp = vec![Cr::one()];
    for k in 1..=n_u as usize {
        pm.push(pm[k - 1].mul(&xm));
        pp.push(pp[k - 1].mul(&xp));
    }
    let mut sum = Cr::zero();
    for s in 0..=n_u as usize {
        let coef = &ca[n_u as usize - s] * &cb[s];
        if coef.is_zero() {
            continue;
        }
        let t = pm[s].mul(&pp[n_u as usize - s]);
        sum = Cr(sum.0 + &t.0 * &coef, sum.1 + &t.1 * &coef);
    }
    Ok(C64::new(sum.0.to_f64().unwrap_or(f64::NAN), sum.1.to_f64().unwrap_or(f64::NAN)))
}

fn rat(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}

fn gbinom_exact(a: &BigRational, k: u32) -> BigRational {
    let mut r = BigRational::one();
    for i in 0..k {
        r = r * (a - BigRational::from_integer(BigInt::from(i))) / BigRational::from_integer(BigInt::from(i + 1));
    }
    r
}

/// Exact complex rational.
struct Cr(BigRational, BigRational);

impl Cr {
    fn zero() -> Self {
        Cr(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Cr(BigRational::one(), BigRational::zero())
    }

    fn mul(&self, o: &Cr) -> Cr {
        if self.1.is_zero() && o.1.is_zero() {
            return Cr(&self.0 * &o.0, BigRational::zero());
        }
        Cr(&self.0 * &o.0 - &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
    }
}

/// Real-argument convenience wrapper around [`jacobi_p`].
pub fn jacobi_p_real(n: i64, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    Ok(jacobi_p(n, alpha, beta, C64::new(x, 0.0))?.re)
}

/// `P_n^{(α,β)}(1) = (α+1)(α+2)…(α+n)/n!`.
pub fn jacobi_at_one(n: u32, alpha: f64) -> f64 {
    gbinom(n as f64 + alpha, n)
}
