//! Floating-point helpers shared by the spectral and report code.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Pairwise summation; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// `log2(x)` for arbitrarily large integers, accurate to double precision.
pub fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return libm::log2(x.to_u64().unwrap() as f64);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    libm::log2(top as f64) + shift as f64
}

pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

pub fn pow(x: f64, e: f64) -> f64 {
    libm::pow(x, e)
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub fn exp2(x: f64) -> f64 {
    libm::exp2(x)
}

pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// `2^e` as an exact integer factor for building large exact products.
pub fn biguint_pow(base: u64, e: u32) -> BigUint {
    num_traits::Pow::pow(BigUint::from(base), e)
}
