//! Exact arithmetic over real quadratic fields.
//!
//! [`QuadExt`] is an element `(a + b*sqrt(d))/c` of a single field `Q(sqrt(d))`.
//! [`QuadSum`] is the sum of two such elements whose radicands may differ; it is
//! the value type of a two-sided `lambda_i`. Comparisons across fields go through
//! [`RadicalSum`], a rational linear combination of square roots with an exact
//! sign procedure, so no inequality in this crate depends on floating point.

mod ext;
mod radical;
mod sum;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use ext::QuadExt;
pub(crate) use radical::format_fixed;
pub use radical::RadicalSum;
pub use sum::QuadSum;

/// Arbitrary precision rational; always stored reduced with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("operands live in different quadratic fields (sqrt({0}) vs sqrt({1}))")]
    MixedRadicand(BigInt, BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand must be nonnegative, got {0}")]
    NegativeRadicand(BigInt),
    #[error("denominator must be nonzero")]
    ZeroDenominator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Field operation on two elements sharing a radicand (or with one rational operand).
pub fn qx_arith(op: ArithOp, u: &QuadExt, v: &QuadExt) -> Result<QuadExt, QuadError> {
    match op {
        ArithOp::Add => u.checked_add(v),
        ArithOp::Sub => u.checked_sub(v),
        ArithOp::Mul => u.checked_mul(v),
        ArithOp::Div => u.checked_div(v),
    }
}

/// Exact sign of `x + y`, returned as the ordering of the value against zero.
pub fn qx_sign(s: &QuadSum) -> Ordering {
    s.to_radical_sum().sign()
}

/// Greatest integer not exceeding `u`.
pub fn qx_floor(u: &QuadExt) -> BigInt {
    u.floor()
}

/// Correctly rounded (half-even) decimal rendering with `digits` places after the point.
pub fn qx_approx(s: &QuadSum, digits: usize) -> String {
    s.to_radical_sum().approx(digits)
}

/// Integer square root helpers and squarefree reduction shared by the submodules.
pub(crate) mod util {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    /// Splits `n > 0` as `k^2 * core` with `core` squarefree.
    pub fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
        debug_assert!(n.is_positive());
        if let Some(v) = n.to_u64() {
            let (k, core) = squarefree_split_u64(v);
            return (BigInt::from(k), BigInt::from(core));
        }
        let mut rest = n.clone();
        let mut k = BigInt::one();
        let mut core = BigInt::one();
        let mut p = BigInt::from(2u32);
        // Trial division up to the cube root; what remains has at most two prime factors.
        while &p * &p * &p <= rest {
            let p2 = &p * &p;
            while (&rest % &p2).is_zero() {
                rest /= &p2;
                k *= &p;
            }
            if (&rest % &p).is_zero() {
                rest /= &p;
                core *= &p;
            }
            p += 1u32;
        }
        let r = rest.sqrt();
        if &r * &r == rest {
            k *= r;
        } else {
            core *= rest;
        }
        (k, core)
    }

    fn squarefree_split_u64(n: u64) -> (u64, u64) {
        let mut rest = n;
        let mut k = 1u64;
        let mut core = 1u64;
        let mut p = 2u64;
        while (p as u128).pow(3) <= rest as u128 {
            let p2 = p * p;
            while rest % p2 == 0 {
                rest /= p2;
                k *= p;
            }
            if rest % p == 0 {
                rest /= p;
                core *= p;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        let r = isqrt_u64(rest);
        if r * r == rest {
            k *= r;
        } else {
            core *= rest;
        }
        (k, core)
    }

    fn isqrt_u64(n: u64) -> u64 {
        let mut r = (n as f64).sqrt() as u64;
        while (r as u128) * (r as u128) > n as u128 {
            r -= 1;
        }
        while ((r + 1) as u128) * ((r + 1) as u128) <= n as u128 {
            r += 1;
        }
        r
    }

    /// `floor(n * sqrt(d) / m)` for `m > 0`, `d > 1` squarefree.
    pub fn floor_scaled_sqrt(n: &BigInt, d: &BigInt, m: &BigInt) -> BigInt {
        if n.is_zero() {
            return BigInt::zero();
        }
        let s = (n * n * d).sqrt();
        if n.is_positive() {
            s.div_floor(m)
        } else {
            (-s - 1u32).div_floor(m)
        }
    }
}
