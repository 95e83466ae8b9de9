//! Exact rational scalars.
//!
//! The ground field is ℚ. `Scalar` is an arbitrary-precision fraction kept in
//! canonical reduced form (gcd of numerator and denominator is 1, denominator
//! positive); `num_rational` maintains that invariant through every
//! arithmetic operation.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

pub type Scalar = BigRational;

/// Integer as a scalar.
pub fn rat(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Fraction `num/den`. Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_zero(s: &Scalar) -> bool {
    s.is_zero()
}

/// Dense zero vector.
pub fn zeros(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

/// Dot product of dense vectors of equal length.
pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// `v += c·w` in place.
pub fn axpy(v: &mut [Scalar], c: &Scalar, w: &[Scalar]) {
    debug_assert_eq!(v.len(), w.len());
    if c.is_zero() {
        return;
    }
    for (x, y) in v.iter_mut().zip(w) {
        if !y.is_zero() {
            *x += c * y;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let s = frac(4, -6);
        assert_eq!(s, frac(-2, 3));
        assert_eq!(s.to_string(), "-2/3");
        assert_eq!(rat(5).to_string(), "5");
    }

    #[test]
    fn dot_and_axpy() {
        let a = vec![rat(1), rat(2), rat(0)];
        let b = vec![rat(3), frac(1, 2), rat(7)];
        assert_eq!(dot(&a, &b), rat(4));
        let mut v = zeros(3);
        axpy(&mut v, &rat(2), &b);
        assert_eq!(v, vec![rat(6), rat(1), rat(14)]);
    }
}
