//! Arbitrary-precision rationals, always reduced, denominator positive.

use num::bigint::BigInt;
pub use num::rational::BigRational as Rational;
use num::{One, Signed, Zero};

/// `p/q` as a rational; `q` must be nonzero.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_zero() -> Rational {
    Rational::zero()
}

pub fn rat_one() -> Rational {
    Rational::one()
}

/// n! as a rational, for exact division by factorials.
pub fn factorial(n: usize) -> Rational {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    Rational::from_integer(f)
}

/// Binomial coefficient C(n, k) for non-negative arguments.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Rational::new(num, den)
}

/// Generalized binomial C(a, k) = a(a-1)...(a-k+1)/k! for any integer a.
///
/// This is the form in which chi(P^n, O(k)) = C(n+k, n) stays valid for
/// negative twists.
pub fn binomial_gen(a: i64, k: u32) -> Rational {
    let mut num = Rational::one();
    for i in 0..k as i64 {
        num *= rat_int(a - i);
    }
    num / factorial(k as usize)
}

/// True when the rational is an integer.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().abs() == BigInt::one()
}

/// Render as `p` or `p/q`.
pub fn rat_to_string(r: &Rational) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/q` (arbitrary precision).
pub fn rat_from_str(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_positive_denominator() {
        let r = rat(4, -6);
        assert_eq!(r, rat(-2, 3));
        assert!(r.denom() > &BigInt::zero());
    }

    #[test]
    fn generalized_binomial_matches_euler_characteristics() {
        // chi(P^1, O(k)) = k+1 for every integer k
        for k in -5..=5i64 {
            assert_eq!(binomial_gen(1 + k, 1), rat_int(k + 1));
        }
        // chi(P^2, O(-3)) = 1, chi(P^2, O(-1)) = 0
        assert_eq!(binomial_gen(-1, 2), rat_int(1));
        assert_eq!(binomial_gen(1, 2), rat_int(0));
    }

    #[test]
    fn string_round_trip() {
        for s in ["0", "-7", "3/2", "-22/7"] {
            assert_eq!(rat_to_string(&rat_from_str(s).unwrap()), s);
        }
        assert!(rat_from_str("1/0").is_none());
    }
}
