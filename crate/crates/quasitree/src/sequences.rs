//! Fibonacci and Lucas numbers, associated Mersenne numbers, and the
//! Fibonacci/Lucas polynomials, all in exact arithmetic.
//!
//! Conventions: `f_1 = f_2 = 1`; `l_1 = 1`, `l_2 = 3`; `a_1 = a_2 = 1` with
//! `a_n = a_{n-1} + a_{n-2} + 1 - (-1)^n`. Polynomials start at
//! `f_1(x) = 1`, `f_2(x) = x`; `l_{n-1}(x) = f_n(x) + f_{n-2}(x)`, so the
//! Lucas polynomial is only defined from index 2 up.

use num_bigint::BigInt;
use num_traits::One;

use crate::linalg::IntPolynomial;

/// `f_n` for `n >= 1`.
pub fn fibonacci(n: u64) -> BigInt {
    assert!(n >= 1, "Fibonacci numbers start at f_1");
    let (mut a, mut b) = (BigInt::one(), BigInt::one());
    for _ in 2..n {
        let next = &a + &b;
        a = b;
        b = next;
    }
    if n == 1 {
        a
    } else {
        b
    }
}

/// `l_n` for `n >= 1`.
pub fn lucas(n: u64) -> BigInt {
    assert!(n >= 1, "Lucas numbers start at l_1");
    let (mut a, mut b) = (BigInt::one(), BigInt::from(3));
    for _ in 2..n {
        let next = &a + &b;
        a = b;
        b = next;
    }
    if n == 1 {
        a
    } else {
        b
    }
}

/// Associated Mersenne number `a_n` for `n >= 1`.
pub fn mersenne_assoc(n: u64) -> BigInt {
    assert!(n >= 1, "associated Mersenne numbers start at a_1");
    let (mut a, mut b) = (BigInt::one(), BigInt::one());
    for k in 3..=n {
        let bump = 1 - if k % 2 == 0 { 1 } else { -1 };
        let next = &a + &b + BigInt::from(bump);
        a = b;
        b = next;
    }
    if n == 1 {
        a
    } else {
        b
    }
}

/// Fibonacci polynomial `f_n(x)` for `n >= 1`.
pub fn fibonacci_poly(n: u64) -> IntPolynomial {
    assert!(n >= 1, "Fibonacci polynomials start at f_1(x)");
    let x = IntPolynomial::t();
    let (mut a, mut b) = (IntPolynomial::one(), x.clone());
    for _ in 2..n {
        let next = x.mul_poly(&b).add(&a);
        a = b;
        b = next;
    }
    if n == 1 {
        a
    } else {
        b
    }
}

/// Lucas polynomial `l_n(x) = f_{n+1}(x) + f_{n-1}(x)` for `n >= 2`; the
/// defining recurrence never produces `l_1(x)`.
pub fn lucas_poly(n: u64) -> IntPolynomial {
    assert!(n >= 2, "Lucas polynomials start at l_2(x)");
    fibonacci_poly(n + 1).add(&fibonacci_poly(n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn small_values() {
        let f: Vec<i64> = (1..=10).map(|n| i64::try_from(fibonacci(n)).unwrap()).collect();
        assert_eq!(f, [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]);
        let l: Vec<i64> = (1..=8).map(|n| i64::try_from(lucas(n)).unwrap()).collect();
        assert_eq!(l, [1, 3, 4, 7, 11, 18, 29, 47]);
        let a: Vec<i64> = (1..=8).map(|n| i64::try_from(mersenne_assoc(n)).unwrap()).collect();
        assert_eq!(a, [1, 1, 4, 5, 11, 16, 29, 45]);
    }

    #[test]
    fn fibonacci_lucas_identity() {
        for n in 3..=64u64 {
            assert_eq!(fibonacci(n) + fibonacci(n - 2), lucas(n - 1), "n = {n}");
        }
    }

    #[test]
    fn mersenne_lucas_identity() {
        for n in 1..=64u64 {
            let parity = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(mersenne_assoc(n), lucas(n) - 1 - BigInt::from(parity), "n = {n}");
        }
    }

    #[test]
    fn polynomial_goldens() {
        assert_eq!(fibonacci_poly(2).to_string(), "t");
        assert_eq!(lucas_poly(2).to_string(), "t^2 + 2");
        assert_eq!(lucas_poly(3).to_string(), "t^3 + 3*t");
        assert_eq!(lucas_poly(4).to_string(), "t^4 + 4*t^2 + 2");
        assert_eq!(lucas_poly(5).to_string(), "t^5 + 5*t^3 + 5*t");
    }

    #[test]
    fn lucas_poly_is_fibonacci_sum() {
        for n in 3..=20u64 {
            assert_eq!(lucas_poly(n - 1), fibonacci_poly(n).add(&fibonacci_poly(n - 2)));
        }
    }

    #[test]
    fn polynomials_evaluate_to_numbers_at_one() {
        // f_n(1) = f_n and l_n(1) = l_n
        let one = BigInt::from(1);
        for n in 1..=15u64 {
            assert_eq!(fibonacci_poly(n).eval(&one), fibonacci(n));
        }
        for n in 2..=15u64 {
            assert_eq!(lucas_poly(n).eval(&one), lucas(n));
        }
    }

    #[test]
    #[should_panic(expected = "Lucas polynomials start at l_2")]
    fn lucas_poly_one_is_undefined() {
        lucas_poly(1);
    }
}
