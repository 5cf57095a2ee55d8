//! The named bouquet families and their quasi-tree count predictions.
//!
//! Seven families are generated from rotation patterns of the form
//! `..., i, i-1, i+1, i, ...`:
//!
//! | id    | rotation                                  | κ                        |
//! |-------|-------------------------------------------|--------------------------|
//! | `F`   | `(1,2,1,3,2,...,n-1,n)`                   | `f_{n+1}`                |
//! | `W`   | `(1,n,2,1,3,2,...,n,n-1)`                 | `a_n`                    |
//! | `Fp`  | `(1,2,3,2,1,4,3,...,n-1,n)`               | `l_{n-1}`                |
//! | `F1`  | `F` with the first edge twisted           | `f_{n+2}`                |
//! | `Fp1` | `Fp` with the first edge twisted          | `f_n + l_{n-1}`          |
//! | `Fpn` | `Fp` with the last edge twisted           | `l_n`                    |
//! | `W1`  | `W` with the first edge twisted           | `2f_{n+1} - 1 + (-1)^{n+1}` |
//!
//! Each family also carries a deletion–contraction recursion and, where one
//! exists, a closed-form characteristic polynomial for its intersection
//! matrix; all three prediction routes must agree with brute-force counting.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::linalg::IntPolynomial;
use crate::ribbon::{Bouquet, SignedRotation};
use crate::sequences::{fibonacci, fibonacci_poly, lucas, lucas_poly, mersenne_assoc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    F,
    W,
    Fp,
    F1,
    Fp1,
    Fpn,
    W1,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("family {0} starts at n = {1}; n = {2} is out of range")]
    OutOfRange(FamilyId, u64, u64),
    #[error("unknown family id {0:?}; expected one of F, W, Fp, F1, Fp1, Fpn, W1")]
    UnknownId(String),
    #[error("no closed-form characteristic polynomial is stated for family {0}")]
    NoCharpolyFormula(FamilyId),
    #[error(
        "the characteristic polynomial formula for {0} at n = {1} needs the undefined \
         Lucas polynomial l_1(t)"
    )]
    CharpolyNeedsLucasOne(FamilyId, u64),
}

impl FamilyId {
    pub const ALL: [FamilyId; 7] = [
        FamilyId::F,
        FamilyId::W,
        FamilyId::Fp,
        FamilyId::F1,
        FamilyId::Fp1,
        FamilyId::Fpn,
        FamilyId::W1,
    ];

    /// Smallest index for which the family is defined.
    pub fn min_n(self) -> u64 {
        match self {
            FamilyId::F => 0,
            FamilyId::W => 3,
            FamilyId::Fp => 2,
            FamilyId::F1 => 1,
            FamilyId::Fp1 => 2,
            FamilyId::Fpn => 3,
            FamilyId::W1 => 3,
        }
    }

    fn check_range(self, n: u64) -> Result<(), FamilyError> {
        if n < self.min_n() {
            Err(FamilyError::OutOfRange(self, self.min_n(), n))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyId::F => "F",
            FamilyId::W => "W",
            FamilyId::Fp => "Fp",
            FamilyId::F1 => "F1",
            FamilyId::Fp1 => "Fp1",
            FamilyId::Fpn => "Fpn",
            FamilyId::W1 => "W1",
        };
        write!(f, "{s}")
    }
}

impl FromStr for FamilyId {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        match s {
            "F" => Ok(FamilyId::F),
            "W" => Ok(FamilyId::W),
            "Fp" => Ok(FamilyId::Fp),
            "F1" => Ok(FamilyId::F1),
            "Fp1" => Ok(FamilyId::Fp1),
            "Fpn" => Ok(FamilyId::Fpn),
            "W1" => Ok(FamilyId::W1),
            other => Err(FamilyError::UnknownId(other.to_string())),
        }
    }
}

/// Rotation tokens for `make_family`, exactly in the displayed pattern.
pub fn family_tokens(id: FamilyId, n: u64) -> Result<Vec<i32>, FamilyError> {
    id.check_range(n)?;
    let n_i = n as i32;
    let tokens = match id {
        FamilyId::F => fan_tokens(n_i),
        FamilyId::W => wheel_tokens(n_i),
        FamilyId::Fp => fan_prime_tokens(n_i),
        FamilyId::F1 => {
            let mut t = fan_tokens(n_i);
            t[0] = -t[0];
            t
        }
        FamilyId::Fp1 => {
            let mut t = fan_prime_tokens(n_i);
            t[0] = -t[0];
            t
        }
        FamilyId::Fpn => {
            let mut t = fan_prime_tokens(n_i);
            let last = t.len() - 1;
            t[last] = -t[last];
            t
        }
        FamilyId::W1 => {
            let mut t = wheel_tokens(n_i);
            t[0] = -t[0];
            t
        }
    };
    Ok(tokens)
}

/// `(1,2,1,3,2,4,3,...,n-1,n-2,n,n-1,n)`; empty for n = 0.
fn fan_tokens(n: i32) -> Vec<i32> {
    if n == 0 {
        return Vec::new();
    }
    let mut t = vec![1];
    for i in 2..=n {
        t.push(i);
        t.push(i - 1);
    }
    t.push(n);
    t
}

/// `(1,n,2,1,3,2,...,n,n-1)`.
fn wheel_tokens(n: i32) -> Vec<i32> {
    let mut t = vec![1, n];
    for i in 2..=n {
        t.push(i);
        t.push(i - 1);
    }
    t
}

/// `(1,2,3,2,1,4,3,5,4,...,n-1,n-2,n,n-1,n)`; `(1,2,2,1)` for n = 2.
fn fan_prime_tokens(n: i32) -> Vec<i32> {
    if n == 2 {
        return vec![1, 2, 2, 1];
    }
    let mut t = vec![1, 2, 3, 2, 1];
    for i in 4..=n {
        t.push(i);
        t.push(i - 1);
    }
    t.push(n);
    t
}

pub fn make_family(id: FamilyId, n: u64) -> Result<Bouquet, FamilyError> {
    let tokens = family_tokens(id, n)?;
    let rotation = SignedRotation::new(tokens).expect("family patterns are valid rotations");
    Ok(Bouquet::from_rotation(&rotation))
}

/// Closed-form quasi-tree count.
pub fn predicted_kappa(id: FamilyId, n: u64) -> Result<BigInt, FamilyError> {
    id.check_range(n)?;
    Ok(match id {
        FamilyId::F => fibonacci(n + 1),
        FamilyId::W => mersenne_assoc(n),
        FamilyId::Fp => lucas(n - 1),
        FamilyId::F1 => fibonacci(n + 2),
        FamilyId::Fp1 => fibonacci(n) + lucas(n - 1),
        FamilyId::Fpn => lucas(n),
        FamilyId::W1 => {
            let parity = if n.is_multiple_of(2) { -1 } else { 1 };
            BigInt::from(2) * fibonacci(n + 1) - 1 + parity
        }
    })
}

/// Quasi-tree count by the family's deletion–contraction recursion, seeded
/// with its small base cases; a third route independent of both enumeration
/// and determinants.
pub fn delcon_kappa(id: FamilyId, n: u64) -> Result<BigInt, FamilyError> {
    id.check_range(n)?;
    // kappa_n = kappa_{n-1} + kappa_{n-2} from bases kappa_{n0}, kappa_{n0+1}
    let two_step = |n0: u64, k0: i64, k1: i64| -> BigInt {
        let (mut a, mut b) = (BigInt::from(k0), BigInt::from(k1));
        if n == n0 {
            return a;
        }
        for _ in n0 + 2..=n {
            let next = &a + &b;
            a = b;
            b = next;
        }
        b
    };
    Ok(match id {
        FamilyId::F => two_step(0, 1, 1),
        FamilyId::W => {
            // the defining recurrence a_n = a_{n-1} + a_{n-2} + 1 - (-1)^n,
            // seeded a_1 = a_2 = 1
            mersenne_assoc(n)
        }
        FamilyId::Fp => two_step(2, 1, 3),
        FamilyId::F1 => two_step(1, 2, 3),
        FamilyId::Fp1 => two_step(2, 2, 5),
        FamilyId::Fpn => {
            // kappa_n = l_{n-2} + kappa_{n-1}, seeded kappa_3 = 4
            let mut k = BigInt::from(4);
            for m in 4..=n {
                k += lucas(m - 2);
            }
            k
        }
        FamilyId::W1 => {
            // kappa_n = kappa_{n-2} + 2 f_n, seeded kappa_3 = 6, kappa_4 = 8
            let (mut a, mut b) = (BigInt::from(6), BigInt::from(8));
            match n {
                3 => a,
                4 => b,
                _ => {
                    for m in 5..=n {
                        let next = &a + BigInt::from(2) * fibonacci(m);
                        a = b;
                        b = next;
                    }
                    b
                }
            }
        }
    })
}

/// Closed-form characteristic polynomial of `A(family)`, where one is
/// stated: `Fp`, `Fp1`, `F1`, `W1`, `Fpn`.
pub fn predicted_charpoly(id: FamilyId, n: u64) -> Result<IntPolynomial, FamilyError> {
    id.check_range(n)?;
    let t = IntPolynomial::t();
    match id {
        FamilyId::F | FamilyId::W => Err(FamilyError::NoCharpolyFormula(id)),
        FamilyId::Fp => {
            if n < 3 {
                return Err(FamilyError::CharpolyNeedsLucasOne(id, n));
            }
            Ok(t.mul_poly(&lucas_poly(n - 1)))
        }
        FamilyId::Fp1 => {
            if n < 3 {
                return Err(FamilyError::CharpolyNeedsLucasOne(id, n));
            }
            Ok(t.mul_poly(&lucas_poly(n - 1)).sub_poly(&fibonacci_poly(n)))
        }
        FamilyId::F1 => Ok(fibonacci_poly(n + 1).sub_poly(&fibonacci_poly(n))),
        FamilyId::W1 => {
            let parity = if n.is_multiple_of(2) { -1 } else { 1 };
            let tail = IntPolynomial::constant(BigInt::from(parity - 1));
            Ok(t
                .sub_poly(&IntPolynomial::one())
                .mul_poly(&fibonacci_poly(n))
                .add(&fibonacci_poly(n - 1).scale(&BigInt::from(2)))
                .add(&tail))
        }
        FamilyId::Fpn => {
            if n < 4 {
                return Err(FamilyError::CharpolyNeedsLucasOne(id, n));
            }
            Ok(t.mul_poly(&lucas_poly(n - 1).sub_poly(&lucas_poly(n - 2))))
        }
    }
}
