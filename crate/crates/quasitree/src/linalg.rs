//! Exact integer matrices and polynomials.
//!
//! Determinants use fraction-free (Bareiss) elimination, which stays in the
//! integers at every step; the same elimination runs over `Z[t]` for
//! characteristic polynomials. No floating point anywhere.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::chord::FramedChordDiagram;
use crate::ribbon::Bouquet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square: row {0} has length {1}, expected {2}")]
    NotSquare(usize, usize, usize),
    #[error("index {0} out of range for dimension {1}")]
    IndexOutOfRange(usize, usize),
    #[error("minor size {0} out of range 0..={1}")]
    MinorSizeOutOfRange(usize, usize),
}

/// Refusal of the determinant count outside its hypothesis: the bouquet must
/// be orientable or contain exactly one non-orientable loop. Applying the
/// determinant to other bouquets silently yields wrong counts.
#[derive(Debug, Error, PartialEq, Eq)]
#[error(
    "determinant count requires an orientable bouquet or a bouquet with exactly one \
     non-orientable loop; this bouquet has {non_orientable_loops} non-orientable loops"
)]
pub struct MqtIneligible {
    pub non_orientable_loops: usize,
}

/// Entries a fraction-free elimination can run over.
trait DomainEntry: Clone {
    fn zero_value() -> Self;
    fn one_value() -> Self;
    fn is_zero_value(&self) -> bool;
    fn mul_by(&self, other: &Self) -> Self;
    fn sub_by(&self, other: &Self) -> Self;
    /// Division known to be exact in the domain.
    fn exact_div_by(&self, other: &Self) -> Self;
    fn negated(self) -> Self;
}

impl DomainEntry for BigInt {
    fn zero_value() -> Self {
        BigInt::zero()
    }
    fn one_value() -> Self {
        BigInt::one()
    }
    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_by(&self, other: &Self) -> Self {
        self * other
    }
    fn sub_by(&self, other: &Self) -> Self {
        self - other
    }
    fn exact_div_by(&self, other: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % other)), "inexact division in elimination");
        self / other
    }
    fn negated(self) -> Self {
        -self
    }
}

fn bareiss_det<T: DomainEntry>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one_value();
    }
    let mut negate = false;
    let mut prev = T::one_value();
    for k in 0..n - 1 {
        if m[k][k].is_zero_value() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero_value()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return T::zero_value(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul_by(&m[k][k]).sub_by(&m[i][k].mul_by(&m[k][j]));
                m[i][j] = num.exact_div_by(&prev);
            }
            m[i][k] = T::zero_value();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.negated()
    } else {
        det
    }
}

/// Square matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(LinalgError::NotSquare(i, row.len(), n));
            }
        }
        Ok(IntMatrix { n, rows })
    }

    pub fn from_i64(rows: Vec<Vec<i64>>) -> Result<Self, LinalgError> {
        IntMatrix::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        IntMatrix { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.n != other.n {
            return Err(LinalgError::NotSquare(0, other.n, self.n));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(IntMatrix { n: self.n, rows })
    }

    pub fn plus_identity(&self) -> IntMatrix {
        self.add(&IntMatrix::identity(self.n)).unwrap()
    }

    /// Rows and columns reordered by `perm` (entry `i` of the result reads
    /// from `perm[i]` of the original).
    pub fn permuted(&self, perm: &[usize]) -> Result<IntMatrix, LinalgError> {
        if perm.len() != self.n {
            return Err(LinalgError::NotSquare(0, perm.len(), self.n));
        }
        for &p in perm {
            if p >= self.n {
                return Err(LinalgError::IndexOutOfRange(p, self.n));
            }
        }
        let rows = perm
            .iter()
            .map(|&i| perm.iter().map(|&j| self.rows[i][j].clone()).collect())
            .collect();
        Ok(IntMatrix { n: self.n, rows })
    }

    /// Exact determinant; the empty matrix has determinant 1.
    pub fn det(&self) -> BigInt {
        bareiss_det(self.rows.clone())
    }

    /// Principal submatrix on the given index set.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Result<IntMatrix, LinalgError> {
        for &i in indices {
            if i >= self.n {
                return Err(LinalgError::IndexOutOfRange(i, self.n));
            }
        }
        let rows = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.rows[i][j].clone()).collect())
            .collect();
        Ok(IntMatrix {
            n: indices.len(),
            rows,
        })
    }

    /// `det(M[X])`; `det(M[∅]) = 1`.
    pub fn principal_minor(&self, indices: &[usize]) -> Result<BigInt, LinalgError> {
        Ok(self.principal_submatrix(indices)?.det())
    }

    /// Principal minor on the index set encoded by a bitmask.
    pub fn principal_minor_mask(&self, mask: u64) -> BigInt {
        let indices: Vec<usize> = (0..self.n).filter(|&i| mask >> i & 1 == 1).collect();
        self.principal_submatrix(&indices).unwrap().det()
    }

    /// `E_k`: sum of all principal minors of size `k`; `E_0 = 1`.
    pub fn sum_principal_minors(&self, k: usize) -> Result<BigInt, LinalgError> {
        if k > self.n {
            return Err(LinalgError::MinorSizeOutOfRange(k, self.n));
        }
        let mut sum = BigInt::zero();
        let mut indices: Vec<usize> = (0..k).collect();
        loop {
            sum += self.principal_submatrix(&indices)?.det();
            // next k-combination in lexicographic order
            let mut i = k;
            loop {
                if i == 0 {
                    return Ok(sum);
                }
                i -= 1;
                if indices[i] != i + self.n - k {
                    break;
                }
            }
            indices[i] += 1;
            for j in i + 1..k {
                indices[j] = indices[j - 1] + 1;
            }
        }
    }

    /// `det(tI - M)` by fraction-free elimination over `Z[t]`.
    pub fn char_poly(&self) -> IntPolynomial {
        let rows: Vec<Vec<IntPolynomial>> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        if i == j {
                            IntPolynomial::from_coeffs(vec![-&self.rows[i][j], BigInt::one()])
                        } else {
                            IntPolynomial::constant(-&self.rows[i][j])
                        }
                    })
                    .collect()
            })
            .collect();
        bareiss_det(rows)
    }

    /// `det(tI - M)` assembled from principal-minor sums:
    /// `E_0 t^n - E_1 t^{n-1} + ... + (-1)^n E_n`. Independent of the
    /// elimination route; the two must agree.
    pub fn char_poly_by_minors(&self) -> IntPolynomial {
        let mut coeffs = vec![BigInt::zero(); self.n + 1];
        for k in 0..=self.n {
            let ek = self.sum_principal_minors(k).unwrap();
            let sign = if k % 2 == 0 { 1 } else { -1 };
            coeffs[self.n - k] = ek * BigInt::from(sign);
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

/// The quasi-tree count of an eligible bouquet as `det(I + A(B))`.
///
/// Eligible means orientable, or exactly one non-orientable loop. Outside
/// that hypothesis the call refuses rather than returning a wrong count.
pub fn kappa_by_determinant(b: &Bouquet) -> Result<BigInt, MqtIneligible> {
    let non_orientable_loops = b
        .graph()
        .edges()
        .iter()
        .filter(|e| e.sign.is_minus())
        .count();
    if non_orientable_loops > 1 {
        return Err(MqtIneligible {
            non_orientable_loops,
        });
    }
    let a = FramedChordDiagram::from_bouquet(b).intersection_matrix();
    Ok(a.matrix().plus_identity().det())
}

/// Integer-coefficient polynomial in `t`, coefficients ascending by degree.
/// The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPolynomial::from_coeffs(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        IntPolynomial::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        IntPolynomial::from_coeffs(coeffs)
    }

    pub fn sub_poly(&self, other: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) - other.coeff(k)).collect();
        IntPolynomial::from_coeffs(coeffs)
    }

    pub fn mul_poly(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> IntPolynomial {
        IntPolynomial::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Quotient of an exact division; panics in debug builds if the division
    /// leaves a remainder.
    pub fn exact_div_poly(&self, divisor: &IntPolynomial) -> IntPolynomial {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut rem = self.coeffs.clone();
        let d = divisor.coeffs.len();
        let lead = &divisor.coeffs[d - 1];
        let mut quot = vec![BigInt::zero(); rem.len() - d + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + d - 1].clone();
            if Zero::is_zero(&top) {
                continue;
            }
            debug_assert!(Zero::is_zero(&(&top % lead)), "inexact polynomial division");
            let q = &top / lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * c;
            }
            quot[k] = q;
        }
        debug_assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        IntPolynomial::from_coeffs(quot)
    }
}

impl DomainEntry for IntPolynomial {
    fn zero_value() -> Self {
        IntPolynomial::zero()
    }
    fn one_value() -> Self {
        IntPolynomial::one()
    }
    fn is_zero_value(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn mul_by(&self, other: &Self) -> Self {
        self.mul_poly(other)
    }
    fn sub_by(&self, other: &Self) -> Self {
        self.sub_poly(other)
    }
    fn exact_div_by(&self, other: &Self) -> Self {
        self.exact_div_poly(other)
    }
    fn negated(self) -> Self {
        IntPolynomial::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPolynomial {
    /// Pretty form like `t^3 + 2*t` or `t^2 - t + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if Zero::is_zero(c) {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}*t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord::FramedChordDiagram;
    use crate::ribbon::parse_signed_rotation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn intersection(s: &str) -> IntMatrix {
        let b = parse_signed_rotation(s).unwrap();
        FramedChordDiagram::from_bouquet(&b).intersection_matrix().into_matrix()
    }

    fn random_matrix<R: Rng>(n: usize, rng: &mut R) -> IntMatrix {
        IntMatrix::from_i64(
            (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn det_basics() {
        assert_eq!(IntMatrix::new(Vec::new()).unwrap().det(), BigInt::from(1));
        assert_eq!(IntMatrix::identity(4).det(), BigInt::from(1));
        assert_eq!(
            IntMatrix::from_i64(vec![vec![2, 1], vec![7, 4]]).unwrap().det(),
            BigInt::from(1)
        );
        // zero pivot forces a row swap
        assert_eq!(
            IntMatrix::from_i64(vec![vec![0, 1], vec![1, 0]]).unwrap().det(),
            BigInt::from(-1)
        );
    }

    #[test]
    fn non_square_rejected() {
        assert_eq!(
            IntMatrix::from_i64(vec![vec![1, 2], vec![3]]).unwrap_err(),
            LinalgError::NotSquare(1, 1, 2)
        );
    }

    #[test]
    fn counterexample_determinant_is_fourteen() {
        let a = intersection("-1,-2,3,1,2,4,3,4");
        assert_eq!(a.plus_identity().det(), BigInt::from(14));
    }

    #[test]
    fn fan_five_determinant_matches_brute_force() {
        let b = parse_signed_rotation("1,2,1,3,2,4,3,5,4,5").unwrap();
        let det = intersection("1,2,1,3,2,4,3,5,4,5").plus_identity().det();
        assert_eq!(det, BigInt::from(b.quasi_tree_count()));
        assert_eq!(det, BigInt::from(8));
    }

    #[test]
    fn empty_principal_minor_is_one() {
        let a = intersection("-1,-2,3,1,2,4,3,4");
        assert_eq!(a.principal_minor(&[]).unwrap(), BigInt::from(1));
        assert_eq!(
            a.principal_minor(&[9]).unwrap_err(),
            LinalgError::IndexOutOfRange(9, 4)
        );
    }

    #[test]
    fn principal_minors_detect_quasi_trees() {
        let b = parse_signed_rotation("-1,2,1,3,2,3").unwrap();
        let a = FramedChordDiagram::from_bouquet(&b).intersection_matrix().into_matrix();
        let profile = b.graph().boundary_profile();
        for mask in 0..1u64 << b.n_edges() {
            let minor = a.principal_minor_mask(mask);
            let expected = if profile.get(mask) == 1 { 1 } else { 0 };
            assert_eq!(minor, BigInt::from(expected), "mask {mask}");
        }
    }

    #[test]
    fn minor_sums() {
        let a = intersection("1,2,1,3,2,4,3,4");
        assert_eq!(a.sum_principal_minors(0).unwrap(), BigInt::from(1));
        // zero diagonal kills E_1
        assert_eq!(a.sum_principal_minors(1).unwrap(), BigInt::from(0));
        assert_eq!(a.sum_principal_minors(5).unwrap_err(), LinalgError::MinorSizeOutOfRange(5, 4));
    }

    #[test]
    fn det_of_i_plus_m_is_sum_of_principal_minors() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 0..=6 {
            let m = random_matrix(n, &mut rng);
            let total: BigInt = (0..=n).map(|k| m.sum_principal_minors(k).unwrap()).sum();
            assert_eq!(m.plus_identity().det(), total, "n = {n}");
        }
    }

    #[test]
    fn char_poly_of_zero_matrix() {
        let m = IntMatrix::from_i64(vec![vec![0]]).unwrap();
        assert_eq!(m.char_poly(), IntPolynomial::t());
        assert_eq!(m.char_poly().to_string(), "t");
    }

    #[test]
    fn char_poly_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for n in 0..=6 {
            let m = random_matrix(n, &mut rng);
            assert_eq!(m.char_poly(), m.char_poly_by_minors(), "n = {n}");
        }
    }

    #[test]
    fn det_invariant_under_simultaneous_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..20 {
            let m = random_matrix(5, &mut rng);
            let mut perm: Vec<usize> = (0..5).collect();
            for i in (1..5).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            assert_eq!(m.permuted(&perm).unwrap().det(), m.det());
        }
    }

    #[test]
    fn kappa_by_determinant_examples() {
        let b = parse_signed_rotation("-1,2,2,1").unwrap();
        assert_eq!(kappa_by_determinant(&b).unwrap(), BigInt::from(2));
        let b = parse_signed_rotation("1,2,3,2,1,-3").unwrap();
        assert_eq!(kappa_by_determinant(&b).unwrap(), BigInt::from(4));
    }

    #[test]
    fn kappa_by_determinant_refuses_two_twists() {
        let b = parse_signed_rotation("-1,-2,3,1,2,4,3,4").unwrap();
        let err = kappa_by_determinant(&b).unwrap_err();
        assert_eq!(err.non_orientable_loops, 2);
        assert!(err.to_string().contains("exactly one non-orientable loop"));
    }

    #[test]
    fn polynomial_arithmetic_and_display() {
        let t = IntPolynomial::t();
        let p = t.mul_poly(&t).mul_poly(&t).add(&t.scale(&BigInt::from(2)));
        assert_eq!(p.to_string(), "t^3 + 2*t");
        let q = t.mul_poly(&t).sub_poly(&t).add(&IntPolynomial::one());
        assert_eq!(q.to_string(), "t^2 - t + 1");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        assert_eq!(IntPolynomial::constant(BigInt::from(-7)).to_string(), "-7");
        assert_eq!(p.eval(&BigInt::from(3)), BigInt::from(33));
        assert_eq!(p.degree(), Some(3));
        assert_eq!(IntPolynomial::zero().degree(), None);
        let prod = p.mul_poly(&q);
        assert_eq!(prod.exact_div_poly(&q), p);
    }
}
