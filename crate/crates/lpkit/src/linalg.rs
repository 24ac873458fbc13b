//! Dense exact matrices and univariate polynomials over a field.
//!
//! Storage is dense throughout; the matrices that arise here are at most a
//! few dozen rows, so exact arithmetic dominates and clarity wins over
//! sparsity.

use crate::field::{FieldDescriptor, FieldElement, FieldError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix orders do not conform")]
    OrderMismatch,
    #[error("eigenvalues are not mutually distinct")]
    RepeatedEigenvalue,
    #[error("matrix is not multiplicity-free for the given eigenvalues")]
    NotMultiplicityFree,
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Univariate polynomial, coefficients lowest degree first. The leading
/// coefficient is nonzero unless the polynomial is zero (empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub coeffs: Vec<FieldElement>,
    desc: FieldDescriptor,
}

impl Polynomial {
    pub fn new(coeffs: Vec<FieldElement>, desc: FieldDescriptor) -> Polynomial {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs, desc }
    }

    pub fn constant(c: FieldElement) -> Polynomial {
        let desc = c.descriptor();
        Polynomial::new(vec![c], desc)
    }

    pub fn one(desc: &FieldDescriptor) -> Polynomial {
        Polynomial::constant(FieldElement::one(desc))
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Monic polynomial with the given roots; the empty sequence yields the
    /// constant 1.
    pub fn from_roots(roots: &[FieldElement], desc: &FieldDescriptor) -> Polynomial {
        let mut poly = Polynomial::one(desc);
        for r in roots {
            // multiply by (lambda - r)
            let mut next = vec![FieldElement::zero(desc); poly.coeffs.len() + 1];
            for (k, c) in poly.coeffs.iter().enumerate() {
                next[k + 1] = &next[k + 1] + c;
                next[k] = &next[k] - &(c * r);
            }
            poly = Polynomial::new(next, desc.clone());
        }
        poly
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero(&self.desc);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_at_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.order();
        let mut acc = Matrix::zero(n, &self.desc);
        for c in self.coeffs.iter().rev() {
            acc = &acc.mul(m) + &Matrix::scalar(n, c.clone());
        }
        acc
    }
}

/// Square matrix over a field, rows and columns indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    order: usize,
    entries: Vec<FieldElement>,
    desc: FieldDescriptor,
}

impl Matrix {
    pub fn zero(order: usize, desc: &FieldDescriptor) -> Matrix {
        Matrix {
            order,
            entries: vec![FieldElement::zero(desc); order * order],
            desc: desc.clone(),
        }
    }

    pub fn identity(order: usize, desc: &FieldDescriptor) -> Matrix {
        Matrix::scalar(order, FieldElement::one(desc))
    }

    /// Diagonal matrix c * I.
    pub fn scalar(order: usize, c: FieldElement) -> Matrix {
        let desc = c.descriptor();
        let mut m = Matrix::zero(order, &desc);
        for i in 0..order {
            *m.at_mut(i, i) = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Matrix, LinalgError> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) || order == 0 {
            return Err(LinalgError::OrderMismatch);
        }
        let desc = rows[0][0].descriptor();
        Ok(Matrix {
            order,
            entries: rows.into_iter().flatten().collect(),
            desc,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn at(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.order + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut FieldElement {
        &mut self.entries[i * self.order + j]
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.order != other.order {
            return Err(LinalgError::OrderMismatch);
        }
        let n = self.order;
        let mut out = Matrix::zero(n, &self.desc);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    *out.at_mut(i, j) = out.at(i, j) + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.checked_mul(other).expect("conformable orders")
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.order != other.order {
            return Err(LinalgError::OrderMismatch);
        }
        let mut out = self.clone();
        for (x, y) in out.entries.iter_mut().zip(&other.entries) {
            *x = &*x + y;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.checked_add(&other.scale(&FieldElement::from_i64(&self.desc, -1)))
            .expect("conformable orders")
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        let mut out = self.clone();
        for x in out.entries.iter_mut() {
            *x = &*x * c;
        }
        out
    }

    pub fn trace(&self) -> FieldElement {
        let mut t = FieldElement::zero(&self.desc);
        for i in 0..self.order {
            t = &t + self.at(i, i);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.order).map(|i| self.at(i, j).clone()).collect()
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("conformable orders")
    }
}

/// Spectral projector of `m` onto the eigenvalue `eigenvalues[i]`, by the
/// explicit product formula
/// `E_i = prod_{j != i} (M - theta_j I) / (theta_i - theta_j)`.
///
/// The eigen-relation `M E_i = theta_i E_i` is verified before returning;
/// a failure means `m` is not multiplicity-free for the given ordering.
pub fn primitive_idempotent(
    m: &Matrix,
    eigenvalues: &[FieldElement],
    i: usize,
) -> Result<Matrix, LinalgError> {
    if i >= eigenvalues.len() {
        return Err(LinalgError::IndexOutOfRange(i));
    }
    for a in 0..eigenvalues.len() {
        for b in (a + 1)..eigenvalues.len() {
            if eigenvalues[a] == eigenvalues[b] {
                return Err(LinalgError::RepeatedEigenvalue);
            }
        }
    }
    let desc = m.descriptor().clone();
    let mut e = Matrix::identity(m.order(), &desc);
    for (j, theta_j) in eigenvalues.iter().enumerate() {
        if j == i {
            continue;
        }
        let diff = &eigenvalues[i] - theta_j;
        let factor = m.sub(&Matrix::scalar(m.order(), theta_j.clone()));
        e = e.mul(&factor).scale(&diff.inv()?);
    }
    let lhs = m.mul(&e);
    let rhs = e.scale(&eigenvalues[i]);
    if lhs != rhs {
        return Err(LinalgError::NotMultiplicityFree);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_element;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn el(text: &str) -> FieldElement {
        parse_element(text, &q()).unwrap()
    }

    fn mat(rows: &[&[&str]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| el(s)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn trace_of_identity() {
        assert_eq!(Matrix::identity(3, &q()).trace(), el("3"));
    }

    #[test]
    fn all_ones_squares_to_twice_itself() {
        let j = mat(&[&["1", "1"], &["1", "1"]]);
        assert_eq!(j.mul(&j), j.scale(&el("2")));
    }

    #[test]
    fn from_roots_expansion() {
        // roots (1, 0) -> lambda^2 - lambda
        let p = Polynomial::from_roots(&[el("1"), el("0")], &q());
        assert_eq!(p.coeffs, vec![el("0"), el("-1"), el("1")]);
        assert!(p.is_monic());
        // single root -1 -> lambda + 1
        let p = Polynomial::from_roots(&[el("-1")], &q());
        assert_eq!(p.coeffs, vec![el("1"), el("1")]);
    }

    #[test]
    fn empty_roots_is_constant_one() {
        let p = Polynomial::from_roots(&[], &q());
        assert_eq!(p.coeffs, vec![el("1")]);
        assert_eq!(p.degree(), Some(0));
    }

    #[test]
    fn roots_evaluate_to_zero() {
        let roots = vec![el("2"), el("-3"), el("1/2")];
        let p = Polynomial::from_roots(&roots, &q());
        for r in &roots {
            assert!(p.eval(r).is_zero());
        }
    }

    #[test]
    fn constant_poly_at_matrix_is_scalar() {
        let m = mat(&[&["1", "2"], &["3", "4"]]);
        let p = Polynomial::one(&q());
        assert_eq!(p.eval_at_matrix(&m), Matrix::identity(2, &q()));
    }

    #[test]
    fn idempotent_d1_explicit() {
        // A = [[1,0],[1,0]], eigenvalues (1, 0): E_0 = (A - 0 I)/(1 - 0) = A
        let a = mat(&[&["1", "0"], &["1", "0"]]);
        let eig = vec![el("1"), el("0")];
        let e0 = primitive_idempotent(&a, &eig, 0).unwrap();
        assert_eq!(e0, a);
        let e1 = primitive_idempotent(&a, &eig, 1).unwrap();
        assert_eq!(&e0 + &e1, Matrix::identity(2, &q()));
        assert_eq!(e0.mul(&e1), Matrix::zero(2, &q()));
    }

    #[test]
    fn idempotent_index_out_of_range() {
        let a = mat(&[&["1", "0"], &["1", "0"]]);
        assert!(matches!(
            primitive_idempotent(&a, &[el("1"), el("0")], 2),
            Err(LinalgError::IndexOutOfRange(2))
        ));
    }

    #[test]
    fn idempotent_repeated_eigenvalue() {
        let a = mat(&[&["1", "0"], &["1", "0"]]);
        assert!(matches!(
            primitive_idempotent(&a, &[el("1"), el("1")], 0),
            Err(LinalgError::RepeatedEigenvalue)
        ));
    }

    #[test]
    fn idempotent_detects_wrong_spectrum() {
        let a = mat(&[&["1", "0"], &["1", "0"]]);
        assert!(matches!(
            primitive_idempotent(&a, &[el("2"), el("3")], 0),
            Err(LinalgError::NotMultiplicityFree)
        ));
    }

    #[test]
    fn mul_order_mismatch() {
        let a = Matrix::identity(2, &q());
        let b = Matrix::identity(3, &q());
        assert!(matches!(a.checked_mul(&b), Err(LinalgError::OrderMismatch)));
    }
}
