//! Split-basis realization of a Leonard system from its parameter array.
//!
//! The realization lives entirely in the split basis: the primal operator is
//! lower bidiagonal with subdiagonal 1, the dual operator is upper bidiagonal
//! with superdiagonal varphi_i, and both families of primitive idempotents
//! are computed by the explicit product formula. The tridiagonal/diagonal
//! bases are never materialized; the idempotent-sandwich conditions are the
//! basis-free equivalent and are what gets checked.

use crate::field::{FieldDescriptor, FieldElement};
use crate::linalg::{primitive_idempotent, LinalgError, Matrix};
use crate::params::{validate, ParameterArray};
use crate::traces::char_polys;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("parameter array fails validation")]
    InvalidArray,
    #[error("idempotent family identities do not hold")]
    BrokenIdempotents,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Matrices representing a Leonard system in a split basis, together with
/// both families of primitive idempotents.
///
/// Fields are public so that test harnesses can build deliberately corrupted
/// instances; `build_split_realization` is the validating constructor.
#[derive(Debug, Clone)]
pub struct SplitRealization {
    pub p: ParameterArray,
    pub a: Matrix,
    pub a_star: Matrix,
    pub e: Vec<Matrix>,
    pub e_star: Vec<Matrix>,
}

impl SplitRealization {
    pub fn order(&self) -> usize {
        self.p.d + 1
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.p.descriptor()
    }
}

fn family_identities_hold(m: &Matrix, eig: &[FieldElement], family: &[Matrix]) -> bool {
    let n = m.order();
    let desc = m.descriptor();
    // sum of idempotents is the identity
    let mut sum = Matrix::zero(n, desc);
    for e in family {
        sum = &sum + e;
    }
    if sum != Matrix::identity(n, desc) {
        return false;
    }
    // orthogonality
    for (i, ei) in family.iter().enumerate() {
        for (j, ej) in family.iter().enumerate() {
            let prod = ei.mul(ej);
            let expected = if i == j {
                ei.clone()
            } else {
                Matrix::zero(n, desc)
            };
            if prod != expected {
                return false;
            }
        }
    }
    // spectral decomposition
    let mut recon = Matrix::zero(n, desc);
    for (theta, e) in eig.iter().zip(family) {
        recon = &recon + &e.scale(theta);
    }
    recon == *m
}

/// Construct the split-basis matrices and both idempotent families from a
/// valid parameter array. All idempotent identities are verified before
/// returning.
pub fn build_split_realization(p: &ParameterArray) -> Result<SplitRealization, RealizeError> {
    if !validate(p).valid() {
        return Err(RealizeError::InvalidArray);
    }
    let d = p.d;
    let desc = p.descriptor();
    let one = FieldElement::one(&desc);

    let mut a = Matrix::zero(d + 1, &desc);
    for i in 0..=d {
        *a.at_mut(i, i) = p.theta[i].clone();
        if i < d {
            *a.at_mut(i + 1, i) = one.clone();
        }
    }
    let mut a_star = Matrix::zero(d + 1, &desc);
    for i in 0..=d {
        *a_star.at_mut(i, i) = p.theta_star[i].clone();
        if i >= 1 {
            *a_star.at_mut(i - 1, i) = p.varphi[i - 1].clone();
        }
    }

    let e: Vec<Matrix> = (0..=d)
        .map(|i| primitive_idempotent(&a, &p.theta, i))
        .collect::<Result<_, _>>()?;
    let e_star: Vec<Matrix> = (0..=d)
        .map(|i| primitive_idempotent(&a_star, &p.theta_star, i))
        .collect::<Result<_, _>>()?;

    if !family_identities_hold(&a, &p.theta, &e)
        || !family_identities_hold(&a_star, &p.theta_star, &e_star)
    {
        return Err(RealizeError::BrokenIdempotents);
    }

    Ok(SplitRealization {
        p: p.clone(),
        a,
        a_star,
        e,
        e_star,
    })
}

/// Result of checking the defining conditions of a Leonard system on a
/// realization: multiplicity-freeness and the idempotent-sandwich pattern
/// `E_i A* E_j = 0` for `|i-j| > 1`, nonzero for `|i-j| = 1` (and dually).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub a_multiplicity_free: bool,
    pub a_star_multiplicity_free: bool,
    /// Pairs (i, j) where E_i A* E_j violates the support pattern.
    pub dual_sandwich_failures: Vec<(usize, usize)>,
    /// Pairs (i, j) where E*_i A E*_j violates the support pattern.
    pub primal_sandwich_failures: Vec<(usize, usize)>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.a_multiplicity_free
            && self.a_star_multiplicity_free
            && self.dual_sandwich_failures.is_empty()
            && self.primal_sandwich_failures.is_empty()
    }
}

fn multiplicity_free(m: &Matrix, eig: &[FieldElement]) -> bool {
    for i in 0..eig.len() {
        for j in (i + 1)..eig.len() {
            if eig[i] == eig[j] {
                return false;
            }
        }
    }
    // annihilated by the product of (M - theta_i I)
    let n = m.order();
    let mut prod = Matrix::identity(n, m.descriptor());
    for theta in eig {
        prod = prod.mul(&m.sub(&Matrix::scalar(n, theta.clone())));
    }
    prod.is_zero()
}

fn sandwich_failures(outer: &[Matrix], middle: &Matrix) -> Vec<(usize, usize)> {
    let mut failures = vec![];
    for (i, ei) in outer.iter().enumerate() {
        for (j, ej) in outer.iter().enumerate() {
            let block = ei.mul(middle).mul(ej);
            let gap = i.abs_diff(j);
            let bad = if gap > 1 {
                !block.is_zero()
            } else if gap == 1 {
                block.is_zero()
            } else {
                false
            };
            if bad {
                failures.push((i, j));
            }
        }
    }
    failures
}

pub fn verify_leonard_axioms(r: &SplitRealization) -> AxiomReport {
    AxiomReport {
        a_multiplicity_free: multiplicity_free(&r.a, &r.p.theta),
        a_star_multiplicity_free: multiplicity_free(&r.a_star, &r.p.theta_star),
        dual_sandwich_failures: sandwich_failures(&r.e, &r.a_star),
        primal_sandwich_failures: sandwich_failures(&r.e_star, &r.a),
    }
}

/// The closed-form matrix for the dual idempotent E*_r in the split basis:
/// (j,i)-entry
/// `varphi_1..varphi_i tau*_j(th*_r) eta*_{d-i}(th*_r)
///  / (varphi_1..varphi_j tau*_r(th*_r) eta*_{d-r}(th*_r))`.
pub fn estar_closed_form(p: &ParameterArray, r: usize) -> Matrix {
    let d = p.d;
    let desc = p.descriptor();
    let polys = char_polys(p);
    let th_r = &p.theta_star[r];

    // prefix products varphi_1 .. varphi_k, with the empty product at k = 0
    let mut prefix = Vec::with_capacity(d + 1);
    prefix.push(FieldElement::one(&desc));
    for k in 0..d {
        prefix.push(&prefix[k] * &p.varphi[k]);
    }

    let tau_at: Vec<FieldElement> = (0..=d).map(|j| polys.tau_star[j].eval(th_r)).collect();
    let eta_at: Vec<FieldElement> = (0..=d).map(|m| polys.eta_star[m].eval(th_r)).collect();

    let denom = &tau_at[r] * &eta_at[d - r];
    let denom_inv = denom.inv().expect("theta* mutually distinct");

    let mut out = Matrix::zero(d + 1, &desc);
    for j in 0..=d {
        let row_scale = prefix[j].inv().expect("varphi nonzero");
        for i in 0..=d {
            let num = &(&prefix[i] * &tau_at[j]) * &eta_at[d - i];
            *out.at_mut(j, i) = &(&num * &row_scale) * &denom_inv;
        }
    }
    out
}

/// Checks that column 0 of tau_i(A) is the i-th standard unit vector for
/// every i, which is exactly the statement that the split basis is generated
/// from u_0 by the tau polynomials.
pub fn verify_split_action(r: &SplitRealization) -> bool {
    let d = r.p.d;
    let desc = r.descriptor();
    let one = FieldElement::one(&desc);
    let mut power = Matrix::identity(d + 1, &desc);
    for i in 0..=d {
        let col = power.column(0);
        for (row, entry) in col.iter().enumerate() {
            let expected_one = row == i;
            if (expected_one && *entry != one) || (!expected_one && !entry.is_zero()) {
                return false;
            }
        }
        if i < d {
            power = power.mul(&r.a.sub(&Matrix::scalar(d + 1, r.p.theta[i].clone())));
        }
    }
    true
}
