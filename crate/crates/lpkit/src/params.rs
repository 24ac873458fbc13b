//! Parameter arrays: classification-theorem validation, the recurrence
//! scalar beta, the eight-element dihedral family of relatives, and
//! completion of an array from eigenvalue data plus one seed scalar.

use crate::field::{FieldDescriptor, FieldElement, FieldError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("sequence lengths do not match the diameter")]
    ShapeMismatch,
    #[error("diameter must be at least 1")]
    DegenerateDiameter,
    #[error("seed does not extend to a valid array: {0}")]
    SeedInvalid(String),
    #[error("recurrence ratios are inconsistent")]
    InconsistentRatios,
    #[error("parameter array fails validation")]
    InvalidArray,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The sequence `({theta_i}; {theta*_i}; {varphi_i}; {phi_i})` of diameter
/// `d` that classifies a Leonard system up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterArray {
    pub d: usize,
    pub theta: Vec<FieldElement>,
    pub theta_star: Vec<FieldElement>,
    pub varphi: Vec<FieldElement>,
    pub phi: Vec<FieldElement>,
}

impl ParameterArray {
    pub fn new(
        d: usize,
        theta: Vec<FieldElement>,
        theta_star: Vec<FieldElement>,
        varphi: Vec<FieldElement>,
        phi: Vec<FieldElement>,
    ) -> Result<ParameterArray, ParamsError> {
        if d == 0 {
            return Err(ParamsError::DegenerateDiameter);
        }
        if theta.len() != d + 1
            || theta_star.len() != d + 1
            || varphi.len() != d
            || phi.len() != d
        {
            return Err(ParamsError::ShapeMismatch);
        }
        Ok(ParameterArray {
            d,
            theta,
            theta_star,
            varphi,
            phi,
        })
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.theta[0].descriptor()
    }
}

/// Outcome of one classification condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionStatus {
    Holds,
    /// `witness` is the first failing index `i`.
    Fails { witness: usize },
    /// Skipped because an earlier condition already failed in a way that
    /// makes this one ill-defined (e.g. a vanishing denominator).
    NotEvaluated,
}

impl ConditionStatus {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionStatus::Holds)
    }
}

/// Per-condition result of validating an array against the classification
/// conditions (i)-(v).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// (i) every varphi_i and phi_i is nonzero.
    pub split_nonzero: ConditionStatus,
    /// (ii) the theta_i are mutually distinct, and likewise the theta*_i.
    pub eigenvalues_distinct: ConditionStatus,
    /// (iii) the displayed sum identity for varphi_i.
    pub varphi_identity: ConditionStatus,
    /// (iv) the displayed sum identity for phi_i.
    pub phi_identity: ConditionStatus,
    /// (v) both recurrence ratios are equal and independent of i.
    pub recurrence_constant: ConditionStatus,
}

impl ValidationReport {
    pub fn valid(&self) -> bool {
        self.split_nonzero.holds()
            && self.eigenvalues_distinct.holds()
            && self.varphi_identity.holds()
            && self.phi_identity.holds()
            && self.recurrence_constant.holds()
    }
}

fn all_distinct(seq: &[FieldElement]) -> Option<usize> {
    for i in 0..seq.len() {
        for j in (i + 1)..seq.len() {
            if seq[i] == seq[j] {
                return Some(j);
            }
        }
    }
    None
}

/// Partial sums `S_i = sum_{h=0}^{i-1} (theta_h - theta_{d-h}) / (theta_0 - theta_d)`
/// shared by conditions (iii) and (iv). Requires `theta_0 != theta_d`.
fn shifted_sums(theta: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
    let d = theta.len() - 1;
    let span = &theta[0] - &theta[d];
    let span_inv = span.inv()?;
    let desc = theta[0].descriptor();
    let mut sums = Vec::with_capacity(d);
    let mut acc = FieldElement::zero(&desc);
    for h in 0..d {
        acc = &acc + &(&(&theta[h] - &theta[d - h]) * &span_inv);
        sums.push(acc.clone());
    }
    Ok(sums)
}

pub fn validate(p: &ParameterArray) -> ValidationReport {
    let d = p.d;

    let split_nonzero = match (1..=d).find(|&i| p.varphi[i - 1].is_zero() || p.phi[i - 1].is_zero())
    {
        Some(i) => ConditionStatus::Fails { witness: i },
        None => ConditionStatus::Holds,
    };

    let eigenvalues_distinct = match all_distinct(&p.theta).or_else(|| all_distinct(&p.theta_star))
    {
        Some(j) => ConditionStatus::Fails { witness: j },
        None => ConditionStatus::Holds,
    };

    // (iii)-(v) divide by eigenvalue differences; they are only well defined
    // once (ii) holds.
    if !eigenvalues_distinct.holds() {
        return ValidationReport {
            split_nonzero,
            eigenvalues_distinct,
            varphi_identity: ConditionStatus::NotEvaluated,
            phi_identity: ConditionStatus::NotEvaluated,
            recurrence_constant: ConditionStatus::NotEvaluated,
        };
    }

    let sums = shifted_sums(&p.theta).expect("theta_0 != theta_d by (ii)");

    let varphi_identity = match (1..=d).find(|&i| {
        let expected = &(&p.phi[0] * &sums[i - 1])
            + &(&(&p.theta_star[i] - &p.theta_star[0]) * &(&p.theta[i - 1] - &p.theta[d]));
        p.varphi[i - 1] != expected
    }) {
        Some(i) => ConditionStatus::Fails { witness: i },
        None => ConditionStatus::Holds,
    };

    let phi_identity = match (1..=d).find(|&i| {
        let expected = &(&p.varphi[0] * &sums[i - 1])
            + &(&(&p.theta_star[i] - &p.theta_star[0]) * &(&p.theta[d - i + 1] - &p.theta[0]));
        p.phi[i - 1] != expected
    }) {
        Some(i) => ConditionStatus::Fails { witness: i },
        None => ConditionStatus::Holds,
    };

    let recurrence_constant = match check_recurrence(p) {
        Ok(()) => ConditionStatus::Holds,
        Err(i) => ConditionStatus::Fails { witness: i },
    };

    ValidationReport {
        split_nonzero,
        eigenvalues_distinct,
        varphi_identity,
        phi_identity,
        recurrence_constant,
    }
}

/// Checks condition (v); returns the first failing index on failure.
/// Vacuous for d <= 2.
fn check_recurrence(p: &ParameterArray) -> Result<(), usize> {
    let d = p.d;
    let mut common: Option<FieldElement> = None;
    for i in 2..=d.saturating_sub(1) {
        let primal = ratio_at(&p.theta, i);
        let dual = ratio_at(&p.theta_star, i);
        if primal != dual {
            return Err(i);
        }
        match &common {
            None => common = Some(primal),
            Some(c) if *c != primal => return Err(i),
            _ => {}
        }
    }
    Ok(())
}

fn ratio_at(seq: &[FieldElement], i: usize) -> FieldElement {
    let num = &seq[i - 2] - &seq[i + 1];
    let den = &seq[i - 1] - &seq[i];
    num.div(&den).expect("eigenvalues mutually distinct")
}

/// Result of extracting the recurrence scalar beta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Beta {
    Value(FieldElement),
    /// For d <= 2 the defining range is empty and beta is unconstrained.
    Undetermined,
}

/// The scalar beta with beta + 1 the common recurrence ratio, for d >= 3.
pub fn compute_beta(p: &ParameterArray) -> Result<Beta, ParamsError> {
    if p.d <= 2 {
        return Ok(Beta::Undetermined);
    }
    if !matches!(check_recurrence(p), Ok(())) {
        return Err(ParamsError::InconsistentRatios);
    }
    let common = ratio_at(&p.theta, 2);
    let one = FieldElement::one(&p.descriptor());
    Ok(Beta::Value(&common - &one))
}

/// Generators of the dihedral symmetry on parameter arrays, named by what
/// they do to the array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum D4Generator {
    /// Exchange the primal and dual data (the `*` symmetry).
    Dual,
    /// Reverse the dual eigenvalue sequence (the down-arrow symmetry).
    ReverseDual,
    /// Reverse the primal eigenvalue sequence (the double-down symmetry).
    ReversePrimal,
}

/// Group element in the normal form
/// `ReverseDual^a . ReversePrimal^b . Dual^c`, applied left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct D4Word {
    pub reverse_dual: bool,
    pub reverse_primal: bool,
    pub dual: bool,
}

impl D4Word {
    pub fn identity() -> D4Word {
        D4Word::default()
    }

    pub fn generator(g: D4Generator) -> D4Word {
        match g {
            D4Generator::Dual => D4Word {
                dual: true,
                ..D4Word::default()
            },
            D4Generator::ReverseDual => D4Word {
                reverse_dual: true,
                ..D4Word::default()
            },
            D4Generator::ReversePrimal => D4Word {
                reverse_primal: true,
                ..D4Word::default()
            },
        }
    }

    /// Composition in application order: `self` first, then `other`.
    /// Pushing a trailing Dual past the other word's reversals exchanges
    /// which eigenvalue sequence they act on.
    pub fn then(self, other: D4Word) -> D4Word {
        let (a2, b2) = if self.dual {
            (other.reverse_primal, other.reverse_dual)
        } else {
            (other.reverse_dual, other.reverse_primal)
        };
        D4Word {
            reverse_dual: self.reverse_dual ^ a2,
            reverse_primal: self.reverse_primal ^ b2,
            dual: self.dual ^ other.dual,
        }
    }

    pub fn from_generators(gens: &[D4Generator]) -> D4Word {
        gens.iter()
            .fold(D4Word::identity(), |w, &g| w.then(D4Word::generator(g)))
    }

    /// The normal-form generator sequence of this word.
    pub fn generators(&self) -> Vec<D4Generator> {
        let mut v = vec![];
        if self.reverse_dual {
            v.push(D4Generator::ReverseDual);
        }
        if self.reverse_primal {
            v.push(D4Generator::ReversePrimal);
        }
        if self.dual {
            v.push(D4Generator::Dual);
        }
        v
    }

    /// All eight group elements, in the order of the relatives table.
    pub fn all() -> [D4Word; 8] {
        let w = |a, b, c| D4Word {
            reverse_dual: a,
            reverse_primal: b,
            dual: c,
        };
        [
            w(false, false, false),
            w(true, false, false),
            w(false, true, false),
            w(true, true, false),
            w(false, false, true),
            w(true, false, true),
            w(false, true, true),
            w(true, true, true),
        ]
    }

    pub fn name(&self) -> &'static str {
        match (self.reverse_dual, self.reverse_primal, self.dual) {
            (false, false, false) => "1",
            (true, false, false) => "down",
            (false, true, false) => "ddown",
            (true, true, false) => "down.ddown",
            (false, false, true) => "star",
            (true, false, true) => "down.star",
            (false, true, true) => "ddown.star",
            (true, true, true) => "down.ddown.star",
        }
    }
}

fn reversed(seq: &[FieldElement]) -> Vec<FieldElement> {
    seq.iter().rev().cloned().collect()
}

fn apply_generator(p: &ParameterArray, g: D4Generator) -> ParameterArray {
    match g {
        D4Generator::Dual => ParameterArray {
            d: p.d,
            theta: p.theta_star.clone(),
            theta_star: p.theta.clone(),
            varphi: p.varphi.clone(),
            phi: reversed(&p.phi),
        },
        D4Generator::ReverseDual => ParameterArray {
            d: p.d,
            theta: p.theta.clone(),
            theta_star: reversed(&p.theta_star),
            varphi: reversed(&p.phi),
            phi: reversed(&p.varphi),
        },
        D4Generator::ReversePrimal => ParameterArray {
            d: p.d,
            theta: reversed(&p.theta),
            theta_star: p.theta_star.clone(),
            varphi: p.phi.clone(),
            phi: p.varphi.clone(),
        },
    }
}

/// Image of a parameter array under a word in the dihedral symmetry.
pub fn d4_transform(p: &ParameterArray, w: D4Word) -> ParameterArray {
    w.generators()
        .into_iter()
        .fold(p.clone(), |acc, g| apply_generator(&acc, g))
}

/// The orbit of `p` under the dihedral action, in the relatives-table order.
pub fn relatives(p: &ParameterArray) -> Vec<(D4Word, ParameterArray)> {
    D4Word::all()
        .into_iter()
        .map(|w| (w, d4_transform(p, w)))
        .collect()
}

/// Build the unique array with the given eigenvalue data whose second split
/// sequence starts at `phi_1`: the varphi_i come from condition (iii), the
/// phi_i from condition (iv), and the result is returned only if it is fully
/// valid.
pub fn complete_from_seed(
    d: usize,
    theta: &[FieldElement],
    theta_star: &[FieldElement],
    phi_1: &FieldElement,
) -> Result<ParameterArray, ParamsError> {
    if d == 0 {
        return Err(ParamsError::DegenerateDiameter);
    }
    if theta.len() != d + 1 || theta_star.len() != d + 1 {
        return Err(ParamsError::ShapeMismatch);
    }
    if let Some(j) = all_distinct(theta).or_else(|| all_distinct(theta_star)) {
        return Err(ParamsError::SeedInvalid(format!(
            "repeated eigenvalue at index {j}"
        )));
    }
    if phi_1.is_zero() {
        return Err(ParamsError::SeedInvalid("phi_1 is zero".into()));
    }
    let sums = shifted_sums(theta).expect("theta_0 != theta_d checked above");

    let varphi: Vec<FieldElement> = (1..=d)
        .map(|i| {
            &(phi_1 * &sums[i - 1])
                + &(&(&theta_star[i] - &theta_star[0]) * &(&theta[i - 1] - &theta[d]))
        })
        .collect();
    if let Some(i) = (1..=d).find(|&i| varphi[i - 1].is_zero()) {
        return Err(ParamsError::SeedInvalid(format!("varphi_{i} vanishes")));
    }
    let phi: Vec<FieldElement> = (1..=d)
        .map(|i| {
            &(&varphi[0] * &sums[i - 1])
                + &(&(&theta_star[i] - &theta_star[0]) * &(&theta[d - i + 1] - &theta[0]))
        })
        .collect();
    if let Some(i) = (1..=d).find(|&i| phi[i - 1].is_zero()) {
        return Err(ParamsError::SeedInvalid(format!("phi_{i} vanishes")));
    }

    let p = ParameterArray::new(d, theta.to_vec(), theta_star.to_vec(), varphi, phi)?;
    let report = validate(&p);
    if !report.valid() {
        return Err(ParamsError::SeedInvalid(
            "completed array fails validation".into(),
        ));
    }
    Ok(p)
}
