//! q-brackets, Pochhammer symbols, trinomial coefficients, eigenvalue closed
//! forms, terminating basic hypergeometric sums, the transition formula, and
//! the eight summation relations between the split sequences.
//!
//! The ground scalar is `s` with `q = s^2`, so every half-integer power of
//! `q` that appears in the closed forms is a plain integer power of `s` and
//! all arithmetic stays inside one exact field.

use crate::field::{FieldDescriptor, FieldElement, FieldError};
use crate::params::{compute_beta, validate, Beta, ParameterArray, ParamsError};
use crate::traces::char_polys;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("context requires q not in {{0, 1, -1}} and q^i != 1 for 1 <= i <= d")]
    InvalidContext,
    #[error("index out of range for this context")]
    IndexOutOfRange,
    #[error("eigenvalue form is degenerate (mu = nu = 0 or repeated values)")]
    DegenerateEigenvalues,
    #[error("no eigenvalue form over this field fits the sequence")]
    NoFit,
    #[error("no numerator parameter of the form q^-n; series does not terminate")]
    NonTerminating,
    #[error("a denominator Pochhammer symbol vanishes")]
    DenominatorVanishes,
    #[error("array eigenvalues do not match the generated sequence")]
    EigenvalueMismatch,
    #[error("array beta does not equal q + 1/q for this context")]
    BetaMismatch,
    #[error("parameter array fails validation")]
    InvalidArray,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Params(#[from] ParamsError),
}

/// Exact q-arithmetic context: the scalar `s` (so `q = s^2`), a diameter
/// bound, and precomputed bracket/factorial tables.
///
/// All tables are filled at construction, so a context is immutable and can
/// be shared freely between threads.
#[derive(Debug, Clone)]
pub struct QContext {
    s: FieldElement,
    q: FieldElement,
    d: usize,
    brackets: Vec<FieldElement>,
    factorials: Vec<FieldElement>,
}

impl QContext {
    /// Builds a context, rejecting q in {0, 1, -1} and any q^i = 1 for
    /// 1 <= i <= d.
    pub fn new(s: FieldElement, d: usize) -> Result<QContext, QError> {
        if s.is_zero() {
            return Err(QError::InvalidContext);
        }
        let desc = s.descriptor();
        let one = FieldElement::one(&desc);
        let q = &s * &s;
        if q == one || q == one.neg() {
            return Err(QError::InvalidContext);
        }
        let mut qpow = one.clone();
        for _ in 1..=d {
            qpow = &qpow * &q;
            if qpow == one {
                return Err(QError::InvalidContext);
            }
        }

        // brackets [n] = (s^n - s^-n)/(s - s^-1) for 0 <= n <= 2d
        let s_inv = s.inv()?;
        let denom = (&s - &s_inv).inv()?;
        let mut brackets = Vec::with_capacity(2 * d + 1);
        let mut factorials = Vec::with_capacity(2 * d + 1);
        let mut s_pos = one.clone();
        let mut s_neg = one.clone();
        let mut fact = one.clone();
        for n in 0..=2 * d {
            if n == 0 {
                brackets.push(FieldElement::zero(&desc));
            } else {
                s_pos = &s_pos * &s;
                s_neg = &s_neg * &s_inv;
                brackets.push(&(&s_pos - &s_neg) * &denom);
                fact = &fact * &brackets[n];
            }
            factorials.push(fact.clone());
        }

        Ok(QContext {
            s,
            q,
            d,
            brackets,
            factorials,
        })
    }

    pub fn s(&self) -> &FieldElement {
        &self.s
    }

    pub fn q(&self) -> &FieldElement {
        &self.q
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.s.descriptor()
    }

    /// The context with s replaced by 1/s (so q by 1/q).
    pub fn inverted(&self) -> QContext {
        QContext::new(self.s.inv().expect("s nonzero"), self.d)
            .expect("inverting s preserves the context conditions")
    }

    pub fn qpow(&self, e: i64) -> FieldElement {
        self.q.pow(e).expect("q nonzero")
    }

    pub fn spow(&self, e: i64) -> FieldElement {
        self.s.pow(e).expect("s nonzero")
    }

    /// `[n] = (s^n - s^-n)/(s - s^-1)`.
    pub fn bracket(&self, n: usize) -> FieldElement {
        if n < self.brackets.len() {
            return self.brackets[n].clone();
        }
        let s_inv = self.s.inv().expect("s nonzero");
        let denom = (&self.s - &s_inv).inv().expect("s != 1/s");
        let e = n as i64;
        &(&self.spow(e) - &self.spow(-e)) * &denom
    }

    /// `[n]! = [n][n-1]...[1]`, with `[0]! = 1`.
    pub fn factorial(&self, n: usize) -> FieldElement {
        if n < self.factorials.len() {
            return self.factorials[n].clone();
        }
        let mut acc = self.factorials.last().expect("table nonempty").clone();
        for k in self.factorials.len()..=n {
            acc = &acc * &self.bracket(k);
        }
        acc
    }

    /// `(a;q)_n = (1 - a)(1 - aq)...(1 - aq^{n-1})`.
    pub fn pochhammer(&self, a: &FieldElement, n: usize) -> FieldElement {
        let desc = self.descriptor();
        let one = FieldElement::one(&desc);
        let mut acc = one.clone();
        let mut aq = a.clone();
        for _ in 0..n {
            acc = &acc * &(&one - &aq);
            aq = &aq * &self.q;
        }
        acc
    }

    /// The trinomial coefficient `[r, s, t]`, computed through the
    /// Pochhammer-ratio form in which the half-power prefactors of the
    /// bracket factorials cancel identically.
    pub fn trinomial(&self, r: usize, s_: usize, t: usize) -> Result<FieldElement, QError> {
        if r + s_ + t > self.d {
            return Err(QError::IndexOutOfRange);
        }
        let qq = |n: usize| self.pochhammer(&self.q, n);
        let num = &(&qq(r + s_) * &qq(r + t)) * &qq(s_ + t);
        let den = &(&(&qq(r) * &qq(s_)) * &qq(t)) * &qq(r + s_ + t);
        if den.is_zero() {
            return Err(QError::DenominatorVanishes);
        }
        Ok(num.div(&den)?)
    }

    /// The same trinomial from bracket factorials directly; kept as an
    /// independent route and checked against `trinomial`.
    pub fn trinomial_from_factorials(
        &self,
        r: usize,
        s_: usize,
        t: usize,
    ) -> Result<FieldElement, QError> {
        if r + s_ + t > self.d {
            return Err(QError::IndexOutOfRange);
        }
        let num = &(&self.factorial(r + s_) * &self.factorial(r + t)) * &self.factorial(s_ + t);
        let den = &(&(&self.factorial(r) * &self.factorial(s_)) * &self.factorial(t))
            * &self.factorial(r + s_ + t);
        if den.is_zero() {
            return Err(QError::DenominatorVanishes);
        }
        Ok(&num * &den.inv()?)
    }
}

/// The closed eigenvalue form `theta_i = alpha + mu q^i + nu q^-i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenvalueForm {
    pub alpha: FieldElement,
    pub mu: FieldElement,
    pub nu: FieldElement,
}

impl EigenvalueForm {
    pub fn theta(&self, ctx: &QContext, i: usize) -> FieldElement {
        &(&self.alpha + &(&self.mu * &ctx.qpow(i as i64))) + &(&self.nu * &ctx.qpow(-(i as i64)))
    }
}

/// Generates `theta_0..theta_d` from the closed form; fails if the values
/// are not mutually distinct.
pub fn generate_eigenvalues(
    ctx: &QContext,
    f: &EigenvalueForm,
) -> Result<Vec<FieldElement>, QError> {
    let theta: Vec<FieldElement> = (0..=ctx.d).map(|i| f.theta(ctx, i)).collect();
    for i in 0..theta.len() {
        for j in (i + 1)..theta.len() {
            if theta[i] == theta[j] {
                return Err(QError::DegenerateEigenvalues);
            }
        }
    }
    Ok(theta)
}

/// Result of fitting a closed form to an eigenvalue sequence. When the
/// direct fit gives nu = 0 the roles of mu and nu are exchanged and the form
/// is stated with respect to 1/q; `q_inverted` records that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenvalueFit {
    pub form: EigenvalueForm,
    pub q_inverted: bool,
}

/// Solves alpha, mu, nu from theta_0, theta_1, theta_2 and verifies the rest
/// of the sequence.
pub fn fit_eigenvalue_form(
    ctx: &QContext,
    theta: &[FieldElement],
) -> Result<EigenvalueFit, QError> {
    if theta.len() < 3 || theta.len() != ctx.d + 1 {
        return Err(QError::NoFit);
    }
    let q = ctx.q();
    let q_inv = q.inv()?;
    let one = FieldElement::one(&ctx.descriptor());

    // With u = mu (q - 1) and v = nu (1/q - 1):
    //   u + v           = theta_1 - theta_0
    //   q u + v / q     = theta_2 - theta_1
    let d1 = &theta[1] - &theta[0];
    let d2 = &theta[2] - &theta[1];
    let spread = (q - &q_inv).inv().expect("q^2 != 1");
    let u = &(&d2 - &(&d1 * &q_inv)) * &spread;
    let v = &d1 - &u;
    let mu = u.div(&(q - &one))?;
    let nu = v.div(&(&q_inv - &one))?;
    let alpha = &(&theta[0] - &mu) - &nu;

    let form = EigenvalueForm {
        alpha,
        mu: mu.clone(),
        nu: nu.clone(),
    };
    for (i, th) in theta.iter().enumerate() {
        if form.theta(ctx, i) != *th {
            return Err(QError::NoFit);
        }
    }
    if !nu.is_zero() {
        return Ok(EigenvalueFit {
            form,
            q_inverted: false,
        });
    }
    if mu.is_zero() {
        return Err(QError::DegenerateEigenvalues);
    }
    // theta_i = alpha + mu q^i = alpha + mu (1/q)^-i: swap the roles of mu
    // and nu and read the form against the inverted context.
    Ok(EigenvalueFit {
        form: EigenvalueForm {
            alpha: form.alpha,
            mu: nu,
            nu: mu,
        },
        q_inverted: true,
    })
}

/// Checks the difference factorization
/// `theta_i - theta_j = nu q^-i (1 - q^{i-j})(1 - mu/nu q^{i+j})`.
pub fn check_difference_factorization(
    ctx: &QContext,
    f: &EigenvalueForm,
    i: usize,
    j: usize,
) -> Result<bool, QError> {
    if f.nu.is_zero() {
        return Err(QError::DegenerateEigenvalues);
    }
    let one = FieldElement::one(&ctx.descriptor());
    let lhs = &f.theta(ctx, i) - &f.theta(ctx, j);
    let ratio = f.mu.div(&f.nu)?;
    let rhs = &(&f.nu * &ctx.qpow(-(i as i64)))
        * &(&(&one - &ctx.qpow(i as i64 - j as i64))
            * &(&one - &(&ratio * &ctx.qpow((i + j) as i64))));
    Ok(lhs == rhs)
}

/// Closed forms for `tau_i(theta_j)` and `eta_i(theta_j)` from the
/// eigenvalue form; the eta branch depends on whether mu vanishes.
pub fn closed_form_tau_eta(
    ctx: &QContext,
    f: &EigenvalueForm,
    i: usize,
    j: usize,
) -> Result<(FieldElement, FieldElement), QError> {
    if f.nu.is_zero() {
        return Err(QError::DegenerateEigenvalues);
    }
    let d = ctx.d as i64;
    let ii = i as i64;
    let jj = j as i64;
    let sign = FieldElement::from_i64(&ctx.descriptor(), if i.is_multiple_of(2) { 1 } else { -1 });
    let mu_over_nu = f.mu.div(&f.nu)?;

    // tau_i(theta_j) = (-1)^i nu^i q^{-i(i-1)/2} (q^-j;q)_i (mu/nu q^j;q)_i
    let tau = &(&(&sign * &f.nu.pow(ii)?) * &ctx.qpow(-ii * (ii - 1) / 2))
        * &(&ctx.pochhammer(&ctx.qpow(-jj), i)
            * &ctx.pochhammer(&(&mu_over_nu * &ctx.qpow(jj)), i));

    let eta = if f.mu.is_zero() {
        // eta_i(theta_j) = nu^i q^{-ij} (q^{j-d};q)_i
        &(&f.nu.pow(ii)? * &ctx.qpow(-ii * jj)) * &ctx.pochhammer(&ctx.qpow(jj - d), i)
    } else {
        // eta_i(theta_j) = (-1)^i mu^i q^{id - i(i-1)/2}
        //                  (q^{j-d};q)_i (nu/mu q^{-j-d};q)_i
        let nu_over_mu = f.nu.div(&f.mu)?;
        &(&(&sign * &f.mu.pow(ii)?) * &ctx.qpow(ii * d - ii * (ii - 1) / 2))
            * &(&ctx.pochhammer(&ctx.qpow(jj - d), i)
                * &ctx.pochhammer(&(&nu_over_mu * &ctx.qpow(-jj - d)), i))
    };
    Ok((tau, eta))
}

/// Which terminating basic hypergeometric series to sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiSeriesKind {
    /// 2-phi-1: two numerator parameters, one denominator parameter.
    TwoPhiOne,
    /// 3-phi-2: three numerator parameters, two denominator parameters.
    ThreePhiTwo,
}

const TERMINATION_SEARCH_LIMIT: usize = 512;

/// Sums a terminating q-hypergeometric series
/// `sum_t prod_k (a_k;q)_t z^t / (prod_k (b_k;q)_t (q;q)_t)`.
///
/// One numerator parameter must equal `q^-n` for some n >= 0; the sum then
/// runs over 0 <= t <= n.
pub fn phi_series(
    ctx: &QContext,
    kind: PhiSeriesKind,
    numerators: &[FieldElement],
    denominators: &[FieldElement],
    z: &FieldElement,
) -> Result<FieldElement, QError> {
    let (want_num, want_den) = match kind {
        PhiSeriesKind::TwoPhiOne => (2, 1),
        PhiSeriesKind::ThreePhiTwo => (3, 2),
    };
    if numerators.len() != want_num || denominators.len() != want_den {
        return Err(QError::IndexOutOfRange);
    }
    let n = (0..=TERMINATION_SEARCH_LIMIT)
        .find(|&n| {
            let target = ctx.qpow(-(n as i64));
            numerators.contains(&target)
        })
        .ok_or(QError::NonTerminating)?;

    let desc = ctx.descriptor();
    let one = FieldElement::one(&desc);
    let mut sum = FieldElement::zero(&desc);
    // running Pochhammer products, extended one factor per term
    let mut num_poch = vec![one.clone(); numerators.len()];
    let mut den_poch = vec![one.clone(); denominators.len()];
    let mut q_poch = one.clone();
    let mut z_pow = one.clone();
    let mut qpow_t = one.clone();
    for t in 0..=n {
        if t > 0 {
            for (acc, a) in num_poch.iter_mut().zip(numerators) {
                *acc = &*acc * &(&one - &(a * &qpow_t));
            }
            for (acc, b) in den_poch.iter_mut().zip(denominators) {
                *acc = &*acc * &(&one - &(b * &qpow_t));
            }
            q_poch = &q_poch * &(&one - &(ctx.q() * &qpow_t));
            qpow_t = &qpow_t * ctx.q();
            z_pow = &z_pow * z;
        } else {
            qpow_t = one.clone();
        }
        let mut term_num = z_pow.clone();
        for acc in &num_poch {
            term_num = &term_num * acc;
        }
        let mut term_den = q_poch.clone();
        for acc in &den_poch {
            term_den = &term_den * acc;
        }
        if term_den.is_zero() {
            return Err(QError::DenominatorVanishes);
        }
        sum = &sum + &term_num.div(&term_den)?;
    }
    Ok(sum)
}

/// Certifies one instance of the q-Pfaff-Saalschutz identity:
/// the balanced terminating 3-phi-2 at z = q equals its closed product form.
pub fn certify_saalschutz(
    ctx: &QContext,
    a: &FieldElement,
    b: &FieldElement,
    c: &FieldElement,
    n: usize,
) -> Result<bool, QError> {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(QError::DenominatorVanishes);
    }
    let q_neg_n = ctx.qpow(-(n as i64));
    let fourth = &(&(a * b) * &c.inv()?) * &ctx.qpow(1 - n as i64);
    let lhs = phi_series(
        ctx,
        PhiSeriesKind::ThreePhiTwo,
        &[a.clone(), b.clone(), q_neg_n],
        &[c.clone(), fourth],
        ctx.q(),
    )?;
    let num = &ctx.pochhammer(&c.div(a)?, n) * &ctx.pochhammer(&c.div(b)?, n);
    let den = &ctx.pochhammer(c, n) * &ctx.pochhammer(&c.div(&(a * b))?, n);
    if den.is_zero() {
        return Err(QError::DenominatorVanishes);
    }
    Ok(lhs == num.div(&den)?)
}

/// Certifies one instance of the q-Chu-Vandermonde identity.
pub fn certify_vandermonde(
    ctx: &QContext,
    a: &FieldElement,
    c: &FieldElement,
    n: usize,
) -> Result<bool, QError> {
    if a.is_zero() || c.is_zero() {
        return Err(QError::DenominatorVanishes);
    }
    let q_neg_n = ctx.qpow(-(n as i64));
    let lhs = phi_series(
        ctx,
        PhiSeriesKind::TwoPhiOne,
        &[a.clone(), q_neg_n],
        std::slice::from_ref(c),
        ctx.q(),
    )?;
    let den = ctx.pochhammer(c, n);
    if den.is_zero() {
        return Err(QError::DenominatorVanishes);
    }
    let rhs = &ctx.pochhammer(&c.div(a)?, n).div(&den)? * &a.pow(n as i64)?;
    Ok(lhs == rhs)
}

/// Per-index outcome of the transition identity
/// `eta_i = sum_h [h, i-h, d-i] eta_{i-h}(theta_0) tau_h`, checked both
/// coefficient by coefficient and pointwise at every theta_j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionReport {
    pub coefficientwise: Vec<bool>,
    pub pointwise: Vec<bool>,
}

impl TransitionReport {
    pub fn all_pass(&self) -> bool {
        self.coefficientwise.iter().all(|&b| b) && self.pointwise.iter().all(|&b| b)
    }
}

pub fn verify_transition(
    ctx: &QContext,
    f: &EigenvalueForm,
    p: &ParameterArray,
) -> Result<TransitionReport, QError> {
    let d = p.d;
    if d != ctx.d {
        return Err(QError::IndexOutOfRange);
    }
    let generated = generate_eigenvalues(ctx, f)?;
    if generated != p.theta {
        return Err(QError::EigenvalueMismatch);
    }
    if !validate(p).valid() {
        return Err(QError::InvalidArray);
    }

    let desc = p.descriptor();
    let polys = char_polys(p);
    let eta_at_theta0: Vec<FieldElement> =
        (0..=d).map(|k| polys.eta[k].eval(&p.theta[0])).collect();

    let mut coefficientwise = Vec::with_capacity(d + 1);
    let mut pointwise = Vec::with_capacity(d + 1);
    for i in 0..=d {
        // RHS as a polynomial in lambda
        let mut rhs_coeffs = vec![FieldElement::zero(&desc); d + 1];
        for h in 0..=i {
            let weight = &ctx.trinomial(h, i - h, d - i)? * &eta_at_theta0[i - h];
            for (k, c) in polys.tau[h].coeffs.iter().enumerate() {
                rhs_coeffs[k] = &rhs_coeffs[k] + &(&weight * c);
            }
        }
        let rhs = crate::linalg::Polynomial::new(rhs_coeffs, desc.clone());
        coefficientwise.push(rhs == polys.eta[i]);
        pointwise.push(
            p.theta
                .iter()
                .all(|th| rhs.eval(th) == polys.eta[i].eval(th)),
        );
    }
    Ok(TransitionReport {
        coefficientwise,
        pointwise,
    })
}

/// Per-formula, per-index outcome of the eight summation relations between
/// the first and second split sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitRelationsReport {
    /// Eight formulas, each checked for i = 1..=d.
    pub per_formula: [Vec<bool>; 8],
}

impl SplitRelationsReport {
    pub fn all_pass(&self) -> bool {
        self.per_formula.iter().all(|v| v.iter().all(|&b| b))
    }

    /// Index (formula, i) of the first failing check.
    pub fn first_failure(&self) -> Option<(usize, usize)> {
        for (f, v) in self.per_formula.iter().enumerate() {
            if let Some(pos) = v.iter().position(|&b| !b) {
                return Some((f + 1, pos + 1));
            }
        }
        None
    }
}

fn prefix_products(seq: &[FieldElement], desc: &FieldDescriptor) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(seq.len() + 1);
    out.push(FieldElement::one(desc));
    for x in seq {
        out.push(out.last().expect("nonempty") * x);
    }
    out
}

fn difference_products(
    anchor: &FieldElement,
    others: impl Iterator<Item = FieldElement>,
    desc: &FieldDescriptor,
) -> Vec<FieldElement> {
    let mut out = Vec::new();
    out.push(FieldElement::one(desc));
    for x in others {
        out.push(out.last().expect("nonempty") * &(anchor - &x));
    }
    out
}

pub fn verify_split_relations(
    ctx: &QContext,
    p: &ParameterArray,
) -> Result<SplitRelationsReport, QError> {
    let d = p.d;
    if d != ctx.d || p.descriptor() != ctx.descriptor() {
        return Err(QError::BetaMismatch);
    }
    if !validate(p).valid() {
        return Err(QError::InvalidArray);
    }
    if d >= 3 {
        let expected = &ctx.qpow(1) + &ctx.qpow(-1);
        match compute_beta(p)? {
            Beta::Value(beta) if beta == expected => {}
            Beta::Undetermined => {}
            _ => return Err(QError::BetaMismatch),
        }
    }

    let desc = p.descriptor();
    let polys = char_polys(p);
    let rev = |s: &[FieldElement]| -> Vec<FieldElement> { s.iter().rev().cloned().collect() };

    // weight sequences evaluated at the fixed points
    let eta_th0: Vec<FieldElement> = (0..=d).map(|k| polys.eta[k].eval(&p.theta[0])).collect();
    let tau_thd: Vec<FieldElement> = (0..=d).map(|k| polys.tau[k].eval(&p.theta[d])).collect();
    let etas_ths0: Vec<FieldElement> = (0..=d)
        .map(|k| polys.eta_star[k].eval(&p.theta_star[0]))
        .collect();
    let taus_thsd: Vec<FieldElement> = (0..=d)
        .map(|k| polys.tau_star[k].eval(&p.theta_star[d]))
        .collect();

    // split-sequence products, forward and reversed
    let varphi_fwd = prefix_products(&p.varphi, &desc);
    let phi_fwd = prefix_products(&p.phi, &desc);
    let varphi_rev = prefix_products(&rev(&p.varphi), &desc);
    let phi_rev = prefix_products(&rev(&p.phi), &desc);

    // eigenvalue-difference denominators
    let den_star0 = difference_products(&p.theta_star[0], p.theta_star[1..].iter().cloned(), &desc);
    let den_stard = difference_products(
        &p.theta_star[d],
        p.theta_star[..d].iter().rev().cloned(),
        &desc,
    );
    let den_0 = difference_products(&p.theta[0], p.theta[1..].iter().cloned(), &desc);
    let den_d = difference_products(&p.theta[d], p.theta[..d].iter().rev().cloned(), &desc);

    // (lhs numerator products, denominators, weights, rhs numerator products)
    type RelationCase<'a> = (
        &'a [FieldElement],
        &'a [FieldElement],
        &'a [FieldElement],
        &'a [FieldElement],
    );
    let cases: [RelationCase; 8] = [
        (&phi_fwd, &den_star0, &eta_th0, &varphi_fwd),
        (&varphi_rev, &den_stard, &eta_th0, &phi_rev),
        (&varphi_fwd, &den_star0, &tau_thd, &phi_fwd),
        (&phi_rev, &den_stard, &tau_thd, &varphi_rev),
        (&phi_rev, &den_0, &etas_ths0, &varphi_fwd),
        (&varphi_rev, &den_d, &etas_ths0, &phi_fwd),
        (&varphi_fwd, &den_0, &taus_thsd, &phi_rev),
        (&phi_fwd, &den_d, &taus_thsd, &varphi_rev),
    ];

    let mut per_formula: [Vec<bool>; 8] = Default::default();
    for (slot, (lhs_num, den, weight, rhs_num)) in per_formula.iter_mut().zip(cases) {
        for i in 1..=d {
            let lhs = lhs_num[i].div(&den[i])?;
            let mut rhs = FieldElement::zero(&desc);
            for h in 0..=i {
                let term = &(&ctx.trinomial(h, i - h, d - i)? * &weight[i - h])
                    * &rhs_num[h].div(&den[h])?;
                rhs = &rhs + &term;
            }
            slot.push(lhs == rhs);
        }
    }
    Ok(SplitRelationsReport { per_formula })
}

/// Generator input for a q-structured parameter array: two closed eigenvalue
/// forms sharing one q, plus the seed for the second split sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFormSpec {
    pub primal: EigenvalueForm,
    pub dual: EigenvalueForm,
    pub phi_1: FieldElement,
}

/// Builds and validates a parameter array whose eigenvalue sequences both
/// follow the closed form for the context's q; the recurrence condition then
/// holds automatically and completion supplies the split sequences.
pub fn generate_q_form_array(ctx: &QContext, spec: &QFormSpec) -> Result<ParameterArray, QError> {
    let theta = generate_eigenvalues(ctx, &spec.primal)?;
    let theta_star = generate_eigenvalues(ctx, &spec.dual)?;
    Ok(crate::params::complete_from_seed(
        ctx.d,
        &theta,
        &theta_star,
        &spec.phi_1,
    )?)
}
