//! Trace moments of a split-basis realization: the four characteristic
//! polynomial families, the eight trace identities, and recovery of both
//! split sequences from traces along four independent routes each.

use crate::field::{FieldElement, FieldError};
use crate::linalg::{Matrix, Polynomial};
use crate::params::ParameterArray;
use crate::realize::SplitRealization;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("index {0} out of range for diameter {1}")]
    IndexOutOfRange(usize, usize),
    #[error("a trace in a recovery denominator vanishes; the realization is broken")]
    ZeroDenominator,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The four polynomial families built from the eigenvalue sequences:
/// `tau_i` has roots `theta_0..theta_{i-1}`, `eta_i` has roots
/// `theta_d..theta_{d-i+1}`, and the starred versions use the dual sequence.
#[derive(Debug, Clone)]
pub struct CharPolys {
    pub tau: Vec<Polynomial>,
    pub eta: Vec<Polynomial>,
    pub tau_star: Vec<Polynomial>,
    pub eta_star: Vec<Polynomial>,
}

fn family(roots_in_order: &[FieldElement]) -> Vec<Polynomial> {
    let desc = roots_in_order[0].descriptor();
    (0..=roots_in_order.len())
        .map(|i| Polynomial::from_roots(&roots_in_order[..i], &desc))
        .collect()
}

pub fn char_polys(p: &ParameterArray) -> CharPolys {
    let rev = |s: &[FieldElement]| s.iter().rev().cloned().collect::<Vec<_>>();
    CharPolys {
        tau: family(&p.theta),
        eta: family(&rev(&p.theta)),
        tau_star: family(&p.theta_star),
        eta_star: family(&rev(&p.theta_star)),
    }
}

/// The eight admissible trace-moment shapes. Each names the polynomial
/// family, the operand it is evaluated at, and the rank-one idempotent it is
/// multiplied by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceMomentKind {
    /// tr(tau_i(A) E*_0)
    TauAtEStar0,
    /// tr(tau_i(A) E*_d)
    TauAtEStarD,
    /// tr(eta_i(A) E*_0)
    EtaAtEStar0,
    /// tr(eta_i(A) E*_d)
    EtaAtEStarD,
    /// tr(tau*_i(A*) E_0)
    TauStarAtE0,
    /// tr(tau*_i(A*) E_d)
    TauStarAtED,
    /// tr(eta*_i(A*) E_0)
    EtaStarAtE0,
    /// tr(eta*_i(A*) E_d)
    EtaStarAtED,
}

impl TraceMomentKind {
    pub const ALL: [TraceMomentKind; 8] = [
        TraceMomentKind::TauAtEStar0,
        TraceMomentKind::TauAtEStarD,
        TraceMomentKind::EtaAtEStar0,
        TraceMomentKind::EtaAtEStarD,
        TraceMomentKind::TauStarAtE0,
        TraceMomentKind::TauStarAtED,
        TraceMomentKind::EtaStarAtE0,
        TraceMomentKind::EtaStarAtED,
    ];

    fn polys<'a>(&self, polys: &'a CharPolys) -> &'a [Polynomial] {
        match self {
            TraceMomentKind::TauAtEStar0 | TraceMomentKind::TauAtEStarD => &polys.tau,
            TraceMomentKind::EtaAtEStar0 | TraceMomentKind::EtaAtEStarD => &polys.eta,
            TraceMomentKind::TauStarAtE0 | TraceMomentKind::TauStarAtED => &polys.tau_star,
            TraceMomentKind::EtaStarAtE0 | TraceMomentKind::EtaStarAtED => &polys.eta_star,
        }
    }

    fn operand<'a>(&self, r: &'a SplitRealization) -> &'a Matrix {
        match self {
            TraceMomentKind::TauAtEStar0
            | TraceMomentKind::TauAtEStarD
            | TraceMomentKind::EtaAtEStar0
            | TraceMomentKind::EtaAtEStarD => &r.a,
            _ => &r.a_star,
        }
    }

    fn idempotent<'a>(&self, r: &'a SplitRealization) -> &'a Matrix {
        let d = r.p.d;
        match self {
            TraceMomentKind::TauAtEStar0 | TraceMomentKind::EtaAtEStar0 => &r.e_star[0],
            TraceMomentKind::TauAtEStarD | TraceMomentKind::EtaAtEStarD => &r.e_star[d],
            TraceMomentKind::TauStarAtE0 | TraceMomentKind::EtaStarAtE0 => &r.e[0],
            TraceMomentKind::TauStarAtED | TraceMomentKind::EtaStarAtED => &r.e[d],
        }
    }
}

/// One trace moment, computed from the full matrix product.
pub fn trace_moment(
    r: &SplitRealization,
    kind: TraceMomentKind,
    i: usize,
) -> Result<FieldElement, TraceError> {
    let d = r.p.d;
    if i > d {
        return Err(TraceError::IndexOutOfRange(i, d));
    }
    let polys = char_polys(&r.p);
    let poly = &kind.polys(&polys)[i];
    Ok(poly.eval_at_matrix(kind.operand(r)).mul(kind.idempotent(r)).trace())
}

/// All moments of one kind for i = 0..=d, sharing the incremental products
/// `F_{i+1} = F_i (M - root_i I)`.
pub fn trace_moments(r: &SplitRealization, kind: TraceMomentKind) -> Vec<FieldElement> {
    let d = r.p.d;
    let op = kind.operand(r);
    let idem = kind.idempotent(r);
    let roots: Vec<FieldElement> = match kind {
        TraceMomentKind::TauAtEStar0 | TraceMomentKind::TauAtEStarD => r.p.theta.clone(),
        TraceMomentKind::EtaAtEStar0 | TraceMomentKind::EtaAtEStarD => {
            r.p.theta.iter().rev().cloned().collect()
        }
        TraceMomentKind::TauStarAtE0 | TraceMomentKind::TauStarAtED => r.p.theta_star.clone(),
        TraceMomentKind::EtaStarAtE0 | TraceMomentKind::EtaStarAtED => {
            r.p.theta_star.iter().rev().cloned().collect()
        }
    };
    let mut out = Vec::with_capacity(d + 1);
    let mut power = Matrix::identity(d + 1, op.descriptor());
    for root in roots.iter().take(d) {
        out.push(power.mul(idem).trace());
        power = power.mul(&op.sub(&Matrix::scalar(d + 1, root.clone())));
    }
    out.push(power.mul(idem).trace());
    out
}

/// The closed-form right-hand side of the trace identity for `kind` at
/// index `i`, read directly off the parameter array.
pub fn trace_moment_closed_form(
    p: &ParameterArray,
    kind: TraceMomentKind,
    i: usize,
) -> Result<FieldElement, TraceError> {
    let d = p.d;
    if i > d {
        return Err(TraceError::IndexOutOfRange(i, d));
    }
    let desc = p.descriptor();
    let mut num = FieldElement::one(&desc);
    let mut den = FieldElement::one(&desc);
    for h in 1..=i {
        let (n, dd) = match kind {
            TraceMomentKind::TauAtEStar0 => (
                p.varphi[h - 1].clone(),
                &p.theta_star[0] - &p.theta_star[h],
            ),
            TraceMomentKind::TauAtEStarD => (
                p.phi[d - h].clone(),
                &p.theta_star[d] - &p.theta_star[d - h],
            ),
            TraceMomentKind::EtaAtEStar0 => (
                p.phi[h - 1].clone(),
                &p.theta_star[0] - &p.theta_star[h],
            ),
            TraceMomentKind::EtaAtEStarD => (
                p.varphi[d - h].clone(),
                &p.theta_star[d] - &p.theta_star[d - h],
            ),
            TraceMomentKind::TauStarAtE0 => {
                (p.varphi[h - 1].clone(), &p.theta[0] - &p.theta[h])
            }
            TraceMomentKind::TauStarAtED => {
                (p.phi[h - 1].clone(), &p.theta[d] - &p.theta[d - h])
            }
            TraceMomentKind::EtaStarAtE0 => {
                (p.phi[d - h].clone(), &p.theta[0] - &p.theta[h])
            }
            TraceMomentKind::EtaStarAtED => {
                (p.varphi[d - h].clone(), &p.theta[d] - &p.theta[d - h])
            }
        };
        num = &num * &n;
        den = &den * &dd;
    }
    Ok(num.div(&den)?)
}

/// Per-identity, per-index outcome of checking all eight trace identities.
/// An index passes only if both sides agree exactly and are nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracePropReport {
    /// Indexed in the order of `TraceMomentKind::ALL`; inner vectors run
    /// over i = 0..=d.
    pub per_kind: Vec<Vec<bool>>,
}

impl TracePropReport {
    pub fn all_pass(&self) -> bool {
        self.per_kind.iter().all(|v| v.iter().all(|&b| b))
    }
}

pub fn verify_trace_prop(r: &SplitRealization) -> Result<TracePropReport, TraceError> {
    let d = r.p.d;
    let mut per_kind = Vec::with_capacity(8);
    for kind in TraceMomentKind::ALL {
        let moments = trace_moments(r, kind);
        let mut per_i = Vec::with_capacity(d + 1);
        for (i, lhs) in moments.iter().enumerate() {
            let rhs = trace_moment_closed_form(&r.p, kind, i)?;
            per_i.push(*lhs == rhs && !lhs.is_zero());
        }
        per_kind.push(per_i);
    }
    Ok(TracePropReport { per_kind })
}

/// The split sequences recovered from trace ratios, by each of the four
/// routes per sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveredSequences {
    pub varphi_routes: [Vec<FieldElement>; 4],
    pub phi_routes: [Vec<FieldElement>; 4],
}

impl RecoveredSequences {
    pub fn varphi_routes_agree(&self, p: &ParameterArray) -> bool {
        self.varphi_routes.iter().all(|route| *route == p.varphi)
    }

    pub fn phi_routes_agree(&self, p: &ParameterArray) -> bool {
        self.phi_routes.iter().all(|route| *route == p.phi)
    }
}

fn ratio_route(
    scale: impl Fn(usize) -> FieldElement,
    hi: impl Fn(usize) -> usize,
    moments: &[FieldElement],
    d: usize,
) -> Result<Vec<FieldElement>, TraceError> {
    (1..=d)
        .map(|i| {
            let den = &moments[hi(i) - 1];
            if den.is_zero() {
                return Err(TraceError::ZeroDenominator);
            }
            Ok(&scale(i) * &moments[hi(i)].div(den)?)
        })
        .collect()
}

/// Recover both split sequences from trace ratios. Each sequence comes back
/// along four algebraically distinct routes; for a realization built from a
/// valid array all four must agree with the stored sequence.
pub fn recover_split_sequences(r: &SplitRealization) -> Result<RecoveredSequences, TraceError> {
    let p = &r.p;
    let d = p.d;
    let th = &p.theta;
    let ths = &p.theta_star;

    let t_tau_0 = trace_moments(r, TraceMomentKind::TauAtEStar0);
    let t_tau_d = trace_moments(r, TraceMomentKind::TauAtEStarD);
    let t_eta_0 = trace_moments(r, TraceMomentKind::EtaAtEStar0);
    let t_eta_d = trace_moments(r, TraceMomentKind::EtaAtEStarD);
    let t_taus_0 = trace_moments(r, TraceMomentKind::TauStarAtE0);
    let t_taus_d = trace_moments(r, TraceMomentKind::TauStarAtED);
    let t_etas_0 = trace_moments(r, TraceMomentKind::EtaStarAtE0);
    let t_etas_d = trace_moments(r, TraceMomentKind::EtaStarAtED);

    let varphi_routes = [
        ratio_route(|i| &ths[0] - &ths[i], |i| i, &t_tau_0, d)?,
        ratio_route(|i| &ths[d] - &ths[i - 1], |i| d - i + 1, &t_eta_d, d)?,
        ratio_route(|i| &th[0] - &th[i], |i| i, &t_taus_0, d)?,
        ratio_route(|i| &th[d] - &th[i - 1], |i| d - i + 1, &t_etas_d, d)?,
    ];
    let phi_routes = [
        ratio_route(|i| &ths[0] - &ths[i], |i| i, &t_eta_0, d)?,
        ratio_route(|i| &ths[d] - &ths[i - 1], |i| d - i + 1, &t_tau_d, d)?,
        ratio_route(|i| &th[0] - &th[d - i + 1], |i| d - i + 1, &t_etas_0, d)?,
        ratio_route(|i| &th[d] - &th[d - i], |i| i, &t_taus_d, d)?,
    ];

    Ok(RecoveredSequences {
        varphi_routes,
        phi_routes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{parse_element, FieldDescriptor};
    use crate::realize::{build_split_realization, estar_closed_form};

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn el(text: &str) -> FieldElement {
        parse_element(text, &q()).unwrap()
    }

    fn els(texts: &[&str]) -> Vec<FieldElement> {
        texts.iter().map(|t| el(t)).collect()
    }

    fn p1() -> ParameterArray {
        ParameterArray::new(1, els(&["1", "0"]), els(&["1", "0"]), els(&["1"]), els(&["2"]))
            .unwrap()
    }

    fn p2() -> ParameterArray {
        ParameterArray::new(
            2,
            els(&["1", "0", "-1"]),
            els(&["1", "0", "-1"]),
            els(&["-1", "-1"]),
            els(&["1", "1"]),
        )
        .unwrap()
    }

    #[test]
    fn char_polys_p2() {
        let polys = char_polys(&p2());
        // eta_1 = lambda + 1 (root theta_2 = -1)
        assert_eq!(polys.eta[1].coeffs, els(&["1", "1"]));
        // tau_2 = lambda^2 - lambda
        assert_eq!(polys.tau[2].coeffs, els(&["0", "-1", "1"]));
        for fam in [&polys.tau, &polys.eta, &polys.tau_star, &polys.eta_star] {
            assert_eq!(fam[0].coeffs, els(&["1"]));
            for (i, poly) in fam.iter().enumerate() {
                assert_eq!(poly.degree(), Some(i));
                assert!(poly.is_monic());
            }
        }
    }

    #[test]
    fn worked_moments_on_p2() {
        let r = build_split_realization(&p2()).unwrap();
        assert_eq!(
            trace_moment(&r, TraceMomentKind::TauAtEStar0, 1).unwrap(),
            el("-1")
        );
        assert_eq!(
            trace_moment(&r, TraceMomentKind::TauAtEStar0, 2).unwrap(),
            el("1/2")
        );
        // the d=2 product from the worked instance has trace -1
        let polys = char_polys(&p2());
        let m = polys.tau[1].eval_at_matrix(&r.a).mul(&r.e_star[0]);
        assert_eq!(m.trace(), el("-1"));
    }

    #[test]
    fn rank_one_idempotents_have_unit_trace() {
        for p in [p1(), p2()] {
            let r = build_split_realization(&p).unwrap();
            for kind in TraceMomentKind::ALL {
                assert!(trace_moment(&r, kind, 0).unwrap().is_one());
            }
        }
    }

    #[test]
    fn moments_match_closed_form_matrix_entry() {
        // Independent oracle: tr(tau_i(A) E*_0) equals the (0, i)-entry of
        // the closed-form dual idempotent at r = 0.
        let p = p2();
        let r = build_split_realization(&p).unwrap();
        let b0 = estar_closed_form(&p, 0);
        for i in 0..=p.d {
            assert_eq!(
                trace_moment(&r, TraceMomentKind::TauAtEStar0, i).unwrap(),
                *b0.at(0, i)
            );
        }
    }

    #[test]
    fn incremental_moments_match_direct() {
        let r = build_split_realization(&p2()).unwrap();
        for kind in TraceMomentKind::ALL {
            let incremental = trace_moments(&r, kind);
            for (i, v) in incremental.iter().enumerate() {
                assert_eq!(*v, trace_moment(&r, kind, i).unwrap());
            }
        }
    }

    #[test]
    fn trace_prop_holds_on_p1_p2() {
        for p in [p1(), p2()] {
            let r = build_split_realization(&p).unwrap();
            assert!(verify_trace_prop(&r).unwrap().all_pass());
        }
    }

    #[test]
    fn trace_prop_p1_worked_value() {
        let r = build_split_realization(&p1()).unwrap();
        // tr((A - I) E*_0) = varphi_1 / (theta*_0 - theta*_1) = 1
        assert_eq!(
            trace_moment(&r, TraceMomentKind::TauAtEStar0, 1).unwrap(),
            el("1")
        );
    }

    #[test]
    fn corrupted_idempotent_detected() {
        let mut r = build_split_realization(&p2()).unwrap();
        r.e_star.swap(0, 1);
        assert!(!verify_trace_prop(&r).unwrap().all_pass());
    }

    #[test]
    fn recovery_routes_agree() {
        for p in [p1(), p2()] {
            let r = build_split_realization(&p).unwrap();
            let rec = recover_split_sequences(&r).unwrap();
            assert!(rec.varphi_routes_agree(&p));
            assert!(rec.phi_routes_agree(&p));
        }
    }

    #[test]
    fn recovery_route_one_worked_example() {
        // varphi_2 = (theta*_0 - theta*_2) tr(tau_2(A)E*_0)/tr(tau_1(A)E*_0)
        //          = 2 * (1/2) / (-1) = -1
        let p = p2();
        let r = build_split_realization(&p).unwrap();
        let rec = recover_split_sequences(&r).unwrap();
        assert_eq!(rec.varphi_routes[0][1], el("-1"));
        // phi_1 via the eta route equals 1
        assert_eq!(rec.phi_routes[0][0], el("1"));
    }

    #[test]
    fn index_out_of_range() {
        let r = build_split_realization(&p1()).unwrap();
        assert!(matches!(
            trace_moment(&r, TraceMomentKind::TauAtEStar0, 5),
            Err(TraceError::IndexOutOfRange(5, 1))
        ));
    }
}
