//! Cross-module consistency checks: the dihedral action must permute the
//! trace identities among themselves, and the summation relations must be
//! reproducible by taking traces of the transition identity against a
//! realization. Each check ties two independently implemented routes
//! together.

// the convolution-style index arithmetic (i - h) reads best with explicit
// indices
#![allow(clippy::needless_range_loop)]

use lpkit::field::{parse_element, FieldDescriptor, FieldElement};
use lpkit::params::{d4_transform, D4Generator, D4Word};
use lpkit::qkit::{generate_q_form_array, EigenvalueForm, QContext, QFormSpec};
use lpkit::realize::build_split_realization;
use lpkit::traces::{char_polys, trace_moments, TraceMomentKind};

fn el(text: &str) -> FieldElement {
    parse_element(text, &FieldDescriptor::Rational).unwrap()
}

fn sample_array(d: usize) -> lpkit::params::ParameterArray {
    let ctx = QContext::new(el("2"), d).unwrap();
    let spec = QFormSpec {
        primal: EigenvalueForm {
            alpha: el("0"),
            mu: el("1"),
            nu: el("1"),
        },
        dual: EigenvalueForm {
            alpha: el("1"),
            mu: el("2"),
            nu: el("-1"),
        },
        phi_1: el("3"),
    };
    generate_q_form_array(&ctx, &spec).unwrap()
}

/// Reversing the primal eigenvalue order turns each tau-based trace moment
/// of the image into the corresponding eta-based moment of the original:
/// the dihedral action permutes the eight identities.
#[test]
fn reverse_primal_swaps_tau_and_eta_moments() {
    for d in 1..=3usize {
        let p = sample_array(d);
        let image = d4_transform(&p, D4Word::generator(D4Generator::ReversePrimal));
        let r = build_split_realization(&p).unwrap();
        let r_image = build_split_realization(&image).unwrap();
        assert_eq!(
            trace_moments(&r_image, TraceMomentKind::TauAtEStar0),
            trace_moments(&r, TraceMomentKind::EtaAtEStar0),
            "d = {d}"
        );
        assert_eq!(
            trace_moments(&r_image, TraceMomentKind::EtaAtEStarD),
            trace_moments(&r, TraceMomentKind::TauAtEStarD),
            "d = {d}"
        );
    }
}

/// The star image exchanges the primal and dual trace moments wholesale.
#[test]
fn dual_swaps_primal_and_dual_moments() {
    let p = sample_array(2);
    let image = d4_transform(&p, D4Word::generator(D4Generator::Dual));
    let r = build_split_realization(&p).unwrap();
    let r_image = build_split_realization(&image).unwrap();
    assert_eq!(
        trace_moments(&r_image, TraceMomentKind::TauAtEStar0),
        trace_moments(&r, TraceMomentKind::TauStarAtE0),
    );
    assert_eq!(
        trace_moments(&r_image, TraceMomentKind::EtaAtEStar0),
        trace_moments(&r, TraceMomentKind::EtaStarAtE0),
    );
}

/// Trace route for the first summation relation: multiplying the transition
/// identity by the dual idempotent and taking traces must reproduce the
/// relation term by term, with every trace computed from actual matrices.
#[test]
fn first_relation_follows_from_traced_transition() {
    for d in 1..=4usize {
        let ctx = QContext::new(el("2"), d).unwrap();
        let p = sample_array(d);
        let r = build_split_realization(&p).unwrap();
        let polys = char_polys(&p);

        let tau_traces = trace_moments(&r, TraceMomentKind::TauAtEStar0);
        let eta_traces = trace_moments(&r, TraceMomentKind::EtaAtEStar0);
        for i in 0..=d {
            let mut sum = FieldElement::zero(&FieldDescriptor::Rational);
            for h in 0..=i {
                let weight =
                    &ctx.trinomial(h, i - h, d - i).unwrap() * &polys.eta[i - h].eval(&p.theta[0]);
                sum = &sum + &(&weight * &tau_traces[h]);
            }
            assert_eq!(sum, eta_traces[i], "d = {d}, i = {i}");
        }
    }
}

/// Same trace route on the dual side, tying the fifth relation's weights to
/// dual-operator trace moments.
#[test]
fn dual_relation_follows_from_traced_transition() {
    for d in 1..=3usize {
        let ctx = QContext::new(el("2"), d).unwrap();
        let p = sample_array(d);
        let r = build_split_realization(&p).unwrap();
        let polys = char_polys(&p);

        let tau_traces = trace_moments(&r, TraceMomentKind::TauStarAtE0);
        let eta_traces = trace_moments(&r, TraceMomentKind::EtaStarAtE0);
        for i in 0..=d {
            let mut sum = FieldElement::zero(&FieldDescriptor::Rational);
            for h in 0..=i {
                let weight = &ctx.trinomial(h, i - h, d - i).unwrap()
                    * &polys.eta_star[i - h].eval(&p.theta_star[0]);
                sum = &sum + &(&weight * &tau_traces[h]);
            }
            assert_eq!(sum, eta_traces[i], "d = {d}, i = {i}");
        }
    }
}
