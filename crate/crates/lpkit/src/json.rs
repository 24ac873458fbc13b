//! JSON shapes for arrays, realizations, contexts, generator specs, and
//! verification reports. Field elements travel as grammar strings so every
//! file round-trips exactly.

use crate::field::{parse_element, FieldDescriptor, FieldElement, FieldError};
use crate::linalg::Matrix;
use crate::params::{ConditionStatus, ParameterArray, ParamsError, ValidationReport};
use crate::qkit::{EigenvalueForm, QContext, QError, QFormSpec};
use crate::realize::SplitRealization;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Q(#[from] QError),
    #[error("matrix data has wrong shape")]
    BadShape,
}

fn render(seq: &[FieldElement]) -> Vec<String> {
    seq.iter().map(|x| x.to_string()).collect()
}

fn parse_seq(seq: &[String], desc: &FieldDescriptor) -> Result<Vec<FieldElement>, FieldError> {
    seq.iter().map(|s| parse_element(s, desc)).collect()
}

fn render_matrix(m: &Matrix) -> Vec<String> {
    let n = m.order();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(m.at(i, j).to_string());
        }
    }
    out
}

fn parse_matrix(data: &[String], desc: &FieldDescriptor) -> Result<Matrix, JsonError> {
    let n = (1..).find(|n| n * n >= data.len()).ok_or(JsonError::BadShape)?;
    if n * n != data.len() {
        return Err(JsonError::BadShape);
    }
    let elements = parse_seq(data, desc)?;
    let rows = elements.chunks(n).map(|r| r.to_vec()).collect();
    Matrix::from_rows(rows).map_err(|_| JsonError::BadShape)
}

/// `{"d":2,"field":{...},"theta":[...],"theta_star":[...],"varphi":[...],"phi":[...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrayJson {
    pub d: usize,
    pub field: FieldDescriptor,
    pub theta: Vec<String>,
    pub theta_star: Vec<String>,
    pub varphi: Vec<String>,
    pub phi: Vec<String>,
}

impl ArrayJson {
    pub fn from_array(p: &ParameterArray) -> ArrayJson {
        ArrayJson {
            d: p.d,
            field: p.descriptor(),
            theta: render(&p.theta),
            theta_star: render(&p.theta_star),
            varphi: render(&p.varphi),
            phi: render(&p.phi),
        }
    }

    pub fn to_array(&self) -> Result<ParameterArray, JsonError> {
        Ok(ParameterArray::new(
            self.d,
            parse_seq(&self.theta, &self.field)?,
            parse_seq(&self.theta_star, &self.field)?,
            parse_seq(&self.varphi, &self.field)?,
            parse_seq(&self.phi, &self.field)?,
        )?)
    }
}

/// One classification condition in a validation report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionJson {
    pub condition: String,
    pub holds: bool,
    pub evaluated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<usize>,
}

fn condition_json(name: &str, status: &ConditionStatus) -> ConditionJson {
    ConditionJson {
        condition: name.to_string(),
        holds: status.holds(),
        evaluated: !matches!(status, ConditionStatus::NotEvaluated),
        witness: match status {
            ConditionStatus::Fails { witness } => Some(*witness),
            _ => None,
        },
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReportJson {
    pub valid: bool,
    pub conditions: Vec<ConditionJson>,
}

impl ValidationReportJson {
    pub fn from_report(r: &ValidationReport) -> ValidationReportJson {
        ValidationReportJson {
            valid: r.valid(),
            conditions: vec![
                condition_json("i", &r.split_nonzero),
                condition_json("ii", &r.eigenvalues_distinct),
                condition_json("iii", &r.varphi_identity),
                condition_json("iv", &r.phi_identity),
                condition_json("v", &r.recurrence_constant),
            ],
        }
    }
}

/// Parameter array plus all realization matrices, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizationJson {
    pub array: ArrayJson,
    pub a: Vec<String>,
    pub a_star: Vec<String>,
    pub e: Vec<Vec<String>>,
    pub e_star: Vec<Vec<String>>,
}

impl RealizationJson {
    pub fn from_realization(r: &SplitRealization) -> RealizationJson {
        RealizationJson {
            array: ArrayJson::from_array(&r.p),
            a: render_matrix(&r.a),
            a_star: render_matrix(&r.a_star),
            e: r.e.iter().map(render_matrix).collect(),
            e_star: r.e_star.iter().map(render_matrix).collect(),
        }
    }

    pub fn to_realization(&self) -> Result<SplitRealization, JsonError> {
        let p = self.array.to_array()?;
        let desc = p.descriptor();
        let parse_all = |ms: &[Vec<String>]| -> Result<Vec<Matrix>, JsonError> {
            ms.iter().map(|m| parse_matrix(m, &desc)).collect()
        };
        Ok(SplitRealization {
            a: parse_matrix(&self.a, &desc)?,
            a_star: parse_matrix(&self.a_star, &desc)?,
            e: parse_all(&self.e)?,
            e_star: parse_all(&self.e_star)?,
            p,
        })
    }
}

/// `{"s":"2","d":4}` — the scalar is parsed in the array's field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContextJson {
    pub s: String,
    pub d: usize,
}

impl ContextJson {
    pub fn to_context(&self, desc: &FieldDescriptor) -> Result<QContext, JsonError> {
        Ok(QContext::new(parse_element(&self.s, desc)?, self.d)?)
    }
}

/// `{"alpha":"0","mu":"1","nu":"1","alpha*":"0","mu*":"1","nu*":"1","phi1_seed":"1"}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSpecJson {
    pub alpha: String,
    pub mu: String,
    pub nu: String,
    #[serde(rename = "alpha*")]
    pub alpha_star: String,
    #[serde(rename = "mu*")]
    pub mu_star: String,
    #[serde(rename = "nu*")]
    pub nu_star: String,
    pub phi1_seed: String,
}

impl GeneratorSpecJson {
    pub fn to_spec(&self, desc: &FieldDescriptor) -> Result<QFormSpec, JsonError> {
        let parse = |s: &String| parse_element(s, desc);
        Ok(QFormSpec {
            primal: EigenvalueForm {
                alpha: parse(&self.alpha)?,
                mu: parse(&self.mu)?,
                nu: parse(&self.nu)?,
            },
            dual: EigenvalueForm {
                alpha: parse(&self.alpha_star)?,
                mu: parse(&self.mu_star)?,
                nu: parse(&self.nu_star)?,
            },
            phi_1: parse(&self.phi1_seed)?,
        })
    }
}

/// Trace-identity block of a verification report:
/// `{"eq7":[...per-i booleans...], ..., "eq14":[...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropTraceJson {
    pub eq7: Vec<bool>,
    pub eq8: Vec<bool>,
    pub eq9: Vec<bool>,
    pub eq10: Vec<bool>,
    pub eq11: Vec<bool>,
    pub eq12: Vec<bool>,
    pub eq13: Vec<bool>,
    pub eq14: Vec<bool>,
}

impl PropTraceJson {
    pub fn from_per_kind(per_kind: &[Vec<bool>]) -> PropTraceJson {
        let get = |k: usize| per_kind.get(k).cloned().unwrap_or_default();
        PropTraceJson {
            eq7: get(0),
            eq8: get(1),
            eq9: get(2),
            eq10: get(3),
            eq11: get(4),
            eq12: get(5),
            eq13: get(6),
            eq14: get(7),
        }
    }

    pub fn all_pass(&self) -> bool {
        [
            &self.eq7, &self.eq8, &self.eq9, &self.eq10, &self.eq11, &self.eq12, &self.eq13,
            &self.eq14,
        ]
        .iter()
        .all(|v| v.iter().all(|&b| b))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoveryJson {
    pub varphi_routes_agree: bool,
    pub phi_routes_agree: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate;
    use crate::realize::build_split_realization;

    fn p2_json() -> ArrayJson {
        serde_json::from_str(
            r#"{"d":2,"field":{"kind":"rational"},
                "theta":["1","0","-1"],"theta_star":["1","0","-1"],
                "varphi":["-1","-1"],"phi":["1","1"]}"#,
        )
        .unwrap()
    }

    #[test]
    fn array_round_trip() {
        let p = p2_json().to_array().unwrap();
        assert!(validate(&p).valid());
        let back = ArrayJson::from_array(&p);
        assert_eq!(back.theta, vec!["1", "0", "-1"]);
        assert_eq!(back.varphi, vec!["-1", "-1"]);
        assert_eq!(back.to_array().unwrap(), p);
    }

    #[test]
    fn realization_round_trip() {
        let p = p2_json().to_array().unwrap();
        let r = build_split_realization(&p).unwrap();
        let j = RealizationJson::from_realization(&r);
        assert_eq!(j.a.len(), 9);
        assert_eq!(j.e.len(), 3);
        let back = j.to_realization().unwrap();
        assert_eq!(back.a, r.a);
        assert_eq!(back.e_star, r.e_star);
    }

    #[test]
    fn validation_report_shape() {
        let p = p2_json().to_array().unwrap();
        let j = ValidationReportJson::from_report(&validate(&p));
        assert!(j.valid);
        assert_eq!(j.conditions.len(), 5);
        assert_eq!(j.conditions[2].condition, "iii");
        assert!(j.conditions.iter().all(|c| c.holds && c.evaluated));
    }

    #[test]
    fn validation_report_witness_serialized() {
        let mut j = p2_json();
        j.varphi[1] = "0".to_string();
        let p = j.to_array().unwrap();
        let report = ValidationReportJson::from_report(&validate(&p));
        assert!(!report.valid);
        assert_eq!(report.conditions[0].witness, Some(2));
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"witness\":2"));
    }

    #[test]
    fn context_and_spec_parse() {
        let ctx: ContextJson = serde_json::from_str(r#"{"s":"2","d":4}"#).unwrap();
        let ctx = ctx.to_context(&FieldDescriptor::Rational).unwrap();
        assert_eq!(ctx.q().to_string(), "4");

        let spec: GeneratorSpecJson = serde_json::from_str(
            r#"{"alpha":"0","mu":"1","nu":"1","alpha*":"0","mu*":"1","nu*":"1","phi1_seed":"1"}"#,
        )
        .unwrap();
        let spec = spec.to_spec(&FieldDescriptor::Rational).unwrap();
        assert!(spec.primal.nu.is_one());
        assert!(spec.phi_1.is_one());
    }

    #[test]
    fn bad_matrix_shape_rejected() {
        let data = vec!["1".to_string(), "2".to_string(), "3".to_string()];
        assert!(matches!(
            parse_matrix(&data, &FieldDescriptor::Rational),
            Err(JsonError::BadShape)
        ));
    }
}
