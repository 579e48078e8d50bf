//! Versioned solution documents.
//!
//! A solved pulse is written to disk as a self-describing structured
//! document (TOML by default, canonical JSON on request) holding the
//! exact inputs, the branch taken, the recovered parameters, the frame
//! change, a certificate summary, and — once a verification pass has
//! run — the propagation fidelities.  Floats round-trip bit-exactly
//! (shortest-representation encoding on both formats), so a document
//! can rebuild the laboratory field and reproduce verification numbers
//! identically.

use crate::field::{ControlField, FieldKind};
use crate::orbit::GatePair;
use crate::pmp::CanonicalParams;
use crate::solver::{Branch, TocSolution};
use crate::su2::{Mat2C, UnitaryGate, C64};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Schema generation of [`SolutionDocument`].
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DocInputs {
    /// Exact ratio γ as a reduced fraction "p/q".
    pub gamma: String,
    pub gamma_float: f64,
    pub theta_radians: f64,
    /// Exact θ/π when known (e.g. "1", "1/2").
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_over_pi: Option<String>,
    pub axis: [f64; 3],
    pub bound_d: f64,
    pub gamma1: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DocQuadruple {
    pub s: i64,
    pub m: i64,
    pub l: i64,
    pub k: i64,
    /// Odd index of the collapsed θ=π resonance form, when applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_half_pi: Option<i64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DocResult {
    pub t_min_normalized: f64,
    pub t_min_physical: f64,
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    /// Global sign of the realized pair relative to the target pair.
    pub sign: f64,
}

/// 2×2 complex matrix split into real and imaginary parts (row major).
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DocMatrix {
    pub re: [[f64; 2]; 2],
    pub im: [[f64; 2]; 2],
}

impl DocMatrix {
    pub fn from_gate(g: &UnitaryGate) -> Self {
        let m = &g.m;
        DocMatrix {
            re: [[m.a.re, m.b.re], [m.c.re, m.d.re]],
            im: [[m.a.im, m.b.im], [m.c.im, m.d.im]],
        }
    }

    pub fn gate(&self) -> UnitaryGate {
        UnitaryGate::unchecked(Mat2C::new(
            C64::new(self.re[0][0], self.im[0][0]),
            C64::new(self.re[0][1], self.im[0][1]),
            C64::new(self.re[1][0], self.im[1][0]),
            C64::new(self.re[1][1], self.im[1][1]),
        ))
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DocCertificate {
    /// Incumbent squared duration (t/π)²·(…) as the exact fraction that
    /// was defended.
    pub incumbent_t_sq: String,
    pub cases: usize,
    pub improvement_found: bool,
    pub delta_range_plus: [i64; 2],
    pub delta_range_minus: [i64; 2],
    pub epsilon_range: [i64; 2],
    pub bzero_candidates: usize,
    pub bzero_all_excluded: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DocVerification {
    pub fidelity_spin1: f64,
    pub fidelity_spin2: f64,
    pub n_steps: usize,
    pub propagator: String,
}

/// The on-disk result document.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SolutionDocument {
    pub schema_version: u32,
    pub inputs: DocInputs,
    /// "quadruple", "bzero", or "numerical".
    pub branch: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadruple: Option<DocQuadruple>,
    /// Resonance index of the drift-free branch, when taken.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bzero_k: Option<i64>,
    pub result: DocResult,
    pub y_matrix: DocMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_summary: Option<DocCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<DocVerification>,
}

impl SolutionDocument {
    pub fn from_solution(sol: &TocSolution) -> Self {
        let (branch, quadruple, bzero_k) = match &sol.branch {
            Branch::Quadruple(q) => (
                "quadruple".to_string(),
                Some(DocQuadruple {
                    s: q.s,
                    m: q.m,
                    l: q.l,
                    k: q.k,
                    l_half_pi: sol.half_pi_form().map(|(_, l_half, _)| l_half),
                }),
                None,
            ),
            Branch::BZero { k } => ("bzero".to_string(), None, Some(*k)),
            Branch::Numerical => ("numerical".to_string(), None, None),
        };
        let certificate_summary = sol.certificate.as_ref().map(|cert| DocCertificate {
            incumbent_t_sq: cert.t_inc.to_string(),
            cases: cert.cases.len(),
            improvement_found: cert.improvement().is_some(),
            delta_range_plus: [cert.delta_range_plus.0, cert.delta_range_plus.1],
            delta_range_minus: [cert.delta_range_minus.0, cert.delta_range_minus.1],
            epsilon_range: [cert.epsilon_range.0, cert.epsilon_range.1],
            bzero_candidates: cert.bzero.len(),
            bzero_all_excluded: cert.bzero.iter().all(|b| b.excluded),
        });
        SolutionDocument {
            schema_version: SCHEMA_VERSION,
            inputs: DocInputs {
                gamma: sol.gamma_rational.to_string(),
                gamma_float: sol.gamma(),
                theta_radians: sol.target.theta,
                theta_over_pi: sol.q_exact.then(|| sol.q_rational.to_string()),
                axis: sol.target.axis,
                bound_d: sol.bound_d,
                gamma1: sol.gamma1,
            },
            branch,
            quadruple,
            bzero_k,
            result: DocResult {
                t_min_normalized: sol.t_min,
                t_min_physical: sol.t_physical(),
                omega: sol.params.omega,
                a: sol.params.a,
                b: sol.params.b,
                sign: sol.sign,
            },
            y_matrix: DocMatrix::from_gate(&sol.y),
            certificate_summary,
            verification: None,
        }
    }

    /// Rebuild the canonical parameters bit-exactly from stored floats.
    pub fn canonical_params(&self) -> CanonicalParams {
        CanonicalParams {
            omega: self.result.omega,
            a: self.result.a,
            b: self.result.b,
            gamma: self.inputs.gamma_float,
        }
    }

    /// Rebuild the laboratory control field described by the document.
    pub fn control_field(&self) -> ControlField {
        ControlField {
            kind: FieldKind::Canonical {
                params: self.canonical_params(),
                frame: self.y_matrix.gate(),
                t_normalized: self.result.t_min_normalized,
            },
            gamma1: self.inputs.gamma1,
            bound_d: self.inputs.bound_d,
        }
    }

    /// The sign-resolved pair the pulse realizes: sign·(R(θ, axis), 1).
    pub fn realized_pair(&self) -> Result<GatePair> {
        let target =
            crate::solver::RotationTarget::new(self.inputs.axis, self.inputs.theta_radians)?;
        let rotation = target.gate();
        let sign = self.result.sign;
        Ok(GatePair::new(
            UnitaryGate::unchecked(rotation.m * sign),
            UnitaryGate::unchecked(Mat2C::IDENTITY * sign),
        ))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let doc: SolutionDocument =
            toml::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        doc.check_version()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SolutionDocument =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        doc.check_version()
    }

    fn check_version(self) -> Result<Self> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "unsupported schema_version {} (this build reads {})",
                self.schema_version, SCHEMA_VERSION
            )));
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::parse_rational;
    use crate::solver::{solve_rotation, RotationTarget, SolveOptions, SolveRequest};
    use std::f64::consts::PI;

    fn reference_document() -> SolutionDocument {
        let req = SolveRequest::normalized(
            parse_rational("2514/10000").unwrap(),
            RotationTarget::new([0.0, 1.0, 0.0], PI).unwrap(),
        )
        .with_q_exact(parse_rational("1").unwrap());
        let sol = solve_rotation(&req, &SolveOptions::default()).unwrap();
        SolutionDocument::from_solution(&sol)
    }

    fn float_bits(doc: &SolutionDocument) -> Vec<u64> {
        let mut bits = vec![
            doc.inputs.gamma_float.to_bits(),
            doc.inputs.theta_radians.to_bits(),
            doc.result.t_min_normalized.to_bits(),
            doc.result.t_min_physical.to_bits(),
            doc.result.omega.to_bits(),
            doc.result.a.to_bits(),
            doc.result.b.to_bits(),
            doc.result.sign.to_bits(),
        ];
        for row in doc.y_matrix.re.iter().chain(doc.y_matrix.im.iter()) {
            bits.extend(row.iter().map(|x| x.to_bits()));
        }
        bits
    }

    #[test]
    fn toml_round_trip_is_bit_exact() {
        let doc = reference_document();
        let text = doc.to_toml().unwrap();
        let back = SolutionDocument::from_toml(&text).unwrap();
        assert_eq!(float_bits(&doc), float_bits(&back));
        assert_eq!(doc, back);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let doc = reference_document();
        let text = doc.to_json().unwrap();
        let back = SolutionDocument::from_json(&text).unwrap();
        assert_eq!(float_bits(&doc), float_bits(&back));
        assert_eq!(doc, back);
    }

    #[test]
    fn document_records_branch_and_certificate() {
        let doc = reference_document();
        assert_eq!(doc.schema_version, SCHEMA_VERSION);
        assert_eq!(doc.branch, "quadruple");
        let quad = doc.quadruple.as_ref().expect("quadruple branch recorded");
        assert_eq!((quad.s, quad.m, quad.l, quad.k), (1, 1, 1, 1));
        assert_eq!(quad.l_half_pi, Some(3));
        assert_eq!(doc.inputs.gamma, "1257/5000");
        assert_eq!(doc.inputs.theta_over_pi.as_deref(), Some("1"));
        let cert = doc.certificate_summary.as_ref().expect("certificate attached");
        assert!(!cert.improvement_found);
        assert!(cert.bzero_all_excluded);
    }

    #[test]
    fn rebuilt_field_evaluates_bit_identically() {
        let req = SolveRequest::normalized(
            parse_rational("2514/10000").unwrap(),
            RotationTarget::new([0.0, 1.0, 0.0], PI).unwrap(),
        )
        .with_q_exact(parse_rational("1").unwrap());
        let sol = solve_rotation(&req, &SolveOptions::default()).unwrap();
        let direct = ControlField::from_solution(&sol);
        let doc = SolutionDocument::from_solution(&sol);
        let text = doc.to_toml().unwrap();
        let rebuilt = SolutionDocument::from_toml(&text).unwrap().control_field();
        for t in [0.0, 0.7, 1.9, 3.3] {
            let u = direct.eval(t);
            let v = rebuilt.eval(t);
            for axis in 0..3 {
                assert_eq!(u[axis].to_bits(), v[axis].to_bits());
            }
        }
    }

    #[test]
    fn unknown_schema_versions_are_rejected() {
        let doc = reference_document();
        let mut text = doc.to_toml().unwrap();
        text = text.replace("schema_version = 1", "schema_version = 2");
        let err = SolutionDocument::from_toml(&text).unwrap_err();
        assert!(err.to_string().contains("schema_version"));
    }

    #[test]
    fn drift_free_branch_is_recorded_with_its_resonance_index() {
        let req = SolveRequest::normalized(
            parse_rational("2/3").unwrap(),
            RotationTarget::new([0.0, 1.0, 0.0], PI).unwrap(),
        )
        .with_q_exact(parse_rational("1").unwrap());
        let sol = solve_rotation(&req, &SolveOptions::default()).unwrap();
        let doc = SolutionDocument::from_solution(&sol);
        assert_eq!(doc.branch, "bzero");
        assert_eq!(doc.bzero_k, Some(1));
        assert!(doc.quadruple.is_none());
    }
}
