//! The versioned certificate file format.
//!
//! A file is one JSON object with a `schema` tag, a `kind` tag and the body's
//! fields. Keys are sorted and every scalar is an exact hex float, so a
//! given result always renders to the same bytes.
//!
//! ```
//! use hypercert::certfile::{self, Body};
//! use hypercert::prover::{verify_strict, InequalityStatement, ProverConfig, Region};
//!
//! let stmt = InequalityStatement::parse("tanh(u) < u", Region::univariate("u", "0.5", "2").unwrap()).unwrap();
//! let cert = verify_strict(&stmt, &ProverConfig::default()).unwrap();
//! let text = certfile::render(&Body::Bisection(cert));
//! let back = certfile::parse(&text).unwrap();
//! assert_eq!(certfile::render(&back), text);
//! assert!(certfile::validate(&back).is_ok());
//! ```

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{check_composite, recheck_tail, Composite};
use crate::minimize::{check_minimization, MinimizationResult};
use crate::prover::{certificate_check, Certificate, TailReductionRecord};

pub const SCHEMA: &str = "hypercert/v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    Bisection(Certificate),
    Composite(Composite),
    Minimization(MinimizationResult),
    #[serde(rename = "tail-reduction")]
    Tail(TailReductionRecord),
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Bisection(_) => "bisection",
            Body::Composite(_) => "composite",
            Body::Minimization(_) => "minimization",
            Body::Tail(_) => "tail-reduction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertFileError {
    #[error("not a certificate file: {0}")]
    Syntax(String),
    #[error("unsupported schema {0:?}")]
    Schema(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

pub fn render(body: &Body) -> String {
    let mut value = serde_json::to_value(body).expect("bodies serialize");
    value.as_object_mut().expect("bodies are objects").insert("schema".into(), Value::String(SCHEMA.into()));
    let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
    text.push('\n');
    text
}

pub fn parse(text: &str) -> Result<Body, CertFileError> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| CertFileError::Syntax(e.to_string()))?;
    let object = value.as_object_mut().ok_or_else(|| CertFileError::Syntax("expected an object".into()))?;
    match object.remove("schema") {
        Some(Value::String(s)) if s == SCHEMA => {}
        Some(Value::String(s)) => return Err(CertFileError::Schema(s)),
        _ => return Err(CertFileError::Schema("missing".into())),
    }
    serde_json::from_value(value).map_err(|e| CertFileError::Malformed(e.to_string()))
}

/// Hex SHA-256 of the rendered file.
pub fn content_hash(body: &Body) -> String {
    hex::encode(Sha256::digest(render(body).as_bytes()))
}

/// `Ok` exactly when the body proves the claim it records. Undetermined
/// results are rejected with the reason.
pub fn validate(body: &Body) -> Result<(), String> {
    match body {
        Body::Bisection(cert) => {
            if !cert.is_proved() {
                return Err(format!("undetermined: {} boxes left open", cert.frontier().len()));
            }
            let stmt = cert.statement().map_err(|e| e.to_string())?;
            certificate_check(cert, &stmt).map_err(|e| e.to_string())
        }
        Body::Composite(c) => {
            check_composite(c)?;
            if !c.is_proved() {
                return Err("undetermined composite".into());
            }
            Ok(())
        }
        Body::Minimization(r) => check_minimization(r).map_err(|e| e.to_string()),
        Body::Tail(r) => {
            if recheck_tail(r) {
                Ok(())
            } else if r.holds {
                Err("tail reduction does not recheck".into())
            } else {
                Err("tail hypothesis does not hold".into())
            }
        }
    }
}
