//! The certificate file format round-trips every body kind exactly.

use hypercert::certfile::{self, Body, CertFileError, SCHEMA};
use hypercert::corpus::{infimum_near_zero, verify_infinity_reduction, INFIMUM_BOUND, T3_STATEMENT};
use hypercert::interval::Scalar;
use hypercert::minimize::certified_infimum;
use hypercert::prover::{verify_strict, InequalityStatement, ProverConfig, Region};
use hypercert::rug::float::Round;

fn bodies() -> Vec<Body> {
    let stmt = InequalityStatement::parse(T3_STATEMENT, Region::univariate("u", "0.3", "3").unwrap()).unwrap();
    let cert = verify_strict(&stmt, &ProverConfig::default()).unwrap();
    let w = Scalar::from_decimal("1e-3", 64, Round::Down).unwrap();
    let min = certified_infimum(
        &"cosh(u) - u".parse().unwrap(),
        &Region::univariate("u", "0", "2").unwrap(),
        &w,
        &ProverConfig::default(),
    )
    .unwrap();
    let three = Scalar::from_i64(3, 64);
    let tail = verify_infinity_reduction(&three, 128).unwrap();
    let near = infimum_near_zero(&Scalar::from_decimal("0.15", 64, Round::Down).unwrap(), INFIMUM_BOUND, 128).unwrap();
    vec![Body::Bisection(cert), Body::Minimization(min), Body::Tail(tail), Body::Tail(near)]
}

#[test]
fn round_trip_is_exact() {
    for body in bodies() {
        let text = certfile::render(&body);
        assert!(text.contains(&format!("\"schema\": \"{SCHEMA}\"")));
        assert!(text.contains(&format!("\"kind\": \"{}\"", body.kind())));
        let back = certfile::parse(&text).unwrap();
        assert_eq!(back, body);
        assert_eq!(certfile::render(&back), text);
        assert_eq!(certfile::content_hash(&back), certfile::content_hash(&body));
        assert_eq!(certfile::validate(&back), Ok(()), "{}", body.kind());
    }
}

#[test]
fn scalars_are_exact_hex() {
    let text = certfile::render(&bodies().remove(0));
    assert!(text.contains("\"lhs_upper\": \"0x"));
    assert!(!text.contains("e-"));
}

#[test]
fn schema_and_syntax_errors() {
    let text = certfile::render(&bodies().remove(2));
    let other = text.replace(SCHEMA, "hypercert/v2");
    assert_eq!(certfile::parse(&other), Err(CertFileError::Schema("hypercert/v2".into())));
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value.as_object_mut().unwrap().remove("schema");
    let missing = value.to_string();
    assert_eq!(certfile::parse(&missing), Err(CertFileError::Schema("missing".into())));
    assert!(matches!(certfile::parse("[1, 2]"), Err(CertFileError::Syntax(_))));
    assert!(matches!(certfile::parse("not json"), Err(CertFileError::Syntax(_))));
    let unknown = text.replace("\"kind\": \"tail-reduction\"", "\"kind\": \"oracle\"");
    assert!(matches!(certfile::parse(&unknown), Err(CertFileError::Malformed(_))));
}

#[test]
fn failed_hypothesis_does_not_validate() {
    let one = Scalar::from_i64(1, 64);
    let tail = verify_infinity_reduction(&one, 128).unwrap();
    assert!(!tail.holds);
    assert!(certfile::validate(&Body::Tail(tail)).is_err());
}
