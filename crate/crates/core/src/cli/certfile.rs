//! JSON form of a [`Certificate`]. Big integers and rationals are strings.

use serde_json::{json, Value};

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_bigint, parse_rational};

pub fn certificate_to_json(c: &Certificate) -> Value {
    json!({
        "q_max": c.q_max.to_string(),
        "n": c.n,
        "A": c.a.to_string(),
        "B": c.b.to_string(),
        "d": c.d.to_string(),
        "zeta_terms": c.zeta_terms,
        "u_lo": format_rational(&c.u_lo),
        "u_hi": format_rational(&c.u_hi),
    })
}

/// Accepts a bare certificate object or a report envelope whose first row is one.
pub fn certificate_from_json(v: &Value) -> Result<Certificate> {
    let obj = match v.get("rows") {
        Some(Value::Array(rows)) => rows
            .first()
            .ok_or_else(|| Error::Parse("report has no rows".into()))?,
        _ => v,
    };
    let s = |k: &str| {
        obj.get(k)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("missing string field {k:?}")))
    };
    let u = |k: &str| {
        obj.get(k)
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse(format!("missing integer field {k:?}")))
    };
    Ok(Certificate {
        q_max: parse_bigint(s("q_max")?)?,
        n: u("n")?,
        a: parse_bigint(s("A")?)?,
        b: parse_bigint(s("B")?)?,
        d: parse_bigint(s("d")?)?,
        zeta_terms: u("zeta_terms")?,
        u_lo: parse_rational(s("u_lo")?)?,
        u_hi: parse_rational(s("u_hi")?)?,
    })
}

pub fn certificate_from_str(text: &str) -> Result<Certificate> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    certificate_from_json(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::denominator_certificate;
    use crate::exactnum::int;

    #[test]
    fn round_trip() {
        let c = denominator_certificate(&int(1000), 64).unwrap();
        let v = certificate_to_json(&c);
        assert_eq!(certificate_from_json(&v).unwrap(), c);
        let wrapped = json!({"command": "certificate", "rows": [v.clone()]});
        assert_eq!(certificate_from_json(&wrapped).unwrap(), c);
        assert_eq!(certificate_from_str(&v.to_string()).unwrap(), c);
        assert!(certificate_from_str("{\"n\": 3}").is_err());
    }
}
