//! Machine-readable verification reports.
//!
//! Serialization is deterministic: struct fields keep declaration order,
//! maps are `BTreeMap`, and every number is rendered as a string (exact
//! rationals as `num/den`, enclosures as midpoint plus radius).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Witness,
    NotFound,
    Warning,
}

/// A reported number. No bare floats.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Num {
    Int(String),
    Rational(String),
    /// Midpoint and radius of a certified enclosure.
    Ball { mid: String, rad: String },
    /// Floating-point measurement with an explicit error allowance.
    Real { value: String, err: String },
}

impl Num {
    pub fn int(v: impl Into<BigInt>) -> Num {
        Num::Int(v.into().to_string())
    }

    pub fn rational(r: &BigRational) -> Num {
        Num::Rational(fmt_rational(r))
    }

    pub fn real(value: f64, err: f64) -> Num {
        Num::Real {
            value: fmt_f64(value),
            err: fmt_f64(err),
        }
    }
}

/// `num/den` with the denominator always present.
pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Human-readable scientific notation of an exact rational with four
/// significant digits, for magnitudes far outside the `f64` range.
pub fn fmt_sci(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    let digits = |n: &BigInt| n.to_string().len() as i64;
    let scaled = |e: i64| {
        let p = BigRational::from_integer(num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize));
        if e >= 0 {
            &a / p
        } else {
            &a * p
        }
    };
    let mut e = digits(a.numer()) - digits(a.denom());
    let mut m = scaled(e);
    if m < BigRational::from_integer(1.into()) {
        e -= 1;
        m = scaled(e);
    }
    format!("{sign}{:.3}e{e}", m.to_f64().unwrap_or(f64::NAN))
}

/// Fixed float formatting used everywhere in reports.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.15e}")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The mathematical statement the check is a finite instance of.
    pub anchor: String,
    pub status: Status,
    pub detail: String,
    pub witnesses: Value,
    pub bounds: BTreeMap<String, Num>,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, status: Status) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            status,
            detail: String::new(),
            witnesses: Value::Null,
            bounds: BTreeMap::new(),
        }
    }

    pub fn pass_if(name: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        Check::new(name, anchor, if ok { Status::Pass } else { Status::Fail })
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }

    pub fn witnesses(mut self, v: Value) -> Self {
        self.witnesses = v;
        self
    }

    pub fn bound(mut self, key: impl Into<String>, n: Num) -> Self {
        self.bounds.insert(key.into(), n);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Construction {
    pub tag: String,
    pub params: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub construction: Construction,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(tag: impl Into<String>) -> Self {
        VerificationReport {
            tool_version: TOOL_VERSION.to_string(),
            construction: Construction {
                tag: tag.into(),
                params: BTreeMap::new(),
            },
            checks: Vec::new(),
        }
    }

    pub fn param(mut self, key: impl Into<String>, v: impl Into<Value>) -> Self {
        self.construction.params.insert(key.into(), v.into());
        self
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// No check failed. Warnings and not-found search results do not fail a report.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// One line per check for terminal output.
    pub fn summary(&self) -> String {
        let mut s = format!("{} ({})\n", self.construction.tag, self.tool_version);
        for c in &self.checks {
            let status = serde_json::to_value(c.status).expect("status serializes");
            s.push_str(&format!(
                "  [{}] {}{}\n",
                status.as_str().unwrap_or("?"),
                c.name,
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!(": {}", c.detail)
                }
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialization_is_stable() {
        let mut r = VerificationReport::new("demo").param("b", 2).param("a", "x");
        r.push(
            Check::pass_if("c", "a statement", true)
                .bound("ratio", Num::rational(&BigRational::new(2.into(), 4.into())))
                .bound("dist", Num::real(0.5, 1e-12)),
        );
        let a = r.to_json();
        let b = r.clone().to_json();
        assert_eq!(a, b);
        assert!(a.find("\"a\"").unwrap() < a.find("\"b\"").unwrap());
        assert!(a.contains("\"1/2\""));
        assert!(r.passed());
    }

    #[test]
    fn scientific_rationals() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(fmt_sci(&r(28, 100_000_000)), "2.800e-7");
        assert_eq!(fmt_sci(&r(-15, 1)), "-1.500e1");
        assert_eq!(fmt_sci(&r(1, 3)), "3.333e-1");
        let tiny = BigRational::new(7.into(), num_traits::pow(BigInt::from(10), 800));
        assert_eq!(fmt_sci(&tiny), "7.000e-800");
    }
}
