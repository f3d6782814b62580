//! Parsing of system specs, points and point-set builders for `scan` and
//! the metric `comb` subcommands.

use hyperrec::circle_systems::{golden, AnnulusPoint, AnnulusSystem, CircleRotation, TorusSkewSystem};
use hyperrec::hyperspace::symbolic::{FullShift, ShiftPoint};
use hyperrec::hyperspace::{MetricSystem, TorusPoint};
use hyperrec::rigid_skew::{RigidSkewParams, RigidSkewSystem};
use hyperrec::{Error, Result};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Decimal, `p/q` or `golden`.
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    if s == "golden" {
        return Ok(golden());
    }
    if s.contains('/') {
        let q: BigRational = s
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
        return q
            .to_f64()
            .ok_or_else(|| Error::InvalidInput(format!("rational {s:?} out of range")));
    }
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidInput(format!("bad number {s:?}")))
}

pub enum AnySystem {
    Circle(CircleRotation),
    Torus(TorusSkewSystem),
    Annulus(AnnulusSystem),
    Shift(FullShift),
    Rigid(Box<RigidSkewSystem>),
}

pub fn parse_system(spec: &str) -> Result<AnySystem> {
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (spec, None),
    };
    let need = || arg.ok_or_else(|| Error::InvalidInput(format!("system {kind:?} needs a parameter")));
    Ok(match kind {
        "circle" => AnySystem::Circle(CircleRotation::new(parse_real(need()?)?)),
        "golden" => AnySystem::Circle(CircleRotation::golden()),
        "example1" => AnySystem::Torus(TorusSkewSystem::example1(parse_real(need()?)?)),
        "rotation2" => AnySystem::Torus(TorusSkewSystem::plain_rotation(parse_real(need()?)?)),
        "annulus" => {
            let n = need()?
                .parse()
                .map_err(|_| Error::InvalidInput("annulus needs a circle count".into()))?;
            AnySystem::Annulus(AnnulusSystem::new(n)?)
        }
        "full-shift" => AnySystem::Shift(FullShift),
        "rigid" => AnySystem::Rigid(Box::new(RigidSkewSystem::new(RigidSkewParams::default())?)),
        _ => return Err(Error::InvalidInput(format!("unknown system {spec:?}"))),
    })
}

/// JSON encoding of points and the set builders each system supports.
pub trait PointCodec: MetricSystem {
    fn decode(&self, v: &Value) -> Result<Self::Point>;
    fn encode(&self, p: &Self::Point) -> Value;
    fn build(&self, name: &str, args: &[&str]) -> Result<Vec<Self::Point>>;
}

fn bad_point(v: &Value) -> Error {
    Error::InvalidInput(format!("cannot read point {v}"))
}

fn num(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| bad_point(v)),
        Value::String(s) => parse_real(s),
        _ => Err(bad_point(v)),
    }
}

fn arg_usize(args: &[&str], i: usize, what: &str) -> Result<usize> {
    args.get(i)
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| Error::InvalidInput(format!("builder needs {what}")))
}

fn random_units(args: &[&str], dims: usize) -> Result<Vec<Vec<f64>>> {
    let count = arg_usize(args, 0, "a count")?;
    let seed = arg_usize(args, 1, "a seed")? as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| (0..dims).map(|_| rng.gen()).collect()).collect())
}

fn unknown_builder(name: &str) -> Error {
    Error::InvalidInput(format!("unknown set builder {name:?} for this system"))
}

impl PointCodec for CircleRotation {
    fn decode(&self, v: &Value) -> Result<f64> {
        num(v)
    }
    fn encode(&self, p: &f64) -> Value {
        json!(p)
    }
    fn build(&self, name: &str, args: &[&str]) -> Result<Vec<f64>> {
        match name {
            "grid" => {
                let g = arg_usize(args, 0, "a grid size")?;
                Ok((0..g).map(|i| i as f64 / g as f64).collect())
            }
            "random" => Ok(random_units(args, 1)?.into_iter().map(|v| v[0]).collect()),
            _ => Err(unknown_builder(name)),
        }
    }
}

fn decode_torus(v: &Value) -> Result<TorusPoint> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([x, y]) => Ok([num(x)?, num(y)?]),
        _ => Err(bad_point(v)),
    }
}

fn build_torus(name: &str, args: &[&str]) -> Result<Vec<TorusPoint>> {
    match name {
        "fiber" => {
            let g = arg_usize(args, 0, "a grid size")?;
            let y0 = args.get(1).map(|a| parse_real(a)).transpose()?.unwrap_or(0.0);
            Ok((0..g).map(|i| [i as f64 / g as f64, y0]).collect())
        }
        "random" => Ok(random_units(args, 2)?.into_iter().map(|v| [v[0], v[1]]).collect()),
        _ => Err(unknown_builder(name)),
    }
}

impl PointCodec for TorusSkewSystem {
    fn decode(&self, v: &Value) -> Result<TorusPoint> {
        decode_torus(v)
    }
    fn encode(&self, p: &TorusPoint) -> Value {
        json!(p)
    }
    fn build(&self, name: &str, args: &[&str]) -> Result<Vec<TorusPoint>> {
        build_torus(name, args)
    }
}

impl PointCodec for RigidSkewSystem {
    fn decode(&self, v: &Value) -> Result<TorusPoint> {
        decode_torus(v)
    }
    fn encode(&self, p: &TorusPoint) -> Value {
        json!(p)
    }
    fn build(&self, name: &str, args: &[&str]) -> Result<Vec<TorusPoint>> {
        build_torus(name, args)
    }
}

impl PointCodec for AnnulusSystem {
    fn decode(&self, v: &Value) -> Result<AnnulusPoint> {
        let (ring, angle) = match v {
            Value::Array(a) if a.len() == 2 => (a[0].as_u64(), a[1].as_u64()),
            Value::Object(o) => (
                o.get("ring").and_then(Value::as_u64),
                o.get("angle").and_then(Value::as_u64),
            ),
            _ => (None, None),
        };
        match (ring, angle) {
            (Some(r), Some(a)) if r <= self.circles as u64 && a < (1u64 << self.circles) => {
                Ok(AnnulusPoint { ring: r as u32, angle: a })
            }
            _ => Err(bad_point(v)),
        }
    }
    fn encode(&self, p: &AnnulusPoint) -> Value {
        json!({ "ring": p.ring, "angle": p.angle })
    }
    fn build(&self, name: &str, _args: &[&str]) -> Result<Vec<AnnulusPoint>> {
        match name {
            "rings" => Ok((0..=self.circles).map(|ring| AnnulusPoint { ring, angle: 0 }).collect()),
            _ => Err(unknown_builder(name)),
        }
    }
}

impl PointCodec for FullShift {
    fn decode(&self, v: &Value) -> Result<ShiftPoint> {
        v.as_str().ok_or_else(|| bad_point(v))?.parse()
    }
    fn encode(&self, p: &ShiftPoint) -> Value {
        json!(p.to_string())
    }
    fn build(&self, name: &str, _args: &[&str]) -> Result<Vec<ShiftPoint>> {
        match name {
            "periodic" => ["(0)", "(1)", "(01)", "(001)", "(011)"]
                .iter()
                .map(|s| s.parse())
                .collect(),
            _ => Err(unknown_builder(name)),
        }
    }
}

/// A JSON value given inline, or read from `@file`.
pub fn read_json_arg(s: &str) -> Result<Value> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?,
        None => s.to_string(),
    };
    serde_json::from_str(&text).or_else(|_| {
        // bare symbolic points such as 0(1) are accepted unquoted
        if s.starts_with('@') {
            Err(Error::InvalidInput(format!("{s} is not valid JSON")))
        } else {
            Ok(Value::String(text))
        }
    })
}

/// `--set`: a builder `name:arg:...` or JSON points.
pub fn parse_set<S: PointCodec>(sys: &S, spec: &str) -> Result<Vec<S::Point>> {
    let s = spec.trim();
    if s.starts_with('[') || s.starts_with('@') {
        let v = read_json_arg(s)?;
        let arr = v
            .as_array()
            .ok_or_else(|| Error::InvalidInput("point set must be a JSON array".into()))?;
        return arr.iter().map(|p| sys.decode(p)).collect();
    }
    let mut parts = s.split(':');
    let name = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    sys.build(name, &args)
}
