//! A closed catalog of continuous mappings that evaluate exactly on rationals.

use std::collections::HashMap;
use std::fmt;

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const MAX_POLY_DEGREE: usize = 8;

/// Declared structure of the set of points where a mapping is not locally affine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonlinearityClass {
    Empty,
    Finite,
    NowhereDenseNull,
    PositiveMeasure,
}

impl fmt::Display for NonlinearityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NonlinearityClass::Empty => "empty",
            NonlinearityClass::Finite => "finite",
            NonlinearityClass::NowhereDenseNull => "nowhere-dense-null",
            NonlinearityClass::PositiveMeasure => "positive-measure",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mapping {
    /// `a·t + b`
    Affine {
        #[serde(with = "rational::serde_str")]
        a: Rational,
        #[serde(with = "rational::serde_str")]
        b: Rational,
    },
    /// Linear interpolation through `(breakpoints[i], values[i])`, continued
    /// by the given slopes beyond the outer breakpoints.
    PiecewiseLinear {
        #[serde(with = "rational::serde_str::vec")]
        breakpoints: Vec<Rational>,
        #[serde(with = "rational::serde_str::vec")]
        values: Vec<Rational>,
        #[serde(with = "rational::serde_str", default = "Rational::zero")]
        left_slope: Rational,
        #[serde(with = "rational::serde_str", default = "Rational::zero")]
        right_slope: Rational,
    },
    /// `Σ coeffs[i]·t^i`
    Polynomial {
        #[serde(with = "rational::serde_str::vec")]
        coeffs: Vec<Rational>,
    },
    /// The Cantor staircase on `[0, 1]`, constant 0 to the left and 1 to the right.
    Cantor,
    /// `a·inner(t) + b`
    Composite {
        #[serde(with = "rational::serde_str")]
        a: Rational,
        #[serde(with = "rational::serde_str")]
        b: Rational,
        inner: Box<Mapping>,
    },
    /// `inner(clamp(t, lo, hi))`: the continuation constant on both rays.
    Clamped {
        #[serde(with = "rational::serde_str")]
        lo: Rational,
        #[serde(with = "rational::serde_str")]
        hi: Rational,
        inner: Box<Mapping>,
    },
}

impl Mapping {
    pub fn affine(a: Rational, b: Rational) -> Self {
        Mapping::Affine { a, b }
    }

    pub fn polynomial(coeffs: Vec<Rational>) -> Result<Self> {
        let m = Mapping::Polynomial { coeffs };
        m.validate()?;
        Ok(m)
    }

    /// `t ↦ t²`
    pub fn square() -> Self {
        Mapping::Polynomial { coeffs: vec![rational::int(0), rational::int(0), rational::int(1)] }
    }

    pub fn piecewise_linear(
        breakpoints: Vec<Rational>,
        values: Vec<Rational>,
        left_slope: Rational,
        right_slope: Rational,
    ) -> Result<Self> {
        let m = Mapping::PiecewiseLinear { breakpoints, values, left_slope, right_slope };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Mapping::Affine { .. } | Mapping::Cantor => Ok(()),
            Mapping::Polynomial { coeffs } => {
                if coeffs.len() > MAX_POLY_DEGREE + 1 {
                    return Err(Error::Malformed(format!("polynomial degree exceeds {MAX_POLY_DEGREE}")));
                }
                Ok(())
            }
            Mapping::PiecewiseLinear { breakpoints, values, .. } => {
                if breakpoints.is_empty() || breakpoints.len() != values.len() {
                    return Err(Error::Malformed(
                        "piecewise linear mapping needs matching, nonempty breakpoints and values".into(),
                    ));
                }
                if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Malformed("breakpoints must be strictly increasing".into()));
                }
                Ok(())
            }
            Mapping::Composite { inner, .. } => inner.validate(),
            Mapping::Clamped { lo, hi, inner } => {
                if lo >= hi {
                    return Err(Error::Precondition("clamp interval needs lo < hi".into()));
                }
                inner.validate()
            }
        }
    }

    /// Exact value at a rational point.
    pub fn eval(&self, t: &Rational) -> Rational {
        match self {
            Mapping::Affine { a, b } => a * t + b,
            Mapping::Polynomial { coeffs } => coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c),
            Mapping::PiecewiseLinear { breakpoints, values, left_slope, right_slope } => {
                let last = breakpoints.len() - 1;
                if t <= &breakpoints[0] {
                    return &values[0] + left_slope * (t - &breakpoints[0]);
                }
                if t >= &breakpoints[last] {
                    return &values[last] + right_slope * (t - &breakpoints[last]);
                }
                // first breakpoint strictly greater than t
                let hi = breakpoints.partition_point(|b| b <= t);
                let lo = hi - 1;
                let slope = (&values[hi] - &values[lo]) / (&breakpoints[hi] - &breakpoints[lo]);
                &values[lo] + slope * (t - &breakpoints[lo])
            }
            Mapping::Cantor => {
                if t <= &Rational::zero() {
                    Rational::zero()
                } else if t >= &Rational::one() {
                    Rational::one()
                } else {
                    cantor_eval(t).expect("argument checked to lie in [0, 1]")
                }
            }
            Mapping::Composite { a, b, inner } => a * inner.eval(t) + b,
            Mapping::Clamped { lo, hi, inner } => {
                let c = if t < lo {
                    lo
                } else if t > hi {
                    hi
                } else {
                    t
                };
                inner.eval(c)
            }
        }
    }

    pub fn nonlinearity_class(&self) -> NonlinearityClass {
        use NonlinearityClass::*;
        match self {
            Mapping::Affine { .. } => Empty,
            Mapping::PiecewiseLinear { .. } => Finite,
            Mapping::Polynomial { coeffs } => {
                if effective_degree(coeffs) >= 2 {
                    PositiveMeasure
                } else {
                    Empty
                }
            }
            Mapping::Cantor => NowhereDenseNull,
            Mapping::Composite { a, inner, .. } => {
                if a.is_zero() {
                    Empty
                } else {
                    inner.nonlinearity_class()
                }
            }
            Mapping::Clamped { inner, .. } => match inner.nonlinearity_class() {
                // the two clamp points may add kinks
                Empty | Finite => Finite,
                other => other,
            },
        }
    }

    /// Parses the compact CLI notation:
    /// `poly:c0,c1,...`, `affine:a,b`, `cantor`, `pwl:b0:v0,b1:v1,...[;left,right]`,
    /// `clamp:lo,hi:<mapping>`, or an inline JSON object.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let s = spec.trim();
        if s.starts_with('{') {
            let m: Mapping = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
            m.validate()?;
            return Ok(m);
        }
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "cantor" if rest.is_empty() => Ok(Mapping::Cantor),
            "square" if rest.is_empty() => Ok(Mapping::square()),
            "poly" => Mapping::polynomial(rational::parse_list(rest)?),
            "affine" => {
                let v = rational::parse_list(rest)?;
                if v.len() != 2 {
                    return Err(Error::Malformed("affine mapping takes `affine:a,b`".into()));
                }
                Ok(Mapping::affine(v[0].clone(), v[1].clone()))
            }
            "pwl" => {
                let (points, slopes) = rest.split_once(';').unwrap_or((rest, ""));
                let mut bps = Vec::new();
                let mut vals = Vec::new();
                for p in points.split(',') {
                    let (b, v) = p
                        .split_once(':')
                        .ok_or_else(|| Error::Malformed(format!("expected breakpoint:value, got `{p}`")))?;
                    bps.push(rational::parse(b)?);
                    vals.push(rational::parse(v)?);
                }
                let slopes = rational::parse_list(slopes)?;
                let (l, r) = match slopes.as_slice() {
                    [] => (Rational::zero(), Rational::zero()),
                    [l, r] => (l.clone(), r.clone()),
                    _ => return Err(Error::Malformed("pwl slopes take `;left,right`".into())),
                };
                Mapping::piecewise_linear(bps, vals, l, r)
            }
            "clamp" => {
                let mut parts = rest.splitn(2, ':');
                let bounds = rational::parse_list(parts.next().unwrap_or(""))?;
                let inner =
                    parts.next().ok_or_else(|| Error::Malformed("clamp takes `clamp:lo,hi:<mapping>`".into()))?;
                if bounds.len() != 2 {
                    return Err(Error::Malformed("clamp takes `clamp:lo,hi:<mapping>`".into()));
                }
                extend_constant(&Mapping::parse_spec(inner)?, &bounds[0], &bounds[1])
            }
            _ => Err(Error::Malformed(format!("unknown mapping `{spec}`"))),
        }
    }
}

fn effective_degree(coeffs: &[Rational]) -> usize {
    coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Rational]| v.iter().map(rational::format).collect::<Vec<_>>().join(",");
        match self {
            Mapping::Affine { a, b } => write!(f, "affine:{a},{b}"),
            Mapping::Polynomial { coeffs } => write!(f, "poly:{}", list(coeffs)),
            Mapping::Cantor => f.write_str("cantor"),
            Mapping::PiecewiseLinear { breakpoints, values, left_slope, right_slope } => {
                let pts: Vec<String> = breakpoints.iter().zip(values).map(|(b, v)| format!("{b}:{v}")).collect();
                write!(f, "pwl:{};{left_slope},{right_slope}", pts.join(","))
            }
            Mapping::Composite { a, b, inner } => write!(f, "{a}*({inner})+{b}"),
            Mapping::Clamped { lo, hi, inner } => write!(f, "clamp:{lo},{hi}:{inner}"),
        }
    }
}

/// The continuation of `φ|[a, b]` that is constant on `(-∞, a)` and `(b, +∞)`.
pub fn extend_constant(phi: &Mapping, a: &Rational, b: &Rational) -> Result<Mapping> {
    if a >= b {
        return Err(Error::Precondition("extension interval needs a < b".into()));
    }
    Ok(Mapping::Clamped { lo: a.clone(), hi: b.clone(), inner: Box::new(phi.clone()) })
}

/// The Cantor staircase at a rational `t ∈ [0, 1]`.
///
/// Runs base-3 long division on `t`, stopping at the first digit 1 (which
/// contributes a final binary 1), at a zero remainder, or when a remainder
/// repeats. Digits 0/2 become binary 0/1; a repeating block is summed as a
/// geometric series.
pub fn cantor_eval(t: &Rational) -> Result<Rational> {
    if t.is_negative() || t > &Rational::one() {
        return Err(Error::Domain(format!("cantor_eval needs t in [0, 1], got {t}")));
    }
    if t.is_one() {
        return Ok(Rational::one());
    }
    let q = t.denom().clone();
    let three = BigInt::from(3);
    let mut r = t.numer().clone();
    let mut bits: Vec<bool> = Vec::new();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut period_start = None;
    while !r.is_zero() {
        if let Some(&at) = seen.get(&r) {
            period_start = Some(at);
            break;
        }
        seen.insert(r.clone(), bits.len());
        let scaled = &r * &three;
        let digit = &scaled / &q;
        r = scaled % &q;
        if digit.is_one() {
            bits.push(true);
            break;
        }
        bits.push(!digit.is_zero());
    }
    let as_int = |bs: &[bool]| bs.iter().fold(BigInt::zero(), |acc, &b| (acc << 1) + u8::from(b));
    let pow2 = |k: usize| BigInt::one() << k;
    Ok(match period_start {
        None => Rational::new(as_int(&bits), pow2(bits.len())),
        Some(s) => {
            let (prefix, period) = bits.split_at(s);
            let tail = Rational::new(as_int(period), pow2(period.len()) - 1);
            (Rational::from_integer(as_int(prefix)) + tail) / Rational::from_integer(pow2(s))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, parse, ratio};

    #[test]
    fn eval_examples() {
        assert_eq!(Mapping::affine(int(2), int(1)).eval(&int(3)), int(7));
        assert_eq!(Mapping::square().eval(&ratio(3, 2)), ratio(9, 4));
        assert_eq!(Mapping::Cantor.eval(&ratio(1, 3)), ratio(1, 2));
        assert_eq!(Mapping::Cantor.eval(&int(-4)), int(0));
        assert_eq!(Mapping::Cantor.eval(&int(9)), int(1));
    }

    #[test]
    fn cantor_examples() {
        assert_eq!(cantor_eval(&int(0)).unwrap(), int(0));
        assert_eq!(cantor_eval(&int(1)).unwrap(), int(1));
        assert_eq!(cantor_eval(&ratio(1, 3)).unwrap(), ratio(1, 2));
        assert_eq!(cantor_eval(&ratio(2, 3)).unwrap(), ratio(1, 2));
        assert_eq!(cantor_eval(&ratio(1, 4)).unwrap(), ratio(1, 3));
        assert_eq!(cantor_eval(&ratio(3, 4)).unwrap(), ratio(2, 3));
        assert_eq!(cantor_eval(&ratio(1, 9)).unwrap(), ratio(1, 4));
        assert_eq!(cantor_eval(&ratio(1, 2)).unwrap(), ratio(1, 2));
        // 1/10 = 0.00220022...₃ ↦ 0.00110011...₂ = 1/5
        assert_eq!(cantor_eval(&ratio(1, 10)).unwrap(), ratio(1, 5));
        assert!(matches!(cantor_eval(&ratio(-1, 2)), Err(Error::Domain(_))));
        assert!(matches!(cantor_eval(&ratio(3, 2)), Err(Error::Domain(_))));
    }

    #[test]
    fn extension_clamps() {
        let sq = extend_constant(&Mapping::square(), &int(0), &int(1)).unwrap();
        assert_eq!(sq.eval(&int(2)), int(1));
        assert_eq!(sq.eval(&int(-5)), int(0));
        assert_eq!(sq.eval(&ratio(1, 2)), ratio(1, 4));
        let c = extend_constant(&Mapping::Cantor, &int(0), &int(1)).unwrap();
        assert_eq!(c.eval(&ratio(3, 2)), int(1));
        assert!(extend_constant(&Mapping::Cantor, &int(1), &int(1)).is_err());
    }

    #[test]
    fn piecewise_linear_agrees_with_affine_pieces() {
        // |t| on [-1, 1] with slopes continuing outward
        let m = Mapping::parse_spec("pwl:-1:1,0:0,1:1;-1,1").unwrap();
        for t in ["-3", "-1", "-1/2", "0", "1/3", "1", "5/2"] {
            let t = parse(t).unwrap();
            assert_eq!(m.eval(&t), num::Signed::abs(&t), "at {t}");
        }
        let bent = Mapping::parse_spec("pwl:0:0,2:4,3:4").unwrap();
        let left_piece = Mapping::affine(int(2), int(0));
        for t in [ratio(1, 7), ratio(1, 1), ratio(19, 10)] {
            assert_eq!(bent.eval(&t), left_piece.eval(&t));
        }
        assert_eq!(bent.eval(&ratio(5, 2)), int(4));
        assert_eq!(bent.eval(&int(10)), int(4));
        assert_eq!(bent.eval(&int(-10)), int(0));
    }

    #[test]
    fn classes_follow_kind() {
        use NonlinearityClass::*;
        assert_eq!(Mapping::affine(int(1), int(0)).nonlinearity_class(), Empty);
        assert_eq!(Mapping::square().nonlinearity_class(), PositiveMeasure);
        assert_eq!(Mapping::parse_spec("poly:1,2,0").unwrap().nonlinearity_class(), Empty);
        assert_eq!(Mapping::Cantor.nonlinearity_class(), NowhereDenseNull);
        assert_eq!(Mapping::parse_spec("pwl:0:0,1:2").unwrap().nonlinearity_class(), Finite);
        assert_eq!(Mapping::parse_spec("clamp:0,1:square").unwrap().nonlinearity_class(), PositiveMeasure);
        assert_eq!(Mapping::parse_spec("clamp:0,1:affine:1,0").unwrap().nonlinearity_class(), Finite);
    }

    #[test]
    fn spec_parsing_and_json() {
        assert_eq!(Mapping::parse_spec("poly:0,0,1").unwrap(), Mapping::square());
        assert_eq!(Mapping::parse_spec("cantor").unwrap(), Mapping::Cantor);
        assert!(Mapping::parse_spec("poly:0,0,0,0,0,0,0,0,0,1").is_err());
        assert!(Mapping::parse_spec("affine:1").is_err());
        assert!(Mapping::parse_spec("sin").is_err());
        assert!(Mapping::parse_spec("pwl:1:0,0:1").is_err());

        let json = serde_json::to_string(&Mapping::square()).unwrap();
        assert_eq!(json, r#"{"kind":"polynomial","coeffs":["0","0","1"]}"#);
        assert_eq!(serde_json::to_string(&Mapping::Cantor).unwrap(), r#"{"kind":"cantor"}"#);
        let pwl: Mapping =
            serde_json::from_str(r#"{"kind":"piecewise_linear","breakpoints":["0","1"],"values":["0","1/2"]}"#)
                .unwrap();
        assert_eq!(pwl.eval(&int(1)), ratio(1, 2));
        let inline = Mapping::parse_spec(r#"{"kind":"affine","a":"2","b":"1"}"#).unwrap();
        assert_eq!(inline, Mapping::affine(int(2), int(1)));
        let composite = Mapping::Composite { a: int(3), b: int(-1), inner: Box::new(Mapping::Cantor) };
        assert_eq!(composite.eval(&ratio(1, 4)), int(0));
    }
}
