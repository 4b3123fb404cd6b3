use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::ExactError;

/// Arbitrary-precision rational number, re-exported for callers that build
/// scalars componentwise.
pub type Rational = BigRational;

/// A Gaussian rational: `re + im·i` with both parts rational.
///
/// Both parts are kept in lowest terms with positive denominators (that is
/// what `BigRational` guarantees on construction), so equality is plain
/// structural equality and `is_zero` is decidable. The type is closed under
/// `+`, `-`, `*` and `/` by a nonzero scalar, which is exactly what exact
/// rank and determinant computations need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactScalar {
    re: Rational,
    im: Rational,
}

impl ExactScalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_ints(v, 0)
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self {
            re: Rational::from_integer(re.into()),
            im: Rational::from_integer(im.into()),
        }
    }

    /// Real rational `num/den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self {
            re: Rational::new(num.into(), den.into()),
            im: Rational::zero(),
        }
    }

    /// Gaussian rational `a/b + (c/d)i`. Panics if `b == 0` or `d == 0`.
    pub fn from_ratios(re: (i64, i64), im: (i64, i64)) -> Self {
        Self {
            re: Rational::new(re.0.into(), re.1.into()),
            im: Rational::new(im.0.into(), im.1.into()),
        }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re == Rational::from_integer(1.into())
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|²` as an exact rational.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sq();
        Some(Self {
            re: &self.re / &d,
            im: -&self.im / &d,
        })
    }

    /// Nearest-double approximation, for handing exact data to the
    /// floating-point side.
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        // Most matrices here are real; skip the imaginary cross terms when
        // either factor is real.
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => ExactScalar {
                re: &self.re * &rhs.re,
                im: Rational::zero(),
            },
            (true, false) => ExactScalar {
                re: &self.re * &rhs.re,
                im: &self.re * &rhs.im,
            },
            (false, true) => ExactScalar {
                re: &self.re * &rhs.re,
                im: &self.im * &rhs.re,
            },
            (false, false) => ExactScalar {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

/// Division panics on a zero divisor, like integer division; use
/// [`ExactScalar::inv`] when the divisor is not known to be nonzero.
impl Div for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        let inv = rhs.inv().expect("exact division by zero");
        self * &inv
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($($op:ident :: $method:ident),*) => {$(
        impl $op for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $op<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $op<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // BigRational displays "num/den", or just "num" when den == 1.
    write!(f, "{}", r)
}

/// Canonical string form: `"p/q"` for real values, `"p/q+r/s i"` (without the
/// space, e.g. `"1-2/3i"`) otherwise. Integer parts drop the `/1`.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        fmt_rational(&self.re, f)?;
        if self.im.is_negative() {
            write!(f, "-")?;
        } else {
            write!(f, "+")?;
        }
        fmt_rational(&self.im.abs(), f)?;
        write!(f, "i")
    }
}

fn parse_rational(s: &str, input: &str) -> Result<Rational, ExactError> {
    let err = |reason: &str| ExactError::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(err("empty rational part"));
    }
    Rational::from_str(s).map_err(|e| err(&e.to_string()))
}

impl FromStr for ExactScalar {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let err = |reason: &str| ExactError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if trimmed.is_empty() {
            return Err(err("empty string"));
        }
        let Some(body) = trimmed.strip_suffix('i') else {
            // Purely real.
            return Ok(Self {
                re: parse_rational(trimmed, s)?,
                im: Rational::zero(),
            });
        };
        let body = body.trim_end();
        // Split off the imaginary part at the last sign that separates two
        // components (i.e. one directly preceded by a digit).
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && bytes[p - 1].is_ascii_digit());
        match split {
            Some(p) => Ok(Self {
                re: parse_rational(&body[..p], s)?,
                im: parse_rational(&body[p..], s)?,
            }),
            None => {
                // Pure imaginary: "i", "-i", "2i", "-2/3i", ...
                let im = match body {
                    "" | "+" => Rational::from_integer(1.into()),
                    "-" => Rational::from_integer((-1).into()),
                    _ => parse_rational(body, s)?,
                };
                Ok(Self {
                    re: Rational::zero(),
                    im,
                })
            }
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scalar(re: (i64, i64), im: (i64, i64)) -> ExactScalar {
        ExactScalar::from_ratios(re, im)
    }

    #[test]
    fn display_forms() {
        assert_eq!(ExactScalar::from_int(1).to_string(), "1");
        assert_eq!(ExactScalar::from_int(-2).to_string(), "-2");
        assert_eq!(ExactScalar::from_ratio(3, 2).to_string(), "3/2");
        assert_eq!(ExactScalar::from_ratio(-4, 6).to_string(), "-2/3");
        assert_eq!(ExactScalar::i().to_string(), "0+1i");
        assert_eq!(ExactScalar::from_ints(1, -1).to_string(), "1-1i");
        assert_eq!(scalar((0, 1), (-2, 3)).to_string(), "0-2/3i");
    }

    #[test]
    fn parse_forms() {
        let cases = [
            ("1", ExactScalar::from_int(1)),
            ("-2", ExactScalar::from_int(-2)),
            (" 7/3 ", ExactScalar::from_ratio(7, 3)),
            ("0+1i", ExactScalar::i()),
            ("i", ExactScalar::i()),
            ("-i", ExactScalar::from_ints(0, -1)),
            ("2i", ExactScalar::from_ints(0, 2)),
            ("-2/3i", scalar((0, 1), (-2, 3))),
            ("1-2/3i", scalar((1, 1), (-2, 3))),
            ("-1/2+3i", scalar((-1, 2), (3, 1))),
        ];
        for (text, want) in cases {
            let got: ExactScalar = text.parse().unwrap();
            assert_eq!(got, want, "parsing {text:?}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        for text in ["", "x", "1/0", "1+", "1++2i", "1.5"] {
            assert!(text.parse::<ExactScalar>().is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn inverse_of_zero_is_none() {
        assert!(ExactScalar::zero().inv().is_none());
    }

    #[test]
    fn complex_inverse() {
        // (1+i)^-1 = (1-i)/2
        let z = ExactScalar::from_ints(1, 1);
        assert_eq!(z.inv().unwrap(), scalar((1, 2), (-1, 2)));
    }

    fn arb_scalar() -> impl Strategy<Value = ExactScalar> {
        (
            -20i64..=20,
            1i64..=10,
            -20i64..=20,
            1i64..=10,
        )
            .prop_map(|(rn, rd, in_, id)| ExactScalar::from_ratios((rn, rd), (in_, id)))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a + ExactScalar::zero(), a.clone());
            prop_assert_eq!(&a * ExactScalar::one(), a.clone());
            prop_assert_eq!(&a + (-&a), ExactScalar::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * a.inv().unwrap(), ExactScalar::one());
            }
        }

        #[test]
        fn string_round_trip(a in arb_scalar()) {
            let text = a.to_string();
            let back: ExactScalar = text.parse().unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn json_round_trip(a in arb_scalar()) {
            let json = serde_json::to_string(&a).unwrap();
            let back: ExactScalar = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
