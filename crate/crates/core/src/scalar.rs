//! Scalar domains for tensor entries and amplitudes.
//!
//! Every network is built over one [`Scalar`] type and keeps it for its whole
//! life, so exact and floating arithmetic never mix inside a contraction.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Tag describing which semiring a value comes from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalarKind {
    Integer,
    Rational,
    Poly,
    Float,
}

impl ScalarKind {
    pub fn name(self) -> &'static str {
        match self {
            ScalarKind::Integer => "integer",
            ScalarKind::Rational => "rational",
            ScalarKind::Poly => "poly_t",
            ScalarKind::Float => "float",
        }
    }
}

/// A commutative semiring with the operations the contraction engine needs.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    const KIND: ScalarKind;

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Numeric value, when the scalar has one (polynomials only if constant).
    fn to_f64(&self) -> Option<f64>;
}

impl Scalar for BigInt {
    const KIND: ScalarKind = ScalarKind::Integer;

    fn to_f64(&self) -> Option<f64> {
        ToPrimitive::to_f64(self)
    }
}

impl Scalar for BigRational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn to_f64(&self) -> Option<f64> {
        ToPrimitive::to_f64(self)
    }
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Float;

    fn to_f64(&self) -> Option<f64> {
        Some(*self)
    }
}

impl Scalar for Poly {
    const KIND: ScalarKind = ScalarKind::Poly;

    fn to_f64(&self) -> Option<f64> {
        match self.degree() {
            None => Some(0.0),
            Some(0) => ToPrimitive::to_f64(&self.coeffs[0]),
            Some(_) => None,
        }
    }
}

/// Univariate polynomial in `t` with big-integer coefficients.
///
/// `coeffs[k]` is the coefficient of `t^k`; trailing zeros are never stored,
/// so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    /// The indeterminate `t`.
    pub fn t() -> Self {
        Poly::monomial(1, BigInt::one())
    }

    pub fn monomial(exp: usize, coeff: BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = coeff;
        Poly::from_coeffs(coeffs)
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: usize) -> BigInt {
        self.coeffs.get(exp).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Substitute a value for `t`.
    pub fn eval<S: Scalar + From<BigInt>>(&self, t: &S) -> S {
        // Horner
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + S::from(c.clone());
        }
        acc
    }

    /// Substitute `t -> t^k`.
    pub fn compose_power(&self, k: usize) -> Poly {
        if self.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (e, c) in self.coeffs.iter().enumerate() {
            out[e * k] = c.clone();
        }
        Poly::from_coeffs(out)
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(BigInt::one())
    }
}

impl Add for Poly {
    type Output = Poly;

    fn add(self, rhs: Poly) -> Poly {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a += b;
        }
        Poly::from_coeffs(long)
    }
}

impl Mul for Poly {
    type Output = Poly;

    fn mul(self, rhs: Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl From<BigInt> for Poly {
    fn from(c: BigInt) -> Self {
        Poly::constant(c)
    }
}

/// Ascending powers, e.g. `1 + 2*t^2 - t^3`; the zero polynomial prints `0`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match e {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{e}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse polynomial term `{0}`")]
pub struct ParsePolyError(pub String);

impl FromStr for Poly {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParsePolyError(String::from(s)));
        }
        let mut acc = Poly::zero();
        let mut term = String::new();
        let mut push = |term: &str| -> Result<(), ParsePolyError> {
            if !term.is_empty() {
                acc = core::mem::take(&mut acc) + parse_term(term)?;
            }
            Ok(())
        };
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
                push(&term)?;
                term.clear();
            }
            term.push(ch);
        }
        push(&term)?;
        Ok(acc)
    }
}

fn parse_term(term: &str) -> Result<Poly, ParsePolyError> {
    let err = || ParsePolyError(String::from(term));
    let (neg, body) = match term.as_bytes().first() {
        Some(b'-') => (true, &term[1..]),
        Some(b'+') => (false, &term[1..]),
        _ => (false, term),
    };
    let (coeff_str, var_part) = match body.find('t') {
        None => (body, None),
        Some(pos) => {
            let c = body[..pos].trim_end_matches('*');
            (c, Some(&body[pos + 1..]))
        }
    };
    let mut coeff = if coeff_str.is_empty() {
        BigInt::one()
    } else {
        coeff_str.parse::<BigInt>().map_err(|_| err())?
    };
    if neg {
        coeff = -coeff;
    }
    let exp = match var_part {
        None => 0,
        Some("") => 1,
        Some(rest) => rest
            .strip_prefix('^')
            .and_then(|e| e.parse::<usize>().ok())
            .ok_or_else(err)?,
    };
    Ok(Poly::monomial(exp, coeff))
}

/// Helper for building small integer scalars in any semiring.
pub fn from_u64<S: Scalar>(mut n: u64) -> S {
    let mut acc = S::zero();
    let mut unit = S::one();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc + unit.clone();
        }
        unit = unit.clone() + unit;
        n >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn display_and_parse() {
        let q =
            Poly::one() + Poly::monomial(2, BigInt::from(2)) + Poly::monomial(3, BigInt::from(-1));
        assert_eq!(q.to_string(), "1 + 2*t^2 - t^3");
        assert_eq!(p("1 + 2*t^2 - t^3"), q);
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p("t"), Poly::t());
        assert_eq!(p("-t^4"), Poly::monomial(4, BigInt::from(-1)));
        assert!("t^".parse::<Poly>().is_err());
        assert!("x".parse::<Poly>().is_err());
    }

    #[test]
    fn pow_and_eval() {
        let one_plus_t = Poly::one() + Poly::t();
        let sq = one_plus_t.pow(2);
        assert_eq!(sq, p("1 + 2*t + t^2"));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(
            sq.eval(&half),
            BigRational::new(BigInt::from(9), BigInt::from(4))
        );
        assert_eq!(BigInt::from(3).pow(4), BigInt::from(81));
        assert_eq!(from_u64::<BigInt>(37), BigInt::from(37));
        assert_eq!(p("1 + t").compose_power(2), p("1 + t^2"));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(-20i64..20, 0..6)
            .prop_map(|cs| Poly::from_coeffs(cs.into_iter().map(BigInt::from).collect()))
    }

    proptest! {
        #[test]
        fn display_round_trips(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<Poly>().unwrap(), a);
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
            let x = BigInt::from(3);
            prop_assert_eq!((a.clone() * b.clone()).eval(&x), a.eval(&x) * b.eval(&x));
        }
    }
}
