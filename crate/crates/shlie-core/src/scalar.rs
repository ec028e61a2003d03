//! Scalar coefficients: exact rationals and dual numbers over them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact rational scalar. Stored in lowest terms with positive denominator
/// (maintained by `BigRational` itself).
pub type Rat = BigRational;

/// Minimal commutative-ring interface threaded through the generic
/// polynomial machinery. Implemented by [`Rat`] and [`Dual`].
pub trait Ring:
    Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + Zero + One + 'static
{
    /// By-reference arithmetic (the coefficients are arbitrary precision).
    fn radd(&self, other: &Self) -> Self;
    fn rsub(&self, other: &Self) -> Self;
    fn rneg(&self) -> Self;
    fn rmul(&self, other: &Self) -> Self;
    /// Multiply by a plain rational (every coefficient ring here is a
    /// rational algebra).
    fn scale(&self, by: &Rat) -> Self;
    fn from_rat(r: Rat) -> Self;
    fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(n)))
    }
}

impl Ring for Rat {
    fn radd(&self, other: &Self) -> Self {
        self + other
    }
    fn rsub(&self, other: &Self) -> Self {
        self - other
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn rmul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, by: &Rat) -> Self {
        self * by
    }
    fn from_rat(r: Rat) -> Self {
        r
    }
}

/// Rational with a square-zero parameter `h`: `body + h·soul`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Dual {
    pub body: Rat,
    pub soul: Rat,
}

impl Dual {
    pub fn new(body: Rat, soul: Rat) -> Self {
        Dual { body, soul }
    }
    pub fn body_only(body: Rat) -> Self {
        Dual {
            body,
            soul: Zero::zero(),
        }
    }
    pub fn soul_only(soul: Rat) -> Self {
        Dual {
            body: Zero::zero(),
            soul,
        }
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.soul.is_zero() {
            write!(f, "{}", self.body)
        } else if self.body.is_zero() {
            write!(f, "{}h", self.soul)
        } else {
            write!(f, "{}+{}h", self.body, self.soul)
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual {
            body: self.body + rhs.body,
            soul: self.soul + rhs.soul,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual {
            body: self.body - rhs.body,
            soul: self.soul - rhs.soul,
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            body: -self.body,
            soul: -self.soul,
        }
    }
}

// (a + bh)(c + dh) = ac + (ad + bc)h since h² = 0.
impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        Dual {
            soul: &self.body * &rhs.soul + &self.soul * &rhs.body,
            body: self.body * rhs.body,
        }
    }
}

impl Zero for Dual {
    fn zero() -> Self {
        Dual::default()
    }
    fn is_zero(&self) -> bool {
        self.body.is_zero() && self.soul.is_zero()
    }
}

impl One for Dual {
    fn one() -> Self {
        Dual::body_only(One::one())
    }
}

impl Ring for Dual {
    fn radd(&self, other: &Self) -> Self {
        Dual {
            body: &self.body + &other.body,
            soul: &self.soul + &other.soul,
        }
    }
    fn rsub(&self, other: &Self) -> Self {
        Dual {
            body: &self.body - &other.body,
            soul: &self.soul - &other.soul,
        }
    }
    fn rneg(&self) -> Self {
        Dual {
            body: -&self.body,
            soul: -&self.soul,
        }
    }
    fn rmul(&self, other: &Self) -> Self {
        Dual {
            body: &self.body * &other.body,
            soul: &self.body * &other.soul + &self.soul * &other.body,
        }
    }
    fn scale(&self, by: &Rat) -> Self {
        Dual {
            body: &self.body * by,
            soul: &self.soul * by,
        }
    }
    fn from_rat(r: Rat) -> Self {
        Dual::body_only(r)
    }
}

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational from numerator and denominator.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses "p", "-p" or "p/q" into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rat::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Rat::from_integer(n))
    }
}

/// `(-1)^n` for a possibly negative exponent.
pub fn sign_pow(n: i64) -> Rat {
    if n.rem_euclid(2) == 0 {
        rat(1)
    } else {
        rat(-1)
    }
}

/// Pivot size heuristic used by the exact elimination: |numerator·denominator|.
pub fn pivot_magnitude(r: &Rat) -> BigInt {
    (r.numer() * r.denom()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_square_zero() {
        let h = Dual::soul_only(rat(1));
        assert!(h.rmul(&h).is_zero());
        let x = Dual::new(rat(2), rat(3));
        let y = Dual::new(rat(5), rat(-1));
        let p = x.rmul(&y);
        assert_eq!(p.body, rat(10));
        assert_eq!(p.soul, rat(2) * rat(-1) + rat(3) * rat(5));
        assert_eq!(x.clone() * y.clone(), p);
        assert_eq!(x.clone() + y.clone(), x.radd(&y));
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rat("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rat("-7").unwrap(), rat(-7));
        assert_eq!(parse_rat(" 2 / 6 ").unwrap(), ratio(1, 3));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }
}
