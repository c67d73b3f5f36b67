//! Exact scalars: arbitrary-precision rationals and the quadratic field Q(√3).
//!
//! Every coefficient in the exterior-algebra side of this workspace lives in
//! Q(√3), the smallest field containing the rationals and √3. Elements are
//! stored as a pair (a, b) representing a + b√3 with `a`, `b` reduced
//! rationals. The field is closed under all four operations because
//! (a + b√3)(a − b√3) = a² − 3b², which vanishes only at a = b = 0
//! (√3 is irrational, so a² = 3b² has no nonzero rational solution).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational; always reduced, denominator always positive.
pub type Rational = num_rational::BigRational;

/// Minimal ring interface the exterior algebra needs from a coefficient type.
pub trait Ring:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}
impl<T> Ring for T where
    T: Clone + PartialEq + Zero + One + Neg<Output = T> + Sub<Output = T>
{
}

/// Ring with exact division by nonzero elements; required by the linear solvers.
pub trait Field: Ring + Div<Output = Self> {}
impl<T> Field for T where T: Ring + Div<Output = T> {}

/// An element a + b√3 of Q(√3).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    a: Rational,
    b: Rational,
}

impl Scalar {
    pub fn new(a: Rational, b: Rational) -> Self {
        Scalar { a, b }
    }

    /// The rational a/b (panics if b = 0).
    pub fn rat(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar {
            a: Rational::new(BigInt::from(num), BigInt::from(den)),
            b: Rational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Scalar::rat(n, 1)
    }

    /// √3 itself.
    pub fn sqrt3() -> Self {
        Scalar {
            a: Rational::zero(),
            b: Rational::one(),
        }
    }

    /// c·√3 for rational c = num/den.
    pub fn sqrt3_times(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar {
            a: Rational::zero(),
            b: Rational::new(BigInt::from(num), BigInt::from(den)),
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt3_part(&self) -> &Rational {
        &self.b
    }

    /// True when the √3 coordinate vanishes, i.e. the element is rational.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Conjugate a + b√3 ↦ a − b√3.
    pub fn conjugate(&self) -> Self {
        Scalar {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Exact multiplicative inverse; panics on zero.
    pub fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in Q(\u{221a}3)");
        // 1/(a+b√3) = (a−b√3)/(a²−3b²)
        let norm = &self.a * &self.a - Rational::from(BigInt::from(3)) * &self.b * &self.b;
        Scalar {
            a: &self.a / &norm,
            b: -(&self.b / &norm),
        }
    }

    /// Sign of the real number a + b√3: −1, 0 or +1.
    pub fn signum(&self) -> i8 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) | (0, s) => s,
            (s, t) if s == t => s,
            _ => {
                // Opposite signs: compare a² with 3b².
                let a2 = &self.a * &self.a;
                let b23 = Rational::from(BigInt::from(3)) * &self.b * &self.b;
                match a2.cmp(&b23) {
                    std::cmp::Ordering::Greater => sa,
                    std::cmp::Ordering::Less => sb,
                    std::cmp::Ordering::Equal => unreachable!("√3 is irrational"),
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Closest double to a + b√3.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 3f64.sqrt()
    }

    /// Literal form accepted by the parsers: `p/q`, `p/q+r/s s3`, `-r/s s3` ...
    pub fn to_literal(&self) -> String {
        fn rat(r: &Rational) -> String {
            if r.denom().is_one() {
                format!("{}", r.numer())
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        if self.b.is_zero() {
            return rat(&self.a);
        }
        let s3 = format!("{} s3", rat(&self.b.abs()));
        let s3 = if self.b.is_negative() {
            format!("-{}", s3)
        } else {
            s3
        };
        if self.a.is_zero() {
            s3
        } else if self.b.is_negative() {
            format!("{}{}", rat(&self.a), s3)
        } else {
            format!("{}+{}", rat(&self.a), s3)
        }
    }
}

fn rat_sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn rat(r: &Rational) -> String {
            if r.denom().is_one() {
                format!("{}", r.numer())
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        if self.b.is_zero() {
            return write!(f, "{}", rat(&self.a));
        }
        let mag = self.b.abs();
        let root = if mag.is_one() {
            "\u{221a}3".to_string()
        } else {
            format!("{}\u{221a}3", rat(&mag))
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{root}")
            } else {
                write!(f, "{root}")
            }
        } else if self.b.is_negative() {
            write!(f, "{}-{root}", rat(&self.a))
        } else {
            write!(f, "{}+{root}", rat(&self.a))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.clone() - other.clone()).signum().cmp(&0)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        let three = Rational::from(BigInt::from(3));
        Scalar {
            a: &self.a * &rhs.a + three * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self * rhs.inverse()
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::int(1)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}
