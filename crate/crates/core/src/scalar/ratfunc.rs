use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::IntPoly;
use super::ScalarError;

/// An element of `Q(y)` in canonical form.
///
/// `num / den` with both in `Z[y]`, no common factor over `Q[y]`, no common
/// integer content, and a positive leading coefficient in `den`. Two values
/// are equal exactly when their stored representations are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

impl Hash for RatFunc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: IntPoly::zero(), den: IntPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc { num: IntPoly::constant(BigInt::from(c)), den: IntPoly::one() }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::new(IntPoly::constant(q.numer().clone()), IntPoly::constant(q.denom().clone()))
            .expect("rational denominators are nonzero")
    }

    /// The indeterminate `y`.
    pub fn y() -> Self {
        Self::from_poly(IntPoly::monomial(BigInt::one(), 1))
    }

    /// `c * y^k`
    pub fn monomial(c: i64, k: usize) -> Self {
        Self::from_poly(IntPoly::monomial(BigInt::from(c), k))
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RatFunc { num: p, den: IntPoly::one() }
    }

    /// Build and canonicalise `num / den`.
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(mut num: IntPoly, mut den: IntPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if !den.is_constant() {
            let g = num.gcd(&den);
            if !g.is_constant() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let c = num.content().gcd(&den.content());
        let c = if den.leading().unwrap().is_negative() { -c } else { c };
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        RatFunc { num, den }
    }

    pub fn numer(&self) -> &IntPoly {
        &self.num
    }

    pub fn denom(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value lies in `Q[y]` (constant denominator).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// True for elements of `Q`.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self * &rhs.inv_unchecked())
    }

    pub fn inv(&self) -> Result<RatFunc, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self.inv_unchecked())
    }

    fn inv_unchecked(&self) -> RatFunc {
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.leading().unwrap().is_negative() {
            num = -num;
            den = -den;
        }
        RatFunc { num, den }
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        let mut acc = RatFunc::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at `y = point`.
    pub fn eval_at(&self, point: &BigRational) -> Result<BigRational, ScalarError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(ScalarError::Pole { point: point.to_string() });
        }
        Ok(self.num.eval(point) / d)
    }

    /// Substitute `y -> y^k`.
    pub fn inflate(&self, k: usize) -> RatFunc {
        RatFunc { num: self.num.inflate(k), den: self.den.inflate(k) }
    }

    /// Total degree of numerator plus denominator; a cheap complexity measure.
    pub fn weight(&self) -> usize {
        self.num.degree() + self.den.degree()
    }

    pub fn parse(s: &str) -> Result<RatFunc, ScalarError> {
        super::parse::parse_ratfunc(s)
    }
}

impl fmt::Display for RatFunc {
    /// Polynomial values print as `1 - y^2` or `3/2*y^4`; proper fractions
    /// print as `(num)/(den)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            let d = self.den.leading().unwrap().clone();
            return self.num.fmt_over(f, &d);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl FromStr for RatFunc {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RatFunc::parse(s)
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        RatFunc::from_int(c)
    }
}

/// Total order on representations; only used for deterministic output.
impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatFunc {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |r: &RatFunc| (r.num.coeffs().to_vec(), r.den.coeffs().to_vec());
        key(self).cmp(&key(other))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RatFunc { num: &self.num + &rhs.num, den: IntPoly::one() };
            }
            return RatFunc::normalize(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_constant() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFunc::normalize(num, &self.den * &rhs.den);
        }
        let ad = self.den.div_exact(&g).expect("gcd divides");
        let bd = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &bd) + &(&rhs.num * &ad);
        RatFunc::normalize(num, &self.den * &bd)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc { num: &self.num * &rhs.num, den: IntPoly::one() };
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (an, bd) = if g1.is_constant() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.div_exact(&g1).unwrap(), rhs.den.div_exact(&g1).unwrap())
        };
        let (bn, ad) = if g2.is_constant() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.div_exact(&g2).unwrap(), self.den.div_exact(&g2).unwrap())
        };
        let mut num = &an * &bn;
        let mut den = &ad * &bd;
        let c = num.content().gcd(&den.content());
        let c = if den.leading().unwrap().is_negative() { -c } else { c };
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        RatFunc { num, den }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> RatFunc {
        RatFunc::from_poly(IntPoly::from_i64s(cs))
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn factor_cancellation() {
        let r = poly(&[1, 0, -1]).checked_div(&poly(&[1, 1])).unwrap();
        assert_eq!(r, poly(&[1, -1]));
    }

    #[test]
    fn additive_identity() {
        let a = RatFunc::new(IntPoly::from_i64s(&[3, 1]), IntPoly::from_i64s(&[1, 0, 2])).unwrap();
        assert_eq!(&a + &RatFunc::zero(), a);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(RatFunc::one().checked_div(&RatFunc::zero()), Err(ScalarError::DivisionByZero));
        assert!(RatFunc::new(IntPoly::one(), IntPoly::zero()).is_err());
    }

    #[test]
    fn product_matches_schoolbook_oracle() {
        // (1 + y^2)(1 + y^2 + y^4) by hand: 1 + 2y^2 + 2y^4 + y^6
        let a = poly(&[1, 0, 1]);
        let b = poly(&[1, 0, 1, 0, 1]);
        assert_eq!(&a * &b, poly(&[1, 0, 2, 0, 2, 0, 1]));
    }

    #[test]
    fn canonical_denominator_sign_and_content() {
        let a = RatFunc::new(IntPoly::from_i64s(&[2]), IntPoly::from_i64s(&[-4, -4])).unwrap();
        let b = RatFunc::new(IntPoly::from_i64s(&[-1]), IntPoly::from_i64s(&[2, 2])).unwrap();
        assert_eq!(a, b);
        assert!(a.denom().leading().unwrap().is_positive());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(poly(&[1, 0, 1]).eval_at(&q(2, 1)).unwrap(), q(5, 1));
        let pole = RatFunc::one().checked_div(&poly(&[1, -1])).unwrap();
        assert!(matches!(pole.eval_at(&q(1, 1)), Err(ScalarError::Pole { .. })));
        let r = RatFunc::new(IntPoly::from_i64s(&[1, 0, -1]), IntPoly::from_i64s(&[1, 1])).unwrap();
        assert_eq!(r.eval_at(&q(3, 1)).unwrap(), q(-2, 1));
        // reduced form removes the removable singularity at y = -1
        assert_eq!(r.eval_at(&q(-1, 1)).unwrap(), q(2, 1));
    }

    #[test]
    fn display_forms() {
        assert_eq!(poly(&[1, 0, -1]).to_string(), "1 - y^2");
        let half = RatFunc::from_rational(&q(3, 2));
        assert_eq!((&half * &RatFunc::monomial(1, 4)).to_string(), "3/2*y^4");
        let f = RatFunc::one().checked_div(&poly(&[1, -1])).unwrap();
        assert_eq!(f.to_string(), "(-1)/(-1 + y)");
    }
}
