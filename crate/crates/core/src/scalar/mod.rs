//! Exact arithmetic in `Q(y)`.

mod parse;
mod poly;
mod ratfunc;

pub use parse::parse_ratfunc;
pub use poly::IntPoly;
pub use ratfunc::RatFunc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at y = {point}")]
    Pole { point: String },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// `[k] = 1 + y^2 + ... + y^(2k-2)`, with `[0] = 0`.
pub fn quantum_int(k: usize) -> RatFunc {
    let mut coeffs = vec![0i64; 2 * k.max(1) - 1];
    for j in 0..k {
        coeffs[2 * j] = 1;
    }
    RatFunc::from_poly(IntPoly::from_i64s(&coeffs))
}

/// `[k]! = [1][2]...[k]`, with `[0]! = 1`.
pub fn quantum_factorial(k: usize) -> RatFunc {
    (1..=k).fold(RatFunc::one(), |acc, j| &acc * &quantum_int(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn at_one(r: &RatFunc) -> BigRational {
        r.eval_at(&BigRational::from_integer(BigInt::from(1))).unwrap()
    }

    #[test]
    fn quantum_values() {
        assert!(quantum_int(0).is_zero());
        assert!(quantum_int(1).is_one());
        assert_eq!(quantum_int(2).to_string(), "1 + y^2");
        assert!(quantum_factorial(0).is_one());
        assert_eq!(quantum_factorial(2), quantum_int(2));
        let expect = &quantum_int(2) * &quantum_int(3);
        assert_eq!(quantum_factorial(3), expect);
    }

    #[test]
    fn classical_limit() {
        let mut fact = 1i64;
        for k in 0..8usize {
            if k > 0 {
                fact *= k as i64;
            }
            assert_eq!(at_one(&quantum_int(k)), BigRational::from_integer(BigInt::from(k)));
            assert_eq!(at_one(&quantum_factorial(k)), BigRational::from_integer(BigInt::from(fact)));
        }
    }
}
