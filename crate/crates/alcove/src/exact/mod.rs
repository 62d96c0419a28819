//! Arbitrary-precision integer/rational linear algebra and exact linear
//! feasibility: the numerical bedrock for everything else.

pub mod matrix;
pub mod solve;
pub mod feasible;
pub mod hull;

pub use feasible::{lin_feasible, Feasibility, InfeasCertificate, LinCon, Rel};
pub use hull::{hull_facets, lower_facets, Aff, Facet, Hull, LowerCell};
pub use matrix::{HermiteSmith, IntMatrix};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision integer.
pub type Int = BigInt;
/// Arbitrary-precision rational, always kept reduced with a positive denominator.
pub type Rat = BigRational;

/// A vector of exact rationals (weights, witnesses, covectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatVector(pub Vec<Rat>);

impl RatVector {
    pub fn zeros(n: usize) -> Self {
        RatVector(vec![Rat::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, other: &[Rat]) -> Rat {
        assert_eq!(self.0.len(), other.len());
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

/// `i` as an `Int`.
pub fn int(i: i64) -> Int {
    Int::from(i)
}

/// `p/q` as a `Rat`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

/// `i` as a `Rat`.
pub fn rati(i: i64) -> Rat {
    Rat::from_integer(Int::from(i))
}

/// Integer vector from `i64`s.
pub fn ivec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Rational vector from `i64`s.
pub fn rvec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rati(x)).collect()
}

/// Dot product of two integer slices.
pub fn idot(a: &[Int], b: &[Int]) -> Int {
    assert_eq!(a.len(), b.len());
    let mut acc = Int::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Dot product of two rational slices.
pub fn rdot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gcd of a slice (nonnegative; 0 for an all-zero slice).
pub fn content(v: &[Int]) -> Int {
    let mut g = Int::zero();
    for x in v {
        g = num_integer::gcd(g, x.abs());
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divide a vector by its content, making it primitive (no-op on zero vectors).
pub fn primitive(v: &mut [Int]) {
    let g = content(v);
    if g > Int::one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Clear denominators: returns (integer vector, common denominator > 0) with
/// `ints[i] / den == v[i]`.
pub fn clear_denominators(v: &[Rat]) -> (Vec<Int>, Int) {
    let mut den = Int::one();
    for x in v {
        den = num_integer::lcm(den, x.denom().clone());
    }
    let ints = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (ints, den)
}

/// Convert an integer slice to rationals.
pub fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_and_content() {
        let mut v = ivec(&[6, -9, 12]);
        assert_eq!(content(&v), int(3));
        primitive(&mut v);
        assert_eq!(v, ivec(&[2, -3, 4]));
        let mut z = ivec(&[0, 0]);
        primitive(&mut z);
        assert_eq!(z, ivec(&[0, 0]));
    }

    #[test]
    fn clear_denominators_roundtrip() {
        let v = vec![rat(1, 2), rat(-2, 3), rati(4)];
        let (ints, den) = clear_denominators(&v);
        assert_eq!(den, int(6));
        assert_eq!(ints, ivec(&[3, -4, 24]));
    }
}
