//! Exact scalars and vectors.
//!
//! `Rational` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator (`num_rational` maintains both invariants), so every
//! comparison downstream — LP pivoting, vertex dedup, golden-file output —
//! is exact. No module of this crate ever touches floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rational = num_rational::BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

/// Rational `p/q`. Panics if `q = 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(Int::from(p), Int::from(q))
}

/// Integer vector with arbitrary-precision entries.
///
/// Houses facet normals `v_i`, primitive normals `w_i` and lattice points.
/// The derived `Ord` is lexicographic on entries, which is the ordering used
/// for all deterministic output.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVector(pub Vec<Int>);

impl IntVector {
    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&e| Int::from(e)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        IntVector(vec![Int::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|e| e.is_zero())
    }

    pub fn dot_int(&self, other: &IntVector) -> Int {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_rat(&self, other: &RatVector) -> Rational {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| Rational::from_integer(a.clone()) * b)
            .sum()
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|e| -e).collect())
    }

    pub fn scaled(&self, c: &Int) -> IntVector {
        IntVector(self.0.iter().map(|e| e * c).collect())
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        debug_assert_eq!(self.len(), other.len());
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// gcd of the absolute values of the entries; zero for the zero vector.
    pub fn content(&self) -> Int {
        self.0
            .iter()
            .fold(Int::zero(), |acc, e| acc.gcd(e))
    }

    pub fn to_rat(&self) -> RatVector {
        RatVector(
            self.0
                .iter()
                .map(|e| Rational::from_integer(e.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// `v = label · w` with `label > 0` and `w` primitive (entry gcd 1).
pub fn primitive_decompose(v: &IntVector) -> Result<(Int, IntVector)> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = v.content();
    let w = IntVector(v.0.iter().map(|e| e / &g).collect());
    Ok((g, w))
}

/// Rational vector. Derived `Ord` is lexicographic, used for vertex sorting.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatVector(pub Vec<Rational>);

impl RatVector {
    pub fn from_i64(entries: &[i64]) -> Self {
        RatVector(entries.iter().map(|&e| rat(e)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        RatVector(vec![Rational::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|e| e.is_zero())
    }

    pub fn dot(&self, other: &RatVector) -> Rational {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        debug_assert_eq!(self.len(), other.len());
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        debug_assert_eq!(self.len(), other.len());
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, c: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|e| e * c).collect())
    }

    /// Smallest `c > 0` with `c·self` integral, together with that integer vector.
    pub fn clear_denominators(&self) -> (Int, IntVector) {
        let lcm = self
            .0
            .iter()
            .fold(Int::one(), |acc, e| acc.lcm(e.denom()));
        let ints = IntVector(
            self.0
                .iter()
                .map(|e| (e * Rational::from_integer(lcm.clone())).to_integer())
                .collect(),
        );
        (lcm, ints)
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Sign-safe floor of a rational.
pub fn floor_int(x: &Rational) -> Int {
    x.floor().to_integer()
}

/// Sign-safe ceiling of a rational.
pub fn ceil_int(x: &Rational) -> Int {
    x.ceil().to_integer()
}

/// Positive part test used all over: `x > 0`.
pub fn is_positive(x: &Rational) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_decompose_factors_out_gcd() {
        let (label, w) = primitive_decompose(&IntVector::from_i64(&[2, 4])).unwrap();
        assert_eq!(label, Int::from(2));
        assert_eq!(w, IntVector::from_i64(&[1, 2]));
    }

    #[test]
    fn primitive_decompose_keeps_primitive_vectors() {
        let (label, w) = primitive_decompose(&IntVector::from_i64(&[1, 1])).unwrap();
        assert_eq!(label, Int::from(1));
        assert_eq!(w, IntVector::from_i64(&[1, 1]));

        let (label, w) = primitive_decompose(&IntVector::from_i64(&[2, -1])).unwrap();
        assert_eq!(label, Int::from(1));
        assert_eq!(w, IntVector::from_i64(&[2, -1]));
    }

    #[test]
    fn primitive_decompose_rejects_zero() {
        assert_eq!(
            primitive_decompose(&IntVector::zeros(3)),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn primitive_decompose_roundtrip_on_seeded_vectors() {
        // label · w = v and gcd(w) = 1, over a deterministic sample.
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..200 {
            let n = 1 + (next() % 5) as usize;
            let v = IntVector(
                (0..n)
                    .map(|_| Int::from((next() % 41) as i64 - 20))
                    .collect(),
            );
            if v.is_zero() {
                continue;
            }
            let (label, w) = primitive_decompose(&v).unwrap();
            assert!(label.is_positive());
            assert_eq!(w.content(), Int::one());
            assert_eq!(w.scaled(&label), v);
        }
    }

    #[test]
    fn clear_denominators_gives_minimal_integral_multiple() {
        let v = RatVector(vec![ratio(1, 2), ratio(2, 3), rat(1)]);
        let (c, ints) = v.clear_denominators();
        assert_eq!(c, Int::from(6));
        assert_eq!(ints, IntVector::from_i64(&[3, 4, 6]));
    }

    #[test]
    fn rational_display_matches_serialization_contract() {
        assert_eq!(ratio(3, 4).to_string(), "3/4");
        assert_eq!(rat(-7).to_string(), "-7");
        assert_eq!(ratio(6, 4).to_string(), "3/2");
    }
}
