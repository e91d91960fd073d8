//! Exact coefficient rings.
//!
//! Incidence ring arithmetic is generic over [`Coefficient`], a num-traits
//! ring scalar that also knows which runtime [`CoefficientRing`] it belongs
//! to. Three carriers ship: [`BigInt`] for ℤ, [`BigRational`] for ℚ and
//! [`ModInt`] for ℤ/nℤ with the modulus chosen at runtime. Floating point
//! types are deliberately absent.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Descriptor of a coefficient ring, as stored in element files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientRing {
    Integers,
    IntMod { n: u64 },
    Rationals,
}

impl CoefficientRing {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CoefficientRing::IntMod { n } if n < 2 => Err(Error::input(format!("modulus must be at least 2, got {n}"))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Integers => f.write_str("Z"),
            CoefficientRing::IntMod { n } => write!(f, "Z/{n}Z"),
            CoefficientRing::Rationals => f.write_str("Q"),
        }
    }
}

/// An exact, associative ring scalar with unity.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Whether values of this type can live in `ring`.
    fn belongs_to(ring: &CoefficientRing) -> bool;

    /// The unity of `ring`.
    fn one_in(ring: &CoefficientRing) -> Self {
        let _ = ring;
        Self::one()
    }

    /// Parses a serialized coefficient.
    fn parse_in(ring: &CoefficientRing, s: &str) -> Result<Self>;

    /// Embeds an integer.
    fn from_i64_in(ring: &CoefficientRing, v: i64) -> Self;
}

impl Coefficient for BigInt {
    fn belongs_to(ring: &CoefficientRing) -> bool {
        matches!(ring, CoefficientRing::Integers)
    }

    fn parse_in(_: &CoefficientRing, s: &str) -> Result<Self> {
        s.trim().parse().map_err(|_| Error::input(format!("`{s}` is not an integer")))
    }

    fn from_i64_in(_: &CoefficientRing, v: i64) -> Self {
        BigInt::from(v)
    }
}

impl Coefficient for BigRational {
    fn belongs_to(ring: &CoefficientRing) -> bool {
        matches!(ring, CoefficientRing::Rationals)
    }

    fn parse_in(_: &CoefficientRing, s: &str) -> Result<Self> {
        let bad = || Error::input(format!("`{s}` is not a rational number"));
        match s.trim().split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(p, q))
            }
            None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
        }
    }

    fn from_i64_in(_: &CoefficientRing, v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// A residue modulo a runtime modulus.
///
/// The num-traits constructors `zero()` and `one()` cannot know the modulus,
/// so they produce an *unbound* integer (modulus 0) which adopts the modulus
/// of whatever it is combined with. Combining two bound values with different
/// moduli panics; [`IncidenceRing`](crate::IncidenceRing) prevents that by
/// rejecting cross-ring arithmetic first.
#[derive(Clone, Copy)]
pub struct ModInt {
    value: i128,
    modulus: u64,
}

impl ModInt {
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        ModInt { value: 0, modulus }.bound(value as i128)
    }

    pub fn modulus(&self) -> Option<u64> {
        (self.modulus != 0).then_some(self.modulus)
    }

    /// The canonical residue, or the raw integer when unbound.
    pub fn value(&self) -> i128 {
        self.value
    }

    fn bound(self, raw: i128) -> Self {
        let value = if self.modulus == 0 { raw } else { raw.rem_euclid(self.modulus as i128) };
        ModInt { value, modulus: self.modulus }
    }

    fn join(a: u64, b: u64) -> u64 {
        match (a, b) {
            (0, m) | (m, 0) => m,
            (m, k) if m == k => m,
            (m, k) => panic!("mixing residues modulo {m} and {k}"),
        }
    }

    fn combine(self, other: Self, f: impl FnOnce(i128, i128) -> i128) -> Self {
        let modulus = Self::join(self.modulus, other.modulus);
        let shell = ModInt { value: 0, modulus };
        let a = shell.bound(self.value).value;
        let b = shell.bound(other.value).value;
        shell.bound(f(a, b))
    }
}

impl PartialEq for ModInt {
    fn eq(&self, other: &Self) -> bool {
        let modulus = Self::join(self.modulus, other.modulus);
        let shell = ModInt { value: 0, modulus };
        shell.bound(self.value).value == shell.bound(other.value).value
    }
}

impl Eq for ModInt {}

impl fmt::Debug for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            0 => write!(f, "{}", self.value),
            m => write!(f, "{} mod {m}", self.value),
        }
    }
}

impl fmt::Display for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for ModInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for ModInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Mul for ModInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.combine(rhs, |a, b| a * b)
    }
}

impl Neg for ModInt {
    type Output = Self;
    fn neg(self) -> Self {
        self.bound(-self.value)
    }
}

impl Zero for ModInt {
    fn zero() -> Self {
        ModInt { value: 0, modulus: 0 }
    }

    fn is_zero(&self) -> bool {
        self.value == 0 || (self.modulus != 0 && self.value.rem_euclid(self.modulus as i128) == 0)
    }
}

impl One for ModInt {
    fn one() -> Self {
        ModInt { value: 1, modulus: 0 }
    }
}

impl Coefficient for ModInt {
    fn belongs_to(ring: &CoefficientRing) -> bool {
        matches!(ring, CoefficientRing::IntMod { .. })
    }

    fn one_in(ring: &CoefficientRing) -> Self {
        Self::from_i64_in(ring, 1)
    }

    fn parse_in(ring: &CoefficientRing, s: &str) -> Result<Self> {
        let v: i64 = s.trim().parse().map_err(|_| Error::input(format!("`{s}` is not an integer residue")))?;
        Ok(Self::from_i64_in(ring, v))
    }

    fn from_i64_in(ring: &CoefficientRing, v: i64) -> Self {
        match *ring {
            CoefficientRing::IntMod { n } => ModInt::new(v, n),
            _ => ModInt { value: v as i128, modulus: 0 },
        }
    }
}
