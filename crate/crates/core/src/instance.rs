//! Validated Frobenius instances: a primitive positive integer vector and a
//! multiplicity.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Greatest common divisor of all entries.
pub fn gcd_vector(entries: &[i128]) -> Result<i128> {
    if entries.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(entries.iter().fold(0, |g, &e| arith::gcd(g, e)))
}

/// A primitive vector `a` of `n >= 2` positive integers.
///
/// Entries are kept exactly as given: no sorting, no deduplication. Code that
/// needs the smallest or largest entry asks for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i128>", into = "Vec<i128>")]
pub struct InputVector {
    entries: Vec<i128>,
}

impl InputVector {
    pub fn new(entries: Vec<i128>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::DimensionTooSmall { n: entries.len() });
        }
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, &v)| v <= 0) {
            return Err(Error::NonPositive { index, value });
        }
        let gcd = gcd_vector(&entries)?;
        if gcd != 1 {
            return Err(Error::NonPrimitive { gcd });
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[i128] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn min(&self) -> i128 {
        *self.entries.iter().min().expect("n >= 2")
    }

    pub fn max(&self) -> i128 {
        *self.entries.iter().max().expect("n >= 2")
    }

    /// The first `n - 1` entries, the coefficient vector of the Kannan simplex.
    pub fn prefix(&self) -> &[i128] {
        &self.entries[..self.n() - 1]
    }

    /// The last entry, which plays the role of the lattice modulus.
    pub fn last(&self) -> i128 {
        self.entries[self.n() - 1]
    }

    pub fn sum(&self) -> Result<i128> {
        arith::sum(&self.entries, "sum of entries")
    }

    pub fn product(&self) -> Result<i128> {
        arith::product(&self.entries, "product of entries")
    }

    /// `(n-1)! * a_1 * ... * a_n`, the ratio det(lattice) / vol(simplex).
    pub fn scaled_product(&self) -> Result<i128> {
        let f = arith::factorial(self.n() as u32 - 1)?;
        arith::mul(f, self.product()?, "(n-1)! * product of entries")
    }

    /// Cyclic left rotation by `k`, so entry `k` becomes the first one.
    pub fn rotated(&self, k: usize) -> Self {
        let mut entries = self.entries.clone();
        entries.rotate_left(k % self.n());
        Self { entries }
    }

    /// True when any entry equals 1.
    pub fn has_unit_entry(&self) -> bool {
        self.entries.contains(&1)
    }

    pub fn has_repeated_entries(&self) -> bool {
        let mut sorted = self.entries.clone();
        sorted.sort_unstable();
        sorted.windows(2).any(|w| w[0] == w[1])
    }
}

impl TryFrom<Vec<i128>> for InputVector {
    type Error = Error;

    fn try_from(entries: Vec<i128>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<InputVector> for Vec<i128> {
    fn from(a: InputVector) -> Self {
        a.entries
    }
}

impl std::fmt::Display for InputVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(i128::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The multiplicity `s >= 1`: how many distinct representations are demanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i128", into = "u32")]
pub struct Multiplicity(u32);

impl Multiplicity {
    pub const ONE: Multiplicity = Multiplicity(1);

    pub fn new(s: i128) -> Result<Self> {
        match u32::try_from(s) {
            Ok(v) if v >= 1 => Ok(Self(v)),
            _ => Err(Error::InvalidMultiplicity { s }),
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_i128(self) -> i128 {
        self.0 as i128
    }
}

impl TryFrom<i128> for Multiplicity {
    type Error = Error;

    fn try_from(s: i128) -> Result<Self> {
        Self::new(s)
    }
}

impl From<Multiplicity> for u32 {
    fn from(s: Multiplicity) -> Self {
        s.0
    }
}

impl std::fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Validate a raw instance. Entries are never reordered or deduplicated.
pub fn validate_instance(entries: &[i128], s: i128) -> Result<(InputVector, Multiplicity)> {
    let a = InputVector::new(entries.to_vec())?;
    let s = Multiplicity::new(s)?;
    Ok((a, s))
}
