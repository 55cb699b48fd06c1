use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    /// Accepts only values that are exact multiples of 1/2.
    pub fn from_f64(value: f64) -> Result<Self> {
        let twice = 2.0 * value;
        if !twice.is_finite() || (twice - twice.round()).abs() > 1e-9 || twice.abs() > 1e9 {
            return Err(Error::InvalidQuantumNumbers(format!("{value} is not a half-integer")));
        }
        Ok(HalfInt(twice.round() as i32))
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl TryFrom<f64> for HalfInt {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        HalfInt::from_f64(value)
    }
}

impl From<HalfInt> for f64 {
    fn from(h: HalfInt) -> f64 {
        h.value()
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = if self.is_integer() {
            (self.0 / 2).to_string()
        } else {
            format!("{}/2", self.0)
        };
        f.pad(&text)
    }
}

/// Collective spin `j = N/2` of an ensemble of `N` spin-1/2 particles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SpinQuantum {
    twice_j: u32,
}

impl SpinQuantum {
    pub const fn from_twice(twice_j: u32) -> Self {
        Self { twice_j }
    }

    /// Symmetric sector of `n` spin-1/2 particles.
    pub const fn from_particles(n: u32) -> Self {
        Self { twice_j: n }
    }

    pub fn new(j: f64) -> Result<Self> {
        match HalfInt::from_f64(j) {
            Ok(h) if h.twice() >= 0 => Ok(Self {
                twice_j: h.twice() as u32,
            }),
            _ => Err(Error::InvalidSpin(j)),
        }
    }

    pub const fn twice(self) -> u32 {
        self.twice_j
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    pub fn as_half(self) -> HalfInt {
        HalfInt::from_twice(self.twice_j as i32)
    }

    /// Number of spin-1/2 particles, `2j`.
    pub const fn particles(self) -> u32 {
        self.twice_j
    }

    pub const fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    /// `m = j, j-1, ..., -j`.
    pub fn m_values(self) -> impl DoubleEndedIterator<Item = HalfInt> + ExactSizeIterator {
        let tj = self.twice_j as i32;
        (0..self.twice_j as i32 + 1).map(move |k| HalfInt::from_twice(tj - 2 * k))
    }

    pub fn contains(self, m: HalfInt) -> bool {
        let tj = self.twice_j as i32;
        m.twice().abs() <= tj && (tj - m.twice()) % 2 == 0
    }

    pub fn index_of(self, m: HalfInt) -> Option<usize> {
        self.contains(m)
            .then(|| ((self.twice_j as i32 - m.twice()) / 2) as usize)
    }
}

impl TryFrom<f64> for SpinQuantum {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        SpinQuantum::new(value)
    }
}

impl From<SpinQuantum> for f64 {
    fn from(j: SpinQuantum) -> f64 {
        j.value()
    }
}

impl fmt::Display for SpinQuantum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_half().fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_parsing() {
        assert_eq!(SpinQuantum::new(1.5).unwrap().twice(), 3);
        assert_eq!(SpinQuantum::new(0.0).unwrap().dim(), 1);
        assert_eq!(SpinQuantum::new(0.3), Err(Error::InvalidSpin(0.3)));
        assert_eq!(SpinQuantum::new(-1.0), Err(Error::InvalidSpin(-1.0)));
        assert_eq!(SpinQuantum::from_particles(7).value(), 3.5);
    }

    #[test]
    fn projections_descend() {
        let j = SpinQuantum::from_twice(3);
        let ms: Vec<f64> = j.m_values().map(HalfInt::value).collect();
        assert_eq!(ms, vec![1.5, 0.5, -0.5, -1.5]);
        assert_eq!(j.index_of(HalfInt::from_twice(-1)), Some(2));
        assert_eq!(j.index_of(HalfInt::from_twice(0)), None);
        assert_eq!(j.index_of(HalfInt::from_twice(5)), None);
    }

    #[test]
    fn serde_as_number() {
        let j: SpinQuantum = serde_json::from_str("2.5").unwrap();
        assert_eq!(j.twice(), 5);
        assert_eq!(serde_json::to_string(&j).unwrap(), "2.5");
        assert!(serde_json::from_str::<SpinQuantum>("0.25").is_err());
        assert_eq!(HalfInt::from_twice(-3).to_string(), "-3/2");
    }
}
