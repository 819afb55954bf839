//! Angular momentum quantum numbers stored as doubled integers.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Angular momentum quantum number `j`, stored as `2j` so that half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinJ {
    twice_j: u32,
}

impl SpinJ {
    pub const fn from_twice(twice_j: u32) -> Self {
        SpinJ { twice_j }
    }

    /// Integer `j`.
    pub const fn integer(j: u32) -> Self {
        SpinJ { twice_j: 2 * j }
    }

    pub const fn twice(self) -> u32 {
        self.twice_j
    }

    pub fn value(self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    /// Size of the `|j,m⟩` basis, `2j + 1`.
    pub const fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    pub const fn is_integer(self) -> bool {
        self.twice_j.is_multiple_of(2)
    }

    /// All levels `m = -j, -j+1, ..., j` in ascending order.
    pub fn levels(self) -> impl DoubleEndedIterator<Item = MLevel> + ExactSizeIterator {
        let tj = self.twice_j as i32;
        (0..self.dim()).map(move |k| MLevel {
            twice_m: 2 * k as i32 - tj,
        })
    }

    /// Level with basis index `idx` (`idx = j + m`).
    pub fn level_at(self, idx: usize) -> MLevel {
        debug_assert!(idx < self.dim());
        MLevel {
            twice_m: 2 * idx as i32 - self.twice_j as i32,
        }
    }

    /// Short label usable in file names: `10` or `21-2`.
    pub fn file_label(self) -> String {
        if self.is_integer() {
            format!("{}", self.twice_j / 2)
        } else {
            format!("{}-2", self.twice_j)
        }
    }
}

impl fmt::Display for SpinJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

/// Accepts `10`, `21/2` or `10.5`; all denote `j` itself.
impl FromStr for SpinJ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = |why: &str| Error::parse(t, why);
        if let Some((num, den)) = t.split_once('/') {
            let num: u32 = num
                .trim()
                .parse()
                .map_err(|_| bad("numerator is not a non-negative integer"))?;
            match den.trim() {
                "1" => num
                    .checked_mul(2)
                    .map(SpinJ::from_twice)
                    .ok_or_else(|| bad("too large")),
                "2" => Ok(SpinJ::from_twice(num)),
                _ => Err(bad("denominator must be 1 or 2")),
            }
        } else if let Ok(n) = t.parse::<u32>() {
            n.checked_mul(2)
                .map(SpinJ::from_twice)
                .ok_or_else(|| bad("too large"))
        } else {
            let x: f64 = t.parse().map_err(|_| bad("not a number"))?;
            let twice = 2.0 * x;
            if twice.is_nan() || twice < 0.0 || twice.fract() != 0.0 || twice > u32::MAX as f64 {
                return Err(bad("j must be a non-negative multiple of 1/2"));
            }
            Ok(SpinJ::from_twice(twice as u32))
        }
    }
}

/// Magnetic quantum number `m`, stored as `2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MLevel {
    twice_m: i32,
}

impl MLevel {
    /// Validated level for spin `j`.
    pub fn new(j: SpinJ, twice_m: i32) -> Result<Self> {
        let tj = j.twice() as i64;
        let tm = twice_m as i64;
        if tm.abs() > tj || (tj - tm) % 2 != 0 {
            return Err(Error::domain(format!(
                "2m = {twice_m} is not a level of j = {j}"
            )));
        }
        Ok(MLevel { twice_m })
    }

    /// Integer `m`, validated against `j`.
    pub fn integer(j: SpinJ, m: i32) -> Result<Self> {
        Self::new(j, 2 * m)
    }

    pub const fn twice(self) -> i32 {
        self.twice_m
    }

    pub fn value(self) -> f64 {
        self.twice_m as f64 / 2.0
    }

    /// Basis index `j + m` for spin `j`.
    pub fn index(self, j: SpinJ) -> usize {
        ((self.twice_m + j.twice() as i32) / 2) as usize
    }
}

impl fmt::Display for MLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_m % 2 == 0 {
            write!(f, "{}", self.twice_m / 2)
        } else {
            write!(f, "{}/2", self.twice_m)
        }
    }
}
