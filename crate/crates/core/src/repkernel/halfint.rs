use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A spin or magnetic label stored as twice its value, so `1/2` is `HalfInt(1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);
    pub const THREE_HALVES: HalfInt = HalfInt(3);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub fn from_int(value: i32) -> Self {
        HalfInt(2 * value)
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

    /// `2j + 1` for a spin label.
    pub fn dim(self) -> usize {
        debug_assert!(self.0 >= 0);
        (self.0 + 1) as usize
    }

    /// Magnetic labels `j, j-1, ..., -j`.
    pub fn projections(self) -> impl DoubleEndedIterator<Item = HalfInt> + Clone {
        let j = self.0;
        (0..=j.max(-1)).map(move |k| HalfInt(j - 2 * k))
    }

    /// Spins `0, 1/2, ..., self`.
    pub fn spins_up_to(self) -> impl Iterator<Item = HalfInt> + Clone {
        (0..=self.0.max(-1)).map(HalfInt)
    }

    /// Whether `m` is a valid magnetic label for spin `self`.
    pub fn admits(self, m: HalfInt) -> bool {
        self.0 >= 0 && m.0.abs() <= self.0 && (self.0 - m.0) % 2 == 0
    }

    /// `j - m` as an integer; panics on parity mismatch.
    pub fn int_diff(self, m: HalfInt) -> i32 {
        let d = self.0 - m.0;
        assert!(d % 2 == 0, "{self} - {m} is not an integer");
        d / 2
    }
}

/// `(-1)^k` for integer `k` of either sign.
pub fn parity_sign(k: i32) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Triangle condition with integer perimeter.
pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.0, b.0, c.0);
    a >= 0 && b >= 0 && c >= 0 && c <= a + b && a <= b + c && b <= a + c && (a + b + c) % 2 == 0
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}
