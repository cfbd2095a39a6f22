use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A half-integer quantum number, stored as twice its value.
///
/// Spin projections and total spins are integers for even particle numbers
/// and half-odd-integers for odd ones; storing `2x` keeps both exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Half(i64);

impl Half {
    /// From twice the value: `Half::from_doubled(3)` is 3/2.
    pub fn from_doubled(doubled: i64) -> Self {
        Half(doubled)
    }

    /// From an integer value.
    pub fn from_int(value: i64) -> Self {
        Half(2 * value)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// True when `self` can be a spin projection of total spin `s`,
    /// i.e. |m| <= s and both live on the same half-integer lattice.
    pub fn is_projection_of(self, s: Half) -> bool {
        self.0.abs() <= s.0 && (self.0 - s.0) % 2 == 0
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, rhs: Half) -> Half {
        Half(self.0 + rhs.0)
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, rhs: Half) -> Half {
        Half(self.0 - rhs.0)
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}
