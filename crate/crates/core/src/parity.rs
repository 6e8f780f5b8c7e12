use std::fmt;
use std::ops::{Add, Mul};

/// Z₂-grading of a value, with `Zero` for the additive identity (which is
/// both even and odd) and `Mixed` for inhomogeneous values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Zero,
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn is_homogeneous(self) -> bool {
        self != Parity::Mixed
    }

    /// Even or zero.
    pub fn is_even(self) -> bool {
        matches!(self, Parity::Zero | Parity::Even)
    }

    /// Odd or zero.
    pub fn is_odd(self) -> bool {
        matches!(self, Parity::Zero | Parity::Odd)
    }

    /// `0` for even, `1` for odd, `None` when mixed. Zero counts as even.
    pub fn bit(self) -> Option<u8> {
        match self {
            Parity::Zero | Parity::Even => Some(0),
            Parity::Odd => Some(1),
            Parity::Mixed => None,
        }
    }

    pub fn from_bit(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        use Parity::*;
        match (self, rhs) {
            (Zero, p) | (p, Zero) => p,
            (Even, Even) => Even,
            (Odd, Odd) => Odd,
            _ => Mixed,
        }
    }
}

impl Mul for Parity {
    type Output = Parity;

    fn mul(self, rhs: Parity) -> Parity {
        use Parity::*;
        match (self, rhs) {
            (Zero, _) | (_, Zero) => Zero,
            (Mixed, _) | (_, Mixed) => Mixed,
            (a, b) => Parity::from_bit(a != b),
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Zero => "zero",
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "mixed",
        })
    }
}
