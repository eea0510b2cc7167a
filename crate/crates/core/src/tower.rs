//! Numbers too large for `f64`, written as iterated powers of two.
//!
//! The level constants of the tree family satisfy log₄E_k = 2^(log₄E_{k−1}),
//! so their logarithms are towers of twos over 20. Only ordering and the
//! first few exact values are ever needed.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest `top` for which 2^top is finite in double precision.
const MAX_EXP2: f64 = 1023.0;

/// The value exp₂ applied `levels` times to `top`.
///
/// Normalized: `levels > 0` only when 2^top would overflow, so a tower with
/// more levels is always the larger number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tower {
    pub levels: u32,
    pub top: f64,
}

impl Tower {
    pub fn new(levels: u32, top: f64) -> Tower {
        let mut t = Tower { levels, top };
        while t.levels > 0 && t.top < MAX_EXP2 {
            t.top = t.top.exp2();
            t.levels -= 1;
        }
        t
    }

    pub fn from_f64(x: f64) -> Tower {
        Tower { levels: 0, top: x }
    }

    /// 2^self.
    pub fn exp2(self) -> Tower {
        Tower::new(self.levels + 1, self.top)
    }

    pub fn to_f64(self) -> Option<f64> {
        (self.levels == 0).then_some(self.top)
    }

    /// The value as an integer, when it is one and small enough to be exact.
    pub fn exact_integer(self) -> Option<u128> {
        let x = self.to_f64()?;
        (x >= 0.0 && x.fract() == 0.0 && x < 2f64.powi(53)).then_some(x as u128)
    }

    /// self + x for a modest x. Below the resolution of a tower with one or
    /// more levels the sum is the tower itself.
    pub fn add_small(self, x: f64) -> Tower {
        match self.levels {
            0 => Tower::from_f64(self.top + x),
            _ => self,
        }
    }

    /// log₂ of the value, one level down.
    pub fn log2(self) -> Tower {
        match self.levels {
            0 => Tower::from_f64(self.top.log2()),
            l => Tower { levels: l - 1, top: self.top },
        }
    }
}

impl PartialOrd for Tower {
    fn partial_cmp(&self, other: &Tower) -> Option<Ordering> {
        match self.levels.cmp(&other.levels) {
            Ordering::Equal => self.top.partial_cmp(&other.top),
            o => Some(o),
        }
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.levels {
            write!(f, "2^")?;
        }
        if self.levels > 0 {
            write!(f, "(")?;
        }
        match self.exact_integer() {
            Some(n) => write!(f, "{n}")?,
            None => write!(f, "{}", self.top)?,
        }
        if self.levels > 0 {
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_folds_small_levels() {
        let t = Tower::new(1, 20.0);
        assert_eq!(t, Tower::from_f64(1048576.0));
        assert_eq!(t.exact_integer(), Some(1 << 20));
        let big = t.exp2();
        assert_eq!(big, Tower { levels: 1, top: 1048576.0 });
        assert_eq!(big.to_f64(), None);
        assert_eq!(big.log2(), t);
    }

    #[test]
    fn ordering_by_levels_then_top() {
        let a = Tower::new(1, 2000.0);
        let b = Tower::from_f64(f64::MAX);
        assert!(a > b);
        assert!(Tower::new(2, 2000.0) > Tower::new(1, 1e300));
        assert!(Tower::new(1, 2001.0) > a);
        assert_eq!(a.add_small(5.0), a);
        assert_eq!(a.to_string(), "2^(2000)");
    }
}
