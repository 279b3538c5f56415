//! Game clocks: ordinals below ω² in Cantor normal form, plus a distinguished
//! infinite value that stands for the clockless game.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// `ω·omega + finite`, or [`ClockOrdinal::Infinity`].
///
/// The derived order is the ordinal order: the ω coefficient is compared
/// first, then the finite part, and `Infinity` sits above every ordinal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClockOrdinal {
    Below { omega: u64, finite: u64 },
    Infinity,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid clock literal `{0}` (expected k, w, w*k, w*k+m or inf)")]
pub struct ClockParseError(pub String);

impl ClockOrdinal {
    pub const ZERO: ClockOrdinal = ClockOrdinal::Below { omega: 0, finite: 0 };
    pub const OMEGA: ClockOrdinal = ClockOrdinal::Below { omega: 1, finite: 0 };

    pub const fn new(omega: u64, finite: u64) -> Self {
        ClockOrdinal::Below { omega, finite }
    }

    pub const fn finite(n: u64) -> Self {
        ClockOrdinal::Below { omega: 0, finite: n }
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ClockOrdinal::Below { omega: 0, .. })
    }

    /// Finite value, if the ordinal is a natural number.
    pub fn as_finite(self) -> Option<u64> {
        match self {
            ClockOrdinal::Below { omega: 0, finite } => Some(finite),
            _ => None,
        }
    }

    pub fn is_limit(self) -> bool {
        matches!(self, ClockOrdinal::Below { omega, finite: 0 } if omega > 0)
    }

    /// `Some(γ)` when `self = γ + 1`.
    pub fn predecessor(self) -> Option<Self> {
        match self {
            ClockOrdinal::Below { omega, finite } if finite > 0 => {
                Some(ClockOrdinal::Below { omega, finite: finite - 1 })
            }
            _ => None,
        }
    }

    /// Ordinal successor; `Infinity` is absorbing.
    pub fn successor(self) -> Self {
        match self {
            ClockOrdinal::Below { omega, finite } => ClockOrdinal::Below { omega, finite: finite + 1 },
            ClockOrdinal::Infinity => ClockOrdinal::Infinity,
        }
    }

    /// Every ordinal strictly below `self` whose finite part is at most
    /// `finite_cap`, in decreasing order. `Infinity` has no enumeration.
    pub fn choices_below(self, finite_cap: u64) -> Vec<ClockOrdinal> {
        let ClockOrdinal::Below { omega, finite } = self else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for b in (0..finite).rev() {
            if b <= finite_cap {
                out.push(ClockOrdinal::new(omega, b));
            }
        }
        for a in (0..omega).rev() {
            for b in (0..=finite_cap).rev() {
                out.push(ClockOrdinal::new(a, b));
            }
        }
        out
    }
}

/// Three-way ordinal comparison.
pub fn ordinal_compare(a: ClockOrdinal, b: ClockOrdinal) -> Ordering {
    a.cmp(&b)
}

/// `ω·beta`.
pub fn omega_times(beta: u64) -> ClockOrdinal {
    ClockOrdinal::new(beta, 0)
}

impl fmt::Display for ClockOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClockOrdinal::Infinity => write!(f, "inf"),
            ClockOrdinal::Below { omega: 0, finite } => write!(f, "{finite}"),
            ClockOrdinal::Below { omega, finite } => {
                if omega == 1 {
                    write!(f, "w")?;
                } else {
                    write!(f, "w*{omega}")?;
                }
                if finite > 0 {
                    write!(f, "+{finite}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for ClockOrdinal {
    type Err = ClockParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ClockParseError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "inf" {
            return Ok(ClockOrdinal::Infinity);
        }
        let num = |x: &str| x.parse::<u64>().map_err(|_| err());
        let Some(rest) = t.strip_prefix('w') else {
            return Ok(ClockOrdinal::finite(num(&t)?));
        };
        let (coeff, finite) = match rest.split_once('+') {
            Some((c, m)) => (c, num(m)?),
            None => (rest, 0),
        };
        let omega = match coeff {
            "" => 1,
            c => num(c.strip_prefix('*').ok_or_else(err)?)?,
        };
        Ok(ClockOrdinal::new(omega, finite))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_examples() {
        assert_eq!(ordinal_compare(ClockOrdinal::new(2, 3), ClockOrdinal::new(3, 0)), Ordering::Less);
        assert_eq!(ordinal_compare(ClockOrdinal::ZERO, ClockOrdinal::ZERO), Ordering::Equal);
        assert_eq!(ordinal_compare(ClockOrdinal::Infinity, ClockOrdinal::new(9, 9)), Ordering::Greater);
    }

    #[test]
    fn omega_times_examples() {
        assert_eq!(omega_times(0), ClockOrdinal::ZERO);
        assert_eq!(omega_times(1), ClockOrdinal::OMEGA);
        assert_eq!(omega_times(3), ClockOrdinal::new(3, 0));
        for b in 0..20 {
            assert!(omega_times(b) < omega_times(b + 1));
        }
    }

    #[test]
    fn literals_round_trip() {
        for (lit, v) in [
            ("0", ClockOrdinal::ZERO),
            ("7", ClockOrdinal::finite(7)),
            ("w", ClockOrdinal::OMEGA),
            ("w+1", ClockOrdinal::new(1, 1)),
            ("w*2", ClockOrdinal::new(2, 0)),
            ("w*2+3", ClockOrdinal::new(2, 3)),
            ("inf", ClockOrdinal::Infinity),
        ] {
            assert_eq!(lit.parse::<ClockOrdinal>().unwrap(), v);
            assert_eq!(v.to_string(), lit);
        }
        assert!("w*".parse::<ClockOrdinal>().is_err());
        assert!("x".parse::<ClockOrdinal>().is_err());
        assert!("w-1".parse::<ClockOrdinal>().is_err());
    }

    #[test]
    fn choices_below_omega_plus_one() {
        let c = ClockOrdinal::new(1, 1).choices_below(2);
        assert_eq!(
            c,
            vec![
                ClockOrdinal::new(1, 0),
                ClockOrdinal::finite(2),
                ClockOrdinal::finite(1),
                ClockOrdinal::finite(0)
            ]
        );
        assert!(ClockOrdinal::ZERO.choices_below(5).is_empty());
    }

    #[test]
    fn total_order_is_consistent() {
        let vals: Vec<_> = (0..3)
            .flat_map(|a| (0..3).map(move |b| ClockOrdinal::new(a, b)))
            .chain([ClockOrdinal::Infinity])
            .collect();
        for x in &vals {
            for y in &vals {
                assert_eq!(ordinal_compare(*x, *y), ordinal_compare(*y, *x).reverse());
                for z in &vals {
                    if x <= y && y <= z {
                        assert!(x <= z);
                    }
                }
            }
        }
    }
}
