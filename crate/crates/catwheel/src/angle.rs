use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

/// Exact rational number used throughout the combinatorial modules.
pub type Q = num_rational::Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// Fractional part in [0, 1).
pub fn frac(x: Q) -> Q {
    x - x.floor()
}

/// A point of the circle R/Z stored as a reduced rational in [0, 1).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(Q);

impl Angle {
    pub fn new(x: Q) -> Angle {
        Angle(frac(x))
    }

    pub fn frac(n: i128, d: i128) -> Angle {
        Angle::new(Q::new(n, d))
    }

    pub fn zero() -> Angle {
        Angle(Q::zero())
    }

    pub fn value(self) -> Q {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    pub fn shift(self, t: Q) -> Angle {
        Angle::new(self.0 + t)
    }

    pub fn times(self, d: i128) -> Angle {
        Angle::new(self.0 * d)
    }

    /// Counterclockwise distance from `self` to `other`, in [0, 1).
    pub fn ccw_to(self, other: Angle) -> Q {
        frac(other.0 - self.0)
    }

    /// Shortest distance along the circle.
    pub fn dist(self, other: Angle) -> Q {
        let d = self.ccw_to(other);
        let e = Q::one() - d;
        if d.is_zero() || d < e {
            d
        } else {
            e
        }
    }

    /// True when `self` lies in the open counterclockwise arc from `a` to `b`.
    pub fn in_open_arc(self, a: Angle, b: Angle) -> bool {
        let t = a.ccw_to(self);
        let len = a.ccw_to(b);
        t > Q::zero() && (len.is_zero() || t < len)
    }

    pub fn denom(self) -> i128 {
        *self.0.denom()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_q(f, self.0)
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_q(f, self.0)
    }
}

fn write_q(f: &mut fmt::Formatter<'_>, x: Q) -> fmt::Result {
    if x.is_integer() {
        write!(f, "{}", x.numer())
    } else {
        write!(f, "{}/{}", x.numer(), x.denom())
    }
}

pub fn format_q(x: Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses "p/q", an integer, or a finite decimal such as "0.141".
pub fn parse_q(s: &str) -> Result<Q, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || fp.len() > 18 || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip: i128 = if ip.is_empty() || ip == "-" { 0 } else { ip.parse().map_err(|_| bad())? };
        let den = 10i128.pow(fp.len() as u32);
        let f: i128 = fp.parse().map_err(|_| bad())?;
        let mag = ip.abs() * den + f;
        return Ok(Q::new(if neg { -mag } else { mag }, den));
    }
    let n: i128 = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

impl FromStr for Angle {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Angle, ParseError> {
        parse_q(s).map(Angle::new)
    }
}

/// Least common multiple of the denominators, handy for integer rescaling.
pub fn common_denom(xs: &[Q]) -> i128 {
    xs.iter().fold(1i128, |acc, x| acc.lcm(x.denom()))
}

pub fn q_abs(x: Q) -> Q {
    x.abs()
}
