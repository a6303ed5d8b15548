//! The torus C/<1, eta> with eta = (1 + i*sqrt 7)/2, in basis coordinates.

use std::fmt;

use crate::angle::{format_q, frac, q, Q};
use crate::geom::P2;

/// Point of the torus, reduced to [0,1)^2 in the basis (1, eta).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusPoint(P2);

impl TorusPoint {
    pub fn new(u: Q, v: Q) -> TorusPoint {
        TorusPoint(P2::new(frac(u), frac(v)))
    }

    pub fn from_lift(p: P2) -> TorusPoint {
        TorusPoint::new(p.x, p.y)
    }

    pub fn u(self) -> Q {
        self.0.x
    }

    pub fn v(self) -> Q {
        self.0.y
    }

    pub fn lift(self) -> P2 {
        self.0
    }

    pub fn eta_multiplication(self) -> TorusPoint {
        TorusPoint::from_lift(eta_mul(self.0))
    }

    /// The two solutions of eta*w = self.
    pub fn eta_preimages(self) -> [TorusPoint; 2] {
        let w = eta_inv(self.0);
        [TorusPoint::from_lift(w), TorusPoint::from_lift(w + eta_inv(P2::ints(1, 0)))]
    }

    pub fn embed(self) -> (f64, f64) {
        embed(self.0)
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_q(self.0.x), format_q(self.0.y))
    }
}

/// Matrix of multiplication by eta in the basis (1, eta): eta^2 = eta - 2.
pub const ETA_MATRIX: [[i128; 2]; 2] = [[0, -2], [1, 1]];

pub fn eta_mul(p: P2) -> P2 {
    P2::new(p.y * -2, p.x + p.y)
}

pub fn eta_inv(p: P2) -> P2 {
    P2::new((p.x + p.y * 2) / 2, -p.x / 2)
}

/// The covering z -> eta*z + 1/2 of the sphere torus/(z ~ -z).
pub fn cover(p: P2) -> P2 {
    eta_mul(p) + P2::new(q(1, 2), Q::from_integer(0))
}

/// Embedding into C of the lift u + v*eta.
pub fn embed(p: P2) -> (f64, f64) {
    let (u, v) = p.to_f64();
    (u + 0.5 * v, v * 7f64.sqrt() / 2.0)
}

/// Multiplication by the branch constant s in {1,-1}.
pub(crate) fn signed(s: i8, p: P2) -> P2 {
    if s > 0 {
        p
    } else {
        -p
    }
}

pub(crate) fn half() -> P2 {
    P2::new(q(1, 2), Q::from_integer(0))
}
