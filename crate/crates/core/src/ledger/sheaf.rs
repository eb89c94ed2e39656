//! Symbolic sheaf names for the ledger's facts.
//!
//! Twists are tracked by the exponent `n` of the symbolic divisor `p^n D`
//! (with `D = K + Delta`) where that matters; sheaves whose cohomology
//! only depends on an integer degree are keyed by that degree directly.
//! Frobenius pushforwards are normalised away: a finite pushforward does
//! not change cohomology dimensions over a perfect field.

use std::fmt;

use num::bigint::BigInt;

/// A sheaf tracked by the ledger, on the plane with the four marked lines.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sheaf {
    /// `O(d)`.
    Line(BigInt),
    /// `(+)_{i=1..4} O_{L_i}(d)`: the restriction bundle of the residue
    /// sequence, four line bundles on projective lines.
    QuadP1(BigInt),
    /// `Omega^1(d)`.
    Omega1(BigInt),
    /// `Omega^1(log Delta_red)(d)`.
    Omega1Log(BigInt),
    /// `B_m Omega^1(log Delta_red)(p^n D)`, `1 <= m <= n`.
    BOmega1 { m: u32, n: u32 },
    /// `Z_m Omega^1(log Delta_red)(p^n D)`, `1 <= m <= n`.
    ZOmega1 { m: u32, n: u32 },
    /// `B_1 Omega^2(log Delta_red)(p^n D)`, `n >= 1`.
    B1Omega2 { n: u32 },
}

impl fmt::Display for Sheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sheaf::Line(d) => write!(f, "O({d})"),
            Sheaf::QuadP1(d) => write!(f, "(+)O_L({d})"),
            Sheaf::Omega1(d) => write!(f, "Omega1({d})"),
            Sheaf::Omega1Log(d) => write!(f, "Omega1log({d})"),
            Sheaf::BOmega1 { m, n } => write!(f, "B{m}Omega1log(p^{n}D)"),
            Sheaf::ZOmega1 { m, n } => write!(f, "Z{m}Omega1log(p^{n}D)"),
            Sheaf::B1Omega2 { n } => write!(f, "B1Omega2log(p^{n}D)"),
        }
    }
}

/// A fact key: sheaf plus cohomological degree.
pub type FactKey = (Sheaf, u8);

pub fn fact_name(key: &FactKey) -> String {
    format!("h^{}({})", key.1, key.0)
}
