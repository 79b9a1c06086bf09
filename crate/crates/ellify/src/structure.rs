//! The six structure classes and their bookkeeping: which 2x2 matrix and
//! sign realize each one, which placement condition applies for a given
//! grade of the target, and how the star acts on individual coefficients.

use std::fmt;

use crate::error::{Error, Result};
use crate::matpoly::StarFlavor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Symmetric,
    SkewSymmetric,
    Even,
    Odd,
    Palindromic,
    AntiPalindromic,
}

impl StructureKind {
    pub const ALL: [StructureKind; 6] = [
        StructureKind::Symmetric,
        StructureKind::SkewSymmetric,
        StructureKind::Even,
        StructureKind::Odd,
        StructureKind::Palindromic,
        StructureKind::AntiPalindromic,
    ];

    pub fn cli_name(self) -> &'static str {
        match self {
            StructureKind::Symmetric => "sym",
            StructureKind::SkewSymmetric => "skew",
            StructureKind::Even => "even",
            StructureKind::Odd => "odd",
            StructureKind::Palindromic => "palin",
            StructureKind::AntiPalindromic => "antipalin",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "sym" | "symmetric" => StructureKind::Symmetric,
            "skew" | "skew-symmetric" => StructureKind::SkewSymmetric,
            "even" => StructureKind::Even,
            "odd" => StructureKind::Odd,
            "palin" | "palindromic" => StructureKind::Palindromic,
            "antipalin" | "anti-palindromic" => StructureKind::AntiPalindromic,
            other => return Err(Error::Parse(format!("unknown structure `{other}`"))),
        })
    }
}

/// One of the three named 2x2 matrices driving the six structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedMobius {
    /// The identity.
    A1,
    /// diag(-1, 1), the sign flip of the variable.
    A2,
    /// The antidiagonal swap, which induces the reversal.
    A3,
}

/// The sign in front of the polynomial inside the transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn apply_i64(self, v: i64) -> i64 {
        match self {
            Sign::Plus => v,
            Sign::Minus => -v,
        }
    }
}

/// Which placement condition ties the middle block to the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionKind {
    /// Anti-diagonal sum.
    AS,
    /// Anti-diagonal signed sum.
    ASS,
    /// Diagonal sum.
    DS,
}

impl ConditionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConditionKind::AS => "AS",
            ConditionKind::ASS => "ASS",
            ConditionKind::DS => "DS",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "AS" => ConditionKind::AS,
            "ASS" => ConditionKind::ASS,
            "DS" => ConditionKind::DS,
            other => return Err(Error::Parse(format!("unknown condition kind `{other}`"))),
        })
    }
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A structure class together with the star flavor it is read under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StructureTag {
    pub kind: StructureKind,
    pub flavor: StarFlavor,
}

impl StructureTag {
    pub fn new(kind: StructureKind, flavor: StarFlavor) -> Self {
        StructureTag { kind, flavor }
    }

    /// The named matrix realizing the class.
    pub fn mobius_name(self) -> NamedMobius {
        match self.kind {
            StructureKind::Symmetric | StructureKind::SkewSymmetric => NamedMobius::A1,
            StructureKind::Even | StructureKind::Odd => NamedMobius::A2,
            StructureKind::Palindromic | StructureKind::AntiPalindromic => NamedMobius::A3,
        }
    }

    /// The sign: plus for symmetric/even/palindromic, minus for the rest.
    pub fn sign(self) -> Sign {
        match self.kind {
            StructureKind::Symmetric | StructureKind::Even | StructureKind::Palindromic => {
                Sign::Plus
            }
            _ => Sign::Minus,
        }
    }

    /// The placement condition for a degree-`ell` construction. The
    /// alternating structures switch on the parity of `ell`.
    pub fn condition_kind(self, ell: usize) -> ConditionKind {
        match self.kind {
            StructureKind::Symmetric | StructureKind::SkewSymmetric => ConditionKind::AS,
            StructureKind::Even | StructureKind::Odd => {
                if ell % 2 == 0 {
                    ConditionKind::AS
                } else {
                    ConditionKind::ASS
                }
            }
            StructureKind::Palindromic | StructureKind::AntiPalindromic => ConditionKind::DS,
        }
    }

    /// Coefficient-level consequence of the structure on a grade-k
    /// polynomial: `P_j^* = sign * P_partner`.
    pub fn star_partner(self, j: usize, k: usize) -> (usize, i64) {
        match self.kind {
            StructureKind::Symmetric => (j, 1),
            StructureKind::SkewSymmetric => (j, -1),
            StructureKind::Even => (j, if j % 2 == 0 { 1 } else { -1 }),
            StructureKind::Odd => (j, if j % 2 == 0 { -1 } else { 1 }),
            StructureKind::Palindromic => (k - j, 1),
            StructureKind::AntiPalindromic => (k - j, -1),
        }
    }
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let star = match self.flavor {
            StarFlavor::Transpose => "T",
            StarFlavor::ConjugateTranspose => "*",
        };
        write!(f, "{}({})", self.kind.cli_name(), star)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_table() {
        let t = |k| StructureTag::new(k, StarFlavor::Transpose);
        assert_eq!(t(StructureKind::Symmetric).condition_kind(1), ConditionKind::AS);
        assert_eq!(t(StructureKind::Symmetric).condition_kind(2), ConditionKind::AS);
        assert_eq!(t(StructureKind::Even).condition_kind(2), ConditionKind::AS);
        assert_eq!(t(StructureKind::Even).condition_kind(1), ConditionKind::ASS);
        assert_eq!(t(StructureKind::Odd).condition_kind(3), ConditionKind::ASS);
        assert_eq!(t(StructureKind::Palindromic).condition_kind(2), ConditionKind::DS);
        assert_eq!(t(StructureKind::AntiPalindromic).condition_kind(1), ConditionKind::DS);
    }

    #[test]
    fn signs_follow_the_class() {
        let t = |k| StructureTag::new(k, StarFlavor::Transpose);
        assert_eq!(t(StructureKind::Symmetric).sign(), Sign::Plus);
        assert_eq!(t(StructureKind::SkewSymmetric).sign(), Sign::Minus);
        assert_eq!(t(StructureKind::Odd).sign(), Sign::Minus);
        assert_eq!(t(StructureKind::Palindromic).sign(), Sign::Plus);
    }
}
