use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Boolean function of two bits, `g(u, v) = αu ⊕ βv ⊕ γuv ⊕ δ`.
///
/// Indexed as `g^m` with `m = 8α + 4β + 2γ + δ`. Even indices form the
/// non-negated class; `g^(2k+1)` is the complement of `g^(2k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct TwoBitBoolean(u8);

impl TwoBitBoolean {
    pub const ZERO: TwoBitBoolean = TwoBitBoolean(0);

    pub fn from_index(m: u8) -> Result<Self> {
        if m < 16 {
            Ok(Self(m))
        } else {
            Err(Error::FunctionIndex(m))
        }
    }

    /// Builds `g^{α,β,γ,δ}`. Only the low bit of each coefficient is used.
    pub fn from_coefficients(alpha: u8, beta: u8, gamma: u8, delta: u8) -> Self {
        Self(((alpha & 1) << 3) | ((beta & 1) << 2) | ((gamma & 1) << 1) | (delta & 1))
    }

    /// The unique function with the given truth table, ordered
    /// `[g(0,0), g(0,1), g(1,0), g(1,1)]`.
    pub fn from_truth_table(table: [u8; 4]) -> Self {
        let delta = table[0];
        let beta = table[1] ^ delta;
        let alpha = table[2] ^ delta;
        let gamma = table[3] ^ alpha ^ beta ^ delta;
        Self::from_coefficients(alpha, beta, gamma, delta)
    }

    pub fn all() -> impl Iterator<Item = TwoBitBoolean> + Clone {
        (0..16).map(TwoBitBoolean)
    }

    /// The even (non-negated) class, in increasing index order.
    pub fn even_class() -> impl Iterator<Item = TwoBitBoolean> + Clone {
        (0..8).map(|k| TwoBitBoolean(2 * k))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn alpha(self) -> u8 {
        self.0 >> 3
    }

    pub fn beta(self) -> u8 {
        (self.0 >> 2) & 1
    }

    pub fn gamma(self) -> u8 {
        (self.0 >> 1) & 1
    }

    pub fn delta(self) -> u8 {
        self.0 & 1
    }

    pub fn is_even(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negated(self) -> Self {
        Self(self.0 ^ 1)
    }

    #[inline]
    pub fn eval(self, u: u8, v: u8) -> u8 {
        let (u, v) = (u & 1, v & 1);
        (self.alpha() & u) ^ (self.beta() & v) ^ (self.gamma() & u & v) ^ self.delta()
    }

    pub fn truth_table(self) -> [u8; 4] {
        [self.eval(0, 0), self.eval(0, 1), self.eval(1, 0), self.eval(1, 1)]
    }

    /// The function `f'` with `f'(u ⊕ flip_u, v ⊕ flip_v) = f(u, v)`.
    ///
    /// Complementing `v` rewrites `(α, β, γ, δ) → (α⊕γ, β, γ, δ⊕β)`,
    /// complementing `u` rewrites it to `(α, β⊕γ, γ, δ⊕α)`; both at once
    /// compose the two.
    pub fn symmetry_image(self, flip_u: bool, flip_v: bool) -> Self {
        let (a, b, c, d) = (self.alpha(), self.beta(), self.gamma(), self.delta());
        match (flip_u, flip_v) {
            (false, false) => self,
            (false, true) => Self::from_coefficients(a ^ c, b, c, d ^ b),
            (true, false) => Self::from_coefficients(a, b ^ c, c, d ^ a),
            (true, true) => Self::from_coefficients(a ^ c, b ^ c, c, d ^ a ^ b ^ c),
        }
    }
}

impl TryFrom<u8> for TwoBitBoolean {
    type Error = Error;

    fn try_from(m: u8) -> Result<Self> {
        Self::from_index(m)
    }
}

impl From<TwoBitBoolean> for u8 {
    fn from(g: TwoBitBoolean) -> u8 {
        g.0
    }
}

impl fmt::Display for TwoBitBoolean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g^{}", self.0)
    }
}
