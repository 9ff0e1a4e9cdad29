use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::KbElement;

/// The map `(u, v) -> (u + shift, sign * v + offset)` on integer pairs.
///
/// `x^n y^m` acts on the right by `(u, v) -> (u + n, (-1)^n v + m)`; this
/// action is faithful, so composing actions gives an independent route to
/// the group law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineAction {
    pub shift: BigInt,
    pub sign: i8,
    pub offset: BigInt,
}

impl AffineAction {
    pub fn new(shift: BigInt, sign: i8, offset: BigInt) -> Option<Self> {
        (sign == 1 || sign == -1).then_some(AffineAction {
            shift,
            sign,
            offset,
        })
    }

    pub fn of(g: &KbElement) -> Self {
        let sign = if g.n.is_even() { 1 } else { -1 };
        AffineAction {
            shift: g.n.clone(),
            sign,
            offset: g.m.clone(),
        }
    }

    pub fn apply(&self, u: &BigInt, v: &BigInt) -> (BigInt, BigInt) {
        let v = if self.sign == 1 { v.clone() } else { -v };
        (u + &self.shift, v + &self.offset)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &AffineAction) -> AffineAction {
        // Pin down the composite by its values at (0,0) and (0,1).
        let (s0, o0) = next.apply(&self.shift, &self.offset);
        let (_, o1) = {
            let (u, v) = self.apply(&BigInt::from(0), &BigInt::one());
            next.apply(&u, &v)
        };
        let sign = if o1 > o0 { 1 } else { -1 };
        AffineAction {
            shift: s0,
            sign,
            offset: o0,
        }
    }

    /// Reads the normal form back off an action, if it is the action of a
    /// group element (its sign must match the parity of its shift).
    pub fn to_element(&self) -> Option<KbElement> {
        let expected = if self.shift.is_even() { 1 } else { -1 };
        (self.sign == expected).then(|| KbElement {
            n: self.shift.clone(),
            m: self.offset.clone(),
        })
    }
}
