use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::KbSubgroup;

/// An element `x^n y^m` of the Klein bottle group, stored by its normal-form
/// exponents. Every group element has exactly one such representation, so
/// structural equality is group equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KbElement {
    #[serde(with = "crate::intser")]
    pub n: BigInt,
    #[serde(with = "crate::intser")]
    pub m: BigInt,
}

impl KbElement {
    pub fn new(n: impl Into<BigInt>, m: impl Into<BigInt>) -> Self {
        KbElement {
            n: n.into(),
            m: m.into(),
        }
    }

    pub fn identity() -> Self {
        KbElement::new(0, 0)
    }

    /// The generator `x`.
    pub fn x() -> Self {
        KbElement::new(1, 0)
    }

    /// The generator `y`.
    pub fn y() -> Self {
        KbElement::new(0, 1)
    }

    pub fn is_identity(&self) -> bool {
        self.n.is_zero() && self.m.is_zero()
    }

    pub fn inv(&self) -> Self {
        kb_inv(self)
    }

    pub fn pow(&self, k: i64) -> Self {
        kb_pow(self, k)
    }
}

impl fmt::Display for KbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} y^{}", self.n, self.m)
    }
}

impl Mul for &KbElement {
    type Output = KbElement;

    fn mul(self, rhs: &KbElement) -> KbElement {
        kb_mul(self, rhs)
    }
}

impl Mul for KbElement {
    type Output = KbElement;

    fn mul(self, rhs: KbElement) -> KbElement {
        kb_mul(&self, &rhs)
    }
}

/// `x^n y^m * x^n' y^m' = x^(n+n') y^(m' + (-1)^n' m)`.
pub fn kb_mul(a: &KbElement, b: &KbElement) -> KbElement {
    let m = if b.n.is_even() {
        &b.m + &a.m
    } else {
        &b.m - &a.m
    };
    KbElement { n: &a.n + &b.n, m }
}

/// `(x^n y^m)^-1 = x^-n y^((-1)^(n+1) m)`.
pub fn kb_inv(a: &KbElement) -> KbElement {
    let m = if a.n.is_even() { -&a.m } else { a.m.clone() };
    KbElement { n: -&a.n, m }
}

/// `a^k` by repeated squaring; negative powers go through the inverse.
pub fn kb_pow(a: &KbElement, k: i64) -> KbElement {
    let mut base = if k < 0 { kb_inv(a) } else { a.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = KbElement::identity();
    while e > 0 {
        if e & 1 == 1 {
            acc = kb_mul(&acc, &base);
        }
        base = kb_mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// Whether `g` and `h` commute.
pub fn kb_centralizer_membership(g: &KbElement, h: &KbElement) -> bool {
    kb_mul(g, h) == kb_mul(h, g)
}

/// The center of the Klein bottle group.
///
/// An element `x^n y^m` commutes with `x` iff `m = 0` and with `y` iff `n` is
/// even, so the center is `<x^2>`.
pub fn kb_center_description() -> KbSubgroup {
    KbSubgroup::CyclicX(2)
}

pub(crate) fn divides(d: u64, a: &BigInt) -> bool {
    if d == 0 {
        a.is_zero()
    } else {
        a.mod_floor(&BigInt::from(d)).is_zero()
    }
}
