//! A copy of the Klein bottle group inside `(Z, <, +)`.
//!
//! The universe is `Z × Z` and the operation is
//! `(a, b) ⊕ (c, d) = (a + c, d + ε(c) b)` with `ε(c) = 1` when `c ∈ 2Z`
//! and `-1` otherwise. The operation only uses addition, negation and the
//! definable subgroup `2Z`, so it is definable in Presburger arithmetic.
//! This is one concrete choice of definable copy; the isomorphism to the
//! normal form is `x^n y^m -> (n, m)`.

use num_bigint::BigInt;
use num_integer::Integer;

use super::{kb_mul, KbElement};

pub const CARRIER: &str = "Z × Z with (a,b) ⊕ (c,d) = (a+c, d+b) if c ∈ 2Z, else (a+c, d−b)";

pub type Point = (BigInt, BigInt);

/// The interpreted operation.
pub fn op(p: &Point, q: &Point) -> Point {
    let (a, b) = p;
    let (c, d) = q;
    let second = if c.is_even() { d + b } else { d - b };
    (a + c, second)
}

pub fn iso(g: &KbElement) -> Point {
    (g.n.clone(), g.m.clone())
}

pub fn identity() -> Point {
    (BigInt::from(0), BigInt::from(0))
}

/// A pair on which `iso` fails to be a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub left: KbElement,
    pub right: KbElement,
    pub via_group: Point,
    pub via_interpretation: Point,
}

/// Checks `iso(g h) = iso(g) ⊕ iso(h)` on every sample, stopping at the
/// first violation.
pub fn check<'a, I>(samples: I) -> Result<usize, Violation>
where
    I: IntoIterator<Item = (&'a KbElement, &'a KbElement)>,
{
    let mut checked = 0;
    for (g, h) in samples {
        let via_group = iso(&kb_mul(g, h));
        let via_interpretation = op(&iso(g), &iso(h));
        if via_group != via_interpretation {
            return Err(Violation {
                left: g.clone(),
                right: h.clone(),
                via_group,
                via_interpretation,
            });
        }
        checked += 1;
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let (g, h) = (KbElement::new(1, 2), KbElement::new(3, 5));
        assert_eq!(op(&iso(&g), &iso(&h)), iso(&KbElement::new(4, 3)));
        let p = (BigInt::from(-7), BigInt::from(11));
        assert_eq!(op(&identity(), &p), p);
        assert_eq!(op(&p, &identity()), p);
    }

    #[test]
    fn box_has_no_violations() {
        let elems: Vec<KbElement> = (-5..=5)
            .flat_map(|n| (-5..=5).map(move |m| KbElement::new(n, m)))
            .collect();
        let pairs: Vec<_> = elems
            .iter()
            .flat_map(|g| elems.iter().map(move |h| (g, h)))
            .collect();
        assert_eq!(check(pairs), Ok(121 * 121));
    }
}
