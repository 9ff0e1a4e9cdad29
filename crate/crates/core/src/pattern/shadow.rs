use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{DefSet, GroupElement};
use crate::group::{abelianize, AbelianVector};

/// An integer interval with optional ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntRange {
    #[serde(with = "crate::intser::opt")]
    pub lo: Option<BigInt>,
    #[serde(with = "crate::intser::opt")]
    pub hi: Option<BigInt>,
}

impl IntRange {
    pub fn exact(v: BigInt) -> Self {
        IntRange {
            lo: Some(v.clone()),
            hi: Some(v),
        }
    }

    pub fn zero() -> Self {
        IntRange::exact(BigInt::from(0))
    }

    pub fn contains(&self, v: &BigInt) -> bool {
        self.lo.as_ref().is_none_or(|lo| lo <= v) && self.hi.as_ref().is_none_or(|hi| v <= hi)
    }

    pub fn is_disjoint(&self, other: &IntRange) -> bool {
        let below = |a: &IntRange, b: &IntRange| match (&a.hi, &b.lo) {
            (Some(h), Some(l)) => h < l,
            _ => false,
        };
        below(self, other) || below(other, self)
    }
}

impl Add for &IntRange {
    type Output = IntRange;

    fn add(self, rhs: &IntRange) -> IntRange {
        let sum = |a: &Option<BigInt>, b: &Option<BigInt>| match (a, b) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        IntRange {
            lo: sum(&self.lo, &rhs.lo),
            hi: sum(&self.hi, &rhs.hi),
        }
    }
}

// k-fold Minkowski sum.
impl Mul<u32> for &IntRange {
    type Output = IntRange;

    fn mul(self, k: u32) -> IntRange {
        if k == 0 {
            return IntRange::zero();
        }
        let k = BigInt::from(k);
        IntRange {
            lo: self.lo.as_ref().map(|v| v * &k),
            hi: self.hi.as_ref().map(|v| v * &k),
        }
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) if l == h => write!(f, "{{{l}}}"),
            (lo, hi) => {
                match lo {
                    Some(l) => write!(f, "[{l}, ")?,
                    None => write!(f, "(-∞, ")?,
                }
                match hi {
                    Some(h) => write!(f, "{h}]"),
                    None => write!(f, "∞)"),
                }
            }
        }
    }
}

/// A box in the free abelian group containing the abelianization of every
/// member of a set. Unlisted generators are pinned to 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianBox {
    pub coords: BTreeMap<usize, IntRange>,
}

impl AbelianBox {
    pub fn point(v: &AbelianVector) -> Self {
        AbelianBox {
            coords: v
                .iter()
                .map(|(g, c)| (g, IntRange::exact(c.clone())))
                .collect(),
        }
    }

    pub fn range(&self, generator: usize) -> IntRange {
        self.coords
            .get(&generator)
            .cloned()
            .unwrap_or_else(IntRange::zero)
    }

    fn generators<'a>(&'a self, other: &'a AbelianBox) -> impl Iterator<Item = usize> + 'a {
        let mut gens: Vec<usize> = self
            .coords
            .keys()
            .chain(other.coords.keys())
            .copied()
            .collect();
        gens.sort_unstable();
        gens.dedup();
        gens.into_iter()
    }

    /// The first generator whose coordinate rules `v` out.
    pub fn excludes(&self, v: &AbelianVector) -> Option<usize> {
        let point = AbelianBox::point(v);
        let found = self
            .generators(&point)
            .find(|&g| !self.range(g).contains(&v.get(g)));
        found
    }

    /// The first generator on which the two boxes have disjoint ranges.
    pub fn separating_generator(&self, other: &AbelianBox) -> Option<usize> {
        self.generators(other)
            .find(|&g| self.range(g).is_disjoint(&other.range(g)))
    }

    fn minkowski(&self, other: &AbelianBox) -> AbelianBox {
        let coords = self
            .generators(other)
            .map(|g| (g, &self.range(g) + &other.range(g)))
            .collect();
        AbelianBox { coords }
    }

    fn scaled(&self, k: u32) -> AbelianBox {
        AbelianBox {
            coords: self.coords.iter().map(|(g, r)| (*g, r * k)).collect(),
        }
    }
}

/// Abelian shadow of a free-group set; `None` for Klein-bottle sets.
///
/// Abelianization is a homomorphism that is constant on conjugacy classes,
/// so products map to Minkowski sums, conjugate closures to the same box and
/// `k`-th powers to `k`-fold sums. A word whose exponent-sum vector falls
/// outside the box is not in the set.
pub fn abelian_shadow(set: &DefSet) -> Option<AbelianBox> {
    match set {
        DefSet::Interval { .. } | DefSet::Coset { .. } => None,
        DefSet::Singleton {
            element: GroupElement::Free(w),
        } => Some(AbelianBox::point(&abelianize(w))),
        DefSet::Singleton {
            element: GroupElement::Kb(_),
        } => None,
        DefSet::PowerSet {
            generator,
            exponents,
        } => {
            let range = IntRange {
                lo: exponents.lo.clone(),
                hi: exponents.hi.clone(),
            };
            Some(AbelianBox {
                coords: BTreeMap::from([(*generator, range)]),
            })
        }
        DefSet::Translate {
            set,
            by: GroupElement::Free(w),
            ..
        } => Some(abelian_shadow(set)?.minkowski(&AbelianBox::point(&abelianize(w)))),
        DefSet::Translate { .. } => None,
        DefSet::Product { factors } => factors.iter().try_fold(AbelianBox::default(), |acc, f| {
            Some(acc.minkowski(&abelian_shadow(f)?))
        }),
        DefSet::ConjClosure { set } => abelian_shadow(set),
        DefSet::Power { set, k } => Some(abelian_shadow(set)?.scaled(*k)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FreeWord;
    use crate::pattern::ExponentRange;

    fn d(i: usize) -> DefSet {
        DefSet::power_set(i, ExponentRange::naturals())
    }

    #[test]
    fn chain_shadow_pins_omitted_generator() {
        let set = DefSet::power(DefSet::conj_closure(DefSet::product(vec![d(0), d(2)])), 4);
        let b = abelian_shadow(&set).unwrap();
        assert_eq!(b.range(1), IntRange::zero());
        assert_eq!(
            b.range(0),
            IntRange {
                lo: Some(BigInt::from(0)),
                hi: None
            }
        );
        let x1sq = abelianize(&FreeWord::power(1, 2));
        assert_eq!(b.excludes(&x1sq), Some(1));
    }

    #[test]
    fn translate_and_singleton() {
        let set = DefSet::translate(d(0), FreeWord::power(3, -2), crate::pattern::Side::Right);
        let b = abelian_shadow(&set).unwrap();
        assert_eq!(b.range(3), IntRange::exact(BigInt::from(-2)));
        let s = DefSet::singleton(FreeWord::power(3, 5));
        assert_eq!(
            abelian_shadow(&s).unwrap().separating_generator(&b),
            Some(3)
        );
    }

    #[test]
    #[allow(clippy::erasing_op)]
    fn range_arithmetic() {
        let a = IntRange {
            lo: Some(BigInt::from(1)),
            hi: Some(BigInt::from(2)),
        };
        let b = IntRange {
            lo: Some(BigInt::from(3)),
            hi: None,
        };
        assert!(a.is_disjoint(&b));
        assert!(!(&a + &b).is_disjoint(&b));
        assert_eq!(
            &a * 3,
            IntRange {
                lo: Some(BigInt::from(3)),
                hi: Some(BigInt::from(6))
            }
        );
        assert_eq!(&a * 0, IntRange::zero());
    }
}
