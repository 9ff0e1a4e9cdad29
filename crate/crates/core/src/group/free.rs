use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A reduced word in the free group on `x_0, x_1, x_2, ...`.
///
/// Stored as syllables `x_i^e`: adjacent syllables use distinct generators
/// and no exponent is zero. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    syllables: Vec<(usize, BigInt)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn generator(index: usize) -> Self {
        FreeWord::power(index, 1)
    }

    /// `x_index^exp`.
    pub fn power(index: usize, exp: impl Into<BigInt>) -> Self {
        let exp = exp.into();
        if exp.is_zero() {
            FreeWord::identity()
        } else {
            FreeWord {
                syllables: vec![(index, exp)],
            }
        }
    }

    /// Freely reduces an arbitrary syllable sequence.
    pub fn from_syllables<I, E>(syllables: I) -> Self
    where
        I: IntoIterator<Item = (usize, E)>,
        E: Into<BigInt>,
    {
        let mut word = FreeWord::identity();
        for (g, e) in syllables {
            word.push(g, e.into());
        }
        word
    }

    fn push(&mut self, g: usize, e: BigInt) {
        if e.is_zero() {
            return;
        }
        match self.syllables.last_mut() {
            Some((last, exp)) if *last == g => {
                *exp += e;
                if exp.is_zero() {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((g, e)),
        }
    }

    pub fn syllables(&self) -> &[(usize, BigInt)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Sum of absolute exponents.
    pub fn length(&self) -> BigInt {
        self.syllables.iter().map(|(_, e)| e.abs()).sum()
    }

    /// The word made of syllables `start..end`; a contiguous piece of a
    /// reduced word is reduced.
    pub fn slice(&self, start: usize, end: usize) -> FreeWord {
        FreeWord {
            syllables: self.syllables[start..end].to_vec(),
        }
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        free_mul(self, other)
    }

    pub fn inv(&self) -> FreeWord {
        free_inv(self)
    }

    /// `other^-1 self other`.
    pub fn conjugate_by(&self, other: &FreeWord) -> FreeWord {
        free_mul(&free_mul(&free_inv(other), self), other)
    }
}

/// Reduced product `u v`.
pub fn free_mul(u: &FreeWord, v: &FreeWord) -> FreeWord {
    let mut out = u.clone();
    for (g, e) in &v.syllables {
        out.push(*g, e.clone());
    }
    out
}

pub fn free_inv(u: &FreeWord) -> FreeWord {
    FreeWord {
        syllables: u.syllables.iter().rev().map(|(g, e)| (*g, -e)).collect(),
    }
}

impl Mul for &FreeWord {
    type Output = FreeWord;

    fn mul(self, rhs: &FreeWord) -> FreeWord {
        free_mul(self, rhs)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        for (i, (g, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if e == &BigInt::from(1) {
                write!(f, "x{g}")?;
            } else {
                write!(f, "x{g}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SyllableRepr {
    generator: usize,
    #[serde(with = "crate::intser")]
    exponent: BigInt,
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<SyllableRepr> = self
            .syllables
            .iter()
            .map(|(g, e)| SyllableRepr {
                generator: *g,
                exponent: e.clone(),
            })
            .collect();
        reprs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let reprs = Vec::<SyllableRepr>::deserialize(d)?;
        Ok(FreeWord::from_syllables(
            reprs.into_iter().map(|s| (s.generator, s.exponent)),
        ))
    }
}

/// Exponent sums per generator; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianVector {
    coords: BTreeMap<usize, BigIntRepr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
struct BigIntRepr(#[serde(with = "crate::intser")] BigInt);

impl AbelianVector {
    pub fn zero() -> Self {
        AbelianVector::default()
    }

    pub fn get(&self, generator: usize) -> BigInt {
        self.coords
            .get(&generator)
            .map(|c| c.0.clone())
            .unwrap_or_default()
    }

    pub fn add_to(&mut self, generator: usize, delta: &BigInt) {
        let v = self.get(generator) + delta;
        if v.is_zero() {
            self.coords.remove(&generator);
        } else {
            self.coords.insert(generator, BigIntRepr(v));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Nonzero coordinates in generator order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coords.iter().map(|(g, c)| (*g, &c.0))
    }
}

impl Add for &AbelianVector {
    type Output = AbelianVector;

    fn add(self, rhs: &AbelianVector) -> AbelianVector {
        let mut out = self.clone();
        for (g, c) in rhs.iter() {
            out.add_to(g, c);
        }
        out
    }
}

impl Neg for &AbelianVector {
    type Output = AbelianVector;

    fn neg(self) -> AbelianVector {
        AbelianVector {
            coords: self
                .coords
                .iter()
                .map(|(g, c)| (*g, BigIntRepr(-&c.0)))
                .collect(),
        }
    }
}

impl fmt::Display for AbelianVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (g, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}: {c}")?;
        }
        write!(f, "}}")
    }
}

/// Image of `u` in the free abelian group: its exponent-sum vector.
pub fn abelianize(u: &FreeWord) -> AbelianVector {
    let mut v = AbelianVector::zero();
    for (g, e) in u.syllables() {
        v.add_to(*g, e);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &[(usize, i64)]) -> FreeWord {
        FreeWord::from_syllables(s.iter().copied())
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(
            free_mul(&w(&[(0, 1), (1, 1)]), &w(&[(1, -1), (2, 1)])),
            w(&[(0, 1), (2, 1)])
        );
        let u = w(&[(3, 2), (0, -1)]);
        assert_eq!(free_mul(&FreeWord::identity(), &u), u);
        assert_eq!(free_mul(&w(&[(0, 2)]), &w(&[(0, 3)])), w(&[(0, 5)]));
        assert_eq!(w(&[(0, 2)]).syllables().len(), 1);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(free_inv(&w(&[(0, 1), (1, 2)])), w(&[(1, -2), (0, -1)]));
        assert_eq!(free_inv(&FreeWord::identity()), FreeWord::identity());
        assert_eq!(free_inv(&w(&[(2, -3)])), w(&[(2, 3)]));
    }

    #[test]
    fn abelianize_examples() {
        assert!(abelianize(&w(&[(0, 1), (1, 1), (0, -1), (1, -1)])).is_zero());
        let v = abelianize(&w(&[(3, 5)]));
        assert_eq!(v.get(3), BigInt::from(5));
        assert_eq!(v.iter().count(), 1);
        let v = abelianize(&w(&[(0, 2), (1, -1), (0, 1)]));
        assert_eq!((v.get(0), v.get(1)), (BigInt::from(3), BigInt::from(-1)));
    }

    #[test]
    fn from_syllables_cancels_fully() {
        assert!(w(&[(0, 1), (1, 2), (1, -2), (0, -1)]).is_identity());
        assert_eq!(w(&[(0, 0), (1, 1)]), FreeWord::generator(1));
    }

    fn arb_word() -> impl Strategy<Value = FreeWord> {
        prop::collection::vec((0usize..4, -3i64..=3), 0..8).prop_map(|s| w(&s))
    }

    fn is_reduced(u: &FreeWord) -> bool {
        let s = u.syllables();
        s.iter().all(|(_, e)| !e.is_zero()) && s.windows(2).all(|p| p[0].0 != p[1].0)
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_word(), b in arb_word(), c in arb_word()) {
            prop_assert!(is_reduced(&free_mul(&a, &b)));
            prop_assert_eq!(free_mul(&free_mul(&a, &b), &c), free_mul(&a, &free_mul(&b, &c)));
            prop_assert!(free_mul(&a, &free_inv(&a)).is_identity());
            prop_assert_eq!(free_inv(&free_inv(&a)), a);
        }

        #[test]
        fn abelianization_is_a_conjugation_invariant_homomorphism(a in arb_word(), b in arb_word()) {
            prop_assert_eq!(abelianize(&free_mul(&a, &b)), &abelianize(&a) + &abelianize(&b));
            prop_assert_eq!(abelianize(&free_inv(&a)), -&abelianize(&a));
            prop_assert_eq!(abelianize(&a.conjugate_by(&b)), abelianize(&a));
        }
    }
}
