use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::group::{FreeWord, KbElement};
use crate::order::{KbInterval, RightCoset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupContext {
    KleinBottle,
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "group", content = "value", rename_all = "snake_case")]
pub enum GroupElement {
    Kb(KbElement),
    Free(FreeWord),
}

impl GroupElement {
    pub fn context(&self) -> GroupContext {
        match self {
            GroupElement::Kb(_) => GroupContext::KleinBottle,
            GroupElement::Free(_) => GroupContext::Free,
        }
    }

    pub fn as_kb(&self) -> Option<&KbElement> {
        match self {
            GroupElement::Kb(g) => Some(g),
            GroupElement::Free(_) => None,
        }
    }

    pub fn as_free(&self) -> Option<&FreeWord> {
        match self {
            GroupElement::Free(w) => Some(w),
            GroupElement::Kb(_) => None,
        }
    }

    pub fn identity(ctx: GroupContext) -> Self {
        match ctx {
            GroupContext::KleinBottle => GroupElement::Kb(KbElement::identity()),
            GroupContext::Free => GroupElement::Free(FreeWord::identity()),
        }
    }

    /// `self * other`, or `None` across contexts.
    pub fn mul(&self, other: &GroupElement) -> Option<GroupElement> {
        match (self, other) {
            (GroupElement::Kb(a), GroupElement::Kb(b)) => Some(GroupElement::Kb(a * b)),
            (GroupElement::Free(a), GroupElement::Free(b)) => Some(GroupElement::Free(a * b)),
            _ => None,
        }
    }

    pub fn inv(&self) -> GroupElement {
        match self {
            GroupElement::Kb(a) => GroupElement::Kb(a.inv()),
            GroupElement::Free(a) => GroupElement::Free(a.inv()),
        }
    }
}

impl From<KbElement> for GroupElement {
    fn from(g: KbElement) -> Self {
        GroupElement::Kb(g)
    }
}

impl From<FreeWord> for GroupElement {
    fn from(w: FreeWord) -> Self {
        GroupElement::Free(w)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Kb(g) => g.fmt(f),
            GroupElement::Free(w) => w.fmt(f),
        }
    }
}

/// Which side a translating element multiplies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Inclusive exponent bounds; `None` is unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentRange {
    #[serde(with = "crate::intser::opt")]
    pub lo: Option<BigInt>,
    #[serde(with = "crate::intser::opt")]
    pub hi: Option<BigInt>,
}

impl ExponentRange {
    /// `m ≥ 0`.
    pub fn naturals() -> Self {
        ExponentRange {
            lo: Some(BigInt::from(0)),
            hi: None,
        }
    }

    pub fn all() -> Self {
        ExponentRange { lo: None, hi: None }
    }

    pub fn between(lo: i64, hi: i64) -> Self {
        ExponentRange {
            lo: Some(BigInt::from(lo)),
            hi: Some(BigInt::from(hi)),
        }
    }

    pub fn contains(&self, m: &BigInt) -> bool {
        self.lo.as_ref().is_none_or(|lo| lo <= m) && self.hi.as_ref().is_none_or(|hi| m <= hi)
    }
}

/// An expression denoting a subset of one of the groups.
///
/// Interval and coset leaves live in the Klein bottle group, power sets in a
/// free group; translates, products, conjugate closures, powers and
/// singletons work in whichever group their operands do.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DefSet {
    Interval {
        interval: KbInterval,
    },
    Coset {
        coset: RightCoset,
    },
    /// `{x_generator^m : m ∈ exponents}`.
    PowerSet {
        generator: usize,
        exponents: ExponentRange,
    },
    /// `by · set` or `set · by`.
    Translate {
        set: Box<DefSet>,
        by: GroupElement,
        side: Side,
    },
    /// `S_1 S_2 ... S_r`; the empty product is `{e}`.
    Product {
        factors: Vec<DefSet>,
    },
    /// `S^G`, all conjugates of members of `S`.
    ConjClosure {
        set: Box<DefSet>,
    },
    /// `S^k`, products of `k` members of `S`.
    Power {
        set: Box<DefSet>,
        k: u32,
    },
    Singleton {
        element: GroupElement,
    },
}

impl DefSet {
    pub fn interval(interval: KbInterval) -> Self {
        DefSet::Interval { interval }
    }

    pub fn coset(coset: RightCoset) -> Self {
        DefSet::Coset { coset }
    }

    pub fn power_set(generator: usize, exponents: ExponentRange) -> Self {
        DefSet::PowerSet {
            generator,
            exponents,
        }
    }

    pub fn singleton(element: impl Into<GroupElement>) -> Self {
        DefSet::Singleton {
            element: element.into(),
        }
    }

    pub fn product(factors: Vec<DefSet>) -> Self {
        DefSet::Product { factors }
    }

    pub fn conj_closure(set: DefSet) -> Self {
        DefSet::ConjClosure { set: Box::new(set) }
    }

    pub fn power(set: DefSet, k: u32) -> Self {
        DefSet::Power {
            set: Box::new(set),
            k,
        }
    }

    pub fn translate(set: DefSet, by: impl Into<GroupElement>, side: Side) -> Self {
        DefSet::Translate {
            set: Box::new(set),
            by: by.into(),
            side,
        }
    }

    /// The group this set lives in; `None` for context-free sets such as the
    /// empty product.
    pub fn context(&self) -> Option<GroupContext> {
        match self {
            DefSet::Interval { .. } | DefSet::Coset { .. } => Some(GroupContext::KleinBottle),
            DefSet::PowerSet { .. } => Some(GroupContext::Free),
            DefSet::Translate { by, .. } => Some(by.context()),
            DefSet::Singleton { element } => Some(element.context()),
            DefSet::Product { factors } => factors.iter().find_map(DefSet::context),
            DefSet::ConjClosure { set } | DefSet::Power { set, .. } => set.context(),
        }
    }

    /// Whether membership is decided exactly (two-valued) for this set.
    pub fn is_exact(&self) -> bool {
        match self {
            DefSet::Interval { .. }
            | DefSet::Coset { .. }
            | DefSet::PowerSet { .. }
            | DefSet::Singleton { .. } => true,
            DefSet::Translate { set, .. } => set.is_exact(),
            _ => false,
        }
    }
}

impl fmt::Display for DefSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefSet::Interval { interval } => interval.fmt(f),
            DefSet::Coset { coset } => coset.fmt(f),
            DefSet::PowerSet { generator, .. } => write!(f, "D{generator}"),
            DefSet::Translate {
                set,
                by,
                side: Side::Left,
            } => write!(f, "({by})·{set}"),
            DefSet::Translate {
                set,
                by,
                side: Side::Right,
            } => write!(f, "{set}·({by})"),
            DefSet::Product { factors } if factors.is_empty() => write!(f, "{{e}}"),
            DefSet::Product { factors } => {
                for (i, s) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, "·")?;
                    }
                    s.fmt(f)?;
                }
                Ok(())
            }
            DefSet::ConjClosure { set } => write!(f, "({set})^G"),
            DefSet::Power { set, k } => write!(f, "({set})^{k}"),
            DefSet::Singleton { element } => write!(f, "{{{element}}}"),
        }
    }
}
