use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::kb::divides;
use super::{kb_inv, kb_mul, KbElement};

/// Subgroups of the Klein bottle group of the form `{x^(p a) y^(q b)}`.
///
/// Each is described by a pair of axis moduli `(p, q)`, where a modulus of
/// 0 means the corresponding exponent is pinned to 0. The family contains
/// `<x>`, `<y>`, the centralizer `C(y) = Lattice(2, 1)`, the center
/// `<x^2> = CyclicX(2)`, the whole group and the trivial group, and it is
/// closed under intersection.
///
/// Equality is equality of the described sets, so `Lattice(1, 1) == Full`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KbSubgroup {
    Full,
    Trivial,
    CyclicX(u64),
    CyclicY(u64),
    Lattice(u64, u64),
}

impl KbSubgroup {
    /// Canonical variant for the axis moduli `(p, q)`.
    pub fn from_axes(p: u64, q: u64) -> Self {
        match (p, q) {
            (0, 0) => KbSubgroup::Trivial,
            (1, 1) => KbSubgroup::Full,
            (p, 0) => KbSubgroup::CyclicX(p),
            (0, q) => KbSubgroup::CyclicY(q),
            (p, q) => KbSubgroup::Lattice(p, q),
        }
    }

    pub fn axes(&self) -> (u64, u64) {
        match *self {
            KbSubgroup::Full => (1, 1),
            KbSubgroup::Trivial => (0, 0),
            KbSubgroup::CyclicX(p) => (p, 0),
            KbSubgroup::CyclicY(q) => (0, q),
            KbSubgroup::Lattice(p, q) => (p, q),
        }
    }

    pub fn canonical(&self) -> Self {
        let (p, q) = self.axes();
        KbSubgroup::from_axes(p, q)
    }

    /// `<x>`, which is also the centralizer of `x`.
    pub fn x_axis() -> Self {
        KbSubgroup::CyclicX(1)
    }

    /// `<y>`, the minimal nontrivial convex subgroup.
    pub fn y_axis() -> Self {
        KbSubgroup::CyclicY(1)
    }

    /// `C(y) = {x^(2n) y^m}`.
    pub fn centralizer_of_y() -> Self {
        KbSubgroup::Lattice(2, 1)
    }

    pub fn contains(&self, g: &KbElement) -> bool {
        let (p, q) = self.axes();
        divides(p, &g.n) && divides(q, &g.m)
    }

    pub fn is_trivial(&self) -> bool {
        self.axes() == (0, 0)
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_trivial()
    }

    /// Whether `a` and `b` lie in the same right coset `H g`.
    pub fn same_right_coset(&self, a: &KbElement, b: &KbElement) -> bool {
        self.contains(&kb_mul(a, &kb_inv(b)))
    }
}

impl PartialEq for KbSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.axes() == other.axes()
    }
}

impl Eq for KbSubgroup {}

impl Hash for KbSubgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.axes().hash(state);
    }
}

impl fmt::Display for KbSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.canonical() {
            KbSubgroup::Full => write!(f, "G"),
            KbSubgroup::Trivial => write!(f, "1"),
            KbSubgroup::CyclicX(1) => write!(f, "<x>"),
            KbSubgroup::CyclicX(p) => write!(f, "<x^{p}>"),
            KbSubgroup::CyclicY(1) => write!(f, "<y>"),
            KbSubgroup::CyclicY(q) => write!(f, "<y^{q}>"),
            KbSubgroup::Lattice(p, q) => {
                let gen = |name: &str, e: u64| {
                    if e == 1 {
                        name.to_string()
                    } else {
                        format!("{name}^{e}")
                    }
                };
                write!(f, "<{}, {}>", gen("x", p), gen("y", q))
            }
        }
    }
}

fn axis_meet(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a.lcm(&b)
    }
}

/// `H ∩ K`, which is again a member of the family: the axis moduli meet by
/// `lcm`, and a pinned axis stays pinned.
pub fn subgroup_intersect(h: &KbSubgroup, k: &KbSubgroup) -> KbSubgroup {
    let (hp, hq) = h.axes();
    let (kp, kq) = k.axes();
    KbSubgroup::from_axes(axis_meet(hp, kp), axis_meet(hq, kq))
}

/// Index of a subgroup in an overgroup: a natural number or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CosetIndex {
    Finite(u64),
    Infinite,
}

impl CosetIndex {
    fn times(self, other: CosetIndex) -> CosetIndex {
        match (self, other) {
            (CosetIndex::Finite(a), CosetIndex::Finite(b)) => CosetIndex::Finite(a * b),
            _ => CosetIndex::Infinite,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CosetIndex::Finite(_))
    }
}

impl fmt::Display for CosetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetIndex::Finite(n) => write!(f, "{n}"),
            CosetIndex::Infinite => write!(f, "∞"),
        }
    }
}

/// `[H : H∩K]` and `[K : H∩K]` together with coset representatives.
///
/// For a finite index the representatives are a full transversal; for an
/// infinite index they are a bounded prefix of an infinite family of
/// elements in pairwise distinct right cosets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPair {
    pub intersection: KbSubgroup,
    pub first: CosetIndex,
    pub second: CosetIndex,
    pub first_representatives: Vec<KbElement>,
    pub second_representatives: Vec<KbElement>,
}

pub fn index_pair_check(h: &KbSubgroup, k: &KbSubgroup) -> IndexPair {
    index_pair_check_with(h, k, 16)
}

/// Like [`index_pair_check`], listing at most `evidence_len` representatives
/// for each infinite index.
pub fn index_pair_check_with(h: &KbSubgroup, k: &KbSubgroup, evidence_len: usize) -> IndexPair {
    let meet = subgroup_intersect(h, k);
    let (first, first_representatives) = transversal(h, &meet, evidence_len);
    let (second, second_representatives) = transversal(k, &meet, evidence_len);
    IndexPair {
        intersection: meet,
        first,
        second,
        first_representatives,
        second_representatives,
    }
}

// Index of one axis modulus inside another.
fn axis_index(outer: u64, inner: u64) -> CosetIndex {
    match (outer, inner) {
        (0, _) => CosetIndex::Finite(1),
        (_, 0) => CosetIndex::Infinite,
        (o, i) => CosetIndex::Finite(i / o),
    }
}

// Right cosets `I r` with `r = x^a y^b` are translates `(a + pZ, b + qZ)` in
// normal-form coordinates (the y-part of `I` is symmetric under negation), so
// the coset count factors over the two axes.
fn transversal(
    outer: &KbSubgroup,
    inner: &KbSubgroup,
    limit: usize,
) -> (CosetIndex, Vec<KbElement>) {
    let (op, oq) = outer.axes();
    let (ip, iq) = inner.axes();
    let ix = axis_index(op, ip);
    let iy = axis_index(oq, iq);
    let total = ix.times(iy);
    let count = |c: CosetIndex| match c {
        CosetIndex::Finite(n) if total.is_finite() => n,
        CosetIndex::Finite(n) => n.min(limit as u64),
        CosetIndex::Infinite => limit as u64,
    };
    let reps = (0..count(ix))
        .flat_map(|a| (0..count(iy)).map(move |b| (a, b)))
        .take(if total.is_finite() { usize::MAX } else { limit })
        .map(|(a, b)| KbElement::new(BigInt::from(a * op), BigInt::from(b * oq)))
        .collect();
    (total, reps)
}
