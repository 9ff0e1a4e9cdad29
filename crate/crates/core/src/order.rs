//! The lexicographic left-order on the Klein bottle group.
//!
//! `x^n y^m < x^n' y^m'` iff `n < n'`, or `n = n'` and `m < m'`. The order is
//! invariant under left multiplication but not right multiplication, its
//! order type is `Z × Z`, and `<y>` is the minimal nontrivial convex
//! subgroup.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{kb_inv, kb_mul, KbElement, KbSubgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("interval endpoints out of order: {lo} > {hi}")]
    EmptyInterval { lo: KbElement, hi: KbElement },
    #[error("the trivial subgroup has no cofinal cosets")]
    TrivialSubgroup,
    #[error("{subgroup} has no element above {bound}")]
    NoElementAbove {
        subgroup: KbSubgroup,
        bound: KbElement,
    },
    #[error("{subgroup} has no element below {bound}")]
    NoElementBelow {
        subgroup: KbSubgroup,
        bound: KbElement,
    },
    #[error("expected a positive element, got {0}")]
    NotPositive(KbElement),
}

pub fn kb_compare(a: &KbElement, b: &KbElement) -> Ordering {
    a.n.cmp(&b.n).then_with(|| a.m.cmp(&b.m))
}

impl PartialOrd for KbElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KbElement {
    fn cmp(&self, other: &Self) -> Ordering {
        kb_compare(self, other)
    }
}

/// A closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KbInterval {
    lo: KbElement,
    hi: KbElement,
}

impl KbInterval {
    pub fn new(lo: KbElement, hi: KbElement) -> Result<Self, OrderError> {
        if lo > hi {
            return Err(OrderError::EmptyInterval { lo, hi });
        }
        Ok(KbInterval { lo, hi })
    }

    pub fn lo(&self) -> &KbElement {
        &self.lo
    }

    pub fn hi(&self) -> &KbElement {
        &self.hi
    }

    pub fn contains(&self, g: &KbElement) -> bool {
        &self.lo <= g && g <= &self.hi
    }

    pub fn intersection(&self, other: &KbInterval) -> Option<KbInterval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        KbInterval::new(lo, hi).ok()
    }

    /// A point near the middle: the midpoint when both endpoints share their
    /// `x`-exponent, otherwise `lo`.
    pub fn center(&self) -> KbElement {
        if self.lo.n == self.hi.n {
            KbElement {
                n: self.lo.n.clone(),
                m: (&self.lo.m + &self.hi.m).div_floor(&BigInt::from(2)),
            }
        } else {
            self.lo.clone()
        }
    }

    /// Finite intervals lie within a single `x`-row.
    pub fn is_finite(&self) -> bool {
        self.lo.n == self.hi.n
    }
}

impl fmt::Display for KbInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// The right coset `H rep = {h rep : h ∈ H}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RightCoset {
    pub subgroup: KbSubgroup,
    pub rep: KbElement,
}

/// Normal-form invariant of a right coset: the exponents of any member,
/// reduced modulo the subgroup's axis moduli (a zero modulus keeps the exact
/// value). Right cosets of a fixed subgroup are equal iff their keys agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetKey {
    #[serde(with = "crate::intser")]
    pub n: BigInt,
    #[serde(with = "crate::intser")]
    pub m: BigInt,
}

fn reduce(v: &BigInt, modulus: u64) -> BigInt {
    if modulus == 0 {
        v.clone()
    } else {
        v.mod_floor(&BigInt::from(modulus))
    }
}

pub fn coset_key(subgroup: &KbSubgroup, g: &KbElement) -> CosetKey {
    let (p, q) = subgroup.axes();
    CosetKey {
        n: reduce(&g.n, p),
        m: reduce(&g.m, q),
    }
}

impl RightCoset {
    pub fn new(subgroup: KbSubgroup, rep: KbElement) -> Self {
        RightCoset { subgroup, rep }
    }

    pub fn contains(&self, g: &KbElement) -> bool {
        coset_membership(self, g)
    }

    pub fn key(&self) -> CosetKey {
        coset_key(&self.subgroup, &self.rep)
    }

    /// For cosets of the same subgroup: equal or disjoint, decided by
    /// `rep₁ ∈ H rep₂`. `None` when the subgroups differ.
    pub fn same_as(&self, other: &RightCoset) -> Option<bool> {
        (self.subgroup == other.subgroup).then(|| self.contains(&other.rep))
    }
}

impl fmt::Display for RightCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·({})", self.subgroup, self.rep)
    }
}

/// `g ∈ H rep` iff `g rep^-1 ∈ H`.
pub fn coset_membership(c: &RightCoset, g: &KbElement) -> bool {
    c.subgroup.contains(&kb_mul(g, &kb_inv(&c.rep)))
}

/// The interval `I_{n,k} = [x^k, x^k y^n]` and the elements `x^k y^j`,
/// `j = 0..=n`, witnessing that it meets each coset `<x> y^j`.
pub fn interval_construct(n: u64, k: u64) -> (KbInterval, Vec<KbElement>) {
    let lo = KbElement::new(k, 0);
    let hi = KbElement::new(k, n);
    let witnesses = (0..=n).map(|j| KbElement::new(k, j)).collect();
    (KbInterval { lo, hi }, witnesses)
}

// Smallest-ish element of `h` strictly above `bound`.
fn element_above(h: &KbSubgroup, bound: &KbElement) -> Option<KbElement> {
    let (p, q) = h.axes();
    if p > 0 {
        let p_big = BigInt::from(p);
        let n = (bound.n.div_floor(&p_big) + 1) * p_big;
        return Some(KbElement {
            n,
            m: BigInt::zero(),
        });
    }
    match bound.n.sign() {
        num_bigint::Sign::Minus => Some(KbElement::identity()),
        num_bigint::Sign::NoSign if q > 0 => {
            let q_big = BigInt::from(q);
            let m = (bound.m.div_floor(&q_big) + 1) * q_big;
            Some(KbElement {
                n: BigInt::zero(),
                m,
            })
        }
        _ => None,
    }
}

fn element_below(h: &KbSubgroup, bound: &KbElement) -> Option<KbElement> {
    let mirrored = KbElement {
        n: -&bound.n,
        m: -&bound.m,
    };
    element_above(h, &mirrored).map(|g| KbElement { n: -g.n, m: -g.m })
}

/// An element of `H c` strictly above `bound`.
///
/// Picks `h ∈ H` above `bound` and `h₁ ∈ H` below `c`; by left-invariance
/// `h = (h h₁⁻¹) h₁ < (h h₁⁻¹) c`, which lies in `H c`. If `c` is already
/// above `bound` it is returned as is.
pub fn coset_cofinal_witness(
    h: &KbSubgroup,
    c: &KbElement,
    bound: &KbElement,
) -> Result<KbElement, OrderError> {
    if h.is_trivial() {
        return Err(OrderError::TrivialSubgroup);
    }
    if c > bound {
        return Ok(c.clone());
    }
    let top = element_above(h, bound).ok_or_else(|| OrderError::NoElementAbove {
        subgroup: *h,
        bound: bound.clone(),
    })?;
    let below_c = element_below(h, c).ok_or_else(|| OrderError::NoElementBelow {
        subgroup: *h,
        bound: c.clone(),
    })?;
    let shift = kb_mul(&top, &kb_inv(&below_c));
    Ok(kb_mul(&shift, c))
}

/// An element of an infinite coset family together with its coset key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetWitness {
    pub index: u64,
    pub element: KbElement,
    pub key: CosetKey,
}

/// The elements `y^b`, `b = 0, 1, 2, ...` of `[e, x]` when `x` has positive
/// `x`-exponent. When `H` has no `y`-component, their coset keys are
/// pairwise distinct, so infinitely many right `H`-cosets meet `[e, x]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetWitnessFamily {
    pub subgroup: KbSubgroup,
    pub upper: KbElement,
}

impl CosetWitnessFamily {
    pub fn element(&self, index: u64) -> KbElement {
        KbElement::new(0, index)
    }

    pub fn witness(&self, index: u64) -> CosetWitness {
        let element = self.element(index);
        let key = coset_key(&self.subgroup, &element);
        CosetWitness {
            index,
            element,
            key,
        }
    }

    /// Lazily generated witnesses.
    pub fn iter(&self) -> impl Iterator<Item = CosetWitness> + '_ {
        (0..).map(|i| self.witness(i))
    }

    /// Re-checks the first `count` witnesses: each lies in `[e, upper]`, and
    /// no two share a right coset (checked with the coset criterion, not the
    /// keys).
    pub fn validate(&self, count: usize) -> Result<Vec<CosetWitness>, String> {
        let interval = KbInterval::new(KbElement::identity(), self.upper.clone())
            .map_err(|e| e.to_string())?;
        let items: Vec<CosetWitness> = self.iter().take(count).collect();
        for (i, a) in items.iter().enumerate() {
            if !interval.contains(&a.element) {
                return Err(format!("{} is outside {interval}", a.element));
            }
            for b in &items[..i] {
                if self.subgroup.same_right_coset(&a.element, &b.element) {
                    return Err(format!("{} and {} share a coset", a.element, b.element));
                }
            }
        }
        Ok(items)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoverResult {
    FiniteCover {
        cosets: Vec<RightCoset>,
    },
    InfiniteWitness {
        family: CosetWitnessFamily,
    },
    /// Finitely many cosets are needed, but more than the budget allows.
    BudgetExceeded {
        required: u64,
    },
}

/// Covers `[e, x]` by right `H`-cosets.
///
/// `[e, x]` consists of `y^b` for `b ≥ 0`, the full rows `x^r y^*` for
/// `0 < r < x.n` and the half row `x^(x.n) y^b`, `b ≤ x.m` (or just
/// `y^0..y^(x.m)` when `x.n = 0`). Right cosets are coordinate translates,
/// so the count of cosets meeting it is computed per axis.
pub fn interval_coset_cover(
    x: &KbElement,
    h: &KbSubgroup,
    budget: u64,
) -> Result<CoverResult, OrderError> {
    if *x <= KbElement::identity() {
        return Err(OrderError::NotPositive(x.clone()));
    }
    let (p, q) = h.axes();
    let to_u64 = |v: &BigInt| u64::try_from(v).unwrap_or(u64::MAX);

    // Which (row residue, column residue) keys occur.
    let (rows, cols): (Vec<BigInt>, Vec<BigInt>) = if x.n.is_zero() {
        let width = to_u64(&x.m).saturating_add(1);
        let cols = if q == 0 { width } else { width.min(q) };
        if cols > budget {
            return Ok(CoverResult::BudgetExceeded { required: cols });
        }
        (vec![BigInt::zero()], (0..cols).map(BigInt::from).collect())
    } else {
        if q == 0 {
            return Ok(CoverResult::InfiniteWitness {
                family: CosetWitnessFamily {
                    subgroup: *h,
                    upper: x.clone(),
                },
            });
        }
        let height = to_u64(&x.n).saturating_add(1);
        let rows = if p == 0 { height } else { height.min(p) };
        let required = rows.saturating_mul(q);
        if required > budget {
            return Ok(CoverResult::BudgetExceeded { required });
        }
        (
            (0..rows).map(BigInt::from).collect(),
            (0..q).map(BigInt::from).collect(),
        )
    };

    let cosets = rows
        .iter()
        .flat_map(|r| {
            cols.iter().map(move |c| KbElement {
                n: r.clone(),
                m: c.clone(),
            })
        })
        .map(|rep| RightCoset::new(*h, rep))
        .collect();
    debug_assert!(!x.n.is_negative());
    Ok(CoverResult::FiniteCover { cosets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::kb_center_description;

    fn kb(n: i64, m: i64) -> KbElement {
        KbElement::new(n, m)
    }

    #[test]
    fn compare_examples() {
        assert_eq!(kb_compare(&kb(0, 5), &kb(1, -100)), Ordering::Less);
        assert_eq!(kb_compare(&kb(2, 3), &kb(2, 3)), Ordering::Equal);
        assert_eq!(kb_compare(&kb(1, 4), &kb(1, 2)), Ordering::Greater);
    }

    #[test]
    fn right_multiplication_breaks_invariance() {
        let (g, h) = (kb(0, 1), kb(0, 2));
        assert!(g < h);
        assert!(kb_mul(&g, &KbElement::x()) > kb_mul(&h, &KbElement::x()));
    }

    #[test]
    fn y_axis_is_convex() {
        let (lo, hi) = (kb(0, -3), kb(0, 4));
        for n in -3..=3 {
            for m in -10..=10 {
                let g = kb(n, m);
                if lo <= g && g <= hi {
                    assert_eq!(n, 0);
                }
            }
        }
    }

    #[test]
    fn interval_examples() {
        let (i, w) = interval_construct(2, 0);
        assert_eq!((i.lo(), i.hi()), (&kb(0, 0), &kb(0, 2)));
        assert_eq!(w, vec![kb(0, 0), kb(0, 1), kb(0, 2)]);
        for (j, g) in w.iter().enumerate() {
            assert!(i.contains(g));
            assert!(RightCoset::new(KbSubgroup::x_axis(), kb(0, j as i64)).contains(g));
        }

        let (i, w) = interval_construct(0, 5);
        assert_eq!((i.lo(), i.hi()), (&kb(5, 0), &kb(5, 0)));
        assert_eq!(w, vec![kb(5, 0)]);

        let (a, _) = interval_construct(3, 1);
        let (b, _) = interval_construct(3, 2);
        assert!(a.hi() < b.lo());
        assert_eq!(a.intersection(&b), None);
    }

    #[test]
    fn interval_witnesses_hit_every_listed_coset_by_enumeration() {
        // <x> y^j ∩ box, checked directly against the interval.
        let n = 3;
        let (interval, _) = interval_construct(n, 2);
        for j in 0..=n as i64 {
            let hits: Vec<_> = (-6..=6)
                .map(|a| kb(a, j))
                .filter(|g| interval.contains(g))
                .collect();
            assert_eq!(hits, vec![kb(2, j)]);
        }
    }

    #[test]
    fn coset_membership_examples() {
        let c = RightCoset::new(KbSubgroup::x_axis(), kb(0, 3));
        assert!(c.contains(&kb(7, 3)));
        assert!(!c.contains(&kb(7, 4)));
        assert!(c.contains(&c.rep));
        assert_eq!(kb_mul(&kb(7, 3), &kb_inv(&kb(0, 3))), kb(7, 0));
    }

    #[test]
    fn coset_keys_agree_with_membership() {
        let subgroups = [
            KbSubgroup::Lattice(2, 3),
            KbSubgroup::CyclicX(2),
            KbSubgroup::CyclicY(2),
        ];
        for h in subgroups {
            for a in [kb(1, 2), kb(-3, 5), kb(0, 0), kb(4, -1)] {
                for n in -5..=5 {
                    for m in -5..=5 {
                        let g = kb(n, m);
                        let same = RightCoset::new(h, a.clone()).contains(&g);
                        assert_eq!(same, coset_key(&h, &g) == coset_key(&h, &a));
                    }
                }
            }
        }
    }

    #[test]
    fn cofinal_witness() {
        let bound = kb(5, 5);
        let w = coset_cofinal_witness(&KbSubgroup::centralizer_of_y(), &kb(0, 0), &bound).unwrap();
        assert!(w > bound);
        assert!(KbSubgroup::centralizer_of_y().contains(&w));
        assert!(w.n.is_even());

        let c = kb(3, 1);
        assert_eq!(
            coset_cofinal_witness(&KbSubgroup::Full, &c, &kb(0, 0)).unwrap(),
            c
        );
        assert_eq!(
            coset_cofinal_witness(&KbSubgroup::Trivial, &c, &kb(9, 9)),
            Err(OrderError::TrivialSubgroup)
        );
        assert!(matches!(
            coset_cofinal_witness(&KbSubgroup::y_axis(), &kb(0, 0), &kb(1, 0)),
            Err(OrderError::NoElementAbove { .. })
        ));
    }

    #[test]
    fn cofinal_witness_in_right_coset() {
        let subgroups = [
            KbSubgroup::x_axis(),
            KbSubgroup::Lattice(3, 2),
            KbSubgroup::CyclicX(2),
        ];
        for h in subgroups {
            for c in [kb(1, 1), kb(-2, 7), kb(0, -4)] {
                for bound in [kb(6, 1), kb(-1, 0), kb(20, -3)] {
                    let w = coset_cofinal_witness(&h, &c, &bound).unwrap();
                    assert!(w > bound);
                    assert!(RightCoset::new(h, c.clone()).contains(&w));
                }
            }
        }
    }

    #[test]
    fn cover_fails_for_center() {
        let res = interval_coset_cover(&KbElement::x(), &kb_center_description(), 100).unwrap();
        let CoverResult::InfiniteWitness { family } = res else {
            panic!("{res:?}")
        };
        let items = family.validate(201).unwrap();
        assert_eq!(items[7].element, kb(0, 7));
    }

    #[test]
    fn finite_covers() {
        let res = interval_coset_cover(&kb(0, 5), &KbSubgroup::Full, 1).unwrap();
        assert_eq!(
            res,
            CoverResult::FiniteCover {
                cosets: vec![RightCoset::new(KbSubgroup::Full, kb(0, 0))]
            }
        );

        let res = interval_coset_cover(&kb(0, 5), &KbSubgroup::y_axis(), 1).unwrap();
        let CoverResult::FiniteCover { cosets } = res else {
            panic!()
        };
        assert_eq!(cosets.len(), 1);
        for t in 0..=5 {
            assert!(cosets[0].contains(&kb(0, t)));
        }

        let res = interval_coset_cover(&kb(0, 5), &KbSubgroup::Trivial, 3).unwrap();
        assert_eq!(res, CoverResult::BudgetExceeded { required: 6 });
        assert!(interval_coset_cover(&kb(0, 0), &KbSubgroup::Full, 1).is_err());
    }

    #[test]
    fn finite_cover_contains_sampled_interval() {
        let x = kb(3, -2);
        for h in [
            KbSubgroup::Lattice(2, 3),
            KbSubgroup::CyclicY(2),
            KbSubgroup::Full,
        ] {
            let CoverResult::FiniteCover { cosets } = interval_coset_cover(&x, &h, 100).unwrap()
            else {
                panic!()
            };
            let interval = KbInterval::new(KbElement::identity(), x.clone()).unwrap();
            for n in 0..=3 {
                for m in -12..=12 {
                    let g = kb(n, m);
                    if interval.contains(&g) {
                        assert!(
                            cosets.iter().any(|c| c.contains(&g)),
                            "{g} uncovered by {h}"
                        );
                    }
                }
            }
        }
    }
}
