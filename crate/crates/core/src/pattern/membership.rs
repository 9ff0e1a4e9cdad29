use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::shadow::{abelian_shadow, IntRange};
use super::{DefSet, GroupElement, PatternError, Side};
use crate::group::{abelianize, FreeWord, KbElement};
use crate::order::coset_membership;

/// Why an element belongs to a set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MemberWitness {
    /// `lo ≤ g ≤ hi`.
    InInterval,
    /// `g = h · rep` with `h` in the subgroup.
    InCoset {
        subgroup_part: KbElement,
    },
    Equal,
    /// `g = x_i^exponent`.
    GeneratorPower {
        #[serde(with = "crate::intser")]
        exponent: BigInt,
    },
    /// Membership of the untranslated element in the inner set.
    Translated {
        inner: Box<MemberWitness>,
    },
    /// `g = f_1 f_2 ... f_r` with `f_i` in the `i`-th factor.
    Factorization {
        factors: Vec<GroupElement>,
        parts: Vec<MemberWitness>,
    },
    /// `g = conjugator^-1 · element · conjugator` with `element` in the set.
    Conjugate {
        conjugator: FreeWord,
        element: FreeWord,
        inner: Box<MemberWitness>,
    },
}

/// Why an element does not belong to a set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonMemberCert {
    BelowInterval,
    AboveInterval,
    /// `g rep^-1` is not in the subgroup.
    OutsideCoset {
        difference: KbElement,
    },
    NotEqual,
    /// The word is not a single power of the generator with an allowed
    /// exponent.
    NotGeneratorPower,
    Translated {
        inner: Box<NonMemberCert>,
    },
    /// The exponent sum of `generator` is `value`, but every member of the
    /// set has its exponent sum in `allowed`.
    AbelianSeparation {
        generator: usize,
        #[serde(with = "crate::intser")]
        value: BigInt,
        allowed: IntRange,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    Member { witness: MemberWitness },
    NonMember { certificate: NonMemberCert },
    Unknown { reason: String },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }

    pub fn is_non_member(&self) -> bool {
        matches!(self, Membership::NonMember { .. })
    }

    fn member(witness: MemberWitness) -> Self {
        Membership::Member { witness }
    }

    fn non_member(certificate: NonMemberCert) -> Self {
        Membership::NonMember { certificate }
    }

    fn unknown(reason: impl Into<String>) -> Self {
        Membership::Unknown {
            reason: reason.into(),
        }
    }

    fn translated(self) -> Self {
        match self {
            Membership::Member { witness } => Membership::member(MemberWitness::Translated {
                inner: Box::new(witness),
            }),
            Membership::NonMember { certificate } => {
                Membership::non_member(NonMemberCert::Translated {
                    inner: Box::new(certificate),
                })
            }
            unknown => unknown,
        }
    }
}

/// Default number of sub-membership evaluations allowed per query.
pub const DEFAULT_BUDGET: usize = 200_000;

/// Decides `g ∈ s` with the default search budget.
pub fn defset_membership(s: &DefSet, g: &GroupElement) -> Result<Membership, PatternError> {
    defset_membership_with(s, g, DEFAULT_BUDGET)
}

/// Decides `g ∈ s`.
///
/// Interval, coset, singleton and power-set leaves (and translates of them)
/// are decided exactly. For products, conjugate closures and powers of
/// free-group sets, non-membership comes from the abelian shadow and
/// membership from an explicit factorization found by a bounded search over
/// cancellation-free splittings; otherwise the answer is unknown.
pub fn defset_membership_with(
    s: &DefSet,
    g: &GroupElement,
    budget: usize,
) -> Result<Membership, PatternError> {
    if let Some(ctx) = s.context() {
        if ctx != g.context() {
            return Err(PatternError::ContextMismatch {
                set: ctx,
                element: g.context(),
            });
        }
    }
    let mut search = Search { budget };
    Ok(search.member(s, g))
}

struct Search {
    budget: usize,
}

impl Search {
    fn member(&mut self, s: &DefSet, g: &GroupElement) -> Membership {
        if self.budget == 0 {
            return Membership::unknown("search budget exhausted");
        }
        self.budget -= 1;
        match (s, g) {
            (DefSet::Singleton { element }, g) => {
                if element == g {
                    Membership::member(MemberWitness::Equal)
                } else {
                    Membership::non_member(NonMemberCert::NotEqual)
                }
            }
            (DefSet::Translate { set, by, side }, g) => {
                let inv = by.inv();
                let inner = match side {
                    Side::Left => inv.mul(g),
                    Side::Right => g.mul(&inv),
                };
                match inner {
                    Some(h) => self.member(set, &h).translated(),
                    None => Membership::unknown("translate across groups"),
                }
            }
            (DefSet::Interval { interval }, GroupElement::Kb(h)) => {
                if h < interval.lo() {
                    Membership::non_member(NonMemberCert::BelowInterval)
                } else if h > interval.hi() {
                    Membership::non_member(NonMemberCert::AboveInterval)
                } else {
                    Membership::member(MemberWitness::InInterval)
                }
            }
            (DefSet::Coset { coset }, GroupElement::Kb(h)) => {
                let difference = h * &coset.rep.inv();
                if coset_membership(coset, h) {
                    Membership::member(MemberWitness::InCoset {
                        subgroup_part: difference,
                    })
                } else {
                    Membership::non_member(NonMemberCert::OutsideCoset { difference })
                }
            }
            (
                DefSet::PowerSet {
                    generator,
                    exponents,
                },
                GroupElement::Free(w),
            ) => {
                let exponent = match w.syllables() {
                    [] => Some(BigInt::from(0)),
                    [(gen, e)] if gen == generator => Some(e.clone()),
                    _ => None,
                };
                match exponent {
                    Some(e) if exponents.contains(&e) => {
                        Membership::member(MemberWitness::GeneratorPower { exponent: e })
                    }
                    _ => Membership::non_member(NonMemberCert::NotGeneratorPower),
                }
            }
            (_, GroupElement::Free(w)) => self.free_compound(s, w),
            (_, GroupElement::Kb(_)) => Membership::unknown(format!(
                "no decision procedure for {s} in the Klein bottle group"
            )),
        }
    }

    fn free_compound(&mut self, s: &DefSet, w: &FreeWord) -> Membership {
        if let Some(shadow) = abelian_shadow(s) {
            let ab = abelianize(w);
            if let Some(generator) = shadow.excludes(&ab) {
                return Membership::non_member(NonMemberCert::AbelianSeparation {
                    generator,
                    value: ab.get(generator),
                    allowed: shadow.range(generator),
                });
            }
        }
        let found = match s {
            DefSet::Product { factors } => {
                let factors: Vec<&DefSet> = factors.iter().collect();
                self.factorize(&factors, w)
            }
            DefSet::Power { set, k } => {
                let factors: Vec<&DefSet> = (0..*k).map(|_| set.as_ref()).collect();
                self.factorize(&factors, w)
            }
            DefSet::ConjClosure { set } => self.conjugate_search(set, w),
            _ => None,
        };
        found.map(Membership::member).unwrap_or_else(|| {
            Membership::unknown(format!(
                "no factorization of {w} in {s} found by bounded search"
            ))
        })
    }

    // Splits `w` at syllable boundaries into consecutive pieces, one per
    // factor; reachability is tracked per (factor index, boundary).
    fn factorize(&mut self, factors: &[&DefSet], w: &FreeWord) -> Option<MemberWitness> {
        let len = w.syllables().len();
        let r = factors.len();
        if r == 0 {
            return w.is_identity().then(|| MemberWitness::Factorization {
                factors: Vec::new(),
                parts: Vec::new(),
            });
        }
        // back[i][q] = (p, witness) for a piece [p, q) matched by factor i-1.
        let mut back: Vec<Vec<Option<(usize, MemberWitness)>>> = vec![vec![None; len + 1]; r + 1];
        let mut reach = vec![vec![false; len + 1]; r + 1];
        reach[0][0] = true;
        for i in 0..r {
            for p in 0..=len {
                if !reach[i][p] {
                    continue;
                }
                for q in p..=len {
                    if reach[i + 1][q] {
                        continue;
                    }
                    // Later factors must still be able to consume the rest.
                    if i + 1 == r && q != len {
                        continue;
                    }
                    let piece = GroupElement::Free(w.slice(p, q));
                    if let Membership::Member { witness } = self.member(factors[i], &piece) {
                        reach[i + 1][q] = true;
                        back[i + 1][q] = Some((p, witness));
                    }
                }
            }
        }
        if !reach[r][len] {
            return None;
        }
        let mut pieces = Vec::with_capacity(r);
        let mut q = len;
        for i in (1..=r).rev() {
            let (p, witness) = back[i][q]
                .take()
                .expect("reachable boundary has a back-pointer");
            pieces.push((GroupElement::Free(w.slice(p, q)), witness));
            q = p;
        }
        pieces.reverse();
        let (factors, parts) = pieces.into_iter().unzip();
        Some(MemberWitness::Factorization { factors, parts })
    }

    // Tries `w` itself and the syllable rotations of its cyclic reduction.
    fn conjugate_search(&mut self, set: &DefSet, w: &FreeWord) -> Option<MemberWitness> {
        for (conjugator, element) in conjugate_candidates(w) {
            if let Membership::Member { witness } =
                self.member(set, &GroupElement::Free(element.clone()))
            {
                return Some(MemberWitness::Conjugate {
                    conjugator,
                    element,
                    inner: Box::new(witness),
                });
            }
        }
        None
    }
}

/// Pairs `(z, s)` with `w = z^-1 s z`: `w` itself, then the rotations of the
/// cyclically reduced core of `w` at syllable boundaries.
fn conjugate_candidates(w: &FreeWord) -> Vec<(FreeWord, FreeWord)> {
    let mut out = vec![(FreeWord::identity(), w.clone())];
    // w = u^-1 c u with c cyclically reduced.
    let mut u = FreeWord::identity();
    let mut c = w.clone();
    loop {
        let syl = c.syllables();
        if syl.len() < 2 {
            break;
        }
        let (first, last) = (&syl[0], &syl[syl.len() - 1]);
        if first.0 != last.0 || (first.1 > BigInt::from(0)) == (last.1 > BigInt::from(0)) {
            break;
        }
        // c = x^-s (x^s c x^-s) x^s where s is the sign of the last exponent.
        let step = if last.1 > BigInt::from(0) { 1 } else { -1 };
        let letter = FreeWord::power(last.0, step);
        c = c.conjugate_by(&letter.inv());
        u = &letter * &u;
    }
    let syl = c.syllables().to_vec();
    for j in 0..syl.len() {
        // rotation r = v^-1 c v with v = first j syllables; then w = z^-1 r z, z = v^-1 u.
        let v = FreeWord::from_syllables(syl[..j].iter().cloned());
        let rotated = c.conjugate_by(&v);
        let z = &v.inv() * &u;
        if rotated != *w {
            out.push((z, rotated));
        }
    }
    out
}

impl MemberWitness {
    /// Re-checks the witness against the set, independently of the search.
    pub fn validate(&self, s: &DefSet, g: &GroupElement) -> bool {
        match (self, s, g) {
            (MemberWitness::InInterval, DefSet::Interval { interval }, GroupElement::Kb(h)) => {
                interval.contains(h)
            }
            (
                MemberWitness::InCoset { subgroup_part },
                DefSet::Coset { coset },
                GroupElement::Kb(h),
            ) => coset.subgroup.contains(subgroup_part) && &(subgroup_part * &coset.rep) == h,
            (MemberWitness::Equal, DefSet::Singleton { element }, g) => element == g,
            (
                MemberWitness::GeneratorPower { exponent },
                DefSet::PowerSet {
                    generator,
                    exponents,
                },
                GroupElement::Free(w),
            ) => {
                exponents.contains(exponent) && &FreeWord::power(*generator, exponent.clone()) == w
            }
            (MemberWitness::Translated { inner }, DefSet::Translate { set, by, side }, g) => {
                let h = match side {
                    Side::Left => by.inv().mul(g),
                    Side::Right => g.mul(&by.inv()),
                };
                h.is_some_and(|h| inner.validate(set, &h))
            }
            (
                MemberWitness::Factorization { factors, parts },
                DefSet::Product { factors: sets },
                g,
            ) => validate_factorization(factors, parts, &sets.iter().collect::<Vec<_>>(), g),
            (MemberWitness::Factorization { factors, parts }, DefSet::Power { set, k }, g) => {
                let sets: Vec<&DefSet> = (0..*k).map(|_| set.as_ref()).collect();
                validate_factorization(factors, parts, &sets, g)
            }
            (
                MemberWitness::Conjugate {
                    conjugator,
                    element,
                    inner,
                },
                DefSet::ConjClosure { set },
                GroupElement::Free(w),
            ) => {
                &element.conjugate_by(conjugator) == w
                    && inner.validate(set, &GroupElement::Free(element.clone()))
            }
            _ => false,
        }
    }
}

fn validate_factorization(
    factors: &[GroupElement],
    parts: &[MemberWitness],
    sets: &[&DefSet],
    g: &GroupElement,
) -> bool {
    if factors.len() != sets.len() || parts.len() != sets.len() {
        return false;
    }
    let product = factors
        .iter()
        .try_fold(GroupElement::identity(g.context()), |acc, f| acc.mul(f));
    product.as_ref() == Some(g)
        && factors
            .iter()
            .zip(parts)
            .zip(sets)
            .all(|((f, w), s)| w.validate(s, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::KbSubgroup;
    use crate::order::{KbInterval, RightCoset};
    use crate::pattern::ExponentRange;

    fn d(i: usize) -> DefSet {
        DefSet::power_set(i, ExponentRange::naturals())
    }

    fn free(s: &[(usize, i64)]) -> GroupElement {
        GroupElement::Free(FreeWord::from_syllables(s.iter().copied()))
    }

    fn kb(n: i64, m: i64) -> GroupElement {
        GroupElement::Kb(KbElement::new(n, m))
    }

    fn check(s: &DefSet, g: &GroupElement) -> Membership {
        let res = defset_membership(s, g).unwrap();
        if let Membership::Member { witness } = &res {
            assert!(
                witness.validate(s, g),
                "invalid witness for {g} in {s}: {witness:?}"
            );
        }
        res
    }

    #[test]
    fn interval_membership() {
        let i =
            DefSet::interval(KbInterval::new(KbElement::new(0, 0), KbElement::new(0, 2)).unwrap());
        assert!(check(&i, &kb(0, 1)).is_member());
        assert_eq!(
            check(&i, &kb(0, 3)),
            Membership::NonMember {
                certificate: NonMemberCert::AboveInterval
            }
        );
        assert!(check(&i, &kb(-1, 50)).is_non_member());
    }

    #[test]
    fn coset_membership_exact() {
        let c = DefSet::coset(RightCoset::new(KbSubgroup::x_axis(), KbElement::new(0, 3)));
        assert!(check(&c, &kb(7, 3)).is_member());
        assert!(check(&c, &kb(7, 4)).is_non_member());
    }

    #[test]
    fn translate_kb() {
        let c = DefSet::coset(RightCoset::new(KbSubgroup::x_axis(), KbElement::identity()));
        let shifted = DefSet::translate(c, KbElement::y(), Side::Right);
        assert!(check(&shifted, &kb(4, 1)).is_member());
        assert!(check(&shifted, &kb(4, 0)).is_non_member());
        let left = DefSet::translate(
            DefSet::singleton(KbElement::y()),
            KbElement::x(),
            Side::Left,
        );
        assert!(check(&left, &kb(1, 1)).is_member());
    }

    #[test]
    fn abelian_nonmembership() {
        let s = DefSet::power(DefSet::conj_closure(DefSet::product(vec![d(0), d(2)])), 4);
        let res = check(&s, &free(&[(1, 2)]));
        assert_eq!(
            res,
            Membership::NonMember {
                certificate: NonMemberCert::AbelianSeparation {
                    generator: 1,
                    value: BigInt::from(2),
                    allowed: IntRange::zero(),
                }
            }
        );
    }

    #[test]
    fn product_factorization() {
        let s = DefSet::product(vec![d(0), d(2)]);
        let res = check(&s, &free(&[(0, 1), (2, 1)]));
        let Membership::Member {
            witness: MemberWitness::Factorization { factors, .. },
        } = res
        else {
            panic!("{res:?}")
        };
        assert_eq!(factors, vec![free(&[(0, 1)]), free(&[(2, 1)])]);
        assert!(check(&s, &free(&[(0, 3)])).is_member());
        assert!(check(&s, &FreeWord::identity().into()).is_member());
        // x2 x0 passes the abelian test but has no cancellation-free split.
        assert!(matches!(
            check(&s, &free(&[(2, 1), (0, 1)])),
            Membership::Unknown { .. }
        ));
    }

    #[test]
    fn conjugate_closure_search() {
        let s = DefSet::conj_closure(DefSet::product(vec![d(0), d(2)]));
        // x1^-1 (x0 x2) x1
        let g = free(&[(1, -1), (0, 1), (2, 1), (1, 1)]);
        assert!(check(&s, &g).is_member());
        // x2 x0 is a rotation of x0 x2.
        assert!(check(&s, &free(&[(2, 1), (0, 1)])).is_member());
        let s2 = DefSet::power(s, 2);
        let g2 = free(&[(1, -1), (0, 1), (2, 1), (1, 1), (0, 2)]);
        assert!(check(&s2, &g2).is_member());
    }

    #[test]
    fn power_set_exact() {
        assert!(check(&d(3), &free(&[(3, 4)])).is_member());
        assert!(check(&d(3), &free(&[(3, -4)])).is_non_member());
        assert!(check(&d(3), &free(&[(2, 4)])).is_non_member());
        assert!(check(&d(3), &FreeWord::identity().into()).is_member());
    }

    #[test]
    fn context_mismatch() {
        assert!(matches!(
            defset_membership(&d(0), &kb(0, 0)),
            Err(PatternError::ContextMismatch { .. })
        ));
    }

    #[test]
    fn forged_witness_rejected() {
        let s = DefSet::product(vec![d(0), d(2)]);
        let g = free(&[(0, 1), (2, 1)]);
        let forged = MemberWitness::Factorization {
            factors: vec![free(&[(0, 1)]), free(&[(2, 2)])],
            parts: vec![
                MemberWitness::GeneratorPower {
                    exponent: BigInt::from(1),
                },
                MemberWitness::GeneratorPower {
                    exponent: BigInt::from(2),
                },
            ],
        };
        assert!(!forged.validate(&s, &g));
    }
}
