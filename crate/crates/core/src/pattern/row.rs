use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::membership::{defset_membership, Membership, NonMemberCert};
use super::shadow::{abelian_shadow, IntRange};
use super::{DefSet, GroupElement, PatternError};
use crate::group::{FreeWord, KbElement};

/// One formula of a pattern: a family of cells indexed by parameters, with a
/// claimed inconsistency bound `k`.
///
/// `params[j]` records the parameter tuple that produced `cells[j]`; the
/// cells themselves are stored materialized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RowData", into = "RowData")]
pub struct Row {
    family: String,
    params: Vec<Vec<GroupElement>>,
    cells: Vec<DefSet>,
    k: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RowData {
    family: String,
    params: Vec<Vec<GroupElement>>,
    cells: Vec<DefSet>,
    k: usize,
}

impl TryFrom<RowData> for Row {
    type Error = PatternError;

    fn try_from(d: RowData) -> Result<Self, Self::Error> {
        Row::new(d.family, d.params, d.cells, d.k)
    }
}

impl From<Row> for RowData {
    fn from(r: Row) -> Self {
        RowData {
            family: r.family,
            params: r.params,
            cells: r.cells,
            k: r.k,
        }
    }
}

impl Row {
    pub fn new(
        family: impl Into<String>,
        params: Vec<Vec<GroupElement>>,
        cells: Vec<DefSet>,
        k: usize,
    ) -> Result<Self, PatternError> {
        if cells.len() < 2 {
            return Err(PatternError::InvalidRow(format!(
                "{} cells, need at least 2",
                cells.len()
            )));
        }
        if params.len() != cells.len() {
            return Err(PatternError::InvalidRow(format!(
                "{} parameter tuples for {} cells",
                params.len(),
                cells.len()
            )));
        }
        if k < 2 {
            return Err(PatternError::InvalidRow(format!(
                "inconsistency bound {k} < 2"
            )));
        }
        for (a, pa) in params.iter().enumerate() {
            if let Some(b) = params[a + 1..].iter().position(|pb| pb == pa) {
                return Err(PatternError::InvalidRow(format!(
                    "parameters of columns {a} and {} coincide",
                    a + 1 + b
                )));
            }
        }
        let ctx = cells[0].context();
        if let Some(j) = cells.iter().position(|c| c.context() != ctx) {
            return Err(PatternError::InvalidRow(format!(
                "column {j} lives in another group"
            )));
        }
        Ok(Row {
            family: family.into(),
            params,
            cells,
            k,
        })
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn params(&self) -> &[Vec<GroupElement>] {
        &self.params
    }

    pub fn cells(&self) -> &[DefSet] {
        &self.cells
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The first `cols` columns, or `None` if that leaves fewer than two.
    pub fn truncated(&self, cols: usize) -> Option<Row> {
        let cols = cols.min(self.len());
        (cols >= 2).then(|| Row {
            family: self.family.clone(),
            params: self.params[..cols].to_vec(),
            cells: self.cells[..cols].to_vec(),
            k: self.k,
        })
    }
}

/// A proof that two cells have empty intersection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Disjointness {
    /// One interval ends strictly below the other's start.
    IntervalsSeparated {
        upper_start: KbElement,
        lower_end: KbElement,
    },
    /// Right cosets of one subgroup with `rep_a rep_b^-1` outside it.
    DistinctCosets { difference: KbElement },
    /// Every member of one set has `generator`-exponent-sum in `left`, every
    /// member of the other in `right`, and the ranges are disjoint.
    AbelianSeparation {
        generator: usize,
        left: IntRange,
        right: IntRange,
    },
    /// One set is a singleton whose element is certified outside the other.
    SingletonOutside { certificate: NonMemberCert },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCertificate {
    pub cells: (usize, usize),
    pub reason: Disjointness,
}

/// Certified `k`-inconsistency: every `k`-subset of the row contains a
/// certified disjoint pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCertificate {
    pub k: usize,
    pub pairs: Vec<PairCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RowCheck {
    Certified {
        certificate: RowCertificate,
    },
    /// `element` lies in all of the listed (`k` distinct) cells.
    Refuted {
        cells: Vec<usize>,
        element: GroupElement,
    },
    Unknown {
        reason: String,
    },
}

impl RowCheck {
    pub fn is_certified(&self) -> bool {
        matches!(self, RowCheck::Certified { .. })
    }
}

/// Tries to prove `a ∩ b = ∅`.
pub(crate) fn certify_disjoint(a: &DefSet, b: &DefSet) -> Option<Disjointness> {
    match (a, b) {
        (DefSet::Interval { interval: i }, DefSet::Interval { interval: j }) => {
            let (lower, upper) = if i.hi() < j.lo() {
                (i, j)
            } else if j.hi() < i.lo() {
                (j, i)
            } else {
                return None;
            };
            Some(Disjointness::IntervalsSeparated {
                upper_start: upper.lo().clone(),
                lower_end: lower.hi().clone(),
            })
        }
        (DefSet::Coset { coset: c }, DefSet::Coset { coset: d }) => match c.same_as(d) {
            Some(false) => Some(Disjointness::DistinctCosets {
                difference: &c.rep * &d.rep.inv(),
            }),
            _ => None,
        },
        (DefSet::Singleton { element }, other) | (other, DefSet::Singleton { element }) => {
            match defset_membership(other, element) {
                Ok(Membership::NonMember { certificate }) => {
                    Some(Disjointness::SingletonOutside { certificate })
                }
                _ => None,
            }
        }
        _ => {
            let (sa, sb) = (abelian_shadow(a)?, abelian_shadow(b)?);
            let generator = sa.separating_generator(&sb)?;
            Some(Disjointness::AbelianSeparation {
                generator,
                left: sa.range(generator),
                right: sb.range(generator),
            })
        }
    }
}

impl Disjointness {
    /// Re-derives the disjointness claim for `a` and `b` from scratch.
    pub fn validate(&self, a: &DefSet, b: &DefSet) -> bool {
        match self {
            Disjointness::IntervalsSeparated {
                upper_start,
                lower_end,
            } => match (a, b) {
                (DefSet::Interval { interval: i }, DefSet::Interval { interval: j }) => {
                    let ordered = |lo: &crate::order::KbInterval, hi: &crate::order::KbInterval| {
                        lo.hi() == lower_end && hi.lo() == upper_start && lower_end < upper_start
                    };
                    ordered(i, j) || ordered(j, i)
                }
                _ => false,
            },
            Disjointness::DistinctCosets { difference } => match (a, b) {
                (DefSet::Coset { coset: c }, DefSet::Coset { coset: d }) => {
                    c.subgroup == d.subgroup
                        && &(&c.rep * &d.rep.inv()) == difference
                        && !c.subgroup.contains(difference)
                }
                _ => false,
            },
            Disjointness::AbelianSeparation {
                generator,
                left,
                right,
            } => match (abelian_shadow(a), abelian_shadow(b)) {
                (Some(sa), Some(sb)) => {
                    &sa.range(*generator) == left
                        && &sb.range(*generator) == right
                        && left.is_disjoint(right)
                }
                _ => false,
            },
            Disjointness::SingletonOutside { .. } => {
                let outside = |s: &DefSet, other: &DefSet| match s {
                    DefSet::Singleton { element } => {
                        matches!(
                            defset_membership(other, element),
                            Ok(Membership::NonMember { .. })
                        )
                    }
                    _ => false,
                };
                outside(a, b) || outside(b, a)
            }
        }
    }
}

/// Decides whether no element lies in `k` cells of the row.
///
/// Every pair of cells is first tried for an exact disjointness proof. The
/// row is certified when the pairs left unproven contain no `k`-clique;
/// otherwise candidate elements drawn from the cells and their pairwise
/// intersections are tested for membership in `k` cells.
#[allow(clippy::needless_range_loop)]
pub fn row_inconsistency_check(r: &Row) -> RowCheck {
    let n = r.cells.len();
    let mut pairs = Vec::new();
    let mut open = vec![vec![false; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            match certify_disjoint(&r.cells[a], &r.cells[b]) {
                Some(reason) => pairs.push(PairCertificate {
                    cells: (a, b),
                    reason,
                }),
                None => {
                    open[a][b] = true;
                    open[b][a] = true;
                }
            }
        }
    }
    let Some(clique) = find_clique(&open, r.k) else {
        return RowCheck::Certified {
            certificate: RowCertificate { k: r.k, pairs },
        };
    };

    for candidate in refutation_candidates(r, &open) {
        let hits: Vec<usize> = (0..n)
            .filter(|&j| {
                matches!(
                    defset_membership(&r.cells[j], &candidate),
                    Ok(Membership::Member { .. })
                )
            })
            .collect();
        if hits.len() >= r.k {
            return RowCheck::Refuted {
                cells: hits[..r.k].to_vec(),
                element: candidate,
            };
        }
    }
    RowCheck::Unknown {
        reason: format!(
            "cells {clique:?} are not provably disjoint and no common element was found"
        ),
    }
}

/// Re-checks a row certificate: every pair proof holds and the unproven
/// pairs contain no `k`-clique.
pub(crate) fn validate_row_certificate(r: &Row, cert: &RowCertificate) -> bool {
    let n = r.cells.len();
    if cert.k != r.k {
        return false;
    }
    let mut open = vec![vec![true; n]; n];
    for p in &cert.pairs {
        let (a, b) = p.cells;
        if a >= n || b >= n || a == b || !p.reason.validate(&r.cells[a], &r.cells[b]) {
            return false;
        }
        open[a][b] = false;
        open[b][a] = false;
    }
    find_clique(&open, r.k).is_none()
}

fn find_clique(adj: &[Vec<bool>], k: usize) -> Option<Vec<usize>> {
    fn extend(adj: &[Vec<bool>], k: usize, chosen: &mut Vec<usize>, from: usize) -> bool {
        if chosen.len() == k {
            return true;
        }
        for v in from..adj.len() {
            if chosen.iter().all(|&u| adj[u][v]) {
                chosen.push(v);
                if extend(adj, k, chosen, v + 1) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    extend(adj, k, &mut chosen, 0).then_some(chosen)
}

#[allow(clippy::needless_range_loop)]
fn refutation_candidates(r: &Row, open: &[Vec<bool>]) -> Vec<GroupElement> {
    let mut out = Vec::new();
    let n = r.cells.len();
    for a in 0..n {
        for b in a + 1..n {
            if open[a][b] {
                out.extend(intersection_samples(&r.cells[a], &r.cells[b]));
            }
        }
    }
    for c in &r.cells {
        out.extend(cell_samples(c));
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|g| seen.insert(g.clone()));
    out
}

fn intersection_samples(a: &DefSet, b: &DefSet) -> Vec<GroupElement> {
    match (a, b) {
        (DefSet::Interval { interval: i }, DefSet::Interval { interval: j }) => i
            .intersection(j)
            .map(|m| {
                vec![
                    m.center().into(),
                    m.lo().clone().into(),
                    m.hi().clone().into(),
                ]
            })
            .unwrap_or_default(),
        (DefSet::Coset { coset: c }, DefSet::Coset { coset: d }) if c.same_as(d) == Some(true) => {
            vec![c.rep.clone().into()]
        }
        _ => Vec::new(),
    }
}

/// A few elements that are likely members of `s`.
pub(crate) fn cell_samples(s: &DefSet) -> Vec<GroupElement> {
    match s {
        DefSet::Interval { interval } => vec![
            interval.center().into(),
            interval.lo().clone().into(),
            interval.hi().clone().into(),
        ],
        DefSet::Coset { coset } => vec![coset.rep.clone().into()],
        DefSet::Singleton { element } => vec![element.clone()],
        DefSet::PowerSet {
            generator,
            exponents,
        } => {
            let zero = BigInt::from(0);
            let e = if exponents.contains(&zero) {
                Some(zero)
            } else {
                exponents.lo.clone().or_else(|| exponents.hi.clone())
            };
            e.map(|e| FreeWord::power(*generator, e).into())
                .into_iter()
                .collect()
        }
        DefSet::Translate { set, by, side } => cell_samples(set)
            .into_iter()
            .filter_map(|g| match side {
                super::Side::Left => by.mul(&g),
                super::Side::Right => g.mul(by),
            })
            .collect(),
        DefSet::Product { factors } => {
            let Some(ctx) = s.context() else {
                return Vec::new();
            };
            factors
                .iter()
                .try_fold(GroupElement::identity(ctx), |acc, f| {
                    cell_samples(f).first().and_then(|g| acc.mul(g))
                })
                .into_iter()
                .collect()
        }
        DefSet::ConjClosure { set } => cell_samples(set),
        DefSet::Power { set, k } => {
            let Some(ctx) = s.context() else {
                return Vec::new();
            };
            cell_samples(set)
                .first()
                .and_then(|g| (0..*k).try_fold(GroupElement::identity(ctx), |acc, _| acc.mul(g)))
                .into_iter()
                .collect()
        }
    }
}
