use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::shadow::{abelian_shadow, IntRange};
use super::{DefSet, ExponentRange, PathHint, PatternError, PatternInstance, Row};
use crate::group::{abelianize, FreeWord, KbElement, KbSubgroup};
use crate::order::{interval_construct, RightCoset};

/// The depth-2 Klein-bottle pattern.
///
/// Row 0 holds the intervals `I_{j_cols-1,k} = [x^k, x^k y^(j_cols-1)]` for
/// `k < n_cols`, row 1 the right cosets `<x> y^j` for `j < j_cols`. Path
/// `(k, j)` is hinted with `x^k y^j`.
pub fn build_kb_depth2(n_cols: u64, j_cols: u64) -> Result<PatternInstance, PatternError> {
    if n_cols < 2 || j_cols < 2 {
        return Err(PatternError::Precondition(format!(
            "need n_cols, j_cols >= 2, got ({n_cols}, {j_cols})"
        )));
    }
    let intervals: Vec<_> = (0..n_cols)
        .map(|k| interval_construct(j_cols - 1, k).0)
        .collect();
    let interval_row = Row::new(
        "interval",
        intervals
            .iter()
            .map(|i| vec![i.lo().clone().into(), i.hi().clone().into()])
            .collect(),
        intervals.into_iter().map(DefSet::interval).collect(),
        2,
    )?;
    let reps: Vec<KbElement> = (0..j_cols).map(|j| KbElement::new(0, j)).collect();
    let coset_row = Row::new(
        "coset",
        reps.iter().map(|r| vec![r.clone().into()]).collect(),
        reps.into_iter()
            .map(|r| DefSet::coset(RightCoset::new(KbSubgroup::x_axis(), r)))
            .collect(),
        2,
    )?;
    let mut hints = Vec::new();
    for k in 0..n_cols {
        for j in 0..j_cols {
            hints.push(PathHint {
                path: vec![k as usize, j as usize],
                element: KbElement::new(k, j).into(),
            });
        }
    }
    PatternInstance::new(vec![interval_row, coset_row], hints)
}

fn d(i: usize) -> DefSet {
    DefSet::power_set(i, ExponentRange::naturals())
}

fn e(i: usize, j: usize) -> FreeWord {
    FreeWord::power(i, j + 1)
}

/// The free-group chain pattern of depth `n + 1` over `x_0, ..., x_n`.
///
/// Row `i` has the cells `D_0 ... D_{i-1} {x_i^(j+1)} D_{i+1} ... D_n` for
/// `j < cols`, where `D_l = {x_l^m : m >= 0}`. Path `η` is hinted with
/// `x_0^(η(0)+1) ... x_n^(η(n)+1)`.
pub fn build_free_chain_pattern(n: usize, cols: usize) -> Result<PatternInstance, PatternError> {
    if n < 1 || cols < 2 {
        return Err(PatternError::Precondition(format!(
            "need n >= 1 and cols >= 2, got ({n}, {cols})"
        )));
    }
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let cell = |j: usize| {
            let factors = (0..=n)
                .map(|l| {
                    if l == i {
                        DefSet::singleton(e(i, j))
                    } else {
                        d(l)
                    }
                })
                .collect();
            DefSet::product(factors)
        };
        rows.push(Row::new(
            format!("chain[{i}]"),
            (0..cols).map(|j| vec![e(i, j).into()]).collect(),
            (0..cols).map(cell).collect(),
            2,
        )?);
    }
    let total = cols.pow(n as u32 + 1);
    let mut hints = Vec::with_capacity(total);
    for index in 0..total {
        let mut path = vec![0; n + 1];
        let mut rest = index;
        for slot in path.iter_mut().rev() {
            *slot = rest % cols;
            rest /= cols;
        }
        let element = path
            .iter()
            .enumerate()
            .fold(FreeWord::identity(), |acc, (i, &j)| &acc * &e(i, j));
        hints.push(PathHint {
            path,
            element: element.into(),
        });
    }
    PatternInstance::new(rows, hints)
}

/// `((D_0 ... D_{i-1} D_{i+1} ... D_n)^G)^(2n)`: the `2n`-th power of the
/// conjugate closure of the product omitting `D_i`.
pub fn chain_set(n: usize, i: usize) -> DefSet {
    let factors = (0..=n).filter(|&l| l != i).map(d).collect();
    DefSet::power(DefSet::conj_closure(DefSet::product(factors)), 2 * n as u32)
}

/// Certificate that `x_i^m0 x_i^-m1` is outside [`chain_set`]`(n, i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCertificate {
    pub n: usize,
    pub i: usize,
    pub element: FreeWord,
    /// The `x_i`-exponent sum of `element`, `m0 - m1`.
    #[serde(with = "crate::intser")]
    pub gap: BigInt,
    /// The `x_i`-exponent sums attainable in the set.
    pub allowed: IntRange,
}

impl ChainCertificate {
    pub fn verify(&self) -> bool {
        let set = chain_set(self.n, self.i);
        let Some(shadow) = abelian_shadow(&set) else {
            return false;
        };
        abelianize(&self.element).get(self.i) == self.gap
            && shadow.range(self.i) == self.allowed
            && !self.allowed.contains(&self.gap)
    }
}

pub fn chain_nonmembership_certificate(
    n: usize,
    i: usize,
    m0: i64,
    m1: i64,
) -> Result<ChainCertificate, PatternError> {
    if i > n {
        return Err(PatternError::Precondition(format!(
            "generator index {i} exceeds {n}"
        )));
    }
    if m0 == m1 {
        return Err(PatternError::Precondition(format!(
            "exponents coincide ({m0})"
        )));
    }
    let element = &FreeWord::power(i, m0) * &FreeWord::power(i, -m1);
    let shadow = abelian_shadow(&chain_set(n, i)).expect("free-group set has a shadow");
    let cert = ChainCertificate {
        n,
        i,
        gap: abelianize(&element).get(i),
        element,
        allowed: shadow.range(i),
    };
    if cert.verify() {
        Ok(cert)
    } else {
        Err(PatternError::Precondition(
            "abelian shadow does not separate".into(),
        ))
    }
}
