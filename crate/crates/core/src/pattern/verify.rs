use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::membership::{defset_membership_with, MemberWitness, Membership, DEFAULT_BUDGET};
use super::row::{
    cell_samples, certify_disjoint, row_inconsistency_check, validate_row_certificate,
    Disjointness, RowCertificate, RowCheck,
};
use super::{DefSet, GroupContext, GroupElement, PatternError, Row};
use crate::group::KbElement;

/// A suggested witness for one path of the grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathHint {
    pub path: Vec<usize>,
    pub element: GroupElement,
}

/// Rows of cells plus optional witness hints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceData", into = "InstanceData")]
pub struct PatternInstance {
    rows: Vec<Row>,
    hints: Vec<PathHint>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct InstanceData {
    rows: Vec<Row>,
    #[serde(default)]
    hints: Vec<PathHint>,
}

impl TryFrom<InstanceData> for PatternInstance {
    type Error = PatternError;

    fn try_from(d: InstanceData) -> Result<Self, Self::Error> {
        PatternInstance::new(d.rows, d.hints)
    }
}

impl From<PatternInstance> for InstanceData {
    fn from(p: PatternInstance) -> Self {
        InstanceData {
            rows: p.rows,
            hints: p.hints,
        }
    }
}

impl PatternInstance {
    pub fn new(rows: Vec<Row>, hints: Vec<PathHint>) -> Result<Self, PatternError> {
        if rows.is_empty() {
            return Err(PatternError::InvalidPattern(
                "depth must be at least 1".into(),
            ));
        }
        let ctx = rows[0].cells()[0].context();
        if rows.iter().any(|r| r.cells()[0].context() != ctx) {
            return Err(PatternError::InvalidPattern(
                "rows live in different groups".into(),
            ));
        }
        let p = PatternInstance { rows, hints };
        let grid = p.grid();
        for h in &p.hints {
            if h.path.len() != grid.len() || h.path.iter().zip(&grid).any(|(j, n)| j >= n) {
                return Err(PatternError::InvalidPattern(format!(
                    "hint path {:?} outside grid {grid:?}",
                    h.path
                )));
            }
        }
        Ok(p)
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn hints(&self) -> &[PathHint] {
        &self.hints
    }

    pub fn depth(&self) -> usize {
        self.rows.len()
    }

    /// Column count of each row.
    pub fn grid(&self) -> Vec<usize> {
        self.rows.iter().map(Row::len).collect()
    }

    pub fn path_count(&self) -> usize {
        self.grid().iter().product()
    }

    /// The group the cells live in, when it is determined.
    pub fn context(&self) -> Option<GroupContext> {
        self.rows[0].cells()[0].context()
    }

    /// The sub-pattern on the first `rows` rows, each cut to its first
    /// `cols` columns. `None` if nothing valid remains.
    pub fn restrict(&self, rows: usize, cols: usize) -> Option<PatternInstance> {
        let rows: Vec<Row> = self
            .rows
            .iter()
            .take(rows)
            .map(|r| r.truncated(cols))
            .collect::<Option<_>>()?;
        let grid: Vec<usize> = rows.iter().map(Row::len).collect();
        let hints = self
            .hints
            .iter()
            .filter(|h| h.path[..grid.len()].iter().zip(&grid).all(|(j, n)| j < n))
            .map(|h| PathHint {
                path: h.path[..grid.len()].to_vec(),
                element: h.element.clone(),
            })
            .collect();
        PatternInstance::new(rows, hints).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    Hint,
    Search,
}

/// An element lying in every chosen cell of a path, with one membership
/// witness per row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathWitness {
    pub path: Vec<usize>,
    pub element: GroupElement,
    pub memberships: Vec<MemberWitness>,
    pub source: WitnessSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    /// `element` lies in `row`'s cells `cells`, so the row is not
    /// inconsistent.
    RowNotInconsistent {
        row: usize,
        cells: Vec<usize>,
        element: GroupElement,
    },
    /// The chosen cells of `rows.0` and `rows.1` along `path` are disjoint.
    UnsatisfiablePath {
        path: Vec<usize>,
        rows: (usize, usize),
        reason: Disjointness,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Verified {
        row_certificates: Vec<RowCertificate>,
        witnesses: Vec<PathWitness>,
    },
    Refuted {
        reason: Refutation,
    },
    Unknown {
        inconclusive: Vec<String>,
    },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Verified { .. } => "verified",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Half-width of the Klein-bottle box searched when no hint works.
    pub search_radius: u32,
    /// Also require each path witness to avoid the non-chosen cells.
    pub ict: bool,
    /// Membership search budget per query.
    pub membership_budget: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            search_radius: 8,
            ict: false,
            membership_budget: DEFAULT_BUDGET,
        }
    }
}

/// Verifies a pattern with default options.
pub fn verify_pattern(p: &PatternInstance) -> Verdict {
    verify_pattern_with(p, &VerifyOptions::default())
}

fn decode(mut index: usize, grid: &[usize]) -> Vec<usize> {
    let mut path = vec![0; grid.len()];
    for (slot, &n) in path.iter_mut().zip(grid).rev() {
        *slot = index % n;
        index /= n;
    }
    path
}

enum PathOutcome {
    Witness(PathWitness),
    Empty(Refutation),
    Open(String),
}

/// Checks every row for certified inconsistency and finds a witness for
/// every path of the grid, evaluating paths in parallel.
///
/// A path is tried with its hint first, then with sample elements of its
/// cells, then (for the Klein bottle group) with a box search. A path with
/// no witness is refuted only if two of its cells are provably disjoint.
pub fn verify_pattern_with(p: &PatternInstance, opts: &VerifyOptions) -> Verdict {
    let checks: Vec<RowCheck> = p.rows.par_iter().map(row_inconsistency_check).collect();
    let mut inconclusive = Vec::new();
    let mut certificates = Vec::new();
    for (i, check) in checks.into_iter().enumerate() {
        match check {
            RowCheck::Certified { certificate } => certificates.push(certificate),
            RowCheck::Refuted { cells, element } => {
                return Verdict::Refuted {
                    reason: Refutation::RowNotInconsistent {
                        row: i,
                        cells,
                        element,
                    },
                };
            }
            RowCheck::Unknown { reason } => inconclusive.push(format!("row {i}: {reason}")),
        }
    }

    let grid = p.grid();
    let hints: HashMap<&[usize], &GroupElement> = p
        .hints
        .iter()
        .map(|h| (h.path.as_slice(), &h.element))
        .collect();
    let outcomes: Vec<PathOutcome> = (0..p.path_count())
        .into_par_iter()
        .map(|index| {
            let path = decode(index, &grid);
            let hint = hints.get(path.as_slice()).copied();
            evaluate_path(p, &path, hint, opts)
        })
        .collect();

    let mut witnesses = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        match outcome {
            PathOutcome::Witness(w) => witnesses.push(w),
            PathOutcome::Empty(reason) => return Verdict::Refuted { reason },
            PathOutcome::Open(msg) => inconclusive.push(msg),
        }
    }
    if inconclusive.is_empty() {
        Verdict::Verified {
            row_certificates: certificates,
            witnesses,
        }
    } else {
        Verdict::Unknown { inconclusive }
    }
}

fn evaluate_path(
    p: &PatternInstance,
    path: &[usize],
    hint: Option<&GroupElement>,
    opts: &VerifyOptions,
) -> PathOutcome {
    if let Some(w) = hint.and_then(|g| path_witness(p, path, g, WitnessSource::Hint, opts)) {
        return PathOutcome::Witness(w);
    }
    let cells: Vec<&DefSet> = p
        .rows
        .iter()
        .zip(path)
        .map(|(r, &j)| &r.cells()[j])
        .collect();
    let samples = cells.iter().flat_map(|c| cell_samples(c));
    for g in samples {
        if let Some(w) = path_witness(p, path, &g, WitnessSource::Search, opts) {
            return PathOutcome::Witness(w);
        }
    }
    if p.context() == Some(GroupContext::KleinBottle) {
        let r = i64::from(opts.search_radius);
        for n in -r..=r {
            for m in -r..=r {
                let g = GroupElement::Kb(KbElement::new(n, m));
                if let Some(w) = path_witness(p, path, &g, WitnessSource::Search, opts) {
                    return PathOutcome::Witness(w);
                }
            }
        }
    }
    for a in 0..cells.len() {
        for b in a + 1..cells.len() {
            if let Some(reason) = certify_disjoint(cells[a], cells[b]) {
                return PathOutcome::Empty(Refutation::UnsatisfiablePath {
                    path: path.to_vec(),
                    rows: (a, b),
                    reason,
                });
            }
        }
    }
    PathOutcome::Open(format!("path {path:?}: no witness found"))
}

fn path_witness(
    p: &PatternInstance,
    path: &[usize],
    g: &GroupElement,
    source: WitnessSource,
    opts: &VerifyOptions,
) -> Option<PathWitness> {
    let mut memberships = Vec::with_capacity(path.len());
    for (row, &j) in p.rows.iter().zip(path) {
        match defset_membership_with(&row.cells()[j], g, opts.membership_budget) {
            Ok(Membership::Member { witness }) => memberships.push(witness),
            _ => return None,
        }
        if opts.ict {
            let avoids_rest =
                row.cells()
                    .iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .all(|(_, cell)| {
                        matches!(
                            defset_membership_with(cell, g, opts.membership_budget),
                            Ok(Membership::NonMember { .. })
                        )
                    });
            if !avoids_rest {
                return None;
            }
        }
    }
    Some(PathWitness {
        path: path.to_vec(),
        element: g.clone(),
        memberships,
        source,
    })
}

/// Independently re-checks a verdict against the pattern.
///
/// For `Verified`: every row certificate is re-validated, the witnesses
/// cover the grid exactly once, and every witness is re-evaluated through
/// membership and its membership proofs re-validated. For `Refuted`: the
/// co-satisfying element or the disjointness proof is re-checked. `Unknown`
/// carries no claim and always passes.
pub fn check_verdict(
    p: &PatternInstance,
    verdict: &Verdict,
    opts: &VerifyOptions,
) -> Result<(), String> {
    match verdict {
        Verdict::Verified {
            row_certificates,
            witnesses,
        } => {
            if row_certificates.len() != p.depth() {
                return Err(format!(
                    "{} row certificates for depth {}",
                    row_certificates.len(),
                    p.depth()
                ));
            }
            for (i, (row, cert)) in p.rows.iter().zip(row_certificates).enumerate() {
                if !validate_row_certificate(row, cert) {
                    return Err(format!("row {i}: certificate does not validate"));
                }
            }
            let grid = p.grid();
            if witnesses.len() != p.path_count() {
                return Err(format!(
                    "{} witnesses for {} paths",
                    witnesses.len(),
                    p.path_count()
                ));
            }
            let mut seen = std::collections::HashSet::new();
            witnesses
                .par_iter()
                .try_for_each(|w| check_witness(p, &grid, w, opts))?;
            for w in witnesses {
                if !seen.insert(&w.path) {
                    return Err(format!("path {:?} has two witnesses", w.path));
                }
            }
            Ok(())
        }
        Verdict::Refuted {
            reason:
                Refutation::RowNotInconsistent {
                    row,
                    cells,
                    element,
                },
        } => {
            let r = p.rows.get(*row).ok_or("row index out of range")?;
            let mut distinct = cells.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() < r.k() {
                return Err(format!(
                    "{} cells listed, bound is {}",
                    distinct.len(),
                    r.k()
                ));
            }
            for &c in &distinct {
                let cell = r.cells().get(c).ok_or("cell index out of range")?;
                let res = defset_membership_with(cell, element, opts.membership_budget)
                    .map_err(|e| e.to_string())?;
                match res {
                    Membership::Member { witness } if witness.validate(cell, element) => {}
                    _ => return Err(format!("{element} is not a member of cell {c}")),
                }
            }
            Ok(())
        }
        Verdict::Refuted {
            reason: Refutation::UnsatisfiablePath { path, rows, reason },
        } => {
            let grid = p.grid();
            if path.len() != grid.len() || path.iter().zip(&grid).any(|(j, n)| j >= n) {
                return Err(format!("path {path:?} outside grid"));
            }
            let (a, b) = *rows;
            if a == b || a >= grid.len() || b >= grid.len() {
                return Err("bad row pair".into());
            }
            let (ca, cb) = (&p.rows[a].cells()[path[a]], &p.rows[b].cells()[path[b]]);
            if reason.validate(ca, cb) {
                Ok(())
            } else {
                Err("disjointness proof does not validate".into())
            }
        }
        Verdict::Unknown { .. } => Ok(()),
    }
}

fn check_witness(
    p: &PatternInstance,
    grid: &[usize],
    w: &PathWitness,
    opts: &VerifyOptions,
) -> Result<(), String> {
    if w.path.len() != grid.len() || w.path.iter().zip(grid).any(|(j, n)| j >= n) {
        return Err(format!("path {:?} outside grid", w.path));
    }
    if w.memberships.len() != grid.len() {
        return Err(format!(
            "path {:?}: wrong number of membership proofs",
            w.path
        ));
    }
    for ((row, &j), proof) in p.rows.iter().zip(&w.path).zip(&w.memberships) {
        let cell = &row.cells()[j];
        let res = defset_membership_with(cell, &w.element, opts.membership_budget)
            .map_err(|e| e.to_string())?;
        if !res.is_member() || !proof.validate(cell, &w.element) {
            return Err(format!(
                "path {:?}: {} not certified in cell {j}",
                w.path, w.element
            ));
        }
    }
    Ok(())
}
