//! Exact computations in left-ordered groups.
//!
//! The crate covers three concrete groups and the machinery needed to
//! produce checkable witnesses about them:
//!
//! * [`group`]: the Klein bottle group `<x, y | x^-1 y x = y^-1>` in normal
//!   form `x^n y^m`, free groups on a growing alphabet with abelianization,
//!   a closed family of Klein-bottle subgroups, and a copy of the Klein bottle
//!   group interpreted in `(Z, <, +)`.
//! * [`order`]: the lexicographic left-order on the Klein bottle group,
//!   intervals, right cosets and coset covers of intervals.
//! * [`plaut`]: piecewise-linear order-automorphisms of the rationals with
//!   the left-order induced by a well-order of `Q`, and the certified
//!   counterexample showing that the convex hull of a cyclic subgroup need
//!   not be a subgroup.
//! * [`pattern`]: definable-set expressions, three-valued membership with
//!   certificates, and a finite-depth inp-pattern verifier.

#![allow(clippy::result_large_err)]

pub mod group;
pub mod order;
pub mod pattern;
pub mod plaut;

mod intser;

pub use group::{
    abelianize, kb_center_description, kb_centralizer_membership, kb_inv, kb_mul, kb_pow,
    AbelianVector, AffineAction, FreeWord, KbElement, KbSubgroup,
};
pub use order::{kb_compare, KbInterval, RightCoset};
